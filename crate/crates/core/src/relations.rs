//! Relation families as pairs of symbolic sides.
//!
//! Each family is built from its parameters into a [`RelationInstance`]: two
//! sides and the value space (ζ, ζ*, ζ_A or ζ_A*) in which the sides are
//! asserted equal. Builders are purely structural; constants such as `Z(k)`
//! with even `k` are kept even where a backend will evaluate them to zero.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{harmonic_indices, shuffle_indices, LinComb, LinearMap, Term};
use crate::combinatorics::{binom, compositions, ohno_coefficient, OhnoKind};
use crate::error::{Error, Result};
use crate::index::{self, Index};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueSpace {
    RealZeta,
    RealZetaStar,
    FiniteZeta,
    FiniteZetaStar,
}

impl ValueSpace {
    pub fn is_real(self) -> bool {
        matches!(self, ValueSpace::RealZeta | ValueSpace::RealZetaStar)
    }

    pub fn is_star(self) -> bool {
        matches!(self, ValueSpace::RealZetaStar | ValueSpace::FiniteZetaStar)
    }

    pub fn name(self) -> &'static str {
        match self {
            ValueSpace::RealZeta => "real_zeta",
            ValueSpace::RealZetaStar => "real_zeta_star",
            ValueSpace::FiniteZeta => "finite_zeta",
            ValueSpace::FiniteZetaStar => "finite_zeta_star",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    SumClassical,
    SumClassicalStar,
    DualityClassical,
    Ohno,
    OhnoStar,
    KawashimaLinear,
    Lemma24,
    SumFinite,
    SumFiniteStar,
    DualityFinite,
    Oyama,
    OhnoStarFinite,
    Lemma25,
    StarOnes,
    HarmonicHom,
    StarDepth2,
}

impl Family {
    pub const ALL: [Family; 16] = [
        Family::SumClassical,
        Family::SumClassicalStar,
        Family::DualityClassical,
        Family::Ohno,
        Family::OhnoStar,
        Family::KawashimaLinear,
        Family::Lemma24,
        Family::SumFinite,
        Family::SumFiniteStar,
        Family::DualityFinite,
        Family::Oyama,
        Family::OhnoStarFinite,
        Family::Lemma25,
        Family::StarOnes,
        Family::HarmonicHom,
        Family::StarDepth2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::SumClassical => "sum_classical",
            Family::SumClassicalStar => "sum_classical_star",
            Family::DualityClassical => "duality_classical",
            Family::Ohno => "ohno",
            Family::OhnoStar => "ohno_star",
            Family::KawashimaLinear => "kawashima_linear",
            Family::Lemma24 => "lemma24",
            Family::SumFinite => "sum_finite",
            Family::SumFiniteStar => "sum_finite_star",
            Family::DualityFinite => "duality_finite",
            Family::Oyama => "oyama",
            Family::OhnoStarFinite => "ohno_star_finite",
            Family::Lemma25 => "lemma25",
            Family::StarOnes => "star_ones",
            Family::HarmonicHom => "harmonic_hom",
            Family::StarDepth2 => "star_depth2",
        }
    }

    pub fn value_space(self) -> ValueSpace {
        use Family::*;
        match self {
            SumClassical | DualityClassical | Ohno => ValueSpace::RealZeta,
            SumClassicalStar | OhnoStar | KawashimaLinear | Lemma24 => ValueSpace::RealZetaStar,
            SumFinite | Oyama => ValueSpace::FiniteZeta,
            SumFiniteStar | DualityFinite | OhnoStarFinite | Lemma25 | StarOnes | HarmonicHom
            | StarDepth2 => ValueSpace::FiniteZetaStar,
        }
    }

    pub fn real() -> impl Iterator<Item = Family> {
        Family::ALL
            .into_iter()
            .filter(|f| f.value_space().is_real())
    }

    pub fn finite() -> impl Iterator<Item = Family> {
        Family::ALL
            .into_iter()
            .filter(|f| !f.value_space().is_real())
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s.trim())
            .ok_or_else(|| Error::config(format!("unknown relation family {s:?}")))
    }
}

/// Family-specific parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Params {
    /// Sum formulas over all depth-`r` admissible indices of weight `k`.
    Weight {
        k: u32,
        r: u32,
    },
    /// Finite sum formulas with the slot `i` forced to be ≥ 2.
    WeightSlot {
        k: u32,
        r: u32,
        i: u32,
    },
    Index {
        k: Index,
    },
    IndexShift {
        k: Index,
        m: u32,
    },
    Pair {
        k: Index,
        l: Index,
    },
    Ones {
        i: u32,
    },
    Depth2 {
        k1: u32,
        k2: u32,
    },
}

impl Params {
    fn fields(&self) -> Vec<(&'static str, String)> {
        match self {
            Params::Weight { k, r } => vec![("k", k.to_string()), ("r", r.to_string())],
            Params::WeightSlot { k, r, i } => vec![
                ("k", k.to_string()),
                ("r", r.to_string()),
                ("i", i.to_string()),
            ],
            Params::Index { k } => vec![("k", k.to_string())],
            Params::IndexShift { k, m } => vec![("k", k.to_string()), ("m", m.to_string())],
            Params::Pair { k, l } => vec![("k", k.to_string()), ("l", l.to_string())],
            Params::Ones { i } => vec![("i", i.to_string())],
            Params::Depth2 { k1, k2 } => vec![("k", format!("{k1},{k2}"))],
        }
    }

    /// `k=…/m=…` fragment of the instance identifier.
    pub fn fragment(&self) -> String {
        self.fields()
            .into_iter()
            .map(|(name, value)| format!("{name}={value}"))
            .collect::<Vec<_>>()
            .join("/")
    }

    pub fn to_json(&self) -> Value {
        let map: serde_json::Map<String, Value> = self
            .fields()
            .into_iter()
            .map(|(name, value)| (name.to_string(), Value::String(value)))
            .collect();
        Value::Object(map)
    }
}

/// One side of a relation. `Product` is a formal product of evaluated factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Side {
    Linear(LinComb),
    Product(Vec<LinComb>),
}

impl Side {
    pub fn as_linear(&self) -> Option<&LinComb> {
        match self {
            Side::Linear(x) => Some(x),
            Side::Product(_) => None,
        }
    }

    pub fn max_weight(&self) -> u32 {
        match self {
            Side::Linear(x) => x.max_weight().unwrap_or(0),
            Side::Product(factors) => factors.iter().map(|f| f.max_weight().unwrap_or(0)).sum(),
        }
    }

    /// All terms across the side (factors included).
    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Side::Linear(x) => x.iter().map(|(t, _)| t).collect(),
            Side::Product(factors) => factors
                .iter()
                .flat_map(|f| f.iter().map(|(t, _)| t))
                .collect(),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Linear(x) => write!(f, "{x}"),
            Side::Product(factors) => {
                let parts: Vec<String> = factors.iter().map(|x| format!("[{x}]")).collect();
                f.write_str(&parts.join(" * "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationInstance {
    pub family: Family,
    pub params: Params,
    pub lhs: Side,
    pub rhs: Side,
    pub space: ValueSpace,
}

impl RelationInstance {
    /// Report key `family/k=…/m=…`.
    pub fn id(&self) -> String {
        format!("{}/{}", self.family.name(), self.params.fragment())
    }

    pub fn total_weight(&self) -> u32 {
        self.lhs.max_weight().max(self.rhs.max_weight())
    }

    pub fn summary_json(&self) -> Value {
        json!({
            "id": self.id(),
            "family": self.family.name(),
            "params": self.params.to_json(),
            "space": self.space.name(),
            "lhs": self.lhs.to_string(),
            "rhs": self.rhs.to_string(),
        })
    }
}

fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn binom_int(n: u32, k: u32) -> BigInt {
    BigInt::from(binom(n as u64, k as u64))
}

fn sign(exp: u32) -> BigInt {
    if exp.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn require(cond: bool, family: Family, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::domain(format!("{family}: {what}")))
    }
}

/// Σ over weight-`k`, depth-`r` indices with slot `slot` ≥ 2.
fn slot_sum(k: u32, r: u32, slot: u32) -> Result<LinComb> {
    let mut base = vec![1u32; r as usize];
    base[slot as usize - 1] = 2;
    let base = Index::new(base)?;
    let mut out = LinComb::zero();
    for e in compositions(k - r - 1, r as usize) {
        out.add_index(base.oplus(e.parts())?, BigRational::one());
    }
    Ok(out)
}

fn shifted_sum(k: &Index, m: u32, mut each: impl FnMut(Index) -> Result<Index>) -> Result<LinComb> {
    let mut out = LinComb::zero();
    for e in compositions(m, k.depth()) {
        out.add_index(each(k.oplus(e.parts())?)?, BigRational::one());
    }
    Ok(out)
}

fn coefficient_sum(kind: OhnoKind, k: &Index, m: u32) -> Result<LinComb> {
    let mut out = LinComb::zero();
    for e in compositions(m, k.depth()) {
        let c = ohno_coefficient(kind, k, &e)?;
        out.add_index(k.oplus(e.parts())?, int(BigInt::from(c)));
    }
    Ok(out)
}

fn p_of_dual(x: &LinComb) -> Result<LinComb> {
    x.map_linear(LinearMap::HoffmanDual)?
        .map_linear(LinearMap::RaiseLast)
}

/// Builds one instance of `family` from `params`.
pub fn build(family: Family, params: Params) -> Result<RelationInstance> {
    use Family as F;
    let (lhs, rhs) = match (family, &params) {
        (F::SumClassical | F::SumClassicalStar, &Params::Weight { k, r }) => {
            require(r >= 1 && k > r, family, "needs k ≥ r + 1 and r ≥ 1")?;
            let lhs = slot_sum(k, r, r)?;
            let coeff = if family == F::SumClassical {
                int(1)
            } else {
                int(binom_int(k - 1, r - 1))
            };
            let rhs = LinComb::term(Term::Idx(Index::of(&[k])), coeff);
            (lhs, rhs)
        }
        (F::SumFinite | F::SumFiniteStar, &Params::WeightSlot { k, r, i }) => {
            require(1 <= i && i <= r && r < k, family, "needs 1 ≤ i ≤ r ≤ k - 1")?;
            let lhs = slot_sum(k, r, i)?;
            let a = binom_int(k - 1, i - 1);
            let b = binom_int(k - 1, r - i);
            let inner = if family == F::SumFinite {
                a + sign(r) * b
            } else {
                sign(r) * a + b
            };
            let rhs = LinComb::term(Term::Zconst(k), int(sign(i) * inner));
            (lhs, rhs)
        }
        (F::DualityClassical, Params::Index { k }) => {
            require(k.is_admissible(), family, "needs an admissible index")?;
            (LinComb::index(k.clone()), LinComb::index(k.dagger()?))
        }
        (F::DualityFinite, Params::Index { k }) => {
            require(!k.is_empty(), family, "needs a nonempty index")?;
            (
                LinComb::index(k.clone()),
                -LinComb::index(k.hoffman_dual()?),
            )
        }
        (F::Ohno, Params::IndexShift { k, m }) => {
            require(k.is_admissible(), family, "needs an admissible index")?;
            let lhs = shifted_sum(k, *m, Ok)?;
            let rhs = shifted_sum(&k.dagger()?, *m, Ok)?;
            (lhs, rhs)
        }
        (F::OhnoStar, Params::IndexShift { k, m }) => {
            require(
                !k.is_empty() && k.is_admissible(),
                family,
                "needs a nonempty admissible index",
            )?;
            let lhs = coefficient_sum(OhnoKind::C1, k, *m)?;
            let rhs = shifted_sum(&k.dagger()?, *m, |x| x.dagger())?;
            (lhs, rhs)
        }
        (F::Oyama, Params::IndexShift { k, m }) => {
            require(!k.is_empty(), family, "needs a nonempty index")?;
            let lhs = shifted_sum(k, *m, Ok)?;
            let rhs = shifted_sum(&k.hoffman_dual()?, *m, |x| x.hoffman_dual())?;
            (lhs, rhs)
        }
        (F::OhnoStarFinite, Params::IndexShift { k, m }) => {
            require(!k.is_empty(), family, "needs a nonempty index")?;
            let lhs = coefficient_sum(OhnoKind::C2, k, *m)?;
            let rhs = -shifted_sum(&k.hoffman_dual()?, *m, Ok)?;
            (lhs, rhs)
        }
        (F::Lemma24, Params::IndexShift { k, m }) => {
            require(!k.is_empty(), family, "needs a nonempty index")?;
            let lhs = p_of_dual(&shuffle_indices(k, &Index::ones(*m as usize)))?;
            let rhs = shifted_sum(k, *m, |x| x.hoffman_dual()?.raise_last())?;
            (lhs, rhs)
        }
        (F::Lemma25, Params::IndexShift { k, m }) => {
            let lhs = shuffle_indices(k, &Index::ones(*m as usize));
            let rhs = shifted_sum(k, *m, Ok)?;
            (lhs, rhs)
        }
        (F::KawashimaLinear, Params::Pair { k, l }) => {
            require(
                !k.is_empty() && !l.is_empty(),
                family,
                "needs nonempty indices",
            )?;
            (p_of_dual(&harmonic_indices(k, l))?, LinComb::zero())
        }
        (F::HarmonicHom, Params::Pair { k, l }) => {
            let instance = RelationInstance {
                family,
                params: params.clone(),
                lhs: Side::Linear(harmonic_indices(k, l)),
                rhs: Side::Product(vec![LinComb::index(k.clone()), LinComb::index(l.clone())]),
                space: family.value_space(),
            };
            return Ok(instance);
        }
        (F::StarOnes, &Params::Ones { i }) => {
            require(i >= 1, family, "needs i ≥ 1")?;
            (LinComb::index(Index::ones(i as usize)), LinComb::zero())
        }
        (F::StarDepth2, &Params::Depth2 { k1, k2 }) => {
            require(k1 >= 1 && k2 >= 1, family, "needs k1, k2 ≥ 1")?;
            let coeff = -sign(k1) * binom_int(k1 + k2, k1);
            (
                LinComb::index(Index::of(&[k1, k2])),
                LinComb::term(Term::Zconst(k1 + k2), int(coeff)),
            )
        }
        _ => {
            return Err(Error::domain(format!(
                "parameters {:?} do not fit family {family}",
                params
            )))
        }
    };
    Ok(RelationInstance {
        family,
        params,
        lhs: Side::Linear(lhs),
        rhs: Side::Linear(rhs),
        space: family.value_space(),
    })
}

/// Enumeration limits. `max_weight` bounds the total weight of an instance:
/// `wt(k) + m` for shifted families, `wt(k) + wt(l)` for pairs, `k` for sum
/// formulas, `i` for `star_ones` and `k1 + k2` for `star_depth2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub max_weight: u32,
    pub max_m: Option<u32>,
    pub max_depth: Option<usize>,
}

impl Bounds {
    pub fn weight(max_weight: u32) -> Self {
        Bounds {
            max_weight,
            max_m: None,
            max_depth: None,
        }
    }

    fn depth_ok(&self, k: &Index) -> bool {
        self.max_depth.is_none_or(|d| k.depth() <= d)
    }

    fn m_range(&self, used: u32) -> std::ops::RangeInclusive<u32> {
        let top = self.max_weight.saturating_sub(used);
        0..=self.max_m.map_or(top, |cap| cap.min(top))
    }
}

/// Parameter sets of `family` within `bounds`, each exactly once.
///
/// Order: indices by weight, then depth, then lexicographically; shift `m`
/// ascending within an index; pairs by total weight, total depth, then `k`,
/// then `l`; sum formulas by `k`, then `r`, then `i`.
pub fn enumerate_params(family: Family, bounds: &Bounds) -> Vec<Params> {
    use Family as F;
    let w = bounds.max_weight;
    let mut out = Vec::new();
    match family {
        F::SumClassical | F::SumClassicalStar => {
            for k in 2..=w {
                for r in 1..k {
                    out.push(Params::Weight { k, r });
                }
            }
        }
        F::SumFinite | F::SumFiniteStar => {
            for k in 2..=w {
                for r in 1..k {
                    for i in 1..=r {
                        out.push(Params::WeightSlot { k, r, i });
                    }
                }
            }
        }
        F::DualityClassical => {
            for k in index::admissible_up_to(w)
                .into_iter()
                .filter(|k| bounds.depth_ok(k))
            {
                out.push(Params::Index { k });
            }
        }
        F::DualityFinite => {
            for k in index::all_up_to(w)
                .into_iter()
                .filter(|k| bounds.depth_ok(k))
            {
                out.push(Params::Index { k });
            }
        }
        F::Ohno | F::OhnoStar => {
            for k in index::admissible_up_to(w)
                .into_iter()
                .filter(|k| bounds.depth_ok(k))
            {
                for m in bounds.m_range(k.weight()) {
                    out.push(Params::IndexShift { k: k.clone(), m });
                }
            }
        }
        F::Oyama | F::OhnoStarFinite | F::Lemma24 | F::Lemma25 => {
            let mut ks = Vec::new();
            if family == F::Lemma25 {
                ks.push(Index::empty());
            }
            ks.extend(index::all_up_to(w));
            for k in ks.into_iter().filter(|k| bounds.depth_ok(k)) {
                for m in bounds.m_range(k.weight()) {
                    out.push(Params::IndexShift { k: k.clone(), m });
                }
            }
        }
        F::KawashimaLinear | F::HarmonicHom => {
            let all = index::all_up_to(w.saturating_sub(1));
            let mut pairs: Vec<(Index, Index)> = Vec::new();
            for k in all.iter().filter(|k| bounds.depth_ok(k)) {
                for l in all.iter().filter(|l| bounds.depth_ok(l)) {
                    if k.weight() + l.weight() <= w {
                        pairs.push((k.clone(), l.clone()));
                    }
                }
            }
            pairs.sort_by(|(k1, l1), (k2, l2)| {
                (k1.weight() + l1.weight())
                    .cmp(&(k2.weight() + l2.weight()))
                    .then((k1.depth() + l1.depth()).cmp(&(k2.depth() + l2.depth())))
                    .then_with(|| canonical(k1).cmp(&canonical(k2)))
                    .then_with(|| canonical(l1).cmp(&canonical(l2)))
            });
            out.extend(pairs.into_iter().map(|(k, l)| Params::Pair { k, l }));
        }
        F::StarOnes => {
            for i in 1..=w {
                out.push(Params::Ones { i });
            }
        }
        F::StarDepth2 => {
            for total in 2..=w {
                for k1 in 1..total {
                    out.push(Params::Depth2 { k1, k2: total - k1 });
                }
            }
        }
    }
    out
}

fn canonical(k: &Index) -> (u32, usize, &[u32]) {
    (k.weight(), k.depth(), k.parts())
}

/// Every instance of `family` within `bounds`, in [`enumerate_params`] order.
pub fn enumerate_instances(
    family: Family,
    bounds: &Bounds,
) -> impl Iterator<Item = RelationInstance> {
    enumerate_params(family, bounds)
        .into_iter()
        .map(move |p| build(family, p).expect("enumerated parameters are valid"))
}
