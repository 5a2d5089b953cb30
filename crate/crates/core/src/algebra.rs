//! The rational span of indices with the shuffle `ш` and harmonic `⊛` products.
//!
//! Both products are quasi-shuffles on index components: the shuffle treats
//! components as atomic letters, the harmonic product additionally subtracts
//! the merged head `(k_1 + l_1, k ⊛ l)`.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::{compositions, ohno_coefficient, OhnoKind};
use crate::error::{Error, Result};
use crate::index::Index;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Idx(Index),
    /// The constant `Z(k)`; `B_{p-k}/k mod p` on the finite side.
    Zconst(u32),
}

impl Term {
    pub fn weight(&self) -> u32 {
        match self {
            Term::Idx(k) => k.weight(),
            Term::Zconst(k) => *k,
        }
    }

    pub fn as_index(&self) -> Option<&Index> {
        match self {
            Term::Idx(k) => Some(k),
            Term::Zconst(_) => None,
        }
    }
}

/// Rendering order: indices by decreasing depth, then decreasing
/// lexicographic order; constants last by increasing weight.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Term::Idx(a), Term::Idx(b)) => b
                .depth()
                .cmp(&a.depth())
                .then_with(|| b.parts().cmp(a.parts())),
            (Term::Idx(_), Term::Zconst(_)) => Ordering::Less,
            (Term::Zconst(_), Term::Idx(_)) => Ordering::Greater,
            (Term::Zconst(a), Term::Zconst(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Idx(k) if k.is_empty() => f.write_str("()"),
            Term::Idx(k) => write!(f, "({})", k.to_text()),
            Term::Zconst(k) => write!(f, "Z({k})"),
        }
    }
}

/// A finite formal rational combination of terms; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinComb {
    terms: BTreeMap<Term, BigRational>,
}

impl LinComb {
    pub fn zero() -> Self {
        LinComb::default()
    }

    pub fn index(k: Index) -> Self {
        LinComb::term(Term::Idx(k), BigRational::one())
    }

    pub fn term(term: Term, coeff: BigRational) -> Self {
        let mut out = LinComb::zero();
        out.add_term(term, coeff);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Term, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, term: &Term) -> BigRational {
        self.terms
            .get(term)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coefficient_of(&self, k: &Index) -> BigRational {
        self.coefficient(&Term::Idx(k.clone()))
    }

    /// Sum of all coefficients (term count with multiplicity for products).
    pub fn coefficient_sum(&self) -> BigRational {
        self.terms
            .values()
            .fold(BigRational::zero(), |acc, c| acc + c)
    }

    pub fn add_term(&mut self, term: Term, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(term) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add_index(&mut self, k: Index, coeff: BigRational) {
        self.add_term(Term::Idx(k), coeff);
    }

    pub fn add_assign_scaled(&mut self, other: &LinComb, scale: &BigRational) {
        if scale.is_zero() {
            return;
        }
        for (t, c) in &other.terms {
            self.add_term(t.clone(), c * scale);
        }
    }

    pub fn scaled(&self, scale: &BigRational) -> LinComb {
        let mut out = LinComb::zero();
        out.add_assign_scaled(self, scale);
        out
    }

    /// Largest term weight, `None` for the zero combination.
    pub fn max_weight(&self) -> Option<u32> {
        self.terms.keys().map(Term::weight).max()
    }

    /// Every term as an index, failing on a `Z(k)` constant.
    pub fn index_terms(&self) -> Result<Vec<(&Index, &BigRational)>> {
        self.terms
            .iter()
            .map(|(t, c)| match t {
                Term::Idx(k) => Ok((k, c)),
                Term::Zconst(n) => Err(Error::domain(format!(
                    "constant Z({n}) cannot enter an index-level operation"
                ))),
            })
            .collect()
    }

    pub fn map_linear(&self, map: LinearMap) -> Result<LinComb> {
        let mut out = LinComb::zero();
        for (k, c) in self.index_terms()? {
            let image = map.apply(k).map_err(|e| {
                Error::domain(format!(
                    "{} cannot be applied to term ({}): {e}",
                    map.name(),
                    k
                ))
            })?;
            out.add_index(image, c.clone());
        }
        Ok(out)
    }
}

impl FromIterator<(Term, BigRational)> for LinComb {
    fn from_iter<I: IntoIterator<Item = (Term, BigRational)>>(iter: I) -> Self {
        let mut out = LinComb::zero();
        for (t, c) in iter {
            out.add_term(t, c);
        }
        out
    }
}

impl Add for LinComb {
    type Output = LinComb;
    fn add(mut self, rhs: LinComb) -> LinComb {
        for (t, c) in rhs.terms {
            self.add_term(t, c);
        }
        self
    }
}

impl Sub for LinComb {
    type Output = LinComb;
    fn sub(mut self, rhs: LinComb) -> LinComb {
        for (t, c) in rhs.terms {
            self.add_term(t, -c);
        }
        self
    }
}

impl Neg for LinComb {
    type Output = LinComb;
    fn neg(mut self) -> LinComb {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

/// `q1*(i1) + q2*(i2) - ...` in term order; unit coefficients are omitted.
impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (pos, (t, c)) in self.terms.iter().enumerate() {
            let magnitude = c.abs();
            match (pos, c.is_negative()) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                (_, false) => f.write_str(" + ")?,
                (_, true) => f.write_str(" - ")?,
            }
            if !magnitude.is_one() {
                write!(f, "{magnitude}*")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinearMap {
    Dagger,
    HoffmanDual,
    RaiseLast,
    Reverse,
}

impl LinearMap {
    pub fn apply(self, k: &Index) -> Result<Index> {
        match self {
            LinearMap::Dagger => k.dagger(),
            LinearMap::HoffmanDual => k.hoffman_dual(),
            LinearMap::RaiseLast => k.raise_last(),
            LinearMap::Reverse => Ok(k.reverse()),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LinearMap::Dagger => "dagger",
            LinearMap::HoffmanDual => "hoffman_dual",
            LinearMap::RaiseLast => "raise_last",
            LinearMap::Reverse => "reverse",
        }
    }
}

/// Quasi-shuffle of two component sequences; `merge` is the coefficient of
/// the merged-head term (0 for shuffle, -1 for the harmonic product).
fn quasi_shuffle(a: &[u32], b: &[u32], merge: i64) -> BTreeMap<Vec<u32>, BigInt> {
    // cells[i][j] holds the product of the suffixes a[i..] and b[j..].
    let (n, m) = (a.len(), b.len());
    let mut cells: Vec<Vec<BTreeMap<Vec<u32>, BigInt>>> = vec![vec![BTreeMap::new(); m + 1]; n + 1];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            let cell = if i == n {
                BTreeMap::from([(b[j..].to_vec(), BigInt::one())])
            } else if j == m {
                BTreeMap::from([(a[i..].to_vec(), BigInt::one())])
            } else {
                let mut acc = BTreeMap::new();
                prepend_into(&mut acc, a[i], &cells[i + 1][j], &BigInt::one());
                prepend_into(&mut acc, b[j], &cells[i][j + 1], &BigInt::one());
                if merge != 0 {
                    prepend_into(
                        &mut acc,
                        a[i] + b[j],
                        &cells[i + 1][j + 1],
                        &BigInt::from(merge),
                    );
                }
                acc
            };
            cells[i][j] = cell;
        }
    }
    std::mem::take(&mut cells[0][0])
}

fn prepend_into(
    acc: &mut BTreeMap<Vec<u32>, BigInt>,
    head: u32,
    tails: &BTreeMap<Vec<u32>, BigInt>,
    scale: &BigInt,
) {
    for (tail, c) in tails {
        let mut word = Vec::with_capacity(tail.len() + 1);
        word.push(head);
        word.extend_from_slice(tail);
        match acc.entry(word) {
            Entry::Vacant(slot) => {
                slot.insert(c * scale);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c * scale;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }
}

fn bilinear(x: &LinComb, y: &LinComb, merge: i64) -> Result<LinComb> {
    let xs = x.index_terms()?;
    let ys = y.index_terms()?;
    let mut out = LinComb::zero();
    for (k, ck) in &xs {
        for (l, cl) in &ys {
            let scale = *ck * *cl;
            for (word, c) in quasi_shuffle(k.parts(), l.parts(), merge) {
                out.add_index(Index::new(word)?, BigRational::from_integer(c) * &scale);
            }
        }
    }
    Ok(out)
}

/// Index-level shuffle product `x ш y`, extended bilinearly.
pub fn shuffle(x: &LinComb, y: &LinComb) -> Result<LinComb> {
    bilinear(x, y, 0)
}

/// Harmonic product `x ⊛ y` with the subtracted merge term, extended bilinearly.
pub fn harmonic(x: &LinComb, y: &LinComb) -> Result<LinComb> {
    bilinear(x, y, -1)
}

/// The stuffle with an added merge term, for which the non-star values are
/// multiplicative. Only used to cross-check evaluators.
pub fn stuffle(x: &LinComb, y: &LinComb) -> Result<LinComb> {
    bilinear(x, y, 1)
}

pub fn shuffle_indices(k: &Index, l: &Index) -> LinComb {
    bilinear(&LinComb::index(k.clone()), &LinComb::index(l.clone()), 0).expect("index terms only")
}

pub fn harmonic_indices(k: &Index, l: &Index) -> LinComb {
    bilinear(&LinComb::index(k.clone()), &LinComb::index(l.clone()), -1).expect("index terms only")
}

fn integer(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Both sides of `k ш ({1}^m) = Σ_{i=0}^{m} Σ_{wt(e)=m-i} (k ⊕ e) ⊛ ({1}^i)`.
pub fn lemma21_sides(k: &Index, m: u32) -> Result<(LinComb, LinComb)> {
    let left = shuffle_indices(k, &Index::ones(m as usize));
    let mut right = LinComb::zero();
    for i in 0..=m {
        let ones = Index::ones(i as usize);
        for e in compositions(m - i, k.depth()) {
            let shifted = k.oplus(e.parts())?;
            right.add_assign_scaled(&harmonic_indices(&shifted, &ones), &BigRational::one());
        }
    }
    Ok((left, right))
}

/// Both sides of `(k^∨ ш ({1}^m))^∨ = Σ_{wt(e)=m} c2(k, e) (k ⊕ e)`.
pub fn lemma22_sides(k: &Index, m: u32) -> Result<(LinComb, LinComb)> {
    if k.is_empty() {
        return Err(Error::domain(
            "Hoffman dual of the empty index is undefined",
        ));
    }
    let left = shuffle_indices(&k.hoffman_dual()?, &Index::ones(m as usize))
        .map_linear(LinearMap::HoffmanDual)?;
    let mut right = LinComb::zero();
    for e in compositions(m, k.depth()) {
        let c = ohno_coefficient(OhnoKind::C2, k, &e)?;
        right.add_index(k.oplus(e.parts())?, integer(BigInt::from(c)));
    }
    Ok((left, right))
}
