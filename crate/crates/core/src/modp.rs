//! Exact per-prime evaluation: ζ_A, ζ_A*, Bernoulli numbers and `Z_A(k)`.
//!
//! Equality in `A = Π F_p / ⊕ F_p` is checked coordinatewise on a window of
//! primes. Primes `p ≤ w + 2`, where `w` is the total weight of an instance,
//! are skipped.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::algebra::{LinComb, Term};
use crate::error::{Error, Result};
use crate::index::Index;
use crate::relations::{RelationInstance, Side, ValueSpace};
use crate::report::{CheckResult, Outcome, Witness};

/// Largest modulus accepted; keeps every product below 2^64.
pub const MAX_MODULUS: u64 = (1 << 31) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: i64, modulus: u64) -> Self {
        let m = modulus as i64;
        Residue {
            value: value.rem_euclid(m) as u64,
            modulus,
        }
    }

    pub fn zero(modulus: u64) -> Self {
        Residue { value: 0, modulus }
    }

    pub fn one(modulus: u64) -> Self {
        Residue {
            value: 1 % modulus,
            modulus,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Representative in `(-p/2, p/2]`.
    pub fn symmetric(self) -> i64 {
        if self.value > self.modulus / 2 {
            self.value as i64 - self.modulus as i64
        } else {
            self.value as i64
        }
    }

    pub fn inv(self) -> Option<Residue> {
        mod_inverse(self.value, self.modulus).map(|value| Residue {
            value,
            modulus: self.modulus,
        })
    }

    pub fn pow(self, mut exp: u64) -> Residue {
        let mut base = self;
        let mut acc = Residue::one(self.modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    pub fn from_bigint(n: &BigInt, modulus: u64) -> Self {
        let r = n.mod_floor(&BigInt::from(modulus));
        Residue {
            value: r.to_u64().expect("reduced below the modulus"),
            modulus,
        }
    }

    /// `a/b mod p`; fails when `p` divides the denominator.
    pub fn from_rational(q: &BigRational, modulus: u64) -> Result<Self> {
        let den = Residue::from_bigint(q.denom(), modulus);
        let inv = den.inv().ok_or_else(|| {
            Error::domain(format!("denominator of {q} is divisible by {modulus}"))
        })?;
        Ok(Residue::from_bigint(q.numer(), modulus) * inv)
    }

    fn same(self, other: Residue) {
        assert_eq!(
            self.modulus, other.modulus,
            "residues modulo different primes"
        );
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.same(rhs);
        Residue {
            value: (self.value + rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self.same(rhs);
        Residue {
            value: (self.value + self.modulus - rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.same(rhs);
        Residue {
            value: self.value * rhs.value % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn require_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    if p > MAX_MODULUS {
        return Err(Error::domain(format!(
            "prime {p} exceeds the supported bound {MAX_MODULUS}"
        )));
    }
    Ok(())
}

/// `Σ_{1 ≤ m_1 < … < m_r < p} 1/(m_1^{k_1} ⋯ m_r^{k_r}) mod p`, with `≤` for the star variant.
pub fn eval_fmzv_p(k: &Index, p: u64, star: bool) -> Result<Residue> {
    require_prime(p)?;
    let n = (p - 1) as usize;
    let inverses: Vec<Residue> = (0..=n as u64)
        .map(|m| {
            if m == 0 {
                Residue::zero(p)
            } else {
                Residue::new(m as i64, p).inv().expect("p is prime")
            }
        })
        .collect();
    // Same prefix-sum recursion as the real evaluator, carried out in F_p.
    let mut values = vec![Residue::one(p); n + 1];
    for &exponent in k.parts() {
        let mut acc = Residue::zero(p);
        let mut below = values[0];
        values[0] = Residue::zero(p);
        for m in 1..=n {
            let inner = if star { values[m] } else { below };
            below = values[m];
            acc = acc + inner * inverses[m].pow(exponent as u64);
            values[m] = acc;
        }
    }
    Ok(values[n])
}

/// `B_n mod p` by the Akiyama–Tanigawa recurrence in `F_p`, with `B_1 = -1/2`.
pub fn bernoulli_mod_p(n: u64, p: u64) -> Result<Residue> {
    require_prime(p)?;
    if n + 2 > p {
        return Err(Error::domain(format!(
            "B_{n} mod {p} needs n ≤ p - 2; the denominator is divisible by {p}"
        )));
    }
    let mut row: Vec<Residue> = Vec::with_capacity(n as usize + 1);
    for m in 0..=n {
        row.push(Residue::new(m as i64 + 1, p).inv().expect("m + 1 < p"));
        for j in (1..=m as usize).rev() {
            row[j - 1] = Residue::new(j as i64, p) * (row[j - 1] - row[j]);
        }
    }
    // The recurrence produces B_1 = +1/2.
    Ok(if n == 1 { -row[0] } else { row[0] })
}

/// `Z_A(k) = B_{p-k} / k mod p`.
pub fn z_a(k: u32, p: u64) -> Result<Residue> {
    if k < 2 {
        return Err(Error::domain(format!("Z({k}) needs k ≥ 2")));
    }
    require_prime(p)?;
    if p <= k as u64 + 1 {
        return Err(Error::domain(format!("Z({k}) mod {p} needs p > k + 1")));
    }
    let b = bernoulli_mod_p(p - k as u64, p)?;
    Ok(b * Residue::new(k as i64, p).inv().expect("k < p"))
}

/// Inclusive prime window `[p_min, p_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeWindow {
    pub p_min: u64,
    pub p_max: u64,
}

impl Default for PrimeWindow {
    fn default() -> Self {
        PrimeWindow {
            p_min: 5,
            p_max: 199,
        }
    }
}

impl PrimeWindow {
    pub fn new(p_min: u64, p_max: u64) -> Result<Self> {
        if p_min < 3 {
            return Err(Error::config(format!(
                "prime window must start at 3 or above, got {p_min}"
            )));
        }
        if p_min > p_max {
            return Err(Error::config(format!(
                "empty prime window [{p_min}, {p_max}]"
            )));
        }
        if p_max > MAX_MODULUS {
            return Err(Error::config(format!(
                "prime window bound {p_max} exceeds {MAX_MODULUS}"
            )));
        }
        Ok(PrimeWindow { p_min, p_max })
    }

    pub fn primes(self) -> Vec<u64> {
        (self.p_min..=self.p_max).filter(|&p| is_prime(p)).collect()
    }

    /// Primes of the window above `weight + 2`; an empty result is an error.
    pub fn retained(self, weight: u32) -> Result<Vec<u64>> {
        let primes: Vec<u64> = self
            .primes()
            .into_iter()
            .filter(|&p| p > weight as u64 + 2)
            .collect();
        if primes.is_empty() {
            return Err(Error::config(format!(
                "no primes in [{}, {}] above weight {weight} + 2",
                self.p_min, self.p_max
            )));
        }
        Ok(primes)
    }

    pub fn to_json(self) -> Value {
        json!({"pmin": self.p_min.to_string(), "pmax": self.p_max.to_string()})
    }
}

/// One linear side mod `p`: indices via [`eval_fmzv_p`], constants via [`z_a`].
pub fn eval_side_p(x: &LinComb, star: bool, p: u64) -> Result<Residue> {
    let mut acc = Residue::zero(p);
    for (t, c) in x.iter() {
        let value = match t {
            Term::Idx(k) => eval_fmzv_p(k, p, star)?,
            Term::Zconst(n) => z_a(*n, p)?,
        };
        acc = acc + Residue::from_rational(c, p)? * value;
    }
    Ok(acc)
}

fn side_residue(side: &Side, star: bool, p: u64) -> Result<Residue> {
    match side {
        Side::Linear(x) => eval_side_p(x, star, p),
        Side::Product(factors) => factors
            .iter()
            .try_fold(Residue::one(p), |acc, f| Ok(acc * eval_side_p(f, star, p)?)),
    }
}

/// Requires `lhs ≡ rhs` at every retained prime; all failing primes become witnesses.
pub fn check_modp(inst: &RelationInstance, window: PrimeWindow) -> Result<CheckResult> {
    if inst.space.is_real() {
        return Err(Error::domain(format!(
            "{} lives in {}, not a finite value space",
            inst.id(),
            inst.space.name()
        )));
    }
    let star = inst.space == ValueSpace::FiniteZetaStar;
    let primes = window.retained(inst.total_weight())?;
    let mut witnesses = Vec::new();
    for &p in &primes {
        let lhs = side_residue(&inst.lhs, star, p)?;
        let rhs = side_residue(&inst.rhs, star, p)?;
        if lhs != rhs {
            witnesses.push(Witness {
                p,
                lhs: lhs.value(),
                rhs: rhs.value(),
            });
        }
    }
    Ok(CheckResult::new(
        inst,
        Outcome::Modular { primes, witnesses },
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemarkRow {
    pub p: u64,
    /// `ζ_A(1, k-1) mod p`.
    pub zeta: Residue,
    /// `Z_A(k) mod p`.
    pub z: Residue,
    /// `ζ_A(1, k-1) / Z_A(k)` when `Z_A(k) ≠ 0`.
    pub ratio: Option<Residue>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemarkDiagnostic {
    pub k: u32,
    pub rows: Vec<RemarkRow>,
    /// The integer `c` with `ζ_A(1, k-1) ≡ c · Z_A(k)` at every prime where
    /// `Z_A(k) ≠ 0`, if the symmetric representatives of the ratios agree.
    pub constant_ratio: Option<i64>,
}

impl RemarkDiagnostic {
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "p": r.p.to_string(),
                    "zeta_1_km1": r.zeta.to_string(),
                    "z_a": r.z.to_string(),
                    "ratio": r.ratio.map(|x| x.to_string()),
                })
            })
            .collect();
        json!({
            "k": self.k,
            "rows": rows,
            "constant_ratio": self.constant_ratio.map(|c| c.to_string()),
        })
    }
}

/// Side-by-side values of `ζ_A(1, k-1)` and `Z_A(k)` for primes `p > k + 1`.
pub fn remark_diagnostic(k: u32, window: PrimeWindow) -> Result<RemarkDiagnostic> {
    if k < 2 {
        return Err(Error::domain(format!("diagnostic needs k ≥ 2, got {k}")));
    }
    let index = Index::of(&[1, k - 1]);
    let mut rows = Vec::new();
    for p in window.primes().into_iter().filter(|&p| p > k as u64 + 1) {
        let zeta = eval_fmzv_p(&index, p, false)?;
        let z = z_a(k, p)?;
        let ratio = z.inv().map(|inv| zeta * inv);
        rows.push(RemarkRow { p, zeta, z, ratio });
    }
    if rows.is_empty() {
        return Err(Error::config(format!(
            "no primes above {} in [{}, {}]",
            k + 1,
            window.p_min,
            window.p_max
        )));
    }
    // An integer constant small against the largest prime is its symmetric
    // residue there; it must then reduce to the ratio at every other prime.
    let ratios: Vec<Residue> = rows.iter().filter_map(|r| r.ratio).collect();
    let constant_ratio = ratios
        .last()
        .map(|r| r.symmetric())
        .filter(|&c| ratios.iter().all(|r| Residue::new(c, r.modulus()) == *r));
    Ok(RemarkDiagnostic {
        k,
        rows,
        constant_ratio,
    })
}

/// Exact rational Bernoulli numbers `B_0..=B_n` (`B_1 = -1/2`) by
/// `Σ_{j=0}^{n} C(n+1, j) B_j = 0`.
pub fn bernoulli_rational(n: usize) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            out.push(BigRational::from_integer(BigInt::from(1)));
            continue;
        }
        let mut acc = BigRational::zero();
        let mut c = BigInt::from(1);
        for (j, b) in out.iter().enumerate() {
            acc += b * BigRational::from_integer(c.clone());
            c = c * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        out.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    out
}
