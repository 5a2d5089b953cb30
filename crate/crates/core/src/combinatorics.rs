//! Binomials, Ohno coefficients and compositions.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::index::Index;

/// A shift vector `e`: nonnegative parts of a fixed length.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(parts: Vec<u32>) -> Self {
        Composition(parts)
    }

    pub fn zeros(len: usize) -> Self {
        Composition(vec![0; len])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", body.join(","))
    }
}

/// Ordinary binomial coefficient `C(n, k)` for `0 ≤ k`, zero when `k > n`.
pub fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Signed-argument binomial for `n ∈ Z`, `k ≥ 0`; zero when `n < k` with `n ≥ 0`
/// and for negative `n` (only the `binom_conv` case `n = -1, k = 0` is special).
fn binom_i(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    BigInt::from(binom(n as u64, k as u64))
}

/// Binomial with the Ohno convention `C(n-1, n) = [n = 0]`.
///
/// Defined for `top ≥ bottom - 1`; anything below cannot come from `c1`/`c2`.
pub fn binom_conv(top: i64, bottom: u64) -> Result<BigUint> {
    let b = bottom as i64;
    if top < b - 1 {
        return Err(Error::domain(format!(
            "binomial C({top}, {bottom}) is outside the Ohno convention"
        )));
    }
    if top == b - 1 {
        return Ok(if bottom == 0 {
            BigUint::one()
        } else {
            BigUint::zero()
        });
    }
    Ok(binom(top as u64, bottom))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OhnoKind {
    C1,
    C2,
}

/// `c1(k, e) = Π C(k_i + e_i + δ_{i,1} - 2, e_i)`, and `c2` additionally adds `δ_{i,r}`.
pub fn ohno_coefficient(kind: OhnoKind, k: &Index, e: &Composition) -> Result<BigUint> {
    let r = k.depth();
    if r == 0 || e.len() != r {
        return Err(Error::domain(format!(
            "Ohno coefficient needs depth(e) = depth(k) ≥ 1, got {} and {k}",
            e
        )));
    }
    let mut acc = BigUint::one();
    for (pos, (&ki, &ei)) in k.parts().iter().zip(e.parts()).enumerate() {
        let mut top = ki as i64 + ei as i64 - 2;
        if pos == 0 {
            top += 1;
        }
        if kind == OhnoKind::C2 && pos == r - 1 {
            top += 1;
        }
        acc *= binom_conv(top, ei as u64)?;
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

/// All length-`len` sequences of nonnegative integers summing to `total`,
/// in lexicographically descending order.
///
/// The count is `C(total + len - 1, len - 1)`. Length zero yields the empty
/// sequence when `total = 0` and nothing otherwise.
pub fn compositions(total: u32, len: usize) -> Vec<Composition> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(len);
    fill(total, len, &mut current, &mut out);
    out
}

fn fill(rest: u32, slots: usize, current: &mut Vec<u32>, out: &mut Vec<Composition>) {
    match slots {
        0 => {
            if rest == 0 {
                out.push(Composition(current.clone()));
            }
        }
        1 => {
            current.push(rest);
            out.push(Composition(current.clone()));
            current.pop();
        }
        _ => {
            for head in (0..=rest).rev() {
                current.push(head);
                fill(rest - head, slots - 1, current, out);
                current.pop();
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma33Values {
    pub lhs1: BigInt,
    pub rhs1: BigInt,
    pub lhs2: BigInt,
    pub rhs2: BigInt,
}

impl Lemma33Values {
    pub fn holds(&self) -> bool {
        self.lhs1 == self.rhs1 && self.lhs2 == self.rhs2
    }
}

/// Evaluates both alternating binomial sums and their closed forms:
///
/// ```text
/// Σ_a (-1)^a C(m+n, a+i)   C(a+i-1, a) C(m+n-a-i, m-a) = C(m+n, m+i)
/// Σ_a (-1)^a C(m+n, a+i-1) C(a+i-1, a) C(m+n-a-i, m-a) = (-1)^m C(m+n, i-1)
/// ```
pub fn lemma33_check(m: i64, n: i64, i: i64) -> Result<Lemma33Values> {
    if m < 1 || n < 1 || i < 1 || i > n {
        return Err(Error::domain(format!(
            "binomial identities need m, n, i ≥ 1 and i ≤ n, got m={m}, n={n}, i={i}"
        )));
    }
    let mut lhs1 = BigInt::zero();
    let mut lhs2 = BigInt::zero();
    for a in 0..=m {
        let common = binom_i(a + i - 1, a) * binom_i(m + n - a - i, m - a);
        let t1 = binom_i(m + n, a + i) * &common;
        let t2 = binom_i(m + n, a + i - 1) * &common;
        if a % 2 == 0 {
            lhs1 += t1;
            lhs2 += t2;
        } else {
            lhs1 -= t1;
            lhs2 -= t2;
        }
    }
    let rhs1 = binom_i(m + n, m + i);
    let mut rhs2 = binom_i(m + n, i - 1);
    if m % 2 == 1 {
        rhs2 = -rhs2;
    }
    Ok(Lemma33Values {
        lhs1,
        rhs1,
        lhs2,
        rhs2,
    })
}
