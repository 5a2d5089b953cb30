//! Indices and the structural maps on them.
//!
//! An index is a finite, possibly empty, sequence of positive integers.
//! Both dualities are implemented through word encodings so that they are
//! total on their domains:
//!
//! * `dagger` encodes each component `c` as the block `a b^(c-1)`, reverses the
//!   word and swaps the two letters.
//! * `hoffman_dual` writes the weight `w` as `1 ? 1 ? ... ? 1` with `w - 1`
//!   separators, each either "merge" (inside a component) or "cut" (between
//!   components), and flips every separator.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Index(Vec<u32>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub weight: u32,
    pub depth: usize,
    pub admissible: bool,
}

impl Index {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if let Some(pos) = parts.iter().position(|&c| c == 0) {
            return Err(Error::domain(format!(
                "component {} of {:?} is 0; components must be ≥ 1",
                pos + 1,
                parts
            )));
        }
        Ok(Index(parts))
    }

    /// Literal constructor for known-good component lists.
    ///
    /// Panics if any component is zero.
    pub fn of(parts: &[u32]) -> Self {
        Index::new(parts.to_vec()).expect("index components must be positive")
    }

    pub fn empty() -> Self {
        Index(Vec::new())
    }

    /// The index `({1}^m)`.
    pub fn ones(m: usize) -> Self {
        Index(vec![1; m])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn into_parts(self) -> Vec<u32> {
        self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_admissible(&self) -> bool {
        self.0.last().is_none_or(|&last| last >= 2)
    }

    pub fn classify(&self) -> Classification {
        Classification {
            weight: self.weight(),
            depth: self.depth(),
            admissible: self.is_admissible(),
        }
    }

    /// The dual index `k†` of an admissible index.
    pub fn dagger(&self) -> Result<Index> {
        if !self.is_admissible() {
            return Err(Error::domain(format!(
                "dual index requires an admissible index, got {self}"
            )));
        }
        let mut word = Vec::with_capacity(self.weight() as usize);
        for &c in &self.0 {
            word.push(true);
            word.extend(std::iter::repeat_n(false, c as usize - 1));
        }
        word.reverse();
        for letter in &mut word {
            *letter = !*letter;
        }
        // The transformed word again starts with `a`, so every `a` opens a block.
        let mut parts: Vec<u32> = Vec::new();
        for letter in word {
            if letter {
                parts.push(1);
            } else {
                *parts.last_mut().expect("word starts with a") += 1;
            }
        }
        Ok(Index(parts))
    }

    /// Hoffman's dual `k^∨` of a nonempty index.
    pub fn hoffman_dual(&self) -> Result<Index> {
        if self.is_empty() {
            return Err(Error::domain(
                "Hoffman dual is undefined for the empty index",
            ));
        }
        // `true` = merge, `false` = cut; flipping happens on the fly.
        let mut parts = Vec::new();
        let mut current = 1u32;
        let last = self.0.len() - 1;
        for (pos, &c) in self.0.iter().enumerate() {
            for _ in 1..c {
                parts.push(current);
                current = 1;
            }
            if pos != last {
                current += 1;
            }
        }
        parts.push(current);
        Ok(Index(parts))
    }

    /// The operator `R`.
    pub fn reverse(&self) -> Index {
        Index(self.0.iter().rev().copied().collect())
    }

    /// The operator `P`: raise the last component by one.
    pub fn raise_last(&self) -> Result<Index> {
        let mut parts = self.0.clone();
        match parts.last_mut() {
            Some(last) => *last += 1,
            None => return Err(Error::domain("P is undefined for the empty index")),
        }
        Ok(Index(parts))
    }

    /// Componentwise sum `k ⊕ e` with a sequence of nonnegative integers.
    pub fn oplus(&self, shift: &[u32]) -> Result<Index> {
        if shift.len() != self.depth() {
            return Err(Error::domain(format!(
                "componentwise sum needs equal depths: {} has depth {}, shift has {}",
                self,
                self.depth(),
                shift.len()
            )));
        }
        Ok(Index(
            self.0.iter().zip(shift).map(|(a, b)| a + b).collect(),
        ))
    }

    /// Canonical text: comma-separated components, empty string for `∅`.
    pub fn to_text(&self) -> String {
        self.0
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Renders the canonical text, with `()` standing in for the empty index.
impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("()")
        } else {
            f.write_str(&self.to_text())
        }
    }
}

impl Serialize for Index {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for Index {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "()" {
            return Ok(Index::empty());
        }
        let text = text
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(text);
        text.split(',')
            .map(|raw| {
                let token = raw.trim();
                let fail = |reason: &str| Error::Parse {
                    token: token.to_string(),
                    reason: reason.to_string(),
                };
                let value: i64 = token.parse().map_err(|_| fail("not an integer"))?;
                if value < 1 {
                    return Err(fail("component must be ≥ 1"));
                }
                u32::try_from(value).map_err(|_| fail("component too large"))
            })
            .collect::<Result<Vec<_>>>()
            .map(Index)
    }
}

/// All indices of weight `w`, ordered by depth and then lexicographically.
///
/// There are `2^(w-1)` of them for `w ≥ 1`; weight 0 yields only `∅`.
pub fn all_of_weight(w: u32) -> Vec<Index> {
    if w == 0 {
        return vec![Index::empty()];
    }
    let mut out = Vec::with_capacity(1 << (w - 1));
    // Each subset of the w-1 separators that are cuts gives one composition.
    for mask in 0u64..(1u64 << (w - 1)) {
        let mut parts = Vec::new();
        let mut current = 1u32;
        for bit in 0..w - 1 {
            if mask & (1 << bit) != 0 {
                parts.push(current);
                current = 1;
            } else {
                current += 1;
            }
        }
        parts.push(current);
        out.push(Index(parts));
    }
    out.sort_by(|a, b| a.depth().cmp(&b.depth()).then_with(|| a.cmp(b)));
    out
}

/// All nonempty indices of weight `1..=max_weight`, weight-major.
pub fn all_up_to(max_weight: u32) -> Vec<Index> {
    (1..=max_weight).flat_map(all_of_weight).collect()
}

/// Nonempty admissible indices of weight `2..=max_weight`.
pub fn admissible_up_to(max_weight: u32) -> Vec<Index> {
    all_up_to(max_weight)
        .into_iter()
        .filter(Index::is_admissible)
        .collect()
}
