//! Crisp subsets of a finite carrier, stored as a 64-bit mask.

use std::cmp::Ordering;
use std::fmt;

use crate::algebra::{ElementId, R0Algebra};
use crate::error::{Error, Result};

/// Largest carrier a [`CrispSubset`] can describe.
pub const MAX_CARRIER: usize = 64;

/// A subset of `{0, .., n-1}`.
///
/// Ordering is canonical: by population count, then by the numeric bit
/// pattern. Sorting a list of subsets therefore yields the same sequence no
/// matter how it was produced.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CrispSubset {
    bits: u64,
    n: u8,
}

fn mask_for(n: usize) -> u64 {
    if n == MAX_CARRIER {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl CrispSubset {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_CARRIER, "carrier of size {n} is too large");
        CrispSubset { bits: 0, n: n as u8 }
    }

    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_CARRIER, "carrier of size {n} is too large");
        CrispSubset {
            bits: mask_for(n),
            n: n as u8,
        }
    }

    /// Builds a subset from raw bits; bits at or above `n` are rejected.
    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        if n > MAX_CARRIER {
            return Err(Error::Domain(format!("carrier of size {n} is too large")));
        }
        if bits & !mask_for(n) != 0 {
            return Err(Error::Domain(format!(
                "bit pattern {bits:#x} has members outside a carrier of size {n}"
            )));
        }
        Ok(CrispSubset { bits, n: n as u8 })
    }

    pub fn from_elements(n: usize, elements: impl IntoIterator<Item = ElementId>) -> Self {
        let mut s = CrispSubset::empty(n);
        for e in elements {
            s.insert(e);
        }
        s
    }

    pub fn carrier_size(self) -> usize {
        self.n as usize
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn contains(self, e: ElementId) -> bool {
        e.index() < self.n as usize && self.bits >> e.index() & 1 == 1
    }

    pub fn insert(&mut self, e: ElementId) {
        assert!(e.index() < self.n as usize, "element {} outside carrier", e.index());
        self.bits |= 1 << e.index();
    }

    pub fn with(mut self, e: ElementId) -> Self {
        self.insert(e);
        self
    }

    pub fn without(mut self, e: ElementId) -> Self {
        self.bits &= !(1u64 << e.index());
        self
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn is_full(self) -> bool {
        self.bits == mask_for(self.n as usize)
    }

    pub fn is_subset(self, other: CrispSubset) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_proper_subset(self, other: CrispSubset) -> bool {
        self.is_subset(other) && self.bits != other.bits
    }

    pub fn intersection(self, other: CrispSubset) -> Self {
        CrispSubset {
            bits: self.bits & other.bits,
            n: self.n,
        }
    }

    pub fn union(self, other: CrispSubset) -> Self {
        CrispSubset {
            bits: self.bits | other.bits,
            n: self.n,
        }
    }

    pub fn difference(self, other: CrispSubset) -> Self {
        CrispSubset {
            bits: self.bits & !other.bits,
            n: self.n,
        }
    }

    pub fn iter(self) -> impl Iterator<Item = ElementId> {
        let bits = self.bits;
        (0..self.n as usize)
            .filter(move |i| bits >> i & 1 == 1)
            .map(ElementId)
    }

    /// Renders as `{c, d, 1}`, members in carrier order.
    pub fn render(self, algebra: &R0Algebra) -> String {
        let names: Vec<&str> = self.iter().map(|e| algebra.name(e)).collect();
        format!("{{{}}}", names.join(", "))
    }

    /// Parses `{name, name, ...}` against the algebra's element names.
    pub fn parse(algebra: &R0Algebra, text: &str) -> Result<Self, String> {
        let text = text.trim();
        let inner = text
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| format!("expected a brace set, found `{text}`"))?;
        let mut s = CrispSubset::empty(algebra.size());
        for token in inner.split(|c: char| c == ',' || c.is_whitespace()) {
            if token.is_empty() {
                continue;
            }
            let e = algebra
                .lookup(token)
                .ok_or_else(|| format!("unknown element `{token}`"))?;
            if s.contains(e) {
                return Err(format!("element `{token}` listed twice"));
            }
            s.insert(e);
        }
        Ok(s)
    }
}

impl Ord for CrispSubset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then(self.bits.count_ones().cmp(&other.bits.count_ones()))
            .then(self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for CrispSubset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for CrispSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|e| e.index())).finish()
    }
}
