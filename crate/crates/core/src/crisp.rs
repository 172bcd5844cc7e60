//! Crisp filters and fated filters: predicates under each available
//! characterization, exhaustive enumeration and the closure structure of the
//! fated-filter family.

use std::collections::HashSet;

use crate::algebra::{ElementId, R0Algebra};
use crate::error::{Error, Result};
use crate::par::{map_indexed, Execution};
use crate::report::{CheckReport, Witness};
use crate::subset::CrispSubset;

pub const DEFAULT_ENUMERATION_BOUND: usize = 24;

/// Subset masks handed to one enumeration task.
const CHUNK_BITS: u32 = 12;

pub const NONEMPTY: &str = "nonempty";
pub const CONTAINS_TOP: &str = "1 in S";
pub const MODUS_PONENS: &str = "x in S, x -> y in S imply y in S";
pub const PRODUCT_CLOSED: &str = "x, y in S imply x * y in S";
pub const UPWARD_CLOSED: &str = "x in S, x <= y imply y in S";
pub const FATED_RULE: &str = "a in S, a -> ((x -> y) -> x) in S imply x in S";
pub const PREFIX_TRANSITIVE: &str = "x -> (y -> z) in S, x -> y in S imply x -> z in S";
pub const PEIRCE_RULE: &str = "(x -> y) -> x in S implies x in S";

fn check_size(algebra: &R0Algebra, s: CrispSubset) -> Result<()> {
    if s.carrier_size() != algebra.size() {
        return Err(Error::Domain(format!(
            "subset over a carrier of size {} used with an algebra of size {}",
            s.carrier_size(),
            algebra.size()
        )));
    }
    Ok(())
}

/// Filter via `1 ∈ S` and modus-ponens closure.
pub fn is_filter(algebra: &R0Algebra, s: CrispSubset) -> Result<CheckReport> {
    check_size(algebra, s)?;
    let mut report = CheckReport::new("filter");
    report.record(NONEMPTY, s.is_empty().then(|| Witness::new().note("nonempty required")));
    report.record(
        CONTAINS_TOP,
        (!s.contains(algebra.top())).then(|| Witness::new().element("x", algebra.top())),
    );
    let violation = s.iter().find_map(|x| {
        algebra
            .elements()
            .find(|&y| s.contains(algebra.arrow(x, y)) && !s.contains(y))
            .map(|y| Witness::new().element("x", x).element("y", y))
    });
    report.record(MODUS_PONENS, violation);
    Ok(report)
}

/// Filter via `⊙`-closure and upward closure.
pub fn is_filter_alt(algebra: &R0Algebra, s: CrispSubset) -> Result<CheckReport> {
    check_size(algebra, s)?;
    let mut report = CheckReport::new("filter (product form)");
    report.record(NONEMPTY, s.is_empty().then(|| Witness::new().note("nonempty required")));
    let product = s.iter().find_map(|x| {
        s.iter()
            .find(|&y| !s.contains(algebra.odot(x, y)))
            .map(|y| Witness::new().element("x", x).element("y", y))
    });
    report.record(PRODUCT_CLOSED, product);
    let upward = s.iter().find_map(|x| {
        algebra
            .elements()
            .find(|&y| algebra.le(x, y) && !s.contains(y))
            .map(|y| Witness::new().element("x", x).element("y", y))
    });
    report.record(UPWARD_CLOSED, upward);
    Ok(report)
}

/// `(x → y) → x`.
fn peirce(algebra: &R0Algebra, x: ElementId, y: ElementId) -> ElementId {
    algebra.arrow(algebra.arrow(x, y), x)
}

/// Fated filter: `1 ∈ S` and `a ∈ S, a → ((x → y) → x) ∈ S ⟹ x ∈ S`.
pub fn is_fated_filter(algebra: &R0Algebra, s: CrispSubset) -> Result<CheckReport> {
    check_size(algebra, s)?;
    let mut report = CheckReport::new("fated filter");
    report.record(
        CONTAINS_TOP,
        (!s.contains(algebra.top())).then(|| Witness::new().element("x", algebra.top())),
    );
    let violation = algebra.elements().filter(|&x| !s.contains(x)).find_map(|x| {
        algebra.elements().find_map(|y| {
            s.iter()
                .find(|&a| s.contains(algebra.arrow(a, peirce(algebra, x, y))))
                .map(|a| Witness::new().element("x", x).element("a", a).element("y", y))
        })
    });
    report.record(FATED_RULE, violation);
    Ok(report)
}

fn require_filter(algebra: &R0Algebra, s: CrispSubset) -> Result<()> {
    let report = is_filter(algebra, s)?;
    if let Some(e) = report.failures().next() {
        return Err(Error::Precondition(format!(
            "{} is not a filter ({} fails)",
            s.render(algebra),
            e.condition
        )));
    }
    Ok(())
}

/// Fatedness of a filter via `x → (y → z), x → y ∈ S ⟹ x → z ∈ S`.
pub fn is_fated_via_prefix_transitivity(algebra: &R0Algebra, s: CrispSubset) -> Result<CheckReport> {
    require_filter(algebra, s)?;
    let a = |x, y| algebra.arrow(x, y);
    let mut report = CheckReport::new("fated filter (prefix transitivity)");
    let violation = algebra.elements().find_map(|x| {
        algebra.elements().find_map(|y| {
            if !s.contains(a(x, y)) {
                return None;
            }
            algebra
                .elements()
                .find(|&z| s.contains(a(x, a(y, z))) && !s.contains(a(x, z)))
                .map(|z| Witness::new().element("x", x).element("y", y).element("z", z))
        })
    });
    report.record(PREFIX_TRANSITIVE, violation);
    Ok(report)
}

/// Fatedness of a filter via `(x → y) → x ∈ S ⟹ x ∈ S`.
pub fn is_fated_via_peirce(algebra: &R0Algebra, s: CrispSubset) -> Result<CheckReport> {
    require_filter(algebra, s)?;
    let mut report = CheckReport::new("fated filter (Peirce form)");
    let violation = algebra.elements().filter(|&x| !s.contains(x)).find_map(|x| {
        algebra
            .elements()
            .find(|&y| s.contains(peirce(algebra, x, y)))
            .map(|y| Witness::new().element("x", x).element("y", y))
    });
    report.record(PEIRCE_RULE, violation);
    Ok(report)
}

/// Bit-mask forms of the filter and fated-filter predicates, precomputed
/// once per algebra for enumeration.
struct MaskTester {
    n: usize,
    top: usize,
    up: Vec<u64>,
    /// `arrow_mask[x][v]`: bit `y` set iff `x → y = v`.
    arrow_hits: Vec<Vec<u64>>,
    /// `fated[a * n + x]`: `{ a → ((x → y) → x) : y ∈ L }`.
    fated: Vec<u64>,
}

impl MaskTester {
    fn new(algebra: &R0Algebra) -> Self {
        let n = algebra.size();
        let mut arrow_hits = vec![vec![0u64; n]; n];
        for x in algebra.elements() {
            for y in algebra.elements() {
                arrow_hits[x.0][algebra.arrow(x, y).0] |= 1 << y.0;
            }
        }
        let mut fated = vec![0u64; n * n];
        for a in algebra.elements() {
            for x in algebra.elements() {
                for y in algebra.elements() {
                    fated[a.0 * n + x.0] |= 1 << algebra.arrow(a, peirce(algebra, x, y)).0;
                }
            }
        }
        MaskTester {
            n,
            top: algebra.top().0,
            up: algebra.up_masks(),
            arrow_hits,
            fated,
        }
    }

    fn upward_closed(&self, s: u64) -> bool {
        let mut rest = s;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            if self.up[x] & !s != 0 {
                return false;
            }
            rest &= rest - 1;
        }
        true
    }

    fn filter(&self, s: u64) -> bool {
        if s >> self.top & 1 == 0 {
            return false;
        }
        let mut rest = s;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            // Every y with x → y ∈ S must be in S.
            let mut vals = s;
            while vals != 0 {
                let v = vals.trailing_zeros() as usize;
                vals &= vals - 1;
                if self.arrow_hits[x][v] & !s != 0 {
                    return false;
                }
            }
        }
        true
    }

    fn fated(&self, s: u64) -> bool {
        if s >> self.top & 1 == 0 {
            return false;
        }
        let outside = !s & if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        let mut rest = s;
        while rest != 0 {
            let a = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let mut xs = outside;
            while xs != 0 {
                let x = xs.trailing_zeros() as usize;
                xs &= xs - 1;
                if self.fated[a * self.n + x] & s != 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Expands an `(n-1)`-bit counter into a mask with the top bit forced.
    fn with_top(&self, m: u64) -> u64 {
        let low = m & ((1u64 << self.top) - 1);
        let high = (m >> self.top) << (self.top + 1);
        low | high | 1 << self.top
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Filter,
    Fated,
}

fn scan(algebra: &R0Algebra, bound: usize, kind: Kind, prune: bool, exec: Execution) -> Result<Vec<CrispSubset>> {
    let n = algebra.size();
    if n > bound {
        return Err(Error::Capacity { size: n, bound });
    }
    let tester = MaskTester::new(algebra);
    let free_bits = (n - 1) as u32;
    let chunk_bits = CHUNK_BITS.min(free_bits);
    let chunks = 1usize << (free_bits - chunk_bits);
    let per_chunk = 1u64 << chunk_bits;
    let found = map_indexed(exec, chunks, |c| {
        let start = c as u64 * per_chunk;
        (start..start + per_chunk)
            .map(|m| tester.with_top(m))
            .filter(|&s| !prune || tester.upward_closed(s))
            .filter(|&s| match kind {
                Kind::Filter => tester.filter(s),
                Kind::Fated => tester.fated(s),
            })
            .collect::<Vec<u64>>()
    });
    let mut out: Vec<CrispSubset> = found
        .into_iter()
        .flatten()
        .map(|bits| CrispSubset::from_bits(n, bits).expect("mask within carrier"))
        .collect();
    out.sort();
    Ok(out)
}

/// All filters, canonically ordered. Subsets failing upward closure are
/// discarded before the full test.
pub fn enumerate_filters(algebra: &R0Algebra, bound: usize) -> Result<Vec<CrispSubset>> {
    scan(algebra, bound, Kind::Filter, true, Execution::default())
}

/// Unpruned scan over every subset containing `1`, using the report-level
/// predicate. Oracle for [`enumerate_filters`].
pub fn enumerate_filters_naive(algebra: &R0Algebra, bound: usize) -> Result<Vec<CrispSubset>> {
    naive(algebra, bound, |s| is_filter(algebra, s).map(|r| r.passed()))
}

/// Unpruned scan for fated filters; oracle for [`enumerate_fated_filters`].
pub fn enumerate_fated_filters_naive(algebra: &R0Algebra, bound: usize) -> Result<Vec<CrispSubset>> {
    naive(algebra, bound, |s| is_fated_filter(algebra, s).map(|r| r.passed()))
}

fn naive(
    algebra: &R0Algebra,
    bound: usize,
    pred: impl Fn(CrispSubset) -> Result<bool>,
) -> Result<Vec<CrispSubset>> {
    let n = algebra.size();
    if n > bound {
        return Err(Error::Capacity { size: n, bound });
    }
    let mut out = Vec::new();
    for bits in 0..1u64 << n {
        let s = CrispSubset::from_bits(n, bits)?;
        if s.contains(algebra.top()) && pred(s)? {
            out.push(s);
        }
    }
    out.sort();
    Ok(out)
}

pub fn enumerate_fated_filters(algebra: &R0Algebra, bound: usize) -> Result<FatedFilterFamily> {
    enumerate_fated_filters_with(algebra, bound, Execution::default())
}

pub fn enumerate_fated_filters_with(algebra: &R0Algebra, bound: usize, exec: Execution) -> Result<FatedFilterFamily> {
    let members = scan(algebra, bound, Kind::Fated, true, exec)?;
    Ok(FatedFilterFamily::from_members(algebra.size(), members))
}

/// Smallest fated filter containing `s ∪ {1}`.
pub fn fated_closure(algebra: &R0Algebra, s: CrispSubset, bound: usize) -> Result<CrispSubset> {
    check_size(algebra, s)?;
    Ok(enumerate_fated_filters(algebra, bound)?.closure(s))
}

/// The family FF(L) of all fated filters of a finite algebra.
#[derive(Clone, Debug)]
pub struct FatedFilterFamily {
    n: usize,
    members: Vec<CrispSubset>,
    index: HashSet<u64>,
}

impl FatedFilterFamily {
    fn from_members(n: usize, members: Vec<CrispSubset>) -> Self {
        let index = members.iter().map(|s| s.bits()).collect();
        FatedFilterFamily { n, members, index }
    }

    /// Canonically ordered members.
    pub fn members(&self) -> &[CrispSubset] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: CrispSubset) -> bool {
        s.carrier_size() == self.n && self.index.contains(&s.bits())
    }

    /// Membership in FF(L) ∪ {∅}.
    pub fn contains_or_empty(&self, s: CrispSubset) -> bool {
        s.is_empty() || self.contains(s)
    }

    /// A pair of members whose intersection is not a member, if any.
    pub fn intersection_counterexample(&self) -> Option<(CrispSubset, CrispSubset)> {
        self.members.iter().enumerate().find_map(|(i, &a)| {
            self.members[i + 1..]
                .iter()
                .find(|&&b| !self.contains(a.intersection(b)))
                .map(|&b| (a, b))
        })
    }

    /// Intersection of every member containing `s` (and the top element).
    pub fn closure(&self, s: CrispSubset) -> CrispSubset {
        self.members
            .iter()
            .filter(|m| s.is_subset(**m))
            .fold(CrispSubset::full(self.n), |acc, &m| acc.intersection(m))
    }

    /// Least fated filter containing both arguments.
    pub fn join(&self, a: CrispSubset, b: CrispSubset) -> CrispSubset {
        self.closure(a.union(b))
    }
}
