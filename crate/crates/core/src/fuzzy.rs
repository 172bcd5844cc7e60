//! Fuzzy subsets, fuzzy points, the membership relations `∈`, `q`, `q_k`,
//! `∈∨q_k`, and their level sets.
//!
//! Every quantifier over a continuous threshold `t ∈ (0, 1]` is decided on
//! the finite grid from [`critical_thresholds`]: between two consecutive
//! breakpoints no membership relation changes truth value, so one sample
//! per open cell plus the breakpoints themselves is exhaustive.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::algebra::{ElementId, R0Algebra};
use crate::error::{Error, Result};
use crate::grade::{Grade, KParam, Rational};
use crate::subset::CrispSubset;

/// A total map from carrier elements to grades.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FuzzySubset {
    grades: Vec<Grade>,
}

impl FuzzySubset {
    pub fn new(grades: Vec<Grade>) -> Self {
        FuzzySubset { grades }
    }

    pub fn constant(n: usize, g: Grade) -> Self {
        FuzzySubset { grades: vec![g; n] }
    }

    pub fn from_fn(n: usize, f: impl FnMut(ElementId) -> Grade) -> Self {
        FuzzySubset {
            grades: (0..n).map(ElementId).map(f).collect(),
        }
    }

    /// 1 on `s`, 0 elsewhere.
    pub fn characteristic(s: CrispSubset) -> Self {
        FuzzySubset::from_fn(s.carrier_size(), |x| if s.contains(x) { Grade::ONE } else { Grade::ZERO })
    }

    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }

    pub fn grade(&self, x: ElementId) -> Grade {
        self.grades[x.0]
    }

    pub fn grades(&self) -> &[Grade] {
        &self.grades
    }

    pub fn set(&mut self, x: ElementId, g: Grade) {
        self.grades[x.0] = g;
    }

    pub(crate) fn check_algebra(&self, algebra: &R0Algebra) -> Result<()> {
        if self.len() != algebra.size() {
            return Err(Error::Domain(format!(
                "fuzzy subset over {} elements used with an algebra of size {}",
                self.len(),
                algebra.size()
            )));
        }
        Ok(())
    }

    /// Parses `<element> = <grade>` lines; every element must appear once.
    pub fn parse(algebra: &R0Algebra, text: &str) -> Result<Self> {
        let n = algebra.size();
        let mut grades: Vec<Option<Grade>> = vec![None; n];
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (name, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(line_no, "expected `<element> = <grade>`"))?;
            let name = name.trim();
            let x = algebra
                .lookup(name)
                .ok_or_else(|| Error::parse(line_no, format!("unknown element `{name}`")))?;
            let g: Grade = value
                .parse()
                .map_err(|e: Error| Error::parse(line_no, e.to_string()))?;
            if grades[x.0].replace(g).is_some() {
                return Err(Error::parse(line_no, format!("element `{name}` listed twice")));
            }
        }
        if let Some(missing) = grades.iter().position(Option::is_none) {
            return Err(Error::parse(
                last_line.max(1),
                format!("no grade given for element `{}`", algebra.name(ElementId(missing))),
            ));
        }
        Ok(FuzzySubset {
            grades: grades.into_iter().map(Option::unwrap).collect(),
        })
    }

    pub fn to_text(&self, algebra: &R0Algebra) -> String {
        let mut out = String::new();
        for x in algebra.elements() {
            let _ = writeln!(out, "{} = {}", algebra.name(x), self.grade(x));
        }
        out
    }

    pub fn render(&self, algebra: &R0Algebra) -> String {
        let parts: Vec<String> = algebra
            .elements()
            .map(|x| format!("{}={}", algebra.name(x), self.grade(x)))
            .collect();
        parts.join(" ")
    }
}

/// The fuzzy point `x_t`: value `t > 0` at `x`, zero elsewhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FuzzyPoint {
    support: ElementId,
    value: Grade,
}

impl FuzzyPoint {
    pub fn new(support: ElementId, value: Grade) -> Result<Self> {
        if value.is_zero() {
            return Err(Error::Domain("a fuzzy point needs a value in (0, 1]".into()));
        }
        Ok(FuzzyPoint { support, value })
    }

    pub fn support(self) -> ElementId {
        self.support
    }

    pub fn value(self) -> Grade {
        self.value
    }
}

fn support_grade(p: FuzzyPoint, mu: &FuzzySubset) -> Result<Rational> {
    if p.support.0 >= mu.len() {
        return Err(Error::Domain(format!(
            "point support {} outside a fuzzy subset over {} elements",
            p.support.0,
            mu.len()
        )));
    }
    Ok(mu.grade(p.support).value())
}

/// `x_t ∈ μ`: `μ(x) ≥ t`.
pub fn belongs(p: FuzzyPoint, mu: &FuzzySubset) -> Result<bool> {
    Ok(support_grade(p, mu)? >= p.value.value())
}

/// `x_t q μ`: `μ(x) + t > 1`.
pub fn quasi(p: FuzzyPoint, mu: &FuzzySubset) -> Result<bool> {
    quasi_k(p, mu, KParam::ZERO)
}

/// `x_t q_k μ`: `μ(x) + t + k > 1`.
pub fn quasi_k(p: FuzzyPoint, mu: &FuzzySubset, k: KParam) -> Result<bool> {
    Ok(support_grade(p, mu)? + p.value.value() + k.value() > Rational::one())
}

/// `x_t ∈∨q_k μ`.
pub fn in_vee_qk(p: FuzzyPoint, mu: &FuzzySubset, k: KParam) -> Result<bool> {
    Ok(belongs(p, mu)? || quasi_k(p, mu, k)?)
}

/// `x_t ∈∨q μ`.
pub fn in_vee_q(p: FuzzyPoint, mu: &FuzzySubset) -> Result<bool> {
    in_vee_qk(p, mu, KParam::ZERO)
}

fn positive(t: Grade) -> Result<()> {
    if t.is_zero() {
        return Err(Error::Domain("level threshold must lie in (0, 1]".into()));
    }
    Ok(())
}

fn collect_level(mu: &FuzzySubset, t: Grade, pred: impl Fn(ElementId) -> bool) -> Result<CrispSubset> {
    positive(t)?;
    Ok(CrispSubset::from_elements(mu.len(), (0..mu.len()).map(ElementId).filter(|&x| pred(x))))
}

/// `U(μ; t) = { x : μ(x) ≥ t }`.
pub fn level_u(mu: &FuzzySubset, t: Grade) -> Result<CrispSubset> {
    collect_level(mu, t, |x| mu.grade(x) >= t)
}

/// `Q_k(μ; t) = { x : x_t q_k μ }`.
pub fn level_qk(mu: &FuzzySubset, t: Grade, k: KParam) -> Result<CrispSubset> {
    let bound = Rational::one() - k.value() - t.value();
    collect_level(mu, t, |x| mu.grade(x).value() > bound)
}

/// `Q(μ; t)`, the case `k = 0`.
pub fn level_q(mu: &FuzzySubset, t: Grade) -> Result<CrispSubset> {
    level_qk(mu, t, KParam::ZERO)
}

/// `[μ]_t^k = { x : x_t ∈∨q_k μ }`.
pub fn level_bracket_k(mu: &FuzzySubset, t: Grade, k: KParam) -> Result<CrispSubset> {
    let bound = Rational::one() - k.value() - t.value();
    collect_level(mu, t, |x| mu.grade(x) >= t || mu.grade(x).value() > bound)
}

/// `[μ]_t`, the case `k = 0`.
pub fn level_bracket(mu: &FuzzySubset, t: Grade) -> Result<CrispSubset> {
    level_bracket_k(mu, t, KParam::ZERO)
}

/// Values in `(0, 1]` at which some relation `x_t ∈ μ` or `x_t q_k μ` can
/// change truth value, plus `(1 - k)/2` and `1`. Sorted and deduplicated.
pub fn breakpoints(mu: &FuzzySubset, k: KParam) -> Vec<Grade> {
    let one = Rational::one();
    let mut points: BTreeSet<Grade> = BTreeSet::new();
    for &g in mu.grades() {
        let v = g.value();
        for candidate in [v, one - k.value() - v] {
            if candidate > Rational::zero() && candidate <= one {
                points.insert(Grade::new(candidate).expect("checked range"));
            }
        }
    }
    points.insert(k.half());
    points.insert(Grade::ONE);
    points.into_iter().collect()
}

/// The breakpoints together with one interior sample of every open cell
/// `(0, b₀), (b₀, b₁), ...`. A statement about level sets that is quantified
/// over `t` in an interval is decided by the grid points inside it.
pub fn critical_thresholds(mu: &FuzzySubset, k: KParam) -> Vec<Grade> {
    let points = breakpoints(mu, k);
    let mut grid = Vec::with_capacity(points.len() * 2);
    let mut prev = Grade::ZERO;
    for p in points {
        grid.push(prev.midpoint(p));
        grid.push(p);
        prev = p;
    }
    grid
}

pub fn fuzzy_union(mu: &FuzzySubset, nu: &FuzzySubset) -> Result<FuzzySubset> {
    if mu.len() != nu.len() {
        return Err(Error::Domain("fuzzy subsets over different carriers".into()));
    }
    Ok(FuzzySubset::new(
        mu.grades().iter().zip(nu.grades()).map(|(a, b)| *a.max(b)).collect(),
    ))
}

/// `Im(μ)`.
pub fn image(mu: &FuzzySubset) -> BTreeSet<Grade> {
    mu.grades().iter().copied().collect()
}

/// `{ U(μ; t) : t ∈ (0, 1] }`, including `∅` when `max μ < 1`.
pub fn level_family(mu: &FuzzySubset) -> BTreeSet<CrispSubset> {
    critical_thresholds(mu, KParam::ZERO)
        .into_iter()
        .map(|t| level_u(mu, t).expect("grid points are positive"))
        .collect()
}

/// Whether two fuzzy subsets have the same family of `U`-level subsets.
pub fn same_level_family(mu: &FuzzySubset, nu: &FuzzySubset) -> Result<bool> {
    if mu.len() != nu.len() {
        return Err(Error::Domain("fuzzy subsets over different carriers".into()));
    }
    Ok(level_family(mu) == level_family(nu))
}

/// Which level set a [`level_table`] describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelKind {
    U,
    Qk,
    Bracket,
}

/// One row of a level table: the set is constant for `t ∈ (lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelRow {
    pub lo: Grade,
    pub hi: Grade,
    pub set: CrispSubset,
}

/// Maximal half-open intervals `(lo, hi]` within `(from, to]` on which the
/// chosen level set is constant, listed from high `t` to low.
pub fn level_table(mu: &FuzzySubset, kind: LevelKind, k: KParam, from: Grade, to: Grade) -> Vec<LevelRow> {
    let eval = |t: Grade| match kind {
        LevelKind::U => level_u(mu, t),
        LevelKind::Qk => level_qk(mu, t, k),
        LevelKind::Bracket => level_bracket_k(mu, t, k),
    }
    .expect("positive threshold");
    let mut rows: Vec<LevelRow> = Vec::new();
    let mut lo = Grade::ZERO;
    for hi in breakpoints(mu, k) {
        let set = eval(hi);
        match rows.last_mut() {
            Some(row) if row.set == set => row.hi = hi,
            _ => rows.push(LevelRow { lo, hi, set }),
        }
        lo = hi;
    }
    let mut clipped: Vec<LevelRow> = rows
        .into_iter()
        .filter_map(|r| {
            let lo = r.lo.max(from);
            let hi = r.hi.min(to);
            (lo < hi).then_some(LevelRow { lo, hi, set: r.set })
        })
        .collect();
    clipped.reverse();
    clipped
}

/// Grades, bounds and grid points of one `(μ, k)` replaced by their ranks
/// in a single sorted list, so every comparison a checker makes becomes an
/// integer comparison. Ranks are exact: equal rationals share a rank.
#[derive(Clone, Debug)]
pub(crate) struct Ranked {
    /// Rank of `μ(x)`.
    pub grade: Vec<u32>,
    /// Rank of `1 - k - μ(x)`; `x_t q_k μ` iff `rank(t) > q_bound[x]`.
    pub q_bound: Vec<u32>,
    #[cfg_attr(not(test), allow(dead_code))]
    pub half: u32,
    /// Ascending ranks of the critical thresholds.
    pub grid: Vec<u32>,
    pub grid_values: Vec<Grade>,
}

impl Ranked {
    pub fn new(mu: &FuzzySubset, k: KParam) -> Self {
        let grid_values = critical_thresholds(mu, k);
        let one = Rational::one();
        let q_values: Vec<Rational> = mu.grades().iter().map(|g| one - k.value() - g.value()).collect();
        let mut all: Vec<Rational> = mu
            .grades()
            .iter()
            .map(|g| g.value())
            .chain(q_values.iter().copied())
            .chain(grid_values.iter().map(|g| g.value()))
            .chain([k.half().value()])
            .collect();
        all.sort();
        all.dedup();
        let rank = |v: Rational| all.binary_search(&v).expect("value was inserted") as u32;
        Ranked {
            grade: mu.grades().iter().map(|g| rank(g.value())).collect(),
            q_bound: q_values.into_iter().map(rank).collect(),
            half: rank(k.half().value()),
            grid: grid_values.iter().map(|g| rank(g.value())).collect(),
            grid_values,
        }
    }

    /// `x_t ∈ μ` for the grid point with index `i`.
    #[inline]
    pub fn belongs(&self, x: usize, i: usize) -> bool {
        self.grade[x] >= self.grid[i]
    }

    /// `x_t q_k μ` for the grid point with index `i`.
    #[inline]
    pub fn quasi(&self, x: usize, i: usize) -> bool {
        self.grid[i] > self.q_bound[x]
    }

    #[inline]
    pub fn in_vee_q(&self, x: usize, i: usize) -> bool {
        self.belongs(x, i) || self.quasi(x, i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn g(num: i128, den: i128) -> Grade {
        Grade::ratio(num, den).unwrap()
    }

    fn k(num: i128, den: i128) -> KParam {
        KParam::ratio(num, den).unwrap()
    }

    fn set(a: &R0Algebra, names: &[&str]) -> CrispSubset {
        CrispSubset::from_elements(a.size(), names.iter().map(|n| a.lookup(n).unwrap()))
    }

    fn pt(a: &R0Algebra, name: &str, t: Grade) -> FuzzyPoint {
        FuzzyPoint::new(a.lookup(name).unwrap(), t).unwrap()
    }

    #[test]
    fn membership_relations() {
        let a = fixtures::example34();
        let mu = fixtures::mu34(&a);
        let nu = fixtures::nu34(&a);
        assert!(belongs(pt(&a, "c", g(6, 10)), &mu).unwrap());
        assert!(!belongs(pt(&a, "d", g(5, 10)), &mu).unwrap());
        assert!(belongs(pt(&a, "d", g(4, 10)), &mu).unwrap());
        assert!(quasi_k(pt(&a, "c", g(1, 2)), &nu, k(1, 5)).unwrap());
        // 0.3 + 0.5 + 0.2 = 1 exactly: not strictly greater.
        assert!(!quasi_k(pt(&a, "0", g(1, 2)), &nu, k(1, 5)).unwrap());
        assert!(FuzzyPoint::new(ElementId(0), Grade::ZERO).is_err());
        let far = FuzzyPoint::new(ElementId(9), g(1, 2)).unwrap();
        assert!(belongs(far, &mu).is_err());
    }

    #[test]
    fn in_vee_qk_cases() {
        let one = FuzzySubset::constant(1, g(3, 10));
        let x = |t| FuzzyPoint::new(ElementId(0), t).unwrap();
        assert!(in_vee_qk(x(g(3, 10)), &one, k(1, 5)).unwrap());
        assert!(in_vee_qk(x(g(9, 10)), &one, KParam::ZERO).unwrap());
        assert!(!in_vee_qk(x(g(4, 10)), &one, k(1, 5)).unwrap());
    }

    #[test]
    fn level_sets_of_examples() {
        let a = fixtures::example34();
        let mu = fixtures::mu315(&a);
        assert_eq!(level_u(&mu, g(2, 10)).unwrap(), set(&a, &["c", "d", "1"]));
        assert_eq!(level_u(&mu, g(32, 100)).unwrap(), set(&a, &["c", "d"]));
        assert_eq!(level_u(&mu, g(1, 10)).unwrap(), CrispSubset::full(6));
        assert!(level_u(&mu, Grade::ZERO).is_err());
        assert!(level_qk(&mu, Grade::ZERO, k(1, 5)).is_err());
        let nu = fixtures::nu34(&a);
        assert_eq!(level_qk(&nu, g(7, 10), k(1, 5)).unwrap(), CrispSubset::full(6));
        assert_eq!(level_qk(&nu, g(45, 100), k(1, 5)).unwrap(), set(&a, &["c", "d", "1"]));
    }

    #[test]
    fn k_zero_reductions() {
        let a = fixtures::example34();
        let nu = fixtures::nu34(&a);
        for t in critical_thresholds(&nu, KParam::ZERO) {
            assert_eq!(level_qk(&nu, t, KParam::ZERO).unwrap(), level_q(&nu, t).unwrap());
            assert_eq!(level_bracket_k(&nu, t, KParam::ZERO).unwrap(), level_bracket(&nu, t).unwrap());
            let p = FuzzyPoint::new(ElementId(3), t).unwrap();
            assert_eq!(quasi(p, &nu).unwrap(), quasi_k(p, &nu, KParam::ZERO).unwrap());
            assert_eq!(in_vee_q(p, &nu).unwrap(), in_vee_qk(p, &nu, KParam::ZERO).unwrap());
        }
    }

    #[test]
    fn thresholds_of_constant_one() {
        let mu = FuzzySubset::constant(3, Grade::ONE);
        let grid = critical_thresholds(&mu, KParam::ZERO);
        assert!(grid.contains(&g(1, 2)));
        assert!(grid.contains(&Grade::ONE));
        assert_eq!(grid, vec![g(1, 4), g(1, 2), g(3, 4), Grade::ONE]);
    }

    #[test]
    fn thresholds_of_mu315() {
        let a = fixtures::example34();
        let mu = fixtures::mu315(&a);
        let grid = critical_thresholds(&mu, k(2, 5));
        for v in [g(1, 10), g(3, 10), g(7, 10), g(9, 10)] {
            assert!(grid.contains(&v), "missing {v}");
        }
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
        assert!(grid.iter().all(|t| !t.is_zero()));
    }

    #[test]
    fn union_and_image() {
        let a = fixtures::example34();
        let mu = fixtures::mu34(&a);
        assert_eq!(fuzzy_union(&mu, &mu).unwrap(), mu);
        let img: Vec<Grade> = image(&mu).into_iter().collect();
        assert_eq!(img, vec![g(2, 10), g(4, 10), g(6, 10), g(7, 10)]);
        assert!(same_level_family(&mu, &mu).unwrap());
        // Raise d above every other grade: {d} becomes a level set of nu only.
        let mut nu = mu.clone();
        nu.set(a.lookup("d").unwrap(), g(9, 10));
        assert!(!same_level_family(&mu, &nu).unwrap());
        // A strictly monotone regrading keeps the family.
        let halved = FuzzySubset::from_fn(6, |x| Grade::new(mu.grade(x).value() / 2).unwrap());
        assert!(same_level_family(&mu, &halved).unwrap());
    }

    #[test]
    fn level_table_of_mu315() {
        let a = fixtures::example34();
        let mu = fixtures::mu315(&a);
        let rows = level_table(&mu, LevelKind::U, k(3, 10), Grade::ZERO, g(7, 20));
        let got: Vec<(Grade, Grade, CrispSubset)> = rows.iter().map(|r| (r.lo, r.hi, r.set)).collect();
        assert_eq!(
            got,
            vec![
                (g(3, 10), g(7, 20), set(&a, &["c", "d"])),
                (g(1, 10), g(3, 10), set(&a, &["c", "d", "1"])),
                (Grade::ZERO, g(1, 10), CrispSubset::full(6)),
            ]
        );
        let single = level_table(&FuzzySubset::constant(6, Grade::ONE), LevelKind::U, KParam::ZERO, Grade::ZERO, Grade::ONE);
        assert_eq!(single.len(), 1);
        assert_eq!((single[0].lo, single[0].hi, single[0].set), (Grade::ZERO, Grade::ONE, CrispSubset::full(6)));
    }

    #[test]
    fn parse_fuzzy_subsets() {
        let a = fixtures::example34();
        let mu = fixtures::mu34(&a);
        assert_eq!(FuzzySubset::parse(&a, &mu.to_text(&a)).unwrap(), mu);
        let missing = "0 = 0.1\n";
        assert!(matches!(FuzzySubset::parse(&a, missing), Err(Error::Parse { .. })));
        let bad = "0 = 0.1\na = 1.5\n";
        assert!(matches!(FuzzySubset::parse(&a, bad), Err(Error::Parse { line: 2, .. })));
        let dup = "0 = 0.1\n0 = 0.2\n";
        assert!(matches!(FuzzySubset::parse(&a, dup), Err(Error::Parse { line: 2, .. })));
        let frac = "0 = 1/10\na = 1/10\nb = 1/10\nc = 7/10\nd = 9/10\n1 = 3/10\n";
        assert_eq!(FuzzySubset::parse(&a, frac).unwrap(), fixtures::mu315(&a));
    }

    fn grade_strategy() -> impl Strategy<Value = Grade> {
        (1i128..=12).prop_flat_map(|den| (0..=den).prop_map(move |num| Grade::ratio(num, den).unwrap()))
    }

    fn k_strategy() -> impl Strategy<Value = KParam> {
        (1i128..=12).prop_flat_map(|den| (0..den).prop_map(move |num| KParam::ratio(num, den).unwrap()))
    }

    fn subset_strategy() -> impl Strategy<Value = FuzzySubset> {
        proptest::collection::vec(grade_strategy(), 1..7).prop_map(FuzzySubset::new)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        /// Level sets at any t strictly inside a grid cell equal those at the
        /// cell's own sample point.
        #[test]
        fn grid_is_sound(mu in subset_strategy(), k in k_strategy(), num in 1i128..1000) {
            let t = Grade::ratio(num, 1000).unwrap();
            let points = breakpoints(&mu, k);
            let grid = critical_thresholds(&mu, k);
            // Sample point for the cell containing t.
            let sample = match points.iter().position(|p| *p >= t) {
                Some(i) if points[i] == t => t,
                Some(i) => {
                    let lo = if i == 0 { Grade::ZERO } else { points[i - 1] };
                    lo.midpoint(points[i])
                }
                None => unreachable!("1 is always a breakpoint"),
            };
            prop_assert!(grid.contains(&sample));
            prop_assert_eq!(level_u(&mu, t).unwrap(), level_u(&mu, sample).unwrap());
            prop_assert_eq!(level_qk(&mu, t, k).unwrap(), level_qk(&mu, sample, k).unwrap());
        }

        #[test]
        fn bracket_is_union(mu in subset_strategy(), k in k_strategy()) {
            for t in critical_thresholds(&mu, k) {
                let u = level_u(&mu, t).unwrap();
                let q = level_qk(&mu, t, k).unwrap();
                prop_assert_eq!(level_bracket_k(&mu, t, k).unwrap(), u.union(q));
            }
        }

        #[test]
        fn levels_nest(mu in subset_strategy(), k in k_strategy(), k2 in k_strategy()) {
            let grid = critical_thresholds(&mu, k);
            for w in grid.windows(2) {
                let (t, t2) = (w[0], w[1]);
                prop_assert!(level_u(&mu, t2).unwrap().is_subset(level_u(&mu, t).unwrap()));
                prop_assert!(level_qk(&mu, t, k).unwrap().is_subset(level_qk(&mu, t2, k).unwrap()));
            }
            let (lo, hi) = if k <= k2 { (k, k2) } else { (k2, k) };
            for t in grid {
                prop_assert!(level_qk(&mu, t, lo).unwrap().is_subset(level_qk(&mu, t, hi).unwrap()));
            }
        }

        #[test]
        fn ranks_agree_with_rationals(mu in subset_strategy(), k in k_strategy()) {
            let r = Ranked::new(&mu, k);
            for (i, t) in r.grid_values.iter().enumerate() {
                for x in 0..mu.len() {
                    let p = FuzzyPoint::new(ElementId(x), *t).unwrap();
                    prop_assert_eq!(r.belongs(x, i), belongs(p, &mu).unwrap());
                    prop_assert_eq!(r.quasi(x, i), quasi_k(p, &mu, k).unwrap());
                }
                prop_assert_eq!(r.grid[i] <= r.half, *t <= k.half());
            }
        }

        #[test]
        fn text_round_trip(mu in proptest::collection::vec(grade_strategy(), 6..=6)) {
            let a = fixtures::example34();
            let mu = FuzzySubset::new(mu);
            prop_assert_eq!(FuzzySubset::parse(&a, &mu.to_text(&a)).unwrap(), mu);
        }
    }
}
