//! Building `(∈, ∈∨q_k)`-fuzzy fated filters from crisp fated filters, and
//! splitting one into two.

use std::collections::BTreeSet;

use crate::algebra::R0Algebra;
use crate::crisp::is_fated_filter;
use crate::error::{Error, Result};
use crate::filters::Analyzer;
use crate::fuzzy::{critical_thresholds, fuzzy_union, image, level_bracket_k, level_u, same_level_family, FuzzySubset};
use crate::grade::{Grade, KParam, Rational};
use crate::report::{CheckReport, Witness};
use crate::subset::CrispSubset;

fn require_fated(algebra: &R0Algebra, s: CrispSubset) -> Result<()> {
    let report = is_fated_filter(algebra, s)?;
    if let Some(e) = report.failures().next() {
        return Err(Error::Precondition(format!(
            "{} is not a fated filter: {} fails at {}",
            s.render(algebra),
            e.condition,
            e.witness.as_ref().map(|w| w.render(algebra)).unwrap_or_default()
        )));
    }
    Ok(())
}

/// `F₀ ⊂ F₁ ⊂ ... ⊂ Fₙ = L`, every member fated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterChain {
    members: Vec<CrispSubset>,
}

impl FilterChain {
    pub fn new(algebra: &R0Algebra, members: Vec<CrispSubset>) -> Result<Self> {
        let Some(last) = members.last() else {
            return Err(Error::Precondition("empty filter chain".into()));
        };
        if !last.is_full() || last.carrier_size() != algebra.size() {
            return Err(Error::Precondition(format!(
                "the last member {} is not the whole carrier",
                last.render(algebra)
            )));
        }
        for pair in members.windows(2) {
            if !pair[0].is_proper_subset(pair[1]) {
                return Err(Error::Precondition(format!(
                    "{} is not a proper subset of {}",
                    pair[0].render(algebra),
                    pair[1].render(algebra)
                )));
            }
        }
        for &m in &members {
            require_fated(algebra, m)?;
        }
        Ok(FilterChain { members })
    }

    pub fn members(&self) -> &[CrispSubset] {
        &self.members
    }

    /// `n`, the number of strict steps.
    pub fn steps(&self) -> usize {
        self.members.len() - 1
    }
}

/// `{ F_t : t ∈ Λ }` with finite `Λ`, every member fated, covering `L` and
/// strictly decreasing in `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedFamily {
    /// Sorted by increasing `t`.
    members: Vec<(Grade, CrispSubset)>,
}

impl IndexedFamily {
    pub fn new(algebra: &R0Algebra, mut members: Vec<(Grade, CrispSubset)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Precondition("empty indexed family".into()));
        }
        members.sort_by_key(|m| m.0);
        if let Some(w) = members.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Domain(format!("index {} given twice", w[0].0)));
        }
        let n = algebra.size();
        for (t, f) in &members {
            if t.is_zero() {
                return Err(Error::Domain("family indices must be positive".into()));
            }
            if f.carrier_size() != n {
                return Err(Error::Domain("family member over a different carrier".into()));
            }
        }
        let union = members
            .iter()
            .fold(CrispSubset::empty(n), |acc, (_, f)| acc.union(*f));
        if !union.is_full() {
            let missing = CrispSubset::full(n).difference(union);
            return Err(Error::Precondition(format!(
                "members do not cover the carrier: {} missing",
                missing.render(algebra)
            )));
        }
        for (i, &(s, fs)) in members.iter().enumerate() {
            for &(t, ft) in &members[i + 1..] {
                // s < t here, so F_t must be a proper subset of F_s.
                if !ft.is_proper_subset(fs) {
                    return Err(Error::Precondition(format!(
                        "indices {s} < {t} but F_{t} = {} is not a proper subset of F_{s} = {}",
                        ft.render(algebra),
                        fs.render(algebra)
                    )));
                }
            }
        }
        for &(_, f) in &members {
            require_fated(algebra, f)?;
        }
        Ok(IndexedFamily { members })
    }

    pub fn members(&self) -> &[(Grade, CrispSubset)] {
        &self.members
    }
}

fn half_open_below(g: Grade, k: KParam) -> bool {
    !g.is_zero() && g < k.half()
}

/// `t₁` on `F`, `t₂` elsewhere, without checking `F`.
pub fn two_level_unchecked(f: CrispSubset, t1: Grade, t2: Grade) -> FuzzySubset {
    FuzzySubset::from_fn(f.carrier_size(), |x| if f.contains(x) { t1 } else { t2 })
}

/// `t₁` on the fated filter `F`, `t₂` elsewhere, with
/// `t₁ ∈ [(1-k)/2, 1]` and `t₂ ∈ (0, (1-k)/2)`.
pub fn two_level(algebra: &R0Algebra, f: CrispSubset, t1: Grade, t2: Grade, k: KParam) -> Result<FuzzySubset> {
    if t1 < k.half() {
        return Err(Error::Domain(format!("t1 = {t1} lies below (1-k)/2 = {}", k.half())));
    }
    if !half_open_below(t2, k) {
        return Err(Error::Domain(format!("t2 = {t2} lies outside (0, {})", k.half())));
    }
    if f.carrier_size() != algebra.size() {
        return Err(Error::Domain("filter over a different carrier".into()));
    }
    require_fated(algebra, f)?;
    Ok(two_level_unchecked(f, t1, t2))
}

/// Grades for [`chain_construction`]; `None` selects the default
/// (`t₀ = (1-k)/2`, `t = t₀`, `tᵢ = (1-k)/2 · (n+1-i)/(n+1)`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainGrades {
    pub t0: Option<Grade>,
    pub t: Option<Grade>,
    pub steps: Option<Vec<Grade>>,
}

/// Evenly spaced `t₁ > ... > tₙ` inside `(0, (1-k)/2)`.
pub fn default_steps(n: usize, k: KParam) -> Vec<Grade> {
    let half = k.half().value();
    let denom = Rational::from_integer(n as i128 + 1);
    (1..=n)
        .map(|i| Grade::new(half * Rational::from_integer((n + 1 - i) as i128) / denom).expect("inside [0, 1]"))
        .collect()
}

/// `t₀` at `1`, `t` on `F₀ ∖ {1}`, `tᵢ` on `Fᵢ ∖ Fᵢ₋₁`.
pub fn chain_construction(algebra: &R0Algebra, chain: &FilterChain, k: KParam, grades: &ChainGrades) -> Result<FuzzySubset> {
    let half = k.half();
    let t0 = grades.t0.unwrap_or(half);
    let t = grades.t.unwrap_or(t0);
    let n = chain.steps();
    let steps = grades.steps.clone().unwrap_or_else(|| default_steps(n, k));
    if t0 < half {
        return Err(Error::Domain(format!("t0 = {t0} lies below (1-k)/2 = {half}")));
    }
    if t < t0 {
        return Err(Error::Domain(format!("t = {t} lies below t0 = {t0}")));
    }
    if steps.len() != n {
        return Err(Error::Domain(format!("{} step grades given for a chain with {n} steps", steps.len())));
    }
    if let Some(s) = steps.iter().find(|s| !half_open_below(**s, k)) {
        return Err(Error::Domain(format!("step grade {s} lies outside (0, {half})")));
    }
    if let Some(w) = steps.windows(2).find(|w| w[0] <= w[1]) {
        return Err(Error::Domain(format!("step grades must decrease strictly: {} then {}", w[0], w[1])));
    }
    let members = chain.members();
    let top = algebra.top();
    Ok(FuzzySubset::from_fn(algebra.size(), |x| {
        if x == top {
            return t0;
        }
        match members.iter().position(|m| m.contains(x)) {
            Some(0) => t,
            Some(i) => steps[i - 1],
            None => unreachable!("the chain ends with the whole carrier"),
        }
    }))
}

/// `μ(x) = max { t ∈ Λ : x ∈ F_t }`, for `Λ ⊆ (0, (1-k)/2]`.
pub fn sup_construction(family: &IndexedFamily, k: KParam) -> Result<FuzzySubset> {
    if let Some((t, _)) = family.members().iter().find(|(t, _)| *t > k.half()) {
        return Err(Error::Domain(format!("index {t} exceeds (1-k)/2 = {}", k.half())));
    }
    let n = family.members()[0].1.carrier_size();
    Ok(FuzzySubset::from_fn(n, |x| {
        family
            .members()
            .iter()
            .rev()
            .find(|(_, f)| f.contains(x))
            .map(|(t, _)| *t)
            .expect("members cover the carrier")
    }))
}

/// Result of [`decompose`]: `μ = ν ∪ γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub nu: FuzzySubset,
    pub gamma: FuzzySubset,
    /// The value of `γ` strictly between `t₃` and `t₂`: their midpoint.
    pub interior: Grade,
}

/// Grades of `μ` below `(1-k)/2`, in decreasing order.
pub fn sub_threshold_values(mu: &FuzzySubset, k: KParam) -> Vec<Grade> {
    let half = k.half();
    image(mu).into_iter().rev().filter(|g| *g < half).collect()
}

/// Splits an `(∈, ∈∨q_k)`-fuzzy fated filter with sub-threshold values
/// `t₁ > t₂ > t₃ > ...` into two proper, non-equivalent ones whose union is
/// `μ`. At least three such values are required, since `γ` uses `t₃`.
pub fn decompose(analyzer: &Analyzer<'_>, mu: &FuzzySubset, k: KParam) -> Result<Decomposition> {
    let check = analyzer.is_qk_fff(mu, k)?;
    if let Some(f) = &check.failure {
        return Err(Error::Precondition(format!(
            "not an (in, in-or-qk)-fuzzy fated filter: {} fails at {}",
            f.condition,
            f.witness.render(analyzer.algebra())
        )));
    }
    let ts = sub_threshold_values(mu, k);
    if ts.len() < 3 {
        return Err(Error::Precondition(format!(
            "{} distinct value(s) below (1-k)/2 = {}; the construction needs t1 > t2 > t3",
            ts.len(),
            k.half()
        )));
    }
    let bracket = |t: Grade| level_bracket_k(mu, t, k).expect("positive threshold");
    let blocks: Vec<CrispSubset> = ts.iter().map(|&t| bracket(t)).collect();
    let top_block = bracket(k.half());
    let interior = ts[1].midpoint(ts[2]);
    let block_of = |x| blocks.iter().position(|b: &CrispSubset| b.contains(x)).expect("last block is L");
    let n = mu.len();
    let nu = FuzzySubset::from_fn(n, |x| ts[block_of(x)]);
    let gamma = FuzzySubset::from_fn(n, |x| {
        if top_block.contains(x) {
            mu.grade(x)
        } else {
            match block_of(x) {
                0 | 1 => interior,
                i => ts[i],
            }
        }
    });
    Ok(Decomposition { nu, gamma, interior })
}

pub const UNION_IDENTITY: &str = "nu u gamma = mu";
pub const NU_PASSES: &str = "nu is an (in, in-or-qk)-fuzzy fated filter";
pub const GAMMA_PASSES: &str = "gamma is an (in, in-or-qk)-fuzzy fated filter";
pub const NU_PROPER: &str = "nu is proper";
pub const GAMMA_PROPER: &str = "gamma is proper";
pub const NON_EQUIVALENT: &str = "nu and gamma have different level families";
pub const QK_INEQUALITIES: &str = "passes the (1-k)/2-bounded inequalities";
pub const QK_POINTWISE: &str = "passes the pointwise fuzzy-point conditions";
pub const HALF_LEVEL: &str = "U(mu;(1-k)/2) = F0";
pub const LEVELS_MATCH_CHAIN: &str = "nonempty U-levels on (0, (1-k)/2] are exactly the chain";

fn verdict_witness(v: &crate::report::Verdict) -> Option<Witness> {
    v.failure.as_ref().map(|f| f.witness.clone().note(f.condition.clone()))
}

/// Re-checks a constructed subset through both characterizations.
pub fn verify_output(analyzer: &Analyzer<'_>, mu: &FuzzySubset, k: KParam) -> Result<CheckReport> {
    let mut report = CheckReport::new("construction output");
    report.record(QK_INEQUALITIES, verdict_witness(&analyzer.is_qk_fff(mu, k)?));
    report.record(QK_POINTWISE, verdict_witness(&analyzer.is_qk_fff_pointwise(mu, k)?));
    Ok(report)
}

/// Distinct nonempty `U(μ; t)` for `t ∈ (0, (1-k)/2]`, smallest first.
pub fn level_chain(mu: &FuzzySubset, k: KParam) -> Vec<CrispSubset> {
    let half = k.half();
    let sets: BTreeSet<CrispSubset> = critical_thresholds(mu, k)
        .into_iter()
        .filter(|t| *t <= half)
        .map(|t| level_u(mu, t).expect("positive threshold"))
        .filter(|s| !s.is_empty())
        .collect();
    let mut out: Vec<CrispSubset> = sets.into_iter().collect();
    out.sort_by_key(|s| s.len());
    out
}

/// Both checkers plus the level round trip for a chain construction.
pub fn verify_chain_output(analyzer: &Analyzer<'_>, chain: &FilterChain, mu: &FuzzySubset, k: KParam) -> Result<CheckReport> {
    let mut report = verify_output(analyzer, mu, k)?;
    let algebra = analyzer.algebra();
    let at_half = level_u(mu, k.half())?;
    report.record(
        HALF_LEVEL,
        (at_half != chain.members()[0]).then(|| Witness::new().note(format!("U = {}", at_half.render(algebra)))),
    );
    let levels = level_chain(mu, k);
    report.record(
        LEVELS_MATCH_CHAIN,
        (levels != chain.members()).then(|| {
            let shown: Vec<String> = levels.iter().map(|s| s.render(algebra)).collect();
            Witness::new().note(format!("levels {}", shown.join(" < ")))
        }),
    );
    Ok(report)
}

/// The four postconditions of [`decompose`].
pub fn verify_decomposition(analyzer: &Analyzer<'_>, mu: &FuzzySubset, k: KParam, d: &Decomposition) -> Result<CheckReport> {
    let mut report = CheckReport::new("decomposition");
    let union = fuzzy_union(&d.nu, &d.gamma)?;
    let mismatch = (0..mu.len())
        .map(crate::algebra::ElementId)
        .find(|&x| union.grade(x) != mu.grade(x));
    report.record(UNION_IDENTITY, mismatch.map(|x| Witness::new().element("x", x)));
    report.record(NU_PASSES, verdict_witness(&analyzer.is_qk_fff(&d.nu, k)?));
    report.record(GAMMA_PASSES, verdict_witness(&analyzer.is_qk_fff(&d.gamma, k)?));
    let proper = |f: &FuzzySubset| (image(f).len() < 2).then(|| Witness::new().note("single value"));
    report.record(NU_PROPER, proper(&d.nu));
    report.record(GAMMA_PROPER, proper(&d.gamma));
    report.record(
        NON_EQUIVALENT,
        same_level_family(&d.nu, &d.gamma)?.then(|| Witness::new().note("same level family")),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::boolean_algebra;
    use crate::crisp::{enumerate_fated_filters, enumerate_filters};
    use crate::fixtures;
    use crate::fuzzy::level_family;

    fn g(num: i128, den: i128) -> Grade {
        Grade::ratio(num, den).unwrap()
    }

    fn k(num: i128, den: i128) -> KParam {
        KParam::ratio(num, den).unwrap()
    }

    fn set(a: &R0Algebra, names: &[&str]) -> CrispSubset {
        CrispSubset::from_elements(a.size(), names.iter().map(|n| a.lookup(n).unwrap()))
    }

    #[test]
    fn two_level_ranges() {
        let b = fixtures::boolean2();
        let an = Analyzer::new(&b, 24).unwrap();
        let unit = set(&b, &["1"]);
        let kk = k(1, 5);
        let mu = two_level(&b, unit, kk.half(), g(39, 100), kk).unwrap();
        assert!(an.is_qk_fff(&mu, kk).unwrap().passed());
        assert_eq!(level_u(&mu, g(2, 5)).unwrap(), unit);
        assert_eq!(level_u(&mu, g(39, 100)).unwrap(), CrispSubset::full(2));
        assert!(matches!(two_level(&b, unit, g(1, 2), g(2, 5), kk), Err(Error::Domain(_))));
        assert!(matches!(two_level(&b, unit, g(1, 5), g(1, 10), kk), Err(Error::Domain(_))));
        assert!(matches!(two_level(&b, unit, g(1, 2), Grade::ZERO, kk), Err(Error::Domain(_))));

        let a = fixtures::example34();
        assert!(matches!(
            two_level(&a, set(&a, &["1"]), g(1, 2), g(1, 5), KParam::ZERO),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn non_fated_two_level_fails_checker() {
        let a = fixtures::example34();
        let an = Analyzer::new(&a, 24).unwrap();
        let fated = enumerate_fated_filters(&a, 24).unwrap();
        for f in enumerate_filters(&a, 24).unwrap() {
            let mu = two_level_unchecked(f, g(1, 2), g(1, 5));
            assert_eq!(an.is_qk_fff(&mu, KParam::ZERO).unwrap().passed(), fated.contains(f));
        }
    }

    #[test]
    fn chain_round_trip() {
        let a = fixtures::example34();
        let an = Analyzer::new(&a, 24).unwrap();
        let chain = FilterChain::new(&a, vec![set(&a, &["c", "d", "1"]), CrispSubset::full(6)]).unwrap();
        for kk in [KParam::ZERO, k(2, 5)] {
            let mu = chain_construction(&a, &chain, kk, &ChainGrades::default()).unwrap();
            let report = verify_chain_output(&an, &chain, &mu, kk).unwrap();
            assert!(report.passed(), "{}", report.render(&a));
        }
        let mu = chain_construction(&a, &chain, KParam::ZERO, &ChainGrades::default()).unwrap();
        assert_eq!(mu.grade(a.top()), g(1, 2));
        assert_eq!(mu.grade(a.lookup("0").unwrap()), g(1, 4));

        let degenerate = FilterChain::new(&a, vec![CrispSubset::full(6)]).unwrap();
        let mu = chain_construction(&a, &degenerate, KParam::ZERO, &ChainGrades::default()).unwrap();
        assert!(an.is_qk_fff(&mu, KParam::ZERO).unwrap().passed());

        assert!(FilterChain::new(&a, vec![set(&a, &["1"]), CrispSubset::full(6)]).is_err());
        assert!(FilterChain::new(&a, vec![set(&a, &["c", "d", "1"])]).is_err());

        let bad = ChainGrades {
            steps: Some(vec![g(1, 2)]),
            ..ChainGrades::default()
        };
        assert!(matches!(chain_construction(&a, &chain, KParam::ZERO, &bad), Err(Error::Domain(_))));
        let bad = ChainGrades {
            t0: Some(g(3, 5)),
            t: Some(g(11, 20)),
            steps: None,
        };
        assert!(matches!(chain_construction(&a, &chain, KParam::ZERO, &bad), Err(Error::Domain(_))));
    }

    #[test]
    fn boolean_chain_with_unit() {
        let b = fixtures::boolean2();
        let an = Analyzer::new(&b, 24).unwrap();
        let chain = FilterChain::new(&b, vec![set(&b, &["1"]), CrispSubset::full(2)]).unwrap();
        let mu = chain_construction(&b, &chain, KParam::ZERO, &ChainGrades::default()).unwrap();
        assert_eq!(level_u(&mu, g(1, 2)).unwrap(), set(&b, &["1"]));
        assert!(verify_chain_output(&an, &chain, &mu, KParam::ZERO).unwrap().passed());
        let family: Vec<CrispSubset> = level_family(&mu).into_iter().filter(|s| !s.is_empty()).collect();
        assert_eq!(family, vec![set(&b, &["1"]), CrispSubset::full(2)]);
    }

    #[test]
    fn sup_families() {
        let a = fixtures::example34();
        let an = Analyzer::new(&a, 24).unwrap();
        let single = IndexedFamily::new(&a, vec![(g(3, 10), CrispSubset::full(6))]).unwrap();
        assert_eq!(sup_construction(&single, KParam::ZERO).unwrap(), FuzzySubset::constant(6, g(3, 10)));

        let cd1 = set(&a, &["c", "d", "1"]);
        let two = IndexedFamily::new(&a, vec![(g(1, 5), CrispSubset::full(6)), (g(2, 5), cd1)]).unwrap();
        let mu = sup_construction(&two, KParam::ZERO).unwrap();
        assert_eq!(mu.grade(a.top()), g(2, 5));
        assert_eq!(mu.grade(a.lookup("a").unwrap()), g(1, 5));
        assert!(verify_output(&an, &mu, KParam::ZERO).unwrap().passed());
        assert!(matches!(sup_construction(&two, k(1, 2)), Err(Error::Domain(_))));

        // Not covering, not decreasing, not fated.
        assert!(IndexedFamily::new(&a, vec![(g(1, 5), cd1)]).is_err());
        assert!(IndexedFamily::new(&a, vec![(g(2, 5), CrispSubset::full(6)), (g(1, 5), cd1)]).is_err());
        assert!(IndexedFamily::new(&a, vec![(g(1, 5), CrispSubset::full(6)), (g(2, 5), set(&a, &["1"]))]).is_err());
    }

    #[test]
    fn decomposition() {
        let b = boolean_algebra(2).unwrap();
        let an = Analyzer::new(&b, 24).unwrap();
        let mu = FuzzySubset::from_fn(4, |x| match b.name(x) {
            "1" => g(2, 5),
            "a" => g(3, 10),
            _ => g(1, 10),
        });
        let kk = KParam::ZERO;
        assert!(an.is_qk_fff(&mu, kk).unwrap().passed());
        let d = decompose(&an, &mu, kk).unwrap();
        assert_eq!(d.interior, g(1, 5));
        let report = verify_decomposition(&an, &mu, kk, &d).unwrap();
        assert!(report.passed(), "{}", report.render(&b));

        let a = fixtures::example34();
        let an = Analyzer::new(&a, 24).unwrap();
        let m15 = fixtures::mu315(&a);
        assert!(matches!(decompose(&an, &m15, k(2, 5)), Err(Error::Precondition(_))));
        assert!(matches!(decompose(&an, &m15, k(3, 10)), Err(Error::Precondition(_))));
    }
}
