//! Seeded random sweeps: many fuzzy subsets of one algebra, each pushed
//! through every checker, with equivalence, implication and monotonicity
//! claims tallied across the whole batch.

use std::collections::BTreeSet;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filters::Analyzer;
use crate::fuzzy::{image, FuzzySubset};
use crate::grade::{Grade, KParam};
use crate::par::{map_indexed, Execution};
use crate::report::{ClaimTally, Verdict};
use crate::subset::CrispSubset;

pub const DEFAULT_SWEEP: usize = 10_000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_DENOMINATOR: u32 = 10;
/// Largest accepted grade denominator.
pub const MAX_DENOMINATOR: u32 = 1000;

/// Subjects evaluated per parallel task.
const BATCH: usize = 64;

/// `0, 1/5, 3/10, 2/5, 1/2`.
pub fn default_k_grid() -> Vec<KParam> {
    [(0, 1), (1, 5), (3, 10), (2, 5), (1, 2)]
        .into_iter()
        .map(|(p, q)| KParam::ratio(p, q).expect("valid k"))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub count: usize,
    pub seed: u64,
    pub denominator: u32,
    /// Sorted ascending and deduplicated before use.
    pub k_grid: Vec<KParam>,
    pub exec: Execution,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            count: DEFAULT_SWEEP,
            seed: DEFAULT_SEED,
            denominator: DEFAULT_DENOMINATOR,
            k_grid: default_k_grid(),
            exec: Execution::default(),
        }
    }
}

/// Every fraction `p/q` in `[0, 1]` with `q ≤ denominator`, ascending.
pub fn grade_grid(denominator: u32) -> Result<Vec<Grade>> {
    if denominator == 0 || denominator > MAX_DENOMINATOR {
        return Err(Error::Domain(format!(
            "grade denominator must lie in 1..={MAX_DENOMINATOR}, got {denominator}"
        )));
    }
    let mut set = BTreeSet::new();
    for q in 1..=denominator as i128 {
        for p in 0..=q {
            if p.gcd(&q) == 1 {
                set.insert(Grade::ratio(p, q)?);
            }
        }
    }
    Ok(set.into_iter().collect())
}

/// Deterministic source of random fuzzy subsets: subject `i` depends only
/// on the seed and `i`. Even subjects are uniform over the grade grid; odd
/// ones are built on a random chain of fated filters and sometimes
/// perturbed at one element, so that both passing and near-miss subjects
/// are common.
pub struct SubjectSource {
    n: usize,
    seed: u64,
    grid: Vec<Grade>,
    fated: Vec<CrispSubset>,
}

impl SubjectSource {
    pub fn new(analyzer: &Analyzer<'_>, seed: u64, denominator: u32) -> Result<Self> {
        Ok(SubjectSource {
            n: analyzer.algebra().size(),
            seed,
            grid: grade_grid(denominator)?,
            fated: analyzer.family()?.members().to_vec(),
        })
    }

    pub fn subject(&self, index: usize) -> FuzzySubset {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        if index.is_multiple_of(2) {
            return FuzzySubset::from_fn(self.n, |_| *self.grid.choose(&mut rng).expect("nonempty grid"));
        }
        let mut picked: Vec<CrispSubset> = self
            .fated
            .iter()
            .copied()
            .filter(|_| rng.gen_bool(0.5))
            .collect();
        picked.sort_by_key(|s| s.len());
        let mut chain: Vec<CrispSubset> = Vec::new();
        for s in picked {
            if chain.last().is_none_or(|last| last.is_proper_subset(s)) {
                chain.push(s);
            }
        }
        if chain.last().is_none_or(|s| !s.is_full()) {
            chain.push(CrispSubset::full(self.n));
        }
        let mut values: Vec<Grade> = self.grid.choose_multiple(&mut rng, chain.len()).copied().collect();
        values.sort_by(|a, b| b.cmp(a));
        let mut mu = FuzzySubset::from_fn(self.n, |x| {
            let i = chain.iter().position(|s| s.contains(x)).expect("chain ends with L");
            values.get(i).copied().unwrap_or(Grade::ZERO)
        });
        if rng.gen_ratio(1, 3) {
            let x = crate::algebra::ElementId(rng.gen_range(0..self.n));
            mu.set(x, *self.grid.choose(&mut rng).expect("nonempty grid"));
        }
        mu
    }
}

/// Claims tallied by a sweep, in report order.
pub const CLAIMS: [&str; 14] = [
    "qk: inequalities <=> pointwise definition",
    "qk: inequalities <=> U-levels in FF(L) on (0, (1-k)/2]",
    "qk: inequalities <=> bracket levels in FF(L) on (0, 1]",
    "in-in: inequalities <=> pointwise definition",
    "in-in => qk",
    "strong-qk => qk",
    "qk => Q_k-levels in FF(L) on ((1-k)/2, 1]",
    "qk => derived prefix and Peirce bounds",
    "qk at k => qk at every larger grid k",
    "qk with mu(1) < (1-k)/2 => in-in",
    "fuzzy filter: product form <=> modus-ponens form",
    "fuzzy filter: product form <=> levels are filters",
    "least valid k matches the qk verdicts on the grid",
    "failure witnesses re-evaluate to violations",
];

#[derive(Clone, Debug, Default)]
struct Outcome {
    checked: u64,
    violation: Option<String>,
}

impl Outcome {
    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.violation.is_none() {
            self.violation = Some(detail());
        }
    }
}

fn pf(v: &Verdict) -> &'static str {
    if v.passed() {
        "pass"
    } else {
        "fail"
    }
}

/// Evaluates every claim on one subject.
fn evaluate(analyzer: &Analyzer<'_>, mu: &FuzzySubset, ks: &[KParam]) -> Result<Vec<Outcome>> {
    let mut out = vec![Outcome::default(); CLAIMS.len()];
    let mut failures: Vec<(KParam, Verdict)> = Vec::new();
    let mut keep = |k: KParam, v: &Verdict| {
        if !v.passed() {
            failures.push((k, v.clone()));
        }
    };
    let k0 = KParam::ZERO;

    let in_in = analyzer.is_in_in_fff(mu)?;
    let in_in_pw = analyzer.is_in_in_fff_pointwise(mu)?;
    out[3].check(in_in.passed() == in_in_pw.passed(), || {
        format!("inequalities {}, pointwise {}", pf(&in_in), pf(&in_in_pw))
    });
    let ff = analyzer.is_fuzzy_filter(mu)?;
    let ff_mp = analyzer.is_fuzzy_filter_mp(mu)?;
    let ff_lv = analyzer.is_fuzzy_filter_levels(mu)?;
    out[10].check(ff.passed() == ff_mp.passed(), || format!("product form {}, modus-ponens form {}", pf(&ff), pf(&ff_mp)));
    out[11].check(ff.passed() == ff_lv.passed(), || format!("product form {}, levels {}", pf(&ff), pf(&ff_lv)));
    for v in [&in_in, &in_in_pw, &ff, &ff_mp, &ff_lv] {
        keep(k0, v);
    }

    let min_k = analyzer.min_valid_k(mu);
    let mut qk_at = Vec::with_capacity(ks.len());
    for &k in ks {
        let qk = analyzer.is_qk_fff(mu, k)?;
        let pw = analyzer.is_qk_fff_pointwise(mu, k)?;
        let lu = analyzer.u_levels_fated(mu, k)?;
        let lb = analyzer.bracket_levels_fated(mu, k)?;
        let strong = analyzer.is_strong_qk_fff(mu, k)?;
        let lq = analyzer.qk_levels_fated(mu, k)?;
        let derived = analyzer.derived_rules(mu, k)?;
        let below = analyzer.below_half(mu, k)?;
        let q = qk.passed();
        out[0].check(q == pw.passed(), || format!("k = {k}: inequalities {}, pointwise {}", pf(&qk), pf(&pw)));
        out[1].check(q == lu.passed(), || format!("k = {k}: inequalities {}, U-levels {}", pf(&qk), pf(&lu)));
        out[2].check(q == lb.passed(), || format!("k = {k}: inequalities {}, bracket levels {}", pf(&qk), pf(&lb)));
        out[4].check(!in_in.passed() || q, || format!("k = {k}: in-in passes, qk fails"));
        out[5].check(!strong.passed() || q, || format!("k = {k}: strong-qk passes, qk fails"));
        out[6].check(!q || lq.passed(), || format!("k = {k}: qk passes, {}", lq.render(analyzer.algebra())));
        out[7].check(!q || derived.passed(), || format!("k = {k}: qk passes, {}", derived.render(analyzer.algebra())));
        if q && mu.grade(analyzer.algebra().top()) < k.half() {
            out[9].check(below.passed(), || format!("k = {k}: {}", below.render(analyzer.algebra())));
        }
        match &min_k {
            Ok(m) => {
                let expected = m.is_some_and(|m| k >= m);
                out[12].check(expected == q, || {
                    let shown = m.map_or("none".to_string(), |m| m.to_string());
                    format!("least valid k {shown}, qk at k = {k}: {}", pf(&qk))
                });
            }
            Err(e) => out[12].check(false, || e.to_string()),
        }
        for v in [&qk, &pw, &lu, &lb, &strong, &lq, &derived, &below] {
            keep(k, v);
        }
        qk_at.push((k, q));
    }
    for (i, &(k, pass_k)) in qk_at.iter().enumerate() {
        for &(r, pass_r) in &qk_at[i + 1..] {
            out[8].check(!pass_k || pass_r, || format!("qk passes at k = {k} but fails at k = {r}"));
        }
    }
    for (k, v) in &failures {
        let confirmed = analyzer.confirm_witness(mu, *k, v)?;
        out[13].check(confirmed, || format!("k = {k}: {}", v.render(analyzer.algebra())));
    }
    Ok(out)
}

/// Whether `claim` is violated on `mu`.
fn violates(analyzer: &Analyzer<'_>, mu: &FuzzySubset, ks: &[KParam], claim: usize) -> bool {
    evaluate(analyzer, mu, ks).is_ok_and(|o| o[claim].violation.is_some())
}

fn complexity(mu: &FuzzySubset) -> (usize, i128) {
    let size = mu
        .grades()
        .iter()
        .map(|g| *g.value().numer() + *g.value().denom())
        .sum();
    (image(mu).len(), size)
}

/// Greedily simplifies a violating subject: each grade is replaced by `0`,
/// `1` or another grade already present whenever the claim stays violated
/// and the subject gets fewer distinct values or smaller fractions.
pub fn minimize(analyzer: &Analyzer<'_>, mu: &FuzzySubset, ks: &[KParam], claim: usize) -> FuzzySubset {
    let mut best = mu.clone();
    loop {
        let mut improved = false;
        let mut candidates: BTreeSet<Grade> = image(&best);
        candidates.insert(Grade::ZERO);
        candidates.insert(Grade::ONE);
        'outer: for x in 0..best.len() {
            for &c in &candidates {
                let mut trial = best.clone();
                trial.set(crate::algebra::ElementId(x), c);
                if complexity(&trial) < complexity(&best) && violates(analyzer, &trial, ks, claim) {
                    best = trial;
                    improved = true;
                    break 'outer;
                }
            }
        }
        if !improved {
            return best;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    pub count: usize,
    pub denominator: u32,
    pub k_grid: Vec<KParam>,
    pub claims: Vec<ClaimTally>,
}

impl SweepReport {
    pub fn violations(&self) -> u64 {
        self.claims.iter().map(|c| c.violations).sum()
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0
    }

    pub fn claim(&self, name: &str) -> Option<&ClaimTally> {
        self.claims.iter().find(|c| c.claim == name)
    }
}

#[derive(Clone, Debug, Default)]
struct Tally {
    checked: u64,
    violations: u64,
    first: Option<(usize, String)>,
}

/// Runs the sweep. Results do not depend on the execution mode.
pub fn run_sweep(analyzer: &Analyzer<'_>, config: &SweepConfig) -> Result<SweepReport> {
    let mut ks = config.k_grid.clone();
    ks.sort();
    ks.dedup();
    let source = SubjectSource::new(analyzer, config.seed, config.denominator)?;
    let batches = config.count.div_ceil(BATCH);
    let results = map_indexed(config.exec, batches, |b| -> Result<Vec<Tally>> {
        let mut tallies = vec![Tally::default(); CLAIMS.len()];
        for i in b * BATCH..((b + 1) * BATCH).min(config.count) {
            let mu = source.subject(i);
            for (t, o) in tallies.iter_mut().zip(evaluate(analyzer, &mu, &ks)?) {
                t.checked += o.checked;
                if let Some(v) = o.violation {
                    t.violations += 1;
                    t.first.get_or_insert((i, v));
                }
            }
        }
        Ok(tallies)
    });
    let mut total = vec![Tally::default(); CLAIMS.len()];
    for batch in results {
        for (t, b) in total.iter_mut().zip(batch?) {
            t.checked += b.checked;
            t.violations += b.violations;
            if t.first.is_none() {
                t.first = b.first;
            }
        }
    }
    let algebra = analyzer.algebra();
    let claims = CLAIMS
        .iter()
        .enumerate()
        .zip(total)
        .map(|((ci, name), t)| ClaimTally {
            claim: name.to_string(),
            checked: t.checked,
            violations: t.violations,
            first_violation: t.first.map(|(i, detail)| {
                let small = minimize(analyzer, &source.subject(i), &ks, ci);
                format!(
                    "subject {i}: {detail}; minimized subject: {}",
                    small.render(algebra)
                )
            }),
        })
        .collect();
    Ok(SweepReport {
        seed: config.seed,
        count: config.count,
        denominator: config.denominator,
        k_grid: ks,
        claims,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn farey_grid() {
        let g = grade_grid(4).unwrap();
        let shown: Vec<String> = g.iter().map(|g| g.to_string()).collect();
        assert_eq!(shown, ["0", "1/4", "1/3", "1/2", "2/3", "3/4", "1"]);
        assert_eq!(grade_grid(10).unwrap().len(), 33);
        assert!(grade_grid(0).is_err());
    }

    #[test]
    fn subjects_are_reproducible() {
        let a = fixtures::example34();
        let an = Analyzer::new(&a, 24).unwrap();
        let s1 = SubjectSource::new(&an, 7, 10).unwrap();
        let s2 = SubjectSource::new(&an, 7, 10).unwrap();
        for i in 0..50 {
            assert_eq!(s1.subject(i), s2.subject(i));
        }
        let s3 = SubjectSource::new(&an, 8, 10).unwrap();
        assert!((0..50).any(|i| s1.subject(i) != s3.subject(i)));
    }

    #[test]
    fn small_sweep_is_clean_and_mode_independent() {
        let a = fixtures::example34();
        let an = Analyzer::new(&a, 24).unwrap();
        let mut cfg = SweepConfig {
            count: 300,
            exec: Execution::Sequential,
            ..SweepConfig::default()
        };
        let seq = run_sweep(&an, &cfg).unwrap();
        cfg.exec = Execution::Parallel;
        let par = run_sweep(&an, &cfg).unwrap();
        assert_eq!(seq, par);
        assert!(seq.passed(), "{seq:?}");
        let qk = seq.claim(CLAIMS[0]).unwrap();
        assert_eq!(qk.checked, 300 * 5);
        assert!(seq.claim(CLAIMS[13]).unwrap().checked > 0);
    }

    #[test]
    fn mutation_is_caught_and_minimized() {
        let a = fixtures::example34();
        let an = Analyzer::new(&a, 24).unwrap().with_mutation(crate::filters::Mutation::DropQuasi);
        let cfg = SweepConfig {
            count: 200,
            ..SweepConfig::default()
        };
        let report = run_sweep(&an, &cfg).unwrap();
        let t = report.claim(CLAIMS[0]).unwrap();
        assert!(t.violations > 0);
        assert!(t.first_violation.as_ref().unwrap().contains("minimized subject"));
    }
}
