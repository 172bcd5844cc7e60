//! The full verification run: worked examples on the bundled fixtures,
//! crisp-filter facts, a random sweep and construction round trips on a
//! chosen algebra. Every claim becomes a [`ClaimTally`].

use std::fmt::Write as _;

use serde::Serialize;

use crate::algebra::R0Algebra;
use crate::constructions::{
    chain_construction, decompose, two_level, two_level_unchecked, sup_construction, verify_chain_output,
    verify_decomposition, verify_output, ChainGrades, FilterChain, IndexedFamily,
};
use crate::crisp::{
    enumerate_fated_filters_naive, enumerate_filters, is_fated_filter, is_fated_via_peirce,
    is_fated_via_prefix_transitivity, is_filter, is_filter_alt,
};
use crate::error::Result;
use crate::filters::{Analyzer, Mutation, Notion};
use crate::fixtures;
use crate::fuzzy::{level_table, FuzzySubset, LevelKind};
use crate::grade::{Grade, KParam, Rational};
use crate::report::ClaimTally;
use crate::subset::CrispSubset;
use crate::sweep::{run_sweep, SweepConfig};

/// Carriers up to this size get exhaustive subset scans through the
/// report-level predicates.
pub const NAIVE_SCAN_LIMIT: usize = 12;
/// Cap on the number of fated-filter chains used for round trips.
pub const CHAIN_LIMIT: usize = 256;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub sweep: SweepConfig,
    pub bound: usize,
    #[doc(hidden)]
    pub mutation: Mutation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Section {
    pub name: String,
    pub claims: Vec<ClaimTally>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub algebra: String,
    pub seed: u64,
    pub sweep: usize,
    pub denominator: u32,
    pub k_grid: Vec<KParam>,
    pub sections: Vec<Section>,
}

impl SuiteReport {
    pub fn violations(&self) -> u64 {
        self.sections.iter().flat_map(|s| &s.claims).map(|c| c.violations).sum()
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0
    }

    pub fn claim(&self, name: &str) -> Option<&ClaimTally> {
        self.sections.iter().flat_map(|s| &s.claims).find(|c| c.claim == name)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let ks: Vec<String> = self.k_grid.iter().map(|k| k.to_string()).collect();
        let _ = writeln!(out, "algebra: {}", self.algebra);
        let _ = writeln!(
            out,
            "seed: {}  sweep: {}  denominator: {}  k grid: {}",
            self.seed,
            self.sweep,
            self.denominator,
            ks.join(", ")
        );
        let total: usize = self.sections.iter().map(|s| s.claims.len()).sum();
        let mut failed = 0;
        for s in &self.sections {
            let _ = writeln!(out, "\n[{}]", s.name);
            for c in &s.claims {
                if c.violations == 0 {
                    let _ = writeln!(out, "  pass  {}  ({} checked)", c.claim, c.checked);
                } else {
                    failed += 1;
                    let _ = writeln!(
                        out,
                        "  FAIL  {}  ({} checked, {} violated)",
                        c.claim, c.checked, c.violations
                    );
                    if let Some(w) = &c.first_violation {
                        let _ = writeln!(out, "        {w}");
                    }
                }
            }
        }
        let _ = writeln!(out, "\nresult: {} of {total} claims hold, {failed} violated", total - failed);
        out
    }
}

/// Claim builder: one tally with an optional first violation.
struct Claims(Vec<ClaimTally>);

impl Claims {
    fn new() -> Self {
        Claims(Vec::new())
    }

    /// A single yes/no fact.
    fn fact(&mut self, claim: &str, ok: bool, detail: impl FnOnce() -> String) {
        self.0.push(ClaimTally {
            claim: claim.to_string(),
            checked: 1,
            violations: u64::from(!ok),
            first_violation: (!ok).then(detail),
        });
    }

    /// A claim over many instances; `results` yields `None` per success.
    fn many(&mut self, claim: &str, results: impl IntoIterator<Item = Option<String>>) {
        let mut t = ClaimTally {
            claim: claim.to_string(),
            checked: 0,
            violations: 0,
            first_violation: None,
        };
        for r in results {
            t.checked += 1;
            if let Some(v) = r {
                t.violations += 1;
                t.first_violation.get_or_insert(v);
            }
        }
        self.0.push(t);
    }
}

fn g(p: i128, q: i128) -> Grade {
    Grade::ratio(p, q).expect("constant grade")
}

fn k(p: i128, q: i128) -> KParam {
    KParam::ratio(p, q).expect("constant k")
}

fn names(a: &R0Algebra, names: &[&str]) -> CrispSubset {
    CrispSubset::from_elements(a.size(), names.iter().filter_map(|n| a.lookup(n)))
}

fn rows_text(a: &R0Algebra, rows: &[crate::fuzzy::LevelRow]) -> String {
    let parts: Vec<String> = rows
        .iter()
        .map(|r| format!("({}, {}] {}", r.lo, r.hi, r.set.render(a)))
        .collect();
    parts.join("; ")
}

/// The worked examples on the bundled six-element chain.
fn fixture_section(mutation: Mutation) -> Result<Section> {
    let a = fixtures::example34();
    let an = Analyzer::new(&a, 24)?.with_mutation(mutation);
    let mu = fixtures::mu34(&a);
    let nu = fixtures::nu34(&a);
    let m15 = fixtures::mu315(&a);
    let mut c = Claims::new();
    let verdict = |n: Notion, f: &FuzzySubset, kk: KParam| an.check(n, f, kk);

    let axioms = a.verify_axioms();
    c.fact("example34.alg satisfies the R0 axioms", axioms.passed(), || axioms.render(&a));
    let derived = a.verify_derived();
    c.fact("example34.alg satisfies the derived laws", derived.passed(), || derived.render(&a));

    for n in [Notion::StrongQk, Notion::Qk, Notion::QkPointwise] {
        let v = verdict(n, &mu, k(2, 5))?;
        c.fact(&format!("mu34.fz passes {n} at k = 2/5"), v.passed(), || v.render(&a));
    }
    let v = verdict(Notion::FuzzyFilter, &mu, KParam::ZERO)?;
    let expected = Some(vec![a.lookup("c"), a.lookup("d")].into_iter().flatten().collect::<Vec<_>>());
    c.fact(
        "mu34.fz is not a fuzzy filter: c <= d, mu(c) > mu(d)",
        v.witness().map(|w| w.elements()) == expected,
        || v.render(&a),
    );
    for n in [Notion::Qk, Notion::QkPointwise] {
        let v = verdict(n, &nu, k(1, 5))?;
        c.fact(&format!("nu34.fz passes {n} at k = 1/5"), v.passed(), || v.render(&a));
    }
    let v = verdict(Notion::StrongQk, &nu, k(1, 5))?;
    c.fact("nu34.fz fails strong-qk at k = 1/5", !v.passed(), || v.render(&a));
    for n in [Notion::InIn, Notion::InInPointwise] {
        let v = verdict(n, &nu, KParam::ZERO)?;
        c.fact(&format!("nu34.fz fails {n}"), !v.passed(), || v.render(&a));
    }
    for n in [Notion::Qk, Notion::QkPointwise, Notion::LevelU, Notion::LevelBracket] {
        let v = verdict(n, &m15, k(2, 5))?;
        c.fact(&format!("mu315.fz passes {n} at k = 2/5"), v.passed(), || v.render(&a));
        let v = verdict(n, &m15, k(3, 10))?;
        c.fact(&format!("mu315.fz fails {n} at k = 3/10"), !v.passed(), || v.render(&a));
    }
    let rows = level_table(&m15, LevelKind::U, k(3, 10), Grade::ZERO, g(7, 20));
    let expected = [
        (g(3, 10), g(7, 20), names(&a, &["c", "d"])),
        (g(1, 10), g(3, 10), names(&a, &["c", "d", "1"])),
        (Grade::ZERO, g(1, 10), CrispSubset::full(a.size())),
    ];
    let got: Vec<(Grade, Grade, CrispSubset)> = rows.iter().map(|r| (r.lo, r.hi, r.set)).collect();
    c.fact("mu315.fz: U-levels on (0, 7/20] are {c, d}, {c, d, 1}, L", got == expected, || {
        rows_text(&a, &rows)
    });
    let v = verdict(Notion::LevelU, &m15, k(3, 10))?;
    let t = v.witness().and_then(|w| w.get_grade("t"));
    c.fact(
        "mu315.fz at k = 3/10: the failing U-level lies in (3/10, 7/20]",
        t.is_some_and(|t| t > g(3, 10) && t <= g(7, 20)),
        || v.render(&a),
    );
    let least = an.min_valid_k(&m15)?;
    c.fact("mu315.fz: least valid k is 2/5", least == Some(k(2, 5)), || {
        format!("got {least:?}")
    });
    let v = verdict(Notion::BelowHalf, &m15, k(2, 5))?;
    c.fact("mu315.fz at k = 2/5: mu(1) = (1-k)/2, below-half check is vacuous", v.passed(), || {
        v.render(&a)
    });

    let rows = level_table(&nu, LevelKind::Qk, k(1, 5), k(1, 5).half(), Grade::ONE);
    let expected = [
        (g(1, 2), Grade::ONE, CrispSubset::full(a.size())),
        (g(2, 5), g(1, 2), names(&a, &["c", "d", "1"])),
    ];
    let got: Vec<(Grade, Grade, CrispSubset)> = rows.iter().map(|r| (r.lo, r.hi, r.set)).collect();
    c.fact("nu34.fz at k = 1/5: Q_k-levels on (2/5, 1] are L and {c, d, 1}", got == expected, || {
        rows_text(&a, &rows)
    });
    let fated_rows = rows
        .iter()
        .map(|r| is_fated_filter(&a, r.set).map(|rep| rep.passed()))
        .collect::<Result<Vec<bool>>>()?;
    c.fact("nu34.fz at k = 1/5: those Q_k-levels are fated filters", fated_rows.iter().all(|b| *b), || {
        format!("{fated_rows:?}")
    });
    let lq = verdict(Notion::LevelQk, &nu, k(1, 5))?;
    let strong = verdict(Notion::StrongQk, &nu, k(1, 5))?;
    c.fact(
        "nu34.fz at k = 1/5: passes the Q_k-level check yet fails strong-qk",
        lq.passed() && !strong.passed(),
        || format!("{}; {}", lq.render(&a), strong.render(&a)),
    );
    Ok(Section {
        name: "worked examples".into(),
        claims: c.0,
    })
}

fn crisp_section(an: &Analyzer<'_>) -> Result<Section> {
    let a = an.algebra();
    let n = a.size();
    let mut c = Claims::new();
    let family = an.family()?;
    if n <= NAIVE_SCAN_LIMIT {
        let mut results = Vec::new();
        for bits in 0..1u64 << n {
            let s = CrispSubset::from_bits(n, bits)?;
            let (x, y) = (is_filter(a, s)?.passed(), is_filter_alt(a, s)?.passed());
            results.push((x != y).then(|| format!("{}: modus-ponens form {x}, product form {y}", s.render(a))));
        }
        c.many("filter <=> product-closed upward-closed set containing 1 (every subset)", results);
        let naive = enumerate_fated_filters_naive(a, NAIVE_SCAN_LIMIT)?;
        c.fact("pruned fated-filter enumeration equals the naive scan", naive == family.members(), || {
            let shown: Vec<String> = naive.iter().map(|s| s.render(a)).collect();
            format!("naive scan found {}", shown.join(", "))
        });
    }
    let filters = enumerate_filters(a, an.bound())?;
    let mut results = Vec::new();
    for &f in &filters {
        let r = is_fated_filter(a, f)?.passed();
        let p = is_fated_via_prefix_transitivity(a, f)?.passed();
        let q = is_fated_via_peirce(a, f)?.passed();
        results.push((r != p || r != q).then(|| format!("{}: fated rule {r}, prefix {p}, Peirce {q}", f.render(a))));
    }
    c.many("on filters: fated rule <=> prefix transitivity <=> Peirce form", results);
    c.many(
        "fated filters are filters",
        family.members().iter().map(|f| (!filters.contains(f)).then(|| f.render(a))),
    );
    let pair = family.intersection_counterexample();
    c.fact("FF(L) is closed under intersection", pair.is_none(), || {
        let (x, y) = pair.expect("counterexample present");
        format!("{} and {}", x.render(a), y.render(a))
    });
    let full = CrispSubset::full(n);
    c.fact("L is the largest fated filter", family.contains(full), || "L missing".into());
    let unit = CrispSubset::from_elements(n, [a.top()]);
    let unit_report = is_fated_filter(a, unit)?;
    c.fact("{1} is a fated filter, the least member of FF(L)", unit_report.passed(), || {
        let e = unit_report.failures().next().expect("failing entry");
        format!(
            "{} fails at {}; least member is {}",
            e.condition,
            e.witness.as_ref().map(|w| w.render(a)).unwrap_or_default(),
            family.closure(unit).render(a)
        )
    });
    Ok(Section {
        name: "crisp filters".into(),
        claims: c.0,
    })
}

/// Strictly increasing chains of fated filters ending in `L`, depth first,
/// at most [`CHAIN_LIMIT`].
pub fn fated_chains(members: &[CrispSubset]) -> Vec<Vec<CrispSubset>> {
    fn grow(members: &[CrispSubset], chain: &mut Vec<CrispSubset>, out: &mut Vec<Vec<CrispSubset>>) {
        if out.len() >= CHAIN_LIMIT {
            return;
        }
        let last = *chain.last().expect("nonempty chain");
        if last.is_full() {
            out.push(chain.clone());
            return;
        }
        for &m in members {
            if last.is_proper_subset(m) {
                chain.push(m);
                grow(members, chain, out);
                chain.pop();
            }
        }
    }
    let mut out = Vec::new();
    for &start in members {
        grow(members, &mut vec![start], &mut out);
    }
    out
}

fn render_chain(a: &R0Algebra, chain: &[CrispSubset]) -> String {
    let parts: Vec<String> = chain.iter().map(|s| s.render(a)).collect();
    parts.join(" < ")
}

fn construction_section(an: &Analyzer<'_>, ks: &[KParam]) -> Result<Section> {
    let a = an.algebra();
    let mut c = Claims::new();
    let family = an.family()?;
    let scale = |h: Grade, p: i128, q: i128| Grade::new(h.value() * Rational::new(p, q)).expect("inside [0, 1]");

    let mut results = Vec::new();
    for &f in family.members() {
        for &kk in ks {
            let h = kk.half();
            for t1 in [h, h.midpoint(Grade::ONE), Grade::ONE] {
                for t2 in [scale(h, 1, 3), scale(h, 2, 3)] {
                    let mu = two_level(a, f, t1, t2, kk)?;
                    let report = verify_output(an, &mu, kk)?;
                    results.push((!report.passed()).then(|| {
                        format!("F = {}, t1 = {t1}, t2 = {t2}, k = {kk}: {}", f.render(a), report.render(a).trim_end())
                    }));
                }
            }
        }
    }
    c.many("two-level subsets on fated filters pass both checkers", results);

    let mut results = Vec::new();
    for f in enumerate_filters(a, an.bound())? {
        if family.contains(f) {
            continue;
        }
        let rejected = two_level(a, f, Grade::ONE, g(1, 10), KParam::ZERO).is_err();
        let mut caught = false;
        for &kk in ks {
            let h = kk.half();
            let mu = two_level_unchecked(f, h, scale(h, 1, 2));
            caught |= !an.is_qk_fff(&mu, kk)?.passed();
        }
        results.push((!rejected || !caught).then(|| format!("F = {}: rejected {rejected}, checker fails {caught}", f.render(a))));
    }
    c.many("two-level on a non-fated filter is rejected and fails the checker", results);

    let chains = fated_chains(family.members());
    let mut round = Vec::new();
    let mut sups = Vec::new();
    let mut splits = Vec::new();
    for chain in &chains {
        let fc = FilterChain::new(a, chain.clone())?;
        for &kk in ks {
            let mu = chain_construction(a, &fc, kk, &ChainGrades::default())?;
            let report = verify_chain_output(an, &fc, &mu, kk)?;
            round.push((!report.passed()).then(|| {
                format!("chain {}, k = {kk}: {}", render_chain(a, chain), report.render(a).trim_end())
            }));

            let h = kk.half();
            let m = chain.len() as i128;
            let indexed: Vec<(Grade, CrispSubset)> = chain
                .iter()
                .enumerate()
                .map(|(i, &f)| (scale(h, m - i as i128, m), f))
                .collect();
            let mu = sup_construction(&IndexedFamily::new(a, indexed)?, kk)?;
            let report = verify_output(an, &mu, kk)?;
            sups.push((!report.passed()).then(|| {
                format!("chain {}, k = {kk}: {}", render_chain(a, chain), report.render(a).trim_end())
            }));

            if chain.len() >= 3 {
                let below: Vec<(Grade, CrispSubset)> = chain
                    .iter()
                    .enumerate()
                    .map(|(i, &f)| (scale(h, m - i as i128, m + 1), f))
                    .collect();
                let mu = sup_construction(&IndexedFamily::new(a, below)?, kk)?;
                let outcome = decompose(an, &mu, kk).and_then(|d| verify_decomposition(an, &mu, kk, &d));
                splits.push(match outcome {
                    Ok(r) if r.passed() => None,
                    Ok(r) => Some(format!("mu = {}, k = {kk}: {}", mu.render(a), r.render(a).trim_end())),
                    Err(e) => Some(format!("mu = {}, k = {kk}: {e}", mu.render(a))),
                });
            }
        }
    }
    c.many("chain construction: both checkers pass, U((1-k)/2) = F0, levels are the chain", round);
    c.many("supremum construction over a chain-indexed family passes both checkers", sups);
    c.many("decomposition of three-value subsets: union, both pass, proper, non-equivalent", splits);
    Ok(Section {
        name: "constructions".into(),
        claims: c.0,
    })
}

/// Runs every section. `label` names the algebra in the report.
pub fn run_suite(algebra: &R0Algebra, label: &str, config: &SuiteConfig) -> Result<SuiteReport> {
    let an = Analyzer::with_execution(algebra, config.bound, config.sweep.exec)?.with_mutation(config.mutation);
    let mut ks = config.sweep.k_grid.clone();
    ks.sort();
    ks.dedup();
    let mut sections = vec![fixture_section(config.mutation)?, crisp_section(&an)?];
    let sweep = run_sweep(&an, &config.sweep)?;
    sections.push(Section {
        name: format!("random sweep ({} subjects)", config.sweep.count),
        claims: sweep.claims,
    });
    sections.push(construction_section(&an, &ks)?);
    Ok(SuiteReport {
        algebra: format!("{label} ({} elements)", algebra.size()),
        seed: config.sweep.seed,
        sweep: config.sweep.count,
        denominator: config.sweep.denominator,
        k_grid: ks,
        sections,
    })
}
