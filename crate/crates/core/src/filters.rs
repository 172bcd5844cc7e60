//! Fuzzy filters and `(∈, ∈∨q_k)`-fuzzy fated filters.
//!
//! Most notions have two executable forms: a pointwise form quantified over
//! fuzzy points (decided on the critical-threshold grid) and a closed form
//! made of inequalities or level-set conditions. The pointwise forms serve
//! as oracles for the closed forms.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::algebra::{ElementId, R0Algebra};
use crate::crisp::{enumerate_filters, enumerate_fated_filters_with, FatedFilterFamily};
use crate::error::{Error, Result};
use crate::crisp::{is_fated_filter, is_filter};
use crate::fuzzy::{belongs, in_vee_qk, level_bracket_k, level_qk, level_u, FuzzyPoint, FuzzySubset, Ranked};
use crate::grade::{Grade, KParam, Rational};
use crate::par::Execution;
use crate::report::{Verdict, Witness};
use crate::subset::CrispSubset;

pub const PRODUCT_BOUND: &str = "mu(x * y) >= min(mu(x), mu(y))";
pub const ORDER_PRESERVING: &str = "x <= y implies mu(x) <= mu(y)";
pub const TOP_MAXIMAL: &str = "mu(1) >= mu(x)";
pub const MODUS_PONENS_BOUND: &str = "mu(y) >= min(mu(x -> y), mu(x))";
pub const LEVELS_ARE_FILTERS: &str = "nonempty U(mu;t) is a filter";
pub const TOP_POINT: &str = "x_t in mu implies 1_t in-or-qk mu";
pub const FATED_POINT: &str = "(a -> ((x -> y) -> x))_t in mu, a_s in mu imply x_min(t,s) in-or-qk mu";
pub const TOP_POINT_IN: &str = "x_t in mu implies 1_t in mu";
pub const FATED_POINT_IN: &str = "(a -> ((x -> y) -> x))_t in mu, a_s in mu imply x_min(t,s) in mu";
pub const TOP_BOUND: &str = "mu(1) >= min(mu(x), (1-k)/2)";
pub const FATED_BOUND: &str = "mu(x) >= min(mu(a -> ((x -> y) -> x)), mu(a), (1-k)/2)";
pub const FATED_BOUND_IN: &str = "mu(x) >= min(mu(a -> ((x -> y) -> x)), mu(a))";
pub const LEVEL_U: &str = "U(mu;t) in FF(L) or empty for t in (0, (1-k)/2]";
pub const LEVEL_QK: &str = "Q_k(mu;t) in FF(L) or empty for t in ((1-k)/2, 1]";
pub const LEVEL_BRACKET: &str = "[mu]_t^k in FF(L) or empty for t in (0, 1]";
pub const PREFIX_BOUND: &str = "mu(x -> z) >= min(mu(x -> (y -> z)), mu(x -> y), (1-k)/2)";
pub const PEIRCE_BOUND: &str = "mu(x) >= min(mu((x -> y) -> x), (1-k)/2)";
pub const BELOW_HALF: &str = "mu(1) < (1-k)/2 and qk imply in-in";

/// Every predicate the analyzer can evaluate on a pair `(μ, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Notion {
    /// Product bound and order preservation.
    FuzzyFilter,
    /// `μ(1)` maximal and the modus-ponens bound.
    FuzzyFilterMp,
    /// Every nonempty `U`-level is a filter.
    FuzzyFilterLevels,
    /// `(∈, ∈)`-fuzzy fated filter, inequality form.
    InIn,
    InInPointwise,
    /// `(∈, ∈∨q_k)`-fuzzy fated filter, inequality form.
    Qk,
    QkPointwise,
    StrongQk,
    LevelU,
    /// Necessary condition only: the converse fails in general.
    LevelQk,
    LevelBracket,
    DerivedRules,
    BelowHalf,
}

impl Notion {
    pub const ALL: [Notion; 13] = [
        Notion::FuzzyFilter,
        Notion::FuzzyFilterMp,
        Notion::FuzzyFilterLevels,
        Notion::InIn,
        Notion::InInPointwise,
        Notion::Qk,
        Notion::QkPointwise,
        Notion::StrongQk,
        Notion::LevelU,
        Notion::LevelQk,
        Notion::LevelBracket,
        Notion::DerivedRules,
        Notion::BelowHalf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Notion::FuzzyFilter => "fuzzy-filter",
            Notion::FuzzyFilterMp => "fuzzy-filter-mp",
            Notion::FuzzyFilterLevels => "fuzzy-filter-levels",
            Notion::InIn => "in-in",
            Notion::InInPointwise => "in-in-pointwise",
            Notion::Qk => "qk",
            Notion::QkPointwise => "qk-pointwise",
            Notion::StrongQk => "strong-qk",
            Notion::LevelU => "level-u",
            Notion::LevelQk => "level-qk",
            Notion::LevelBracket => "level-bracket",
            Notion::DerivedRules => "derived-rules",
            Notion::BelowHalf => "below-half",
        }
    }

    /// Whether the verdict depends on `k`.
    pub fn uses_k(self) -> bool {
        !matches!(
            self,
            Notion::FuzzyFilter
                | Notion::FuzzyFilterMp
                | Notion::FuzzyFilterLevels
                | Notion::InIn
                | Notion::InInPointwise
        )
    }
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Notion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Notion::ALL
            .into_iter()
            .find(|n| n.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Notion::ALL.iter().map(|n| n.name()).collect();
                format!("unknown notion `{s}` (expected one of: {})", names.join(", "))
            })
    }
}

/// Implications between notions that hold for every `(μ, k)`.
pub const IMPLICATIONS: [(Notion, Notion); 13] = [
    (Notion::FuzzyFilter, Notion::FuzzyFilterMp),
    (Notion::FuzzyFilterMp, Notion::FuzzyFilter),
    (Notion::FuzzyFilter, Notion::FuzzyFilterLevels),
    (Notion::FuzzyFilterLevels, Notion::FuzzyFilter),
    (Notion::InIn, Notion::InInPointwise),
    (Notion::InInPointwise, Notion::InIn),
    (Notion::InIn, Notion::Qk),
    (Notion::StrongQk, Notion::Qk),
    (Notion::Qk, Notion::QkPointwise),
    (Notion::QkPointwise, Notion::Qk),
    (Notion::Qk, Notion::LevelU),
    (Notion::Qk, Notion::LevelBracket),
    (Notion::Qk, Notion::LevelQk),
];

/// One instance `(x, a, y)` of the fated rule, with `big = a → ((x → y) → x)`.
#[derive(Clone, Copy, Debug)]
struct Premise {
    x: usize,
    a: usize,
    y: usize,
    big: usize,
}

/// `lhs ≥ min(r1, r2)` with the variables that produced it.
#[derive(Clone, Copy, Debug)]
struct Bound3 {
    lhs: usize,
    r1: usize,
    r2: usize,
    vars: [usize; 3],
}

#[derive(Clone, Copy, Debug)]
struct Bound2 {
    lhs: usize,
    r: usize,
    vars: [usize; 2],
}

/// Evaluates fuzzy-filter predicates over one algebra. Instances of every
/// quantified rule are tabulated once, deduplicated by the elements whose
/// grades they compare.
pub struct Analyzer<'a> {
    algebra: &'a R0Algebra,
    bound: usize,
    exec: Execution,
    premises: Vec<Premise>,
    /// `x → z ≥ min(x → (y → z), x → y)`.
    prefix: Vec<Bound3>,
    /// `x ≥ (x → y) → x`.
    peirce: Vec<Bound2>,
    /// `x ⊙ y ≥ min(x, y)`.
    products: Vec<Bound3>,
    /// `y ≥ min(x → y, x)`.
    modus: Vec<Bound3>,
    /// `x ≤ y`, `x ≠ y`.
    comparable: Vec<(usize, usize)>,
    family: OnceLock<FatedFilterFamily>,
    filters: OnceLock<HashSet<u64>>,
    mutation: Mutation,
}

/// A deliberate defect injected into one checker, used to confirm that the
/// verification suite can fail.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mutation {
    #[default]
    None,
    /// The pointwise `(∈, ∈∨q_k)` check ignores `q_k`.
    DropQuasi,
}

fn dedup_by_key<T: Copy, K: std::hash::Hash + Eq>(items: impl Iterator<Item = T>, key: impl Fn(&T) -> K) -> Vec<T> {
    let mut seen = HashSet::new();
    items.filter(|t| seen.insert(key(t))).collect()
}

impl<'a> Analyzer<'a> {
    /// Fails with a precondition error when the algebra violates an axiom.
    pub fn new(algebra: &'a R0Algebra, bound: usize) -> Result<Self> {
        Self::with_execution(algebra, bound, Execution::default())
    }

    pub fn with_execution(algebra: &'a R0Algebra, bound: usize, exec: Execution) -> Result<Self> {
        let report = algebra.verify_axioms();
        if let Some(e) = report.failures().next() {
            return Err(Error::Precondition(format!(
                "not an R0-algebra: {} fails at {}",
                e.condition,
                e.witness.as_ref().map(|w| w.render(algebra)).unwrap_or_default()
            )));
        }
        let n = algebra.size();
        let el = ElementId;
        let ar = |x: usize, y: usize| algebra.arrow(el(x), el(y)).0;
        let triples = || (0..n).flat_map(move |x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))));
        let pairs = || (0..n).flat_map(move |x| (0..n).map(move |y| (x, y)));

        let premises = dedup_by_key(
            triples().map(|(x, a, y)| Premise {
                x,
                a,
                y,
                big: ar(a, ar(ar(x, y), x)),
            }),
            |p| (p.x, p.a, p.big),
        );
        let prefix = dedup_by_key(
            triples().map(|(x, y, z)| Bound3 {
                lhs: ar(x, z),
                r1: ar(x, ar(y, z)),
                r2: ar(x, y),
                vars: [x, y, z],
            }),
            |b| (b.lhs, b.r1, b.r2),
        );
        let peirce = dedup_by_key(
            pairs().map(|(x, y)| Bound2 {
                lhs: x,
                r: ar(ar(x, y), x),
                vars: [x, y],
            }),
            |b| (b.lhs, b.r),
        );
        let products = dedup_by_key(
            pairs().map(|(x, y)| Bound3 {
                lhs: algebra.odot(el(x), el(y)).0,
                r1: x,
                r2: y,
                vars: [x, y, 0],
            }),
            |b| (b.lhs, b.r1.min(b.r2), b.r1.max(b.r2)),
        );
        let modus = dedup_by_key(
            pairs().map(|(x, y)| Bound3 {
                lhs: y,
                r1: ar(x, y),
                r2: x,
                vars: [x, y, 0],
            }),
            |b| (b.lhs, b.r1, b.r2),
        );
        let comparable = pairs()
            .filter(|&(x, y)| x != y && algebra.le(el(x), el(y)))
            .collect();
        Ok(Analyzer {
            algebra,
            bound,
            exec,
            premises,
            prefix,
            peirce,
            products,
            modus,
            comparable,
            family: OnceLock::new(),
            filters: OnceLock::new(),
            mutation: Mutation::None,
        })
    }

    #[doc(hidden)]
    pub fn with_mutation(mut self, mutation: Mutation) -> Self {
        self.mutation = mutation;
        self
    }

    pub fn algebra(&self) -> &'a R0Algebra {
        self.algebra
    }

    /// Largest carrier for which subset enumeration is allowed.
    pub fn bound(&self) -> usize {
        self.bound
    }

    /// FF(L), enumerated on first use.
    pub fn family(&self) -> Result<&FatedFilterFamily> {
        if let Some(f) = self.family.get() {
            return Ok(f);
        }
        let f = enumerate_fated_filters_with(self.algebra, self.bound, self.exec)?;
        Ok(self.family.get_or_init(|| f))
    }

    fn filter_masks(&self) -> Result<&HashSet<u64>> {
        if let Some(f) = self.filters.get() {
            return Ok(f);
        }
        let f = enumerate_filters(self.algebra, self.bound)?
            .into_iter()
            .map(|s| s.bits())
            .collect();
        Ok(self.filters.get_or_init(|| f))
    }

    fn e(&self, i: usize) -> ElementId {
        ElementId(i)
    }

    pub fn check(&self, notion: Notion, mu: &FuzzySubset, k: KParam) -> Result<Verdict> {
        match notion {
            Notion::FuzzyFilter => self.is_fuzzy_filter(mu),
            Notion::FuzzyFilterMp => self.is_fuzzy_filter_mp(mu),
            Notion::FuzzyFilterLevels => self.is_fuzzy_filter_levels(mu),
            Notion::InIn => self.is_in_in_fff(mu),
            Notion::InInPointwise => self.is_in_in_fff_pointwise(mu),
            Notion::Qk => self.is_qk_fff(mu, k),
            Notion::QkPointwise => self.is_qk_fff_pointwise(mu, k),
            Notion::StrongQk => self.is_strong_qk_fff(mu, k),
            Notion::LevelU => self.u_levels_fated(mu, k),
            Notion::LevelQk => self.qk_levels_fated(mu, k),
            Notion::LevelBracket => self.bracket_levels_fated(mu, k),
            Notion::DerivedRules => self.derived_rules(mu, k),
            Notion::BelowHalf => self.below_half(mu, k),
        }
    }

    fn g(&self, mu: &FuzzySubset, i: usize) -> Rational {
        mu.grades()[i].value()
    }

    /// First `b` with `μ(lhs) < min(μ(r1), μ(r2), cap)`.
    fn scan3<'b>(&self, mu: &FuzzySubset, bounds: &'b [Bound3], cap: Option<Rational>) -> Option<&'b Bound3> {
        bounds.iter().find(|b| {
            let mut rhs = self.g(mu, b.r1).min(self.g(mu, b.r2));
            if let Some(c) = cap {
                rhs = rhs.min(c);
            }
            self.g(mu, b.lhs) < rhs
        })
    }

    fn top_bound(&self, mu: &FuzzySubset, cap: Option<Rational>) -> Option<usize> {
        let top = self.g(mu, self.algebra.top().0);
        (0..mu.len()).find(|&x| {
            let v = self.g(mu, x);
            top < cap.map_or(v, |c| v.min(c))
        })
    }

    fn fated_bound(&self, mu: &FuzzySubset, cap: Option<Rational>) -> Option<&Premise> {
        self.premises.iter().find(|p| {
            let mut rhs = self.g(mu, p.big).min(self.g(mu, p.a));
            if let Some(c) = cap {
                rhs = rhs.min(c);
            }
            self.g(mu, p.x) < rhs
        })
    }

    fn premise_witness(&self, p: &Premise) -> Witness {
        Witness::new()
            .element("x", self.e(p.x))
            .element("a", self.e(p.a))
            .element("y", self.e(p.y))
    }

    /// Product bound plus order preservation.
    pub fn is_fuzzy_filter(&self, mu: &FuzzySubset) -> Result<Verdict> {
        mu.check_algebra(self.algebra)?;
        let notion = Notion::FuzzyFilter.name();
        if let Some(b) = self.scan3(mu, &self.products, None) {
            let w = Witness::new().element("x", self.e(b.vars[0])).element("y", self.e(b.vars[1]));
            return Ok(Verdict::fail(notion, PRODUCT_BOUND, w));
        }
        if let Some(&(x, y)) = self
            .comparable
            .iter()
            .find(|&&(x, y)| self.g(mu, x) > self.g(mu, y))
        {
            let w = Witness::new().element("x", self.e(x)).element("y", self.e(y));
            return Ok(Verdict::fail(notion, ORDER_PRESERVING, w));
        }
        Ok(Verdict::pass(notion))
    }

    /// `μ(1)` maximal plus the modus-ponens bound.
    pub fn is_fuzzy_filter_mp(&self, mu: &FuzzySubset) -> Result<Verdict> {
        mu.check_algebra(self.algebra)?;
        let notion = Notion::FuzzyFilterMp.name();
        if let Some(x) = self.top_bound(mu, None) {
            return Ok(Verdict::fail(notion, TOP_MAXIMAL, Witness::new().element("x", self.e(x))));
        }
        if let Some(b) = self.scan3(mu, &self.modus, None) {
            let w = Witness::new().element("x", self.e(b.vars[0])).element("y", self.e(b.vars[1]));
            return Ok(Verdict::fail(notion, MODUS_PONENS_BOUND, w));
        }
        Ok(Verdict::pass(notion))
    }

    /// Every nonempty `U(μ; t)` is a filter.
    pub fn is_fuzzy_filter_levels(&self, mu: &FuzzySubset) -> Result<Verdict> {
        mu.check_algebra(self.algebra)?;
        let notion = Notion::FuzzyFilterLevels.name();
        let filters = self.filter_masks()?;
        let r = Ranked::new(mu, KParam::ZERO);
        for i in 0..r.grid.len() {
            let set = self.mask(mu.len(), |x| r.belongs(x, i));
            if !set.is_empty() && !filters.contains(&set.bits()) {
                let w = Witness::new()
                    .grade("t", r.grid_values[i])
                    .note(format!("U = {}", set.render(self.algebra)));
                return Ok(Verdict::fail(notion, LEVELS_ARE_FILTERS, w));
            }
        }
        Ok(Verdict::pass(notion))
    }

    fn mask(&self, n: usize, pred: impl Fn(usize) -> bool) -> CrispSubset {
        let bits = (0..n).filter(|&x| pred(x)).fold(0u64, |acc, x| acc | 1 << x);
        CrispSubset::from_bits(n, bits).expect("carrier within mask width")
    }

    /// `(∈, ∈)`-fuzzy fated filter: `μ(1) ≥ μ(x)` and
    /// `μ(x) ≥ min(μ(a → ((x → y) → x)), μ(a))`.
    pub fn is_in_in_fff(&self, mu: &FuzzySubset) -> Result<Verdict> {
        mu.check_algebra(self.algebra)?;
        let notion = Notion::InIn.name();
        if let Some(x) = self.top_bound(mu, None) {
            return Ok(Verdict::fail(notion, TOP_MAXIMAL, Witness::new().element("x", self.e(x))));
        }
        if let Some(p) = self.fated_bound(mu, None) {
            return Ok(Verdict::fail(notion, FATED_BOUND_IN, self.premise_witness(p)));
        }
        Ok(Verdict::pass(notion))
    }

    /// The pointwise form of [`Self::is_in_in_fff`], with `∈` as consequent.
    pub fn is_in_in_fff_pointwise(&self, mu: &FuzzySubset) -> Result<Verdict> {
        mu.check_algebra(self.algebra)?;
        let r = Ranked::new(mu, KParam::ZERO);
        let ok = |x: usize, i: usize| r.belongs(x, i);
        Ok(self
            .pointwise(Notion::InInPointwise, &r, TOP_POINT_IN, FATED_POINT_IN, true, ok)
            .unwrap_or_else(|| Verdict::pass(Notion::InInPointwise.name())))
    }

    /// `(∈, ∈∨q_k)`-fuzzy fated filter via the `(1-k)/2`-bounded inequalities.
    pub fn is_qk_fff(&self, mu: &FuzzySubset, k: KParam) -> Result<Verdict> {
        mu.check_algebra(self.algebra)?;
        let notion = Notion::Qk.name();
        let half = k.half().value();
        if let Some(x) = self.top_bound(mu, Some(half)) {
            return Ok(Verdict::fail(notion, TOP_BOUND, Witness::new().element("x", self.e(x))));
        }
        if let Some(p) = self.fated_bound(mu, Some(half)) {
            return Ok(Verdict::fail(notion, FATED_BOUND, self.premise_witness(p)));
        }
        Ok(Verdict::pass(notion))
    }

    /// `(∈, ∈∨q_k)`-fuzzy fated filter straight from the fuzzy-point
    /// definition, with thresholds drawn from the critical grid.
    pub fn is_qk_fff_pointwise(&self, mu: &FuzzySubset, k: KParam) -> Result<Verdict> {
        mu.check_algebra(self.algebra)?;
        let r = Ranked::new(mu, k);
        let drop = self.mutation == Mutation::DropQuasi;
        let ok = |x: usize, i: usize| if drop { r.belongs(x, i) } else { r.in_vee_q(x, i) };
        Ok(self
            .pointwise(Notion::QkPointwise, &r, TOP_POINT, FATED_POINT, true, ok)
            .unwrap_or_else(|| Verdict::pass(Notion::QkPointwise.name())))
    }

    /// `μ(1) ≥ μ(x)` plus the pointwise fated condition.
    pub fn is_strong_qk_fff(&self, mu: &FuzzySubset, k: KParam) -> Result<Verdict> {
        mu.check_algebra(self.algebra)?;
        let notion = Notion::StrongQk;
        if let Some(x) = self.top_bound(mu, None) {
            return Ok(Verdict::fail(notion.name(), TOP_MAXIMAL, Witness::new().element("x", self.e(x))));
        }
        let r = Ranked::new(mu, k);
        let ok = |x: usize, i: usize| r.in_vee_q(x, i);
        Ok(self
            .pointwise(notion, &r, TOP_POINT, FATED_POINT, false, ok)
            .unwrap_or_else(|| Verdict::pass(notion.name())))
    }

    /// Decides both pointwise conditions; `ok(x, i)` is the consequent
    /// relation for `x` at grid index `i`.
    fn pointwise(
        &self,
        notion: Notion,
        r: &Ranked,
        top_label: &str,
        fated_label: &str,
        with_top: bool,
        ok: impl Fn(usize, usize) -> bool,
    ) -> Option<Verdict> {
        let grid = r.grid.len();
        let top = self.algebra.top().0;
        if with_top {
            for x in 0..r.grade.len() {
                for i in 0..grid {
                    if r.belongs(x, i) && !ok(top, i) {
                        let w = Witness::new().element("x", self.e(x)).grade("t", r.grid_values[i]);
                        return Some(Verdict::fail(notion.name(), top_label, w));
                    }
                }
            }
        }
        // For each pair of antecedent grades, the distinct values of
        // min(t, s) over admissible (t, s), with the first pair producing each.
        let mut reach: HashMap<(u32, u32), Vec<(usize, usize, usize)>> = HashMap::new();
        for p in &self.premises {
            let key = (r.grade[p.big], r.grade[p.a]);
            let mins = reach.entry(key).or_insert_with(|| {
                let mut seen = BTreeSet::new();
                let mut out = Vec::new();
                for t in 0..grid {
                    if !r.belongs(p.big, t) {
                        continue;
                    }
                    for s in 0..grid {
                        if r.belongs(p.a, s) && seen.insert(t.min(s)) {
                            out.push((t.min(s), t, s));
                        }
                    }
                }
                out
            });
            if let Some(&(_, t, s)) = mins.iter().find(|&&(u, _, _)| !ok(p.x, u)) {
                let w = self
                    .premise_witness(p)
                    .grade("t", r.grid_values[t])
                    .grade("s", r.grid_values[s]);
                return Some(Verdict::fail(notion.name(), fated_label, w));
            }
        }
        None
    }

    fn levels(
        &self,
        notion: Notion,
        mu: &FuzzySubset,
        k: KParam,
        label: &str,
        in_range: impl Fn(Grade, Grade) -> bool,
        set_at: impl Fn(&Ranked, usize, usize) -> bool,
        set_name: &str,
    ) -> Result<Verdict> {
        mu.check_algebra(self.algebra)?;
        let family = self.family()?;
        let r = Ranked::new(mu, k);
        let half = k.half();
        for i in 0..r.grid.len() {
            let t = r.grid_values[i];
            if !in_range(t, half) {
                continue;
            }
            let set = self.mask(mu.len(), |x| set_at(&r, x, i));
            if !family.contains_or_empty(set) {
                let w = Witness::new()
                    .grade("t", t)
                    .note(format!("{set_name} = {}", set.render(self.algebra)));
                return Ok(Verdict::fail(notion.name(), label, w));
            }
        }
        Ok(Verdict::pass(notion.name()))
    }

    /// `U(μ; t) ∈ FF(L) ∪ {∅}` for every `t ∈ (0, (1-k)/2]`.
    pub fn u_levels_fated(&self, mu: &FuzzySubset, k: KParam) -> Result<Verdict> {
        self.levels(Notion::LevelU, mu, k, LEVEL_U, |t, h| t <= h, |r, x, i| r.belongs(x, i), "U")
    }

    /// `Q_k(μ; t) ∈ FF(L) ∪ {∅}` for every `t ∈ ((1-k)/2, 1]`. Necessary for
    /// [`Self::is_qk_fff`] but not sufficient for the strong notion.
    pub fn qk_levels_fated(&self, mu: &FuzzySubset, k: KParam) -> Result<Verdict> {
        self.levels(Notion::LevelQk, mu, k, LEVEL_QK, |t, h| t > h, |r, x, i| r.quasi(x, i), "Q_k")
    }

    /// `[μ]_t^k ∈ FF(L) ∪ {∅}` for every `t ∈ (0, 1]`.
    pub fn bracket_levels_fated(&self, mu: &FuzzySubset, k: KParam) -> Result<Verdict> {
        self.levels(
            Notion::LevelBracket,
            mu,
            k,
            LEVEL_BRACKET,
            |_, _| true,
            |r, x, i| r.in_vee_q(x, i),
            "[mu]",
        )
    }

    /// The prefix-transitivity and Peirce bounds satisfied by every
    /// `(∈, ∈∨q_k)`-fuzzy fated filter.
    pub fn derived_rules(&self, mu: &FuzzySubset, k: KParam) -> Result<Verdict> {
        mu.check_algebra(self.algebra)?;
        let notion = Notion::DerivedRules.name();
        let half = k.half().value();
        if let Some(b) = self.scan3(mu, &self.prefix, Some(half)) {
            let w = Witness::new()
                .element("x", self.e(b.vars[0]))
                .element("y", self.e(b.vars[1]))
                .element("z", self.e(b.vars[2]));
            return Ok(Verdict::fail(notion, PREFIX_BOUND, w));
        }
        if let Some(b) = self
            .peirce
            .iter()
            .find(|b| self.g(mu, b.lhs) < self.g(mu, b.r).min(half))
        {
            let w = Witness::new().element("x", self.e(b.vars[0])).element("y", self.e(b.vars[1]));
            return Ok(Verdict::fail(notion, PEIRCE_BOUND, w));
        }
        Ok(Verdict::pass(notion))
    }

    /// If `μ` is an `(∈, ∈∨q_k)`-fuzzy fated filter with `μ(1) < (1-k)/2`,
    /// it is an `(∈, ∈)`-fuzzy fated filter. Passes vacuously otherwise.
    pub fn below_half(&self, mu: &FuzzySubset, k: KParam) -> Result<Verdict> {
        mu.check_algebra(self.algebra)?;
        let notion = Notion::BelowHalf.name();
        if mu.grade(self.algebra.top()) >= k.half() || !self.is_qk_fff(mu, k)?.passed() {
            return Ok(Verdict::pass(notion));
        }
        let inner = self.is_in_in_fff(mu)?;
        Ok(match inner.failure {
            None => Verdict::pass(notion),
            Some(f) => {
                let mut w = f.witness;
                w.note = Some(format!("fails {}", f.condition));
                Verdict::fail(notion, BELOW_HALF, w)
            }
        })
    }

    /// The least `k` for which `μ` is an `(∈, ∈∨q_k)`-fuzzy fated filter.
    /// Candidates are `0` and `1 - 2μ(x)` for `μ(x) < 1/2`; an invariant
    /// error is returned if the passing candidates are not upward closed.
    pub fn min_valid_k(&self, mu: &FuzzySubset) -> Result<Option<KParam>> {
        mu.check_algebra(self.algebra)?;
        let one = Rational::one();
        let two = one + one;
        let mut candidates: BTreeSet<Rational> = BTreeSet::new();
        candidates.insert(Rational::zero());
        for g in mu.grades() {
            let v = g.value();
            if v * two < one && !v.is_zero() {
                candidates.insert(one - v * two);
            }
        }
        let mut least = None;
        for c in candidates {
            let k = KParam::new(c)?;
            let passed = self.is_qk_fff(mu, k)?.passed();
            match (least, passed) {
                (None, true) => least = Some(k),
                (Some(low), false) => {
                    return Err(Error::Invariant(format!(
                        "qk holds at k = {low} but fails at k = {k}"
                    )))
                }
                _ => {}
            }
        }
        Ok(least)
    }

    /// Re-evaluates a failing verdict's witness through the atomic relations
    /// and crisp predicates, independently of the checker that produced it.
    /// Returns `false` when the witness does not exhibit a violation.
    pub fn confirm_witness(&self, mu: &FuzzySubset, k: KParam, verdict: &Verdict) -> Result<bool> {
        mu.check_algebra(self.algebra)?;
        let Some(failure) = &verdict.failure else {
            return Ok(false);
        };
        let w = &failure.witness;
        let alg = self.algebra;
        let el = |v: &str| {
            w.get_element(v)
                .ok_or_else(|| Error::Invariant(format!("witness lacks element `{v}`")))
        };
        let gr = |v: &str| {
            w.get_grade(v)
                .ok_or_else(|| Error::Invariant(format!("witness lacks grade `{v}`")))
        };
        let m = |e: ElementId| mu.grade(e);
        let half = k.half();
        let top = alg.top();
        let point = |e: ElementId, t: Grade| FuzzyPoint::new(e, t);
        let fated_big = |x, a, y| alg.arrow(a, alg.arrow(alg.arrow(x, y), x));
        let not_fated = |s: CrispSubset| -> Result<bool> {
            Ok(!s.is_empty() && !is_fated_filter(alg, s)?.passed())
        };
        Ok(match failure.condition.as_str() {
            PRODUCT_BOUND => {
                let (x, y) = (el("x")?, el("y")?);
                m(alg.odot(x, y)) < m(x).min(m(y))
            }
            ORDER_PRESERVING => {
                let (x, y) = (el("x")?, el("y")?);
                alg.leq(x, y)? && m(x) > m(y)
            }
            TOP_MAXIMAL => m(top) < m(el("x")?),
            MODUS_PONENS_BOUND => {
                let (x, y) = (el("x")?, el("y")?);
                m(y) < m(alg.arrow(x, y)).min(m(x))
            }
            LEVELS_ARE_FILTERS => {
                let s = level_u(mu, gr("t")?)?;
                !s.is_empty() && !is_filter(alg, s)?.passed()
            }
            TOP_POINT | TOP_POINT_IN => {
                let (x, t) = (el("x")?, gr("t")?);
                let consequent = if failure.condition == TOP_POINT {
                    in_vee_qk(point(top, t)?, mu, k)?
                } else {
                    belongs(point(top, t)?, mu)?
                };
                belongs(point(x, t)?, mu)? && !consequent
            }
            FATED_POINT | FATED_POINT_IN => {
                let (x, a, y) = (el("x")?, el("a")?, el("y")?);
                let (t, s) = (gr("t")?, gr("s")?);
                let target = point(x, t.min(s))?;
                let consequent = if failure.condition == FATED_POINT {
                    in_vee_qk(target, mu, k)?
                } else {
                    belongs(target, mu)?
                };
                belongs(point(fated_big(x, a, y), t)?, mu)? && belongs(point(a, s)?, mu)? && !consequent
            }
            TOP_BOUND => m(top) < m(el("x")?).min(half),
            FATED_BOUND | FATED_BOUND_IN => {
                let (x, a, y) = (el("x")?, el("a")?, el("y")?);
                let mut rhs = m(fated_big(x, a, y)).min(m(a));
                if failure.condition == FATED_BOUND {
                    rhs = rhs.min(half);
                }
                m(x) < rhs
            }
            LEVEL_U => {
                let t = gr("t")?;
                t <= half && not_fated(level_u(mu, t)?)?
            }
            LEVEL_QK => {
                let t = gr("t")?;
                t > half && not_fated(level_qk(mu, t, k)?)?
            }
            LEVEL_BRACKET => not_fated(level_bracket_k(mu, gr("t")?, k)?)?,
            PREFIX_BOUND => {
                let (x, y, z) = (el("x")?, el("y")?, el("z")?);
                let rhs = m(alg.arrow(x, alg.arrow(y, z))).min(m(alg.arrow(x, y))).min(half);
                m(alg.arrow(x, z)) < rhs
            }
            PEIRCE_BOUND => {
                let (x, y) = (el("x")?, el("y")?);
                m(x) < m(alg.arrow(alg.arrow(x, y), x)).min(half)
            }
            BELOW_HALF => {
                let x = el("x")?;
                let unbounded_fails = match w.get_element("a") {
                    Some(a) => m(x) < m(fated_big(x, a, el("y")?)).min(m(a)),
                    None => m(top) < m(x),
                };
                m(top) < half && self.is_qk_fff(mu, k)?.passed() && unbounded_fails
            }
            other => return Err(Error::Invariant(format!("no re-evaluation rule for `{other}`"))),
        })
    }
}
