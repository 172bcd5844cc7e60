//! Finite R₀-algebras given by negation and implication tables.
//!
//! The order is derived from the implication (`x ≤ y` iff `x → y = 1`),
//! and meets and joins are computed from that order. Construction only
//! checks that the tables are well-formed, so algebras that violate the
//! axioms can still be built and inspected; [`R0Algebra::verify_axioms`]
//! decides validity.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::{CheckReport, Witness};
use crate::subset::MAX_CARRIER;

/// Index of an element in the carrier of a particular algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ElementId(pub usize);

impl ElementId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct R0Algebra {
    names: Vec<String>,
    neg: Vec<ElementId>,
    /// Row-major `n × n` implication table.
    arrow: Vec<ElementId>,
    top: ElementId,
    bottom: ElementId,
    /// Row-major `n × n` derived order.
    le: Vec<bool>,
    /// Size of the principal down-set of each element.
    down_size: Vec<usize>,
}

impl R0Algebra {
    /// Builds an algebra from its tables.
    ///
    /// The top element is the constant value of the diagonal `x → x`; the
    /// bottom is the least element of the derived order. Everything else is
    /// left to [`verify_axioms`](Self::verify_axioms).
    pub fn new(names: Vec<String>, neg: Vec<usize>, arrow: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n < 2 {
            return Err(Error::Structural(format!("carrier must have at least 2 elements, found {n}")));
        }
        if n > MAX_CARRIER {
            return Err(Error::Structural(format!("carrier of size {n} exceeds {MAX_CARRIER}")));
        }
        let mut seen = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if let Some(j) = seen.insert(name.as_str(), i) {
                return Err(Error::Structural(format!(
                    "element name `{name}` used at positions {j} and {i}"
                )));
            }
        }
        if neg.len() != n {
            return Err(Error::Structural(format!("negation table has {} entries, expected {n}", neg.len())));
        }
        if arrow.len() != n || arrow.iter().any(|row| row.len() != n) {
            return Err(Error::Structural(format!("implication table must be {n} × {n}")));
        }
        if neg.iter().chain(arrow.iter().flatten()).any(|&v| v >= n) {
            return Err(Error::Structural("table entry outside the carrier".into()));
        }
        let arrow: Vec<ElementId> = arrow.into_iter().flatten().map(ElementId).collect();
        let neg: Vec<ElementId> = neg.into_iter().map(ElementId).collect();

        let top = arrow[0];
        if let Some(x) = (0..n).find(|&x| arrow[x * n + x] != top) {
            return Err(Error::Structural(format!(
                "diagonal is not constant: {0} → {0} = {1} but {2} → {2} = {3}",
                names[0],
                names[top.0],
                names[x],
                names[arrow[x * n + x].0]
            )));
        }
        let le: Vec<bool> = arrow.iter().map(|&v| v == top).collect();
        let bottom = (0..n)
            .find(|&b| (0..n).all(|y| le[b * n + y]))
            .map(ElementId)
            .ok_or_else(|| Error::Structural("derived order has no least element".into()))?;
        if bottom == top {
            return Err(Error::Structural("bottom and top coincide".into()));
        }
        let down_size = (0..n).map(|y| (0..n).filter(|&x| le[x * n + y]).count()).collect();
        Ok(R0Algebra {
            names,
            neg,
            arrow,
            top,
            bottom,
            le,
            down_size,
        })
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + Clone {
        (0..self.size()).map(ElementId)
    }

    /// Validates an index against the carrier.
    pub fn element(&self, index: usize) -> Result<ElementId> {
        if index < self.size() {
            Ok(ElementId(index))
        } else {
            Err(Error::Domain(format!(
                "element index {index} outside carrier of size {}",
                self.size()
            )))
        }
    }

    pub fn lookup(&self, name: &str) -> Option<ElementId> {
        self.names.iter().position(|n| n == name).map(ElementId)
    }

    pub fn name(&self, e: ElementId) -> &str {
        &self.names[e.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn top(&self) -> ElementId {
        self.top
    }

    pub fn bottom(&self) -> ElementId {
        self.bottom
    }

    pub fn neg(&self, x: ElementId) -> ElementId {
        self.neg[x.0]
    }

    pub fn arrow(&self, x: ElementId, y: ElementId) -> ElementId {
        self.arrow[x.0 * self.size() + y.0]
    }

    /// `x ⊙ y = ¬(x → ¬y)`.
    pub fn odot(&self, x: ElementId, y: ElementId) -> ElementId {
        self.neg(self.arrow(x, self.neg(y)))
    }

    /// `x ⊕ y = ¬x → y`.
    pub fn oplus(&self, x: ElementId, y: ElementId) -> ElementId {
        self.arrow(self.neg(x), y)
    }

    /// Derived order without range checks.
    pub(crate) fn le(&self, x: ElementId, y: ElementId) -> bool {
        self.le[x.0 * self.size() + y.0]
    }

    /// `x ≤ y` iff `x → y` is the top element.
    pub fn leq(&self, x: ElementId, y: ElementId) -> Result<bool> {
        self.element(x.0)?;
        self.element(y.0)?;
        Ok(self.le(x, y))
    }

    /// Greatest lower bound under the derived order.
    pub fn meet(&self, x: ElementId, y: ElementId) -> Result<ElementId> {
        self.element(x.0)?;
        self.element(y.0)?;
        self.bound(x, y, |a, b| self.le(a, b), "lower")
    }

    /// Least upper bound under the derived order.
    pub fn join(&self, x: ElementId, y: ElementId) -> Result<ElementId> {
        self.element(x.0)?;
        self.element(y.0)?;
        self.bound(x, y, |a, b| self.le(b, a), "upper")
    }

    /// Best common bound in direction `below`: the candidate with the largest
    /// (for meets) or smallest (for joins) down-set, then confirmed against
    /// every other candidate. Two linear passes.
    fn bound(
        &self,
        x: ElementId,
        y: ElementId,
        below: impl Fn(ElementId, ElementId) -> bool,
        kind: &str,
    ) -> Result<ElementId> {
        let lower = kind == "lower";
        let candidates = self.elements().filter(|&z| below(z, x) && below(z, y));
        let best = if lower {
            candidates.clone().max_by_key(|z| self.down_size[z.0])
        } else {
            candidates.clone().min_by_key(|z| self.down_size[z.0])
        };
        match best {
            Some(b) if candidates.clone().all(|z| below(z, b)) => Ok(b),
            _ => Err(Error::Structural(format!(
                "{} and {} have no unique greatest {kind} bound",
                self.name(x),
                self.name(y)
            ))),
        }
    }

    fn lattice_tables(&self) -> std::result::Result<(Vec<ElementId>, Vec<ElementId>), (ElementId, ElementId)> {
        let n = self.size();
        let mut meet = Vec::with_capacity(n * n);
        let mut join = Vec::with_capacity(n * n);
        for x in self.elements() {
            for y in self.elements() {
                let m = self.meet(x, y).map_err(|_| (x, y))?;
                let j = self.join(x, y).map_err(|_| (x, y))?;
                meet.push(m);
                join.push(j);
            }
        }
        Ok((meet, join))
    }

    /// Exhaustively checks order, lattice and involution structure and the
    /// six defining axioms, recording the first witness of each failure.
    pub fn verify_axioms(&self) -> CheckReport {
        let n = self.size();
        let els = || self.elements();
        let mut report = CheckReport::new("R0-algebra axioms");

        report.record(
            "reflexive: x <= x",
            els().find(|&x| !self.le(x, x)).map(|x| Witness::new().element("x", x)),
        );
        report.record(
            "antisymmetric: x <= y and y <= x imply x = y",
            pairs(n).find(|&(x, y)| x != y && self.le(x, y) && self.le(y, x)).map(|(x, y)| w2(x, y)),
        );
        report.record(
            "transitive: x <= y <= z implies x <= z",
            triples(n)
                .find(|&(x, y, z)| self.le(x, y) && self.le(y, z) && !self.le(x, z))
                .map(|(x, y, z)| w3(x, y, z)),
        );
        report.record(
            "bounded: 0 <= x <= 1",
            els()
                .find(|&x| !self.le(self.bottom, x) || !self.le(x, self.top))
                .map(|x| Witness::new().element("x", x)),
        );
        let lattice = self.lattice_tables();
        report.record(
            "lattice: every pair has a meet and a join",
            lattice.as_ref().err().map(|&(x, y)| w2(x, y)),
        );
        let tables = lattice.ok();
        let meet = |x: ElementId, y: ElementId| tables.as_ref().map(|(m, _)| m[x.0 * n + y.0]);
        let join = |x: ElementId, y: ElementId| tables.as_ref().map(|(_, j)| j[x.0 * n + y.0]);
        let needs_lattice = || Some(Witness::new().note("not a lattice"));

        report.record(
            "distributive: x & (y | z) = (x & y) | (x & z)",
            if tables.is_none() {
                needs_lattice()
            } else {
                triples(n)
                    .find(|&(x, y, z)| {
                        meet(x, join(y, z).unwrap()) != join(meet(x, y).unwrap(), meet(x, z).unwrap())
                    })
                    .map(|(x, y, z)| w3(x, y, z))
            },
        );
        report.record(
            "involution: ~~x = x",
            els().find(|&x| self.neg(self.neg(x)) != x).map(|x| Witness::new().element("x", x)),
        );
        report.record(
            "order-reversing: x <= y implies ~y <= ~x",
            pairs(n)
                .find(|&(x, y)| self.le(x, y) && !self.le(self.neg(y), self.neg(x)))
                .map(|(x, y)| w2(x, y)),
        );
        let a = |x, y| self.arrow(x, y);
        report.record(
            "R1: x -> y = ~y -> ~x",
            pairs(n).find(|&(x, y)| a(x, y) != a(self.neg(y), self.neg(x))).map(|(x, y)| w2(x, y)),
        );
        report.record(
            "R2: 1 -> x = x",
            els().find(|&x| a(self.top, x) != x).map(|x| Witness::new().element("x", x)),
        );
        report.record(
            "R3: (y -> z) & ((x -> y) -> (x -> z)) = y -> z",
            if tables.is_none() {
                needs_lattice()
            } else {
                triples(n)
                    .find(|&(x, y, z)| meet(a(y, z), a(a(x, y), a(x, z))) != Some(a(y, z)))
                    .map(|(x, y, z)| w3(x, y, z))
            },
        );
        report.record(
            "R4: x -> (y -> z) = y -> (x -> z)",
            triples(n)
                .find(|&(x, y, z)| a(x, a(y, z)) != a(y, a(x, z)))
                .map(|(x, y, z)| w3(x, y, z)),
        );
        report.record(
            "R5: x -> (y | z) = (x -> y) | (x -> z)",
            if tables.is_none() {
                needs_lattice()
            } else {
                triples(n)
                    .find(|&(x, y, z)| Some(a(x, join(y, z).unwrap())) != join(a(x, y), a(x, z)))
                    .map(|(x, y, z)| w3(x, y, z))
            },
        );
        report.record(
            "R6: (x -> y) | ((x -> y) -> (~x | y)) = 1",
            if tables.is_none() {
                needs_lattice()
            } else {
                pairs(n)
                    .find(|&(x, y)| {
                        let xy = a(x, y);
                        join(xy, a(xy, join(self.neg(x), y).unwrap())) != Some(self.top)
                    })
                    .map(|(x, y)| w2(x, y))
            },
        );
        report
    }

    /// Exhaustively checks the standard consequences of the axioms, together
    /// with commutativity and associativity of `⊙` and `⊕` and the De Morgan
    /// link between them.
    pub fn verify_derived(&self) -> CheckReport {
        let n = self.size();
        let mut report = CheckReport::new("R0-algebra derived laws");
        let tables = self.lattice_tables().ok();
        let Some((meet_t, join_t)) = tables else {
            report.record("lattice structure", Some(Witness::new().note("not a lattice")));
            return report;
        };
        let meet = |x: ElementId, y: ElementId| meet_t[x.0 * n + y.0];
        let join = |x: ElementId, y: ElementId| join_t[x.0 * n + y.0];
        let a = |x, y| self.arrow(x, y);
        let le = |x, y| self.le(x, y);
        let o = |x, y| self.odot(x, y);
        let p = |x, y| self.oplus(x, y);
        let neg = |x| self.neg(x);
        let (one, zero) = (self.top, self.bottom);

        let check2 = |f: &dyn Fn(ElementId, ElementId) -> bool| pairs(n).find(|&(x, y)| !f(x, y)).map(|(x, y)| w2(x, y));
        let check3 = |f: &dyn Fn(ElementId, ElementId, ElementId) -> bool| {
            triples(n).find(|&(x, y, z)| !f(x, y, z)).map(|(x, y, z)| w3(x, y, z))
        };

        report.record("x <= y iff x -> y = 1", check2(&|x, y| le(x, y) == (a(x, y) == one)));
        report.record("x <= y -> x", check2(&|x, y| le(x, a(y, x))));
        report.record(
            "~x = x -> 0",
            self.elements().find(|&x| neg(x) != a(x, zero)).map(|x| Witness::new().element("x", x)),
        );
        report.record("(x -> y) | (y -> x) = 1", check2(&|x, y| join(a(x, y), a(y, x)) == one));
        report.record(
            "x <= y implies y -> z <= x -> z",
            check3(&|x, y, z| !le(x, y) || le(a(y, z), a(x, z))),
        );
        report.record(
            "x <= y implies z -> x <= z -> y",
            check3(&|x, y, z| !le(x, y) || le(a(z, x), a(z, y))),
        );
        report.record("((x -> y) -> y) -> y = x -> y", check2(&|x, y| a(a(a(x, y), y), y) == a(x, y)));
        report.record(
            "x | y = ((x -> y) -> y) & ((y -> x) -> x)",
            check2(&|x, y| join(x, y) == meet(a(a(x, y), y), a(a(y, x), x))),
        );
        report.record(
            "x * ~x = 0 and x + ~x = 1",
            self.elements()
                .find(|&x| o(x, neg(x)) != zero || p(x, neg(x)) != one)
                .map(|x| Witness::new().element("x", x)),
        );
        report.record(
            "x * y <= x & y and x * (x -> y) <= x & y",
            check2(&|x, y| le(o(x, y), meet(x, y)) && le(o(x, a(x, y)), meet(x, y))),
        );
        report.record("(x * y) -> z = x -> (y -> z)", check3(&|x, y, z| a(o(x, y), z) == a(x, a(y, z))));
        report.record("x <= y -> (x * y)", check2(&|x, y| le(x, a(y, o(x, y)))));
        report.record("x * y <= z iff x <= y -> z", check3(&|x, y, z| le(o(x, y), z) == le(x, a(y, z))));
        report.record(
            "x <= y implies x * z <= y * z",
            check3(&|x, y, z| !le(x, y) || le(o(x, z), o(y, z))),
        );
        report.record("x -> y <= (y -> z) -> (x -> z)", check3(&|x, y, z| le(a(x, y), a(a(y, z), a(x, z)))));
        report.record("(x -> y) * (y -> z) <= x -> z", check3(&|x, y, z| le(o(a(x, y), a(y, z)), a(x, z))));
        report.record("x * y = y * x", check2(&|x, y| o(x, y) == o(y, x)));
        report.record("x + y = y + x", check2(&|x, y| p(x, y) == p(y, x)));
        report.record("(x * y) * z = x * (y * z)", check3(&|x, y, z| o(o(x, y), z) == o(x, o(y, z))));
        report.record("(x + y) + z = x + (y + z)", check3(&|x, y, z| p(p(x, y), z) == p(x, p(y, z))));
        report.record("x + y = ~(~x * ~y)", check2(&|x, y| p(x, y) == neg(o(neg(x), neg(y)))));
        report
    }

    /// Parses the line-oriented algebra format.
    ///
    /// ```text
    /// elements: 0 a b c d 1
    /// neg: 1 d c b a 0
    /// arrow 0: 1 1 1 1 1 1
    /// ...
    /// order: 0<a a<b      # optional, cross-checked
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut names: Option<(usize, Vec<String>)> = None;
        let mut neg: Option<(usize, Vec<String>)> = None;
        let mut rows: Vec<(usize, String, Vec<String>)> = Vec::new();
        let mut order: Option<(usize, Vec<String>)> = None;
        let mut last_line = 0;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (head, body) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(line_no, "expected `<keyword>: ...`"))?;
            let tokens: Vec<String> = body.split_whitespace().map(str::to_string).collect();
            let head = head.trim();
            match head {
                "elements" => {
                    if names.is_some() {
                        return Err(Error::parse(line_no, "duplicate `elements` line"));
                    }
                    names = Some((line_no, tokens));
                }
                "neg" => {
                    if neg.is_some() {
                        return Err(Error::parse(line_no, "duplicate `neg` line"));
                    }
                    neg = Some((line_no, tokens));
                }
                "order" => {
                    if order.is_some() {
                        return Err(Error::parse(line_no, "duplicate `order` line"));
                    }
                    order = Some((line_no, tokens));
                }
                _ => match head.strip_prefix("arrow") {
                    Some(row) if !row.trim().is_empty() && row.starts_with(char::is_whitespace) => {
                        rows.push((line_no, row.trim().to_string(), tokens));
                    }
                    _ => return Err(Error::parse(line_no, format!("unknown keyword `{head}`"))),
                },
            }
        }

        let (names_line, names) = names.ok_or_else(|| Error::parse(1, "missing `elements` line"))?;
        let mut index = HashMap::new();
        for name in &names {
            if index.insert(name.clone(), index.len()).is_some() {
                return Err(Error::parse(names_line, format!("duplicate element name `{name}`")));
            }
        }
        let n = names.len();
        if n < 2 {
            return Err(Error::parse(names_line, "need at least two elements"));
        }
        if n > MAX_CARRIER {
            return Err(Error::parse(names_line, format!("at most {MAX_CARRIER} elements are supported")));
        }
        let resolve = |line: usize, token: &str| {
            index
                .get(token)
                .copied()
                .ok_or_else(|| Error::parse(line, format!("unknown element `{token}`")))
        };

        let (neg_line, neg_tokens) = neg.ok_or_else(|| Error::parse(last_line.max(1), "missing `neg` line"))?;
        if neg_tokens.len() != n {
            return Err(Error::parse(
                neg_line,
                format!("`neg` lists {} images, expected {n}", neg_tokens.len()),
            ));
        }
        let neg = neg_tokens
            .iter()
            .map(|t| resolve(neg_line, t))
            .collect::<Result<Vec<_>>>()?;

        let mut arrow: Vec<Option<Vec<usize>>> = vec![None; n];
        for (line, row_name, tokens) in &rows {
            let row = resolve(*line, row_name)?;
            if arrow[row].is_some() {
                return Err(Error::parse(*line, format!("duplicate arrow row for `{row_name}`")));
            }
            if tokens.len() != n {
                return Err(Error::parse(
                    *line,
                    format!("arrow row `{row_name}` has {} entries, expected {n}", tokens.len()),
                ));
            }
            arrow[row] = Some(tokens.iter().map(|t| resolve(*line, t)).collect::<Result<Vec<_>>>()?);
        }
        if let Some(missing) = arrow.iter().position(Option::is_none) {
            return Err(Error::parse(
                last_line.max(1),
                format!("missing arrow row for `{}`", names[missing]),
            ));
        }
        let arrow: Vec<Vec<usize>> = arrow.into_iter().map(Option::unwrap).collect();
        let algebra = R0Algebra::new(names, neg, arrow).map_err(|e| match e {
            Error::Structural(msg) => Error::parse(names_line, msg),
            other => other,
        })?;

        if let Some((line, pairs)) = order {
            algebra.cross_check_order(line, &pairs, &resolve)?;
        }
        Ok(algebra)
    }

    fn cross_check_order(
        &self,
        line: usize,
        pairs: &[String],
        resolve: &dyn Fn(usize, &str) -> Result<usize>,
    ) -> Result<()> {
        let n = self.size();
        let mut declared = vec![false; n * n];
        for i in 0..n {
            declared[i * n + i] = true;
        }
        for pair in pairs {
            let (lo, hi) = pair
                .split_once('<')
                .ok_or_else(|| Error::parse(line, format!("expected `x<y`, found `{pair}`")))?;
            let (lo, hi) = (resolve(line, lo)?, resolve(line, hi)?);
            declared[lo * n + hi] = true;
        }
        // Reflexive-transitive closure.
        for k in 0..n {
            for i in 0..n {
                if declared[i * n + k] {
                    for j in 0..n {
                        if declared[k * n + j] {
                            declared[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for x in self.elements() {
            for y in self.elements() {
                let derived = self.le(x, y);
                if declared[x.0 * n + y.0] != derived {
                    return Err(Error::parse(
                        line,
                        format!(
                            "declared order disagrees with the implication table at ({}, {}): declared {}, derived {}",
                            self.name(x),
                            self.name(y),
                            declared[x.0 * n + y.0],
                            derived
                        ),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Serializes in the same format [`parse`](Self::parse) reads.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "elements: {}", self.names.join(" "));
        let negs: Vec<&str> = self.elements().map(|x| self.name(self.neg(x))).collect();
        let _ = writeln!(out, "neg: {}", negs.join(" "));
        for x in self.elements() {
            let row: Vec<&str> = self.elements().map(|y| self.name(self.arrow(x, y))).collect();
            let _ = writeln!(out, "arrow {}: {}", self.name(x), row.join(" "));
        }
        out
    }

    /// Returns a copy with one implication entry replaced.
    pub fn with_arrow_entry(&self, x: ElementId, y: ElementId, value: ElementId) -> Result<Self> {
        let n = self.size();
        let mut rows: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).map(|j| self.arrow[i * n + j].0).collect())
            .collect();
        rows[x.0][y.0] = value.0;
        R0Algebra::new(self.names.clone(), self.neg.iter().map(|e| e.0).collect(), rows)
    }

    /// The up-set `{y : x ≤ y}` of each element as a bit mask.
    pub(crate) fn up_masks(&self) -> Vec<u64> {
        self.elements()
            .map(|x| self.elements().filter(|&y| self.le(x, y)).fold(0u64, |m, y| m | 1 << y.0))
            .collect()
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (ElementId, ElementId)> {
    (0..n).flat_map(move |x| (0..n).map(move |y| (ElementId(x), ElementId(y))))
}

fn triples(n: usize) -> impl Iterator<Item = (ElementId, ElementId, ElementId)> {
    (0..n).flat_map(move |x| (0..n).flat_map(move |y| (0..n).map(move |z| (ElementId(x), ElementId(y), ElementId(z)))))
}

fn w2(x: ElementId, y: ElementId) -> Witness {
    Witness::new().element("x", x).element("y", y)
}

fn w3(x: ElementId, y: ElementId, z: ElementId) -> Witness {
    Witness::new().element("x", x).element("y", y).element("z", z)
}

/// The finite chain `0 < 1 < ... < n-1` with `¬x = n-1-x` and the R₀
/// implication: `x → y = 1` if `x ≤ y`, otherwise `max(¬x, y)`.
pub fn chain_algebra(n: usize) -> Result<R0Algebra> {
    if n < 2 {
        return Err(Error::Structural("a chain needs at least two elements".into()));
    }
    let names = (0..n).map(|i| format!("e{i}")).collect();
    let neg = (0..n).map(|x| n - 1 - x).collect();
    let arrow = (0..n)
        .map(|x| (0..n).map(|y| if x <= y { n - 1 } else { (n - 1 - x).max(y) }).collect())
        .collect();
    R0Algebra::new(names, neg, arrow)
}

/// The Boolean algebra of subsets of `atoms` atoms, named by their letters
/// (`0` and `1` for the bounds), with `x → y = ¬x ∨ y`.
pub fn boolean_algebra(atoms: usize) -> Result<R0Algebra> {
    if atoms == 0 || atoms > 6 {
        return Err(Error::Structural("a Boolean algebra needs between 1 and 6 atoms".into()));
    }
    let n = 1usize << atoms;
    let full = n - 1;
    let names = (0..n)
        .map(|x| match x {
            0 => "0".to_string(),
            _ if x == full => "1".to_string(),
            _ => (0..atoms)
                .filter(|i| x >> i & 1 == 1)
                .map(|i| (b'a' + i as u8) as char)
                .collect(),
        })
        .collect();
    let neg = (0..n).map(|x| full ^ x).collect();
    let arrow = (0..n).map(|x| (0..n).map(|y| (full ^ x) | y).collect()).collect();
    R0Algebra::new(names, neg, arrow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ex34() -> R0Algebra {
        fixtures::example34()
    }

    fn id(a: &R0Algebra, name: &str) -> ElementId {
        a.lookup(name).unwrap()
    }

    #[test]
    fn order_from_arrow() {
        let a = ex34();
        assert!(a.leq(id(&a, "a"), id(&a, "c")).unwrap());
        assert!(!a.leq(id(&a, "d"), id(&a, "a")).unwrap());
        for x in a.elements() {
            assert!(a.leq(x, x).unwrap());
        }
        assert!(a.leq(ElementId(6), ElementId(0)).is_err());
        assert_eq!(a.bottom(), id(&a, "0"));
        assert_eq!(a.top(), id(&a, "1"));
    }

    #[test]
    fn meet_join_on_chain() {
        let a = ex34();
        assert_eq!(a.meet(id(&a, "c"), id(&a, "d")).unwrap(), id(&a, "c"));
        for x in a.elements() {
            assert_eq!(a.meet(x, a.top()).unwrap(), x);
            assert_eq!(a.join(a.bottom(), x).unwrap(), x);
            for y in a.elements() {
                assert_eq!(a.meet(x, y).unwrap(), x.min(y));
                assert_eq!(a.join(x, y).unwrap(), x.max(y));
            }
        }
        assert!(a.meet(ElementId(9), a.top()).is_err());
    }

    #[test]
    fn example_algebra_is_valid() {
        let a = ex34();
        let axioms = a.verify_axioms();
        assert!(axioms.passed(), "{}", axioms.render(&a));
        let derived = a.verify_derived();
        assert!(derived.passed(), "{}", derived.render(&a));
    }

    #[test]
    fn generated_boolean_algebras() {
        for m in 1..=3 {
            let b = boolean_algebra(m).unwrap();
            assert_eq!(b.size(), 1 << m);
            assert!(b.verify_axioms().passed());
            assert!(b.verify_derived().passed());
        }
        let b = boolean_algebra(2).unwrap();
        assert_eq!(b.names(), &["0", "a", "b", "1"]);
        assert_eq!(b.to_text(), R0Algebra::parse(&b.to_text()).unwrap().to_text());
    }

    #[test]
    fn boolean_algebra_is_valid() {
        let b = fixtures::boolean2();
        assert!(b.verify_axioms().passed());
        assert!(b.verify_derived().passed());
    }

    #[test]
    fn chains_are_valid() {
        for n in 2..=7 {
            let c = chain_algebra(n).unwrap();
            assert!(c.verify_axioms().passed(), "chain {n}");
            assert!(c.verify_derived().passed(), "chain {n}");
        }
    }

    #[test]
    fn patched_table_breaks_r1_at_d_0() {
        let a = ex34();
        let bad = a.with_arrow_entry(id(&a, "d"), id(&a, "0"), id(&a, "b")).unwrap();
        let report = bad.verify_axioms();
        let r1 = report.entries.iter().find(|e| e.condition.starts_with("R1")).unwrap();
        let w = r1.witness.as_ref().expect("R1 must fail");
        assert_eq!(w.elements(), vec![id(&a, "d"), id(&a, "0")]);
        assert!(!report.passed());
    }

    #[test]
    fn odot_and_oplus() {
        let a = ex34();
        for x in a.elements() {
            assert_eq!(a.odot(x, a.neg(x)), a.bottom());
            assert_eq!(a.oplus(x, a.neg(x)), a.top());
            assert_eq!(a.neg(a.neg(x)), x);
        }
        assert_eq!(a.odot(id(&a, "c"), id(&a, "c")), id(&a, "c"));
        assert_eq!(a.neg(a.bottom()), a.top());
    }

    #[test]
    fn text_round_trip() {
        let a = ex34();
        assert_eq!(R0Algebra::parse(&a.to_text()).unwrap(), a);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let dup = "elements: 0 0\nneg: 0 0\narrow 0: 0 0\n";
        assert!(matches!(R0Algebra::parse(dup), Err(Error::Parse { line: 1, .. })));
        let unknown = "elements: 0 1\nneg: 1 x\narrow 0: 1 1\narrow 1: 0 1\n";
        assert!(matches!(R0Algebra::parse(unknown), Err(Error::Parse { line: 2, .. })));
        let missing = "elements: 0 1\nneg: 1 0\narrow 0: 1 1\n";
        assert!(matches!(R0Algebra::parse(missing), Err(Error::Parse { .. })));
        let short = "elements: 0 1\nneg: 1 0\narrow 0: 1 1\narrow 1: 0\n";
        assert!(matches!(R0Algebra::parse(short), Err(Error::Parse { line: 4, .. })));
        let dup_row = "elements: 0 1\nneg: 1 0\narrow 0: 1 1\narrow 0: 1 1\n";
        assert!(matches!(R0Algebra::parse(dup_row), Err(Error::Parse { line: 4, .. })));
    }

    #[test]
    fn declared_order_is_cross_checked() {
        let base = "elements: 0 1\nneg: 1 0\narrow 0: 1 1\narrow 1: 0 1\n";
        assert!(R0Algebra::parse(&format!("{base}order: 0<1\n")).is_ok());
        let err = R0Algebra::parse(&format!("{base}order: 1<0\n")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }), "{err}");
    }
}
