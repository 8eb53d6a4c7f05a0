//! Finite lattices with a tensor, monotone maps, adjoints, and adjointable squares.

use crate::report::{CheckBuilder, VerificationReport, Witness};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("order is not reflexive at `{0}`")]
    NotReflexive(String),
    #[error("order is not antisymmetric on `{0}`, `{1}`")]
    NotAntisymmetric(String, String),
    #[error("order is not transitive on `{0}`, `{1}`, `{2}`")]
    NotTransitive(String, String, String),
    #[error("`{0}` and `{1}` have no meet")]
    NoMeet(String, String),
    #[error("`{0}` and `{1}` have no join")]
    NoJoin(String, String),
    #[error("empty lattice")]
    Empty,
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("tensor table has the wrong size")]
    TensorShape,
    #[error("tensor is not a commutative monoid: {0}")]
    TensorLaw(String),
    #[error("tensor is not monotone at `{0}`, `{1}`")]
    TensorNotMonotone(String, String),
    #[error("declared frame is not distributive at `{0}`, `{1}`, `{2}`")]
    NotDistributive(String, String, String),
    #[error("map is not monotone: {0} <= {1} but images are not ordered")]
    NotMonotone(String, String),
    #[error("map table has length {got}, expected {expected}")]
    MapShape { expected: usize, got: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tensor {
    Meet,
    Join,
    Table(Vec<usize>),
}

#[derive(Debug, PartialEq, Eq)]
struct Explicit {
    labels: Vec<String>,
    leq: Vec<bool>,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
}

#[derive(Debug, PartialEq, Eq)]
enum Repr {
    Explicit(Explicit),
    /// `base^exp` with pointwise order; element `e` has digit `(e / b^i) % b` at point `i`.
    Power { base: FiniteLattice, exp: usize, size: usize },
}

#[derive(Debug, PartialEq, Eq)]
struct Inner {
    name: String,
    repr: Repr,
    tensor: Tensor,
}

/// A finite lattice with a commutative monotone tensor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice(Arc<Inner>);

impl FiniteLattice {
    /// Builds from a full order matrix, computing meets and joins.
    pub fn from_order(
        name: &str,
        labels: Vec<String>,
        leq: Vec<bool>,
        tensor: Tensor,
    ) -> Result<Self, LatticeError> {
        let n = labels.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(LatticeError::DuplicateElement(l.clone()));
            }
        }
        let le = |a: usize, b: usize| leq[a * n + b];
        for a in 0..n {
            if !le(a, a) {
                return Err(LatticeError::NotReflexive(labels[a].clone()));
            }
            for b in 0..n {
                if a != b && le(a, b) && le(b, a) {
                    return Err(LatticeError::NotAntisymmetric(labels[a].clone(), labels[b].clone()));
                }
                for c in 0..n {
                    if le(a, b) && le(b, c) && !le(a, c) {
                        return Err(LatticeError::NotTransitive(
                            labels[a].clone(),
                            labels[b].clone(),
                            labels[c].clone(),
                        ));
                    }
                }
            }
        }
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&x| le(x, a) && le(x, b)).collect();
                meet[a * n + b] = *lower
                    .iter()
                    .find(|&&x| lower.iter().all(|&y| le(y, x)))
                    .ok_or_else(|| LatticeError::NoMeet(labels[a].clone(), labels[b].clone()))?;
                let upper: Vec<usize> = (0..n).filter(|&x| le(a, x) && le(b, x)).collect();
                join[a * n + b] = *upper
                    .iter()
                    .find(|&&x| upper.iter().all(|&y| le(x, y)))
                    .ok_or_else(|| LatticeError::NoJoin(labels[a].clone(), labels[b].clone()))?;
            }
        }
        let bottom = (0..n).find(|&x| (0..n).all(|y| le(x, y))).expect("finite lattice has a bottom");
        let top = (0..n).find(|&x| (0..n).all(|y| le(y, x))).expect("finite lattice has a top");
        let lat = Self(Arc::new(Inner {
            name: name.to_string(),
            repr: Repr::Explicit(Explicit {
                labels,
                leq,
                meet,
                join,
                bottom,
                top,
            }),
            tensor,
        }));
        lat.validate_tensor()?;
        Ok(lat)
    }

    /// Builds from generating relations `a <= b`, closing reflexively and transitively.
    pub fn from_relations(
        name: &str,
        labels: Vec<String>,
        pairs: &[(String, String)],
        tensor: Tensor,
    ) -> Result<Self, LatticeError> {
        let n = labels.len();
        let idx = |s: &str| {
            labels
                .iter()
                .position(|l| l == s)
                .ok_or_else(|| LatticeError::UnknownElement(s.to_string()))
        };
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (a, b) in pairs {
            leq[idx(a)? * n + idx(b)?] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i * n + k] && leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
        Self::from_order(name, labels, leq, tensor)
    }

    pub fn chain(len: usize) -> Self {
        let labels = (0..len).map(|i| i.to_string()).collect();
        let leq = (0..len * len).map(|k| k / len <= k % len).collect();
        Self::from_order(&format!("chain{len}"), labels, leq, Tensor::Meet).expect("chains are lattices")
    }

    /// The pentagon, the smallest non-modular lattice.
    pub fn n5() -> Self {
        let l = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
        let rel = [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")];
        let pairs: Vec<(String, String)> = rel.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        Self::from_relations("N5", l, &pairs, Tensor::Meet).expect("pentagon")
    }

    /// The diamond with three atoms.
    pub fn m3() -> Self {
        let l = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
        let rel = [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")];
        let pairs: Vec<(String, String)> = rel.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        Self::from_relations("M3", l, &pairs, Tensor::Meet).expect("diamond")
    }

    /// Explicit subsets-of-`k` lattice.
    pub fn boolean(k: usize) -> Self {
        let n = 1 << k;
        let labels = (0..n).map(|s| format!("{s:0width$b}", width = k.max(1))).collect();
        let leq = (0..n * n).map(|x| (x / n) & !(x % n) == 0).collect();
        Self::from_order(&format!("B{k}"), labels, leq, Tensor::Meet).expect("boolean lattice")
    }

    /// `base^exp` with pointwise order and tensor.
    pub fn power(base: &FiniteLattice, exp: usize) -> Self {
        let size = u32::try_from(exp)
            .ok()
            .and_then(|e| base.size().checked_pow(e))
            .unwrap_or_else(|| panic!("{}^{exp} does not fit in memory indices", base.name()));
        Self(Arc::new(Inner {
            name: format!("{}^{exp}", base.name()),
            repr: Repr::Power {
                base: base.clone(),
                exp,
                size,
            },
            tensor: base.0.tensor.clone(),
        }))
    }

    /// Same order with another tensor.
    pub fn with_tensor(&self, tensor: Tensor) -> Result<Self, LatticeError> {
        let repr = match &self.0.repr {
            Repr::Explicit(e) => Repr::Explicit(Explicit {
                labels: e.labels.clone(),
                leq: e.leq.clone(),
                meet: e.meet.clone(),
                join: e.join.clone(),
                bottom: e.bottom,
                top: e.top,
            }),
            Repr::Power { base, exp, .. } => {
                return Ok(Self::power(&base.with_tensor(tensor)?, *exp));
            }
        };
        let suffix = match &tensor {
            Tensor::Meet => "",
            Tensor::Join => "[∨]",
            Tensor::Table(_) => "[⊗]",
        };
        let lat = Self(Arc::new(Inner {
            name: format!("{}{suffix}", self.name().trim_end_matches("[∨]").trim_end_matches("[⊗]")),
            repr,
            tensor,
        }));
        lat.validate_tensor()?;
        Ok(lat)
    }

    fn validate_tensor(&self) -> Result<(), LatticeError> {
        let Tensor::Table(t) = &self.0.tensor else {
            return Ok(());
        };
        let n = self.size();
        if t.len() != n * n || t.iter().any(|&v| v >= n) {
            return Err(LatticeError::TensorShape);
        }
        let l = |a| self.label(a);
        for a in 0..n {
            for b in 0..n {
                if t[a * n + b] != t[b * n + a] {
                    return Err(LatticeError::TensorLaw(format!("not commutative at {}, {}", l(a), l(b))));
                }
                for c in 0..n {
                    if t[t[a * n + b] * n + c] != t[a * n + t[b * n + c]] {
                        return Err(LatticeError::TensorLaw(format!(
                            "not associative at {}, {}, {}",
                            l(a),
                            l(b),
                            l(c)
                        )));
                    }
                    if self.leq(a, b) && !self.leq(t[a * n + c], t[b * n + c]) {
                        return Err(LatticeError::TensorNotMonotone(l(a), l(b)));
                    }
                }
            }
        }
        if !(0..n).any(|u| (0..n).all(|a| t[u * n + a] == a)) {
            return Err(LatticeError::TensorLaw("no unit".into()));
        }
        Ok(())
    }

    /// Rejects a lattice declared to be a frame that is not distributive.
    pub fn require_frame(&self) -> Result<(), LatticeError> {
        match self.distributivity_witness() {
            None => Ok(()),
            Some((a, b, c)) => Err(LatticeError::NotDistributive(self.label(a), self.label(b), self.label(c))),
        }
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn tensor_kind(&self) -> &Tensor {
        &self.0.tensor
    }

    pub fn size(&self) -> usize {
        match &self.0.repr {
            Repr::Explicit(e) => e.labels.len(),
            Repr::Power { size, .. } => *size,
        }
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size()
    }

    /// The base lattice and exponent of a power lattice.
    pub fn as_power(&self) -> Option<(&FiniteLattice, usize)> {
        match &self.0.repr {
            Repr::Power { base, exp, .. } => Some((base, *exp)),
            Repr::Explicit(_) => None,
        }
    }

    fn digits(&self, base: &FiniteLattice, exp: usize, mut e: usize) -> Vec<usize> {
        let b = base.size();
        (0..exp)
            .map(|_| {
                let d = e % b;
                e /= b;
                d
            })
            .collect()
    }

    /// Value at point `i` of an element of a power lattice.
    pub fn component(&self, e: usize, i: usize) -> usize {
        let (base, _) = self.as_power().expect("power lattice");
        (e / base.size().pow(i as u32)) % base.size()
    }

    /// Element of a power lattice with the given values.
    pub fn from_components(&self, vals: &[usize]) -> usize {
        let (base, exp) = self.as_power().expect("power lattice");
        assert_eq!(vals.len(), exp);
        vals.iter().rev().fold(0, |acc, &v| acc * base.size() + v)
    }

    pub fn components(&self, e: usize) -> Vec<usize> {
        let (base, exp) = self.as_power().expect("power lattice");
        self.digits(base, exp, e)
    }

    fn pointwise(&self, a: usize, b: usize, op: impl Fn(&FiniteLattice, usize, usize) -> usize) -> usize {
        let Repr::Power { base, exp, .. } = &self.0.repr else {
            unreachable!()
        };
        let bs = base.size();
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..*exp {
            out += op(base, a % bs, b % bs) * scale;
            a /= bs;
            b /= bs;
            scale *= bs;
        }
        out
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        match &self.0.repr {
            Repr::Explicit(e) => e.leq[a * e.labels.len() + b],
            Repr::Power { base, exp, .. } => {
                let bs = base.size();
                let (mut a, mut b) = (a, b);
                for _ in 0..*exp {
                    if !base.leq(a % bs, b % bs) {
                        return false;
                    }
                    a /= bs;
                    b /= bs;
                }
                true
            }
        }
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        match &self.0.repr {
            Repr::Explicit(e) => e.meet[a * e.labels.len() + b],
            Repr::Power { .. } => self.pointwise(a, b, |l, x, y| l.meet(x, y)),
        }
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        match &self.0.repr {
            Repr::Explicit(e) => e.join[a * e.labels.len() + b],
            Repr::Power { .. } => self.pointwise(a, b, |l, x, y| l.join(x, y)),
        }
    }

    pub fn tensor(&self, a: usize, b: usize) -> usize {
        match &self.0.repr {
            Repr::Explicit(e) => match &self.0.tensor {
                Tensor::Meet => self.meet(a, b),
                Tensor::Join => self.join(a, b),
                Tensor::Table(t) => t[a * e.labels.len() + b],
            },
            Repr::Power { .. } => self.pointwise(a, b, |l, x, y| l.tensor(x, y)),
        }
    }

    pub fn bottom(&self) -> usize {
        match &self.0.repr {
            Repr::Explicit(e) => e.bottom,
            Repr::Power { base, exp, .. } => self.from_components(&vec![base.bottom(); *exp]),
        }
    }

    pub fn top(&self) -> usize {
        match &self.0.repr {
            Repr::Explicit(e) => e.top,
            Repr::Power { base, exp, .. } => self.from_components(&vec![base.top(); *exp]),
        }
    }

    pub fn meet_all(&self, it: impl IntoIterator<Item = usize>) -> usize {
        it.into_iter().fold(self.top(), |a, b| self.meet(a, b))
    }

    pub fn join_all(&self, it: impl IntoIterator<Item = usize>) -> usize {
        it.into_iter().fold(self.bottom(), |a, b| self.join(a, b))
    }

    pub fn label(&self, a: usize) -> String {
        match &self.0.repr {
            Repr::Explicit(e) => e.labels[a].clone(),
            Repr::Power { base, exp, .. } => {
                let parts: Vec<String> = self.digits(base, *exp, a).into_iter().map(|d| base.label(d)).collect();
                format!("({})", parts.join(","))
            }
        }
    }

    pub fn element(&self, label: &str) -> Option<usize> {
        self.elements().find(|&a| self.label(a) == label)
    }

    /// A triple violating `a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)`, if any.
    pub fn distributivity_witness(&self) -> Option<(usize, usize, usize)> {
        if let Some((base, exp)) = self.as_power() {
            return if exp == 0 {
                None
            } else {
                base.distributivity_witness().map(|(a, b, c)| {
                    let lift = |x| self.from_components(&vec![x; exp]);
                    (lift(a), lift(b), lift(c))
                })
            };
        }
        for a in self.elements() {
            for b in self.elements() {
                for c in self.elements() {
                    if self.meet(a, self.join(b, c)) != self.join(self.meet(a, b), self.meet(a, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Finite distributive lattices are exactly the finite frames.
    pub fn is_frame(&self) -> bool {
        self.distributivity_witness().is_none()
    }

    /// Heyting implication `a ⇒ b`, the largest `c` with `c ∧ a <= b`.
    pub fn implies(&self, a: usize, b: usize) -> Option<usize> {
        let cands: Vec<usize> = self.elements().filter(|&c| self.leq(self.meet(c, a), b)).collect();
        let top = self.join_all(cands.iter().copied());
        cands.contains(&top).then_some(top)
    }

    pub fn is_subset_order_of(&self, other: &FiniteLattice) -> bool {
        self.size() == other.size() && self.elements().all(|a| self.elements().all(|b| self.leq(a, b) == other.leq(a, b)))
    }
}

impl fmt::Display for FiniteLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} elements)", self.name(), self.size())
    }
}

/// A monotone map between finite lattices, stored as a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneMap {
    pub src: FiniteLattice,
    pub dst: FiniteLattice,
    table: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(src: FiniteLattice, dst: FiniteLattice, table: Vec<usize>) -> Result<Self, LatticeError> {
        if table.len() != src.size() || table.iter().any(|&v| v >= dst.size()) {
            return Err(LatticeError::MapShape {
                expected: src.size(),
                got: table.len(),
            });
        }
        for a in src.elements() {
            for b in src.elements() {
                if src.leq(a, b) && !dst.leq(table[a], table[b]) {
                    return Err(LatticeError::NotMonotone(src.label(a), src.label(b)));
                }
            }
        }
        Ok(Self { src, dst, table })
    }

    /// Builds from a function, trusting monotonicity to the caller.
    pub fn from_fn(src: &FiniteLattice, dst: &FiniteLattice, f: impl Fn(usize) -> usize) -> Self {
        Self {
            src: src.clone(),
            dst: dst.clone(),
            table: src.elements().map(f).collect(),
        }
    }

    pub fn identity(l: &FiniteLattice) -> Self {
        Self::from_fn(l, l, |a| a)
    }

    pub fn apply(&self, a: usize) -> usize {
        self.table[a]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn is_monotone(&self) -> bool {
        self.src.elements().all(|a| {
            self.src
                .elements()
                .all(|b| !self.src.leq(a, b) || self.dst.leq(self.table[a], self.table[b]))
        })
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &MonotoneMap) -> MonotoneMap {
        assert_eq!(self.dst.size(), next.src.size(), "composing maps of mismatched lattices");
        MonotoneMap {
            src: self.src.clone(),
            dst: next.dst.clone(),
            table: self.table.iter().map(|&a| next.table[a]).collect(),
        }
    }

    /// First element where the tables differ.
    pub fn first_difference(&self, other: &MonotoneMap) -> Option<usize> {
        self.table.iter().zip(&other.table).position(|(a, b)| a != b)
    }

    pub fn leq_pointwise(&self, other: &MonotoneMap) -> bool {
        self.src.elements().all(|a| self.dst.leq(self.table[a], other.table[a]))
    }
}

/// `l ⊣ r`: `l(x) <= y` iff `x <= r(y)` for all pairs; returns a violating pair.
pub fn adjunction_violation(l: &MonotoneMap, r: &MonotoneMap) -> Option<(usize, usize)> {
    for x in l.src.elements() {
        for y in r.src.elements() {
            if l.dst.leq(l.apply(x), y) != l.src.leq(x, r.apply(y)) {
                return Some((x, y));
            }
        }
    }
    None
}

/// The left adjoint `x ↦ ⋀{y : x <= m(y)}`, if it is one.
pub fn left_adjoint(m: &MonotoneMap) -> Option<MonotoneMap> {
    let (l, mm) = (&m.src, &m.dst);
    let cand = MonotoneMap::from_fn(mm, l, |x| l.meet_all(l.elements().filter(|&y| mm.leq(x, m.apply(y)))));
    adjunction_violation(&cand, m).is_none().then_some(cand)
}

/// The right adjoint `x ↦ ⋁{y : m(y) <= x}`, if it is one.
pub fn right_adjoint(m: &MonotoneMap) -> Option<MonotoneMap> {
    let (l, mm) = (&m.src, &m.dst);
    let cand = MonotoneMap::from_fn(mm, l, |x| l.join_all(l.elements().filter(|&y| mm.leq(m.apply(y), x))));
    adjunction_violation(m, &cand).is_none().then_some(cand)
}

/// A pullback map with whichever adjoints exist.
#[derive(Clone, Debug)]
pub struct GaloisMap {
    pub pullback: MonotoneMap,
    pub left: Option<MonotoneMap>,
    pub right: Option<MonotoneMap>,
    pub right_of_right: Option<MonotoneMap>,
}

impl GaloisMap {
    pub fn new(pullback: MonotoneMap) -> Self {
        let left = left_adjoint(&pullback);
        let right = right_adjoint(&pullback);
        let right_of_right = right.as_ref().and_then(right_adjoint);
        Self {
            pullback,
            left,
            right,
            right_of_right,
        }
    }
}

/// Adjunction laws and triangle identities of every stored adjoint.
pub fn check_galois(g: &GaloisMap) -> VerificationReport {
    let mut rep = VerificationReport::new("galois map");
    let mut pairs: Vec<(&str, &MonotoneMap, &MonotoneMap)> = Vec::new();
    if let Some(l) = &g.left {
        pairs.push(("left", l, &g.pullback));
    }
    if let Some(r) = &g.right {
        pairs.push(("right", &g.pullback, r));
        if let Some(rr) = &g.right_of_right {
            pairs.push(("right-of-right", r, rr));
        }
    }
    for (name, l, r) in pairs {
        let mut law = CheckBuilder::new(format!("adjunction.{name}"), "hom-set correspondence of an adjunction");
        let v = adjunction_violation(l, r);
        law.observe(v.is_none(), || {
            let (x, y) = v.unwrap();
            Witness::new().with("x", l.src.label(x)).with("y", r.src.label(y))
        });
        rep.add(law);
        let mut tri = CheckBuilder::new(format!("triangle.{name}"), "triangle identities");
        let lrl = l.then(r).then(l);
        let rlr = r.then(l).then(r);
        tri.observe(lrl == *l, || Witness::new().with("identity", "l r l = l"));
        tri.observe(rlr == *r, || Witness::new().with("identity", "r l r = r"));
        tri.observe(MonotoneMap::identity(&l.src).leq_pointwise(&l.then(r)), || {
            Witness::new().with("identity", "unit id <= r l")
        });
        tri.observe(r.then(l).leq_pointwise(&MonotoneMap::identity(&r.src)), || {
            Witness::new().with("identity", "counit l r <= id")
        });
        rep.add(tri);
    }
    rep
}

/// A commuting square of monotone maps
///
/// ```text
///   C --top--> D
///   |          |
///  left      right
///   v          v
///   C' -bot--> D'
/// ```
#[derive(Clone, Debug)]
pub struct SquareData {
    pub top: MonotoneMap,
    pub left: MonotoneMap,
    pub right: MonotoneMap,
    pub bottom: MonotoneMap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdjointabilityFailure {
    NotCommuting { at: String },
    NoAdjoint { edge: &'static str },
    MateNotInvertible { at: String, lhs: String, rhs: String },
}

impl fmt::Display for AdjointabilityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotCommuting { at } => write!(f, "square does not commute at {at}"),
            Self::NoAdjoint { edge } => write!(f, "{edge} edge has no adjoint"),
            Self::MateNotInvertible { at, lhs, rhs } => write!(f, "mate differs at {at}: {lhs} vs {rhs}"),
        }
    }
}

impl SquareData {
    pub fn commutes(&self) -> Option<usize> {
        self.top.then(&self.right).first_difference(&self.left.then(&self.bottom))
    }

    /// The two sides of the mate: `(F'V, UF)` on the left, `(UH, H'V)` on the right.
    pub fn mate(&self, side: Side) -> Option<(MonotoneMap, MonotoneMap)> {
        match side {
            Side::Left => {
                let f = left_adjoint(&self.top)?;
                let f2 = left_adjoint(&self.bottom)?;
                Some((self.right.then(&f2), f.then(&self.left)))
            }
            Side::Right => {
                let h = right_adjoint(&self.top)?;
                let h2 = right_adjoint(&self.bottom)?;
                Some((h.then(&self.left), self.right.then(&h2)))
            }
        }
    }

    pub fn adjointable(&self, side: Side) -> Result<(), AdjointabilityFailure> {
        if let Some(x) = self.commutes() {
            return Err(AdjointabilityFailure::NotCommuting { at: self.top.src.label(x) });
        }
        let (f, f2) = match side {
            Side::Left => (left_adjoint(&self.top), left_adjoint(&self.bottom)),
            Side::Right => (right_adjoint(&self.top), right_adjoint(&self.bottom)),
        };
        if f.is_none() {
            return Err(AdjointabilityFailure::NoAdjoint { edge: "top" });
        }
        if f2.is_none() {
            return Err(AdjointabilityFailure::NoAdjoint { edge: "bottom" });
        }
        let (a, b) = self.mate(side).expect("adjoints exist");
        match a.first_difference(&b) {
            None => Ok(()),
            Some(x) => Err(AdjointabilityFailure::MateNotInvertible {
                at: a.src.label(x),
                lhs: a.dst.label(a.apply(x)),
                rhs: b.dst.label(b.apply(x)),
            }),
        }
    }

    /// Horizontal pasting: `self` on the left, `next` on the right.
    pub fn paste(&self, next: &SquareData) -> SquareData {
        SquareData {
            top: self.top.then(&next.top),
            left: self.left.clone(),
            right: next.right.clone(),
            bottom: self.bottom.then(&next.bottom),
        }
    }
}

pub fn check_adjointable(sq: &SquareData, side: Side) -> VerificationReport {
    let mut rep = VerificationReport::new("adjointable square");
    let mut b = CheckBuilder::new(
        match side {
            Side::Left => "square.left_adjointable",
            Side::Right => "square.right_adjointable",
        },
        "mate transformation is invertible",
    );
    if let Err(e) = sq.adjointable(side) {
        b.fail(Witness::new().with("failure", e));
    } else {
        b.observe(true, Witness::new);
    }
    rep.add(b);
    rep
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridAdjointError {
    #[error("direction {dir} edge at {vertex:?} has no adjoint")]
    NoAdjoint { dir: usize, vertex: Vec<usize> },
    #[error("square at {vertex:?} in directions ({fixed}, {adjointed}) is not adjointable: {reason}")]
    NotAdjointable {
        vertex: Vec<usize>,
        fixed: usize,
        adjointed: usize,
        reason: String,
    },
    #[error("direction {0} is already reversed")]
    AlreadyReversed(usize),
    #[error("direction {0} is not reversed")]
    NotReversed(usize),
    #[error("square at {vertex:?} in directions ({d1}, {d2}) does not commute")]
    NotCommuting { vertex: Vec<usize>, d1: usize, d2: usize },
}

/// A diagram of lattices on `[n]^k`; reversed directions point `v + e_d -> v`.
#[derive(Clone, Debug)]
pub struct LatticeGrid {
    pub k: usize,
    pub n: usize,
    pub lattices: Vec<FiniteLattice>,
    /// `maps[d][code(v)]` is the edge between `v` and `v + e_d`.
    pub maps: Vec<Vec<Option<MonotoneMap>>>,
    pub reversed: Vec<bool>,
}

impl LatticeGrid {
    pub fn code(&self, v: &[usize]) -> usize {
        v.iter().rev().fold(0, |acc, &x| acc * (self.n + 1) + x)
    }

    pub fn decode(&self, mut c: usize) -> Vec<usize> {
        (0..self.k)
            .map(|_| {
                let d = c % (self.n + 1);
                c /= self.n + 1;
                d
            })
            .collect()
    }

    pub fn map(&self, d: usize, v: &[usize]) -> &MonotoneMap {
        self.maps[d][self.code(v)].as_ref().expect("edge inside the grid")
    }

    fn unit_squares(&self) -> Vec<(Vec<usize>, usize, usize)> {
        let mut out = Vec::new();
        for c in 0..self.lattices.len() {
            let v = self.decode(c);
            for d1 in 0..self.k {
                for d2 in d1 + 1..self.k {
                    if v[d1] < self.n && v[d2] < self.n {
                        out.push((v.clone(), d1, d2));
                    }
                }
            }
        }
        out
    }

    /// The square at `v` spanned by `d_adj` (horizontal) and `d_fix` (vertical),
    /// oriented along the current edge directions.
    fn square(&self, v: &[usize], d_fix: usize, d_adj: usize) -> SquareData {
        let up = |w: &[usize], d: usize| {
            let mut u = w.to_vec();
            u[d] += 1;
            u
        };
        let va = up(v, d_adj);
        let vf = up(v, d_fix);
        SquareData {
            top: self.map(d_adj, v).clone(),
            left: self.map(d_fix, v).clone(),
            right: self.map(d_fix, &va).clone(),
            bottom: self.map(d_adj, &vf).clone(),
        }
    }

    /// Checks that every unit square commutes, whatever the edge directions.
    pub fn check_commutes(&self) -> Result<(), GridAdjointError> {
        for (v, d1, d2) in self.unit_squares() {
            let up = |w: &[usize], d: usize| {
                let mut u = w.to_vec();
                u[d] += 1;
                u
            };
            let (v1, v2) = (up(&v, d1), up(&v, d2));
            let m = |d: usize, w: &[usize]| self.map(d, w);
            let (lhs, rhs) = match (self.reversed[d1], self.reversed[d2]) {
                // v -> v1 -> v12 and v -> v2 -> v12
                (false, false) => (m(d1, &v).then(m(d2, &v1)), m(d2, &v).then(m(d1, &v2))),
                // v12 -> v1 -> v and v12 -> v2 -> v
                (true, true) => (m(d2, &v1).then(m(d1, &v)), m(d1, &v2).then(m(d2, &v))),
                // v2 -> v -> v1 and v2 -> v12 -> v1
                (false, true) => (m(d2, &v).then(m(d1, &v)), m(d1, &v2).then(m(d2, &v1))),
                // v1 -> v -> v2 and v1 -> v12 -> v2
                (true, false) => (m(d1, &v).then(m(d2, &v)), m(d2, &v1).then(m(d1, &v2))),
            };
            if lhs != rhs {
                return Err(GridAdjointError::NotCommuting { vertex: v, d1, d2 });
            }
        }
        Ok(())
    }
}

/// Replaces every edge in the directions `j` by its right adjoint.
pub fn partial_adjoint_grid(f: &LatticeGrid, j: &[usize]) -> Result<LatticeGrid, GridAdjointError> {
    for &d in j {
        if f.reversed[d] {
            return Err(GridAdjointError::AlreadyReversed(d));
        }
    }
    f.check_commutes()?;
    let mut out = f.clone();
    for &d in j {
        for c in 0..f.lattices.len() {
            if let Some(m) = &f.maps[d][c] {
                let r = right_adjoint(m).ok_or_else(|| GridAdjointError::NoAdjoint {
                    dir: d,
                    vertex: f.decode(c),
                })?;
                out.maps[d][c] = Some(r);
            }
        }
        out.reversed[d] = true;
    }
    for (v, d1, d2) in f.unit_squares() {
        let (in1, in2) = (j.contains(&d1), j.contains(&d2));
        if in1 == in2 {
            continue;
        }
        let (fix, adj) = if in1 { (d2, d1) } else { (d1, d2) };
        if f.reversed[fix] {
            continue;
        }
        if let Err(e) = f.square(&v, fix, adj).adjointable(Side::Right) {
            return Err(GridAdjointError::NotAdjointable {
                vertex: v,
                fixed: fix,
                adjointed: adj,
                reason: e.to_string(),
            });
        }
    }
    out.check_commutes()?;
    Ok(out)
}

/// Replaces every edge in the reversed directions `j` by its left adjoint.
pub fn partial_left_adjoint_grid(f: &LatticeGrid, j: &[usize]) -> Result<LatticeGrid, GridAdjointError> {
    let mut out = f.clone();
    for &d in j {
        if !f.reversed[d] {
            return Err(GridAdjointError::NotReversed(d));
        }
        for c in 0..f.lattices.len() {
            if let Some(m) = &f.maps[d][c] {
                let l = left_adjoint(m).ok_or_else(|| GridAdjointError::NoAdjoint {
                    dir: d,
                    vertex: f.decode(c),
                })?;
                out.maps[d][c] = Some(l);
            }
        }
        out.reversed[d] = false;
    }
    out.check_commutes()?;
    Ok(out)
}

/// Every monotone map between two lattices.
pub fn monotone_maps_between(src: &FiniteLattice, dst: &FiniteLattice) -> Vec<MonotoneMap> {
    let n = src.size();
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    fn go(
        i: usize,
        src: &FiniteLattice,
        dst: &FiniteLattice,
        cur: &mut Vec<usize>,
        out: &mut Vec<MonotoneMap>,
    ) {
        if i == cur.len() {
            out.push(MonotoneMap::from_fn(src, dst, |a| cur[a]));
            return;
        }
        for v in dst.elements() {
            if (0..i).all(|a| !src.leq(a, i) || dst.leq(cur[a], v)) && (0..i).all(|a| !src.leq(i, a) || dst.leq(v, cur[a])) {
                cur[i] = v;
                go(i + 1, src, dst, cur, out);
            }
        }
    }
    go(0, src, dst, &mut cur, &mut out);
    out
}

/// Adjunction laws, triangle identities and uniqueness of adjoints for every
/// monotone map `src -> dst`; uniqueness is tested against every monotone map back.
pub fn check_lattice_adjunctions(src: &FiniteLattice, dst: &FiniteLattice) -> VerificationReport {
    let maps = monotone_maps_between(src, dst);
    let back = monotone_maps_between(dst, src);
    let mut parts = Vec::new();
    let mut uniq = CheckBuilder::new("adjoint.uniqueness", "a monotone map has at most one left and one right adjoint");
    for m in &maps {
        parts.push(check_galois(&GaloisMap::new(m.clone())));
        let lefts = back.iter().filter(|l| adjunction_violation(l, m).is_none()).count();
        let rights = back.iter().filter(|r| adjunction_violation(m, r).is_none()).count();
        uniq.observe(lefts <= 1 && rights <= 1, || {
            Witness::new()
                .with("map", format!("{:?}", m.table()))
                .with("left_adjoints", lefts)
                .with("right_adjoints", rights)
        });
        let found = (left_adjoint(m).is_some(), right_adjoint(m).is_some());
        uniq.observe(found == (lefts == 1, rights == 1), || {
            Witness::new().with("map", format!("{:?}", m.table())).with("failure", "solver disagrees with search")
        });
    }
    let mut rep = VerificationReport::merged(format!("adjunctions {} -> {}", src.name(), dst.name()), parts);
    rep.add(uniq);
    rep
}
