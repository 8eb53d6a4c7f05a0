//! Lattice-valued coefficient systems over a category: `X ↦ D(X)`, `f ↦ f^*`,
//! with the adjoints `f_# ⊣ f^* ⊣ f_*` computed from the tables.

use crate::category::{window_morphisms, Category};
use crate::finset::{FinSet, Func, SetObj};
use crate::lattice::{left_adjoint, right_adjoint, FiniteLattice, MonotoneMap, Side, SquareData};
use crate::report::{CheckBuilder, VerificationReport, Witness};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("{map} has no {side} adjoint")]
    MissingAdjoint { map: String, side: &'static str },
    #[error("no product of {0} and {1}")]
    NoProduct(String, String),
    #[error("no pullback of {0} and {1}")]
    NoPullback(String, String),
}

/// A contravariant assignment of lattices and monotone maps.
pub trait CoefficientSystem<C: Category>: Send + Sync {
    fn name(&self) -> String;
    fn lattice(&self, x: &C::Obj) -> FiniteLattice;
    /// `f^*: D(target) -> D(source)`.
    fn pullback_map(&self, f: &C::Mor) -> MonotoneMap;

    /// `f_#`, the left adjoint of `f^*`.
    fn sharp(&self, f: &C::Mor) -> Option<MonotoneMap> {
        left_adjoint(&self.pullback_map(f))
    }

    /// `f_*`, the right adjoint of `f^*`.
    fn star(&self, f: &C::Mor) -> Option<MonotoneMap> {
        right_adjoint(&self.pullback_map(f))
    }
}

pub fn require_sharp<C: Category, S: CoefficientSystem<C> + ?Sized>(
    c: &C,
    sys: &S,
    f: &C::Mor,
) -> Result<MonotoneMap, ModelError> {
    sys.sharp(f).ok_or_else(|| ModelError::MissingAdjoint {
        map: c.mor_label(f),
        side: "left",
    })
}

pub fn require_star<C: Category, S: CoefficientSystem<C> + ?Sized>(
    c: &C,
    sys: &S,
    f: &C::Mor,
) -> Result<MonotoneMap, ModelError> {
    sys.star(f).ok_or_else(|| ModelError::MissingAdjoint {
        map: c.mor_label(f),
        side: "right",
    })
}

/// `D(X) = L^X` over finite sets, `f^*` by precomposition.
pub struct FrameModel {
    base: FiniteLattice,
    powers: Mutex<HashMap<usize, FiniteLattice>>,
    adjoints: Mutex<HashMap<(Func, bool), Option<MonotoneMap>>>,
}

impl FrameModel {
    pub fn new(base: FiniteLattice) -> Self {
        Self {
            base,
            powers: Mutex::new(HashMap::new()),
            adjoints: Mutex::new(HashMap::new()),
        }
    }

    pub fn base(&self) -> &FiniteLattice {
        &self.base
    }

    fn power(&self, n: usize) -> FiniteLattice {
        self.powers
            .lock()
            .expect("lattice cache")
            .entry(n)
            .or_insert_with(|| FiniteLattice::power(&self.base, n))
            .clone()
    }

    fn adjoint(&self, f: &Func, left: bool) -> Option<MonotoneMap> {
        if let Some(m) = self.adjoints.lock().expect("adjoint cache").get(&(f.clone(), left)) {
            return m.clone();
        }
        let p = self.pullback_of(f);
        let m = if left { left_adjoint(&p) } else { right_adjoint(&p) };
        self.adjoints
            .lock()
            .expect("adjoint cache")
            .insert((f.clone(), left), m.clone());
        m
    }

    fn pullback_of(&self, f: &Func) -> MonotoneMap {
        let (ly, lx) = (self.power(f.dst.size), self.power(f.src.size));
        MonotoneMap::from_fn(&ly, &lx, |e| {
            let vals: Vec<usize> = f.map.iter().map(|&y| ly.component(e, y)).collect();
            lx.from_components(&vals)
        })
    }
}

impl CoefficientSystem<FinSet> for FrameModel {
    fn name(&self) -> String {
        format!("{}^X", self.base.name())
    }

    fn lattice(&self, x: &SetObj) -> FiniteLattice {
        self.power(x.size)
    }

    fn pullback_map(&self, f: &Func) -> MonotoneMap {
        self.pullback_of(f)
    }

    fn sharp(&self, f: &Func) -> Option<MonotoneMap> {
        self.adjoint(f, true)
    }

    fn star(&self, f: &Func) -> Option<MonotoneMap> {
        self.adjoint(f, false)
    }
}

/// Strict functoriality and preservation of the top element.
pub fn check_system<C: Category, S: CoefficientSystem<C> + ?Sized>(c: &C, sys: &S) -> VerificationReport {
    let mut rep = VerificationReport::new(format!("coefficient system {}", sys.name()));
    let mors = window_morphisms(c);

    let mut ids = CheckBuilder::new("system.identities", "identities pull back to identities");
    for x in c.window() {
        let m = sys.pullback_map(&c.identity(&x));
        ids.observe(m == MonotoneMap::identity(&sys.lattice(&x)), || {
            Witness::new().with("object", c.obj_label(&x))
        });
    }
    rep.add(ids);

    let mut shape = CheckBuilder::new("system.shape", "pullback maps go between the assigned lattices");
    let mut top = CheckBuilder::new("system.unit", "pullback maps preserve the top element");
    for f in &mors {
        let m = sys.pullback_map(f);
        let ok = m.src == sys.lattice(&c.target(f)) && m.dst == sys.lattice(&c.source(f)) && m.is_monotone();
        shape.observe(ok, || Witness::new().with("f", c.mor_label(f)));
        top.observe(m.apply(m.src.top()) == m.dst.top(), || Witness::new().with("f", c.mor_label(f)));
    }
    rep.add(shape);
    rep.add(top);

    let mut comp = CheckBuilder::new("system.functoriality", "(g∘f)^* = f^*∘g^* on the nose");
    for f in &mors {
        for g in mors.iter().filter(|g| c.source(g) == c.target(f)) {
            let lhs = sys.pullback_map(&c.comp(g, f));
            let rhs = sys.pullback_map(g).then(&sys.pullback_map(f));
            comp.observe(lhs == rhs, || {
                Witness::new().with("g", c.mor_label(g)).with("f", c.mor_label(f))
            });
        }
    }
    rep.add(comp);
    rep
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    /// `f_#(E ⊗ f^*B) = f_#E ⊗ B`.
    Sharp,
    /// `f_*E ⊗ B = f_*(E ⊗ f^*B)`.
    Star,
}

impl Flavor {
    pub fn id(self) -> &'static str {
        match self {
            Flavor::Sharp => "projection.sharp",
            Flavor::Star => "projection.star",
        }
    }
}

/// First `(E, B)` where the projection formula built from `push` fails.
pub fn projection_failure(
    pull: &MonotoneMap,
    push: &MonotoneMap,
    flavor: Flavor,
) -> Option<(usize, usize, usize, usize)> {
    let (ly, lx) = (&pull.src, &pull.dst);
    let cands: Vec<(usize, usize)> = lx
        .elements()
        .flat_map(|e| ly.elements().map(move |b| (e, b)))
        .collect();
    cands.into_par_iter().find_first(|&(e, b)| {
        let (lhs, rhs) = formula_sides(pull, push, flavor, e, b);
        lhs != rhs
    })
    .map(|(e, b)| {
        let (lhs, rhs) = formula_sides(pull, push, flavor, e, b);
        (e, b, lhs, rhs)
    })
}

fn formula_sides(pull: &MonotoneMap, push: &MonotoneMap, flavor: Flavor, e: usize, b: usize) -> (usize, usize) {
    let (ly, lx) = (&pull.src, &pull.dst);
    let lhs = push.apply(lx.tensor(e, pull.apply(b)));
    let rhs = ly.tensor(push.apply(e), b);
    match flavor {
        Flavor::Sharp => (lhs, rhs),
        Flavor::Star => (rhs, lhs),
    }
}

pub fn check_projection_formula<C: Category, S: CoefficientSystem<C> + ?Sized>(
    c: &C,
    sys: &S,
    f: &C::Mor,
    flavor: Flavor,
) -> Result<VerificationReport, ModelError> {
    let push = match flavor {
        Flavor::Sharp => require_sharp(c, sys, f)?,
        Flavor::Star => require_star(c, sys, f)?,
    };
    let pull = sys.pullback_map(f);
    let mut rep = VerificationReport::new(format!("projection formula along {}", c.mor_label(f)));
    rep.add(projection_check(c, f, &pull, &push, flavor));
    Ok(rep)
}

pub(crate) fn projection_check<C: Category>(
    c: &C,
    f: &C::Mor,
    pull: &MonotoneMap,
    push: &MonotoneMap,
    flavor: Flavor,
) -> CheckBuilder {
    let statement = match flavor {
        Flavor::Sharp => "f_#(E ⊗ f^*B) = f_#E ⊗ B",
        Flavor::Star => "f_*E ⊗ B = f_*(E ⊗ f^*B)",
    };
    let mut b = CheckBuilder::new(flavor.id(), statement);
    match projection_failure(pull, push, flavor) {
        None => {
            b.observe(true, Witness::new);
        }
        Some((e, bb, lhs, rhs)) => b.fail(
            Witness::new()
                .with("f", c.mor_label(f))
                .with("E", pull.dst.label(e))
                .with("B", pull.src.label(bb))
                .with("lhs", pull.src.label(lhs))
                .with("rhs", pull.src.label(rhs)),
        ),
    }
    b
}

/// A chosen pullback square: `a` is the base change of `g` along `f`, `b` of `f` along `g`.
///
/// ```text
///   P --b--> Y
///   |a       |g
///   v        v
///   X --f--> Z
/// ```
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CartSquare<M> {
    pub f: M,
    pub g: M,
    pub a: M,
    pub b: M,
}

impl<M: Clone> CartSquare<M> {
    /// The same square read with `f` and `g` exchanged.
    pub fn transpose(&self) -> Self {
        Self {
            f: self.g.clone(),
            g: self.f.clone(),
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }
}

pub fn square_label<C: Category>(c: &C, sq: &CartSquare<C::Mor>) -> String {
    format!(
        "f={} g={} a={} b={}",
        c.mor_label(&sq.f),
        c.mor_label(&sq.g),
        c.mor_label(&sq.a),
        c.mor_label(&sq.b)
    )
}

/// `D` applied to a square: top `g^*`, left `f^*`, right `b^*`, bottom `a^*`.
/// Its left mate is `f^* g_# → a_# b^*`, its right mate `f^* g_* → a_* b^*`.
pub fn lattice_square<C: Category, S: CoefficientSystem<C> + ?Sized>(
    sys: &S,
    sq: &CartSquare<C::Mor>,
) -> SquareData {
    SquareData {
        top: sys.pullback_map(&sq.g),
        left: sys.pullback_map(&sq.f),
        right: sys.pullback_map(&sq.b),
        bottom: sys.pullback_map(&sq.a),
    }
}

/// The square `p'^*, j_#, j'_#, p^*` for `g = j` and `f = p`; right adjointable
/// exactly when `j_# p'_* = p_* j'_#`.
pub fn support_square<C: Category, S: CoefficientSystem<C> + ?Sized>(
    c: &C,
    sys: &S,
    sq: &CartSquare<C::Mor>,
) -> Result<SquareData, ModelError> {
    Ok(SquareData {
        top: sys.pullback_map(&sq.b),
        left: require_sharp(c, sys, &sq.g)?,
        right: require_sharp(c, sys, &sq.a)?,
        bottom: sys.pullback_map(&sq.f),
    })
}

/// Base change along `g` in the given direction; `Left` uses `g_#`, `Right` uses `g_*`.
pub fn base_change_failure<C: Category, S: CoefficientSystem<C> + ?Sized>(
    sys: &S,
    sq: &CartSquare<C::Mor>,
    side: Side,
) -> Option<String> {
    lattice_square(sys, sq).adjointable(side).err().map(|e| e.to_string())
}

/// `(f1 × f2)_*(M ⊠ N) = f1_*M ⊠ f2_*N` with `M ⊠ N = p1^*M ⊗ p2^*N`.
pub fn check_kunneth<C: Category, S: CoefficientSystem<C> + ?Sized>(
    c: &C,
    sys: &S,
    f1: &C::Mor,
    f2: &C::Mor,
) -> Result<VerificationReport, ModelError> {
    let (x1, x2, y1, y2) = (c.source(f1), c.source(f2), c.target(f1), c.target(f2));
    let no_product = |a: &C::Obj, b: &C::Obj| ModelError::NoProduct(c.obj_label(a), c.obj_label(b));
    let px = c.product(&x1, &x2).ok_or_else(|| no_product(&x1, &x2))?;
    let py = c.product(&y1, &y2).ok_or_else(|| no_product(&y1, &y2))?;
    let maps = [c.comp(f1, &px.legs[0]), c.comp(f2, &px.legs[1])];
    let f12 = c
        .factor(&py.apex, &py.legs, &px.apex, &maps)
        .ok_or_else(|| no_product(&y1, &y2))?;
    let push12 = require_star(c, sys, &f12)?;
    let (push1, push2) = (require_star(c, sys, f1)?, require_star(c, sys, f2)?);
    let boxed = |legs: &[C::Mor], m: usize, n: usize| -> usize {
        let (p1, p2) = (sys.pullback_map(&legs[0]), sys.pullback_map(&legs[1]));
        p1.dst.tensor(p1.apply(m), p2.apply(n))
    };
    let (l1, l2) = (sys.lattice(&x1), sys.lattice(&x2));
    let mut b = CheckBuilder::new("kunneth", "(f1×f2)_*(M ⊠ N) = f1_*M ⊠ f2_*N");
    let lxy = sys.lattice(&py.apex);
    for m in l1.elements() {
        for n in l2.elements() {
            let lhs = push12.apply(boxed(&px.legs, m, n));
            let rhs = boxed(&py.legs, push1.apply(m), push2.apply(n));
            b.observe(lhs == rhs, || {
                Witness::new()
                    .with("f1", c.mor_label(f1))
                    .with("f2", c.mor_label(f2))
                    .with("M", l1.label(m))
                    .with("N", l2.label(n))
                    .with("lhs", lxy.label(lhs))
                    .with("rhs", lxy.label(rhs))
            });
        }
    }
    let mut rep = VerificationReport::new(format!(
        "kunneth along {} and {}",
        c.mor_label(f1),
        c.mor_label(f2)
    ));
    rep.add(b);
    Ok(rep)
}

/// The pullback square over the cospan `f, g` from the category's oracle.
pub fn cart_square<C: Category>(c: &C, f: &C::Mor, g: &C::Mor) -> Result<CartSquare<C::Mor>, ModelError> {
    let sq = c
        .pullback(f, g)
        .ok_or_else(|| ModelError::NoPullback(c.mor_label(f), c.mor_label(g)))?;
    Ok(CartSquare {
        f: f.clone(),
        g: g.clone(),
        a: sq.legs[0].clone(),
        b: sq.legs[1].clone(),
    })
}


/// Pasting two cartesian squares side by side: when both are adjointable on
/// `side`, so is the pasted square.
pub fn check_mate_pasting<C: Category, S: CoefficientSystem<C> + ?Sized>(
    c: &C,
    sys: &S,
    side: Side,
) -> Result<CheckBuilder, ModelError> {
    let id = match side {
        Side::Left => "pasting.left",
        Side::Right => "pasting.right",
    };
    let mut b = CheckBuilder::new(id, "pasting adjointable squares gives an adjointable square");
    let mors = window_morphisms(c);
    for f in &mors {
        for g in mors.iter().filter(|g| c.target(g) == c.target(f)) {
            let first = cart_square(c, f, g)?;
            let y = c.target(&first.b);
            for h in mors.iter().filter(|h| c.target(h) == y) {
                let second = cart_square(c, &first.b, h)?;
                let (s1, s2) = (lattice_square(sys, &first), lattice_square(sys, &second));
                let pasted = s1.paste(&s2);
                if let Some(x) = pasted.commutes() {
                    b.fail(
                        Witness::new()
                            .with("first", square_label(c, &first))
                            .with("second", square_label(c, &second))
                            .with("not_commuting_at", pasted.top.src.label(x)),
                    );
                    continue;
                }
                if s1.adjointable(side).is_ok() && s2.adjointable(side).is_ok() {
                    let r = pasted.adjointable(side);
                    b.observe(r.is_ok(), || {
                        Witness::new()
                            .with("first", square_label(c, &first))
                            .with("second", square_label(c, &second))
                            .with("failure", r.unwrap_err())
                    });
                }
            }
        }
    }
    Ok(b)
}
