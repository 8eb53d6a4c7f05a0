//! Nagata setups and the exceptional pushforward `f_! = p_* ∘ j_#` along a
//! chosen compactification `f = p ∘ j`, with its verification suite.

use crate::category::{window_morphisms, Category, EdgeClass};
use crate::finset::{FinSet, SetObj};
use crate::grid::{enumerate_grid_simplices, GridError, GridMode};
use crate::lattice::{MonotoneMap, Side};
use crate::model::{
    cart_square, lattice_square, projection_check, projection_failure, require_sharp, require_star,
    square_label, support_square, CartSquare, CoefficientSystem, Flavor, ModelError,
};
use crate::report::{CheckBuilder, CheckRecord, VerificationReport, Witness};
use crate::setup::{check_geometric_setup, GeometricSetup};
use crate::span::{identity_span, span_classes, span_label, compose_spans, SpanOf};
use rayon::prelude::*;
use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};
use thiserror::Error;

type FactorObjects<C> =
    Arc<dyn Fn(&C, &<C as Category>::Obj, &<C as Category>::Obj) -> Vec<<C as Category>::Obj> + Send + Sync>;

/// A geometric setup `(C, E)` with classes `I` and `P`.
pub struct NagataSetup<C: Category> {
    pub setup: GeometricSetup<C>,
    pub i: EdgeClass<C>,
    pub p: EdgeClass<C>,
    factor_objects: FactorObjects<C>,
}

impl<C: Category> Clone for NagataSetup<C> {
    fn clone(&self) -> Self {
        Self {
            setup: self.setup.clone(),
            i: self.i.clone(),
            p: self.p.clone(),
            factor_objects: Arc::clone(&self.factor_objects),
        }
    }
}

impl<C: Category> NagataSetup<C> {
    /// Factorizations range over the window.
    pub fn new(setup: GeometricSetup<C>, i: EdgeClass<C>, p: EdgeClass<C>) -> Self {
        Self {
            setup,
            i,
            p,
            factor_objects: Arc::new(|c: &C, _: &C::Obj, _: &C::Obj| c.window()),
        }
    }

    /// Middle objects tried when factoring `x -> y`.
    pub fn with_factor_objects(
        mut self,
        f: impl Fn(&C, &C::Obj, &C::Obj) -> Vec<C::Obj> + Send + Sync + 'static,
    ) -> Self {
        self.factor_objects = Arc::new(f);
        self
    }

    pub fn cat(&self) -> &C {
        &self.setup.cat
    }

    pub fn in_e(&self, f: &C::Mor) -> bool {
        self.setup.in_e(f)
    }

    pub fn in_i(&self, f: &C::Mor) -> bool {
        self.i.contains(self.cat(), f)
    }

    pub fn in_p(&self, f: &C::Mor) -> bool {
        self.p.contains(self.cat(), f)
    }

    pub fn label(&self) -> String {
        format!("E={}, I={}, P={}", self.setup.e.name(), self.i.name(), self.p.name())
    }

    pub fn edges(&self) -> Vec<C::Mor> {
        window_morphisms(self.cat()).into_iter().filter(|f| self.in_e(f)).collect()
    }
}

impl NagataSetup<FinSet> {
    /// Middle objects of every size up to `|x| + |y|`, enough for the
    /// factorization through `x ⊔ (y minus the image)`.
    pub fn finset_middles(self) -> Self {
        self.with_factor_objects(|_: &FinSet, x: &SetObj, y: &SetObj| {
            (0..=x.size + y.size).map(SetObj::n).collect()
        })
    }
}

/// `f = p ∘ j` through `k`, with `j ∈ I` and `p ∈ P`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Compactification<O, M> {
    pub k: O,
    pub j: M,
    pub p: M,
}

pub type CompactificationOf<C> = Compactification<<C as Category>::Obj, <C as Category>::Mor>;

pub fn compactification_label<C: Category>(c: &C, k: &CompactificationOf<C>) -> String {
    format!("{} then {}", c.mor_label(&k.j), c.mor_label(&k.p))
}

/// Every factorization of `f` through the candidate middle objects, sorted;
/// the first one is the canonical choice.
pub fn factorizations<C: Category>(ns: &NagataSetup<C>, f: &C::Mor) -> Vec<CompactificationOf<C>> {
    let c = ns.cat();
    let (x, y) = (c.source(f), c.target(f));
    let mut out = Vec::new();
    for k in (ns.factor_objects)(c, &x, &y) {
        let ps: Vec<C::Mor> = c.hom(&k, &y).into_iter().filter(|p| ns.in_p(p)).collect();
        if ps.is_empty() {
            continue;
        }
        for j in c.hom(&x, &k).into_iter().filter(|j| ns.in_i(j)) {
            for p in &ps {
                if c.compose(p, &j).as_ref() == Some(f) {
                    out.push(Compactification {
                        k: k.clone(),
                        j: j.clone(),
                        p: p.clone(),
                    });
                }
            }
        }
    }
    out.sort();
    out
}

pub fn canonical_factorization<C: Category>(ns: &NagataSetup<C>, f: &C::Mor) -> Option<CompactificationOf<C>> {
    factorizations(ns, f).into_iter().next()
}

/// Axioms: (1) `I`, `P` are geometric setups, (2) every edge factors,
/// (3) cancellation in `I` and in `P`, (4) `I ∩ P` consists of monomorphisms.
pub fn check_nagata<C: Category>(ns: &NagataSetup<C>) -> VerificationReport {
    let c = ns.cat();
    let mut rep = VerificationReport::new(format!("nagata setup ({})", ns.label()));
    rep.absorb("nagata.1.I", check_geometric_setup(&ns.setup.with_class(ns.i.clone())));
    rep.absorb("nagata.1.P", check_geometric_setup(&ns.setup.with_class(ns.p.clone())));

    let mut fact = CheckBuilder::new("nagata.2", "every edge factors as a P-map after an I-map");
    let edges = ns.edges();
    let found: Vec<bool> = edges.par_iter().map(|f| canonical_factorization(ns, f).is_some()).collect();
    for (f, ok) in edges.iter().zip(found) {
        fact.observe(ok, || Witness::new().with("f", c.mor_label(f)));
    }
    rep.add(fact);

    let mors = window_morphisms(c);
    for (name, class) in [("I", &ns.i), ("P", &ns.p)] {
        let mut canc = CheckBuilder::new(
            format!("nagata.3.{name}"),
            format!("for g in {name}: f in {name} iff g∘f in {name}"),
        );
        for g in mors.iter().filter(|g| class.contains(c, g)) {
            for f in mors.iter().filter(|f| c.target(f) == c.source(g)) {
                let gf = c.comp(g, f);
                canc.observe(class.contains(c, f) == class.contains(c, &gf), || {
                    Witness::new()
                        .with("f", c.mor_label(f))
                        .with("g", c.mor_label(g))
                        .with("g∘f", c.mor_label(&gf))
                });
            }
        }
        rep.add(canc);
    }

    let mut trunc = CheckBuilder::new("nagata.4", "maps in both I and P are monomorphisms");
    for f in mors.iter().filter(|f| ns.in_i(f) && ns.in_p(f)) {
        trunc.observe(c.is_mono(f), || Witness::new().with("f", c.mor_label(f)));
    }
    rep.add(trunc);
    rep
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShriekError {
    #[error("nagata axiom {check} fails")]
    Nagata { check: String },
    #[error("hypothesis {check} fails")]
    Hypothesis { check: String },
    #[error("{0} is not an edge")]
    NotAnEdge(String),
    #[error("{0} has no factorization")]
    NoFactorization(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Anything that assigns `f_!` to edges; lets tests substitute broken tables.
pub trait LowerShriek<C: Category>: Send + Sync {
    fn shriek(&self, f: &C::Mor) -> Option<MonotoneMap>;
}

/// `f_! = p_* ∘ j_#` along the canonical factorization, computed on demand so
/// that edges outside the window (apexes of composites) are covered too.
pub struct ShriekAssignment<C: Category> {
    pub ns: NagataSetup<C>,
    pub sys: Arc<dyn CoefficientSystem<C>>,
    cache: Mutex<HashMap<C::Mor, Option<(CompactificationOf<C>, MonotoneMap)>>>,
}

impl<C: Category> ShriekAssignment<C> {
    pub fn entry(&self, f: &C::Mor) -> Result<(CompactificationOf<C>, MonotoneMap), ShriekError> {
        let c = self.ns.cat();
        if let Some(v) = self.cache.lock().expect("shriek cache").get(f) {
            return v.clone().ok_or_else(|| ShriekError::NoFactorization(c.mor_label(f)));
        }
        if !self.ns.in_e(f) {
            return Err(ShriekError::NotAnEdge(c.mor_label(f)));
        }
        let v = match canonical_factorization(&self.ns, f) {
            None => None,
            Some(k) => {
                let js = require_sharp(c, &*self.sys, &k.j)?;
                let ps = require_star(c, &*self.sys, &k.p)?;
                let m = js.then(&ps);
                Some((k, m))
            }
        };
        self.cache.lock().expect("shriek cache").insert(f.clone(), v.clone());
        v.ok_or_else(|| ShriekError::NoFactorization(c.mor_label(f)))
    }

    /// `f_!` for every edge of the window, in window order.
    pub fn table(&self) -> Result<Vec<(C::Mor, CompactificationOf<C>, MonotoneMap)>, ShriekError> {
        self.ns
            .edges()
            .into_iter()
            .map(|f| self.entry(&f).map(|(k, m)| (f, k, m)))
            .collect()
    }
}

impl<C: Category> LowerShriek<C> for ShriekAssignment<C> {
    fn shriek(&self, f: &C::Mor) -> Option<MonotoneMap> {
        self.entry(f).ok().map(|(_, m)| m)
    }
}

/// Overrides selected `f_!` of another assignment.
pub struct PatchedShriek<'a, C: Category> {
    inner: &'a dyn LowerShriek<C>,
    patches: HashMap<C::Mor, MonotoneMap>,
}

impl<'a, C: Category> PatchedShriek<'a, C> {
    pub fn new(inner: &'a dyn LowerShriek<C>) -> Self {
        Self {
            inner,
            patches: HashMap::new(),
        }
    }

    pub fn replace(mut self, f: C::Mor, m: MonotoneMap) -> Self {
        self.patches.insert(f, m);
        self
    }

    /// Changes one table entry of `f_!`.
    pub fn set_entry(self, f: C::Mor, at: usize, value: usize) -> Self {
        let base = self.inner.shriek(&f).expect("patched edge has a pushforward");
        let table: Vec<usize> = base
            .table()
            .iter()
            .enumerate()
            .map(|(i, &v)| if i == at { value } else { v })
            .collect();
        let m = MonotoneMap::from_fn(&base.src, &base.dst, |i| table[i]);
        self.replace(f, m)
    }
}

impl<C: Category> LowerShriek<C> for PatchedShriek<'_, C> {
    fn shriek(&self, f: &C::Mor) -> Option<MonotoneMap> {
        self.patches.get(f).cloned().or_else(|| self.inner.shriek(f))
    }
}

pub fn build_shriek_unchecked<C: Category>(
    ns: &NagataSetup<C>,
    sys: Arc<dyn CoefficientSystem<C>>,
) -> ShriekAssignment<C> {
    ShriekAssignment {
        ns: ns.clone(),
        sys,
        cache: Mutex::new(HashMap::new()),
    }
}

/// Builds `f_!` after the axioms and hypotheses have been verified.
pub fn build_shriek<C: Category>(
    ns: &NagataSetup<C>,
    sys: Arc<dyn CoefficientSystem<C>>,
) -> Result<ShriekAssignment<C>, ShriekError> {
    if let Some(f) = check_nagata(ns).first_failure() {
        return Err(ShriekError::Nagata { check: f.id.clone() });
    }
    if let Some(f) = verify_hypotheses(ns, &*sys)?.first_failure() {
        return Err(ShriekError::Hypothesis { check: f.id.clone() });
    }
    let sh = build_shriek_unchecked(ns, sys);
    sh.table()?;
    Ok(sh)
}

/// Cartesian squares read off the canonical `[1]^k` grids whose edges lie in
/// `classes`; for three classes both faces transverse to the last direction are used.
pub fn grid_squares<C: Category>(
    c: &C,
    classes: &[EdgeClass<C>],
) -> Result<Vec<CartSquare<C::Mor>>, GridError> {
    let mut out = BTreeSet::new();
    for g in enumerate_grid_simplices(c, classes, 1, GridMode::Canonical)? {
        let faces: Vec<Vec<usize>> = if g.k == 2 { vec![vec![]] } else { vec![vec![0], vec![1]] };
        for z in faces {
            let at = |a: usize, b: usize| {
                let mut v = vec![a, b];
                v.extend(&z);
                v
            };
            out.insert(CartSquare {
                g: g.edge(0, &at(0, 1)).clone(),
                f: g.edge(1, &at(1, 0)).clone(),
                a: g.edge(0, &at(0, 0)).clone(),
                b: g.edge(1, &at(0, 0)).clone(),
            });
        }
    }
    Ok(out.into_iter().collect())
}

/// Projection formulas, base change for `I` and `P`, and the support property.
pub fn verify_hypotheses<C: Category, S: CoefficientSystem<C> + ?Sized>(
    ns: &NagataSetup<C>,
    sys: &S,
) -> Result<VerificationReport, ShriekError> {
    let c = ns.cat();
    let mut rep = VerificationReport::new(format!("hypotheses ({}; {})", ns.label(), sys.name()));
    let mors = window_morphisms(c);

    let mut adj_i = CheckBuilder::new("hyp.adjoint.I", "every I-map has f_#");
    let mut adj_p = CheckBuilder::new("hyp.adjoint.P", "every P-map has f_*");
    let mut proj_i = CheckBuilder::new("hyp.projection.I", "f_#(E ⊗ f^*B) = f_#E ⊗ B for f in I");
    let mut proj_p = CheckBuilder::new("hyp.projection.P", "f_*E ⊗ B = f_*(E ⊗ f^*B) for f in P");
    for f in &mors {
        let pull = sys.pullback_map(f);
        for (inside, adj, proj, flavor) in [
            (ns.in_i(f), &mut adj_i, &mut proj_i, Flavor::Sharp),
            (ns.in_p(f), &mut adj_p, &mut proj_p, Flavor::Star),
        ] {
            if !inside {
                continue;
            }
            let push = match flavor {
                Flavor::Sharp => sys.sharp(f),
                Flavor::Star => sys.star(f),
            };
            let Some(push) = push else {
                adj.fail(Witness::new().with("f", c.mor_label(f)));
                continue;
            };
            adj.observe(true, Witness::new);
            match projection_failure(&pull, &push, flavor) {
                None => {
                    proj.observe(true, Witness::new);
                }
                Some((e, b, lhs, rhs)) => proj.fail(
                    Witness::new()
                        .with("f", c.mor_label(f))
                        .with("E", pull.dst.label(e))
                        .with("B", pull.src.label(b))
                        .with("lhs", pull.src.label(lhs))
                        .with("rhs", pull.src.label(rhs)),
                ),
            }
        }
    }
    rep.add(adj_i);
    rep.add(adj_p);
    rep.add(proj_i);
    rep.add(proj_p);

    let all = EdgeClass::<C>::all();
    for (id, class, side, statement) in [
        ("hyp.base_change.I", &ns.i, Side::Left, "squares along I-maps are left adjointable"),
        ("hyp.base_change.P", &ns.p, Side::Right, "squares along P-maps are right adjointable"),
    ] {
        let mut b = CheckBuilder::new(id, statement);
        for sq in grid_squares(c, &[class.clone(), all.clone()])? {
            let r = lattice_square(sys, &sq).adjointable(side);
            b.observe(r.is_ok(), || {
                Witness::new()
                    .with("square", square_label(c, &sq))
                    .with("failure", r.unwrap_err())
            });
        }
        rep.add(b);
    }

    let mut sup = CheckBuilder::new("hyp.support", "j_# p'_* = p_* j'_# on squares of an I-map and a P-map");
    for sq in grid_squares(c, &[ns.i.clone(), ns.p.clone(), EdgeClass::isos()])? {
        match support_square(c, sys, &sq) {
            Err(e) => sup.fail(Witness::new().with("square", square_label(c, &sq)).with("failure", e)),
            Ok(s) => {
                let r = s.adjointable(Side::Right);
                sup.observe(r.is_ok(), || {
                    Witness::new()
                        .with("square", square_label(c, &sq))
                        .with("failure", r.unwrap_err())
                });
            }
        }
    }
    rep.add(sup);
    Ok(rep)
}

/// `p_* ∘ j_#` agrees with the canonical `f_!` for every factorization of `f`.
pub fn check_independence<C: Category, S: CoefficientSystem<C> + ?Sized>(
    ns: &NagataSetup<C>,
    sys: &S,
    f: &C::Mor,
) -> VerificationReport {
    let c = ns.cat();
    let mut rep = VerificationReport::new(format!("independence of factorization for {}", c.mor_label(f)));
    rep.add(independence_check(ns, sys, &[f.clone()]));
    rep
}

fn independence_check<C: Category, S: CoefficientSystem<C> + ?Sized>(
    ns: &NagataSetup<C>,
    sys: &S,
    edges: &[C::Mor],
) -> CheckBuilder {
    let c = ns.cat();
    let mut b = CheckBuilder::new("shriek.independence", "p_* j_# does not depend on the factorization");
    for f in edges {
        let ks = factorizations(ns, f);
        let Some(canon) = ks.first() else {
            b.fail(Witness::new().with("f", c.mor_label(f)).with("failure", "no factorization"));
            continue;
        };
        let eval = |k: &CompactificationOf<C>| -> Option<MonotoneMap> {
            Some(sys.sharp(&k.j)?.then(&sys.star(&k.p)?))
        };
        let Some(base) = eval(canon) else {
            b.fail(Witness::new().with("f", c.mor_label(f)).with("failure", "missing adjoint"));
            continue;
        };
        for k in &ks[1..] {
            match eval(k) {
                None => b.fail(
                    Witness::new()
                        .with("f", c.mor_label(f))
                        .with("factorization", compactification_label(c, k))
                        .with("failure", "missing adjoint"),
                ),
                Some(m) => {
                    let d = base.first_difference(&m);
                    b.observe(d.is_none(), || {
                        let at = d.unwrap();
                        Witness::new()
                            .with("f", c.mor_label(f))
                            .with("canonical", compactification_label(c, canon))
                            .with("factorization", compactification_label(c, k))
                            .with("element", base.src.label(at))
                            .with("canonical_value", base.dst.label(base.apply(at)))
                            .with("other_value", m.dst.label(m.apply(at)))
                    });
                }
            }
        }
    }
    b
}

/// `f ∈ I ⇒ f_! = f_#` and `f ∈ P ⇒ f_! = f_*`.
pub fn check_shriek_classes<C: Category, S: CoefficientSystem<C> + ?Sized>(
    ns: &NagataSetup<C>,
    sys: &S,
    sh: &dyn LowerShriek<C>,
) -> CheckBuilder {
    let c = ns.cat();
    let mut b = CheckBuilder::new("shriek.classes", "f_! is f_# on I and f_* on P");
    for f in ns.edges() {
        let Some(m) = sh.shriek(&f) else {
            b.fail(Witness::new().with("f", c.mor_label(&f)).with("failure", "no f_!"));
            continue;
        };
        if ns.in_i(&f) {
            b.observe(sys.sharp(&f).as_ref() == Some(&m), || {
                Witness::new().with("f", c.mor_label(&f)).with("expected", "f_#")
            });
        }
        if ns.in_p(&f) {
            b.observe(sys.star(&f).as_ref() == Some(&m), || {
                Witness::new().with("f", c.mor_label(&f)).with("expected", "f_*")
            });
        }
    }
    b
}

/// `(g∘f)_! = g_! ∘ f_!` for composable edges.
pub fn check_shriek_functoriality<C: Category>(ns: &NagataSetup<C>, sh: &dyn LowerShriek<C>) -> CheckBuilder {
    let c = ns.cat();
    let edges = ns.edges();
    let mut b = CheckBuilder::new("shriek.functoriality", "(g∘f)_! = g_!∘f_!");
    for f in &edges {
        for g in edges.iter().filter(|g| c.source(g) == c.target(f)) {
            let gf = c.comp(g, f);
            let ok = match (sh.shriek(f), sh.shriek(g), sh.shriek(&gf)) {
                (Some(a), Some(b), Some(h)) => a.then(&b) == h,
                _ => false,
            };
            b.observe(ok, || Witness::new().with("f", c.mor_label(f)).with("g", c.mor_label(g)));
        }
    }
    b
}

/// `f^* g_! = a_! b^*` for every pullback of an edge `g` along any `f`.
pub fn check_base_change_shriek<C: Category, S: CoefficientSystem<C> + ?Sized>(
    ns: &NagataSetup<C>,
    sys: &S,
    sh: &dyn LowerShriek<C>,
) -> Result<CheckBuilder, ShriekError> {
    let c = ns.cat();
    let mut b = CheckBuilder::new("shriek.base_change", "f^* g_! = a_! b^* across pullback squares");
    let mors = window_morphisms(c);
    for g in ns.edges() {
        for f in mors.iter().filter(|f| c.target(f) == c.target(&g)) {
            let sq = cart_square(c, f, &g)?;
            let (gs, as_) = (sh.shriek(&sq.g), sh.shriek(&sq.a));
            let (Some(gs), Some(as_)) = (gs, as_) else {
                b.fail(Witness::new().with("square", square_label(c, &sq)).with("failure", "no f_!"));
                continue;
            };
            let lhs = gs.then(&sys.pullback_map(&sq.f));
            let rhs = sys.pullback_map(&sq.b).then(&as_);
            let d = lhs.first_difference(&rhs);
            b.observe(d.is_none(), || {
                let at = d.unwrap();
                Witness::new()
                    .with("square", square_label(c, &sq))
                    .with("element", lhs.src.label(at))
                    .with("lhs", lhs.dst.label(lhs.apply(at)))
                    .with("rhs", rhs.dst.label(rhs.apply(at)))
            });
        }
    }
    Ok(b)
}

/// `f_!(A ⊗ f^*B) = f_!A ⊗ B` for every edge.
pub fn check_shriek_projection<C: Category, S: CoefficientSystem<C> + ?Sized>(
    ns: &NagataSetup<C>,
    sys: &S,
    sh: &dyn LowerShriek<C>,
) -> CheckBuilder {
    let c = ns.cat();
    let mut b = CheckBuilder::new("shriek.projection", "f_!(A ⊗ f^*B) = f_!A ⊗ B");
    for f in ns.edges() {
        let Some(push) = sh.shriek(&f) else {
            b.fail(Witness::new().with("f", c.mor_label(&f)).with("failure", "no f_!"));
            continue;
        };
        let one = projection_check(c, &f, &sys.pullback_map(&f), &push, Flavor::Sharp).finish();
        b.observe(one.passed(), || one.witness.clone().unwrap_or_default());
    }
    b
}

/// `X ↦ D(X)`, `(g, f) ↦ f_! ∘ g^*` on spans with apex among `apexes`, checked
/// to be a functor on span classes.
pub fn assemble_formalism<C: Category, S: CoefficientSystem<C> + ?Sized>(
    ns: &NagataSetup<C>,
    sys: &S,
    sh: &dyn LowerShriek<C>,
    apexes: &[C::Obj],
) -> VerificationReport {
    let c = ns.cat();
    let s = &ns.setup;
    let mut rep = VerificationReport::new(format!("formalism ({}; {})", ns.label(), sys.name()));
    let of_span = |sp: &SpanOf<C>| -> Option<MonotoneMap> { Some(sys.pullback_map(&sp.left).then(&sh.shriek(&sp.right)?)) };
    let w = c.window();

    let mut reps = CheckBuilder::new("formalism.representatives", "isomorphic spans give equal maps");
    let mut classes: HashMap<(usize, usize), Vec<SpanOf<C>>> = HashMap::new();
    for (i, x) in w.iter().enumerate() {
        for (j, y) in w.iter().enumerate() {
            let ks = span_classes(s, x, y, apexes);
            for k in &ks {
                let base = of_span(&k.rep);
                for m in &k.members[1..] {
                    reps.observe(base.is_some() && of_span(m) == base, || {
                        Witness::new().with("rep", span_label(c, &k.rep)).with("member", span_label(c, m))
                    });
                }
            }
            classes.insert((i, j), ks.into_iter().map(|k| k.rep).collect());
        }
    }
    rep.add(reps);

    let mut units = CheckBuilder::new("formalism.units", "identity spans give identity maps");
    for x in &w {
        let m = of_span(&identity_span(c, x));
        units.observe(m == Some(MonotoneMap::identity(&sys.lattice(x))), || {
            Witness::new().with("object", c.obj_label(x))
        });
    }
    rep.add(units);

    let n = w.len();
    let triples: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
        .collect();
    let outcomes: Vec<(u64, Option<Witness>)> = triples
        .par_iter()
        .map(|&(i, j, k)| {
            let mut count = 0;
            let mut first = None;
            for a in &classes[&(i, j)] {
                for b in &classes[&(j, k)] {
                    count += 1;
                    let ok = match (compose_spans(s, a, b), of_span(a), of_span(b)) {
                        (Ok(ab), Some(fa), Some(fb)) => of_span(&ab) == Some(fa.then(&fb)),
                        _ => false,
                    };
                    if !ok && first.is_none() {
                        first = Some(Witness::new().with("first", span_label(c, a)).with("then", span_label(c, b)));
                    }
                }
            }
            (count, first)
        })
        .collect();
    let mut comp = CheckBuilder::new("formalism.composition", "composite spans give composite maps");
    for (count, first) in outcomes {
        for _ in 1..count {
            comp.observe(true, Witness::new);
        }
        if count > 0 {
            match first {
                Some(wt) => comp.fail(wt),
                None => {
                    comp.observe(true, Witness::new);
                }
            }
        }
    }
    rep.add(comp);

    let mut pa = CheckBuilder::new("formalism.pi_all", "restriction to C^op is the pullback system");
    let mut pe = CheckBuilder::new("formalism.pi_e", "restriction to edges is f_!");
    for f in window_morphisms(c) {
        let x = c.source(&f);
        let back = crate::span::Span::new(x.clone(), f.clone(), c.identity(&x));
        pa.observe(of_span(&back) == Some(sys.pullback_map(&f)), || {
            Witness::new().with("f", c.mor_label(&f))
        });
        if ns.in_e(&f) {
            let fwd = crate::span::Span::new(x.clone(), c.identity(&x), f.clone());
            pe.observe(of_span(&fwd).is_some() && of_span(&fwd) == sh.shriek(&f), || {
                Witness::new().with("f", c.mor_label(&f))
            });
        }
    }
    rep.add(pa);
    rep.add(pe);
    rep
}

/// The whole chain: axioms, hypotheses, construction and its checks. Later
/// layers are skipped once an earlier one fails.
pub fn run_theorem<C: Category>(
    ns: &NagataSetup<C>,
    sys: Arc<dyn CoefficientSystem<C>>,
    apexes: &[C::Obj],
) -> VerificationReport {
    let mut rep = VerificationReport::new(format!("exceptional pushforward ({}; {})", ns.label(), sys.name()));
    let nag = check_nagata(ns);
    let nag_ok = nag.passed();
    rep.absorb("axioms", nag);
    let hyp = match verify_hypotheses(ns, &*sys) {
        Ok(h) => h,
        Err(e) => {
            let mut b = CheckBuilder::new("hyp.squares", "hypothesis squares can be enumerated");
            b.fail(Witness::new().with("error", e));
            let mut r = VerificationReport::new("hypotheses");
            r.add(b);
            r
        }
    };
    let hyp_ok = hyp.passed();
    if nag_ok {
        rep.absorb("hypotheses", hyp);
    } else {
        for c in hyp.checks {
            rep.push(CheckRecord::skipped(format!("hypotheses.{}", c.id), c.statement, "axioms fail"));
        }
    }
    let later = [
        ("construction.independence", "p_* j_# does not depend on the factorization"),
        ("construction.classes", "f_! is f_# on I and f_* on P"),
        ("construction.functoriality", "(g∘f)_! = g_!∘f_!"),
        ("construction.base_change", "f^* g_! = a_! b^* across pullback squares"),
        ("construction.projection", "f_!(A ⊗ f^*B) = f_!A ⊗ B"),
        ("formalism", "spans act functorially"),
    ];
    if !(nag_ok && hyp_ok) {
        let why = if nag_ok { "hypotheses fail" } else { "axioms fail" };
        for (id, st) in later {
            rep.push(CheckRecord::skipped(id, st, why));
        }
        return rep;
    }
    let sh = build_shriek_unchecked(ns, Arc::clone(&sys));
    let mut cons = VerificationReport::new("construction");
    cons.add(independence_check(ns, &*sys, &ns.edges()));
    cons.add(check_shriek_classes(ns, &*sys, &sh));
    cons.add(check_shriek_functoriality(ns, &sh));
    match check_base_change_shriek(ns, &*sys, &sh) {
        Ok(b) => cons.add(b),
        Err(e) => {
            let mut b = CheckBuilder::new("shriek.base_change", "f^* g_! = a_! b^* across pullback squares");
            b.fail(Witness::new().with("error", e));
            cons.add(b);
        }
    }
    cons.add(check_shriek_projection(ns, &*sys, &sh));
    for mut c in cons.checks {
        c.id = c.id.replacen("shriek.", "construction.", 1);
        rep.push(c);
    }
    for c in assemble_formalism(ns, &*sys, &sh, apexes).checks {
        rep.push(c);
    }
    rep
}

/// Outcome of trying one pair of classes as `(I, P)`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SearchHit {
    pub i: String,
    pub p: String,
    pub axioms: bool,
    pub hypotheses: bool,
    /// `I ≠ all`, `P ≠ isos` and `I ∩ P ≠ isos` over the window.
    pub mixed: bool,
}

/// Tries every pair of candidate classes against the axioms and hypotheses.
pub fn search_nagata<C: Category, S: CoefficientSystem<C> + ?Sized>(
    setup: &GeometricSetup<C>,
    candidates: &[EdgeClass<C>],
    sys: &S,
    middles: impl Fn(NagataSetup<C>) -> NagataSetup<C>,
) -> Vec<SearchHit> {
    let c = &*setup.cat;
    let mors = window_morphisms(c);
    let same = |a: &dyn Fn(&C::Mor) -> bool, b: &dyn Fn(&C::Mor) -> bool| mors.iter().all(|f| a(f) == b(f));
    let mut out = Vec::new();
    for i in candidates {
        for p in candidates {
            let ns = middles(NagataSetup::new(setup.clone(), i.clone(), p.clone()));
            let axioms = check_nagata(&ns).passed();
            let hypotheses = axioms && verify_hypotheses(&ns, sys).map(|r| r.passed()).unwrap_or(false);
            let i_all = same(&|f| i.contains(c, f), &|_| true);
            let p_iso = same(&|f| p.contains(c, f), &|f| c.is_iso(f));
            let ip_iso = same(&|f| i.contains(c, f) && p.contains(c, f), &|f| c.is_iso(f));
            out.push(SearchHit {
                i: i.name().to_string(),
                p: p.name().to_string(),
                axioms,
                hypotheses,
                mixed: !i_all && !p_iso && !ip_iso,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::{self, Func};
    use crate::lattice::{FiniteLattice, Tensor};
    use crate::model::FrameModel;
    use crate::span::finset_apexes;

    fn ns(i: EdgeClass<FinSet>, p: EdgeClass<FinSet>) -> NagataSetup<FinSet> {
        let s = GeometricSetup::new(Arc::new(FinSet::upto(2)), finset::all_maps());
        NagataSetup::new(s, i, p).finset_middles()
    }

    fn model(len: usize, tensor: Tensor) -> Arc<dyn CoefficientSystem<FinSet>> {
        Arc::new(FrameModel::new(FiniteLattice::chain(len).with_tensor(tensor).unwrap()))
    }

    // fiberwise join or meet, written out directly
    fn fiberwise(l: &FiniteLattice, f: &Func, join: bool) -> Vec<usize> {
        let lx = FiniteLattice::power(l, f.src.size);
        let ly = FiniteLattice::power(l, f.dst.size);
        lx.elements()
            .map(|e| {
                let vals: Vec<usize> = (0..f.dst.size)
                    .map(|y| {
                        let fib = f.fiber(y).into_iter().map(|x| lx.component(e, x));
                        if join { l.join_all(fib) } else { l.meet_all(fib) }
                    })
                    .collect();
                ly.from_components(&vals)
            })
            .collect()
    }

    #[test]
    fn axioms_for_the_three_instances() {
        assert!(check_nagata(&ns(finset::all_maps(), finset::bijective())).fully_passed());
        assert!(check_nagata(&ns(finset::bijective(), finset::all_maps())).fully_passed());
        let rep = check_nagata(&ns(finset::injective(), finset::surjective()));
        assert_eq!(rep.failed_ids(), vec!["nagata.3.P"]);
        let w = rep.check("nagata.3.P").unwrap().witness.clone().unwrap();
        assert_eq!(w.get("f"), Some("1->2[0]"));
        assert_eq!(w.get("g"), Some("2->1[0,0]"));
    }

    #[test]
    fn image_factorization_is_canonical() {
        let n = ns(finset::injective(), finset::surjective());
        let f = Func::of(1, 2, &[0]);
        let k = canonical_factorization(&n, &f).unwrap();
        assert_eq!(k.k, SetObj::n(2));
        assert!(factorizations(&n, &f).iter().any(|k| k.k.size == 3));
    }

    #[test]
    fn shriek_is_fiberwise_join_or_meet() {
        for (i, p, tensor, join) in [
            (finset::all_maps(), finset::bijective(), Tensor::Meet, true),
            (finset::bijective(), finset::all_maps(), Tensor::Join, false),
        ] {
            let n = ns(i, p);
            let sys = model(2, tensor);
            let sh = build_shriek(&n, Arc::clone(&sys)).unwrap();
            for (f, _, m) in sh.table().unwrap() {
                assert_eq!(m.table(), fiberwise(&FiniteLattice::chain(2), &f, join).as_slice());
            }
        }
    }

    #[test]
    fn positive_pipeline_passes() {
        let n = ns(finset::all_maps(), finset::bijective());
        let rep = run_theorem(&n, model(2, Tensor::Meet), &finset_apexes(2));
        assert!(rep.fully_passed(), "{}", rep.to_text());
    }

    #[test]
    fn support_failure_for_injections_and_all() {
        let n = ns(finset::injective(), finset::all_maps());
        let rep = verify_hypotheses(&n, &*model(2, Tensor::Meet)).unwrap();
        let w = rep.check("hyp.support").unwrap().witness.clone().unwrap();
        assert!(w.get("failure").unwrap().contains("vs"));
    }

    #[test]
    fn padded_factorization_disagrees() {
        let n = ns(finset::injective(), finset::surjective());
        let sys = model(2, Tensor::Meet);
        let rep = check_independence(&n, &*sys, &Func::of(1, 2, &[0]));
        let w = rep.check("shriek.independence").unwrap().witness.clone().unwrap();
        assert_eq!(w.get("element"), Some("(1)"));
        assert_eq!(w.get("canonical_value"), Some("(1,0)"));
        assert_eq!(w.get("other_value"), Some("(0,0)"));
    }

    #[test]
    fn broken_entry_is_located() {
        let n = ns(finset::all_maps(), finset::bijective());
        let sys = model(2, Tensor::Meet);
        let sh = build_shriek(&n, Arc::clone(&sys)).unwrap();
        let fold = Func::of(2, 1, &[0, 0]);
        let bad = PatchedShriek::new(&sh).set_entry(fold.clone(), 1, 0);
        let rep = assemble_formalism(&n, &*sys, &bad, &finset_apexes(2));
        assert!(!rep.passed());
        let bc = check_base_change_shriek(&n, &*sys, &bad).unwrap().finish();
        assert!(!bc.passed());
        // f_! replaced by f_* in the join model
        let star = sys.star(&fold).unwrap();
        let swapped = PatchedShriek::new(&sh).replace(fold, star);
        assert!(!check_base_change_shriek(&n, &*sys, &swapped).unwrap().finish().passed());
    }
}
