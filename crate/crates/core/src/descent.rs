//! Čech nerves of atlases, nice and exceptional pairs, extension of a
//! coefficient system by descent (limits) and of `f_!` by codescent
//! (colimits), and the premises of the localization criterion.

use crate::category::{window_morphisms, Category, EdgeClass};
use crate::fincat::{FinCategory, FunctorData, MorId, ObjId};
use crate::finset::{self, FinSet, Func, SetObj};
use crate::lattice::{FiniteLattice, LatticeError, MonotoneMap, Tensor};
use crate::model::{check_system, CoefficientSystem};
use crate::report::{CheckBuilder, VerificationReport, Witness};
use crate::setup::{check_geometric_setup, GeometricSetup};
use crate::shriek::LowerShriek;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DescentError {
    #[error("{0}")]
    Oracle(String),
    #[error("pair check {check} fails")]
    PairInvalid { check: String },
    #[error("no atlas for {0}")]
    NoAtlas(String),
    #[error("descent data over {atlas} do not form a lattice: {reason}")]
    NotALattice { atlas: String, reason: String },
    #[error("precondition fails for {atlas}: {detail}")]
    Precondition { atlas: String, detail: String },
    #[error("no hypercover for {0}")]
    NoHypercover(String),
    #[error("truncation {0} is above 2")]
    Truncation(usize),
}

/// Truncated Čech nerve `X_0 = X, X_1 = X ×_{X'} X, X_2` of `x: X -> X'`.
/// `faces[n-1][i]: X_n -> X_{n-1}` drops coordinate `i`; `degeneracies[n-1][i]: X_{n-1} -> X_n` repeats it.
#[derive(Debug)]
pub struct CechDiagram<C: Category> {
    pub atlas: C::Mor,
    pub levels: Vec<C::Obj>,
    pub faces: Vec<Vec<C::Mor>>,
    pub degeneracies: Vec<Vec<C::Mor>>,
}

impl<C: Category> Clone for CechDiagram<C> {
    fn clone(&self) -> Self {
        Self {
            atlas: self.atlas.clone(),
            levels: self.levels.clone(),
            faces: self.faces.clone(),
            degeneracies: self.degeneracies.clone(),
        }
    }
}

impl<C: Category> CechDiagram<C> {
    pub fn truncation(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn face(&self, n: usize, i: usize) -> &C::Mor {
        &self.faces[n - 1][i]
    }

    pub fn degeneracy(&self, n: usize, i: usize) -> &C::Mor {
        &self.degeneracies[n - 1][i]
    }

    /// `[X_1 -> X_0]` as `[first coordinate, second coordinate]`.
    fn pair_legs(&self) -> [C::Mor; 2] {
        [self.face(1, 1).clone(), self.face(1, 0).clone()]
    }
}

fn oracle<T>(v: Option<T>, what: impl FnOnce() -> String) -> Result<T, DescentError> {
    v.ok_or_else(|| DescentError::Oracle(what()))
}

pub fn cech_nerve<C: Category>(c: &C, x: &C::Mor, m: usize) -> Result<CechDiagram<C>, DescentError> {
    if m > 2 {
        return Err(DescentError::Truncation(m));
    }
    let x0 = c.source(x);
    let mut d = CechDiagram {
        atlas: x.clone(),
        levels: vec![x0.clone()],
        faces: Vec::new(),
        degeneracies: Vec::new(),
    };
    if m == 0 {
        return Ok(d);
    }
    let sq = oracle(c.pullback(x, x), || format!("no pullback of {} with itself", c.mor_label(x)))?;
    let (x1, p0, p1) = (sq.apex.clone(), sq.legs[0].clone(), sq.legs[1].clone());
    let id0 = c.identity(&x0);
    let s0 = oracle(c.factor(&x1, &sq.legs, &x0, &[id0.clone(), id0]), || "no diagonal".into())?;
    d.levels.push(x1.clone());
    d.faces.push(vec![p1.clone(), p0.clone()]);
    d.degeneracies.push(vec![s0.clone()]);
    if m == 1 {
        return Ok(d);
    }
    // triples as pairs (x0,x1), (x1,x2) agreeing on x1
    let sq2 = oracle(c.pullback(&p1, &p0), || "no triple overlap".into())?;
    let (x2, l, r) = (sq2.apex.clone(), sq2.legs[0].clone(), sq2.legs[1].clone());
    let d1 = oracle(
        c.factor(&x1, &sq.legs, &x2, &[c.comp(&p0, &l), c.comp(&p1, &r)]),
        || "no outer face".into(),
    )?;
    let id1 = c.identity(&x1);
    let t0 = oracle(
        c.factor(&x2, &sq2.legs, &x1, &[c.comp(&s0, &p0), id1.clone()]),
        || "no degeneracy s0".into(),
    )?;
    let t1 = oracle(
        c.factor(&x2, &sq2.legs, &x1, &[id1, c.comp(&s0, &p1)]),
        || "no degeneracy s1".into(),
    )?;
    d.levels.push(x2);
    d.faces.push(vec![r, d1, l]);
    d.degeneracies.push(vec![t0, t1]);
    Ok(d)
}

/// Simplicial identities up to the truncation, and `x d0 = x d1`.
pub fn check_simplicial_identities<C: Category>(c: &C, d: &CechDiagram<C>) -> VerificationReport {
    let mut rep = VerificationReport::new(format!("Čech nerve of {}", c.mor_label(&d.atlas)));
    let mut b = CheckBuilder::new("cech.identities", "face and degeneracy maps satisfy the simplicial identities");
    let m = d.truncation();
    let mut eq = |name: &str, lhs: C::Mor, rhs: C::Mor| {
        b.observe(lhs == rhs, || {
            Witness::new()
                .with("identity", name)
                .with("lhs", c.mor_label(&lhs))
                .with("rhs", c.mor_label(&rhs))
        });
    };
    let f = |n, i| d.face(n, i).clone();
    let s = |n, i| d.degeneracy(n, i).clone();
    if m >= 1 {
        let x1 = &d.levels[1];
        let x0 = &d.levels[0];
        eq("x d0 = x d1", c.comp(&d.atlas, &f(1, 0)), c.comp(&d.atlas, &f(1, 1)));
        eq("d0 s0 = id", c.comp(&f(1, 0), &s(1, 0)), c.identity(x0));
        eq("d1 s0 = id", c.comp(&f(1, 1), &s(1, 0)), c.identity(x0));
        if m >= 2 {
            eq("d0 d1 = d0 d0", c.comp(&f(1, 0), &f(2, 1)), c.comp(&f(1, 0), &f(2, 0)));
            eq("d0 d2 = d1 d0", c.comp(&f(1, 0), &f(2, 2)), c.comp(&f(1, 1), &f(2, 0)));
            eq("d1 d2 = d1 d1", c.comp(&f(1, 1), &f(2, 2)), c.comp(&f(1, 1), &f(2, 1)));
            eq("d0 s0 = id", c.comp(&f(2, 0), &s(2, 0)), c.identity(x1));
            eq("d1 s0 = id", c.comp(&f(2, 1), &s(2, 0)), c.identity(x1));
            eq("d1 s1 = id", c.comp(&f(2, 1), &s(2, 1)), c.identity(x1));
            eq("d2 s1 = id", c.comp(&f(2, 2), &s(2, 1)), c.identity(x1));
            eq("d2 s0 = s0 d1", c.comp(&f(2, 2), &s(2, 0)), c.comp(&s(1, 0), &f(1, 1)));
            eq("d0 s1 = s0 d0", c.comp(&f(2, 0), &s(2, 1)), c.comp(&s(1, 0), &f(1, 0)));
            eq("s0 s0 = s1 s0", c.comp(&s(2, 0), &s(1, 0)), c.comp(&s(2, 1), &s(1, 0)));
        }
    }
    rep.add(b);
    rep
}

type SmallPredicate<C> = Arc<dyn Fn(&<C as Category>::Obj) -> bool + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    Nice,
    Exceptional,
}

/// `(C, S, E) ⊂ (C', S', E')`; `C` is the full subcategory of small objects.
pub struct PairDeclaration<C: Category> {
    pub name: String,
    pub kind: PairKind,
    pub small_cat: Arc<C>,
    pub cat: Arc<C>,
    pub is_small: SmallPredicate<C>,
    pub s: EdgeClass<C>,
    pub e: EdgeClass<C>,
    pub s_prime: EdgeClass<C>,
    pub e_prime: EdgeClass<C>,
    /// Declared atlases; the first one of each object is the chosen one.
    pub atlases: BTreeMap<C::Obj, Vec<C::Mor>>,
}

impl<C: Category> Clone for PairDeclaration<C> {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            kind: self.kind,
            small_cat: Arc::clone(&self.small_cat),
            cat: Arc::clone(&self.cat),
            is_small: Arc::clone(&self.is_small),
            s: self.s.clone(),
            e: self.e.clone(),
            s_prime: self.s_prime.clone(),
            e_prime: self.e_prime.clone(),
            atlases: self.atlases.clone(),
        }
    }
}

impl<C: Category> PairDeclaration<C> {
    pub fn with_atlas(mut self, x: C::Mor) -> Self {
        let t = self.cat.target(&x);
        self.atlases.entry(t).or_default().push(x);
        self
    }

    pub fn without_atlases(mut self, obj: &C::Obj) -> Self {
        self.atlases.remove(obj);
        self
    }

    /// Declared atlases, or the identity for a small object without any.
    pub fn atlases_for(&self, x: &C::Obj) -> Vec<C::Mor> {
        match self.atlases.get(x) {
            Some(v) if !v.is_empty() => v.clone(),
            _ if (self.is_small)(x) => vec![self.cat.identity(x)],
            _ => Vec::new(),
        }
    }

    pub fn chosen_atlas(&self, x: &C::Obj) -> Result<C::Mor, DescentError> {
        self.atlases_for(x)
            .into_iter()
            .next()
            .ok_or_else(|| DescentError::NoAtlas(self.cat.obj_label(x)))
    }

    fn small_window(&self) -> Vec<C::Obj> {
        self.cat.window().into_iter().filter(|x| (self.is_small)(x)).collect()
    }

    fn small_morphisms(&self) -> Vec<C::Mor> {
        let c = &*self.cat;
        window_morphisms(c)
            .into_iter()
            .filter(|f| (self.is_small)(&c.source(f)) && (self.is_small)(&c.target(f)))
            .collect()
    }

    /// Every failure of `x` to be an atlas, as a witness.
    pub fn atlas_defect(&self, x: &C::Mor) -> Option<Witness> {
        let c = &*self.cat;
        let w = || Witness::new().with("atlas", c.mor_label(x));
        if !(self.is_small)(&c.source(x)) {
            return Some(w().with("failure", "source is not small"));
        }
        if !self.s_prime.contains(c, x) {
            return Some(w().with("failure", "not in S'"));
        }
        for y in self.small_window() {
            for g in c.hom(&y, &c.target(x)) {
                let Some(sq) = c.pullback(x, &g) else {
                    return Some(w().with("along", c.mor_label(&g)).with("failure", "no pullback"));
                };
                let bc = &sq.legs[1];
                if !(self.is_small)(&sq.apex) || !self.s.contains(c, bc) {
                    return Some(w().with("along", c.mor_label(&g)).with("base_change", c.mor_label(bc)));
                }
            }
        }
        None
    }
}

impl PairDeclaration<FinSet> {
    /// Finite sets up to `max`, plus extra objects only the ambient side sees.
    pub fn finset(
        name: &str,
        kind: PairKind,
        max: usize,
        extras: &[(usize, &str)],
        classes: [EdgeClass<FinSet>; 4],
    ) -> (Self, Vec<SetObj>) {
        let mut cat = FinSet::upto(max);
        let mut objs = Vec::new();
        for (size, label) in extras {
            let (c, o) = cat.with_extra(*size, label);
            cat = c;
            objs.push(o);
        }
        let [s, e, s_prime, e_prime] = classes;
        let pd = Self {
            name: name.to_string(),
            kind,
            small_cat: Arc::new(FinSet::upto(max)),
            cat: Arc::new(cat),
            is_small: Arc::new(|x: &SetObj| x.tag == 0),
            s,
            e,
            s_prime,
            e_prime,
            atlases: BTreeMap::new(),
        };
        (pd, objs)
    }
}

/// (a) four geometric setups, (b) `S' ∩ C = S`, (c) atlases exist,
/// (d) `E'`-maps base-change along atlases into `E`.
pub fn check_nice_pair<C: Category>(pd: &PairDeclaration<C>) -> VerificationReport {
    let c = &*pd.cat;
    let mut rep = VerificationReport::new(format!("nice pair {}", pd.name));
    let small = GeometricSetup::new(Arc::clone(&pd.small_cat), pd.s.clone());
    let big = GeometricSetup::new(Arc::clone(&pd.cat), pd.s_prime.clone());
    rep.absorb("pair.a.S", check_geometric_setup(&small));
    rep.absorb("pair.a.E", check_geometric_setup(&small.with_class(pd.e.clone())));
    rep.absorb("pair.a.S'", check_geometric_setup(&big));
    rep.absorb("pair.a.E'", check_geometric_setup(&big.with_class(pd.e_prime.clone())));

    let mut b = CheckBuilder::new("pair.b", "S' restricted to small objects is S");
    for f in pd.small_morphisms() {
        b.observe(pd.s_prime.contains(c, &f) == pd.s.contains(c, &f), || {
            Witness::new().with("f", c.mor_label(&f))
        });
    }
    rep.add(b);

    let mut at = CheckBuilder::new("pair.c", "every object has an atlas");
    for x in c.window() {
        let list = pd.atlases_for(&x);
        if list.is_empty() {
            at.fail(Witness::new().with("object", c.obj_label(&x)).with("failure", "no atlas"));
        }
        for a in list {
            let d = pd.atlas_defect(&a);
            at.observe(d.is_none(), || d.unwrap().with("object", c.obj_label(&x)));
        }
    }
    rep.add(at);

    let mut d = CheckBuilder::new("pair.d", "E'-maps base-change along atlases into E");
    for f in window_morphisms(c).into_iter().filter(|f| pd.e_prime.contains(c, f)) {
        for x in pd.atlases_for(&c.target(&f)) {
            let ok = match c.pullback(&x, &f) {
                Some(sq) => (pd.is_small)(&sq.apex) && pd.e.contains(c, &sq.legs[0]),
                None => false,
            };
            d.observe(ok, || {
                Witness::new().with("f", c.mor_label(&f)).with("atlas", c.mor_label(&x))
            });
        }
    }
    rep.add(d);
    rep
}

/// `f_•: Čech(y) -> Čech(x)` over `f: Y' -> X'`, components `f_0, f_1, f_2`.
#[derive(Debug)]
pub struct Hypercover<C: Category> {
    pub f: C::Mor,
    pub source: CechDiagram<C>,
    pub target: CechDiagram<C>,
    pub components: Vec<C::Mor>,
}

/// Induced `f_1`, `f_2` from `f_0`.
fn lift_levels<C: Category>(
    c: &C,
    src: &CechDiagram<C>,
    dst: &CechDiagram<C>,
    f0: &C::Mor,
) -> Option<Vec<C::Mor>> {
    let mut out = vec![f0.clone()];
    if dst.truncation() >= 1 {
        let [a, b] = src.pair_legs();
        let f1 = c.factor(&dst.levels[1], &dst.pair_legs(), &src.levels[1], &[c.comp(f0, &a), c.comp(f0, &b)])?;
        if dst.truncation() >= 2 {
            let (l, r) = (src.face(2, 2), src.face(2, 0));
            let legs = [dst.face(2, 2).clone(), dst.face(2, 0).clone()];
            let f2 = c.factor(&dst.levels[2], &legs, &src.levels[2], &[c.comp(&f1, l), c.comp(&f1, r)])?;
            out.push(f1);
            out.push(f2);
        } else {
            out.push(f1);
        }
    }
    Some(out)
}

/// Hypercovers of `f` whose components lie in `E`, over the given atlas pairs.
pub fn hypercovers<C: Category>(
    pd: &PairDeclaration<C>,
    f: &C::Mor,
    atlas_pairs: &[(C::Mor, C::Mor)],
    m: usize,
) -> Result<Vec<Hypercover<C>>, DescentError> {
    let c = &*pd.cat;
    let mut out = Vec::new();
    for (y, x) in atlas_pairs {
        let (src, dst) = (cech_nerve(c, y, m)?, cech_nerve(c, x, m)?);
        let fy = c.comp(f, y);
        for f0 in c.hom(&c.source(y), &c.source(x)) {
            if !pd.e.contains(c, &f0) || c.comp(x, &f0) != fy {
                continue;
            }
            if let Some(comps) = lift_levels(c, &src, &dst, &f0) {
                if comps.iter().all(|g| pd.e.contains(c, g)) {
                    out.push(Hypercover {
                        f: f.clone(),
                        source: src.clone(),
                        target: dst.clone(),
                        components: comps,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Declared atlases plus every valid atlas from a small window object.
fn atlas_candidates<C: Category>(pd: &PairDeclaration<C>, x: &C::Obj) -> Vec<C::Mor> {
    let c = &*pd.cat;
    let mut set: BTreeSet<C::Mor> = pd.atlases_for(x).into_iter().collect();
    for y in pd.small_window() {
        for a in c.hom(&y, x) {
            if pd.s_prime.contains(c, &a) && pd.atlas_defect(&a).is_none() {
                set.insert(a);
            }
        }
    }
    set.into_iter().collect()
}

/// `S ⊆ E`, and a bounded search for hypercovers of every `E'`-map.
/// Exhausting the bound is reported as a resource limit, never as absence.
pub fn check_exceptional_pair<C: Category>(pd: &PairDeclaration<C>) -> VerificationReport {
    let c = &*pd.cat;
    let mut rep = VerificationReport::new(format!("exceptional pair {}", pd.name));
    let mut inc = CheckBuilder::new("pair.S_in_E", "S is contained in E");
    for f in pd.small_morphisms().into_iter().filter(|f| pd.s.contains(c, f)) {
        inc.observe(pd.e.contains(c, &f), || Witness::new().with("f", c.mor_label(&f)));
    }
    rep.add(inc);

    let mut hc = CheckBuilder::new("pair.hypercovers", "every E'-map has a Čech hypercover with components in E");
    let mut missing = Vec::new();
    for f in window_morphisms(c).into_iter().filter(|f| pd.e_prime.contains(c, f)) {
        let ys = atlas_candidates(pd, &c.source(&f));
        let xs = atlas_candidates(pd, &c.target(&f));
        let pairs: Vec<_> = ys
            .iter()
            .flat_map(|y| xs.iter().map(move |x| (y.clone(), x.clone())))
            .collect();
        match hypercovers(pd, &f, &pairs, 2) {
            Ok(v) if !v.is_empty() => {
                hc.observe(true, Witness::new);
            }
            Ok(_) => missing.push(c.mor_label(&f)),
            Err(e) => hc.fail(Witness::new().with("f", c.mor_label(&f)).with("error", e)),
        }
    }
    if !missing.is_empty() {
        hc.limit(format!(
            "no hypercover among atlases from small window objects for: {}",
            missing.join(", ")
        ));
    }
    rep.add(hc);
    rep
}

/// A sub-order of `D(X_0)` presenting a lattice attached to an atlas.
#[derive(Clone, Debug)]
pub struct SubLattice {
    pub lattice: FiniteLattice,
    pub ambient: FiniteLattice,
    /// Index in `lattice` -> element of `ambient`.
    pub embed: Vec<usize>,
}

impl SubLattice {
    fn whole(l: &FiniteLattice) -> Self {
        Self {
            lattice: l.clone(),
            ambient: l.clone(),
            embed: l.elements().collect(),
        }
    }

    fn from_subset(name: &str, ambient: &FiniteLattice, embed: Vec<usize>) -> Result<Self, LatticeError> {
        let n = embed.len();
        if n == ambient.size() {
            return Ok(Self::whole(ambient));
        }
        let labels = embed.iter().map(|&e| ambient.label(e)).collect();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = ambient.leq(embed[i], embed[j]);
            }
        }
        let tensor = match ambient.tensor_kind() {
            Tensor::Join => Tensor::Join,
            _ => Tensor::Meet,
        };
        Ok(Self {
            lattice: FiniteLattice::from_order(name, labels, leq, tensor)?,
            ambient: ambient.clone(),
            embed,
        })
    }

    pub fn index_of(&self, e: usize) -> Option<usize> {
        self.embed.iter().position(|&v| v == e)
    }
}

/// Descent data: elements of `D(X_0)` whose two restrictions to `X_1` agree.
/// Also returns the elements breaking the `X_2` cocycle condition.
pub fn descent_lattice<C: Category, S: CoefficientSystem<C> + ?Sized>(
    c: &C,
    sys: &S,
    d: &CechDiagram<C>,
) -> Result<(SubLattice, Vec<usize>), DescentError> {
    let l0 = sys.lattice(&d.levels[0]);
    if d.truncation() == 0 {
        return Ok((SubLattice::whole(&l0), Vec::new()));
    }
    let (a, b) = (sys.pullback_map(d.face(1, 0)), sys.pullback_map(d.face(1, 1)));
    let embed: Vec<usize> = l0.elements().filter(|&e| a.apply(e) == b.apply(e)).collect();
    let mut broken = Vec::new();
    if d.truncation() >= 2 {
        let verts = [
            c.comp(d.face(1, 1), d.face(2, 2)),
            c.comp(d.face(1, 0), d.face(2, 2)),
            c.comp(d.face(1, 0), d.face(2, 0)),
        ];
        let maps: Vec<MonotoneMap> = verts.iter().map(|v| sys.pullback_map(v)).collect();
        for &e in &embed {
            let v0 = maps[0].apply(e);
            if maps.iter().any(|m| m.apply(e) != v0) {
                broken.push(e);
            }
        }
    }
    let name = format!("Desc({})", c.mor_label(&d.atlas));
    let sub = SubLattice::from_subset(&name, &l0, embed).map_err(|e| DescentError::NotALattice {
        atlas: c.mor_label(&d.atlas),
        reason: e.to_string(),
    })?;
    Ok((sub, broken))
}

/// `x^*: D(X') -> Desc(x)` is an order-isomorphism, for an atlas with small base.
pub fn descent_failure<C: Category, S: CoefficientSystem<C> + ?Sized>(
    c: &C,
    sys: &S,
    x: &C::Mor,
) -> Result<Option<Witness>, DescentError> {
    let d = cech_nerve(c, x, 2)?;
    let (desc, broken) = descent_lattice(c, sys, &d)?;
    let w = || Witness::new().with("atlas", c.mor_label(x));
    if let Some(&e) = broken.first() {
        return Ok(Some(w().with("cocycle", desc.ambient.label(e))));
    }
    let pull = sys.pullback_map(x);
    let base = &pull.src;
    let mut hit = vec![None; desc.embed.len()];
    for a in base.elements() {
        match desc.index_of(pull.apply(a)) {
            None => return Ok(Some(w().with("element", base.label(a)).with("failure", "image is not descent data"))),
            Some(i) => {
                if let Some(prev) = hit[i] {
                    return Ok(Some(
                        w().with("element", base.label(a))
                            .with("collides_with", base.label(prev))
                            .with("failure", "not injective"),
                    ));
                }
                hit[i] = Some(a);
            }
        }
    }
    if let Some(i) = hit.iter().position(Option::is_none) {
        return Ok(Some(
            w().with("datum", desc.ambient.label(desc.embed[i]))
                .with("failure", "datum does not descend"),
        ));
    }
    for a in base.elements() {
        for b in base.elements() {
            if base.leq(a, b) != desc.ambient.leq(pull.apply(a), pull.apply(b)) {
                return Ok(Some(
                    w().with("a", base.label(a)).with("b", base.label(b)).with("failure", "order not reflected"),
                ));
            }
        }
    }
    Ok(None)
}

pub fn check_descent<C: Category, S: CoefficientSystem<C> + ?Sized>(
    c: &C,
    sys: &S,
    atlases: &[C::Mor],
) -> CheckBuilder {
    let mut b = CheckBuilder::new("descent.precondition", "D(X') is the lattice of descent data over the atlas");
    for x in atlases {
        match descent_failure(c, sys, x) {
            Ok(None) => {
                b.observe(true, Witness::new);
            }
            Ok(Some(w)) => b.fail(w),
            Err(e) => b.fail(Witness::new().with("atlas", c.mor_label(x)).with("error", e)),
        }
    }
    b
}

/// Descent for every atlas of the window with a section.
pub fn check_split_descent<C: Category, S: CoefficientSystem<C> + ?Sized>(c: &C, sys: &S) -> CheckBuilder {
    let mors = window_morphisms(c);
    let split: Vec<C::Mor> = mors
        .iter()
        .filter(|x| {
            let id = c.identity(&c.target(x));
            c.hom(&c.target(x), &c.source(x)).iter().any(|s| c.comp(x, s) == id)
        })
        .cloned()
        .collect();
    let mut b = check_descent(c, sys, &split);
    b.detail(format!("{} split atlases", split.len()));
    let mut r = b.finish();
    r.id = "descent.split".into();
    r.statement = "descent along split atlases is automatic".into();
    let mut out = CheckBuilder::new(r.id.clone(), r.statement.clone());
    for _ in 0..r.checked.saturating_sub(r.failures) {
        out.observe(true, Witness::new);
    }
    if let Some(w) = r.witness {
        out.fail(w);
    }
    if let Some(d) = r.detail {
        out.detail(d);
    }
    out
}

/// `ψ: Desc(x) -> Desc(x̃)` through the product atlas `X ×_{X'} X̃`.
#[derive(Clone, Debug)]
pub struct AtlasComparison {
    pub first: SubLattice,
    pub second: SubLattice,
    pub table: Vec<usize>,
}

pub fn compare_atlases<C: Category, S: CoefficientSystem<C> + ?Sized>(
    c: &C,
    sys: &S,
    x: &C::Mor,
    y: &C::Mor,
) -> Result<Result<AtlasComparison, Witness>, DescentError> {
    let sq = oracle(c.pullback(x, y), || format!("no pullback of {}, {}", c.mor_label(x), c.mor_label(y)))?;
    let xp = c.comp(x, &sq.legs[0]);
    let lat = |a: &C::Mor| -> Result<SubLattice, DescentError> { Ok(descent_lattice(c, sys, &cech_nerve(c, a, 2)?)?.0) };
    let (dx, dy, dp) = (lat(x)?, lat(y)?, lat(&xp)?);
    let w = || {
        Witness::new()
            .with("first", c.mor_label(x))
            .with("second", c.mor_label(y))
    };
    let mut phis = Vec::new();
    for (d, leg) in [(&dx, &sq.legs[0]), (&dy, &sq.legs[1])] {
        let pull = sys.pullback_map(leg);
        let mut table = Vec::new();
        for &e in &d.embed {
            match dp.index_of(pull.apply(e)) {
                Some(i) => table.push(i),
                None => return Ok(Err(w().with("element", d.ambient.label(e)).with("failure", "restriction is not descent data"))),
            }
        }
        let distinct: BTreeSet<_> = table.iter().collect();
        if distinct.len() != dp.embed.len() || table.len() != dp.embed.len() {
            return Ok(Err(w().with("failure", "restriction to the product atlas is not bijective")));
        }
        for i in 0..table.len() {
            for j in 0..table.len() {
                if d.lattice.leq(i, j) != dp.lattice.leq(table[i], table[j]) {
                    return Ok(Err(w().with("failure", "restriction does not reflect the order")));
                }
            }
        }
        phis.push(table);
    }
    let inv: HashMap<usize, usize> = phis[1].iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let table = phis[0].iter().map(|v| inv[v]).collect();
    Ok(Ok(AtlasComparison {
        first: dx,
        second: dy,
        table,
    }))
}

/// `D'` on the ambient category: `D` on small objects, descent data over the
/// chosen atlas elsewhere, pullback maps by descending restrictions.
pub struct ExtendedSystem<C: Category> {
    pub pair: PairDeclaration<C>,
    pub base: Arc<dyn CoefficientSystem<C>>,
    chosen: BTreeMap<C::Obj, (C::Mor, SubLattice)>,
    maps: Mutex<HashMap<C::Mor, MonotoneMap>>,
    pub report: VerificationReport,
}

impl<C: Category> ExtendedSystem<C> {
    fn presentation(&self, x: &C::Obj) -> (C::Mor, SubLattice) {
        match self.chosen.get(x) {
            Some(v) => v.clone(),
            None => (self.pair.cat.identity(x), SubLattice::whole(&self.base.lattice(x))),
        }
    }

    pub fn chosen_atlas(&self, x: &C::Obj) -> C::Mor {
        self.presentation(x).0
    }

    /// Element of `D(X_0)` representing `e ∈ D'(X')`.
    pub fn represent(&self, x: &C::Obj, e: usize) -> usize {
        self.presentation(x).1.embed[e]
    }

    fn descend(&self, f: &C::Mor) -> Result<MonotoneMap, DescentError> {
        let c = &*self.pair.cat;
        let (y, ly) = self.presentation(&c.source(f));
        let (x, lx) = self.presentation(&c.target(f));
        let fy = c.comp(f, &y);
        let sq = oracle(c.pullback(&fy, &x), || format!("no pullback along {}", c.mor_label(f)))?;
        let (q1, q2) = (self.base.pullback_map(&sq.legs[0]), self.base.pullback_map(&sq.legs[1]));
        let mut lookup: HashMap<usize, usize> = HashMap::new();
        for (i, &d) in ly.embed.iter().enumerate() {
            if lookup.insert(q1.apply(d), i).is_some() {
                return Err(DescentError::Precondition {
                    atlas: c.mor_label(&sq.legs[0]),
                    detail: "restriction is not injective".into(),
                });
            }
        }
        let mut table = Vec::with_capacity(lx.embed.len());
        for &e in &lx.embed {
            let v = q2.apply(e);
            let i = *lookup.get(&v).ok_or_else(|| DescentError::Precondition {
                atlas: c.mor_label(&sq.legs[0]),
                detail: format!("{} does not descend", q2.dst.label(v)),
            })?;
            table.push(i);
        }
        Ok(MonotoneMap::from_fn(&lx.lattice, &ly.lattice, |i| table[i]))
    }

    pub fn try_pullback_map(&self, f: &C::Mor) -> Result<MonotoneMap, DescentError> {
        let c = &*self.pair.cat;
        if (self.pair.is_small)(&c.source(f)) && (self.pair.is_small)(&c.target(f)) {
            return Ok(self.base.pullback_map(f));
        }
        if let Some(m) = self.maps.lock().expect("map cache").get(f) {
            return Ok(m.clone());
        }
        let m = self.descend(f)?;
        self.maps.lock().expect("map cache").insert(f.clone(), m.clone());
        Ok(m)
    }
}

impl<C: Category> CoefficientSystem<C> for ExtendedSystem<C> {
    fn name(&self) -> String {
        format!("{} extended to {}", self.base.name(), self.pair.name)
    }

    fn lattice(&self, x: &C::Obj) -> FiniteLattice {
        self.presentation(x).1.lattice
    }

    fn pullback_map(&self, f: &C::Mor) -> MonotoneMap {
        self.try_pullback_map(f).unwrap_or_else(|e| panic!("pullback map outside the verified range: {e}"))
    }
}

/// Extends `sys` from `C` to `C'`. The pair and descent preconditions are
/// verified first; the returned report also covers atlas independence, the
/// restriction to `C` and functoriality over the ambient window.
pub fn extend_system_c<C: Category>(
    pd: &PairDeclaration<C>,
    sys: Arc<dyn CoefficientSystem<C>>,
) -> Result<ExtendedSystem<C>, DescentError> {
    if let Some(f) = check_nice_pair(pd).first_failure() {
        return Err(DescentError::PairInvalid { check: f.id.clone() });
    }
    let c = &*pd.cat;
    let mut rep = VerificationReport::new(format!("descent extension over {}", pd.name));

    let small_atlases: Vec<C::Mor> = pd
        .atlases
        .iter()
        .filter(|(x, _)| (pd.is_small)(x))
        .flat_map(|(_, v)| v.iter().cloned())
        .collect();
    let pre = check_descent(c, &*sys, &small_atlases).finish();
    if let Some(w) = pre.witness.as_ref().filter(|_| !pre.passed()) {
        return Err(DescentError::Precondition {
            atlas: w.get("atlas").unwrap_or_default().to_string(),
            detail: w.get("failure").or(w.get("error")).unwrap_or("descent fails").to_string(),
        });
    }
    rep.push(pre);
    rep.add(check_split_descent(&*pd.small_cat, &*sys));

    let mut chosen = BTreeMap::new();
    for x in c.window().into_iter().filter(|x| !(pd.is_small)(x)) {
        let a = pd.chosen_atlas(&x)?;
        let (sub, broken) = descent_lattice(c, &*sys, &cech_nerve(c, &a, 2)?)?;
        if let Some(&e) = broken.first() {
            return Err(DescentError::Precondition {
                atlas: c.mor_label(&a),
                detail: format!("cocycle fails at {}", sub.ambient.label(e)),
            });
        }
        chosen.insert(x, (a, sub));
    }

    let mut ind = CheckBuilder::new("extend.atlas_independence", "atlases of one object give isomorphic descent lattices");
    for (x, list) in &pd.atlases {
        for (i, a) in list.iter().enumerate() {
            for b in &list[i + 1..] {
                match compare_atlases(c, &*sys, a, b)? {
                    Ok(_) => {
                        ind.observe(true, Witness::new);
                    }
                    Err(w) => ind.fail(w.with("object", c.obj_label(x))),
                }
            }
        }
    }
    rep.add(ind);

    let ext = ExtendedSystem {
        pair: pd.clone(),
        base: Arc::clone(&sys),
        chosen,
        maps: Mutex::new(HashMap::new()),
        report: VerificationReport::new(""),
    };
    for f in window_morphisms(c) {
        ext.try_pullback_map(&f)?;
    }

    let mut res = CheckBuilder::new("extend.restriction", "on small objects the extension is the original system");
    let sc = &*pd.small_cat;
    for x in sc.window() {
        res.observe(ext.lattice(&x) == sys.lattice(&x), || Witness::new().with("object", sc.obj_label(&x)));
    }
    for f in window_morphisms(sc) {
        res.observe(ext.descend(&f).ok().as_ref() == Some(&sys.pullback_map(&f)), || {
            Witness::new().with("f", sc.mor_label(&f))
        });
    }
    rep.add(res);
    rep.absorb("extend", check_system(c, &ext));
    Ok(ExtendedSystem { report: rep, ..ext })
}

/// Codescent: the coequalizer of `d0_!, d1_!: D(X_1) -> D(X_0)`, presented by
/// the elements `e` with `d0_!u <= e ⇔ d1_!u <= e` for all `u`.
#[derive(Clone, Debug)]
pub struct Coequalizer {
    pub sub: SubLattice,
    /// Element of `D(X_0)` -> index of its closure.
    pub closure: Vec<usize>,
}

pub fn codescent_lattice<C: Category>(
    c: &C,
    sys: &dyn CoefficientSystem<C>,
    sh: &dyn LowerShriek<C>,
    d: &CechDiagram<C>,
) -> Result<Coequalizer, DescentError> {
    let l0 = sys.lattice(&d.levels[0]);
    if d.truncation() == 0 {
        return Ok(Coequalizer {
            sub: SubLattice::whole(&l0),
            closure: l0.elements().collect(),
        });
    }
    let need = |f: &C::Mor| oracle(sh.shriek(f), || format!("no f_! for {}", c.mor_label(f)));
    let (a, b) = (need(d.face(1, 0))?, need(d.face(1, 1))?);
    let gens: Vec<(usize, usize)> = a.src.elements().map(|u| (a.apply(u), b.apply(u))).collect();
    // saturate: whatever one image lies below, the other must too
    let saturate = |mut e: usize| loop {
        let mut next = e;
        for &(p, q) in &gens {
            if l0.leq(p, e) {
                next = l0.join(next, q);
            }
            if l0.leq(q, e) {
                next = l0.join(next, p);
            }
        }
        if next == e {
            return e;
        }
        e = next;
    };
    let closed: Vec<usize> = l0.elements().filter(|&e| saturate(e) == e).collect();
    let name = format!("Codesc({})", c.mor_label(&d.atlas));
    let sub = SubLattice::from_subset(&name, &l0, closed).map_err(|e| DescentError::NotALattice {
        atlas: c.mor_label(&d.atlas),
        reason: e.to_string(),
    })?;
    let closure = l0
        .elements()
        .map(|e| sub.index_of(saturate(e)).expect("saturation is closed"))
        .collect();
    Ok(Coequalizer { sub, closure })
}

/// `x_!` induces an order-isomorphism from the coequalizer onto `D(X')`.
pub fn codescent_failure<C: Category>(
    c: &C,
    sys: &dyn CoefficientSystem<C>,
    sh: &dyn LowerShriek<C>,
    x: &C::Mor,
) -> Result<Option<Witness>, DescentError> {
    let d = cech_nerve(c, x, 2)?;
    let q = codescent_lattice(c, sys, sh, &d)?;
    let w = || Witness::new().with("atlas", c.mor_label(x));
    let push = oracle(sh.shriek(x), || format!("no f_! for {}", c.mor_label(x)))?;
    for u in sys.lattice(&d.levels[1]).elements() {
        let (a, b) = (sh.shriek(d.face(1, 0)), sh.shriek(d.face(1, 1)));
        let (Some(a), Some(b)) = (a, b) else {
            return Ok(Some(w().with("failure", "missing face pushforward")));
        };
        if push.apply(a.apply(u)) != push.apply(b.apply(u)) {
            return Ok(Some(w().with("element", a.src.label(u)).with("failure", "x_! does not coequalize")));
        }
    }
    let base = &push.dst;
    let image: Vec<usize> = q.sub.embed.iter().map(|&e| push.apply(e)).collect();
    let hit: BTreeSet<usize> = image.iter().copied().collect();
    if hit.len() != image.len() || hit.len() != base.size() {
        return Ok(Some(w().with("failure", "induced map is not bijective")));
    }
    for i in 0..image.len() {
        for j in 0..image.len() {
            if q.sub.lattice.leq(i, j) != base.leq(image[i], image[j]) {
                return Ok(Some(w().with("failure", "induced map does not reflect the order")));
            }
        }
    }
    Ok(None)
}

/// `f_!` on `E'`, as maps between coequalizer presentations over the chosen atlases.
pub struct ExtendedShriek<C: Category> {
    pub lattices: BTreeMap<C::Obj, (C::Mor, Coequalizer)>,
    pub maps: BTreeMap<C::Mor, MonotoneMap>,
    pub report: VerificationReport,
}

pub fn extend_system_e<C: Category>(
    pd: &PairDeclaration<C>,
    sys: &dyn CoefficientSystem<C>,
    sh: &dyn LowerShriek<C>,
) -> Result<ExtendedShriek<C>, DescentError> {
    let pre = check_exceptional_pair(pd);
    if let Some(f) = pre.first_failure() {
        return Err(DescentError::PairInvalid { check: f.id.clone() });
    }
    let c = &*pd.cat;
    let mut rep = VerificationReport::new(format!("codescent extension over {}", pd.name));

    let mut cod = CheckBuilder::new("codescent.precondition", "D(X') is the coequalizer of the Čech diagram under f_!");
    for (x, list) in &pd.atlases {
        if !(pd.is_small)(x) {
            continue;
        }
        for a in list {
            match codescent_failure(c, sys, sh, a)? {
                None => {
                    cod.observe(true, Witness::new);
                }
                Some(w) => cod.fail(w),
            }
        }
    }
    let pre = cod.finish();
    if !pre.passed() {
        let w = pre.witness.clone().unwrap_or_default();
        return Err(DescentError::Precondition {
            atlas: w.get("atlas").unwrap_or_default().to_string(),
            detail: w.get("failure").unwrap_or("codescent fails").to_string(),
        });
    }
    rep.push(pre);

    let mut lattices = BTreeMap::new();
    for x in c.window() {
        let a = pd.chosen_atlas(&x)?;
        let q = codescent_lattice(c, sys, sh, &cech_nerve(c, &a, 2)?)?;
        lattices.insert(x, (a, q));
    }

    let mut maps = BTreeMap::new();
    let mut ind = CheckBuilder::new("codescent.independence", "induced f_! does not depend on the hypercover");
    let mut res = CheckBuilder::new("codescent.restriction", "on E the extension is the original f_!");
    for f in window_morphisms(c).into_iter().filter(|f| pd.e_prime.contains(c, f)) {
        let (y, qy) = &lattices[&c.source(&f)];
        let (x, qx) = &lattices[&c.target(&f)];
        let covers = hypercovers(pd, &f, &[(y.clone(), x.clone())], 2)?;
        if covers.is_empty() {
            return Err(DescentError::NoHypercover(c.mor_label(&f)));
        }
        let mut induced = Vec::new();
        for h in &covers {
            let f0 = oracle(sh.shriek(&h.components[0]), || format!("no f_! for {}", c.mor_label(&h.components[0])))?;
            induced.push(MonotoneMap::from_fn(&qy.sub.lattice, &qx.sub.lattice, |i| {
                qx.closure[f0.apply(qy.sub.embed[i])]
            }));
        }
        for (h, m) in covers.iter().zip(&induced).skip(1) {
            ind.observe(*m == induced[0], || {
                Witness::new()
                    .with("f", c.mor_label(&f))
                    .with("f0", c.mor_label(&covers[0].components[0]))
                    .with("other", c.mor_label(&h.components[0]))
            });
        }
        if (pd.is_small)(&c.source(&f)) && (pd.is_small)(&c.target(&f)) && pd.e.contains(c, &f) {
            // read both sides in D through the presentations x_!, y_!
            let to_base = |a: &C::Mor, q: &Coequalizer| {
                sh.shriek(a)
                    .map(|p| MonotoneMap::from_fn(&q.sub.lattice, &p.dst, |i| p.apply(q.sub.embed[i])))
            };
            let ok = match (to_base(y, qy), to_base(x, qx), sh.shriek(&f)) {
                (Some(py), Some(px), Some(fs)) => induced[0].then(&px).table() == py.then(&fs).table(),
                _ => false,
            };
            res.observe(ok, || Witness::new().with("f", c.mor_label(&f)));
        }
        maps.insert(f, induced.swap_remove(0));
    }
    rep.add(ind);
    rep.add(res);
    Ok(ExtendedShriek {
        lattices,
        maps,
        report: rep,
    })
}

/// A functor `p: C -> D` and a class `R` of morphisms of `C`; identities count as members of `R`.
#[derive(Clone, Debug)]
pub struct LocalizationProblem {
    pub name: String,
    pub p: FunctorData,
    pub r: BTreeSet<MorId>,
}

impl LocalizationProblem {
    pub fn in_r(&self, u: MorId) -> bool {
        self.r.contains(&u) || self.p.source.is_identity(&u)
    }
}

/// Precondition `p(R) ⊆ isos`, then (i) `nerve(p)` is surjective on simplices of
/// dimension ≤ 2 and (ii) each fiber `C_d` has binary products with projections in `R`.
pub fn check_localization_premises(lp: &LocalizationProblem) -> VerificationReport {
    let (c, d) = (&*lp.p.source, &*lp.p.target);
    let mut rep = VerificationReport::new(format!("localization premises {}", lp.name));

    let mut pre = CheckBuilder::new("localize.precondition", "p sends R to isomorphisms");
    for &u in &lp.r {
        pre.observe(d.is_iso(&lp.p.mor(u)), || Witness::new().with("morphism", c.morphism_name(u)));
    }
    rep.add(pre);

    let mut s0 = CheckBuilder::new("localize.surjective.0", "every object of D is hit");
    let hit: BTreeSet<ObjId> = c.objects().map(|x| lp.p.obj(x)).collect();
    for y in d.objects() {
        s0.observe(hit.contains(&y), || Witness::new().with("object", d.object_name(y)));
    }
    rep.add(s0);
    let mut s1 = CheckBuilder::new("localize.surjective.1", "every morphism of D is hit");
    let hit: BTreeSet<MorId> = c.morphisms().map(|u| lp.p.mor(u)).collect();
    for g in d.morphisms() {
        s1.observe(hit.contains(&g), || Witness::new().with("morphism", d.morphism_name(g)));
    }
    rep.add(s1);
    let mut s2 = CheckBuilder::new("localize.surjective.2", "every composable pair of D lifts");
    let hit: BTreeSet<(MorId, MorId)> = c
        .composable_pairs()
        .into_iter()
        .map(|(g, f)| (lp.p.mor(g), lp.p.mor(f)))
        .collect();
    for (g, f) in d.composable_pairs() {
        s2.observe(hit.contains(&(g, f)), || {
            Witness::new()
                .with("first", d.morphism_name(f))
                .with("then", d.morphism_name(g))
        });
    }
    rep.add(s2);

    let mut prod = CheckBuilder::new("localize.fiber_products", "each fiber has binary products with projections in R");
    for y in d.objects() {
        let id = d.id_of(y);
        let objs: Vec<ObjId> = c.objects().filter(|x| lp.p.obj(*x) == y).collect();
        let homs = |s: ObjId, t: ObjId| -> Vec<MorId> {
            c.hom(&s, &t).into_iter().filter(|u| lp.p.mor(*u) == id).collect()
        };
        for (i, &a) in objs.iter().enumerate() {
            for &b in &objs[i..] {
                let found = fiber_product(c, &objs, &homs, a, b, |u| lp.in_r(u));
                prod.observe(found.is_ok(), || {
                    Witness::new()
                        .with("fiber", d.object_name(y))
                        .with("a", c.object_name(a))
                        .with("b", c.object_name(b))
                        .with("failure", found.unwrap_err())
                });
            }
        }
    }
    rep.add(prod);
    rep
}

fn fiber_product(
    c: &FinCategory,
    objs: &[ObjId],
    homs: &dyn Fn(ObjId, ObjId) -> Vec<MorId>,
    a: ObjId,
    b: ObjId,
    in_r: impl Fn(MorId) -> bool,
) -> Result<(ObjId, MorId, MorId), &'static str> {
    let mut universal_outside_r = false;
    for &p in objs {
        for pa in homs(p, a) {
            for pb in homs(p, b) {
                let universal = objs.iter().all(|&t| {
                    let into_p = homs(t, p);
                    homs(t, a).iter().all(|u| {
                        homs(t, b).iter().all(|v| {
                            into_p
                                .iter()
                                .filter(|w| c.compose(&pa, w) == Some(*u) && c.compose(&pb, w) == Some(*v))
                                .count()
                                == 1
                        })
                    })
                });
                if universal {
                    if in_r(pa) && in_r(pb) {
                        return Ok((p, pa, pb));
                    }
                    universal_outside_r = true;
                }
            }
        }
    }
    Err(if universal_outside_r {
        "product projections are not in R"
    } else {
        "no product in the fiber"
    })
}

fn terminal_over(c: Arc<FinCategory>, d: Arc<FinCategory>, at: ObjId) -> FunctorData {
    let om = c.objects().map(|_| at).collect();
    let mm = c.morphisms().map(|_| d.id_of(at)).collect();
    FunctorData::new(c, d, om, mm).expect("constant functor is total")
}

fn point() -> Arc<FinCategory> {
    Arc::new(FinCategory::poset("pt", &["*".to_string()], |_, _| true))
}

fn all_but_identities(c: &FinCategory) -> BTreeSet<MorId> {
    c.morphisms().filter(|u| !c.is_identity(u)).collect()
}

/// `0 -> 1` over the point, with `R = {0 -> 1}`.
pub fn interval_instance() -> LocalizationProblem {
    let c = Arc::new(FinCategory::poset("[1]", &["0".to_string(), "1".to_string()], |i, j| i <= j));
    let r = all_but_identities(&c);
    LocalizationProblem {
        name: "interval".into(),
        p: terminal_over(c, point(), ObjId(0)),
        r,
    }
}

/// Members of a two-set cover of a three-point base, their overlap and the
/// base, ordered by inclusion; the overlap is the fiber product of the two
/// members over the base. `R` is every inclusion.
pub fn cech_pair_instance() -> LocalizationProblem {
    cech_poset(&[&[0, 1, 2], &[0, 1], &[1, 2], &[1]])
}

/// The same without the overlap, so the two members have no product.
pub fn cech_pair_without_overlap() -> LocalizationProblem {
    cech_poset(&[&[0, 1, 2], &[0, 1], &[1, 2]])
}

fn cech_poset(sets: &[&[usize]]) -> LocalizationProblem {
    let names: Vec<String> = sets
        .iter()
        .map(|s| format!("{{{}}}", s.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    let c = Arc::new(FinCategory::poset("cover", &names, |i, j| {
        sets[i].iter().all(|v| sets[j].contains(v))
    }));
    let r = all_but_identities(&c);
    LocalizationProblem {
        name: format!("cech pair ({} pieces)", sets.len()),
        p: terminal_over(c, point(), ObjId(0)),
        r,
    }
}

/// Two objects with only identities over the point.
pub fn discrete_fiber_instance() -> LocalizationProblem {
    let c = Arc::new(FinCategory::poset("discrete", &["a".to_string(), "b".to_string()], |i, j| i == j));
    LocalizationProblem {
        name: "discrete fiber".into(),
        p: terminal_over(c, point(), ObjId(0)),
        r: BTreeSet::new(),
    }
}

/// Adds an object of `D` that nothing maps to.
pub fn with_unreached_object(lp: &LocalizationProblem) -> LocalizationProblem {
    let old = &lp.p.target;
    let mut names: Vec<String> = old.objects().map(|x| old.object_name(x).to_string()).collect();
    let n = names.len();
    names.push("unreached".into());
    assert!(old.morphisms().all(|u| old.is_identity(&u)), "only discrete targets are extended");
    let d = Arc::new(FinCategory::poset(&format!("{}+", old.name()), &names, |i, j| i == j));
    let om: Vec<ObjId> = lp.p.source.objects().map(|x| lp.p.obj(x)).collect();
    let mm = lp.p.source.morphisms().map(|u| d.id_of(lp.p.obj(lp.p.source.record(u).src))).collect();
    debug_assert!(om.iter().all(|o| o.idx() < n));
    LocalizationProblem {
        name: format!("{} with an unreached object", lp.name),
        p: FunctorData::new(Arc::clone(&lp.p.source), d, om, mm).expect("total"),
        r: lp.r.clone(),
    }
}

/// The nice pair of the corpus: finite sets up to 2, with `P` (one point,
/// atlases from 2 and from 1) and `Q` (two points, atlas from 2) added.
pub fn sample_nice_pair() -> PairDeclaration<FinSet> {
    let surj = finset::surjective;
    let (pd, o) = PairDeclaration::finset(
        "finset<=2 + P + Q",
        PairKind::Nice,
        2,
        &[(1, "P"), (2, "Q")],
        [surj(), finset::all_maps(), surj(), finset::all_maps()],
    );
    let (p, q) = (o[0], o[1]);
    pd.with_atlas(Func::new(SetObj::n(2), p, vec![0, 0]))
        .with_atlas(Func::new(SetObj::n(1), p, vec![0]))
        .with_atlas(Func::new(SetObj::n(2), q, vec![0, 1]))
        .with_atlas(Func::of(2, 1, &[0, 0]))
}

/// `C = C'`, surjections as covers, identity atlases.
pub fn degenerate_pair() -> PairDeclaration<FinSet> {
    let surj = finset::surjective;
    PairDeclaration::finset(
        "finset<=2 degenerate",
        PairKind::Nice,
        2,
        &[],
        [surj(), finset::all_maps(), surj(), finset::all_maps()],
    )
    .0
}

/// Same objects as [`sample_nice_pair`], read as an exceptional pair.
pub fn sample_exceptional_pair() -> PairDeclaration<FinSet> {
    PairDeclaration {
        name: "finset<=2 + P + Q exceptional".into(),
        kind: PairKind::Exceptional,
        ..sample_nice_pair()
    }
}

/// `E = isos` inside `E' = all` with surjective covers.
pub fn isos_in_all_pair() -> PairDeclaration<FinSet> {
    PairDeclaration::finset(
        "finset<=2 isos in all",
        PairKind::Exceptional,
        2,
        &[],
        [finset::surjective(), finset::bijective(), finset::surjective(), finset::all_maps()],
    )
    .0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FrameModel;
    use crate::report::Status;
    use crate::shriek::{build_shriek, NagataSetup};

    fn frame(len: usize) -> Arc<dyn CoefficientSystem<FinSet>> {
        Arc::new(FrameModel::new(FiniteLattice::chain(len)))
    }

    #[test]
    fn nerve_of_a_fold_has_four_and_eight_points() {
        let c = FinSet::upto(2);
        let d = cech_nerve(&c, &Func::of(2, 1, &[0, 0]), 2).unwrap();
        let sizes: Vec<usize> = d.levels.iter().map(|x| x.size).collect();
        assert_eq!(sizes, vec![2, 4, 8]);
        assert!(check_simplicial_identities(&c, &d).fully_passed());
        assert!(cech_nerve(&c, &Func::of(2, 1, &[0, 0]), 3).is_err());
    }

    #[test]
    fn nerve_of_an_iso_is_constant() {
        let c = FinSet::upto(2);
        let d = cech_nerve(&c, &Func::of(2, 2, &[1, 0]), 2).unwrap();
        assert!(d.levels.iter().all(|x| x.size == 2));
        assert!(d.faces.iter().flatten().all(|f| c.is_iso(f)));
    }

    #[test]
    fn nerves_of_every_window_map_are_simplicial() {
        let c = FinSet::upto(2);
        for x in window_morphisms(&c) {
            let d = cech_nerve(&c, &x, 2).unwrap();
            assert!(check_simplicial_identities(&c, &d).fully_passed(), "{x}");
        }
    }

    #[test]
    fn fold_descent_is_the_diagonal() {
        let c = FinSet::upto(2);
        let sys = frame(2);
        let (desc, broken) = descent_lattice(&c, &*sys, &cech_nerve(&c, &Func::of(2, 1, &[0, 0]), 2).unwrap()).unwrap();
        assert!(broken.is_empty());
        let l2 = FiniteLattice::power(&FiniteLattice::chain(2), 2);
        let diag: Vec<usize> = (0..2).map(|v| l2.from_components(&[v, v])).collect();
        assert_eq!(desc.embed, diag);
        assert_eq!(descent_failure(&c, &*sys, &Func::of(2, 1, &[0, 0])).unwrap(), None);
    }

    #[test]
    fn non_surjective_atlas_fails_descent() {
        let c = FinSet::upto(2);
        let w = descent_failure(&c, &*frame(2), &Func::of(1, 2, &[0])).unwrap().unwrap();
        assert_eq!(w.get("failure"), Some("not injective"));
    }

    #[test]
    fn pairs_check() {
        assert!(check_nice_pair(&degenerate_pair()).fully_passed());
        let pd = sample_nice_pair();
        assert!(check_nice_pair(&pd).fully_passed(), "{}", check_nice_pair(&pd).to_text());
        let q = *pd.atlases.keys().find(|x| x.tag == 2).unwrap();
        let rep = check_nice_pair(&pd.without_atlases(&q));
        assert_eq!(rep.failed_ids(), vec!["pair.c"]);
        assert_eq!(rep.check("pair.c").unwrap().witness.as_ref().unwrap().get("object"), Some("Q"));
    }

    #[test]
    fn extension_over_added_objects() {
        let pd = sample_nice_pair();
        let ext = extend_system_c(&pd, frame(3)).unwrap();
        assert!(ext.report.fully_passed(), "{}", ext.report.to_text());
        let p = *pd.atlases.keys().find(|x| x.tag == 1).unwrap();
        assert_eq!(ext.lattice(&p).size(), 3);
        assert_eq!(ext.lattice(&pd.atlases.keys().find(|x| x.tag == 2).copied().unwrap()).size(), 9);
    }

    #[test]
    fn hypercover_search_outcomes() {
        let rep = check_exceptional_pair(&sample_exceptional_pair());
        assert!(rep.fully_passed(), "{}", rep.to_text());
        let rep = check_exceptional_pair(&isos_in_all_pair());
        assert_eq!(rep.status("pair.S_in_E"), Some(Status::Fail));
        assert_eq!(rep.status("pair.hypercovers"), Some(Status::ResourceLimit));
        assert!(rep.check("pair.hypercovers").unwrap().detail.as_ref().unwrap().contains("2->1[0,0]"));
    }

    #[test]
    fn codescent_extension_is_fiberwise_join() {
        let pd = sample_exceptional_pair();
        let sys = frame(2);
        let s = GeometricSetup::new(Arc::clone(&pd.small_cat), finset::all_maps());
        let ns = NagataSetup::new(s, finset::all_maps(), finset::bijective()).finset_middles();
        let sh = build_shriek(&ns, Arc::clone(&sys)).unwrap();
        let ext = extend_system_e(&pd, &*sys, &sh).unwrap();
        assert!(ext.report.fully_passed(), "{}", ext.report.to_text());
        let l = FiniteLattice::chain(2);
        for (f, m) in &ext.maps {
            // read each side through its atlas: a closed element is constant on fibers of the atlas
            let (y, qy) = &ext.lattices[&f.src];
            let (x, qx) = &ext.lattices[&f.dst];
            let ly = FiniteLattice::power(&l, y.src.size);
            let lx = FiniteLattice::power(&l, x.src.size);
            for i in qy.sub.lattice.elements() {
                let e = ly.components(qy.sub.embed[i]);
                let mut on_base = vec![l.bottom(); f.src.size];
                for (k, &v) in e.iter().enumerate() {
                    on_base[y.map[k]] = v;
                }
                let mut want = vec![l.bottom(); f.dst.size];
                for (k, &v) in on_base.iter().enumerate() {
                    want[f.map[k]] = l.join(want[f.map[k]], v);
                }
                let got = lx.components(qx.sub.embed[m.apply(i)]);
                let got_base: Vec<usize> = (0..f.dst.size)
                    .map(|t| got[(0..x.src.size).find(|&k| x.map[k] == t).unwrap()])
                    .collect();
                assert_eq!(got_base, want, "{f}");
            }
        }
    }

    #[test]
    fn localization_instances() {
        assert!(check_localization_premises(&interval_instance()).fully_passed());
        assert!(check_localization_premises(&cech_pair_instance()).fully_passed());
        let r = check_localization_premises(&with_unreached_object(&interval_instance()));
        // the new object's identity is also an unreached 1- and 2-simplex
        assert_eq!(
            r.failed_ids(),
            vec!["localize.surjective.0", "localize.surjective.1", "localize.surjective.2"]
        );
        let r = check_localization_premises(&discrete_fiber_instance());
        assert_eq!(r.failed_ids(), vec!["localize.fiber_products"]);
        let r = check_localization_premises(&cech_pair_without_overlap());
        assert_eq!(r.failed_ids(), vec!["localize.fiber_products"]);
        let w = r.check("localize.fiber_products").unwrap().witness.clone().unwrap();
        assert_eq!((w.get("a"), w.get("b")), (Some("{0,1}"), Some("{1,2}")));
    }
}
