//! Spans `X <- W -> Y` with right leg in `E`, their composition by pullback,
//! the homotopy category of correspondences, coproducts and tensor edges.

use crate::category::Category;
use crate::fincat::{check_category, FinCategory, FinCategoryBuilder, FunctorData, MorId, ObjId};
use crate::finset::SetObj;
use crate::report::{CheckBuilder, VerificationReport, Witness};
use crate::setup::{pullback, GeometricSetup, SetupError};
use itertools::Itertools;
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use thiserror::Error;

/// `X <-left- W -right-> Y`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span<O, M> {
    pub apex: O,
    pub left: M,
    pub right: M,
}

impl<O: Clone, M: Clone> Span<O, M> {
    pub fn new(apex: O, left: M, right: M) -> Self {
        Self { apex, left, right }
    }
}

pub type SpanOf<C> = Span<<C as Category>::Obj, <C as Category>::Mor>;

pub fn span_source<C: Category>(c: &C, s: &SpanOf<C>) -> C::Obj {
    c.target(&s.left)
}

pub fn span_target<C: Category>(c: &C, s: &SpanOf<C>) -> C::Obj {
    c.target(&s.right)
}

pub fn identity_span<C: Category>(c: &C, x: &C::Obj) -> SpanOf<C> {
    let id = c.identity(x);
    Span::new(x.clone(), id.clone(), id)
}

pub fn span_label<C: Category>(c: &C, s: &SpanOf<C>) -> String {
    format!("[{} | {}]", c.mor_label(&s.left), c.mor_label(&s.right))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpanError {
    #[error("spans {a} and {b} are not composable")]
    NotComposable { a: String, b: String },
    #[error("right leg {0} is not in the edge class")]
    NotInE(String),
    #[error(transparent)]
    Setup(#[from] SetupError),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("{0}")]
    Malformed(String),
}

/// The span `a` followed by `b`: apex is the pullback of `a.right` and `b.left`.
pub fn compose_spans<C: Category>(
    s: &GeometricSetup<C>,
    a: &SpanOf<C>,
    b: &SpanOf<C>,
) -> Result<SpanOf<C>, SpanError> {
    let c = &*s.cat;
    if c.target(&a.right) != c.target(&b.left) {
        return Err(SpanError::NotComposable {
            a: span_label(c, a),
            b: span_label(c, b),
        });
    }
    for r in [&a.right, &b.right] {
        if !s.in_e(r) {
            return Err(SpanError::NotInE(c.mor_label(r)));
        }
    }
    let sq = pullback(s, &a.right, &b.left)?;
    finish_composite(s, a, b, &sq.apex, &sq.legs)
}

// Same as `compose_spans` with the oracle trusted; used inside bulk sweeps
// after the setup itself has been checked.
fn compose_fast<C: Category>(
    s: &GeometricSetup<C>,
    a: &SpanOf<C>,
    b: &SpanOf<C>,
) -> Result<SpanOf<C>, SpanError> {
    let c = &*s.cat;
    let sq = c.pullback(&a.right, &b.left).ok_or_else(|| SpanError::NotComposable {
        a: span_label(c, a),
        b: span_label(c, b),
    })?;
    finish_composite(s, a, b, &sq.apex, &sq.legs)
}

fn finish_composite<C: Category>(
    s: &GeometricSetup<C>,
    a: &SpanOf<C>,
    b: &SpanOf<C>,
    apex: &C::Obj,
    legs: &[C::Mor],
) -> Result<SpanOf<C>, SpanError> {
    let c = &*s.cat;
    let out = Span::new(apex.clone(), c.comp(&a.left, &legs[0]), c.comp(&b.right, &legs[1]));
    if !s.in_e(&out.right) {
        return Err(SpanError::NotInE(c.mor_label(&out.right)));
    }
    Ok(out)
}

/// An isomorphism of apexes commuting with both legs.
pub fn span_iso<C: Category>(c: &C, a: &SpanOf<C>, b: &SpanOf<C>) -> Option<C::Mor> {
    if c.target(&a.left) != c.target(&b.left) || c.target(&a.right) != c.target(&b.right) {
        return None;
    }
    c.find_iso_over(
        &a.apex,
        &b.apex,
        &[a.left.clone(), a.right.clone()],
        &[b.left.clone(), b.right.clone()],
    )
}

/// Apex sets `{0..k}` for `k <= bound`.
pub fn finset_apexes(bound: usize) -> Vec<SetObj> {
    (0..=bound).map(SetObj::n).collect()
}

/// Every span `x <- w -> y` with `w` among `apexes` and right leg in `E`.
pub fn spans_between<C: Category>(
    s: &GeometricSetup<C>,
    x: &C::Obj,
    y: &C::Obj,
    apexes: &[C::Obj],
) -> Vec<SpanOf<C>> {
    let c = &*s.cat;
    let mut out = Vec::new();
    for w in apexes {
        let rights: Vec<C::Mor> = c.hom(w, y).into_iter().filter(|f| s.in_e(f)).collect();
        for g in c.hom(w, x) {
            for f in &rights {
                out.push(Span::new(w.clone(), g.clone(), f.clone()));
            }
        }
    }
    out
}

/// An isomorphism class of spans: a representative and every enumerated member.
#[derive(Clone, Debug)]
pub struct SpanClass<O, M> {
    pub rep: Span<O, M>,
    pub members: Vec<Span<O, M>>,
}

pub type SpanClassOf<C> = SpanClass<<C as Category>::Obj, <C as Category>::Mor>;

/// Partitions the spans between `x` and `y` into isomorphism classes.
pub fn span_classes<C: Category>(
    s: &GeometricSetup<C>,
    x: &C::Obj,
    y: &C::Obj,
    apexes: &[C::Obj],
) -> Vec<SpanClassOf<C>> {
    let c = &*s.cat;
    let mut classes: Vec<SpanClassOf<C>> = Vec::new();
    for sp in spans_between(s, x, y, apexes) {
        match classes.iter_mut().find(|k| span_iso(c, &sp, &k.rep).is_some()) {
            Some(k) => k.members.push(sp),
            None => classes.push(SpanClass {
                rep: sp.clone(),
                members: vec![sp],
            }),
        }
    }
    classes
}

fn class_index<C: Category>(c: &C, classes: &[SpanClassOf<C>], sp: &SpanOf<C>) -> Option<usize> {
    classes.iter().position(|k| span_iso(c, sp, &k.rep).is_some())
}

#[derive(Clone, Debug)]
pub struct HoCatConfig<O> {
    pub apexes: Vec<O>,
    pub max_classes: usize,
    /// Member pairs composed per pair of classes when checking well-definedness.
    pub max_member_pairs: usize,
}

impl<O: Clone> HoCatConfig<O> {
    pub fn new(apexes: Vec<O>) -> Self {
        Self {
            apexes,
            max_classes: 20_000,
            max_member_pairs: 4096,
        }
    }
}

impl HoCatConfig<SetObj> {
    pub fn finset(bound: usize) -> Self {
        Self::new(finset_apexes(bound))
    }
}

/// The homotopy category of correspondences over the window, with span classes
/// indexed by morphism id.
pub struct HoCat<C: Category> {
    pub cat: Arc<FinCategory>,
    pub objects: Vec<C::Obj>,
    pub classes: Vec<SpanClassOf<C>>,
    pub obj_of: HashMap<C::Obj, ObjId>,
    /// Well-definedness and category-law checks made while building.
    pub report: VerificationReport,
}

impl<C: Category> HoCat<C> {
    pub fn class_of(&self, c: &C, sp: &SpanOf<C>) -> Option<MorId> {
        let (x, y) = (self.obj_of.get(&span_source(c, sp))?, self.obj_of.get(&span_target(c, sp))?);
        self.cat
            .hom(x, y)
            .into_iter()
            .find(|m| span_iso(c, sp, &self.classes[m.idx()].rep).is_some())
    }

    pub fn hom_count(&self, x: &C::Obj, y: &C::Obj) -> usize {
        match (self.obj_of.get(x), self.obj_of.get(y)) {
            (Some(x), Some(y)) => self.cat.hom(x, y).len(),
            _ => 0,
        }
    }
}

/// Builds the homotopy category; fails with a resource error if a composite of
/// representatives falls outside the enumerated classes.
pub fn homotopy_category<C: Category>(
    s: &GeometricSetup<C>,
    cfg: &HoCatConfig<C::Obj>,
) -> Result<HoCat<C>, SpanError> {
    let c = &*s.cat;
    let objects = c.window();
    let mut b = FinCategoryBuilder::new(format!("hCorr({})", s.e.name()));
    let mut obj_of = HashMap::new();
    for x in &objects {
        let id = b
            .object(c.obj_label(x))
            .map_err(|e| SpanError::Malformed(e.to_string()))?;
        obj_of.insert(x.clone(), id);
    }
    let mut classes: Vec<SpanClassOf<C>> = Vec::new();
    let mut by_pair: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    let pairs: Vec<(usize, usize)> = (0..objects.len()).cartesian_product(0..objects.len()).collect();
    let found: Vec<Vec<SpanClassOf<C>>> = pairs
        .par_iter()
        .map(|&(i, j)| span_classes(s, &objects[i], &objects[j], &cfg.apexes))
        .collect();
    for (&(i, j), ks) in pairs.iter().zip(found) {
        for k in ks {
            by_pair.entry((i, j)).or_default().push(classes.len());
            classes.push(k);
            if classes.len() > cfg.max_classes {
                return Err(SpanError::ResourceLimit(format!(
                    "more than {} span classes",
                    cfg.max_classes
                )));
            }
        }
    }
    for (n, k) in classes.iter().enumerate() {
        let (x, y) = (span_source(c, &k.rep), span_target(c, &k.rep));
        let m = b
            .morphism(span_label(c, &k.rep), obj_of[&x], obj_of[&y])
            .map_err(|e| SpanError::Malformed(e.to_string()))?;
        debug_assert_eq!(m.idx(), n);
    }
    for (i, x) in objects.iter().enumerate() {
        let idc = class_index(c, &classes_of(&classes, &by_pair, i, i), &identity_span(c, x))
            .map(|p| by_pair[&(i, i)][p])
            .ok_or_else(|| {
                SpanError::ResourceLimit(format!("identity span of {} is outside the apex set", c.obj_label(x)))
            })?;
        b.identity(ObjId(i as u32), MorId(idc as u32))
            .map_err(|e| SpanError::Malformed(e.to_string()))?;
    }

    // composition of representatives, and of members for well-definedness
    let no = objects.len();
    let triples: Vec<(usize, usize, usize)> = (0..no)
        .cartesian_product(0..no)
        .cartesian_product(0..no)
        .map(|((i, j), k)| (i, j, k))
        .collect();
    let empty = Vec::new();
    type Entry = (usize, usize, usize);
    let results: Vec<Result<(Vec<Entry>, Vec<Witness>, bool), SpanError>> = triples
        .par_iter()
        .map(|&(i, j, k)| {
            let ab = by_pair.get(&(i, j)).unwrap_or(&empty);
            let bc = by_pair.get(&(j, k)).unwrap_or(&empty);
            let target = classes_of(&classes, &by_pair, i, k);
            let mut entries = Vec::new();
            let mut bad = Vec::new();
            let mut capped = false;
            for &fa in ab {
                for &gb in bc {
                    let comp = compose_fast(s, &classes[fa].rep, &classes[gb].rep)?;
                    let h = class_index(c, &target, &comp).ok_or_else(|| {
                        SpanError::ResourceLimit(format!(
                            "composite of {} then {} has apex {} outside the apex set",
                            span_label(c, &classes[fa].rep),
                            span_label(c, &classes[gb].rep),
                            c.obj_label(&comp.apex)
                        ))
                    })?;
                    let h = by_pair[&(i, k)][h];
                    entries.push((gb, fa, h));
                    let (ma, mb) = (&classes[fa].members, &classes[gb].members);
                    if ma.len() * mb.len() > cfg.max_member_pairs {
                        capped = true;
                    }
                    for (x, y) in ma
                        .iter()
                        .cartesian_product(mb.iter())
                        .take(cfg.max_member_pairs)
                    {
                        let m = compose_fast(s, x, y)?;
                        if span_iso(c, &m, &classes[h].rep).is_none() {
                            bad.push(
                                Witness::new()
                                    .with("first", span_label(c, x))
                                    .with("then", span_label(c, y)),
                            );
                        }
                    }
                }
            }
            Ok((entries, bad, capped))
        })
        .collect();
    let mut wd = CheckBuilder::new(
        "hocat.well_defined",
        "composition does not depend on class representatives",
    );
    let mut any_capped = false;
    for r in results {
        let (entries, bad, capped) = r?;
        any_capped |= capped;
        for (g, f, h) in entries {
            b.compose(MorId(g as u32), MorId(f as u32), MorId(h as u32))
                .map_err(|e| SpanError::Malformed(e.to_string()))?;
            wd.observe(true, Witness::new);
        }
        for w in bad {
            wd.fail(w);
        }
    }
    if any_capped {
        wd.limit(format!("member pairs capped at {} per class pair", cfg.max_member_pairs));
    }
    let cat = Arc::new(b.build().map_err(|e| SpanError::Malformed(e.to_string()))?);
    let mut report = VerificationReport::new(format!("homotopy category ({})", s.e.name()));
    report.add(wd);
    report.absorb("hocat", check_category(&cat));
    Ok(HoCat {
        cat,
        objects,
        classes,
        obj_of,
        report,
    })
}

fn classes_of<O: Clone, M: Clone>(
    classes: &[SpanClass<O, M>],
    by_pair: &BTreeMap<(usize, usize), Vec<usize>>,
    i: usize,
    j: usize,
) -> Vec<SpanClass<O, M>> {
    by_pair
        .get(&(i, j))
        .map(|v| v.iter().map(|&n| classes[n].clone()).collect())
        .unwrap_or_default()
}

/// Associativity and unit laws of span composition up to apex isomorphism,
/// over class representatives with apex in `apexes`. Composites are unbounded.
pub fn check_span_laws<C: Category>(s: &GeometricSetup<C>, apexes: &[C::Obj]) -> VerificationReport {
    let c = &*s.cat;
    let w = c.window();
    let mut reps: HashMap<(usize, usize), Vec<SpanOf<C>>> = HashMap::new();
    for (i, x) in w.iter().enumerate() {
        for (j, y) in w.iter().enumerate() {
            reps.insert(
                (i, j),
                span_classes(s, x, y, apexes).into_iter().map(|k| k.rep).collect(),
            );
        }
    }
    let mut rep = VerificationReport::new(format!("span laws ({})", s.e.name()));

    let mut units = CheckBuilder::new("span.units", "identity spans are two-sided units up to isomorphism");
    for (&(i, j), v) in reps.iter().sorted_by_key(|(k, _)| **k) {
        let (ix, iy) = (identity_span(c, &w[i]), identity_span(c, &w[j]));
        for a in v {
            let ok = matches!(compose_fast(s, &ix, a), Ok(l) if span_iso(c, &l, a).is_some())
                && matches!(compose_fast(s, a, &iy), Ok(r) if span_iso(c, &r, a).is_some());
            units.observe(ok, || Witness::new().with("span", span_label(c, a)));
        }
    }
    rep.add(units);

    let n = w.len();
    let quads: Vec<(usize, usize, usize, usize)> = (0..n)
        .cartesian_product(0..n)
        .cartesian_product((0..n).cartesian_product(0..n))
        .map(|((a, b), (d, e))| (a, b, d, e))
        .collect();
    let outcomes: Vec<(usize, Option<Witness>)> = quads
        .par_iter()
        .map(|&(i, j, k, l)| {
            let mut count = 0;
            for a in &reps[&(i, j)] {
                for b in &reps[&(j, k)] {
                    let ab = compose_fast(s, a, b);
                    for d in &reps[&(k, l)] {
                        count += 1;
                        let lhs = ab.as_ref().ok().and_then(|ab| compose_fast(s, ab, d).ok());
                        let rhs = compose_fast(s, b, d).ok().and_then(|bd| compose_fast(s, a, &bd).ok());
                        let ok = match (&lhs, &rhs) {
                            (Some(x), Some(y)) => span_iso(c, x, y).is_some(),
                            _ => false,
                        };
                        if !ok {
                            return (
                                count,
                                Some(
                                    Witness::new()
                                        .with("a", span_label(c, a))
                                        .with("b", span_label(c, b))
                                        .with("c", span_label(c, d)),
                                ),
                            );
                        }
                    }
                }
            }
            (count, None)
        })
        .collect();
    let mut assoc = CheckBuilder::new(
        "span.associativity",
        "both bracketings of composable span triples are isomorphic",
    );
    let mut total = 0;
    for (cnt, w) in outcomes {
        total += cnt;
        match w {
            Some(w) => assoc.fail(w),
            None => {
                assoc.observe(true, Witness::new);
            }
        }
    }
    assoc.detail(format!("{total} triples"));
    rep.add(assoc);
    rep
}

/// A candidate coproduct of `x` and `y` in the correspondence category.
#[derive(Clone, Debug)]
pub struct CoproductCandidate<O, M> {
    pub apex: O,
    pub inj: [Span<O, M>; 2],
}

pub type CoproductOf<C> = CoproductCandidate<<C as Category>::Obj, <C as Category>::Mor>;

/// Initial, and every morphism into it is an isomorphism (the empty set).
fn is_strict_initial<C: Category>(c: &C, x: &C::Obj) -> bool {
    c.window().iter().all(|t| {
        c.hom(x, t).len() == 1 && c.hom(t, x).iter().all(|f| c.is_iso(f))
    })
}

/// `x <- x*y = x*y` and `y <- x*y = x*y`; when one side is strictly initial the
/// other side with its identity span is used instead.
pub fn coproduct_candidate<C: Category>(
    s: &GeometricSetup<C>,
    x: &C::Obj,
    y: &C::Obj,
) -> Result<CoproductOf<C>, SpanError> {
    let c = &*s.cat;
    let from_initial = |e: &C::Obj, other: &C::Obj| -> Result<SpanOf<C>, SpanError> {
        let u = c.hom(e, other).into_iter().next().expect("initial object has a map");
        if !s.in_e(&u) {
            return Err(SpanError::NotInE(c.mor_label(&u)));
        }
        Ok(Span::new(e.clone(), c.identity(e), u))
    };
    if is_strict_initial(c, x) {
        return Ok(CoproductCandidate {
            apex: y.clone(),
            inj: [from_initial(x, y)?, identity_span(c, y)],
        });
    }
    if is_strict_initial(c, y) {
        return Ok(CoproductCandidate {
            apex: x.clone(),
            inj: [identity_span(c, x), from_initial(y, x)?],
        });
    }
    let p = c.product(x, y).ok_or_else(|| {
        SpanError::Malformed(format!("no product of {} and {}", c.obj_label(x), c.obj_label(y)))
    })?;
    let id = c.identity(&p.apex);
    Ok(CoproductCandidate {
        apex: p.apex.clone(),
        inj: [
            Span::new(p.apex.clone(), p.legs[0].clone(), id.clone()),
            Span::new(p.apex.clone(), p.legs[1].clone(), id),
        ],
    })
}

pub fn check_coproduct<C: Category>(
    s: &GeometricSetup<C>,
    x: &C::Obj,
    y: &C::Obj,
    apexes: &[C::Obj],
) -> Result<VerificationReport, SpanError> {
    let cand = coproduct_candidate(s, x, y)?;
    Ok(check_coproduct_with(s, &cand, x, y, apexes))
}

/// For every window object `t` and classes `a: x -> t`, `b: y -> t`, counts the
/// classes `m: apex -> t` with `m ∘ ι_x ≅ a` and `m ∘ ι_y ≅ b`.
pub fn check_coproduct_with<C: Category>(
    s: &GeometricSetup<C>,
    cand: &CoproductOf<C>,
    x: &C::Obj,
    y: &C::Obj,
    apexes: &[C::Obj],
) -> VerificationReport {
    let c = &*s.cat;
    let mut rep = VerificationReport::new(format!(
        "coproduct of {} and {} ({})",
        c.obj_label(x),
        c.obj_label(y),
        s.e.name()
    ));
    let mut exists = CheckBuilder::new("coproduct.existence", "every pair of spans has a mediating span");
    let mut unique = CheckBuilder::new("coproduct.uniqueness", "mediating spans are unique up to isomorphism");
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    let mut unclassified = 0usize;
    for t in c.window() {
        let ax = span_classes(s, x, &t, apexes);
        let by = span_classes(s, y, &t, apexes);
        let ms = span_classes(s, &cand.apex, &t, apexes);
        let mut hits: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (mi, m) in ms.iter().enumerate() {
            let lx = compose_fast(s, &cand.inj[0], &m.rep).ok().and_then(|sp| class_index(c, &ax, &sp));
            let ly = compose_fast(s, &cand.inj[1], &m.rep).ok().and_then(|sp| class_index(c, &by, &sp));
            match (lx, ly) {
                (Some(i), Some(j)) => hits.entry((i, j)).or_default().push(mi),
                _ => unclassified += 1,
            }
        }
        for (i, a) in ax.iter().enumerate() {
            for (j, b) in by.iter().enumerate() {
                let found = hits.get(&(i, j)).map(Vec::as_slice).unwrap_or(&[]);
                *histogram.entry(found.len()).or_default() += 1;
                let wit = || {
                    Witness::new()
                        .with("test", c.obj_label(&t))
                        .with("a", span_label(c, &a.rep))
                        .with("b", span_label(c, &b.rep))
                };
                exists.observe(!found.is_empty(), wit);
                if found.len() > 1 {
                    unique.fail(
                        wit()
                            .with("mediators", found.len())
                            .with("m1", span_label(c, &ms[found[0]].rep))
                            .with("m2", span_label(c, &ms[found[1]].rep)),
                    );
                } else {
                    unique.observe(true, Witness::new);
                }
            }
        }
    }
    let hist = histogram
        .iter()
        .map(|(k, v)| format!("{k} mediators: {v} pairs"))
        .join(", ");
    exists.detail(format!(
        "apex bound applies to both pairs and mediators; {hist}; {unclassified} mediators with restrictions outside the bound"
    ));
    unique.detail(hist);
    rep.add(exists);
    rep.add(unique);
    rep
}

/// One fiber of a tensor edge: `Y_i` with maps to the sources over `i` and to `Z_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorLeg<O, M> {
    pub apex: O,
    /// One map per source index `j` with `α(j) = i`, in increasing `j`.
    pub to_sources: Vec<M>,
    pub to_target: M,
}

/// An edge of the tensor layer over a map of pointed finite sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorEdge<O, M> {
    pub sources: Vec<O>,
    pub targets: Vec<O>,
    /// `α(j)` for each source index; `None` is the base point.
    pub alpha: Vec<Option<usize>>,
    pub legs: Vec<TensorLeg<O, M>>,
}

pub type TensorEdgeOf<C> = TensorEdge<<C as Category>::Obj, <C as Category>::Mor>;

impl<O: Clone, M: Clone> TensorEdge<O, M> {
    pub fn fiber(&self, i: usize) -> Vec<usize> {
        (0..self.alpha.len()).filter(|&j| self.alpha[j] == Some(i)).collect()
    }

    /// No source goes to the base point.
    pub fn is_active(&self) -> bool {
        self.alpha.iter().all(Option::is_some)
    }
}

impl<O: Clone + PartialEq, M: Clone> TensorEdge<O, M> {
    /// The same edge with `Y_i` replaced along an isomorphism `phi: Y_i -> Y'`.
    pub fn transport<C: Category<Obj = O, Mor = M>>(&self, c: &C, i: usize, phi: &M) -> Option<Self> {
        let inv = c.inverse(phi)?;
        let mut out = self.clone();
        let leg = &mut out.legs[i];
        if c.source(phi) != leg.apex {
            return None;
        }
        leg.apex = c.target(phi);
        for m in &mut leg.to_sources {
            *m = c.comp(m, &inv);
        }
        leg.to_target = c.comp(&leg.to_target, &inv);
        Some(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CocartesianReason {
    /// `Y_i -> Z_i` is not an isomorphism.
    TargetNotIso { i: usize, map: String },
    /// `Y_i` with its maps is not a product of the sources over `i`.
    NotProduct { i: usize, reason: String },
}

impl std::fmt::Display for CocartesianReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::TargetNotIso { i, map } => write!(f, "(1) fiber {i}: {map} is not an isomorphism"),
            Self::NotProduct { i, reason } => write!(f, "(2) fiber {i}: not a product, {reason}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub cocartesian: bool,
    pub reasons: Vec<CocartesianReason>,
}

/// Checks that `apex` with `legs` is a product of the targets of `legs`,
/// against every probe object (the empty family asks for a terminal object).
pub fn product_defect<C: Category>(c: &C, apex: &C::Obj, legs: &[C::Mor]) -> Option<String> {
    let factors: Vec<C::Obj> = legs.iter().map(|l| c.target(l)).collect();
    for t in c.probe_objects() {
        let tuples: Vec<Vec<C::Mor>> = factors
            .iter()
            .map(|x| c.hom(&t, x))
            .multi_cartesian_product()
            .collect();
        let tuples = if factors.is_empty() { vec![Vec::new()] } else { tuples };
        for maps in tuples {
            let n = c.factorizations(apex, legs, &t, &maps).len();
            if n != 1 {
                return Some(format!(
                    "{n} factorizations from {} of ({})",
                    c.obj_label(&t),
                    maps.iter().map(|m| c.mor_label(m)).join(", ")
                ));
            }
        }
    }
    None
}

pub fn validate_tensor_edge<C: Category>(c: &C, e: &TensorEdgeOf<C>) -> Result<(), SpanError> {
    let bad = |m: String| Err(SpanError::Malformed(m));
    if e.alpha.len() != e.sources.len() {
        return bad("α must have one value per source".into());
    }
    if e.legs.len() != e.targets.len() {
        return bad("one leg per target is required".into());
    }
    if let Some(j) = e.alpha.iter().position(|a| matches!(a, Some(i) if *i >= e.targets.len())) {
        return bad(format!("α sends source {j} outside the targets"));
    }
    for (i, leg) in e.legs.iter().enumerate() {
        let fib = e.fiber(i);
        if fib.len() != leg.to_sources.len() {
            return bad(format!("fiber {i} has {} sources but {} maps", fib.len(), leg.to_sources.len()));
        }
        for (j, m) in fib.iter().zip(&leg.to_sources) {
            if c.source(m) != leg.apex || c.target(m) != e.sources[*j] {
                return bad(format!("map {} does not go from Y_{i} to X_{j}", c.mor_label(m)));
            }
        }
        if c.source(&leg.to_target) != leg.apex || c.target(&leg.to_target) != e.targets[i] {
            return bad(format!("map {} does not go from Y_{i} to Z_{i}", c.mor_label(&leg.to_target)));
        }
    }
    Ok(())
}

/// Cocartesian iff each `Y_i -> Z_i` is an isomorphism and each `Y_i` is the
/// product of the sources over `i`.
pub fn classify_cocartesian<C: Category>(
    s: &GeometricSetup<C>,
    e: &TensorEdgeOf<C>,
) -> Result<Classification, SpanError> {
    let c = &*s.cat;
    validate_tensor_edge(c, e)?;
    let mut reasons = Vec::new();
    for (i, leg) in e.legs.iter().enumerate() {
        if !c.is_iso(&leg.to_target) {
            reasons.push(CocartesianReason::TargetNotIso {
                i,
                map: c.mor_label(&leg.to_target),
            });
        }
        if let Some(reason) = product_defect(c, &leg.apex, &leg.to_sources) {
            reasons.push(CocartesianReason::NotProduct { i, reason });
        }
    }
    Ok(Classification {
        cocartesian: reasons.is_empty(),
        reasons,
    })
}

/// The window of `C` and its opposite, both as explicit tables.
fn window_tables<C: Category>(c: &C) -> crate::fincat::Materialized<C> {
    crate::fincat::materialize(c, "C")
}

/// `f: x -> y` goes to the span `y <-f- x = x`, a functor `C^op -> hCorr`.
pub fn pi_all<C: Category>(s: &GeometricSetup<C>, ho: &HoCat<C>) -> Result<FunctorData, SpanError> {
    let c = &*s.cat;
    let m = window_tables(c);
    let op = Arc::new(m.cat.opposite());
    let mut mm = Vec::new();
    for f in &m.mors {
        let sp = Span::new(c.source(f), f.clone(), c.identity(&c.source(f)));
        mm.push(ho.class_of(c, &sp).ok_or_else(|| {
            SpanError::ResourceLimit(format!("{} has no class", span_label(c, &sp)))
        })?);
    }
    let om = m.objs.iter().map(|x| ho.obj_of[x]).collect();
    FunctorData::new(op, Arc::clone(&ho.cat), om, mm).map_err(|e| SpanError::Malformed(e.to_string()))
}

/// `f: x -> y` in `E` goes to the span `x = x -f-> y`, a functor `C_E -> hCorr`.
pub fn pi_e<C: Category>(s: &GeometricSetup<C>, ho: &HoCat<C>) -> Result<FunctorData, SpanError> {
    let c = &*s.cat;
    let m = window_tables(c);
    let (sub, kept) = m
        .cat
        .wide_subcategory(format!("C_{}", s.e.name()), |f| s.in_e(&m.mors[f.idx()]))
        .map_err(|e| SpanError::Malformed(e.to_string()))?;
    let mut mm = Vec::new();
    for f in kept {
        let f = &m.mors[f.idx()];
        let sp = Span::new(c.source(f), c.identity(&c.source(f)), f.clone());
        mm.push(ho.class_of(c, &sp).ok_or_else(|| {
            SpanError::ResourceLimit(format!("{} has no class", span_label(c, &sp)))
        })?);
    }
    let om = m.objs.iter().map(|x| ho.obj_of[x]).collect();
    FunctorData::new(Arc::new(sub), Arc::clone(&ho.cat), om, mm)
        .map_err(|e| SpanError::Malformed(e.to_string()))
}

/// Checks both structure functors into the homotopy category.
pub fn check_structure_functors<C: Category>(
    s: &GeometricSetup<C>,
    ho: &HoCat<C>,
) -> Result<VerificationReport, SpanError> {
    let mut rep = VerificationReport::new(format!("structure functors ({})", s.e.name()));
    rep.absorb("pi_all", crate::fincat::check_functor(&pi_all(s, ho)?));
    rep.absorb("pi_e", crate::fincat::check_functor(&pi_e(s, ho)?));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::EdgeClass;
    use crate::finset::{self, FinSet, Func};

    fn setup(max: usize, e: EdgeClass<FinSet>) -> GeometricSetup<FinSet> {
        GeometricSetup::new(Arc::new(FinSet::upto(max)), e)
    }

    fn sp(w: usize, x: usize, y: usize, l: &[usize], r: &[usize]) -> Span<SetObj, Func> {
        Span::new(SetObj::n(w), Func::of(w, x, l), Func::of(w, y, r))
    }

    #[test]
    fn composition_examples() {
        let s = setup(3, finset::all_maps());
        let a = sp(1, 2, 1, &[0], &[0]);
        let b = sp(2, 1, 1, &[0, 0], &[0, 0]);
        let ab = compose_spans(&s, &a, &b).unwrap();
        assert_eq!(ab.apex.size, 2);
        assert_eq!(ab.left.map, vec![0, 0]);
        // identity legs on the right are a unit
        let id = identity_span(&*s.cat, &SetObj::n(1));
        let a1 = compose_spans(&s, &a, &id).unwrap();
        assert!(span_iso(&*s.cat, &a1, &a).is_some());
    }

    #[test]
    fn iso_left_leg_postcomposes() {
        let s = setup(2, finset::all_maps());
        let a = sp(2, 1, 2, &[0, 0], &[0, 0]);
        let swap = sp(2, 2, 2, &[1, 0], &[0, 1]);
        let ab = compose_spans(&s, &a, &swap).unwrap();
        let direct = Span::new(SetObj::n(2), a.left.clone(), Func::of(2, 2, &[1, 1]));
        assert!(span_iso(&*s.cat, &ab, &direct).is_some());
    }

    #[test]
    fn right_leg_outside_e_is_rejected() {
        let s = setup(2, finset::injective());
        let a = sp(1, 1, 2, &[0], &[0]);
        let b = sp(2, 2, 1, &[0, 1], &[0, 0]);
        assert!(compose_spans(&s, &a, &b).is_err());
    }

    #[test]
    fn point_hom_has_two_classes() {
        let s = setup(1, finset::all_maps());
        let ks = span_classes(&s, &SetObj::n(1), &SetObj::n(1), &finset_apexes(1));
        assert_eq!(ks.len(), 2);
        let ho = homotopy_category(&s, &HoCatConfig::finset(1)).unwrap();
        assert!(ho.report.fully_passed(), "{}", ho.report.to_text());
        assert_eq!(ho.hom_count(&SetObj::n(1), &SetObj::n(1)), 2);
    }

    #[test]
    fn class_counts_match_multisets() {
        // spans x <- w -> y up to iso are multisets on x*y
        let s = setup(2, finset::all_maps());
        let choose = |n: usize, k: usize| -> usize { (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1)) };
        for (x, y) in [(1, 1), (1, 2), (2, 2), (0, 2)] {
            let ks = span_classes(&s, &SetObj::n(x), &SetObj::n(y), &finset_apexes(4));
            let expect: usize = (0..=4).map(|k| if x * y == 0 { (k == 0) as usize } else { choose(x * y + k - 1, k) }).sum();
            assert_eq!(ks.len(), expect, "{x} {y}");
        }
    }

    #[test]
    fn classes_are_disjoint_and_cover() {
        let s = setup(2, finset::all_maps());
        let (x, y) = (SetObj::n(2), SetObj::n(1));
        let all = spans_between(&s, &x, &y, &finset_apexes(3));
        let ks = span_classes(&s, &x, &y, &finset_apexes(3));
        assert_eq!(ks.iter().map(|k| k.members.len()).sum::<usize>(), all.len());
        for (i, a) in ks.iter().enumerate() {
            for b in &ks[i + 1..] {
                assert!(span_iso(&*s.cat, &a.rep, &b.rep).is_none());
            }
        }
    }

    #[test]
    fn iso_edges_give_opposite_homs() {
        let s = setup(2, finset::bijective());
        let ho = homotopy_category(&s, &HoCatConfig::finset(2)).unwrap();
        assert!(ho.report.fully_passed(), "{}", ho.report.to_text());
        for x in 0..=2usize {
            for y in 0..=2usize {
                assert_eq!(ho.hom_count(&SetObj::n(x), &SetObj::n(y)), x.pow(y as u32));
            }
        }
        assert!(check_structure_functors(&s, &ho).unwrap().fully_passed());
    }

    #[test]
    fn injective_edges_count() {
        let s = setup(2, finset::injective());
        let ho = homotopy_category(&s, &HoCatConfig::finset(2)).unwrap();
        assert!(ho.report.fully_passed(), "{}", ho.report.to_text());
        for x in 0..=2usize {
            for y in 0..=2usize {
                assert_eq!(ho.hom_count(&SetObj::n(x), &SetObj::n(y)), (x + 1).pow(y as u32));
            }
        }
        assert!(check_structure_functors(&s, &ho).unwrap().fully_passed());
    }

    #[test]
    fn all_maps_overflow_is_a_resource_error() {
        let s = setup(2, finset::all_maps());
        assert!(matches!(
            homotopy_category(&s, &HoCatConfig::finset(2)),
            Err(SpanError::ResourceLimit(_))
        ));
    }

    #[test]
    fn span_laws_hold() {
        for e in [finset::all_maps(), finset::injective()] {
            let rep = check_span_laws(&setup(2, e), &finset_apexes(2));
            assert!(rep.fully_passed(), "{}", rep.to_text());
        }
    }

    #[test]
    fn coproduct_with_iso_edges_holds() {
        let s = setup(2, finset::bijective());
        let rep = check_coproduct(&s, &SetObj::n(1), &SetObj::n(2), &finset_apexes(2)).unwrap();
        assert!(rep.fully_passed(), "{}", rep.to_text());
    }

    #[test]
    fn coproduct_with_all_edges_has_witness() {
        let s = setup(2, finset::all_maps());
        let rep = check_coproduct(&s, &SetObj::n(1), &SetObj::n(1), &finset_apexes(2)).unwrap();
        assert!(!rep.passed());
        let w = rep.check("coproduct.existence").unwrap().witness.clone().unwrap();
        assert!(w.get("a").is_some() && w.get("b").is_some());
    }

    #[test]
    fn empty_summand_is_absorbed() {
        let s = setup(2, finset::all_maps());
        let cand = coproduct_candidate(&s, &SetObj::n(0), &SetObj::n(2)).unwrap();
        assert_eq!(cand.apex, SetObj::n(2));
        let rep = check_coproduct_with(&s, &cand, &SetObj::n(0), &SetObj::n(2), &finset_apexes(2));
        assert!(rep.fully_passed(), "{}", rep.to_text());
    }

    fn pair_edge(target: Func) -> TensorEdge<SetObj, Func> {
        // Y = X1 x X2 with X1 = X2 = 2, projections
        TensorEdge {
            sources: vec![SetObj::n(2), SetObj::n(2)],
            targets: vec![target.dst],
            alpha: vec![Some(0), Some(0)],
            legs: vec![TensorLeg {
                apex: SetObj::n(4),
                to_sources: vec![Func::of(4, 2, &[0, 0, 1, 1]), Func::of(4, 2, &[0, 1, 0, 1])],
                to_target: target,
            }],
        }
    }

    #[test]
    fn tensor_edges_classify() {
        let (cat, _) = FinSet::upto(2).with_extra(4, "4");
        let s = GeometricSetup::new(Arc::new(cat), finset::all_maps());
        let one = TensorEdge {
            sources: vec![SetObj::n(1)],
            targets: vec![SetObj::n(1)],
            alpha: vec![Some(0)],
            legs: vec![TensorLeg {
                apex: SetObj::n(1),
                to_sources: vec![Func::of(1, 1, &[0])],
                to_target: Func::of(1, 1, &[0]),
            }],
        };
        assert!(classify_cocartesian(&s, &one).unwrap().cocartesian);
        let e = pair_edge(Func::of(4, 4, &[3, 2, 1, 0]));
        assert!(classify_cocartesian(&s, &e).unwrap().cocartesian);
        let bad = pair_edge(Func::of(4, 2, &[0, 0, 1, 1]));
        let cl = classify_cocartesian(&s, &bad).unwrap();
        assert!(!cl.cocartesian);
        assert!(matches!(cl.reasons[..], [CocartesianReason::TargetNotIso { i: 0, .. }]));
    }

    #[test]
    fn ill_formed_edges_are_errors() {
        let s = setup(2, finset::all_maps());
        let mut e = pair_edge(Func::of(4, 4, &[0, 1, 2, 3]));
        e.alpha = vec![Some(0), None];
        assert!(matches!(classify_cocartesian(&s, &e), Err(SpanError::Malformed(_))));
    }
}
