//! The category interface used by every algorithm, plus generic limit search.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

/// A cone over a finite diagram: an apex with one leg per diagram object.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cone<O, M> {
    pub apex: O,
    pub legs: Vec<M>,
}

/// Chosen pullback of `f: X -> Z <- Y: g`; `legs = [P -> X, P -> Y]`.
pub type Square<O, M> = Cone<O, M>;

pub trait Category: Sync + Send + 'static {
    type Obj: Clone + Eq + Ord + Hash + Debug + Send + Sync;
    type Mor: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    fn source(&self, f: &Self::Mor) -> Self::Obj;
    fn target(&self, f: &Self::Mor) -> Self::Obj;
    fn identity(&self, x: &Self::Obj) -> Self::Mor;
    /// `g ∘ f`, or `None` when `target(f) != source(g)`.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Option<Self::Mor>;
    fn hom(&self, x: &Self::Obj, y: &Self::Obj) -> Vec<Self::Mor>;
    /// Objects quantified over by checks, in canonical order.
    fn window(&self) -> Vec<Self::Obj>;
    fn obj_label(&self, x: &Self::Obj) -> String;
    fn mor_label(&self, f: &Self::Mor) -> String;

    /// Test objects used when certifying universal properties.
    fn probe_objects(&self) -> Vec<Self::Obj> {
        self.window()
    }

    /// Candidate apexes for limit search.
    fn limit_candidates(&self) -> Vec<Self::Obj> {
        self.window()
    }

    fn comp(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor {
        self.compose(g, f).unwrap_or_else(|| {
            panic!(
                "composing non-composable {} after {}",
                self.mor_label(g),
                self.mor_label(f)
            )
        })
    }

    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor> {
        let (x, y) = (self.source(f), self.target(f));
        let (ix, iy) = (self.identity(&x), self.identity(&y));
        self.hom(&y, &x)
            .into_iter()
            .find(|g| self.compose(g, f) == Some(ix.clone()) && self.compose(f, g) == Some(iy.clone()))
    }

    fn is_iso(&self, f: &Self::Mor) -> bool {
        self.inverse(f).is_some()
    }

    fn is_identity(&self, f: &Self::Mor) -> bool {
        self.source(f) == self.target(f) && *f == self.identity(&self.source(f))
    }

    /// Monomorphism test against the probe objects.
    fn is_mono(&self, f: &Self::Mor) -> bool {
        let x = self.source(f);
        for t in self.probe_objects() {
            let hs = self.hom(&t, &x);
            let mut seen: HashMap<Self::Mor, &Self::Mor> = HashMap::new();
            for a in &hs {
                let fa = self.comp(f, a);
                if let Some(b) = seen.insert(fa, a) {
                    if b != a {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// All `u: test -> apex` with `legs[i] ∘ u = maps[i]`.
    fn factorizations(
        &self,
        apex: &Self::Obj,
        legs: &[Self::Mor],
        test: &Self::Obj,
        maps: &[Self::Mor],
    ) -> Vec<Self::Mor> {
        self.hom(test, apex)
            .into_iter()
            .filter(|u| {
                legs.iter()
                    .zip(maps)
                    .all(|(l, m)| self.compose(l, u).as_ref() == Some(m))
            })
            .collect()
    }

    /// The unique mediator into a limit cone, if it exists.
    fn factor(
        &self,
        apex: &Self::Obj,
        legs: &[Self::Mor],
        test: &Self::Obj,
        maps: &[Self::Mor],
    ) -> Option<Self::Mor> {
        let fs = self.factorizations(apex, legs, test, maps);
        if fs.len() == 1 {
            fs.into_iter().next()
        } else {
            None
        }
    }

    /// Chosen pullback of the cospan `f: X -> Z <- Y: g`.
    fn pullback(&self, f: &Self::Mor, g: &Self::Mor) -> Option<Square<Self::Obj, Self::Mor>> {
        search_pullback(self, f, g)
    }

    /// Chosen binary product.
    fn product(&self, x: &Self::Obj, y: &Self::Obj) -> Option<Cone<Self::Obj, Self::Mor>> {
        search_product(self, x, y)
    }

    /// An isomorphism `φ: a -> b` with `legs_b[i] ∘ φ = legs_a[i]`.
    fn find_iso_over(
        &self,
        a: &Self::Obj,
        b: &Self::Obj,
        legs_a: &[Self::Mor],
        legs_b: &[Self::Mor],
    ) -> Option<Self::Mor> {
        self.hom(a, b).into_iter().find(|phi| {
            legs_a
                .iter()
                .zip(legs_b)
                .all(|(la, lb)| self.compose(lb, phi).as_ref() == Some(la))
                && self.is_iso(phi)
        })
    }
}

impl<C: Category> Category for Arc<C> {
    type Obj = C::Obj;
    type Mor = C::Mor;
    fn source(&self, f: &Self::Mor) -> Self::Obj {
        (**self).source(f)
    }
    fn target(&self, f: &Self::Mor) -> Self::Obj {
        (**self).target(f)
    }
    fn identity(&self, x: &Self::Obj) -> Self::Mor {
        (**self).identity(x)
    }
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Option<Self::Mor> {
        (**self).compose(g, f)
    }
    fn hom(&self, x: &Self::Obj, y: &Self::Obj) -> Vec<Self::Mor> {
        (**self).hom(x, y)
    }
    fn window(&self) -> Vec<Self::Obj> {
        (**self).window()
    }
    fn obj_label(&self, x: &Self::Obj) -> String {
        (**self).obj_label(x)
    }
    fn mor_label(&self, f: &Self::Mor) -> String {
        (**self).mor_label(f)
    }
    fn probe_objects(&self) -> Vec<Self::Obj> {
        (**self).probe_objects()
    }
    fn limit_candidates(&self) -> Vec<Self::Obj> {
        (**self).limit_candidates()
    }
    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor> {
        (**self).inverse(f)
    }
    fn is_iso(&self, f: &Self::Mor) -> bool {
        (**self).is_iso(f)
    }
    fn is_mono(&self, f: &Self::Mor) -> bool {
        (**self).is_mono(f)
    }
    fn factorizations(
        &self,
        apex: &Self::Obj,
        legs: &[Self::Mor],
        test: &Self::Obj,
        maps: &[Self::Mor],
    ) -> Vec<Self::Mor> {
        (**self).factorizations(apex, legs, test, maps)
    }
    fn factor(
        &self,
        apex: &Self::Obj,
        legs: &[Self::Mor],
        test: &Self::Obj,
        maps: &[Self::Mor],
    ) -> Option<Self::Mor> {
        (**self).factor(apex, legs, test, maps)
    }
    fn pullback(&self, f: &Self::Mor, g: &Self::Mor) -> Option<Square<Self::Obj, Self::Mor>> {
        (**self).pullback(f, g)
    }
    fn product(&self, x: &Self::Obj, y: &Self::Obj) -> Option<Cone<Self::Obj, Self::Mor>> {
        (**self).product(x, y)
    }
    fn find_iso_over(
        &self,
        a: &Self::Obj,
        b: &Self::Obj,
        legs_a: &[Self::Mor],
        legs_b: &[Self::Mor],
    ) -> Option<Self::Mor> {
        (**self).find_iso_over(a, b, legs_a, legs_b)
    }
}

/// Why a proposed limit cone is not a limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeDefect<O, M> {
    NotCommuting,
    NoMediator { test: O, maps: Vec<M> },
    ManyMediators { test: O, maps: Vec<M>, count: usize },
}

/// Checks that `cone` is a pullback of `f, g` against every probe object.
pub fn certify_pullback<C: Category + ?Sized>(
    c: &C,
    f: &C::Mor,
    g: &C::Mor,
    cone: &Square<C::Obj, C::Mor>,
) -> Result<(), ConeDefect<C::Obj, C::Mor>> {
    let (p, q) = (&cone.legs[0], &cone.legs[1]);
    if c.compose(f, p).is_none() || c.compose(f, p) != c.compose(g, q) {
        return Err(ConeDefect::NotCommuting);
    }
    let (x, y) = (c.source(f), c.source(g));
    for t in c.probe_objects() {
        let mut counts: HashMap<(C::Mor, C::Mor), usize> = HashMap::new();
        for u in c.hom(&t, &cone.apex) {
            *counts.entry((c.comp(p, &u), c.comp(q, &u))).or_default() += 1;
        }
        let hy = c.hom(&t, &y);
        for a in c.hom(&t, &x) {
            let fa = c.comp(f, &a);
            for b in &hy {
                if c.comp(g, b) != fa {
                    continue;
                }
                match counts.get(&(a.clone(), b.clone())).copied().unwrap_or(0) {
                    1 => {}
                    0 => {
                        return Err(ConeDefect::NoMediator {
                            test: t,
                            maps: vec![a, b.clone()],
                        })
                    }
                    n => {
                        return Err(ConeDefect::ManyMediators {
                            test: t,
                            maps: vec![a, b.clone()],
                            count: n,
                        })
                    }
                }
            }
        }
    }
    Ok(())
}

/// Checks that `cone` is a binary product of `x, y` against every probe object.
pub fn certify_product<C: Category + ?Sized>(
    c: &C,
    x: &C::Obj,
    y: &C::Obj,
    cone: &Cone<C::Obj, C::Mor>,
) -> Result<(), ConeDefect<C::Obj, C::Mor>> {
    let (p, q) = (&cone.legs[0], &cone.legs[1]);
    if c.target(p) != *x || c.target(q) != *y {
        return Err(ConeDefect::NotCommuting);
    }
    for t in c.probe_objects() {
        let mut counts: HashMap<(C::Mor, C::Mor), usize> = HashMap::new();
        for u in c.hom(&t, &cone.apex) {
            *counts.entry((c.comp(p, &u), c.comp(q, &u))).or_default() += 1;
        }
        let hy = c.hom(&t, y);
        for a in c.hom(&t, x) {
            for b in &hy {
                match counts.get(&(a.clone(), b.clone())).copied().unwrap_or(0) {
                    1 => {}
                    0 => {
                        return Err(ConeDefect::NoMediator {
                            test: t,
                            maps: vec![a, b.clone()],
                        })
                    }
                    n => {
                        return Err(ConeDefect::ManyMediators {
                            test: t,
                            maps: vec![a, b.clone()],
                            count: n,
                        })
                    }
                }
            }
        }
    }
    Ok(())
}

/// First certified pullback among the candidate apexes, legs in hom order.
pub fn search_pullback<C: Category + ?Sized>(
    c: &C,
    f: &C::Mor,
    g: &C::Mor,
) -> Option<Square<C::Obj, C::Mor>> {
    if c.target(f) != c.target(g) {
        return None;
    }
    let (x, y) = (c.source(f), c.source(g));
    for p in c.limit_candidates() {
        let hy = c.hom(&p, &y);
        for a in c.hom(&p, &x) {
            let fa = c.comp(f, &a);
            for b in &hy {
                if c.comp(g, b) != fa {
                    continue;
                }
                let cone = Cone {
                    apex: p.clone(),
                    legs: vec![a.clone(), b.clone()],
                };
                if certify_pullback(c, f, g, &cone).is_ok() {
                    return Some(cone);
                }
            }
        }
    }
    None
}

pub fn search_product<C: Category + ?Sized>(
    c: &C,
    x: &C::Obj,
    y: &C::Obj,
) -> Option<Cone<C::Obj, C::Mor>> {
    for p in c.limit_candidates() {
        let hy = c.hom(&p, y);
        for a in c.hom(&p, x) {
            for b in &hy {
                let cone = Cone {
                    apex: p.clone(),
                    legs: vec![a.clone(), b.clone()],
                };
                if certify_product(c, x, y, &cone).is_ok() {
                    return Some(cone);
                }
            }
        }
    }
    None
}

/// A class of morphisms given by a predicate.
pub struct EdgeClass<C: Category + ?Sized> {
    name: String,
    pred: Arc<dyn Fn(&C, &C::Mor) -> bool + Send + Sync>,
}

impl<C: Category + ?Sized> Clone for EdgeClass<C> {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            pred: Arc::clone(&self.pred),
        }
    }
}

impl<C: Category + ?Sized> Debug for EdgeClass<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "EdgeClass({})", self.name)
    }
}

impl<C: Category + ?Sized + 'static> EdgeClass<C> {
    pub fn new(
        name: impl Into<String>,
        pred: impl Fn(&C, &C::Mor) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            pred: Arc::new(pred),
        }
    }

    pub fn all() -> Self {
        Self::new("all", |_, _| true)
    }

    pub fn isos() -> Self {
        Self::new("isos", |c: &C, f| c.is_iso(f))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains(&self, c: &C, f: &C::Mor) -> bool {
        (self.pred)(c, f)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(format!("{}∩{}", a.name, b.name), move |c: &C, f| {
            a.contains(c, f) && b.contains(c, f)
        })
    }

    /// Adds every identity morphism to the class.
    pub fn with_identities(&self) -> Self {
        let a = self.clone();
        Self::new(format!("{}+id", a.name), move |c: &C, f| {
            c.is_identity(f) || a.contains(c, f)
        })
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pred: Arc::clone(&self.pred),
        }
    }
}

/// Every morphism between window objects, in window-then-hom order.
pub fn window_morphisms<C: Category + ?Sized>(c: &C) -> Vec<C::Mor> {
    let w = c.window();
    let mut out = Vec::new();
    for x in &w {
        for y in &w {
            out.extend(c.hom(x, y));
        }
    }
    out
}

/// Window morphisms whose target is `z`.
pub fn window_morphisms_into<C: Category + ?Sized>(c: &C, z: &C::Obj) -> Vec<C::Mor> {
    c.window().iter().flat_map(|x| c.hom(x, z)).collect()
}
