//! Geometric setups: a category with a class of edges stable under pullback.

use crate::category::{certify_pullback, window_morphisms, Category, ConeDefect, EdgeClass, Square};
use crate::report::{CheckBuilder, VerificationReport, Witness};
use serde::Serialize;
use std::sync::Arc;
use thiserror::Error;

pub struct GeometricSetup<C: Category> {
    pub cat: Arc<C>,
    pub e: EdgeClass<C>,
}

impl<C: Category> Clone for GeometricSetup<C> {
    fn clone(&self) -> Self {
        Self {
            cat: Arc::clone(&self.cat),
            e: self.e.clone(),
        }
    }
}

impl<C: Category> GeometricSetup<C> {
    pub fn new(cat: Arc<C>, e: EdgeClass<C>) -> Self {
        Self { cat, e }
    }

    pub fn with_class(&self, e: EdgeClass<C>) -> Self {
        Self {
            cat: Arc::clone(&self.cat),
            e,
        }
    }

    pub fn in_e(&self, f: &C::Mor) -> bool {
        self.e.contains(&self.cat, f)
    }

    pub fn label(&self) -> String {
        format!("{}", self.e.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetupError {
    #[error("cospan {f}, {g} has no leg in the edge class")]
    NoEdgeLeg { f: String, g: String },
    #[error("no pullback for the cospan {f}, {g}")]
    NoPullback { f: String, g: String },
    #[error("chosen square over {f}, {g} does not commute")]
    NotCommuting { f: String, g: String },
    #[error("chosen square over {f}, {g} is not universal: {reason}")]
    NotUniversal { f: String, g: String, reason: String },
}

fn defect_text<C: Category>(c: &C, d: &ConeDefect<C::Obj, C::Mor>) -> String {
    match d {
        ConeDefect::NotCommuting => "does not commute".to_string(),
        ConeDefect::NoMediator { test, maps } => format!(
            "no mediator from {} for ({})",
            c.obj_label(test),
            maps.iter().map(|m| c.mor_label(m)).collect::<Vec<_>>().join(", ")
        ),
        ConeDefect::ManyMediators { test, maps, count } => format!(
            "{count} mediators from {} for ({})",
            c.obj_label(test),
            maps.iter().map(|m| c.mor_label(m)).collect::<Vec<_>>().join(", ")
        ),
    }
}

/// The oracle's pullback of `f: X -> Z <- Y: g`, certified against the probe objects.
pub fn certified_pullback<C: Category>(
    c: &C,
    f: &C::Mor,
    g: &C::Mor,
) -> Result<Square<C::Obj, C::Mor>, SetupError> {
    let names = || (c.mor_label(f), c.mor_label(g));
    let sq = c.pullback(f, g).ok_or_else(|| {
        let (f, g) = names();
        SetupError::NoPullback { f, g }
    })?;
    match certify_pullback(c, f, g, &sq) {
        Ok(()) => Ok(sq),
        Err(ConeDefect::NotCommuting) => {
            let (f, g) = names();
            Err(SetupError::NotCommuting { f, g })
        }
        Err(d) => {
            let (f, g) = names();
            Err(SetupError::NotUniversal {
                f,
                g,
                reason: defect_text(c, &d),
            })
        }
    }
}

/// Pullback of a cospan with at least one leg in `E`.
pub fn pullback<C: Category>(
    s: &GeometricSetup<C>,
    f: &C::Mor,
    g: &C::Mor,
) -> Result<Square<C::Obj, C::Mor>, SetupError> {
    if !s.in_e(f) && !s.in_e(g) {
        return Err(SetupError::NoEdgeLeg {
            f: s.cat.mor_label(f),
            g: s.cat.mor_label(g),
        });
    }
    certified_pullback(&*s.cat, f, g)
}

#[derive(Serialize, Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassFlags {
    pub contains_isos: bool,
    pub composition_closed: bool,
    pub pullback_stable: bool,
    pub right_cancellative: bool,
}

/// Recomputes the closure flags of a class over the window.
pub fn class_flags<C: Category>(c: &C, e: &EdgeClass<C>) -> ClassFlags {
    let mors = window_morphisms(c);
    let contains_isos = mors.iter().filter(|f| c.is_iso(f)).all(|f| e.contains(c, f));
    let mut composition_closed = true;
    let mut right_cancellative = true;
    for f in &mors {
        for g in mors.iter().filter(|g| c.source(g) == c.target(f)) {
            let gf = c.comp(g, f);
            if e.contains(c, f) && e.contains(c, g) && !e.contains(c, &gf) {
                composition_closed = false;
            }
            if e.contains(c, g) && e.contains(c, &gf) && !e.contains(c, f) {
                right_cancellative = false;
            }
        }
    }
    let mut pullback_stable = true;
    for f in mors.iter().filter(|f| e.contains(c, f)) {
        for g in mors.iter().filter(|g| c.target(g) == c.target(f)) {
            match c.pullback(f, g) {
                Some(sq) if e.contains(c, &sq.legs[1]) => {}
                _ => pullback_stable = false,
            }
        }
    }
    ClassFlags {
        contains_isos,
        composition_closed,
        pullback_stable,
        right_cancellative,
    }
}

/// Checks every axiom of a geometric setup over the window.
pub fn check_geometric_setup<C: Category>(s: &GeometricSetup<C>) -> VerificationReport {
    let c = &*s.cat;
    let mut rep = VerificationReport::new(format!("geometric setup ({})", s.e.name()));
    let mors = window_morphisms(c);

    let mut isos = CheckBuilder::new("setup.isos", "edge class contains every isomorphism");
    for f in mors.iter().filter(|f| c.is_iso(f)) {
        isos.observe(s.in_e(f), || Witness::new().with("iso", c.mor_label(f)));
    }
    rep.add(isos);

    let mut comp = CheckBuilder::new("setup.composition", "edge class is closed under composition");
    for f in mors.iter().filter(|f| s.in_e(f)) {
        for g in mors.iter().filter(|g| c.source(g) == c.target(f) && s.in_e(g)) {
            let gf = c.comp(g, f);
            comp.observe(s.in_e(&gf), || {
                Witness::new().with("g", c.mor_label(g)).with("f", c.mor_label(f))
            });
        }
    }
    rep.add(comp);

    let mut pb = CheckBuilder::new(
        "setup.pullbacks",
        "pullbacks along edges exist and their base changes are edges",
    );
    let mut oracle_error = None;
    for f in mors.iter().filter(|f| s.in_e(f)) {
        for g in mors.iter().filter(|g| c.target(g) == c.target(f)) {
            match certified_pullback(c, f, g) {
                Ok(sq) => {
                    pb.observe(s.in_e(&sq.legs[1]), || {
                        Witness::new()
                            .with("edge", c.mor_label(f))
                            .with("along", c.mor_label(g))
                            .with("base_change", c.mor_label(&sq.legs[1]))
                    });
                }
                Err(e) => {
                    pb.fail(
                        Witness::new()
                            .with("edge", c.mor_label(f))
                            .with("along", c.mor_label(g))
                            .with("error", &e),
                    );
                    if oracle_error.is_none() {
                        oracle_error = Some(e.to_string());
                    }
                }
            }
        }
    }
    if let Some(e) = oracle_error {
        pb.detail(e);
    }
    rep.add(pb);
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::FinCategory;
    use crate::finset::{self, FinSet, Func, SetObj};

    #[test]
    fn named_classes_are_setups() {
        for k in 1..=3 {
            let cat = Arc::new(FinSet::upto(k));
            for e in [finset::all_maps(), finset::injective(), finset::surjective(), finset::bijective()] {
                let rep = check_geometric_setup(&GeometricSetup::new(Arc::clone(&cat), e));
                assert!(rep.fully_passed(), "{}", rep.to_text());
            }
        }
    }

    #[test]
    fn class_missing_an_iso_is_rejected() {
        let cat = Arc::new(FinSet::upto(2));
        let e = EdgeClass::new("ids", |c: &FinSet, f: &Func| c.is_identity(f));
        let rep = check_geometric_setup(&GeometricSetup::new(cat, e));
        let w = rep.check("setup.isos").unwrap().witness.clone().unwrap();
        assert_eq!(w.get("iso"), Some("2->2[1,0]"));
    }

    #[test]
    fn constant_maps_are_not_stable() {
        // maps onto a point, base changed along 1 -> 2
        let cat = Arc::new(FinSet::upto(2));
        let e = EdgeClass::new("to-2", |_: &FinSet, f: &Func| f.dst.size == 2 || f.is_bijective());
        let flags = class_flags(&*cat, &e);
        assert!(!flags.pullback_stable);
        let rep = check_geometric_setup(&GeometricSetup::new(cat, e));
        assert!(!rep.passed());
    }

    #[test]
    fn poset_without_meets_has_no_pullback() {
        // a, b below c with no common lower bound
        let els: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let c = FinCategory::poset("V", &els, |i, j| i == j || j == 2);
        let s = GeometricSetup::new(Arc::new(c), EdgeClass::all());
        let rep = check_geometric_setup(&s);
        assert!(!rep.passed());
        let f = s.cat.mor("a->c").unwrap();
        let g = s.cat.mor("b->c").unwrap();
        assert!(matches!(pullback(&s, &f, &g), Err(SetupError::NoPullback { .. })));
    }

    #[test]
    fn broken_oracle_is_a_hard_error() {
        // an oracle square that does not commute is reported, never accepted
        struct Bad(FinSet);
        impl Category for Bad {
            type Obj = SetObj;
            type Mor = Func;
            fn source(&self, f: &Func) -> SetObj { f.src }
            fn target(&self, f: &Func) -> SetObj { f.dst }
            fn identity(&self, x: &SetObj) -> Func { Func::identity(*x) }
            fn compose(&self, g: &Func, f: &Func) -> Option<Func> { self.0.compose(g, f) }
            fn hom(&self, x: &SetObj, y: &SetObj) -> Vec<Func> { self.0.hom(x, y) }
            fn window(&self) -> Vec<SetObj> { self.0.window() }
            fn obj_label(&self, x: &SetObj) -> String { self.0.obj_label(x) }
            fn mor_label(&self, f: &Func) -> String { self.0.mor_label(f) }
            fn pullback(&self, f: &Func, g: &Func) -> Option<Square<SetObj, Func>> {
                let mut sq = self.0.pullback(f, g)?;
                if sq.apex.size == 2 && f.dst.size == 2 {
                    sq.legs[0].map.reverse();
                }
                Some(sq)
            }
        }
        let f = Func::of(2, 2, &[0, 1]);
        let g = Func::of(2, 2, &[0, 1]);
        assert!(matches!(
            certified_pullback(&Bad(FinSet::upto(2)), &f, &g),
            Err(SetupError::NotCommuting { .. })
        ));
    }
}
