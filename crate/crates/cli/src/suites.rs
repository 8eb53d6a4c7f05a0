//! Building core objects from instance specs and running the check suites on them.

use std::collections::BTreeSet;
use std::sync::Arc;

use corrkit::category::{Category, EdgeClass};
use corrkit::descent::{
    cech_nerve, cech_pair_instance, cech_pair_without_overlap, check_exceptional_pair, check_localization_premises,
    check_nice_pair, check_simplicial_identities, discrete_fiber_instance, extend_system_c, extend_system_e,
    interval_instance, with_unreached_object, LocalizationProblem, PairDeclaration, PairKind,
};
use corrkit::fincat::{check_category, materialize, FinCategory, FunctorData};
use corrkit::finset::{self, FinSet, Func, SetObj};
use corrkit::grid::{c_of_simplex, corr_simplices, is_corr_simplex, GridMode};
use corrkit::lattice::{check_adjointable, check_lattice_adjunctions, FiniteLattice, Side, Tensor};
use corrkit::model::{
    cart_square, check_kunneth, check_mate_pasting, check_projection_formula, check_system, lattice_square,
    square_label, CoefficientSystem, Flavor, FrameModel,
};
use corrkit::report::{CheckBuilder, CheckRecord, VerificationReport, Witness};
use corrkit::setup::{check_geometric_setup, GeometricSetup};
use corrkit::shriek::{build_shriek, run_theorem, NagataSetup};
use corrkit::span::{check_coproduct, check_span_laws, check_structure_functors, finset_apexes, homotopy_category, HoCatConfig, SpanError};
use corrkit::category::window_morphisms;

use crate::input::{
    BuiltinLocalization, CategorySpec, ExplicitLattice, Instance, InstanceSpec, Law, LatticeSpec, LocalizationSpec,
    PairKindName, Suite, TensorName, WorkspaceConfig,
};

/// One suite's report for one instance.
#[derive(Clone, Debug)]
pub struct SuiteRun {
    pub suite: Suite,
    pub report: VerificationReport,
}

/// Why an instance could not be built.
pub type BuildError = String;

pub fn suites_of(spec: &InstanceSpec) -> &'static [Suite] {
    match spec {
        InstanceSpec::Finset { .. } => &[Suite::Category, Suite::Setup, Suite::Corr],
        InstanceSpec::Staircase { .. } | InstanceSpec::Category { .. } => &[Suite::Category],
        InstanceSpec::Lattice { .. } | InstanceSpec::FrameModel { .. } => &[Suite::Model],
        InstanceSpec::Nagata { .. } => &[Suite::Theorem],
        InstanceSpec::Pair { .. } => &[Suite::Descent],
        InstanceSpec::Localization { .. } => &[Suite::Localization],
    }
}

/// Checks an instance can be built without running anything.
pub fn validate_instance(inst: &Instance) -> Result<(), BuildError> {
    match &inst.spec {
        InstanceSpec::Finset { edges, .. } => edges.iter().try_for_each(|e| class(e).map(drop)),
        InstanceSpec::Staircase { .. } => Ok(()),
        InstanceSpec::Category { category } => build_category(&inst.name, category).map(drop),
        InstanceSpec::Lattice { lattice, tensor } | InstanceSpec::FrameModel { lattice, tensor, .. } => {
            build_lattice(lattice, *tensor).map(drop)
        }
        InstanceSpec::Nagata { .. } => build_nagata(&inst.spec).map(drop),
        InstanceSpec::Pair { .. } => build_pair(&inst.name, &inst.spec).map(drop),
        InstanceSpec::Localization { problem } => build_localization(&inst.name, problem).map(drop),
    }
}

pub fn run_instance(inst: &Instance, cfg: &WorkspaceConfig) -> Result<Vec<SuiteRun>, BuildError> {
    let mut out = Vec::new();
    for &suite in suites_of(&inst.spec) {
        if cfg.selects(suite) {
            out.push(SuiteRun {
                suite,
                report: run_suite(inst, suite, cfg)?,
            });
        }
    }
    Ok(out)
}

fn run_suite(inst: &Instance, suite: Suite, cfg: &WorkspaceConfig) -> Result<VerificationReport, BuildError> {
    let subject = format!("{} / {}", inst.name, suite.id());
    match (&inst.spec, suite) {
        (InstanceSpec::Finset { max, .. }, Suite::Category) => {
            let m = materialize(&FinSet::upto(*max), &format!("finset<={max}"));
            Ok(renamed(subject, check_category(&m.cat)))
        }
        (InstanceSpec::Finset { max, edges }, Suite::Setup) => {
            let mut rep = VerificationReport::new(subject);
            for e in edges {
                let s = GeometricSetup::new(Arc::new(FinSet::upto(*max)), class(e)?);
                rep.absorb(e, check_geometric_setup(&s));
            }
            Ok(rep)
        }
        (InstanceSpec::Finset { max, edges }, Suite::Corr) => {
            let mut rep = VerificationReport::new(subject);
            for e in edges {
                let s = GeometricSetup::new(Arc::new(FinSet::upto(*max)), class(e)?);
                if *max > 2 {
                    rep.push(CheckRecord::skipped(e.clone(), "correspondence checks", "window larger than 2"));
                    continue;
                }
                rep.absorb(e, corr_report(&s, cfg));
            }
            Ok(rep)
        }
        (InstanceSpec::Staircase { n }, Suite::Category) => {
            let c = c_of_simplex(*n);
            let mut rep = renamed(subject, check_category(&c));
            let mut b = CheckBuilder::new("staircase.objects", "one object per pair i <= j");
            let want = (n + 1) * (n + 2) / 2;
            b.observe(c.object_count() == want, || {
                Witness::new().with("objects", c.object_count()).with("pairs", want)
            });
            rep.add(b);
            Ok(rep)
        }
        (InstanceSpec::Category { category }, Suite::Category) => {
            Ok(renamed(subject, check_category(&build_category(&inst.name, category)?)))
        }
        (InstanceSpec::Lattice { lattice, tensor }, Suite::Model) => {
            let l = build_lattice(lattice, *tensor)?;
            let two = FiniteLattice::chain(2);
            let mut rep = VerificationReport::new(subject);
            rep.absorb("self", check_lattice_adjunctions(&l, &l));
            rep.absorb("to_chain2", check_lattice_adjunctions(&l, &two));
            rep.absorb("from_chain2", check_lattice_adjunctions(&two, &l));
            Ok(rep)
        }
        (InstanceSpec::FrameModel { lattice, tensor, max, laws }, Suite::Model) => {
            let m = FrameModel::new(build_lattice(lattice, *tensor)?);
            Ok(model_report(subject, &FinSet::upto(*max), &m, laws))
        }
        (InstanceSpec::Nagata { .. }, Suite::Theorem) => {
            let (ns, sys) = build_nagata(&inst.spec)?;
            let apex = theorem_apex(cfg);
            Ok(renamed(format!("{subject} (span apexes <= {apex})"), run_theorem(&ns, sys, &finset_apexes(apex))))
        }
        (InstanceSpec::Pair { lattice, tensor, .. }, Suite::Descent) => {
            let pd = build_pair(&inst.name, &inst.spec)?;
            let sys: Arc<dyn CoefficientSystem<FinSet>> = Arc::new(FrameModel::new(build_lattice(lattice, *tensor)?));
            Ok(descent_report(subject, &pd, sys, cfg.level))
        }
        (InstanceSpec::Localization { problem }, Suite::Localization) => {
            let lp = build_localization(&inst.name, problem)?;
            Ok(renamed(subject, check_localization_premises(&lp)))
        }
        (spec, s) => Err(format!("suite {} does not apply to {} instances", s.id(), spec.kind())),
    }
}

pub fn theorem_apex(cfg: &WorkspaceConfig) -> usize {
    cfg.max_apex.min(crate::input::THEOREM_APEX)
}

fn renamed(subject: String, rep: VerificationReport) -> VerificationReport {
    VerificationReport { subject, ..rep }
}

fn error_record(id: &str, statement: &str, e: impl ToString) -> CheckRecord {
    let mut b = CheckBuilder::new(id, statement);
    b.fail(Witness::new().with("error", e.to_string()));
    b.finish()
}

fn limit_record(id: &str, statement: &str, why: impl Into<String>) -> CheckRecord {
    let mut b = CheckBuilder::new(id, statement);
    b.limit(why);
    b.finish()
}

pub fn corr_report(s: &GeometricSetup<FinSet>, cfg: &WorkspaceConfig) -> VerificationReport {
    let apexes = finset_apexes(cfg.max_apex);
    let mut rep = VerificationReport::new("corr");
    rep.absorb("spans", check_span_laws(s, &apexes));
    match homotopy_category(s, &HoCatConfig::finset(cfg.max_apex)) {
        Ok(ho) => {
            rep.absorb("hocat", ho.report.clone());
            rep.absorb("hocat.category", check_category(&ho.cat));
            match check_structure_functors(s, &ho) {
                Ok(r) => rep.absorb("functors", r),
                Err(e) => rep.push(error_record("functors", "structure functors", e)),
            }
        }
        Err(SpanError::ResourceLimit(why)) => rep.push(limit_record("hocat", "homotopy category", why)),
        Err(e) => rep.push(error_record("hocat", "homotopy category", e)),
    }
    let c = &*s.cat;
    let objs = c.window();
    let mut parts = Vec::new();
    for (i, x) in objs.iter().enumerate() {
        for y in &objs[i..] {
            match check_coproduct(s, x, y, &apexes) {
                Ok(r) => parts.push(r),
                Err(SpanError::ResourceLimit(why)) => {
                    let mut r = VerificationReport::new("");
                    r.push(limit_record("coproduct", "the product apex is a coproduct", why));
                    parts.push(r);
                }
                Err(e) => {
                    let mut r = VerificationReport::new("");
                    r.push(error_record("coproduct", "the product apex is a coproduct", e));
                    parts.push(r);
                }
            }
        }
    }
    // ids already carry the coproduct prefix
    for c in VerificationReport::merged("", parts).checks {
        rep.push(c);
    }
    let mut b = CheckBuilder::new("simplices", "enumerated simplices are correspondence simplices");
    for n in 0..=cfg.max_dim.min(2) {
        match corr_simplices(s, n, GridMode::Canonical) {
            Ok(list) => {
                for cs in &list {
                    b.observe(is_corr_simplex(s, cs), || Witness::new().with("dimension", n));
                }
            }
            Err(e) => b.fail(Witness::new().with("dimension", n).with("error", e)),
        }
    }
    rep.add(b);
    rep
}

pub fn model_report<S: CoefficientSystem<FinSet>>(subject: String, c: &FinSet, m: &S, laws: &[Law]) -> VerificationReport {
    let mut rep = VerificationReport::new(subject);
    for rec in check_system(c, m).checks {
        rep.push(rec);
    }
    let mors = window_morphisms(c);
    let laws: BTreeSet<Law> = laws.iter().copied().collect();
    for law in laws {
        let mut parts = Vec::new();
        let mut errors = Vec::new();
        match law {
            Law::ProjSharp | Law::ProjStar => {
                let fl = if law == Law::ProjSharp { Flavor::Sharp } else { Flavor::Star };
                for f in &mors {
                    match check_projection_formula(c, m, f, fl) {
                        Ok(r) => parts.push(r),
                        Err(e) => errors.push(e.to_string()),
                    }
                }
            }
            Law::Kunneth => {
                for f1 in &mors {
                    for f2 in &mors {
                        match check_kunneth(c, m, f1, f2) {
                            Ok(r) => parts.push(r),
                            Err(e) => errors.push(e.to_string()),
                        }
                    }
                }
            }
            Law::Adjointable => {
                for f in &mors {
                    for g in mors.iter().filter(|g| g.dst == f.dst) {
                        let sq = match cart_square(c, f, g) {
                            Ok(sq) => sq,
                            Err(e) => {
                                errors.push(e.to_string());
                                continue;
                            }
                        };
                        for side in [Side::Left, Side::Right] {
                            let mut r = check_adjointable(&lattice_square(m, &sq), side);
                            for rec in &mut r.checks {
                                if let Some(w) = rec.witness.take() {
                                    rec.witness = Some(w.with("square", square_label(c, &sq)));
                                }
                            }
                            parts.push(r);
                        }
                    }
                }
            }
            Law::Pasting => {
                for side in [Side::Left, Side::Right] {
                    let mut r = VerificationReport::new("");
                    match check_mate_pasting(c, m, side) {
                        Ok(b) => r.add(b),
                        Err(e) => errors.push(e.to_string()),
                    }
                    parts.push(r);
                }
            }
        }
        let mut merged = VerificationReport::merged("", parts);
        if let Some(e) = errors.first() {
            merged.push(error_record("errors", "every instance of the law can be formed", e));
        }
        rep.absorb(law.id(), merged);
    }
    rep
}

pub fn descent_report(
    subject: String,
    pd: &PairDeclaration<FinSet>,
    sys: Arc<dyn CoefficientSystem<FinSet>>,
    level: usize,
) -> VerificationReport {
    let c = &*pd.cat;
    let mut rep = VerificationReport::new(subject);
    let mut nerves = Vec::new();
    for a in pd.atlases.values().flatten() {
        match cech_nerve(c, a, level) {
            Ok(d) => nerves.push(check_simplicial_identities(c, &d)),
            Err(e) => {
                let mut r = VerificationReport::new("");
                r.push(error_record("cech.identities", "Čech nerve identities", e));
                nerves.push(r);
            }
        }
    }
    for r in VerificationReport::merged("", nerves).checks {
        rep.push(r);
    }
    match pd.kind {
        PairKind::Nice => {
            let pair = check_nice_pair(pd);
            let ok = pair.passed();
            for r in pair.checks {
                rep.push(r);
            }
            if !ok {
                rep.push(CheckRecord::skipped("extend", "descent extension", "pair checks fail"));
                return rep;
            }
            match extend_system_c(pd, sys) {
                Ok(ext) => {
                    for r in ext.report.checks {
                        rep.push(r);
                    }
                }
                Err(e) => rep.push(error_record("extend", "descent extension", e)),
            }
        }
        PairKind::Exceptional => {
            let pair = check_exceptional_pair(pd);
            let ok = pair.passed();
            for r in pair.checks {
                rep.push(r);
            }
            if !ok {
                rep.push(CheckRecord::skipped("codescent", "codescent extension", "pair checks fail"));
                return rep;
            }
            let s = GeometricSetup::new(Arc::clone(&pd.small_cat), finset::all_maps());
            let ns = NagataSetup::new(s, finset::all_maps(), finset::bijective()).finset_middles();
            let sh = match build_shriek(&ns, Arc::clone(&sys)) {
                Ok(sh) => sh,
                Err(e) => {
                    rep.push(error_record("codescent", "codescent extension", e));
                    return rep;
                }
            };
            match extend_system_e(pd, &*sys, &sh) {
                Ok(ext) => {
                    for r in ext.report.checks {
                        rep.push(r);
                    }
                }
                Err(e) => rep.push(error_record("codescent", "codescent extension", e)),
            }
        }
    }
    rep
}

pub fn class(name: &str) -> Result<EdgeClass<FinSet>, BuildError> {
    finset::named_class(name).ok_or_else(|| format!("unknown edge class {name} (expected all, isos, inj or surj)"))
}

pub fn build_lattice(spec: &LatticeSpec, tensor: TensorName) -> Result<FiniteLattice, BuildError> {
    let t = match tensor {
        TensorName::Meet => Tensor::Meet,
        TensorName::Join => Tensor::Join,
    };
    let base = match spec {
        LatticeSpec::Chain(n) => FiniteLattice::chain(*n),
        LatticeSpec::Boolean(k) => FiniteLattice::boolean(*k),
        LatticeSpec::N5 => FiniteLattice::n5(),
        LatticeSpec::M3 => FiniteLattice::m3(),
        LatticeSpec::Explicit(e) => return explicit_lattice(e, t),
    };
    base.with_tensor(t).map_err(|e| e.to_string())
}

fn explicit_lattice(e: &ExplicitLattice, t: Tensor) -> Result<FiniteLattice, BuildError> {
    let t = match &e.tensor_table {
        None => t,
        Some(rows) => {
            let idx = |s: &String| {
                e.elements
                    .iter()
                    .position(|x| x == s)
                    .ok_or_else(|| format!("tensor table names unknown element {s}"))
            };
            if rows.len() != e.elements.len() || rows.iter().any(|r| r.len() != e.elements.len()) {
                return Err("tensor table must be square over the elements".into());
            }
            Tensor::Table(rows.iter().flatten().map(idx).collect::<Result<_, _>>()?)
        }
    };
    let name = e.name.clone().unwrap_or_else(|| "explicit".into());
    let l = FiniteLattice::from_relations(&name, e.elements.clone(), &e.leq, t).map_err(|x| x.to_string())?;
    if e.frame {
        l.require_frame().map_err(|x| x.to_string())?;
    }
    Ok(l)
}

pub fn build_category(name: &str, spec: &CategorySpec) -> Result<FinCategory, BuildError> {
    match spec {
        CategorySpec::Explicit(e) => {
            let objs: Vec<&str> = e.objects.iter().map(String::as_str).collect();
            let mors: Vec<(&str, &str, &str)> =
                e.morphisms.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str())).collect();
            let ids: Vec<(&str, &str)> = e.identities.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
            let comp: Vec<(&str, &str, &str)> =
                e.compose.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str())).collect();
            FinCategory::from_names(name, &objs, &mors, &ids, &comp).map_err(|e| e.to_string())
        }
        CategorySpec::Poset(p) => {
            let n = p.elements.len();
            let idx = |s: &str| p.elements.iter().position(|x| x == s).ok_or_else(|| format!("unknown element {s}"));
            let mut le = vec![false; n * n];
            for i in 0..n {
                le[i * n + i] = true;
            }
            for (a, b) in &p.leq {
                le[idx(a)? * n + idx(b)?] = true;
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if le[i * n + k] && le[k * n + j] {
                            le[i * n + j] = true;
                        }
                    }
                }
            }
            for i in 0..n {
                for j in 0..i {
                    if le[i * n + j] && le[j * n + i] {
                        return Err(format!("{} and {} are equivalent", p.elements[i], p.elements[j]));
                    }
                }
            }
            let mut seen = BTreeSet::new();
            if let Some(d) = p.elements.iter().find(|e| !seen.insert(*e)) {
                return Err(format!("duplicate element {d}"));
            }
            Ok(FinCategory::poset(name, &p.elements, |i, j| le[i * n + j]))
        }
    }
}

pub fn build_nagata(
    spec: &InstanceSpec,
) -> Result<(NagataSetup<FinSet>, Arc<dyn CoefficientSystem<FinSet>>), BuildError> {
    let InstanceSpec::Nagata { max, e, i, p, lattice, tensor } = spec else {
        return Err(format!("expected a nagata instance, found {}", spec.kind()));
    };
    let s = GeometricSetup::new(Arc::new(FinSet::upto(*max)), class(e)?);
    let ns = NagataSetup::new(s, class(i)?, class(p)?).finset_middles();
    let sys: Arc<dyn CoefficientSystem<FinSet>> = Arc::new(FrameModel::new(build_lattice(lattice, *tensor)?));
    Ok((ns, sys))
}

pub fn build_pair(name: &str, spec: &InstanceSpec) -> Result<PairDeclaration<FinSet>, BuildError> {
    let InstanceSpec::Pair { pair_kind, max, extras, s, e, s_prime, e_prime, atlases, .. } = spec else {
        return Err(format!("expected a pair instance, found {}", spec.kind()));
    };
    let kind = match pair_kind {
        PairKindName::Nice => PairKind::Nice,
        PairKindName::Exceptional => PairKind::Exceptional,
    };
    let mut labels = BTreeSet::new();
    for x in extras {
        if x.label.parse::<usize>().is_ok() || !labels.insert(x.label.as_str()) {
            return Err(format!("extra object label {} is numeric or repeated", x.label));
        }
    }
    let ex: Vec<(usize, &str)> = extras.iter().map(|x| (x.size, x.label.as_str())).collect();
    let (mut pd, objs) =
        PairDeclaration::finset(name, kind, *max, &ex, [class(s)?, class(e)?, class(s_prime)?, class(e_prime)?]);
    let lookup = |l: &str| -> Result<SetObj, BuildError> {
        if let Some(k) = extras.iter().position(|x| x.label == l) {
            return Ok(objs[k]);
        }
        match l.parse::<usize>() {
            Ok(n) if n <= *max => Ok(SetObj::n(n)),
            _ => Err(format!("unknown object {l}")),
        }
    };
    for a in atlases {
        let (src, dst) = (lookup(&a.source)?, lookup(&a.target)?);
        if a.map.len() != src.size || a.map.iter().any(|&v| v >= dst.size) {
            return Err(format!("atlas {} -> {} {:?} is not a function", a.source, a.target, a.map));
        }
        pd = pd.with_atlas(Func::new(src, dst, a.map.clone()));
    }
    Ok(pd)
}

pub fn build_localization(name: &str, spec: &LocalizationSpec) -> Result<LocalizationProblem, BuildError> {
    let mut lp = match spec {
        LocalizationSpec::Builtin(b) => match b {
            BuiltinLocalization::Interval => interval_instance(),
            BuiltinLocalization::CechPair => cech_pair_instance(),
            BuiltinLocalization::CechPairWithoutOverlap => cech_pair_without_overlap(),
            BuiltinLocalization::DiscreteFiber => discrete_fiber_instance(),
            BuiltinLocalization::IntervalWithUnreachedObject => with_unreached_object(&interval_instance()),
        },
        LocalizationSpec::Explicit(e) => {
            let src = Arc::new(build_category(&format!("{name} source"), &e.source)?);
            let dst = Arc::new(build_category(&format!("{name} target"), &e.target)?);
            let p = FunctorData::from_names(Arc::clone(&src), dst, &e.objects, &e.morphisms)
                .map_err(|x| x.to_string())?;
            let mut r = BTreeSet::new();
            for u in &e.r {
                r.insert(src.mor(u).ok_or_else(|| format!("unknown morphism {u} in r"))?);
            }
            LocalizationProblem { name: name.to_string(), p, r }
        }
    };
    lp.name = name.to_string();
    Ok(lp)
}
