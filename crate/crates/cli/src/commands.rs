//! Command-line surface. Every command returns its output and exit code so
//! tests can drive it without a process.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use corrkit::category::Category;
use corrkit::descent::{check_localization_premises, extend_system_c, PairKind};
use corrkit::finset::{FinSet, SetObj};
use corrkit::grid::{corr_simplices, enumerate_grid_simplices, GridMode};
use corrkit::lattice::FiniteLattice;
use corrkit::model::{CoefficientSystem, FrameModel};
use corrkit::report::VerificationReport;
use corrkit::setup::GeometricSetup;
use corrkit::shriek::{
    assemble_formalism, build_shriek, check_nagata, compactification_label, run_theorem, search_nagata,
    verify_hypotheses, NagataSetup,
};
use corrkit::span::{check_coproduct, finset_apexes, homotopy_category, HoCatConfig};

use crate::input::{
    parse_json, read_file, ExplicitLattice, Format, InputError, Instance, InstanceSpec, Law, LatticeSpec, Suite,
    TensorName, WorkspaceConfig,
};
use crate::suites::{self, build_lattice, class};

#[derive(Parser, Debug)]
#[command(name = "corrkit", version, about = "Exhaustive checks for correspondences and lattice-valued coefficient systems")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Args, Debug, Default)]
pub struct GlobalArgs {
    /// Input file in the instance envelope; repeatable. Defaults to the built-in corpus.
    #[arg(long, global = true)]
    pub input: Vec<PathBuf>,
    /// Suite to run; repeatable. Defaults to all.
    #[arg(long, global = true)]
    pub suite: Vec<String>,
    /// Instance name to select; repeatable.
    #[arg(long, global = true)]
    pub instance: Vec<String>,
    /// Largest simplex dimension enumerated (at most 4; default 2).
    #[arg(long, global = true)]
    pub max_dim: Option<usize>,
    /// Largest span apex size (at most 4; default 4).
    #[arg(long, global = true)]
    pub max_apex: Option<usize>,
    /// Čech nerve truncation level.
    #[arg(long, global = true)]
    pub level: Option<usize>,
    /// Report format (default text).
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,
    /// JSON workspace configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the selected suites over the inputs (the default command).
    Run,
    /// The bundled instance corpus.
    #[command(subcommand)]
    Corpus(CorpusCmd),
    /// Spans, the homotopy category and coproducts over finite sets.
    #[command(subcommand)]
    Corr(CorrCmd),
    /// Cartesian grids and their staircase restrictions.
    #[command(subcommand)]
    Grid(GridCmd),
    /// Laws of frame-valued coefficient systems.
    #[command(subcommand)]
    Model(ModelCmd),
    /// Exceptional pushforwards of one Nagata instance.
    #[command(subcommand)]
    Shriek(ShriekCmd),
    /// Functoriality of the assembled formalism on spans.
    #[command(subcommand)]
    Formalism(FormalismCmd),
    /// Extensions along nice and exceptional pairs.
    #[command(subcommand)]
    Descend(DescendCmd),
    /// Premises of the localization criterion.
    #[command(subcommand)]
    Localize(LocalizeCmd),
    /// Searches over candidate edge classes.
    #[command(subcommand)]
    Search(SearchCmd),
}

#[derive(Subcommand, Debug)]
pub enum CorpusCmd {
    /// Names, kinds and suites of the bundled instances.
    List,
    /// The bundled corpus as an input file.
    Dump,
}

#[derive(Args, Debug, Clone)]
pub struct SetupArgs {
    /// Edge class: all, isos, inj or surj.
    #[arg(long, default_value = "all")]
    pub edges: String,
    /// Window of finite sets `0..=max`.
    #[arg(long, default_value_t = 2)]
    pub max: usize,
}

#[derive(Subcommand, Debug)]
pub enum CorrCmd {
    /// Correspondence simplices of one dimension.
    Enumerate {
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        setup: SetupArgs,
    },
    /// Hom counts of the homotopy category.
    Hocat {
        #[command(flatten)]
        setup: SetupArgs,
    },
    /// Universal property of the product apex as a coproduct of `x` and `y` (sizes).
    Coproduct {
        x: usize,
        y: usize,
        #[command(flatten)]
        setup: SetupArgs,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Canonical,
    Literal,
}

#[derive(Subcommand, Debug)]
pub enum GridCmd {
    /// Grids `[n]^k -> C` with cartesian squares, one class per direction.
    Enumerate {
        #[arg(long)]
        dim: usize,
        /// Comma-separated classes, one per direction.
        #[arg(long, default_value = "all,all")]
        classes: String,
        #[arg(long, default_value_t = 2)]
        max: usize,
        #[arg(long, value_enum, default_value = "canonical")]
        mode: ModeArg,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// `chain:N`, `boolean:K`, `n5`, `m3`, or a lattice description file.
    #[arg(long, default_value = "chain:2")]
    pub lattice: String,
    #[arg(long, value_enum, default_value = "meet")]
    pub tensor: TensorArg,
    #[arg(long, default_value_t = 2)]
    pub max: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TensorArg {
    Meet,
    Join,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum LawArg {
    ProjSharp,
    ProjStar,
    Kunneth,
    Adjointable,
    Pasting,
}

#[derive(Subcommand, Debug)]
pub enum ModelCmd {
    /// One law of the frame model, exhaustively over the window.
    Check {
        #[arg(long, value_enum)]
        law: LawArg,
        #[command(flatten)]
        model: ModelArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum ShriekCmd {
    /// The table of `f_!` for a nagata instance (select it with `--instance`).
    Build,
    /// Axioms and hypotheses; with `--all` the whole construction as well.
    Verify {
        /// The whole pipeline, not only axioms and hypotheses.
        #[arg(long)]
        all: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum FormalismCmd {
    /// Functoriality over spans for a nagata instance.
    Assemble,
}

#[derive(Subcommand, Debug)]
pub enum DescendCmd {
    /// Extend the pullback system across a nice pair.
    ExtendC,
    /// Extend the exceptional pushforwards across an exceptional pair.
    ExtendE,
}

#[derive(Subcommand, Debug)]
pub enum LocalizeCmd {
    /// Premises of the localization criterion.
    Check,
}

#[derive(Subcommand, Debug)]
pub enum SearchCmd {
    /// Every pair of candidate classes as `(I, P)`, looking for a mixed positive case.
    Nagata {
        #[arg(long, default_value = "all,isos,inj,surj")]
        candidates: String,
        #[command(flatten)]
        model: ModelArgs,
    },
}

/// What a command prints and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Self {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn input_error(e: &InputError) -> Self {
        Self {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

pub fn config_from(g: &GlobalArgs) -> Result<WorkspaceConfig, InputError> {
    let mut cfg = match &g.config {
        Some(p) => parse_json::<WorkspaceConfig>(&p.display().to_string(), &read_file(p)?)?,
        None => WorkspaceConfig::default(),
    };
    if !g.input.is_empty() {
        cfg.inputs = g.input.clone();
    }
    if !g.suite.is_empty() {
        cfg.suites = g
            .suite
            .iter()
            .map(|s| Suite::parse(s).ok_or_else(|| InputError::new("--suite", format!("unknown suite {s}"))))
            .collect::<Result<_, _>>()?;
    }
    if !g.instance.is_empty() {
        cfg.instances = g.instance.clone();
    }
    cfg.max_dim = g.max_dim.unwrap_or(cfg.max_dim);
    cfg.max_apex = g.max_apex.unwrap_or(cfg.max_apex);
    cfg.level = g.level.unwrap_or(cfg.level);
    if let Some(f) = g.format {
        cfg.format = match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        };
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn execute(cli: &Cli) -> Outcome {
    let cfg = match config_from(&cli.global) {
        Ok(c) => c,
        Err(e) => return Outcome::input_error(&e),
    };
    match dispatch(cli.command.as_ref().unwrap_or(&Command::Run), &cfg) {
        Ok(o) => o,
        Err(e) => Outcome::input_error(&e),
    }
}

fn dispatch(cmd: &Command, cfg: &WorkspaceConfig) -> Result<Outcome, InputError> {
    match cmd {
        Command::Run => {
            let rep = crate::run(cfg)?;
            Ok(Outcome::ok(rep.exit_code(), rep.render(cfg.format)))
        }
        Command::Corpus(CorpusCmd::Dump) => Ok(Outcome::ok(0, crate::corpus::CORPUS_JSON.to_string())),
        Command::Corpus(CorpusCmd::List) => {
            let c = crate::corpus::corpus();
            let rows: Vec<_> = c
                .instances
                .iter()
                .map(|i| {
                    let suites: Vec<&str> = suites::suites_of(&i.spec).iter().map(|s| s.id()).collect();
                    json!({"name": i.name, "kind": i.spec.kind(), "suites": suites})
                })
                .collect();
            let text = c
                .instances
                .iter()
                .map(|i| {
                    let suites: Vec<&str> = suites::suites_of(&i.spec).iter().map(|s| s.id()).collect();
                    format!("{:<36} {:<12} {}\n", i.name, i.spec.kind(), suites.join(","))
                })
                .collect();
            Ok(emit(cfg, 0, text, &rows))
        }
        Command::Corr(c) => corr(c, cfg),
        Command::Grid(GridCmd::Enumerate { dim, classes, max, mode }) => grid(*dim, classes, *max, *mode, cfg),
        Command::Model(ModelCmd::Check { law, model }) => {
            let lat = model_lattice(model)?;
            let law = match law {
                LawArg::ProjSharp => Law::ProjSharp,
                LawArg::ProjStar => Law::ProjStar,
                LawArg::Kunneth => Law::Kunneth,
                LawArg::Adjointable => Law::Adjointable,
                LawArg::Pasting => Law::Pasting,
            };
            check_max(model.max)?;
            let m = FrameModel::new(lat);
            let rep = suites::model_report(
                format!("{} on {}", law.id(), m.base().name()),
                &FinSet::upto(model.max),
                &m,
                &[law],
            );
            Ok(report_outcome(cfg, &rep))
        }
        Command::Shriek(s) => {
            let inst = one_instance(cfg, "nagata")?;
            let (ns, sys) = suites::build_nagata(&inst.spec).map_err(|m| InputError::new(inst.name.clone(), m))?;
            match s {
                ShriekCmd::Build => shriek_build(cfg, &ns, sys),
                ShriekCmd::Verify { all: true } => {
                    Ok(report_outcome(cfg, &run_theorem(&ns, sys, &finset_apexes(suites::theorem_apex(cfg)))))
                }
                ShriekCmd::Verify { all: false } => {
                    let mut rep = VerificationReport::new(format!("axioms and hypotheses ({})", ns.label()));
                    rep.absorb("axioms", check_nagata(&ns));
                    match verify_hypotheses(&ns, &*sys) {
                        Ok(h) => rep.absorb("hypotheses", h),
                        Err(e) => return Err(InputError::new(inst.name.clone(), e.to_string())),
                    }
                    Ok(report_outcome(cfg, &rep))
                }
            }
        }
        Command::Formalism(FormalismCmd::Assemble) => {
            let inst = one_instance(cfg, "nagata")?;
            let (ns, sys) = suites::build_nagata(&inst.spec).map_err(|m| InputError::new(inst.name.clone(), m))?;
            match build_shriek(&ns, Arc::clone(&sys)) {
                Ok(sh) => Ok(report_outcome(cfg, &assemble_formalism(&ns, &*sys, &sh, &finset_apexes(suites::theorem_apex(cfg))))),
                Err(e) => Ok(failed_build(cfg, &ns, &*sys, &e.to_string())),
            }
        }
        Command::Descend(d) => {
            let inst = one_instance(cfg, "pair")?;
            descend(d, &inst, cfg)
        }
        Command::Localize(LocalizeCmd::Check) => {
            let inst = one_instance(cfg, "localization")?;
            let InstanceSpec::Localization { problem } = &inst.spec else { unreachable!() };
            let lp = suites::build_localization(&inst.name, problem).map_err(|m| InputError::new(inst.name.clone(), m))?;
            Ok(report_outcome(cfg, &check_localization_premises(&lp)))
        }
        Command::Search(SearchCmd::Nagata { candidates, model }) => search(candidates, model, cfg),
    }
}

fn emit<T: Serialize>(cfg: &WorkspaceConfig, code: i32, text: String, data: &T) -> Outcome {
    match cfg.format {
        Format::Text => Outcome::ok(code, text),
        Format::Json => Outcome::ok(code, serde_json::to_string_pretty(data).expect("serializes") + "\n"),
    }
}

fn report_outcome(cfg: &WorkspaceConfig, rep: &VerificationReport) -> Outcome {
    let code = if rep.fully_passed() { 0 } else { 1 };
    match cfg.format {
        Format::Text => Outcome::ok(code, rep.to_text()),
        Format::Json => Outcome::ok(code, rep.to_json() + "\n"),
    }
}

fn check_max(max: usize) -> Result<(), InputError> {
    if max > crate::input::MAX_MODEL_SET {
        return Err(InputError::new("--max", format!("{max} exceeds the supported bound {}", crate::input::MAX_MODEL_SET)));
    }
    Ok(())
}

fn one_instance(cfg: &WorkspaceConfig, kind: &str) -> Result<Instance, InputError> {
    if cfg.instances.len() != 1 {
        return Err(InputError::new("--instance", format!("select exactly one {kind} instance")));
    }
    let inst = crate::load_instances(cfg)?.remove(0);
    if inst.spec.kind() != kind {
        return Err(InputError::new("--instance", format!("{} is a {} instance, not {kind}", inst.name, inst.spec.kind())));
    }
    Ok(inst)
}

fn setup_of(a: &SetupArgs) -> Result<GeometricSetup<FinSet>, InputError> {
    if a.max > 2 {
        return Err(InputError::new("--max", "correspondence commands support windows up to 2"));
    }
    let e = class(&a.edges).map_err(|m| InputError::new("--edges", m))?;
    Ok(GeometricSetup::new(Arc::new(FinSet::upto(a.max)), e))
}

fn corr(c: &CorrCmd, cfg: &WorkspaceConfig) -> Result<Outcome, InputError> {
    match c {
        CorrCmd::Enumerate { dim, setup } => {
            if *dim > cfg.max_dim.min(2) {
                return Err(InputError::new("--dim", format!("dimension {dim} exceeds the supported bound")));
            }
            let s = setup_of(setup)?;
            let cat = &*s.cat;
            let list = corr_simplices(&s, *dim, GridMode::Canonical).map_err(|e| InputError::new("corr", e.to_string()))?;
            let rows: Vec<_> = list
                .iter()
                .map(|cs| {
                    let cell = |(i, j): &(usize, usize)| format!("{i}{j}");
                    json!({
                        "objects": cs.objects.iter().map(|(k, o)| (cell(k), cat.obj_label(o))).collect::<std::collections::BTreeMap<_, _>>(),
                        "vertical": cs.vertical.iter().map(|(k, m)| (cell(k), cat.mor_label(m))).collect::<std::collections::BTreeMap<_, _>>(),
                        "horizontal": cs.horizontal.iter().map(|(k, m)| (cell(k), cat.mor_label(m))).collect::<std::collections::BTreeMap<_, _>>(),
                    })
                })
                .collect();
            let text = format!("{} simplices of dimension {dim} over {}\n", list.len(), s.label());
            Ok(emit(cfg, 0, text, &rows))
        }
        CorrCmd::Hocat { setup } => {
            let s = setup_of(setup)?;
            let cat = &*s.cat;
            match homotopy_category(&s, &HoCatConfig::finset(cfg.max_apex)) {
                Ok(ho) => {
                    let w = cat.window();
                    let mut text = String::new();
                    let mut rows = Vec::new();
                    for x in &w {
                        for y in &w {
                            let n = ho.hom_count(x, y);
                            text.push_str(&format!("hom({}, {}) = {n}\n", cat.obj_label(x), cat.obj_label(y)));
                            rows.push(json!({"x": cat.obj_label(x), "y": cat.obj_label(y), "classes": n}));
                        }
                    }
                    let code = if ho.report.fully_passed() { 0 } else { 1 };
                    text.push_str(&ho.report.to_text());
                    Ok(emit(cfg, code, text, &json!({"homs": rows, "report": ho.report})))
                }
                Err(e) => {
                    let text = format!("not computed: {e}\n");
                    Ok(emit(cfg, 1, text, &json!({"error": e.to_string()})))
                }
            }
        }
        CorrCmd::Coproduct { x, y, setup } => {
            let s = setup_of(setup)?;
            match check_coproduct(&s, &SetObj::n(*x), &SetObj::n(*y), &finset_apexes(cfg.max_apex)) {
                Ok(rep) => Ok(report_outcome(cfg, &rep)),
                Err(e) => Ok(emit(cfg, 1, format!("not computed: {e}\n"), &json!({"error": e.to_string()}))),
            }
        }
    }
}

fn grid(dim: usize, classes: &str, max: usize, mode: ModeArg, cfg: &WorkspaceConfig) -> Result<Outcome, InputError> {
    if max > 2 {
        return Err(InputError::new("--max", "grid enumeration supports windows up to 2"));
    }
    let cls = classes
        .split(',')
        .map(|c| class(c.trim()).map_err(|m| InputError::new("--classes", m)))
        .collect::<Result<Vec<_>, _>>()?;
    let cat = FinSet::upto(max);
    let mode = match mode {
        ModeArg::Canonical => GridMode::Canonical,
        ModeArg::Literal => GridMode::Literal,
    };
    let list = enumerate_grid_simplices(&cat, &cls, dim, mode).map_err(|e| InputError::new("grid", e.to_string()))?;
    let rows: Vec<_> = list
        .iter()
        .map(|g| {
            let verts: Vec<String> = g.vertices.iter().map(|o| cat.obj_label(o)).collect();
            let edges: Vec<Vec<Option<String>>> = g
                .edges
                .iter()
                .map(|dir| dir.iter().map(|m| m.as_ref().map(|m| cat.mor_label(m))).collect())
                .collect();
            json!({"vertices": verts, "edges": edges})
        })
        .collect();
    let text = format!("{} grids [{dim}]^{} over finset<={max}\n", list.len(), cls.len());
    Ok(emit(cfg, 0, text, &rows))
}

fn model_lattice(m: &ModelArgs) -> Result<FiniteLattice, InputError> {
    let spec = match LatticeSpec::parse_short(&m.lattice) {
        Some(s) => s,
        None => {
            let p = PathBuf::from(&m.lattice);
            let e: ExplicitLattice = parse_json(&m.lattice, &read_file(&p)?)?;
            LatticeSpec::Explicit(e)
        }
    };
    let t = match m.tensor {
        TensorArg::Meet => TensorName::Meet,
        TensorArg::Join => TensorName::Join,
    };
    build_lattice(&spec, t).map_err(|e| InputError::new("--lattice", e))
}

fn failed_build(cfg: &WorkspaceConfig, ns: &NagataSetup<FinSet>, sys: &dyn CoefficientSystem<FinSet>, why: &str) -> Outcome {
    let mut rep = VerificationReport::new(format!("construction refused: {why}"));
    rep.absorb("axioms", check_nagata(ns));
    if let Ok(h) = verify_hypotheses(ns, sys) {
        rep.absorb("hypotheses", h);
    }
    let mut o = report_outcome(cfg, &rep);
    o.code = 1;
    o
}

fn shriek_build(
    cfg: &WorkspaceConfig,
    ns: &NagataSetup<FinSet>,
    sys: Arc<dyn CoefficientSystem<FinSet>>,
) -> Result<Outcome, InputError> {
    let sh = match build_shriek(ns, Arc::clone(&sys)) {
        Ok(sh) => sh,
        Err(e) => return Ok(failed_build(cfg, ns, &*sys, &e.to_string())),
    };
    let c = ns.cat();
    let table = sh.table().map_err(|e| InputError::new("shriek", e.to_string()))?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for (f, k, m) in &table {
        let (src, dst) = (&m.src, &m.dst);
        let values: Vec<String> = src.elements().map(|e| dst.label(m.apply(e))).collect();
        let args: Vec<String> = src.elements().map(|e| src.label(e)).collect();
        text.push_str(&format!(
            "{} via {}: {}\n",
            c.mor_label(f),
            compactification_label(c, k),
            args.iter().zip(&values).map(|(a, v)| format!("{a}->{v}")).collect::<Vec<_>>().join(" ")
        ));
        rows.push(json!({"f": c.mor_label(f), "factorization": compactification_label(c, k), "table": args.iter().zip(&values).map(|(a, v)| [a, v]).collect::<Vec<_>>()}));
    }
    Ok(emit(cfg, 0, text, &rows))
}

fn descend(d: &DescendCmd, inst: &Instance, cfg: &WorkspaceConfig) -> Result<Outcome, InputError> {
    let InstanceSpec::Pair { lattice, tensor, .. } = &inst.spec else { unreachable!() };
    let pd = suites::build_pair(&inst.name, &inst.spec).map_err(|m| InputError::new(inst.name.clone(), m))?;
    let want = match d {
        DescendCmd::ExtendC => PairKind::Nice,
        DescendCmd::ExtendE => PairKind::Exceptional,
    };
    if pd.kind != want {
        return Err(InputError::new(inst.name.clone(), format!("{:?} pair does not fit this command", pd.kind)));
    }
    let sys: Arc<dyn CoefficientSystem<FinSet>> =
        Arc::new(FrameModel::new(build_lattice(lattice, *tensor).map_err(|m| InputError::new(inst.name.clone(), m))?));
    let rep = suites::descent_report(format!("{} / descent", inst.name), &pd, Arc::clone(&sys), cfg.level);
    let mut out = report_outcome(cfg, &rep);
    if want == PairKind::Nice && cfg.format == Format::Text {
        if let Ok(ext) = extend_system_c(&pd, sys) {
            let c = &*pd.cat;
            for x in c.window().into_iter().filter(|x| !(pd.is_small)(x)) {
                out.stdout.push_str(&format!("D({}) has {} elements\n", c.obj_label(&x), ext.lattice(&x).size()));
            }
        }
    }
    Ok(out)
}

fn search(candidates: &str, m: &ModelArgs, cfg: &WorkspaceConfig) -> Result<Outcome, InputError> {
    check_max(m.max)?;
    let cands = candidates
        .split(',')
        .map(|c| class(c.trim()).map_err(|e| InputError::new("--candidates", e)))
        .collect::<Result<Vec<_>, _>>()?;
    let sys = FrameModel::new(model_lattice(m)?);
    let setup = GeometricSetup::new(Arc::new(FinSet::upto(m.max)), corrkit::finset::all_maps());
    let hits = search_nagata(&setup, &cands, &sys, |ns| ns.finset_middles());
    let mut text = String::new();
    for h in &hits {
        text.push_str(&format!(
            "I={:<5} P={:<5} axioms={:<5} hypotheses={:<5} mixed={}\n",
            h.i, h.p, h.axioms, h.hypotheses, h.mixed
        ));
    }
    let found = hits.iter().any(|h| h.hypotheses && h.mixed);
    text.push_str(if found {
        "mixed positive case found\n"
    } else {
        "mixed positive case: not found within these candidates and bounds\n"
    });
    Ok(emit(cfg, 0, text, &json!({"hits": hits, "mixed_positive_found": found})))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exec(args: &[&str]) -> Outcome {
        let mut v = vec!["corrkit"];
        v.extend_from_slice(args);
        execute(&Cli::try_parse_from(v).unwrap())
    }

    #[test]
    fn missing_input_is_exit_2() {
        let o = exec(&["run", "--input", "/nonexistent/corpus.json"]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("/nonexistent/corpus.json"));
    }

    #[test]
    fn unknown_suite_is_exit_2() {
        assert_eq!(exec(&["--suite", "nope"]).code, 2);
    }

    #[test]
    fn injective_surjective_instance_fails_at_axiom_three() {
        let o = exec(&["shriek", "verify", "--instance", "nagata inj/surj", "--format", "json"]);
        assert_eq!(o.code, 1);
        let rep: VerificationReport = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(rep.failed_ids(), vec!["axioms.nagata.3.P"]);
    }

    #[test]
    fn corpus_list_is_stable() {
        assert_eq!(exec(&["corpus", "list"]), exec(&["corpus", "list"]));
    }

    #[test]
    fn shriek_build_prints_a_table() {
        let o = exec(&["shriek", "build", "--instance", "nagata all/isos chain2"]);
        assert_eq!(o.code, 0, "{}", o.stdout);
        assert!(o.stdout.contains("2->1[0,0]"));
    }
}
