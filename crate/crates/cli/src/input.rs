//! The JSON input envelope and the workspace configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub const INPUT_SCHEMA: &str = "corrkit-input/1";

pub const MAX_DIM: usize = 4;
pub const MAX_APEX: usize = 4;
pub const MAX_LEVEL: usize = 2;
pub const MAX_FINSET: usize = 3;
pub const MAX_MODEL_SET: usize = 2;
pub const MAX_LATTICE: usize = 8;
/// Span apexes used by the theorem suite; composites of larger apexes carry
/// lattices too large to tabulate.
pub const THEOREM_APEX: usize = 2;

/// Anything wrong with an input file or a flag value; maps to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub origin: String,
    pub path: Option<String>,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl InputError {
    pub fn new(origin: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            origin: origin.into(),
            path: None,
            line: None,
            column: None,
            message: message.into(),
        }
    }

    pub fn at(mut self, path: impl Into<String>) -> Self {
        self.path = Some(path.into());
        self
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.origin)?;
        if let (Some(l), Some(c)) = (self.line, self.column) {
            write!(f, ":{l}:{c}")?;
        }
        if let Some(p) = &self.path {
            write!(f, " at `{p}`")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for InputError {}

/// Parses JSON into `T`, reporting line, column and the field path on failure.
pub fn parse_json<T: serde::de::DeserializeOwned>(origin: &str, text: &str) -> Result<T, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    match serde_path_to_error::deserialize::<_, T>(de) {
        Ok(v) => Ok(v),
        Err(e) => {
            let path = e.path().to_string();
            let inner = e.into_inner();
            Err(InputError {
                origin: origin.to_string(),
                path: (path != ".").then_some(path),
                line: Some(inner.line()),
                column: Some(inner.column()),
                message: inner.to_string(),
            })
        }
    }
}

pub fn read_file(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError::new(path.display().to_string(), e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Category,
    Setup,
    Corr,
    Model,
    Theorem,
    Descent,
    Localization,
}

impl Suite {
    /// Dependency order.
    pub const ALL: [Suite; 7] = [
        Suite::Category,
        Suite::Setup,
        Suite::Corr,
        Suite::Model,
        Suite::Theorem,
        Suite::Descent,
        Suite::Localization,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Suite::Category => "category",
            Suite::Setup => "setup",
            Suite::Corr => "corr",
            Suite::Model => "model",
            Suite::Theorem => "theorem",
            Suite::Descent => "descent",
            Suite::Localization => "localization",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.id() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Bounds and selections for one run. Missing keys take the defaults below.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WorkspaceConfig {
    /// Input files; the built-in corpus when empty.
    pub inputs: Vec<PathBuf>,
    /// Largest simplex dimension enumerated.
    pub max_dim: usize,
    /// Largest apex size used for spans.
    pub max_apex: usize,
    /// Truncation level of Čech nerves.
    pub level: usize,
    pub format: Format,
    /// Suites to run; all of them when empty.
    pub suites: Vec<Suite>,
    /// Instance names to run; all of them when empty.
    pub instances: Vec<String>,
}

impl Default for WorkspaceConfig {
    fn default() -> Self {
        Self {
            inputs: Vec::new(),
            max_dim: 2,
            max_apex: 4,
            level: 2,
            format: Format::Text,
            suites: Vec::new(),
            instances: Vec::new(),
        }
    }
}

impl WorkspaceConfig {
    pub fn validate(&self) -> Result<(), InputError> {
        let bound = |name: &str, v: usize, max: usize| {
            if v > max {
                Err(InputError::new("config", format!("{v} exceeds the supported bound {max}")).at(name))
            } else {
                Ok(())
            }
        };
        bound("max_dim", self.max_dim, MAX_DIM)?;
        bound("max_apex", self.max_apex, MAX_APEX)?;
        bound("level", self.level, MAX_LEVEL)?;
        if self.level == 0 {
            return Err(InputError::new("config", "the Čech level must be at least 1").at("level"));
        }
        Ok(())
    }

    pub fn selects(&self, s: Suite) -> bool {
        self.suites.is_empty() || self.suites.contains(&s)
    }

    pub fn selects_instance(&self, name: &str) -> bool {
        self.instances.is_empty() || self.instances.iter().any(|n| n == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    pub schema: String,
    pub instances: Vec<Instance>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub name: String,
    #[serde(default, skip_serializing_if = "Expectation::is_empty")]
    pub expect: Expectation,
    pub spec: InstanceSpec,
}

/// Check-id patterns expected to fail or hit a resource limit. A pattern
/// matches an id equal to it or starting with it followed by `.`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fail: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub limit: Vec<String>,
}

impl Expectation {
    pub fn is_empty(&self) -> bool {
        self.fail.is_empty() && self.limit.is_empty()
    }
}

pub fn pattern_matches(pattern: &str, id: &str) -> bool {
    id == pattern || (id.starts_with(pattern) && id[pattern.len()..].starts_with('.'))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InstanceSpec {
    /// Finite sets `0..=max` with named edge classes.
    Finset { max: usize, edges: Vec<String> },
    /// The staircase category of an `n`-simplex.
    Staircase { n: usize },
    Category { category: CategorySpec },
    Lattice {
        lattice: LatticeSpec,
        #[serde(default)]
        tensor: TensorName,
    },
    FrameModel {
        lattice: LatticeSpec,
        #[serde(default)]
        tensor: TensorName,
        max: usize,
        #[serde(default = "Law::all")]
        laws: Vec<Law>,
    },
    Nagata {
        max: usize,
        e: String,
        i: String,
        p: String,
        lattice: LatticeSpec,
        #[serde(default)]
        tensor: TensorName,
    },
    Pair {
        pair_kind: PairKindName,
        max: usize,
        #[serde(default)]
        extras: Vec<ExtraObject>,
        s: String,
        e: String,
        s_prime: String,
        e_prime: String,
        #[serde(default)]
        atlases: Vec<AtlasSpec>,
        lattice: LatticeSpec,
        #[serde(default)]
        tensor: TensorName,
    },
    Localization { problem: LocalizationSpec },
}

impl InstanceSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            InstanceSpec::Finset { .. } => "finset",
            InstanceSpec::Staircase { .. } => "staircase",
            InstanceSpec::Category { .. } => "category",
            InstanceSpec::Lattice { .. } => "lattice",
            InstanceSpec::FrameModel { .. } => "frame_model",
            InstanceSpec::Nagata { .. } => "nagata",
            InstanceSpec::Pair { .. } => "pair",
            InstanceSpec::Localization { .. } => "localization",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TensorName {
    #[default]
    Meet,
    Join,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    ProjSharp,
    ProjStar,
    Kunneth,
    Adjointable,
    Pasting,
}

impl Law {
    pub fn all() -> Vec<Law> {
        vec![Law::ProjSharp, Law::ProjStar, Law::Kunneth, Law::Adjointable, Law::Pasting]
    }

    pub fn id(self) -> &'static str {
        match self {
            Law::ProjSharp => "proj-sharp",
            Law::ProjStar => "proj-star",
            Law::Kunneth => "kunneth",
            Law::Adjointable => "adjointable",
            Law::Pasting => "pasting",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKindName {
    Nice,
    Exceptional,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtraObject {
    pub label: String,
    pub size: usize,
}

/// A function `source -> target`; objects are sizes (`"2"`) or extra labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtlasSpec {
    pub source: String,
    pub target: String,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum LatticeSpec {
    Chain(usize),
    Boolean(usize),
    N5,
    M3,
    Explicit(ExplicitLattice),
}

impl LatticeSpec {
    /// `chain:3`, `boolean:2`, `n5`, `m3`.
    pub fn parse_short(s: &str) -> Option<LatticeSpec> {
        match s.split_once(':') {
            Some(("chain", n)) => n.parse().ok().map(LatticeSpec::Chain),
            Some(("boolean", n)) => n.parse().ok().map(LatticeSpec::Boolean),
            None if s == "n5" => Some(LatticeSpec::N5),
            None if s == "m3" => Some(LatticeSpec::M3),
            _ => None,
        }
    }
}

/// A lattice given by its elements and generating order relations `a <= b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitLattice {
    #[serde(default)]
    pub name: Option<String>,
    pub elements: Vec<String>,
    pub leq: Vec<(String, String)>,
    /// `tensor_table[a][b]` names `a ⊗ b`; overrides the `tensor` field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor_table: Option<Vec<Vec<String>>>,
    /// Rejects the lattice unless it is distributive.
    #[serde(default)]
    pub frame: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CategorySpec {
    Explicit(ExplicitCategory),
    /// The poset generated by the relations.
    Poset(PosetSpec),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitCategory {
    pub objects: Vec<String>,
    /// `[name, source, target]`.
    pub morphisms: Vec<(String, String, String)>,
    /// `[object, morphism]`.
    pub identities: Vec<(String, String)>,
    /// `[g, f, g∘f]`.
    pub compose: Vec<(String, String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetSpec {
    pub elements: Vec<String>,
    #[serde(default)]
    pub leq: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum LocalizationSpec {
    Builtin(BuiltinLocalization),
    Explicit(ExplicitLocalization),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinLocalization {
    Interval,
    CechPair,
    CechPairWithoutOverlap,
    DiscreteFiber,
    IntervalWithUnreachedObject,
}

/// A functor `p: source -> target` by names, and the class `R` of source morphisms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitLocalization {
    pub source: CategorySpec,
    pub target: CategorySpec,
    pub objects: BTreeMap<String, String>,
    pub morphisms: BTreeMap<String, String>,
    pub r: Vec<String>,
}

pub fn parse_input(origin: &str, text: &str) -> Result<InputFile, InputError> {
    let file: InputFile = parse_json(origin, text)?;
    if file.schema != INPUT_SCHEMA {
        return Err(InputError::new(origin, format!("expected schema {INPUT_SCHEMA}, found {}", file.schema)).at("schema"));
    }
    let mut seen = std::collections::BTreeSet::new();
    for (k, inst) in file.instances.iter().enumerate() {
        if !seen.insert(inst.name.as_str()) {
            return Err(InputError::new(origin, format!("duplicate instance name {}", inst.name))
                .at(format!("instances[{k}].name")));
        }
        validate_spec(&inst.spec).map_err(|m| InputError::new(origin, m).at(format!("instances[{k}].spec")))?;
    }
    Ok(file)
}

fn validate_spec(spec: &InstanceSpec) -> Result<(), String> {
    let cap = |what: &str, v: usize, max: usize| {
        if v > max {
            Err(format!("{what} = {v} exceeds the supported bound {max}"))
        } else {
            Ok(())
        }
    };
    let lat = |l: &LatticeSpec| match l {
        LatticeSpec::Chain(n) if *n == 0 => Err("a chain needs at least one element".to_string()),
        LatticeSpec::Chain(n) => cap("chain", *n, MAX_LATTICE),
        LatticeSpec::Boolean(k) => cap("boolean", 1 << (*k).min(8), MAX_LATTICE),
        LatticeSpec::Explicit(e) => cap("lattice size", e.elements.len(), MAX_LATTICE),
        _ => Ok(()),
    };
    match spec {
        InstanceSpec::Finset { max, edges } => {
            cap("max", *max, MAX_FINSET)?;
            if edges.is_empty() {
                return Err("no edge classes".into());
            }
            Ok(())
        }
        InstanceSpec::Staircase { n } => cap("n", *n, MAX_DIM),
        InstanceSpec::Category { .. } | InstanceSpec::Localization { .. } => Ok(()),
        InstanceSpec::Lattice { lattice, .. } => lat(lattice),
        InstanceSpec::FrameModel { lattice, max, .. } => {
            cap("max", *max, MAX_MODEL_SET)?;
            lat(lattice)
        }
        InstanceSpec::Nagata { max, lattice, .. } => {
            cap("max", *max, MAX_MODEL_SET)?;
            lat(lattice)
        }
        InstanceSpec::Pair { max, extras, lattice, .. } => {
            cap("max", *max, MAX_MODEL_SET)?;
            for x in extras {
                cap(&format!("size of {}", x.label), x.size, MAX_MODEL_SET)?;
            }
            lat(lattice)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_patterns() {
        assert!(pattern_matches("axioms.nagata.3", "axioms.nagata.3.P"));
        assert!(pattern_matches("axioms.nagata.3.P", "axioms.nagata.3.P"));
        assert!(!pattern_matches("axioms.nagata.3", "axioms.nagata.30"));
    }

    #[test]
    fn unknown_keys_are_rejected_with_a_path() {
        let text = r#"{"schema":"corrkit-input/1","instances":[
            {"name":"x","spec":{"kind":"finset","max":2,"edges":["all"],"colour":1}}]}"#;
        let e = parse_input("t.json", text).unwrap_err();
        assert_eq!(e.line, Some(2));
        assert!(e.message.contains("colour"), "{e}");
        assert!(e.path.as_deref().unwrap_or("").starts_with("instances[0]"), "{e}");
    }

    #[test]
    fn lattice_forms() {
        let l: LatticeSpec = serde_json::from_str(r#"{"chain":3}"#).unwrap();
        assert_eq!(l, LatticeSpec::Chain(3));
        let l: LatticeSpec = serde_json::from_str(r#""n5""#).unwrap();
        assert_eq!(l, LatticeSpec::N5);
        assert_eq!(LatticeSpec::parse_short("boolean:2"), Some(LatticeSpec::Boolean(2)));
    }

    #[test]
    fn bounds_are_enforced() {
        let text = r#"{"schema":"corrkit-input/1","instances":[
            {"name":"x","spec":{"kind":"nagata","max":3,"e":"all","i":"all","p":"isos","lattice":{"chain":2}}}]}"#;
        let e = parse_input("t.json", text).unwrap_err();
        assert!(e.message.contains("bound"), "{e}");
        let cfg = WorkspaceConfig { max_apex: 9, ..Default::default() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn config_rejects_unknown_keys() {
        assert!(parse_json::<WorkspaceConfig>("c", r#"{"max_dim":2,"colour":1}"#).is_err());
        let c: WorkspaceConfig = parse_json("c", r#"{"suites":["theorem"],"format":"json"}"#).unwrap();
        assert_eq!(c.suites, vec![Suite::Theorem]);
        assert_eq!(c.max_apex, 4);
    }
}
