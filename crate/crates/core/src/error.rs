use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // spaces
    #[error("open sets are not closed under {op}: {left} and {right}")]
    ClosureViolation { op: &'static str, left: String, right: String },
    #[error("the empty set and the whole space must both be open")]
    MissingEmptyOrWhole,
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("duplicate {0}")]
    Duplicate(String),
    #[error("{what} has {got} elements, the limit is {limit}")]
    TooLarge { what: &'static str, got: usize, limit: usize },
    #[error("covers have different targets")]
    TargetMismatch,
    #[error("map `{0}` is not continuous")]
    NotContinuous(String),
    #[error("set {0} is not open")]
    NotOpen(String),

    // presheaves
    #[error("restriction from {0} to itself is not the identity")]
    IdentityLawViolation(String),
    #[error("restrictions {u} -> {v} -> {w} do not compose to {u} -> {w}")]
    CompositionLawViolation { u: String, v: String, w: String },
    #[error("missing or malformed restriction {from} -> {to}")]
    BadRestriction { from: String, to: String },
    #[error("element `{element}` is not in the set over {open}")]
    ElementNotInSet { open: String, element: String },
    #[error("atlas charts {i} and {j} disagree near point `{point}`")]
    IncompatibleAtlas { i: usize, j: usize, point: String },
    #[error("charts do not cover the space")]
    CoverIncomplete,
    #[error("section is not global")]
    NotGlobal,
    #[error("not a local homeomorphism: {0}")]
    NotLocalHomeomorphism(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    // groupoids
    #[error("groupoid axiom `{law}` fails at {witness}")]
    AxiomViolation { law: &'static str, witness: String },
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("relation is not an equivalence relation: {0}")]
    NotEquivalence(String),
    #[error("not a group action: {0}")]
    NotAction(String),
    #[error("an arrow topology is required")]
    TopologyRequired,
    #[error("chart {0} is not wide")]
    NotWide(usize),
    #[error("chart {0} is not a subgroupoid")]
    NotSubgroupoid(usize),
    #[error("charts {i} and {j} are incompatible at point `{point}`")]
    Incompatible { i: usize, j: usize, point: String },
    #[error("local subgroupoids live over different groupoids")]
    BaseMismatch,

    // holonomy
    #[error("not an admissible section: {0}")]
    NotAdmissible(&'static str),
    #[error("atlas is not strictly regular")]
    NotStrictlyRegular,
    #[error("condition {cond} fails: {witness}")]
    ConditionFailed { cond: &'static str, witness: String },
    #[error("pair is not a locally topological groupoid")]
    NotLocallyTop,
    #[error("no continuous admissible section through arrow `{0}`")]
    SectionSearchExhausted(String),

    // actions
    #[error("action does not cover the target map at {0}")]
    SquareViolation(String),
    #[error("identity arrows do not act trivially at {0}")]
    UnitViolation(String),
    #[error("action is not associative at {0}")]
    AssocViolation(String),
    #[error("action table incomplete at {0}")]
    ActionIncomplete(String),
    #[error("charts do not form an atlas for the local subgroupoid")]
    NotAnAtlas,
    #[error("action on chart {0} is invalid")]
    ActionInvalid(usize),
    #[error("lift of `{0}` is not unique")]
    LiftNotUnique(String),
    #[error("lift of `{0}` is missing")]
    LiftMissing(String),
}
