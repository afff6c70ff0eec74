use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::certificates::CertificateKind;
use crate::error::{Error, Result};

pub type Labels = Vec<String>;

/// A vertex set: explicit labels or a connected component (1-based, in vertex order).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexSpec {
    Labels(Labels),
    Component { component: usize },
}

/// A statement about the signing that can be assumed, derived, or transported.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "fact", rename_all = "snake_case")]
pub enum Fact {
    Edge {
        edge: [String; 2],
        sign: Sign,
    },
    Cycle {
        cycle: Labels,
        class: u8,
    },
    /// Every cycle of the induced subgraph is 0-homologous.
    Zero {
        vertices: VertexSpec,
    },
    /// The induced subgraph has a 1-homologous cycle (stored over its triangles).
    HasOne {
        vertices: VertexSpec,
    },
    /// All edges from `vertex` to `over` carry the same sign.
    Uniform {
        vertex: String,
        over: Labels,
    },
    AtLeast {
        cycles: Vec<Labels>,
        count: usize,
    },
    Linked {
        cycles: [Labels; 2],
        reason: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

/// Objects quantified over by a symmetry step. Each object is a tuple of vertex sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObjectKind {
    VertexSets {
        #[serde(default)]
        within: Option<VertexSpec>,
        size: usize,
    },
    Triangles {
        #[serde(default)]
        within: Option<VertexSpec>,
    },
    /// Unordered pairs of vertex-disjoint triangles.
    DisjointTrianglePairs {
        #[serde(default)]
        within: Option<VertexSpec>,
        /// Keep only pairs with one vertex in each triangle.
        #[serde(default)]
        separating: Option<[String; 2]>,
    },
    OrderedVertexPairs {
        #[serde(default)]
        within: Option<VertexSpec>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transport {
    /// State the transported argument started from.
    pub snapshot: String,
    pub map: Vec<[String; 2]>,
    pub facts: Vec<Fact>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Switch at vertices of an all-0 subgraph until its edges are `+`.
    SwitchToPlus(Labels),
    /// Fix the K6 on `vertices` to the given representative of the linkless class.
    LinklessK6 {
        vertices: Labels,
        negative: Vec<[String; 2]>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Triangle(Labels),
    AllZero,
    HasOne,
}

/// A cycle slot in a certificate template: labels, or `"k4_one"` for a
/// 1-homologous triangle of the branch K4 disjoint from the other slots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CycleSlot {
    Cycle(Labels),
    Placeholder(String),
}

pub const K4_ONE: &str = "k4_one";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertSpec {
    Triple([CycleSlot; 3]),
    /// Composition seeded by an all-0 K4 in a K6, second link recorded earlier.
    ComposeWithLink {
        k6: Labels,
        k4: Labels,
        witness: Labels,
        external: Labels,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub when: Condition,
    pub certificate: CertSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    /// Per subgraph: `0` (all cycles 0-homologous) or `1` (has a 1-homologous
    /// cycle). Case keys are comma-separated digits.
    SubgraphHomology { subgraphs: Vec<VertexSpec> },
    /// Case keys `uniform` and `mixed`.
    VertexUniform { vertex: String, over: Labels },
    /// Uniform connector signs per vertex; keys like `1+,2-,3+`.
    ConnectorSigns { vertices: Labels, over: Labels },
    /// Which member of a set known to contain a 1-homologous cycle is 1; keys
    /// are cycles written `(1, 2, 3)`.
    OneHomMember { cycles: Vec<Labels> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case {
    pub case: String,
    /// The argument continues after the split in this case.
    #[serde(default, rename = "continue")]
    pub continues: bool,
    #[serde(default)]
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleSet {
    #[serde(default)]
    pub cycles: Option<Vec<Labels>>,
    #[serde(default)]
    pub triangles_within: Option<VertexSpec>,
    /// With `triangles_within`: keep triangles with at least `min_touch` of these vertices.
    #[serde(default)]
    pub touching: Option<Labels>,
    #[serde(default = "one")]
    pub min_touch: usize,
}

fn one() -> usize {
    1
}

fn three() -> usize {
    3
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Requirement {
    /// This many pairwise vertex-disjoint edges join the two cycles.
    DisjointEdges(usize),
    /// The vertex lies on or next to the first cycle, is adjacent to the second, and is not on it.
    ViaVertex(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "claim", rename_all = "snake_case")]
pub enum Claim {
    /// Every disjoint triangle pair inside `within` either separates the two
    /// vertices or composes with the recorded link `witness`-`external`.
    SplitOrCompose {
        within: Labels,
        separating: [String; 2],
        witness: Labels,
        external: Labels,
        source_reason: String,
    },
    /// Under every admissible assignment on the triangles of the two K4s some
    /// 1-hom pair (a, b) composes with the recorded link `witness`-`external`.
    CrossCompose {
        a: Labels,
        b: Labels,
        witness: Labels,
        external: Labels,
    },
    /// The fixed cycles are 1-homologous and each part has a 1-homologous
    /// triangle; all of them are pairwise disjoint.
    DisjointParts {
        fixed: Vec<Labels>,
        parts: Vec<VertexSpec>,
    },
    /// The K6 is linked, and every disjoint triangle pair of it has a triangle
    /// containing at least `count` of `cover`.
    LinkedPairCover {
        k6: Labels,
        #[serde(default)]
        k4: Option<Labels>,
        cover: Labels,
        count: usize,
    },
    /// On K6, every class with a disjoint 0-hom triangle pair has a disjoint
    /// 1-hom pair or an all-0 K4.
    K6ZeroPairForcesLink,
    /// Exhaustive classification of K6 classes passing the linkless conditions.
    LinklessK6Classes {
        expect_orbits: usize,
        #[serde(default)]
        oracle: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    Assume {
        #[serde(default)]
        label: Option<String>,
        facts: Vec<Fact>,
    },
    WlogOrbit {
        #[serde(default)]
        label: Option<String>,
        #[serde(default)]
        objects: Option<ObjectKind>,
        /// Alternative targets, each a tuple of vertex sets matching the objects.
        #[serde(default)]
        targets: Vec<Vec<Labels>>,
        #[serde(default)]
        fix: Labels,
        #[serde(default)]
        assume: Vec<Fact>,
        #[serde(default)]
        transport: Option<Transport>,
    },
    Normalize {
        #[serde(default)]
        label: Option<String>,
        #[serde(flatten)]
        normalization: Normalization,
    },
    ParityDerive {
        #[serde(default)]
        label: Option<String>,
        k4: Labels,
        cycle: Labels,
        class: u8,
    },
    BranchElim {
        #[serde(default)]
        label: Option<String>,
        k4: Labels,
        branches: Vec<Branch>,
        conclude: Vec<Fact>,
    },
    TableCheck {
        #[serde(default)]
        label: Option<String>,
        table: u32,
        /// Rows (1-based) recorded as failing; the step then checks exactly
        /// these fail and does not close the branch.
        #[serde(default)]
        expected_failures: Vec<usize>,
        #[serde(default)]
        note: Option<String>,
    },
    CaseSplit {
        #[serde(default)]
        label: Option<String>,
        #[serde(default)]
        snapshot: Option<String>,
        domain: Domain,
        cases: Vec<Case>,
    },
    Cert {
        #[serde(default)]
        label: Option<String>,
        kind: CertificateKind,
        #[serde(default)]
        cycles: Option<Vec<Labels>>,
        #[serde(default = "three")]
        max_cycle_len: usize,
    },
    ConnectorCheck {
        #[serde(default)]
        label: Option<String>,
        from: CycleSet,
        to: CycleSet,
        requirement: Requirement,
    },
    OrbitCount {
        #[serde(default)]
        label: Option<String>,
        graph: String,
        expected: usize,
        representatives: Vec<Labels>,
    },
    Pigeonhole {
        #[serde(default)]
        label: Option<String>,
        #[serde(flatten)]
        claim: Claim,
    },
    Axiom {
        #[serde(default)]
        label: Option<String>,
        axiom: String,
        statement: String,
        #[serde(default)]
        closes: bool,
        /// Subgraphs whose all-0 case the axiom settles; the remaining branch
        /// assumes each has a 1-homologous cycle.
        #[serde(default)]
        discharges: Option<Vec<VertexSpec>>,
        #[serde(default)]
        requires_zero: Option<VertexSpec>,
        /// Records that some disjoint pair inside this vertex set is linked.
        #[serde(default)]
        linked_within: Option<VertexSpec>,
    },
}

impl Step {
    pub fn kind(&self) -> &'static str {
        match self {
            Step::Assume { .. } => "ASSUME",
            Step::WlogOrbit { .. } => "WLOG_ORBIT",
            Step::Normalize { .. } => "NORMALIZE",
            Step::ParityDerive { .. } => "PARITY_DERIVE",
            Step::BranchElim { .. } => "BRANCH_ELIM",
            Step::TableCheck { .. } => "TABLE_CHECK",
            Step::CaseSplit { .. } => "CASE_SPLIT",
            Step::Cert { .. } => "CERT",
            Step::ConnectorCheck { .. } => "CONNECTOR_CHECK",
            Step::OrbitCount { .. } => "ORBIT_COUNT",
            Step::Pigeonhole { .. } => "PIGEONHOLE",
            Step::Axiom { .. } => "AXIOM",
        }
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            Step::Assume { label, .. }
            | Step::WlogOrbit { label, .. }
            | Step::Normalize { label, .. }
            | Step::ParityDerive { label, .. }
            | Step::BranchElim { label, .. }
            | Step::TableCheck { label, .. }
            | Step::CaseSplit { label, .. }
            | Step::Cert { label, .. }
            | Step::ConnectorCheck { label, .. }
            | Step::OrbitCount { label, .. }
            | Step::Pigeonhole { label, .. }
            | Step::Axiom { label, .. } => label.as_deref(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub pair: [Labels; 2],
    pub witness: Labels,
}

/// A composition table: candidate pairs of a K6 with their witnesses, in printed order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub id: u32,
    pub k6: Labels,
    pub k4: Labels,
    pub external: Labels,
    pub rows: Vec<TableRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofScript {
    pub id: String,
    pub statement: String,
    /// Construction descriptor.
    pub graph: String,
    pub axioms: Vec<String>,
    #[serde(default)]
    pub notes: Vec<String>,
    #[serde(default)]
    pub tables: Vec<Table>,
    pub steps: Vec<Step>,
}

impl ProofScript {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Script(e.to_string()))
    }

    pub fn table(&self, id: u32) -> Option<&Table> {
        self.tables.iter().find(|t| t.id == id)
    }

    /// Number of TABLE_CHECK steps anywhere in the script, by table id.
    pub fn table_checks(&self) -> BTreeMap<u32, usize> {
        fn walk(steps: &[Step], out: &mut BTreeMap<u32, usize>) {
            for s in steps {
                match s {
                    Step::TableCheck { table, .. } => *out.entry(*table).or_default() += 1,
                    Step::CaseSplit { cases, .. } => cases.iter().for_each(|c| walk(&c.steps, out)),
                    _ => {}
                }
            }
        }
        let mut out = BTreeMap::new();
        walk(&self.steps, &mut out);
        out
    }
}

const SOURCES: [(&str, &str); 7] = [
    ("prop5", include_str!("../../scripts/prop5.json")),
    ("prop6", include_str!("../../scripts/prop6.json")),
    ("prop7", include_str!("../../scripts/prop7.json")),
    ("thm8", include_str!("../../scripts/thm8.json")),
    ("prop9", include_str!("../../scripts/prop9.json")),
    ("prop10", include_str!("../../scripts/prop10.json")),
    ("prop12", include_str!("../../scripts/prop12.json")),
];

/// The shipped scripts, keyed by id.
pub fn builtin_scripts() -> BTreeMap<String, ProofScript> {
    SOURCES
        .iter()
        .map(|(id, text)| {
            let s =
                ProofScript::from_json(text).unwrap_or_else(|e| panic!("builtin script {id}: {e}"));
            assert_eq!(s.id, *id, "script id mismatch");
            (id.to_string(), s)
        })
        .collect()
}

pub fn builtin_script(id: &str) -> Result<ProofScript> {
    SOURCES
        .iter()
        .find(|(k, _)| *k == id)
        .map(|(_, text)| ProofScript::from_json(text))
        .unwrap_or_else(|| Err(Error::Script(format!("unknown script `{id}`"))))
}
