use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graphs::{Cycle, EdgeSet, Graph, IntersectionType};
use crate::homology::{EdgeSigning, SigningConstraintSet, Z2};

/// A cycle stored as its canonical vertex-label sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleRef(pub Vec<String>);

impl CycleRef {
    pub fn of(g: &Graph, c: &Cycle) -> Self {
        CycleRef(c.labels(g))
    }

    pub fn resolve(&self, g: &Graph) -> Result<Cycle> {
        Cycle::from_labels(g, &self.0)
    }
}

impl fmt::Display for CycleRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.join(", "))
    }
}

/// How the witness cycle is linked to the external cycle in a composition.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SecondLink {
    /// Witness and external cycle are disjoint and both 1-homologous.
    #[default]
    OneHomologous,
    /// A link recorded from elsewhere (an axiom or an earlier step).
    Recorded { reason: String },
}

impl SecondLink {
    fn is_default(&self) -> bool {
        *self == SecondLink::OneHomologous
    }
}

/// Whether a row composes through a path intersection or the witness is the linked cycle itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowForm {
    LlComposition,
    ThreeChain,
}

/// One candidate linked pair of a composition, oriented so that `linked[0]`
/// meets the witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRow {
    pub linked: [CycleRef; 2],
    pub witness: CycleRef,
    pub intersection: IntersectionType,
    pub form: RowForm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule")]
pub enum Certificate {
    #[serde(rename = "disjoint_one_pair")]
    DisjointOnePair { cycles: [CycleRef; 2] },
    #[serde(rename = "disjoint_one_triple")]
    DisjointOneTriple { cycles: [CycleRef; 3] },
    /// A linked pair taken from an axiom or an earlier step rather than from homology.
    #[serde(rename = "recorded_link")]
    RecordedLink {
        cycles: [CycleRef; 2],
        reason: String,
    },
    /// The K6 has a linked pair among its 10 disjoint triangle pairs; which one is not recorded.
    #[serde(rename = "zero_hom_k4_in_k6")]
    ZeroHomK4InK6 { k6: Vec<String>, k4: Vec<String> },
    #[serde(rename = "ll_composition")]
    LlComposition {
        link_source: Box<Certificate>,
        external: CycleRef,
        #[serde(default, skip_serializing_if = "SecondLink::is_default")]
        second_link: SecondLink,
        rows: Vec<WitnessRow>,
    },
    /// `cycles[0]` and `cycles[2]` are disjoint and both linked to `cycles[1]`.
    #[serde(rename = "three_chain")]
    ThreeChain {
        cycles: [CycleRef; 3],
        link_source: Box<Certificate>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    DisjointOnePair,
    DisjointOneTriple,
    RecordedLink,
    ZeroHomK4InK6,
    LlComposition,
    ThreeChain,
}

impl CertificateKind {
    pub const ALL: [CertificateKind; 6] = [
        CertificateKind::DisjointOnePair,
        CertificateKind::DisjointOneTriple,
        CertificateKind::RecordedLink,
        CertificateKind::ZeroHomK4InK6,
        CertificateKind::LlComposition,
        CertificateKind::ThreeChain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CertificateKind::DisjointOnePair => "disjoint_one_pair",
            CertificateKind::DisjointOneTriple => "disjoint_one_triple",
            CertificateKind::RecordedLink => "recorded_link",
            CertificateKind::ZeroHomK4InK6 => "zero_hom_k4_in_k6",
            CertificateKind::LlComposition => "ll_composition",
            CertificateKind::ThreeChain => "three_chain",
        }
    }
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Certificate {
    pub fn kind(&self) -> CertificateKind {
        match self {
            Certificate::DisjointOnePair { .. } => CertificateKind::DisjointOnePair,
            Certificate::DisjointOneTriple { .. } => CertificateKind::DisjointOneTriple,
            Certificate::RecordedLink { .. } => CertificateKind::RecordedLink,
            Certificate::ZeroHomK4InK6 { .. } => CertificateKind::ZeroHomK4InK6,
            Certificate::LlComposition { .. } => CertificateKind::LlComposition,
            Certificate::ThreeChain { .. } => CertificateKind::ThreeChain,
        }
    }

    /// True for the rules that yield a three-component link.
    pub fn is_triple_link(&self) -> bool {
        matches!(
            self.kind(),
            CertificateKind::DisjointOneTriple
                | CertificateKind::LlComposition
                | CertificateKind::ThreeChain
        )
    }

    /// The link source of a composition, if any.
    pub fn link_source(&self) -> Option<&Certificate> {
        match self {
            Certificate::LlComposition { link_source, .. }
            | Certificate::ThreeChain { link_source, .. } => Some(link_source),
            _ => None,
        }
    }

    /// One-line human-readable summary.
    pub fn summary(&self) -> String {
        match self {
            Certificate::DisjointOnePair { cycles: [a, b] } => {
                format!("disjoint 1-hom pair {a} {b}")
            }
            Certificate::DisjointOneTriple { cycles: [a, b, c] } => {
                format!("disjoint 1-hom triple {a} {b} {c}")
            }
            Certificate::RecordedLink {
                cycles: [a, b],
                reason,
            } => format!("linked pair {a} {b} ({reason})"),
            Certificate::ZeroHomK4InK6 { k6, k4 } => {
                format!("K6 [{}] with 0-hom K4 [{}]", k6.join(", "), k4.join(", "))
            }
            Certificate::LlComposition {
                link_source,
                external,
                rows,
                ..
            } => format!(
                "composition of {} with external {external} ({} rows)",
                link_source.summary(),
                rows.len()
            ),
            Certificate::ThreeChain {
                cycles: [a, b, c], ..
            } => format!("chain {a} - {b} - {c}"),
        }
    }
}

/// A failed rule check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    pub cycles: Vec<CycleRef>,
    pub note: String,
}

impl Violation {
    pub fn new(rule: &str, cycles: Vec<CycleRef>, note: impl Into<String>) -> Self {
        Violation {
            rule: rule.to_string(),
            cycles,
            note: note.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.note)?;
        for c in &self.cycles {
            write!(f, " {c}")?;
        }
        Ok(())
    }
}

/// Source of cycle classes: a concrete signing, or partial knowledge where
/// `None` means "not determined".
pub trait ClassOracle {
    fn graph(&self) -> &Graph;
    fn edges_class(&self, edges: &EdgeSet) -> Option<Z2>;

    fn class(&self, c: &Cycle) -> Option<Z2> {
        self.edges_class(c.edge_set())
    }
}

impl ClassOracle for EdgeSigning {
    fn graph(&self) -> &Graph {
        EdgeSigning::graph(self)
    }

    fn edges_class(&self, edges: &EdgeSet) -> Option<Z2> {
        Some(Z2::from_parity(self.negative_edges().odd_overlap(edges)))
    }
}

impl ClassOracle for SigningConstraintSet {
    fn graph(&self) -> &Graph {
        SigningConstraintSet::graph(self)
    }

    fn edges_class(&self, edges: &EdgeSet) -> Option<Z2> {
        SigningConstraintSet::edges_class(self, edges)
    }
}
