//! Sufficient conditions for links and triple-links, checked on signings or
//! on partial knowledge of one, and the searches built on them.

mod linkless;
pub(crate) mod rules;
mod search;
mod types;

pub use linkless::{linkless_k6_check, search_linkless_k6, LinklessK6Report};
pub use rules::{
    candidate_pairs, check_link_source, compose_with_link, disjoint_one_hom_pairs,
    disjoint_one_hom_triples, induced_k6s, ll_compose, verify_certificate, zero_hom_k4_links,
    Checked, WitnessEntry,
};
pub use search::{
    classify, find_triple_link_certificate, known_spatial_triple_linked, search_certificate_free,
    CertificateFree, CertificateSearch, Verdict, SPATIAL_AXIOM,
};
pub use types::{
    Certificate, CertificateKind, ClassOracle, CycleRef, RowForm, SecondLink, Violation, WitnessRow,
};
