use super::Graph;
use crate::error::{Error, Result};

/// Upper bound on `n` for [`complete_graph`].
pub const MAX_COMPLETE: usize = 16;

/// `K_n` on `labels` (default `"1"..="n"`), edges in lexicographic order.
pub fn complete_graph<S: AsRef<str>>(n: usize, labels: Option<&[S]>) -> Result<Graph> {
    if !(1..=MAX_COMPLETE).contains(&n) {
        return Err(Error::Size(format!(
            "K_{n}: n must be in 1..={MAX_COMPLETE}"
        )));
    }
    let labels: Vec<String> = match labels {
        Some(l) if l.len() != n => {
            return Err(Error::InvalidGraph(format!(
                "K_{n} needs {n} labels, got {}",
                l.len()
            )))
        }
        Some(l) => l.iter().map(|s| s.as_ref().to_string()).collect(),
        None => (1..=n).map(|i| i.to_string()).collect(),
    };
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((labels[i].clone(), labels[j].clone()));
        }
    }
    Graph::new(&labels, &pairs)
}

fn cliques(labels: &[&str], groups: &[&[&str]], extra: &[(&str, &str)]) -> Result<Graph> {
    let mut pairs: Vec<(&str, &str)> = Vec::new();
    for group in groups {
        for (i, a) in group.iter().enumerate() {
            for b in &group[i + 1..] {
                if !pairs
                    .iter()
                    .any(|&(x, y)| (x, y) == (*a, *b) || (x, y) == (*b, *a))
                {
                    pairs.push((a, b));
                }
            }
        }
    }
    pairs.extend_from_slice(extra);
    Graph::new(labels, &pairs)
}

/// Builds a graph from a descriptor:
///
/// * `k{n}`: complete graph;
/// * `k6-c6-k6`: K6 on `1..6` and K6 on `A..F` joined by the alternating
///   6-cycle `4-A-5-B-6-C-4`;
/// * `k7-e-k7`: K7 on `1..7` and K7 on `6,7,A..E` sharing the edge `(6,7)`;
/// * `union:d1,d2,...`: disjoint union, copy `i` (1-based) relabelled `i:label`.
pub fn build_construction(descriptor: &str) -> Result<Graph> {
    let d = descriptor.trim();
    if let Some(rest) = d.strip_prefix("union:") {
        let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
        if parts.iter().any(|p| p.is_empty()) {
            return Err(Error::Parse(format!("empty component in `{d}`")));
        }
        let mut labels = Vec::new();
        let mut edges = Vec::new();
        for (i, part) in parts.iter().enumerate() {
            if part.starts_with("union:") {
                return Err(Error::Parse("nested unions are not supported".into()));
            }
            let g = build_construction(part)?;
            let offset = labels.len();
            labels.extend(g.labels().iter().map(|l| format!("{}:{}", i + 1, l)));
            edges.extend(g.edges().iter().map(|&(u, v)| (u + offset, v + offset)));
        }
        if labels.len() > super::MAX_VERTICES {
            return Err(Error::Size(format!("union has {} vertices", labels.len())));
        }
        return Graph::from_indices(labels, edges);
    }
    match d {
        "k6-c6-k6" => cliques(
            &["1", "2", "3", "4", "5", "6", "A", "B", "C", "D", "E", "F"],
            &[
                &["1", "2", "3", "4", "5", "6"],
                &["A", "B", "C", "D", "E", "F"],
            ],
            &[
                ("4", "A"),
                ("4", "C"),
                ("5", "A"),
                ("5", "B"),
                ("6", "B"),
                ("6", "C"),
            ],
        ),
        "k7-e-k7" => cliques(
            &["1", "2", "3", "4", "5", "6", "7", "A", "B", "C", "D", "E"],
            &[
                &["1", "2", "3", "4", "5", "6", "7"],
                &["6", "7", "A", "B", "C", "D", "E"],
            ],
            &[],
        ),
        _ => {
            let n = d
                .strip_prefix('k')
                .or_else(|| d.strip_prefix('K'))
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| Error::Parse(format!("unknown construction `{d}`")))?;
            complete_graph::<&str>(n, None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_edge_counts() {
        assert_eq!(complete_graph::<&str>(6, None).unwrap().edge_count(), 15);
        assert_eq!(complete_graph::<&str>(10, None).unwrap().edge_count(), 45);
        assert_eq!(complete_graph::<&str>(1, None).unwrap().edge_count(), 0);
        assert!(matches!(
            complete_graph::<&str>(0, None),
            Err(Error::Size(_))
        ));
        assert!(matches!(
            complete_graph::<&str>(17, None),
            Err(Error::Size(_))
        ));
    }

    /// Counts edges of the two constructions by listing them independently.
    #[test]
    fn construction_edge_counts() {
        let g = build_construction("k6-c6-k6").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (12, 36));
        for (a, b) in [
            ("4", "A"),
            ("4", "C"),
            ("5", "A"),
            ("5", "B"),
            ("6", "B"),
            ("6", "C"),
        ] {
            g.edge_by_labels(a, b).unwrap();
        }
        assert!(g.edge_by_labels("4", "B").is_err());

        let h = build_construction("k7-e-k7").unwrap();
        assert_eq!((h.vertex_count(), h.edge_count()), (12, 41));
        assert!(h.edge_by_labels("1", "A").is_err());
        h.edge_by_labels("6", "7").unwrap();

        let u = build_construction("union:k10,k10").unwrap();
        assert_eq!((u.vertex_count(), u.edge_count()), (20, 90));
        u.vertex("2:10").unwrap();
    }

    #[test]
    fn unknown_descriptors_are_parse_errors() {
        for d in ["k6-k6", "petersen", "union:", "union:k3,,k3", "kx"] {
            assert!(matches!(build_construction(d), Err(Error::Parse(_))), "{d}");
        }
    }
}
