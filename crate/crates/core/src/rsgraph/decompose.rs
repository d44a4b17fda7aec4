use std::collections::HashSet;

use serde::Serialize;

use super::graph::Graph;

/// Edges of one matching, each stored as `(u, v)` with `u < v`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Matching {
    edges: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new(edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Self {
            edges: edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect(),
        }
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Endpoint set in ascending order.
    pub fn nodes(&self) -> Vec<usize> {
        let mut nodes: Vec<usize> = self.edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        nodes.sort_unstable();
        nodes
    }

    /// Matched partner of `u`, if `u` is an endpoint.
    pub fn partner(&self, u: usize) -> Option<usize> {
        self.edges.iter().find_map(|&(a, b)| {
            if a == u {
                Some(b)
            } else if b == u {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Pairwise non-adjacent edges.
    pub fn is_matching(&self) -> bool {
        let nodes = self.nodes();
        nodes.windows(2).all(|w| w[0] != w[1])
    }

    /// A matching of `graph` whose endpoints span no other graph edge.
    pub fn is_induced_in(&self, graph: &Graph) -> bool {
        if !self.is_matching() || !self.edges.iter().all(|&(u, v)| graph.has_edge(u, v)) {
            return false;
        }
        let nodes = self.nodes();
        nodes.iter().enumerate().all(|(i, &a)| {
            nodes[i + 1..]
                .iter()
                .all(|&b| !graph.has_edge(a, b) || self.partner(a) == Some(b))
        })
    }

    fn accepts(&self, graph: &Graph, u: usize, v: usize) -> bool {
        self.edges.iter().all(|&(a, b)| {
            [a, b]
                .iter()
                .all(|&x| x != u && x != v && !graph.has_edge(x, u) && !graph.has_edge(x, v))
        })
    }
}

/// Edge-disjoint induced matchings of uniform size `γ` plus leftover edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RsDecomposition {
    pub gamma: usize,
    pub matchings: Vec<Matching>,
    pub residual: Vec<(usize, usize)>,
}

impl RsDecomposition {
    pub fn tau(&self) -> usize {
        self.matchings.len()
    }
}

/// Greedy decomposition over edges in lexicographic order: each edge joins
/// the first open matching (fewer than `γ` edges) that stays induced,
/// otherwise opens a new one. Matchings that end short of `γ` edges are
/// dissolved into the residual list.
pub fn rs_decompose(graph: &Graph, gamma: usize) -> RsDecomposition {
    assert!(gamma >= 1, "matching size γ must be at least 1");
    let mut open: Vec<Matching> = Vec::new();
    for (u, v) in graph.edges() {
        match open
            .iter_mut()
            .find(|m| m.len() < gamma && m.accepts(graph, u, v))
        {
            Some(m) => m.edges.push((u, v)),
            None => open.push(Matching::new([(u, v)])),
        }
    }
    let (matchings, short): (Vec<_>, Vec<_>) = open.into_iter().partition(|m| m.len() == gamma);
    let mut residual: Vec<(usize, usize)> = short.into_iter().flat_map(|m| m.edges).collect();
    residual.sort_unstable();
    RsDecomposition {
        gamma,
        matchings,
        residual,
    }
}

/// Every matching is an induced matching of `graph` with exactly `γ` edges,
/// and no edge appears in two matchings.
pub fn verify_rs_property(graph: &Graph, decomposition: &RsDecomposition) -> bool {
    let mut seen = HashSet::new();
    decomposition.matchings.iter().all(|m| {
        m.len() == decomposition.gamma
            && m.is_induced_in(graph)
            && m.edges().iter().all(|&e| seen.insert(e))
    })
}

/// Matchings and residual edges together list every edge exactly once.
pub fn is_edge_partition(graph: &Graph, decomposition: &RsDecomposition) -> bool {
    let mut listed: Vec<(usize, usize)> = decomposition
        .matchings
        .iter()
        .flat_map(|m| m.edges().iter().copied())
        .chain(decomposition.residual.iter().map(|&(u, v)| (u.min(v), u.max(v))))
        .collect();
    listed.sort_unstable();
    listed.iter().copied().eq(graph.edges())
}
