use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(vertices: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); vertices],
        }
    }

    /// Builds a graph from an edge list. Self-loops and out-of-range endpoints
    /// are rejected; repeated edges are merged.
    pub fn from_edges(vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(vertices);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn cycle(vertices: usize) -> Self {
        let edges = (0..vertices).map(|i| (i, (i + 1) % vertices));
        Self::from_edges(vertices, edges).expect("cycle edges are valid")
    }

    pub fn complete(vertices: usize) -> Self {
        let edges = (0..vertices).flat_map(|u| (u + 1..vertices).map(move |v| (u, v)));
        Self::from_edges(vertices, edges).expect("complete graph edges are valid")
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.vertices();
        if u == v {
            return Err(Error::InvalidParams(format!("self-loop at vertex {u}")));
        }
        if u >= n || v >= n {
            return Err(Error::InvalidParams(format!(
                "edge ({u},{v}) outside a graph of {n} vertices"
            )));
        }
        for (a, b) in [(u, v), (v, u)] {
            if let Err(pos) = self.adjacency[a].binary_search(&b) {
                self.adjacency[a].insert(pos, b);
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency
            .get(u)
            .is_some_and(|nbrs| nbrs.binary_search(&v).is_ok())
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn min_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn is_regular(&self) -> bool {
        self.adjacency.windows(2).all(|w| w[0].len() == w[1].len())
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.vertices()).filter(|&u| self.degree(u) == 0).collect()
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Text form: header `n <count>` then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.vertices());
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").expect("writing to a String");
        }
        out
    }

    /// Parses the [`Graph::to_edge_list`] format. Blank lines and lines
    /// starting with `#` are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Parse("edge list is empty".into()))?;
        let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["n", count] => count
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad vertex count {count:?}: {e}")))?,
            _ => return Err(Error::Parse(format!("expected header `n <count>`, got {header:?}"))),
        };
        let mut g = Self::empty(n);
        for (lineno, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [u, v] = fields[..] else {
                return Err(Error::Parse(format!("line {lineno}: expected `u v`, got {line:?}")));
            };
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("line {lineno}: {s:?}: {e}")))
            };
            g.add_edge(parse(u)?, parse(v)?)
                .map_err(|e| Error::Parse(format!("line {lineno}: {e}")))?;
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_basics() {
        let g = Graph::cycle(6);
        assert_eq!(g.edge_count(), 6);
        assert!(g.is_regular());
        assert_eq!(g.neighbors(0), &[1, 5]);
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges, vec![(0, 1), (0, 5), (1, 2), (2, 3), (3, 4), (4, 5)]);
    }

    #[test]
    fn rejects_loops_and_range() {
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
        let g = Graph::from_edges(3, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::complete(5);
        let text = g.to_edge_list();
        assert!(text.starts_with("n 5\n0 1\n"));
        assert_eq!(Graph::parse_edge_list(&text).unwrap(), g);
        let with_comments = "# c6\nn 6\n\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n";
        assert_eq!(Graph::parse_edge_list(with_comments).unwrap(), Graph::cycle(6));
    }

    #[test]
    fn edge_list_errors() {
        assert!(Graph::parse_edge_list("").is_err());
        assert!(Graph::parse_edge_list("vertices 3\n").is_err());
        assert!(Graph::parse_edge_list("n 3\n0 1 2\n").is_err());
        assert!(Graph::parse_edge_list("n 3\n0 7\n").is_err());
        assert!(Graph::parse_edge_list("n 3\n2 2\n").is_err());
    }
}
