//! Simple undirected graphs and the families used by the walk-matrix checks.
//!
//! Vertices are labelled `1..=order`. The extended Dynkin graph uses the
//! labelling under which `{1,2}, {3}, ..., {n-1}, {n,n+1}` is an equitable
//! partition: vertices 1 and 2 hang off vertex 3, vertices n and n+1 hang
//! off vertex n-1.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// Immutable simple graph on vertices `1..=order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    order: usize,
    // normalized so that u < v
    edges: BTreeSet<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from 1-indexed pairs. Duplicates (in either orientation)
    /// collapse; self-loops and out-of-range endpoints are rejected.
    pub fn from_edge_list(order: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if order == 0 {
            return Err(Error::MalformedInput("graph order must be positive".into()));
        }
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u == 0 || v == 0 || u > order || v > order {
                return Err(Error::MalformedInput(format!(
                    "edge ({u}, {v}) has an endpoint outside 1..={order}"
                )));
            }
            if u == v {
                return Err(Error::MalformedInput(format!("self-loop at vertex {u}")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let mut neighbors = vec![Vec::new(); order];
        for &(u, v) in &set {
            neighbors[u - 1].push(v);
            neighbors[v - 1].push(u);
        }
        for adj in &mut neighbors {
            adj.sort_unstable();
        }
        Ok(Graph {
            order,
            edges: set,
            neighbors,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Sorted neighbours of vertex `v` (1-indexed).
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v - 1]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v - 1].len()
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Symmetric 0/1 adjacency matrix.
    pub fn adjacency_matrix(&self) -> IntMatrix {
        let mut a = IntMatrix::zeros(self.order, self.order);
        for &(u, v) in &self.edges {
            a.set(u - 1, v - 1, BigInt::from(1));
            a.set(v - 1, u - 1, BigInt::from(1));
        }
        a
    }

    /// Adjacency matrix as dense `f64` rows, for the eigensolver.
    pub fn adjacency_f64(&self) -> Vec<Vec<f64>> {
        let mut a = vec![vec![0.0; self.order]; self.order];
        for &(u, v) in &self.edges {
            a[u - 1][v - 1] = 1.0;
            a[v - 1][u - 1] = 1.0;
        }
        a
    }

    /// The induced subgraph on `1..=keep`, i.e. the graph with the highest
    /// labelled vertices deleted.
    pub fn truncate(&self, keep: usize) -> Result<Graph> {
        let edges: Vec<_> = self
            .edges
            .iter()
            .copied()
            .filter(|&(_, v)| v <= keep)
            .collect();
        Graph::from_edge_list(keep, &edges)
    }

    /// Renders the edge-list text format (`order m` header, one edge per line).
    pub fn to_edge_list_string(&self) -> String {
        let mut out = format!("{} {}\n", self.order, self.edges.len());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

impl FromStr for Graph {
    type Err = Error;

    /// Parses the edge-list format. Lines starting with `#` and blank lines are skipped.
    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::MalformedInput("missing `order m` header".into()))?;
        let [order, m] = parse_pair(header)?;
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            edges.push(parse_pair(line).map(|[u, v]| (u, v))?);
        }
        if edges.len() != m {
            return Err(Error::MalformedInput(format!(
                "header announces {m} edges but {} were listed",
                edges.len()
            )));
        }
        Graph::from_edge_list(order, &edges)
    }
}

fn parse_pair(line: &str) -> Result<[usize; 2]> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::MalformedInput(format!(
            "expected two integers, got `{line}`"
        )));
    }
    let parse = |f: &str| {
        f.parse::<usize>()
            .map_err(|e| Error::MalformedInput(format!("bad integer `{f}`: {e}")))
    };
    Ok([parse(fields[0])?, parse(fields[1])?])
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list_string())
    }
}

/// Path `1 - 2 - ... - n`.
pub fn make_path(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(Error::InvalidOrder {
            family: "path",
            got: n,
            min: 1,
        });
    }
    let edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
    Graph::from_edge_list(n, &edges)
}

/// Dynkin tree `D_n`: path `2 - 3 - ... - n` plus the pendant vertex 1 on vertex 3.
pub fn make_dynkin(n: usize) -> Result<Graph> {
    if n < 4 {
        return Err(Error::InvalidOrder {
            family: "dynkin",
            got: n,
            min: 4,
        });
    }
    let mut edges = vec![(1, 3)];
    edges.extend((2..n).map(|i| (i, i + 1)));
    Graph::from_edge_list(n, &edges)
}

/// Extended Dynkin tree on `n + 1` vertices: leaves 1, 2 on vertex 3, the
/// path `3 - 4 - ... - (n-1)`, and leaves n, n+1 on vertex n-1.
pub fn make_extended_dynkin(n: usize) -> Result<Graph> {
    if n < 4 {
        return Err(Error::InvalidOrder {
            family: "ext-dynkin",
            got: n,
            min: 4,
        });
    }
    let mut edges = vec![(1, 3), (2, 3)];
    edges.extend((3..n - 1).map(|i| (i, i + 1)));
    edges.push((n - 1, n));
    edges.push((n - 1, n + 1));
    Graph::from_edge_list(n + 1, &edges)
}

/// Named graph families addressable from the command line as `<family>:<n>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Path,
    Dynkin,
    ExtendedDynkin,
}

impl Family {
    pub fn build(self, n: usize) -> Result<Graph> {
        match self {
            Family::Path => make_path(n),
            Family::Dynkin => make_dynkin(n),
            Family::ExtendedDynkin => make_extended_dynkin(n),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Path => "path",
            Family::Dynkin => "dynkin",
            Family::ExtendedDynkin => "ext-dynkin",
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "path" => Ok(Family::Path),
            "dynkin" => Ok(Family::Dynkin),
            "ext-dynkin" | "extended-dynkin" => Ok(Family::ExtendedDynkin),
            other => Err(Error::MalformedInput(format!("unknown graph family `{other}`"))),
        }
    }
}

/// Parses `family:n`, e.g. `ext-dynkin:8`.
pub fn parse_family_spec(spec: &str) -> Result<(Family, usize)> {
    let (family, n) = spec
        .split_once(':')
        .ok_or_else(|| Error::MalformedInput(format!("expected `family:n`, got `{spec}`")))?;
    let n = n
        .parse::<usize>()
        .map_err(|e| Error::MalformedInput(format!("bad order in `{spec}`: {e}")))?;
    Ok((family.parse()?, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_examples() {
        let p1 = make_path(1).unwrap();
        assert_eq!((p1.order(), p1.edge_count()), (1, 0));

        let p3 = make_path(3).unwrap();
        assert_eq!(p3.edges().collect::<Vec<_>>(), vec![(1, 2), (2, 3)]);

        let p5 = make_path(5).unwrap();
        assert_eq!(p5.edge_count(), 4);
        assert_eq!(p5.degree_sequence(), vec![1, 2, 2, 2, 1]);

        assert!(matches!(make_path(0), Err(Error::InvalidOrder { .. })));
    }

    #[test]
    fn dynkin_examples() {
        let d4 = make_dynkin(4).unwrap();
        assert_eq!(d4.edges().collect::<Vec<_>>(), vec![(1, 3), (2, 3), (3, 4)]);

        let d5 = make_dynkin(5).unwrap();
        assert_eq!(d5.edge_count(), 4);
        assert_eq!(d5.degree_sequence(), vec![1, 1, 3, 2, 1]);

        let d6 = make_dynkin(6).unwrap();
        let degs = d6.degree_sequence();
        assert_eq!(degs.iter().filter(|&&d| d == 3).count(), 1);
        assert_eq!(degs.iter().filter(|&&d| d == 1).count(), 3);

        assert!(make_dynkin(3).is_err());
    }

    #[test]
    fn extended_dynkin_examples() {
        let t4 = make_extended_dynkin(4).unwrap();
        assert_eq!(
            t4.edges().collect::<Vec<_>>(),
            vec![(1, 3), (2, 3), (3, 4), (3, 5)]
        );

        let t8 = make_extended_dynkin(8).unwrap();
        assert_eq!(t8.order(), 9);
        assert_eq!(t8.degree(3), 3);

        let t6 = make_extended_dynkin(6).unwrap();
        assert_eq!(t6.degree_sequence(), vec![1, 1, 3, 2, 3, 1, 1]);

        assert!(make_extended_dynkin(3).is_err());
    }

    #[test]
    fn extended_dynkin_is_a_tree() {
        for n in 4..40 {
            let g = make_extended_dynkin(n).unwrap();
            assert_eq!(g.order(), n + 1);
            assert_eq!(g.edge_count(), n);
        }
    }

    #[test]
    fn dropping_last_vertex_gives_dynkin() {
        for n in 5..30 {
            let g = make_extended_dynkin(n).unwrap();
            assert_eq!(g.truncate(n).unwrap(), make_dynkin(n).unwrap());
        }
    }

    #[test]
    fn edge_list_validation() {
        let g = Graph::from_edge_list(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(g, make_path(3).unwrap());

        let g = Graph::from_edge_list(2, &[(1, 2), (2, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);

        assert!(matches!(
            Graph::from_edge_list(3, &[(1, 1)]),
            Err(Error::MalformedInput(_))
        ));
        assert!(Graph::from_edge_list(3, &[(1, 4)]).is_err());
        assert!(Graph::from_edge_list(3, &[(0, 1)]).is_err());
    }

    #[test]
    fn adjacency_examples() {
        let a = make_path(2).unwrap().adjacency_matrix();
        assert_eq!(a, IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]).unwrap());

        let a = make_extended_dynkin(4).unwrap().adjacency_matrix();
        assert_eq!(a.row(2).to_vec(), IntMatrix::from_i64_rows(&[vec![1, 1, 0, 1, 1]]).unwrap().row(0).to_vec());
    }

    #[test]
    fn adjacency_symmetric_zero_diagonal() {
        let graphs = (4..20).flat_map(|n| {
            [
                make_path(n).unwrap(),
                make_dynkin(n).unwrap(),
                make_extended_dynkin(n).unwrap(),
            ]
        });
        for g in graphs {
            let a = g.adjacency_matrix();
            assert_eq!(a, a.transpose());
            for i in 0..g.order() {
                assert_eq!(a.get(i, i), &BigInt::from(0));
            }
        }
    }

    #[test]
    fn edge_list_text_round_trip() {
        let text = "# D~4\n5 4\n1 3\n2 3\n\n# spine\n3 4\n3 5\n";
        let g: Graph = text.parse().unwrap();
        assert_eq!(g, make_extended_dynkin(4).unwrap());
        assert_eq!(g.to_edge_list_string().parse::<Graph>().unwrap(), g);

        assert!("3 2\n1 2\n".parse::<Graph>().is_err());
        assert!("3 1\n1 2 3\n".parse::<Graph>().is_err());
        assert!("".parse::<Graph>().is_err());
    }

    #[test]
    fn family_specs() {
        assert_eq!(
            parse_family_spec("ext-dynkin:8").unwrap(),
            (Family::ExtendedDynkin, 8)
        );
        assert!(parse_family_spec("ext-dynkin").is_err());
        assert!(parse_family_spec("cycle:4").is_err());
    }
}
