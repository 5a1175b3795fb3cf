//! Simple undirected graphs, the named families used throughout the crate,
//! and the two corona products.
//!
//! Corona vertex ordering is fixed: the `n1` base vertices `(v_i, 0)` come
//! first in the order of `G`, followed by the `n1` copies of `H` in block
//! order. Vertex `(v_i, w_j)` (with `w_j` the `j`-th vertex of `H`, 0-based)
//! therefore sits at index `n1 + i * n2 + j`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown generator `{0}` (expected one of K, C, empty, CP, HQ, halved)")]
    UnknownGenerator(String),
    #[error("malformed generator spec `{0}`: expected NAME:SIZE")]
    MalformedSpec(String),
    #[error("generator `{name}` needs a size of at least {min}, got {got}")]
    SizeTooSmall { name: String, min: usize, got: i64 },
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(usize, usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge list parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("adjacency matrix is not a symmetric 0/1 matrix with zero diagonal")]
    InvalidAdjacency,
}

/// An immutable simple graph stored as a dense 0/1 adjacency matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    adjacency: Vec<bool>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph from an undirected edge list. Self-loops, duplicate
    /// edges (in either orientation) and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut adjacency = vec![false; n * n];
        for &(i, j) in edges {
            for vertex in [i, j] {
                if vertex >= n {
                    return Err(GraphError::VertexOutOfRange { vertex, n });
                }
            }
            if i == j {
                return Err(GraphError::SelfLoop(i));
            }
            if adjacency[i * n + j] {
                return Err(GraphError::DuplicateEdge(i, j));
            }
            adjacency[i * n + j] = true;
            adjacency[j * n + i] = true;
        }
        Ok(Self { n, adjacency, labels: None })
    }

    /// Builds a graph from a symmetric 0/1 matrix with zero diagonal.
    pub fn from_adjacency(matrix: &DMatrix<u8>) -> Result<Self, GraphError> {
        let n = matrix.nrows();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if matrix.ncols() != n {
            return Err(GraphError::InvalidAdjacency);
        }
        let mut adjacency = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                let x = matrix[(i, j)];
                if x > 1 || x != matrix[(j, i)] || (i == j && x != 0) {
                    return Err(GraphError::InvalidAdjacency);
                }
                adjacency[i * n + j] = x == 1;
            }
        }
        Ok(Self { n, adjacency, labels: None })
    }

    fn from_predicate(n: usize, adjacent: impl Fn(usize, usize) -> bool) -> Self {
        let mut adjacency = vec![false; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                if adjacent(i, j) {
                    adjacency[i * n + j] = true;
                    adjacency[j * n + i] = true;
                }
            }
        }
        Self { n, adjacency, labels: None }
    }

    /// Attaches vertex names. The label count must equal the vertex count.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.n {
            return Err(GraphError::VertexOutOfRange { vertex: labels.len(), n: self.n });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    #[inline]
    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.n + j]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.is_adjacent(i, j))
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors(i).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|i| self.degree(i)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().filter(|&&x| x).count() / 2
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.is_adjacent(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Common degree if the graph is regular.
    pub fn regularity(&self) -> Option<usize> {
        let d = self.degree(0);
        (1..self.n).all(|i| self.degree(i) == d).then_some(d)
    }

    /// First vertex whose degree differs from vertex 0, if any.
    pub fn irregular_vertex(&self) -> Option<usize> {
        let d = self.degree(0);
        (1..self.n).find(|&i| self.degree(i) != d)
    }

    /// Breadth-first distances from `source`; `None` marks unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x].unwrap_or(0);
            for y in self.neighbors(x) {
                if dist[y].is_none() {
                    dist[y] = Some(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.distances_from(0).iter().all(Option::is_some)
    }

    /// All-pairs distance matrix, or an error for disconnected graphs.
    pub fn distance_matrix(&self) -> Result<Vec<Vec<usize>>, GraphError> {
        (0..self.n)
            .map(|u| {
                self.distances_from(u)
                    .into_iter()
                    .collect::<Option<Vec<_>>>()
                    .ok_or(GraphError::Disconnected)
            })
            .collect()
    }

    pub fn diameter(&self) -> Result<usize, GraphError> {
        Ok(self
            .distance_matrix()?
            .iter()
            .flat_map(|row| row.iter().copied())
            .max()
            .unwrap_or(0))
    }

    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| if self.is_adjacent(i, j) { 1.0 } else { 0.0 })
    }

    pub fn degree_matrix(&self) -> DMatrix<f64> {
        let degrees = self.degrees();
        DMatrix::from_fn(self.n, self.n, |i, j| if i == j { degrees[i] as f64 } else { 0.0 })
    }

    /// Applies a vertex relabelling: vertex `i` of `self` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, GraphError> {
        let edges: Vec<_> = self.edges().into_iter().map(|(i, j)| (perm[i], perm[j])).collect();
        Graph::from_edges(self.n, &edges)
    }

    /// Serializes in the edge-list file format: `n` on the first line, then
    /// one `i j` pair per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (i, j) in self.edges() {
            out.push_str(&format!("{i} {j}\n"));
        }
        out
    }
}

/// Signless Laplacian `Q = D + A`.
pub fn signless_laplacian(g: &Graph) -> DMatrix<f64> {
    g.degree_matrix() + g.adjacency_matrix()
}

/// Parses the edge-list format. Blank lines and `#` comments are skipped.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (first_line, header) = lines.next().ok_or(GraphError::Parse {
        line: 1,
        message: "missing vertex count".into(),
    })?;
    let n: usize = header.parse().map_err(|_| GraphError::Parse {
        line: first_line,
        message: format!("expected vertex count, found `{header}`"),
    })?;

    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (line, content) in lines {
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(GraphError::Parse {
                line,
                message: format!("expected two endpoints, found `{content}`"),
            });
        }
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| GraphError::Parse {
                line,
                message: format!("invalid vertex index `{s}`"),
            })
        };
        let (i, j) = (parse(fields[0])?, parse(fields[1])?);
        if !seen.insert((i.min(j), i.max(j))) {
            return Err(GraphError::Parse { line, message: format!("duplicate edge {i} {j}") });
        }
        edges.push((i, j));
    }
    Graph::from_edges(n, &edges)
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph, GraphError> {
    let text = std::fs::read_to_string(path).map_err(|e| GraphError::Io(e.to_string()))?;
    parse_edge_list(&text)
}

/// A named graph family with its size parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Generator {
    /// Complete graph `K_n`.
    Complete(usize),
    /// Cycle `C_n`, `n >= 3`.
    Cycle(usize),
    /// Edgeless graph on `n` vertices.
    Empty(usize),
    /// Cocktail party graph on `2m` vertices; antipodal pairs are `(2i, 2i + 1)`.
    CocktailParty(usize),
    /// Hypercube `Q_d` on bit vectors of length `d`.
    Hypercube(usize),
    /// Halved `2d`-cube: even-weight vectors of length `2d`, adjacent at
    /// Hamming distance two.
    HalvedCube(usize),
}

impl Generator {
    pub fn build(self) -> Graph {
        match self {
            Generator::Complete(n) => Graph::from_predicate(n, |_, _| true),
            Generator::Cycle(n) => Graph::from_predicate(n, |i, j| j - i == 1 || (i == 0 && j == n - 1)),
            Generator::Empty(n) => Graph::from_predicate(n, |_, _| false),
            Generator::CocktailParty(m) => Graph::from_predicate(2 * m, |i, j| i / 2 != j / 2),
            Generator::Hypercube(d) => {
                Graph::from_predicate(1 << d, |i, j| (i ^ j).count_ones() == 1)
            }
            Generator::HalvedCube(d) => {
                let words: Vec<usize> =
                    (0..1usize << (2 * d)).filter(|w| w.count_ones() % 2 == 0).collect();
                Graph::from_predicate(words.len(), |i, j| (words[i] ^ words[j]).count_ones() == 2)
            }
        }
    }

    fn name(self) -> &'static str {
        match self {
            Generator::Complete(_) => "K",
            Generator::Cycle(_) => "C",
            Generator::Empty(_) => "empty",
            Generator::CocktailParty(_) => "CP",
            Generator::Hypercube(_) => "HQ",
            Generator::HalvedCube(_) => "halved",
        }
    }

    fn size(self) -> usize {
        match self {
            Generator::Complete(x)
            | Generator::Cycle(x)
            | Generator::Empty(x)
            | Generator::CocktailParty(x)
            | Generator::Hypercube(x)
            | Generator::HalvedCube(x) => x,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name(), self.size())
    }
}

impl FromStr for Generator {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, size) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| GraphError::MalformedSpec(s.to_string()))?;
        let size: i64 = size.trim().parse().map_err(|_| GraphError::MalformedSpec(s.to_string()))?;
        let (ctor, min): (fn(usize) -> Generator, usize) = match name.trim() {
            "K" => (Generator::Complete, 1),
            "C" => (Generator::Cycle, 3),
            "empty" => (Generator::Empty, 1),
            "CP" => (Generator::CocktailParty, 1),
            "HQ" => (Generator::Hypercube, 1),
            "halved" => (Generator::HalvedCube, 1),
            other => return Err(GraphError::UnknownGenerator(other.to_string())),
        };
        if size < min as i64 {
            return Err(GraphError::SizeTooSmall { name: name.trim().to_string(), min, got: size });
        }
        Ok(ctor(size as usize))
    }
}

/// Parses a generator spec such as `"CP:4"` and builds the graph.
pub fn generate(spec: &str) -> Result<Graph, GraphError> {
    Ok(spec.parse::<Generator>()?.build())
}

/// A vertex `(v_base, inner)` of a corona: `inner == 0` is the base vertex
/// itself, `inner == j + 1` is vertex `j` of the copy of `H` attached to
/// `v_base`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoronaVertex {
    pub base: usize,
    pub inner: usize,
}

impl CoronaVertex {
    pub fn base(base: usize) -> Self {
        Self { base, inner: 0 }
    }

    pub fn in_copy(base: usize, h_vertex: usize) -> Self {
        Self { base, inner: h_vertex + 1 }
    }

    /// Matrix index under the fixed corona ordering.
    pub fn index(self, n1: usize, n2: usize) -> Result<usize, GraphError> {
        let n = n1 * (1 + n2);
        if self.base >= n1 || self.inner > n2 {
            return Err(GraphError::VertexOutOfRange { vertex: self.base.max(self.inner), n });
        }
        Ok(if self.inner == 0 { self.base } else { n1 + self.base * n2 + (self.inner - 1) })
    }

    pub fn from_index(index: usize, n1: usize, n2: usize) -> Result<Self, GraphError> {
        let n = n1 * (1 + n2);
        if index >= n {
            return Err(GraphError::VertexOutOfRange { vertex: index, n });
        }
        Ok(if index < n1 {
            Self::base(index)
        } else {
            let k = index - n1;
            Self::in_copy(k / n2, k % n2)
        })
    }
}

/// Vertex complemented corona: copy `i` of `h` is joined to every vertex of
/// `g` except `v_i`.
pub fn vertex_complemented_corona(g: &Graph, h: &Graph) -> Graph {
    corona_with(g, h, |i, j| i != j)
}

/// Classical corona: copy `i` of `h` is joined to `v_i` only. Uses the same
/// vertex ordering as [`vertex_complemented_corona`].
pub fn standard_corona(g: &Graph, h: &Graph) -> Graph {
    corona_with(g, h, |i, j| i == j)
}

fn corona_with(g: &Graph, h: &Graph, joins: impl Fn(usize, usize) -> bool) -> Graph {
    let (n1, n2) = (g.order(), h.order());
    let n = n1 * (1 + n2);
    let mut adjacency = vec![false; n * n];
    let mut link = |a: usize, b: usize| {
        adjacency[a * n + b] = true;
        adjacency[b * n + a] = true;
    };
    for (i, j) in g.edges() {
        link(i, j);
    }
    for copy in 0..n1 {
        let offset = n1 + copy * n2;
        for (a, b) in h.edges() {
            link(offset + a, offset + b);
        }
        for base in (0..n1).filter(|&base| joins(copy, base)) {
            for w in 0..n2 {
                link(base, offset + w);
            }
        }
    }
    Graph { n, adjacency, labels: None }
}

/// 0/1 matrix of the distance-`k` graph; `k = 0` gives the identity.
pub fn distance_k_adjacency(g: &Graph, k: usize) -> Result<DMatrix<f64>, GraphError> {
    let dist = g.distance_matrix()?;
    Ok(DMatrix::from_fn(g.order(), g.order(), |i, j| if dist[i][j] == k { 1.0 } else { 0.0 }))
}
