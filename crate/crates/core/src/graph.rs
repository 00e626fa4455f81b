//! Undirected weighted graphs, their structural matrices and the flat
//! edge-list format.
//!
//! A [`Graph`] can only be obtained through a constructor that validates
//! it, so every downstream operation may assume a symmetric, nonnegative,
//! loop-free and connected weight matrix.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Upper bound on redraws when an Erdős–Rényi sample is disconnected.
pub const ER_MAX_ATTEMPTS: usize = 1000;

/// A real matrix that is symmetric by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSymMatrix(DMatrix<f64>);

impl RealSymMatrix {
    /// Wraps `m` if it is square and exactly symmetric.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidParameter(format!(
                "matrix is {}x{}, expected square",
                m.nrows(),
                m.ncols()
            )));
        }
        let n = m.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::InvalidParameter(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
        }
        Ok(Self(m))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    /// Kronecker sum `self ⊕ other`; the result is symmetric again.
    pub fn kronecker_sum(&self, other: &RealSymMatrix) -> RealSymMatrix {
        RealSymMatrix(crate::linalg::kronecker_sum(&self.0, &other.0))
    }
}

/// One violated graph invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Issue {
    NotSquare { rows: usize, cols: usize },
    Empty,
    NonFinite { i: usize, j: usize },
    Asymmetric { i: usize, j: usize },
    NegativeWeight { i: usize, j: usize },
    SelfLoop { i: usize },
    /// Component label per vertex (labels are 0-based in discovery order).
    Disconnected { labels: Vec<usize> },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::NotSquare { rows, cols } => write!(f, "weight matrix is {rows}x{cols}, not square"),
            Issue::Empty => write!(f, "graph has no vertices"),
            Issue::NonFinite { i, j } => write!(f, "non-finite weight at ({i},{j})"),
            Issue::Asymmetric { i, j } => write!(f, "asymmetric weight at ({i},{j})"),
            Issue::NegativeWeight { i, j } => write!(f, "negative weight at ({i},{j})"),
            Issue::SelfLoop { i } => write!(f, "self-loop at ({i},{i})"),
            Issue::Disconnected { labels } => {
                let k = labels.iter().max().map_or(0, |m| m + 1);
                write!(f, "disconnected: {k} components, labels {labels:?}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.issues.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Checks every graph invariant on a raw weight matrix and reports all
/// violations instead of stopping at the first.
pub fn validate(weights: &DMatrix<f64>) -> ValidationReport {
    let mut issues = Vec::new();
    let (rows, cols) = weights.shape();
    if rows != cols {
        issues.push(Issue::NotSquare { rows, cols });
        return ValidationReport { issues };
    }
    if rows == 0 {
        issues.push(Issue::Empty);
        return ValidationReport { issues };
    }
    let n = rows;
    for i in 0..n {
        for j in 0..n {
            let w = weights[(i, j)];
            if !w.is_finite() {
                issues.push(Issue::NonFinite { i, j });
                continue;
            }
            if i == j {
                if w != 0.0 {
                    issues.push(Issue::SelfLoop { i });
                }
                continue;
            }
            if j > i && w != weights[(j, i)] {
                issues.push(Issue::Asymmetric { i, j });
            }
            if w < 0.0 {
                issues.push(Issue::NegativeWeight { i, j });
            }
        }
    }
    let labels = component_labels(weights);
    if labels.iter().any(|&l| l != 0) {
        issues.push(Issue::Disconnected { labels });
    }
    ValidationReport { issues }
}

/// Breadth-first component labelling over nonzero weights (either
/// direction counts as an edge).
fn component_labels(weights: &DMatrix<f64>) -> Vec<usize> {
    let n = weights.nrows();
    let mut labels = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if labels[start] != usize::MAX {
            continue;
        }
        labels[start] = next;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for u in 0..n {
                let linked = weights[(v, u)] != 0.0 || weights[(u, v)] != 0.0;
                if u != v && linked && labels[u] == usize::MAX {
                    labels[u] = next;
                    queue.push_back(u);
                }
            }
        }
        next += 1;
    }
    labels
}

/// Undirected, weighted, connected graph without self-loops.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    weights: DMatrix<f64>,
}

impl Graph {
    pub fn new(weights: DMatrix<f64>) -> Result<Self> {
        let report = validate(&weights);
        if !report.is_valid() {
            return Err(Error::InvalidGraph(report));
        }
        Ok(Self { weights })
    }

    /// Builds a graph on `n` vertices from `(i, j, w)` triples, each
    /// undirected edge given once.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut w = DMatrix::zeros(n, n);
        for &(i, j, wt) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({i}, {j}) out of range for {n} vertices"
                )));
            }
            w[(i, j)] = wt;
            w[(j, i)] = wt;
        }
        Self::new(w)
    }

    pub fn n(&self) -> usize {
        self.weights.nrows()
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    /// Edges `(i, j, w)` with `i < j` and `w != 0`, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let w = self.weights[(i, j)];
                if w != 0.0 {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    pub fn degrees(&self) -> Vec<f64> {
        self.weights.row_iter().map(|r| r.sum()).collect()
    }

    pub fn adjacency(&self) -> RealSymMatrix {
        RealSymMatrix(self.weights.clone())
    }
}

/// Combinatorial Laplacian `Diag(W·1) − W`.
pub fn laplacian(g: &Graph) -> RealSymMatrix {
    let mut l = -g.weights.clone();
    for (i, d) in g.degrees().into_iter().enumerate() {
        l[(i, i)] = d;
    }
    RealSymMatrix(l)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphKind {
    Cycle { n: usize },
    Path { n: usize },
    Complete { n: usize },
    Grid { rows: usize, cols: usize },
    ErdosRenyi { n: usize, p: f64 },
}

/// Generates a graph with unit edge weights.
pub fn generate(kind: GraphKind, seed: Option<u64>) -> Result<Graph> {
    generate_weighted(kind, 1.0, seed)
}

/// Generates a graph whose edges all carry `weight`.
///
/// Cycles on one or two vertices degenerate to the trivial graph and a
/// single edge. Erdős–Rényi sampling needs a seed and redraws until the
/// sample is connected, giving up after [`ER_MAX_ATTEMPTS`].
pub fn generate_weighted(kind: GraphKind, weight: f64, seed: Option<u64>) -> Result<Graph> {
    if !(weight.is_finite() && weight > 0.0) {
        return Err(Error::InvalidParameter(format!("edge weight must be positive, got {weight}")));
    }
    let positive = |name: &str, v: usize| {
        if v == 0 {
            Err(Error::InvalidParameter(format!("{name} must be positive")))
        } else {
            Ok(v)
        }
    };
    let mut edges = Vec::new();
    let n = match kind {
        GraphKind::Cycle { n } => {
            positive("n", n)?;
            match n {
                1 => {}
                2 => edges.push((0, 1)),
                _ => edges.extend((0..n).map(|i| (i, (i + 1) % n))),
            }
            n
        }
        GraphKind::Path { n } => {
            positive("n", n)?;
            edges.extend((1..n).map(|i| (i - 1, i)));
            n
        }
        GraphKind::Complete { n } => {
            positive("n", n)?;
            for i in 0..n {
                edges.extend(((i + 1)..n).map(|j| (i, j)));
            }
            n
        }
        GraphKind::Grid { rows, cols } => {
            positive("rows", rows)?;
            positive("cols", cols)?;
            for r in 0..rows {
                for c in 0..cols {
                    let v = r * cols + c;
                    if c + 1 < cols {
                        edges.push((v, v + 1));
                    }
                    if r + 1 < rows {
                        edges.push((v, v + cols));
                    }
                }
            }
            rows * cols
        }
        GraphKind::ErdosRenyi { n, p } => {
            positive("n", n)?;
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "edge probability must lie in (0, 1], got {p}"
                )));
            }
            let seed = seed.ok_or_else(|| {
                Error::InvalidParameter("erdos-renyi generation requires a seed".into())
            })?;
            return erdos_renyi(n, p, weight, seed);
        }
    };
    let triples: Vec<_> = edges.into_iter().map(|(i, j)| (i, j, weight)).collect();
    Graph::from_edges(n, &triples)
}

fn erdos_renyi(n: usize, p: f64, weight: f64, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ER_MAX_ATTEMPTS {
        let mut w = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random::<f64>() < p {
                    w[(i, j)] = weight;
                    w[(j, i)] = weight;
                }
            }
        }
        if component_labels(&w).iter().all(|&l| l == 0) {
            return Graph::new(w);
        }
    }
    Err(Error::RetryExhausted { n, p, attempts: ER_MAX_ATTEMPTS })
}

/// Parses the edge-list format: `i j w` per line, `#` comments, and an
/// optional first line `#n=<N>` fixing the vertex count.
pub fn load_edges(text: &str) -> Result<Graph> {
    let mut header_n = None;
    let mut edges: BTreeMap<(usize, usize), (f64, usize)> = BTreeMap::new();
    let mut max_index = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if idx == 0 {
                if let Some(v) = comment.trim().strip_prefix("n=") {
                    let n = v.trim().parse::<usize>().map_err(|_| Error::Parse {
                        line: line_no,
                        message: format!("bad vertex-count header {line:?}"),
                    })?;
                    header_n = Some(n);
                }
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected \"i j w\", got {line:?}"),
            });
        }
        let parse_index = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("bad vertex index {s:?}"),
            })
        };
        let i = parse_index(fields[0])?;
        let j = parse_index(fields[1])?;
        let w = fields[2].parse::<f64>().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("bad weight {:?}", fields[2]),
        })?;
        let key = (i.min(j), i.max(j));
        match edges.get(&key) {
            Some(&(prev, _)) if prev != w => {
                return Err(Error::ConflictingEdge {
                    line: line_no,
                    i: key.0,
                    j: key.1,
                    first: prev,
                    second: w,
                });
            }
            Some(_) => {}
            None => {
                edges.insert(key, (w, line_no));
            }
        }
        max_index = Some(max_index.map_or(key.1, |m: usize| m.max(key.1)));
    }
    let n = match (header_n, max_index) {
        (Some(n), Some(m)) if m >= n => {
            return Err(Error::Parse {
                line: 1,
                message: format!("vertex index {m} exceeds header count {n}"),
            });
        }
        (Some(n), _) => n,
        (None, Some(m)) => m + 1,
        (None, None) => {
            return Err(Error::Parse { line: 1, message: "no edges and no #n= header".into() });
        }
    };
    let mut w = DMatrix::zeros(n, n);
    for (&(i, j), &(wt, _)) in &edges {
        w[(i, j)] = wt;
        w[(j, i)] = wt;
    }
    Graph::new(w)
}

/// Writes each undirected edge once as `i j w` with `i < j`. A `#n=`
/// header is emitted only when the vertex count cannot be inferred from
/// the edges.
pub fn save_edges(g: &Graph) -> String {
    let edges = g.edges();
    let inferred = edges.iter().map(|e| e.1 + 1).max().unwrap_or(0);
    let mut out = String::new();
    if inferred != g.n() {
        out.push_str(&format!("#n={}\n", g.n()));
    }
    for (i, j, w) in edges {
        out.push_str(&format!("{i} {j} {w}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones_residual(l: &RealSymMatrix) -> f64 {
        l.matrix().row_iter().map(|r| r.sum().abs()).fold(0.0, f64::max)
    }

    #[test]
    fn laplacian_of_single_edge() {
        let g = generate(GraphKind::Path { n: 2 }, None).unwrap();
        let l = laplacian(&g);
        assert_eq!(l.matrix(), &DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn laplacian_of_four_cycle() {
        let g = generate(GraphKind::Cycle { n: 4 }, None).unwrap();
        let l = laplacian(&g);
        for i in 0..4 {
            assert_eq!(l.matrix()[(i, i)], 2.0);
            assert_eq!(l.matrix()[(i, (i + 1) % 4)], -1.0);
            assert_eq!(l.matrix()[(i, (i + 2) % 4)], 0.0);
        }
        assert_eq!(ones_residual(&l), 0.0);
    }

    #[test]
    fn laplacian_of_weighted_triangle() {
        let g = Graph::from_edges(3, &[(0, 1, 1.0), (0, 2, 2.0), (1, 2, 3.0)]).unwrap();
        // degrees: 1+2, 1+3, 2+3
        let expected = DMatrix::from_row_slice(3, 3, &[3.0, -1.0, -2.0, -1.0, 4.0, -3.0, -2.0, -3.0, 5.0]);
        assert_eq!(laplacian(&g).matrix(), &expected);
    }

    #[test]
    fn validate_reports_each_problem() {
        let c4 = generate(GraphKind::Cycle { n: 4 }, None).unwrap();
        assert!(validate(c4.weights()).is_valid());

        let mut two_edges = DMatrix::zeros(4, 4);
        for (i, j) in [(0, 1), (2, 3)] {
            two_edges[(i, j)] = 1.0;
            two_edges[(j, i)] = 1.0;
        }
        let report = validate(&two_edges);
        assert_eq!(report.issues, vec![Issue::Disconnected { labels: vec![0, 0, 1, 1] }]);

        let mut neg = DMatrix::from_element(2, 2, -1.0);
        neg[(0, 0)] = 0.0;
        neg[(1, 1)] = 0.0;
        let report = validate(&neg);
        assert!(report.issues.contains(&Issue::NegativeWeight { i: 0, j: 1 }));
        assert!(report.to_string().contains("negative weight at (0,1)"));

        let mut asym = DMatrix::zeros(2, 2);
        asym[(0, 1)] = 1.0;
        asym[(1, 0)] = 2.0;
        asym[(1, 1)] = 0.5;
        let report = validate(&asym);
        assert!(report.issues.contains(&Issue::Asymmetric { i: 0, j: 1 }));
        assert!(report.issues.contains(&Issue::SelfLoop { i: 1 }));
    }

    #[test]
    fn trivial_graph_is_accepted() {
        let g = Graph::new(DMatrix::zeros(1, 1)).unwrap();
        assert_eq!(g.n(), 1);
        assert!(Graph::new(DMatrix::zeros(0, 0)).is_err());
        assert!(Graph::new(DMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn generators_have_expected_shape() {
        let c4 = generate(GraphKind::Cycle { n: 4 }, None).unwrap();
        assert_eq!(c4.edges().len(), 4);
        assert!(c4.degrees().iter().all(|&d| d == 2.0));

        let p2 = generate(GraphKind::Path { n: 2 }, None).unwrap();
        assert_eq!(p2.edges(), vec![(0, 1, 1.0)]);

        let k5 = generate(GraphKind::Complete { n: 5 }, None).unwrap();
        assert_eq!(k5.edges().len(), 10);

        let grid = generate(GraphKind::Grid { rows: 3, cols: 3 }, None).unwrap();
        assert_eq!(grid.n(), 9);
        assert_eq!(grid.edges().len(), 12);
    }

    #[test]
    fn erdos_renyi_is_deterministic() {
        let kind = GraphKind::ErdosRenyi { n: 10, p: 0.5 };
        let a = generate(kind, Some(7)).unwrap();
        let b = generate(kind, Some(7)).unwrap();
        assert_eq!(a, b);
        assert!(generate(kind, None).is_err());
    }

    #[test]
    fn erdos_renyi_rejects_bad_parameters() {
        assert!(matches!(
            generate(GraphKind::ErdosRenyi { n: 10, p: 0.0 }, Some(1)),
            Err(Error::InvalidParameter(_))
        ));
        assert!(generate(GraphKind::ErdosRenyi { n: 10, p: 1.5 }, Some(1)).is_err());
        assert!(matches!(
            generate(GraphKind::ErdosRenyi { n: 60, p: 1e-4 }, Some(1)),
            Err(Error::RetryExhausted { .. })
        ));
    }

    #[test]
    fn edge_list_parsing() {
        let g = load_edges("0 1 1.0\n1 2 2.0").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), vec![(0, 1, 1.0), (1, 2, 2.0)]);

        let dup = load_edges("0 1 1.0\n1 0 1.0").unwrap();
        assert_eq!(dup.edges(), vec![(0, 1, 1.0)]);

        match load_edges("0 1 1.0\n1 0 2.0") {
            Err(Error::ConflictingEdge { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected conflicting edge, got {other:?}"),
        }
        match load_edges("# comment\n0 1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(load_edges("0 1 -1.0"), Err(Error::InvalidGraph(_))));
    }

    #[test]
    fn header_fixes_vertex_count() {
        let g = load_edges("#n=1\n").unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(save_edges(&g), "#n=1\n");
        assert!(load_edges("#n=2\n0 1 1\n1 2 1\n").is_err());
    }

    #[test]
    fn save_load_round_trip_is_exact() {
        let g = Graph::from_edges(3, &[(0, 1, 0.1), (1, 2, 1.0 / 3.0), (0, 2, 1e-300)]).unwrap();
        let back = load_edges(&save_edges(&g)).unwrap();
        assert_eq!(back.weights(), g.weights());
    }
}
