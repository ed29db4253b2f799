//! Directed acyclic graphs with edge weights, and the undirected graphs
//! (moral graphs) derived from them.

use std::collections::{BTreeSet, VecDeque};

use nalgebra::DMatrix;

use crate::error::GraphError;

/// A directed acyclic graph whose edges carry nonzero real weights.
///
/// Vertices are dense indices `0..n`; labels are carried along for I/O only.
/// Acyclicity is checked once in the constructor and every later operation
/// relies on it.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDag {
    labels: Vec<String>,
    /// `parents[j]` holds `(i, beta_ij)` sorted by `i`.
    parents: Vec<Vec<(usize, f64)>>,
    /// `children[i]` holds `j` sorted ascending.
    children: Vec<Vec<usize>>,
    topo_order: Vec<usize>,
}

impl WeightedDag {
    /// Builds a DAG with labels `v1..vn`.
    pub fn unlabeled<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let labels = (1..=n).map(|i| format!("v{i}")).collect();
        Self::new(labels, edges)
    }

    pub fn new<I>(labels: Vec<String>, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let n = labels.len();
        let mut seen = BTreeSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(GraphError::DuplicateLabel(label.clone()));
            }
        }

        let mut parents: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (from, to, beta) in edges {
            for idx in [from, to] {
                if idx >= n {
                    return Err(GraphError::IndexOutOfRange { index: idx, len: n });
                }
            }
            if from == to {
                return Err(GraphError::SelfLoop(from));
            }
            if beta == 0.0 {
                return Err(GraphError::ZeroWeight { from, to });
            }
            if !beta.is_finite() {
                return Err(GraphError::NonFiniteWeight { from, to });
            }
            if parents[to].iter().any(|&(p, _)| p == from) {
                return Err(GraphError::DuplicateEdge { from, to });
            }
            parents[to].push((from, beta));
            children[from].push(to);
        }
        for p in &mut parents {
            p.sort_by_key(|&(i, _)| i);
        }
        for c in &mut children {
            c.sort_unstable();
        }

        let topo_order = topological_order(&children).ok_or(GraphError::Cycle)?;
        Ok(Self {
            labels,
            parents,
            children,
            topo_order,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// A topological order of the vertices (every parent precedes its children).
    pub fn topological_order(&self) -> &[usize] {
        &self.topo_order
    }

    /// All edges as `(from, to, beta)`, grouped by target vertex.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.parents
            .iter()
            .enumerate()
            .flat_map(|(to, ps)| ps.iter().map(move |&(from, beta)| (from, to, beta)))
    }

    pub fn edge_count(&self) -> usize {
        self.parents.iter().map(Vec::len).sum()
    }

    /// Weight of the edge `from -> to`, if present.
    pub fn weight(&self, from: usize, to: usize) -> Option<f64> {
        self.parents
            .get(to)?
            .iter()
            .find(|&&(p, _)| p == from)
            .map(|&(_, w)| w)
    }

    /// Parents of `i` together with the edge weights into `i`.
    pub fn weighted_parents(&self, i: usize) -> Result<&[(usize, f64)], GraphError> {
        self.check_index(i)?;
        Ok(&self.parents[i])
    }

    pub fn parents(&self, i: usize) -> Result<BTreeSet<usize>, GraphError> {
        Ok(self.weighted_parents(i)?.iter().map(|&(p, _)| p).collect())
    }

    pub fn children(&self, i: usize) -> Result<BTreeSet<usize>, GraphError> {
        self.check_index(i)?;
        Ok(self.children[i].iter().copied().collect())
    }

    /// Parents, children and co-parents of children, excluding `i` itself.
    pub fn markov_boundary(&self, i: usize) -> Result<BTreeSet<usize>, GraphError> {
        self.check_index(i)?;
        let mut mb: BTreeSet<usize> = self.parents[i].iter().map(|&(p, _)| p).collect();
        for &child in &self.children[i] {
            mb.insert(child);
            mb.extend(self.parents[child].iter().map(|&(p, _)| p));
        }
        mb.remove(&i);
        Ok(mb)
    }

    /// Connects every vertex to its parents and marries co-parents.
    pub fn moralize(&self) -> UndirectedGraph {
        let mut g = UndirectedGraph::empty(self.len());
        for (child, ps) in self.parents.iter().enumerate() {
            for (k, &(p, _)) in ps.iter().enumerate() {
                g.insert_edge(p, child);
                for &(q, _) in &ps[k + 1..] {
                    g.insert_edge(p, q);
                }
            }
        }
        g
    }

    pub fn max_indegree(&self) -> usize {
        self.parents.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Weighted adjacency matrix with `A[i][j] = beta_ij`.
    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut a = DMatrix::zeros(n, n);
        for (from, to, beta) in self.edges() {
            a[(from, to)] = beta;
        }
        a
    }

    fn check_index(&self, i: usize) -> Result<(), GraphError> {
        if i < self.len() {
            Ok(())
        } else {
            Err(GraphError::IndexOutOfRange {
                index: i,
                len: self.len(),
            })
        }
    }
}

/// Kahn's algorithm over adjacency lists; `None` when a cycle remains.
fn topological_order(children: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = children.len();
    let mut indeg = vec![0usize; n];
    for cs in children {
        for &c in cs {
            indeg[c] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &c in &children[v] {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                queue.push_back(c);
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// True iff the directed edge list on `n` vertices has no directed cycle.
/// Self-loops count as cycles; out-of-range endpoints make the answer `false`.
pub fn is_acyclic(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut children = vec![Vec::new(); n];
    for &(from, to) in edges {
        if from >= n || to >= n {
            return false;
        }
        children[from].push(to);
    }
    topological_order(&children).is_some()
}

/// Simple undirected graph with symmetric 0/1 adjacency and no self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    neighbors: Vec<BTreeSet<usize>>,
}

/// Two disjoint vertex sets covering the graph, with every edge crossing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub left: BTreeSet<usize>,
    pub right: BTreeSet<usize>,
}

impl Bipartition {
    /// `+1` for vertices on the left, `-1` on the right.
    pub fn signs(&self, n: usize) -> Vec<f64> {
        (0..n)
            .map(|v| if self.left.contains(&v) { 1.0 } else { -1.0 })
            .collect()
    }
}

impl UndirectedGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            neighbors: vec![BTreeSet::new(); n],
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            for idx in [u, v] {
                if idx >= n {
                    return Err(GraphError::IndexOutOfRange { index: idx, len: n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.insert_edge(u, v);
        }
        Ok(g)
    }

    fn insert_edge(&mut self, u: usize, v: usize) {
        debug_assert_ne!(u, v);
        self.neighbors[u].insert(v);
        self.neighbors[v].insert(u);
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors.get(u).is_some_and(|ns| ns.contains(&v))
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.neighbors[v]
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.range(u + 1..).map(move |&v| (u, v)))
    }

    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut a = DMatrix::zeros(n, n);
        for (u, v) in self.edges() {
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        a
    }

    /// BFS two-coloring. Each component is colored from its smallest vertex,
    /// whose color class goes to `left`.
    pub fn is_bipartite(&self) -> Option<Bipartition> {
        let n = self.len();
        let mut color: Vec<Option<bool>> = vec![None; n];
        let mut queue = VecDeque::new();
        for start in 0..n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].expect("queued vertices are colored");
                for &v in &self.neighbors[u] {
                    match color[v] {
                        None => {
                            color[v] = Some(!cu);
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let mut part = Bipartition {
            left: BTreeSet::new(),
            right: BTreeSet::new(),
        };
        for (v, c) in color.into_iter().enumerate() {
            if c == Some(false) {
                part.left.insert(v);
            } else {
                part.right.insert(v);
            }
        }
        Some(part)
    }

    /// True iff the graph has no cycle. Disconnected forests and isolated
    /// vertices pass.
    pub fn is_forest(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (u, v) in self.edges() {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                return false;
            }
            parent[ru] = rv;
        }
        true
    }
}
