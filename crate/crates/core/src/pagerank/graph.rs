use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GraphError;

/// Interaction network with dense node indices.
///
/// Undirected edges are stored once with `a <= b`; directed edges as given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    directed: bool,
}

impl Graph {
    /// Build from index pairs; duplicates are collapsed, self-loops kept.
    pub fn from_edges(
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        directed: bool,
    ) -> Result<Self, GraphError> {
        if labels.is_empty() {
            return Err(GraphError::Empty);
        }
        let n = labels.len();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::NodeOutOfRange { node: a.max(b), nodes: n });
            }
            let key = if directed { (a, b) } else { (a.min(b), a.max(b)) };
            if seen.insert(key) {
                out.push(key);
            }
        }
        Ok(Self {
            labels,
            edges: out,
            directed,
        })
    }

    /// Nodes labelled `0..n` by index.
    pub fn unlabeled(n: usize, edges: impl IntoIterator<Item = (usize, usize)>, directed: bool) -> Result<Self, GraphError> {
        Self::from_edges((0..n).map(|i| i.to_string()).collect(), edges, directed)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Distinct out-neighbours per node. Undirected edges count both ways.
    pub fn out_neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.node_count()];
        for &(a, b) in &self.edges {
            adj[a].insert(b);
            if !self.directed {
                adj[b].insert(a);
            }
        }
        adj.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    /// Move node `i` to index `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self, GraphError> {
        let n = self.node_count();
        let mut hit = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut hit[p], true) {
                return Err(GraphError::InvalidParams(format!("not a permutation of 0..{n}")));
            }
        }
        if perm.len() != n {
            return Err(GraphError::InvalidParams(format!("not a permutation of 0..{n}")));
        }
        let mut labels = vec![String::new(); n];
        for (i, &p) in perm.iter().enumerate() {
            labels[p] = self.labels[i].clone();
        }
        Self::from_edges(
            labels,
            self.edges.iter().map(|&(a, b)| (perm[a], perm[b])),
            self.directed,
        )
    }

    /// Tab-separated edge list; isolated nodes are not representable.
    pub fn to_edge_list(&self) -> String {
        self.edges
            .iter()
            .map(|&(a, b)| format!("{}\t{}\n", self.labels[a], self.labels[b]))
            .collect()
    }
}

/// Parse `<labelA><TAB><labelB>` lines (any whitespace separates).
/// Labels get indices in order of first appearance.
pub fn load_graph(source: &str, directed: bool) -> Result<Graph, GraphError> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |label: &str| {
        *index.entry(label.to_string()).or_insert_with(|| {
            labels.push(label.to_string());
            labels.len() - 1
        })
    };
    for (idx, line) in source.lines().enumerate() {
        let text = crate::isa::strip_comment(line);
        if text.is_empty() {
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(GraphError::Parse {
                line: idx + 1,
                message: format!("expected two node labels, found {}", fields.len()),
            });
        }
        let a = intern(fields[0]);
        let b = intern(fields[1]);
        edges.push((a, b));
    }
    Graph::from_edges(labels, edges, directed)
}

/// Seeded preferential-attachment network, a stand-in for protein
/// interaction data. Each new node links to `links` distinct earlier nodes
/// picked with probability proportional to degree.
pub fn synthetic_network(nodes: usize, links: usize, seed: u64) -> Result<Graph, GraphError> {
    if nodes == 0 {
        return Err(GraphError::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = nodes.to_string().len();
    let labels = (0..nodes).map(|i| format!("P{i:0width$}")).collect();
    // every endpoint once per incident edge, plus each node once so that
    // fresh nodes can be picked
    let mut pool: Vec<usize> = vec![0];
    let mut edges = Vec::new();
    for v in 1..nodes {
        let k = links.min(v);
        let mut chosen = BTreeSet::new();
        while chosen.len() < k {
            chosen.insert(pool[rng.random_range(0..pool.len())]);
        }
        for &u in &chosen {
            edges.push((u, v));
            pool.push(u);
            pool.push(v);
        }
        pool.push(v);
    }
    Graph::from_edges(labels, edges, false)
}

/// Seeded Erdős–Rényi-style graph with edge probability `p`, for property tests.
pub fn random_graph(nodes: usize, p: f64, directed: bool, seed: u64) -> Result<Graph, GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..nodes {
        for b in 0..nodes {
            if a == b || (!directed && b < a) {
                continue;
            }
            if rng.random_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::unlabeled(nodes, edges, directed)
}
