//! Immutable undirected simple graphs with dense node ids, edge-list
//! ingestion, and exact common-neighbor counting.

use std::collections::HashMap;
use std::io::BufRead;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("node id {id} out of range for graph with {n} nodes")]
    NodeOutOfRange { id: u32, n: usize },
    #[error("node set must be nonempty")]
    EmptySet,
    #[error("duplicate member {0} in node set")]
    DuplicateMember(u32),
    #[error("line {line}: expected at least 2 tokens, found {found}")]
    TooFewTokens { line: usize, found: usize },
    #[error("line {line}: malformed token {token:?}")]
    MalformedToken { line: usize, token: String },
    #[error("edge list contains no nodes")]
    EmptyGraph,
    #[error("i/o error while reading edge list: {0}")]
    Io(#[from] std::io::Error),
}

/// Immutable undirected simple graph over dense node ids `0..n`.
///
/// Neighbor lists are kept sorted so common-neighbor counting runs as a
/// merge intersection in `O(k_u + k_v)`.
#[derive(Debug, Clone)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from an edge iterator. Self-loops are dropped and
    /// duplicate edges merged; ids must be `< n`.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for id in [u, v] {
                if id as usize >= n {
                    return Err(GraphError::NodeOutOfRange { id, n });
                }
            }
            if u == v {
                continue;
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        let mut edge_count = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        debug_assert!(edge_count % 2 == 0);
        Ok(Self {
            adj,
            edge_count: edge_count / 2,
        })
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    /// Mean degree `2|E|/N`.
    pub fn mean_degree(&self) -> f64 {
        2.0 * self.edge_count as f64 / self.node_count() as f64
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// All edges as canonical `(u, v)` pairs with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as u32;
            list.iter()
                .copied()
                .skip_while(move |&v| v < u)
                .map(move |v| (u, v))
        })
    }

    /// Connected unordered pairs — identical to [`Graph::edges`].
    pub fn connected_pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges()
    }

    /// Unordered pairs with no edge between them, in canonical order.
    pub fn unconnected_pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let n = self.node_count() as u32;
        (0..n)
            .flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
            .filter(move |&(u, v)| !self.has_edge(u, v))
    }

    /// Number of unordered node pairs, `n(n-1)/2`.
    pub fn pair_count(&self) -> usize {
        let n = self.node_count();
        n * (n - 1) / 2
    }

    /// Number of common neighbors of `u` and `v` by merge intersection.
    pub fn pair_cns(&self, u: u32, v: u32) -> usize {
        let (a, b) = (&self.adj[u as usize], &self.adj[v as usize]);
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    /// Common-neighbor similarity of a node set: the number of nodes
    /// outside the set adjacent to every member. A singleton's CNS is its
    /// degree; the full vertex set scores 0.
    pub fn cns(&self, set: &NodeSet) -> Result<usize, GraphError> {
        let n = self.node_count();
        for &v in set.members() {
            if v as usize >= n {
                return Err(GraphError::NodeOutOfRange { id: v, n });
            }
        }
        // No node is adjacent to itself, so set members drop out of the
        // intersection automatically.
        let mut members = set.members().iter();
        let first = *members.next().expect("node set is nonempty");
        let mut common: Vec<u32> = self.adj[first as usize].clone();
        for &v in members {
            let list = &self.adj[v as usize];
            let mut out = Vec::with_capacity(common.len().min(list.len()));
            let (mut i, mut j) = (0, 0);
            while i < common.len() && j < list.len() {
                match common[i].cmp(&list[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        out.push(common[i]);
                        i += 1;
                        j += 1;
                    }
                }
            }
            common = out;
            if common.is_empty() {
                break;
            }
        }
        Ok(common.len())
    }
}

/// A set of distinct node ids, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSet {
    members: Vec<u32>,
}

impl NodeSet {
    pub fn new(mut members: Vec<u32>) -> Result<Self, GraphError> {
        if members.is_empty() {
            return Err(GraphError::EmptySet);
        }
        members.sort_unstable();
        for w in members.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateMember(w[0]));
            }
        }
        Ok(Self { members })
    }

    pub fn pair(u: u32, v: u32) -> Result<Self, GraphError> {
        Self::new(vec![u, v])
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

/// Options for [`load_edge_list`].
#[derive(Debug, Clone)]
pub struct ParseOptions {
    /// Lines starting with any of these characters are skipped.
    pub comment_prefixes: Vec<char>,
}

impl Default for ParseOptions {
    fn default() -> Self {
        Self {
            comment_prefixes: vec!['#', '%'],
        }
    }
}

/// A parsed graph together with the map from original labels to dense ids.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// Original integer label of each dense node id.
    pub labels: Vec<i64>,
}

impl LoadedGraph {
    pub fn dense_id(&self, label: i64) -> Option<u32> {
        self.labels.iter().position(|&l| l == label).map(|i| i as u32)
    }
}

/// Reads a whitespace-separated edge list, ignoring direction, dropping
/// self-loops, and merging duplicate edges. Node ids are relabeled densely
/// in order of first appearance; nodes seen only in self-loops are kept as
/// isolated nodes.
pub fn load_edge_list<R: BufRead>(
    reader: R,
    options: &ParseOptions,
) -> Result<LoadedGraph, GraphError> {
    let mut ids: HashMap<i64, u32> = HashMap::new();
    let mut labels: Vec<i64> = Vec::new();
    let mut edges: Vec<(u32, u32)> = Vec::new();

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed
            .chars()
            .next()
            .is_some_and(|c| options.comment_prefixes.contains(&c))
        {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next()) {
            (Some(a), Some(b)) => (a, b),
            (Some(_), None) => {
                return Err(GraphError::TooFewTokens {
                    line: line_no,
                    found: 1,
                })
            }
            _ => unreachable!("non-empty trimmed line yields a token"),
        };
        let mut dense = |token: &str| -> Result<u32, GraphError> {
            let label: i64 = token.parse().map_err(|_| GraphError::MalformedToken {
                line: line_no,
                token: token.to_string(),
            })?;
            Ok(*ids.entry(label).or_insert_with(|| {
                labels.push(label);
                (labels.len() - 1) as u32
            }))
        };
        let u = dense(a)?;
        let v = dense(b)?;
        edges.push((u, v));
    }

    if labels.is_empty() {
        return Err(GraphError::EmptyGraph);
    }
    let graph = Graph::from_edges(labels.len(), edges)?;
    Ok(LoadedGraph { graph, labels })
}
