//! Undirected simple graphs with dense node ids, BFS hop rings and degree
//! sequences.

use std::collections::{HashMap, VecDeque};
use std::io::BufRead;

use crate::error::{Error, Result};

/// Undirected, unweighted simple graph on nodes `0..node_count`.
///
/// Adjacency lists are sorted and symmetric; self-loops and parallel edges
/// never survive construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

/// Counts of edges dropped while building a [`Graph`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Dropped {
    pub duplicates: usize,
    pub self_loops: usize,
}

impl Graph {
    /// Builds a graph, silently dropping self-loops and duplicate edges.
    pub fn from_edges(node_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::from_edges_counted(node_count, edges).map(|(g, _)| g)
    }

    pub fn from_edges_counted(
        node_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<(Self, Dropped)> {
        let mut adjacency = vec![Vec::new(); node_count];
        let mut dropped = Dropped::default();
        for (u, v) in edges {
            for node in [u, v] {
                if node >= node_count {
                    return Err(Error::NodeOutOfRange { node, node_count });
                }
            }
            if u == v {
                dropped.self_loops += 1;
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut directed_dupes = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            directed_dupes += before - list.len();
        }
        dropped.duplicates = directed_dupes / 2;
        Ok((Graph { adjacency }, dropped))
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency.get(u).is_some_and(|list| list.binary_search(&v).is_ok())
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn isolated_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.node_count()).filter(|&u| self.adjacency[u].is_empty())
    }

    fn check_node(&self, u: usize) -> Result<()> {
        if u >= self.node_count() {
            Err(Error::NodeOutOfRange {
                node: u,
                node_count: self.node_count(),
            })
        } else {
            Ok(())
        }
    }

    /// Hop distance from `source` to every node, `None` when unreachable.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = dist[u].map(|d| d + 1);
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = next;
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

/// Nodes grouped by exact hop distance from a source node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopRings {
    pub source: usize,
    /// `rings[k]` holds the nodes at exactly `k` hops, sorted by id.
    pub rings: Vec<Vec<usize>>,
}

impl HopRings {
    pub fn ring(&self, k: usize) -> &[usize] {
        self.rings.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn total_len(&self) -> usize {
        self.rings.iter().map(Vec::len).sum()
    }
}

/// BFS layering around `u`, truncated at `k_max`. The result always has
/// `k_max + 1` rings; rings past the eccentricity of `u` are empty.
pub fn khop_rings(g: &Graph, u: usize, k_max: usize) -> Result<HopRings> {
    g.check_node(u)?;
    let mut rings = vec![Vec::new(); k_max + 1];
    let mut seen = vec![false; g.node_count()];
    seen[u] = true;
    rings[0].push(u);
    for k in 1..=k_max {
        let (done, rest) = rings.split_at_mut(k);
        let frontier = &done[k - 1];
        let next = &mut rest[0];
        for &w in frontier {
            for &v in g.neighbors(w) {
                if !seen[v] {
                    seen[v] = true;
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
    }
    Ok(HopRings { source: u, rings })
}

/// Degrees of the ring members in ascending order.
pub fn ordered_degree_sequence(g: &Graph, ring: &[usize]) -> Vec<usize> {
    let mut degrees: Vec<usize> = ring.iter().map(|&v| g.degree(v)).collect();
    degrees.sort_unstable();
    degrees
}

/// Largest eccentricity over all connected components.
pub fn diameter(g: &Graph) -> Result<usize> {
    if g.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok((0..g.node_count())
        .map(|u| g.bfs_distances(u).into_iter().flatten().max().unwrap_or(0))
        .max()
        .unwrap_or(0))
}

/// Mapping between the tokens of an edge-list file and dense node ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeIds {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl NodeIds {
    /// Identity mapping `0..n` with decimal names.
    pub fn sequential(n: usize) -> Self {
        let mut ids = NodeIds::default();
        for i in 0..n {
            ids.intern(&i.to_string());
        }
        ids
    }

    pub fn from_names(names: impl IntoIterator<Item = String>) -> Result<Self> {
        let mut ids = NodeIds::default();
        for name in names {
            if ids.index.contains_key(&name) {
                return Err(Error::DuplicateNode(name));
            }
            ids.intern(&name);
        }
        Ok(ids)
    }

    fn intern(&mut self, name: &str) -> usize {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.names.len();
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), id);
        id
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn id(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// A graph read from text together with its id table.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub ids: NodeIds,
    pub dropped: Dropped,
}

/// Parses a whitespace-separated edge list. Blank lines and lines starting
/// with `#` are skipped; node tokens get dense ids in order of first
/// appearance.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<LoadedGraph> {
    let mut ids = NodeIds::default();
    let mut edges = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::parse(
                lineno + 1,
                format!("expected two node tokens, got {trimmed:?}"),
            ));
        };
        edges.push((ids.intern(a), ids.intern(b)));
    }
    if ids.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let (graph, dropped) = Graph::from_edges_counted(ids.len(), edges)?;
    if dropped.duplicates + dropped.self_loops > 0 {
        log::warn!(
            "dropped {} duplicate edge(s) and {} self-loop(s)",
            dropped.duplicates,
            dropped.self_loops
        );
    }
    Ok(LoadedGraph { graph, ids, dropped })
}
