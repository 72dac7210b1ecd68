//! Synthetic benchmark graphs: the barbell and a cycle decorated with small
//! shapes (houses, fans, stars), each with ground-truth role labels.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::labels::LabeledDataset;

/// Two cliques of `clique_size` nodes joined by a path of `bridge_length`
/// nodes.
///
/// Layout: clique A is `0..c` with connector `c-1`, the bridge is
/// `c..c+b`, clique B is `c+b..2c+b` with connector `c+b`.
pub fn gen_barbell(clique_size: usize, bridge_length: usize) -> Result<Graph> {
    if clique_size < 2 {
        return Err(Error::InvalidParameter(format!(
            "barbell clique size must be >= 2, got {clique_size}"
        )));
    }
    if bridge_length < 1 {
        return Err(Error::InvalidParameter("barbell bridge length must be >= 1".into()));
    }
    let c = clique_size;
    let b = bridge_length;
    let n = 2 * c + b;
    let mut edges = Vec::new();
    for offset in [0, c + b] {
        for i in 0..c {
            for j in i + 1..c {
                edges.push((offset + i, offset + j));
            }
        }
    }
    // connector A, bridge nodes, connector B form one path
    for u in (c - 1)..(c + b) {
        edges.push((u, u + 1));
    }
    Graph::from_edges(n, edges)
}

/// Automorphism classes of [`gen_barbell`]: clique interiors, the two
/// connectors, and bridge nodes paired by their distance to the nearer end.
pub fn barbell_roles(clique_size: usize, bridge_length: usize) -> Result<LabeledDataset> {
    gen_barbell(clique_size, bridge_length)?;
    let c = clique_size;
    let b = bridge_length;
    let names: Vec<String> = (0..2 * c + b)
        .map(|u| {
            if u == c - 1 || u == c + b {
                "connector".to_owned()
            } else if u < c || u > c + b {
                "clique".to_owned()
            } else {
                let p = u - c;
                format!("bridge{}", p.min(b - 1 - p))
            }
        })
        .collect();
    Ok(LabeledDataset::from_names(&names))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShapeKind {
    /// Square with a roof: 5 nodes, anchored at a bottom corner.
    House,
    /// Star whose branches are linked in consecutive pairs.
    Fan { branches: usize },
    /// Hub with pendant leaves, anchored at the hub.
    Star { branches: usize },
}

impl ShapeKind {
    pub fn node_count(self) -> usize {
        match self {
            ShapeKind::House => 5,
            ShapeKind::Fan { branches } | ShapeKind::Star { branches } => branches + 1,
        }
    }

    fn tag(self) -> String {
        match self {
            ShapeKind::House => "house".into(),
            ShapeKind::Fan { branches } => format!("fan{branches}"),
            ShapeKind::Star { branches } => format!("star{branches}"),
        }
    }

    /// Local edges (node 0 is the anchor) and per-node role names.
    fn build(self) -> (Vec<(usize, usize)>, Vec<&'static str>) {
        match self {
            ShapeKind::House => (
                vec![(0, 1), (1, 2), (2, 3), (3, 0), (4, 0), (4, 1)],
                vec!["anchor", "corner", "floor-far", "floor-near", "roof"],
            ),
            ShapeKind::Star { branches } => {
                let edges = (1..=branches).map(|k| (0, k)).collect();
                let mut roles = vec!["leaf"; branches + 1];
                roles[0] = "hub";
                (edges, roles)
            }
            ShapeKind::Fan { branches } => {
                let mut edges: Vec<_> = (1..=branches).map(|k| (0, k)).collect();
                let mut roles = vec!["leaf"; branches + 1];
                roles[0] = "hub";
                let mut k = 1;
                while k + 1 < branches {
                    edges.push((k, k + 1));
                    roles[k] = "blade";
                    roles[k + 1] = "blade";
                    k += 2;
                }
                (edges, roles)
            }
        }
    }
}

impl fmt::Display for ShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

/// A shape kind and how many copies to attach.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShapeSpec {
    pub kind: ShapeKind,
    pub count: usize,
}

impl FromStr for ShapeSpec {
    type Err = Error;

    /// `house:10`, `fan6:3`, `star5:2` (branch count defaults to 6).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad shape spec {s:?}; expected e.g. house:10 or fan6:2"));
        let (name, count) = s.split_once(':').ok_or_else(bad)?;
        let count: usize = count.trim().parse().map_err(|_| bad())?;
        let name = name.trim();
        let branches = |prefix: &str| -> Result<usize> {
            let rest = &name[prefix.len()..];
            if rest.is_empty() {
                Ok(DEFAULT_BRANCHES)
            } else {
                rest.parse().map_err(|_| bad())
            }
        };
        let kind = if name == "house" {
            ShapeKind::House
        } else if name.starts_with("fan") {
            ShapeKind::Fan {
                branches: branches("fan")?,
            }
        } else if name.starts_with("star") {
            ShapeKind::Star {
                branches: branches("star")?,
            }
        } else {
            return Err(bad());
        };
        Ok(ShapeSpec { kind, count })
    }
}

pub const DEFAULT_BRANCHES: usize = 6;

/// Parameters for [`gen_cycle_with_shapes`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapesConfig {
    pub cycle_len: usize,
    /// Placed round-robin: one copy of each spec in turn until all counts
    /// are used up.
    pub shapes: Vec<ShapeSpec>,
    pub perturb_edges: usize,
    pub seed: u64,
}

impl ShapesConfig {
    /// 30-cycle with 10 houses.
    pub fn houses(perturb_edges: usize, seed: u64) -> Self {
        ShapesConfig {
            cycle_len: 30,
            shapes: vec![ShapeSpec {
                kind: ShapeKind::House,
                count: 10,
            }],
            perturb_edges,
            seed,
        }
    }

    /// 36-cycle with three houses, three fans and three stars, placed alternately.
    pub fn varied(perturb_edges: usize, seed: u64) -> Self {
        ShapesConfig {
            cycle_len: 36,
            shapes: vec![
                ShapeSpec {
                    kind: ShapeKind::House,
                    count: 3,
                },
                ShapeSpec {
                    kind: ShapeKind::Fan {
                        branches: DEFAULT_BRANCHES,
                    },
                    count: 3,
                },
                ShapeSpec {
                    kind: ShapeKind::Star {
                        branches: DEFAULT_BRANCHES,
                    },
                    count: 3,
                },
            ],
            perturb_edges,
            seed,
        }
    }

    pub fn shape_count(&self) -> usize {
        self.shapes.iter().map(|s| s.count).sum()
    }

    pub fn node_count(&self) -> usize {
        self.cycle_len + self.shapes.iter().map(|s| s.count * s.kind.node_count()).sum::<usize>()
    }
}

/// A cycle with shapes hung off evenly spaced cycle nodes, plus
/// `perturb_edges` random extra edges.
///
/// Each shape's anchor node is joined to one cycle node; the anchors sit
/// `floor(cycle_len / shape_count)` cycle positions apart and shape kinds
/// take turns (see [`ShapesConfig::shapes`]). Cycle nodes are `0..cycle_len`
/// and shape nodes follow in placement order. Shape nodes are labelled by
/// their position inside the shape, cycle nodes by the shapes flanking them
/// and their distance to each.
pub fn gen_cycle_with_shapes(cfg: &ShapesConfig) -> Result<(Graph, LabeledDataset)> {
    if cfg.cycle_len < 3 {
        return Err(Error::InvalidParameter(format!(
            "cycle length must be >= 3, got {}",
            cfg.cycle_len
        )));
    }
    let shape_count = cfg.shape_count();
    if shape_count > cfg.cycle_len {
        return Err(Error::InvalidParameter(format!(
            "{shape_count} shapes do not fit on a cycle with {} attachment slots",
            cfg.cycle_len
        )));
    }
    for spec in &cfg.shapes {
        if let ShapeKind::Fan { branches } | ShapeKind::Star { branches } = spec.kind {
            if branches == 0 {
                return Err(Error::InvalidParameter(format!(
                    "{} needs at least one branch",
                    spec.kind
                )));
            }
        }
    }

    let n = cfg.node_count();
    let mut edges: Vec<(usize, usize)> = (0..cfg.cycle_len).map(|i| (i, (i + 1) % cfg.cycle_len)).collect();
    let mut names = vec![String::new(); n];

    let spacing = cfg.cycle_len.checked_div(shape_count).unwrap_or(0);
    let plugins: Vec<usize> = (0..shape_count).map(|k| k * spacing).collect();

    let kinds = interleaved_kinds(&cfg.shapes);
    let mut next = cfg.cycle_len;
    for (&kind, &plugin) in kinds.iter().zip(&plugins) {
        let (local_edges, roles) = kind.build();
        edges.extend(local_edges.iter().map(|&(a, b)| (next + a, next + b)));
        edges.push((next, plugin));
        for (offset, role) in roles.iter().enumerate() {
            names[next + offset] = format!("{kind}/{role}");
        }
        next += kind.node_count();
    }

    for (i, name) in names.iter_mut().enumerate().take(cfg.cycle_len) {
        *name = cycle_role(i, cfg.cycle_len, &plugins, &kinds);
    }

    let mut graph = Graph::from_edges(n, edges)?;
    if cfg.perturb_edges > 0 {
        graph = perturb(&graph, cfg.perturb_edges, cfg.seed)?;
    }
    Ok((graph, LabeledDataset::from_names(&names)))
}

/// Shape kinds in placement order: one of each spec in turn while copies
/// remain, so different kinds alternate around the cycle.
fn interleaved_kinds(shapes: &[ShapeSpec]) -> Vec<ShapeKind> {
    let mut left: Vec<usize> = shapes.iter().map(|s| s.count).collect();
    let mut out = Vec::with_capacity(left.iter().sum());
    while left.iter().any(|&c| c > 0) {
        for (spec, remaining) in shapes.iter().zip(left.iter_mut()) {
            if *remaining > 0 {
                out.push(spec.kind);
                *remaining -= 1;
            }
        }
    }
    out
}

/// Role of cycle node `i`: the shapes attached at the nearest attachment
/// points on either side and the cycle distance to each, read in whichever
/// direction sorts first so mirror-image positions share a role.
fn cycle_role(i: usize, cycle_len: usize, plugins: &[usize], kinds: &[ShapeKind]) -> String {
    if plugins.is_empty() {
        return "cycle".to_owned();
    }
    // plugins are increasing; an attachment node sees its own shape on both sides
    let behind = plugins.iter().rposition(|&p| p <= i).unwrap_or(plugins.len() - 1);
    let ahead = if plugins[behind] == i {
        behind
    } else {
        plugins.iter().position(|&p| p > i).unwrap_or(0)
    };
    let dist_behind = (i + cycle_len - plugins[behind]) % cycle_len;
    let dist_ahead = (plugins[ahead] + cycle_len - i) % cycle_len;
    let forward = (kinds[behind].tag(), dist_behind, kinds[ahead].tag(), dist_ahead);
    let backward = (kinds[ahead].tag(), dist_ahead, kinds[behind].tag(), dist_behind);
    let (k1, d1, k2, d2) = forward.min(backward);
    format!("cycle/{k1}+{d1}/{k2}+{d2}")
}

/// Adds `count` uniformly random new edges between distinct, nonadjacent nodes.
fn perturb(g: &Graph, count: usize, seed: u64) -> Result<Graph> {
    let n = g.node_count();
    let capacity = n * (n - 1) / 2 - g.edge_count();
    if count > capacity {
        return Err(Error::InvalidParameter(format!(
            "cannot add {count} edges, only {capacity} node pairs are free"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    let mut present: std::collections::HashSet<(usize, usize)> = edges.iter().copied().collect();
    let mut added = 0;
    while added < count {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        let e = (a.min(b), a.max(b));
        if present.insert(e) {
            edges.push(e);
            added += 1;
        }
    }
    Graph::from_edges(n, edges)
}
