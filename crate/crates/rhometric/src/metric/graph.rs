//! Weighted graph over a Whitney grid and shortest-path distances.
//!
//! Nodes are cell centers plus boundary anchors. Cell centers are joined by a
//! 16-neighborhood stencil (king and knight moves), which keeps the
//! shortest-path metrication error on straight lines below about 2.8%. Edge
//! weights are Euclidean length times the density at the segment midpoint, so
//! every weight is exactly linear in the density. Each anchor is joined to the
//! grid by one leg per depth, probing at height 1.5x the depth's cell size
//! along the inward normal; for exact power densities the leg weight is the
//! closed-form integral `h^(1+beta)/(1+beta)`, which carries the full
//! near-boundary singularity. Because leg probes for shallow depths are
//! unchanged when the grid deepens, the graph of a deeper grid contains the
//! shallower graph, making distances non-increasing under refinement.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::io::Write;

use crate::densities::{eval_density, Density};
use crate::domains::{Domain, Point};
use crate::error::{Error, Result};

use super::radial::{inward_normal, leg_weight};
use super::whitney::WhitneyGrid;

/// King plus knight moves, in units of the cell size.
pub const STENCIL: [(i32, i32); 16] = [
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
    (1, 2),
    (1, -2),
    (-1, 2),
    (-1, -2),
    (2, 1),
    (2, -1),
    (-2, 1),
    (-2, -1),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NodeKind {
    /// Grid cell with its side length.
    Cell { size: f64 },
    Anchor,
}

#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub pos: Point,
    pub kind: NodeKind,
    /// Density value at the node position (0 for anchors of singular
    /// densities; used by volume estimates, not by edge weights).
    pub rho: f64,
}

#[derive(Debug, Clone)]
pub struct MetricGraph {
    pub nodes: Vec<Node>,
    /// Adjacency lists of `(neighbor, weight)`.
    pub adj: Vec<Vec<(usize, f64)>>,
    /// Node indices of the anchors, in input order.
    pub anchors: Vec<usize>,
    /// Resolution of the underlying grid.
    pub h_min: f64,
}

/// Builds the weighted graph for a density over a grid, with the given
/// boundary anchors.
pub fn build_graph(
    domain: &Domain,
    density: &Density,
    grid: &WhitneyGrid,
    anchors: &[Point],
) -> Result<MetricGraph> {
    let mut nodes: Vec<Node> = grid
        .cells
        .iter()
        .map(|c| {
            Ok(Node {
                pos: c.center,
                kind: NodeKind::Cell { size: c.size },
                rho: eval_density(density, c.center, domain)?,
            })
        })
        .collect::<Result<_>>()?;
    let mut adj = vec![Vec::new(); grid.cells.len() + anchors.len()];

    // Cell-to-cell stencil edges. The neighbor is whatever accepted cell
    // contains the stepped point, so edges also bridge depth transitions.
    let mut seen: HashMap<(usize, usize), ()> = HashMap::new();
    for (i, cell) in grid.cells.iter().enumerate() {
        for &(dx, dy) in &STENCIL {
            let target = Point::new(
                cell.center.x + dx as f64 * cell.size,
                cell.center.y + dy as f64 * cell.size,
            );
            let Some(j) = grid.locate(target) else {
                continue;
            };
            if j == i {
                continue;
            }
            let key = (i.min(j), i.max(j));
            if seen.contains_key(&key) {
                continue;
            }
            let other = grid.cells[j].center;
            let mid = Point::new((cell.center.x + other.x) / 2.0, (cell.center.y + other.y) / 2.0);
            let Ok(rho_mid) = eval_density(density, mid, domain) else {
                continue;
            };
            let w = cell.center.dist(other) * rho_mid;
            seen.insert(key, ());
            adj[i].push((j, w));
            adj[j].push((i, w));
        }
    }

    // Anchor legs, one per depth whose probe lands in an accepted cell.
    let mut anchor_ids = Vec::with_capacity(anchors.len());
    for (k, &a) in anchors.iter().enumerate() {
        if !domain.on_boundary(a, 1e-9) {
            return Err(Error::AnchorNotOnBoundary(a.x, a.y));
        }
        let n = inward_normal(domain, a);
        let id = nodes.len();
        nodes.push(Node {
            pos: a,
            kind: NodeKind::Anchor,
            rho: 0.0,
        });
        let mut connected = false;
        let mut linked: HashMap<usize, ()> = HashMap::new();
        for depth in 0..=grid.max_depth {
            let h = 1.5 * grid.size_at(depth);
            let probe = Point::new(a.x + n.0 * h, a.y + n.1 * h);
            let Some(j) = grid.locate(probe) else {
                continue;
            };
            if linked.contains_key(&j) {
                continue;
            }
            let w = leg_weight(density, domain, a, grid.cells[j].center)?;
            linked.insert(j, ());
            adj[id].push((j, w));
            adj[j].push((id, w));
            connected = true;
        }
        if !connected {
            return Err(Error::DisconnectedAnchor(k));
        }
        anchor_ids.push(id);
    }

    Ok(MetricGraph {
        nodes,
        adj,
        anchors: anchor_ids,
        h_min: grid.h_min,
    })
}

#[derive(PartialEq)]
struct State {
    cost: f64,
    node: usize,
}

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap with deterministic tie-breaking by node index.
        other
            .cost
            .partial_cmp(&self.cost)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source shortest-path distances (Dijkstra; `inf` where unreachable).
pub fn shortest_paths(graph: &MetricGraph, source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; graph.nodes.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(State {
        cost: 0.0,
        node: source,
    });
    while let Some(State { cost, node }) = heap.pop() {
        if cost > dist[node] {
            continue;
        }
        for &(next, w) in &graph.adj[node] {
            let c = cost + w;
            if c < dist[next] {
                dist[next] = c;
                heap.push(State { cost: c, node: next });
            }
        }
    }
    dist
}

/// Shortest-path distance between two anchors (by anchor index).
pub fn rho_distance(graph: &MetricGraph, a: usize, b: usize) -> Result<f64> {
    let (sa, sb) = (graph.anchors[a], graph.anchors[b]);
    if sa == sb {
        return Ok(0.0);
    }
    let d = shortest_paths(graph, sa)[sb];
    if d.is_finite() {
        Ok(d)
    } else {
        Err(Error::Unreachable(sa, sb))
    }
}

/// Symmetric pairwise distances over all anchors.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    pub n: usize,
    /// Row-major `n x n` values.
    pub values: Vec<f64>,
}

impl DistanceMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// CSV export with index headers.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "i")?;
        for j in 0..self.n {
            write!(w, ",{j}")?;
        }
        writeln!(w)?;
        for i in 0..self.n {
            write!(w, "{i}")?;
            for j in 0..self.n {
                write!(w, ",{:.17e}", self.get(i, j))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    /// Compact binary dump: magic `RHOM`, version u32, n u32, then row-major
    /// little-endian f64 values.
    pub fn write_binary<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(b"RHOM")?;
        w.write_all(&1u32.to_le_bytes())?;
        w.write_all(&(self.n as u32).to_le_bytes())?;
        for v in &self.values {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary(bytes: &[u8]) -> Result<DistanceMatrix> {
        let bad = |msg: &str| Error::InvalidSpec(format!("distance dump: {msg}"));
        if bytes.len() < 12 || &bytes[..4] != b"RHOM" {
            return Err(bad("missing RHOM magic"));
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        if version != 1 {
            return Err(bad("unsupported version"));
        }
        let n = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
        if bytes.len() != 12 + 8 * n * n {
            return Err(bad("truncated payload"));
        }
        let values = bytes[12..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(DistanceMatrix { n, values })
    }
}

/// One shortest-path sweep per anchor; the result is symmetrized by averaging
/// (sweeps agree up to float rounding on an undirected graph).
pub fn rho_distance_matrix(graph: &MetricGraph) -> Result<DistanceMatrix> {
    let n = graph.anchors.len();
    let sweep = |i: usize| -> Result<Vec<f64>> {
        let dist = shortest_paths(graph, graph.anchors[i]);
        graph
            .anchors
            .iter()
            .enumerate()
            .map(|(j, &aj)| {
                let d = if i == j { 0.0 } else { dist[aj] };
                if d.is_finite() {
                    Ok(d)
                } else {
                    Err(Error::Unreachable(graph.anchors[i], aj))
                }
            })
            .collect()
    };

    #[cfg(feature = "parallel")]
    let rows: Vec<Vec<f64>> = {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(sweep).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Vec<f64>> = (0..n).map(sweep).collect::<Result<_>>()?;

    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            values[i * n + j] = (rows[i][j] + rows[j][i]) / 2.0;
        }
    }
    Ok(DistanceMatrix { n, values })
}
