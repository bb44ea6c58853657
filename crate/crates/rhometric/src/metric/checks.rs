//! Diagnostics for the conformal-density conditions: volume growth of metric
//! balls and local scaling exponents of the distance matrices.

use crate::error::{Error, Result};

use super::graph::{shortest_paths, DistanceMatrix, MetricGraph, NodeKind};

/// Ratios `mu_rho(B_rho(x, r)) / r^2` along a radius ladder, where the
/// measure of a ball is estimated by summing `(rho * size)^2` over the grid
/// cells within graph distance `r` of the anchor.
pub fn volume_growth_check(graph: &MetricGraph, anchor: usize, radii: &[f64]) -> Vec<f64> {
    let dist = shortest_paths(graph, graph.anchors[anchor]);
    radii
        .iter()
        .map(|&r| {
            let mut mu = 0.0;
            for (i, node) in graph.nodes.iter().enumerate() {
                if let NodeKind::Cell { size } = node.kind {
                    // Linear partial-volume ramp for cells straddling the
                    // ball boundary; full weight once the cell is r - size/2
                    // deep, zero beyond r + size/2.
                    let frac = ((r - dist[i]) / size + 0.5).clamp(0.0, 1.0);
                    mu += frac * (node.rho * size).powi(2);
                }
            }
            mu / (r * r)
        })
        .collect()
}

/// Least-squares slope of `ys` on `xs`.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

fn adjacent_slopes(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for w in xs.windows(2).zip(ys.windows(2)) {
        let s = (w.1[1] - w.1[0]) / (w.0[1] - w.0[0]);
        lo = lo.min(s);
        hi = hi.max(s);
    }
    (lo, hi)
}

/// Local scaling exponents around one base point.
#[derive(Debug, Clone, Copy)]
pub struct LocalExponents {
    /// Regression slope of `log diam_rho(B_d(x, r))` on `log r`, with the
    /// min/max single-scale slopes as liminf/limsup proxies.
    pub i_slope: f64,
    pub i_min: f64,
    pub i_max: f64,
    /// Same for `log diam_d(B_rho(x, r))` on `log r`.
    pub k_slope: f64,
    pub k_min: f64,
    pub k_max: f64,
}

/// Computes the exponents from matched distance matrices over one anchor set.
///
/// The ladder is given in `d` units. For the `rho`-balls each radius is
/// multiplied by the ratio of median distances from the base point, so that
/// balls in the two metrics select comparable neighborhoods even when the
/// metrics live on very different scales.
pub fn local_exponents(
    d_matrix: &DistanceMatrix,
    rho_matrix: &DistanceMatrix,
    base: usize,
    radii: &[f64],
) -> Result<LocalExponents> {
    assert_eq!(d_matrix.n, rho_matrix.n, "matrices over different anchor sets");
    let median = |m: &DistanceMatrix| -> f64 {
        let mut v: Vec<f64> = (0..m.n).filter(|&i| i != base).map(|i| m.get(base, i)).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v[v.len() / 2]
    };
    let kappa = median(rho_matrix) / median(d_matrix);
    let ball_diam = |in_m: &DistanceMatrix, out_m: &DistanceMatrix, r: f64| -> Result<f64> {
        let members: Vec<usize> = (0..in_m.n).filter(|&i| in_m.get(base, i) <= r).collect();
        if members.len() < 2 {
            return Err(Error::EmptyBall(r));
        }
        let mut diam = 0.0f64;
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                diam = diam.max(out_m.get(i, j));
            }
        }
        Ok(diam)
    };
    let log_r: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let i_vals: Vec<f64> = radii
        .iter()
        .map(|&r| Ok(ball_diam(d_matrix, rho_matrix, r)?.ln()))
        .collect::<Result<_>>()?;
    let k_vals: Vec<f64> = radii
        .iter()
        .map(|&r| Ok(ball_diam(rho_matrix, d_matrix, kappa * r)?.ln()))
        .collect::<Result<_>>()?;
    let (i_min, i_max) = adjacent_slopes(&log_r, &i_vals);
    let (k_min, k_max) = adjacent_slopes(&log_r, &k_vals);
    Ok(LocalExponents {
        i_slope: slope(&log_r, &i_vals),
        i_min,
        i_max,
        k_slope: slope(&log_r, &k_vals),
        k_min,
        k_max,
    })
}
