use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use rhometric::densities::{Density, DensityKind};
use rhometric::domains::{Domain, Point};
use rhometric::metric::{
    build_graph, rho_distance_matrix, shortest_paths, whitney_grid, MetricGraph,
};

fn setup(anchors: usize, depth: u32) -> MetricGraph {
    let domain = Domain::half_plane_window(0.0, 1.0, 1.0);
    let density = Density::new(DensityKind::PowerBoundary { beta: -0.5 }).unwrap();
    let grid = whitney_grid(&domain, depth).unwrap();
    let pts: Vec<Point> = (0..anchors)
        .map(|i| Point::new(0.05 + 0.9 * i as f64 / (anchors - 1) as f64, 0.0))
        .collect();
    build_graph(&domain, &density, &grid, &pts).unwrap()
}

/// One sweep per anchor on the current thread; the baseline the parallel
/// implementation is measured against.
fn sequential_matrix(graph: &MetricGraph) -> Vec<f64> {
    let n = graph.anchors.len();
    let mut values = vec![0.0; n * n];
    for (i, &src) in graph.anchors.iter().enumerate() {
        let dist = shortest_paths(graph, src);
        for (j, &dst) in graph.anchors.iter().enumerate() {
            values[i * n + j] = if i == j { 0.0 } else { dist[dst] };
        }
    }
    for i in 0..n {
        for j in 0..i {
            let avg = (values[i * n + j] + values[j * n + i]) / 2.0;
            values[i * n + j] = avg;
            values[j * n + i] = avg;
        }
    }
    values
}

fn bench_matrix(c: &mut Criterion) {
    let mut group = c.benchmark_group("distance_matrix");
    for &(anchors, depth) in &[(16usize, 10u32), (48, 11)] {
        let graph = setup(anchors, depth);
        group.bench_function(format!("sequential/{anchors}x{depth}"), |b| {
            b.iter(|| black_box(sequential_matrix(black_box(&graph))))
        });
        group.bench_function(format!("default/{anchors}x{depth}"), |b| {
            b.iter(|| black_box(rho_distance_matrix(black_box(&graph)).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_matrix);
criterion_main!(benches);
