//! Whitney-type quadtree decomposition.
//!
//! The domain is covered by a quadtree rooted at a square around its bounding
//! box. A square is accepted as a grid cell once its center lies inside the
//! domain and its side length is at most the center's boundary distance;
//! otherwise it is split, up to `max_depth`. Unaccepted deepest squares form
//! a boundary collar of width comparable to the finest cell size. Acceptance
//! does not depend on `max_depth`, so grids of increasing depth are nested:
//! deepening only adds cells inside the previous collar.

use std::collections::HashMap;

use crate::domains::{Domain, Point};
use crate::error::{Error, Result};

/// One accepted grid cell.
#[derive(Debug, Clone, Copy)]
pub struct Cell {
    pub center: Point,
    pub size: f64,
    pub depth: u32,
    /// Column/row of the cell within its depth level.
    pub ix: u32,
    pub iy: u32,
}

/// Memory guard on the quadtree recursion.
pub const MAX_GRID_DEPTH: u32 = 14;

#[derive(Debug, Clone)]
pub struct WhitneyGrid {
    pub cells: Vec<Cell>,
    pub max_depth: u32,
    /// Root square: lower-left corner and side length.
    pub origin: Point,
    pub root_size: f64,
    /// Smallest accepted cell size (the resolution of the grid).
    pub h_min: f64,
    /// `(depth, ix, iy) -> cell index`, for point location.
    index: HashMap<(u32, u32, u32), usize>,
}

/// Builds the grid for a domain.
pub fn whitney_grid(domain: &Domain, max_depth: u32) -> Result<WhitneyGrid> {
    if max_depth > MAX_GRID_DEPTH {
        return Err(Error::DepthExceeded(max_depth, MAX_GRID_DEPTH));
    }
    let (lo, hi) = domain.bounding_box();
    let root_size = (hi.x - lo.x).max(hi.y - lo.y);
    let origin = lo;

    let mut grid = WhitneyGrid {
        cells: Vec::new(),
        max_depth,
        origin,
        root_size,
        h_min: f64::INFINITY,
        index: HashMap::new(),
    };
    let mut stack = vec![(0u32, 0u32, 0u32)];
    while let Some((depth, ix, iy)) = stack.pop() {
        let size = root_size / (1u64 << depth) as f64;
        let center = Point::new(
            origin.x + (ix as f64 + 0.5) * size,
            origin.y + (iy as f64 + 0.5) * size,
        );
        let inside = domain.is_inside(center);
        if inside && size <= domain.boundary_distance_unchecked(center) {
            grid.h_min = grid.h_min.min(size);
            grid.index.insert((depth, ix, iy), grid.cells.len());
            grid.cells.push(Cell {
                center,
                size,
                depth,
                ix,
                iy,
            });
            continue;
        }
        if depth == max_depth || domain.cell_outside(center, size) {
            continue;
        }
        for dx in 0..2u32 {
            for dy in 0..2u32 {
                stack.push((depth + 1, 2 * ix + dx, 2 * iy + dy));
            }
        }
    }
    Ok(grid)
}

impl WhitneyGrid {
    /// Side length of depth-`d` squares.
    pub fn size_at(&self, depth: u32) -> f64 {
        self.root_size / (1u64 << depth) as f64
    }

    /// Index of the accepted cell whose square contains `p`, if any.
    pub fn locate(&self, p: Point) -> Option<usize> {
        for depth in 0..=self.max_depth {
            let size = self.size_at(depth);
            let fx = (p.x - self.origin.x) / size;
            let fy = (p.y - self.origin.y) / size;
            if fx < 0.0 || fy < 0.0 {
                return None;
            }
            if let Some(&i) = self.index.get(&(depth, fx as u32, fy as u32)) {
                return Some(i);
            }
        }
        None
    }

    /// The accepted cell at exact quadtree coordinates, if any.
    pub fn cell_at(&self, depth: u32, ix: u32, iy: u32) -> Option<usize> {
        self.index.get(&(depth, ix, iy)).copied()
    }
}
