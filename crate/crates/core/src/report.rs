//! Residual reports and convergence orders.

use serde::Serialize;

use crate::connection::Grid2D;

/// Per-node residual norms with aggregates over interior nodes.
///
/// Nodes closer than `margin` to a non-periodic edge are excluded from `max` and `l2`.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    #[serde(skip)]
    pub per_node: Vec<f64>,
    pub margin: usize,
    pub max: f64,
    pub l2: f64,
}

impl ResidualReport {
    pub fn new(grid: &Grid2D, margin: usize, per_node: Vec<f64>) -> Self {
        let mut max = 0.0f64;
        let mut sum = 0.0;
        for j in 0..grid.nv {
            for i in 0..grid.nu {
                if grid.is_interior(i, j, margin) {
                    let r = per_node[grid.idx(i, j)];
                    max = max.max(r);
                    sum += r * r;
                }
            }
        }
        Self { per_node, margin, max, l2: (sum * grid.h * grid.h).sqrt() }
    }
}

/// Default absolute level below which a residual counts as round-off.
pub const ROUND_OFF: f64 = 1e-10;

/// Empirical order `log2(R_h / R_{h/2})`, or round-off when the coarse residual
/// is already below `floor`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Order {
    Rate(f64),
    RoundOff,
}

impl Order {
    pub fn estimate(coarse: f64, fine: f64, floor: f64) -> Self {
        if coarse <= floor {
            Order::RoundOff
        } else {
            Order::Rate((coarse / fine.max(f64::MIN_POSITIVE)).log2())
        }
    }

    /// As [`estimate`](Self::estimate) for steps `h_coarse = ratio * h_fine`.
    pub fn between(coarse: f64, fine: f64, ratio: f64, floor: f64) -> Self {
        match Self::estimate(coarse, fine, floor) {
            Order::Rate(r) => Order::Rate(r / ratio.log2()),
            o => o,
        }
    }

    /// Order at least `min`, or round-off.
    pub fn at_least(&self, min: f64) -> bool {
        match self {
            Order::Rate(r) => *r >= min,
            Order::RoundOff => true,
        }
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Order::Rate(r) => write!(f, "{r:.3}"),
            Order::RoundOff => write!(f, "round-off"),
        }
    }
}
