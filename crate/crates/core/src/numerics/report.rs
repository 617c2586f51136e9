use serde::{Deserialize, Serialize};

use super::field::ScalarField;

/// Summary statistics of a residual field over the masked nodes.
///
/// `l2` is the root-mean-square value; a non-finite residual anywhere makes
/// every statistic infinite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub max_abs: f64,
    pub mean_abs: f64,
    pub l2: f64,
    pub h: f64,
    pub node_count: usize,
}

impl ResidualReport {
    pub fn of(field: &ScalarField) -> Self {
        let g = field.grid();
        let h = g.h();
        let (mut max, mut sum, mut sq, mut n) = (0.0f64, 0.0, 0.0, 0usize);
        for v in field.masked_values() {
            if !v.is_finite() {
                return ResidualReport {
                    max_abs: f64::INFINITY,
                    mean_abs: f64::INFINITY,
                    l2: f64::INFINITY,
                    h,
                    node_count: g.masked_count(),
                };
            }
            let a = v.abs();
            max = max.max(a);
            sum += a;
            sq += a * a;
            n += 1;
        }
        let (mean, l2) = if n == 0 {
            (0.0, 0.0)
        } else {
            (sum / n as f64, (sq / n as f64).sqrt())
        };
        // guard against the last-bit disagreement between max and mean
        ResidualReport {
            max_abs: max.max(mean),
            mean_abs: mean,
            l2,
            h,
            node_count: n,
        }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_abs <= tol
    }

    /// `max_abs / h²`, the constant in an `O(h²)` bound.
    pub fn h2_constant(&self) -> f64 {
        self.max_abs / (self.h * self.h)
    }
}
