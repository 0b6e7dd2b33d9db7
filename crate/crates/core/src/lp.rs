//! Dense dictionary simplex for `max c·x` subject to `A·x ≤ b`, `x ≥ 0`
//! with `b ≥ 0`, so the origin is a feasible starting basis.
//!
//! Bland's rule picks both the entering and the leaving variable, which
//! rules out cycling on the degenerate rows the rate polytopes produce
//! (`R ≤ C(0) = 0`) and makes the pivot sequence a pure function of the
//! input.

use thiserror::Error;

/// Pivot and ratio-test threshold.
pub const PIVOT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("right-hand side {index} is {value}; must be finite and nonnegative")]
    BadRhs { index: usize, value: f64 },
    #[error("row {row} has {found} coefficients, expected {expected}")]
    RowLength { row: usize, expected: usize, found: usize },
    #[error("objective is unbounded")]
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: f64,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    objective: Vec<f64>,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        LinearProgram {
            objective,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    /// Adds `row·x ≤ rhs`.
    pub fn constraint(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.rows.push(row);
        self.rhs.push(rhs);
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn maximize(&self) -> Result<LpSolution, LpError> {
        let n = self.num_vars();
        let m = self.rows.len();
        for (row, coeffs) in self.rows.iter().enumerate() {
            if coeffs.len() != n {
                return Err(LpError::RowLength { row, expected: n, found: coeffs.len() });
            }
        }
        if let Some((index, &value)) = self.rhs.iter().enumerate().find(|(_, b)| !b.is_finite() || **b < 0.0) {
            return Err(LpError::BadRhs { index, value });
        }

        let width = n + 1;
        // row r: x_basis[r] = t[r][n] − Σ_j t[r][j]·x_nonbasis[j]
        let mut t = vec![0.0; m * width];
        for r in 0..m {
            t[r * width..r * width + n].copy_from_slice(&self.rows[r]);
            t[r * width + n] = self.rhs[r];
        }
        // z = z0 + Σ_j cost[j]·x_nonbasis[j]
        let mut cost = self.objective.clone();
        let mut z0 = 0.0;
        // labels 0..n are structural, n..n+m are slacks
        let mut nonbasis: Vec<usize> = (0..n).collect();
        let mut basis: Vec<usize> = (n..n + m).collect();

        loop {
            let entering = (0..n)
                .filter(|&j| cost[j] > PIVOT_EPS)
                .min_by_key(|&j| nonbasis[j]);
            let Some(col) = entering else { break };

            let mut leave: Option<(usize, f64)> = None;
            for r in 0..m {
                let coef = t[r * width + col];
                if coef <= PIVOT_EPS {
                    continue;
                }
                let ratio = t[r * width + n] / coef;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((best, best_ratio)) => {
                        if ratio < best_ratio - PIVOT_EPS
                            || (ratio <= best_ratio + PIVOT_EPS && basis[r] < basis[best])
                        {
                            Some((r, ratio))
                        } else {
                            Some((best, best_ratio))
                        }
                    }
                };
            }
            let Some((row, _)) = leave else {
                return Err(LpError::Unbounded);
            };

            let piv = t[row * width + col];
            for k in 0..width {
                if k != col {
                    t[row * width + k] /= piv;
                }
            }
            t[row * width + col] = 1.0 / piv;

            for r in 0..m {
                if r == row {
                    continue;
                }
                let factor = t[r * width + col];
                if factor == 0.0 {
                    continue;
                }
                for k in 0..width {
                    if k != col {
                        t[r * width + k] -= factor * t[row * width + k];
                    }
                }
                t[r * width + col] = -factor * t[row * width + col];
                if t[r * width + n] < 0.0 {
                    // round-off only; feasibility is maintained by the ratio test
                    t[r * width + n] = 0.0;
                }
            }

            let c = cost[col];
            for k in 0..n {
                if k != col {
                    cost[k] -= c * t[row * width + k];
                }
            }
            cost[col] = -c * t[row * width + col];
            z0 += c * t[row * width + n];

            std::mem::swap(&mut basis[row], &mut nonbasis[col]);
        }

        let mut x = vec![0.0; n];
        for (r, &label) in basis.iter().enumerate() {
            if label < n {
                x[label] = t[r * width + n];
            }
        }
        let value = if n == 0 { 0.0 } else { self.objective.iter().zip(&x).map(|(c, x)| c * x).sum() };
        debug_assert!((value - z0).abs() <= 1e-9 * (1.0 + z0.abs()));
        Ok(LpSolution { value, x })
    }
}
