//! Independent check of the closed-form sum rate: for a fixed power split,
//! write down every receiver's joint-decoding rate region as linear
//! inequalities over per-user common and private rates, and maximize the
//! rate sum with an exact LP. Sweeping a grid of splits bounds the best
//! simple-HK sum rate without using the effective-gain recursion.
//!
//! Variable layout: `2i` is user `i`'s common rate, `2i + 1` its private
//! rate (zero-based users).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::cap;
use crate::channel::ChannelConfig;
use crate::error::{Error, Result};
use crate::hk::{max_sum_rate, PowerSplit};
use crate::lp::{LinearProgram, LpSolution};

/// Default cap on the number of grid points a single oracle run evaluates.
pub const DEFAULT_MAX_GRID_POINTS: u128 = 2_000_000;

pub fn common_var(user: usize) -> usize {
    2 * user
}

pub fn private_var(user: usize) -> usize {
    2 * user + 1
}

/// `Σ_{v ∈ support} R_v ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateConstraint {
    pub support: Vec<usize>,
    pub rhs: f64,
}

/// Rate region over `num_vars` nonnegative variables with 0/1 coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatePolytope {
    num_vars: usize,
    constraints: Vec<RateConstraint>,
}

impl RatePolytope {
    /// Every right-hand side must be finite and nonnegative and every
    /// variable must appear alone in some constraint, which keeps the region
    /// bounded and the origin feasible.
    pub fn new(num_vars: usize, constraints: Vec<RateConstraint>) -> Result<Self> {
        for (i, c) in constraints.iter().enumerate() {
            if !c.rhs.is_finite() || c.rhs < 0.0 {
                return Err(Error::InvalidPolytope(format!("constraint {i} has rhs {}", c.rhs)));
            }
            if let Some(&v) = c.support.iter().find(|&&v| v >= num_vars) {
                return Err(Error::DimensionMismatch { expected: num_vars, found: v + 1 });
            }
        }
        for v in 0..num_vars {
            if !constraints.iter().any(|c| c.support == [v]) {
                return Err(Error::InvalidPolytope(format!("variable {v} has no individual bound")));
            }
        }
        Ok(RatePolytope { num_vars, constraints })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[RateConstraint] {
        &self.constraints
    }

    /// Dense coefficient row of constraint `index`.
    pub fn coefficients(&self, index: usize) -> Vec<f64> {
        let mut row = vec![0.0; self.num_vars];
        for &v in &self.constraints[index].support {
            row[v] = 1.0;
        }
        row
    }

    /// Same region with constraint `index` loosened by `delta ≥ 0`.
    pub fn relaxed(&self, index: usize, delta: f64) -> RatePolytope {
        let mut out = self.clone();
        out.constraints[index].rhs += delta.max(0.0);
        out
    }

    pub fn contains(&self, rates: &[f64], tol: f64) -> bool {
        rates.len() == self.num_vars
            && rates.iter().all(|&r| r >= -tol)
            && self
                .constraints
                .iter()
                .all(|c| c.support.iter().map(|&v| rates[v]).sum::<f64>() <= c.rhs + tol)
    }
}

/// Adds the constraints of a Gaussian MAC with the given `(variable,
/// received power)` messages: every nonempty subset `S` gives
/// `Σ_S R ≤ C(Σ_S power / noise)`.
fn push_mac(constraints: &mut Vec<RateConstraint>, messages: &[(usize, f64)], noise: f64) {
    for mask in 1u32..(1 << messages.len()) {
        let mut support = Vec::new();
        let mut power = 0.0;
        for (bit, &(var, p)) in messages.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                support.push(var);
                power += p;
            }
        }
        support.sort_unstable();
        constraints.push(RateConstraint { support, rhs: cap(power / noise) });
    }
}

/// Joint-decoding region of the simple HK scheme with split `split`.
///
/// Receiver 1 decodes both parts of its own message. Receiver `i ≥ 2`
/// jointly decodes the previous user's common part and both of its own
/// parts, with the previous user's private part added to the noise. The
/// full subset family of each MAC is kept, and a common rate constrained at
/// two receivers gets both sets.
pub fn build_polytope(cfg: &ChannelConfig, split: &PowerSplit) -> Result<RatePolytope> {
    let k = cfg.users();
    if split.len() != k {
        return Err(Error::DimensionMismatch { expected: k, found: split.len() });
    }
    let (a, p, g) = (cfg.gains(), cfg.powers(), split.gamma());
    let mut constraints = Vec::with_capacity(3 + 7 * (k - 1));
    push_mac(
        &mut constraints,
        &[(common_var(0), g[0] * p[0]), (private_var(0), (1.0 - g[0]) * p[0])],
        1.0,
    );
    for i in 1..k {
        let cross = a[i - 1] * a[i - 1] * p[i - 1];
        let noise = 1.0 + (1.0 - g[i - 1]) * cross;
        push_mac(
            &mut constraints,
            &[
                (common_var(i - 1), g[i - 1] * cross),
                (common_var(i), g[i] * p[i]),
                (private_var(i), (1.0 - g[i]) * p[i]),
            ],
            noise,
        );
    }
    RatePolytope::new(2 * k, constraints)
}

/// Exact maximum of the sum of all variables over `poly`, with a maximizing
/// vertex.
pub fn max_sum_lp(poly: &RatePolytope) -> LpSolution {
    let lp = (0..poly.constraints.len()).fold(LinearProgram::new(vec![1.0; poly.num_vars]), |lp, i| {
        lp.constraint(poly.coefficients(i), poly.constraints[i].rhs)
    });
    lp.maximize()
        .expect("rate polytopes are bounded with a feasible origin")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub split: PowerSplit,
    pub lp_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub best_sum: f64,
    pub best_split: PowerSplit,
    pub closed_form: f64,
    /// Largest `LP(γ) − closed_form` over the grid.
    pub max_violation: f64,
    pub grid_step: f64,
    pub grid_points: usize,
}

/// Grid sweep over `γ ∈ {0, step, …, 1}^{K−1} × {0}`.
#[derive(Debug, Clone, Copy)]
pub struct GridOracle {
    cells: usize,
    step: f64,
    max_points: u128,
}

impl GridOracle {
    pub fn new(step: f64) -> Result<Self> {
        if !step.is_finite() || step <= 0.0 || step > 1.0 {
            return Err(Error::GridStep(step));
        }
        let cells = (1.0 / step).round();
        if (cells * step - 1.0).abs() > 1e-9 {
            return Err(Error::GridStep(step));
        }
        Ok(GridOracle { cells: cells as usize, step, max_points: DEFAULT_MAX_GRID_POINTS })
    }

    pub fn with_max_points(mut self, max_points: u128) -> Self {
        self.max_points = max_points;
        self
    }

    fn point_count(&self, k: usize) -> Result<usize> {
        let per_axis = self.cells as u128 + 1;
        let points = (0..k - 1).try_fold(1u128, |acc, _| acc.checked_mul(per_axis));
        match points {
            Some(points) if points <= self.max_points => Ok(points as usize),
            Some(points) => Err(Error::GridTooLarge { points, cap: self.max_points }),
            None => Err(Error::GridTooLarge { points: u128::MAX, cap: self.max_points }),
        }
    }

    /// Split at position `index` in lexicographic order (user 1 most
    /// significant).
    fn split_at(&self, k: usize, mut index: usize) -> PowerSplit {
        let per_axis = self.cells + 1;
        let mut gamma = vec![0.0; k];
        for j in (0..k - 1).rev() {
            gamma[j] = (index % per_axis) as f64 / self.cells as f64;
            index /= per_axis;
        }
        PowerSplit::new(gamma).expect("grid values lie in [0, 1]")
    }

    /// LP value at every grid point, in lexicographic order of `γ`.
    pub fn evaluate(&self, cfg: &ChannelConfig) -> Result<Vec<GridPoint>> {
        let k = cfg.users();
        let count = self.point_count(k)?;
        Ok((0..count)
            .into_par_iter()
            .map(|index| {
                let split = self.split_at(k, index);
                let poly = build_polytope(cfg, &split).expect("split length matches the channel");
                let lp_value = max_sum_lp(&poly).value;
                GridPoint { split, lp_value }
            })
            .collect())
    }

    pub fn run(&self, cfg: &ChannelConfig) -> Result<OracleReport> {
        let points = self.evaluate(cfg)?;
        Ok(self.summarize(cfg, &points))
    }

    /// Reduces grid values to a report; ties keep the lexicographically
    /// smallest split.
    pub fn summarize(&self, cfg: &ChannelConfig, points: &[GridPoint]) -> OracleReport {
        let closed_form = max_sum_rate(cfg).sum_rate;
        let best = points
            .iter()
            .fold(None::<&GridPoint>, |best, p| match best {
                Some(b) if b.lp_value >= p.lp_value => Some(b),
                _ => Some(p),
            })
            .expect("grid has at least one point");
        OracleReport {
            best_sum: best.lp_value,
            best_split: best.split.clone(),
            closed_form,
            max_violation: best.lp_value - closed_form,
            grid_step: self.step,
            grid_points: points.len(),
        }
    }
}

/// [`GridOracle`] with the default point cap.
pub fn grid_oracle(cfg: &ChannelConfig, grid_step: f64) -> Result<OracleReport> {
    GridOracle::new(grid_step)?.run(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg(a: &[f64], p: &[f64]) -> ChannelConfig {
        ChannelConfig::new(a.to_vec(), p.to_vec()).unwrap()
    }

    fn split(g: &[f64]) -> PowerSplit {
        PowerSplit::new(g.to_vec()).unwrap()
    }

    fn c(x: f64) -> f64 {
        0.5 * (1.0 + x).log2()
    }

    #[test]
    fn zero_common_power_pins_common_rate() {
        let poly = build_polytope(&cfg(&[0.5], &[3.0, 3.0]), &split(&[0.0, 0.0])).unwrap();
        assert_eq!(poly.constraints().len(), 3 + 7);
        let pinned = poly
            .constraints()
            .iter()
            .find(|c| c.support == [common_var(0)] && c.rhs == 0.0);
        assert!(pinned.is_some());
        let sol = max_sum_lp(&poly);
        assert_eq!(sol.x[common_var(0)], 0.0);
    }

    #[test]
    fn treat_as_noise_optimum() {
        let poly = build_polytope(&cfg(&[0.5], &[3.0, 3.0]), &split(&[0.0, 0.0])).unwrap();
        let v = max_sum_lp(&poly).value;
        assert!((v - (c(3.0) + c(3.0 / 1.75))).abs() < 1e-12);
        assert!((v - 1.720287).abs() < 1e-6);
    }

    #[test]
    fn all_common_optimum() {
        let poly = build_polytope(&cfg(&[1.5, 1.5], &[3.0, 3.0, 3.0]), &split(&[1.0, 1.0, 0.0])).unwrap();
        let sol = max_sum_lp(&poly);
        assert!((sol.value - (1.0 + c(9.75))).abs() < 1e-12);
        assert!((sol.value - 2.713132).abs() < 1e-6);
        assert!(poly.contains(&sol.x, 1e-12));
    }

    #[test]
    fn noisy_point_optimum() {
        let ch = cfg(&[0.5, 0.4], &[3.0, 3.0, 3.0]);
        let v = max_sum_lp(&build_polytope(&ch, &split(&[0.0, 0.0, 0.0])).unwrap()).value;
        assert!((v - 2.5192).abs() < 1e-3);
        assert!((v - max_sum_rate(&ch).sum_rate).abs() < 1e-9);
    }

    #[test]
    fn dimension_mismatch() {
        let err = build_polytope(&cfg(&[0.5], &[3.0, 3.0]), &split(&[0.0])).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 1 });
    }

    #[test]
    fn unbounded_polytope_rejected() {
        let err = RatePolytope::new(2, vec![RateConstraint { support: vec![0], rhs: 1.0 }]);
        assert!(err.is_err());
        let err = RatePolytope::new(1, vec![RateConstraint { support: vec![0], rhs: -1.0 }]);
        assert!(err.is_err());
    }

    #[test]
    fn grid_examples() {
        let report = grid_oracle(&cfg(&[0.5], &[3.0, 3.0]), 0.1).unwrap();
        assert!((report.best_sum - 1.720287).abs() < 1e-6);
        assert!((report.closed_form - 1.720287).abs() < 1e-6);
        assert!(report.max_violation <= 1e-6);
        assert_eq!(report.best_split.gamma(), &[0.0, 0.0]);
        assert_eq!(report.grid_points, 11);

        let report = grid_oracle(&cfg(&[1.5, 0.3], &[3.0, 3.0, 3.0]), 0.1).unwrap();
        assert!((report.best_sum - 2.5879).abs() < 1e-3);
        assert_eq!(report.best_split.gamma(), &[1.0, 0.0, 0.0]);
        assert!(report.max_violation <= 1e-6);

        for step in [1.0, 0.5, 0.25] {
            let report = grid_oracle(&cfg(&[0.0], &[3.0, 3.0]), step).unwrap();
            assert!((report.best_sum - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_step_and_cap_errors() {
        let ch = cfg(&[0.5, 0.5, 0.5], &[3.0, 3.0, 3.0, 3.0]);
        assert_eq!(GridOracle::new(0.3).unwrap_err(), Error::GridStep(0.3));
        assert!(GridOracle::new(0.0).is_err());
        assert!(GridOracle::new(1.5).is_err());
        let err = GridOracle::new(0.1).unwrap().with_max_points(100).run(&ch).unwrap_err();
        assert_eq!(err, Error::GridTooLarge { points: 1331, cap: 100 });
    }

    #[test]
    fn grid_order_is_lexicographic() {
        let points = GridOracle::new(0.5).unwrap().evaluate(&cfg(&[0.5, 0.5], &[3.0, 3.0, 3.0])).unwrap();
        let splits: Vec<_> = points.iter().map(|p| p.split.gamma().to_vec()).collect();
        assert_eq!(splits[0], vec![0.0, 0.0, 0.0]);
        assert_eq!(splits[1], vec![0.0, 0.5, 0.0]);
        assert_eq!(splits[3], vec![0.5, 0.0, 0.0]);
        assert_eq!(splits[8], vec![1.0, 1.0, 0.0]);
    }

    #[test]
    fn last_user_split_is_immaterial() {
        for (a, p) in [(vec![0.5, 0.4], vec![3.0, 3.0, 3.0]), (vec![1.5, 1.2], vec![2.0, 5.0, 0.7])] {
            let ch = cfg(&a, &p);
            for g1 in [0.0, 0.3, 1.0] {
                for g2 in [0.0, 0.6, 1.0] {
                    let base = max_sum_lp(&build_polytope(&ch, &split(&[g1, g2, 0.0])).unwrap()).value;
                    for g3 in [0.25, 0.5, 1.0] {
                        let v = max_sum_lp(&build_polytope(&ch, &split(&[g1, g2, g3])).unwrap()).value;
                        assert!((v - base).abs() < 1e-9, "γ₃ = {g3}: {v} vs {base}");
                    }
                }
            }
        }
    }

    #[test]
    fn interior_split_can_beat_closed_form() {
        // outside the solved 3-user regimes the recursion is not the maximum
        // over every split of the joint-decoding region
        let ch = cfg(&[1.81982441, 0.80147502], &[0.922130308, 14.4313433, 8.12684052]);
        let closed = max_sum_rate(&ch);
        assert!((closed.sum_rate - 2.572052).abs() < 1e-6);
        let interior = max_sum_lp(&build_polytope(&ch, &split(&[1.0, 0.85, 0.0])).unwrap()).value;
        assert!((interior - 2.774424).abs() < 1e-6);
        let report = grid_oracle(&ch, 0.05).unwrap();
        assert!(report.max_violation > 0.2);
    }

    #[test]
    fn exact_regimes_bound_every_split() {
        for (a, p) in [
            (vec![0.5, 0.4], vec![3.0, 3.0, 3.0]),
            (vec![1.5, 1.5], vec![3.0, 3.0, 3.0]),
            (vec![0.5, 1.6], vec![3.0, 3.0, 3.0]),
            (vec![1.2, 1.9], vec![1.0, 5.0, 3.0]),
            (vec![0.2, 0.1], vec![10.0, 2.0, 7.0]),
        ] {
            let ch = cfg(&a, &p);
            assert!(crate::regimes::classify(&ch).unwrap().capacity_status.is_exact());
            let report = grid_oracle(&ch, 0.05).unwrap();
            assert!(report.max_violation <= 1e-9, "{a:?} {p:?}: {}", report.max_violation);
        }
    }

    fn channel() -> impl Strategy<Value = ChannelConfig> {
        (2usize..5)
            .prop_flat_map(|k| {
                (
                    proptest::collection::vec(0.0f64..1.0, k - 1),
                    proptest::collection::vec(0.1f64..30.0, k),
                )
            })
            .prop_map(|(frac, p)| {
                let a = frac.iter().enumerate().map(|(i, f)| f * (1.0 + p[i + 1]).sqrt()).collect();
                ChannelConfig::new(a, p).unwrap()
            })
    }

    fn split_for(k: usize) -> impl Strategy<Value = PowerSplit> {
        proptest::collection::vec(0.0f64..=1.0, k).prop_map(|g| PowerSplit::new(g).unwrap())
    }

    proptest! {
        #[test]
        fn lp_between_zero_and_ceiling((ch, s) in channel().prop_flat_map(|ch| { let k = ch.users(); (Just(ch), split_for(k)) })) {
            let v = max_sum_lp(&build_polytope(&ch, &s).unwrap()).value;
            let ceiling: f64 = ch.powers().iter().map(|&p| c(p)).sum();
            prop_assert!(v >= 0.0 && v <= ceiling + 1e-12);
            if ch.users() == 2 {
                prop_assert!(v <= max_sum_rate(&ch).sum_rate + 1e-6);
            }
        }

        #[test]
        fn closed_form_is_best_binary_split(ch in channel()) {
            let report = grid_oracle(&ch, 1.0).unwrap();
            prop_assert!(report.max_violation.abs() <= 1e-9, "{:?}", report);
        }

        #[test]
        fn optimal_split_attains_closed_form(ch in channel()) {
            let result = max_sum_rate(&ch);
            let v = max_sum_lp(&build_polytope(&ch, &result.split).unwrap()).value;
            prop_assert!((v - result.sum_rate).abs() <= 1e-9, "{} vs {}", v, result.sum_rate);
        }

        #[test]
        fn relaxing_never_decreases(
            (ch, s) in channel().prop_flat_map(|ch| { let k = ch.users(); (Just(ch), split_for(k)) }),
            pick in 0usize..64,
            delta in 0.0f64..1.0,
        ) {
            let poly = build_polytope(&ch, &s).unwrap();
            let index = pick % poly.constraints().len();
            let before = max_sum_lp(&poly).value;
            let after = max_sum_lp(&poly.relaxed(index, delta)).value;
            prop_assert!(after >= before - 1e-12);
        }

        #[test]
        fn finer_grid_never_worse(ch in channel().prop_filter("small", |c| c.users() <= 3)) {
            let coarse = grid_oracle(&ch, 0.5).unwrap().best_sum;
            let fine = grid_oracle(&ch, 0.25).unwrap().best_sum;
            prop_assert!(fine >= coarse - 1e-12);
        }
    }
}
