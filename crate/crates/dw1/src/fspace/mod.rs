//! Discretized function-space laboratory.
//!
//! Everything here lives on a finite grid: a list of disjoint cells with
//! positive measures, optionally partitioned into blocks. Functions are one
//! value per cell. On top of that the module provides
//!
//! * several F-norms (damped integrals, their block-weighted and
//!   direct-sum combinations, rearrangement norms built from `x*` and the
//!   maximal function `x**`, and a discrete rank-weighted norm),
//! * metric projections onto structured classes (monotone, convex, finite,
//!   quantized) with a brute-force quantized oracle, fast paths, and a
//!   descent-based minimizing-sequence probe,
//! * experiment drivers: additive-splitting (property (S)) residuals on
//!   shrinking-bump families, Hausdorff distances, and continuity reports
//!   for the metric projection.
//!
//! The measure-theoretic statements these computations shadow are
//! asymptotic; the lab's job is to make them falsifiable at grid scale, not
//! to decide them in general.

mod experiment;
mod project;

pub use experiment::{
    continuity_experiment, hausdorff_distance, one_sided_deviation, property_s_residuals,
    shrinking_bump_family, two_point_preset, BallCheck, ContinuityReport, ContinuityRow,
    ContinuityVerdict, PropertySInstance, TwoPointPreset,
};
pub use project::{
    metric_projection_set, minimizing_sequence_probe, pava_isotonic_l1, ConstraintClass,
    ProbeReport, ProjectionOptions, ProjectionSet,
};

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

// --- grid ------------------------------------------------------------------------

/// A finite measure space: disjoint cells with positive measures, optionally
/// partitioned into blocks for block-structured norms and classes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridSpace {
    /// Cell measures `μ_i > 0`, in cell order.
    pub measures: Vec<f64>,
    /// Disjoint, exhaustive partition of cell indices into blocks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<Vec<usize>>>,
}

impl GridSpace {
    pub fn new(measures: Vec<f64>, blocks: Option<Vec<Vec<usize>>>) -> Result<Self> {
        let g = GridSpace { measures, blocks };
        g.validate()?;
        Ok(g)
    }

    /// `cells` equal cells of total measure `total`.
    pub fn uniform(cells: usize, total: f64) -> Result<Self> {
        if cells == 0 || !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidGrid("need cells ≥ 1 and total measure > 0".into()));
        }
        GridSpace::new(vec![total / cells as f64; cells], None)
    }

    pub fn validate(&self) -> Result<()> {
        if self.measures.is_empty() {
            return Err(Error::InvalidGrid("a grid needs at least one cell".into()));
        }
        if self.measures.iter().any(|m| !(*m > 0.0) || !m.is_finite()) {
            return Err(Error::InvalidGrid("cell measures must be positive and finite".into()));
        }
        if let Some(blocks) = &self.blocks {
            let mut seen = vec![false; self.measures.len()];
            for b in blocks {
                if b.is_empty() {
                    return Err(Error::InvalidGrid("empty block".into()));
                }
                for &i in b {
                    if i >= seen.len() || seen[i] {
                        return Err(Error::InvalidGrid(
                            "blocks must be a disjoint partition of the cells".into(),
                        ));
                    }
                    seen[i] = true;
                }
            }
            if !seen.iter().all(|s| *s) {
                return Err(Error::InvalidGrid("blocks must cover every cell".into()));
            }
        }
        Ok(())
    }

    pub fn cells(&self) -> usize {
        self.measures.len()
    }

    pub fn total_measure(&self) -> f64 {
        self.measures.iter().sum()
    }

    /// Midpoint "time" of each cell along the cumulative-measure axis; the
    /// abscissas used by the convexity classes.
    pub fn cell_positions(&self) -> Vec<f64> {
        let mut t = Vec::with_capacity(self.measures.len());
        let mut s = 0.0;
        for m in &self.measures {
            t.push(s + m / 2.0);
            s += m;
        }
        t
    }

    fn require_blocks(&self) -> Result<&[Vec<usize>]> {
        self.blocks
            .as_deref()
            .ok_or_else(|| Error::InvalidGrid("this norm needs a block partition".into()))
    }

    /// The grid restricted to one block (no nested block structure).
    pub fn sub_grid(&self, cells: &[usize]) -> Result<GridSpace> {
        GridSpace::new(cells.iter().map(|&i| self.measures[i]).collect(), None)
    }
}

/// One real value per cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(values: Vec<f64>) -> Self {
        GridFunction { values }
    }

    pub fn constant(cells: usize, v: f64) -> Self {
        GridFunction { values: vec![v; cells] }
    }

    pub fn zero(cells: usize) -> Self {
        GridFunction::constant(cells, 0.0)
    }

    pub fn check_on(&self, grid: &GridSpace) -> Result<()> {
        if self.values.len() != grid.cells() {
            return Err(Error::InvalidGrid(format!(
                "function has {} values on a {}-cell grid",
                self.values.len(),
                grid.cells()
            )));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("function values must be finite".into()));
        }
        Ok(())
    }

    pub fn sub(&self, other: &GridFunction) -> GridFunction {
        GridFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    fn restricted(&self, cells: &[usize]) -> GridFunction {
        GridFunction {
            values: cells.iter().map(|&i| self.values[i]).collect(),
        }
    }
}

// --- rearrangement and the maximal function ---------------------------------------

/// `|f|` atoms sorted by value, descending: the decreasing rearrangement as
/// a list of (value, measure) steps.
pub fn rearranged_atoms(f: &GridFunction, grid: &GridSpace) -> Result<Vec<(f64, f64)>> {
    f.check_on(grid)?;
    let mut atoms: Vec<(f64, f64)> = f
        .values
        .iter()
        .zip(&grid.measures)
        .map(|(v, m)| (v.abs(), *m))
        .collect();
    atoms.sort_by(|a, b| b.0.total_cmp(&a.0));
    Ok(atoms)
}

/// `x*` and `x**` sampled at the rearrangement's own step boundaries.
#[derive(Clone, Debug)]
pub struct MaximalProfile {
    /// Right endpoints of the rearranged steps along the measure axis.
    pub times: Vec<f64>,
    /// `x*` value on each step.
    pub star: Vec<f64>,
    /// `x**(t) = (1/t)∫₀ᵗ x*` at each right endpoint.
    pub double_star: Vec<f64>,
}

/// Running averages of the decreasing rearrangement at step right-endpoints.
/// `x** ≥ x*` pointwise and `x**` is nonincreasing.
pub fn maximal_function(f: &GridFunction, grid: &GridSpace) -> Result<MaximalProfile> {
    let atoms = rearranged_atoms(f, grid)?;
    let mut times = Vec::with_capacity(atoms.len());
    let mut star = Vec::with_capacity(atoms.len());
    let mut double_star = Vec::with_capacity(atoms.len());
    let mut t = 0.0;
    let mut integral = 0.0;
    for (v, m) in atoms {
        t += m;
        integral += v * m;
        times.push(t);
        star.push(v);
        double_star.push(integral / t);
    }
    Ok(MaximalProfile {
        times,
        star,
        double_star,
    })
}

/// `∫₀ᵗ x*` for any `t ≥ 0`: piecewise linear in `t`, exact per step.
fn star_cumulative(atoms: &[(f64, f64)], t: f64) -> f64 {
    let mut acc = 0.0;
    let mut s = 0.0;
    for &(v, m) in atoms {
        if t <= s + m {
            return acc + v * (t - s);
        }
        acc += v * m;
        s += m;
    }
    acc
}

// --- F-norm specifications ---------------------------------------------------------

/// A nonnegative step function on `[0, horizon)`: `heights[k]` on the k-th
/// of `heights.len()` equal subintervals, zero past the horizon. Used to
/// sample `φ′` (concave-integrand derivative) and `Γ`-weights.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepTable {
    pub horizon: f64,
    pub heights: Vec<f64>,
}

impl StepTable {
    pub fn new(horizon: f64, heights: Vec<f64>) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() || heights.is_empty() {
            return Err(Error::InvalidNormSpec(
                "step table needs a positive horizon and at least one height".into(),
            ));
        }
        if heights.iter().any(|h| !(*h >= 0.0) || !h.is_finite()) {
            return Err(Error::InvalidNormSpec("step heights must be ≥ 0 and finite".into()));
        }
        Ok(StepTable { horizon, heights })
    }

    /// Step heights that integrate `φ(t) = √t` exactly over each
    /// subinterval; nonincreasing since `φ` is concave.
    pub fn sqrt_phi_prime(horizon: f64, steps: usize) -> Result<Self> {
        let dt = horizon / steps as f64;
        let heights = (0..steps)
            .map(|k| {
                let a = k as f64 * dt;
                let b = a + dt;
                (b.sqrt() - a.sqrt()) / dt
            })
            .collect();
        StepTable::new(horizon, heights)
    }

    pub fn constant(horizon: f64, steps: usize, height: f64) -> Result<Self> {
        StepTable::new(horizon, vec![height; steps])
    }

    fn dt(&self) -> f64 {
        self.horizon / self.heights.len() as f64
    }

    fn nonincreasing(&self) -> bool {
        self.heights.windows(2).all(|p| p[0] >= p[1])
    }

    /// `∫_a^b` of the step function (zero outside `[0, horizon)`), exact.
    pub fn mass(&self, a: f64, b: f64) -> f64 {
        let dt = self.dt();
        let a = a.max(0.0).min(self.horizon);
        let b = b.max(0.0).min(self.horizon);
        if b <= a {
            return 0.0;
        }
        let ka = (a / dt) as usize;
        let kb = ((b / dt).ceil() as usize).min(self.heights.len());
        let mut acc = 0.0;
        for k in ka..kb {
            let lo = (k as f64 * dt).max(a);
            let hi = ((k + 1) as f64 * dt).min(b);
            if hi > lo {
                acc += self.heights[k] * (hi - lo);
            }
        }
        acc
    }
}

/// The F-norm (and norm-power) menu.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum FNormSpec {
    /// `∫ |f|/(1+|f|) dμ` over the whole grid.
    BoundedIntegral,
    /// `Σ_n 2^{−n} ∫_{T_1∪…∪T_n} |f|/(1+|f|) dμ` over nested prefix unions
    /// of the block partition; equivalently a per-cell factor `2^{−k}` for a
    /// cell in (0-based) block `k`.
    SigmaWeighted,
    /// `Σ_n 2^{−n} ‖f|_{T_n}‖_n / (1 + ‖f|_{T_n}‖_n)` with one component
    /// spec per block. Components see their block as a flat subgrid.
    DirectSum { components: Vec<FNormSpec> },
    /// `∫ x*(t) φ′(t) dt`, exact against the sampled nonincreasing `φ′`.
    LambdaPhi { phi_prime: StepTable },
    /// `Σ_j x**(τ_j)^p · w`-mass over the weight table's subintervals
    /// (right-endpoint quadrature): the p-th power of the maximal-function
    /// norm. The table's horizon must cover the grid.
    Gamma { p: f64, weight: StepTable },
    /// `Σ_i f*(i)·weights[i]` over ranked cells (measure-blind): the
    /// discrete weighted-rearrangement norm. Weights must be positive and
    /// nonincreasing, one per cell.
    W1Discrete { weights: Vec<f64> },
}

impl FNormSpec {
    pub fn validate(&self, grid: &GridSpace) -> Result<()> {
        match self {
            FNormSpec::BoundedIntegral => Ok(()),
            FNormSpec::SigmaWeighted => grid.require_blocks().map(|_| ()),
            FNormSpec::DirectSum { components } => {
                let blocks = grid.require_blocks()?;
                if components.len() != blocks.len() {
                    return Err(Error::InvalidNormSpec(format!(
                        "{} component norms for {} blocks",
                        components.len(),
                        blocks.len()
                    )));
                }
                for (spec, block) in components.iter().zip(blocks) {
                    spec.validate(&grid.sub_grid(block)?)?;
                }
                Ok(())
            }
            FNormSpec::LambdaPhi { phi_prime } => {
                if !phi_prime.nonincreasing() {
                    return Err(Error::InvalidNormSpec(
                        "φ′ samples must be nonincreasing (φ concave)".into(),
                    ));
                }
                Ok(())
            }
            FNormSpec::Gamma { p, weight } => {
                if !(*p > 0.0) || !p.is_finite() {
                    return Err(Error::InvalidNormSpec("Γ exponent must be positive".into()));
                }
                if weight.horizon + 1e-12 < grid.total_measure() {
                    return Err(Error::InvalidNormSpec(
                        "Γ weight table horizon is shorter than the grid".into(),
                    ));
                }
                // Class D_p on a finite grid reduces to finiteness of the
                // sampled prefix and tail integrals, which `StepTable::new`
                // already guarantees.
                Ok(())
            }
            FNormSpec::W1Discrete { weights } => {
                if weights.len() < grid.cells() {
                    return Err(Error::InvalidNormSpec(
                        "need one rank weight per cell".into(),
                    ));
                }
                if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite())
                    || weights.windows(2).any(|p| p[0] < p[1])
                {
                    return Err(Error::InvalidNormSpec(
                        "rank weights must be positive and nonincreasing".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

fn damp(t: f64) -> f64 {
    t / (1.0 + t)
}

/// Evaluates the F-norm (for `Gamma`, the norm's p-th power) of `f`.
pub fn fnorm(f: &GridFunction, grid: &GridSpace, spec: &FNormSpec) -> Result<f64> {
    f.check_on(grid)?;
    spec.validate(grid)?;
    match spec {
        FNormSpec::BoundedIntegral => Ok(f
            .values
            .iter()
            .zip(&grid.measures)
            .map(|(v, m)| m * damp(v.abs()))
            .sum()),
        FNormSpec::SigmaWeighted => {
            let blocks = grid.require_blocks()?;
            let mut acc = 0.0;
            for (k, block) in blocks.iter().enumerate() {
                let factor = 0.5f64.powi(k as i32);
                for &i in block {
                    acc += factor * grid.measures[i] * damp(f.values[i].abs());
                }
            }
            Ok(acc)
        }
        FNormSpec::DirectSum { components } => {
            let blocks = grid.require_blocks()?;
            let mut acc = 0.0;
            for (k, (spec_k, block)) in components.iter().zip(blocks).enumerate() {
                let sub = grid.sub_grid(block)?;
                let t = fnorm(&f.restricted(block), &sub, spec_k)?;
                acc += 0.5f64.powi(k as i32 + 1) * damp(t);
            }
            Ok(acc)
        }
        FNormSpec::LambdaPhi { phi_prime } => {
            let atoms = rearranged_atoms(f, grid)?;
            let mut acc = 0.0;
            let mut s = 0.0;
            for (v, m) in atoms {
                if v > 0.0 {
                    acc += v * phi_prime.mass(s, s + m);
                }
                s += m;
            }
            Ok(acc)
        }
        FNormSpec::Gamma { p, weight } => {
            let atoms = rearranged_atoms(f, grid)?;
            let dt = weight.dt();
            let mut acc = 0.0;
            for (k, h) in weight.heights.iter().enumerate() {
                if *h == 0.0 {
                    continue;
                }
                let tau = (k as f64 + 1.0) * dt;
                let xss = star_cumulative(&atoms, tau) / tau;
                if xss > 0.0 {
                    acc += xss.powf(*p) * h * dt;
                }
            }
            Ok(acc)
        }
        FNormSpec::W1Discrete { weights } => {
            let mut sorted: Vec<f64> = f.values.iter().map(|v| v.abs()).collect();
            sorted.sort_by(|a, b| b.total_cmp(a));
            Ok(sorted.iter().zip(weights).map(|(v, w)| v * w).sum())
        }
    }
}

/// `Σ_j x*(τ_j⁻)^p · w`-mass on the same quadrature as [`FNormSpec::Gamma`]:
/// the classical-Lorentz counterpart, used for the `x** ≥ x*` comparison.
pub fn lambda_power_sum(
    f: &GridFunction,
    grid: &GridSpace,
    p: f64,
    weight: &StepTable,
) -> Result<f64> {
    let atoms = rearranged_atoms(f, grid)?;
    let dt = weight.dt();
    let mut acc = 0.0;
    for (k, h) in weight.heights.iter().enumerate() {
        if *h == 0.0 {
            continue;
        }
        let tau = (k as f64 + 1.0) * dt;
        // Left limit of the step function x* at τ.
        let mut s = 0.0;
        let mut val = 0.0;
        for &(v, m) in &atoms {
            if tau <= s + m + 1e-300 {
                val = v;
                break;
            }
            s += m;
        }
        if val > 0.0 {
            acc += val.powf(p) * h * dt;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l1_spec(cells: usize) -> FNormSpec {
        FNormSpec::W1Discrete {
            weights: vec![1.0; cells],
        }
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpace::new(vec![], None).is_err());
        assert!(GridSpace::new(vec![1.0, -1.0], None).is_err());
        assert!(GridSpace::new(vec![1.0, 1.0], Some(vec![vec![0], vec![0, 1]])).is_err());
        assert!(GridSpace::new(vec![1.0, 1.0], Some(vec![vec![0]])).is_err());
        let g = GridSpace::new(vec![0.5, 0.5], Some(vec![vec![0], vec![1]])).unwrap();
        assert_eq!(g.cells(), 2);
        assert!((g.total_measure() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_function_has_zero_norm_in_every_variant() {
        let g = GridSpace::new(vec![0.25; 4], Some(vec![vec![0, 1], vec![2, 3]])).unwrap();
        let z = GridFunction::zero(4);
        let specs = [
            FNormSpec::BoundedIntegral,
            FNormSpec::SigmaWeighted,
            FNormSpec::DirectSum {
                components: vec![FNormSpec::BoundedIntegral, FNormSpec::BoundedIntegral],
            },
            FNormSpec::LambdaPhi {
                phi_prime: StepTable::sqrt_phi_prime(1.0, 8).unwrap(),
            },
            FNormSpec::Gamma {
                p: 2.0,
                weight: StepTable::constant(1.0, 8, 1.0).unwrap(),
            },
            l1_spec(4),
        ];
        for spec in &specs {
            assert_eq!(fnorm(&z, &g, spec).unwrap(), 0.0);
        }
    }

    #[test]
    fn bounded_integral_of_one_is_half() {
        let g = GridSpace::uniform(5, 1.0).unwrap();
        let f = GridFunction::constant(5, 1.0);
        let v = fnorm(&f, &g, &FNormSpec::BoundedIntegral).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sqrt_lambda_norm_of_indicator_is_one() {
        // φ(t) = √t sampled so the step integral telescopes: the norm of the
        // unit indicator is exactly φ(1) = 1.
        let g = GridSpace::uniform(16, 1.0).unwrap();
        let f = GridFunction::constant(16, 1.0);
        let spec = FNormSpec::LambdaPhi {
            phi_prime: StepTable::sqrt_phi_prime(1.0, 32).unwrap(),
        };
        let v = fnorm(&f, &g, &spec).unwrap();
        assert!((v - 1.0).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn maximal_function_of_two_level_function() {
        let g = GridSpace::uniform(2, 1.0).unwrap();
        let f = GridFunction::new(vec![2.0, 0.0]);
        let m = maximal_function(&f, &g).unwrap();
        assert_eq!(m.star, vec![2.0, 0.0]);
        assert_eq!(m.times, vec![0.5, 1.0]);
        assert_eq!(m.double_star, vec![2.0, 1.0]);
        // Constant functions are their own maximal function.
        let c = GridFunction::constant(2, 3.0);
        let mc = maximal_function(&c, &g).unwrap();
        assert_eq!(mc.double_star, vec![3.0, 3.0]);
    }

    #[test]
    fn maximal_dominates_rearrangement() {
        let g = GridSpace::new(vec![0.2, 0.3, 0.1, 0.4], None).unwrap();
        let f = GridFunction::new(vec![1.0, -3.0, 0.5, 2.0]);
        let m = maximal_function(&f, &g).unwrap();
        for (ss, s) in m.double_star.iter().zip(&m.star) {
            assert!(*ss >= s - 1e-14 * (1.0 + s.abs()));
        }
        for w in m.double_star.windows(2) {
            assert!(w[0] >= w[1] - 1e-15);
        }
        // Γ power sum dominates the Λ power sum on the same quadrature.
        let weight = StepTable::constant(1.0, 20, 0.7).unwrap();
        let gamma = fnorm(
            &f,
            &g,
            &FNormSpec::Gamma {
                p: 1.5,
                weight: weight.clone(),
            },
        )
        .unwrap();
        let lambda = lambda_power_sum(&f, &g, 1.5, &weight).unwrap();
        assert!(gamma >= lambda - 1e-12, "{gamma} vs {lambda}");
    }

    #[test]
    fn direct_sum_damps_blockwise() {
        let g = GridSpace::new(vec![1.0, 1.0], Some(vec![vec![0], vec![1]])).unwrap();
        let f = GridFunction::new(vec![1.0, 3.0]);
        let spec = FNormSpec::DirectSum {
            components: vec![FNormSpec::BoundedIntegral, FNormSpec::BoundedIntegral],
        };
        // Block norms: 1/2 and 3/4; damped: (1/2)·(1/3) + (1/4)·(3/7).
        let expect = 0.5 * (0.5 / 1.5) + 0.25 * (0.75 / 1.75);
        let v = fnorm(&f, &g, &spec).unwrap();
        assert!((v - expect).abs() < 1e-15);
    }

    #[test]
    fn sigma_weighted_uses_nested_prefixes() {
        let g = GridSpace::new(vec![1.0, 1.0], Some(vec![vec![0], vec![1]])).unwrap();
        let f = GridFunction::new(vec![1.0, 1.0]);
        // Cell 0 sits in every prefix union (factor 1), cell 1 from the
        // second on (factor 1/2); both damped values are 1/2.
        let v = fnorm(&f, &g, &FNormSpec::SigmaWeighted).unwrap();
        assert!((v - (0.5 + 0.25)).abs() < 1e-15);
    }

    #[test]
    fn spec_validation_rejects_bad_tables() {
        let g = GridSpace::uniform(3, 1.0).unwrap();
        // Increasing φ′ violates concavity of φ.
        let bad = FNormSpec::LambdaPhi {
            phi_prime: StepTable::new(1.0, vec![1.0, 2.0]).unwrap(),
        };
        assert!(bad.validate(&g).is_err());
        let short = FNormSpec::Gamma {
            p: 2.0,
            weight: StepTable::constant(0.5, 4, 1.0).unwrap(),
        };
        assert!(short.validate(&g).is_err());
        let few = FNormSpec::W1Discrete {
            weights: vec![1.0, 0.5],
        };
        assert!(few.validate(&g).is_err());
        let rising = FNormSpec::W1Discrete {
            weights: vec![0.5, 1.0, 1.0],
        };
        assert!(rising.validate(&g).is_err());
        assert!(FNormSpec::SigmaWeighted.validate(&g).is_err());
    }

    #[test]
    fn fnorm_axioms_spot_checks() {
        let g = GridSpace::new(vec![0.3, 0.7, 0.5], None).unwrap();
        let f = GridFunction::new(vec![1.2, -0.4, 2.0]);
        let h = GridFunction::new(vec![-0.3, 1.1, 0.6]);
        let neg = GridFunction::new(f.values.iter().map(|v| -v).collect());
        let sum = GridFunction::new(
            f.values
                .iter()
                .zip(&h.values)
                .map(|(a, b)| a + b)
                .collect(),
        );
        let specs = [
            FNormSpec::BoundedIntegral,
            FNormSpec::LambdaPhi {
                phi_prime: StepTable::sqrt_phi_prime(2.0, 16).unwrap(),
            },
            FNormSpec::W1Discrete {
                weights: vec![1.0, 0.5, 1.0 / 3.0],
            },
        ];
        for spec in &specs {
            let nf = fnorm(&f, &g, spec).unwrap();
            let nn = fnorm(&neg, &g, spec).unwrap();
            let nh = fnorm(&h, &g, spec).unwrap();
            let ns = fnorm(&sum, &g, spec).unwrap();
            assert!((nf - nn).abs() < 1e-15);
            assert!(ns <= nf + nh + 1e-12, "triangle: {ns} vs {nf} + {nh}");
            assert!(nf > 0.0);
        }
    }
}
