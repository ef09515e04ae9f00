//! Seeded randomized invariant suites, shared by the test-suite and the
//! `fuzz` CLI subcommand.
//!
//! Every suite draws its cases from a ChaCha stream keyed by an explicit
//! seed, so a reported failure is reproducible from the suite name, seed
//! and case count alone.

use crate::fspace::{
    fnorm, lambda_power_sum, maximal_function, rearranged_atoms, FNormSpec, GridFunction,
    GridSpace, StepTable,
};
use crate::norms::{lorentz_norm_exact, marcinkiewicz_norm_exact};
use crate::weight::Weight;
use crate::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Outcome of one suite: how many cases ran and the first few failures.
#[derive(Clone, Debug)]
pub struct FuzzReport {
    pub suite: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn push(&mut self, msg: String) {
        if self.failures.len() < 8 {
            self.failures.push(msg);
        }
    }
}

const VARIANTS: usize = 6;

/// Whether the idx-th menu entry needs a block partition.
fn needs_blocks(idx: usize) -> bool {
    matches!(idx % VARIANTS, 1 | 2)
}

/// A deterministic rotation through the norm menu. Grids for the block
/// variants get an even split into two blocks.
fn spec_for(idx: usize, cells: usize) -> FNormSpec {
    match idx % VARIANTS {
        0 => FNormSpec::BoundedIntegral,
        1 => FNormSpec::SigmaWeighted,
        2 => FNormSpec::DirectSum {
            components: vec![FNormSpec::BoundedIntegral, FNormSpec::BoundedIntegral],
        },
        3 => FNormSpec::LambdaPhi {
            phi_prime: StepTable::sqrt_phi_prime(4.0, 24).expect("static table"),
        },
        4 => FNormSpec::Gamma {
            p: 1.0 + (idx % 3) as f64 / 2.0,
            // Horizon covers the largest grid the generator can produce.
            weight: StepTable::constant(9.5, 24, 1.0).expect("static table"),
        },
        _ => FNormSpec::W1Discrete {
            weights: (1..=cells).map(|k| 1.0 / k as f64).collect(),
        },
    }
}

fn random_grid(rng: &mut ChaCha8Rng, blocks: bool) -> GridSpace {
    let cells = if blocks {
        2 * rng.gen_range(1..=3usize)
    } else {
        rng.gen_range(1..=6usize)
    };
    let measures: Vec<f64> = (0..cells).map(|_| rng.gen_range(0.1..1.5)).collect();
    let block_split = blocks.then(|| {
        let half = cells / 2;
        vec![(0..half).collect::<Vec<_>>(), (half..cells).collect()]
    });
    GridSpace::new(measures, block_split).expect("generated grid is valid")
}

fn random_function(rng: &mut ChaCha8Rng, cells: usize) -> GridFunction {
    GridFunction::new((0..cells).map(|_| rng.gen_range(-3.0..3.0)).collect())
}

/// For Γ the stored value is the norm's p-th power; the triangle inequality
/// applies to the root.
fn comparable(spec: &FNormSpec, value: f64) -> f64 {
    match spec {
        FNormSpec::Gamma { p, .. } => value.powf(1.0 / p),
        _ => value,
    }
}

/// Norm axioms: positivity, definiteness, symmetry, triangle.
pub fn fuzz_fnorm_axioms(seed: u64, cases: usize) -> Result<FuzzReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = FuzzReport {
        suite: "fnorm-axioms",
        cases,
        failures: Vec::new(),
    };
    for case in 0..cases {
        let grid = random_grid(&mut rng, needs_blocks(case));
        let spec = spec_for(case, grid.cells());
        let f = random_function(&mut rng, grid.cells());
        let g = random_function(&mut rng, grid.cells());
        let zero = GridFunction::zero(grid.cells());
        let nf = fnorm(&f, &grid, &spec)?;
        let ng = fnorm(&g, &grid, &spec)?;
        let nneg = fnorm(
            &GridFunction::new(f.values.iter().map(|v| -v).collect()),
            &grid,
            &spec,
        )?;
        let nsum = fnorm(
            &GridFunction::new(
                f.values
                    .iter()
                    .zip(&g.values)
                    .map(|(a, b)| a + b)
                    .collect(),
            ),
            &grid,
            &spec,
        )?;
        let nzero = fnorm(&zero, &grid, &spec)?;
        if nzero != 0.0 {
            report.push(format!("case {case}: ‖0‖ = {nzero}"));
        }
        if f.values.iter().any(|v| v.abs() > 1e-9) && nf <= 0.0 {
            report.push(format!("case {case}: nonzero f with ‖f‖ = {nf}"));
        }
        if (nf - nneg).abs() > 1e-12 * (1.0 + nf.abs()) {
            report.push(format!("case {case}: ‖f‖ = {nf} but ‖−f‖ = {nneg}"));
        }
        let (tf, tg, ts) = (
            comparable(&spec, nf),
            comparable(&spec, ng),
            comparable(&spec, nsum),
        );
        if ts > tf + tg + 1e-9 * (1.0 + tf + tg) {
            report.push(format!("case {case}: triangle {ts} > {tf} + {tg}"));
        }
    }
    Ok(report)
}

/// Lattice monotonicity: `|f| ≤ |g|` cellwise forces `‖f‖ ≤ ‖g‖`.
pub fn fuzz_lattice(seed: u64, cases: usize) -> Result<FuzzReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6c61_7474);
    let mut report = FuzzReport {
        suite: "lattice-monotonicity",
        cases,
        failures: Vec::new(),
    };
    for case in 0..cases {
        let grid = random_grid(&mut rng, needs_blocks(case));
        let spec = spec_for(case, grid.cells());
        let g = random_function(&mut rng, grid.cells());
        let f = GridFunction::new(
            g.values
                .iter()
                .map(|v| v * rng.gen_range(0.0..1.0))
                .collect(),
        );
        let nf = fnorm(&f, &grid, &spec)?;
        let ng = fnorm(&g, &grid, &spec)?;
        if nf > ng + 1e-12 * (1.0 + ng) {
            report.push(format!("case {case}: |f| ≤ |g| but ‖f‖ = {nf} > ‖g‖ = {ng}"));
        }
    }
    Ok(report)
}

/// Rearrangement invariance of the rearrangement-built norms on
/// equal-measure grids, under random permutations.
pub fn fuzz_rearrangement(seed: u64, cases: usize) -> Result<FuzzReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7265_6172);
    let mut report = FuzzReport {
        suite: "rearrangement-random",
        cases,
        failures: Vec::new(),
    };
    for case in 0..cases {
        let cells = rng.gen_range(2..=8usize);
        let grid = GridSpace::uniform(cells, 2.0)?;
        let f = random_function(&mut rng, cells);
        let mut perm: Vec<usize> = (0..cells).collect();
        for i in (1..cells).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        let shuffled = GridFunction::new(perm.iter().map(|&i| f.values[i]).collect());
        for spec in rearrangement_invariant_specs(case, cells) {
            let a = fnorm(&f, &grid, &spec)?;
            let b = fnorm(&shuffled, &grid, &spec)?;
            if (a - b).abs() > 1e-11 * (1.0 + a.abs()) {
                report.push(format!("case {case}: {a} vs {b} after permutation"));
            }
        }
    }
    Ok(report)
}

fn rearrangement_invariant_specs(case: usize, cells: usize) -> Vec<FNormSpec> {
    vec![
        FNormSpec::BoundedIntegral, // invariant because the measures are equal
        FNormSpec::LambdaPhi {
            phi_prime: StepTable::sqrt_phi_prime(4.0, 24).expect("static table"),
        },
        FNormSpec::Gamma {
            p: 1.0 + (case % 3) as f64 / 2.0,
            weight: StepTable::constant(4.0, 16, 1.0).expect("static table"),
        },
        FNormSpec::W1Discrete {
            weights: (1..=cells).map(|k| 1.0 / k as f64).collect(),
        },
    ]
}

/// Exhaustive rearrangement invariance over *all* permutations of supports
/// up to `max_support` cells.
pub fn rearrangement_exhaustive(max_support: usize) -> Result<FuzzReport> {
    let mut report = FuzzReport {
        suite: "rearrangement-exhaustive",
        cases: 0,
        failures: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x7065_726d);
    for cells in 2..=max_support {
        let grid = GridSpace::uniform(cells, 1.0)?;
        let f = random_function(&mut rng, cells);
        let specs = rearrangement_invariant_specs(cells, cells);
        let references: Vec<f64> = specs
            .iter()
            .map(|s| fnorm(&f, &grid, s))
            .collect::<Result<_>>()?;
        let mut perm: Vec<usize> = (0..cells).collect();
        permute_all(&mut perm, 0, &mut |p| {
            report.cases += 1;
            let shuffled = GridFunction::new(p.iter().map(|&i| f.values[i]).collect());
            for (spec, reference) in specs.iter().zip(&references) {
                let v = fnorm(&shuffled, &grid, spec)?;
                if (v - reference).abs() > 1e-11 * (1.0 + reference.abs()) {
                    report.push(format!("support {cells}, perm {p:?}: {v} vs {reference}"));
                }
            }
            Ok(())
        })?;
    }
    Ok(report)
}

fn permute_all<F: FnMut(&[usize]) -> Result<()>>(
    items: &mut [usize],
    k: usize,
    visit: &mut F,
) -> Result<()> {
    if k == items.len() {
        return visit(items);
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute_all(items, k + 1, visit)?;
        items.swap(k, i);
    }
    Ok(())
}

/// Exact duality bound in the sequence spaces: `|Σ x_j y_j|` never exceeds
/// the weighted-rearrangement norm of `x` times the maximal norm of `y`.
pub fn fuzz_duality(seed: u64, cases: usize) -> Result<FuzzReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6475_616c);
    let mut report = FuzzReport {
        suite: "duality-bound",
        cases,
        failures: Vec::new(),
    };
    let w = Weight::harmonic();
    for case in 0..cases {
        let len = rng.gen_range(1..=6usize);
        let ints = |rng: &mut ChaCha8Rng| -> Vec<BigRational> {
            (0..len)
                .map(|_| {
                    BigRational::new(
                        BigInt::from(rng.gen_range(-40i64..=40)),
                        BigInt::from(rng.gen_range(1i64..=12)),
                    )
                })
                .collect()
        };
        let x = ints(&mut rng);
        let y = ints(&mut rng);
        let pairing: BigRational = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let bound = lorentz_norm_exact(&x, &w)? * marcinkiewicz_norm_exact(&y, &w)?;
        let lhs = if pairing < BigRational::zero() {
            -pairing
        } else {
            pairing
        };
        if lhs > bound {
            report.push(format!("case {case}: pairing {lhs} exceeds bound {bound}"));
        }
    }
    Ok(report)
}

/// The maximal function dominates the rearrangement and is nonincreasing;
/// the Γ power sum dominates the Λ power sum on the same quadrature.
pub fn fuzz_maximal(seed: u64, cases: usize) -> Result<FuzzReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d61_7833);
    let mut report = FuzzReport {
        suite: "maximal-dominates",
        cases,
        failures: Vec::new(),
    };
    for case in 0..cases {
        let grid = random_grid(&mut rng, false);
        let f = random_function(&mut rng, grid.cells());
        let m = maximal_function(&f, &grid)?;
        for (ss, s) in m.double_star.iter().zip(&m.star) {
            // Equality holds on leading constant runs, where the running
            // average can land an ulp under the exact value.
            if *ss < s - 1e-14 * (1.0 + s.abs()) {
                report.push(format!("case {case}: x** = {ss} below x* = {s}"));
            }
        }
        for w in m.double_star.windows(2) {
            if w[1] > w[0] + 1e-12 * (1.0 + w[0].abs()) {
                report.push(format!("case {case}: x** rises {} -> {}", w[0], w[1]));
            }
        }
        let p = 1.0 + (case % 3) as f64 / 2.0;
        let table = StepTable::constant(
            grid.total_measure() * 1.5,
            16,
            1.0,
        )?;
        let gamma = fnorm(
            &f,
            &grid,
            &FNormSpec::Gamma {
                p,
                weight: table.clone(),
            },
        )?;
        let lambda = lambda_power_sum(&f, &grid, p, &table)?;
        if gamma + 1e-11 * (1.0 + lambda.abs()) < lambda {
            report.push(format!("case {case}: Γ sum {gamma} below Λ sum {lambda}"));
        }
        // The atoms really are a decreasing rearrangement.
        let atoms = rearranged_atoms(&f, &grid)?;
        if atoms.windows(2).any(|w| w[1].0 > w[0].0) {
            report.push(format!("case {case}: atoms out of order"));
        }
    }
    Ok(report)
}

/// Runs every suite with `cases` cases each (the exhaustive permutation
/// suite sizes itself).
pub fn run_all(seed: u64, cases: usize) -> Result<Vec<FuzzReport>> {
    Ok(vec![
        fuzz_fnorm_axioms(seed, cases)?,
        fuzz_lattice(seed, cases)?,
        fuzz_rearrangement(seed, cases)?,
        rearrangement_exhaustive(8)?,
        fuzz_duality(seed, cases)?,
        fuzz_maximal(seed, cases)?,
    ])
}
