//! Horizontal lifts and loop holonomy for the flat connection on
//! M × 𝔤* whose horizontal curves integrate the would-be momentum.
//!
//! A lift over a chart path c(t) solves ⟨μ′(t), ξ⟩ = ω(c(t))(c′(t), ξ_M)
//! for every algebra vector ξ. The argument order in ω is a genuine sign
//! choice: with the opposite order every holonomy generator flips, and the
//! preset acceptance values (e.g. the T⁴ generator (0,0,1,√2) for the
//! first lattice loop) pin this one.
//!
//! Holonomy of a loop is μ(1) − μ(0); it does not depend on μ(0) because
//! the structure group is the Abelian additive dual. For the constant
//! models in this crate the per-loop value is also available exactly as
//! GᵀWᵀ·(winding), and the numeric integrator is cross-checked against it.

use crate::model::{Model, SymplecticModel};
use crate::numeric::{rk4_path, unwrap_delta};
use crate::subgroup::GeneratedSubgroup;
use crate::tolerances;

#[derive(Debug, Clone, thiserror::Error)]
pub enum HolonomyError {
    #[error("loop endpoints differ by {0:.3e} on the chart")]
    NotClosed(f64),
    #[error("winding in non-periodic chart coordinate {0}")]
    WindsNonPeriodic(usize),
    #[error("symplectic form is singular along the path at t = {t}: |det| = {det:.3e}")]
    SingularOmega { t: f64, det: f64 },
    #[error("a sampled loop needs at least two points")]
    TooFewSamples,
}

/// A piecewise-smooth loop on the model chart.
#[derive(Debug, Clone)]
pub enum LoopPath {
    /// Closed polyline through chart samples. Consecutive samples must be
    /// nearer than half a period in every angular coordinate, so segment
    /// displacements unwrap unambiguously.
    Sampled(Vec<Vec<f64>>),
    /// Closed-form loop: from `base`, wind `winding[i]` whole periods in
    /// each periodic chart direction along an asymmetric smooth ramp, plus
    /// a contractible wiggle of amplitude `wiggle` in every coordinate.
    Winding {
        base: Vec<f64>,
        winding: Vec<i64>,
        wiggle: f64,
    },
}

/// Ramp steepness for the closed-form winding parameterization. The ramp
/// s(t) = (e^{at} − 1)/(e^a − 1) is monotone with different derivatives at
/// the two endpoints, so the integrator's fourth-order error term cannot
/// telescope away and convergence stays measurable.
const RAMP_RATE: f64 = 3.0;

fn ramp(t: f64) -> f64 {
    ((RAMP_RATE * t).exp() - 1.0) / (RAMP_RATE.exp() - 1.0)
}

fn ramp_deriv(t: f64) -> f64 {
    RAMP_RATE * (RAMP_RATE * t).exp() / (RAMP_RATE.exp() - 1.0)
}

const TWO_PI: f64 = std::f64::consts::TAU;

fn wiggle_phase(i: usize) -> f64 {
    0.7 * (i as f64 + 1.0)
}

impl LoopPath {
    /// Fundamental lattice loop: one period along chart coordinate `coord`
    /// with a mild contractible wiggle.
    pub fn lattice(base: Vec<f64>, coord: usize) -> LoopPath {
        let mut winding = vec![0i64; base.len()];
        winding[coord] = 1;
        LoopPath::Winding {
            base,
            winding,
            wiggle: 0.05,
        }
    }

    /// Contractible loop (zero winding) of the given wiggle amplitude.
    pub fn contractible(base: Vec<f64>, wiggle: f64) -> LoopPath {
        let winding = vec![0i64; base.len()];
        LoopPath::Winding {
            base,
            winding,
            wiggle,
        }
    }

    pub fn winding_vector(&self) -> Option<&[i64]> {
        match self {
            LoopPath::Winding { winding, .. } => Some(winding),
            LoopPath::Sampled(_) => None,
        }
    }

    fn dim(&self) -> usize {
        match self {
            LoopPath::Sampled(pts) => pts.first().map_or(0, |p| p.len()),
            LoopPath::Winding { base, .. } => base.len(),
        }
    }

    /// Chart position at parameter t ∈ [0, 1], in covering coordinates.
    pub fn position(&self, t: f64, periodic: &[bool]) -> Vec<f64> {
        match self {
            LoopPath::Winding {
                base,
                winding,
                wiggle,
            } => base
                .iter()
                .enumerate()
                .map(|(i, &b)| {
                    let phase = wiggle_phase(i);
                    b + winding[i] as f64 * ramp(t)
                        + wiggle * ((TWO_PI * t + phase).sin() - phase.sin())
                })
                .collect(),
            LoopPath::Sampled(pts) => {
                let (k, local) = segment_of(t, pts.len() - 1);
                let d = segment_displacement(&pts[k], &pts[k + 1], periodic);
                pts[k]
                    .iter()
                    .zip(d.iter())
                    .map(|(p, di)| p + di * local)
                    .collect()
            }
        }
    }

    /// Chart velocity at parameter t ∈ [0, 1].
    pub fn velocity(&self, t: f64, periodic: &[bool]) -> Vec<f64> {
        match self {
            LoopPath::Winding {
                base,
                winding,
                wiggle,
            } => (0..base.len())
                .map(|i| {
                    winding[i] as f64 * ramp_deriv(t)
                        + wiggle * TWO_PI * (TWO_PI * t + wiggle_phase(i)).cos()
                })
                .collect(),
            LoopPath::Sampled(pts) => {
                let segments = (pts.len() - 1) as f64;
                let (k, _) = segment_of(t, pts.len() - 1);
                segment_displacement(&pts[k], &pts[k + 1], periodic)
                    .into_iter()
                    .map(|d| d * segments)
                    .collect()
            }
        }
    }

    fn validate(&self, model: &dyn SymplecticModel) -> Result<(), HolonomyError> {
        let periodic = model.periodic_directions();
        match self {
            LoopPath::Winding { winding, .. } => {
                for (i, &w) in winding.iter().enumerate() {
                    if w != 0 && !periodic[i] {
                        return Err(HolonomyError::WindsNonPeriodic(i));
                    }
                }
                Ok(())
            }
            LoopPath::Sampled(pts) => {
                if pts.len() < 2 {
                    return Err(HolonomyError::TooFewSamples);
                }
                let first = &pts[0];
                let last = &pts[pts.len() - 1];
                let mut worst: f64 = 0.0;
                for i in 0..first.len() {
                    let d = if periodic[i] {
                        unwrap_delta(last[i] - first[i]).abs()
                    } else {
                        (last[i] - first[i]).abs()
                    };
                    worst = worst.max(d);
                }
                if worst > tolerances::LOOP_CLOSURE_ABS {
                    return Err(HolonomyError::NotClosed(worst));
                }
                Ok(())
            }
        }
    }
}

fn segment_of(t: f64, segments: usize) -> (usize, f64) {
    let tau = t.clamp(0.0, 1.0) * segments as f64;
    let k = (tau.floor() as usize).min(segments - 1);
    (k, tau - k as f64)
}

fn segment_displacement(from: &[f64], to: &[f64], periodic: &[bool]) -> Vec<f64> {
    from.iter()
        .zip(to.iter())
        .enumerate()
        .map(|(i, (a, b))| {
            if periodic[i] {
                unwrap_delta(b - a)
            } else {
                b - a
            }
        })
        .collect()
}

/// Integrate the horizontal lift of `path` starting at `mu0`, returning
/// μ(t) on the RK4 grid (steps + 1 samples).
pub fn horizontal_lift(
    model: &dyn SymplecticModel,
    path: &LoopPath,
    mu0: &[f64],
    steps: usize,
) -> Result<Vec<Vec<f64>>, HolonomyError> {
    assert!(steps >= 2, "need at least two integration steps");
    assert_eq!(mu0.len(), model.group().dim());
    assert_eq!(path.dim(), model.chart_dim(), "path lives on the wrong chart");
    path.validate(model)?;
    let periodic = model.periodic_directions().to_vec();
    // scan for singular omega before integrating, reporting the location
    for k in 0..=steps {
        let t = k as f64 / steps as f64;
        let m = path.position(t, &periodic);
        let det = model.omega(&m).lu().determinant().abs();
        if det < tolerances::OMEGA_DET_MIN {
            return Err(HolonomyError::SingularOmega { t, det });
        }
    }
    let gdim = model.group().dim();
    let rhs = |t: f64, _mu: &[f64]| -> Vec<f64> {
        let m = path.position(t, &periodic);
        let v = path.velocity(t, &periodic);
        let w = model.omega(&m);
        (0..gdim)
            .map(|j| {
                let mut xi = vec![0.0; gdim];
                xi[j] = 1.0;
                let gen = model.generator(&xi, &m);
                let mut acc = 0.0;
                for a in 0..v.len() {
                    for b in 0..gen.len() {
                        acc += v[a] * w[(a, b)] * gen[b];
                    }
                }
                acc
            })
            .collect()
    };
    Ok(rk4_path(rhs, mu0, 0.0, 1.0, steps))
}

/// Holonomy of a closed loop: the total μ-displacement of its horizontal
/// lift. Independent of the starting μ.
pub fn holonomy_of_loop(
    model: &dyn SymplecticModel,
    path: &LoopPath,
    steps: usize,
) -> Result<Vec<f64>, HolonomyError> {
    let zeros = vec![0.0; model.group().dim()];
    let lift = horizontal_lift(model, path, &zeros, steps)?;
    Ok(lift.last().expect("nonempty lift").clone())
}

/// Exact holonomy generators of a constant model, one per periodic chart
/// direction, as a finitely generated subgroup of the dual. Zero
/// generators are kept so each fundamental loop reports its value.
pub fn holonomy_generators(model: &Model) -> GeneratedSubgroup {
    GeneratedSubgroup::new(
        model.group_dim(),
        model.field,
        model.holonomy_generator_vectors(),
    )
}

/// Error of the numeric loop holonomy against the exact value, at a given
/// step count.
pub fn holonomy_error(model: &Model, path: &LoopPath, steps: usize) -> Result<f64, HolonomyError> {
    let winding = path
        .winding_vector()
        .expect("convergence study needs a closed-form loop");
    let exact: Vec<f64> = model
        .exact_loop_holonomy(winding)
        .iter()
        .map(|s| s.embed())
        .collect();
    let numeric = holonomy_of_loop(model, path, steps)?;
    Ok(numeric
        .iter()
        .zip(exact.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// Successive error ratios when the step count doubles, starting from
/// `base_steps`. Fourth-order convergence makes each ratio ≈ 16.
pub fn convergence_ratios(
    model: &Model,
    path: &LoopPath,
    base_steps: usize,
    refinements: usize,
) -> Result<Vec<f64>, HolonomyError> {
    let mut errors = Vec::new();
    let mut steps = base_steps;
    for _ in 0..=refinements {
        errors.push(holonomy_error(model, path, steps)?);
        steps *= 2;
    }
    Ok(errors
        .windows(2)
        .map(|pair| pair[0] / pair[1])
        .collect())
}
