//! Symplectic models with constant coefficients on a linear chart.
//!
//! Every model in this crate is a chart ℝ^n (some coordinates angles of
//! period one) with a constant symplectic matrix W and an Abelian group
//! acting by translations m ↦ m + G·u, where the columns of G are the
//! infinitesimal generators. This covers magnetic cotangent bundles of
//! tori and products-of-tori toys while keeping all structural data exact:
//! momentum differentials, loop holonomies, and Poisson tensors are
//! constant matrices computed once in field arithmetic.
//!
//! Conventions, fixed crate-wide:
//!   * ω(x, y) = xᵀ W y with W antisymmetric and invertible.
//!   * Hamiltonian vector fields satisfy ω(X_f, ·) = df, so X_f = Π ∇f
//!     with Π = (Wᵀ)⁻¹ = −W⁻¹.
//!   * The momentum differential is dK̃ = Gᵀ W (rows indexed by the group
//!     basis), from ⟨dK̃·v, ξ⟩ = ω(ξ_M, v).
//!   * Horizontal lifts in the holonomy module pair the other way around,
//!     μ′ = Gᵀ Wᵀ c′; the two differ by a global sign because W is
//!     antisymmetric, and the per-loop increments land in the holonomy
//!     group either way.

use nalgebra::DMatrix;
use rand::Rng;

use crate::expr::VarLayout;
use crate::lie::{AbelianGroup, TwoCocycle};
use crate::linalg::FMat;
use crate::scalar::{FieldSpec, Scalar};
use crate::tolerances;

#[derive(Debug, Clone, thiserror::Error)]
pub enum ModelError {
    #[error("omega must be antisymmetric: entry ({0},{1})")]
    NotAntisymmetric(usize, usize),
    #[error("omega is degenerate (exact rank {0} < {1})")]
    Degenerate(usize, usize),
    #[error("omega is numerically near-singular (|det| = {0:.3e})")]
    NearSingular(f64),
    #[error("generator matrix must be {0}x{1}, got {2}x{3}")]
    GeneratorShape(usize, usize, usize, usize),
    #[error("periodic flags must cover the chart: {0} flags for dimension {1}")]
    PeriodicLength(usize, usize),
    #[error(
        "torus generator {0} does not descend to the chart: \
         column entries must be integers on periodic coordinates and zero elsewhere"
    )]
    ActionDoesNotDescend(usize),
}

/// Extra structure carried by magnetic cotangent charts.
#[derive(Debug, Clone)]
pub struct MagneticStructure {
    /// magnetic two-cocycle on the base group's algebra
    pub cocycle: TwoCocycle,
}

/// Chart interface consumed by the numeric integrators. Constant models
/// implement it by ignoring the chart point.
pub trait SymplecticModel {
    fn chart_dim(&self) -> usize;
    fn group(&self) -> &AbelianGroup;
    /// Matrix of the symplectic form at chart point `m`.
    fn omega(&self, m: &[f64]) -> DMatrix<f64>;
    /// Infinitesimal generator ξ_M(m) for the algebra vector `xi`.
    fn generator(&self, xi: &[f64], m: &[f64]) -> Vec<f64>;
    /// Which chart coordinates are angles of period one.
    fn periodic_directions(&self) -> &[bool];
}

/// A constant-coefficient symplectic chart with a translation action.
#[derive(Debug, Clone)]
pub struct Model {
    pub name: String,
    pub field: FieldSpec,
    pub group: AbelianGroup,
    chart_dim: usize,
    omega: FMat,
    generators: FMat,
    periodic: Vec<bool>,
    pub magnetic: Option<MagneticStructure>,
    // cached derived data, all constant
    momentum_coeffs: FMat,
    holonomy_coeffs: FMat,
    poisson: FMat,
    omega_f64: DMatrix<f64>,
    generators_f64: DMatrix<f64>,
    poisson_f64: DMatrix<f64>,
    holonomy_coeffs_f64: DMatrix<f64>,
}

impl Model {
    /// General constructor for a linear chart with constant `omega` and
    /// generator columns; validates the symplectic structure and that the
    /// torus part of the group genuinely acts on the torus chart.
    pub fn linear_chart(
        name: &str,
        field: FieldSpec,
        group: AbelianGroup,
        omega: FMat,
        generators: FMat,
        periodic: Vec<bool>,
        magnetic: Option<MagneticStructure>,
    ) -> Result<Model, ModelError> {
        let n = omega.nrows;
        assert_eq!(omega.ncols, n, "omega must be square");
        for i in 0..n {
            for j in 0..n {
                if (omega.at(i, j) + omega.at(j, i)) != Scalar::zero() {
                    return Err(ModelError::NotAntisymmetric(i, j));
                }
            }
        }
        let rank = omega.rank();
        if rank != n {
            return Err(ModelError::Degenerate(rank, n));
        }
        let omega_f64 = omega.to_f64();
        let det = omega_f64.clone().lu().determinant().abs();
        if det < tolerances::OMEGA_DET_MIN {
            return Err(ModelError::NearSingular(det));
        }
        if generators.nrows != n || generators.ncols != group.dim() {
            return Err(ModelError::GeneratorShape(
                n,
                group.dim(),
                generators.nrows,
                generators.ncols,
            ));
        }
        if periodic.len() != n {
            return Err(ModelError::PeriodicLength(periodic.len(), n));
        }
        // a torus generator must shift angles by whole periods and leave
        // non-angular coordinates fixed once it wraps around
        for k in 0..group.torus_rank {
            for i in 0..n {
                let entry = generators.at(i, k);
                let ok = if periodic[i] {
                    entry.is_integer()
                } else {
                    entry.is_zero()
                };
                if !ok {
                    return Err(ModelError::ActionDoesNotDescend(k));
                }
            }
        }
        let gt = generators.transpose();
        let momentum_coeffs = gt.matmul(&omega);
        let holonomy_coeffs = gt.matmul(&omega.transpose());
        let poisson = omega
            .transpose()
            .inverse()
            .expect("nondegenerate omega has an inverse");
        let generators_f64 = generators.to_f64();
        let poisson_f64 = poisson.to_f64();
        let holonomy_coeffs_f64 = holonomy_coeffs.to_f64();
        Ok(Model {
            name: name.to_string(),
            field,
            group,
            chart_dim: n,
            omega,
            generators,
            periodic,
            magnetic,
            momentum_coeffs,
            holonomy_coeffs,
            poisson,
            omega_f64,
            generators_f64,
            poisson_f64,
            holonomy_coeffs_f64,
        })
    }

    /// Magnetic cotangent chart of an Abelian group: coordinates (u, ν)
    /// with u covering the group and ν in the dual, the action translating
    /// u, and ω((ξ,ρ),(η,σ)) = ⟨σ,ξ⟩ − ⟨ρ,η⟩ − Σ(ξ,η).
    pub fn magnetic_cotangent(
        name: &str,
        field: FieldSpec,
        base: AbelianGroup,
        cocycle: TwoCocycle,
    ) -> Result<Model, ModelError> {
        let n = base.dim();
        assert_eq!(cocycle.matrix().nrows, n, "cocycle must live on the base");
        let mut omega = FMat::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                *omega.at_mut(i, j) = -cocycle.matrix().at(i, j).clone();
            }
            *omega.at_mut(i, n + i) = Scalar::one();
            *omega.at_mut(n + i, i) = -Scalar::one();
        }
        let mut generators = FMat::zeros(2 * n, n);
        for i in 0..n {
            *generators.at_mut(i, i) = Scalar::one();
        }
        let mut periodic = vec![false; 2 * n];
        for flag in periodic.iter_mut().take(base.torus_rank) {
            *flag = true;
        }
        Model::linear_chart(
            name,
            field,
            base,
            omega,
            generators,
            periodic,
            Some(MagneticStructure { cocycle }),
        )
    }

    pub fn group_dim(&self) -> usize {
        self.group.dim()
    }

    pub fn is_magnetic(&self) -> bool {
        self.magnetic.is_some()
    }

    pub fn omega_exact(&self) -> &FMat {
        &self.omega
    }

    pub fn generator_matrix(&self) -> &FMat {
        &self.generators
    }

    pub fn periodic(&self) -> &[bool] {
        &self.periodic
    }

    /// ω(x, y) in field arithmetic.
    pub fn omega_eval(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let wy = self.omega.mul_vec(y);
        x.iter()
            .zip(wy.iter())
            .fold(Scalar::zero(), |acc, (a, b)| acc + (a * b))
    }

    /// Translation action g·m = m + G·u in covering coordinates.
    pub fn act(&self, u: &[Scalar], m: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(u.len(), self.group_dim());
        assert_eq!(m.len(), self.chart_dim);
        let gu = self.generators.mul_vec(u);
        m.iter().zip(gu.iter()).map(|(a, b)| a + b).collect()
    }

    pub fn act_f64(&self, u: &[f64], m: &[f64]) -> Vec<f64> {
        let mut out = m.to_vec();
        for i in 0..self.chart_dim {
            for (k, uk) in u.iter().enumerate() {
                out[i] += self.generators_f64[(i, k)] * uk;
            }
        }
        out
    }

    /// Rows of the momentum differential dK̃ = GᵀW (one row per group
    /// basis vector), constant over the chart.
    pub fn momentum_coefficients(&self) -> &FMat {
        &self.momentum_coeffs
    }

    /// Rows of the lift pairing GᵀWᵀ: a path with velocity c′ lifts with
    /// μ′ = (GᵀWᵀ)·c′.
    pub fn holonomy_coefficients(&self) -> &FMat {
        &self.holonomy_coeffs
    }

    pub fn holonomy_coefficients_f64(&self) -> &DMatrix<f64> {
        &self.holonomy_coeffs_f64
    }

    /// Exact per-loop holonomy GᵀWᵀ·w for a loop with winding vector `w`
    /// over the chart's periodic coordinates.
    pub fn exact_loop_holonomy(&self, winding: &[i64]) -> Vec<Scalar> {
        assert_eq!(winding.len(), self.chart_dim);
        for (i, w) in winding.iter().enumerate() {
            assert!(
                *w == 0 || self.periodic[i],
                "winding in a non-periodic chart direction {i}"
            );
        }
        let wv: Vec<Scalar> = winding.iter().map(|&w| Scalar::from_int(w)).collect();
        self.holonomy_coeffs.mul_vec(&wv)
    }

    /// Exact holonomy generators, one per periodic chart coordinate
    /// (homotopy basis of the chart's torus directions). Zero vectors are
    /// kept so callers can report one generator per fundamental loop.
    pub fn holonomy_generator_vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.chart_dim)
            .filter(|&i| self.periodic[i])
            .map(|i| {
                let mut w = vec![0i64; self.chart_dim];
                w[i] = 1;
                self.exact_loop_holonomy(&w)
            })
            .collect()
    }

    /// Fundamental loop winding vectors, one per periodic chart direction.
    pub fn fundamental_windings(&self) -> Vec<Vec<i64>> {
        (0..self.chart_dim)
            .filter(|&i| self.periodic[i])
            .map(|i| {
                let mut w = vec![0i64; self.chart_dim];
                w[i] = 1;
                w
            })
            .collect()
    }

    /// Group-level pairing GᵀWG: the momentum shift of the action,
    /// K̃(g·m) − K̃(m) = (GᵀWG)·u.
    pub fn action_shift_matrix(&self) -> FMat {
        self.momentum_coeffs.matmul(&self.generators)
    }

    /// Constant Poisson tensor Π = (Wᵀ)⁻¹, so X_f = Π ∇f and
    /// {f, g} = ∇fᵀ Π ∇g.
    pub fn poisson_tensor(&self) -> &FMat {
        &self.poisson
    }

    pub fn poisson_tensor_f64(&self) -> &DMatrix<f64> {
        &self.poisson_f64
    }

    /// Hamiltonian vector field from a gradient sample.
    pub fn hamiltonian_vector_field(&self, grad: &[f64]) -> Vec<f64> {
        assert_eq!(grad.len(), self.chart_dim);
        let mut out = vec![0.0; self.chart_dim];
        for i in 0..self.chart_dim {
            for j in 0..self.chart_dim {
                out[i] += self.poisson_f64[(i, j)] * grad[j];
            }
        }
        out
    }

    /// Variable layout for Hamiltonians on this chart.
    pub fn var_layout(&self) -> VarLayout {
        if self.is_magnetic() {
            VarLayout::group_and_dual(self.group_dim())
        } else {
            VarLayout::chart_only(self.chart_dim)
        }
    }

    /// Chart distance with periodic coordinates wrapped.
    pub fn chart_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.chart_dim {
            let d = if self.periodic[i] {
                let raw = (a[i] - b[i]).rem_euclid(1.0);
                raw.min(1.0 - raw)
            } else {
                (a[i] - b[i]).abs()
            };
            worst = worst.max(d);
        }
        worst
    }

    /// Reduce periodic coordinates to [0, 1).
    pub fn wrap_chart(&self, m: &[f64]) -> Vec<f64> {
        m.iter()
            .enumerate()
            .map(|(i, &x)| if self.periodic[i] { x.rem_euclid(1.0) } else { x })
            .collect()
    }

    pub fn random_chart_point<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        (0..self.chart_dim)
            .map(|i| {
                if self.periodic[i] {
                    rng.gen_range(0.0..1.0)
                } else {
                    rng.gen_range(-2.0..2.0)
                }
            })
            .collect()
    }

    pub fn random_group_element<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        (0..self.group_dim()).map(|_| rng.gen_range(-2.0..2.0)).collect()
    }
}

impl SymplecticModel for Model {
    fn chart_dim(&self) -> usize {
        self.chart_dim
    }

    fn group(&self) -> &AbelianGroup {
        &self.group
    }

    fn omega(&self, _m: &[f64]) -> DMatrix<f64> {
        self.omega_f64.clone()
    }

    fn generator(&self, xi: &[f64], _m: &[f64]) -> Vec<f64> {
        assert_eq!(xi.len(), self.group_dim());
        let mut out = vec![0.0; self.chart_dim];
        for i in 0..self.chart_dim {
            for (k, x) in xi.iter().enumerate() {
                out[i] += self.generators_f64[(i, k)] * x;
            }
        }
        out
    }

    fn periodic_directions(&self) -> &[bool] {
        &self.periodic
    }
}

fn sc(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn rt2(field: FieldSpec) -> Scalar {
    Scalar::sqrt_d(field)
}

/// T⁴ magnetic cotangent bundle whose cocycle mixes a dense line and a
/// lattice direction in the holonomy group.
pub fn t4_example() -> Model {
    let field = FieldSpec::new(2).unwrap();
    let group = AbelianGroup {
        torus_rank: 4,
        line_rank: 0,
    };
    let r = rt2(field);
    let sigma = FMat::from_rows(vec![
        vec![sc(0), sc(0), sc(-1), -r.clone()],
        vec![sc(0), sc(0), sc(0), sc(0)],
        vec![sc(1), sc(0), sc(0), sc(0)],
        vec![r.clone(), sc(0), sc(0), sc(0)],
    ]);
    let algebra = crate::lie::LieAlgebra::abelian(4);
    let cocycle = TwoCocycle::new(&algebra, sigma).unwrap();
    Model::magnetic_cotangent("t4_magnetic", field, group, cocycle).unwrap()
}

/// T²×T² with ω = dθ₁∧dθ₂ + √2 dψ₁∧dψ₂ and one circle rotating θ₁ and
/// ψ₁ together; its holonomy group is dense in the one-dimensional dual.
pub fn t2xt2_example() -> Model {
    let field = FieldSpec::new(2).unwrap();
    let group = AbelianGroup {
        torus_rank: 1,
        line_rank: 0,
    };
    let r = rt2(field);
    let omega = FMat::from_rows(vec![
        vec![sc(0), sc(1), sc(0), sc(0)],
        vec![sc(-1), sc(0), sc(0), sc(0)],
        vec![sc(0), sc(0), sc(0), r.clone()],
        vec![sc(0), sc(0), -r.clone(), sc(0)],
    ]);
    let generators = FMat::from_rows(vec![
        vec![sc(1)],
        vec![sc(0)],
        vec![sc(1)],
        vec![sc(0)],
    ]);
    Model::linear_chart(
        "t2xt2_dense",
        field,
        group,
        omega,
        generators,
        vec![true; 4],
        None,
    )
    .unwrap()
}

/// T² with its area form and the full torus translating it; the action is
/// not free in the second factor's effect on momentum and the holonomy
/// group is a proper sublattice of the kernel image.
pub fn t2_area_example() -> Model {
    let field = FieldSpec::rationals();
    let group = AbelianGroup {
        torus_rank: 2,
        line_rank: 0,
    };
    let omega = FMat::from_rows(vec![vec![sc(0), sc(1)], vec![sc(-1), sc(0)]]);
    let generators = FMat::from_rows(vec![vec![sc(1), sc(0)], vec![sc(0), sc(0)]]);
    Model::linear_chart(
        "t2_area",
        field,
        group,
        omega,
        generators,
        vec![true, true],
        None,
    )
    .unwrap()
}

/// T² magnetic cotangent bundle with a unimodular cocycle, so the
/// holonomy group is the full integer lattice and the quotient a torus.
pub fn t2_lattice_example() -> Model {
    let field = FieldSpec::rationals();
    let group = AbelianGroup {
        torus_rank: 2,
        line_rank: 0,
    };
    let sigma = FMat::from_rows(vec![vec![sc(0), sc(1)], vec![sc(-1), sc(0)]]);
    let algebra = crate::lie::LieAlgebra::abelian(2);
    let cocycle = TwoCocycle::new(&algebra, sigma).unwrap();
    Model::magnetic_cotangent("t2_lattice", field, group, cocycle).unwrap()
}

/// (T²×ℝ) magnetic cotangent bundle: torus loops feed a dense subgroup of
/// the line direction in the dual, the ℝ factor contributes nothing.
pub fn t3_mixed_example() -> Model {
    let field = FieldSpec::new(2).unwrap();
    let group = AbelianGroup {
        torus_rank: 2,
        line_rank: 1,
    };
    let r = rt2(field);
    let sigma = FMat::from_rows(vec![
        vec![sc(0), sc(0), sc(1)],
        vec![sc(0), sc(0), r.clone()],
        vec![sc(-1), -r.clone(), sc(0)],
    ]);
    let algebra = crate::lie::LieAlgebra::abelian(3);
    let cocycle = TwoCocycle::new(&algebra, sigma).unwrap();
    Model::magnetic_cotangent("t3_mixed", field, group, cocycle).unwrap()
}

/// T² cotangent bundle with zero cocycle: an honest momentum map exists
/// and every holonomy generator vanishes.
pub fn t2_trivial_example() -> Model {
    let field = FieldSpec::rationals();
    let group = AbelianGroup {
        torus_rank: 2,
        line_rank: 0,
    };
    let cocycle = TwoCocycle::zero(2);
    Model::magnetic_cotangent("t2_trivial", field, group, cocycle).unwrap()
}

/// The whole preset corpus, for sweep-style tests.
pub fn all_presets() -> Vec<Model> {
    vec![
        t4_example(),
        t2xt2_example(),
        t2_area_example(),
        t2_lattice_example(),
        t3_mixed_example(),
        t2_trivial_example(),
    ]
}
