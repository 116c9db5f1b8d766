//! The cylinder-valued momentum map, its non-equivariance cocycle and
//! affine action, conservation and kernel/rank diagnostics, restriction
//! to subalgebras, and the group-valued momentum map available when the
//! holonomy group is closed.
//!
//! For a constant model the map is K(m) = π_C(GᵀW·m + ν₀), where C is the
//! cylinder of the closed holonomy group and ν₀ a basepoint constant.
//! Everything structural about K (its differential, kernel, rank, the
//! cocycle) is exact; floats appear in trajectory integration and in the
//! finite-difference cross-checks that re-derive the exact answers.

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cylinder::{Cylinder, CylinderPoint, ExactCylinderPoint};
use crate::expr::Expr;
use crate::holonomy::holonomy_generators;
use crate::linalg::FMat;
use crate::model::{Model, SymplecticModel};
use crate::numeric::{columns_from, fd_jacobian, max_principal_angle, rk4_path};
use crate::scalar::Scalar;
use crate::subgroup::{annihilator_in_g, preimage_of_subgroup, ClosedSubgroup};
use crate::tolerances;

#[derive(Debug, Clone, thiserror::Error)]
pub enum MomentumError {
    #[error(
        "hamiltonian is not invariant under declared generator {column}: \
         directional derivative {derivative:.3e}"
    )]
    NotInvariant { column: usize, derivative: f64 },
    #[error("holonomy group is not closed; no group-valued momentum map constructed")]
    HolonomyNotClosed,
    #[error("bilinear form rejected: {0}")]
    BadBilinearForm(String),
    #[error("subalgebra coordinates rejected: {0}")]
    BadSubalgebra(String),
}

/// Which part of the group a Hamiltonian is declared invariant under.
#[derive(Debug, Clone)]
pub enum Invariance {
    FullGroup,
    /// invariance along the generator columns with these indices
    Subgroup(Vec<usize>),
}

/// The momentum map of one model: the holonomy closure, its cylinder, and
/// the basepoint constant.
#[derive(Debug, Clone)]
pub struct MomentumMapInstance {
    pub model: Model,
    /// closure of the holonomy group in the dual
    pub holonomy: ClosedSubgroup,
    pub cylinder: Cylinder,
    pub nu0: Vec<Scalar>,
    shift: FMat,
    momentum_f64: DMatrix<f64>,
    shift_f64: DMatrix<f64>,
    nu0_f64: Vec<f64>,
}

impl MomentumMapInstance {
    pub fn new(model: Model) -> Self {
        let nu0 = vec![Scalar::zero(); model.group_dim()];
        Self::with_basepoint(model, nu0)
    }

    pub fn with_basepoint(model: Model, nu0: Vec<Scalar>) -> Self {
        assert_eq!(nu0.len(), model.group_dim());
        let holonomy = holonomy_generators(&model).closure();
        let cylinder = Cylinder::new(&holonomy);
        let shift = model.action_shift_matrix();
        let momentum_f64 = model.momentum_coefficients().to_f64();
        let shift_f64 = shift.to_f64();
        let nu0_f64 = nu0.iter().map(|s| s.embed()).collect();
        MomentumMapInstance {
            model,
            holonomy,
            cylinder,
            nu0,
            shift,
            momentum_f64,
            shift_f64,
            nu0_f64,
        }
    }

    /// Local primitive K̃(m) = GᵀW·m + ν₀ in the full dual.
    pub fn k_tilde_exact(&self, m: &[Scalar]) -> Vec<Scalar> {
        let base = self.model.momentum_coefficients().mul_vec(m);
        base.iter().zip(self.nu0.iter()).map(|(a, b)| a + b).collect()
    }

    pub fn k_tilde(&self, m: &[f64]) -> Vec<f64> {
        let g = self.model.group_dim();
        let mut out = self.nu0_f64.clone();
        for i in 0..g {
            for (j, mj) in m.iter().enumerate() {
                out[i] += self.momentum_f64[(i, j)] * mj;
            }
        }
        out
    }

    /// The momentum value on the cylinder, exactly.
    pub fn k_exact(&self, m: &[Scalar]) -> ExactCylinderPoint {
        self.cylinder.project_exact(&self.k_tilde_exact(m))
    }

    /// The momentum value on the cylinder, in floats.
    pub fn k(&self, m: &[f64]) -> CylinderPoint {
        self.cylinder.project_f64(&self.k_tilde(m))
    }

    /// Momentum value flattened as [angles..., free...], the layout used
    /// by finite differences; pair with [`Self::coord_periodic_flags`].
    pub fn k_coords(&self, m: &[f64]) -> Vec<f64> {
        let p = self.k(m);
        let mut out = p.angles.clone();
        out.extend_from_slice(&p.free);
        out
    }

    pub fn coord_periodic_flags(&self) -> Vec<bool> {
        let mut flags = vec![true; self.cylinder.torus_rank];
        flags.extend(vec![false; self.cylinder.free_rank]);
        flags
    }

    /// Non-equivariance cocycle σ(g) = K(g·m) ⊖ K(m) = π_C((GᵀWG)·u),
    /// independent of m.
    pub fn sigma_cocycle_exact(&self, u: &[Scalar]) -> ExactCylinderPoint {
        self.cylinder.project_exact(&self.shift.mul_vec(u))
    }

    pub fn sigma_cocycle(&self, u: &[f64]) -> CylinderPoint {
        let g = self.model.group_dim();
        assert_eq!(u.len(), g);
        let mut shifted = vec![0.0; g];
        for i in 0..g {
            for (j, uj) in u.iter().enumerate() {
                shifted[i] += self.shift_f64[(i, j)] * uj;
            }
        }
        self.cylinder.project_f64(&shifted)
    }

    /// Affine action on the cylinder: Θ_g(p) = 𝒜d*-part(p) + σ(g); the
    /// coadjoint part is the identity for Abelian groups.
    pub fn affine_action(&self, u: &[f64], p: &CylinderPoint) -> CylinderPoint {
        self.projected_coadjoint(u, p).cylinder_sum(&self.sigma_cocycle(u))
    }

    /// Projected coadjoint action on the cylinder; trivial for the Abelian
    /// groups this crate models, kept separate so the affine action's two
    /// ingredients stay visible.
    pub fn projected_coadjoint(&self, _u: &[f64], p: &CylinderPoint) -> CylinderPoint {
        p.clone()
    }

    /// Integrate the Hamiltonian flow of `hamiltonian` from `m0` and
    /// return the trajectory on the RK4 grid.
    pub fn flow(
        &self,
        hamiltonian: &Expr,
        m0: &[f64],
        t_end: f64,
        steps: usize,
    ) -> Vec<Vec<f64>> {
        let dim = SymplecticModel::chart_dim(&self.model);
        let grads = hamiltonian.gradient(dim);
        let rhs = |_t: f64, m: &[f64]| {
            let grad: Vec<f64> = grads.iter().map(|g| g.eval(m)).collect();
            self.model.hamiltonian_vector_field(&grad)
        };
        rk4_path(rhs, m0, 0.0, t_end, steps)
    }

    /// Maximum cylinder distance of K from its initial value along the
    /// Hamiltonian flow, after checking the declared invariance.
    pub fn noether_drift(
        &self,
        hamiltonian: &Expr,
        invariance: &Invariance,
        m0: &[f64],
        t_end: f64,
        steps: usize,
    ) -> Result<f64, MomentumError> {
        let dim = SymplecticModel::chart_dim(&self.model);
        let grads = hamiltonian.gradient(dim);
        let columns: Vec<usize> = match invariance {
            Invariance::FullGroup => (0..self.model.group_dim()).collect(),
            Invariance::Subgroup(cols) => cols.clone(),
        };
        // invariance is a modeling assumption; sample it before trusting it
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..24 {
            let m = self.model.random_chart_point(&mut rng);
            let grad: Vec<f64> = grads.iter().map(|g| g.eval(&m)).collect();
            for &c in &columns {
                let mut xi = vec![0.0; self.model.group_dim()];
                xi[c] = 1.0;
                let gen = self.model.generator(&xi, &m);
                let d: f64 = grad.iter().zip(gen.iter()).map(|(a, b)| a * b).sum();
                if d.abs() > tolerances::NOETHER_INVARIANCE_ABS {
                    return Err(MomentumError::NotInvariant {
                        column: c,
                        derivative: d,
                    });
                }
            }
        }
        let trajectory = self.flow(hamiltonian, m0, t_end, steps);
        let reference = self.k(m0);
        let mut worst: f64 = 0.0;
        for point in &trajectory {
            worst = worst.max(self.k(point).distance(&reference));
        }
        Ok(worst)
    }

    /// Exact kernel of T_mK as a subspace of the chart: the ω-orthogonal
    /// of the orbit directions of the holonomy annihilator.
    pub fn exact_kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let gdim = self.model.group_dim();
        let n_basis = annihilator_in_g(&self.holonomy.v_basis, gdim);
        if n_basis.is_empty() {
            // every tangent vector is horizontal for K
            return FMat::zeros(0, SymplecticModel::chart_dim(&self.model)).right_kernel();
        }
        let rows: Vec<Vec<Scalar>> = n_basis
            .iter()
            .map(|n| {
                let orbit_dir = self.model.generator_matrix().mul_vec(n);
                self.model.omega_exact().transpose().mul_vec(&orbit_dir)
            })
            .collect();
        FMat::from_rows(rows).right_kernel()
    }

    /// Expected rank of T_mK: dim 𝔫 − dim(𝔤_m ∩ 𝔫) for 𝔫 the annihilator
    /// of the holonomy closure's vector part.
    pub fn expected_rank(&self) -> usize {
        let gdim = self.model.group_dim();
        let n_basis = annihilator_in_g(&self.holonomy.v_basis, gdim);
        let isotropy = self.model.generator_matrix().right_kernel();
        let n_dim = n_basis.len();
        if n_dim == 0 {
            return 0;
        }
        let mut stacked = n_basis.clone();
        stacked.extend(isotropy.iter().cloned());
        let union_rank = FMat::from_rows(stacked).rank();
        let intersection = n_dim + isotropy.len() - union_rank;
        n_dim - intersection
    }

    /// Rank and kernel of T_mK by central finite differences, compared
    /// against the exact predictions.
    pub fn kernel_range_check(&self, m: &[f64]) -> KernelRangeReport {
        let chart = SymplecticModel::chart_dim(&self.model);
        let expected_rank = self.expected_rank();
        let exact_kernel = self.exact_kernel_basis();
        let isotropy_dim = self.model.generator_matrix().right_kernel().len();
        let jac = fd_jacobian(
            |p| self.k_coords(p),
            m,
            tolerances::FD_STEP,
            &self.coord_periodic_flags(),
        );
        // rank and null space from the spectral decomposition of JᵀJ,
        // which stays well posed even when the cylinder is a point
        let jtj = jac.transpose() * &jac;
        let eig = nalgebra::SymmetricEigen::new(jtj);
        let mut fd_rank = 0;
        let mut fd_kernel: Vec<Vec<f64>> = Vec::new();
        for (i, lam) in eig.eigenvalues.iter().enumerate() {
            if lam.max(0.0).sqrt() >= tolerances::FD_RANK_CUTOFF {
                fd_rank += 1;
            } else {
                fd_kernel.push(eig.eigenvectors.column(i).iter().copied().collect());
            }
        }
        let expected_kernel_dim = chart - expected_rank;
        let max_kernel_angle = if fd_kernel.len() == exact_kernel.len() && !exact_kernel.is_empty()
        {
            let exact_cols: Vec<Vec<f64>> = exact_kernel
                .iter()
                .map(|v| v.iter().map(|s| s.embed()).collect())
                .collect();
            Some(max_principal_angle(
                &columns_from(&exact_cols),
                &columns_from(&fd_kernel),
            ))
        } else {
            None
        };
        let angles_ok = match max_kernel_angle {
            Some(a) => a <= tolerances::SUBSPACE_ANGLE_ABS,
            None => exact_kernel.is_empty() && fd_kernel.is_empty(),
        };
        let pass = fd_rank == expected_rank
            && fd_kernel.len() == expected_kernel_dim
            && exact_kernel.len() == expected_kernel_dim
            && angles_ok;
        KernelRangeReport {
            expected_rank,
            fd_rank,
            expected_kernel_dim,
            fd_kernel_dim: fd_kernel.len(),
            isotropy_dim,
            max_kernel_angle,
            pass,
        }
    }

    /// Restrict the action to the subalgebra spanned by the given group
    /// coordinates (0-based), returning the restricted momentum instance
    /// and the exact/numeric comparison of the two momentum maps.
    pub fn restrict_to_subalgebra(
        &self,
        coords: &[usize],
    ) -> Result<(MomentumMapInstance, RestrictionReport), MomentumError> {
        let gdim = self.model.group_dim();
        let mut selected: Vec<usize> = coords.to_vec();
        selected.sort_unstable();
        selected.dedup();
        if selected.is_empty() {
            return Err(MomentumError::BadSubalgebra(
                "empty coordinate set".to_string(),
            ));
        }
        if selected.iter().any(|&c| c >= gdim) {
            return Err(MomentumError::BadSubalgebra(format!(
                "coordinate out of range for a {gdim}-dimensional algebra"
            )));
        }
        let torus_rank = selected
            .iter()
            .filter(|&&c| c < self.model.group.torus_rank)
            .count();
        let sub_group = crate::lie::AbelianGroup {
            torus_rank,
            line_rank: selected.len() - torus_rank,
        };
        let chart = SymplecticModel::chart_dim(&self.model);
        let mut gen_rows: Vec<Vec<Scalar>> = Vec::with_capacity(chart);
        for i in 0..chart {
            gen_rows.push(
                selected
                    .iter()
                    .map(|&c| self.model.generator_matrix().at(i, c).clone())
                    .collect(),
            );
        }
        let sub_model = Model::linear_chart(
            &format!("{}_restricted", self.model.name),
            self.model.field,
            sub_group,
            self.model.omega_exact().clone(),
            FMat::from_rows(gen_rows),
            self.model.periodic().to_vec(),
            None,
        )
        .map_err(|e| MomentumError::BadSubalgebra(e.to_string()))?;
        let sub_nu0: Vec<Scalar> = selected.iter().map(|&c| self.nu0[c].clone()).collect();
        let sub = MomentumMapInstance::with_basepoint(sub_model, sub_nu0);

        // exact inclusion of the projected holonomy closure
        let project = |v: &[Scalar]| -> Vec<Scalar> {
            selected.iter().map(|&c| v[c].clone()).collect()
        };
        let mut line_inclusion = true;
        for v in &self.holonomy.v_basis {
            let image = project(v);
            let mut rows = sub.holonomy.v_basis.clone();
            let base_rank = rows.len();
            rows.push(image);
            if FMat::from_rows(rows).rank() != base_rank {
                line_inclusion = false;
            }
        }
        let mut lattice_inclusion = true;
        for lam in &self.holonomy.lambda_basis {
            if !sub.holonomy.contains(&project(lam)) {
                lattice_inclusion = false;
            }
        }

        // the restricted momentum must be the coordinate projection of the
        // full one, for any representative of the full value
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut residual: f64 = 0.0;
        for _ in 0..20 {
            let m = self.model.random_chart_point(&mut rng);
            let expected = sub.k(&m);
            let mut rep = self.k_tilde(&m);
            for v in &self.holonomy.v_basis {
                let c = rng.gen_range(-3.0..3.0);
                for (r, vi) in rep.iter_mut().zip(v.iter()) {
                    *r += c * vi.embed();
                }
            }
            for lam in &self.holonomy.lambda_basis {
                let k = rng.gen_range(-3i64..=3) as f64;
                for (r, li) in rep.iter_mut().zip(lam.iter()) {
                    *r += k * li.embed();
                }
            }
            let projected: Vec<f64> = selected.iter().map(|&c| rep[c]).collect();
            let via_parent = sub.cylinder.project_f64(&projected);
            residual = residual.max(via_parent.distance(&expected));
        }
        let pass = line_inclusion
            && lattice_inclusion
            && residual <= tolerances::RESTRICTION_DIAGRAM_ABS;
        let report = RestrictionReport {
            coords: selected,
            line_inclusion,
            lattice_inclusion,
            diagram_residual: residual,
            pass,
        };
        Ok((sub, report))
    }

    /// Construct the group-valued momentum map J = f̄⁻¹∘K for the duality
    /// f given by a symmetric bilinear form (identity by default). Exists
    /// exactly when the raw holonomy group is closed.
    pub fn group_valued_j(&self, form: Option<FMat>) -> Result<GroupValuedJ, MomentumError> {
        let raw = holonomy_generators(&self.model);
        if !raw.discreteness_test() {
            return Err(MomentumError::HolonomyNotClosed);
        }
        let gdim = self.model.group_dim();
        let b = form.unwrap_or_else(|| FMat::identity(gdim));
        if b.nrows != gdim || b.ncols != gdim {
            return Err(MomentumError::BadBilinearForm(format!(
                "form must be {gdim}x{gdim}"
            )));
        }
        for i in 0..gdim {
            for j in 0..gdim {
                if b.at(i, j) != b.at(j, i) {
                    return Err(MomentumError::BadBilinearForm(
                        "form must be symmetric".to_string(),
                    ));
                }
            }
        }
        let Some(b_inv) = b.inverse() else {
            return Err(MomentumError::BadBilinearForm(
                "form must be nondegenerate".to_string(),
            ));
        };
        // the holonomy group is discrete, so its closure is itself
        let torus = preimage_of_subgroup(&b, &self.holonomy);
        let cylinder = Cylinder::new(&torus);
        // image of the exponential's kernel lattice under the duality
        let kernel_rows: Vec<Vec<Scalar>> = self
            .model
            .group
            .kernel_lattice()
            .iter()
            .map(|l| b.mul_vec(l))
            .collect();
        let kernel_image = ClosedSubgroup::canonical(
            gdim,
            self.model.field,
            Vec::new(),
            kernel_rows,
        );
        let inclusion = kernel_image.contains_subgroup(&self.holonomy);
        let strict = inclusion && !self.holonomy.contains_subgroup(&kernel_image);
        Ok(GroupValuedJ {
            instance: self.clone(),
            b_inv_f64: b_inv.to_f64(),
            b_f64: b.to_f64(),
            b_inv,
            b,
            torus,
            cylinder,
            inclusion_in_kernel_image: inclusion,
            inclusion_strict: strict,
        })
    }
}

/// Rank/kernel comparison of the momentum differential at a point.
#[derive(Debug, Clone)]
pub struct KernelRangeReport {
    pub expected_rank: usize,
    pub fd_rank: usize,
    pub expected_kernel_dim: usize,
    pub fd_kernel_dim: usize,
    /// dimension of the isotropy algebra of the (translation) action
    pub isotropy_dim: usize,
    pub max_kernel_angle: Option<f64>,
    pub pass: bool,
}

/// Exact and sampled comparison of a restricted momentum map against the
/// coordinate projection of the full one.
#[derive(Debug, Clone)]
pub struct RestrictionReport {
    pub coords: Vec<usize>,
    /// projected vector part of the holonomy closure lands in the
    /// restricted closure's vector part
    pub line_inclusion: bool,
    /// projected lattice generators are members of the restricted closure
    pub lattice_inclusion: bool,
    pub diagram_residual: f64,
    pub pass: bool,
}

/// Group-valued momentum map J = f̄⁻¹∘K, defined on models whose holonomy
/// group is closed; valued in the quotient of the algebra by the
/// preimage torus 𝒯 = f⁻¹(ℋ).
#[derive(Debug, Clone)]
pub struct GroupValuedJ {
    pub instance: MomentumMapInstance,
    pub b: FMat,
    pub b_inv: FMat,
    b_f64: DMatrix<f64>,
    b_inv_f64: DMatrix<f64>,
    /// 𝒯 = f⁻¹(ℋ) in the algebra
    pub torus: ClosedSubgroup,
    pub cylinder: Cylinder,
    pub inclusion_in_kernel_image: bool,
    pub inclusion_strict: bool,
}

impl GroupValuedJ {
    /// J(m) on the algebra-side cylinder.
    pub fn j(&self, m: &[f64]) -> CylinderPoint {
        self.cylinder.project_f64(&self.lift(m))
    }

    /// Local lift of J into the algebra.
    fn lift(&self, m: &[f64]) -> Vec<f64> {
        let mu = self.instance.k_tilde(m);
        let g = mu.len();
        let mut out = vec![0.0; g];
        for i in 0..g {
            for (j, v) in mu.iter().enumerate() {
                out[i] += self.b_inv_f64[(i, j)] * v;
            }
        }
        out
    }

    fn j_coords(&self, m: &[f64]) -> Vec<f64> {
        let p = self.j(m);
        let mut out = p.angles.clone();
        out.extend_from_slice(&p.free);
        out
    }

    /// Largest residual of the defining relation
    /// ω(m)(ξ_M, v) = ⟨B·dJ(m)v, ξ⟩ over sampled points, directions, and
    /// algebra vectors, with dJ taken by central differences on the
    /// quotient and lifted back to the algebra.
    pub fn relation_residual(&self, samples: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = &self.instance.model;
        let chart = SymplecticModel::chart_dim(model);
        let gdim = model.group_dim();
        let h = tolerances::FD_STEP;
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let m = model.random_chart_point(&mut rng);
            let v: Vec<f64> = (0..chart).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let xi: Vec<f64> = (0..gdim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            // directional derivative of J along v, unwrapped on angles
            let plus: Vec<f64> = m.iter().zip(v.iter()).map(|(a, b)| a + h * b).collect();
            let minus: Vec<f64> = m.iter().zip(v.iter()).map(|(a, b)| a - h * b).collect();
            let jp = self.j_coords(&plus);
            let jm = self.j_coords(&minus);
            let torus_rank = self.cylinder.torus_rank;
            let rates: Vec<f64> = jp
                .iter()
                .zip(jm.iter())
                .enumerate()
                .map(|(i, (a, b))| {
                    let d = if i < torus_rank {
                        crate::numeric::unwrap_delta(a - b)
                    } else {
                        a - b
                    };
                    d / (2.0 * h)
                })
                .collect();
            let dj = self.cylinder.tangent_lift_f64(&rates);
            // pair through the form
            let mut bdj = vec![0.0; gdim];
            for i in 0..gdim {
                for (j, d) in dj.iter().enumerate() {
                    bdj[i] += self.b_f64[(i, j)] * d;
                }
            }
            let rhs: f64 = bdj.iter().zip(xi.iter()).map(|(a, b)| a * b).sum();
            let gen = model.generator(&xi, &m);
            let w = model.omega(&m);
            let mut lhs = 0.0;
            for a in 0..chart {
                for b in 0..chart {
                    lhs += gen[a] * w[(a, b)] * v[b];
                }
            }
            worst = worst.max((lhs - rhs).abs());
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, VarLayout};
    use crate::model::{
        t2_area_example, t2_trivial_example, t2xt2_example, t3_mixed_example, t4_example,
    };

    fn t4_instance() -> MomentumMapInstance {
        MomentumMapInstance::new(t4_example())
    }

    #[test]
    fn cylinder_shape_t4() {
        let inst = t4_instance();
        assert_eq!(inst.cylinder.free_rank, 2);
        assert_eq!(inst.cylinder.torus_rank, 1);
        assert_eq!(inst.holonomy.dim_v(), 1);
        assert_eq!(inst.holonomy.rank_lambda(), 1);
    }

    #[test]
    fn well_definedness_under_kernel_lattice() {
        let inst = t4_instance();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let m = inst.model.random_chart_point(&mut rng);
            let k0 = inst.k(&m);
            // a lattice group element returns to the same chart point, so
            // the momentum value must not move: sigma of a lattice vector
            // lands inside the holonomy group and the projection kills it
            let mut u = vec![0.0; 4];
            for x in u.iter_mut() {
                *x = rng.gen_range(-3i64..=3) as f64;
            }
            let k_shifted = inst.k(&inst.model.act_f64(&u, &m));
            assert!(
                k0.distance(&k_shifted) < tolerances::WELLDEF_ABS,
                "{:?} vs {:?}",
                k0,
                k_shifted
            );
        }
    }

    #[test]
    fn equivariance_against_affine_action() {
        let inst = t4_instance();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let m = inst.model.random_chart_point(&mut rng);
            let u: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let lhs = inst.k(&inst.model.act_f64(&u, &m));
            let rhs = inst.affine_action(&u, &inst.k(&m));
            assert!(lhs.distance(&rhs) < tolerances::EQUIVARIANCE_ABS);
        }
    }

    #[test]
    fn sigma_cocycle_additive_and_kills_e2() {
        let inst = t4_instance();
        // second generator column of the cocycle is zero
        let s2 = inst.sigma_cocycle(&[0.0, 1.0, 0.0, 0.0]);
        let zero = inst.sigma_cocycle(&[0.0; 4]);
        assert!(s2.distance(&zero) < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let u: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let v: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let sum: Vec<f64> = u.iter().zip(v.iter()).map(|(a, b)| a + b).collect();
            let lhs = inst.sigma_cocycle(&sum);
            let rhs = inst.sigma_cocycle(&u).cylinder_sum(&inst.sigma_cocycle(&v));
            assert!(lhs.distance(&rhs) < tolerances::COCYCLE_ADD_ABS);
        }
    }

    #[test]
    fn momentum_of_trivial_cocycle_is_plain_projection() {
        let inst = MomentumMapInstance::new(t2_trivial_example());
        assert_eq!(inst.cylinder.dim(), 2);
        assert_eq!(inst.cylinder.torus_rank, 0);
        let m = vec![0.3, 0.7, 1.25, -0.5];
        let k = inst.k(&m);
        assert!((k.free[0] - 1.25).abs() < 1e-15);
        assert!((k.free[1] + 0.5).abs() < 1e-15);
    }

    #[test]
    fn noether_conserved_for_invariant_hamiltonian() {
        let inst = t4_instance();
        let layout = VarLayout::group_and_dual(4);
        let h = parse("nu1^2/2 + nu3*nu4 + cos(2*pi*nu2)", &layout).unwrap();
        let m0 = vec![0.1, 0.2, 0.3, 0.4, 0.5, -0.25, 0.75, 1.5];
        let drift = inst
            .noether_drift(&h, &Invariance::FullGroup, &m0, 10.0, 10_000)
            .unwrap();
        assert!(drift <= tolerances::NOETHER_DRIFT_ABS, "drift {drift}");
    }

    #[test]
    fn noether_subgroup_invariance_suffices() {
        // depends on u1 only through nothing: invariant under the last
        // three circles, which is exactly the annihilator of the line part
        let inst = t4_instance();
        let layout = VarLayout::group_and_dual(4);
        let h = parse("sin(2*pi*u1) + nu2^2/2", &layout).unwrap();
        let m0 = vec![0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75];
        let inv = Invariance::Subgroup(vec![1, 2, 3]);
        let drift = inst.noether_drift(&h, &inv, &m0, 10.0, 10_000).unwrap();
        assert!(drift <= tolerances::NOETHER_DRIFT_ABS, "drift {drift}");
    }

    #[test]
    fn noether_rejects_false_invariance_claim() {
        let inst = t4_instance();
        let layout = VarLayout::group_and_dual(4);
        let h = parse("sin(2*pi*u1)", &layout).unwrap();
        let err = inst.noether_drift(&h, &Invariance::FullGroup, &[0.0; 8], 1.0, 100);
        assert!(matches!(err, Err(MomentumError::NotInvariant { column: 0, .. })));
    }

    #[test]
    fn kernel_range_t4() {
        let inst = t4_instance();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..5 {
            let m = inst.model.random_chart_point(&mut rng);
            let report = inst.kernel_range_check(&m);
            assert_eq!(report.expected_rank, 3);
            assert_eq!(report.expected_kernel_dim, 5);
            assert!(report.pass, "{report:?}");
        }
    }

    #[test]
    fn kernel_range_constant_map() {
        // dense holonomy flattens the cylinder to a point's worth of rank
        let inst = MomentumMapInstance::new(t2xt2_example());
        let report = inst.kernel_range_check(&[0.12, 0.34, 0.56, 0.78]);
        assert_eq!(report.expected_rank, 0);
        assert_eq!(report.expected_kernel_dim, 4);
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn kernel_range_nonfree_action() {
        let inst = MomentumMapInstance::new(t2_area_example());
        let report = inst.kernel_range_check(&[0.3, 0.6]);
        assert_eq!(report.isotropy_dim, 1);
        assert_eq!(report.expected_rank, 1);
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn restriction_to_first_coordinate_t4() {
        let inst = t4_instance();
        let (sub, report) = inst.restrict_to_subalgebra(&[0]).unwrap();
        // projected holonomy closes up to the whole line
        assert_eq!(sub.holonomy.dim_v(), 1);
        assert_eq!(sub.holonomy.rank_lambda(), 0);
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn restriction_to_second_coordinate_t4() {
        let inst = t4_instance();
        let (sub, report) = inst.restrict_to_subalgebra(&[1]).unwrap();
        // the second cocycle column vanishes: plain momentum map
        assert_eq!(sub.holonomy.dim_v(), 0);
        assert_eq!(sub.holonomy.rank_lambda(), 0);
        assert!(report.pass, "{report:?}");
        // K restricted is eta_2 + const: check directly
        let m = vec![0.1, 0.2, 0.3, 0.4, 0.9, 0.8, 0.7, 0.6];
        let k = sub.k(&m);
        assert!(k.angles.is_empty());
        assert!((k.free[0] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn restriction_identity() {
        let inst = t4_instance();
        let (sub, report) = inst.restrict_to_subalgebra(&[0, 1, 2, 3]).unwrap();
        assert!(report.pass);
        assert_eq!(sub.holonomy, inst.holonomy);
    }

    #[test]
    fn group_valued_j_refused_when_dense() {
        let inst = t4_instance();
        assert!(matches!(
            inst.group_valued_j(None),
            Err(MomentumError::HolonomyNotClosed)
        ));
        let dense = MomentumMapInstance::new(t2xt2_example());
        assert!(matches!(
            dense.group_valued_j(None),
            Err(MomentumError::HolonomyNotClosed)
        ));
    }

    #[test]
    fn group_valued_j_on_area_torus() {
        let inst = MomentumMapInstance::new(t2_area_example());
        let j = inst.group_valued_j(None).unwrap();
        // holonomy Z x {0} sits strictly inside the kernel image Z^2
        assert!(j.inclusion_in_kernel_image);
        assert!(j.inclusion_strict);
        assert_eq!(j.torus.rank_lambda(), 1);
        let residual = j.relation_residual(100, 17);
        assert!(residual <= tolerances::J_RELATION_ABS, "residual {residual}");
    }

    #[test]
    fn group_valued_j_trivial_cocycle() {
        let inst = MomentumMapInstance::new(t2_trivial_example());
        let j = inst.group_valued_j(None).unwrap();
        assert_eq!(j.torus.dim_v() + j.torus.rank_lambda(), 0);
        assert!(j.inclusion_in_kernel_image);
        let residual = j.relation_residual(50, 23);
        assert!(residual <= tolerances::J_RELATION_ABS);
    }

    #[test]
    fn t3_mixed_cylinder_shape() {
        let inst = MomentumMapInstance::new(t3_mixed_example());
        // closure is {0}^2 x R: two free coordinates survive, no angles
        assert_eq!(inst.holonomy.dim_v(), 1);
        assert_eq!(inst.holonomy.rank_lambda(), 0);
        assert_eq!(inst.cylinder.free_rank, 2);
        assert_eq!(inst.cylinder.torus_rank, 0);
    }

    #[test]
    fn fiber_equivalence_t4_matches_published_coordinates() {
        // two points share a momentum value exactly when the reference
        // coordinates (eta2, y - sqrt2 x, (x + sqrt2 y) mod 3) agree,
        // where x = eta3 - u1 and y = eta4 - sqrt2 u1
        let inst = t4_instance();
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let r = 2f64.sqrt();
        for _ in 0..200 {
            let m = inst.model.random_chart_point(&mut rng);
            // build a second point with the same reference coordinates:
            // shift x by an integer k, forcing y to shift by sqrt2 k
            let k = rng.gen_range(-2i64..=2) as f64;
            let mut m2 = m.clone();
            m2[6] += k;
            m2[7] += r * k;
            // also move along the dropped direction eta1
            m2[4] += rng.gen_range(-2.0..2.0);
            let d = inst.k(&m).distance(&inst.k(&m2));
            assert!(d < 1e-12, "equal fibers: {d}");
            // breaking the free coordinate must break equality
            let mut m3 = m.clone();
            m3[7] += 0.37;
            assert!(inst.k(&m).distance(&inst.k(&m3)) > 1e-3);
        }
    }
}
