//! The quotient cylinder R^n / (V + Lambda) and its projection.
//!
//! Quotienting the dual of the algebra by the closure of the period group
//! leaves a cylinder R^{a'} x T^{b'}: a' free directions and b' angles, with
//! a' + b' = n - dim V. The projection is assembled from an adapted basis
//! of R^n: first V's basis, then Lambda's, then standard unit vectors at
//! the coordinates left free by both. Coordinates of a covector in that
//! basis split into a V part (discarded), a Lambda part (kept modulo one as
//! angles), and a free part (kept as is).
//!
//! Projection comes in an exact flavor for field inputs, used by the
//! membership-grade comparisons, and a float flavor for integrator output.
//! Distance on the cylinder is the max of free-coordinate distance and
//! wrapped angle distance, the metric every fiber comparison in the crate
//! uses.

use serde::Serialize;

use crate::linalg::FMat;
use crate::scalar::{rational_to_f64, FieldSpec, Scalar};
use crate::subgroup::ClosedSubgroup;

/// A point of R^{a'} x T^{b'}; angles live in [0, 1).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CylinderPoint {
    pub free: Vec<f64>,
    pub angles: Vec<f64>,
}

impl CylinderPoint {
    /// Max of free-coordinate distance and wrapped angle distance.
    pub fn distance(&self, other: &CylinderPoint) -> f64 {
        let mut dist: f64 = 0.0;
        for (a, b) in self.free.iter().zip(&other.free) {
            dist = dist.max((a - b).abs());
        }
        for (a, b) in self.angles.iter().zip(&other.angles) {
            let raw = (a - b).abs();
            dist = dist.max(raw.min(1.0 - raw));
        }
        dist
    }

    /// Componentwise group law of the cylinder: free parts add, angles add
    /// modulo one.
    pub fn cylinder_sum(&self, other: &CylinderPoint) -> CylinderPoint {
        CylinderPoint {
            free: self
                .free
                .iter()
                .zip(&other.free)
                .map(|(a, b)| a + b)
                .collect(),
            angles: self
                .angles
                .iter()
                .zip(&other.angles)
                .map(|(a, b)| (a + b).rem_euclid(1.0))
                .collect(),
        }
    }
}

/// Exact cylinder point for field-valued inputs; angles reduced into [0,1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactCylinderPoint {
    pub free: Vec<Scalar>,
    pub angles: Vec<Scalar>,
}

impl ExactCylinderPoint {
    pub fn embed(&self) -> CylinderPoint {
        CylinderPoint {
            free: self.free.iter().map(|x| x.embed()).collect(),
            angles: self.angles.iter().map(|x| x.embed()).collect(),
        }
    }
}

/// The cylinder R^n/(V + Lambda) with a concrete adapted basis and both
/// projection flavors.
#[derive(Debug, Clone)]
pub struct Cylinder {
    pub ambient_dim: usize,
    pub field: FieldSpec,
    pub subgroup: ClosedSubgroup,
    /// count of free (non-compact) quotient coordinates
    pub free_rank: usize,
    /// count of angle coordinates, one per lattice generator
    pub torus_rank: usize,
    /// standard coordinates chosen to complete V + Lambda to a basis
    pub complement_coords: Vec<usize>,
    /// inverse of the adapted basis matrix, exact; rows of the inverse
    /// composed with the basis order give coordinates (V part, Lambda part,
    /// free part)
    basis_inverse: FMat,
    basis_inverse_f64: Vec<Vec<f64>>,
}

impl Cylinder {
    /// Builds the adapted basis for a closed subgroup of covectors.
    ///
    /// The complement coordinates are the standard coordinates that are not
    /// pivots of the stacked (V, Lambda) echelon form; unit covectors there
    /// complete the basis deterministically.
    pub fn new(subgroup: &ClosedSubgroup) -> Cylinder {
        let n = subgroup.ambient_dim;
        let k = subgroup.dim_v();
        let m = subgroup.rank_lambda();
        let stacked: Vec<Vec<Scalar>> = subgroup
            .v_basis
            .iter()
            .chain(subgroup.lambda_basis.iter())
            .cloned()
            .collect();
        let pivots = if stacked.is_empty() {
            Vec::new()
        } else {
            let (_, pivots) = FMat::from_rows(stacked.clone()).rref();
            assert_eq!(
                pivots.len(),
                k + m,
                "subgroup basis rows must be independent over R"
            );
            pivots
        };
        let complement_coords: Vec<usize> =
            (0..n).filter(|i| !pivots.contains(i)).collect();
        let mut basis_rows = stacked;
        for &i in &complement_coords {
            let mut e = vec![Scalar::zero(); n];
            e[i] = Scalar::one();
            basis_rows.push(e);
        }
        // columns of the basis matrix are the adapted basis vectors
        let basis = FMat::from_rows(basis_rows).transpose();
        let basis_inverse = invert(&basis);
        let basis_inverse_f64 = (0..n)
            .map(|i| (0..n).map(|j| basis_inverse.at(i, j).embed()).collect())
            .collect();
        Cylinder {
            ambient_dim: n,
            field: subgroup.field,
            subgroup: subgroup.clone(),
            free_rank: n - k - m,
            torus_rank: m,
            complement_coords,
            basis_inverse,
            basis_inverse_f64,
        }
    }

    /// Exact projection: V coordinates dropped, Lambda coordinates reduced
    /// modulo one, free coordinates kept.
    pub fn project_exact(&self, mu: &[Scalar]) -> ExactCylinderPoint {
        assert_eq!(mu.len(), self.ambient_dim);
        let coords = self.basis_inverse.mul_vec(mu);
        let k = self.subgroup.dim_v();
        let m = self.torus_rank;
        ExactCylinderPoint {
            free: coords[k + m..].to_vec(),
            angles: coords[k..k + m]
                .iter()
                .map(|c| c.fract_mod_one())
                .collect(),
        }
    }

    pub fn project(&self, mu: &[Scalar]) -> CylinderPoint {
        self.project_exact(mu).embed()
    }

    /// Float projection for integrator output.
    pub fn project_f64(&self, mu: &[f64]) -> CylinderPoint {
        assert_eq!(mu.len(), self.ambient_dim);
        let k = self.subgroup.dim_v();
        let m = self.torus_rank;
        let coords: Vec<f64> = self
            .basis_inverse_f64
            .iter()
            .map(|row| row.iter().zip(mu).map(|(a, b)| a * b).sum())
            .collect();
        CylinderPoint {
            free: coords[k + m..].to_vec(),
            angles: coords[k..k + m]
                .iter()
                .map(|c| c.rem_euclid(1.0))
                .collect(),
        }
    }

    /// Pushforward of a covector velocity: kills V exactly, keeps Lambda
    /// and free rates (angle rates are not wrapped).
    pub fn tangent_project(&self, nu: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(nu.len(), self.ambient_dim);
        let coords = self.basis_inverse.mul_vec(nu);
        coords[self.subgroup.dim_v()..].to_vec()
    }

    pub fn tangent_project_f64(&self, nu: &[f64]) -> Vec<f64> {
        assert_eq!(nu.len(), self.ambient_dim);
        let coords: Vec<f64> = self
            .basis_inverse_f64
            .iter()
            .map(|row| row.iter().zip(nu).map(|(a, b)| a * b).sum())
            .collect();
        coords[self.subgroup.dim_v()..].to_vec()
    }

    /// Dimension of the quotient as a manifold.
    pub fn dim(&self) -> usize {
        self.free_rank + self.torus_rank
    }

    /// Lift tangent rates (Lambda rates then free rates, the layout of
    /// [`Self::tangent_project`]) back to an ambient covector inside the
    /// canonical complement of V. Right inverse of tangent projection.
    pub fn tangent_lift_f64(&self, rates: &[f64]) -> Vec<f64> {
        assert_eq!(rates.len(), self.dim());
        let mut out = vec![0.0; self.ambient_dim];
        for (j, lam) in self.subgroup.lambda_basis.iter().enumerate() {
            for (o, l) in out.iter_mut().zip(lam.iter()) {
                *o += rates[j] * l.embed();
            }
        }
        for (j, &c) in self.complement_coords.iter().enumerate() {
            out[c] += rates[self.torus_rank + j];
        }
        out
    }
}

/// Exact inverse of a square field matrix; panics on singular input, which
/// cannot happen for adapted bases built from independent rows.
fn invert(m: &FMat) -> FMat {
    assert_eq!(m.nrows, m.ncols);
    let n = m.nrows;
    let mut aug = FMat::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            *aug.at_mut(i, j) = m.at(i, j).clone();
        }
        *aug.at_mut(i, n + i) = Scalar::one();
    }
    let (r, pivots) = aug.rref();
    assert_eq!(pivots, (0..n).collect::<Vec<_>>(), "singular matrix");
    let mut inv = FMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            *inv.at_mut(i, j) = r.at(i, n + j).clone();
        }
    }
    inv
}

/// Angle helper shared by float paths: absolute difference on the circle
/// R/Z.
pub fn wrapped_angle_distance(a: f64, b: f64) -> f64 {
    let raw = (a - b).rem_euclid(1.0);
    raw.min(1.0 - raw)
}

pub fn rational_to_float(r: &num::BigRational) -> f64 {
    rational_to_f64(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroup::GeneratedSubgroup;

    fn f2() -> FieldSpec {
        FieldSpec::new(2).unwrap()
    }

    fn sc(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn rt2() -> Scalar {
        Scalar::sqrt_d(f2())
    }

    fn t4_cylinder() -> Cylinder {
        let h = GeneratedSubgroup::new(
            4,
            f2(),
            vec![
                vec![sc(1), sc(0), sc(0), sc(0)],
                vec![rt2(), sc(0), sc(0), sc(0)],
                vec![sc(0), sc(0), sc(1), rt2()],
            ],
        )
        .closure();
        Cylinder::new(&h)
    }

    #[test]
    fn t4_ranks() {
        let c = t4_cylinder();
        assert_eq!(c.free_rank, 2);
        assert_eq!(c.torus_rank, 1);
        assert_eq!(c.dim(), 3);
    }

    #[test]
    fn kernel_of_projection_is_the_subgroup() {
        let c = t4_cylinder();
        let zero = c.project_exact(&[sc(0), sc(0), sc(0), sc(0)]);
        // each generator of the closed subgroup projects to the base point
        let h = &c.subgroup;
        for gen in h.v_basis.iter().chain(h.lambda_basis.iter()) {
            assert_eq!(c.project_exact(gen), zero);
        }
        // scaled lattice generator too
        let two_lam: Vec<Scalar> = h.lambda_basis[0].iter().map(|x| &sc(2) * x).collect();
        assert_eq!(c.project_exact(&two_lam), zero);
        // half a lattice generator is NOT in the kernel
        let half: Vec<Scalar> = h.lambda_basis[0]
            .iter()
            .map(|x| &Scalar::rational(1, 2) * x)
            .collect();
        assert_ne!(c.project_exact(&half), zero);
    }

    #[test]
    fn projection_is_a_homomorphism() {
        let c = t4_cylinder();
        let x = vec![Scalar::rational(1, 3), sc(2), Scalar::rational(7, 4), rt2()];
        let y = vec![rt2(), Scalar::rational(-1, 2), sc(1), Scalar::rational(2, 5)];
        let sum: Vec<Scalar> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let lhs = c.project(&sum);
        let rhs = c.project(&x).cylinder_sum(&c.project(&y));
        assert!(lhs.distance(&rhs) <= 1e-12);
    }

    #[test]
    fn tangent_projection_kills_exactly_v() {
        let c = t4_cylinder();
        let tv = c.tangent_project(&[sc(5), sc(0), sc(0), sc(0)]);
        assert!(tv.iter().all(|x| x.is_zero()));
        // a lattice direction survives in the tangent map
        let tl = c.tangent_project(&[sc(0), sc(0), sc(1), rt2()]);
        assert!(tl.iter().any(|x| !x.is_zero()));
    }

    #[test]
    fn float_and_exact_projection_agree() {
        let c = t4_cylinder();
        let x = vec![Scalar::rational(22, 7), rt2(), sc(-3), Scalar::rational(5, 9)];
        let xf: Vec<f64> = x.iter().map(|s| s.embed()).collect();
        let exact = c.project(&x);
        let float = c.project_f64(&xf);
        assert!(exact.distance(&float) <= 1e-12);
    }

    #[test]
    fn wrap_distance_across_seam() {
        let a = CylinderPoint {
            free: vec![],
            angles: vec![0.999_999_999],
        };
        let b = CylinderPoint {
            free: vec![],
            angles: vec![0.0],
        };
        assert!(a.distance(&b) < 2e-9);
    }

    #[test]
    fn full_quotient_collapses() {
        // closure of {1, sqrt2} in R^1 is all of R: cylinder is a point
        let h = GeneratedSubgroup::new(1, f2(), vec![vec![sc(1)], vec![rt2()]]).closure();
        let c = Cylinder::new(&h);
        assert_eq!(c.dim(), 0);
        let p = c.project_exact(&[Scalar::rational(13, 5)]);
        assert!(p.free.is_empty() && p.angles.is_empty());
    }
}
