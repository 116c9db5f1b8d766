//! Exact closures of finitely generated subgroups of R^n and the cylinders
//! they carve out.
//!
//! A finitely generated subgroup of R^n with entries in Q(sqrt(d)) has a
//! closure of the form V + Lambda: a linear part V (the connected component
//! of the identity) plus a lattice part Lambda, discrete modulo V. This
//! module computes that decomposition exactly by the bidual method: the
//! integral dual of a subgroup (all covectors pairing it into the integers)
//! is closed and computable, and dualizing twice lands on the closure.
//!
//! Each dual is one call to a mixed constraint solver: find all y with some
//! exact linear pairings zero and some exact pairings integer. Splitting
//! every field value a + b*sqrt(d) into its two rational coordinates turns
//! the integrality constraints into pure lattice problems (sqrt(d) is
//! irrational, so an integer pairing forces the irrational coordinate to
//! vanish), and those are solved by Hermite normal forms with unimodular
//! transforms. No step introduces a tolerance.
//!
//! Canonical form matters as much as correctness here: equal subgroups must
//! produce byte-identical bases. V is stored as the reduced row echelon
//! basis of its span; Lambda is reduced modulo V's pivot coordinates and
//! then normalized to the Hermite basis of its image in Q^{2n}.

use num::bigint::BigInt;
use num::{BigRational, One, Zero};

use crate::linalg::{rational_lattice_hnf, FMat};
use crate::scalar::{FieldSpec, Scalar};

/// A finitely generated subgroup of R^n, given by a redundant-allowed list
/// of generators with entries in the working field.
#[derive(Debug, Clone)]
pub struct GeneratedSubgroup {
    pub ambient_dim: usize,
    pub field: FieldSpec,
    pub generators: Vec<Vec<Scalar>>,
}

impl GeneratedSubgroup {
    pub fn new(ambient_dim: usize, field: FieldSpec, generators: Vec<Vec<Scalar>>) -> Self {
        for g in &generators {
            assert_eq!(g.len(), ambient_dim, "generator has wrong dimension");
        }
        GeneratedSubgroup {
            ambient_dim,
            field,
            generators,
        }
    }

    /// Topological closure of the integer span, exactly.
    ///
    /// Discrete inputs short-circuit to a pure lattice normalization; dense
    /// ones go through the bidual. Both paths end in the same
    /// canonicalization, so the choice never shows in the output.
    pub fn closure(&self) -> ClosedSubgroup {
        if self.discreteness_test() {
            return ClosedSubgroup::canonical(
                self.ambient_dim,
                self.field,
                Vec::new(),
                self.generators.clone(),
            );
        }
        self.annihilator_dual().annihilator_dual()
    }

    /// Covectors pairing every generator into the integers.
    pub fn annihilator_dual(&self) -> ClosedSubgroup {
        solve_mixed_constraints(self.ambient_dim, self.field, &[], &self.generators)
    }

    /// True iff the generated subgroup is already closed (a lattice plus
    /// nothing dense).
    ///
    /// Criterion: the rank of the generators over Q, reading each field
    /// entry as two rational coordinates, equals their rank over R. A rank
    /// drop means some real relation holds that no rational one does, which
    /// is exactly a Kronecker-style dense winding.
    pub fn discreteness_test(&self) -> bool {
        if self.generators.is_empty() {
            return true;
        }
        let real_rank = FMat::from_rows(self.generators.clone()).rank();
        let rational_rows: Vec<Vec<Scalar>> = self
            .generators
            .iter()
            .map(|g| rational_coordinate_vector(g))
            .collect();
        let rational_rank = FMat::from_rows(rational_rows).rank();
        rational_rank == real_rank
    }
}

/// A closed subgroup V + Lambda of R^n in canonical form.
///
/// `v_basis` is the RREF basis of the linear part. `lambda_basis` generates
/// the discrete part, each vector reduced to zero at V's pivot coordinates
/// and the whole set in Hermite normal form, so equal subgroups compare
/// equal structurally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedSubgroup {
    pub ambient_dim: usize,
    pub field: FieldSpec,
    pub v_basis: Vec<Vec<Scalar>>,
    pub lambda_basis: Vec<Vec<Scalar>>,
}

impl ClosedSubgroup {
    pub fn trivial(ambient_dim: usize, field: FieldSpec) -> Self {
        ClosedSubgroup {
            ambient_dim,
            field,
            v_basis: Vec::new(),
            lambda_basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize, field: FieldSpec) -> Self {
        let v = (0..ambient_dim)
            .map(|i| unit_vector(ambient_dim, i))
            .collect();
        ClosedSubgroup {
            ambient_dim,
            field,
            v_basis: v,
            lambda_basis: Vec::new(),
        }
    }

    /// Builds the canonical form from any spanning data: arbitrary vectors
    /// spanning V and lattice generators that are discrete modulo V.
    pub fn canonical(
        ambient_dim: usize,
        field: FieldSpec,
        v_spanning: Vec<Vec<Scalar>>,
        lambda_generators: Vec<Vec<Scalar>>,
    ) -> Self {
        let (v_basis, pivots) = if v_spanning.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            let (rref, pivots) = FMat::from_rows(v_spanning).rref();
            let rows: Vec<Vec<Scalar>> = rref
                .rows_vec()
                .into_iter()
                .take(pivots.len())
                .collect();
            (rows, pivots)
        };
        // reduce lattice generators modulo V: RREF pivots are 1 with zeros
        // at the other pivot columns, so one subtraction per pivot clears
        // that coordinate
        let mut reduced: Vec<Vec<Scalar>> = Vec::new();
        for lam in &lambda_generators {
            let mut x = lam.clone();
            for (row, &p) in pivots.iter().enumerate() {
                let coeff = x[p].clone();
                if coeff.is_zero() {
                    continue;
                }
                for j in 0..ambient_dim {
                    let sub = &coeff * &v_basis[row][j];
                    x[j] = &x[j] - &sub;
                }
            }
            if x.iter().any(|c| !c.is_zero()) {
                reduced.push(x);
            }
        }
        let lambda_basis = if reduced.is_empty() {
            Vec::new()
        } else {
            debug_assert!(
                {
                    let rr = FMat::from_rows(reduced.clone()).rank();
                    let qr = FMat::from_rows(
                        reduced.iter().map(|g| rational_coordinate_vector(g)).collect(),
                    )
                    .rank();
                    rr == qr
                },
                "lattice generators are not discrete modulo V"
            );
            canonical_lattice_basis(&reduced, ambient_dim, field)
        };
        ClosedSubgroup {
            ambient_dim,
            field,
            v_basis,
            lambda_basis,
        }
    }

    pub fn dim_v(&self) -> usize {
        self.v_basis.len()
    }

    pub fn rank_lambda(&self) -> usize {
        self.lambda_basis.len()
    }

    /// The Lie algebra of the subgroup: its connected component V.
    pub fn lie_of(&self) -> &[Vec<Scalar>] {
        &self.v_basis
    }

    /// Covectors pairing V into zero and Lambda into the integers.
    pub fn annihilator_dual(&self) -> ClosedSubgroup {
        solve_mixed_constraints(self.ambient_dim, self.field, &self.v_basis, &self.lambda_basis)
    }

    /// Re-derives the closure from the stored basis; a fixed point of this
    /// is what "closed" means operationally.
    pub fn reclose(&self) -> ClosedSubgroup {
        self.annihilator_dual().annihilator_dual()
    }

    /// Exact membership: x = (V part) + (integer combination of Lambda).
    pub fn contains(&self, x: &[Scalar]) -> bool {
        assert_eq!(x.len(), self.ambient_dim);
        let rows: Vec<Vec<Scalar>> = self
            .v_basis
            .iter()
            .chain(self.lambda_basis.iter())
            .cloned()
            .collect();
        if rows.is_empty() {
            return x.iter().all(|c| c.is_zero());
        }
        // solve for coordinates in the joint basis; V rows and reduced
        // Lambda rows are independent over R, so the solution is unique
        let basis_t = FMat::from_rows(rows).transpose();
        let Some(coeffs) = basis_t.solve(x) else {
            return false;
        };
        coeffs[self.v_basis.len()..].iter().all(|c| c.is_integer())
    }

    pub fn contains_subgroup(&self, other: &ClosedSubgroup) -> bool {
        // V' must sit inside V (not merely inside V + Lambda) and each
        // lattice generator inside the whole group
        let v_ok = if other.v_basis.is_empty() {
            true
        } else if self.v_basis.is_empty() {
            false
        } else {
            let vmat_t = FMat::from_rows(self.v_basis.clone()).transpose();
            other.v_basis.iter().all(|v| vmat_t.solve(v).is_some())
        };
        v_ok && other
            .lambda_basis
            .iter()
            .all(|l| self.contains(l))
    }

    /// Renders each basis vector on its own line for reports.
    pub fn describe_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for v in &self.v_basis {
            out.push(format!("V: ({})", render_vector(v)));
        }
        for l in &self.lambda_basis {
            out.push(format!("Lambda: ({})", render_vector(l)));
        }
        if out.is_empty() {
            out.push("trivial".to_string());
        }
        out
    }
}

pub fn render_vector(v: &[Scalar]) -> String {
    v.iter()
        .map(|c| c.render())
        .collect::<Vec<_>>()
        .join(", ")
}

fn unit_vector(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = Scalar::one();
    v
}

/// Reads a field vector as a rational vector of twice the length by
/// splitting each entry into (rational, irrational) coordinates.
fn rational_coordinate_vector(v: &[Scalar]) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(2 * v.len());
    for x in v {
        let (a, b) = x.rational_coordinates();
        out.push(Scalar::from_big_rational(a));
        out.push(Scalar::from_big_rational(b));
    }
    out
}

/// Canonical Z-basis of the lattice generated by the given field vectors.
///
/// The vectors are embedded into Q^{2n} coordinatewise (this is injective
/// and Z-linear), normalized there by the rational Hermite form, and mapped
/// back. Hermite normalization commutes with the embedding's inverse on the
/// image, so the output depends only on the generated lattice.
fn canonical_lattice_basis(
    generators: &[Vec<Scalar>],
    ambient_dim: usize,
    field: FieldSpec,
) -> Vec<Vec<Scalar>> {
    let rational_rows: Vec<Vec<BigRational>> = generators
        .iter()
        .map(|g| {
            let mut row = Vec::with_capacity(2 * ambient_dim);
            for x in g {
                let (a, b) = x.rational_coordinates();
                row.push(a);
                row.push(b);
            }
            row
        })
        .collect();
    rational_lattice_hnf(&rational_rows)
        .into_iter()
        .map(|row| {
            (0..ambient_dim)
                .map(|i| Scalar::new(row[2 * i].clone(), row[2 * i + 1].clone(), field))
                .collect()
        })
        .collect()
}

/// All y in R^n with ⟨y, r⟩ = 0 for every linear row and ⟨y, m⟩ ∈ Z for
/// every integral row. This single primitive is the dual computation, and
/// with composed rows also the preimage of a closed subgroup under a linear
/// map.
///
/// Shape of the computation:
/// 1. kernel of the linear rows gives the carrier subspace, basis y_1..y_t;
/// 2. the pairing matrix P[j][s] = ⟨m_j, y_s⟩ reduces the problem to
///    { c in R^t : P c in Z^m };
/// 3. the connected part is ker P; the lattice part is the preimage of
///    Z^m ∩ im P, and an integer vector lies in im P iff both rational
///    coordinates of its pairing with each left-kernel covector vanish,
///    which is an integer kernel problem after clearing denominators.
pub fn solve_mixed_constraints(
    ambient_dim: usize,
    field: FieldSpec,
    linear_rows: &[Vec<Scalar>],
    integral_rows: &[Vec<Scalar>],
) -> ClosedSubgroup {
    // carrier subspace annihilating the linear rows
    let carrier: Vec<Vec<Scalar>> = if linear_rows.is_empty() {
        (0..ambient_dim)
            .map(|i| unit_vector(ambient_dim, i))
            .collect()
    } else {
        FMat::from_rows(linear_rows.to_vec()).right_kernel()
    };
    let t = carrier.len();
    if t == 0 {
        return ClosedSubgroup::trivial(ambient_dim, field);
    }
    let m = integral_rows.len();
    if m == 0 {
        return ClosedSubgroup::canonical(ambient_dim, field, carrier, Vec::new());
    }
    // P[j][s] = pairing of integral row j with carrier vector s
    let mut p = FMat::zeros(m, t);
    for (j, row) in integral_rows.iter().enumerate() {
        for (s, y) in carrier.iter().enumerate() {
            let mut acc = Scalar::zero();
            for i in 0..ambient_dim {
                acc += &(&row[i] * &y[i]);
            }
            *p.at_mut(j, s) = acc;
        }
    }
    let v_coords = p.right_kernel();
    // integer vectors in the column span of P: kill both rational
    // coordinates of the pairing with every left-kernel covector
    let left_kernel = p.transpose().right_kernel();
    let z_basis: Vec<Vec<BigInt>> = if left_kernel.is_empty() {
        (0..m)
            .map(|j| {
                let mut z = vec![BigInt::zero(); m];
                z[j] = BigInt::one();
                z
            })
            .collect()
    } else {
        let mut rational_constraints: Vec<Vec<BigRational>> = Vec::new();
        for w in &left_kernel {
            let mut row_a = Vec::with_capacity(m);
            let mut row_b = Vec::with_capacity(m);
            for x in w {
                let (a, b) = x.rational_coordinates();
                row_a.push(a);
                row_b.push(b);
            }
            rational_constraints.push(row_a);
            rational_constraints.push(row_b);
        }
        integer_kernel_of_rational(&rational_constraints, m)
    };
    // pull each lattice direction back through P; solutions differ by
    // ker P, which the canonicalization quotients away
    let mut lambda_coords: Vec<Vec<Scalar>> = Vec::new();
    for z in &z_basis {
        let rhs: Vec<Scalar> = z
            .iter()
            .map(|n| Scalar::from_big_rational(BigRational::from_integer(n.clone())))
            .collect();
        let c = p
            .solve(&rhs)
            .expect("integer vector certified inside the column span");
        lambda_coords.push(c);
    }
    let to_ambient = |coords: &[Scalar]| -> Vec<Scalar> {
        let mut x = vec![Scalar::zero(); ambient_dim];
        for (s, y) in carrier.iter().enumerate() {
            if coords[s].is_zero() {
                continue;
            }
            for i in 0..ambient_dim {
                let add = &coords[s] * &y[i];
                x[i] = &x[i] + &add;
            }
        }
        x
    };
    let v_ambient: Vec<Vec<Scalar>> = v_coords.iter().map(|c| to_ambient(c)).collect();
    let lambda_ambient: Vec<Vec<Scalar>> = lambda_coords.iter().map(|c| to_ambient(c)).collect();
    ClosedSubgroup::canonical(ambient_dim, field, v_ambient, lambda_ambient)
}

/// Basis of { z in Z^m : A z = 0 } for a rational constraint matrix.
fn integer_kernel_of_rational(rows: &[Vec<BigRational>], m: usize) -> Vec<Vec<BigInt>> {
    use crate::linalg::IMat;
    if rows.is_empty() {
        return (0..m)
            .map(|j| {
                let mut z = vec![BigInt::zero(); m];
                z[j] = BigInt::one();
                z
            })
            .collect();
    }
    // scale each row by its own denominator lcm; the kernel is unchanged
    let int_rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let mut lcm = BigInt::one();
            for x in r {
                lcm = num::integer::lcm(lcm, x.denom().clone());
            }
            r.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();
    IMat::from_rows(int_rows).integer_right_kernel()
}

/// The annihilator {ξ : ⟨v, ξ⟩ = 0 for all v in V} inside the algebra.
pub fn annihilator_in_g(v_rows: &[Vec<Scalar>], ambient_dim: usize) -> Vec<Vec<Scalar>> {
    if v_rows.is_empty() {
        return (0..ambient_dim)
            .map(|i| unit_vector(ambient_dim, i))
            .collect();
    }
    FMat::from_rows(v_rows.to_vec()).right_kernel()
}

/// Preimage { u : A u ∈ H } of a closed subgroup under a linear map, as a
/// closed subgroup of the source.
///
/// Membership in H splits into "A u lies in the span of V and Lambda"
/// (linear conditions from the span's annihilator) and "the Lambda
/// coordinates of A u are integers" (integral conditions from the dual
/// basis covectors), which is exactly the mixed constraint shape.
pub fn preimage_of_subgroup(a: &FMat, h: &ClosedSubgroup) -> ClosedSubgroup {
    assert_eq!(a.nrows, h.ambient_dim);
    let source_dim = a.ncols;
    let span_rows: Vec<Vec<Scalar>> = h
        .v_basis
        .iter()
        .chain(h.lambda_basis.iter())
        .cloned()
        .collect();
    let at = a.transpose();
    let mut linear_rows: Vec<Vec<Scalar>> = Vec::new();
    let mut integral_rows: Vec<Vec<Scalar>> = Vec::new();
    if span_rows.is_empty() {
        // H trivial: preimage is the kernel of A
        for q in 0..h.ambient_dim {
            linear_rows.push(at.mul_vec(&unit_vector(h.ambient_dim, q)));
        }
    } else {
        let span = FMat::from_rows(span_rows.clone());
        for q in span.right_kernel() {
            linear_rows.push(at.mul_vec(&q));
        }
        let k = h.v_basis.len();
        for j in 0..h.lambda_basis.len() {
            let mut e = vec![Scalar::zero(); span_rows.len()];
            e[k + j] = Scalar::one();
            let l = span
                .solve(&e)
                .expect("independent rows admit dual covectors");
            integral_rows.push(at.mul_vec(&l));
        }
    }
    solve_mixed_constraints(source_dim, h.field, &linear_rows, &integral_rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldSpec {
        FieldSpec::new(2).unwrap()
    }

    fn sc(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn rt2() -> Scalar {
        Scalar::sqrt_d(f2())
    }

    fn vecs(rows: &[&[Scalar]]) -> Vec<Vec<Scalar>> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    /// Generators of the momentum period group of the four-torus model.
    fn t4_holonomy() -> GeneratedSubgroup {
        GeneratedSubgroup::new(
            4,
            f2(),
            vecs(&[
                &[sc(1), sc(0), sc(0), sc(0)],
                &[rt2(), sc(0), sc(0), sc(0)],
                &[sc(0), sc(0), sc(1), rt2()],
            ]),
        )
    }

    #[test]
    fn t4_closure_line_plus_lattice() {
        let h = t4_holonomy().closure();
        assert_eq!(h.dim_v(), 1);
        assert_eq!(h.rank_lambda(), 1);
        assert_eq!(h.v_basis[0], vec![sc(1), sc(0), sc(0), sc(0)]);
        assert_eq!(h.lambda_basis[0], vec![sc(0), sc(0), sc(1), rt2()]);
    }

    #[test]
    fn dense_line_closure() {
        let g = GeneratedSubgroup::new(1, f2(), vecs(&[&[sc(1)], &[rt2()]]));
        assert!(!g.discreteness_test());
        let h = g.closure();
        assert_eq!(h.dim_v(), 1);
        assert_eq!(h.rank_lambda(), 0);
    }

    #[test]
    fn plain_lattice_closure() {
        let g = GeneratedSubgroup::new(
            2,
            f2(),
            vecs(&[&[sc(1), sc(0)], &[sc(0), sc(1)]]),
        );
        assert!(g.discreteness_test());
        let h = g.closure();
        assert_eq!(h.dim_v(), 0);
        assert_eq!(
            h.lambda_basis,
            vecs(&[&[sc(1), sc(0)], &[sc(0), sc(1)]])
        );
    }

    #[test]
    fn dual_of_integer_lattice_is_itself() {
        let g = GeneratedSubgroup::new(
            2,
            f2(),
            vecs(&[&[sc(1), sc(0)], &[sc(0), sc(1)]]),
        );
        let d = g.annihilator_dual();
        assert_eq!(d.dim_v(), 0);
        assert_eq!(
            d.lambda_basis,
            vecs(&[&[sc(1), sc(0)], &[sc(0), sc(1)]])
        );
    }

    #[test]
    fn dual_of_line_is_orthogonal_line() {
        let h = ClosedSubgroup::canonical(2, f2(), vecs(&[&[sc(1), sc(0)]]), Vec::new());
        let d = h.annihilator_dual();
        assert_eq!(d.dim_v(), 1);
        assert_eq!(d.v_basis[0], vec![sc(0), sc(1)]);
        assert_eq!(d.rank_lambda(), 0);
    }

    #[test]
    fn bidual_of_dense_generators_is_full_line() {
        let g = GeneratedSubgroup::new(1, f2(), vecs(&[&[sc(1)], &[rt2()]]));
        let d = g.annihilator_dual();
        assert_eq!(d.dim_v(), 0);
        assert_eq!(d.rank_lambda(), 0);
        let dd = d.annihilator_dual();
        assert_eq!(dd.dim_v(), 1);
    }

    #[test]
    fn closure_matches_bidual_on_t4() {
        let g = t4_holonomy();
        let via_bidual = g.annihilator_dual().annihilator_dual();
        assert_eq!(g.closure(), via_bidual);
    }

    #[test]
    fn closure_idempotent() {
        let h = t4_holonomy().closure();
        assert_eq!(h.reclose(), h);
    }

    #[test]
    fn membership_discriminates() {
        let h = t4_holonomy().closure();
        // anything on the first axis is inside
        assert!(h.contains(&[Scalar::rational(7, 3), sc(0), sc(0), sc(0)]));
        // one lattice step plus a slide along the line
        assert!(h.contains(&[rt2(), sc(0), sc(2), &sc(2) * &rt2()]));
        // breaking the sqrt(2) ratio in the lattice coordinates leaves
        assert!(!h.contains(&[sc(0), sc(0), sc(1), sc(1)]));
        assert!(!h.contains(&[sc(0), sc(1), sc(0), sc(0)]));
    }

    #[test]
    fn canonical_bases_equal_for_equal_subgroups() {
        // same subgroup of R^2 generated two ways: Z x Z(sqrt2)
        let g1 = GeneratedSubgroup::new(
            2,
            f2(),
            vecs(&[&[sc(1), sc(0)], &[sc(0), rt2()]]),
        );
        let g2 = GeneratedSubgroup::new(
            2,
            f2(),
            vecs(&[&[sc(1), rt2()], &[sc(1), sc(0)], &[sc(3), rt2()]]),
        );
        assert_eq!(g1.closure(), g2.closure());
    }

    #[test]
    fn monotone_under_extra_generators() {
        let g = t4_holonomy();
        let mut more = g.generators.clone();
        more.push(vec![sc(0), sc(0), sc(3), &sc(3) * &rt2()]);
        let bigger = GeneratedSubgroup::new(4, f2(), more).closure();
        assert!(bigger.contains_subgroup(&g.closure()));
        assert_eq!(bigger, g.closure());
    }

    #[test]
    fn annihilator_in_g_of_line() {
        let n = annihilator_in_g(&vecs(&[&[sc(1), sc(0), sc(0), sc(0)]]), 4);
        assert_eq!(n.len(), 3);
        for v in &n {
            assert!(v[0].is_zero());
        }
    }

    #[test]
    fn preimage_pulls_back_lattice() {
        // A = diag(2): preimage of Z^1 is (1/2)Z
        let a = FMat::from_rows(vecs(&[&[sc(2)]]));
        let h = ClosedSubgroup::canonical(1, f2(), Vec::new(), vecs(&[&[sc(1)]]));
        let pre = preimage_of_subgroup(&a, &h);
        assert_eq!(pre.dim_v(), 0);
        assert_eq!(pre.lambda_basis, vecs(&[&[Scalar::rational(1, 2)]]));
    }

    #[test]
    fn preimage_of_trivial_is_kernel() {
        let a = FMat::from_rows(vecs(&[&[sc(1), sc(0)]]));
        let h = ClosedSubgroup::trivial(1, f2());
        let pre = preimage_of_subgroup(&a, &h);
        assert_eq!(pre.dim_v(), 1);
        assert_eq!(pre.v_basis[0], vec![sc(0), sc(1)]);
        assert_eq!(pre.rank_lambda(), 0);
    }

    #[test]
    fn preimage_mixed_line_and_lattice() {
        // A = identity on R^4, H = the T4 closure: preimage is H itself
        let a = FMat::identity(4);
        let h = t4_holonomy().closure();
        assert_eq!(preimage_of_subgroup(&a, &h), h);
    }
}
