//! Lie algebras by structure constants, two-cocycles, and the
//! one-dimensional central extension they generate.
//!
//! The central objects: an algebra g with exact structure constants, an
//! antisymmetric two-cocycle Sigma on it, the extended algebra
//! g_Sigma = g + R with bracket [(x,s),(y,t)] = ([x,y], -Sigma(x,y)), and
//! for Abelian base groups the extension group G_Sigma, a two-step
//! nilpotent (Heisenberg-type) group on pairs (u, a) with multiplication
//! (u,a)(v,b) = (u+v, a+b - Sigma(u,v)/2).
//!
//! Group-level operations (multiplication, the extension cocycle mu_Sigma,
//! the adjoint, the extended affine action on covectors) are implemented in
//! closed form for Abelian bases only, where the series defining them
//! truncate; that restriction is enforced by construction, since the group
//! type carries an Abelian base. Algebra-level operations are general.

use crate::linalg::FMat;
use crate::scalar::Scalar;

#[derive(Debug, Clone, thiserror::Error)]
pub enum LieError {
    #[error("structure constants are not antisymmetric at ({0},{1})")]
    NotAntisymmetric(usize, usize),
    #[error("Jacobi identity fails on basis triple ({0},{1},{2})")]
    Jacobi(usize, usize, usize),
    #[error("cocycle matrix is not antisymmetric")]
    CocycleNotAntisymmetric,
    #[error("cocycle identity fails on basis triple ({0},{1},{2})")]
    CocycleIdentity(usize, usize, usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

/// A finite-dimensional real Lie algebra with exact structure constants,
/// c[i][j][k] the e_k coefficient of [e_i, e_j].
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    pub dim: usize,
    structure_constants: Vec<Vec<Vec<Scalar>>>,
}

impl LieAlgebra {
    /// Validates antisymmetry and the Jacobi identity exactly.
    pub fn new(dim: usize, c: Vec<Vec<Vec<Scalar>>>) -> Result<Self, LieError> {
        assert_eq!(c.len(), dim);
        for row in &c {
            assert_eq!(row.len(), dim);
            for entry in row {
                assert_eq!(entry.len(), dim);
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let sum = &c[i][j][k] + &c[j][i][k];
                    if !sum.is_zero() {
                        return Err(LieError::NotAntisymmetric(i, j));
                    }
                }
            }
        }
        let alg = LieAlgebra {
            dim,
            structure_constants: c,
        };
        for i in 0..dim {
            for j in (i + 1)..dim {
                for k in (j + 1)..dim {
                    let ei = basis_vec(dim, i);
                    let ej = basis_vec(dim, j);
                    let ek = basis_vec(dim, k);
                    let mut total = vec![Scalar::zero(); dim];
                    for (x, y, z) in [(&ei, &ej, &ek), (&ej, &ek, &ei), (&ek, &ei, &ej)] {
                        let inner = alg.bracket(x, y);
                        let outer = alg.bracket(&inner, z);
                        for m in 0..dim {
                            total[m] = &total[m] + &outer[m];
                        }
                    }
                    if total.iter().any(|t| !t.is_zero()) {
                        return Err(LieError::Jacobi(i, j, k));
                    }
                }
            }
        }
        Ok(alg)
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            structure_constants: vec![vec![vec![Scalar::zero(); dim]; dim]; dim],
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.structure_constants
            .iter()
            .flatten()
            .flatten()
            .all(|c| c.is_zero())
    }

    /// [x, y] through the structure constants; exact and bilinear.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.dim, "bracket operand dimension");
        assert_eq!(y.len(), self.dim, "bracket operand dimension");
        let mut out = vec![Scalar::zero(); self.dim];
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                let factor = &x[i] * &y[j];
                for k in 0..self.dim {
                    let c = &self.structure_constants[i][j][k];
                    if c.is_zero() {
                        continue;
                    }
                    let add = &factor * c;
                    out[k] = &out[k] + &add;
                }
            }
        }
        out
    }
}

fn basis_vec(dim: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); dim];
    v[i] = Scalar::one();
    v
}

/// Antisymmetric bilinear form Sigma(x, y) = x^T sigma y satisfying the
/// cocycle identity against a given algebra.
#[derive(Debug, Clone)]
pub struct TwoCocycle {
    pub dim: usize,
    sigma: FMat,
}

impl TwoCocycle {
    pub fn new(algebra: &LieAlgebra, sigma: FMat) -> Result<Self, LieError> {
        let n = algebra.dim;
        if sigma.nrows != n || sigma.ncols != n {
            return Err(LieError::Dimension {
                expected: n,
                got: sigma.nrows,
            });
        }
        for i in 0..n {
            for j in 0..n {
                let sum = sigma.at(i, j) + sigma.at(j, i);
                if !sum.is_zero() {
                    return Err(LieError::CocycleNotAntisymmetric);
                }
            }
        }
        let cocycle = TwoCocycle { dim: n, sigma };
        // Sigma([ei,ej], ek) + Sigma([ej,ek], ei) + Sigma([ek,ei], ej) = 0
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let ei = basis_vec(n, i);
                    let ej = basis_vec(n, j);
                    let ek = basis_vec(n, k);
                    let mut total = Scalar::zero();
                    for (x, y, z) in [(&ei, &ej, &ek), (&ej, &ek, &ei), (&ek, &ei, &ej)] {
                        let br = algebra.bracket(x, y);
                        total += &cocycle.eval(&br, z);
                    }
                    if !total.is_zero() {
                        return Err(LieError::CocycleIdentity(i, j, k));
                    }
                }
            }
        }
        Ok(cocycle)
    }

    pub fn zero(dim: usize) -> Self {
        TwoCocycle {
            dim,
            sigma: FMat::zeros(dim, dim),
        }
    }

    pub fn eval(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let sy = self.sigma.mul_vec(y);
        let mut acc = Scalar::zero();
        for i in 0..self.dim {
            acc += &(&x[i] * &sy[i]);
        }
        acc
    }

    /// The covector Sigma(., u): its i-th component is Sigma(e_i, u).
    pub fn pairing_covector(&self, u: &[Scalar]) -> Vec<Scalar> {
        self.sigma.mul_vec(u)
    }

    pub fn matrix(&self) -> &FMat {
        &self.sigma
    }

    pub fn is_zero(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.sigma.at(i, j).is_zero()))
    }

    /// Rank of the form, the dimension of its coadjoint-type orbits.
    pub fn rank(&self) -> usize {
        self.sigma.rank()
    }

    /// Kernel {u : Sigma(., u) = 0}.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        self.sigma.right_kernel()
    }
}

/// The extension g_Sigma = g + R with [(x,s),(y,t)] = ([x,y], -Sigma(x,y)).
pub fn central_extension(algebra: &LieAlgebra, cocycle: &TwoCocycle) -> LieAlgebra {
    let n = algebra.dim;
    assert_eq!(cocycle.dim, n);
    let mut c = vec![vec![vec![Scalar::zero(); n + 1]; n + 1]; n + 1];
    for i in 0..n {
        for j in 0..n {
            let br = algebra.bracket(&basis_vec(n, i), &basis_vec(n, j));
            for k in 0..n {
                c[i][j][k] = br[k].clone();
            }
            c[i][j][n] = -cocycle.eval(&basis_vec(n, i), &basis_vec(n, j));
        }
    }
    LieAlgebra::new(n + 1, c).expect("central extension preserves Jacobi")
}

/// G = T^a x R^b with exp(u) = (angles of the first a coordinates, the
/// rest verbatim); algebra coordinates double as covering coordinates for
/// group elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AbelianGroup {
    pub torus_rank: usize,
    pub line_rank: usize,
}

impl AbelianGroup {
    pub fn dim(&self) -> usize {
        self.torus_rank + self.line_rank
    }

    /// Basis of ker exp: the first `torus_rank` standard basis vectors.
    pub fn kernel_lattice(&self) -> Vec<Vec<Scalar>> {
        (0..self.torus_rank)
            .map(|i| basis_vec(self.dim(), i))
            .collect()
    }

    /// Whether two covering coordinates name the same group element.
    pub fn same_element(&self, u: &[Scalar], v: &[Scalar]) -> bool {
        assert_eq!(u.len(), self.dim());
        assert_eq!(v.len(), self.dim());
        for i in 0..self.dim() {
            let diff = &u[i] - &v[i];
            if i < self.torus_rank {
                if !diff.is_integer() {
                    return false;
                }
            } else if !diff.is_zero() {
                return false;
            }
        }
        true
    }
}

/// An element (u, a) of the extension group, in covering coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtElement {
    pub u: Vec<Scalar>,
    pub a: Scalar,
}

impl ExtElement {
    pub fn new(u: Vec<Scalar>, a: Scalar) -> Self {
        ExtElement { u, a }
    }

    pub fn base_only(u: Vec<Scalar>) -> Self {
        ExtElement {
            u,
            a: Scalar::zero(),
        }
    }
}

/// The Heisenberg-type central extension group over an Abelian base.
#[derive(Debug, Clone)]
pub struct CentralExtensionGroup {
    pub base: AbelianGroup,
    pub cocycle: TwoCocycle,
}

impl CentralExtensionGroup {
    pub fn new(base: AbelianGroup, cocycle: TwoCocycle) -> Self {
        assert_eq!(cocycle.dim, base.dim());
        CentralExtensionGroup { base, cocycle }
    }

    pub fn identity(&self) -> ExtElement {
        ExtElement {
            u: vec![Scalar::zero(); self.base.dim()],
            a: Scalar::zero(),
        }
    }

    /// (u,a)(v,b) = (u+v, a+b - Sigma(u,v)/2); associative because Sigma is
    /// antisymmetric and the base is Abelian.
    pub fn multiply(&self, x: &ExtElement, y: &ExtElement) -> ExtElement {
        let u: Vec<Scalar> = x.u.iter().zip(&y.u).map(|(p, q)| p + q).collect();
        let half = Scalar::rational(1, 2);
        let twist = &half * &self.cocycle.eval(&x.u, &y.u);
        ExtElement {
            u,
            a: &(&x.a + &y.a) - &twist,
        }
    }

    pub fn inverse(&self, x: &ExtElement) -> ExtElement {
        ExtElement {
            u: x.u.iter().map(|p| -p).collect(),
            a: -x.a.clone(),
        }
    }

    /// The extension one-cocycle mu_Sigma(u, a) = Sigma(., u), a covector
    /// on the base algebra. A homomorphism into the dual because the base
    /// is Abelian.
    pub fn mu_sigma(&self, g: &ExtElement) -> Vec<Scalar> {
        self.cocycle.pairing_covector(&g.u)
    }

    /// Adjoint action Ad_(u,a)(x, s) = (x, s - Sigma(u, x)).
    pub fn ad_ext(&self, g: &ExtElement, x: &[Scalar], s: &Scalar) -> (Vec<Scalar>, Scalar) {
        assert_eq!(x.len(), self.base.dim());
        let twist = self.cocycle.eval(&g.u, x);
        (x.to_vec(), s - &twist)
    }

    /// Affine action on covectors of the base algebra:
    /// mu goes to mu + mu_Sigma(g^{-1}) = mu - Sigma(., u).
    pub fn extended_affine_action(&self, g: &ExtElement, mu: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(mu.len(), self.base.dim());
        let shift = self.mu_sigma(g);
        mu.iter().zip(&shift).map(|(m, s)| m - s).collect()
    }

    /// Derivative of mu_Sigma at the identity in direction (x, s), which
    /// must equal -Sigma(x, .); used as a convention cross-check.
    pub fn mu_sigma_derivative(&self, x: &[Scalar]) -> Vec<Scalar> {
        // -Sigma(x, .) = Sigma(., x) by antisymmetry, itself mu_Sigma of
        // the direction read as an element
        self.cocycle.pairing_covector(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldSpec;

    fn f2() -> FieldSpec {
        FieldSpec::new(2).unwrap()
    }

    fn sc(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn rt2() -> Scalar {
        Scalar::sqrt_d(f2())
    }

    /// The magnetic term of the four-torus model: rows
    /// (0,0,-1,-sqrt2), (0,0,0,0), (1,0,0,0), (sqrt2,0,0,0).
    pub(crate) fn t4_sigma_matrix() -> FMat {
        FMat::from_rows(vec![
            vec![sc(0), sc(0), sc(-1), -rt2()],
            vec![sc(0), sc(0), sc(0), sc(0)],
            vec![sc(1), sc(0), sc(0), sc(0)],
            vec![rt2(), sc(0), sc(0), sc(0)],
        ])
    }

    fn t4_setup() -> (LieAlgebra, TwoCocycle) {
        let g = LieAlgebra::abelian(4);
        let sigma = TwoCocycle::new(&g, t4_sigma_matrix()).unwrap();
        (g, sigma)
    }

    #[test]
    fn abelian_bracket_vanishes() {
        let g = LieAlgebra::abelian(4);
        let b = g.bracket(&basis_vec(4, 0), &basis_vec(4, 1));
        assert!(b.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn extension_bracket_drops_into_center() {
        let (g, sigma) = t4_setup();
        let ext = central_extension(&g, &sigma);
        assert_eq!(ext.dim, 5);
        // [(e1,0),(e3,0)] = (0, -Sigma(e1,e3)) = (0, 1)
        let b = ext.bracket(&basis_vec(5, 0), &basis_vec(5, 2));
        assert_eq!(b, vec![sc(0), sc(0), sc(0), sc(0), sc(1)]);
        // the center really is central
        let center = basis_vec(5, 4);
        for i in 0..5 {
            let c = ext.bracket(&center, &basis_vec(5, i));
            assert!(c.iter().all(|x| x.is_zero()));
        }
        // derived algebra inside the center direction for Abelian base
        for i in 0..4 {
            for j in 0..4 {
                let b = ext.bracket(&basis_vec(5, i), &basis_vec(5, j));
                assert!(b[..4].iter().all(|x| x.is_zero()));
            }
        }
    }

    #[test]
    fn zero_cocycle_gives_direct_sum() {
        let g = LieAlgebra::abelian(3);
        let ext = central_extension(&g, &TwoCocycle::zero(3));
        assert!(ext.is_abelian());
    }

    #[test]
    fn cocycle_rejects_symmetric_matrix() {
        let g = LieAlgebra::abelian(2);
        let bad = FMat::from_rows(vec![vec![sc(0), sc(1)], vec![sc(1), sc(0)]]);
        assert!(TwoCocycle::new(&g, bad).is_err());
    }

    #[test]
    fn mu_sigma_columns_match_pairings() {
        let (_, sigma) = t4_setup();
        let group = CentralExtensionGroup::new(
            AbelianGroup {
                torus_rank: 4,
                line_rank: 0,
            },
            sigma,
        );
        let e1 = ExtElement::base_only(basis_vec(4, 0));
        assert_eq!(group.mu_sigma(&e1), vec![sc(0), sc(0), sc(1), rt2()]);
        let e2 = ExtElement::base_only(basis_vec(4, 1));
        assert!(group.mu_sigma(&e2).iter().all(|x| x.is_zero()));
        let e3 = ExtElement::base_only(basis_vec(4, 2));
        assert_eq!(group.mu_sigma(&e3), vec![sc(-1), sc(0), sc(0), sc(0)]);
        let e4 = ExtElement::base_only(basis_vec(4, 3));
        assert_eq!(group.mu_sigma(&e4), vec![-rt2(), sc(0), sc(0), sc(0)]);
        // central elements map to zero
        let central = ExtElement::new(vec![sc(0); 4], sc(7));
        assert!(group.mu_sigma(&central).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn mu_sigma_homomorphism_and_derivative_conventions_agree() {
        let (_, sigma) = t4_setup();
        let group = CentralExtensionGroup::new(
            AbelianGroup {
                torus_rank: 4,
                line_rank: 0,
            },
            sigma,
        );
        let x = ExtElement::new(vec![sc(1), sc(2), rt2(), sc(0)], sc(3));
        let y = ExtElement::new(vec![rt2(), sc(-1), sc(1), Scalar::rational(1, 2)], sc(0));
        let xy = group.multiply(&x, &y);
        let lhs = group.mu_sigma(&xy);
        let rhs: Vec<Scalar> = group
            .mu_sigma(&x)
            .iter()
            .zip(&group.mu_sigma(&y))
            .map(|(a, b)| a + b)
            .collect();
        assert_eq!(lhs, rhs);
        assert_eq!(
            group.mu_sigma(&group.inverse(&x)),
            group.mu_sigma(&x).iter().map(|v| -v).collect::<Vec<_>>()
        );
        // the derivative form -Sigma(x, .) equals the closed form Sigma(., x)
        let dir = vec![sc(1), sc(0), sc(2), rt2()];
        let derivative = group.mu_sigma_derivative(&dir);
        let closed = group.mu_sigma(&ExtElement::base_only(dir.clone()));
        assert_eq!(derivative, closed);
        let minus_row: Vec<Scalar> = (0..4)
            .map(|i| -group.cocycle.eval(&dir, &basis_vec(4, i)))
            .collect();
        assert_eq!(derivative, minus_row);
    }

    #[test]
    fn adjoint_matches_closed_form() {
        let (_, sigma) = t4_setup();
        let group = CentralExtensionGroup::new(
            AbelianGroup {
                torus_rank: 4,
                line_rank: 0,
            },
            sigma,
        );
        let g = ExtElement::base_only(basis_vec(4, 0));
        let (x, s) = group.ad_ext(&g, &basis_vec(4, 2), &sc(0));
        assert_eq!(x, basis_vec(4, 2));
        assert_eq!(s, sc(1));
        // central elements act trivially
        let central = ExtElement::new(vec![sc(0); 4], sc(5));
        let (x2, s2) = group.ad_ext(&central, &basis_vec(4, 2), &rt2());
        assert_eq!(x2, basis_vec(4, 2));
        assert_eq!(s2, rt2());
        // Ad_g then Ad_{g inverse} is the identity
        let g2 = ExtElement::new(vec![rt2(), sc(1), sc(0), sc(2)], sc(1));
        let (y, t) = group.ad_ext(&g2, &basis_vec(4, 3), &Scalar::rational(1, 3));
        let (y2, t2) = group.ad_ext(&group.inverse(&g2), &y, &t);
        assert_eq!(y2, basis_vec(4, 3));
        assert_eq!(t2, Scalar::rational(1, 3));
        // consistency between the adjoint and the group law:
        // Ad_g(x) = g (x,s) g^{-1} computed through multiply on the
        // exponential of small algebra elements is linear here, so compare
        // against conjugation of (x, s) read as an element
        let conj = group.multiply(&group.multiply(&g2, &ExtElement::new(basis_vec(4, 3), Scalar::rational(1, 3))), &group.inverse(&g2));
        assert_eq!(conj.u, y);
        assert_eq!(conj.a, t);
    }

    #[test]
    fn affine_action_is_an_action() {
        let (_, sigma) = t4_setup();
        let group = CentralExtensionGroup::new(
            AbelianGroup {
                torus_rank: 4,
                line_rank: 0,
            },
            sigma,
        );
        // the displayed value: acting with e3 on zero gives (1,0,0,0)
        let e3 = ExtElement::base_only(basis_vec(4, 2));
        let moved = group.extended_affine_action(&e3, &[sc(0), sc(0), sc(0), sc(0)]);
        assert_eq!(moved, vec![sc(1), sc(0), sc(0), sc(0)]);
        // central elements act trivially
        let central = ExtElement::new(vec![sc(0); 4], rt2());
        let mu = vec![sc(1), rt2(), sc(0), Scalar::rational(2, 7)];
        assert_eq!(group.extended_affine_action(&central, &mu), mu);
        // left action property on a sample triple
        let g = ExtElement::new(vec![sc(1), sc(0), rt2(), sc(2)], sc(0));
        let h = ExtElement::new(vec![sc(0), sc(3), sc(1), -rt2()], sc(2));
        let gh = group.multiply(&g, &h);
        let one_step = group.extended_affine_action(&gh, &mu);
        let two_step =
            group.extended_affine_action(&g, &group.extended_affine_action(&h, &mu));
        assert_eq!(one_step, two_step);
    }

    #[test]
    fn kernel_lattice_convention() {
        let g = AbelianGroup {
            torus_rank: 2,
            line_rank: 1,
        };
        let k = g.kernel_lattice();
        assert_eq!(k.len(), 2);
        assert_eq!(k[0], vec![sc(1), sc(0), sc(0)]);
        assert_eq!(k[1], vec![sc(0), sc(1), sc(0)]);
        assert!(g.same_element(
            &[Scalar::rational(1, 2), sc(0), sc(1)],
            &[Scalar::rational(5, 2), sc(3), sc(1)]
        ));
        assert!(!g.same_element(
            &[sc(0), sc(0), sc(0)],
            &[sc(0), sc(0), sc(1)]
        ));
    }
}
