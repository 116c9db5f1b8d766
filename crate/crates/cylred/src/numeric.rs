//! Shared numeric kernels: fixed-step RK4, central-difference Jacobians
//! that unwrap angular outputs, and principal angles between subspaces.
//!
//! These are the only places where the crate leaves field arithmetic; every
//! exact structure has a float shadow checked against these routines.

use nalgebra::DMatrix;

/// Classical RK4 over [t0, t1] with a fixed grid, returning the full
/// trajectory (steps + 1 points including the start).
pub fn rk4_path<F>(f: F, y0: &[f64], t0: f64, t1: f64, steps: usize) -> Vec<Vec<f64>>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    assert!(steps >= 2, "need at least two integration steps");
    let h = (t1 - t0) / steps as f64;
    let mut out = Vec::with_capacity(steps + 1);
    let mut y = y0.to_vec();
    out.push(y.clone());
    for k in 0..steps {
        let t = t0 + k as f64 * h;
        step_in_place(&f, t, h, &mut y);
        out.push(y.clone());
    }
    out
}

/// RK4 endpoint only.
pub fn rk4_final<F>(f: F, y0: &[f64], t0: f64, t1: f64, steps: usize) -> Vec<f64>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    assert!(steps >= 2, "need at least two integration steps");
    let h = (t1 - t0) / steps as f64;
    let mut y = y0.to_vec();
    for k in 0..steps {
        let t = t0 + k as f64 * h;
        step_in_place(&f, t, h, &mut y);
    }
    y
}

fn step_in_place<F>(f: &F, t: f64, h: f64, y: &mut [f64])
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    let k1 = f(t, y);
    let y2: Vec<f64> = y.iter().zip(&k1).map(|(a, b)| a + 0.5 * h * b).collect();
    let k2 = f(t + 0.5 * h, &y2);
    let y3: Vec<f64> = y.iter().zip(&k2).map(|(a, b)| a + 0.5 * h * b).collect();
    let k3 = f(t + 0.5 * h, &y3);
    let y4: Vec<f64> = y.iter().zip(&k3).map(|(a, b)| a + h * b).collect();
    let k4 = f(t + h, &y4);
    for i in 0..y.len() {
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

/// Representative of `d` modulo 1 closest to zero, for differences of
/// angular coordinates across the seam.
pub fn unwrap_delta(d: f64) -> f64 {
    d - d.round()
}

/// Central-difference Jacobian of `f` at `m`. Output coordinates flagged
/// in `output_periodic` are treated as angles of period one, so a seam
/// crossing between the two probes does not fake an O(1/step) entry.
pub fn fd_jacobian<F>(f: F, m: &[f64], step: f64, output_periodic: &[bool]) -> DMatrix<f64>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let probe = f(m);
    let rows = probe.len();
    assert_eq!(rows, output_periodic.len());
    let mut jac = DMatrix::zeros(rows, m.len());
    for j in 0..m.len() {
        let mut hi = m.to_vec();
        let mut lo = m.to_vec();
        hi[j] += step;
        lo[j] -= step;
        let fh = f(&hi);
        let fl = f(&lo);
        for i in 0..rows {
            let mut d = fh[i] - fl[i];
            if output_periodic[i] {
                d = unwrap_delta(d);
            }
            jac[(i, j)] = d / (2.0 * step);
        }
    }
    jac
}

/// Orthonormal basis of the column span, for full-column-rank input.
pub fn orthonormal_columns(a: &DMatrix<f64>) -> DMatrix<f64> {
    let k = a.ncols();
    let qr = a.clone().qr();
    let q = qr.q();
    q.columns(0, k.min(q.ncols())).into_owned()
}

/// Largest principal angle (radians) between the column spans of two
/// full-column-rank matrices of the same shape. Zero columns spans agree
/// by convention.
pub fn max_principal_angle(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    assert_eq!(a.nrows(), b.nrows(), "ambient dimensions differ");
    assert_eq!(a.ncols(), b.ncols(), "subspace dimensions differ");
    if a.ncols() == 0 {
        return 0.0;
    }
    let qa = orthonormal_columns(a);
    let qb = orthonormal_columns(b);
    let m = qa.transpose() * qb;
    let svd = m.svd(false, false);
    let smin = svd
        .singular_values
        .iter()
        .fold(f64::INFINITY, |acc, &v| acc.min(v));
    smin.clamp(-1.0, 1.0).acos()
}

/// Columns-from-vectors helper for principal-angle comparisons.
pub fn columns_from(vectors: &[Vec<f64>]) -> DMatrix<f64> {
    if vectors.is_empty() {
        return DMatrix::zeros(0, 0);
    }
    let n = vectors[0].len();
    DMatrix::from_fn(n, vectors.len(), |i, j| vectors[j][i])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rk4_exponential_accuracy_and_order() {
        let f = |_t: f64, y: &[f64]| vec![y[0]];
        let e1 = (rk4_final(f, &[1.0], 0.0, 1.0, 50)[0] - std::f64::consts::E).abs();
        let e2 = (rk4_final(f, &[1.0], 0.0, 1.0, 100)[0] - std::f64::consts::E).abs();
        assert!(e2 < 1e-9);
        let ratio = e1 / e2;
        assert!((12.0..22.0).contains(&ratio), "order-4 ratio {ratio}");
    }

    #[test]
    fn rk4_path_endpoints() {
        let f = |t: f64, _y: &[f64]| vec![2.0 * t];
        let path = rk4_path(f, &[0.0], 0.0, 1.0, 10);
        assert_eq!(path.len(), 11);
        assert!((path[10][0] - 1.0).abs() < 1e-12);
        assert!((path[5][0] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn jacobian_of_linear_map() {
        let f = |m: &[f64]| vec![2.0 * m[0] - m[1], m[0] + 3.0 * m[1]];
        let j = fd_jacobian(f, &[0.3, -0.7], 1e-6, &[false, false]);
        let expect = [[2.0, -1.0], [1.0, 3.0]];
        for i in 0..2 {
            for k in 0..2 {
                assert!((j[(i, k)] - expect[i][k]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn jacobian_unwraps_seam() {
        // identity map into an angle, probed right at the wrap point
        let f = |m: &[f64]| vec![m[0].rem_euclid(1.0)];
        let j = fd_jacobian(&f, &[1.0], 1e-6, &[true]);
        assert!((j[(0, 0)] - 1.0).abs() < 1e-6);
        // without unwrapping the same probe is catastrophically wrong
        let bad = fd_jacobian(&f, &[1.0], 1e-6, &[false]);
        assert!(bad[(0, 0)].abs() > 1e4);
    }

    #[test]
    fn principal_angle_known_rotation() {
        let a = columns_from(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]);
        let theta: f64 = 0.3;
        let b = columns_from(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, theta.cos(), theta.sin()],
        ]);
        let ang = max_principal_angle(&a, &b);
        assert!((ang - theta).abs() < 1e-12, "{ang} vs {theta}");
        assert!(max_principal_angle(&a, &a) < 1e-9);
    }

    #[test]
    fn principal_angle_basis_invariance() {
        let a = columns_from(&[vec![1.0, 0.0, 1.0], vec![0.0, 1.0, -2.0]]);
        // same span, different basis
        let b = columns_from(&[vec![1.0, 1.0, -1.0], vec![2.0, -1.0, 4.0]]);
        assert!(max_principal_angle(&a, &b) < 1e-9);
    }
}
