use super::sparse::{dot, norm, CsrMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgOutcome {
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Jacobi-preconditioned conjugate gradients from a zero initial guess.
///
/// Convergence is declared on the true residual `‖b - Ax‖ ≤ rel_tol ‖b‖`;
/// when the recurrence claims convergence but the true residual disagrees
/// the iteration restarts from the current iterate.
pub fn pcg(a: &CsrMatrix, b: &[f64], rel_tol: f64, max_iterations: usize) -> Result<(Vec<f64>, CgOutcome)> {
    let n = a.n();
    let mut x = vec![0.0; n];
    let b_norm = norm(b);
    if b_norm == 0.0 {
        return Ok((x, CgOutcome { iterations: 0, relative_residual: 0.0 }));
    }
    let inv_diag: Vec<f64> = a
        .diagonal()
        .into_iter()
        .map(|d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let precondition = |r: &[f64]| -> Vec<f64> { r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect() };

    let mut r = b.to_vec();
    let mut z = precondition(&r);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut q = vec![0.0; n];
    let target = rel_tol * b_norm;
    let mut rel = 1.0;

    for k in 0..max_iterations {
        a.matvec_into(&p, &mut q);
        let pq = dot(&p, &q);
        if !(pq > 0.0) {
            return Err(Error::NotConverged { iterations: k, residual: rel });
        }
        let alpha = rz / pq;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        if norm(&r) <= target {
            let ax = a.matvec(&x);
            r = b.iter().zip(&ax).map(|(b, ax)| b - ax).collect();
            rel = norm(&r) / b_norm;
            if rel <= rel_tol {
                return Ok((x, CgOutcome { iterations: k + 1, relative_residual: rel }));
            }
            z = precondition(&r);
            p.copy_from_slice(&z);
            rz = dot(&r, &z);
            continue;
        }
        z = precondition(&r);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let ax = a.matvec(&x);
    let r: Vec<f64> = b.iter().zip(&ax).map(|(b, ax)| b - ax).collect();
    Err(Error::NotConverged {
        iterations: max_iterations,
        residual: norm(&r) / b_norm,
    })
}
