//! Smallest eigenvalue of the stencil pencil `K v = μ M v`.
//!
//! Inverse power iteration with zero shift (`K` is positive definite);
//! the inner solves use Jacobi-preconditioned conjugate gradients on
//! `K`, matrix-free. All dot products reduce through a fixed pairwise
//! tree whose shape depends only on the vector length, so results do
//! not depend on how the work is scheduled.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use crate::fmath::F64Math;
use super::mask::StencilOperator;
use super::SpectralError;

/// Relative residual target for the inner CG solves.
const CG_TOL: f64 = 1e-10;
const CG_MAX_ITERS: usize = 200_000;
const POWER_MAX_ITERS: usize = 500;

/// Pairwise(-tree) sum: sequential within 128-element blocks, then a
/// recursive pairwise reduction over block sums. The reduction shape is
/// a function of `n` alone.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 128;
    fn reduce(sums: &[f64]) -> f64 {
        match sums.len() {
            0 => 0.0,
            1 => sums[0],
            n => {
                let mid = n / 2;
                reduce(&sums[..mid]) + reduce(&sums[mid..])
            }
        }
    }
    if xs.len() <= BLOCK {
        return xs.iter().sum();
    }
    let sums: Vec<f64> = xs.chunks(BLOCK).map(|c| c.iter().sum::<f64>()).collect();
    reduce(&sums)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    const BLOCK: usize = 128;
    fn reduce(sums: &[f64]) -> f64 {
        match sums.len() {
            0 => 0.0,
            1 => sums[0],
            n => {
                let mid = n / 2;
                reduce(&sums[..mid]) + reduce(&sums[mid..])
            }
        }
    }
    if a.len() <= BLOCK {
        return a.iter().zip(b).map(|(x, y)| x * y).sum();
    }
    let sums: Vec<f64> = a
        .chunks(BLOCK)
        .zip(b.chunks(BLOCK))
        .map(|(ca, cb)| ca.iter().zip(cb).map(|(x, y)| x * y).sum::<f64>())
        .collect();
    reduce(&sums)
}

/// Solve `K x = b` by Jacobi-preconditioned CG, starting from `x0`.
fn cg_solve(
    op: &StencilOperator,
    b: &[f64],
    x: &mut [f64],
    scratch: &mut CgScratch,
) -> Result<(), SpectralError> {
    let n = op.n;
    let CgScratch { r, z, p, ap } = scratch;
    op.apply(x, ap);
    for k in 0..n {
        r[k] = b[k] - ap[k];
    }
    let b_norm = dot(b, b).sqrt().max(f64::MIN_POSITIVE);
    let diag: &[f64] = op.diagonal();
    for k in 0..n {
        z[k] = r[k] / diag[k];
    }
    p.copy_from_slice(z);
    let mut rz = dot(r, z);
    for _ in 0..CG_MAX_ITERS {
        if dot(r, r).sqrt() <= CG_TOL * b_norm {
            return Ok(());
        }
        op.apply(p, ap);
        let pap = dot(p, ap);
        if pap <= 0.0 {
            return Err(SpectralError::NoConvergence {
                iterations: CG_MAX_ITERS,
            });
        }
        let alpha = rz / pap;
        for k in 0..n {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        for k in 0..n {
            z[k] = r[k] / diag[k];
        }
        let rz_new = dot(r, z);
        let beta = rz_new / rz;
        rz = rz_new;
        for k in 0..n {
            p[k] = z[k] + beta * p[k];
        }
    }
    Err(SpectralError::NoConvergence {
        iterations: CG_MAX_ITERS,
    })
}

struct CgScratch {
    r: Vec<f64>,
    z: Vec<f64>,
    p: Vec<f64>,
    ap: Vec<f64>,
}

/// Smallest generalized eigenvalue `μ` of `K v = μ M v`, with its
/// eigenvector, by inverse power iteration until the relative change in
/// `μ` drops below `tol`.
///
/// The start vector is all-ones: the ground state of this pencil is
/// sign-definite, so the overlap is bounded away from zero. The
/// returned vector is normalized to unit `M`-norm and oriented
/// non-negative.
pub(crate) fn smallest_eigenvalue(
    op: &StencilOperator,
    tol: f64,
) -> Result<(f64, Vec<f64>, usize), SpectralError> {
    let n = op.n;
    let mass = op.mass();
    let mut v = vec![1.0; n];
    let mut w = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    let mut scratch = CgScratch {
        r: vec![0.0; n],
        z: vec![0.0; n],
        p: vec![0.0; n],
        ap: vec![0.0; n],
    };

    // Normalize v in the M-norm.
    let m_norm = |x: &[f64]| -> f64 {
        let mut acc = vec![0.0; x.len()];
        for k in 0..x.len() {
            acc[k] = x[k] * mass[k] * x[k];
        }
        pairwise_sum(&acc).sqrt()
    };
    let nv = m_norm(&v);
    for k in 0..n {
        v[k] /= nv;
    }

    let mut mu_old = f64::INFINITY;
    for it in 1..=POWER_MAX_ITERS {
        for k in 0..n {
            rhs[k] = mass[k] * v[k];
        }
        // Warm start from the previous eigenvector estimate.
        if it == 1 {
            w.fill(0.0);
        }
        cg_solve(op, &rhs, &mut w, &mut scratch)?;
        // K w = M v  ⇒  μ(w) = (w'Kw)/(w'Mw) = (w'Mv)/(w'Mw).
        let mut wmv = vec![0.0; n];
        let mut wmw = vec![0.0; n];
        for k in 0..n {
            wmv[k] = w[k] * mass[k] * v[k];
            wmw[k] = w[k] * mass[k] * w[k];
        }
        let mu = pairwise_sum(&wmv) / pairwise_sum(&wmw);
        let nw = m_norm(&w);
        for k in 0..n {
            v[k] = w[k] / nw;
        }
        if (mu - mu_old).abs() <= tol * mu.abs() {
            // Orient the ground state non-negative.
            if pairwise_sum(&v) < 0.0 {
                for x in v.iter_mut() {
                    *x = -*x;
                }
            }
            return Ok((mu, v, it));
        }
        mu_old = mu;
    }
    Err(SpectralError::NoConvergence {
        iterations: POWER_MAX_ITERS,
    })
}
