//! Restarted Lanczos iteration with full reorthogonalization for the largest
//! eigenpairs of a symmetric operator.
//!
//! Converged Ritz vectors are locked and deflated: subsequent sweeps build
//! their Krylov bases orthogonal to everything already locked, so repeated
//! eigenvalues are found one copy per sweep. Residuals are verified against
//! the operator itself before locking, never trusted from the tridiagonal
//! estimate alone.

use crate::rng::CounterRng;
use crate::scalar::Scalar;

use super::dense::tridiagonal_eigen;
use super::SpectraError;

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn norm<S: Scalar>(a: &[S]) -> S {
    dot(a, a).sqrt()
}

fn axpy<S: Scalar>(y: &mut [S], alpha: S, x: &[S]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Subtract the projections of `w` onto each vector in `basis` (assumed
/// orthonormal); two passes of classical Gram-Schmidt.
fn reorthogonalize<'a, S: Scalar>(w: &mut [S], bases: impl Iterator<Item = &'a Vec<S>> + Clone) {
    for _ in 0..2 {
        for u in bases.clone() {
            let c = dot(u, w);
            axpy(w, -c, u);
        }
    }
}

/// The `k` largest eigenpairs of a symmetric operator, values descending.
///
/// `apply` must implement `y = A x` for a fixed symmetric `A` of dimension
/// `dim`. The start vector of each sweep is drawn from the counter-based
/// stream of `seed`, so results are reproducible.
pub(crate) fn largest_eigenpairs<S: Scalar>(
    dim: usize,
    apply: impl Fn(&[S], &mut [S]),
    k: usize,
    tol: S,
    max_restarts: usize,
    seed: u64,
) -> Result<(Vec<S>, Vec<Vec<S>>), SpectraError> {
    assert!(k >= 1 && k <= dim, "need 1 <= k <= dim");
    let rng = CounterRng::new(seed).substream(0x4C41_4E43);
    let mut locked_vals: Vec<S> = Vec::new();
    let mut locked_vecs: Vec<Vec<S>> = Vec::new();
    let mut worst_residual = f64::INFINITY;
    let breakdown = S::epsilon() * S::from_f64_lit(128.0);
    // seed the next sweep with the best unconverged Ritz vector, so restarts
    // compound progress instead of starting over
    let mut next_start: Option<Vec<S>> = None;
    let mut stalls = 0usize;

    for restart in 0..max_restarts {
        if locked_vals.len() >= k {
            break;
        }
        let want = k - locked_vals.len();
        let base = (2 * want + 16).max(32);
        let m = (dim - locked_vals.len()).min(base << stalls.min(3));

        // start vector orthogonal to the locked invariant subspace
        let mut v = next_start
            .take()
            .unwrap_or_else(|| rng.substream(restart as u64).unit_vector::<S>(dim));
        reorthogonalize(&mut v, locked_vecs.iter());
        let nv = norm(&v);
        if nv < S::from_f64_lit(1e-8) {
            continue;
        }
        for x in v.iter_mut() {
            *x /= nv;
        }

        let mut basis: Vec<Vec<S>> = vec![v];
        let mut alphas: Vec<S> = Vec::with_capacity(m);
        let mut betas: Vec<S> = Vec::with_capacity(m);
        let mut w = vec![S::zero(); dim];

        for step in 0..m {
            apply(&basis[step], &mut w);
            let alpha = dot(&basis[step], &w);
            alphas.push(alpha);
            {
                let (head, tail) = basis.split_at(step);
                axpy(&mut w, -alpha, &tail[0]);
                if step > 0 {
                    axpy(&mut w, -betas[step - 1], &head[step - 1]);
                }
            }
            reorthogonalize(&mut w, locked_vecs.iter().chain(basis.iter()));
            let beta = norm(&w);
            if step + 1 == m || beta <= breakdown {
                break;
            }
            betas.push(beta);
            basis.push(w.iter().map(|&x| x / beta).collect());
        }

        let steps = alphas.len();
        let (thetas, y) = tridiagonal_eigen(&alphas, &betas[..steps - 1])?;

        // lock a prefix of the descending Ritz values
        let mut locked_any = false;
        for rank in (0..steps).rev() {
            if locked_vals.len() >= k {
                break;
            }
            let theta = thetas[rank];
            let mut x = vec![S::zero(); dim];
            for (j, vj) in basis.iter().enumerate() {
                axpy(&mut x, y.at(j, rank), vj);
            }
            reorthogonalize(&mut x, locked_vecs.iter());
            let nx = norm(&x);
            if nx < S::from_f64_lit(1e-6) {
                continue; // collapsed onto the locked subspace
            }
            for xi in x.iter_mut() {
                *xi /= nx;
            }
            apply(&x, &mut w);
            axpy(&mut w, -theta, &x);
            let residual = norm(&w);
            let bound = tol * S::one().max(theta.abs());
            if residual <= bound {
                locked_vals.push(theta);
                locked_vecs.push(x);
                locked_any = true;
            } else {
                worst_residual = worst_residual.min(residual.to_f64().unwrap_or(f64::NAN));
                next_start = Some(x);
                break;
            }
        }
        stalls = if locked_any { 0 } else { stalls + 1 };
    }

    if locked_vals.len() < k {
        return Err(SpectraError::NoConvergence {
            wanted: k,
            converged: locked_vals.len(),
            restarts: max_restarts,
            worst_residual,
        });
    }

    // order descending; sweeps can lock slightly out of order
    let mut order: Vec<usize> = (0..locked_vals.len()).collect();
    order.sort_by(|&a, &b| locked_vals[b].partial_cmp(&locked_vals[a]).unwrap());
    let vals = order.iter().take(k).map(|&i| locked_vals[i]).collect();
    let vecs = order
        .iter()
        .take(k)
        .map(|&i| std::mem::take(&mut locked_vecs[i]))
        .collect();
    Ok((vals, vecs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_apply(mat: &[Vec<f64>]) -> impl Fn(&[f64], &mut [f64]) + '_ {
        move |x, y| {
            for (i, row) in mat.iter().enumerate() {
                y[i] = row.iter().zip(x).map(|(&a, &b)| a * b).sum();
            }
        }
    }

    #[test]
    fn finds_diagonal_extremes() {
        let n = 30;
        let mat: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            (i + 1) as f64 / n as f64
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        let (vals, vecs) = largest_eigenpairs(n, dense_apply(&mat), 3, 1e-10, 40, 7).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-9);
        assert!((vals[1] - (n - 1) as f64 / n as f64).abs() < 1e-9);
        assert!((vals[2] - (n - 2) as f64 / n as f64).abs() < 1e-9);
        for (r, v) in vecs.iter().enumerate() {
            let hot = n - 1 - r;
            assert!(v[hot].abs() > 0.99, "vector {r} not concentrated");
        }
    }

    #[test]
    fn handles_repeated_eigenvalues() {
        // block diag with a double eigenvalue at 2
        let n = 20;
        let mut mat = vec![vec![0.0; n]; n];
        for (i, row) in mat.iter_mut().enumerate() {
            row[i] = if i < 2 { 2.0 } else { 1.0 / (i + 1) as f64 };
        }
        let (vals, vecs) = largest_eigenpairs(n, dense_apply(&mat), 2, 1e-10, 40, 3).unwrap();
        assert!((vals[0] - 2.0).abs() < 1e-9);
        assert!((vals[1] - 2.0).abs() < 1e-9);
        let cross: f64 = vecs[0].iter().zip(&vecs[1]).map(|(a, b)| a * b).sum();
        assert!(cross.abs() < 1e-8, "locked vectors must stay orthonormal");
    }

    #[test]
    fn small_dimension_full_space() {
        let mat = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let (vals, _) = largest_eigenpairs(2, dense_apply(&mat), 2, 1e-10, 40, 11).unwrap();
        assert!((vals[0] - 2.0).abs() < 1e-10);
        assert!(vals[1].abs() < 1e-10);
    }
}
