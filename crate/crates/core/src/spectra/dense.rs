//! Dense symmetric eigendecomposition: Householder tridiagonalization
//! followed by the implicit-shift QL iteration, with eigenvector
//! accumulation. Classic EISPACK-style kernels, O(n^3), used as the exact
//! fallback for small to mid-sized graphs and to diagonalize the Lanczos
//! tridiagonal matrix.

use crate::scalar::Scalar;

use super::SpectraError;

/// Minimal row-major dense matrix; internal to the eigensolvers.
#[derive(Clone, Debug)]
pub(crate) struct DenseMat<S> {
    n: usize,
    data: Vec<S>,
}

impl<S: Scalar> DenseMat<S> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![S::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    #[cfg(test)]
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> S {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.n + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.n).map(|i| self.at(i, j)).collect()
    }

    fn swap_columns(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.n {
            self.data.swap(i * self.n + a, i * self.n + b);
        }
    }
}

#[inline]
fn hypot<S: Scalar>(a: S, b: S) -> S {
    let (a, b) = (a.abs(), b.abs());
    if a > b {
        let r = b / a;
        a * (S::one() + r * r).sqrt()
    } else if b != S::zero() {
        let r = a / b;
        b * (S::one() + r * r).sqrt()
    } else {
        S::zero()
    }
}

/// Reduce a symmetric matrix to tridiagonal form, accumulating the orthogonal
/// transform in place. On return `a` holds Q, `d` the diagonal and `e` the
/// subdiagonal (with `e[i]` coupling rows i-1 and i; `e[0] = 0`).
#[allow(clippy::needless_range_loop)] // index-heavy classic kernel
fn householder_tridiagonalize<S: Scalar>(a: &mut DenseMat<S>, d: &mut [S], e: &mut [S]) {
    let n = a.dim();
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = S::zero();
        if l > 0 {
            let mut scale = S::zero();
            for k in 0..=l {
                scale += a.at(i, k).abs();
            }
            if scale == S::zero() {
                e[i] = a.at(i, l);
            } else {
                for k in 0..=l {
                    let v = a.at(i, k) / scale;
                    a.set(i, k, v);
                    h += v * v;
                }
                let f = a.at(i, l);
                let g = if f >= S::zero() { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a.set(i, l, f - g);
                let mut f_acc = S::zero();
                for j in 0..=l {
                    a.set(j, i, a.at(i, j) / h);
                    let mut g_acc = S::zero();
                    for k in 0..=j {
                        g_acc += a.at(j, k) * a.at(i, k);
                    }
                    for k in j + 1..=l {
                        g_acc += a.at(k, j) * a.at(i, k);
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * a.at(i, j);
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a.at(i, j);
                    let gj = e[j] - hh * f;
                    e[j] = gj;
                    for k in 0..=j {
                        let v = a.at(j, k) - (f * e[k] + gj * a.at(i, k));
                        a.set(j, k, v);
                    }
                }
            }
        } else {
            e[i] = a.at(i, l);
        }
        d[i] = h;
    }
    d[0] = S::zero();
    e[0] = S::zero();
    for i in 0..n {
        if d[i] != S::zero() {
            for j in 0..i {
                let mut g = S::zero();
                for k in 0..i {
                    g += a.at(i, k) * a.at(k, j);
                }
                for k in 0..i {
                    let v = a.at(k, j) - g * a.at(k, i);
                    a.set(k, j, v);
                }
            }
        }
        d[i] = a.at(i, i);
        a.set(i, i, S::one());
        for j in 0..i {
            a.set(j, i, S::zero());
            a.set(i, j, S::zero());
        }
    }
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix, rotating
/// the columns of `z` along. `d` is the diagonal; `e[i]` couples i-1 and i.
#[allow(clippy::needless_range_loop)]
fn ql_implicit_shifts<S: Scalar>(
    d: &mut [S],
    e: &mut [S],
    z: &mut DenseMat<S>,
) -> Result<(), SpectraError> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    // renumber so e[i] couples i and i+1
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = S::zero();
    let eps = S::epsilon();
    let floor = S::min_positive_value() * S::from_f64_lit(16.0);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd || e[m].abs() < floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(SpectraError::IterationLimit);
            }
            let mut g = (d[l + 1] - d[l]) / (S::from_f64_lit(2.0) * e[l]);
            let mut r = hypot(g, S::one());
            let sign_r = if g >= S::zero() { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let mut s = S::one();
            let mut c = S::one();
            let mut p = S::zero();
            let mut i = m;
            while i > l {
                let idx = i - 1;
                let mut f = s * e[idx];
                let b = c * e[idx];
                r = hypot(f, g);
                e[i] = r;
                if r == S::zero() {
                    d[i] -= p;
                    e[m] = S::zero();
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i] - p;
                r = (d[idx] - g) * s + S::from_f64_lit(2.0) * c * b;
                p = s * r;
                d[i] = g + p;
                g = c * r - b;
                for k in 0..z.dim() {
                    f = z.at(k, i);
                    z.set(k, i, s * z.at(k, idx) + c * f);
                    z.set(k, idx, c * z.at(k, idx) - s * f);
                }
                i -= 1;
            }
            if r == S::zero() && i > l {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = S::zero();
        }
    }
    Ok(())
}

fn sort_ascending<S: Scalar>(d: &mut [S], z: &mut DenseMat<S>) {
    let n = d.len();
    for i in 0..n {
        let mut min_idx = i;
        for j in i + 1..n {
            if d[j] < d[min_idx] {
                min_idx = j;
            }
        }
        if min_idx != i {
            d.swap(i, min_idx);
            z.swap_columns(i, min_idx);
        }
    }
}

/// All eigenpairs of a symmetric matrix, eigenvalues ascending, eigenvectors
/// as Euclidean-orthonormal columns.
pub(crate) fn symmetric_eigen<S: Scalar>(
    mut a: DenseMat<S>,
) -> Result<(Vec<S>, DenseMat<S>), SpectraError> {
    let n = a.dim();
    let mut d = vec![S::zero(); n];
    let mut e = vec![S::zero(); n];
    if n == 1 {
        let lambda = a.at(0, 0);
        return Ok((vec![lambda], DenseMat::identity(1)));
    }
    householder_tridiagonalize(&mut a, &mut d, &mut e);
    ql_implicit_shifts(&mut d, &mut e, &mut a)?;
    sort_ascending(&mut d, &mut a);
    Ok((d, a))
}

/// All eigenpairs of a symmetric tridiagonal matrix given by its diagonal and
/// subdiagonal (`offdiag[i]` couples i and i+1). Ascending order.
pub(crate) fn tridiagonal_eigen<S: Scalar>(
    diag: &[S],
    offdiag: &[S],
) -> Result<(Vec<S>, DenseMat<S>), SpectraError> {
    let n = diag.len();
    assert!(offdiag.len() + 1 == n || (n == 0 && offdiag.is_empty()));
    let mut d = diag.to_vec();
    // shift into the e[i] couples (i-1, i) convention expected by QL
    let mut e = vec![S::zero(); n];
    e[1..n].copy_from_slice(offdiag);
    let mut z = DenseMat::identity(n);
    if n <= 1 {
        return Ok((d, z));
    }
    ql_implicit_shifts(&mut d, &mut e, &mut z)?;
    sort_ascending(&mut d, &mut z);
    Ok((d, z))
}
