//! Eigenpairs of the (signless) graph Laplacians.
//!
//! The iterative path exploits the spectral mirror: the K smallest
//! eigenvalues of `L1+` / `Ls+` are `2 - (K largest of L1 / Ls)`, and the
//! largest eigenpairs of the symmetric form are exactly what Lanczos is good
//! at. `L1+` eigenvectors come out of the symmetric solve via the `D^-1/2`
//! similarity transform and are then orthonormal in the degree-weighted
//! inner product. `L0+` has no such mirror, so it goes through the dense
//! eigensolver, which also reports the largest eigenvalue needed for the
//! diffusion-time rule.

mod dense;
mod lanczos;

use thiserror::Error;

use crate::graph::{inner_product_v, Graph, GraphError, NodeFunction};
use crate::operators::{apply, OperatorKind};
use crate::scalar::Scalar;

use dense::DenseMat;

/// Default vertex-count cap for the dense eigendecomposition path.
pub const DEFAULT_DENSE_CAP: usize = 5000;

#[derive(Debug, Error)]
pub enum SpectraError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("operator {0} is not supported by this eigensolver path")]
    UnsupportedOperator(String),
    #[error("requested {k} eigenpairs from a graph with {n} vertices")]
    KOutOfRange { k: usize, n: usize },
    #[error("graph has {n} vertices, above the dense cap {cap}; use the iterative path or raise the cap")]
    DenseCapExceeded { n: usize, cap: usize },
    #[error("eigensolver iteration limit exceeded")]
    IterationLimit,
    #[error(
        "Lanczos did not converge: {converged}/{wanted} eigenpairs after {restarts} restarts \
         (best rejected residual {worst_residual:.3e})"
    )]
    NoConvergence {
        wanted: usize,
        converged: usize,
        restarts: usize,
        worst_residual: f64,
    },
    #[error("basis validation failed: {0}")]
    InvalidBasis(String),
}

/// Which orthonormality a basis carries.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BasisInnerProduct {
    /// `<u, v> = sum_i u_i v_i d_i^r`.
    DegreeWeighted { r: f64 },
    /// Plain dot product (used for the symmetrically normalized kinds).
    Euclidean,
}

/// K eigenpairs of one operator, ascending, orthonormal in the declared
/// inner product.
#[derive(Clone, Debug)]
pub struct SpectralBasis<S> {
    pub operator: OperatorKind,
    pub lambdas: Vec<S>,
    pub phis: Vec<NodeFunction<S>>,
    pub inner_product: BasisInnerProduct,
    /// Largest eigenvalue of the *full* operator when known (dense origin).
    pub lambda_n: Option<S>,
}

impl<S: Scalar> SpectralBasis<S> {
    pub fn k(&self) -> usize {
        self.lambdas.len()
    }

    /// Expansion coefficients `<phi_k, u>` in the basis inner product.
    pub fn coefficients(&self, graph: &Graph<S>, u: &NodeFunction<S>) -> Vec<S> {
        self.phis
            .iter()
            .map(|phi| self.pair(graph, phi, u))
            .collect()
    }

    fn pair(&self, graph: &Graph<S>, a: &NodeFunction<S>, b: &NodeFunction<S>) -> S {
        match self.inner_product {
            BasisInnerProduct::DegreeWeighted { r } => inner_product_v(graph, a, b, r),
            BasisInnerProduct::Euclidean => a
                .values()
                .iter()
                .zip(b.values())
                .map(|(&x, &y)| x * y)
                .sum(),
        }
    }

    /// Keep the `k` smallest eigenpairs.
    pub fn truncated(&self, k: usize) -> Self {
        let k = k.min(self.k());
        Self {
            operator: self.operator,
            lambdas: self.lambdas[..k].to_vec(),
            phis: self.phis[..k].to_vec(),
            inner_product: self.inner_product,
            lambda_n: self.lambda_n,
        }
    }

    /// Check orthonormality, eigen-residuals, and the spectral range.
    pub fn validate(&self, graph: &Graph<S>, tol_orth: S, tol_res: S) -> Result<(), SpectraError> {
        for (k, phi) in self.phis.iter().enumerate() {
            for (l, psi) in self.phis.iter().enumerate().skip(k) {
                let expect = if k == l { S::one() } else { S::zero() };
                let got = self.pair(graph, phi, psi);
                if (got - expect).abs() > tol_orth {
                    return Err(SpectraError::InvalidBasis(format!(
                        "<phi_{k}, phi_{l}> = {got}, expected {expect}"
                    )));
                }
            }
        }
        for (k, (phi, &lambda)) in self.phis.iter().zip(&self.lambdas).enumerate() {
            let mut res = apply(self.operator, graph, phi);
            for (ri, &pi) in res.values_mut().iter_mut().zip(phi.values()) {
                *ri -= lambda * pi;
            }
            let res_norm = res.norm_euclidean();
            if res_norm > tol_res * S::one().max(lambda.abs()) {
                return Err(SpectraError::InvalidBasis(format!(
                    "residual of pair {k} (lambda = {lambda}) is {res_norm}"
                )));
            }
            if lambda < -tol_orth {
                return Err(SpectraError::InvalidBasis(format!(
                    "negative eigenvalue {lambda}"
                )));
            }
        }
        let bounded = match self.operator {
            OperatorKind::Standard { r } | OperatorKind::Signless { r } => r == 1.0,
            OperatorKind::StandardSym | OperatorKind::SignlessSym => true,
        };
        if bounded {
            let cap = S::from_f64_lit(2.0) + S::from_f64_lit(1e-8);
            if let Some(&top) = self.lambdas.last() {
                if top > cap {
                    return Err(SpectraError::InvalidBasis(format!(
                        "eigenvalue {top} above 2"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Number of eigenvalues at most `tol` in the basis.
///
/// With a full basis of a standard Laplacian this counts connected
/// components; for a signless Laplacian it counts bipartite components.
pub fn count_zero_modes<S: Scalar>(basis: &SpectralBasis<S>, tol: S) -> usize {
    basis.lambdas.iter().take_while(|&&l| l <= tol).count()
}

fn default_lanczos_tol<S: Scalar>() -> S {
    S::from_f64_lit(1e-8).max(S::epsilon() * S::from_f64_lit(32.0))
}

/// The K smallest eigenpairs of `L1+` or `Ls+` by restarted Lanczos on the
/// mirrored symmetric problem.
///
/// The basis is ascending in the signless eigenvalue and orthonormal in the
/// degree-weighted inner product (r = 1) for `L1+`, Euclidean for `Ls+`.
/// The Lanczos start vectors are derived from `seed`.
pub fn smallest_signless_eigenpairs<S: Scalar>(
    graph: &Graph<S>,
    kind: OperatorKind,
    k: usize,
    seed: u64,
) -> Result<SpectralBasis<S>, SpectraError> {
    let transform_by_degree = match kind {
        OperatorKind::Signless { r } if r == 1.0 => true,
        OperatorKind::SignlessSym => false,
        other => return Err(SpectraError::UnsupportedOperator(other.label())),
    };
    let n = graph.vertex_count();
    if k == 0 || k > n {
        return Err(SpectraError::KOutOfRange { k, n });
    }

    let sym = OperatorKind::StandardSym;
    let apply_sym = |x: &[S], y: &mut [S]| {
        let out = apply(sym, graph, &NodeFunction::new(x.to_vec()));
        y.copy_from_slice(out.values());
    };
    let tol = default_lanczos_tol::<S>();
    let (thetas, vecs) = lanczos::largest_eigenpairs(n, apply_sym, k, tol, 64, seed)?;

    let two = S::from_f64_lit(2.0);
    let lambdas: Vec<S> = thetas.iter().map(|&t| (two - t).max(S::zero())).collect();
    let phis: Vec<NodeFunction<S>> = vecs
        .into_iter()
        .map(|w| mirror_vector(graph, w, transform_by_degree))
        .collect();

    Ok(SpectralBasis {
        operator: kind,
        lambdas,
        phis,
        inner_product: if transform_by_degree {
            BasisInnerProduct::DegreeWeighted { r: 1.0 }
        } else {
            BasisInnerProduct::Euclidean
        },
        lambda_n: None,
    })
}

fn mirror_vector<S: Scalar>(
    graph: &Graph<S>,
    mut w: Vec<S>,
    transform_by_degree: bool,
) -> NodeFunction<S> {
    if transform_by_degree {
        for (wi, &d) in w.iter_mut().zip(graph.degrees()) {
            *wi /= d.sqrt();
        }
    }
    NodeFunction::new(w)
}

/// All `n` eigenpairs of `L0+` by dense symmetric eigendecomposition.
///
/// Also the source of the largest eigenvalue for the `tau = 40 / lambda_n`
/// rule. Refuses graphs above `DEFAULT_DENSE_CAP` vertices; use
/// [`full_eigenbasis`] to override the cap explicitly.
pub fn dense_signless_eigenpairs<S: Scalar>(
    graph: &Graph<S>,
) -> Result<SpectralBasis<S>, SpectraError> {
    full_eigenbasis(graph, OperatorKind::signless(0.0), DEFAULT_DENSE_CAP)
}

/// All `n` eigenpairs of any of the six operators via the dense symmetric
/// route (the r-parametric kinds are diagonalized through their `D^(r/2)`
/// similarity transform).
pub fn full_eigenbasis<S: Scalar>(
    graph: &Graph<S>,
    kind: OperatorKind,
    cap: usize,
) -> Result<SpectralBasis<S>, SpectraError> {
    let n = graph.vertex_count();
    if n > cap {
        return Err(SpectraError::DenseCapExceeded { n, cap });
    }

    let signless = kind.is_signless();
    let mat = match kind {
        OperatorKind::Standard { r } | OperatorKind::Signless { r } => {
            symmetrized_r_matrix(graph, r, signless)
        }
        OperatorKind::StandardSym | OperatorKind::SignlessSym => normalized_matrix(graph, signless),
    };
    let (lambdas, vecs) = dense::symmetric_eigen(mat)?;
    let lambda_n = lambdas.last().copied();

    let (phis, inner_product) = match kind {
        OperatorKind::Standard { r } | OperatorKind::Signless { r } => {
            let phis = (0..n)
                .map(|col| {
                    let mut v = vecs.column(col);
                    if r != 0.0 {
                        for (vi, &d) in v.iter_mut().zip(graph.degrees()) {
                            *vi /= d.powf64(r / 2.0);
                        }
                    }
                    NodeFunction::new(v)
                })
                .collect();
            (phis, BasisInnerProduct::DegreeWeighted { r })
        }
        _ => {
            let phis = (0..n)
                .map(|col| NodeFunction::new(vecs.column(col)))
                .collect();
            (phis, BasisInnerProduct::Euclidean)
        }
    };

    Ok(SpectralBasis {
        operator: kind,
        lambdas,
        phis,
        inner_product,
        lambda_n,
    })
}

/// Basis for the spectral diffusion solver: dense for `L0+` (no mirror) and
/// for near-full K, Lanczos otherwise. Always truncated to `k` pairs.
pub fn signless_basis_auto<S: Scalar>(
    graph: &Graph<S>,
    kind: OperatorKind,
    k: usize,
    seed: u64,
    dense_cap: usize,
) -> Result<SpectralBasis<S>, SpectraError> {
    if !kind.is_signless() {
        return Err(SpectraError::UnsupportedOperator(kind.label()));
    }
    let n = graph.vertex_count();
    if k == 0 || k > n {
        return Err(SpectraError::KOutOfRange { k, n });
    }
    let needs_dense = matches!(kind, OperatorKind::Signless { r } if r != 1.0);
    if needs_dense || n <= 32 || 4 * k >= 3 * n {
        Ok(full_eigenbasis(graph, kind, dense_cap)?.truncated(k))
    } else {
        smallest_signless_eigenpairs(graph, kind, k, seed)
    }
}

fn symmetrized_r_matrix<S: Scalar>(graph: &Graph<S>, r: f64, signless: bool) -> DenseMat<S> {
    let n = graph.vertex_count();
    let scale: Vec<S> = graph
        .degrees()
        .iter()
        .map(|&d| d.powf64(-r / 2.0))
        .collect();
    let mut mat = DenseMat::zeros(n);
    for i in 0..n {
        mat.set(i, i, graph.degree(i).powf64(1.0 - r));
        let (cols, ws) = graph.row(i);
        for (&j, &w) in cols.iter().zip(ws) {
            let off = scale[i] * w * scale[j];
            mat.set(i, j, if signless { off } else { -off });
        }
    }
    mat
}

fn normalized_matrix<S: Scalar>(graph: &Graph<S>, signless: bool) -> DenseMat<S> {
    let n = graph.vertex_count();
    let inv_sqrt: Vec<S> = graph.degrees().iter().map(|&d| d.sqrt().recip()).collect();
    let mut mat = DenseMat::zeros(n);
    for i in 0..n {
        mat.set(i, i, S::one());
        let (cols, ws) = graph.row(i);
        for (&j, &w) in cols.iter().zip(ws) {
            let off = inv_sqrt[i] * w * inv_sqrt[j];
            mat.set(i, j, if signless { off } else { -off });
        }
    }
    mat
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{erdos_renyi, random_bipartite};
    use crate::graph::Graph;

    const L1PLUS: OperatorKind = OperatorKind::Signless { r: 1.0 };

    #[test]
    fn k2_signless_pairs() {
        let g: Graph<f64> = Graph::path(2);
        let basis = smallest_signless_eigenpairs(&g, L1PLUS, 2, 1).unwrap();
        assert!(basis.lambdas[0].abs() < 1e-10);
        assert!((basis.lambdas[1] - 2.0).abs() < 1e-10);
        let phi1 = &basis.phis[0];
        assert!(
            (phi1[0] + phi1[1]).abs() < 1e-8,
            "zero mode must be the bipartition +-"
        );
        basis.validate(&g, 1e-8, 1e-6).unwrap();
    }

    #[test]
    fn odd_cycle_has_positive_bottom() {
        let g: Graph<f64> = Graph::cycle(5);
        let basis = smallest_signless_eigenpairs(&g, L1PLUS, 1, 2).unwrap();
        assert!(basis.lambdas[0] > 1e-3, "non-bipartite => lambda_1 > 0");
    }

    #[test]
    fn bipartite_zero_mode_recovers_partition() {
        let g: Graph<f64> = (0..50)
            .map(|seed| random_bipartite::<f64>(8, 8, 0.5, seed))
            .find(|g| g.is_connected())
            .expect("some seed yields a connected bipartite instance");
        let basis = smallest_signless_eigenpairs(&g, OperatorKind::SignlessSym, 1, 3).unwrap();
        assert!(basis.lambdas[0].abs() < 1e-8);
        let phi = &basis.phis[0];
        let side_a = phi[0].signum();
        for i in 0..8 {
            assert_eq!(phi[i].signum(), side_a);
            assert_eq!(phi[8 + i].signum(), -side_a);
        }
    }

    #[test]
    fn dense_k2_and_k3() {
        let k2: Graph<f64> = Graph::path(2);
        let basis = dense_signless_eigenpairs(&k2).unwrap();
        assert!(basis.lambdas[0].abs() < 1e-12);
        assert!((basis.lambdas[1] - 2.0).abs() < 1e-12);
        assert_eq!(basis.lambda_n, Some(basis.lambdas[1]));

        let k3: Graph<f64> = Graph::complete(3);
        let basis = dense_signless_eigenpairs(&k3).unwrap();
        let expect = [1.0, 1.0, 4.0];
        for (got, want) in basis.lambdas.iter().zip(expect) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
        basis.validate(&k3, 1e-8, 1e-6).unwrap();
    }

    #[test]
    fn dense_cap_is_enforced() {
        let g: Graph<f64> = Graph::cycle(40);
        let err = full_eigenbasis(&g, OperatorKind::signless(0.0), 10).unwrap_err();
        assert!(matches!(
            err,
            SpectraError::DenseCapExceeded { n: 40, cap: 10 }
        ));
    }

    #[test]
    fn disconnected_union_zero_multiplicity() {
        let k2: Graph<f64> = Graph::path(2);
        let union = k2.disjoint_union(&k2);
        let basis = dense_signless_eigenpairs(&union).unwrap();
        assert_eq!(count_zero_modes(&basis, 1e-8), 2);
    }

    #[test]
    fn zero_mode_counts_match_structure() {
        // three components; standard Laplacian sees all of them
        let part: Graph<f64> = Graph::cycle(4);
        let g = part
            .disjoint_union(&Graph::cycle(5))
            .disjoint_union(&Graph::path(3));
        let standard = full_eigenbasis(&g, OperatorKind::standard(1.0), 1000).unwrap();
        assert_eq!(count_zero_modes(&standard, 1e-8), 3);

        // signless sees the bipartite ones only: C4 and P3, not C5
        let signless = full_eigenbasis(&g, L1PLUS, 1000).unwrap();
        assert_eq!(count_zero_modes(&signless, 1e-8), 2);

        // connected non-bipartite graph has none
        let c5 = full_eigenbasis(&Graph::<f64>::cycle(5), L1PLUS, 1000).unwrap();
        assert_eq!(count_zero_modes(&c5, 1e-8), 0);
    }

    #[test]
    fn mirror_and_similarity_on_random_graphs() {
        for seed in 0..4u64 {
            let g = erdos_renyi::<f64>(40, 0.15, seed)
                .remove_isolated_nodes()
                .unwrap()
                .0;
            let n = g.vertex_count();
            let plus = full_eigenbasis(&g, L1PLUS, 1000).unwrap();
            let minus = full_eigenbasis(&g, OperatorKind::standard(1.0), 1000).unwrap();
            for k in 0..n {
                let mirrored = 2.0 - minus.lambdas[n - 1 - k];
                assert!(
                    (plus.lambdas[k] - mirrored).abs() < 1e-8,
                    "seed {seed} index {k}"
                );
            }
            // same eigenvalues as the symmetric normalization
            let sym = full_eigenbasis(&g, OperatorKind::StandardSym, 1000).unwrap();
            for k in 0..n {
                assert!((sym.lambdas[k] - minus.lambdas[k]).abs() < 1e-8);
            }
            plus.validate(&g, 1e-8, 1e-6).unwrap();
            minus.validate(&g, 1e-8, 1e-6).unwrap();
        }
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        for seed in 0..3u64 {
            let g = erdos_renyi::<f64>(60, 0.1, 10 + seed)
                .remove_isolated_nodes()
                .unwrap()
                .0;
            for kind in [L1PLUS, OperatorKind::SignlessSym] {
                let iterative = smallest_signless_eigenpairs(&g, kind, 5, seed).unwrap();
                let full = full_eigenbasis(&g, kind, 1000).unwrap();
                for k in 0..5 {
                    assert!(
                        (iterative.lambdas[k] - full.lambdas[k]).abs() < 1e-7,
                        "seed {seed} {kind:?} pair {k}: {} vs {}",
                        iterative.lambdas[k],
                        full.lambdas[k]
                    );
                }
                iterative.validate(&g, 1e-8, 1e-6).unwrap();
            }
        }
    }

    #[test]
    fn zero_mode_scaling_follows_the_normalization() {
        // K_{3,5} has unequal degrees: the L1+ zero mode is the flat +-1
        // bipartition indicator, the Ls+ one is its D^(1/2) rescaling
        let g: Graph<f64> = Graph::complete_bipartite(3, 5);
        let flat = smallest_signless_eigenpairs(&g, L1PLUS, 1, 4).unwrap();
        assert!(flat.lambdas[0].abs() < 1e-8);
        let phi = &flat.phis[0];
        let magnitude = phi[0].abs();
        for i in 0..8 {
            assert!((phi[i].abs() - magnitude).abs() < 1e-7, "entry {i}");
            let expected_sign = if i < 3 { phi[0].signum() } else { -phi[0].signum() };
            assert_eq!(phi[i].signum(), expected_sign);
        }

        let scaled = smallest_signless_eigenpairs(&g, OperatorKind::SignlessSym, 1, 4).unwrap();
        assert!(scaled.lambdas[0].abs() < 1e-8);
        let psi = &scaled.phis[0];
        // psi_i proportional to sqrt(d_i) * phi_i
        let ratio = psi[0] / (g.degree(0).sqrt() * phi[0]);
        for i in 0..8 {
            let predicted = ratio * g.degree(i).sqrt() * phi[i];
            assert!((psi[i] - predicted).abs() < 1e-7, "entry {i}");
        }
    }

    #[test]
    fn rejects_unsupported_kinds() {
        let g: Graph<f64> = Graph::complete(4);
        assert!(matches!(
            smallest_signless_eigenpairs(&g, OperatorKind::signless(0.0), 1, 0),
            Err(SpectraError::UnsupportedOperator(_))
        ));
        assert!(matches!(
            smallest_signless_eigenpairs(&g, L1PLUS, 9, 0),
            Err(SpectraError::KOutOfRange { .. })
        ));
    }
}
