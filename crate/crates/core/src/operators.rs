//! Matrix-free application of the six (signless) Laplacians and the
//! underlying gradient / divergence calculus.
//!
//! The r-parametric family acts as `(L_r u)_i = d_i^-r sum_j w_ij (u_i - u_j)`
//! and its signless counterpart carries a plus sign. The symmetrically
//! normalized pair cannot be reached by any `r` and is handled separately.
//! No matrix is ever materialized here; every application is one pass over
//! the CSR rows, Theta(|E| + n).

use thiserror::Error;

use crate::graph::{inner_product_v, Graph, GraphError, NodeFunction};
use crate::scalar::{pairwise_sum, Scalar};

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("rayleigh quotient of the zero function is undefined")]
    ZeroFunction,
}

/// One of the six graph Laplacians used by the solver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OperatorKind {
    /// `D^(1-r) - D^-r A` as an operator (r = 0 unnormalized, r = 1 random walk).
    Standard { r: f64 },
    /// `D^(1-r) + D^-r A`.
    Signless { r: f64 },
    /// `I - D^-1/2 A D^-1/2`.
    StandardSym,
    /// `I + D^-1/2 A D^-1/2`.
    SignlessSym,
}

impl OperatorKind {
    pub fn standard(r: f64) -> Self {
        assert!((0.0..=1.0).contains(&r), "r must be in [0, 1]");
        OperatorKind::Standard { r }
    }

    pub fn signless(r: f64) -> Self {
        assert!((0.0..=1.0).contains(&r), "r must be in [0, 1]");
        OperatorKind::Signless { r }
    }

    pub fn is_signless(&self) -> bool {
        matches!(
            self,
            OperatorKind::Signless { .. } | OperatorKind::SignlessSym
        )
    }

    /// The normalization exponent, if this is an r-parametric kind.
    pub fn r(&self) -> Option<f64> {
        match self {
            OperatorKind::Standard { r } | OperatorKind::Signless { r } => Some(*r),
            _ => None,
        }
    }

    /// The same normalization with the opposite sign family.
    pub fn mirrored(&self) -> Self {
        match *self {
            OperatorKind::Standard { r } => OperatorKind::Signless { r },
            OperatorKind::Signless { r } => OperatorKind::Standard { r },
            OperatorKind::StandardSym => OperatorKind::SignlessSym,
            OperatorKind::SignlessSym => OperatorKind::StandardSym,
        }
    }

    /// Short stable name used in CSV output and error messages.
    pub fn label(&self) -> String {
        match *self {
            OperatorKind::Standard { r } if r == 0.0 => "l0".into(),
            OperatorKind::Standard { r } if r == 1.0 => "l1".into(),
            OperatorKind::Standard { r } => format!("l(r={r})"),
            OperatorKind::Signless { r } if r == 0.0 => "l0plus".into(),
            OperatorKind::Signless { r } if r == 1.0 => "l1plus".into(),
            OperatorKind::Signless { r } => format!("lplus(r={r})"),
            OperatorKind::StandardSym => "ls".into(),
            OperatorKind::SignlessSym => "lsplus".into(),
        }
    }
}

/// Function on the edge set, stored aligned with the CSR slots of a graph
/// (one value per stored direction, zero off E by construction).
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeFunction<S> {
    values: Vec<S>,
}

impl<S: Scalar> EdgeFunction<S> {
    pub fn zeros(graph: &Graph<S>) -> Self {
        Self {
            values: vec![S::zero(); graph.slot_count()],
        }
    }

    pub fn from_slots(graph: &Graph<S>, values: Vec<S>) -> Self {
        assert_eq!(values.len(), graph.slot_count());
        Self { values }
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [S] {
        &mut self.values
    }
}

/// Apply the chosen Laplacian to `u` in a single pass over edges and
/// vertices.
pub fn apply<S: Scalar>(
    kind: OperatorKind,
    graph: &Graph<S>,
    u: &NodeFunction<S>,
) -> NodeFunction<S> {
    assert_eq!(
        u.len(),
        graph.vertex_count(),
        "node function length mismatch"
    );
    let n = graph.vertex_count();
    let uv = u.values();
    let mut out = Vec::with_capacity(n);
    match kind {
        OperatorKind::Standard { r } | OperatorKind::Signless { r } => {
            let signless = kind.is_signless();
            for i in 0..n {
                let (cols, ws) = graph.row(i);
                let mut neigh = S::zero();
                for (&j, &w) in cols.iter().zip(ws) {
                    neigh += w * uv[j];
                }
                let d = graph.degree(i);
                let local = if signless {
                    d * uv[i] + neigh
                } else {
                    d * uv[i] - neigh
                };
                out.push(local * d.powf64(-r));
            }
        }
        OperatorKind::StandardSym | OperatorKind::SignlessSym => {
            let signless = kind.is_signless();
            let inv_sqrt: Vec<S> = graph.degrees().iter().map(|&d| d.sqrt().recip()).collect();
            for i in 0..n {
                let (cols, ws) = graph.row(i);
                let mut neigh = S::zero();
                for (&j, &w) in cols.iter().zip(ws) {
                    neigh += w * inv_sqrt[j] * uv[j];
                }
                let scaled = inv_sqrt[i] * neigh;
                out.push(if signless {
                    uv[i] + scaled
                } else {
                    uv[i] - scaled
                });
            }
        }
    }
    NodeFunction::new(out)
}

/// Graph gradient `(grad u)_ij = w_ij^(1-q) (u_j - u_i)`.
pub fn gradient<S: Scalar>(graph: &Graph<S>, u: &NodeFunction<S>, q: f64) -> EdgeFunction<S> {
    edge_difference(graph, u, q, false)
}

/// Signless gradient `(grad+ u)_ij = w_ij^(1-q) (u_j + u_i)`.
pub fn signless_gradient<S: Scalar>(
    graph: &Graph<S>,
    u: &NodeFunction<S>,
    q: f64,
) -> EdgeFunction<S> {
    edge_difference(graph, u, q, true)
}

fn edge_difference<S: Scalar>(
    graph: &Graph<S>,
    u: &NodeFunction<S>,
    q: f64,
    signless: bool,
) -> EdgeFunction<S> {
    assert_eq!(
        u.len(),
        graph.vertex_count(),
        "node function length mismatch"
    );
    let uv = u.values();
    let mut values = Vec::with_capacity(graph.slot_count());
    for i in 0..graph.vertex_count() {
        let (cols, ws) = graph.row(i);
        for (&j, &w) in cols.iter().zip(ws) {
            let pair = if signless {
                uv[j] + uv[i]
            } else {
                uv[j] - uv[i]
            };
            values.push(w.powf64(1.0 - q) * pair);
        }
    }
    EdgeFunction { values }
}

/// Graph divergence `(div phi)_i = d_i^-r / 2 * sum_j w_ij^q (phi_ji - phi_ij)`,
/// the adjoint of the gradient in the V/E inner products.
pub fn divergence<S: Scalar>(
    graph: &Graph<S>,
    phi: &EdgeFunction<S>,
    q: f64,
    r: f64,
) -> NodeFunction<S> {
    vertex_collapse(graph, phi, q, r, false)
}

/// Signless divergence, the adjoint of the signless gradient.
pub fn signless_divergence<S: Scalar>(
    graph: &Graph<S>,
    phi: &EdgeFunction<S>,
    q: f64,
    r: f64,
) -> NodeFunction<S> {
    vertex_collapse(graph, phi, q, r, true)
}

fn vertex_collapse<S: Scalar>(
    graph: &Graph<S>,
    phi: &EdgeFunction<S>,
    q: f64,
    r: f64,
    signless: bool,
) -> NodeFunction<S> {
    assert_eq!(
        phi.values.len(),
        graph.slot_count(),
        "edge function length mismatch"
    );
    let half = S::from_f64_lit(0.5);
    let mut out = Vec::with_capacity(graph.vertex_count());
    for i in 0..graph.vertex_count() {
        let mut acc = S::zero();
        for slot in graph.row_range(i) {
            let w = graph.slot_weight(slot);
            let forward = phi.values[slot];
            let backward = phi.values[graph.reverse_slot(slot)];
            let pair = if signless {
                backward + forward
            } else {
                backward - forward
            };
            acc += w.powf64(q) * pair;
        }
        out.push(half * graph.degree(i).powf64(-r) * acc);
    }
    NodeFunction::new(out)
}

/// Edge inner product `<phi, psi>_E = 1/2 sum_ij phi_ij psi_ij w_ij^(2q-1)`.
pub fn inner_product_e<S: Scalar>(
    graph: &Graph<S>,
    phi: &EdgeFunction<S>,
    psi: &EdgeFunction<S>,
    q: f64,
) -> S {
    assert_eq!(phi.values.len(), graph.slot_count());
    assert_eq!(psi.values.len(), graph.slot_count());
    let half = S::from_f64_lit(0.5);
    let terms: Vec<S> = (0..graph.slot_count())
        .map(|s| phi.values[s] * psi.values[s] * graph.slot_weight(s).powf64(2.0 * q - 1.0))
        .collect();
    half * pairwise_sum(&terms)
}

/// Rayleigh quotient `<u, L u> / <u, u>` in the operator's natural inner
/// product (degree-weighted for r-parametric kinds, Euclidean for the
/// symmetric pair).
pub fn rayleigh<S: Scalar>(
    kind: OperatorKind,
    graph: &Graph<S>,
    u: &NodeFunction<S>,
) -> Result<S, OperatorError> {
    u.check_len(graph)?;
    let r = kind.r().unwrap_or(0.0);
    let denom = inner_product_v(graph, u, u, r);
    if denom == S::zero() {
        return Err(OperatorError::ZeroFunction);
    }
    let lu = apply(kind, graph, u);
    Ok(inner_product_v(graph, u, &lu, r) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::erdos_renyi;
    use crate::rng::CounterRng;

    fn k2() -> Graph<f64> {
        Graph::path(2)
    }

    fn random_connected(n: usize, p: f64, seed: u64) -> Graph<f64> {
        let g = erdos_renyi(n, p, seed);
        g.remove_isolated_nodes().unwrap().0
    }

    #[test]
    fn signless_on_bipartition_mode_is_zero() {
        let g = k2();
        let u = NodeFunction::new(vec![1.0, -1.0]);
        let out = apply(OperatorKind::signless(1.0), &g, &u);
        assert_eq!(out.values(), &[0.0, 0.0]);
    }

    #[test]
    fn signless_on_constant_has_eigenvalue_two() {
        let g = k2();
        let u = NodeFunction::constant(2, 1.0);
        let out = apply(OperatorKind::signless(1.0), &g, &u);
        assert_eq!(out.values(), &[2.0, 2.0]);
    }

    #[test]
    fn mirror_identity_l1() {
        let g = random_connected(10, 0.5, 3);
        let rng = CounterRng::new(11);
        let u = NodeFunction::new(rng.unit_vector(g.vertex_count()));
        let plus = apply(OperatorKind::signless(1.0), &g, &u);
        let minus = apply(OperatorKind::standard(1.0), &g, &u);
        for i in 0..g.vertex_count() {
            let two_u = 2.0 * u[i];
            assert!((plus[i] + minus[i] - two_u).abs() < 1e-12);
        }
        // Same identity for the symmetric pair.
        let plus = apply(OperatorKind::SignlessSym, &g, &u);
        let minus = apply(OperatorKind::StandardSym, &g, &u);
        for i in 0..g.vertex_count() {
            let two_u = 2.0 * u[i];
            assert!((plus[i] + minus[i] - two_u).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_of_constant_vanishes() {
        let g = random_connected(8, 0.6, 5);
        let u = NodeFunction::constant(g.vertex_count(), 3.5);
        let grad = gradient(&g, &u, 1.0);
        assert!(grad.values().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn signless_gradient_vanishes_on_bipartition() {
        let g: Graph<f64> = Graph::complete_bipartite(3, 4);
        let mut vals = vec![1.0; 3];
        vals.extend(vec![-1.0; 4]);
        let u = NodeFunction::new(vals);
        let grad = signless_gradient(&g, &u, 0.75);
        assert!(grad.values().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn signless_dirichlet_energy_expansion() {
        let g = random_connected(9, 0.5, 7);
        let rng = CounterRng::new(23);
        let u = NodeFunction::new(rng.unit_vector(g.vertex_count()));
        let grad = signless_gradient(&g, &u, 1.0);
        let half_norm_sq = 0.5 * inner_product_e(&g, &grad, &grad, 1.0);
        let mut quarter_sum = 0.0;
        for i in 0..g.vertex_count() {
            let (cols, ws) = g.row(i);
            for (&j, &w) in cols.iter().zip(ws) {
                let s = u[i] + u[j];
                quarter_sum += 0.25 * w * s * s;
            }
        }
        assert!((half_norm_sq - quarter_sum).abs() < 1e-12);
    }

    #[test]
    fn divergence_of_symmetric_phi_vanishes() {
        let g = random_connected(8, 0.5, 9);
        // phi_ij = w_ij is symmetric, so div phi = 0; antisymmetric phi kills div+.
        let symmetric =
            EdgeFunction::from_slots(&g, (0..g.slot_count()).map(|s| g.slot_weight(s)).collect());
        let div = divergence(&g, &symmetric, 1.0, 0.0);
        assert!(div.values().iter().all(|&x| x == 0.0));

        let antisym = EdgeFunction::from_slots(
            &g,
            (0..g.slot_count())
                .map(|s| {
                    let i = (0..g.vertex_count())
                        .find(|&v| g.row_range(v).contains(&s))
                        .unwrap();
                    let j = g.slot_target(s);
                    if i < j {
                        1.25
                    } else {
                        -1.25
                    }
                })
                .collect(),
        );
        let div_plus = signless_divergence(&g, &antisym, 1.0, 0.5);
        assert!(div_plus.values().iter().all(|&x| x.abs() == 0.0));

        let zero = EdgeFunction::zeros(&g);
        assert!(divergence(&g, &zero, 0.75, 1.0)
            .values()
            .iter()
            .all(|&x| x == 0.0));
    }

    #[test]
    fn adjointness_both_families() {
        for seed in 0..5u64 {
            let g = random_connected(10, 0.5, 40 + seed);
            let rng = CounterRng::new(seed);
            let u = NodeFunction::new(rng.substream(0).unit_vector(g.vertex_count()));
            let phi = EdgeFunction::from_slots(
                &g,
                (0..g.slot_count())
                    .map(|s| rng.substream(1).unit_at::<f64>(s as u64) - 0.5)
                    .collect(),
            );
            for q in [0.5, 0.75, 1.0] {
                for r in [0.0, 0.5, 1.0] {
                    let lhs = inner_product_e(&g, &gradient(&g, &u, q), &phi, q);
                    let rhs = inner_product_v(&g, &u, &divergence(&g, &phi, q, r), r);
                    assert!(
                        (lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0),
                        "grad adjoint seed {seed} q {q} r {r}: {lhs} vs {rhs}"
                    );
                    let lhs = inner_product_e(&g, &signless_gradient(&g, &u, q), &phi, q);
                    let rhs = inner_product_v(&g, &u, &signless_divergence(&g, &phi, q, r), r);
                    assert!(
                        (lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0),
                        "signless adjoint seed {seed} q {q} r {r}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }

    #[test]
    fn laplacian_is_divergence_of_gradient() {
        for seed in 0..5u64 {
            let g = random_connected(9, 0.6, 60 + seed);
            let rng = CounterRng::new(seed);
            let u = NodeFunction::new(rng.unit_vector(g.vertex_count()));
            for q in [0.5, 1.0] {
                for r in [0.0, 0.5, 1.0] {
                    let composed = divergence(&g, &gradient(&g, &u, q), q, r);
                    let direct = apply(OperatorKind::standard(r), &g, &u);
                    for i in 0..g.vertex_count() {
                        assert!((composed[i] - direct[i]).abs() < 1e-12);
                    }
                    let composed = signless_divergence(&g, &signless_gradient(&g, &u, q), q, r);
                    let direct = apply(OperatorKind::signless(r), &g, &u);
                    for i in 0..g.vertex_count() {
                        assert!((composed[i] - direct[i]).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn operators_are_self_adjoint_and_psd() {
        for seed in 0..5u64 {
            let g = random_connected(11, 0.5, 80 + seed);
            let rng = CounterRng::new(seed);
            let u = NodeFunction::new(rng.substream(0).unit_vector(g.vertex_count()));
            let v = NodeFunction::new(rng.substream(1).unit_vector(g.vertex_count()));
            for kind in [
                OperatorKind::standard(0.0),
                OperatorKind::standard(1.0),
                OperatorKind::signless(0.0),
                OperatorKind::signless(1.0),
            ] {
                let r = kind.r().unwrap();
                let lu = apply(kind, &g, &u);
                let lv = apply(kind, &g, &v);
                let a = inner_product_v(&g, &u, &lv, r);
                let b = inner_product_v(&g, &lu, &v, r);
                assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
                assert!(inner_product_v(&g, &u, &lu, r) >= -1e-12);
            }
        }
    }

    #[test]
    fn rayleigh_quotient_cases() {
        let g = k2();
        let ones = NodeFunction::constant(2, 1.0);
        let val = rayleigh(OperatorKind::signless(1.0), &g, &ones).unwrap();
        assert!((val - 2.0).abs() < 1e-15);

        // eigenfunction input reproduces its eigenvalue
        let mode = NodeFunction::new(vec![1.0, -1.0]);
        let val = rayleigh(OperatorKind::signless(1.0), &g, &mode).unwrap();
        assert!(val.abs() < 1e-15);

        let zero = NodeFunction::zeros(2);
        assert!(matches!(
            rayleigh(OperatorKind::standard(1.0), &g, &zero),
            Err(OperatorError::ZeroFunction)
        ));

        // random input stays within [0, 2] for the four normalized kinds
        for seed in 0..10u64 {
            let g = random_connected(12, 0.4, 100 + seed);
            let rng = CounterRng::new(seed);
            let u = NodeFunction::new(rng.unit_vector(g.vertex_count()));
            for kind in [
                OperatorKind::standard(1.0),
                OperatorKind::signless(1.0),
                OperatorKind::StandardSym,
                OperatorKind::SignlessSym,
            ] {
                let val = rayleigh(kind, &g, &u).unwrap();
                assert!((-1e-12..=2.0 + 1e-12).contains(&val), "{kind:?} gave {val}");
            }
        }
    }
}
