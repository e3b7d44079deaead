//! Evaluators for the Ginzburg-Landau style energies, the total variations,
//! and the binary limit functional. These double as test oracles: on binary
//! functions each of them reduces to an affine function of the cut size.

use crate::graph::{Graph, NodeFunction};
use crate::scalar::{pairwise_sum, Scalar};

/// Double-well potential `W(x) = (x^2 - 1)^2`, zero exactly at +1 and -1.
pub fn double_well<S: Scalar>(x: S) -> S {
    let y = x * x - S::one();
    y * y
}

/// `f_eps(u) = 1/2 sum_ij w_ij (u_i - u_j)^2 + 1/eps sum_i W(u_i)`.
pub fn gl_energy<S: Scalar>(graph: &Graph<S>, u: &NodeFunction<S>, eps: S) -> S {
    dirichlet_part(graph, u, false) + well_part(u, eps)
}

/// `f_eps^+(u) = 1/2 sum_ij w_ij (u_i + u_j)^2 + 1/eps sum_i W(u_i)`.
pub fn signless_gl_energy<S: Scalar>(graph: &Graph<S>, u: &NodeFunction<S>, eps: S) -> S {
    dirichlet_part(graph, u, true) + well_part(u, eps)
}

fn dirichlet_part<S: Scalar>(graph: &Graph<S>, u: &NodeFunction<S>, signless: bool) -> S {
    assert_eq!(
        u.len(),
        graph.vertex_count(),
        "node function length mismatch"
    );
    let half = S::from_f64_lit(0.5);
    let mut row_sums = Vec::with_capacity(graph.vertex_count());
    for i in 0..graph.vertex_count() {
        let (cols, ws) = graph.row(i);
        let mut acc = S::zero();
        for (&j, &w) in cols.iter().zip(ws) {
            let pair = if signless { u[i] + u[j] } else { u[i] - u[j] };
            acc += w * pair * pair;
        }
        row_sums.push(acc);
    }
    half * pairwise_sum(&row_sums)
}

fn well_part<S: Scalar>(u: &NodeFunction<S>, eps: S) -> S {
    assert!(eps > S::zero(), "eps must be positive");
    let wells: Vec<S> = u.values().iter().map(|&x| double_well(x)).collect();
    pairwise_sum(&wells) / eps
}

/// Graph total variation `TV(u) = 1/2 sum_ij w_ij^q |u_i - u_j|`.
pub fn total_variation<S: Scalar>(graph: &Graph<S>, u: &NodeFunction<S>, q: f64) -> S {
    variation(graph, u, q, false)
}

/// Signless total variation `TV+(u) = 1/2 sum_ij w_ij^q |u_i + u_j|`.
pub fn signless_total_variation<S: Scalar>(graph: &Graph<S>, u: &NodeFunction<S>, q: f64) -> S {
    variation(graph, u, q, true)
}

fn variation<S: Scalar>(graph: &Graph<S>, u: &NodeFunction<S>, q: f64, signless: bool) -> S {
    assert_eq!(
        u.len(),
        graph.vertex_count(),
        "node function length mismatch"
    );
    let half = S::from_f64_lit(0.5);
    let mut row_sums = Vec::with_capacity(graph.vertex_count());
    for i in 0..graph.vertex_count() {
        let (cols, ws) = graph.row(i);
        let mut acc = S::zero();
        for (&j, &w) in cols.iter().zip(ws) {
            let pair = if signless { u[i] + u[j] } else { u[i] - u[j] };
            acc += w.powf64(q) * pair.abs();
        }
        row_sums.push(acc);
    }
    half * pairwise_sum(&row_sums)
}

/// Value of the binary limit functional: finite only on +1/-1 valued inputs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GammaLimit<S> {
    Finite(S),
    Infinite,
}

impl<S: Scalar> GammaLimit<S> {
    pub fn is_finite(&self) -> bool {
        matches!(self, GammaLimit::Finite(_))
    }

    pub fn finite(&self) -> Option<S> {
        match self {
            GammaLimit::Finite(v) => Some(*v),
            GammaLimit::Infinite => None,
        }
    }
}

/// `f_0^+(u) = sum_ij w_ij |u_i + u_j|` on binary u, infinite otherwise.
///
/// Minimizing this over binary functions is exactly the Max-Cut problem;
/// an explicit `Infinite` variant keeps NaNs out of downstream arithmetic.
/// Entries count as binary within 1e-12 of +1 or -1.
pub fn gamma_limit<S: Scalar>(graph: &Graph<S>, u: &NodeFunction<S>) -> GammaLimit<S> {
    if !u.is_binary(S::from_f64_lit(1e-12)) {
        return GammaLimit::Infinite;
    }
    let two = S::from_f64_lit(2.0);
    GammaLimit::Finite(two * signless_total_variation(graph, u, 1.0))
}
