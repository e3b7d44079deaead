//! Ground-truth and baseline cut producers for acceptance testing: exact
//! brute force over all partitions, a uniform random baseline, and
//! single-flip greedy local search.

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{cut_from_function, Cut, Graph, NodeFunction};
use crate::rng::CounterRng;
use crate::scalar::{pairwise_sum, Scalar};

/// Hard cap on exhaustive enumeration; 2^(24-1) candidates is the most the
/// Gray-code scan should be asked to do at desk scale.
pub const BRUTE_FORCE_CAP: usize = 24;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("graph has {n} vertices, above the brute-force cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("graph has no vertices")]
    Empty,
}

/// Result of an exhaustive Max-Cut search.
#[derive(Clone, Debug)]
pub struct OracleResult<S> {
    /// The maximum cut size.
    pub optimum: S,
    /// A partition achieving it; its edge-scan size equals `optimum` exactly.
    pub witness: NodeFunction<S>,
    /// Number of candidate partitions examined, `2^(n-1)`.
    pub enumerated: u64,
}

/// Exact maximum cut by Gray-code enumeration with vertex 0 fixed to +1
/// (the complement of a cut has the same size, so half the patterns suffice).
/// Each Gray step flips one vertex and updates the cut in O(degree).
pub fn brute_force_maxcut<S: Scalar>(graph: &Graph<S>) -> Result<OracleResult<S>, OracleError> {
    brute_force_maxcut_fixing(graph, 0)
}

/// Same search with an arbitrary vertex pinned to +1; the optimum must not
/// depend on the choice.
pub fn brute_force_maxcut_fixing<S: Scalar>(
    graph: &Graph<S>,
    fixed: usize,
) -> Result<OracleResult<S>, OracleError> {
    let n = graph.vertex_count();
    if n == 0 {
        return Err(OracleError::Empty);
    }
    if n > BRUTE_FORCE_CAP {
        return Err(OracleError::CapExceeded {
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    assert!(fixed < n, "fixed vertex out of range");
    let free: Vec<usize> = (0..n).filter(|&v| v != fixed).collect();
    let bits = free.len();
    let enumerated = 1u64 << bits;

    // split the leading prefix bits across workers; each block walks its own
    // Gray code over the remaining bits
    let prefix_bits = if bits >= 14 { 4 } else { 0 };
    let blocks = 1u64 << prefix_bits;
    let suffix_bits = bits - prefix_bits;

    let best_of_block = |block: u64| -> (S, Vec<i8>) {
        let mut side = vec![1i8; n];
        for (b, &v) in free.iter().take(prefix_bits).enumerate() {
            if block >> b & 1 == 1 {
                side[v] = -1;
            }
        }
        let mut cut = crate::graph::cut_size_edge_scan(graph, &side);
        let mut best = cut;
        let mut best_side = side.clone();
        let suffix_vertices = &free[prefix_bits..];

        for step in 1..(1u64 << suffix_bits) {
            let v = suffix_vertices[step.trailing_zeros() as usize];
            // flipping v changes the cut by sum_j w_vj s_v s_j (pre-flip)
            let (cols, ws) = graph.row(v);
            let mut delta = S::zero();
            for (&j, &w) in cols.iter().zip(ws) {
                let aligned = side[v] == side[j];
                delta += if aligned { w } else { -w };
            }
            cut += delta;
            side[v] = -side[v];
            if cut > best {
                // exact rescan guards against drift in the running value
                let exact = crate::graph::cut_size_edge_scan(graph, &side);
                if exact > best {
                    best = exact;
                    best_side.copy_from_slice(&side);
                }
                cut = exact;
            }
        }
        (best, best_side)
    };

    let candidates: Vec<(S, Vec<i8>)> = if blocks > 1 {
        (0..blocks).into_par_iter().map(best_of_block).collect()
    } else {
        (0..blocks).map(best_of_block).collect()
    };

    // order-fixed reduction: larger cut wins, ties go to the
    // lexicographically smaller witness
    let mut candidates = candidates.into_iter();
    let mut best = candidates.next().expect("at least one block");
    for cand in candidates {
        if cand.0 > best.0 || (cand.0 == best.0 && cand.1 < best.1) {
            best = cand;
        }
    }

    let witness = NodeFunction::new(
        best.1
            .iter()
            .map(|&s| if s > 0 { S::one() } else { -S::one() })
            .collect(),
    );
    let optimum = crate::graph::cut_size_edge_scan(graph, &best.1);
    Ok(OracleResult {
        optimum,
        witness,
        enumerated,
    })
}

/// Best/average/least over uniformly random sign vectors.
#[derive(Clone, Copy, Debug)]
pub struct BaselineSummary<S> {
    pub best: S,
    pub avg: S,
    pub least: S,
    pub runs: usize,
}

/// Uniform random-partition baseline; its average tends to half the total
/// edge weight.
pub fn random_cut_baseline<S: Scalar>(
    graph: &Graph<S>,
    runs: usize,
    seed: u64,
) -> BaselineSummary<S> {
    assert!(runs >= 1, "need at least one run");
    let rng = CounterRng::new(seed);
    let n = graph.vertex_count();
    let sizes: Vec<S> = (0..runs as u64)
        .map(|run| {
            let u = NodeFunction::new(rng.substream(run).sign_vector::<S>(n));
            cut_from_function(graph, &u).size
        })
        .collect();
    let best = sizes.iter().copied().fold(S::neg_infinity(), S::max);
    let least = sizes.iter().copied().fold(S::infinity(), S::min);
    let avg = pairwise_sum(&sizes) / S::from_f64_lit(runs as f64);
    BaselineSummary {
        best,
        avg,
        least,
        runs,
    }
}

/// Single-flip hill climbing from `start` (thresholded to +1/-1) until no
/// vertex move increases the cut. The result is single-flip optimal and at
/// least half the total edge weight.
pub fn greedy_local_search<S: Scalar>(graph: &Graph<S>, start: &NodeFunction<S>) -> Cut<S> {
    assert_eq!(start.len(), graph.vertex_count(), "length mismatch");
    let n = graph.vertex_count();
    let mut side: Vec<i8> = start
        .values()
        .iter()
        .map(|&x| if x > S::zero() { 1 } else { -1 })
        .collect();

    loop {
        let mut improved = false;
        for v in 0..n {
            let (cols, ws) = graph.row(v);
            let mut gain = S::zero();
            for (&j, &w) in cols.iter().zip(ws) {
                gain += if side[v] == side[j] { w } else { -w };
            }
            if gain > S::zero() {
                side[v] = -side[v];
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }

    let size = crate::graph::cut_size_edge_scan(graph, &side);
    Cut { side, size }
}
