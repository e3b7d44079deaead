//! Random graph generators for the experimental families: Erdos-Renyi,
//! random modular (community) graphs, and uniform edge reweighting.
//!
//! All randomness is counter-based over (seed, pair index), so the same spec
//! and seed produce the same graph on every platform and thread count.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, GraphError, MergePolicy};
use crate::rng::{bernoulli, CounterRng};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot parse generator spec '{input}': {msg}")]
    Parse { input: String, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Generator family with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GenFamily {
    /// Each unordered pair is an edge independently with probability `p`.
    ErdosRenyi { n: usize, p: f64 },
    /// `c` near-equal communities; `r` of the expected `p n(n-1)/2` edges are
    /// intra-community.
    Modular { n: usize, c: usize, p: f64, r: f64 },
    /// Multiply each edge weight of an existing graph by a uniform draw from
    /// `[lo, hi]`.
    Reweight { lo: f64, hi: f64 },
}

/// A generator family plus the seed that makes it deterministic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenSpec {
    pub family: GenFamily,
    pub seed: u64,
}

impl fmt::Display for GenFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GenFamily::ErdosRenyi { n, p } => write!(f, "er:{n},{p}"),
            GenFamily::Modular { n, c, p, r } => write!(f, "modular:{n},{c},{p},{r}"),
            GenFamily::Reweight { lo, hi } => write!(f, "reweight:{lo},{hi}"),
        }
    }
}

impl FromStr for GenFamily {
    type Err = GenError;

    /// Parses `er:N,P`, `modular:N,C,P,R`, or `reweight:LO,HI`.
    fn from_str(s: &str) -> Result<Self, GenError> {
        let parse_err = |msg: &str| GenError::Parse {
            input: s.to_string(),
            msg: msg.to_string(),
        };
        let (name, args) = s
            .split_once(':')
            .ok_or_else(|| parse_err("expected 'family:args'"))?;
        let parts: Vec<&str> = args.split(',').collect();
        let family = match name {
            "er" => {
                if parts.len() != 2 {
                    return Err(parse_err("er takes n,p"));
                }
                GenFamily::ErdosRenyi {
                    n: parts[0].parse().map_err(|_| parse_err("bad n"))?,
                    p: parts[1].parse().map_err(|_| parse_err("bad p"))?,
                }
            }
            "modular" => {
                if parts.len() != 4 {
                    return Err(parse_err("modular takes n,c,p,r"));
                }
                GenFamily::Modular {
                    n: parts[0].parse().map_err(|_| parse_err("bad n"))?,
                    c: parts[1].parse().map_err(|_| parse_err("bad c"))?,
                    p: parts[2].parse().map_err(|_| parse_err("bad p"))?,
                    r: parts[3].parse().map_err(|_| parse_err("bad r"))?,
                }
            }
            "reweight" => {
                if parts.len() != 2 {
                    return Err(parse_err("reweight takes lo,hi"));
                }
                GenFamily::Reweight {
                    lo: parts[0].parse().map_err(|_| parse_err("bad lo"))?,
                    hi: parts[1].parse().map_err(|_| parse_err("bad hi"))?,
                }
            }
            other => return Err(parse_err(&format!("unknown family '{other}'"))),
        };
        family.validate()?;
        Ok(family)
    }
}

impl GenFamily {
    pub fn validate(&self) -> Result<(), GenError> {
        let bad = |msg: &str| Err(GenError::InvalidParameter(msg.to_string()));
        match *self {
            GenFamily::ErdosRenyi { n, p } => {
                if n == 0 {
                    return bad("er: n must be at least 1");
                }
                if !(0.0..=1.0).contains(&p) {
                    return bad("er: p must be in [0, 1]");
                }
            }
            GenFamily::Modular { n, c, p, r } => {
                if c == 0 || c > n {
                    return bad("modular: need 1 <= c <= n");
                }
                if !(p > 0.0 && p <= 1.0) {
                    return bad("modular: p must be in (0, 1]");
                }
                if !(0.0..=1.0).contains(&r) {
                    return bad("modular: r must be in [0, 1]");
                }
            }
            GenFamily::Reweight { lo, hi } => {
                if !(lo >= 0.0 && hi >= lo && hi > 0.0) {
                    return bad("reweight: need 0 <= lo <= hi and hi > 0");
                }
            }
        }
        Ok(())
    }
}

/// One Erdos-Renyi realization `G(n, p)`, unweighted. Isolated vertices are
/// kept; callers decide whether to clean them up.
pub fn erdos_renyi<S: Scalar>(n: usize, p: f64, seed: u64) -> Graph<S> {
    assert!(n >= 1, "n must be at least 1");
    assert!((0.0..=1.0).contains(&p), "p must be in [0, 1]");
    let rng = CounterRng::new(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let counter = (i as u64) * (n as u64) + j as u64;
            if bernoulli(rng.u64_at(counter), p) {
                edges.push((i, j, S::one()));
            }
        }
    }
    Graph::from_edges(n, edges, MergePolicy::Error).expect("generated edges are simple")
}

/// A modular realization together with its community labels.
#[derive(Clone, Debug)]
pub struct ModularGraph<S> {
    pub graph: Graph<S>,
    pub communities: Vec<usize>,
}

/// Random modular graph `R(n, c, p, r)`.
///
/// Expected edge count is `p n(n-1)/2`, split so that a fraction `r` of it
/// falls inside communities. Communities are contiguous index blocks of
/// near-equal size (the first `n mod c` get one extra vertex).
pub fn modular<S: Scalar>(n: usize, c: usize, p: f64, r: f64, seed: u64) -> ModularGraph<S> {
    assert!(c >= 1 && c <= n, "need 1 <= c <= n");
    assert!(p > 0.0 && p <= 1.0, "p must be in (0, 1]");
    assert!((0.0..=1.0).contains(&r), "r must be in [0, 1]");

    let base = n / c;
    let extra = n % c;
    let mut communities = Vec::with_capacity(n);
    for k in 0..c {
        let size = base + usize::from(k < extra);
        communities.extend(std::iter::repeat_n(k, size));
    }

    let total_pairs = n as f64 * (n as f64 - 1.0) / 2.0;
    let intra_pairs: f64 = (0..c)
        .map(|k| {
            let s = (base + usize::from(k < extra)) as f64;
            s * (s - 1.0) / 2.0
        })
        .sum();
    let inter_pairs = total_pairs - intra_pairs;
    let expected_edges = p * total_pairs;

    let (p_in, p_out) = if inter_pairs == 0.0 {
        (p, 0.0)
    } else if intra_pairs == 0.0 {
        (0.0, p)
    } else {
        (
            (r * expected_edges / intra_pairs).min(1.0),
            ((1.0 - r) * expected_edges / inter_pairs).min(1.0),
        )
    };

    let rng = CounterRng::new(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let counter = (i as u64) * (n as u64) + j as u64;
            let prob = if communities[i] == communities[j] {
                p_in
            } else {
                p_out
            };
            if bernoulli(rng.u64_at(counter), prob) {
                edges.push((i, j, S::one()));
            }
        }
    }
    let graph =
        Graph::from_edges(n, edges, MergePolicy::Error).expect("generated edges are simple");
    ModularGraph { graph, communities }
}

/// Multiply every edge weight by an independent uniform draw from `[lo, hi]`
/// (one draw per undirected edge). Weights that come out exactly zero are
/// removed as edges, which can leave isolated vertices behind.
pub fn reweight<S: Scalar>(graph: &Graph<S>, lo: f64, hi: f64, seed: u64) -> Graph<S> {
    assert!(
        lo >= 0.0 && hi >= lo && hi > 0.0,
        "need 0 <= lo <= hi, hi > 0"
    );
    let rng = CounterRng::new(seed);
    let n = graph.vertex_count();
    let span = S::from_f64_lit(hi - lo);
    let lo = S::from_f64_lit(lo);
    let edges: Vec<(usize, usize, S)> = graph
        .undirected_edges()
        .map(|(i, j, w)| {
            let counter = (i as u64) * (n as u64) + j as u64;
            let factor = lo + span * rng.unit_at::<S>(counter);
            (i, j, w * factor)
        })
        .collect();
    Graph::from_edges(n, edges, MergePolicy::Error).expect("reweighted edges stay simple")
}

/// Random bipartite graph: sides `0..a` and `a..a+b`, each cross pair an
/// edge independently with probability `p`. Handy as a fixture family where
/// the maximum cut is known once the graph is connected.
pub fn random_bipartite<S: Scalar>(a: usize, b: usize, p: f64, seed: u64) -> Graph<S> {
    assert!(a >= 1 && b >= 1, "both sides must be non-empty");
    assert!((0.0..=1.0).contains(&p), "p must be in [0, 1]");
    let n = a + b;
    let rng = CounterRng::new(seed);
    let mut edges = Vec::new();
    for i in 0..a {
        for j in a..n {
            let counter = (i as u64) * (n as u64) + j as u64;
            if bernoulli(rng.u64_at(counter), p) {
                edges.push((i, j, S::one()));
            }
        }
    }
    Graph::from_edges(n, edges, MergePolicy::Error).expect("generated edges are simple")
}

/// Realize a generator family (ER or modular). `Reweight` needs a base graph
/// and is applied separately via [`reweight`].
pub fn generate<S: Scalar>(spec: &GenSpec) -> Result<Graph<S>, GenError> {
    spec.family.validate()?;
    match spec.family {
        GenFamily::ErdosRenyi { n, p } => Ok(erdos_renyi(n, p, spec.seed)),
        GenFamily::Modular { n, c, p, r } => Ok(modular(n, c, p, r, spec.seed).graph),
        GenFamily::Reweight { .. } => Err(GenError::InvalidParameter(
            "reweight needs an input graph".into(),
        )),
    }
}
