//! The signless MBO threshold-dynamics loop, its pinning diagnostic, and the
//! multi-seed driver.
//!
//! One iteration diffuses the current binary state under the chosen signless
//! Laplacian for time tau, then thresholds back to +1/-1. The loop records
//! the cut size and energy of every iterate and reports the best cut seen,
//! because the energy is not monotone along the iteration.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::diffusion::{
    diffuse_euler_explicit, diffuse_euler_implicit, diffuse_spectral, lambda_max_or_estimate,
    DiffusionError, DiffusionMethod,
};
use crate::functionals::signless_gl_energy;
use crate::graph::{cut_from_function, Cut, Graph, GraphError, NodeFunction};
use crate::operators::OperatorKind;
use crate::rng::CounterRng;
use crate::scalar::{pairwise_sum, Scalar};
use crate::spectra::{signless_basis_auto, SpectraError, SpectralBasis, DEFAULT_DENSE_CAP};

#[derive(Debug, Error)]
pub enum MboError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error("diffusion failed at MBO iteration {iteration}: {source}")]
    Diffusion {
        iteration: usize,
        #[source]
        source: DiffusionError,
    },
    #[error("MBO runs on a signless Laplacian, got {0}")]
    NotSignless(String),
    #[error("initial condition must be +1/-1 valued")]
    NonBinaryInitial,
    #[error("invalid MBO parameter: {0}")]
    InvalidParameter(String),
}

/// Why an MBO run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// Relative change dropped below eta after at least one real move.
    Converged,
    /// The very first iteration returned the initial state unchanged.
    Pinned,
    /// Iteration cap reached before the tolerance.
    MaxIterations,
    /// The diffused state collapsed to zero at machine precision.
    TrivialCut,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Termination::Converged => "converged",
            Termination::Pinned => "pinned",
            Termination::MaxIterations => "max_iters",
            Termination::TrivialCut => "trivial",
        };
        f.write_str(s)
    }
}

/// All parameters of one MBO experiment.
#[derive(Clone, Copy, Debug)]
pub struct MboConfig<S> {
    /// One of the signless Laplacians.
    pub operator: OperatorKind,
    pub method: DiffusionMethod,
    /// Diffusion time; `None` picks the default rule (20 for the
    /// degree-normalized kinds, `40 / lambda_n` for the unnormalized one).
    pub tau: Option<S>,
    /// Stopping tolerance on `|mu_j - mu_(j-1)|^2 / |mu_j|^2`.
    pub eta: S,
    pub max_iterations: usize,
    pub seed: u64,
    /// Epsilon used for the reported Ginzburg-Landau energy; the iterates are
    /// binary so this only shifts nothing (the well term vanishes).
    pub epsilon: S,
}

impl<S: Scalar> MboConfig<S> {
    pub fn new(operator: OperatorKind, method: DiffusionMethod) -> Self {
        Self {
            operator,
            method,
            tau: None,
            eta: S::from_f64_lit(1e-8),
            max_iterations: 300,
            seed: 0,
            epsilon: S::one(),
        }
    }

    pub fn with_tau(mut self, tau: S) -> Self {
        self.tau = Some(tau);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Default spectral truncation, `floor(n / 100)` clamped into `[1, n]`.
pub fn default_spectral_k(n: usize) -> usize {
    assert!(n >= 1);
    (n / 100).max(1).min(n)
}

/// Default number of Euler substeps.
pub const DEFAULT_EULER_STEPS: usize = 100;

/// Threshold to +1/-1; zero goes to -1.
pub fn threshold<S: Scalar>(u: &NodeFunction<S>) -> NodeFunction<S> {
    NodeFunction::new(
        u.values()
            .iter()
            .map(|&x| if x > S::zero() { S::one() } else { -S::one() })
            .collect(),
    )
}

/// True when the diffused state is numerically zero everywhere, which makes
/// the subsequent threshold meaningless (the "trivial cut" regime).
pub fn detect_trivial<S: Scalar>(u_tau: &NodeFunction<S>) -> bool {
    u_tau.norm_inf() <= S::from_f64_lit(1e-13)
}

/// One record per MBO iteration.
#[derive(Clone, Copy, Debug)]
pub struct IterationRecord<S> {
    pub iteration: usize,
    pub cut_size: S,
    pub energy: S,
    pub relative_change: S,
}

/// Best cut with its provenance.
#[derive(Clone, Debug)]
pub struct CutResult<S> {
    pub cut: Cut<S>,
    pub iteration: usize,
    pub run: u64,
}

/// Full per-iteration history of one MBO run.
#[derive(Clone, Debug)]
pub struct MboTrace<S> {
    pub records: Vec<IterationRecord<S>>,
    pub best: CutResult<S>,
    pub termination: Termination,
    /// Energy of the initial condition, for plotting from iteration zero.
    pub initial_energy: S,
}

impl<S: Scalar> MboTrace<S> {
    pub fn best_size(&self) -> S {
        self.best.cut.size
    }

    pub fn iterations(&self) -> usize {
        self.records.len()
    }
}

/// Reusable MBO driver: resolves tau, computes the spectral basis once, and
/// then runs any number of initial conditions against it.
#[derive(Debug)]
pub struct MboRunner<'g, S> {
    graph: &'g Graph<S>,
    config: MboConfig<S>,
    tau: S,
    basis: Option<SpectralBasis<S>>,
}

impl<'g, S: Scalar> MboRunner<'g, S> {
    pub fn new(graph: &'g Graph<S>, config: MboConfig<S>) -> Result<Self, MboError> {
        Self::build(graph, config, None)
    }

    /// Reuse an existing basis (e.g. across a K sweep); it must belong to the
    /// configured operator and hold at least the requested number of pairs.
    pub fn with_basis(
        graph: &'g Graph<S>,
        config: MboConfig<S>,
        basis: SpectralBasis<S>,
    ) -> Result<Self, MboError> {
        if basis.operator != config.operator {
            return Err(MboError::InvalidParameter(format!(
                "basis is for {}, config wants {}",
                basis.operator.label(),
                config.operator.label()
            )));
        }
        if let DiffusionMethod::Spectral { k } = config.method {
            if basis.k() < k {
                return Err(MboError::InvalidParameter(format!(
                    "basis holds {} pairs, config wants {k}",
                    basis.k()
                )));
            }
        }
        Self::build(graph, config, Some(basis))
    }

    fn build(
        graph: &'g Graph<S>,
        config: MboConfig<S>,
        prepared: Option<SpectralBasis<S>>,
    ) -> Result<Self, MboError> {
        if !config.operator.is_signless() {
            return Err(MboError::NotSignless(config.operator.label()));
        }
        if !(config.eta > S::zero()) {
            return Err(MboError::InvalidParameter("eta must be positive".into()));
        }
        if !(config.epsilon > S::zero()) {
            return Err(MboError::InvalidParameter(
                "epsilon must be positive".into(),
            ));
        }
        if config.max_iterations == 0 {
            return Err(MboError::InvalidParameter(
                "max_iterations must be at least 1".into(),
            ));
        }
        if let Some(tau) = config.tau {
            if !(tau > S::zero()) {
                return Err(MboError::InvalidParameter("tau must be positive".into()));
            }
        }
        match config.method {
            DiffusionMethod::Spectral { k } => {
                if k == 0 || k > graph.vertex_count() {
                    return Err(MboError::InvalidParameter(format!(
                        "spectral truncation k = {k} outside 1..={}",
                        graph.vertex_count()
                    )));
                }
            }
            DiffusionMethod::EulerExplicit { steps } | DiffusionMethod::EulerImplicit { steps } => {
                if steps == 0 {
                    return Err(MboError::InvalidParameter(
                        "Euler needs at least one step".into(),
                    ));
                }
            }
        }

        let basis = match (config.method, prepared) {
            (DiffusionMethod::Spectral { k }, Some(basis)) => Some(basis.truncated(k)),
            (DiffusionMethod::Spectral { k }, None) => Some(signless_basis_auto(
                graph,
                config.operator,
                k,
                config.seed,
                DEFAULT_DENSE_CAP,
            )?),
            _ => None,
        };

        let tau = match config.tau {
            Some(tau) => tau,
            None => default_tau(graph, config.operator, basis.as_ref()),
        };

        Ok(Self {
            graph,
            config,
            tau,
            basis,
        })
    }

    pub fn tau(&self) -> S {
        self.tau
    }

    pub fn basis(&self) -> Option<&SpectralBasis<S>> {
        self.basis.as_ref()
    }

    fn diffuse(&self, u: &NodeFunction<S>) -> Result<NodeFunction<S>, DiffusionError> {
        match self.config.method {
            DiffusionMethod::Spectral { .. } => diffuse_spectral(
                self.basis.as_ref().expect("spectral runner has a basis"),
                self.graph,
                u,
                self.tau,
            ),
            DiffusionMethod::EulerExplicit { steps } => {
                diffuse_euler_explicit(self.config.operator, self.graph, u, self.tau, steps)
            }
            DiffusionMethod::EulerImplicit { steps } => {
                diffuse_euler_implicit(self.config.operator, self.graph, u, self.tau, steps)
            }
        }
    }

    /// Run the threshold-dynamics loop from one binary initial condition.
    pub fn run(&self, mu0: &NodeFunction<S>, run_index: u64) -> Result<MboTrace<S>, MboError> {
        mu0.check_len(self.graph)?;
        if !mu0.is_binary(S::from_f64_lit(1e-12)) {
            return Err(MboError::NonBinaryInitial);
        }
        let n = self.graph.vertex_count();
        let n_scalar = S::from_f64_lit(n as f64);
        let snap = |x: &S| if *x > S::zero() { S::one() } else { -S::one() };
        let mut previous = NodeFunction::new(mu0.values().iter().map(snap).collect());
        let initial_energy = signless_gl_energy(self.graph, &previous, self.config.epsilon);

        let mut records = Vec::new();
        let mut best: Option<CutResult<S>> = None;
        let mut termination = Termination::MaxIterations;

        for iteration in 1..=self.config.max_iterations {
            let diffused = self
                .diffuse(&previous)
                .map_err(|source| MboError::Diffusion { iteration, source })?;
            let trivial = detect_trivial(&diffused);
            let current = threshold(&diffused);

            let flips = current
                .values()
                .iter()
                .zip(previous.values())
                .filter(|(a, b)| a != b)
                .count();
            let relative_change = S::from_f64_lit(4.0 * flips as f64) / n_scalar;

            let cut = cut_from_function(self.graph, &current);
            let energy = signless_gl_energy(self.graph, &current, self.config.epsilon);
            records.push(IterationRecord {
                iteration,
                cut_size: cut.size,
                energy,
                relative_change,
            });
            let replace = match &best {
                None => true,
                Some(b) => cut.size > b.cut.size,
            };
            if replace {
                best = Some(CutResult {
                    cut,
                    iteration,
                    run: run_index,
                });
            }

            if trivial {
                termination = Termination::TrivialCut;
                break;
            }
            if relative_change < self.config.eta {
                termination = if iteration == 1 && relative_change == S::zero() {
                    Termination::Pinned
                } else {
                    Termination::Converged
                };
                break;
            }
            previous = current;
        }

        Ok(MboTrace {
            records,
            best: best.expect("at least one iteration is always recorded"),
            termination,
            initial_energy,
        })
    }
}

/// Default diffusion time: 20 for the degree-normalized kinds, `40 / lambda_n`
/// for the unnormalized signless Laplacian (whose top eigenvalue is not
/// pinned at 2).
fn default_tau<S: Scalar>(
    graph: &Graph<S>,
    kind: OperatorKind,
    basis: Option<&SpectralBasis<S>>,
) -> S {
    let normalized = match kind {
        OperatorKind::Signless { r } | OperatorKind::Standard { r } => r == 1.0,
        _ => true,
    };
    if normalized {
        return S::from_f64_lit(20.0);
    }
    let lambda_n = basis
        .and_then(|b| b.lambda_n)
        .unwrap_or_else(|| lambda_max_or_estimate(kind, graph).0);
    S::from_f64_lit(40.0) / lambda_n
}

/// One full run from a given initial condition (constructs a fresh runner;
/// use [`MboRunner`] directly to amortize the eigenbasis over many runs).
pub fn mbo_run<S: Scalar>(
    graph: &Graph<S>,
    config: &MboConfig<S>,
    mu0: &NodeFunction<S>,
) -> Result<MboTrace<S>, MboError> {
    MboRunner::new(graph, *config)?.run(mu0, 0)
}

/// Pinning threshold `log(1 + d_min^(r/2) / |chi_V|_V) / lambda_n`: for any
/// diffusion time below this value one MBO iteration provably returns its
/// initial condition unchanged. For the symmetrically normalized kind the
/// bound is evaluated with r = 1.
pub fn pinning_bound<S: Scalar>(graph: &Graph<S>, kind: OperatorKind) -> Result<S, MboError> {
    if !kind.is_signless() {
        return Err(MboError::NotSignless(kind.label()));
    }
    let r = kind.r().unwrap_or(1.0);
    let lambda_n: S = {
        let exact_two = match kind {
            OperatorKind::Signless { r } => r == 1.0,
            OperatorKind::SignlessSym => true,
            _ => false,
        };
        if exact_two {
            S::from_f64_lit(2.0)
        } else if graph.vertex_count() <= DEFAULT_DENSE_CAP {
            crate::spectra::full_eigenbasis(graph, kind, DEFAULT_DENSE_CAP)?
                .lambda_n
                .expect("full basis knows its top eigenvalue")
        } else {
            // safe-side inflation of the power-iteration estimate
            lambda_max_or_estimate(kind, graph).0 * S::from_f64_lit(1.05)
        }
    };
    let d_min = graph.min_degree();
    let chi_terms: Vec<S> = graph.degrees().iter().map(|&d| d.powf64(r)).collect();
    let chi_norm = pairwise_sum(&chi_terms).sqrt();
    let bound = (S::one() + d_min.powf64(r / 2.0) / chi_norm).ln() / lambda_n;
    Ok(bound)
}

/// Per-run result inside a multi-run summary.
#[derive(Clone, Copy, Debug)]
pub struct RunOutcome<S> {
    pub run: u64,
    pub best_size: S,
    pub iterations: usize,
    pub termination: Termination,
}

/// Best/average/least statistics over independently seeded MBO runs.
#[derive(Clone, Debug)]
pub struct MultiRunSummary<S> {
    pub best: S,
    pub avg: S,
    pub least: S,
    pub outcomes: Vec<RunOutcome<S>>,
    /// Index of the run achieving `best` (earliest on ties).
    pub best_run: usize,
    /// Full trace of the best run, for energy plots and witness output.
    pub best_trace: MboTrace<S>,
    /// The diffusion time actually used (resolved from the default rule when
    /// the config left it unset).
    pub tau: S,
    pub wall_seconds: f64,
}

/// Run `runs` MBO evolutions from uniformly random binary initial conditions
/// derived from `(config.seed, run index)`, in parallel, and summarize.
///
/// Results are identical to sequential execution: every random draw is a
/// pure function of seed and indices, and the reduction is order-fixed.
pub fn multi_run<S: Scalar>(
    graph: &Graph<S>,
    config: &MboConfig<S>,
    runs: usize,
) -> Result<MultiRunSummary<S>, MboError> {
    let runner = MboRunner::new(graph, *config)?;
    multi_run_with(&runner, runs)
}

/// [`multi_run`] against an already-prepared runner (shared eigenbasis).
pub fn multi_run_with<S: Scalar>(
    runner: &MboRunner<'_, S>,
    runs: usize,
) -> Result<MultiRunSummary<S>, MboError> {
    assert!(runs >= 1, "need at least one run");
    let start = Instant::now();
    let graph = runner.graph;
    let config = &runner.config;
    let rng = CounterRng::new(config.seed);
    let n = graph.vertex_count();

    let traces: Vec<MboTrace<S>> = (0..runs as u64)
        .into_par_iter()
        .map(|run| {
            let mu0 = NodeFunction::new(rng.substream(run).sign_vector::<S>(n));
            runner.run(&mu0, run)
        })
        .collect::<Result<_, _>>()?;

    let mut best_run = 0;
    for (i, trace) in traces.iter().enumerate() {
        if trace.best_size() > traces[best_run].best_size() {
            best_run = i;
        }
    }
    let sizes: Vec<S> = traces.iter().map(|t| t.best_size()).collect();
    let best = sizes[best_run];
    let least = sizes.iter().copied().fold(S::infinity(), S::min);
    let avg = pairwise_sum(&sizes) / S::from_f64_lit(runs as f64);
    debug_assert!(best >= avg && avg >= least);

    let outcomes = traces
        .iter()
        .enumerate()
        .map(|(i, t)| RunOutcome {
            run: i as u64,
            best_size: t.best_size(),
            iterations: t.iterations(),
            termination: t.termination,
        })
        .collect();
    let best_trace = traces.into_iter().nth(best_run).expect("best_run in range");

    Ok(MultiRunSummary {
        best,
        avg,
        least,
        outcomes,
        best_run,
        best_trace,
        tau: runner.tau(),
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}
