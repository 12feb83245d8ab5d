use super::{build_transition, Graph, GraphError, PageRankParams, TransitionMatrix};
use crate::fabric::{Fabric, FabricConfig, SimError};
use crate::kernel::{build_tiled_pagerank_iteration, ScheduleError};

#[derive(Debug, thiserror::Error)]
pub enum FabricRunError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("iteration {0}: fabric did not offload every rank")]
    MissingOutput(usize),
}

/// Ranks computed on the simulated fabric.
#[derive(Debug, Clone, PartialEq)]
pub struct FabricPageRank {
    pub ranks: Vec<f32>,
    pub iterations: usize,
    /// Simulated cycles summed over all iterations.
    pub timesteps: u64,
    /// `timesteps / clock_hz`.
    pub model_seconds: f64,
    /// Instructions that produced NaN or ±inf along the way.
    pub nonfinite: u64,
}

/// Build `H` from `g` and run [`fabric_pagerank_matrix`].
pub fn fabric_pagerank(g: &Graph, p: &PageRankParams, cfg: &FabricConfig) -> Result<FabricPageRank, FabricRunError> {
    fabric_pagerank_matrix(&build_transition(g), p, cfg)
}

/// Iterate PageRank on one fabric instance, one schedule per iteration
/// (tiled when `H` exceeds the fabric). Starts from the uniform vector.
pub fn fabric_pagerank_matrix(
    h: &TransitionMatrix,
    p: &PageRankParams,
    cfg: &FabricConfig,
) -> Result<FabricPageRank, FabricRunError> {
    p.validate()?;
    let n = h.size();
    let dense = h.to_matrix_f32();
    let mut fabric = Fabric::new(cfg.clone())?;
    let mut pr = vec![(1.0 / n as f64) as f32; n];
    let mut timesteps = 0;
    let mut iterations = 0;
    for it in 0..p.iterations {
        let (_, sched) = build_tiled_pagerank_iteration(&dense, &pr, p.damping, cfg)?;
        let outcome = fabric.run(&sched)?;
        debug_assert_eq!(outcome.timesteps, sched.expected_timesteps);
        timesteps += outcome.timesteps;
        iterations += 1;
        let next = outcome.output_vector(n).ok_or(FabricRunError::MissingOutput(it))?;
        let delta: f64 = next.iter().zip(&pr).map(|(a, b)| (a - b).abs() as f64).sum();
        pr = next;
        if p.tolerance.is_some_and(|t| delta < t) {
            break;
        }
    }
    Ok(FabricPageRank {
        ranks: pr,
        iterations,
        timesteps,
        model_seconds: timesteps as f64 / cfg.clock_hz,
        nonfinite: fabric.nonfinite_count(),
    })
}
