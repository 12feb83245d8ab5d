use super::matvec::{offload_sinks, push_tile, MatrixShape, Tile, TilePlan};
use super::{InjectionSchedule, Matrix, ScheduleError};
use crate::fabric::{BusOp, FabricConfig};
use crate::isa::{MessageWord, Opcode};

/// Teleport term `(1 - d) / N`, rounded once to single precision.
pub fn teleport_term(damping: f64, n: usize) -> f32 {
    ((1.0 - damping) / n as f64) as f32
}

fn check(h: &Matrix, pr: &[f32], damping: f64) -> Result<(), ScheduleError> {
    if h.rows() != h.cols() {
        return Err(ScheduleError::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    if h.rows() == 0 {
        return Err(ScheduleError::EmptyMatrix);
    }
    if pr.len() != h.cols() {
        return Err(ScheduleError::DimensionMismatch {
            expected: h.cols(),
            found: pr.len(),
        });
    }
    if !(0.0..=1.0).contains(&damping) {
        return Err(ScheduleError::InvalidDamping(damping));
    }
    Ok(())
}

/// Three post-matvec steps on one row block's sinks: scale by `d`, add the
/// teleport term, offload.
fn push_finish(
    sched: &mut InjectionSchedule,
    cfg: &FabricConfig,
    sink: usize,
    n: usize,
    last_tile_of_block: &Tile,
    t: u64,
    damping: f64,
) -> u64 {
    let rows = 0..last_tile_of_block.rows;
    let head = cfg.address(0, sink) as u16;
    sched.bus(
        t,
        BusOp::ColumnBroadcast {
            col: sink,
            rows: rows.clone(),
            word: MessageWord::simple(Opcode::Mul, head, damping as f32),
        },
    );
    sched.bus(
        t + 1,
        BusOp::ColumnBroadcast {
            col: sink,
            rows,
            word: MessageWord::simple(Opcode::Add, head, teleport_term(damping, n)),
        },
    );
    sched.bus(t + 2, offload_sinks(cfg, last_tile_of_block, sink));
    t + 3
}

/// One power-iteration step `PR' = d·H·PR + (1-d)/N` on a fabric that holds
/// `H` whole: the matvec (`N + 3`), a vertical-bus `A_MUL d` on the sink
/// column, a vertical-bus `A_ADD (1-d)/N`, and an offload. `N + 6` steps.
pub fn build_pagerank_iteration(
    h: &Matrix,
    pr_prev: &[f32],
    damping: f64,
    cfg: &FabricConfig,
) -> Result<InjectionSchedule, ScheduleError> {
    check(h, pr_prev, damping)?;
    let shape = MatrixShape::new(h.rows(), h.cols());
    if !shape.fits_untiled(cfg) {
        return Err(ScheduleError::NeedsTiling {
            rows: shape.rows,
            cols: shape.cols,
            fabric_rows: cfg.rows,
            fabric_cols: cfg.cols,
        });
    }
    build_tiled_pagerank_iteration(h, pr_prev, damping, cfg).map(|(_, s)| s)
}

/// As [`build_pagerank_iteration`] for any `N`: each row block runs its
/// column-block tiles, then scales, adds the teleport term and offloads
/// its sinks. Falls back to exactly the untiled schedule when `H` fits.
pub fn build_tiled_pagerank_iteration(
    h: &Matrix,
    pr_prev: &[f32],
    damping: f64,
    cfg: &FabricConfig,
) -> Result<(TilePlan, InjectionSchedule), ScheduleError> {
    check(h, pr_prev, damping)?;
    let mut plan = TilePlan::new(MatrixShape::new(h.rows(), h.cols()), cfg)?;
    let mut sched = InjectionSchedule::new();
    let (sink, col_blocks, n) = (plan.sink_col, plan.col_blocks, plan.shape.rows);
    let mut t = 0;
    for tile in plan.tiles.iter_mut() {
        tile.start = t;
        t = push_tile(&mut sched, cfg, h, pr_prev, tile, sink);
        if tile.col_block + 1 == col_blocks {
            t = push_finish(&mut sched, cfg, sink, n, tile, t, damping);
        }
    }
    sched.expected_timesteps = t;
    Ok((plan, sched))
}

/// Timesteps of one (possibly tiled) iteration on `cfg`.
pub fn pagerank_iteration_timesteps(n: usize, cfg: &FabricConfig) -> Result<u64, ScheduleError> {
    let plan = TilePlan::new(MatrixShape::new(n, n), cfg)?;
    Ok(plan.timesteps() + 3 * plan.row_blocks as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_nodes_take_ten_steps() {
        let cfg = FabricConfig::new(5, 5).unwrap();
        let h = Matrix::from_fn(4, 4, |i, j| if i != j { 1.0 / 3.0 } else { 0.0 });
        let s = build_pagerank_iteration(&h, &[0.25; 4], 0.85, &cfg).unwrap();
        assert_eq!(s.expected_timesteps, 10);
        s.validate().unwrap();
        assert_eq!(pagerank_iteration_timesteps(4, &cfg).unwrap(), 10);
    }

    #[test]
    fn rejects_bad_inputs() {
        let cfg = FabricConfig::new(5, 5).unwrap();
        let h = Matrix::zeros(2, 3);
        assert!(matches!(
            build_pagerank_iteration(&h, &[0.5; 3], 0.85, &cfg),
            Err(ScheduleError::NotSquare { .. })
        ));
        let h = Matrix::zeros(2, 2);
        assert!(matches!(
            build_pagerank_iteration(&h, &[0.5; 2], 1.5, &cfg),
            Err(ScheduleError::InvalidDamping(_))
        ));
        let h = Matrix::zeros(5, 5);
        assert!(matches!(
            build_pagerank_iteration(&h, &[0.2; 5], 0.85, &cfg),
            Err(ScheduleError::NeedsTiling { .. })
        ));
    }

    #[test]
    fn tiled_iteration_length() {
        let cfg = FabricConfig::new(4, 5).unwrap();
        let h = Matrix::zeros(8, 8);
        let (plan, s) = build_tiled_pagerank_iteration(&h, &[0.125; 8], 0.85, &cfg).unwrap();
        assert_eq!((plan.row_blocks, plan.col_blocks), (2, 2));
        // four 4-row tiles plus a 3-step finish per row block
        assert_eq!(s.expected_timesteps, 4 * 7 + 2 * 3);
        assert_eq!(pagerank_iteration_timesteps(8, &cfg).unwrap(), s.expected_timesteps);
        s.validate().unwrap();
    }
}
