use super::{InjectionSchedule, Matrix, ScheduleError};
use crate::fabric::{BusOp, FabricConfig, OffloadRead, Port};
use crate::isa::{MessageWord, Opcode};

/// Matrix-vector problem size: `A` is `rows × cols`, `B` has `cols` entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixShape {
    pub rows: usize,
    pub cols: usize,
}

impl MatrixShape {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols }
    }

    /// Sites used by an untiled mapping: the matrix plus one sink per row.
    pub fn sites_required(&self) -> usize {
        self.rows * self.cols + self.rows
    }

    /// Matrix occupies columns `0..cols`, sinks sit in column `cols`.
    pub fn fits_untiled(&self, cfg: &FabricConfig) -> bool {
        self.rows >= 1
            && self.cols >= 1
            && self.rows <= cfg.rows
            && self.cols < cfg.cols
            && self.sites_required() <= cfg.sites()
    }
}

/// One block of the matrix, mapped onto the fabric's top-left corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tile {
    pub row_block: usize,
    pub col_block: usize,
    pub row_offset: usize,
    pub col_offset: usize,
    pub rows: usize,
    pub cols: usize,
    /// First timestep of this tile in the combined schedule.
    pub start: u64,
}

impl Tile {
    pub fn timesteps(&self) -> u64 {
        self.rows as u64 + 3
    }
}

/// Partition of a matrix into fabric-sized blocks.
///
/// Tiles run one after another in `tiles` order: row blocks outer, column
/// blocks inner and ascending, which is also the order partial sums
/// accumulate in at the sinks.
#[derive(Debug, Clone, PartialEq)]
pub struct TilePlan {
    pub shape: MatrixShape,
    pub tile_rows: usize,
    pub tile_cols: usize,
    pub row_blocks: usize,
    pub col_blocks: usize,
    /// Column holding the per-row sinks for every tile.
    pub sink_col: usize,
    pub tiles: Vec<Tile>,
}

impl TilePlan {
    pub fn new(shape: MatrixShape, cfg: &FabricConfig) -> Result<Self, ScheduleError> {
        if shape.rows == 0 || shape.cols == 0 {
            return Err(ScheduleError::EmptyMatrix);
        }
        let (tile_rows, tile_cols, sink_col) = if shape.fits_untiled(cfg) {
            (shape.rows, shape.cols, shape.cols)
        } else {
            if cfg.cols < 2 {
                return Err(ScheduleError::Unschedulable {
                    rows: cfg.rows,
                    cols: cfg.cols,
                });
            }
            (cfg.rows, cfg.cols - 1, cfg.cols - 1)
        };
        let row_blocks = shape.rows.div_ceil(tile_rows);
        let col_blocks = shape.cols.div_ceil(tile_cols);
        let mut tiles = Vec::with_capacity(row_blocks * col_blocks);
        let mut start = 0u64;
        for rb in 0..row_blocks {
            for cb in 0..col_blocks {
                let row_offset = rb * tile_rows;
                let col_offset = cb * tile_cols;
                let tile = Tile {
                    row_block: rb,
                    col_block: cb,
                    row_offset,
                    col_offset,
                    rows: tile_rows.min(shape.rows - row_offset),
                    cols: tile_cols.min(shape.cols - col_offset),
                    start,
                };
                start += tile.timesteps();
                tiles.push(tile);
            }
        }
        Ok(Self {
            shape,
            tile_rows,
            tile_cols,
            row_blocks,
            col_blocks,
            sink_col,
            tiles,
        })
    }

    pub fn is_single_tile(&self) -> bool {
        self.tiles.len() == 1
    }

    /// Sum of per-tile latencies.
    pub fn timesteps(&self) -> u64 {
        self.tiles.iter().map(Tile::timesteps).sum()
    }
}

fn check_vector(a: &Matrix, b: &[f32]) -> Result<(), ScheduleError> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(ScheduleError::EmptyMatrix);
    }
    if b.len() != a.cols() {
        return Err(ScheduleError::DimensionMismatch {
            expected: a.cols(),
            found: b.len(),
        });
    }
    Ok(())
}

/// Append one tile's four stages starting at `tile.start`:
///
/// 1. `rows` load steps: matrix rows enter through the top edge, last row
///    first, and hop down to their sites. Each matrix site latches
///    `A_ADD → sink`. On the first column block the sinks are zeroed in the
///    same wave.
/// 2. one vertical-bus step: `A_MULS b_j` down every loaded column.
/// 3. one horizontal-bus step: each row's products fold into its sink.
/// 4. one offload step: sinks are read into output slots `row_offset + r`.
///
/// Returns the first timestep after the tile.
pub(crate) fn push_tile(
    sched: &mut InjectionSchedule,
    cfg: &FabricConfig,
    a: &Matrix,
    b: &[f32],
    tile: &Tile,
    sink_col: usize,
) -> u64 {
    let t0 = tile.start;
    let addr = |r: usize, c: usize| cfg.address(r, c) as u16;

    for k in 0..tile.rows {
        let r = tile.rows - 1 - k;
        let t = t0 + k as u64;
        for j in 0..tile.cols {
            let value = a.get(tile.row_offset + r, tile.col_offset + j);
            let word = MessageWord::new(Opcode::Prog, addr(r, j), value, Opcode::Add, addr(r, sink_col));
            sched.inject(t, Port::TopEdge(j), word);
        }
        if tile.col_block == 0 {
            let zero = MessageWord::simple(Opcode::Prog, addr(r, sink_col), 0.0);
            sched.inject(t, Port::TopEdge(sink_col), zero);
        }
    }

    let t_mul = t0 + tile.rows as u64;
    for j in 0..tile.cols {
        sched.bus(
            t_mul,
            BusOp::ColumnBroadcast {
                col: j,
                rows: 0..tile.rows,
                word: MessageWord::simple(Opcode::MulS, addr(0, j), b[tile.col_offset + j]),
            },
        );
    }

    for r in 0..tile.rows {
        sched.bus(
            t_mul + 1,
            BusOp::RowReduce {
                row: r,
                sink: cfg.address(r, sink_col),
            },
        );
    }

    sched.bus(t_mul + 2, offload_sinks(cfg, tile, sink_col));
    t_mul + 3
}

pub(crate) fn offload_sinks(cfg: &FabricConfig, tile: &Tile, sink_col: usize) -> BusOp {
    BusOp::Offload {
        reads: (0..tile.rows)
            .map(|r| OffloadRead {
                site: cfg.address(r, sink_col),
                slot: tile.row_offset + r,
            })
            .collect(),
    }
}

/// Lower `y = A·B` onto a fabric that holds the whole matrix.
///
/// Takes exactly `N + 3` timesteps for an `N`-row matrix whatever its width;
/// `y_i` ends up in slot `i` of the run outputs and in the sink at
/// `(i, M)`.
pub fn build_matvec(a: &Matrix, b: &[f32], cfg: &FabricConfig) -> Result<InjectionSchedule, ScheduleError> {
    check_vector(a, b)?;
    let shape = MatrixShape::new(a.rows(), a.cols());
    if !shape.fits_untiled(cfg) {
        return Err(ScheduleError::NeedsTiling {
            rows: shape.rows,
            cols: shape.cols,
            fabric_rows: cfg.rows,
            fabric_cols: cfg.cols,
        });
    }
    let plan = TilePlan::new(shape, cfg)?;
    let mut sched = InjectionSchedule::new();
    let end = push_tile(&mut sched, cfg, a, b, &plan.tiles[0], plan.sink_col);
    sched.expected_timesteps = end;
    Ok(sched)
}

/// Lower `y = A·B` for any matrix size by running the untiled kernel once
/// per tile. Tiles are `R × (C-1)`; the last fabric column holds the sinks,
/// where column blocks accumulate with A_ADD in ascending order.
pub fn build_tiled_matvec(
    a: &Matrix,
    b: &[f32],
    cfg: &FabricConfig,
) -> Result<(TilePlan, InjectionSchedule), ScheduleError> {
    check_vector(a, b)?;
    let plan = TilePlan::new(MatrixShape::new(a.rows(), a.cols()), cfg)?;
    let mut sched = InjectionSchedule::new();
    let mut end = 0;
    for tile in &plan.tiles {
        end = push_tile(&mut sched, cfg, a, b, tile, plan.sink_col);
    }
    sched.expected_timesteps = end;
    debug_assert_eq!(end, plan.timesteps());
    Ok((plan, sched))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_fit_rules() {
        let cfg = FabricConfig::new(4, 4).unwrap();
        assert!(MatrixShape::new(4, 3).fits_untiled(&cfg));
        assert!(!MatrixShape::new(4, 4).fits_untiled(&cfg));
        assert!(!MatrixShape::new(5, 2).fits_untiled(&cfg));
        assert_eq!(MatrixShape::new(4, 3).sites_required(), 16);
    }

    #[test]
    fn four_by_three_declares_n_plus_3() {
        let cfg = FabricConfig::new(4, 4).unwrap();
        let a = Matrix::from_fn(4, 3, |i, j| (i * 3 + j) as f32);
        let s = build_matvec(&a, &[1.0, 2.0, 3.0], &cfg).unwrap();
        assert_eq!(s.expected_timesteps, 7);
        s.validate().unwrap();
    }

    #[test]
    fn oversize_matrix_needs_tiling() {
        let cfg = FabricConfig::new(4, 4).unwrap();
        let a = Matrix::zeros(8, 8);
        assert!(matches!(
            build_matvec(&a, &[0.0; 8], &cfg),
            Err(ScheduleError::NeedsTiling { .. })
        ));
    }

    #[test]
    fn tiling_plan_covers_exactly() {
        let cfg = FabricConfig::new(4, 5).unwrap();
        let plan = TilePlan::new(MatrixShape::new(8, 8), &cfg).unwrap();
        assert_eq!((plan.row_blocks, plan.col_blocks), (2, 2));
        assert_eq!((plan.tile_rows, plan.tile_cols, plan.sink_col), (4, 4, 4));
        let mut hits = vec![0u32; 64];
        for t in &plan.tiles {
            assert!(t.rows * t.cols <= cfg.sites());
            for i in t.row_offset..t.row_offset + t.rows {
                for j in t.col_offset..t.col_offset + t.cols {
                    hits[i * 8 + j] += 1;
                }
            }
        }
        assert!(hits.iter().all(|&h| h == 1));

        // ragged edge blocks
        let plan = TilePlan::new(MatrixShape::new(9, 7), &cfg).unwrap();
        assert_eq!((plan.row_blocks, plan.col_blocks), (3, 2));
        assert_eq!(plan.tiles.last().unwrap().rows, 1);
        assert_eq!(plan.tiles.last().unwrap().cols, 3);
        assert_eq!(plan.timesteps(), 2 * (4 + 3) * 2 + 2 * (1 + 3));
    }

    #[test]
    fn single_column_fabric_is_unschedulable() {
        let cfg = FabricConfig::new(4, 1).unwrap();
        let a = Matrix::zeros(2, 2);
        assert!(matches!(
            build_tiled_matvec(&a, &[0.0; 2], &cfg),
            Err(ScheduleError::Unschedulable { .. })
        ));
    }

    #[test]
    fn fitting_matrix_tiles_to_the_untiled_schedule() {
        let cfg = FabricConfig::new(6, 6).unwrap();
        let a = Matrix::from_fn(5, 4, |i, j| (i as f32) - (j as f32) * 0.5);
        let b = [1.0, -2.0, 0.5, 3.0];
        let untiled = build_matvec(&a, &b, &cfg).unwrap();
        let (plan, tiled) = build_tiled_matvec(&a, &b, &cfg).unwrap();
        assert!(plan.is_single_tile());
        assert_eq!(tiled, untiled);
    }

    #[test]
    fn vector_length_checked() {
        let cfg = FabricConfig::new(4, 4).unwrap();
        assert!(matches!(
            build_matvec(&Matrix::zeros(2, 2), &[1.0], &cfg),
            Err(ScheduleError::DimensionMismatch { expected: 2, found: 1 })
        ));
    }
}
