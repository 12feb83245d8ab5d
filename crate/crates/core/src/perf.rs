//! Closed-form latency and throughput of the fabric kernels.
//!
//! Timestep laws:
//!
//! * matrix-vector product with `N` rows: `N + 3`
//! * `n` PageRank iterations over `N` nodes: `n · (N + 6)`
//!
//! When the network exceeds the fabric, the matrix is processed as
//! `s × s` tiles on a square fabric of `S = s²` sites, each tile paying the
//! per-iteration cost `s + 6`. Two readings of the tile count are provided:
//! fractional `(N/s)²` (the default, which reproduces the reported
//! 213.6 ms for 5000 nodes, 100 iterations, 4096 sites at 200 MHz) and the
//! whole-tile `⌈N/s⌉²`.

use std::fmt;
use std::str::FromStr;

pub const DEFAULT_SITES: usize = 4096;
pub const DEFAULT_CLOCK_HZ: f64 = 2.0e8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("site count {0} is not a perfect square")]
    NotSquare(usize),
    #[error("invalid cost parameters: {0}")]
    Invalid(String),
}

/// Hardware budget of the cost model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams {
    pub sites: usize,
    pub clock_hz: f64,
}

impl Default for CostParams {
    fn default() -> Self {
        Self {
            sites: DEFAULT_SITES,
            clock_hz: DEFAULT_CLOCK_HZ,
        }
    }
}

impl CostParams {
    pub fn new(sites: usize, clock_hz: f64) -> Result<Self, ModelError> {
        if sites == 0 {
            return Err(ModelError::Invalid("site count must be positive".into()));
        }
        if !(clock_hz > 0.0 && clock_hz.is_finite()) {
            return Err(ModelError::Invalid(format!("clock {clock_hz} Hz")));
        }
        Ok(Self { sites, clock_hz })
    }

    /// Side of the square fabric.
    pub fn side(&self) -> Result<usize, ModelError> {
        let s = (self.sites as f64).sqrt().round() as usize;
        if s * s == self.sites {
            Ok(s)
        } else {
            Err(ModelError::NotSquare(self.sites))
        }
    }
}

/// How partial tiles are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TileModel {
    #[default]
    Fractional,
    Ceil,
}

impl fmt::Display for TileModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TileModel::Fractional => "fractional",
            TileModel::Ceil => "ceil",
        })
    }
}

impl FromStr for TileModel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fractional" => Ok(TileModel::Fractional),
            "ceil" => Ok(TileModel::Ceil),
            other => Err(format!("unknown tile model `{other}` (expected fractional or ceil)")),
        }
    }
}

/// `N + 3`.
pub fn matvec_latency(rows: u64) -> u64 {
    rows + 3
}

/// `n · (N + 6)`, for a fabric large enough to hold the network.
pub fn pagerank_timesteps(nodes: u64, iterations: u64) -> u64 {
    iterations * (nodes + 6)
}

/// Tiled runtime under both tile-count readings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiledRuntime {
    pub fractional_timesteps: f64,
    pub fractional_seconds: f64,
    pub ceil_timesteps: f64,
    pub ceil_seconds: f64,
}

impl TiledRuntime {
    pub fn timesteps(&self, model: TileModel) -> f64 {
        match model {
            TileModel::Fractional => self.fractional_timesteps,
            TileModel::Ceil => self.ceil_timesteps,
        }
    }

    pub fn seconds(&self, model: TileModel) -> f64 {
        match model {
            TileModel::Fractional => self.fractional_seconds,
            TileModel::Ceil => self.ceil_seconds,
        }
    }
}

/// `n · tiles · (s + 6) / f` with `tiles = (N/s)²` or `⌈N/s⌉²`.
pub fn tiled_runtime(nodes: u64, iterations: u64, params: &CostParams) -> Result<TiledRuntime, ModelError> {
    let s = params.side()? as f64;
    let per_tile = s + 6.0;
    let n = iterations as f64;
    let frac_tiles = (nodes as f64 / s).powi(2);
    let ceil_tiles = (nodes as f64 / s).ceil().powi(2);
    let fractional_timesteps = n * frac_tiles * per_tile;
    let ceil_timesteps = n * ceil_tiles * per_tile;
    Ok(TiledRuntime {
        fractional_timesteps,
        fractional_seconds: fractional_timesteps / params.clock_hz,
        ceil_timesteps,
        ceil_seconds: ceil_timesteps / params.clock_hz,
    })
}

/// Seconds under the default (fractional) tile model.
pub fn tiled_runtime_seconds(nodes: u64, iterations: u64, params: &CostParams) -> Result<f64, ModelError> {
    tiled_runtime(nodes, iterations, params).map(|r| r.fractional_seconds)
}

pub const SWEEP_CSV_HEADER: &str = "N,n,S,f_hz,timesteps,seconds,model";

/// One line of a sweep CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub nodes: u64,
    pub iterations: u64,
    pub sites: usize,
    pub clock_hz: f64,
    pub timesteps: f64,
    pub seconds: f64,
    pub model: String,
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.nodes, self.iterations, self.sites, self.clock_hz, self.timesteps, self.seconds, self.model
        )
    }
}

/// Matrix-vector latency for each row count (model label `exact`).
pub fn matvec_sweep(rows: impl IntoIterator<Item = u64>, params: &CostParams) -> Vec<SweepRow> {
    rows.into_iter()
        .map(|n| {
            let ts = matvec_latency(n) as f64;
            SweepRow {
                nodes: n,
                iterations: 1,
                sites: params.sites,
                clock_hz: params.clock_hz,
                timesteps: ts,
                seconds: ts / params.clock_hz,
                model: "exact".into(),
            }
        })
        .collect()
}

/// Tiled PageRank runtime for each network size, one row per tile model.
pub fn throughput_sweep(
    nodes: impl IntoIterator<Item = u64>,
    iterations: u64,
    params: &CostParams,
    models: &[TileModel],
) -> Result<Vec<SweepRow>, ModelError> {
    let mut rows = Vec::new();
    for n in nodes {
        let r = tiled_runtime(n, iterations, params)?;
        for &m in models {
            rows.push(SweepRow {
                nodes: n,
                iterations,
                sites: params.sites,
                clock_hz: params.clock_hz,
                timesteps: r.timesteps(m),
                seconds: r.seconds(m),
                model: m.to_string(),
            });
        }
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn latency_laws() {
        assert_eq!(matvec_latency(256), 259);
        assert_eq!(matvec_latency(1), 4);
        assert_eq!(matvec_latency(8192), 8195);
        assert_eq!(pagerank_timesteps(1000, 100), 100_600);
        assert_eq!(pagerank_timesteps(4, 1), 10);
        assert_eq!(pagerank_timesteps(4, 0), 0);
    }

    #[test]
    fn headline_runtime() {
        let r = tiled_runtime(5000, 100, &CostParams::default()).unwrap();
        // 100 · (5000/64)² · 70 / 2e8
        assert!((r.fractional_seconds - 0.213_623_046_875).abs() < 1e-12);
        assert!((0.213..=0.214).contains(&r.fractional_seconds));
        // 100 · 79² · 70 / 2e8
        assert!((r.ceil_seconds - 0.218_435).abs() < 1e-12);
    }

    #[test]
    fn single_tile_and_small_network() {
        let p = CostParams::default();
        let one = tiled_runtime_seconds(64, 1, &p).unwrap();
        assert!((one - 350e-9).abs() < 1e-15);
        let k = tiled_runtime_seconds(1000, 100, &p).unwrap();
        assert!((k - 0.008_544_921_875).abs() < 1e-12);
    }

    #[test]
    fn non_square_site_count_rejected() {
        let p = CostParams::new(4000, 2e8).unwrap();
        assert_eq!(tiled_runtime_seconds(10, 1, &p), Err(ModelError::NotSquare(4000)));
        assert!(CostParams::new(0, 2e8).is_err());
        assert!(CostParams::new(16, 0.0).is_err());
    }

    #[test]
    fn runtime_strictly_increasing() {
        let p = CostParams::default();
        let mut prev = 0.0;
        for n in (100..=6000).step_by(100) {
            let s = tiled_runtime_seconds(n, 100, &p).unwrap();
            assert!(s > prev);
            prev = s;
        }
        let mut prev = 0.0;
        for it in 1..50 {
            let s = tiled_runtime_seconds(5000, it, &p).unwrap();
            assert!(s > prev);
            prev = s;
        }
    }

    #[test]
    fn sweeps() {
        let p = CostParams::default();
        let rows = matvec_sweep([256, 512, 8192], &p);
        assert!(rows.iter().all(|r| r.timesteps == (r.nodes + 3) as f64));
        assert_eq!(sweep_csv(&[]), format!("{SWEEP_CSV_HEADER}\n"));
        let rows = throughput_sweep([1000, 5000], 100, &p, &[TileModel::Fractional, TileModel::Ceil]).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[2].model, "fractional");
        assert!((rows[2].seconds - 0.2136).abs() < 1e-4);
    }
}
