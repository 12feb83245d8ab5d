use std::str::FromStr;

use super::SimError;

pub const DEFAULT_CLOCK_HZ: f64 = 200_000_000.0;
pub const DEFAULT_FIFO_DEPTH: usize = 4;
pub const DEFAULT_MAX_CYCLES: u64 = 10_000_000;
/// Sites addressable by a 12-bit destination field.
pub const MAX_SITES: usize = 4096;

/// Geometry and limits of one fabric instance.
#[derive(Debug, Clone, PartialEq)]
pub struct FabricConfig {
    pub rows: usize,
    pub cols: usize,
    pub fifo_depth: usize,
    pub clock_hz: f64,
    /// Watchdog: a single `run` may not exceed this many cycles.
    pub max_cycles: u64,
}

impl Default for FabricConfig {
    /// 64×64: the full 4096-site array.
    fn default() -> Self {
        Self {
            rows: 64,
            cols: 64,
            fifo_depth: DEFAULT_FIFO_DEPTH,
            clock_hz: DEFAULT_CLOCK_HZ,
            max_cycles: DEFAULT_MAX_CYCLES,
        }
    }
}

impl FabricConfig {
    pub fn new(rows: usize, cols: usize) -> Result<Self, SimError> {
        let cfg = Self {
            rows,
            cols,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.rows == 0 || self.cols == 0 {
            return Err(SimError::Config(format!(
                "fabric must have at least one row and one column, got {}x{}",
                self.rows, self.cols
            )));
        }
        if self.rows * self.cols > MAX_SITES {
            return Err(SimError::Config(format!(
                "{}x{} = {} sites exceeds the 12-bit address space ({MAX_SITES})",
                self.rows,
                self.cols,
                self.rows * self.cols
            )));
        }
        if self.fifo_depth == 0 {
            return Err(SimError::Config("fifo_depth must be at least 1".into()));
        }
        if !(self.clock_hz > 0.0 && self.clock_hz.is_finite()) {
            return Err(SimError::Config(format!("invalid clock_hz {}", self.clock_hz)));
        }
        Ok(())
    }

    #[inline]
    pub fn sites(&self) -> usize {
        self.rows * self.cols
    }

    #[inline]
    pub fn row_of(&self, addr: usize) -> usize {
        addr / self.cols
    }

    #[inline]
    pub fn col_of(&self, addr: usize) -> usize {
        addr % self.cols
    }

    #[inline]
    pub fn address(&self, row: usize, col: usize) -> usize {
        row * self.cols + col
    }

    /// `key=value` lines; unknown keys are rejected, missing keys keep defaults.
    pub fn to_text(&self) -> String {
        format!(
            "rows={}\ncols={}\nfifo_depth={}\nclock_hz={}\nmax_cycles={}\n",
            self.rows, self.cols, self.fifo_depth, self.clock_hz, self.max_cycles
        )
    }
}

impl FromStr for FabricConfig {
    type Err = SimError;

    fn from_str(text: &str) -> Result<Self, SimError> {
        let mut cfg = FabricConfig::default();
        for (idx, line) in text.lines().enumerate() {
            let line = crate::isa::strip_comment(line);
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| SimError::ConfigParse {
                line: idx + 1,
                message: msg,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, found `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| {
                v.parse::<u64>()
                    .map_err(|_| bad(format!("invalid integer `{v}` for {key}")))
            };
            match key {
                "rows" => cfg.rows = num(value)? as usize,
                "cols" => cfg.cols = num(value)? as usize,
                "fifo_depth" => cfg.fifo_depth = num(value)? as usize,
                "max_cycles" => cfg.max_cycles = num(value)?,
                "clock_hz" => {
                    cfg.clock_hz = value
                        .parse()
                        .map_err(|_| bad(format!("invalid number `{value}` for clock_hz")))?
                }
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
