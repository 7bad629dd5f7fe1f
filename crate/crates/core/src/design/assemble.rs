use crate::blocks::{cell_length, phase_angle, Block, PotentialSpec, DEFAULT_CELLS};
use crate::error::{Error, Result};

use super::plan::{BlockPlan, PlanEntry};

#[derive(Debug, Clone, PartialEq)]
pub struct AssembleOptions {
    /// Cells per block.
    pub n: u32,
    /// Minimum free space between consecutive supports.
    pub gap_min: f64,
    /// Leftmost allowed position of the first support.
    pub origin: f64,
    /// Explicit shift integers, one per plan entry, bypassing placement.
    pub m_overrides: Option<Vec<i64>>,
}

impl Default for AssembleOptions {
    fn default() -> Self {
        Self { n: DEFAULT_CELLS, gap_min: 0.0, origin: 0.0, m_overrides: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    pub entry: PlanEntry,
    pub block: Block,
    pub m: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assembly {
    pub spec: PotentialSpec,
    pub placements: Vec<Placement>,
}

impl Assembly {
    pub fn m_values(&self) -> Vec<i64> {
        self.placements.iter().map(|p| p.m).collect()
    }
}

/// Largest `m` keeping the block's support start `−d(m)` at or right of `cursor`.
///
/// Shifts for consecutive `m` differ by exactly one cell `π/k₀`, so this is
/// the tightest placement that respects the cursor.
fn tightest_m(entry: &PlanEntry, k0: f64, cursor: f64) -> i64 {
    let base = entry.side.phase_offset(phase_angle(entry.target), 0, k0);
    ((-cursor - base) / cell_length(k0) + 1e-9).floor() as i64
}

/// Realizes every plan entry as a block and lays the blocks out left to
/// right in plan order.
pub fn assemble(plan: &BlockPlan, k0: f64, opts: &AssembleOptions) -> Result<Assembly> {
    if !(k0.is_finite() && k0 > 0.0) {
        return Err(Error::InvalidParameter(format!("k0 must be positive, got {k0}")));
    }
    if !(opts.gap_min.is_finite() && opts.gap_min >= 0.0 && opts.origin.is_finite()) {
        return Err(Error::InvalidParameter("gap must be nonnegative and origin finite".into()));
    }
    if let Some(ms) = &opts.m_overrides {
        if ms.len() != plan.len() {
            return Err(Error::OverrideCount(ms.len(), plan.len()));
        }
    }
    let mut placements = Vec::with_capacity(plan.len());
    let mut cursor = opts.origin;
    for (i, entry) in plan.entries.iter().enumerate() {
        let m = match &opts.m_overrides {
            Some(ms) => ms[i],
            None => tightest_m(entry, k0, cursor),
        };
        let block = entry.side.realize(entry.target, k0, opts.n, m)?;
        cursor = block.support().end + opts.gap_min;
        placements.push(Placement { entry: *entry, block, m });
    }
    let blocks = placements.iter().map(|p| p.block).collect();
    let spec = PotentialSpec::new(k0, blocks, "")?;
    Ok(Assembly { spec, placements })
}
