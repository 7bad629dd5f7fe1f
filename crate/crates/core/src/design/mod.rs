//! Local inverse scattering: from target amplitudes at `k₀` to a block plan
//! and a realized [`PotentialSpec`](crate::PotentialSpec), plus the
//! spectral-singularity designer.

mod assemble;
mod plan;
mod singularity;
mod verify;

pub use assemble::{assemble, AssembleOptions, Assembly, Placement};
pub use plan::{default_r_script, plan_addendum, plan_six, BlockPlan, DesignTarget, PlanEntry, Role};
pub use singularity::{conjugate_spec, design_singularity, solve_beta, SingularityDesign};
pub use verify::{verify, VerifyReport};
