use num_complex::Complex64;

use crate::blocks::Side;
use crate::error::{Error, Result};
use crate::scattering::{amplitudes_to_matrix, ScatteringTriple, TransferMatrix};

/// Prescribed amplitudes at `k0`; `t` must be nonzero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignTarget {
    pub rl: Complex64,
    pub rr: Complex64,
    pub t: Complex64,
    pub k0: f64,
}

impl DesignTarget {
    pub fn new(rl: Complex64, rr: Complex64, t: Complex64, k0: f64) -> Result<Self> {
        if t.norm() == 0.0 || !t.is_finite() {
            return Err(Error::DivergentTransmission);
        }
        if !(rl.is_finite() && rr.is_finite()) {
            return Err(Error::InvalidParameter("reflection amplitudes must be finite".into()));
        }
        if !(k0.is_finite() && k0 > 0.0) {
            return Err(Error::InvalidParameter(format!("k0 must be positive, got {k0}")));
        }
        Ok(Self { rl, rr, t, k0 })
    }

    pub fn triple(&self) -> ScatteringTriple {
        ScatteringTriple::new(self.rl, self.rr, self.t, self.k0)
    }

    pub fn matrix(&self) -> TransferMatrix {
        amplitudes_to_matrix(&self.triple()).expect("t is nonzero by construction")
    }

    fn is_reflectionless(&self) -> bool {
        self.rl.norm() == 0.0 && self.rr.norm() == 0.0
    }

    fn unit_transmission(&self) -> bool {
        self.t == Complex64::new(1.0, 0.0)
    }
}

/// Position of an entry in the decomposition, listed left to right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Minus,
    One,
    OneTilde,
    Two,
    Three,
    Four,
    FourTilde,
    Plus,
}

impl Role {
    pub fn label(&self) -> &'static str {
        match self {
            Role::Minus => "v-",
            Role::One => "v1",
            Role::OneTilde => "v1~",
            Role::Two => "v2",
            Role::Three => "v3",
            Role::Four => "v4",
            Role::FourTilde => "v4~",
            Role::Plus => "v+",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanEntry {
    pub role: Role,
    pub side: Side,
    /// The block's nonzero reflection amplitude at `k0`.
    pub target: Complex64,
}

impl PlanEntry {
    fn new(role: Role, side: Side, target: Complex64) -> Self {
        Self { role, side, target }
    }

    /// Transfer matrix at `k0` of a block realizing this entry.
    pub fn matrix(&self) -> TransferMatrix {
        match self.side {
            Side::RightInvisible => TransferMatrix::lower(self.target),
            Side::LeftInvisible => TransferMatrix::upper(self.target),
        }
    }
}

/// Ordered (left to right) list of invisible blocks whose composition has the
/// target transfer matrix at `k0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPlan {
    pub entries: Vec<PlanEntry>,
    /// The free parameter `𝓡` of the reflectionless core, when one was used.
    pub r_script: Option<Complex64>,
}

impl BlockPlan {
    fn from_entries(entries: Vec<PlanEntry>, r_script: Option<Complex64>) -> Self {
        let entries = entries.into_iter().filter(|e| e.target.norm() != 0.0).collect();
        Self { entries, r_script }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Product of the entries' matrices, rightmost block first.
    pub fn matrix_product(&self) -> TransferMatrix {
        self.entries
            .iter()
            .fold(TransferMatrix::identity(), |acc, e| e.matrix() * acc)
    }
}

/// `e^{−iθ}/√|t|` for reflectionless targets `t = |t|e^{iθ}`, otherwise `1`.
pub fn default_r_script(target: &DesignTarget) -> Complex64 {
    if target.is_reflectionless() {
        Complex64::from_polar(target.t.norm().sqrt().recip(), -target.t.arg())
    } else {
        Complex64::new(1.0, 0.0)
    }
}

fn core_entries(t: Complex64, r: Complex64) -> [PlanEntry; 4] {
    let one = Complex64::new(1.0, 0.0);
    [
        PlanEntry::new(Role::One, Side::RightInvisible, -r * t),
        PlanEntry::new(Role::Two, Side::LeftInvisible, (t - one) / (r * t)),
        PlanEntry::new(Role::Three, Side::RightInvisible, r),
        PlanEntry::new(Role::Four, Side::LeftInvisible, (one - t) / r),
    ]
}

/// Six-block scheme: `v₋` and `v₊` carry the reflections, the four middle
/// blocks form a reflectionless core with transmission `t`.
pub fn plan_six(target: &DesignTarget, r_script: Complex64) -> Result<BlockPlan> {
    if r_script.norm() == 0.0 || !r_script.is_finite() {
        return Err(Error::ZeroFreeParameter);
    }
    let mut entries = vec![PlanEntry::new(Role::Minus, Side::RightInvisible, target.rl)];
    if !target.unit_transmission() {
        entries.extend(core_entries(target.t, r_script));
    }
    entries.push(PlanEntry::new(Role::Plus, Side::LeftInvisible, target.rr));
    Ok(BlockPlan::from_entries(entries, Some(r_script)))
}

/// Scheme with at most three blocks unless the target is reflectionless,
/// obtained by choosing `𝓡` so that one pair of neighbouring blocks merges.
pub fn plan_addendum(target: &DesignTarget) -> Result<BlockPlan> {
    let DesignTarget { rl, rr, t, .. } = *target;
    let one = Complex64::new(1.0, 0.0);
    if target.unit_transmission() {
        return plan_six(target, one).map(|p| BlockPlan { r_script: None, ..p });
    }
    let plan = if rl.norm() != 0.0 {
        let r = rl / t;
        BlockPlan::from_entries(
            vec![
                PlanEntry::new(Role::Two, Side::LeftInvisible, (t - one) / (r * t)),
                PlanEntry::new(Role::Three, Side::RightInvisible, r),
                PlanEntry::new(Role::FourTilde, Side::LeftInvisible, rr + t * (one - t) / rl),
            ],
            Some(r),
        )
    } else if rr.norm() != 0.0 {
        let r = (t - one) / rr;
        BlockPlan::from_entries(
            vec![
                PlanEntry::new(Role::OneTilde, Side::RightInvisible, rl + t * (one - t) / rr),
                PlanEntry::new(Role::Two, Side::LeftInvisible, (t - one) / (r * t)),
                PlanEntry::new(Role::Three, Side::RightInvisible, r),
            ],
            Some(r),
        )
    } else {
        let r = default_r_script(target);
        BlockPlan::from_entries(core_entries(t, r).to_vec(), Some(r))
    };
    Ok(plan)
}
