use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::blocks::{cell_length, Interval, PotentialSpec, SUPPORT_SLACK};
use crate::error::{Error, Result};

pub type ValueFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A contiguous stretch of nonzero potential, made of `cells` repetitions of
/// a cell of length `cell`. Non-periodic pieces have `cells == 1`.
#[derive(Clone)]
pub struct Piece {
    start: f64,
    cell: f64,
    cells: u32,
    value: ValueFn,
}

impl Piece {
    pub fn new(start: f64, end: f64, value: ValueFn) -> Result<Self> {
        if !(start.is_finite() && end.is_finite() && end > start) {
            return Err(Error::InvalidParameter(format!("empty piece [{start}, {end}]")));
        }
        Ok(Self { start, cell: end - start, cells: 1, value })
    }

    /// Caller guarantees `value(x + cell) == value(x)` on the piece.
    pub fn periodic(start: f64, cell: f64, cells: u32, value: ValueFn) -> Result<Self> {
        if !(start.is_finite() && cell.is_finite() && cell > 0.0) || cells == 0 {
            return Err(Error::InvalidParameter("degenerate periodic piece".into()));
        }
        Ok(Self { start, cell, cells, value })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.start + self.cell * self.cells as f64
    }

    pub fn cell(&self) -> f64 {
        self.cell
    }

    pub fn cells(&self) -> u32 {
        self.cells
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.start, self.end())
    }

    #[inline]
    pub fn eval(&self, x: f64) -> Complex64 {
        (self.value)(x)
    }
}

impl fmt::Debug for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Piece")
            .field("start", &self.start)
            .field("cell", &self.cell)
            .field("cells", &self.cells)
            .finish_non_exhaustive()
    }
}

/// A finite-range potential as an ordered list of disjoint pieces; it vanishes
/// between and outside them.
#[derive(Clone, Debug, Default)]
pub struct PotentialFunction {
    pieces: Vec<Piece>,
}

impl PotentialFunction {
    pub fn free() -> Self {
        Self::default()
    }

    pub fn from_pieces(pieces: Vec<Piece>) -> Result<Self> {
        for w in pieces.windows(2) {
            if !w[0].interval().precedes(&w[1].interval()) {
                return Err(Error::InvalidParameter("pieces overlap or are out of order".into()));
            }
        }
        Ok(Self { pieces })
    }

    pub fn from_fn<F>(start: f64, end: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Ok(Self { pieces: vec![Piece::new(start, end, Arc::new(f))?] })
    }

    /// Constant `v0` on `[start, end]`.
    pub fn rectangular(v0: Complex64, start: f64, end: f64) -> Result<Self> {
        Self::from_fn(start, end, move |_| v0)
    }

    /// One periodic piece per block; each block is `n` cells of length `π/k₀`
    /// on which its profile repeats.
    pub fn from_spec(spec: &PotentialSpec) -> Self {
        let cell = cell_length(spec.k0());
        let pieces = spec
            .blocks()
            .iter()
            .map(|b| {
                let block = *b;
                let s = b.support();
                Piece { start: s.start, cell, cells: b.n, value: Arc::new(move |x| block.value(x)) }
            })
            .collect();
        Self { pieces }
    }

    /// Same potential as [`from_spec`](Self::from_spec) without the periodic
    /// structure, so every block is integrated end to end.
    pub fn from_spec_unrolled(spec: &PotentialSpec) -> Self {
        let pieces = spec
            .blocks()
            .iter()
            .map(|b| {
                let block = *b;
                let s = b.support();
                Piece { start: s.start, cell: s.length(), cells: 1, value: Arc::new(move |x| block.value(x)) }
            })
            .collect();
        Self { pieces }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_free(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn support(&self) -> Option<Interval> {
        Some(Interval::new(self.pieces.first()?.start, self.pieces.last()?.end()))
    }

    pub fn value(&self, x: f64) -> Complex64 {
        self.pieces
            .iter()
            .filter(|p| p.interval().contains(x))
            .map(|p| p.eval(x))
            .sum()
    }

    /// `v(−x)`.
    pub fn mirrored(&self) -> Self {
        let pieces = self
            .pieces
            .iter()
            .rev()
            .map(|p| {
                let inner = p.value.clone();
                Piece {
                    start: -p.end(),
                    cell: p.cell,
                    cells: p.cells,
                    value: Arc::new(move |x| inner(-x)),
                }
            })
            .collect();
        Self { pieces }
    }

    /// `v(x − a)`.
    pub fn translated(&self, a: f64) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let inner = p.value.clone();
                Piece { start: p.start + a, value: Arc::new(move |x| inner(x - a)), ..p.clone() }
            })
            .collect();
        Self { pieces }
    }

    /// `v(x)*`.
    pub fn conjugated(&self) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let inner = p.value.clone();
                Piece { value: Arc::new(move |x| inner(x).conj()), ..p.clone() }
            })
            .collect();
        Self { pieces }
    }

    /// Sum of two potentials whose supports do not overlap.
    pub fn join(&self, other: &PotentialFunction) -> Result<Self> {
        let mut pieces: Vec<Piece> = self.pieces.iter().chain(other.pieces.iter()).cloned().collect();
        pieces.sort_by(|a, b| a.start.total_cmp(&b.start));
        for w in pieces.windows(2) {
            if w[0].end() > w[1].start + SUPPORT_SLACK {
                return Err(Error::InvalidParameter("joined potentials overlap".into()));
            }
        }
        Ok(Self { pieces })
    }
}

impl From<&PotentialSpec> for PotentialFunction {
    fn from(spec: &PotentialSpec) -> Self {
        PotentialFunction::from_spec(spec)
    }
}
