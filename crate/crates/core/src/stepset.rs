//! Step sets of quarter-plane walk models and their combinatorial
//! classification.

use crate::error::{Error, Result};
use std::fmt;

/// Bit order for the 8-bit mask encoding: index into this table is the bit
/// position.
pub const MASK_ORDER: [(i8, i8); 8] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, -1),
    (0, 1),
    (1, -1),
    (1, 0),
    (1, 1),
];

/// A step set S, a non-empty subset of the 8 nearest neighbors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StepSet {
    mask: u8,
}

impl StepSet {
    pub fn from_mask(mask: u8) -> Result<Self> {
        if mask == 0 {
            return Err(Error::EmptyStepSet);
        }
        Ok(StepSet { mask })
    }

    pub fn from_steps<I: IntoIterator<Item = (i8, i8)>>(steps: I) -> Result<Self> {
        let mut mask = 0u8;
        for (di, dj) in steps {
            let bit = MASK_ORDER
                .iter()
                .position(|&s| s == (di, dj))
                .ok_or_else(|| Error::InvalidStep(format!("{},{}", di, dj)))?;
            mask |= 1 << bit;
        }
        StepSet::from_mask(mask)
    }

    /// Parse either a `di,dj;di,dj;...` pair list or an 8-bit mask
    /// (decimal, or `0b`/`0x` prefixed).
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.is_empty() {
            return Err(Error::EmptyStepSet);
        }
        let as_mask = if let Some(b) = t.strip_prefix("0b") {
            u8::from_str_radix(b, 2).ok()
        } else if let Some(h) = t.strip_prefix("0x") {
            u8::from_str_radix(h, 16).ok()
        } else if !t.contains(',') && !t.contains(';') {
            t.parse::<u8>().ok()
        } else {
            None
        };
        if let Some(mask) = as_mask {
            return StepSet::from_mask(mask);
        }
        let mut steps = Vec::new();
        for pair in t.split(';') {
            let pair = pair.trim();
            if pair.is_empty() {
                continue;
            }
            let mut it = pair.split(',');
            let di = it
                .next()
                .and_then(|s| s.trim().parse::<i8>().ok())
                .ok_or_else(|| Error::InvalidStep(pair.to_string()))?;
            let dj = it
                .next()
                .and_then(|s| s.trim().parse::<i8>().ok())
                .ok_or_else(|| Error::InvalidStep(pair.to_string()))?;
            if it.next().is_some() {
                return Err(Error::InvalidStep(pair.to_string()));
            }
            steps.push((di, dj));
        }
        StepSet::from_steps(steps)
    }

    pub fn mask(&self) -> u8 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, di: i8, dj: i8) -> bool {
        MASK_ORDER
            .iter()
            .position(|&s| s == (di, dj))
            .map_or(false, |bit| self.mask & (1 << bit) != 0)
    }

    /// Indicator 1_{(i,j)} as an integer.
    pub fn indicator(&self, di: i8, dj: i8) -> i64 {
        self.contains(di, dj) as i64
    }

    pub fn steps(&self) -> impl Iterator<Item = (i8, i8)> + '_ {
        MASK_ORDER
            .iter()
            .enumerate()
            .filter(move |(bit, _)| self.mask & (1 << bit) != 0)
            .map(|(_, &s)| s)
    }

    /// Diagonal reflection (i, j) -> (j, i).
    pub fn transpose(&self) -> StepSet {
        StepSet::from_steps(self.steps().map(|(i, j)| (j, i))).expect("non-empty")
    }

    /// Lexicographically smaller of the set and its transpose.
    pub fn canonical(&self) -> StepSet {
        let t = self.transpose();
        if t.mask < self.mask {
            t
        } else {
            *self
        }
    }

    /// Drift vector (sum of i, sum of j).
    pub fn drift(&self) -> (i64, i64) {
        let mut di = 0;
        let mut dj = 0;
        for (i, j) in self.steps() {
            di += i as i64;
            dj += j as i64;
        }
        (di, dj)
    }

    /// Covariance sum(ij) - sum(i) * sum(j); the second value is the bare
    /// sum(ij), which is what the full expression reduces to whenever one
    /// drift coordinate vanishes.
    pub fn covariance_full(&self) -> (i64, i64) {
        let sum_ij: i64 = self.steps().map(|(i, j)| (i as i64) * (j as i64)).sum();
        let (si, sj) = self.drift();
        (sum_ij - si * sj, sum_ij)
    }

    pub fn covariance(&self) -> i64 {
        self.covariance_full().0
    }

    /// Why a step set falls outside the quarter-plane classification, if
    /// it does.
    pub fn triviality(&self) -> Option<Triviality> {
        let has = |pred: &dyn Fn(i8, i8) -> bool| self.steps().any(|(i, j)| pred(i, j));
        if !has(&|i, _| i == 1) || !has(&|_, j| j == 1) || !has(&|i, _| i == -1)
            || !has(&|_, j| j == -1)
        {
            return Some(Triviality::MissingDirection);
        }
        if self.steps().all(|(i, j)| i + j <= 0) {
            return Some(Triviality::ConfinedAtOrigin);
        }
        if self.steps().all(|(i, j)| i >= j) || self.steps().all(|(i, j)| i <= j) {
            return Some(Triviality::ConstraintImplied);
        }
        None
    }

    /// True when the model is one of the inherently two-constraint
    /// quarter-plane walks (the 138 sets that reduce to 79 classes under
    /// diagonal reflection).
    pub fn is_quarter_plane_model(&self) -> bool {
        self.triviality().is_none()
    }

    /// All canonical quarter-plane models, one representative per
    /// diagonal-reflection class.
    pub fn canonical_models() -> Vec<StepSet> {
        let mut out = Vec::new();
        for mask in 1u8..=255 {
            let s = StepSet { mask };
            if s.is_quarter_plane_model() && s.canonical() == s {
                out.push(s);
            }
        }
        out
    }
}

/// Reason a raw step set is excluded from the quarter-plane taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Triviality {
    /// Lacks a step with i=+1, i=-1, j=+1 or j=-1: the walk degenerates to
    /// a half-plane, half-line or unrestricted model.
    MissingDirection,
    /// Every step has i+j <= 0: the walk can never leave the origin's
    /// anti-diagonal and only the empty walk survives.
    ConfinedAtOrigin,
    /// All steps on one side of the main diagonal: one quadrant constraint
    /// is implied by the other, reducing to a half-plane model.
    ConstraintImplied,
}

impl fmt::Display for StepSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.steps().map(|(i, j)| format!("{},{}", i, j)).collect();
        write!(f, "{}", parts.join(";"))
    }
}
