use std::fmt;

use crate::error::{QamError, Result};

/// A bounded real interval with independent endpoint openness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
    lo_closed: bool,
    hi_closed: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(QamError::InvalidInterval(format!("endpoints must be finite, got ({lo}, {hi})")));
        }
        if lo >= hi {
            return Err(QamError::InvalidInterval(format!("lower endpoint {lo} must be below upper endpoint {hi}")));
        }
        Ok(Self { lo, hi, lo_closed, hi_closed })
    }

    pub fn closed(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, true, true)
    }

    pub fn open(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, false, false)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    pub fn closure_contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// True when the closure of `other` lies in the closure of `self`.
    pub fn contains_interval(&self, other: &Interval) -> bool {
        other.lo >= self.lo && other.hi <= self.hi
    }

    /// Splits the interval into `n` closed cells of equal length.
    pub fn partition(&self, n: usize) -> Vec<Interval> {
        let n = n.max(1);
        let h = self.length() / n as f64;
        (0..n)
            .map(|i| {
                let a = self.lo + h * i as f64;
                let b = if i + 1 == n { self.hi } else { self.lo + h * (i + 1) as f64 };
                Interval { lo: a, hi: b, lo_closed: true, hi_closed: true }
            })
            .collect()
    }

    /// `n + 1` equally spaced points covering the closure, endpoints included.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        linspace(self.lo, self.hi, n + 1)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Parses `lo,hi` (taken as open), or bracketed forms such as `[1,2]` and
/// `(0,1]`.
impl std::str::FromStr for Interval {
    type Err = QamError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (lo_closed, t) = match t.chars().next() {
            Some('[') => (Some(true), &t[1..]),
            Some('(') => (Some(false), &t[1..]),
            _ => (None, t),
        };
        let (hi_closed, t) = match (lo_closed, t.chars().last()) {
            (Some(_), Some(']')) => (true, &t[..t.len() - 1]),
            (Some(_), Some(')')) => (false, &t[..t.len() - 1]),
            (Some(_), _) => return Err(QamError::InvalidInterval(format!("unbalanced brackets in '{s}'"))),
            (None, _) => (false, t),
        };
        let mut parts = t.split(',');
        let mut num = || -> Result<f64> {
            let p = parts.next().ok_or_else(|| QamError::InvalidInterval(format!("expected lo,hi in '{s}'")))?;
            p.trim().parse().map_err(|_| QamError::InvalidInterval(format!("bad endpoint '{}' in '{s}'", p.trim())))
        };
        let (lo, hi) = (num()?, num()?);
        if parts.next().is_some() {
            return Err(QamError::InvalidInterval(format!("expected exactly two endpoints in '{s}'")));
        }
        Interval::new(lo, hi, lo_closed.unwrap_or(false), hi_closed)
    }
}

/// `count` equally spaced points from `a` to `b` inclusive.
pub(crate) fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let h = (b - a) / (count - 1) as f64;
            (0..count).map(|i| if i + 1 == count { b } else { a + h * i as f64 }).collect()
        }
    }
}
