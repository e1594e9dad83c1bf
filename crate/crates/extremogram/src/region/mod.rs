//! Extremal regions: Borel subsets of R^d given as unions of
//! constraint intersections, with a small textual DSL.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! region  := term ("|" term)*
//! term    := atom ("&" atom)*
//! atom    := interval ["@" coordindex] | "band(" bound cmp linexpr cmp bound ")"
//! interval:= ("(" | "[") bound "," bound (")" | "]")
//! bound   := number | "inf" | "-inf"
//! cmp     := "<" | "<="
//! linexpr := [sign] coordterm (("+" | "-") coordterm)*
//! coordterm := [number "*"] "x" digits
//! ```
//!
//! `@k` binds an interval to coordinate k (1-based); a missing `@` means
//! coordinate 1. Round brackets are open endpoints, square brackets closed.
//!
//! Estimator asymptotics additionally require the limit measure to put no
//! mass on the region's boundary. That is a property of the unknown limit and
//! cannot be checked from data; choosing sets whose boundaries are not
//! special for the model is the caller's obligation.

mod parser;

use std::fmt;

use crate::error::{Error, Result};

/// One elementary constraint on a point of R^d.
#[derive(Debug, Clone, PartialEq)]
pub enum Constraint {
    /// `x[coord]` in (lo, hi) with endpoint closedness flags; `coord` is 0-based.
    CoordInterval {
        coord: usize,
        lo: f64,
        hi: f64,
        lo_closed: bool,
        hi_closed: bool,
    },
    /// w . x in (lo, hi); weights are (0-based coordinate, coefficient) pairs.
    LinearBand {
        weights: Vec<(usize, f64)>,
        lo: f64,
        hi: f64,
        lo_closed: bool,
        hi_closed: bool,
    },
}

impl Constraint {
    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.bounds();
        if !(lo < hi) {
            return Err(Error::Semantic(format!(
                "lower bound {} is not strictly below upper bound {}",
                lo, hi
            )));
        }
        if lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(Error::Semantic("bound has the wrong sign of infinity".into()));
        }
        if let Constraint::LinearBand { weights, .. } = self {
            if weights.is_empty() || weights.iter().all(|(_, w)| *w == 0.0) {
                return Err(Error::Semantic("linear band has a zero weight vector".into()));
            }
        }
        Ok(())
    }

    fn bounds(&self) -> (f64, f64) {
        match self {
            Constraint::CoordInterval { lo, hi, .. } => (*lo, *hi),
            Constraint::LinearBand { lo, hi, .. } => (*lo, *hi),
        }
    }

    fn max_coord(&self) -> usize {
        match self {
            Constraint::CoordInterval { coord, .. } => *coord,
            Constraint::LinearBand { weights, .. } => {
                weights.iter().map(|(c, _)| *c).max().unwrap_or(0)
            }
        }
    }

    fn holds(&self, x: &[f64]) -> bool {
        match self {
            Constraint::CoordInterval {
                coord,
                lo,
                hi,
                lo_closed,
                hi_closed,
            } => in_interval(x[*coord], *lo, *hi, *lo_closed, *hi_closed),
            Constraint::LinearBand {
                weights,
                lo,
                hi,
                lo_closed,
                hi_closed,
            } => {
                let v: f64 = weights.iter().map(|(c, w)| w * x[*c]).sum();
                in_interval(v, *lo, *hi, *lo_closed, *hi_closed)
            }
        }
    }

    /// Radius of a ball around the origin this single constraint excludes,
    /// if the sufficient condition can certify one.
    fn exclusion_radius(&self) -> Option<f64> {
        let (lo, hi) = self.bounds();
        let gap = if lo > 0.0 {
            lo
        } else if hi < 0.0 {
            -hi
        } else {
            return None;
        };
        match self {
            // |x| >= |x[coord]| >= gap
            Constraint::CoordInterval { .. } => Some(gap),
            // |w.x| <= |w| |x|, so |x| >= gap / |w|
            Constraint::LinearBand { weights, .. } => {
                let norm = weights.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
                Some(gap / norm)
            }
        }
    }
}

fn in_interval(v: f64, lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> bool {
    let above = if lo_closed { v >= lo } else { v > lo };
    let below = if hi_closed { v <= hi } else { v < hi };
    above && below
}

/// Conjunction of constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSet {
    pub constraints: Vec<Constraint>,
}

/// A Borel set A in R^d: a disjunction of constraint conjunctions.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionSpec {
    disjuncts: Vec<ConstraintSet>,
    assume_bounded: bool,
}

impl RegionSpec {
    pub fn new(disjuncts: Vec<ConstraintSet>) -> Result<Self> {
        if disjuncts.is_empty() {
            return Err(Error::Semantic("region needs at least one disjunct".into()));
        }
        for set in &disjuncts {
            if set.constraints.is_empty() {
                return Err(Error::Semantic("empty constraint set".into()));
            }
            for c in &set.constraints {
                c.validate()?;
            }
        }
        Ok(RegionSpec {
            disjuncts,
            assume_bounded: false,
        })
    }

    /// Parse a DSL string; see the module docs for the grammar.
    pub fn parse(text: &str) -> Result<Self> {
        parser::parse_region(text)
    }

    /// Single open/closed interval constraint on coordinate 1.
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![ConstraintSet {
            constraints: vec![Constraint::CoordInterval {
                coord: 0,
                lo,
                hi,
                lo_closed: false,
                hi_closed: false,
            }],
        }])
    }

    pub fn disjuncts(&self) -> &[ConstraintSet] {
        &self.disjuncts
    }

    /// Smallest dimension in which every referenced coordinate exists.
    pub fn required_dim(&self) -> usize {
        self.disjuncts
            .iter()
            .flat_map(|s| s.constraints.iter().map(Constraint::max_coord))
            .max()
            .unwrap_or(0)
            + 1
    }

    /// Error unless the region can be evaluated on d-dimensional points.
    pub fn check_dim(&self, d: usize) -> Result<()> {
        let need = self.required_dim();
        if need > d {
            return Err(Error::DimensionMismatch(format!(
                "region references coordinate {} but the series has dimension {}",
                need, d
            )));
        }
        Ok(())
    }

    /// Exact membership predicate. Callers must have validated the dimension
    /// with [`check_dim`](Self::check_dim); out-of-range coordinates panic.
    pub fn contains(&self, x: &[f64]) -> bool {
        self.disjuncts
            .iter()
            .any(|set| set.constraints.iter().all(|c| c.holds(x)))
    }

    /// Checked membership: dimension validation plus [`contains`](Self::contains).
    pub fn membership(&self, x: &[f64]) -> Result<bool> {
        self.check_dim(x.len())?;
        Ok(self.contains(x))
    }

    /// Radius of a ball around the origin that provably contains no point of
    /// the region, when the sufficient condition certifies one.
    ///
    /// A disjunct qualifies if some coordinate interval keeps that coordinate
    /// away from zero, or some linear band keeps w.x away from zero. The
    /// region qualifies when every disjunct does. `None` means "not certified",
    /// not "touches zero".
    pub fn exclusion_radius(&self) -> Option<f64> {
        self.disjuncts
            .iter()
            .map(|set| {
                set.constraints
                    .iter()
                    .filter_map(Constraint::exclusion_radius)
                    .fold(None, |acc: Option<f64>, r| {
                        Some(acc.map_or(r, |a| a.max(r)))
                    })
            })
            .try_fold(f64::INFINITY, |acc, r| r.map(|r| acc.min(r)))
    }

    pub fn is_bounded_away_from_zero(&self) -> bool {
        self.assume_bounded || self.exclusion_radius().is_some()
    }

    /// Declare that the caller knows the region is bounded away from zero
    /// even though the sufficient condition cannot certify it.
    pub fn assume_bounded_away(mut self) -> Self {
        self.assume_bounded = true;
        self
    }

    pub(crate) fn require_bounded_away(&self) -> Result<()> {
        if self.is_bounded_away_from_zero() {
            Ok(())
        } else {
            Err(Error::NotBoundedAway)
        }
    }
}

fn fmt_bound(v: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if v == f64::INFINITY {
        write!(f, "inf")
    } else if v == f64::NEG_INFINITY {
        write!(f, "-inf")
    } else {
        write!(f, "{}", v)
    }
}

fn fmt_coef(w: f64, coord: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if w == 1.0 {
        write!(f, "x{}", coord + 1)
    } else {
        write!(f, "{}*x{}", w, coord + 1)
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::CoordInterval {
                coord,
                lo,
                hi,
                lo_closed,
                hi_closed,
            } => {
                write!(f, "{}", if *lo_closed { '[' } else { '(' })?;
                fmt_bound(*lo, f)?;
                write!(f, ",")?;
                fmt_bound(*hi, f)?;
                write!(f, "{}", if *hi_closed { ']' } else { ')' })?;
                if *coord > 0 {
                    write!(f, "@{}", coord + 1)?;
                }
                Ok(())
            }
            Constraint::LinearBand {
                weights,
                lo,
                hi,
                lo_closed,
                hi_closed,
            } => {
                write!(f, "band(")?;
                fmt_bound(*lo, f)?;
                write!(f, " {} ", if *lo_closed { "<=" } else { "<" })?;
                let mut first = true;
                for (coord, w) in weights {
                    if first {
                        if *w < 0.0 {
                            write!(f, "-")?;
                        }
                        fmt_coef(w.abs(), *coord, f)?;
                        first = false;
                    } else {
                        write!(f, " {} ", if *w < 0.0 { "-" } else { "+" })?;
                        fmt_coef(w.abs(), *coord, f)?;
                    }
                }
                write!(f, " {} ", if *hi_closed { "<=" } else { "<" })?;
                fmt_bound(*hi, f)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for RegionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, set) in self.disjuncts.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            for (j, c) in set.constraints.iter().enumerate() {
                if j > 0 {
                    write!(f, " & ")?;
                }
                write!(f, "{}", c)?;
            }
        }
        Ok(())
    }
}
