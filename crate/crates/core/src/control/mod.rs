//! Piecewise-linear control functions.
//!
//! A [`PiecewiseFn`] carries an explicit value at every breakpoint, so jumps
//! and isolated point values are representable exactly. That is what lets
//! lower semicontinuity, infima and suprema be decided without tolerances.

mod classify;
mod integral;
mod lemmas;

use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::Serialize;

use crate::scalar::Scalar;

pub use classify::{validate_phi, validate_psi, ClassReport, FnClass, FnProperty, PropertyCheck};
pub use integral::{integral_transform, IntegralTransform};
pub use lemmas::{
    construct_phi1, construct_phi2, exceedance_runs, Phi1Construction, Phi2Construction, Run, DEFAULT_DEPTH,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ControlError {
    #[error("malformed piecewise function: {0}")]
    Malformed(&'static str),
    #[error("argument {0} is negative")]
    NegativeArgument(Scalar),
    #[error("{what} violated at t = {at}")]
    Hypothesis { what: &'static str, at: Scalar },
    #[error("construction failed: {what} is {value}")]
    Construction { what: &'static str, value: Scalar },
    #[error("precondition failed: {0}")]
    Precondition(&'static str),
}

/// `slope · t + intercept`, in absolute coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Affine {
    pub slope: Scalar,
    pub intercept: Scalar,
}

impl Affine {
    pub fn new(slope: Scalar, intercept: Scalar) -> Self {
        Affine { slope, intercept }
    }

    pub fn constant(c: Scalar) -> Self {
        Affine::new(Scalar::zero(), c)
    }

    pub fn at(&self, t: &Scalar) -> Scalar {
        &(&self.slope * t) + &self.intercept
    }

    /// Where the line crosses zero, if it is not horizontal.
    pub fn root(&self) -> Option<Scalar> {
        if self.slope.is_zero() {
            None
        } else {
            Some(-(&self.intercept / &self.slope))
        }
    }

    fn sub(&self, other: &Affine) -> Affine {
        Affine::new(&self.slope - &other.slope, &self.intercept - &other.intercept)
    }
}

/// A function on `[0, ∞)` given by breakpoints `0 = b₀ < b₁ < … < b_k`, the
/// exact value at each breakpoint, and an affine piece on each open gap
/// `(b_i, b_{i+1})`; the last piece covers `(b_k, ∞)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PiecewiseFn {
    breakpoints: Vec<Scalar>,
    values_at: Vec<Scalar>,
    pieces: Vec<Affine>,
}

/// Anything usable as ψ or φ inside a contraction check.
pub trait ControlFn {
    fn apply(&self, t: &Scalar) -> Result<Scalar, ControlError>;
}

impl ControlFn for PiecewiseFn {
    fn apply(&self, t: &Scalar) -> Result<Scalar, ControlError> {
        self.eval(t)
    }
}

impl<F: ControlFn + ?Sized> ControlFn for &F {
    fn apply(&self, t: &Scalar) -> Result<Scalar, ControlError> {
        (**self).apply(t)
    }
}

/// `outer ∘ inner`.
#[derive(Debug, Clone, Copy)]
pub struct Composed<A, B> {
    pub outer: A,
    pub inner: B,
}

impl<A: ControlFn, B: ControlFn> ControlFn for Composed<A, B> {
    fn apply(&self, t: &Scalar) -> Result<Scalar, ControlError> {
        self.outer.apply(&self.inner.apply(t)?)
    }
}

impl PiecewiseFn {
    /// Validates the layout and returns the canonical form (adjacent
    /// identical pieces with a matching breakpoint value are merged).
    pub fn new(breakpoints: Vec<Scalar>, values_at: Vec<Scalar>, pieces: Vec<Affine>) -> Result<Self, ControlError> {
        if breakpoints.is_empty() {
            return Err(ControlError::Malformed("no breakpoints"));
        }
        if !breakpoints[0].is_zero() {
            return Err(ControlError::Malformed("first breakpoint must be 0"));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ControlError::Malformed("breakpoints must strictly ascend"));
        }
        if values_at.len() != breakpoints.len() || pieces.len() != breakpoints.len() {
            return Err(ControlError::Malformed("need one value and one piece per breakpoint"));
        }
        let mut f = PiecewiseFn {
            breakpoints,
            values_at,
            pieces,
        };
        f.canonicalize();
        Ok(f)
    }

    /// `t ↦ slope · t`.
    pub fn linear(slope: Scalar) -> Self {
        PiecewiseFn {
            breakpoints: alloc::vec![Scalar::zero()],
            values_at: alloc::vec![Scalar::zero()],
            pieces: alloc::vec![Affine::new(slope, Scalar::zero())],
        }
    }

    pub fn breakpoints(&self) -> &[Scalar] {
        &self.breakpoints
    }

    pub fn values_at(&self) -> &[Scalar] {
        &self.values_at
    }

    pub fn pieces(&self) -> &[Affine] {
        &self.pieces
    }

    fn canonicalize(&mut self) {
        let mut i = 1;
        while i < self.breakpoints.len() {
            let redundant =
                self.pieces[i - 1] == self.pieces[i] && self.values_at[i] == self.pieces[i].at(&self.breakpoints[i]);
            if redundant {
                self.breakpoints.remove(i);
                self.values_at.remove(i);
                self.pieces.remove(i);
            } else {
                i += 1;
            }
        }
    }

    /// `Ok(i)` when `t` is breakpoint `i`, `Err(i)` when `t` lies in the
    /// open gap after breakpoint `i`.
    fn locate(&self, t: &Scalar) -> Result<usize, usize> {
        match self.breakpoints.binary_search(t) {
            Ok(i) => Ok(i),
            Err(i) => Err(i - 1),
        }
    }

    /// Exact value at `t ≥ 0`.
    pub fn eval(&self, t: &Scalar) -> Result<Scalar, ControlError> {
        if t.is_negative() {
            return Err(ControlError::NegativeArgument(t.clone()));
        }
        Ok(match self.locate(t) {
            Ok(i) => self.values_at[i].clone(),
            Err(i) => self.pieces[i].at(t),
        })
    }

    /// `lim f(s)` as `s ↑ t`, for `t > 0`.
    pub fn left_limit(&self, t: &Scalar) -> Scalar {
        debug_assert!(t.is_positive());
        let i = match self.locate(t) {
            Ok(i) => i - 1,
            Err(i) => i,
        };
        self.pieces[i].at(t)
    }

    /// `lim f(s)` as `s ↓ t`.
    pub fn right_limit(&self, t: &Scalar) -> Scalar {
        let (Ok(i) | Err(i)) = self.locate(t);
        self.pieces[i].at(t)
    }

    /// The gap after breakpoint `i` as `(lo, hi)`; `hi` is `None` for the
    /// unbounded last gap.
    pub fn gap(&self, i: usize) -> (&Scalar, Option<&Scalar>) {
        (&self.breakpoints[i], self.breakpoints.get(i + 1))
    }

    /// A point strictly inside gap `i`.
    pub fn gap_probe(&self, i: usize) -> Scalar {
        match self.gap(i) {
            (lo, Some(hi)) => (lo + hi).half(),
            (lo, None) => lo + &Scalar::one(),
        }
    }

    /// Pointwise `self - other` on the merged breakpoints. The result may be
    /// negative; it is an intermediate, not a control function.
    pub fn sub(&self, other: &PiecewiseFn) -> PiecewiseFn {
        self.combine(other, |a, b| a - b, |a, b| a.sub(b))
    }

    fn combine(
        &self,
        other: &PiecewiseFn,
        value_op: impl Fn(&Scalar, &Scalar) -> Scalar,
        piece_op: impl Fn(&Affine, &Affine) -> Affine,
    ) -> PiecewiseFn {
        let merged = merge_sorted(&self.breakpoints, &other.breakpoints);
        let mut values_at = Vec::with_capacity(merged.len());
        let mut pieces = Vec::with_capacity(merged.len());
        for b in &merged {
            let (Ok(i) | Err(i)) = self.locate(b);
            let (Ok(j) | Err(j)) = other.locate(b);
            values_at.push(value_op(
                &self.eval(b).expect("breakpoints are nonnegative"),
                &other.eval(b).expect("breakpoints are nonnegative"),
            ));
            pieces.push(piece_op(&self.pieces[i], &other.pieces[j]));
        }
        let mut f = PiecewiseFn {
            breakpoints: merged,
            values_at,
            pieces,
        };
        f.canonicalize();
        f
    }

    /// Supremum over a bounded interval.
    pub fn sup_over(&self, interval: &Interval) -> Scalar {
        self.extreme_over(interval, Ordering::Greater)
    }

    /// Infimum over a bounded interval.
    pub fn inf_over(&self, interval: &Interval) -> Scalar {
        self.extreme_over(interval, Ordering::Less)
    }

    // An affine piece attains its extremes at gap ends, so the candidates are
    // breakpoint values and one-sided limits inside the interval plus the
    // interval's own endpoints (value if closed, inner limit if open).
    fn extreme_over(&self, interval: &Interval, want: Ordering) -> Scalar {
        let Interval {
            lo,
            lo_closed,
            hi,
            hi_closed,
        } = interval;
        debug_assert!(lo <= hi && !lo.is_negative());
        let mut candidates = Vec::new();
        if *lo_closed {
            candidates.push(self.eval(lo).expect("nonnegative"));
        }
        if *hi_closed {
            candidates.push(self.eval(hi).expect("nonnegative"));
        }
        if lo < hi {
            candidates.push(self.right_limit(lo));
            candidates.push(self.left_limit(hi));
            for b in self.breakpoints.iter().filter(|b| *b > lo && *b < hi) {
                candidates.push(self.eval(b).expect("nonnegative"));
                candidates.push(self.left_limit(b));
                candidates.push(self.right_limit(b));
            }
        }
        let pick = |a: Scalar, b: Scalar| if b.cmp(&a) == want { b } else { a };
        candidates
            .into_iter()
            .reduce(pick)
            .expect("interval has at least one candidate")
    }

    /// A point of the open gap `i` where the piece is `≤ 0`, if any.
    pub(crate) fn nonpositive_point_in_gap(&self, i: usize) -> Option<Scalar> {
        let piece = &self.pieces[i];
        match self.gap(i) {
            (lo, Some(hi)) => {
                let (l, r) = (piece.at(lo), piece.at(hi));
                if l.is_zero() && r.is_zero() || !l.is_positive() && !r.is_positive() {
                    Some((lo + hi).half())
                } else if l.is_negative() {
                    let root = piece.root().expect("sign change implies slope");
                    Some((lo + &root).half())
                } else if r.is_negative() {
                    let root = piece.root().expect("sign change implies slope");
                    Some((&root + hi).half())
                } else {
                    None
                }
            }
            (lo, None) => {
                let l = piece.at(lo);
                let s = &piece.slope;
                if s.is_negative() {
                    let root = piece.root().expect("nonzero slope");
                    Some(lo.max(&root).clone() + Scalar::one())
                } else if s.is_zero() {
                    (!l.is_positive()).then(|| lo + &Scalar::one())
                } else if l.is_negative() {
                    let root = piece.root().expect("nonzero slope");
                    Some((lo + &root).half())
                } else {
                    None
                }
            }
        }
    }
}

/// A bounded interval with open or closed ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Scalar,
    pub lo_closed: bool,
    pub hi: Scalar,
    pub hi_closed: bool,
}

impl Interval {
    pub fn closed(lo: Scalar, hi: Scalar) -> Self {
        Interval {
            lo,
            lo_closed: true,
            hi,
            hi_closed: true,
        }
    }

    pub fn open(lo: Scalar, hi: Scalar) -> Self {
        Interval {
            lo,
            lo_closed: false,
            hi,
            hi_closed: false,
        }
    }

    /// `(lo, hi]`
    pub fn open_closed(lo: Scalar, hi: Scalar) -> Self {
        Interval {
            lo,
            lo_closed: false,
            hi,
            hi_closed: true,
        }
    }

    /// `[lo, hi)`
    pub fn closed_open(lo: Scalar, hi: Scalar) -> Self {
        Interval {
            lo,
            lo_closed: true,
            hi,
            hi_closed: false,
        }
    }
}

fn merge_sorted(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = a.iter().chain(b).cloned().collect();
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn r(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    /// ½t on [0, 2], 1 on (2, ∞), value 1 at 2.
    pub(crate) fn half_then_one() -> PiecewiseFn {
        PiecewiseFn::new(
            vec![Scalar::zero(), Scalar::from_int(2)],
            vec![Scalar::zero(), Scalar::one()],
            vec![Affine::new(r(1, 2), Scalar::zero()), Affine::constant(Scalar::one())],
        )
        .unwrap()
    }

    #[test]
    fn evaluates_pieces_and_breakpoints() {
        let id = PiecewiseFn::linear(Scalar::one());
        assert_eq!(id.eval(&r(9, 64)).unwrap(), r(9, 64));
        let phi = half_then_one();
        assert_eq!(phi.eval(&Scalar::from_int(2)).unwrap(), Scalar::one());
        assert_eq!(phi.eval(&Scalar::from_int(3)).unwrap(), Scalar::one());
        assert_eq!(phi.eval(&Scalar::zero()).unwrap(), Scalar::zero());
        assert_eq!(phi.eval(&r(1, 3)).unwrap(), r(1, 6));
    }

    #[test]
    fn negative_argument_is_an_error() {
        assert_eq!(
            PiecewiseFn::linear(Scalar::one()).eval(&r(-1, 2)),
            Err(ControlError::NegativeArgument(r(-1, 2)))
        );
    }

    #[test]
    fn layout_errors() {
        let one = Scalar::one;
        assert!(PiecewiseFn::new(vec![one()], vec![one()], vec![Affine::constant(one())]).is_err());
        assert!(PiecewiseFn::new(
            vec![Scalar::zero(), one(), one()],
            vec![Scalar::zero(), one(), one()],
            vec![
                Affine::constant(one()),
                Affine::constant(one()),
                Affine::constant(one())
            ]
        )
        .is_err());
        assert!(PiecewiseFn::new(vec![Scalar::zero()], vec![], vec![]).is_err());
    }

    #[test]
    fn redundant_breakpoints_are_merged() {
        let f = PiecewiseFn::new(
            vec![Scalar::zero(), Scalar::one(), Scalar::from_int(2)],
            vec![Scalar::zero(), Scalar::one(), Scalar::from_int(2)],
            vec![
                Affine::new(Scalar::one(), Scalar::zero()),
                Affine::new(Scalar::one(), Scalar::zero()),
                Affine::new(Scalar::one(), Scalar::zero()),
            ],
        )
        .unwrap();
        assert_eq!(f, PiecewiseFn::linear(Scalar::one()));
    }

    #[test]
    fn sup_and_inf_see_limits_and_point_values() {
        // Value 5 at t=1, limits 1 on both sides.
        let f = PiecewiseFn::new(
            vec![Scalar::zero(), Scalar::one()],
            vec![Scalar::zero(), Scalar::from_int(5)],
            vec![
                Affine::new(Scalar::one(), Scalar::zero()),
                Affine::constant(Scalar::one()),
            ],
        )
        .unwrap();
        assert_eq!(
            f.sup_over(&Interval::closed(Scalar::zero(), Scalar::from_int(2))),
            Scalar::from_int(5)
        );
        assert_eq!(
            f.sup_over(&Interval::open(Scalar::zero(), Scalar::one())),
            Scalar::one()
        );
        assert_eq!(f.inf_over(&Interval::open(r(1, 2), Scalar::from_int(2))), r(1, 2));
        assert_eq!(f.inf_over(&Interval::closed(r(1, 2), Scalar::from_int(2))), r(1, 2));
    }

    #[test]
    fn difference_of_functions() {
        let d = PiecewiseFn::linear(Scalar::one()).sub(&half_then_one());
        assert_eq!(d.eval(&Scalar::one()).unwrap(), r(1, 2));
        assert_eq!(d.eval(&Scalar::from_int(2)).unwrap(), Scalar::one());
        assert_eq!(d.eval(&Scalar::from_int(5)).unwrap(), Scalar::from_int(4));
    }

    #[test]
    fn composition_applies_inner_first() {
        let double = PiecewiseFn::linear(Scalar::from_int(2));
        let c = Composed {
            outer: &half_then_one(),
            inner: &double,
        };
        assert_eq!(c.apply(&r(1, 2)).unwrap(), r(1, 2));
        assert_eq!(c.apply(&Scalar::from_int(3)).unwrap(), Scalar::one());
    }
}
