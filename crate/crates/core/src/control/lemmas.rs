//! Adjustments of φ: the bounded-by-ψ replacement φ₂ and the
//! monotone-comparison replacement φ₁.

use alloc::vec::Vec;

use serde::Serialize;

use super::classify::{validate_phi, validate_psi};
use super::{Affine, ControlError, Interval, PiecewiseFn};
use crate::scalar::Scalar;

/// Default number of dyadic-style levels built on each side of α.
pub const DEFAULT_DEPTH: usize = 16;

/// A maximal open interval `(lo, hi)`; `hi = None` means `(lo, ∞)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Run {
    pub lo: Scalar,
    pub hi: Option<Scalar>,
}

impl Run {
    fn contains(&self, t: &Scalar) -> bool {
        t > &self.lo && self.hi.as_ref().is_none_or(|h| t < h)
    }

    fn probe(&self) -> Scalar {
        match &self.hi {
            Some(h) => (&self.lo + h).half(),
            None => &self.lo + &Scalar::one(),
        }
    }
}

// A piece of the positive set before merging: endpoints with inclusion flags.
struct Segment {
    lo: Scalar,
    lo_in: bool,
    hi: Option<Scalar>,
    hi_in: bool,
}

/// Maximal open intervals on which `d > 0`.
///
/// Fails when the positive set is not open, which cannot happen for the
/// difference of an lsc function and a continuous one.
pub fn exceedance_runs(d: &PiecewiseFn) -> Result<Vec<Run>, ControlError> {
    let bps = d.breakpoints();
    let mut segments: Vec<Segment> = Vec::new();
    for (i, b) in bps.iter().enumerate() {
        if d.values_at()[i].is_positive() {
            segments.push(Segment {
                lo: b.clone(),
                lo_in: true,
                hi: Some(b.clone()),
                hi_in: true,
            });
        }
        let piece = &d.pieces()[i];
        let left = piece.at(b);
        let open = |lo: Scalar, hi: Option<Scalar>| Segment {
            lo,
            lo_in: false,
            hi,
            hi_in: false,
        };
        match bps.get(i + 1) {
            Some(next) => {
                let right = piece.at(next);
                match (left.is_positive(), right.is_positive()) {
                    (true, true) => segments.push(open(b.clone(), Some(next.clone()))),
                    (true, false) => segments.push(open(b.clone(), piece.root())),
                    (false, true) => segments.push(open(piece.root().unwrap(), Some(next.clone()))),
                    (false, false) => {}
                }
            }
            None => {
                let slope = &piece.slope;
                if left.is_positive() {
                    let hi = if slope.is_negative() { piece.root() } else { None };
                    segments.push(open(b.clone(), hi));
                } else if slope.is_positive() {
                    segments.push(open(piece.root().unwrap(), None));
                }
            }
        }
    }

    let mut merged: Vec<Segment> = Vec::new();
    for seg in segments {
        if let Some(last) = merged.last_mut() {
            if last.hi.as_ref() == Some(&seg.lo) && (last.hi_in || seg.lo_in) {
                last.hi = seg.hi;
                last.hi_in = seg.hi_in;
                continue;
            }
        }
        merged.push(seg);
    }
    merged
        .into_iter()
        .map(|s| {
            if s.lo_in || s.hi_in {
                Err(ControlError::Precondition(
                    "exceedance set is not open (φ is not lower semicontinuous)",
                ))
            } else {
                Ok(Run { lo: s.lo, hi: s.hi })
            }
        })
        .collect()
}

fn require_classes(psi: &PiecewiseFn, phi: &PiecewiseFn) -> Result<(), ControlError> {
    if !validate_psi(psi).passed() {
        return Err(ControlError::Precondition("ψ is not in Ψ"));
    }
    if !validate_phi(phi).passed() {
        return Err(ControlError::Precondition("φ is not in Φ"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Phi2Construction {
    pub phi2: PiecewiseFn,
    /// Bounded runs where φ > ψ; φ₂ follows ψ there.
    pub bounded: Vec<Run>,
    /// The unbounded run `(r, ∞)`, if any; φ₂ is the constant φ(r) there.
    pub unbounded: Option<Run>,
}

/// Replaces φ by a φ₂ ∈ Φ with φ₂ ≤ φ and φ₂ ≤ ψ: φ off the exceedance set
/// `{φ > ψ}`, ψ on its bounded components, and the constant φ(r) on an
/// unbounded component `(r, ∞)`.
///
/// When the unbounded component starts at 0, φ(0) = 0 would not be an
/// admissible constant and ψ is used on it instead.
pub fn construct_phi2(psi: &PiecewiseFn, phi: &PiecewiseFn) -> Result<Phi2Construction, ControlError> {
    require_classes(psi, phi)?;
    let runs = exceedance_runs(&phi.sub(psi))?;
    if runs.is_empty() {
        return Ok(Phi2Construction {
            phi2: phi.clone(),
            bounded: Vec::new(),
            unbounded: None,
        });
    }
    let (bounded, unbounded): (Vec<Run>, Vec<Run>) = runs.into_iter().partition(|r| r.hi.is_some());
    let unbounded = unbounded.into_iter().next();
    let tail_value = match &unbounded {
        Some(run) => Some(phi.eval(&run.lo)?).filter(|v| v.is_positive()),
        None => None,
    };

    let mut bps: Vec<Scalar> = psi.breakpoints().iter().chain(phi.breakpoints()).cloned().collect();
    for run in bounded.iter().chain(&unbounded) {
        bps.push(run.lo.clone());
        bps.extend(run.hi.clone());
    }
    bps.sort();
    bps.dedup();

    #[derive(Clone, Copy)]
    enum Source {
        Phi,
        Psi,
        Tail,
    }
    let source_at = |t: &Scalar| {
        if bounded.iter().any(|r| r.contains(t)) {
            Source::Psi
        } else if unbounded.as_ref().is_some_and(|r| r.contains(t)) {
            if tail_value.is_some() {
                Source::Tail
            } else {
                Source::Psi
            }
        } else {
            Source::Phi
        }
    };
    let piece_of = |f: &PiecewiseFn, t: &Scalar| {
        let (Ok(i) | Err(i)) = f.locate(t);
        f.pieces()[i].clone()
    };

    let mut values_at = Vec::with_capacity(bps.len());
    let mut pieces = Vec::with_capacity(bps.len());
    for (i, b) in bps.iter().enumerate() {
        values_at.push(match source_at(b) {
            Source::Phi => phi.eval(b)?,
            Source::Psi => psi.eval(b)?,
            Source::Tail => tail_value.clone().unwrap(),
        });
        let probe = match bps.get(i + 1) {
            Some(next) => (b + next).half(),
            None => b + &Scalar::one(),
        };
        pieces.push(match source_at(&probe) {
            Source::Phi => piece_of(phi, b),
            Source::Psi => piece_of(psi, b),
            Source::Tail => Affine::constant(tail_value.clone().unwrap()),
        });
    }
    Ok(Phi2Construction {
        phi2: PiecewiseFn::new(bps, values_at, pieces)?,
        bounded,
        unbounded,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Phi1Construction {
    pub phi1: PiecewiseFn,
    pub alpha: Scalar,
    pub depth: usize,
    /// The interval families were cut at `depth`; outside
    /// `(constructed_from, constructed_to)` φ₁ is a constant extension.
    pub truncated: bool,
    pub constructed_from: Scalar,
    pub constructed_to: Scalar,
}

/// Builds the piecewise-constant φ₁ with
/// `ψ(u) − φ(u) ≤ ψ(v) − φ₁(v)` for all `u ≤ v`, from
///
/// - `aₙ = ψ(α/n) − sup_[0, α/n] (ψ − φ)`,
/// - `b  = inf_(α, 2α) φ`,
/// - `bₙ = inf_(α/(n+1), α/n] φ`,
/// - `cₙ = inf_[(n+1)α, (n+2)α) φ`,
///
/// with `φ₁ = min{b, a₁, b₁, a₂, …, bₙ, aₙ₊₁}` on `(α/(n+1), α/n]`,
/// `min{b, a₁}` on `(α, 2α)` and `min{b, a₁, c₁, …, cₙ}` on
/// `[(n+1)α, (n+2)α)`. Requires ψ ≥ φ.
pub fn construct_phi1(
    psi: &PiecewiseFn,
    phi: &PiecewiseFn,
    alpha: &Scalar,
    depth: usize,
) -> Result<Phi1Construction, ControlError> {
    require_classes(psi, phi)?;
    if !alpha.is_positive() {
        return Err(ControlError::Precondition("α must be positive"));
    }
    if depth == 0 {
        return Err(ControlError::Precondition("depth must be at least 1"));
    }
    if let Some(run) = exceedance_runs(&phi.sub(psi))?.first() {
        return Err(ControlError::Hypothesis {
            what: "ψ ≥ φ",
            at: run.probe(),
        });
    }

    let diff = psi.sub(phi);
    let int = |k: usize| Scalar::from_int(k as i64);
    let positive = |what: &'static str, value: Scalar| {
        if value.is_positive() {
            Ok(value)
        } else {
            Err(ControlError::Construction { what, value })
        }
    };

    // a[n-1] = aₙ for n = 1..=depth+1
    let a: Vec<Scalar> = (1..=depth + 1)
        .map(|n| {
            let right = alpha / &int(n);
            let sup = diff.sup_over(&Interval::closed(Scalar::zero(), right.clone()));
            positive("aₙ", &psi.eval(&right).expect("positive") - &sup)
        })
        .collect::<Result<_, _>>()?;
    let b = positive("b", phi.inf_over(&Interval::open(alpha.clone(), alpha * &int(2))))?;
    let bn: Vec<Scalar> = (1..=depth)
        .map(|n| {
            let iv = Interval::open_closed(alpha / &int(n + 1), alpha / &int(n));
            positive("bₙ", phi.inf_over(&iv))
        })
        .collect::<Result<_, _>>()?;
    let cn: Vec<Scalar> = (1..=depth)
        .map(|n| {
            let iv = Interval::closed_open(alpha * &int(n + 1), alpha * &int(n + 2));
            positive("cₙ", phi.inf_over(&iv))
        })
        .collect::<Result<_, _>>()?;

    // Level values below α: lower[n-1] for (α/(n+1), α/n].
    let mut lower = Vec::with_capacity(depth);
    let mut running = b.clone().min(a[0].clone());
    let middle = running.clone();
    for n in 1..=depth {
        running = running.min(bn[n - 1].clone()).min(a[n].clone());
        lower.push(running.clone());
    }
    // Level values above 2α: upper[n-1] for [(n+1)α, (n+2)α).
    let mut upper = Vec::with_capacity(depth);
    let mut running = middle.clone();
    for c in &cn {
        running = running.min(c.clone());
        upper.push(running.clone());
    }

    let mut bps = alloc::vec![Scalar::zero()];
    let mut values = alloc::vec![Scalar::zero()];
    let mut pieces = Vec::new();
    // (0, α/(N+1)] continues the deepest level.
    let deepest = lower[depth - 1].clone();
    pieces.push(Affine::constant(deepest.clone()));
    bps.push(alpha / &int(depth + 1));
    values.push(deepest);
    for n in (1..=depth).rev() {
        // gap (α/(n+1), α/n) and the closed right end α/n
        pieces.push(Affine::constant(lower[n - 1].clone()));
        bps.push(alpha / &int(n));
        values.push(lower[n - 1].clone());
    }
    // (α, 2α)
    pieces.push(Affine::constant(middle));
    for n in 1..=depth {
        // closed left end (n+1)α and the gap up to (n+2)α
        bps.push(alpha * &int(n + 1));
        values.push(upper[n - 1].clone());
        pieces.push(Affine::constant(upper[n - 1].clone()));
    }
    // [(N+2)α, ∞) continues the outermost level.
    let outer = upper[depth - 1].clone();
    bps.push(alpha * &int(depth + 2));
    values.push(outer.clone());
    pieces.push(Affine::constant(outer));

    Ok(Phi1Construction {
        phi1: PiecewiseFn::new(bps, values, pieces)?,
        alpha: alpha.clone(),
        depth,
        truncated: true,
        constructed_from: alpha / &int(depth + 1),
        constructed_to: alpha * &int(depth + 2),
    })
}
