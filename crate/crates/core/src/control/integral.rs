use alloc::vec::Vec;

use super::classify::positive_gap_failures;
use super::{ControlError, ControlFn, PiecewiseFn};
use crate::scalar::Scalar;

/// `τ(x) = ∫₀ˣ φ(t) dt` for a piecewise-linear integrand. τ is
/// piecewise quadratic, so it is kept as an evaluator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralTransform {
    integrand: PiecewiseFn,
    // cumulative[i] = ∫₀^{b_i}
    cumulative: Vec<Scalar>,
}

/// Requires the integrand to be strictly positive on every gap, so that
/// `∫₀^ε > 0` for every `ε > 0`. Breakpoint values do not matter.
pub fn integral_transform(integrand: &PiecewiseFn) -> Result<IntegralTransform, ControlError> {
    if !positive_gap_failures(integrand).is_empty() {
        return Err(ControlError::Precondition(
            "integrand vanishes on a set of positive length",
        ));
    }
    let bps = integrand.breakpoints();
    let mut cumulative = Vec::with_capacity(bps.len());
    let mut acc = Scalar::zero();
    cumulative.push(acc.clone());
    for i in 1..bps.len() {
        acc = acc + piece_integral(integrand, i - 1, &bps[i - 1], &bps[i]);
        cumulative.push(acc.clone());
    }
    Ok(IntegralTransform {
        integrand: integrand.clone(),
        cumulative,
    })
}

fn piece_integral(f: &PiecewiseFn, i: usize, from: &Scalar, to: &Scalar) -> Scalar {
    let p = &f.pieces()[i];
    let quad = &(to * to) - &(from * from);
    &(&p.slope * &quad).half() + &(&p.intercept * &(to - from))
}

impl IntegralTransform {
    pub fn eval(&self, x: &Scalar) -> Result<Scalar, ControlError> {
        if x.is_negative() {
            return Err(ControlError::NegativeArgument(x.clone()));
        }
        let bps = self.integrand.breakpoints();
        let i = match bps.binary_search(x) {
            Ok(i) => return Ok(self.cumulative[i].clone()),
            Err(i) => i - 1,
        };
        Ok(&self.cumulative[i] + &piece_integral(&self.integrand, i, &bps[i], x))
    }

    pub fn integrand(&self) -> &PiecewiseFn {
        &self.integrand
    }
}

impl ControlFn for IntegralTransform {
    fn apply(&self, t: &Scalar) -> Result<Scalar, ControlError> {
        self.eval(t)
    }
}
