use alloc::vec::Vec;

use serde::Serialize;

use super::PiecewiseFn;
use crate::scalar::Scalar;
use crate::verdict::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FnProperty {
    /// f(0) = 0 and f(t) > 0 for t > 0.
    ZeroIffZero,
    Nondecreasing,
    Continuous,
    LowerSemicontinuous,
}

/// Ψ (continuous, nondecreasing, zero only at 0) or Φ (lsc, zero only at 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FnClass {
    Psi,
    Phi,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    pub property: FnProperty,
    pub verdict: Verdict,
    /// Arguments `t` where the property fails.
    pub witnesses: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub class: FnClass,
    pub checks: Vec<PropertyCheck>,
}

impl ClassReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict.is_pass())
    }

    pub fn check(&self, property: FnProperty) -> Option<&PropertyCheck> {
        self.checks.iter().find(|c| c.property == property)
    }
}

fn check(property: FnProperty, witnesses: Vec<Scalar>) -> PropertyCheck {
    PropertyCheck {
        property,
        verdict: Verdict::from_holds(witnesses.is_empty(), false),
        witnesses,
    }
}

pub fn validate_psi(f: &PiecewiseFn) -> ClassReport {
    ClassReport {
        class: FnClass::Psi,
        checks: alloc::vec![
            check(FnProperty::ZeroIffZero, zero_iff_zero(f)),
            check(FnProperty::Nondecreasing, nondecreasing(f)),
            check(FnProperty::Continuous, continuous(f)),
        ],
    }
}

pub fn validate_phi(f: &PiecewiseFn) -> ClassReport {
    ClassReport {
        class: FnClass::Phi,
        checks: alloc::vec![
            check(FnProperty::ZeroIffZero, zero_iff_zero(f)),
            check(FnProperty::LowerSemicontinuous, lower_semicontinuous(f)),
        ],
    }
}

pub(crate) fn zero_iff_zero(f: &PiecewiseFn) -> Vec<Scalar> {
    let mut w = Vec::new();
    if !f.values_at()[0].is_zero() {
        w.push(Scalar::zero());
    }
    for (b, v) in f.breakpoints().iter().zip(f.values_at()).skip(1) {
        if !v.is_positive() {
            w.push(b.clone());
        }
    }
    w.extend(positive_gap_failures(f));
    w.sort();
    w.dedup();
    w
}

/// Points inside gaps where the function is not strictly positive.
pub(crate) fn positive_gap_failures(f: &PiecewiseFn) -> Vec<Scalar> {
    (0..f.pieces().len())
        .filter_map(|i| f.nonpositive_point_in_gap(i))
        .collect()
}

fn nondecreasing(f: &PiecewiseFn) -> Vec<Scalar> {
    let mut w = Vec::new();
    for (i, b) in f.breakpoints().iter().enumerate() {
        let v = &f.values_at()[i];
        let right = f.right_limit(b);
        let left_ok = i == 0 || &f.left_limit(b) <= v;
        if !left_ok || v > &right {
            w.push(b.clone());
        }
        if f.pieces()[i].slope.is_negative() {
            w.push(f.gap_probe(i));
        }
    }
    w.sort();
    w
}

fn continuous(f: &PiecewiseFn) -> Vec<Scalar> {
    f.breakpoints()
        .iter()
        .enumerate()
        .filter(|(i, b)| {
            let v = &f.values_at()[*i];
            (*i > 0 && &f.left_limit(b) != v) || &f.right_limit(b) != v
        })
        .map(|(_, b)| b.clone())
        .collect()
}

fn lower_semicontinuous(f: &PiecewiseFn) -> Vec<Scalar> {
    f.breakpoints()
        .iter()
        .enumerate()
        .filter(|(i, b)| {
            let v = &f.values_at()[*i];
            (*i > 0 && &f.left_limit(b) < v) || &f.right_limit(b) < v
        })
        .map(|(_, b)| b.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::Affine;
    use alloc::vec;

    fn r(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn half_then_one() -> PiecewiseFn {
        PiecewiseFn::new(
            vec![Scalar::zero(), Scalar::from_int(2)],
            vec![Scalar::zero(), Scalar::one()],
            vec![Affine::new(r(1, 2), Scalar::zero()), Affine::constant(Scalar::one())],
        )
        .unwrap()
    }

    #[test]
    fn identity_is_a_psi() {
        assert!(validate_psi(&PiecewiseFn::linear(Scalar::one())).passed());
    }

    #[test]
    fn half_then_one_is_accepted_as_psi_and_phi() {
        let f = half_then_one();
        assert!(validate_psi(&f).passed());
        assert!(validate_phi(&f).passed());
    }

    #[test]
    fn downward_step_fails_monotonicity() {
        // t on [0,1), value 0 at 1, then 1 onwards.
        let f = PiecewiseFn::new(
            vec![Scalar::zero(), Scalar::one()],
            vec![Scalar::zero(), Scalar::zero()],
            vec![
                Affine::new(Scalar::one(), Scalar::zero()),
                Affine::constant(Scalar::one()),
            ],
        )
        .unwrap();
        let report = validate_psi(&f);
        let mono = report.check(FnProperty::Nondecreasing).unwrap();
        assert_eq!(mono.verdict, Verdict::Fail);
        assert_eq!(mono.witnesses, vec![Scalar::one()]);
    }

    #[test]
    fn thirty_second_slope_is_a_phi() {
        assert!(validate_phi(&PiecewiseFn::linear(r(1, 32))).passed());
    }

    #[test]
    fn upper_point_value_fails_lsc() {
        let f = PiecewiseFn::new(
            vec![Scalar::zero(), Scalar::one()],
            vec![Scalar::zero(), Scalar::from_int(2)],
            vec![
                Affine::new(Scalar::one(), Scalar::zero()),
                Affine::constant(Scalar::one()),
            ],
        )
        .unwrap();
        let lsc = validate_phi(&f);
        let c = lsc.check(FnProperty::LowerSemicontinuous).unwrap();
        assert_eq!(c.verdict, Verdict::Fail);
        assert_eq!(c.witnesses, vec![Scalar::one()]);
        assert_eq!(
            validate_psi(&f).check(FnProperty::Continuous).unwrap().verdict,
            Verdict::Fail
        );
    }

    #[test]
    fn zero_plateau_fails_zero_iff_zero() {
        // 0 on [0,1], then t-1.
        let f = PiecewiseFn::new(
            vec![Scalar::zero(), Scalar::one()],
            vec![Scalar::zero(), Scalar::zero()],
            vec![
                Affine::constant(Scalar::zero()),
                Affine::new(Scalar::one(), -Scalar::one()),
            ],
        )
        .unwrap();
        let c = validate_phi(&f);
        let z = c.check(FnProperty::ZeroIffZero).unwrap();
        assert_eq!(z.witnesses, vec![r(1, 2), Scalar::one()]);
    }

    #[test]
    fn decreasing_tail_fails_positivity() {
        let f = PiecewiseFn::new(
            vec![Scalar::zero(), Scalar::one()],
            vec![Scalar::zero(), Scalar::one()],
            vec![
                Affine::new(Scalar::one(), Scalar::zero()),
                Affine::new(-Scalar::one(), Scalar::from_int(2)),
            ],
        )
        .unwrap();
        let c = validate_phi(&f);
        let z = c.check(FnProperty::ZeroIffZero).unwrap();
        assert_eq!(z.verdict, Verdict::Fail);
        assert!(f.eval(&z.witnesses[0]).unwrap() <= Scalar::zero());
        assert_eq!(
            validate_psi(&f).check(FnProperty::Nondecreasing).unwrap().verdict,
            Verdict::Fail
        );
    }
}
