//! Extrinsic check-node rules: tanh product and min-sum with corrections.

use crate::scalar::{clamp_llr, Real, LLR_CLAMP};

/// Magnitude floor inside the log-tanh domain.
const MAG_FLOOR: f64 = 1e-12;

/// Correction applied to the min-sum magnitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MinSumCorrection {
    None,
    /// Multiply by a weight in (0, 1].
    Normalized(f64),
    /// Subtract an offset, flooring at zero.
    Offset(f64),
}

/// Check-node update rule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CheckRule {
    SumProduct,
    MinSum(MinSumCorrection),
}

impl CheckRule {
    #[inline]
    pub fn apply<T: Real>(&self, inputs: &[T], out: &mut [T]) {
        match *self {
            CheckRule::SumProduct => boxplus_extrinsic(inputs, out),
            CheckRule::MinSum(corr) => minsum_extrinsic(inputs, out, corr),
        }
    }
}

/// `φ(x) = −ln tanh(x/2) = ln((1 + e^{−x}) / (1 − e^{−x}))`, its own inverse on (0, ∞).
#[inline]
pub fn phi<T: Real>(x: T) -> T {
    let (e, denom) = if x < T::one() {
        let em = (-x).exp_m1();
        (T::one() + em, -em)
    } else {
        let e = (-x).exp();
        (e, T::one() - e)
    };
    (T::lit(2.0) * e / denom).ln_1p()
}

/// `out[k] = 2·atanh(Π_{q≠k} tanh(inputs[q]/2))`.
///
/// Evaluated in the log-magnitude domain: accumulate `φ(|x|)` and a sign
/// parity, remove the target edge by subtraction (by direct summation for the
/// largest term) and map back through `φ`.
/// Magnitudes are clamped to `[1e-12, 30]` first. Any exact zero among the
/// other inputs forces an exact zero output.
pub fn boxplus_extrinsic<T: Real>(inputs: &[T], out: &mut [T]) {
    debug_assert_eq!(inputs.len(), out.len());
    for (&x, slot) in inputs.iter().zip(out.iter_mut()) {
        *slot = phi_term(x);
    }
    boxplus_from_terms(inputs, out);
}

/// `φ` of the clamped magnitude of one check input; zero for an exact zero.
#[inline]
pub(crate) fn phi_term<T: Real>(x: T) -> T {
    if x == T::zero() {
        T::zero()
    } else {
        phi(x.abs().max(T::lit(MAG_FLOOR)).min(T::lit(LLR_CLAMP)))
    }
}

/// Second half of [`boxplus_extrinsic`]: on entry `out[k]` holds
/// `phi_term(inputs[k])`.
pub(crate) fn boxplus_from_terms<T: Real>(inputs: &[T], out: &mut [T]) {
    let mut total = T::zero();
    let mut negative = false;
    let mut zeros = 0usize;
    let mut zero_at = 0usize;
    for (k, (&x, &p)) in inputs.iter().zip(out.iter()).enumerate() {
        if x == T::zero() {
            zeros += 1;
            zero_at = k;
            continue;
        }
        negative ^= x < T::zero();
        total = total + p;
    }

    let magnitude = |d: T| -> T { clamp_llr(phi(d.max(T::min_positive_value()))) };

    match zeros {
        0 => {
            // `total − φ_k` cancels badly only for a term holding most of the
            // total; there is at most one, so sum its complement directly
            let (big, _) = out.iter().enumerate().fold((0, T::zero()), |acc, (k, &p)| if p > acc.1 { (k, p) } else { acc });
            let rest = out.iter().enumerate().filter(|&(k, _)| k != big).fold(T::zero(), |a, (_, &p)| a + p);
            for (k, (&x, slot)) in inputs.iter().zip(out.iter_mut()).enumerate() {
                let m = magnitude(if k == big { rest } else { total - *slot });
                *slot = if negative ^ (x < T::zero()) { -m } else { m };
            }
        }
        1 => {
            let m = magnitude(total);
            out.iter_mut().for_each(|o| *o = T::zero());
            out[zero_at] = if negative { -m } else { m };
        }
        _ => out.iter_mut().for_each(|o| *o = T::zero()),
    }
}

/// `out[k] = Π_{q≠k} sgn(x_q) · min_{q≠k} |x_q|`, then the correction.
pub fn minsum_extrinsic<T: Real>(inputs: &[T], out: &mut [T], correction: MinSumCorrection) {
    debug_assert_eq!(inputs.len(), out.len());
    let mut min1 = T::infinity();
    let mut min2 = T::infinity();
    let mut arg = usize::MAX;
    let mut negative = false;
    for (k, &x) in inputs.iter().enumerate() {
        negative ^= x < T::zero();
        let a = x.abs();
        if a < min1 {
            min2 = min1;
            min1 = a;
            arg = k;
        } else if a < min2 {
            min2 = a;
        }
    }
    let adjust = |m: T| -> T {
        let m = if m.is_finite() { m } else { T::zero() };
        match correction {
            MinSumCorrection::None => m,
            MinSumCorrection::Normalized(w) => m * T::lit(w),
            MinSumCorrection::Offset(b) => (m - T::lit(b)).max(T::zero()),
        }
    };
    let (c1, c2) = (adjust(min1), adjust(min2));
    for (k, (&x, slot)) in inputs.iter().zip(out.iter_mut()).enumerate() {
        let m = if k == arg { c2 } else { c1 };
        *slot = if negative ^ (x < T::zero()) { -m } else { m };
    }
}
