use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

pub(crate) fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

pub(crate) fn pow2(p: usize) -> BigUint {
    BigUint::one() << p
}

/// `a / b` as a float, accurate even when both exceed the f64 range.
pub(crate) fn ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    assert!(!b.is_zero(), "division by zero");
    if let (Some(x), Some(y)) = (a.to_f64(), b.to_f64()) {
        if x.is_finite() && y.is_finite() {
            return x / y;
        }
    }
    let shift = 128u64;
    let excess = a.bits().saturating_sub(b.bits());
    let q: BigUint = (a << shift) / b;
    let q = q >> excess;
    let base = q.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(shift as i32);
    base * 2f64.powi(excess as i32)
}

/// `100 · (1 − reduced/unreduced)`.
pub(crate) fn reduction_percent(reduced: &BigUint, unreduced: &BigUint) -> f64 {
    100.0 * (1.0 - ratio_f64(reduced, unreduced))
}

pub(crate) fn to_f64_checked(x: &BigUint, what: &str) -> f64 {
    let v = x.to_f64().unwrap_or(f64::INFINITY);
    assert!(v.is_finite() && v < 2f64.powi(53), "{what} overflows exact f64 range");
    v
}
