//! Exact and high-precision helpers built on arbitrary-precision rationals.
//! Used only to construct oracles, never on the engine path.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Working precision, in decimal digits, for transcendental evaluation.
pub const WORKING_DIGITS: u32 = 80;

pub fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), k as usize)
}

/// The exact rational value of a finite `f64`.
pub fn from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite input")
}

pub fn from_int(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

/// Rounds `q` to the nearest multiple of `10^-digits`.
pub fn round_to_digits(q: &BigRational, digits: u32) -> BigRational {
    let scale = pow10(digits);
    let scaled = q * BigRational::from_integer(scale.clone());
    BigRational::new(round_half_away(&scaled), scale)
}

fn round_half_away(q: &BigRational) -> BigInt {
    if q.is_negative() {
        return -round_half_away(&-q);
    }
    let (num, den) = (q.numer(), q.denom());
    let twice: BigInt = num * 2 + den;
    twice.div_floor(&(den * 2))
}

/// `e^x` to about [`WORKING_DIGITS`] significant digits.
///
/// Negative arguments are evaluated as `1/e^{|x|}` so the series never
/// cancels. Terms are rounded to a fixed grid finer than the working
/// precision to keep the rationals small.
pub fn exp(x: &BigRational) -> BigRational {
    if x.is_negative() {
        return exp(&-x).recip();
    }
    let grid = WORKING_DIGITS + 20;
    let tol = BigRational::new(BigInt::one(), pow10(WORKING_DIGITS + 10));
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    let mut k = 0u64;
    loop {
        sum += &term;
        k += 1;
        term = round_to_digits(&(&term * x / BigRational::from_integer(BigInt::from(k))), grid);
        // terms are decreasing once k exceeds x
        if term.is_zero() || (BigRational::from_integer(BigInt::from(k)) > *x && term < &sum * &tol) {
            sum += &term;
            return sum;
        }
    }
}

/// Decimal scientific notation with `sig` significant digits, e.g.
/// `-1.2345e-7`.
pub fn to_decimal(q: &BigRational, sig: u32) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let neg = q.is_negative();
    let a = q.abs();
    // estimate floor(log10 |q|) from bit lengths, then correct
    let bits = a.numer().bits() as i64 - a.denom().bits() as i64;
    let mut e = (bits as f64 * std::f64::consts::LOG10_2).floor() as i64;
    let pow = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(pow10(k as u32))
        } else {
            BigRational::from_integer(pow10((-k) as u32)).recip()
        }
    };
    while a >= pow(e + 1) {
        e += 1;
    }
    while a < pow(e) {
        e -= 1;
    }
    let shift = sig as i64 - 1 - e;
    let mut digits = round_half_away(&(&a * pow(shift)));
    if digits >= pow10(sig) {
        digits /= 10;
        e += 1;
    }
    let s = digits.to_string();
    let (head, tail) = s.split_at(1);
    format!("{}{}.{}e{}", if neg { "-" } else { "" }, head, tail, e)
}

/// Nearest `f64`, via a 40-digit decimal rendering.
pub fn to_f64(q: &BigRational) -> f64 {
    to_decimal(q, 40).parse().expect("valid decimal")
}

/// `|a − b| / |b|` evaluated exactly and rounded to `f64`.
pub fn relative_difference(a: &BigRational, b: &BigRational) -> f64 {
    if b.is_zero() {
        return (a - b).abs().to_f64().unwrap_or(f64::INFINITY);
    }
    to_f64(&((a - b).abs() / b.abs()))
}
