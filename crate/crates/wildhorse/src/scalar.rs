//! Numeric backends.
//!
//! Three modes share one trait: exact rationals ([`Rat`]), IEEE doubles and a
//! binary float with configurable precision ([`Mp`]). The affine horseshoe and
//! the slide only ever need field operations, so rationals keep all bridge
//! combinatorics exact. `exp` and `sqrt` are only used by the bump function and
//! the rectangle heights; rationals evaluate them through `f64`.

use std::cell::Cell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

pub type Rat = RBig;

pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const NAME: &'static str;
    const EXACT: bool;

    fn from_rat(r: &Rat) -> Self;
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn exp(&self) -> Self;
    fn sqrt(&self) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rat(&Rat::from(n))
    }
    fn zero() -> Self {
        Self::from_i64(0)
    }
    fn one() -> Self {
        Self::from_i64(1)
    }
    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }
    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

pub fn rat(num: i64, den: u64) -> Rat {
    RBig::from_parts(IBig::from(num), UBig::from(den))
}

/// Exact value of a finite double.
pub fn rat_from_f64(x: f64) -> Rat {
    RBig::try_from(x).expect("finite double")
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().value()
}

/// log2 |r| for rationals far outside the double range (about 1e-15 relative accuracy).
pub fn rat_log2(r: &Rat) -> f64 {
    fn ilog2(n: &UBig) -> f64 {
        let bits = n.bit_len();
        if bits <= 1000 {
            return n.to_f64().value().log2();
        }
        let shift = bits - 64;
        let top: UBig = n >> shift;
        top.to_f64().value().log2() + shift as f64
    }
    let num = r.numerator().unsigned_abs();
    if num == UBig::ZERO {
        return f64::NEG_INFINITY;
    }
    ilog2(&num) - ilog2(r.denominator())
}

/// Parses `-1.25`, `3/10`, `1e-3` or `2.5e2` exactly.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rat(n)?;
        let d = parse_rat(d)?;
        if d == Rat::ZERO {
            return None;
        }
        return Some(n / d);
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let n: IBig = all.parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = Rat::from(10);
    let r = Rat::from(n) * ten.pow(scale as isize);
    Some(if neg { -r } else { r })
}

impl Scalar for Rat {
    const NAME: &'static str = "rational";
    const EXACT: bool = true;

    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn from_f64(x: f64) -> Self {
        rat_from_f64(x)
    }
    fn to_f64(&self) -> f64 {
        rat_to_f64(self)
    }
    // Transcendental values are not rational; these go through f64.
    fn exp(&self) -> Self {
        rat_from_f64(rat_to_f64(self).exp())
    }
    fn sqrt(&self) -> Self {
        rat_from_f64(rat_to_f64(self).sqrt())
    }
    fn from_i64(n: i64) -> Self {
        Rat::from(n)
    }
}

impl Scalar for f64 {
    const NAME: &'static str = "double";
    const EXACT: bool = false;

    fn from_rat(r: &Rat) -> Self {
        rat_to_f64(r)
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
}

type Fb = FBig<HalfEven, 2>;

thread_local! {
    static MP_BITS: Cell<usize> = const { Cell::new(256) };
}

/// Current working precision (bits) for newly created [`Mp`] values on this thread.
pub fn mp_precision() -> usize {
    MP_BITS.with(|b| b.get())
}

/// Runs `f` with the [`Mp`] working precision set to `bits`, restoring it afterwards.
pub fn with_mp_precision<R>(bits: usize, f: impl FnOnce() -> R) -> R {
    struct Restore(usize);
    impl Drop for Restore {
        fn drop(&mut self) {
            MP_BITS.with(|b| b.set(self.0));
        }
    }
    let _restore = Restore(MP_BITS.with(|b| b.replace(bits.max(64))));
    f()
}

/// Binary floating point with thread-configurable precision, rounding half to even.
///
/// Constants are created at the precision active on the current thread (see
/// [`with_mp_precision`]); arithmetic keeps the larger operand precision.
#[derive(Clone)]
pub struct Mp(Fb);

impl Mp {
    fn wrap(x: Fb) -> Self {
        Mp(x)
    }

    pub fn precision(&self) -> usize {
        self.0.precision()
    }

    /// `m · 2^e` for an integer mantissa.
    pub fn from_parts(m: i64, e: isize) -> Self {
        Mp(Fb::from_parts(IBig::from(m), e).with_precision(mp_precision()).value())
    }

    /// 2^l for a real exponent, accurate to double precision in the mantissa.
    pub fn exp2(l: f64) -> Self {
        let e = l.floor();
        let frac = (l - e).exp2();
        let m = (frac * (1u64 << 52) as f64).round() as i64;
        Mp::from_parts(m, e as isize - 52)
    }

    /// log2 of |self|, for magnitudes far outside the double range.
    pub fn log2_abs(&self) -> f64 {
        let repr = self.0.repr();
        if repr.significand() == &IBig::ZERO {
            return f64::NEG_INFINITY;
        }
        let sig = repr.significand();
        let bits = sig.unsigned_abs().bit_len() as isize;
        let shift = (bits - 60).max(0);
        let top: IBig = sig.clone() >> shift as usize;
        let top: i64 = top.try_into().unwrap_or(i64::MAX);
        (top.unsigned_abs() as f64).log2() + (shift + repr.exponent()) as f64
    }
}

use dashu_int::ops::{BitTest, UnsignedAbs};

impl fmt::Debug for Mp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mp({:e})", self.to_f64())
    }
}

impl PartialEq for Mp {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for Mp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

macro_rules! mp_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Mp {
            type Output = Mp;
            fn $m(self, rhs: Mp) -> Mp {
                Mp::wrap($tr::$m(self.0, rhs.0))
            }
        }
    };
}
mp_binop!(Add, add);
mp_binop!(Sub, sub);
mp_binop!(Mul, mul);
mp_binop!(Div, div);

impl Neg for Mp {
    type Output = Mp;
    fn neg(self) -> Mp {
        Mp(-self.0)
    }
}

impl Scalar for Mp {
    const NAME: &'static str = "mpfr-like";
    const EXACT: bool = false;

    fn from_rat(r: &Rat) -> Self {
        let p = mp_precision();
        let n = Fb::from(r.numerator().clone()).with_precision(p).value();
        let d = Fb::from(IBig::from(r.denominator().clone())).with_precision(p).value();
        Mp(n / d)
    }
    fn from_f64(x: f64) -> Self {
        Mp(Fb::try_from(x).expect("finite double").with_precision(mp_precision()).value())
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }
    fn exp(&self) -> Self {
        Mp(self.0.exp())
    }
    fn sqrt(&self) -> Self {
        Mp(self.0.sqrt())
    }
    fn from_i64(n: i64) -> Self {
        Mp(Fb::from(n).with_precision(mp_precision()).value())
    }
}
