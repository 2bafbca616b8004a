//! Exact dyadic rationals used as the reference value domain.
//!
//! Every value a [`FpValue`](super::FpValue) or [`FixedWord`](super::FixedWord)
//! can hold is a dyadic rational `mant * 2^exp`, so a big-integer mantissa
//! with a binary exponent is lossless for all of them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding applied when an [`ExactReal`] is snapped onto a power-of-two grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridRounding {
    /// Toward negative infinity.
    Floor,
    /// Toward zero.
    TowardZero,
    /// Nearest, ties to even.
    NearestEven,
}

/// An exact value `mant * 2^exp`. Kept normalized (odd mantissa, or zero with
/// exponent zero) so that structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactReal {
    mant: BigInt,
    exp: i64,
}

impl ExactReal {
    pub fn zero() -> Self {
        ExactReal {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Self::new(BigInt::from(v), 0)
    }

    /// `mant * 2^exp`.
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut r = ExactReal { mant, exp };
        r.normalize();
        r
    }

    pub fn from_i128_scaled(mant: i128, exp: i64) -> Self {
        Self::new(BigInt::from(mant), exp)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Self::new(BigInt::one(), k)
    }

    /// Exact conversion of a finite binary64 value.
    ///
    /// # Panics
    /// Panics on NaN or infinity.
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "ExactReal::from_f64 on non-finite value");
        if v == 0.0 {
            return Self::zero();
        }
        let bits = v.to_bits();
        let sign = bits >> 63 != 0;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        let m = BigInt::from(m);
        Self::new(if sign { -m } else { m }, e)
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    pub fn abs(&self) -> Self {
        ExactReal {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    /// `floor(log2(|self|))`, or `None` for zero.
    pub fn ilog2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 - 1 + self.exp)
        }
    }

    /// Multiply by `2^k` (exact).
    pub fn scale2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        ExactReal {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    /// Integer `q` such that `q * 2^k` is `self` snapped to the grid of
    /// spacing `2^k` with the given rounding.
    pub fn to_grid(&self, k: i64, rounding: GridRounding) -> BigInt {
        if self.exp >= k {
            return &self.mant << ((self.exp - k) as usize);
        }
        let shift = (k - self.exp) as usize;
        let den = BigInt::one() << shift;
        let (q, r) = self.mant.div_mod_floor(&den);
        match rounding {
            GridRounding::Floor => q,
            GridRounding::TowardZero => {
                if self.is_negative() && !r.is_zero() {
                    q + 1
                } else {
                    q
                }
            }
            GridRounding::NearestEven => {
                let twice = &r << 1usize;
                match twice.cmp(&den) {
                    Ordering::Less => q,
                    Ordering::Greater => q + 1,
                    Ordering::Equal => {
                        if q.is_odd() {
                            q + 1
                        } else {
                            q
                        }
                    }
                }
            }
        }
    }

    /// Square root truncated to `frac_bits` fractional bits. `self` must be
    /// non-negative.
    pub fn sqrt_floor(&self, frac_bits: u32) -> Self {
        assert!(!self.is_negative(), "square root of a negative value");
        if self.is_zero() {
            return Self::zero();
        }
        // floor(sqrt(v * 2^(2f))) * 2^-f, with v * 2^(2f) taken at floor.
        let scaled = self.to_grid(-2 * frac_bits as i64, GridRounding::Floor);
        Self::new(scaled.sqrt(), -(frac_bits as i64))
    }

    /// Exact quotient truncated to `frac_bits` fractional bits.
    pub fn div_floor(&self, rhs: &ExactReal, frac_bits: u32) -> Self {
        assert!(!rhs.is_zero(), "division by zero");
        // self / rhs = (ma / mb) * 2^(ea - eb)
        let shift = frac_bits as i64 + self.exp - rhs.exp;
        let num = if shift >= 0 {
            &self.mant << (shift as usize)
        } else {
            self.mant.div_floor(&(BigInt::one() << ((-shift) as usize)))
        };
        Self::new(num.div_floor(&rhs.mant), -(frac_bits as i64))
    }

    /// Nearest binary64 (ties to even), saturating to infinity on overflow.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        // Keep 53 significant bits with round-to-nearest-even, then scale.
        let keep = 53i64;
        let lsb_exp = self.exp + bits - keep;
        let lsb_exp = lsb_exp.max(-1074);
        let q = self.to_grid(lsb_exp, GridRounding::NearestEven);
        let qf = q.to_f64().unwrap_or(f64::INFINITY);
        scale_f64(qf, lsb_exp)
    }
}

fn scale_f64(mut v: f64, mut k: i64) -> f64 {
    // Stepwise to avoid intermediate overflow/underflow of 2^k itself.
    while k > 1000 {
        v *= 2f64.powi(1000);
        k -= 1000;
    }
    while k < -1000 {
        v *= 2f64.powi(-1000);
        k += 1000;
    }
    v * 2f64.powi(k as i32)
}

impl fmt::Debug for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{} (~{:e})", self.mant, self.exp, self.to_f64())
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

impl PartialOrd for ExactReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactReal {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).mant.sign().cmp(&Sign::NoSign)
    }
}

fn align(a: &ExactReal, b: &ExactReal) -> (BigInt, BigInt, i64) {
    let e = a.exp.min(b.exp);
    (&a.mant << ((a.exp - e) as usize), &b.mant << ((b.exp - e) as usize), e)
}

impl<'a> Add<&'a ExactReal> for &'a ExactReal {
    type Output = ExactReal;
    fn add(self, rhs: &ExactReal) -> ExactReal {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (a, b, e) = align(self, rhs);
        ExactReal::new(a + b, e)
    }
}

impl<'a> Sub<&'a ExactReal> for &'a ExactReal {
    type Output = ExactReal;
    fn sub(self, rhs: &ExactReal) -> ExactReal {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a ExactReal> for &'a ExactReal {
    type Output = ExactReal;
    fn mul(self, rhs: &ExactReal) -> ExactReal {
        ExactReal::new(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }
}

impl Neg for &ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        ExactReal {
            mant: -&self.mant,
            exp: self.exp,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ExactReal> for ExactReal {
            type Output = ExactReal;
            fn $m(self, rhs: ExactReal) -> ExactReal {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        -&self
    }
}
