//! Precision context and extended-precision real arithmetic.
//!
//! Every numerical kernel runs under a [`PrecisionContext`] fixing the working
//! mantissa length in bits, derived from a requested decimal digit count plus
//! guard bits, together with a target tolerance for quadrature and series
//! truncation. Arithmetic on [`Real`] propagates the larger operand precision,
//! so values seeded from a context keep its precision through a computation.
//!
//! Transcendental functions of the backing `BigFloat` type require a constants
//! cache (for π, ln 2, and friends); a per-thread cache is shared by all
//! operations on the thread.

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::err::{Error, Result};

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

pub(crate) fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cell| f(&mut cell.borrow_mut()))
}

/// Working precision shared by a family of computations.
///
/// `digits` is the requested decimal precision (at least 30). The binary
/// mantissa length is `ceil(digits·log₂10) + 64` guard bits. `quad_tol` is the
/// absolute/relative target for adaptive quadrature and series tails.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrecisionContext {
    digits: usize,
    bits: usize,
    quad_tol: f64,
}

pub(crate) type Ctx = PrecisionContext;

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext::new(60, 1e-40).expect("default context is valid")
    }
}

impl PrecisionContext {
    /// Creates a context with `digits` decimal digits of working precision and
    /// the given quadrature tolerance. Fails if `digits < 30` or the tolerance
    /// is not a positive finite number.
    pub fn new(digits: usize, quad_tol: f64) -> Result<Self> {
        if digits < 30 {
            return Err(Error::PrecisionTooLow(digits));
        }
        if !(quad_tol > 0.0) || !quad_tol.is_finite() {
            return Err(Error::InvalidTolerance(quad_tol));
        }
        // log2(10) = 3.3219...; round up and add guard bits.
        let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 64;
        Ok(PrecisionContext { digits, bits, quad_tol })
    }

    /// Context with the given digit count and the tolerance `10^(-digits+10)`,
    /// which keeps quadrature targets safely inside the working precision.
    pub fn with_digits(digits: usize) -> Result<Self> {
        let tol = 10f64.powi(-((digits.saturating_sub(10)).min(300) as i32));
        PrecisionContext::new(digits, tol)
    }

    /// Requested decimal digits.
    pub fn digits(&self) -> usize {
        self.digits
    }

    /// Working mantissa length in bits (including guard bits).
    pub fn bits(&self) -> usize {
        self.bits
    }

    /// Quadrature / truncation tolerance.
    pub fn quad_tol(&self) -> f64 {
        self.quad_tol
    }

    /// The quadrature tolerance as a [`Real`] at working precision.
    pub fn quad_tol_real(&self) -> Real {
        self.real_from_f64(self.quad_tol)
    }

    /// Integer constant at working precision.
    pub fn real(&self, n: i64) -> Real {
        Real(BigFloat::from_i64(n, self.bits))
    }

    /// Conversion from `f64` (exact: the binary value is embedded).
    pub fn real_from_f64(&self, x: f64) -> Real {
        Real(BigFloat::from_f64(x, self.bits))
    }

    /// Exact rational `p/q` at working precision.
    pub fn real_ratio(&self, p: i64, q: i64) -> Real {
        &self.real(p) / &self.real(q)
    }

    /// Parses a decimal literal at working precision.
    pub fn parse(&self, s: &str) -> Result<Real> {
        let v = with_consts(|cc| BigFloat::parse(s, Radix::Dec, self.bits, RM, cc));
        if v.is_nan() {
            return Err(Error::Input(format!("cannot parse '{s}' as a decimal number")));
        }
        Ok(Real(v))
    }

    /// π at working precision.
    pub fn pi(&self) -> Real {
        Real(with_consts(|cc| cc.pi(self.bits, RM)))
    }

    /// One unit in the last place of the working mantissa relative to 1,
    /// i.e. `2^(1-bits)`.
    pub fn epsilon(&self) -> Real {
        let mut one = BigFloat::from_i64(1, self.bits);
        one.set_exponent(1 - (self.bits as i32) + 1);
        Real(one)
    }

    /// Complex zero-argument helper: the value `10^(-digits)` used as the
    /// certified accuracy goal of top-level verification routines.
    pub fn goal(&self) -> Real {
        self.real(10).pow_i64(-(self.digits as i64))
    }
}

/// Extended-precision real number.
///
/// Binary arithmetic operates at the larger of the two operand precisions;
/// transcendental functions keep the operand precision. Values are finite by
/// construction in this crate; infinities and NaN only arise from misuse and
/// are surfaced by debug assertions.
#[derive(Clone)]
pub struct Real(pub(crate) BigFloat);

fn prec_of(x: &BigFloat) -> usize {
    x.mantissa_max_bit_len().unwrap_or(128)
}

fn prec_max(a: &BigFloat, b: &BigFloat) -> usize {
    prec_of(a).max(prec_of(b))
}

impl Real {
    /// Mantissa length in bits.
    pub fn bits(&self) -> usize {
        prec_of(&self.0)
    }

    /// Nearest `f64` (saturating to ±∞ outside the exponent range).
    pub fn to_f64(&self) -> f64 {
        match self.0.as_raw_parts() {
            None => {
                if self.0.is_inf_pos() {
                    f64::INFINITY
                } else if self.0.is_inf_neg() {
                    f64::NEG_INFINITY
                } else {
                    f64::NAN
                }
            }
            Some((m, _n, s, e, _inexact)) => {
                if m.is_empty() || self.0.is_zero() {
                    return 0.0;
                }
                let hi = m[m.len() - 1] as f64;
                let lo = if m.len() >= 2 { m[m.len() - 2] as f64 } else { 0.0 };
                let frac = hi * 2f64.powi(-64) + lo * 2f64.powi(-128);
                // Split the exponent so intermediate scales stay representable.
                let e1 = e / 2;
                let e2 = e - e1;
                let v = frac * 2f64.powi(e1) * 2f64.powi(e2);
                if s == Sign::Neg {
                    -v
                } else {
                    v
                }
            }
        }
    }

    /// Decimal string with the full working precision.
    pub fn to_decimal(&self) -> String {
        with_consts(|cc| self.0.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive() && !self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.0.is_inf() && !self.0.is_nan()
    }

    /// Binary exponent: the value lies in `[2^(e-1), 2^e)` for nonzero `self`.
    pub fn exponent(&self) -> i32 {
        self.0.exponent().unwrap_or(0)
    }

    pub fn abs(&self) -> Real {
        Real(self.0.abs())
    }

    /// Multiplies by `2^j` exactly.
    pub fn mul2exp(&self, j: i32) -> Real {
        if self.0.is_zero() {
            return self.clone();
        }
        let mut v = self.0.clone();
        let e = v.exponent().expect("finite value");
        v.set_exponent(e + j);
        Real(v)
    }

    pub fn sqrt(&self) -> Real {
        debug_assert!(!self.0.is_negative() || self.0.is_zero(), "sqrt of negative");
        Real(self.0.sqrt(self.bits(), RM))
    }

    pub fn exp(&self) -> Real {
        Real(with_consts(|cc| self.0.exp(self.bits(), RM, cc)))
    }

    pub fn ln(&self) -> Real {
        debug_assert!(self.is_positive(), "ln of non-positive value");
        Real(with_consts(|cc| self.0.ln(self.bits(), RM, cc)))
    }

    pub fn sin(&self) -> Real {
        Real(with_consts(|cc| self.0.sin(self.bits(), RM, cc)))
    }

    pub fn cos(&self) -> Real {
        Real(with_consts(|cc| self.0.cos(self.bits(), RM, cc)))
    }

    pub fn tan(&self) -> Real {
        Real(with_consts(|cc| self.0.tan(self.bits(), RM, cc)))
    }

    pub fn atan(&self) -> Real {
        Real(with_consts(|cc| self.0.atan(self.bits(), RM, cc)))
    }

    pub fn sinh(&self) -> Real {
        Real(with_consts(|cc| self.0.sinh(self.bits(), RM, cc)))
    }

    pub fn cosh(&self) -> Real {
        Real(with_consts(|cc| self.0.cosh(self.bits(), RM, cc)))
    }

    /// Principal argument of the point `(x, y)`, in `(-π, π]`.
    pub fn atan2(y: &Real, x: &Real) -> Real {
        let p = prec_max(&y.0, &x.0);
        let pi = Real(with_consts(|cc| cc.pi(p, RM)));
        if x.is_positive() {
            (y / x).atan()
        } else if x.is_zero() {
            if y.is_zero() {
                Real(BigFloat::from_i64(0, p))
            } else if y.is_positive() {
                pi.mul2exp(-1)
            } else {
                -&pi.mul2exp(-1)
            }
        } else if y.is_negative() {
            &(y / x).atan() - &pi
        } else {
            &(y / x).atan() + &pi
        }
    }

    /// Integer power with exact exponent handling (negative exponents invert).
    pub fn pow_i64(&self, n: i64) -> Real {
        let p = self.bits();
        if n == 0 {
            return Real(BigFloat::from_i64(1, p));
        }
        let base = if n < 0 { Real(self.0.reciprocal(p, RM)) } else { self.clone() };
        let mut e = n.unsigned_abs();
        // Square-and-multiply keeps rounding error at O(log n) ulp.
        let mut acc = Real(BigFloat::from_i64(1, p));
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// Real power `self^y` for positive base.
    pub fn pow(&self, y: &Real) -> Real {
        debug_assert!(self.is_positive(), "pow of non-positive base");
        let p = prec_max(&self.0, &y.0);
        Real(with_consts(|cc| self.0.pow(&y.0, p, RM, cc)))
    }

    pub fn floor(&self) -> Real {
        Real(self.0.floor())
    }

    pub fn ceil(&self) -> Real {
        Real(self.0.ceil())
    }

    /// Nearest integer as `i64`; the value must be in range.
    pub fn round_i64(&self) -> i64 {
        self.to_f64().round() as i64
    }

    pub fn max(&self, other: &Real) -> Real {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn min(&self, other: &Real) -> Real {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Reciprocal at the operand precision.
    pub fn recip(&self) -> Real {
        Real(self.0.reciprocal(self.bits(), RM))
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({:e})", self.to_f64())
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal())
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.0.cmp(&other.0) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(self.0.clone().neg())
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(self.0.neg())
    }
}

macro_rules! real_binop {
    ($trait:ident, $method:ident, $raw:ident) => {
        impl $trait<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                let p = prec_max(&self.0, &rhs.0);
                Real(self.0.$raw(&rhs.0, p, RM))
            }
        }
        impl $trait<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl $trait<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
    };
}

real_binop!(Add, add, add);
real_binop!(Sub, sub, sub);
real_binop!(Mul, mul, mul);
real_binop!(Div, div, div);
