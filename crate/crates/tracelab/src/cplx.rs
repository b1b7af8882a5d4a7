//! Extended-precision complex arithmetic with principal branches.
//!
//! [`Cplx`] pairs two [`Real`] values. All multivalued functions (logarithm,
//! square root, powers) use the principal branch, with the argument taken in
//! `(-π, π]`. This matches the branch conventions of the associated Legendre
//! function of the first kind for arguments off the cut `(-∞, 1]`, which the
//! orbital integral kernels rely on.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::prec::{Ctx, Real};

/// Complex number with extended-precision components.
#[derive(Clone)]
pub struct Cplx {
    pub re: Real,
    pub im: Real,
}

impl Cplx {
    pub fn new(re: Real, im: Real) -> Self {
        Cplx { re, im }
    }

    /// Embeds a real value with zero imaginary part.
    pub fn from_real(re: Real) -> Self {
        let im = zero_of(&re);
        Cplx { re, im }
    }

    /// Integer constant under a context.
    pub fn from_i64(ctx: &Ctx, n: i64) -> Self {
        Cplx::new(ctx.real(n), ctx.real(0))
    }

    /// The imaginary unit under a context.
    pub fn i(ctx: &Ctx) -> Self {
        Cplx::new(ctx.real(0), ctx.real(1))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Cplx {
        Cplx::new(self.re.clone(), -&self.im)
    }

    /// Multiplication by i (quarter turn).
    pub fn mul_i(&self) -> Cplx {
        Cplx::new(-&self.im, self.re.clone())
    }

    pub fn norm_sqr(&self) -> Real {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    /// Principal argument in `(-π, π]`.
    pub fn arg(&self) -> Real {
        Real::atan2(&self.im, &self.re)
    }

    pub fn scale(&self, s: &Real) -> Cplx {
        Cplx::new(&self.re * s, &self.im * s)
    }

    pub fn mul2exp(&self, j: i32) -> Cplx {
        Cplx::new(self.re.mul2exp(j), self.im.mul2exp(j))
    }

    pub fn recip(&self) -> Cplx {
        let n = self.norm_sqr();
        Cplx::new(&self.re / &n, -&(&self.im / &n))
    }

    pub fn exp(&self) -> Cplx {
        let m = self.re.exp();
        Cplx::new(&m * &self.im.cos(), &m * &self.im.sin())
    }

    /// Principal logarithm: `ln|z| + i·arg z`.
    pub fn ln(&self) -> Cplx {
        debug_assert!(!self.is_zero(), "log of zero");
        // ln|z| via the larger component to avoid premature overflow is not
        // needed at extended precision; the direct form is stable here.
        Cplx::new(self.norm_sqr().ln().mul2exp(-1), self.arg())
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Cplx {
        if self.im.is_zero() {
            if self.re.is_negative() {
                let r = self.re.abs().sqrt();
                let zero = zero_of(&r);
                return Cplx::new(zero, r);
            }
            let r = self.re.sqrt();
            let zero = zero_of(&r);
            return Cplx::new(r, zero);
        }
        let r = self.abs();
        // Stable half-angle form. re(t) = sqrt((|z|+re)/2) > 0 since im != 0.
        let t = (&(&r + &self.re) / &two_of(&r)).sqrt();
        let u = &self.im / &(&t + &t);
        Cplx::new(t, u)
    }

    /// Principal power with a complex exponent: `exp(w·ln z)`.
    pub fn powc(&self, w: &Cplx) -> Cplx {
        (&self.ln() * w).exp()
    }

    /// Principal power with a real exponent.
    pub fn powr(&self, y: &Real) -> Cplx {
        let l = self.ln();
        Cplx::new(&l.re * y, &l.im * y).exp()
    }

    /// Integer power by squaring (exact exponent arithmetic).
    pub fn powi(&self, n: i64) -> Cplx {
        let zero = zero_of(&self.re);
        let one = Cplx::new(one_of(&self.re), zero);
        if n == 0 {
            return one;
        }
        let base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = one;
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

    pub fn to_f64s(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

fn one_of(model: &Real) -> Real {
    Real(astro_float::BigFloat::from_i64(1, model.bits()))
}

fn zero_of(model: &Real) -> Real {
    Real(astro_float::BigFloat::from_i64(0, model.bits()))
}

fn two_of(model: &Real) -> Real {
    one_of(model).mul2exp(1)
}

impl fmt::Debug for Cplx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cplx({:e}, {:e})", self.re.to_f64(), self.im.to_f64())
    }
}

impl Neg for &Cplx {
    type Output = Cplx;
    fn neg(self) -> Cplx {
        Cplx::new(-&self.re, -&self.im)
    }
}

impl Add<&Cplx> for &Cplx {
    type Output = Cplx;
    fn add(self, rhs: &Cplx) -> Cplx {
        Cplx::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&Cplx> for &Cplx {
    type Output = Cplx;
    fn sub(self, rhs: &Cplx) -> Cplx {
        Cplx::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&Cplx> for &Cplx {
    type Output = Cplx;
    fn mul(self, rhs: &Cplx) -> Cplx {
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        Cplx::new(re, im)
    }
}

impl Div<&Cplx> for &Cplx {
    type Output = Cplx;
    fn div(self, rhs: &Cplx) -> Cplx {
        let n = rhs.norm_sqr();
        let re = &(&(&self.re * &rhs.re) + &(&self.im * &rhs.im)) / &n;
        let im = &(&(&self.im * &rhs.re) - &(&self.re * &rhs.im)) / &n;
        Cplx::new(re, im)
    }
}
