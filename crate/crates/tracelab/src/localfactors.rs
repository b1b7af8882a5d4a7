//! Finite-place factors of the trace formula.
//!
//! For a prime q, the local zeta factor is ζ_q(s) = (1 − q^{−s})^{−1} and the
//! local Dirichlet factor is L_q(s, χ) = (1 − χ(q) q^{−s})^{−1} with
//! χ(q) ∈ {0, ±1}. Built on these are
//!
//! - [`SpectralData`]: a form's archimedean parameter ν_∞ together with the
//!   finite-place parameters ν_p on 𝔛_p = ℂ/(4πi/log p)ℤ, tied to Hecke
//!   eigenvalues by λ(p) = p^{ν_p/2} + p^{−ν_p/2};
//! - [`b_factor`]: the conductor product
//!   𝐁^S(ν;Δ) = ∏_{p|f, p∉S} { ζ_p(−ν_p)/L_p((−ν_p+1)/2, χ_D) · |f|_p^{(ν_p−1)/2}
//!   + (ν_p ↦ −ν_p) } for Δ = D f²;
//! - [`s_q`]: the resolvent factor 𝒮_q^{Δ,(z)}(s;a), one closed form on
//!   |a|_q ≤ 1 and another on |a|_q > 1;
//! - [`mvt_l2_closed`] / [`mvt_l2_contour`]: the two sides of the residue
//!   identity that converts 𝒮_q against the Chebyshev weight
//!   U_m(½(q^{s/2}+q^{−s/2})) into eigenvalue data, evaluated once as the
//!   printed right-hand side and once as a numeric contour integral against
//!   dμ_q(s) = ½(log q)(q^{(1+s)/2} − q^{(1−s)/2}) ds over the segment
//!   Re s = c, |Im s| ≤ 2π/log q.
//!
//! Everything here is a pure function of its arguments; no interior state.

use std::collections::BTreeMap;

use crate::arith::{factor, kronecker, split_discriminant};
use crate::cplx::Cplx;
use crate::err::{Error, Result};
use crate::prec::{PrecisionContext, Real};

/// q^e for complex e, through the principal logarithm of the positive base.
fn q_pow(ctx: &PrecisionContext, q: i64, e: &Cplx) -> Cplx {
    e.scale(&ctx.real(q).ln()).exp()
}

/// Local zeta factor ζ_q(s) = (1 − q^{−s})^{−1}. Signals the pole when
/// q^{−s} is exactly 1; nearby arguments are evaluated as they stand.
pub fn local_zeta(ctx: &PrecisionContext, q: i64, s: &Cplx) -> Result<Cplx> {
    let denom = &Cplx::from_i64(ctx, 1) - &q_pow(ctx, q, &(-s));
    if denom.is_zero() {
        return Err(Error::pole(format!("local zeta factor at q = {q} has a pole here")));
    }
    Ok(denom.recip())
}

/// Local Dirichlet factor L_q(s, χ) = (1 − χ(q) q^{−s})^{−1} for a real
/// character value χ(q) ∈ {0, ±1}; the factor is 1 at ramified q.
pub fn local_l(ctx: &PrecisionContext, q: i64, s: &Cplx, chi_q: i32) -> Result<Cplx> {
    match chi_q {
        0 => Ok(Cplx::from_i64(ctx, 1)),
        1 => local_zeta(ctx, q, s),
        -1 => {
            let denom = &Cplx::from_i64(ctx, 1) + &q_pow(ctx, q, &(-s));
            Ok(denom.recip())
        }
        _ => Err(Error::domain(format!("character value {chi_q} is not in {{0, ±1}}"))),
    }
}

/// 1/L_q(s, χ) = 1 − χ(q) q^{−s}, the entire reciprocal. Formulas with an
/// L-factor in the denominator multiply by this instead of dividing by
/// [`local_l`]: at a pole of L the product has a zero, not a singularity.
fn l_recip(ctx: &PrecisionContext, q: i64, s: &Cplx, chi_q: i32) -> Cplx {
    let one = Cplx::from_i64(ctx, 1);
    match chi_q {
        0 => one,
        1 => &one - &q_pow(ctx, q, &(-s)),
        _ => &one + &q_pow(ctx, q, &(-s)),
    }
}

fn require_prime(q: i64) -> Result<u64> {
    let qa = u64::try_from(q).ok().filter(|&v| v >= 2);
    match qa {
        Some(v) if factor(v) == vec![(v, 1)] => Ok(v),
        _ => Err(Error::domain(format!("{q} is not a prime"))),
    }
}

// ---------------------------------------------------------------------------
// Spectral data.
// ---------------------------------------------------------------------------

/// The spectral parameter of an automorphic form: ν_∞ at the archimedean
/// place and, for each stored prime p, the pair (λ(p), ν_p) related by
/// λ(p) = p^{ν_p/2} + p^{−ν_p/2}. Each ν_p lives on 𝔛_p = ℂ/(4πi/log p)ℤ
/// and is determined only up to sign; every consumer in this module is
/// invariant under both ambiguities.
#[derive(Clone, Debug)]
pub struct SpectralData {
    nu_infty: Cplx,
    lambda_p: BTreeMap<i64, Real>,
    nu_p: BTreeMap<i64, Cplx>,
}

impl SpectralData {
    /// Data with archimedean parameter `nu_infty` and no finite places yet.
    pub fn new(nu_infty: Cplx) -> Self {
        SpectralData { nu_infty, lambda_p: BTreeMap::new(), nu_p: BTreeMap::new() }
    }

    /// The diagonal data of the Eisenstein family: ν_p = z at every listed
    /// prime and ν_∞ = z.
    pub fn eisenstein(ctx: &PrecisionContext, z: &Cplx, primes: &[i64]) -> Result<Self> {
        let mut data = SpectralData::new(z.clone());
        for &p in primes {
            data.set_nu(ctx, p, z)?;
        }
        Ok(data)
    }

    /// The archimedean spectral parameter.
    pub fn nu_infty(&self) -> &Cplx {
        &self.nu_infty
    }

    /// Store the Hecke eigenvalue λ(p) and derive ν_p from
    /// λ(p) = p^{ν_p/2} + p^{−ν_p/2}: with x = (λ + √(λ²−4))/2, the branch
    /// ν_p = 2 Ln x / log p is purely imaginary for |λ| < 2 and real for
    /// λ ≥ 2.
    pub fn set_hecke(&mut self, ctx: &PrecisionContext, p: i64, lambda: &Real) -> Result<()> {
        require_prime(p)?;
        let disc = &(lambda * lambda) - &ctx.real(4);
        let root = if disc.is_negative() {
            Cplx::new(ctx.real(0), (-&disc).sqrt())
        } else {
            Cplx::new(disc.sqrt(), ctx.real(0))
        };
        let x = (&Cplx::from_real(lambda.clone()) + &root).mul2exp(-1);
        let nu = x.ln().mul2exp(1).scale(&ctx.real(p).ln().recip());
        self.lambda_p.insert(p, lambda.clone());
        self.nu_p.insert(p, nu);
        Ok(())
    }

    /// Store ν_p directly and derive λ(p) = p^{ν_p/2} + p^{−ν_p/2}. The
    /// eigenvalue is recorded only when it is real (real or purely imaginary
    /// ν_p); for genuinely complex ν_p only the parameter itself is kept.
    pub fn set_nu(&mut self, ctx: &PrecisionContext, p: i64, nu: &Cplx) -> Result<()> {
        require_prime(p)?;
        let half = q_pow(ctx, p, &nu.mul2exp(-1));
        let lambda = &half + &half.recip();
        if nu.im.is_zero() || nu.re.is_zero() {
            self.lambda_p.insert(p, lambda.re);
        } else {
            self.lambda_p.remove(&p);
        }
        self.nu_p.insert(p, nu.clone());
        Ok(())
    }

    /// The stored Hecke eigenvalue at p, if one is recorded.
    pub fn lambda(&self, p: i64) -> Option<&Real> {
        self.lambda_p.get(&p)
    }

    /// The stored spectral parameter at p.
    pub fn nu(&self, p: i64) -> Option<&Cplx> {
        self.nu_p.get(&p)
    }

    /// The primes with stored finite-place data, ascending.
    pub fn primes(&self) -> Vec<i64> {
        self.nu_p.keys().copied().collect()
    }
}

// ---------------------------------------------------------------------------
// The conductor product 𝐁^S(ν;Δ).
// ---------------------------------------------------------------------------

/// One local factor of 𝐁: ζ_p(−ν)/L_p((−ν+1)/2, χ_D) · p^{−e(ν−1)/2} plus the
/// same with ν ↦ −ν, where e = ord_p(f).
fn b_local(
    ctx: &PrecisionContext,
    p: i64,
    e: u32,
    nu: &Cplx,
    chi_p: i32,
) -> Result<Cplx> {
    let one = Cplx::from_i64(ctx, 1);
    let mut acc = Cplx::from_i64(ctx, 0);
    for sign in [1i64, -1] {
        let nu_s = if sign == 1 { nu.clone() } else { -nu };
        let zeta = local_zeta(ctx, p, &(-&nu_s))?;
        let lr = l_recip(ctx, p, &(&one - &nu_s).mul2exp(-1), chi_p);
        let f_pow = q_pow(
            ctx,
            p,
            &(&nu_s - &one).mul2exp(-1).scale(&-&ctx.real(i64::from(e))),
        );
        acc = &acc + &(&(&zeta * &lr) * &f_pow);
    }
    Ok(acc)
}

/// 𝐁^S(ν;Δ) = ∏_{p|f, p∉S} { ζ_p(−ν_p)/L_p((−ν_p+1)/2, χ_D)·|f|_p^{(ν_p−1)/2}
///   + ζ_p(ν_p)/L_p((ν_p+1)/2, χ_D)·|f|_p^{(−ν_p−1)/2} } for Δ = D f².
///
/// The empty product (f = 1, or every p|f excluded) is 1. Perfect-square Δ
/// are allowed: the split part is D = 1 and χ_D is the trivial character.
pub fn b_factor_excluding(
    ctx: &PrecisionContext,
    spec: &SpectralData,
    delta: i64,
    exclude: &[i64],
) -> Result<Cplx> {
    let (d, f) = split_discriminant(delta)?;
    let mut acc = Cplx::from_i64(ctx, 1);
    for (p, e) in factor(f) {
        let p = p as i64;
        if exclude.contains(&p) {
            continue;
        }
        let nu = spec.nu(p).ok_or_else(|| {
            Error::Input(format!("no spectral parameter stored at p = {p} (needed for Δ = {delta})"))
        })?;
        acc = &acc * &b_local(ctx, p, e, nu, kronecker(d, p))?;
    }
    Ok(acc)
}

/// 𝐁(ν;Δ) = 𝐁^∅(ν;Δ), the full conductor product.
pub fn b_factor(ctx: &PrecisionContext, spec: &SpectralData, delta: i64) -> Result<Cplx> {
    b_factor_excluding(ctx, spec, delta, &[])
}

// ---------------------------------------------------------------------------
// The resolvent factor 𝒮_q.
// ---------------------------------------------------------------------------

/// 𝒮_q^{Δ,(z)}(s;a) with ord_q(a) given as an integer. On |a|_q ≤ 1
/// (ord ≥ 0):
///
/// −q^{−(s+1)/2} ζ_q(s+(z+1)/2) ζ_q(s+(−z+1)/2) / L_q(s+1, χ_D) · |a|_q^{(s+1)/2},
///
/// and on |a|_q > 1 (ord < 0):
///
/// −q^{−(s+1)/2} { ζ_q(−z) ζ_q(s+(z+1)/2) / L_q((−z+1)/2, χ_D) · |a|_q^{(−z+1)/4}
///               + ζ_q(z) ζ_q(s+(−z+1)/2) / L_q((z+1)/2, χ_D) · |a|_q^{(z+1)/4} },
///
/// where χ_D comes from the fundamental part of Δ (trivial for square Δ).
/// Requires Re s > (|Re z| − 1)/2, the common convergence strip.
pub fn s_q(
    ctx: &PrecisionContext,
    q: i64,
    delta: i64,
    z: &Cplx,
    s: &Cplx,
    ord_a: i64,
) -> Result<Cplx> {
    require_prime(q)?;
    let (d, _) = split_discriminant(delta)?;
    let chi_q = kronecker(d, q);
    if s.re.to_f64() <= (z.re.to_f64().abs() - 1.0) / 2.0 {
        return Err(Error::domain(format!(
            "s_q needs Re s > (|Re z| - 1)/2; got Re s = {}, Re z = {}",
            s.re.to_f64(),
            z.re.to_f64()
        )));
    }
    let one = Cplx::from_i64(ctx, 1);
    let half_up = &(s + (&(z + &one).mul2exp(-1)));
    let half_dn = &(s + (&(&one - z).mul2exp(-1)));
    let s1_half = (s + &one).mul2exp(-1);
    if ord_a >= 0 {
        // q^{-(s+1)/2} and |a|_q^{(s+1)/2} = q^{-ord·(s+1)/2} combine.
        let front = q_pow(ctx, q, &(-&s1_half.scale(&ctx.real(1 + ord_a))));
        let zz = &local_zeta(ctx, q, half_up)? * &local_zeta(ctx, q, half_dn)?;
        let lr = l_recip(ctx, q, &(s + &one), chi_q);
        Ok(-&(&(&zz * &lr) * &front))
    } else {
        let front = q_pow(ctx, q, &(-&s1_half));
        let mut acc = Cplx::from_i64(ctx, 0);
        for sign in [1i64, -1] {
            // sign = +1 carries ζ_q(−z)…|a|^{(−z+1)/4}; sign = −1 the swap.
            let zs = if sign == 1 { z.clone() } else { -z };
            let zeta_z = local_zeta(ctx, q, &(-&zs))?;
            let zeta_s = if sign == 1 {
                local_zeta(ctx, q, half_up)?
            } else {
                local_zeta(ctx, q, half_dn)?
            };
            let lr = l_recip(ctx, q, &(&one - &zs).mul2exp(-1), chi_q);
            let a_pow = q_pow(
                ctx,
                q,
                &(&one - &zs).mul2exp(-2).scale(&-&ctx.real(ord_a)),
            );
            acc = &acc + &(&(&(&zeta_z * &zeta_s) * &lr) * &a_pow);
        }
        Ok(-&(&acc * &front))
    }
}

// ---------------------------------------------------------------------------
// The residue identity: closed form and contour form.
// ---------------------------------------------------------------------------

/// The brace common to both branches of the residue identity:
/// q^{−m/2} { ζ_q(−z) q^{j(−z+1)/4} / L_q((−z+1)/2, χ_D)
///          + ζ_q(z)  q^{j(z+1)/4}  / L_q((z+1)/2,  χ_D) }, j = m − ord_a.
fn mvt_l2_brace(
    ctx: &PrecisionContext,
    q: i64,
    z: &Cplx,
    chi_q: i32,
    m: u32,
    ord_a: i64,
) -> Result<Cplx> {
    let one = Cplx::from_i64(ctx, 1);
    let j = ctx.real(i64::from(m) - ord_a);
    let mut acc = Cplx::from_i64(ctx, 0);
    for sign in [1i64, -1] {
        let zs = if sign == 1 { z.clone() } else { -z };
        let zeta = local_zeta(ctx, q, &(-&zs))?;
        let lr = l_recip(ctx, q, &(&one - &zs).mul2exp(-1), chi_q);
        let j_pow = q_pow(ctx, q, &(&one - &zs).mul2exp(-2).scale(&j));
        acc = &acc + &(&(&zeta * &lr) * &j_pow);
    }
    let front = q_pow(ctx, q, &Cplx::from_real(ctx.real_ratio(-i64::from(m), 2)));
    Ok(&acc * &front)
}

/// The closed right-hand side of the residue identity for the Chebyshev
/// moment of 𝒮_q^{Δ,(z)}(·; a) of order m:
///
/// - ord_q(a) ≥ 0: zero unless m − ord_q(a) is a nonnegative even integer;
/// - ord_q(a) < 0: zero unless m is even;
///
/// and in the nonzero cases the common brace with j = m − ord_q(a).
pub fn mvt_l2_closed(
    ctx: &PrecisionContext,
    q: i64,
    z: &Cplx,
    delta: i64,
    m: u32,
    ord_a: i64,
) -> Result<Cplx> {
    require_prime(q)?;
    let (d, _) = split_discriminant(delta)?;
    let vanishes = if ord_a >= 0 {
        let j = i64::from(m) - ord_a;
        j < 0 || j % 2 != 0
    } else {
        !m.is_multiple_of(2)
    };
    if vanishes {
        return Ok(Cplx::from_i64(ctx, 0));
    }
    mvt_l2_brace(ctx, q, z, kronecker(d, q), m, ord_a)
}

/// A vertical contour L_q(c): s = c + iy, |y| ≤ 2π/log q — one full period
/// of every q^{s/2}-periodic integrand.
#[derive(Clone, Debug)]
pub struct ContourSpec {
    q: i64,
    c: Real,
    nodes: usize,
}

impl ContourSpec {
    /// A contour for the prime q at abscissa c, with the starting trapezoid
    /// resolution.
    pub fn new(ctx: &PrecisionContext, q: i64, c: &Real) -> Result<Self> {
        let _ = ctx;
        require_prime(q)?;
        Ok(ContourSpec { q, c: c.clone(), nodes: 32 })
    }

    /// The default abscissa c = |Re z| + 2 for integrands built from
    /// 𝒮_q^{Δ,(z)}: every pole (Re s = ±Re z/2 − 1/2, Re s = (±Re z − 1)/2,
    /// Re s = −1) then lies strictly left of the contour.
    pub fn for_parameter(ctx: &PrecisionContext, q: i64, z: &Cplx) -> Result<Self> {
        let c = &z.re.abs() + &ctx.real(2);
        ContourSpec::new(ctx, q, &c)
    }

    /// Whether the abscissa clears every pole of the 𝒮_q-type integrand for
    /// the parameter z.
    pub fn clears_poles(&self, z: &Cplx) -> bool {
        let c = self.c.to_f64();
        let zr = z.re.to_f64().abs();
        c > (zr - 1.0) / 2.0 && c > -1.0
    }

    /// The prime this contour belongs to.
    pub fn q(&self) -> i64 {
        self.q
    }

    /// The abscissa Re s = c.
    pub fn abscissa(&self) -> &Real {
        &self.c
    }
}

/// (−1/2πi) ∫_{L_q(c)} f(s) dμ_q(s) with the holomorphic 1-form
/// dμ_q(s) = ½(log q)(q^{(1+s)/2} − q^{(1−s)/2}) ds, by the trapezoid rule
/// on the full period (spectrally accurate for the periodic integrand),
/// doubling the node count until two refinements agree to the quadrature
/// tolerance. Returns the value and an error estimate.
pub fn contour_integral<F>(ctx: &PrecisionContext, spec: &ContourSpec, f: F) -> Result<(Cplx, Real)>
where
    F: Fn(&Cplx) -> Result<Cplx>,
{
    let ln_q = ctx.real(spec.q).ln();
    let period = &ctx.pi().mul2exp(2) / &ln_q;
    let y_min = -&period.mul2exp(-1);
    let one = Cplx::from_i64(ctx, 1);
    let weight_scale = ln_q.mul2exp(-1);
    let eval = |y: &Real| -> Result<Cplx> {
        let s = Cplx::new(spec.c.clone(), y.clone());
        let up = q_pow(ctx, spec.q, &(&one + &s).mul2exp(-1));
        let dn = q_pow(ctx, spec.q, &(&one - &s).mul2exp(-1));
        let w = (&up - &dn).scale(&weight_scale);
        Ok(&f(&s)? * &w)
    };

    let mut n = spec.nodes.max(2);
    let mut h = &period / &ctx.real(n as i64);
    let mut sum = Cplx::from_i64(ctx, 0);
    for j in 0..n {
        let y = &y_min + &(&h * &ctx.real(j as i64));
        sum = &sum + &eval(&y)?;
    }
    // T_n = −h/(2π) Σ; refine by adding midpoints until stable.
    let norm = |sum: &Cplx, h: &Real| -> Cplx { -&sum.scale(&(h / &ctx.pi().mul2exp(1))) };
    let mut value = norm(&sum, &h);
    let max_nodes = 1usize << 14;
    while n < max_nodes {
        let half = h.mul2exp(-1);
        for j in 0..n {
            let y = &(&y_min + &half) + &(&h * &ctx.real(j as i64));
            sum = &sum + &eval(&y)?;
        }
        n *= 2;
        h = half;
        let refined = norm(&sum, &h);
        let diff = (&refined - &value).abs();
        value = refined;
        let scale = ctx.real(1).max(&value.abs());
        if diff <= &ctx.quad_tol_real() * &scale {
            let est = &diff + &(&value.abs() * &ctx.goal()).mul2exp(3);
            return Ok((value, est));
        }
    }
    Err(Error::no_convergence(format!(
        "contour integral at q = {} did not stabilize within {max_nodes} nodes",
        spec.q
    )))
}

/// The left-hand side of the residue identity, evaluated numerically:
/// (−1/2πi) ∫_{L_q(c)} 𝒮_q^{Δ,(z)}(s; a) U_m(½(q^{s/2}+q^{−s/2})) dμ_q(s).
/// The contour must clear the integrand's poles; agreement with
/// [`mvt_l2_closed`] is the module's central two-route check.
pub fn mvt_l2_contour(
    ctx: &PrecisionContext,
    q: i64,
    z: &Cplx,
    delta: i64,
    m: u32,
    ord_a: i64,
    c: &Real,
) -> Result<(Cplx, Real)> {
    let spec = ContourSpec::new(ctx, q, c)?;
    if !spec.clears_poles(z) {
        return Err(Error::domain(format!(
            "contour abscissa c = {} does not clear the integrand poles for Re z = {}",
            c.to_f64(),
            z.re.to_f64()
        )));
    }
    contour_integral(ctx, &spec, |s| {
        let x = {
            let half = q_pow(ctx, q, &s.mul2exp(-1));
            (&half + &half.recip()).mul2exp(-1)
        };
        let u = crate::arith::chebyshev_u(ctx, m, &x);
        Ok(&s_q(ctx, q, delta, z, s, ord_a)? * &u)
    })
}
