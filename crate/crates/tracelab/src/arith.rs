//! Exact integer and rational number theory.
//!
//! Discriminants Δ ≡ 0, 1 (mod 4) and their unique splitting Δ = D·f² into a
//! fundamental discriminant and conductor, Kronecker characters χ_D, divisor
//! functions d(n), σ_{−z}(n), μ(n), Chebyshev polynomials of the second kind,
//! binary quadratic form class data (reduced representatives, class numbers,
//! unit counts, fundamental totally-positive units), and the index sets
//! {t : t² − 4n = f²D} that drive the geometric side of the trace identity.
//!
//! Everything here is exact: integers, `BigInt` for Pell solutions, no floats.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cplx::Cplx;
use crate::err::{Error, Result};
use crate::prec::Ctx;

/// A nonzero discriminant Δ ≡ 0, 1 (mod 4) with its splitting Δ = D·f².
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Discriminant {
    /// The discriminant itself.
    pub delta: i64,
    /// The fundamental part D.
    pub fundamental_part: i64,
    /// The conductor f ≥ 1.
    pub conductor: u64,
}

/// An integral binary quadratic form a·x² + b·xy + c·y².
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct QuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadraticForm { a, b, c }
    }

    /// The discriminant b² − 4ac.
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// gcd(a, b, c) = 1.
    pub fn is_primitive(&self) -> bool {
        gcd_i64(gcd_i64(self.a, self.b), self.c) == 1
    }
}

/// Class data of a fundamental discriminant: reduced representatives of the
/// narrow form class group plus unit information.
#[derive(Clone, Debug)]
pub struct ClassData {
    /// The fundamental discriminant.
    pub d: i64,
    /// Pairwise inequivalent reduced representatives, one per narrow class.
    pub representatives: Vec<QuadraticForm>,
    /// Narrow class number, equal to `representatives.len()`.
    pub h: usize,
    /// Number of roots of unity in Q(√D); present only for D < 0.
    pub w: Option<u32>,
    /// Fundamental totally-positive unit (x + y√D)/2 with exact (x, y);
    /// present only for D > 0. Its norm is +1 and its value exceeds 1.
    pub eps: Option<(BigInt, BigInt)>,
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    a.unsigned_abs().gcd(&b.unsigned_abs()) as i64
}

/// Integer square root of n ≥ 0 (floor).
pub(crate) fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64 + 2;
    while x * x > n {
        x -= 1;
    }
    x
}

/// Trial-division factorization of n ≥ 1 into (prime, exponent) pairs.
pub(crate) fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |p: u64, e: u32| {
        if e > 0 {
            out.push((p, e));
        }
    };
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        push(p, e);
    }
    // 30-wheel over residues coprime to 2, 3, 5.
    let wheel = [7u64, 11, 13, 17, 19, 23, 29, 31];
    let mut base = 0u64;
    'outer: loop {
        for off in wheel {
            let p = base + off;
            if p * p > n {
                break 'outer;
            }
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            push(p, e);
        }
        base += 30;
    }
    if n > 1 {
        push(n, 1);
    }
    out
}

/// Sorted list of all positive divisors of n ≥ 1.
pub(crate) fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factor(n) {
        let prev = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(prev.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

/// Primes up to `n` inclusive, by sieve.
#[allow(dead_code)]
pub(crate) fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut is_c = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if !is_c[p] {
            out.push(p as u64);
            let mut m = p * p;
            while m <= n {
                is_c[m] = true;
                m += p;
            }
        }
    }
    out
}

/// Whether D is a fundamental discriminant: D ≡ 1 (mod 4) squarefree (D ≠ 1),
/// or D = 4m with m ≡ 2, 3 (mod 4) squarefree.
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let sqfree = |m: i64| factor(m.unsigned_abs()).iter().all(|&(_, e)| e == 1);
    if d.rem_euclid(4) == 1 {
        return sqfree(d);
    }
    if d % 4 == 0 {
        let m = d / 4;
        let r = m.rem_euclid(4);
        return (r == 2 || r == 3) && sqfree(m);
    }
    false
}

/// Splits a nonzero Δ ≡ 0, 1 (mod 4) as Δ = d·f² where d is fundamental, or
/// d = 1 when Δ is a perfect square (the split case with trivial character).
pub fn split_discriminant(delta: i64) -> Result<(i64, u64)> {
    if delta == 0 || !matches!(delta.rem_euclid(4), 0 | 1) {
        return Err(Error::domain(format!(
            "{delta} is not a nonzero discriminant (need ≡ 0,1 mod 4)"
        )));
    }
    // Largest f with f² | Δ and Δ/f² still ≡ 0,1 (mod 4), taking f maximal.
    let a = delta.unsigned_abs();
    let mut f = 1u64;
    for (p, e) in factor(a) {
        f *= p.pow(e / 2);
    }
    // Shrink f (by factors of 2) until the cofactor is a discriminant.
    let mut fcur = f;
    loop {
        let d = delta / (fcur * fcur) as i64;
        if matches!(d.rem_euclid(4), 0 | 1) && (d == 1 || is_fundamental(d)) {
            return Ok((d, fcur));
        }
        debug_assert_eq!(fcur % 2, 0, "splitting must terminate via powers of 2");
        fcur /= 2;
    }
}

/// Unique decomposition Δ = D·f² with D fundamental. Rejects Δ ≡ 2, 3 (mod 4),
/// Δ = 0, and perfect squares (whose split part is the excluded D = 1).
pub fn fundamental_decompose(delta: i64) -> Result<Discriminant> {
    let (d, f) = split_discriminant(delta)?;
    if d == 1 {
        return Err(Error::domain(format!(
            "{delta} is a perfect square; it has no fundamental part"
        )));
    }
    Ok(Discriminant { delta, fundamental_part: d, conductor: f })
}

/// Kronecker symbol (a | n), extended to all integers in the standard way.
/// For a fundamental discriminant D (or D = 1) this is the real character
/// χ_D of conductor |D|, completely multiplicative and with period |D|.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a;
    let mut n = n;
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    // (a | 2^e): zero for even a, else by the 8-periodic rule.
    let e = n.trailing_zeros();
    n >>= e;
    if e > 0 {
        if a & 1 == 0 {
            return 0;
        }
        let m8 = (a.rem_euclid(8)) as u32;
        if e & 1 == 1 && (m8 == 3 || m8 == 5) {
            result = -result;
        }
    }
    a = a.rem_euclid(n);
    // Jacobi symbol loop on odd n > 0.
    while a != 0 {
        let t = a.trailing_zeros();
        a >>= t;
        if t & 1 == 1 {
            let m8 = (n.rem_euclid(8)) as u32;
            if m8 == 3 || m8 == 5 {
                result = -result;
            }
        }
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a = a.rem_euclid(n);
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Divisor count d(n), divisor sum σ_{−z}(n) = Σ_{d|n} d^{−z} at working
/// precision, and the Möbius function μ(n).
pub fn divisor_functions(ctx: &Ctx, n: u64, z: &Cplx) -> (u64, Cplx, i32) {
    assert!(n >= 1, "divisor functions need n >= 1");
    let fac = factor(n);
    let d: u64 = fac.iter().map(|&(_, e)| (e + 1) as u64).product();
    let mu = if fac.iter().any(|&(_, e)| e > 1) {
        0
    } else if fac.len().is_multiple_of(2) {
        1
    } else {
        -1
    };
    let mut sigma = Cplx::from_i64(ctx, 0);
    let minus_z = -z;
    for dv in divisors(n) {
        let ln_d = ctx.real(dv as i64).ln();
        let term = Cplx::new(&minus_z.re * &ln_d, &minus_z.im * &ln_d).exp();
        sigma = &sigma + &term;
    }
    (d, sigma, mu)
}

/// Chebyshev polynomial of the second kind U_m(x), by the three-term
/// recurrence U_{m+1} = 2x·U_m − U_{m−1}.
pub fn chebyshev_u(ctx: &Ctx, m: u32, x: &Cplx) -> Cplx {
    let mut prev = Cplx::from_i64(ctx, 1);
    if m == 0 {
        return prev;
    }
    let mut cur = x.mul2exp(1);
    for _ in 1..m {
        let next = &(&x.mul2exp(1) * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// All t with |t| ≤ t_max such that t² − 4n = f²·D for some f ≥ 1, as pairs
/// (t, f). For D < 0 the output is complete regardless of t_max.
pub fn t_set(n: u64, d: i64, t_max: u64) -> Vec<(i64, u64)> {
    let mut out = Vec::new();
    let bound = if d < 0 {
        // t² < 4n forces |t| ≤ isqrt(4n - 1) when t² - 4n = f²D < 0.
        isqrt(4 * n - 1)
    } else {
        t_max
    };
    for t in 0..=bound as i64 {
        let delta = t * t - 4 * n as i64;
        if delta == 0 {
            continue;
        }
        if delta.signum() != d.signum() || delta % d != 0 {
            continue;
        }
        let q = delta / d;
        debug_assert!(q > 0);
        let f = isqrt(q as u64);
        if f * f == q as u64 {
            if t == 0 {
                out.push((0, f));
            } else {
                out.push((t, f));
                out.push((-t, f));
            }
        }
    }
    out
}

/// Reduced positive-definite forms of fundamental discriminant D < 0:
/// |b| ≤ a ≤ c with b ≥ 0 whenever |b| = a or a = c.
fn reduced_definite(d: i64) -> Vec<QuadraticForm> {
    debug_assert!(d < 0);
    let mut out = Vec::new();
    let a_max = isqrt((-d) as u64 / 3) as i64;
    for a in 1..=a_max.max(1) {
        for b in -a..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a {
                continue;
            }
            if (b.abs() == a || a == c) && b < 0 {
                continue;
            }
            let q = QuadraticForm::new(a, b, c);
            if q.is_primitive() {
                out.push(q);
            }
        }
    }
    out.sort();
    out
}

/// All reduced indefinite forms of discriminant D > 0 (not a square):
/// 0 < b < √D and √D − b < 2|a| < √D + b.
fn reduced_indefinite(d: i64) -> Vec<QuadraticForm> {
    debug_assert!(d > 0);
    let sq = isqrt(d as u64) as i64;
    let mut out = Vec::new();
    for b in 1..=sq {
        if (d - b * b) % 4 != 0 {
            continue;
        }
        let ac = (b * b - d) / 4;
        debug_assert!(ac < 0);
        for a_abs in 1..=((-ac) as u64) {
            if !((-ac) as u64).is_multiple_of(a_abs) {
                continue;
            }
            let a_abs = a_abs as i64;
            // Reduction window √D − b < 2|a| < √D + b, exactly:
            // (2|a| − b)² < D < (2|a| + b)², strict since D is not a square.
            let lo = 2 * a_abs - b;
            let hi = 2 * a_abs + b;
            if !(lo * lo < d && hi * hi > d) {
                continue;
            }
            for sign in [1i64, -1] {
                let a = sign * a_abs;
                let c = ac / a;
                let q = QuadraticForm::new(a, b, c);
                if q.is_primitive() {
                    out.push(q);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// One reduction step on a reduced indefinite form, following the cycle:
/// (a, b, c) ↦ (c, b', c') with b' ≡ −b (mod 2c), √D − 2|c| < b' < √D.
fn rho(d: i64, q: QuadraticForm) -> QuadraticForm {
    let sq = isqrt(d as u64) as i64;
    let two_c = 2 * q.c;
    // Smallest b' > sq - 2|c| with b' ≡ -b (mod 2c); then cap below √D.
    let m = two_c.abs();
    let target = (-q.b).rem_euclid(m);
    // Unique b' ≡ target (mod m) in the window (√D − m, √D), which for
    // integers is (sq − m, sq] since D is not a square.
    let lower = sq - m;
    let mut bp = lower - lower.rem_euclid(m) + target;
    while bp <= lower {
        bp += m;
    }
    debug_assert!(bp > 0 && bp * bp < d, "cycle step keeps 0 < b' < sqrt(D)");
    let cp = (bp * bp - d) / (4 * q.c);
    QuadraticForm::new(q.c, bp, cp)
}

/// Continued-fraction expansion machinery: fundamental totally-positive unit
/// (x + y√D)/2 of the order of discriminant D > 0, via the period of the
/// continued fraction of (1 + √D)/2 or √(D/4).
fn pell_unit(d: i64) -> (BigInt, BigInt) {
    // Expand the reduced surd ω₀ = (b₀ + √D)/2 with b₀ the largest integer
    // below √D of the same parity as D; the expansion is purely periodic,
    // and after one period of convergents p_i/q_i the number
    // ε₀ = q_{ℓ−1}·ω₀ + q_{ℓ−2} is the fundamental unit, of norm (−1)^ℓ.
    let sq = isqrt(d as u64) as i64;
    let b0 = if (sq - d).rem_euclid(2) == 0 { sq } else { sq - 1 };
    let mut p = b0;
    let mut q = 2i64;
    let start = (p, q);
    let mut k_prev = BigInt::zero();
    let mut k_prevprev = BigInt::one();
    loop {
        let a = (p + sq).div_euclid(q);
        let new_k = BigInt::from(a) * &k_prev + &k_prevprev;
        k_prevprev = std::mem::replace(&mut k_prev, new_k);
        p = a * q - p;
        debug_assert_eq!((d - p * p) % q, 0, "surd recursion stays integral");
        q = (d - p * p) / q;
        if (p, q) == start {
            break;
        }
    }
    // ε₀ = k_prev·(b₀ + √D)/2 + k_prevprev = (x + y√D)/2.
    let x = &k_prev * BigInt::from(b0) + BigInt::from(2) * &k_prevprev;
    let y = k_prev;
    // Norm of (x + y√D)/2 is (x² − Dy²)/4 = ±1.
    let norm4 = (&x * &x - BigInt::from(d) * &y * &y) / BigInt::from(4);
    if norm4 == BigInt::from(-1) {
        // Square to reach the totally-positive unit: (x + y√D)²/4 =
        // ((x² + Dy²)/2 + xy√D)/2.
        let xx = (&x * &x + BigInt::from(d) * &y * &y) / BigInt::from(2);
        let yy = &x * &y;
        (xx, yy)
    } else {
        debug_assert!(norm4.is_one(), "continued-fraction period must give a unit");
        (x, y)
    }
}

/// Class data of a fundamental discriminant: reduced representatives, narrow
/// class number, unit count (D < 0) or fundamental unit (D > 0).
pub fn class_data(d: i64) -> Result<ClassData> {
    if !is_fundamental(d) {
        return Err(Error::domain(format!("{d} is not a fundamental discriminant")));
    }
    if d < 0 {
        let reps = reduced_definite(d);
        let w = match d {
            -3 => 6,
            -4 => 4,
            _ => 2,
        };
        Ok(ClassData {
            d,
            h: reps.len(),
            representatives: reps,
            w: Some(w),
            eps: None,
        })
    } else {
        let all = reduced_indefinite(d);
        // Partition reduced forms into ρ-cycles; one representative each.
        let mut remaining: std::collections::BTreeSet<QuadraticForm> = all.iter().copied().collect();
        let mut reps = Vec::new();
        while let Some(&q0) = remaining.iter().next() {
            reps.push(q0);
            let mut q = q0;
            loop {
                remaining.remove(&q);
                q = rho(d, q);
                debug_assert!(all.contains(&q), "rho must stay within the reduced set");
                if q == q0 {
                    break;
                }
            }
        }
        let eps = pell_unit(d);
        Ok(ClassData {
            d,
            h: reps.len(),
            representatives: reps,
            w: None,
            eps: Some(eps),
        })
    }
}
