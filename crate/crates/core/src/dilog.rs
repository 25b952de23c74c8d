//! The dilogarithm `Li2` on its principal sheet and the Bloch-Wigner function.
//!
//! Branch convention: `Li2` is cut along `(1, inf)`. On the cut the value is the
//! limit from below, `Im Li2(x) = -pi ln x`, which is what the principal
//! logarithm produces when `Im z == 0` exactly.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::mp::{Complex, PrecisionContext, Real};

/// Extra bits carried through the functional-equation reductions.
const REDUCTION_BITS: usize = 24;

/// Which evaluation chain [`li2_with`] should use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Li2Route {
    /// Inversion and reflection into `|z| <= 1/2` when possible, otherwise the
    /// Bernoulli series in `-log(1 - z)`.
    Auto,
    /// Power series `sum z^k / k^2` directly; requires `|z| < 1`.
    Series,
    /// Bernoulli series directly; requires `|log(1 - z)| < 2 pi`.
    Bernoulli,
}

thread_local! {
    static BERNOULLI: RefCell<Vec<BigRational>> = RefCell::new(vec![BigRational::one()]);
    static BERN_COEFFS: RefCell<HashMap<usize, Vec<Real>>> = RefCell::new(HashMap::new());
}

/// Exact Bernoulli numbers `B_0 .. B_m` with `B_1 = -1/2`.
fn bernoulli_upto(m: usize) -> Vec<BigRational> {
    BERNOULLI.with(|cell| {
        let mut b = cell.borrow_mut();
        while b.len() <= m {
            // sum_{k=0}^{j} C(j+1, k) B_k = 0
            let j = b.len();
            let mut binom = BigInt::one();
            let mut s = BigRational::zero();
            for (k, bk) in b.iter().enumerate() {
                s += BigRational::from_integer(binom.clone()) * bk;
                binom = binom * BigInt::from(j + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-s / BigRational::from_integer(BigInt::from(j + 1)));
        }
        b[..=m].to_vec()
    })
}

/// `B_n / (n+1)!` for `n <= m` at `p` bits.
fn bernoulli_coeffs(m: usize, p: usize) -> Vec<Real> {
    BERN_COEFFS.with(|cell| {
        let mut cache = cell.borrow_mut();
        let entry = cache.entry(p).or_default();
        if entry.len() <= m {
            let b = bernoulli_upto(m);
            // entry.len()!, so the loop below continues at (n+1)!
            let mut fact = BigInt::one();
            for k in 2..=entry.len() {
                fact *= BigInt::from(k);
            }
            for (n, bn) in b.iter().enumerate().skip(entry.len()) {
                if n > 0 {
                    fact *= BigInt::from(n + 1);
                }
                entry.push(Real::from_rational(&(bn / BigRational::from_integer(fact.clone())), p));
            }
        }
        entry[..=m].to_vec()
    })
}

fn pi_sq_over(d: i64, p: usize) -> Real {
    Real::pi(p).square() / Real::from_i64(d, p)
}

/// Power series with length fixed by `|z|^(N+1) / ((N+1)^2 (1-|z|)) < 2^-p`.
fn li2_series(z: &Complex, p: usize) -> Complex {
    let r = z.abs().to_f64().min(1.0 - 1e-12) + 1e-17;
    let target = -(p as f64) * std::f64::consts::LN_2;
    let mut n = 1usize;
    while ((n + 1) as f64) * r.ln() - 2.0 * ((n + 1) as f64).ln() - (1.0 - r).ln() > target {
        n += 1;
    }
    let mut sum = Complex::zero(p);
    let mut pw = Complex::one(p);
    for k in 1..=n {
        pw = &pw * z;
        let kk = Real::from_i64((k * k) as i64, p);
        sum = &sum + &Complex::new(&pw.re / &kk, &pw.im / &kk);
    }
    sum
}

/// `Li2(z) = sum_n B_n u^(n+1) / (n+1)!` with `u = -log(1-z)`, for `|u| < 2 pi`.
///
/// Tail after `N` terms is below `4 |u| q^(N+1) / (1-q)` with `q = |u| / 2pi`.
fn li2_bernoulli(z: &Complex, p: usize) -> Complex {
    let u = -(&Complex::one(p) - z).ln();
    let ua = u.abs().to_f64();
    let q = ua / std::f64::consts::TAU;
    assert!(q < 0.95, "Bernoulli series outside its disc of convergence");
    if ua == 0.0 {
        return Complex::zero(p);
    }
    let target = -(p as f64) * std::f64::consts::LN_2;
    let mut n = 1usize;
    while (4.0 * ua).ln() + ((n + 1) as f64) * q.ln() - (1.0 - q).ln() > target {
        n += 1;
    }
    let coeffs = bernoulli_coeffs(n, p);
    let u2 = u.square();
    // n = 0 and n = 1 terms, then even n only (odd Bernoulli numbers vanish)
    let mut sum = &u - &u2.scale(&Real::from_i64(4, p).recip());
    let mut pw = &u2 * &u;
    let mut k = 2;
    while k <= n {
        sum = &sum + &pw.scale(&coeffs[k]);
        pw = &pw * &u2;
        k += 2;
    }
    sum
}

fn li2_unit_disc(w: &Complex, p: usize) -> Complex {
    let half = Real::from_f64(0.5, p);
    if w.abs() <= half {
        return li2_series(w, p);
    }
    if w.re > half {
        // Li2(w) = pi^2/6 - log(w) log(1-w) - Li2(1-w)
        let one_minus = &Complex::one(p) - w;
        let inner = if one_minus.abs() <= half { li2_series(&one_minus, p) } else { li2_bernoulli(&one_minus, p) };
        let c = Complex::from_real(pi_sq_over(6, p));
        return &(&c - &(&w.ln() * &one_minus.ln())) - &inner;
    }
    li2_bernoulli(w, p)
}

fn li2_auto(z: &Complex, p: usize) -> Complex {
    if z.is_zero() {
        return Complex::zero(p);
    }
    let one = Complex::one(p);
    if *z == one {
        return Complex::from_real(pi_sq_over(6, p));
    }
    if z.abs() > Real::one(p) {
        // Li2(z) = -pi^2/6 - log^2(-z)/2 - Li2(1/z)
        let l = (-z).ln();
        let c = Complex::from_real(-pi_sq_over(6, p));
        let half_sq = l.square().scale(&Real::from_f64(0.5, p));
        return &(&c - &half_sq) - &li2_unit_disc(&z.recip(), p);
    }
    li2_unit_disc(z, p)
}

/// Principal-branch dilogarithm at the working precision of `ctx`.
pub fn li2(z: &Complex, ctx: &PrecisionContext) -> Complex {
    li2_with(z, ctx, Li2Route::Auto)
}

/// [`li2`] through an explicit evaluation chain, for cross-checking.
///
/// # Panics
/// If the chosen route is outside its region of convergence.
pub fn li2_with(z: &Complex, ctx: &PrecisionContext, route: Li2Route) -> Complex {
    let out = ctx.bits();
    let p = out + REDUCTION_BITS;
    let zw = z.with_prec(p);
    let v = match route {
        Li2Route::Auto => li2_auto(&zw, p),
        Li2Route::Series => {
            assert!(zw.abs() < Real::one(p), "power series needs |z| < 1");
            li2_series(&zw, p)
        }
        Li2Route::Bernoulli => li2_bernoulli(&zw, p),
    };
    v.with_prec(out)
}

/// Bloch-Wigner function `D(z) = log|z| arg(1-z) + Im Li2(z)`.
///
/// Exactly zero when `Im z == 0`, which includes the continuous extension at 0 and 1.
pub fn bloch_wigner(z: &Complex, ctx: &PrecisionContext) -> Real {
    let out = ctx.bits();
    if z.im.is_zero() {
        return Real::zero(out);
    }
    let p = out + REDUCTION_BITS;
    let zw = z.with_prec(p);
    let one_minus = &Complex::one(p) - &zw;
    let v = &zw.ln_abs() * &one_minus.arg() + li2_auto(&zw, p).im;
    v.with_prec(out)
}

/// The closed-form one-form `log|z| d arg(1-z) - log|1-z| d arg z`, returned as
/// its `(dx, dy)` components at `z`.
pub fn bloch_wigner_gradient(z: &Complex, ctx: &PrecisionContext) -> (Real, Real) {
    let p = ctx.bits();
    let one = Complex::one(p);
    let a = z.ln_abs();
    let b = (&one - z).ln_abs();
    let inv_z = z.recip();
    let inv_w = (&one - z).recip();
    // arg(1-z): d/dx = Im(-1/(1-z)), d/dy = -Re(1/(1-z)); arg z: d/dx = Im(1/z), d/dy = Re(1/z)
    let dx = &(&a * &(-&inv_w.im)) - &(&b * &inv_z.im);
    let dy = &(&a * &(-&inv_w.re)) - &(&b * &inv_z.re);
    (dx, dy)
}
