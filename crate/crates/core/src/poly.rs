//! Dense univariate polynomials over the rationals and over small prime fields.
//! Coefficients are stored in ascending degree order with no trailing zeros.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type QPoly = Vec<BigRational>;

pub fn trim(p: &mut QPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub fn from_ints(c: &[BigInt]) -> QPoly {
    let mut p: QPoly = c.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    trim(&mut p);
    p
}

/// Degree, with `None` for the zero polynomial.
pub fn degree(p: &[BigRational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn add(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let n = a.len().max(b.len());
    let mut out: QPoly = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_else(BigRational::zero) + b.get(i).cloned().unwrap_or_else(BigRational::zero))
        .collect();
    trim(&mut out);
    out
}

pub fn neg(a: &[BigRational]) -> QPoly {
    a.iter().map(|c| -c).collect()
}

pub fn sub(a: &[BigRational], b: &[BigRational]) -> QPoly {
    add(a, &neg(b))
}

pub fn mul(a: &[BigRational], b: &[BigRational]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

pub fn scale(a: &[BigRational], c: &BigRational) -> QPoly {
    let mut out: QPoly = a.iter().map(|x| x * c).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly) {
    let db = degree(b).expect("polynomial division by zero");
    let mut r: QPoly = a.to_vec();
    trim(&mut r);
    let lc = b[db].clone();
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lc;
        let shift = dr - db;
        for (k, bk) in b.iter().enumerate().take(db + 1) {
            r[shift + k] -= &c * bk;
        }
        q[shift] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn rem(a: &[BigRational], b: &[BigRational]) -> QPoly {
    divrem(a, b).1
}

pub fn derivative(a: &[BigRational]) -> QPoly {
    let mut out: QPoly = a.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(i.into())).collect();
    trim(&mut out);
    out
}

fn monic(a: &[BigRational]) -> QPoly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => {
            let lc = a[d].clone();
            a[..=d].iter().map(|c| c / &lc).collect()
        }
    }
}

/// Monic gcd.
pub fn gcd(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let mut x: QPoly = a.to_vec();
    let mut y: QPoly = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while degree(&y).is_some() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

/// `(g, s, t)` with `g = s*a + t*b` and `g` monic.
pub fn ext_gcd(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly, QPoly) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    let (mut s0, mut s1): (QPoly, QPoly) = (vec![BigRational::one()], Vec::new());
    let (mut t0, mut t1): (QPoly, QPoly) = (Vec::new(), vec![BigRational::one()]);
    while degree(&r1).is_some() {
        let (q, r) = divrem(&r0, &r1);
        let s2 = sub(&s0, &mul(&q, &s1));
        let t2 = sub(&t0, &mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match degree(&r0) {
        None => (r0, s0, t0),
        Some(d) => {
            let inv = r0[d].recip();
            (scale(&r0, &inv), scale(&s0, &inv), scale(&t0, &inv))
        }
    }
}

/// Sylvester resultant `res(f, g) = lc(f)^deg(g) * prod g(alpha)` over the roots of `f`.
pub fn resultant(f: &[BigRational], g: &[BigRational]) -> BigRational {
    let (Some(_), Some(_)) = (degree(f), degree(g)) else {
        return BigRational::zero();
    };
    let mut a: QPoly = f.to_vec();
    let mut b: QPoly = g.to_vec();
    trim(&mut a);
    trim(&mut b);
    let mut acc = BigRational::one();
    loop {
        let da = degree(&a).expect("nonzero");
        let Some(db) = degree(&b) else {
            return BigRational::zero();
        };
        if db == 0 {
            return acc * num_traits::pow(b[0].clone(), da);
        }
        if da == 0 {
            return acc * num_traits::pow(a[0].clone(), db);
        }
        // res(a, b) = (-1)^(da*db) res(b, a) = (-1)^(da*db) lc(b)^(da - dr) res(b, r)
        let r = rem(&a, &b);
        let Some(dr) = degree(&r) else {
            return BigRational::zero();
        };
        if (da * db) % 2 == 1 {
            acc = -acc;
        }
        acc *= num_traits::pow(b[db].clone(), da - dr);
        a = b;
        b = r;
    }
}

pub fn eval(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

// ---- polynomials over F_p ---------------------------------------------------

type ModPoly = Vec<u64>;

fn mp_trim(p: &mut ModPoly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn mp_rem(a: &[u64], b: &[u64], m: u64) -> ModPoly {
    let mut r = a.to_vec();
    mp_trim(&mut r);
    let db = b.len() - 1;
    let inv = mod_inv(b[db], m);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = (r[dr] as u128 * inv as u128 % m as u128) as u64;
        let shift = dr - db;
        for (k, &bk) in b.iter().enumerate() {
            let sub = (c as u128 * bk as u128 % m as u128) as u64;
            r[shift + k] = (r[shift + k] + m - sub) % m;
        }
        mp_trim(&mut r);
    }
    r
}

fn mp_mulmod(a: &[u64], b: &[u64], f: &[u64], m: u64) -> ModPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % m as u128) as u64;
        }
    }
    mp_rem(&out, f, m)
}

fn mp_gcd(a: &[u64], b: &[u64], m: u64) -> ModPoly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    mp_trim(&mut x);
    mp_trim(&mut y);
    while !y.is_empty() {
        let r = mp_rem(&x, &y, m);
        x = y;
        y = r;
    }
    x
}

fn mod_inv(a: u64, m: u64) -> u64 {
    let e = BigInt::from(a).extended_gcd(&BigInt::from(m));
    e.x.mod_floor(&BigInt::from(m)).to_u64().expect("small modulus")
}

/// Whether monic integer `f` stays irreducible of full degree modulo the prime `p`
/// (Ben-Or: no factor of degree `<= n/2`).
pub fn irreducible_mod_p(f: &[BigInt], p: u64) -> bool {
    let bp = BigInt::from(p);
    let fm: ModPoly = f.iter().map(|c| c.mod_floor(&bp).to_u64().expect("reduced")).collect();
    let n = fm.len() - 1;
    if fm[n] == 0 || n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x: ModPoly = vec![0, 1];
    let mut xp = x.clone();
    for _ in 1..=n / 2 {
        // xp <- xp^p mod f
        let mut base = xp.clone();
        let mut acc: ModPoly = vec![1];
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mp_mulmod(&acc, &base, &fm, p);
            }
            base = mp_mulmod(&base, &base, &fm, p);
            e >>= 1;
        }
        xp = acc;
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        mp_trim(&mut diff);
        let g = mp_gcd(&fm, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Integer roots of an integer polynomial with nonzero constant term, by divisor search.
pub fn has_integer_root(f: &[BigInt]) -> bool {
    if f.is_empty() {
        return false;
    }
    if f[0].is_zero() {
        return true;
    }
    let q = from_ints(f);
    let c = f[0].abs();
    // divisor search is only attempted for constants of moderate size
    let Some(c64) = c.to_u64() else { return false };
    if c64 > 1_000_000_000_000 {
        return false;
    }
    let mut d = 1u64;
    while d * d <= c64 {
        if c64 % d == 0 {
            for cand in [d, c64 / d] {
                for s in [1i64, -1] {
                    let x = BigRational::from_integer(BigInt::from(cand) * s);
                    if eval(&q, &x).is_zero() {
                        return true;
                    }
                }
            }
        }
        d += 1;
    }
    false
}
