//! Exact integer and rational linear algebra: Hermite and Smith normal forms,
//! integer kernels, LLL reduction, and Gauss-Jordan over the rationals.
//!
//! Matrices are row lists. Lattices are always spanned by rows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntRow = Vec<BigInt>;
pub type RatRow = Vec<BigRational>;

pub fn identity(n: usize) -> Vec<IntRow> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn int_row(xs: &[i64]) -> IntRow {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn is_zero_row(r: &[BigInt]) -> bool {
    r.iter().all(Zero::is_zero)
}

fn axpy(target: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    for (t, s) in target.iter_mut().zip(src) {
        *t += q * s;
    }
}

/// `x * A` for a row vector `x`.
pub fn row_times(x: &[BigInt], a: &[IntRow], ncols: usize) -> IntRow {
    let mut out = vec![BigInt::zero(); ncols];
    for (xi, row) in x.iter().zip(a) {
        if !xi.is_zero() {
            axpy(&mut out, xi, row);
        }
    }
    out
}

pub fn mat_mul(a: &[IntRow], b: &[IntRow], ncols: usize) -> Vec<IntRow> {
    a.iter().map(|r| row_times(r, b, ncols)).collect()
}

/// Extended gcd with `g >= 0` and `g = x*a + y*b`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Row Hermite normal form `H = U * A` with its unimodular transform.
#[derive(Debug, Clone)]
pub struct Hnf {
    /// All rows of `U * A`; the first `rank` rows are the echelon basis, the rest are zero.
    pub h: Vec<IntRow>,
    pub u: Vec<IntRow>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Hnf {
    pub fn basis(&self) -> &[IntRow] {
        &self.h[..self.rank]
    }
}

/// Canonical row HNF: echelon, positive pivots, entries above each pivot in `[0, pivot)`.
pub fn hnf_with_transform(a: &[IntRow], ncols: usize) -> Hnf {
    let m = a.len();
    let mut h: Vec<IntRow> = a.to_vec();
    let mut u = identity(m);
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..ncols {
        if r == m {
            break;
        }
        for i in r + 1..m {
            if h[i][c].is_zero() {
                continue;
            }
            if h[r][c].is_zero() {
                h.swap(r, i);
                u.swap(r, i);
                continue;
            }
            let (g, x, y) = ext_gcd(&h[r][c], &h[i][c]);
            let ar = &h[r][c] / &g;
            let bi = &h[i][c] / &g;
            let combine = |rows: &mut Vec<IntRow>| {
                let (ra, rb) = (rows[r].clone(), rows[i].clone());
                rows[r] = ra.iter().zip(&rb).map(|(p, q)| &x * p + &y * q).collect();
                rows[i] = ra.iter().zip(&rb).map(|(p, q)| &ar * q - &bi * p).collect();
            };
            combine(&mut h);
            combine(&mut u);
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            h[r].iter_mut().for_each(|v| *v = -v.clone());
            u[r].iter_mut().for_each(|v| *v = -v.clone());
        }
        let (pivot_row, pivot_u) = (h[r].clone(), u[r].clone());
        for j in 0..r {
            let q = h[j][c].div_floor(&pivot_row[c]);
            if !q.is_zero() {
                let nq = -q;
                axpy(&mut h[j], &nq, &pivot_row);
                axpy(&mut u[j], &nq, &pivot_u);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Hnf { h, u, rank: r, pivots }
}

/// Nonzero rows of the canonical HNF of the row lattice.
pub fn hnf(a: &[IntRow], ncols: usize) -> Vec<IntRow> {
    let res = hnf_with_transform(a, ncols);
    res.h[..res.rank].to_vec()
}

/// HNF basis of the integer left kernel `{x : x * A = 0}`.
pub fn left_kernel(a: &[IntRow], ncols: usize) -> Vec<IntRow> {
    let res = hnf_with_transform(a, ncols);
    let k: Vec<IntRow> = res.u[res.rank..].to_vec();
    hnf(&k, a.len())
}

/// Reduces `v` modulo the lattice spanned by an HNF `basis`; canonical coset representative.
pub fn reduce_mod_hnf(v: &[BigInt], basis: &[IntRow]) -> IntRow {
    let mut out = v.to_vec();
    for row in basis {
        let Some(c) = row.iter().position(|x| !x.is_zero()) else { continue };
        let q = out[c].div_floor(&row[c]);
        if !q.is_zero() {
            axpy(&mut out, &(-q), row);
        }
    }
    out
}

/// Whether `v` lies in the row lattice of an HNF `basis`.
pub fn in_lattice(v: &[BigInt], basis: &[IntRow]) -> bool {
    is_zero_row(&reduce_mod_hnf(v, basis))
}

/// Smith normal form `D = U * A * V` with unimodular `U`, `V`.
#[derive(Debug, Clone)]
pub struct Snf {
    /// Diagonal of `D`, length `min(m, n)`, nonnegative, each dividing the next nonzero one.
    pub diag: Vec<BigInt>,
    pub u: Vec<IntRow>,
    pub v: Vec<IntRow>,
    pub nrows: usize,
    pub ncols: usize,
}

pub fn snf(a: &[IntRow], ncols: usize) -> Snf {
    let m = a.len();
    let n = ncols;
    let mut d: Vec<IntRow> = a.to_vec();
    let mut u = identity(m);
    let mut v = identity(n);

    let swap_cols = |mat: &mut Vec<IntRow>, i: usize, j: usize| {
        for row in mat.iter_mut() {
            row.swap(i, j);
        }
    };
    let col_axpy = |mat: &mut Vec<IntRow>, target: usize, q: &BigInt, src: usize| {
        for row in mat.iter_mut() {
            let s = row[src].clone();
            row[target] += q * s;
        }
    };

    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if d[i][j].is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            d.swap(t, bi);
            u.swap(t, bi);
            swap_cols(&mut d, t, bj);
            swap_cols(&mut v, t, bj);

            let mut clean = true;
            for i in t + 1..m {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = -(d[i][t].div_floor(&d[t][t]));
                let (pd, pu) = (d[t].clone(), u[t].clone());
                axpy(&mut d[i], &q, &pd);
                axpy(&mut u[i], &q, &pu);
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..n {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = -(d[t][j].div_floor(&d[t][t]));
                col_axpy(&mut d, j, &q, t);
                col_axpy(&mut v, j, &q, t);
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[i][j].is_multiple_of(&d[t][t])));
            match offender {
                Some(i) => {
                    let (rd, ru) = (d[i].clone(), u[i].clone());
                    axpy(&mut d[t], &BigInt::one(), &rd);
                    axpy(&mut u[t], &BigInt::one(), &ru);
                }
                None => break,
            }
        }
        if t < m && d[t][t].is_negative() {
            d[t].iter_mut().for_each(|x| *x = -x.clone());
            u[t].iter_mut().for_each(|x| *x = -x.clone());
        }
    }
    let diag = (0..m.min(n)).map(|i| d[i][i].clone()).collect();
    Snf { diag, u, v, nrows: m, ncols: n }
}

/// Rank over the rationals.
pub fn int_rank(a: &[IntRow], ncols: usize) -> usize {
    hnf_with_transform(a, ncols).rank
}

fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

fn round_rat(x: &BigRational) -> BigInt {
    crate::mp::round_div(x.numer(), x.denom())
}

fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gram-Schmidt data: `mu[i][j]` and squared norms `bstar_sq[i]`.
fn gram_schmidt(b: &[IntRow]) -> (Vec<RatRow>, RatRow) {
    let n = b.len();
    let mut bstar: Vec<RatRow> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut norms: RatRow = Vec::with_capacity(n);
    for i in 0..n {
        let mut v: RatRow = b[i].iter().map(rat).collect();
        for j in 0..i {
            if norms[j].is_zero() {
                continue;
            }
            let num: BigRational = b[i].iter().zip(&bstar[j]).map(|(x, y)| rat(x) * y).sum();
            mu[i][j] = num / &norms[j];
            for (vk, bk) in v.iter_mut().zip(&bstar[j]) {
                *vk -= &mu[i][j] * bk;
            }
        }
        let nn: BigRational = v.iter().map(|x| x * x).sum();
        norms.push(nn);
        bstar.push(v);
    }
    (mu, norms)
}

/// LLL reduction with parameter `delta = 99/100` of linearly independent rows.
pub fn lll(mut b: Vec<IntRow>) -> Vec<IntRow> {
    let n = b.len();
    if n < 2 {
        return b;
    }
    let delta = BigRational::new(BigInt::from(99), BigInt::from(100));
    let (mut mu, mut norms) = gram_schmidt(&b);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let q = round_rat(&mu[k][j]);
            if q.is_zero() {
                continue;
            }
            let bj = b[j].clone();
            axpy(&mut b[k], &(-&q), &bj);
            let qr = rat(&q);
            for i in 0..j {
                let t = &qr * &mu[j][i];
                mu[k][i] -= t;
            }
            mu[k][j] -= &qr;
        }
        let lhs = &norms[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            let gs = gram_schmidt(&b);
            mu = gs.0;
            norms = gs.1;
            k = (k - 1).max(1);
        }
    }
    b
}

pub fn squared_norm(r: &[BigInt]) -> BigInt {
    dot_int(r, r)
}

// ---- rationals -------------------------------------------------------------

pub fn rat_identity(n: usize) -> Vec<RatRow> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect()
}

pub fn rat_det(m: &[RatRow]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det *= &piv;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &piv;
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    det
}

pub fn rat_inverse(m: &[RatRow]) -> Option<Vec<RatRow>> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut inv = rat_identity(n);
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(p, c);
        inv.swap(p, c);
        let piv = a[c][c].clone();
        for k in 0..n {
            a[c][k] /= &piv;
            inv[c][k] /= &piv;
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for k in 0..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
                let t = &f * &inv[c][k];
                inv[r][k] -= t;
            }
        }
    }
    Some(inv)
}

/// `x * M` for a rational row vector.
pub fn rat_row_times(x: &[BigRational], m: &[RatRow]) -> RatRow {
    let ncols = m.first().map_or(0, Vec::len);
    let mut out = vec![BigRational::zero(); ncols];
    for (xi, row) in x.iter().zip(m) {
        if xi.is_zero() {
            continue;
        }
        for (o, v) in out.iter_mut().zip(row) {
            *o += xi * v;
        }
    }
    out
}

/// Common denominator of all entries.
pub fn common_denominator(rows: &[RatRow]) -> BigInt {
    rows.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Canonical HNF of a full-rank rational row lattice.
pub fn rat_hnf(rows: &[RatRow], ncols: usize) -> Vec<RatRow> {
    let d = common_denominator(rows);
    let scaled: Vec<IntRow> = rows.iter().map(|r| r.iter().map(|x| (x * rat(&d)).to_integer()).collect()).collect();
    hnf(&scaled, ncols)
        .into_iter()
        .map(|r| r.into_iter().map(|x| BigRational::new(x, d.clone())).collect())
        .collect()
}
