//! Number fields `K = Q[x]/(f)`: exact element arithmetic and numerical
//! complex embeddings.

use std::fmt;

use log::warn;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::{self, RatRow};
use crate::mp::{format_rational, parse_rational, Complex, PrecisionContext, Real};
use crate::poly::{self, QPoly};

const SCREEN_PRIMES: [u64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

/// Field-description record: `{"poly": [c0, ..., 1], "integral_basis": [["p/q", ..], ..], "maximal": bool}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FieldDescription {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u32>,
    pub poly: Vec<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integral_basis: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub maximal: bool,
}

impl FieldDescription {
    pub fn from_poly(poly: &[i64]) -> Self {
        FieldDescription {
            schema: None,
            poly: poly.iter().map(|&c| serde_json::Value::from(c)).collect(),
            integral_basis: None,
            maximal: true,
        }
    }
}

/// Element record: `{"coeffs": ["p/q", ...]}` in power-basis coordinates.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ElementRecord {
    pub coeffs: Vec<String>,
}

/// `Q[x]/(f)` with `f` monic and integral, together with a chosen integral basis.
#[derive(Clone, PartialEq)]
pub struct NumberField {
    poly: Vec<BigInt>,
    qpoly: QPoly,
    integral_basis: Vec<RatRow>,
    basis_inverse: Vec<RatRow>,
    maximal: bool,
    irreducibility_certified: bool,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumberField").field("poly", &self.poly).field("maximal", &self.maximal).finish()
    }
}

/// An element of a number field, reduced to degree `< n` in the power basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl FieldElement {
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn to_record(&self) -> ElementRecord {
        ElementRecord { coeffs: self.coeffs.iter().map(format_rational).collect() }
    }

    fn as_poly(&self) -> QPoly {
        let mut p = self.coeffs.clone();
        poly::trim(&mut p);
        p
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn json_to_int(v: &serde_json::Value, idx: usize) -> Result<BigInt> {
    let bad = || Error::Format(format!("poly[{idx}]: expected an integer coefficient, got {v}"));
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(bad())
            }
        }
        serde_json::Value::String(s) => s.trim().parse().map_err(|_| bad()),
        _ => Err(bad()),
    }
}

/// Builds a [`NumberField`] from a description record.
pub fn parse_field(desc: &FieldDescription) -> Result<NumberField> {
    if let Some(s) = desc.schema {
        if s != 1 {
            return Err(Error::Format(format!("schema: unsupported version {s}")));
        }
    }
    let coeffs = desc.poly.iter().enumerate().map(|(i, v)| json_to_int(v, i)).collect::<Result<Vec<_>>>()?;
    let basis = match &desc.integral_basis {
        None => None,
        Some(rows) => Some(
            rows.iter()
                .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    NumberField::new(coeffs, basis, desc.maximal)
}

impl NumberField {
    /// `poly` ascending and monic. `integral_basis` rows are power-basis coordinates.
    pub fn new(poly: Vec<BigInt>, integral_basis: Option<Vec<RatRow>>, maximal: bool) -> Result<Self> {
        if poly.len() < 2 {
            return Err(Error::Format("poly: degree must be at least 1".into()));
        }
        if !poly.last().is_some_and(One::is_one) {
            return Err(Error::Format(format!(
                "poly: not monic (leading coefficient {})",
                poly.last().expect("nonempty")
            )));
        }
        let n = poly.len() - 1;
        let qpoly = poly::from_ints(&poly);
        if poly::degree(&poly::gcd(&qpoly, &poly::derivative(&qpoly))) != Some(0) {
            return Err(Error::Squarefree("defining polynomial has a repeated factor".into()));
        }
        if n >= 2 && poly::has_integer_root(&poly) {
            return Err(Error::Format("poly: reducible over Q (has an integer root)".into()));
        }
        let irreducibility_certified = n == 1 || SCREEN_PRIMES.iter().any(|&p| poly::irreducible_mod_p(&poly, p));
        if !irreducibility_certified {
            warn!("irreducibility of {poly:?} not certified by the small-prime screen; assuming the caller's claim");
        }
        let integral_basis = match integral_basis {
            None => intmat::rat_identity(n),
            Some(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Format(format!("integral_basis: expected a {n}x{n} matrix")));
                }
                intmat::rat_hnf(&rows, n)
            }
        };
        if integral_basis.len() != n {
            return Err(Error::Format("integral_basis: matrix is singular".into()));
        }
        let basis_inverse = intmat::rat_inverse(&integral_basis)
            .ok_or_else(|| Error::Format("integral_basis: matrix is singular".into()))?;
        let field = NumberField { poly, qpoly, integral_basis, basis_inverse, maximal, irreducibility_certified };
        field.check_order()?;
        Ok(field)
    }

    /// Convenience constructor for the power basis of `Z[x]/(f)`.
    pub fn from_poly(poly: &[i64]) -> Result<Self> {
        NumberField::new(poly.iter().map(|&c| BigInt::from(c)).collect(), None, true)
    }

    /// The integral basis must span a ring containing 1.
    fn check_order(&self) -> Result<()> {
        if !self.is_integral_coords(&self.one()) {
            return Err(Error::Format("integral_basis: span does not contain 1".into()));
        }
        let elems: Vec<FieldElement> = self.integral_basis_elements();
        for a in &elems {
            for b in &elems {
                if !self.is_integral_coords(&self.mul(a, b)) {
                    return Err(Error::Format("integral_basis: span is not closed under multiplication".into()));
                }
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn defining_poly(&self) -> &[BigInt] {
        &self.poly
    }

    pub fn maximality_asserted(&self) -> bool {
        self.maximal
    }

    pub fn irreducibility_certified(&self) -> bool {
        self.irreducibility_certified
    }

    pub fn integral_basis(&self) -> &[RatRow] {
        &self.integral_basis
    }

    pub fn integral_basis_elements(&self) -> Vec<FieldElement> {
        self.integral_basis.iter().map(|r| FieldElement { coeffs: r.clone() }).collect()
    }

    pub fn description(&self) -> FieldDescription {
        let identity = self.integral_basis == intmat::rat_identity(self.degree());
        FieldDescription {
            schema: Some(1),
            poly: self.poly.iter().map(|c| serde_json::Value::String(c.to_string())).collect(),
            integral_basis: (!identity)
                .then(|| self.integral_basis.iter().map(|r| r.iter().map(format_rational).collect()).collect()),
            maximal: self.maximal,
        }
    }

    /// `disc(f) = (-1)^(n(n-1)/2) res(f, f')`.
    pub fn poly_discriminant(&self) -> BigInt {
        let n = self.degree();
        let r = poly::resultant(&self.qpoly, &poly::derivative(&self.qpoly));
        let r = if (n * (n - 1) / 2) % 2 == 1 { -r } else { r };
        r.to_integer()
    }

    fn reduce(&self, mut p: QPoly) -> FieldElement {
        poly::trim(&mut p);
        if p.len() > self.degree() {
            p = poly::rem(&p, &self.qpoly);
        }
        p.resize(self.degree(), BigRational::zero());
        FieldElement { coeffs: p }
    }

    pub fn element(&self, coeffs: Vec<BigRational>) -> Result<FieldElement> {
        if coeffs.len() > self.degree() {
            return Ok(self.reduce(coeffs));
        }
        Ok(self.reduce(coeffs))
    }

    pub fn element_from_ints(&self, coeffs: &[i64]) -> FieldElement {
        self.reduce(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn element_from_record(&self, rec: &ElementRecord) -> Result<FieldElement> {
        if rec.coeffs.len() > self.degree() {
            return Err(Error::Format(format!("coeffs: expected at most {} entries", self.degree())));
        }
        let c = rec.coeffs.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        self.element(c)
    }

    pub fn from_rational(&self, r: BigRational) -> FieldElement {
        self.reduce(vec![r])
    }

    pub fn from_int(&self, c: i64) -> FieldElement {
        self.from_rational(BigRational::from_integer(c.into()))
    }

    pub fn zero(&self) -> FieldElement {
        self.from_int(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// The class of `x`.
    pub fn generator(&self) -> FieldElement {
        self.reduce(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect() }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement { coeffs: a.coeffs.iter().map(|x| -x).collect() }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.reduce(poly::mul(&a.as_poly(), &b.as_poly()))
    }

    pub fn scale(&self, a: &FieldElement, c: &BigRational) -> FieldElement {
        FieldElement { coeffs: a.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn inverse(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::Arithmetic("division by zero".into()));
        }
        let (g, s, _) = poly::ext_gcd(&a.as_poly(), &self.qpoly);
        if poly::degree(&g) != Some(0) {
            return Err(Error::Arithmetic("element is a zero divisor; defining polynomial is reducible".into()));
        }
        Ok(self.reduce(s))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inverse(b)?))
    }

    pub fn arith(&self, a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement> {
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Div => self.div(a, b)?,
        })
    }

    /// `a^e` for any integer exponent; negative exponents need `a != 0`.
    pub fn pow(&self, a: &FieldElement, e: i64) -> Result<FieldElement> {
        let base = if e < 0 { self.inverse(a)? } else { a.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = self.one();
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            k >>= 1;
            if k > 0 {
                b = self.mul(&b, &b);
            }
        }
        Ok(acc)
    }

    /// `prod a_i^e_i` for an exponent vector.
    pub fn power_product(&self, gens: &[FieldElement], exps: &[BigInt]) -> Result<FieldElement> {
        let mut acc = self.one();
        for (g, e) in gens.iter().zip(exps) {
            if e.is_zero() {
                continue;
            }
            let e = e.to_i64().ok_or_else(|| Error::Domain(format!("exponent {e} too large")))?;
            acc = self.mul(&acc, &self.pow(g, e)?);
        }
        Ok(acc)
    }

    /// `N_{K/Q}(a)` as the resultant of the defining polynomial and the representative.
    pub fn norm(&self, a: &FieldElement) -> BigRational {
        if a.is_zero() {
            return BigRational::zero();
        }
        poly::resultant(&self.qpoly, &a.as_poly())
    }

    /// Trace, as `sum of roots` weighted by the representative: computed from the norm-free
    /// power sums of `f` via Newton's identities.
    pub fn trace(&self, a: &FieldElement) -> BigRational {
        let n = self.degree();
        // power sums p_k of the roots of f
        let c: Vec<BigRational> = self.poly.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let mut ps = vec![BigRational::from_integer(n.into())];
        for k in 1..n {
            // p_k + e1 p_{k-1} + ... + k e_k = 0 with e_j = c_{n-j} (monic, signs folded in)
            let mut s = BigRational::from_integer(k.into()) * &c[n - k];
            for j in 1..k {
                s += &c[n - j] * &ps[k - j];
            }
            ps.push(-s);
        }
        a.coeffs.iter().zip(&ps).map(|(x, p)| x * p).sum()
    }

    /// Coordinates of `a` in the integral basis.
    pub fn integral_coords(&self, a: &FieldElement) -> Vec<BigRational> {
        intmat::rat_row_times(&a.coeffs, &self.basis_inverse)
    }

    /// The element with the given integral-basis coordinates.
    pub fn from_integral_coords(&self, c: &[BigRational]) -> FieldElement {
        FieldElement { coeffs: intmat::rat_row_times(c, &self.integral_basis) }
    }

    fn is_integral_coords(&self, a: &FieldElement) -> bool {
        self.integral_coords(a).iter().all(|c| c.is_integer())
    }

    /// Membership in the order spanned by the integral basis, checked exactly.
    pub fn is_integral(&self, a: &FieldElement) -> bool {
        self.is_integral_coords(a)
    }

    pub fn is_unit(&self, a: &FieldElement) -> bool {
        self.is_integral(a) && self.norm(a).abs().is_one()
    }

    /// `a` and `1 - a` are both units.
    pub fn is_in_rcirc(&self, a: &FieldElement) -> bool {
        self.is_unit(a) && self.is_unit(&self.sub(&self.one(), a))
    }

    pub fn same_field(&self, other: &NumberField) -> bool {
        self.poly == other.poly && self.integral_basis == other.integral_basis
    }

    /// Numerical complex embeddings at `digits` decimal digits.
    pub fn embeddings(&self, digits: u32) -> Result<EmbeddingSet> {
        embeddings(self, PrecisionContext::new(digits)?)
    }
}

/// The complex embeddings `K -> C`, ordered real roots first (ascending), then
/// conjugate pairs by real part and imaginary modulus, the member with positive
/// imaginary part first.
#[derive(Clone, Debug)]
pub struct EmbeddingSet {
    ctx: PrecisionContext,
    roots: Vec<Complex>,
    pairing: Vec<usize>,
    radii: Vec<f64>,
    r1: usize,
    r2: usize,
}

impl EmbeddingSet {
    pub fn precision(&self) -> &PrecisionContext {
        &self.ctx
    }

    pub fn bits(&self) -> usize {
        self.ctx.bits()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn roots(&self) -> &[Complex] {
        &self.roots
    }

    pub fn root(&self, i: usize) -> &Complex {
        &self.roots[i]
    }

    /// Index of the complex-conjugate embedding.
    pub fn conj_index(&self, i: usize) -> usize {
        self.pairing[i]
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    pub fn is_real(&self, i: usize) -> bool {
        self.pairing[i] == i
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.r1, self.r2)
    }

    /// One index per conjugacy class: every real embedding and the first member of each pair.
    pub fn representatives(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.pairing[i] >= i).collect()
    }

    /// Certified inclusion radius around each root.
    pub fn inclusion_radii(&self) -> &[f64] {
        &self.radii
    }

    /// Horner evaluation of `a` at the `index`-th root.
    ///
    /// The rounding error is bounded by `2 n u sum_k |a_k| |z|^k` with `u = 2^-bits`,
    /// plus the root error times `|a'(z)|`.
    pub fn evaluate(&self, a: &FieldElement, index: usize) -> Complex {
        let p = self.bits();
        let z = &self.roots[index];
        let mut acc = Complex::zero(p);
        for c in a.coeffs.iter().rev() {
            let c = Complex::from_real(Real::from_rational(c, p));
            acc = &(&acc * z) + &c;
        }
        acc
    }

    pub fn evaluate_all(&self, a: &FieldElement) -> Vec<Complex> {
        let p = self.bits();
        let cs: Vec<Complex> = a.coeffs.iter().map(|c| Complex::from_real(Real::from_rational(c, p))).collect();
        self.roots
            .iter()
            .map(|z| cs.iter().rev().fold(Complex::zero(p), |acc, c| &(&acc * z) + c))
            .collect()
    }
}

fn horner_with_derivative(coeffs: &[Complex], z: &Complex) -> (Complex, Complex) {
    let p = z.prec();
    let mut f = Complex::zero(p);
    let mut df = Complex::zero(p);
    for c in coeffs.iter().rev() {
        df = &(&df * z) + &f;
        f = &(&f * z) + c;
    }
    (f, df)
}

/// Roots of the defining polynomial by Aberth-Ehrlich iteration from a perturbed
/// circle of starting points, followed by inclusion-disk certification.
pub fn embeddings(field: &NumberField, ctx: PrecisionContext) -> Result<EmbeddingSet> {
    let n = field.degree();
    let p = ctx.bits();
    let coeffs: Vec<Complex> =
        field.poly.iter().map(|c| Complex::from_real(Real::from_bigint(c, p))).collect();

    // Fujiwara bound on root moduli
    let fuji = field
        .poly
        .iter()
        .take(n)
        .enumerate()
        .map(|(k, c)| {
            let c = c.abs().to_f64().unwrap_or(f64::MAX);
            let e = (n - k) as f64;
            if k == 0 {
                (c / 2.0).powf(1.0 / e)
            } else {
                c.powf(1.0 / e)
            }
        })
        .fold(0.0f64, f64::max)
        * 2.0;
    let radius = fuji.max(0.5);

    let mut z: Vec<Complex> = (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * (k as f64) / (n as f64) + 0.4;
            Complex::from_f64(radius * t.cos(), radius * t.sin(), p)
        })
        .collect();

    let stop = Real::pow10(-(ctx.working_digits() as i64) + 2, p);
    let max_iter = 400 + 40 * n;
    let mut converged_rounds = 0;
    for _ in 0..max_iter {
        let mut max_step = Real::zero(p);
        for i in 0..n {
            let (f, df) = horner_with_derivative(&coeffs, &z[i]);
            if f.is_zero() {
                continue;
            }
            let w = &f / &df;
            let mut s = Complex::zero(p);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    s = &s + &(&z[i] - zj).recip();
                }
            }
            let denom = &Complex::one(p) - &(&w * &s);
            let step = if denom.is_zero() { w } else { &w / &denom };
            let mag = step.abs();
            let scale = z[i].abs().max(Real::one(p));
            let rel = &mag / &scale;
            if rel > max_step {
                max_step = rel;
            }
            z[i] = &z[i] - &step;
        }
        if !max_step.is_finite() {
            return Err(Error::Precision("root iteration diverged".into()));
        }
        if max_step < stop {
            converged_rounds += 1;
            if converged_rounds >= 2 {
                break;
            }
        }
    }
    if converged_rounds == 0 {
        return Err(Error::Precision(format!("root iteration did not converge at {} digits", ctx.digits)));
    }

    // inclusion radii n |f/f'| and residual certification
    let residual_bound = Real::pow10(-(ctx.digits as i64) + ctx.guard as i64, p);
    let accuracy_bound = Real::pow10(-(ctx.digits as i64) - (ctx.guard as i64) / 2, p);
    let nreal = Real::from_i64(n as i64, p);
    let rounding_floor = Real::pow10(-((ctx.digits + ctx.guard) as i64) + 1, p);
    let mut radii: Vec<Real> = Vec::with_capacity(n);
    for zi in &z {
        let (f, df) = horner_with_derivative(&coeffs, zi);
        if f.abs() >= residual_bound {
            return Err(Error::Precision(format!("root residual exceeds 1e-{}", ctx.digits - ctx.guard)));
        }
        if df.is_zero() {
            return Err(Error::Squarefree("derivative vanishes at a computed root".into()));
        }
        // floored at the rounding level of the working precision
        let floor = &rounding_floor * &(&Real::one(p) + &zi.abs());
        let rho = (&nreal * &(f.abs() / df.abs())).max(floor);
        if rho >= accuracy_bound {
            return Err(Error::Precision("root inclusion radius too large; increase precision".into()));
        }
        radii.push(rho);
    }
    let three = Real::from_i64(3, p);
    for i in 0..n {
        for j in i + 1..n {
            let gap = (&z[i] - &z[j]).abs();
            if gap <= &three * &(&radii[i] + &radii[j]) {
                return Err(Error::Precision("root separation below tolerance; increase precision".into()));
            }
        }
    }

    // real roots: the inclusion disk meets the real axis
    let is_real: Vec<bool> = (0..n).map(|i| z[i].im.abs() <= radii[i]).collect();
    let mut reals: Vec<(Real, f64)> = Vec::new();
    let mut uppers: Vec<(Complex, f64)> = Vec::new();
    let mut lower_count = 0;
    for i in 0..n {
        if is_real[i] {
            reals.push((z[i].re.clone(), radii[i].to_f64()));
        } else if z[i].im.is_positive() {
            uppers.push((z[i].clone(), radii[i].to_f64()));
        } else {
            lower_count += 1;
        }
    }
    if lower_count != uppers.len() {
        return Err(Error::Precision("complex roots do not pair up under conjugation".into()));
    }
    // each upper root must have a conjugate partner among the lower ones
    for (u, _) in &uppers {
        let partner = (0..n).filter(|&j| !is_real[j] && z[j].im.is_negative()).min_by(|&a, &b| {
            let da = (&z[a] - &u.conj()).abs();
            let db = (&z[b] - &u.conj()).abs();
            da.partial_cmp(&db).expect("finite")
        });
        let j = partner.expect("nonempty by count");
        let idx_u = (0..n).find(|&k| z[k] == *u).expect("present");
        if (&z[j] - &u.conj()).abs() > &radii[j] + &radii[idx_u] {
            return Err(Error::Precision("conjugate pairing failed the separation check".into()));
        }
    }

    reals.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
    uppers.sort_by(|a, b| {
        a.0.re.partial_cmp(&b.0.re).expect("finite").then(a.0.im.partial_cmp(&b.0.im).expect("finite"))
    });

    let r1 = reals.len();
    let r2 = uppers.len();
    let mut roots = Vec::with_capacity(n);
    let mut pairing = Vec::with_capacity(n);
    let mut out_radii = Vec::with_capacity(n);
    for (k, (re, rad)) in reals.into_iter().enumerate() {
        roots.push(Complex::new(re, Real::zero(p)));
        pairing.push(k);
        out_radii.push(rad);
    }
    for (k, (u, rad)) in uppers.into_iter().enumerate() {
        let a = r1 + 2 * k;
        roots.push(u.clone());
        roots.push(u.conj());
        pairing.push(a + 1);
        pairing.push(a);
        out_radii.push(rad);
        out_radii.push(rad);
    }
    debug_assert_eq!(r1 + 2 * r2, n);
    Ok(EmbeddingSet { ctx, roots, pairing, radii: out_radii, r1, r2 })
}
