//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use numring_core::arakelov::{arithmetic_degree, index_quotient, tensor, twist_metric};
use numring_core::dilog::bloch_wigner;
use numring_core::heights::{c_hat_height, height_scaled_trivial, scaling_alpha};
use numring_core::intmat::{in_lattice, IntRow};
use numring_core::kmodel::{build_model_for_field, GradedElement, GradedKAlgebra};
use numring_core::regulator::{k3_regulator, unit_regulator};
use numring_core::relations::{bloch_kernel, relation_lattice, wedge_coords, ExteriorSquare};
use numring_core::{
    BlochElement, Complex, EmbeddingSet, FieldElement, FractionalIdeal, MetrizedLineBundle, NumberField,
    PrecisionContext, Real, Result,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DIGITS: u32 = 50;
const SEED: u64 = 20_261_016;

const IDENTITY_TOL: i64 = 40;
const FIVE_TERM_TOL: i64 = 35;
const IDENTITY_POINTS: usize = 200;
const FIVE_TERM_PAIRS: usize = 100;
const IDENTITY_BUDGET: Duration = Duration::from_secs(30);
const AVOID_RADIUS: f64 = 1e-3;

const GRADIENT_POINTS: usize = 20;
const GRADIENT_STEP: i64 = 8;
const GRADIENT_REL_TOL: f64 = 1e-6;
const GRADIENT_DIGITS: u32 = 40;

const NUMERIC_TOL: i64 = 40;

type Check = fn() -> Result<Outcome>;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

fn sci(x: &Real) -> String {
    let v = x.to_f64();
    if v == 0.0 {
        "0".into()
    } else {
        format!("{v:.1e}")
    }
}

fn tol(digits: i64, p: usize) -> Real {
    Real::pow10(-digits, p)
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED)
}

/// Uniform in the annulus `0.1 <= |z| <= 3`, away from 0, 1 and the cut `[1, inf)`.
fn sample_z(r: &mut ChaCha8Rng) -> (f64, f64) {
    loop {
        let m = r.gen_range(0.1..=3.0f64);
        let t = r.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let (x, y) = (m * t.cos(), m * t.sin());
        let near_one = ((x - 1.0).powi(2) + y * y).sqrt() < AVOID_RADIUS;
        let near_cut = x >= 1.0 - AVOID_RADIUS && y.abs() < AVOID_RADIUS;
        if !near_one && !near_cut {
            return (x, y);
        }
    }
}

fn criterion_1() -> Result<Outcome> {
    let ctx = PrecisionContext::new(DIGITS)?;
    let p = ctx.bits();
    let d = |z: &Complex| bloch_wigner(z, &ctx);
    let one = Complex::one(p);
    let start = Instant::now();
    let mut r = rng();
    let mut worst = Real::zero(p);
    for _ in 0..IDENTITY_POINTS {
        let (x, y) = sample_z(&mut r);
        let z = Complex::from_f64(x, y, p);
        let dz = d(&z);
        let res = [
            (&d(&(&one - &z).recip()) - &dz).abs(),
            (&d(&z.recip()) + &dz).abs(),
            (&d(&z.conj()) + &dz).abs(),
        ];
        for v in res {
            worst = worst.max(v);
        }
    }
    let mut worst5 = Real::zero(p);
    let mut pairs = 0;
    while pairs < FIVE_TERM_PAIRS {
        let (a, b) = sample_z(&mut r);
        let (c, e) = sample_z(&mut r);
        let x = Complex::from_f64(a, b, p);
        let y = Complex::from_f64(c, e, p);
        let xy = &x * &y;
        let den = &one - &xy;
        if den.abs() < Real::from_f64(AVOID_RADIUS, p) {
            continue;
        }
        let s = [
            d(&x),
            d(&y),
            d(&(&(&one - &x) / &den)),
            d(&den),
            d(&(&(&one - &y) / &den)),
        ];
        let total = s.iter().fold(Real::zero(p), |acc, v| acc + v);
        worst5 = worst5.max(total.abs());
        pairs += 1;
    }
    let elapsed = start.elapsed();
    let pass = worst < tol(IDENTITY_TOL, p) && worst5 < tol(FIVE_TERM_TOL, p) && elapsed < IDENTITY_BUDGET;
    Ok(Outcome::new(
        pass,
        format!(
            "dilogarithm identities: {IDENTITY_POINTS} points max {} (< 1e-{IDENTITY_TOL}), five-term {FIVE_TERM_PAIRS} pairs max {} (< 1e-{FIVE_TERM_TOL}), {:.1} s (< {} s)",
            sci(&worst),
            sci(&worst5),
            elapsed.as_secs_f64(),
            IDENTITY_BUDGET.as_secs()
        ),
    ))
}

fn criterion_2() -> Result<Outcome> {
    let ctx = PrecisionContext::new(GRADIENT_DIGITS)?;
    let p = ctx.bits();
    let h = Real::pow10(-GRADIENT_STEP, p);
    let two_h = &h + &h;
    let one = Complex::one(p);
    let mut r = rng();
    let mut worst = 0.0f64;
    for _ in 0..GRADIENT_POINTS {
        let (x, y) = sample_z(&mut r);
        let z = Complex::from_f64(x, y, p);
        let hx = Complex::new(h.clone(), Real::zero(p));
        let hy = Complex::new(Real::zero(p), h.clone());
        let fd_x = (bloch_wigner(&(&z + &hx), &ctx) - bloch_wigner(&(&z - &hx), &ctx)) / &two_h;
        let fd_y = (bloch_wigner(&(&z + &hy), &ctx) - bloch_wigner(&(&z - &hy), &ctx)) / &two_h;
        // log|z| d arg(1 - z) - log|1 - z| d arg z, with d arg w = Im(dw / w)
        let lz = z.ln_abs();
        let l1 = (&one - &z).ln_abs();
        let inv_1mz = (&one - &z).recip();
        let inv_z = z.recip();
        let an_x = &(&lz * &(-&inv_1mz.im)) - &(&l1 * &inv_z.im);
        let an_y = &(&lz * &(-&inv_1mz.re)) - &(&l1 * &inv_z.re);
        for (fd, an) in [(fd_x, an_x), (fd_y, an_y)] {
            let scale = an.abs().to_f64().max(1e-12);
            worst = worst.max((&fd - &an).abs().to_f64() / scale);
        }
    }
    Ok(Outcome::new(
        worst < GRADIENT_REL_TOL,
        format!(
            "Bloch-Wigner differential: {GRADIENT_POINTS} points, step 1e-{GRADIENT_STEP}, P = {GRADIENT_DIGITS}, max relative error {worst:.1e} (< {GRADIENT_REL_TOL:.0e})"
        ),
    ))
}

/// `D(sigma lambda)` at the upper-half-plane roots of `x^(n+1) - x + 1`, keyed by real part.
const FAMILY_ORACLE: &[(u32, f64, &str)] = &[
    (2, 0.662358978622, "0.942707362776927720921299603092211647590327105766883159"),
    (3, -0.727136084491, "0.5948411871587238752375564791277918622989240105226927692"),
    (3, 0.727136084491, "0.8464060064670400549986849020525596589111407456250719799"),
    (4, -0.18123244447, "0.85017140678615241159526548983969016177801780659290229"),
    (4, 0.764884433601, "0.7643753799085723104692459174443073018708265259680671495"),
    (5, -0.945402333311, "0.3891308525502049320322217371085525871196723705188285442"),
    (5, 0.154735144497, "0.9607965387949136528804382987216914424544224473217491522"),
    (5, 0.790667188814, "0.6971596953940478270563895088854828363625227429639806"),
];

fn parse_real(s: &str, p: usize) -> Real {
    Real::from_rational(&numring_core::mp::parse_rational(s).expect("oracle literal"), p)
}

fn criterion_3() -> Result<Outcome> {
    let mut pass = true;
    let mut notes = Vec::new();
    for n in 2u32..=5 {
        let mut poly = vec![0i64; n as usize + 2];
        poly[0] = 1;
        poly[1] = -1;
        poly[n as usize + 1] = 1;
        let k = NumberField::from_poly(&poly)?;
        let lam = k.generator();
        let one_minus = k.sub(&k.one(), &lam);
        let mu = k.inverse(&one_minus)?;
        let gens = vec![k.from_int(-1), lam.clone(), one_minus, mu.clone(), k.sub(&k.one(), &mu)];
        let pres = relation_lattice(&k, &gens, DIGITS)?;
        let kernel = bloch_kernel(&[lam.clone(), mu.clone()], &pres)?;
        let rows: Vec<IntRow> =
            kernel.iter().map(|b| b.multiplicities.iter().map(|&m| BigInt::from(m)).collect()).collect();
        let in_kernel = in_lattice(&[BigInt::from(n), BigInt::one()], &rows);

        let e = k.embeddings(DIGITS)?;
        let ctx = *e.precision();
        let p = e.bits();
        let x = BlochElement::new(vec![lam, mu], vec![n as i64, 1])?;
        let v = k3_regulator(&x, &e, &ctx)?;
        let mut worst = Real::zero(p);
        let mut exact = true;
        let mut matched = 0;
        for i in 0..e.len() {
            let j = e.conj_index(i);
            if e.is_real(i) {
                exact &= v.values[i].is_zero();
                continue;
            }
            exact &= v.values[j] == -&v.values[i];
            if !e.root(i).im.is_positive() {
                continue;
            }
            let re = e.root(i).re.to_f64();
            let Some((_, _, d)) = FAMILY_ORACLE.iter().find(|(m, r, _)| *m == n && (r - re).abs() < 1e-9) else {
                continue;
            };
            matched += 1;
            let want = -(&Real::from_i64(n as i64 + 1, p) * &parse_real(d, p));
            worst = worst.max((&v.values[i] - &want).abs());
        }
        let expected_pairs = FAMILY_ORACLE.iter().filter(|(m, ..)| *m == n).count();
        let ok = in_kernel && exact && matched == expected_pairs && worst < tol(NUMERIC_TOL, p);
        pass &= ok;
        notes.push(format!(
            "n={n}: ({n},1) in kernel {in_kernel}, {matched}/{expected_pairs} pairs max {}, exact zeros/antisymmetry {exact}",
            sci(&worst)
        ));
    }
    Ok(Outcome::new(pass, format!("Bloch family regulators (< 1e-{NUMERIC_TOL}): {}", notes.join("; "))))
}

fn criterion_4() -> Result<Outcome> {
    // (d, a, b): the unit a + b x in Z[x]/(x^2 - d)
    let quadratic: &[(i64, i64, i64)] = &[
        (2, 1, 1),
        (3, 2, 1),
        (5, 2, 1),
        (6, 5, 2),
        (7, 8, 3),
        (10, 3, 1),
        (11, 10, 3),
        (13, 18, 5),
        (14, 15, 4),
        (15, 4, 1),
    ];
    let mut fields = Vec::new();
    for &(d, a, b) in quadratic {
        let k = NumberField::from_poly(&[-d, 0, 1])?;
        let u = k.element_from_ints(&[a, b]);
        fields.push((format!("Q(sqrt {d})"), k, vec![u]));
    }
    let k = NumberField::from_poly(&[1, -1, 0, 1])?;
    let lam = k.generator();
    let one_minus = k.sub(&k.one(), &lam);
    let mut units = vec![k.from_int(-1), lam.clone(), one_minus.clone()];
    for (a, b) in [(-1i64, 0i64), (2, -3), (5, 2), (-4, 7), (0, -6), (9, 9)] {
        let g = [lam.clone(), one_minus.clone()];
        units.push(k.power_product(&g, &[BigInt::from(a), BigInt::from(b)])?);
    }
    fields.push(("x^3 - x + 1".into(), k, units));

    let mut worst: Option<Real> = None;
    let mut count = 0;
    let mut all_units = true;
    for (_, k, units) in &fields {
        let e = k.embeddings(DIGITS)?;
        for u in units {
            all_units &= k.is_unit(u);
            let v = unit_regulator(k, u, &e)?;
            let s = v.values.iter().fold(Real::zero(e.bits()), |acc, x| acc + x).abs();
            worst = Some(match worst {
                None => s,
                Some(w) => w.max(s),
            });
            count += 1;
        }
    }
    let worst = worst.expect("fixtures");
    let pass = all_units && worst < tol(NUMERIC_TOL, worst.prec());
    Ok(Outcome::new(
        pass,
        format!("product formula: {count} units in {} fields, max |sum log|s(u)|| {} (< 1e-{NUMERIC_TOL})", fields.len(), sci(&worst)),
    ))
}

struct Fixture {
    field: usize,
    generators: Vec<Vec<i64>>,
    twist: Vec<f64>,
}

/// Fields `Q`, `Q(i)`, `Q(sqrt 2)`.
fn fixture_fields() -> Result<Vec<(NumberField, EmbeddingSet)>> {
    [&[0i64, 1][..], &[1, 0, 1], &[-2, 0, 1]]
        .iter()
        .map(|p| {
            let k = NumberField::from_poly(p)?;
            let e = k.embeddings(DIGITS)?;
            Ok((k, e))
        })
        .collect()
}

fn fixtures() -> Vec<Fixture> {
    let f = |field, generators: &[&[i64]], twist: &[f64]| Fixture {
        field,
        generators: generators.iter().map(|g| g.to_vec()).collect(),
        twist: twist.to_vec(),
    };
    vec![
        f(0, &[&[3]], &[0.0]),
        f(0, &[&[12], &[18]], &[0.25]),
        f(0, &[&[5]], &[-1.5]),
        f(1, &[&[1, 1]], &[0.0, 0.0]),
        f(1, &[&[2, 1]], &[0.7, 0.7]),
        f(1, &[&[3], &[6, 3]], &[-0.2, -0.2]),
        f(1, &[&[5], &[2, 1]], &[1.1, 1.1]),
        f(2, &[&[0, 1]], &[0.0, 0.0]),
        f(2, &[&[3, 1]], &[0.3, -0.4]),
        f(2, &[&[7], &[3, 1]], &[-0.6, 0.9]),
    ]
}

fn build_bundle(fields: &[(NumberField, EmbeddingSet)], fx: &Fixture) -> Result<MetrizedLineBundle> {
    let (k, e) = &fields[fx.field];
    let gens: Vec<FieldElement> = fx.generators.iter().map(|g| k.element_from_ints(g)).collect();
    let ideal = FractionalIdeal::from_generators(k, &gens)?;
    let l = MetrizedLineBundle::standard(ideal, e)?;
    let lambda: Vec<Real> = fx.twist.iter().map(|&t| Real::from_f64(t, e.bits())).collect();
    twist_metric(&l, &lambda)
}

fn random_element(k: &NumberField, r: &mut ChaCha8Rng) -> FieldElement {
    loop {
        let c: Vec<i64> = (0..k.degree()).map(|_| r.gen_range(-5..=5)).collect();
        let a = k.element_from_ints(&c);
        if !a.is_zero() {
            return a;
        }
    }
}

/// A nonzero element of the ideal.
fn random_section(l: &MetrizedLineBundle, r: &mut ChaCha8Rng) -> FieldElement {
    let k = l.ideal().field();
    loop {
        let mut s = k.zero();
        for b in l.ideal().basis_elements() {
            let c = BigRational::from_integer(BigInt::from(r.gen_range(-4..=4i64)));
            s = k.add(&s, &k.scale(&b, &c));
        }
        if !s.is_zero() {
            return s;
        }
    }
}

const SECTIONS_PER_BUNDLE: usize = 6;

fn criterion_5() -> Result<Outcome> {
    let fields = fixture_fields()?;
    let fxs = fixtures();
    let mut r = rng();
    let mut worst = Real::zero(64);
    let mut integral = true;
    for fx in &fxs {
        let l = build_bundle(&fields, fx)?;
        let base = arithmetic_degree(&l, None)?;
        for _ in 0..SECTIONS_PER_BUNDLE {
            let s = random_section(&l, &mut r);
            let idx = index_quotient(l.ideal(), &s)?;
            integral &= idx.is_integer() && idx >= BigRational::one();
            worst = worst.max((&arithmetic_degree(&l, Some(&s))? - &base).abs());
        }
    }
    let pass = integral && worst < tol(NUMERIC_TOL, worst.prec());
    Ok(Outcome::new(
        pass,
        format!(
            "degree independent of section: {} bundles x {SECTIONS_PER_BUNDLE} sections, max spread {} (< 1e-{NUMERIC_TOL}), indices integral {integral}",
            fxs.len(),
            sci(&worst)
        ),
    ))
}

const TENSOR_PAIRS: usize = 20;
const TRANSPORTS: usize = 10;

fn criterion_6() -> Result<Outcome> {
    let fields = fixture_fields()?;
    let fxs = fixtures();
    let bundles = fxs.iter().map(|fx| build_bundle(&fields, fx)).collect::<Result<Vec<_>>>()?;
    let mut r = rng();
    let mut worst_t = Real::zero(64);
    for _ in 0..TENSOR_PAIRS {
        let i = r.gen_range(0..bundles.len());
        let same: Vec<usize> = (0..bundles.len()).filter(|&j| fxs[j].field == fxs[i].field).collect();
        let j = same[r.gen_range(0..same.len())];
        let (a, b) = (&bundles[i], &bundles[j]);
        let d = &(&arithmetic_degree(&tensor(a, b)?, None)? - &arithmetic_degree(a, None)?) - &arithmetic_degree(b, None)?;
        worst_t = worst_t.max(d.abs());
    }
    let mut worst_a = Real::zero(64);
    for _ in 0..TRANSPORTS {
        let l = &bundles[r.gen_range(0..bundles.len())];
        let a = random_element(l.ideal().field(), &mut r);
        let moved = l.transport(&a)?;
        worst_a = worst_a.max((&arithmetic_degree(&moved, None)? - &arithmetic_degree(l, None)?).abs());
    }
    let t = tol(NUMERIC_TOL, worst_t.prec());
    let pass = worst_t < t && worst_a < t;
    Ok(Outcome::new(
        pass,
        format!(
            "degree additive and isomorphism invariant: {TENSOR_PAIRS} tensor pairs max {}, {TRANSPORTS} transports max {} (< 1e-{NUMERIC_TOL})",
            sci(&worst_t),
            sci(&worst_a)
        ),
    ))
}

fn criterion_7() -> Result<Outcome> {
    let fields = fixture_fields()?;
    let mut worst = Real::zero(64);
    let mut count = 0;
    for fx in fixtures().iter().filter(|fx| fx.generators.len() == 1) {
        let l = build_bundle(&fields, fx)?;
        let g = fields[fx.field].0.element_from_ints(&fx.generators[0]);
        worst = worst.max((&c_hat_height(&l, 1, &g)? - &arithmetic_degree(&l, None)?).abs());
        count += 1;
    }
    let k = NumberField::from_poly(&[5, 0, 1])?;
    let e = k.embeddings(DIGITS)?;
    let ideal = FractionalIdeal::from_generators(&k, &[k.from_int(2), k.element_from_ints(&[1, 1])])?;
    let mut non_principal = Vec::new();
    for t in [0.0, 0.3, -1.25] {
        let l = twist_metric(&MetrizedLineBundle::standard(ideal.clone(), &e)?, &[Real::from_f64(t, e.bits()), Real::from_f64(t, e.bits())])?;
        let diff = (&c_hat_height(&l, 2, &k.from_int(2))? - &arithmetic_degree(&l, None)?).abs();
        non_principal.push(sci(&diff));
        worst = worst.max(diff);
    }
    let pass = worst < tol(NUMERIC_TOL, worst.prec());
    Ok(Outcome::new(
        pass,
        format!(
            "height equals arithmetic degree: {count} principal fixtures, (2, 1 + sqrt -5) with N = 2 gaps [{}], max {} (< 1e-{NUMERIC_TOL})",
            non_principal.join(", "),
            sci(&worst)
        ),
    ))
}

fn criterion_8() -> Result<Outcome> {
    let fields = fixture_fields()?;
    let mut r = rng();
    let mut worst_h = Real::zero(64);
    for (_, e) in &fields {
        for _ in 0..5 {
            let lambda = invariant_vector(e, &mut r);
            let f: Vec<Real> = lambda.iter().map(|x| (&Real::from_i64(-2, e.bits()) * x).exp()).collect();
            let mean = lambda.iter().fold(Real::zero(e.bits()), |a, x| a + x) / Real::from_i64(e.len() as i64, e.bits());
            worst_h = worst_h.max((&height_scaled_trivial(&f, e)? - &mean).abs());
        }
    }
    let mut worst_a = Real::zero(64);
    for fx in fixtures() {
        let l = build_bundle(&fields, &fx)?;
        let e = l.embeddings().clone();
        let lambda = invariant_vector(&e, &mut r);
        let twisted = twist_metric(&l, &lambda)?;
        let f: Vec<Real> =
            twisted.metric().values().iter().zip(l.metric().values()).map(|(a, b)| a / b).collect();
        let alpha = scaling_alpha(1, &f, &e)?;
        let mean = alpha.iter().fold(Real::zero(e.bits()), |a, x| a + x) / Real::from_i64(e.len() as i64, e.bits());
        let diff = &arithmetic_degree(&twisted, None)? - &arithmetic_degree(&l, None)?;
        worst_a = worst_a.max((&diff - &mean).abs());
    }
    let t = tol(NUMERIC_TOL, worst_h.prec());
    Ok(Outcome::new(
        worst_h < t && worst_a < t,
        format!(
            "height of rescaled trivial bundle max {}, scaling class vs degree change max {} (< 1e-{NUMERIC_TOL})",
            sci(&worst_h),
            sci(&worst_a)
        ),
    ))
}

/// Random conjugation-invariant vector with entries in `[-2, 2]`.
fn invariant_vector(e: &EmbeddingSet, r: &mut ChaCha8Rng) -> Vec<Real> {
    let mut v = vec![Real::zero(e.bits()); e.len()];
    for i in e.representatives() {
        let x = Real::from_f64(r.gen_range(-2.0..2.0), e.bits());
        v[e.conj_index(i)] = x.clone();
        v[i] = x;
    }
    v
}

const MAX_P: u32 = 6;

fn rational_element(m: &GradedKAlgebra, d: i64, r: &mut ChaCha8Rng) -> GradedElement<BigRational> {
    let coords = (0..m.dim(d)).map(|_| BigRational::new(r.gen_range(-9..=9).into(), r.gen_range(1..=5).into())).collect();
    m.element(d, coords).expect("shape")
}

fn criterion_9() -> Result<Outcome> {
    let polys: &[(&str, &[i64])] = &[
        ("Q", &[0, 1]),
        ("Q(i)", &[1, 0, 1]),
        ("Q(sqrt 2)", &[-2, 0, 1]),
        ("Q(sqrt 5)", &[-5, 0, 1]),
        ("Q(sqrt -5)", &[5, 0, 1]),
        ("x^3 - x + 1", &[1, -1, 0, 1]),
    ];
    let mut r = rng();
    let mut ranks_ok = true;
    let mut algebra_ok = true;
    let mut rows = Vec::new();
    for (name, poly) in polys {
        let k = NumberField::from_poly(poly)?;
        let m = build_model_for_field(&k, MAX_P)?;
        let (r1, r2) = m.signature();
        let mut got = Vec::new();
        for p in 1..=MAX_P as i64 {
            let d = 1 - 2 * p;
            let want = match p {
                1 => r1 + r2 - 1,
                _ if p % 2 == 0 => r2,
                _ => r1 + r2,
            };
            let have = m.rank_in_degree(d)?;
            ranks_ok &= have == want;
            got.push(have.to_string());
        }
        rows.push(format!("{name} [{}]", got.join(" ")));

        let mut degrees = vec![0];
        degrees.extend(m.degrees());
        for &da in &degrees {
            for &db in &degrees {
                let a = rational_element(&m, da, &mut r);
                let b = rational_element(&m, db, &mut r);
                let ab = m.multiply(&a, &b);
                let ba = m.multiply(&b, &a);
                let sign = if (da * db) % 2 == 0 { 1 } else { -1 };
                let ba_signed: Vec<BigRational> = ba.coords.iter().map(|c| c * BigRational::from_integer(sign.into())).collect();
                algebra_ok &= ab.degree == da + db && ab.coords == ba_signed;
                if da < 0 && db < 0 {
                    algebra_ok &= ab.coords.iter().all(Zero::is_zero);
                }
            }
        }
        let b = rational_element(&m, -1, &mut r);
        let pb = m.project_m(&b)?;
        algebra_ok &= m.project_m(&pb)? == pb && m.p_map(&pb)?.is_zero();
    }
    Ok(Outcome::new(
        ranks_ok && algebra_ok,
        format!(
            "rank table for p <= {MAX_P}: {}; square-zero, graded commutativity, projection idempotent {algebra_ok}",
            rows.join(", ")
        ),
    ))
}

const GROUPS: usize = 25;

fn random_unimodular(k: usize, r: &mut ChaCha8Rng) -> Vec<IntRow> {
    let mut m = numring_core::intmat::identity(k);
    if k < 2 {
        return m;
    }
    for _ in 0..3 * k {
        let i = r.gen_range(0..k);
        let j = (i + r.gen_range(1..k)) % k;
        let c = BigInt::from(r.gen_range(-3..=3i64));
        let row_j = m[j].clone();
        for (x, y) in m[i].iter_mut().zip(&row_j) {
            *x += &c * y;
        }
        if r.gen_bool(0.3) {
            m.swap(i, j);
        }
    }
    m
}

/// `Lambda^2 (Z^f + Z/t)` from the structure theorem.
fn lambda2_oracle(f: usize, t: u64) -> Vec<BigInt> {
    let mut out = if t > 1 { vec![BigInt::from(t); f] } else { Vec::new() };
    out.extend(vec![BigInt::zero(); f * f.saturating_sub(1) / 2]);
    out
}

fn criterion_10() -> Result<Outcome> {
    let mut r = rng();
    let mut matched = 0;
    let mut laws = true;
    let mut mismatch = None;
    for _ in 0..GROUPS {
        let f = r.gen_range(0..=3usize);
        let t: u64 = r.gen_range(1..=12);
        let extra = r.gen_range(0..=2usize);
        let k = f + usize::from(t > 1) + extra;
        if k == 0 {
            matched += 1;
            continue;
        }
        // diagonal presentation: free part, then Z/t, then generators killed outright
        let mut diag: Vec<IntRow> = Vec::new();
        let mut col = f;
        if t > 1 {
            let mut row = vec![BigInt::zero(); k];
            row[col] = BigInt::from(t);
            diag.push(row);
            col += 1;
        }
        for c in col..k {
            let mut row = vec![BigInt::zero(); k];
            row[c] = BigInt::one();
            diag.push(row);
        }
        let v = random_unimodular(k, &mut r);
        let mut rels = numring_core::intmat::mat_mul(&diag, &v, k);
        if !rels.is_empty() {
            let u = random_unimodular(rels.len(), &mut r);
            rels = numring_core::intmat::mat_mul(&u, &rels, k);
            let redundant: IntRow = rels.iter().fold(vec![BigInt::zero(); k], |acc, row| {
                acc.iter().zip(row).map(|(a, b)| a + b * BigInt::from(2)).collect()
            });
            rels.push(redundant);
        }
        let sq = ExteriorSquare::new(k, &rels);
        let want = lambda2_oracle(f, t);
        if sq.invariants() == want {
            matched += 1;
        } else if mismatch.is_none() {
            mismatch = Some(format!("f={f} t={t}: got {:?} want {want:?}", sq.invariants()));
        }

        let vec_of = |r: &mut ChaCha8Rng| -> IntRow { (0..k).map(|_| BigInt::from(r.gen_range(-6..=6i64))).collect() };
        for _ in 0..4 {
            let (a, b, c) = (vec_of(&mut r), vec_of(&mut r), vec_of(&mut r));
            let ab: IntRow = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            laws &= sq.wedge(&ab, &c) == sq.add(&sq.wedge(&a, &c), &sq.wedge(&b, &c));
            laws &= sq.wedge(&a, &a).is_zero();
            laws &= sq.add(&sq.wedge(&a, &b), &sq.wedge(&b, &a)).is_zero();
            laws &= sq.class_of(&wedge_coords(&a, &b)) == sq.wedge(&a, &b);
            // relations wedge to zero
            for rel in &rels {
                laws &= sq.wedge(rel, &c).is_zero();
            }
        }
    }
    let pass = matched == GROUPS && laws;
    let mut detail = format!("exterior square: {matched}/{GROUPS} groups match the oracle, bilinearity/antisymmetry {laws}");
    if let Some(m) = mismatch {
        detail.push_str(&format!(" (first mismatch {m})"));
    }
    Ok(Outcome::new(pass, detail))
}

fn main() -> ExitCode {
    // `cargo test` passes harness flags; a name filter skips the suite unless it matches.
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !filters.is_empty() && !filters.iter().any(|f| "acceptance".contains(f.as_str())) {
        return ExitCode::SUCCESS;
    }
    let criteria: [(u32, Check); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = 0;
    for (n, run) in criteria {
        let out = run().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        if !out.pass {
            failed += 1;
        }
        println!("{} criterion {n:>2}: {}", if out.pass { "PASS" } else { "FAIL" }, out.detail);
    }
    println!("acceptance: {}/10 passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
