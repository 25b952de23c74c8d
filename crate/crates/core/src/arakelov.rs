//! Fractional ideals by Z-basis, hermitian metrics and the arithmetic degree.
//!
//! Metric values are squared norms. A metric is stored by its values at the
//! reference section `s0`, the first row of the ideal's HNF basis; any other
//! section `s` has `h_s(s) = metric[s] * |s(s / s0)|^2`.

use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::{self, RatRow};
use crate::mp::{parse_rational, Real};
use crate::nf::{EmbeddingSet, FieldElement, NumberField};

/// A Z-lattice in `K` that is an `R`-module; rows are integral-basis coordinates, in HNF.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalIdeal {
    field: NumberField,
    basis: Vec<RatRow>,
}

impl FractionalIdeal {
    /// From Z-spanning rows in integral-basis coordinates.
    pub fn from_basis(field: &NumberField, rows: &[RatRow]) -> Result<Self> {
        let n = field.degree();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Format(format!("ideal basis rows must have {n} entries")));
        }
        let basis = intmat::rat_hnf(rows, n);
        if basis.len() != n {
            return Err(Error::Format("ideal basis is not of full rank".into()));
        }
        let ideal = FractionalIdeal { field: field.clone(), basis };
        ideal.check_module()?;
        Ok(ideal)
    }

    /// The `R`-module generated by `gens`.
    pub fn from_generators(field: &NumberField, gens: &[FieldElement]) -> Result<Self> {
        if gens.iter().all(FieldElement::is_zero) {
            return Err(Error::Domain("the zero ideal is not invertible".into()));
        }
        let omega = field.integral_basis_elements();
        let rows: Vec<RatRow> =
            gens.iter().flat_map(|g| omega.iter().map(|w| field.integral_coords(&field.mul(g, w)))).collect();
        FractionalIdeal::from_basis(field, &rows)
    }

    pub fn principal(field: &NumberField, a: &FieldElement) -> Result<Self> {
        FractionalIdeal::from_generators(field, std::slice::from_ref(a))
    }

    pub fn unit(field: &NumberField) -> Self {
        FractionalIdeal { field: field.clone(), basis: intmat::rat_identity(field.degree()) }
    }

    fn check_module(&self) -> Result<()> {
        for b in self.basis_elements() {
            for w in self.field.integral_basis_elements() {
                if !self.contains(&self.field.mul(&b, &w)) {
                    return Err(Error::Format("ideal basis is not closed under multiplication by R".into()));
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn basis(&self) -> &[RatRow] {
        &self.basis
    }

    pub fn basis_elements(&self) -> Vec<FieldElement> {
        self.basis.iter().map(|r| self.field.from_integral_coords(r)).collect()
    }

    /// The reference section: first HNF basis vector.
    pub fn reference_section(&self) -> FieldElement {
        self.field.from_integral_coords(&self.basis[0])
    }

    /// Coordinates of `a` in the ideal basis.
    pub fn coordinates(&self, a: &FieldElement) -> RatRow {
        let inv = intmat::rat_inverse(&self.basis).expect("full rank");
        intmat::rat_row_times(&self.field.integral_coords(a), &inv)
    }

    pub fn contains(&self, a: &FieldElement) -> bool {
        self.coordinates(a).iter().all(BigRational::is_integer)
    }

    pub fn mul(&self, other: &FractionalIdeal) -> Result<FractionalIdeal> {
        if !self.field.same_field(&other.field) {
            return Err(Error::FieldMismatch("ideals over different fields".into()));
        }
        let a = self.basis_elements();
        let b = other.basis_elements();
        let rows: Vec<RatRow> =
            a.iter().flat_map(|x| b.iter().map(|y| self.field.integral_coords(&self.field.mul(x, y)))).collect();
        FractionalIdeal::from_basis(&self.field, &rows)
    }

    pub fn pow(&self, n: u32) -> Result<FractionalIdeal> {
        let mut acc = FractionalIdeal::unit(&self.field);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `a L`.
    pub fn scale(&self, a: &FieldElement) -> Result<FractionalIdeal> {
        if a.is_zero() {
            return Err(Error::Domain("cannot scale by zero".into()));
        }
        let rows: Vec<RatRow> =
            self.basis_elements().iter().map(|x| self.field.integral_coords(&self.field.mul(a, x))).collect();
        FractionalIdeal::from_basis(&self.field, &rows)
    }
}

/// `|det|` of the basis: the norm relative to `R`.
pub fn ideal_norm(l: &FractionalIdeal) -> BigRational {
    intmat::rat_det(&l.basis).abs()
}

/// `#(L / R s) = |N(s)| / N(L)`, a positive integer for `0 != s in L`.
pub fn index_quotient(l: &FractionalIdeal, s: &FieldElement) -> Result<BigRational> {
    if s.is_zero() {
        return Err(Error::Domain("section must be nonzero".into()));
    }
    if !l.contains(s) {
        return Err(Error::Membership("section does not lie in the ideal".into()));
    }
    let q = l.field.norm(s).abs() / ideal_norm(l);
    if !q.is_integer() || !q.is_positive() {
        return Err(Error::Arithmetic(format!("index {q} is not a positive integer")));
    }
    Ok(q)
}

/// Positive metric values at the reference section, equal on conjugate embeddings.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    values: Vec<Real>,
}

impl Metric {
    pub fn new(values: Vec<Real>, e: &EmbeddingSet) -> Result<Self> {
        if values.len() != e.len() {
            return Err(Error::Format(format!("metric needs {} values", e.len())));
        }
        if values.iter().any(|v| !v.is_positive()) {
            return Err(Error::Domain("metric values must be positive".into()));
        }
        for i in 0..e.len() {
            if values[i] != values[e.conj_index(i)] {
                return Err(Error::Domain("metric is not invariant under complex conjugation".into()));
            }
        }
        Ok(Metric { values })
    }

    pub fn values(&self) -> &[Real] {
        &self.values
    }
}

#[derive(Clone, Debug)]
pub struct MetrizedLineBundle {
    ideal: FractionalIdeal,
    metric: Metric,
    emb: EmbeddingSet,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleRecord {
    pub ideal_basis: Vec<Vec<String>>,
    pub metric: Vec<String>,
}

/// `|s(a)|^2` per embedding, copied across conjugate pairs so equality is exact.
fn abs_sq(a: &FieldElement, e: &EmbeddingSet) -> Vec<Real> {
    let mut out = vec![Real::zero(e.bits()); e.len()];
    for i in e.representatives() {
        let v = e.evaluate(a, i).norm_sqr();
        out[e.conj_index(i)] = v.clone();
        out[i] = v;
    }
    out
}

impl MetrizedLineBundle {
    pub fn new(ideal: FractionalIdeal, metric: Metric, emb: &EmbeddingSet) -> Result<Self> {
        if metric.values.len() != emb.len() || ideal.field.degree() != emb.len() {
            return Err(Error::FieldMismatch("metric, ideal and embeddings disagree in degree".into()));
        }
        Ok(MetrizedLineBundle { ideal, metric, emb: emb.clone() })
    }

    /// The metric induced from `h(1) = 1` on `K`: `h_s(s0) = |s(s0)|^2`.
    pub fn standard(ideal: FractionalIdeal, emb: &EmbeddingSet) -> Result<Self> {
        let values = abs_sq(&ideal.reference_section(), emb);
        let metric = Metric::new(values, emb)?;
        MetrizedLineBundle::new(ideal, metric, emb)
    }

    pub fn trivial(field: &NumberField, emb: &EmbeddingSet) -> Result<Self> {
        MetrizedLineBundle::standard(FractionalIdeal::unit(field), emb)
    }

    pub fn from_record(field: &NumberField, rec: &BundleRecord, emb: &EmbeddingSet) -> Result<Self> {
        let rows = rec
            .ideal_basis
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let ideal = FractionalIdeal::from_basis(field, &rows)?;
        let values = rec
            .metric
            .iter()
            .map(|s| parse_rational(s).map(|q| Real::from_rational(&q, emb.bits())))
            .collect::<Result<Vec<_>>>()?;
        MetrizedLineBundle::new(ideal, Metric::new(values, emb)?, emb)
    }

    pub fn ideal(&self) -> &FractionalIdeal {
        &self.ideal
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn embeddings(&self) -> &EmbeddingSet {
        &self.emb
    }

    /// `h_s(s)` for every embedding.
    pub fn metric_at(&self, s: &FieldElement) -> Result<Vec<Real>> {
        let f = &self.ideal.field;
        let ratio = f.div(s, &self.ideal.reference_section())?;
        Ok(abs_sq(&ratio, &self.emb).iter().zip(&self.metric.values).map(|(a, h)| a * h).collect())
    }

    fn with_metric(&self, ideal: FractionalIdeal, values: Vec<Real>) -> Result<Self> {
        MetrizedLineBundle::new(ideal, Metric::new(values, &self.emb)?, &self.emb)
    }

    /// `(a L, h')` with `h'(a s) = h(s)`; an isomorphic bundle.
    pub fn transport(&self, a: &FieldElement) -> Result<Self> {
        let ideal = self.ideal.scale(a)?;
        let f = &self.ideal.field;
        let s0 = ideal.reference_section();
        let back = f.div(&s0, &f.mul(a, &self.ideal.reference_section()))?;
        let values = abs_sq(&back, &self.emb).iter().zip(&self.metric.values).map(|(x, h)| x * h).collect();
        self.with_metric(ideal, values)
    }
}

/// `(1/n) (log #(L/Rs) - 1/2 sum log h_s(s))`, with `s` defaulting to the reference section.
pub fn arithmetic_degree(l: &MetrizedLineBundle, s: Option<&FieldElement>) -> Result<Real> {
    let s0 = l.ideal.reference_section();
    let s = s.unwrap_or(&s0);
    let idx = index_quotient(&l.ideal, s)?;
    let p = l.emb.bits();
    let h = l.metric_at(s)?;
    let log_h = h.iter().fold(Real::zero(p), |acc, v| acc + v.ln());
    let n = Real::from_i64(l.emb.len() as i64, p);
    Ok((Real::from_rational(&idx, p).ln() - log_h.half()) / n)
}

/// `A (x) B`: product ideal, metric multiplied with the reference sections matched up.
pub fn tensor(a: &MetrizedLineBundle, b: &MetrizedLineBundle) -> Result<MetrizedLineBundle> {
    if !a.ideal.field.same_field(&b.ideal.field) {
        return Err(Error::FieldMismatch("bundles over different fields".into()));
    }
    let f = &a.ideal.field;
    let ideal = a.ideal.mul(&b.ideal)?;
    let ratio = f.div(&ideal.reference_section(), &f.mul(&a.ideal.reference_section(), &b.ideal.reference_section()))?;
    let values = abs_sq(&ratio, &a.emb)
        .iter()
        .zip(a.metric.values.iter().zip(&b.metric.values))
        .map(|(r, (ha, hb))| &(r * ha) * hb)
        .collect();
    a.with_metric(ideal, values)
}

pub fn tensor_power(a: &MetrizedLineBundle, n: u32) -> Result<MetrizedLineBundle> {
    let mut acc = MetrizedLineBundle::trivial(&a.ideal.field, &a.emb)?;
    for _ in 0..n {
        acc = tensor(&acc, a)?;
    }
    Ok(acc)
}

/// Checks `v[conj(s)] == v[s]` exactly.
pub fn check_invariant(v: &[Real], e: &EmbeddingSet) -> Result<()> {
    if v.len() != e.len() {
        return Err(Error::Format(format!("expected {} values", e.len())));
    }
    if (0..e.len()).any(|i| v[i] != v[e.conj_index(i)]) {
        return Err(Error::Domain("vector is not invariant under complex conjugation".into()));
    }
    Ok(())
}

/// Multiplies `h_s` by `exp(-2 lambda_s)`.
pub fn twist_metric(l: &MetrizedLineBundle, lambda: &[Real]) -> Result<MetrizedLineBundle> {
    check_invariant(lambda, &l.emb)?;
    let two = Real::from_i64(-2, l.emb.bits());
    let values = l.metric.values.iter().zip(lambda).map(|(h, x)| h * &(&two * x).exp()).collect();
    l.with_metric(l.ideal.clone(), values)
}

impl BundleRecord {
    pub fn from_bundle(l: &MetrizedLineBundle, digits: usize) -> Self {
        BundleRecord {
            ideal_basis: l.ideal.basis.iter().map(|r| r.iter().map(crate::mp::format_rational).collect()).collect(),
            metric: l.metric.values.iter().map(|v| v.to_fixed(digits)).collect(),
        }
    }
}

/// `true` iff the ideals are equal; HNF makes this a comparison of bases.
pub fn same_ideal(a: &FractionalIdeal, b: &FractionalIdeal) -> bool {
    a.field.same_field(&b.field) && a.basis == b.basis
}
