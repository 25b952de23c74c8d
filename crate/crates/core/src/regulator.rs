//! Regulator vectors indexed by all complex embeddings.
//!
//! Unit vectors hold `log|s(u)|`. K3 vectors hold the coefficient of `i` in
//! `-sum n_l i D(s(l))`, so a stored value `v` stands for `i v`; this is the
//! sign convention under which `n[l] + [1/(1-l)]` has regulator
//! `(n+1)(-D(s(l)))`.

use serde::{Deserialize, Serialize};

use crate::dilog::bloch_wigner;
use crate::error::{Error, Result};
use crate::mp::{PrecisionContext, Real};
use crate::nf::{EmbeddingSet, FieldElement, NumberField};
use crate::relations::{BlochElement, MultiplicativePresentation};

/// Documented in every output record.
pub const EMBEDDING_ORDER: &str =
    "real roots ascending, then conjugate pairs by (re, |im|) with the im > 0 member first";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weight {
    Unit,
    K3,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegulatorVector {
    pub weight: Weight,
    pub values: Vec<Real>,
    pairing: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegulatorRecord {
    pub schema: u32,
    pub weight: Weight,
    pub values: Vec<String>,
    pub embedding_order: String,
}

impl RegulatorVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    /// Build from raw values; the caller guarantees equivariance.
    pub fn from_values(weight: Weight, values: Vec<Real>, pairing: Vec<usize>) -> Self {
        RegulatorVector { weight, values, pairing }
    }

    pub fn add(&self, other: &RegulatorVector) -> Result<RegulatorVector> {
        if self.weight != other.weight || self.pairing != other.pairing {
            return Err(Error::Domain("regulator vectors live in different targets".into()));
        }
        Ok(RegulatorVector {
            weight: self.weight,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
            pairing: self.pairing.clone(),
        })
    }

    /// K3 values in the `2 pi i` normalisation.
    pub fn over_two_pi(&self) -> Vec<Real> {
        self.values
            .iter()
            .map(|v| {
                let tau = Real::pi(v.prec()) * Real::from_i64(2, v.prec());
                v / &tau
            })
            .collect()
    }

    pub fn to_record(&self, digits: usize) -> RegulatorRecord {
        RegulatorRecord {
            schema: 1,
            weight: self.weight,
            values: self.values.iter().map(|v| v.to_fixed(digits)).collect(),
            embedding_order: EMBEDDING_ORDER.into(),
        }
    }
}

/// `s -> log|s(u)|`, identical on conjugate embeddings.
pub fn unit_regulator(field: &NumberField, u: &FieldElement, e: &EmbeddingSet) -> Result<RegulatorVector> {
    if !field.is_unit(u) {
        return Err(Error::Domain("element is not a unit".into()));
    }
    let n = e.len();
    let mut values = vec![Real::zero(e.bits()); n];
    for i in e.representatives() {
        let v = e.evaluate(u, i).ln_abs();
        values[e.conj_index(i)] = v.clone();
        values[i] = v;
    }
    Ok(RegulatorVector { weight: Weight::Unit, values, pairing: e.pairing().to_vec() })
}

/// `s -> -sum n_l D(s(l))`; exactly zero at real embeddings and exactly odd under conjugation.
pub fn k3_regulator(x: &BlochElement, e: &EmbeddingSet, ctx: &PrecisionContext) -> Result<RegulatorVector> {
    let n = e.len();
    let p = ctx.bits();
    let mut values = vec![Real::zero(p); n];
    let tol = Real::pow10(-(e.precision().digits as i64), e.bits());
    for i in e.representatives() {
        if e.is_real(i) {
            continue;
        }
        let mut acc = Real::zero(p);
        for (l, m) in x.support.iter().zip(&x.multiplicities) {
            if *m == 0 {
                continue;
            }
            let z = e.evaluate(l, i);
            let one = crate::mp::Complex::one(z.prec());
            if z.abs() < tol || (&z - &one).abs() < tol {
                return Err(Error::Precision("support point embeds numerically at 0 or 1".into()));
            }
            acc = acc - Real::from_i64(*m, p) * bloch_wigner(&z, ctx);
        }
        values[e.conj_index(i)] = -&acc;
        values[i] = acc;
    }
    Ok(RegulatorVector { weight: Weight::K3, values, pairing: e.pairing().to_vec() })
}

/// [`k3_regulator`] after checking exactly that `x` lies in the Bloch kernel of `p`.
pub fn k3_regulator_checked(
    x: &BlochElement,
    p: &MultiplicativePresentation,
    e: &EmbeddingSet,
    ctx: &PrecisionContext,
) -> Result<RegulatorVector> {
    if !x.wedge_image(p, &p.exterior_square())?.is_zero() {
        return Err(Error::Domain("element is not in the kernel of the Steinberg map".into()));
    }
    k3_regulator(x, e, ctx)
}

/// Mean over all embeddings; defined on unit-weight vectors only.
pub fn s_map(v: &RegulatorVector) -> Result<Real> {
    if v.weight != Weight::Unit {
        return Err(Error::Domain("s-map is defined on unit-weight vectors".into()));
    }
    mean(&v.values)
}

pub(crate) fn mean(values: &[Real]) -> Result<Real> {
    let Some(first) = values.first() else {
        return Err(Error::Domain("empty vector".into()));
    };
    let p = first.prec();
    let sum = values.iter().fold(Real::zero(p), |s, v| s + v);
    Ok(sum / Real::from_i64(values.len() as i64, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_examples() {
        let k = NumberField::from_poly(&[-2, 0, 1]).unwrap();
        let e = k.embeddings(50).unwrap();
        let v = unit_regulator(&k, &k.from_int(-1), &e).unwrap();
        assert!(v.values.iter().all(Real::is_zero));
        let u = unit_regulator(&k, &k.element_from_ints(&[1, 1]), &e).unwrap();
        // roots ordered -sqrt2, sqrt2
        assert!(u.values[1].to_fixed(20).starts_with("0.881373587019543"));
        assert!(s_map(&u).unwrap().abs() < Real::pow10(-45, e.bits()));
        assert!(matches!(unit_regulator(&k, &k.from_int(3), &e), Err(Error::Domain(_))));
    }

    #[test]
    fn cubic_unit_sums_to_zero() {
        let k = NumberField::from_poly(&[1, -1, 0, 1]).unwrap();
        let e = k.embeddings(50).unwrap();
        let v = unit_regulator(&k, &k.generator(), &e).unwrap();
        assert_eq!(v.values[1], v.values[2]);
        let s = v.values.iter().fold(Real::zero(e.bits()), |s, x| s + x);
        assert!(s.abs() < Real::pow10(-40, e.bits()));
    }

    #[test]
    fn s_map_examples() {
        let p = 128;
        let v = RegulatorVector::from_values(Weight::Unit, vec![Real::from_i64(2, p), Real::zero(p), Real::zero(p)], vec![0, 1, 2]);
        let third = Real::from_i64(2, p) / Real::from_i64(3, p);
        assert_eq!(s_map(&v).unwrap(), third);
        let c = RegulatorVector::from_values(Weight::Unit, vec![Real::from_i64(5, p); 2], vec![1, 0]);
        assert_eq!(s_map(&c).unwrap(), Real::from_i64(5, p));
        let k3 = RegulatorVector::from_values(Weight::K3, vec![Real::zero(p)], vec![0]);
        assert!(matches!(s_map(&k3), Err(Error::Domain(_))));
    }

    #[test]
    fn k3_zero_element() {
        let k = NumberField::from_poly(&[1, -1, 0, 1]).unwrap();
        let e = k.embeddings(30).unwrap();
        let ctx = PrecisionContext::new(30).unwrap();
        let v = k3_regulator(&BlochElement::zero(), &e, &ctx).unwrap();
        assert!(v.values.iter().all(Real::is_zero));
    }

    #[test]
    fn k3_family_example_n2() {
        let k = NumberField::from_poly(&[1, -1, 0, 1]).unwrap();
        let e = k.embeddings(50).unwrap();
        let ctx = PrecisionContext::new(50).unwrap();
        let lam = k.generator();
        let mu = k.inverse(&k.sub(&k.one(), &lam)).unwrap();
        let x = BlochElement::new(vec![lam, mu], vec![2, 1]).unwrap();
        let v = k3_regulator(&x, &e, &ctx).unwrap();
        assert!(v.values[0].is_zero());
        assert_eq!(v.values[2], -v.values[1].clone());
        // 3 (-D) at the root with positive imaginary part, mpmath reference
        let want = crate::mp::parse_rational("-2.828122088330783162763898809276634942770981317300649477").unwrap();
        let want = Real::from_rational(&want, ctx.bits());
        assert!((&v.values[1] - &want).abs() < Real::pow10(-50, ctx.bits()));
    }

    #[test]
    fn totally_real_support_vanishes() {
        let k = NumberField::from_poly(&[-1, -1, 1]).unwrap();
        let e = k.embeddings(30).unwrap();
        let ctx = PrecisionContext::new(30).unwrap();
        let x = BlochElement::new(vec![k.generator()], vec![2]).unwrap();
        assert!(k3_regulator(&x, &e, &ctx).unwrap().values.iter().all(Real::is_zero));
    }
}
