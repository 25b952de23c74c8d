//! The height on the unit-like part of differential `K^0(Spec R)`, computed
//! through `x^N = 1 + a(f)` and `h(1 + a(f)) = s(f)`.

use crate::arakelov::{check_invariant, same_ideal, tensor_power, FractionalIdeal, MetrizedLineBundle};
use crate::error::{Error, Result};
use crate::mp::Real;
use crate::nf::{EmbeddingSet, FieldElement};
use crate::regulator::mean;

/// A class `x` with `x^N = 1 + a(f)`; `f` is stored per embedding.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffK0Class {
    pub order_hint: u32,
    pub scaling_vector: Vec<Real>,
    pub provenance: Option<String>,
}

impl DiffK0Class {
    pub fn new(order_hint: u32, scaling_vector: Vec<Real>, e: &EmbeddingSet) -> Result<Self> {
        if order_hint == 0 {
            return Err(Error::Domain("order hint must be positive".into()));
        }
        check_invariant(&scaling_vector, e)?;
        Ok(DiffK0Class { order_hint, scaling_vector, provenance: None })
    }

    /// Product of classes. Orders are combined through their product.
    pub fn mul(&self, other: &DiffK0Class) -> DiffK0Class {
        let (n, m) = (self.order_hint, other.order_hint);
        let nm = Real::from_i64(n as i64, self.prec());
        let mm = Real::from_i64(m as i64, self.prec());
        // x^(nm) = 1 + a(m f), y^(nm) = 1 + a(n g)
        let f = self.scaling_vector.iter().zip(&other.scaling_vector).map(|(a, b)| &(a * &mm) + &(b * &nm)).collect();
        DiffK0Class { order_hint: n * m, scaling_vector: f, provenance: None }
    }

    fn prec(&self) -> usize {
        self.scaling_vector.first().map_or(64, Real::prec)
    }
}

/// `s(f) / N`.
pub fn height(x: &DiffK0Class) -> Result<Real> {
    let s = mean(&x.scaling_vector)?;
    let p = s.prec();
    Ok(s / Real::from_i64(x.order_hint as i64, p))
}

fn check_positive(f: &[Real]) -> Result<()> {
    if f.iter().any(|v| !v.is_positive()) {
        return Err(Error::Domain("scaling factors must be positive".into()));
    }
    Ok(())
}

/// `-1/(2n) sum log f(s)`: the height of the trivial bundle with metric scaled by `f`.
pub fn height_scaled_trivial(f: &[Real], e: &EmbeddingSet) -> Result<Real> {
    check_positive(f)?;
    check_invariant(f, e)?;
    let logs: Vec<Real> = f.iter().map(Real::ln).collect();
    Ok(-mean(&logs)?.half())
}

/// `s -> -(rank/2) log f(s)`: the class of the cycle difference under rescaling by `f`.
pub fn scaling_alpha(rank: u32, f: &[Real], e: &EmbeddingSet) -> Result<Vec<Real>> {
    if rank == 0 {
        return Err(Error::Domain("rank must be positive".into()));
    }
    check_positive(f)?;
    check_invariant(f, e)?;
    Ok(f.iter()
        .map(|v| {
            let r = Real::from_i64(rank as i64, v.prec());
            -(&r * &v.ln()).half()
        })
        .collect())
}

/// The class `c-hat(L)` for a bundle whose `N`-th power is trivialised by `generator`.
pub fn c_hat_class(l: &MetrizedLineBundle, n: u32, generator: &FieldElement) -> Result<DiffK0Class> {
    if n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    let field = l.ideal().field();
    let ln = l.ideal().pow(n)?;
    let principal = FractionalIdeal::principal(field, generator)
        .map_err(|_| Error::Principality("generator must be nonzero".into()))?;
    if !same_ideal(&ln, &principal) {
        return Err(Error::Principality(format!("generator does not generate the {n}-th power of the ideal")));
    }
    let bundle_n = tensor_power(l, n)?;
    let h = bundle_n.metric_at(generator)?;
    let f = h.iter().map(|v| -v.ln().half()).collect();
    let mut x = DiffK0Class::new(n, f, l.embeddings())?;
    x.provenance = Some("metrized line bundle".into());
    Ok(x)
}

/// `h(c-hat(L))`; equals the arithmetic degree of `L`.
pub fn c_hat_height(l: &MetrizedLineBundle, n: u32, generator: &FieldElement) -> Result<Real> {
    height(&c_hat_class(l, n, generator)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arakelov::{arithmetic_degree, twist_metric};
    use crate::nf::NumberField;

    fn close(a: &Real, b: &Real, digits: i64) -> bool {
        (a - b).abs() < Real::pow10(-digits, a.prec())
    }

    #[test]
    fn height_examples() {
        let g = NumberField::from_poly(&[1, 0, 1]).unwrap();
        let e = g.embeddings(30).unwrap();
        let p = e.bits();
        let zero = DiffK0Class::new(1, vec![Real::zero(p); 2], &e).unwrap();
        assert!(height(&zero).unwrap().is_zero());
        let c = DiffK0Class::new(1, vec![Real::from_i64(3, p); 2], &e).unwrap();
        assert_eq!(height(&c).unwrap(), Real::from_i64(3, p));
        let k = NumberField::from_poly(&[-2, 0, 1]).unwrap();
        let e2 = k.embeddings(30).unwrap();
        let v = DiffK0Class::new(2, vec![Real::from_i64(5, p); 2], &e2).unwrap();
        assert_eq!(height(&v).unwrap(), Real::from_f64(2.5, p));
    }

    #[test]
    fn scaled_trivial_examples() {
        let qq = NumberField::from_poly(&[0, 1]).unwrap();
        let e = qq.embeddings(40).unwrap();
        let p = e.bits();
        assert!(height_scaled_trivial(&[Real::one(p)], &e).unwrap().is_zero());
        let h = height_scaled_trivial(&[Real::from_i64(4, p)], &e).unwrap();
        assert!(close(&h, &-Real::ln2(p), 45));
        assert!(height_scaled_trivial(&[Real::zero(p)], &e).is_err());
    }

    #[test]
    fn alpha_examples() {
        let qq = NumberField::from_poly(&[0, 1]).unwrap();
        let e = qq.embeddings(40).unwrap();
        let p = e.bits();
        assert!(scaling_alpha(3, &[Real::one(p)], &e).unwrap()[0].is_zero());
        let e2 = Real::from_i64(2, p).exp();
        assert!(close(&scaling_alpha(1, &[e2], &e).unwrap()[0], &-Real::one(p), 45));
        let a = scaling_alpha(2, &[Real::from_i64(4, p)], &e).unwrap();
        assert!(close(&a[0], &-Real::from_i64(4, p).ln(), 45));
    }

    #[test]
    fn c_hat_matches_degree_principal() {
        let qq = NumberField::from_poly(&[0, 1]).unwrap();
        let e = qq.embeddings(50).unwrap();
        let two = MetrizedLineBundle::standard(FractionalIdeal::principal(&qq, &qq.from_int(2)).unwrap(), &e).unwrap();
        let h = c_hat_height(&two, 1, &qq.from_int(2)).unwrap();
        assert!(close(&h, &arithmetic_degree(&two, None).unwrap(), 55));
        assert!(matches!(c_hat_height(&two, 1, &qq.from_int(3)), Err(Error::Principality(_))));
        let triv = MetrizedLineBundle::trivial(&qq, &e).unwrap();
        assert!(c_hat_height(&triv, 1, &qq.one()).unwrap().is_zero());
    }

    #[test]
    fn c_hat_matches_degree_non_principal() {
        let k = NumberField::from_poly(&[5, 0, 1]).unwrap();
        let e = k.embeddings(50).unwrap();
        let ideal = FractionalIdeal::from_generators(&k, &[k.from_int(2), k.element_from_ints(&[1, 1])]).unwrap();
        let l = MetrizedLineBundle::standard(ideal, &e).unwrap();
        let p = e.bits();
        let lam = vec![Real::from_f64(0.3, p); 2];
        let l = twist_metric(&l, &lam).unwrap();
        let h = c_hat_height(&l, 2, &k.from_int(2)).unwrap();
        assert!(close(&h, &arithmetic_degree(&l, None).unwrap(), 45));
        assert!(matches!(c_hat_height(&l, 1, &k.from_int(2)), Err(Error::Principality(_))));
    }
}
