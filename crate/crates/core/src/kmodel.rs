//! The graded model `R (+) M'(R)` of real K-theory of a number ring.
//!
//! Degree `1 - 2p` has one generator per real embedding when `p` is odd and one
//! per conjugate pair for every `p >= 1`. A pair generator is a single class
//! supported on both members of the pair, so it counts twice in `p_map`.
//! Values are in the Beilinson normalisation; no Borel factor is applied.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mp::{PrecisionContext, Real};
use crate::nf::{EmbeddingSet, FieldElement, NumberField};
use crate::regulator::{k3_regulator, unit_regulator};
use crate::relations::BlochElement;

pub const DEFAULT_MAX_P: u32 = 6;

/// Coefficient ring of [`GradedElement`]: exact rationals or multiprecision reals.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `n / d` in the same ring (and precision) as `self`.
    fn ratio_like(&self, n: i64, d: i64) -> Self;
    fn is_zero(&self) -> bool;
}

impl Scalar for BigRational {
    fn add(&self, o: &Self) -> Self {
        Add::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Sub::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Mul::mul(self, o)
    }
    fn neg(&self) -> Self {
        Neg::neg(self)
    }
    fn ratio_like(&self, n: i64, d: i64) -> Self {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Scalar for Real {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn ratio_like(&self, n: i64, d: i64) -> Self {
        Real::from_i64(n, self.prec()) / Real::from_i64(d, self.prec())
    }
    fn is_zero(&self) -> bool {
        Real::is_zero(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Generator {
    /// A real embedding, by index.
    Real(usize),
    /// A conjugate pair, by the indices of its two members (positive imaginary part first).
    Pair(usize, usize),
}

impl Generator {
    /// Number of embeddings the generator is supported on.
    pub fn orbit_size(&self) -> i64 {
        match self {
            Generator::Real(_) => 1,
            Generator::Pair(..) => 2,
        }
    }

    pub fn label(&self, degree: i64) -> String {
        match self {
            Generator::Real(i) => format!("x(s{i})_{{{degree}}}"),
            Generator::Pair(i, j) => format!("x(s{i},s{j})_{{{degree}}}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradedKAlgebra {
    signature: (usize, usize),
    degree: usize,
    max_p: u32,
    reals: Vec<usize>,
    pairs: Vec<(usize, usize)>,
}

/// A homogeneous element: `degree <= 0` and one coefficient per generator.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedElement<S> {
    pub degree: i64,
    pub coords: Vec<S>,
}

/// `build_model` from an embedding set; ordering follows the embeddings.
pub fn build_model(e: &EmbeddingSet, max_p: u32) -> GradedKAlgebra {
    let reals = (0..e.len()).filter(|&i| e.is_real(i)).collect();
    let pairs = e.representatives().into_iter().filter(|&i| !e.is_real(i)).map(|i| (i, e.conj_index(i))).collect();
    GradedKAlgebra { signature: e.signature(), degree: e.len(), max_p, reals, pairs }
}

/// Model for a field, computing its embeddings at a modest precision.
pub fn build_model_for_field(field: &NumberField, max_p: u32) -> Result<GradedKAlgebra> {
    Ok(build_model(&field.embeddings(PrecisionContext::MIN_DIGITS + 4)?, max_p))
}

fn p_of(d: i64) -> Option<u32> {
    (d < 0 && d % 2 != 0).then(|| ((1 - d) / 2) as u32)
}

impl GradedKAlgebra {
    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn max_p(&self) -> u32 {
        self.max_p
    }

    /// Degrees `1 - 2p` for `p = 1..=max_p`.
    pub fn degrees(&self) -> Vec<i64> {
        (1..=self.max_p as i64).map(|p| 1 - 2 * p).collect()
    }

    /// Generators of `M'` in degree `d`; empty for even or positive degrees. Degree 0 has
    /// the unit of the `R` summand and no generator list.
    pub fn generators(&self, d: i64) -> Vec<Generator> {
        let Some(p) = p_of(d) else { return Vec::new() };
        let mut out = Vec::new();
        if p % 2 == 1 {
            out.extend(self.reals.iter().map(|&i| Generator::Real(i)));
        }
        out.extend(self.pairs.iter().map(|&(i, j)| Generator::Pair(i, j)));
        out
    }

    /// Coordinate count of a homogeneous element of degree `d`.
    pub fn dim(&self, d: i64) -> usize {
        if d == 0 {
            1
        } else {
            self.generators(d).len()
        }
    }

    /// `r1 [p odd] + r2`.
    pub fn dim_mprime(&self, d: i64) -> Result<usize> {
        p_of(d).map(|_| self.generators(d).len()).ok_or_else(|| unsupported(d))
    }

    /// Dimension of `M(R)` in degree `d`, the rank of `K_{-d}(R)`.
    pub fn rank_in_degree(&self, d: i64) -> Result<usize> {
        if d == 0 {
            return Ok(1);
        }
        let m = self.dim_mprime(d)?;
        Ok(if d == -1 { m.saturating_sub(1) } else { m })
    }

    pub fn labels(&self, d: i64) -> Vec<String> {
        if d == 0 {
            return vec!["1".into()];
        }
        self.generators(d).iter().map(|g| g.label(d)).collect()
    }

    pub fn element<S: Scalar>(&self, degree: i64, coords: Vec<S>) -> Result<GradedElement<S>> {
        if degree > 0 {
            return Err(unsupported(degree));
        }
        if coords.len() != self.dim(degree) {
            return Err(Error::Format(format!(
                "degree {degree} needs {} coordinates, got {}",
                self.dim(degree),
                coords.len()
            )));
        }
        Ok(GradedElement { degree, coords })
    }

    /// `sum_s n(s)(b)` over all embeddings `s`.
    pub fn p_map<S: Scalar>(&self, b: &GradedElement<S>) -> Result<S> {
        if b.degree != -1 {
            return Err(Error::Domain(format!("p is defined in degree -1, not {}", b.degree)));
        }
        let gens = self.generators(-1);
        let first = &b.coords[0];
        let mut acc = first.ratio_like(0, 1);
        for (g, c) in gens.iter().zip(&b.coords) {
            acc = acc.add(&c.mul(&c.ratio_like(g.orbit_size(), 1)));
        }
        Ok(acc)
    }

    /// `b - p(b)/n sum_s x(s)`; lands in `ker p`.
    pub fn project_m<S: Scalar>(&self, b: &GradedElement<S>) -> Result<GradedElement<S>> {
        let pb = self.p_map(b)?;
        let shift = pb.mul(&pb.ratio_like(1, self.degree as i64));
        Ok(GradedElement { degree: -1, coords: b.coords.iter().map(|c| c.sub(&shift)).collect() })
    }

    /// Square-zero product: degree 0 acts by scalars, two negative degrees multiply to 0.
    pub fn multiply<S: Scalar>(&self, a: &GradedElement<S>, b: &GradedElement<S>) -> GradedElement<S> {
        if a.degree == 0 {
            let s = &a.coords[0];
            return GradedElement { degree: b.degree, coords: b.coords.iter().map(|c| s.mul(c)).collect() };
        }
        if b.degree == 0 {
            let s = &b.coords[0];
            return GradedElement { degree: a.degree, coords: a.coords.iter().map(|c| c.mul(s)).collect() };
        }
        // two odd negative degrees land in an even degree, which is zero
        let d = a.degree + b.degree;
        debug_assert_eq!(self.dim(d), 0);
        GradedElement { degree: d, coords: Vec::new() }
    }

    pub fn one<S: Scalar>(&self, like: &S) -> GradedElement<S> {
        GradedElement { degree: 0, coords: vec![like.ratio_like(1, 1)] }
    }

    /// Unit regulator written on the degree `-1` generators.
    pub fn embed_unit(&self, field: &NumberField, u: &FieldElement, e: &EmbeddingSet) -> Result<GradedElement<Real>> {
        let v = unit_regulator(field, u, e)?;
        let coords = self
            .generators(-1)
            .iter()
            .map(|g| match *g {
                Generator::Real(i) | Generator::Pair(i, _) => v.values[i].clone(),
            })
            .collect();
        Ok(GradedElement { degree: -1, coords })
    }

    /// K3 regulator written on the degree `-3` generators, read at the `im > 0` member of each pair.
    pub fn embed_k3(&self, x: &BlochElement, e: &EmbeddingSet, ctx: &PrecisionContext) -> Result<GradedElement<Real>> {
        let v = k3_regulator(x, e, ctx)?;
        let coords = self
            .generators(-3)
            .iter()
            .map(|g| match *g {
                Generator::Pair(i, _) => v.values[i].clone(),
                Generator::Real(_) => unreachable!("no real generators in degree -3"),
            })
            .collect();
        Ok(GradedElement { degree: -3, coords })
    }
}

fn unsupported(d: i64) -> Error {
    Error::Domain(format!("unsupported degree {d}; expected 0 or 1 - 2p with p >= 1"))
}

#[derive(Clone, Debug, Serialize)]
pub struct RankRow {
    pub degree: i64,
    pub dim_mprime: usize,
    pub rank: usize,
    pub generators: Vec<String>,
}

/// Dimension table for degrees `-1, -3, ..., 1 - 2 max_p`.
pub fn rank_table(m: &GradedKAlgebra) -> Vec<RankRow> {
    m.degrees()
        .into_iter()
        .map(|d| RankRow {
            degree: d,
            dim_mprime: m.dim_mprime(d).expect("odd degree"),
            rank: m.rank_in_degree(d).expect("odd degree"),
            generators: m.labels(d),
        })
        .collect()
}
