//! Multiplicative relations among units, exterior squares of finitely generated
//! abelian groups, the Steinberg map `l -> l ^ (1 - l)` and its kernel.
//!
//! The group `G` is the subgroup of `R^x` generated by a caller-supplied list;
//! `Lambda^2(G)` is taken over `Z` and keeps its torsion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::{self, IntRow};
use crate::mp::{PrecisionContext, Real};
use crate::nf::{ElementRecord, FieldElement, NumberField};

pub const DEFAULT_HEIGHT_BOUND: u64 = 64;

/// Generators and the full lattice of exponent vectors `e` with `prod g_i^e_i = 1`.
#[derive(Clone, Debug)]
pub struct MultiplicativePresentation {
    field: NumberField,
    generators: Vec<FieldElement>,
    relation_basis: Vec<IntRow>,
    torsion_order: BigInt,
    torsion_element: IntRow,
    digits: u32,
    height_bound: u64,
}

/// Integer exponent vectors `e` (over the columns of `gens`) with `prod gens^e` a
/// root of unity of small height, found by LLL on the scaled log-embedding matrix
/// and then verified exactly.
fn find_relations(field: &NumberField, gens: &[FieldElement], ctx: PrecisionContext) -> Result<Vec<IntRow>> {
    let k = gens.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let emb = field.embeddings(ctx.digits)?;
    let reps = emb.representatives();
    let p = emb.bits();
    let sexp = (ctx.digits - ctx.guard.min(ctx.digits - 1)) as i64;
    let scale_int = num_traits::pow(BigInt::from(10), sexp as usize);
    let scale = Real::from_bigint(&scale_int, p);
    let tau = Real::pi(p) * Real::from_i64(2, p);
    let nr = reps.len();
    let width = k + 2 * nr;

    let mut rows: Vec<IntRow> = Vec::with_capacity(k + nr);
    for (i, g) in gens.iter().enumerate() {
        let vals = emb.evaluate_all(g);
        let mut row = vec![BigInt::zero(); width];
        row[i] = BigInt::one();
        for (c, &j) in reps.iter().enumerate() {
            row[k + c] = (&scale * &vals[j].ln_abs()).round_to_bigint();
            row[k + nr + c] = (&scale * &(vals[j].arg() / &tau)).round_to_bigint();
        }
        rows.push(row);
    }
    for c in 0..nr {
        let mut row = vec![BigInt::zero(); width];
        row[k + nr + c] = scale_int.clone();
        rows.push(row);
    }

    let reduced = intmat::lll(rows);
    let small = num_traits::pow(BigInt::from(10), (sexp / 2).max(2) as usize);
    let mut found = Vec::new();
    for r in reduced {
        let (ident, numeric) = r.split_at(k);
        if intmat::is_zero_row(ident) || numeric.iter().any(|x| x.abs() > small) {
            continue;
        }
        let cand = ident.to_vec();
        if !field.power_product(gens, &cand)?.eq(&field.one()) {
            return Err(Error::Precision(format!(
                "candidate relation {cand:?} failed exact verification; retry at higher precision"
            )));
        }
        found.push(cand);
    }
    Ok(intmat::hnf(&found, k))
}

fn inverse_unimodular(v: &[IntRow]) -> Vec<IntRow> {
    let rat: Vec<_> = v.iter().map(|r| r.iter().map(|x| num_rational::BigRational::from_integer(x.clone())).collect()).collect();
    intmat::rat_inverse(&rat)
        .expect("unimodular")
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.to_integer()).collect())
        .collect()
}

/// Finds the relation lattice of `elems` at `digits` decimal digits.
pub fn relation_lattice(field: &NumberField, elems: &[FieldElement], digits: u32) -> Result<MultiplicativePresentation> {
    let ctx = PrecisionContext::new(digits)?;
    for (i, g) in elems.iter().enumerate() {
        if !field.is_unit(g) {
            return Err(Error::Domain(format!("generator {i} is not a unit of the order")));
        }
    }
    let k = elems.len();
    let relation_basis = find_relations(field, elems, ctx)?;

    // torsion of Z^k / L: SNF invariants d_i > 1, generated by e_i V^-1
    let (torsion_order, torsion_element) = if relation_basis.is_empty() {
        (BigInt::one(), vec![BigInt::zero(); k])
    } else {
        let s = intmat::snf(&relation_basis, k);
        let vinv = inverse_unimodular(&s.v);
        let mut order = BigInt::one();
        let mut lcm = BigInt::one();
        let mut elem = vec![BigInt::zero(); k];
        for (i, d) in s.diag.iter().enumerate() {
            if d > &BigInt::one() {
                order *= d;
                lcm = lcm.lcm(d);
                elem = elem.iter().zip(&vinv[i]).map(|(a, b)| a + b).collect();
            }
        }
        if order != lcm {
            return Err(Error::Precision("torsion subgroup is not cyclic; relation lattice is unreliable".into()));
        }
        (order, elem)
    };
    let zeta = field.power_product(elems, &torsion_element)?;
    let w = torsion_order.to_i64().ok_or_else(|| Error::Domain("torsion order too large".into()))?;
    if field.pow(&zeta, w)? != field.one() {
        return Err(Error::Precision("torsion order failed exact verification".into()));
    }
    for q in prime_factors(w as u64) {
        if field.pow(&zeta, w / q as i64)? == field.one() {
            return Err(Error::Precision("torsion order failed exact verification".into()));
        }
    }
    Ok(MultiplicativePresentation {
        field: field.clone(),
        generators: elems.to_vec(),
        relation_basis,
        torsion_order,
        torsion_element,
        digits,
        height_bound: DEFAULT_HEIGHT_BOUND,
    })
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl MultiplicativePresentation {
    pub fn with_height_bound(mut self, bound: u64) -> Self {
        self.height_bound = bound;
        self
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn generators(&self) -> &[FieldElement] {
        &self.generators
    }

    pub fn relation_basis(&self) -> &[IntRow] {
        &self.relation_basis
    }

    pub fn torsion_order(&self) -> &BigInt {
        &self.torsion_order
    }

    /// Exponent vector of a generator of the torsion subgroup.
    pub fn torsion_generator(&self) -> &[BigInt] {
        &self.torsion_element
    }

    pub fn free_rank(&self) -> usize {
        self.generators.len() - self.relation_basis.len()
    }

    pub fn height_bound(&self) -> u64 {
        self.height_bound
    }

    /// Exponent vector of `a` in the generators, reduced modulo the relations.
    ///
    /// Found by appending `a` to the generators and reading off a relation in
    /// which `a` has exponent 1.
    pub fn coordinates(&self, a: &FieldElement) -> Result<IntRow> {
        let k = self.generators.len();
        if !self.field.is_unit(a) {
            return Err(Error::PresentationIncomplete("element is not a unit".into()));
        }
        let mut gens = Vec::with_capacity(k + 1);
        gens.push(a.clone());
        gens.extend(self.generators.iter().cloned());
        let ctx = PrecisionContext::new(self.digits)?;
        let rels = find_relations(&self.field, &gens, ctx)?;
        let Some(first) = rels.first().filter(|r| r[0].is_one()) else {
            return Err(Error::PresentationIncomplete(
                "element is not in the subgroup spanned by the generators".into(),
            ));
        };
        let coords: IntRow = first[1..].iter().map(|x| -x).collect();
        let coords = intmat::reduce_mod_hnf(&coords, &self.relation_basis);
        if coords.iter().any(|x| x.abs() > BigInt::from(self.height_bound)) {
            return Err(Error::PresentationIncomplete(format!(
                "coordinates exceed the exponent bound {}",
                self.height_bound
            )));
        }
        if self.field.power_product(&self.generators, &coords)? != *a {
            return Err(Error::Precision("coordinates failed exact verification".into()));
        }
        Ok(coords)
    }

    pub fn exterior_square(&self) -> ExteriorSquare {
        ExteriorSquare::new(self.generators.len(), &self.relation_basis)
    }
}

/// `Lambda^2(Z^k / L)` as `Z^m / (L ^ Z^k)`, `m = k(k-1)/2`, in Smith form.
#[derive(Clone, Debug, PartialEq)]
pub struct ExteriorSquare {
    k: usize,
    /// Per SNF coordinate: the modulus (0 for a free coordinate, 1 for a trivial one).
    moduli: Vec<BigInt>,
    v: Vec<IntRow>,
}

/// An element of [`ExteriorSquare`], reduced to its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WedgeClass {
    pub coords: IntRow,
}

impl WedgeClass {
    pub fn is_zero(&self) -> bool {
        intmat::is_zero_row(&self.coords)
    }
}

/// Index of `e_i ^ e_j`, `i < j`, in the lexicographic basis.
fn pair_index(k: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < k);
    i * (2 * k - i - 1) / 2 + (j - i - 1)
}

/// Coordinates of `a ^ b` in the basis `e_i ^ e_j`, `i < j`.
pub fn wedge_coords(a: &[BigInt], b: &[BigInt]) -> IntRow {
    let k = a.len();
    let mut out = vec![BigInt::zero(); k * k.saturating_sub(1) / 2];
    for i in 0..k {
        for j in i + 1..k {
            out[pair_index(k, i, j)] = &a[i] * &b[j] - &a[j] * &b[i];
        }
    }
    out
}

impl ExteriorSquare {
    /// `relations` rows are elements of `Z^k`.
    pub fn new(k: usize, relations: &[IntRow]) -> Self {
        let m = k * k.saturating_sub(1) / 2;
        let mut rows = Vec::new();
        for r in relations {
            for j in 0..k {
                let mut e = vec![BigInt::zero(); k];
                e[j] = BigInt::one();
                let w = wedge_coords(r, &e);
                if !intmat::is_zero_row(&w) {
                    rows.push(w);
                }
            }
        }
        let s = intmat::snf(&rows, m);
        let mut moduli = vec![BigInt::zero(); m];
        for (i, d) in s.diag.iter().enumerate() {
            moduli[i] = d.clone();
        }
        ExteriorSquare { k, moduli, v: s.v }
    }

    pub fn rank_of_base(&self) -> usize {
        self.k
    }

    pub fn dimension(&self) -> usize {
        self.moduli.len()
    }

    /// Invariant factors: the nontrivial cyclic orders, then `0` once per free summand.
    pub fn invariants(&self) -> Vec<BigInt> {
        let mut t: Vec<BigInt> = self.moduli.iter().filter(|d| **d > BigInt::one()).cloned().collect();
        t.extend(self.moduli.iter().filter(|d| d.is_zero()).cloned());
        t
    }

    pub fn free_rank(&self) -> usize {
        self.moduli.iter().filter(|d| d.is_zero()).count()
    }

    pub fn torsion(&self) -> Vec<BigInt> {
        self.moduli.iter().filter(|d| **d > BigInt::one()).cloned().collect()
    }

    /// SNF coordinates before reduction.
    fn raw(&self, x: &[BigInt]) -> IntRow {
        intmat::row_times(x, &self.v, self.dimension())
    }

    fn reduce(&self, mut y: IntRow) -> WedgeClass {
        for (c, d) in y.iter_mut().zip(&self.moduli) {
            if !d.is_zero() {
                *c = c.mod_floor(d);
            }
        }
        WedgeClass { coords: y }
    }

    /// Class of a vector in the basis `e_i ^ e_j`.
    pub fn class_of(&self, x: &[BigInt]) -> WedgeClass {
        self.reduce(self.raw(x))
    }

    pub fn wedge(&self, a: &[BigInt], b: &[BigInt]) -> WedgeClass {
        self.class_of(&wedge_coords(a, b))
    }

    pub fn add(&self, a: &WedgeClass, b: &WedgeClass) -> WedgeClass {
        self.reduce(a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect())
    }

    pub fn scale(&self, a: &WedgeClass, n: &BigInt) -> WedgeClass {
        self.reduce(a.coords.iter().map(|x| x * n).collect())
    }

    pub fn zero(&self) -> WedgeClass {
        WedgeClass { coords: vec![BigInt::zero(); self.dimension()] }
    }

    /// Basis of `{n : sum n_i c_i = 0}` for raw SNF coordinates `c_i`; with
    /// `mod_torsion` the torsion coordinates are ignored.
    fn kernel(&self, images: &[IntRow], mod_torsion: bool) -> Vec<IntRow> {
        let mc = images.len();
        if mc == 0 {
            return Vec::new();
        }
        let cols: Vec<usize> = (0..self.dimension())
            .filter(|&c| self.moduli[c].is_zero() || (!mod_torsion && self.moduli[c] > BigInt::one()))
            .collect();
        let mut rows: Vec<IntRow> = images.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        for (ci, &c) in cols.iter().enumerate() {
            if !self.moduli[c].is_zero() {
                let mut r = vec![BigInt::zero(); cols.len()];
                r[ci] = self.moduli[c].clone();
                rows.push(r);
            }
        }
        let ker = intmat::left_kernel(&rows, cols.len());
        let proj: Vec<IntRow> = ker.into_iter().map(|r| r[..mc].to_vec()).collect();
        intmat::hnf(&proj, mc)
    }
}

/// `sum n_i [lambda_i]` with each `lambda_i` in `R`-circ.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochElement {
    pub support: Vec<FieldElement>,
    pub multiplicities: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlochRecord {
    pub support: Vec<ElementRecord>,
    pub multiplicities: Vec<i64>,
}

impl BlochElement {
    pub fn new(support: Vec<FieldElement>, multiplicities: Vec<i64>) -> Result<Self> {
        if support.len() != multiplicities.len() {
            return Err(Error::Format("support and multiplicities differ in length".into()));
        }
        Ok(BlochElement { support, multiplicities })
    }

    pub fn zero() -> Self {
        BlochElement { support: Vec::new(), multiplicities: Vec::new() }
    }

    pub fn to_record(&self) -> BlochRecord {
        BlochRecord {
            support: self.support.iter().map(FieldElement::to_record).collect(),
            multiplicities: self.multiplicities.clone(),
        }
    }

    pub fn from_record(field: &NumberField, rec: &BlochRecord) -> Result<Self> {
        let support = rec.support.iter().map(|r| field.element_from_record(r)).collect::<Result<Vec<_>>>()?;
        BlochElement::new(support, rec.multiplicities.clone())
    }

    /// Formal sum; coincident support points are merged.
    pub fn add(&self, other: &BlochElement) -> BlochElement {
        let mut out = self.clone();
        for (l, n) in other.support.iter().zip(&other.multiplicities) {
            match out.support.iter().position(|s| s == l) {
                Some(i) => out.multiplicities[i] += n,
                None => {
                    out.support.push(l.clone());
                    out.multiplicities.push(*n);
                }
            }
        }
        out
    }

    /// Image in `Lambda^2(G)`; zero exactly when the element is in the Bloch group.
    pub fn wedge_image(&self, p: &MultiplicativePresentation, sq: &ExteriorSquare) -> Result<WedgeClass> {
        let mut acc = sq.zero();
        for (l, n) in self.support.iter().zip(&self.multiplicities) {
            let w = steinberg_image_in(l, p, sq)?;
            acc = sq.add(&acc, &sq.scale(&w, &BigInt::from(*n)));
        }
        Ok(acc)
    }
}

fn steinberg_raw(lambda: &FieldElement, p: &MultiplicativePresentation, sq: &ExteriorSquare) -> Result<IntRow> {
    let field = p.field();
    if !field.is_in_rcirc(lambda) {
        return Err(Error::Domain("element is not in R-circ (lambda and 1 - lambda must be units)".into()));
    }
    let a = p.coordinates(lambda)?;
    let b = p.coordinates(&field.sub(&field.one(), lambda))?;
    Ok(sq.raw(&wedge_coords(&a, &b)))
}

fn steinberg_image_in(lambda: &FieldElement, p: &MultiplicativePresentation, sq: &ExteriorSquare) -> Result<WedgeClass> {
    Ok(sq.reduce(steinberg_raw(lambda, p, sq)?))
}

/// Class of `lambda ^ (1 - lambda)` in `Lambda^2(G)`.
pub fn steinberg_image(lambda: &FieldElement, p: &MultiplicativePresentation) -> Result<WedgeClass> {
    steinberg_image_in(lambda, p, &p.exterior_square())
}

pub fn exterior_square(p: &MultiplicativePresentation) -> ExteriorSquare {
    p.exterior_square()
}

fn to_bloch(candidates: &[FieldElement], rows: Vec<IntRow>) -> Result<Vec<BlochElement>> {
    rows.into_iter()
        .map(|r| {
            let m = r
                .iter()
                .map(|x| x.to_i64().ok_or_else(|| Error::Domain("kernel multiplicity overflows i64".into())))
                .collect::<Result<Vec<_>>>()?;
            BlochElement::new(candidates.to_vec(), m)
        })
        .collect()
}

/// Lattice basis of the kernel of `Z^m -> Lambda^2(G)`, `e_i -> lambda_i ^ (1 - lambda_i)`.
pub fn bloch_kernel(candidates: &[FieldElement], p: &MultiplicativePresentation) -> Result<Vec<BlochElement>> {
    let sq = p.exterior_square();
    let images = candidates.iter().map(|l| steinberg_raw(l, p, &sq)).collect::<Result<Vec<_>>>()?;
    to_bloch(candidates, sq.kernel(&images, false))
}

/// Kernel of the same map into `Lambda^2(G)` modulo torsion. It contains
/// [`bloch_kernel`]; elements outside the latter vanish only up to torsion.
pub fn bloch_kernel_mod_torsion(candidates: &[FieldElement], p: &MultiplicativePresentation) -> Result<Vec<BlochElement>> {
    let sq = p.exterior_square();
    let images = candidates.iter().map(|l| steinberg_raw(l, p, &sq)).collect::<Result<Vec<_>>>()?;
    to_bloch(candidates, sq.kernel(&images, true))
}
