//! Exact finite rings given by Cayley tables: `Z_n` and `M_k(F_p)`.
//!
//! Elements are indices into the tables. For `M_k(F_p)` the index is the
//! base-`p` number whose digits are the entries in row-major order, with
//! entry (1,1) most significant, so index order is lexicographic order.

use std::fmt;

use super::{IdealRepresentation, Ring, RingDescriptor, RingKind, Side};
use crate::error::{Error, Result};

/// Largest ring the table backend will build.
pub const MAX_FINITE_SIZE: usize = 1024;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Elt(pub u16);

impl Elt {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone)]
pub struct FiniteRing {
    descriptor: RingDescriptor,
    size: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    transpose: Vec<u16>,
    unit_inverse: Vec<Option<u16>>,
    zero: u16,
    one: u16,
    labels: Vec<String>,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing({})", self.descriptor)
    }
}

impl FiniteRing {
    pub fn new(descriptor: RingDescriptor) -> Result<Self> {
        match descriptor.kind {
            RingKind::ModularIntegers { n } => Self::modular(n),
            RingKind::MatrixOverPrimeField { p, k } => Self::prime_matrix(p, k),
            _ => Err(Error::InvalidDescriptor(format!("{descriptor} is not a finite ring"))),
        }
    }

    pub fn modular(n: u32) -> Result<Self> {
        let descriptor = RingDescriptor::modular(n)?;
        let size = n as usize;
        cap(size, &descriptor)?;
        let table = |f: &dyn Fn(usize, usize) -> usize| -> Vec<u16> {
            (0..size * size).map(|k| f(k / size, k % size) as u16).collect()
        };
        let add = table(&|x, y| (x + y) % size);
        let mul = table(&|x, y| (x * y) % size);
        let neg = (0..size).map(|x| ((size - x) % size) as u16).collect();
        let labels = (0..size).map(|x| x.to_string()).collect();
        Ok(Self::finish(descriptor, size, add, mul, neg, (0..size as u16).collect(), 0, 1 % size as u16, labels))
    }

    pub fn prime_matrix(p: u32, k: usize) -> Result<Self> {
        let descriptor = RingDescriptor::prime_matrix(p, k)?;
        let p = p as usize;
        let cells = k * k;
        let size = (p as f64).powi(cells as i32);
        if size > MAX_FINITE_SIZE as f64 {
            return Err(Error::CapExceeded(format!(
                "{descriptor} has {size} elements, limit {MAX_FINITE_SIZE}"
            )));
        }
        let size = size as usize;
        let decode = |mut x: usize| -> Vec<usize> {
            let mut d = vec![0; cells];
            for slot in d.iter_mut().rev() {
                *slot = x % p;
                x /= p;
            }
            d
        };
        let encode = |d: &[usize]| -> u16 { d.iter().fold(0, |acc, &v| acc * p + v) as u16 };
        let mats: Vec<Vec<usize>> = (0..size).map(decode).collect();
        let mut add = vec![0u16; size * size];
        let mut mul = vec![0u16; size * size];
        for x in 0..size {
            for y in 0..size {
                let (a, b) = (&mats[x], &mats[y]);
                let s: Vec<usize> = a.iter().zip(b).map(|(u, v)| (u + v) % p).collect();
                let mut m = vec![0; cells];
                for i in 0..k {
                    for j in 0..k {
                        m[i * k + j] = (0..k).map(|l| a[i * k + l] * b[l * k + j]).sum::<usize>() % p;
                    }
                }
                add[x * size + y] = encode(&s);
                mul[x * size + y] = encode(&m);
            }
        }
        let neg = mats
            .iter()
            .map(|a| encode(&a.iter().map(|v| (p - v) % p).collect::<Vec<_>>()))
            .collect();
        let transpose = mats
            .iter()
            .map(|a| encode(&(0..cells).map(|c| a[(c % k) * k + c / k]).collect::<Vec<_>>()))
            .collect();
        let ident: Vec<usize> = (0..cells).map(|c| usize::from(c / k == c % k)).collect();
        let labels = mats
            .iter()
            .map(|a| {
                let rows: Vec<String> = a
                    .chunks(k)
                    .map(|r| format!("[{}]", r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
                    .collect();
                format!("[{}]", rows.join(","))
            })
            .collect();
        Ok(Self::finish(descriptor, size, add, mul, neg, transpose, 0, encode(&ident), labels))
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(
        descriptor: RingDescriptor,
        size: usize,
        add: Vec<u16>,
        mul: Vec<u16>,
        neg: Vec<u16>,
        transpose: Vec<u16>,
        zero: u16,
        one: u16,
        labels: Vec<String>,
    ) -> Self {
        let mut unit_inverse = vec![None; size];
        for x in 0..size {
            if unit_inverse[x].is_some() {
                continue;
            }
            if let Some(y) = (0..size).find(|&y| mul[x * size + y] == one && mul[y * size + x] == one) {
                unit_inverse[x] = Some(y as u16);
                unit_inverse[y] = Some(x as u16);
            }
        }
        FiniteRing { descriptor, size, add, mul, neg, transpose, unit_inverse, zero, one, labels }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elt(&self, index: usize) -> Elt {
        assert!(index < self.size, "index {index} out of range");
        Elt(index as u16)
    }

    pub fn all(&self) -> impl Iterator<Item = Elt> + '_ {
        (0..self.size as u16).map(Elt)
    }

    pub fn label(&self, x: Elt) -> &str {
        &self.labels[x.index()]
    }

    /// Raw table lookups, for callers that sweep the whole ring.
    pub fn add_table(&self) -> &[u16] {
        &self.add
    }

    pub fn mul_table(&self) -> &[u16] {
        &self.mul
    }

    pub fn units(&self) -> Vec<Elt> {
        self.all().filter(|x| self.unit_inverse[x.index()].is_some()).collect()
    }

    pub fn idempotents(&self) -> Vec<Elt> {
        self.all().filter(|x| self.is_idempotent(x)).collect()
    }

    /// Reads an element literal: an integer for `Z_n`; for `M_k(F_p)` a
    /// nested array, `Eij` (1-based matrix unit), `I` or `0`.
    pub fn parse_element(&self, text: &str) -> Result<Elt> {
        let t = text.trim();
        if t == "I" || t == "1" {
            return Ok(Elt(self.one));
        }
        if t == "0" {
            return Ok(Elt(self.zero));
        }
        match self.descriptor.kind {
            RingKind::ModularIntegers { n } => {
                let v: i64 = t.parse().map_err(|_| Error::Parse(format!("bad residue `{t}`")))?;
                Ok(Elt(v.rem_euclid(n as i64) as u16))
            }
            RingKind::MatrixOverPrimeField { p, k } => {
                let entries: Vec<i64> = if let Some((i, j)) = parse_unit_literal(t, k)? {
                    (0..k * k).map(|c| i64::from(c == i * k + j)).collect()
                } else {
                    let m = super::mat::parse_nested::<super::Rational>(t)?;
                    if m.shape() != (k, k) {
                        return Err(Error::DimensionMismatch(format!(
                            "expected {k}x{k} matrix, got {}x{}",
                            m.rows(),
                            m.cols()
                        )));
                    }
                    let mut out = Vec::with_capacity(k * k);
                    for v in m.data() {
                        if !v.is_integer() {
                            return Err(Error::Parse(format!("entry {v} is not an integer")));
                        }
                        let v: i64 = v.to_integer().try_into().map_err(|_| Error::Parse("entry too large".into()))?;
                        out.push(v);
                    }
                    out
                };
                let p = p as i64;
                let idx = entries.iter().fold(0i64, |acc, v| acc * p + v.rem_euclid(p));
                Ok(Elt(idx as u16))
            }
            _ => unreachable!("finite ring with non-finite descriptor"),
        }
    }
}

/// Recognises `Eij` (1-based) and returns zero-based `(i, j)`.
pub(crate) fn parse_unit_literal(t: &str, k: usize) -> Result<Option<(usize, usize)>> {
    let Some(rest) = t.strip_prefix('E') else {
        return Ok(None);
    };
    let digits: Vec<usize> = rest.chars().filter_map(|c| c.to_digit(10).map(|d| d as usize)).collect();
    let (i, j) = match (rest.split_once(','), digits.as_slice()) {
        (Some((a, b)), _) => (
            a.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad unit `{t}`")))?,
            b.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad unit `{t}`")))?,
        ),
        (None, [a, b]) if rest.len() == 2 => (*a, *b),
        _ => return Err(Error::Parse(format!("bad matrix unit `{t}`"))),
    };
    if i == 0 || j == 0 || i > k || j > k {
        return Err(Error::DimensionMismatch(format!("{t} outside a {k}x{k} matrix")));
    }
    Ok(Some((i - 1, j - 1)))
}

fn cap(size: usize, d: &RingDescriptor) -> Result<()> {
    if size > MAX_FINITE_SIZE {
        return Err(Error::CapExceeded(format!("{d} has {size} elements, limit {MAX_FINITE_SIZE}")));
    }
    Ok(())
}

impl Ring for FiniteRing {
    type Elem = Elt;

    fn descriptor(&self) -> RingDescriptor {
        self.descriptor
    }
    fn zero(&self) -> Elt {
        Elt(self.zero)
    }
    fn one(&self) -> Elt {
        Elt(self.one)
    }
    fn add(&self, x: &Elt, y: &Elt) -> Elt {
        Elt(self.add[x.index() * self.size + y.index()])
    }
    fn neg(&self, x: &Elt) -> Elt {
        Elt(self.neg[x.index()])
    }
    fn mul(&self, x: &Elt, y: &Elt) -> Elt {
        Elt(self.mul[x.index() * self.size + y.index()])
    }
    fn eq(&self, x: &Elt, y: &Elt) -> bool {
        x == y
    }
    fn norm(&self, x: &Elt) -> f64 {
        if x.0 == self.zero {
            0.0
        } else {
            1.0
        }
    }
    fn residual_ok(&self, residual: &Elt, _scale: f64) -> bool {
        residual.0 == self.zero
    }
    fn invert(&self, x: &Elt) -> Result<Elt> {
        self.unit_inverse[x.index()].map(Elt).ok_or(Error::NotInvertible)
    }
    fn is_unit(&self, x: &Elt) -> bool {
        self.unit_inverse[x.index()].is_some()
    }
    fn is_right_invertible(&self, x: &Elt) -> bool {
        self.all().any(|y| self.mul(x, &y).0 == self.one)
    }
    fn is_left_invertible(&self, x: &Elt) -> bool {
        self.all().any(|y| self.mul(&y, x).0 == self.one)
    }
    fn inner_inverses(&self, b: &Elt) -> Result<Vec<Elt>> {
        let gs: Vec<Elt> = self.all().filter(|g| self.product(&[b, g, b]) == *b).collect();
        if gs.is_empty() {
            Err(Error::NotRegular)
        } else {
            Ok(gs)
        }
    }
    fn ideal(&self, x: &Elt, side: Side) -> IdealRepresentation<Elt> {
        let mut set: Vec<Elt> = match side {
            Side::ImageRight => self.all().map(|r| self.mul(x, &r)).collect(),
            Side::ImageLeft => self.all().map(|r| self.mul(&r, x)).collect(),
            Side::KernelRight => self.all().filter(|r| self.mul(x, r).0 == self.zero).collect(),
            Side::KernelLeft => self.all().filter(|r| self.mul(r, x).0 == self.zero).collect(),
        };
        set.sort_unstable();
        set.dedup();
        IdealRepresentation::Elements(set)
    }
    fn ideal_contains(&self, ideal: &IdealRepresentation<Elt>, y: &Elt) -> bool {
        match ideal {
            IdealRepresentation::Elements(set) => set.binary_search(y).is_ok(),
            IdealRepresentation::Subspace { .. } => false,
        }
    }
    fn ideal_subset(&self, i: &IdealRepresentation<Elt>, j: &IdealRepresentation<Elt>) -> bool {
        match i {
            IdealRepresentation::Elements(set) => set.iter().all(|y| self.ideal_contains(j, y)),
            IdealRepresentation::Subspace { .. } => false,
        }
    }
    fn elements(&self) -> Option<Vec<Elt>> {
        Some(self.all().collect())
    }
    fn transpose(&self, x: &Elt) -> Option<Elt> {
        Some(Elt(self.transpose[x.index()]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z6() -> FiniteRing {
        FiniteRing::modular(6).unwrap()
    }

    fn set(r: &FiniteRing, x: Elt, side: Side) -> Vec<u16> {
        match r.ideal(&x, side) {
            IdealRepresentation::Elements(v) => v.into_iter().map(|e| e.0).collect(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn modular_arithmetic() {
        let r = z6();
        assert_eq!(r.mul(&Elt(5), &Elt(5)), Elt(1));
        assert_eq!(r.add(&Elt(4), &Elt(3)), Elt(1));
        assert_eq!(r.neg(&Elt(2)), Elt(4));
        assert!(r.is_idempotent(&Elt(4)));
        assert!(r.is_idempotent(&r.one()));
        assert_eq!(r.invert(&Elt(5)).unwrap(), Elt(5));
        assert_eq!(r.invert(&Elt(2)), Err(Error::NotInvertible));
    }

    #[test]
    fn inner_inverses_of_two_in_z6() {
        let r = z6();
        assert_eq!(r.inner_inverses(&Elt(2)).unwrap(), vec![Elt(2), Elt(5)]);
        assert!(r.inner_inverses(&r.one()).unwrap().contains(&r.one()));
        assert_eq!(r.inner_inverses(&Elt(0)).unwrap().len(), 6);
        assert_eq!(r.normalized_inner_inverse(&Elt(2), &Elt(5)).unwrap(), Elt(2));
        assert_eq!(r.normalized_inner_inverse(&Elt(0), &Elt(3)).unwrap(), Elt(0));
        assert!(r.normalized_inner_inverse(&Elt(2), &Elt(1)).is_err());
    }

    #[test]
    fn non_regular_element() {
        let r = FiniteRing::modular(4).unwrap();
        assert_eq!(r.inner_inverses(&Elt(2)), Err(Error::NotRegular));
    }

    #[test]
    fn ideals_in_z6() {
        let r = z6();
        assert_eq!(set(&r, Elt(2), Side::ImageRight), vec![0, 2, 4]);
        assert_eq!(set(&r, r.one(), Side::ImageRight).len(), 6);
        assert_eq!(set(&r, Elt(0), Side::KernelRight).len(), 6);
        assert_eq!(set(&r, Elt(2), Side::KernelRight), vec![0, 3]);
    }

    #[test]
    fn matrix_ring_over_f2() {
        let r = FiniteRing::prime_matrix(2, 2).unwrap();
        assert_eq!(r.size(), 16);
        assert_eq!(r.units().len(), 6);
        assert_eq!(r.idempotents().len(), 8);
        let e11 = r.parse_element("E11").unwrap();
        let e12 = r.parse_element("E12").unwrap();
        let e21 = r.parse_element("[[0,0],[1,0]]").unwrap();
        assert_eq!(r.label(e11), "[[1,0],[0,0]]");
        assert_eq!(r.mul(&e11, &e12), e12);
        assert_eq!(r.mul(&e12, &e11), r.zero());
        assert_eq!(r.transpose(&e12), Some(e21));
        assert_eq!(r.parse_element("I").unwrap(), r.one());
        assert_eq!(r.label(r.one()), "[[1,0],[0,1]]");
        // E11 is neither right nor left invertible
        assert!(!r.is_right_invertible(&e11));
        assert!(!r.is_left_invertible(&e11));
    }

    #[test]
    fn literal_errors() {
        let r = FiniteRing::prime_matrix(2, 2).unwrap();
        assert!(matches!(r.parse_element("E31"), Err(Error::DimensionMismatch(_))));
        assert!(matches!(r.parse_element("[[1,0]]"), Err(Error::DimensionMismatch(_))));
        assert!(matches!(r.parse_element("[[1/2,0],[0,1]]"), Err(Error::Parse(_))));
        assert_eq!(z6().parse_element("-1").unwrap(), Elt(5));
        assert!(FiniteRing::prime_matrix(2, 4).is_err());
    }

    #[test]
    fn ring_axioms_exhaustive() {
        for r in [FiniteRing::modular(6).unwrap(), FiniteRing::prime_matrix(2, 2).unwrap()] {
            let one = r.one();
            for x in r.all() {
                assert_eq!(r.mul(&x, &one), x);
                assert_eq!(r.mul(&one, &x), x);
                for y in r.all() {
                    for z in r.all() {
                        assert_eq!(r.mul(&r.mul(&x, &y), &z), r.mul(&x, &r.mul(&y, &z)));
                        assert_eq!(r.mul(&x, &r.add(&y, &z)), r.add(&r.mul(&x, &y), &r.mul(&x, &z)));
                        assert_eq!(r.mul(&r.add(&y, &z), &x), r.add(&r.mul(&y, &x), &r.mul(&z, &x)));
                    }
                }
            }
        }
    }

    #[test]
    fn transpose_reverses_products() {
        let r = FiniteRing::prime_matrix(3, 2).unwrap();
        for x in r.all().step_by(7) {
            for y in r.all().step_by(5) {
                let t = |e: &Elt| r.transpose(e).unwrap();
                assert_eq!(t(&r.mul(&x, &y)), r.mul(&t(&y), &t(&x)));
            }
        }
    }
}
