use std::collections::BTreeMap;
use std::fmt;

use nalgebra::Complex;
use num_traits::{One, Zero};

use super::{Coeff, RingKind, Scalar, MAX_DIM, Q};

/// Multi-exponent `α ∈ ℕ^m`; entries past the ring dimension are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Exponent(pub [u16; MAX_DIM]);

impl Exponent {
    pub fn zero() -> Self {
        Exponent([0; MAX_DIM])
    }

    pub fn from_slice(a: &[u32]) -> Self {
        assert!(a.len() <= MAX_DIM);
        let mut out = [0u16; MAX_DIM];
        for (o, &v) in out.iter_mut().zip(a) {
            *o = u16::try_from(v).expect("exponent out of range");
        }
        Exponent(out)
    }

    pub fn unit(j: usize) -> Self {
        let mut out = [0u16; MAX_DIM];
        out[j] = 1;
        Exponent(out)
    }

    pub fn add(&self, o: &Exponent) -> Exponent {
        let mut out = self.0;
        for (a, b) in out.iter_mut().zip(o.0.iter()) {
            *a += *b;
        }
        Exponent(out)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&v| v as u32).sum()
    }

    pub fn get(&self, j: usize) -> u32 {
        self.0[j] as u32
    }

    /// All exponents of the given dimension with total degree `≤ deg`.
    pub fn up_to_degree(dim: usize, deg: u32) -> Vec<Exponent> {
        let mut out = vec![Exponent::zero()];
        for j in 0..dim {
            let mut next = Vec::new();
            for e in &out {
                for v in 0..=(deg - e.degree()) {
                    let mut ee = *e;
                    ee.0[j] = v as u16;
                    next.push(ee);
                }
            }
            out = next;
        }
        out.sort();
        out
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.0.iter().rposition(|&v| v != 0).map_or(0, |p| p + 1);
        write!(f, "{:?}", &self.0[..last.max(1)])
    }
}

/// Polynomial in the real chart coordinates `x_0, …, x_{dim−1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffinePoly {
    dim: usize,
    terms: BTreeMap<Exponent, Scalar>,
}

impl AffinePoly {
    pub fn new(dim: usize) -> Self {
        assert!(dim <= MAX_DIM);
        AffinePoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// The coordinate function `x_j`.
    pub fn coord(dim: usize, j: usize) -> Self {
        Self::monomial(dim, Exponent::unit(j), Scalar::one())
    }

    /// The complex chart coordinate `z_j = x_{2j} + i·x_{2j+1}`.
    pub fn z(dim: usize, j: usize) -> Self {
        Self::coord(dim, 2 * j).add(&Self::coord(dim, 2 * j + 1).scale(&Scalar::i()))
    }

    /// `c·z^α` expanded in real coordinates; `alpha` indexes complex coordinates.
    pub fn holomorphic_monomial(dim: usize, alpha: &[u32], c: Scalar) -> Self {
        let mut out = Self::constant(dim, c);
        for (j, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                out = out.mul(&Self::z(dim, j));
            }
        }
        out
    }

    /// `∂/∂z_j = ½(∂_{x_{2j}} − i ∂_{x_{2j+1}})`.
    pub fn d_z(&self, j: usize) -> Self {
        let half = Scalar::ratio(1, 2);
        self.partial(2 * j)
            .sub(&self.partial(2 * j + 1).scale(&Scalar::i()))
            .scale(&half)
    }

    /// `∂/∂z̄_j = ½(∂_{x_{2j}} + i ∂_{x_{2j+1}})`.
    pub fn d_zbar(&self, j: usize) -> Self {
        let half = Scalar::ratio(1, 2);
        self.partial(2 * j)
            .add(&self.partial(2 * j + 1).scale(&Scalar::i()))
            .scale(&half)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Exponent::degree).max().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exponent, &Scalar)> {
        self.terms.iter()
    }

    fn insert_add(&mut self, k: Exponent, c: Scalar) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(k) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }
}

impl fmt::Debug for AffinePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| format!("{c}·x{k:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Coeff for AffinePoly {
    type Key = Exponent;
    const KIND: RingKind = RingKind::Affine;

    fn dim(&self) -> usize {
        self.dim
    }

    fn zero(dim: usize) -> Self {
        AffinePoly::new(dim)
    }

    fn monomial(dim: usize, key: Exponent, c: Scalar) -> Self {
        let mut out = AffinePoly::new(dim);
        if !c.is_zero() {
            out.terms.insert(key, c);
        }
        out
    }

    fn constant_key(_: usize) -> Exponent {
        Exponent::zero()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(o);
        out
    }

    fn add_assign(&mut self, o: &Self) {
        debug_assert_eq!(self.dim, o.dim);
        for (k, c) in &o.terms {
            self.insert_add(*k, c.clone());
        }
    }

    fn add_scaled(&mut self, o: &Self, s: &Scalar) {
        for (k, c) in &o.terms {
            self.insert_add(*k, c * s);
        }
    }

    fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.insert_add(*k, -c);
        }
        out
    }

    fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.dim, o.dim);
        let mut out = AffinePoly::new(self.dim);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                out.insert_add(k1.add(k2), c1 * c2);
            }
        }
        out
    }

    fn neg(&self) -> Self {
        AffinePoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return AffinePoly::new(self.dim);
        }
        AffinePoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, c)| (*k, c * s)).collect(),
        }
    }

    fn conj(&self) -> Self {
        AffinePoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, c)| (*k, c.conj())).collect(),
        }
    }

    fn partial(&self, j: usize) -> Self {
        let mut out = AffinePoly::new(self.dim);
        for (k, c) in &self.terms {
            let a = k.get(j);
            if a > 0 {
                let mut kk = *k;
                kk.0[j] -= 1;
                out.insert_add(kk, c.scale_q(&Q::from_integer(a.into())));
            }
        }
        out
    }

    fn eval_at_zero(&self) -> Scalar {
        self.terms
            .get(&Exponent::zero())
            .cloned()
            .unwrap_or_default()
    }

    fn eval_f64(&self, x: &[f64]) -> Complex<f64> {
        let mut s = Complex::new(0.0, 0.0);
        for (k, c) in &self.terms {
            let mut v = 1.0;
            for (j, xj) in x.iter().enumerate().take(self.dim) {
                v *= xj.powi(k.get(j) as i32);
            }
            s += c.to_c64() * v;
        }
        s
    }

    fn eval_exact(&self, x: &[Q]) -> Option<Scalar> {
        let mut s = Scalar::zero();
        for (k, c) in &self.terms {
            let mut v = Q::one();
            for j in 0..self.dim {
                let xj = x.get(j).cloned().unwrap_or_else(Q::zero);
                v *= num_traits::pow(xj, k.get(j) as usize);
            }
            s += &c.scale_q(&v);
        }
        Some(s)
    }

    fn terms(&self) -> Vec<(Exponent, Scalar)> {
        self.terms.iter().map(|(k, c)| (*k, c.clone())).collect()
    }

    fn key_quotients(num: &[Exponent], den: &[Exponent]) -> Vec<Exponent> {
        let mut set = std::collections::BTreeSet::new();
        for a in num {
            for b in den {
                if (0..MAX_DIM).all(|j| a.0[j] >= b.0[j]) {
                    let mut k = *a;
                    for j in 0..MAX_DIM {
                        k.0[j] -= b.0[j];
                    }
                    set.insert(k);
                }
            }
        }
        set.into_iter().collect()
    }
    fn coordinate_probe(dim: usize, j: usize) -> Option<Self> {
        Some(AffinePoly::coord(dim, j))
    }
    fn key_size(key: &Exponent) -> u32 {
        key.degree()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{q, qi};

    #[test]
    fn cube_has_no_constant_term() {
        let x = AffinePoly::coord(2, 0);
        assert_eq!(x.mul(&x).mul(&x).eval_at_zero(), Scalar::zero());
    }

    #[test]
    fn holomorphic_partials() {
        let f = AffinePoly::holomorphic_monomial(4, &[2, 1], Scalar::one());
        for j in 0..2 {
            assert!(f.d_zbar(j).is_zero());
        }
        let expect = AffinePoly::holomorphic_monomial(4, &[1, 1], Scalar::int(2));
        assert_eq!(f.d_z(0), expect);
        assert!(AffinePoly::coord(2, 0).d_zbar(0) == AffinePoly::constant(2, Scalar::ratio(1, 2)));
    }

    #[test]
    fn exact_evaluation() {
        let z = AffinePoly::z(2, 0);
        let v = z.mul(&z).eval_exact(&[q(1, 2), qi(1)]).unwrap();
        // (1/2 + i)^2 = 1/4 - 1 + i
        assert_eq!(v, Scalar::new(q(-3, 4), qi(1)));
    }

    #[test]
    fn degree_enumeration() {
        assert_eq!(Exponent::up_to_degree(2, 2).len(), 6);
    }
}
