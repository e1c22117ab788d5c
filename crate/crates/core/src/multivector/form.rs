use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::{Coeff, Scalar, Q};
use crate::linalg::Matrix;

use super::word::{form_word_name, gen_on_form, FormWord};

/// Differential form `Σ_S f_S dx^S` on an `m`-dimensional flat model.
#[derive(Clone, PartialEq)]
pub struct FormField<C: Coeff> {
    m: usize,
    rdim: usize,
    terms: BTreeMap<FormWord, C>,
}

impl<C: Coeff> fmt::Debug for FormField<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, c)| format!("({c:?})·{}", form_word_name(*s)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Coeff> FormField<C> {
    pub fn zero(m: usize, rdim: usize) -> Self {
        assert!(m <= 16);
        FormField {
            m,
            rdim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(m: usize, rdim: usize) -> Self {
        Self::basis(m, rdim, 0, C::one(rdim))
    }

    /// `c · dx^S`.
    pub fn basis(m: usize, rdim: usize, s: FormWord, c: C) -> Self {
        let mut out = Self::zero(m, rdim);
        out.add_term(s, &c);
        out
    }

    pub fn from_terms(
        m: usize,
        rdim: usize,
        terms: impl IntoIterator<Item = (FormWord, C)>,
    ) -> Self {
        let mut out = Self::zero(m, rdim);
        for (s, c) in terms {
            out.add_term(s, &c);
        }
        out
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rdim(&self) -> usize {
        self.rdim
    }

    pub fn terms(&self) -> &BTreeMap<FormWord, C> {
        &self.terms
    }

    pub fn coeff(&self, s: FormWord) -> C {
        self.terms
            .get(&s)
            .cloned()
            .unwrap_or_else(|| C::zero(self.rdim))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, s: FormWord, c: &C) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(s) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_assign(c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.m, o.m);
        let mut out = self.clone();
        out.add_assign(o);
        out
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (s, c) in &o.terms {
            self.add_term(*s, c);
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(C::neg)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero(self.m, self.rdim);
        }
        self.map_coeffs(|c| c.scale(s))
    }

    pub fn mul_coeff(&self, f: &C) -> Self {
        self.map_coeffs(|c| c.mul(f))
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = Self::zero(self.m, self.rdim);
        for (s, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                out.terms.insert(*s, v);
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        self.map_coeffs(C::conj)
    }

    /// Degree-`p` component.
    pub fn degree_part(&self, p: usize) -> Self {
        let mut out = Self::zero(self.m, self.rdim);
        for (s, c) in &self.terms {
            if s.count_ones() as usize == p {
                out.terms.insert(*s, c.clone());
            }
        }
        out
    }

    /// Lowest degree with a nonzero component.
    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(|s| s.count_ones() as usize).min()
    }

    /// Exterior derivative `d(f dx^S) = Σ_j ∂_j f dx^j ∧ dx^S`.
    pub fn d(&self) -> Self {
        let mut out = Self::zero(self.m, self.rdim);
        let nvar = self.rdim.min(self.m);
        for (s, c) in &self.terms {
            for j in 0..nvar {
                if let Some((sign, t)) = gen_on_form(self.m, (self.m + j) as u32, *s) {
                    let dc = c.partial(j);
                    if !dc.is_zero() {
                        out.add_term(t, &if sign > 0 { dc } else { dc.neg() });
                    }
                }
            }
        }
        out
    }

    /// Exterior product.
    pub fn wedge(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.m, self.rdim);
        for (s, a) in &self.terms {
            for (t, b) in &o.terms {
                if s & t != 0 {
                    continue;
                }
                let mut sign = 1i64;
                for i in 0..self.m {
                    if t & (1 << i) != 0 {
                        sign *= if (s >> (i + 1)).count_ones() % 2 == 0 {
                            1
                        } else {
                            -1
                        };
                    }
                }
                let c = a.mul(b);
                out.add_term(s | t, &if sign > 0 { c } else { c.neg() });
            }
        }
        out
    }

    /// Applies a constant `2^m × 2^m` matrix acting on basis-form coordinates.
    pub fn apply_matrix(&self, mat: &Matrix) -> Self {
        let n = 1usize << self.m;
        assert_eq!((mat.rows(), mat.cols()), (n, n));
        let mut out = Self::zero(self.m, self.rdim);
        for (s, c) in &self.terms {
            for t in 0..n {
                let a = &mat[(t, *s as usize)];
                if !a.is_zero() {
                    out.add_term(t as FormWord, &c.scale(a));
                }
            }
        }
        out
    }

    /// Splits by coefficient key (Fourier mode or monomial): each entry is
    /// the vector of constant coordinates in the `2^m` basis.
    pub fn by_key(&self) -> BTreeMap<C::Key, Vec<Scalar>> {
        let n = 1usize << self.m;
        let mut out: BTreeMap<C::Key, Vec<Scalar>> = BTreeMap::new();
        for (s, c) in &self.terms {
            for (k, v) in c.terms() {
                out.entry(k).or_insert_with(|| vec![Scalar::zero(); n])[*s as usize] = v;
            }
        }
        out
    }

    /// Inverse of [`by_key`](Self::by_key).
    pub fn from_keyed(m: usize, rdim: usize, parts: &BTreeMap<C::Key, Vec<Scalar>>) -> Self {
        let mut out = Self::zero(m, rdim);
        for (k, v) in parts {
            for (s, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    out.add_term(s as FormWord, &C::monomial(rdim, *k, c.clone()));
                }
            }
        }
        out
    }

    pub fn as_constant(&self) -> Option<FormField<Scalar>> {
        let mut out = FormField::zero(self.m, 0);
        for (s, c) in &self.terms {
            out.add_term(*s, &c.as_constant()?);
        }
        Some(out)
    }

    pub fn eval_at_zero(&self) -> FormField<Scalar> {
        let mut out = FormField::zero(self.m, 0);
        for (s, c) in &self.terms {
            out.add_term(*s, &c.eval_at_zero());
        }
        out
    }

    pub fn eval_exact(&self, x: &[Q]) -> Option<FormField<Scalar>> {
        let mut out = FormField::zero(self.m, 0);
        for (s, c) in &self.terms {
            out.add_term(*s, &c.eval_exact(x)?);
        }
        Some(out)
    }

    /// Coordinates at a real point, in floating point.
    pub fn eval_f64(&self, x: &[f64]) -> Vec<nalgebra::Complex<f64>> {
        let mut out = vec![nalgebra::Complex::new(0.0, 0.0); 1 << self.m];
        for (s, c) in &self.terms {
            out[*s as usize] = c.eval_f64(x);
        }
        out
    }

    pub fn max_key_size(&self) -> u32 {
        self.terms
            .values()
            .map(Coeff::max_key_size)
            .max()
            .unwrap_or(0)
    }

    pub fn l1_norm(&self) -> Q {
        let mut s = Q::from_integer(0.into());
        for c in self.terms.values() {
            for (_, v) in c.terms() {
                s += v.l1();
            }
        }
        s
    }
}

impl FormField<Scalar> {
    pub fn lift<C: Coeff>(&self, rdim: usize) -> FormField<C> {
        let mut out = FormField::zero(self.m, rdim);
        for (s, c) in &self.terms {
            out.add_term(*s, &C::constant(rdim, c.clone()));
        }
        out
    }

    /// Dense coordinate vector in the `2^m` basis.
    pub fn to_vec(&self) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); 1 << self.m];
        for (s, c) in &self.terms {
            v[*s as usize] = c.clone();
        }
        v
    }

    pub fn from_vec(m: usize, v: &[Scalar]) -> Self {
        let mut out = Self::zero(m, 0);
        for (s, c) in v.iter().enumerate() {
            out.add_term(s as FormWord, c);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{AffinePoly, TrigPoly};

    #[test]
    fn d_on_torus() {
        let f = TrigPoly::exp_mode(2, &[1, 0], Scalar::one());
        let a = FormField::basis(2, 2, 0b10, f.clone());
        let expect = FormField::basis(2, 2, 0b11, f.scale(&Scalar::i()));
        assert_eq!(a.d(), expect);
        assert!(FormField::<TrigPoly>::one(2, 2).d().is_zero());
    }

    #[test]
    fn d_on_chart() {
        let a = FormField::basis(2, 2, 0b10, AffinePoly::coord(2, 0));
        assert_eq!(a.d(), FormField::basis(2, 2, 0b11, AffinePoly::one(2)));
    }

    #[test]
    fn wedge_signs() {
        let x1 = FormField::<Scalar>::basis(3, 0, 0b001, Scalar::one());
        let x2 = FormField::<Scalar>::basis(3, 0, 0b010, Scalar::one());
        let x3 = FormField::<Scalar>::basis(3, 0, 0b100, Scalar::one());
        assert_eq!(x2.wedge(&x1), x1.wedge(&x2).neg());
        assert_eq!(x1.wedge(&x3).wedge(&x2), x1.wedge(&x2).wedge(&x3).neg());
    }
}
