use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::{Coeff, Scalar};
use crate::error::{GkError, Result};

use super::form::FormField;
use super::word::{self, mul_words, word_len, word_on_form, Word};

/// Element of the complexified Clifford algebra of `T ⊕ T*` on an
/// `m`-dimensional flat model, with coefficients in the ring `C`.
///
/// Words are bitmasks read in increasing generator order (see
/// [`word`](super::word)); zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct CliffordElement<C: Coeff> {
    m: usize,
    rdim: usize,
    terms: BTreeMap<Word, C>,
}

impl<C: Coeff> fmt::Debug for CliffordElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("({c:?})·{}", word::word_name(self.m, *w)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Coeff> CliffordElement<C> {
    pub fn zero(m: usize, rdim: usize) -> Self {
        assert!(2 * m <= 32);
        CliffordElement {
            m,
            rdim,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(m: usize, rdim: usize, c: C) -> Self {
        Self::from_word(m, rdim, 0, c)
    }

    pub fn one(m: usize, rdim: usize) -> Self {
        Self::scalar(m, rdim, C::one(rdim))
    }

    pub fn from_word(m: usize, rdim: usize, w: Word, c: C) -> Self {
        let mut out = Self::zero(m, rdim);
        if !c.is_zero() {
            out.terms.insert(w, c);
        }
        out
    }

    /// Generator `e_g`: `∂_{g+1}` for `g < m`, `dx^{g−m+1}` otherwise.
    pub fn generator(m: usize, rdim: usize, g: usize) -> Self {
        Self::from_word(m, rdim, 1 << g, C::one(rdim))
    }

    /// `∂_i` (zero-based index).
    pub fn vector(m: usize, rdim: usize, i: usize) -> Self {
        Self::generator(m, rdim, i)
    }

    /// `dx^i` (zero-based index).
    pub fn covector(m: usize, rdim: usize, i: usize) -> Self {
        Self::generator(m, rdim, m + i)
    }

    /// Degree-1 element `Σ_a v[a] e_a` from its `2m` components.
    pub fn from_vector(m: usize, rdim: usize, v: &[C]) -> Self {
        assert_eq!(v.len(), 2 * m);
        let mut out = Self::zero(m, rdim);
        for (g, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out.terms.insert(1 << g, c.clone());
            }
        }
        out
    }

    pub fn from_terms(m: usize, rdim: usize, terms: impl IntoIterator<Item = (Word, C)>) -> Self {
        let mut out = Self::zero(m, rdim);
        for (w, c) in terms {
            out.add_term(w, &c);
        }
        out
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rdim(&self) -> usize {
        self.rdim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Word, C> {
        &self.terms
    }

    pub fn coeff(&self, w: Word) -> C {
        self.terms
            .get(&w)
            .cloned()
            .unwrap_or_else(|| C::zero(self.rdim))
    }

    pub fn add_term(&mut self, w: Word, c: &C) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
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

    fn check(&self, o: &Self) {
        assert_eq!(self.m, o.m, "Clifford elements of different dimension");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(*w, c);
        }
        out
    }

    pub fn add_assign(&mut self, o: &Self) {
        self.check(o);
        for (w, c) in &o.terms {
            self.add_term(*w, c);
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero(self.m, self.rdim);
        }
        self.map_coeffs(|c| c.scale(s))
    }

    /// Multiplication by a function.
    pub fn mul_coeff(&self, f: &C) -> Self {
        self.map_coeffs(|c| c.mul(f))
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = Self::zero(self.m, self.rdim);
        for (w, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                out.terms.insert(*w, v);
            }
        }
        out
    }

    /// Coefficient-wise conjugation; basis words are real.
    pub fn conj(&self) -> Self {
        self.map_coeffs(C::conj)
    }

    /// `½(a + conj(a))`.
    pub fn real_part(&self) -> Self {
        self.add(&self.conj()).scale(&Scalar::ratio(1, 2))
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Clifford product, straightened into normal-ordered words.
    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let mut out = Self::zero(self.m, self.rdim);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &o.terms {
                let prod = ca.mul(cb);
                if prod.is_zero() {
                    continue;
                }
                for (w, k) in mul_words(self.m, *wa, *wb) {
                    out.add_term(w, &prod.scale(&Scalar::int(k)));
                }
            }
        }
        out
    }

    /// `[a, b] = ab − ba`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// `{a, b} = ab + ba`.
    pub fn anticommutator(&self, o: &Self) -> Self {
        self.mul(o).add(&o.mul(self))
    }

    /// Filtration degree: the longest word present (0 for the zero element).
    pub fn filtration_degree(&self) -> usize {
        self.terms.keys().map(|w| word_len(*w)).max().unwrap_or(0)
    }

    /// True if every word has length one, i.e. a section of `(T ⊕ T*) ⊗ ℂ`.
    pub fn is_degree_one(&self) -> bool {
        self.terms.keys().all(|w| word_len(*w) == 1)
    }

    /// The `2m` components of a degree-1 element.
    pub fn to_vector(&self) -> Result<Vec<C>> {
        if !self.is_degree_one() {
            return Err(GkError::DegreeError(format!("{self:?}")));
        }
        Ok((0..2 * self.m).map(|g| self.coeff(1 << g)).collect())
    }

    /// Decomposition into skew-symmetric graded pieces `CL^{[p]}`.
    ///
    /// Grade `p` of a word containing `r` pairs `(∂_i, dx^i)` receives
    /// contributions from the antisymmetrised products of its sub-words, so
    /// the top grade is peeled off first and the remainder reprocessed.
    pub fn grade_parts(&self) -> BTreeMap<usize, Self> {
        let mut rest = self.clone();
        let mut parts: BTreeMap<usize, Self> = BTreeMap::new();
        while !rest.is_zero() {
            let top = rest.filtration_degree();
            let words: Vec<(Word, C)> = rest
                .terms
                .iter()
                .filter(|(w, _)| word_len(**w) == top)
                .map(|(w, c)| (*w, c.clone()))
                .collect();
            let mut piece = Self::zero(self.m, self.rdim);
            for (w, c) in words {
                for (v, k) in skew_word(self.m, w) {
                    piece.add_term(v, &c.scale(&k));
                }
            }
            rest = rest.sub(&piece);
            parts.insert(top, piece);
        }
        parts
    }

    /// Spin action on forms: `∂_i` by interior product, `dx^i` by wedge.
    pub fn spin(&self, alpha: &FormField<C>) -> FormField<C> {
        assert_eq!(self.m, alpha.m(), "dimension mismatch in spin action");
        let mut out = FormField::zero(self.m, self.rdim);
        for (w, c) in &self.terms {
            for (s, a) in alpha.terms() {
                if let Some((sign, t)) = word_on_form(self.m, *w, *s) {
                    out.add_term(t, &c.mul(a).scale(&Scalar::int(sign)));
                }
            }
        }
        out
    }

    /// `e^{X}·α = Σ_k X^kα/k!` for an `X` whose spin action is nilpotent;
    /// `None` if the series has not terminated after `2m + 1` terms.
    pub fn exp_spin(&self, alpha: &FormField<C>) -> Option<FormField<C>> {
        let mut out = alpha.clone();
        let mut term = alpha.clone();
        for k in 1..=2 * self.m + 2 {
            term = self.spin(&term).scale(&Scalar::ratio(1, k as i64));
            if term.is_zero() {
                return Some(out);
            }
            out.add_assign(&term);
        }
        None
    }

    /// `e^{X} E e^{−X} = Σ_k ad_X^k E / k!` for ad-nilpotent `X`.
    pub fn exp_adjoint(&self, e: &Self) -> Option<Self> {
        let mut out = e.clone();
        let mut term = e.clone();
        for k in 1..=4 * self.m + 2 {
            term = self.commutator(&term).scale(&Scalar::ratio(1, k as i64));
            if term.is_zero() {
                return Some(out);
            }
            out.add_assign(&term);
        }
        None
    }

    /// Constant-coefficient value, if every coefficient is constant.
    pub fn as_constant(&self) -> Option<CliffordElement<Scalar>> {
        let mut out = CliffordElement::zero(self.m, 0);
        for (w, c) in &self.terms {
            out.add_term(*w, &c.as_constant()?);
        }
        Some(out)
    }

    pub fn eval_at_zero(&self) -> CliffordElement<Scalar> {
        let mut out = CliffordElement::zero(self.m, 0);
        for (w, c) in &self.terms {
            out.add_term(*w, &c.eval_at_zero());
        }
        out
    }

    /// Largest key size (`|k|_∞` or degree) among all coefficients.
    pub fn max_key_size(&self) -> u32 {
        self.terms
            .values()
            .map(Coeff::max_key_size)
            .max()
            .unwrap_or(0)
    }

    /// Surrogate norm `Σ_{words, keys} (|re| + |im|)`.
    pub fn l1_norm(&self) -> crate::coeff::Q {
        let mut s = crate::coeff::Q::from_integer(0.into());
        for c in self.terms.values() {
            for (_, v) in c.terms() {
                s += v.l1();
            }
        }
        s
    }
}

impl CliffordElement<Scalar> {
    /// Embeds a constant element into the ring `C`.
    pub fn lift<C: Coeff>(&self, rdim: usize) -> CliffordElement<C> {
        let mut out = CliffordElement::zero(self.m, rdim);
        for (w, c) in &self.terms {
            out.add_term(*w, &C::constant(rdim, c.clone()));
        }
        out
    }

    /// Matrix of the spin action on the `2^m` basis forms.
    pub fn spin_matrix(&self) -> crate::linalg::Matrix {
        let n = 1usize << self.m;
        let mut mat = crate::linalg::Matrix::zeros(n, n);
        for (w, c) in &self.terms {
            for s in 0..n as u32 {
                if let Some((sign, t)) = word_on_form(self.m, *w, s) {
                    mat[(t as usize, s as usize)] += &c.scale_q(&crate::coeff::qi(sign));
                }
            }
        }
        mat
    }
}

/// `⟨E, F⟩ = ½θ(w) + ½η(v)` for degree-1 `E = v + θ`, `F = w + η`.
pub fn pairing<C: Coeff>(e: &CliffordElement<C>, f: &CliffordElement<C>) -> Result<C> {
    let a = e.to_vector()?;
    let b = f.to_vector()?;
    if e.m != f.m {
        return Err(GkError::DimMismatch);
    }
    let m = e.m;
    let mut s = C::zero(e.rdim);
    for i in 0..m {
        s.add_assign(&a[i].mul(&b[m + i]));
        s.add_assign(&a[m + i].mul(&b[i]));
    }
    Ok(s.scale(&Scalar::ratio(1, 2)))
}

/// Antisymmetrised product of the generators of `w` as a combination of
/// words, with rational coefficients.
pub fn skew_word(m: usize, w: Word) -> BTreeMap<Word, Scalar> {
    let mut out = BTreeMap::new();
    if w == 0 {
        out.insert(0, Scalar::one());
        return out;
    }
    let g = w.trailing_zeros();
    let rest = w & !(1 << g);
    let k = word_len(rest);
    let sub = skew_word(m, rest);
    let half = Scalar::ratio(1, 2);
    let sign = if k % 2 == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    };
    // e_g ∧ X = ½(e_g X + (−1)^k X e_g) for X of grade k.
    for (v, c) in &sub {
        for (u, n) in mul_words(m, 1 << g, *v) {
            *out.entry(u).or_insert_with(Scalar::zero) += &(&(c * &half) * &Scalar::int(n));
        }
        for (u, n) in mul_words(m, *v, 1 << g) {
            *out.entry(u).or_insert_with(Scalar::zero) +=
                &(&(&(c * &half) * &sign) * &Scalar::int(n));
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}
