//! Seeded generators of random test data (scalars, coefficient functions,
//! Clifford elements, forms).

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coeff::{AffinePoly, Coeff, Exponent, Mode, Scalar, TrigPoly};
use crate::multivector::{CliffordElement, FormField};

/// Deterministic generator used by property suites and the CLI.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    /// Small nonzero Gaussian rational with numerators in `[-3, 3]` and
    /// denominators in `{1, 2, 3}`.
    pub fn scalar(&mut self) -> Scalar {
        loop {
            let s = Scalar::new(
                crate::coeff::q(self.int(-3, 3), self.int(1, 3)),
                crate::coeff::q(self.int(-3, 3), self.int(1, 3)),
            );
            if !s.is_zero() {
                return s;
            }
        }
    }

    pub fn real_scalar(&mut self) -> Scalar {
        loop {
            let s = Scalar::ratio(self.int(-3, 3), self.int(1, 3));
            if !s.is_zero() {
                return s;
            }
        }
    }

    pub fn mode(&mut self, dim: usize, cap: i64) -> Mode {
        let k: Vec<i64> = (0..dim).map(|_| self.int(-cap, cap)).collect();
        Mode::from_slice(&k)
    }

    /// Up to `terms` Fourier terms with `|k|_∞ ≤ cap`.
    pub fn trig(&mut self, dim: usize, cap: i64, terms: usize) -> TrigPoly {
        let mut out = TrigPoly::zero(dim);
        for _ in 0..terms {
            let k = self.mode(dim, cap);
            out = out.add(&TrigPoly::monomial(dim, k, self.scalar()));
        }
        out
    }

    /// Real-valued trigonometric polynomial: `f + conj(f)`.
    pub fn real_trig(&mut self, dim: usize, cap: i64, terms: usize) -> TrigPoly {
        let f = self.trig(dim, cap, terms);
        f.add(&f.conj())
    }

    /// Polynomial of total degree `≤ deg` with up to `terms` monomials.
    pub fn affine(&mut self, dim: usize, deg: u32, terms: usize) -> AffinePoly {
        let all = Exponent::up_to_degree(dim, deg);
        let mut out = AffinePoly::zero(dim);
        for _ in 0..terms {
            let e = all[self.below(all.len())];
            out = out.add(&AffinePoly::monomial(dim, e, self.scalar()));
        }
        out
    }

    /// Holomorphic polynomial in `z_1…z_{dim/2}` of degree exactly `deg`
    /// (leading coefficient of `z_1^deg` nonzero) plus random lower terms.
    pub fn holomorphic(&mut self, dim: usize, deg: u32, terms: usize) -> AffinePoly {
        let n = dim / 2;
        let mut lead = vec![0u32; n];
        lead[0] = deg;
        let mut out = AffinePoly::holomorphic_monomial(dim, &lead, self.scalar());
        for _ in 0..terms {
            let mut alpha = vec![0u32; n];
            let total = self.int(0, deg as i64) as u32;
            for _ in 0..total {
                let j = self.below(n);
                alpha[j] += 1;
            }
            out = out.add(&AffinePoly::holomorphic_monomial(
                dim,
                &alpha,
                self.scalar(),
            ));
        }
        out
    }

    /// Random Clifford element with words of length `≤ max_len`, using a
    /// coefficient generator.
    pub fn clifford<C: Coeff>(
        &mut self,
        m: usize,
        rdim: usize,
        max_len: usize,
        terms: usize,
        mut coeff: impl FnMut(&mut Self) -> C,
    ) -> CliffordElement<C> {
        let mut out = CliffordElement::zero(m, rdim);
        for _ in 0..terms {
            let w = self.word(2 * m, max_len);
            let c = coeff(self);
            out.add_term(w, &c);
        }
        out
    }

    /// Random degree-1 element.
    pub fn degree_one<C: Coeff>(
        &mut self,
        m: usize,
        rdim: usize,
        mut coeff: impl FnMut(&mut Self) -> C,
    ) -> CliffordElement<C> {
        let v: Vec<C> = (0..2 * m)
            .map(|_| {
                if self.below(2) == 0 {
                    coeff(self)
                } else {
                    C::zero(rdim)
                }
            })
            .collect();
        CliffordElement::from_vector(m, rdim, &v)
    }

    /// Random form with up to `terms` basis components.
    pub fn form<C: Coeff>(
        &mut self,
        m: usize,
        rdim: usize,
        terms: usize,
        mut coeff: impl FnMut(&mut Self) -> C,
    ) -> FormField<C> {
        let mut out = FormField::zero(m, rdim);
        for _ in 0..terms {
            let s = self.below(1 << m) as u32;
            let c = coeff(self);
            out.add_term(s, &c);
        }
        out
    }

    /// Bitmask over `bits` generators with at most `max_len` ones.
    pub fn word(&mut self, bits: usize, max_len: usize) -> u32 {
        let len = self.int(0, max_len as i64) as usize;
        let mut w = 0u32;
        for _ in 0..len {
            w |= 1 << self.below(bits);
        }
        w
    }
}
