use std::collections::BTreeMap;
use std::fmt;

use nalgebra::Complex;

use super::{Coeff, RingKind, Scalar, MAX_DIM, Q};

/// Fourier mode `k ∈ ℤ^m`; entries past the ring dimension are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mode(pub [i16; MAX_DIM]);

impl Mode {
    pub fn zero() -> Self {
        Mode([0; MAX_DIM])
    }

    pub fn from_slice(k: &[i64]) -> Self {
        assert!(k.len() <= MAX_DIM, "mode has more than {MAX_DIM} entries");
        let mut out = [0i16; MAX_DIM];
        for (o, &v) in out.iter_mut().zip(k) {
            *o = i16::try_from(v).expect("mode entry out of range");
        }
        Mode(out)
    }

    /// The unit mode `e_j`.
    pub fn unit(j: usize) -> Self {
        let mut out = [0i16; MAX_DIM];
        out[j] = 1;
        Mode(out)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }

    pub fn add(&self, o: &Mode) -> Mode {
        let mut out = self.0;
        for (a, b) in out.iter_mut().zip(o.0.iter()) {
            *a += *b;
        }
        Mode(out)
    }

    pub fn neg(&self) -> Mode {
        let mut out = self.0;
        for a in out.iter_mut() {
            *a = -*a;
        }
        Mode(out)
    }

    pub fn sup_norm(&self) -> u32 {
        self.0
            .iter()
            .map(|v| v.unsigned_abs() as u32)
            .max()
            .unwrap_or(0)
    }

    pub fn get(&self, j: usize) -> i64 {
        self.0[j] as i64
    }

    pub fn entries(&self, dim: usize) -> Vec<i64> {
        self.0[..dim].iter().map(|&v| v as i64).collect()
    }

    /// All modes of the given dimension with `|k|_∞ ≤ cap`, in lexicographic order.
    pub fn cube(dim: usize, cap: u32) -> Vec<Mode> {
        let c = cap as i64;
        let mut out = vec![Mode::zero()];
        for j in 0..dim {
            let mut next = Vec::with_capacity(out.len() * (2 * cap as usize + 1));
            for m in &out {
                for v in -c..=c {
                    let mut mm = *m;
                    mm.0[j] = v as i16;
                    next.push(mm);
                }
            }
            out = next;
        }
        out.sort();
        out
    }
}

impl fmt::Debug for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.0.iter().rposition(|&v| v != 0).map_or(0, |p| p + 1);
        write!(f, "{:?}", &self.0[..last.max(1)])
    }
}

/// Trigonometric polynomial `Σ_k c_k e^{i⟨k,x⟩}` on the torus `T^dim`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TrigPoly {
    dim: usize,
    terms: BTreeMap<Mode, Scalar>,
}

impl TrigPoly {
    pub fn new(dim: usize) -> Self {
        assert!(dim <= MAX_DIM);
        TrigPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// `c·e^{i⟨k,x⟩}`.
    pub fn exp_mode(dim: usize, k: &[i64], c: Scalar) -> Self {
        Self::monomial(dim, Mode::from_slice(k), c)
    }

    pub fn coeff(&self, k: &Mode) -> Scalar {
        self.terms.get(k).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mode, &Scalar)> {
        self.terms.iter()
    }

    pub fn modes(&self) -> impl Iterator<Item = &Mode> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert_add(&mut self, k: Mode, c: Scalar) {
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

    /// Restriction to the single mode `k`.
    pub fn mode_part(&self, k: &Mode) -> TrigPoly {
        let mut out = TrigPoly::new(self.dim);
        if let Some(c) = self.terms.get(k) {
            out.terms.insert(*k, c.clone());
        }
        out
    }
}

impl fmt::Debug for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                if k.is_zero() {
                    format!("{c}")
                } else {
                    format!("{c}·e{k:?}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Coeff for TrigPoly {
    type Key = Mode;
    const KIND: RingKind = RingKind::Trig;

    fn dim(&self) -> usize {
        self.dim
    }

    fn zero(dim: usize) -> Self {
        TrigPoly::new(dim)
    }

    fn monomial(dim: usize, key: Mode, c: Scalar) -> Self {
        let mut out = TrigPoly::new(dim);
        if !c.is_zero() {
            out.terms.insert(key, c);
        }
        out
    }

    fn constant_key(_: usize) -> Mode {
        Mode::zero()
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
        let mut out = TrigPoly::new(self.dim);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                out.insert_add(k1.add(k2), c1 * c2);
            }
        }
        out
    }

    fn neg(&self) -> Self {
        TrigPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return TrigPoly::new(self.dim);
        }
        TrigPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, c)| (*k, c * s)).collect(),
        }
    }

    fn conj(&self) -> Self {
        TrigPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.neg(), c.conj()))
                .collect(),
        }
    }

    fn partial(&self, j: usize) -> Self {
        let mut out = TrigPoly::new(self.dim);
        for (k, c) in &self.terms {
            let kj = k.get(j);
            if kj != 0 {
                out.terms
                    .insert(*k, c.mul_i().scale_q(&Q::from_integer(kj.into())));
            }
        }
        out
    }

    fn eval_at_zero(&self) -> Scalar {
        let mut s = Scalar::zero();
        for c in self.terms.values() {
            s += c;
        }
        s
    }

    fn eval_f64(&self, x: &[f64]) -> Complex<f64> {
        let mut s = Complex::new(0.0, 0.0);
        for (k, c) in &self.terms {
            let phase: f64 = (0..self.dim).map(|j| k.get(j) as f64 * x[j]).sum();
            s += c.to_c64() * Complex::from_polar(1.0, phase);
        }
        s
    }

    fn eval_exact(&self, x: &[Q]) -> Option<Scalar> {
        use num_traits::Zero;
        if x.iter().all(|v| v.is_zero()) {
            Some(self.eval_at_zero())
        } else if self.terms.keys().all(|k| k.is_zero()) {
            Some(self.eval_at_zero())
        } else {
            None
        }
    }

    fn terms(&self) -> Vec<(Mode, Scalar)> {
        self.terms.iter().map(|(k, c)| (*k, c.clone())).collect()
    }

    fn key_quotients(num: &[Mode], den: &[Mode]) -> Vec<Mode> {
        let set: std::collections::BTreeSet<Mode> = num
            .iter()
            .flat_map(|a| den.iter().map(move |b| a.add(&b.neg())))
            .collect();
        set.into_iter().collect()
    }
    fn coordinate_probe(dim: usize, j: usize) -> Option<Self> {
        Some(TrigPoly::monomial(dim, Mode::unit(j), Scalar::one()))
    }
    fn key_size(key: &Mode) -> u32 {
        key.sup_norm()
    }
}
