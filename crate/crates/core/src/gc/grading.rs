use std::collections::BTreeMap;

use crate::coeff::{Coeff, Mode, Scalar};
use crate::error::{GkError, Result};
use crate::linalg::Matrix;
use crate::multivector::{skew_word, CliffordElement, FormField};

use super::structure::GCStructure;

/// `σ(J) ∈ CL^{[2]}` with `[σ(J), E] = J·E` and no grade-0 part.
pub fn so_to_spin(j: &GCStructure) -> Result<CliffordElement<Scalar>> {
    let m = j.m();
    let g2 = 2 * m;
    let pairs: Vec<(usize, usize)> = (0..g2)
        .flat_map(|a| (a + 1..g2).map(move |b| (a, b)))
        .collect();
    let skews: Vec<CliffordElement<Scalar>> = pairs
        .iter()
        .map(|&(a, b)| CliffordElement::from_terms(m, 0, skew_word(m, (1 << a) | (1 << b))))
        .collect();
    let gens: Vec<CliffordElement<Scalar>> = (0..g2)
        .map(|g| CliffordElement::generator(m, 0, g))
        .collect();
    let mut sys = Matrix::zeros(g2 * g2, pairs.len());
    let mut rhs = vec![Scalar::zero(); g2 * g2];
    for (c, ec) in gens.iter().enumerate() {
        for (u, sk) in skews.iter().enumerate() {
            let comm = sk.commutator(ec);
            let v = comm
                .to_vector()
                .map_err(|_| GkError::Unsolvable("commutator left CL¹".into()))?;
            for (g, val) in v.into_iter().enumerate() {
                sys[(c * g2 + g, u)] = val;
            }
        }
        for g in 0..g2 {
            rhs[c * g2 + g] = j.matrix()[(g, c)].clone();
        }
    }
    let x = sys
        .solve(&rhs)
        .ok_or_else(|| GkError::Unsolvable("J is not skew for the pairing".into()))?;
    let mut sigma = CliffordElement::zero(m, 0);
    for (xi, sk) in x.iter().zip(&skews) {
        if !xi.is_zero() {
            sigma.add_assign(&sk.scale(xi));
        }
    }
    Ok(sigma)
}

/// Eigenspace decomposition `U^{-n} ⊕ … ⊕ U^{n}` of forms under `σ(J)`.
#[derive(Clone, Debug)]
pub struct Grading {
    n: i32,
    sigma: CliffordElement<Scalar>,
    action: Matrix,
    projectors: BTreeMap<i32, Matrix>,
}

impl Grading {
    pub fn new(j: &GCStructure) -> Result<Self> {
        let sigma = so_to_spin(j)?;
        let action = sigma.spin_matrix();
        let n = j.n() as i32;
        let size = action.rows();
        let id = Matrix::identity(size);
        let mut projectors = BTreeMap::new();
        for k in -n..=n {
            let mut p = id.clone();
            for jj in (-n..=n).filter(|&jj| jj != k) {
                let shifted = action.sub(&id.scale(&Scalar::i_times(jj as i64)));
                let denom = Scalar::i_times((k - jj) as i64)
                    .inv()
                    .expect("distinct levels");
                p = p.mul(&shifted).scale(&denom);
            }
            projectors.insert(k, p);
        }
        Ok(Grading {
            n,
            sigma,
            action,
            projectors,
        })
    }

    pub fn n(&self) -> i32 {
        self.n
    }

    pub fn sigma(&self) -> &CliffordElement<Scalar> {
        &self.sigma
    }

    /// Spin action of `σ(J)` on basis-form coordinates.
    pub fn action(&self) -> &Matrix {
        &self.action
    }

    /// Projector onto `U^k`; the zero matrix outside `−n..=n`.
    pub fn projector(&self, k: i32) -> Matrix {
        self.projectors.get(&k).cloned().unwrap_or_else(|| {
            let s = self.action.rows();
            Matrix::zeros(s, s)
        })
    }

    pub fn project<C: Coeff>(&self, alpha: &FormField<C>, k: i32) -> FormField<C> {
        match self.projectors.get(&k) {
            Some(p) => alpha.apply_matrix(p),
            None => FormField::zero(alpha.m(), alpha.rdim()),
        }
    }

    /// Nonzero components of `α` by level.
    pub fn decompose<C: Coeff>(&self, alpha: &FormField<C>) -> BTreeMap<i32, FormField<C>> {
        self.projectors
            .iter()
            .map(|(k, p)| (*k, alpha.apply_matrix(p)))
            .filter(|(_, f)| !f.is_zero())
            .collect()
    }
}

/// `u_decompose`: components of `α` in `U^k_J`.
pub fn u_decompose<C: Coeff>(
    alpha: &FormField<C>,
    j: &GCStructure,
) -> Result<BTreeMap<i32, FormField<C>>> {
    Ok(Grading::new(j)?.decompose(alpha))
}

/// The four components of `dα` under a commuting pair `(J₀, J₁)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DSplit<C: Coeff> {
    /// `U^{p,q} → U^{p+1,q+1}`.
    pub dbar_plus: FormField<C>,
    /// `U^{p,q} → U^{p+1,q−1}`.
    pub dbar_minus: FormField<C>,
    /// `U^{p,q} → U^{p−1,q−1}`.
    pub d_plus: FormField<C>,
    /// `U^{p,q} → U^{p−1,q+1}`.
    pub d_minus: FormField<C>,
}

/// Which of the four pieces of `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corner {
    DbarPlus,
    DbarMinus,
    DPlus,
    DMinus,
}

impl Corner {
    pub const ALL: [Corner; 4] = [
        Corner::DbarPlus,
        Corner::DbarMinus,
        Corner::DPlus,
        Corner::DMinus,
    ];

    fn shift(self) -> (i32, i32) {
        match self {
            Corner::DbarPlus => (1, 1),
            Corner::DbarMinus => (1, -1),
            Corner::DPlus => (-1, -1),
            Corner::DMinus => (-1, 1),
        }
    }
}

/// Simultaneous grading `U^{p,q} = U^p_{J₀} ∩ U^q_{J₁}`.
#[derive(Clone, Debug)]
pub struct Bigrading {
    g0: Grading,
    g1: Grading,
    projectors: BTreeMap<(i32, i32), Matrix>,
}

impl Bigrading {
    pub fn new(j0: &GCStructure, j1: &GCStructure) -> Result<Self> {
        if !j0.commutes_with(j1) {
            return Err(GkError::NonCommuting);
        }
        let g0 = Grading::new(j0)?;
        let g1 = Grading::new(j1)?;
        let mut projectors = BTreeMap::new();
        for (p, a) in &g0.projectors {
            for (q, b) in &g1.projectors {
                let prod = a.mul(b);
                if !prod.is_zero() {
                    projectors.insert((*p, *q), prod);
                }
            }
        }
        Ok(Bigrading { g0, g1, projectors })
    }

    pub fn first(&self) -> &Grading {
        &self.g0
    }

    pub fn second(&self) -> &Grading {
        &self.g1
    }

    pub fn levels(&self) -> impl Iterator<Item = &(i32, i32)> {
        self.projectors.keys()
    }

    pub fn projector(&self, pq: (i32, i32)) -> Matrix {
        self.projectors.get(&pq).cloned().unwrap_or_else(|| {
            let s = self.g0.action.rows();
            Matrix::zeros(s, s)
        })
    }

    pub fn project<C: Coeff>(&self, alpha: &FormField<C>, pq: (i32, i32)) -> FormField<C> {
        match self.projectors.get(&pq) {
            Some(p) => alpha.apply_matrix(p),
            None => FormField::zero(alpha.m(), alpha.rdim()),
        }
    }

    pub fn decompose<C: Coeff>(&self, alpha: &FormField<C>) -> BTreeMap<(i32, i32), FormField<C>> {
        self.projectors
            .iter()
            .map(|(k, p)| (*k, alpha.apply_matrix(p)))
            .filter(|(_, f)| !f.is_zero())
            .collect()
    }

    /// `Σ_{p,q} π_{(p,q)+shift} d π_{p,q} α`.
    pub fn d_corner<C: Coeff>(&self, alpha: &FormField<C>, corner: Corner) -> FormField<C> {
        let (dp, dq) = corner.shift();
        let mut out = FormField::zero(alpha.m(), alpha.rdim());
        for ((p, q), comp) in self.decompose(alpha) {
            out.add_assign(&self.project(&comp.d(), (p + dp, q + dq)));
        }
        out
    }

    pub fn d_split<C: Coeff>(&self, alpha: &FormField<C>) -> DSplit<C> {
        DSplit {
            dbar_plus: self.d_corner(alpha, Corner::DbarPlus),
            dbar_minus: self.d_corner(alpha, Corner::DbarMinus),
            d_plus: self.d_corner(alpha, Corner::DPlus),
            d_minus: self.d_corner(alpha, Corner::DMinus),
        }
    }

    /// Matrix of one corner of `d` on the Fourier mode `k`.
    pub fn corner_matrix(&self, k: &Mode, corner: Corner) -> Matrix {
        let m = self.g0.sigma.m();
        let dk = mode_d_matrix(m, k);
        let (dp, dq) = corner.shift();
        let s = dk.rows();
        let mut out = Matrix::zeros(s, s);
        for ((p, q), proj) in &self.projectors {
            if let Some(target) = self.projectors.get(&(p + dp, q + dq)) {
                out = out.add(&target.mul(&dk).mul(proj));
            }
        }
        out
    }
}

/// Matrix of `d` on the mode `e^{i⟨k,x⟩}`: wedge with `i Σ_j k_j dx^j`.
pub fn mode_d_matrix(m: usize, k: &Mode) -> Matrix {
    let mut theta = CliffordElement::<Scalar>::zero(m, 0);
    for j in 0..m {
        let kj = k.get(j);
        if kj != 0 {
            theta.add_assign(&CliffordElement::covector(m, 0, j).scale(&Scalar::i_times(kj)));
        }
    }
    theta.spin_matrix()
}
