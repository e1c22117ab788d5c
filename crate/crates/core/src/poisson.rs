//! Holomorphic Poisson bivectors on an affine chart of `ℂⁿ`: the classical
//! Schouten test, the spinors `e^{tβ}Ω` and their type stratification.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::brackets::{maurer_cartan_residual, schouten, MaurerCartan, Monomial};
use crate::coeff::{AffinePoly, Coeff, Scalar, Q};
use crate::error::{GkError, Result};
use crate::gc::{bivector_as_clifford, holomorphic_volume, type_at, GCStructure, Point};
use crate::linalg::Matrix;
use crate::multivector::keyed::express_element;
use crate::multivector::{CliffordElement, FormField};
use crate::series::{FormSeries, TruncSeries};

/// Singular-value threshold for the rank of `β(x)` at float points.
pub const RANK_TOL: f64 = 1e-9;

/// `∂/∂z_j = ½(∂_{x_{2j}} − i∂_{x_{2j+1}})` as a constant Clifford element.
pub fn d_z(n: usize, j: usize) -> CliffordElement<Scalar> {
    let m = 2 * n;
    CliffordElement::vector(m, 0, 2 * j)
        .add(&CliffordElement::vector(m, 0, 2 * j + 1).scale(&-Scalar::i()))
        .scale(&Scalar::ratio(1, 2))
}

/// `β = Σ_{j<k} β^{jk} ∂_{z_j}∧∂_{z_k}` with components polynomial in the
/// real chart coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonBivector {
    n: usize,
    comps: BTreeMap<(usize, usize), AffinePoly>,
}

impl PoissonBivector {
    pub fn zero(n: usize) -> Self {
        PoissonBivector {
            n,
            comps: BTreeMap::new(),
        }
    }

    /// Adds `f ∂_{z_j}∧∂_{z_k}`, antisymmetrically.
    pub fn with(mut self, j: usize, k: usize, f: &AffinePoly) -> Result<Self> {
        if j == k || j >= self.n || k >= self.n || f.dim() != 2 * self.n {
            return Err(GkError::Invalid(format!(
                "bad bivector component ({j}, {k})"
            )));
        }
        let (key, g) = if j < k {
            ((j, k), f.clone())
        } else {
            ((k, j), f.neg())
        };
        let cur = self
            .comps
            .remove(&key)
            .unwrap_or_else(|| AffinePoly::zero(2 * self.n));
        let sum = cur.add(&g);
        if !sum.is_zero() {
            self.comps.insert(key, sum);
        }
        Ok(self)
    }

    /// `Σ λ_{ij} V_i∧V_j` for holomorphic vector fields `V_i = Σ_a V_i^a ∂_{z_a}`.
    /// Fails unless the fields pairwise commute.
    pub fn from_commuting(
        n: usize,
        fields: &[Vec<AffinePoly>],
        lambda: &[(usize, usize, Scalar)],
    ) -> Result<Self> {
        for (i, v) in fields.iter().enumerate() {
            for w in &fields[i + 1..] {
                if !lie_bracket(v, w).iter().all(Coeff::is_zero) {
                    return Err(GkError::Invalid("vector fields do not commute".into()));
                }
            }
        }
        let mut out = Self::zero(n);
        for (i, j, l) in lambda {
            let (v, w) = (&fields[*i], &fields[*j]);
            for a in 0..n {
                for b in 0..n {
                    if a != b {
                        let c = v[a].mul(&w[b]).scale(l);
                        if !c.is_zero() {
                            out = out.with(a, b, &c)?;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `β^{jk}` with `β^{kj} = −β^{jk}`.
    pub fn get(&self, j: usize, k: usize) -> AffinePoly {
        let zero = AffinePoly::zero(2 * self.n);
        match j.cmp(&k) {
            std::cmp::Ordering::Less => self.comps.get(&(j, k)).cloned().unwrap_or(zero),
            std::cmp::Ordering::Greater => {
                self.comps.get(&(k, j)).map(AffinePoly::neg).unwrap_or(zero)
            }
            std::cmp::Ordering::Equal => zero,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn is_holomorphic(&self) -> bool {
        self.comps
            .values()
            .all(|f| (0..self.n).all(|j| f.d_zbar(j).is_zero()))
    }

    /// Monomials `[∂_{z_k}·β^{jk}, ∂_{z_j}]`, whose products follow the
    /// dictionary `f·v∧w ↦ f·w·v`.
    pub fn monomials(&self) -> Vec<Monomial<AffinePoly>> {
        let m = 2 * self.n;
        self.comps
            .iter()
            .map(|((j, k), f)| {
                vec![
                    d_z(self.n, *k).lift::<AffinePoly>(m).mul_coeff(f),
                    d_z(self.n, *j).lift(m),
                ]
            })
            .collect()
    }

    pub fn to_clifford(&self) -> CliffordElement<AffinePoly> {
        let m = 2 * self.n;
        self.comps
            .iter()
            .fold(CliffordElement::zero(m, m), |acc, ((j, k), f)| {
                acc.add(&bivector_as_clifford(f, &d_z(self.n, *j), &d_z(self.n, *k)))
            })
    }

    /// Complex matrix `β^{jk}(x)` at exact real chart coordinates.
    pub fn matrix_exact(&self, x: &[Q]) -> Option<Matrix> {
        let mut out = Matrix::zeros(self.n, self.n);
        for ((j, k), f) in &self.comps {
            let v = f.eval_exact(x)?;
            out[(*k, *j)] = -v.clone();
            out[(*j, *k)] = v;
        }
        Some(out)
    }

    pub fn matrix_f64(&self, x: &[f64]) -> DMatrix<nalgebra::Complex<f64>> {
        let mut out = DMatrix::zeros(self.n, self.n);
        for ((j, k), f) in &self.comps {
            let v = f.eval_f64(x);
            out[(*j, *k)] = v;
            out[(*k, *j)] = -v;
        }
        out
    }
}

/// `[V, W]^a = V^b∂_bW^a − W^b∂_bV^a` for holomorphic vector fields.
fn lie_bracket(v: &[AffinePoly], w: &[AffinePoly]) -> Vec<AffinePoly> {
    let n = v.len();
    (0..n)
        .map(|a| {
            (0..n).fold(AffinePoly::zero(v[0].dim()), |acc, b| {
                acc.add(&v[b].mul(&w[a].d_z(b)))
                    .sub(&w[b].mul(&v[a].d_z(b)))
            })
        })
        .collect()
}

/// Components `R^{ijk}` (`i<j<k`) of the classical Schouten square
/// `Σ_l (β^{li}∂_lβ^{jk} + β^{lj}∂_lβ^{ki} + β^{lk}∂_lβ^{ij})`.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonResidual {
    pub components: BTreeMap<(usize, usize, usize), AffinePoly>,
}

impl PoissonResidual {
    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }
}

pub fn poisson_check(beta: &PoissonBivector) -> PoissonResidual {
    let n = beta.n;
    let mut components = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut r = AffinePoly::zero(2 * n);
                for l in 0..n {
                    r = r
                        .add(&beta.get(l, i).mul(&beta.get(j, k).d_z(l)))
                        .add(&beta.get(l, j).mul(&beta.get(k, i).d_z(l)))
                        .add(&beta.get(l, k).mul(&beta.get(i, j).d_z(l)));
                }
                if !r.is_zero() {
                    components.insert((i, j, k), r);
                }
            }
        }
    }
    PoissonResidual { components }
}

/// Comparison of the classical residual with the operator Schouten bracket.
#[derive(Clone, Debug, PartialEq)]
pub struct SchoutenComparison {
    /// `[β, β]` from the Clifford operator path, in the `∂_{z_i}∂_{z_j}∂_{z_k}` basis.
    pub operator: BTreeMap<(usize, usize, usize), AffinePoly>,
    /// Scalar `κ` with `operator = κ·classical`, when both are nonzero.
    pub factor: Option<Scalar>,
    pub agrees: bool,
}

/// Cross-checks [`poisson_check`] against the bracket computed from
/// `[[d, β], β]` on the chart.
pub fn schouten_crosscheck(beta: &PoissonBivector) -> Result<SchoutenComparison> {
    let n = beta.n;
    let m = 2 * n;
    let j = GCStructure::standard_complex(m);
    let eps = beta.monomials();
    let s = if eps.is_empty() {
        CliffordElement::zero(m, m)
    } else {
        schouten(&eps, &eps, &j, m)?
    };
    let mut triples = Vec::new();
    let mut basis = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                triples.push((a, b, c));
                basis.push(d_z(n, a).mul(&d_z(n, b)).mul(&d_z(n, c)));
            }
        }
    }
    let classical = poisson_check(beta);
    let coeffs = if basis.is_empty() {
        (s.is_zero()).then(Vec::new)
    } else {
        express_element(&s, &basis)
    };
    let Some(coeffs) = coeffs else {
        return Ok(SchoutenComparison {
            operator: BTreeMap::new(),
            factor: None,
            agrees: false,
        });
    };
    let operator: BTreeMap<_, _> = triples
        .iter()
        .zip(coeffs)
        .filter(|(_, c)| !c.is_zero())
        .map(|(t, c)| (*t, c))
        .collect();
    let mut factor = None;
    let mut agrees = operator.keys().eq(classical.components.keys());
    for (t, op) in &operator {
        let Some(cl) = classical.components.get(t) else {
            continue;
        };
        let kappa = match &factor {
            Some(k) => k,
            None => {
                let (key, lead) = cl
                    .iter()
                    .next()
                    .map(|(k, v)| (*k, v.clone()))
                    .expect("nonzero");
                let k = op
                    .iter()
                    .find(|(e, _)| **e == key)
                    .map(|(_, v)| v.clone())
                    .unwrap_or_default();
                factor = Some(&k * &lead.inv().expect("nonzero"));
                factor.as_ref().expect("set")
            }
        };
        agrees &= *op == cl.scale(kappa);
    }
    Ok(SchoutenComparison {
        operator,
        factor,
        agrees,
    })
}

/// `ε = β` as an element of `Λ²L̄` for `J_cx`, with its Maurer-Cartan residual
/// relative to `Ω = dz₁∧…∧dz_n`.
pub fn mc_linkage(beta: &PoissonBivector) -> Result<MaurerCartan<AffinePoly>> {
    let m = 2 * beta.n;
    let eps = beta.monomials();
    let j = GCStructure::standard_complex(m);
    maurer_cartan_residual(&eps, &j, &holomorphic_volume(m), m)
}

/// `e^{tβ}Ω` as a series in `t`; the contraction is nilpotent, so the
/// series ends at order `⌊n/2⌋`.
pub fn poisson_spinor(
    beta: &PoissonBivector,
    omega: &FormField<AffinePoly>,
) -> FormSeries<AffinePoly> {
    let order = (beta.n / 2).max(1);
    let e = beta.to_clifford();
    let mut coeffs = vec![omega.clone()];
    let mut term = omega.clone();
    for k in 1..=order {
        term = e.spin(&term).scale(&Scalar::ratio(1, k as i64));
        coeffs.push(term.clone());
    }
    debug_assert!(e.spin(&term).is_zero());
    TruncSeries::from_coeffs(coeffs)
}

/// `Ω = dz₁∧…∧dz_n` on the chart.
pub fn chart_volume(n: usize) -> FormField<AffinePoly> {
    holomorphic_volume(2 * n).lift(2 * n)
}

/// `e^{β}Ω`, the series evaluated at `t = 1`.
pub fn spinor_at_one(s: &FormSeries<AffinePoly>) -> FormField<AffinePoly> {
    s.coeffs()
        .iter()
        .skip(1)
        .fold(s.coeff(0).clone(), |acc, c| acc.add(c))
}

/// A point of the chart in real coordinates `(x_0, …, x_{2n−1})`.
#[derive(Clone, Debug)]
pub enum GridPoint {
    Exact(Vec<Q>),
    Float(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypeSample {
    /// Rank of `β(x)` as a bivector: half the matrix rank.
    pub rank: usize,
    /// `n − 2·rank`.
    pub type_from_rank: usize,
    /// Minimal degree of `e^{β}Ω` at the point.
    pub type_from_spinor: usize,
}

impl TypeSample {
    pub fn agrees(&self) -> bool {
        self.type_from_rank == self.type_from_spinor
    }
}

fn float_rank(a: &DMatrix<nalgebra::Complex<f64>>) -> usize {
    if a.is_empty() {
        return 0;
    }
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .filter(|s| **s > RANK_TOL)
        .count()
}

/// Type at each grid point, from the rank of `β` and from the spinor.
pub fn type_stratify(beta: &PoissonBivector, grid: &[GridPoint]) -> Result<Vec<TypeSample>> {
    let n = beta.n;
    let spinor = spinor_at_one(&poisson_spinor(beta, &chart_volume(n)));
    grid.iter()
        .map(|p| {
            let (mat_rank, point) = match p {
                GridPoint::Exact(x) => {
                    let mat = beta
                        .matrix_exact(x)
                        .ok_or_else(|| GkError::EvaluationError(format!("{x:?}")))?;
                    (mat.rank(), Point::Exact(x.clone()))
                }
                GridPoint::Float(x) => (
                    float_rank(&beta.matrix_f64(x)),
                    Point::Float {
                        x: x.clone(),
                        tol: RANK_TOL,
                    },
                ),
            };
            let rank = mat_rank / 2;
            Ok(TypeSample {
                rank,
                type_from_rank: n - 2 * rank,
                type_from_spinor: type_at(&spinor, &point)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests;
