//! Derived, Courant and Schouten brackets realized as operators on forms.

mod operator;

pub use operator::{matrix_units, OperatorExpr};

use crate::coeff::{Coeff, Scalar};
use crate::error::{GkError, Result};
use crate::gc::{GCStructure, Grading};
use crate::multivector::keyed::{combine, express_element, express_form};
use crate::multivector::{CliffordElement, FormField};

/// A product `E₁E₂⋯E_p` of degree-1 factors; in `Λ^pL̄` it equals the wedge.
pub type Monomial<C> = Vec<CliffordElement<C>>;

pub fn product<C: Coeff>(
    m: usize,
    rdim: usize,
    factors: &[CliffordElement<C>],
) -> CliffordElement<C> {
    factors
        .iter()
        .fold(CliffordElement::one(m, rdim), |acc, f| acc.mul(f))
}

/// `Σ` of the monomial products.
pub fn monomial_sum<C: Coeff>(m: usize, rdim: usize, terms: &[Monomial<C>]) -> CliffordElement<C> {
    let mut out = CliffordElement::zero(m, rdim);
    for t in terms {
        out.add_assign(&product(m, rdim, t));
    }
    out
}

fn require_degree_one<C: Coeff>(e: &CliffordElement<C>) -> Result<()> {
    if e.is_degree_one() {
        Ok(())
    } else {
        Err(GkError::DegreeError(format!("{e:?}")))
    }
}

/// `[E, F]_d = [{d, E}, F]` as an operator.
pub fn derived_bracket<C: Coeff>(
    e: &CliffordElement<C>,
    f: &CliffordElement<C>,
) -> Result<OperatorExpr<C>> {
    require_degree_one(e)?;
    require_degree_one(f)?;
    let de = OperatorExpr::anticommutator(&OperatorExpr::d(), &OperatorExpr::spin(e));
    Ok(OperatorExpr::commutator(&de, &OperatorExpr::spin(f)))
}

/// `[E, F]_d` as a degree-1 element.
pub fn derived_bracket_tensor<C: Coeff>(
    e: &CliffordElement<C>,
    f: &CliffordElement<C>,
) -> Result<CliffordElement<C>> {
    derived_bracket(e, f)?.to_degree_one(e.m(), e.rdim())
}

/// `[E, F]_co = ½[{d,E},F] − ½[{d,F},E]`, with no `d⟨E,F⟩` correction.
pub fn courant_bracket<C: Coeff>(
    e: &CliffordElement<C>,
    f: &CliffordElement<C>,
) -> Result<CliffordElement<C>> {
    let half = Scalar::ratio(1, 2);
    let op = derived_bracket(e, f)?
        .scaled(half.clone())
        .minus(derived_bracket(f, e)?.scaled(half));
    op.to_degree_one(e.m(), e.rdim())
}

/// `[d, X] = dX − Xd` for even `X`.
pub fn d_commutator<C: Coeff>(x: &CliffordElement<C>) -> OperatorExpr<C> {
    OperatorExpr::commutator(&OperatorExpr::d(), &OperatorExpr::spin(x))
}

/// Checks that every factor lies in `L̄_J`, i.e. `J·E = iE`.
pub fn require_lbar<C: Coeff>(j: &GCStructure, terms: &[Monomial<C>]) -> Result<()> {
    for t in terms {
        for e in t {
            if j.apply(e)? != e.scale(&Scalar::i()) {
                return Err(GkError::Invalid(format!("factor {e:?} is not in L̄")));
            }
        }
    }
    Ok(())
}

/// Operator path: `N(ε₁, ε₂) = [[d, ε₁], ε₂]` extracted as a Clifford element.
pub fn schouten_operator<C: Coeff>(
    e1: &CliffordElement<C>,
    e2: &CliffordElement<C>,
) -> Result<CliffordElement<C>> {
    let op = OperatorExpr::commutator(&d_commutator(e1), &OperatorExpr::spin(e2));
    op.to_clifford(e1.m(), e1.rdim())
}

/// Expansion path: `Σ_{i,j} (−1)^{i+j} E₁⋯Ê_i⋯E_p [E_i, F_j]_d F₁⋯F̂_j⋯F_q`,
/// extended bilinearly over the monomials.
pub fn schouten_expansion<C: Coeff>(
    m: usize,
    rdim: usize,
    eps1: &[Monomial<C>],
    eps2: &[Monomial<C>],
) -> Result<CliffordElement<C>> {
    let mut out = CliffordElement::zero(m, rdim);
    for a in eps1 {
        for b in eps2 {
            for (i, ei) in a.iter().enumerate() {
                for (jj, fj) in b.iter().enumerate() {
                    let br = derived_bracket_tensor(ei, fj)?;
                    if br.is_zero() {
                        continue;
                    }
                    let left: Vec<_> = a
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != i)
                        .map(|(_, e)| e.clone())
                        .collect();
                    let right: Vec<_> = b
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != jj)
                        .map(|(_, e)| e.clone())
                        .collect();
                    let term = product(m, rdim, &left)
                        .mul(&br)
                        .mul(&product(m, rdim, &right));
                    // (−1)^{i+j} with one-based indices.
                    out.add_assign(&if (i + jj) % 2 == 0 { term } else { term.neg() });
                }
            }
        }
    }
    Ok(out)
}

/// `[ε₁, ε₂]_L` for sums of decomposables in `Λ²L̄`; both paths must agree.
pub fn schouten<C: Coeff>(
    eps1: &[Monomial<C>],
    eps2: &[Monomial<C>],
    j: &GCStructure,
    rdim: usize,
) -> Result<CliffordElement<C>> {
    require_lbar(j, eps1)?;
    require_lbar(j, eps2)?;
    let m = j.m();
    let a = schouten_operator(&monomial_sum(m, rdim, eps1), &monomial_sum(m, rdim, eps2))?;
    let b = schouten_expansion(m, rdim, eps1, eps2)?;
    if a != b {
        return Err(GkError::PathMismatch(format!(
            "operator {a:?} vs expansion {b:?}"
        )));
    }
    Ok(a)
}

/// Basis `Ē_{a}Ē_{b}Ē_{c}` (`a < b < c`) of `Λ³L̄` for a constant structure.
pub fn lbar_wedge_basis(j: &GCStructure, p: usize) -> Vec<CliffordElement<Scalar>> {
    let lb = j.lbar_basis();
    let m = j.m();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..p).collect();
    if p > lb.len() {
        return out;
    }
    loop {
        let f: Vec<_> = idx.iter().map(|&i| lb[i].clone()).collect();
        out.push(product(m, 0, &f));
        // Next combination in lexicographic order.
        let mut k = p;
        while k > 0 && idx[k - 1] == lb.len() - p + k - 1 {
            k -= 1;
        }
        if k == 0 {
            return out;
        }
        idx[k - 1] += 1;
        for r in k..p {
            idx[r] = idx[r - 1] + 1;
        }
    }
}

fn require_canonical(j: &GCStructure, phi: &FormField<Scalar>) -> Result<Grading> {
    let g = Grading::new(j)?;
    if g.project(phi, -g.n()) != *phi || phi.is_zero() {
        return Err(GkError::Invalid(
            "spinor is not a section of the canonical line".into(),
        ));
    }
    Ok(g)
}

/// `d_Lε` from `π_{U^{−n+3}}[d, ε]φ = (d_Lε)φ` for a constant canonical `φ`.
pub fn lie_algebroid_d<C: Coeff>(
    eps: &CliffordElement<C>,
    phi: &FormField<Scalar>,
    j: &GCStructure,
) -> Result<CliffordElement<C>> {
    let g = require_canonical(j, phi)?;
    let rdim = eps.rdim();
    let phi_c: FormField<C> = phi.lift(rdim);
    let comp = g.project(&d_commutator(eps).eval(&phi_c), -g.n() + 3);
    let basis = lbar_wedge_basis(j, 3);
    let images: Vec<FormField<Scalar>> = basis.iter().map(|b| b.spin(phi)).collect();
    let coeffs = express_form(&comp, &images)
        .ok_or_else(|| GkError::NotIntegrable("U^{-n+3} component outside Λ³L̄·φ".into()))?;
    Ok(combine(j.m(), rdim, &coeffs, &basis))
}

/// Residual of the Maurer-Cartan equation with its projection cross-check.
#[derive(Clone, Debug, PartialEq)]
pub struct MaurerCartan<C: Coeff> {
    /// `d_Lε + ½[ε, ε]_L`.
    pub residual: CliffordElement<C>,
    /// `π_{U^{−n+3}}(e^{−ε} d e^{ε} φ)`.
    pub projection: FormField<C>,
    /// `residual·φ == projection`.
    pub agrees: bool,
}

impl<C: Coeff> MaurerCartan<C> {
    pub fn vanishes(&self) -> bool {
        self.residual.is_zero()
    }
}

pub fn maurer_cartan_residual<C: Coeff>(
    eps: &[Monomial<C>],
    j: &GCStructure,
    phi: &FormField<Scalar>,
    rdim: usize,
) -> Result<MaurerCartan<C>> {
    let g = require_canonical(j, phi)?;
    let e = monomial_sum(j.m(), rdim, eps);
    let dl = lie_algebroid_d(&e, phi, j)?;
    let br = schouten(eps, eps, j, rdim)?;
    let residual = dl.add(&br.scale(&Scalar::ratio(1, 2)));
    let phi_c: FormField<C> = phi.lift(rdim);
    let nilpotent = || GkError::Invalid("ε does not act nilpotently".into());
    let psi = e.exp_spin(&phi_c).ok_or_else(nilpotent)?;
    let back = e.neg().exp_spin(&psi.d()).ok_or_else(nilpotent)?;
    let projection = g.project(&back, -g.n() + 3);
    let agrees = residual.spin(&phi_c) == projection;
    Ok(MaurerCartan {
        residual,
        projection,
        agrees,
    })
}

/// Some degree-1 `E` with `dφ + E·φ = 0`.
///
/// A necessary pointwise test at the origin runs first; the global solve
/// then searches coefficients whose keys are quotients of keys of `dφ` by
/// keys of `φ`. Failure of either is reported as `NotIntegrable`.
pub fn integrability_witness<C: Coeff>(phi: &FormField<C>) -> Result<CliffordElement<C>> {
    let m = phi.m();
    let rdim = phi.rdim();
    crate::gc::annihilator(phi)?;
    let dphi = phi.d();
    if dphi.is_zero() {
        return Ok(CliffordElement::zero(m, rdim));
    }
    let gens: Vec<CliffordElement<Scalar>> = (0..2 * m)
        .map(|g| CliffordElement::generator(m, 0, g))
        .collect();
    let phi0 = phi.eval_at_zero();
    let at0: Vec<FormField<Scalar>> = gens.iter().map(|e| e.spin(&phi0)).collect();
    if express_form(&dphi.eval_at_zero().neg(), &at0).is_none() {
        return Err(GkError::NotIntegrable("dφ(0) is not in CL¹·φ(0)".into()));
    }

    let keys_of = |f: &FormField<C>| {
        let mut ks: Vec<C::Key> = f.by_key().into_keys().collect();
        ks.sort();
        ks
    };
    let cand = C::key_quotients(&keys_of(&dphi), &keys_of(phi));
    let mut unknowns = Vec::new();
    for g in 0..2 * m {
        for k in &cand {
            unknowns.push((g, *k));
        }
    }
    let mut rows: std::collections::BTreeMap<
        (u32, C::Key),
        std::collections::BTreeMap<usize, Scalar>,
    > = Default::default();
    for (col, (g, k)) in unknowns.iter().enumerate() {
        let e = CliffordElement::generator(m, rdim, *g).mul_coeff(&C::monomial(
            rdim,
            *k,
            Scalar::one(),
        ));
        for (s, c) in e.spin(phi).terms() {
            for (key, v) in c.terms() {
                rows.entry((*s, key)).or_default().insert(col, v);
            }
        }
    }
    let mut rhs: std::collections::BTreeMap<(u32, C::Key), Scalar> = Default::default();
    for (s, c) in dphi.neg().terms() {
        for (key, v) in c.terms() {
            rhs.insert((*s, key), v);
        }
    }
    let mut sys = crate::linalg::SparseSystem::new(unknowns.len(), 1);
    for key in rhs.keys() {
        rows.entry(*key).or_default();
    }
    for (key, row) in rows {
        let b = rhs.get(&key).cloned().unwrap_or_else(Scalar::zero);
        sys.push(row, vec![b]);
    }
    let x = sys.solution(0).ok_or_else(|| {
        GkError::NotIntegrable("no witness with coefficients in the search box".into())
    })?;
    let mut out = CliffordElement::zero(m, rdim);
    for ((g, k), v) in unknowns.iter().zip(x) {
        if !v.is_zero() {
            out.add_term(1 << g, &C::monomial(rdim, *k, v));
        }
    }
    debug_assert!(phi.d().add(&out.spin(phi)).is_zero());
    Ok(out)
}

/// `[E_i, E_j]_co·φ = 0` for all pairs of a spanning set of `L_φ`.
pub fn courant_closed<C: Coeff>(basis: &[CliffordElement<C>], phi: &FormField<C>) -> Result<bool> {
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            if !courant_bracket(a, b)?.spin(phi).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Coordinates of a `Λ^pL̄` element in the wedge basis, as monomials whose
/// first factor carries the coefficient function.
pub fn decompose_lbar<C: Coeff>(
    x: &CliffordElement<C>,
    j: &GCStructure,
    p: usize,
) -> Result<Vec<Monomial<C>>> {
    let basis = lbar_wedge_basis(j, p);
    let coeffs = express_element(x, &basis)
        .ok_or_else(|| GkError::Invalid(format!("element is not in Λ^{p}L̄")))?;
    let lb = j.lbar_basis();
    let rdim = x.rdim();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..p).collect();
    for c in coeffs {
        if !c.is_zero() {
            let mut f: Monomial<C> = idx.iter().map(|&i| lb[i].lift(rdim)).collect();
            f[0] = f[0].mul_coeff(&c);
            out.push(f);
        }
        let mut k = p;
        while k > 0 && idx[k - 1] == lb.len() - p + k - 1 {
            k -= 1;
        }
        if k == 0 {
            break;
        }
        idx[k - 1] += 1;
        for r in k..p {
            idx[r] = idx[r - 1] + 1;
        }
    }
    Ok(out)
}
