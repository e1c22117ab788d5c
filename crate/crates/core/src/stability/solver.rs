use std::collections::{BTreeMap, BTreeSet};

use crate::coeff::{Coeff, Mode, Scalar, TrigPoly};
use crate::error::{GkError, Result};
use crate::linalg::{Matrix, MinNormSolver};
use crate::multivector::{CliffordElement, FormField};
use crate::series::{cbh_log, exp_action, exp_series, CliffordSeries, FormSeries, TruncSeries};

use super::hodge::{GKOneSpinor, ModeHodge};

/// Output of [`solve_stability`]; all series are stored plain.
#[derive(Clone, Debug)]
pub struct DeformationReport {
    pub a: CliffordSeries<TrigPoly>,
    pub b: CliffordSeries<TrigPoly>,
    pub z: CliffordSeries<TrigPoly>,
    pub psi_t: FormSeries<TrigPoly>,
    /// `Õb_k` for `k = 1..=N`, computed with `b_k = 0`.
    pub obstructions: Vec<FormField<TrigPoly>>,
    /// `β_k = b_k·ψ` for `k = 1..=N`.
    pub betas: Vec<FormField<TrigPoly>>,
    /// `d(ψ_t)_k = 0` for `k = 0..=N`.
    pub closed: Vec<bool>,
    /// `e^{b(t)}φ = φ mod t^{N+1}`.
    pub phi_fixed: bool,
}

impl DeformationReport {
    pub fn order(&self) -> usize {
        self.a.order()
    }

    pub fn passed(&self) -> bool {
        self.phi_fixed && self.closed.iter().all(|&c| c)
    }
}

/// Largest `|k|_∞` appearing in the series.
pub fn series_support(a: &CliffordSeries<TrigPoly>) -> u32 {
    a.coeffs()
        .iter()
        .map(CliffordElement::max_key_size)
        .max()
        .unwrap_or(0)
}

/// Products of `N` inputs with support `M₀` reach `N·M₀`.
pub fn check_mode_budget(a: &CliffordSeries<TrigPoly>, mode_cap: u32) -> Result<()> {
    let support = series_support(a);
    let n = a.order() as u32;
    if support * n > mode_cap {
        return Err(GkError::ModeCapExceeded {
            support,
            reason: format!("order {n} times support {support} exceeds mode_cap {mode_cap}"),
        });
    }
    Ok(())
}

/// `Õb_k = (e^{−z}de^{z})_{[k]}ψ` with `z = log(e^{a}e^{b})` and `b_k = 0`.
///
/// `b_partial` must hold `b_1..b_{k−1}`; entries at orders `≥ k` are ignored.
pub fn obstruction_term(
    gk: &GKOneSpinor,
    hodge: &ModeHodge,
    a: &CliffordSeries<TrigPoly>,
    b_partial: &CliffordSeries<TrigPoly>,
    k: usize,
) -> Result<FormField<TrigPoly>> {
    let rdim = hodge.m();
    let a_k = a.truncate(k);
    let mut b_k = b_partial.truncate(k);
    if b_k.order() < k {
        return Err(GkError::Invalid(
            "b series shorter than the requested order".into(),
        ));
    }
    b_k.set(k, CliffordElement::zero(gk.m(), rdim));
    let z = cbh_log(&a_k, &b_k)?;
    let psi: FormField<TrigPoly> = gk.psi().lift(rdim);
    let dpsi = exp_action(&z, &psi)?.d();
    let ob = exp_series(&z.neg())?.spin(&dpsi).coeff(k).clone();
    if !hodge.in_k2(&ob) {
        return Err(GkError::NotInK2 { order: k });
    }
    Ok(ob)
}

/// Solver for `b ∈ CL⁰ ⊕ CL²` with `b·φ = 0`, `b·φ̄ = 0`, `b·ψ = β`,
/// `b·ψ̄ = β̄`, mode by mode at minimal coefficient norm. The solution set
/// is conjugation invariant, so the minimal-norm `b` is real.
#[derive(Debug)]
pub struct KerOneSolver {
    m: usize,
    basis: Vec<CliffordElement<Scalar>>,
    solver: MinNormSolver,
}

impl KerOneSolver {
    pub fn new(gk: &GKOneSpinor) -> Self {
        let m = gk.m();
        let gens: Vec<_> = (0..2 * m)
            .map(|g| CliffordElement::<Scalar>::generator(m, 0, g))
            .collect();
        let mut basis = vec![CliffordElement::one(m, 0)];
        let half = Scalar::ratio(1, 2);
        for a in 0..2 * m {
            for b in a + 1..2 * m {
                basis.push(gens[a].commutator(&gens[b]).scale(&half));
            }
        }
        let targets = [
            gk.phi().clone(),
            gk.phi().conj(),
            gk.psi().clone(),
            gk.psi().conj(),
        ];
        let cols: Vec<Vec<Scalar>> = basis
            .iter()
            .map(|e| targets.iter().flat_map(|t| e.spin(t).to_vec()).collect())
            .collect();
        let a = Matrix::from_cols(4 << m, &cols);
        KerOneSolver {
            m,
            basis,
            solver: MinNormSolver::new(&a),
        }
    }

    pub fn basis(&self) -> &[CliffordElement<Scalar>] {
        &self.basis
    }

    /// `b` with `b·ψ = β`, `b·φ = 0`, real.
    pub fn recover(
        &self,
        beta: &FormField<TrigPoly>,
        order: usize,
    ) -> Result<CliffordElement<TrigPoly>> {
        let m = self.m;
        let size = 1usize << m;
        let parts = beta.by_key();
        let conj_parts = beta.conj().by_key();
        let modes: BTreeSet<Mode> = parts.keys().chain(conj_parts.keys()).copied().collect();
        let zero = vec![Scalar::zero(); size];
        let mut out = CliffordElement::zero(m, m);
        for k in modes {
            let mut rhs = Vec::with_capacity(4 * size);
            rhs.extend(zero.iter().cloned());
            rhs.extend(zero.iter().cloned());
            rhs.extend(parts.get(&k).unwrap_or(&zero).iter().cloned());
            rhs.extend(conj_parts.get(&k).unwrap_or(&zero).iter().cloned());
            let x = self
                .solver
                .solve(&rhs)
                .ok_or_else(|| GkError::KerSolveFailure {
                    order,
                    mode: format!("{:?}", k.entries(m)),
                })?;
            for (c, e) in x.iter().zip(&self.basis) {
                if !c.is_zero() {
                    out.add_assign(&e.lift::<TrigPoly>(m).mul_coeff(&TrigPoly::monomial(
                        m,
                        k,
                        c.clone(),
                    )));
                }
            }
        }
        if !out.is_real() {
            return Err(GkError::KerSolveFailure {
                order,
                mode: "conjugation".into(),
            });
        }
        Ok(out)
    }
}

/// Order-by-order solution of `d(e^{a(t)}e^{b(t)}ψ) = 0` with `b(t) ∈ ker¹`.
///
/// `s` is a harmonic element of `K¹` added to `β₁`.
pub fn solve_stability(
    gk: &GKOneSpinor,
    hodge: &ModeHodge,
    a: &CliffordSeries<TrigPoly>,
    s: Option<&FormField<TrigPoly>>,
) -> Result<DeformationReport> {
    let m = gk.m();
    let n = a.order();
    check_mode_budget(a, hodge.mode_cap())?;
    if let Some(s) = s {
        if !hodge.in_k1(s) || !s.d().is_zero() {
            return Err(GkError::Invalid("s is not a closed section of K¹".into()));
        }
    }
    let ker = KerOneSolver::new(gk);
    let zero = CliffordElement::<TrigPoly>::zero(m, m);
    let mut b = TruncSeries::zero(&zero, n);
    let mut obstructions = Vec::with_capacity(n);
    let mut betas = Vec::with_capacity(n);
    for k in 1..=n {
        let ob = obstruction_term(gk, hodge, a, &b, k)?;
        let mut beta = hodge.hodge_solve(&ob.neg())?;
        if k == 1 {
            if let Some(s) = s {
                beta = beta.add(s);
            }
        }
        b.set(k, ker.recover(&beta, k)?);
        obstructions.push(ob);
        betas.push(beta);
    }
    let z = cbh_log(a, &b)?;
    let psi_t = exp_action(&z, &gk.psi().lift(m))?;
    let closed = psi_t.d().coeffs().iter().map(FormField::is_zero).collect();
    let phi: FormField<TrigPoly> = gk.phi().lift(m);
    let phi_fixed = exp_action(&b, &phi)? == FormSeries::constant(&phi, n);
    Ok(DeformationReport {
        a: a.clone(),
        b,
        z,
        psi_t,
        obstructions,
        betas,
        closed,
        phi_fixed,
    })
}

/// `e^{a}(e^{b}ψ)` multiplied out term by term without a logarithm.
pub fn expanded_spinor(
    a: &CliffordSeries<TrigPoly>,
    b: &CliffordSeries<TrigPoly>,
    psi: &FormField<Scalar>,
) -> Result<FormSeries<TrigPoly>> {
    let m = psi.m();
    let n = a.order().min(b.order());
    let psi_c: FormField<TrigPoly> = psi.lift(m);
    let ea = exp_series(a)?;
    let eb_psi: Vec<FormField<TrigPoly>> = exp_series(b)?
        .coeffs()
        .iter()
        .map(|c| c.spin(&psi_c))
        .collect();
    let mut out = FormSeries::zero(&psi_c, n);
    for i in 0..=n {
        for j in 0..=n - i {
            let term = ea.coeff(i).spin(&eb_psi[j]);
            out.set(i + j, out.coeff(i + j).add(&term));
        }
    }
    Ok(out)
}

/// Mode-0 part of each order: the de Rham class of a trigonometric form.
pub fn de_rham_class(psi_t: &FormSeries<TrigPoly>) -> Vec<FormField<Scalar>> {
    psi_t
        .coeffs()
        .iter()
        .map(|f| {
            let m = f.m();
            let parts = f.by_key();
            match parts.get(&Mode::zero()) {
                Some(v) => FormField::from_vec(m, v),
                None => FormField::zero(m, 0),
            }
        })
        .collect()
}

/// Degree-wise split of a class.
pub fn class_by_degree(class: &FormField<Scalar>) -> BTreeMap<usize, FormField<Scalar>> {
    (0..=class.m())
        .map(|p| (p, class.degree_part(p)))
        .filter(|(_, f)| !f.is_zero())
        .collect()
}
