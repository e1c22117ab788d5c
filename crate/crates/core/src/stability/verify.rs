use nalgebra::{Complex, DMatrix};

use crate::coeff::TrigPoly;
use crate::multivector::word::gen_on_form;
use crate::multivector::FormField;
use crate::series::{adjoint_series, exp_action, FormSeries};

use super::hodge::GKOneSpinor;
use super::solver::DeformationReport;

type C64 = Complex<f64>;

/// Parameter values at which the truncated family is evaluated.
pub const SAMPLE_TIMES: [f64; 2] = [0.1, 0.01];

/// Float check of the truncated family at one point.
#[derive(Clone, Debug)]
pub struct FamilySample {
    pub t: f64,
    pub x: Vec<f64>,
    /// Largest entry of `[J_t, J_{ψ_t}]`.
    pub commutator: f64,
    /// Smallest eigenvalue of `G`; `−∞` when a spinor is not pure.
    pub min_eigenvalue: f64,
}

impl FamilySample {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.commutator < tolerance && self.min_eigenvalue > tolerance
    }
}

#[derive(Clone, Debug)]
pub struct FamilyCheck {
    pub closed: bool,
    pub annihilator_transported: bool,
    pub samples: Vec<FamilySample>,
    pub tolerance: f64,
}

impl FamilyCheck {
    pub fn floats_pass(&self) -> bool {
        self.samples.iter().all(|s| s.passes(self.tolerance))
    }

    pub fn floats_pass_at(&self, t: f64) -> bool {
        self.samples
            .iter()
            .filter(|s| s.t == t)
            .all(|s| s.passes(self.tolerance))
    }

    /// Largest commutator defect over the samples at `t`.
    pub fn max_commutator_at(&self, t: f64) -> f64 {
        self.samples
            .iter()
            .filter(|s| s.t == t)
            .map(|s| s.commutator)
            .fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.closed && self.annihilator_transported && self.floats_pass()
    }
}

/// `Σ_k t^k f_k(x)`.
pub fn eval_series(s: &FormSeries<TrigPoly>, t: f64, x: &[f64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); 1 << s.coeff(0).m()];
    let mut tk = 1.0;
    for c in s.coeffs() {
        for (o, v) in out.iter_mut().zip(c.eval_f64(x)) {
            *o += v * tk;
        }
        tk *= t;
    }
    out
}

/// Structure induced by a float spinor: `−i` on the span of the `m` right
/// singular vectors of `E ↦ E·φ` with smallest singular values, `+i` on the
/// conjugate. For a truncated series these span the annihilator only up to
/// the truncation error. `None` if that span meets its conjugate.
pub fn float_structure(m: usize, phi: &[C64]) -> Option<DMatrix<C64>> {
    let size = 1usize << m;
    let mut a = DMatrix::<C64>::zeros(size, 2 * m);
    for (s, v) in phi.iter().enumerate() {
        for g in 0..2 * m {
            if let Some((sign, t)) = gen_on_form(m, g as u32, s as u32) {
                a[(t as usize, g)] += v * sign as f64;
            }
        }
    }
    let svd = a.svd(false, true);
    let vt = svd.v_t?;
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    if idx.len() < 2 * m {
        return None;
    }
    let mut b = DMatrix::<C64>::zeros(2 * m, 2 * m);
    for (col, &r) in idx[..m].iter().enumerate() {
        for i in 0..2 * m {
            let v = vt[(r, i)].conj();
            b[(i, col)] = v;
            b[(i, m + col)] = v.conj();
        }
    }
    let mut d = DMatrix::<C64>::zeros(2 * m, 2 * m);
    for i in 0..m {
        d[(i, i)] = C64::new(0.0, -1.0);
        d[(m + i, m + i)] = C64::new(0.0, 1.0);
    }
    let binv = b.clone().try_inverse()?;
    Some(b * d * binv)
}

fn max_abs(a: &DMatrix<C64>) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Smallest eigenvalue of `G(E, F) = ⟨−J₀J₁E, F⟩` for float structures.
pub fn float_metric_min_eigenvalue(m: usize, j0: &DMatrix<C64>, j1: &DMatrix<C64>) -> f64 {
    let g_hat = -(j0 * j1);
    let mut p = DMatrix::<f64>::zeros(2 * m, 2 * m);
    for i in 0..m {
        p[(i, m + i)] = 0.5;
        p[(m + i, i)] = 0.5;
    }
    let g = g_hat.map(|z| z.re).transpose() * p;
    let sym = (&g + g.transpose()) * 0.5;
    sym.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Checks the family `(J_t, e^{z(t)}ψ)` of a solver run.
pub fn verify_family(
    report: &DeformationReport,
    gk: &GKOneSpinor,
    samples: &[Vec<f64>],
    tolerance: f64,
) -> FamilyCheck {
    let m = gk.m();
    let closed = report.psi_t.d().is_zero();
    let annihilator_transported = gk.j_psi().l_basis().iter().all(|e| {
        adjoint_series(&report.z, &e.lift(m))
            .map(|ad| ad.spin(&report.psi_t).is_zero())
            .unwrap_or(false)
    });
    let phi: FormField<TrigPoly> = gk.phi().lift(m);
    let phi_t = exp_action(&report.a, &phi).expect("a has no constant term");
    let mut out = Vec::new();
    for &t in &SAMPLE_TIMES {
        for x in samples {
            let jt = float_structure(m, &eval_series(&phi_t, t, x));
            let jp = float_structure(m, &eval_series(&report.psi_t, t, x));
            let (commutator, min_eigenvalue) = match (jt, jp) {
                (Some(a), Some(b)) => (
                    max_abs(&(&a * &b - &b * &a)),
                    float_metric_min_eigenvalue(m, &a, &b),
                ),
                _ => (f64::INFINITY, f64::NEG_INFINITY),
            };
            out.push(FamilySample {
                t,
                x: x.clone(),
                commutator,
                min_eigenvalue,
            });
        }
    }
    FamilyCheck {
        closed,
        annihilator_transported,
        samples: out,
        tolerance,
    }
}
