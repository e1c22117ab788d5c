use num_traits::{One, Zero};

use crate::coeff::Q;

use super::solver::DeformationReport;

/// `M_ν = c^{ν−1}/(16ν²)` for `ν ≥ 1`, `M_0 = 0`.
pub fn majorant_coeffs(c: &Q, nu_max: usize) -> Vec<Q> {
    let mut out = vec![Q::zero()];
    let mut cp = Q::one();
    for nu in 1..=nu_max {
        out.push(&cp / Q::from_integer((16 * nu * nu).into()));
        cp *= c;
    }
    out
}

fn square(s: &[Q]) -> Vec<Q> {
    let n = s.len() - 1;
    let mut out = vec![Q::zero(); n + 1];
    for i in 1..=n {
        for j in 1..=n - i {
            out[i + j] += &s[i] * &s[j];
        }
    }
    out
}

/// `e^{s} − 1` for a series with zero constant term, by `νE_ν = Σ_j jM_jE_{ν−j}`.
fn exp_minus_one(s: &[Q]) -> Vec<Q> {
    let n = s.len() - 1;
    let mut e = vec![Q::one()];
    for nu in 1..=n {
        let mut acc = Q::zero();
        for j in 1..=nu {
            acc += Q::from_integer(j.into()) * &s[j] * &e[nu - j];
        }
        e.push(acc / Q::from_integer(nu.into()));
    }
    e[0] = Q::zero();
    e
}

/// Rational upper bound for `e^λ`, `λ ≥ 0`: a Taylor partial sum plus the
/// geometric tail bound `λ^{T+1}/(T+1)! · (T+2)/(T+2−λ)`.
pub fn exp_upper_bound(lambda: &Q) -> Q {
    let two = Q::from_integer(2.into());
    let mut t = 0usize;
    while Q::from_integer((t + 2).into()) <= two.clone() * lambda {
        t += 1;
    }
    t += 20;
    let mut sum = Q::zero();
    let mut term = Q::one();
    for j in 0..=t {
        sum += &term;
        term = term * lambda / Q::from_integer((j + 1).into());
    }
    let tp2 = Q::from_integer((t + 2).into());
    sum + term * &tp2 / (&tp2 - lambda)
}

/// First `ν ≤ nu_max` with `(M²)_ν ≥ (1/c)M_ν`.
pub fn square_domination_failure(c: &Q, nu_max: usize) -> Option<usize> {
    let m = majorant_coeffs(c, nu_max);
    let m2 = square(&m);
    (1..=nu_max).find(|&nu| !(m2[nu] < &m[nu] / c))
}

/// First `ν ≤ nu_max` with `(e^{M} − 1)_ν > ((e^λ_ub − 1)/λ)M_ν`.
pub fn exponential_domination_failure(c: &Q, lambda: &Q, nu_max: usize) -> Option<usize> {
    let m = majorant_coeffs(c, nu_max);
    let factor = (exp_upper_bound(lambda) - Q::one()) / lambda;
    let em = exp_minus_one(&m);
    (1..=nu_max).find(|&nu| em[nu] > &factor * &m[nu])
}

/// Majorant bounds in the coefficient `ℓ¹` surrogate norm.
#[derive(Clone, Debug)]
pub struct MajorantCertificate {
    pub c: Q,
    pub lambda: Q,
    pub nu_max: usize,
    /// `(M²)_ν < (1/c)M_ν` for `1 ≤ ν ≤ nu_max`.
    pub squares_dominated: bool,
    pub first_square_failure: Option<usize>,
    pub exp_lambda_upper: Q,
    /// `(e^{M} − 1)_ν ≤ ((e^λ − 1)/λ)M_ν` for `1 ≤ ν ≤ nu_max`.
    pub exponential_dominated: bool,
    pub first_exponential_failure: Option<usize>,
    pub norms: Option<NormTracking>,
}

/// Surrogate-norm comparison of a solver run with `M(t)`.
#[derive(Clone, Debug)]
pub struct NormTracking {
    /// Smallest `K₁` with `‖a_k‖ ≤ K₁M_k` for all `k ≤ N`.
    pub k1_min: Q,
    pub k2_min: Q,
    pub k1_feasible: bool,
    pub k2_feasible: bool,
    /// `‖z_k‖ ≤ M_k` for all `k ≤ N`.
    pub z_dominated: bool,
    pub sum_below_one: bool,
}

impl MajorantCertificate {
    pub fn passed(&self) -> bool {
        self.squares_dominated
            && self.exponential_dominated
            && self
                .norms
                .as_ref()
                .is_none_or(|n| n.k1_feasible && n.k2_feasible && n.z_dominated && n.sum_below_one)
    }
}

fn max_ratio(norms: &[Q], m: &[Q]) -> Q {
    norms
        .iter()
        .zip(m)
        .skip(1)
        .map(|(a, b)| a / b)
        .fold(Q::zero(), |x, y| if y > x { y } else { x })
}

pub fn majorant_certificate(
    c: &Q,
    lambda: &Q,
    k1: &Q,
    k2: &Q,
    nu_max: usize,
    report: Option<&DeformationReport>,
) -> MajorantCertificate {
    assert!(
        c > &Q::zero() && lambda > &Q::zero(),
        "c and λ must be positive"
    );
    let n_needed = nu_max.max(report.map_or(0, DeformationReport::order));
    let m = majorant_coeffs(c, n_needed);
    let first_square_failure = square_domination_failure(c, nu_max);
    let e_ub = exp_upper_bound(lambda);
    let first_exponential_failure = exponential_domination_failure(c, lambda, nu_max);
    let norms = report.map(|r| {
        let na: Vec<Q> = r.a.coeffs().iter().map(|x| x.l1_norm()).collect();
        let nb: Vec<Q> = r.b.coeffs().iter().map(|x| x.l1_norm()).collect();
        let nz: Vec<Q> = r.z.coeffs().iter().map(|x| x.l1_norm()).collect();
        let k1_min = max_ratio(&na, &m);
        let k2_min = max_ratio(&nb, &m);
        NormTracking {
            k1_feasible: &k1_min <= k1,
            k2_feasible: &k2_min <= k2,
            z_dominated: nz.iter().zip(&m).skip(1).all(|(a, b)| a <= b),
            sum_below_one: &k1_min + &k2_min < Q::one(),
            k1_min,
            k2_min,
        }
    });
    MajorantCertificate {
        c: c.clone(),
        lambda: lambda.clone(),
        nu_max,
        squares_dominated: first_square_failure.is_none(),
        first_square_failure,
        exp_lambda_upper: e_ub,
        exponential_dominated: first_exponential_failure.is_none(),
        first_exponential_failure,
        norms,
    }
}
