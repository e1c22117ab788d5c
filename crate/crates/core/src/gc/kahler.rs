use nalgebra::DMatrix;

use crate::coeff::{q_to_f64, Mode, Scalar};
use crate::linalg::Matrix;

use super::grading::{mode_d_matrix, Bigrading, Corner};
use super::spinor::Point;
use super::structure::{pairing_matrix, GCStructure};

/// Default tolerance for the float positivity test of `G`.
pub const POSITIVITY_TOL: f64 = 1e-9;

/// Outcome of [`gk_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct GkReport {
    pub commute: bool,
    /// `Ĝ = −J₀J₁` is self-adjoint for the pairing.
    pub symmetric: bool,
    /// Smallest eigenvalue of `G` at each sample point.
    pub min_eigenvalues: Vec<f64>,
    pub tolerance: f64,
}

impl GkReport {
    pub fn positive(&self) -> bool {
        !self.min_eigenvalues.is_empty() && self.min_eigenvalues.iter().all(|&l| l > self.tolerance)
    }

    pub fn passed(&self) -> bool {
        self.commute && self.symmetric && self.positive()
    }
}

/// `Ĝ = −J₀J₁`.
pub fn metric_endomorphism(j0: &GCStructure, j1: &GCStructure) -> Matrix {
    j0.matrix().mul(j1.matrix()).scale(&-Scalar::one())
}

/// Gram matrix of `G(E, F) = ⟨ĜE, F⟩`.
pub fn metric_matrix(j0: &GCStructure, j1: &GCStructure) -> Matrix {
    metric_endomorphism(j0, j1)
        .transpose()
        .mul(&pairing_matrix(j0.m()))
}

/// Smallest eigenvalue of the real symmetric part of a matrix.
pub fn min_symmetric_eigenvalue(g: &Matrix) -> f64 {
    let n = g.rows();
    let dm = DMatrix::from_fn(n, n, |i, j| {
        0.5 * (q_to_f64(&g[(i, j)].re) + q_to_f64(&g[(j, i)].re))
    });
    dm.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Generalized Kähler test for a commuting pair of constant structures.
///
/// Both structures are constant, so every sample point sees the same `G`;
/// one eigenvalue is still reported per point.
pub fn gk_check(j0: &GCStructure, j1: &GCStructure, samples: &[Point], tolerance: f64) -> GkReport {
    let commute = j0.commutes_with(j1);
    let g_hat = metric_endomorphism(j0, j1);
    let p = pairing_matrix(j0.m());
    let symmetric = g_hat.transpose().mul(&p) == p.mul(&g_hat);
    let g = metric_matrix(j0, j1);
    let lam = if g.conj() == g {
        min_symmetric_eigenvalue(&g)
    } else {
        f64::NEG_INFINITY
    };
    let points = samples.len().max(1);
    GkReport {
        commute,
        symmetric,
        min_eigenvalues: vec![lam; points],
        tolerance,
    }
}

/// `AA* + A*A` with the flat Hermitian adjoint.
pub fn laplacian(a: &Matrix) -> Matrix {
    let adj = a.adjoint();
    a.mul(&adj).add(&adj.mul(a))
}

/// Per-mode Laplacians of `d`, `∂̄_ψ = δ̄₊ + δ₋` and the four corners.
#[derive(Clone, Debug)]
pub struct ModeLaplacians {
    pub d: Matrix,
    pub dbar_psi: Matrix,
    pub corners: [Matrix; 4],
}

impl ModeLaplacians {
    pub fn new(bg: &Bigrading, m: usize, k: &Mode) -> Self {
        let dk = mode_d_matrix(m, k);
        let c: Vec<Matrix> = Corner::ALL
            .iter()
            .map(|c| bg.corner_matrix(k, *c))
            .collect();
        let dbar_psi = c[0].add(&c[3]);
        ModeLaplacians {
            d: laplacian(&dk),
            dbar_psi: laplacian(&dbar_psi),
            corners: [
                laplacian(&c[0]),
                laplacian(&c[1]),
                laplacian(&c[2]),
                laplacian(&c[3]),
            ],
        }
    }

    /// `Δ_d = 2Δ_{∂̄_ψ}`.
    pub fn d_equals_dbar_psi(&self) -> bool {
        self.d == self.dbar_psi.scale(&Scalar::int(2))
    }

    /// `Δ_d = 4Δ_c` for each corner `c`, in [`Corner::ALL`] order.
    pub fn d_equals_corners(&self) -> [bool; 4] {
        let four = Scalar::int(4);
        [0, 1, 2, 3].map(|i| self.d == self.corners[i].scale(&four))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahler_pair_passes() {
        let j0 = GCStructure::standard_complex(4);
        let j1 = GCStructure::kahler_symplectic(4);
        let r = gk_check(&j0, &j1, &[Point::Origin], POSITIVITY_TOL);
        assert!(r.passed(), "{r:?}");
        let flipped = gk_check(
            &j0,
            &GCStructure::standard_symplectic(4),
            &[Point::Origin],
            POSITIVITY_TOL,
        );
        assert!(!flipped.positive());
    }

    #[test]
    fn flat_laplacians() {
        let j0 = GCStructure::standard_complex(4);
        let j1 = GCStructure::kahler_symplectic(4);
        let bg = Bigrading::new(&j0, &j1).unwrap();
        for k in Mode::cube(4, 1) {
            let l = ModeLaplacians::new(&bg, 4, &k);
            assert!(l.d_equals_dbar_psi(), "{k:?}");
            assert_eq!(l.d_equals_corners(), [true; 4], "{k:?}");
        }
    }

    #[test]
    fn opposite_pair_fails() {
        let j = GCStructure::standard_symplectic(2);
        let r = gk_check(&j, &j.neg(), &[Point::Origin], POSITIVITY_TOL);
        assert!(r.commute && r.symmetric && !r.positive());
    }

    #[test]
    fn self_pair_gives_identity() {
        let j = GCStructure::standard_symplectic(2);
        assert_eq!(metric_endomorphism(&j, &j), Matrix::identity(4));
        // G = P here, which has signature (2, 2).
        let r = gk_check(&j, &j, &[Point::Origin], POSITIVITY_TOL);
        assert!(r.commute && r.symmetric && !r.positive());
    }
}
