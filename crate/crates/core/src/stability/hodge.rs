use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use crate::coeff::{Mode, Scalar, TrigPoly};
use crate::error::{GkError, Result};
use crate::gc::{
    gk_check, induced_structure, mode_d_matrix, Bigrading, GCStructure, Point, POSITIVITY_TOL,
};
use crate::linalg::{Matrix, MinNormSolver};
use crate::multivector::FormField;

/// A constant structure `J` with canonical spinor `φ` and a constant closed
/// pure spinor `ψ` such that `(J, J_ψ)` is generalized Kähler.
#[derive(Clone, Debug)]
pub struct GKOneSpinor {
    j: GCStructure,
    j_psi: GCStructure,
    phi: FormField<Scalar>,
    psi: FormField<Scalar>,
    bigrading: Bigrading,
}

impl GKOneSpinor {
    pub fn new(j: GCStructure, psi: FormField<Scalar>) -> Result<Self> {
        let phi = j
            .canonical_spinor()
            .cloned()
            .ok_or_else(|| GkError::Invalid("J carries no canonical spinor".into()))?;
        let j_psi = induced_structure(&psi)?;
        let report = gk_check(&j, &j_psi, &[Point::Origin], POSITIVITY_TOL);
        if !report.passed() {
            return Err(GkError::Invalid(format!(
                "(J, J_ψ) is not generalized Kähler: {report:?}"
            )));
        }
        let bigrading = Bigrading::new(&j, &j_psi)?;
        let n = j.n() as i32;
        if bigrading.project(&psi, (0, -n)) != psi {
            return Err(GkError::Invalid("ψ does not lie in U^{0,-n}".into()));
        }
        Ok(GKOneSpinor {
            j,
            j_psi,
            phi,
            psi,
            bigrading,
        })
    }

    /// `(J_cx, e^{iω_K})` on the flat torus `T^m`.
    pub fn flat_kahler(m: usize) -> Self {
        let psi = GCStructure::kahler_symplectic(m)
            .canonical_spinor()
            .cloned()
            .expect("symplectic spinor");
        Self::new(GCStructure::standard_complex(m), psi).expect("flat Kähler model")
    }

    pub fn m(&self) -> usize {
        self.j.m()
    }

    pub fn n(&self) -> i32 {
        self.j.n() as i32
    }

    pub fn j(&self) -> &GCStructure {
        &self.j
    }

    pub fn j_psi(&self) -> &GCStructure {
        &self.j_psi
    }

    pub fn phi(&self) -> &FormField<Scalar> {
        &self.phi
    }

    pub fn psi(&self) -> &FormField<Scalar> {
        &self.psi
    }

    pub fn bigrading(&self) -> &Bigrading {
        &self.bigrading
    }

    /// Level of `K¹`.
    pub fn k1_level(&self) -> (i32, i32) {
        (0, -self.n() + 2)
    }

    /// The four levels of `K²`.
    pub fn k2_levels(&self) -> [(i32, i32); 4] {
        let n = self.n();
        [(1, -n + 1), (-1, -n + 1), (1, -n + 3), (-1, -n + 3)]
    }
}

/// Per-mode data of `d: K¹ → Ω•`.
#[derive(Debug)]
pub struct ModeBlock {
    pub mode: Mode,
    /// `d_k` on all forms.
    pub d: Matrix,
    /// `d_k π_{K¹}`.
    pub d_k1: Matrix,
    solver: MinNormSolver,
}

impl ModeBlock {
    /// Minimal-norm `β ∈ K¹` with `d_k β = γ`.
    pub fn solve(&self, gamma: &[Scalar]) -> Option<Vec<Scalar>> {
        self.solver.solve(gamma)
    }

    /// `d*` on this mode, landing in `K¹`.
    pub fn d_star(&self, gamma: &[Scalar]) -> Vec<Scalar> {
        self.d_k1.adjoint().mul_vec(gamma)
    }
}

/// Exact per-Fourier-mode Hodge theory of `(K•, d)` with the flat Hermitian
/// product; blocks are built on first use.
#[derive(Debug)]
pub struct ModeHodge {
    m: usize,
    mode_cap: u32,
    p_k1: Matrix,
    p_k2: Matrix,
    k1_basis: Matrix,
    blocks: Mutex<BTreeMap<Mode, Arc<ModeBlock>>>,
}

/// Builds the Hodge data for retained modes `|k|_∞ ≤ mode_cap`.
pub fn k_complex(gk: &GKOneSpinor, mode_cap: u32) -> Result<ModeHodge> {
    let bg = gk.bigrading();
    let p_k1 = bg.projector(gk.k1_level());
    let size = p_k1.rows();
    let p_k2 = gk
        .k2_levels()
        .iter()
        .fold(Matrix::zeros(size, size), |acc, l| {
            acc.add(&bg.projector(*l))
        });
    // Minimal-norm solves stay inside K¹ only for orthogonal projectors.
    if p_k1.adjoint() != p_k1 || p_k2.adjoint() != p_k2 {
        return Err(GkError::Invalid(
            "bigrading projectors are not orthogonal".into(),
        ));
    }
    let k1_basis = p_k1.column_basis();
    Ok(ModeHodge {
        m: gk.m(),
        mode_cap,
        p_k1,
        p_k2,
        k1_basis,
        blocks: Mutex::new(BTreeMap::new()),
    })
}

fn mode_label(k: &Mode, m: usize) -> String {
    format!("{:?}", k.entries(m))
}

impl ModeHodge {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn mode_cap(&self) -> u32 {
        self.mode_cap
    }

    pub fn k1_projector(&self) -> &Matrix {
        &self.p_k1
    }

    pub fn k2_projector(&self) -> &Matrix {
        &self.p_k2
    }

    /// Dimension of the fibre of `K¹`.
    pub fn k1_rank(&self) -> usize {
        self.k1_basis.cols()
    }

    pub fn k2_rank(&self) -> usize {
        self.p_k2.rank()
    }

    fn check_mode(&self, k: &Mode) -> Result<()> {
        if k.sup_norm() > self.mode_cap {
            return Err(GkError::ModeCapExceeded {
                support: k.sup_norm(),
                reason: format!("mode {} outside the retained cube", mode_label(k, self.m)),
            });
        }
        Ok(())
    }

    pub fn block(&self, k: &Mode) -> Result<Arc<ModeBlock>> {
        self.check_mode(k)?;
        let mut cache = self.blocks.lock().expect("mode cache");
        if let Some(b) = cache.get(k) {
            return Ok(b.clone());
        }
        let d = mode_d_matrix(self.m, k);
        let d_k1 = d.mul(&self.p_k1);
        let solver = MinNormSolver::new(&d_k1);
        let block = Arc::new(ModeBlock {
            mode: *k,
            d,
            d_k1,
            solver,
        });
        cache.insert(*k, block.clone());
        Ok(block)
    }

    pub fn in_k1(&self, alpha: &FormField<TrigPoly>) -> bool {
        alpha.apply_matrix(&self.p_k1) == *alpha
    }

    pub fn in_k2(&self, alpha: &FormField<TrigPoly>) -> bool {
        alpha.apply_matrix(&self.p_k2) == *alpha
    }

    /// Minimal-norm `β ∈ K¹` with `dβ = γ`, mode by mode.
    pub fn hodge_solve(&self, gamma: &FormField<TrigPoly>) -> Result<FormField<TrigPoly>> {
        let mut parts = BTreeMap::new();
        for (k, v) in gamma.by_key() {
            let block = self.block(&k)?;
            let beta = block.solve(&v).ok_or_else(|| GkError::NotExact {
                mode: mode_label(&k, self.m),
            })?;
            parts.insert(k, beta);
        }
        Ok(FormField::from_keyed(self.m, self.m, &parts))
    }

    /// Basis of `ker(d) ∩ K¹` on one mode, as constant coordinate vectors.
    pub fn harmonic_at(&self, k: &Mode) -> Result<Vec<Vec<Scalar>>> {
        self.check_mode(k)?;
        let null = mode_d_matrix(self.m, k).mul(&self.k1_basis).nullspace();
        Ok(null.iter().map(|x| self.k1_basis.mul_vec(x)).collect())
    }

    /// `ker` of the `K¹` Laplacian `d*d` for every retained mode; since
    /// `K⁰ = 0` this is `ker(d) ∩ K¹`.
    pub fn harmonic_h1(&self) -> Result<Vec<FormField<TrigPoly>>> {
        let mut out = Vec::new();
        for k in Mode::cube(self.m, self.mode_cap) {
            for v in self.harmonic_at(&k)? {
                let parts = BTreeMap::from([(k, v)]);
                out.push(FormField::from_keyed(self.m, self.m, &parts));
            }
        }
        Ok(out)
    }

    /// Mode-0 harmonic basis as constant forms.
    pub fn constant_harmonics(&self) -> Vec<FormField<Scalar>> {
        self.harmonic_at(&Mode::zero())
            .expect("mode 0 is always retained")
            .iter()
            .map(|v| FormField::from_vec(self.m, v))
            .collect()
    }
}
