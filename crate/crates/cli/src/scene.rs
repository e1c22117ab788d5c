//! Scene files: the JSON description of a problem, and its validation.

use std::path::Path;

use gk_core::brackets::{decompose_lbar, lie_algebroid_d, schouten};
use gk_core::coeff::{AffinePoly, Scalar, TrigPoly, MAX_DIM, Q};
use gk_core::gc::{bivector_as_clifford, form_as_clifford, GCStructure};
use gk_core::linalg::Matrix;
use gk_core::multivector::{CliffordElement, FormField};
use gk_core::poisson::PoissonBivector;
use gk_core::sample::Sampler;
use gk_core::series::CliffordSeries;
use gk_core::stability::{series_support, GKOneSpinor};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};
use crate::literal::{self, CoeffLit, GaussLit, ReadCoeff, RecordLit};

pub const DEFAULT_ORDER: usize = 3;
pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_POSITIVITY_TOL: f64 = 1e-9;
pub const DEFAULT_FLOAT_TOL: f64 = 1e-6;
/// Largest number of points a lattice grid may expand to.
pub const MAX_GRID_POINTS: usize = 100_000;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum ModelLit {
    Torus { m: usize, mode_cap: u32 },
    Chart { n: usize },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum StructureLit {
    Complex,
    Symplectic { omega: Vec<RecordLit> },
    PureSpinor(Vec<RecordLit>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaTermLit {
    pub j: usize,
    pub k: usize,
    pub coeff: CoeffLit,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum DeformationLit {
    None,
    Bfield(Vec<RecordLit>),
    Beta(Vec<BetaTermLit>),
    EpsilonSeries(Vec<Vec<RecordLit>>),
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesLit {
    pub positivity: Option<f64>,
    pub float: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeLit {
    pub lo: String,
    pub hi: String,
    pub steps: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum GridLit {
    Points(Vec<Vec<String>>),
    Lattice(LatticeLit),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CbhLit {
    pub a: Vec<Vec<RecordLit>>,
    pub b: Vec<Vec<RecordLit>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MajorantLit {
    pub c: Option<String>,
    pub lambda: Option<String>,
    pub k1: Option<String>,
    pub k2: Option<String>,
    pub nu_max: Option<usize>,
}

/// The scene file as written.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub model: ModelLit,
    #[serde(default)]
    pub structure: Option<StructureLit>,
    #[serde(default)]
    pub spinor: Option<Vec<RecordLit>>,
    #[serde(default)]
    pub deformation: Option<DeformationLit>,
    #[serde(default)]
    pub order: Option<usize>,
    #[serde(default)]
    pub s: Option<Vec<GaussLit>>,
    #[serde(default)]
    pub tolerances: Option<TolerancesLit>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub grid: Option<GridLit>,
    #[serde(default)]
    pub cbh: Option<CbhLit>,
    #[serde(default)]
    pub majorant: Option<MajorantLit>,
    #[serde(default)]
    pub samples: Option<Vec<Vec<f64>>>,
}

/// Command-line values that take precedence over the scene.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub order: Option<usize>,
    pub mode_cap: Option<u32>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub positivity: f64,
    pub float: f64,
}

/// A generalized Kähler torus problem: `(J, ψ)` and a deformation `ε(t)`.
#[derive(Clone, Debug)]
pub struct TorusProblem {
    pub m: usize,
    pub mode_cap: u32,
    pub gk: GKOneSpinor,
    /// `ε_0 = 0`; `ε_k ∈ Λ²L̄` for `1 ≤ k ≤ order`.
    pub eps: CliffordSeries<TrigPoly>,
    pub s: Vec<Scalar>,
    pub samples: Vec<Vec<f64>>,
}

/// A holomorphic bivector on the chart `ℂ^n` with its type-map grid.
#[derive(Clone, Debug)]
pub struct ChartProblem {
    pub n: usize,
    pub beta: PoissonBivector,
    /// Exact rational grid points in real coordinates.
    pub grid: Vec<Vec<Q>>,
}

#[derive(Clone, Debug)]
pub enum Problem {
    Torus(TorusProblem),
    Chart(ChartProblem),
}

#[derive(Clone, Debug)]
pub struct Scene {
    pub file: SceneFile,
    pub sha256: String,
    pub order: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub problem: Problem,
}

impl Scene {
    /// Real dimension of the model.
    pub fn m(&self) -> usize {
        match &self.problem {
            Problem::Torus(t) => t.m,
            Problem::Chart(c) => 2 * c.n,
        }
    }
}

pub fn parse_scene(path: &Path, ov: &Overrides) -> CliResult<Scene> {
    let bytes =
        std::fs::read(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    parse_scene_bytes(&bytes, ov)
}

pub fn parse_scene_bytes(bytes: &[u8], ov: &Overrides) -> CliResult<Scene> {
    let sha256 = format!("{:x}", Sha256::digest(bytes));
    let mut de = serde_json::Deserializer::from_slice(bytes);
    let file: SceneFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CliError::Parse(format!(
            "field `{path}` (line {}, column {}): {inner}",
            inner.line(),
            inner.column()
        ))
    })?;
    de.end().map_err(|e| {
        CliError::Parse(format!(
            "trailing data at line {}, column {}",
            e.line(),
            e.column()
        ))
    })?;
    validate(file, sha256, ov)
}

fn validate(file: SceneFile, sha256: String, ov: &Overrides) -> CliResult<Scene> {
    let order = ov.order.or(file.order).unwrap_or(DEFAULT_ORDER);
    if order == 0 {
        return Err(CliError::Validation("order: must be at least 1".into()));
    }
    let seed = ov.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
    let tl = file.tolerances.clone().unwrap_or_default();
    let tolerances = Tolerances {
        positivity: tl.positivity.unwrap_or(DEFAULT_POSITIVITY_TOL),
        float: ov.tolerance.or(tl.float).unwrap_or(DEFAULT_FLOAT_TOL),
    };
    for (name, t) in [
        ("tolerances.positivity", tolerances.positivity),
        ("tolerances.float", tolerances.float),
    ] {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Validation(format!(
                "{name}: must be positive and finite"
            )));
        }
    }
    let problem = match file.model {
        ModelLit::Torus { m, mode_cap } => {
            let cap = ov.mode_cap.unwrap_or(mode_cap);
            Problem::Torus(torus_problem(&file, m, cap, order, seed)?)
        }
        ModelLit::Chart { n } => Problem::Chart(chart_problem(&file, n)?),
    };
    Ok(Scene {
        file,
        sha256,
        order,
        seed,
        tolerances,
        problem,
    })
}

fn torus_problem(
    file: &SceneFile,
    m: usize,
    mode_cap: u32,
    order: usize,
    seed: u64,
) -> CliResult<TorusProblem> {
    if m == 0 || m > MAX_DIM {
        return Err(CliError::Validation(format!(
            "model.torus.m: must lie in 1..={MAX_DIM}"
        )));
    }
    let j = structure(file.structure.as_ref(), m)?;
    let psi = match &file.spinor {
        Some(records) => constant_form(records, m, "spinor")?,
        None => default_partner(file.structure.as_ref(), m)?,
    };
    let gk = GKOneSpinor::new(j, psi).map_err(|e| CliError::from_kernel("spinor", e))?;
    let eps = deformation(file.deformation.as_ref(), &gk, order)?;
    let support = series_support(&eps);
    if support as usize * order > mode_cap as usize {
        return Err(CliError::Validation(format!(
            "deformation: order {order} times mode support {support} exceeds mode_cap {mode_cap}"
        )));
    }
    let s = match &file.s {
        Some(v) => v
            .iter()
            .enumerate()
            .map(|(i, g)| literal::gauss(g, &format!("s[{i}]")))
            .collect::<CliResult<_>>()?,
        None => Vec::new(),
    };
    let samples = match &file.samples {
        Some(pts) => {
            for (i, p) in pts.iter().enumerate() {
                if p.len() != m || p.iter().any(|x| !x.is_finite()) {
                    return Err(CliError::Validation(format!(
                        "samples[{i}]: expected {m} finite coordinates"
                    )));
                }
            }
            pts.clone()
        }
        None => default_samples(m, seed),
    };
    Ok(TorusProblem {
        m,
        mode_cap,
        gk,
        eps,
        s,
        samples,
    })
}

/// The origin and three seeded points of `[0, 2π)^m`.
pub fn default_samples(m: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut s = Sampler::new(seed);
    let mut out = vec![vec![0.0; m]];
    for _ in 0..3 {
        out.push((0..m).map(|_| s.int(0, 6282) as f64 / 1000.0).collect());
    }
    out
}

fn structure(lit: Option<&StructureLit>, m: usize) -> CliResult<GCStructure> {
    match lit {
        None | Some(StructureLit::Complex) => {
            if m % 2 != 0 {
                return Err(CliError::Validation(
                    "structure: a complex structure needs even dimension".into(),
                ));
            }
            Ok(GCStructure::standard_complex(m))
        }
        Some(StructureLit::Symplectic { omega }) => symplectic(omega, m),
        Some(StructureLit::PureSpinor(records)) => {
            let phi = constant_form(records, m, "structure.pure_spinor")?;
            let j = gk_core::gc::induced_structure(&phi)
                .map_err(|e| CliError::from_kernel("structure.pure_spinor", e))?;
            Ok(j.with_spinor(phi))
        }
    }
}

/// `J_ω` from a constant, closed, real, nondegenerate 2-form.
fn symplectic(records: &[RecordLit], m: usize) -> CliResult<GCStructure> {
    let at = "structure.symplectic.omega";
    let w: FormField<TrigPoly> = literal::form(records, m, m, at)?;
    if w.terms().keys().any(|s| s.count_ones() != 2) {
        return Err(CliError::Validation(format!("{at}: ω must be a 2-form")));
    }
    if !w.d().is_zero() {
        return Err(CliError::Validation(format!("{at}: ω not closed")));
    }
    let w = w
        .as_constant()
        .ok_or_else(|| CliError::Validation(format!("{at}: ω must have constant coefficients")))?;
    let mut mat = Matrix::zeros(m, m);
    for (s, c) in w.terms() {
        if !c.is_real() {
            return Err(CliError::Validation(format!("{at}: ω must be real")));
        }
        let i = s.trailing_zeros() as usize;
        let j = (31 - s.leading_zeros()) as usize;
        mat[(i, j)] = c.clone();
        mat[(j, i)] = -c;
    }
    GCStructure::symplectic(&mat)
        .ok_or_else(|| CliError::Validation(format!("{at}: ω is degenerate")))
}

/// The partner spinor used when the scene gives none: `e^{iω_K}` for the
/// complex structure, `dz₁∧…∧dz_n` otherwise.
fn default_partner(lit: Option<&StructureLit>, m: usize) -> CliResult<FormField<Scalar>> {
    match lit {
        None | Some(StructureLit::Complex) => Ok(GCStructure::kahler_symplectic(m)
            .canonical_spinor()
            .cloned()
            .expect("symplectic structures carry a spinor")),
        _ if m % 2 == 0 => Ok(gk_core::gc::holomorphic_volume(m)),
        _ => Err(CliError::Validation(
            "spinor: required in odd dimension".into(),
        )),
    }
}

fn constant_form(records: &[RecordLit], m: usize, at: &str) -> CliResult<FormField<Scalar>> {
    literal::form::<Scalar>(records, m, 0, at)
}

fn deformation(
    lit: Option<&DeformationLit>,
    gk: &GKOneSpinor,
    order: usize,
) -> CliResult<CliffordSeries<TrigPoly>> {
    let m = gk.m();
    let zero = CliffordElement::<TrigPoly>::zero(m, m);
    let mut eps = CliffordSeries::zero(&zero, order);
    let at = "deformation";
    match lit {
        None | Some(DeformationLit::None) => return Ok(eps),
        Some(DeformationLit::Bfield(records)) => {
            let b: FormField<TrigPoly> = literal::form(records, m, m, &format!("{at}.bfield"))?;
            eps.set(1, form_as_clifford(&b));
        }
        Some(DeformationLit::Beta(terms)) => {
            eps.set(1, bivector::<TrigPoly>(terms, m, &format!("{at}.beta"))?);
        }
        Some(DeformationLit::EpsilonSeries(list)) => {
            if list.len() > order {
                return Err(CliError::Validation(format!(
                    "{at}.epsilon_series: {} terms exceed order {order}",
                    list.len()
                )));
            }
            for (k, records) in list.iter().enumerate() {
                let e = literal::clifford::<TrigPoly>(
                    records,
                    m,
                    m,
                    &format!("{at}.epsilon_series[{k}]"),
                )?;
                eps.set(k + 1, e);
            }
        }
    }
    check_maurer_cartan(&eps, gk)?;
    Ok(eps)
}

/// `Σ f_{jk} ∂_{z_j}∧∂_{z_k}` with one-based complex indices.
pub fn bivector<C: ReadCoeff>(
    terms: &[BetaTermLit],
    m: usize,
    at: &str,
) -> CliResult<CliffordElement<C>> {
    if m % 2 != 0 {
        return Err(CliError::Validation(format!(
            "{at}: bivectors in ∂_z need even dimension"
        )));
    }
    let mut out = CliffordElement::zero(m, m);
    for (i, t) in terms.iter().enumerate() {
        let at = format!("{at}[{i}]");
        let (j, k) = complex_pair(t, m / 2, &at)?;
        let f = literal::coeff::<C>(&t.coeff, m, &format!("{at}.coeff"))?;
        let dz = |a: usize| gk_core::poisson::d_z(m / 2, a);
        out.add_assign(&bivector_as_clifford(&f, &dz(j), &dz(k)));
    }
    Ok(out)
}

fn complex_pair(t: &BetaTermLit, n: usize, at: &str) -> CliResult<(usize, usize)> {
    if t.j == t.k || !(1..=n).contains(&t.j) || !(1..=n).contains(&t.k) {
        return Err(CliError::Validation(format!(
            "{at}: need distinct indices j, k in 1..={n}"
        )));
    }
    Ok((t.j - 1, t.k - 1))
}

/// Each `ε_k` lies in `Λ²L̄` and `d_Lε_k + ½Σ_{i+j=k}[ε_i, ε_j] = 0`.
fn check_maurer_cartan(eps: &CliffordSeries<TrigPoly>, gk: &GKOneSpinor) -> CliResult<()> {
    let j = gk.j();
    let m = gk.m();
    let at = |k: usize| format!("deformation: order {k}");
    let mut parts = vec![Vec::new()];
    for k in 1..=eps.order() {
        let dec = decompose_lbar(eps.coeff(k), j, 2)
            .map_err(|e| CliError::Validation(format!("{}: {e}", at(k))))?;
        parts.push(dec);
    }
    for k in 1..=eps.order() {
        let mut r = lie_algebroid_d(eps.coeff(k), gk.phi(), j)
            .map_err(|e| CliError::from_kernel(&at(k), e))?;
        for i in 1..k {
            if parts[i].is_empty() || parts[k - i].is_empty() {
                continue;
            }
            let br = schouten(&parts[i], &parts[k - i], j, m)
                .map_err(|e| CliError::from_kernel(&at(k), e))?;
            r.add_assign(&br.scale(&Scalar::ratio(1, 2)));
        }
        if !r.is_zero() {
            return Err(CliError::Validation(format!(
                "{}: Maurer-Cartan residual is nonzero",
                at(k)
            )));
        }
    }
    Ok(())
}

fn chart_problem(file: &SceneFile, n: usize) -> CliResult<ChartProblem> {
    if n == 0 || 2 * n > MAX_DIM {
        return Err(CliError::Validation(format!(
            "model.chart.n: must lie in 1..={}",
            MAX_DIM / 2
        )));
    }
    if !matches!(file.structure, None | Some(StructureLit::Complex)) {
        return Err(CliError::Validation(
            "structure: chart problems use the complex structure".into(),
        ));
    }
    let mut beta = PoissonBivector::zero(n);
    match &file.deformation {
        None | Some(DeformationLit::None) => {}
        Some(DeformationLit::Beta(terms)) => {
            for (i, t) in terms.iter().enumerate() {
                let at = format!("deformation.beta[{i}]");
                let (j, k) = complex_pair(t, n, &at)?;
                let f: AffinePoly = literal::coeff(&t.coeff, 2 * n, &format!("{at}.coeff"))?;
                beta = beta
                    .with(j, k, &f)
                    .map_err(|e| CliError::from_kernel(&at, e))?;
            }
        }
        Some(_) => {
            return Err(CliError::Validation(
                "deformation: chart problems take a beta bivector".into(),
            ))
        }
    }
    if !beta.is_holomorphic() {
        return Err(CliError::Validation(
            "deformation.beta: coefficients must be holomorphic".into(),
        ));
    }
    let grid = grid(file.grid.as_ref(), 2 * n)?;
    Ok(ChartProblem { n, beta, grid })
}

fn grid(lit: Option<&GridLit>, dim: usize) -> CliResult<Vec<Vec<Q>>> {
    let default = LatticeLit {
        lo: "-1".into(),
        hi: "2".into(),
        steps: 4,
    };
    match lit {
        Some(GridLit::Points(pts)) => pts
            .iter()
            .enumerate()
            .map(|(i, p)| {
                if p.len() != dim {
                    return Err(CliError::Validation(format!(
                        "grid.points[{i}]: expected {dim} coordinates"
                    )));
                }
                p.iter()
                    .map(|s| literal::rational(s, &format!("grid.points[{i}]")))
                    .collect()
            })
            .collect(),
        Some(GridLit::Lattice(l)) => lattice(l, dim),
        None => lattice(&default, dim),
    }
}

fn lattice(l: &LatticeLit, dim: usize) -> CliResult<Vec<Vec<Q>>> {
    let lo = literal::rational(&l.lo, "grid.lattice.lo")?;
    let hi = literal::rational(&l.hi, "grid.lattice.hi")?;
    if l.steps < 2 || hi <= lo {
        return Err(CliError::Validation(
            "grid.lattice: need steps ≥ 2 and lo < hi".into(),
        ));
    }
    let total = (l.steps as u128)
        .checked_pow(dim as u32)
        .unwrap_or(u128::MAX);
    if total > MAX_GRID_POINTS as u128 {
        return Err(CliError::Validation(format!(
            "grid.lattice: {total} points exceed the limit {MAX_GRID_POINTS}"
        )));
    }
    let h = (&hi - &lo) / Q::from_integer(((l.steps - 1) as i64).into());
    let values: Vec<Q> = (0..l.steps)
        .map(|i| &lo + &h * Q::from_integer((i as i64).into()))
        .collect();
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v.clone());
                    q
                })
            })
            .collect();
    }
    Ok(out)
}
