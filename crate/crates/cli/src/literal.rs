//! Exact literals in scene files and reports.
//!
//! Rationals are strings `"p/q"` (or `"p"`), Gaussian rationals are
//! `{"re": "p/q", "im": "p/q"}`. Function coefficients list their terms with
//! a `key`: a Fourier mode on the torus, an exponent of `z₁…z_n` on a chart.
//! Words are products of generator names separated by `*` or `^`:
//! `d<i>` (∂_i), `dx<i>`, `dz<j>`, `dzb<j>`, `Dz<j>` (∂_{z_j}), `Dzb<j>`,
//! all one-based, with `z_j = x_{2j−1} + i·x_{2j}`.

use gk_core::coeff::{format_q, parse_q, AffinePoly, Coeff, Exponent, Mode, Scalar, TrigPoly, Q};
use gk_core::multivector::word::{form_word_name, word_name};
use gk_core::multivector::{CliffordElement, FormField};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::CliError;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussLit {
    #[serde(default)]
    pub re: Option<String>,
    #[serde(default)]
    pub im: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermLit {
    pub key: Vec<i64>,
    #[serde(default)]
    pub re: Option<String>,
    #[serde(default)]
    pub im: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum CoeffLit {
    Real(String),
    Terms { terms: Vec<TermLit> },
    Gauss(GaussLit),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordLit {
    pub word: String,
    pub coeff: CoeffLit,
}

pub fn rational(s: &str, at: &str) -> Result<Q, CliError> {
    parse_q(s).ok_or_else(|| CliError::Parse(format!("{at}: `{s}` is not a rational")))
}

fn gauss_parts(re: &Option<String>, im: &Option<String>, at: &str) -> Result<Scalar, CliError> {
    let part = |p: &Option<String>| {
        p.as_deref()
            .map_or(Ok(Q::from_integer(0.into())), |s| rational(s, at))
    };
    Ok(Scalar::new(part(re)?, part(im)?))
}

pub fn gauss(g: &GaussLit, at: &str) -> Result<Scalar, CliError> {
    gauss_parts(&g.re, &g.im, at)
}

/// Coefficient rings a literal can be read into.
pub trait ReadCoeff: Coeff {
    /// Model dimension `dim` is the number of real coordinates.
    fn read_term(dim: usize, key: &[i64], c: Scalar, at: &str) -> Result<Self, CliError>;
}

impl ReadCoeff for Scalar {
    fn read_term(_: usize, key: &[i64], c: Scalar, at: &str) -> Result<Self, CliError> {
        if key.iter().any(|&k| k != 0) {
            return Err(CliError::Validation(format!(
                "{at}: constant expected, found key {key:?}"
            )));
        }
        Ok(c)
    }
}

impl ReadCoeff for TrigPoly {
    fn read_term(dim: usize, key: &[i64], c: Scalar, at: &str) -> Result<Self, CliError> {
        if key.len() != dim {
            return Err(CliError::Validation(format!(
                "{at}: mode {key:?} must have {dim} entries"
            )));
        }
        if key.iter().any(|k| k.unsigned_abs() > i16::MAX as u64) {
            return Err(CliError::Validation(format!(
                "{at}: mode {key:?} out of range"
            )));
        }
        Ok(TrigPoly::monomial(dim, Mode::from_slice(key), c))
    }
}

impl ReadCoeff for AffinePoly {
    fn read_term(dim: usize, key: &[i64], c: Scalar, at: &str) -> Result<Self, CliError> {
        if key.len() != dim / 2 || key.iter().any(|&k| !(0..=16).contains(&k)) {
            return Err(CliError::Validation(format!(
                "{at}: exponent {key:?} must have {} entries in 0..=16",
                dim / 2
            )));
        }
        let alpha: Vec<u32> = key.iter().map(|&k| k as u32).collect();
        Ok(AffinePoly::holomorphic_monomial(dim, &alpha, c))
    }
}

pub fn coeff<C: ReadCoeff>(lit: &CoeffLit, dim: usize, at: &str) -> Result<C, CliError> {
    match lit {
        CoeffLit::Real(s) => Ok(C::constant(dim, Scalar::real(rational(s, at)?))),
        CoeffLit::Gauss(g) => Ok(C::constant(dim, gauss(g, at)?)),
        CoeffLit::Terms { terms } => {
            let mut out = C::zero(dim);
            for (i, t) in terms.iter().enumerate() {
                let at = format!("{at}.terms[{i}]");
                let c = gauss_parts(&t.re, &t.im, &at)?;
                out = out.add(&C::read_term(dim, &t.key, c, &at)?);
            }
            Ok(out)
        }
    }
}

/// One factor of a word as a constant degree-one element.
fn factor(m: usize, name: &str, at: &str) -> Result<(CliffordElement<Scalar>, bool), CliError> {
    let bad = || CliError::Parse(format!("{at}: unknown generator `{name}`"));
    let split = name.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
    let (base, idx) = name.split_at(split);
    let idx: usize = idx.parse().map_err(|_| bad())?;
    let real = |i: usize| (1..=m).contains(&i);
    let cplx = |j: usize| (1..=m / 2).contains(&j) && m % 2 == 0;
    let out_of_range = || {
        CliError::Validation(format!(
            "{at}: index in `{name}` out of range for dimension {m}"
        ))
    };
    let half = Scalar::ratio(1, 2);
    let pair = |first: CliffordElement<Scalar>, second: CliffordElement<Scalar>, s: Scalar| {
        first.add(&second.scale(&s))
    };
    Ok(match base {
        "d" if real(idx) => (CliffordElement::vector(m, 0, idx - 1), false),
        "dx" if real(idx) => (CliffordElement::covector(m, 0, idx - 1), true),
        "dz" | "dzb" if cplx(idx) => {
            let s = if base == "dz" {
                Scalar::i()
            } else {
                -Scalar::i()
            };
            let e = pair(
                CliffordElement::covector(m, 0, 2 * idx - 2),
                CliffordElement::covector(m, 0, 2 * idx - 1),
                s,
            );
            (e, true)
        }
        "Dz" | "Dzb" if cplx(idx) => {
            let s = if base == "Dz" {
                -Scalar::i()
            } else {
                Scalar::i()
            };
            let e = pair(
                CliffordElement::vector(m, 0, 2 * idx - 2),
                CliffordElement::vector(m, 0, 2 * idx - 1),
                s,
            );
            (e.scale(&half), false)
        }
        "d" | "dx" | "dz" | "dzb" | "Dz" | "Dzb" => return Err(out_of_range()),
        _ => return Err(bad()),
    })
}

/// The word as a Clifford product, and whether every factor is a covector.
fn word(m: usize, w: &str, at: &str) -> Result<(CliffordElement<Scalar>, bool), CliError> {
    let w = w.trim();
    if w == "1" {
        return Ok((CliffordElement::one(m, 0), true));
    }
    let mut out = CliffordElement::one(m, 0);
    let mut covector = true;
    for name in w.split(['*', '^']) {
        let (f, cov) = factor(m, name.trim(), at)?;
        out = out.mul(&f);
        covector &= cov;
    }
    Ok((out, covector))
}

pub fn clifford<C: ReadCoeff>(
    records: &[RecordLit],
    m: usize,
    dim: usize,
    at: &str,
) -> Result<CliffordElement<C>, CliError> {
    let mut out = CliffordElement::zero(m, dim);
    for (i, r) in records.iter().enumerate() {
        let at = format!("{at}[{i}]");
        let (w, _) = word(m, &r.word, &at)?;
        out.add_assign(
            &w.lift(dim)
                .mul_coeff(&coeff::<C>(&r.coeff, dim, &format!("{at}.coeff"))?),
        );
    }
    Ok(out)
}

/// A form literal: each word must be a product of covectors, read as a wedge.
pub fn form<C: ReadCoeff>(
    records: &[RecordLit],
    m: usize,
    dim: usize,
    at: &str,
) -> Result<FormField<C>, CliError> {
    let mut out = FormField::zero(m, dim);
    let one = FormField::<Scalar>::one(m, 0);
    for (i, r) in records.iter().enumerate() {
        let at = format!("{at}[{i}]");
        let (w, covector) = word(m, &r.word, &at)?;
        if !covector {
            return Err(CliError::Validation(format!(
                "{at}: `{}` is not a form word",
                r.word
            )));
        }
        let c = coeff::<C>(&r.coeff, dim, &format!("{at}.coeff"))?;
        out.add_assign(&w.spin(&one).lift(dim).mul_coeff(&c));
    }
    Ok(out)
}

// Output.

pub fn q_json(x: &Q) -> Value {
    Value::String(format_q(x))
}

pub fn scalar_json(c: &Scalar) -> Value {
    json!({ "re": format_q(&c.re), "im": format_q(&c.im) })
}

/// Ring-specific key rendering for reports.
pub trait WriteCoeff: Coeff {
    fn key_json(&self, key: &Self::Key) -> Value;
}

impl WriteCoeff for Scalar {
    fn key_json(&self, _: &()) -> Value {
        json!([])
    }
}

impl WriteCoeff for TrigPoly {
    fn key_json(&self, key: &Mode) -> Value {
        json!(key.entries(self.dim()))
    }
}

impl WriteCoeff for AffinePoly {
    /// Exponents of the real coordinates `x₁…x_{2n}`.
    fn key_json(&self, key: &Exponent) -> Value {
        json!((0..self.dim()).map(|j| key.get(j)).collect::<Vec<_>>())
    }
}

pub fn coeff_json<C: WriteCoeff>(c: &C) -> Value {
    match c.as_constant() {
        Some(s) => scalar_json(&s),
        None => {
            let terms: Vec<Value> = c
                .terms()
                .iter()
                .map(|(k, s)| json!({ "key": c.key_json(k), "re": format_q(&s.re), "im": format_q(&s.im) }))
                .collect();
            json!({ "terms": terms })
        }
    }
}

pub fn clifford_json<C: WriteCoeff>(e: &CliffordElement<C>) -> Value {
    Value::Array(
        e.terms()
            .iter()
            .map(|(w, c)| json!({ "word": word_name(e.m(), *w), "coeff": coeff_json(c) }))
            .collect(),
    )
}

pub fn form_json<C: WriteCoeff>(f: &FormField<C>) -> Value {
    Value::Array(
        f.terms()
            .iter()
            .map(|(s, c)| json!({ "word": form_word_name(*s), "coeff": coeff_json(c) }))
            .collect(),
    )
}
