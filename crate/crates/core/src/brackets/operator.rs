use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::coeff::{Coeff, Scalar};
use crate::error::{GkError, Result};
use crate::multivector::{CliffordElement, FormField};

/// Composition tree over `d` and Clifford multiplication, evaluated on forms.
#[derive(Clone, Debug)]
pub enum OperatorExpr<C: Coeff> {
    D,
    Spin(CliffordElement<C>),
    /// `Compose(a, b)` applies `b` first.
    Compose(Box<OperatorExpr<C>>, Box<OperatorExpr<C>>),
    Add(Box<OperatorExpr<C>>, Box<OperatorExpr<C>>),
    Scale(Scalar, Box<OperatorExpr<C>>),
}

impl<C: Coeff> OperatorExpr<C> {
    pub fn d() -> Self {
        OperatorExpr::D
    }

    pub fn spin(e: &CliffordElement<C>) -> Self {
        OperatorExpr::Spin(e.clone())
    }

    pub fn then(self, first: Self) -> Self {
        OperatorExpr::Compose(Box::new(self), Box::new(first))
    }

    pub fn plus(self, o: Self) -> Self {
        OperatorExpr::Add(Box::new(self), Box::new(o))
    }

    pub fn scaled(self, s: Scalar) -> Self {
        OperatorExpr::Scale(s, Box::new(self))
    }

    pub fn minus(self, o: Self) -> Self {
        self.plus(o.scaled(-Scalar::one()))
    }

    /// `[a, b] = ab − ba`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.clone().then(b.clone()).minus(b.clone().then(a.clone()))
    }

    /// `{a, b} = ab + ba`.
    pub fn anticommutator(a: &Self, b: &Self) -> Self {
        a.clone().then(b.clone()).plus(b.clone().then(a.clone()))
    }

    pub fn eval(&self, alpha: &FormField<C>) -> FormField<C> {
        match self {
            OperatorExpr::D => alpha.d(),
            OperatorExpr::Spin(e) => e.spin(alpha),
            OperatorExpr::Compose(a, b) => a.eval(&b.eval(alpha)),
            OperatorExpr::Add(a, b) => a.eval(alpha).add(&b.eval(alpha)),
            OperatorExpr::Scale(s, a) => a.eval(alpha).scale(s),
        }
    }

    /// Checks `X(gα) = g X(α)` on every basis form for each coordinate probe `g`.
    pub fn check_tensorial(&self, m: usize, rdim: usize) -> Result<()> {
        for j in 0..rdim.min(m) {
            let Some(g) = C::coordinate_probe(rdim, j) else {
                continue;
            };
            for s in 0..(1u32 << m) {
                let alpha = FormField::basis(m, rdim, s, C::one(rdim));
                let lhs = self.eval(&alpha.mul_coeff(&g));
                let rhs = self.eval(&alpha).mul_coeff(&g);
                if lhs != rhs {
                    return Err(GkError::NotTensorial(format!(
                        "probe x{} on dx-word {s:#b}",
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// The unique Clifford element whose spin action equals this operator,
    /// after verifying that the operator is tensorial.
    pub fn to_clifford(&self, m: usize, rdim: usize) -> Result<CliffordElement<C>> {
        self.check_tensorial(m, rdim)?;
        let units = matrix_units(m);
        let mut out = CliffordElement::zero(m, rdim);
        for s in 0..(1usize << m) {
            let image = self.eval(&FormField::basis(m, rdim, s as u32, C::one(rdim)));
            for (t, c) in image.terms() {
                out.add_assign(&units[*t as usize][s].lift::<C>(rdim).mul_coeff(c));
            }
        }
        Ok(out)
    }
}

impl<C: Coeff> OperatorExpr<C> {
    /// Extraction when the result is expected in `CL¹`: read `θ = X(1)` and
    /// `v_i = X(dx^i)|₀`, then verify the candidate on every basis form.
    pub fn to_degree_one(&self, m: usize, rdim: usize) -> Result<CliffordElement<C>> {
        self.check_tensorial(m, rdim)?;
        let not_one = || GkError::DegreeError("operator is not Clifford degree 1".into());
        let image = self.eval(&FormField::one(m, rdim));
        let mut v: Vec<C> = vec![C::zero(rdim); 2 * m];
        for (s, c) in image.terms() {
            if s.count_ones() != 1 {
                return Err(not_one());
            }
            v[m + s.trailing_zeros() as usize] = c.clone();
        }
        for (i, vi) in v.iter_mut().enumerate().take(m) {
            let img = self.eval(&FormField::basis(m, rdim, 1 << i, C::one(rdim)));
            *vi = img.coeff(0);
        }
        let cand = CliffordElement::from_vector(m, rdim, &v);
        for s in 0..(1u32 << m) {
            let alpha = FormField::basis(m, rdim, s, C::one(rdim));
            if cand.spin(&alpha) != self.eval(&alpha) {
                return Err(not_one());
            }
        }
        Ok(cand)
    }
}

type Units = Arc<Vec<Vec<CliffordElement<Scalar>>>>;

/// Elements `E_{T,S}` with `E_{T,S}·dx^{S'} = δ_{S,S'} dx^T`.
///
/// `E_{T,S} = ± dx^T · P₀ · ∂_S` where `P₀ = Π_i ∂_i dx^i` projects onto
/// degree 0 and `∂_S` contracts `dx^S` to `±1`.
pub fn matrix_units(m: usize) -> Units {
    static CACHE: OnceLock<Mutex<BTreeMap<usize, Units>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(u) = cache.lock().expect("unit cache").get(&m) {
        return u.clone();
    }
    let n = 1usize << m;
    let mut p0 = CliffordElement::<Scalar>::one(m, 0);
    for i in 0..m {
        let pair = CliffordElement::vector(m, 0, i).mul(&CliffordElement::covector(m, 0, i));
        p0 = p0.mul(&pair);
    }
    let contract: Vec<CliffordElement<Scalar>> = (0..n as u32)
        .map(|s| {
            let word = s; // ∂ generators occupy the low bits
            let e = CliffordElement::from_word(m, 0, word, Scalar::one());
            let img = e.spin(&FormField::basis(m, 0, s, Scalar::one()));
            let sign = img.coeff(0);
            e.scale(&sign.inv().expect("contraction of dx^S is ±1"))
        })
        .collect();
    let units: Vec<Vec<CliffordElement<Scalar>>> = (0..n as u32)
        .map(|t| {
            let wedge = CliffordElement::from_word(m, 0, t << m, Scalar::one());
            let left = wedge.mul(&p0);
            let sign = wedge.spin(&FormField::one(m, 0)).coeff(t);
            let left = left.scale(&sign);
            contract.iter().map(|c| left.mul(c)).collect()
        })
        .collect();
    let units = Arc::new(units);
    cache.lock().expect("unit cache").insert(m, units.clone());
    units
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::TrigPoly;

    #[test]
    fn units_act_as_matrix_units() {
        let m = 2;
        let u = matrix_units(m);
        for t in 0..4u32 {
            for s in 0..4u32 {
                for s2 in 0..4u32 {
                    let img =
                        u[t as usize][s as usize].spin(&FormField::basis(m, 0, s2, Scalar::one()));
                    let expect = if s == s2 {
                        FormField::basis(m, 0, t, Scalar::one())
                    } else {
                        FormField::zero(m, 0)
                    };
                    assert_eq!(img, expect);
                }
            }
        }
    }

    #[test]
    fn d_is_not_tensorial() {
        let op = OperatorExpr::<TrigPoly>::d();
        assert!(matches!(
            op.to_clifford(2, 2),
            Err(GkError::NotTensorial(_))
        ));
    }

    #[test]
    fn spin_roundtrip() {
        let f = TrigPoly::exp_mode(2, &[1, -1], Scalar::int(2));
        let e = CliffordElement::<TrigPoly>::vector(2, 2, 0)
            .mul(&CliffordElement::covector(2, 2, 1))
            .mul_coeff(&f)
            .add(&CliffordElement::one(2, 2));
        assert_eq!(OperatorExpr::spin(&e).to_clifford(2, 2).unwrap(), e);
    }
}
