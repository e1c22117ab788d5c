use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number used for both parts of a [`Scalar`].
pub type Q = BigRational;

/// Builds the rational `p/q`. Panics when `q == 0`.
pub fn q(p: i64, d: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(d))
}

pub fn qi(p: i64) -> Q {
    Q::from_integer(BigInt::from(p))
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.25"`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = int.trim_start().starts_with('-');
        let int_abs = int.trim().trim_start_matches(['-', '+']);
        let int_val = if int_abs.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(int_abs).ok()?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_val = BigInt::from_str(frac).ok()?;
        let mag = Q::new(int_val * &scale + frac_val, scale);
        return Some(if neg { -mag } else { mag });
    }
    BigInt::from_str(s).ok().map(Q::from_integer)
}

/// Formats a rational as `"p/q"`, or `"p"` for integers.
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Ratios of huge integers: fall back to scaled division.
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Gaussian rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar {
    pub re: Q,
    pub im: Q,
}

impl Scalar {
    pub fn new(re: Q, im: Q) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar {
            re: Q::zero(),
            im: Q::zero(),
        }
    }

    pub fn one() -> Self {
        Scalar::int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar {
            re: Q::zero(),
            im: Q::one(),
        }
    }

    pub fn int(n: i64) -> Self {
        Scalar {
            re: qi(n),
            im: Q::zero(),
        }
    }

    pub fn ratio(p: i64, d: i64) -> Self {
        Scalar {
            re: q(p, d),
            im: Q::zero(),
        }
    }

    pub fn real(re: Q) -> Self {
        Scalar { re, im: Q::zero() }
    }

    pub fn imag(im: Q) -> Self {
        Scalar { re: Q::zero(), im }
    }

    /// `k·i` for an integer `k`.
    pub fn i_times(k: i64) -> Self {
        Scalar {
            re: Q::zero(),
            im: qi(k),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// `|z|²`, exact.
    pub fn norm_sq(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }

    /// `|re| + |im|`, the coefficient weight used by the surrogate norm.
    pub fn l1(&self) -> Q {
        self.re.abs() + self.im.abs()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sq();
        Some(Scalar {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        Scalar {
            re: -&self.im,
            im: self.re.clone(),
        }
    }

    pub fn scale_q(&self, r: &Q) -> Self {
        Scalar {
            re: &self.re * r,
            im: &self.im * r,
        }
    }

    pub fn to_c64(&self) -> nalgebra::Complex<f64> {
        nalgebra::Complex::new(q_to_f64(&self.re), q_to_f64(&self.im))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", format_q(&self.re)),
            (true, false) => write!(f, "{}i", format_q(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(
                    f,
                    "({}{}{}i)",
                    format_q(&self.re),
                    sign,
                    format_q(&self.im.abs())
                )
            }
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<Q> for Scalar {
    fn from(r: Q) -> Self {
        Scalar::real(r)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.im.is_zero() && o.im.is_zero() {
            return Scalar::real(&self.re * &o.re);
        }
        Scalar {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.inv().expect("division by zero Scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: -self.re,
            im: -self.im,
        }
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);
by_value!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}
