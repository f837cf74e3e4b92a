//! Exact scalars: Gaussian rationals and rationals times half-integer powers of π.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// Element `re + i·im` of ℚ(i).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct C {
    pub re: Q,
    pub im: Q,
}

impl C {
    pub fn new(re: Q, im: Q) -> Self {
        C { re, im }
    }
    pub fn real(re: Q) -> Self {
        C { re, im: Q::zero() }
    }
    pub fn int(n: i64) -> Self {
        C::real(q(n))
    }
    pub fn frac(n: i64, d: i64) -> Self {
        C::real(qf(n, d))
    }
    pub fn zero() -> Self {
        C::default()
    }
    pub fn one() -> Self {
        C::int(1)
    }
    pub fn i() -> Self {
        C::new(Q::zero(), q(1))
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
        C::new(self.re.clone(), -&self.im)
    }
    pub fn norm_sqr(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }
    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(C::new(&self.re / &n, -&self.im / &n))
    }
    pub fn scale(&self, r: &Q) -> Self {
        C::new(&self.re * r, &self.im * r)
    }
    pub fn pow(&self, k: u32) -> Self {
        let mut out = C::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

impl fmt::Display for C {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn imag(im: &Q) -> String {
            if im.is_one() {
                "i".into()
            } else if (-im).is_one() {
                "-i".into()
            } else {
                format!("{im}*i")
            }
        }
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}", imag(&self.im)),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "({}-{})", self.re, imag(&-&self.im))
                } else {
                    write!(f, "({}+{})", self.re, imag(&self.im))
                }
            }
        }
    }
}

impl<'a> Add<&'a C> for &'a C {
    type Output = C;
    fn add(self, o: &C) -> C {
        C::new(&self.re + &o.re, &self.im + &o.im)
    }
}
impl<'a> Sub<&'a C> for &'a C {
    type Output = C;
    fn sub(self, o: &C) -> C {
        C::new(&self.re - &o.re, &self.im - &o.im)
    }
}
impl<'a> Mul<&'a C> for &'a C {
    type Output = C;
    fn mul(self, o: &C) -> C {
        if self.im.is_zero() && o.im.is_zero() {
            return C::real(&self.re * &o.re);
        }
        C::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}
impl<'a> Div<&'a C> for &'a C {
    type Output = C;
    fn div(self, o: &C) -> C {
        self * &o.inv().expect("division by zero Gaussian rational")
    }
}
impl Neg for &C {
    type Output = C;
    fn neg(self) -> C {
        C::new(-&self.re, -&self.im)
    }
}
impl Add for C {
    type Output = C;
    fn add(self, o: C) -> C {
        &self + &o
    }
}
impl Sub for C {
    type Output = C;
    fn sub(self, o: C) -> C {
        &self - &o
    }
}
impl Mul for C {
    type Output = C;
    fn mul(self, o: C) -> C {
        &self * &o
    }
}
impl Neg for C {
    type Output = C;
    fn neg(self) -> C {
        -&self
    }
}
impl AddAssign<&C> for C {
    fn add_assign(&mut self, o: &C) {
        *self = &*self + o;
    }
}

impl From<Q> for C {
    fn from(r: Q) -> Self {
        C::real(r)
    }
}

/// A Gaussian rational times π^(k/2).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PiScalar {
    pub value: C,
    pub pi_half_power: i32,
}

impl PiScalar {
    pub fn new(value: C, pi_half_power: i32) -> Self {
        PiScalar { value, pi_half_power }
    }
    pub fn mul(&self, o: &PiScalar) -> PiScalar {
        PiScalar::new(&self.value * &o.value, self.pi_half_power + o.pi_half_power)
    }
    /// Sum of two values; `None` when both are nonzero with different π powers.
    pub fn add(&self, o: &PiScalar) -> Option<PiScalar> {
        if self.value.is_zero() {
            return Some(o.clone());
        }
        if o.value.is_zero() {
            return Some(self.clone());
        }
        (self.pi_half_power == o.pi_half_power)
            .then(|| PiScalar::new(&self.value + &o.value, self.pi_half_power))
    }
    /// Strict positivity; π^(k/2) > 0, so only the rational part matters.
    pub fn is_positive(&self) -> bool {
        self.value.is_real() && self.value.re.is_positive()
    }
}

impl fmt::Display for PiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_half_power {
            0 => write!(f, "{}", self.value),
            k => write!(f, "{}*pi^({}/2)", self.value, k),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let a = C::new(qf(1, 2), q(3));
        let b = C::new(q(-2), qf(1, 3));
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(&(&a + &b) - &b, a);
        assert_eq!(a.conj().conj(), a);
        assert_eq!(&C::i() * &C::i(), C::int(-1));
        assert!(C::zero().inv().is_none());
    }

    #[test]
    fn sqrt_of_squares() {
        assert_eq!(rational_sqrt(&qf(9, 4)), Some(qf(3, 2)));
        assert_eq!(rational_sqrt(&q(2)), None);
        assert_eq!(rational_sqrt(&q(-4)), None);
    }

    #[test]
    fn pi_scalar_rules() {
        let a = PiScalar::new(C::int(2), 1);
        let b = PiScalar::new(C::int(3), 1);
        assert_eq!(a.add(&b).unwrap().value, C::int(5));
        assert_eq!(a.mul(&b).pi_half_power, 2);
        assert!(a.add(&PiScalar::new(C::int(1), 2)).is_none());
        assert!(a.is_positive());
        assert_eq!(format!("{}", C::new(q(1), q(-2))), "(1-2*i)");
        assert_eq!(format!("{}", C::new(q(0), q(1) / q(2))), "1/2*i");
    }
}
