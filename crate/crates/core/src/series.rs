//! Truncated formal power series in λ.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{q, rational_sqrt, C, Q};

/// Coefficient ring of a λ-series.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn scale(&self, c: &C) -> Self;
    fn conj(&self) -> Self;
    /// Pointwise inverse of a leading coefficient, when it exists in the ring.
    fn pointwise_inverse(&self) -> Option<Self>;
    /// The value as a constant, if it is one.
    fn as_constant(&self) -> Option<C>;
    fn add_assign(&mut self, o: &Self) {
        *self = Coeff::add(self, o);
    }
}

impl Coeff for C {
    fn zero() -> Self {
        C::zero()
    }
    fn one() -> Self {
        C::one()
    }
    fn is_zero(&self) -> bool {
        C::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, c: &C) -> Self {
        self * c
    }
    fn conj(&self) -> Self {
        C::conj(self)
    }
    fn pointwise_inverse(&self) -> Option<Self> {
        self.inv()
    }
    fn as_constant(&self) -> Option<C> {
        Some(self.clone())
    }
}

impl Coeff for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Poly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Poly::sub(self, o)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        Poly::mul(self, o)
    }
    fn scale(&self, c: &C) -> Self {
        Poly::scale(self, c)
    }
    fn conj(&self) -> Self {
        Poly::conj(self)
    }
    /// Invertible exactly when the polynomial is a single term `c·exp(-Q)` with trivial monomial.
    fn pointwise_inverse(&self) -> Option<Self> {
        if self.len() != 1 {
            return None;
        }
        let (k, c) = self.terms().next().unwrap();
        if !k.mono.is_one() {
            return None;
        }
        let mut key = k.clone();
        key.gauss = k.gauss.neg();
        Some(Poly::term(key, c.inv()?))
    }
    fn add_assign(&mut self, o: &Self) {
        Poly::add_assign(self, o);
    }
    fn as_constant(&self) -> Option<C> {
        Poly::as_constant(self)
    }
}

/// `Σ_{r=0}^{K} λ^r c_r`, exact modulo λ^(K+1).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Series<T> {
    c: Vec<T>,
}

/// Observables: λ-series of (Gaussian-extended) polynomials.
pub type Observable = Series<Poly>;
/// Scalar λ-series.
pub type Scalar = Series<C>;

impl<T: Coeff> Series<T> {
    pub fn zero(k: usize) -> Self {
        Series { c: vec![T::zero(); k + 1] }
    }
    pub fn one(k: usize) -> Self {
        Series::constant(T::one(), k)
    }
    pub fn constant(t: T, k: usize) -> Self {
        let mut s = Series::zero(k);
        s.c[0] = t;
        s
    }
    /// `t · λ^r`.
    pub fn monomial(t: T, r: usize, k: usize) -> Self {
        let mut s = Series::zero(k);
        if r <= k {
            s.c[r] = t;
        }
        s
    }
    /// Build from coefficients, padding with zeros or truncating to order `k`.
    pub fn from_coeffs(mut c: Vec<T>, k: usize) -> Self {
        c.resize(k + 1, T::zero());
        Series { c }
    }
    pub fn order(&self) -> usize {
        self.c.len() - 1
    }
    pub fn coeff(&self, r: usize) -> &T {
        &self.c[r]
    }
    pub fn coeff_mut(&mut self, r: usize) -> &mut T {
        &mut self.c[r]
    }
    pub fn coeffs(&self) -> &[T] {
        &self.c
    }
    pub fn classical(&self) -> &T {
        &self.c[0]
    }
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|t| t.is_zero())
    }
    /// Lowest λ-order with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|t| !t.is_zero())
    }
    pub fn with_order(&self, k: usize) -> Self {
        Series::from_coeffs(self.c.clone(), k)
    }
    pub fn map(&self, f: impl Fn(&T) -> T) -> Self {
        Series { c: self.c.iter().map(f).collect() }
    }
    pub fn map_into<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Series<U> {
        Series { c: self.c.iter().map(f).collect() }
    }
    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        Series { c: self.c.iter().zip(&o.c).map(|(a, b)| a.add(b)).collect() }
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.check(o);
        Series { c: self.c.iter().zip(&o.c).map(|(a, b)| a.sub(b)).collect() }
    }
    pub fn add_assign(&mut self, o: &Self) {
        self.check(o);
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            if !b.is_zero() {
                a.add_assign(b);
            }
        }
    }
    pub fn neg(&self) -> Self {
        self.map(|t| t.neg())
    }
    pub fn scale(&self, c: &C) -> Self {
        self.map(|t| t.scale(c))
    }
    pub fn conj(&self) -> Self {
        self.map(|t| t.conj())
    }
    /// Multiply by λ^r.
    pub fn shift(&self, r: usize) -> Self {
        let k = self.order();
        let mut s = Series::zero(k);
        for i in 0..=k {
            if i + r <= k {
                s.c[i + r] = self.c[i].clone();
            }
        }
        s
    }
    /// Multiply by a scalar series.
    pub fn scale_series(&self, s: &Scalar) -> Self {
        let k = self.order();
        let mut out: Self = Series::zero(k);
        for (i, a) in s.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for j in 0..=k - i.min(k) {
                if i + j > k {
                    break;
                }
                if !self.c[j].is_zero() {
                    let t = self.c[j].scale(a);
                    out.c[i + j].add_assign(&t);
                }
            }
        }
        out
    }
    /// Cauchy product truncated at K.
    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        if self.order() != o.order() {
            return Err(Error::MismatchedOrder(self.order(), o.order()));
        }
        let k = self.order();
        let mut out: Self = Series::zero(k);
        for i in 0..=k {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..=k - i {
                if !o.c[j].is_zero() {
                    let t = self.c[i].mul(&o.c[j]);
                    out.c[i + j].add_assign(&t);
                }
            }
        }
        Ok(out)
    }
    /// Cauchy product; panics on mismatched orders (use [`Series::try_mul`] to handle it).
    pub fn mul(&self, o: &Self) -> Self {
        self.try_mul(o).unwrap()
    }

    /// Inverse with respect to `mul`, seeded by the pointwise inverse of the leading coefficient.
    pub fn inverse_with(&self, mul: &dyn Fn(&Self, &Self) -> Self) -> Result<Self> {
        let k = self.order();
        let b0 = self.c[0]
            .pointwise_inverse()
            .ok_or_else(|| Error::NonInvertible(format!("{:?}", self.c[0])))?;
        let b0 = Series::constant(b0, k);
        // a⋆b0 = 1 - E with E = O(λ); a^{-1} = b0 ⋆ Σ E^j
        let e = Series::one(k).sub(&mul(self, &b0));
        let mut sum = Series::one(k);
        let mut pow = Series::one(k);
        for _ in 0..k {
            pow = mul(&pow, &e);
            sum = sum.add(&pow);
        }
        Ok(mul(&b0, &sum))
    }
    pub fn inverse(&self) -> Result<Self> {
        self.inverse_with(&|a, b| a.mul(b))
    }

    /// Square root with respect to `mul`; the leading term must be a positive rational square.
    pub fn sqrt_with(&self, mul: &dyn Fn(&Self, &Self) -> Self) -> Result<Self> {
        let k = self.order();
        let a0 = self.c[0]
            .as_constant()
            .filter(|c| c.is_real())
            .ok_or_else(|| Error::NotPerfectSquare(format!("{:?}", self.c[0])))?;
        let s = rational_sqrt(&a0.re)
            .filter(|s| !s.is_zero())
            .ok_or_else(|| Error::NotPerfectSquare(format!("{}", a0)))?;
        let inv = C::real(Q::one() / &a0.re);
        let x = self.scale(&inv).sub(&Series::one(k));
        let mut sum = Series::one(k);
        let mut pow = Series::one(k);
        let mut binom = Q::one();
        for j in 1..=k {
            // binom(1/2, j) = binom(1/2, j-1) · (1/2 - (j-1)) / j
            binom = binom * (crate::scalar::qf(1, 2) - q(j as i64 - 1)) / q(j as i64);
            pow = mul(&pow, &x);
            sum = sum.add(&pow.scale(&C::real(binom.clone())));
        }
        Ok(sum.scale(&C::real(s)))
    }
    pub fn sqrt(&self) -> Result<Self> {
        self.sqrt_with(&|a, b| a.mul(b))
    }

    fn check(&self, o: &Self) {
        assert_eq!(
            self.order(),
            o.order(),
            "mismatched truncation orders {} vs {}",
            self.order(),
            o.order()
        );
    }
}

impl Scalar {
    /// `c · λ^r` as a scalar series.
    pub fn lambda_pow(c: C, r: usize, k: usize) -> Scalar {
        Series::monomial(c, r, k)
    }
}

impl Observable {
    pub fn from_poly(p: Poly, k: usize) -> Observable {
        Series::constant(p, k)
    }
    pub fn from_scalar(s: &Scalar) -> Observable {
        s.map_into(|c| Poly::constant(c.clone()))
    }
    /// Apply a λ-independent linear map coefficientwise.
    pub fn map_poly(&self, f: impl Fn(&Poly) -> Poly) -> Observable {
        self.map(|p| if p.is_zero() { Poly::zero() } else { f(p) })
    }
    pub fn diff(&self, v: usize) -> Observable {
        self.map_poly(|p| p.diff(v))
    }
    pub fn depends_on(&self, v: usize) -> bool {
        self.c.iter().any(|p| p.depends_on(v))
    }
    /// Scalar series if every coefficient is constant.
    pub fn as_scalar(&self) -> Option<Scalar> {
        let c: Option<Vec<C>> = self.c.iter().map(|p| p.as_constant()).collect();
        c.map(|c| Series { c })
    }
    pub fn display(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (r, p) in self.c.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let s = p.display(names);
            parts.push(match r {
                0 => s,
                1 => format!("λ*({s})"),
                _ => format!("λ^{r}*({s})"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl<T: Coeff + fmt::Display> fmt::Display for Series<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (r, t) in self.c.iter().enumerate() {
            if t.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match r {
                0 => write!(f, "{t}")?,
                _ => write!(f, "λ^{r}*({t})")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qf;

    fn qv() -> Poly {
        Poly::var(0)
    }
    fn pv() -> Poly {
        Poly::var(1)
    }
    fn obs(cs: Vec<Poly>) -> Observable {
        Series::from_coeffs(cs, 4)
    }

    #[test]
    fn difference_of_squares() {
        let a = obs(vec![Poly::one(), qv()]);
        let b = obs(vec![Poly::one(), qv().neg()]);
        let expect = obs(vec![Poly::one(), Poly::zero(), qv().mul(&qv()).neg()]);
        assert_eq!(a.mul(&b), expect);
        assert!(a.mul(&Series::zero(4)).is_zero());
    }

    #[test]
    fn polynomial_expansion() {
        let a = obs(vec![qv(), pv()]);
        let b = obs(vec![pv()]);
        assert_eq!(a.mul(&b), obs(vec![qv().mul(&pv()), pv().mul(&pv())]));
    }

    #[test]
    fn mismatched_orders() {
        let a: Observable = Series::one(3);
        let b: Observable = Series::one(4);
        assert_eq!(a.try_mul(&b), Err(Error::MismatchedOrder(3, 4)));
    }

    #[test]
    fn geometric_inverse() {
        let a = obs(vec![Poly::one(), qv()]);
        let inv = a.inverse().unwrap();
        // oracle: Σ (-λq)^j
        let mut expect = Vec::new();
        let mut pw = Poly::one();
        for j in 0..=4 {
            expect.push(if j % 2 == 0 { pw.clone() } else { pw.neg() });
            pw = pw.mul(&qv());
        }
        assert_eq!(inv, obs(expect));
        let two: Scalar = Series::constant(C::int(2), 4);
        assert_eq!(two.inverse().unwrap(), Series::constant(C::frac(1, 2), 4));
        assert!(obs(vec![qv()]).inverse().is_err());
    }

    #[test]
    fn newton_sqrt() {
        let a = obs(vec![Poly::constant(C::int(4)), qv().scale(&C::int(4))]);
        let s = a.sqrt().unwrap();
        assert_eq!(s.coeff(0), &Poly::constant(C::int(2)));
        assert_eq!(s.coeff(1), &qv());
        assert_eq!(s.coeff(2), &qv().mul(&qv()).scale(&C::frac(-1, 4)));
        assert_eq!(s.mul(&s), a);
        let bad = obs(vec![Poly::constant(C::int(2))]);
        assert!(matches!(bad.sqrt(), Err(Error::NotPerfectSquare(_))));
        let neg: Scalar = Series::constant(C::real(qf(-1, 1)), 2);
        assert!(neg.sqrt().is_err());
    }
}
