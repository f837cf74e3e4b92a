//! Differential operators with λ-series polynomial coefficients, in normal form
//! `Σ_α a_α ∂^α` (coefficients to the left).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gauss::DensityWeight;
use crate::poly::{r64_to_q, Mono, Poly, MAX_VARS};
use crate::scalar::{q, C};
use crate::series::{Observable, Scalar, Series};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffOperator {
    terms: BTreeMap<Mono, Observable>,
    k: usize,
}

fn binom(n: u8, k: u8) -> i64 {
    let mut r: i64 = 1;
    for i in 0..k as i64 {
        r = r * (n as i64 - i) / (i + 1);
    }
    r
}

/// `∂^α f`.
pub fn diff_multi(f: &Observable, alpha: &Mono) -> Observable {
    let mut out = f.clone();
    for v in 0..MAX_VARS {
        for _ in 0..alpha.get(v) {
            out = out.diff(v);
        }
    }
    out
}

impl DiffOperator {
    pub fn zero(k: usize) -> Self {
        DiffOperator { terms: BTreeMap::new(), k }
    }
    pub fn identity(k: usize) -> Self {
        DiffOperator::mult(&Series::one(k))
    }
    /// Multiplication by `f`.
    pub fn mult(f: &Observable) -> Self {
        let mut d = DiffOperator::zero(f.order());
        d.add_term(Mono::one(), f.clone());
        d
    }
    pub fn partial(v: usize, k: usize) -> Self {
        let mut d = DiffOperator::zero(k);
        d.add_term(Mono::var(v), Series::one(k));
        d
    }
    /// `∂/∂x` for a coordinate given by name.
    pub fn partial_named(name: &str, names: &[String], k: usize) -> Result<Self> {
        let v = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownCoordinate(name.to_string()))?;
        Ok(DiffOperator::partial(v, k))
    }
    pub fn order(&self) -> usize {
        self.k
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Observable)> {
        self.terms.iter()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn add_term(&mut self, alpha: Mono, a: Observable) {
        if a.is_zero() {
            return;
        }
        let e = self.terms.entry(alpha).or_insert_with(|| Series::zero(a.order()));
        e.add_assign(&a);
        if e.is_zero() {
            self.terms.remove(&alpha);
        }
    }
    pub fn add(&self, o: &DiffOperator) -> DiffOperator {
        let mut d = self.clone();
        for (m, a) in &o.terms {
            d.add_term(*m, a.clone());
        }
        d
    }
    pub fn sub(&self, o: &DiffOperator) -> DiffOperator {
        self.add(&o.scale(&C::int(-1)))
    }
    pub fn scale(&self, c: &C) -> DiffOperator {
        self.map_coeffs(|a| a.scale(c))
    }
    pub fn scale_series(&self, s: &Scalar) -> DiffOperator {
        self.map_coeffs(|a| a.scale_series(s))
    }
    /// Multiply every coefficient by λ^r.
    pub fn shift(&self, r: usize) -> DiffOperator {
        self.map_coeffs(|a| a.shift(r))
    }
    fn map_coeffs(&self, f: impl Fn(&Observable) -> Observable) -> DiffOperator {
        let mut d = DiffOperator::zero(self.k);
        for (m, a) in &self.terms {
            d.add_term(*m, f(a));
        }
        d
    }
    /// Highest derivative order.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn apply(&self, f: &Observable) -> Observable {
        let mut out = Series::zero(f.order());
        for (m, a) in &self.terms {
            let d = diff_multi(f, m);
            if !d.is_zero() {
                out.add_assign(&a.mul(&d));
            }
        }
        out
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &DiffOperator) -> DiffOperator {
        let mut d = DiffOperator::zero(self.k);
        for (alpha, a) in &self.terms {
            for (beta, b) in &o.terms {
                // a ∂^α (b ∂^β) = a Σ_{γ≤α} C(α,γ) (∂^γ b) ∂^{α-γ+β}
                for_each_sub(alpha, &mut |gamma: &Mono| {
                    let mut c = 1i64;
                    let mut rest = Mono::one();
                    for v in 0..MAX_VARS {
                        c *= binom(alpha.get(v), gamma.get(v));
                        rest.0[v] = alpha.get(v) - gamma.get(v) + beta.get(v);
                    }
                    let db = diff_multi(b, gamma);
                    if !db.is_zero() {
                        d.add_term(rest, a.mul(&db).scale(&C::int(c)));
                    }
                });
            }
        }
        d
    }

    /// Complex-conjugate coefficients.
    pub fn conj(&self) -> DiffOperator {
        self.map_coeffs(|a| a.conj())
    }

    /// Formal adjoint with respect to `∫ conj(φ)·ψ·w`: `D⁺φ = Σ (-1)^{|α|} w⁻¹ ∂^α(conj(a_α) w φ)`.
    pub fn formal_adjoint(&self, w: &DensityWeight) -> Result<DiffOperator> {
        let pinv = w.prefactor_inverse()?;
        let k = self.k;
        let mut out = DiffOperator::zero(k);
        for (alpha, a) in &self.terms {
            // T_v = w_g⁻¹ ∂_v w_g = ∂_v - 2 a_v x_v for the Gaussian part w_g
            let mut t = DiffOperator::mult(&a.conj().mul(&w.prefactor));
            for v in 0..MAX_VARS {
                for _ in 0..alpha.get(v) {
                    t = twisted_partial(v, w, k).compose(&t);
                }
            }
            let sign = if alpha.degree() % 2 == 0 { 1 } else { -1 };
            out = out.add(&DiffOperator::mult(&pinv).compose(&t).scale(&C::int(sign)));
        }
        Ok(out)
    }
}

/// `∂_v - 2 a_v x_v`, the derivative conjugated by the Gaussian part of `w`.
fn twisted_partial(v: usize, w: &DensityWeight, k: usize) -> DiffOperator {
    let a = w.profile.get(v);
    let mut d = DiffOperator::partial(v, k);
    if a != num_rational::Rational64::from_integer(0) {
        let c = C::real(-r64_to_q(a) * q(2));
        d.add_term(Mono::one(), Series::constant(Poly::var(v).scale(&c), k));
    }
    d
}

fn for_each_sub(alpha: &Mono, f: &mut dyn FnMut(&Mono)) {
    fn rec(alpha: &Mono, v: usize, cur: &mut Mono, f: &mut dyn FnMut(&Mono)) {
        if v == MAX_VARS {
            f(cur);
            return;
        }
        for e in 0..=alpha.get(v) {
            cur.0[v] = e;
            rec(alpha, v + 1, cur, f);
        }
        cur.0[v] = 0;
    }
    let mut cur = Mono::one();
    rec(alpha, 0, &mut cur, f);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::gaussian_integrate;
    use num_rational::Rational64;
    use num_traits::One;

    const K: usize = 3;

    fn x() -> Observable {
        Series::constant(Poly::var(0), K)
    }

    #[test]
    fn apply_partial() {
        let d = DiffOperator::partial(0, K);
        assert_eq!(d.apply(&x().mul(&x())), x().scale(&C::int(2)));
        assert_eq!(DiffOperator::identity(K).apply(&x()), x());
        let names = vec!["q".to_string(), "p".to_string()];
        assert!(DiffOperator::partial_named("z", &names, K).is_err());
    }

    #[test]
    fn exponential_of_mixed_derivative() {
        // exp((λ/2i) ∂_g ∂_P) on gP: only the first-order term survives
        let (g, p) = (0, 1);
        let mixed = DiffOperator::partial(g, K)
            .compose(&DiffOperator::partial(p, K))
            .shift(1)
            .scale(&C::new(q(0), crate::scalar::qf(-1, 2)));
        let f = Series::constant(Poly::var(g).mul(&Poly::var(p)), K);
        let mut out = f.clone();
        let mut term = f.clone();
        for j in 1..=K {
            term = mixed.apply(&term).scale(&C::frac(1, j as i64));
            out = out.add(&term);
        }
        let expect = f.add(&Series::monomial(Poly::constant(C::new(q(0), crate::scalar::qf(-1, 2))), 1, K));
        assert_eq!(out, expect);
    }

    #[test]
    fn adjoint_examples() {
        let w = DensityWeight::gaussian(&[(0, Rational64::one())], K);
        let d = DiffOperator::partial(0, K);
        let expect = d.scale(&C::int(-1)).add(&DiffOperator::mult(&x().scale(&C::int(2))));
        assert_eq!(d.formal_adjoint(&w).unwrap(), expect);
        let xd = DiffOperator::mult(&x()).compose(&d);
        let expect = xd
            .scale(&C::int(-1))
            .add(&DiffOperator::mult(&x().mul(&x()).scale(&C::int(2)).sub(&Series::one(K))));
        assert_eq!(xd.formal_adjoint(&w).unwrap(), expect);
        let m = DiffOperator::mult(&x().mul(&x()));
        assert_eq!(m.formal_adjoint(&w).unwrap(), m);
    }

    #[test]
    fn adjoint_against_integration() {
        let w = DensityWeight::gaussian(&[(0, Rational64::one())], K);
        let d = DiffOperator::mult(&x().scale(&C::i())).compose(&DiffOperator::partial(0, K));
        let dp = d.formal_adjoint(&w).unwrap();
        let phi = x().mul(&x()).add(&Series::one(K));
        let psi = x().add(&x().mul(&x()).mul(&x()).scale(&C::i()));
        let lhs = gaussian_integrate(&phi.conj().mul(&d.apply(&psi)), &w, &[0]).unwrap();
        let rhs = gaussian_integrate(&dp.apply(&phi).conj().mul(&psi), &w, &[0]).unwrap();
        assert!(lhs.same(&rhs));
        assert_eq!(dp.formal_adjoint(&w).unwrap(), d);
    }
}
