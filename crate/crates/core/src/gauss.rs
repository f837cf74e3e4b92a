//! Gaussian weights and exact Gaussian moment integration.

use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{obviously_positive, r64_to_q, Key, Poly, Profile};
use crate::scalar::{q, rational_sqrt, PiScalar, C, Q};
use crate::series::{Observable, Series};

/// An observable multiplied by π^(k/2).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PiObservable {
    pub value: Observable,
    pub pi_half_power: i32,
}

impl PiObservable {
    pub fn new(value: Observable, pi_half_power: i32) -> Self {
        PiObservable { value, pi_half_power }
    }
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
    pub fn add(&self, o: &PiObservable) -> Result<PiObservable> {
        if o.value.is_zero() {
            return Ok(self.clone());
        }
        if self.value.is_zero() {
            return Ok(o.clone());
        }
        if self.pi_half_power != o.pi_half_power {
            return Err(Error::Config(format!(
                "adding values with π powers {} and {}",
                self.pi_half_power, o.pi_half_power
            )));
        }
        Ok(PiObservable::new(self.value.add(&o.value), self.pi_half_power))
    }
    pub fn sub(&self, o: &PiObservable) -> Result<PiObservable> {
        self.add(&PiObservable::new(o.value.neg(), o.pi_half_power))
    }
    pub fn conj(&self) -> PiObservable {
        PiObservable::new(self.value.conj(), self.pi_half_power)
    }
    /// Equality as functions: equal values and, unless zero, equal π powers.
    pub fn same(&self, o: &PiObservable) -> bool {
        (self.value.is_zero() && o.value.is_zero())
            || (self.value == o.value && self.pi_half_power == o.pi_half_power)
    }
    /// The coefficient of λ^r, when it is a constant.
    pub fn scalar_coeff(&self, r: usize) -> Option<PiScalar> {
        self.value.coeff(r).as_constant().map(|c| PiScalar::new(c, self.pi_half_power))
    }
    /// Lowest nonvanishing λ-order and its coefficient.
    pub fn lowest(&self) -> Option<(usize, &Poly)> {
        self.value.valuation().map(|r| (r, self.value.coeff(r)))
    }
}

/// `∫ x^e exp(-a x²) dx / √π`.
pub fn moment(e: u32, a: Rational64) -> Result<Q> {
    if !a.is_positive() {
        return Err(Error::NonGaussian(format!("exponent {a}")));
    }
    if e % 2 == 1 {
        return Ok(Q::zero());
    }
    let a = r64_to_q(a);
    let s = rational_sqrt(&a).ok_or_else(|| Error::NotPerfectSquare(format!("{a}")))?;
    let k = e / 2;
    let mut v = Q::from_integer(1.into()) / s;
    for j in 0..k {
        // (2k-1)!! / (2a)^k
        v = v * q(2 * j as i64 + 1) / (q(2) * &a);
    }
    Ok(v)
}

/// Integrate out the coordinates in `block`; each term must carry Gaussian decay in every
/// coordinate of the block. The result carries π^(|block|/2).
pub fn integrate_block(f: &Observable, block: &[usize]) -> Result<PiObservable> {
    let k = f.order();
    let mut out = Series::zero(k);
    for r in 0..=k {
        let mut p = Poly::zero();
        for (key, c) in f.coeff(r).terms() {
            let mut val = c.clone();
            let mut gauss = key.gauss.clone();
            let mut mono = key.mono;
            for &v in block {
                let a = key.gauss.get(v);
                if a.is_zero() {
                    return Err(Error::NonGaussian(format!("x{v}")));
                }
                let m = moment(key.mono.get(v) as u32, a)?;
                val = val.scale(&m);
                gauss = gauss.without(v);
                mono = mono.with(v, 0);
            }
            p.add_term(Key { gauss, mono }, val);
        }
        *out.coeff_mut(r) = p;
    }
    Ok(PiObservable::new(out, block.len() as i32))
}

/// A density `prefactor · exp(-Σ a_v x_v²) · |dx|`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DensityWeight {
    pub prefactor: Observable,
    pub profile: Profile,
    pub real: bool,
}

impl DensityWeight {
    /// Lebesgue (Liouville) density.
    pub fn lebesgue(k: usize) -> Self {
        DensityWeight { prefactor: Series::one(k), profile: Profile::none(), real: true }
    }
    /// `exp(-Σ a_v x_v²)`.
    pub fn gaussian(pairs: &[(usize, Rational64)], k: usize) -> Self {
        DensityWeight { prefactor: Series::one(k), profile: Profile::new(pairs), real: true }
    }
    pub fn scaled(&self, c: &C) -> Self {
        DensityWeight {
            prefactor: self.prefactor.scale(c),
            profile: self.profile.clone(),
            real: self.real && c.is_real(),
        }
    }
    pub fn with_prefactor(&self, p: &Observable) -> Self {
        DensityWeight {
            prefactor: self.prefactor.mul(p),
            profile: self.profile.clone(),
            real: self.real && p.conj() == *p,
        }
    }
    pub fn order(&self) -> usize {
        self.prefactor.order()
    }
    /// The weight as a function.
    pub fn function(&self) -> Observable {
        self.prefactor.map_poly(|p| p.mul(&Poly::gaussian(self.profile.clone())))
    }
    /// Leading positivity (sufficient syntactic test) and declared reality.
    pub fn validate(&self) -> Result<()> {
        if self.profile.entries().any(|(_, a)| !a.is_positive()) {
            return Err(Error::UnsupportedWeight("non-positive Gaussian exponent".into()));
        }
        if self.prefactor.coeffs().iter().any(|p| p.has_gaussian()) {
            return Err(Error::UnsupportedWeight("Gaussian factor inside the prefactor".into()));
        }
        if !obviously_positive(self.prefactor.classical()) {
            return Err(Error::UnsupportedWeight("leading prefactor not positive".into()));
        }
        if self.real && self.prefactor.conj() != self.prefactor {
            return Err(Error::UnsupportedWeight("declared real but prefactor is complex".into()));
        }
        Ok(())
    }
    /// The positive constant leading prefactor, when the weight has one.
    pub fn leading_constant(&self) -> Option<Q> {
        self.prefactor
            .classical()
            .as_constant()
            .filter(|c| c.is_real() && c.re.is_positive())
            .map(|c| c.re)
    }
    /// `1/prefactor` as a λ-series; requires a constant leading prefactor.
    pub fn prefactor_inverse(&self) -> Result<Observable> {
        self.leading_constant()
            .ok_or_else(|| Error::UnsupportedWeight("non-constant leading prefactor".into()))?;
        self.prefactor.inverse()
    }
}

/// `∫_block f · w`.
pub fn gaussian_integrate(f: &Observable, w: &DensityWeight, block: &[usize]) -> Result<PiObservable> {
    integrate_block(&f.mul(&w.function()), block)
}

pub fn pi_scalar(v: i64, pi_half: i32) -> PiScalar {
    PiScalar::new(C::int(v), pi_half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn g() -> Poly {
        Poly::var(0)
    }

    #[test]
    fn normalization_and_moments() {
        let w = DensityWeight::gaussian(&[(0, Rational64::one())], 2);
        let one = Series::one(2);
        let i = gaussian_integrate(&one, &w, &[0]).unwrap();
        assert_eq!(i.scalar_coeff(0).unwrap(), PiScalar::new(C::one(), 1));
        let g2 = Series::constant(g().mul(&g()), 2);
        let i = gaussian_integrate(&g2, &w, &[0]).unwrap();
        assert_eq!(i.scalar_coeff(0).unwrap(), PiScalar::new(C::frac(1, 2), 1));
        let odd = Series::constant(g(), 2);
        assert!(gaussian_integrate(&odd, &w, &[0]).unwrap().is_zero());
    }

    #[test]
    fn moment_oracle() {
        // ∫ x^4 e^{-x²/4} dx = 24 √π
        assert_eq!(moment(4, Rational64::new(1, 4)).unwrap(), q(24));
        assert!(moment(0, Rational64::new(2, 1)).is_err());
        assert!(moment(2, Rational64::zero()).is_err());
    }

    #[test]
    fn missing_decay_is_an_error() {
        let w = DensityWeight::lebesgue(1);
        assert!(matches!(
            gaussian_integrate(&Series::one(1), &w, &[0]),
            Err(Error::NonGaussian(_))
        ));
    }

    #[test]
    fn weight_validation() {
        assert!(DensityWeight::gaussian(&[(0, Rational64::one())], 2).validate().is_ok());
        let bad = DensityWeight::lebesgue(2).scaled(&C::int(-1));
        assert!(bad.validate().is_err());
    }
}
