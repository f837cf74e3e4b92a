//! The pre-Hilbert structure `⟨·,·⟩_μ`, the positive functional `ω_μ`, its GNS
//! identification, and the conjugation behaviour of the deformed restriction.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::gauss::{integrate_block, DensityWeight, PiObservable};
use crate::koszul::{homotopy, SuperObservable};
use crate::model::ModelSpace;
use crate::reduction::Reducer;
use crate::scalar::{Q, C};
use crate::series::Observable;

/// `A^a_κ(f)` for each basis index and `B_κ(f)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjTransport {
    pub a: Vec<Observable>,
    pub b: Observable,
}

/// Builds `A^a_κ(f)` and `B_κ(f)` from their defining double sums.
pub fn conj_transport(red: &Reducer, f: &Observable) -> ConjTransport {
    let m = red.model();
    let n = m.dim();
    let k = f.order();
    let delta: Vec<Q> = (0..n).map(|a| m.lie.delta(a).clone()).collect();
    // u_ℓ = conj(E^{ℓ-1} conj f), E = (∂₁ - ∂^(κ)₁) h₀
    let mut a_sum = vec![m.zero().with_order(k); n];
    let mut b_sum = m.zero().with_order(k);
    let mut e_pow = f.conj();
    for _ in 0..=k {
        let u = e_pow.conj();
        if u.is_zero() {
            break;
        }
        let h = homotopy(m, &SuperObservable::scalar(&u));
        for (a, acc) in a_sum.iter_mut().enumerate() {
            acc.add_assign(&h.ins(a).scalar_part());
        }
        b_sum.add_assign(&h.ins_covector(&delta).scalar_part());
        e_pow = red.defect_step(&e_pow);
    }
    ConjTransport {
        a: a_sum.iter().map(|x| red.resolvent0(x)).collect(),
        b: red.resolvent0(&b_sum),
    }
}

/// The two commutation formulas for complex conjugation past the resolvent
/// and the contraction `Δ(e_a) A^a = B`.
pub fn check_conj_transport(red: &Reducer, f: &Observable) -> [bool; 3] {
    let m = red.model();
    let kappa = &red.config().kappa;
    let fc = f.conj();
    let t = conj_transport(red, &fc);
    let lhs = red.resolvent0(f).conj();
    let base = red.resolvent0(&fc);
    let i = C::i();
    let ksum = kappa.conj().add(kappa);
    let mut first = base.clone();
    for (a, aa) in t.a.iter().enumerate() {
        first.add_assign(&m.lie_m(a, aa).shift(1).scale(&i));
    }
    first.add_assign(&t.b.scale_series(&ksum).shift(1).scale(&i));

    let mut second = base;
    for a in 0..m.dim() {
        let la = m.lie_m(a, &fc);
        let ta = conj_transport(red, &la);
        second.add_assign(&ta.a[a].shift(1).scale(&i));
    }
    let kminus = ksum.sub(&crate::series::Series::one(ksum.order()));
    second.add_assign(&t.b.scale_series(&kminus).shift(1).scale(&i));

    let mut contracted = m.zero().with_order(f.order());
    for (a, aa) in t.a.iter().enumerate() {
        let d = m.lie.delta(a);
        if !d.is_zero() {
            contracted.add_assign(&aa.scale(&C::real(d.clone())));
        }
    }
    [lhs == first, lhs == second, contracted == t.b]
}

/// Outcome of a positivity test of `ω_μ(conj f ⋆ f)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Positivity {
    /// `ι*_κ f = 0` and the value vanishes.
    GelfandIdeal,
    /// Lowest non-vanishing order and its rational coefficient (times a π power).
    Positive(usize),
    Violated(String),
}

/// Integration over `C` against `μ = Ω ⊠ dg`.
pub struct Gns<'a> {
    red: &'a Reducer<'a>,
    mu: DensityWeight,
    block: Vec<usize>,
}

pub fn pi_equal(a: &PiObservable, b: &PiObservable) -> bool {
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    a.same(b)
}

impl<'a> Gns<'a> {
    pub fn new(red: &'a Reducer<'a>, omega: &DensityWeight) -> Result<Self> {
        let m = red.model();
        let mu = m.lift_density(omega)?;
        if !mu.real {
            return Err(Error::UnsupportedWeight("μ must be real".into()));
        }
        let mut block = m.base_vars();
        block.extend(m.grp_vars());
        Ok(Gns { red, mu, block })
    }
    pub fn model(&self) -> &ModelSpace {
        self.red.model()
    }
    pub fn reducer(&self) -> &Reducer<'a> {
        self.red
    }

    /// `∫_C φ μ`.
    pub fn integrate(&self, phi: &Observable) -> Result<PiObservable> {
        integrate_block(&phi.mul(&self.mu.function()), &self.block)
    }

    /// `⟨φ, ψ⟩_μ = ∫_C ι*_κ(conj(prol φ) ⋆ prol ψ) μ`.
    pub fn inner_product(&self, phi: &Observable, psi: &Observable) -> Result<PiObservable> {
        let m = self.model();
        let (a, b) = (m.prolong(phi)?.conj(), m.prolong(psi)?);
        let qz = self.red.quantizer();
        self.integrate(&self.red.deformed_restriction(&qz.star_total(&a, &b)))
    }

    /// `∫_C (conj(prol φ) • ψ) μ`.
    pub fn inner_product_alt(&self, phi: &Observable, psi: &Observable) -> Result<PiObservable> {
        let a = self.model().prolong(phi)?.conj();
        self.integrate(&self.red.left_module(&a, psi)?)
    }

    /// `ω_μ(f) = ∫_C ι*_κ(f) μ`.
    pub fn omega(&self, f: &Observable) -> Result<PiObservable> {
        self.integrate(&self.red.deformed_restriction(f))
    }

    /// Sign of the lowest non-vanishing coefficient of `ω_μ(conj f ⋆ f)`.
    pub fn positivity(&self, f: &Observable) -> Result<Positivity> {
        let qz = self.red.quantizer();
        let val = self.omega(&qz.star_total(&f.conj(), f))?;
        let in_ideal = self.red.deformed_restriction(f).is_zero();
        Ok(match val.lowest() {
            None if in_ideal => Positivity::GelfandIdeal,
            None => Positivity::Violated("vanishes outside the Gel'fand ideal".into()),
            Some(_) if in_ideal => Positivity::Violated("non-zero on the Gel'fand ideal".into()),
            Some((r, p)) => match p.as_constant() {
                Some(c) if c.is_real() && c.re.is_positive() => Positivity::Positive(r),
                other => Positivity::Violated(format!("lowest coefficient {other:?} at order {r}")),
            },
        })
    }

    /// `ω_μ(conj f ⋆ g) = ⟨ι*_κ f, ι*_κ g⟩_μ`.
    pub fn isometry(&self, f: &Observable, g: &Observable) -> Result<bool> {
        let qz = self.red.quantizer();
        let lhs = self.omega(&qz.star_total(&f.conj(), g))?;
        let rhs = self.inner_product(&self.red.deformed_restriction(f), &self.red.deformed_restriction(g))?;
        Ok(pi_equal(&lhs, &rhs))
    }

    /// `ι*_κ(f ⋆ g) = f • ι*_κ g`.
    pub fn intertwining(&self, f: &Observable, g: &Observable) -> Result<bool> {
        let qz = self.red.quantizer();
        let lhs = self.red.deformed_restriction(&qz.star_total(f, g));
        let rhs = self.red.left_module(f, &self.red.deformed_restriction(g))?;
        Ok(lhs == rhs)
    }

    /// `conj ∫ ι*_κ(f) μ = ∫ ι*_κ(conj f) μ`.
    pub fn conj_integral(&self, f: &Observable) -> Result<bool> {
        Ok(pi_equal(&self.omega(f)?.conj(), &self.omega(&f.conj())?))
    }

    /// `⟨φ, f•ψ⟩ = ⟨conj f • φ, ψ⟩`.
    pub fn star_representation(&self, f: &Observable, phi: &Observable, psi: &Observable) -> Result<bool> {
        let lhs = self.inner_product(phi, &self.red.left_module(f, psi)?)?;
        let rhs = self.inner_product(&self.red.left_module(&f.conj(), phi)?, psi)?;
        Ok(pi_equal(&lhs, &rhs))
    }
}

/// `exp(-a Σ x_v²)` over `vars`, the damping used for test functions.
pub fn damping(m: &ModelSpace, vars: &[usize], num: i64, den: i64) -> Observable {
    let pairs: Vec<(usize, num_rational::Rational64)> =
        vars.iter().map(|&v| (v, num_rational::Rational64::new(num, den))).collect();
    m.poly(crate::poly::Poly::gaussian(crate::poly::Profile::new(&pairs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebraData;
    use crate::random::Sampler;
    use crate::reduction::ReductionConfig;
    use crate::series::Series;
    use crate::star::Quantizer;
    use num_rational::Rational64;

    #[test]
    fn gaussian_norm_on_trivial_base() {
        let m = ModelSpace::new(LieAlgebraData::abelian(1), &[], vec![], 2).unwrap();
        let qz = Quantizer::new(&m);
        let red = Reducer::new(&qz, ReductionConfig::half(2));
        let gns = Gns::new(&red, &DensityWeight::lebesgue(2)).unwrap();
        let phi = damping(&m, &m.grp_vars(), 1, 2);
        let ip = gns.inner_product(&phi, &phi).unwrap();
        assert_eq!(ip.pi_half_power, 1);
        assert_eq!(ip.value, m.one());
        assert!(pi_equal(&ip, &gns.inner_product_alt(&phi, &phi).unwrap()));
    }

    #[test]
    fn gns_identities_heisenberg() {
        let m = ModelSpace::plane(LieAlgebraData::heisenberg(), 2);
        let qz = Quantizer::new(&m);
        let red = Reducer::new(&qz, ReductionConfig::half(2));
        let omega = DensityWeight::gaussian(&[(0, Rational64::new(1, 1)), (1, Rational64::new(1, 1))], 2);
        let gns = Gns::new(&red, &omega).unwrap();
        let mut s = Sampler::new(21);
        let mut vars: Vec<usize> = m.base_vars();
        vars.extend(m.grp_vars());
        vars.extend(m.mom_vars());
        let mut damp = damping(&m, &m.base_vars(), 3, 2);
        damp = damp.mul(&damping(&m, &m.grp_vars(), 1, 2));
        let f = s.observable(&vars, 2, 2, true).mul(&damp);
        let g = s.observable(&vars, 2, 2, true).mul(&damp);
        assert!(matches!(gns.positivity(&f).unwrap(), Positivity::Positive(0)));
        assert!(gns.isometry(&f, &g).unwrap());
        assert!(gns.intertwining(&f, &g).unwrap());
        assert!(gns.conj_integral(&qz.star_total(&f, &g)).unwrap());
        let ip = gns.inner_product(&red.deformed_restriction(&f), &red.deformed_restriction(&g)).unwrap();
        let ip2 = gns.inner_product(&red.deformed_restriction(&g), &red.deformed_restriction(&f)).unwrap();
        assert!(pi_equal(&ip, &ip2.conj()));
    }

    #[test]
    fn conjugation_transport() {
        for lie in [LieAlgebraData::abelian(1), LieAlgebraData::heisenberg(), LieAlgebraData::aff1()] {
            let m = ModelSpace::plane(lie, 2);
            let qz = Quantizer::new(&m);
            for kappa in [Series::constant(C::frac(1, 2), 2), Series::zero(2)] {
                let red = Reducer::new(&qz, ReductionConfig::new(kappa));
                let mut s = Sampler::new(4);
                let mut vars: Vec<usize> = m.base_vars();
                vars.extend(m.grp_vars());
                vars.extend(m.mom_vars());
                let f = s.observable(&vars, 3, 2, true);
                assert_eq!(check_conj_transport(&red, &f), [true; 3], "{}", m.lie.label);
            }
        }
    }
}
