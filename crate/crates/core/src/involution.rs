//! The reduced *-involution attached to a density, the KMS property of the
//! associated trace functional, density ratios, and the quantized modular class.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::diffop::DiffOperator;
use crate::error::{Error, Result};
use crate::gauss::{integrate_block, DensityWeight, PiObservable};
use crate::gns::pi_equal;
use crate::linalg;
use crate::model::ModelSpace;
use crate::poly::{Key, Mono, Poly, Profile};
use crate::scalar::C;
use crate::series::{Observable, Series};
use crate::star::Quantizer;

fn partial_multi(alpha: &Mono, k: usize) -> DiffOperator {
    let mut d = DiffOperator::zero(k);
    d.add_term(*alpha, Series::one(k));
    d
}

/// `Σ (-A)^j f` for `A = O(λ)`.
fn neumann(a: &DiffOperator, f: &Observable) -> Observable {
    let mut sum = f.clone();
    let mut term = f.clone();
    for _ in 0..f.order() {
        term = a.apply(&term).neg();
        if term.is_zero() {
            break;
        }
        sum.add_assign(&term);
    }
    sum
}

fn base_weight(m: &ModelSpace, w: &DensityWeight) -> Result<()> {
    w.validate()?;
    let nb = m.base_dim();
    if w.profile.entries().any(|(v, _)| v >= nb)
        || w.prefactor.coeffs().iter().any(|p| (nb..crate::poly::MAX_VARS).any(|v| p.depends_on(v)))
    {
        return Err(Error::UnsupportedWeight("density must live on the base".into()));
    }
    Ok(())
}

/// Extra Gaussian damping making every exponent of `profile` on `vars` a rational square.
pub fn square_completion(profile: &Profile, vars: &[usize]) -> Profile {
    let pairs: Vec<(usize, Rational64)> = vars
        .iter()
        .filter_map(|&v| {
            let a = profile.get(v);
            if let Some(s) = crate::scalar::rational_sqrt(&crate::poly::r64_to_q(a)) {
                if !s.is_zero() {
                    return None;
                }
            }
            let mut n: i64 = 1;
            while Rational64::from_integer(n * n) <= a {
                n += 1;
            }
            Some((v, Rational64::from_integer(n * n) - a))
        })
        .collect();
    Profile::new(&pairs)
}

/// `u ↦ u*` for the trace functional `τ_Ω(u) = ∫ u Ω` on the base.
pub struct Involution<'a> {
    qz: &'a Quantizer,
    w: DensityWeight,
    /// `conj φ ⋆ ψ ≃ conj φ · Hψ` under `∫ · Ω`.
    h: DiffOperator,
}

impl<'a> Involution<'a> {
    pub fn new(qz: &'a Quantizer, omega: &DensityWeight) -> Result<Self> {
        let m = qz.model();
        base_weight(m, omega)?;
        if !omega.real {
            return Err(Error::UnsupportedWeight("density must be real".into()));
        }
        let k = m.order();
        let mut h = DiffOperator::zero(k);
        for (r, alpha, beta, c) in qz.moyal_pairs(k) {
            let left = partial_multi(&alpha, k).formal_adjoint(omega)?;
            let term = left.compose(&partial_multi(&beta, k));
            h = h.add(&term.scale(&c).shift(r));
        }
        Ok(Involution { qz, w: omega.clone(), h })
    }
    pub fn weight(&self) -> &DensityWeight {
        &self.w
    }
    fn model(&self) -> &ModelSpace {
        self.qz.model()
    }

    /// `ψ ↦ ψ ⋆ u` as a differential operator.
    pub fn right_operator(&self, u: &Observable) -> DiffOperator {
        let k = self.model().order();
        let mut d = DiffOperator::zero(k);
        for (r, alpha, beta, c) in self.qz.moyal_pairs(k) {
            let du = crate::diffop::diff_multi(u, &beta);
            if du.is_zero() {
                continue;
            }
            let coeff = du.scale(&c).shift(r);
            d = d.add(&DiffOperator::mult(&coeff).compose(&partial_multi(&alpha, k)));
        }
        d
    }

    fn h_inverse(&self, f: &Observable) -> Observable {
        let a = self.h.sub(&DiffOperator::identity(f.order()));
        neumann(&a, f)
    }

    /// `u* = H⁻¹ R_u⁺ 1`.
    pub fn star(&self, u: &Observable) -> Result<Observable> {
        let m = self.model();
        if !m.is_base_only(u) {
            return Err(Error::Config("involution acts on base functions".into()));
        }
        let adj = self.right_operator(u).formal_adjoint(&self.w)?;
        Ok(self.h_inverse(&adj.apply(&m.one())))
    }

    /// `I(u) = conj(u*)`.
    pub fn automorphism(&self, u: &Observable) -> Result<Observable> {
        Ok(self.star(u)?.conj())
    }

    /// `τ_Ω(u) = ∫ u Ω`.
    pub fn tau(&self, u: &Observable) -> Result<PiObservable> {
        integrate_block(&u.mul(&self.w.function()), &self.model().base_vars())
    }

    /// `τ_Ω(conj φ ⋆ ψ)`.
    pub fn pairing(&self, phi: &Observable, psi: &Observable) -> Result<PiObservable> {
        self.tau(&self.qz.moyal(&phi.conj(), psi))
    }

    /// `⟨φ, ψ ⋆ u⟩ = ⟨φ ⋆ u*, ψ⟩`.
    pub fn check_adjoint(&self, u: &Observable, phi: &Observable, psi: &Observable) -> Result<bool> {
        let us = self.star(u)?;
        let lhs = self.pairing(phi, &self.qz.moyal(psi, u))?;
        let rhs = self.pairing(&self.qz.moyal(phi, &us), psi)?;
        Ok(pi_equal(&lhs, &rhs))
    }

    /// `τ(v ⋆ u) = τ(I(u) ⋆ v)`.
    pub fn kms(&self, u: &Observable, v: &Observable) -> Result<bool> {
        let lhs = self.tau(&self.qz.moyal(v, u))?;
        let rhs = self.tau(&self.qz.moyal(&self.automorphism(u)?, v))?;
        Ok(pi_equal(&lhs, &rhs))
    }

    /// Antilinear, involutive, anti-multiplicative on the given pair.
    pub fn axioms(&self, u: &Observable, v: &Observable) -> Result<bool> {
        let i = C::i();
        let us = self.star(u)?;
        let vs = self.star(v)?;
        let involutive = self.star(&us)? == *u;
        let antilinear = self.star(&u.scale(&i).add(v))? == us.scale(&i.conj()).add(&vs);
        let anti_mult = self.star(&self.qz.moyal(u, v))? == self.qz.moyal(&vs, &us);
        Ok(involutive && antilinear && anti_mult)
    }
}

/// `Ω'/Ω` as a function.
fn weight_ratio(omega: &DensityWeight, omega_p: &DensityWeight) -> Result<Observable> {
    let inv = omega.prefactor_inverse()?;
    let g = Poly::gaussian(omega_p.profile.add(&omega.profile.neg()));
    Ok(omega_p.prefactor.mul(&inv).map_poly(|p| p.mul(&g)))
}

/// `ϱ̂` with `τ_{Ω'}(u) = τ_Ω(ϱ̂ ⋆ u)`, from `K ϱ̂ = Ω'/Ω`, `K = Σ c λ^r (∂^β)⁺ ∂^α`.
pub fn density_ratio_hat(qz: &Quantizer, omega: &DensityWeight, omega_p: &DensityWeight) -> Result<Observable> {
    let m = qz.model();
    base_weight(m, omega)?;
    base_weight(m, omega_p)?;
    let rho = weight_ratio(omega, omega_p)?;
    let k = m.order();
    let mut kop = DiffOperator::zero(k);
    for (r, alpha, beta, c) in qz.moyal_pairs(k) {
        if r == 0 {
            continue;
        }
        let t = partial_multi(&beta, k).formal_adjoint(omega)?.compose(&partial_multi(&alpha, k));
        kop = kop.add(&t.scale(&c).shift(r));
    }
    Ok(neumann(&kop, &rho))
}

/// Test functions `x^m` (degree ≤ `cap`) damped so every integral in the ratio identity converges.
pub fn ratio_test_functions(m: &ModelSpace, omega_p: &DensityWeight, cap: u32) -> Vec<Observable> {
    let vars = m.base_vars();
    let damp = Poly::gaussian(square_completion(&omega_p.profile, &vars));
    monomials(&vars, cap).into_iter().map(|mo| m.poly(Poly::monomial(mo, C::one()).mul(&damp))).collect()
}

/// `τ_{Ω'}(u) = τ_Ω(ϱ̂ ⋆ u)` on each test function.
pub fn check_density_ratio(
    qz: &Quantizer,
    omega: &DensityWeight,
    omega_p: &DensityWeight,
    rho_hat: &Observable,
    tests: &[Observable],
) -> Result<bool> {
    let vars = qz.model().base_vars();
    for u in tests {
        let lhs = integrate_block(&u.mul(&omega_p.function()), &vars)?;
        let rhs = integrate_block(&qz.moyal(rho_hat, u).mul(&omega.function()), &vars)?;
        if !pi_equal(&lhs, &rhs) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Result of comparing the involutions of two densities on one sample.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    /// `u*' = conj ϱ̂ ⋆ u* ⋆ conj ϱ̂⁻¹`, when `ϱ̂` has a pointwise-invertible leading term.
    pub conjugation: Option<bool>,
    /// `u*' ⋆ conj ϱ̂ = conj ϱ̂ ⋆ u*`.
    pub intertwined: bool,
}

pub fn involution_comparison(
    qz: &Quantizer,
    omega: &DensityWeight,
    omega_p: &DensityWeight,
    u: &Observable,
) -> Result<Comparison> {
    let a = Involution::new(qz, omega)?;
    let b = Involution::new(qz, omega_p)?;
    let rho = density_ratio_hat(qz, omega, omega_p)?.conj();
    let us = a.star(u)?;
    let usp = b.star(u)?;
    let intertwined = qz.moyal(&usp, &rho) == qz.moyal(&rho, &us);
    let conjugation = match rho.inverse_with(&|x, y| qz.moyal(x, y)) {
        Ok(inv) => Some(usp == qz.moyal(&qz.moyal(&rho, &us), &inv)),
        Err(_) => None,
    };
    Ok(Comparison { conjugation, intertwined })
}

/// Monomials in `vars` of total degree ≤ `cap`.
pub fn monomials(vars: &[usize], cap: u32) -> Vec<Mono> {
    let mut out = vec![Mono::one()];
    for &v in vars {
        let mut next = Vec::new();
        for m in &out {
            let mut e = 0u8;
            while m.degree() + e as u32 <= cap {
                next.push(m.with(v, e));
                e += 1;
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// A λ-linear operator known on a monomial basis up to a degree cap.
#[derive(Clone, Debug)]
pub struct BasisOperator {
    pub cap: u32,
    pub images: BTreeMap<Mono, Observable>,
    k: usize,
}

impl BasisOperator {
    /// Extends by λ-linearity; fails outside the basis.
    pub fn apply(&self, f: &Observable) -> Result<Observable> {
        let mut out = Series::zero(self.k);
        for r in 0..=f.order().min(self.k) {
            for (key, c) in f.coeff(r).terms() {
                if !key.gauss.is_empty() {
                    return Err(Error::DegreeCap("Gaussian factor outside the monomial basis".into()));
                }
                let img = self
                    .images
                    .get(&key.mono)
                    .ok_or_else(|| Error::DegreeCap(format!("degree {} > cap {}", key.mono.degree(), self.cap)))?;
                out.add_assign(&img.scale(c).shift(r));
            }
        }
        Ok(out)
    }
    fn compose_minus_id(&self, f: &Observable) -> Result<Observable> {
        Ok(self.apply(f)?.sub(f))
    }
    /// `λ^r` coefficient of the image of a basis element.
    pub fn component(&self, e: &Mono, r: usize) -> Option<Poly> {
        self.images.get(e).map(|s| s.coeff(r).clone())
    }
}

/// `I_Ω = conj ∘ *` and `D_Ω = log I_Ω` on the monomial basis.
pub struct ModularClass {
    pub automorphism: BasisOperator,
    pub derivation: BasisOperator,
}

pub fn modular_class(qz: &Quantizer, omega: &DensityWeight, cap: u32) -> Result<ModularClass> {
    let m = qz.model();
    let inv = Involution::new(qz, omega)?;
    let k = m.order();
    let basis = monomials(&m.base_vars(), cap);
    let mut images = BTreeMap::new();
    for e in &basis {
        let img = inv.automorphism(&m.poly(Poly::monomial(*e, C::one())))?;
        if img.coeffs().iter().any(|p| p.degree() > e.degree() || p.has_gaussian()) {
            return Err(Error::DegreeCap("automorphism raises the degree".into()));
        }
        images.insert(*e, img);
    }
    let i_op = BasisOperator { cap, images, k };
    // log(id + N) = Σ (-1)^{j+1} N^j / j, N = O(λ)
    let mut d_images = BTreeMap::new();
    for e in &basis {
        let x = m.poly(Poly::monomial(*e, C::one()));
        let mut pow = x.clone();
        let mut sum = Series::zero(k);
        for j in 1..=k {
            pow = i_op.compose_minus_id(&pow)?;
            if pow.is_zero() {
                break;
            }
            let c = C::frac(if j % 2 == 1 { 1 } else { -1 }, j as i64);
            sum.add_assign(&pow.scale(&c));
        }
        d_images.insert(*e, sum);
    }
    Ok(ModularClass { automorphism: i_op, derivation: BasisOperator { cap, images: d_images, k } })
}

/// Checks on a modular class; all are statements on the capped monomial basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ModularReport {
    pub cap: u32,
    /// `D^(1) = i Δ_{Ω₀}` with `Δ(u) = {log Ω₀, u}`.
    pub d1_equals_i_delta: bool,
    /// `D^(1) = -i Δ_{Ω₀}`.
    pub d1_equals_minus_i_delta: bool,
    /// `i∫{u,v}Ω₀ + ∫D^(1)(u) v Ω₀ = 0` on damped test functions.
    pub infinitesimal_kms: bool,
    /// `exp(D) = I`.
    pub exp_recovers: bool,
}

impl ModularClass {
    pub fn report(&self, qz: &Quantizer, omega: &DensityWeight) -> Result<ModularReport> {
        let m = qz.model();
        let k = m.order();
        let delta = m.modular_vector_field(omega)?;
        let (mut plus, mut minus) = (true, true);
        for (e, img) in &self.derivation.images {
            let x = m.poly(Poly::monomial(*e, C::one()));
            let de = delta.apply(&x).coeff(0).scale(&C::i());
            let d1 = img.coeff(1);
            plus &= *d1 == de;
            minus &= *d1 == de.neg();
        }
        // infinitesimal KMS with u a basis element and v a damped basis element
        let vars = m.base_vars();
        let w0 = m.poly(omega.function().coeff(0).clone());
        let damp = Poly::gaussian(square_completion(&omega.profile, &vars));
        let mut kms = true;
        for (e, img) in self.derivation.images.iter().filter(|(e, _)| e.degree() <= 3) {
            let u = m.poly(Poly::monomial(*e, C::one()));
            for f in self.derivation.images.keys().filter(|f| f.degree() <= 3) {
                let v = m.poly(Poly::monomial(*f, C::one()).mul(&damp));
                let bracket = m.poisson_bracket(&u, &v).scale(&C::i());
                let d1u = m.poly(img.coeff(1).clone());
                let integrand = bracket.add(&d1u.mul(&v)).mul(&w0);
                kms &= integrate_block(&integrand, &vars)?.value.coeff(0).is_zero();
            }
        }
        // exp(D) = Σ D^j / j!
        let mut exp_ok = true;
        for (e, img) in &self.automorphism.images {
            let x = m.poly(Poly::monomial(*e, C::one()));
            let mut pow = x.clone();
            let mut sum = x;
            let mut fact = crate::scalar::Q::one();
            for j in 1..=k {
                pow = self.derivation.apply(&pow)?;
                fact *= crate::scalar::q(j as i64);
                sum.add_assign(&pow.scale(&C::real(crate::scalar::Q::one() / &fact)));
            }
            exp_ok &= sum == *img;
        }
        Ok(ModularReport {
            cap: self.derivation.cap,
            d1_equals_i_delta: plus,
            d1_equals_minus_i_delta: minus,
            infinitesimal_kms: kms,
            exp_recovers: exp_ok,
        })
    }

    /// `I(u ⋆ v) = I(u) ⋆ I(v)`.
    pub fn is_multiplicative(&self, qz: &Quantizer, u: &Observable, v: &Observable) -> Result<bool> {
        let i = &self.automorphism;
        Ok(i.apply(&qz.moyal(u, v))? == qz.moyal(&i.apply(u)?, &i.apply(v)?))
    }

    /// `D(u ⋆ v) = D(u) ⋆ v + u ⋆ D(v)`.
    pub fn is_derivation(&self, qz: &Quantizer, u: &Observable, v: &Observable) -> Result<bool> {
        let d = &self.derivation;
        Ok(d.apply(&qz.moyal(u, v))? == qz.moyal(&d.apply(u)?, v).add(&qz.moyal(u, &d.apply(v)?)))
    }
}

/// Finds `w = Σ λ^s w_s` with `D_a - D_b = [w, ·]_⋆` on basis elements of degree ≤ `cap`,
/// `w_s` ranging over monomials of degree ≤ `cap` without constant term.
pub fn inner_difference(qz: &Quantizer, a: &ModularClass, b: &ModularClass) -> Result<Observable> {
    let m = qz.model();
    let k = m.order();
    let cap = a.derivation.cap.min(b.derivation.cap);
    let basis: Vec<Mono> = monomials(&m.base_vars(), cap);
    let unknowns: Vec<Mono> = basis.iter().filter(|e| !e.is_one()).cloned().collect();
    let mut w = Series::zero(k);
    // commutators [x^u, x^e]_⋆ of each unknown with each basis element
    let mut comm: BTreeMap<(Mono, Mono), Observable> = BTreeMap::new();
    for u in &unknowns {
        for e in &basis {
            let (x, y) = (m.poly(Poly::monomial(*u, C::one())), m.poly(Poly::monomial(*e, C::one())));
            comm.insert((*u, *e), qz.moyal(&x, &y).sub(&qz.moyal(&y, &x)));
        }
    }
    for r in 1..=k {
        // rows: (e, output monomial) of order r; solve [w_{r-1}, e]_1 = target
        let mut target: BTreeMap<(Mono, Key), C> = BTreeMap::new();
        for e in &basis {
            let x = m.poly(Poly::monomial(*e, C::one()));
            let diff = a.derivation.apply(&x)?.sub(&b.derivation.apply(&x)?);
            let known = qz.moyal(&w, &x).sub(&qz.moyal(&x, &w));
            for (key, c) in diff.sub(&known).coeff(r).terms() {
                *target.entry((*e, key.clone())).or_insert_with(C::zero) += c;
            }
        }
        let mut rows: BTreeMap<(Mono, Key), Vec<C>> = BTreeMap::new();
        for (j, u) in unknowns.iter().enumerate() {
            for e in &basis {
                for (key, c) in comm[&(*u, *e)].coeff(1).terms() {
                    rows.entry((*e, key.clone())).or_insert_with(|| vec![C::zero(); unknowns.len()])[j] += c;
                }
            }
        }
        let keys: Vec<(Mono, Key)> = rows.keys().chain(target.keys()).cloned().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let a_mat: Vec<Vec<C>> =
            keys.iter().map(|key| rows.get(key).cloned().unwrap_or_else(|| vec![C::zero(); unknowns.len()])).collect();
        let rhs: Vec<C> = keys.iter().map(|key| target.get(key).cloned().unwrap_or_else(C::zero)).collect();
        let sol = linalg::solve(&a_mat, &rhs, unknowns.len(), false)?;
        let mut ws = Poly::zero();
        for (u, c) in unknowns.iter().zip(sol) {
            ws.add_term(Key::poly(*u), c);
        }
        w.add_assign(&m.poly(ws).shift(r - 1));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Sampler;

    fn plane(k: usize) -> Quantizer {
        Quantizer::new(&ModelSpace::plane(crate::lie::LieAlgebraData::abelian(1), k))
    }
    fn gauss(k: usize) -> DensityWeight {
        DensityWeight::gaussian(&[(0, Rational64::one()), (1, Rational64::one())], k)
    }

    #[test]
    fn lebesgue_gives_complex_conjugation() {
        let qz = plane(3);
        let inv = Involution::new(&qz, &DensityWeight::lebesgue(3)).unwrap();
        let mut s = Sampler::new(5);
        let u = s.observable(&[0, 1], 3, 3, true);
        assert_eq!(inv.star(&u).unwrap(), u.conj());
        assert_eq!(inv.star(&qz.model().one()).unwrap(), qz.model().one());
    }

    #[test]
    fn gaussian_weight_first_order() {
        let qz = plane(2);
        let m = qz.model();
        let inv = Involution::new(&qz, &gauss(2)).unwrap();
        let qs = inv.star(&m.var(0)).unwrap();
        // D^(1)(q) = -2ip, so q* = conj(I(q)) = q + 2iλp
        assert_eq!(qs.coeff(0), m.var(0).coeff(0));
        assert_eq!(*qs.coeff(1), Poly::var(1).scale(&C::new(crate::scalar::q(0), crate::scalar::q(2))));
        assert_eq!(inv.star(&m.one()).unwrap(), m.one());
    }

    #[test]
    fn adjointness_kms_axioms() {
        let qz = plane(2);
        let m = qz.model();
        let mut s = Sampler::new(8);
        for (w, a) in [(gauss(2), (3, 2)), (DensityWeight::lebesgue(2), (1, 2))] {
            let inv = Involution::new(&qz, &w).unwrap();
            let d = crate::gns::damping(m, &[0, 1], a.0, a.1);
            let u = s.observable(&[0, 1], 3, 2, true);
            let v = s.observable(&[0, 1], 3, 2, true);
            let phi = s.observable(&[0, 1], 2, 2, true).mul(&d);
            let psi = s.observable(&[0, 1], 2, 2, true).mul(&d);
            assert!(inv.check_adjoint(&u, &phi, &psi).unwrap());
            assert!(inv.kms(&u.mul(&d), &v.mul(&d)).unwrap());
            assert!(inv.axioms(&u, &v).unwrap());
        }
    }

    #[test]
    fn density_ratios() {
        let qz = plane(2);
        let m = qz.model();
        let g = gauss(2);
        assert_eq!(density_ratio_hat(&qz, &g, &g).unwrap(), m.one());
        let two = g.scaled(&C::int(2));
        assert_eq!(density_ratio_hat(&qz, &g, &two).unwrap(), m.constant(C::int(2)));
        let rho = m.one().add(&m.var(0).mul(&m.var(0)));
        let gp = g.with_prefactor(&rho);
        let hat = density_ratio_hat(&qz, &g, &gp).unwrap();
        assert_eq!(hat.coeff(0), rho.coeff(0));
        let tests = ratio_test_functions(m, &gp, 4);
        assert!(check_density_ratio(&qz, &g, &gp, &hat, &tests).unwrap());
        let leb = DensityWeight::lebesgue(2);
        let hat = density_ratio_hat(&qz, &leb, &g).unwrap();
        assert!(check_density_ratio(&qz, &leb, &g, &hat, &ratio_test_functions(m, &g, 4)).unwrap());
    }

    #[test]
    fn comparison_lebesgue_gaussian() {
        let qz = plane(2);
        let m = qz.model();
        let leb = DensityWeight::lebesgue(2);
        let c = involution_comparison(&qz, &leb, &gauss(2), &m.var(0)).unwrap();
        assert_eq!(c, Comparison { conjugation: Some(true), intertwined: true });
        let g = gauss(2);
        let c = involution_comparison(&qz, &g, &g.scaled(&C::int(2)), &m.var(1)).unwrap();
        assert_eq!(c, Comparison { conjugation: Some(true), intertwined: true });
    }

    #[test]
    fn modular_class_gaussian() {
        let qz = plane(2);
        let m = qz.model();
        let leb = modular_class(&qz, &DensityWeight::lebesgue(2), 4).unwrap();
        assert!(leb.derivation.images.values().zip(leb.derivation.images.keys()).all(|(v, _)| v.coeff(1).is_zero()));
        let g = gauss(2);
        let mc = modular_class(&qz, &g, 4).unwrap();
        let rep = mc.report(&qz, &g).unwrap();
        assert!(rep.d1_equals_minus_i_delta && !rep.d1_equals_i_delta);
        assert!(rep.infinitesimal_kms && rep.exp_recovers);
        let d1q = mc.derivation.component(&Mono::var(0), 1).unwrap();
        assert_eq!(d1q, Poly::var(1).scale(&C::new(crate::scalar::q(0), crate::scalar::q(-2))));
        let (u, v) = (m.var(0).mul(&m.var(1)), m.var(0).add(&m.var(1).mul(&m.var(1))));
        assert!(mc.is_multiplicative(&qz, &u, &v).unwrap());
        assert!(mc.is_derivation(&qz, &u, &v).unwrap());
        let w = inner_difference(&qz, &mc, &leb).unwrap();
        for e in monomials(&[0, 1], 4) {
            let x = m.poly(Poly::monomial(e, C::one()));
            let lhs = mc.derivation.apply(&x).unwrap();
            assert_eq!(lhs, qz.moyal(&w, &x).sub(&qz.moyal(&x, &w)));
        }
    }
}
