//! Quantized Koszul operator, deformed restriction and homotopies, the
//! bimodule structure on functions on `C`, and the reduced star product.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::koszul::{homotopy, koszul, SuperObservable};
use crate::model::ModelSpace;
use crate::poly::Mono;
use crate::scalar::{q, Q, C};
use crate::series::{Observable, Scalar, Series};
use crate::star::Quantizer;

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionConfig {
    pub kappa: Scalar,
}

impl ReductionConfig {
    pub fn new(kappa: Scalar) -> Self {
        ReductionConfig { kappa }
    }
    /// `κ = 1/2`.
    pub fn half(k: usize) -> Self {
        Self::new(Series::constant(C::frac(1, 2), k))
    }
}

pub struct Reducer<'a> {
    qz: &'a Quantizer,
    cfg: ReductionConfig,
}

impl<'a> Reducer<'a> {
    pub fn new(qz: &'a Quantizer, cfg: ReductionConfig) -> Self {
        Reducer { qz, cfg }
    }
    pub fn quantizer(&self) -> &Quantizer {
        self.qz
    }
    pub fn model(&self) -> &ModelSpace {
        self.qz.model()
    }
    pub fn config(&self) -> &ReductionConfig {
        &self.cfg
    }
    fn k(&self) -> usize {
        self.qz.order()
    }

    /// `∂^(κ)x = ins(e^a)x ⋆ J_a + (iλ/2) C_ab^c e_c ∧ ins(e^a)ins(e^b)x + iλκ ins(Δ)x`.
    pub fn quantized_koszul(&self, x: &SuperObservable) -> SuperObservable {
        let m = self.model();
        let n = m.dim();
        let mut out = SuperObservable::zero(x.order());
        for a in 0..n {
            let ja = m.j(a);
            out = out.add(&x.ins(a).map(|f| self.qz.star_total(f, &ja)));
        }
        let half_i = C::new(Q::zero(), q(1) / q(2));
        for a in 0..n {
            if x.ins(a).is_zero() {
                continue;
            }
            for b in 0..n {
                // ins(e^a) ins(e^b) x
                let xab = x.ins(b).ins(a);
                if xab.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let s = m.lie.c(a, b, c);
                    if !s.is_zero() {
                        out = out.add(&xab.wedge_e(c).shift(1).scale(&half_i.scale(s)));
                    }
                }
            }
        }
        let delta: Vec<Q> = (0..n).map(|a| m.lie.delta(a).clone()).collect();
        if delta.iter().any(|d| !d.is_zero()) {
            let t = x.ins_covector(&delta).shift(1).scale(&C::i()).scale_series(&self.cfg.kappa);
            out = out.add(&t);
        }
        out
    }

    /// `(∂^(κ) - ∂) x`.
    fn koszul_defect(&self, x: &SuperObservable) -> SuperObservable {
        self.quantized_koszul(x).sub(&koszul(self.model(), x))
    }

    /// `(∂₁ - ∂^(κ)₁) h₀ f`.
    pub fn defect_step(&self, f: &Observable) -> Observable {
        let h = homotopy(self.model(), &SuperObservable::scalar(f));
        self.koszul_defect(&h).scalar_part().neg()
    }

    /// `(id + (∂^(κ)₁ - ∂₁)h₀)⁻¹ f` by the λ-graded Neumann series.
    pub fn resolvent0(&self, f: &Observable) -> Observable {
        let mut acc = f.clone();
        let mut term = f.clone();
        for _ in 0..=self.k() {
            term = self.defect_step(&term);
            if term.is_zero() {
                break;
            }
            acc.add_assign(&term);
        }
        acc
    }

    /// Deformed restriction `ι*_κ`.
    pub fn deformed_restriction(&self, f: &Observable) -> Observable {
        self.model().restrict(&self.resolvent0(f))
    }

    /// Deformed homotopy on each homogeneous degree of `x`.
    pub fn deformed_homotopy(&self, x: &SuperObservable) -> SuperObservable {
        let m = self.model();
        let mut out = SuperObservable::zero(x.order());
        let top = x.max_degree().unwrap_or(0);
        for d in 0..=top {
            let xd = x.degree_part(d);
            if xd.is_zero() {
                continue;
            }
            if d == 0 {
                let r = self.resolvent0(&xd.scalar_part());
                out = out.add(&homotopy(m, &SuperObservable::scalar(&r)));
                continue;
            }
            // B_d = id + h_{d-1}(∂^κ_d - ∂_d) + (∂^κ_{d+1} - ∂_{d+1}) h_d
            let e = |y: &SuperObservable| {
                let a = homotopy(m, &self.koszul_defect(y));
                let b = self.koszul_defect(&homotopy(m, y));
                a.add(&b).degree_part(d)
            };
            let mut acc = xd.clone();
            let mut term = xd;
            for _ in 0..=self.k() {
                term = e(&term).neg();
                if term.is_zero() {
                    break;
                }
                acc = acc.add(&term);
            }
            out = out.add(&homotopy(m, &acc));
        }
        out
    }

    /// Augmented deformed differential: `∂^(κ)` in degrees ≥ 1, `ι*_κ` on degree 0.
    pub fn augmented_differential(&self, x: &SuperObservable) -> (Observable, SuperObservable) {
        let d0 = self.deformed_restriction(&x.scalar_part());
        let rest = self.quantized_koszul(&x.sub(&x.degree_part(0)));
        (d0, rest)
    }

    /// `f •_κ φ = ι*_κ(f ⋆ prol φ)`.
    pub fn left_module(&self, f: &Observable, phi: &Observable) -> Result<Observable> {
        let p = self.model().prolong(phi)?;
        Ok(self.deformed_restriction(&self.qz.star_total(f, &p)))
    }

    /// `Σ_r (1/r!)(λ/i)^r ι*(∂^r Nf/∂P_{a₁}⋯∂P_{a_r}) ⋆_red X_{a₁}⋯X_{a_r} φ`.
    pub fn left_module_explicit(&self, f: &Observable, phi: &Observable) -> Result<Observable> {
        let m = self.model();
        if m.depends_on_momenta(phi) {
            return Err(Error::MomentumDependence);
        }
        let k = self.k();
        let n = m.dim();
        let nf = self.qz.neumaier_n(f);
        let mut out = m.zero();
        // tuples of length r: (derivative of Nf, X-word applied to φ)
        let mut level: Vec<(Observable, Vec<usize>)> = vec![(nf, vec![])];
        let mut pref = C::one();
        let lam_over_i = C::new(Q::zero(), q(-1));
        for r in 0..=k {
            if r > 0 {
                pref = pref * lam_over_i.scale(&(q(1) / q(r as i64)));
            }
            for (d, word) in &level {
                let coef = m.restrict(d);
                if coef.is_zero() {
                    continue;
                }
                let mut w = phi.clone();
                for &a in word.iter().rev() {
                    w = m.x_apply(a, &w);
                }
                if w.is_zero() {
                    continue;
                }
                out.add_assign(&self.qz.moyal(&coef, &w).shift(r).scale(&pref));
            }
            let mut next = Vec::new();
            for (d, word) in &level {
                for a in 0..n {
                    let da = d.diff(m.mom(a));
                    if !da.is_zero() {
                        let mut w = word.clone();
                        w.push(a);
                        next.push((da, w));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            level = next;
        }
        Ok(out)
    }

    /// `φ •_red u = ι*_κ(prol φ ⋆ prol π*u)`.
    pub fn right_module(&self, phi: &Observable, u: &Observable) -> Result<Observable> {
        let m = self.model();
        if !m.is_base_only(u) {
            return Err(Error::Config("right module argument must be a base function".into()));
        }
        let p = m.prolong(phi)?;
        Ok(self.deformed_restriction(&self.qz.star_total(&p, u)))
    }

    /// `φ ⋆_red π*u`.
    pub fn right_module_explicit(&self, phi: &Observable, u: &Observable) -> Observable {
        self.qz.moyal(phi, u)
    }

    /// `π*(u ⋆_red v) = ι*_κ(prol π*u ⋆ prol π*v)`.
    pub fn reduced_star(&self, u: &Observable, v: &Observable) -> Result<Observable> {
        let m = self.model();
        if !m.is_base_only(u) || !m.is_base_only(v) {
            return Err(Error::Config("reduced star product takes base functions".into()));
        }
        Ok(self.deformed_restriction(&self.qz.star_total(u, v)))
    }

    /// `L_{ξ_C} ι*_κ f = 0` for every basis vector.
    pub fn quantized_bc_member(&self, f: &Observable) -> Result<bool> {
        let m = self.model();
        if !m.has_group() {
            return Err(Error::UnsupportedClass(format!("{} has no exact group coordinates", m.lie.label)));
        }
        let r = self.deformed_restriction(f);
        Ok((0..m.dim()).all(|a| m.lie_c(a, &r).is_zero()))
    }

    /// `-iλ L_{ξ_C} φ - iλκ Δ(ξ) φ` for `ξ = e_a`.
    pub fn momentum_action_expected(&self, a: usize, phi: &Observable) -> Observable {
        let m = self.model();
        let minus_i = C::new(Q::zero(), q(-1));
        let mut out = m.lie_c(a, phi).shift(1).scale(&minus_i);
        let d = m.lie.delta(a);
        if !d.is_zero() {
            out.add_assign(&phi.scale_series(&self.cfg.kappa).shift(1).scale(&minus_i.scale(d)));
        }
        out
    }
}

/// Monomial `x^e` in a single variable as an observable.
pub fn var_power(m: &ModelSpace, v: usize, e: u8) -> Observable {
    m.poly(crate::poly::Poly::monomial(Mono::one().with(v, e), C::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebraData;
    use crate::random::Sampler;

    fn plane(lie: LieAlgebraData, k: usize) -> ModelSpace {
        ModelSpace::plane(lie, k)
    }

    #[test]
    fn affine_koszul_example() {
        let m = ModelSpace::new(LieAlgebraData::aff1(), &[], vec![], 3).unwrap();
        let qz = Quantizer::new(&m);
        let red = Reducer::new(&qz, ReductionConfig::half(3));
        let f = m.p(1).add(&m.one());
        let x = SuperObservable::basis(&[0], &f);
        let expect = qz.star_total(&f, &m.j(0)).add(&f.shift(1).scale(&C::new(q(0), qf(1, 2))));
        assert_eq!(red.quantized_koszul(&x), SuperObservable::scalar(&expect));
    }
    use crate::scalar::qf;

    #[test]
    fn quantized_koszul_squares_to_zero_on_heisenberg() {
        let m = plane(LieAlgebraData::heisenberg(), 2);
        let qz = Quantizer::new(&m);
        let mut s = Sampler::new(11);
        let vars: Vec<usize> = [m.base_vars(), m.mom_vars(), m.grp_vars()].concat();
        for kappa in [ReductionConfig::new(Series::zero(2)), ReductionConfig::half(2)] {
            let red = Reducer::new(&qz, kappa);
            for idx in [vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]] {
                let x = SuperObservable::basis(&idx, &s.observable(&vars, 2, 2, true));
                assert!(red.quantized_koszul(&red.quantized_koszul(&x)).is_zero(), "{idx:?}");
            }
        }
    }

    #[test]
    fn restriction_examples_on_the_line() {
        let m = plane(LieAlgebraData::abelian(1), 3);
        let qz = Quantizer::new(&m);
        let red = Reducer::new(&qz, ReductionConfig::half(3));
        let g = m.var(m.grp(0));
        let p = m.p(0);
        assert_eq!(red.deformed_restriction(&g.mul(&p)), m.lambda_term(C::new(q(0), qf(-1, 2)), 1));
        assert!(red.deformed_restriction(&p.mul(&p)).is_zero());
        let phi = g.mul(&m.var(0));
        assert_eq!(red.deformed_restriction(&phi), phi);
        let lhs = red.left_module(&p, &phi).unwrap();
        assert_eq!(lhs, phi.diff(m.grp(0)).shift(1).scale(&C::new(q(0), q(-1))));
        assert!(!red.quantized_bc_member(&g).unwrap());
        assert!(red.quantized_bc_member(&m.var(0)).unwrap());
    }

    #[test]
    fn reduced_product_is_moyal() {
        let m = plane(LieAlgebraData::heisenberg(), 2);
        let qz = Quantizer::new(&m);
        let red = Reducer::new(&qz, ReductionConfig::half(2));
        let (x, y) = (m.var(0), m.var(1));
        assert_eq!(red.reduced_star(&x, &y).unwrap(), qz.moyal(&x, &y));
    }

    #[test]
    fn closed_forms_agree_with_definitions() {
        for lie in [LieAlgebraData::abelian(1), LieAlgebraData::heisenberg()] {
            let m = plane(lie, 3);
            let qz = Quantizer::new(&m);
            let red = Reducer::new(&qz, ReductionConfig::half(3));
            let mut s = Sampler::new(5);
            let all: Vec<usize> = (0..2 + 2 * m.dim()).collect();
            let mut cvars = m.base_vars();
            cvars.extend(m.grp_vars());
            for _ in 0..3 {
                let f = s.observable(&all, 3, 3, true);
                assert_eq!(red.deformed_restriction(&f), m.restrict(&qz.neumaier_n(&f)));
                let phi = s.observable(&cvars, 3, 3, true);
                assert_eq!(red.left_module(&f, &phi).unwrap(), red.left_module_explicit(&f, &phi).unwrap());
            }
        }
    }

    #[test]
    fn deformed_homotopy_degree_zero() {
        let m = plane(LieAlgebraData::heisenberg(), 2);
        let qz = Quantizer::new(&m);
        let red = Reducer::new(&qz, ReductionConfig::half(2));
        let mut s = Sampler::new(9);
        let all: Vec<usize> = (0..2 + 2 * m.dim()).collect();
        let f = s.observable(&all, 3, 2, true);
        let h = red.deformed_homotopy(&SuperObservable::scalar(&f));
        let lhs = red.quantized_koszul(&h).scalar_part().add(&red.deformed_restriction(&f));
        assert_eq!(lhs, f);
    }
}
#[cfg(test)]
mod closed_form_notes {
    use super::*;
    use crate::lie::LieAlgebraData;

    #[test]
    fn explicit_formula_needs_n() {
        let m = ModelSpace::plane(LieAlgebraData::abelian(1), 2);
        let qz = Quantizer::new(&m);
        let red = Reducer::new(&qz, ReductionConfig::half(2));
        let g = m.var(m.grp(0));
        let f = g.mul(&m.p(0));
        let phi = g.mul(&g);
        let def = red.left_module(&f, &phi).unwrap();
        assert_eq!(def, phi.shift(1).scale(&C::new(q(0), qf(-5, 2))));
        assert_ne!(def, qz.stdrep_apply(&f, &phi));
    }

    #[test]
    fn affine_restriction_matches_n() {
        let m = ModelSpace::new(LieAlgebraData::aff1(), &[], vec![], 3).unwrap();
        let qz = Quantizer::new(&m);
        let red = Reducer::new(&qz, ReductionConfig::half(3));
        let f = m.p(0).mul(&m.p(0)).add(&m.p(0)).add(&m.p(1).mul(&m.p(0)));
        assert_eq!(red.deformed_restriction(&f), m.restrict(&qz.neumaier_n(&f)));
    }
    use crate::scalar::qf;
}
