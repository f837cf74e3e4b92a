//! The algebra-valued inner product on fiber states, fullness, rank-one
//! operators and sampled complete positivity.

use crate::error::{Error, Result};
use crate::gauss::PiObservable;
use crate::linalg;
use crate::model::ModelSpace;
use crate::poly::Poly;
use crate::reduction::Reducer;
use crate::scalar::{Q, C};
use crate::series::{Observable, Series};

/// A function on `C` times `π^(pi_quarter/4)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberState {
    pub value: Observable,
    pub pi_quarter: i32,
}

impl FiberState {
    pub fn new(value: Observable) -> Self {
        FiberState { value, pi_quarter: 0 }
    }
    pub fn with_pi_quarter(value: Observable, pi_quarter: i32) -> Self {
        FiberState { value, pi_quarter }
    }
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
    /// Equality as functions.
    pub fn same(&self, o: &FiberState) -> bool {
        (self.is_zero() && o.is_zero()) || self == o
    }
    pub fn add(&self, o: &FiberState) -> Result<FiberState> {
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(o.clone());
        }
        if self.pi_quarter != o.pi_quarter {
            return Err(Error::Config("adding fiber states with different π weights".into()));
        }
        Ok(FiberState::with_pi_quarter(self.value.add(&o.value), self.pi_quarter))
    }
    pub fn scale(&self, c: &C) -> FiberState {
        FiberState::with_pi_quarter(self.value.scale(c), self.pi_quarter)
    }
    pub fn conj(&self) -> FiberState {
        FiberState::with_pi_quarter(self.value.conj(), self.pi_quarter)
    }
}

/// Inner-product and module structure of the bimodule of fiber states.
pub struct Morita<'a> {
    red: &'a Reducer<'a>,
}

impl<'a> Morita<'a> {
    pub fn new(red: &'a Reducer<'a>) -> Result<Self> {
        if !red.model().has_group() {
            return Err(Error::UnsupportedClass(format!(
                "{} has no global group coordinates",
                red.model().lie.label
            )));
        }
        Ok(Morita { red })
    }
    pub fn model(&self) -> &ModelSpace {
        self.red.model()
    }
    pub fn reducer(&self) -> &Reducer<'a> {
        self.red
    }

    fn pi_half(&self, a: &FiberState, b: &FiberState) -> Result<i32> {
        let s = a.pi_quarter + b.pi_quarter;
        if s % 2 != 0 {
            return Err(Error::Config("inner product would carry a quarter power of π".into()));
        }
        Ok(s / 2)
    }

    /// `⟨φ,ψ⟩_red = ∫_G ι*_κ(conj(prol φ) ⋆ prol ψ) dg`.
    pub fn inner_product(&self, phi: &FiberState, psi: &FiberState) -> Result<PiObservable> {
        let m = self.model();
        let p = self.pi_half(phi, psi)?;
        let a = m.prolong(&phi.value)?.conj();
        let b = m.prolong(&psi.value)?;
        let f = self.red.deformed_restriction(&self.red.quantizer().star_total(&a, &b));
        let v = m.fiber_integral(&f)?;
        Ok(PiObservable::new(v.value, v.pi_half_power + p))
    }

    /// `∫_G conj φ ⋆_red ψ dg`.
    pub fn inner_product_closed(&self, phi: &FiberState, psi: &FiberState) -> Result<PiObservable> {
        let m = self.model();
        let p = self.pi_half(phi, psi)?;
        let v = m.fiber_integral(&self.red.quantizer().moyal(&phi.value.conj(), &psi.value))?;
        Ok(PiObservable::new(v.value, v.pi_half_power + p))
    }

    /// Classical limit `∫_G conj φ ψ dg` (λ⁰ parts).
    pub fn inner_product_classical(&self, phi: &FiberState, psi: &FiberState) -> Result<PiObservable> {
        let m = self.model();
        let p = self.pi_half(phi, psi)?;
        let f = phi.value.conj().mul(&psi.value);
        let v = m.fiber_integral(&Series::constant(f.coeff(0).clone(), f.order()))?;
        Ok(PiObservable::new(v.value, v.pi_half_power + p))
    }

    /// `φ •_red u` for an algebra element carrying a π weight.
    pub fn right_act(&self, phi: &FiberState, u: &PiObservable) -> FiberState {
        FiberState::with_pi_quarter(self.red.quantizer().moyal(&phi.value, &u.value), phi.pi_quarter + 2 * u.pi_half_power)
    }

    /// `f • φ` for an observable on `M`.
    pub fn left_act(&self, f: &Observable, phi: &FiberState) -> Result<FiberState> {
        Ok(FiberState::with_pi_quarter(self.red.left_module(f, &phi.value)?, phi.pi_quarter))
    }

    /// `ê = π^(-N/4) exp(-Σ g_a²/2)`, base independent, `⟨ê,ê⟩ = 1`.
    pub fn fullness_element(&self) -> FiberState {
        let m = self.model();
        let e = crate::gns::damping(m, &m.grp_vars(), 1, 2);
        FiberState::with_pi_quarter(e, -(m.dim() as i32))
    }

    /// `ε •_red ⟨ε,ε⟩^(-1/2)`, the square-root normalization of a state with
    /// constant rational-square classical norm.
    pub fn normalize(&self, eps: &FiberState) -> Result<FiberState> {
        let qz = self.red.quantizer();
        let h = self.inner_product(eps, eps)?;
        if h.pi_half_power % 2 != 0 {
            return Err(Error::NotPerfectSquare(format!("π^({}/2)", h.pi_half_power)));
        }
        let mul = |a: &Observable, b: &Observable| qz.moyal(a, b);
        let root = h.value.sqrt_with(&mul)?;
        let inv = root.inverse_with(&mul)?;
        Ok(self.right_act(eps, &PiObservable::new(inv, -h.pi_half_power / 2)))
    }

    /// Fiber-state sum `Σ c_i φ_i`.
    pub fn combine(&self, states: &[FiberState], coeffs: &[C]) -> Result<FiberState> {
        let mut out = FiberState::new(self.model().zero());
        for (s, c) in states.iter().zip(coeffs) {
            out = out.add(&s.scale(c))?;
        }
        Ok(out)
    }
}

/// `Θ_{φ,ψ}: χ ↦ φ •_red ⟨ψ,χ⟩_red`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOne {
    pub phi: FiberState,
    pub psi: FiberState,
}

impl RankOne {
    pub fn new(phi: FiberState, psi: FiberState) -> Self {
        RankOne { phi, psi }
    }
    pub fn apply(&self, mo: &Morita, chi: &FiberState) -> Result<FiberState> {
        Ok(mo.right_act(&self.phi, &mo.inner_product(&self.psi, chi)?))
    }
    pub fn adjoint(&self) -> RankOne {
        RankOne { phi: self.psi.clone(), psi: self.phi.clone() }
    }
    /// `Θ_{φ,ψ} Θ_{χ,ξ} = Θ_{φ•⟨ψ,χ⟩, ξ}`.
    pub fn compose(&self, mo: &Morita, o: &RankOne) -> Result<RankOne> {
        Ok(RankOne { phi: self.apply(mo, &o.phi)?, psi: o.psi.clone() })
    }
}

/// `(⟨φ_i, φ_j⟩_red)_{ij}`.
pub fn gram(mo: &Morita, states: &[FiberState]) -> Result<Vec<Vec<PiObservable>>> {
    states.iter().map(|a| states.iter().map(|b| mo.inner_product(a, b)).collect()).collect()
}

/// Value of the λ⁰ coefficient at a base point; the π weight is dropped.
pub fn evaluate_classical(m: &ModelSpace, f: &PiObservable, point: &[Q]) -> Result<C> {
    let mut p: Poly = f.value.coeff(0).clone();
    for (i, x) in point.iter().enumerate() {
        p = p.eval_at(m.base(i), x).ok_or_else(|| Error::Config("Gaussian factor at evaluation point".into()))?;
    }
    p.as_constant().ok_or_else(|| Error::Config("value depends on non-base coordinates".into()))
}

/// Sampled complete positivity.
#[derive(Clone, Debug, PartialEq)]
pub struct PositivityReport {
    /// Classical Gram matrix PSD at each sample point.
    pub psd_at_points: Vec<bool>,
    /// `Σ conj c_i c_j ⟨φ_i,φ_j⟩ = ⟨Σ c_i φ_i, Σ c_j φ_j⟩` for every coefficient vector.
    pub factorization: bool,
}

impl PositivityReport {
    pub fn passed(&self) -> bool {
        self.factorization && self.psd_at_points.iter().all(|&b| b)
    }
}

/// Point evaluations of the Gram matrix at lowest order, plus the Ψ*Ψ factorization
/// witness for the given coefficient vectors.
pub fn complete_positivity_sample(
    mo: &Morita,
    states: &[FiberState],
    points: &[Vec<Q>],
    coeff_vectors: &[Vec<C>],
) -> Result<PositivityReport> {
    let m = mo.model();
    let g = gram(mo, states)?;
    // the common π weight pattern is a congruence by a positive diagonal
    let mut psd = Vec::new();
    for pt in points {
        let mat: Vec<Vec<C>> = g
            .iter()
            .map(|row| row.iter().map(|e| evaluate_classical(m, e, pt)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        psd.push(linalg::is_psd(&mat));
    }
    let mut factorization = true;
    for c in coeff_vectors {
        let v = mo.combine(states, c)?;
        let direct = mo.inner_product(&v, &v)?;
        let mut sum: Option<PiObservable> = None;
        for (i, ci) in c.iter().enumerate() {
            for (j, cj) in c.iter().enumerate() {
                let term = PiObservable::new(g[i][j].value.scale(&(ci.conj() * cj.clone())), g[i][j].pi_half_power);
                sum = Some(match sum {
                    None => term,
                    Some(s) => s.add(&term)?,
                });
            }
        }
        factorization &= sum.map(|s| s.same(&direct)).unwrap_or(direct.is_zero());
    }
    Ok(PositivityReport { psd_at_points: psd, factorization })
}

/// Splits a state into `Σ χ_k(g) ⊗ u_k(base)` term by term.
pub fn split_fiber(m: &ModelSpace, f: &Observable) -> Vec<(Observable, Observable)> {
    let k = f.order();
    let grp = m.grp_vars();
    let mut out = Vec::new();
    for r in 0..=k {
        for (key, c) in f.coeff(r).terms() {
            let mut gm = crate::poly::Mono::one();
            let mut bm = key.mono;
            for &v in &grp {
                gm.0[v] = bm.0[v];
                bm.0[v] = 0;
            }
            let gp: Vec<_> = key.gauss.entries().filter(|(v, _)| grp.contains(v)).collect();
            let bp: Vec<_> = key.gauss.entries().filter(|(v, _)| !grp.contains(v)).collect();
            let gpart = Poly::term(crate::poly::Key { gauss: crate::poly::Profile::new(&gp), mono: gm }, C::one());
            let bpart = Poly::term(crate::poly::Key { gauss: crate::poly::Profile::new(&bp), mono: bm }, c.clone());
            out.push((m.poly(gpart), m.poly(bpart).shift(r)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebraData;
    use crate::random::Sampler;
    use crate::reduction::ReductionConfig;
    use crate::star::Quantizer;

    fn states(m: &ModelSpace, s: &mut Sampler, n: usize) -> Vec<FiberState> {
        let mut vars = m.base_vars();
        vars.extend(m.grp_vars());
        let d = crate::gns::damping(m, &m.grp_vars(), 1, 2);
        let unit = -(m.dim() as i32);
        (0..n).map(|_| FiberState::with_pi_quarter(s.observable(&vars, 2, 2, true).mul(&d), unit)).collect()
    }

    #[test]
    fn fullness_and_rank_one() {
        for lie in [LieAlgebraData::abelian(1), LieAlgebraData::heisenberg()] {
            let m = ModelSpace::plane(lie, 2);
            let qz = Quantizer::new(&m);
            let red = Reducer::new(&qz, ReductionConfig::half(2));
            let mo = Morita::new(&red).unwrap();
            let e = mo.fullness_element();
            let one = mo.inner_product(&e, &e).unwrap();
            assert_eq!(one, PiObservable::new(m.one(), 0));
            let mut s = Sampler::new(2);
            let st = states(&m, &mut s, 3);
            let th = RankOne::new(st[0].clone(), e.clone());
            assert!(th.apply(&mo, &e).unwrap().same(&st[0]));
            let p = RankOne::new(e.clone(), e.clone());
            let x = p.apply(&mo, &st[1]).unwrap();
            assert!(p.apply(&mo, &x).unwrap().same(&x));
            let t = RankOne::new(st[0].clone(), st[1].clone());
            let lhs = mo.inner_product(&t.apply(&mo, &st[2]).unwrap(), &e).unwrap();
            let rhs = mo.inner_product(&st[2], &t.adjoint().apply(&mo, &e).unwrap()).unwrap();
            assert!(lhs.same(&rhs));
            assert!(mo.inner_product(&st[0], &st[1]).unwrap().same(&mo.inner_product_closed(&st[0], &st[1]).unwrap()));
        }
    }

    #[test]
    fn square_root_normalization() {
        let m = ModelSpace::plane(LieAlgebraData::abelian(1), 2);
        let qz = Quantizer::new(&m);
        let red = Reducer::new(&qz, ReductionConfig::half(2));
        let mo = Morita::new(&red).unwrap();
        let e = mo.fullness_element();
        let pert = m.constant(C::int(2)).add(&m.var(0).add(&m.var(1).scale(&C::i())).shift(1));
        let eps = FiberState::with_pi_quarter(e.value.mul(&pert), e.pi_quarter);
        let n = mo.normalize(&eps).unwrap();
        assert_eq!(mo.inner_product(&n, &n).unwrap(), PiObservable::new(m.one(), 0));
    }

    #[test]
    fn gram_positivity() {
        let m = ModelSpace::plane(LieAlgebraData::heisenberg(), 2);
        let qz = Quantizer::new(&m);
        let red = Reducer::new(&qz, ReductionConfig::half(2));
        let mo = Morita::new(&red).unwrap();
        let mut s = Sampler::new(3);
        let st = states(&m, &mut s, 3);
        let pts: Vec<Vec<Q>> = (0..5).map(|i| vec![crate::scalar::q(i - 2), crate::scalar::q(1 - i)]).collect();
        let cv: Vec<Vec<C>> = (0..3).map(|_| (0..3).map(|_| s.coeff(true)).collect()).collect();
        assert!(complete_positivity_sample(&mo, &st, &pts, &cv).unwrap().passed());
    }
}
