//! Classical crossed-product kernels `Ψ(x, g, h)` on `C ×_{M_red} C`.

use crate::error::{Error, Result};
use crate::gauss::{integrate_block, PiObservable};
use crate::model::ModelSpace;
use crate::morita::FiberState;
use crate::series::Observable;

/// A kernel in the variables (base, g, h) times `π^(pi_quarter/4)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel {
    pub value: Observable,
    pub pi_quarter: i32,
}

impl Kernel {
    pub fn same(&self, o: &Kernel) -> bool {
        (self.value.is_zero() && o.value.is_zero()) || self == o
    }
}

/// Kernel calculus for a model with global group coordinates.
pub struct Crossed<'a> {
    m: &'a ModelSpace,
}

fn rename(f: &Observable, map: &dyn Fn(usize) -> usize) -> Observable {
    f.map_poly(|p| p.rename(map))
}

impl<'a> Crossed<'a> {
    pub fn new(m: &'a ModelSpace) -> Result<Self> {
        if !m.has_group() {
            return Err(Error::UnsupportedClass(format!("{} has no global group coordinates", m.lie.label)));
        }
        Ok(Crossed { m })
    }

    fn swap(&self, from: &[usize], to: &[usize]) -> impl Fn(usize) -> usize {
        let pairs: Vec<(usize, usize)> = from.iter().cloned().zip(to.iter().cloned()).collect();
        move |v| pairs.iter().find(|(a, _)| *a == v).map(|(_, b)| *b).unwrap_or(v)
    }

    fn integrate_middle(&self, f: &Observable, pq: i32) -> Result<Kernel> {
        let v: PiObservable = integrate_block(f, &self.m.grp3_vars())?;
        Ok(Kernel { value: v.value, pi_quarter: pq + 2 * v.pi_half_power })
    }

    /// `(φ ⊗ conj ψ)(x,g,h) = φ(x,g) conj ψ(x,h)`.
    pub fn outer(&self, phi: &FiberState, psi: &FiberState) -> Kernel {
        let to_h = self.swap(&self.m.grp_vars(), &self.m.grp2_vars());
        Kernel {
            value: phi.value.mul(&rename(&psi.value.conj(), &to_h)),
            pi_quarter: phi.pi_quarter + psi.pi_quarter,
        }
    }

    /// `(Ψ ∘ Ξ)(x,g,h) = ∫ Ψ(x,g,s) Ξ(x,s,h) ds`.
    pub fn conv(&self, a: &Kernel, b: &Kernel) -> Result<Kernel> {
        let m = self.m;
        let h_to_s = self.swap(&m.grp2_vars(), &m.grp3_vars());
        let g_to_s = self.swap(&m.grp_vars(), &m.grp3_vars());
        let f = rename(&a.value, &h_to_s).mul(&rename(&b.value, &g_to_s));
        self.integrate_middle(&f, a.pi_quarter + b.pi_quarter)
    }

    /// `(Ψ·φ)(x,g) = ∫ Ψ(x,g,s) φ(x,s) ds`.
    pub fn act(&self, a: &Kernel, phi: &FiberState) -> Result<FiberState> {
        let m = self.m;
        let h_to_s = self.swap(&m.grp2_vars(), &m.grp3_vars());
        let g_to_s = self.swap(&m.grp_vars(), &m.grp3_vars());
        let f = rename(&a.value, &h_to_s).mul(&rename(&phi.value, &g_to_s));
        let k = self.integrate_middle(&f, a.pi_quarter + phi.pi_quarter)?;
        Ok(FiberState::with_pi_quarter(k.value, k.pi_quarter))
    }

    /// `Ψ*(x,g,h) = conj Ψ(x,h,g)`.
    pub fn star(&self, a: &Kernel) -> Kernel {
        let m = self.m;
        let mut from = m.grp_vars();
        from.extend(m.grp2_vars());
        let mut to = m.grp2_vars();
        to.extend(m.grp_vars());
        Kernel { value: rename(&a.value.conj(), &self.swap(&from, &to)), pi_quarter: a.pi_quarter }
    }

    /// `φ · ⟨ψ,χ⟩^cl` with `⟨ψ,χ⟩^cl = ∫_G conj ψ χ dg` (pointwise).
    pub fn classical_rank_one(&self, phi: &FiberState, psi: &FiberState, chi: &FiberState) -> Result<FiberState> {
        let ip = self.m.fiber_integral(&psi.value.conj().mul(&chi.value))?;
        Ok(FiberState::with_pi_quarter(
            phi.value.mul(&ip.value),
            phi.pi_quarter + psi.pi_quarter + chi.pi_quarter + 2 * ip.pi_half_power,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebraData;
    use crate::random::Sampler;

    fn state(m: &ModelSpace, s: &mut Sampler) -> FiberState {
        let mut vars = m.base_vars();
        vars.extend(m.grp_vars());
        let d = crate::gns::damping(m, &m.grp_vars(), 1, 2);
        FiberState::new(s.observable(&vars, 2, 1, true).mul(&d))
    }

    #[test]
    fn kernel_algebra() {
        for lie in [LieAlgebraData::abelian(1), LieAlgebraData::heisenberg()] {
            let m = ModelSpace::plane(lie, 1);
            let c = Crossed::new(&m).unwrap();
            let mut s = Sampler::new(12);
            let st: Vec<FiberState> = (0..5).map(|_| state(&m, &mut s)).collect();
            let a = c.outer(&st[0], &st[1]);
            let b = c.outer(&st[2], &st[3]);
            let e = c.outer(&st[4], &st[0]);
            let ab = c.conv(&a, &b).unwrap();
            assert!(c.conv(&ab, &e).unwrap().same(&c.conv(&a, &c.conv(&b, &e).unwrap()).unwrap()));
            assert!(c.star(&ab).same(&c.conv(&c.star(&b), &c.star(&a)).unwrap()));
            assert!(c.star(&c.star(&a)).same(&a));
            assert!(c.act(&a, &st[4]).unwrap().same(&c.classical_rank_one(&st[0], &st[1], &st[4]).unwrap()));
            let phi2 = c.classical_rank_one(&st[0], &st[1], &st[2]).unwrap();
            assert!(ab.same(&c.outer(&phi2, &st[3])));
            let lhs = c.act(&a, &c.act(&b, &st[4]).unwrap()).unwrap();
            assert!(lhs.same(&c.act(&ab, &st[4]).unwrap()));
        }
    }
}
