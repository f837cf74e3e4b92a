//! External tensor product of the Schrödinger GNS space with a module over the
//! reduced algebra, and the induced action of the full algebra.

use crate::error::{Error, Result};
use crate::gauss::PiObservable;
use crate::model::ModelSpace;
use crate::morita::{split_fiber, FiberState, Morita};
use crate::poly::{Key, Mono, Poly, Profile};
use crate::reduction::Reducer;
use crate::scalar::C;
use crate::series::Observable;

/// `Σ [b_i] ⊗ x_i` with `b_i` on `T*G` and `x_i` in the reduced algebra (`H` = the algebra itself).
#[derive(Clone, Debug, Default)]
pub struct InducedVector {
    pub terms: Vec<(Observable, Observable)>,
}

impl InducedVector {
    pub fn simple(b: Observable, x: Observable) -> Self {
        InducedVector { terms: vec![(b, x)] }
    }
}

/// Splits `f` term by term into `(T*G part, base part)`.
pub fn split_cotangent(m: &ModelSpace, f: &Observable) -> Vec<(Observable, Observable)> {
    let mut fiber = m.grp_vars();
    fiber.extend(m.mom_vars());
    let mut out = Vec::new();
    for r in 0..=f.order() {
        for (key, c) in f.coeff(r).terms() {
            let mut fm = Mono::one();
            let mut bm = key.mono;
            for &v in &fiber {
                fm.0[v] = bm.0[v];
                bm.0[v] = 0;
            }
            let fp: Vec<_> = key.gauss.entries().filter(|(v, _)| fiber.contains(v)).collect();
            let bp: Vec<_> = key.gauss.entries().filter(|(v, _)| !fiber.contains(v)).collect();
            let a = Poly::term(Key { gauss: Profile::new(&fp), mono: fm }, C::one());
            let b = Poly::term(Key { gauss: Profile::new(&bp), mono: bm }, c.clone());
            out.push((m.poly(a), m.poly(b).shift(r)));
        }
    }
    out
}

pub struct Induction<'a> {
    red: &'a Reducer<'a>,
}

impl<'a> Induction<'a> {
    pub fn new(red: &'a Reducer<'a>) -> Result<Self> {
        if !red.model().has_group() {
            return Err(Error::UnsupportedClass(format!("{} has no global group coordinates", red.model().lie.label)));
        }
        Ok(Induction { red })
    }
    fn model(&self) -> &ModelSpace {
        self.red.model()
    }

    /// Schrödinger functional `ω(b) = ∫_G ι*_κ(b) dg`.
    pub fn omega(&self, b: &Observable) -> Result<PiObservable> {
        self.model().fiber_integral(&self.red.deformed_restriction(b))
    }

    /// Representative of `[b]` in `C∞(G)`: `ι*_κ b`.
    pub fn class(&self, b: &Observable) -> Observable {
        self.red.deformed_restriction(b)
    }

    /// `⟨[b]⊗a, [b']⊗a'⟩ = ω(b* ⋆ b') a* ⋆ a'`, summed bilinearly.
    pub fn inner_product(&self, v: &InducedVector, w: &InducedVector) -> Result<PiObservable> {
        let qz = self.red.quantizer();
        let mut out: Option<PiObservable> = None;
        for (b, a) in &v.terms {
            for (b2, a2) in &w.terms {
                let om = self.omega(&qz.star_g(&b.conj(), b2))?;
                let t = PiObservable::new(om.value.mul(&qz.moyal(&a.conj(), a2)), om.pi_half_power);
                out = Some(match out {
                    None => t,
                    Some(s) => s.add(&t)?,
                });
            }
        }
        Ok(out.unwrap_or_else(|| PiObservable::new(self.model().zero(), 0)))
    }

    /// Canonical representative `Σ ι*(b_i) x_i` of a vector, a function on `C`.
    pub fn canonical(&self, v: &InducedVector) -> Observable {
        let mut out = self.model().zero();
        for (b, x) in &v.terms {
            out.add_assign(&self.class(b).mul(x));
        }
        out
    }

    /// `f · ([b] ⊗ x) = Σ [f_G ⋆_G b] ⊗ (f_red ⋆ x)` for `f = Σ f_G f_red`.
    pub fn act(&self, f: &Observable, v: &InducedVector) -> InducedVector {
        let qz = self.red.quantizer();
        let parts = split_cotangent(self.model(), f);
        let mut out = InducedVector::default();
        for (fg, fr) in &parts {
            for (b, x) in &v.terms {
                out.terms.push((qz.star_g(fg, b), qz.moyal(fr, x)));
            }
        }
        out
    }

    /// The associativity unitary `φ ⊗_A x ↦ Σ [prol χ_k] ⊗ (u_k ⋆ x)` for `φ = Σ χ_k u_k`.
    pub fn unitary(&self, phi: &FiberState, x: &Observable) -> Result<InducedVector> {
        if phi.pi_quarter != 0 {
            return Err(Error::Config("induction expects states without π weight".into()));
        }
        let m = self.model();
        let qz = self.red.quantizer();
        let mut out = InducedVector::default();
        for (chi, u) in split_fiber(m, &phi.value) {
            out.terms.push((m.prolong(&chi)?, qz.moyal(&u, x)));
        }
        Ok(out)
    }

    /// `⟨φ⊗x, ψ⊗y⟩ = ⟨x, ⟨φ,ψ⟩_red ⋆ y⟩_A = conj x ⋆ ⟨φ,ψ⟩_red ⋆ y`.
    pub fn balanced_inner_product(
        &self,
        mo: &Morita,
        phi: &FiberState,
        x: &Observable,
        psi: &FiberState,
        y: &Observable,
    ) -> Result<PiObservable> {
        let qz = self.red.quantizer();
        let ip = mo.inner_product(phi, psi)?;
        Ok(PiObservable::new(qz.moyal(&qz.moyal(&x.conj(), &ip.value), y), ip.pi_half_power))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebraData;
    use crate::random::Sampler;
    use crate::reduction::ReductionConfig;
    use crate::star::Quantizer;

    #[test]
    fn induced_module_laws() {
        let m = ModelSpace::plane(LieAlgebraData::abelian(1), 2);
        let qz = Quantizer::new(&m);
        let red = Reducer::new(&qz, ReductionConfig::half(2));
        let ind = Induction::new(&red).unwrap();
        let mo = Morita::new(&red).unwrap();
        let g = m.grp(0);
        let damp = crate::gns::damping(&m, &[g], 1, 2);
        let chi = m.var(g).mul(&damp);
        let u = m.var(0).add(&m.constant(C::int(2)));
        // P acts by the Schrödinger derivative
        let v = InducedVector::simple(chi.clone(), u.clone());
        let pv = ind.act(&m.p(0), &v);
        let expect = chi.diff(g).scale(&-C::i()).shift(1).mul(&u);
        assert_eq!(ind.canonical(&pv), expect);
        // unit
        assert_eq!(ind.canonical(&ind.act(&m.one(), &v)), ind.canonical(&v));
        // mixed display
        let (qv, pvv) = (InducedVector::simple(chi.clone(), m.var(0)), InducedVector::simple(chi.clone(), m.var(1)));
        let om = ind.omega(&qz.star_g(&chi.conj(), &chi)).unwrap();
        let ip = ind.inner_product(&qv, &pvv).unwrap();
        assert_eq!(ip, PiObservable::new(om.value.mul(&qz.moyal(&m.var(0), &m.var(1))), om.pi_half_power));
        // unitary and *-representation
        let mut s = Sampler::new(31);
        let mut vars = m.base_vars();
        vars.push(g);
        let phi = FiberState::new(s.observable(&vars, 2, 2, true).mul(&damp));
        let psi = FiberState::new(s.observable(&vars, 2, 2, true).mul(&damp));
        let (x, y) = (s.observable(&m.base_vars(), 2, 2, true), s.observable(&m.base_vars(), 2, 2, true));
        let (a, b) = (ind.unitary(&phi, &x).unwrap(), ind.unitary(&psi, &y).unwrap());
        assert!(ind.inner_product(&a, &b).unwrap().same(&ind.balanced_inner_product(&mo, &phi, &x, &psi, &y).unwrap()));
        let mut fv = vars.clone();
        fv.push(m.mom(0));
        let f = s.observable(&fv, 2, 2, true);
        let lhs = ind.inner_product(&a, &ind.act(&f, &b)).unwrap();
        let rhs = ind.inner_product(&ind.act(&f.conj(), &a), &b).unwrap();
        assert!(lhs.same(&rhs));
        let fphi = mo.left_act(&f, &phi).unwrap();
        assert_eq!(ind.canonical(&ind.unitary(&fphi, &x).unwrap()), ind.canonical(&ind.act(&f, &a)));
    }
}
