//! Star products on the model: Moyal on the base, standard-ordered and
//! Weyl-ordered products on the cotangent block, and their tensor product.
//!
//! Operators on functions of `(x, g)` are held in the normal form
//! `Σ_m ψ_m(x, g; λ) Z^m` with `Z_a = (λ/i) X_a` in PBW order, so that
//! composition only needs `Z_a ψ = ψ Z_a + (λ/i) X_a ψ` and the commutators
//! `[Z_a, Z_b] = (λ/i) C_ab^c Z_c`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::diffop::{diff_multi, DiffOperator};
use crate::error::{Error, Result};
use crate::model::ModelSpace;
use crate::pbw::Pbw;
use crate::poly::{Mono, Poly};
use crate::scalar::{q, Q, C};
use crate::series::{Observable, Series};

/// Normal-ordered operator: PBW exponent → left coefficient.
pub type OpSymbol = BTreeMap<Mono, Observable>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StarKind {
    Moyal,
    Std,
    WeylG,
    Total,
}

impl StarKind {
    pub const ALL: [StarKind; 4] = [StarKind::Moyal, StarKind::Std, StarKind::WeylG, StarKind::Total];

    pub fn name(self) -> &'static str {
        match self {
            StarKind::Moyal => "moyal",
            StarKind::Std => "std",
            StarKind::WeylG => "weyl_g",
            StarKind::Total => "total",
        }
    }
    pub fn parse(s: &str) -> Result<StarKind> {
        StarKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown star product '{s}'")))
    }
}

/// Outcome of a strong-invariance check.
#[derive(Clone, Debug, Default)]
pub struct InvarianceReport {
    pub checked: usize,
    /// `(basis index, sample index, λ order)` of each failing comparison.
    pub failures: Vec<(usize, usize, usize)>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn add_op(op: &mut OpSymbol, m: Mono, c: Observable) {
    if c.is_zero() {
        return;
    }
    match op.get_mut(&m) {
        Some(e) => {
            e.add_assign(&c);
            if e.is_zero() {
                op.remove(&m);
            }
        }
        None => {
            op.insert(m, c);
        }
    }
}

/// Holds a model together with the PBW tables for its left-invariant fields.
pub struct Quantizer {
    model: ModelSpace,
    pbw: Pbw,
}

impl Quantizer {
    pub fn new(model: &ModelSpace) -> Self {
        let k = model.order();
        let s = Series::monomial(C::new(Q::zero(), q(-1)), 1, k);
        Quantizer { pbw: Pbw::new(&model.lie, s), model: model.clone() }
    }
    pub fn model(&self) -> &ModelSpace {
        &self.model
    }
    pub fn order(&self) -> usize {
        self.model.order()
    }

    fn pmono_to_pbw(&self, m: &Mono) -> Mono {
        let mut out = Mono::one();
        for a in 0..self.model.dim() {
            out = out.with(a, m.get(self.model.mom(a)));
        }
        out
    }
    fn pbw_to_pmono(&self, m: &Mono) -> Mono {
        let mut out = Mono::one();
        for a in 0..self.model.dim() {
            out = out.with(self.model.mom(a), m.get(a));
        }
        out
    }

    /// `Z_a ψ = (λ/i) X_a ψ`.
    pub fn z_apply(&self, a: usize, psi: &Observable) -> Observable {
        self.model.x_apply(a, psi).shift(1).scale(&C::new(Q::zero(), q(-1)))
    }

    /// `Z_a ∘ op` in normal form.
    pub fn z_left(&self, a: usize, op: &OpSymbol) -> OpSymbol {
        let mut out = OpSymbol::new();
        for (m, psi) in op {
            for (m2, s) in self.pbw.gen_times(a, m) {
                add_op(&mut out, m2, psi.scale_series(&s));
            }
            let d = self.z_apply(a, psi);
            add_op(&mut out, *m, d);
        }
        out
    }

    /// Operator composition `x ∘ y`.
    pub fn compose(&self, x: &OpSymbol, y: &OpSymbol) -> OpSymbol {
        let mut memo: HashMap<Mono, OpSymbol> = HashMap::new();
        let mut out = OpSymbol::new();
        for (m, a) in x {
            let zy = self.z_power_times(m, y, &mut memo);
            for (m2, b) in zy {
                add_op(&mut out, m2, a.mul(&b));
            }
        }
        out
    }

    fn z_power_times(&self, m: &Mono, y: &OpSymbol, memo: &mut HashMap<Mono, OpSymbol>) -> OpSymbol {
        if let Some(r) = memo.get(m) {
            return r.clone();
        }
        let r = match (0..self.model.dim()).find(|&a| m.get(a) > 0) {
            None => y.clone(),
            Some(a) => {
                let inner = self.z_power_times(&m.with(a, m.get(a) - 1), y, memo);
                self.z_left(a, &inner)
            }
        };
        memo.insert(*m, r.clone());
        r
    }

    /// Apply a normal-ordered operator to a function of `(x, g)`.
    pub fn apply(&self, op: &OpSymbol, psi: &Observable) -> Observable {
        let mut memo: HashMap<Mono, Observable> = HashMap::new();
        let mut out = self.model.zero().with_order(psi.order());
        for (m, a) in op {
            let zp = self.z_power_apply(m, psi, &mut memo);
            out.add_assign(&a.mul(&zp));
        }
        out
    }

    fn z_power_apply(&self, m: &Mono, psi: &Observable, memo: &mut HashMap<Mono, Observable>) -> Observable {
        if let Some(r) = memo.get(m) {
            return r.clone();
        }
        let r = match (0..self.model.dim()).find(|&a| m.get(a) > 0) {
            None => psi.clone(),
            Some(a) => {
                let inner = self.z_power_apply(&m.with(a, m.get(a) - 1), psi, memo);
                self.z_apply(a, &inner)
            }
        };
        memo.insert(*m, r.clone());
        r
    }

    /// Coefficients of `f` as a polynomial in the momenta.
    fn momentum_coefficients(&self, f: &Observable) -> BTreeMap<Mono, Observable> {
        let k = f.order();
        let mvars = self.model.mom_vars();
        let mut out: BTreeMap<Mono, Vec<Poly>> = BTreeMap::new();
        for r in 0..=k {
            for (m, p) in f.coeff(r).split_by(&mvars) {
                out.entry(m).or_insert_with(|| vec![Poly::zero(); k + 1])[r] = p;
            }
        }
        out.into_iter().map(|(m, c)| (m, Series::from_coeffs(c, k))).collect()
    }

    /// Standard-ordered quantization `f ↦ Σ_m f_m Sym(Z^m)` in normal form.
    pub fn stdrep_symbol(&self, f: &Observable) -> OpSymbol {
        let mut out = OpSymbol::new();
        for (pm, coef) in self.momentum_coefficients(f) {
            let m = self.pmono_to_pbw(&pm);
            for (m2, s) in self.pbw.sym(&m) {
                add_op(&mut out, m2, coef.scale_series(&s));
            }
        }
        out
    }

    /// Inverse of `stdrep_symbol`.
    pub fn symbol(&self, op: &OpSymbol) -> Observable {
        let mut rest = op.clone();
        let k = op.values().next().map_or(self.order(), |c| c.order());
        let mut out = self.model.zero().with_order(k);
        while let Some((&m, _)) = rest.iter().max_by_key(|(m, _)| m.degree()) {
            let c = rest[&m].clone();
            let pm = self.pbw_to_pmono(&m);
            out.add_assign(&c.map_poly(|p| p.mul(&Poly::monomial(pm, C::one()))));
            for (m2, s) in self.pbw.sym(&m) {
                add_op(&mut rest, m2, c.scale_series(&s).neg());
            }
        }
        out
    }

    fn require_group(&self) -> Result<()> {
        if self.model.has_group() {
            Ok(())
        } else {
            Err(Error::UnsupportedClass(format!(
                "{} has no exact group coordinates",
                self.model.lie.label
            )))
        }
    }

    /// `stdrep(f)` as a differential operator in the group coordinates.
    pub fn stdrep(&self, f: &Observable) -> Result<DiffOperator> {
        self.require_group()?;
        let k = self.order();
        let zs: Vec<DiffOperator> = (0..self.model.dim())
            .map(|a| self.model.x_field(a).shift(1).scale(&C::new(Q::zero(), q(-1))))
            .collect();
        let mut out = DiffOperator::zero(k);
        for (m, a) in self.stdrep_symbol(f) {
            let mut d = DiffOperator::mult(&a);
            for (b, z) in zs.iter().enumerate() {
                for _ in 0..m.get(b) {
                    d = d.compose(z);
                }
            }
            out = out.add(&d);
        }
        Ok(out)
    }

    /// `stdrep(f) ψ` computed in normal form.
    pub fn stdrep_apply(&self, f: &Observable, psi: &Observable) -> Observable {
        self.apply(&self.stdrep_symbol(f), psi)
    }

    /// The standard-ordered product: `stdrep(f ⋆_std g) = stdrep(f) ∘ stdrep(g)`.
    pub fn star_std(&self, f: &Observable, g: &Observable) -> Observable {
        self.symbol(&self.compose(&self.stdrep_symbol(f), &self.stdrep_symbol(g)))
    }

    /// `T f = Σ_a (X_a - Δ_a) ∂f/∂P_a`, the generator of `N`.
    fn t_op(&self, f: &Observable) -> Observable {
        let mut out = self.model.zero().with_order(f.order());
        for a in 0..self.model.dim() {
            let d = f.diff(self.model.mom(a));
            if d.is_zero() {
                continue;
            }
            out.add_assign(&self.model.x_apply(a, &d));
            let delta = self.model.lie.delta(a);
            if !delta.is_zero() {
                out.add_assign(&d.scale(&C::real(-delta.clone())));
            }
        }
        out
    }

    fn exp_t(&self, f: &Observable, sign: i64) -> Observable {
        // exp(sign · (λ/2i) T)
        let k = f.order();
        let step = C::new(Q::zero(), q(-sign) / q(2));
        let mut out = f.clone();
        let mut term = f.clone();
        for j in 1..=k {
            term = self.t_op(&term).shift(1).scale(&step.scale(&(q(1) / q(j as i64))));
            if term.is_zero() {
                break;
            }
            out.add_assign(&term);
        }
        out
    }

    /// `N = exp((λ/2i) T)`.
    pub fn neumaier_n(&self, f: &Observable) -> Observable {
        self.exp_t(f, 1)
    }
    pub fn neumaier_n_inv(&self, f: &Observable) -> Observable {
        self.exp_t(f, -1)
    }

    /// Weyl-ordered product `N⁻¹(Nf ⋆_std Ng)`.
    pub fn star_g(&self, f: &Observable, g: &Observable) -> Observable {
        if self.is_fiber_free(f) || self.is_fiber_free(g) {
            return f.mul(g);
        }
        self.neumaier_n_inv(&self.star_std(&self.neumaier_n(f), &self.neumaier_n(g)))
    }

    /// Independent of momenta and group coordinates, hence central for the
    /// cotangent-block products.
    fn is_fiber_free(&self, f: &Observable) -> bool {
        let m = &self.model;
        m.mom_vars().iter().chain(m.grp_vars().iter()).all(|&v| !f.depends_on(v))
    }

    /// Terms `(r, α, β, c)` of the Moyal expansion with `c = (i/2)^r/r! Σ Λ^{i₁j₁}⋯Λ^{i_r j_r}`
    /// collected by derivative multi-indices; the factor `λ^r` is left out.
    pub fn moyal_pairs(&self, k: usize) -> Vec<(usize, Mono, Mono, C)> {
        let nb = self.model.base_dim();
        let mut out = Vec::new();
        let mut level: BTreeMap<(Mono, Mono), Q> = BTreeMap::new();
        level.insert((Mono::one(), Mono::one()), q(1));
        let mut pref = C::one();
        for r in 0..=k {
            if r > 0 {
                pref = pref.scale(&(q(1) / q(r as i64))) * C::new(Q::zero(), q(1) / q(2));
            }
            for ((al, be), c) in &level {
                out.push((r, *al, *be, pref.scale(c)));
            }
            if r == k {
                break;
            }
            let mut next: BTreeMap<(Mono, Mono), Q> = BTreeMap::new();
            for ((al, be), c) in &level {
                for i in 0..nb {
                    for j in 0..nb {
                        let l = self.model.lambda(i, j);
                        if l.is_zero() {
                            continue;
                        }
                        let key = (al.with(i, al.get(i) + 1), be.with(j, be.get(j) + 1));
                        *next.entry(key).or_insert_with(Q::zero) += c * l;
                    }
                }
            }
            next.retain(|_, v| !v.is_zero());
            if next.is_empty() {
                break;
            }
            level = next;
        }
        out
    }

    /// `Σ_r (iλ/2)^r / r! Λ^{i₁j₁}⋯Λ^{i_r j_r} inner(∂_I f, ∂_J g)` over the base.
    fn base_expansion(
        &self,
        f: &Observable,
        g: &Observable,
        inner: &dyn Fn(&Observable, &Observable) -> Observable,
    ) -> Observable {
        let k = f.order().min(g.order());
        let mut out = self.model.zero().with_order(k);
        let mut fcache: HashMap<Mono, Observable> = HashMap::new();
        let mut gcache: HashMap<Mono, Observable> = HashMap::new();
        for (r, al, be, c) in self.moyal_pairs(k) {
            let fa = fcache.entry(al).or_insert_with(|| diff_multi(f, &al)).clone();
            if fa.is_zero() {
                continue;
            }
            let gb = gcache.entry(be).or_insert_with(|| diff_multi(g, &be)).clone();
            if gb.is_zero() {
                continue;
            }
            let term = inner(&fa.with_order(k - r), &gb.with_order(k - r));
            out.add_assign(&term.with_order(k).shift(r).scale(&c));
        }
        out
    }

    /// Moyal product on the base; other coordinates are parameters.
    pub fn moyal(&self, f: &Observable, g: &Observable) -> Observable {
        self.base_expansion(f, g, &|a, b| a.mul(b))
    }

    /// `⋆ = ⋆_red ⊗ ⋆_G`.
    pub fn star_total(&self, f: &Observable, g: &Observable) -> Observable {
        self.base_expansion(f, g, &|a, b| self.star_g(a, b))
    }

    pub fn star(&self, kind: StarKind, f: &Observable, g: &Observable) -> Observable {
        match kind {
            StarKind::Moyal => self.moyal(f, g),
            StarKind::Std => self.star_std(f, g),
            StarKind::WeylG => self.star_g(f, g),
            StarKind::Total => self.star_total(f, g),
        }
    }

    /// Schrödinger representation `ϱ(f)ψ = stdrep(Nf)ψ`.
    pub fn schroedinger_rep(&self, f: &Observable, psi: &Observable) -> Result<Observable> {
        self.require_group()?;
        Ok(self.stdrep_apply(&self.neumaier_n(f), psi))
    }

    /// Checks `J_a ⋆ f - f ⋆ J_a = -iλ L_{(e_a)_M} f` for each basis vector and sample.
    pub fn check_strong_invariance(&self, kind: StarKind, samples: &[Observable]) -> InvarianceReport {
        let mut rep = InvarianceReport::default();
        let minus_i = C::new(Q::zero(), q(-1));
        for a in 0..self.model.dim() {
            let j = self.model.j(a);
            for (s, f) in samples.iter().enumerate() {
                let lhs = self.star(kind, &j, f).sub(&self.star(kind, f, &j));
                let rhs = self.model.lie_m(a, f).shift(1).scale(&minus_i);
                rep.checked += 1;
                let diff = lhs.sub(&rhs);
                if let Some(r) = diff.valuation() {
                    rep.failures.push((a, s, r));
                }
            }
        }
        rep
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebraData;
    use crate::scalar::qf;

    fn line(k: usize) -> (ModelSpace, Quantizer) {
        let m = ModelSpace::plane(LieAlgebraData::abelian(1), k);
        let qz = Quantizer::new(&m);
        (m, qz)
    }
    fn lam(m: &ModelSpace, re: i64, im: i64, d: i64) -> Observable {
        m.lambda_term(C::new(qf(re, d), qf(im, d)), 1)
    }

    #[test]
    fn moyal_canonical_pair() {
        let (m, qz) = line(3);
        let (q_, p_) = (m.var(0), m.var(1));
        let qp = q_.mul(&p_);
        assert_eq!(qz.moyal(&q_, &p_), qp.add(&lam(&m, 0, 1, 2)));
        assert_eq!(qz.moyal(&p_, &q_), qp.sub(&lam(&m, 0, 1, 2)));
        assert_eq!(qz.moyal(&m.one(), &qp), qp);
    }

    #[test]
    fn standard_ordering_on_the_line() {
        let (m, qz) = line(3);
        let g = m.var(m.grp(0));
        let p = m.p(0);
        let gp = g.mul(&p);
        assert_eq!(qz.star_std(&p, &g), gp.add(&lam(&m, 0, -1, 1)));
        assert_eq!(qz.star_std(&g, &p), gp);
        assert_eq!(qz.star_std(&p, &p), p.mul(&p));
        assert_eq!(qz.star_g(&p, &g), gp.add(&lam(&m, 0, -1, 2)));
        assert_eq!(qz.neumaier_n(&gp), gp.add(&lam(&m, 0, -1, 2)));
        assert_eq!(qz.neumaier_n(&p.mul(&p)), p.mul(&p));
    }

    #[test]
    fn stdrep_and_schroedinger() {
        let (m, qz) = line(2);
        let g = m.var(m.grp(0));
        let psi = g.mul(&g).mul(&m.var(0));
        let d = qz.stdrep(&m.p(0)).unwrap();
        assert_eq!(d.apply(&psi), psi.diff(m.grp(0)).shift(1).scale(&C::new(q(0), q(-1))));
        assert_eq!(qz.schroedinger_rep(&m.one(), &psi).unwrap(), psi);
        let x = m.var(0);
        assert_eq!(qz.schroedinger_rep(&x, &psi).unwrap(), x.mul(&psi));
    }

    #[test]
    fn heisenberg_covariance() {
        let m = ModelSpace::new(LieAlgebraData::heisenberg(), &[], vec![], 3).unwrap();
        let qz = Quantizer::new(&m);
        let (j1, j2, j3) = (m.j(0), m.j(1), m.j(2));
        let comm = qz.star_g(&j1, &j2).sub(&qz.star_g(&j2, &j1));
        assert_eq!(comm, j3.shift(1).scale(&C::i()));
        for a in 0..3 {
            assert_eq!(qz.neumaier_n(&m.j(a)), m.j(a));
        }
    }

    #[test]
    fn invariance_weyl_versus_std() {
        let (m, qz) = line(3);
        let g = m.var(m.grp(0));
        let samples = vec![g.clone(), g.mul(&g).mul(&m.p(0)), m.constant(C::int(3))];
        assert!(qz.check_strong_invariance(StarKind::WeylG, &samples).passed());
        let std = qz.check_strong_invariance(StarKind::Std, &[g.mul(&m.p(0))]);
        assert!(std.passed(), "std product on the abelian line is also invariant here");
    }
}
