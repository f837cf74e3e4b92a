//! Deformed vertical differential operators `D = Σ_I D^I ⋆_red e_I` on fiber states,
//! their composition and adjoints, and the comparison operator between two
//! inner-product deformations.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gauss::PiObservable;
use crate::linalg;
use crate::model::ModelSpace;
use crate::morita::FiberState;
use crate::pbw::{Pbw, PbwElem};
use crate::poly::{Key, Mono, Poly};
use crate::scalar::{q, qf, Q, C};
use crate::series::{Observable, Series};
use crate::star::Quantizer;

/// `Σ_I D^I ⋆_red e_I`, with `e_I = L_1^{i_1} ⋯ L_N^{i_N}` and `L_a = L_{(e_a)_C}`.
#[derive(Clone, Debug, PartialEq)]
pub struct VerticalOp {
    terms: BTreeMap<Mono, Observable>,
    k: usize,
}

impl VerticalOp {
    pub fn zero(k: usize) -> Self {
        VerticalOp { terms: BTreeMap::new(), k }
    }
    pub fn identity(k: usize) -> Self {
        VerticalOp::coefficient(&Series::one(k))
    }
    /// Left `⋆_red`-multiplication by a base function.
    pub fn coefficient(u: &Observable) -> Self {
        let mut d = VerticalOp::zero(u.order());
        d.add_term(Mono::one(), u.clone());
        d
    }
    /// `L_a`.
    pub fn generator(a: usize, k: usize) -> Self {
        let mut d = VerticalOp::zero(k);
        d.add_term(Mono::var(a), Series::one(k));
        d
    }
    pub fn order(&self) -> usize {
        self.k
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Observable)> {
        self.terms.iter()
    }
    pub fn add_term(&mut self, i: Mono, c: Observable) {
        let e = self.terms.entry(i).or_insert_with(|| Series::zero(c.order()));
        e.add_assign(&c);
        if e.is_zero() {
            self.terms.remove(&i);
        }
    }
    pub fn add(&self, o: &VerticalOp) -> VerticalOp {
        let mut d = self.clone();
        for (i, c) in &o.terms {
            d.add_term(*i, c.clone());
        }
        d
    }
    pub fn sub(&self, o: &VerticalOp) -> VerticalOp {
        self.add(&o.scale(&C::int(-1)))
    }
    pub fn scale(&self, c: &C) -> VerticalOp {
        let mut d = VerticalOp::zero(self.k);
        for (i, a) in &self.terms {
            d.add_term(*i, a.scale(c));
        }
        d
    }
    pub fn shift(&self, r: usize) -> VerticalOp {
        let mut d = VerticalOp::zero(self.k);
        for (i, a) in &self.terms {
            d.add_term(*i, a.shift(r));
        }
        d
    }
    /// Part of total λ-order `r`.
    pub fn lambda_part(&self, r: usize) -> VerticalOp {
        let mut d = VerticalOp::zero(self.k);
        for (i, a) in &self.terms {
            d.add_term(*i, Series::constant(a.coeff(r).clone(), self.k).shift(r));
        }
        d
    }
}

/// Vertical calculus on a model with global group coordinates.
pub struct Vertical<'a> {
    qz: &'a Quantizer,
    pbw: Pbw,
}

impl<'a> Vertical<'a> {
    pub fn new(qz: &'a Quantizer) -> Result<Self> {
        let m = qz.model();
        if !m.has_group() {
            return Err(Error::UnsupportedClass(format!("{} has no global group coordinates", m.lie.label)));
        }
        // [L_a, L_b] = -C_ab^c L_c
        let pbw = Pbw::new(&m.lie, Series::constant(C::int(-1), m.order()));
        Ok(Vertical { qz, pbw })
    }
    pub fn model(&self) -> &ModelSpace {
        self.qz.model()
    }

    fn check(&self, d: &VerticalOp) -> Result<()> {
        let m = self.model();
        if d.terms.values().all(|c| m.is_base_only(c)) {
            Ok(())
        } else {
            Err(Error::Config("vertical operator coefficients must be base functions".into()))
        }
    }

    /// `e_I φ`.
    pub fn monomial_apply(&self, i: &Mono, phi: &Observable) -> Observable {
        let m = self.model();
        let mut out = phi.clone();
        for a in (0..m.dim()).rev() {
            for _ in 0..i.get(a) {
                out = m.lie_c(a, &out);
            }
        }
        out
    }

    /// `D •' φ`.
    pub fn act(&self, d: &VerticalOp, phi: &FiberState) -> Result<FiberState> {
        self.check(d)?;
        let mut out = Series::zero(phi.value.order());
        for (i, c) in &d.terms {
            out.add_assign(&self.qz.moyal(c, &self.monomial_apply(i, &phi.value)));
        }
        Ok(FiberState::with_pi_quarter(out, phi.pi_quarter))
    }

    fn from_pbw(&self, e: &PbwElem, coeff: &Observable) -> VerticalOp {
        let mut d = VerticalOp::zero(coeff.order());
        for (i, s) in e {
            d.add_term(*i, coeff.scale_series(s));
        }
        d
    }

    /// `D ⋆' E` with `(D ⋆' E) •' = D •' ∘ E •'`.
    pub fn compose(&self, d: &VerticalOp, e: &VerticalOp) -> VerticalOp {
        let k = d.k;
        let mut out = VerticalOp::zero(k);
        for (i, a) in &d.terms {
            for (j, b) in &e.terms {
                let prod = self.pbw.mul(&single(i, k), &single(j, k));
                out = out.add(&self.from_pbw(&prod, &self.qz.moyal(a, b)));
            }
        }
        out
    }

    /// Adjoint for `⟨φ,ψ⟩_can = ∫_G conj φ ⋆_red ψ dg`, from `L_a* = -Δ_a - L_a`
    /// and `(D^I)* = conj D^I`.
    pub fn adjoint(&self, d: &VerticalOp) -> VerticalOp {
        let m = self.model();
        let k = d.k;
        let mut out = VerticalOp::zero(k);
        for (i, c) in &d.terms {
            let mut e: PbwElem = single(&Mono::one(), k);
            for a in 0..m.dim() {
                for _ in 0..i.get(a) {
                    let mut next = self.pbw.left_mul_gen(a, &e);
                    for v in next.values_mut() {
                        *v = v.neg();
                    }
                    let delta = m.lie.delta(a);
                    if !delta.is_zero() {
                        for (mo, s) in &e {
                            crate::pbw::add_into(&mut next, *mo, &s.scale(&C::real(-delta.clone())));
                        }
                    }
                    e = next;
                }
            }
            out = out.add(&self.from_pbw(&e, &c.conj()));
        }
        out
    }

    /// `√H = Σ_j binom(1/2, j) (H - id)^{⋆' j}` for `H = id + O(λ)`.
    pub fn sqrt(&self, h: &VerticalOp) -> Result<VerticalOp> {
        let k = h.k;
        let x = h.sub(&VerticalOp::identity(k));
        if x.terms.values().any(|c| !c.coeff(0).is_zero()) {
            return Err(Error::NonInvertible("H is not id + O(λ)".into()));
        }
        let mut sum = VerticalOp::identity(k);
        let mut pow = VerticalOp::identity(k);
        let mut binom = Q::one();
        for j in 1..=k {
            binom = binom * (qf(1, 2) - q(j as i64 - 1)) / q(j as i64);
            pow = self.compose(&pow, &x);
            sum = sum.add(&pow.scale(&C::real(binom.clone())));
        }
        Ok(sum)
    }

    /// `⟨φ,ψ⟩_can = ∫_G conj φ ⋆_red ψ dg`.
    pub fn canonical(&self, phi: &FiberState, psi: &FiberState) -> Result<PiObservable> {
        let m = self.model();
        let s = phi.pi_quarter + psi.pi_quarter;
        if s % 2 != 0 {
            return Err(Error::Config("inner product would carry a quarter power of π".into()));
        }
        let v = m.fiber_integral(&self.qz.moyal(&phi.value.conj(), &psi.value))?;
        Ok(PiObservable::new(v.value, v.pi_half_power + s / 2))
    }

    /// `⟨φ, W •' ψ⟩_can`.
    pub fn weighted(&self, w: &VerticalOp, phi: &FiberState, psi: &FiberState) -> Result<PiObservable> {
        self.canonical(phi, &self.act(w, psi)?)
    }

    /// Test states `g^b exp(-Σg²/2)` with `|b| ≤ deg`, in units of `π^(-N/4)`.
    pub fn probe_states(&self, deg: u32) -> Vec<FiberState> {
        let m = self.model();
        let damp = crate::gns::damping(m, &m.grp_vars(), 1, 2);
        crate::involution::monomials(&m.grp_vars(), deg)
            .into_iter()
            .map(|b| FiberState::with_pi_quarter(m.poly(Poly::monomial(b, C::one())).mul(&damp), -(m.dim() as i32)))
            .collect()
    }

    /// Solves `ip2(φ,ψ) = ip1(φ, H •' ψ)` for `H = id + Σ λ^r H_r`, with `H_r` in the span of
    /// base monomials of degree ≤ `base_cap` times `e_I`, `|I| ≤ op_cap`.
    pub fn deformation_comparison_h(
        &self,
        ip1: &dyn Fn(&FiberState, &FiberState) -> Result<PiObservable>,
        ip2: &dyn Fn(&FiberState, &FiberState) -> Result<PiObservable>,
        base_cap: u32,
        op_cap: u32,
    ) -> Result<VerticalOp> {
        let m = self.model();
        let k = m.order();
        let probes = self.probe_states(op_cap + 1);
        let unknowns: Vec<(Mono, Mono)> = crate::involution::monomials(&m.base_vars(), base_cap)
            .into_iter()
            .flat_map(|x| crate::involution::monomials(&(0..m.dim()).collect::<Vec<_>>(), op_cap).into_iter().map(move |i| (x, i)))
            .collect();
        let mut h = VerticalOp::identity(k);
        // columns: classical response of each basis operator
        let mut columns: Vec<BTreeMap<(usize, usize, Key), C>> = Vec::new();
        for (x, i) in &unknowns {
            let op = {
                let mut d = VerticalOp::zero(k);
                d.add_term(*i, m.poly(Poly::monomial(*x, C::one())));
                d
            };
            let mut col = BTreeMap::new();
            for (a, pa) in probes.iter().enumerate() {
                for (b, pb) in probes.iter().enumerate() {
                    let v = ip1(pa, &self.act(&op, pb)?)?;
                    for (key, c) in v.value.coeff(0).terms() {
                        col.insert((a, b, key.clone()), c.clone());
                    }
                }
            }
            columns.push(col);
        }
        for r in 1..=k {
            let mut rhs: BTreeMap<(usize, usize, Key), C> = BTreeMap::new();
            for (a, pa) in probes.iter().enumerate() {
                for (b, pb) in probes.iter().enumerate() {
                    let target = ip2(pa, pb)?;
                    let known = ip1(pa, &self.act(&h, pb)?)?;
                    let diff = target.sub(&known)?;
                    for (key, c) in diff.value.coeff(r).terms() {
                        rhs.insert((a, b, key.clone()), c.clone());
                    }
                }
            }
            let rows: std::collections::BTreeSet<(usize, usize, Key)> =
                columns.iter().flat_map(|c| c.keys().cloned()).chain(rhs.keys().cloned()).collect();
            let mat: Vec<Vec<C>> = rows
                .iter()
                .map(|row| columns.iter().map(|c| c.get(row).cloned().unwrap_or_else(C::zero)).collect())
                .collect();
            let b: Vec<C> = rows.iter().map(|row| rhs.get(row).cloned().unwrap_or_else(C::zero)).collect();
            let sol = linalg::solve(&mat, &b, unknowns.len(), true)?;
            for ((x, i), c) in unknowns.iter().zip(sol) {
                if !c.is_zero() {
                    h.add_term(*i, m.poly(Poly::monomial(*x, c)).shift(r));
                }
            }
        }
        Ok(h)
    }
}

fn single(i: &Mono, k: usize) -> PbwElem {
    let mut e = PbwElem::new();
    e.insert(*i, Series::one(k));
    e
}
