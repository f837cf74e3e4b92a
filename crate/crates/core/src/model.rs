//! The product model `M = M_red × T*G` with constraint surface `C = M_red × G`.
//!
//! Coordinates: base `x_i` with constant Poisson tensor `Λ^ij`; left-trivialized momenta
//! `P_a` (the momentum map is `J_a = -P_a`); exponential group coordinates `g_a`
//! (only for nilpotency class ≤ 2), plus two auxiliary copies `h_a`, `s_a` used for
//! integral kernels on `C ×_{M_red} C`.

use num_traits::Zero;

use crate::diffop::DiffOperator;
use crate::error::{Error, Result};
use crate::gauss::{integrate_block, DensityWeight, PiObservable};
use crate::lie::LieAlgebraData;
use crate::poly::{r64_to_q, Mono, Poly, MAX_VARS};
use crate::scalar::{q, qf, C, Q};
use crate::series::{Observable, Series};

#[derive(Clone, Debug)]
pub struct ModelSpace {
    pub lie: LieAlgebraData,
    lambda: Vec<Vec<Q>>,
    names: Vec<String>,
    nb: usize,
    k: usize,
    group: bool,
}

impl ModelSpace {
    pub fn new(lie: LieAlgebraData, base_names: &[&str], lambda: Vec<Vec<Q>>, k: usize) -> Result<Self> {
        let nb = base_names.len();
        if lambda.len() != nb || lambda.iter().any(|r| r.len() != nb) {
            return Err(Error::Config(format!("Poisson matrix must be {nb}×{nb}")));
        }
        for i in 0..nb {
            for j in 0..nb {
                if lambda[i][j] != -lambda[j][i].clone() {
                    return Err(Error::PoissonMatrix(i + 1, j + 1));
                }
            }
        }
        let n = lie.dim();
        let group = lie.has_group_coordinates();
        let total = nb + n + if group { 3 * n } else { 0 };
        if total > MAX_VARS {
            return Err(Error::Config(format!("{total} coordinates exceed the limit {MAX_VARS}")));
        }
        let mut names: Vec<String> = base_names.iter().map(|s| s.to_string()).collect();
        names.extend((1..=n).map(|a| format!("P{a}")));
        if group {
            for pre in ["g", "h", "s"] {
                names.extend((1..=n).map(|a| format!("{pre}{a}")));
            }
        }
        Ok(ModelSpace { lie, lambda, names, nb, k, group })
    }

    /// Base ℝ² with coordinates `q, p` and `{q, p} = 1`.
    pub fn plane(lie: LieAlgebraData, k: usize) -> Self {
        let l = vec![vec![q(0), q(1)], vec![q(-1), q(0)]];
        ModelSpace::new(lie, &["q", "p"], l, k).unwrap()
    }

    pub fn order(&self) -> usize {
        self.k
    }
    pub fn with_order(&self, k: usize) -> Self {
        ModelSpace { k, ..self.clone() }
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn dim(&self) -> usize {
        self.lie.dim()
    }
    pub fn base_dim(&self) -> usize {
        self.nb
    }
    pub fn has_group(&self) -> bool {
        self.group
    }
    pub fn lambda(&self, i: usize, j: usize) -> &Q {
        &self.lambda[i][j]
    }
    pub fn base(&self, i: usize) -> usize {
        i
    }
    pub fn mom(&self, a: usize) -> usize {
        self.nb + a
    }
    pub fn grp(&self, a: usize) -> usize {
        assert!(self.group, "no group coordinates in a Lie-algebra-level model");
        self.nb + self.dim() + a
    }
    pub fn grp2(&self, a: usize) -> usize {
        self.grp(a) + self.dim()
    }
    pub fn grp3(&self, a: usize) -> usize {
        self.grp(a) + 2 * self.dim()
    }
    pub fn base_vars(&self) -> Vec<usize> {
        (0..self.nb).collect()
    }
    pub fn mom_vars(&self) -> Vec<usize> {
        (0..self.dim()).map(|a| self.mom(a)).collect()
    }
    pub fn grp_vars(&self) -> Vec<usize> {
        if self.group {
            (0..self.dim()).map(|a| self.grp(a)).collect()
        } else {
            Vec::new()
        }
    }
    pub fn grp2_vars(&self) -> Vec<usize> {
        (0..self.dim()).map(|a| self.grp2(a)).collect()
    }
    pub fn grp3_vars(&self) -> Vec<usize> {
        (0..self.dim()).map(|a| self.grp3(a)).collect()
    }
    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownCoordinate(name.to_string()))
    }

    pub fn zero(&self) -> Observable {
        Series::zero(self.k)
    }
    pub fn one(&self) -> Observable {
        Series::one(self.k)
    }
    pub fn constant(&self, c: C) -> Observable {
        Series::constant(Poly::constant(c), self.k)
    }
    pub fn poly(&self, p: Poly) -> Observable {
        Series::constant(p, self.k)
    }
    pub fn var(&self, v: usize) -> Observable {
        self.poly(Poly::var(v))
    }
    /// Left-trivialized momentum `P_a`.
    pub fn p(&self, a: usize) -> Observable {
        self.var(self.mom(a))
    }
    /// Momentum map component `J_a = -P_a`.
    pub fn j(&self, a: usize) -> Observable {
        self.p(a).neg()
    }
    /// `J_ξ = Σ ξ^a J_a`.
    pub fn j_of(&self, xi: &[Q]) -> Observable {
        let mut out = self.zero();
        for (a, x) in xi.iter().enumerate() {
            if !x.is_zero() {
                out = out.add(&self.j(a).scale(&C::real(x.clone())));
            }
        }
        out
    }
    /// `c · λ^r` as an observable.
    pub fn lambda_term(&self, c: C, r: usize) -> Observable {
        Series::monomial(Poly::constant(c), r, self.k)
    }

    /// Left-invariant field `X_a = ∂_{g_a} + ½ Σ_{b,c} C_ba^c g_b ∂_{g_c}` applied to `f`.
    pub fn x_apply(&self, a: usize, f: &Observable) -> Observable {
        if !self.group {
            return self.zero().with_order(f.order());
        }
        let mut out = f.diff(self.grp(a));
        let n = self.dim();
        for b in 0..n {
            for c in 0..n {
                let s = self.lie.c(b, a, c);
                if s.is_zero() {
                    continue;
                }
                let d = f.diff(self.grp(c));
                if d.is_zero() {
                    continue;
                }
                let coef = C::real(s * qf(1, 2));
                out = out.add(&d.map_poly(|p| p.mul_var(self.grp(b)).scale(&coef)));
            }
        }
        out
    }

    /// `X_a` as a differential operator.
    pub fn x_field(&self, a: usize) -> DiffOperator {
        let k = self.k;
        let mut d = DiffOperator::partial(self.grp(a), k);
        let n = self.dim();
        for b in 0..n {
            for c in 0..n {
                let s = self.lie.c(b, a, c);
                if !s.is_zero() {
                    let coef = Poly::var(self.grp(b)).scale(&C::real(s * qf(1, 2)));
                    d.add_term(Mono::var(self.grp(c)), Series::constant(coef, k));
                }
            }
        }
        d
    }

    /// Coadjoint part of `ξ_M`: `Σ ξ^a C_ba^c P_c ∂/∂P_b`.
    pub fn coadjoint_field(&self, xi: &[Q]) -> DiffOperator {
        let k = self.k;
        let n = self.dim();
        let mut d = DiffOperator::zero(k);
        for (a, x) in xi.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for b in 0..n {
                for c in 0..n {
                    let s = self.lie.c(b, a, c);
                    if !s.is_zero() {
                        let coef = Poly::var(self.mom(c)).scale(&C::real(s * x));
                        d.add_term(Mono::var(self.mom(b)), Series::constant(coef, k));
                    }
                }
            }
        }
        d
    }

    /// The fundamental vector field `ξ_M = {·, J_ξ} = -X_ξ + (coadjoint part)`.
    pub fn fundamental_vector_field(&self, xi: &[Q]) -> Result<DiffOperator> {
        if !self.group {
            return Err(Error::UnsupportedClass(format!(
                "{} has no exact group coordinates",
                self.lie.label
            )));
        }
        let mut d = self.coadjoint_field(xi);
        for (a, x) in xi.iter().enumerate() {
            if !x.is_zero() {
                d = d.sub(&self.x_field(a).scale(&C::real(x.clone())));
            }
        }
        Ok(d)
    }

    /// `L_{(e_a)_M} f`; in Lie-algebra-level models only the coadjoint part acts.
    pub fn lie_m(&self, a: usize, f: &Observable) -> Observable {
        let n = self.dim();
        let mut out = self.x_apply(a, f).neg();
        for b in 0..n {
            for c in 0..n {
                let s = self.lie.c(b, a, c);
                if s.is_zero() {
                    continue;
                }
                let d = f.diff(self.mom(b));
                if !d.is_zero() {
                    let coef = C::real(s.clone());
                    out = out.add(&d.map_poly(|p| p.mul_var(self.mom(c)).scale(&coef)));
                }
            }
        }
        out
    }

    /// `L_{(e_a)_C} φ = -X_a φ` on functions on `C`.
    pub fn lie_c(&self, a: usize, f: &Observable) -> Observable {
        self.x_apply(a, f).neg()
    }

    /// Poisson bracket on `M`: `Λ^ij ∂_i f ∂_j g` on the base plus the canonical
    /// cotangent bracket in the left trivialization.
    pub fn poisson_bracket(&self, f: &Observable, g: &Observable) -> Observable {
        let mut out = self.zero().with_order(f.order());
        for i in 0..self.nb {
            let fi = f.diff(i);
            if fi.is_zero() {
                continue;
            }
            for j in 0..self.nb {
                let l = &self.lambda[i][j];
                if l.is_zero() {
                    continue;
                }
                out = out.add(&fi.mul(&g.diff(j)).scale(&C::real(l.clone())));
            }
        }
        let n = self.dim();
        let fp: Vec<Observable> = (0..n).map(|a| f.diff(self.mom(a))).collect();
        let gp: Vec<Observable> = (0..n).map(|a| g.diff(self.mom(a))).collect();
        if self.group {
            for a in 0..n {
                out = out.add(&self.x_apply(a, f).mul(&gp[a]));
                out = out.sub(&fp[a].mul(&self.x_apply(a, g)));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let s = self.lie.c(a, b, c);
                    if s.is_zero() || fp[a].is_zero() || gp[b].is_zero() {
                        continue;
                    }
                    let t = fp[a].mul(&gp[b]).mul(&self.p(c)).scale(&C::real(-s.clone()));
                    out = out.add(&t);
                }
            }
        }
        out
    }

    /// Restriction `ι*` to the constraint surface `J = 0`.
    pub fn restrict(&self, f: &Observable) -> Observable {
        let m = self.mom_vars();
        f.map_poly(|p| p.restrict_zero(&m))
    }
    pub fn depends_on_momenta(&self, f: &Observable) -> bool {
        self.mom_vars().iter().any(|&v| f.depends_on(v))
    }
    /// Prolongation: a momentum-independent function on `C` viewed on `M`.
    pub fn prolong(&self, phi: &Observable) -> Result<Observable> {
        if self.depends_on_momenta(phi) {
            return Err(Error::MomentumDependence);
        }
        Ok(phi.clone())
    }
    pub fn is_base_only(&self, f: &Observable) -> bool {
        (self.nb..self.names.len()).all(|v| !f.depends_on(v))
    }

    /// `{f, J_a}` lies in the ideal generated by the momenta for every `a`.
    pub fn classical_bc_member(&self, f: &Observable) -> bool {
        (0..self.dim()).all(|a| self.restrict(&self.poisson_bracket(f, &self.j(a))).is_zero())
    }
    /// `ι*{prol u, prol v}` for base functions.
    pub fn classical_reduced_bracket(&self, u: &Observable, v: &Observable) -> Observable {
        self.restrict(&self.poisson_bracket(u, v))
    }

    /// Lift a base density to `C` as `Ω ⊠ dg` (Haar = Lebesgue in exponential coordinates).
    pub fn lift_density(&self, omega: &DensityWeight) -> Result<DensityWeight> {
        if !self.group {
            return Err(Error::UnsupportedClass(format!("{} is not nilpotent of class ≤ 2", self.lie.label)));
        }
        omega.validate()?;
        let base_only = omega.profile.entries().all(|(v, _)| v < self.nb)
            && omega.prefactor.coeffs().iter().all(|p| (self.nb..MAX_VARS).all(|v| !p.depends_on(v)));
        if !base_only {
            return Err(Error::UnsupportedWeight("base density depends on fiber coordinates".into()));
        }
        Ok(omega.clone())
    }

    /// Integrate over the group coordinates.
    pub fn fiber_integral(&self, phi: &Observable) -> Result<PiObservable> {
        integrate_block(phi, &self.grp_vars())
    }

    /// `Δ_Ω(u) = X_u(log w) = {log w, u}` for `w = c·exp(-Σ a_v x_v²)`.
    pub fn modular_vector_field(&self, omega: &DensityWeight) -> Result<DiffOperator> {
        omega
            .leading_constant()
            .ok_or_else(|| Error::UnsupportedWeight("non-constant leading prefactor".into()))?;
        let k = self.k;
        let mut d = DiffOperator::zero(k);
        for i in 0..self.nb {
            let a = omega.profile.get(i);
            if a.is_zero() {
                continue;
            }
            // ∂_i log w = -2 a_i x_i
            let dlog = Poly::var(i).scale(&C::real(-r64_to_q(a) * q(2)));
            for j in 0..self.nb {
                let l = &self.lambda[i][j];
                if !l.is_zero() {
                    d.add_term(Mono::var(j), Series::constant(dlog.scale(&C::real(l.clone())), k));
                }
            }
        }
        Ok(d)
    }
}
