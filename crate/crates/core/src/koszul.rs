//! `Λ•g`-valued observables and the classical Koszul complex of the momenta.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::model::ModelSpace;
use crate::poly::{Key, Poly};
use crate::scalar::{q, Q, C};
use crate::series::{Observable, Scalar, Series};

/// Map from basis multivectors `e_I` (bitmask of `I`) to coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperObservable {
    parts: BTreeMap<u32, Observable>,
    k: usize,
}

fn parity_below(mask: u32, a: usize) -> bool {
    (mask & ((1u32 << a) - 1)).count_ones() % 2 == 1
}

/// Sign of `e_I ∧ e_J` relative to `e_{I ∪ J}`, or `None` if they overlap.
fn wedge_sign(i: u32, j: u32) -> Option<bool> {
    if i & j != 0 {
        return None;
    }
    let mut odd = false;
    let mut jj = j;
    while jj != 0 {
        let b = jj.trailing_zeros();
        jj &= jj - 1;
        // elements of I above b must pass over e_b
        odd ^= (i >> (b + 1)).count_ones() % 2 == 1;
    }
    Some(odd)
}

impl SuperObservable {
    pub fn zero(k: usize) -> Self {
        SuperObservable { parts: BTreeMap::new(), k }
    }
    /// Degree-0 element.
    pub fn scalar(f: &Observable) -> Self {
        let mut x = Self::zero(f.order());
        x.add_part(0, f.clone());
        x
    }
    /// `f · e_{i_1} ∧ ⋯ ∧ e_{i_r}` for distinct indices in any order.
    pub fn basis(indices: &[usize], f: &Observable) -> Self {
        let mut x = Self::scalar(f);
        for &a in indices.iter().rev() {
            x = x.wedge_e(a);
        }
        x
    }
    pub fn order(&self) -> usize {
        self.k
    }
    pub fn parts(&self) -> impl Iterator<Item = (&u32, &Observable)> {
        self.parts.iter()
    }
    pub fn component(&self, mask: u32) -> Observable {
        self.parts.get(&mask).cloned().unwrap_or_else(|| Series::zero(self.k))
    }
    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }
    pub fn max_degree(&self) -> Option<u32> {
        self.parts.keys().map(|m| m.count_ones()).max()
    }
    pub fn degree_part(&self, d: u32) -> Self {
        SuperObservable {
            parts: self.parts.iter().filter(|(m, _)| m.count_ones() == d).map(|(m, f)| (*m, f.clone())).collect(),
            k: self.k,
        }
    }
    /// The degree-0 coefficient.
    pub fn scalar_part(&self) -> Observable {
        self.component(0)
    }

    pub fn add_part(&mut self, mask: u32, f: Observable) {
        if f.is_zero() {
            return;
        }
        match self.parts.get_mut(&mask) {
            Some(e) => {
                e.add_assign(&f);
                if e.is_zero() {
                    self.parts.remove(&mask);
                }
            }
            None => {
                self.parts.insert(mask, f);
            }
        }
    }
    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, f) in &o.parts {
            out.add_part(*m, f.clone());
        }
        out
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn neg(&self) -> Self {
        self.map(|f| f.neg())
    }
    pub fn scale(&self, c: &C) -> Self {
        self.map(|f| f.scale(c))
    }
    pub fn scale_series(&self, s: &Scalar) -> Self {
        self.map(|f| f.scale_series(s))
    }
    pub fn shift(&self, r: usize) -> Self {
        self.map(|f| f.shift(r))
    }
    /// Applies `f` to every coefficient.
    pub fn map(&self, f: impl Fn(&Observable) -> Observable) -> Self {
        let mut out = Self::zero(self.k);
        for (m, g) in &self.parts {
            out.add_part(*m, f(g));
        }
        out
    }

    /// Insertion `ins(e^a)`.
    pub fn ins(&self, a: usize) -> Self {
        let bit = 1u32 << a;
        let mut out = Self::zero(self.k);
        for (m, f) in &self.parts {
            if m & bit == 0 {
                continue;
            }
            let g = if parity_below(*m, a) { f.neg() } else { f.clone() };
            out.add_part(m & !bit, g);
        }
        out
    }
    /// Insertion of a constant covector `Σ α_a e^a`.
    pub fn ins_covector(&self, alpha: &[Q]) -> Self {
        let mut out = Self::zero(self.k);
        for (a, c) in alpha.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.ins(a).scale(&C::real(c.clone())));
            }
        }
        out
    }
    /// `e_c ∧ x`.
    pub fn wedge_e(&self, c: usize) -> Self {
        let bit = 1u32 << c;
        let mut out = Self::zero(self.k);
        for (m, f) in &self.parts {
            if m & bit != 0 {
                continue;
            }
            let g = if parity_below(*m, c) { f.neg() } else { f.clone() };
            out.add_part(m | bit, g);
        }
        out
    }
    /// Wedge product with pointwise multiplication of coefficients.
    pub fn wedge(&self, o: &Self) -> Self {
        self.wedge_with(o, &|a, b| a.mul(b))
    }
    /// Wedge product with a supplied coefficient product.
    pub fn wedge_with(&self, o: &Self, mul: &dyn Fn(&Observable, &Observable) -> Observable) -> Self {
        let mut out = Self::zero(self.k);
        for (i, f) in &self.parts {
            for (j, g) in &o.parts {
                if let Some(odd) = wedge_sign(*i, *j) {
                    let h = mul(f, g);
                    out.add_part(i | j, if odd { h.neg() } else { h });
                }
            }
        }
        out
    }
}

/// Koszul differential `∂x = Σ_a J_a ins(e^a) x`.
pub fn koszul(m: &ModelSpace, x: &SuperObservable) -> SuperObservable {
    let mut out = SuperObservable::zero(x.order());
    for a in 0..m.dim() {
        let ja = m.j(a).with_order(x.order());
        out = out.add(&x.ins(a).map(|f| f.mul(&ja)));
    }
    out
}

/// Homotopy `h x = Σ_a e_a ∧ ∫₀¹ t^k ∂x/∂J_a(tJ) dt` applied degreewise,
/// where `k` is the form degree of each component. Coefficients must be
/// polynomial in the momenta.
pub fn homotopy(m: &ModelSpace, x: &SuperObservable) -> SuperObservable {
    let n = m.dim();
    let moms = m.mom_vars();
    let mut out = SuperObservable::zero(x.order());
    for (mask, f) in x.parts() {
        let k = mask.count_ones() as i64;
        for a in 0..n {
            let bit = 1u32 << a;
            if mask & bit != 0 {
                continue;
            }
            let mut coeffs = Vec::with_capacity(x.order() + 1);
            for r in 0..=x.order() {
                let mut acc = Poly::zero();
                for (key, c) in f.coeff(r).terms() {
                    let d: i64 = moms.iter().map(|&v| key.mono.get(v) as i64).sum();
                    let e = key.mono.get(m.mom(a));
                    if e == 0 {
                        continue;
                    }
                    debug_assert!(moms.iter().all(|&v| key.gauss.get(v).is_zero()));
                    // ∂/∂J_a = -∂/∂P_a, then ∫₀¹ t^{k+d-1} dt
                    let scale = C::real(-q(e as i64) / q(k + d));
                    let mono = key.mono.with(m.mom(a), e - 1);
                    acc.add_term(Key { gauss: key.gauss.clone(), mono }, c * &scale);
                }
                coeffs.push(acc);
            }
            let g = Series::from_coeffs(coeffs, x.order());
            let sign = parity_below(*mask, a);
            out.add_part(mask | bit, if sign { g.neg() } else { g });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebraData;
    use crate::random::Sampler;

    fn heis() -> ModelSpace {
        ModelSpace::new(LieAlgebraData::heisenberg(), &["q", "p"], vec![vec![q(0), q(1)], vec![q(-1), q(0)]], 2)
            .unwrap()
    }

    #[test]
    fn koszul_examples() {
        let m = heis();
        let f = m.var(0);
        let x = SuperObservable::basis(&[0], &f);
        assert_eq!(koszul(&m, &x), SuperObservable::scalar(&f.mul(&m.j(0))));
        let y = SuperObservable::basis(&[0, 1], &f);
        let expect = SuperObservable::basis(&[1], &f.mul(&m.j(0))).sub(&SuperObservable::basis(&[0], &f.mul(&m.j(1))));
        assert_eq!(koszul(&m, &y), expect);
        assert!(koszul(&m, &koszul(&m, &y)).is_zero());
    }

    #[test]
    fn homotopy_examples() {
        let m = heis();
        let j1 = m.j(0);
        let h = homotopy(&m, &SuperObservable::scalar(&j1.mul(&j1)));
        assert_eq!(h, SuperObservable::basis(&[0], &j1));
        let phi = m.var(0).mul(&m.var(m.grp(0)));
        assert!(homotopy(&m, &SuperObservable::scalar(&phi)).is_zero());
        let h1 = homotopy(&m, &SuperObservable::scalar(&j1));
        assert_eq!(koszul(&m, &h1), SuperObservable::scalar(&j1));
    }

    #[test]
    fn graded_commutativity_and_insertions() {
        let m = heis();
        let mut s = Sampler::new(3);
        let vars: Vec<usize> = (0..m.names().len()).collect();
        let a = SuperObservable::basis(&[0], &s.observable(&vars, 2, 2, true));
        let b = SuperObservable::basis(&[2], &s.observable(&vars, 2, 2, true));
        assert_eq!(a.wedge(&b), b.wedge(&a).neg());
        let c = SuperObservable::basis(&[1, 2], &m.one());
        for i in 0..3 {
            for j in 0..3 {
                assert!(c.ins(i).ins(j).add(&c.ins(j).ins(i)).is_zero());
            }
        }
    }

    #[test]
    fn contracting_homotopy_identities() {
        let m = heis();
        let mut s = Sampler::new(11);
        let vars: Vec<usize> = (0..m.names().len()).collect();
        for deg in 0..=3usize {
            for _ in 0..3 {
                let mut x = SuperObservable::zero(m.order());
                for mask in 0u32..8 {
                    if mask.count_ones() as usize == deg {
                        x.add_part(mask, s.observable(&vars, 3, 2, true));
                    }
                }
                let lhs = homotopy(&m, &koszul(&m, &x)).add(&koszul(&m, &homotopy(&m, &x)));
                if deg == 0 {
                    let restricted = SuperObservable::scalar(&m.restrict(&x.scalar_part()));
                    assert_eq!(lhs.add(&restricted), x);
                } else {
                    assert_eq!(lhs, x);
                }
            }
        }
    }
}
