//! Normal ordering in an enveloping-type algebra with generators `Z_1..Z_N` and
//! relations `[Z_a, Z_b] = s · C_ab^c Z_c` for a scalar series `s`.
//! Elements are kept in PBW order `Z_1^{m_1} ⋯ Z_N^{m_N}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_traits::Zero;

use crate::lie::LieAlgebraData;
use crate::poly::Mono;
use crate::scalar::{q, C};
use crate::series::{Scalar, Series};

/// Normal-ordered element: PBW exponent (first N slots) → scalar series.
pub type PbwElem = BTreeMap<Mono, Scalar>;

pub struct Pbw {
    lie: LieAlgebraData,
    s: Scalar,
    k: usize,
    gen_memo: Mutex<HashMap<(usize, Mono), PbwElem>>,
    sym_memo: Mutex<HashMap<Mono, PbwElem>>,
}

pub fn add_into(e: &mut PbwElem, m: Mono, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    let entry = e.entry(m).or_insert_with(|| Series::zero(c.order()));
    entry.add_assign(c);
    if entry.is_zero() {
        e.remove(&m);
    }
}

impl Pbw {
    pub fn new(lie: &LieAlgebraData, s: Scalar) -> Self {
        let k = s.order();
        Pbw {
            lie: lie.clone(),
            s,
            k,
            gen_memo: Mutex::new(HashMap::new()),
            sym_memo: Mutex::new(HashMap::new()),
        }
    }
    pub fn dim(&self) -> usize {
        self.lie.dim()
    }
    pub fn order(&self) -> usize {
        self.k
    }

    /// Normal form of `Z_a · Z^m`.
    pub fn gen_times(&self, a: usize, m: &Mono) -> PbwElem {
        if let Some(r) = self.gen_memo.lock().unwrap().get(&(a, *m)) {
            return r.clone();
        }
        let n = self.dim();
        let one = Series::one(self.k);
        let mut out = PbwElem::new();
        match (0..n).find(|&b| m.get(b) > 0) {
            Some(b) if a > b => {
                let rest = m.with(b, m.get(b) - 1);
                // Z_a Z_b = Z_b Z_a + s C_ab^c Z_c
                for (mono, coef) in self.gen_times(a, &rest) {
                    for (mono2, c2) in self.gen_times(b, &mono) {
                        add_into(&mut out, mono2, &coef.mul(&c2));
                    }
                }
                for c in 0..n {
                    let v = self.lie.c(a, b, c);
                    if v.is_zero() {
                        continue;
                    }
                    let f = self.s.scale(&C::real(v.clone()));
                    for (mono2, c2) in self.gen_times(c, &rest) {
                        add_into(&mut out, mono2, &f.mul(&c2));
                    }
                }
            }
            _ => {
                out.insert(m.with(a, m.get(a) + 1), one);
            }
        }
        self.gen_memo.lock().unwrap().insert((a, *m), out.clone());
        out
    }

    /// `Z_a · x`.
    pub fn left_mul_gen(&self, a: usize, x: &PbwElem) -> PbwElem {
        let mut out = PbwElem::new();
        for (m, c) in x {
            for (m2, c2) in self.gen_times(a, m) {
                add_into(&mut out, m2, &c.mul(&c2));
            }
        }
        out
    }

    /// `x · y`.
    pub fn mul(&self, x: &PbwElem, y: &PbwElem) -> PbwElem {
        let mut out = PbwElem::new();
        for (m, c) in x {
            let mut w = y.clone();
            for a in (0..self.dim()).rev() {
                for _ in 0..m.get(a) {
                    w = self.left_mul_gen(a, &w);
                }
            }
            for (m2, c2) in w {
                add_into(&mut out, m2, &c.mul(&c2));
            }
        }
        out
    }

    /// Symmetrized monomial `(1/r!) Σ_σ Z_{σ(1)} ⋯ Z_{σ(r)}` over the multiset `m`.
    pub fn sym(&self, m: &Mono) -> PbwElem {
        if let Some(r) = self.sym_memo.lock().unwrap().get(m) {
            return r.clone();
        }
        let r = m.degree();
        let out = if r == 0 {
            let mut e = PbwElem::new();
            e.insert(Mono::one(), Series::one(self.k));
            e
        } else {
            // Sym(m) = (1/r) Σ_a m_a Z_a Sym(m - e_a)
            let mut e = PbwElem::new();
            for a in 0..self.dim() {
                let ma = m.get(a);
                if ma == 0 {
                    continue;
                }
                let sub = self.sym(&m.with(a, ma - 1));
                let f = C::real(q(ma as i64) / q(r as i64));
                for (m2, c2) in self.left_mul_gen(a, &sub) {
                    add_into(&mut e, m2, &c2.scale(&f));
                }
            }
            e
        };
        self.sym_memo.lock().unwrap().insert(*m, out.clone());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heis() -> Pbw {
        Pbw::new(&LieAlgebraData::heisenberg(), Series::one(3))
    }

    #[test]
    fn reorder_with_commutator() {
        let p = heis();
        // Z_2 Z_1 = Z_1 Z_2 - Z_3   since [Z_2, Z_1] = -Z_3
        let r = p.gen_times(1, &Mono::var(0));
        assert_eq!(r.len(), 2);
        assert_eq!(r[&Mono::from_pairs(&[(0, 1), (1, 1)])], Series::one(3));
        assert_eq!(r[&Mono::var(2)], Series::one(3).neg());
    }

    #[test]
    fn symmetrization_of_pair() {
        let p = heis();
        // Sym(Z_1 Z_2) = Z_1 Z_2 - ½ Z_3
        let s = p.sym(&Mono::from_pairs(&[(0, 1), (1, 1)]));
        assert_eq!(s[&Mono::var(2)], Series::one(3).scale(&C::frac(-1, 2)));
    }

    #[test]
    fn associativity() {
        let p = Pbw::new(&LieAlgebraData::aff1(), Series::one(4));
        let x = p.sym(&Mono::from_pairs(&[(0, 2), (1, 1)]));
        let y = p.sym(&Mono::from_pairs(&[(1, 2)]));
        let z = p.sym(&Mono::from_pairs(&[(0, 1), (1, 1)]));
        assert_eq!(p.mul(&p.mul(&x, &y), &z), p.mul(&x, &p.mul(&y, &z)));
    }
}
