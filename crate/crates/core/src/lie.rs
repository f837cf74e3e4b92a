//! Real Lie algebras given by structure constants `[e_a, e_b] = C_ab^c e_c`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::rref;
use crate::scalar::{q, C, Q};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieAlgebraData {
    pub label: String,
    n: usize,
    c: Vec<Q>,
    delta: Vec<Q>,
    class: Option<usize>,
}

impl LieAlgebraData {
    /// Build from entries `(a, b, c, C_ab^c)` with 0-based indices. A missing partner
    /// `(b, a, c)` is filled in as `-C_ab^c`; an explicit inconsistent partner is an error.
    /// Error indices are reported 1-based.
    pub fn new(label: &str, n: usize, entries: &[(usize, usize, usize, Q)]) -> Result<Self> {
        let mut c = vec![Q::zero(); n * n * n];
        let mut set = vec![false; n * n * n];
        let idx = |a: usize, b: usize, k: usize| (a * n + b) * n + k;
        for (a, b, k, v) in entries {
            let (a, b, k) = (*a, *b, *k);
            if a >= n || b >= n || k >= n {
                return Err(Error::Config(format!("structure constant index out of range: ({},{},{})", a + 1, b + 1, k + 1)));
            }
            if a == b && !v.is_zero() {
                return Err(Error::Antisymmetry(a + 1, b + 1, k + 1));
            }
            if set[idx(a, b, k)] && &c[idx(a, b, k)] != v {
                return Err(Error::Antisymmetry(a + 1, b + 1, k + 1));
            }
            c[idx(a, b, k)] = v.clone();
            set[idx(a, b, k)] = true;
        }
        for a in 0..n {
            for b in 0..n {
                for k in 0..n {
                    if set[idx(a, b, k)] && !set[idx(b, a, k)] {
                        c[idx(b, a, k)] = -c[idx(a, b, k)].clone();
                        set[idx(b, a, k)] = true;
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for k in 0..n {
                    if c[idx(a, b, k)] != -c[idx(b, a, k)].clone() {
                        let (x, y) = if a < b { (a, b) } else { (b, a) };
                        return Err(Error::Antisymmetry(x + 1, y + 1, k + 1));
                    }
                }
            }
        }
        let mut lie = LieAlgebraData { label: label.to_string(), n, c, delta: Vec::new(), class: None };
        lie.check_jacobi()?;
        lie.delta = (0..n).map(|a| (0..n).map(|b| lie.c(a, b, b).clone()).sum()).collect();
        lie.class = lie.compute_class();
        Ok(lie)
    }

    pub fn abelian(n: usize) -> Self {
        LieAlgebraData::new(&format!("abelian{n}"), n, &[]).unwrap()
    }
    /// Heisenberg algebra: `[e1, e2] = e3`.
    pub fn heisenberg() -> Self {
        LieAlgebraData::new("heis3", 3, &[(0, 1, 2, q(1))]).unwrap()
    }
    /// Affine algebra of the line: `[e1, e2] = e2`.
    pub fn aff1() -> Self {
        LieAlgebraData::new("aff1", 2, &[(0, 1, 1, q(1))]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn c(&self, a: usize, b: usize, k: usize) -> &Q {
        &self.c[(a * self.n + b) * self.n + k]
    }
    /// Modular covector `Δ_a = C_ab^b`.
    pub fn delta(&self, a: usize) -> &Q {
        &self.delta[a]
    }
    pub fn is_unimodular(&self) -> bool {
        self.delta.iter().all(|d| d.is_zero())
    }
    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(|v| v.is_zero())
    }
    /// Nilpotency class (1 for abelian); `None` if not nilpotent.
    pub fn nilpotency_class(&self) -> Option<usize> {
        self.class
    }
    /// Group coordinates are realized exactly for class ≤ 2.
    pub fn has_group_coordinates(&self) -> bool {
        matches!(self.class, Some(c) if c <= 2)
    }
    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let n = self.n;
        let mut out = vec![Q::zero(); n];
        for a in 0..n {
            for b in 0..n {
                if x[a].is_zero() || y[b].is_zero() {
                    continue;
                }
                for k in 0..n {
                    let v = self.c(a, b, k);
                    if !v.is_zero() {
                        out[k] += &x[a] * &y[b] * v;
                    }
                }
            }
        }
        out
    }
    pub fn basis(&self, a: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.n];
        v[a] = Q::one();
        v
    }

    fn check_jacobi(&self) -> Result<()> {
        let n = self.n;
        for a in 0..n {
            for b in a + 1..n {
                for k in b + 1..n {
                    for e in 0..n {
                        let mut s = Q::zero();
                        for d in 0..n {
                            s += self.c(a, b, d) * self.c(d, k, e)
                                + self.c(b, k, d) * self.c(d, a, e)
                                + self.c(k, a, d) * self.c(d, b, e);
                        }
                        if !s.is_zero() {
                            return Err(Error::Jacobi(a + 1, b + 1, k + 1, e + 1));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn compute_class(&self) -> Option<usize> {
        // lower central series g ⊃ [g,g] ⊃ [g,[g,g]] ⊃ ...
        let mut span: Vec<Vec<Q>> = (0..self.n).map(|a| self.basis(a)).collect();
        for class in 1..=self.n + 1 {
            let mut rows: Vec<Vec<C>> = Vec::new();
            for a in 0..self.n {
                for v in &span {
                    let b = self.bracket(&self.basis(a), v);
                    rows.push(b.into_iter().map(C::real).collect());
                }
            }
            let p = rref(&mut rows, self.n);
            if p.is_empty() {
                return Some(class);
            }
            if p.len() == span.len() {
                return None;
            }
            span = rows[..p.len()].iter().map(|r| r.iter().map(|c| c.re.clone()).collect()).collect();
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_algebras() {
        assert_eq!(LieAlgebraData::abelian(2).nilpotency_class(), Some(1));
        let h = LieAlgebraData::heisenberg();
        assert_eq!(h.nilpotency_class(), Some(2));
        assert!(h.is_unimodular());
        assert_eq!(h.c(1, 0, 2), &q(-1));
        let a = LieAlgebraData::aff1();
        assert_eq!(a.nilpotency_class(), None);
        assert_eq!(a.delta(0), &q(1));
        assert_eq!(a.delta(1), &q(0));
        assert!(!a.has_group_coordinates());
    }

    #[test]
    fn antisymmetry_violation_names_indices() {
        let e = LieAlgebraData::new("bad", 2, &[(0, 1, 0, q(1)), (1, 0, 0, q(1))]);
        assert_eq!(e, Err(Error::Antisymmetry(1, 2, 1)));
    }

    #[test]
    fn jacobi_violation() {
        // [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e1 is not a Lie algebra
        let e = LieAlgebraData::new(
            "bad",
            3,
            &[(0, 1, 2, q(1)), (1, 2, 0, q(1)), (2, 0, 0, q(1))],
        );
        assert!(matches!(e, Err(Error::Jacobi(..))));
    }

    #[test]
    fn so3_is_not_nilpotent() {
        let so3 = LieAlgebraData::new(
            "so3",
            3,
            &[(0, 1, 2, q(1)), (1, 2, 0, q(1)), (2, 0, 1, q(1))],
        )
        .unwrap();
        assert_eq!(so3.nilpotency_class(), None);
        assert!(so3.is_unimodular());
    }
}
