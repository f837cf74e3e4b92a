//! Multivariate polynomials over ℚ(i), optionally multiplied by diagonal Gaussian factors.
//!
//! A term is `c · x^m · exp(-Σ a_v x_v²)`. Pure polynomials have an empty Gaussian
//! profile. The class is closed under sums, products and partial derivatives,
//! and integrals against the Gaussian factor are exact (see [`crate::gauss`]).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use crate::scalar::{q, C, Q};

/// Maximum number of coordinates in one model.
pub const MAX_VARS: usize = 16;

/// Exponent vector over the model's fixed coordinate order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub struct Mono(pub [u8; MAX_VARS]);

impl Mono {
    pub fn one() -> Mono {
        Mono::default()
    }
    pub fn var(v: usize) -> Mono {
        let mut m = Mono::default();
        m.0[v] = 1;
        m
    }
    pub fn from_pairs(pairs: &[(usize, u8)]) -> Mono {
        let mut m = Mono::default();
        for &(v, e) in pairs {
            m.0[v] += e;
        }
        m
    }
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }
    pub fn get(&self, v: usize) -> u8 {
        self.0[v]
    }
    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
    pub fn mul(&self, o: &Mono) -> Mono {
        let mut m = *self;
        for (a, b) in m.0.iter_mut().zip(o.0.iter()) {
            *a = a.checked_add(*b).expect("exponent overflow");
        }
        m
    }
    pub fn with(&self, v: usize, e: u8) -> Mono {
        let mut m = *self;
        m.0[v] = e;
        m
    }
    /// Degree restricted to the given coordinates.
    pub fn degree_in(&self, vars: &[usize]) -> u32 {
        vars.iter().map(|&v| self.0[v] as u32).sum()
    }
    /// True if every exponent is at most the corresponding one in `o`.
    pub fn divides(&self, o: &Mono) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a <= b)
    }
}

impl Ord for Mono {
    /// Degree-reverse-lexicographic order.
    fn cmp(&self, o: &Self) -> Ordering {
        match self.degree().cmp(&o.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for v in (0..MAX_VARS).rev() {
            match self.0[v].cmp(&o.0[v]) {
                Ordering::Equal => continue,
                ord => return ord.reverse(),
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Diagonal Gaussian exponent: the factor `exp(-Σ a_v x_v²)`, stored sorted by coordinate.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug, PartialOrd, Ord)]
pub struct Profile(Vec<(u8, Rational64)>);

impl Profile {
    pub fn none() -> Profile {
        Profile(Vec::new())
    }
    pub fn new(pairs: &[(usize, Rational64)]) -> Profile {
        let mut p = Profile::none();
        for (v, a) in pairs {
            p = p.add(&Profile(vec![(*v as u8, *a)]));
        }
        p
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn get(&self, v: usize) -> Rational64 {
        self.0
            .iter()
            .find(|(w, _)| *w as usize == v)
            .map(|(_, a)| *a)
            .unwrap_or_else(Rational64::zero)
    }
    pub fn entries(&self) -> impl Iterator<Item = (usize, Rational64)> + '_ {
        self.0.iter().map(|(v, a)| (*v as usize, *a))
    }
    pub fn add(&self, o: &Profile) -> Profile {
        if o.0.is_empty() {
            return self.clone();
        }
        if self.0.is_empty() {
            return o.clone();
        }
        let mut out: Vec<(u8, Rational64)> = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < o.0.len() {
            let take = match (self.0.get(i), o.0.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match take {
                Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(o.0[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let s = self.0[i].1 + o.0[j].1;
                    if !s.is_zero() {
                        out.push((self.0[i].0, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Profile(out)
    }
    pub fn neg(&self) -> Profile {
        Profile(self.0.iter().map(|(v, a)| (*v, -*a)).collect())
    }
    pub fn without(&self, v: usize) -> Profile {
        Profile(self.0.iter().filter(|(w, _)| *w as usize != v).cloned().collect())
    }
    pub fn rename(&self, map: &dyn Fn(usize) -> usize) -> Profile {
        let mut p = Profile::none();
        for (v, a) in self.entries() {
            p = p.add(&Profile(vec![(map(v) as u8, a)]));
        }
        p
    }
}

pub fn r64_to_q(r: Rational64) -> Q {
    Q::new((*r.numer()).into(), (*r.denom()).into())
}

/// Term key: Gaussian profile, then monomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Key {
    pub gauss: Profile,
    pub mono: Mono,
}

impl Key {
    pub fn poly(mono: Mono) -> Key {
        Key { gauss: Profile::none(), mono }
    }
    fn mul(&self, o: &Key) -> Key {
        Key { gauss: self.gauss.add(&o.gauss), mono: self.mono.mul(&o.mono) }
    }
}

/// Finite sum of terms `c · x^m · exp(-Σ a_v x_v²)` with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Poly {
    terms: BTreeMap<Key, C>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }
    pub fn one() -> Poly {
        Poly::constant(C::one())
    }
    pub fn constant(c: C) -> Poly {
        Poly::term(Key::poly(Mono::one()), c)
    }
    pub fn var(v: usize) -> Poly {
        Poly::term(Key::poly(Mono::var(v)), C::one())
    }
    pub fn monomial(m: Mono, c: C) -> Poly {
        Poly::term(Key::poly(m), c)
    }
    pub fn gaussian(profile: Profile) -> Poly {
        Poly::term(Key { gauss: profile, mono: Mono::one() }, C::one())
    }
    pub fn term(k: Key, c: C) -> Poly {
        let mut p = Poly::zero();
        p.add_term(k, c);
        p
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Key, &C)> {
        self.terms.iter()
    }
    pub fn into_terms(self) -> impl Iterator<Item = (Key, C)> {
        self.terms.into_iter()
    }
    pub fn from_terms(it: impl IntoIterator<Item = (Key, C)>) -> Poly {
        let mut p = Poly::zero();
        for (k, c) in it {
            p.add_term(k, c);
        }
        p
    }

    pub fn add_term(&mut self, k: Key, c: C) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(k) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign(&mut self, o: &Poly) {
        for (k, c) in &o.terms {
            self.add_term(k.clone(), c.clone());
        }
    }
    pub fn sub_assign(&mut self, o: &Poly) {
        for (k, c) in &o.terms {
            self.add_term(k.clone(), -c);
        }
    }
    /// `self += c · o`.
    pub fn add_scaled(&mut self, o: &Poly, c: &C) {
        if c.is_zero() {
            return;
        }
        for (k, d) in &o.terms {
            self.add_term(k.clone(), d * c);
        }
    }
    pub fn add(&self, o: &Poly) -> Poly {
        let mut p = self.clone();
        p.add_assign(o);
        p
    }
    pub fn sub(&self, o: &Poly) -> Poly {
        let mut p = self.clone();
        p.sub_assign(o);
        p
    }
    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }
    pub fn scale(&self, c: &C) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(k, d)| (k.clone(), d * c)).collect() }
    }
    pub fn mul(&self, o: &Poly) -> Poly {
        let mut p = Poly::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                p.add_term(k1.mul(k2), c1 * c2);
            }
        }
        p
    }
    pub fn conj(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(k, c)| (k.clone(), c.conj())).collect() }
    }

    /// Partial derivative in coordinate `v`, including the Gaussian factor.
    pub fn diff(&self, v: usize) -> Poly {
        let mut p = Poly::zero();
        for (k, c) in &self.terms {
            let e = k.mono.get(v);
            if e > 0 {
                let m = k.mono.with(v, e - 1);
                p.add_term(Key { gauss: k.gauss.clone(), mono: m }, c.scale(&q(e as i64)));
            }
            let a = k.gauss.get(v);
            if !a.is_zero() {
                let m = k.mono.with(v, e + 1);
                let f = -r64_to_q(a) * q(2);
                p.add_term(Key { gauss: k.gauss.clone(), mono: m }, c.scale(&f));
            }
        }
        p
    }

    pub fn mul_var(&self, v: usize) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    let e = k.mono.get(v);
                    (Key { gauss: k.gauss.clone(), mono: k.mono.with(v, e + 1) }, c.clone())
                })
                .collect(),
        }
    }

    /// Set the given coordinates to zero.
    pub fn restrict_zero(&self, vars: &[usize]) -> Poly {
        let mut p = Poly::zero();
        for (k, c) in &self.terms {
            if vars.iter().all(|&v| k.mono.get(v) == 0) {
                let mut g = k.gauss.clone();
                for &v in vars {
                    g = g.without(v);
                }
                p.add_term(Key { gauss: g, mono: k.mono }, c.clone());
            }
        }
        p
    }

    /// Rename coordinates by `map` (must be injective on the coordinates in use).
    pub fn rename(&self, map: &dyn Fn(usize) -> usize) -> Poly {
        let mut p = Poly::zero();
        for (k, c) in &self.terms {
            let mut m = Mono::one();
            for v in 0..MAX_VARS {
                let e = k.mono.get(v);
                if e > 0 {
                    m.0[map(v)] += e;
                }
            }
            p.add_term(Key { gauss: k.gauss.rename(map), mono: m }, c.clone());
        }
        p
    }

    /// Substitute a rational value for coordinate `v`; fails if `v` carries a Gaussian factor.
    pub fn eval_at(&self, v: usize, x: &Q) -> Option<Poly> {
        let mut p = Poly::zero();
        for (k, c) in &self.terms {
            if !k.gauss.get(v).is_zero() {
                return None;
            }
            let e = k.mono.get(v);
            let mut f = Q::one();
            for _ in 0..e {
                f *= x;
            }
            p.add_term(Key { gauss: k.gauss.clone(), mono: k.mono.with(v, 0) }, c.scale(&f));
        }
        Some(p)
    }

    pub fn depends_on(&self, v: usize) -> bool {
        self.terms.keys().any(|k| k.mono.get(v) > 0 || !k.gauss.get(v).is_zero())
    }
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|k| k.mono.degree()).max().unwrap_or(0)
    }
    pub fn degree_in(&self, vars: &[usize]) -> u32 {
        self.terms.keys().map(|k| k.mono.degree_in(vars)).max().unwrap_or(0)
    }
    pub fn has_gaussian(&self) -> bool {
        self.terms.keys().any(|k| !k.gauss.is_empty())
    }
    /// The constant coefficient if the polynomial is a pure constant.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => {
                let (k, c) = self.terms.iter().next().unwrap();
                (k.gauss.is_empty() && k.mono.is_one()).then(|| c.clone())
            }
            _ => None,
        }
    }
    pub fn coeff(&self, k: &Key) -> C {
        self.terms.get(k).cloned().unwrap_or_default()
    }
    pub fn leading(&self) -> Option<(&Key, &C)> {
        self.terms.iter().next_back()
    }

    /// Split by the exponents in `vars`: returns `exponent part -> coefficient polynomial`.
    pub fn split_by(&self, vars: &[usize]) -> BTreeMap<Mono, Poly> {
        let mut out: BTreeMap<Mono, Poly> = BTreeMap::new();
        for (k, c) in &self.terms {
            let mut outer = Mono::one();
            let mut inner = k.mono;
            for &v in vars {
                outer.0[v] = inner.0[v];
                inner.0[v] = 0;
            }
            out.entry(outer)
                .or_default()
                .add_term(Key { gauss: k.gauss.clone(), mono: inner }, c.clone());
        }
        out
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for v in 0..MAX_VARS {
                let e = k.mono.get(v);
                let n = names.get(v).cloned().unwrap_or_else(|| format!("x{v}"));
                match e {
                    0 => {}
                    1 => factors.push(n),
                    _ => factors.push(format!("{n}^{e}")),
                }
            }
            if !k.gauss.is_empty() {
                let g: Vec<String> = k
                    .gauss
                    .entries()
                    .map(|(v, a)| {
                        let n = names.get(v).cloned().unwrap_or_else(|| format!("x{v}"));
                        if a.is_one() {
                            format!("{n}^2")
                        } else {
                            format!("{a}*{n}^2")
                        }
                    })
                    .collect();
                factors.push(format!("exp(-({}))", g.join("+")));
            }
            let s = if factors.is_empty() {
                format!("{c}")
            } else if c.is_one() {
                factors.join("*")
            } else if (-c).is_one() {
                format!("-{}", factors.join("*"))
            } else {
                format!("{c}*{}", factors.join("*"))
            };
            parts.push(s);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(&[]))
    }
}

/// True if the polynomial is strictly positive on ℝⁿ by a sufficient syntactic test:
/// a positive constant term and every other term an even monomial with positive real coefficient.
pub fn obviously_positive(p: &Poly) -> bool {
    let mut has_const = false;
    for (k, c) in p.terms() {
        if !k.gauss.is_empty() || !c.is_real() || !c.re.is_positive() {
            return false;
        }
        if k.mono.is_one() {
            has_const = true;
        } else if k.mono.0.iter().any(|e| e % 2 == 1) {
            return false;
        }
    }
    has_const
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(0)
    }
    fn y() -> Poly {
        Poly::var(1)
    }

    #[test]
    fn degrevlex_order() {
        let a = Mono::from_pairs(&[(0, 2)]);
        let b = Mono::from_pairs(&[(0, 1), (1, 1)]);
        let c = Mono::from_pairs(&[(1, 2)]);
        assert!(a > b && b > c);
        // lex would put x0^2 x2 first
        let d = Mono::from_pairs(&[(0, 2), (2, 1)]);
        let e = Mono::from_pairs(&[(0, 1), (1, 2)]);
        assert!(e > d);
        assert!(Mono::var(0) > Mono::one());
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let p = x().add(&y());
        let m = x().sub(&y());
        let prod = p.mul(&m);
        assert_eq!(prod, x().mul(&x()).sub(&y().mul(&y())));
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn derivative_of_gaussian() {
        let g = Poly::gaussian(Profile::new(&[(0, Rational64::one())]));
        let d = g.diff(0);
        let expect = x().mul(&g).scale(&C::int(-2));
        assert_eq!(d, expect);
        // product of Gaussians adds exponents, inverse profile cancels
        let inv = Poly::gaussian(Profile::new(&[(0, -Rational64::one())]));
        assert_eq!(g.mul(&inv), Poly::one());
    }

    #[test]
    fn restriction_and_split() {
        let p = x().mul(&y()).add(&x());
        assert_eq!(p.restrict_zero(&[1]), x());
        let s = p.split_by(&[1]);
        assert_eq!(s.len(), 2);
        assert_eq!(s[&Mono::var(1)], x());
    }

    #[test]
    fn positivity_test() {
        let p = Poly::one().add(&x().mul(&x()));
        assert!(obviously_positive(&p));
        assert!(!obviously_positive(&x()));
    }
}
