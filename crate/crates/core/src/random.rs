//! Seeded generators for test inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::{Mono, Poly, Profile};
use crate::scalar::C;
use crate::series::{Observable, Series};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coeff(&mut self, complex: bool) -> C {
        loop {
            let re = self.int(-3, 3);
            let im = if complex { self.int(-2, 2) } else { 0 };
            let d = self.int(1, 2);
            if re != 0 || im != 0 {
                return C::new(crate::scalar::qf(re, d), crate::scalar::qf(im, d));
            }
        }
    }

    pub fn mono(&mut self, vars: &[usize], max_deg: u32) -> Mono {
        let deg = self.int(0, max_deg as i64) as u32;
        let mut m = Mono::one();
        for _ in 0..deg {
            if vars.is_empty() {
                break;
            }
            let v = vars[self.rng.gen_range(0..vars.len())];
            m = m.with(v, m.get(v) + 1);
        }
        m
    }

    /// Polynomial in `vars` with up to `terms` terms of degree ≤ `max_deg`.
    pub fn poly(&mut self, vars: &[usize], max_deg: u32, terms: usize, complex: bool) -> Poly {
        let mut p = Poly::zero();
        for _ in 0..terms {
            let m = self.mono(vars, max_deg);
            let c = self.coeff(complex);
            p.add_term(crate::poly::Key::poly(m), c);
        }
        p
    }

    /// Observable with a random classical part and sparser higher orders.
    pub fn observable(&mut self, vars: &[usize], max_deg: u32, k: usize, complex: bool) -> Observable {
        let mut c = Vec::with_capacity(k + 1);
        for r in 0..=k {
            let terms = if r == 0 { 3 } else if self.rng.gen_bool(0.3) { 1 } else { 0 };
            c.push(self.poly(vars, max_deg.saturating_sub(r as u32).max(1), terms, complex));
        }
        Series::from_coeffs(c, k)
    }

    /// Random polynomial times a fixed Gaussian profile.
    pub fn damped(&mut self, vars: &[usize], max_deg: u32, profile: &Profile, k: usize, complex: bool) -> Observable {
        let p = self.poly(vars, max_deg, 3, complex);
        let g = Poly::gaussian(profile.clone());
        Series::from_poly(p.mul(&g), k)
    }
}
