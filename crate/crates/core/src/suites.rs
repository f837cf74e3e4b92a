//! Identity batteries run from a scene. Every check is an exact equality;
//! a failing record carries the lowest λ-order at which the two sides
//! differ and the difference there.
//!
//! Random inputs come from a ChaCha8 stream seeded by the scene seed mixed
//! with a hash of the identity id: coefficients are `(a + b i)/d` with
//! `a ∈ [-3,3]`, `b ∈ [-2,2]`, `d ∈ {1,2}`, three terms at order λ⁰ and a
//! term with probability 0.3 at each higher order, monomial degrees uniform
//! up to the suite's cap.

use std::time::Instant;

use num_rational::Rational64;
use num_traits::Zero;

use crate::crossed::{Crossed, Kernel};
use crate::error::{Error, Result};
use crate::gauss::{DensityWeight, PiObservable};
use crate::gns::{check_conj_transport, damping, pi_equal, Gns, Positivity};
use crate::involution::{
    check_density_ratio, density_ratio_hat, inner_difference, involution_comparison, modular_class, monomials,
    ratio_test_functions, Involution,
};
use crate::koszul::{homotopy, koszul, SuperObservable};
use crate::model::ModelSpace;
use crate::morita::{complete_positivity_sample, FiberState, Morita, RankOne};
use crate::poly::{Poly, Profile};
use crate::random::Sampler;
use crate::reduction::{Reducer, ReductionConfig};
use crate::report::{Record, Report, Status};
use crate::rieffel::{InducedVector, Induction};
use crate::scalar::{q, C, Q};
use crate::scene::Scene;
use crate::series::{Observable, Scalar, Series};
use crate::star::{Quantizer, StarKind};
use crate::vertical::{Vertical, VerticalOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Star,
    Koszul,
    Reduction,
    Involution,
    Gns,
    Kms,
    Morita,
    Crossed,
    Rieffel,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Star,
        Suite::Koszul,
        Suite::Reduction,
        Suite::Involution,
        Suite::Gns,
        Suite::Kms,
        Suite::Morita,
        Suite::Crossed,
        Suite::Rieffel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Star => "star",
            Suite::Koszul => "koszul",
            Suite::Reduction => "reduction",
            Suite::Involution => "involution",
            Suite::Gns => "gns",
            Suite::Kms => "kms",
            Suite::Morita => "morita",
            Suite::Crossed => "crossed",
            Suite::Rieffel => "rieffel",
        }
    }

    /// A suite name, or `all`.
    pub fn parse(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .map(|x| vec![x])
            .ok_or_else(|| Error::Config(format!("unknown suite `{s}`")))
    }

    /// Whether the suite needs exact group coordinates on `G`.
    pub fn needs_group(self) -> bool {
        matches!(self, Suite::Gns | Suite::Morita | Suite::Crossed | Suite::Rieffel)
    }
}

/// Outcome of one identity.
#[derive(Clone, Debug, PartialEq)]
pub enum Check {
    Pass,
    Fail { order: Option<usize>, coefficient: Option<String>, detail: Option<String> },
    Skip(String),
}

impl Check {
    fn fail(detail: impl Into<String>) -> Check {
        Check::Fail { order: None, coefficient: None, detail: Some(detail.into()) }
    }
    fn with_detail(self, d: String) -> Check {
        match self {
            Check::Fail { order, coefficient, detail } => Check::Fail {
                order,
                coefficient,
                detail: Some(match detail {
                    Some(x) => format!("{d}; {x}"),
                    None => d,
                }),
            },
            other => other,
        }
    }
    fn and(self, o: Check) -> Check {
        if self == Check::Pass {
            o
        } else {
            self
        }
    }
}

fn truth(ok: bool, what: &str) -> Check {
    if ok {
        Check::Pass
    } else {
        Check::fail(what)
    }
}

/// Compares two observables exactly.
pub fn eq_obs(names: &[String], lhs: &Observable, rhs: &Observable) -> Check {
    let d = lhs.sub(rhs);
    match d.valuation() {
        None => Check::Pass,
        Some(r) => Check::Fail { order: Some(r), coefficient: Some(d.coeff(r).display(names)), detail: None },
    }
}

/// Compares two values carrying π powers.
pub fn eq_pi(names: &[String], lhs: &PiObservable, rhs: &PiObservable) -> Check {
    if pi_equal(lhs, rhs) {
        return Check::Pass;
    }
    if lhs.pi_half_power == rhs.pi_half_power || lhs.is_zero() || rhs.is_zero() {
        return eq_obs(names, &lhs.value, &rhs.value);
    }
    Check::fail(format!("π powers differ: {} vs {} (halves)", lhs.pi_half_power, rhs.pi_half_power))
}

fn eq_super(names: &[String], lhs: &SuperObservable, rhs: &SuperObservable) -> Check {
    let d = lhs.sub(rhs);
    let mut best: Option<(usize, u32)> = None;
    for (mask, f) in d.parts() {
        if let Some(r) = f.valuation() {
            if best.map_or(true, |(b, _)| r < b) {
                best = Some((r, *mask));
            }
        }
    }
    match best {
        None => Check::Pass,
        Some((r, mask)) => Check::Fail {
            order: Some(r),
            coefficient: Some(d.component(mask).coeff(r).display(names)),
            detail: Some(format!("form component {mask:#b}")),
        },
    }
}

fn eq_state(names: &[String], a: &FiberState, b: &FiberState) -> Check {
    if a.same(b) {
        Check::Pass
    } else if a.pi_quarter == b.pi_quarter || a.is_zero() || b.is_zero() {
        eq_obs(names, &a.value, &b.value)
    } else {
        Check::fail(format!("π quarter powers differ: {} vs {}", a.pi_quarter, b.pi_quarter))
    }
}

fn eq_kernel(names: &[String], a: &Kernel, b: &Kernel) -> Check {
    if a.same(b) {
        Check::Pass
    } else if a.pi_quarter == b.pi_quarter {
        eq_obs(names, &a.value, &b.value)
    } else {
        Check::fail(format!("π quarter powers differ: {} vs {}", a.pi_quarter, b.pi_quarter))
    }
}

fn fnv(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Records for one suite.
struct Battery<'s> {
    scene: &'s Scene,
    names: Vec<String>,
    records: Vec<Record>,
    timings: bool,
}

impl<'s> Battery<'s> {
    fn new(scene: &'s Scene, timings: bool) -> Self {
        Battery { scene, names: scene.model.names().to_vec(), records: Vec::new(), timings }
    }

    fn sampler(&self, id: &str) -> Sampler {
        Sampler::new(self.scene.seed() ^ fnv(id))
    }

    fn push(&mut self, id: &str, anchor: &str, check: Result<Check>, ms: u64) {
        let (status, order, coefficient, detail) = match check {
            Ok(Check::Pass) => (Status::Pass, None, None, None),
            Ok(Check::Fail { order, coefficient, detail }) => (Status::Fail, order, coefficient, detail),
            Ok(Check::Skip(why)) => (Status::Skipped, None, None, Some(format!("skipped: {why}"))),
            Err(Error::UnsupportedClass(why)) => {
                (Status::Skipped, None, None, Some(format!("skipped: out of model class ({why})")))
            }
            Err(e) => (Status::Fail, None, None, Some(format!("error: {e}"))),
        };
        self.records.push(Record {
            id: id.to_string(),
            anchor: anchor.to_string(),
            status,
            detail,
            failing_order: order,
            failing_coefficient: coefficient,
            runtime_ms: self.timings.then_some(ms),
        });
    }

    /// A single deterministic check.
    fn once(&mut self, id: &str, anchor: &str, f: impl FnOnce(&mut Sampler) -> Result<Check>) {
        let mut s = self.sampler(id);
        let t = Instant::now();
        let c = f(&mut s);
        self.push(id, anchor, c, t.elapsed().as_millis() as u64);
    }

    /// `n` random trials; stops at the first failure.
    fn trials(&mut self, id: &str, anchor: &str, n: usize, mut f: impl FnMut(&mut Sampler) -> Result<Check>) {
        let mut s = self.sampler(id);
        let t = Instant::now();
        let mut out = Ok(Check::Pass);
        for i in 0..n {
            match f(&mut s) {
                Ok(Check::Pass) => {}
                Ok(c @ Check::Fail { .. }) => {
                    out = Ok(c.with_detail(format!("trial {} of {n}", i + 1)));
                    break;
                }
                other => {
                    out = other;
                    break;
                }
            }
        }
        self.push(id, anchor, out, t.elapsed().as_millis() as u64);
    }

    fn skip(&mut self, id: &str, anchor: &str, why: &str) {
        self.push(id, anchor, Ok(Check::Skip(why.to_string())), 0);
    }

    fn n(&self) -> usize {
        self.scene.trials()
    }
}

/// Runs one suite on a scene.
pub fn run_suite(scene: &Scene, suite: Suite, timings: bool) -> Vec<Record> {
    let mut b = Battery::new(scene, timings);
    if suite.needs_group() && !scene.model.has_group() {
        b.skip(
            &format!("{}.model_class", suite.name()),
            "requires global group coordinates",
            &format!("out of model class ({} is Lie-algebra level only)", scene.label()),
        );
        return b.records;
    }
    match suite {
        Suite::Star => star_suite(&mut b),
        Suite::Koszul => koszul_suite(&mut b),
        Suite::Reduction => reduction_suite(&mut b),
        Suite::Involution => involution_suite(&mut b),
        Suite::Gns => gns_suite(&mut b),
        Suite::Kms => kms_suite(&mut b),
        Suite::Morita => {
            morita_suite(&mut b);
            vertical_suite(&mut b);
        }
        Suite::Crossed => crossed_suite(&mut b),
        Suite::Rieffel => rieffel_suite(&mut b),
    }
    b.records
}

/// Runs the given suites concurrently and assembles an id-sorted report.
pub fn run_suites(scene: &Scene, suites: &[Suite], timings: bool) -> Report {
    let mut list = suites.to_vec();
    list.sort();
    list.dedup();
    let results: Vec<Vec<Record>> = std::thread::scope(|sc| {
        let handles: Vec<_> = list.iter().map(|&s| sc.spawn(move || run_suite(scene, s, timings))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    let mut rep = Report::new(scene.label(), scene.seed(), scene.model.order());
    rep.extend(results.into_iter().flatten());
    rep
}

fn cat(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

fn classical(s: &mut Sampler, m: &ModelSpace, vars: &[usize], deg: u32) -> Observable {
    Series::from_poly(s.poly(vars, deg, 3, true), m.order())
}

// ---------------------------------------------------------------- star

fn star_suite(b: &mut Battery) {
    let m = b.scene.model.clone();
    let qz = Quantizer::new(&m);
    let deg = b.scene.poly_cap();
    let k = m.order();
    let n = b.n();
    let names = b.names.clone();
    let cot = cat(&m.mom_vars(), &m.grp_vars());
    let all = cat(&m.base_vars(), &cot);
    for kind in [StarKind::Moyal, StarKind::WeylG, StarKind::Std, StarKind::Total] {
        let vars = match kind {
            StarKind::Moyal => m.base_vars(),
            StarKind::WeylG | StarKind::Std => cot.clone(),
            StarKind::Total => all.clone(),
        };
        let tag = kind.name();
        let id = |s: &str| format!("star.{tag}.{s}");
        if vars.is_empty() {
            b.skip(&id("associativity"), "(f⋆g)⋆h = f⋆(g⋆h)", "no coordinates for this product");
            continue;
        }
        let st = |f: &Observable, g: &Observable| qz.star(kind, f, g);
        b.trials(&id("associativity"), "(f⋆g)⋆h = f⋆(g⋆h)", n, |s| {
            let (f, g, h) = (s.observable(&vars, deg, k, true), s.observable(&vars, deg, k, true), s.observable(&vars, deg, k, true));
            Ok(eq_obs(&names, &st(&st(&f, &g), &h), &st(&f, &st(&g, &h))))
        });
        b.trials(&id("unit"), "1⋆f = f = f⋆1", n, |s| {
            let f = s.observable(&vars, deg, k, true);
            Ok(eq_obs(&names, &st(&m.one(), &f), &f).and(eq_obs(&names, &st(&f, &m.one()), &f)))
        });
        b.trials(&id("classical_limit"), "f⋆g = fg + O(λ), f⋆g - g⋆f = iλ{f,g} + O(λ²)", n, |s| {
            let (f, g) = (classical(s, &m, &vars, deg), classical(s, &m, &vars, deg));
            let fg = st(&f, &g);
            let c0 = eq_obs(&names, &Series::constant(fg.coeff(0).clone(), k), &f.mul(&g));
            if k == 0 {
                return Ok(c0);
            }
            let comm = fg.sub(&st(&g, &f));
            let pb = m.poisson_bracket(&f, &g).scale(&C::i());
            let c1 = eq_obs(&names, &Series::constant(comm.coeff(1).clone(), k), &Series::constant(pb.coeff(0).clone(), k));
            Ok(c0.and(c1))
        });
        if kind == StarKind::Std {
            let grp = m.grp_vars();
            b.trials(&id("standard_ordering"), "pr*χ ⋆ f = pr*χ f", n, |s| {
                if grp.is_empty() {
                    return Ok(Check::Skip("no group coordinates".into()));
                }
                let f = s.observable(&vars, deg, k, true);
                let chi = s.observable(&grp, deg, k, true);
                Ok(eq_obs(&names, &st(&chi, &f), &chi.mul(&f)))
            });
        } else {
            b.trials(&id("hermitian"), "conj(f⋆g) = conj g ⋆ conj f", n, |s| {
                let (f, g) = (s.observable(&vars, deg, k, true), s.observable(&vars, deg, k, true));
                Ok(eq_obs(&names, &st(&f, &g).conj(), &st(&g.conj(), &f.conj())))
            });
        }
        if kind != StarKind::Moyal {
            b.once(&id("covariance"), "J_a⋆J_b - J_b⋆J_a = iλ C_ab^c J_c", |_| {
                let mut out = Check::Pass;
                for a in 0..m.dim() {
                    for c in 0..m.dim() {
                        let (ja, jc) = (m.j(a), m.j(c));
                        let lhs = st(&ja, &jc).sub(&st(&jc, &ja));
                        let basis = m.lie.bracket(&m.lie.basis(a), &m.lie.basis(c));
                        let rhs = m.j_of(&basis).shift(1).scale(&C::i());
                        out = out.and(eq_obs(&names, &lhs, &rhs).with_detail(format!("pair ({},{})", a + 1, c + 1)));
                    }
                }
                Ok(out)
            });
        }
        if matches!(kind, StarKind::WeylG | StarKind::Total | StarKind::Std) {
            b.once(&id("strong_invariance"), "J_a⋆f - f⋆J_a = -iλ L_{(e_a)_M} f", |s| {
                let samples: Vec<Observable> = (0..n).map(|_| s.observable(&vars, deg, k, true)).collect();
                let rep = qz.check_strong_invariance(kind, &samples);
                Ok(match rep.failures.first() {
                    None => Check::Pass,
                    Some((a, i, r)) => Check::Fail {
                        order: Some(*r),
                        coefficient: None,
                        detail: Some(format!("basis e{} on sample {}", a + 1, i + 1)),
                    },
                })
            });
        }
    }
}

// ---------------------------------------------------------------- koszul

fn random_form(s: &mut Sampler, m: &ModelSpace, vars: &[usize], deg: u32, form_deg: Option<u32>) -> SuperObservable {
    let mut x = SuperObservable::zero(m.order());
    for mask in 0u32..(1 << m.dim()) {
        if form_deg.map_or(true, |d| mask.count_ones() == d) {
            x.add_part(mask, s.observable(vars, deg, m.order(), true));
        }
    }
    x
}

fn koszul_suite(b: &mut Battery) {
    let m = b.scene.model.clone();
    let deg = b.scene.poly_cap();
    let k = m.order();
    let n = b.n();
    let names = b.names.clone();
    let all = cat(&m.base_vars(), &cat(&m.mom_vars(), &m.grp_vars()));
    let cvars = cat(&m.base_vars(), &m.grp_vars());
    let nd = m.dim() as u32;
    b.trials("koszul.d_squared", "∂∂x = 0", n, |s| {
        let x = random_form(s, &m, &all, deg, None);
        Ok(eq_super(&names, &koszul(&m, &koszul(&m, &x)), &SuperObservable::zero(k)))
    });
    for d in 0..=nd {
        let anchor = if d == 0 { "∂h f + prol ι* f = f" } else { "h∂x + ∂hx = x" };
        b.trials(&format!("koszul.homotopy.degree{d}"), anchor, n, |s| {
            let x = random_form(s, &m, &all, deg, Some(d));
            let mut lhs = homotopy(&m, &koszul(&m, &x)).add(&koszul(&m, &homotopy(&m, &x)));
            if d == 0 {
                lhs = lhs.add(&SuperObservable::scalar(&m.restrict(&x.scalar_part())));
            }
            Ok(eq_super(&names, &lhs, &x))
        });
    }
    b.trials("koszul.h0_prol", "h₀ prol φ = 0", n, |s| {
        let phi = s.observable(&cvars, deg, k, true);
        Ok(eq_super(&names, &homotopy(&m, &SuperObservable::scalar(&m.prolong(&phi)?)), &SuperObservable::zero(k)))
    });
    b.trials("koszul.augmented_exactness", "ι* prol = id; ι*f = 0 ⇒ f = ∂hf; ∂x = 0 ⇒ x = ∂hx", n, |s| {
        let phi = s.observable(&cvars, deg, k, true);
        let mut out = eq_obs(&names, &m.restrict(&m.prolong(&phi)?), &phi);
        let f = s.observable(&all, deg, k, true);
        let g = f.sub(&m.restrict(&f));
        let hg = homotopy(&m, &SuperObservable::scalar(&g));
        out = out.and(eq_obs(&names, &koszul(&m, &hg).scalar_part(), &g));
        for d in 1..nd {
            let y = random_form(s, &m, &all, deg, Some(d + 1));
            let x = koszul(&m, &y);
            out = out.and(eq_super(&names, &koszul(&m, &homotopy(&m, &x)), &x).with_detail(format!("degree {d}")));
        }
        Ok(out)
    });
}

// ---------------------------------------------------------------- reduction

fn kappas(k: usize) -> Vec<(&'static str, Scalar)> {
    let half = Series::constant(C::frac(1, 2), k);
    vec![
        ("k0", Series::zero(k)),
        ("k1_2", half.clone()),
        ("k1_2_plus_lambda", half.add(&Series::monomial(C::one(), 1, k))),
    ]
}

fn reduction_suite(b: &mut Battery) {
    let m = b.scene.model.clone();
    let qz = Quantizer::new(&m);
    let deg = b.scene.poly_cap().min(4);
    let k = m.order();
    let n = b.n();
    let names = b.names.clone();
    let base = m.base_vars();
    let all = cat(&base, &cat(&m.mom_vars(), &m.grp_vars()));
    let cvars = cat(&base, &m.grp_vars());
    for (tag, kappa) in kappas(k) {
        let red = Reducer::new(&qz, ReductionConfig::new(kappa));
        let id = |s: &str| format!("reduction.{tag}.{s}");
        b.trials(&id("d_squared"), "∂^κ∂^κ x = 0", n, |s| {
            let x = random_form(s, &m, &all, deg, None);
            Ok(eq_super(&names, &red.quantized_koszul(&red.quantized_koszul(&x)), &SuperObservable::zero(k)))
        });
        b.trials(&id("left_linearity"), "∂^κ(f⋆x) = f⋆∂^κx", n, |s| {
            let x = random_form(s, &m, &all, deg, None);
            let f = s.observable(&all, deg, k, true);
            let fx = x.map(|c| qz.star_total(&f, c));
            let rhs = red.quantized_koszul(&x).map(|c| qz.star_total(&f, c));
            Ok(eq_super(&names, &red.quantized_koszul(&fx), &rhs))
        });
        b.trials(&id("restriction_kills_image"), "ι*_κ ∂^κ₁ x = 0", n, |s| {
            let x = random_form(s, &m, &all, deg, Some(1));
            Ok(eq_obs(&names, &red.deformed_restriction(&red.quantized_koszul(&x).scalar_part()), &m.zero()))
        });
        b.trials(&id("restriction_prol"), "ι*_κ prol φ = φ", n, |s| {
            let phi = s.observable(&cvars, deg, k, true);
            Ok(eq_obs(&names, &red.deformed_restriction(&m.prolong(&phi)?), &phi))
        });
        b.trials(&id("homotopy0"), "prol ι*_κ f + ∂^κ₁ h^κ₀ f = f", n, |s| {
            let f = s.observable(&all, deg, k, true);
            let h = red.deformed_homotopy(&SuperObservable::scalar(&f));
            Ok(eq_obs(&names, &red.quantized_koszul(&h).scalar_part().add(&red.deformed_restriction(&f)), &f))
        });
        b.trials(&id("momentum_action"), "J_a • φ = -iλ L_{(e_a)_C} φ - iλκ Δ(e_a) φ", n, |s| {
            let phi = s.observable(&cvars, deg, k, true);
            let mut out = Check::Pass;
            for a in 0..m.dim() {
                let lhs = red.left_module(&m.j(a), &phi)?;
                out = out.and(eq_obs(&names, &lhs, &red.momentum_action_expected(a, &phi)).with_detail(format!("a = {}", a + 1)));
            }
            Ok(out)
        });
        b.trials(&id("left_module"), "(f⋆g)•φ = f•(g•φ), 1•φ = φ", n, |s| {
            let (f, g) = (s.observable(&all, deg, k, true), s.observable(&all, deg, k, true));
            let phi = s.observable(&cvars, deg, k, true);
            let lhs = red.left_module(&qz.star_total(&f, &g), &phi)?;
            let rhs = red.left_module(&f, &red.left_module(&g, &phi)?)?;
            Ok(eq_obs(&names, &lhs, &rhs).and(eq_obs(&names, &red.left_module(&m.one(), &phi)?, &phi)))
        });
        if base.is_empty() {
            continue;
        }
        b.trials(&id("right_module"), "(φ•u)•v = φ•(u⋆_red v), φ•1 = φ", n, |s| {
            let phi = s.observable(&cvars, deg, k, true);
            let (u, v) = (s.observable(&base, deg, k, true), s.observable(&base, deg, k, true));
            let lhs = red.right_module(&red.right_module(&phi, &u)?, &v)?;
            let rhs = red.right_module(&phi, &red.reduced_star(&u, &v)?)?;
            Ok(eq_obs(&names, &lhs, &rhs).and(eq_obs(&names, &red.right_module(&phi, &m.one())?, &phi)))
        });
        b.trials(&id("compatibility"), "(f•φ)•_red u = f•(φ•_red u)", n, |s| {
            let f = s.observable(&all, deg, k, true);
            let phi = s.observable(&cvars, deg, k, true);
            let u = s.observable(&base, deg, k, true);
            let lhs = red.right_module(&red.left_module(&f, &phi)?, &u)?;
            let rhs = red.left_module(&f, &red.right_module(&phi, &u)?)?;
            Ok(eq_obs(&names, &lhs, &rhs))
        });
    }
    let red = Reducer::new(&qz, ReductionConfig::half(k));
    b.trials("reduction.closed.restriction_n", "ι*_{1/2} = ι* ∘ N", n.max(30), |s| {
        let f = s.observable(&all, deg, k, true);
        Ok(eq_obs(&names, &red.deformed_restriction(&f), &m.restrict(&qz.neumaier_n(&f))))
    });
    b.trials("reduction.closed.left_module", "explicit left module formula = ι*_{1/2}(f ⋆ prol φ)", n, |s| {
        let f = s.observable(&all, deg, k, true);
        let phi = s.observable(&cvars, deg, k, true);
        Ok(eq_obs(&names, &red.left_module_explicit(&f, &phi)?, &red.left_module(&f, &phi)?))
    });
    if base.is_empty() {
        return;
    }
    b.trials("reduction.closed.right_module", "φ •_red u = φ ⋆_red u", n, |s| {
        let phi = s.observable(&cvars, deg, k, true);
        let u = s.observable(&base, deg, k, true);
        Ok(eq_obs(&names, &red.right_module(&phi, &u)?, &red.right_module_explicit(&phi, &u)))
    });
    b.trials("reduction.closed.reduced_star", "ι*_{1/2}(prol u ⋆ prol v) = u ⋆_moyal v", n, |s| {
        let (u, v) = (s.observable(&base, deg, k, true), s.observable(&base, deg, k, true));
        Ok(eq_obs(&names, &red.reduced_star(&u, &v)?, &qz.moyal(&u, &v)))
    });
}

// ---------------------------------------------------------------- gns

/// Per-coordinate Gaussian `exp(-d x²)` on the base with `2d + a` a perfect square
/// for the weight exponent `a`, so pairings of two damped functions integrate exactly.
fn pair_damping(m: &ModelSpace, w: &DensityWeight) -> Observable {
    let pairs: Vec<(usize, Rational64)> = m
        .base_vars()
        .into_iter()
        .map(|v| {
            let a = w.profile.get(v);
            let mut n: i64 = 1;
            while Rational64::from_integer(n * n) <= a {
                n += 1;
            }
            (v, (Rational64::from_integer(n * n) - a) / 2)
        })
        .collect();
    m.poly(Poly::gaussian(Profile::new(&pairs)))
}

fn scene_weights(b: &Battery) -> Vec<(String, DensityWeight)> {
    if b.scene.weights.is_empty() {
        vec![("lebesgue".to_string(), DensityWeight::lebesgue(b.scene.model.order()))]
    } else {
        b.scene.weights.clone()
    }
}

fn gns_suite(b: &mut Battery) {
    let m = b.scene.model.clone();
    let qz = Quantizer::new(&m);
    let deg = b.scene.poly_cap().min(2);
    let k = m.order();
    let n = b.n();
    let names = b.names.clone();
    let base = m.base_vars();
    let all = cat(&base, &cat(&m.mom_vars(), &m.grp_vars()));
    for (tag, kappa) in kappas(k).into_iter().take(2) {
        let red = Reducer::new(&qz, ReductionConfig::new(kappa));
        b.trials(&format!("gns.conj_transport.{tag}"), "conj ι*_κ f via A^a_κ, B_κ; Δ(e_a)A^a = B", n, |s| {
            let f = s.observable(&all, deg + 1, k, true);
            let r = check_conj_transport(&red, &f);
            Ok(truth(r[0], "first transport formula").and(truth(r[1], "second transport formula")).and(truth(r[2], "contraction")))
        });
    }
    let red = Reducer::new(&qz, ReductionConfig::half(k));
    for (wname, w) in scene_weights(b) {
        let gns = match Gns::new(&red, &w) {
            Ok(g) => g,
            Err(e) => {
                b.once(&format!("gns.{wname}.setup"), "lift of the density to C", |_| Err(e));
                continue;
            }
        };
        let damp = pair_damping(&m, &w).mul(&damping(&m, &m.grp_vars(), 1, 2));
        let id = |s: &str| format!("gns.{wname}.{s}");
        let rnd = |s: &mut Sampler| s.observable(&all, deg, k, true).mul(&damp);
        b.trials(&id("positivity"), "ω(conj f ⋆ f) > 0 at lowest order off the Gel'fand ideal", n, |s| {
            let f = rnd(s);
            Ok(match gns.positivity(&f)? {
                Positivity::Positive(_) | Positivity::GelfandIdeal => Check::Pass,
                Positivity::Violated(why) => Check::fail(why),
            })
        });
        b.trials(&id("gelfand_ideal"), "f = ∂^κ₁x ⇒ ι*_κ f = 0 and ω(conj f ⋆ f) = 0", n, |s| {
            let a = s.int(0, m.dim() as i64 - 1) as usize;
            let x = SuperObservable::basis(&[a], &rnd(s));
            let f = red.quantized_koszul(&x).scalar_part();
            Ok(match gns.positivity(&f)? {
                Positivity::GelfandIdeal => Check::Pass,
                other => Check::fail(format!("{other:?}")),
            })
        });
        b.trials(&id("isometry"), "ω(conj f ⋆ g) = ⟨ι*f, ι*g⟩_μ", n, |s| {
            let (f, g) = (rnd(s), rnd(s));
            let lhs = gns.omega(&qz.star_total(&f.conj(), &g))?;
            let rhs = gns.inner_product(&red.deformed_restriction(&f), &red.deformed_restriction(&g))?;
            Ok(eq_pi(&names, &lhs, &rhs))
        });
        b.trials(&id("intertwining"), "ι*(f ⋆ g) = f • ι*g", n, |s| {
            let f = s.observable(&all, deg, k, true);
            let g = rnd(s);
            let lhs = red.deformed_restriction(&qz.star_total(&f, &g));
            Ok(eq_obs(&names, &lhs, &red.left_module(&f, &red.deformed_restriction(&g))?))
        });
        b.trials(&id("star_representation"), "⟨φ, f•ψ⟩ = ⟨conj f • φ, ψ⟩", n, |s| {
            let f = s.observable(&all, deg, k, true);
            let (phi, psi) = (red.deformed_restriction(&rnd(s)), red.deformed_restriction(&rnd(s)));
            let lhs = gns.inner_product(&phi, &red.left_module(&f, &psi)?)?;
            let rhs = gns.inner_product(&red.left_module(&f.conj(), &phi)?, &psi)?;
            Ok(eq_pi(&names, &lhs, &rhs))
        });
        b.trials(&id("hermitian"), "⟨φ,ψ⟩ = conj⟨ψ,φ⟩, ⟨φ,ψ⟩ = ∫(conj prol φ • ψ)μ", n, |s| {
            let (phi, psi) = (red.deformed_restriction(&rnd(s)), red.deformed_restriction(&rnd(s)));
            let a = gns.inner_product(&phi, &psi)?;
            let c = eq_pi(&names, &a, &gns.inner_product(&psi, &phi)?.conj());
            Ok(c.and(eq_pi(&names, &a, &gns.inner_product_alt(&phi, &psi)?)))
        });
        b.trials(&id("conj_integral"), "conj ω(f) = ω(conj f)", n, |s| {
            let f = qz.star_total(&rnd(s), &rnd(s));
            Ok(eq_pi(&names, &gns.omega(&f)?.conj(), &gns.omega(&f.conj())?))
        });
    }
}

// ---------------------------------------------------------------- involution

fn is_lebesgue(w: &DensityWeight) -> bool {
    w.profile.is_empty() && w.prefactor.as_scalar().is_some()
}

/// Monomial cap for the modular class computation.
const MODULAR_CAP: u32 = 4;

fn involution_suite(b: &mut Battery) {
    let m = b.scene.model.clone();
    let base = m.base_vars();
    if base.is_empty() {
        b.skip("involution.model_class", "requires a base", "out of model class (no base coordinates)");
        return;
    }
    let qz = Quantizer::new(&m);
    let deg = b.scene.poly_cap().min(3);
    let k = m.order();
    let n = b.n();
    let names = b.names.clone();
    let weights = scene_weights(b);
    let leb = DensityWeight::lebesgue(k);
    for (wname, w) in &weights {
        let inv = match Involution::new(&qz, w) {
            Ok(i) => i,
            Err(e) => {
                b.once(&format!("involution.{wname}.setup"), "u* = H⁻¹R_u⁺1 for the density", |_| Err(e));
                continue;
            }
        };
        let damp = pair_damping(&m, w);
        let id = |s: &str| format!("involution.{wname}.{s}");
        let rnd = |s: &mut Sampler| s.observable(&base, deg, k, true);
        b.trials(&id("adjoint"), "⟨φ, ψ ⋆ u⟩ = ⟨φ ⋆ u*, ψ⟩", n, |s| {
            let u = rnd(s);
            let (phi, psi) = (rnd(s).mul(&damp), rnd(s).mul(&damp));
            let us = inv.star(&u)?;
            let lhs = inv.pairing(&phi, &qz.moyal(&psi, &u))?;
            let rhs = inv.pairing(&qz.moyal(&phi, &us), &psi)?;
            Ok(eq_pi(&names, &lhs, &rhs))
        });
        b.trials(&id("involutive"), "(u*)* = u", n, |s| {
            let u = rnd(s);
            Ok(eq_obs(&names, &inv.star(&inv.star(&u)?)?, &u))
        });
        b.trials(&id("antilinear"), "(iu + v)* = -i u* + v*", n, |s| {
            let (u, v) = (rnd(s), rnd(s));
            let lhs = inv.star(&u.scale(&C::i()).add(&v))?;
            Ok(eq_obs(&names, &lhs, &inv.star(&u)?.scale(&-C::i()).add(&inv.star(&v)?)))
        });
        b.trials(&id("anti_multiplicative"), "(u ⋆ v)* = v* ⋆ u*", n, |s| {
            let (u, v) = (rnd(s), rnd(s));
            let lhs = inv.star(&qz.moyal(&u, &v))?;
            Ok(eq_obs(&names, &lhs, &qz.moyal(&inv.star(&v)?, &inv.star(&u)?)))
        });
        b.once(&id("unit"), "1* = 1", |_| Ok(eq_obs(&names, &inv.star(&m.one())?, &m.one())));
        if is_lebesgue(w) {
            b.trials(&id("trace_density"), "Liouville density: u* = conj u", n, |s| {
                let u = rnd(s);
                Ok(eq_obs(&names, &inv.star(&u)?, &u.conj()))
            });
        }
        let mc = match modular_class(&qz, w, MODULAR_CAP) {
            Ok(mc) => mc,
            Err(e) => {
                b.once(&id("modular.setup"), "D = log(conj ∘ *) on monomials", |_| Err(e));
                continue;
            }
        };
        if k >= 1 {
            let delta = m.modular_vector_field(w);
            let first_order = |sign: i64| -> Result<Check> {
                let delta = delta.clone()?;
                for (e, img) in &mc.derivation.images {
                    let x = m.poly(Poly::monomial(*e, C::one()));
                    let target = delta.apply(&x).coeff(0).scale(&C::new(Q::zero(), q(sign)));
                    let d1 = img.coeff(1);
                    if *d1 != target {
                        let diff = d1.sub(&target);
                        return Ok(Check::Fail {
                            order: Some(1),
                            coefficient: Some(diff.display(&names)),
                            detail: Some(format!(
                                "at {}: D¹ = {}, expected {}",
                                x.coeff(0).display(&names),
                                d1.display(&names),
                                target.display(&names)
                            )),
                        });
                    }
                }
                Ok(Check::Pass)
            };
            b.once(&id("modular.first_order"), "D¹ = iΔ_Ω with Δ_Ω(u) = {log Ω₀, u}", |_| first_order(1));
            b.once(&id("modular.first_order_observed_sign"), "D¹ = -iΔ_Ω with Δ_Ω(u) = {log Ω₀, u}", |_| first_order(-1));
        }
        b.once(&id("modular.report"), "exp D = I; infinitesimal KMS i∫{u,v}Ω₀ + ∫D¹(u)vΩ₀ = 0", |_| {
            let r = mc.report(&qz, w)?;
            Ok(truth(r.exp_recovers, "exp D ≠ I").and(truth(r.infinitesimal_kms, "infinitesimal KMS fails")))
        });
        let capped = |s: &mut Sampler| Series::from_poly(s.poly(&base, MODULAR_CAP / 2, 3, true), k);
        b.trials(&id("modular.derivation"), "D(u⋆v) = Du⋆v + u⋆Dv, I(u⋆v) = Iu⋆Iv", n, |s| {
            let (u, v) = (capped(s), capped(s));
            Ok(truth(mc.is_derivation(&qz, &u, &v)?, "not a derivation")
                .and(truth(mc.is_multiplicative(&qz, &u, &v)?, "not multiplicative")))
        });
        if !is_lebesgue(w) {
            b.once(&id("modular.inner_difference"), "D_Ω - D_Lebesgue = [w, ·]_⋆", |_| {
                let lc = modular_class(&qz, &leb, MODULAR_CAP)?;
                let wv = inner_difference(&qz, &mc, &lc)?;
                let mut out = Check::Pass;
                for e in monomials(&base, MODULAR_CAP) {
                    let x = m.poly(Poly::monomial(e, C::one()));
                    let lhs = mc.derivation.apply(&x)?.sub(&lc.derivation.apply(&x)?);
                    out = out.and(eq_obs(&names, &lhs, &qz.moyal(&wv, &x).sub(&qz.moyal(&x, &wv))));
                }
                Ok(out)
            });
        }
    }
    let mut pairs: Vec<(String, DensityWeight, String, DensityWeight)> = Vec::new();
    for (a, wa) in &weights {
        for (c, wc) in &weights {
            if a != c {
                pairs.push((a.clone(), wa.clone(), c.clone(), wc.clone()));
            }
        }
    }
    if !weights.iter().any(|(_, w)| is_lebesgue(w)) {
        for (c, wc) in &weights {
            pairs.push(("lebesgue".into(), leb.clone(), c.clone(), wc.clone()));
        }
    }
    for (a, wa, c, wc) in pairs {
        b.once(&format!("involution.ratio.{a}.{c}"), "τ_Ω'(u) = τ_Ω(ϱ̂ ⋆ u); u*' ⋆ conj ϱ̂ = conj ϱ̂ ⋆ u*", |s| {
            let rho = density_ratio_hat(&qz, &wa, &wc)?;
            let tests = ratio_test_functions(&m, &wc, MODULAR_CAP);
            let mut out = truth(check_density_ratio(&qz, &wa, &wc, &rho, &tests)?, "density ratio identity");
            for _ in 0..3 {
                let u = Series::from_poly(s.poly(&base, 3, 3, true), k);
                let cmp = involution_comparison(&qz, &wa, &wc, &u)?;
                out = out.and(truth(cmp.intertwined, "intertwining")).and(truth(cmp.conjugation != Some(false), "conjugation"));
            }
            Ok(out)
        });
    }
}

fn kms_suite(b: &mut Battery) {
    let m = b.scene.model.clone();
    let base = m.base_vars();
    if base.is_empty() {
        b.skip("kms.model_class", "requires a base", "out of model class (no base coordinates)");
        return;
    }
    let qz = Quantizer::new(&m);
    let k = m.order();
    let n = b.n();
    let names = b.names.clone();
    for (wname, w) in scene_weights(b) {
        let id = |s: &str| format!("kms.{wname}.{s}");
        let inv = match Involution::new(&qz, &w) {
            Ok(i) => i,
            Err(e) => {
                b.once(&id("setup"), "u* for the density", |_| Err(e));
                continue;
            }
        };
        let damp = pair_damping(&m, &w);
        b.trials(&id("kms"), "τ(v ⋆ u) = τ(I(u) ⋆ v), deg ≤ 3", n, |s| {
            let u = s.observable(&base, 3, k, true).mul(&damp);
            let v = s.observable(&base, 3, k, true).mul(&damp);
            let lhs = inv.tau(&qz.moyal(&v, &u))?;
            let rhs = inv.tau(&qz.moyal(&inv.automorphism(&u)?, &v))?;
            Ok(eq_pi(&names, &lhs, &rhs))
        });
        if is_lebesgue(&w) {
            b.trials(&id("trace"), "τ(u ⋆ v) = τ(v ⋆ u)", n, |s| {
                let u = s.observable(&base, 3, k, true).mul(&damp);
                let v = s.observable(&base, 3, k, true).mul(&damp);
                Ok(eq_pi(&names, &inv.tau(&qz.moyal(&u, &v))?, &inv.tau(&qz.moyal(&v, &u))?))
            });
        }
    }
}

// ---------------------------------------------------------------- morita

fn fiber_state(s: &mut Sampler, m: &ModelSpace, deg: u32, pi_quarter: i32) -> FiberState {
    let vars = cat(&m.base_vars(), &m.grp_vars());
    let d = damping(m, &m.grp_vars(), 1, 2);
    FiberState::with_pi_quarter(s.observable(&vars, deg, m.order(), true).mul(&d), pi_quarter)
}

fn morita_suite(b: &mut Battery) {
    let m = b.scene.model.clone();
    let qz = Quantizer::new(&m);
    let red = Reducer::new(&qz, ReductionConfig::half(m.order()));
    let mo = match Morita::new(&red) {
        Ok(x) => x,
        Err(e) => {
            b.once("morita.setup", "inner-product module", |_| Err(e));
            return;
        }
    };
    let deg = b.scene.poly_cap().min(2);
    let k = m.order();
    let n = b.n();
    let names = b.names.clone();
    let unit = -(m.dim() as i32);
    let st = |s: &mut Sampler| fiber_state(s, &m, deg, unit);
    let base = m.base_vars();
    let all = cat(&base, &cat(&m.mom_vars(), &m.grp_vars()));
    let e = mo.fullness_element();
    b.once("morita.fullness", "⟨ê,ê⟩_red = 1", |_| Ok(eq_pi(&names, &mo.inner_product(&e, &e)?, &PiObservable::new(m.one(), 0))));
    b.trials("morita.symmetry", "⟨φ,ψ⟩ = conj⟨ψ,φ⟩", n, |s| {
        let (phi, psi) = (st(s), st(s));
        Ok(eq_pi(&names, &mo.inner_product(&phi, &psi)?, &mo.inner_product(&psi, &phi)?.conj()))
    });
    b.trials("morita.right_linearity", "⟨φ, ψ•u⟩ = ⟨φ,ψ⟩ ⋆_red u", n, |s| {
        let (phi, psi) = (st(s), st(s));
        let u = if base.is_empty() { m.constant(s.coeff(true)) } else { s.observable(&base, deg, k, true) };
        let lhs = mo.inner_product(&phi, &mo.right_act(&psi, &PiObservable::new(u.clone(), 0)))?;
        let ip = mo.inner_product(&phi, &psi)?;
        Ok(eq_pi(&names, &lhs, &PiObservable::new(qz.moyal(&ip.value, &u), ip.pi_half_power)))
    });
    b.trials("morita.adjointable", "⟨φ, f•ψ⟩ = ⟨conj f • φ, ψ⟩", n, |s| {
        let (phi, psi) = (st(s), st(s));
        let f = s.observable(&all, deg, k, true);
        let lhs = mo.inner_product(&phi, &mo.left_act(&f, &psi)?)?;
        Ok(eq_pi(&names, &lhs, &mo.inner_product(&mo.left_act(&f.conj(), &phi)?, &psi)?))
    });
    b.trials("morita.representation", "(f⋆g)•φ = f•(g•φ)", n, |s| {
        let phi = st(s);
        let (f, g) = (s.observable(&all, deg, k, true), s.observable(&all, deg, k, true));
        let lhs = mo.left_act(&qz.star_total(&f, &g), &phi)?;
        Ok(eq_state(&names, &lhs, &mo.left_act(&f, &mo.left_act(&g, &phi)?)?))
    });
    b.trials("morita.closed_form", "⟨φ,ψ⟩_red = ∫_G conj φ ⋆_red ψ dg", n, |s| {
        let (phi, psi) = (st(s), st(s));
        Ok(eq_pi(&names, &mo.inner_product(&phi, &psi)?, &mo.inner_product_closed(&phi, &psi)?))
    });
    b.trials("morita.rank_one.dual_basis", "Θ_{φ,ê}(ê) = φ", n, |s| {
        let phi = st(s);
        Ok(eq_state(&names, &RankOne::new(phi.clone(), e.clone()).apply(&mo, &e)?, &phi))
    });
    b.trials("morita.rank_one.adjoint", "⟨Θ_{φ,ψ}χ, ξ⟩ = ⟨χ, Θ_{ψ,φ}ξ⟩", n, |s| {
        let (phi, psi, chi, xi) = (st(s), st(s), st(s), st(s));
        let t = RankOne::new(phi, psi);
        let lhs = mo.inner_product(&t.apply(&mo, &chi)?, &xi)?;
        Ok(eq_pi(&names, &lhs, &mo.inner_product(&chi, &t.adjoint().apply(&mo, &xi)?)?))
    });
    b.trials("morita.rank_one.composition", "Θ_{φ,ψ}Θ_{χ,ξ} = Θ_{φ•⟨ψ,χ⟩,ξ}", n, |s| {
        let (a, c, d, x) = (st(s), st(s), st(s), st(s));
        let t1 = RankOne::new(a, e.clone());
        let t2 = RankOne::new(c, d);
        let lhs = t1.apply(&mo, &t2.apply(&mo, &x)?)?;
        Ok(eq_state(&names, &lhs, &t1.compose(&mo, &t2)?.apply(&mo, &x)?))
    });
    b.once("morita.gram_psd", "Gram matrix of ⟨·,·⟩_red of 5 states is PSD at lowest order", |s| {
        let states: Vec<FiberState> = (0..5).map(|_| st(s)).collect();
        let nb = base.len();
        let pts: Vec<Vec<Q>> = (0..5).map(|_| (0..nb).map(|_| q(s.int(-3, 3))).collect()).collect();
        let cv: Vec<Vec<C>> = (0..5).map(|_| (0..5).map(|_| s.coeff(true)).collect()).collect();
        let r = complete_positivity_sample(&mo, &states, &pts, &cv)?;
        Ok(truth(r.psd_at_points.iter().all(|&x| x), "Gram matrix not PSD at a sample point")
            .and(truth(r.factorization, "⟨Σcφ, Σcφ⟩ ≠ Σ conj c_i c_j ⟨φ_i,φ_j⟩")))
    });
}

fn random_op(s: &mut Sampler, m: &ModelSpace, cap: u32) -> VerticalOp {
    let k = m.order();
    let mut d = VerticalOp::zero(k);
    for i in monomials(&(0..m.dim()).collect::<Vec<_>>(), cap) {
        let c = if m.base_dim() == 0 { m.constant(s.coeff(true)) } else { s.observable(&m.base_vars(), 1, k, true) };
        d.add_term(i, c);
    }
    d
}

fn vertical_suite(b: &mut Battery) {
    let m = b.scene.model.clone();
    let qz = Quantizer::new(&m);
    let v = match Vertical::new(&qz) {
        Ok(v) => v,
        Err(e) => {
            b.once("vertical.setup", "vertical operators", |_| Err(e));
            return;
        }
    };
    let k = m.order();
    let n = b.n();
    let names = b.names.clone();
    let cap = b.scene.op_cap();
    let unit = -(m.dim() as i32);
    let st = |s: &mut Sampler| fiber_state(s, &m, 2, unit);
    b.trials("vertical.composition", "(D ⋆' E) •' = D •' ∘ E •'", n, |s| {
        let (d, e) = (random_op(s, &m, cap), random_op(s, &m, cap));
        let phi = st(s);
        let lhs = v.act(&v.compose(&d, &e), &phi)?;
        Ok(eq_state(&names, &lhs, &v.act(&d, &v.act(&e, &phi)?)?))
    });
    b.trials("vertical.adjoint", "⟨φ, D•'ψ⟩_can = ⟨D*•'φ, ψ⟩_can", n, |s| {
        let d = random_op(s, &m, cap);
        let (phi, psi) = (st(s), st(s));
        let lhs = v.canonical(&phi, &v.act(&d, &psi)?)?;
        Ok(eq_pi(&names, &lhs, &v.canonical(&v.act(&v.adjoint(&d), &phi)?, &psi)?))
    });
    b.once("vertical.generator_adjoint", "L_a* = -Δ(e_a) - L_a, (u id)* = conj u id", |s| {
        let mut out = Check::Pass;
        for a in 0..m.dim() {
            let l = VerticalOp::generator(a, k);
            let expect = l.scale(&C::int(-1)).add(&VerticalOp::coefficient(&m.constant(C::real(-m.lie.delta(a).clone()))));
            out = out.and(truth(v.adjoint(&l) == expect, &format!("generator {}", a + 1)));
        }
        let u = if m.base_dim() == 0 { m.constant(s.coeff(true)) } else { s.observable(&m.base_vars(), 2, k, true) };
        out = out.and(truth(v.adjoint(&VerticalOp::coefficient(&u)) == VerticalOp::coefficient(&u.conj()), "coefficient"));
        Ok(out)
    });
    b.once("vertical.comparison_round_trip", "H from ⟨·,·⟩₂ = ⟨·, H•'·⟩₁ recovers the planted H; V*⋆'V = H", |s| {
        if k < 1 {
            return Ok(Check::Skip("needs truncation order ≥ 1".into()));
        }
        let l = VerticalOp::generator(0, k);
        let l2 = v.compose(&l, &l);
        let x = if m.base_dim() == 0 { m.one() } else { m.var(m.base(0)) };
        let mut planted = VerticalOp::identity(k).add(&l2.shift(1));
        if k >= 2 {
            planted = planted.add(&VerticalOp::coefficient(&x.mul(&x)).shift(2));
        }
        let ip1 = |a: &FiberState, c: &FiberState| v.canonical(a, c);
        let ip2 = |a: &FiberState, c: &FiberState| v.weighted(&planted, a, c);
        let h = v.deformation_comparison_h(&ip1, &ip2, 2, 2)?;
        let mut out = truth(h == planted, "recovered H differs from the planted one");
        let root = v.sqrt(&h)?;
        out = out.and(truth(v.compose(&v.adjoint(&root), &root) == h, "V*⋆'V ≠ H"));
        for _ in 0..3 {
            let (phi, psi) = (st(s), st(s));
            let a = ip2(&phi, &psi)?;
            out = out.and(eq_pi(&names, &a, &v.canonical(&v.act(&root, &phi)?, &v.act(&root, &psi)?)?));
        }
        let same = v.deformation_comparison_h(&ip1, &ip1, 2, 2)?;
        Ok(out.and(truth(same == VerticalOp::identity(k), "identical inner products give H ≠ id")))
    });
}

// ---------------------------------------------------------------- crossed

fn crossed_suite(b: &mut Battery) {
    let m = b.scene.model.clone();
    let c = match Crossed::new(&m) {
        Ok(c) => c,
        Err(e) => {
            b.once("crossed.setup", "kernel calculus", |_| Err(e));
            return;
        }
    };
    let n = b.n();
    let names = b.names.clone();
    let deg = b.scene.poly_cap().min(2);
    let st = |s: &mut Sampler| fiber_state(s, &m, deg, 0);
    b.trials("crossed.conv_associativity", "(Ψ∘Ξ)∘Υ = Ψ∘(Ξ∘Υ)", n, |s| {
        let a = c.outer(&st(s), &st(s));
        let bb = c.outer(&st(s), &st(s));
        let e = c.outer(&st(s), &st(s));
        Ok(eq_kernel(&names, &c.conv(&c.conv(&a, &bb)?, &e)?, &c.conv(&a, &c.conv(&bb, &e)?)?))
    });
    b.trials("crossed.involution", "(Ψ∘Ξ)* = Ξ*∘Ψ*, Ψ** = Ψ", n, |s| {
        let a = c.outer(&st(s), &st(s));
        let bb = c.outer(&st(s), &st(s));
        let lhs = c.star(&c.conv(&a, &bb)?);
        Ok(eq_kernel(&names, &lhs, &c.conv(&c.star(&bb), &c.star(&a))?).and(eq_kernel(&names, &c.star(&c.star(&a)), &a)))
    });
    b.trials("crossed.embedding", "Θ_{φ,ψ} ↦ φ⊗conj ψ is a *-homomorphism", n, |s| {
        let (phi, psi, chi, xi) = (st(s), st(s), st(s), st(s));
        let a = c.outer(&phi, &psi);
        let prod = c.conv(&a, &c.outer(&chi, &xi))?;
        let composed = c.outer(&c.classical_rank_one(&phi, &psi, &chi)?, &xi);
        let out = eq_kernel(&names, &prod, &composed).and(eq_kernel(&names, &c.star(&a), &c.outer(&psi, &phi)));
        Ok(out.and(eq_state(&names, &c.act(&a, &chi)?, &c.classical_rank_one(&phi, &psi, &chi)?)))
    });
}

// ---------------------------------------------------------------- rieffel

fn rieffel_suite(b: &mut Battery) {
    let m = b.scene.model.clone();
    let qz = Quantizer::new(&m);
    let red = Reducer::new(&qz, ReductionConfig::half(m.order()));
    let ind = match Induction::new(&red) {
        Ok(i) => i,
        Err(e) => {
            b.once("rieffel.setup", "induction", |_| Err(e));
            return;
        }
    };
    let mo = match Morita::new(&red) {
        Ok(x) => x,
        Err(e) => {
            b.once("rieffel.setup", "induction", |_| Err(e));
            return;
        }
    };
    let k = m.order();
    let n = b.n();
    let names = b.names.clone();
    let deg = b.scene.poly_cap().min(2);
    let base = m.base_vars();
    let grp = m.grp_vars();
    let damp = damping(&m, &grp, 1, 2);
    let fiber = |s: &mut Sampler| s.observable(&grp, deg, k, true).mul(&damp);
    let elem = |s: &mut Sampler| {
        if base.is_empty() {
            m.constant(s.coeff(true))
        } else {
            s.observable(&base, deg, k, true)
        }
    };
    let st = |s: &mut Sampler| fiber_state(s, &m, deg, 0);
    let all = cat(&base, &cat(&m.mom_vars(), &grp));
    b.trials("rieffel.schroedinger", "P_a·([χ]⊗u) = [P_a ⋆_G χ]⊗u with ι*(P_a ⋆_G χ) the Schrödinger derivative", n, |s| {
        let (chi, u) = (fiber(s), elem(s));
        let v = InducedVector::simple(chi.clone(), u.clone());
        let mut out = Check::Pass;
        for a in 0..m.dim() {
            let lhs = ind.canonical(&ind.act(&m.p(a), &v));
            let rhs = qz.schroedinger_rep(&m.p(a), &chi)?.mul(&u);
            out = out.and(eq_obs(&names, &lhs, &rhs).with_detail(format!("P{}", a + 1)));
        }
        Ok(out.and(eq_obs(&names, &ind.canonical(&ind.act(&m.one(), &v)), &ind.canonical(&v))))
    });
    b.trials("rieffel.external_inner_product", "⟨[b]⊗a,[b']⊗a'⟩ = ⟨ι*b, ι*b'⟩_G (conj a ⋆ a')", n, |s| {
        let (b1, b2) = (fiber(s), fiber(s));
        let (a1, a2) = (elem(s), elem(s));
        let lhs = ind.inner_product(&InducedVector::simple(b1.clone(), a1.clone()), &InducedVector::simple(b2.clone(), a2.clone()))?;
        let g = m.fiber_integral(&ind.class(&b1).conj().mul(&ind.class(&b2)))?;
        let rhs = PiObservable::new(g.value.mul(&qz.moyal(&a1.conj(), &a2)), g.pi_half_power);
        Ok(eq_pi(&names, &lhs, &rhs))
    });
    b.trials("rieffel.unitary", "⟨U(φ⊗x), U(ψ⊗y)⟩ = ⟨x, ⟨φ,ψ⟩_red ⋆ y⟩", n, |s| {
        let (phi, psi) = (st(s), st(s));
        let (x, y) = (elem(s), elem(s));
        let lhs = ind.inner_product(&ind.unitary(&phi, &x)?, &ind.unitary(&psi, &y)?)?;
        Ok(eq_pi(&names, &lhs, &ind.balanced_inner_product(&mo, &phi, &x, &psi, &y)?))
    });
    b.trials("rieffel.star_representation", "⟨v, f·w⟩ = ⟨conj f·v, w⟩", n, |s| {
        let (v, w) = (ind.unitary(&st(s), &elem(s))?, ind.unitary(&st(s), &elem(s))?);
        let f = s.observable(&all, deg, k, true);
        let lhs = ind.inner_product(&v, &ind.act(&f, &w))?;
        Ok(eq_pi(&names, &lhs, &ind.inner_product(&ind.act(&f.conj(), &v), &w)?))
    });
    b.trials("rieffel.intertwining", "U((f•φ)⊗x) = f·U(φ⊗x)", n, |s| {
        let (phi, x) = (st(s), elem(s));
        let f = s.observable(&all, deg, k, true);
        let lhs = ind.canonical(&ind.unitary(&mo.left_act(&f, &phi)?, &x)?);
        Ok(eq_obs(&names, &lhs, &ind.canonical(&ind.act(&f, &ind.unitary(&phi, &x)?))))
    });
}
