//! Scene files: a JSON description of the Lie algebra, the base Poisson
//! structure, truncation and degree caps, the seed, named densities and the
//! suites to run.

use std::collections::BTreeMap;
use std::path::Path;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::parse_observable;
use crate::gauss::DensityWeight;
use crate::lie::LieAlgebraData;
use crate::model::ModelSpace;
use crate::scalar::Q;

/// A rational given either as a JSON integer or as a string `"a/b"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rat {
    Int(i64),
    Text(String),
}

impl Rat {
    pub fn to_q(&self) -> Result<Q> {
        match self {
            Rat::Int(n) => Ok(Q::from_integer((*n).into())),
            Rat::Text(s) => parse_rational(s),
        }
    }
}

fn parse_rational(s: &str) -> Result<Q> {
    let bad = || Error::Config(format!("`{s}` is not a rational number"));
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: num_bigint::BigInt = n.parse().map_err(|_| bad())?;
    let d: num_bigint::BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieSpec {
    pub label: String,
    pub dim: usize,
    /// `[a, b, c, C_ab^c]`, 1-based indices.
    #[serde(default)]
    pub structure_constants: Vec<(usize, usize, usize, Rat)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSpec {
    pub dim: usize,
    pub poisson_matrix: Vec<Vec<Rat>>,
    /// Coordinate names; default `q, p` in dimension 2, else `x1, x2, …`.
    #[serde(default)]
    pub names: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeCaps {
    #[serde(default = "default_poly_cap")]
    pub polynomial: u32,
    #[serde(default = "default_op_cap", alias = "operator-basis")]
    pub operator_basis: u32,
}

fn default_poly_cap() -> u32 {
    6
}
fn default_op_cap() -> u32 {
    2
}

impl Default for DegreeCaps {
    fn default() -> Self {
        DegreeCaps { polynomial: default_poly_cap(), operator_basis: default_op_cap() }
    }
}

/// `prefactor · exp(-Σ a_x x²)` on the base, or Lebesgue measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum WeightSpec {
    Lebesgue {
        #[serde(default)]
        prefactor: Option<String>,
    },
    Gaussian {
        exponents: BTreeMap<String, Rat>,
        #[serde(default)]
        prefactor: Option<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub lie_algebra: LieSpec,
    pub base: BaseSpec,
    pub truncation_order: usize,
    #[serde(default)]
    pub degree_caps: DegreeCaps,
    pub seed: u64,
    #[serde(default)]
    pub weights: BTreeMap<String, WeightSpec>,
    #[serde(default)]
    pub suites: Vec<String>,
    /// Random trials per identity.
    #[serde(default = "default_trials")]
    pub trials: usize,
}

fn default_trials() -> usize {
    25
}

/// Structural facts about the Lie algebra detected on load.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SceneInfo {
    pub label: String,
    pub dim: usize,
    pub nilpotency_class: Option<usize>,
    pub unimodular: bool,
    /// `Δ_a = C_ab^b`, printed as exact rationals.
    pub modular_form: Vec<String>,
    pub group_level: bool,
    pub flags: Vec<String>,
}

/// A validated scene.
#[derive(Clone, Debug)]
pub struct Scene {
    pub file: SceneFile,
    pub model: ModelSpace,
    pub weights: Vec<(String, DensityWeight)>,
    pub info: SceneInfo,
}

impl Scene {
    pub fn from_json(text: &str) -> Result<Scene> {
        let file: SceneFile = serde_json::from_str(text).map_err(|e| Error::Config(format!("scene parse error: {e}")))?;
        Scene::from_file(file)
    }

    pub fn from_file(file: SceneFile) -> Result<Scene> {
        let ls = &file.lie_algebra;
        let mut entries = Vec::with_capacity(ls.structure_constants.len());
        for (a, b, c, v) in &ls.structure_constants {
            if *a == 0 || *b == 0 || *c == 0 {
                return Err(Error::Config(format!("structure constant indices are 1-based: ({a},{b},{c})")));
            }
            entries.push((a - 1, b - 1, c - 1, v.to_q()?));
        }
        let lie = LieAlgebraData::new(&ls.label, ls.dim, &entries)?;

        let bs = &file.base;
        if bs.poisson_matrix.len() != bs.dim || bs.poisson_matrix.iter().any(|r| r.len() != bs.dim) {
            return Err(Error::Config(format!("poisson_matrix must be {0}×{0}", bs.dim)));
        }
        let lambda: Vec<Vec<Q>> =
            bs.poisson_matrix.iter().map(|r| r.iter().map(Rat::to_q).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
        let names: Vec<String> = match &bs.names {
            Some(n) if n.len() != bs.dim => return Err(Error::Config("base.names must list one name per coordinate".into())),
            Some(n) => n.clone(),
            None if bs.dim == 2 => vec!["q".into(), "p".into()],
            None => (1..=bs.dim).map(|i| format!("x{i}")).collect(),
        };
        let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let model = ModelSpace::new(lie, &name_refs, lambda, file.truncation_order)?;

        let mut weights = Vec::new();
        for (name, spec) in &file.weights {
            let w = build_weight(&model, spec).map_err(|e| Error::Config(format!("weight `{name}`: {e}")))?;
            weights.push((name.clone(), w));
        }
        for s in &file.suites {
            crate::suites::Suite::parse(s)?;
        }

        let lie = &model.lie;
        let group_level = lie.has_group_coordinates();
        let mut flags = Vec::new();
        if !group_level {
            flags.push("lie-algebra-level only".to_string());
        }
        if !lie.is_unimodular() {
            flags.push("non-unimodular".to_string());
        }
        let info = SceneInfo {
            label: lie.label.clone(),
            dim: lie.dim(),
            nilpotency_class: lie.nilpotency_class(),
            unimodular: lie.is_unimodular(),
            modular_form: (0..lie.dim()).map(|a| lie.delta(a).to_string()).collect(),
            group_level,
            flags,
        };
        Ok(Scene { file, model, weights, info })
    }

    pub fn seed(&self) -> u64 {
        self.file.seed
    }
    pub fn trials(&self) -> usize {
        self.file.trials
    }
    pub fn poly_cap(&self) -> u32 {
        self.file.degree_caps.polynomial
    }
    pub fn op_cap(&self) -> u32 {
        self.file.degree_caps.operator_basis
    }
    pub fn label(&self) -> &str {
        &self.file.lie_algebra.label
    }

    /// The same scene with command-line overrides applied and re-validated.
    pub fn with_overrides(&self, order: Option<usize>, seed: Option<u64>, degree_cap: Option<u32>) -> Result<Scene> {
        let mut f = self.file.clone();
        if let Some(k) = order {
            f.truncation_order = k;
        }
        if let Some(s) = seed {
            f.seed = s;
        }
        if let Some(c) = degree_cap {
            f.degree_caps.polynomial = c;
        }
        Scene::from_file(f)
    }
}

fn build_weight(m: &ModelSpace, spec: &WeightSpec) -> Result<DensityWeight> {
    let k = m.order();
    let (pairs, prefactor) = match spec {
        WeightSpec::Lebesgue { prefactor } => (Vec::new(), prefactor),
        WeightSpec::Gaussian { exponents, prefactor } => {
            let mut pairs = Vec::new();
            for (name, a) in exponents {
                let v = m.var_index(name)?;
                if v >= m.base_dim() {
                    return Err(Error::UnsupportedWeight(format!("`{name}` is not a base coordinate")));
                }
                let a = a.to_q()?;
                let (n, d) = (a.numer().to_i64(), a.denom().to_i64());
                match (n, d) {
                    (Some(n), Some(d)) => pairs.push((v, Rational64::new(n, d))),
                    _ => return Err(Error::UnsupportedWeight(format!("exponent of `{name}` too large"))),
                }
            }
            (pairs, prefactor)
        }
    };
    let mut w = DensityWeight::gaussian(&pairs, k);
    if let Some(p) = prefactor {
        w = w.with_prefactor(&parse_observable(m, p)?);
    }
    w.validate()?;
    Ok(w)
}

/// Reads and validates a scene file.
pub fn load_scene(path: &Path) -> Result<Scene> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    Scene::from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scene(lie: &str, consts: &str) -> String {
        format!(
            r#"{{"lie_algebra": {{"label": "{lie}", "dim": 3, "structure_constants": {consts}}},
                "base": {{"dim": 2, "poisson_matrix": [[0, 1], [-1, 0]]}},
                "truncation_order": 2, "seed": 1,
                "weights": {{"gauss": {{"kind": "gaussian", "exponents": {{"q": 1, "p": "1/2"}}}},
                             "leb": {{"kind": "lebesgue"}}}},
                "suites": ["star"]}}"#
        )
    }

    #[test]
    fn heisenberg_scene_loads() {
        let s = Scene::from_json(&scene("heis3", "[[1, 2, 3, 1]]")).unwrap();
        assert_eq!(s.info.nilpotency_class, Some(2));
        assert!(s.info.group_level && s.info.flags.is_empty());
        assert_eq!(s.weights.len(), 2);
        assert_eq!(s.model.names()[0], "q");
    }

    #[test]
    fn antisymmetry_error_names_indices() {
        let e = Scene::from_json(&scene("bad", "[[1, 2, 1, 1], [2, 1, 1, 1]]")).unwrap_err();
        assert_eq!(e, Error::Antisymmetry(1, 2, 1));
    }

    #[test]
    fn jacobi_error() {
        // [e1,e2] = e3, [e2,e3] = e1, [e3,e1] = e1 violates Jacobi
        let e = Scene::from_json(&scene("bad", "[[1, 2, 3, 1], [2, 3, 1, 1], [3, 1, 1, 1]]")).unwrap_err();
        assert!(matches!(e, Error::Jacobi(..)), "{e:?}");
    }

    #[test]
    fn affine_scene_is_algebra_level() {
        let text = r#"{"lie_algebra": {"label": "aff1", "dim": 2, "structure_constants": [[1, 2, 2, 1]]},
            "base": {"dim": 2, "poisson_matrix": [[0, 1], [-1, 0]]}, "truncation_order": 2, "seed": 3}"#;
        let s = Scene::from_json(text).unwrap();
        assert_eq!(s.info.modular_form, vec!["1".to_string(), "0".to_string()]);
        assert!(!s.info.group_level);
        assert!(s.info.flags.contains(&"lie-algebra-level only".to_string()));
    }

    #[test]
    fn malformed_scenes() {
        assert!(matches!(Scene::from_json("{"), Err(Error::Config(_))));
        let bad_poisson = scene("x", "[]").replace("[[0, 1], [-1, 0]]", "[[0, 1], [1, 0]]");
        assert_eq!(Scene::from_json(&bad_poisson).unwrap_err(), Error::PoissonMatrix(1, 2));
        let bad_weight = scene("x", "[]").replace("\"q\": 1", "\"g1\": 1");
        assert!(Scene::from_json(&bad_weight).is_err());
        let bad_suite = scene("x", "[]").replace("[\"star\"]", "[\"nope\"]");
        assert!(Scene::from_json(&bad_suite).is_err());
    }
}
