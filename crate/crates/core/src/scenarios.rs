//! Scenario descriptions: builtin instances, random draws, and TOML files.
//!
//! A scenario file has the sections `[group]`, `[haar]`, `[algebra]`, `[action]`,
//! `[tolerances]` and `[expect]`; unknown keys are rejected. Example:
//!
//! ```toml
//! id = "wh:4"
//! seed = 1
//! [group]
//! kind = "finite"
//! name = "c4xc4"
//! [haar]
//! normalization = "counting"
//! [action]
//! kind = "conjugation"
//! rep = "wh"
//! [expect]
//! d = 0.25
//! ```

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::actions::{conjugation_action, coset_action, permutation_action_unchecked, translation_action, Action};
use crate::algebra::AlgebraShape;
use crate::error::{Error, Result};
use crate::groups::{CharacterTable, FiniteGroup, HaarModel, Normalization};
use crate::induced::InducedAction;
use crate::random;
use crate::reps::UnitaryRep;
use crate::twisted::TwistedAlgebra;
use crate::wavelet::{AffineWavelet, WaveletGrid};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub id: String,
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub group: GroupSpec,
    #[serde(default)]
    pub haar: HaarSpec,
    #[serde(default)]
    pub algebra: AlgebraSpec,
    pub action: ActionSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub expect: ExpectSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grids: Option<ExponentGrids>,
}

fn default_seed() -> u64 {
    1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Finite,
    Affine,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub kind: GroupKind,
    /// Finite group name (`c<n>`, `c<n>xc<m>`, `s<n>`); unused for the affine group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HaarSpec {
    pub normalization: Normalization,
}

impl Default for HaarSpec {
    fn default() -> Self {
        Self {
            normalization: Normalization::Counting,
        }
    }
}

/// Optional declared algebra; when present it must match the one the action builds.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_weights: Option<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActionKindSpec {
    Conjugation,
    Translation,
    Cosets,
    Permutation,
    TwistedDual,
    Induced,
    AffineWavelet,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub kind: ActionKindSpec,
    /// Conjugation: `std`, `sign`, `trivial` (symmetric groups), `chi<k>` (cyclic),
    /// `wh` (Weyl–Heisenberg on `c<n>xc<n>`), `pauli`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rep: Option<String>,
    /// Subgroup name for cosets and induced actions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<String>,
    /// Inner representation for induced actions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<String>,
    /// Twisted dual: `c<n>xc<n>` with cocycle exponent `m`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Permutation: `point_maps[g][t] = g·t`; measure from `algebra.trace_weights`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point_maps: Option<Vec<Vec<usize>>>,
    /// Affine wavelet refinement level.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
}

impl ActionSpec {
    fn of(kind: ActionKindSpec) -> Self {
        Self {
            kind,
            rep: None,
            subgroup: None,
            inner: None,
            n: None,
            m: None,
            point_maps: None,
            level: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "Tolerances::default_rel")]
    pub rel: f64,
    #[serde(default = "Tolerances::default_abs")]
    pub abs: f64,
    /// Seeded trials per inequality check.
    #[serde(default = "Tolerances::default_trials")]
    pub trials: usize,
    /// Seeded pairs for the orthogonality relation.
    #[serde(default = "Tolerances::default_pairs")]
    pub pairs: usize,
}

impl Tolerances {
    fn default_rel() -> f64 {
        1e-9
    }
    fn default_abs() -> f64 {
        1e-12
    }
    fn default_trials() -> usize {
        200
    }
    fn default_pairs() -> usize {
        100
    }

    pub fn quadrature() -> Self {
        Self {
            rel: 1e-2,
            abs: 0.0,
            trials: 0,
            pairs: 0,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rel: Self::default_rel(),
            abs: Self::default_abs(),
            trials: Self::default_trials(),
            pairs: Self::default_pairs(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectSpec {
    /// `D = d·1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    /// `D⁻¹ = c·1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_inverse: Option<f64>,
    /// Named operator, e.g. `inverse-frequency`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentGrids {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub young: Option<Vec<[f64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interpolation: Option<Vec<f64>>,
}

/// Ids accepted by [`builtin`], one per family.
pub const BUILTIN_IDS: &[&str] = &[
    "irrep:s3:trivial",
    "irrep:s3:sign",
    "irrep:s3:std",
    "irrep:c8:0",
    "irrep:c8:1",
    "irrep:c8:2",
    "irrep:c8:3",
    "irrep:c8:4",
    "irrep:c8:5",
    "irrep:c8:6",
    "irrep:c8:7",
    "wh:2",
    "wh:3",
    "wh:4",
    "wh:5",
    "wh:8",
    "translation:c6",
    "cosets:c6:c3",
    "twisted-dual:8:0",
    "twisted-dual:3:1",
    "induced:c2xc4:c2xc2:pauli",
    "affine-wavelet:0",
];

/// Accepts `cyclic(n)` as a spelling of `c<n>`.
fn normalize_group_name(s: &str) -> String {
    let mut out = s.trim().to_string();
    while let Some(start) = out.find("cyclic(") {
        let end = out[start..].find(')').map(|e| start + e);
        match end {
            Some(end) => {
                let n = out[start + 7..end].to_string();
                out.replace_range(start..=end, &format!("c{n}"));
            }
            None => break,
        }
    }
    out.replace('×', "x")
}

fn finite(name: &str) -> GroupSpec {
    GroupSpec {
        kind: GroupKind::Finite,
        name: Some(name.to_string()),
    }
}

fn parse_usize(s: &str, what: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::Config(format!("expected a nonnegative integer for {what}, got '{s}'")))
}

fn unknown(id: &str) -> Error {
    Error::Config(format!(
        "unknown scenario '{id}'; builtin families: irrep:<group>:<rep>, wh:<n>, translation:<group>, cosets:<G>:<H>, twisted-dual:<n>:<m>, induced:<G>:<H>:pauli, affine-wavelet:<level>"
    ))
}

/// Builtin scenario by id.
pub fn builtin(id: &str) -> Result<ScenarioSpec> {
    let norm = normalize_group_name(id);
    let parts: Vec<&str> = norm.split(':').collect();
    let base = |group: GroupSpec, normalization: Normalization, action: ActionSpec, expect: ExpectSpec| ScenarioSpec {
        id: norm.clone(),
        seed: 1,
        group,
        haar: HaarSpec { normalization },
        algebra: AlgebraSpec::default(),
        action,
        tolerances: Tolerances::default(),
        expect,
        grids: None,
    };
    let spec = match parts.as_slice() {
        ["irrep", g, rep] => {
            let group = FiniteGroup::from_name(g)?;
            let mut action = ActionSpec::of(ActionKindSpec::Conjugation);
            action.rep = Some(if g.starts_with('c') { format!("chi{rep}") } else { rep.to_string() });
            let mut spec = base(finite(g), Normalization::Probability, action, ExpectSpec::default());
            let dim = build_rep(&group, spec.action.rep.as_deref().unwrap_or_default())?.dim();
            spec.expect.d = Some(dim as f64);
            spec
        }
        ["wh", n] => {
            let n = parse_usize(n, "wh:<n>")?;
            if n < 2 {
                return Err(Error::Config("wh:<n> needs n >= 2".into()));
            }
            let mut action = ActionSpec::of(ActionKindSpec::Conjugation);
            action.rep = Some("wh".into());
            let expect = ExpectSpec {
                d: Some(1.0 / n as f64),
                ..Default::default()
            };
            base(finite(&format!("c{n}xc{n}")), Normalization::Counting, action, expect)
        }
        ["translation", g] => {
            FiniteGroup::from_name(g)?;
            let expect = ExpectSpec {
                d: Some(1.0),
                ..Default::default()
            };
            base(finite(g), Normalization::Counting, ActionSpec::of(ActionKindSpec::Translation), expect)
        }
        ["cosets", g, h] => {
            let hg = FiniteGroup::from_name(h)?;
            let mut action = ActionSpec::of(ActionKindSpec::Cosets);
            action.subgroup = Some(h.to_string());
            let expect = ExpectSpec {
                d_inverse: Some(hg.order() as f64),
                ..Default::default()
            };
            base(finite(g), Normalization::Counting, action, expect)
        }
        ["twisted-dual", n, m] => {
            let (n, m) = (parse_usize(n, "n")?, parse_usize(m, "m")?);
            let mut action = ActionSpec::of(ActionKindSpec::TwistedDual);
            action.n = Some(n);
            action.m = Some(m);
            let expect = ExpectSpec {
                d_inverse: Some((n * n) as f64),
                ..Default::default()
            };
            base(finite(&format!("c{n}xc{n}")), Normalization::Counting, action, expect)
        }
        ["induced", g, h, inner] => {
            let mut action = ActionSpec::of(ActionKindSpec::Induced);
            action.subgroup = Some(h.to_string());
            action.inner = Some(inner.to_string());
            base(finite(g), Normalization::Counting, action, ExpectSpec::default())
        }
        ["affine-wavelet"] | ["affine-wavelet", _] => {
            let level = match parts.get(1) {
                Some(l) => parse_usize(l, "affine-wavelet:<level>")? as u32,
                None => 0,
            };
            let mut action = ActionSpec::of(ActionKindSpec::AffineWavelet);
            action.level = Some(level);
            let expect = ExpectSpec {
                operator: Some("inverse-frequency".into()),
                ..Default::default()
            };
            let mut spec = base(
                GroupSpec {
                    kind: GroupKind::Affine,
                    name: None,
                },
                Normalization::Quadrature,
                action,
                expect,
            );
            spec.tolerances = Tolerances::quadrature();
            spec.id = format!("affine-wavelet:{level}");
            spec
        }
        _ => return Err(unknown(id)),
    };
    spec.validate()?;
    Ok(spec)
}

pub fn all_builtins() -> Vec<ScenarioSpec> {
    BUILTIN_IDS.iter().map(|id| builtin(id).expect("builtin ids are valid")).collect()
}

/// Draws a builtin family with random parameters; block dims ≤ 6 and group order ≤ 16.
pub fn random_scenario(seed: u64) -> ScenarioSpec {
    let mut rng = random::rng(seed);
    let id = match rng.gen_range(0..6) {
        0 => ["irrep:s3:std", "irrep:s3:sign", "irrep:s3:trivial"][rng.gen_range(0..3)].to_string(),
        1 => {
            let n = rng.gen_range(2..=16);
            format!("irrep:c{n}:{}", rng.gen_range(0..n))
        }
        2 => format!("wh:{}", rng.gen_range(2..=4)),
        3 => format!("translation:c{}", rng.gen_range(1..=16)),
        4 => {
            let h = rng.gen_range(1..=4);
            let k = rng.gen_range(1..=16 / h);
            format!("cosets:c{}:c{h}", h * k)
        }
        _ => format!("twisted-dual:{}:{}", rng.gen_range(2..=4), rng.gen_range(0..4)),
    };
    let mut spec = builtin(&id).expect("random ids are valid builtins");
    spec.seed = seed;
    spec.id = format!("random:{seed}:{}", spec.id);
    spec
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        if !(t.rel > 0.0 && t.abs >= 0.0 && t.rel.is_finite() && t.abs.is_finite()) {
            return Err(Error::Config("tolerances must be positive and finite".into()));
        }
        for v in [self.expect.d, self.expect.d_inverse].into_iter().flatten() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config("expected D values must be positive".into()));
            }
        }
        match (self.group.kind, self.action.kind) {
            (GroupKind::Affine, ActionKindSpec::AffineWavelet) => Ok(()),
            (GroupKind::Affine, _) | (_, ActionKindSpec::AffineWavelet) => Err(Error::Config(
                "the affine group only carries the affine-wavelet action".into(),
            )),
            (GroupKind::Finite, _) => {
                let name = self
                    .group
                    .name
                    .as_deref()
                    .ok_or_else(|| Error::Config("[group] name is required for finite groups".into()))?;
                FiniteGroup::from_name(&normalize_group_name(name))?;
                Ok(())
            }
        }
    }

    pub fn is_quadrature(&self) -> bool {
        self.group.kind == GroupKind::Affine
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Builds the concrete model.
    pub fn build(&self) -> Result<Instance> {
        if self.is_quadrature() {
            let level = self.action.level.unwrap_or(0);
            return Ok(Instance::Affine(AffineWavelet::new(WaveletGrid::level(level))?));
        }
        let group = FiniteGroup::from_name(&normalize_group_name(self.group.name.as_deref().unwrap_or_default()))?;
        let haar = group.haar(self.haar.normalization)?;
        let a = &self.action;
        let (action, extra) = match a.kind {
            ActionKindSpec::Conjugation => {
                let rep = build_rep(&group, a.rep.as_deref().ok_or_else(|| missing("rep"))?)?;
                (conjugation_action(&rep)?, Extra::None)
            }
            ActionKindSpec::Translation => (translation_action(group)?, Extra::None),
            ActionKindSpec::Cosets => {
                let sub = subgroup_in(&group, a.subgroup.as_deref().ok_or_else(|| missing("subgroup"))?)?;
                (coset_action(group, &sub)?, Extra::None)
            }
            ActionKindSpec::Permutation => {
                let maps = a.point_maps.clone().ok_or_else(|| missing("point_maps"))?;
                let mu = self
                    .algebra
                    .trace_weights
                    .clone()
                    .unwrap_or_else(|| vec![1.0; maps.first().map_or(0, Vec::len)]);
                (permutation_action_unchecked(group, maps, mu)?, Extra::None)
            }
            ActionKindSpec::TwistedDual => {
                let n = a.n.ok_or_else(|| missing("n"))?;
                if group.cyclic_factors() != Some(&[n, n][..]) {
                    return Err(Error::Config(format!("twisted-dual:{n} needs group c{n}xc{n}")));
                }
                let t = TwistedAlgebra::new(n, a.m.unwrap_or(0))?;
                let (action, chars) = t.dual_action()?;
                (action, Extra::Twisted(Box::new(t), chars))
            }
            ActionKindSpec::Induced => {
                let sub = FiniteGroup::from_name(&normalize_group_name(a.subgroup.as_deref().ok_or_else(|| missing("subgroup"))?))?;
                let inner_rep = build_rep(&sub, a.inner.as_deref().ok_or_else(|| missing("inner"))?)?;
                let inner = conjugation_action(&inner_rep)?;
                let embed = group.canonical_embedding(&sub)?;
                let ind = InducedAction::new(inner, group, embed)?;
                (ind.action().clone(), Extra::Induced(Box::new(ind)))
            }
            ActionKindSpec::AffineWavelet => unreachable!("validated"),
        };
        if let Some(dims) = &self.algebra.block_dims {
            if dims.as_slice() != action.shape().block_dims() {
                return Err(Error::Config(format!(
                    "declared block_dims {dims:?} differ from the action's algebra {}",
                    action.shape()
                )));
            }
        }
        if let (Some(w), ActionKindSpec::Permutation) = (&self.algebra.trace_weights, a.kind) {
            AlgebraShape::diagonal(w.clone())?;
        }
        Ok(Instance::Finite(Box::new(FiniteInstance { action, haar, extra })))
    }
}

fn missing(field: &str) -> Error {
    Error::Config(format!("[action] {field} is required for this action kind"))
}

fn subgroup_in(group: &FiniteGroup, name: &str) -> Result<Vec<usize>> {
    let sub = FiniteGroup::from_name(&normalize_group_name(name))?;
    group.canonical_embedding(&sub)
}

fn build_rep(group: &FiniteGroup, rep: &str) -> Result<UnitaryRep> {
    let label = group.label();
    if let Some(n) = label.strip_prefix('s').and_then(|n| n.parse::<usize>().ok()) {
        return UnitaryRep::symmetric_irrep(n, rep);
    }
    if let Some(k) = rep.strip_prefix("chi") {
        let k = parse_usize(k, "chi<k>")?;
        let n = match group.cyclic_factors() {
            Some([n]) => *n,
            _ => return Err(Error::Config(format!("chi<k> needs a cyclic group, got {label}"))),
        };
        return UnitaryRep::cyclic_character(n, k);
    }
    match rep {
        "wh" | "pauli" => {
            let n = match group.cyclic_factors() {
                Some([a, b]) if a == b => *a,
                _ => return Err(Error::Config(format!("{rep} needs c<n>xc<n>, got {label}"))),
            };
            if rep == "pauli" && n != 2 {
                return Err(Error::Config("pauli needs c2xc2".into()));
            }
            UnitaryRep::finite_weyl_heisenberg(n)
        }
        "trivial" => UnitaryRep::trivial(group.clone(), 1),
        other => Err(Error::Config(format!("unknown representation '{other}' for {label}"))),
    }
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: &Path) -> Result<ScenarioSpec> {
    let text = std::fs::read_to_string(path)?;
    ScenarioSpec::from_toml(&text).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn save_scenario(spec: &ScenarioSpec, path: &Path) -> Result<()> {
    std::fs::write(path, spec.to_toml()?)?;
    Ok(())
}

/// A built scenario.
#[derive(Debug)]
pub enum Instance {
    Finite(Box<FiniteInstance>),
    Affine(AffineWavelet),
}

#[derive(Debug)]
pub struct FiniteInstance {
    pub action: Action,
    pub haar: HaarModel,
    pub extra: Extra,
}

#[derive(Debug)]
pub enum Extra {
    None,
    Twisted(Box<TwistedAlgebra>, CharacterTable),
    Induced(Box<InducedAction>),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_builds() {
        for spec in all_builtins() {
            let inst = spec.build().unwrap_or_else(|e| panic!("{}: {e}", spec.id));
            if let Instance::Finite(f) = inst {
                assert!(f.action.is_ergodic(), "{}", spec.id);
                assert!(f.action.trace_preservation(1e-10).pass, "{}", spec.id);
            }
        }
    }

    #[test]
    fn spelling_variants() {
        assert_eq!(builtin("translation:cyclic(6)").unwrap().id, "translation:c6");
        assert_eq!(builtin("cosets:cyclic(6):cyclic(3)").unwrap().expect.d_inverse, Some(3.0));
        assert_eq!(builtin("wh:4").unwrap().expect.d, Some(0.25));
        assert_eq!(builtin("irrep:s3:std").unwrap().expect.d, Some(2.0));
        assert!(matches!(builtin("nope:1"), Err(Error::Config(_))));
    }

    #[test]
    fn toml_round_trip() {
        for spec in all_builtins() {
            let text = spec.to_toml().unwrap();
            assert_eq!(ScenarioSpec::from_toml(&text).unwrap(), spec);
        }
    }

    #[test]
    fn defaults_are_injected() {
        let text = "id = \"x\"\n[group]\nkind = \"finite\"\nname = \"c3\"\n[action]\nkind = \"translation\"\n";
        let spec = ScenarioSpec::from_toml(text).unwrap();
        assert_eq!(spec.tolerances, Tolerances::default());
        assert_eq!(spec.haar.normalization, Normalization::Counting);
        assert_eq!(spec.seed, 1);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_groups() {
        let text = "id = \"x\"\ncolour = 1\n[group]\nkind = \"finite\"\nname = \"c3\"\n[action]\nkind = \"translation\"\n";
        assert!(ScenarioSpec::from_toml(text).is_err());
        let text = "id = \"x\"\n[group]\nkind = \"finite\"\nname = \"q8\"\n[action]\nkind = \"translation\"\n";
        let err = ScenarioSpec::from_toml(text).unwrap_err().to_string();
        assert!(err.contains("valid names"), "{err}");
    }

    #[test]
    fn random_scenarios_are_deterministic_and_small() {
        assert_eq!(random_scenario(1), random_scenario(1));
        for seed in 0..50 {
            let spec = random_scenario(seed);
            if let Instance::Finite(f) = spec.build().unwrap() {
                assert!(f.action.group().order() <= 16, "{}", spec.id);
                assert!(f.action.shape().block_dims().iter().all(|&d| d <= 6));
                assert!(f.action.is_ergodic(), "{}", spec.id);
            }
        }
    }
}
