//! Scenario configuration: a structured-text (JSON) schema with explicit
//! complex-number encoding as [re, im] pairs. Unknown keys are rejected.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::degen::LocalParam;
use crate::error::{Error, Result};
use crate::map::{PointOnSphere, RationalMap};

/// Complex scalar on the wire: a two-element [re, im] array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Cx(pub Complex64);

impl From<[f64; 2]> for Cx {
    fn from(v: [f64; 2]) -> Self {
        Cx(Complex64::new(v[0], v[1]))
    }
}

impl From<Cx> for [f64; 2] {
    fn from(v: Cx) -> Self {
        [v.0.re, v.0.im]
    }
}

impl From<Complex64> for Cx {
    fn from(v: Complex64) -> Self {
        Cx(v)
    }
}

pub fn cx_vec(v: &[Cx]) -> Vec<Complex64> {
    v.iter().map(|c| c.0).collect()
}

pub fn to_cx_vec(v: &[Complex64]) -> Vec<Cx> {
    v.iter().map(|&c| Cx(c)).collect()
}

/// A sphere point on the wire: [re, im] or the string "inf".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpherePoint {
    Infinity(InfinityTag),
    Finite([f64; 2]),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InfinityTag {
    #[serde(rename = "inf")]
    Inf,
}

impl From<SpherePoint> for PointOnSphere {
    fn from(p: SpherePoint) -> Self {
        match p {
            SpherePoint::Finite(v) => PointOnSphere::Finite(Complex64::new(v[0], v[1])),
            SpherePoint::Infinity(_) => PointOnSphere::Infinity,
        }
    }
}

impl From<PointOnSphere> for SpherePoint {
    fn from(p: PointOnSphere) -> Self {
        match p {
            PointOnSphere::Finite(w) => SpherePoint::Finite([w.re, w.im]),
            PointOnSphere::Infinity => SpherePoint::Infinity(InfinityTag::Inf),
        }
    }
}

/// Rational map on the wire.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapConfig {
    pub zeros: Vec<SpherePoint>,
    pub poles: Vec<SpherePoint>,
    #[serde(default = "default_scale")]
    pub scale: Cx,
}

fn default_scale() -> Cx {
    Cx(Complex64::new(1.0, 0.0))
}

impl MapConfig {
    pub fn build(&self) -> Result<RationalMap> {
        RationalMap::new(
            self.zeros.iter().map(|&p| p.into()).collect(),
            self.poles.iter().map(|&p| p.into()).collect(),
            self.scale.0,
        )
    }

    pub fn from_map(map: &RationalMap) -> Self {
        MapConfig {
            zeros: map.zeros().iter().map(|&p| p.into()).collect(),
            poles: map.poles().iter().map(|&p| p.into()).collect(),
            scale: Cx(map.scale()),
        }
    }
}

/// Local-parameter convention on the wire.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum LocalParamConfig {
    #[default]
    FunctionShift,
    Uniformizer,
    /// k_a = c_a f with c_a = 1/f'(w_a), i.e. unit k'. The convention of the
    /// rational-breather figure examples.
    UnitScaled,
    Scaled {
        scales: Vec<Cx>,
    },
}

impl LocalParamConfig {
    /// Resolves to a [`LocalParam`], computing the unit-k' scales from the
    /// (sorted) fiber when needed.
    pub fn resolve(&self, map: &RationalMap, fiber: &[Complex64]) -> Result<LocalParam> {
        Ok(match self {
            LocalParamConfig::FunctionShift => LocalParam::FunctionShift,
            LocalParamConfig::Uniformizer => LocalParam::Uniformizer,
            LocalParamConfig::UnitScaled => {
                let scales = fiber
                    .iter()
                    .map(|&a| map.deriv(a, 1).map(|d| 1.0 / d))
                    .collect::<Result<Vec<_>>>()?;
                LocalParam::ScaledFunction { scales }
            }
            LocalParamConfig::Scaled { scales } => LocalParam::ScaledFunction {
                scales: cx_vec(scales),
            },
        })
    }
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NlsComplexifiedConfig {
    pub map: MapConfig,
    pub fiber_value: Cx,
    pub anchor_index: usize,
    pub u: Vec<Cx>,
    pub v: Vec<Cx>,
    pub d: Vec<Cx>,
    pub amplitudes: Vec<Cx>,
    #[serde(default)]
    pub theta: f64,
    #[serde(default)]
    pub local_param: LocalParamConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NlsDarkConfig {
    pub map: MapConfig,
    pub fiber_value: f64,
    pub anchor_index: usize,
    pub u: Vec<Cx>,
    pub d: Vec<f64>,
    #[serde(default)]
    pub theta: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NlsBrightConfig {
    pub anchors: Vec<f64>,
    pub gammas: Vec<f64>,
    pub v: Vec<Cx>,
    pub d_hat: Vec<Cx>,
    #[serde(default)]
    pub theta: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NlsBreatherConfig {
    pub map: MapConfig,
    pub fiber_value: f64,
    pub anchor_index: usize,
    pub u: Vec<Cx>,
    pub d_hat: Vec<Cx>,
    #[serde(default)]
    pub theta: f64,
    #[serde(default = "default_true")]
    pub apply_transform: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NlsRationalConfig {
    pub map: MapConfig,
    pub fiber_value: f64,
    pub anchor_index: usize,
    pub u: Vec<Cx>,
    pub d_hat: Vec<Cx>,
    #[serde(default)]
    pub theta: f64,
    #[serde(default)]
    pub local_param: LocalParamConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DsComplexifiedConfig {
    pub wa: Cx,
    pub wb: Cx,
    pub kappa1: Cx,
    pub kappa2: Cx,
    pub h: Cx,
    pub u: Vec<Cx>,
    pub v: Vec<Cx>,
    pub d: Vec<Cx>,
    pub amplitude: Cx,
    #[serde(default)]
    pub theta: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ds1DarkConfig {
    pub wa: f64,
    pub wb: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub h: f64,
    pub u: Vec<Cx>,
    pub d: Vec<f64>,
    #[serde(default)]
    pub theta: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ds2DarkConfig {
    pub wa: Cx,
    pub kappa1: Cx,
    pub h: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub d: Vec<f64>,
    #[serde(default)]
    pub theta: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ds1BrightConfig {
    pub kappa1: f64,
    pub kappa2: f64,
    pub h: f64,
    pub alpha_u_odd: Vec<Cx>,
    pub alpha_u_even: Vec<Cx>,
    pub d_hat: Vec<Cx>,
    #[serde(default)]
    pub theta: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ds2BrightConfig {
    pub kappa1: Cx,
    pub h: f64,
    pub alpha_u_odd: Vec<Cx>,
    pub alpha_v_odd: Vec<Cx>,
    pub d_hat: Vec<Cx>,
    #[serde(default)]
    pub theta: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DsBreatherConfig {
    pub wa: f64,
    pub wb: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub h: f64,
    pub u: Vec<Cx>,
    pub d_hat: Vec<Cx>,
    #[serde(default)]
    pub theta: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DsRationalConfig {
    pub wa: f64,
    pub wb: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub h: f64,
    pub u: Vec<Cx>,
    pub d_hat: Vec<Cx>,
    #[serde(default)]
    pub theta: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DsDromionConfig {
    pub wa: f64,
    pub wb: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub h: f64,
    #[serde(default)]
    pub theta: f64,
    pub alpha_u1: Cx,
    pub alpha_v1: Cx,
    pub alpha_u3: Cx,
    pub alpha_v3: Cx,
    pub d1: Cx,
    pub d3: Cx,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DsLumpConfig {
    pub lambda: Cx,
    pub nu: Cx,
    pub mu: Cx,
    #[serde(default)]
    pub theta: f64,
    pub h: f64,
}

/// The solution to build, tagged by family.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum SolutionConfig {
    NlsComplexified(NlsComplexifiedConfig),
    NlsDark(NlsDarkConfig),
    NlsBright(NlsBrightConfig),
    NlsBreather(NlsBreatherConfig),
    NlsRationalBreather(NlsRationalConfig),
    DsComplexified(DsComplexifiedConfig),
    Ds1Dark(Ds1DarkConfig),
    Ds2Dark(Ds2DarkConfig),
    Ds1Bright(Ds1BrightConfig),
    Ds2Bright(Ds2BrightConfig),
    DsBreather(DsBreatherConfig),
    DsRationalBreather(DsRationalConfig),
    DsDromion(DsDromionConfig),
    DsLump(DsLumpConfig),
}

impl SolutionConfig {
    pub fn family_label(&self) -> &'static str {
        match self {
            SolutionConfig::NlsComplexified(_) => "nls-complexified",
            SolutionConfig::NlsDark(_) => "nls-dark",
            SolutionConfig::NlsBright(_) => "nls-bright",
            SolutionConfig::NlsBreather(_) => "nls-breather",
            SolutionConfig::NlsRationalBreather(_) => "nls-rational-breather",
            SolutionConfig::DsComplexified(_) => "ds-complexified",
            SolutionConfig::Ds1Dark(_) => "ds1-dark",
            SolutionConfig::Ds2Dark(_) => "ds2-dark",
            SolutionConfig::Ds1Bright(_) => "ds1-bright",
            SolutionConfig::Ds2Bright(_) => "ds2-bright",
            SolutionConfig::DsBreather(_) => "ds-breather",
            SolutionConfig::DsRationalBreather(_) => "ds-rational-breather",
            SolutionConfig::DsDromion(_) => "ds-dromion",
            SolutionConfig::DsLump(_) => "ds-lump",
        }
    }

    pub fn is_ds(&self) -> bool {
        !matches!(
            self,
            SolutionConfig::NlsComplexified(_)
                | SolutionConfig::NlsDark(_)
                | SolutionConfig::NlsBright(_)
                | SolutionConfig::NlsBreather(_)
                | SolutionConfig::NlsRationalBreather(_)
        )
    }
}

/// All known family tags, for `list-families`.
pub const FAMILY_LABELS: &[&str] = &[
    "nls-complexified",
    "nls-dark",
    "nls-bright",
    "nls-breather",
    "nls-rational-breather",
    "ds-complexified",
    "ds1-dark",
    "ds2-dark",
    "ds1-bright",
    "ds2-bright",
    "ds-breather",
    "ds-rational-breather",
    "ds-dromion",
    "ds-lump",
];

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub x: AxisConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<AxisConfig>,
    pub t: AxisConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    Re,
    Im,
    Abs,
    Phase,
    Phi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    Pgm,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// 1-based component indices (n-NLS); DS solutions have one component.
    pub components: Vec<usize>,
    pub quantities: Vec<Quantity>,
    pub formats: Vec<OutputFormat>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            components: vec![1],
            quantities: vec![Quantity::Abs],
            formats: vec![OutputFormat::Csv, OutputFormat::Pgm],
        }
    }
}

/// A full scenario: what to build, where to sample it, what to write.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub solution: SolutionConfig,
    pub grid: GridConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub seed: u64,
    /// Free-form provenance note carried into the metadata sidecar.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotation: Option<String>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_lump_config() {
        let text = r#"{
            "solution": {
                "family": "ds-lump",
                "lambda": [0.4, -0.3],
                "nu": [0.8, 0.5],
                "mu": [0.2, 0.1],
                "theta": 0.15,
                "h": 0.6
            },
            "grid": {
                "x": {"min": -10, "max": 10, "count": 41},
                "y": {"min": -10, "max": 10, "count": 41},
                "t": {"min": -1, "max": 1, "count": 3}
            },
            "output": {
                "components": [1],
                "quantities": ["abs", "phi"],
                "formats": ["csv", "pgm"]
            },
            "seed": 7
        }"#;
        let cfg = ScenarioConfig::from_json(text).unwrap();
        assert_eq!(cfg.solution.family_label(), "ds-lump");
        let json = cfg.to_json().unwrap();
        let cfg2 = ScenarioConfig::from_json(&json).unwrap();
        assert_eq!(cfg2.seed, 7);
        assert!(cfg2.solution.is_ds());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let grid_typo = r#"{
            "solution": {
                "family": "ds-lump",
                "lambda": [0.4, -0.3],
                "nu": [0.8, 0.5],
                "mu": [0.2, 0.1],
                "h": 0.6
            },
            "grid": {
                "x": {"min": -10, "max": 10, "count": 41, "typo_key": 1},
                "t": {"min": -1, "max": 1, "count": 3}
            }
        }"#;
        assert!(ScenarioConfig::from_json(grid_typo).is_err());
        let solution_typo = r#"{
            "solution": {
                "family": "ds-lump",
                "lambda": [0.4, -0.3],
                "nu": [0.8, 0.5],
                "mu": [0.2, 0.1],
                "h": 0.6,
                "bogus": 1
            },
            "grid": {
                "x": {"min": -10, "max": 10, "count": 41},
                "t": {"min": -1, "max": 1, "count": 3}
            }
        }"#;
        assert!(ScenarioConfig::from_json(solution_typo).is_err());
    }

    #[test]
    fn sphere_points_parse_inf() {
        let m: MapConfig = serde_json::from_str(
            r#"{"zeros": [[1.0, 0.0], [-1.0, 0.0]], "poles": [[0.0, 0.0], "inf"]}"#,
        )
        .unwrap();
        let map = m.build().unwrap();
        assert!(map.poles()[1].is_infinite());
        assert_eq!(map.scale(), Complex64::new(1.0, 0.0));
    }
}
