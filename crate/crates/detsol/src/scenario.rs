//! Scenario execution: build a configured solution, sample it on the grid,
//! write CSV / PGM outputs with a metadata sidecar, and optionally run the
//! verifier.

use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::config::{cx_vec, OutputFormat, ScenarioConfig, SolutionConfig};
use crate::degen::{b_offdiag, PairData};
use crate::det::{theta_sum_oracle, AffineArg, DetMatrixSpec};
use crate::ds::{self, DsField, DsSolution};
use crate::error::{Error, Result};
use crate::nls::{self, NlsField, NlsSolution};
use crate::output::{write_csv, write_pgm_rasters, FieldGrid, RasterInfo};
use crate::verify::{
    ds_reality_check, ds_residual, nls_reality_check, nls_residual, AxisSpec, GridSpec,
};

/// A built solution of either equation.
pub enum BuiltSolution {
    Nls(NlsSolution),
    Ds(DsSolution),
}

impl BuiltSolution {
    pub fn components(&self) -> usize {
        match self {
            BuiltSolution::Nls(s) => s.components(),
            BuiltSolution::Ds(_) => 1,
        }
    }
}

/// Dispatches a [`SolutionConfig`] to the family builders.
pub fn build_solution(cfg: &SolutionConfig) -> Result<BuiltSolution> {
    fn sorted_fiber(map: &crate::map::RationalMap, value: Complex64) -> Result<Vec<Complex64>> {
        let mut f = map.fiber(value)?;
        f.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        Ok(f)
    }
    match cfg {
        SolutionConfig::NlsComplexified(c) => {
            let rmap = c.map.build()?;
            let fiber = sorted_fiber(&rmap, c.fiber_value.0)?;
            let local = c.local_param.resolve(&rmap, &fiber)?;
            Ok(BuiltSolution::Nls(nls::build_complexified(
                &nls::NlsGeneralParams {
                    map: rmap,
                    fiber_value: c.fiber_value.0,
                    anchor_index: c.anchor_index,
                    pairs: PairData::new(cx_vec(&c.u), cx_vec(&c.v))?,
                    d: cx_vec(&c.d),
                    amplitudes: cx_vec(&c.amplitudes),
                    theta: c.theta,
                    local_param: local,
                },
            )?))
        }
        SolutionConfig::NlsDark(c) => Ok(BuiltSolution::Nls(nls::build_dark(&nls::NlsDarkParams {
            map: c.map.build()?,
            fiber_value: c.fiber_value,
            anchor_index: c.anchor_index,
            u: cx_vec(&c.u),
            d: c.d.clone(),
            theta: c.theta,
        })?)),
        SolutionConfig::NlsBright(c) => {
            Ok(BuiltSolution::Nls(nls::build_bright(&nls::NlsBrightParams {
                anchors: c.anchors.clone(),
                gammas: c.gammas.clone(),
                v: cx_vec(&c.v),
                d_hat: cx_vec(&c.d_hat),
                theta: c.theta,
            })?))
        }
        SolutionConfig::NlsBreather(c) => Ok(BuiltSolution::Nls(nls::build_breather(
            &nls::NlsBreatherParams {
                map: c.map.build()?,
                fiber_value: c.fiber_value,
                anchor_index: c.anchor_index,
                u: cx_vec(&c.u),
                d_hat: cx_vec(&c.d_hat),
                theta: c.theta,
                apply_transform: c.apply_transform,
            },
        )?)),
        SolutionConfig::NlsRationalBreather(c) => {
            let rmap = c.map.build()?;
            let fiber = sorted_fiber(&rmap, Complex64::new(c.fiber_value, 0.0))?;
            let local = c.local_param.resolve(&rmap, &fiber)?;
            Ok(BuiltSolution::Nls(nls::build_rational_breather(
                &nls::NlsRationalParams {
                    map: rmap,
                    fiber_value: c.fiber_value,
                    anchor_index: c.anchor_index,
                    u: cx_vec(&c.u),
                    d_hat: cx_vec(&c.d_hat),
                    theta: c.theta,
                    local_param: local,
                },
            )?))
        }
        SolutionConfig::DsComplexified(c) => Ok(BuiltSolution::Ds(ds::build_ds_complexified(
            &ds::DsGeneralParams {
                wa: c.wa.0,
                wb: c.wb.0,
                kappa1: c.kappa1.0,
                kappa2: c.kappa2.0,
                h: c.h.0,
                pairs: PairData::new(cx_vec(&c.u), cx_vec(&c.v))?,
                d: cx_vec(&c.d),
                amplitude: c.amplitude.0,
                theta: c.theta,
            },
        )?)),
        SolutionConfig::Ds1Dark(c) => Ok(BuiltSolution::Ds(ds::build_ds_dark(&ds::DsDarkParams {
            variant: ds::DsDarkVariant::Ds1 {
                wa: c.wa,
                wb: c.wb,
                kappa1: c.kappa1,
                kappa2: c.kappa2,
                u: cx_vec(&c.u),
            },
            h: c.h,
            d: c.d.clone(),
            theta: c.theta,
        })?)),
        SolutionConfig::Ds2Dark(c) => Ok(BuiltSolution::Ds(ds::build_ds_dark(&ds::DsDarkParams {
            variant: ds::DsDarkVariant::Ds2Plus {
                wa: c.wa.0,
                kappa1: c.kappa1.0,
                u: c.u.clone(),
                v: c.v.clone(),
            },
            h: c.h,
            d: c.d.clone(),
            theta: c.theta,
        })?)),
        SolutionConfig::Ds1Bright(c) => Ok(BuiltSolution::Ds(ds::build_ds_bright(
            &ds::DsBrightParams {
                variant: ds::DsBrightVariant::Ds1 {
                    kappa1: c.kappa1,
                    kappa2: c.kappa2,
                    alpha_u_odd: cx_vec(&c.alpha_u_odd),
                    alpha_u_even: cx_vec(&c.alpha_u_even),
                },
                h: c.h,
                d_hat: cx_vec(&c.d_hat),
                theta: c.theta,
            },
        )?)),
        SolutionConfig::Ds2Bright(c) => Ok(BuiltSolution::Ds(ds::build_ds_bright(
            &ds::DsBrightParams {
                variant: ds::DsBrightVariant::Ds2Minus {
                    kappa1: c.kappa1.0,
                    alpha_u_odd: cx_vec(&c.alpha_u_odd),
                    alpha_v_odd: cx_vec(&c.alpha_v_odd),
                },
                h: c.h,
                d_hat: cx_vec(&c.d_hat),
                theta: c.theta,
            },
        )?)),
        SolutionConfig::DsBreather(c) => Ok(BuiltSolution::Ds(ds::build_ds_breather(
            &ds::DsBreatherParams {
                wa: c.wa,
                wb: c.wb,
                kappa1: c.kappa1,
                kappa2: c.kappa2,
                h: c.h,
                u: cx_vec(&c.u),
                d_hat: cx_vec(&c.d_hat),
                theta: c.theta,
            },
        )?)),
        SolutionConfig::DsRationalBreather(c) => Ok(BuiltSolution::Ds(ds::build_ds_rational(
            &ds::DsRationalParams {
                wa: c.wa,
                wb: c.wb,
                kappa1: c.kappa1,
                kappa2: c.kappa2,
                h: c.h,
                u: cx_vec(&c.u),
                d_hat: cx_vec(&c.d_hat),
                theta: c.theta,
            },
        )?)),
        SolutionConfig::DsDromion(c) => Ok(BuiltSolution::Ds(ds::build_dromion(
            &ds::DromionParams {
                wa: c.wa,
                wb: c.wb,
                kappa1: c.kappa1,
                kappa2: c.kappa2,
                h: c.h,
                theta: c.theta,
                alpha_u1: c.alpha_u1.0,
                alpha_v1: c.alpha_v1.0,
                alpha_u3: c.alpha_u3.0,
                alpha_v3: c.alpha_v3.0,
                d1: c.d1.0,
                d3: c.d3.0,
            },
        )?)),
        SolutionConfig::DsLump(c) => Ok(BuiltSolution::Ds(ds::build_lump(&ds::LumpParams {
            lambda: c.lambda.0,
            nu: c.nu.0,
            mu: c.mu.0,
            theta: c.theta,
            h: c.h,
        })?)),
    }
}

fn grid_spec(cfg: &ScenarioConfig) -> GridSpec {
    GridSpec::new(
        AxisSpec::new(cfg.grid.x.min, cfg.grid.x.max, cfg.grid.x.count),
        cfg.grid.y.map(|a| AxisSpec::new(a.min, a.max, a.count)),
        AxisSpec::new(cfg.grid.t.min, cfg.grid.t.max, cfg.grid.t.count),
    )
}

/// Samples the requested components (and phi for DS) on the grid.
pub fn sample_grid(cfg: &ScenarioConfig, sol: &BuiltSolution) -> Result<FieldGrid> {
    let gs = grid_spec(cfg);
    gs.validate()?;
    if cfg.solution.is_ds() && gs.y.is_none() {
        return Err(Error::Config("DS scenarios need a y axis".into()));
    }
    let comps: Vec<usize> = cfg
        .output
        .components
        .iter()
        .map(|&c1| {
            if c1 == 0 || c1 > sol.components() {
                Err(Error::Config(format!(
                    "component {c1} out of range 1..={}",
                    sol.components()
                )))
            } else {
                Ok(c1 - 1)
            }
        })
        .collect::<Result<_>>()?;
    let names: Vec<String> = comps.iter().map(|j| format!("psi{}", j + 1)).collect();

    let xs = gs.x.values();
    let ys = gs.y.map(|a| a.values()).unwrap_or_else(|| vec![0.0]);
    let ts = gs.t.values();
    let total = xs.len() * ys.len() * ts.len();
    let mut values = vec![vec![None; total]; comps.len()];
    let want_phi = cfg
        .output
        .quantities
        .contains(&crate::config::Quantity::Phi)
        && matches!(sol, BuiltSolution::Ds(_));
    let mut phi = if want_phi { Some(vec![None; total]) } else { None };

    let mut flat = 0usize;
    for &t in &ts {
        for &y in &ys {
            for &x in &xs {
                match sol {
                    BuiltSolution::Nls(s) => {
                        for (slot, &j) in comps.iter().enumerate() {
                            values[slot][flat] = s.psi(j, x, t).ok();
                        }
                    }
                    BuiltSolution::Ds(s) => {
                        for (slot, _) in comps.iter().enumerate() {
                            values[slot][flat] = s.psi(x, y, t).ok();
                        }
                        if let Some(p) = phi.as_mut() {
                            p[flat] = s.phi(x, y, t).ok();
                        }
                    }
                }
                flat += 1;
            }
        }
    }
    Ok(FieldGrid {
        x: gs.x,
        y: gs.y,
        t: gs.t,
        components: names,
        values,
        phi,
    })
}

/// What a run produced, echoed into metadata.json.
#[derive(Debug, Serialize, Deserialize)]
pub struct RunSummary {
    pub family: String,
    pub annotation: Option<String>,
    pub grid_points: usize,
    pub masked_points: usize,
    pub files: Vec<String>,
    pub rasters: Vec<RasterInfo>,
    pub verify: Option<VerifySummary>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VerifySummary {
    pub residual_relative: f64,
    pub residual_max_abs: f64,
    pub field_scale: f64,
    pub worst_point: (f64, f64, f64),
    pub excluded_points: usize,
    pub reality_relative: Option<f64>,
}

/// Runs the verifier on a built solution over the scenario grid.
pub fn verify_solution(cfg: &ScenarioConfig, sol: &BuiltSolution) -> Result<VerifySummary> {
    let gs = grid_spec(cfg);
    match sol {
        BuiltSolution::Nls(s) => {
            let r = nls_residual(s, &gs)?;
            let reality = match s.family() {
                nls::NlsFamily::Complexified => None,
                _ => Some(nls_reality_check(s, &gs)?.relative),
            };
            Ok(VerifySummary {
                residual_relative: r.relative,
                residual_max_abs: r.max_abs_residual,
                field_scale: r.field_scale,
                worst_point: r.worst_point,
                excluded_points: r.excluded_points,
                reality_relative: reality,
            })
        }
        BuiltSolution::Ds(s) => {
            let r = ds_residual(s, &gs)?;
            let reality = if s.is_complexified() {
                None
            } else {
                Some(ds_reality_check(s, &gs)?.relative)
            };
            Ok(VerifySummary {
                residual_relative: r.relative,
                residual_max_abs: r.max_abs_residual,
                field_scale: r.field_scale,
                worst_point: r.worst_point,
                excluded_points: r.excluded_points,
                reality_relative: reality,
            })
        }
    }
}

/// Builds, samples, writes files (CSV, rasters, metadata.json) and optionally
/// verifies. Returns the summary that was written to metadata.json.
pub fn run_scenario(cfg: &ScenarioConfig, out_dir: &Path, verify: bool) -> Result<RunSummary> {
    std::fs::create_dir_all(out_dir)?;
    let sol = build_solution(&cfg.solution)?;
    let grid = sample_grid(cfg, &sol)?;

    let mut files = Vec::new();
    let mut rasters = Vec::new();
    if cfg.output.formats.contains(&OutputFormat::Csv) && !grid.components.is_empty() {
        let path = out_dir.join("field.csv");
        write_csv(&grid, &cfg.output.quantities, &path)?;
        files.push("field.csv".to_string());
    }
    if cfg.output.formats.contains(&OutputFormat::Pgm) {
        rasters = write_pgm_rasters(&grid, out_dir)?;
        files.extend(rasters.iter().map(|r| r.file.clone()));
    }
    let verify_summary = if verify {
        Some(verify_solution(cfg, &sol)?)
    } else {
        None
    };
    let summary = RunSummary {
        family: cfg.solution.family_label().to_string(),
        annotation: cfg.annotation.clone(),
        grid_points: grid.points(),
        masked_points: grid.masked_count(),
        files,
        rasters,
        verify: verify_summary,
    };
    let meta = serde_json::to_string_pretty(&serde_json::json!({
        "config": cfg,
        "summary": &summary,
    }))?;
    std::fs::write(out_dir.join("metadata.json"), meta)?;
    Ok(summary)
}

/// Determinant-vs-theta-sum oracle over random pair data.
#[derive(Debug, Serialize)]
pub struct OracleReport {
    pub genus: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_relative_error: f64,
}

/// Runs the det(T) = exponential-sum comparison on random draws. Genus is
/// capped at 12 (the sum has 2^g terms).
pub fn oracle_cmd(genus: usize, trials: usize, seed: u64) -> Result<OracleReport> {
    const LIMIT: usize = 12;
    if genus == 0 || genus > LIMIT {
        return Err(Error::SizeLimit {
            genus,
            limit: LIMIT,
        });
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let pairs = loop {
            let u: Vec<Complex64> = (0..genus)
                .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                .collect();
            let v: Vec<Complex64> = (0..genus)
                .map(|_| Complex64::new(rng.gen_range(-2.0..2.0) + 4.5, rng.gen_range(-2.0..2.0)))
                .collect();
            if let Ok(p) = PairData::new(u, v) {
                break p;
            }
        };
        let z: Vec<Complex64> = (0..genus)
            .map(|_| Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-3.0..3.0)))
            .collect();
        let spec = DetMatrixSpec::theta(
            &pairs,
            z.iter().map(|&zk| AffineArg::constant(zk)).collect(),
        )?;
        let det = spec
            .eval_det(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 0.0)
            .value();
        let sum = theta_sum_oracle(&b_offdiag(&pairs)?, &z)?;
        let rel = (det - sum).norm() / sum.norm().max(1e-30);
        worst = worst.max(rel);
    }
    Ok(OracleReport {
        genus,
        trials,
        seed,
        max_relative_error: worst,
    })
}
