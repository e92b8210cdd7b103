//! Independent numerical verification.
//!
//! The verifier differentiates sampled field values with 4th-order central
//! stencils and never reads the solutions' internal constants, so a passing
//! residual is an independent statement that the built field solves its PDE.
//! Singular grid points (vanishing denominators) are excluded; more than 1%
//! of them is an error.

use num_complex::Complex64;

use crate::ds::DsField;
use crate::error::{Error, Result};
use crate::nls::NlsField;

/// One uniformly sampled axis.
#[derive(Debug, Clone, Copy)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn new(min: f64, max: f64, count: usize) -> Self {
        AxisSpec { min, max, count }
    }

    pub fn step(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.max - self.min) / (self.count - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.count).map(|k| self.min + h * k as f64).collect()
    }
}

/// Evaluation grid: x (and optionally y) plus t.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub x: AxisSpec,
    pub y: Option<AxisSpec>,
    pub t: AxisSpec,
    /// Upper bound on the finite-difference stencil step. Residuals are
    /// sampled at the grid points but differentiated with
    /// min(grid step, cap), which keeps 4th-order truncation at roughly
    /// cap^4 * (field frequency)^6 / 90 without tying accuracy to the grid
    /// resolution. Each point is additionally differentiated at step/50 and
    /// the smaller residual wins, so fast-oscillating fields (where the
    /// coarse step is truncation-limited) still verify; a genuine equation
    /// defect is step-independent and survives the minimum.
    pub stencil_cap: f64,
}

/// Ratio between the primary and refinement stencil steps.
const STENCIL_REFINE: f64 = 50.0;

impl GridSpec {
    pub fn new(x: AxisSpec, y: Option<AxisSpec>, t: AxisSpec) -> Self {
        GridSpec {
            x,
            y,
            t,
            stencil_cap: 1e-3,
        }
    }

    fn stencil_step(&self, axis: &AxisSpec) -> f64 {
        axis.step().min(self.stencil_cap)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.stencil_cap > 0.0) {
            return Err(Error::Config("stencil cap must be positive".into()));
        }
        for (name, axis) in [("x", Some(self.x)), ("y", self.y), ("t", Some(self.t))] {
            if let Some(a) = axis {
                if a.count < 2 {
                    return Err(Error::Config(format!("axis {name} needs at least 2 points")));
                }
                if !(a.max > a.min) {
                    return Err(Error::Config(format!("axis {name}: max must exceed min")));
                }
            }
        }
        Ok(())
    }

    pub fn points(&self) -> usize {
        self.x.count * self.y.map_or(1, |a| a.count) * self.t.count
    }
}

/// Outcome of a residual sweep.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub max_abs_residual: f64,
    pub field_scale: f64,
    pub relative: f64,
    pub worst_point: (f64, f64, f64),
    pub stencil_order: usize,
    pub steps: (f64, f64, f64),
    pub excluded_points: usize,
    pub total_points: usize,
}

impl ResidualReport {
    fn from_samples(
        max_abs: f64,
        scale: f64,
        worst: (f64, f64, f64),
        steps: (f64, f64, f64),
        excluded: usize,
        total: usize,
    ) -> Self {
        let field_scale = scale.max(1e-30);
        ResidualReport {
            max_abs_residual: max_abs,
            field_scale,
            relative: max_abs / field_scale,
            worst_point: worst,
            stencil_order: 4,
            steps,
            excluded_points: excluded,
            total_points: total,
        }
    }
}

/// Reality-condition report: max |psi* - s conj(psi)| relative to the field.
#[derive(Debug, Clone)]
pub struct RealityReport {
    pub max_abs: f64,
    pub field_scale: f64,
    pub relative: f64,
}

/// Asymptotics report, per component.
#[derive(Debug, Clone)]
pub struct AsymptoticsReport {
    pub per_component: Vec<f64>,
}

// fourth-order central stencils
fn d1<F: FnMut(f64) -> Result<Complex64>>(mut f: F, h: f64) -> Result<Complex64> {
    Ok((f(-2.0 * h)? - 8.0 * f(-h)? + 8.0 * f(h)? - f(2.0 * h)?) / (12.0 * h))
}

fn d2<F: FnMut(f64) -> Result<Complex64>>(mut f: F, h: f64) -> Result<Complex64> {
    Ok(
        (-f(2.0 * h)? + 16.0 * f(h)? - 30.0 * f(0.0)? + 16.0 * f(-h)? - f(-2.0 * h)?)
            / (12.0 * h * h),
    )
}

fn check_exclusions(excluded: usize, total: usize) -> Result<()> {
    if excluded * 100 > total {
        return Err(Error::TooManySingular { excluded, total });
    }
    Ok(())
}

/// Residual of the (complexified) n-NLS system on a grid. For physical
/// solutions psi* = s conj(psi) this is exactly the n-NLS^s residual.
pub fn nls_residual<S: NlsField + ?Sized>(sol: &S, grid: &GridSpec) -> Result<ResidualReport> {
    grid.validate()?;
    let n = sol.components();
    let hx = grid.stencil_step(&grid.x);
    let ht = grid.stencil_step(&grid.t);
    let mut max_abs = 0.0f64;
    let mut scale_m = 0.0f64;
    let mut worst = (0.0, 0.0, 0.0);
    let mut excluded = 0usize;
    let mut total = 0usize;

    for &x in &grid.x.values() {
        for &t in &grid.t.values() {
            total += 1;
            let mut point = |hx: f64, ht: f64| -> Result<f64> {
                let mut nonlinear = Complex64::new(0.0, 0.0);
                let mut psis = Vec::with_capacity(n);
                let mut stars = Vec::with_capacity(n);
                for j in 0..n {
                    let p = sol.psi(j, x, t)?;
                    let ps = sol.psi_star(j, x, t)?;
                    nonlinear += p * ps;
                    psis.push(p);
                    stars.push(ps);
                }
                let mut local_max = 0.0f64;
                for j in 0..n {
                    scale_m = scale_m.max(psis[j].norm()).max(stars[j].norm());
                    let psi_t = d1(|s| sol.psi(j, x, t + s), ht)?;
                    let psi_xx = d2(|s| sol.psi(j, x + s, t), hx)?;
                    let r = Complex64::new(0.0, 1.0) * psi_t + psi_xx + 2.0 * nonlinear * psis[j];
                    local_max = local_max.max(r.norm());
                    let star_t = d1(|s| sol.psi_star(j, x, t + s), ht)?;
                    let star_xx = d2(|s| sol.psi_star(j, x + s, t), hx)?;
                    let rs = -Complex64::new(0.0, 1.0) * star_t
                        + star_xx
                        + 2.0 * nonlinear * stars[j];
                    local_max = local_max.max(rs.norm());
                }
                Ok(local_max)
            };
            let both = point(hx, ht).and_then(|coarse| {
                point(hx / STENCIL_REFINE, ht / STENCIL_REFINE).map(|fine| coarse.min(fine))
            });
            match both {
                Ok(r) => {
                    if r > max_abs {
                        max_abs = r;
                        worst = (x, 0.0, t);
                    }
                }
                Err(Error::SingularPoint) => excluded += 1,
                Err(e) => return Err(e),
            }
        }
    }
    check_exclusions(excluded, total)?;
    let scale = scale_m * (1.0 + scale_m * scale_m);
    Ok(ResidualReport::from_samples(
        max_abs,
        scale,
        worst,
        (hx, 0.0, ht),
        excluded,
        total,
    ))
}

/// Residual of both DS equations on an (x, y, t) grid. Derivatives are taken
/// in the physical variables and combined per variant:
/// DS1: i psi_t + (psi_xx + psi_yy) + 2 phi psi and
///      (phi_xx - phi_yy) + ((psi psi*)_xx + (psi psi*)_yy);
/// DS2: i psi_t + (psi_xx - psi_yy) + 2 phi psi and
///      (phi_xx + phi_yy) + ((psi psi*)_xx - (psi psi*)_yy).
pub fn ds_residual<S: DsField + ?Sized>(sol: &S, grid: &GridSpec) -> Result<ResidualReport> {
    grid.validate()?;
    let y_axis = grid
        .y
        .ok_or_else(|| Error::Config("DS residual needs a y axis".into()))?;
    let hx = grid.stencil_step(&grid.x);
    let hy = grid.stencil_step(&y_axis);
    let ht = grid.stencil_step(&grid.t);
    let is_ds2 = sol.variant().is_ds2();
    let spatial_sign = if is_ds2 { -1.0 } else { 1.0 };
    let complexified = sol.is_complexified();
    let rho = sol.variant().rho() as f64;

    let mut max_abs = 0.0f64;
    let mut scale_m = 0.0f64;
    let mut worst = (0.0, 0.0, 0.0);
    let mut excluded = 0usize;
    let mut total = 0usize;

    let pp = |x: f64, y: f64, t: f64| -> Result<Complex64> {
        if complexified {
            Ok(sol.psi(x, y, t)? * sol.psi_star(x, y, t)?)
        } else {
            Ok(Complex64::new(rho * sol.psi(x, y, t)?.norm_sqr(), 0.0))
        }
    };

    for &x in &grid.x.values() {
        for &y in &y_axis.values() {
            for &t in &grid.t.values() {
                total += 1;
                let mut point = |hx: f64, hy: f64, ht: f64| -> Result<f64> {
                    let psi = sol.psi(x, y, t)?;
                    let star = sol.psi_star(x, y, t)?;
                    let phi = sol.phi(x, y, t)?;
                    scale_m = scale_m.max(psi.norm()).max(star.norm());

                    let psi_t = d1(|s| sol.psi(x, y, t + s), ht)?;
                    let psi_xx = d2(|s| sol.psi(x + s, y, t), hx)?;
                    let psi_yy = d2(|s| sol.psi(x, y + s, t), hy)?;
                    let r1 = Complex64::new(0.0, 1.0) * psi_t
                        + (psi_xx + spatial_sign * psi_yy)
                        + 2.0 * phi * psi;

                    let star_t = d1(|s| sol.psi_star(x, y, t + s), ht)?;
                    let star_xx = d2(|s| sol.psi_star(x + s, y, t), hx)?;
                    let star_yy = d2(|s| sol.psi_star(x, y + s, t), hy)?;
                    let r1s = -Complex64::new(0.0, 1.0) * star_t
                        + (star_xx + spatial_sign * star_yy)
                        + 2.0 * phi * star;

                    let phi_xx = d2(|s| sol.phi(x + s, y, t), hx)?;
                    let phi_yy = d2(|s| sol.phi(x, y + s, t), hy)?;
                    let pp_xx = d2(|s| pp(x + s, y, t), hx)?;
                    let pp_yy = d2(|s| pp(x, y + s, t), hy)?;
                    let r2 = (phi_xx - spatial_sign * phi_yy)
                        + (pp_xx + spatial_sign * pp_yy);
                    Ok(r1.norm().max(r1s.norm()).max(r2.norm()))
                };
                let both = point(hx, hy, ht).and_then(|coarse| {
                    point(
                        hx / STENCIL_REFINE,
                        hy / STENCIL_REFINE,
                        ht / STENCIL_REFINE,
                    )
                    .map(|fine| coarse.min(fine))
                });
                match both {
                    Ok(r) => {
                        if r > max_abs {
                            max_abs = r;
                            worst = (x, y, t);
                        }
                    }
                    Err(Error::SingularPoint) => excluded += 1,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    check_exclusions(excluded, total)?;
    let scale = scale_m * (1.0 + scale_m * scale_m);
    Ok(ResidualReport::from_samples(
        max_abs,
        scale,
        worst,
        (hx, hy, ht),
        excluded,
        total,
    ))
}

/// Max over the grid of |psi*_j - s_j conj(psi_j)| relative to the field
/// scale.
pub fn nls_reality_check<S: NlsField + ?Sized>(sol: &S, grid: &GridSpec) -> Result<RealityReport> {
    grid.validate()?;
    let mut max_abs = 0.0f64;
    let mut scale = 0.0f64;
    for &x in &grid.x.values() {
        for &t in &grid.t.values() {
            for j in 0..sol.components() {
                let (psi, star) = match (sol.psi(j, x, t), sol.psi_star(j, x, t)) {
                    (Ok(p), Ok(s)) => (p, s),
                    _ => continue,
                };
                let target = Complex64::new(sol.signs()[j] as f64, 0.0) * psi.conj();
                max_abs = max_abs.max((star - target).norm());
                scale = scale.max(psi.norm());
            }
        }
    }
    let field_scale = scale.max(1e-30);
    Ok(RealityReport {
        max_abs,
        field_scale,
        relative: max_abs / field_scale,
    })
}

/// Max over the grid of |psi* - rho conj(psi)| (and the imaginary part of
/// phi) relative to the field scale.
pub fn ds_reality_check<S: DsField + ?Sized>(sol: &S, grid: &GridSpec) -> Result<RealityReport> {
    grid.validate()?;
    let y_axis = grid
        .y
        .ok_or_else(|| Error::Config("DS reality check needs a y axis".into()))?;
    let rho = sol.variant().rho() as f64;
    let mut max_abs = 0.0f64;
    let mut scale = 0.0f64;
    for &x in &grid.x.values() {
        for &y in &y_axis.values() {
            for &t in &grid.t.values() {
                let (psi, star, phi) =
                    match (sol.psi(x, y, t), sol.psi_star(x, y, t), sol.phi(x, y, t)) {
                        (Ok(p), Ok(s), Ok(f)) => (p, s, f),
                        _ => continue,
                    };
                let target = Complex64::new(rho, 0.0) * psi.conj();
                max_abs = max_abs.max((star - target).norm()).max(phi.im.abs());
                scale = scale.max(psi.norm()).max(phi.norm());
            }
        }
    }
    let field_scale = scale.max(1e-30);
    Ok(RealityReport {
        max_abs,
        field_scale,
        relative: max_abs / field_scale,
    })
}

/// Dark asymptotics: | |psi_j(+-radius, t)| - A_j | per component, maximized
/// over both signs; background amplitudes are supplied by the caller.
pub fn nls_dark_asymptotics<S: NlsField + ?Sized>(
    sol: &S,
    background: &[f64],
    radius: f64,
    t: f64,
) -> Result<AsymptoticsReport> {
    let mut per = Vec::with_capacity(sol.components());
    for j in 0..sol.components() {
        let mut dev = 0.0f64;
        for &x in &[radius, -radius] {
            dev = dev.max((sol.psi(j, x, t)?.norm() - background[j]).abs());
        }
        per.push(dev);
    }
    Ok(AsymptoticsReport { per_component: per })
}

/// Bright/rational localization: |psi_j(+-radius, t)| per component.
pub fn nls_decay_asymptotics<S: NlsField + ?Sized>(
    sol: &S,
    radius: f64,
    t: f64,
) -> Result<AsymptoticsReport> {
    let mut per = Vec::with_capacity(sol.components());
    for j in 0..sol.components() {
        let mut m = 0.0f64;
        for &x in &[radius, -radius] {
            m = m.max(sol.psi(j, x, t)?.norm());
        }
        per.push(m);
    }
    Ok(AsymptoticsReport { per_component: per })
}

/// Plane-directional decay for DS solutions: max |psi| over the four axis
/// rays and both diagonals at the given radius.
pub fn ds_decay_asymptotics<S: DsField + ?Sized>(
    sol: &S,
    radius: f64,
    t: f64,
) -> Result<AsymptoticsReport> {
    let dirs = [
        (1.0, 0.0),
        (-1.0, 0.0),
        (0.0, 1.0),
        (0.0, -1.0),
        (0.7071067811865476, 0.7071067811865476),
        (-0.7071067811865476, 0.7071067811865476),
        (0.7071067811865476, -0.7071067811865476),
        (-0.7071067811865476, -0.7071067811865476),
    ];
    let mut m = 0.0f64;
    for (dx, dy) in dirs {
        m = m.max(sol.psi(radius * dx, radius * dy, t)?.norm());
    }
    Ok(AsymptoticsReport {
        per_component: vec![m],
    })
}
