//! Two dark solitons of the scalar NLS equation, built from the rational map
//! f(w) = (w^2 - 1)/(4 w^2) with conjugate pair points on the fibers over
//! 1/2 and 5/4. Prints the sign vector, the background amplitude, an ASCII
//! profile, and an independent finite-difference residual.

use detsol::map::{PointOnSphere, RationalMap};
use detsol::nls::{build_dark, NlsDarkParams, NlsField};
use detsol::verify::{nls_dark_asymptotics, nls_residual, AxisSpec, GridSpec};
use detsol::Complex64;

fn main() -> detsol::Result<()> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let map = RationalMap::new(
        vec![PointOnSphere::finite(1.0, 0.0), PointOnSphere::finite(-1.0, 0.0)],
        vec![PointOnSphere::finite(0.0, 0.0), PointOnSphere::finite(0.0, 0.0)],
        c(0.25, 0.0),
    )?;
    // fibers over real values v > 1/4 are conjugate pairs +- i/sqrt(4v - 1)
    let sol = build_dark(&NlsDarkParams {
        map,
        fiber_value: 0.0,
        anchor_index: 0,
        u: vec![c(0.0, 1.0), c(0.0, 0.5)],
        d: vec![1.5, -2.0],
        theta: 0.0,
    })?;

    println!("dark 2-soliton of NLS^s with s = {:?}", sol.signs());
    println!("background amplitude A = {}", sol.amplitude(0));

    println!("\n|psi(x, 0)| profile:");
    for row in 0..16 {
        let x = -8.0 + row as f64;
        let m = sol.psi(0, x, 0.0)?.norm();
        let bar = "#".repeat((m * 40.0).round() as usize);
        println!("  x = {x:5.1}  |psi| = {m:.4}  {bar}");
    }

    let grid = GridSpec::new(
        AxisSpec::new(-6.0, 6.0, 41),
        None,
        AxisSpec::new(-2.0, 2.0, 41),
    );
    let report = nls_residual(&sol, &grid)?;
    println!("\nfinite-difference residual (relative): {:.3e}", report.relative);

    let bg: Vec<f64> = (0..sol.components()).map(|j| sol.amplitude(j)).collect();
    let asym = nls_dark_asymptotics(&sol, &bg, 50.0, 0.0)?;
    println!(
        "| |psi| - A | at x = +-50: {:.3e}",
        asym.per_component[0]
    );
    Ok(())
}
