//! The Peregrine breather as the N = 1 rational reduction: a polynomial
//! quotient localized in both x and t, with peak-to-background ratio exactly
//! 3. The pair-merge point solves (w - a_1)^-2 + (w - a_2)^-2 = 0.

use detsol::degen::LocalParam;
use detsol::map::RationalMap;
use detsol::nls::{build_rational_breather, pair_merge_polynomial, NlsField, NlsRationalParams};
use detsol::Complex64;

fn main() -> detsol::Result<()> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let zeros = [c(-0.5, 0.0), c(0.5, 0.0)]; // sorted order
    let map = RationalMap::polynomial_from_zeros(&zeros, c(1.0, 0.0))?;
    let scales: Vec<Complex64> = zeros
        .iter()
        .map(|&a| map.deriv(a, 1).map(|d| 1.0 / d))
        .collect::<detsol::Result<_>>()?;
    let local = LocalParam::ScaledFunction { scales };

    // the merge equation and its conjugate root pair
    let poly = pair_merge_polynomial(&map, 0.0, &local)?;
    let mut roots = poly.roots()?;
    roots.retain(|r| r.im > 0.0);
    println!("pair-merge points: {roots:?}");

    let sol = build_rational_breather(&NlsRationalParams {
        map,
        fiber_value: 0.0,
        anchor_index: 1,
        u: vec![roots[0]],
        d_hat: vec![c(0.0, 0.0)],
        theta: 0.0,
        local_param: local,
    })?;

    let peak = sol.psi(0, 0.0, 0.0)?.norm();
    let background = sol.amplitude(0);
    println!("background amplitude: {background}");
    println!("peak |psi(0,0)|:      {peak}");
    println!("peak / background:    {:.12}", peak / background);

    println!("\n|psi(x, 0)| through the peak:");
    for k in 0..17 {
        let x = -2.0 + 0.25 * k as f64;
        let m = sol.psi(0, x, 0.0)?.norm();
        println!("  x = {x:5.2}  {:<50}", "#".repeat((m * 16.0).round() as usize));
    }
    println!("\n|psi(0, t)| through the peak:");
    for k in 0..17 {
        let t = -2.0 + 0.25 * k as f64;
        let m = sol.psi(0, 0.0, t)?.norm();
        println!("  t = {t:5.2}  {:<50}", "#".repeat((m * 16.0).round() as usize));
    }
    Ok(())
}
