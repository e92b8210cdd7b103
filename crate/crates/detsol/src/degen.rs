//! Degenerate constants of the genus-zero limit.
//!
//! When every handle of the spectral surface is pinched, the expansion
//! coefficients of the normalized differentials collapse to rational
//! expressions in the pair points (w_u, w_v) and the anchor points, scaled by
//! the first two derivatives of the chosen local parameter. Three local
//! parameter conventions are in play and mixing them silently is the main
//! correctness hazard, so k' and k'' are always supplied explicitly through
//! [`LocalParam`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::map::RationalMap;

/// Points closer than this (relative) are treated as coincident; the
/// formulas have simple poles there.
pub const COINCIDENCE_TOL: f64 = 1e-14;

/// Local parameter convention at an anchor point w_a.
#[derive(Debug, Clone)]
pub enum LocalParam {
    /// k_a(w) = f(w) - f(w_a): k' = f'(w_a), k'' = f''(w_a).
    FunctionShift,
    /// k_a(w) = c_a f(w), valid only where f(w_a) = 0; one scale per anchor.
    ScaledFunction { scales: Vec<Complex64> },
    /// k_a(w) = w - w_a: k' = 1, k'' = 0.
    Uniformizer,
}

impl LocalParam {
    /// (k'(w_a), k''(w_a)) for the anchor with the given index.
    pub fn derivs(&self, map: &RationalMap, anchor: Complex64, index: usize) -> Result<(Complex64, Complex64)> {
        match self {
            LocalParam::FunctionShift => {
                Ok((map.deriv(anchor, 1)?, map.deriv(anchor, 2)?))
            }
            LocalParam::ScaledFunction { scales } => {
                let c = *scales.get(index).ok_or_else(|| {
                    Error::Config(format!("missing local-parameter scale for anchor {index}"))
                })?;
                let fa = map.eval(anchor)?;
                if fa.norm() > 1e-10 {
                    return Err(Error::Constraint(format!(
                        "scaled local parameter requires f(w_a)=0, got |f| = {:.3e} at anchor {index}",
                        fa.norm()
                    )));
                }
                let k1 = c * map.deriv(anchor, 1)?;
                let k2 = c * map.deriv(anchor, 2)?;
                if k1.norm() == 0.0 {
                    return Err(Error::ZeroParameter("local parameter derivative k'"));
                }
                Ok((k1, k2))
            }
            LocalParam::Uniformizer => Ok((Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))),
        }
    }
}

/// Desingularized double points: one (u_k, v_k) pair per pinched handle.
#[derive(Debug, Clone, PartialEq)]
pub struct PairData {
    pub u: Vec<Complex64>,
    pub v: Vec<Complex64>,
}

impl PairData {
    pub fn new(u: Vec<Complex64>, v: Vec<Complex64>) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::Constraint(format!(
                "pair vectors differ in length: {} vs {}",
                u.len(),
                v.len()
            )));
        }
        for k in 0..u.len() {
            if (u[k] - v[k]).norm() < COINCIDENCE_TOL * u[k].norm().max(1.0) {
                return Err(Error::Coincidence {
                    context: "pair (u_k, v_k)",
                    a: u[k],
                    b: v[k],
                });
            }
        }
        Ok(PairData { u, v })
    }

    pub fn genus(&self) -> usize {
        self.u.len()
    }

    fn check_anchor(&self, anchor: Complex64, context: &'static str) -> Result<()> {
        let scale = anchor.norm().max(1.0);
        for &p in self.u.iter().chain(self.v.iter()) {
            if (anchor - p).norm() < COINCIDENCE_TOL * scale {
                return Err(Error::Coincidence {
                    context,
                    a: anchor,
                    b: p,
                });
            }
        }
        Ok(())
    }
}

/// V_{a,k} = (1/k') (1/(w_a - w_{v_k}) - 1/(w_a - w_{u_k})).
pub fn v_vector(anchor: Complex64, kprime: Complex64, pairs: &PairData) -> Result<Vec<Complex64>> {
    if kprime.norm() == 0.0 {
        return Err(Error::ZeroParameter("k'"));
    }
    pairs.check_anchor(anchor, "v_vector anchor")?;
    Ok(pairs
        .u
        .iter()
        .zip(&pairs.v)
        .map(|(&u, &v)| (1.0 / (anchor - v) - 1.0 / (anchor - u)) / kprime)
        .collect())
}

/// W_{a,k} = (1/k'^2)(-1/(w_a-w_{v_k})^2 + 1/(w_a-w_{u_k})^2) - (k''/k'^2) V_{a,k}.
pub fn w_vector(
    anchor: Complex64,
    kprime: Complex64,
    ksecond: Complex64,
    pairs: &PairData,
) -> Result<Vec<Complex64>> {
    let v = v_vector(anchor, kprime, pairs)?;
    let kp2 = kprime * kprime;
    Ok(pairs
        .u
        .iter()
        .zip(&pairs.v)
        .zip(&v)
        .map(|((&u, &vp), &vk)| {
            let main = (-1.0 / ((anchor - vp) * (anchor - vp))
                + 1.0 / ((anchor - u) * (anchor - u)))
                / kp2;
            main - ksecond / kp2 * vk
        })
        .collect())
}

/// r_k = log of the cross-ratio ((w_b-w_{v_k})(w_a-w_{u_k})) / ((w_b-w_{u_k})(w_a-w_{v_k})),
/// principal branch. Only exponentials of r enter the solutions, so the
/// branch choice is observationally irrelevant.
pub fn r_vector(a: Complex64, b: Complex64, pairs: &PairData) -> Result<Vec<Complex64>> {
    pairs.check_anchor(a, "r_vector point a")?;
    pairs.check_anchor(b, "r_vector point b")?;
    Ok(pairs
        .u
        .iter()
        .zip(&pairs.v)
        .map(|(&u, &v)| (((b - v) * (a - u)) / ((b - u) * (a - v))).ln())
        .collect())
}

/// Off-diagonal period-matrix entries
/// B_ik = ln[(w_{v_i}-w_{v_k})(w_{u_i}-w_{u_k}) / ((w_{v_i}-w_{u_k})(w_{u_i}-w_{v_k}))].
/// The diagonal diverges in the limit and is absorbed elsewhere; it is set to
/// zero here and must not be read.
pub fn b_offdiag(pairs: &PairData) -> Result<Vec<Vec<Complex64>>> {
    let g = pairs.genus();
    let zero = Complex64::new(0.0, 0.0);
    let mut m = vec![vec![zero; g]; g];
    for i in 0..g {
        for k in 0..g {
            if i == k {
                continue;
            }
            let (ui, vi) = (pairs.u[i], pairs.v[i]);
            let (uk, vk) = (pairs.u[k], pairs.v[k]);
            let scale = ui.norm().max(vi.norm()).max(1.0);
            for (a, b) in [(vi, uk), (ui, vk)] {
                if (a - b).norm() < COINCIDENCE_TOL * scale {
                    return Err(Error::Coincidence {
                        context: "b_offdiag cross-ratio",
                        a,
                        b,
                    });
                }
            }
            m[i][k] = (((vi - vk) * (ui - uk)) / ((vi - uk) * (ui - vk))).ln();
        }
    }
    Ok(m)
}

/// The pair constants of one (a, b) anchor pair.
#[derive(Debug, Clone, Copy)]
pub struct PairConstants {
    pub q2: Complex64,
    pub k1: Complex64,
    /// q1 = -q2 by construction.
    pub q1: Complex64,
    /// k2 = -k1^2 by construction.
    pub k2: Complex64,
}

/// q2(a,b) = 1/(k'(w_a) k'(w_b) (w_a-w_b)^2) and
/// K1(a,b) = 1/(k'(w_a)(w_b-w_a)) - k''(w_a)/(2 k'(w_a)^2),
/// plus the constructional identities q1 = -q2, K2 = -K1^2.
pub fn q2_k1(
    a: Complex64,
    b: Complex64,
    ka: (Complex64, Complex64),
    kb: (Complex64, Complex64),
) -> Result<PairConstants> {
    if (a - b).norm() < COINCIDENCE_TOL * a.norm().max(1.0) {
        return Err(Error::Coincidence {
            context: "q2_k1 anchors",
            a,
            b,
        });
    }
    let (ka1, ka2) = ka;
    let (kb1, _) = kb;
    if ka1.norm() == 0.0 || kb1.norm() == 0.0 {
        return Err(Error::ZeroParameter("k'"));
    }
    let q2 = 1.0 / (ka1 * kb1 * (a - b) * (a - b));
    let k1 = 1.0 / (ka1 * (b - a)) - ka2 / (2.0 * ka1 * ka1);
    Ok(PairConstants {
        q2,
        k1,
        q1: -q2,
        k2: -k1 * k1,
    })
}
