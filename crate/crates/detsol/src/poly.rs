//! Complex polynomials with a simultaneous-iteration root finder.
//!
//! The Aberth–Ehrlich iteration refines all roots at once and is robust for
//! the modest degrees produced by fiber and critical-point equations
//! (at most a few hundred). Every root is polished by Newton steps and
//! checked against a residual bound before it is returned.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative residual bound for accepted roots: |p(r)| <= RESIDUAL_FACTOR * max|coeff| * max(1,|r|)^deg.
const RESIDUAL_FACTOR: f64 = 1e-12;
const MAX_ITERATIONS: usize = 200;

/// Dense complex polynomial, coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq)]
pub struct CxPolynomial {
    coeffs: Vec<Complex64>,
}

impl CxPolynomial {
    /// Builds a polynomial from ascending-degree coefficients, trimming
    /// exactly-zero leading terms.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last() == Some(&Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        CxPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        CxPolynomial::new(vec![Complex64::new(0.0, 0.0)])
    }

    pub fn one() -> Self {
        CxPolynomial::new(vec![Complex64::new(1.0, 0.0)])
    }

    /// The monic factor (w - root).
    pub fn linear(root: Complex64) -> Self {
        CxPolynomial::new(vec![-root, Complex64::new(1.0, 0.0)])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].norm() == 0.0
    }

    /// Horner evaluation.
    pub fn eval(&self, w: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * w + c;
        }
        acc
    }

    pub fn derivative(&self) -> CxPolynomial {
        if self.coeffs.len() == 1 {
            return CxPolynomial::zero();
        }
        let d: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        CxPolynomial::new(d)
    }

    pub fn mul(&self, other: &CxPolynomial) -> CxPolynomial {
        if self.is_zero() || other.is_zero() {
            return CxPolynomial::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CxPolynomial::new(out)
    }

    pub fn add(&self, other: &CxPolynomial) -> CxPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            out[i] += a;
        }
        for (i, &b) in other.coeffs.iter().enumerate() {
            out[i] += b;
        }
        CxPolynomial::new(out)
    }

    pub fn scale(&self, s: Complex64) -> CxPolynomial {
        CxPolynomial::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Product of monic linear factors over the given roots.
    pub fn from_roots(roots: &[Complex64]) -> CxPolynomial {
        let mut p = CxPolynomial::one();
        for &r in roots {
            p = p.mul(&CxPolynomial::linear(r));
        }
        p
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// All complex roots with multiplicity, via Aberth-Ehrlich simultaneous
    /// iteration followed by Newton polishing. Roots at zero are deflated
    /// first so clustered iterates cannot stall on them.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        if self.degree() == 0 {
            return Ok(Vec::new());
        }
        let scale = self.max_coeff_norm();
        if scale == 0.0 {
            return Err(Error::NonConvergence {
                iterations: 0,
                degree: self.degree(),
            });
        }
        // strip trailing zero coefficients: roots at the origin
        let mut zeros_at_origin = 0;
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > 1 && coeffs[0].norm() <= scale * 1e-300 {
            coeffs.remove(0);
            zeros_at_origin += 1;
        }
        let p = CxPolynomial::new(coeffs.iter().map(|&c| c / scale).collect());
        let mut roots = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
        if p.degree() > 0 {
            roots.extend(aberth_ehrlich(&p)?);
        }
        // polish against the original polynomial and verify residuals
        let dp = self.derivative();
        for r in roots.iter_mut() {
            *r = newton_polish(self, &dp, *r);
            let bound = RESIDUAL_FACTOR * scale * r.norm().max(1.0).powi(self.degree() as i32);
            if self.eval(*r).norm() > bound {
                return Err(Error::NonConvergence {
                    iterations: MAX_ITERATIONS,
                    degree: self.degree(),
                });
            }
        }
        Ok(roots)
    }

    /// True when some pair of roots lies within `tol * coefficient scale`,
    /// which is how repeated roots of fiber polynomials are detected.
    pub fn has_clustered_roots(roots: &[Complex64], tol: f64) -> bool {
        for i in 0..roots.len() {
            for k in (i + 1)..roots.len() {
                if (roots[i] - roots[k]).norm() < tol {
                    return true;
                }
            }
        }
        false
    }
}

fn newton_polish(p: &CxPolynomial, dp: &CxPolynomial, mut w: Complex64) -> Complex64 {
    for _ in 0..8 {
        let pv = p.eval(w);
        if pv.norm() == 0.0 {
            break;
        }
        let dv = dp.eval(w);
        if dv.norm() == 0.0 {
            break;
        }
        let step = pv / dv;
        w -= step;
        if step.norm() <= 1e-16 * w.norm().max(1.0) {
            break;
        }
    }
    w
}

/// Core Aberth-Ehrlich loop on a normalized polynomial with p(0) != 0.
fn aberth_ehrlich(p: &CxPolynomial) -> Result<Vec<Complex64>> {
    let n = p.degree();
    let dp = p.derivative();
    let lead = p.coeffs()[n];

    // Cauchy-style radius for the initial circle of guesses.
    let radius = 1.0
        + p.coeffs()[..n]
            .iter()
            .map(|c| (*c / lead).norm())
            .fold(0.0, f64::max);
    let mut w: Vec<Complex64> = (0..n)
        .map(|k| {
            // slight irrational offset avoids symmetric stalemates
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.41;
            Complex64::from_polar(radius * 0.8, angle)
        })
        .collect();

    for _ in 0..MAX_ITERATIONS {
        let mut moved = 0.0f64;
        for i in 0..n {
            let pv = p.eval(w[i]);
            let dv = dp.eval(w[i]);
            let newton = if dv.norm() > 0.0 {
                pv / dv
            } else {
                Complex64::new(1e-8, 1e-8)
            };
            let mut repulse = Complex64::new(0.0, 0.0);
            for k in 0..n {
                if k != i {
                    let diff = w[i] - w[k];
                    if diff.norm() > 0.0 {
                        repulse += 1.0 / diff;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulse;
            let step = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            w[i] -= step;
            moved = moved.max(step.norm() / w[i].norm().max(1.0));
        }
        if moved < 1e-14 {
            return Ok(w);
        }
    }
    // accept if residuals are already small; the caller re-validates anyway
    let scale = p.max_coeff_norm();
    if w.iter().all(|&r| {
        p.eval(r).norm() <= 1e-10 * scale * r.norm().max(1.0).powi(p.degree() as i32)
    }) {
        return Ok(w);
    }
    Err(Error::NonConvergence {
        iterations: MAX_ITERATIONS,
        degree: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quadratic_roots_plus_minus_i() {
        // w^2 + 1
        let p = CxPolynomial::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let mut roots = p.roots().unwrap();
        roots.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((roots[0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((roots[1] - c(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn residual_bound_holds_for_random_polynomials() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for deg in [3usize, 5, 8, 12] {
            let coeffs: Vec<Complex64> = (0..=deg)
                .map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                .collect();
            let p = CxPolynomial::new(coeffs);
            let roots = p.roots().unwrap();
            assert_eq!(roots.len(), p.degree());
            let scale = p.max_coeff_norm();
            for r in roots {
                let bound = 1e-12 * scale * r.norm().max(1.0).powi(p.degree() as i32);
                assert!(p.eval(r).norm() <= bound, "residual too large");
            }
        }
    }

    #[test]
    fn pair_merge_numerator_contains_paper_roots() {
        // numerator of sum_{i=1}^{5} (w - a_i)^{-2} with a = (3,5,7,0,4)
        let a = [3.0, 5.0, 7.0, 0.0, 4.0];
        let mut num = CxPolynomial::zero();
        for i in 0..5 {
            let mut q = CxPolynomial::one();
            for (j, &aj) in a.iter().enumerate() {
                if j != i {
                    let f = CxPolynomial::linear(c(aj, 0.0));
                    q = q.mul(&f).mul(&f);
                }
            }
            num = num.add(&q);
        }
        let roots = num.roots().unwrap();
        let near = |target: Complex64| {
            roots
                .iter()
                .any(|r| (r.re - target.re).abs() < 0.01 && (r.im - target.im).abs() < 0.01)
        };
        assert!(near(c(4.53, 0.56)));
        assert!(near(c(3.45, 0.56)));
    }

    #[test]
    fn roots_at_origin_are_deflated() {
        // w^3 (w - 2)
        let p = CxPolynomial::from_roots(&[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]);
        let roots = p.roots().unwrap();
        assert_eq!(roots.iter().filter(|r| r.norm() < 1e-12).count(), 3);
        assert!(roots.iter().any(|r| (r - c(2.0, 0.0)).norm() < 1e-10));
    }
}
