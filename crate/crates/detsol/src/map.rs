//! Rational maps on the Riemann sphere.
//!
//! A degree-(n+1) map `f(w) = scale * prod (w - a_i) / prod (w - b_i)` is the
//! spectral object behind every solution family: its fibers supply the wave
//! numbers and its pair-merge points supply rational breathers. Poles (and
//! zeros) at infinity are first class; each one simply drops a linear factor
//! from the corresponding product.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::CxPolynomial;

/// Tolerance for conjugation-closure tests on user-specified map data.
pub const CONJ_TOL: f64 = 1e-12;
/// Pairwise root distance below which a cleared fiber polynomial is treated
/// as having a repeated root (relative to its coefficient scale).
const REPEATED_ROOT_TOL: f64 = 1e-8;

/// A point on the Riemann sphere: finite or the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointOnSphere {
    Finite(Complex64),
    Infinity,
}

impl PointOnSphere {
    pub fn finite(re: f64, im: f64) -> Self {
        PointOnSphere::Finite(Complex64::new(re, im))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, PointOnSphere::Infinity)
    }

    pub fn as_finite(&self) -> Option<Complex64> {
        match self {
            PointOnSphere::Finite(w) => Some(*w),
            PointOnSphere::Infinity => None,
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            PointOnSphere::Finite(w) => PointOnSphere::Finite(w.conj()),
            PointOnSphere::Infinity => PointOnSphere::Infinity,
        }
    }
}

impl From<Complex64> for PointOnSphere {
    fn from(w: Complex64) -> Self {
        PointOnSphere::Finite(w)
    }
}

/// Meromorphic function of degree n+1 on the sphere in factored form.
#[derive(Debug, Clone)]
pub struct RationalMap {
    zeros: Vec<PointOnSphere>,
    poles: Vec<PointOnSphere>,
    scale: Complex64,
}

impl RationalMap {
    /// Builds a map from n+1 zeros and n+1 poles. No zero may coincide with a
    /// pole and the finite zeros must be pairwise distinct.
    pub fn new(
        zeros: Vec<PointOnSphere>,
        poles: Vec<PointOnSphere>,
        scale: Complex64,
    ) -> Result<Self> {
        if zeros.is_empty() || zeros.len() != poles.len() {
            return Err(Error::Constraint(format!(
                "a degree-(n+1) map needs equally many zeros and poles, got {} and {}",
                zeros.len(),
                poles.len()
            )));
        }
        if scale.norm() == 0.0 {
            return Err(Error::ZeroParameter("map scale"));
        }
        for (i, z) in zeros.iter().enumerate() {
            for (k, z2) in zeros.iter().enumerate() {
                if i < k {
                    if let (Some(a), Some(b)) = (z.as_finite(), z2.as_finite()) {
                        if (a - b).norm() < CONJ_TOL {
                            return Err(Error::Constraint(format!(
                                "zeros {i} and {k} coincide at {a}"
                            )));
                        }
                    }
                }
            }
            for p in &poles {
                match (z, p) {
                    (PointOnSphere::Finite(a), PointOnSphere::Finite(b)) => {
                        if (a - b).norm() < CONJ_TOL {
                            return Err(Error::Constraint(format!(
                                "zero {a} coincides with a pole"
                            )));
                        }
                    }
                    (PointOnSphere::Infinity, PointOnSphere::Infinity) => {
                        return Err(Error::Constraint(
                            "a zero and a pole both sit at infinity".into(),
                        ));
                    }
                    _ => {}
                }
            }
        }
        Ok(RationalMap {
            zeros,
            poles,
            scale,
        })
    }

    /// Map with the given finite real-or-complex zeros and all poles at
    /// infinity (a polynomial, the reading used for the figure examples that
    /// list no poles).
    pub fn polynomial_from_zeros(zeros: &[Complex64], scale: Complex64) -> Result<Self> {
        let n = zeros.len();
        RationalMap::new(
            zeros.iter().map(|&z| z.into()).collect(),
            vec![PointOnSphere::Infinity; n],
            scale,
        )
    }

    /// Degree = number of sheets = n+1.
    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn zeros(&self) -> &[PointOnSphere] {
        &self.zeros
    }

    pub fn poles(&self) -> &[PointOnSphere] {
        &self.poles
    }

    pub fn scale(&self) -> Complex64 {
        self.scale
    }

    fn finite_zeros(&self) -> Vec<Complex64> {
        self.zeros.iter().filter_map(|z| z.as_finite()).collect()
    }

    fn finite_poles(&self) -> Vec<Complex64> {
        self.poles.iter().filter_map(|p| p.as_finite()).collect()
    }

    /// Numerator polynomial scale * prod (w - a_i) over finite zeros.
    pub fn numerator(&self) -> CxPolynomial {
        CxPolynomial::from_roots(&self.finite_zeros()).scale(self.scale)
    }

    /// Denominator polynomial prod (w - b_i) over finite poles.
    pub fn denominator(&self) -> CxPolynomial {
        CxPolynomial::from_roots(&self.finite_poles())
    }

    /// f(w) as the factored product, infinite factors omitted.
    pub fn eval(&self, w: Complex64) -> Result<Complex64> {
        let mut num = self.scale;
        for a in self.finite_zeros() {
            num *= w - a;
        }
        let mut den = Complex64::new(1.0, 0.0);
        for b in self.finite_poles() {
            let d = w - b;
            if d.norm() < 1e-300 {
                return Err(Error::PoleEvaluation { w });
            }
            den *= d;
        }
        Ok(num / den)
    }

    /// Exact first or second derivative. Numerator/denominator derivatives
    /// are accumulated as product sums, so evaluation right on a zero of f
    /// (where the logarithmic form 1/(w-a) blows up) stays finite.
    pub fn deriv(&self, w: Complex64, order: u8) -> Result<Complex64> {
        assert!(order == 1 || order == 2, "order must be 1 or 2");
        let zeros = self.finite_zeros();
        let poles = self.finite_poles();
        for b in &poles {
            if (w - b).norm() < 1e-300 {
                return Err(Error::PoleEvaluation { w });
            }
        }
        let (n0, n1, n2) = product_derivs(&zeros, w);
        let (d0, d1, d2) = product_derivs(&poles, w);
        let n0 = n0 * self.scale;
        let n1 = n1 * self.scale;
        let n2 = n2 * self.scale;
        if order == 1 {
            // (N' D - N D') / D^2
            Ok((n1 * d0 - n0 * d1) / (d0 * d0))
        } else {
            // (N'' D^2 - N D'' D - 2 D' N' D + 2 N D'^2) / D^3
            Ok((n2 * d0 * d0 - n0 * d2 * d0 - 2.0 * d1 * n1 * d0 + 2.0 * n0 * d1 * d1)
                / (d0 * d0 * d0))
        }
    }

    /// The n+1 preimages of a non-critical value c, from the cleared
    /// polynomial scale*N(w) - c*D(w).
    pub fn fiber(&self, c: Complex64) -> Result<Vec<Complex64>> {
        let p = self.numerator().add(&self.denominator().scale(-c));
        if p.degree() != self.degree() {
            // leading terms cancelled: part of the fiber escaped to infinity
            return Err(Error::CriticalValue {
                what: format!("{c} (fiber meets infinity)"),
            });
        }
        let roots = p.roots()?;
        let tol = REPEATED_ROOT_TOL * root_scale(&roots);
        if CxPolynomial::has_clustered_roots(&roots, tol) {
            return Err(Error::CriticalValue {
                what: format!("{c}"),
            });
        }
        Ok(roots)
    }

    /// Roots of the numerator of f': the branch points of the covering.
    pub fn critical_points(&self) -> Result<Vec<Complex64>> {
        let num = self.numerator();
        let den = self.denominator();
        let p = num.derivative().mul(&den).add(&num.mul(&den.derivative()).scale(
            Complex64::new(-1.0, 0.0),
        ));
        if p.degree() == 0 {
            return Ok(Vec::new());
        }
        p.roots()
    }

    /// True iff zeros and poles are each closed under conjugation (within
    /// 1e-12) and the scale is real. Real maps send conjugate points to
    /// conjugate values.
    pub fn is_real_map(&self) -> bool {
        if self.scale.im.abs() > CONJ_TOL {
            return false;
        }
        conj_closed(&self.zeros) && conj_closed(&self.poles)
    }
}

/// (P, P', P'') for P(w) = prod (w - r_i), evaluated by product sums.
fn product_derivs(roots: &[Complex64], w: Complex64) -> (Complex64, Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut p0 = one;
    let mut p1 = zero;
    let mut p2 = zero;
    for &r in roots {
        let f = w - r;
        // (p * f)'' = p''*f + 2 p'; (p*f)' = p'*f + p
        p2 = p2 * f + 2.0 * p1;
        p1 = p1 * f + p0;
        p0 *= f;
    }
    (p0, p1, p2)
}

fn root_scale(roots: &[Complex64]) -> f64 {
    roots.iter().map(|r| r.norm()).fold(1.0, f64::max)
}

fn conj_closed(points: &[PointOnSphere]) -> bool {
    let mut used = vec![false; points.len()];
    for (i, p) in points.iter().enumerate() {
        if used[i] {
            continue;
        }
        match p {
            PointOnSphere::Infinity => used[i] = true,
            PointOnSphere::Finite(w) => {
                if w.im.abs() <= CONJ_TOL {
                    used[i] = true;
                    continue;
                }
                let partner = points.iter().enumerate().find(|(k, q)| {
                    !used[*k]
                        && *k != i
                        && q.as_finite()
                            .map(|v| (v - w.conj()).norm() <= CONJ_TOL)
                            .unwrap_or(false)
                });
                match partner {
                    Some((k, _)) => {
                        used[i] = true;
                        used[k] = true;
                    }
                    None => return false,
                }
            }
        }
    }
    true
}
