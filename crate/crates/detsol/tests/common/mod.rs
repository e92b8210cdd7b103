//! Shared test instances: one representative, well-conditioned build per
//! solution family, with desk-scale verification grids. Field amplitudes are
//! O(1) so the 1% negative controls are loud.

use detsol::degen::{LocalParam, PairData};
use detsol::ds::{self, DsField, DsSolution};
use detsol::map::{PointOnSphere, RationalMap};
use detsol::nls::{self, NlsField, NlsSolution};
use detsol::verify::{AxisSpec, GridSpec};
use detsol::{Complex64, Result};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// f(w) = (w^2 - 1)/(4 w^2): real map with zeros +-1, double pole at 0.
/// Fibers over real c > 1/4 are conjugate pairs +-i r, and the dark
/// background amplitude is |q2|^(1/2) = 1.
pub fn scalar_map() -> RationalMap {
    RationalMap::new(
        vec![PointOnSphere::finite(1.0, 0.0), PointOnSphere::finite(-1.0, 0.0)],
        vec![PointOnSphere::finite(0.0, 0.0), PointOnSphere::finite(0.0, 0.0)],
        c(0.25, 0.0),
    )
    .unwrap()
}

/// Fiber point of `scalar_map` over real value v > 1/4 in the upper half
/// plane: w = +i/sqrt(4v - 1).
pub fn scalar_fiber_point(v: f64) -> Complex64 {
    c(0.0, 1.0 / (4.0 * v - 1.0).sqrt())
}

pub fn nls_grid() -> GridSpec {
    GridSpec::new(
        AxisSpec::new(-3.0, 3.0, 41),
        None,
        AxisSpec::new(-1.5, 1.5, 41),
    )
}

pub fn ds_grid() -> GridSpec {
    GridSpec::new(
        AxisSpec::new(-4.0, 4.0, 41),
        Some(AxisSpec::new(-4.0, 4.0, 41)),
        AxisSpec::new(-1.0, 1.0, 3),
    )
}

// ---------------------------------------------------------------------------
// n-NLS instances
// ---------------------------------------------------------------------------

/// Complexified family: dark-type conjugate pairs but with complex shifts
/// and a free complex amplitude, so psi* is not s conj(psi) while the fields
/// stay bounded.
pub fn nls_complexified() -> Result<NlsSolution> {
    let u = vec![scalar_fiber_point(0.5), scalar_fiber_point(1.25)];
    let v: Vec<Complex64> = u.iter().map(|q| q.conj()).collect();
    nls::build_complexified(&nls::NlsGeneralParams {
        map: scalar_map(),
        fiber_value: c(0.0, 0.0),
        anchor_index: 0,
        pairs: PairData::new(u, v)?,
        d: vec![c(0.3, 1.2), c(-0.2, 0.9)],
        amplitudes: vec![c(0.75, 0.1)],
        theta: 0.0,
        local_param: LocalParam::FunctionShift,
    })
}

pub fn nls_dark(n_solitons: usize) -> Result<NlsSolution> {
    let u = match n_solitons {
        1 => vec![scalar_fiber_point(0.5)],
        _ => vec![scalar_fiber_point(0.5), scalar_fiber_point(1.25)],
    };
    let d = match n_solitons {
        1 => vec![0.3],
        _ => vec![0.3, -0.2],
    };
    nls::build_dark(&nls::NlsDarkParams {
        map: scalar_map(),
        fiber_value: 0.0,
        anchor_index: 0,
        u,
        d,
        theta: 0.1,
    })
}

pub fn nls_bright(n_solitons: usize) -> Result<NlsSolution> {
    let p = match n_solitons {
        1 => nls::NlsBrightParams {
            anchors: vec![1.5],
            gammas: vec![2.8],
            v: vec![c(0.4, 0.8)],
            d_hat: vec![c(0.2, -0.1)],
            theta: 0.3,
        },
        _ => nls::NlsBrightParams {
            anchors: vec![1.5, -2.0],
            gammas: vec![4.0, -2.0],
            v: vec![c(0.4, 0.8), c(0.9, 0.6)],
            d_hat: vec![c(0.2, -0.1), c(0.1, 0.3)],
            theta: 0.0,
        },
    };
    nls::build_bright(&p)
}

/// Breather map f = (w^2 - 1)/(4w): zeros +-1, poles (0, inf), with
/// f'(+1) = f'(-1) = 1/2 so the sign vector is +1 (focusing, smooth).
pub fn breather_map() -> RationalMap {
    RationalMap::new(
        vec![PointOnSphere::finite(1.0, 0.0), PointOnSphere::finite(-1.0, 0.0)],
        vec![PointOnSphere::finite(0.0, 0.0), PointOnSphere::Infinity],
        c(0.25, 0.0),
    )
    .unwrap()
}

pub fn nls_breather(n_breathers: usize) -> Result<NlsSolution> {
    let map = breather_map();
    // pair block over a complex value: u_odd and v_odd are the two fiber
    // roots, u_even = conj(v_odd)
    let block = |value: Complex64| -> Result<(Complex64, Complex64)> {
        let fiber = map.fiber(value)?;
        Ok((fiber[0], fiber[1].conj()))
    };
    let mut u = Vec::new();
    let (u1, u2) = block(c(0.5, 0.25))?;
    u.push(u1);
    u.push(u2);
    if n_breathers > 1 {
        let (u3, u4) = block(c(0.75, 0.5))?;
        u.push(u3);
        u.push(u4);
    }
    let d_hat = vec![c(0.0, 0.0); n_breathers];
    nls::build_breather(&nls::NlsBreatherParams {
        map,
        fiber_value: 0.0,
        anchor_index: 0,
        u,
        d_hat,
        theta: 0.0,
        apply_transform: true,
    })
}

/// Rational breathers over symmetric polynomial maps with unit-scaled local
/// parameters (merge equation sum (w - a_i)^{-2} = 0).
pub fn nls_rational(n_breathers: usize) -> Result<NlsSolution> {
    let zeros: Vec<Complex64> = match n_breathers {
        1 => vec![c(0.5, 0.0), c(-0.5, 0.0)],
        _ => vec![c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
    };
    let map = RationalMap::polynomial_from_zeros(&zeros, c(1.0, 0.0))?;
    let mut sorted = zeros.clone();
    sorted.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
    let scales = sorted
        .iter()
        .map(|&a| map.deriv(a, 1).map(|d| 1.0 / d))
        .collect::<Result<Vec<_>>>()?;
    let local = LocalParam::ScaledFunction { scales };
    let poly = nls::pair_merge_polynomial(&map, 0.0, &local)?;
    let mut upper: Vec<Complex64> = poly
        .roots()?
        .into_iter()
        .filter(|r| r.im > 1e-9)
        .collect();
    upper.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
    let u: Vec<Complex64> = upper.into_iter().take(n_breathers).collect();
    assert_eq!(u.len(), n_breathers, "need enough complex merge points");
    nls::build_rational_breather(&nls::NlsRationalParams {
        map,
        fiber_value: 0.0,
        anchor_index: 1,
        u,
        d_hat: vec![c(0.0, 0.0); n_breathers],
        theta: 0.0,
        local_param: local,
    })
}

// ---------------------------------------------------------------------------
// DS instances
// ---------------------------------------------------------------------------

pub fn ds_complexified() -> Result<DsSolution> {
    ds::build_ds_complexified(&ds::DsGeneralParams {
        wa: c(1.3, 0.0),
        wb: c(-0.7, 0.0),
        kappa1: c(0.9, 0.0),
        kappa2: c(1.1, 0.0),
        h: c(0.55, 0.0),
        pairs: PairData::new(
            vec![c(0.3, 0.6), c(-0.8, 0.2)],
            vec![c(1.9, -0.4), c(0.5, 1.1)],
        )?,
        d: vec![c(0.1, 0.2), c(-0.3, 0.1)],
        amplitude: c(1.0, 0.0),
        theta: 0.0,
    })
}

pub fn ds_dark() -> Result<DsSolution> {
    ds::build_ds_dark(&ds::DsDarkParams {
        variant: ds::DsDarkVariant::Ds1 {
            wa: 2.0,
            wb: -1.0,
            kappa1: 2.0,
            kappa2: 2.0,
            u: vec![c(0.5, 0.8), c(1.4, -1.1)],
        },
        h: 0.2,
        d: vec![0.1, -0.3],
        theta: 0.4,
    })
}

pub fn ds2_dark() -> Result<DsSolution> {
    ds::build_ds_dark(&ds::DsDarkParams {
        variant: ds::DsDarkVariant::Ds2Plus {
            wa: c(1.2, 0.8),
            kappa1: c(1.4, 0.8),
            u: vec![0.9, 2.1],
            v: vec![0.2, 1.5],
        },
        h: 0.3,
        d: vec![0.05, -0.2],
        theta: 0.0,
    })
}

pub fn ds_bright() -> Result<DsSolution> {
    ds::build_ds_bright(&ds::DsBrightParams {
        variant: ds::DsBrightVariant::Ds1 {
            kappa1: 1.0,
            kappa2: 0.8,
            alpha_u_odd: vec![c(0.3, 0.7), c(-0.6, 0.5)],
            alpha_u_even: vec![c(0.5, -0.4), c(0.2, -0.9)],
        },
        h: 0.4,
        d_hat: vec![c(0.1, 0.2), c(-0.3, 0.1)],
        theta: 0.2,
    })
}

pub fn ds2_bright() -> Result<DsSolution> {
    ds::build_ds_bright(&ds::DsBrightParams {
        variant: ds::DsBrightVariant::Ds2Minus {
            kappa1: c(1.0, 0.3),
            alpha_u_odd: vec![c(0.3, 0.7)],
            alpha_v_odd: vec![c(0.5, 0.4)],
        },
        h: 0.4,
        d_hat: vec![c(0.1, 0.2)],
        theta: 0.0,
    })
}

pub fn ds_breather() -> Result<DsSolution> {
    ds::build_ds_breather(&ds::DsBreatherParams {
        wa: 2.0,
        wb: -1.0,
        kappa1: 1.8,
        kappa2: 1.8,
        h: 4.0,
        u: vec![c(0.5, -0.4), c(0.3, 0.6)],
        d_hat: vec![c(0.1, -0.2)],
        theta: 0.0,
    })
}

pub fn ds_rational() -> Result<DsSolution> {
    ds::build_ds_rational(&ds::DsRationalParams {
        wa: 2.0,
        wb: 1.0,
        kappa1: 1.0,
        kappa2: 1.0,
        h: 0.3,
        u: vec![c(0.0, 2.0), c(2.0, 1.0)],
        d_hat: vec![c(0.3, 0.4), c(-0.1, 0.2)],
        theta: 0.2,
    })
}

pub fn ds_dromion() -> Result<DsSolution> {
    ds::build_dromion(&ds::DromionParams {
        wa: 1.3,
        wb: -0.8,
        kappa1: 1.0,
        kappa2: 0.9,
        h: 0.35,
        theta: 0.1,
        alpha_u1: c(0.4, 0.6),
        alpha_v1: c(0.3, 0.5),
        alpha_u3: c(-0.2, 0.7),
        alpha_v3: c(0.5, 0.4),
        d1: c(0.1, 0.2),
        d3: c(-0.2, 0.15),
    })
}

pub const LUMP_NU: (f64, f64) = (0.6, 0.3);

pub fn ds_lump() -> Result<DsSolution> {
    ds::build_lump(&ds::LumpParams {
        lambda: c(0.4, -0.3),
        nu: c(LUMP_NU.0, LUMP_NU.1),
        mu: c(0.2, 0.1),
        theta: 0.15,
        h: 6.0,
    })
}

// ---------------------------------------------------------------------------
// negative controls: the same field scaled by a factor
// ---------------------------------------------------------------------------

pub struct ScaledNls<'a, S: NlsField>(pub &'a S, pub f64);

impl<S: NlsField> NlsField for ScaledNls<'_, S> {
    fn components(&self) -> usize {
        self.0.components()
    }
    fn signs(&self) -> &[i8] {
        self.0.signs()
    }
    fn psi(&self, j: usize, x: f64, t: f64) -> Result<Complex64> {
        Ok(c(self.1, 0.0) * self.0.psi(j, x, t)?)
    }
    fn psi_star(&self, j: usize, x: f64, t: f64) -> Result<Complex64> {
        Ok(c(self.1, 0.0) * self.0.psi_star(j, x, t)?)
    }
}

/// A 1% field-amplitude corruption: psi scales by the factor and the
/// intensity-like phi by its square, which breaks the psi equation at
/// first order in (factor^2 - 1).
pub struct ScaledDs<'a, S: DsField>(pub &'a S, pub f64);

impl<S: DsField> DsField for ScaledDs<'_, S> {
    fn variant(&self) -> ds::DsVariant {
        self.0.variant()
    }
    fn is_complexified(&self) -> bool {
        self.0.is_complexified()
    }
    fn psi(&self, x: f64, y: f64, t: f64) -> Result<Complex64> {
        Ok(c(self.1, 0.0) * self.0.psi(x, y, t)?)
    }
    fn psi_star(&self, x: f64, y: f64, t: f64) -> Result<Complex64> {
        Ok(c(self.1, 0.0) * self.0.psi_star(x, y, t)?)
    }
    fn phi(&self, x: f64, y: f64, t: f64) -> Result<Complex64> {
        Ok(c(self.1 * self.1, 0.0) * self.0.phi(x, y, t)?)
    }
}
