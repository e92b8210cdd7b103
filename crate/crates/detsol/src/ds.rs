//! Solution families of the Davey-Stewartson equations.
//!
//! In characteristic coordinates every family here is the same object: a
//! ratio of two determinant specs times a plane-wave phase, with the
//! auxiliary field phi read off the denominator's second log-derivatives.
//! The dromion and lump closed forms are expressed through 1x1 and 2x2 specs
//! so they share the evaluation and phi machinery with the larger families.

use num_complex::Complex64;

use crate::degen::{self, PairData};
use crate::det::{det_ratio, AffineArg, Deriv, DetMatrixSpec, ExpEntry, ExpTerm};
use crate::error::{Error, Result};

pub const CONSTRAINT_TOL: f64 = 1e-10;

fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// DS1 has both characteristic coordinates real (alpha = i in the original
/// form); DS2 has them complex conjugate (alpha = 1). rho is the
/// nonlinearity sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DsVariant {
    Ds1 { rho: i8 },
    Ds2 { rho: i8 },
}

impl DsVariant {
    pub fn rho(&self) -> i8 {
        match self {
            DsVariant::Ds1 { rho } | DsVariant::Ds2 { rho } => *rho,
        }
    }

    pub fn is_ds2(&self) -> bool {
        matches!(self, DsVariant::Ds2 { .. })
    }

    pub fn label(&self) -> String {
        let (name, rho) = match self {
            DsVariant::Ds1 { rho } => ("DS1", rho),
            DsVariant::Ds2 { rho } => ("DS2", rho),
        };
        format!("{}{}", name, if *rho > 0 { "+" } else { "-" })
    }
}

/// (x, y) -> (xi, eta). DS1: xi = (x+y)/2, eta = (x-y)/2 (both real);
/// DS2: xi = (x-iy)/2, eta = (x+iy)/2 (conjugates).
pub fn char_coords(variant: DsVariant, x: f64, y: f64) -> (Complex64, Complex64) {
    if variant.is_ds2() {
        (
            Complex64::new(x / 2.0, -y / 2.0),
            Complex64::new(x / 2.0, y / 2.0),
        )
    } else {
        (re((x + y) / 2.0), re((x - y) / 2.0))
    }
}

/// Inverse of [`char_coords`]: (xi, eta) -> (x, y).
pub fn char_coords_inverse(variant: DsVariant, xi: Complex64, eta: Complex64) -> (f64, f64) {
    if variant.is_ds2() {
        ((xi + eta).re, (i() * (xi - eta)).re)
    } else {
        ((xi + eta).re, (xi - eta).re)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DsFamily {
    Complexified,
    Dark,
    Bright,
    Breather,
    RationalBreather,
    Dromion,
    Lump,
}

impl DsFamily {
    pub fn label(&self) -> &'static str {
        match self {
            DsFamily::Complexified => "complexified",
            DsFamily::Dark => "dark",
            DsFamily::Bright => "bright",
            DsFamily::Breather => "breather",
            DsFamily::RationalBreather => "rational-breather",
            DsFamily::Dromion => "dromion",
            DsFamily::Lump => "lump",
        }
    }
}

/// Field interface consumed by the verifier: point samples only.
pub trait DsField {
    fn variant(&self) -> DsVariant;
    fn is_complexified(&self) -> bool {
        false
    }
    fn psi(&self, x: f64, y: f64, t: f64) -> Result<Complex64>;
    fn psi_star(&self, x: f64, y: f64, t: f64) -> Result<Complex64>;
    /// The auxiliary field (varphi for the complexified system, phi on the
    /// physical slice; real there up to roundoff).
    fn phi(&self, x: f64, y: f64, t: f64) -> Result<Complex64>;
}

/// Constants kept for inspection.
#[derive(Debug, Clone, Default)]
pub struct DsInfo {
    pub amplitude: f64,
    pub g: [Complex64; 3],
    /// Dromion denominator coefficients (A1, A2, A3) when applicable.
    pub dromion_coeffs: Option<[f64; 3]>,
}

/// One DS solution: psi = amp * det(num)/det(den) * exp(-i(G1 xi + G2 eta - G3 t/2)),
/// phi = (1/2)(ln det den)_xixi + (1/2)(ln det den)_etaeta + h/4.
pub struct DsSolution {
    variant: DsVariant,
    family: DsFamily,
    h: Complex64,
    amp: Complex64,
    /// None: psi* := rho * conj(psi).
    amp_star: Option<Complex64>,
    g1: Complex64,
    g2: Complex64,
    g3: Complex64,
    den: DetMatrixSpec,
    num: DetMatrixSpec,
    num_star: Option<DetMatrixSpec>,
    pub info: DsInfo,
}

impl DsField for DsSolution {
    fn variant(&self) -> DsVariant {
        self.variant
    }

    fn is_complexified(&self) -> bool {
        self.family == DsFamily::Complexified
    }

    fn psi(&self, x: f64, y: f64, t: f64) -> Result<Complex64> {
        let (xi, eta) = char_coords(self.variant, x, y);
        let ratio = det_ratio(&self.num, &self.den, xi, eta, t)?;
        let phase = (-i() * (self.g1 * xi + self.g2 * eta - self.g3 * (t / 2.0))).exp();
        Ok(self.amp * ratio * phase)
    }

    fn psi_star(&self, x: f64, y: f64, t: f64) -> Result<Complex64> {
        match (&self.num_star, self.amp_star) {
            (Some(spec), Some(amp)) => {
                let (xi, eta) = char_coords(self.variant, x, y);
                let ratio = det_ratio(spec, &self.den, xi, eta, t)?;
                let phase = (i() * (self.g1 * xi + self.g2 * eta - self.g3 * (t / 2.0))).exp();
                Ok(amp * ratio * phase)
            }
            _ => Ok(re(self.variant.rho() as f64) * self.psi(x, y, t)?.conj()),
        }
    }

    fn phi(&self, x: f64, y: f64, t: f64) -> Result<Complex64> {
        let (xi, eta) = char_coords(self.variant, x, y);
        let dxx = self.den.logdet_second_deriv(Deriv::X1, xi, eta, t)?;
        let dee = self.den.logdet_second_deriv(Deriv::X2, xi, eta, t)?;
        Ok(0.5 * (dxx + dee) + self.h / 4.0)
    }
}

impl DsSolution {
    pub fn family(&self) -> DsFamily {
        self.family
    }

    /// psi at explicit characteristic coordinates, bypassing the variant's
    /// chart (the complexified solutions are entire in (xi, eta)).
    pub fn psi_at(&self, xi: Complex64, eta: Complex64, t: f64) -> Result<Complex64> {
        let ratio = det_ratio(&self.num, &self.den, xi, eta, t)?;
        let phase = (-i() * (self.g1 * xi + self.g2 * eta - self.g3 * (t / 2.0))).exp();
        Ok(self.amp * ratio * phase)
    }

    /// Background amplitude A (dark asymptote / bright scale).
    pub fn amplitude(&self) -> f64 {
        self.info.amplitude
    }

    /// Capital Phi = phi - rho |psi|^2 (the mean-flow field of the original
    /// coordinates).
    pub fn capital_phi(&self, x: f64, y: f64, t: f64) -> Result<Complex64> {
        let phi = self.phi(x, y, t)?;
        let psi = self.psi(x, y, t)?;
        Ok(phi - re(self.variant.rho() as f64) * psi.norm_sqr())
    }
}

fn g_constants(wa: Complex64, wb: Complex64, k1: Complex64, k2: Complex64, h: Complex64) -> [Complex64; 3] {
    let g1 = k1 / (wb - wa);
    let g2 = k2 / (wa - wb);
    [g1, g2, -g1 * g1 - g2 * g2 + h]
}

/// Uniformizer-convention affine arguments
/// Z_k = i k1 V_{a,k} xi - i k2 V_{b,k} eta + i (k1^2 W_{a,k} - k2^2 W_{b,k}) t/2 - d_k.
fn t_args(
    wa: Complex64,
    wb: Complex64,
    k1: Complex64,
    k2: Complex64,
    pairs: &PairData,
    d: &[Complex64],
) -> Result<Vec<AffineArg>> {
    let one = re(1.0);
    let zero = re(0.0);
    let va = degen::v_vector(wa, one, pairs)?;
    let vb = degen::v_vector(wb, one, pairs)?;
    let wa_ = degen::w_vector(wa, one, zero, pairs)?;
    let wb_ = degen::w_vector(wb, one, zero, pairs)?;
    Ok((0..pairs.genus())
        .map(|k| AffineArg {
            c1: i() * k1 * va[k],
            c2: -i() * k2 * vb[k],
            ct: i() * (k1 * k1 * wa_[k] - k2 * k2 * wb_[k]) / 2.0,
            c0: -d[k],
        })
        .collect())
}

fn t_based_solution(
    variant: DsVariant,
    family: DsFamily,
    wa: Complex64,
    wb: Complex64,
    k1: Complex64,
    k2: Complex64,
    h: Complex64,
    pairs: &PairData,
    d: &[Complex64],
    amplitude: Complex64,
    theta: f64,
) -> Result<DsSolution> {
    if k1.norm() == 0.0 || k2.norm() == 0.0 {
        return Err(Error::ZeroParameter("kappa"));
    }
    if d.len() != pairs.genus() {
        return Err(Error::Config(format!(
            "shift vector has {} entries, expected genus {}",
            d.len(),
            pairs.genus()
        )));
    }
    if amplitude.norm() == 0.0 {
        return Err(Error::ZeroParameter("amplitude A"));
    }
    let [g1, g2, g3] = g_constants(wa, wb, k1, k2, h);
    let base = t_args(wa, wb, k1, k2, pairs, d)?;
    let r = degen::r_vector(wa, wb, pairs)?;
    let shift = |sign: f64| -> Vec<AffineArg> {
        base.iter()
            .enumerate()
            .map(|(k, a)| a.shifted(re(sign) * r[k]))
            .collect()
    };
    let den = DetMatrixSpec::theta(pairs, base.clone())?;
    let num = DetMatrixSpec::theta(pairs, shift(1.0))?;
    let num_star = DetMatrixSpec::theta(pairs, shift(-1.0))?;
    let phase = (i() * theta).exp();
    Ok(DsSolution {
        variant,
        family,
        h,
        amp: amplitude * phase,
        amp_star: Some(-k1 * k2 / (amplitude * (wa - wb) * (wa - wb)) * phase.conj()),
        g1,
        g2,
        g3,
        den,
        num,
        num_star: Some(num_star),
        info: DsInfo {
            amplitude: amplitude.norm(),
            g: [g1, g2, g3],
            dromion_coeffs: None,
        },
    })
}

// ---------------------------------------------------------------------------
// complexified family
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct DsGeneralParams {
    pub wa: Complex64,
    pub wb: Complex64,
    pub kappa1: Complex64,
    pub kappa2: Complex64,
    pub h: Complex64,
    pub pairs: PairData,
    pub d: Vec<Complex64>,
    pub amplitude: Complex64,
    pub theta: f64,
}

/// Solutions of the complexified DS system with free complex parameters;
/// evaluated on the real characteristic slice (the DS1 slice).
pub fn build_ds_complexified(p: &DsGeneralParams) -> Result<DsSolution> {
    t_based_solution(
        DsVariant::Ds1 { rho: 1 },
        DsFamily::Complexified,
        p.wa,
        p.wb,
        p.kappa1,
        p.kappa2,
        p.h,
        &p.pairs,
        &p.d,
        p.amplitude,
        p.theta,
    )
}

// ---------------------------------------------------------------------------
// dark multi-solitons
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub enum DsDarkVariant {
    /// DS1^rho with rho = -sign(kappa1 kappa2): real anchors and kappas,
    /// conjugate pair points.
    Ds1 {
        wa: f64,
        wb: f64,
        kappa1: f64,
        kappa2: f64,
        /// Upper pair representatives; v = conj(u).
        u: Vec<Complex64>,
    },
    /// DS2^+: conjugate anchors and kappas, real interlaced pair points
    /// v_1 < u_1 < v_2 < u_2 < ... (the smoothness ordering).
    Ds2Plus {
        wa: Complex64,
        kappa1: Complex64,
        u: Vec<f64>,
        v: Vec<f64>,
    },
}

#[derive(Debug, Clone)]
pub struct DsDarkParams {
    pub variant: DsDarkVariant,
    pub h: f64,
    pub d: Vec<f64>,
    pub theta: f64,
}

pub fn build_ds_dark(p: &DsDarkParams) -> Result<DsSolution> {
    let d: Vec<Complex64> = p.d.iter().map(|&x| re(x)).collect();
    match &p.variant {
        DsDarkVariant::Ds1 {
            wa,
            wb,
            kappa1,
            kappa2,
            u,
        } => {
            if *kappa1 == 0.0 || *kappa2 == 0.0 {
                return Err(Error::ZeroParameter("kappa"));
            }
            for (k, q) in u.iter().enumerate() {
                if q.im.abs() < CONSTRAINT_TOL {
                    return Err(Error::Constraint(format!(
                        "dark pair point u_{k} = {q} must be non-real"
                    )));
                }
            }
            let pairs = PairData::new(u.clone(), u.iter().map(|q| q.conj()).collect())?;
            let rho = if kappa1 * kappa2 > 0.0 { -1 } else { 1 };
            let a = (kappa1 * kappa2).abs().sqrt() / (wa - wb).abs();
            t_based_solution(
                DsVariant::Ds1 { rho },
                DsFamily::Dark,
                re(*wa),
                re(*wb),
                re(*kappa1),
                re(*kappa2),
                re(p.h),
                &pairs,
                &d,
                re(a),
                p.theta,
            )
        }
        DsDarkVariant::Ds2Plus { wa, kappa1, u, v } => {
            if kappa1.norm() == 0.0 {
                return Err(Error::ZeroParameter("kappa"));
            }
            if wa.im.abs() < CONSTRAINT_TOL {
                return Err(Error::Constraint(
                    "DS2+ dark needs conjugate anchors: wa must be non-real".into(),
                ));
            }
            if u.len() != v.len() || u.is_empty() {
                return Err(Error::Config("pair lists must match".into()));
            }
            // interlacing v_1 < u_1 < v_2 < u_2 < ...
            let mut seq = Vec::new();
            for k in 0..u.len() {
                seq.push(v[k]);
                seq.push(u[k]);
            }
            if !seq.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::Constraint(format!(
                    "DS2+ smoothness needs v_1 < u_1 < v_2 < u_2 < ...; got {seq:?}"
                )));
            }
            let pairs = PairData::new(
                u.iter().map(|&x| re(x)).collect(),
                v.iter().map(|&x| re(x)).collect(),
            )?;
            let wb = wa.conj();
            let kappa2 = kappa1.conj();
            let a = (*kappa1 * kappa2).norm().sqrt() / (wa - wb).norm();
            t_based_solution(
                DsVariant::Ds2 { rho: 1 },
                DsFamily::Dark,
                *wa,
                wb,
                *kappa1,
                kappa2,
                re(p.h),
                &pairs,
                &d,
                re(a),
                p.theta,
            )
        }
    }
}

// ---------------------------------------------------------------------------
// breathers
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct DsBreatherParams {
    pub wa: f64,
    pub wb: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub h: f64,
    /// u_1, ..., u_{2N}; the v's are derived from the breather pairing
    /// v_{2k-1} = conj(u_{2k}), v_{2k} = conj(u_{2k-1}).
    pub u: Vec<Complex64>,
    /// d-hat for odd indices; even entries conjugated.
    pub d_hat: Vec<Complex64>,
    pub theta: f64,
}

/// N-breathers of DS1^rho with rho = -sign(kappa1 kappa2).
pub fn build_ds_breather(p: &DsBreatherParams) -> Result<DsSolution> {
    if p.kappa1 == 0.0 || p.kappa2 == 0.0 {
        return Err(Error::ZeroParameter("kappa"));
    }
    if p.u.len() % 2 != 0 || p.u.is_empty() {
        return Err(Error::Config("breather pair list must contain 2N points".into()));
    }
    let n_pairs = p.u.len() / 2;
    if p.d_hat.len() != n_pairs {
        return Err(Error::Config(format!(
            "d-hat has {} entries, expected N = {n_pairs}",
            p.d_hat.len()
        )));
    }
    let mut u = Vec::new();
    let mut v = Vec::new();
    let mut d = Vec::new();
    for k in 0..n_pairs {
        u.push(p.u[2 * k]);
        u.push(p.u[2 * k + 1]);
        v.push(p.u[2 * k + 1].conj());
        v.push(p.u[2 * k].conj());
        d.push(p.d_hat[k]);
        d.push(p.d_hat[k].conj());
    }
    let pairs = PairData::new(u, v)?;
    let rho = if p.kappa1 * p.kappa2 > 0.0 { -1 } else { 1 };
    let a = (p.kappa1 * p.kappa2).abs().sqrt() / (p.wa - p.wb).abs();
    t_based_solution(
        DsVariant::Ds1 { rho },
        DsFamily::Breather,
        re(p.wa),
        re(p.wb),
        re(p.kappa1),
        re(p.kappa2),
        re(p.h),
        &pairs,
        &d,
        re(a),
        p.theta,
    )
}

// ---------------------------------------------------------------------------
// bright multi-solitons
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub enum DsBrightVariant {
    /// DS1^rho, rho = -sign(kappa1 kappa2): alpha_v derived by the H1
    /// conjugacies alpha_{v_{2k}} = conj(alpha_{u_{2k-1}}),
    /// alpha_{v_{2k-1}} = conj(alpha_{u_{2k}}).
    Ds1 {
        kappa1: f64,
        kappa2: f64,
        alpha_u_odd: Vec<Complex64>,
        alpha_u_even: Vec<Complex64>,
    },
    /// DS2^-: kappa2 = conj(kappa1) and the H2 conjugacies
    /// alpha_{u_{2k}} = conj(alpha_{u_{2k-1}}), alpha_{v_{2k}} = conj(alpha_{v_{2k-1}}).
    Ds2Minus {
        kappa1: Complex64,
        alpha_u_odd: Vec<Complex64>,
        alpha_v_odd: Vec<Complex64>,
    },
}

#[derive(Debug, Clone)]
pub struct DsBrightParams {
    pub variant: DsBrightVariant,
    pub h: f64,
    pub d_hat: Vec<Complex64>,
    pub theta: f64,
}

/// Bright N-solitons: exponentially localized in every plane direction.
/// Both variants share one formula set; they differ only in the conjugation
/// relations among the alpha parameters and kappas.
pub fn build_ds_bright(p: &DsBrightParams) -> Result<DsSolution> {
    // interleaved alpha data, kappas and rho per variant
    let (k1, k2, au, av, variant) = match &p.variant {
        DsBrightVariant::Ds1 {
            kappa1,
            kappa2,
            alpha_u_odd,
            alpha_u_even,
        } => {
            if *kappa1 == 0.0 || *kappa2 == 0.0 {
                return Err(Error::ZeroParameter("kappa"));
            }
            let n = alpha_u_odd.len();
            if n == 0 || alpha_u_even.len() != n {
                return Err(Error::Config("alpha lists must have N entries each".into()));
            }
            let mut au = Vec::new();
            let mut av = Vec::new();
            for k in 0..n {
                au.push(alpha_u_odd[k]);
                au.push(alpha_u_even[k]);
                av.push(alpha_u_even[k].conj());
                av.push(alpha_u_odd[k].conj());
            }
            // smooth denominator needs Im(alpha_v_odd) Im(alpha_u_odd) > 0
            for k in 0..n {
                let prod = av[2 * k].im * au[2 * k].im;
                if prod <= 0.0 {
                    return Err(Error::Constraint(format!(
                        "bright pair {k} is singular: Im(alpha_v) Im(alpha_u) = {prod:.3e} must be positive"
                    )));
                }
            }
            let rho = if kappa1 * kappa2 > 0.0 { -1 } else { 1 };
            (re(*kappa1), re(*kappa2), au, av, DsVariant::Ds1 { rho })
        }
        DsBrightVariant::Ds2Minus {
            kappa1,
            alpha_u_odd,
            alpha_v_odd,
        } => {
            if kappa1.norm() == 0.0 {
                return Err(Error::ZeroParameter("kappa"));
            }
            let n = alpha_u_odd.len();
            if n == 0 || alpha_v_odd.len() != n {
                return Err(Error::Config("alpha lists must have N entries each".into()));
            }
            let mut au = Vec::new();
            let mut av = Vec::new();
            for k in 0..n {
                au.push(alpha_u_odd[k]);
                au.push(alpha_u_odd[k].conj());
                av.push(alpha_v_odd[k]);
                av.push(alpha_v_odd[k].conj());
            }
            (*kappa1, kappa1.conj(), au, av, DsVariant::Ds2 { rho: -1 })
        }
    };
    let g2n = au.len();
    let n_pairs = g2n / 2;
    if p.d_hat.len() != n_pairs {
        return Err(Error::Config(format!(
            "d-hat has {} entries, expected N = {n_pairs}",
            p.d_hat.len()
        )));
    }
    for idx_i in 0..g2n {
        for idx_k in 0..g2n {
            if (idx_i + idx_k) % 2 == 1 && (av[idx_i] - au[idx_k]).norm() < 1e-13 {
                return Err(Error::Coincidence {
                    context: "bright alpha_v - alpha_u",
                    a: av[idx_i],
                    b: au[idx_k],
                });
            }
        }
    }

    let mut args = vec![AffineArg::constant(re(0.0)); g2n];
    for k in 0..n_pairs {
        let (o, e) = (2 * k, 2 * k + 1);
        args[o] = AffineArg {
            c1: i() * k1 * au[o],
            c2: i() * k2 * av[o],
            ct: i() * (k1 * k1 * au[o] * au[o] + k2 * k2 * av[o] * av[o]) / 2.0,
            c0: -p.d_hat[k],
        };
        args[e] = AffineArg {
            c1: -i() * k1 * av[e],
            c2: -i() * k2 * au[e],
            ct: -i() * (k1 * k1 * av[e] * av[e] + k2 * k2 * au[e] * au[e]) / 2.0,
            c0: -p.d_hat[k].conj(),
        };
    }
    // rhat_k = (-1)^k ln(-alpha_v_k alpha_u_k), 1-based sign
    let rhat: Vec<Complex64> = (0..g2n)
        .map(|idx| {
            let sign = if (idx + 1) % 2 == 0 { 1.0 } else { -1.0 };
            re(sign) * (-av[idx] * au[idx]).ln()
        })
        .collect();

    let mut m_entries = vec![vec![ExpEntry::default(); g2n]; g2n];
    let mut k_entries = vec![vec![ExpEntry::default(); g2n]; g2n];
    for idx_i in 0..g2n {
        for idx_k in 0..g2n {
            let (pi, pk) = (idx_i + 1, idx_k + 1);
            let me = &mut m_entries[idx_i][idx_k];
            let ke = &mut k_entries[idx_i][idx_k];
            let pair_weights = |a: usize, b: usize| -> Vec<(usize, f64)> {
                if a == b {
                    vec![(a, 1.0)]
                } else {
                    vec![(a, 0.5), (b, 0.5)]
                }
            };
            if pi % 2 == pk % 2 {
                if idx_i == idx_k {
                    me.constant = re(1.0);
                }
                if pi % 2 == 0 {
                    // K's even-even block with the distinguished second row
                    if idx_i == idx_k {
                        ke.constant = re(1.0);
                    }
                    if pi == 2 && pk == 2 {
                        ke.constant -= re(1.0);
                    }
                    if pi == 2 {
                        ke.terms.push(ExpTerm {
                            coeff: re(1.0),
                            z_weights: pair_weights(1, idx_k),
                            shift: 0.5 * (rhat[1] + rhat[idx_k]),
                        });
                    }
                    if pk == 2 && pi != 2 {
                        ke.terms.push(ExpTerm {
                            coeff: re(-1.0),
                            z_weights: vec![(idx_i, 0.5), (1, -0.5)],
                            shift: 0.5 * (rhat[idx_i] - rhat[1]),
                        });
                    }
                } else if idx_i == idx_k {
                    ke.constant = re(1.0);
                }
            } else {
                let frac = av[idx_i] * au[idx_k] / (av[idx_i] - au[idx_k]);
                let msign = if pi % 2 == 1 { 1.0 } else { -1.0 };
                me.terms.push(ExpTerm {
                    coeff: re(msign) * frac,
                    z_weights: pair_weights(idx_i, idx_k),
                    shift: re(0.0),
                });
                if pi % 2 == 0 {
                    // even row, odd column
                    let coeff = -au[idx_k] * au[idx_k] / (av[idx_i] - au[idx_k])
                        * ((av[1] - av[idx_i]) / (av[1] - au[idx_k]));
                    ke.terms.push(ExpTerm {
                        coeff,
                        z_weights: pair_weights(idx_i, idx_k),
                        shift: 0.5 * (rhat[idx_i] + rhat[idx_k]),
                    });
                } else {
                    // odd row, even column
                    ke.terms.push(ExpTerm {
                        coeff: frac,
                        z_weights: pair_weights(idx_i, idx_k),
                        shift: 0.5 * (rhat[idx_i] + rhat[idx_k]),
                    });
                }
            }
        }
    }
    let den = DetMatrixSpec::Exp {
        size: g2n,
        args: args.clone(),
        entries: m_entries,
    };
    let num = DetMatrixSpec::Exp {
        size: g2n,
        args,
        entries: k_entries,
    };
    let amplitude = (k1 * k2).norm().sqrt();
    let phase = (i() * p.theta).exp();
    Ok(DsSolution {
        variant,
        family: DsFamily::Bright,
        h: re(p.h),
        amp: re(amplitude) * phase,
        amp_star: None,
        g1: re(0.0),
        g2: re(0.0),
        g3: re(p.h),
        den,
        num,
        num_star: None,
        info: DsInfo {
            amplitude,
            g: [re(0.0), re(0.0), re(p.h)],
            dromion_coeffs: None,
        },
    })
}

// ---------------------------------------------------------------------------
// rational breathers
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct DsRationalParams {
    pub wa: f64,
    pub wb: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub h: f64,
    /// The N merge points u_{2k-1}; their conjugates complete the data.
    pub u: Vec<Complex64>,
    pub d_hat: Vec<Complex64>,
    pub theta: f64,
}

/// N rational breathers of DS1^rho: polynomial quotients times a plane wave.
pub fn build_ds_rational(p: &DsRationalParams) -> Result<DsSolution> {
    if p.kappa1 == 0.0 || p.kappa2 == 0.0 {
        return Err(Error::ZeroParameter("kappa"));
    }
    let n_pairs = p.u.len();
    if n_pairs == 0 || p.d_hat.len() != n_pairs {
        return Err(Error::Config(
            "rational breathers need one merge point and one d-hat per mode".into(),
        ));
    }
    let (wa, wb) = (re(p.wa), re(p.wb));
    let g2n = 2 * n_pairs;
    let mut base = vec![re(0.0); g2n];
    for k in 0..n_pairs {
        let u = p.u[k];
        if u.im.abs() < CONSTRAINT_TOL {
            return Err(Error::Constraint(format!(
                "merge point u_{k} = {u} must be complex"
            )));
        }
        for &anchor in &[wa, wb] {
            if (u - anchor).norm() < 1e-12 {
                return Err(Error::Coincidence {
                    context: "merge point vs anchor",
                    a: u,
                    b: anchor,
                });
            }
        }
        base[2 * k] = u;
        base[2 * k + 1] = u.conj();
    }
    let mut args = vec![AffineArg::constant(re(0.0)); g2n];
    let (k1, k2) = (re(p.kappa1), re(p.kappa2));
    for k in 0..n_pairs {
        let u = base[2 * k];
        let vha = 1.0 / ((wa - u) * (wa - u));
        let vhb = 1.0 / ((wb - u) * (wb - u));
        let wha = -2.0 / (wa - u).powu(3);
        let whb = -2.0 / (wb - u).powu(3);
        let odd = AffineArg {
            c1: i() * k1 * vha,
            c2: -i() * k2 * vhb,
            ct: i() * (k1 * k1 * wha - k2 * k2 * whb) / 2.0,
            c0: -p.d_hat[k],
        };
        args[2 * k] = odd;
        // even argument: z_even = -conj(z_odd) on the real slice
        args[2 * k + 1] = AffineArg {
            c1: -odd.c1.conj(),
            c2: -odd.c2.conj(),
            ct: -odd.ct.conj(),
            c0: p.d_hat[k].conj(),
        };
    }
    let rhat: Vec<Complex64> = base
        .iter()
        .map(|&q| -(wa - wb) / ((wa - q) * (wb - q)))
        .collect();
    let mut offdiag = vec![vec![re(0.0); g2n]; g2n];
    for a in 0..g2n {
        for b in 0..g2n {
            if a != b {
                let diff = base[a] - base[b];
                if diff.norm() < 1e-13 * base[a].norm().max(1.0) {
                    return Err(Error::Coincidence {
                        context: "rational merge points",
                        a: base[a],
                        b: base[b],
                    });
                }
                offdiag[a][b] = -1.0 / diff;
            }
        }
    }
    let spec = |sign: f64| DetMatrixSpec::PolyDiag {
        size: g2n,
        args: args
            .iter()
            .enumerate()
            .map(|(k, a)| a.shifted(re(sign) * rhat[k]))
            .collect(),
        offdiag: offdiag.clone(),
    };
    let [g1, g2, g3] = g_constants(wa, wb, k1, k2, re(p.h));
    let rho = if p.kappa1 * p.kappa2 > 0.0 { -1 } else { 1 };
    let amplitude = (p.kappa1 * p.kappa2).abs().sqrt() / (p.wa - p.wb).abs();
    let phase = (i() * p.theta).exp();
    Ok(DsSolution {
        variant: DsVariant::Ds1 { rho },
        family: DsFamily::RationalBreather,
        h: re(p.h),
        amp: re(amplitude) * phase,
        amp_star: Some(
            -k1 * k2 / (re(amplitude) * (wa - wb) * (wa - wb)) * phase.conj(),
        ),
        g1,
        g2,
        g3,
        den: spec(0.0),
        num: spec(1.0),
        num_star: Some(spec(-1.0)),
        info: DsInfo {
            amplitude,
            g: [g1, g2, g3],
            dromion_coeffs: None,
        },
    })
}

// ---------------------------------------------------------------------------
// dromion
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct DromionParams {
    pub wa: f64,
    pub wb: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub h: f64,
    pub theta: f64,
    pub alpha_u1: Complex64,
    pub alpha_v1: Complex64,
    pub alpha_u3: Complex64,
    pub alpha_v3: Complex64,
    pub d1: Complex64,
    pub d3: Complex64,
}

/// The DS1 dromion: exponential decay in every plane direction. Requires the
/// computed denominator coefficients A1, A2, A3 to be positive.
pub fn build_dromion(p: &DromionParams) -> Result<DsSolution> {
    if p.kappa1 == 0.0 || p.kappa2 == 0.0 {
        return Err(Error::ZeroParameter("kappa"));
    }
    if p.wa == 0.0 || p.wb == 0.0 {
        return Err(Error::ZeroParameter("anchor w"));
    }
    if p.alpha_v1.norm() == 0.0 || p.alpha_u3.norm() == 0.0 {
        return Err(Error::ZeroParameter("alpha"));
    }
    let a1 = p.wa * p.wa / (4.0 * p.alpha_v1.im * p.alpha_u1.im);
    let a2 = p.wb * p.wb / (4.0 * p.alpha_v3.im * p.alpha_u3.im);
    let a3 = a1 * a2
        + p.wa * p.wa * p.wb * p.wb
            / (4.0 * p.alpha_v1.im * p.alpha_u3.im * (p.alpha_u1 - p.alpha_v3).norm_sqr());
    for (name, value) in [("A1", a1), ("A2", a2), ("A3", a3)] {
        if !(value > 0.0) {
            return Err(Error::Positivity { name, value });
        }
    }
    // z1 rides on xi, z3 on eta
    let z1 = AffineArg {
        c1: -i() * p.kappa1 / p.alpha_v1,
        c2: re(0.0),
        ct: -i() * p.kappa1 * p.kappa1 / (p.alpha_v1 * p.alpha_v1) / 2.0,
        c0: -p.d1,
    };
    let z3 = AffineArg {
        c1: re(0.0),
        c2: -i() * p.kappa2 / p.alpha_u3,
        ct: -i() * p.kappa2 * p.kappa2 / (p.alpha_u3 * p.alpha_u3) / 2.0,
        c0: -p.d3,
    };
    let two_re = |a: &AffineArg| AffineArg {
        c1: a.c1 + a.c1.conj(),
        c2: a.c2 + a.c2.conj(),
        ct: a.ct + a.ct.conj(),
        c0: a.c0 + a.c0.conj(),
    };
    let sum = |a: &AffineArg, b: &AffineArg| AffineArg {
        c1: a.c1 + b.c1,
        c2: a.c2 + b.c2,
        ct: a.ct + b.ct,
        c0: a.c0 + b.c0,
    };
    // denominator 1 + A1 e^{2Re z1} + A2 e^{2Re z3} + A3 e^{2Re z1 + 2Re z3}
    let den_args = vec![two_re(&z1), two_re(&z3)];
    let mut den_entry = ExpEntry::constant_only(re(1.0));
    den_entry.terms.push(ExpTerm {
        coeff: re(a1),
        z_weights: vec![(0, 1.0)],
        shift: re(0.0),
    });
    den_entry.terms.push(ExpTerm {
        coeff: re(a2),
        z_weights: vec![(1, 1.0)],
        shift: re(0.0),
    });
    den_entry.terms.push(ExpTerm {
        coeff: re(a3),
        z_weights: vec![(0, 1.0), (1, 1.0)],
        shift: re(0.0),
    });
    let den = DetMatrixSpec::Exp {
        size: 1,
        args: den_args,
        entries: vec![vec![den_entry]],
    };
    // numerator e^{z1 + z3}
    let mut num_entry = ExpEntry::default();
    num_entry.terms.push(ExpTerm {
        coeff: re(1.0),
        z_weights: vec![(0, 1.0)],
        shift: re(0.0),
    });
    let num = DetMatrixSpec::Exp {
        size: 1,
        args: vec![sum(&z1, &z3)],
        entries: vec![vec![num_entry]],
    };
    let amp_hat = -re((p.wa - p.wb).signum())
        * (p.kappa1 * p.kappa2).abs().sqrt()
        * re(p.wa * p.wb)
        / (p.alpha_v1 * p.alpha_u3 * (p.alpha_v3 - p.alpha_u1));
    let rho = if p.kappa1 * p.kappa2 > 0.0 { -1 } else { 1 };
    Ok(DsSolution {
        variant: DsVariant::Ds1 { rho },
        family: DsFamily::Dromion,
        h: re(p.h),
        amp: amp_hat * (i() * p.theta).exp(),
        amp_star: None,
        g1: re(0.0),
        g2: re(0.0),
        g3: re(p.h),
        den,
        num,
        num_star: None,
        info: DsInfo {
            amplitude: amp_hat.norm(),
            g: [re(0.0), re(0.0), re(p.h)],
            dromion_coeffs: Some([a1, a2, a3]),
        },
    })
}

// ---------------------------------------------------------------------------
// lump
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct LumpParams {
    pub lambda: Complex64,
    pub nu: Complex64,
    pub mu: Complex64,
    pub theta: f64,
    pub h: f64,
}

/// The DS2^- lump: a rational traveling wave with |psi| ~ |nu| / |xi|^2,
/// peak 1/|nu| at xi = -lambda t - mu in the characteristic coordinate
/// xi = (x - iy)/2.
pub fn build_lump(p: &LumpParams) -> Result<DsSolution> {
    if p.nu.norm() == 0.0 {
        return Err(Error::ZeroParameter("nu"));
    }
    // denominator |xi + lambda t + mu|^2 + |nu|^2 as a 2x2 polynomial det
    let q = AffineArg {
        c1: re(1.0),
        c2: re(0.0),
        ct: p.lambda,
        c0: p.mu,
    };
    let q_star = AffineArg {
        c1: re(0.0),
        c2: re(1.0),
        ct: p.lambda.conj(),
        c0: p.mu.conj(),
    };
    let den = DetMatrixSpec::PolyDiag {
        size: 2,
        args: vec![q, q_star],
        offdiag: vec![vec![re(0.0), p.nu], vec![-p.nu.conj(), re(0.0)]],
    };
    let num = DetMatrixSpec::Exp {
        size: 1,
        args: Vec::new(),
        entries: vec![vec![ExpEntry::constant_only(p.nu)]],
    };
    let g1 = p.lambda;
    let g2 = p.lambda.conj();
    let g3 = -g1 * g1 - g2 * g2 + re(p.h);
    Ok(DsSolution {
        variant: DsVariant::Ds2 { rho: -1 },
        family: DsFamily::Lump,
        h: re(p.h),
        amp: (i() * p.theta).exp(),
        amp_star: None,
        g1,
        g2,
        g3,
        den,
        num,
        num_star: None,
        info: DsInfo {
            amplitude: 1.0 / p.nu.norm(),
            g: [g1, g2, g3],
            dromion_coeffs: None,
        },
    })
}

// ---------------------------------------------------------------------------
// symmetry
// ---------------------------------------------------------------------------

/// The shift-and-phase symmetry
/// psi -> psi(xi + b1 t, eta + b2 t, t) exp(-i(b1 xi + b2 eta + (b1^2+b2^2) t/2)),
/// folded into the stored arguments and plane-wave constants.
pub fn ds_symmetry(sol: &DsSolution, beta1: Complex64, beta2: Complex64) -> DsSolution {
    let rewrite = |args: &[AffineArg]| -> Vec<AffineArg> {
        args.iter()
            .map(|a| AffineArg {
                c1: a.c1,
                c2: a.c2,
                ct: a.ct + a.c1 * beta1 + a.c2 * beta2,
                c0: a.c0,
            })
            .collect()
    };
    let shift_spec = |spec: &DetMatrixSpec| -> DetMatrixSpec {
        match spec {
            DetMatrixSpec::Exp {
                size,
                args,
                entries,
            } => DetMatrixSpec::Exp {
                size: *size,
                args: rewrite(args),
                entries: entries.clone(),
            },
            DetMatrixSpec::PolyDiag {
                size,
                args,
                offdiag,
            } => DetMatrixSpec::PolyDiag {
                size: *size,
                args: rewrite(args),
                offdiag: offdiag.clone(),
            },
        }
    };
    let g3 = sol.g3 - 2.0 * sol.g1 * beta1 - 2.0 * sol.g2 * beta2 - beta1 * beta1 - beta2 * beta2;
    DsSolution {
        variant: sol.variant,
        family: sol.family,
        h: sol.h,
        amp: sol.amp,
        amp_star: sol.amp_star,
        g1: sol.g1 + beta1,
        g2: sol.g2 + beta2,
        g3,
        den: shift_spec(&sol.den),
        num: shift_spec(&sol.num),
        num_star: sol.num_star.as_ref().map(shift_spec),
        info: sol.info.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn char_coords_round_trip() {
        for variant in [DsVariant::Ds1 { rho: -1 }, DsVariant::Ds2 { rho: 1 }] {
            let (x, y) = (0.7, -1.3);
            let (xi, eta) = char_coords(variant, x, y);
            let (x2, y2) = char_coords_inverse(variant, xi, eta);
            assert!((x - x2).abs() < 1e-15 && (y - y2).abs() < 1e-15);
        }
        let (xi, eta) = char_coords(DsVariant::Ds1 { rho: 1 }, 1.0, 1.0);
        assert_eq!((xi, eta), (c(1.0, 0.0), c(0.0, 0.0)));
        let (xi, eta) = char_coords(DsVariant::Ds2 { rho: 1 }, 0.4, 0.9);
        assert_eq!(eta, xi.conj());
    }

    #[test]
    fn ds1_dark_reality_and_amplitude() {
        let p = DsDarkParams {
            variant: DsDarkVariant::Ds1 {
                wa: 8.0,
                wb: -1.0,
                kappa1: 1.0,
                kappa2: 1.0,
                u: vec![c(0.5, 0.8)],
            },
            h: 0.2,
            d: vec![0.1],
            theta: 0.4,
        };
        let sol = build_ds_dark(&p).unwrap();
        assert_eq!(sol.variant().rho(), -1);
        assert!((sol.amplitude() - 1.0 / 9.0).abs() < 1e-14);
        for &(x, y, t) in &[(0.3, -0.2, 0.1), (1.5, 0.9, -0.6)] {
            let psi = sol.psi(x, y, t).unwrap();
            let star = sol.psi_star(x, y, t).unwrap();
            assert!((star - re(-1.0) * psi.conj()).norm() <= 1e-12 * psi.norm());
            assert!(sol.phi(x, y, t).unwrap().im.abs() < 1e-12);
        }
    }

    #[test]
    fn ds2_dark_requires_interlacing() {
        let bad = DsDarkParams {
            variant: DsDarkVariant::Ds2Plus {
                wa: c(1.2, 0.8),
                kappa1: c(0.7, 0.4),
                u: vec![0.2, 2.1],
                v: vec![0.9, 1.5],
            },
            h: 0.3,
            d: vec![0.0, 0.0],
            theta: 0.0,
        };
        assert!(matches!(build_ds_dark(&bad), Err(Error::Constraint(_))));
        let good = DsDarkParams {
            variant: DsDarkVariant::Ds2Plus {
                wa: c(1.2, 0.8),
                kappa1: c(0.7, 0.4),
                u: vec![0.9, 2.1],
                v: vec![0.2, 1.5],
            },
            h: 0.3,
            d: vec![0.05, -0.2],
            theta: 0.0,
        };
        let sol = build_ds_dark(&good).unwrap();
        assert_eq!(sol.variant(), DsVariant::Ds2 { rho: 1 });
        let (x, y, t) = (0.3, -0.2, 0.1);
        let psi = sol.psi(x, y, t).unwrap();
        let star = sol.psi_star(x, y, t).unwrap();
        assert!((star - psi.conj()).norm() <= 1e-12 * psi.norm());
    }

    #[test]
    fn ds_breather_figure_parameters_build() {
        let p = DsBreatherParams {
            wa: 8.0,
            wb: -1.0,
            kappa1: 1.0,
            kappa2: 1.0,
            h: 0.0,
            u: vec![c(5.0, -2.0), c(2.0, 1.0), c(3.0, -1.0), c(1.0, 4.0)],
            d_hat: vec![c(0.0, 0.0), c(0.0, 0.0)],
            theta: 0.0,
        };
        let sol = build_ds_breather(&p).unwrap();
        assert_eq!(sol.variant(), DsVariant::Ds1 { rho: -1 });
        for &(x, y, t) in &[(0.3, -0.2, 0.0), (1.5, 0.9, 45.0)] {
            let psi = sol.psi(x, y, t).unwrap();
            let star = sol.psi_star(x, y, t).unwrap();
            assert!((star - re(-1.0) * psi.conj()).norm() <= 1e-10 * psi.norm().max(1e-12));
        }
    }

    #[test]
    fn dromion_coefficient_identity_and_decay() {
        let p = DromionParams {
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
        };
        let sol = build_dromion(&p).unwrap();
        let [a1, a2, a3] = sol.info.dromion_coeffs.unwrap();
        let expect = p.wa * p.wa * p.wb * p.wb
            / (4.0 * p.alpha_v1.im * p.alpha_u3.im * (p.alpha_u1 - p.alpha_v3).norm_sqr());
        assert!((a3 - a1 * a2 - expect).abs() <= 1e-12 * expect.abs());
        // decay along all rays
        let center = sol.psi(0.0, 0.0, 0.0).unwrap().norm();
        assert!(center > 1e-6);
        for &(x, y) in &[(60.0, 0.0), (-60.0, 0.0), (0.0, 60.0), (0.0, -60.0), (40.0, 40.0)] {
            assert!(sol.psi(x, y, 0.0).unwrap().norm() < 1e-10);
        }
    }

    #[test]
    fn dromion_rejects_nonpositive_coefficients() {
        let p = DromionParams {
            wa: 1.3,
            wb: -0.8,
            kappa1: 1.0,
            kappa2: 0.9,
            h: 0.0,
            theta: 0.0,
            alpha_u1: c(0.4, -0.6), // flips the sign of A1
            alpha_v1: c(0.3, 0.5),
            alpha_u3: c(-0.2, 0.7),
            alpha_v3: c(0.5, 0.4),
            d1: c(0.0, 0.0),
            d3: c(0.0, 0.0),
        };
        assert!(matches!(build_dromion(&p), Err(Error::Positivity { .. })));
    }

    #[test]
    fn lump_peak_and_decay() {
        let p = LumpParams {
            lambda: c(0.4, -0.3),
            nu: c(0.8, 0.5),
            mu: c(0.2, 0.1),
            theta: 0.15,
            h: 0.6,
        };
        let sol = build_lump(&p).unwrap();
        // peak at xi = -lambda t - mu, value 1/|nu|
        let t = 0.5;
        let target = -p.lambda * t - p.mu;
        // xi = (x - iy)/2 -> x = 2 Re xi, y = -2 Im xi
        let (x, y) = (2.0 * target.re, -2.0 * target.im);
        let peak = sol.psi(x, y, t).unwrap().norm();
        assert!((peak - 1.0 / p.nu.norm()).abs() < 1e-12);
        // |psi| ~ |nu| / |xi|^2 for large xi
        let xi_abs = 100.0;
        let m = sol.psi(2.0 * xi_abs, 0.0, 0.0).unwrap().norm();
        let predict = p.nu.norm() / (xi_abs * xi_abs);
        assert!(m / predict < 2.0 && m / predict > 0.5, "ratio {}", m / predict);
        // reality: psi* = -conj psi
        let star = sol.psi_star(1.0, -0.7, 0.3).unwrap();
        let psi = sol.psi(1.0, -0.7, 0.3).unwrap();
        assert!((star + psi.conj()).norm() < 1e-15);
    }

    #[test]
    fn symmetry_identity_and_translation() {
        let p = DsDarkParams {
            variant: DsDarkVariant::Ds1 {
                wa: 8.0,
                wb: -1.0,
                kappa1: 1.0,
                kappa2: 1.3,
                u: vec![c(0.5, 0.8)],
            },
            h: 0.0,
            d: vec![0.0],
            theta: 0.0,
        };
        let sol = build_ds_dark(&p).unwrap();
        let same = ds_symmetry(&sol, c(0.0, 0.0), c(0.0, 0.0));
        let (x, y, t) = (0.4, 0.9, -0.3);
        assert!((sol.psi(x, y, t).unwrap() - same.psi(x, y, t).unwrap()).norm() < 1e-14);

        // |psi| translates with velocity (-b1, -b2) in (xi, eta)
        let (b1, b2) = (0.6, -0.4);
        let moved = ds_symmetry(&sol, c(b1, 0.0), c(b2, 0.0));
        let t = 0.8;
        let (xi, eta) = (c(0.5, 0.0), c(-0.2, 0.0));
        let (x0, y0) = char_coords_inverse(sol.variant(), xi, eta);
        let (x1, y1) = char_coords_inverse(
            sol.variant(),
            xi + c(b1 * t, 0.0),
            eta + c(b2 * t, 0.0),
        );
        let lhs = moved.psi(x0, y0, t).unwrap().norm();
        let rhs = sol.psi(x1, y1, t).unwrap().norm();
        assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-12));
    }
}
