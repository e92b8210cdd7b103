//! Solution families of the multi-component nonlinear Schroedinger system.
//!
//! All families are built over a rational map f: the fiber over a chosen
//! value supplies the anchor points a_1..a_{n+1}, the pair points (u_k, v_k)
//! supply one exponential mode each, and the constants E_j, F_j, q2 come from
//! the degenerate pair formulas. Every constructor validates its family's
//! constraints before returning an immutable evaluator.

use num_complex::Complex64;

use crate::degen::{self, LocalParam, PairData};
use crate::det::{det_ratio, AffineArg, DetMatrixSpec, ExpEntry, ExpTerm};
use crate::error::{Error, Result};
use crate::map::RationalMap;

/// Relative tolerance for constraint validation at construction.
pub const CONSTRAINT_TOL: f64 = 1e-10;
/// Tolerance for the pair-merge (rational-breather) condition.
pub const MERGE_TOL: f64 = 1e-8;

fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Anything that evaluates like an n-NLS solution. The verifier consumes
/// only these samples, never the internal constants.
pub trait NlsField {
    fn components(&self) -> usize;
    fn signs(&self) -> &[i8];
    fn psi(&self, j: usize, x: f64, t: f64) -> Result<Complex64>;
    fn psi_star(&self, j: usize, x: f64, t: f64) -> Result<Complex64>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NlsFamily {
    Complexified,
    Dark,
    Bright,
    Breather,
    RationalBreather,
}

impl NlsFamily {
    pub fn label(&self) -> &'static str {
        match self {
            NlsFamily::Complexified => "complexified",
            NlsFamily::Dark => "dark",
            NlsFamily::Bright => "bright",
            NlsFamily::Breather => "breather",
            NlsFamily::RationalBreather => "rational-breather",
        }
    }
}

/// Derived constants kept for inspection and tests.
#[derive(Debug, Clone)]
pub struct NlsInfo {
    pub anchor: Complex64,
    pub others: Vec<Complex64>,
    pub q2: Vec<Complex64>,
    pub amplitude: Vec<f64>,
    pub v: Vec<Complex64>,
    pub w: Vec<Complex64>,
    pub r: Vec<Vec<Complex64>>,
}

/// An immutable n-NLS evaluator: component fields psi_j and their starred
/// counterparts, as determinant ratios times plane-wave phases.
pub struct NlsSolution {
    family: NlsFamily,
    n: usize,
    s: Vec<i8>,
    /// prefactor of psi_j (amplitude and theta phase folded in)
    amp: Vec<Complex64>,
    /// prefactor of psi*_j
    amp_star: Vec<Complex64>,
    e: Vec<Complex64>,
    f: Vec<Complex64>,
    den: DetMatrixSpec,
    num: Vec<DetMatrixSpec>,
    /// None: psi* is defined as s_j * conj(psi_j) (bright family)
    num_star: Vec<Option<DetMatrixSpec>>,
    pub info: NlsInfo,
}

impl NlsField for NlsSolution {
    fn components(&self) -> usize {
        self.n
    }

    fn signs(&self) -> &[i8] {
        &self.s
    }

    fn psi(&self, j: usize, x: f64, t: f64) -> Result<Complex64> {
        let x1 = re(x);
        let zero = re(0.0);
        let ratio = det_ratio(&self.num[j], &self.den, x1, zero, t)?;
        let phase = (i() * (-self.e[j] * x + self.f[j] * t)).exp();
        Ok(self.amp[j] * ratio * phase)
    }

    fn psi_star(&self, j: usize, x: f64, t: f64) -> Result<Complex64> {
        match &self.num_star[j] {
            Some(spec) => {
                let ratio = det_ratio(spec, &self.den, re(x), re(0.0), t)?;
                let phase = (i() * (self.e[j] * x - self.f[j] * t)).exp();
                Ok(self.amp_star[j] * ratio * phase)
            }
            None => Ok(re(self.s[j] as f64) * self.psi(j, x, t)?.conj()),
        }
    }
}

impl NlsSolution {
    pub fn family(&self) -> NlsFamily {
        self.family
    }

    pub fn e_j(&self) -> &[Complex64] {
        &self.e
    }

    pub fn f_j(&self) -> &[Complex64] {
        &self.f
    }

    /// Background amplitude A_j (dark asymptote; bright peak scale).
    pub fn amplitude(&self, j: usize) -> f64 {
        self.info.amplitude[j]
    }
}

/// Shared fiber bookkeeping: fiber points sorted lexicographically, anchor
/// removed, (k', k'') evaluated for every point.
struct FiberData {
    anchor: Complex64,
    others: Vec<Complex64>,
    anchor_k: (Complex64, Complex64),
    other_k: Vec<(Complex64, Complex64)>,
}

fn sorted_fiber(map: &RationalMap, value: Complex64) -> Result<Vec<Complex64>> {
    let mut fiber = map.fiber(value)?;
    fiber.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    Ok(fiber)
}

fn fiber_data(
    map: &RationalMap,
    value: Complex64,
    anchor_index: usize,
    local: &LocalParam,
) -> Result<FiberData> {
    let fiber = sorted_fiber(map, value)?;
    if anchor_index >= fiber.len() {
        return Err(Error::Config(format!(
            "anchor index {anchor_index} out of range for a fiber of {} points",
            fiber.len()
        )));
    }
    let anchor = fiber[anchor_index];
    let anchor_k = local.derivs(map, anchor, anchor_index)?;
    let mut others = Vec::new();
    let mut other_k = Vec::new();
    for (idx, &p) in fiber.iter().enumerate() {
        if idx != anchor_index {
            others.push(p);
            other_k.push(local.derivs(map, p, idx)?);
        }
    }
    Ok(FiberData {
        anchor,
        others,
        anchor_k,
        other_k,
    })
}

/// The fiber-sum condition sum_i V_{a_i,k} = 0 that every pair must satisfy;
/// returns the worst relative magnitude over pairs.
fn fiber_sum_violation(
    map: &RationalMap,
    value: Complex64,
    local: &LocalParam,
    pairs: &PairData,
) -> Result<f64> {
    let fiber = sorted_fiber(map, value)?;
    let mut worst: f64 = 0.0;
    for k in 0..pairs.genus() {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut scale: f64 = 0.0;
        for (idx, &a) in fiber.iter().enumerate() {
            let (k1, _) = local.derivs(map, a, idx)?;
            let term = degen::v_vector(a, k1, pairs)?[k];
            sum += term;
            scale = scale.max(term.norm());
        }
        worst = worst.max(sum.norm() / scale.max(1e-300));
    }
    Ok(worst)
}

fn build_t_solution(
    family: NlsFamily,
    fd: &FiberData,
    pairs: &PairData,
    d: &[Complex64],
    amplitudes: Option<&[Complex64]>,
    theta: f64,
    drop_ksecond: bool,
) -> Result<NlsSolution> {
    let n = fd.others.len();
    let g = pairs.genus();
    if d.len() != g {
        return Err(Error::Config(format!(
            "shift vector has {} entries, expected genus {g}",
            d.len()
        )));
    }
    let (k1a, k2a_raw) = fd.anchor_k;
    let k2a = if drop_ksecond { re(0.0) } else { k2a_raw };

    let v = degen::v_vector(fd.anchor, k1a, pairs)?;
    let w = degen::w_vector(fd.anchor, k1a, k2a, pairs)?;

    let mut q2 = Vec::with_capacity(n);
    let mut e = Vec::with_capacity(n);
    let mut r = Vec::with_capacity(n);
    for j in 0..n {
        let pc = degen::q2_k1(fd.anchor, fd.others[j], (k1a, k2a), fd.other_k[j])?;
        q2.push(pc.q2);
        e.push(pc.k1);
        r.push(degen::r_vector(fd.anchor, fd.others[j], pairs)?);
    }
    let q2_sum: Complex64 = q2.iter().sum();
    let f: Vec<Complex64> = e.iter().map(|&ej| -ej * ej + 2.0 * q2_sum).collect();

    let s: Vec<i8> = q2
        .iter()
        .map(|q| if q.re >= 0.0 { 1 } else { -1 })
        .collect();

    let (amp0, amp_star0, amplitude): (Vec<Complex64>, Vec<Complex64>, Vec<f64>) =
        match amplitudes {
            Some(a) => {
                if a.len() != n {
                    return Err(Error::Config(format!(
                        "amplitude vector has {} entries, expected {n}",
                        a.len()
                    )));
                }
                if a.iter().any(|aj| aj.norm() == 0.0) {
                    return Err(Error::ZeroParameter("amplitude A_j"));
                }
                (
                    a.to_vec(),
                    a.iter().zip(&q2).map(|(aj, qj)| qj / aj).collect(),
                    a.iter().map(|aj| aj.norm()).collect(),
                )
            }
            None => {
                let amps: Vec<f64> = q2.iter().map(|q| q.norm().sqrt()).collect();
                (
                    amps.iter().map(|&a| re(a)).collect(),
                    amps
                        .iter()
                        .zip(&q2)
                        .map(|(&a, qj)| qj / re(a))
                        .collect(),
                    amps,
                )
            }
        };

    let phase = (i() * theta).exp();
    let amp: Vec<Complex64> = amp0.iter().map(|&a| a * phase).collect();
    let amp_star: Vec<Complex64> = amp_star0.iter().map(|&a| a * phase.conj()).collect();

    let base_args: Vec<AffineArg> = (0..g)
        .map(|k| AffineArg {
            c1: i() * v[k],
            c2: re(0.0),
            ct: i() * w[k],
            c0: -d[k],
        })
        .collect();

    let den = DetMatrixSpec::theta(pairs, base_args.clone())?;
    let mut num = Vec::with_capacity(n);
    let mut num_star = Vec::with_capacity(n);
    for j in 0..n {
        let plus: Vec<AffineArg> = base_args
            .iter()
            .enumerate()
            .map(|(k, a)| a.shifted(r[j][k]))
            .collect();
        let minus: Vec<AffineArg> = base_args
            .iter()
            .enumerate()
            .map(|(k, a)| a.shifted(-r[j][k]))
            .collect();
        num.push(DetMatrixSpec::theta(pairs, plus)?);
        num_star.push(Some(DetMatrixSpec::theta(pairs, minus)?));
    }

    Ok(NlsSolution {
        family,
        n,
        s,
        amp,
        amp_star,
        e,
        f,
        den,
        num,
        num_star,
        info: NlsInfo {
            anchor: fd.anchor,
            others: fd.others.clone(),
            q2,
            amplitude,
            v,
            w,
            r,
        },
    })
}

// ---------------------------------------------------------------------------
// complexified family
// ---------------------------------------------------------------------------

/// Parameters of the complexified determinantal family: all constraints are
/// the structural ones (the fiber-sum condition), no reality is imposed.
#[derive(Debug, Clone)]
pub struct NlsGeneralParams {
    pub map: RationalMap,
    pub fiber_value: Complex64,
    pub anchor_index: usize,
    pub pairs: PairData,
    pub d: Vec<Complex64>,
    pub amplitudes: Vec<Complex64>,
    pub theta: f64,
    pub local_param: LocalParam,
}

/// Solutions of the complexified system; psi and psi* are independent fields.
pub fn build_complexified(p: &NlsGeneralParams) -> Result<NlsSolution> {
    let viol = fiber_sum_violation(&p.map, p.fiber_value, &p.local_param, &p.pairs)?;
    if viol > CONSTRAINT_TOL {
        return Err(Error::Constraint(format!(
            "fiber-sum condition violated: relative magnitude {viol:.3e} (pairs must have equal projections)"
        )));
    }
    let fd = fiber_data(&p.map, p.fiber_value, p.anchor_index, &p.local_param)?;
    build_t_solution(
        NlsFamily::Complexified,
        &fd,
        &p.pairs,
        &p.d,
        Some(&p.amplitudes),
        p.theta,
        false,
    )
}

// ---------------------------------------------------------------------------
// dark multi-solitons
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct NlsDarkParams {
    pub map: RationalMap,
    pub fiber_value: f64,
    pub anchor_index: usize,
    /// Upper pair representatives; v_k = conj(u_k) is implied.
    pub u: Vec<Complex64>,
    pub d: Vec<f64>,
    pub theta: f64,
}

/// Smooth dark N-solitons. Requires a real map with a real fiber, conjugate
/// pairs with real projections, and yields s != (+1,...,+1) by the focusing
/// obstruction.
pub fn build_dark(p: &NlsDarkParams) -> Result<NlsSolution> {
    if !p.map.is_real_map() {
        return Err(Error::Constraint("dark solitons need a real map".into()));
    }
    let local = LocalParam::FunctionShift;
    let fiber = sorted_fiber(&p.map, re(p.fiber_value))?;
    if let Some(bad) = fiber.iter().find(|a| a.im.abs() > CONSTRAINT_TOL) {
        return Err(Error::Constraint(format!(
            "dark solitons need a real fiber; found point {bad}"
        )));
    }
    for (k, &u) in p.u.iter().enumerate() {
        if u.im.abs() < CONSTRAINT_TOL {
            return Err(Error::Constraint(format!(
                "pair point u_{k} = {u} must be non-real (v = conj u would coincide)"
            )));
        }
        let fu = p.map.eval(u)?;
        if fu.im.abs() > CONSTRAINT_TOL * fu.norm().max(1.0) {
            return Err(Error::Constraint(format!(
                "dark pair condition f(u_{k}) = f(conj u_{k}) fails: f(u) = {fu} is not real"
            )));
        }
    }
    let pairs = PairData::new(p.u.clone(), p.u.iter().map(|u| u.conj()).collect())?;
    let fd = fiber_data(&p.map, re(p.fiber_value), p.anchor_index, &local)?;
    let d: Vec<Complex64> = p.d.iter().map(|&x| re(x)).collect();
    let sol = build_t_solution(NlsFamily::Dark, &fd, &pairs, &d, None, p.theta, false)?;
    if sol.s.iter().all(|&sj| sj == 1) {
        return Err(Error::AllFocusing);
    }
    Ok(sol)
}

/// The balance identity behind the focusing obstruction, evaluated at one
/// pair: 1/|a_{n+1}-v|^2 + sum_j (f'(a_{n+1})/f'(a_j)) / |a_j-v|^2.
/// Vanishes for every valid dark pair.
pub fn dark_balance_residual(
    map: &RationalMap,
    fiber_value: f64,
    anchor_index: usize,
    u: Complex64,
) -> Result<f64> {
    let fiber = sorted_fiber(map, re(fiber_value))?;
    let anchor = fiber[anchor_index];
    let fpa = map.deriv(anchor, 1)?;
    let v = u.conj();
    let mut sum = 1.0 / (anchor - v).norm_sqr();
    let mut scale = sum.abs();
    for (idx, &a) in fiber.iter().enumerate() {
        if idx == anchor_index {
            continue;
        }
        let term = (fpa / map.deriv(a, 1)?).re / (a - v).norm_sqr();
        sum += term;
        scale = scale.max(term.abs());
    }
    Ok(sum.abs() / scale)
}

/// Upper-half-plane fiber points of a real map over a real value: the raw
/// material for dark pairs.
pub fn dark_pair_candidates(map: &RationalMap, value: f64) -> Result<Vec<Complex64>> {
    Ok(sorted_fiber(map, re(value))?
        .into_iter()
        .filter(|w| w.im > CONSTRAINT_TOL)
        .collect())
}

// ---------------------------------------------------------------------------
// breathers
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct NlsBreatherParams {
    pub map: RationalMap,
    pub fiber_value: f64,
    pub anchor_index: usize,
    /// u_1, u_2, ..., u_{2N}: consecutive pairs share a projection value c_k
    /// and its conjugate; v is derived as v_{2k-1} = conj(u_{2k}),
    /// v_{2k} = conj(u_{2k-1}).
    pub u: Vec<Complex64>,
    /// d-hat for the odd indices; even entries are conjugated.
    pub d_hat: Vec<Complex64>,
    pub theta: f64,
    /// Apply the Galilean simplification that removes the k'' terms
    /// (the figures use it).
    pub apply_transform: bool,
}

/// N-breathers: periodic-in-one-variable, localized in the other.
pub fn build_breather(p: &NlsBreatherParams) -> Result<NlsSolution> {
    if !p.map.is_real_map() {
        return Err(Error::Constraint("breathers need a real map".into()));
    }
    if p.u.len() % 2 != 0 || p.u.is_empty() {
        return Err(Error::Config(
            "breather pair list must contain 2N points".into(),
        ));
    }
    let n_pairs = p.u.len() / 2;
    if p.d_hat.len() != n_pairs {
        return Err(Error::Config(format!(
            "d-hat has {} entries, expected N = {n_pairs}",
            p.d_hat.len()
        )));
    }
    let fiber = sorted_fiber(&p.map, re(p.fiber_value))?;
    if let Some(bad) = fiber.iter().find(|a| a.im.abs() > CONSTRAINT_TOL) {
        return Err(Error::Constraint(format!(
            "breathers need a real fiber; found point {bad}"
        )));
    }
    // v from the conjugation pairing, then the equal-projection condition
    let mut u = Vec::with_capacity(2 * n_pairs);
    let mut v = Vec::with_capacity(2 * n_pairs);
    for k in 0..n_pairs {
        let (u_odd, u_even) = (p.u[2 * k], p.u[2 * k + 1]);
        u.push(u_odd);
        u.push(u_even);
        v.push(u_even.conj());
        v.push(u_odd.conj());
    }
    for k in 0..2 * n_pairs {
        let fu = p.map.eval(u[k])?;
        let fv = p.map.eval(v[k])?;
        if (fu - fv).norm() > CONSTRAINT_TOL * fu.norm().max(1.0) {
            return Err(Error::Constraint(format!(
                "pair {k} projections differ: f(u) = {fu}, f(v) = {fv}"
            )));
        }
    }
    let pairs = PairData::new(u, v)?;
    let mut d = Vec::with_capacity(2 * n_pairs);
    for k in 0..n_pairs {
        d.push(p.d_hat[k]);
        d.push(p.d_hat[k].conj());
    }
    let fd = fiber_data(&p.map, re(p.fiber_value), p.anchor_index, &LocalParam::FunctionShift)?;
    build_t_solution(
        NlsFamily::Breather,
        &fd,
        &pairs,
        &d,
        None,
        p.theta,
        p.apply_transform,
    )
}

/// Picks two distinct points of the fiber over c (sorted order); the caller
/// gets (u_odd, u_even) = (fiber(c)[first], conj(fiber(c)[second])) so that
/// the derived v's close the breather pairing.
pub fn breather_pair_from_fiber(
    map: &RationalMap,
    c: Complex64,
    first: usize,
    second: usize,
) -> Result<(Complex64, Complex64)> {
    let fiber = sorted_fiber(map, c)?;
    if first == second || first >= fiber.len() || second >= fiber.len() {
        return Err(Error::Config(format!(
            "invalid fiber selection ({first}, {second}) for {} points",
            fiber.len()
        )));
    }
    Ok((fiber[first], fiber[second].conj()))
}

// ---------------------------------------------------------------------------
// bright multi-solitons
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct NlsBrightParams {
    /// The n real anchor values w_{a_j}; all nonzero.
    pub anchors: Vec<f64>,
    /// Coupling weights; s_j = sign(gamma_j).
    pub gammas: Vec<f64>,
    /// The N free pair points w_{v_{2k-1}}.
    pub v: Vec<Complex64>,
    pub d_hat: Vec<Complex64>,
    pub theta: f64,
}

/// Bright N-solitons: |psi_j| -> 0 in both spatial directions.
pub fn build_bright(p: &NlsBrightParams) -> Result<NlsSolution> {
    let n = p.anchors.len();
    let npairs = p.v.len();
    if n == 0 || p.gammas.len() != n {
        return Err(Error::Config(
            "bright solitons need matching anchor and gamma lists".into(),
        ));
    }
    if p.d_hat.len() != npairs || npairs == 0 {
        return Err(Error::Config(
            "bright solitons need one d-hat per pair".into(),
        ));
    }
    if p.gammas.iter().any(|&g| g == 0.0) {
        return Err(Error::ZeroParameter("gamma_j"));
    }
    if p.anchors.iter().any(|&a| a == 0.0) {
        return Err(Error::ZeroParameter("anchor w_{a_j}"));
    }

    let g2 = 2 * npairs;
    // alpha_{u_{2k-1}} from the degenerate fiber-sum condition
    let alpha: Vec<Complex64> = p
        .v
        .iter()
        .map(|&vk| {
            p.anchors
                .iter()
                .zip(&p.gammas)
                .map(|(&aj, &gj)| gj * (1.0 / re(aj) - 1.0 / (re(aj) - vk)))
                .sum()
        })
        .collect();
    for (k, (&vk, &ak)) in p.v.iter().zip(&alpha).enumerate() {
        if vk.im.abs() < CONSTRAINT_TOL || ak.norm() == 0.0 {
            return Err(Error::Constraint(format!(
                "bright pair {k}: v must be non-real and alpha nonzero (v = {vk}, alpha = {ak})"
            )));
        }
        // smooth denominator needs the mode coefficient positive
        if vk.im * ak.im >= 0.0 {
            return Err(Error::Constraint(format!(
                "bright pair {k} is singular: Im(v) Im(alpha) = {:.3e} must be negative",
                vk.im * ak.im
            )));
        }
    }

    // interleaved data: odd (0-based even) slots hold the free v and alpha_u,
    // even slots their conjugates
    let mut wv = vec![re(0.0); g2]; // w_{v_i} for odd i
    let mut wu = vec![re(0.0); g2]; // w_{u_i} for even i
    let mut au = vec![re(0.0); g2]; // alpha_{u_k} for odd k
    let mut av = vec![re(0.0); g2]; // alpha_{v_i} for even i
    let mut args = vec![AffineArg::constant(re(0.0)); g2];
    for k in 0..npairs {
        wv[2 * k] = p.v[k];
        wu[2 * k + 1] = p.v[k].conj();
        au[2 * k] = alpha[k];
        av[2 * k + 1] = alpha[k].conj();
        let a = alpha[k];
        args[2 * k] = AffineArg {
            c1: i() * a,
            c2: re(0.0),
            ct: i() * a * a,
            c0: -p.d_hat[k],
        };
        args[2 * k + 1] = AffineArg {
            c1: (i() * a).conj(),
            c2: re(0.0),
            ct: (i() * a * a).conj(),
            c0: -p.d_hat[k].conj(),
        };
    }

    // r-hat offsets per component
    let mut rhat = vec![vec![re(0.0); g2]; n];
    for j in 0..n {
        let aj = re(p.anchors[j]);
        for k in 0..npairs {
            let r = ((aj - p.v[k]) / (aj * p.v[k] * alpha[k])).ln();
            rhat[j][2 * k] = r;
            rhat[j][2 * k + 1] = -r.conj();
        }
    }

    let den = bright_m_matrix(&wv, &wu, &au, &av, &args)?;
    let mut num = Vec::with_capacity(n);
    for j in 0..n {
        num.push(bright_k_matrix(&wv, &wu, &au, &av, &args, &rhat[j])?);
    }

    let s: Vec<i8> = p.gammas.iter().map(|&g| if g > 0.0 { 1 } else { -1 }).collect();
    let amplitude: Vec<f64> = p
        .gammas
        .iter()
        .zip(&p.anchors)
        .map(|(&g, &a)| g.abs().sqrt() / a.abs())
        .collect();
    let phase = (i() * p.theta).exp();
    let amp: Vec<Complex64> = amplitude.iter().map(|&a| re(a) * phase).collect();

    Ok(NlsSolution {
        family: NlsFamily::Bright,
        n,
        s,
        amp_star: amp.iter().map(|a| a.conj()).collect(),
        amp,
        e: vec![re(0.0); n],
        f: vec![re(0.0); n],
        den,
        num,
        num_star: vec![None; n],
        info: NlsInfo {
            anchor: re(0.0),
            others: p.anchors.iter().map(|&a| re(a)).collect(),
            q2: alpha,
            amplitude,
            v: Vec::new(),
            w: Vec::new(),
            r: rhat,
        },
    })
}

/// The bright denominator matrix M: identity on same-parity entries,
/// alpha-weighted exponentials on mixed ones.
fn bright_m_matrix(
    wv: &[Complex64],
    wu: &[Complex64],
    au: &[Complex64],
    av: &[Complex64],
    args: &[AffineArg],
) -> Result<DetMatrixSpec> {
    let g2 = args.len();
    let mut entries = vec![vec![ExpEntry::default(); g2]; g2];
    for idx_i in 0..g2 {
        for idx_k in 0..g2 {
            let (pi, pk) = (idx_i + 1, idx_k + 1); // 1-based parities
            let mut e = ExpEntry::default();
            if pi % 2 == pk % 2 {
                if idx_i == idx_k {
                    e.constant = re(1.0);
                }
            } else if pi % 2 == 0 {
                // even row, odd column
                let coeff = au[idx_k] * av[idx_i] * (wu[idx_i] / (av[idx_i] - au[idx_k]));
                e.terms.push(ExpTerm {
                    coeff,
                    z_weights: vec![(idx_i, 0.5), (idx_k, 0.5)],
                    shift: re(0.0),
                });
            } else {
                // odd row, even column
                let coeff = wv[idx_i] / (wv[idx_i] - wu[idx_k]);
                e.terms.push(ExpTerm {
                    coeff,
                    z_weights: vec![(idx_i, 0.5), (idx_k, 0.5)],
                    shift: re(0.0),
                });
            }
            entries[idx_i][idx_k] = e;
        }
    }
    Ok(DetMatrixSpec::Exp {
        size: g2,
        args: args.to_vec(),
        entries,
    })
}

/// The bright numerator matrix K_j with its distinguished second row.
fn bright_k_matrix(
    wv: &[Complex64],
    wu: &[Complex64],
    au: &[Complex64],
    av: &[Complex64],
    args: &[AffineArg],
    rhat: &[Complex64],
) -> Result<DetMatrixSpec> {
    let g2 = args.len();
    let mut entries = vec![vec![ExpEntry::default(); g2]; g2];
    for idx_i in 0..g2 {
        for idx_k in 0..g2 {
            let (pi, pk) = (idx_i + 1, idx_k + 1);
            let mut e = ExpEntry::default();
            if pi % 2 == 0 && pk % 2 == 0 {
                if idx_i == idx_k {
                    e.constant = re(1.0);
                }
                if pi == 2 && pk == 2 {
                    e.constant -= re(1.0);
                }
                if pi == 2 {
                    // (w_{u_2}/w_{u_k}) e^{(z_2 + z_k + rhat_2 + rhat_k)/2}
                    e.terms.push(ExpTerm {
                        coeff: wu[1] / wu[idx_k],
                        z_weights: if idx_k == 1 {
                            vec![(1, 1.0)]
                        } else {
                            vec![(1, 0.5), (idx_k, 0.5)]
                        },
                        shift: 0.5 * (rhat[1] + rhat[idx_k]),
                    });
                }
                if pk == 2 && pi != 2 {
                    // -(w_{u_i}/w_{u_2}) e^{(z_i - z_2 + rhat_i - rhat_2)/2}
                    e.terms.push(ExpTerm {
                        coeff: -(wu[idx_i] / wu[1]),
                        z_weights: vec![(idx_i, 0.5), (1, -0.5)],
                        shift: 0.5 * (rhat[idx_i] - rhat[1]),
                    });
                }
            } else if pi % 2 == 0 && pk % 2 == 1 {
                let coeff = au[idx_k] * au[idx_k] * (wu[idx_i] / (av[idx_i] - au[idx_k]))
                    * ((av[1] - av[idx_i]) / (av[1] - au[idx_k]));
                e.terms.push(ExpTerm {
                    coeff,
                    z_weights: vec![(idx_i, 0.5), (idx_k, 0.5)],
                    shift: 0.5 * (rhat[idx_i] + rhat[idx_k]),
                });
            } else if pi % 2 == 1 && pk % 2 == 0 {
                let coeff = wv[idx_i] / (wv[idx_i] - wu[idx_k]);
                e.terms.push(ExpTerm {
                    coeff,
                    z_weights: vec![(idx_i, 0.5), (idx_k, 0.5)],
                    shift: 0.5 * (rhat[idx_i] + rhat[idx_k]),
                });
            } else if idx_i == idx_k {
                e.constant = re(1.0);
            }
            entries[idx_i][idx_k] = e;
        }
    }
    Ok(DetMatrixSpec::Exp {
        size: g2,
        args: args.to_vec(),
        entries,
    })
}

// ---------------------------------------------------------------------------
// rational breathers
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct NlsRationalParams {
    pub map: RationalMap,
    pub fiber_value: f64,
    pub anchor_index: usize,
    /// The N pair-merge points (one per rational breather); their conjugates
    /// complete the data. Each must satisfy the merge condition
    /// sum_i (1/k'_{a_i}) (u - a_i)^{-2} = 0.
    pub u: Vec<Complex64>,
    pub d_hat: Vec<Complex64>,
    pub theta: f64,
    pub local_param: LocalParam,
}

/// Numerator polynomial of the pair-merge condition
/// sum_i (1/k'_{a_i}) (w - a_i)^{-2} = 0 for the given local parameters.
/// Its complex-conjugate root pairs seed rational breathers.
pub fn pair_merge_polynomial(
    map: &RationalMap,
    fiber_value: f64,
    local: &LocalParam,
) -> Result<crate::poly::CxPolynomial> {
    use crate::poly::CxPolynomial;
    let fiber = sorted_fiber(map, re(fiber_value))?;
    let mut num = CxPolynomial::zero();
    for (idx, &a) in fiber.iter().enumerate() {
        let (k1, _) = local.derivs(map, a, idx)?;
        let mut q = CxPolynomial::one();
        for (j, &aj) in fiber.iter().enumerate() {
            if j != idx {
                let lin = CxPolynomial::linear(aj);
                q = q.mul(&lin).mul(&lin);
            }
        }
        num = num.add(&q.scale(1.0 / k1));
    }
    Ok(num)
}

/// N rational breathers (Peregrine-type for N = n = 1): polynomial quotients
/// localized in both x and t.
pub fn build_rational_breather(p: &NlsRationalParams) -> Result<NlsSolution> {
    if !p.map.is_real_map() {
        return Err(Error::Constraint(
            "rational breathers need a real map".into(),
        ));
    }
    let npairs = p.u.len();
    let n = p.map.degree() - 1;
    if npairs == 0 || npairs > n {
        return Err(Error::TooManyBreathers {
            n_requested: npairs,
            n_components: n,
        });
    }
    if p.d_hat.len() != npairs {
        return Err(Error::Config(
            "rational breathers need one d-hat per merge point".into(),
        ));
    }
    let fiber = sorted_fiber(&p.map, re(p.fiber_value))?;
    if let Some(bad) = fiber.iter().find(|a| a.im.abs() > CONSTRAINT_TOL) {
        return Err(Error::Constraint(format!(
            "rational breathers need a real fiber; found point {bad}"
        )));
    }
    // validate the merge condition at each u
    for (k, &u) in p.u.iter().enumerate() {
        if u.im.abs() < CONSTRAINT_TOL {
            return Err(Error::Constraint(format!(
                "merge point u_{k} = {u} must be complex (conjugate pair)"
            )));
        }
        let mut cond = Complex64::new(0.0, 0.0);
        for (idx, &a) in fiber.iter().enumerate() {
            let (k1, _) = p.local_param.derivs(&p.map, a, idx)?;
            cond += 1.0 / (k1 * (u - a) * (u - a));
        }
        if cond.norm() > MERGE_TOL {
            return Err(Error::NonCriticalPoint {
                index: k,
                magnitude: cond.norm(),
            });
        }
    }
    let fd = fiber_data(&p.map, re(p.fiber_value), p.anchor_index, &p.local_param)?;
    let (k1a, _) = fd.anchor_k;

    // pair constants with the k'' terms removed by the built-in transform
    let mut q2 = Vec::with_capacity(n);
    let mut e = Vec::with_capacity(n);
    for j in 0..n {
        let pc = degen::q2_k1(
            fd.anchor,
            fd.others[j],
            (k1a, re(0.0)),
            (fd.other_k[j].0, re(0.0)),
        )?;
        q2.push(pc.q2);
        e.push(pc.k1);
    }
    let q2_sum: Complex64 = q2.iter().sum();
    let f: Vec<Complex64> = e.iter().map(|&ej| -ej * ej + 2.0 * q2_sum).collect();
    let s: Vec<i8> = q2
        .iter()
        .map(|q| if q.re >= 0.0 { 1 } else { -1 })
        .collect();
    let amplitude: Vec<f64> = q2.iter().map(|q| q.norm().sqrt()).collect();

    let g2 = 2 * npairs;
    // interleaved merge points (u, conj u) and hatted coefficients
    let mut base = vec![re(0.0); g2];
    let mut args = vec![AffineArg::constant(re(0.0)); g2];
    for k in 0..npairs {
        let u = p.u[k];
        base[2 * k] = u;
        base[2 * k + 1] = u.conj();
        let vh = 1.0 / (k1a * (fd.anchor - u) * (fd.anchor - u));
        let wh = -2.0 / (k1a * k1a * (fd.anchor - u).powu(3));
        args[2 * k] = AffineArg {
            c1: i() * vh,
            c2: re(0.0),
            ct: i() * wh,
            c0: -p.d_hat[k],
        };
        // even-index hats are plain conjugates; the shift flips sign
        args[2 * k + 1] = AffineArg {
            c1: (i() * vh).conj() * re(-1.0),
            c2: re(0.0),
            ct: (i() * wh).conj() * re(-1.0),
            c0: p.d_hat[k].conj(),
        };
    }
    // NOTE on conventions: arg_even(x,t) = -conj(arg_odd(x,t)) on real (x,t),
    // i.e. z_even = -conj(z_odd), which together with rhat_even =
    // conj(rhat_odd) makes conj(det K_beta) = det K_{-beta}.

    let mut offdiag = vec![vec![re(0.0); g2]; g2];
    for a in 0..g2 {
        for b in 0..g2 {
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

    let den = DetMatrixSpec::PolyDiag {
        size: g2,
        args: args.clone(),
        offdiag: offdiag.clone(),
    };
    let mut num = Vec::with_capacity(n);
    let mut num_star = Vec::with_capacity(n);
    for j in 0..n {
        let mut rh = vec![re(0.0); g2];
        for k in 0..npairs {
            let u = p.u[k];
            let r = -(fd.anchor - fd.others[j]) / ((fd.anchor - u) * (fd.others[j] - u));
            rh[2 * k] = r;
            rh[2 * k + 1] = r.conj();
        }
        let shift = |sign: f64| -> Vec<AffineArg> {
            args.iter()
                .enumerate()
                .map(|(k, a)| a.shifted(re(sign) * rh[k]))
                .collect()
        };
        num.push(DetMatrixSpec::PolyDiag {
            size: g2,
            args: shift(1.0),
            offdiag: offdiag.clone(),
        });
        num_star.push(Some(DetMatrixSpec::PolyDiag {
            size: g2,
            args: shift(-1.0),
            offdiag: offdiag.clone(),
        }));
    }

    let phase = (i() * p.theta).exp();
    let amp: Vec<Complex64> = amplitude.iter().map(|&a| re(a) * phase).collect();
    let amp_star: Vec<Complex64> = amplitude
        .iter()
        .zip(&s)
        .map(|(&a, &sj)| re(sj as f64 * a) * phase.conj())
        .collect();

    Ok(NlsSolution {
        family: NlsFamily::RationalBreather,
        n,
        s,
        amp,
        amp_star,
        e,
        f,
        den,
        num,
        num_star,
        info: NlsInfo {
            anchor: fd.anchor,
            others: fd.others,
            q2,
            amplitude,
            v: Vec::new(),
            w: Vec::new(),
            r: Vec::new(),
        },
    })
}

// ---------------------------------------------------------------------------
// Galilean symmetry
// ---------------------------------------------------------------------------

/// The boost/scaling symmetry of the complexified system:
/// psi_j -> psi_j(beta x + 2 beta lambda t, beta^2 t) exp(-i(lambda x + lambda^2 t)),
/// psi*_j -> beta^2 psi*_j(...) exp(+i(...)), with lambda = mu / beta.
/// Folded directly into the stored affine arguments and phase constants, so
/// the result is again a plain [`NlsSolution`]. Reality of the physical
/// families is preserved for beta = +-1 and real mu.
pub fn galilean_transform(sol: &NlsSolution, beta: Complex64, mu: Complex64) -> Result<NlsSolution> {
    if beta.norm() == 0.0 {
        return Err(Error::ZeroParameter("beta"));
    }
    let lambda = mu / beta;
    let boost_args = |spec: &DetMatrixSpec| -> DetMatrixSpec {
        let rewrite = |args: &[AffineArg]| -> Vec<AffineArg> {
            args.iter()
                .map(|a| AffineArg {
                    c1: a.c1 * beta,
                    c2: a.c2,
                    ct: a.c1 * 2.0 * beta * lambda + a.ct * beta * beta,
                    c0: a.c0,
                })
                .collect()
        };
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
    let e: Vec<Complex64> = sol.e.iter().map(|&ej| beta * ej + lambda).collect();
    let f: Vec<Complex64> = sol
        .e
        .iter()
        .zip(&sol.f)
        .map(|(&ej, &fj)| fj * beta * beta - 2.0 * beta * lambda * ej - lambda * lambda)
        .collect();
    Ok(NlsSolution {
        family: sol.family,
        n: sol.n,
        s: sol.s.clone(),
        amp: sol.amp.clone(),
        amp_star: sol.amp_star.iter().map(|&a| a * beta * beta).collect(),
        e,
        f,
        den: boost_args(&sol.den),
        num: sol.num.iter().map(boost_args).collect(),
        num_star: sol
            .num_star
            .iter()
            .map(|o| o.as_ref().map(boost_args))
            .collect(),
        info: sol.info.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::PointOnSphere;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// f = (w^2 - 1) / w^2: real map whose fibers over c > 1 are conjugate
    /// pairs, the scalar defocusing workhorse.
    fn dark_scalar_map() -> RationalMap {
        RationalMap::new(
            vec![PointOnSphere::finite(1.0, 0.0), PointOnSphere::finite(-1.0, 0.0)],
            vec![PointOnSphere::finite(0.0, 0.0), PointOnSphere::finite(0.0, 0.0)],
            c(1.0, 0.0),
        )
        .unwrap()
    }

    fn fig1_map() -> RationalMap {
        RationalMap::polynomial_from_zeros(
            &[10.0, -5.0, -1.0 / 3.0, 0.25, 0.5].map(|z| c(z, 0.0)),
            c(1.0, 0.0),
        )
        .unwrap()
    }

    #[test]
    fn dark_scalar_n1_matches_closed_form() {
        let map = dark_scalar_map();
        // fiber over 2: w^2 (1 - 2) = 1 -> w = +- i
        let u = vec![c(0.0, 1.0)];
        let p = NlsDarkParams {
            map,
            fiber_value: 0.0,
            anchor_index: 0, // sorted fiber of 0 is (-1, 1); anchor = -1
            u,
            d: vec![0.3],
            theta: 0.1,
        };
        let sol = build_dark(&p).unwrap();
        assert_eq!(sol.signs(), &[-1]);
        // A_1 = |q2|^(1/2); f'(+-1) = +-2 -> q2 = 1/(f'(-1) f'(1) * 4) = -1/16
        assert!((sol.amplitude(0) - 0.25).abs() < 1e-12);

        // N=1 closed form: A (1 + e^{Z - d + r}) / (1 + e^{Z - d}) * phases
        let v0 = sol.info.v[0];
        let w0 = sol.info.w[0];
        let r0 = sol.info.r[0][0];
        let (x, t) = (0.7, -0.4);
        let z = i() * v0 * x + i() * w0 * t - c(0.3, 0.0);
        let expect = c(0.25, 0.0)
            * (i() * c(0.1, 0.0)).exp()
            * ((c(1.0, 0.0) + (z + r0).exp()) / (c(1.0, 0.0) + z.exp()))
            * (i() * (-sol.e_j()[0] * x + sol.f_j()[0] * t)).exp();
        let got = sol.psi(0, x, t).unwrap();
        assert!((got - expect).norm() < 1e-12 * expect.norm());
    }

    #[test]
    fn dark_reality_and_asymptotics() {
        let p = NlsDarkParams {
            map: dark_scalar_map(),
            fiber_value: 0.0,
            anchor_index: 0,
            u: vec![c(0.0, 1.0), c(0.0, 0.5)],
            d: vec![0.3, -0.2],
            theta: 0.0,
        };
        let sol = build_dark(&p).unwrap();
        for &(x, t) in &[(0.3, 0.1), (1.5, -0.7), (-2.0, 0.4)] {
            let psi = sol.psi(0, x, t).unwrap();
            let star = sol.psi_star(0, x, t).unwrap();
            let target = c(sol.signs()[0] as f64, 0.0) * psi.conj();
            assert!((star - target).norm() <= 1e-10 * psi.norm());
        }
        let a = sol.amplitude(0);
        for &x in &[50.0, -50.0] {
            let m = sol.psi(0, x, 0.0).unwrap().norm();
            assert!((m - a).abs() < 1e-6, "|psi({x})| = {m}, A = {a}");
        }
    }

    #[test]
    fn dark_rejects_all_focusing_attempts() {
        // f = (w-1)(w+1)/w has f' > 0 at both zeros, but its fibers over real
        // values have no complex points, so every pair attempt must fail.
        let map = RationalMap::new(
            vec![PointOnSphere::finite(1.0, 0.0), PointOnSphere::finite(-1.0, 0.0)],
            vec![PointOnSphere::finite(0.0, 0.0), PointOnSphere::Infinity],
            c(1.0, 0.0),
        )
        .unwrap();
        let p = NlsDarkParams {
            map,
            fiber_value: 0.0,
            anchor_index: 0,
            u: vec![c(0.3, 0.9)],
            d: vec![0.0],
            theta: 0.0,
        };
        assert!(matches!(build_dark(&p), Err(Error::Constraint(_))));
    }

    #[test]
    fn dark_balance_identity_holds() {
        let map = dark_scalar_map();
        for &u in &[c(0.0, 1.0), c(0.0, 0.5)] {
            let r = dark_balance_residual(&map, 0.0, 0, u).unwrap();
            assert!(r < 1e-10, "balance residual {r}");
        }
    }

    #[test]
    fn fig1_breather_signs_and_reality() {
        let map = fig1_map();
        let (u1, u2) = {
            let f1 = sorted_fiber(&map, c(0.0, 2.0)).unwrap();
            let f2 = sorted_fiber(&map, c(0.0, -2.0)).unwrap();
            let u1 = *f1
                .iter()
                .find(|w| (w.re - 0.55).abs() < 0.05 && (w.im + 0.11).abs() < 0.05)
                .unwrap();
            let u2 = *f2
                .iter()
                .find(|w| (w.re + 0.35).abs() < 0.05 && (w.im - 0.07).abs() < 0.05)
                .unwrap();
            (u1, u2)
        };
        let p = NlsBreatherParams {
            map,
            fiber_value: 0.0,
            anchor_index: 4, // sorted zeros: -5, -1/3, 1/4, 1/2, 10 -> anchor 10?
            u: vec![u1, u2],
            d_hat: vec![c(0.0, 0.0)],
            theta: 0.0,
            apply_transform: true,
        };
        // the paper's anchor is a_5 = 1/2: sorted order (-5, -1/3, 1/4, 1/2, 10)
        let p = NlsBreatherParams {
            anchor_index: 3,
            ..p
        };
        let sol = build_breather(&p).unwrap();
        // sorted component order (-5, -1/3, 1/4, 10); the published
        // labels (a_1..a_4) = (10, -5, -1/3, 1/4) carry signs (-,-,+,-)
        assert_eq!(sol.signs(), &[-1, 1, -1, -1]);
        for j in 0..4 {
            let (x, t) = (0.4, -0.2);
            let psi = sol.psi(j, x, t).unwrap();
            let star = sol.psi_star(j, x, t).unwrap();
            assert!(
                (star - c(sol.signs()[j] as f64, 0.0) * psi.conj()).norm()
                    <= 1e-10 * psi.norm()
            );
        }
    }

    #[test]
    fn bright_scalar_profile_decays() {
        let p = NlsBrightParams {
            anchors: vec![1.5],
            gammas: vec![1.0],
            v: vec![c(0.4, 0.8)],
            d_hat: vec![c(0.2, -0.1)],
            theta: 0.3,
        };
        let sol = build_bright(&p).unwrap();
        assert_eq!(sol.signs(), &[1]);
        let center = sol.psi(0, 0.0, 0.0).unwrap().norm();
        assert!(center > 1e-3);
        for &x in &[60.0, -60.0] {
            assert!(sol.psi(0, x, 0.0).unwrap().norm() < 1e-10);
        }
    }

    #[test]
    fn bright_rejects_singular_pair() {
        // flipping Im(v) makes Im(v) Im(alpha) positive -> singular
        let p = NlsBrightParams {
            anchors: vec![1.5],
            gammas: vec![-1.0],
            v: vec![c(0.4, 0.8)],
            d_hat: vec![c(0.0, 0.0)],
            theta: 0.0,
        };
        assert!(matches!(build_bright(&p), Err(Error::Constraint(_))));
    }

    #[test]
    fn peregrine_reduction_has_peak_ratio_three() {
        let map =
            RationalMap::polynomial_from_zeros(&[c(1.0, 0.0), c(-1.0, 0.0)], c(1.0, 0.0)).unwrap();
        // scales follow the sorted fiber order (-1, 1)
        let scales: Vec<Complex64> = [c(-1.0, 0.0), c(1.0, 0.0)]
            .iter()
            .map(|&a| 1.0 / map.deriv(a, 1).unwrap())
            .collect();
        // merge equation (w-1)^-2 + (w+1)^-2 = 0 -> w = +-i
        let p = NlsRationalParams {
            map,
            fiber_value: 0.0,
            anchor_index: 1,
            u: vec![c(0.0, 1.0)],
            d_hat: vec![c(0.0, 0.0)],
            theta: 0.0,
            local_param: LocalParam::ScaledFunction { scales },
        };
        let sol = build_rational_breather(&p).unwrap();
        assert_eq!(sol.signs(), &[1]);
        let peak = sol.psi(0, 0.0, 0.0).unwrap().norm();
        let ratio = peak / sol.amplitude(0);
        assert!((ratio - 3.0).abs() < 1e-10, "peak ratio {ratio}");
        // reality through the independent starred determinants
        let (x, t) = (0.7, -0.3);
        let psi = sol.psi(0, x, t).unwrap();
        let star = sol.psi_star(0, x, t).unwrap();
        assert!((star - psi.conj()).norm() <= 1e-12 * psi.norm());
    }

    #[test]
    fn rational_rejects_non_merge_points() {
        let map =
            RationalMap::polynomial_from_zeros(&[c(1.0, 0.0), c(-1.0, 0.0)], c(1.0, 0.0)).unwrap();
        let scales: Vec<Complex64> = [c(-1.0, 0.0), c(1.0, 0.0)]
            .iter()
            .map(|&a| 1.0 / map.deriv(a, 1).unwrap())
            .collect();
        let p = NlsRationalParams {
            map,
            fiber_value: 0.0,
            anchor_index: 1,
            u: vec![c(0.3, 0.9)],
            d_hat: vec![c(0.0, 0.0)],
            theta: 0.0,
            local_param: LocalParam::ScaledFunction { scales },
        };
        assert!(matches!(
            build_rational_breather(&p),
            Err(Error::NonCriticalPoint { .. })
        ));
    }

    #[test]
    fn galilean_identity_and_modulus_transport() {
        let p = NlsDarkParams {
            map: dark_scalar_map(),
            fiber_value: 0.0,
            anchor_index: 0,
            u: vec![c(0.0, 1.0)],
            d: vec![0.3],
            theta: 0.0,
        };
        let sol = build_dark(&p).unwrap();
        let same = galilean_transform(&sol, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        let (x, t) = (0.9, -0.6);
        assert!(
            (sol.psi(0, x, t).unwrap() - same.psi(0, x, t).unwrap()).norm() < 1e-14
        );
        // |psi'(x,t)| = |psi(beta x + 2 beta lambda t, beta^2 t)| for real data
        let (beta, lambda) = (1.0, 0.7);
        let boosted = galilean_transform(&sol, c(beta, 0.0), c(beta * lambda, 0.0)).unwrap();
        let lhs = boosted.psi(0, x, t).unwrap().norm();
        let rhs = sol
            .psi(0, beta * x + 2.0 * beta * lambda * t, beta * beta * t)
            .unwrap()
            .norm();
        assert!((lhs - rhs).abs() < 1e-12 * rhs);
    }

    #[test]
    fn pair_merge_polynomial_matches_paper_equation() {
        let zeros = [3.0, 5.0, 7.0, 0.0, 4.0].map(|z| c(z, 0.0));
        let map = RationalMap::polynomial_from_zeros(&zeros, c(1.0, 0.0)).unwrap();
        // scales follow the sorted fiber order (0, 3, 4, 5, 7)
        let scales: Vec<Complex64> = [0.0, 3.0, 4.0, 5.0, 7.0]
            .iter()
            .map(|&a| 1.0 / map.deriv(c(a, 0.0), 1).unwrap())
            .collect();
        let poly = pair_merge_polynomial(&map, 0.0, &LocalParam::ScaledFunction { scales })
            .unwrap();
        let roots = poly.roots().unwrap();
        assert!(roots
            .iter()
            .any(|r| (r.re - 4.53).abs() < 0.01 && (r.im - 0.56).abs() < 0.01));
        assert!(roots
            .iter()
            .any(|r| (r.re - 3.45).abs() < 0.01 && (r.im - 0.56).abs() < 0.01));
    }
}
