//! Closed-form projective Ricci curvature of Randers metrics and its
//! polynomial decompositions in `α`.
//!
//! Everything here is assembled from the x-only tensors of
//! [`BaseGeometry`] contracted with a direction `y`. The formulas are written
//! once over [`Scalar`] so the same code yields plain values and, with
//! fibre-coordinate jets, vertical derivatives.

use ndarray::Array1;

use crate::error::Result;
use crate::jets::{Jet, JetSpace, Scalar};
use crate::metric::MetricSpec;
use crate::riemann::{quadratic_form, BaseGeometry};

/// Sign `ε` in `F²(PRic − (n−1)cF²) = ε Σ E_k α^k`, fixed by [`calibrate_e_sign`].
pub const E_IDENTITY_SIGN: f64 = 1.0;

/// Factor `κ` in `PRic(y) − PRic(−y) = κ [N(y)/F(y)² − N(−y)/F(−y)²]`,
/// fixed by [`calibrate_n_factor`].
pub const N_IDENTITY_FACTOR: f64 = 0.5;

/// Direction-dependent ingredients of the closed form.
#[derive(Debug, Clone)]
pub struct DirectionalTerms<T> {
    pub alpha: T,
    pub beta: T,
    /// `ᵅRic(x, y)`
    pub alpha_ric: T,
    pub r00: T,
    pub s0: T,
    pub t00: T,
    pub rho0: T,
    /// `ρ_{0;0}`
    pub rho00: T,
    /// `s^m_{0;m}`
    pub s_div0: T,
    /// `ρ_m s^m_0`
    pub rho_s0: T,
    /// `t^m_m`
    pub t_trace: f64,
    pub n: usize,
}

/// Contractions of the β tensor suite with one direction.
#[derive(Debug, Clone)]
pub struct RandersDirectionEval {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub f: f64,
    pub r00: f64,
    pub r0: f64,
    pub s0: f64,
    pub r_i0: Array1<f64>,
    pub s_i0: Array1<f64>,
    pub t00: f64,
    pub rho0: f64,
    pub rho00: f64,
    pub s_div0: f64,
    pub rho_s0: f64,
    pub alpha_ric: f64,
    pub t_trace: f64,
}

impl RandersDirectionEval {
    pub fn new(geo: &BaseGeometry, y: &[f64]) -> Self {
        let (rg, b) = (&geo.riemann, &geo.beta);
        let yv = Array1::from(y.to_vec());
        let r_i0 = b.r.dot(&yv);
        let s_i0 = b.s.dot(&yv);
        let alpha = rg.alpha(y);
        let beta = b.b.dot(&yv);
        RandersDirectionEval {
            x: rg.x.clone(),
            y: y.to_vec(),
            alpha,
            beta,
            f: alpha + beta,
            r00: r_i0.dot(&yv),
            r0: b.r_vec.dot(&yv),
            s0: b.s_vec.dot(&yv),
            t00: quadratic_form(&b.t, y),
            rho0: b.rho_grad.dot(&yv),
            rho00: quadratic_form(&b.rho_hess, y),
            s_div0: b.s_div.dot(&yv),
            rho_s0: b.rho_grad.dot(&b.s_up.dot(&yv)),
            alpha_ric: rg.alpha_ricci(y),
            t_trace: b.t_trace,
            r_i0,
            s_i0,
        }
    }

    pub fn terms(&self) -> DirectionalTerms<f64> {
        DirectionalTerms {
            alpha: self.alpha,
            beta: self.beta,
            alpha_ric: self.alpha_ric,
            r00: self.r00,
            s0: self.s0,
            t00: self.t00,
            rho0: self.rho0,
            rho00: self.rho00,
            s_div0: self.s_div0,
            rho_s0: self.rho_s0,
            t_trace: self.t_trace,
            n: self.x.len(),
        }
    }
}

/// The directional ingredients as jets in `y` alone, truncated at `order`.
pub fn directional_jets(geo: &BaseGeometry, y: &[f64], order: u8) -> Result<DirectionalTerms<Jet>> {
    let n = y.len();
    let (rg, b) = (&geo.riemann, &geo.beta);
    let space = JetSpace::new(&[(n, order)])?;
    let ys: Vec<Jet> = (0..n).map(|i| space.variable(i, y[i])).collect::<std::result::Result<_, _>>()?;
    let linear = |w: &Array1<f64>| {
        let mut acc = space.zero();
        for i in 0..n {
            acc = acc + ys[i].scale(w[i]);
        }
        acc
    };
    let quadratic = |m: &ndarray::Array2<f64>| {
        let mut acc = space.zero();
        for i in 0..n {
            for j in 0..n {
                acc = acc + (&ys[i] * &ys[j]).scale(m[[i, j]]);
            }
        }
        acc
    };
    let rho_s = b.s_up.t().dot(&b.rho_grad);
    Ok(DirectionalTerms {
        alpha: quadratic(&rg.a).sqrt()?,
        beta: linear(&b.b),
        alpha_ric: quadratic(&rg.ricci),
        r00: quadratic(&b.r),
        s0: linear(&b.s_vec),
        t00: quadratic(&b.t),
        rho0: linear(&b.rho_grad),
        rho00: quadratic(&b.rho_hess),
        s_div0: linear(&b.s_div),
        rho_s0: linear(&rho_s),
        t_trace: b.t_trace,
        n,
    })
}

/// `ᵅRic + 2α s^m_{0;m} − 2t_00 − α² t^m_m + (n−1){2α ρ_m s^m_0 − ρ_{0;0} + ρ_0²}`
///
/// This is the form that agrees with the definition of PRic. The commonly
/// displayed variant ([`pric_closed_form_displayed`]) carries the extra term
/// `−(n−1) α s_0 (r_00 + 2βs_0) / F²`.
pub fn pric_closed_form<T: Scalar>(t: &DirectionalTerms<T>) -> T {
    let nm1 = t.n as f64 - 1.0;
    let a = t.alpha.clone();
    let bracket = a.clone() * t.rho_s0.clone() * 2.0 - t.rho00.clone() + t.rho0.clone() * t.rho0.clone();
    t.alpha_ric.clone() + a.clone() * t.s_div0.clone() * 2.0 - t.t00.clone() * 2.0 - a.clone() * a * t.t_trace
        + bracket * nm1
}

/// `ᵅRic + 2α s^m_{0;m} − 2t_00 − α² t^m_m
///  + (n−1){−2αβ s_0²/F² + 2α ρ_m s^m_0 − ρ_{0;0} − α r_00 s_0/F² + ρ_0²}`, verbatim.
pub fn pric_closed_form_displayed<T: Scalar>(t: &DirectionalTerms<T>) -> T {
    let nm1 = t.n as f64 - 1.0;
    let f = t.alpha.clone() + t.beta.clone();
    let f2 = f.clone() * f;
    let a = t.alpha.clone();
    let extra = -(a.clone() * t.s0.clone() * (t.r00.clone() + t.beta.clone() * t.s0.clone() * 2.0)) / f2;
    pric_closed_form(t) + extra * nm1
}

/// Closed-form PRic at `(x, y)`.
pub fn pric_randers(spec: &MetricSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    let geo = BaseGeometry::at(spec, x)?;
    Ok(pric_closed_form(&RandersDirectionEval::new(&geo, y).terms()))
}

/// [`pric_closed_form_displayed`] at `(x, y)`.
pub fn pric_randers_displayed(spec: &MetricSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    let geo = BaseGeometry::at(spec, x)?;
    Ok(pric_closed_form_displayed(&RandersDirectionEval::new(&geo, y).terms()))
}

/// Coefficients `E_0 … E_4` (index = power of `α`).
///
/// [`ECoefficients::new`] expands the displayed closed form;
/// [`ECoefficients::definition`] expands [`pric_closed_form`] and differs only in
/// `E_1`, by `(n−1) s_0 (r_00 + 2βs_0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ECoefficients {
    pub e: [f64; 5],
    pub c: f64,
}

impl ECoefficients {
    pub fn new(t: &DirectionalTerms<f64>, c: f64) -> Self {
        let nm1 = t.n as f64 - 1.0;
        let (b, tr) = (t.beta, t.t_trace);
        let (ric, sd, t00, rs, r00, s0, rho0, rho00) =
            (t.alpha_ric, t.s_div0, t.t00, t.rho_s0, t.r00, t.s0, t.rho0, t.rho00);
        let e4 = -tr - nm1 * c;
        let e3 = 2.0 * (sd - b * tr + nm1 * (rs - 2.0 * c * b));
        let e2 = ric + 4.0 * b * sd - 2.0 * t00 - b * b * tr + 4.0 * nm1 * b * rs - nm1 * rho00
            + nm1 * rho0 * rho0
            - 6.0 * nm1 * c * b * b;
        let e1 = 2.0 * b * ric + 2.0 * b * b * sd - 4.0 * b * t00 - 2.0 * nm1 * b * s0 * s0
            + 2.0 * nm1 * b * b * rs
            - 2.0 * nm1 * b * rho00
            + 2.0 * nm1 * b * rho0 * rho0
            - nm1 * r00 * s0
            - 4.0 * nm1 * c * b * b * b;
        let e0 = (ric - 2.0 * t00 - nm1 * rho00 + nm1 * rho0 * rho0 - nm1 * c * b * b) * b * b;
        ECoefficients { e: [e0, e1, e2, e3, e4], c }
    }

    pub fn definition(t: &DirectionalTerms<f64>, c: f64) -> Self {
        let mut e = ECoefficients::new(t, c);
        e.e[1] += (t.n as f64 - 1.0) * t.s0 * (t.r00 + 2.0 * t.beta * t.s0);
        e
    }

    /// `Σ E_k α^k`
    pub fn polynomial(&self, alpha: f64) -> f64 {
        self.e.iter().rev().fold(0.0, |acc, &e| acc * alpha + e)
    }
}

/// `F²(PRic − (n−1)cF²)` and `ε Σ E_k α^k` for one direction, both from the displayed forms.
pub fn e_identity_sides(t: &DirectionalTerms<f64>, c: f64) -> (f64, f64) {
    let f = t.alpha + t.beta;
    let nm1 = t.n as f64 - 1.0;
    let lhs = f * f * (pric_closed_form_displayed(t) - nm1 * c * f * f);
    (lhs, E_IDENTITY_SIGN * ECoefficients::new(t, c).polynomial(t.alpha))
}

/// [`e_identity_sides`] for [`pric_closed_form`] and [`ECoefficients::definition`].
pub fn e_identity_sides_definition(t: &DirectionalTerms<f64>, c: f64) -> (f64, f64) {
    let f = t.alpha + t.beta;
    let nm1 = t.n as f64 - 1.0;
    let lhs = f * f * (pric_closed_form(t) - nm1 * c * f * f);
    (lhs, E_IDENTITY_SIGN * ECoefficients::definition(t, c).polynomial(t.alpha))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NCoefficients {
    pub n1: f64,
    pub n2: f64,
    pub n3: f64,
}

impl NCoefficients {
    pub fn new(t: &DirectionalTerms<f64>) -> Self {
        let nm1 = t.n as f64 - 1.0;
        let (b, sd, rs, s0, r00) = (t.beta, t.s_div0, t.rho_s0, t.s0, t.r00);
        NCoefficients {
            n3: 4.0 * sd + 4.0 * nm1 * rs,
            n2: 8.0 * b * sd + 8.0 * nm1 * b * rs,
            n1: 4.0 * b * b * sd - 4.0 * nm1 * b * s0 * s0 + 4.0 * nm1 * b * b * rs - 2.0 * nm1 * r00 * s0,
        }
    }

    /// Odd part of [`pric_closed_form`]: `N_1 = β² N_3`, so `N = N_3 α F²`.
    pub fn definition(t: &DirectionalTerms<f64>) -> Self {
        let mut c = NCoefficients::new(t);
        c.n1 += 2.0 * (t.n as f64 - 1.0) * t.s0 * (t.r00 + 2.0 * t.beta * t.s0);
        c
    }

    /// `N_3 α³ + N_2 α² + N_1 α`
    pub fn polynomial(&self, alpha: f64) -> f64 {
        ((self.n3 * alpha + self.n2) * alpha + self.n1) * alpha
    }
}

/// Flip `y ↦ −y` in the directional terms (odd ingredients change sign).
pub fn reversed(t: &DirectionalTerms<f64>) -> DirectionalTerms<f64> {
    DirectionalTerms {
        beta: -t.beta,
        s0: -t.s0,
        rho0: -t.rho0,
        s_div0: -t.s_div0,
        rho_s0: -t.rho_s0,
        ..t.clone()
    }
}

/// `PRic(y) − PRic(−y)` and `κ [N(y)/F(y)² − N(−y)/F(−y)²]`, both from the displayed forms.
pub fn n_identity_sides(t: &DirectionalTerms<f64>) -> (f64, f64) {
    n_sides(t, pric_closed_form_displayed, NCoefficients::new)
}

/// [`n_identity_sides`] for [`pric_closed_form`] and [`NCoefficients::definition`].
pub fn n_identity_sides_definition(t: &DirectionalTerms<f64>) -> (f64, f64) {
    n_sides(t, pric_closed_form, NCoefficients::definition)
}

fn n_sides(
    t: &DirectionalTerms<f64>,
    pric: fn(&DirectionalTerms<f64>) -> f64,
    coef: fn(&DirectionalTerms<f64>) -> NCoefficients,
) -> (f64, f64) {
    let back = reversed(t);
    let direct = pric(t) - pric(&back);
    let fwd_f = t.alpha + t.beta;
    let back_f = t.alpha - t.beta;
    let via_n = N_IDENTITY_FACTOR
        * (coef(t).polynomial(t.alpha) / (fwd_f * fwd_f) - coef(&back).polynomial(back.alpha) / (back_f * back_f));
    (direct, via_n)
}

fn calibration_points(spec: &MetricSpec) -> Vec<(Vec<f64>, Vec<f64>)> {
    let n = spec.dim();
    (0..6)
        .map(|k| {
            let x: Vec<f64> = (0..n).map(|i| 0.07 * ((k * n + i) as f64 * 1.7).sin()).collect();
            let y: Vec<f64> = (0..n).map(|i| ((k * 3 + i) as f64 * 0.9 + 0.3).cos()).collect();
            (x, y)
        })
        .collect()
}

/// Pick the sign `ε ∈ {+1, −1}` that makes the E-identity hold on `spec`.
pub fn calibrate_e_sign(spec: &MetricSpec, c: f64) -> Result<f64> {
    let mut plus = 0.0f64;
    let mut minus = 0.0f64;
    for (x, y) in calibration_points(spec) {
        let geo = BaseGeometry::at(spec, &x)?;
        let t = RandersDirectionEval::new(&geo, &y).terms();
        let f = t.alpha + t.beta;
        let nm1 = t.n as f64 - 1.0;
        let lhs = f * f * (pric_closed_form_displayed(&t) - nm1 * c * f * f);
        let poly = ECoefficients::new(&t, c).polynomial(t.alpha);
        plus = plus.max((lhs - poly).abs());
        minus = minus.max((lhs + poly).abs());
    }
    Ok(if plus <= minus { 1.0 } else { -1.0 })
}

/// Least-squares factor `κ` relating the reversal difference to the N-polynomials.
pub fn calibrate_n_factor(spec: &MetricSpec) -> Result<f64> {
    let (mut num, mut den) = (0.0, 0.0);
    for (x, y) in calibration_points(spec) {
        let geo = BaseGeometry::at(spec, &x)?;
        let t = RandersDirectionEval::new(&geo, &y).terms();
        let back = reversed(&t);
        let direct = pric_closed_form_displayed(&t) - pric_closed_form_displayed(&back);
        let (ff, fb) = (t.alpha + t.beta, t.alpha - t.beta);
        let raw = NCoefficients::new(&t).polynomial(t.alpha) / (ff * ff)
            - NCoefficients::new(&back).polynomial(back.alpha) / (fb * fb);
        num += direct * raw;
        den += raw * raw;
    }
    Ok(num / den)
}

/// Third vertical derivatives of `F` for `β` parallel (flat `α`), as displayed
/// in closed form with `y_l = a_lm y^m`:
/// `−α^{-3}[δ_jk y_l + δ_kl y_j + δ_lj y_k + 3α^{-2} y_j y_k y_l]`.
pub fn f_third_display(a: &ndarray::Array2<f64>, y: &[f64]) -> ndarray::Array3<f64> {
    let n = y.len();
    let yl = a.dot(&Array1::from(y.to_vec()));
    let alpha = quadratic_form(a, y).sqrt();
    let d = |i: usize, j: usize| a[[i, j]];
    ndarray::Array3::from_shape_fn((n, n, n), |(j, k, l)| {
        let cyc = d(j, k) * yl[l] + d(k, l) * yl[j] + d(l, j) * yl[k];
        -(cyc + 3.0 / (alpha * alpha) * yl[j] * yl[k] * yl[l]) / alpha.powi(3)
    })
}

/// Third vertical derivatives of `F²` in the displayed closed form.
pub fn f2_third_display(a: &ndarray::Array2<f64>, b: &Array1<f64>, y: &[f64]) -> ndarray::Array3<f64> {
    let n = y.len();
    let yv = Array1::from(y.to_vec());
    let yl = a.dot(&yv);
    let alpha = quadratic_form(a, y).sqrt();
    let beta = b.dot(&yv);
    let d = |i: usize, j: usize| a[[i, j]];
    ndarray::Array3::from_shape_fn((n, n, n), |(j, k, l)| {
        let b_delta = b[j] * d(k, l) + b[k] * d(l, j) + b[l] * d(j, k);
        let delta_y = d(j, k) * yl[l] + d(k, l) * yl[j] + d(l, j) * yl[k];
        let b_yy = b[j] * yl[k] * yl[l] + b[k] * yl[l] * yl[j] + b[l] * yl[j] * yl[k];
        b_delta / alpha - beta * delta_y / alpha.powi(3) - 3.0 * beta * yl[j] * yl[k] * yl[l] / alpha.powi(5)
            - b_yy / alpha.powi(3)
    })
}
