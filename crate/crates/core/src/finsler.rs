//! Definition-level Finsler quantities of `F = α + β`, computed from the
//! Taylor expansion of `F²` in the base coordinates `x` and the fibre
//! coordinates `y` jointly.
//!
//! Derivatives consume order budget: from `F²` expanded to `(x order, y order)`
//! the spray is exact to `(kx − 1, ky − 2)` and the Riemann curvature, the
//! horizontal derivative of S and the projective Ricci curvature to
//! `(kx − 2, ky − 4)`. [`PRIC_BUDGET`] is therefore the minimum for PRic values
//! and each extra vertical derivative adds one y order.

use ndarray::{Array1, Array2, Array3};

use crate::error::{Error, Result};
use crate::jets::{self, Jet, JetSpace};
use crate::metric::MetricSpec;
use crate::riemann::check_positive_definite;

/// `(x order, y order)` of `F²` needed for PRic values.
pub const PRIC_BUDGET: (u8, u8) = (2, 4);

/// Panels for the two-dimensional unit-ball quadrature.
pub const QUADRATURE_PANELS: usize = 2048;

#[derive(Debug, Clone)]
pub struct FinslerEval {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub f: f64,
    pub g: Array2<f64>,
    pub g_inv: Array2<f64>,
    pub spray: Array1<f64>,
    /// `riemann[[i, k]] = R^i_k`
    pub riemann: Array2<f64>,
    pub ric: f64,
    pub sigma_bh: f64,
    pub tau: f64,
    /// S from `∂G^m/∂y^m − y^m ∂_m ln σ`.
    pub s: f64,
    /// S from `y^i ∂τ/∂x^i − 2 G^i ∂τ/∂y^i`.
    pub s_transport: f64,
    pub s_bar: f64,
    /// `S_{|m} y^m`
    pub s_horizontal: f64,
    pub pric: f64,
    /// `y^i ∂τ/∂x^i`
    pub tau_x_term: f64,
    /// `G^i ∂τ/∂y^i`
    pub tau_y_term: f64,
}

/// Jets of `F` and `F²` at `(x, y)` in the space `[(n, kx), (n, ky)]`.
pub struct NormJets {
    pub space: JetSpace,
    pub f: Jet,
    pub f2: Jet,
}

fn check_direction(y: &[f64]) -> Result<()> {
    if y.iter().all(|v| *v == 0.0) {
        return Err(Error::ZeroDirection);
    }
    Ok(())
}

fn check_dims(spec: &MetricSpec, x: &[f64], y: &[f64]) -> Result<()> {
    let n = spec.dim();
    if x.len() != n || y.len() != n {
        return Err(Error::Invalid(format!(
            "expected {n} coordinates, got x: {} and y: {}",
            x.len(),
            y.len()
        )));
    }
    Ok(())
}

pub fn norm_jets(spec: &MetricSpec, x: &[f64], y: &[f64], kx: u8, ky: u8) -> Result<NormJets> {
    check_dims(spec, x, y)?;
    check_direction(y)?;
    let n = spec.dim();
    let space = JetSpace::new(&[(n, kx), (n, ky)])?;
    let (a, b) = spec.coefficient_jets(x, kx)?;
    let xmap: Vec<usize> = (0..n).collect();
    let ys: Vec<Jet> = (0..n).map(|i| space.variable(n + i, y[i])).collect::<std::result::Result<_, _>>()?;
    let mut alpha2 = space.zero();
    let mut beta = space.zero();
    for i in 0..n {
        let bi = b[i].embed(&space, &xmap)?;
        beta = beta + &bi * &ys[i];
        for j in 0..n {
            let aij = a[i][j].embed(&space, &xmap)?;
            alpha2 = alpha2 + &(&aij * &ys[i]) * &ys[j];
        }
    }
    if !(alpha2.value() > 0.0) {
        let a_val: Vec<Vec<f64>> = a.iter().map(|r| r.iter().map(Jet::value).collect()).collect();
        let a_arr = Array2::from_shape_fn((n, n), |(i, j)| a_val[i][j]);
        if let Err((minor, value)) = check_positive_definite(&a_arr) {
            return Err(Error::NotPositiveDefinite { x: x.to_vec(), minor, value });
        }
        return Err(Error::ZeroDirection);
    }
    let f = alpha2.sqrt()? + beta;
    let f2 = &f * &f;
    Ok(NormJets { space, f, f2 })
}

/// `ln σ_BH = ((n+1)/2) ln(1 − b²) + ½ ln det a` as an x-only jet of order `kx`.
fn ln_sigma_jet(spec: &MetricSpec, x: &[f64], kx: u8) -> Result<Jet> {
    let n = spec.dim();
    let (a, b) = spec.coefficient_jets(x, kx)?;
    let ainv = jets::inverse(&a)?;
    let det = jets::determinant(&a)?;
    let mut b2 = b[0].constant_like(0.0);
    for i in 0..n {
        for j in 0..n {
            b2 = b2 + &(&ainv[i][j] * &b[i]) * &b[j];
        }
    }
    let bnorm = b2.value().max(0.0).sqrt();
    if !(bnorm < 1.0) {
        return Err(Error::NotStronglyConvex { x: x.to_vec(), b: bnorm });
    }
    if !(det.value() > 0.0) {
        return Err(Error::NotPositiveDefinite { x: x.to_vec(), minor: n, value: det.value() });
    }
    let one_minus = (-b2).add_scalar(1.0);
    Ok(one_minus.ln()?.scale(0.5 * (n as f64 + 1.0)) + det.ln()?.scale(0.5))
}

/// Busemann-Hausdorff density in closed form, `(1 − b²)^{(n+1)/2} √det a`.
pub fn bh_volume_density(spec: &MetricSpec, x: &[f64]) -> Result<f64> {
    let order0 = ln_sigma_jet(spec, x, 1)?;
    Ok(order0.value().exp())
}

/// Busemann-Hausdorff density for `n = 2` from the Euclidean area of
/// `{y : F(x, y) < 1}`, integrating `½ r(θ)²` with `r(θ) = 1 / F(x, (cos θ, sin θ))`
/// by composite Simpson over [`QUADRATURE_PANELS`] panels.
pub fn bh_volume_density_quadrature(spec: &MetricSpec, x: &[f64]) -> Result<f64> {
    if spec.dim() != 2 {
        return Err(Error::Invalid("unit-ball quadrature is implemented for n = 2 only".into()));
    }
    let a = spec.a_at(x)?;
    let b = spec.b_at(x)?;
    let norm = |t: f64| {
        let (s, c) = t.sin_cos();
        let alpha = (a[0][0] * c * c + 2.0 * a[0][1] * c * s + a[1][1] * s * s).sqrt();
        alpha + b[0] * c + b[1] * s
    };
    let m = QUADRATURE_PANELS;
    let h = std::f64::consts::TAU / m as f64;
    let mut area = 0.0;
    for k in 0..=m {
        let w = if k == 0 || k == m {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let f = norm(k as f64 * h);
        if !(f > 0.0) {
            return Err(Error::NotStronglyConvex { x: x.to_vec(), b: f64::NAN });
        }
        area += w * 0.5 / (f * f);
    }
    area *= h / 3.0;
    Ok(std::f64::consts::PI / area)
}

struct SprayJets {
    ys: Vec<Jet>,
    g: Vec<Vec<Jet>>,
    g_inv: Vec<Vec<Jet>>,
    spray: Vec<Jet>,
}

fn spray_jets(norm: &NormJets, x: &[f64], y: &[f64]) -> Result<SprayJets> {
    let n = y.len();
    let space = &norm.space;
    let f2 = &norm.f2;
    let ys: Vec<Jet> = (0..n).map(|i| space.variable(n + i, y[i])).collect::<std::result::Result<_, _>>()?;
    let f2_y: Vec<Jet> = (0..n).map(|i| f2.d(n + i)).collect();
    let g: Vec<Vec<Jet>> = (0..n)
        .map(|i| (0..n).map(|j| f2_y[i].d(n + j).scale(0.5)).collect())
        .collect();
    let g_val = Array2::from_shape_fn((n, n), |(i, j)| g[i][j].value());
    check_positive_definite(&g_val).map_err(|_| Error::FundamentalTensor { x: x.to_vec(), y: y.to_vec() })?;
    let g_inv = jets::inverse(&g)?;

    // G^i = ¼ g^il ([F²]_{x^k y^l} y^k − [F²]_{x^l})
    let bracket: Vec<Jet> = (0..n)
        .map(|l| {
            let mut acc = -f2.d(l);
            for k in 0..n {
                acc = acc + &f2_y[l].d(k) * &ys[k];
            }
            acc
        })
        .collect();
    let spray: Vec<Jet> = (0..n)
        .map(|i| {
            let mut acc = &g_inv[i][0] * &bracket[0];
            for l in 1..n {
                acc = acc + &g_inv[i][l] * &bracket[l];
            }
            acc.scale(0.25)
        })
        .collect();
    Ok(SprayJets { ys, g, g_inv, spray })
}

/// Full jet pipeline from `F²` to PRic.
pub struct PricJets {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub norm: NormJets,
    pub g: Vec<Vec<Jet>>,
    pub g_inv: Vec<Vec<Jet>>,
    pub spray: Vec<Jet>,
    pub riemann: Vec<Vec<Jet>>,
    pub ric: Jet,
    pub ln_sigma: Jet,
    pub tau: Jet,
    pub s: Jet,
    pub s_horizontal: Jet,
    pub pric: Jet,
}

impl PricJets {
    /// Pipeline whose PRic jet keeps `extra_y` vertical orders.
    pub fn compute(spec: &MetricSpec, x: &[f64], y: &[f64], extra_y: u8) -> Result<Self> {
        let n = spec.dim();
        let (kx, ky) = (PRIC_BUDGET.0, PRIC_BUDGET.1 + extra_y);
        let norm = norm_jets(spec, x, y, kx, ky)?;
        let SprayJets { ys, g, g_inv, spray } = spray_jets(&norm, x, y)?;
        let (xv, yv) = (|i: usize| i, |i: usize| n + i);

        // R^i_k = 2 ∂_{x^k} G^i − y^j ∂_{x^j} ∂_{y^k} G^i + 2 G^j ∂_{y^j} ∂_{y^k} G^i − ∂_{y^j} G^i ∂_{y^k} G^j
        let spray_y: Vec<Vec<Jet>> = spray.iter().map(|gi| (0..n).map(|j| gi.d(yv(j))).collect()).collect();
        let riemann: Vec<Vec<Jet>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| {
                        let mut acc = spray[i].d(xv(k)).scale(2.0);
                        for j in 0..n {
                            acc = acc - &ys[j] * &spray_y[i][k].d(xv(j));
                            acc = acc + (&spray[j] * &spray_y[i][j].d(yv(k))).scale(2.0);
                            acc = acc - &spray_y[i][j] * &spray_y[j][k];
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let mut ric = riemann[0][0].clone();
        for i in 1..n {
            ric = ric + &riemann[i][i];
        }

        let xmap: Vec<usize> = (0..n).collect();
        let ln_sigma = ln_sigma_jet(spec, x, kx)?.embed(&norm.space, &xmap)?;
        let tau = jets::determinant(&g)?.ln()?.scale(0.5) - &ln_sigma;

        let mut s = spray_y[0][0].clone();
        for m in 1..n {
            s = s + &spray_y[m][m];
        }
        for m in 0..n {
            s = s - &ys[m] * &ln_sigma.d(xv(m));
        }

        // S_{|m} y^m = y^m ∂_{x^m} S − 2 G^j ∂_{y^j} S
        let mut s_horizontal = &ys[0] * &s.d(xv(0));
        for m in 1..n {
            s_horizontal = s_horizontal + &ys[m] * &s.d(xv(m));
        }
        for j in 0..n {
            s_horizontal = s_horizontal - (&spray[j] * &s.d(yv(j))).scale(2.0);
        }

        let nf = n as f64;
        let pric = &ric
            + &s_horizontal.scale((nf - 1.0) / (nf + 1.0))
            + (&s * &s).scale((nf - 1.0) / ((nf + 1.0) * (nf + 1.0)));

        Ok(PricJets {
            x: x.to_vec(),
            y: y.to_vec(),
            norm,
            g,
            g_inv,
            spray,
            riemann,
            ric,
            ln_sigma,
            tau,
            s,
            s_horizontal,
            pric,
        })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn eval(&self) -> FinslerEval {
        let n = self.dim();
        let spray = Array1::from_shape_fn(n, |i| self.spray[i].value());
        let mut tau_x = 0.0;
        let mut tau_y = 0.0;
        for i in 0..n {
            tau_x += self.y[i] * self.tau.partial(i);
            tau_y += spray[i] * self.tau.partial(n + i);
        }
        let s = self.s.value();
        FinslerEval {
            x: self.x.clone(),
            y: self.y.clone(),
            f: self.norm.f.value(),
            g: Array2::from_shape_fn((n, n), |(i, j)| self.g[i][j].value()),
            g_inv: Array2::from_shape_fn((n, n), |(i, j)| self.g_inv[i][j].value()),
            spray,
            riemann: Array2::from_shape_fn((n, n), |(i, k)| self.riemann[i][k].value()),
            ric: self.ric.value(),
            sigma_bh: self.ln_sigma.value().exp(),
            tau: self.tau.value(),
            s,
            s_transport: tau_x - 2.0 * tau_y,
            s_bar: s / (n as f64 + 1.0),
            s_horizontal: self.s_horizontal.value(),
            pric: self.pric.value(),
            tau_x_term: tau_x,
            tau_y_term: tau_y,
        }
    }
}

/// All definition-level quantities at `(x, y)`.
pub fn evaluate(spec: &MetricSpec, x: &[f64], y: &[f64]) -> Result<FinslerEval> {
    Ok(PricJets::compute(spec, x, y, 0)?.eval())
}

/// `g_ij = ½ ∂²F² / ∂y^i ∂y^j`
pub fn fundamental_tensor(spec: &MetricSpec, x: &[f64], y: &[f64]) -> Result<Array2<f64>> {
    let norm = norm_jets(spec, x, y, 0, 2)?;
    let n = spec.dim();
    let g = Array2::from_shape_fn((n, n), |(i, j)| {
        let mut m = vec![0u8; 2 * n];
        m[n + i] += 1;
        m[n + j] += 1;
        0.5 * norm.f2.extract(&m).expect("y order 2")
    });
    check_positive_definite(&g).map_err(|_| Error::FundamentalTensor { x: x.to_vec(), y: y.to_vec() })?;
    Ok(g)
}

/// Spray coefficients `G^i`.
pub fn spray(spec: &MetricSpec, x: &[f64], y: &[f64]) -> Result<Array1<f64>> {
    let norm = norm_jets(spec, x, y, 1, 2)?;
    let sj = spray_jets(&norm, x, y)?;
    Ok(Array1::from_shape_fn(spec.dim(), |i| sj.spray[i].value()))
}

/// `R^i_k` and its trace `Ric`.
pub fn riemann_curvature(spec: &MetricSpec, x: &[f64], y: &[f64]) -> Result<(Array2<f64>, f64)> {
    let e = evaluate(spec, x, y)?;
    Ok((e.riemann, e.ric))
}

pub fn ricci(spec: &MetricSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(evaluate(spec, x, y)?.ric)
}

/// Distortion `τ = ln(√det g / σ_BH)`.
pub fn distortion(spec: &MetricSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    let g = fundamental_tensor(spec, x, y)?;
    let n = spec.dim();
    let gj: Vec<Vec<Jet>> = {
        let space = JetSpace::new(&[(1, 0)])?;
        (0..n).map(|i| (0..n).map(|j| space.constant(g[[i, j]])).collect()).collect()
    };
    let det = jets::determinant(&gj)?.value();
    Ok(0.5 * det.ln() - bh_volume_density(spec, x)?.ln())
}

pub fn s_curvature(spec: &MetricSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    let norm = norm_jets(spec, x, y, 1, 3)?;
    let sj = spray_jets(&norm, x, y)?;
    let n = spec.dim();
    let ln_sigma = ln_sigma_jet(spec, x, 1)?;
    let mut s = 0.0;
    for m in 0..n {
        s += sj.spray[m].partial(n + m) - y[m] * ln_sigma.partial(m);
    }
    Ok(s)
}

/// `PRic = Ric + (n−1)/(n+1) S_{|m} y^m + (n−1)/(n+1)² S²`
pub fn pric_generic(spec: &MetricSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(evaluate(spec, x, y)?.pric)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerticalQuantity {
    F,
    F2,
    Ric,
    Pric,
}

/// `[[j, k, l]] = ∂³Q / ∂y^j ∂y^k ∂y^l`.
pub fn vertical_third_derivative(
    quantity: VerticalQuantity,
    spec: &MetricSpec,
    x: &[f64],
    y: &[f64],
) -> Result<Array3<f64>> {
    let n = spec.dim();
    let jet = match quantity {
        VerticalQuantity::F => norm_jets(spec, x, y, 0, 3)?.f,
        VerticalQuantity::F2 => norm_jets(spec, x, y, 0, 3)?.f2,
        VerticalQuantity::Ric => PricJets::compute(spec, x, y, 3)?.ric,
        VerticalQuantity::Pric => PricJets::compute(spec, x, y, 3)?.pric,
    };
    Ok(third_y_derivatives(&jet, n))
}

pub(crate) fn third_y_derivatives(jet: &Jet, n: usize) -> Array3<f64> {
    let offset = jet.layout().nvars() - n;
    Array3::from_shape_fn((n, n, n), |(j, k, l)| {
        let mut m = vec![0u8; offset + n];
        m[offset + j] += 1;
        m[offset + k] += 1;
        m[offset + l] += 1;
        jet.extract(&m).expect("vertical order 3")
    })
}
