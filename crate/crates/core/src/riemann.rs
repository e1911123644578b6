//! Geometry of the base Riemannian metric `α` and of the 1-form `β`.
//!
//! Index conventions: `christoffel[[i, j, k]] = Γ^i_jk`,
//! `riemann[[i, j, k, l]] = R^i_jkl = ∂_k Γ^i_jl − ∂_l Γ^i_jk + Γ^i_km Γ^m_jl − Γ^i_lm Γ^m_jk`,
//! `ricci[[j, l]] = R^i_jil`. With this choice the round sphere has positive Ricci curvature.
//!
//! Covariant derivatives are taken with the Levi-Civita connection of `α`:
//! `db[[i, j]] = b_{i;j}`, `ddb[[i, j, k]] = b_{i;j;k}`.

use ndarray::{Array1, Array2, Array3, Array4};

use crate::error::{Error, Result};
use crate::jets::{self, Jet};
use crate::metric::MetricSpec;

#[derive(Debug, Clone)]
pub struct RiemannEval {
    pub x: Vec<f64>,
    pub a: Array2<f64>,
    pub a_inv: Array2<f64>,
    /// `da[[i, j, k]] = ∂_k a_ij`
    pub da: Array3<f64>,
    /// `dda[[i, j, k, l]] = ∂_k ∂_l a_ij`
    pub dda: Array4<f64>,
    pub christoffel: Array3<f64>,
    /// `dchristoffel[[i, j, k, l]] = ∂_l Γ^i_jk`
    pub dchristoffel: Array4<f64>,
    pub riemann: Array4<f64>,
    pub ricci: Array2<f64>,
    pub det: f64,
    pub sqrt_det: f64,
}

#[derive(Debug, Clone)]
pub struct BetaEval {
    pub x: Vec<f64>,
    pub b: Array1<f64>,
    /// `b^i = a^ij b_j`
    pub b_up: Array1<f64>,
    /// `‖β‖_α`
    pub norm: f64,
    pub db: Array2<f64>,
    pub ddb: Array3<f64>,
    pub r: Array2<f64>,
    pub s: Array2<f64>,
    /// `r_up[[i, j]] = r^i_j`
    pub r_up: Array2<f64>,
    pub s_up: Array2<f64>,
    /// `r_j = b^m r_mj`
    pub r_vec: Array1<f64>,
    /// `s_j = b^m s_mj`
    pub s_vec: Array1<f64>,
    /// `r = r_ij b^i b^j`
    pub r_scalar: f64,
    /// `q_ij = r_im s^m_j`
    pub q: Array2<f64>,
    /// `t_ij = s_im s^m_j`
    pub t: Array2<f64>,
    pub q_vec: Array1<f64>,
    pub t_vec: Array1<f64>,
    /// `t^m_m`
    pub t_trace: f64,
    /// `ρ = ln √(1 − b²)`
    pub rho: f64,
    pub rho_grad: Array1<f64>,
    /// `ρ_{i;j}`
    pub rho_hess: Array2<f64>,
    /// `s_div[j] = (s^m_j)_{;m}`
    pub s_div: Array1<f64>,
}

/// Riemannian and 1-form data at one base point.
#[derive(Debug, Clone)]
pub struct BaseGeometry {
    pub riemann: RiemannEval,
    pub beta: BetaEval,
}

fn values(m: &[Vec<Jet>]) -> Array2<f64> {
    let n = m.len();
    Array2::from_shape_fn((n, n), |(i, j)| m[i][j].value())
}

/// Cholesky test of positive definiteness; reports the first failing leading minor.
pub(crate) fn check_positive_definite(m: &Array2<f64>) -> std::result::Result<(), (usize, f64)> {
    let n = m.nrows();
    let mut l = Array2::<f64>::zeros((n, n));
    for j in 0..n {
        let mut d = m[[j, j]];
        for k in 0..j {
            d -= l[[j, k]] * l[[j, k]];
        }
        if !(d > 0.0) {
            return Err((j + 1, d));
        }
        l[[j, j]] = d.sqrt();
        for i in j + 1..n {
            let mut v = m[[i, j]];
            for k in 0..j {
                v -= l[[i, k]] * l[[j, k]];
            }
            l[[i, j]] = v / l[[j, j]];
        }
    }
    Ok(())
}

impl BaseGeometry {
    pub fn at(spec: &MetricSpec, x: &[f64]) -> Result<Self> {
        let n = spec.dim();
        let (a_j, b_j) = spec.coefficient_jets(x, 2)?;
        let a = values(&a_j);
        check_positive_definite(&a).map_err(|(minor, value)| Error::NotPositiveDefinite {
            x: x.to_vec(),
            minor,
            value,
        })?;
        let ainv_j = jets::inverse(&a_j)?;
        let a_inv = values(&ainv_j);

        let da_j: Vec<Vec<Vec<Jet>>> = a_j
            .iter()
            .map(|row| row.iter().map(|e| (0..n).map(|k| e.d(k)).collect()).collect())
            .collect();
        let da = Array3::from_shape_fn((n, n, n), |(i, j, k)| da_j[i][j][k].value());
        let dda = Array4::from_shape_fn((n, n, n, n), |(i, j, k, l)| da_j[i][j][k].partial(l));

        // Γ^i_jk = ½ a^il (∂_j a_lk + ∂_k a_lj − ∂_l a_jk), order 1
        let mut gamma_j: Vec<Vec<Vec<Jet>>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut plane = Vec::with_capacity(n);
            for j in 0..n {
                let mut row = Vec::with_capacity(n);
                for k in 0..n {
                    let mut acc: Option<Jet> = None;
                    for l in 0..n {
                        let bracket = &(&da_j[l][k][j] + &da_j[l][j][k]) - &da_j[j][k][l];
                        let term = &ainv_j[i][l] * &bracket;
                        acc = Some(match acc {
                            Some(s) => s + term,
                            None => term,
                        });
                    }
                    row.push(acc.unwrap().scale(0.5));
                }
                plane.push(row);
            }
            gamma_j.push(plane);
        }
        let christoffel = Array3::from_shape_fn((n, n, n), |(i, j, k)| gamma_j[i][j][k].value());
        let dchristoffel =
            Array4::from_shape_fn((n, n, n, n), |(i, j, k, l)| gamma_j[i][j][k].partial(l));

        let g = &christoffel;
        let dg = &dchristoffel;
        let riemann = Array4::from_shape_fn((n, n, n, n), |(i, j, k, l)| {
            let mut v = dg[[i, j, l, k]] - dg[[i, j, k, l]];
            for m in 0..n {
                v += g[[i, k, m]] * g[[m, j, l]] - g[[i, l, m]] * g[[m, j, k]];
            }
            v
        });
        let ricci = Array2::from_shape_fn((n, n), |(j, l)| (0..n).map(|i| riemann[[i, j, i, l]]).sum());
        let det = jets::determinant(&a_j)?.value();

        let riemann_eval = RiemannEval {
            x: x.to_vec(),
            a,
            a_inv: a_inv.clone(),
            da,
            dda,
            christoffel,
            dchristoffel,
            riemann,
            ricci,
            det,
            sqrt_det: det.sqrt(),
        };

        // β suite
        let b = Array1::from_shape_fn(n, |i| b_j[i].value());
        let b_up = a_inv.dot(&b);
        let b2 = b.dot(&b_up);
        let norm = b2.max(0.0).sqrt();
        if !(norm < 1.0) {
            return Err(Error::NotStronglyConvex { x: x.to_vec(), b: norm });
        }

        // b_{i;j} = ∂_j b_i − Γ^m_ij b_m, order 1
        let db_j: Vec<Vec<Jet>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut acc = b_j[i].d(j);
                        for m in 0..n {
                            acc = acc - &gamma_j[m][i][j] * &b_j[m];
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let db = values(&db_j);
        let ddb = Array3::from_shape_fn((n, n, n), |(i, j, k)| {
            let mut v = db_j[i][j].partial(k);
            for m in 0..n {
                v -= christoffel_at(&riemann_eval, m, i, k) * db[[m, j]];
                v -= christoffel_at(&riemann_eval, m, j, k) * db[[i, m]];
            }
            v
        });
        let r = Array2::from_shape_fn((n, n), |(i, j)| 0.5 * (db[[i, j]] + db[[j, i]]));
        let s = Array2::from_shape_fn((n, n), |(i, j)| 0.5 * (db[[i, j]] - db[[j, i]]));
        let r_up = a_inv.dot(&r);
        let s_up = a_inv.dot(&s);
        let r_vec = b_up.dot(&r);
        let s_vec = b_up.dot(&s);
        let r_scalar = r_vec.dot(&b_up);
        let q = r.dot(&s_up);
        let t = s.dot(&s_up);
        let q_vec = b_up.dot(&q);
        let t_vec = b_up.dot(&t);
        let t_trace = (0..n).map(|m| a_inv.row(m).dot(&t.column(m))).sum();

        // (s^m_j)_{;m} = ∂_m s^m_j + Γ^m_mk s^k_j − Γ^k_mj s^m_k
        let s_up_j: Vec<Vec<Jet>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut acc: Option<Jet> = None;
                        for m in 0..n {
                            let half = (&db_j[m][j] - &db_j[j][m]).scale(0.5);
                            let term = &ainv_j[i][m] * &half;
                            acc = Some(match acc {
                                Some(a) => a + term,
                                None => term,
                            });
                        }
                        acc.unwrap()
                    })
                    .collect()
            })
            .collect();
        let gam = &riemann_eval.christoffel;
        let s_div = Array1::from_shape_fn(n, |j| {
            let mut v = 0.0;
            for m in 0..n {
                v += s_up_j[m][j].partial(m);
                for k in 0..n {
                    v += gam[[m, m, k]] * s_up[[k, j]] - gam[[k, m, j]] * s_up[[m, k]];
                }
            }
            v
        });

        // ρ = ½ ln(1 − a^ij b_i b_j), order 2
        let mut b2_j = b_j[0].constant_like(0.0);
        for i in 0..n {
            for j in 0..n {
                b2_j = b2_j + &(&ainv_j[i][j] * &b_j[i]) * &b_j[j];
            }
        }
        let rho_j = (-b2_j).add_scalar(1.0).ln()?.scale(0.5);
        let rho_grad = Array1::from_shape_fn(n, |i| rho_j.partial(i));
        let rho_hess = Array2::from_shape_fn((n, n), |(i, j)| {
            let mut m_idx = vec![0u8; n];
            m_idx[i] += 1;
            m_idx[j] += 1;
            let mut v = rho_j.extract(&m_idx).expect("order-2 jet");
            for m in 0..n {
                v -= gam[[m, i, j]] * rho_grad[m];
            }
            v
        });

        let beta = BetaEval {
            x: x.to_vec(),
            b,
            b_up,
            norm,
            db,
            ddb,
            r,
            s,
            r_up,
            s_up,
            r_vec,
            s_vec,
            r_scalar,
            q,
            t,
            q_vec,
            t_vec,
            t_trace,
            rho: rho_j.value(),
            rho_grad,
            rho_hess,
            s_div,
        };
        Ok(BaseGeometry { riemann: riemann_eval, beta })
    }
}

fn christoffel_at(r: &RiemannEval, i: usize, j: usize, k: usize) -> f64 {
    r.christoffel[[i, j, k]]
}

impl RiemannEval {
    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// `ᵅRic(x, y) = R_jk y^j y^k`
    pub fn alpha_ricci(&self, y: &[f64]) -> f64 {
        quadratic_form(&self.ricci, y)
    }

    /// `α(x, y)`
    pub fn alpha(&self, y: &[f64]) -> f64 {
        quadratic_form(&self.a, y).sqrt()
    }

    /// Largest `|a_{ij;k}|`; zero for the Levi-Civita connection.
    pub fn metric_compatibility_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut v = self.da[[i, j, k]];
                    for m in 0..n {
                        v -= self.christoffel[[m, k, i]] * self.a[[m, j]]
                            + self.christoffel[[m, k, j]] * self.a[[i, m]];
                    }
                    worst = worst.max(v.abs());
                }
            }
        }
        worst
    }
}

pub(crate) fn quadratic_form(m: &Array2<f64>, y: &[f64]) -> f64 {
    let n = y.len();
    let mut v = 0.0;
    for i in 0..n {
        for j in 0..n {
            v += m[[i, j]] * y[i] * y[j];
        }
    }
    v
}

pub fn christoffel(spec: &MetricSpec, x: &[f64]) -> Result<Array3<f64>> {
    Ok(BaseGeometry::at(spec, x)?.riemann.christoffel)
}

pub fn alpha_ricci(spec: &MetricSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(BaseGeometry::at(spec, x)?.riemann.alpha_ricci(y))
}

pub fn beta_suite(spec: &MetricSpec, x: &[f64]) -> Result<BetaEval> {
    Ok(BaseGeometry::at(spec, x)?.beta)
}

/// Covector `j ↦ (s^m_j)_{;m}`; contracting with `y^j` gives `s^m_{0;m}`.
pub fn covariant_divergence_s(spec: &MetricSpec, x: &[f64]) -> Result<Array1<f64>> {
    Ok(BaseGeometry::at(spec, x)?.beta.s_div)
}

pub fn rho_hessian(spec: &MetricSpec, x: &[f64]) -> Result<Array2<f64>> {
    Ok(BaseGeometry::at(spec, x)?.beta.rho_hess)
}
