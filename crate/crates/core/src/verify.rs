//! Pointwise verifiers for the characterizing equations of isotropic, flat,
//! reversible and square projective Ricci curvature, plus the identity
//! cross-checks between the closed form and the definition-level pipeline.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use ndarray::Array1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::expr::{parse, Expression};
use crate::finsler::{self, third_y_derivatives, PricJets};
use crate::metric::MetricSpec;
use crate::randers::{
    self, directional_jets, e_identity_sides, e_identity_sides_definition, n_identity_sides, n_identity_sides_definition,
    pric_closed_form, pric_closed_form_displayed, DirectionalTerms, NCoefficients, RandersDirectionEval,
};
use crate::report::{assemble, Condition, Residual, SampleRecord, VerificationReport};
use crate::riemann::BaseGeometry;
use crate::sampling::{self, direction_frame, Sample, SampleSet, SkippedPoint};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative tolerance of identity checks.
    pub identity: f64,
    /// Absolute tolerance of triviality checks.
    pub trivial: f64,
    /// Relative tolerance of finite-difference oracles.
    pub fd: f64,
    /// Relative tolerance of scaling laws.
    pub homogeneity: f64,
    /// Relative tolerance between the two S routes.
    pub two_path: f64,
    /// `|PRic(y) − PRic(−y)| / F²` tolerance of the direct reversibility check.
    pub reversal: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { identity: 1e-7, trivial: 1e-10, fd: 1e-5, homogeneity: 1e-9, two_path: 1e-8, reversal: 1e-8 }
    }
}

impl Tolerances {
    /// Every relative tolerance set to `tol`.
    pub fn uniform(tol: f64) -> Self {
        Tolerances { identity: tol, trivial: tol, fd: tol, homogeneity: tol, two_path: tol, reversal: tol }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Options {
    pub tol: Tolerances,
    pub exec: Execution,
    /// Seed for per-sample random parameters (the `c` draws of the E-identity).
    pub seed: u64,
    /// Fixed `c` of the E-identity instead of the random draws.
    pub epoly_c: Option<f64>,
}

/// The scalar `c(x)` of isotropic PRic.
#[derive(Debug, Clone, PartialEq)]
pub enum CField {
    Constant(f64),
    Field(Expression),
    /// Least squares on condition (i) per point.
    Fit,
}

impl FromStr for CField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("fit") {
            return Ok(CField::Fit);
        }
        if let Ok(v) = s.parse::<f64>() {
            return Ok(CField::Constant(v));
        }
        parse(s).map(CField::Field).map_err(|source| Error::Expression { location: "c".into(), source })
    }
}

impl fmt::Display for CField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CField::Constant(v) => write!(f, "{v:?}"),
            CField::Field(e) => write!(f, "{e}"),
            CField::Fit => f.write_str("fit"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    Isotropic,
    Flat,
    Reversible,
    Square,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdentityKind {
    #[serde(rename = "eq7")]
    Eq7,
    #[serde(rename = "epoly")]
    EPoly,
    #[serde(rename = "npoly")]
    NPoly,
    #[serde(rename = "homogeneity")]
    Homogeneity,
    #[serde(rename = "sTwoPath")]
    STwoPath,
}

impl IdentityKind {
    pub const ALL: [IdentityKind; 5] =
        [IdentityKind::Eq7, IdentityKind::EPoly, IdentityKind::NPoly, IdentityKind::Homogeneity, IdentityKind::STwoPath];

    pub fn name(self) -> &'static str {
        match self {
            IdentityKind::Eq7 => "eq7",
            IdentityKind::EPoly => "epoly",
            IdentityKind::NPoly => "npoly",
            IdentityKind::Homogeneity => "homogeneity",
            IdentityKind::STwoPath => "sTwoPath",
        }
    }
}

impl FromStr for IdentityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Invalid(format!("unknown identity `{s}`")))
    }
}

impl Theorem {
    pub const ALL: [Theorem; 4] = [Theorem::Isotropic, Theorem::Flat, Theorem::Reversible, Theorem::Square];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Isotropic => "isotropic",
            Theorem::Flat => "flat",
            Theorem::Reversible => "reversible",
            Theorem::Square => "square",
        }
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Invalid(format!("unknown theorem `{s}`")))
    }
}

/// Anything that produces a [`VerificationReport`].
#[derive(Debug, Clone, PartialEq)]
pub enum Check {
    Isotropic(CField),
    Flat,
    Reversible,
    Square,
    /// Isotropy of the S-curvature, `S = (n+1)cF`.
    IsotropicS,
    Identity(IdentityKind),
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Isotropic(c) => write!(f, "isotropic(c={c})"),
            Check::Flat => f.write_str("flat"),
            Check::Reversible => f.write_str("reversible"),
            Check::Square => f.write_str("square"),
            Check::IsotropicS => f.write_str("isotropicS"),
            Check::Identity(k) => write!(f, "identity:{}", k.name()),
        }
    }
}

pub fn run_check(spec: &MetricSpec, check: &Check, set: &SampleSet, opts: &Options) -> Result<VerificationReport> {
    match check {
        Check::Isotropic(c) => verify_isotropic(spec, set, c, opts),
        Check::Flat => verify_flat(spec, set, opts),
        Check::Reversible => verify_reversible(spec, set, opts),
        Check::Square => verify_square_pric(spec, set, opts),
        Check::IsotropicS => Ok(fit_isotropic_s(spec, set, opts)?.report),
        Check::Identity(kind) => run_identity(spec, *kind, set, opts),
    }
}

type PointResult = Result<(BTreeMap<String, f64>, Vec<Residual>)>;

fn drive<F>(check: &str, spec: &MetricSpec, set: &SampleSet, conds: &[Condition], exec: Execution, f: F) -> Result<VerificationReport>
where
    F: Fn(usize, &Sample) -> PointResult + Sync + Send,
{
    let indexed: Vec<(usize, &Sample)> = set.samples.iter().enumerate().collect();
    let results = exec.map(&indexed, |&(i, s)| f(i, s));
    let mut skipped = set.skipped.clone();
    let mut outcomes = Vec::with_capacity(results.len());
    for ((i, s), r) in indexed.iter().zip(results) {
        match r {
            Ok((values, residuals)) => outcomes.push((
                SampleRecord { index: *i, x: s.x.clone(), y: s.y.clone(), values, residuals: BTreeMap::new() },
                residuals,
            )),
            Err(e) => skipped.push(SkippedPoint { x: s.x.clone(), reason: e.to_string() }),
        }
    }
    if outcomes.is_empty() {
        return Err(Error::NoAdmissibleSamples { skipped: skipped.len() });
    }
    Ok(assemble(check, &spec.name, conds, outcomes, skipped))
}

fn worst(it: impl IntoIterator<Item = Residual>) -> Residual {
    it.into_iter().fold(Residual::default(), Residual::worst)
}

/// Frame directions followed by the sample direction.
fn fan(geo: &BaseGeometry, y: &[f64]) -> Vec<Vec<f64>> {
    let mut dirs = direction_frame(&geo.riemann.a);
    dirs.push(y.to_vec());
    dirs
}

fn nm1(t: &DirectionalTerms<f64>) -> f64 {
    t.n as f64 - 1.0
}

/// `ᵅRic − t^m_m α² − 2t_00 − (n−1)(ρ_{0;0} − ρ_0²)` and the weight `(n−1)(α² + β²)` of `c`.
fn condition_i_parts(t: &DirectionalTerms<f64>) -> (f64, f64, f64) {
    let a2 = t.alpha * t.alpha;
    let k = nm1(t);
    let rest = t.alpha_ric - t.t_trace * a2 - 2.0 * t.t00 - k * (t.rho00 - t.rho0 * t.rho0);
    let scale = t.alpha_ric.abs() + (t.t_trace * a2).abs() + 2.0 * t.t00.abs() + k * (t.rho00.abs() + t.rho0 * t.rho0);
    (rest, k * (a2 + t.beta * t.beta), scale)
}

/// `c` minimizing the condition (i) residual over the given directions.
pub fn fit_c(terms: &[DirectionalTerms<f64>]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for t in terms {
        let (rest, w, _) = condition_i_parts(t);
        num += rest * w;
        den += w * w;
    }
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

fn f2(t: &DirectionalTerms<f64>) -> f64 {
    (t.alpha + t.beta).powi(2)
}

fn condition_i(t: &DirectionalTerms<f64>, c: f64) -> Residual {
    let (rest, w, scale) = condition_i_parts(t);
    Residual::of(rest - c * w, f2(t) + scale + (c * w).abs())
}

/// `s^m_{0;m} + (n−1)(ρ_m s^m_0 − cβ)`
fn condition_ii(t: &DirectionalTerms<f64>, c: f64) -> Residual {
    let k = nm1(t);
    let v = t.s_div0 + k * (t.rho_s0 - c * t.beta);
    let f = t.alpha + t.beta;
    Residual::of(v, f + t.s_div0.abs() + k * (t.rho_s0.abs() + (c * t.beta).abs()))
}

/// `min(|s_0|, |r_00 + 2βs_0|)`, each relative to its natural scale.
fn condition_iii(t: &DirectionalTerms<f64>) -> Residual {
    let f = t.alpha + t.beta;
    let first = Residual::of(t.s0, f);
    let second = Residual::of(t.r00 + 2.0 * t.beta * t.s0, f * f + t.r00.abs() + 2.0 * (t.beta * t.s0).abs());
    if first.scaled <= second.scaled {
        first
    } else {
        second
    }
}

fn terms_on_fan(geo: &BaseGeometry, y: &[f64]) -> Vec<DirectionalTerms<f64>> {
    fan(geo, y).iter().map(|d| RandersDirectionEval::new(geo, d).terms()).collect()
}

fn values_of(sample: &DirectionalTerms<f64>) -> BTreeMap<String, f64> {
    BTreeMap::from([
        ("F".to_string(), sample.alpha + sample.beta),
        ("PRicRanders".to_string(), pric_closed_form(sample)),
        ("s0".to_string(), sample.s0),
        ("r00".to_string(), sample.r00),
    ])
}

pub fn verify_isotropic(spec: &MetricSpec, set: &SampleSet, c: &CField, opts: &Options) -> Result<VerificationReport> {
    isotropic_like("isotropic", spec, set, c, opts)
}

pub fn verify_flat(spec: &MetricSpec, set: &SampleSet, opts: &Options) -> Result<VerificationReport> {
    isotropic_like("flat", spec, set, &CField::Constant(0.0), opts)
}

fn isotropic_like(name: &str, spec: &MetricSpec, set: &SampleSet, c: &CField, opts: &Options) -> Result<VerificationReport> {
    let tol = opts.tol.identity;
    let conds = [
        Condition::new("i", "ᵅRic = (t^m_m + (n−1)c)α² + 2t_00 + (n−1)[ρ_{0;0} − ρ_0² + cβ²]", tol),
        Condition::new("ii", "s^m_{0;m} = −(n−1)(ρ_m s^m_0 − cβ)", tol),
        Condition::new("iii", "s_0 = 0 or r_00 + 2βs_0 = 0", tol),
    ];
    drive(name, spec, set, &conds, opts.exec, |_, s| {
        let geo = BaseGeometry::at(spec, &s.x)?;
        let terms = terms_on_fan(&geo, &s.y);
        let cv = match c {
            CField::Constant(v) => *v,
            CField::Field(e) => e.eval(&s.x)?,
            CField::Fit => fit_c(&terms),
        };
        let residuals = vec![
            worst(terms.iter().map(|t| condition_i(t, cv))),
            worst(terms.iter().map(|t| condition_ii(t, cv))),
            worst(terms.iter().map(condition_iii)),
        ];
        let mut values = values_of(terms.last().expect("fan is nonempty"));
        values.insert("c".into(), cv);
        Ok((values, residuals))
    })
}

pub fn verify_reversible(spec: &MetricSpec, set: &SampleSet, opts: &Options) -> Result<VerificationReport> {
    let tol = opts.tol.identity;
    let conds = [
        Condition::new("s-divergence", "s^m_{0;m} = −(n−1)ρ_m s^m_0", tol),
        Condition::new("s0-or-e00", "s_0 = 0 or r_00 + 2βs_0 = 0", tol),
        Condition::new("direct", "|PRic(y) − PRic(−y)| / F(y)²", opts.tol.reversal),
        Condition::info("direct-displayed", "direct check with the displayed closed form", opts.tol.reversal),
    ];
    drive("reversible", spec, set, &conds, opts.exec, |_, s| {
        let geo = BaseGeometry::at(spec, &s.x)?;
        let terms = terms_on_fan(&geo, &s.y);
        let direct = |t: &DirectionalTerms<f64>| Residual::of(n_identity_sides_definition(t).0, f2(t));
        let displayed = |t: &DirectionalTerms<f64>| Residual::of(n_identity_sides(t).0, f2(t));
        let residuals = vec![
            worst(terms.iter().map(|t| condition_ii(t, 0.0))),
            worst(terms.iter().map(condition_iii)),
            worst(terms.iter().map(direct)),
            worst(terms.iter().map(displayed)),
        ];
        let sample = terms.last().expect("fan is nonempty");
        let mut values = values_of(sample);
        values.insert("PRicRandersReversed".into(), pric_closed_form(&randers::reversed(sample)));
        Ok((values, residuals))
    })
}

fn max_abs(a: &ndarray::Array3<f64>) -> f64 {
    a.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// `(c, c_m)` of `S/((n+1)F)` from the jets of one pipeline run.
fn c_and_gradient(pj: &PricJets) -> (f64, Array1<f64>) {
    let n = pj.dim();
    let (s, f) = (&pj.s, &pj.norm.f);
    let k = n as f64 + 1.0;
    let fv = f.value();
    let c = s.value() / (k * fv);
    let grad = Array1::from_shape_fn(n, |m| (s.partial(m) * fv - s.value() * f.partial(m)) / (k * fv * fv));
    (c, grad)
}

pub fn verify_square_pric(spec: &MetricSpec, set: &SampleSet, opts: &Options) -> Result<VerificationReport> {
    let tol = opts.tol.identity;
    let conds = [
        Condition::new("third-derivative", "max |PRic_{.j.k.l}|", tol),
        Condition::info("closed-form-agreement", "definition and closed-form PRic_{.j.k.l} agree", 1e-6),
        Condition::info(
            "isotropic-s-chain",
            "PRic_{.j.k.l} = Ric_{.j.k.l} + (n−1){c_0 F_{jkl} + c² F²_{jkl}} with c from S/((n+1)F)",
            1e-6,
        ),
        Condition::info("f-third-display", "displayed F_{y^jy^ky^l} matches the jets", tol),
        Condition::info("f2-third-display", "displayed F²_{y^jy^ky^l} matches the jets", tol),
    ];
    drive("square", spec, set, &conds, opts.exec, |_, s| {
        let n = spec.dim();
        let pj = PricJets::compute(spec, &s.x, &s.y, 3)?;
        let t_pric = third_y_derivatives(&pj.pric, n);
        let t_ric = third_y_derivatives(&pj.ric, n);
        let t_f = third_y_derivatives(&pj.norm.f, n);
        let t_f2 = third_y_derivatives(&pj.norm.f2, n);
        let scale = 1.0 + max_abs(&t_pric);

        let geo = BaseGeometry::at(spec, &s.x)?;
        let closed = pric_closed_form(&directional_jets(&geo, &s.y, 3)?);
        let t_closed = third_y_derivatives(&closed, n);

        let (c, grad) = c_and_gradient(&pj);
        let c0: f64 = grad.iter().zip(&s.y).map(|(g, y)| g * y).sum();
        let k = n as f64 - 1.0;
        let chain = &t_ric + &((&t_f * c0 + &t_f2 * (c * c)) * k);

        let b = &geo.beta.b;
        let a = &geo.riemann.a;
        let residuals = vec![
            Residual::absolute(max_abs(&t_pric)),
            Residual::of(max_abs(&(&t_pric - &t_closed)), scale),
            Residual::of(max_abs(&(&t_pric - &chain)), scale),
            Residual::of(max_abs(&(&t_f - &randers::f_third_display(a, &s.y))), 1.0 + max_abs(&t_f)),
            Residual::of(max_abs(&(&t_f2 - &randers::f2_third_display(a, b, &s.y))), 1.0 + max_abs(&t_f2)),
        ];
        let values = BTreeMap::from([
            ("F".to_string(), pj.norm.f.value()),
            ("S".to_string(), pj.s.value()),
            ("c".to_string(), c),
            ("c0".to_string(), c0),
            ("PRic".to_string(), pj.pric.value()),
            ("thirdDerivativeMax".to_string(), max_abs(&t_pric)),
        ]);
        Ok((values, residuals))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SFitPoint {
    pub x: Vec<f64>,
    /// Mean of `S/((n+1)F)` over the direction fan.
    pub c: f64,
    /// `max − min` of the candidates.
    pub spread: f64,
    /// `∂c/∂x^m` along the sample direction.
    pub c_grad: Vec<f64>,
    /// `c_m y^m`
    pub c0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SCurvatureFit {
    pub points: Vec<SFitPoint>,
    pub max_spread: f64,
    pub isotropic: bool,
    pub report: VerificationReport,
}

/// Estimate `c` in `S = (n+1)cF` per sample and judge isotropy by the spread.
pub fn fit_isotropic_s(spec: &MetricSpec, set: &SampleSet, opts: &Options) -> Result<SCurvatureFit> {
    let conds = [Condition::new("spread", "spread of S/((n+1)F) over the direction fan", opts.tol.identity)];
    let k = spec.dim() as f64 + 1.0;
    let report = drive("isotropicS", spec, set, &conds, opts.exec, |_, s| {
        let geo = BaseGeometry::at(spec, &s.x)?;
        let mut cands = Vec::new();
        for d in direction_frame(&geo.riemann.a) {
            let f = geo.riemann.alpha(&d) + geo.beta.b.dot(&Array1::from(d.clone()));
            cands.push(finsler::s_curvature(spec, &s.x, &d)? / (k * f));
        }
        let pj = PricJets::compute(spec, &s.x, &s.y, 0)?;
        let (c_y, grad) = c_and_gradient(&pj);
        cands.push(c_y);
        let lo = cands.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = cands.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mean = cands.iter().sum::<f64>() / cands.len() as f64;
        let c0: f64 = grad.iter().zip(&s.y).map(|(g, y)| g * y).sum();
        let mut values = BTreeMap::from([
            ("c".to_string(), mean),
            ("spread".to_string(), hi - lo),
            ("c0".to_string(), c0),
        ]);
        for (m, g) in grad.iter().enumerate() {
            values.insert(format!("c_x{}", m + 1), *g);
        }
        Ok((values, vec![Residual::absolute(hi - lo)]))
    })?;
    let n = spec.dim();
    let points: Vec<SFitPoint> = report
        .records
        .iter()
        .map(|r| SFitPoint {
            x: r.x.clone(),
            c: r.values["c"],
            spread: r.values["spread"],
            c_grad: (0..n).map(|m| r.values[&format!("c_x{}", m + 1)]).collect(),
            c0: r.values["c0"],
        })
        .collect();
    let max_spread = report.max_residual("spread");
    Ok(SCurvatureFit { points, max_spread, isotropic: report.passed, report })
}

pub fn run_identity(spec: &MetricSpec, kind: IdentityKind, set: &SampleSet, opts: &Options) -> Result<VerificationReport> {
    let tol = opts.tol;
    match kind {
        IdentityKind::Eq7 => {
            let conds = [
                Condition::new("eq7", "|PRic_closed − PRic_def| / (|PRic_def| + F²)", tol.identity),
                Condition::info("eq7-displayed", "the same with the displayed closed form", tol.identity),
            ];
            drive(kind.name(), spec, set, &conds, opts.exec, |_, s| {
                let e = finsler::evaluate(spec, &s.x, &s.y)?;
                let geo = BaseGeometry::at(spec, &s.x)?;
                let t = RandersDirectionEval::new(&geo, &s.y).terms();
                let closed = pric_closed_form(&t);
                let displayed = pric_closed_form_displayed(&t);
                let values = BTreeMap::from([
                    ("F".to_string(), e.f),
                    ("PRic".to_string(), e.pric),
                    ("PRicRanders".to_string(), closed),
                    ("PRicRandersDisplayed".to_string(), displayed),
                ]);
                let scale = e.pric.abs() + e.f * e.f;
                Ok((values, vec![Residual::of(closed - e.pric, scale), Residual::of(displayed - e.pric, scale)]))
            })
        }
        IdentityKind::EPoly => {
            let conds = [
                Condition::new("epoly", "F²(PRic − (n−1)cF²) = ε Σ E_k α^k, displayed forms", tol.identity),
                Condition::new("epoly-definition", "the same for the definition-consistent forms", tol.identity),
            ];
            drive(kind.name(), spec, set, &conds, opts.exec, |i, s| {
                let c = opts
                    .epoly_c
                    .unwrap_or_else(|| sampling::uniform_in(&mut sampling::rng(opts.seed, 1 + i as u64), -1.0, 1.0));
                let geo = BaseGeometry::at(spec, &s.x)?;
                let terms = terms_on_fan(&geo, &s.y);
                let shown = worst(terms.iter().map(|t| {
                    let (lhs, rhs) = e_identity_sides(t, c);
                    Residual::of(lhs - rhs, f2(t) * pric_closed_form_displayed(t).abs() + 1.0)
                }));
                let def = worst(terms.iter().map(|t| {
                    let (lhs, rhs) = e_identity_sides_definition(t, c);
                    Residual::of(lhs - rhs, f2(t) * pric_closed_form(t).abs() + 1.0)
                }));
                let mut values = values_of(terms.last().expect("fan is nonempty"));
                values.insert("c".into(), c);
                Ok((values, vec![shown, def]))
            })
        }
        IdentityKind::NPoly => {
            let conds = [
                Condition::new("npoly", "PRic(y) − PRic(−y) = ½[N(y)/F(y)² − N(−y)/F(−y)²], displayed forms", tol.identity),
                Condition::new("npoly-definition", "the same for the definition-consistent forms", tol.identity),
                Condition::new("n2-2beta-n3", "N_2 − 2βN_3 = 0", tol.trivial),
            ];
            drive(kind.name(), spec, set, &conds, opts.exec, |_, s| {
                let geo = BaseGeometry::at(spec, &s.x)?;
                let terms = terms_on_fan(&geo, &s.y);
                let sides = |t: &DirectionalTerms<f64>, def: bool| {
                    let (direct, via) = if def { n_identity_sides_definition(t) } else { n_identity_sides(t) };
                    let back = randers::reversed(t);
                    let p = if def { pric_closed_form } else { pric_closed_form_displayed };
                    Residual::of(direct - via, p(t).abs() + p(&back).abs() + f2(t))
                };
                let npoly = worst(terms.iter().map(|t| sides(t, false)));
                let npoly_def = worst(terms.iter().map(|t| sides(t, true)));
                let n2 = worst(terms.iter().map(|t| {
                    let nc = NCoefficients::new(t);
                    Residual::absolute(nc.n2 - 2.0 * t.beta * nc.n3)
                }));
                Ok((values_of(terms.last().expect("fan is nonempty")), vec![npoly, npoly_def, n2]))
            })
        }
        IdentityKind::Homogeneity => {
            let h = tol.homogeneity;
            let conds = [
                Condition::new("F", "F(λy) = λF(y)", h),
                Condition::new("G", "G(λy) = λ²G(y)", h),
                Condition::new("S", "S(λy) = λS(y)", h),
                Condition::new("Ric", "Ric(λy) = λ²Ric(y)", h),
                Condition::new("PRic", "PRic(λy) = λ²PRic(y)", h),
                Condition::new("euler", "g_ij y^i y^j = F²", h),
            ];
            drive(kind.name(), spec, set, &conds, opts.exec, |_, s| {
                let base = finsler::evaluate(spec, &s.x, &s.y)?;
                let f = base.f;
                let euler = {
                    let y = Array1::from(s.y.clone());
                    Residual::of(y.dot(&base.g.dot(&y)) - f * f, f * f)
                };
                let mut res = vec![Residual::default(); 5];
                for lambda in [0.5, 2.0, 3.0] {
                    let ys: Vec<f64> = s.y.iter().map(|v| v * lambda).collect();
                    let e = finsler::evaluate(spec, &s.x, &ys)?;
                    let law = |q: f64, q0: f64, k: i32| {
                        let l = lambda.powi(k);
                        Residual::of(q - l * q0, l * (q0.abs() + f.powi(k)))
                    };
                    let g = worst((0..s.x.len()).map(|i| law(e.spray[i], base.spray[i], 2)));
                    let r = [law(e.f, f, 1), g, law(e.s, base.s, 1), law(e.ric, base.ric, 2), law(e.pric, base.pric, 2)];
                    for (acc, r) in res.iter_mut().zip(r) {
                        *acc = acc.worst(r);
                    }
                }
                res.push(euler);
                let values = BTreeMap::from([
                    ("F".to_string(), f),
                    ("S".to_string(), base.s),
                    ("Ric".to_string(), base.ric),
                    ("PRic".to_string(), base.pric),
                ]);
                Ok((values, res))
            })
        }
        IdentityKind::STwoPath => {
            let conds = [Condition::new(
                "sTwoPath",
                "∂G^m/∂y^m − y^m ∂_m ln σ = y^m ∂_m τ − 2G^m ∂τ/∂y^m",
                tol.two_path,
            )];
            drive(kind.name(), spec, set, &conds, opts.exec, |_, s| {
                let e = finsler::evaluate(spec, &s.x, &s.y)?;
                let values = BTreeMap::from([
                    ("F".to_string(), e.f),
                    ("S".to_string(), e.s),
                    ("STransport".to_string(), e.s_transport),
                ]);
                Ok((values, vec![Residual::of(e.s - e.s_transport, e.s.abs() + e.f)]))
            })
        }
    }
}
