//! Built-in metrics with known behaviour, and a generator of random Randers
//! metrics for oracle tests.

use rand::RngCore;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finsler::{self, FinslerEval};
use crate::metric::MetricSpec;
use crate::sampling::{self, cholesky};
use crate::verify::{run_check, CField, Check, IdentityKind, Options};

/// Regeneration attempts of [`random_randers`] before giving up.
pub const RANDOM_ATTEMPTS: usize = 64;
/// Points probed by [`random_randers`] for admissibility.
pub const PROBE_POINTS: usize = 1000;
/// Largest `‖β‖_α` accepted on the probe set.
pub const MAX_RANDOM_BETA_NORM: f64 = 0.9;
/// Coefficient scale of `b_i` relative to the amplitude.
const B_SCALE: f64 = 3.0;

/// Scalar quantity with a closed-form value on a catalogue entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// `S / ((n+1)F)`
    SRatio,
    /// `Ric / F²`
    RicRatio,
    /// `PRic / F²`
    PricRatio,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::SRatio => "S/((n+1)F)",
            Quantity::RicRatio => "Ric/F^2",
            Quantity::PricRatio => "PRic/F^2",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expectation {
    Verdict { check: Check, pass: bool, note: &'static str },
    Value { quantity: Quantity, value: f64, tol: f64, note: &'static str },
}

#[derive(Debug, Clone)]
pub struct CatalogueEntry {
    pub name: String,
    pub spec: MetricSpec,
    pub expected: Vec<Expectation>,
}

fn spec(name: &str, a: Vec<Vec<String>>, b: Vec<String>, domain: Vec<(f64, f64)>) -> MetricSpec {
    MetricSpec::from_sources(name, &a, &b, &domain).expect("built-in specs are well formed")
}

fn euclidean(n: usize) -> Vec<Vec<String>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { "1" } else { "0" }.to_string()).collect()).collect()
}

/// `α` Euclidean, `β` constant, on `[-1, 1]^n`.
pub fn flat_randers(n: usize, b: &[f64]) -> MetricSpec {
    assert_eq!(b.len(), n, "one component of b per coordinate");
    let name = format!("flat-randers-{}", b.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join("_"));
    spec(&name, euclidean(n), b.iter().map(|v| format!("{v:?}")).collect(), vec![(-1.0, 1.0); n])
}

/// Funk metric of the unit ball: Klein `α` with `b_i = x_i / (1 − |x|²)`.
pub fn funk(n: usize) -> MetricSpec {
    let r2 = (1..=n).map(|i| format!("x{i}^2")).collect::<Vec<_>>().join(" + ");
    let q = format!("(1 - ({r2}))");
    let a = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let num = if i == j { format!("{q} + x{}^2", i + 1) } else { format!("x{}*x{}", i.min(j) + 1, i.max(j) + 1) };
                    format!("({num}) / {q}^2")
                })
                .collect()
        })
        .collect();
    let b = (1..=n).map(|i| format!("x{i} / {q}")).collect();
    let half = if n == 2 { 0.55 } else { 0.45 };
    spec(&format!("funk-{n}"), a, b, vec![(-half, half); n])
}

/// Euclidean `α` with the rotational Killing form `β = ε(−x2 dx1 + x1 dx2)`, `ε = 0.1`.
pub fn killing_rotation() -> MetricSpec {
    spec(
        "killing-rotation",
        euclidean(2),
        vec!["-0.1*x2".into(), "0.1*x1".into()],
        vec![(-1.4, 1.4), (-1.4, 1.4)],
    )
}

/// Round metric `dθ² + sin²θ dφ²` with `β = 0`.
pub fn unit_sphere() -> MetricSpec {
    spec(
        "unit-sphere",
        vec![vec!["1".into(), "0".into()], vec!["0".into(), "sin(x1)^2".into()]],
        vec!["0".into(), "0".into()],
        vec![(0.3, 2.8), (-3.0, 3.0)],
    )
}

/// Euclidean plane in polar coordinates with `β = 0`.
pub fn polar_flat() -> MetricSpec {
    spec(
        "polar-flat",
        vec![vec!["1".into(), "0".into()], vec!["0".into(), "x1^2".into()]],
        vec!["0".into(), "0".into()],
        vec![(0.5, 3.0), (-3.0, 3.0)],
    )
}

fn pass(check: Check, note: &'static str) -> Expectation {
    Expectation::Verdict { check, pass: true, note }
}

fn fail(check: Check, note: &'static str) -> Expectation {
    Expectation::Verdict { check, pass: false, note }
}

fn value(quantity: Quantity, value: f64, tol: f64, note: &'static str) -> Expectation {
    Expectation::Value { quantity, value, tol, note }
}

fn all_identities() -> impl Iterator<Item = Expectation> {
    IdentityKind::ALL.into_iter().map(|k| pass(Check::Identity(k), "holds for every admissible Randers metric"))
}

pub fn catalogue() -> Vec<CatalogueEntry> {
    let mut out = Vec::new();
    for b in [0.0, 0.3, 0.5] {
        let mut expected = vec![
            pass(Check::Flat, "constant coefficients: every tensor vanishes"),
            pass(Check::Isotropic(CField::Constant(0.0)), "PRic = 0"),
            pass(Check::Isotropic(CField::Fit), "fitted c = 0"),
            pass(Check::Reversible, "closed β"),
            pass(Check::Square, "PRic ≡ 0"),
            pass(Check::IsotropicS, "S = 0"),
            value(Quantity::SRatio, 0.0, 1e-12, "S = 0"),
            value(Quantity::RicRatio, 0.0, 1e-12, "G = 0"),
            value(Quantity::PricRatio, 0.0, 1e-12, "PRic = 0"),
        ];
        expected.extend(all_identities());
        out.push(CatalogueEntry { name: format!("flat-randers-{b}"), spec: flat_randers(2, &[b, 0.0]), expected });
    }
    for n in [2, 3] {
        let mut expected = vec![
            pass(Check::Flat, "Funk is PRic-flat"),
            pass(Check::Isotropic(CField::Fit), "fitted c = 0"),
            pass(Check::IsotropicS, "S = (n+1)F/2"),
            pass(Check::Square, "PRic ≡ 0"),
            value(Quantity::SRatio, 0.5, 1e-7, "S = (n+1)F/2"),
            value(Quantity::RicRatio, -((n - 1) as f64) / 4.0, 1e-6, "flag curvature −1/4"),
            value(Quantity::PricRatio, 0.0, 1e-7, "S_{|m}y^m = S²/(n+1) cancels Ric"),
        ];
        expected.extend(all_identities());
        out.push(CatalogueEntry { name: format!("funk-{n}"), spec: funk(n), expected });
    }
    {
        let mut expected = vec![
            fail(Check::Reversible, "ρ_m s^m_0 ≠ 0 and r_00 + 2βs_0 = 2βs_0 ≠ 0"),
            fail(Check::Flat, "s_0 ≠ 0 and 2βs_0 ≠ 0 at generic points"),
        ];
        expected.extend(all_identities());
        out.push(CatalogueEntry { name: "killing-rotation".into(), spec: killing_rotation(), expected });
    }
    {
        let mut expected = vec![
            fail(Check::Flat, "ᵅRic = α² while every β-term vanishes"),
            pass(Check::Isotropic(CField::Constant(1.0)), "PRic = Ric = F²"),
            pass(Check::Isotropic(CField::Fit), "fitted c = 1"),
            pass(Check::Reversible, "β = 0"),
            pass(Check::Square, "Ric = α² is quadratic"),
            pass(Check::IsotropicS, "S = 0"),
            value(Quantity::SRatio, 0.0, 1e-12, "β = 0"),
            value(Quantity::RicRatio, 1.0, 1e-9, "sectional curvature 1"),
            value(Quantity::PricRatio, 1.0, 1e-9, "PRic = Ric"),
        ];
        expected.extend(all_identities());
        out.push(CatalogueEntry { name: "unit-sphere".into(), spec: unit_sphere(), expected });
    }
    {
        let mut expected = vec![
            pass(Check::Flat, "flat α, β = 0"),
            pass(Check::Reversible, "β = 0"),
            pass(Check::Square, "PRic ≡ 0"),
            pass(Check::IsotropicS, "S = 0"),
            value(Quantity::RicRatio, 0.0, 1e-10, "flat"),
            value(Quantity::PricRatio, 0.0, 1e-10, "flat"),
        ];
        expected.extend(all_identities());
        out.push(CatalogueEntry { name: "polar-flat".into(), spec: polar_flat(), expected });
    }
    out
}

pub fn by_name(name: &str) -> Option<CatalogueEntry> {
    catalogue().into_iter().find(|e| e.name == name)
}

/// Exponent vectors of all monomials in `n` variables of total degree `≤ degree`.
fn monomials(n: usize, degree: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0; n]];
    for d in 1..=degree {
        let mut cur = vec![0usize; n];
        fill(&mut out, &mut cur, 0, d);
    }
    out
}

fn fill(out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>, var: usize, left: usize) {
    if var + 1 == cur.len() {
        cur[var] = left;
        out.push(cur.clone());
        cur[var] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[var] = e;
        fill(out, cur, var + 1, left - e);
    }
    cur[var] = 0;
}

fn polynomial(constant: f64, terms: &[(f64, &Vec<usize>)]) -> String {
    let mut s = format!("{constant:?}");
    for (c, mono) in terms {
        if *c == 0.0 {
            continue;
        }
        let sign = if *c < 0.0 { " - " } else { " + " };
        s.push_str(sign);
        s.push_str(&format!("{:?}", c.abs()));
        for (i, &e) in mono.iter().enumerate() {
            match e {
                0 => {}
                1 => s.push_str(&format!("*x{}", i + 1)),
                _ => s.push_str(&format!("*x{}^{e}", i + 1)),
            }
        }
    }
    s
}

fn admissible_on_probes(spec: &MetricSpec, rng: &mut impl RngCore) -> bool {
    let n = spec.dim();
    let dom = spec.domain();
    let corners = (0..1usize << n).map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { dom[i].1 } else { dom[i].0 }).collect());
    let interior: Vec<Vec<f64>> = (0..PROBE_POINTS)
        .map(|_| dom.iter().map(|&(lo, hi)| sampling::uniform_in(rng, lo, hi)).collect())
        .collect();
    corners.chain(interior).all(|x: Vec<f64>| probe(spec, &x))
}

/// `a` positive definite and `‖β‖_α < MAX_RANDOM_BETA_NORM` at `x`.
pub fn probe(spec: &MetricSpec, x: &[f64]) -> bool {
    let (Ok(a), Ok(b)) = (spec.a_at(x), spec.b_at(x)) else { return false };
    let n = b.len();
    let a = ndarray::Array2::from_shape_fn((n, n), |(i, j)| a[i][j]);
    let Some(l) = cholesky(&a) else { return false };
    let mut z = vec![0.0; n];
    for i in 0..n {
        let mut v = b[i];
        for k in 0..i {
            v -= l[[i, k]] * z[k];
        }
        z[i] = v / l[[i, i]];
    }
    z.iter().map(|v| v * v).sum::<f64>().sqrt() < MAX_RANDOM_BETA_NORM
}

/// Random polynomial Randers metric on `[-1, 1]^n`: `a = δ + amplitude·P`,
/// `b = 3·amplitude·Q` with `P`, `Q` of total degree `≤ degree` and
/// coefficients uniform in `[-1, 1]`. Deterministic in its arguments;
/// candidates failing the probe test are regenerated.
pub fn random_randers(seed: u64, n: usize, degree: usize, amplitude: f64) -> Result<MetricSpec> {
    if n == 0 {
        return Err(Error::Invalid("dimension must be positive".into()));
    }
    let monos = monomials(n, degree);
    let domain = vec![(-1.0, 1.0); n];
    let stream = ((n as u64) << 48) | ((degree as u64) << 40);
    for attempt in 0..RANDOM_ATTEMPTS {
        let mut rng = sampling::rng(seed, stream | attempt as u64);
        let mut coef = |scale: f64| -> Vec<f64> {
            monos.iter().map(|_| scale * (2.0 * sampling::uniform(&mut rng) - 1.0)).collect()
        };
        let mut a = vec![vec![String::new(); n]; n];
        for i in 0..n {
            for j in i..n {
                let c = coef(amplitude);
                let base = if i == j { 1.0 } else { 0.0 };
                let terms: Vec<(f64, &Vec<usize>)> = c[1..].iter().copied().zip(&monos[1..]).collect();
                let p = polynomial(base + c[0], &terms);
                a[i][j] = p.clone();
                a[j][i] = p;
            }
        }
        let b: Vec<String> = (0..n)
            .map(|_| {
                let c = coef(B_SCALE * amplitude);
                let terms: Vec<(f64, &Vec<usize>)> = c[1..].iter().copied().zip(&monos[1..]).collect();
                polynomial(c[0], &terms)
            })
            .collect();
        let name = format!("random-n{n}-d{degree}-s{seed}");
        let spec = MetricSpec::from_sources(&name, &a, &b, &domain)?;
        if admissible_on_probes(&spec, &mut rng) {
            return Ok(spec);
        }
    }
    Err(Error::GeneratorExhausted { attempts: RANDOM_ATTEMPTS })
}

/// Observed outcome of one documented expectation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectationOutcome {
    pub entry: String,
    /// Check or quantity name.
    pub target: String,
    pub expected: String,
    pub observed: String,
    /// Largest residual (verdicts) or deviation (values).
    pub residual: f64,
    pub reproduced: bool,
}

impl Quantity {
    pub fn of(self, e: &FinslerEval) -> f64 {
        let n = e.x.len() as f64;
        match self {
            Quantity::SRatio => e.s / ((n + 1.0) * e.f),
            Quantity::RicRatio => e.ric / (e.f * e.f),
            Quantity::PricRatio => e.pric / (e.f * e.f),
        }
    }
}

/// Runs every expectation of `entry` on one sample set drawn with `seed`.
pub fn run_entry(entry: &CatalogueEntry, samples: usize, seed: u64, opts: &Options) -> Result<Vec<ExpectationOutcome>> {
    let set = sampling::draw_samples(&entry.spec, samples, seed)?;
    let mut evals: Option<Vec<Result<FinslerEval>>> = None;
    let mut out = Vec::with_capacity(entry.expected.len());
    for exp in &entry.expected {
        match exp {
            Expectation::Verdict { check, pass, .. } => {
                let report = run_check(&entry.spec, check, &set, opts)?;
                let residual = report
                    .conditions
                    .iter()
                    .filter(|c| !c.informational)
                    .map(|c| c.max_residual)
                    .fold(0.0, f64::max);
                out.push(ExpectationOutcome {
                    entry: entry.name.clone(),
                    target: check.to_string(),
                    expected: verdict(*pass).into(),
                    observed: verdict(report.passed).into(),
                    residual,
                    reproduced: report.passed == *pass,
                });
            }
            Expectation::Value { quantity, value, tol, .. } => {
                let evals = evals.get_or_insert_with(|| {
                    opts.exec.map(&set.samples, |s| finsler::evaluate(&entry.spec, &s.x, &s.y))
                });
                let mut dev = 0.0f64;
                let mut seen = 0;
                for e in evals.iter().flatten() {
                    let d = (quantity.of(e) - value).abs();
                    dev = if d.is_nan() { f64::INFINITY } else { dev.max(d) };
                    seen += 1;
                }
                if seen == 0 {
                    return Err(Error::NoAdmissibleSamples { skipped: set.skipped.len() + evals.len() });
                }
                out.push(ExpectationOutcome {
                    entry: entry.name.clone(),
                    target: quantity.name().into(),
                    expected: format!("{value} ± {tol:e}"),
                    observed: format!("max deviation {dev:.3e}"),
                    residual: dev,
                    reproduced: dev <= *tol,
                });
            }
        }
    }
    Ok(out)
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riemann::BaseGeometry;

    #[test]
    fn catalogue_entries_are_admissible_on_their_boxes() {
        for entry in catalogue() {
            let dom = entry.spec.domain().to_vec();
            let n = entry.spec.dim();
            for k in 0..=4 {
                let x: Vec<f64> = (0..n).map(|i| dom[i].0 + (dom[i].1 - dom[i].0) * k as f64 / 4.0).collect();
                assert!(BaseGeometry::at(&entry.spec, &x).is_ok(), "{} at {x:?}", entry.name);
            }
            assert!(!entry.expected.is_empty());
        }
    }

    #[test]
    fn funk_density_is_admissible_near_box_corner() {
        let spec = funk(3);
        let geo = BaseGeometry::at(&spec, &[0.45, 0.45, 0.45]).unwrap();
        // ‖β‖_α = |x| for the Funk metric
        assert!((geo.beta.norm - (3.0f64 * 0.45 * 0.45).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn monomial_count() {
        assert_eq!(monomials(2, 2).len(), 6);
        assert_eq!(monomials(3, 2).len(), 10);
        assert_eq!(monomials(4, 3).len(), 35);
        assert_eq!(monomials(3, 0), vec![vec![0, 0, 0]]);
    }

    #[test]
    fn random_specs_are_deterministic() {
        let a = random_randers(42, 3, 2, 0.05).unwrap();
        let b = random_randers(42, 3, 2, 0.05).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_randers(43, 3, 2, 0.05).unwrap());
    }

    #[test]
    fn random_specs_pass_probe_admissibility() {
        for seed in 1..=5 {
            let spec = random_randers(seed, 2, 2, 0.05).unwrap();
            let mut rng = sampling::rng(seed ^ 0xabc, 9);
            for _ in 0..PROBE_POINTS {
                let x: Vec<f64> = (0..2).map(|_| sampling::uniform_in(&mut rng, -1.0, 1.0)).collect();
                assert!(probe(&spec, &x));
            }
        }
    }

    #[test]
    fn zero_amplitude_is_euclidean() {
        let spec = random_randers(1, 2, 2, 0.0).unwrap();
        assert_eq!(spec.a_at(&[0.3, 0.7]).unwrap(), vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(spec.b_at(&[0.3, 0.7]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn oversized_amplitude_exhausts_the_generator() {
        assert!(matches!(random_randers(1, 2, 2, 5.0), Err(Error::GeneratorExhausted { .. })));
    }
}
