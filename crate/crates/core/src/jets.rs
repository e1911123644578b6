//! Truncated multivariate Taylor series ("jets").
//!
//! A [`Jet`] stores the Taylor expansion of a scalar function around a point,
//! truncated per *variable group*: every group (for example the base
//! coordinates `x1..xn` and the fibre coordinates `y1..yn`) carries its own
//! order cap, and a monomial is kept iff, for every group, the total degree of
//! its exponents in that group does not exceed the group's cap.
//!
//! Coefficients are Taylor-normalized: the coefficient of the monomial with
//! multi-index `m` is `∂^m f / m!`. [`Jet::extract`] undoes the factorials.
//!
//! Binary operations on jets whose layouts share the same group structure but
//! differ in caps truncate both operands to the componentwise minimum first,
//! so every result is exact to the order that is actually known.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, LazyLock, OnceLock, RwLock};

use thiserror::Error;

/// Largest order cap a single variable group may carry.
///
/// The third vertical derivative of the projective Ricci curvature needs the
/// squared norm expanded to fibre order 7, so the cap sits one above that.
pub const MAX_ORDER: u8 = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    #[error("unsupported jet order {order} (supported: 1..={max})")]
    UnsupportedOrder { order: u8, max: u8 },
    #[error("jet layouts {left} and {right} are incompatible")]
    LayoutMismatch { left: String, right: String },
    #[error("domain error in {op}: argument value {value}")]
    Domain { op: &'static str, value: f64 },
    #[error("multi-index {index:?} is outside layout {layout}")]
    IndexOutOfRange { index: Vec<u8>, layout: String },
    #[error("variable {var} out of range for a layout with {nvars} variables")]
    VariableOutOfRange { var: usize, nvars: usize },
    #[error("derivative along variable {var} exhausts its order budget")]
    OrderExhausted { var: usize },
    #[error("singular jet matrix (pivot {pivot:e})")]
    Singular { pivot: f64 },
    #[error("active variable set is empty")]
    NoActiveVariables,
}

pub type Result<T> = std::result::Result<T, JetError>;

/// Group structure and caps: `(number of variables, order cap)` per group.
pub type LayoutKey = Vec<(usize, u8)>;

/// Monomial table and product schedule for one group structure.
pub struct Layout {
    key: LayoutKey,
    nvars: usize,
    group_of: Vec<usize>,
    monos: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, u32>,
    max_degree: usize,
    /// `(out, lhs, rhs)` triples with `mono[lhs] + mono[rhs] = mono[out]`.
    products: Vec<(u32, u32, u32)>,
    derivs: Vec<OnceLock<Derivative>>,
    truncations: RwLock<HashMap<LayoutKey, Arc<Vec<u32>>>>,
}

struct Derivative {
    target: Arc<Layout>,
    /// For every target monomial: source index and multiplicity factor.
    map: Vec<(u32, f64)>,
}

impl fmt::Debug for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Layout{:?}", self.key)
    }
}

static LAYOUTS: LazyLock<RwLock<HashMap<LayoutKey, Arc<Layout>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

impl Layout {
    /// Interned layout for the given group structure.
    pub fn get(key: &[(usize, u8)]) -> Arc<Layout> {
        if let Some(l) = LAYOUTS.read().unwrap().get(key) {
            return l.clone();
        }
        let built = Arc::new(Layout::build(key.to_vec()));
        LAYOUTS
            .write()
            .unwrap()
            .entry(key.to_vec())
            .or_insert(built)
            .clone()
    }

    fn build(key: LayoutKey) -> Layout {
        let nvars: usize = key.iter().map(|g| g.0).sum();
        let mut group_of = Vec::with_capacity(nvars);
        for (g, &(size, _)) in key.iter().enumerate() {
            group_of.extend(std::iter::repeat(g).take(size));
        }

        let mut monos: Vec<Vec<u8>> = vec![Vec::new()];
        for &(size, cap) in &key {
            let group_monos = group_monomials(size, cap);
            monos = monos
                .iter()
                .flat_map(|prefix| {
                    group_monos.iter().map(move |g| {
                        let mut m = prefix.clone();
                        m.extend_from_slice(g);
                        m
                    })
                })
                .collect();
        }
        monos.sort_by(|a, b| {
            let da: u32 = a.iter().map(|&e| e as u32).sum();
            let db: u32 = b.iter().map(|&e| e as u32).sum();
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        let index: HashMap<Vec<u8>, u32> = monos
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i as u32))
            .collect();
        let max_degree = key.iter().map(|&(size, cap)| if size > 0 { cap as usize } else { 0 }).sum();

        let mut products = Vec::new();
        let mut sub = vec![0u8; nvars];
        let mut rest = vec![0u8; nvars];
        for (out, m) in monos.iter().enumerate() {
            sub.iter_mut().for_each(|e| *e = 0);
            loop {
                for v in 0..nvars {
                    rest[v] = m[v] - sub[v];
                }
                products.push((out as u32, index[&sub], index[&rest]));
                // odometer over sub <= m
                let mut v = 0;
                while v < nvars {
                    if sub[v] < m[v] {
                        sub[v] += 1;
                        break;
                    }
                    sub[v] = 0;
                    v += 1;
                }
                if v == nvars {
                    break;
                }
            }
        }

        Layout {
            key,
            nvars,
            group_of,
            monos,
            index,
            max_degree,
            products,
            derivs: (0..nvars).map(|_| OnceLock::new()).collect(),
            truncations: RwLock::new(HashMap::new()),
        }
    }

    pub fn key(&self) -> &LayoutKey {
        &self.key
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Number of stored coefficients.
    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn monomials(&self) -> &[Vec<u8>] {
        &self.monos
    }

    pub fn index_of(&self, mono: &[u8]) -> Option<usize> {
        self.index.get(mono).map(|&i| i as usize)
    }

    fn describe(&self) -> String {
        format!("{:?}", self.key)
    }

    fn derivative(self: &Arc<Self>, var: usize) -> Result<&Derivative> {
        if var >= self.nvars {
            return Err(JetError::VariableOutOfRange { var, nvars: self.nvars });
        }
        let g = self.group_of[var];
        if self.key[g].1 == 0 {
            return Err(JetError::OrderExhausted { var });
        }
        Ok(self.derivs[var].get_or_init(|| {
            let mut key = self.key.clone();
            key[g].1 -= 1;
            let target = Layout::get(&key);
            let map = target
                .monos
                .iter()
                .map(|m| {
                    let mut src = m.clone();
                    src[var] += 1;
                    (self.index[&src], src[var] as f64)
                })
                .collect();
            Derivative { target, map }
        }))
    }

    fn truncation_to(&self, target: &Layout) -> Arc<Vec<u32>> {
        if let Some(t) = self.truncations.read().unwrap().get(&target.key) {
            return t.clone();
        }
        let map: Arc<Vec<u32>> = Arc::new(target.monos.iter().map(|m| self.index[m]).collect());
        self.truncations
            .write()
            .unwrap()
            .insert(target.key.clone(), map.clone());
        map
    }
}

fn group_monomials(size: usize, cap: u8) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..size {
        out = out
            .into_iter()
            .flat_map(|m: Vec<u8>| {
                let used: u8 = m.iter().sum();
                (0..=cap - used).map(move |e| {
                    let mut m = m.clone();
                    m.push(e);
                    m
                })
            })
            .collect();
    }
    out
}

/// A fixed layout from which constants and coordinate jets are built.
#[derive(Clone, Debug)]
pub struct JetSpace {
    layout: Arc<Layout>,
}

impl JetSpace {
    /// Space with one group per `(variable count, order cap)` entry.
    pub fn new(groups: &[(usize, u8)]) -> Result<Self> {
        if groups.iter().all(|g| g.0 == 0) {
            return Err(JetError::NoActiveVariables);
        }
        for &(_, cap) in groups {
            if cap > MAX_ORDER {
                return Err(JetError::UnsupportedOrder { order: cap, max: MAX_ORDER });
            }
        }
        Ok(JetSpace { layout: Layout::get(groups) })
    }

    pub fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    pub fn nvars(&self) -> usize {
        self.layout.nvars
    }

    pub fn constant(&self, value: f64) -> Jet {
        let mut coef = vec![0.0; self.layout.len()];
        coef[0] = value;
        Jet { layout: self.layout.clone(), coef }
    }

    pub fn zero(&self) -> Jet {
        self.constant(0.0)
    }

    /// The coordinate function of variable `var`, expanded around `value`.
    pub fn variable(&self, var: usize, value: f64) -> Result<Jet> {
        let nvars = self.layout.nvars;
        if var >= nvars {
            return Err(JetError::VariableOutOfRange { var, nvars });
        }
        let mut jet = self.constant(value);
        let mut unit = vec![0u8; nvars];
        unit[var] = 1;
        if let Some(i) = self.layout.index_of(&unit) {
            jet.coef[i] = 1.0;
        }
        Ok(jet)
    }
}

/// Coordinate jets for `point`: the entries listed in `active` become
/// variables of a single group truncated at `order`; the rest are constants.
pub fn seed(point: &[f64], active: &[usize], order: u8) -> Result<Vec<Jet>> {
    if order == 0 || order > MAX_ORDER {
        return Err(JetError::UnsupportedOrder { order, max: MAX_ORDER });
    }
    if active.is_empty() {
        return Err(JetError::NoActiveVariables);
    }
    if let Some(&bad) = active.iter().find(|&&v| v >= point.len()) {
        return Err(JetError::VariableOutOfRange { var: bad, nvars: point.len() });
    }
    let space = JetSpace::new(&[(active.len(), order)])?;
    point
        .iter()
        .enumerate()
        .map(|(i, &p)| match active.iter().position(|&v| v == i) {
            Some(slot) => space.variable(slot, p),
            None => Ok(space.constant(p)),
        })
        .collect()
}

#[derive(Clone)]
pub struct Jet {
    layout: Arc<Layout>,
    coef: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("layout", &self.layout.key)
            .field("coef", &self.coef)
            .finish()
    }
}

impl Jet {
    pub fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    pub fn value(&self) -> f64 {
        self.coef[0]
    }

    /// Taylor-normalized coefficient table, ordered as [`Layout::monomials`].
    pub fn coefficients(&self) -> &[f64] {
        &self.coef
    }

    pub fn constant_like(&self, value: f64) -> Jet {
        let mut coef = vec![0.0; self.coef.len()];
        coef[0] = value;
        Jet { layout: self.layout.clone(), coef }
    }

    /// Raw partial derivative `∂^|m| f / ∂v^m` at the expansion point.
    pub fn extract(&self, multi_index: &[u8]) -> Result<f64> {
        let err = || JetError::IndexOutOfRange {
            index: multi_index.to_vec(),
            layout: self.layout.describe(),
        };
        if multi_index.len() != self.layout.nvars {
            return Err(err());
        }
        let i = self.layout.index_of(multi_index).ok_or_else(err)?;
        let fact: f64 = multi_index.iter().map(|&e| factorial(e)).product();
        Ok(self.coef[i] * fact)
    }

    /// First partial derivative value along `var`.
    pub fn partial(&self, var: usize) -> f64 {
        let mut m = vec![0u8; self.layout.nvars];
        m[var] = 1;
        self.layout.index_of(&m).map_or(0.0, |i| self.coef[i])
    }

    /// Exact derivative of the truncated series; the cap of `var`'s group drops by one.
    pub fn derivative(&self, var: usize) -> Result<Jet> {
        let d = self.layout.derivative(var)?;
        let coef = d.map.iter().map(|&(src, f)| f * self.coef[src as usize]).collect();
        Ok(Jet { layout: d.target.clone(), coef })
    }

    /// [`Jet::derivative`] for pipelines whose order budget was validated up front.
    ///
    /// Panics if the budget is exhausted.
    pub fn d(&self, var: usize) -> Jet {
        match self.derivative(var) {
            Ok(j) => j,
            Err(e) => panic!("{e}"),
        }
    }

    /// Drop all coefficients outside `target`.
    pub fn truncate(&self, target: &Arc<Layout>) -> Result<Jet> {
        if Arc::ptr_eq(target, &self.layout) || target.key == self.layout.key {
            return Ok(self.clone());
        }
        let compatible = target.key.len() == self.layout.key.len()
            && target
                .key
                .iter()
                .zip(&self.layout.key)
                .all(|(t, s)| t.0 == s.0 && t.1 <= s.1);
        if !compatible {
            return Err(self.mismatch(target));
        }
        let map = self.layout.truncation_to(target);
        let coef = map.iter().map(|&i| self.coef[i as usize]).collect();
        Ok(Jet { layout: target.clone(), coef })
    }

    /// Re-express in `target`, sending source variable `i` to target variable `var_map[i]`.
    /// Monomials that do not fit the target caps are dropped.
    pub fn embed(&self, target: &JetSpace, var_map: &[usize]) -> Result<Jet> {
        let tl = &target.layout;
        if var_map.len() != self.layout.nvars {
            return Err(self.mismatch(tl));
        }
        if let Some(&bad) = var_map.iter().find(|&&v| v >= tl.nvars) {
            return Err(JetError::VariableOutOfRange { var: bad, nvars: tl.nvars });
        }
        let mut coef = vec![0.0; tl.len()];
        let mut m = vec![0u8; tl.nvars];
        for (src, c) in self.layout.monos.iter().zip(&self.coef) {
            m.iter_mut().for_each(|e| *e = 0);
            for (e, &t) in src.iter().zip(var_map) {
                m[t] += e;
            }
            if let Some(i) = tl.index_of(&m) {
                coef[i] += c;
            }
        }
        Ok(Jet { layout: tl.clone(), coef })
    }

    fn mismatch(&self, other: &Layout) -> JetError {
        JetError::LayoutMismatch {
            left: self.layout.describe(),
            right: other.describe(),
        }
    }

    fn common(&self, other: &Jet) -> Result<Arc<Layout>> {
        if Arc::ptr_eq(&self.layout, &other.layout) || self.layout.key == other.layout.key {
            return Ok(self.layout.clone());
        }
        let (a, b) = (&self.layout.key, &other.layout.key);
        if a.len() != b.len() || a.iter().zip(b).any(|(x, y)| x.0 != y.0) {
            return Err(self.mismatch(&other.layout));
        }
        let key: LayoutKey = a.iter().zip(b).map(|(x, y)| (x.0, x.1.min(y.1))).collect();
        Ok(Layout::get(&key))
    }

    fn aligned(&self, other: &Jet) -> Result<(Jet, Jet)> {
        let l = self.common(other)?;
        Ok((self.truncate(&l)?, other.truncate(&l)?))
    }

    pub fn try_add(&self, other: &Jet) -> Result<Jet> {
        let (mut a, b) = self.aligned(other)?;
        a.coef.iter_mut().zip(&b.coef).for_each(|(x, y)| *x += y);
        Ok(a)
    }

    pub fn try_sub(&self, other: &Jet) -> Result<Jet> {
        let (mut a, b) = self.aligned(other)?;
        a.coef.iter_mut().zip(&b.coef).for_each(|(x, y)| *x -= y);
        Ok(a)
    }

    pub fn try_mul(&self, other: &Jet) -> Result<Jet> {
        let (a, b) = self.aligned(other)?;
        Ok(a.mul_same(&b))
    }

    pub fn try_div(&self, other: &Jet) -> Result<Jet> {
        let (a, b) = self.aligned(other)?;
        Ok(a.mul_same(&b.recip()?))
    }

    fn mul_same(&self, other: &Jet) -> Jet {
        let mut out = vec![0.0; self.coef.len()];
        let (a, b) = (&self.coef, &other.coef);
        for &(k, i, j) in &self.layout.products {
            out[k as usize] += a[i as usize] * b[j as usize];
        }
        Jet { layout: self.layout.clone(), coef: out }
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            layout: self.layout.clone(),
            coef: self.coef.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add_scalar(&self, s: f64) -> Jet {
        let mut j = self.clone();
        j.coef[0] += s;
        j
    }

    /// `f(self)` from the normalized derivatives `taylor[k] = f^(k)(v)/k!` at `v = self.value()`.
    pub fn compose(&self, taylor: &[f64]) -> Jet {
        let top = self.layout.max_degree.min(taylor.len().saturating_sub(1));
        let mut h = self.clone();
        h.coef[0] = 0.0;
        let mut acc = self.constant_like(taylor[top]);
        for k in (0..top).rev() {
            acc = acc.mul_same(&h);
            acc.coef[0] += taylor[k];
        }
        acc
    }

    fn series_len(&self) -> usize {
        self.layout.max_degree + 1
    }

    pub fn recip(&self) -> Result<Jet> {
        let v = self.value();
        if v == 0.0 || !v.is_finite() {
            return Err(JetError::Domain { op: "division", value: v });
        }
        let mut t = Vec::with_capacity(self.series_len());
        let mut p = 1.0 / v;
        for _ in 0..self.series_len() {
            t.push(p);
            p *= -1.0 / v;
        }
        Ok(self.compose(&t))
    }

    pub fn sqrt(&self) -> Result<Jet> {
        let v = self.value();
        if !(v > 0.0) {
            return Err(JetError::Domain { op: "sqrt", value: v });
        }
        Ok(self.compose(&binomial_series(v, 0.5, self.series_len())))
    }

    pub fn ln(&self) -> Result<Jet> {
        let v = self.value();
        if !(v > 0.0) {
            return Err(JetError::Domain { op: "ln", value: v });
        }
        let mut t = vec![v.ln()];
        let mut p = 1.0;
        for k in 1..self.series_len() {
            p /= v;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            t.push(sign * p / k as f64);
        }
        Ok(self.compose(&t))
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        let t: Vec<f64> = (0..self.series_len()).map(|k| e / factorial(k as u8)).collect();
        self.compose(&t)
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        let cycle = [s, c, -s, -c];
        let t: Vec<f64> = (0..self.series_len())
            .map(|k| cycle[k % 4] / factorial(k as u8))
            .collect();
        self.compose(&t)
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        let cycle = [c, -s, -c, s];
        let t: Vec<f64> = (0..self.series_len())
            .map(|k| cycle[k % 4] / factorial(k as u8))
            .collect();
        self.compose(&t)
    }

    pub fn tanh(&self) -> Jet {
        // tanh u = 1 - 2 / (exp(2u) + 1); the denominator is never zero
        let e = self.scale(2.0).exp().add_scalar(1.0);
        let inv = e.recip().expect("exp(2u) + 1 > 0");
        inv.scale(-2.0).add_scalar(1.0)
    }

    pub fn powi(&self, p: i32) -> Result<Jet> {
        if p < 0 {
            return self.powi(-p)?.recip().map_err(|_| JetError::Domain {
                op: "negative power",
                value: self.value(),
            });
        }
        let mut result = self.constant_like(1.0);
        let mut base = self.clone();
        let mut e = p as u32;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_same(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_same(&base);
            }
        }
        Ok(result)
    }

    /// `self^(num/den)`; non-integer exponents need a positive base.
    pub fn pow_rational(&self, num: i64, den: i64) -> Result<Jet> {
        if den == 1 || (den != 0 && num % den == 0) {
            return self.powi((num / den) as i32);
        }
        let v = self.value();
        if !(v > 0.0) {
            return Err(JetError::Domain { op: "fractional power", value: v });
        }
        let p = num as f64 / den as f64;
        Ok(self.compose(&binomial_series(v, p, self.series_len())))
    }
}

/// `(v + h)^p = Σ v^p C(p, k) (h/v)^k`.
fn binomial_series(v: f64, p: f64, len: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(len);
    let mut c = v.powf(p);
    for k in 0..len {
        t.push(c);
        c *= (p - k as f64) / ((k + 1) as f64 * v);
    }
    t
}

fn factorial(k: u8) -> f64 {
    (1..=k as u32).map(f64::from).product()
}

/// Arithmetic shared by plain scalars and jets.
pub trait Scalar:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
    + Add<f64, Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + Neg<Output = T>
        + Mul<f64, Output = T>
        + Add<f64, Output = T>
{
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                match self.$try(rhs) {
                    Ok(j) => j,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $trait<Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                (&self).$method(rhs)
            }
        }
        impl $trait<Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        self.add_scalar(rhs)
    }
}

/// Inverse of a square jet matrix by Gauss-Jordan elimination with partial pivoting on values.
pub fn inverse(m: &[Vec<Jet>]) -> Result<Vec<Vec<Jet>>> {
    let n = m.len();
    let mut a: Vec<Vec<Jet>> = m.to_vec();
    let one = m[0][0].constant_like(1.0);
    let zero = m[0][0].constant_like(0.0);
    let mut inv: Vec<Vec<Jet>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { one.clone() } else { zero.clone() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].value().abs().total_cmp(&a[j][col].value().abs()))
            .unwrap();
        let pv = a[pivot][col].value();
        if pv.abs() < 1e-300 || !pv.is_finite() {
            return Err(JetError::Singular { pivot: pv });
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let r = a[col][col].recip()?;
        for j in 0..n {
            a[col][j] = a[col][j].try_mul(&r)?;
            inv[col][j] = inv[col][j].try_mul(&r)?;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = a[i][col].clone();
            for j in 0..n {
                a[i][j] = a[i][j].try_sub(&f.try_mul(&a[col][j])?)?;
                inv[i][j] = inv[i][j].try_sub(&f.try_mul(&inv[col][j])?)?;
            }
        }
    }
    Ok(inv)
}

/// Determinant of a square jet matrix (elimination with partial pivoting on values).
pub fn determinant(m: &[Vec<Jet>]) -> Result<Jet> {
    let n = m.len();
    let mut a: Vec<Vec<Jet>> = m.to_vec();
    let mut det = m[0][0].constant_like(1.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].value().abs().total_cmp(&a[j][col].value().abs()))
            .unwrap();
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        let p = a[col][col].clone();
        if p.value() == 0.0 {
            return Ok(det.constant_like(0.0));
        }
        det = det.try_mul(&p)?;
        let r = p.recip()?;
        for i in col + 1..n {
            let f = a[i][col].try_mul(&r)?;
            for j in col..n {
                a[i][j] = a[i][j].try_sub(&f.try_mul(&a[col][j])?)?;
            }
        }
    }
    Ok(det)
}
