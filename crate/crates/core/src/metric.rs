//! Randers metric specifications `F = α + β` given by coefficient expressions
//! `a_ij(x)` and `b_i(x)` over a coordinate box, plus their TOML file form.
//!
//! ```toml
//! name = "funk-2"
//! dim = 2
//! a = [["...", "..."], ["...", "..."]]
//! b = ["...", "..."]
//! domain = [[-0.55, 0.55], [-0.55, 0.55]]
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{parse_with_dim, Expression};
use crate::jets::{Jet, JetSpace};

#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpec {
    pub name: String,
    dim: usize,
    a: Vec<Vec<Expression>>,
    b: Vec<Expression>,
    domain: Vec<(f64, f64)>,
}

/// On-disk schema of a metric specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub a: Vec<Vec<String>>,
    pub b: Vec<String>,
    pub domain: Vec<[f64; 2]>,
}

impl MetricSpec {
    pub fn new(
        name: impl Into<String>,
        a: Vec<Vec<Expression>>,
        b: Vec<Expression>,
        domain: Vec<(f64, f64)>,
    ) -> Result<Self> {
        let dim = b.len();
        if dim == 0 {
            return Err(Error::Spec("dimension must be positive".into()));
        }
        if a.len() != dim || a.iter().any(|row| row.len() != dim) {
            return Err(Error::Spec(format!("`a` must be a {dim}x{dim} array")));
        }
        if domain.len() != dim {
            return Err(Error::Spec(format!("`domain` must have {dim} intervals")));
        }
        if let Some((i, _)) = domain.iter().enumerate().find(|(_, (lo, hi))| !(lo < hi)) {
            return Err(Error::Spec(format!("domain interval {} is empty", i + 1)));
        }
        for i in 0..dim {
            for j in 0..i {
                if a[i][j] != a[j][i] {
                    return Err(Error::Spec(format!(
                        "`a` is not symmetric: a[{}][{}] = `{}` but a[{}][{}] = `{}`",
                        i + 1,
                        j + 1,
                        a[i][j],
                        j + 1,
                        i + 1,
                        a[j][i]
                    )));
                }
            }
        }
        let too_wide = a.iter().flatten().chain(&b).find(|e| e.arity() > dim);
        if let Some(e) = too_wide {
            return Err(Error::Spec(format!("expression `{e}` uses a coordinate beyond x{dim}")));
        }
        Ok(MetricSpec { name: name.into(), dim, a, b, domain })
    }

    /// Build from expression source strings.
    pub fn from_sources(name: &str, a: &[Vec<String>], b: &[String], domain: &[(f64, f64)]) -> Result<Self> {
        let dim = b.len();
        let parse = |what: String, src: &str| {
            parse_with_dim(src, dim).map_err(|source| Error::Expression { location: what, source })
        };
        let a = a
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, s)| parse(format!("a[{}][{}]", i + 1, j + 1), s))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let b = b
            .iter()
            .enumerate()
            .map(|(i, s)| parse(format!("b[{}]", i + 1), s))
            .collect::<Result<Vec<_>>>()?;
        MetricSpec::new(name, a, b, domain.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn a_expr(&self) -> &[Vec<Expression>] {
        &self.a
    }

    pub fn b_expr(&self) -> &[Expression] {
        &self.b
    }

    pub fn in_domain(&self, x: &[f64]) -> bool {
        x.len() == self.dim && x.iter().zip(&self.domain).all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    pub fn a_at(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.a
            .iter()
            .map(|row| row.iter().map(|e| e.eval(x).map_err(Error::from)).collect())
            .collect()
    }

    pub fn b_at(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.b.iter().map(|e| e.eval(x).map_err(Error::from)).collect()
    }

    /// Jets of `a_ij` and `b_i` at `x` in a single-group space of the given order.
    pub fn coefficient_jets(&self, x: &[f64], order: u8) -> Result<(Vec<Vec<Jet>>, Vec<Jet>)> {
        let space = JetSpace::new(&[(self.dim, order)])?;
        let coords: Vec<Jet> = x
            .iter()
            .enumerate()
            .map(|(i, &v)| space.variable(i, v))
            .collect::<std::result::Result<_, _>>()?;
        let a = self
            .a
            .iter()
            .map(|row| row.iter().map(|e| e.eval_jet(&coords).map_err(Error::from)).collect())
            .collect::<Result<Vec<Vec<Jet>>>>()?;
        let b = self
            .b
            .iter()
            .map(|e| e.eval_jet(&coords).map_err(Error::from))
            .collect::<Result<Vec<Jet>>>()?;
        Ok((a, b))
    }

    pub fn to_file(&self) -> MetricSpecFile {
        MetricSpecFile {
            name: Some(self.name.clone()),
            dim: self.dim,
            a: self.a.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect(),
            b: self.b.iter().map(|e| e.to_string()).collect(),
            domain: self.domain.iter().map(|&(lo, hi)| [lo, hi]).collect(),
        }
    }

    pub fn from_file(file: &MetricSpecFile) -> Result<Self> {
        if file.b.len() != file.dim {
            return Err(Error::Spec(format!(
                "`dim` is {} but `b` has {} entries",
                file.dim,
                file.b.len()
            )));
        }
        let domain: Vec<(f64, f64)> = file.domain.iter().map(|d| (d[0], d[1])).collect();
        MetricSpec::from_sources(file.name.as_deref().unwrap_or("unnamed"), &file.a, &file.b, &domain)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: MetricSpecFile = toml::from_str(text).map_err(|e| Error::SpecFile(spec_file_message(text, &e)))?;
        MetricSpec::from_file(&file)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(&self.to_file()).expect("metric spec files always serialize")
    }
}

fn spec_file_message(text: &str, e: &toml::de::Error) -> String {
    match e.span() {
        Some(span) => {
            let line = text[..span.start].matches('\n').count() + 1;
            format!("line {line}: {}", e.message())
        }
        None => e.message().to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FLAT: &str = r#"
name = "flat"
dim = 2
a = [["1", "0"], ["0", "1"]]
b = ["0.5", "0"]
domain = [[-1.0, 1.0], [-1.0, 1.0]]
"#;

    #[test]
    fn parses_spec_file() {
        let spec = MetricSpec::from_toml_str(FLAT).unwrap();
        assert_eq!(spec.dim(), 2);
        assert_eq!(spec.b_at(&[0.0, 0.0]).unwrap(), vec![0.5, 0.0]);
    }

    #[test]
    fn toml_round_trip() {
        let spec = MetricSpec::from_toml_str(FLAT).unwrap();
        let again = MetricSpec::from_toml_str(&spec.to_toml_string()).unwrap();
        assert_eq!(spec, again);
    }

    #[test]
    fn asymmetric_a_rejected() {
        let text = FLAT.replace(r#"a = [["1", "0"], ["0", "1"]]"#, r#"a = [["1", "x1"], ["0", "1"]]"#);
        let err = MetricSpec::from_toml_str(&text).unwrap_err();
        assert!(err.to_string().contains("not symmetric"), "{err}");
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let text = FLAT.replace(r#"b = ["0.5", "0"]"#, r#"b = ["0.5"]"#);
        assert!(MetricSpec::from_toml_str(&text).is_err());
        let text = FLAT.replace(r#"b = ["0.5", "0"]"#, r#"b = ["0.5", "x3"]"#);
        assert!(matches!(MetricSpec::from_toml_str(&text), Err(Error::Expression { .. })));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let text = FLAT.replace("dim = 2", "dim = = 2");
        let err = MetricSpec::from_toml_str(&text).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }
}
