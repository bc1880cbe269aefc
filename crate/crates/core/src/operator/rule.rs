use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed-form generator of scalar shift weights `w_1, w_2, …`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightRule {
    /// `w_j = c`.
    Constant { c: f64 },
    /// `w_j² = (j+1)/j`.
    Dirichlet,
    /// `w_j² = 1 + r^j` with `0 < r < 1`.
    GeometricConcave { r: f64 },
    /// Explicit `w_1..w_k`, then `tail` forever.
    Table { values: Vec<f64>, tail: f64 },
}

impl WeightRule {
    pub const NAMES: [&'static str; 4] = ["constant", "dirichlet", "geometric_concave", "table"];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Constant { .. } => "constant",
            Self::Dirichlet => "dirichlet",
            Self::GeometricConcave { .. } => "geometric_concave",
            Self::Table { .. } => "table",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        match self {
            Self::Constant { c } if !positive(*c) => {
                Err(Error::InvalidRule(format!("constant weight must be positive, got {c}")))
            }
            Self::GeometricConcave { r } if !(r.is_finite() && *r > 0.0 && *r < 1.0) => {
                Err(Error::InvalidRule(format!("geometric_concave needs 0 < r < 1, got {r}")))
            }
            Self::Table { values, tail } => {
                if let Some(bad) = values.iter().chain(std::iter::once(tail)).find(|&&w| !positive(w)) {
                    Err(Error::InvalidRule(format!("table weights must be positive, got {bad}")))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// `w_j²` for `j ≥ 1`.
    pub fn weight_sq(&self, j: usize) -> f64 {
        assert!(j >= 1, "weights are indexed from 1");
        match self {
            Self::Constant { c } => c * c,
            Self::Dirichlet => (j as f64 + 1.0) / j as f64,
            Self::GeometricConcave { r } => 1.0 + r.powi(j as i32),
            Self::Table { values, tail } => {
                let w = values.get(j - 1).copied().unwrap_or(*tail);
                w * w
            }
        }
    }

    /// `w_j` for `j ≥ 1`.
    pub fn weight(&self, j: usize) -> f64 {
        match self {
            Self::Constant { c } => *c,
            Self::Table { values, tail } => values.get(j - 1).copied().unwrap_or(*tail),
            _ => self.weight_sq(j).sqrt(),
        }
    }

    /// `Π_{j=from+1}^{from+len} w_j²`, the diagonal entry of `T*^len T^len`
    /// at coordinate `from`.
    pub fn weight_sq_product(&self, from: usize, len: usize) -> f64 {
        (from + 1..=from + len).map(|j| self.weight_sq(j)).product()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_formulas() {
        assert_eq!(WeightRule::Constant { c: 2.0 }.weight(7), 2.0);
        assert!((WeightRule::Dirichlet.weight_sq(1) - 2.0).abs() < 1e-15);
        assert!((WeightRule::Dirichlet.weight_sq(2) - 1.5).abs() < 1e-15);
        let g = WeightRule::GeometricConcave { r: 0.5 };
        assert_eq!(g.weight_sq(1), 1.5);
        assert_eq!(g.weight_sq(2), 1.25);
        let t = WeightRule::Table { values: vec![3.0, 2.0], tail: 1.0 };
        assert_eq!((t.weight(1), t.weight(2), t.weight(3), t.weight(40)), (3.0, 2.0, 1.0, 1.0));
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(WeightRule::GeometricConcave { r: 1.0 }.validate().is_err());
        assert!(WeightRule::GeometricConcave { r: 0.0 }.validate().is_err());
        assert!(WeightRule::Constant { c: 0.0 }.validate().is_err());
        assert!(WeightRule::Table { values: vec![1.0, -1.0], tail: 1.0 }.validate().is_err());
        assert!(WeightRule::Table { values: vec![], tail: f64::NAN }.validate().is_err());
        assert!(WeightRule::Dirichlet.validate().is_ok());
    }

    #[test]
    fn serde_uses_name_tag() {
        let j = serde_json::to_string(&WeightRule::GeometricConcave { r: 0.5 }).unwrap();
        assert_eq!(j, r#"{"name":"geometric_concave","r":0.5}"#);
        let back: WeightRule = serde_json::from_str(&j).unwrap();
        assert_eq!(back, WeightRule::GeometricConcave { r: 0.5 });
    }
}
