use serde::{Deserialize, Serialize};

use crate::classical::ClassicalStrategy;
use crate::error::{Error, Result};
use crate::game::StrategyMatrix;
use crate::hyperbit::{GammaVector, HyperbitStrategy};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    #[default]
    Unlimited,
    Classical,
    Hyperbit,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Unlimited => "unlimited",
            Regime::Classical => "classical",
            Regime::Hyperbit => "hyperbit",
        })
    }
}

/// Solver bookkeeping attached to a hyperbit solution.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbitDetails {
    pub strategy: HyperbitStrategy,
    pub seed: u64,
    pub restarts: usize,
    /// Every default vector whose branch value is within the tie tolerance
    /// of the optimum (the winner included).
    pub near_optimal_gammas: Vec<GammaVector>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RegimeParams {
    Unlimited,
    Classical(ClassicalStrategy),
    Hyperbit(Box<HyperbitDetails>),
}

/// Optimal strategy in one communication regime together with its value.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategySolution {
    pub regime: Regime,
    pub value: f64,
    pub strategy: StrategyMatrix,
    pub params: RegimeParams,
}

impl StrategySolution {
    pub fn classical(&self) -> Option<&ClassicalStrategy> {
        match &self.params {
            RegimeParams::Classical(c) => Some(c),
            _ => None,
        }
    }

    pub fn hyperbit(&self) -> Option<&HyperbitDetails> {
        match &self.params {
            RegimeParams::Hyperbit(h) => Some(h),
            _ => None,
        }
    }

    pub fn to_json(&self) -> SolutionJson {
        let mut out = SolutionJson {
            regime: self.regime,
            value: self.value,
            s: self.strategy.to_rows(),
            ..SolutionJson::default()
        };
        match &self.params {
            RegimeParams::Unlimited => {}
            RegimeParams::Classical(c) => {
                out.p = Some(c.p.iter().map(|&b| u8::from(b)).collect());
                out.alpha = Some(c.alpha.clone());
                out.beta = Some(c.beta.clone());
            }
            RegimeParams::Hyperbit(h) => {
                out.gamma = Some(h.strategy.gamma.values().to_vec());
                out.x = Some(h.strategy.x.clone());
                out.y = Some(h.strategy.y.clone());
                out.d = Some(h.strategy.d);
                out.seed = Some(h.seed);
                out.restarts = Some(h.restarts);
                out.near_optimal_gammas =
                    Some(h.near_optimal_gammas.iter().map(|g| g.values().to_vec()).collect());
                if !h.warnings.is_empty() {
                    out.warnings = Some(h.warnings.clone());
                }
            }
        }
        out
    }
}

/// Flat JSON form of a [`StrategySolution`]; regime-specific fields are
/// present only for their regime.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionJson {
    pub regime: Regime,
    pub value: f64,
    #[serde(rename = "S")]
    pub s: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub near_optimal_gammas: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warnings: Option<Vec<String>>,
}

impl SolutionJson {
    /// Rebuilds the hyperbit strategy carried by a hyperbit solution file.
    pub fn hyperbit_strategy(&self) -> Result<HyperbitStrategy> {
        if self.regime != Regime::Hyperbit {
            return Err(Error::Schema(format!("expected a hyperbit solution, got {}", self.regime)));
        }
        let missing = |f: &str| Error::Schema(format!("hyperbit solution is missing {f:?}"));
        let gamma = self.gamma.clone().ok_or_else(|| missing("gamma"))?;
        let x = self.x.clone().ok_or_else(|| missing("x"))?;
        let y = self.y.clone().ok_or_else(|| missing("y"))?;
        let d = self.d.ok_or_else(|| missing("d"))?;
        HyperbitStrategy::new(GammaVector::from_values(gamma)?, x, y, d)
    }

    pub fn strategy_matrix(&self) -> Result<StrategyMatrix> {
        StrategyMatrix::new(self.s.clone())
    }
}
