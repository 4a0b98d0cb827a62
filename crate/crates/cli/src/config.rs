//! Parameter resolution: command-line flag, then config file, then the
//! default derived from the mode.

use std::path::Path;

use dicut_core::local::RuleKind;
use dicut_core::params::{Mode, ParameterSet};
use serde::Deserialize;

use crate::error::CliError;

pub const DEFAULT_EPSILON: f64 = 0.25;
pub const DEFAULT_BETA: f64 = 0.15;
pub const DEFAULT_D: u64 = 32;
pub const DEFAULT_ELL: usize = 2;
pub const DEFAULT_C: u32 = 8;

/// Every key is optional; unset keys fall through to the next source.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub epsilon: Option<f64>,
    pub mode: Option<String>,
    pub beta: Option<f64>,
    pub d: Option<u64>,
    pub ell: Option<usize>,
    pub c: Option<u32>,
    pub rule: Option<String>,
    pub priority_bits: Option<u32>,
    pub small_m_threshold: Option<f64>,
    pub vprime_cap: Option<f64>,
    pub eprime_cap: Option<f64>,
    pub storedeg_threshold: Option<f64>,
    pub estdeg_nonzero_cap: Option<f64>,
    pub dense_threshold: Option<f64>,
    pub degree_cap: Option<u64>,
    pub caps_enabled: Option<bool>,
    pub coreset_size: Option<usize>,
    pub exact_cap: Option<usize>,
    pub localsearch_restarts: Option<usize>,
    pub estimator: Option<String>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident, $($field:ident),* $(,)?) => {
        $(if $src.$field.is_some() { $dst.$field = $src.$field.clone(); })*
    };
}

impl Settings {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {}", e.message())))
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Keys set in `top` win over keys set in `self`.
    pub fn overlay(mut self, top: &Settings) -> Self {
        let s = &mut self;
        overlay!(
            s, top, epsilon, mode, beta, d, ell, c, rule, priority_bits, small_m_threshold,
            vprime_cap, eprime_cap, storedeg_threshold, estdeg_nonzero_cap, dense_threshold,
            degree_cap, caps_enabled, coreset_size, exact_cap, localsearch_restarts, estimator,
            trials, seed,
        );
        self
    }

    pub fn mode(&self) -> Result<Mode, CliError> {
        match self.mode.as_deref().unwrap_or("practical") {
            "practical" => Ok(Mode::Practical),
            "paper" | "paper-faithful" => Ok(Mode::PaperFaithful),
            other => Err(CliError::Usage(format!("unknown mode {other:?}"))),
        }
    }

    pub fn to_params(&self) -> Result<ParameterSet, CliError> {
        let eps = self.epsilon.unwrap_or(DEFAULT_EPSILON);
        let mut p = match self.mode()? {
            Mode::PaperFaithful => {
                let fixed = [
                    ("beta", self.beta.is_some()),
                    ("d", self.d.is_some()),
                    ("ell", self.ell.is_some()),
                    ("c", self.c.is_some()),
                ];
                if let Some((name, _)) = fixed.iter().find(|f| f.1) {
                    return Err(CliError::Usage(format!(
                        "{name} is derived from epsilon in paper mode"
                    )));
                }
                ParameterSet::paper(eps)?
            }
            Mode::Practical => ParameterSet::practical(
                eps,
                self.beta.unwrap_or(DEFAULT_BETA),
                self.d.unwrap_or(DEFAULT_D),
                self.ell.unwrap_or(DEFAULT_ELL),
                self.c.unwrap_or(DEFAULT_C),
            )?,
        };
        if let Some(rule) = &self.rule {
            p.rule = match rule.as_str() {
                "double-greedy" | "priority-double-greedy" => RuleKind::PriorityDoubleGreedy,
                "oblivious-bias" => RuleKind::ObliviousBias,
                other => return Err(CliError::Usage(format!("unknown rule {other:?}"))),
            };
        }
        if let Some(b) = self.priority_bits {
            p.priority_bits = b;
        }
        p.small_m_threshold = self.small_m_threshold;
        p.vprime_cap = self.vprime_cap;
        p.eprime_cap = self.eprime_cap;
        p.storedeg_threshold = self.storedeg_threshold;
        p.estdeg_nonzero_cap = self.estdeg_nonzero_cap;
        p.dense_threshold = self.dense_threshold;
        p.degree_cap = self.degree_cap;
        p.coreset_size = self.coreset_size;
        if let Some(v) = self.caps_enabled {
            p.caps_enabled = v;
        }
        if let Some(v) = self.exact_cap {
            p.exact_cap = v;
        }
        if let Some(v) = self.localsearch_restarts {
            p.localsearch_restarts = v;
        }
        p.validate()?;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_beats_file_beats_default() {
        let file = Settings::from_toml("beta = 0.3\nd = 7\n").unwrap();
        let flags = Settings {
            beta: Some(0.1),
            ..Default::default()
        };
        let p = file.overlay(&flags).to_params().unwrap();
        assert_eq!(p.beta, 0.1);
        assert_eq!(p.d, 7);
        assert_eq!(p.ell, DEFAULT_ELL);
    }

    #[test]
    fn unknown_keys_and_modes_are_usage_errors() {
        assert!(matches!(Settings::from_toml("bogus = 1"), Err(CliError::Usage(_))));
        let s = Settings {
            mode: Some("fast".into()),
            ..Default::default()
        };
        assert!(matches!(s.to_params(), Err(CliError::Usage(_))));
    }

    #[test]
    fn paper_mode_rejects_practical_knobs() {
        let s = Settings {
            mode: Some("paper".into()),
            d: Some(3),
            ..Default::default()
        };
        assert!(matches!(s.to_params(), Err(CliError::Usage(_))));
        let s = Settings {
            mode: Some("paper".into()),
            vprime_cap: Some(10.0),
            ..Default::default()
        };
        assert!(s.to_params().is_err());
        let s = Settings {
            mode: Some("paper".into()),
            ..Default::default()
        };
        assert_eq!(s.to_params().unwrap().d, 5120);
    }
}
