//! JSON run configuration for `verify` and config-driven sweeps.

use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::family::FamilySpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum StrategyFlag {
    Oracle,
    #[default]
    Fast,
}

impl From<StrategyFlag> for fpsums_core::Strategy {
    fn from(f: StrategyFlag) -> Self {
        match f {
            StrategyFlag::Oracle => fpsums_core::Strategy::Oracle,
            StrategyFlag::Fast => fpsums_core::Strategy::Fast,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    #[serde(default)]
    pub determinism: bool,
    #[serde(default)]
    pub strategy: StrategyFlag,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            determinism: true,
            strategy: StrategyFlag::Fast,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub primes: Vec<u64>,
    pub families: Vec<String>,
    pub trials: u32,
    pub seed: u64,
    #[serde(default)]
    pub flags: Flags,
}

impl Config {
    /// The built-in verify configuration: small primes, random families of
    /// several sizes, and one interval family.
    ///
    /// The random families draw from the nonzero elements. Every exact
    /// identity in the suite holds on arbitrary sets, but the Cauchy-link
    /// inequality comes from multiplicative character sums and is only
    /// guaranteed away from the zero class; sets containing 0 (or tiny sets
    /// whose difference mass sits at 0) can violate it. See the corner
    /// counterexample test in the checks module.
    pub fn default_verify() -> Config {
        Config {
            primes: vec![11, 31, 101],
            families: vec![
                "random-nz:4".into(),
                "random-nz:6".into(),
                "random-nz:8".into(),
                "interval:1..6".into(),
            ],
            trials: 25,
            seed: 20240817,
            flags: Flags::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Config> {
        let cfg: Config = serde_json::from_str(text)
            .map_err(|e| HarnessError::Config(format!("bad config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Config> {
        Config::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.primes.is_empty() {
            return Err(HarnessError::Config("empty prime list".into()));
        }
        if self.families.is_empty() {
            return Err(HarnessError::Config("empty family list".into()));
        }
        if self.trials == 0 {
            return Err(HarnessError::Config("trials must be >= 1".into()));
        }
        for f in &self.families {
            FamilySpec::parse(f)?;
        }
        Ok(())
    }

    pub fn parsed_families(&self) -> Vec<FamilySpec> {
        self.families
            .iter()
            .map(|f| FamilySpec::parse(f).expect("validated"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_verify_config_is_valid() {
        Config::default_verify().validate().unwrap();
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = r#"{"primes":[11],"families":["random:4"],"trials":1,"seed":1,"surprise":2}"#;
        assert!(matches!(
            Config::from_json(text),
            Err(HarnessError::Config(_))
        ));
    }

    #[test]
    fn empty_families_rejected() {
        let text = r#"{"primes":[11],"families":[],"trials":1,"seed":1}"#;
        assert!(matches!(
            Config::from_json(text),
            Err(HarnessError::Config(_))
        ));
    }

    #[test]
    fn flags_default_and_parse() {
        let text = r#"{"primes":[11],"families":["random:4"],"trials":1,"seed":1,
                       "flags":{"determinism":false,"strategy":"oracle"}}"#;
        let cfg = Config::from_json(text).unwrap();
        assert!(!cfg.flags.determinism);
        assert_eq!(cfg.flags.strategy, StrategyFlag::Oracle);
        let text2 = r#"{"primes":[11],"families":["random:4"],"trials":1,"seed":1}"#;
        let cfg2 = Config::from_json(text2).unwrap();
        assert!(cfg2.flags.determinism);
        assert_eq!(cfg2.flags.strategy, StrategyFlag::Fast);
    }
}
