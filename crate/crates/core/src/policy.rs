//! Concrete move policies and the textual strategy syntax shared by the CLI
//! and experiment specs:
//!
//! * `random`: uniform random moves
//! * `micro:ID`: sample from a micro-strategy's weights
//! * `mcts[:micro=ID,iters=N,c=X,opp=ID]`: a fresh MCTS search every move

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::game::{GameState, Policy};
use crate::mcts::{MctsConfig, MctsPolicy};
use crate::micro::{self, MicroStrategyId};

/// Uniform random play.
#[derive(Debug, Clone, Copy, Default)]
pub struct RandomPolicy;

impl Policy for RandomPolicy {
    fn name(&self) -> String {
        "random".into()
    }

    fn choose(&mut self, state: &GameState, rng: &mut dyn RngCore) -> Result<usize> {
        if state.is_terminal() {
            return Err(Error::GameOver);
        }
        Ok(micro::pick_move(None, state, rng))
    }
}

/// Plays by sampling a micro-strategy's weights directly, without search.
#[derive(Debug, Clone, Copy)]
pub struct MicroPolicy(pub MicroStrategyId);

impl Policy for MicroPolicy {
    fn name(&self) -> String {
        format!("micro:{}", self.0)
    }

    fn choose(&mut self, state: &GameState, rng: &mut dyn RngCore) -> Result<usize> {
        if state.is_terminal() {
            return Err(Error::GameOver);
        }
        Ok(micro::pick_move(Some(&self.0), state, rng))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StrategySpec {
    Random,
    Micro(MicroStrategyId),
    Mcts(MctsConfig),
}

impl StrategySpec {
    pub fn build(&self) -> Box<dyn Policy + Send> {
        match self {
            StrategySpec::Random => Box::new(RandomPolicy),
            StrategySpec::Micro(id) => Box::new(MicroPolicy(*id)),
            StrategySpec::Mcts(cfg) => Box::new(MctsPolicy::new(cfg.clone())),
        }
    }
}

impl fmt::Display for StrategySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategySpec::Random => f.write_str("random"),
            StrategySpec::Micro(id) => write!(f, "micro:{id}"),
            StrategySpec::Mcts(cfg) => {
                write!(f, "mcts:iters={},c={}", cfg.iterations, cfg.c)?;
                if let Some(id) = &cfg.micro {
                    write!(f, ",micro={id}")?;
                }
                if let Some(id) = &cfg.rollout_opponent {
                    write!(f, ",opp={id}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for StrategySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "random" {
            return Ok(StrategySpec::Random);
        }
        if let Some(id) = s.strip_prefix("micro:") {
            return Ok(StrategySpec::Micro(id.parse()?));
        }
        let opts = match s.strip_prefix("mcts") {
            Some("") => "",
            Some(rest) => rest
                .strip_prefix(':')
                .ok_or_else(|| Error::Parse(format!("unknown strategy `{s}`")))?,
            None => return Err(Error::Parse(format!("unknown strategy `{s}`"))),
        };
        let mut cfg = MctsConfig::default();
        for opt in opts.split(',').filter(|o| !o.is_empty()) {
            let (key, value) = opt
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value in `{opt}`")))?;
            let bad = |e: &dyn fmt::Display| Error::Parse(format!("`{opt}`: {e}"));
            match key {
                "micro" => cfg.micro = Some(value.parse()?),
                "opp" => cfg.rollout_opponent = Some(value.parse()?),
                "iters" => cfg.iterations = value.parse().map_err(|e| bad(&e))?,
                "c" => cfg.c = value.parse().map_err(|e| bad(&e))?,
                _ => return Err(Error::Parse(format!("unknown mcts option `{key}`"))),
            }
        }
        cfg.validate()?;
        Ok(StrategySpec::Mcts(cfg))
    }
}

impl Serialize for StrategySpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for StrategySpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_strategy_strings() {
        assert_eq!("random".parse::<StrategySpec>().unwrap(), StrategySpec::Random);
        assert_eq!(
            "micro:degree:high".parse::<StrategySpec>().unwrap(),
            StrategySpec::Micro("degree:high".parse().unwrap())
        );
        assert_eq!(
            "mcts".parse::<StrategySpec>().unwrap(),
            StrategySpec::Mcts(MctsConfig::default())
        );
        let StrategySpec::Mcts(cfg) = "mcts:micro=winset_count:high:budget=16,iters=50,c=0.5"
            .parse::<StrategySpec>()
            .unwrap()
        else {
            panic!("expected mcts");
        };
        assert_eq!(cfg.iterations, 50);
        assert_eq!(cfg.c, 0.5);
        assert_eq!(cfg.micro.unwrap().to_string(), "winset_count:high:budget=16");
    }

    #[test]
    fn rejects_bad_strategies() {
        for bad in ["mcts:iters=0", "mcts:foo=1", "mctsx", "micro:nope", "greedy", "mcts:c=-1"] {
            assert!(bad.parse::<StrategySpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_parses_back() {
        for s in ["random", "micro:dist_opp:low", "mcts:micro=degree:low,iters=7,c=0.25"] {
            let spec: StrategySpec = s.parse().unwrap();
            assert_eq!(spec.to_string().parse::<StrategySpec>().unwrap(), spec);
        }
    }
}
