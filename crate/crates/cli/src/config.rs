//! Flat `key = value` run-configuration files for the simulate command.
//!
//! Recognized keys: grid.n, grid.L, nu, dt, t_end, init.kind, init.seed,
//! init.mode_cap, init.amplitude, init.path, snapshot_every, out.dir.
//! Lines starting with `#` are comments; unknown keys are rejected with
//! the offending key named.

use nsreg_core::error::{Error, Result};
use nsreg_core::solver::{InitialCondition, SolverConfig};
use nsreg_core::Grid3;
use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::PathBuf;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub solver: SolverConfig,
    pub out_dir: PathBuf,
}

fn parse_kv(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::invalid(format!(
                "config line {}: expected 'key = value', got '{line}'",
                lineno + 1
            ))
        })?;
        let key = key.trim().to_string();
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(Error::invalid(format!(
                "config line {}: duplicate key '{key}'",
                lineno + 1
            )));
        }
    }
    Ok(map)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = parse_kv(text)?;
        let mut take = |key: &str| map.remove(key);

        let require = |key: &str, v: Option<String>| {
            v.ok_or_else(|| Error::invalid(format!("config is missing required key '{key}'")))
        };
        let parse_f64 = |key: &str, v: String| {
            v.parse::<f64>().map_err(|_| {
                Error::invalid(format!("config key '{key}': '{v}' is not a number"))
            })
        };
        let parse_usize = |key: &str, v: String| {
            v.parse::<usize>().map_err(|_| {
                Error::invalid(format!("config key '{key}': '{v}' is not an integer"))
            })
        };
        let parse_u64 = |key: &str, v: String| {
            v.parse::<u64>().map_err(|_| {
                Error::invalid(format!("config key '{key}': '{v}' is not an integer"))
            })
        };

        let n = parse_usize("grid.n", require("grid.n", take("grid.n"))?)?;
        let l = match take("grid.L") {
            Some(v) => parse_f64("grid.L", v)?,
            None => TAU,
        };
        let grid = Grid3::new([n, n, n], [l, l, l])?;

        let nu = parse_f64("nu", require("nu", take("nu"))?)?;
        let dt = parse_f64("dt", require("dt", take("dt"))?)?;
        let t_end = parse_f64("t_end", require("t_end", take("t_end"))?)?;
        let snapshot_every =
            parse_usize("snapshot_every", require("snapshot_every", take("snapshot_every"))?)?;
        let out_dir = PathBuf::from(require("out.dir", take("out.dir"))?);

        let kind = require("init.kind", take("init.kind"))?;
        let init = match kind.as_str() {
            "taylor" => InitialCondition::Taylor,
            "random" => InitialCondition::Random {
                seed: parse_u64("init.seed", require("init.seed", take("init.seed"))?)?,
                mode_cap: parse_usize(
                    "init.mode_cap",
                    require("init.mode_cap", take("init.mode_cap"))?,
                )?,
                amplitude: parse_f64(
                    "init.amplitude",
                    require("init.amplitude", take("init.amplitude"))?,
                )?,
            },
            "file" => InitialCondition::File(PathBuf::from(require(
                "init.path",
                take("init.path"),
            )?)),
            other => {
                return Err(Error::invalid(format!(
                    "config key 'init.kind': unknown kind '{other}' (taylor, random or file)"
                )))
            }
        };

        if let Some(unknown) = map.keys().next() {
            return Err(Error::invalid(format!(
                "config contains unknown key '{unknown}'"
            )));
        }

        let solver = SolverConfig {
            grid,
            nu,
            dt,
            t_end,
            init,
            snapshot_every,
        };
        solver.validate()?;
        Ok(RunConfig { solver, out_dir })
    }
}
