use std::path::PathBuf;

use rewire::config::{ConfigFile, Section};
use rewire::{Error, Result};

use crate::{CliError, Common};

/// Settings of one invocation: the `[run]` section of the config file with
/// command-line flags layered on top.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub n: Option<usize>,
    pub steps: Option<usize>,
    pub horizon: Option<f64>,
    pub out: PathBuf,
    pub motif_order: Option<usize>,
    pub suite: Option<String>,
    pub snapshots: Vec<f64>,
    pub initial: Option<PathBuf>,
    pub samples: u64,
    pub record_maps: bool,
}

const RUN_KEYS: [&str; 11] = [
    "seed",
    "n",
    "steps",
    "horizon",
    "out",
    "motif_order",
    "suite",
    "snapshots",
    "initial",
    "samples",
    "record_maps",
];

fn integer<T: std::str::FromStr>(s: &Section, key: &str) -> Result<Option<T>> {
    s.get(key)
        .map(|e| {
            e.value
                .parse::<T>()
                .map_err(|_| Error::parse(e.line, format!("`{key}`: `{}` is not a nonnegative integer", e.value)))
        })
        .transpose()
}

impl RunConfig {
    pub fn resolve(file: &ConfigFile, flags: &Common) -> std::result::Result<Self, CliError> {
        let mut cfg = RunConfig {
            out: PathBuf::from("."),
            samples: rewire::limits::DEFAULT_MONTE_CARLO_SAMPLES,
            ..RunConfig::default()
        };
        if let Some(s) = &file.run {
            if let Some((k, e)) = s
                .entries
                .iter()
                .find(|(k, _)| !RUN_KEYS.contains(&k.as_str()))
            {
                return Err(Error::parse(e.line, format!("unknown key `{k}` in [run]")).into());
            }
            cfg.seed = integer(s, "seed")?.unwrap_or(0);
            cfg.n = integer(s, "n")?;
            cfg.steps = integer(s, "steps")?;
            cfg.horizon = s.number("horizon")?;
            cfg.motif_order = integer(s, "motif_order")?;
            cfg.samples = integer(s, "samples")?.unwrap_or(cfg.samples);
            if let Some(e) = s.get("out") {
                cfg.out = PathBuf::from(&e.value);
            }
            if let Some(e) = s.get("initial") {
                cfg.initial = Some(PathBuf::from(&e.value));
            }
            cfg.suite = s.get("suite").map(|e| e.value.clone());
            if let Some(e) = s.get("snapshots") {
                cfg.snapshots = parse_grid(&e.value).map_err(|m| Error::parse(e.line, m))?;
            }
            if let Some(e) = s.get("record_maps") {
                cfg.record_maps = match e.value.as_str() {
                    "true" => true,
                    "false" => false,
                    other => {
                        return Err(Error::parse(e.line, format!("`record_maps`: `{other}` is not true or false")).into())
                    }
                };
            }
        }
        if let Some(seed) = flags.seed {
            cfg.seed = seed;
        }
        cfg.n = flags.n.or(cfg.n);
        cfg.steps = flags.steps.or(cfg.steps);
        cfg.horizon = flags.horizon.or(cfg.horizon);
        cfg.motif_order = flags.motif_order.or(cfg.motif_order);
        cfg.suite = flags.suite.clone().or(cfg.suite);
        if let Some(out) = &flags.out {
            cfg.out = out.clone();
        }
        if let Some(initial) = &flags.initial {
            cfg.initial = Some(initial.clone());
        }
        if let Some(grid) = &flags.snapshots {
            cfg.snapshots = parse_grid(grid).map_err(|m| CliError::Config(format!("--snapshots: {m}")))?;
        }
        if let Some(samples) = flags.samples {
            cfg.samples = samples;
        }
        cfg.record_maps |= flags.record_maps;
        if cfg.horizon.is_some_and(|h| !(h >= 0.0 && h.is_finite())) {
            return Err(CliError::Config("horizon must be finite and nonnegative".into()));
        }
        if cfg.samples == 0 {
            return Err(CliError::Config("samples must be positive".into()));
        }
        Ok(cfg)
    }

    pub fn require_n(&self) -> std::result::Result<usize, CliError> {
        match self.n {
            Some(n) if n > 0 => Ok(n),
            Some(_) => Err(CliError::Config("n must be positive".into())),
            None => Err(CliError::Config("missing `n` (set it in [run] or pass --n)".into())),
        }
    }
}

fn parse_grid(text: &str) -> std::result::Result<Vec<f64>, String> {
    let grid: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a time")))
        .collect::<std::result::Result<_, _>>()?;
    if grid.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
        return Err("snapshot times must be finite and nonnegative".into());
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err("snapshot times must increase".into());
    }
    Ok(grid)
}
