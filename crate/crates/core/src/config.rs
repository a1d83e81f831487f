//! Key–value configuration files.
//!
//! ```text
//! # global rewiring atoms, one section per atom
//! [global.1]
//! lambda = 1.0
//! p0 = 0.1
//! p1 = 0.9
//!
//! [local]
//! c0 = 1
//! c1 = 2
//!
//! [kernel]
//! type = er          # er | mixed | reversible
//! p0 = 0.2
//! p1 = 0.5
//! ```
//!
//! `mixed` kernels take `a0 b0 a1 b1`; `reversible` kernels take `alpha`,
//! `beta` and an optional `alpha_prime` (defaulting to `alpha`). A `[run]`
//! section is accepted and kept verbatim for the command-line driver.
//! Unknown sections or keys, duplicate keys and malformed numbers are
//! errors reported with their line number.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::measures::{GlobalAtom, IidEdgeLimit, KernelSpec, RewiringMeasureSpec};

/// A value together with the line it was read from.
#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub value: String,
    pub line: usize,
}

/// One `[name]` block.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Section {
    pub line: usize,
    pub entries: BTreeMap<String, Entry>,
}

impl Section {
    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    /// Parses `key` as a decimal number; `Ok(None)` when absent.
    pub fn number(&self, key: &str) -> Result<Option<f64>> {
        self.entries
            .get(key)
            .map(|e| {
                e.value
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::parse(e.line, format!("`{key}`: `{}` is not a number", e.value)))
            })
            .transpose()
    }

    pub fn required_number(&self, key: &str, section: &str) -> Result<f64> {
        self.number(key)?
            .ok_or_else(|| Error::parse(self.line, format!("[{section}] is missing `{key}`")))
    }

    fn reject_unknown(&self, section: &str, allowed: &[&str]) -> Result<()> {
        match self.entries.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            Some((k, e)) => Err(Error::parse(e.line, format!("unknown key `{k}` in [{section}]"))),
            None => Ok(()),
        }
    }
}

/// A parsed configuration file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    /// `[global.<k>]` sections in file order.
    pub global: Vec<(String, Section)>,
    pub local: Option<Section>,
    pub kernel: Option<Section>,
    pub run: Option<Section>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ConfigFile::default();
        let mut current: Option<(String, Section)> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| Error::parse(line_no, "unterminated section header"))?
                    .trim()
                    .to_string();
                if let Some(done) = current.take() {
                    cfg.store(done)?;
                }
                current = Some((
                    name,
                    Section {
                        line: line_no,
                        entries: BTreeMap::new(),
                    },
                ));
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(line_no, format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || value.is_empty() {
                return Err(Error::parse(line_no, "empty key or value"));
            }
            let (_, section) = current
                .as_mut()
                .ok_or_else(|| Error::parse(line_no, "key outside of any section"))?;
            let entry = Entry {
                value: value.to_string(),
                line: line_no,
            };
            if section.entries.insert(key.to_string(), entry).is_some() {
                return Err(Error::parse(line_no, format!("duplicate key `{key}`")));
            }
        }
        if let Some(done) = current.take() {
            cfg.store(done)?;
        }
        Ok(cfg)
    }

    fn store(&mut self, (name, section): (String, Section)) -> Result<()> {
        let line = section.line;
        let slot = match name.as_str() {
            "local" => &mut self.local,
            "kernel" => &mut self.kernel,
            "run" => &mut self.run,
            other => {
                let Some(label) = other.strip_prefix("global.") else {
                    return Err(Error::parse(line, format!("unknown section [{other}]")));
                };
                if label.is_empty() {
                    return Err(Error::parse(line, "empty atom label in [global.]"));
                }
                if self.global.iter().any(|(l, _)| l == label) {
                    return Err(Error::parse(line, format!("duplicate section [{other}]")));
                }
                self.global.push((label.to_string(), section));
                return Ok(());
            }
        };
        if slot.is_some() {
            return Err(Error::parse(line, format!("duplicate section [{name}]")));
        }
        *slot = Some(section);
        Ok(())
    }

    /// The continuous-time jump measure from `[global.*]` and `[local]`.
    pub fn measure_spec(&self) -> Result<RewiringMeasureSpec> {
        let mut atoms = Vec::with_capacity(self.global.len());
        for (label, s) in &self.global {
            let name = format!("global.{label}");
            s.reject_unknown(&name, &["lambda", "p0", "p1"])?;
            let rate = s.required_number("lambda", &name)?;
            let p0 = s.required_number("p0", &name)?;
            let p1 = s.required_number("p1", &name)?;
            let limit = IidEdgeLimit::new(p0, p1).map_err(|e| Error::parse(s.line, e.to_string()))?;
            if !(rate > 0.0) {
                return Err(Error::parse(s.get("lambda").map_or(s.line, |e| e.line), "lambda must be positive"));
            }
            if limit.identity_prob() >= 1.0 {
                return Err(Error::parse(
                    s.get("p1").map_or(s.line, |e| e.line),
                    format!("[{name}] with (p0, p1) = (0, 1) only produces the identity map"),
                ));
            }
            atoms.push(GlobalAtom { rate, limit });
        }
        let (c0, c1, line) = match &self.local {
            Some(s) => {
                s.reject_unknown("local", &["c0", "c1"])?;
                (s.number("c0")?.unwrap_or(0.0), s.number("c1")?.unwrap_or(0.0), s.line)
            }
            None => (0.0, 0.0, 1),
        };
        RewiringMeasureSpec::new(atoms, c0, c1).map_err(|e| Error::parse(line, e.to_string()))
    }

    /// The discrete-time kernel from `[kernel]`; `Ok(None)` when absent.
    pub fn kernel_spec(&self) -> Result<Option<KernelSpec>> {
        let Some(s) = &self.kernel else {
            return Ok(None);
        };
        let kind = s
            .get("type")
            .ok_or_else(|| Error::parse(s.line, "[kernel] is missing `type`"))?;
        let spec = match kind.value.as_str() {
            "er" => {
                s.reject_unknown("kernel", &["type", "p0", "p1"])?;
                KernelSpec::er(s.required_number("p0", "kernel")?, s.required_number("p1", "kernel")?)
            }
            "mixed" => {
                s.reject_unknown("kernel", &["type", "a0", "b0", "a1", "b1"])?;
                KernelSpec::mixed(
                    s.required_number("a0", "kernel")?,
                    s.required_number("b0", "kernel")?,
                    s.required_number("a1", "kernel")?,
                    s.required_number("b1", "kernel")?,
                )
            }
            "reversible" => {
                s.reject_unknown("kernel", &["type", "alpha", "alpha_prime", "beta"])?;
                let alpha = s.required_number("alpha", "kernel")?;
                let alpha_prime = s.number("alpha_prime")?.unwrap_or(alpha);
                KernelSpec::reversible(alpha, alpha_prime, s.required_number("beta", "kernel")?)
            }
            other => {
                return Err(Error::parse(
                    kind.line,
                    format!("unknown kernel type `{other}` (expected er, mixed or reversible)"),
                ))
            }
        };
        spec.map(Some).map_err(|e| Error::parse(s.line, e.to_string()))
    }
}
