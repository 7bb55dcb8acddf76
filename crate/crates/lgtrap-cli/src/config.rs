//! Run configuration: defaults, the flat key-value file with per-command
//! sections, and command-line overrides. The resolution order is
//! defaults < file globals < file [section] < command-line flags, and the
//! fully resolved set is always echoed.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use lgtrap::levels::TrapOrder;
use lgtrap::{AtomSpecies, TrapKind};

/// Layered key-value store; keys are (section, name) with "" the global
/// section. Command-line overrides sit in their own layer above every file
/// value.
#[derive(Debug, Default, Clone)]
pub struct ConfigMap {
    values: BTreeMap<(String, String), String>,
    overrides: BTreeMap<String, String>,
}

impl ConfigMap {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        let mut map = ConfigMap::default();
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line.split_once('=').with_context(|| {
                format!("{}:{}: expected `key = value`", path.display(), lineno + 1)
            })?;
            map.values.insert(
                (section.clone(), key.trim().to_string()),
                value.trim().to_string(),
            );
        }
        Ok(map)
    }

    pub fn set_override(&mut self, key: &str, value: String) {
        self.overrides.insert(key.to_string(), value);
    }

    /// Command-line override, then section-scoped value, then the global
    /// section.
    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.overrides
            .get(key)
            .or_else(|| self.values.get(&(section.to_string(), key.to_string())))
            .or_else(|| self.values.get(&(String::new(), key.to_string())))
            .map(|s| s.as_str())
    }

    pub fn get_f64(&self, section: &str, key: &str, default: f64) -> Result<f64> {
        match self.get(section, key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .with_context(|| format!("bad number for `{key}`: `{v}`")),
        }
    }

    pub fn get_usize(&self, section: &str, key: &str, default: usize) -> Result<usize> {
        match self.get(section, key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .with_context(|| format!("bad integer for `{key}`: `{v}`")),
        }
    }

    pub fn get_list<T, E>(
        &self,
        section: &str,
        key: &str,
        default: &[T],
        parse: impl Fn(&str) -> std::result::Result<T, E>,
    ) -> Result<Vec<T>>
    where
        T: Clone,
        E: std::fmt::Display,
    {
        match self.get(section, key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|item| {
                    parse(item.trim()).map_err(|e| anyhow::anyhow!("bad `{key}` item `{item}`: {e}"))
                })
                .collect(),
        }
    }
}

/// Fully resolved run parameters shared by every command.
pub struct Resolved {
    pub species: AtomSpecies,
    pub species_source: String,
    pub kinds: Vec<TrapKind>,
    pub ells: Vec<u32>,
    /// Total atom number.
    pub n_atoms: f64,
    /// Target condensate volume, m^3.
    pub target_vc: f64,
    /// Laser power per beam, W.
    pub power: f64,
    /// Blue detuning, rad/s.
    pub detuning: f64,
    pub out_dir: PathBuf,
    pub seed: Option<u64>,
    pub threads: usize,
    pub map: ConfigMap,
    pub command: String,
}

impl Resolved {
    pub fn resolve(map: ConfigMap, command: &str, out: Option<PathBuf>) -> Result<Resolved> {
        let (species, species_source) = match map.get(command, "species") {
            None => (*AtomSpecies::rb87(), "shipped rb87 defaults".to_string()),
            Some(path) => {
                let p = PathBuf::from(path);
                if !p.exists() {
                    bail!("species file `{}` does not exist", p.display());
                }
                (
                    AtomSpecies::from_file(&p).with_context(|| format!("loading {path}"))?,
                    path.to_string(),
                )
            }
        };

        let kinds = map.get_list(
            command,
            "configurations",
            &[TrapKind::OneDLg, TrapKind::TwoDLg, TrapKind::ThreeDLg],
            |s| s.parse::<TrapKind>(),
        )?;
        let ells = map.get_list(command, "ell", &[1u32, 2, 3, 4, 5, 6], |s| {
            s.parse::<u32>()
        })?;
        if ells.is_empty() || kinds.is_empty() {
            bail!("`ell` and `configurations` must be non-empty");
        }
        if ells.iter().any(|&l| l < 1) {
            bail!("every `ell` must be >= 1");
        }

        let n_atoms = map.get_f64(command, "n_atoms", 1e6)?;
        let vc_um3 = map.get_f64(command, "vc_um3", 5.3e3)?;
        let power = map.get_f64(command, "power_W", 5.0)?;
        let detuning_thz = map.get_f64(command, "detuning_over_2pi_THz", 10.0)?;
        let out_dir = out
            .or_else(|| map.get(command, "out").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        let seed = match map.get(command, "seed") {
            None => None,
            Some(v) => Some(v.parse().with_context(|| format!("bad seed `{v}`"))?),
        };
        let threads = map.get_usize(command, "threads", 1)?.max(1);

        Ok(Resolved {
            species,
            species_source,
            kinds,
            ells,
            n_atoms,
            target_vc: vc_um3 * 1e-18,
            power,
            detuning: 2.0 * std::f64::consts::PI * detuning_thz * 1e12,
            out_dir,
            seed,
            threads,
            map,
            command: command.to_string(),
        })
    }

    /// The resolved configuration, one `key = value` line each; echoed to
    /// stdout and embedded in every output header.
    pub fn echo_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("command = {}", self.command),
            format!("species = {}", self.species_source),
            format!(
                "configurations = {}",
                self.kinds
                    .iter()
                    .map(|k| k.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            format!(
                "ell = {}",
                self.ells
                    .iter()
                    .map(|l| l.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            format!("n_atoms = {}", self.n_atoms),
            format!("vc_um3 = {}", self.target_vc * 1e18),
            format!("power_W = {}", self.power),
            format!(
                "detuning_over_2pi_THz = {}",
                self.detuning / (2.0 * std::f64::consts::PI * 1e12)
            ),
            format!("out = {}", self.out_dir.display()),
            format!("threads = {}", self.threads),
        ];
        if let Some(seed) = self.seed {
            lines.push(format!("seed = {seed}"));
        }
        // command-specific keys, in sorted order; command-line overrides win
        for ((section, key), value) in &self.map.values {
            if section == &self.command && !self.map.overrides.contains_key(key) {
                lines.push(format!("[{section}] {key} = {value}"));
            }
        }
        lines
    }
}

pub fn parse_trap_order(s: &str) -> Result<TrapOrder> {
    s.parse::<TrapOrder>().map_err(|e| anyhow::anyhow!("{e}"))
}
