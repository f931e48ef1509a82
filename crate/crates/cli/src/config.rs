//! Run configuration: built-in defaults, then an optional `key = value`
//! file, then command-line flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Charvar,
    Census,
    Subst,
    Mic,
    Surface,
    Reproduce,
}

#[derive(Debug, Parser)]
#[command(
    name = "fricke",
    version,
    about = "Character varieties, subgroup censuses and MIC-POVMs of finitely presented groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Ideal generators, hypersurface part and factor table
    Charvar { input: Option<String> },
    /// Conjugacy classes of subgroups of index 1..N
    Census { input: Option<String> },
    /// Substitution matrix, Perron-Frobenius data, census invariance
    Subst { input: Option<String> },
    /// Magic fiducials from coset tables and their Pauli orbits
    Mic { input: Option<String> },
    /// Singular points and isosurface mesh of a polynomial in x, y, z
    Surface { input: Option<String> },
    /// The full pass/fail reproduction table
    Reproduce,
}

impl Sub {
    fn split(self) -> (Command, Option<String>) {
        match self {
            Sub::Charvar { input } => (Command::Charvar, input),
            Sub::Census { input } => (Command::Census, input),
            Sub::Subst { input } => (Command::Subst, input),
            Sub::Mic { input } => (Command::Mic, input),
            Sub::Surface { input } => (Command::Surface, input),
            Sub::Reproduce => (Command::Reproduce, None),
        }
    }
}

#[derive(Debug, Default, Args)]
pub struct Flags {
    /// Largest subgroup index
    #[arg(long = "N", global = true)]
    pub n: Option<String>,
    /// Cap on the size of any coset table built
    #[arg(long, global = true)]
    pub max_cosets: Option<String>,
    /// How many times the substitution is applied
    #[arg(long, global = true)]
    pub repeats: Option<String>,
    /// golden, silver, tribonacci or custom:<images>
    #[arg(long, global = true)]
    pub map: Option<String>,
    /// Hilbert-space dimension (subgroup index) for mic
    #[arg(long, global = true)]
    pub dim: Option<String>,
    /// Half-width of the mesh box; its floor bounds the singular-point grid
    #[arg(long = "box", global = true)]
    pub box_: Option<String>,
    /// Mesh cells per side
    #[arg(long, global = true)]
    pub res: Option<String>,
    /// Clustering and identity tolerance
    #[arg(long, global = true)]
    pub tol: Option<String>,
    /// Worker threads
    #[arg(long, global = true)]
    pub jobs: Option<String>,
    /// Output JSON path (stdout if absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// key = value file; flags given on the command line take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<String>,
    pub n: usize,
    pub max_cosets: usize,
    pub repeats: usize,
    pub map: String,
    pub dim: usize,
    pub box_: f64,
    pub res: usize,
    pub tol: f64,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "input",
    "N",
    "max-cosets",
    "repeats",
    "map",
    "dim",
    "box",
    "res",
    "tol",
    "jobs",
    "out",
];

fn positive<T>(key: &str, raw: &str) -> Result<T, CliError>
where
    T: FromStr + PartialOrd + Default,
{
    match raw.trim().parse::<T>() {
        Ok(v) if v > T::default() => Ok(v),
        _ => Err(CliError::Parse(format!(
            "{key} must be a positive number (got '{raw}')"
        ))),
    }
}

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn read_config_file(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Parse(format!("config line {}: expected key = value", i + 1))
        })?;
        let k = k.trim();
        if !KEYS.contains(&k) {
            return Err(CliError::Parse(format!(
                "config line {}: unknown key '{k}'",
                i + 1
            )));
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

impl RunConfig {
    fn defaults(command: Command) -> Self {
        RunConfig {
            command,
            input: None,
            n: 6,
            max_cosets: 1_000_000,
            repeats: 1,
            map: "golden".into(),
            dim: 3,
            box_: 5.0,
            res: 64,
            tol: 1e-9,
            jobs: None,
            out: None,
        }
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "input" => self.input = Some(value.to_string()),
            "N" => self.n = positive(key, value)?,
            "max-cosets" => self.max_cosets = positive(key, value)?,
            "repeats" => self.repeats = positive(key, value)?,
            "map" => self.map = value.to_string(),
            "dim" => self.dim = positive(key, value)?,
            "box" => {
                let b: f64 = positive(key, value)?;
                if !b.is_finite() {
                    return Err(CliError::Parse("box must be finite".into()));
                }
                self.box_ = b;
            }
            "res" => self.res = positive(key, value)?,
            "tol" => self.tol = positive(key, value)?,
            "jobs" => self.jobs = Some(positive(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            _ => return Err(CliError::Parse(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Defaults, then the config file, then flags.
    pub fn resolve(cli: Cli) -> Result<Self, CliError> {
        let (command, input) = cli.command.split();
        let mut cfg = RunConfig::defaults(command);
        if let Some(path) = &cli.flags.config {
            for (k, v) in read_config_file(path)? {
                cfg.set(&k, &v)?;
            }
        }
        let f = cli.flags;
        let given: [(&str, Option<String>); 9] = [
            ("N", f.n),
            ("max-cosets", f.max_cosets),
            ("repeats", f.repeats),
            ("map", f.map),
            ("dim", f.dim),
            ("box", f.box_),
            ("res", f.res),
            ("tol", f.tol),
            ("jobs", f.jobs),
        ];
        for (k, v) in given {
            if let Some(v) = v {
                cfg.set(k, &v)?;
            }
        }
        if let Some(out) = f.out {
            cfg.out = Some(out);
        }
        if input.is_some() {
            cfg.input = input;
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("fricke").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(
            &path,
            "# census run\nN = 4\nmap = silver\ninput = a,b | [a,b]\n",
        )
        .unwrap();
        let c = RunConfig::resolve(cli(&[
            "census",
            "--config",
            path.to_str().unwrap(),
            "--N",
            "7",
        ]))
        .unwrap();
        assert_eq!(c.n, 7);
        assert_eq!(c.map, "silver");
        assert_eq!(c.input.as_deref(), Some("a,b | [a,b]"));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_bounds() {
        assert!(matches!(
            parse_config_text("colour = red"),
            Err(CliError::Parse(_))
        ));
        assert!(matches!(parse_config_text("N 4"), Err(CliError::Parse(_))));
        assert!(RunConfig::resolve(cli(&["census", "--N", "0"])).is_err());
        assert!(RunConfig::resolve(cli(&["surface", "--box=-1"])).is_err());
        assert!(RunConfig::resolve(cli(&["mic", "--tol", "abc"])).is_err());
    }
}
