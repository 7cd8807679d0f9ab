use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use quasilattice::{Error, HalfOpenBox};

/// Failure classes, one per exit code.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Obstructed(String),
    Numerical(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Obstructed(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Obstructed(m) => write!(f, "obstructed: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Obstructed { .. } => CliError::Obstructed(e.to_string()),
            Error::Singular | Error::Inconsistent(_) | Error::Numerical(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// An input file together with its hash.
pub struct Input {
    pub name: String,
    pub sha256: String,
    pub bytes: Vec<u8>,
}

pub fn read_input(path: &Path) -> CliResult<Input> {
    let bytes = fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let digest = Sha256::digest(&bytes);
    let mut sha256 = String::with_capacity(64);
    for b in digest.iter() {
        write!(sha256, "{b:02x}").unwrap();
    }
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    Ok(Input { name, sha256, bytes })
}

pub fn parse_json<T: DeserializeOwned>(input: &Input) -> CliResult<T> {
    serde_json::from_slice(&input.bytes).map_err(|e| CliError::Input(format!("{}: {e}", input.name)))
}

/// Provenance block carried by every output file.
#[derive(Clone, Debug, Serialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub inputs: Vec<InputHash>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InputHash {
    pub name: String,
    pub sha256: String,
}

impl Header {
    pub fn new(command: &str, seed: Option<u64>, inputs: &[&Input]) -> Self {
        Self {
            tool: "quasilattice".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed,
            inputs: inputs.iter().map(|i| InputHash { name: i.name.clone(), sha256: i.sha256.clone() }).collect(),
        }
    }

    fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("{} {}", self.tool, self.version),
            format!("command: {}", self.command),
            match self.seed {
                Some(s) => format!("seed: {s}"),
                None => "seed: none".into(),
            },
        ];
        for i in &self.inputs {
            out.push(format!("input: {} sha256={}", i.name, i.sha256));
        }
        out
    }

    /// `# `-prefixed comment lines for CSV files.
    pub fn csv(&self) -> String {
        self.lines().iter().map(|l| format!("# {l}\n")).collect()
    }

    /// XML comment for SVG files.
    pub fn svg(&self) -> String {
        format!("<!--\n{}\n-->\n", self.lines().join("\n"))
    }
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct Wrapped<'a, T: Serialize> {
    header: &'a Header,
    #[serde(flatten)]
    body: &'a T,
}

pub fn write_json<T: Serialize>(path: &Path, header: &Header, body: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(&Wrapped { header, body })
        .map_err(|e| CliError::Numerical(format!("cannot serialize output: {e}")))?;
    write_file(path, &(text + "\n"))
}

/// `lo:hi` to a pair.
pub fn parse_range(s: &str) -> CliResult<(f64, f64)> {
    let bad = || CliError::Input(format!("expected lo:hi, got {s:?}"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// `lo:hi[,lo:hi...]` to a box; a single range is repeated to `dim` axes.
pub fn parse_box(s: &str, dim: usize) -> CliResult<HalfOpenBox> {
    let ranges = s.split(',').map(parse_range).collect::<CliResult<Vec<_>>>()?;
    let ranges = match ranges.len() {
        1 => vec![ranges[0]; dim],
        n if n == dim => ranges,
        n => return Err(CliError::Input(format!("box {s:?} has {n} ranges, need {dim}"))),
    };
    Ok(HalfOpenBox::new(ranges.iter().map(|r| r.0).collect(), ranges.iter().map(|r| r.1).collect())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-1.5:2").unwrap(), (-1.5, 2.0));
        assert!(parse_range("2:1").is_err());
        assert!(parse_range("abc").is_err());
        let b = parse_box("0:10", 2).unwrap();
        assert_eq!(b.hi, vec![10.0, 10.0]);
        assert!(parse_box("0:1,0:2,0:3", 2).is_err());
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(Error::Obstructed { prime: 2, rank: 3, slots: 2 }).code(), 2);
        assert_eq!(CliError::from(Error::Singular).code(), 3);
        assert_eq!(CliError::from(Error::TooFewPoints(1)).code(), 1);
    }
}
