use std::io::Read;

use clap::Args;
use magnitude::metric::{named_graph, SpaceKind};
use magnitude::{generate_space, FiniteMetricSpace, SpaceSpec};
use sha2::{Digest, Sha256};

use crate::Failure;

/// Exactly one source of a finite metric space.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct SpaceArgs {
    /// Distance matrix as CSV (optional header row of labels).
    #[arg(long, value_name = "FILE")]
    pub matrix: Option<String>,
    /// Read the CSV distance matrix from stdin.
    #[arg(long)]
    pub stdin_matrix: bool,
    /// Comma-separated points on the real line.
    #[arg(long, value_name = "X,Y,...", allow_hyphen_values = true)]
    pub points_1d: Option<String>,
    /// Named graph: kN, cN, pN, kM,N (k32 = k3,2).
    #[arg(long, value_name = "NAME")]
    pub graph: Option<String>,
    /// Space spec as inline JSON or a path to a JSON file.
    #[arg(long, value_name = "JSON|FILE")]
    pub spec: Option<String>,
}

/// Collects every byte of input so reports can carry a digest of it.
pub struct Inputs {
    hasher: Sha256,
    pub seed: Option<u64>,
}

impl Inputs {
    pub fn new(argv: &[String], seed: Option<u64>) -> Self {
        let mut hasher = Sha256::new();
        for a in argv {
            hasher.update(a.as_bytes());
            hasher.update([0u8]);
        }
        Self { hasher, seed }
    }

    fn absorb(&mut self, bytes: &[u8]) {
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    pub fn digest(self) -> String {
        self.hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn read_file(&mut self, path: &str) -> Result<Vec<u8>, Failure> {
        let bytes = std::fs::read(path).map_err(|e| Failure::input(format!("{path}: {e}")))?;
        self.absorb(&bytes);
        Ok(bytes)
    }

    pub fn read_stdin(&mut self) -> Result<Vec<u8>, Failure> {
        let mut bytes = Vec::new();
        std::io::stdin().read_to_end(&mut bytes).map_err(|e| Failure::input(format!("stdin: {e}")))?;
        self.absorb(&bytes);
        Ok(bytes)
    }

    /// Inline JSON stays as is; anything else names a file.
    pub fn json_text(&mut self, arg: &str) -> Result<String, Failure> {
        let trimmed = arg.trim_start();
        if trimmed.starts_with('{') || trimmed.starts_with('[') {
            return Ok(arg.to_string());
        }
        let bytes = self.read_file(arg)?;
        String::from_utf8(bytes).map_err(|_| Failure::input(format!("{arg}: not utf-8")))
    }

    pub fn space(&mut self, args: &SpaceArgs) -> Result<FiniteMetricSpace, Failure> {
        if let Some(path) = &args.matrix {
            let bytes = self.read_file(path)?;
            return Ok(FiniteMetricSpace::from_csv_reader(&bytes[..])?);
        }
        if args.stdin_matrix {
            let bytes = self.read_stdin()?;
            return Ok(FiniteMetricSpace::from_csv_reader(&bytes[..])?);
        }
        let mut spec = if let Some(list) = &args.points_1d {
            SpaceSpec::new(SpaceKind::Points1d { coords: parse_list(list)? })
        } else if let Some(name) = &args.graph {
            named_graph(name)?
        } else if let Some(spec) = &args.spec {
            SpaceSpec::from_json(&self.json_text(spec)?)?
        } else {
            return Err(Failure::input("no space given"));
        };
        if let Some(seed) = self.seed {
            spec.seed = Some(seed);
        }
        Ok(generate_space(&spec)?)
    }
}

pub fn parse_list(text: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Failure::input(format!("bad number {s:?} in list"))))
        .collect()
}

pub fn parse_levels(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| Failure::input(format!("bad level {s:?}"))))
        .collect()
}
