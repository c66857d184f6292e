use std::path::Path;

use anyhow::{bail, Context, Result};
use ctsda::RadarConfig;
use serde::Serialize;

use crate::GlobalOpts;

/// What a run produced, and how to reproduce it.
#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub subcommand: &'a str,
    pub config: &'a RadarConfig,
    pub seed: Option<u64>,
    pub outputs: Vec<String>,
    pub version: &'static str,
    pub args: Vec<String>,
}

/// One result in every supported format.
pub struct Rendered {
    pub text: String,
    pub json: serde_json::Value,
    pub csv: Option<String>,
}

impl Rendered {
    pub fn new(text: String, json: impl Serialize) -> Result<Self> {
        Ok(Self { text, json: serde_json::to_value(json)?, csv: None })
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }
}

pub fn csv_of<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn emit(opts: &GlobalOpts, subcommand: &str, config: &RadarConfig, seed: Option<u64>, out: Rendered) -> Result<()> {
    let mut body = if opts.json {
        serde_json::to_string_pretty(&out.json)?
    } else if opts.csv {
        match out.csv {
            Some(csv) => csv,
            None => bail!(ctsda::Error::Config(format!("`{subcommand}` has no CSV output"))),
        }
    } else {
        out.text
    };
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match &opts.out {
        None => print!("{body}"),
        Some(path) => {
            std::fs::write(path, &body).with_context(|| format!("writing {}", path.display()))?;
            let manifest = RunManifest {
                subcommand,
                config,
                seed,
                outputs: vec![path.display().to_string()],
                version: env!("CARGO_PKG_VERSION"),
                args: std::env::args().skip(1).collect(),
            };
            let manifest_path = manifest_path(path);
            std::fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)? + "\n")
                .with_context(|| format!("writing {}", manifest_path.display()))?;
        }
    }
    Ok(())
}

fn manifest_path(out: &Path) -> std::path::PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    name.into()
}

/// Rounds away binary noise such as `17.999999999999996` for display.
pub fn num(x: f64) -> f64 {
    let r = (x * 1e9).round() / 1e9;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn list(xs: impl IntoIterator<Item = f64>) -> String {
    let items: Vec<String> = xs.into_iter().map(|x| num(x).to_string()).collect();
    format!("[{}]", items.join(","))
}
