//! Artifact emission: CSV/JSON to stdout or a file, plus a metadata sidecar.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Context;
use serde::Serialize;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "CLUSTER_DEPHASING_OUT_DIR";

/// Shortest representation that parses back to the same `f64`.
pub fn float(x: f64) -> String {
    format!("{x:?}")
}

/// CSV text from a header and rows of already formatted cells.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

pub fn json(value: &impl Serialize) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Where an artifact goes.
#[derive(Clone, Debug, PartialEq)]
pub enum Destination {
    Stdout,
    File(PathBuf),
}

impl Destination {
    /// `--out` wins; `-` means stdout. Otherwise the environment directory
    /// is used with `default_name`, falling back to stdout.
    pub fn resolve(out: Option<&Path>, default_name: &str) -> Self {
        match out {
            Some(p) if p == Path::new("-") => Destination::Stdout,
            Some(p) => Destination::File(p.to_path_buf()),
            None => match std::env::var_os(OUT_DIR_ENV) {
                Some(dir) if !dir.is_empty() => {
                    Destination::File(Path::new(&dir).join(default_name))
                }
                _ => Destination::Stdout,
            },
        }
    }
}

#[derive(Serialize)]
struct Meta<'a, C: Serialize> {
    command: &'a str,
    version: &'a str,
    created_unix: u64,
    config: &'a C,
}

/// Writes `body` and, for files, a `<file>.meta.json` sidecar holding the
/// run configuration and a timestamp.
pub fn emit(
    dest: &Destination,
    body: &str,
    command: &str,
    config: &impl Serialize,
) -> anyhow::Result<()> {
    match dest {
        Destination::Stdout => {
            let mut out = std::io::stdout().lock();
            match out.write_all(body.as_bytes()).and_then(|()| out.flush()) {
                // A closed pipe (e.g. `| head`) is not a failure.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                r => r?,
            }
        }
        Destination::File(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)
                    .with_context(|| format!("creating {}", parent.display()))?;
            }
            std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
            let meta = Meta {
                command,
                version: env!("CARGO_PKG_VERSION"),
                created_unix: SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0),
                config,
            };
            let mut sidecar = path.as_os_str().to_owned();
            sidecar.push(".meta.json");
            std::fs::write(&sidecar, json(&meta)?)
                .with_context(|| format!("writing {}", Path::new(&sidecar).display()))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [
            0.0,
            1.0,
            0.1,
            1e-20,
            123456.789,
            f64::MIN_POSITIVE,
            2.0f64.sqrt(),
        ] {
            assert_eq!(float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(float(0.1), "0.1");
        assert_eq!(float(1e-20), "1e-20");
    }

    #[test]
    fn csv_layout() {
        let s = csv(&["t", "x"], vec![vec!["0.0".into(), "1.0".into()]]);
        assert_eq!(s, "t,x\n0.0,1.0\n");
    }

    #[test]
    fn destination_rules() {
        assert_eq!(
            Destination::resolve(Some(Path::new("-")), "a.csv"),
            Destination::Stdout
        );
        assert_eq!(
            Destination::resolve(Some(Path::new("x.csv")), "a.csv"),
            Destination::File("x.csv".into())
        );
    }
}
