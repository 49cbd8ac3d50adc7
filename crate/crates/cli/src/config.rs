use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use signeq::alternating::Interval;
use signeq::legendre::Degree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub out: PathBuf,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    pub fn prepare(&self) -> Result<()> {
        fs::create_dir_all(&self.out).with_context(|| format!("creating {}", self.out.display()))
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    /// Writes through `fill` into `name` and reports the path.
    pub fn write_with(&self, name: &str, fill: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<PathBuf> {
        let mut buf = Vec::new();
        fill(&mut buf)?;
        self.write_bytes(name, &buf)
    }

    pub fn write_json<S: Serialize>(&self, name: &str, value: &S) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_bytes(name, text.as_bytes())
    }

    pub fn write_bytes(&self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.path(name);
        write_file(&path, bytes)?;
        println!("wrote {}", path.display());
        Ok(path)
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

/// `"1-5,10,20"` → sorted, deduplicated `[1, 2, 3, 4, 5, 10, 20]`.
pub fn parse_degree_list(s: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Some((a, b)) = item.split_once('-') {
            let a: usize = a.trim().parse().with_context(|| format!("bad degree range {item:?}"))?;
            let b: usize = b.trim().parse().with_context(|| format!("bad degree range {item:?}"))?;
            if a > b {
                bail!("empty degree range {item:?}");
            }
            out.extend(a..=b);
        } else {
            out.push(item.parse().with_context(|| format!("bad degree {item:?}"))?);
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        bail!("no degrees given");
    }
    Ok(out)
}

pub fn degrees(list: &[usize], limit: usize) -> Result<Vec<Degree>> {
    list.iter()
        .map(|&n| Degree::with_limit(n, limit).map_err(Into::into))
        .collect()
}

/// `"A,B"` in radians. `pi` may be written for π, optionally as `pi-x`.
pub fn parse_interval(s: &str) -> Result<Interval<f64>> {
    let (a, b) = s
        .split_once(',')
        .with_context(|| format!("interval {s:?} is not of the form A,B"))?;
    Ok(Interval::new(parse_angle(a)?, parse_angle(b)?)?)
}

pub fn parse_angle(s: &str) -> Result<f64> {
    let t = s.trim();
    let pi = std::f64::consts::PI;
    if t == "pi" {
        return Ok(pi);
    }
    if let Some(rest) = t.strip_prefix("pi-") {
        return Ok(pi - rest.parse::<f64>().with_context(|| format!("bad angle {t:?}"))?);
    }
    if let Some(rest) = t.strip_prefix("pi/") {
        return Ok(pi / rest.parse::<f64>().with_context(|| format!("bad angle {t:?}"))?);
    }
    t.parse().with_context(|| format!("bad angle {t:?}"))
}

pub fn parse_angles(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(parse_angle).collect()
}

/// `"lo,hi"` window for a fitted slope.
pub fn parse_window(s: &str) -> Result<(f64, f64)> {
    let (a, b) = s.split_once(',').with_context(|| format!("{s:?} is not LO,HI"))?;
    let (a, b): (f64, f64) = (a.trim().parse()?, b.trim().parse()?);
    if a > b {
        bail!("empty window {s:?}");
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_lists() {
        assert_eq!(parse_degree_list("5,1-3, 2,10").unwrap(), vec![1, 2, 3, 5, 10]);
        assert!(parse_degree_list("").is_err());
        assert!(parse_degree_list("4-2").is_err());
        assert!(parse_degree_list("x").is_err());
        assert!(degrees(&[0], 10).is_err());
    }

    #[test]
    fn angles() {
        let pi = std::f64::consts::PI;
        assert_eq!(parse_angle("pi-0.05").unwrap(), pi - 0.05);
        assert_eq!(parse_angle("pi/3").unwrap(), pi / 3.0);
        let i = parse_interval("0.3, 1.2").unwrap();
        assert_eq!((i.a, i.b), (0.3, 1.2));
        assert!(parse_interval("2,1").is_err());
        assert!(parse_interval("1").is_err());
        assert_eq!(parse_window("-1.4,-0.6").unwrap(), (-1.4, -0.6));
    }
}
