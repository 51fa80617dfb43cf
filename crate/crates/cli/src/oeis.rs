//! The OEIS b-file client: one plain HTTP GET, cached on disk.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use telescope_core::oracle::standard::a6256;
use telescope_core::oracle::sum_values;

pub const DEFAULT_BASE: &str = "https://oeis.org";

#[derive(Debug, thiserror::Error)]
pub enum OeisError {
    #[error("network: {0}")]
    Network(String),
    #[error("no cached b-file at {0} and --offline was given")]
    NotCached(PathBuf),
    #[error("cache: {0}")]
    Io(#[from] std::io::Error),
    #[error("unsupported sequence {0}; only A006256 has a local oracle")]
    Unsupported(String),
}

/// `A6256` and `A006256` both name the six-digit id `A006256`.
pub fn normalize_id(id: &str) -> Option<String> {
    let digits = id.trim().strip_prefix(['A', 'a'])?;
    let v: u32 = digits.parse().ok()?;
    Some(format!("A{v:06}"))
}

pub fn cache_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Ok(p) = std::env::var("TELESCOPE_CACHE") {
        return PathBuf::from(p);
    }
    let home = std::env::var("HOME").unwrap_or_else(|_| ".".into());
    Path::new(&home).join(".cache").join("telescope")
}

fn bfile_name(id: &str) -> String {
    format!("b{}.txt", &id[1..])
}

/// Cached text, fetching and caching it when absent or when `refresh` is set.
pub fn bfile(id: &str, base: &str, dir: &Path, offline: bool, refresh: bool) -> Result<String, OeisError> {
    let path = dir.join(bfile_name(id));
    if path.exists() && !refresh {
        return Ok(std::fs::read_to_string(&path)?);
    }
    if offline {
        return Err(OeisError::NotCached(path));
    }
    let url = format!("{}/{}/{}", base.trim_end_matches('/'), id, bfile_name(id));
    let text = ureq::get(&url)
        .call()
        .map_err(|e| OeisError::Network(e.to_string()))?
        .into_string()
        .map_err(|e| OeisError::Network(e.to_string()))?;
    std::fs::create_dir_all(dir)?;
    std::fs::write(&path, &text)?;
    Ok(text)
}

/// `n value` lines; comments, blank lines and junk are skipped.
pub fn parse_bfile(text: &str) -> Vec<(i64, BigInt)> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .filter_map(|l| {
            let mut it = l.split_whitespace();
            let n = it.next()?.parse().ok()?;
            let v = it.next()?.parse().ok()?;
            Some((n, v))
        })
        .collect()
}

/// Indices in `0..limit` where the b-file disagrees with the local oracle
/// or has no entry.
pub fn mismatches(id: &str, entries: &[(i64, BigInt)], limit: i64) -> Result<Vec<i64>, OeisError> {
    if id != "A006256" {
        return Err(OeisError::Unsupported(id.into()));
    }
    let local = sum_values(&a6256(), 0, limit - 1).expect("oracle sums are defined for n >= 0");
    Ok((0..limit)
        .filter(|n| {
            let theirs = entries.iter().find(|e| e.0 == *n).map(|e| &e.1);
            let ours = &local[n];
            theirs.is_none_or(|v| !ours.is_integer() || ours.numer() != v)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_and_lines() {
        assert_eq!(normalize_id("A6256").as_deref(), Some("A006256"));
        assert_eq!(normalize_id("a006256").as_deref(), Some("A006256"));
        assert_eq!(normalize_id("6256"), None);
        let e = parse_bfile("# header\n0 1\n\n1 6\nbad line\n2 39 extra\n");
        assert_eq!(e, vec![(0, 1.into()), (1, 6.into()), (2, 39.into())]);
    }

    #[test]
    fn comparison() {
        let good = vec![(0, 1.into()), (1, 6.into()), (2, 39.into())];
        assert!(mismatches("A006256", &good, 3).unwrap().is_empty());
        let bad = vec![(0, 1.into()), (1, 7.into())];
        assert_eq!(mismatches("A006256", &bad, 3).unwrap(), vec![1, 2]);
    }
}
