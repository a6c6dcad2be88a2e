use anyhow::{Context, Result};
use lmono::lfunction::LFunction;
use lmono::zeros::{count_check, load_zeros, max_scan_step, scan_zeros, store_zeros, CountReport, ZeroList};
use std::path::{Path, PathBuf};

pub const DEFAULT_STEP: f64 = 0.02;

pub fn cache_path(dir: &Path, d: i64, height: f64) -> PathBuf {
    dir.join(format!("d{d}_T{height}.csv"))
}

pub struct Loaded {
    pub zeros: ZeroList,
    pub count: CountReport,
    pub path: PathBuf,
}

/// Serves a verified zero list, re-checking any cached copy and scanning
/// afresh when it is missing or fails the count. The cache is written only
/// after a passing count.
pub fn load_or_scan(lf: &LFunction, height: f64, dir: &Path) -> Result<Loaded> {
    let d = lf.character().discriminant();
    let path = cache_path(dir, d, height);
    if path.exists() {
        match load_zeros(&path) {
            Ok(mut zl) if zl.discriminant == d && zl.covered_height == height => {
                let count = count_check(lf, &mut zl)?;
                if count.pass {
                    eprintln!("served from cache {}", path.display());
                    return Ok(Loaded { zeros: zl, count, path });
                }
                eprintln!("cached list {} failed the count; rescanning", path.display());
            }
            Ok(_) => eprintln!("cache file {} describes another list; rescanning", path.display()),
            Err(e) => eprintln!("ignoring unreadable cache {}: {e}", path.display()),
        }
    }
    let step = DEFAULT_STEP.min(max_scan_step(lf.character().modulus(), height));
    let mut zl = scan_zeros(lf, height, step)?;
    let count = count_check(lf, &mut zl)?;
    if count.pass {
        std::fs::create_dir_all(dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
        store_zeros(&zl, &path)?;
    }
    Ok(Loaded { zeros: zl, count, path })
}
