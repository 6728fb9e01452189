//! On-disk memo of enumerated canonical forms.
//!
//! When `FLIPCALC_CACHE_DIR` is set, [`cached_forms`] stores each vertex
//! count's forms as `forms-v<V>.json` there and reuses them on later calls.
//! A missing or unreadable entry is recomputed; failure to write is ignored.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::ribbon::CanonicalForm;

use super::enumerate::{enumerate_forms, EnumerateOptions};

pub const CACHE_ENV: &str = "FLIPCALC_CACHE_DIR";

pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

fn entry(dir: &Path, v: usize) -> PathBuf {
    dir.join(format!("forms-v{v}.json"))
}

/// [`enumerate_forms`] through the cache in `dir`.
pub fn cached_forms_in(dir: &Path, v: usize, opts: EnumerateOptions) -> Result<Vec<CanonicalForm>> {
    let path = entry(dir, v);
    if let Ok(bytes) = fs::read(&path) {
        if let Ok(forms) = serde_json::from_slice::<Vec<CanonicalForm>>(&bytes) {
            if forms.iter().all(|f| f.dart_count() == 3 * v) {
                return Ok(forms);
            }
        }
    }
    let forms = enumerate_forms(v, opts)?;
    if fs::create_dir_all(dir).is_ok() {
        let tmp = path.with_extension("json.tmp");
        if let Ok(json) = serde_json::to_vec(&forms) {
            if fs::write(&tmp, json).is_ok() {
                let _ = fs::rename(&tmp, &path);
            }
        }
    }
    Ok(forms)
}

/// [`enumerate_forms`] through the cache named by the environment, if any.
pub fn cached_forms(v: usize, opts: EnumerateOptions) -> Result<Vec<CanonicalForm>> {
    match cache_dir() {
        Some(dir) => cached_forms_in(&dir, v, opts),
        None => enumerate_forms(v, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_disk() {
        let dir = std::env::temp_dir().join(format!("flipcalc-cache-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        let opts = EnumerateOptions::default();
        let fresh = cached_forms_in(&dir, 2, opts).unwrap();
        assert!(entry(&dir, 2).exists());
        let again = cached_forms_in(&dir, 2, opts).unwrap();
        assert_eq!(fresh, again);
        // a corrupt entry is recomputed
        fs::write(entry(&dir, 2), b"not json").unwrap();
        assert_eq!(cached_forms_in(&dir, 2, opts).unwrap(), fresh);
        let _ = fs::remove_dir_all(&dir);
    }
}
