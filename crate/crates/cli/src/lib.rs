//! Shared plumbing for the command-line tools.

use std::path::Path;

use anyhow::{anyhow, Result};

/// Logs to stderr; `RUST_LOG` overrides the default `info` level.
pub fn init_logging() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
}

/// Language code from an explicit flag, else from the file extension
/// (`corpus.eng` gives `eng`).
pub fn lang_for(flag: Option<&str>, path: &Path) -> Result<String> {
    if let Some(l) = flag {
        return Ok(l.to_string());
    }
    path.extension()
        .and_then(|e| e.to_str())
        .map(str::to_string)
        .ok_or_else(|| anyhow!("cannot infer a language from {}; pass it explicitly", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn language_from_extension() {
        assert_eq!(lang_for(None, Path::new("data/train.mal")).unwrap(), "mal");
        assert_eq!(lang_for(Some("hin"), Path::new("x.mal")).unwrap(), "hin");
        assert!(lang_for(None, Path::new("train")).is_err());
    }
}
