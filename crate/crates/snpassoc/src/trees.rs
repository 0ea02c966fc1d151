//! Parse-tree sidecar files: one `candidate id<TAB>(bracketed tree)` per line.

use std::path::Path;

use anyhow::Context;
use snpassoc_core::cv::TreeBank;
use snpassoc_core::tree::parse_sidecar_line;
use snpassoc_core::Error;

/// Blank lines and lines starting with `#` are skipped.
pub fn read_trees(text: &str) -> Result<TreeBank, Error> {
    let mut bank = TreeBank::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (id, tree) = parse_sidecar_line(line).map_err(|e| Error::Parse {
            locator: format!("tree line {}", n + 1),
            message: e.to_string(),
        })?;
        if bank.insert(id.clone(), tree).is_some() {
            return Err(Error::Parse {
                locator: format!("tree line {}", n + 1),
                message: format!("duplicate candidate id `{id}`"),
            });
        }
    }
    Ok(bank)
}

pub fn load_trees(path: &Path) -> anyhow::Result<(TreeBank, Vec<u8>)> {
    let bytes = std::fs::read(path).with_context(|| format!("reading trees {}", path.display()))?;
    let text = String::from_utf8_lossy(&bytes);
    let bank = read_trees(&text).with_context(|| format!("loading trees {}", path.display()))?;
    Ok((bank, bytes))
}
