use std::fs;
use std::path::{Path, PathBuf};

use role_embed::graph::LoadedGraph;
use role_embed::io::{cache_distances, content_hash, load_cached};
use role_embed::{distance_matrix, DistanceConfig, DistanceMatrix, Error, Graph};

/// An edge list together with its raw bytes, which key the distance cache.
#[derive(Debug)]
pub struct EdgeInput {
    pub loaded: LoadedGraph,
    pub bytes: Vec<u8>,
}

impl EdgeInput {
    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let bytes = fs::read(path).map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
        let loaded =
            role_embed::load_edge_list(bytes.as_slice()).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        let d = &loaded.dropped;
        if d.duplicates + d.self_loops > 0 {
            log::warn!(
                "{}: dropped {} duplicate edges and {} self-loops",
                path.display(),
                d.duplicates,
                d.self_loops
            );
        }
        Ok(EdgeInput { loaded, bytes })
    }

    pub fn graph(&self) -> &Graph {
        &self.loaded.graph
    }
}

pub fn cache_path(dir: &Path, key: u64) -> PathBuf {
    dir.join(format!("{key:016x}.rdm"))
}

/// Distance matrix for `input`, reusing or filling the cache in `cache_dir`.
/// Returns the matrix and the cache file touched, if any.
pub fn distances(
    input: &EdgeInput,
    cfg: &DistanceConfig,
    cache_dir: Option<&Path>,
) -> anyhow::Result<(DistanceMatrix, Option<PathBuf>)> {
    let compute = || {
        distance_matrix::<f64>(input.graph(), cfg).map_err(|e| match e {
            Error::IsolatedNode { node } => {
                let name = input.loaded.ids.name(node).to_owned();
                anyhow::Error::new(e).context(format!("edge-list node {name:?} has no neighbours"))
            }
            e => e.into(),
        })
    };
    let Some(dir) = cache_dir else {
        return Ok((compute()?, None));
    };
    let key = content_hash(&input.bytes, cfg);
    let path = cache_path(dir, key);
    if let Some(d) = load_cached(&path, key)? {
        if d.n() == input.graph().node_count() {
            log::info!("distance cache hit: {}", path.display());
            return Ok((d, Some(path)));
        }
        log::warn!("ignoring {}: node count differs", path.display());
    }
    let d = compute()?;
    cache_distances(&d, key, &path)?;
    log::info!("distance cache written: {}", path.display());
    Ok((d, Some(path)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isolated_node_error_uses_file_names() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        fs::write(&path, "a b\nb c\nzz zz\n").unwrap();
        let input = EdgeInput::read(&path).unwrap();
        let err = format!("{:#}", distances(&input, &DistanceConfig::default(), None).unwrap_err());
        assert!(err.contains("\"zz\""), "{err}");
        assert!(err.contains("Remove isolated nodes"), "{err}");
    }

    #[test]
    fn cache_is_filled_then_reused() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        fs::write(&path, "0 1\n1 2\n2 3\n3 0\n0 2\n").unwrap();
        let input = EdgeInput::read(&path).unwrap();
        let cache = dir.path().join("cache");
        let (a, file) = distances(&input, &DistanceConfig::default(), Some(&cache)).unwrap();
        let file = file.unwrap();
        let stamp = fs::read(&file).unwrap();
        let (b, again) = distances(&input, &DistanceConfig::default(), Some(&cache)).unwrap();
        assert_eq!(again.unwrap(), file);
        assert_eq!(a, b);
        assert_eq!(fs::read(&file).unwrap(), stamp);
    }
}
