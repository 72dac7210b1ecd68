use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use role_embed::io::write_atomically;

/// Files written by one command. Each file appears atomically; if the
/// command fails later, [`Outputs::discard`] removes the ones already done.
#[derive(Debug, Default)]
pub struct Outputs {
    written: Vec<PathBuf>,
}

impl Outputs {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn write(
        &mut self,
        path: &Path,
        body: impl FnOnce(&mut dyn Write) -> role_embed::Result<()>,
    ) -> role_embed::Result<()> {
        write_atomically(path, body)?;
        self.written.push(path.to_path_buf());
        Ok(())
    }

    pub fn paths(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn discard(self) {
        for p in self.written {
            if let Err(e) = fs::remove_file(&p) {
                log::warn!("could not remove {}: {e}", p.display());
            }
        }
    }
}
