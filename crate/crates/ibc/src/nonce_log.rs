//! Per-secret record of used nonces, one `fingerprint nonce` hex pair per line.

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use ibc_core::kdf::{sha3_concat, Digest32};
use ibc_core::protocol::Nonce;

const FINGERPRINT_TAG: &[u8] = b"IBC.fingerprint";

#[derive(Debug, thiserror::Error)]
pub enum NonceLogError {
    #[error("nonce {0} was already used with this secret")]
    Reused(String),
    #[error("nonce log {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("nonce log line {0} is malformed")]
    Malformed(usize),
}

/// Identifies a secret without revealing it.
pub fn fingerprint(secret: &[u8]) -> Digest32 {
    sha3_concat(&[FINGERPRINT_TAG, secret])
}

pub struct NonceLog {
    path: PathBuf,
}

fn parse(text: &str) -> Result<HashSet<(Digest32, Nonce)>, NonceLogError> {
    let mut out = HashSet::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let mut field = || -> Option<[u8; 32]> { hex::decode(parts.next()?).ok()?.try_into().ok() };
        let (Some(fp), Some(z)) = (field(), field()) else {
            return Err(NonceLogError::Malformed(n + 1));
        };
        out.insert((fp, z));
    }
    Ok(out)
}

impl NonceLog {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        NonceLog { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn io(&self, source: std::io::Error) -> NonceLogError {
        NonceLogError::Io { path: self.path.clone(), source }
    }

    fn open_locked(&self) -> Result<File, NonceLogError> {
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| self.io(e))?;
        }
        let file = OpenOptions::new().read(true).append(true).create(true).open(&self.path).map_err(|e| self.io(e))?;
        file.lock().map_err(|e| self.io(e))?;
        Ok(file)
    }

    fn read_all(&self, file: &mut File) -> Result<HashSet<(Digest32, Nonce)>, NonceLogError> {
        let mut text = String::new();
        file.seek(SeekFrom::Start(0)).map_err(|e| self.io(e))?;
        file.read_to_string(&mut text).map_err(|e| self.io(e))?;
        parse(&text)
    }

    pub fn contains(&self, secret: &[u8], nonce: &Nonce) -> Result<bool, NonceLogError> {
        let mut file = self.open_locked()?;
        Ok(self.read_all(&mut file)?.contains(&(fingerprint(secret), *nonce)))
    }

    /// Atomically checks and appends under an exclusive lock.
    pub fn record(&self, secret: &[u8], nonce: &Nonce) -> Result<(), NonceLogError> {
        let mut file = self.open_locked()?;
        let fp = fingerprint(secret);
        if self.read_all(&mut file)?.contains(&(fp, *nonce)) {
            return Err(NonceLogError::Reused(hex::encode(nonce)));
        }
        writeln!(file, "{} {}", hex::encode(fp), hex::encode(nonce)).map_err(|e| self.io(e))?;
        file.sync_data().map_err(|e| self.io(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_and_rejects_reuse() {
        let dir = tempfile::tempdir().unwrap();
        let log = NonceLog::new(dir.path().join("sub/nonces.log"));
        log.record(b"secret one", &[1; 32]).unwrap();
        log.record(b"secret two", &[1; 32]).unwrap();
        log.record(b"secret one", &[2; 32]).unwrap();
        assert!(log.contains(b"secret one", &[1; 32]).unwrap());
        assert!(!log.contains(b"secret two", &[2; 32]).unwrap());
        assert!(matches!(log.record(b"secret one", &[1; 32]), Err(NonceLogError::Reused(_))));
        let text = std::fs::read_to_string(log.path()).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(!text.contains("secret"));
    }

    #[test]
    fn malformed_line_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("n.log");
        std::fs::write(&path, "abcd\n").unwrap();
        let log = NonceLog::new(&path);
        assert!(matches!(log.record(b"s", &[0; 32]), Err(NonceLogError::Malformed(1))));
    }

    #[test]
    fn concurrent_writers_never_duplicate() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("n.log");
        let handles: Vec<_> = (0..8)
            .map(|_| {
                let path = path.clone();
                std::thread::spawn(move || NonceLog::new(path).record(b"shared", &[7; 32]).is_ok())
            })
            .collect();
        let ok = handles.into_iter().map(|h| h.join().unwrap()).filter(|&b| b).count();
        assert_eq!(ok, 1);
    }
}
