//! File formats and output-path resolution.
//!
//! Two small little-endian binary formats move states and eigensystems
//! between commands:
//!
//! * **state** (`MFQS`, version 1): magic, `u32` version, `u32` qubit
//!   count, then `2^n` amplitudes as `(f64 re, f64 im)` pairs.
//! * **eigensystem** (`MFQE`, version 1): magic, `u32` version, `u32`
//!   qubit count, `2^n` eigenphases as `f64`, then the `2^n × 2^n`
//!   eigenvector block row-major, row `k` holding eigenvector `k`, as
//!   `(f64 re, f64 im)` pairs.
//!
//! Both readers check the magic, version, and exact file length, and the
//! decoded objects pass through the core constructors so normalization and
//! shape errors surface immediately.

use std::env;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use mfq_core::{C64, EigenSystem, QuantumState};

const STATE_MAGIC: &[u8; 4] = b"MFQS";
const EIG_MAGIC: &[u8; 4] = b"MFQE";
const FORMAT_VERSION: u32 = 1;

/// Environment variable naming the default directory for result files.
pub const OUTPUT_DIR_VAR: &str = "MFQ_OUTPUT_DIR";

/// Serializes a state to the `MFQS` format.
pub fn state_to_bytes(state: &QuantumState) -> Vec<u8> {
    let mut out = Vec::with_capacity(12 + 16 * state.len());
    out.extend_from_slice(STATE_MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(state.qubits() as u32).to_le_bytes());
    for a in state.amplitudes() {
        out.extend_from_slice(&a.re.to_le_bytes());
        out.extend_from_slice(&a.im.to_le_bytes());
    }
    out
}

/// Parses the `MFQS` format.
pub fn state_from_bytes(bytes: &[u8]) -> Result<QuantumState> {
    let mut r = Reader::new(bytes);
    r.magic(STATE_MAGIC)?;
    r.version()?;
    let n = r.qubits()?;
    let len = 1usize << n;
    let mut amplitudes = Vec::with_capacity(len);
    for _ in 0..len {
        amplitudes.push(C64::new(r.f64()?, r.f64()?));
    }
    r.finish()?;
    Ok(QuantumState::new(n, amplitudes)?)
}

/// Serializes an eigensystem to the `MFQE` format.  The dimension must be
/// a power of two (the formats carry qubit counts).
pub fn eigensystem_to_bytes(system: &EigenSystem) -> Result<Vec<u8>> {
    let dim = system.dim();
    if !dim.is_power_of_two() {
        bail!("eigensystem dimension {dim} is not a power of two");
    }
    let n = dim.trailing_zeros();
    let mut out = Vec::with_capacity(12 + 8 * dim + 16 * dim * dim);
    out.extend_from_slice(EIG_MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&n.to_le_bytes());
    for &phase in system.eigenphases() {
        out.extend_from_slice(&phase.to_le_bytes());
    }
    for a in system.vectors_flat() {
        out.extend_from_slice(&a.re.to_le_bytes());
        out.extend_from_slice(&a.im.to_le_bytes());
    }
    Ok(out)
}

/// Parses the `MFQE` format.
pub fn eigensystem_from_bytes(bytes: &[u8]) -> Result<EigenSystem> {
    let mut r = Reader::new(bytes);
    r.magic(EIG_MAGIC)?;
    r.version()?;
    let n = r.qubits()?;
    let dim = 1usize << n;
    let mut phases = Vec::with_capacity(dim);
    for _ in 0..dim {
        phases.push(r.f64()?);
    }
    let mut vectors = Vec::with_capacity(dim * dim);
    for _ in 0..dim * dim {
        vectors.push(C64::new(r.f64()?, r.f64()?));
    }
    r.finish()?;
    Ok(EigenSystem::from_parts(dim, phases, vectors)?)
}

/// Writes a state file, creating parent directories as needed.
pub fn write_state(path: &Path, state: &QuantumState) -> Result<()> {
    write_bytes(path, &state_to_bytes(state))
}

/// Reads a state file.
pub fn read_state(path: &Path) -> Result<QuantumState> {
    let bytes =
        std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    state_from_bytes(&bytes).with_context(|| format!("decoding {}", path.display()))
}

/// Writes an eigensystem file, creating parent directories as needed.
pub fn write_eigensystem(path: &Path, system: &EigenSystem) -> Result<()> {
    write_bytes(path, &eigensystem_to_bytes(system)?)
}

/// Reads an eigensystem file.
pub fn read_eigensystem(path: &Path) -> Result<EigenSystem> {
    let bytes =
        std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    eigensystem_from_bytes(&bytes).with_context(|| format!("decoding {}", path.display()))
}

/// Writes bytes, creating parent directories as needed.
pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("creating {}", parent.display()))?;
        }
    }
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

/// Writes a text file, creating parent directories as needed.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    write_bytes(path, text.as_bytes())
}

/// Picks the output path: an explicit path wins; otherwise `default_name`
/// inside `MFQ_OUTPUT_DIR` when that variable is set, else in the working
/// directory.
pub fn resolve_output(explicit: Option<&str>, default_name: &str) -> PathBuf {
    resolve_output_in(explicit, env::var_os(OUTPUT_DIR_VAR), default_name)
}

fn resolve_output_in(
    explicit: Option<&str>,
    output_dir: Option<std::ffi::OsString>,
    default_name: &str,
) -> PathBuf {
    match explicit {
        Some(path) => PathBuf::from(path),
        None => match output_dir {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir).join(default_name),
            _ => PathBuf::from(default_name),
        },
    }
}

/// Byte reader with exact-length accounting.
struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Reader { bytes, at: 0 }
    }

    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        if self.at + len > self.bytes.len() {
            bail!(
                "file is truncated: wanted {} bytes at offset {}, file has {}",
                len,
                self.at,
                self.bytes.len()
            );
        }
        let slice = &self.bytes[self.at..self.at + len];
        self.at += len;
        Ok(slice)
    }

    fn magic(&mut self, want: &[u8; 4]) -> Result<()> {
        let got = self.take(4)?;
        if got != want {
            bail!(
                "bad magic {:?}; expected {:?}",
                String::from_utf8_lossy(got),
                String::from_utf8_lossy(want)
            );
        }
        Ok(())
    }

    fn version(&mut self) -> Result<()> {
        let v = self.u32()?;
        if v != FORMAT_VERSION {
            bail!("unsupported format version {v}; this build reads version {FORMAT_VERSION}");
        }
        Ok(())
    }

    fn qubits(&mut self) -> Result<usize> {
        let n = self.u32()?;
        // 2^26 amplitudes ≈ 1 GiB; anything larger is not a desk-scale file.
        if n > 26 {
            bail!("qubit count {n} is beyond the supported range (≤ 26)");
        }
        Ok(n as usize)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("length checked")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("length checked")))
    }

    fn finish(&self) -> Result<()> {
        if self.at != self.bytes.len() {
            bail!(
                "file has {} trailing bytes after the expected payload",
                self.bytes.len() - self.at
            );
        }
        Ok(())
    }
}
