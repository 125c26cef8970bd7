//! Bit-exact file format for grid colorings.
//!
//! Layout: one ASCII header line `HJC1 t=<t> n=<n> label=<label>` terminated
//! by a newline, then ceil(t^n/8) raw bytes. Bit r of the stream, in
//! little-endian order within each byte, is the color of the rank-r point.
//! The label runs to the end of the header line and may contain spaces.

use anyhow::{bail, Context, Result};
use hj_core::grid::Coloring;
use std::fs;
use std::path::Path;

pub fn encode_coloring(c: &Coloring) -> Vec<u8> {
    let byte_len = byte_length(c.point_count());
    let label = c.label().replace('\n', " ");
    let mut out = format!("HJC1 t={} n={} label={}\n", c.t(), c.n(), label).into_bytes();
    let mut body = Vec::with_capacity(c.words().len() * 8);
    for w in c.words() {
        body.extend_from_slice(&w.to_le_bytes());
    }
    body.truncate(byte_len);
    out.extend_from_slice(&body);
    out
}

pub fn decode_coloring(bytes: &[u8]) -> Result<Coloring> {
    let nl = bytes
        .iter()
        .position(|&b| b == b'\n')
        .context("missing header line")?;
    let header = core::str::from_utf8(&bytes[..nl]).context("header is not UTF-8")?;
    let rest = header
        .strip_prefix("HJC1 ")
        .context("bad magic, expected HJC1")?;
    let rest = rest.strip_prefix("t=").context("expected t= field")?;
    let (t_str, rest) = rest.split_once(' ').context("truncated header")?;
    let rest = rest.strip_prefix("n=").context("expected n= field")?;
    let (n_str, rest) = rest.split_once(' ').context("truncated header")?;
    let label = rest
        .strip_prefix("label=")
        .context("expected label= field")?;
    let t: u8 = t_str.parse().context("t field")?;
    let n: u32 = n_str.parse().context("n field")?;
    if t < 2 {
        bail!("t must be at least 2, got {t}");
    }
    if n < 1 {
        bail!("n must be at least 1, got {n}");
    }
    let points = (t as u64)
        .checked_pow(n)
        .with_context(|| format!("{t}^{n} overflows the rank space"))?;
    let byte_len = byte_length(points);
    let body = &bytes[nl + 1..];
    if body.len() != byte_len {
        bail!(
            "body holds {} bytes, expected {} for t={} n={}",
            body.len(),
            byte_len,
            t,
            n
        );
    }
    let words = body
        .chunks(8)
        .map(|chunk| {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            u64::from_le_bytes(buf)
        })
        .collect();
    Ok(Coloring::from_words(t, n, label, words))
}

pub fn save_coloring(path: &Path, c: &Coloring) -> Result<()> {
    fs::write(path, encode_coloring(c)).with_context(|| format!("writing {}", path.display()))
}

pub fn load_coloring(path: &Path) -> Result<Coloring> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    decode_coloring(&bytes).with_context(|| format!("decoding {}", path.display()))
}

fn byte_length(points: u64) -> usize {
    usize::try_from(points / 8 + u64::from(points % 8 != 0)).expect("body fits in memory")
}
