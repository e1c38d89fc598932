//! Norm-table cache files.
//!
//! Layout, bit-exact on round trip:
//!
//! ```text
//! NILGROWTH-NT v1\n
//! group <name>\n
//! gens <name>:<weight> <name>:<weight> ...\n
//! fingerprint <16 hex digits>\n
//! radius <r>\n
//! <body>
//! ```
//!
//! The body is binary: for each layer `0..=r` a little-endian `u64` count
//! followed by that many length-prefixed (`u32`) canonical encodings in
//! sorted order, then a trailing little-endian `u64` FNV-1a checksum of the
//! whole body.

use super::bfs::{fingerprint, fnv1a64, NormTable};
use super::EngineError;
use crate::group::GroupDescriptor;
use crate::word::GenSet;
use std::fs;
use std::io::Write;
use std::path::Path;

const MAGIC: &str = "NILGROWTH-NT v1";

pub fn save_table(table: &NormTable, path: &Path) -> Result<(), EngineError> {
    let mut header = String::new();
    header.push_str(MAGIC);
    header.push('\n');
    header.push_str(&format!("group {}\n", table.group()));
    header.push_str("gens");
    for (name, w) in table.gens_summary() {
        header.push_str(&format!(" {name}:{w}"));
    }
    header.push('\n');
    header.push_str(&format!("fingerprint {:016x}\n", table.fingerprint()));
    header.push_str(&format!("radius {}\n", table.radius()));

    let mut body = Vec::new();
    for layer in table.layers() {
        body.extend_from_slice(&(layer.len() as u64).to_le_bytes());
        for enc in layer {
            body.extend_from_slice(&(enc.len() as u32).to_le_bytes());
            body.extend_from_slice(enc);
        }
    }
    let checksum = fnv1a64(&body);

    let mut file = fs::File::create(path)?;
    file.write_all(header.as_bytes())?;
    file.write_all(&body)?;
    file.write_all(&checksum.to_le_bytes())?;
    Ok(())
}

pub fn load_table(
    path: &Path,
    desc: &GroupDescriptor,
    gens: &GenSet,
) -> Result<NormTable, EngineError> {
    let data = fs::read(path)?;
    let mut pos = 0;

    let magic = read_line(&data, &mut pos)?;
    if magic != MAGIC {
        return Err(EngineError::FormatVersionMismatch {
            expected: MAGIC.into(),
            found: magic.chars().take(32).collect(),
        });
    }
    let group = read_line(&data, &mut pos)?
        .strip_prefix("group ")
        .ok_or_else(|| EngineError::CorruptFile("missing group line".into()))?
        .to_string();
    let gens_line = read_line(&data, &mut pos)?
        .strip_prefix("gens")
        .ok_or_else(|| EngineError::CorruptFile("missing gens line".into()))?
        .trim()
        .to_string();
    let fp_line = read_line(&data, &mut pos)?
        .strip_prefix("fingerprint ")
        .ok_or_else(|| EngineError::CorruptFile("missing fingerprint line".into()))?
        .to_string();
    let stored_fp = u64::from_str_radix(&fp_line, 16)
        .map_err(|_| EngineError::CorruptFile("bad fingerprint".into()))?;
    let radius: u32 = read_line(&data, &mut pos)?
        .strip_prefix("radius ")
        .ok_or_else(|| EngineError::CorruptFile("missing radius line".into()))?
        .parse()
        .map_err(|_| EngineError::CorruptFile("bad radius".into()))?;

    let expected_fp = fingerprint(desc, gens);
    let gens_summary: Vec<(String, u64)> = gens
        .letters()
        .iter()
        .map(|l| (l.name.clone(), l.weight))
        .collect();
    let expected_gens_line = gens_summary
        .iter()
        .map(|(n, w)| format!("{n}:{w}"))
        .collect::<Vec<_>>()
        .join(" ");
    if stored_fp != expected_fp || group != desc.name() || gens_line != expected_gens_line {
        return Err(EngineError::FingerprintMismatch);
    }

    if data.len() < pos + 8 {
        return Err(EngineError::CorruptFile("truncated body".into()));
    }
    let body = &data[pos..data.len() - 8];
    let stored_sum = u64::from_le_bytes(data[data.len() - 8..].try_into().unwrap());
    if fnv1a64(body) != stored_sum {
        return Err(EngineError::CorruptFile("checksum mismatch".into()));
    }

    let mut bpos = 0;
    let mut layers = Vec::with_capacity(radius as usize + 1);
    for _ in 0..=radius {
        let count = read_u64(body, &mut bpos)? as usize;
        let mut layer = Vec::with_capacity(count);
        for _ in 0..count {
            let len = read_u32(body, &mut bpos)? as usize;
            let end = bpos
                .checked_add(len)
                .filter(|&e| e <= body.len())
                .ok_or_else(|| EngineError::CorruptFile("encoding overruns body".into()))?;
            let enc = body[bpos..end].to_vec();
            desc.decode(&enc)
                .map_err(|_| EngineError::CorruptFile("undecodable element".into()))?;
            layer.push(enc);
            bpos = end;
        }
        if layer.windows(2).any(|w| w[0] >= w[1]) {
            return Err(EngineError::CorruptFile("layer not sorted".into()));
        }
        layers.push(layer);
    }
    if bpos != body.len() {
        return Err(EngineError::CorruptFile("trailing bytes in body".into()));
    }

    Ok(NormTable::from_layers(
        group,
        gens_summary,
        stored_fp,
        radius,
        layers,
    ))
}

fn read_line<'a>(data: &'a [u8], pos: &mut usize) -> Result<&'a str, EngineError> {
    let rest = &data[*pos..];
    let end = rest
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| EngineError::CorruptFile("missing header line".into()))?;
    let line = std::str::from_utf8(&rest[..end])
        .map_err(|_| EngineError::CorruptFile("non-utf8 header".into()))?;
    *pos += end + 1;
    Ok(line)
}

fn read_u64(body: &[u8], pos: &mut usize) -> Result<u64, EngineError> {
    let end = *pos + 8;
    if end > body.len() {
        return Err(EngineError::CorruptFile("truncated count".into()));
    }
    let v = u64::from_le_bytes(body[*pos..end].try_into().unwrap());
    *pos = end;
    Ok(v)
}

fn read_u32(body: &[u8], pos: &mut usize) -> Result<u32, EngineError> {
    let end = *pos + 4;
    if end > body.len() {
        return Err(EngineError::CorruptFile("truncated length".into()));
    }
    let v = u32::from_le_bytes(body[*pos..end].try_into().unwrap());
    *pos = end;
    Ok(v)
}
