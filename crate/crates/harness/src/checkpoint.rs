//! Binary checkpoints: `MAQ1`, a little-endian u32 length and that many
//! bytes of JSON (policy header plus training config), then a u64 weight
//! count and the weights as little-endian f32.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::HarnessError;
use crate::policy::QPolicy;
use crate::train::TrainConfig;

pub const MAGIC: &[u8; 4] = b"MAQ1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Header {
    policy: QPolicy,
    config: TrainConfig,
}

pub fn encode(policy: &QPolicy, config: &TrainConfig) -> Vec<u8> {
    let header = serde_json::to_vec(&Header {
        policy: policy.clone(),
        config: config.clone(),
    })
    .expect("header serializes");
    let mut out = Vec::with_capacity(16 + header.len() + 4 * policy.weights.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(header.len() as u32).to_le_bytes());
    out.extend_from_slice(&header);
    out.extend_from_slice(&(policy.weights.len() as u64).to_le_bytes());
    for w in &policy.weights {
        out.extend_from_slice(&w.to_le_bytes());
    }
    out
}

fn take<'a>(bytes: &mut &'a [u8], n: usize) -> Result<&'a [u8], HarnessError> {
    if bytes.len() < n {
        return Err(HarnessError::Checkpoint("truncated".into()));
    }
    let (head, rest) = bytes.split_at(n);
    *bytes = rest;
    Ok(head)
}

pub fn decode(mut bytes: &[u8]) -> Result<(QPolicy, TrainConfig), HarnessError> {
    if take(&mut bytes, 4)? != MAGIC {
        return Err(HarnessError::Checkpoint("missing MAQ1 magic".into()));
    }
    let len = u32::from_le_bytes(take(&mut bytes, 4)?.try_into().unwrap()) as usize;
    let header: Header = serde_json::from_slice(take(&mut bytes, len)?)
        .map_err(|e| HarnessError::Checkpoint(format!("header: {e}")))?;
    let count = u64::from_le_bytes(take(&mut bytes, 8)?.try_into().unwrap()) as usize;
    let mut policy = header.policy;
    policy
        .features
        .validate()
        .map_err(HarnessError::Checkpoint)?;
    let expected = policy.actions.len() * policy.features.table_size();
    if count != expected {
        return Err(HarnessError::Checkpoint(format!(
            "{count} weights, expected {expected}"
        )));
    }
    let raw = take(&mut bytes, 4 * count)?;
    if !bytes.is_empty() {
        return Err(HarnessError::Checkpoint("trailing bytes".into()));
    }
    policy.weights = raw
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((policy, header.config))
}

pub fn save(path: &Path, policy: &QPolicy, config: &TrainConfig) -> Result<(), HarnessError> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(&encode(policy, config))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<(QPolicy, TrainConfig), HarnessError> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    decode(&bytes)
}
