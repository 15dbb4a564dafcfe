//! Optional on-disk cache of oracle results. Entries are JSON files named by
//! the SHA-256 of the canonical parameter encoding and hold the parameters
//! next to the value, so any entry can be checked by recomputing it.

use std::fs;
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use regraph_core::estimates::ConditioningPair;

use crate::error::{HarnessError, HarnessResult};
use crate::parallel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Entry {
    params: Value,
    value: Value,
}

#[derive(Debug, Clone)]
pub struct OracleCache {
    dir: PathBuf,
}

/// Hex SHA-256 of the compact JSON encoding. `serde_json` maps keep their
/// keys sorted, which makes the encoding canonical.
pub fn cache_key(params: &Value) -> String {
    hex::encode(Sha256::digest(params.to_string().as_bytes()))
}

fn edges_json(g: &regraph_core::SimpleGraph) -> Value {
    Value::from(g.edge_pairs().into_iter().map(|(a, b)| vec![a, b]).collect::<Vec<_>>())
}

pub fn edge_prob_params(n: usize, d: usize, ctx: &ConditioningPair, u: usize, v: usize) -> Value {
    json!({
        "kind": "conditional-edge-probability",
        "n": n,
        "d": d,
        "h1": edges_json(ctx.required()),
        "h2": edges_json(ctx.forbidden()),
        "u": u,
        "v": v,
    })
}

impl OracleCache {
    pub fn new(dir: impl Into<PathBuf>) -> HarnessResult<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| HarnessError::io(&dir, e))?;
        Ok(OracleCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, params: &Value) -> PathBuf {
        self.dir.join(format!("{}.json", cache_key(params)))
    }

    /// The cached value, if an entry exists and its stored parameters match.
    pub fn get(&self, params: &Value) -> HarnessResult<Option<Value>> {
        let path = self.path(params);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(HarnessError::io(&path, e)),
        };
        let entry: Entry =
            serde_json::from_str(&text).map_err(|e| HarnessError::Encoding(format!("{}: {e}", path.display())))?;
        Ok((entry.params == *params).then_some(entry.value))
    }

    pub fn put(&self, params: &Value, value: Value) -> HarnessResult<()> {
        let path = self.path(params);
        let entry = Entry { params: params.clone(), value };
        let text = serde_json::to_string_pretty(&entry).map_err(|e| HarnessError::Encoding(e.to_string()))?;
        fs::write(&path, text + "\n").map_err(|e| HarnessError::io(&path, e))
    }
}

fn parse_rational(v: &Value) -> Option<BigRational> {
    v.as_str()?.parse().ok()
}

/// Exact `P(uv | ctx)`, read from `cache` when present and written back
/// after computing otherwise.
pub fn cached_edge_prob(
    cache: Option<&OracleCache>,
    n: usize,
    d: usize,
    ctx: &ConditioningPair,
    u: usize,
    v: usize,
) -> HarnessResult<BigRational> {
    let Some(cache) = cache else {
        return parallel::exact_conditional_edge_prob(n, d, ctx, u, v);
    };
    let params = edge_prob_params(n, d, ctx, u, v);
    if let Some(hit) = cache.get(&params)?.as_ref().and_then(parse_rational) {
        return Ok(hit);
    }
    let p = parallel::exact_conditional_edge_prob(n, d, ctx, u, v)?;
    cache.put(&params, Value::from(p.to_string()))?;
    Ok(p)
}
