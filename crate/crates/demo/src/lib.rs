//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export takes plain text and returns a JSON string; failures come
//! back as `{"error": "..."}` so the page never has to catch exceptions.

use parlis::lis::{lis_ranks, reconstruct_lis};
use parlis::veb::VebTree;
use parlis::wlis::{reconstruct_wlis, wlis, Backend};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_N: usize = 200_000;

/// Integers separated by commas and/or whitespace.
pub fn parse_list(text: &str) -> Result<Vec<i64>, String> {
    let v: Vec<i64> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|_| format!("`{t}` is not an integer")))
        .collect::<Result<_, _>>()?;
    if v.is_empty() {
        return Err("the sequence is empty".into());
    }
    if v.len() > MAX_N {
        return Err(format!("at most {MAX_N} values, got {}", v.len()));
    }
    Ok(v)
}

pub fn lis_value(values: &str) -> Result<Value, String> {
    let values = parse_list(values)?;
    let r = lis_ranks(&values).map_err(|e| e.to_string())?;
    let witness = reconstruct_lis(&values, &r);
    Ok(json!({
        "values": values,
        "ranks": r.ranks,
        "k": r.k,
        "witness": witness,
        "rounds": r.counters.rounds,
        "visits": r.counters.tournament_visits,
    }))
}

pub fn wlis_value(values: &str, weights: &str, backend: &str) -> Result<Value, String> {
    let values = parse_list(values)?;
    let weights = parse_list(weights)?;
    let b = match backend {
        "range-tree" => Backend::RangeTree,
        "range-veb" => Backend::RangeVeb,
        other => return Err(format!("unknown backend `{other}`")),
    };
    let r = wlis(&values, &weights, b).map_err(|e| e.to_string())?;
    Ok(json!({
        "values": values,
        "weights": weights,
        "dp": r.dp,
        "best": r.best.score,
        "witness": reconstruct_wlis(&r),
        "rounds": r.counters.rounds,
        "veb_visits": r.counters.veb_visits,
    }))
}

fn key(tok: Option<&str>) -> Result<u64, String> {
    let t = tok.ok_or("missing key")?;
    t.parse().map_err(|_| format!("`{t}` is not a key"))
}

fn keys(rest: &[&str]) -> Result<Vec<u64>, String> {
    let mut v: Vec<u64> = rest.iter().map(|t| key(Some(t))).collect::<Result<_, _>>()?;
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

/// Runs a `;`- or newline-separated script of set commands on a fresh tree
/// over `[0, 2^bits)`. Commands: `insert x`, `delete x`, `batch-insert x..`,
/// `batch-delete x..`, `member x`, `pred x`, `succ x`, `range a b`, `min`,
/// `max`. Batches are sorted and deduplicated first; batch inserts skip
/// present keys and batch deletes skip absent ones.
pub fn veb_value(bits: u32, script: &str) -> Result<Value, String> {
    let mut t = VebTree::new(bits).map_err(|e| e.to_string())?;
    let mut log = Vec::new();
    for cmd in script.split([';', '\n']).map(str::trim).filter(|c| !c.is_empty()) {
        let toks: Vec<&str> = cmd.split_whitespace().collect();
        let err = |e: parlis::Error| format!("{cmd}: {e}");
        let answer: Value = match toks[0] {
            "insert" => json!(t.insert(key(toks.get(1).copied())?).map_err(err)?),
            "delete" => json!(t.delete(key(toks.get(1).copied())?).map_err(err)?),
            "batch-insert" => {
                let mut b = keys(&toks[1..])?;
                b.retain(|&k| !t.member(k).unwrap_or(true));
                json!({ "inserted": b.len(), "visits": t.batch_insert(&b).map_err(err)? })
            }
            "batch-delete" => {
                let mut b = keys(&toks[1..])?;
                b.retain(|&k| t.member(k).unwrap_or(false));
                json!({ "deleted": b.len(), "visits": t.batch_delete(&b).map_err(err)? })
            }
            "member" => json!(t.member(key(toks.get(1).copied())?).map_err(err)?),
            "pred" => json!(t.predecessor(key(toks.get(1).copied())?).map_err(err)?),
            "succ" => json!(t.successor(key(toks.get(1).copied())?).map_err(err)?),
            "range" => json!(t.range_query(key(toks.get(1).copied())?, key(toks.get(2).copied())?)),
            "min" => json!(t.min()),
            "max" => json!(t.max()),
            other => return Err(format!("unknown command `{other}`")),
        };
        log.push(json!({ "cmd": cmd, "answer": answer }));
    }
    Ok(json!({
        "log": log,
        "keys": t.keys(),
        "min": t.min(),
        "max": t.max(),
        "summary": t.summary_keys(),
    }))
}

fn render(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

/// Ranks, length and one witness of the longest increasing subsequence.
#[wasm_bindgen]
pub fn lis(values: &str) -> String {
    render(lis_value(values))
}

/// Weighted dp, best weight and one witness; `backend` is `range-tree` or
/// `range-veb`.
#[wasm_bindgen(js_name = wlis)]
pub fn wlis_js(values: &str, weights: &str, backend: &str) -> String {
    render(wlis_value(values, weights, backend))
}

/// Replays a set script on a vEB tree.
#[wasm_bindgen]
pub fn veb(bits: u32, script: &str) -> String {
    render(veb_value(bits, script))
}
