use rayon::prelude::*;

use super::{ait, AitConfig, ExclusionScan};
use crate::error::Result;
use crate::record::SearchRecord;

/// Values `s` in `1..=(r+δ)/2` worth testing at `(r, δ)`, ascending.
pub fn search_candidates(r: u64, delta: u64, cfg: &AitConfig, primitive_target: bool) -> Result<Vec<u64>> {
    if delta == 1 {
        return Ok(Vec::new());
    }
    let scan = ExclusionScan::new(r, delta, primitive_target)?;
    if cfg.use_prefilter {
        Ok(scan.survivors())
    } else {
        Ok((1..=scan.n() / 2).collect())
    }
}

/// All `s <= (r+δ)/2` for which `x^(r+δ) + x^s + 1` has an irreducible factor of degree `r`.
pub fn search_ait(r: u64, delta: u64, cfg: &AitConfig) -> Result<Vec<SearchRecord>> {
    let candidates = search_candidates(r, delta, cfg, false)?;
    let found: Vec<Option<SearchRecord>> =
        candidates.par_iter().map(|&s| accept_record(r, s, delta, cfg)).collect::<Result<_>>()?;
    // par_iter preserves order, so the records are ascending in s
    Ok(found.into_iter().flatten().collect())
}

pub(crate) fn accept_record(r: u64, s: u64, delta: u64, cfg: &AitConfig) -> Result<Option<SearchRecord>> {
    let verdict = ait(r, s, delta, cfg)?;
    if !verdict.accepted {
        return Ok(None);
    }
    let small = match verdict.outcome.and_then(|o| o.small_product) {
        Some(small) => small,
        None => {
            let generic = AitConfig { use_mersenne_variant: false, ..*cfg };
            ait(r, s, delta, &generic)?.outcome.and_then(|o| o.small_product).expect("generic sieve forms S")
        }
    };
    SearchRecord::accepted(r, delta, s, &small, false).map(Some)
}
