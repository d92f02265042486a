//! One line of search output: a trinomial, its verdict and its small part.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::apt::{f_factor, period_of_small};
use crate::error::{Error, Result};
use crate::numtheory::mersenne;
use crate::poly::{factor, DensePoly};

/// Irreducible or primitive target.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Ait,
    #[default]
    Apt,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Ait => "ait",
            Mode::Apt => "apt",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ait" => Ok(Mode::Ait),
            "apt" => Ok(Mode::Apt),
            other => Err(Error::Precondition(format!("unknown mode {other:?}; expected ait or apt"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub r: u64,
    pub delta: u64,
    pub s: u64,
    pub accepted: bool,
    /// Which test the verdict refers to; rows without the field are apt rows.
    #[serde(default)]
    pub mode: Mode,
    /// Irreducible factors of `S` in human form, by ascending degree.
    pub small_factors: Vec<String>,
    /// Decimal `f` with `ρ = (2^r - 1) f`; the contribution of `S`'s period.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    /// Bit length of the period `ρ`; only known once the large factor is primitive.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_bits: Option<u64>,
}

impl SearchRecord {
    /// Record for an accepted trinomial with small part `small`. `primitive`
    /// says whether the degree-r factor is known to be primitive.
    pub fn accepted(r: u64, delta: u64, s: u64, small: &DensePoly, primitive: bool) -> Result<Self> {
        let small_factors = factor(small)?.into_iter().map(|(p, _)| p.to_string()).collect();
        let f = f_factor(r, &period_of_small(small)?);
        let rho_bits = primitive.then(|| (mersenne(r) * &f).bits());
        let mode = if primitive { Mode::Apt } else { Mode::Ait };
        Ok(Self { r, delta, s, accepted: true, mode, small_factors, f: Some(f.to_string()), rho_bits })
    }

    pub fn rejected(r: u64, delta: u64, s: u64, mode: Mode) -> Self {
        Self { r, delta, s, accepted: false, mode, small_factors: Vec::new(), f: None, rho_bits: None }
    }

    pub fn n(&self) -> u64 {
        self.r + self.delta
    }

    pub fn f_value(&self) -> Result<Option<BigUint>> {
        self.f
            .as_deref()
            .map(|f| f.parse::<BigUint>().map_err(|e| Error::Precondition(format!("bad f {f:?}: {e}"))))
            .transpose()
    }

    /// The small factors, parsed and sorted.
    pub fn small_factor_polys(&self) -> Result<Vec<DensePoly>> {
        let mut v = self.small_factors.iter().map(|s| s.parse()).collect::<Result<Vec<DensePoly>>>()?;
        v.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
        Ok(v)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

/// Reads one record per nonblank line; `#` starts a comment line.
pub fn read_jsonl(reader: impl BufRead) -> Result<Vec<SearchRecord>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Precondition(format!("read error: {e}")))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let rec =
            serde_json::from_str(line).map_err(|e| Error::Precondition(format!("record on line {}: {e}", i + 1)))?;
        out.push(rec);
    }
    Ok(out)
}

pub fn write_jsonl(mut w: impl Write, records: &[SearchRecord]) -> std::io::Result<()> {
    for r in records {
        writeln!(w, "{}", r.to_json_line())?;
    }
    Ok(())
}

/// Summary of one command-line run, written next to its output.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub tool_version: String,
    pub elapsed_ms: u64,
    pub records: Vec<SearchRecord>,
}
