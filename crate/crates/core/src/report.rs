//! Report records and their JSON, CSV and text renderings.

use std::fmt::Write as _;
use std::fs;
use std::io::BufWriter;
use std::path::Path;

use serde::Serialize;

use crate::engine::{block_label, Engine, LadderReport};
use crate::error::Result;
use crate::verify::Check;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockReport {
    pub block: String,
    pub z: usize,
    pub b: usize,
    pub h: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hf: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub he: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub n: usize,
    pub z: usize,
    pub b: usize,
    pub h: usize,
    pub blocks: Vec<BlockReport>,
    pub predicted: Option<u64>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representatives: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub r: u16,
    pub s: u16,
    pub d: String,
    pub convention: String,
    pub degrees: Vec<DegreeReport>,
}

impl CohomologyReport {
    /// Dimensions for `n = 0..=n_max`, with the `Hf/He` split on the pair
    /// block and, if asked, explicit representatives.
    pub fn build(engine: &Engine, n_max: usize, representatives: bool) -> Result<Self> {
        let table = engine.ranks(n_max)?;
        let variant = engine.variant();
        let pair = variant.map(|v| v.pair());
        let mut degrees = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let dims = table.dims(n);
            let split = match variant {
                Some(_) => Some(engine.hf_he_dims(n)?),
                None => None,
            };
            let blocks = table
                .block_dims(n)
                .into_iter()
                .map(|blk| {
                    let is_pair = pair.is_some_and(|(u, t)| blk.targets.contains(&u) && blk.targets.contains(&t));
                    let (hf, he) = match (is_pair, split) {
                        (true, Some((hf, he))) => (Some(hf), Some(he)),
                        _ => (None, None),
                    };
                    BlockReport {
                        block: block_label(&blk.targets),
                        z: blk.dims.z,
                        b: blk.dims.b,
                        h: blk.dims.h,
                        hf,
                        he,
                    }
                })
                .collect();
            let predicted = variant.map(|v| v.predicted_h(n) as u64);
            let representatives = match representatives {
                true => Some(engine.cohomology_representatives(n)?.iter().map(|c| c.to_string()).collect()),
                false => None,
            };
            degrees.push(DegreeReport {
                n,
                z: dims.z,
                b: dims.b,
                h: dims.h,
                blocks,
                predicted,
                matches: predicted.map(|p| p == dims.h as u64),
                representatives,
            });
        }
        Ok(CohomologyReport {
            r: engine.basis().r(),
            s: engine.basis().s(),
            d: engine.codifferential().to_string(),
            convention: engine.codifferential().convention().to_string(),
            degrees,
        })
    }

    /// True when every degree has a prediction and matches it.
    pub fn all_match(&self) -> bool {
        self.degrees.iter().all(|d| d.matches == Some(true))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,z,b,h,predicted,match");
        if let Some(first) = self.degrees.first() {
            for blk in &first.blocks {
                write!(out, ",h_{}", blk.block).unwrap();
            }
        }
        out.push('\n');
        for d in &self.degrees {
            write!(out, "{},{},{},{},{},{}", d.n, d.z, d.b, d.h, opt(d.predicted), opt(d.matches)).unwrap();
            for blk in &d.blocks {
                write!(out, ",{}", blk.h).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("r={} s={} d={} convention={}\n", self.r, self.s, self.d, self.convention);
        writeln!(out, "{:>3} {:>8} {:>8} {:>8} {:>10} {:>6}  blocks", "n", "z", "b", "h", "predicted", "match")
            .unwrap();
        for d in &self.degrees {
            let blocks: Vec<String> = d
                .blocks
                .iter()
                .map(|b| match (b.hf, b.he) {
                    (Some(hf), Some(he)) => format!("{}:{} (hf {hf}, he {he})", b.block, b.h),
                    _ => format!("{}:{}", b.block, b.h),
                })
                .collect();
            writeln!(
                out,
                "{:>3} {:>8} {:>8} {:>8} {:>10} {:>6}  {}",
                d.n,
                d.z,
                d.b,
                d.h,
                opt(d.predicted),
                opt(d.matches),
                blocks.join(", ")
            )
            .unwrap();
            for rep in d.representatives.iter().flatten() {
                writeln!(out, "      {rep}").unwrap();
            }
        }
        out
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".into(), |x| x.to_string())
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub r: u16,
    pub s: u16,
    pub d: String,
    pub convention: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ladder: Option<LadderReport>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,passed,cases\n");
        for c in &self.checks {
            writeln!(out, "\"{}\",{},{}", c.name.replace('"', "'"), c.passed, c.cases).unwrap();
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("r={} s={} d={} convention={}\n", self.r, self.s, self.d, self.convention);
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{tag} {} ({} cases)", c.name, c.cases).unwrap();
            if !c.passed {
                writeln!(out, "     {}", c.detail).unwrap();
            }
        }
        if let Some(l) = &self.ladder {
            writeln!(out, "ladder: n  b^(n+1)+b^n  bound  h  (r+s-1)^n").unwrap();
            for row in &l.rows {
                writeln!(
                    out,
                    "        {}  {}  {}  {}  {}",
                    row.n, row.boundary_sum, row.boundary_bound, row.h, row.h_bound
                )
                .unwrap();
            }
        }
        out
    }
}

/// Writes `D_n` for `n = 0..=n_max` as triplet files `D{n}.txt` in `dir`.
pub fn dump_matrices(engine: &Engine, n_max: usize, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    for n in 0..=n_max {
        let m = engine.coboundary_matrix(n)?;
        let file = fs::File::create(dir.join(format!("D{n}.txt")))?;
        m.write_triplets(BufWriter::new(file))?;
    }
    Ok(())
}
