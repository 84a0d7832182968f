//! Forbidden cycles that use only the labels `1` and `δ`.
//!
//! Cell `(i, j)` stands for the cycles with `i` edges of length `δ` and `j`
//! edges of length `1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::params::{AdmissibilityCase, ParameterSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OneDeltaTag {
    K1,
    NonMetric,
    K2,
    C,
    C0,
    C1,
    #[serde(rename = "C1_5")]
    C1Five,
}

impl OneDeltaTag {
    /// Short symbol used in the text table.
    pub fn symbol(self) -> &'static str {
        match self {
            OneDeltaTag::K1 => "K1",
            OneDeltaTag::NonMetric => "δ",
            OneDeltaTag::K2 => "K2",
            OneDeltaTag::C => "C",
            OneDeltaTag::C0 => "C0",
            OneDeltaTag::C1 => "C1",
            OneDeltaTag::C1Five => "C1^5",
        }
    }
}

impl fmt::Display for OneDeltaTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// The family forbidding the cycles of cell `(i, j)`, if any. Cells with
/// `i + j < 3` are not cycles and get `None`.
pub fn classify_1d(p: &ParameterSequence, i: u32, j: u32) -> Option<OneDeltaTag> {
    if i + j < 3 {
        return None;
    }
    let (delta, k1, k2) = (i64::from(p.delta()), i64::from(p.k1()), i64::from(p.k2()));
    let (c, c0, c1) = (i64::from(p.c()), i64::from(p.c0()), i64::from(p.c1()));
    let (ii, jj) = (i64::from(i), i64::from(j));

    if i == 0 && j % 2 == 1 && jj < 2 * k1 {
        return Some(OneDeltaTag::K1);
    }
    if i == 1 && jj < delta {
        return Some(OneDeltaTag::NonMetric);
    }
    if i >= 2 && i.is_multiple_of(2) && j % 2 == 1 && 2 * jj < 2 * c - 4 * k2 - 2 - (c - 1 - 2 * delta) * ii {
        return Some(OneDeltaTag::K2);
    }
    if p.c_prime() == p.c() + 1 {
        if i >= 3 && i % 2 == 1 && 2 * jj < c - 1 - (c - 1 - 2 * delta) * ii {
            return Some(OneDeltaTag::C);
        }
        return None;
    }
    if i == 3 {
        let (bound, tag) = if (delta + jj) % 2 == 0 { (c0, OneDeltaTag::C0) } else { (c1, OneDeltaTag::C1) };
        if 2 * jj < bound - 1 - (bound - 1 - 2 * delta) * 3 {
            return Some(tag);
        }
    }
    if i == 5 && j == 0 && delta == 5 && p.case() == AdmissibilityCase::CaseIIB {
        return Some(OneDeltaTag::C1Five);
    }
    None
}

/// All tagged cells of one parameter sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneDeltaTable {
    params: ParameterSequence,
    cells: BTreeMap<(u32, u32), OneDeltaTag>,
}

impl OneDeltaTable {
    pub fn new(p: &ParameterSequence) -> Result<Self> {
        p.require_admissible()?;
        // every inequality fails once i or j reaches 2C
        let limit = 2 * p.c();
        let mut cells = BTreeMap::new();
        for i in 0..=limit {
            for j in 0..=limit {
                if let Some(tag) = classify_1d(p, i, j) {
                    cells.insert((i, j), tag);
                }
            }
        }
        Ok(Self { params: *p, cells })
    }

    pub fn params(&self) -> &ParameterSequence {
        &self.params
    }

    pub fn tag(&self, i: u32, j: u32) -> Option<OneDeltaTag> {
        self.cells.get(&(i, j)).copied()
    }

    pub fn cells(&self) -> &BTreeMap<(u32, u32), OneDeltaTag> {
        &self.cells
    }

    pub fn cell_set(&self) -> BTreeSet<(u32, u32)> {
        self.cells.keys().copied().collect()
    }

    pub fn transposed_cell_set(&self) -> BTreeSet<(u32, u32)> {
        self.cells.keys().map(|&(i, j)| (j, i)).collect()
    }

    /// Largest index on either axis; the rendered table is square.
    pub fn side(&self) -> u32 {
        self.cells.keys().map(|&(i, j)| i.max(j)).max().unwrap_or(2)
    }

    /// Fixed-width text table. Rows are `0δ, 1δ, ...`, columns count the
    /// edges of length 1. Cells with `i + j < 3` are left blank, empty cells
    /// in the support are shown as `.`.
    pub fn render_text(&self) -> String {
        const W: usize = 5;
        let side = self.side();
        let mut out = String::new();
        let _ = write!(out, "{:>W$}", "");
        for j in 0..=side {
            let _ = write!(out, "{j:>W$}");
        }
        out.push('\n');
        for i in 0..=side {
            let _ = write!(out, "{:>W$}", format!("{i}δ"));
            for j in 0..=side {
                let cell = match self.tag(i, j) {
                    _ if i + j < 3 => "",
                    Some(tag) => tag.symbol(),
                    None => ".",
                };
                let _ = write!(out, "{cell:>W$}");
            }
            // no trailing whitespace
            let trimmed = out.trim_end().len();
            out.truncate(trimmed);
            out.push('\n');
        }
        out
    }
}

#[derive(Serialize)]
struct CellRecord {
    i: u32,
    j: u32,
    tag: OneDeltaTag,
}

impl Serialize for OneDeltaTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            params: &'a ParameterSequence,
            side: u32,
            cells: Vec<CellRecord>,
        }
        let cells = self.cells.iter().map(|(&(i, j), &tag)| CellRecord { i, j, tag }).collect();
        Repr { params: &self.params, side: self.side(), cells }.serialize(serializer)
    }
}

/// Whether the tagged cells of `p1` are exactly the transposed tagged cells
/// of `p2`. Tags themselves are ignored.
pub fn is_twisted_pair(p1: &ParameterSequence, p2: &ParameterSequence) -> Result<bool> {
    let (a, b) = (OneDeltaTable::new(p1)?, OneDeltaTable::new(p2)?);
    Ok(a.cell_set() == b.transposed_cell_set())
}
