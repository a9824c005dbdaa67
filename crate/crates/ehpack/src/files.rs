//! On-disk formats: item streams, packings and stats blocks.
//!
//! A stream file holds one size per line (`p/q` or decimal), `#` starts a
//! comment. A packing file starts with a `d N label` header, holds one line
//! per item (`bin_id type color side anchor_1 .. anchor_d`, rationals as
//! `p/q`), and may end with a `[stats]` block that `verify` cross-checks.

use crate::geometry::{BinLayout, Color, PlacedItem, Violation};
use crate::packer::{PackerState, PackingStats};
use crate::params::ParameterSet;
use crate::rat::{parse_rat, Rat};
use std::collections::BTreeMap;
use std::io::{BufRead, Write};

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn perr(line: usize, msg: impl Into<String>) -> FileError {
    FileError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Reads an item stream; lines after `#` are comments.
pub fn read_stream(reader: impl BufRead) -> Result<Vec<Rat>, FileError> {
    let mut out = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let body = match line.find('#') {
            Some(p) => &line[..p],
            None => &line[..],
        }
        .trim();
        if body.is_empty() {
            continue;
        }
        out.push(parse_rat(body).map_err(|e| perr(lineno + 1, e.to_string()))?);
    }
    Ok(out)
}

pub fn read_stream_file(path: &std::path::Path) -> Result<Vec<Rat>, FileError> {
    let f = std::fs::File::open(path)?;
    read_stream(std::io::BufReader::new(f))
}

fn fmt_rat(r: &Rat) -> String {
    if *r.denom() == 1 {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Stats block: one line per type, then a `Y q e total` summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatsBlock {
    /// `(n, e, b, r)` per type, 1-based.
    pub per_type: Vec<(u64, u64, u64, u64)>,
    pub y: u64,
    pub q: usize,
    pub e_idx: usize,
    pub total: u64,
}

impl StatsBlock {
    pub fn from_stats(stats: &PackingStats) -> Self {
        let per_type = (1..=stats.n_types)
            .map(|i| (stats.n[i], stats.e[i], stats.b[i], stats.r[i]))
            .collect();
        StatsBlock {
            per_type,
            y: stats.y,
            q: stats.q,
            e_idx: stats.e_idx,
            total: stats.total_bins,
        }
    }

    pub fn write(&self, w: &mut impl Write) -> std::io::Result<()> {
        for (i, (n, e, b, r)) in self.per_type.iter().enumerate() {
            writeln!(w, "{} {} {} {} {}", i + 1, n, e, b, r)?;
        }
        writeln!(w, "{} {} {} {}", self.y, self.q, self.e_idx, self.total)
    }

    /// First field that disagrees, as a human-readable description.
    pub fn diff(&self, other: &StatsBlock) -> Option<String> {
        for (i, (a, b)) in self.per_type.iter().zip(&other.per_type).enumerate() {
            if a != b {
                return Some(format!("type {}: {:?} vs {:?}", i + 1, a, b));
            }
        }
        if self.per_type.len() != other.per_type.len() {
            return Some("different type counts".into());
        }
        if self.y != other.y {
            return Some(format!("Y: {} vs {}", self.y, other.y));
        }
        if self.q != other.q {
            return Some(format!("q: {} vs {}", self.q, other.q));
        }
        if self.e_idx != other.e_idx {
            return Some(format!("e: {} vs {}", self.e_idx, other.e_idx));
        }
        if self.total != other.total {
            return Some(format!("total: {} vs {}", self.total, other.total));
        }
        None
    }
}

/// Writes the packing (and its stats footer) of a recorded run.
pub fn write_packing(
    w: &mut impl Write,
    state: &PackerState,
    stats: &PackingStats,
) -> std::io::Result<()> {
    writeln!(
        w,
        "{} {} {}",
        state.params.d(),
        state.params.n(),
        state.params.label
    )?;
    for bin_id in 0..state.bins.len() as u32 {
        let layout = state.bin_layout(bin_id);
        for item in &layout.items {
            write!(w, "{} {} {} {}", bin_id, item.type_index, item.color, fmt_rat(&item.side))?;
            for a in &item.anchor {
                write!(w, " {}", fmt_rat(a))?;
            }
            writeln!(w)?;
        }
    }
    writeln!(w, "[stats]")?;
    StatsBlock::from_stats(stats).write(w)
}

#[derive(Debug, Clone)]
pub struct ParsedPacking {
    pub d: u32,
    pub n_types: usize,
    pub label: String,
    /// Items per bin id, in file order.
    pub bins: BTreeMap<u32, Vec<PlacedItem>>,
    pub stats: Option<StatsBlock>,
}

pub fn read_packing(reader: impl BufRead) -> Result<ParsedPacking, FileError> {
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| perr(1, "empty packing file"))?;
    let header = header?;
    let hf: Vec<&str> = header.split_whitespace().collect();
    if hf.len() != 3 {
        return Err(perr(1, "header must be `d N label`"));
    }
    let d: u32 = hf[0].parse().map_err(|_| perr(1, "bad dimension"))?;
    let n_types: usize = hf[1].parse().map_err(|_| perr(1, "bad type count"))?;
    let label = hf[2].to_string();

    let mut bins: BTreeMap<u32, Vec<PlacedItem>> = BTreeMap::new();
    let mut stats_lines: Vec<(usize, String)> = Vec::new();
    let mut in_stats = false;
    for (lineno, line) in lines {
        let lineno = lineno + 1;
        let line = line?;
        let body = line.trim();
        if body.is_empty() {
            continue;
        }
        if body == "[stats]" {
            in_stats = true;
            continue;
        }
        if in_stats {
            stats_lines.push((lineno, body.to_string()));
            continue;
        }
        let f: Vec<&str> = body.split_whitespace().collect();
        if f.len() != 4 + d as usize {
            return Err(perr(lineno, format!("expected {} fields", 4 + d)));
        }
        let bin_id: u32 = f[0].parse().map_err(|_| perr(lineno, "bad bin id"))?;
        let type_index: usize = f[1].parse().map_err(|_| perr(lineno, "bad type"))?;
        let color = match f[2] {
            "blue" => Color::Blue,
            "red" => Color::Red,
            "small" => Color::Small,
            other => return Err(perr(lineno, format!("bad color `{}`", other))),
        };
        let side = parse_rat(f[3]).map_err(|e| perr(lineno, e.to_string()))?;
        let mut anchor = Vec::with_capacity(d as usize);
        for s in &f[4..] {
            anchor.push(parse_rat(s).map_err(|e| perr(lineno, e.to_string()))?);
        }
        bins.entry(bin_id).or_default().push(PlacedItem {
            side,
            anchor,
            color,
            type_index,
        });
    }

    let stats = if stats_lines.is_empty() {
        None
    } else {
        let mut per_type = Vec::new();
        let mut summary = None;
        for (lineno, body) in &stats_lines {
            let f: Vec<&str> = body.split_whitespace().collect();
            let nums: Result<Vec<u64>, _> = f.iter().map(|s| s.parse::<u64>()).collect();
            let nums = nums.map_err(|_| perr(*lineno, "bad stats line"))?;
            match nums.len() {
                5 => per_type.push((nums[1], nums[2], nums[3], nums[4])),
                4 => summary = Some(nums),
                _ => return Err(perr(*lineno, "stats lines have 5 fields (4 for summary)")),
            }
        }
        let summary =
            summary.ok_or_else(|| perr(stats_lines.last().unwrap().0, "missing summary"))?;
        Some(StatsBlock {
            per_type,
            y: summary[0],
            q: summary[1] as usize,
            e_idx: summary[2] as usize,
            total: summary[3],
        })
    };
    Ok(ParsedPacking {
        d,
        n_types,
        label,
        bins,
        stats,
    })
}

pub fn read_packing_file(path: &std::path::Path) -> Result<ParsedPacking, FileError> {
    let f = std::fs::File::open(path)?;
    read_packing(std::io::BufReader::new(f))
}

impl ParsedPacking {
    pub fn layout_of(&self, bin_id: u32) -> BinLayout {
        BinLayout {
            d: self.d,
            items: self.bins[&bin_id].clone(),
        }
    }

    /// Geometric verification of every bin; first failure wins.
    pub fn verify_all(&self) -> Result<(), (u32, Violation)> {
        for (&bin_id, _) in &self.bins {
            if let Err(v) = crate::geometry::verify(&self.layout_of(bin_id)) {
                return Err((bin_id, v));
            }
        }
        Ok(())
    }

    /// Re-derives the stats block from the items; bin kinds (and so `q`/`e`)
    /// need the parameter set.
    pub fn derive_stats(&self, params: &ParameterSet) -> StatsBlock {
        let n = self.n_types;
        let mut per_type = vec![(0u64, 0u64, 0u64, 0u64); n + 1];
        let mut y = 0u64;
        let mut blue_open_count = vec![0u64; n + 1];
        let mut red_open = vec![false; n + 1];
        for items in self.bins.values() {
            let mut blue_type = None;
            let mut red_type = None;
            for it in items {
                match it.color {
                    Color::Blue => {
                        per_type[it.type_index].0 += 1;
                        blue_type = Some(it.type_index);
                    }
                    Color::Red => {
                        per_type[it.type_index].0 += 1;
                        per_type[it.type_index].1 += 1;
                        red_type = Some(it.type_index);
                    }
                    Color::Small => {}
                }
            }
            match (blue_type, red_type) {
                (Some(i), Some(j)) => {
                    per_type[i].2 += 1;
                    per_type[j].3 += 1;
                    y += 1;
                }
                (Some(i), None) => {
                    per_type[i].2 += 1;
                    if params.phi(i) != 0 {
                        blue_open_count[i] += 1;
                    }
                }
                (None, Some(j)) => {
                    per_type[j].3 += 1;
                    red_open[j] = true;
                }
                (None, None) => {}
            }
        }
        let paper_shape = n == 151;
        let mut q = 1usize;
        for i in 1..=n {
            if blue_open_count[i] == 0 {
                continue;
            }
            let idx = if paper_shape {
                match i {
                    1..=17 => i,
                    22..=28 => i - 20,
                    _ => continue,
                }
            } else {
                i
            };
            q = q.max(idx);
        }
        let e_idx = (1..=n).filter(|&j| red_open[j]).max().unwrap_or(0);
        StatsBlock {
            per_type: per_type[1..].to_vec(),
            y,
            q,
            e_idx,
            total: self.bins.len() as u64,
        }
    }
}
