//! Exact placement of items inside a unit bin and non-overlap verification.
//!
//! Blue items occupy a `beta^d` grid anchored at the origin corner; red items
//! occupy the cells of that grid (sized by their own type) that touch the far
//! corner, so that a strip of width `gamma * t` along the far faces is enough
//! to hold them. Cells are sized by the type's upper boundary; the actual
//! item may be smaller and simply leaves slack inside its cell.

use crate::params::ParameterSet;
use crate::rat::{rat, rat_to_f64, Rat};
use num::{One, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    Blue,
    Red,
    Small,
}

impl std::fmt::Display for Color {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Color::Blue => "blue",
            Color::Red => "red",
            Color::Small => "small",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlacedItem {
    pub side: Rat,
    /// Minimum corner, one coordinate per axis.
    pub anchor: Vec<Rat>,
    pub color: Color,
    pub type_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinLayout {
    pub d: u32,
    pub items: Vec<PlacedItem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Items at these indices have intersecting interiors.
    Overlap(usize, usize),
    /// Item at this index leaves the unit bin.
    Containment(usize),
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Overlap(a, b) => write!(f, "items {} and {} overlap", a, b),
            Violation::Containment(a) => write!(f, "item {} escapes the bin", a),
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("slot {slot} out of range for type {type_index} ({role}, capacity {capacity})")]
pub struct SlotError {
    pub type_index: usize,
    pub slot: u64,
    pub capacity: u64,
    pub role: &'static str,
}

/// Anchor of blue slot `slot` in a type-`i` bin: cell coordinates are the
/// base-`beta_i` digits of the slot index (axis 1 most significant).
pub fn blue_slot(i: usize, slot: u64, p: &ParameterSet) -> Result<Vec<Rat>, SlotError> {
    let d = p.d();
    let beta = p.beta(i) as u64;
    let cap = beta.pow(d);
    if slot >= cap {
        return Err(SlotError {
            type_index: i,
            slot,
            capacity: cap,
            role: "blue",
        });
    }
    let t = p.upper(i);
    let mut anchor = Vec::with_capacity(d as usize);
    for axis in 0..d {
        let digit = (slot / beta.pow(d - 1 - axis)) % beta;
        anchor.push(rat(digit as i128, 1) * t);
    }
    Ok(anchor)
}

/// Cell coordinates of red slot `slot` for red type `j`: the cells of the
/// `beta_j^d` grid with at least one coordinate in the last `gamma_j` layers,
/// in lexicographic order.
pub fn red_cell(j: usize, slot: u64, p: &ParameterSet) -> Result<Vec<u32>, SlotError> {
    let d = p.d();
    let beta = p.beta(j) as u64;
    let gamma = p.gamma(j) as u64;
    let theta = p.theta(j);
    if slot >= theta {
        return Err(SlotError {
            type_index: j,
            slot,
            capacity: theta,
            role: "red",
        });
    }
    // Count, in lexicographic order, cells with some coordinate >= beta-gamma.
    // Prefixes that already contain a large coordinate contribute full
    // beta^(remaining) blocks; otherwise only the tail cells with a large
    // coordinate somewhere count.
    let inner = beta - gamma; // coordinates < inner are "small"
    let mut cell = vec![0u32; d as usize];
    let mut need = slot;
    let mut prefix_large = false;
    for axis in 0..d as usize {
        let rem = (d as usize - axis - 1) as u32;
        for c in 0..beta {
            let block = if prefix_large || c >= inner {
                beta.pow(rem)
            } else {
                beta.pow(rem) - inner.pow(rem)
            };
            if need < block {
                cell[axis] = c as u32;
                if c >= inner {
                    prefix_large = true;
                }
                break;
            }
            need -= block;
        }
    }
    Ok(cell)
}

/// Anchor of red slot `slot`: the red grid hangs off the far corner `(1,..,1)`.
pub fn red_slot(j: usize, slot: u64, p: &ParameterSet) -> Result<Vec<Rat>, SlotError> {
    let cell = red_cell(j, slot, p)?;
    let t = p.upper(j);
    let beta = p.beta(j);
    Ok(cell
        .iter()
        .map(|&c| Rat::one() - rat((beta - c) as i128, 1) * t)
        .collect())
}

/// Exact interior-disjointness and containment check.
///
/// Returns the first violation in index order: containment first, then the
/// lexicographically first overlapping pair. A float sweep rejects the bulk
/// of the pairs; any pair within the float margin is re-checked exactly.
pub fn verify(layout: &BinLayout) -> Result<(), Violation> {
    let d = layout.d as usize;
    let one = Rat::one();
    for (idx, it) in layout.items.iter().enumerate() {
        if it.side <= Rat::zero() || it.anchor.len() != d {
            return Err(Violation::Containment(idx));
        }
        for a in 0..d {
            if it.anchor[a] < Rat::zero() || it.anchor[a] + it.side > one {
                return Err(Violation::Containment(idx));
            }
        }
    }

    // Sweep along axis 0, candidates ordered by exact (anchor, index).
    let n = layout.items.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        layout.items[a].anchor[0]
            .cmp(&layout.items[b].anchor[0])
            .then(a.cmp(&b))
    });
    let lo_f: Vec<Vec<f64>> = layout
        .items
        .iter()
        .map(|it| it.anchor.iter().map(rat_to_f64).collect())
        .collect();
    let hi_f: Vec<Vec<f64>> = layout
        .items
        .iter()
        .map(|it| {
            it.anchor
                .iter()
                .map(|a| rat_to_f64(&(*a + it.side)))
                .collect()
        })
        .collect();
    const EPS: f64 = 1e-11;

    let mut best: Option<(usize, usize)> = None;
    let consider = |a: usize, b: usize, best: &mut Option<(usize, usize)>| {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        if let Some((x, y)) = *best {
            if (x, y) <= (a, b) {
                return;
            }
        }
        *best = Some((a, b));
    };

    let overlaps_exact = |a: usize, b: usize| -> bool {
        let ia = &layout.items[a];
        let ib = &layout.items[b];
        (0..d).all(|ax| {
            let lo = ia.anchor[ax].max(ib.anchor[ax]);
            let hi = (ia.anchor[ax] + ia.side).min(ib.anchor[ax] + ib.side);
            lo < hi
        })
    };

    let mut active: Vec<usize> = Vec::new();
    for &cur in &order {
        let cur_lo0 = &layout.items[cur].anchor[0];
        active.retain(|&other| {
            let other_hi0 = layout.items[other].anchor[0] + layout.items[other].side;
            other_hi0 > *cur_lo0
        });
        'others: for &other in &active {
            // float pre-filter on remaining axes
            for ax in 1..d {
                let lo = lo_f[cur][ax].max(lo_f[other][ax]);
                let hi = hi_f[cur][ax].min(hi_f[other][ax]);
                if hi - lo <= -EPS {
                    continue 'others;
                }
            }
            if overlaps_exact(cur, other) {
                consider(cur, other, &mut best);
            }
        }
        active.push(cur);
    }
    match best {
        Some((a, b)) => Err(Violation::Overlap(a, b)),
        None => Ok(()),
    }
}

/// Layout holding every blue slot of host `i` and every red slot of type `j`.
pub fn full_mixed_layout(i: usize, j: usize, p: &ParameterSet) -> BinLayout {
    let mut items = Vec::new();
    for s in 0..p.blue_capacity(i) {
        items.push(PlacedItem {
            side: p.upper(i),
            anchor: blue_slot(i, s, p).unwrap(),
            color: Color::Blue,
            type_index: i,
        });
    }
    for s in 0..p.theta(j) {
        items.push(PlacedItem {
            side: p.upper(j),
            anchor: red_slot(j, s, p).unwrap(),
            color: Color::Red,
            type_index: j,
        });
    }
    BinLayout {
        d: p.d(),
        items,
    }
}
