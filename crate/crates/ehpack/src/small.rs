//! Packing of items with side at most `1/M` by recursive sub-bin partition.
//!
//! An item of side `s` is scaled by the largest power of two that keeps it
//! under the threshold and classified by the scaled size into one of the
//! types `M..=2M-1`. Each type has at most one active bin. A fresh bin is
//! pre-split into an `i^d` grid of side-`1/i` cells; cells are then halved
//! per axis (lazily) down to the side the item needs.
//!
//! Sub-bins are addressed by integer keys: along each axis,
//! `key = cell_coordinate * 2^depth + path_bits`, so the anchor of a
//! depth-`j` sub-bin of type `i` is `key / (2^j * i)` per axis. Key order is
//! anchor order, which makes the tie-break (lexicographically first free
//! sub-bin) a `BTreeSet` pop.

use crate::rat::{big, rat, BigRat, Rat};
use num::{One, Zero};
use std::collections::BTreeSet;

pub type SubKey = [u64; 3];

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SmallError {
    #[error("size {0} is not in (0, 1/{1}]")]
    OutOfRange(Rat, u32),
}

/// Where one small item went.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallPlacement {
    pub bin_id: u32,
    /// Small type `i` in `M..=2M-1`.
    pub small_type: u32,
    /// Scale exponent `k`: the item sits in a sub-bin of side `1/(2^k i)`.
    pub scale: u32,
    pub key: SubKey,
    /// Bin id closed by this arrival, if any.
    pub closed: Option<u32>,
    /// True when `bin_id` was opened by this arrival.
    pub opened: bool,
}

/// A bin that failed the closed-bin occupied-volume bound.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeDeficit {
    pub bin_id: u32,
    pub small_type: u32,
    pub occupied: BigRat,
    pub bound: BigRat,
}

struct ActiveBin {
    bin_id: u32,
    /// Top-level grid cells consumed so far (they are taken in anchor order).
    fresh_used: u64,
    grid_cells: u64,
    /// Free sub-bins per depth (index 0 unused; depth-0 cells are `fresh`).
    free: Vec<BTreeSet<SubKey>>,
    /// Occupied leaves per depth, for the tiling invariant.
    occupied: Vec<u64>,
    /// Item sides with multiplicity (few distinct sides per bin).
    sizes: Vec<(Rat, u64)>,
    items: u64,
}

impl ActiveBin {
    fn new(bin_id: u32, small_type: u32, d: u32) -> Self {
        ActiveBin {
            bin_id,
            fresh_used: 0,
            grid_cells: (small_type as u64).pow(d),
            free: Vec::new(),
            occupied: Vec::new(),
            sizes: Vec::new(),
            items: 0,
        }
    }

    fn free_at(&self, depth: usize) -> bool {
        if depth == 0 {
            self.fresh_used < self.grid_cells
        } else {
            self.free.get(depth).is_some_and(|s| !s.is_empty())
        }
    }

    fn pop_free(&mut self, depth: usize, small_type: u32, d: u32) -> SubKey {
        if depth == 0 {
            let c = self.fresh_used;
            self.fresh_used += 1;
            let i = small_type as u64;
            let mut key = [0u64; 3];
            let mut rest = c;
            for axis in (0..d as usize).rev() {
                key[axis] = rest % i;
                rest /= i;
            }
            key
        } else {
            self.free[depth].pop_first().unwrap()
        }
    }

    /// Splits `key` (a free sub-bin at `from`) down to `to`, keeping the
    /// origin-corner child at each level and freeing the siblings.
    fn split_down(&mut self, mut key: SubKey, from: usize, to: usize, d: u32) -> SubKey {
        if self.free.len() <= to {
            self.free.resize_with(to + 1, BTreeSet::new);
        }
        for depth in from..to {
            for mask in 1u64..(1 << d) {
                let mut sib = [0u64; 3];
                for (axis, s) in sib.iter_mut().enumerate().take(d as usize) {
                    *s = key[axis] * 2 + ((mask >> axis) & 1);
                }
                self.free[depth + 1].insert(sib);
            }
            for k in key.iter_mut().take(d as usize) {
                *k *= 2;
            }
        }
        key
    }

    fn occupy(&mut self, depth: usize, side: Rat) {
        if self.occupied.len() <= depth {
            self.occupied.resize(depth + 1, 0);
        }
        self.occupied[depth] += 1;
        match self.sizes.iter_mut().find(|(s, _)| *s == side) {
            Some((_, c)) => *c += 1,
            None => self.sizes.push((side, 1)),
        }
        self.items += 1;
    }

    fn occupied_volume(&self, d: u32) -> BigRat {
        let mut total = BigRat::zero();
        for (side, count) in &self.sizes {
            let mut v = big(side);
            for _ in 1..d {
                v *= big(side);
            }
            total += v * BigRat::from_integer((*count).into());
        }
        total
    }

    /// Sum of leaf volumes (fresh + free + occupied); must be exactly 1.
    fn tiling_sum(&self, small_type: u32, d: u32) -> BigRat {
        let i = small_type as i128;
        let cell = big(&rat(1, i));
        let mut total = crate::rat::pow_d_big(&cell, d)
            * BigRat::from_integer((self.grid_cells - self.fresh_used).into());
        for (depth, set) in self.free.iter().enumerate() {
            if set.is_empty() {
                continue;
            }
            let side = big(&rat(1, i << depth));
            total += crate::rat::pow_d_big(&side, d)
                * BigRat::from_integer(set.len().into());
        }
        for (depth, count) in self.occupied.iter().enumerate() {
            if *count == 0 {
                continue;
            }
            let side = big(&rat(1, i << depth));
            total += crate::rat::pow_d_big(&side, d) * BigRat::from_integer((*count).into());
        }
        total
    }
}

/// Minimum occupied volume of a closed type-`i` bin: `(i^d - 1) / (i+1)^d`.
pub fn closed_volume_bound(small_type: u32, d: u32) -> BigRat {
    let i = BigRat::from_integer(small_type.into());
    let num = crate::rat::pow_d_big(&i, d) - BigRat::one();
    let den = crate::rat::pow_d_big(&(i + BigRat::one()), d);
    num / den
}

pub struct SmallState {
    m: u32,
    d: u32,
    active: Vec<Option<ActiveBin>>,
    /// Bins that failed the closed-volume bound (empty in a correct run).
    pub deficits: Vec<VolumeDeficit>,
    pub bins_opened: u64,
    pub bins_closed: u64,
}

impl SmallState {
    pub fn new(m: u32, d: u32) -> Self {
        SmallState {
            m,
            d,
            active: (0..m).map(|_| None).collect(),
            deficits: Vec::new(),
            bins_opened: 0,
            bins_closed: 0,
        }
    }

    pub fn active_bins(&self) -> usize {
        self.active.iter().filter(|a| a.is_some()).count()
    }

    /// Scale exponent and small type of a size in `(0, 1/M]`.
    pub fn classify(&self, s: &Rat) -> Result<(u32, u32), SmallError> {
        classify_small(s, self.m)
    }

    /// Packs one item, allocating bin ids through `alloc`.
    pub fn place(
        &mut self,
        s: Rat,
        alloc: impl FnMut() -> u32,
    ) -> Result<SmallPlacement, SmallError> {
        let class = classify_small(&s, self.m)?;
        Ok(self.place_classified(class, s, alloc))
    }

    /// As `place`, with the `(i, k)` classification already known.
    pub fn place_classified(
        &mut self,
        (i, k): (u32, u32),
        s: Rat,
        mut alloc: impl FnMut() -> u32,
    ) -> SmallPlacement {
        let slot = (i - self.m) as usize;
        let d = self.d;
        let k = k as usize;

        let mut closed = None;
        let mut opened = false;
        if let Some(bin) = &self.active[slot] {
            // Close when nothing at depths 0..=k is free.
            if !(0..=k).any(|j| bin.free_at(j)) {
                let old = self.active[slot].take().unwrap();
                closed = Some(self.close(old, i));
            }
        }
        if self.active[slot].is_none() {
            let bin = ActiveBin::new(alloc(), i, d);
            self.bins_opened += 1;
            opened = true;
            self.active[slot] = Some(bin);
        }

        let bin = self.active[slot].as_mut().unwrap();
        // Deepest free sub-bin not deeper than k; prefer exactly k.
        let depth = if bin.free_at(k) {
            k
        } else {
            (0..k)
                .rev()
                .find(|&j| bin.free_at(j))
                .expect("a fresh bin always has free cells")
        };
        let key = bin.pop_free(depth, i, d);
        let key = bin.split_down(key, depth, k, d);
        bin.occupy(k, s);
        SmallPlacement {
            bin_id: bin.bin_id,
            small_type: i,
            scale: k as u32,
            key,
            closed,
            opened,
        }
    }

    fn close(&mut self, bin: ActiveBin, small_type: u32) -> u32 {
        self.bins_closed += 1;
        let occupied = bin.occupied_volume(self.d);
        let bound = closed_volume_bound(small_type, self.d);
        if occupied < bound {
            self.deficits.push(VolumeDeficit {
                bin_id: bin.bin_id,
                small_type,
                occupied,
                bound,
            });
        }
        bin.bin_id
    }

    /// Tiling invariant of every active bin: leaves partition the bin exactly.
    pub fn check_tiling(&self) -> bool {
        self.active.iter().enumerate().all(|(slot, bin)| match bin {
            Some(b) => b.tiling_sum(self.m + slot as u32, self.d) == BigRat::one(),
            None => true,
        })
    }
}

/// `(i, k)`: `k` maximal with `2^k s <= 1/M`, then `2^k s` lands in
/// `(1/(i+1), 1/i]` for a unique `i` in `M..=2M-1`.
pub fn classify_small(s: &Rat, m: u32) -> Result<(u32, u32), SmallError> {
    let threshold = rat(1, m as i128);
    if *s <= Rat::zero() || *s > threshold {
        return Err(SmallError::OutOfRange(*s, m));
    }
    let mut k = 0u32;
    let mut scaled = *s;
    while scaled + scaled <= threshold {
        scaled = scaled + scaled;
        k += 1;
    }
    let i = (scaled.recip().floor()).to_integer() as u32;
    debug_assert!(i >= m && i < 2 * m, "i = {i} out of [{m}, {})", 2 * m);
    Ok((i, k))
}

/// Anchor of the sub-bin `key` at scale `k` for small type `i`.
pub fn anchor_of(small_type: u32, scale: u32, key: &SubKey, d: u32) -> Vec<Rat> {
    let den = (small_type as i128) << scale;
    (0..d as usize).map(|a| rat(key[a] as i128, den)).collect()
}

/// Side of a scale-`k` sub-bin of type `i`.
pub fn subbin_side(small_type: u32, scale: u32) -> Rat {
    rat(1, (small_type as i128) << scale)
}
