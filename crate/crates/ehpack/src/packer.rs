//! The online packer: classify, color and place each arriving item.
//!
//! Dispatch follows the fixed priority order: red items first try the open
//! red slot of their own type, then convert a blue bin whose strip is wide
//! enough (smallest adequate strip, then lowest bin id), then open a new
//! red bin. Blue items mirror this against red-open bins (lowest bin id).
//! Items of side at most `1/M` go to the sub-bin packer.

use crate::geometry::{self, BinLayout, Color, PlacedItem};
use crate::params::ParameterSet;
use crate::rat::{big, BigRat, Rat};
use crate::small::{self, SmallState};
use num::{One, Zero};
use std::collections::{BTreeMap, HashMap, VecDeque};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ItemClass {
    Large(usize),
    Small,
}

#[derive(Debug, thiserror::Error)]
pub enum PackError {
    #[error("item {index}: size {size} is not in (0, 1]")]
    BadSize { index: u64, size: Rat },
}

/// Classifies a size into its large type or `Small` (side <= 1/M).
pub fn classify(size: &Rat, p: &ParameterSet) -> Result<ItemClass, PackError> {
    if *size <= Rat::zero() || *size > Rat::one() {
        return Err(PackError::BadSize {
            index: 0,
            size: *size,
        });
    }
    if *size <= p.intervals.small_threshold() {
        return Ok(ItemClass::Small);
    }
    // Largest i with t[i] >= size; boundaries are strictly decreasing.
    let t = &p.intervals.t;
    let mut lo = 1usize; // t[lo] >= size holds (t[1] = 1)
    let mut hi = p.n() + 1; // t[hi] < size here (size > 1/M)
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if t[mid] >= *size {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ItemClass::Large(lo))
}

const TAG_PLAIN: u8 = 0;
const TAG_BLUE_OPEN: u8 = 1;
const TAG_RED_OPEN: u8 = 2;
const TAG_MIXED: u8 = 3;
const TAG_SMALL: u8 = 4;

/// Compact per-bin state; sixteen bytes so multi-million-bin runs stay cheap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinRecord {
    tag: u8,
    blue_type: u16,
    red_type: u16,
    pub blue_count: u32,
    pub red_count: u32,
}

/// Human-facing view of a bin's kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinKind {
    /// Blue items of a type whose bins accept no reds.
    Plain(usize),
    /// `(i, ?)`: blue items, red side still open.
    BlueOpen(usize),
    /// `(?, j)`: red items, blue side still open.
    RedOpen(usize),
    /// `(i, j)`: both colors.
    Mixed(usize, usize),
    /// A sub-bin packer bin for the given small type.
    Small(u32),
}

impl BinRecord {
    pub fn kind(&self) -> BinKind {
        match self.tag {
            TAG_PLAIN => BinKind::Plain(self.blue_type as usize),
            TAG_BLUE_OPEN => BinKind::BlueOpen(self.blue_type as usize),
            TAG_RED_OPEN => BinKind::RedOpen(self.red_type as usize),
            TAG_MIXED => BinKind::Mixed(self.blue_type as usize, self.red_type as usize),
            TAG_SMALL => BinKind::Small(self.blue_type as u32),
            _ => unreachable!(),
        }
    }
}

/// One recorded item (only kept when layout recording is on).
#[derive(Debug, Clone, Copy)]
pub struct ItemRec {
    pub size_id: u32,
    pub color: Color,
    /// Grid slot for large items.
    pub slot: u64,
    /// Sub-bin address for small items.
    pub scale: u32,
    pub key: small::SubKey,
}

#[derive(Debug, Clone, Copy)]
pub struct PackEvent {
    pub bin_id: u32,
    pub class: ItemClass,
    pub color: Color,
    pub opened_bin: bool,
}

/// Final-state counters; `b`/`r` count bins containing blue/red items of each
/// type (mixed bins count in both), `y` the mixed bins.
#[derive(Debug, Clone)]
pub struct PackingStats {
    pub d: u32,
    pub n_types: usize,
    pub m_small: u32,
    /// Items per type (lambda), 1-based.
    pub n: Vec<u64>,
    /// Red items per type, 1-based.
    pub e: Vec<u64>,
    pub b: Vec<u64>,
    pub r: Vec<u64>,
    pub y: u64,
    pub small_bins: u64,
    pub total_bins: u64,
    /// Case indices of the final state (paper-style for 151-type sets).
    pub q: usize,
    pub e_idx: usize,
    pub blue_open_types: Vec<usize>,
    pub red_open_types: Vec<usize>,
    pub indeterminate_bins: u64,
    pub small_count: u64,
    /// Exact total volume of all small items.
    pub small_volume: BigRat,
}

pub struct PackerState {
    pub params: ParameterSet,
    record: bool,
    pub n_count: Vec<u64>,
    pub e_count: Vec<u64>,
    pub bins: Vec<BinRecord>,
    pub items: Vec<Vec<ItemRec>>,
    pub sizes: Vec<Rat>,
    size_ids: HashMap<Rat, u32>,
    class_memo: HashMap<Rat, ItemClass>,
    /// One-entry memo for run-heavy streams plus the small-type cache.
    last_class: Option<(Rat, ItemClass)>,
    small_memo: HashMap<Rat, (u32, u32)>,
    blue_open: Vec<Option<u32>>,
    red_open: Vec<Option<u32>>,
    /// `(i, ?)` bins per strip level, awaiting a red type.
    convertible: Vec<VecDeque<u32>>,
    /// `(?, j)` bins per red type, awaiting a blue type.
    red_pools: Vec<VecDeque<u32>>,
    blue_open_count: Vec<u64>,
    /// Red types a blue type can pick up when converting a red-open bin.
    eligible_reds: Vec<Vec<usize>>,
    /// Smallest strip level wide enough for each red type.
    min_level: Vec<Option<usize>>,
    small: SmallState,
    b_count: Vec<u64>,
    r_count: Vec<u64>,
    y_mixed: u64,
    small_bins: u64,
    small_count: u64,
    small_sizes: BTreeMap<Rat, u64>,
    items_seen: u64,
}

impl PackerState {
    pub fn new(params: ParameterSet, record: bool) -> Self {
        let n = params.n();
        let k = params.rb.delta_set.len() - 1;
        let mut eligible_reds = vec![Vec::new(); n + 1];
        let mut min_level = vec![None; n + 1];
        for j in 1..=n {
            if params.gamma(j) == 0 || params.alpha(j).is_zero() {
                continue;
            }
            let need = params.red_need(j);
            for level in 1..=k {
                if params.rb.delta_set[level] >= need {
                    min_level[j] = Some(level);
                    break;
                }
            }
            for i in 1..=n {
                if params.phi(i) != 0 && params.delta(i) >= need {
                    eligible_reds[i].push(j);
                }
            }
        }
        let m = params.m();
        let d = params.d();
        PackerState {
            record,
            n_count: vec![0; n + 1],
            e_count: vec![0; n + 1],
            bins: Vec::new(),
            items: Vec::new(),
            sizes: Vec::new(),
            size_ids: HashMap::new(),
            class_memo: HashMap::new(),
            last_class: None,
            small_memo: HashMap::new(),
            blue_open: vec![None; n + 1],
            red_open: vec![None; n + 1],
            convertible: vec![VecDeque::new(); k + 1],
            red_pools: vec![VecDeque::new(); n + 1],
            blue_open_count: vec![0; n + 1],
            eligible_reds,
            min_level,
            small: SmallState::new(m, d),
            b_count: vec![0; n + 1],
            r_count: vec![0; n + 1],
            y_mixed: 0,
            small_bins: 0,
            small_count: 0,
            small_sizes: BTreeMap::new(),
            items_seen: 0,
            params,
        }
    }

    fn intern(&mut self, size: Rat) -> u32 {
        if let Some(&id) = self.size_ids.get(&size) {
            return id;
        }
        let id = self.sizes.len() as u32;
        self.sizes.push(size);
        self.size_ids.insert(size, id);
        id
    }

    fn new_bin(&mut self, rec: BinRecord) -> u32 {
        let id = self.bins.len() as u32;
        self.bins.push(rec);
        if self.record {
            self.items.push(Vec::new());
        }
        id
    }

    fn push_item(&mut self, bin: u32, rec: ItemRec) {
        if self.record {
            self.items[bin as usize].push(rec);
        }
    }

    pub fn classify_memo(&mut self, size: &Rat) -> Result<ItemClass, PackError> {
        if let Some((s, c)) = &self.last_class {
            if s == size {
                return Ok(*c);
            }
        }
        let c = match self.class_memo.get(size) {
            Some(&c) => c,
            None => {
                let c = classify(size, &self.params)?;
                self.class_memo.insert(*size, c);
                c
            }
        };
        self.last_class = Some((*size, c));
        Ok(c)
    }

    /// Colors the next type-`i` item; increments `n_i` (and `e_i` when red).
    pub fn color_next(&mut self, i: usize) -> Color {
        self.n_count[i] += 1;
        let alpha = self.params.alpha(i);
        // floor(alpha * n) exactly
        let target = (*alpha.numer() * self.n_count[i] as i128) / *alpha.denom();
        if (self.e_count[i] as i128) < target {
            self.e_count[i] += 1;
            Color::Red
        } else {
            Color::Blue
        }
    }

    pub fn pack_item(&mut self, size: Rat) -> Result<PackEvent, PackError> {
        let class = self.classify_memo(&size).map_err(|e| match e {
            PackError::BadSize { size, .. } => PackError::BadSize {
                index: self.items_seen,
                size,
            },
        })?;
        self.items_seen += 1;
        match class {
            ItemClass::Small => Ok(self.pack_small(size)),
            ItemClass::Large(i) => {
                let color = self.color_next(i);
                let ev = match color {
                    Color::Red => self.pack_red(i, size),
                    Color::Blue => self.pack_blue(i, size),
                    Color::Small => unreachable!(),
                };
                Ok(ev)
            }
        }
    }

    fn pack_small(&mut self, size: Rat) -> PackEvent {
        self.small_count += 1;
        *self.small_sizes.entry(size).or_insert(0) += 1;
        let size_id = if self.record {
            self.intern(size)
        } else {
            0
        };
        let class = match self.small_memo.get(&size) {
            Some(&c) => c,
            None => {
                let c = self.small.classify(&size).expect("size was classified small");
                self.small_memo.insert(size, c);
                c
            }
        };
        let bins = &mut self.bins;
        let mut alloc_small = None;
        let placement = {
            let small = &mut self.small;
            small
                .place_classified(class, size, || {
                    let id = bins.len() as u32;
                    bins.push(BinRecord {
                        tag: TAG_SMALL,
                        blue_type: 0, // small type patched below
                        red_type: 0,
                        blue_count: 0,
                        red_count: 0,
                    });
                    alloc_small = Some(id);
                    id
                })
        };
        if let Some(id) = alloc_small {
            self.bins[id as usize].blue_type = placement.small_type as u16;
            self.small_bins += 1;
            if self.record {
                self.items.push(Vec::new());
            }
        }
        self.bins[placement.bin_id as usize].blue_count += 1;
        self.push_item(
            placement.bin_id,
            ItemRec {
                size_id,
                color: Color::Small,
                slot: 0,
                scale: placement.scale,
                key: placement.key,
            },
        );
        PackEvent {
            bin_id: placement.bin_id,
            class: ItemClass::Small,
            color: Color::Small,
            opened_bin: placement.opened,
        }
    }

    fn place_red(&mut self, bin: u32, i: usize, size: Rat) {
        let slot = self.bins[bin as usize].red_count as u64;
        self.bins[bin as usize].red_count += 1;
        if self.bins[bin as usize].red_count as u64 == self.params.theta(i) {
            self.red_open[i] = None;
        } else {
            self.red_open[i] = Some(bin);
        }
        let size_id = if self.record { self.intern(size) } else { 0 };
        self.push_item(
            bin,
            ItemRec {
                size_id,
                color: Color::Red,
                slot,
                scale: 0,
                key: [0; 3],
            },
        );
    }

    fn place_blue(&mut self, bin: u32, i: usize, size: Rat) {
        let slot = self.bins[bin as usize].blue_count as u64;
        self.bins[bin as usize].blue_count += 1;
        if self.bins[bin as usize].blue_count as u64 == self.params.blue_capacity(i) {
            self.blue_open[i] = None;
        } else {
            self.blue_open[i] = Some(bin);
        }
        let size_id = if self.record { self.intern(size) } else { 0 };
        self.push_item(
            bin,
            ItemRec {
                size_id,
                color: Color::Blue,
                slot,
                scale: 0,
                key: [0; 3],
            },
        );
    }

    fn pack_red(&mut self, i: usize, size: Rat) -> PackEvent {
        // 1. the open red slot of this type
        if let Some(bin) = self.red_open[i] {
            self.place_red(bin, i, size);
            return PackEvent {
                bin_id: bin,
                class: ItemClass::Large(i),
                color: Color::Red,
                opened_bin: false,
            };
        }
        // 2. convert a blue bin with the smallest adequate strip
        if let Some(start) = self.min_level[i] {
            for level in start..self.convertible.len() {
                if let Some(&bin) = self.convertible[level].front() {
                    self.convertible[level].pop_front();
                    let j = self.bins[bin as usize].blue_type as usize;
                    debug_assert_eq!(self.bins[bin as usize].tag, TAG_BLUE_OPEN);
                    self.bins[bin as usize].tag = TAG_MIXED;
                    self.bins[bin as usize].red_type = i as u16;
                    self.blue_open_count[j] -= 1;
                    self.y_mixed += 1;
                    self.r_count[i] += 1;
                    self.place_red(bin, i, size);
                    return PackEvent {
                        bin_id: bin,
                        class: ItemClass::Large(i),
                        color: Color::Red,
                        opened_bin: false,
                    };
                }
            }
        }
        // 3. a new red bin
        let bin = self.new_bin(BinRecord {
            tag: TAG_RED_OPEN,
            blue_type: 0,
            red_type: i as u16,
            blue_count: 0,
            red_count: 0,
        });
        self.r_count[i] += 1;
        self.red_pools[i].push_back(bin);
        self.place_red(bin, i, size);
        PackEvent {
            bin_id: bin,
            class: ItemClass::Large(i),
            color: Color::Red,
            opened_bin: true,
        }
    }

    fn pack_blue(&mut self, i: usize, size: Rat) -> PackEvent {
        // 1. the open blue bin of this type
        if let Some(bin) = self.blue_open[i] {
            self.place_blue(bin, i, size);
            return PackEvent {
                bin_id: bin,
                class: ItemClass::Large(i),
                color: Color::Blue,
                opened_bin: false,
            };
        }
        if self.params.phi(i) != 0 {
            // 2. adopt the lowest-id red-open bin this type can cover
            let mut best: Option<(u32, usize)> = None;
            for &j in &self.eligible_reds[i] {
                if let Some(&bin) = self.red_pools[j].front() {
                    if best.map_or(true, |(b, _)| bin < b) {
                        best = Some((bin, j));
                    }
                }
            }
            if let Some((bin, j)) = best {
                self.red_pools[j].pop_front();
                debug_assert_eq!(self.bins[bin as usize].tag, TAG_RED_OPEN);
                self.bins[bin as usize].tag = TAG_MIXED;
                self.bins[bin as usize].blue_type = i as u16;
                self.y_mixed += 1;
                self.b_count[i] += 1;
                self.place_blue(bin, i, size);
                return PackEvent {
                    bin_id: bin,
                    class: ItemClass::Large(i),
                    color: Color::Blue,
                    opened_bin: false,
                };
            }
        }
        // 3. a new bin: plain when the type offers no strip
        let (tag, level) = if self.params.phi(i) == 0 {
            (TAG_PLAIN, 0)
        } else {
            (TAG_BLUE_OPEN, self.params.phi(i))
        };
        let bin = self.new_bin(BinRecord {
            tag,
            blue_type: i as u16,
            red_type: 0,
            blue_count: 0,
            red_count: 0,
        });
        self.b_count[i] += 1;
        if tag == TAG_BLUE_OPEN {
            self.convertible[level].push_back(bin);
            self.blue_open_count[i] += 1;
        }
        self.place_blue(bin, i, size);
        PackEvent {
            bin_id: bin,
            class: ItemClass::Large(i),
            color: Color::Blue,
            opened_bin: true,
        }
    }

    /// Runs the whole stream; errors carry the item index.
    pub fn pack_stream(
        &mut self,
        items: impl IntoIterator<Item = Rat>,
    ) -> Result<PackingStats, PackError> {
        for size in items {
            self.pack_item(size)?;
        }
        Ok(self.stats())
    }

    /// Final-state indices: `q` from surviving blue-open kinds, `e` from
    /// surviving red-open kinds. For the 151-type sets, blue-open types
    /// 22..=28 alias to 2..=8 and `q` is capped at 17.
    pub fn compute_q_e(&self) -> (usize, usize) {
        let paper_shape = self.params.n() == 151;
        let mut q = 1usize;
        for (i, &cnt) in self.blue_open_count.iter().enumerate() {
            if cnt == 0 {
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
        let mut e = 0usize;
        for (j, pool) in self.red_pools.iter().enumerate() {
            if !pool.is_empty() {
                e = e.max(j);
            }
        }
        (q, e)
    }

    pub fn blue_open_types(&self) -> Vec<usize> {
        (1..=self.params.n())
            .filter(|&i| self.blue_open_count[i] > 0)
            .collect()
    }

    pub fn red_open_types(&self) -> Vec<usize> {
        (1..=self.params.n())
            .filter(|&j| !self.red_pools[j].is_empty())
            .collect()
    }

    pub fn red_open_bins(&self, j: usize) -> usize {
        self.red_pools[j].len()
    }

    pub fn small_state(&self) -> &SmallState {
        &self.small
    }

    /// Bins that could still accept some item right now: partially filled
    /// blue/red slots, blue bins awaiting a red type, red bins awaiting a
    /// blue type, and active small bins.
    pub fn open_acceptors(&self) -> u64 {
        let mut ids = std::collections::BTreeSet::new();
        for b in self.blue_open.iter().flatten() {
            ids.insert(*b);
        }
        for b in self.red_open.iter().flatten() {
            ids.insert(*b);
        }
        for q in &self.convertible {
            ids.extend(q.iter().copied());
        }
        for q in &self.red_pools {
            ids.extend(q.iter().copied());
        }
        ids.len() as u64 + self.small.active_bins() as u64
    }

    pub fn stats(&self) -> PackingStats {
        let p = &self.params;
        let mut indeterminate = 0u64;
        for bin in &self.bins {
            let open = match bin.kind() {
                BinKind::Plain(i) | BinKind::BlueOpen(i) => {
                    bin.blue_count > 0 && (bin.blue_count as u64) < p.blue_capacity(i)
                }
                BinKind::RedOpen(j) => {
                    bin.red_count > 0 && (bin.red_count as u64) < p.theta(j)
                }
                BinKind::Mixed(i, j) => {
                    ((bin.blue_count as u64) < p.blue_capacity(i))
                        || ((bin.red_count as u64) < p.theta(j))
                }
                BinKind::Small(_) => false,
            };
            if open {
                indeterminate += 1;
            }
        }
        indeterminate += self.small.active_bins() as u64;
        let (q, e_idx) = self.compute_q_e();
        let d = p.d();
        let mut small_volume = BigRat::zero();
        for (s, count) in &self.small_sizes {
            small_volume +=
                crate::rat::pow_d_big(&big(s), d) * BigRat::from_integer((*count).into());
        }
        PackingStats {
            d,
            n_types: p.n(),
            m_small: p.m(),
            n: self.n_count.clone(),
            e: self.e_count.clone(),
            b: self.b_count.clone(),
            r: self.r_count.clone(),
            y: self.y_mixed,
            small_bins: self.small_bins,
            total_bins: self.bins.len() as u64,
            q,
            e_idx,
            blue_open_types: self.blue_open_types(),
            red_open_types: self.red_open_types(),
            indeterminate_bins: indeterminate,
            small_count: self.small_count,
            small_volume,
        }
    }

    /// Exact layout of one bin; needs recording.
    pub fn bin_layout(&self, bin_id: u32) -> BinLayout {
        assert!(self.record, "layouts need recording enabled");
        let p = &self.params;
        let rec = &self.bins[bin_id as usize];
        let items = self.items[bin_id as usize]
            .iter()
            .map(|it| {
                let size = self.sizes[it.size_id as usize];
                let anchor = match (it.color, rec.kind()) {
                    (Color::Blue, BinKind::Plain(i))
                    | (Color::Blue, BinKind::BlueOpen(i))
                    | (Color::Blue, BinKind::Mixed(i, _)) => {
                        geometry::blue_slot(i, it.slot, p).unwrap()
                    }
                    (Color::Red, BinKind::RedOpen(j)) | (Color::Red, BinKind::Mixed(_, j)) => {
                        geometry::red_slot(j, it.slot, p).unwrap()
                    }
                    (Color::Small, BinKind::Small(i)) => {
                        small::anchor_of(i, it.scale, &it.key, p.d())
                    }
                    other => unreachable!("item color {:?} in bin {:?}", other.0, other.1),
                };
                let type_index = match rec.kind() {
                    BinKind::Small(i) => i as usize,
                    BinKind::Plain(i) | BinKind::BlueOpen(i) => i,
                    BinKind::RedOpen(j) => j,
                    BinKind::Mixed(i, j) => {
                        if it.color == Color::Blue {
                            i
                        } else {
                            j
                        }
                    }
                };
                PlacedItem {
                    side: size,
                    anchor,
                    color: it.color,
                    type_index,
                }
            })
            .collect();
        BinLayout {
            d: p.d(),
            items,
        }
    }

    pub fn verify_all(&self) -> Result<(), (u32, geometry::Violation)> {
        for id in 0..self.bins.len() as u32 {
            if let Err(v) = geometry::verify(&self.bin_layout(id)) {
                return Err((id, v));
            }
        }
        Ok(())
    }

    /// Re-derives the aggregate counters from the bin table (consistency check).
    pub fn recount(&self) -> (Vec<u64>, Vec<u64>, u64, u64) {
        let n = self.params.n();
        let mut b = vec![0u64; n + 1];
        let mut r = vec![0u64; n + 1];
        let mut y = 0;
        let mut smalls = 0;
        for bin in &self.bins {
            match bin.kind() {
                BinKind::Plain(i) | BinKind::BlueOpen(i) => b[i] += 1,
                BinKind::RedOpen(j) => r[j] += 1,
                BinKind::Mixed(i, j) => {
                    b[i] += 1;
                    r[j] += 1;
                    y += 1;
                }
                BinKind::Small(_) => smalls += 1,
            }
        }
        (b, r, y, smalls)
    }
}

impl PackingStats {
    /// `total = sum B + sum R - Y + small bins` must hold exactly.
    pub fn accounting_identity_holds(&self) -> bool {
        let sum_b: u64 = self.b.iter().sum();
        let sum_r: u64 = self.r.iter().sum();
        self.total_bins == sum_b + sum_r - self.y + self.small_bins
    }

    /// Final-state bound on surviving red-open kinds relative to blue-open ones.
    pub fn qe_bound_holds(&self) -> bool {
        if self.n_types != 151 || self.e_idx == 0 {
            return true;
        }
        match self.q {
            2..=9 => self.e_idx <= 37 - self.q,
            10..=16 => self.e_idx <= 35 - self.q,
            _ => true,
        }
    }
}
