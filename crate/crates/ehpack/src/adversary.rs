//! Counter-example inputs against the earlier square-packing algorithm,
//! their exact cost models, a simulation harness, the two weight functions
//! that analysis used, and the generic lower-bound construction that applies
//! to every algorithm of this family.

use crate::packer::PackerState;
use crate::params::{builtin_prior_params, ParameterSet};
use crate::rat::{big, parse_big, parse_rat, rat, to_f64, BigRat, Rat};
use num::{One, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    P1,
    P2,
}

impl std::fmt::Display for Which {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Which::P1 => "p1",
            Which::P2 => "p2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BatchRole {
    Large,
    SmallGrid,
    Dust,
}

#[derive(Debug, Clone)]
pub struct BatchSpec {
    pub label: &'static str,
    /// Item count as `a * M + b * N`.
    pub count_m: u64,
    pub count_n: u64,
    /// Concrete size with the perturbation folded in (unused for dust).
    pub size: Rat,
    pub role: BatchRole,
}

impl BatchSpec {
    pub fn count(&self, m: u64, n: u64) -> u64 {
        self.count_m * m + self.count_n * n
    }
}

#[derive(Debug, Clone)]
pub struct AdversaryInput {
    pub which: Which,
    pub scale: u64,
    pub m: u64,
    pub n: u64,
    pub batches: Vec<BatchSpec>,
    /// Exact `N / M`.
    pub ratio_nm: BigRat,
    /// Dust volume per bin of the two offline bin classes.
    pub dust_vol_a: BigRat,
    pub dust_vol_b: BigRat,
    pub eps: Rat,
    /// Bins of the known offline packing: `M + N`.
    pub opt_bins: u64,
}

impl AdversaryInput {
    pub fn dust_total(&self) -> BigRat {
        self.dust_vol_a.clone() * BigRat::from_integer(self.m.into())
            + self.dust_vol_b.clone() * BigRat::from_integer(self.n.into())
    }
}

const P1_M_UNIT: u64 = 164696;
const P2_M_UNIT: u64 = 119196;
const RATIO_NUM: u64 = 724609;

fn eps() -> Rat {
    rat(1, 1_000_000)
}

/// Squares of the items packed into one offline bin, as (size, count).
fn bin_volume_left(items: &[(Rat, u64)]) -> BigRat {
    let mut left = BigRat::one();
    for (s, c) in items {
        left -= big(s) * big(s) * BigRat::from_integer((*c).into());
    }
    left
}

/// The first counter-example input at `M = 164696 * scale`.
///
/// The scale unit is the smallest `M` making every batch count integral;
/// the analytic per-batch bin counts then differ from the algorithm's true
/// counts only by rounding, which the `O(1/M)` tolerance absorbs.
pub fn build_p1(scale: u64) -> AdversaryInput {
    assert!(scale >= 1);
    let m = P1_M_UNIT * scale;
    let n = RATIO_NUM * scale;
    let e = eps();
    let batches = vec![
        BatchSpec {
            label: "5M+4N of 1/7+e",
            count_m: 5,
            count_n: 4,
            size: rat(1, 7) + e,
            role: BatchRole::Large,
        },
        BatchSpec {
            label: "2M of 1/5+e",
            count_m: 2,
            count_n: 0,
            size: rat(1, 5) + e,
            role: BatchRole::Large,
        },
        BatchSpec {
            label: "2M+2N of 1/4+e",
            count_m: 2,
            count_n: 2,
            size: rat(1, 4) + e,
            role: BatchRole::Large,
        },
        BatchSpec {
            label: "M of 1/2+e",
            count_m: 1,
            count_n: 0,
            size: rat(1, 2) + e,
            role: BatchRole::Large,
        },
        BatchSpec {
            label: "N of 0.6+e",
            count_m: 0,
            count_n: 1,
            size: parse_rat("0.6").unwrap() + e,
            role: BatchRole::Large,
        },
        BatchSpec {
            label: "3M+3N of 0.3525+e",
            count_m: 3,
            count_n: 3,
            size: parse_rat("0.3525").unwrap() + e,
            role: BatchRole::Large,
        },
        BatchSpec {
            label: "24M+25N of 1/23+e",
            count_m: 24,
            count_n: 25,
            size: rat(1, 23) + e,
            role: BatchRole::SmallGrid,
        },
        BatchSpec {
            label: "dust",
            count_m: 0,
            count_n: 0,
            size: e,
            role: BatchRole::Dust,
        },
    ];
    // Offline bin contents (dust fills the rest exactly as eps -> 0).
    let a_items = [
        (rat(1, 23), 24),
        (rat(1, 7), 5),
        (rat(1, 5), 2),
        (rat(1, 4), 2),
        (parse_rat("0.3525").unwrap(), 3),
        (rat(1, 2), 1),
    ];
    let b_items = [
        (rat(1, 23), 25),
        (rat(1, 7), 4),
        (rat(1, 4), 2),
        (parse_rat("0.3525").unwrap(), 3),
        (parse_rat("0.6").unwrap(), 1),
    ];
    AdversaryInput {
        which: Which::P1,
        scale,
        m,
        n,
        batches,
        ratio_nm: BigRat::new(RATIO_NUM.into(), P1_M_UNIT.into()),
        dust_vol_a: bin_volume_left(&a_items),
        dust_vol_b: bin_volume_left(&b_items),
        eps: e,
        opt_bins: m + n,
    }
}

/// The second counter-example input at `M = 119196 * scale`.
pub fn build_p2(scale: u64) -> AdversaryInput {
    assert!(scale >= 1);
    let m = P2_M_UNIT * scale;
    let n = RATIO_NUM * scale;
    let e = eps();
    let batches = vec![
        BatchSpec {
            label: "M of 1/2+e",
            count_m: 1,
            count_n: 0,
            size: rat(1, 2) + e,
            role: BatchRole::Large,
        },
        BatchSpec {
            label: "5M of 1/7+e",
            count_m: 5,
            count_n: 0,
            size: rat(1, 7) + e,
            role: BatchRole::Large,
        },
        BatchSpec {
            label: "2M of 1/5+e",
            count_m: 2,
            count_n: 0,
            size: rat(1, 5) + e,
            role: BatchRole::Large,
        },
        BatchSpec {
            label: "2N+2M of 1/4+e",
            count_m: 2,
            count_n: 2,
            size: rat(1, 4) + e,
            role: BatchRole::Large,
        },
        BatchSpec {
            label: "3N+3M of 1/3+e",
            count_m: 3,
            count_n: 3,
            size: rat(1, 3) + e,
            role: BatchRole::Large,
        },
        BatchSpec {
            label: "N of 0.6475+e",
            count_m: 0,
            count_n: 1,
            size: parse_rat("0.6475").unwrap() + e,
            role: BatchRole::Large,
        },
        BatchSpec {
            label: "8M+8N of 1/13+e",
            count_m: 8,
            count_n: 8,
            size: rat(1, 13) + e,
            role: BatchRole::SmallGrid,
        },
        BatchSpec {
            label: "6N of 1/12+e",
            count_m: 0,
            count_n: 6,
            size: rat(1, 12) + e,
            role: BatchRole::SmallGrid,
        },
        BatchSpec {
            label: "10M of 1/22+e",
            count_m: 10,
            count_n: 0,
            size: rat(1, 22) + e,
            role: BatchRole::SmallGrid,
        },
        BatchSpec {
            label: "dust",
            count_m: 0,
            count_n: 0,
            size: e,
            role: BatchRole::Dust,
        },
    ];
    let a_items = [
        (rat(1, 22), 10),
        (rat(1, 13), 8),
        (rat(1, 7), 5),
        (rat(1, 5), 2),
        (rat(1, 4), 2),
        (rat(1, 3), 3),
        (rat(1, 2), 1),
    ];
    let b_items = [
        (rat(1, 13), 8),
        (rat(1, 12), 6),
        (rat(1, 4), 2),
        (rat(1, 3), 3),
        (parse_rat("0.6475").unwrap(), 1),
    ];
    AdversaryInput {
        which: Which::P2,
        scale,
        m,
        n,
        batches,
        ratio_nm: BigRat::new(RATIO_NUM.into(), P2_M_UNIT.into()),
        dust_vol_a: bin_volume_left(&a_items),
        dust_vol_b: bin_volume_left(&b_items),
        eps: e,
        opt_bins: m + n,
    }
}

pub fn build(which: Which, scale: u64) -> AdversaryInput {
    match which {
        Which::P1 => build_p1(scale),
        Which::P2 => build_p2(scale),
    }
}

// ---------------------------------------------------------------------------
// Analytic cost model
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct CostBreakdown {
    pub which: Which,
    /// Bin count of each output group as `(label, coeff of M, coeff of N)`.
    pub groups: Vec<(&'static str, BigRat, BigRat)>,
    /// Exact `N / M`.
    pub ratio_nm: BigRat,
    /// Total algorithm cost divided by `M`, at the exact ratio.
    pub total_per_m: BigRat,
    /// Optimal cost divided by `M`: `1 + N/M`.
    pub opt_per_m: BigRat,
    /// Competitive ratio of the construction.
    pub ratio: BigRat,
}

fn prior_alpha(i: usize) -> BigRat {
    big(&builtin_prior_params().alpha(i))
}

/// Exact evaluation of the published cost expressions.
pub fn analytic_cost(which: Which) -> CostBreakdown {
    let input = build(which, 1);
    let one = BigRat::one();
    let a6 = prior_alpha(6);
    let a7 = prior_alpha(7);
    let a9 = prior_alpha(9);
    let a10 = prior_alpha(10);
    let a12 = prior_alpha(12);
    let frac = |num: u64, den: u64| BigRat::new(num.into(), den.into());
    let mut groups: Vec<(&'static str, BigRat, BigRat)> = Vec::new();
    match which {
        Which::P1 => {
            // converted red bins (they also host the 1/2+e blues): exactly M
            let red_m = a12.clone() * frac(5, 11) + a10.clone() * frac(2, 7) + a9.clone() * frac(2, 5);
            let red_n = a12.clone() * frac(4, 11) + a9.clone() * frac(2, 5);
            assert_eq!(
                red_m + red_n * input.ratio_nm.clone(),
                one,
                "red bins of the first three batches must total M"
            );
            groups.push(("mixed red bins + 1/2+e blues", one.clone(), BigRat::zero()));
            groups.push((
                "blue bins of 1/7+e",
                (one.clone() - a12.clone()) * frac(5, 36),
                (one.clone() - a12.clone()) * frac(4, 36),
            ));
            groups.push((
                "blue bins of 1/5+e",
                (one.clone() - a10.clone()) * frac(2, 16),
                BigRat::zero(),
            ));
            groups.push((
                "blue bins of 1/4+e",
                (one.clone() - a9.clone()) * frac(2, 9),
                (one.clone() - a9.clone()) * frac(2, 9),
            ));
            groups.push(("bins of 0.6+e", BigRat::zero(), one.clone()));
            groups.push((
                "red bins of 0.3525+e",
                a6.clone() * frac(3, 3),
                a6.clone() * frac(3, 3),
            ));
            groups.push((
                "blue bins of 0.3525+e",
                (one.clone() - a6.clone()) * frac(3, 4),
                (one.clone() - a6.clone()) * frac(3, 4),
            ));
            groups.push(("grid bins of 1/23+e", frac(24, 484), frac(25, 484)));
            groups.push((
                "dust bins",
                input.dust_vol_a.clone(),
                input.dust_vol_b.clone(),
            ));
        }
        Which::P2 => {
            let red_m = a12.clone() * frac(5, 11) + a10.clone() * frac(2, 7) + a9.clone() * frac(2, 5);
            let red_n = a9.clone() * frac(2, 5);
            assert_eq!(
                red_m + red_n * input.ratio_nm.clone(),
                one,
                "red bins of batches 2-4 must fill the M host bins"
            );
            groups.push(("bins of 1/2+e + red items", one.clone(), BigRat::zero()));
            groups.push((
                "blue bins of 1/7+e",
                (one.clone() - a12.clone()) * frac(5, 36),
                BigRat::zero(),
            ));
            groups.push((
                "blue bins of 1/5+e",
                (one.clone() - a10.clone()) * frac(2, 16),
                BigRat::zero(),
            ));
            groups.push((
                "blue bins of 1/4+e",
                (one.clone() - a9.clone()) * frac(2, 9),
                (one.clone() - a9.clone()) * frac(2, 9),
            ));
            groups.push((
                "red bins of 1/3+e",
                a7.clone() * frac(3, 3),
                a7.clone() * frac(3, 3),
            ));
            groups.push((
                "blue bins of 1/3+e",
                (one.clone() - a7.clone()) * frac(3, 4),
                (one.clone() - a7.clone()) * frac(3, 4),
            ));
            groups.push(("bins of 0.6475+e", BigRat::zero(), one.clone()));
            groups.push(("grid bins of 1/13+e", frac(8, 144), frac(8, 144)));
            groups.push(("grid bins of 1/12+e", BigRat::zero(), frac(6, 121)));
            groups.push(("grid bins of 1/22+e", frac(10, 441), BigRat::zero()));
            groups.push((
                "dust bins",
                input.dust_vol_a.clone(),
                input.dust_vol_b.clone(),
            ));
        }
    }
    let rho = input.ratio_nm.clone();
    let mut total = BigRat::zero();
    for (_, cm, cn) in &groups {
        total += cm.clone() + cn.clone() * rho.clone();
    }
    let opt = one + rho.clone();
    let ratio = total.clone() / opt.clone();
    CostBreakdown {
        which,
        groups,
        ratio_nm: rho,
        total_per_m: total,
        opt_per_m: opt,
        ratio,
    }
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct SimReport {
    pub which: Which,
    pub scale: u64,
    pub m: u64,
    pub n: u64,
    pub packed_bins: u64,
    /// Exact dust volume charged as bins through the ledger.
    pub dust_bins: BigRat,
    pub measured_ratio: BigRat,
    pub analytic_ratio: BigRat,
    pub gap: f64,
    pub per_batch_bins: Vec<(&'static str, u64)>,
    /// Bins still able to take items right after the conversion batch.
    pub acceptors_after_conversions: u64,
    /// Surviving red-open bins per type.
    pub red_open_leftover: Vec<(usize, usize)>,
    pub dominant_red_open: Option<usize>,
}

/// Runs the earlier algorithm on a counter-example input.
///
/// Dust is charged by exact volume instead of being materialized: for sides
/// tending to zero the sub-bin packer fills bins to density 1, so its bin
/// count equals the dust volume up to one bin per small type.
pub fn simulate(which: Which, scale: u64) -> SimReport {
    let input = build(which, scale);
    let params = builtin_prior_params();
    let mut packer = PackerState::new(params, false);
    let mut per_batch = Vec::new();
    let mut acceptors_after_conversions = 0u64;
    let conversion_batch = match which {
        Which::P1 => 3usize, // 0-based: batch 4 of 1/2+e items
        Which::P2 => 3,      // after batch 4 every red host is consumed
    };
    for (bi, batch) in input.batches.iter().enumerate() {
        if batch.role == BatchRole::Dust {
            continue;
        }
        let before = packer.bins.len() as u64;
        let count = batch.count(input.m, input.n);
        for _ in 0..count {
            packer.pack_item(batch.size).unwrap();
        }
        per_batch.push((batch.label, packer.bins.len() as u64 - before));
        if bi == conversion_batch {
            acceptors_after_conversions = packer.open_acceptors();
        }
    }
    let packed_bins = packer.bins.len() as u64;
    let dust_bins = input.dust_total();
    let measured = BigRat::from_integer(packed_bins.into()) + dust_bins.clone();
    let opt = BigRat::from_integer(input.opt_bins.into());
    let measured_ratio = measured / opt;
    let analytic = analytic_cost(which);
    let gap = (to_f64(&measured_ratio) - to_f64(&analytic.ratio)).abs();
    let red_open_leftover: Vec<(usize, usize)> = packer
        .red_open_types()
        .into_iter()
        .map(|j| (j, packer.red_open_bins(j)))
        .collect();
    let dominant_red_open = red_open_leftover
        .iter()
        .max_by_key(|(_, c)| *c)
        .map(|(j, _)| *j);
    SimReport {
        which,
        scale,
        m: input.m,
        n: input.n,
        packed_bins,
        dust_bins,
        measured_ratio,
        analytic_ratio: analytic.ratio,
        gap,
        per_batch_bins: per_batch,
        acceptors_after_conversions,
        red_open_leftover,
        dominant_red_open,
    }
}

// ---------------------------------------------------------------------------
// The two weight functions of the earlier analysis
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriorWeight {
    W21,
    W22,
}

#[derive(Debug, thiserror::Error)]
#[error("type {0} has no weight under this function")]
pub struct PriorWeightError(pub usize);

/// Weight of one large type under the chosen function.
pub fn prior_type_weight(i: usize, which: PriorWeight) -> Result<BigRat, PriorWeightError> {
    let one = BigRat::one();
    let a6 = prior_alpha(6);
    let a9 = prior_alpha(9);
    let a10 = prior_alpha(10);
    let a12 = prior_alpha(12);
    let frac = |n: u64, d: u64| BigRat::new(n.into(), d.into());
    let w = match (which, i) {
        (_, 3) => one,
        (PriorWeight::W21, 4) => BigRat::zero(),
        (PriorWeight::W22, 4) => one,
        (_, 6) => (one.clone() - a6.clone()) * frac(1, 4) + a6 * frac(1, 3),
        (PriorWeight::W21, 9) => (one.clone() - a9.clone()) * frac(1, 9) + a9 * frac(1, 5),
        (PriorWeight::W22, 9) => (one.clone() - a9) * frac(1, 9),
        (PriorWeight::W21, 10) => (one.clone() - a10.clone()) * frac(1, 16) + a10 * frac(1, 7),
        (PriorWeight::W22, 10) => (one.clone() - a10) * frac(1, 16),
        (PriorWeight::W21, 12) => (one.clone() - a12.clone()) * frac(1, 36) + a12 * frac(1, 11),
        (PriorWeight::W22, 12) => (one.clone() - a12) * frac(1, 36),
        _ => return Err(PriorWeightError(i)),
    };
    Ok(w)
}

/// Evaluates a bin given as large-type counts plus exact small-item area.
pub fn prior_weight_eval(
    contents: &[(usize, u64)],
    small_area: &BigRat,
    which: PriorWeight,
) -> Result<BigRat, PriorWeightError> {
    let mut total = parse_big("1.2").unwrap() * small_area;
    for (i, count) in contents {
        total += prior_type_weight(*i, which)? * BigRat::from_integer((*count).into());
    }
    Ok(total)
}

/// The bin whose weight the published analysis evaluates under the first
/// function: one 0.6+e item, three 0.3525+e, two 1/4+e, four 1/7+e, rest
/// small. Returns (contents, exact small area).
pub fn reference_bin_w21() -> (Vec<(usize, u64)>, BigRat) {
    let small = bin_volume_left(&[
        (parse_rat("0.6").unwrap(), 1),
        (parse_rat("0.3525").unwrap(), 3),
        (rat(1, 4), 2),
        (rat(1, 7), 4),
    ]);
    (vec![(3, 1), (6, 3), (9, 2), (12, 4)], small)
}

/// The modified bin evaluated under the second function: one 1/2+e item,
/// three 0.3525+e, two 1/4+e, two 1/5+e, rest small.
pub fn reference_bin_w22() -> (Vec<(usize, u64)>, BigRat) {
    let small = bin_volume_left(&[
        (rat(1, 2), 1),
        (parse_rat("0.3525").unwrap(), 3),
        (rat(1, 4), 2),
        (rat(1, 5), 2),
    ]);
    (vec![(4, 1), (6, 3), (9, 2), (10, 2)], small)
}

// ---------------------------------------------------------------------------
// Explicit coordinates for the offline packings
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinClass {
    A,
    B,
}

/// Item multiset of one offline bin (sides include the perturbation).
pub fn offline_bin_items(which: Which, class: BinClass) -> Vec<Rat> {
    let e = eps();
    let spec: &[(Rat, u64)] = match (which, class) {
        (Which::P1, BinClass::A) => &[
            (rat(1, 2), 1),
            (parse_rat("0.3525").unwrap(), 3),
            (rat(1, 4), 2),
            (rat(1, 5), 2),
            (rat(1, 7), 5),
            (rat(1, 23), 24),
        ],
        (Which::P1, BinClass::B) => &[
            (parse_rat("0.6").unwrap(), 1),
            (parse_rat("0.3525").unwrap(), 3),
            (rat(1, 4), 2),
            (rat(1, 7), 4),
            (rat(1, 23), 25),
        ],
        (Which::P2, BinClass::A) => &[
            (rat(1, 2), 1),
            (rat(1, 3), 3),
            (rat(1, 4), 2),
            (rat(1, 5), 2),
            (rat(1, 7), 5),
            (rat(1, 13), 8),
            (rat(1, 22), 10),
        ],
        (Which::P2, BinClass::B) => &[
            (parse_rat("0.6475").unwrap(), 1),
            (rat(1, 3), 3),
            (rat(1, 4), 2),
            (rat(1, 13), 8),
            (rat(1, 12), 6),
        ],
    };
    let mut items = Vec::new();
    for (side, count) in spec {
        for _ in 0..*count {
            items.push(*side + e);
        }
    }
    items
}

/// Axis-aligned placements with exact coordinates for one offline bin,
/// found by corner-point backtracking over the large items followed by a
/// greedy bottom-left pass for the grid items. Deterministic.
pub fn offline_bin_layout(which: Which, class: BinClass) -> Option<crate::geometry::BinLayout> {
    use crate::geometry::{BinLayout, Color, PlacedItem};
    let mut items = offline_bin_items(which, class);
    items.sort_by(|a, b| b.cmp(a));
    let cutoff = rat(1, 10);
    let split = items.partition_point(|s| *s >= cutoff);
    let (large, small) = items.split_at(split);

    type Placed = (Rat, Rat, Rat); // x, y, side
    fn fits(placed: &[Placed], x: Rat, y: Rat, s: Rat) -> bool {
        let one = Rat::one();
        if x + s > one || y + s > one {
            return false;
        }
        placed.iter().all(|&(px, py, ps)| {
            x + s <= px || px + ps <= x || y + s <= py || py + ps <= y
        })
    }
    fn corners(placed: &[Placed]) -> Vec<(Rat, Rat)> {
        let mut xs = vec![Rat::zero()];
        let mut ys = vec![Rat::zero()];
        for &(px, py, ps) in placed {
            xs.push(px + ps);
            ys.push(py + ps);
        }
        xs.sort();
        xs.dedup();
        ys.sort();
        ys.dedup();
        let mut anchors = Vec::with_capacity(xs.len() * ys.len());
        for &y in &ys {
            for &x in &xs {
                anchors.push((x, y));
            }
        }
        anchors
    }
    fn place_smalls(items: &[Rat], placed: &mut Vec<Placed>) -> bool {
        for &s in items {
            let mut done = false;
            for (x, y) in corners(placed) {
                if fits(placed, x, y, s) {
                    placed.push((x, y, s));
                    done = true;
                    break;
                }
            }
            if !done {
                return false;
            }
        }
        true
    }

    let mut placed: Vec<Placed> = Vec::new();
    let mut budget = 40_000_000u64;
    let small_area: Rat = small.iter().map(|s| *s * *s).sum();
    // Remaining-area pruning: these bins are nearly full, so subtrees that
    // strand even a little area die immediately.
    #[allow(clippy::too_many_arguments)]
    fn solve(
        large: &[Rat],
        small: &[Rat],
        need_area: Rat,
        placed: &mut Vec<Placed>,
        used_area: Rat,
        budget: &mut u64,
    ) -> bool {
        if used_area + need_area > Rat::one() {
            return false;
        }
        if large.is_empty() {
            let mark = placed.len();
            if place_smalls(small, placed) {
                return true;
            }
            placed.truncate(mark);
            return false;
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let s = large[0];
        let same_as_last = placed.last().map_or(false, |&(_, _, ps)| ps == s);
        for (x, y) in corners(placed) {
            if same_as_last {
                let &(px, py, _) = placed.last().unwrap();
                if (y, x) < (py, px) {
                    continue;
                }
            }
            if !fits(placed, x, y, s) {
                continue;
            }
            placed.push((x, y, s));
            if solve(
                &large[1..],
                small,
                need_area - s * s,
                placed,
                used_area + s * s,
                budget,
            ) {
                return true;
            }
            placed.pop();
        }
        false
    }
    let need: Rat = large.iter().map(|s| *s * *s).sum::<Rat>() + small_area;
    if !solve(large, small, need, &mut placed, Rat::zero(), &mut budget) {
        return None;
    }
    Some(BinLayout {
        d: 2,
        items: placed
            .into_iter()
            .map(|(x, y, s)| PlacedItem {
                side: s,
                anchor: vec![x, y],
                color: Color::Blue,
                type_index: 0,
            })
            .collect(),
    })
}

// ---------------------------------------------------------------------------
// Generic lower bound
// ---------------------------------------------------------------------------

/// `3 - 1/2^d - 1/4^d - 2^(d+1)/3^d + 2/3^d`, exact.
pub fn generic_lower_bound(d: u32) -> BigRat {
    let f = |n: i64, den: i64| BigRat::new(n.into(), den.into());
    let p2 = 2i64.pow(d);
    let p3 = 3i64.pow(d);
    let p4 = 4i64.pow(d);
    f(3, 1) - f(1, p2) - f(1, p4) - f(2 * p2, p3) + f(2, p3)
}

#[derive(Debug, thiserror::Error)]
pub enum GenericError {
    #[error("no valid perturbation: the intervals around 1/3 and 2/3 leave no room")]
    NoValidEpsilon,
    #[error("classification failed for the probe sizes")]
    Classify,
}

#[derive(Debug, Clone)]
pub struct GenericAdversary {
    pub d: u32,
    pub eps: Rat,
    /// Type of `1/3 + eps` and its red fraction.
    pub type_third: usize,
    pub red_fraction: BigRat,
    /// Type of `2/3 - eps`.
    pub type_two_thirds: usize,
    /// Batches per unit `N`: (count multiplier, size).
    pub stream1: Vec<(u64, Rat)>,
    pub stream1_small_volume: BigRat,
    pub stream2: Vec<(u64, Rat)>,
    pub stream2_small_volume: BigRat,
    /// Lower bounds implied by each input, as `const + coeff * beta`.
    pub ineq1: (BigRat, BigRat),
    pub ineq2: (BigRat, BigRat),
    /// The combined bound `(ineq1 + (2^d - 1) ineq2) / 2^d`.
    pub combined: BigRat,
}

/// Builds the two-input construction for any Extended Harmonic set and
/// reproduces the averaging step exactly.
pub fn generic_adversary(p: &ParameterSet) -> Result<GenericAdversary, GenericError> {
    use crate::packer::{classify, ItemClass};
    let d = p.d();
    let third = rat(1, 3);
    let two_thirds = rat(2, 3);
    // Type containing 1/3; step up when 1/3 is its right endpoint.
    let t3 = match classify(&third, p).map_err(|_| GenericError::Classify)? {
        ItemClass::Large(i) => {
            if p.upper(i) == third {
                i - 1
            } else {
                i
            }
        }
        ItemClass::Small => return Err(GenericError::Classify),
    };
    if t3 == 0 {
        return Err(GenericError::NoValidEpsilon);
    }
    let t23 = match classify(&two_thirds, p).map_err(|_| GenericError::Classify)? {
        ItemClass::Large(i) => i,
        ItemClass::Small => return Err(GenericError::Classify),
    };
    // Largest power of 1/10 keeping all three probe sizes interior.
    let mut e = rat(1, 100_000); // start below 1e-4; first candidate 1e-5
    let mut ok = false;
    for _ in 0..12 {
        e = e / rat(10, 1);
        let s1 = third + e;
        let s2 = two_thirds - e;
        let in3 = s1 > p.lower(t3) && s1 <= p.upper(t3);
        let in23 = s2 > p.lower(t23) && s2 <= p.upper(t23);
        let half_ok = classify(&(rat(1, 2) + e), p)
            .map(|c| matches!(c, ItemClass::Large(i) if p.lower(i) == rat(1,2)))
            .unwrap_or(false);
        if in3 && in23 && half_ok {
            ok = true;
            break;
        }
    }
    if !ok {
        return Err(GenericError::NoValidEpsilon);
    }

    let beta = big(&p.alpha(t3));
    let one = BigRat::one();
    let f = |n: i64, den: i64| BigRat::new(n.into(), den.into());
    let p2 = 2i64.pow(d);
    let p3 = 3i64.pow(d);
    let many = (p2 - 1) as u64;

    // Input 1: (2^d - 1) N thirds, N halves, small volume filling the rest.
    let small1 = one.clone() - f(p2 - 1, p3) - f(1, p2);
    // cost >= N (halves) + N * small1 + blue bins of the thirds
    let ineq1_const = one.clone() + small1.clone() + f(p2 - 1, p2);
    let ineq1_beta = -f(p2 - 1, p2);

    // Input 2: (2^d - 1) N thirds, N two-thirds, small volume filling the rest.
    // Red and blue bins of the thirds give beta + (1-beta)(1 - 1/2^d), which
    // is (1 - 1/2^d) + beta/2^d; add the two-thirds bins and the small bins.
    let small2 = one.clone() - f(2 * p2 - 1, p3);
    let ineq2_const = f(2, 1) - f(1, p2) + small2.clone();
    let ineq2_beta = f(1, p2);

    // Averaging: (ineq1 + (2^d - 1) * ineq2) / 2^d; beta cancels.
    let beta_total = ineq1_beta.clone() + f(p2 - 1, 1) * ineq2_beta.clone();
    assert!(beta_total.is_zero(), "the red fraction must cancel");
    let combined = (ineq1_const.clone() + f(p2 - 1, 1) * ineq2_const.clone()) / f(p2, 1);
    assert_eq!(combined, generic_lower_bound(d), "averaging must hit the formula");

    Ok(GenericAdversary {
        d,
        eps: e,
        type_third: t3,
        red_fraction: beta,
        type_two_thirds: t23,
        stream1: vec![(many, third + e), (1, rat(1, 2) + e)],
        stream1_small_volume: small1,
        stream2: vec![(many, third + e), (1, two_thirds - e)],
        stream2_small_volume: small2,
        ineq1: (ineq1_const, ineq1_beta),
        ineq2: (ineq2_const, ineq2_beta),
        combined,
    })
}
