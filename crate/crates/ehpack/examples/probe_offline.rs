//! Replicates the offline backtracking with instrumentation.
use ehpack::adversary::{offline_bin_items, BinClass, Which};
use ehpack::rat::{rat, Rat};
use num::{One, Zero};

type Placed = (Rat, Rat, Rat);

fn fits(placed: &[Placed], x: Rat, y: Rat, s: Rat) -> bool {
    let one = Rat::one();
    if x + s > one || y + s > one {
        return false;
    }
    placed
        .iter()
        .all(|&(px, py, ps)| x + s <= px || px + ps <= x || y + s <= py || py + ps <= y)
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
    let mut anchors = Vec::new();
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
fn solve(
    large: &[Rat],
    small: &[Rat],
    need: Rat,
    placed: &mut Vec<Placed>,
    used: Rat,
    budget: &mut u64,
    smalltries: &mut u64,
) -> bool {
    if used + need > Rat::one() {
        return false;
    }
    if large.is_empty() {
        *smalltries += 1;
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
    let same = placed.last().map_or(false, |&(_, _, ps)| ps == s);
    for (x, y) in corners(placed) {
        if same {
            let &(px, py, _) = placed.last().unwrap();
            if (y, x) < (py, px) {
                continue;
            }
        }
        if !fits(placed, x, y, s) {
            continue;
        }
        placed.push((x, y, s));
        if solve(&large[1..], small, need - s * s, placed, used + s * s, budget, smalltries) {
            return true;
        }
        placed.pop();
    }
    false
}

fn main() {
    let mut items = offline_bin_items(Which::P1, BinClass::A);
    items.sort_by(|a, b| b.cmp(a));
    let cutoff = rat(1, 10);
    let split = items.partition_point(|s| *s >= cutoff);
    let (large, small) = items.split_at(split);
    println!("large: {} items, small: {}", large.len(), small.len());
    let need: Rat = items.iter().map(|s| *s * *s).sum();
    println!("total area: {}", ehpack::rat::rat_to_f64(&need));
    let mut placed = Vec::new();
    let mut budget = 40_000_000u64;
    let mut smalltries = 0u64;
    let ok = solve(large, small, need, &mut placed, Rat::zero(), &mut budget, &mut smalltries);
    println!(
        "ok={} budget_left={} small_phase_attempts={}",
        ok, budget, smalltries
    );
}
