//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).
//!
//! Criterion 1's literal table comparison is expected to fail: the published
//! per-case table is provably not the set of optima of the published
//! program (a feasible bin exceeding the printed case-9 value is exhibited
//! and machine-verified here in exact arithmetic). The certified-bounds
//! companion test pins our exact optima and the headline bounds instead.

mod common;

use common::table5;
use ehpack::adversary::{self, PriorWeight, Which};
use ehpack::geometry;
use ehpack::ip;
use ehpack::packer::{BinKind, PackerState};
use ehpack::params::{builtin_appendix_params, builtin_paper_params, Variant};
use ehpack::rat::{big, parse_big, rat, to_f64, BigRat, Rat};
use ehpack::weights;
use num::One;
use std::sync::OnceLock;
use std::time::Instant;

const TOL: f64 = 1e-6;

fn paper(d: u32) -> ehpack::params::ParameterSet {
    builtin_paper_params(d, Variant::AsPrinted).unwrap()
}

fn solved_cases(d: u32) -> &'static Vec<ip::BoundResult> {
    static D2: OnceLock<Vec<ip::BoundResult>> = OnceLock::new();
    static D3: OnceLock<Vec<ip::BoundResult>> = OnceLock::new();
    let cell = if d == 2 { &D2 } else { &D3 };
    cell.get_or_init(|| {
        let p = paper(d);
        (1..=17)
            .map(|c| ip::solve_case(&p, c, 1e-7, 5_000_000).unwrap())
            .collect()
    })
}

/// Our certified optima (exact incumbent objectives as printed decimals),
/// frozen after independent cross-verification; they guard the solver
/// against regressions. See the decisions ledger for the derivation.
const CERTIFIED_SQUARE: [&str; 17] = [
    "2.0884478799685109",
    "1.9438111393749897",
    "2.0109377369908179",
    "1.9607088230371754",
    "1.9942382659983959",
    "1.9874921079643513",
    "1.9553977217017875",
    "2.0472963400739062",
    "2.0884682914972275",
    "2.0884277350124014",
    "2.0884451808373758",
    "2.0877357917893589",
    "2.0848156550344621",
    "2.0773476690962518",
    "2.0656525682086646",
    "2.0438403376257139",
    "2.0881835966173630",
];
const CERTIFIED_CUBE: [&str; 17] = [
    "2.5733259435342068",
    "2.4545964302020153",
    "2.4758256494312048",
    "2.4556816908081225",
    "2.5115233444134248",
    "2.5338730996711205",
    "2.5016106532842275",
    "2.4714625013326725",
    "2.5734459877461799",
    "2.5593116300130139",
    "2.5567070162500252",
    "2.5575032631890982",
    "2.5500154465638696",
    "2.5225994000395935",
    "2.5277964826919668",
    "2.5386009696078831",
    "2.5721032934550299",
];

#[test]
fn criterion_1_certified_bounds_and_theorem() {
    let start = Instant::now();
    for d in [2u32, 3] {
        let results = solved_cases(d);
        let certified = if d == 2 { &CERTIFIED_SQUARE } else { &CERTIFIED_CUBE };
        let mut overall = f64::NEG_INFINITY;
        for r in results {
            assert!(!r.budget_exhausted, "d={} case {} hit the budget", d, r.case_id);
            assert!(r.gap <= 1.5e-7, "d={} case {} gap {}", d, r.case_id, r.gap);
            let frozen: f64 = certified[(r.case_id - 1) as usize].parse().unwrap();
            assert!(
                (r.incumbent_obj_f - frozen).abs() < 1e-12,
                "d={} case {}: certified optimum drifted: {} vs {}",
                d,
                r.case_id,
                r.incumbent_obj_f,
                frozen
            );
            overall = overall.max(r.upper_bound);
        }
        let cap = if d == 2 { 2.0885 } else { 2.5735 };
        assert!(overall <= cap, "d={} overall {} exceeds {}", d, overall, cap);
        println!(
            "ACCEPTANCE 1 (certified): d={} overall bound {:.16} <= {} from 17 certified cases",
            d, overall, cap
        );
    }
    println!(
        "ACCEPTANCE 1 (certified): runtime {:.1}s (target: 600s)",
        start.elapsed().as_secs_f64()
    );
    assert!(start.elapsed().as_secs_f64() < 600.0);
}

#[test]
fn criterion_1_table5_reproduction() {
    // The literal criterion: every case equal to the published table within
    // 1e-6. Three square-packing cases reproduce; the remaining published
    // values are provably not optima of the published program (see the
    // exhibit test below and the decisions ledger), so this stays red.
    let mut failures = Vec::new();
    for d in [2u32, 3] {
        let tab = if d == 2 {
            &table5::CASE_BOUNDS_SQUARE
        } else {
            &table5::CASE_BOUNDS_CUBE
        };
        let need: Vec<u32> = if d == 2 {
            (1..=17).collect()
        } else {
            vec![1, 2, 9, 17]
        };
        let results = solved_cases(d);
        for &c in &need {
            let printed: f64 = tab[(c - 1) as usize].1.parse().unwrap();
            let got = results[(c - 1) as usize].upper_bound;
            let ok = (got - printed).abs() <= TOL;
            println!(
                "ACCEPTANCE 1 (table): d={} case {:>2}: ours {:.16} printed {:.16} diff {:+.3e} {}",
                d,
                c,
                got,
                printed,
                got - printed,
                if ok { "match" } else { "MISMATCH" }
            );
            if !ok {
                failures.push((d, c, got - printed));
            }
        }
    }
    // A corollary of the same desync: with the published values the maximum
    // over cases 2..=8 sits at case 3, while the certified optima put case 8
    // far above it (the published case-8 value is bracketed by the optima
    // under neighboring cost-split parameters; see the ledger).
    let best28 = solved_cases(2)[1..8]
        .iter()
        .max_by(|a, b| a.upper_bound.total_cmp(&b.upper_bound))
        .unwrap();
    println!(
        "ACCEPTANCE 1 (table): certified max over cases 2..=8 is case {} ({:.16})",
        best28.case_id, best28.upper_bound
    );

    if !failures.is_empty() {
        println!("ACCEPTANCE 1 (table): FAIL — {} of 38 comparisons differ", failures.len());
        panic!(
            "published table not reproducible from the published program \
             ({} mismatches, both signs, max |diff| {:.1e}); the certified \
             optima and the 2.0885/2.5735 theorem are covered by \
             criterion_1_certified_bounds_and_theorem; full analysis in the \
             decisions ledger",
            failures.len(),
            failures.iter().map(|f| f.2.abs()).fold(0.0, f64::max),
        );
    }
    println!("ACCEPTANCE 1 (table): PASS");
}

#[test]
fn criterion_1_exhibit_bin_beats_printed_case_9() {
    // Machine-checkable witness for why the table cannot be reproduced:
    // this bin satisfies every constraint of the published case-9 program
    // and outweighs the printed "optimum".
    let p = paper(2);
    let inst = ip::build_instance(9, &p).unwrap();
    let mut x = vec![0u64; 151];
    for (ty, cnt) in [(9, 1), (28, 3), (37, 2), (40, 1), (41, 2), (58, 3), (59, 3), (64, 6), (109, 3), (120, 4)] {
        x[ty - 1] = cnt;
    }
    assert!(inst.feasible_exact(&x));
    let value = inst.objective_exact(&x);
    let printed = parse_big("2.0884478982863968").unwrap();
    assert!(
        value > printed,
        "exhibit no longer beats the printed value: {} vs {}",
        to_f64(&value),
        to_f64(&printed)
    );
    println!(
        "ACCEPTANCE 1 (exhibit): PASS — feasible case-9 bin of weight {:.16} > printed 2.0884478982863968",
        to_f64(&value)
    );
}

#[test]
fn criterion_2_counterexample_reproduction() {
    let start = Instant::now();
    // Analytic ratios to 12 significant digits.
    let a1 = adversary::analytic_cost(Which::P1);
    let a2 = adversary::analytic_cost(Which::P2);
    assert!((to_f64(&a1.ratio) - 2.12294632176699).abs() < 1e-11);
    assert!((to_f64(&a2.ratio) - 2.120087899087498).abs() < 1e-12);
    println!(
        "ACCEPTANCE 2: PASS (analytic) p1 {:.14} p2 {:.15}",
        to_f64(&a1.ratio),
        to_f64(&a2.ratio)
    );

    // Simulated at the minimal admissible scale, then doubling twice.
    for which in [Which::P1, Which::P2] {
        let mut gaps = Vec::new();
        for scale in [1u64, 2, 4] {
            let t = Instant::now();
            let sim = adversary::simulate(which, scale);
            let secs = t.elapsed().as_secs_f64();
            assert!(secs < 120.0, "{which} at scale {scale} took {secs:.0}s");
            assert!(
                sim.gap < 1e-3,
                "{which} scale {scale}: gap {} too large",
                sim.gap
            );
            // O(1/M): the absolute gap stays under a fixed multiple of 1/M.
            assert!(
                sim.gap * sim.m as f64 <= 1.5,
                "{which} scale {scale}: gap*M = {}",
                sim.gap * sim.m as f64
            );
            let expect_dominant = if which == Which::P1 { 6 } else { 7 };
            assert_eq!(sim.dominant_red_open, Some(expect_dominant));
            let straggler_bins: usize = sim
                .red_open_leftover
                .iter()
                .filter(|(j, _)| *j != expect_dominant)
                .map(|(_, c)| *c)
                .sum();
            assert!(straggler_bins <= 8, "stragglers: {:?}", sim.red_open_leftover);
            assert!(sim.acceptors_after_conversions <= 16);
            gaps.push(sim.gap);
            println!(
                "ACCEPTANCE 2: {which} scale {scale}: measured {:.12} gap {:.3e} ({:.0}s)",
                to_f64(&sim.measured_ratio),
                sim.gap,
                secs
            );
        }
        // Each doubling halves the gap up to floor-rounding noise; over two
        // doublings the product is comfortably below 1/2.
        assert!(gaps[1] <= gaps[0] * 0.62, "{which}: {:?}", gaps);
        assert!(gaps[2] <= gaps[1] * 0.62, "{which}: {:?}", gaps);
        assert!(gaps[2] <= gaps[0] * 0.31, "{which}: {:?}", gaps);
    }
    println!(
        "ACCEPTANCE 2: PASS (simulation, {:.0}s total)",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_3_generic_lower_bound() {
    for (d, printed) in [(1u32, 1.5833333), (2, 2.0208333), (3, 2.34085648)] {
        let got = to_f64(&adversary::generic_lower_bound(d));
        assert!((got - printed).abs() < 1e-7, "d={d}: {got}");
    }
    // The two-input evaluator's averaging step reproduces the formula
    // exactly in rationals, for both parameter sets.
    for d in [2u32, 3] {
        let g = adversary::generic_adversary(&paper(d)).unwrap();
        assert_eq!(g.combined, adversary::generic_lower_bound(d));
        // internal consistency: strictly below the upper bound engine's max
        let overall = solved_cases(d)
            .iter()
            .map(|r| r.upper_bound)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(to_f64(&g.combined) < overall);
    }
    println!("ACCEPTANCE 3: PASS — 1.5833333 / 2.0208333 / 2.34085648 within 1e-7, averaging exact");
}

#[test]
fn criterion_4_prior_weight_evaluations() {
    let (contents, area) = adversary::reference_bin_w21();
    let w21 = adversary::prior_weight_eval(&contents, &area, PriorWeight::W21).unwrap();
    assert!((to_f64(&w21) - 2.277619932488147).abs() < 1e-9);
    let (contents, area) = adversary::reference_bin_w22();
    let w22 = adversary::prior_weight_eval(&contents, &area, PriorWeight::W22).unwrap();
    assert!((to_f64(&w22) - 2.240699722).abs() < 1e-9);
    println!(
        "ACCEPTANCE 4: PASS — W21 {:.15}, W22 {:.10}",
        to_f64(&w21),
        to_f64(&w22)
    );
}

#[test]
fn criterion_5_appendix_trace() {
    let p = builtin_appendix_params();
    let mut st = PackerState::new(p, true);
    let mut stream: Vec<Rat> = vec![
        ehpack::rat::parse_rat("0.9").unwrap(),
        rat(2, 3),
        rat(2, 3),
        rat(3, 10),
        rat(3, 10),
    ];
    stream.extend(std::iter::repeat(rat(1, 3)).take(14));
    stream.extend(std::iter::repeat(rat(3, 10)).take(12));
    assert_eq!(stream.len(), 31);
    let stats = st.pack_stream(stream).unwrap();
    assert_eq!(stats.total_bins, 5);

    // Exact per-bin item multisets of the final packing.
    let expect: [(BinKind, &[(Rat, u64)]); 5] = [
        (BinKind::Plain(1), &[(rat(9, 10), 1)]),
        (BinKind::Mixed(3, 5), &[(rat(2, 3), 1), (rat(1, 3), 5)]),
        (BinKind::Mixed(3, 6), &[(rat(2, 3), 1), (rat(3, 10), 5)]),
        (BinKind::Plain(6), &[(rat(3, 10), 9)]),
        (BinKind::Plain(5), &[(rat(1, 3), 9)]),
    ];
    for (bin_id, (kind, multiset)) in expect.iter().enumerate() {
        assert_eq!(st.bins[bin_id].kind(), *kind, "bin {bin_id}");
        let layout = st.bin_layout(bin_id as u32);
        for (size, count) in *multiset {
            let got = layout.items.iter().filter(|it| it.side == *size).count() as u64;
            assert_eq!(got, *count, "bin {bin_id} size {size}");
        }
        let total: u64 = multiset.iter().map(|(_, c)| c).sum();
        assert_eq!(layout.items.len() as u64, total, "bin {bin_id}");
        geometry::verify(&layout).unwrap();
    }
    println!("ACCEPTANCE 5: PASS — 31-item trace gives the 5 expected bins, geometry verified");
}

#[test]
fn criterion_6a_coloring_invariant() {
    let p = paper(2);
    for seed in 0..100u64 {
        let stream = common::random_stream(seed, 300, &p);
        let mut st = PackerState::new(p.clone(), false);
        for s in stream {
            st.pack_item(s).unwrap();
            for i in 1..=p.n() {
                let alpha = p.alpha(i);
                let target = (*alpha.numer() * st.n_count[i] as i128) / *alpha.denom();
                assert_eq!(st.e_count[i] as i128, target, "seed {seed} type {i}");
            }
        }
    }
    println!("ACCEPTANCE 6a: PASS — e_i = floor(alpha_i n_i) after every arrival, 100 streams");
}

#[test]
fn criterion_6b_count_formulas() {
    for d in [2u32, 3] {
        let p = paper(d);
        for seed in [1u64, 7, 42] {
            let stream = common::random_stream(seed ^ (d as u64) << 32, 20_000, &p);
            let mut st = PackerState::new(p.clone(), false);
            let stats = st.pack_stream(stream).unwrap();
            let two = BigRat::from_integer(2.into());
            for i in 1..=p.n() {
                let lambda = BigRat::from_integer(stats.n[i].into());
                let b = BigRat::from_integer(stats.b[i].into());
                let blue_target = (BigRat::one() - big(&p.alpha(i))) * lambda.clone()
                    / BigRat::from_integer(p.blue_capacity(i).into());
                let diff = if b >= blue_target { b - blue_target.clone() } else { blue_target.clone() - b };
                assert!(diff <= two, "d={d} seed {seed} type {i}: B off by {}", to_f64(&diff));
                if p.theta(i) > 0 {
                    let r = BigRat::from_integer(stats.r[i].into());
                    let red_target = big(&p.alpha(i)) * lambda
                        / BigRat::from_integer(p.theta(i).into());
                    let diff = if r >= red_target { r - red_target.clone() } else { red_target - r };
                    assert!(diff <= two, "d={d} seed {seed} type {i}: R off by {}", to_f64(&diff));
                }
            }
            assert!(stats.accounting_identity_holds());
            assert!(stats.qe_bound_holds());
            assert!(stats.indeterminate_bins <= 3 * p.n() as u64 + p.m() as u64);
        }
    }
    println!("ACCEPTANCE 6b: PASS — per-type bin counts within 2 of their targets at termination");
}

#[test]
fn criterion_6c_small_volume_bound() {
    // Random small streams, plus adversarial sizes just above the scaled
    // lower bounds; every closed bin must meet the occupied-volume bound.
    use ehpack::small::SmallState;
    for d in [2u32, 3] {
        for m in [11u32, 111] {
            let mut st = SmallState::new(m, d);
            let mut next = 0u32;
            let mut alloc = || {
                let id = next;
                next += 1;
                id
            };
            let mut r = common::rng(900 + (d * m) as u64);
            use rand::Rng;
            let items = if d == 2 { 60_000 } else { 20_000 };
            for _ in 0..items {
                let i = r.gen_range(m..2 * m) as i128;
                let k = r.gen_range(0..4u32);
                let size = match r.gen_range(0..3u32) {
                    // just above the per-leaf lower bound 1/(2^k (i+1))
                    0 => rat(1, (i + 1) << k) + rat(1, 1 << 30),
                    // exactly the leaf size
                    1 => rat(1, i << k),
                    // uniform inside the leaf interval
                    _ => {
                        let num = r.gen_range(1..=1000i128);
                        rat(1, (i + 1) << k) + rat(num, 1000 * (i << k) * (i + 1))
                    }
                };
                let size = if size > rat(1, m as i128) { rat(1, m as i128) } else { size };
                st.place(size, &mut alloc).unwrap();
            }
            assert!(
                st.deficits.is_empty(),
                "d={d} M={m}: {} closed bins below the bound, first: {:?}",
                st.deficits.len(),
                st.deficits.first()
            );
            assert!(st.check_tiling(), "d={d} M={m}: leaf tiling broken");
            assert!(st.active_bins() <= m as usize);
        }
    }
    println!("ACCEPTANCE 6c: PASS — every closed sub-bin packer bin meets the volume bound");
}

#[test]
fn criterion_6d_weight_domination() {
    let p = paper(2);
    for seed in 0..12u64 {
        let stream = common::random_stream(1000 + seed, 10_000, &p);
        let mut st = PackerState::new(p.clone(), false);
        let stats = st.pack_stream(stream).unwrap();
        let report = weights::check_domination(&stats, &p).unwrap();
        assert!(
            report.holds,
            "seed {seed}: {} bins vs max case total {} + {}",
            report.total_bins,
            to_f64(&report.max_total),
            report.constant
        );
    }
    // Empty input trivially satisfies the inequality.
    let mut st = PackerState::new(p.clone(), false);
    let stats = st.pack_stream(std::iter::empty()).unwrap();
    assert!(weights::check_domination(&stats, &p).unwrap().holds);

    // The first counter-example stream under this parameter set (weights are
    // set-specific, so the published input is re-packed with these params).
    let input = adversary::build_p1(1);
    let mut st = PackerState::new(p.clone(), false);
    for batch in &input.batches {
        if batch.role == adversary::BatchRole::Dust {
            continue;
        }
        let count = batch.count(input.m, input.n) / 100; // trimmed copy
        for _ in 0..count {
            st.pack_item(batch.size).unwrap();
        }
    }
    let stats = st.stats();
    let report = weights::check_domination(&stats, &p).unwrap();
    assert!(report.holds);
    println!("ACCEPTANCE 6d: PASS — weight domination holds on every packed stream");
}

#[test]
fn criterion_6e_ip_soundness() {
    // 1e5 feasible vectors, each checked against every case's certified
    // bound - the primary anti-bug property of the bound engine.
    let p = paper(2);
    let results = solved_cases(2);
    let instances: Vec<_> = (1..=17)
        .map(|c| ip::build_instance(c, &p).unwrap())
        .collect();
    let mut r = common::rng(0xbeef);
    let mut checked = 0u64;
    while checked < 100_000 {
        let Some(x) = ip::sample_feasible(&instances[0], &mut r, true) else {
            continue;
        };
        checked += 1;
        for (inst, res) in instances.iter().zip(results) {
            let v = inst.objective_exact(&x);
            assert!(
                to_f64(&v) <= res.upper_bound + 1e-12,
                "case {}: sampled {} > bound {}",
                inst.case_id,
                to_f64(&v),
                res.upper_bound
            );
        }
    }
    println!("ACCEPTANCE 6e: PASS — 100000 feasible vectors never exceed any certified case bound");
}

#[test]
fn criterion_6f_geometry_compatibility() {
    let p = paper(2);
    let mut pairs = 0u64;
    for i in 1..=p.n() {
        if p.phi(i) == 0 {
            continue;
        }
        for j in 1..=p.n() {
            if p.gamma(j) == 0 || p.red_need(j) > p.delta(i) {
                continue;
            }
            let layout = geometry::full_mixed_layout(i, j, &p);
            geometry::verify(&layout).unwrap_or_else(|v| panic!("pair ({i},{j}): {v}"));
            pairs += 1;
        }
    }
    assert_eq!(pairs, 2825);
    println!("ACCEPTANCE 6f: PASS — all {pairs} admissible host/red pairs verify");
}

#[test]
fn criterion_7_small_instance_oracle() {
    // Truncated program (types <= 10) solved exactly by brute force.
    for d in [2u32, 3] {
        let p = paper(d);
        for case in [1u32, 9, 17] {
            let inst = ip::build_truncated(case, &p, 10).unwrap();
            let (brute, _) = common::brute_force_optimum(&inst);
            let res = ip::solve(&inst, 1e-9, 100_000);
            assert_eq!(
                res.incumbent_obj, brute,
                "d={d} case {case}: solver {} vs brute {}",
                to_f64(&res.incumbent_obj),
                to_f64(&brute)
            );
            assert!(res.upper_bound >= to_f64(&brute) - 1e-12);
            assert!(res.upper_bound <= to_f64(&brute) + 1e-6);
        }
    }
    // Red-slot enumeration equals the capacity formula for every type.
    for d in [2u32, 3] {
        let p = paper(d);
        for j in 1..=p.n() {
            let beta = p.beta(j) as u64;
            let gamma = p.gamma(j) as u64;
            let inner = beta - gamma;
            // brute-force cell count
            let mut count = 0u64;
            let mut idx = vec![0u64; d as usize];
            loop {
                if idx.iter().any(|&c| c >= inner) {
                    count += 1;
                }
                let mut a = d as usize;
                loop {
                    if a == 0 {
                        break;
                    }
                    a -= 1;
                    idx[a] += 1;
                    if idx[a] < beta {
                        break;
                    }
                    idx[a] = 0;
                    if a == 0 {
                        break;
                    }
                }
                if idx.iter().all(|&c| c == 0) {
                    break;
                }
            }
            assert_eq!(count, p.theta(j), "d={d} type {j}");
        }
    }
    println!("ACCEPTANCE 7: PASS — truncated-program brute force and red-slot counts agree");
}

#[test]
fn acceptance_extra_volume_bound_anchor_values() {
    // Named constants from the small-item analysis.
    use ehpack::small::closed_volume_bound;
    assert_eq!(closed_volume_bound(111, 2), parse_big("12320/12544").unwrap());
    assert_eq!(closed_volume_bound(11, 2), parse_big("120/144").unwrap());
    assert_eq!(
        weights::small_weight_factor(&paper(2)),
        parse_big("12544/12320").unwrap()
    );
}
