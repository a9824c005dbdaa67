//! Property suites for the recursive sub-bin packer.

mod common;

use ehpack::geometry::{self, BinLayout, Color, PlacedItem};
use ehpack::rat::rat;
use ehpack::small::{anchor_of, classify_small, SmallState, SubKey};
use proptest::prelude::*;
use std::collections::HashMap;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn classification_solves_its_defining_inequalities(num in 1i128..5000, den in 5000i128..2_000_000) {
        let m = 111u32;
        let s = rat(num, den);
        prop_assume!(s <= rat(1, m as i128));
        let (i, k) = classify_small(&s, m).unwrap();
        prop_assert!(i >= m && i < 2 * m);
        let scaled = s * rat(1i128 << k, 1);
        prop_assert!(scaled <= rat(1, m as i128));
        prop_assert!(scaled * rat(2, 1) > rat(1, m as i128) || k == 0);
        prop_assert!(scaled > rat(1, i as i128 + 1) && scaled <= rat(1, i as i128));
    }

    #[test]
    fn placements_never_overlap_within_a_bin(seed in 0u64..400) {
        let m = 11u32;
        let d = 2u32;
        let mut st = SmallState::new(m, d);
        let mut next = 0u32;
        let mut alloc = || { let id = next; next += 1; id };
        let mut r = common::rng(seed);
        use rand::Rng;
        let mut bins: HashMap<u32, Vec<(u32, u32, SubKey, ehpack::rat::Rat)>> = HashMap::new();
        for _ in 0..600 {
            let i = r.gen_range(m..2 * m) as i128;
            let k = r.gen_range(0..3u32);
            let size = rat(1, (i + 1) << k) + rat(1, 1 << 24);
            let size = if size > rat(1, m as i128) { rat(1, m as i128) } else { size };
            let placement = st.place(size, &mut alloc).unwrap();
            bins.entry(placement.bin_id).or_default().push((
                placement.small_type,
                placement.scale,
                placement.key,
                size,
            ));
        }
        prop_assert!(st.check_tiling());
        prop_assert!(st.deficits.is_empty());
        for items in bins.values() {
            let layout = BinLayout {
                d,
                items: items
                    .iter()
                    .map(|(i, k, key, size)| PlacedItem {
                        side: *size,
                        anchor: anchor_of(*i, *k, key, d),
                        color: Color::Small,
                        type_index: *i as usize,
                    })
                    .collect(),
            };
            prop_assert!(geometry::verify(&layout).is_ok());
        }
    }
}

#[test]
fn at_most_one_active_bin_per_type() {
    let m = 11u32;
    let mut st = SmallState::new(m, 2);
    let mut next = 0u32;
    let mut alloc = || {
        let id = next;
        next += 1;
        id
    };
    let mut r = common::rng(9);
    use rand::Rng;
    for _ in 0..5000 {
        let i = r.gen_range(m..2 * m) as i128;
        st.place(rat(1, i), &mut alloc).unwrap();
        assert!(st.active_bins() <= m as usize);
    }
}

#[test]
fn three_dimensional_bins_fill_and_close_correctly() {
    // 8 scale-1 items per side-1/i cell: a bin of type i=11, d=3 takes
    // 11^3 * 8 items of side 1/23 before closing.
    let mut st = SmallState::new(11, 3);
    let mut next = 0u32;
    let mut alloc = || {
        let id = next;
        next += 1;
        id
    };
    let s = rat(1, 23);
    let capacity = 11u64.pow(3) * 8;
    for n in 0..capacity {
        let p = st.place(s, &mut alloc).unwrap();
        assert_eq!(p.bin_id, 0, "item {n}");
    }
    let p = st.place(s, &mut alloc).unwrap();
    assert_eq!(p.bin_id, 1);
    assert_eq!(p.closed, Some(0));
    assert!(st.deficits.is_empty());
}

