//! The seventeen case weight functions and the weight-domination check.
//!
//! A case is selected by the surviving open-bin kinds `(q, e)` of a finished
//! packing. Case 1 (`q = 1`), cases 2..=16 (parameterized by the cost split
//! `w`), and case 17 (no red-open bins at all) assign each large type an
//! exact rational weight; small items weigh `(M+1)^d / (M^d - 1)` times
//! their volume.

use crate::packer::{classify, ItemClass, PackingStats};
use crate::params::ParameterSet;
use crate::rat::{big, pow_d_big, BigRat, Rat};
use num::{One, Zero};

#[derive(Debug, thiserror::Error)]
pub enum WeightError {
    #[error("invalid case id {0} (expected 1..=17)")]
    InvalidCase(u32),
    #[error("the case analysis needs the 151-type set, got {0} types")]
    WrongShape(usize),
    #[error("parameter set lacks the w value for case {0}")]
    MissingW(u32),
    #[error("size {0} is not in (0, 1]")]
    BadSize(Rat),
}

#[derive(Debug, Clone)]
pub struct WeightVector {
    pub case_id: u32,
    /// Per large type, 1-based.
    pub per_type: Vec<BigRat>,
    /// `(M+1)^d / (M^d - 1)`.
    pub small_factor: BigRat,
    /// Cost split, cases 2..=16 only.
    pub w: Option<BigRat>,
    /// The case's `(q, e)` parameters (`e` maximal per the final-state bound).
    pub q: usize,
    pub e: usize,
}

pub fn small_weight_factor(p: &ParameterSet) -> BigRat {
    let m = BigRat::from_integer(p.m().into());
    let d = p.d();
    pow_d_big(&(m.clone() + BigRat::one()), d) / (pow_d_big(&m, d) - BigRat::one())
}

fn red_share(p: &ParameterSet, i: usize) -> BigRat {
    if p.alpha(i).is_zero() {
        BigRat::zero()
    } else {
        big(&p.alpha(i)) / BigRat::from_integer(p.theta(i).into())
    }
}

fn blue_share(p: &ParameterSet, i: usize) -> BigRat {
    (BigRat::one() - big(&p.alpha(i))) / BigRat::from_integer(p.blue_capacity(i).into())
}

/// Weight vector of one analysis case.
pub fn case_vector(case_id: u32, p: &ParameterSet) -> Result<WeightVector, WeightError> {
    if !(1..=17).contains(&case_id) {
        return Err(WeightError::InvalidCase(case_id));
    }
    if p.n() != 151 {
        return Err(WeightError::WrongShape(p.n()));
    }
    let n = p.n();
    let mut per_type = vec![BigRat::zero(); n + 1];
    match case_id {
        1 => {
            for i in 1..=n {
                per_type[i] = match i {
                    2..=17 => BigRat::zero(),
                    22..=28 => red_share(p, i),
                    _ => red_share(p, i) + blue_share(p, i),
                };
            }
            Ok(WeightVector {
                case_id,
                per_type,
                small_factor: small_weight_factor(p),
                w: None,
                q: 1,
                e: 0,
            })
        }
        17 => {
            for i in 1..=n {
                per_type[i] = blue_share(p, i);
            }
            Ok(WeightVector {
                case_id,
                per_type,
                small_factor: small_weight_factor(p),
                w: None,
                q: 17,
                e: 0,
            })
        }
        q => {
            let q = q as usize;
            let e = if q <= 9 { 37 - q } else { 35 - q };
            let w = p
                .derived
                .case_w
                .get(&case_id)
                .map(big)
                .ok_or(WeightError::MissingW(case_id))?;
            for i in 1..=n {
                per_type[i] = if i <= q {
                    BigRat::one()
                } else if i <= 17 {
                    w.clone()
                } else if i <= e {
                    red_share(p, i) + blue_share(p, i)
                } else {
                    (BigRat::one() - w.clone()) * red_share(p, i) + blue_share(p, i)
                };
            }
            Ok(WeightVector {
                case_id,
                per_type,
                small_factor: small_weight_factor(p),
                w: Some(w),
                q,
                e,
            })
        }
    }
}

/// Weight of a single item under a case vector.
pub fn weight_of(size: &Rat, v: &WeightVector, p: &ParameterSet) -> Result<BigRat, WeightError> {
    match classify(size, p).map_err(|_| WeightError::BadSize(*size))? {
        ItemClass::Large(i) => Ok(v.per_type[i].clone()),
        ItemClass::Small => Ok(v.small_factor.clone() * pow_d_big(&big(size), p.d())),
    }
}

/// Total weight of a packed input under a case vector, from per-type counts
/// and the exact small-item volume.
pub fn case_total(v: &WeightVector, lambda: &[u64], small_volume: &BigRat) -> BigRat {
    let mut total = v.small_factor.clone() * small_volume;
    for (i, w) in v.per_type.iter().enumerate().skip(1) {
        if lambda[i] > 0 {
            total += w * BigRat::from_integer(lambda[i].into());
        }
    }
    total
}

#[derive(Debug, Clone)]
pub struct DominationReport {
    /// Exact per-case weight totals, cases 1..=17.
    pub case_totals: Vec<(u32, BigRat)>,
    pub max_case: u32,
    pub max_total: BigRat,
    /// Case selected by the packing's final `(q, e)`.
    pub realized_case: u32,
    pub total_bins: u64,
    /// Additive slack allowed in the domination inequality: `3N + M`.
    pub constant: u64,
    pub holds: bool,
}

/// Checks `total bins <= max case total + 3N + M` against an actual packing.
pub fn check_domination(
    stats: &PackingStats,
    p: &ParameterSet,
) -> Result<DominationReport, WeightError> {
    let mut case_totals = Vec::with_capacity(17);
    let mut max_case = 1;
    let mut max_total = BigRat::zero();
    for c in 1..=17 {
        let v = case_vector(c, p)?;
        let total = case_total(&v, &stats.n, &stats.small_volume);
        if c == 1 || total > max_total {
            max_case = c;
            max_total = total.clone();
        }
        case_totals.push((c, total));
    }
    let realized_case = match stats.q {
        1 => 1,
        17 => 17,
        q => q as u32,
    };
    let constant = 3 * (p.n() as u64) + p.m() as u64;
    let lhs = BigRat::from_integer(stats.total_bins.into());
    let rhs = max_total.clone() + BigRat::from_integer(constant.into());
    Ok(DominationReport {
        case_totals,
        max_case,
        max_total,
        realized_case,
        total_bins: stats.total_bins,
        constant,
        holds: lhs <= rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{builtin_paper_params, builtin_prior_params, Variant};
    use crate::rat::{parse_big, parse_rat, rat};

    fn paper2() -> ParameterSet {
        builtin_paper_params(2, Variant::AsPrinted).unwrap()
    }

    #[test]
    fn case_16_values_match_the_published_table() {
        let p = paper2();
        let v = case_vector(16, &p).unwrap();
        assert_eq!(v.per_type[1], BigRat::one());
        let w = parse_big("0.872756492818088").unwrap();
        assert_eq!(v.per_type[17], w);
        // type 20: (1-w) * alpha/theta + (1-alpha)/beta^2
        let alpha = parse_big("0.17175402209391144").unwrap();
        let want = (BigRat::one() - w) * alpha.clone() / BigRat::from_integer(3.into())
            + (BigRat::one() - alpha) / BigRat::from_integer(4.into());
        assert_eq!(v.per_type[20], want);
        assert_eq!((v.q, v.e), (16, 19));
    }

    #[test]
    fn small_items_weigh_scaled_volume() {
        let p = paper2();
        let v = case_vector(9, &p).unwrap();
        let s = rat(1, 200);
        let got = weight_of(&s, &v, &p).unwrap();
        let want = parse_big("12544/12320").unwrap() * big(&s) * big(&s);
        assert_eq!(got, want);
        // factor anchors: d=2 -> 12544/12320, prior-work M=11 -> 1.2
        assert_eq!(v.small_factor, parse_big("12544/12320").unwrap());
        assert_eq!(
            small_weight_factor(&builtin_prior_params()),
            parse_big("1.2").unwrap()
        );
    }

    #[test]
    fn case_17_weight_of_unit_blue_type_is_one() {
        let p = paper2();
        let v = case_vector(17, &p).unwrap();
        // any type with alpha = 0, beta = 1 weighs exactly 1
        assert_eq!(v.per_type[1], BigRat::one());
        assert_eq!(v.per_type[17], BigRat::one());
    }

    #[test]
    fn weights_never_drop_below_the_blue_share() {
        // Types q+1..=17 are exempt: their weight is w times the blue share
        // (all of their bins also hold red items, so the cost is split).
        for d in [2, 3] {
            let p = builtin_paper_params(d, Variant::AsPrinted).unwrap();
            for c in 2..=16u32 {
                let v = case_vector(c, &p).unwrap();
                for i in 1..=151usize {
                    if i > v.q && i <= 17 {
                        let w = v.w.clone().unwrap();
                        assert_eq!(v.per_type[i], w * blue_share(&p, i));
                        continue;
                    }
                    assert!(
                        v.per_type[i] >= blue_share(&p, i),
                        "case {} type {} d {}",
                        c,
                        i,
                        d
                    );
                }
            }
        }
    }

    #[test]
    fn case_17_agrees_with_other_cases_on_all_blue_types() {
        let p = paper2();
        let c17 = case_vector(17, &p).unwrap();
        for c in 1..=16 {
            let v = case_vector(c, &p).unwrap();
            for i in 18..=151 {
                if p.alpha(i).is_zero() {
                    assert_eq!(v.per_type[i], c17.per_type[i], "case {c} type {i}");
                }
            }
        }
    }

    #[test]
    fn rejects_wrong_shapes_and_cases() {
        let p = paper2();
        assert!(matches!(case_vector(0, &p), Err(WeightError::InvalidCase(0))));
        assert!(matches!(case_vector(18, &p), Err(WeightError::InvalidCase(18))));
        let prior = builtin_prior_params();
        assert!(matches!(case_vector(2, &prior), Err(WeightError::WrongShape(16))));
    }

    #[test]
    fn case_one_zeroes_the_mid_blue_types() {
        let p = paper2();
        let v = case_vector(1, &p).unwrap();
        for i in 2..=17 {
            assert!(v.per_type[i].is_zero());
        }
        for i in 22..=28 {
            assert_eq!(v.per_type[i], red_share(&p, i));
        }
        assert_eq!(v.per_type[18], parse_big("1/4").unwrap());
        assert_eq!(
            v.per_type[19],
            red_share(&p, 19) + blue_share(&p, 19)
        );
        let _ = parse_rat("1").unwrap();
    }
}
