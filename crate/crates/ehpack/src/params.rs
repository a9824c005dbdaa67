//! Parameter sets: interval tables, red/blue configuration and derived values.
//!
//! All interval boundaries and fractions are exact rationals; classification
//! of an item at an interval endpoint is therefore deterministic. Three
//! built-in families exist: the 151-type square/cube sets, the 17-type set of
//! the earlier algorithm that the counter-examples target, and the 7-type
//! worked-example set.

use crate::params_data;
use crate::rat::{parse_rat, rat, Rat};
use num::{One, Zero};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Interval boundaries `t` plus the dimension and the small-item threshold
/// denominator `M` (items of side <= 1/M are small).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalTable {
    pub d: u32,
    /// Number of large-item types N.
    pub n_types: usize,
    /// Small threshold denominator M; `t[N+1] == 1/M`.
    pub m_small: u32,
    /// Boundaries, 1-based: `t[1] = 1` down to `t[N+1] = 1/M`. `t[0]` unused.
    pub t: Vec<Rat>,
}

impl IntervalTable {
    /// Upper endpoint of type `i`'s interval `(t[i+1], t[i]]`.
    pub fn upper(&self, i: usize) -> Rat {
        self.t[i]
    }
    pub fn lower(&self, i: usize) -> Rat {
        self.t[i + 1]
    }
    pub fn small_threshold(&self) -> Rat {
        self.t[self.n_types + 1]
    }
}

/// Coloring fractions, reserved-space set and per-type grid parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedBlueConfig {
    /// Fraction of red items per type, 1-based.
    pub alpha: Vec<Rat>,
    /// Reserved strip widths, 1-based (`delta_set[0]` is the unused Delta_0 = 0).
    pub delta_set: Vec<Rat>,
    /// Map from type to index into `delta_set`; 0 means no strip.
    pub phi: Vec<usize>,
    /// Blue items per axis, 1-based.
    pub beta: Vec<u32>,
    /// Red items per axis in the smallest strip, 1-based.
    pub gamma: Vec<u32>,
}

/// Values computed from the table rather than read from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedParams {
    /// Strip width offered by a type-i blue bin: `Delta[phi(i)]`, 0 if phi(i)=0.
    pub delta: Vec<Rat>,
    /// Red capacity per bin: `beta^d - (beta-gamma)^d`.
    pub theta: Vec<u64>,
    /// Cost-split parameter per analysis case (cases 2..=16); empty when the
    /// 17-case analysis does not apply to this set.
    pub case_w: BTreeMap<u32, Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterSet {
    pub intervals: IntervalTable,
    pub rb: RedBlueConfig,
    pub derived: DerivedParams,
    pub label: String,
}

/// Which reading of the two inconsistent rows of the auxiliary beta table to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    /// Beta exactly as printed (rows 134 and 140 disagree with `floor(1/t)`).
    #[default]
    AsPrinted,
    /// Rows 134 and 140 replaced by `floor(1/t)` (93 and 99).
    Corrected,
}

#[derive(Debug, thiserror::Error)]
pub enum ParamError {
    #[error("unsupported dimension {0} (expected 2 or 3)")]
    UnsupportedDimension(u32),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// One failed validation rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Type index the rule failed for, when applicable.
    pub type_index: Option<usize>,
    pub rule: &'static str,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.type_index {
            Some(i) => write!(f, "type {}: {}: {}", i, self.rule, self.detail),
            None => write!(f, "{}: {}", self.rule, self.detail),
        }
    }
}

impl ParameterSet {
    pub fn d(&self) -> u32 {
        self.intervals.d
    }
    pub fn n(&self) -> usize {
        self.intervals.n_types
    }
    pub fn m(&self) -> u32 {
        self.intervals.m_small
    }
    pub fn upper(&self, i: usize) -> Rat {
        self.intervals.upper(i)
    }
    pub fn lower(&self, i: usize) -> Rat {
        self.intervals.lower(i)
    }
    pub fn alpha(&self, i: usize) -> Rat {
        self.rb.alpha[i]
    }
    pub fn beta(&self, i: usize) -> u32 {
        self.rb.beta[i]
    }
    pub fn gamma(&self, i: usize) -> u32 {
        self.rb.gamma[i]
    }
    pub fn phi(&self, i: usize) -> usize {
        self.rb.phi[i]
    }
    pub fn delta(&self, i: usize) -> Rat {
        self.derived.delta[i]
    }
    pub fn theta(&self, i: usize) -> u64 {
        self.derived.theta[i]
    }
    /// Blue grid capacity `beta^d` of one bin.
    pub fn blue_capacity(&self, i: usize) -> u64 {
        (self.beta(i) as u64).pow(self.d())
    }
    /// Space a red item of type `j` needs along each face: `gamma_j * t_j`.
    pub fn red_need(&self, j: usize) -> Rat {
        rat(self.gamma(j) as i128, 1) * self.upper(j)
    }
    /// Largest strip width in the set.
    pub fn delta_max(&self) -> Rat {
        *self.rb.delta_set.last().unwrap()
    }
}

/// `gamma` rule: 0 for types too large to ever be red, otherwise at least one
/// item per axis and as many as fit in the smallest strip.
pub fn gamma_rule(t_i: Rat, delta_1: Rat, delta_k: Rat) -> u32 {
    if t_i > delta_k {
        0
    } else {
        let fit = (delta_1 / t_i).floor().to_integer() as u32;
        fit.max(1)
    }
}

/// Populates the derived block from the table data.
/// `case_w` is a parameter of the analysis, not derivable from the table;
/// pass an empty map for sets without the 17-case analysis.
pub fn derive(
    intervals: &IntervalTable,
    rb: &RedBlueConfig,
    case_w: BTreeMap<u32, Rat>,
) -> DerivedParams {
    let n = intervals.n_types;
    let d = intervals.d;
    let mut delta = vec![Rat::zero(); n + 1];
    let mut theta = vec![0u64; n + 1];
    for i in 1..=n {
        delta[i] = if rb.phi[i] == 0 {
            Rat::zero()
        } else {
            rb.delta_set[rb.phi[i]]
        };
        let b = rb.beta[i] as u64;
        let g = rb.gamma[i] as u64;
        theta[i] = b.pow(d) - (b - g).pow(d);
    }
    DerivedParams {
        delta,
        theta,
        case_w,
    }
}

fn exact_floor_inv(t: Rat) -> u32 {
    // floor(1/t) for t = p/q > 0
    (*t.denom() / *t.numer()) as u32
}

/// Checks every table rule; an empty result means the set is consistent.
pub fn validate(p: &ParameterSet) -> Vec<Violation> {
    let mut out = Vec::new();
    let iv = &p.intervals;
    let rb = &p.rb;
    let n = iv.n_types;
    let one = Rat::one();

    if iv.t.len() != n + 2 {
        out.push(Violation {
            type_index: None,
            rule: "shape",
            detail: format!("expected {} boundaries, found {}", n + 1, iv.t.len() - 1),
        });
        return out;
    }
    if iv.t[1] != one {
        out.push(Violation {
            type_index: None,
            rule: "boundary",
            detail: format!("t_1 = {} (must be 1)", iv.t[1]),
        });
    }
    if iv.t[n + 1] != rat(1, iv.m_small as i128) {
        out.push(Violation {
            type_index: None,
            rule: "boundary",
            detail: format!("t_{} = {} (must be 1/{})", n + 1, iv.t[n + 1], iv.m_small),
        });
    }
    for i in 1..=n {
        if iv.t[i] <= iv.t[i + 1] {
            out.push(Violation {
                type_index: Some(i),
                rule: "monotonicity",
                detail: format!("t_{} = {} <= t_{} = {}", i, iv.t[i], i + 1, iv.t[i + 1]),
            });
        }
    }

    let k = rb.delta_set.len() - 1;
    if k == 0 {
        out.push(Violation {
            type_index: None,
            rule: "delta-set",
            detail: "empty strip set".into(),
        });
        return out;
    }
    let delta_1 = rb.delta_set[1];
    let delta_k = rb.delta_set[k];
    if delta_1 <= Rat::zero() || delta_k >= rat(1, 2) {
        out.push(Violation {
            type_index: None,
            rule: "delta-set",
            detail: format!("strip widths must lie in (0, 1/2): {:?}", rb.delta_set),
        });
    }
    for j in 1..k {
        if rb.delta_set[j] >= rb.delta_set[j + 1] {
            out.push(Violation {
                type_index: None,
                rule: "delta-set",
                detail: format!("Delta_{} >= Delta_{}", j, j + 1),
            });
        }
    }

    for i in 1..=n {
        let t_i = iv.t[i];
        if rb.phi[i] > k {
            out.push(Violation {
                type_index: Some(i),
                rule: "phi-range",
                detail: format!("phi = {} out of 0..={}", rb.phi[i], k),
            });
            continue;
        }
        if rb.phi[i] != 0 {
            let lhs = rb.delta_set[rb.phi[i]];
            let free = one - rat(rb.beta[i] as i128, 1) * t_i;
            if lhs > free {
                out.push(Violation {
                    type_index: Some(i),
                    rule: "admissibility",
                    detail: format!("Delta_phi = {} > 1 - beta*t = {}", lhs, free),
                });
            }
        }
        if rb.alpha[i] < Rat::zero() || rb.alpha[i] > one {
            out.push(Violation {
                type_index: Some(i),
                rule: "alpha-range",
                detail: format!("alpha = {}", rb.alpha[i]),
            });
        }
        if t_i > delta_k && !rb.alpha[i].is_zero() {
            out.push(Violation {
                type_index: Some(i),
                rule: "alpha-zero",
                detail: format!("t = {} > Delta_k = {} but alpha = {}", t_i, delta_k, rb.alpha[i]),
            });
        }
        let want_beta = exact_floor_inv(t_i);
        if rb.beta[i] != want_beta {
            out.push(Violation {
                type_index: Some(i),
                rule: "beta-floor",
                detail: format!("beta = {} but floor(1/t) = {}", rb.beta[i], want_beta),
            });
        }
        if t_i > delta_k && rb.gamma[i] != 0 {
            out.push(Violation {
                type_index: Some(i),
                rule: "gamma-zero",
                detail: format!("t = {} > Delta_k = {} but gamma = {}", t_i, delta_k, rb.gamma[i]),
            });
        }
        if rb.gamma[i] > 0 {
            let want = gamma_rule(t_i, delta_1, delta_k);
            if rb.gamma[i] != want {
                out.push(Violation {
                    type_index: Some(i),
                    rule: "gamma-formula",
                    detail: format!("gamma = {} but rule gives {}", rb.gamma[i], want),
                });
            }
        }
        if rb.gamma[i] > rb.beta[i] {
            out.push(Violation {
                type_index: Some(i),
                rule: "gamma-range",
                detail: format!("gamma = {} > beta = {}", rb.gamma[i], rb.beta[i]),
            });
        }
    }

    // Derived block consistency.
    let fresh = derive(iv, rb, p.derived.case_w.clone());
    for i in 1..=n {
        if p.derived.delta[i] != fresh.delta[i] {
            out.push(Violation {
                type_index: Some(i),
                rule: "delta-derived",
                detail: format!("delta = {} but Delta_phi = {}", p.derived.delta[i], fresh.delta[i]),
            });
        }
        if p.derived.theta[i] != fresh.theta[i] {
            out.push(Violation {
                type_index: Some(i),
                rule: "theta-derived",
                detail: format!("theta = {} but formula gives {}", p.derived.theta[i], fresh.theta[i]),
            });
        }
    }
    for (c, w) in &p.derived.case_w {
        if *w < Rat::zero() || *w > one {
            out.push(Violation {
                type_index: None,
                rule: "w-range",
                detail: format!("case {} w = {}", c, w),
            });
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Built-in sets
// ---------------------------------------------------------------------------

/// Upper interval endpoints for types 1..=54 of the 151-type sets.
const T_UPPER_HEAD: [&str; 54] = [
    "1", "0.7", "0.6875", "0.675", "0.67", "0.668", "0.667", "0.6667", "2/3", "0.666", "0.665",
    "0.6625", "0.65625", "0.65", "7/11", "0.625", "0.6", "0.5", "0.4", "0.375", "4/11", "0.35",
    "0.34375", "0.3375", "0.335", "0.334", "0.3335", "0.33335", "1/3", "0.3333", "0.333", "0.332",
    "0.33", "0.325", "0.3125", "0.3", "3/11", "1/4", "1/5", "2/11", "1/6", "0.15", "1/7", "1/8",
    "1/9", "1/10", "1/11", "1/12", "1/13", "0.075", "1/14", "1/15", "1/16", "0.06",
];

/// (beta, gamma, phi) for types 1..=54.
const BGP_HEAD: [(u32, u32, usize); 54] = [
    (1, 0, 0),
    (1, 0, 1),
    (1, 0, 2),
    (1, 0, 3),
    (1, 0, 4),
    (1, 0, 5),
    (1, 0, 6),
    (1, 0, 7),
    (1, 0, 8),
    (1, 0, 9),
    (1, 0, 10),
    (1, 0, 11),
    (1, 0, 12),
    (1, 0, 13),
    (1, 0, 14),
    (1, 0, 15),
    (1, 0, 16),
    (2, 0, 0),
    (2, 1, 0),
    (2, 1, 0),
    (2, 1, 0),
    (2, 1, 1),
    (2, 1, 2),
    (2, 1, 3),
    (2, 1, 4),
    (2, 1, 5),
    (2, 1, 6),
    (2, 1, 7),
    (3, 1, 0),
    (3, 1, 0),
    (3, 1, 0),
    (3, 1, 0),
    (3, 1, 0),
    (3, 1, 0),
    (3, 1, 0),
    (3, 1, 0),
    (3, 1, 0),
    (4, 1, 0),
    (5, 1, 0),
    (5, 1, 0),
    (6, 1, 0),
    (6, 2, 0),
    (7, 2, 0),
    (8, 2, 0),
    (9, 2, 0),
    (10, 3, 0),
    (11, 3, 0),
    (12, 3, 0),
    (13, 3, 0),
    (13, 4, 0),
    (14, 4, 0),
    (15, 4, 0),
    (16, 4, 0),
    (16, 5, 0),
];

/// (type, beta, gamma) for the rows of the main table that the auxiliary
/// beta table does not carry.
const BG_MID: [(usize, u32, u32); 6] = [
    (62, 23, 7),
    (63, 24, 7),
    (64, 25, 7),
    (65, 26, 7),
    (66, 26, 8),
    (74, 33, 10),
];

/// Strip widths Delta_1..Delta_16 of the 151-type sets.
const DELTA_SET: [&str; 16] = [
    "0.3", "0.3125", "0.325", "0.33", "0.332", "0.333", "0.3333", "1/3", "0.334", "0.335",
    "0.3375", "0.34375", "0.35", "4/11", "0.375", "0.4",
];

fn tail_upper(i: usize) -> Rat {
    match i {
        55..=61 => rat(1, (i - 38) as i128),
        62 => rat(3, 70),
        63..=65 => rat(1, (i - 39) as i128),
        66 => rat(3, 80),
        67..=73 => rat(1, (i - 40) as i128),
        74 => rat(3, 100),
        75..=152 => rat(1, (i - 41) as i128),
        _ => unreachable!("tail_upper({i})"),
    }
}

/// The full 151-type set for square (`d = 2`) or cube (`d = 3`) packing.
pub fn builtin_paper_params(d: u32, variant: Variant) -> Result<ParameterSet, ParamError> {
    if d != 2 && d != 3 {
        return Err(ParamError::UnsupportedDimension(d));
    }
    let n = 151usize;
    let mut t = vec![rat(2, 1); n + 2];
    for (idx, s) in T_UPPER_HEAD.iter().enumerate() {
        t[idx + 1] = parse_rat(s).unwrap();
    }
    for (i, slot) in t.iter_mut().enumerate().take(n + 2).skip(55) {
        *slot = tail_upper(i);
    }

    let mut beta = vec![0u32; n + 1];
    let mut gamma = vec![0u32; n + 1];
    let mut phi = vec![0usize; n + 1];
    for i in 1..=54 {
        let (b, g, f) = BGP_HEAD[i - 1];
        beta[i] = b;
        gamma[i] = g;
        phi[i] = f;
    }
    for (i, b, g) in params_data::BETA_GAMMA_TAIL {
        beta[i as usize] = b;
        gamma[i as usize] = g;
    }
    for (i, b, g) in BG_MID {
        beta[i] = b;
        gamma[i] = g;
    }
    if variant == Variant::Corrected {
        beta[134] = 93;
        beta[140] = 99;
    }

    let alpha_strs = if d == 2 {
        &params_data::ALPHA_SQUARE
    } else {
        &params_data::ALPHA_CUBE
    };
    let mut alpha = vec![Rat::zero(); n + 1];
    for i in 1..=n {
        alpha[i] = parse_rat(alpha_strs[i - 1]).unwrap();
    }

    let mut delta_set = vec![Rat::zero()];
    delta_set.extend(DELTA_SET.iter().map(|s| parse_rat(s).unwrap()));

    let w_strs = if d == 2 {
        &params_data::W_SQUARE
    } else {
        &params_data::W_CUBE
    };
    let case_w: BTreeMap<u32, Rat> = w_strs
        .iter()
        .map(|(c, s)| (*c, parse_rat(s).unwrap()))
        .collect();

    let intervals = IntervalTable {
        d,
        n_types: n,
        m_small: 111,
        t,
    };
    let rb = RedBlueConfig {
        alpha,
        delta_set,
        phi,
        beta,
        gamma,
    };
    let derived = derive(&intervals, &rb, case_w);
    let label = format!(
        "paper{}-{}",
        d,
        match variant {
            Variant::AsPrinted => "as-printed",
            Variant::Corrected => "corrected",
        }
    );
    Ok(ParameterSet {
        intervals,
        rb,
        derived,
        label,
    })
}

/// The 17-type square-packing set of the earlier algorithm (d = 2 only).
pub fn builtin_prior_params() -> ParameterSet {
    // (upper, beta, gamma, phi, alpha)
    const ROWS: [(&str, u32, u32, usize, &str); 16] = [
        ("1", 1, 0, 0, "0"),
        ("0.705", 1, 0, 2, "0"),
        ("0.6475", 1, 0, 3, "0"),
        ("0.60", 1, 0, 4, "0"),
        ("0.5", 2, 0, 0, "0"),
        ("0.4", 2, 1, 1, "0.1348"),
        ("0.3525", 2, 1, 2, "0.2"),
        ("1/3", 3, 0, 0, "0"),
        ("0.295", 3, 1, 0, "0.3096"),
        ("1/4", 4, 1, 0, "0.2248"),
        ("1/5", 5, 1, 0, "0.16"),
        ("1/6", 6, 1, 0, "0.13"),
        ("1/7", 7, 1, 0, "0.1"),
        ("1/8", 8, 1, 0, "0.1"),
        ("1/9", 9, 1, 0, "0.1"),
        ("0.1", 10, 2, 0, "0.05"),
    ];
    let n = 16usize;
    let mut t = vec![rat(2, 1); n + 2];
    let mut beta = vec![0u32; n + 1];
    let mut gamma = vec![0u32; n + 1];
    let mut phi = vec![0usize; n + 1];
    let mut alpha = vec![Rat::zero(); n + 1];
    for (idx, (ts, b, g, f, a)) in ROWS.iter().enumerate() {
        let i = idx + 1;
        t[i] = parse_rat(ts).unwrap();
        beta[i] = *b;
        gamma[i] = *g;
        phi[i] = *f;
        alpha[i] = parse_rat(a).unwrap();
    }
    t[n + 1] = rat(1, 11);
    let delta_set = vec![
        Rat::zero(),
        parse_rat("0.2").unwrap(),
        parse_rat("0.295").unwrap(),
        parse_rat("0.3525").unwrap(),
        parse_rat("0.4").unwrap(),
    ];
    let intervals = IntervalTable {
        d: 2,
        n_types: n,
        m_small: 11,
        t,
    };
    let rb = RedBlueConfig {
        alpha,
        delta_set,
        phi,
        beta,
        gamma,
    };
    let derived = derive(&intervals, &rb, BTreeMap::new());
    ParameterSet {
        intervals,
        rb,
        derived,
        label: "prior2".into(),
    }
}

/// The small 7-type set used by the published step-by-step packing example.
pub fn builtin_appendix_params() -> ParameterSet {
    let n = 6usize;
    let t = vec![
        rat(2, 1),
        rat(1, 1),
        rat(7, 10),
        rat(2, 3),
        rat(1, 2),
        rat(1, 3),
        rat(3, 10),
        rat(1, 10),
    ];
    let beta = vec![0, 1, 1, 1, 2, 3, 3];
    let gamma = vec![0, 0, 0, 0, 0, 1, 1];
    let phi = vec![0, 0, 1, 2, 0, 0, 0];
    let alpha = vec![
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        rat(2, 5),
        rat(2, 5),
    ];
    let delta_set = vec![Rat::zero(), rat(3, 10), rat(1, 3)];
    let intervals = IntervalTable {
        d: 2,
        n_types: n,
        m_small: 10,
        t,
    };
    let rb = RedBlueConfig {
        alpha,
        delta_set,
        phi,
        beta,
        gamma,
    };
    let derived = derive(&intervals, &rb, BTreeMap::new());
    ParameterSet {
        intervals,
        rb,
        derived,
        label: "appendix2".into(),
    }
}

/// Resolves a CLI parameter-set name (`paper2`, `paper3`, `prior2`,
/// `appendix2`, or a file path).
pub fn resolve_params(name: &str, variant: Variant) -> Result<ParameterSet, ParamError> {
    match name {
        "paper2" => builtin_paper_params(2, variant),
        "paper3" => builtin_paper_params(3, variant),
        "prior2" => Ok(builtin_prior_params()),
        "appendix2" => Ok(builtin_appendix_params()),
        path => load_params(std::path::Path::new(path)),
    }
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn params_to_string(p: &ParameterSet) -> String {
    let mut s = String::new();
    writeln!(s, "[meta]").unwrap();
    writeln!(s, "d {}", p.d()).unwrap();
    writeln!(s, "m {}", p.m()).unwrap();
    writeln!(s, "label {}", p.label).unwrap();
    writeln!(s, "[intervals]").unwrap();
    for i in 1..=p.n() {
        writeln!(
            s,
            "{} {} {} {}",
            i,
            fmt_rat(&p.intervals.t[i]),
            p.beta(i),
            p.gamma(i)
        )
        .unwrap();
    }
    writeln!(s, "{} {}", p.n() + 1, fmt_rat(&p.intervals.t[p.n() + 1])).unwrap();
    writeln!(s, "[alpha]").unwrap();
    for i in 1..=p.n() {
        writeln!(s, "{} {}", i, fmt_rat(&p.rb.alpha[i])).unwrap();
    }
    writeln!(s, "[delta]").unwrap();
    for (j, v) in p.rb.delta_set.iter().enumerate().skip(1) {
        writeln!(s, "{} {}", j, fmt_rat(v)).unwrap();
    }
    writeln!(s, "[phi]").unwrap();
    for i in 1..=p.n() {
        writeln!(s, "{} {}", i, p.phi(i)).unwrap();
    }
    writeln!(s, "[w]").unwrap();
    for (c, w) in &p.derived.case_w {
        writeln!(s, "{} {}", c, fmt_rat(w)).unwrap();
    }
    s
}

pub fn save_params(p: &ParameterSet, path: &std::path::Path) -> Result<(), ParamError> {
    std::fs::write(path, params_to_string(p))?;
    Ok(())
}

pub fn params_from_string(text: &str) -> Result<ParameterSet, ParamError> {
    #[derive(PartialEq, Clone, Copy)]
    enum Sec {
        None,
        Meta,
        Intervals,
        Alpha,
        Delta,
        Phi,
        W,
    }
    let perr = |line: usize, msg: String| ParamError::Parse { line, msg };
    let mut sec = Sec::None;
    let mut d = 0u32;
    let mut m = 0u32;
    let mut label = String::new();
    let mut t_rows: Vec<(usize, Rat)> = Vec::new();
    let mut bg_rows: Vec<(usize, u32, u32)> = Vec::new();
    let mut alpha_rows: Vec<(usize, Rat)> = Vec::new();
    let mut delta_rows: Vec<(usize, Rat)> = Vec::new();
    let mut phi_rows: Vec<(usize, usize)> = Vec::new();
    let mut w_rows: Vec<(u32, Rat)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        match line {
            "[meta]" => {
                sec = Sec::Meta;
                continue;
            }
            "[intervals]" => {
                sec = Sec::Intervals;
                continue;
            }
            "[alpha]" => {
                sec = Sec::Alpha;
                continue;
            }
            "[delta]" => {
                sec = Sec::Delta;
                continue;
            }
            "[phi]" => {
                sec = Sec::Phi;
                continue;
            }
            "[w]" => {
                sec = Sec::W;
                continue;
            }
            _ => {}
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let want = |n: usize| -> Result<(), ParamError> {
            if fields.len() != n {
                Err(perr(lineno, format!("expected {} fields, got {}", n, fields.len())))
            } else {
                Ok(())
            }
        };
        let prat = |s: &str| parse_rat(s).map_err(|e| perr(lineno, e.to_string()));
        let pint = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| perr(lineno, format!("bad integer `{}`", s)))
        };
        match sec {
            Sec::None => return Err(perr(lineno, "data before first section header".into())),
            Sec::Meta => match fields[0] {
                "d" => {
                    want(2)?;
                    d = pint(fields[1])? as u32;
                }
                "m" => {
                    want(2)?;
                    m = pint(fields[1])? as u32;
                }
                "label" => {
                    label = line["label".len()..].trim().to_string();
                }
                other => return Err(perr(lineno, format!("unknown meta key `{}`", other))),
            },
            Sec::Intervals => {
                if fields.len() == 2 {
                    t_rows.push((pint(fields[0])?, prat(fields[1])?));
                } else {
                    want(4)?;
                    let i = pint(fields[0])?;
                    t_rows.push((i, prat(fields[1])?));
                    bg_rows.push((i, pint(fields[2])? as u32, pint(fields[3])? as u32));
                }
            }
            Sec::Alpha => {
                want(2)?;
                alpha_rows.push((pint(fields[0])?, prat(fields[1])?));
            }
            Sec::Delta => {
                want(2)?;
                delta_rows.push((pint(fields[0])?, prat(fields[1])?));
            }
            Sec::Phi => {
                want(2)?;
                phi_rows.push((pint(fields[0])?, pint(fields[1])?));
            }
            Sec::W => {
                want(2)?;
                w_rows.push((pint(fields[0])? as u32, prat(fields[1])?));
            }
        }
    }

    if d == 0 || m == 0 {
        return Err(perr(0, "missing [meta] d/m".into()));
    }
    let n = t_rows.len().saturating_sub(1);
    if n == 0 {
        return Err(perr(0, "no interval rows".into()));
    }
    let mut t = vec![rat(2, 1); n + 2];
    for (i, v) in t_rows {
        if i == 0 || i > n + 1 {
            return Err(perr(0, format!("interval index {} out of range", i)));
        }
        t[i] = v;
    }
    let mut beta = vec![0u32; n + 1];
    let mut gamma = vec![0u32; n + 1];
    for (i, b, g) in bg_rows {
        if i == 0 || i > n {
            return Err(perr(0, format!("beta/gamma index {} out of range", i)));
        }
        beta[i] = b;
        gamma[i] = g;
    }
    let mut alpha = vec![Rat::zero(); n + 1];
    for (i, v) in alpha_rows {
        if i == 0 || i > n {
            return Err(perr(0, format!("alpha index {} out of range", i)));
        }
        alpha[i] = v;
    }
    let k = delta_rows.iter().map(|(j, _)| *j).max().unwrap_or(0);
    let mut delta_set = vec![Rat::zero(); k + 1];
    for (j, v) in delta_rows {
        if j == 0 {
            return Err(perr(0, "delta index 0 is reserved".into()));
        }
        delta_set[j] = v;
    }
    let mut phi = vec![0usize; n + 1];
    for (i, v) in phi_rows {
        if i == 0 || i > n {
            return Err(perr(0, format!("phi index {} out of range", i)));
        }
        phi[i] = v;
    }
    for (i, &f) in phi.iter().enumerate().skip(1) {
        if f > k {
            return Err(perr(0, format!("phi({}) = {} exceeds strip count {}", i, f, k)));
        }
    }
    let case_w: BTreeMap<u32, Rat> = w_rows.into_iter().collect();
    let intervals = IntervalTable {
        d,
        n_types: n,
        m_small: m,
        t,
    };
    let rb = RedBlueConfig {
        alpha,
        delta_set,
        phi,
        beta,
        gamma,
    };
    let derived = derive(&intervals, &rb, case_w);
    Ok(ParameterSet {
        intervals,
        rb,
        derived,
        label,
    })
}

pub fn load_params(path: &std::path::Path) -> Result<ParameterSet, ParamError> {
    let text = std::fs::read_to_string(path)?;
    params_from_string(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::parse_rat;

    #[test]
    fn paper_sets_have_expected_anchor_values() {
        let p2 = builtin_paper_params(2, Variant::AsPrinted).unwrap();
        assert_eq!(p2.n(), 151);
        assert_eq!(p2.m(), 111);
        assert_eq!(p2.alpha(19), parse_rat("0.11526431542309074").unwrap());
        // type 18: interval (0.4, 0.5], beta 2, gamma 0, no strip
        assert_eq!(p2.lower(18), rat(2, 5));
        assert_eq!(p2.upper(18), rat(1, 2));
        assert_eq!(p2.beta(18), 2);
        assert_eq!(p2.gamma(18), 0);
        assert_eq!(p2.phi(18), 0);
        assert_eq!(p2.intervals.t[152], rat(1, 111));
        // theta examples: type 20 (beta 2, gamma 1) -> 3 for d=2
        assert_eq!(p2.theta(20), 3);
        assert_eq!(p2.theta(151), 110 * 110 - 77 * 77);

        let p3 = builtin_paper_params(3, Variant::AsPrinted).unwrap();
        assert!(p3.alpha(75).is_zero());
        assert_eq!(p3.theta(20), 8 - 1);

        assert!(builtin_paper_params(4, Variant::AsPrinted).is_err());
    }

    #[test]
    fn validate_flags_only_the_two_printed_beta_rows() {
        let p2 = builtin_paper_params(2, Variant::AsPrinted).unwrap();
        let v = validate(&p2);
        let mut rows: Vec<_> = v.iter().map(|x| (x.type_index, x.rule)).collect();
        rows.sort();
        assert_eq!(rows, vec![(Some(134), "beta-floor"), (Some(140), "beta-floor")]);

        let fixed = builtin_paper_params(2, Variant::Corrected).unwrap();
        assert!(validate(&fixed).is_empty());
        let p3 = builtin_paper_params(3, Variant::Corrected).unwrap();
        assert!(validate(&p3).is_empty());
    }

    #[test]
    fn prior_and_appendix_sets_validate_clean() {
        let prior = builtin_prior_params();
        assert!(validate(&prior).is_empty(), "{:?}", validate(&prior));
        // Table anchors: type 10 row, theta of type 16, alpha of type 5.
        assert_eq!(prior.lower(10), rat(1, 5));
        assert_eq!(prior.upper(10), rat(1, 4));
        assert_eq!(prior.beta(10), 4);
        assert_eq!(prior.gamma(10), 1);
        assert_eq!(prior.theta(10), 7);
        assert_eq!(prior.alpha(10), parse_rat("0.2248").unwrap());
        assert_eq!(prior.theta(16), 36);
        assert!(prior.alpha(5).is_zero());

        let app = builtin_appendix_params();
        assert!(validate(&app).is_empty(), "{:?}", validate(&app));
        assert_eq!(app.theta(5), 5);
        assert_eq!(app.theta(6), 5);
    }

    #[test]
    fn injected_admissibility_failure_is_named() {
        let mut p = builtin_paper_params(2, Variant::Corrected).unwrap();
        // Give type 17 a strip wider than its free space.
        p.rb.phi[17] = 16;
        p.rb.delta_set[16] = parse_rat("0.45").unwrap();
        let v = validate(&p);
        assert!(v.iter().any(|x| x.rule == "admissibility" && x.type_index == Some(17)));
    }

    #[test]
    fn derive_matches_worked_examples() {
        // d=2, beta 5, gamma 2 -> theta 16
        let b: u64 = 5;
        let g: u64 = 2;
        assert_eq!(b.pow(2) - (b - g).pow(2), 16);
        // gamma rule at t = 1/30, Delta_1 = 0.21 -> 6
        assert_eq!(gamma_rule(rat(1, 30), parse_rat("0.21").unwrap(), rat(2, 5)), 6);
        // phi = 0 -> delta = 0 (any built-in plain type)
        let p = builtin_paper_params(2, Variant::AsPrinted).unwrap();
        assert!(p.delta(18).is_zero());
    }

    #[test]
    fn gamma_column_matches_rule_for_red_capable_types() {
        let p = builtin_paper_params(2, Variant::AsPrinted).unwrap();
        let d1 = p.rb.delta_set[1];
        let dk = p.delta_max();
        for i in 19..=151 {
            if p.gamma(i) > 0 {
                assert_eq!(p.gamma(i), gamma_rule(p.upper(i), d1, dk), "type {}", i);
            }
        }
        for i in 1..=18 {
            assert!(p.alpha(i).is_zero(), "type {}", i);
        }
        for i in 1..=151 {
            if !p.alpha(i).is_zero() {
                assert!(p.theta(i) >= 1);
                assert!(p.upper(i) <= dk);
            }
        }
    }

    #[test]
    fn round_trips_through_text_format() {
        for p in [
            builtin_paper_params(2, Variant::AsPrinted).unwrap(),
            builtin_paper_params(3, Variant::Corrected).unwrap(),
            builtin_prior_params(),
            builtin_appendix_params(),
        ] {
            let text = params_to_string(&p);
            let back = params_from_string(&text).unwrap();
            assert_eq!(p, back);
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "[meta]\nd 2\nm 11\nlabel x\n[intervals]\n1 3/ 1 0\n";
        match params_from_string(bad) {
            Err(ParamError::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("expected parse error, got {:?}", other),
        }
    }

    #[test]
    fn non_monotone_file_reports_monotonicity() {
        let p = builtin_appendix_params();
        let mut text = params_to_string(&p);
        text = text.replace("2 7/10 1 0", "2 71/100 1 0"); // now t_2 < t_3 fails? no: raises t_2
        let mut loaded = params_from_string(&text).unwrap();
        // force non-monotone: make t_3 bigger than t_2
        loaded.intervals.t[3] = rat(3, 4);
        let v = validate(&loaded);
        assert!(v.iter().any(|x| x.rule == "monotonicity"));
    }
}
