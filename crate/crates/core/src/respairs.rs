//! Candidate minimal free resolutions
//! `0 -> ⊕ O(-a_i) -> ⊕ O(-b_j) -> E -> 0` of the bundle restricted to a
//! plane, and their section counts.

use std::fmt;

use serde::Serialize;

/// A pair `((a_1..a_k), (b_1..b_{k+2}))`, both lists nondecreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ResolutionPair {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
}

impl fmt::Display for ResolutionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "({})({})", join(&self.a), join(&self.b))
    }
}

impl std::str::FromStr for ResolutionPair {
    type Err = String;

    /// Parses the `(a..)(b..)` notation used by `Display`.
    fn from_str(s: &str) -> Result<Self, String> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(|| format!("expected (a..)(b..), got {s:?}"))?;
        let (a, b) = inner.split_once(")(").ok_or_else(|| format!("expected two groups in {s:?}"))?;
        let list = |t: &str| -> Result<Vec<i64>, String> {
            if t.is_empty() {
                return Ok(Vec::new());
            }
            t.split(',').map(|x| x.parse().map_err(|_| format!("bad integer {x:?}"))).collect()
        };
        ResolutionPair::new(list(a)?, list(b)?)
    }
}

impl ResolutionPair {
    pub fn new(mut a: Vec<i64>, mut b: Vec<i64>) -> Result<Self, String> {
        if b.len() != a.len() + 2 {
            return Err(format!("need {} b-entries, got {}", a.len() + 2, b.len()));
        }
        a.sort_unstable();
        b.sort_unstable();
        Ok(ResolutionPair { a, b })
    }

    pub fn k(&self) -> usize {
        self.a.len()
    }

    pub fn c1(&self) -> i64 {
        self.a.iter().sum::<i64>() - self.b.iter().sum::<i64>()
    }

    /// From `Σa² - Σb² = 2c₂ - c₁²`.
    pub fn c2(&self) -> i64 {
        let sq = |v: &[i64]| v.iter().map(|x| x * x).sum::<i64>();
        (sq(&self.a) - sq(&self.b) + self.c1() * self.c1()) / 2
    }

    /// Which of the six admissibility conditions hold, in order.
    pub fn conditions(&self) -> [bool; 6] {
        let k = self.k() as i64;
        let sq = |v: &[i64]| v.iter().map(|x| x * x).sum::<i64>();
        let last_b = *self.b.last().expect("k + 2 >= 2 entries");
        [
            self.c1() == -1,
            sq(&self.a) - sq(&self.b) == 7,
            self.a.iter().enumerate().all(|(i, &ai)| ai > self.b[i + 2]),
            self.b[0] >= 0,
            2 * last_b + k <= 11,
            self.a.last().is_none_or(|&ak| 2 * ak + k <= 12),
        ]
    }

    pub fn is_admissible(&self) -> bool {
        self.conditions().iter().all(|&c| c)
    }

    /// `h⁰(E(t))` for `t = 0..=t_max`.
    pub fn cohomology_table(&self, t_max: i64) -> Vec<i64> {
        (0..=t_max).map(|t| h0(self, t)).collect()
    }

    pub fn h0(&self, t: i64) -> i64 {
        h0(self, t)
    }

    /// No sections: `b₁ >= 1`.
    pub fn is_stable(&self) -> bool {
        self.b[0] >= 1
    }
}

/// `h⁰(O_P2(d))`
pub fn plane_sections(d: i64) -> i64 {
    if d < 0 {
        0
    } else {
        (d + 2) * (d + 1) / 2
    }
}

// Line bundles on the plane have no H¹, so global sections are exact.
fn h0(p: &ResolutionPair, t: i64) -> i64 {
    p.b.iter().map(|b| plane_sections(t - b)).sum::<i64>() - p.a.iter().map(|a| plane_sections(t - a)).sum::<i64>()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub k_max: usize,
    pub a_max: i64,
    pub b_max: i64,
}

/// Bounds implied by the conditions themselves: `a_i >= b_{i+2} + 1 >= 1`
/// with `2a_k + k <= 12` gives `k <= 10` and `a <= 6`; `2b_{k+2} + k <= 11`
/// gives `b <= 5`.
pub const DERIVED_BOUNDS: SearchBounds = SearchBounds { k_max: 10, a_max: 6, b_max: 5 };

/// All admissible pairs, sorted.
pub fn enumerate_pairs() -> Vec<ResolutionPair> {
    enumerate_pairs_within(DERIVED_BOUNDS)
}

/// Exhaustive search in a box; only conditions (1) and (3) are used to
/// prune, everything else is re-checked on each candidate.
pub fn enumerate_pairs_within(bounds: SearchBounds) -> Vec<ResolutionPair> {
    let mut out = Vec::new();
    for k in 0..=bounds.k_max {
        for_each_nondecreasing(k + 2, 0, bounds.b_max, &mut |b| {
            let target = b.iter().sum::<i64>() - 1;
            let lower: Vec<i64> = (0..k).map(|i| b[i + 2] + 1).collect();
            fill_a(&lower, bounds.a_max, target, &mut Vec::new(), &mut |a| {
                let p = ResolutionPair { a: a.to_vec(), b: b.to_vec() };
                if p.is_admissible() {
                    out.push(p);
                }
            });
        });
    }
    out.sort();
    out
}

fn for_each_nondecreasing(len: usize, lo: i64, hi: i64, f: &mut impl FnMut(&[i64])) {
    fn go(buf: &mut Vec<i64>, len: usize, lo: i64, hi: i64, f: &mut impl FnMut(&[i64])) {
        if buf.len() == len {
            f(buf);
            return;
        }
        for v in lo..=hi {
            buf.push(v);
            go(buf, len, v, hi, f);
            buf.pop();
        }
    }
    go(&mut Vec::with_capacity(len), len, lo, hi, f);
}

fn fill_a(lower: &[i64], hi: i64, remaining: i64, buf: &mut Vec<i64>, f: &mut impl FnMut(&[i64])) {
    let i = buf.len();
    if i == lower.len() {
        if remaining == 0 {
            f(buf);
        }
        return;
    }
    let left = (lower.len() - i) as i64;
    let start = lower[i].max(buf.last().copied().unwrap_or(i64::MIN));
    for v in start..=hi {
        // Every later entry is at least v.
        if v * left > remaining {
            break;
        }
        if hi * left < remaining {
            return;
        }
        buf.push(v);
        fill_a(lower, hi, remaining - v, buf, f);
        buf.pop();
    }
}
