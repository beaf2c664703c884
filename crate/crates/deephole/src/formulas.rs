//! Exact integer evaluation of the band decomposition, the construction's
//! deep-hole count `f_n`, the closed-form bounds, and the exact-value verdict.
//!
//! Every floor of an irrational square-root expression is computed through an
//! integer predicate (squared comparison with a sign guard), never through
//! floating point: an off-by-one in one of those floors would corrupt the
//! exactness verdicts silently. `lower_closed` and `upper_iso` are the only
//! float-valued results and feed display columns, not decisions.

use serde::Serialize;

/// The unique writing `n = (12a² + 20a + 8) + k` with `0 ≤ k ≤ 24a + 31`
/// and `a ≥ -1` (the `a = -1` band covers `0 ≤ n ≤ 7`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub n: u64,
    pub a: i64,
    pub k: u64,
}

fn band_base(a: i64) -> i64 {
    12 * a * a + 20 * a + 8
}

/// Decompose `n` into its unique `(a, k)` band coordinates.
pub fn decompose(n: u64) -> Decomposition {
    // Keeps 3n+1 and the squared floor predicates inside 64-bit range.
    assert!(n <= 100_000_000_000_000_000, "n out of supported range");
    let sq = (3 * n + 1).isqrt() as i64;
    let mut a = (sq - 5).div_euclid(6);
    // The isqrt seed is already exact; keep the band checks anyway.
    while band_base(a) > n as i64 {
        a -= 1;
    }
    while band_base(a + 1) <= n as i64 {
        a += 1;
    }
    let k = n as i64 - band_base(a);
    debug_assert!((0..=24 * a + 31).contains(&k), "n={n} a={a} k={k}");
    Decomposition { n, a, k: k as u64 }
}

/// Deep-hole count of the extremal construction for a given `n`; 0 for
/// `n ≤ 7`. Where the construction's per-case k-ranges overlap, the maximum
/// of the applicable case values is taken (this is what keeps the sequence
/// monotone across the `a = 0` band, where one range is empty and two meet).
pub fn f_of(n: u64) -> u64 {
    if n <= 7 {
        return 0;
    }
    let d = decompose(n);
    let a = d.a as u64;
    let k = d.k;
    let q = (2 * a + 1) * (2 * a + 1);
    let mut best = None;
    // Case values are lazy: the floor arguments underflow outside their
    // own k-range.
    let mut consider = |lo: u64, hi: u64, value: &dyn Fn() -> u64| {
        if lo <= hi && (lo..=hi).contains(&k) {
            let v = value();
            best = Some(best.map_or(v, |b: u64| b.max(v)));
        }
    };
    consider(0, 4, &|| q);
    consider(5, 7, &|| q + 1);
    consider(8, 6 * a + 5, &|| q + (k - 2) / 3);
    consider(6 * a + 6, 6 * a + 9, &|| q + 2 * a + 1);
    consider(6 * a + 10, 6 * a + 12, &|| q + 2 * a + 2);
    consider(6 * a + 13, 12 * a + 13, &|| q + 2 + (k - 10) / 3);
    consider(12 * a + 14, 12 * a + 17, &|| q + 4 * a + 3);
    consider(12 * a + 18, 12 * a + 20, &|| q + 4 * a + 4);
    consider(12 * a + 21, 18 * a + 21, &|| q + 4 + (k - 18) / 3);
    consider(18 * a + 22, 18 * a + 25, &|| q + 6 * a + 5);
    consider(18 * a + 26, 18 * a + 28, &|| q + 6 * a + 6);
    consider(18 * a + 29, 24 * a + 31, &|| q + 6 + (k - 26) / 3);
    best.expect("the case ranges cover 0..=24a+31")
}

/// `n/3 − (16/9)√(3n+1) + 65/9`, the closed-form lower bound (display value).
pub fn lower_closed(n: u64) -> f64 {
    debug_assert!(n >= 8);
    n as f64 / 3.0 - (16.0 / 9.0) * ((3 * n + 1) as f64).sqrt() + 65.0 / 9.0
}

/// `(6n + 6 + π − √(48nπ + 12π + π²)) / 18`, the isoperimetric upper bound
/// (display value).
pub fn upper_iso(n: u64) -> f64 {
    use std::f64::consts::PI;
    let disc = (48.0 * n as f64 * PI + 12.0 * PI + PI * PI).sqrt();
    (6.0 * n as f64 + 6.0 + PI - disc) / 18.0
}

/// Largest `m` with `3n + add − 9m ≥ 0` and `(3n + add − 9m)² ≥ 16(3n + 1)`,
/// i.e. `⌊n/3 − (4/9)√(3n+1) + add/9⌋` evaluated exactly.
fn floor_of_shifted(n: u64, add: i64) -> i64 {
    let s = 3 * n as i64 + add;
    let t = 16 * (3 * n as i64 + 1);
    let pred = |m: i64| {
        let r = s - 9 * m;
        r >= 0 && r * r >= t
    };
    // Seed from the integer square root; off by at most one either way.
    let mut m = (s - 4 * (3 * n + 1).isqrt() as i64).div_euclid(9);
    while !pred(m) {
        m -= 1;
    }
    while pred(m + 1) {
        m += 1;
    }
    m
}

/// `⌊n/3 − (4/9)√(3n+1) + 5/9⌋`: the refined integer upper bound.
pub fn upper_refined(n: u64) -> u64 {
    debug_assert!(n >= 1);
    let m = floor_of_shifted(n, 5);
    debug_assert!(m >= 0);
    m as u64
}

/// `⌊n/3 − (4/9)√(3n+1) − 4/9⌋`: the candidate lower floor for the open
/// ambiguous cases. Always exactly one below [`upper_refined`].
pub fn lower_refined_candidate(n: u64) -> u64 {
    debug_assert!(n >= 8);
    let m = floor_of_shifted(n, -4);
    debug_assert!(m >= 0);
    m as u64
}

/// Exactness verdict for the maximum deep-hole count at a given `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExactResult {
    Exact(u64),
    Range { lo: u64, hi: u64 },
}

impl ExactResult {
    pub fn lo(&self) -> u64 {
        match *self {
            ExactResult::Exact(v) => v,
            ExactResult::Range { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> u64 {
        match *self {
            ExactResult::Exact(v) => v,
            ExactResult::Range { hi, .. } => hi,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ExactResult::Exact(_))
    }
}

impl std::fmt::Display for ExactResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            ExactResult::Exact(v) => write!(f, "Exact({v})"),
            ExactResult::Range { lo, hi } => write!(f, "Range({lo},{hi})"),
        }
    }
}

/// The exact maximum when the construction meets the refined upper bound;
/// otherwise the two-value range `[f_n, f_n + 1]`. Bound-meeting is the
/// certificate: a realized construction plus a proven upper bound needs no
/// case analysis.
pub fn exact_h(n: u64) -> ExactResult {
    if n <= 7 {
        return ExactResult::Exact(0);
    }
    let f = f_of(n);
    let upper = upper_refined(n);
    if f == upper {
        ExactResult::Exact(f)
    } else {
        debug_assert_eq!(upper, f + 1, "bounds never separate by more than one");
        ExactResult::Range { lo: f, hi: upper }
    }
}

/// Whether `(a, k)` satisfies one of the exact-value k-condition bullets.
///
/// The last bullet (`20a+25 ≤ k ≤ 24a+31`) carries the same `k ≢ 1 (mod 3)`
/// guard as its `18a+29 ≤ k ≤ 20a+24` sibling: without the guard the claimed
/// floor value exceeds the realizable construction count by one whenever the
/// floor bumps on a `k ≡ 1` step (first instance n = 33), so those k are
/// two-value ambiguous exactly like `k = 4`.
#[allow(clippy::manual_is_multiple_of)] // keep the k mod 3 guards parallel
pub fn covered_by_theorem(n: u64) -> bool {
    if n <= 7 {
        return true;
    }
    let d = decompose(n);
    let a = d.a as u64;
    let k = d.k;
    let in_range = |lo: u64, hi: u64| lo <= hi && (lo..=hi).contains(&k);
    in_range(0, 3)
        || in_range(5, 6)
        || (in_range(8, 4 * a + 3) && k % 3 != 1)
        || in_range(4 * a + 4, 6 * a + 7)
        || k == 6 * a + 10
        || (in_range(6 * a + 13, 9 * a + 8) && k % 3 != 0)
        || in_range(9 * a + 10, 12 * a + 16)
        || in_range(12 * a + 18, 12 * a + 19)
        || (in_range(12 * a + 21, 16 * a + 8) && k % 3 != 2)
        || in_range(16 * a + 19, 18 * a + 23)
        || k == 18 * a + 26
        || (in_range(18 * a + 29, 20 * a + 24) && k % 3 != 1)
        || (in_range(20 * a + 25, 24 * a + 31) && k % 3 != 1)
}

/// One row of the bounds table.
#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub n: u64,
    pub decomposition: Decomposition,
    pub f_n: u64,
    pub lower_closed: f64,
    pub upper_iso: f64,
    pub upper_refined: u64,
    pub lower_refined_candidate: u64,
    pub verdict: ExactResult,
}

impl BoundsReport {
    /// Requires `n ≥ 1`. Bounds that are undefined below `n = 8` are NaN /
    /// zero and render as empty columns.
    pub fn new(n: u64) -> BoundsReport {
        assert!(n >= 1);
        let decomposition = decompose(n);
        let f_n = f_of(n);
        let verdict = exact_h(n);
        BoundsReport {
            n,
            decomposition,
            f_n,
            lower_closed: if n >= 8 { lower_closed(n) } else { f64::NAN },
            upper_iso: upper_iso(n),
            upper_refined: upper_refined(n),
            lower_refined_candidate: if n >= 8 { lower_refined_candidate(n) } else { 0 },
            verdict,
        }
    }

    pub const CSV_HEADER: &'static str =
        "n,a,k,f_n,lower_closed,upper_iso,upper_refined,verdict,h_exact";

    /// One CSV row; `h_exact` is empty for range verdicts.
    pub fn to_csv_row(&self) -> String {
        let verdict = match self.verdict {
            ExactResult::Exact(_) => "Exact",
            ExactResult::Range { .. } => "Range",
        };
        let h_exact = match self.verdict {
            ExactResult::Exact(v) => v.to_string(),
            ExactResult::Range { .. } => String::new(),
        };
        let float_col = |v: f64| {
            if v.is_finite() {
                format!("{v:.6}")
            } else {
                String::new()
            }
        };
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.n,
            self.decomposition.a,
            self.decomposition.k,
            self.f_n,
            float_col(self.lower_closed),
            float_col(self.upper_iso),
            self.upper_refined,
            verdict,
            h_exact
        )
    }

    /// JSON object mirroring the CSV columns.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "a": self.decomposition.a,
            "k": self.decomposition.k,
            "f_n": self.f_n,
            "lower_closed": self.lower_closed,
            "upper_iso": self.upper_iso,
            "upper_refined": self.upper_refined,
            "verdict": match self.verdict {
                ExactResult::Exact(_) => "Exact",
                ExactResult::Range { .. } => "Range",
            },
            "h_exact": match self.verdict {
                ExactResult::Exact(v) => serde_json::json!(v),
                ExactResult::Range { .. } => serde_json::Value::Null,
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("bad range: require 1 <= from <= to, got {from}..={to}")]
    BadRange { from: u64, to: u64 },
}

/// Stream one report per `n` in `from..=to`.
pub fn bounds_table(
    from: u64,
    to: u64,
) -> Result<impl Iterator<Item = BoundsReport>, FormulaError> {
    if from < 1 || from > to {
        return Err(FormulaError::BadRange { from, to });
    }
    Ok((from..=to).map(BoundsReport::new))
}
