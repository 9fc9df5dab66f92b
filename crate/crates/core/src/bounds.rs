//! Upper bounds on the length function `l_q(4,3)` and their lifts to
//! codimension `r = 3t + 1`.
//!
//! Everything here is a pure function of its inputs. Integer quantities (the
//! Bound A recurrence, lift lengths) are computed exactly in 128-bit
//! arithmetic; analytic quantities use f64 with evaluation orders chosen to
//! avoid cancellation. `q` arguments are not restricted to prime powers: the
//! formulas are real functions, and only callers that index actual codes need
//! to care.

use crate::pg3::theta;
use thiserror::Error;

/// Volume threshold above which the explicit-bound inequality may drop its
/// `+1` correction term.
pub const V_THRESHOLD: u128 = 1_516_750;

/// Validity floor used for Bound B.
pub const BOUND_B_Q0: u128 = 100_000;

/// Published positivity threshold for [`delta_q0`].
pub const DELTA_Q_STATED: u64 = 88_274;

/// Validity floor of the known bound at `lambda = cbrt(36)`.
pub const KNOWN_BOUND_Q_FLOOR: u128 = 14_983;

/// The `lambda` minimizing the known bound's leading constant.
pub fn lambda_star() -> f64 {
    36f64.cbrt()
}

/// `cbrt(q ln q)`, the normalization used throughout.
pub fn norm_factor(q: f64) -> f64 {
    (q * q.ln()).cbrt()
}

pub fn normalized(n: f64, q: f64) -> f64 {
    n / norm_factor(q)
}

#[derive(Debug, Error, PartialEq)]
pub enum BoundError {
    #[error("argument outside the bound's domain: {0}")]
    OutOfDomain(&'static str),
    #[error("q = {q} outside the bound's validity region ({detail})")]
    OutOfRegion { q: u128, detail: &'static str },
    #[error("codimension {0} is not of the form 3t+1 with t >= 1")]
    BadCodimension(u32),
    #[error("lift needs a starting length n0 < q, got n0 = {n0}, q = {q}")]
    LiftInapplicable { n0: u128, q: u128 },
    #[error("integer overflow; computation needs wider arithmetic")]
    WidenArithmetic,
}

fn binom2(w: u64) -> u128 {
    (w as u128) * (w as u128 - 1) / 2
}

/// Lower bound on `S_w(P)`, the number of candidate points whose addition
/// newly covers a fixed uncovered point, for `K_w` on the elliptic quadric.
pub fn s_w_min(w: u64, q: u64) -> u128 {
    assert!(w >= 3 && q >= 2);
    let c = binom2(w);
    if 2 * c - 1 <= q as u128 {
        c * (q as u128 - c)
    } else if q % 2 == 1 {
        (q as u128 * q as u128 - 1) / 4
    } else {
        q as u128 * q as u128 / 4
    }
}

/// Implicit Bound A: the exact integer recurrence on uncovered counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundA {
    /// Step at which the recurrence first reaches an uncovered count <= 1.
    pub w: u64,
    /// `w + 1`: the bound on the saturating-set size.
    pub n: u64,
    /// Uncovered counts; `trajectory[i]` is the count after `3 + i` points,
    /// starting at `q^3` and ending with the first value <= 1.
    pub trajectory: Vec<u128>,
}

impl BoundA {
    pub fn normalized(&self, q: u64) -> f64 {
        normalized(self.n as f64, q as f64)
    }
}

pub fn bound_a(q: u64) -> Result<BoundA, BoundError> {
    assert!(q >= 2);
    let q128 = q as u128;
    let mut u = q128 * q128 * q128;
    let mut trajectory = vec![u];
    let mut w = 3u64;
    loop {
        let den = q128 * q128 + 1 - w as u128;
        if den == 0 {
            return Err(BoundError::WidenArithmetic);
        }
        let s = s_w_min(w, q);
        let num = s.checked_mul(u).ok_or(BoundError::WidenArithmetic)?;
        let delta = num.div_ceil(den).min(u);
        u -= delta;
        trajectory.push(u);
        if u <= 1 {
            return Ok(BoundA { w, n: w + 1, trajectory });
        }
        w += 1;
    }
}

/// Implicit Bound B: the smallest `w` with
/// `(w-1)^3 - 0.3 w^5 / q >= 18 q ln q` while `2 C(w,2) - 1 <= q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundB {
    pub w: u64,
    pub n: u64,
    /// Whether `q` is inside the proven validity region `q >= 10^5`.
    pub in_validity: bool,
}

/// `None` when the side condition `2 C(w,2) - 1 <= q` is exhausted before the
/// analytic inequality is met (the bound is then not applicable at this `q`).
pub fn bound_b(q: u64) -> Option<BoundB> {
    assert!(q >= 2);
    let qf = q as f64;
    let rhs = 18.0 * qf * qf.ln();
    let mut w = 3u64;
    while 2 * binom2(w) - 1 <= q as u128 {
        let wf = w as f64;
        let lhs = (wf - 1.0).powi(3) - 0.3 * wf.powi(5) / qf;
        if lhs >= rhs {
            return Some(BoundB { w, n: w + 1, in_validity: q as u128 >= BOUND_B_Q0 });
        }
        w += 1;
    }
    None
}

/// `delta(q) = (sqrt(q) - 1)^3 - 0.3 q sqrt(q) - 18 q ln q`, the margin of
/// the Bound B inequality at `w = sqrt(q)`.
pub fn delta_q0(q: f64) -> f64 {
    let s = q.sqrt();
    (s - 1.0).powi(3) - 0.3 * q * s - 18.0 * q * q.ln()
}

/// Smallest integer `q` with `delta(q) > 0`, by doubling plus bisection.
pub fn delta_q0_threshold() -> u64 {
    let mut hi = 2u64;
    while delta_q0(hi as f64) <= 0.0 {
        hi *= 2;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if delta_q0(mid as f64) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `F(k,q) = ((k-18)/0.302)^3 / k^5 - ln^2(q)/q`; increasing in `q` beyond
/// `e^2` and increasing in `k` on the useful window.
pub fn f_kq(k: f64, q: f64) -> Result<f64, BoundError> {
    if k <= 18.0 {
        return Err(BoundError::OutOfDomain("F(k,q) needs k > 18"));
    }
    Ok(f_const(k) - ln2_over_q(q))
}

#[inline]
fn f_const(k: f64) -> f64 {
    ((k - 18.0) / 0.302).powi(3) / k.powi(5)
}

#[inline]
fn ln2_over_q(q: f64) -> f64 {
    let l = q.ln();
    l * l / q
}

/// Smallest integer `q` with `F(k, q) >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WkRoot {
    pub ceil_w: u128,
    /// True when the root lies strictly above `V_THRESHOLD`, i.e. the
    /// explicit bound is actually usable for this `k`.
    pub usable: bool,
}

pub fn solve_w(k: f64) -> Result<WkRoot, BoundError> {
    if k <= 18.0 {
        return Err(BoundError::OutOfDomain("solve_w needs k > 18"));
    }
    let c = f_const(k);
    let f = |q: u128| c - ln2_over_q(q as f64);

    let start = V_THRESHOLD + 1;
    let (mut lo, mut hi);
    let usable;
    if f(start) >= 0.0 {
        // Root at or below V: locate it anyway (F is increasing for q >= 8)
        // and flag the bound unusable.
        lo = 8;
        hi = start;
        usable = false;
        debug_assert!(f(lo) < 0.0);
    } else {
        lo = start;
        hi = start * 2;
        while f(hi) < 0.0 {
            lo = hi;
            hi = hi.checked_mul(2).ok_or(BoundError::WidenArithmetic)?;
        }
        usable = true;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if f(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(WkRoot { ceil_w: hi, usable })
}

/// Explicit Bound C: `n = cbrt(k q ln q) + 2`, valid for `q >= ceil(W(k))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundC {
    pub n: f64,
    /// `cbrt(k) + 2 / cbrt(q ln q)`, the normalized form.
    pub normalized: f64,
    pub q_floor: u128,
}

pub fn bound_c(k: f64, q: u128) -> Result<BoundC, BoundError> {
    let root = solve_w(k)?;
    if !root.usable {
        return Err(BoundError::OutOfRegion { q, detail: "W(k) does not exceed V" });
    }
    if q < root.ceil_w {
        return Err(BoundError::OutOfRegion { q, detail: "q below ceil(W(k))" });
    }
    let qf = q as f64;
    Ok(BoundC {
        n: (k * qf * qf.ln()).cbrt() + 2.0,
        normalized: k.cbrt() + 2.0 / norm_factor(qf),
        q_floor: root.ceil_w,
    })
}

/// Asymptotic Bound D: `cbrt((18 + eps) q ln q) + 2`, for `q` large enough
/// (no hard validity floor; asymptotic by nature).
pub fn bound_d(q: u128, eps: f64) -> Result<f64, BoundError> {
    if eps <= 0.0 {
        return Err(BoundError::OutOfDomain("bound D needs eps > 0"));
    }
    let qf = q as f64;
    Ok(((18.0 + eps) * qf * qf.ln()).cbrt() + 2.0)
}

/// Computer-search Bound E, `c * cbrt(q ln q)` with a piecewise constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundE {
    pub coefficient: f64,
    pub n: f64,
}

pub fn bound_e(q: u64) -> Result<BoundE, BoundError> {
    let coefficient = match q {
        13..=4373 => 2.61,
        4374..=7723 => 2.65,
        7724..=7949 => 2.69,
        _ => {
            return Err(BoundError::OutOfRegion {
                q: q as u128,
                detail: "Bound E covers 13 <= q <= 7949",
            })
        }
    };
    Ok(BoundE { coefficient, n: coefficient * norm_factor(q as f64) })
}

/// The known upper bound `Omega_{lambda,3}(q) * cbrt(q ln q) + 6`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnownBound {
    pub omega: f64,
    pub n: f64,
    /// True when `q >= 14983`, the proven floor for `lambda = cbrt(36)`.
    pub in_validity: bool,
}

pub fn known_bound(q: u128, lambda: f64) -> Result<KnownBound, BoundError> {
    if lambda <= 0.0 {
        return Err(BoundError::OutOfDomain("known bound needs lambda > 0"));
    }
    let qf = q as f64;
    let upsilon = lambda * lambda / 2.0 * ln2_over_q(qf).cbrt();
    let beta = lambda - 2.0 / norm_factor(qf);
    let den = beta * beta * (2.0 - 1.0 / qf - upsilon);
    if den <= 0.0 {
        return Err(BoundError::OutOfRegion { q, detail: "known-bound denominator <= 0" });
    }
    let omega = lambda + 36.0 / den;
    Ok(KnownBound {
        omega,
        n: omega * norm_factor(qf) + 6.0,
        in_validity: q >= KNOWN_BOUND_Q_FLOOR,
    })
}

pub fn known_bound_default(q: u128) -> Result<KnownBound, BoundError> {
    known_bound(q, lambda_star())
}

fn lift_t(r: u32) -> Result<u32, BoundError> {
    if r < 4 || r % 3 != 1 {
        return Err(BoundError::BadCodimension(r));
    }
    Ok((r - 1) / 3)
}

/// `Delta(r,q) = 3 floor(q^{(r-7)/3}) + 2 floor(q^{(r-10)/3}) + [r = 13]`.
/// Negative exponents floor to zero.
pub fn delta_lift(r: u32, q: u128) -> Result<u128, BoundError> {
    let t = lift_t(r)?;
    let pow = |e: i64| -> Result<u128, BoundError> {
        if e < 0 {
            return Ok(0);
        }
        let mut acc: u128 = 1;
        for _ in 0..e {
            acc = acc.checked_mul(q).ok_or(BoundError::WidenArithmetic)?;
        }
        Ok(acc)
    };
    let a = pow(t as i64 - 2)?.checked_mul(3).ok_or(BoundError::WidenArithmetic)?;
    let b = pow(t as i64 - 3)?.checked_mul(2).ok_or(BoundError::WidenArithmetic)?;
    let kron = u128::from(r == 13);
    a.checked_add(b)
        .and_then(|s| s.checked_add(kron))
        .ok_or(BoundError::WidenArithmetic)
}

/// Lift length `n0 * q^{(r-4)/3} + Delta(r,q)`; needs `n0 < q`.
pub fn lift_length(n0: u128, r: u32, q: u128) -> Result<u128, BoundError> {
    let t = lift_t(r)?;
    if n0 >= q {
        return Err(BoundError::LiftInapplicable { n0, q });
    }
    let mut acc = n0;
    for _ in 0..(t - 1) {
        acc = acc.checked_mul(q).ok_or(BoundError::WidenArithmetic)?;
    }
    acc.checked_add(delta_lift(r, q)?).ok_or(BoundError::WidenArithmetic)
}

/// Known bound lifted to codimension `r`:
/// `n_knw(4,q) * q^{(r-4)/3} + 3 theta_{t-1,q}`.
pub fn known_lift(r: u32, q: u128, lambda: f64) -> Result<f64, BoundError> {
    let t = lift_t(r)?;
    let base = known_bound(q, lambda)?.n;
    let qf = q as f64;
    let th = match theta(t - 1, q) {
        Ok(v) => v as f64,
        // past 128-bit range, fall back to the real formula
        Err(_) => (qf.powi(t as i32) - 1.0) / (qf - 1.0),
    };
    Ok(base * qf.powi(t as i32 - 1) + 3.0 * th)
}

/// Whether `0.302 x^5 >= 0.3 (x+1)^5` at `x = cbrt((18+eps) q ln q)`.
pub fn check_v(q: u128, eps: f64) -> Result<bool, BoundError> {
    if eps <= 0.0 {
        return Err(BoundError::OutOfDomain("check_v needs eps > 0"));
    }
    let qf = q as f64;
    let x = ((18.0 + eps) * qf * qf.ln()).cbrt();
    Ok(0.302 * x.powi(5) >= 0.3 * (x + 1.0).powi(5))
}

/// Ratio of the known bound to Bound A at the same `q`.
pub fn ratio_knw_over_a(q: u64) -> Result<f64, BoundError> {
    let knw = known_bound_default(q as u128)?;
    let a = bound_a(q)?;
    Ok(knw.n / a.n as f64)
}

/// The `k` values of the published table, largest first; the first row is
/// the boundary case whose root falls below `V`.
pub const TABLE1_KS: [f64; 12] = [
    20.340, 20.339, 20.335, 20.0, 19.7, 19.0, 18.5, 18.1, 18.05, 18.01, 18.001, 18.0001,
];

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub k: f64,
    pub ceil_w: u128,
    pub usable: bool,
    /// `n_C / cbrt(q ln q)` at `q = ceil_w`; `None` when unusable.
    pub nc_norm: Option<f64>,
    /// `n_knw / cbrt(q ln q)` at `q = ceil_w`.
    pub nknw_norm: Option<f64>,
    /// `n_knw / n_C` at `q = ceil_w`.
    pub ratio: Option<f64>,
}

pub fn table1() -> Vec<Table1Row> {
    TABLE1_KS
        .iter()
        .map(|&k| {
            let root = solve_w(k).expect("table k values are > 18");
            if !root.usable {
                return Table1Row {
                    k,
                    ceil_w: root.ceil_w,
                    usable: false,
                    nc_norm: None,
                    nknw_norm: None,
                    ratio: None,
                };
            }
            let q = root.ceil_w;
            let c = bound_c(k, q).expect("q = ceil_w is inside the region");
            let knw = known_bound_default(q).expect("table q values are large");
            Table1Row {
                k,
                ceil_w: q,
                usable: true,
                nc_norm: Some(c.normalized),
                nknw_norm: Some(normalized(knw.n, q as f64)),
                ratio: Some(knw.n / c.n),
            }
        })
        .collect()
}

/// One sweep row: every bound evaluated at `q`, with `None` wherever `q` is
/// outside that bound's validity region.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub q: u64,
    pub n_a: Option<u64>,
    pub n_a_norm: Option<f64>,
    pub n_b: Option<u64>,
    pub n_b_norm: Option<f64>,
    pub n_c: Option<f64>,
    pub n_c_norm: Option<f64>,
    pub n_knw: Option<f64>,
    pub n_knw_norm: Option<f64>,
    pub ratio_knw_a: Option<f64>,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str =
        "q,nA,nA_norm,nB,nB_norm,nC,nC_norm,nknw,nknw_norm,ratio_knw_A";

    /// Computes the selected bounds at `q`; `k` parametrizes Bound C.
    pub fn compute(q: u64, k: f64, selection: &BoundSelection) -> Self {
        let qf = q as f64;
        let mut report = BoundReport {
            q,
            n_a: None,
            n_a_norm: None,
            n_b: None,
            n_b_norm: None,
            n_c: None,
            n_c_norm: None,
            n_knw: None,
            n_knw_norm: None,
            ratio_knw_a: None,
        };
        if selection.a {
            if let Ok(a) = bound_a(q) {
                report.n_a = Some(a.n);
                report.n_a_norm = Some(a.normalized(q));
            }
        }
        if selection.b {
            if let Some(b) = bound_b(q) {
                if b.in_validity {
                    report.n_b = Some(b.n);
                    report.n_b_norm = Some(normalized(b.n as f64, qf));
                }
            }
        }
        if selection.c {
            if let Ok(c) = bound_c(k, q as u128) {
                report.n_c = Some(c.n);
                report.n_c_norm = Some(c.normalized);
            }
        }
        if selection.knw {
            if let Ok(knw) = known_bound_default(q as u128) {
                if knw.in_validity {
                    report.n_knw = Some(knw.n);
                    report.n_knw_norm = Some(normalized(knw.n, qf));
                }
            }
        }
        if selection.ratio {
            if let (Some(knw), Some(a)) = (report.n_knw, report.n_a) {
                report.ratio_knw_a = Some(knw / a as f64);
            } else if let (Ok(knw), Ok(a)) = (known_bound_default(q as u128), bound_a(q)) {
                if knw.in_validity {
                    report.ratio_knw_a = Some(knw.n / a.n as f64);
                }
            }
        }
        report
    }

    pub fn csv_row(&self) -> String {
        fn int_cell(v: Option<u64>) -> String {
            v.map(|x| x.to_string()).unwrap_or_default()
        }
        fn real_cell(v: Option<f64>) -> String {
            v.map(|x| format!("{x:.4}")).unwrap_or_default()
        }
        fn norm_cell(v: Option<f64>) -> String {
            v.map(|x| format!("{x:.6}")).unwrap_or_default()
        }
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.q,
            int_cell(self.n_a),
            norm_cell(self.n_a_norm),
            int_cell(self.n_b),
            norm_cell(self.n_b_norm),
            real_cell(self.n_c),
            norm_cell(self.n_c_norm),
            real_cell(self.n_knw),
            norm_cell(self.n_knw_norm),
            norm_cell(self.ratio_knw_a),
        )
    }
}

/// Which bounds a sweep should evaluate.
#[derive(Debug, Clone, Copy, Default)]
pub struct BoundSelection {
    pub a: bool,
    pub b: bool,
    pub c: bool,
    pub knw: bool,
    pub ratio: bool,
}
