//! Closed-form Fock matrix elements evaluated with log-domain prefactors so
//! that factorials never overflow.

use super::{DMatrix, C64};

/// `ln k!` for `k = 0..=n_max`, built by the recurrence `ln k! = ln (k−1)! + ln k`.
pub fn ln_factorials(n_max: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(n_max + 1);
    let mut acc = 0.0;
    table.push(acc);
    for k in 1..=n_max {
        acc += (k as f64).ln();
        table.push(acc);
    }
    table
}

/// `ln C(n, k)` from a factorial table covering `n`.
pub fn ln_binomial(ln_fact: &[f64], n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    ln_fact[n] - ln_fact[k] - ln_fact[n - k]
}

/// Matrix of the displacement operator `D(β)` on the first `dim` Fock states.
///
/// Entries on and below the diagonal follow
/// `⟨k+d|D(β)|k⟩ = √(k!/(k+d)!) β^d e^{−|β|²/2} L_k^{(d)}(|β|²)`; entries above
/// it are the same magnitudes with `β^d` replaced by `(−β*)^d`.
/// The Laguerre recurrence runs on the prefactor-scaled sequence
/// `g_k = |β|^d e^{−|β|²/2} √(k!/(k+d)!) L_k^{(d)}`, which stays bounded by one.
/// Every retained element is exact; only columns beyond `dim` are dropped.
pub fn displacement_matrix(beta: C64, dim: usize) -> DMatrix<C64> {
    let x = beta.norm_sqr();
    if x == 0.0 {
        return DMatrix::identity(dim, dim);
    }
    let theta = beta.arg();
    let ln_fact = ln_factorials(dim);
    let mut out = DMatrix::zeros(dim, dim);
    let mut g = vec![0.0; dim];
    for d in 0..dim {
        let len = dim - d;
        let df = d as f64;
        g[0] = (0.5 * df * x.ln() - 0.5 * x - 0.5 * ln_fact[d]).exp();
        if len > 1 {
            g[1] = (1.0 + df - x) * g[0] / (1.0 + df).sqrt();
        }
        for k in 1..len.saturating_sub(1) {
            let kf = k as f64;
            g[k + 1] = ((2.0 * kf + 1.0 + df - x) * g[k] - (kf * (kf + df)).sqrt() * g[k - 1])
                / ((kf + 1.0) * (kf + 1.0 + df)).sqrt();
        }
        let lower = C64::from_polar(1.0, df * theta);
        let upper = if d % 2 == 0 { lower.conj() } else { -lower.conj() };
        for (k, &gk) in g.iter().enumerate().take(len) {
            out[(k + d, k)] = lower * gk;
            if d > 0 {
                out[(k, k + d)] = upper * gk;
            }
        }
    }
    out
}

/// Two-mode beam-splitter amplitude `⟨m1, n1+n2−m1| U |n1, n2⟩`.
///
/// `U` maps creation operators as `a† → t·a† + r·b†`, `b† → −r·a† + t·b†`
/// (with `t² + r² = 1`); the inverse splitter is `(t, −r)`. The element is the
/// finite (Jacobi-type) sum
/// `√(m1! m2!/(n1! n2!)) Σ_j C(n1,j) C(n2,m1−j) t^{2j+n2−m1} r^{n1+m1−2j} (−1)^{m1−j}`.
pub fn beam_splitter_amplitude(t: f64, r: f64, n1: usize, n2: usize, m1: usize) -> f64 {
    let total = n1 + n2;
    if m1 > total {
        return 0.0;
    }
    let m2 = total - m1;
    let ln_fact = ln_factorials(total);
    let ln_pref = 0.5 * (ln_fact[m1] + ln_fact[m2] - ln_fact[n1] - ln_fact[n2]);
    let j_lo = m1.saturating_sub(n2);
    let j_hi = n1.min(m1);
    let mut sum = 0.0;
    for j in j_lo..=j_hi {
        let t_pow = 2 * j + n2 - m1;
        let r_pow = n1 + m1 - 2 * j;
        let Some(ln_tr) = ln_power(t, t_pow).zip(ln_power(r, r_pow)) else {
            continue;
        };
        let mut sign = if (m1 - j).is_multiple_of(2) { 1.0 } else { -1.0 };
        if t < 0.0 && t_pow % 2 == 1 {
            sign = -sign;
        }
        if r < 0.0 && r_pow % 2 == 1 {
            sign = -sign;
        }
        let ln_term = ln_binomial(&ln_fact, n1, j) + ln_binomial(&ln_fact, n2, m1 - j) + ln_tr.0 + ln_tr.1 + ln_pref;
        sum += sign * ln_term.exp();
    }
    sum
}

/// `ln |v|^p`, or `None` when the power vanishes (`v = 0`, `p > 0`).
fn ln_power(v: f64, p: usize) -> Option<f64> {
    if p == 0 {
        Some(0.0)
    } else if v == 0.0 {
        None
    } else {
        Some(p as f64 * v.abs().ln())
    }
}

/// Amplitude of `|n+k, k⟩` in `S(ξ)|n, 0⟩` for a two-mode squeezer with
/// `cosh²ξ = gain`: `cosh^{−(n+1)}ξ · √C(n+k, k) · tanh^k ξ`.
pub fn squeezer_amplitude(ln_fact: &[f64], gain: f64, n: usize, k: usize) -> f64 {
    if gain == 1.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let nf = n as f64;
    let kf = k as f64;
    (-0.5 * (nf + 1.0) * gain.ln() + 0.5 * ln_binomial(ln_fact, n + k, k) + 0.5 * kf * ((gain - 1.0) / gain).ln()).exp()
}
