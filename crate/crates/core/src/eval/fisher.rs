//! Fisher's exact test and odds ratios for 2×2 tables.
//!
//! Tables are laid out as
//!
//! ```text
//!            present  absent
//! group A       a        b
//! group B       c        d
//! ```

use serde::{Deserialize, Serialize};

use super::kappa::Z_95;

/// Relative slack when comparing a table's point probability with the
/// observed one.
const RELATIVE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherResult {
    pub p_value: f64,
    /// A row or column margin is zero; `p_value` is 1 by convention.
    pub degenerate: bool,
}

fn ln_factorial_table(n: usize) -> Vec<f64> {
    let mut t = vec![0.0; n + 1];
    for i in 1..=n {
        t[i] = t[i - 1] + (i as f64).ln();
    }
    t
}

/// Two-sided Fisher's exact test.
///
/// Sums the hypergeometric probabilities of every table with the observed
/// margins whose probability does not exceed the observed table's.
pub fn fisher_exact(a: u64, b: u64, c: u64, d: u64) -> FisherResult {
    let (r1, r2) = (a + b, c + d);
    let (c1, c2) = (a + c, b + d);
    if r1 == 0 || r2 == 0 || c1 == 0 || c2 == 0 {
        return FisherResult {
            p_value: 1.0,
            degenerate: true,
        };
    }
    let n = (r1 + r2) as usize;
    let lf = ln_factorial_table(n);
    let fixed = lf[r1 as usize] + lf[r2 as usize] + lf[c1 as usize] + lf[c2 as usize] - lf[n];
    let ln_p = |x: u64| {
        fixed
            - lf[x as usize]
            - lf[(r1 - x) as usize]
            - lf[(c1 - x) as usize]
            - lf[(r2 + x - c1) as usize]
    };
    let lo = c1.saturating_sub(r2);
    let hi = r1.min(c1);
    let observed = ln_p(a);
    let cutoff = observed + RELATIVE_SLACK.ln_1p();
    let mut p = 0.0;
    for x in lo..=hi {
        let lp = ln_p(x);
        if lp <= cutoff {
            p += lp.exp();
        }
    }
    FisherResult {
        p_value: p.min(1.0),
        degenerate: false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OddsRatio {
    pub odds_ratio: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// 0.5 was added to every cell because one was zero.
    pub corrected: bool,
}

/// Odds ratio `ad/bc` with a Woolf (log) 95% interval. When any cell is zero
/// all four cells get +0.5 first.
pub fn odds_ratio_ci(a: u64, b: u64, c: u64, d: u64) -> OddsRatio {
    let corrected = a == 0 || b == 0 || c == 0 || d == 0;
    let adj = if corrected { 0.5 } else { 0.0 };
    let (a, b, c, d) = (
        a as f64 + adj,
        b as f64 + adj,
        c as f64 + adj,
        d as f64 + adj,
    );
    let or = (a * d) / (b * c);
    let se = (1.0 / a + 1.0 / b + 1.0 / c + 1.0 / d).sqrt();
    let ln_or = or.ln();
    OddsRatio {
        odds_ratio: or,
        ci_low: (ln_or - Z_95 * se).exp(),
        ci_high: (ln_or + Z_95 * se).exp(),
        corrected,
    }
}
