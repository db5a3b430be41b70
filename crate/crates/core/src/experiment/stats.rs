//! Correlation and CHSH estimation from matched pairs, plus the marginal
//! chi-square check.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiment::CoincidencePair;

/// Sample correlation `E = mean(outcome_a * outcome_b)` with its standard
/// error over the matched pairs at one setting combination.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Correlation {
    pub e: f64,
    pub std_error: f64,
    pub n: usize,
}

/// Estimates `E(setting_a, setting_b)` from pairs at exactly those settings
/// (settings are carried verbatim from the configured lists, so bit-equality
/// is the right filter).
pub fn estimate_correlation(
    pairs: &[CoincidencePair],
    setting_a: f64,
    setting_b: f64,
) -> Result<Correlation> {
    let mut n = 0usize;
    let mut sum = 0.0;
    for p in pairs {
        if p.event_a.setting == setting_a && p.event_b.setting == setting_b {
            n += 1;
            sum += f64::from(p.event_a.outcome) * f64::from(p.event_b.outcome);
        }
    }
    if n == 0 {
        return Err(Error::NoPairsAtSettings {
            setting_a,
            setting_b,
        });
    }
    let e = sum / n as f64;
    let std_error = if n > 1 {
        // products are +-1, so the sample variance reduces to n(1 - E^2)/(n - 1)
        let variance = (1.0 - e * e) * n as f64 / (n as f64 - 1.0);
        (variance / n as f64).sqrt()
    } else {
        0.0
    };
    Ok(Correlation { e, std_error, n })
}

/// CHSH statistic with propagated standard error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChshEstimate {
    pub s: f64,
    pub std_error: f64,
}

/// `S = |E(a,b) - E(a,b') + E(a',b) + E(a',b')|`.
pub fn chsh_statistic(
    e_ab: &Correlation,
    e_ab_prime: &Correlation,
    e_a_prime_b: &Correlation,
    e_a_prime_b_prime: &Correlation,
) -> ChshEstimate {
    let s = (e_ab.e - e_ab_prime.e + e_a_prime_b.e + e_a_prime_b_prime.e).abs();
    let std_error = (e_ab.std_error.powi(2)
        + e_ab_prime.std_error.powi(2)
        + e_a_prime_b.std_error.powi(2)
        + e_a_prime_b_prime.std_error.powi(2))
    .sqrt();
    ChshEstimate { s, std_error }
}

/// Chi-square test of one wing's outcome marginals against 50/50, pooled
/// over setting combinations (1 degree of freedom per combination).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MarginalTest {
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
}

/// Tests the marginal of the given wing (`true` for wing A) over all
/// matched pairs.
pub fn marginal_chi_square(pairs: &[CoincidencePair], wing_a: bool) -> MarginalTest {
    use std::collections::BTreeMap;
    let mut cells: BTreeMap<(u64, u64), (u64, u64)> = BTreeMap::new();
    for p in pairs {
        let key = (p.event_a.setting.to_bits(), p.event_b.setting.to_bits());
        let outcome = if wing_a {
            p.event_a.outcome
        } else {
            p.event_b.outcome
        };
        let entry = cells.entry(key).or_insert((0, 0));
        if outcome > 0 {
            entry.0 += 1;
        } else {
            entry.1 += 1;
        }
    }
    let mut chi_square = 0.0;
    let mut dof = 0usize;
    for (_, (plus, minus)) in cells {
        let n = plus + minus;
        if n == 0 {
            continue;
        }
        let delta = plus as f64 - minus as f64;
        chi_square += delta * delta / n as f64;
        dof += 1;
    }
    let p_value = if dof == 0 {
        1.0
    } else {
        chi_square_p_value(chi_square, dof)
    };
    MarginalTest {
        chi_square,
        degrees_of_freedom: dof,
        p_value,
    }
}

/// Upper-tail probability of the chi-square distribution,
/// `P(X >= chi_square)` with `dof` degrees of freedom.
pub fn chi_square_p_value(chi_square: f64, dof: usize) -> f64 {
    regularized_gamma_q(dof as f64 / 2.0, chi_square / 2.0)
}

/// Regularized upper incomplete gamma Q(a, x) via the standard series /
/// continued-fraction split at x = a + 1.
fn regularized_gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_continued_fraction(a, x)
    }
}

fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut n = a;
    for _ in 0..500 {
        n += 1.0;
        term *= x / n;
        sum += term;
        if term.abs() < sum.abs() * 1e-16 {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

fn gamma_q_continued_fraction(a: f64, x: f64) -> f64 {
    // modified Lentz algorithm
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * (-x + a * x.ln() - ln_gamma(a)).exp()
}

/// Lanczos approximation (g = 7, n = 9), accurate to ~1e-13 for positive
/// arguments.
fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507343278686905,
        -0.13857109526572012,
        9.984_369_578_019_572e-6,
        1.5056327351493116e-7,
    ];
    let x = x - 1.0;
    let mut acc = 0.999_999_999_999_809_9;
    for (i, &c) in COEFFS.iter().enumerate() {
        acc += c / (x + i as f64 + 1.0);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}
