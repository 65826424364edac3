//! Special functions behind the χ² and Student-t tail probabilities.

use libm::{exp, fabs, log};

const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;
const MAX_ITER: usize = 10_000;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        let pi = core::f64::consts::PI;
        return log(pi / libm::sin(pi * x)) - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * log(2.0 * core::f64::consts::PI) + (x + 0.5) * log(t) - t + log(acc)
}

/// Regularized lower incomplete gamma `P(a, x)`.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        gamma_series(a, x)
    } else {
        1.0 - gamma_continued_fraction(a, x)
    }
}

/// Regularized upper incomplete gamma `Q(a, x) = 1 - P(a, x)`.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_series(a, x)
    } else {
        gamma_continued_fraction(a, x)
    }
}

fn gamma_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if fabs(term) < fabs(sum) * EPS {
            break;
        }
    }
    sum * exp(-x + a * log(x) - ln_gamma(a))
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
fn gamma_continued_fraction(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if fabs(d) < TINY {
            d = TINY;
        }
        c = b + an / c;
        if fabs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if fabs(delta - 1.0) < EPS {
            break;
        }
    }
    exp(-x + a * log(x) - ln_gamma(a)) * h
}

/// Upper-tail probability of the χ² distribution with `df` degrees of freedom.
///
/// `df = 0` carries no evidence and returns 1.
pub fn chi2_sf(statistic: f64, df: usize) -> f64 {
    if df == 0 || statistic <= 0.0 {
        return 1.0;
    }
    gamma_q(df as f64 / 2.0, statistic / 2.0).clamp(0.0, 1.0)
}

/// Regularized incomplete beta `I_x(a, b)`.
pub fn beta_inc(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * log(x) + b * libm::log1p(-x);
    let front = exp(ln_front);
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b
    }
}

fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if fabs(d) < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if fabs(d) < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if fabs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if fabs(d) < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if fabs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if fabs(delta - 1.0) < EPS {
            break;
        }
    }
    h
}

/// Two-sided tail probability `P(|T| >= |t|)` of Student's t with `df`
/// (possibly fractional) degrees of freedom.
pub fn student_t_two_sided(t: f64, df: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    let x = df / (df + t * t);
    beta_inc(df / 2.0, 0.5, x).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_known_values() {
        // Γ(n) = (n-1)!
        let mut fact = 1.0f64;
        for n in 1..20 {
            assert!(
                (ln_gamma(n as f64) - libm::log(fact)).abs() < 1e-12,
                "n = {n}"
            );
            fact *= n as f64;
        }
        let sqrt_pi_ln = 0.5 * libm::log(core::f64::consts::PI);
        assert!((ln_gamma(0.5) - sqrt_pi_ln).abs() < 1e-13);
    }

    #[test]
    fn chi2_reference_points() {
        assert_eq!(chi2_sf(0.0, 1), 1.0);
        assert_eq!(chi2_sf(0.0, 7), 1.0);
        assert_eq!(chi2_sf(5.0, 0), 1.0);
        // 3.841 is the 95% quantile of χ²₁
        assert!((chi2_sf(3.841, 1) - 0.05).abs() < 5e-4);
        // χ²₁ tail equals erfc(sqrt(x/2))
        let want = libm::erfc(libm::sqrt(10.0));
        assert!((chi2_sf(20.0, 1) - want).abs() < 1e-15);
        assert!((chi2_sf(20.0, 1) - 7.744e-6).abs() < 1e-9);
        // χ²₂ tail is exp(-x/2)
        for x in [0.1, 1.0, 5.0, 40.0] {
            assert!((chi2_sf(x, 2) - libm::exp(-x / 2.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn gamma_p_and_q_complement() {
        for a in [0.5, 1.0, 3.5, 50.0] {
            for x in [0.01, 1.0, 4.0, 60.0] {
                assert!((gamma_p(a, x) + gamma_q(a, x) - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn beta_inc_closed_forms() {
        // I_x(a, 1) = x^a and I_x(1, b) = 1 - (1-x)^b
        for x in [0.1, 0.3, 0.5, 0.9] {
            assert!((beta_inc(2.5, 1.0, x) - libm::pow(x, 2.5)).abs() < 1e-13);
            assert!((beta_inc(1.0, 3.0, x) - (1.0 - libm::pow(1.0 - x, 3.0))).abs() < 1e-13);
        }
        assert_eq!(beta_inc(2.0, 2.0, 0.0), 0.0);
        assert_eq!(beta_inc(2.0, 2.0, 1.0), 1.0);
    }

    #[test]
    fn student_t_reference_points() {
        assert_eq!(student_t_two_sided(0.0, 5.0), 1.0);
        // df = 1 is Cauchy: P(|T| >= t) = 1 - 2 atan(t) / pi
        for t in [0.5, 1.0, 3.0, 30.0] {
            let want = 1.0 - 2.0 * libm::atan(t) / core::f64::consts::PI;
            assert!((student_t_two_sided(t, 1.0) - want).abs() < 1e-13);
        }
        // df = 2: P = 1 - t / sqrt(2 + t²)
        for t in [0.5, 2.0, 10.0] {
            let want = 1.0 - t / libm::sqrt(2.0 + t * t);
            assert!((student_t_two_sided(t, 2.0) - want).abs() < 1e-13);
        }
        // 97.5% quantile of t with 10 df
        assert!((student_t_two_sided(2.228_138_851_986_273_5, 10.0) - 0.05).abs() < 1e-10);
        assert_eq!(
            student_t_two_sided(2.0, 4.0),
            student_t_two_sided(-2.0, 4.0)
        );
    }
}
