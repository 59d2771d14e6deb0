//! Gamma function and zeta-type power sums.

use std::f64::consts::PI;

use crate::numerics::CompensatedSum;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Lanczos approximation (g = 7, nine terms) with reflection below 1/2.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = LANCZOS_COEFFS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

// B_{2j} / (2j)! for j = 1..=8
const BERNOULLI_OVER_FACTORIAL: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
];

const DIRECT_TERMS: usize = 32;

/// Euler-Maclaurin correction `Σ_j B_{2j}/(2j)! · s(s+1)…(s+2j-2) · x^{-s-2j+1}`.
fn em_correction(s: f64, x: f64) -> f64 {
    let mut rising = s;
    let mut pow = x.powf(-s - 1.0);
    let inv_x2 = 1.0 / (x * x);
    let mut total = 0.0;
    for (j, &b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        total += b * rising * pow;
        let m = 2.0 * j as f64;
        rising *= (s + m + 1.0) * (s + m + 2.0);
        pow *= inv_x2;
    }
    total
}

/// Hurwitz zeta `Σ_{k≥0} (k + a)^{-s}` for `a > 0`, analytically continued
/// to `-10 < s < 1`.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    assert!(s > -10.0 && s != 1.0 && a > 0.0, "hurwitz_zeta needs -10 < s, s != 1 and a > 0");
    let mut sum = CompensatedSum::new();
    for k in 0..DIRECT_TERMS {
        sum.add((k as f64 + a).powf(-s));
    }
    let x = DIRECT_TERMS as f64 + a;
    sum.add(x.powf(1.0 - s) / (s - 1.0));
    sum.add(0.5 * x.powf(-s));
    sum.add(em_correction(s, x));
    sum.value()
}

/// Riemann zeta for `s > -10`, `s != 1`.
pub fn zeta(s: f64) -> f64 {
    hurwitz_zeta(s, 1.0)
}

/// Generalized harmonic number `Σ_{k=1}^{n} k^{-s}` for any real `s > 0`.
pub fn power_sum(s: f64, n: u64) -> f64 {
    let direct = (n as usize).min(4 * DIRECT_TERMS);
    let mut sum = CompensatedSum::new();
    for k in 1..=direct {
        sum.add((k as f64).powf(-s));
    }
    if n as usize == direct {
        return sum.value();
    }
    // Σ_{k=a}^{n} k^{-s} by Euler-Maclaurin, a = direct + 1
    let a = (direct + 1) as f64;
    let b = n as f64;
    let integral = if (s - 1.0).abs() < 1e-300 {
        (b / a).ln()
    } else {
        (b.powf(1.0 - s) - a.powf(1.0 - s)) / (1.0 - s)
    };
    sum.add(integral);
    sum.add(0.5 * (a.powf(-s) + b.powf(-s)));
    sum.add(em_correction(s, a) - em_correction(s, b));
    sum.value()
}

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_at_integers_and_half() {
        assert!((gamma(1.0) - 1.0).abs() < 1e-14);
        assert!((gamma(2.0) - 1.0).abs() < 1e-14);
        assert!((gamma(3.0) - 2.0).abs() < 1e-13);
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-13);
        assert!((gamma(1.5) - 0.886_226_925_452_758).abs() < 1e-13);
    }

    #[test]
    fn gamma_matches_statrs_on_range() {
        let mut x = 0.5;
        while x <= 4.0 {
            let r = statrs::function::gamma::gamma(x);
            assert!(((gamma(x) - r) / r).abs() < 1e-12, "x={x}");
            x += 0.0625;
        }
    }

    #[test]
    fn zeta_known_values() {
        // zeta(2) = pi^2/6, zeta(4) = pi^4/90
        assert!((zeta(2.0) - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta(4.0) - PI.powi(4) / 90.0).abs() < 1e-14);
        // zeta(1+h) = 1/h + γ - γ1 h + γ2 h²/2 + ..., Stieltjes constants
        // γ1 = -0.0728158454836767, γ2 = -0.0096903631928723
        for h in [2f64.powi(-10), 2f64.powi(-13), 2f64.powi(-16)] {
            let expected =
                1.0 / h + EULER_GAMMA + 0.072_815_845_483_676_7 * h - 0.004_845_181_596_436_2 * h * h;
            assert!(((zeta(1.0 + h) - expected) / expected).abs() < 1e-13, "h={h}");
        }
    }

    #[test]
    fn continuation_below_one() {
        assert!((zeta(-1.0) + 1.0 / 12.0).abs() < 1e-13);
        assert!((zeta(0.5) + 1.460_354_508_809_586_8).abs() < 1e-13);
        assert!((zeta(0.0) + 0.5).abs() < 1e-14);
        // ζ(s, 1/2) = (2^s - 1) ζ(s)
        for s in [0.25, 0.75, -0.5, -1.0] {
            let lhs = hurwitz_zeta(s, 0.5);
            let rhs = (2f64.powf(s) - 1.0) * zeta(s);
            assert!((lhs - rhs).abs() < 1e-13, "s={s}");
        }
    }

    #[test]
    fn hurwitz_shift_identity() {
        // ζ(s, a) = a^{-s} + ζ(s, a+1)
        for (s, a) in [(1.5, 0.3), (2.7, 4.0), (1.01, 1.0)] {
            let lhs = hurwitz_zeta(s, a);
            let rhs = a.powf(-s) + hurwitz_zeta(s, a + 1.0);
            assert!(((lhs - rhs) / lhs).abs() < 1e-13);
        }
    }

    #[test]
    fn power_sum_against_direct_summation() {
        for s in [0.5, 1.0, 1.5, 2.0] {
            for n in [1u64, 10, 128, 129, 1000, 54_321] {
                let mut direct = CompensatedSum::new();
                for k in 1..=n {
                    direct.add((k as f64).powf(-s));
                }
                let d = direct.value();
                assert!(((power_sum(s, n) - d) / d).abs() < 1e-13, "s={s} n={n}");
            }
        }
    }

    #[test]
    fn harmonic_asymptotics() {
        // H_n = ln n + γ + 1/(2n) - 1/(12n^2) + ...
        let n = 1_000_000u64;
        let nf = n as f64;
        let expected = nf.ln() + EULER_GAMMA + 0.5 / nf - 1.0 / (12.0 * nf * nf);
        assert!((power_sum(1.0, n) - expected).abs() < 1e-13);
    }
}
