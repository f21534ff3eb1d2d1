//! Radial pair correlation and structure factor of the planar GEF zero set.
//!
//! With `s = r²` and `q = e^{-s}` the density is `π^{-2} Σ_{m≥1} q^m (2 − 4ms + m²s²)`.

use std::f64::consts::PI;

/// Below this value of `s = r²` the series is evaluated from its Taylor expansion.
const TAYLOR_CUTOFF: f64 = 0.05;

// F(s) = -1 + s/2 - s^3/36 + s^5/720 - s^7/16800 + s^9/435456 - 691 s^11/8382528000
const TAYLOR_ODD: [f64; 6] = [
    0.5,
    -1.0 / 36.0,
    1.0 / 720.0,
    -1.0 / 16800.0,
    1.0 / 435456.0,
    -691.0 / 8_382_528_000.0,
];

fn geometric_sums(s: f64) -> (f64, f64, f64) {
    let q = (-s).exp();
    let one_minus_q = -(-s).exp_m1();
    let s0 = q / one_minus_q;
    let s1 = s0 / one_minus_q;
    let s2 = s1 * (1.0 + q) / one_minus_q;
    (s0, s1, s2)
}

fn taylor(s: f64) -> f64 {
    let s2 = s * s;
    let mut acc = 0.0;
    for c in TAYLOR_ODD.iter().rev() {
        acc = acc * s2 + c;
    }
    -1.0 + s * acc
}

/// `π² κ(r)`: the first `terms` summands explicitly plus the remainder `Σ_{m>terms}` in closed form.
pub(crate) fn scaled_density(r: f64, terms: usize) -> f64 {
    let s = r * r;
    if s < TAYLOR_CUTOFF {
        return taylor(s);
    }
    let q = (-s).exp();
    let mut partial = 0.0;
    let mut qm = 1.0;
    for m in 1..=terms {
        qm *= q;
        if qm == 0.0 {
            return partial;
        }
        let mf = m as f64;
        partial += qm * (2.0 - 4.0 * mf * s + mf * mf * s * s);
    }
    // Σ_{n≥1} q^{M+n} P(M+n) with P(M+n) = P(M) + (2s²M − 4s) n + s² n².
    let m = terms as f64;
    let p_m = 2.0 - 4.0 * m * s + m * m * s * s;
    let (s0, s1, s2) = geometric_sums(s);
    partial + qm * (p_m * s0 + (2.0 * s * s * m - 4.0 * s) * s1 + s * s * s2)
}

/// Upper bound on `|Σ_{m>terms} q^m (2 − 4ms + m²s²)|`, divided by `π²` like the density.
pub(crate) fn tail_bound(r: f64, terms: usize) -> f64 {
    let s = r * r;
    if s == 0.0 {
        return f64::INFINITY;
    }
    let m = terms as f64;
    let qm = (-m * s).exp();
    let (s0, s1, s2) = geometric_sums(s);
    let a = 2.0 + 4.0 * m * s + m * m * s * s;
    qm * (a * s0 + (4.0 * s + 2.0 * s * s * m) * s1 + s * s * s2) / (PI * PI)
}

fn tail_integral_scaled(v: f64) -> f64 {
    // 1 − e^{-v}(1 + v)
    if v < 0.1 {
        let mut term = 1.0;
        let mut acc = 0.0;
        for k in 1..=14u32 {
            term *= -v / k as f64;
            if k >= 2 {
                acc += (k as f64 - 1.0) * term;
            }
        }
        acc
    } else {
        -(-v).exp_m1() - v * (-v).exp()
    }
}

/// `λ_D + K̂(t) = |t|⁴/(16π) Σ_{m≥1} m^{-3} e^{-|t|²/(4m)}`.
pub(crate) fn structure_factor(t_norm: f64) -> f64 {
    let a = t_norm * t_norm / 4.0;
    if a == 0.0 {
        return 0.0;
    }
    let cutoff = 64 + a.ceil() as usize;
    let term = |x: f64| x.powi(-3) * (-a / x).exp();
    let explicit: f64 = (1..=cutoff).map(|m| term(m as f64)).sum();
    let m = cutoff as f64;
    let f_m = term(m);
    let df_m = f_m * (-3.0 / m + a / (m * m));
    let tail = tail_integral_scaled(a / m) / (a * a) - f_m / 2.0 - df_m / 12.0;
    a * a * (explicit + tail) / PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ZETA3;

    fn brute_force(r: f64) -> f64 {
        let s = r * r;
        (1..20000)
            .map(|m| {
                let m = m as f64;
                (-m * s).exp() * (2.0 - 4.0 * m * s + m * m * s * s)
            })
            .sum()
    }

    #[test]
    fn matches_direct_summation() {
        for r in [0.3, 0.5, 1.0, 1.7, 3.0] {
            let v = scaled_density(r, 64);
            assert!((v - brute_force(r)).abs() < 1e-10, "r={r}");
        }
    }

    #[test]
    fn continuous_across_taylor_cutoff() {
        let r = TAYLOR_CUTOFF.sqrt();
        let below = taylor(TAYLOR_CUTOFF);
        let above = scaled_density(r * (1.0 + 1e-12), 64);
        assert!((below - above).abs() < 1e-11);
        assert_eq!(scaled_density(0.0, 64), -1.0);
    }

    #[test]
    fn independent_of_split() {
        for r in [0.25, 0.8, 2.0] {
            let a = scaled_density(r, 1);
            let b = scaled_density(r, 64);
            let c = scaled_density(r, 128);
            assert!((a - b).abs() < 1e-12 && (b - c).abs() < 1e-12);
        }
    }

    #[test]
    fn tail_bound_dominates_remainder() {
        for r in [0.3, 0.6, 1.2] {
            let exact = brute_force(r);
            let partial: f64 = (1..=8)
                .map(|m| {
                    let m = m as f64;
                    let s = r * r;
                    (-m * s).exp() * (2.0 - 4.0 * m * s + m * m * s * s)
                })
                .sum();
            assert!((exact - partial).abs() / (PI * PI) <= tail_bound(r, 8));
        }
    }

    #[test]
    fn structure_factor_limits() {
        let small: f64 = 0.05;
        let leading = ZETA3 * small.powi(4) / (16.0 * PI);
        assert!((structure_factor(small) / leading - 1.0).abs() < 1e-3);
        assert!((structure_factor(200.0) - 1.0 / PI).abs() < 1e-4);
        // brute force at a moderate frequency
        let t: f64 = 3.0;
        let a = t * t / 4.0;
        let direct: f64 = (1..2_000_000)
            .map(|m| (m as f64).powi(-3) * (-a / m as f64).exp())
            .sum();
        assert!((structure_factor(t) - a * a * direct / PI).abs() < 1e-10);
    }
}
