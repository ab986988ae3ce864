//! Seeded numerical campaigns for the root-localization theorems of the
//! forward difference structure.
//!
//! Every polynomial is built exactly; only root extraction is approximate.
//! Trial `i` of a campaign with seed `s` draws from a ChaCha8 stream seeded
//! with `s ^ i`, so reports do not depend on scheduling.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{exact_poly_roots, exact_root_strip, Strip};
use crate::error::{Error, Result};
use crate::pairing::{deviation_poly, pairing, umbral_add_convolve};
use crate::poly::Poly;
use crate::scalar::{self, ratio, Scalar};
use crate::umbral::DeltaOp;

/// Grid used when sampling roots: every coordinate is a multiple of `1/GRID`.
const GRID: i64 = 1_000_000;
const IMAG_RANGE: f64 = 2.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub trials: usize,
    pub violations: usize,
    /// Smallest signed slack over all trials; negative values are outside the
    /// predicted region.
    pub worst_margin: f64,
    pub seed: u64,
    pub tol: f64,
}

impl VerificationReport {
    fn from_margins(margins: &[f64], seed: u64, tol: f64) -> Self {
        VerificationReport {
            trials: margins.len(),
            violations: margins.iter().filter(|&&m| m < -tol).count(),
            worst_margin: margins.iter().copied().fold(f64::INFINITY, f64::min),
            seed,
            tol,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn delta(n: usize) -> DeltaOp {
    DeltaOp::forward_difference(n.max(1))
}

fn offset(n: usize) -> f64 {
    (n as f64 - 1.0) / 2.0
}

/// `max |Re z + (n-1)/2|` over the roots of `R_n`, for `n = 1..=n_max`.
pub fn deviation_line_spread(n_max: usize) -> Result<Vec<f64>> {
    (1..=n_max)
        .map(|n| {
            let r = deviation_poly(&delta(n), n)?;
            let roots = exact_poly_roots(&r)?;
            Ok(roots.iter().map(|z| (z.re + offset(n)).abs()).fold(0.0, f64::max))
        })
        .collect()
}

/// One trial per `n <= n_max`; the margin of a trial is minus the largest
/// distance of a root of `R_n` from the line `Re z = -(n-1)/2`, and the trial
/// fails when that distance reaches `tol`.
pub fn verify_deviation_line(n_max: usize, tol: f64) -> Result<VerificationReport> {
    if n_max == 0 {
        return Err(Error::Invalid("n_max must be at least 1".into()));
    }
    let spread = deviation_line_spread(n_max)?;
    let margins: Vec<f64> = spread.iter().map(|d| -d).collect();
    let mut report = VerificationReport::from_margins(&margins, 0, tol);
    report.violations = spread.iter().filter(|&&d| d >= tol).count();
    Ok(report)
}

fn grid_range(lo: f64, hi: f64) -> Result<(i64, i64)> {
    let a = (lo * GRID as f64).ceil() as i64;
    let b = (hi * GRID as f64).floor() as i64;
    if a > b {
        return Err(Error::Invalid(format!("no sample grid point in [{lo}, {hi}]")));
    }
    Ok((a, b))
}

fn sample_with(rng: &mut ChaCha8Rng, n: usize, strip: &Strip) -> Result<Poly> {
    if !strip.is_finite() {
        return Err(Error::Invalid("sampling needs a bounded strip".into()));
    }
    let (lo, hi) = grid_range(strip.lo, strip.hi)?;
    let (im_lo, im_hi) = grid_range(-IMAG_RANGE, IMAG_RANGE)?;
    let mut p = Poly::one();
    for _ in 0..n / 2 {
        let re = ratio(rng.random_range(lo..=hi), GRID);
        let im = ratio(rng.random_range(im_lo..=im_hi), GRID);
        // (t - re)^2 + im^2
        let norm = &re * &re + &im * &im;
        p = &p * &Poly::new(vec![norm, -(&re + &re), Scalar::one()]);
    }
    if n % 2 == 1 {
        let re = ratio(rng.random_range(lo..=hi), GRID);
        p = &p * &Poly::new(vec![-re, Scalar::one()]);
    }
    Ok(p)
}

/// A monic real polynomial of degree `n` whose roots have real parts on the
/// `1e-6` grid inside `strip` and imaginary parts in `[-2, 2]`; roots come in
/// conjugate pairs, plus one real root when `n` is odd.
pub fn sample_poly_in_strip(n: usize, strip: &Strip, seed: u64) -> Result<Poly> {
    sample_with(&mut ChaCha8Rng::seed_from_u64(seed), n, strip)
}

/// Signed slack of the roots of `P ⊞_n^Δ Q` inside
/// `V(P) + V(Q) - (n-1)/2`.
pub fn walsh_margin(p: &Poly, q: &Poly, n: usize) -> Result<f64> {
    let conv = umbral_add_convolve(p, q, &delta(n), n)?;
    if conv.degree_or_zero() == 0 {
        return Err(Error::Invalid("the convolution is constant; nothing to localize".into()));
    }
    let bound = exact_root_strip(p)?.add(&exact_root_strip(q)?).shift(-offset(n));
    let roots = exact_poly_roots(&conv)?;
    Ok(roots.iter().map(|z| bound.margin(z.re)).fold(f64::INFINITY, f64::min))
}

/// Random trials of the umbral Walsh containment for `Δ` at level `n`, with
/// both factors sampled in the box `[-2, 2] x [-2, 2]`.
pub fn verify_walsh(n: usize, trials: usize, seed: u64, tol: f64) -> Result<VerificationReport> {
    if n == 0 {
        return Err(Error::Invalid("level must be at least 1".into()));
    }
    let strip = Strip { lo: -2.0, hi: 2.0 };
    let margins: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i as u64);
            let p = sample_with(&mut rng, n, &strip)?;
            let q = sample_with(&mut rng, n, &strip)?;
            walsh_margin(&p, &q, n)
        })
        .collect::<Result<_>>()?;
    Ok(VerificationReport::from_margins(&margins, seed, tol))
}

/// Overlap of `V(P)` with `V(Q) + (n-1)/2`, after checking
/// `<P, Q>_n^Δ = 0` exactly.
pub fn grace_margin(p: &Poly, q: &Poly, n: usize) -> Result<f64> {
    for x in [p, q] {
        if x.degree() != Some(n) {
            return Err(Error::WrongDegree { expected: n, found: x.degree() });
        }
    }
    let value = pairing(p, q, &delta(n), n)?;
    if !value.is_zero() {
        return Err(Error::NotApolar(format!("<P, Q> = {}", scalar::format(&value))));
    }
    let vp = exact_root_strip(p)?;
    let vq = exact_root_strip(q)?.shift(offset(n));
    Ok(vp.overlap(&vq))
}

/// Single-pair report for the umbral Grace theorem.
pub fn verify_grace(p: &Poly, q: &Poly, n: usize, tol: f64) -> Result<VerificationReport> {
    Ok(VerificationReport::from_margins(&[grace_margin(p, q, n)?], 0, tol))
}

/// Random apolar pairs at level `n`: `P` and `Q` are sampled as in
/// [`verify_walsh`], then the constant term of `Q` is adjusted so that
/// `<P, Q>_n^Δ = 0`.
pub fn apolar_campaign(n: usize, pairs: usize, seed: u64, tol: f64) -> Result<VerificationReport> {
    if n == 0 {
        return Err(Error::Invalid("level must be at least 1".into()));
    }
    let strip = Strip { lo: -2.0, hi: 2.0 };
    let d = delta(n);
    let margins: Vec<f64> = (0..pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i as u64);
            let p = sample_with(&mut rng, n, &strip)?;
            let q = sample_with(&mut rng, n, &strip)?;
            // <P, c> = c <P, 1>, and <P, 1> = n! lead(P) != 0
            let c = pairing(&p, &q, &d, n)? / pairing(&p, &Poly::one(), &d, n)?;
            let q = &q - &Poly::constant(c);
            grace_margin(&p, &q, n)
        })
        .collect::<Result<_>>()?;
    Ok(VerificationReport::from_margins(&margins, seed, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::deviation_closed_delta;
    use crate::scalar::int;

    #[test]
    fn deviation_line_small_cases() {
        let s = deviation_line_spread(2).unwrap();
        assert_eq!(s[0], 0.0);
        assert!(s[1] < 1e-15);
        let r = verify_deviation_line(12, 1e-8).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.trials, 12);
        assert!(verify_deviation_line(0, 1e-8).is_err());
    }

    #[test]
    fn sampling() {
        let p = sample_poly_in_strip(1, &Strip::point(0.0), 7).unwrap();
        assert_eq!(p, Poly::from_ints(&[0, 1]));
        let strip = Strip { lo: -0.5, hi: 1.25 };
        for seed in 0..20 {
            let p = sample_poly_in_strip(2, &strip, seed).unwrap();
            assert_eq!(p.degree(), Some(2));
            assert_eq!(p.leading(), Some(&int(1)));
            // real part of the pair is -b/2
            let re = -p.coeff(1) / int(2);
            assert!(re >= ratio(-1, 2) && re <= ratio(5, 4));
            assert_eq!(p, sample_poly_in_strip(2, &strip, seed).unwrap());
        }
        assert_ne!(sample_poly_in_strip(5, &strip, 1).unwrap(), sample_poly_in_strip(5, &strip, 2).unwrap());
        assert!(sample_poly_in_strip(2, &Strip { lo: 0.0, hi: f64::INFINITY }, 1).is_err());
        assert!(sample_poly_in_strip(2, &Strip { lo: 0.1e-6, hi: 0.2e-6 }, 1).is_err());
    }

    #[test]
    fn sampled_roots_lie_in_strip() {
        let strip = Strip { lo: -1.0, hi: 0.5 };
        for seed in 0..10 {
            let p = sample_poly_in_strip(7, &strip, seed).unwrap();
            let v = exact_root_strip(&p).unwrap();
            assert!(v.lo >= strip.lo - 1e-9 && v.hi <= strip.hi + 1e-9, "{v:?}");
        }
    }

    #[test]
    fn walsh_sharpness_witness() {
        for n in 1..=8 {
            let tn = Poly::monomial(n, int(1));
            assert_eq!(umbral_add_convolve(&tn, &tn, &delta(n), n).unwrap(), deviation_closed_delta(n));
            let m = walsh_margin(&tn, &tn, n).unwrap();
            assert!(m.abs() <= 1e-9, "n={n}: {m}");
        }
    }

    #[test]
    fn walsh_with_neutral_element() {
        // Q = (t)_n is neutral for ⊞_n^Δ, so the convolution is P itself
        let n = 4;
        let p = sample_poly_in_strip(n, &Strip { lo: -2.0, hi: 2.0 }, 11).unwrap();
        let q = Poly::falling_factorial(n);
        assert_eq!(umbral_add_convolve(&p, &q, &delta(n), n).unwrap(), p);
        assert!(walsh_margin(&p, &q, n).unwrap() >= -1e-12);
    }

    #[test]
    fn walsh_small_campaign() {
        let r = verify_walsh(3, 50, 42, 1e-7).unwrap();
        assert_eq!(r.trials, 50);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r, verify_walsh(3, 50, 42, 1e-7).unwrap());
    }

    #[test]
    fn grace_family_without_root_in_strip() {
        // P = t^2 + (2c-1) t - c is apolar to t^2, and has no root with real part 1/2
        for c in [int(1), ratio(1, 2), int(-2)] {
            let p = Poly::new(vec![-c.clone(), &c + &c - int(1), int(1)]);
            let q = Poly::monomial(2, int(1));
            assert!(pairing(&p, &q, &delta(2), 2).unwrap().is_zero());
            let m = grace_margin(&p, &q, 2).unwrap();
            assert!(m >= -1e-12, "c={c}: {m}");
            let roots = exact_poly_roots(&p).unwrap();
            assert!(roots.iter().all(|z| (z.re - 0.5).abs() > 1e-3 || z.im.abs() > 1e-3));
        }
    }

    #[test]
    fn grace_rising_factorial_partner() {
        // P(α) = 0 makes P apolar to (t - α)(t - α + 1)...(t - α + n - 1),
        // whose shifted strip is centered at α
        for n in 2..=5 {
            let alpha = ratio(3, 7);
            let other = sample_poly_in_strip(n - 1, &Strip { lo: -2.0, hi: 2.0 }, n as u64).unwrap();
            let p = &other * &Poly::new(vec![-alpha.clone(), int(1)]);
            let q = (0..n).fold(Poly::one(), |acc, j| &acc * &Poly::new(vec![int(j as i64) - &alpha, int(1)]));
            let m = grace_margin(&p, &q, n).unwrap();
            assert!(m >= -1e-12, "n={n}: {m}");
        }
    }

    #[test]
    fn grace_rejects_non_apolar() {
        let p = Poly::from_ints(&[1, 0, 1]);
        assert!(matches!(grace_margin(&p, &p, 2), Err(Error::NotApolar(_))));
        assert!(matches!(grace_margin(&p, &Poly::from_ints(&[0, 1]), 2), Err(Error::WrongDegree { .. })));
    }

    #[test]
    fn apolar_small_campaign() {
        let r = apolar_campaign(3, 40, 5, 1e-7).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.trials, 40);
    }

    #[test]
    fn report_json() {
        let r = VerificationReport { trials: 2, violations: 0, worst_margin: 0.25, seed: 9, tol: 1e-7 };
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"trials":2,"violations":0,"worst_margin":0.25,"seed":9,"tol":1e-7}"#);
    }
}
