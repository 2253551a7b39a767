//! A single von Mises-Fisher distribution: density, weighted MLE and sampling.

use ndarray::Array2;
use rand::Rng;
use rand_distr::{Beta, Distribution, StandardNormal};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg;
use crate::special::{invert_bessel_ratio, log_vmf_normalizer};

/// Upper bound for every concentration estimate.
pub const KAPPA_CAP: f64 = 1e6;

/// Mean resultant lengths at or above `1 − RBAR_DEGENERATE_GAP` are treated
/// as a point mass and get the capped concentration.
pub(crate) const RBAR_DEGENERATE_GAP: f64 = 1e-12;

/// Tolerance on `‖μ‖₂ − 1` for parameters.
pub const MEAN_NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct VmfParams {
    pub mu: Vec<f64>,
    pub kappa: f64,
}

impl VmfParams {
    pub fn new(mu: Vec<f64>, kappa: f64) -> Result<Self> {
        if mu.len() < 2 {
            return Err(Error::Domain(format!("dimension must be >= 2, got {}", mu.len())));
        }
        let n = linalg::norm(&mu);
        if (n - 1.0).abs() > MEAN_NORM_TOL {
            return Err(Error::Domain(format!("mean direction has norm {n}, expected 1")));
        }
        if !(0.0..=KAPPA_CAP).contains(&kappa) {
            return Err(Error::Domain(format!("kappa must lie in [0, {KAPPA_CAP}], got {kappa}")));
        }
        Ok(VmfParams { mu, kappa })
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }
}

/// `log c_d(κ) + κ⟨μ, x⟩`.
pub fn log_density(x: &[f64], p: &VmfParams) -> Result<f64> {
    if x.len() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), got: x.len() });
    }
    let n = linalg::norm(x);
    if (n - 1.0).abs() > crate::dataset::UNIT_NORM_TOL {
        return Err(Error::NotUnitNorm { row: 0, norm: n });
    }
    Ok(log_vmf_normalizer(p.dim(), p.kappa)? + p.kappa * linalg::dot(&p.mu, x))
}

#[derive(Debug, Clone, PartialEq)]
pub struct VmfFit {
    pub params: VmfParams,
    /// The mean resultant length reached 1 and κ was capped.
    pub degenerate: bool,
}

/// Concentration for a mean resultant length, capped at `cap`.
/// Returns the estimate and whether the degenerate cap was hit.
pub(crate) fn kappa_from_rbar(d: usize, rbar: f64, refine: bool, cap: f64) -> Result<(f64, bool)> {
    if rbar >= 1.0 - RBAR_DEGENERATE_GAP {
        return Ok((cap, true));
    }
    Ok((invert_bessel_ratio(d, rbar.max(0.0), refine)?.min(cap), false))
}

/// Weighted maximum likelihood fit. `μ̂` is the normalised weighted resultant
/// and `κ̂` comes from the closed-form inverse of the mean resultant length
/// (see [`invert_bessel_ratio`]).
pub fn mle_fit(x: &Dataset, weights: &[f64]) -> Result<VmfFit> {
    mle_fit_with(x, weights, false)
}

pub fn mle_fit_with(x: &Dataset, weights: &[f64], refine: bool) -> Result<VmfFit> {
    if weights.len() != x.n_rows() {
        return Err(Error::LengthMismatch { left: weights.len(), right: x.n_rows() });
    }
    if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
        return Err(Error::Domain("weights must be finite and nonnegative".into()));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::Domain("weights must have a positive sum".into()));
    }
    let d = x.dim();
    let mut r = vec![0.0; d];
    for (row, &w) in x.rows().zip(weights) {
        if w != 0.0 {
            row.axpy(w, &mut r);
        }
    }
    let len = linalg::normalize_in_place(&mut r);
    if len <= 1e-12 * total {
        return Err(Error::ZeroResultant);
    }
    let (kappa, degenerate) = kappa_from_rbar(d, len / total, refine, KAPPA_CAP)?;
    Ok(VmfFit { params: VmfParams { mu: r, kappa }, degenerate })
}

/// Wood's rejection sampler for the cosine `t = ⟨μ, x⟩`.
#[derive(Debug, Clone)]
pub struct WoodSampler {
    d: usize,
    kappa: f64,
    b: f64,
    x0: f64,
    c: f64,
    beta: Option<Beta<f64>>,
}

impl WoodSampler {
    pub fn new(d: usize, kappa: f64) -> Result<Self> {
        if d < 2 || !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(Error::Domain(format!("invalid sampler parameters d={d}, kappa={kappa}")));
        }
        let m = (d - 1) as f64;
        let b = m / (2.0 * kappa + (4.0 * kappa * kappa + m * m).sqrt());
        let x0 = (1.0 - b) / (1.0 + b);
        let c = kappa * x0 + m * (4.0 * b / ((1.0 + b) * (1.0 + b))).ln();
        let beta = if kappa > 0.0 {
            Some(Beta::new(0.5 * m, 0.5 * m).map_err(|e| Error::Domain(e.to_string()))?)
        } else {
            None
        };
        Ok(WoodSampler { d, kappa, b, x0, c, beta })
    }

    /// Draws `(t, 1 − t²)`; the second value is computed without cancellation.
    pub fn sample_cosine<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let Some(beta) = &self.beta else {
            // uniform: only the direction matters, handled by the caller
            return (f64::NAN, f64::NAN);
        };
        let m = (self.d - 1) as f64;
        let b = self.b;
        loop {
            let z = beta.sample(rng);
            let denom = 1.0 - (1.0 - b) * z;
            let w = (1.0 - (1.0 + b) * z) / denom;
            let one_minus_w = 2.0 * b * z / denom;
            let u: f64 = rng.random();
            if self.kappa * w + m * (1.0 - self.x0 * w).ln() - self.c >= u.ln() {
                return (w, one_minus_w * (1.0 + w));
            }
        }
    }

    /// One draw from vMF(μ, κ).
    pub fn sample_into<R: Rng + ?Sized>(&self, mu: &[f64], rng: &mut R, out: &mut [f64]) {
        debug_assert_eq!(mu.len(), self.d);
        for v in out.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        if self.beta.is_none() {
            if linalg::normalize_in_place(out) == 0.0 {
                out[0] = 1.0;
            }
            return;
        }
        let (t, one_minus_t2) = self.sample_cosine(rng);
        // Gram-Schmidt the Gaussian draw against μ to get a tangent direction
        let proj = linalg::dot(out, mu);
        out.iter_mut().zip(mu).for_each(|(v, &m)| *v -= proj * m);
        if linalg::normalize_in_place(out) == 0.0 {
            out.copy_from_slice(mu);
            return;
        }
        let s = one_minus_t2.max(0.0).sqrt();
        out.iter_mut().zip(mu).for_each(|(v, &m)| *v = t * m + s * *v);
        linalg::normalize_in_place(out);
    }
}

/// `n` i.i.d. draws from vMF(μ, κ), one per row.
pub fn sample<R: Rng + ?Sized>(p: &VmfParams, n: usize, rng: &mut R) -> Result<Array2<f64>> {
    let sampler = WoodSampler::new(p.dim(), p.kappa)?;
    let mut out = Array2::zeros((n, p.dim()));
    for mut row in out.rows_mut() {
        sampler.sample_into(&p.mu, rng, row.as_slice_mut().expect("standard layout"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use crate::special::{bessel_ratio, log_bessel_i};
    use ndarray::array;

    #[test]
    fn density_orthogonal_is_normalizer() {
        let p = VmfParams::new(vec![1.0, 0.0], 1.0).unwrap();
        let got = log_density(&[0.0, 1.0], &p).unwrap();
        let want = -(2.0 * std::f64::consts::PI).ln() - log_bessel_i(0.0, 1.0).unwrap();
        assert!((got - want).abs() < 1e-14);
        let uniform = VmfParams::new(vec![0.0, 0.0, 1.0], 0.0).unwrap();
        let a = log_density(&[1.0, 0.0, 0.0], &uniform).unwrap();
        assert!((a - (1.0 / (4.0 * std::f64::consts::PI)).ln()).abs() < 1e-14);
    }

    #[test]
    fn density_rejects_bad_input() {
        let p = VmfParams::new(vec![1.0, 0.0], 1.0).unwrap();
        assert!(matches!(log_density(&[1.0, 0.0, 0.0], &p), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(log_density(&[2.0, 0.0], &p), Err(Error::NotUnitNorm { .. })));
    }

    #[test]
    fn identical_points_cap_kappa() {
        let s = 0.6;
        let ds = Dataset::from_dense(array![[s, 0.8], [s, 0.8], [s, 0.8]]);
        let fit = mle_fit(&ds, &[1.0; 3]).unwrap();
        assert_eq!(fit.params.kappa, KAPPA_CAP);
        assert!(fit.degenerate);
        assert!((fit.params.mu[0] - s).abs() < 1e-15);
    }

    #[test]
    fn antipodal_points_have_no_mean() {
        let ds = Dataset::from_dense(array![[1.0, 0.0], [-1.0, 0.0]]);
        assert_eq!(mle_fit(&ds, &[1.0, 1.0]).unwrap_err(), Error::ZeroResultant);
    }

    #[test]
    fn sampler_rows_are_unit() {
        let mut rng = stream_rng(1, 0);
        for kappa in [0.0, 0.3, 50.0, 1e6] {
            let mu = vec![0.0, 0.6, 0.0, 0.8];
            let x = sample(&VmfParams::new(mu, kappa).unwrap(), 7, &mut rng).unwrap();
            for row in x.rows() {
                assert!((linalg::norm(row.as_slice().unwrap()) - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn uniform_sampler_has_no_resultant() {
        let mut rng = stream_rng(2, 0);
        let x = sample(&VmfParams::new(vec![1.0, 0.0, 0.0], 0.0).unwrap(), 100_000, &mut rng).unwrap();
        let mean = x.mean_axis(ndarray::Axis(0)).unwrap();
        assert!(linalg::norm(mean.as_slice().unwrap()) < 0.01);
    }

    #[test]
    fn sampler_mean_cosine_matches_ratio() {
        let mut rng = stream_rng(3, 0);
        let mut mu = vec![0.0; 10];
        mu[3] = 1.0;
        let x = sample(&VmfParams::new(mu.clone(), 50.0).unwrap(), 100_000, &mut rng).unwrap();
        let mean_cos = x.rows().into_iter().map(|r| linalg::dot(r.as_slice().unwrap(), &mu)).sum::<f64>() / 1e5;
        assert!((mean_cos - bessel_ratio(10, 50.0).unwrap()).abs() < 0.005);
    }

    #[test]
    fn mle_recovers_sampled_parameters() {
        let mut rng = stream_rng(4, 0);
        let mut mu = vec![1.0; 10];
        linalg::normalize_in_place(&mut mu);
        let x = sample(&VmfParams::new(mu.clone(), 50.0).unwrap(), 10_000, &mut rng).unwrap();
        let fit = mle_fit(&Dataset::from_dense(x), &vec![1.0; 10_000]).unwrap();
        assert!((fit.params.kappa / 50.0 - 1.0).abs() < 0.05, "{}", fit.params.kappa);
        assert!(linalg::dot(&fit.params.mu, &mu) > 0.99);
    }
}
