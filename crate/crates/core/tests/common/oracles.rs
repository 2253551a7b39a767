//! Independent reference implementations used only by the tests. None of
//! these share code paths with the library beyond the special functions,
//! which have their own arbitrary-precision checks.

use ndarray::Array2;
use sparse_movmf::special::{invert_bessel_ratio, log_vmf_normalizer};
use sparse_movmf::KAPPA_CAP;

/// Plain (unpenalised) movMF EM on dense rows with the textbook updates:
/// `α_k = n_k/N`, `μ_k = r_k/‖r_k‖`, `κ_k` from the closed-form inverse of
/// `‖r_k‖/n_k`. Stops when the relative log-likelihood change drops below
/// `tol`.
pub struct PlainFit {
    pub alpha: Vec<f64>,
    pub means: Vec<Vec<f64>>,
    pub kappa: Vec<f64>,
    pub log_likelihood: f64,
    pub iters: usize,
}

fn plain_estep(x: &[Vec<f64>], alpha: &[f64], means: &[Vec<f64>], kappa: &[f64]) -> (Vec<Vec<f64>>, f64) {
    let d = x[0].len();
    let mut tau = Vec::with_capacity(x.len());
    let mut ll = 0.0;
    for xi in x {
        let logs: Vec<f64> = (0..alpha.len())
            .map(|k| {
                let dot: f64 = means[k].iter().zip(xi).map(|(a, b)| a * b).sum();
                alpha[k].ln() + log_vmf_normalizer(d, kappa[k]).unwrap() + kappa[k] * dot
            })
            .collect();
        let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let s: f64 = logs.iter().map(|l| (l - m).exp()).sum();
        let lse = m + s.ln();
        ll += lse;
        tau.push(logs.iter().map(|l| (l - lse).exp()).collect());
    }
    (tau, ll)
}

pub fn plain_movmf_em(
    x: &[Vec<f64>],
    alpha: Vec<f64>,
    means: Vec<Vec<f64>>,
    kappa: Vec<f64>,
    tol: f64,
    max_iters: usize,
) -> PlainFit {
    let n = x.len() as f64;
    let d = x[0].len();
    let k = alpha.len();
    let (mut alpha, mut means, mut kappa) = (alpha, means, kappa);
    let (mut tau, mut ll) = plain_estep(x, &alpha, &means, &kappa);
    let mut iters = 0;
    for _ in 0..max_iters {
        iters += 1;
        for j in 0..k {
            let nk: f64 = tau.iter().map(|t| t[j]).sum();
            let mut r = vec![0.0; d];
            for (t, xi) in tau.iter().zip(x) {
                for (rv, xv) in r.iter_mut().zip(xi) {
                    *rv += t[j] * xv;
                }
            }
            let len = r.iter().map(|v| v * v).sum::<f64>().sqrt();
            alpha[j] = nk / n;
            means[j] = r.iter().map(|v| v / len).collect();
            let rbar = len / nk;
            kappa[j] = if rbar >= 1.0 - 1e-12 {
                KAPPA_CAP
            } else {
                invert_bessel_ratio(d, rbar, false).unwrap().min(KAPPA_CAP)
            };
        }
        let s: f64 = alpha.iter().sum();
        alpha.iter_mut().for_each(|a| *a /= s);
        let (t, next) = plain_estep(x, &alpha, &means, &kappa);
        tau = t;
        let rel = (next - ll).abs() / next.abs();
        ll = next;
        if rel < tol {
            break;
        }
    }
    PlainFit { alpha, means, kappa, log_likelihood: ll, iters }
}

/// `κ⟨μ, r⟩ − β‖μ‖₁`
pub fn sphere_objective(mu: &[f64], r: &[f64], kappa: f64, beta: f64) -> f64 {
    kappa * mu.iter().zip(r).map(|(a, b)| a * b).sum::<f64>() - beta * mu.iter().map(|v| v.abs()).sum::<f64>()
}

/// Maximises `κ⟨μ, r⟩ − β‖μ‖₁` over the unit sphere by projected proximal
/// gradient ascent from several starts: a gradient step on the linear term,
/// the l1 proximal map, then projection back onto the sphere.
pub fn projected_gradient_max(r: &[f64], kappa: f64, beta: f64, starts: &[Vec<f64>]) -> Vec<f64> {
    let step = 0.5;
    let mut best: Option<(f64, Vec<f64>)> = None;
    for start in starts {
        let mut mu = start.clone();
        for _ in 0..20_000 {
            let mut next: Vec<f64> = mu
                .iter()
                .zip(r)
                .map(|(m, rv)| {
                    let g = m + step * kappa * rv;
                    g.signum() * (g.abs() - step * beta).max(0.0)
                })
                .collect();
            let n = next.iter().map(|v| v * v).sum::<f64>().sqrt();
            if n == 0.0 {
                break;
            }
            next.iter_mut().for_each(|v| *v /= n);
            let delta = next.iter().zip(&mu).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            mu = next;
            if delta < 1e-15 {
                break;
            }
        }
        let obj = sphere_objective(&mu, r, kappa, beta);
        if best.as_ref().is_none_or(|(b, _)| obj > *b) {
            best = Some((obj, mu));
        }
    }
    best.unwrap().1
}

/// Adjusted Rand index by enumerating all pairs:
/// `2(n00·n11 − n01·n10) / ((n00+n01)(n01+n11) + (n00+n10)(n10+n11))`.
pub fn ari_pairs(a: &[usize], b: &[usize]) -> f64 {
    let (mut n11, mut n10, mut n01, mut n00) = (0f64, 0f64, 0f64, 0f64);
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            match (a[i] == a[j], b[i] == b[j]) {
                (true, true) => n11 += 1.0,
                (true, false) => n10 += 1.0,
                (false, true) => n01 += 1.0,
                (false, false) => n00 += 1.0,
            }
        }
    }
    let den = (n00 + n01) * (n01 + n11) + (n00 + n10) * (n10 + n11);
    if den == 0.0 {
        return 1.0;
    }
    2.0 * (n00 * n11 - n01 * n10) / den
}

/// Dimension order by a literal reading of the comparator, sorted with an
/// insertion sort: more shared dimensions first; then, scanning components
/// by decreasing α (ties by index), the first component where exactly one
/// of the two dimensions is used puts that one first; then larger total
/// magnitude first; then lower index.
pub fn brute_dimension_order(means: &Array2<f64>, alpha: &[f64], eps: f64) -> Vec<usize> {
    let (k, d) = means.dim();
    let mut comps: Vec<usize> = (0..k).collect();
    for i in 1..k {
        let mut j = i;
        while j > 0 && alpha[comps[j]] > alpha[comps[j - 1]] {
            comps.swap(j, j - 1);
            j -= 1;
        }
    }
    let used = |c: usize, j: usize| means[[c, j]].abs() > eps;
    let count = |j: usize| (0..k).filter(|&c| used(c, j)).count();
    let mass = |j: usize| (0..k).map(|c| means[[c, j]].abs()).sum::<f64>();
    let before = |a: usize, b: usize| -> bool {
        if count(a) != count(b) {
            return count(a) > count(b);
        }
        for &c in &comps {
            if used(c, a) != used(c, b) {
                return used(c, a);
            }
        }
        if mass(a) != mass(b) {
            return mass(a) > mass(b);
        }
        a < b
    };
    let mut order: Vec<usize> = Vec::with_capacity(d);
    for j in 0..d {
        let pos = order.iter().position(|&o| before(j, o)).unwrap_or(order.len());
        order.insert(pos, j);
    }
    order
}
