use ndarray::Array2;
use rand::seq::index;
use sparse_movmf::dataset::{
    calibrate_overlap, greedy_max_separation, simulate_mixture, Separation, SimulationConfig,
};
use sparse_movmf::error::Error;
use sparse_movmf::rng::stream_rng;

fn min_pairwise_angle(m: &Array2<f64>) -> f64 {
    let mut best = f64::INFINITY;
    for a in 0..m.nrows() {
        for b in a + 1..m.nrows() {
            best = best.min(m.row(a).dot(&m.row(b)).clamp(-1.0, 1.0).acos());
        }
    }
    best
}

fn uniform_sphere(m: usize, d: usize, seed: u64) -> Array2<f64> {
    use rand_distr::{Distribution, StandardNormal};
    let mut rng = stream_rng(seed, 0);
    let mut out = Array2::zeros((m, d));
    for mut row in out.rows_mut() {
        row.iter_mut().for_each(|v: &mut f64| *v = StandardNormal.sample(&mut rng));
        let n = row.dot(&row).sqrt();
        row.mapv_inplace(|v| v / n);
    }
    out
}

#[test]
fn greedy_separation_beats_random_subsets() {
    let candidates = uniform_sphere(80, 10, 7);
    let greedy = min_pairwise_angle(&greedy_max_separation(&candidates, 4).unwrap());
    let mut rng = stream_rng(7, 1);
    let mut beaten = 0;
    for _ in 0..1000 {
        let pick = index::sample(&mut rng, 80, 4).into_vec();
        let sub = candidates.select(ndarray::Axis(0), &pick);
        if min_pairwise_angle(&sub) <= greedy {
            beaten += 1;
        }
    }
    assert!(beaten >= 990, "greedy beat only {beaten} of 1000 random subsets");
}

#[test]
fn simulation_is_reproducible_and_well_formed() {
    let mut cfg = SimulationConfig::new(3, 12, 400, Separation::BaseKappa(40.0));
    cfg.sparsity = 0.5;
    cfg.alpha = Some(vec![0.5, 0.3, 0.2]);
    cfg.seed = 99;
    let (x1, t1) = simulate_mixture(&cfg).unwrap();
    let (x2, t2) = simulate_mixture(&cfg).unwrap();
    assert_eq!(x1.to_dense(), x2.to_dense());
    assert_eq!(t1.params, t2.params);
    x1.check_unit_rows().unwrap();
    for row in t1.params.means.rows() {
        assert_eq!(row.iter().filter(|v| **v == 0.0).count(), 6);
    }
    assert_eq!(t1.support_mask, t1.params.means.mapv(|v| v != 0.0));
    let mut counts = [0usize; 3];
    for &l in &t1.labels {
        counts[l] += 1;
    }
    // within 4 binomial standard deviations
    for (c, a) in counts.iter().zip([0.5, 0.3, 0.2]) {
        let sd = (400.0 * a * (1.0 - a) as f64).sqrt();
        assert!((*c as f64 - 400.0 * a).abs() < 4.0 * sd, "{counts:?}");
    }
    cfg.seed = 100;
    assert_ne!(simulate_mixture(&cfg).unwrap().0.to_dense(), x1.to_dense());
}

#[test]
fn overlap_calibration_lands_in_known_range() {
    let candidates = uniform_sphere(80, 100, 3);
    let means = greedy_max_separation(&candidates, 4).unwrap();
    let alpha = vec![0.25; 4];
    let rng = stream_rng(3, 2);
    let kappa = calibrate_overlap(&means, 0.025, &alpha, 100_000, &rng).unwrap();
    assert!((14.0..=21.0).contains(&kappa), "κ = {kappa}");
    // more overlap needs less concentration
    let looser = calibrate_overlap(&means, 0.05, &alpha, 100_000, &rng).unwrap();
    assert!(looser < kappa);
}

#[test]
fn unreachable_targets_are_rejected() {
    let means = greedy_max_separation(&uniform_sphere(40, 10, 1), 2).unwrap();
    let err = calibrate_overlap(&means, 0.6, &[0.5, 0.5], 1000, &stream_rng(0, 0)).unwrap_err();
    assert!(matches!(err, Error::Domain(_)));
}
