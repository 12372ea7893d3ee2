use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xwave_core::fixtures::{opa_fields, opa_uv_grid, OPA_DELTA};
use xwave_core::opa::*;
use xwave_core::C64;

fn reference(t: f64) -> OpaConfig {
    let (f1, f2) = opa_fields();
    OpaConfig::new(f1, f2, 1.0, OPA_DELTA, 2, t, opa_uv_grid()).unwrap()
}

#[test]
fn amplitude_squared_is_the_transition_probability() {
    let cfg = reference(3e5);
    let nodes = cfg.uv_grid.nodes();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (p, q) in [(0, 0), (1, 2), (2, 1)] {
        let phi = joint_amplitude(p, q, &cfg);
        for _ in 0..50 {
            let i = rng.random_range(0..nodes.len());
            let j = rng.random_range(0..nodes.len());
            let prob = transition_probability(p, q, nodes[i], nodes[j], cfg.t, &cfg);
            let sq = phi.values[[i, j]].norm_sqr();
            assert!((sq - prob).abs() <= 1e-12 * prob.max(1e-300), "{sq} vs {prob}");
        }
    }
}

#[test]
fn support_is_the_positive_half_plane() {
    let nodes = opa_uv_grid().nodes().to_vec();
    for t in [1e4, 5e5] {
        let cfg = reference(t);
        for (p, q) in [(0, 0), (0, 2), (2, 2)] {
            let phi = joint_amplitude(p, q, &cfg);
            for ((i, j), z) in phi.values.indexed_iter() {
                if nodes[i] + nodes[j] <= 0.0 {
                    assert_eq!(*z, C64::new(0.0, 0.0));
                }
            }
        }
    }
}

#[test]
fn coupling_scales_probabilities_but_not_shapes() {
    let cfg = reference(4e5);
    let mut strong = cfg.clone();
    strong.chi = 3.0;
    let (u, v) = (1e-3, 1.1e-3);
    let ratio = transition_probability(1, 0, u, v, cfg.t, &strong) / transition_probability(1, 0, u, v, cfg.t, &cfg);
    assert!((ratio - 9.0).abs() < 1e-12);
    let weak = schmidt_decompose(&joint_amplitude(0, 1, &cfg)).unwrap();
    let loud = schmidt_decompose(&joint_amplitude(0, 1, &strong)).unwrap();
    assert!((weak.entropy - loud.entropy).abs() < 1e-10);
    assert!((weak.schmidt_number - loud.schmidt_number).abs() < 1e-8);
    let w1 = velocity_locking_width(0, 1, 3e6, &cfg).unwrap();
    let w2 = velocity_locking_width(0, 1, 3e6, &strong).unwrap();
    assert!((w1 - w2).abs() <= 1e-12 * w1);
}

#[test]
fn conditional_profiles_narrow_over_time() {
    let cfg = reference(1.0);
    let h = cfg.uv_grid.spacing();
    for k in [4.0, 10.0, 25.0] {
        let u = k * h;
        let [lo1, _, hi1] = conditional_quartiles(0, 0, u, 2e6, &cfg).unwrap();
        let [lo2, median, hi2] = conditional_quartiles(0, 0, u, 4e6, &cfg).unwrap();
        assert!(hi2 - lo2 < hi1 - lo1, "u = {u}");
        assert!(lo2 <= median && median <= hi2);
    }
}

#[test]
fn locking_density_vanishes_at_rest() {
    let cfg = reference(1.0);
    assert_eq!(asymptotic_locking_density(0, 0, 0.0, &cfg).value, 0.0);
    let inside = asymptotic_locking_density(0, 0, 1e-4, &cfg);
    assert!(inside.value > 0.0 && inside.in_regime);
    let outside = asymptotic_locking_density(0, 0, 0.05, &cfg);
    assert!(!outside.in_regime);
}

#[test]
fn entropy_is_positive_and_grows() {
    let mut last = 0.0;
    for t in [5e4, 1e5, 2e5, 4e5] {
        let s = schmidt_decompose(&joint_amplitude(1, 1, &reference(t))).unwrap();
        assert!(s.entropy > last, "t = {t}: {} after {last}", s.entropy);
        assert!(s.schmidt_number >= 1.0);
        last = s.entropy;
    }
}

#[test]
fn zero_time_amplitude_is_degenerate() {
    let phi = joint_amplitude(0, 0, &reference(0.0));
    assert_eq!(phi.norm_sqr(), 0.0);
    assert!(phi.normalize().is_err());
    assert!(schmidt_decompose(&phi).is_err());
}
