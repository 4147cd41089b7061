//! Deterministic random spec generation shared by the integration suites.

use bandcert_core::graph::{FundamentalEdge, PeriodicGraphSpec, VertexClass};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Spec = PeriodicGraphSpec<f64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random valid spec: a random spanning tree plus a few extra edges, plus
/// one unit-vector self edge per dimension so the cycle indices always
/// generate the full lattice. Potentials are uniform in [-5, 5].
pub fn random_spec(rng: &mut ChaCha8Rng) -> Spec {
    let d = rng.random_range(1..=3usize);
    let nu = rng.random_range(1..=6usize);
    let tau = |rng: &mut ChaCha8Rng| -> Vec<i64> {
        (0..d).map(|_| rng.random_range(-2..=2i64)).collect()
    };

    let mut edges = Vec::new();
    for v in 1..nu {
        let parent = rng.random_range(0..v);
        edges.push(FundamentalEdge::new(parent, v, tau(rng)));
    }
    for _ in 0..rng.random_range(0..=4usize) {
        let a = rng.random_range(0..nu);
        let b = rng.random_range(0..nu);
        edges.push(FundamentalEdge::new(a, b, tau(rng)));
    }
    for s in 0..d {
        let anchor = rng.random_range(0..nu);
        let mut unit = vec![0i64; d];
        unit[s] = 1;
        edges.push(FundamentalEdge::new(anchor, anchor, unit));
    }

    let classes = (0..nu)
        .map(|i| VertexClass {
            id: format!("v{}", i + 1),
            potential: rng.random_range(-5.0..5.0),
        })
        .collect();
    Spec::new(d, classes, edges)
}

/// Random per-class gauge offsets with components in [-3, 3].
pub fn random_offsets(rng: &mut ChaCha8Rng, spec: &Spec) -> Vec<Vec<i64>> {
    (0..spec.nu())
        .map(|_| {
            (0..spec.dimension)
                .map(|_| rng.random_range(-3..=3i64))
                .collect()
        })
        .collect()
}

/// Random quasimomentum with components in [0, 2 pi).
pub fn random_theta(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d)
        .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
        .collect()
}
