//! Seeded random instances: Haar-random pure states and a target drawn
//! uniformly in the `(a, k, phi)` parametrization.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bloch::PureState;

use super::document::{InstanceDocument, Params, StateSpec, TargetSpec};

/// Normalized complex Gaussian 2-vector.
pub fn haar_amplitudes<R: Rng + ?Sized>(rng: &mut R) -> [Complex64; 2] {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return [
                Complex64::new(v[0] / norm, v[1] / norm),
                Complex64::new(v[2] / norm, v[3] / norm),
            ];
        }
    }
}

pub fn haar_state<R: Rng + ?Sized>(rng: &mut R) -> PureState {
    let [a, b] = haar_amplitudes(rng);
    PureState::new(a, b).expect("Haar amplitudes are normalized")
}

/// `(a, k, phi)` uniform on `[0,1] x [0,1] x [0, 2 pi)`.
pub fn random_params<R: Rng + ?Sized>(rng: &mut R) -> Params {
    Params {
        a: rng.random::<f64>(),
        k: rng.random::<f64>(),
        phi: 2.0 * PI * rng.random::<f64>(),
    }
}

/// Same seed, same document, byte for byte.
pub fn random_document(seed: u64, n: usize) -> InstanceDocument {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = random_params(&mut rng);
    let set = (0..n)
        .map(|_| {
            let [a, b] = haar_amplitudes(&mut rng);
            StateSpec::from_amplitudes(a, b)
        })
        .collect();
    InstanceDocument {
        target: TargetSpec {
            params: Some(params),
            ..TargetSpec::default()
        },
        set,
        options: None,
    }
}
