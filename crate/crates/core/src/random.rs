//! Random states and operators for property checks.

use nalgebra::DMatrix;
use rand::Rng;

use crate::hilbert::{CompositeSpace, Operator, StateVector};
use crate::C64;

fn random_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Normalized state with uniform-box complex amplitudes.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, space: CompositeSpace) -> StateVector {
    loop {
        let amps = (0..space.total_dim()).map(|_| random_c64(rng)).collect();
        let psi = StateVector::new(space.clone(), amps).expect("length matches");
        if let Ok(n) = psi.normalize() {
            return n;
        }
    }
}

/// `(A + A^dag)/2` for a random complex `A`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, space: CompositeSpace) -> Operator {
    let dim = space.total_dim();
    let a = DMatrix::from_fn(dim, dim, |_, _| random_c64(rng));
    let h = (&a + a.adjoint()).map(|z| z * 0.5);
    Operator::new(space, h).expect("square")
}

/// `exp(-iH)` for a random Hermitian `H`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, space: CompositeSpace) -> Operator {
    let scale = rng.random_range(0.5..3.0);
    random_hermitian(rng, space).propagator(scale).expect("Hermitian by construction")
}

/// Normalized amplitude pair `(c₊, c₋)`.
pub fn random_amplitudes<R: Rng + ?Sized>(rng: &mut R) -> (C64, C64) {
    let psi = random_state(rng, CompositeSpace::single(2).expect("2-dim"));
    (psi.amplitudes()[0], psi.amplitudes()[1])
}
