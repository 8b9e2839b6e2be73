//! Distance and norm functionals on states and operators.

use num_complex::Complex64 as C64;

use super::eigen::hermitian_eigenvalues;
use super::matrix::ComplexMatrix;
use super::states::DensityMatrix;
use super::QmathError;

/// Trace distance `½·Σ|eig(a - b)|`, in `[0, 1]`. The difference of two
/// density matrices is Hermitian up to representation error, so its spectrum
/// comes straight from the symmetric eigensolver.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64, QmathError> {
    if a.dim() != b.dim() {
        return Err(QmathError::DimMismatch(a.dim(), b.dim()));
    }
    let diff = a.matrix() - b.matrix();
    let sum: f64 = hermitian_eigenvalues(&diff).iter().map(|x| x.abs()).sum();
    Ok((0.5 * sum).clamp(0.0, 1.0))
}

/// Trace norm (sum of singular values).
///
/// Hermitian and anti-Hermitian inputs are detected and routed through the
/// symmetric eigensolver directly, which avoids squaring the spectrum; the
/// general case falls back to the eigenvalues of `m†m`.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    let scale = m.max_abs();
    if scale == 0.0 {
        return 0.0;
    }
    let sym_tol = 1e-12 * scale.max(1.0);
    if m.hermiticity_error() <= sym_tol {
        return hermitian_eigenvalues(m).iter().map(|x| x.abs()).sum();
    }
    let anti_error = {
        // max |m + m†| elementwise
        let m_plus = m + &m.adjoint();
        m_plus.max_abs()
    };
    if anti_error <= sym_tol {
        let rotated = m.scale(C64::new(0.0, 1.0));
        return hermitian_eigenvalues(&rotated).iter().map(|x| x.abs()).sum();
    }
    let gram = m.adjoint().matmul(m).expect("square");
    hermitian_eigenvalues(&gram).iter().map(|x| x.max(0.0).sqrt()).sum()
}

/// Overlap of a single-qubit state with the ground state, `<0|ρ|0>`.
pub fn fidelity_with_ground(rho: &DensityMatrix) -> Result<f64, QmathError> {
    if rho.dim() != 2 {
        return Err(QmathError::NotSingleQubit(rho.dim()));
    }
    Ok(rho.matrix()[(0, 0)].re)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    use super::*;
    use crate::qmath::gates::swap_matrix;
    use crate::qmath::matrix::commutator;
    use crate::qmath::states::BlochPureState;

    #[test]
    fn orthogonal_pure_states_are_fully_distinguishable() {
        let d = trace_distance(&DensityMatrix::ground(), &DensityMatrix::excited()).unwrap();
        assert!((d - 1.0).abs() < 1e-15);
    }

    #[test]
    fn distance_to_self_vanishes() {
        let rho = BlochPureState::new(0.7).density();
        assert_eq!(trace_distance(&rho, &rho).unwrap(), 0.0);
    }

    #[test]
    fn ground_versus_plus_state() {
        // Pure-state formula: sqrt(1 - |<0|+>|^2) = 1/sqrt(2).
        let plus = BlochPureState::new(FRAC_PI_4).density();
        let d = trace_distance(&DensityMatrix::ground(), &plus).unwrap();
        assert!((d - 1.0 / 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn distance_requires_equal_dimensions() {
        let one = DensityMatrix::ground();
        let two = one.tensor(&one);
        assert!(trace_distance(&one, &two).is_err());
    }

    #[test]
    fn fidelity_of_basis_states() {
        assert_eq!(fidelity_with_ground(&DensityMatrix::ground()).unwrap(), 1.0);
        assert_eq!(fidelity_with_ground(&DensityMatrix::excited()).unwrap(), 0.0);
        let joint = DensityMatrix::ground().tensor(&DensityMatrix::ground());
        assert!(fidelity_with_ground(&joint).is_err());
    }

    #[test]
    fn fidelity_of_bloch_state_is_cos_squared() {
        for &theta in &[0.0, 0.3, FRAC_PI_2, 2.1] {
            let rho = BlochPureState::new(theta).density();
            let f = fidelity_with_ground(&rho).unwrap();
            assert!((f - theta.cos().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn trace_norm_basics() {
        assert_eq!(trace_norm(&ComplexMatrix::zeros(4)), 0.0);
        assert!((trace_norm(&ComplexMatrix::identity(8)) - 8.0).abs() < 1e-12);
        let sigma_z = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap();
        assert!((trace_norm(&sigma_z) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn trace_norm_of_anti_hermitian_commutator() {
        // [σx, σy] = 2i σz has singular values {2, 2}.
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let y = ComplexMatrix::from_entries(
            2,
            vec![
                C64::new(0.0, 0.0),
                C64::new(0.0, -1.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let comm = commutator(&x, &y).unwrap();
        let z = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap();
        let expected = z.scale(C64::new(0.0, 2.0));
        assert!(comm.max_abs_diff(&expected) < 1e-14);
        assert!((trace_norm(&comm) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn trace_norm_general_matrix_agrees_with_gram_route() {
        // Non-normal matrix with known singular values: [[0, 2], [0, 0]].
        let mut m = ComplexMatrix::zeros(2);
        m[(0, 1)] = C64::new(2.0, 0.0);
        assert!((trace_norm(&m) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn swap_commutes_with_symmetric_products() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let swap = swap_matrix(0, 1, 2).unwrap();
        for _ in 0..20 {
            let mut g = ComplexMatrix::zeros(2);
            for r in 0..2 {
                for c in 0..2 {
                    g[(r, c)] = C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
                }
            }
            let gram = g.matmul(&g.adjoint()).unwrap();
            let rho = gram.scale(C64::new(1.0, 0.0) / gram.trace());
            let prod = rho.kron(&rho);
            let comm = commutator(&swap, &prod).unwrap();
            assert!(comm.max_abs() < 1e-14);
        }
    }
}
