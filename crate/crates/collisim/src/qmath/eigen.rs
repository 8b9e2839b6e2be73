//! Eigenvalues of small dense Hermitian matrices via the cyclic Jacobi
//! method. The matrices showing up in this crate never exceed dimension 16
//! on an eigenvalue path, so quadratic-convergence Jacobi is both accurate
//! and plenty fast.

use num_complex::Complex64 as C64;

use super::matrix::ComplexMatrix;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues of a Hermitian matrix, ascending. The input is symmetrized
/// as `(m + m†)/2` while loading, so representation-level asymmetry of the
/// order of machine epsilon is harmless.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let d = m.dim();
    if d == 1 {
        return vec![m[(0, 0)].re];
    }
    if d == 2 {
        let a = m[(0, 0)].re;
        let b = m[(1, 1)].re;
        let off = 0.5 * (m[(0, 1)] + m[(1, 0)].conj());
        let mid = 0.5 * (a + b);
        let rad = (0.25 * (a - b) * (a - b) + off.norm_sqr()).sqrt();
        return vec![mid - rad, mid + rad];
    }

    // Working copy, explicitly hermitized.
    let mut w = vec![C64::new(0.0, 0.0); d * d];
    for r in 0..d {
        for c in 0..d {
            w[r * d + c] = 0.5 * (m[(r, c)] + m[(c, r)].conj());
        }
    }

    let scale: f64 = w.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return vec![0.0; d];
    }
    let target = scale * f64::EPSILON * d as f64;

    for _ in 0..MAX_SWEEPS {
        let off: f64 = {
            let mut acc = 0.0;
            for p in 0..d {
                for q in (p + 1)..d {
                    acc += w[p * d + q].norm_sqr();
                }
            }
            (2.0 * acc).sqrt()
        };
        if off <= target {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                rotate(&mut w, d, p, q);
            }
        }
    }

    let mut eigs: Vec<f64> = (0..d).map(|i| w[i * d + i].re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eigs
}

/// One Jacobi rotation annihilating the `(p, q)` entry of the Hermitian
/// working matrix `w`. Writing `w[p][q] = r·e^{iφ}`, the plane rotation
///
/// ```text
/// J[p][p] = c,  J[p][q] = s·e^{iφ},  J[q][p] = -s·e^{-iφ},  J[q][q] = c
/// ```
///
/// with `tan` chosen from `t² + 2τt - 1 = 0`, `τ = (w[q][q] - w[p][p])/(2r)`,
/// sends `w` to `J† w J`.
fn rotate(w: &mut [C64], d: usize, p: usize, q: usize) {
    let apq = w[p * d + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = w[p * d + p].re;
    let aqq = w[q * d + q].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let s_phase = s * phase;
    for k in 0..d {
        if k == p || k == q {
            continue;
        }
        let akp = w[k * d + p];
        let akq = w[k * d + q];
        let new_kp = c * akp - s_phase.conj() * akq;
        let new_kq = s_phase * akp + c * akq;
        w[k * d + p] = new_kp;
        w[k * d + q] = new_kq;
        w[p * d + k] = new_kp.conj();
        w[q * d + k] = new_kq.conj();
    }
    let new_pp = c * c * app - 2.0 * s * c * r + s * s * aqq;
    let new_qq = s * s * app + 2.0 * s * c * r + c * c * aqq;
    w[p * d + p] = C64::new(new_pp, 0.0);
    w[q * d + q] = C64::new(new_qq, 0.0);
    w[p * d + q] = C64::new(0.0, 0.0);
    w[q * d + p] = C64::new(0.0, 0.0);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::matrix::ComplexMatrix;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn pauli_z_eigenvalues() {
        let z = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap();
        assert_eq!(hermitian_eigenvalues(&z), vec![-1.0, 1.0]);
    }

    #[test]
    fn pauli_y_eigenvalues() {
        let y = ComplexMatrix::from_entries(
            2,
            vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
        )
        .unwrap();
        let eigs = hermitian_eigenvalues(&y);
        assert!((eigs[0] + 1.0).abs() < 1e-15);
        assert!((eigs[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bell_correlation_spectrum() {
        // |Φ+><Φ+| - 1/4 has eigenvalues {3/4, -1/4, -1/4, -1/4}.
        let mut bell = ComplexMatrix::zeros(4);
        for &r in &[0usize, 3] {
            for &cc in &[0usize, 3] {
                bell[(r, cc)] = c(0.5, 0.0);
            }
        }
        let chi = &bell - &ComplexMatrix::identity(4).scale(c(0.25, 0.0));
        let eigs = hermitian_eigenvalues(&chi);
        let expected = [-0.25, -0.25, -0.25, 0.75];
        for (got, want) in eigs.iter().zip(expected.iter()) {
            assert!((got - want).abs() < 1e-14, "got {got}, want {want}");
        }
    }

    #[test]
    fn moment_identities_on_random_hermitian() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for dim in [4usize, 8] {
            for _ in 0..25 {
                let mut g = ComplexMatrix::zeros(dim);
                for r in 0..dim {
                    for cc in 0..dim {
                        g[(r, cc)] = c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
                    }
                }
                let h = &g + &g.adjoint();
                let eigs = hermitian_eigenvalues(&h);
                let tr1: f64 = eigs.iter().sum();
                let tr2: f64 = eigs.iter().map(|x| x * x).sum();
                let h2 = h.matmul(&h).unwrap();
                assert!((tr1 - h.trace().re).abs() < 1e-10 * dim as f64);
                assert!((tr2 - h2.trace().re).abs() < 1e-10 * dim as f64);
            }
        }
    }
}
