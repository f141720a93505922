//! Dense complex linear-algebra substrate used by every other module.
//!
//! Matrices are `ndarray::Array2<Complex64>`; decompositions (eigen, SVD, LU)
//! are delegated to `faer`, matrix exponentials use scaling-and-squaring with
//! Padé approximants. All functions are pure and the returned values are
//! plain owned arrays, safe to share across threads.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = Array2<Complex64>;
pub type CVector = Array1<Complex64>;

/// Shorthand complex constructor.
#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Centralized numerical thresholds. Threaded through configuration rather
/// than hard-coded at call sites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative threshold for assigning an eigenvalue to the zero cluster:
    /// |lambda| <= zero_eig_rel * max|lambda|.
    pub zero_eig_rel: f64,
    /// Absolute Hermiticity deviation allowed for Hamiltonians and states.
    pub hermiticity_abs: f64,
    /// Absolute tolerance for identity checks against independent oracles.
    pub oracle_abs: f64,
    /// Absolute tolerance below which negative eigenvalues of nominally
    /// positive-semidefinite matrices are treated as zero.
    pub psd_abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            zero_eig_rel: 1e-9,
            hermiticity_abs: 1e-10,
            oracle_abs: 1e-8,
            psd_abs: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("zero_eig_rel", self.zero_eig_rel),
            ("hermiticity_abs", self.hermiticity_abs),
            ("oracle_abs", self.oracle_abs),
            ("psd_abs", self.psd_abs),
        ];
        for (name, v) in all {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidTolerance(format!(
                    "{name} must be strictly positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Residual guard applied after LU solves; see [`solve`].
const SOLVE_RESIDUAL_REL: f64 = 1e-10;
/// Residual guard applied to eigenpairs; see [`eig_general`].
const EIG_RESIDUAL_REL: f64 = 1e-9;

pub fn identity(n: usize) -> CMatrix {
    Array2::eye(n).mapv(|x: f64| c(x, 0.0))
}

pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    Array2::zeros((rows, cols))
}

pub fn is_square(a: &CMatrix) -> bool {
    a.nrows() == a.ncols()
}

pub fn all_finite(a: &CMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn adjoint(a: &CMatrix) -> CMatrix {
    a.t().mapv(|z| z.conj())
}

pub fn frobenius_norm(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Maximum absolute column sum.
pub fn one_norm(a: &CMatrix) -> f64 {
    let mut best = 0.0f64;
    for j in 0..a.ncols() {
        let s: f64 = a.column(j).iter().map(|z| z.norm()).sum();
        best = best.max(s);
    }
    best
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// faer interop
// ---------------------------------------------------------------------------

pub(crate) fn to_faer(a: &CMatrix) -> faer::Mat<Complex64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[[i, j]])
}

pub(crate) fn from_faer(a: &faer::Mat<Complex64>) -> CMatrix {
    Array2::from_shape_fn((a.nrows(), a.ncols()), |(i, j)| a[(i, j)])
}

/// Dense matrix product. Small products go through ndarray; larger ones are
/// routed through faer's gemm, which is substantially faster for the
/// superoperator sizes this library works at.
pub fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(
        a.ncols(),
        b.nrows(),
        "matmul: inner dimensions {} vs {}",
        a.ncols(),
        b.nrows()
    );
    if a.nrows().max(b.ncols()).max(a.ncols()) < 48 {
        a.dot(b)
    } else {
        let fa = to_faer(a);
        let fb = to_faer(b);
        from_faer(&(&fa * &fb))
    }
}

/// Kronecker product (dims multiply).
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    ndarray::linalg::kron(a, b)
}

// ---------------------------------------------------------------------------
// Spectral norm / singular values
// ---------------------------------------------------------------------------

/// Largest singular value. This is the norm used for all superoperator
/// distances in this library.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    singular_values(a)[0]
}

/// Singular values in descending order.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    let fa = to_faer(a);
    let svd = fa.svd().expect("svd: failed to converge");
    let s = svd.S().column_vector();
    (0..s.nrows()).map(|i| s[i].re).collect()
}

// ---------------------------------------------------------------------------
// Eigendecompositions
// ---------------------------------------------------------------------------

/// Full complex eigendecomposition of a general (non-Hermitian) matrix.
///
/// Returns (eigenvalues, right eigenvectors as columns), with every pair
/// verified against the residual bound |A v - lambda v| <= 1e-9 |A|;
/// convergence failure and residual violations surface as errors.
pub fn eig_general(a: &CMatrix) -> Result<(Vec<Complex64>, CMatrix)> {
    if !is_square(a) {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let fa = to_faer(a);
    let evd = fa
        .eigen()
        .map_err(|e| Error::EigFailed(format!("{e:?}")))?;
    let s = evd.S();
    let sc = s.column_vector();
    let n = a.nrows();
    let values: Vec<Complex64> = (0..n).map(|i| sc[i]).collect();
    let mut vectors = from_faer(&evd.U().to_owned());
    // Normalize columns so residual bounds are stated for unit vectors.
    for j in 0..n {
        let norm: f64 = vectors.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            let inv = c(1.0 / norm, 0.0);
            vectors.column_mut(j).mapv_inplace(|z| z * inv);
        }
    }
    let scale = spectral_norm(a);
    let av = matmul(a, &vectors);
    let mut worst = 0.0f64;
    for j in 0..n {
        let mut r = 0.0f64;
        for i in 0..n {
            r += (av[[i, j]] - values[j] * vectors[[i, j]]).norm_sqr();
        }
        worst = worst.max(r.sqrt());
    }
    let bound = EIG_RESIDUAL_REL * scale.max(f64::MIN_POSITIVE);
    if worst > bound {
        return Err(Error::EigResidual {
            residual: worst,
            tol: bound,
        });
    }
    Ok((values, vectors))
}

/// Eigendecomposition of a Hermitian matrix. Returns (ascending real
/// eigenvalues, orthonormal eigenvectors as columns). The strictly lower
/// triangle is read; the caller is responsible for Hermiticity.
pub fn eig_hermitian(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if !is_square(a) {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let fa = to_faer(a);
    let evd = fa
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::EigFailed(format!("{e:?}")))?;
    let s = evd.S();
    let sc = s.column_vector();
    let values: Vec<f64> = (0..a.nrows()).map(|i| sc[i].re).collect();
    let vectors = from_faer(&evd.U().to_owned());
    Ok((values, vectors))
}

// ---------------------------------------------------------------------------
// Linear solves
// ---------------------------------------------------------------------------

/// Solve A X = B for square A via partial-pivot LU. Singular or severely
/// ill-conditioned systems are rejected through a residual check
/// |A X - B| <= 1e-10 * max(|B|, |A||X|) in Frobenius norm.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if !is_square(a) {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch {
            context: "solve: rhs rows",
            got: b.nrows(),
            expected: a.nrows(),
        });
    }
    use faer::prelude::Solve;
    let fa = to_faer(a);
    let fb = to_faer(b);
    let lu = fa.partial_piv_lu();
    let x = from_faer(&lu.solve(&fb));
    if !all_finite(&x) {
        return Err(Error::SingularSystem { residual: f64::INFINITY });
    }
    let residual = frobenius_norm(&(&matmul(a, &x) - b));
    let scale = frobenius_norm(b).max(frobenius_norm(a) * frobenius_norm(&x));
    if residual > SOLVE_RESIDUAL_REL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::SingularSystem { residual });
    }
    Ok(x)
}

/// Matrix inverse (thin wrapper over [`solve`] with identity right-hand side).
pub fn inv(a: &CMatrix) -> Result<CMatrix> {
    solve(a, &identity(a.nrows()))
}

// ---------------------------------------------------------------------------
// Matrix exponential
// ---------------------------------------------------------------------------

/// Matrix exponential by scaling-and-squaring with diagonal Padé
/// approximants of orders 3/5/7/9/13 selected from the 1-norm (Higham 2005).
pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    if !is_square(a) {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if !all_finite(a) {
        return Err(Error::NonFinite { context: "expm input" });
    }
    let n = a.nrows();
    let norm = one_norm(a);

    const THETA_3: f64 = 1.495585217958292e-2;
    const THETA_5: f64 = 2.539398330063230e-1;
    const THETA_7: f64 = 9.504178996162932e-1;
    const THETA_9: f64 = 2.097847961257068;
    const THETA_13: f64 = 5.371920351148152;

    if norm <= THETA_9 {
        let order = if norm <= THETA_3 {
            3
        } else if norm <= THETA_5 {
            5
        } else if norm <= THETA_7 {
            7
        } else {
            9
        };
        return pade_low(a, order);
    }

    // Scale A by 2^-s so the scaled norm fits the order-13 approximant,
    // then square s times.
    let s = ((norm / THETA_13).log2().ceil().max(0.0)) as u32;
    let scaled = a.mapv(|z| z / c(2f64.powi(s as i32), 0.0));
    let mut e = pade_13(&scaled)?;
    for _ in 0..s {
        e = matmul(&e, &e);
    }
    debug_assert_eq!(e.nrows(), n);
    Ok(e)
}

fn pade_low(a: &CMatrix, order: usize) -> Result<CMatrix> {
    let b: &[f64] = match order {
        3 => &[120.0, 60.0, 12.0, 1.0],
        5 => &[30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0],
        7 => &[
            17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
        ],
        9 => &[
            17643225600.0,
            8821612800.0,
            2075673600.0,
            302702400.0,
            30270240.0,
            2162160.0,
            110880.0,
            3960.0,
            90.0,
            1.0,
        ],
        _ => unreachable!("unsupported Padé order"),
    };
    let n = a.nrows();
    let id = identity(n);
    let a2 = matmul(a, a);
    // Even/odd splits: U = A * sum b[2k+1] A^(2k), V = sum b[2k] A^(2k).
    let mut even = &id * c(b[0], 0.0);
    let mut odd = &id * c(b[1], 0.0);
    let mut a2k = id.clone();
    let mut k = 2;
    while k < b.len() {
        a2k = matmul(&a2k, &a2);
        even = even + &a2k * c(b[k], 0.0);
        if k + 1 < b.len() {
            odd = odd + &a2k * c(b[k + 1], 0.0);
        }
        k += 2;
    }
    let u = matmul(a, &odd);
    let v = even;
    solve(&(&v - &u), &(&v + &u))
}

fn pade_13(a: &CMatrix) -> Result<CMatrix> {
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let n = a.nrows();
    let id = identity(n);
    let a2 = matmul(a, a);
    let a4 = matmul(&a2, &a2);
    let a6 = matmul(&a4, &a2);
    let u_hi = &a6 * c(B[13], 0.0) + &a4 * c(B[11], 0.0) + &a2 * c(B[9], 0.0);
    let u_inner = matmul(&a6, &u_hi)
        + &a6 * c(B[7], 0.0)
        + &a4 * c(B[5], 0.0)
        + &a2 * c(B[3], 0.0)
        + &id * c(B[1], 0.0);
    let u = matmul(a, &u_inner);
    let v_hi = &a6 * c(B[12], 0.0) + &a4 * c(B[10], 0.0) + &a2 * c(B[8], 0.0);
    let v = matmul(&a6, &v_hi)
        + &a6 * c(B[6], 0.0)
        + &a4 * c(B[4], 0.0)
        + &a2 * c(B[2], 0.0)
        + &id * c(B[0], 0.0);
    solve(&(&v - &u), &(&v + &u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> CMatrix {
        Array2::from_shape_fn((n, n), |_| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale
        })
    }

    #[test]
    fn kron_identity_cases() {
        let i2 = identity(2);
        assert_eq!(kron(&i2, &i2), identity(4));

        let sx = ndarray::array![[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]];
        let k = kron(&i2, &sx);
        // Block-diagonal with sigma_x blocks.
        for b in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    assert_eq!(k[[2 * b + i, 2 * b + j]], sx[[i, j]]);
                }
            }
        }
        assert_eq!(k[[0, 2]], c(0., 0.));
        assert_eq!(k[[3, 0]], c(0., 0.));
    }

    #[test]
    fn kron_mixed_product_against_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 2, 1.0);
            let b = random_matrix(&mut rng, 2, 1.0);
            let x = random_matrix(&mut rng, 2, 1.0);
            let d = random_matrix(&mut rng, 2, 1.0);
            // kron(a,b) kron(x,d) = kron(ax, bd); oracle is ndarray's own dot.
            let lhs = kron(&a, &b).dot(&kron(&x, &d));
            let rhs = kron(&a.dot(&x), &b.dot(&d));
            assert!(max_abs(&(&lhs - &rhs)) < 1e-12);
        }
    }

    #[test]
    fn kron_associative_and_bilinear() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a = random_matrix(&mut rng, 2, 1.0);
        let b = random_matrix(&mut rng, 3, 1.0);
        let d = random_matrix(&mut rng, 2, 1.0);
        let assoc = &kron(&kron(&a, &b), &d) - &kron(&a, &kron(&b, &d));
        assert!(max_abs(&assoc) < 1e-12);

        let e = random_matrix(&mut rng, 2, 1.0);
        let lin = &kron(&(&a + &e), &b) - &(&kron(&a, &b) + &kron(&e, &b));
        assert!(max_abs(&lin) < 1e-12);
        let alpha = c(0.7, -0.4);
        let sc = &kron(&(&a * alpha), &b) - &(&kron(&a, &b) * alpha);
        assert!(max_abs(&sc) < 1e-12);
    }

    #[test]
    fn expm_zero_is_identity() {
        let e = expm(&zeros(3, 3)).unwrap();
        assert!(max_abs(&(&e - &identity(3))) < 1e-15);
    }

    #[test]
    fn expm_nilpotent_terminates() {
        let a = ndarray::array![[c(0., 0.), c(1., 0.)], [c(0., 0.), c(0., 0.)]];
        let e = expm(&a).unwrap();
        let expected = ndarray::array![[c(1., 0.), c(1., 0.)], [c(0., 0.), c(1., 0.)]];
        assert!(max_abs(&(&e - &expected)) < 1e-14);
    }

    #[test]
    fn expm_matches_eigendecomposition_on_diagonalizable_input() {
        // Relative accuracy check on a well-conditioned normal matrix where
        // the exponential is known in closed form through the spectrum.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..5 {
            let h = {
                let g = random_matrix(&mut rng, 5, 1.0);
                (&g + &adjoint(&g)) * c(0.5, 0.0)
            };
            let (vals, vecs) = eig_hermitian(&h).unwrap();
            let d = Array2::from_diag(&Array1::from_iter(
                vals.iter().map(|v| c(v.exp(), 0.0)),
            ));
            let oracle = matmul(&matmul(&vecs, &d), &adjoint(&vecs));
            let e = expm(&h).unwrap();
            let rel = spectral_norm(&(&e - &oracle)) / spectral_norm(&oracle);
            assert!(rel < 1e-12, "rel err {rel}");
        }
    }

    #[test]
    fn expm_inverse_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..10 {
            let a = random_matrix(&mut rng, 4, 1.0);
            let scale = 5.0 / spectral_norm(&a).max(1e-12);
            let a = &a * c(scale.min(1.0) * 1.0, 0.0);
            let e = expm(&a).unwrap();
            let em = expm(&a.mapv(|z| -z)).unwrap();
            let err = max_abs(&(&matmul(&e, &em) - &identity(4)));
            assert!(err < 1e-10, "err {err}");
        }
    }

    #[test]
    fn expm_perturbation_inequality() {
        // |e^X - e^(X+Y)| <= |Y| e^(|X| + |Y|) on 100 random pairs.
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..100 {
            let x = random_matrix(&mut rng, 3, 0.8);
            let y = random_matrix(&mut rng, 3, 0.3);
            let lhs = spectral_norm(&(&expm(&x).unwrap() - &expm(&(&x + &y)).unwrap()));
            let bound =
                spectral_norm(&y) * (spectral_norm(&x) + spectral_norm(&y)).exp();
            assert!(
                lhs <= bound * (1.0 + 1e-12),
                "inequality violated: {lhs} > {bound}"
            );
        }
    }

    #[test]
    fn spectral_norm_cases() {
        assert!((spectral_norm(&identity(3)) - 1.0).abs() < 1e-14);
        let d = ndarray::array![[c(3., 0.), c(0., 0.)], [c(0., 0.), c(0., -4.)]];
        assert!((spectral_norm(&d) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn spectral_norm_dominates_vector_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 4, 1.0);
            let v = Array1::from_shape_fn(4, |_| {
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let av = a.dot(&v);
            let avn = av.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!(spectral_norm(&a) >= avn / vn - 1e-12);
        }
    }

    #[test]
    fn spectral_norm_submultiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 4, 1.0);
            let b = random_matrix(&mut rng, 4, 1.0);
            assert!(
                spectral_norm(&matmul(&a, &b))
                    <= spectral_norm(&a) * spectral_norm(&b) + 1e-12
            );
        }
    }

    #[test]
    fn eig_diagonal() {
        let a = ndarray::array![[c(0., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]];
        let (vals, _) = eig_general(&a).unwrap();
        let mut re: Vec<f64> = vals.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 1.0).abs() < 1e-14);
        assert!(re[1].abs() < 1e-14);
    }

    #[test]
    fn eig_residual_on_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let a = random_matrix(&mut rng, 8, 1.0);
        let (vals, vecs) = eig_general(&a).unwrap();
        let scale = spectral_norm(&a);
        for j in 0..8 {
            let v = vecs.column(j).to_owned();
            let av = a.dot(&v);
            let mut r = 0.0;
            for i in 0..8 {
                r += (av[i] - vals[j] * v[i]).norm_sqr();
            }
            assert!(r.sqrt() <= 1e-9 * scale);
        }
    }

    #[test]
    fn eig_rejects_non_square() {
        assert!(matches!(
            eig_general(&zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn solve_identity_and_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let b = random_matrix(&mut rng, 3, 1.0);
        let x = solve(&identity(3), &b).unwrap();
        assert!(max_abs(&(&x - &b)) < 1e-14);

        let d = ndarray::array![[c(2., 0.), c(0., 0.)], [c(0., 0.), c(4., 0.)]];
        let x = solve(&d, &identity(2)).unwrap();
        assert!((x[[0, 0]] - c(0.5, 0.)).norm() < 1e-15);
        assert!((x[[1, 1]] - c(0.25, 0.)).norm() < 1e-15);
    }

    #[test]
    fn solve_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..10 {
            let a = &random_matrix(&mut rng, 5, 1.0) + &(&identity(5) * c(2.0, 0.0));
            let x = random_matrix(&mut rng, 5, 1.0);
            let b = matmul(&a, &x);
            let got = solve(&a, &b).unwrap();
            assert!(max_abs(&(&got - &x)) < 1e-9);
        }
    }

    #[test]
    fn solve_rejects_singular() {
        let singular = ndarray::array![[c(1., 0.), c(2., 0.)], [c(2., 0.), c(4., 0.)]];
        assert!(matches!(
            solve(&singular, &identity(2)),
            Err(Error::SingularSystem { .. })
        ));
    }

    #[test]
    fn tolerances_validate() {
        assert!(Tolerances::default().validate().is_ok());
        let bad = Tolerances {
            zero_eig_rel: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
