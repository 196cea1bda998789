//! Self-contained small-matrix numerics: a cyclic Jacobi eigensolver,
//! full Householder QR, a damped-free Newton solver with finite-difference
//! Jacobians, and real root isolation for `t^{m-1} - alpha*t - beta`.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("matrix is not symmetric (|A - A^T|_inf = {0:.3e})")]
    NotSymmetric(f64),
    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("matrix dimension {0} exceeds the supported limit of 64")]
    TooLarge(usize),
    #[error("Newton iteration hit the iteration limit")]
    MaxIterations,
    #[error("singular Jacobian encountered in Newton iteration")]
    SingularJacobian,
}

/// Full spectrum of a small symmetric matrix.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors, column i paired with `eigenvalues[i]`.
    pub eigenvectors: Option<DMatrix<f64>>,
    /// Counts of (negative, zero, positive) eigenvalues under `zero_threshold`.
    pub signature: (usize, usize, usize),
    /// Threshold used when computing the signature.
    pub zero_threshold: f64,
}

impl Spectrum {
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues
            .iter()
            .fold(0.0_f64, |acc, &e| acc.max(e.abs()))
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Iterates sweeps until the off-diagonal Frobenius norm drops below
/// `1e-13 * |A|_F`. The signature zero-threshold is
/// `1e-8 * max(1, spectral radius)`.
pub fn sym_eig(a: &DMatrix<f64>) -> Result<Spectrum, NumericsError> {
    let k = a.nrows();
    if k > 64 {
        return Err(NumericsError::TooLarge(k));
    }
    let asym = (a - a.transpose()).abs().max();
    if asym >= 1e-10 {
        return Err(NumericsError::NotSymmetric(asym));
    }

    let norm = a.norm();
    let tol = 1e-13 * norm;
    let mut m = a.clone();
    let mut v = DMatrix::<f64>::identity(k, k);

    let mut converged = norm == 0.0 || k < 2;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if converged {
            break;
        }
        for p in 0..k {
            for q in (p + 1)..k {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                // classic Jacobi rotation choosing the smaller angle
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..k {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = c * mip - s * miq;
                    m[(i, q)] = s * mip + c * miq;
                }
                for j in 0..k {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = c * mpj - s * mqj;
                    m[(q, j)] = s * mpj + c * mqj;
                }
                for i in 0..k {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = c * vip - s * viq;
                    v[(i, q)] = s * vip + c * viq;
                }
            }
        }
        let mut off = 0.0;
        for p in 0..k {
            for q in 0..k {
                if p != q {
                    off += m[(p, q)] * m[(p, q)];
                }
            }
        }
        converged = off.sqrt() < tol;
    }
    if !converged {
        return Err(NumericsError::NoConvergence(JACOBI_MAX_SWEEPS));
    }

    let mut pairs: Vec<(f64, usize)> = (0..k).map(|i| (m[(i, i)], i)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let eigenvalues: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut vectors = DMatrix::<f64>::zeros(k, k);
    for (dst, (_, src)) in pairs.iter().enumerate() {
        vectors.set_column(dst, &v.column(*src));
    }

    let radius = eigenvalues.iter().fold(0.0_f64, |acc, &e| acc.max(e.abs()));
    let tau = 1e-8 * radius.max(1.0);
    let neg = eigenvalues.iter().filter(|&&e| e < -tau).count();
    let pos = eigenvalues.iter().filter(|&&e| e > tau).count();
    Ok(Spectrum {
        signature: (neg, k - neg - pos, pos),
        eigenvalues,
        eigenvectors: Some(vectors),
        zero_threshold: tau,
    })
}

/// Full Householder QR of a tall matrix; returns the square orthogonal Q.
pub fn qr_full(a: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, c) = a.shape();
    assert!(c <= n);
    let mut r = a.clone();
    let mut q = DMatrix::<f64>::identity(n, n);
    for j in 0..c.min(n.saturating_sub(1)) {
        let x = r.view((j, j), (n - j, 1)).into_owned();
        let alpha = -x[(0, 0)].signum() * x.norm();
        if alpha == 0.0 {
            continue;
        }
        let mut vh = x;
        vh[(0, 0)] -= alpha;
        let vnorm = vh.norm();
        if vnorm == 0.0 {
            continue;
        }
        vh /= vnorm;
        // apply H = I - 2 v v^T to the trailing blocks of R and Q
        for col in j..c {
            let dot = (0..n - j).map(|i| vh[(i, 0)] * r[(j + i, col)]).sum::<f64>();
            for i in 0..n - j {
                r[(j + i, col)] -= 2.0 * dot * vh[(i, 0)];
            }
        }
        for col in 0..n {
            let dot = (0..n - j).map(|i| vh[(i, 0)] * q[(j + i, col)]).sum::<f64>();
            for i in 0..n - j {
                q[(j + i, col)] -= 2.0 * dot * vh[(i, 0)];
            }
        }
    }
    // accumulated transforms act on the left; Q is their transpose
    q.transpose()
}

/// Real roots of `t^{m-1} - alpha*t - beta`, ascending and deduplicated.
///
/// Brackets sign changes on a Cauchy-bound interval and refines with
/// bisection followed by Newton polishing; tangent (double) roots are
/// recovered from the critical points of the polynomial.
pub fn poly_roots_real(m: usize, alpha: f64, beta: f64) -> Vec<f64> {
    assert!(m >= 3);
    let deg = m - 1;
    let f = |t: f64| t.powi(deg as i32) - alpha * t - beta;
    let df = |t: f64| deg as f64 * t.powi(deg as i32 - 1) - alpha;

    let bound = 1.0 + alpha.abs().max(beta.abs());
    let samples = 4000;
    let mut roots: Vec<f64> = Vec::new();

    let refine = |mut lo: f64, mut hi: f64| -> f64 {
        let (mut flo, fhi) = (f(lo), f(hi));
        if flo == 0.0 {
            return lo;
        }
        if fhi == 0.0 {
            return hi;
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            let fmid = f(mid);
            if fmid == 0.0 {
                return mid;
            }
            if (flo < 0.0) == (fmid < 0.0) {
                lo = mid;
                flo = fmid;
            } else {
                hi = mid;
            }
        }
        let mut t = 0.5 * (lo + hi);
        for _ in 0..8 {
            let d = df(t);
            if d == 0.0 {
                break;
            }
            t -= f(t) / d;
        }
        t
    };

    let mut prev_t = -bound;
    let mut prev_f = f(prev_t);
    for i in 1..=samples {
        let t = -bound + 2.0 * bound * i as f64 / samples as f64;
        let ft = f(t);
        if prev_f == 0.0 {
            roots.push(prev_t);
        } else if (prev_f < 0.0) != (ft < 0.0) {
            roots.push(refine(prev_t, t));
        }
        prev_t = t;
        prev_f = ft;
    }
    if prev_f == 0.0 {
        roots.push(prev_t);
    }

    // tangent roots sit at critical points of f
    if alpha != 0.0 {
        let c = (alpha / deg as f64).abs().powf(1.0 / (deg as f64 - 1.0));
        for crit in [c, -c] {
            if f(crit).abs() < 1e-12 {
                roots.push(crit);
            }
        }
    }

    roots.sort_by(|a, b| a.total_cmp(b));
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    roots.retain(|&t| f(t).abs() < 1e-11);
    roots
}

/// Newton's method with a central finite-difference Jacobian (step 1e-7).
pub fn newton_solve<F>(
    residual: F,
    x0: &DVector<f64>,
    tol: f64,
) -> Result<DVector<f64>, NumericsError>
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
{
    const FD_STEP: f64 = 1e-7;
    const MAX_ITERS: usize = 100;
    let n = x0.len();
    let mut x = x0.clone();
    for _ in 0..MAX_ITERS {
        let fx = residual(&x);
        if fx.amax() < tol {
            return Ok(x);
        }
        let mut jac = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += FD_STEP;
            xm[j] -= FD_STEP;
            let col = (residual(&xp) - residual(&xm)) / (2.0 * FD_STEP);
            jac.set_column(j, &col);
        }
        let lu = jac.lu();
        match lu.solve(&fx) {
            Some(delta) if delta.iter().all(|d| d.is_finite()) => x -= delta,
            _ => return Err(NumericsError::SingularJacobian),
        }
    }
    let fx = residual(&x);
    if fx.amax() < tol {
        Ok(x)
    } else {
        Err(NumericsError::MaxIterations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn centering_projector(k: usize) -> DMatrix<f64> {
        DMatrix::identity(k, k) - DMatrix::from_element(k, k, 1.0 / k as f64)
    }

    #[test]
    fn identity_spectrum() {
        let s = sym_eig(&DMatrix::identity(3, 3)).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 1.0, 1.0]);
        assert_eq!(s.signature, (0, 0, 3));
    }

    #[test]
    fn diagonal_signature() {
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -0.5, -0.5, 1.0]));
        let s = sym_eig(&d).unwrap();
        assert_eq!(s.signature, (2, 0, 2));
    }

    #[test]
    fn projector_spectrum() {
        // I_2 - J_2/2 is idempotent with eigenvalues 0 and 1
        let s = sym_eig(&centering_projector(2)).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.eigenvalues[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn centering_projectors_have_single_zero() {
        for k in 2..=8 {
            let s = sym_eig(&centering_projector(k)).unwrap();
            assert_abs_diff_eq!(s.eigenvalues[0], 0.0, epsilon = 1e-10);
            for &e in &s.eigenvalues[1..] {
                assert_abs_diff_eq!(e, 1.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn reconstruction_and_similarity_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let k = rng.gen_range(2..8);
            let raw = DMatrix::from_fn(k, k, |_, _| rng.gen_range(-1.0..1.0));
            let a = (&raw + raw.transpose()) * 0.5;
            let s = sym_eig(&a).unwrap();
            let v = s.eigenvectors.as_ref().unwrap();
            let lam = DMatrix::from_diagonal(&DVector::from_vec(s.eigenvalues.clone()));
            let recon = v * lam * v.transpose();
            assert!((&a - recon).norm() < 1e-9 * a.norm().max(1.0));

            // random orthogonal similarity leaves the eigenvalue set fixed
            let g = DMatrix::from_fn(k, k, |_, _| rng.gen_range(-1.0..1.0));
            let q = qr_full(&g);
            let b = q.transpose() * &a * &q;
            let sb = sym_eig(&b).unwrap();
            for (ea, eb) in s.eigenvalues.iter().zip(sb.eigenvalues.iter()) {
                assert_abs_diff_eq!(ea, eb, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn rejects_nonsymmetric() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(sym_eig(&a), Err(NumericsError::NotSymmetric(_))));
    }

    #[test]
    fn qr_full_is_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 3..8 {
            let a = DMatrix::from_fn(n, 2, |_, _| rng.gen_range(-1.0..1.0));
            let q = qr_full(&a);
            assert!((q.transpose() * &q - DMatrix::identity(n, n)).norm() < 1e-12);
            // trailing columns are orthogonal to the column span of a
            for j in 2..n {
                for c in 0..2 {
                    let dot: f64 = (0..n).map(|i| q[(i, j)] * a[(i, c)]).sum();
                    assert_abs_diff_eq!(dot, 0.0, epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn roots_factorizable_cases() {
        let r = poly_roots_real(3, 1.0, 0.0);
        assert_eq!(r.len(), 2);
        assert_abs_diff_eq!(r[0], 0.0, epsilon = 1e-11);
        assert_abs_diff_eq!(r[1], 1.0, epsilon = 1e-11);

        let r = poly_roots_real(4, 0.5, 0.0);
        assert_eq!(r.len(), 3);
        assert_abs_diff_eq!(r[0], -std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-11);
        assert_abs_diff_eq!(r[1], 0.0, epsilon = 1e-11);
        assert_abs_diff_eq!(r[2], std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-11);

        let r = poly_roots_real(3, 0.0, 1.0);
        assert_eq!(r.len(), 2);
        assert_abs_diff_eq!(r[0], -1.0, epsilon = 1e-11);
        assert_abs_diff_eq!(r[1], 1.0, epsilon = 1e-11);
    }

    #[test]
    fn roots_odd_order_positive_multipliers() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for m in [3usize, 5, 7] {
            for _ in 0..50 {
                let alpha = rng.gen_range(0.01..3.0);
                let beta = rng.gen_range(0.01..3.0);
                let roots = poly_roots_real(m, alpha, beta);
                assert_eq!(roots.len(), 2, "m={m} alpha={alpha} beta={beta}");
                assert!(roots[0] < 0.0 && roots[1] > 0.0);
                for &t in &roots {
                    assert!((t.powi(m as i32 - 1) - alpha * t - beta).abs() < 1e-11);
                }
                for w in roots.windows(2) {
                    assert!(w[1] - w[0] > 1e-9);
                }
            }
        }
    }

    #[test]
    fn newton_affine_one_step() {
        let c = DVector::from_vec(vec![1.0, -2.0, 0.5]);
        let cc = c.clone();
        let x = newton_solve(move |x| x - &cc, &DVector::zeros(3), 1e-12).unwrap();
        assert!((x - c).amax() < 1e-10);
    }

    #[test]
    fn newton_singular_jacobian() {
        let res = newton_solve(
            |_x: &DVector<f64>| DVector::from_vec(vec![1.0, 1.0]),
            &DVector::zeros(2),
            1e-12,
        );
        assert!(matches!(res, Err(NumericsError::SingularJacobian)));
    }
}
