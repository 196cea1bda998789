//! Local-optimality classification of stationary points, two independent
//! ways: closed-form sign tests on the value pattern, and the numeric
//! spectrum of the projected Lagrangian Hessian. The two paths must agree
//! wherever the theory is decisive.

use crate::numerics::{qr_full, sym_eig, NumericsError, Spectrum};
use crate::stationary::{StationaryPoint, Structure};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("theory verdict {theory:?} disagrees with numeric verdict {numeric:?}")]
    TheoryNumericMismatch { theory: Verdict, numeric: Verdict },
    #[error("projected Hessian has fewer than two structural zero directions")]
    MissingStructuralZeros,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    LocalMax,
    LocalMin,
    Saddle,
    UnresolvedByTheory,
}

/// Which closed-form branch produced the theory verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoryPath {
    OddTwoValueK1,
    OddTwoValueSaddle,
    EvenTwoValueK1,
    EvenTwoValueSignTest { l: i128 },
    EvenThreeValueSaddle,
    EvenThreeValueQ1,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub theory_verdict: Verdict,
    pub theory_path: TheoryPath,
    pub numeric_verdict: Verdict,
    /// Ascending eigenvalues of the projected Hessian M = P H P.
    pub spectrum: Vec<f64>,
    /// Flags a non-structural eigenvalue inside the zero band.
    pub degenerate: bool,
    pub sigma_a: Option<f64>,
    pub sigma_b: Option<f64>,
    pub l_value: Option<i128>,
}

/// Lagrangian Hessian H = (m-1) diag(u^{m-2}) - alpha I, a diagonal matrix.
pub fn hessian_u(point: &StationaryPoint, m: usize) -> DMatrix<f64> {
    let u = point.u_vector();
    let n = u.len();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            (m as f64 - 1.0) * u[i].powi(m as i32 - 2) - point.alpha
        } else {
            0.0
        }
    })
}

/// Tangent-space projector P = I - u u' - (1/n) 1 1'.
pub fn projector(point: &StationaryPoint) -> DMatrix<f64> {
    let u = point.u_vector();
    let n = u.len();
    DMatrix::identity(n, n)
        - &u * u.transpose()
        - DMatrix::from_element(n, n, 1.0 / n as f64)
}

/// Projected Hessian M = P H P.
pub fn projected_hessian(point: &StationaryPoint, m: usize) -> DMatrix<f64> {
    let p = projector(point);
    let h = hessian_u(point, m);
    &p * h * &p
}

/// Projected Hessian through the QR route: Q2' H Q2 where Q2 spans the
/// null space of the constraint gradients A = [u, 1].
pub fn projected_hessian_qr(point: &StationaryPoint, m: usize) -> DMatrix<f64> {
    let u = point.u_vector();
    let n = u.len();
    let mut a = DMatrix::<f64>::zeros(n, 2);
    a.set_column(0, &u);
    a.set_column(1, &DVector::from_element(n, 1.0));
    let q = qr_full(&a);
    let q2 = q.columns(2, n - 2).into_owned();
    let h = hessian_u(point, m);
    q2.transpose() * h * q2
}

/// l(m, n, k) = (m-1) n k^{m-2} - (n-k)^{m-1} - k^{m-1}, in exact integer
/// arithmetic; its sign decides local minimality of even-order two-value
/// points with k >= 2.
pub fn l_value(m: usize, n: usize, k: usize) -> i128 {
    let (m, n, k) = (m as i128, n as i128, k as i128);
    (m - 1) * n * k.pow(m as u32 - 2) - (n - k).pow(m as u32 - 1) - k.pow(m as u32 - 1)
}

/// Closed-form classification from the value pattern alone.
pub fn classify_theory(point: &StationaryPoint, n: usize, m: usize) -> (Verdict, TheoryPath) {
    match &point.structure {
        Structure::TwoValue { k, .. } => {
            let k = *k;
            if m % 2 == 1 {
                if k == 1 {
                    (Verdict::LocalMax, TheoryPath::OddTwoValueK1)
                } else {
                    (Verdict::Saddle, TheoryPath::OddTwoValueSaddle)
                }
            } else if k == 1 {
                (Verdict::LocalMax, TheoryPath::EvenTwoValueK1)
            } else {
                let l = l_value(m, n, k);
                let verdict = if l > 0 {
                    Verdict::LocalMin
                } else if l < 0 {
                    Verdict::Saddle
                } else {
                    Verdict::UnresolvedByTheory
                };
                (verdict, TheoryPath::EvenTwoValueSignTest { l })
            }
        }
        Structure::ThreeValue { q, .. } => {
            if *q != 1 {
                (Verdict::Saddle, TheoryPath::EvenThreeValueSaddle)
            } else {
                // q = 1 is open; the theory only rules out a local max
                (Verdict::UnresolvedByTheory, TheoryPath::EvenThreeValueQ1)
            }
        }
    }
}

struct NumericOutcome {
    verdict: Verdict,
    spectrum: Spectrum,
    degenerate: bool,
}

/// Classifies from the spectrum of M after removing the two structural
/// zeros. Structural zeros are recognized by eigenvector alignment with
/// span{u, 1}, not merely by magnitude.
fn classify_numeric_inner(
    point: &StationaryPoint,
    m: usize,
) -> Result<NumericOutcome, ClassifyError> {
    let mm = projected_hessian(point, m);
    let spectrum = sym_eig(&mm)?;
    let tau = spectrum.zero_threshold;
    let vectors = spectrum.eigenvectors.as_ref().unwrap();
    let u = point.u_vector();
    let n = u.len();
    let ones = DVector::from_element(n, 1.0 / (n as f64).sqrt());

    // alignment of each near-zero eigenvector with span{u, 1}
    let mut zero_band: Vec<(usize, f64)> = Vec::new();
    for (i, &e) in spectrum.eigenvalues.iter().enumerate() {
        if e.abs() < tau {
            let q = vectors.column(i);
            let align = q.dot(&u).powi(2) + q.dot(&ones).powi(2);
            zero_band.push((i, align));
        }
    }
    if zero_band.len() < 2 {
        return Err(ClassifyError::MissingStructuralZeros);
    }
    zero_band.sort_by(|a, b| b.1.total_cmp(&a.1));
    let total_alignment: f64 = zero_band.iter().take(2).map(|z| z.1).sum();
    if total_alignment < 2.0 - 1e-6 {
        return Err(ClassifyError::MissingStructuralZeros);
    }
    let structural: Vec<usize> = zero_band.iter().take(2).map(|z| z.0).collect();
    let degenerate = zero_band.len() > 2;

    let mut neg = 0usize;
    let mut pos = 0usize;
    for (i, &e) in spectrum.eigenvalues.iter().enumerate() {
        if structural.contains(&i) {
            continue;
        }
        if e <= -tau {
            neg += 1;
        } else if e >= tau {
            pos += 1;
        }
    }
    let verdict = if neg > 0 && pos > 0 {
        Verdict::Saddle
    } else if pos == 0 {
        Verdict::LocalMax
    } else {
        Verdict::LocalMin
    };
    Ok(NumericOutcome {
        verdict,
        spectrum,
        degenerate,
    })
}

pub fn classify_numeric(point: &StationaryPoint, m: usize) -> Result<Verdict, ClassifyError> {
    classify_numeric_inner(point, m).map(|o| o.verdict)
}

/// Runs both paths and merges. Disagreement on a decisive theory verdict
/// is a hard error; an undecided theory defers to the numeric verdict.
pub fn classify(
    point: &StationaryPoint,
    n: usize,
    m: usize,
) -> Result<Classification, ClassifyError> {
    let (theory_verdict, theory_path) = classify_theory(point, n, m);
    let numeric = classify_numeric_inner(point, m)?;

    let verdict = match theory_verdict {
        Verdict::UnresolvedByTheory => numeric.verdict,
        decisive => {
            if decisive != numeric.verdict {
                return Err(ClassifyError::TheoryNumericMismatch {
                    theory: decisive,
                    numeric: numeric.verdict,
                });
            }
            decisive
        }
    };
    // the q = 1 three-value branch rules out a local max even though it is
    // otherwise open
    if theory_path == TheoryPath::EvenThreeValueQ1 && verdict == Verdict::LocalMax {
        return Err(ClassifyError::TheoryNumericMismatch {
            theory: Verdict::UnresolvedByTheory,
            numeric: Verdict::LocalMax,
        });
    }

    let (sigma_a, sigma_b) = match &point.structure {
        Structure::TwoValue { a, b, .. } => {
            let sa = (m as f64 - 1.0) * a.powi(m as i32 - 2) - point.alpha;
            let sb = (m as f64 - 1.0) * b.powi(m as i32 - 2) - point.alpha;
            (Some(sa), Some(sb))
        }
        _ => (None, None),
    };
    let l = match theory_path {
        TheoryPath::EvenTwoValueSignTest { l } => Some(l),
        _ => None,
    };

    Ok(Classification {
        verdict,
        theory_verdict,
        theory_path,
        numeric_verdict: numeric.verdict,
        spectrum: numeric.spectrum.eigenvalues,
        degenerate: numeric.degenerate,
        sigma_a,
        sigma_b,
        l_value: l,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stationary::{census, enumerate_three_value, Structure};
    use approx::assert_abs_diff_eq;

    fn point_with_k(points: &[StationaryPoint], k: usize) -> &StationaryPoint {
        points
            .iter()
            .find(|p| matches!(p.structure, Structure::TwoValue { k: kk, .. } if kk == k))
            .unwrap()
    }

    #[test]
    fn hessian_is_diagonal_two_valued() {
        let c = census(4, 4).unwrap();
        let p = point_with_k(&c.points, 1);
        let h = hessian_u(p, 4);
        let mut diag: Vec<f64> = (0..4).map(|i| h[(i, i)]).collect();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(h[(i, j)], 0.0);
                }
            }
        }
        diag.sort_by(|a, b| a.total_cmp(b));
        diag.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        assert_eq!(diag.len(), 2);
    }

    #[test]
    fn three_value_hessian_example() {
        // u = (1/sqrt2, 0, 0, -1/sqrt2), alpha = 1/2 for (n, m) = (4, 4)
        let pts = enumerate_three_value(4, 4).unwrap();
        let p = &pts[0];
        let h = hessian_u(p, 4);
        let mut diag: Vec<f64> = (0..4).map(|i| h[(i, i)]).collect();
        diag.sort_by(|a, b| a.total_cmp(b));
        assert_abs_diff_eq!(diag[0], -0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(diag[1], -0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(diag[2], 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(diag[3], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn projector_properties() {
        for (n, m) in [(4usize, 3usize), (5, 4)] {
            for p in &census(n, m).unwrap().points {
                let proj = projector(p);
                assert!((&proj * &proj - &proj).norm() < 1e-11);
                assert!((&proj * p.u_vector()).amax() < 1e-12);
                assert!((&proj * DVector::from_element(n, 1.0)).amax() < 1e-12);
                assert_abs_diff_eq!(proj.trace(), n as f64 - 2.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn two_value_spectrum_law() {
        for (n, m) in [(3usize, 3usize), (4, 3), (4, 4), (5, 4), (4, 5)] {
            for p in &census(n, m).unwrap().points {
                let (k, a, b) = match p.structure {
                    Structure::TwoValue { k, a, b } => (k, a, b),
                    _ => continue,
                };
                let sa = (m as f64 - 1.0) * a.powi(m as i32 - 2) - p.alpha;
                let sb = (m as f64 - 1.0) * b.powi(m as i32 - 2) - p.alpha;
                let mut expected: Vec<f64> = vec![0.0, 0.0];
                expected.extend(std::iter::repeat(sa).take(k - 1));
                expected.extend(std::iter::repeat(sb).take(n - k - 1));
                expected.sort_by(|x, y| x.total_cmp(y));
                let spec = sym_eig(&projected_hessian(p, m)).unwrap();
                for (got, want) in spec.eigenvalues.iter().zip(expected.iter()) {
                    assert_abs_diff_eq!(got, want, epsilon = 1e-9);
                }
                if m % 2 == 1 {
                    if k > 1 {
                        assert!(sa > 0.0);
                    }
                    assert!(sb < 0.0);
                }
            }
        }
    }

    #[test]
    fn qr_path_matches_projected_spectrum() {
        for (n, m) in [(3usize, 3usize), (4, 3), (4, 4), (3, 6)] {
            for p in &census(n, m).unwrap().points {
                let full = sym_eig(&projected_hessian(p, m)).unwrap();
                let reduced = sym_eig(&projected_hessian_qr(p, m)).unwrap();
                assert_eq!(reduced.eigenvalues.len(), n - 2);
                // the QR spectrum is the full spectrum minus two
                // structural zeros
                let mut remaining = full.eigenvalues.clone();
                for _ in 0..2 {
                    let (idx, _) = remaining
                        .iter()
                        .enumerate()
                        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
                        .unwrap();
                    remaining.remove(idx);
                }
                remaining.sort_by(|a, b| a.total_cmp(b));
                for (got, want) in reduced.eigenvalues.iter().zip(remaining.iter()) {
                    assert_abs_diff_eq!(got, want, epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn classify_full_grid_4_3() {
        let c = census(4, 3).unwrap();
        let mut max_count = 0;
        let mut saddle_count = 0;
        for p in &c.points {
            let cls = classify(p, 4, 3).unwrap();
            match cls.verdict {
                Verdict::LocalMax => max_count += 1,
                Verdict::Saddle => saddle_count += 1,
                other => panic!("unexpected verdict {other:?}"),
            }
        }
        assert_eq!(max_count, 4);
        assert_eq!(saddle_count, 3);
    }

    #[test]
    fn classify_full_grid_4_4() {
        let c = census(4, 4).unwrap();
        assert_eq!(c.points.len(), 13);
        let mut max_count = 0;
        let mut min_count = 0;
        let mut saddle_count = 0;
        for p in &c.points {
            let cls = classify(p, 4, 4).unwrap();
            match cls.verdict {
                Verdict::LocalMax => max_count += 1,
                Verdict::LocalMin => min_count += 1,
                Verdict::Saddle => saddle_count += 1,
                other => panic!("unexpected verdict {other:?}"),
            }
            if let Structure::TwoValue { k: 2, .. } = p.structure {
                assert_eq!(cls.l_value, Some(32));
                assert_eq!(cls.verdict, Verdict::LocalMin);
            }
        }
        assert_eq!(max_count, 4);
        assert_eq!(min_count, 3);
        assert_eq!(saddle_count, 6);
    }

    #[test]
    fn l_value_examples() {
        assert_eq!(l_value(4, 4, 2), 32);
        // the excluded degenerate combination sits exactly on the boundary
        assert_eq!(l_value(4, 3, 1), 0);
    }

    #[test]
    fn even_m_sign_symmetry() {
        // classification is invariant under u -> -u for even m
        let c = census(4, 4).unwrap();
        for p in &c.points {
            let mut negated = p.clone();
            negated.u = p.u.iter().map(|x| -x).collect();
            let a = classify(p, 4, 4).unwrap();
            let b = classify(&negated, 4, 4).unwrap();
            assert_eq!(a.verdict, b.verdict);
            for (x, y) in a.spectrum.iter().zip(b.spectrum.iter()) {
                assert_abs_diff_eq!(x, y, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn theory_numeric_agreement_across_grid() {
        for (n, m) in [
            (3usize, 3usize),
            (4, 3),
            (5, 3),
            (4, 4),
            (5, 4),
            (3, 6),
            (4, 5),
        ] {
            for p in &census(n, m).unwrap().points {
                let cls = classify(p, n, m).unwrap();
                if cls.theory_verdict != Verdict::UnresolvedByTheory {
                    assert_eq!(cls.theory_verdict, cls.numeric_verdict);
                }
            }
        }
    }

    #[test]
    fn three_value_points_are_saddles_when_q_not_1() {
        for (n, m) in [(4usize, 4usize), (3, 6), (5, 4)] {
            for p in &census(n, m).unwrap().points {
                if let Structure::ThreeValue { q, .. } = p.structure {
                    let cls = classify(p, n, m).unwrap();
                    if q != 1 {
                        assert_eq!(cls.verdict, Verdict::Saddle);
                    } else {
                        assert_ne!(cls.verdict, Verdict::LocalMax);
                    }
                }
            }
        }
    }
}
