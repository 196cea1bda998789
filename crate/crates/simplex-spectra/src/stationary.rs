//! Enumeration of all stationary points of the reformulated model
//! max sum_i u_i^m subject to u'u = 1, u'1 = 0, with KKT certification,
//! the u <-> v change of variables, and a multistart gradient oracle.

use crate::frame::Frame;
use crate::numerics::{newton_solve, NumericsError};
use crate::tensor::{SymTensor, TensorError};
use itertools::Itertools;
use nalgebra::DVector;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StationaryError {
    #[error("enumeration requires n >= 3, got {0}")]
    BadVertexCount(usize),
    #[error("enumeration requires m >= 3, got {0}")]
    BadOrder(usize),
    #[error("(n, m) = (3, 4) is the degenerate combination: S v^4 is constant")]
    DegenerateCombination,
    #[error("three-value enumeration requires even m, got {0}")]
    OddOrder(usize),
    #[error("u violates the feasibility constraints (|u'u - 1| or |u'1| too large)")]
    InfeasibleInput,
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("eigenpair residual {0:.3e} exceeds the certificate bound")]
    BrokenCorrespondence(f64),
}

/// Value pattern of a stationary point.
///
/// Descriptors are stored in the paper's convention: for two-value points
/// `k` counts the positive value `a` and satisfies `k <= n/2`; for
/// three-value points `c > d > e` with multiplicities `(p, q, s)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Structure {
    TwoValue { k: usize, a: f64, b: f64 },
    ThreeValue { p: usize, q: usize, s: usize, c: f64, d: f64, e: f64 },
}

/// A certified KKT point of the reformulated model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StationaryPoint {
    pub u: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub structure: Structure,
    pub kkt_residual: f64,
    pub objective: f64,
}

impl StationaryPoint {
    pub fn u_vector(&self) -> DVector<f64> {
        DVector::from_vec(self.u.clone())
    }
}

pub(crate) fn objective(u: &DVector<f64>, m: usize) -> f64 {
    u.iter().map(|x| x.powi(m as i32)).sum()
}

pub(crate) fn kkt_residual(u: &DVector<f64>, m: usize) -> f64 {
    let n = u.len();
    let alpha = objective(u, m);
    let beta = u.iter().map(|x| x.powi(m as i32 - 1)).sum::<f64>() / n as f64;
    (0..n)
        .map(|i| (u[i].powi(m as i32 - 1) - alpha * u[i] - beta).abs())
        .fold(0.0_f64, f64::max)
}

/// Canonical representative of {u, -u}.
///
/// For odd m the positive-objective side is kept (alpha >= 0); ties and
/// even m fall back to the lexicographically larger vector.
pub fn canonical_sign(u: &DVector<f64>, m: usize) -> DVector<f64> {
    if m % 2 == 1 {
        let f = objective(u, m);
        if f > 1e-12 {
            return u.clone();
        }
        if f < -1e-12 {
            return -u;
        }
    }
    let neg = -u;
    for i in 0..u.len() {
        if u[i] > neg[i] {
            return u.clone();
        }
        if u[i] < neg[i] {
            return neg;
        }
    }
    u.clone()
}

/// Minimum of ||a - b|| and ||a + b||: distance between sign classes.
pub fn sign_distance(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    ((a - b).norm()).min((a + b).norm())
}

fn certify(u: DVector<f64>, m: usize, structure: Structure) -> StationaryPoint {
    let n = u.len();
    let alpha = objective(&u, m);
    let beta = u.iter().map(|x| x.powi(m as i32 - 1)).sum::<f64>() / n as f64;
    StationaryPoint {
        kkt_residual: kkt_residual(&u, m),
        objective: alpha,
        u: u.as_slice().to_vec(),
        alpha,
        beta,
        structure,
    }
}

/// Two-value descriptor in the paper convention for a stored u: `k` is the
/// multiplicity of the positive value on whichever of {u, -u} has at most
/// n/2 positive coordinates.
fn two_value_structure(u: &DVector<f64>) -> Structure {
    let n = u.len();
    let pos: Vec<f64> = u.iter().copied().filter(|&x| x > 0.0).collect();
    let (k, a, b) = if 2 * pos.len() <= n {
        let a = pos[0];
        let b = u.iter().copied().find(|&x| x <= 0.0).unwrap();
        (pos.len(), a, b)
    } else {
        // describe -u instead
        let a = -u.iter().copied().find(|&x| x <= 0.0).unwrap();
        (n - pos.len(), a, -pos[0])
    };
    Structure::TwoValue { k, a, b }
}

fn sort_points(points: &mut [StationaryPoint]) {
    points.sort_by(|x, y| {
        y.objective
            .total_cmp(&x.objective)
            .then_with(|| {
                for (a, b) in x.u.iter().zip(y.u.iter()) {
                    let ord = a.total_cmp(b);
                    if ord != std::cmp::Ordering::Equal {
                        return ord;
                    }
                }
                std::cmp::Ordering::Equal
            })
    });
}

fn dedupe(points: &mut Vec<StationaryPoint>, radius: f64) {
    let mut kept: Vec<StationaryPoint> = Vec::new();
    for p in points.drain(..) {
        let pu = p.u_vector();
        if !kept
            .iter()
            .any(|q| sign_distance(&q.u_vector(), &pu) < radius)
        {
            kept.push(p);
        }
    }
    *points = kept;
}

/// All two-value stationary points: for each subset size k and each
/// k-subset, a = sqrt((n-k)/(kn)) on the subset and b = -sqrt(k/((n-k)n))
/// elsewhere, canonicalized under u ~ -u and deduplicated.
pub fn enumerate_two_value(n: usize, m: usize) -> Result<Vec<StationaryPoint>, StationaryError> {
    if n < 3 {
        return Err(StationaryError::BadVertexCount(n));
    }
    if m < 3 {
        return Err(StationaryError::BadOrder(m));
    }
    let mut points: Vec<StationaryPoint> = Vec::new();
    for k in 1..n {
        let a = ((n - k) as f64 / (k * n) as f64).sqrt();
        let b = -((k) as f64 / ((n - k) * n) as f64).sqrt();
        for subset in (0..n).combinations(k) {
            let mut u = DVector::from_element(n, b);
            for &i in &subset {
                u[i] = a;
            }
            let u = canonical_sign(&u, m);
            let structure = two_value_structure(&u);
            points.push(certify(u, m, structure));
        }
    }
    dedupe(&mut points, 1e-8);
    sort_points(&mut points);
    Ok(points)
}

/// Divided difference (x^{m-1} - y^{m-1}) / (x - y), the shared multiplier
/// alpha when x and y are both roots of t^{m-1} - alpha t - beta.
fn divided_difference(x: f64, y: f64, m: usize) -> f64 {
    // sum_{j=0}^{m-2} x^j y^{m-2-j}, stable when x ~ y
    (0..m - 1)
        .map(|j| x.powi(j as i32) * y.powi((m - 2 - j) as i32))
        .sum()
}

/// All three-value stationary points for even m: solves
/// {pc + qd + se = 0, pc^2 + qd^2 + se^2 = 1, DD(c,d) = DD(d,e)} with
/// c > d > e from a deterministic grid of Newton starts, assembles every
/// coordinate assignment, and keeps only KKT-certified points.
pub fn enumerate_three_value(n: usize, m: usize) -> Result<Vec<StationaryPoint>, StationaryError> {
    if n < 3 {
        return Err(StationaryError::BadVertexCount(n));
    }
    if m < 4 || m % 2 != 0 {
        return Err(StationaryError::OddOrder(m));
    }
    if n == 3 && m == 4 {
        return Err(StationaryError::DegenerateCombination);
    }

    let mut points: Vec<StationaryPoint> = Vec::new();
    for p in 1..=(n - 2) {
        for q in 1..=(n - 1 - p) {
            let s = n - p - q;
            let (pf, qf, sf) = (p as f64, q as f64, s as f64);
            let system = move |x: &DVector<f64>| {
                let (c, d, e) = (x[0], x[1], x[2]);
                DVector::from_vec(vec![
                    pf * c + qf * d + sf * e,
                    pf * c * c + qf * d * d + sf * e * e - 1.0,
                    divided_difference(c, d, m) - divided_difference(d, e, m),
                ])
            };

            // distinct (c, d, e) solutions for this partition
            let mut solutions: Vec<(f64, f64, f64)> = Vec::new();
            for &c0 in &[0.2, 0.5, 0.8, 1.1] {
                for &d0 in &[-0.75, -0.25, 0.25, 0.75] {
                    for &e0 in &[-1.1, -0.8, -0.5, -0.2] {
                        let x0 = DVector::from_vec(vec![c0, d0, e0]);
                        let sol = match newton_solve(&system, &x0, 1e-12) {
                            Ok(sol) => sol,
                            Err(NumericsError::MaxIterations)
                            | Err(NumericsError::SingularJacobian) => continue,
                            Err(_) => continue,
                        };
                        let (c, d, e) = (sol[0], sol[1], sol[2]);
                        if !(c > d + 1e-6 && d > e + 1e-6) {
                            continue;
                        }
                        if !solutions.iter().any(|&(c1, d1, e1)| {
                            (c - c1).abs() < 1e-8
                                && (d - d1).abs() < 1e-8
                                && (e - e1).abs() < 1e-8
                        }) {
                            solutions.push((c, d, e));
                        }
                    }
                }
            }

            for (c, d, e) in solutions {
                // all assignments of coordinate groups: choose p indices
                // for c, then q of the remaining for d
                for cset in (0..n).combinations(p) {
                    let rest: Vec<usize> =
                        (0..n).filter(|i| !cset.contains(i)).collect();
                    for dpick in rest.iter().copied().combinations(q) {
                        let mut u = DVector::from_element(n, e);
                        for &i in &cset {
                            u[i] = c;
                        }
                        for &i in &dpick {
                            u[i] = d;
                        }
                        let u = canonical_sign(&u, m);
                        let point = certify(
                            u,
                            m,
                            Structure::ThreeValue { p, q, s, c, d, e },
                        );
                        if point.kkt_residual < 1e-10 {
                            points.push(point);
                        }
                    }
                }
            }
        }
    }
    dedupe(&mut points, 1e-8);
    // re-derive descriptors from the canonical representative so that the
    // stored (p, q, s, c, d, e) always matches the stored u
    for point in points.iter_mut() {
        let mut vals: Vec<f64> = point.u.clone();
        vals.sort_by(|a, b| b.total_cmp(a));
        vals.dedup_by(|a, b| (*a - *b).abs() < 1e-8);
        debug_assert_eq!(vals.len(), 3);
        let count = |v: f64| point.u.iter().filter(|&&x| (x - v).abs() < 1e-8).count();
        point.structure = Structure::ThreeValue {
            p: count(vals[0]),
            q: count(vals[1]),
            s: count(vals[2]),
            c: vals[0],
            d: vals[1],
            e: vals[2],
        };
    }
    sort_points(&mut points);
    Ok(points)
}

/// Census of all stationary points for (n, m) with the closed-form count
/// and the tensor-eigenpair upper bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Census {
    pub n: usize,
    pub m: usize,
    pub points: Vec<StationaryPoint>,
    pub count: usize,
    /// Closed-form stationary count, when the theory states one.
    pub expected_count: Option<usize>,
    /// Upper bound M(m, n-1) = ((m-1)^{n-1} - 1)/(m - 2) on the number of
    /// eigenpairs of an order-m tensor of dimension n-1.
    pub upper_bound: usize,
    pub count_matches_expected: Option<bool>,
    pub count_within_bound: bool,
}

/// Closed-form stationary-point count: 2^{n-1} - 1 for odd m;
/// (3^{n-1} - 1)/2 for even m >= 4 with the n = 3, m >= 6 value 6.
pub fn expected_count(n: usize, m: usize) -> Option<usize> {
    if m % 2 == 1 {
        Some((1usize << (n - 1)) - 1)
    } else if n == 3 && m >= 6 {
        Some(6)
    } else if m >= 4 {
        Some((3usize.pow(n as u32 - 1) - 1) / 2)
    } else {
        None
    }
}

/// M(m, d) = ((m-1)^d - 1) / (m - 2).
pub fn eigenpair_upper_bound(m: usize, d: usize) -> usize {
    ((m - 1).pow(d as u32) - 1) / (m - 2)
}

pub fn census(n: usize, m: usize) -> Result<Census, StationaryError> {
    if n < 3 {
        return Err(StationaryError::BadVertexCount(n));
    }
    if m < 3 {
        return Err(StationaryError::BadOrder(m));
    }
    if n == 3 && m == 4 {
        return Err(StationaryError::DegenerateCombination);
    }
    let mut points = enumerate_two_value(n, m)?;
    if m % 2 == 0 {
        points.extend(enumerate_three_value(n, m)?);
    }
    dedupe(&mut points, 1e-8);
    sort_points(&mut points);

    let count = points.len();
    let expected = expected_count(n, m);
    let bound = eigenpair_upper_bound(m, n - 1);
    Ok(Census {
        n,
        m,
        count,
        expected_count: expected,
        upper_bound: bound,
        count_matches_expected: expected.map(|e| e == count),
        count_within_bound: count <= bound,
        points,
    })
}

/// v = sqrt((n-1)/n) W u, the inverse of the reformulation map.
pub fn u_to_v(frame: &Frame, u: &DVector<f64>) -> Result<DVector<f64>, StationaryError> {
    let n = frame.n();
    if u.len() != n
        || (u.norm() - 1.0).abs() > 1e-8
        || u.sum().abs() > 1e-8
    {
        return Err(StationaryError::InfeasibleInput);
    }
    let scale = ((n as f64 - 1.0) / n as f64).sqrt();
    Ok(frame.matrix() * u * scale)
}

/// u = sqrt((n-1)/n) W^T v; feasible by the tight-frame identities.
pub fn v_to_u(frame: &Frame, v: &DVector<f64>) -> DVector<f64> {
    let n = frame.n();
    let scale = ((n as f64 - 1.0) / n as f64).sqrt();
    frame.matrix().transpose() * v * scale
}

/// A v-space eigenpair recovered from a stationary point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenpairV {
    pub v: Vec<f64>,
    pub lambda: f64,
}

/// Maps a certified stationary point to the corresponding eigenpair of the
/// frame tensor, with a residual certificate.
pub fn to_eigenpair(
    frame: &Frame,
    tensor: &SymTensor,
    point: &StationaryPoint,
) -> Result<EigenpairV, StationaryError> {
    let v = u_to_v(frame, &point.u_vector())?;
    let lambda = v.dot(&tensor.contract_m1(&v)?);
    let residual = tensor.eigen_residual(lambda, &v)?;
    if residual >= 1e-9 {
        return Err(StationaryError::BrokenCorrespondence(residual));
    }
    Ok(EigenpairV {
        v: v.as_slice().to_vec(),
        lambda,
    })
}

/// Outcome of a multistart projected-gradient run.
#[derive(Debug, Clone)]
pub struct MultistartOutcome {
    pub points: Vec<StationaryPoint>,
    pub non_converged: usize,
}

/// Runs the projected-gradient flow from `u0` (ascent for `sign` = 1,
/// descent for -1) and returns the limit if the projected gradient drops
/// below 1e-10 within `max_iter` steps.
pub fn gradient_limit(
    u0: &DVector<f64>,
    m: usize,
    sign: f64,
    max_iter: usize,
) -> Option<DVector<f64>> {
    const STEP: f64 = 0.1;
    const TOL: f64 = 1e-10;
    let n = u0.len();
    let ones = DVector::from_element(n, 1.0);
    let mut u = u0.clone();
    // project the start onto the feasible set
    u -= &ones * (u.sum() / n as f64);
    let norm = u.norm();
    if norm < 1e-12 {
        return None;
    }
    u /= norm;
    for _ in 0..max_iter {
        let grad = DVector::from_fn(n, |i, _| u[i].powi(m as i32 - 1));
        let mut step = grad.clone();
        step -= &u * u.dot(&grad);
        step -= &ones * (grad.sum() / n as f64);
        if step.amax() < TOL {
            return Some(u);
        }
        u += step * (sign * STEP);
        u -= &ones * (u.sum() / n as f64);
        u /= u.norm();
    }
    None
}

/// Projected-gradient multistart on the manifold {u'u = 1, u'1 = 0}:
/// random starts run with both ascent and descent, converged limits
/// canonicalized and deduplicated at 1e-6.
pub fn oracle_multistart(
    n: usize,
    m: usize,
    starts: usize,
    seed: u64,
) -> MultistartOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<StationaryPoint> = Vec::new();
    let mut non_converged = 0usize;
    for _ in 0..starts {
        let u0 = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        for sign in [1.0, -1.0] {
            match gradient_limit(&u0, m, sign, 100_000) {
                Some(u) => {
                    let u = canonical_sign(&u, m);
                    if !points
                        .iter()
                        .any(|p| sign_distance(&p.u_vector(), &u) < 1e-6)
                    {
                        let structure = structure_of(&u);
                        let point = certify(u, m, structure);
                        if point.kkt_residual < 1e-8 {
                            points.push(point);
                        }
                    }
                }
                None => non_converged += 1,
            }
        }
    }
    sort_points(&mut points);
    MultistartOutcome {
        points,
        non_converged,
    }
}

/// Recovers the value pattern of an arbitrary feasible stationary u.
pub(crate) fn structure_of(u: &DVector<f64>) -> Structure {
    let mut vals: Vec<f64> = u.iter().copied().collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    vals.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
    if vals.len() == 2 {
        two_value_structure(u)
    } else {
        let count = |v: f64| u.iter().filter(|&&x| (x - v).abs() < 1e-6).count();
        Structure::ThreeValue {
            p: count(vals[0]),
            q: count(*vals.get(1).unwrap_or(&vals[0])),
            s: count(*vals.last().unwrap()),
            c: vals[0],
            d: *vals.get(1).unwrap_or(&vals[0]),
            e: *vals.last().unwrap(),
        }
    }
}
