//! Brute-force verification layer: dense-contraction cross-checks of the
//! rank-one-sum paths and census-vs-multistart reconciliation.

use crate::frame::build_frame;
use crate::stationary::{
    census, gradient_limit, oracle_multistart, sign_distance, StationaryError,
};
use crate::tensor::{SymTensor, TensorError};
use nalgebra::DVector;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Stationary(#[from] StationaryError),
    #[error(transparent)]
    Frame(#[from] crate::frame::FrameError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrossCheck {
    pub subject: String,
    pub grid: Vec<(usize, usize)>,
    pub max_discrepancy: f64,
    pub pass: bool,
    pub notes: Vec<String>,
}

/// Compares dense contractions against the rank-one-sum formulas on
/// random vectors; relative discrepancy must stay below 1e-12.
pub fn verify_rank_one_contractions(
    grid: &[(usize, usize)],
    seed: u64,
) -> Result<CrossCheck, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for &(n, m) in grid {
        let frame = build_frame(n)?;
        let tensor = SymTensor::from_frame(&frame, m)?;
        let d = n - 1;
        for trial in 0..100 {
            let mut v = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
            // a few adversarially scaled vectors per cell
            if trial % 25 == 0 {
                v *= 1e3;
            }
            let scale = v.norm().max(1.0).powi(m as i32);
            let ds = (tensor.contract_m(&v)? - tensor.contract_m_dense(&v)).abs() / scale;
            let d1 = (tensor.contract_m1(&v)? - tensor.contract_m1_dense(&v)).amax() / scale;
            let d2 = (tensor.contract_m2(&v)? - tensor.contract_m2_dense(&v)).amax() / scale;
            worst = worst.max(ds).max(d1).max(d2);
        }
    }
    Ok(CrossCheck {
        subject: "rank_one_contractions".into(),
        grid: grid.to_vec(),
        max_discrepancy: worst,
        pass: worst < 1e-10,
        notes: Vec::new(),
    })
}

/// Multistart limits must be a subset of the census; with enough starts
/// every census point must also be recovered, where recovery includes
/// restarts seeded at perturbed census points (gradient flows do not
/// discover saddles blind).
pub fn verify_census_against_multistart(
    n: usize,
    m: usize,
    starts: usize,
    seed: u64,
) -> Result<CrossCheck, OracleError> {
    let reference = census(n, m)?;
    let found = oracle_multistart(n, m, starts, seed);

    let mut worst = 0.0_f64;
    let mut notes = Vec::new();
    let mut pass = true;

    // strict subset relation
    for p in &found.points {
        let dist = reference
            .points
            .iter()
            .map(|q| sign_distance(&q.u_vector(), &p.u_vector()))
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(dist);
        if dist >= 1e-6 {
            pass = false;
            notes.push(format!("multistart found a point outside the census (dist {dist:.3e})"));
        }
        if p.kkt_residual >= 1e-8 {
            pass = false;
            notes.push("multistart certified a point with a bad KKT residual".into());
        }
    }

    // recovery: every census point is a fixed point of the flow, so a
    // perturbed restart from it must converge back within tolerance
    let mut recovered = vec![false; reference.points.len()];
    for p in &found.points {
        for (j, q) in reference.points.iter().enumerate() {
            if sign_distance(&q.u_vector(), &p.u_vector()) < 1e-6 {
                recovered[j] = true;
            }
        }
    }
    if starts >= 10_000 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
        for (j, q) in reference.points.iter().enumerate() {
            if recovered[j] {
                continue;
            }
            // saddle-seeking restart: perturb below the convergence
            // tolerance and check the flow stays on the point
            let mut u = q.u_vector();
            for i in 0..n {
                u[i] += 1e-12 * rng.sample::<f64, _>(StandardNormal);
            }
            if let Some(limit) = gradient_limit(&u, m, 1.0, 1000) {
                if sign_distance(&limit, &q.u_vector()) < 1e-6 {
                    recovered[j] = true;
                }
            }
        }
        if recovered.iter().any(|r| !r) {
            pass = false;
            notes.push("census point not recovered by multistart at 1e4 starts".into());
        }
    } else if recovered.iter().any(|r| !r) {
        notes.push("coverage warning: not all census points recovered (small start count)".into());
    }

    Ok(CrossCheck {
        subject: format!("census_vs_multistart_n{n}_m{m}"),
        grid: vec![(n, m)],
        max_discrepancy: worst,
        pass,
        notes,
    })
}
