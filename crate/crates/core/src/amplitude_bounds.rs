//! Explicit amplitude bounds for waves with positive constant vorticity.
//!
//! Every unidirectional wave satisfies `sup eta - inf eta < 2 g / omega^2`.
//! A sharper value comes from the nondimensional lower conjugate depth
//! `d1 = d_-(Q0)`: the amplitude never exceeds `(sqrt 2 - d1) / lambda`.
//! For `epsilon < sqrt(2)/2` the gap `sqrt 2 - d1` is the nonzero root of
//! `Q(sqrt 2 - delta) = epsilon sqrt 2`; otherwise `d1` is found directly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::safeguarded_newton;
use crate::scalar::Scalar;
use crate::scaling::{nondimensionalize, q_tilde_raw, q_tilde_slope};
use crate::stream_flows::FluidParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundBranch {
    /// `epsilon >= sqrt(2)/2`
    LargeEpsilon,
    /// `epsilon < sqrt(2)/2`, `d1` from [`delta_root`]
    SmallEpsilon,
}

impl BoundBranch {
    pub fn for_epsilon<T: Scalar>(epsilon: T) -> Self {
        if epsilon >= T::FRAC_1_SQRT_2() {
            Self::LargeEpsilon
        } else {
            Self::SmallEpsilon
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeBound<T> {
    /// `2 g / omega^2`
    pub theorem_bound: T,
    /// `(sqrt 2 - d1) / lambda`
    pub refined_bound: T,
    pub epsilon: T,
    pub d_tilde_1: T,
    pub branch: BoundBranch,
}

/// `2 g / omega^2`.
pub fn theorem_bound<T: Scalar>(params: &FluidParams<T>) -> T {
    T::lit(2.0) * params.g / (params.omega * params.omega)
}

fn gap<T: Scalar>(delta: T, epsilon: T) -> (T, T) {
    let d = T::SQRT_2() - delta;
    (
        q_tilde_raw(d, epsilon) - epsilon * T::SQRT_2(),
        -q_tilde_slope(d, epsilon),
    )
}

/// Nonzero root `delta*` of `Q(sqrt 2 - delta) = epsilon sqrt 2`, for `0 < epsilon < sqrt(2)/2`.
///
/// The function vanishes at `delta = 0`, dips below zero and is positive at
/// `2 epsilon`; the bracket is found by halving down from `2 epsilon`.
pub fn delta_root<T: Scalar>(epsilon: T) -> Result<T> {
    if !(epsilon > T::zero()) {
        return Err(Error::Domain {
            what: "epsilon",
            value: epsilon.as_f64(),
            domain: "(0, sqrt(2)/2)",
        });
    }
    if epsilon >= T::FRAC_1_SQRT_2() {
        return Err(Error::LargeEpsilon {
            epsilon: epsilon.as_f64(),
        });
    }
    let hi = T::lit(2.0) * epsilon;
    if gap(hi, epsilon).0 <= T::zero() {
        return Err(Error::RootFinding(format!(
            "gap function not positive at 2 epsilon = {hi}"
        )));
    }
    let mut lo = hi;
    for _ in 0..200 {
        lo = lo * T::lit(0.5);
        if gap(lo, epsilon).0 < T::zero() {
            return safeguarded_newton(|d| gap(d, epsilon), lo, hi, T::tol(1e-15));
        }
    }
    Err(Error::RootFinding(format!(
        "no sign change below 2 epsilon for epsilon = {epsilon}"
    )))
}

/// Nondimensional critical depth: the minimiser of `Q(d)` on `(0, sqrt 2)`.
pub fn critical_depth_nondim<T: Scalar>(epsilon: T) -> Result<T> {
    let mut lo = T::FRAC_1_SQRT_2();
    while q_tilde_slope(lo, epsilon) >= T::zero() {
        lo = lo * T::lit(0.5);
        if lo < T::min_positive_value().sqrt() {
            return Err(Error::RootFinding("critical depth bracket".into()));
        }
    }
    let curvature = |d: T| T::lit(0.25) + T::lit(3.0) / (d * d * d * d);
    safeguarded_newton(
        |d| (q_tilde_slope(d, epsilon), curvature(d)),
        lo,
        T::SQRT_2(),
        T::tol(1e-15),
    )
}

/// `d1 = d_-(epsilon sqrt 2)` found on the decreasing side of `Q(d)`.
pub fn lower_conjugate_depth_nondim<T: Scalar>(epsilon: T) -> Result<T> {
    let dc = critical_depth_nondim(epsilon)?;
    let target = epsilon * T::SQRT_2();
    let f = |d: T| (q_tilde_raw(d, epsilon) - target, q_tilde_slope(d, epsilon));
    let mut lo = dc * T::lit(0.5);
    while f(lo).0 <= T::zero() {
        lo = lo * T::lit(0.5);
        if lo < T::min_positive_value().sqrt() {
            return Err(Error::RootFinding("lower conjugate depth bracket".into()));
        }
    }
    safeguarded_newton(f, lo, dc, T::tol(1e-15))
}

pub fn refined_bound<T: Scalar>(params: &FluidParams<T>) -> Result<AmplitudeBound<T>> {
    params.validate()?;
    let nd = nondimensionalize(params, None);
    let branch = BoundBranch::for_epsilon(nd.epsilon);
    let d1 = match branch {
        BoundBranch::SmallEpsilon => T::SQRT_2() - delta_root(nd.epsilon)?,
        BoundBranch::LargeEpsilon => lower_conjugate_depth_nondim(nd.epsilon)?,
    };
    Ok(AmplitudeBound {
        theorem_bound: theorem_bound(params),
        refined_bound: (T::SQRT_2() - d1) / nd.lambda,
        epsilon: nd.epsilon,
        d_tilde_1: d1,
        branch,
    })
}

/// Sampled check of
/// `Q(sqrt 2 - delta) - epsilon sqrt 2 = -epsilon delta + delta^2/2 + R(delta)`
/// with `R(delta) = delta^3 (4 sqrt 2 - 3 delta) / (8 (sqrt 2 - delta)^2) > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProofCheckReport<T> {
    pub samples: usize,
    /// Largest `|lhs - expansion|`, relative to the magnitude of the terms
    /// being subtracted on the left (`|Q(sqrt 2 - delta)| + epsilon sqrt 2`).
    pub max_identity_residual: T,
    /// Smallest remainder `R(delta)` seen.
    pub min_remainder: T,
    /// Largest `(-epsilon delta + delta^2/2) - lhs`; negative when the strict inequality holds.
    pub max_violation: T,
}

/// Samples `delta` at the midpoints of `n_samples` equal cells of `(0, sqrt 2)`.
pub fn proof_inequality_check<T: Scalar>(
    epsilon: T,
    n_samples: usize,
) -> Result<ProofCheckReport<T>> {
    if !(epsilon > T::zero()) || n_samples == 0 {
        return Err(Error::InvalidParams(
            "proof check needs epsilon > 0 and at least one sample".into(),
        ));
    }
    let sqrt2 = T::SQRT_2();
    let n = T::from_usize(n_samples).expect("sample count");
    let mut report = ProofCheckReport {
        samples: n_samples,
        max_identity_residual: T::zero(),
        min_remainder: T::infinity(),
        max_violation: T::neg_infinity(),
    };
    for i in 0..n_samples {
        let delta = (T::from_usize(i).expect("index") + T::lit(0.5)) / n * sqrt2;
        let d = sqrt2 - delta;
        let q = q_tilde_raw(d, epsilon);
        let lhs = q - epsilon * sqrt2;
        let quadratic = -epsilon * delta + T::lit(0.5) * delta * delta;
        let remainder = delta * delta * delta * (T::lit(4.0) * sqrt2 - T::lit(3.0) * delta)
            / (T::lit(8.0) * d * d);
        let scale = q.abs() + epsilon * sqrt2;
        report.max_identity_residual = report
            .max_identity_residual
            .max((lhs - (quadratic + remainder)).abs() / scale);
        report.min_remainder = report.min_remainder.min(remainder);
        report.max_violation = report.max_violation.max(quadratic - lhs);
    }
    Ok(report)
}
