//! Annihilating polynomial families for commuting matrix tuples.
//!
//! For a commuting d-tuple of N x N matrices, the determinant pencil
//! `p_alpha(z) = det(alpha_1 (A_1 - z_1 I) + ... + alpha_d (A_d - z_d I))`
//! annihilates the tuple for every direction alpha, and a moment-curve set of
//! N(d-1)+1 directions already pins the joint spectrum down as the common
//! zero set.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix_core::C64;
use crate::mpoly::{det_poly_matrix, MPoly, PolyMatrix};
use crate::tuple_spectrum::CommutingTuple;

/// Directions along the moment curve; any d of them are linearly
/// independent (Vandermonde).
#[derive(Debug, Clone)]
pub struct AlphaSet {
    pub d: usize,
    pub vectors: Vec<Vec<C64>>,
}

impl AlphaSet {
    pub fn count(&self) -> usize {
        self.vectors.len()
    }
}

/// The moment-curve set alpha(t_k) = (1, t_k, ..., t_k^{d-1}) at t_k = k+1,
/// k = 0..N(d-1), normalized to unit Euclidean norm. Normalization rescales
/// each direction only, so d-subset independence is preserved.
pub fn moment_curve_alphas(d: usize, n: usize) -> AlphaSet {
    assert!(d >= 1 && n >= 1);
    let count = n * (d - 1) + 1;
    let vectors = (0..count)
        .map(|k| {
            let t = (k + 1) as f64;
            let mut v: Vec<C64> = (0..d).map(|j| Complex64::new(t.powi(j as i32), 0.0)).collect();
            let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            for x in &mut v {
                *x /= norm;
            }
            v
        })
        .collect();
    AlphaSet { d, vectors }
}

/// The annihilating family {p_alpha} with recorded annihilation residuals.
#[derive(Debug, Clone)]
pub struct AnnihilatorFamily {
    pub polys: Vec<MPoly>,
    pub alphas: AlphaSet,
    pub max_residual: f64,
}

/// The determinant pencil polynomial for one direction alpha.
pub fn annihilator_poly(t: &CommutingTuple, alpha: &[C64]) -> Result<MPoly> {
    let d = t.len();
    let n = t.dim();
    if alpha.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: alpha.len(),
        });
    }
    let pencil = PolyMatrix::from_fn(n, d, |r, c| {
        let mut entry = MPoly::constant(
            d,
            (0..d).map(|j| alpha[j] * t.mats()[j][(r, c)]).sum::<C64>(),
        );
        if r == c {
            for j in 0..d {
                entry = entry.sub(&MPoly::var(d, j).scale(alpha[j]));
            }
        }
        entry
    });
    det_poly_matrix(&pencil)
}

/// Build p_alpha for every alpha in the set and record the worst
/// annihilation residual ||p_alpha(T)||_F.
pub fn build_annihilators(t: &CommutingTuple, alphas: &AlphaSet) -> Result<AnnihilatorFamily> {
    if alphas.d != t.len() {
        return Err(Error::DimensionMismatch {
            expected: t.len(),
            got: alphas.d,
        });
    }
    let mut polys = Vec::with_capacity(alphas.count());
    let mut max_residual: f64 = 0.0;
    for alpha in &alphas.vectors {
        let p = annihilator_poly(t, alpha)?;
        max_residual = max_residual.max(p.eval_matrix_tuple(t)?.frobenius());
        polys.push(p);
    }
    Ok(AnnihilatorFamily {
        polys,
        alphas: alphas.clone(),
        max_residual,
    })
}

/// Scale factor (1 + |lambda| + max_j |A_j|)^N used to normalize determinant
/// residuals across input magnitudes.
pub fn residual_scale(t: &CommutingTuple, lambda: &[C64]) -> f64 {
    let lam_norm = lambda.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let mat_norm = t.mats().iter().map(|m| m.op_norm()).fold(0.0, f64::max);
    (1.0 + lam_norm + mat_norm).powi(t.dim() as i32)
}

#[derive(Debug, Clone)]
pub struct ZeroSetReport {
    /// worst relative residual over the joint eigenvalues
    pub max_spectrum_residual: f64,
    /// smallest relative residual over the accepted probes
    pub min_probe_residual: f64,
    pub zero_set_pass: bool,
    pub violations: Vec<ZeroSetViolation>,
    /// probes skipped because they were too close to the spectrum
    pub filtered_probes: usize,
}

#[derive(Debug, Clone)]
pub struct ZeroSetViolation {
    pub point: Vec<C64>,
    pub residual: f64,
    pub expected_zero: bool,
}

/// Check that the joint eigenvalues are exactly the common zeros of the
/// family among {joint eigenvalues} + {probes}: eigenvalues must satisfy
/// max_alpha |p_alpha| <= tol * scale and probes at distance >= delta must
/// exceed 10x that threshold.
pub fn spectrum_as_variety_check(
    t: &CommutingTuple,
    fam: &AnnihilatorFamily,
    probes: &[Vec<C64>],
    tol: f64,
) -> Result<ZeroSetReport> {
    let spectrum = crate::tuple_spectrum::joint_eigenvalues(t)?;
    let delta = 0.05;
    let eval_max = |lambda: &[C64]| -> Result<f64> {
        let mut worst: f64 = 0.0;
        for p in &fam.polys {
            worst = worst.max(p.eval(lambda)?.norm());
        }
        Ok(worst)
    };
    let mut violations = Vec::new();
    let mut max_spectrum_residual: f64 = 0.0;
    for point in &spectrum.points {
        let scale = residual_scale(t, point);
        let rel = eval_max(point)? / scale;
        max_spectrum_residual = max_spectrum_residual.max(rel);
        if rel > tol {
            violations.push(ZeroSetViolation {
                point: point.clone(),
                residual: rel,
                expected_zero: true,
            });
        }
    }
    let mut min_probe_residual = f64::INFINITY;
    let mut filtered_probes = 0usize;
    for probe in probes {
        let dmin = spectrum
            .points
            .iter()
            .map(|p| {
                p.iter()
                    .zip(probe)
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(f64::INFINITY, f64::min);
        if dmin < delta {
            filtered_probes += 1;
            continue;
        }
        let scale = residual_scale(t, probe);
        let rel = eval_max(probe)? / scale;
        min_probe_residual = min_probe_residual.min(rel);
        if rel <= 10.0 * tol {
            violations.push(ZeroSetViolation {
                point: probe.clone(),
                residual: rel,
                expected_zero: false,
            });
        }
    }
    Ok(ZeroSetReport {
        max_spectrum_residual,
        min_probe_residual,
        zero_set_pass: violations.is_empty(),
        violations,
        filtered_probes,
    })
}
