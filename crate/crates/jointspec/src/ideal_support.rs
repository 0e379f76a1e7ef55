//! Support of a polynomial ideal: the common zero set of its generators,
//! tested at tolerance, and its agreement with the joint spectrum for
//! annihilating families.

use crate::cayley_hamilton::AnnihilatorFamily;
use crate::error::{Error, Result};
use crate::matrix_core::C64;
use crate::mpoly::MPoly;
use crate::tuple_spectrum::CommutingTuple;

/// A finitely generated ideal in C[z_1, ..., z_nvars], given by generators.
#[derive(Debug, Clone)]
pub struct PolyIdeal {
    nvars: usize,
    generators: Vec<MPoly>,
}

impl PolyIdeal {
    pub fn new(generators: Vec<MPoly>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Invalid("ideal needs at least one generator".into()));
        }
        let nvars = generators[0].nvars();
        if generators.iter().any(|g| g.nvars() != nvars) {
            return Err(Error::Invalid("generators do not share nvars".into()));
        }
        Ok(PolyIdeal { nvars, generators })
    }

    pub fn from_annihilators(fam: &AnnihilatorFamily) -> Result<Self> {
        PolyIdeal::new(fam.polys.clone())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[MPoly] {
        &self.generators
    }
}

/// Normalized residual of one generator at lambda:
/// |g(lambda)| / (1 + ||g|| (1 + |lambda|)^{deg g}).
pub fn generator_residual(g: &MPoly, lambda: &[C64]) -> Result<f64> {
    let lam_norm = lambda.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let scale = 1.0 + g.coeff_norm() * (1.0 + lam_norm).powi(g.total_degree() as i32);
    Ok(g.eval(lambda)?.norm() / scale)
}

/// lambda belongs to the support iff every generator vanishes there (at the
/// normalized tolerance). For polynomial ideals the support equals the common
/// zero set, which is what this tests.
pub fn support_membership(j: &PolyIdeal, lambda: &[C64], tol: f64) -> Result<bool> {
    if lambda.len() != j.nvars {
        return Err(Error::DimensionMismatch {
            expected: j.nvars,
            got: lambda.len(),
        });
    }
    for g in &j.generators {
        if generator_residual(g, lambda)? > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone)]
pub struct SupportIdentityReport {
    /// candidate points where the three memberships disagreed
    pub disagreements: Vec<SupportWitness>,
    /// probes skipped because the Koszul rank test was inconclusive
    pub inconclusive: usize,
    /// candidates examined (inside the closed polydisk)
    pub checked: usize,
    pub passes: bool,
}

#[derive(Debug, Clone)]
pub struct SupportWitness {
    pub point: Vec<C64>,
    pub in_spectrum: bool,
    pub in_support: bool,
    pub koszul_singular: bool,
}

/// Three-way agreement on {joint eigenvalues} + {probes}, restricted to the
/// closed polydisk: membership in the joint-eigenvalue set, support
/// membership for the annihilating family, and the Koszul singularity test.
/// Probes within `delta` of the spectrum are treated as spectrum members for
/// the set-membership side.
pub fn support_spectrum_identity_check(
    t: &CommutingTuple,
    fam: &AnnihilatorFamily,
    probes: &[Vec<C64>],
    tol: f64,
) -> Result<SupportIdentityReport> {
    let ideal = PolyIdeal::from_annihilators(fam)?;
    let spectrum = crate::tuple_spectrum::joint_eigenvalues(t)?;
    let delta = 0.05;
    let in_polydisk =
        |p: &[C64]| p.iter().all(|c| c.norm() <= 1.0 + 1e-9);
    let mut candidates: Vec<(Vec<C64>, bool)> = Vec::new();
    for p in &spectrum.points {
        if in_polydisk(p) {
            candidates.push((p.clone(), true));
        }
    }
    for p in probes {
        if !in_polydisk(p) {
            continue;
        }
        let dmin = spectrum
            .points
            .iter()
            .map(|s| {
                s.iter()
                    .zip(p)
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(f64::INFINITY, f64::min);
        // skip the ambiguous shell around the spectrum
        if dmin < delta {
            continue;
        }
        candidates.push((p.clone(), false));
    }
    let mut disagreements = Vec::new();
    let mut inconclusive = 0usize;
    let checked = candidates.len();
    for (point, in_spectrum) in candidates {
        let in_support = support_membership(&ideal, &point, tol)?;
        let koszul = match crate::tuple_spectrum::taylor_singular_at(t, &point, tol) {
            Ok(b) => b,
            Err(Error::RankIndeterminate) => {
                inconclusive += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        if in_support != in_spectrum || koszul != in_spectrum {
            disagreements.push(SupportWitness {
                point,
                in_spectrum,
                in_support,
                koszul_singular: koszul,
            });
        }
    }
    Ok(SupportIdentityReport {
        passes: disagreements.is_empty(),
        disagreements,
        inconclusive,
        checked,
    })
}
