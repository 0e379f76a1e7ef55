//! Joint eigenvalues of commuting matrix tuples via simultaneous unitary
//! triangularization, with the Koszul-complex nonsingularity test as an
//! independent oracle for the Taylor spectrum.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix_core::{
    schur, svd_rank, svd_rank_strict, unitary_from_first_column, CMatrix, C64,
};

/// Default cap on the Koszul operator dimension n * 2^d.
pub const KOSZUL_SIZE_CAP: usize = 4096;

pub fn tol_comm(scale: f64) -> f64 {
    1e-8 * (1.0 + scale)
}

/// A tuple of pairwise commuting square matrices with a verified
/// commutativity certificate.
#[derive(Debug, Clone)]
pub struct CommutingTuple {
    mats: Vec<CMatrix>,
    comm_residual: f64,
}

impl CommutingTuple {
    pub fn new(mats: Vec<CMatrix>) -> Result<Self> {
        let scale = mats.iter().map(|m| m.frobenius()).fold(0.0, f64::max);
        Self::with_tolerance(mats, tol_comm(scale))
    }

    pub fn with_tolerance(mats: Vec<CMatrix>, tol: f64) -> Result<Self> {
        if mats.is_empty() {
            return Err(Error::Invalid("empty tuple".into()));
        }
        let n = mats[0].dim();
        for m in &mats {
            if m.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: m.dim(),
                });
            }
        }
        let mut residual: f64 = 0.0;
        for i in 0..mats.len() {
            for j in i + 1..mats.len() {
                residual = residual.max(mats[i].commutator_norm(&mats[j]));
            }
        }
        if residual > tol {
            return Err(Error::NotCommuting { residual, tol });
        }
        Ok(CommutingTuple {
            mats,
            comm_residual: residual,
        })
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.mats[0].dim()
    }

    pub fn mats(&self) -> &[CMatrix] {
        &self.mats
    }

    pub fn comm_residual(&self) -> f64 {
        self.comm_residual
    }

    pub fn max_norm(&self) -> f64 {
        self.mats.iter().map(|m| m.frobenius()).fold(0.0, f64::max)
    }

    /// The adjoint tuple (T_1*, ..., T_d*).
    pub fn adjoint(&self) -> CommutingTuple {
        CommutingTuple {
            mats: self.mats.iter().map(|m| m.adjoint_mat()).collect(),
            comm_residual: self.comm_residual,
        }
    }

    /// Shifted tuple (T_j - lambda_j I).
    pub fn shifted(&self, lambda: &[C64]) -> Result<CommutingTuple> {
        if lambda.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: lambda.len(),
            });
        }
        Ok(CommutingTuple {
            mats: self
                .mats
                .iter()
                .zip(lambda)
                .map(|(m, &l)| m.shift(l))
                .collect(),
            comm_residual: self.comm_residual,
        })
    }
}

/// The joint eigenvalues together with the triangularizing unitary.
#[derive(Debug, Clone)]
pub struct JointSpectrum {
    pub points: Vec<Vec<C64>>,
    pub triangularizer: CMatrix,
    pub residual: f64,
}

fn random_unit_coeffs(d: usize, rng: &mut impl Rng) -> Vec<C64> {
    let mut c: Vec<C64> = (0..d)
        .map(|_| Complex64::from_polar(1.0, rng.gen::<f64>() * 2.0 * std::f64::consts::PI))
        .collect();
    let norm = (d as f64).sqrt();
    for x in &mut c {
        *x /= norm;
    }
    c
}

/// Orthonormal basis of the numerical kernel of `m` (singular vectors with
/// singular value at most `tol`). Falls back to the single smallest singular
/// vector when no singular value clears the threshold.
fn numerical_kernel(m: &DMatrix<C64>, tol: f64) -> DMatrix<C64> {
    let n = m.ncols();
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.as_ref().unwrap();
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].partial_cmp(&svd.singular_values[j]).unwrap());
    let mut cols: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| svd.singular_values[i] <= tol)
        .collect();
    if cols.is_empty() {
        cols.push(order[0]);
    }
    // v_t has ncols(m) columns only when rows >= cols; square here
    let mut k = DMatrix::<C64>::zeros(n, cols.len());
    for (j, &i) in cols.iter().enumerate() {
        k.set_column(j, &vt.row(i).adjoint());
    }
    k
}

/// A common eigenvector of a commuting family, by restricting to eigenspaces
/// of generic linear combinations until the subspace is one-dimensional or
/// the family acts as scalars on it.
fn common_eigenvector(mats: &[DMatrix<C64>], rng: &mut impl Rng) -> DVector<C64> {
    let n = mats[0].nrows();
    if n == 1 {
        return DVector::from_element(1, C64::new(1.0, 0.0));
    }
    let mut basis = DMatrix::<C64>::identity(n, n);
    let mut current: Vec<DMatrix<C64>> = mats.to_vec();
    loop {
        let dim = basis.ncols();
        if dim == 1 {
            return basis.column(0).into_owned();
        }
        // scalar check: if all matrices are near lambda*I on this subspace,
        // any basis vector is a common eigenvector
        let all_scalar = current.iter().all(|m| {
            let lambda = (0..dim).map(|i| m[(i, i)]).sum::<C64>() / dim as f64;
            let mut shifted = m.clone();
            for i in 0..dim {
                shifted[(i, i)] -= lambda;
            }
            shifted.norm() <= 1e-10 * (1.0 + m.norm())
        });
        if all_scalar {
            return basis.column(0).into_owned();
        }
        let coeffs = random_unit_coeffs(current.len(), rng);
        let mut s = DMatrix::<C64>::zeros(dim, dim);
        for (c, m) in coeffs.iter().zip(&current) {
            s += m.map(|x| x * c);
        }
        let eig = match schur(&CMatrix::new(s.clone()).expect("finite")) {
            Ok(f) => f.t[(0, 0)],
            Err(_) => continue, // retry with fresh coefficients
        };
        let mut shifted = s;
        for i in 0..dim {
            shifted[(i, i)] -= eig;
        }
        let ktol = 1e-9 * (1.0 + shifted.norm());
        let kernel = numerical_kernel(&shifted, ktol);
        if kernel.ncols() == dim {
            // combination acted as a scalar; retry with fresh coefficients
            continue;
        }
        // eigenspaces of S are invariant under the commuting family
        current = current
            .iter()
            .map(|m| kernel.adjoint() * m * &kernel)
            .collect();
        basis = &basis * &kernel;
        if kernel.ncols() == 1 {
            return basis.column(0).into_owned();
        }
    }
}

fn triangularize_once(
    t: &CommutingTuple,
    rng: &mut impl Rng,
) -> (CMatrix, Vec<DMatrix<C64>>, f64) {
    let n = t.dim();
    let d = t.len();
    let mut work: Vec<DMatrix<C64>> = t.mats().iter().map(|m| (**m).clone()).collect();
    let mut q_total = DMatrix::<C64>::identity(n, n);
    for k in 0..n.saturating_sub(1) {
        let sub: Vec<DMatrix<C64>> = work.iter().map(|m| m.view((k, k), (n - k, n - k)).into_owned()).collect();
        let mut v = common_eigenvector(&sub, rng);
        let norm = v.norm();
        if norm > 0.0 {
            v /= C64::new(norm, 0.0);
        }
        let h = unitary_from_first_column(&v);
        let mut emb = DMatrix::<C64>::identity(n, n);
        emb.view_mut((k, k), (n - k, n - k)).copy_from(&h);
        for m in &mut work {
            *m = emb.adjoint() * &*m * &emb;
        }
        q_total = &q_total * &emb;
    }
    let mut residual: f64 = 0.0;
    for (j, m) in work.iter().enumerate() {
        let mut mass = 0.0f64;
        for r in 0..n {
            for c in 0..r {
                mass += m[(r, c)].norm_sqr();
            }
        }
        residual = residual.max(mass.sqrt() / (1.0 + t.mats()[j].frobenius()));
    }
    let _ = d;
    (CMatrix::new(q_total).expect("unitary accumulates finite"), work, residual)
}

/// Simultaneous unitary triangularization: one Q upper-triangularizes every
/// member of the tuple. Deterministic for a fixed seed.
pub fn simultaneous_triangularize_seeded(
    t: &CommutingTuple,
    seed: u64,
) -> Result<(CMatrix, Vec<CMatrix>)> {
    let tol = 1e-7;
    let mut best: Option<(CMatrix, Vec<DMatrix<C64>>, f64)> = None;
    for attempt in 0..4u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (attempt.wrapping_mul(0x9e3779b97f4a7c15)));
        let (q, tris, residual) = triangularize_once(t, &mut rng);
        if residual <= tol {
            return Ok((q, tris.into_iter().map(|m| CMatrix::new(m).unwrap()).collect()));
        }
        if best.as_ref().map_or(true, |(_, _, r)| residual < *r) {
            best = Some((q, tris, residual));
        }
    }
    // clustered joint eigenspaces can leave residual above the strict
    // tolerance; accept a loose pass, otherwise signal non-convergence
    let (q, tris, residual) = best.unwrap();
    if residual <= 1e-5 {
        Ok((q, tris.into_iter().map(|m| CMatrix::new(m).unwrap()).collect()))
    } else {
        let _ = residual;
        Err(Error::NonConvergence)
    }
}

pub fn simultaneous_triangularize(t: &CommutingTuple) -> Result<(CMatrix, Vec<CMatrix>)> {
    simultaneous_triangularize_seeded(t, 0)
}

/// Joint eigenvalues: the aligned diagonal d-vectors of the simultaneous
/// triangularization.
pub fn joint_eigenvalues_seeded(t: &CommutingTuple, seed: u64) -> Result<JointSpectrum> {
    let (q, tris) = simultaneous_triangularize_seeded(t, seed)?;
    let n = t.dim();
    let points: Vec<Vec<C64>> = (0..n)
        .map(|i| tris.iter().map(|m| m[(i, i)]).collect())
        .collect();
    let mut residual: f64 = 0.0;
    for (j, m) in tris.iter().enumerate() {
        let mut mass = 0.0f64;
        for r in 0..n {
            for c in 0..r {
                mass += m[(r, c)].norm_sqr();
            }
        }
        residual = residual.max(mass.sqrt() / (1.0 + t.mats()[j].frobenius()));
    }
    Ok(JointSpectrum {
        points,
        triangularizer: q,
        residual,
    })
}

pub fn joint_eigenvalues(t: &CommutingTuple) -> Result<JointSpectrum> {
    joint_eigenvalues_seeded(t, 0)
}

/// The Koszul boundary operator E_T = sum_i T_i (x) C_i on the exterior
/// algebra, with wedge basis ordered by subset bitmask.
#[derive(Debug, Clone)]
pub struct KoszulOperator {
    pub d: usize,
    pub n: usize,
    pub e: CMatrix,
}

pub fn koszul_build(t: &CommutingTuple) -> Result<KoszulOperator> {
    koszul_build_capped(t, KOSZUL_SIZE_CAP)
}

pub fn koszul_build_capped(t: &CommutingTuple, cap: usize) -> Result<KoszulOperator> {
    let d = t.len();
    let n = t.dim();
    let size = n
        .checked_mul(1usize << d)
        .filter(|&s| s <= cap)
        .ok_or(Error::KoszulSizeCap {
            size: n.saturating_mul(1usize << d.min(40)),
            cap,
        })?;
    let masks = 1usize << d;
    let mut e = DMatrix::<C64>::zeros(size, size);
    for i in 0..d {
        let ti = &t.mats()[i];
        for mask in 0..masks {
            if mask & (1 << i) != 0 {
                continue;
            }
            let out = mask | (1 << i);
            // sign: (-1)^{#{k in mask : k < i}}
            let below = (mask & ((1 << i) - 1)).count_ones();
            let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
            for r in 0..n {
                for c in 0..n {
                    e[(out * n + r, mask * n + c)] += ti[(r, c)] * sign;
                }
            }
        }
    }
    Ok(KoszulOperator {
        d,
        n,
        e: CMatrix::new(e)?,
    })
}

impl KoszulOperator {
    pub fn square_residual(&self) -> f64 {
        self.e.mul(&self.e).frobenius()
    }
}

/// Taylor-spectrum membership by the Koszul exactness test: the shifted
/// tuple is singular iff rank E != dim/2 (range is always inside the
/// kernel, so exactness is exactly rank = dim - rank).
pub fn taylor_singular_at(t: &CommutingTuple, lambda: &[C64], tol: f64) -> Result<bool> {
    taylor_singular_at_capped(t, lambda, tol, KOSZUL_SIZE_CAP)
}

pub fn taylor_singular_at_capped(
    t: &CommutingTuple,
    lambda: &[C64],
    tol: f64,
    cap: usize,
) -> Result<bool> {
    let shifted = t.shifted(lambda)?;
    let k = koszul_build_capped(&shifted, cap)?;
    let size = k.n * (1usize << k.d);
    let rank = svd_rank_strict(&k.e, tol)?;
    Ok(2 * rank != size)
}

/// Loose variant without the ambiguity-band error.
pub fn taylor_singular_at_loose(t: &CommutingTuple, lambda: &[C64], tol: f64) -> Result<bool> {
    let shifted = t.shifted(lambda)?;
    let k = koszul_build(&shifted)?;
    let size = k.n * (1usize << k.d);
    let rank = svd_rank(&k.e, tol);
    Ok(2 * rank != size)
}
