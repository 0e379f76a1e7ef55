//! Dense complex matrix kernel: arithmetic, factorizations, eigenvalues,
//! rank and numerical radius. Everything is double precision and square.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default relative tolerance for eigenvalue multiset comparisons.
pub fn tol_eig(scale: f64) -> f64 {
    1e-8 * (1.0 + scale)
}

/// Default relative rank tolerance.
pub const RANK_TOL: f64 = 1e-10;

/// Default absolute accuracy for the numerical radius.
pub const NRADIUS_TOL: f64 = 1e-8;

/// Dense complex square matrix. Entries are validated finite on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    m: DMatrix<C64>,
}

impl std::ops::Deref for CMatrix {
    type Target = DMatrix<C64>;
    fn deref(&self) -> &DMatrix<C64> {
        &self.m
    }
}

impl CMatrix {
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NonSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(CMatrix { m })
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        CMatrix {
            m: DMatrix::from_fn(n, n, f),
        }
    }

    pub fn identity(n: usize) -> Self {
        CMatrix {
            m: DMatrix::identity(n, n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        CMatrix {
            m: DMatrix::zeros(n, n),
        }
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let n = entries.len();
        CMatrix::from_fn(n, |i, j| if i == j { entries[i] } else { C64::new(0.0, 0.0) })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.m
    }

    pub fn frobenius(&self) -> f64 {
        self.m.norm()
    }

    /// Operator 2-norm via the largest singular value.
    pub fn op_norm(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        self.m.clone().singular_values().max()
    }

    pub fn adjoint_mat(&self) -> CMatrix {
        CMatrix { m: self.m.adjoint() }
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        CMatrix {
            m: &self.m * &other.m,
        }
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        CMatrix {
            m: &self.m + &other.m,
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        CMatrix {
            m: &self.m - &other.m,
        }
    }

    pub fn scale_c(&self, c: C64) -> CMatrix {
        CMatrix {
            m: self.m.map(|x| x * c),
        }
    }

    /// A - lambda I.
    pub fn shift(&self, lambda: C64) -> CMatrix {
        let mut m = self.m.clone();
        for i in 0..m.nrows() {
            m[(i, i)] -= lambda;
        }
        CMatrix { m }
    }

    pub fn commutator_norm(&self, other: &CMatrix) -> f64 {
        (&self.m * &other.m - &other.m * &self.m).norm()
    }

    pub fn pow(&self, k: usize) -> CMatrix {
        let n = self.dim();
        let mut acc = CMatrix::identity(n);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }
}

/// Unitary/triangular factorization A = Q T Q* with recorded residuals.
#[derive(Debug, Clone)]
pub struct SchurForm {
    pub q: CMatrix,
    pub t: CMatrix,
    pub unitarity_residual: f64,
}

/// Complex Schur decomposition. Fails when the QR iteration does not converge.
pub fn schur(a: &CMatrix) -> Result<SchurForm> {
    let n = a.dim();
    if n == 0 {
        return Ok(SchurForm {
            q: CMatrix::identity(0),
            t: CMatrix::identity(0),
            unitarity_residual: 0.0,
        });
    }
    let sc = nalgebra::linalg::Schur::try_new(a.m.clone(), f64::EPSILON, 0)
        .ok_or(Error::NonConvergence)?;
    let (q, t) = sc.unpack();
    let unitarity_residual = (q.adjoint() * &q - DMatrix::<C64>::identity(n, n)).norm();
    Ok(SchurForm {
        q: CMatrix { m: q },
        t: CMatrix { m: t },
        unitarity_residual,
    })
}

/// Eigenvalues with algebraic multiplicity, via the complex Schur form.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<C64>> {
    let f = schur(a)?;
    Ok((0..a.dim()).map(|i| f.t[(i, i)]).collect())
}

/// Determinant via pivoted LU.
pub fn det(a: &CMatrix) -> C64 {
    if a.dim() == 0 {
        return C64::new(1.0, 0.0);
    }
    a.m.clone().lu().determinant()
}

pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    if a.dim() == 0 {
        return vec![];
    }
    let sv = a.m.clone().singular_values();
    let mut v: Vec<f64> = sv.iter().copied().collect();
    v.sort_by(|x, y| y.partial_cmp(x).unwrap());
    v
}

/// Count of singular values above `tol * max(1, sigma_max)`.
pub fn svd_rank(a: &CMatrix, tol: f64) -> usize {
    let sv = singular_values(a);
    let smax = sv.first().copied().unwrap_or(0.0);
    let thr = tol * smax.max(1.0);
    sv.iter().filter(|&&s| s > thr).count()
}

/// Like [`svd_rank`] but errors when a singular value sits inside the
/// ambiguity band around the threshold.
pub fn svd_rank_strict(a: &CMatrix, tol: f64) -> Result<usize> {
    let sv = singular_values(a);
    let smax = sv.first().copied().unwrap_or(0.0);
    let thr = tol * smax.max(1.0);
    if sv.iter().any(|&s| s > thr / 3.0 && s < 3.0 * thr) {
        return Err(Error::RankIndeterminate);
    }
    Ok(sv.iter().filter(|&&s| s > thr).count())
}

fn hermitian_part_max_eig(a: &CMatrix, theta: f64) -> f64 {
    let phase = C64::from_polar(1.0, theta);
    let h = (a.m.map(|x| x * phase) + a.m.adjoint().map(|x| x * phase.conj())).map(|x| x * C64::new(0.5, 0.0));
    let eig = h.symmetric_eigen();
    eig.eigenvalues.iter().fold(f64::NEG_INFINITY, |m, &e| m.max(e))
}

/// Numerical radius: max over rotations of the top eigenvalue of the
/// Hermitian part, coarse grid plus golden-section refinement.
pub fn numerical_radius(a: &CMatrix, tol: f64) -> Result<f64> {
    let n = a.dim();
    if n == 0 {
        return Ok(0.0);
    }
    let coarse = 64usize;
    let step = 2.0 * std::f64::consts::PI / coarse as f64;
    let values: Vec<f64> = (0..coarse)
        .map(|k| hermitian_part_max_eig(a, k as f64 * step))
        .collect();
    let best = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    // refine inside the bracket around the best coarse sample
    let mut lo = (best as f64 - 1.0) * step;
    let mut hi = (best as f64 + 1.0) * step;
    let golden = 0.5 * (3.0 - 5.0_f64.sqrt());
    let budget = 200usize;
    let mut iters = 0usize;
    while hi - lo > tol {
        if iters >= budget {
            return Err(Error::NonConvergence);
        }
        let m1 = lo + golden * (hi - lo);
        let m2 = hi - golden * (hi - lo);
        if hermitian_part_max_eig(a, m1) < hermitian_part_max_eig(a, m2) {
            lo = m1;
        } else {
            hi = m2;
        }
        iters += 1;
    }
    Ok(hermitian_part_max_eig(a, 0.5 * (lo + hi)).max(values[best]))
}

pub fn spectral_radius(a: &CMatrix) -> Result<f64> {
    Ok(eigenvalues(a)?.iter().fold(0.0, |m, l| m.max(l.norm())))
}

/// Greedy minimal-distance matching distance between two equally long
/// complex-vector multisets. Returns the largest matched pair distance.
pub fn multiset_match_distance(a: &[Vec<C64>], b: &[Vec<C64>]) -> f64 {
    assert_eq!(a.len(), b.len());
    let dist = |x: &[C64], y: &[C64]| -> f64 {
        x.iter().zip(y).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt()
    };
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let mut best = f64::INFINITY;
        let mut best_j = usize::MAX;
        for (j, y) in b.iter().enumerate() {
            if !used[j] {
                let d = dist(x, y);
                if d < best {
                    best = d;
                    best_j = j;
                }
            }
        }
        used[best_j] = true;
        worst = worst.max(best);
    }
    worst
}

/// One-sided matching distance: max over `a` of the distance to the nearest
/// point of `b` (no exclusivity).
pub fn one_sided_match_distance(a: &[Vec<C64>], b: &[Vec<C64>]) -> f64 {
    let dist = |x: &[C64], y: &[C64]| -> f64 {
        x.iter().zip(y).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt()
    };
    a.iter()
        .map(|x| {
            b.iter()
                .map(|y| dist(x, y))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

pub fn random_complex(rng: &mut impl Rng) -> C64 {
    C64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
}

pub fn random_matrix(n: usize, rng: &mut impl Rng) -> CMatrix {
    let scale = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, |_, _| {
        C64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0) * scale
    })
}

/// Haar-ish random unitary: QR of a complex Ginibre matrix with phase fix.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> CMatrix {
    let g = DMatrix::<C64>::from_fn(n, n, |_, _| random_complex(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    CMatrix { m: q }
}

/// Random orthogonal projection of the given rank.
pub fn random_projection(n: usize, rank: usize, rng: &mut impl Rng) -> CMatrix {
    assert!(rank <= n);
    let u = random_unitary(n, rng);
    let d = CMatrix::from_fn(n, |i, j| {
        if i == j && i < rank {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    u.mul(&d).mul(&u.adjoint_mat())
}

/// Unitary with first column equal to the given unit vector (Householder).
pub fn unitary_from_first_column(v: &DVector<C64>) -> CMatrix {
    let n = v.len();
    let mut w = v.clone();
    let alpha = if w[0].norm() > 0.0 { w[0] / w[0].norm() } else { C64::new(1.0, 0.0) };
    // u = v + alpha * e1, H = I - 2 uu*/|u|^2 maps e1 to -alpha^-1-ish v; fix phase below
    w[0] += alpha;
    let nw = w.norm();
    let mut h = DMatrix::<C64>::identity(n, n);
    if nw > 1e-300 {
        let u = w.map(|x| x / C64::new(nw, 0.0));
        let outer = &u * u.adjoint();
        h -= outer.map(|x| x * C64::new(2.0, 0.0));
    }
    // columns of H are unitary; H e1 = -alpha * v, so rescale first column phase
    let mut q = h;
    for i in 0..n {
        q[(i, 0)] *= -alpha;
    }
    CMatrix { m: q }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eigenvalues_diagonal() {
        let a = CMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let mut eig = eigenvalues(&a).unwrap();
        eig.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((eig[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((eig[1] - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn eigenvalues_nilpotent_jordan() {
        let a = CMatrix::from_fn(2, |i, j| if (i, j) == (0, 1) { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let eig = eigenvalues(&a).unwrap();
        assert_eq!(eig.len(), 2);
        for l in eig {
            assert!(l.norm() < 1e-7);
        }
    }

    #[test]
    fn eigenvalues_companion() {
        // companion matrix of z^2 - 1
        let a = CMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => c(1.0, 0.0),
            (1, 0) => c(1.0, 0.0),
            _ => c(0.0, 0.0),
        });
        let mut eig = eigenvalues(&a).unwrap();
        eig.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((eig[0] - c(-1.0, 0.0)).norm() < 1e-10);
        assert!((eig[1] - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn det_identity_and_2x2() {
        assert!((det(&CMatrix::identity(3)) - c(1.0, 0.0)).norm() < 1e-14);
        let w = c(2.0, 1.0);
        let a = CMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => w,
            (1, 0) => c(1.0, 0.0),
            _ => c(0.0, 0.0),
        });
        assert!((det(&a) + w).norm() < 1e-14);
    }

    #[test]
    fn det_zero_row() {
        let a = CMatrix::from_fn(3, |i, j| if i == 0 { c(0.0, 0.0) } else { c((i + j) as f64, 1.0) });
        assert!(det(&a).norm() < 1e-12);
    }

    #[test]
    fn svd_rank_cases() {
        assert_eq!(svd_rank(&CMatrix::zeros(4), 1e-10), 0);
        assert_eq!(svd_rank(&CMatrix::identity(5), 1e-10), 5);
        let u = DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 2.0), c(1.0, 1.0)]);
        let v = DVector::from_vec(vec![c(0.5, 0.0), c(1.0, -1.0), c(0.0, 3.0)]);
        let outer = CMatrix::new(&u * v.adjoint()).unwrap();
        assert_eq!(svd_rank(&outer, 1e-10), 1);
    }

    #[test]
    fn numerical_radius_identity_and_diagonal() {
        let nu = numerical_radius(&CMatrix::identity(3), NRADIUS_TOL).unwrap();
        assert!((nu - 1.0).abs() < 1e-7);
        let d = CMatrix::diagonal(&[c(0.3, 0.4), c(-1.2, 0.0), c(0.0, 0.9)]);
        let nu = numerical_radius(&d, NRADIUS_TOL).unwrap();
        assert!((nu - 1.2).abs() < 1e-7);
    }

    #[test]
    fn numerical_radius_jordan_half() {
        // oracle: dense theta grid, value is exactly 1/2 for [[0,0],[1,0]]
        let a = CMatrix::from_fn(2, |i, j| if (i, j) == (1, 0) { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let oracle = (0..100_000)
            .map(|k| hermitian_part_max_eig(&a, 2.0 * std::f64::consts::PI * k as f64 / 1e5))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((oracle - 0.5).abs() < 1e-6);
        let nu = numerical_radius(&a, NRADIUS_TOL).unwrap();
        assert!((nu - 0.5).abs() < 1e-7);
    }

    #[test]
    fn eigenvalues_unitary_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let a = random_matrix(5, &mut rng);
            let q = random_unitary(5, &mut rng);
            let b = q.mul(&a).mul(&q.adjoint_mat());
            let ea: Vec<Vec<C64>> = eigenvalues(&a).unwrap().into_iter().map(|l| vec![l]).collect();
            let eb: Vec<Vec<C64>> = eigenvalues(&b).unwrap().into_iter().map(|l| vec![l]).collect();
            assert!(multiset_match_distance(&ea, &eb) < tol_eig(a.frobenius()));
        }
    }

    #[test]
    fn det_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let a = random_matrix(5, &mut rng);
            let b = random_matrix(5, &mut rng);
            let lhs = det(&a.mul(&b));
            let rhs = det(&a) * det(&b);
            let denom = rhs.norm().max(1e-30);
            if denom > 1e-12 {
                assert!((lhs - rhs).norm() / denom < 1e-9);
            }
        }
    }

    #[test]
    fn rank_unitary_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let u = DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 2.0), c(1.0, 1.0), c(0.0, 0.0)]);
        let v = DVector::from_vec(vec![c(0.5, 0.0), c(1.0, -1.0), c(0.0, 3.0), c(2.0, 0.0)]);
        let a = CMatrix::new(&u * v.adjoint()).unwrap();
        let q1 = random_unitary(4, &mut rng);
        let q2 = random_unitary(4, &mut rng);
        assert_eq!(svd_rank(&q1.mul(&a).mul(&q2), 1e-10), svd_rank(&a, 1e-10));
    }

    #[test]
    fn radius_between_spectral_radius_and_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let a = random_matrix(4, &mut rng);
            let nu = numerical_radius(&a, NRADIUS_TOL).unwrap();
            let sr = spectral_radius(&a).unwrap();
            let on = a.op_norm();
            assert!(nu >= sr - 1e-7, "nu {nu} < spectral radius {sr}");
            assert!(nu <= on + 1e-7, "nu {nu} > op norm {on}");
        }
    }

    #[test]
    fn unitary_from_first_column_works() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..5 {
            let mut v = DVector::from_fn(4, |_, _| random_complex(&mut rng));
            v /= C64::new(v.norm(), 0.0);
            let q = unitary_from_first_column(&v);
            let id = q.adjoint_mat().mul(&q);
            assert!(id.sub(&CMatrix::identity(4)).frobenius() < 1e-12);
            let e1: Vec<C64> = (0..4).map(|i| q[(i, 0)]).collect();
            let diff: f64 = e1.iter().zip(v.iter()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            assert!(diff < 1e-12, "first column mismatch {diff}");
        }
    }

    #[test]
    fn non_square_rejected() {
        let m = DMatrix::<C64>::zeros(2, 3);
        assert!(matches!(CMatrix::new(m), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn non_finite_rejected() {
        let m = DMatrix::<C64>::from_element(2, 2, c(f64::NAN, 0.0));
        assert!(matches!(CMatrix::new(m), Err(Error::NonFinite)));
    }
}
