//! Berger-Coburn-Lebow symbol data: commuting linear pencils
//! `phi_j(z) = P_j^perp U_j + z P_j U_j` with `prod_j phi_j(z) = z I`,
//! purity and distinguished-variety criteria, variety sampling over the disk,
//! and defining-polynomial extraction for pairs.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::DiskGrid;
use crate::matrix_core::{
    self, numerical_radius, CMatrix, C64, NRADIUS_TOL,
};
use crate::mpoly::{approx_gcd_bivariate, det_poly_matrix, MPoly, PolyMatrix};
use crate::tuple_spectrum::{joint_eigenvalues_seeded, CommutingTuple};

/// Certification tolerance for projection/unitary structure.
pub const CERT_TOL: f64 = 1e-8;
/// Product-law and commutativity tolerance on the validation grid.
pub const PRODUCT_TOL: f64 = 1e-10;
/// nu values in [1 - PURITY_MARGIN, 1) are borderline; purity is then decided
/// only when the power indicator is unambiguous.
pub const PURITY_MARGIN: f64 = 1e-4;
/// Default power count for the decay indicator.
pub const DEFAULT_N_POWERS: usize = 512;

/// Validated (P_j, U_j) data. Construction certifies the projections, the
/// unitaries, symbol commutativity and the product law on a validation grid.
#[derive(Debug, Clone)]
pub struct BCLData {
    n: usize,
    d: usize,
    projections: Vec<CMatrix>,
    unitaries: Vec<CMatrix>,
    product_residual: f64,
    commutativity_residual: f64,
}

impl BCLData {
    pub fn new(projections: Vec<CMatrix>, unitaries: Vec<CMatrix>) -> Result<Self> {
        if projections.is_empty() || projections.len() != unitaries.len() {
            return Err(Error::Invalid(
                "need equally many projections and unitaries, at least one each".into(),
            ));
        }
        let d = projections.len();
        let n = projections[0].dim();
        for m in projections.iter().chain(unitaries.iter()) {
            if m.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: m.dim(),
                });
            }
        }
        for p in &projections {
            let r = p.mul(p).sub(p).frobenius().max(p.sub(&p.adjoint_mat()).frobenius());
            if r > CERT_TOL {
                return Err(Error::NotProjection(r));
            }
        }
        for u in &unitaries {
            let r = u.adjoint_mat().mul(u).sub(&CMatrix::identity(n)).frobenius();
            if r > CERT_TOL {
                return Err(Error::NotUnitary(r));
            }
        }
        let mut b = BCLData {
            n,
            d,
            projections,
            unitaries,
            product_residual: 0.0,
            commutativity_residual: 0.0,
        };
        // the pencils are polynomial in z of degree <= d, so a small grid
        // already certifies the identities; residuals are recorded for reports
        let grid = DiskGrid::new(4, 2 * d + 3);
        b.commutativity_residual = b.commutativity_residual_on(&grid);
        if b.commutativity_residual > PRODUCT_TOL {
            return Err(Error::Invalid(format!(
                "symbols do not commute: grid residual {:.3e}",
                b.commutativity_residual
            )));
        }
        b.product_residual = b.product_law_residual(&grid);
        if b.product_residual > PRODUCT_TOL {
            return Err(Error::ProductLawViolation(b.product_residual));
        }
        Ok(b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn projections(&self) -> &[CMatrix] {
        &self.projections
    }

    pub fn unitaries(&self) -> &[CMatrix] {
        &self.unitaries
    }

    /// phi_j(z) = P_j^perp U_j + z P_j U_j.
    pub fn symbol(&self, j: usize, z: C64) -> CMatrix {
        let pu = self.projections[j].mul(&self.unitaries[j]);
        let ppu = self.unitaries[j].sub(&pu);
        ppu.add(&pu.scale_c(z))
    }

    /// Constant term P_j^perp U_j of the j-th pencil.
    pub fn constant_term(&self, j: usize) -> CMatrix {
        let pu = self.projections[j].mul(&self.unitaries[j]);
        self.unitaries[j].sub(&pu)
    }

    pub fn symbols_at(&self, z: C64) -> Vec<CMatrix> {
        (0..self.d).map(|j| self.symbol(j, z)).collect()
    }

    /// max over the grid of ||prod_j phi_j(z) - zI||_F.
    pub fn product_law_residual(&self, grid: &DiskGrid) -> f64 {
        grid.points()
            .par_iter()
            .map(|&z| {
                let mut prod = CMatrix::identity(self.n);
                for j in 0..self.d {
                    prod = prod.mul(&self.symbol(j, z));
                }
                prod.sub(&CMatrix::identity(self.n).scale_c(z)).frobenius()
            })
            .reduce(|| 0.0, f64::max)
    }

    /// max over the grid of ||[phi_i(z), phi_j(z)]||_F.
    pub fn commutativity_residual_on(&self, grid: &DiskGrid) -> f64 {
        grid.points()
            .par_iter()
            .map(|&z| {
                let mats = self.symbols_at(z);
                let mut worst: f64 = 0.0;
                for i in 0..self.d {
                    for j in i + 1..self.d {
                        worst = worst.max(mats[i].commutator_norm(&mats[j]));
                    }
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
    }
}

/// The pair model generated by a single (P, U): U_2 = U_1* and
/// P_2 = U_1* P_1^perp U_1, so that phi_1(z) = P^perp U + zPU and
/// phi_2(z) = U*P + zU*P^perp multiply to zI.
pub fn bcl_pair_from(p: &CMatrix, u: &CMatrix) -> Result<BCLData> {
    if p.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: u.dim(),
        });
    }
    let n = p.dim();
    let pperp = CMatrix::identity(n).sub(p);
    let p2 = u.adjoint_mat().mul(&pperp).mul(u);
    BCLData::new(vec![p.clone(), p2], vec![u.clone(), u.adjoint_mat()])
}

#[derive(Debug, Clone)]
pub struct PurityReport {
    pub pure: bool,
    pub nu: f64,
    pub power_norm: f64,
}

/// Purity of the j-th pencil via two independent indicators: numerical radius
/// of the constant term P_j^perp U_j, and decay of its n_powers-th power.
/// For contractions the two agree exactly; numerically, a borderline nu
/// combined with an ambiguous power norm is reported as inconclusive.
pub fn purity_check(b: &BCLData, j: usize, n_powers: usize) -> Result<PurityReport> {
    if j >= b.d() {
        return Err(Error::DimensionMismatch {
            expected: b.d(),
            got: j,
        });
    }
    let a = b.constant_term(j);
    let nu = numerical_radius(&a, NRADIUS_TOL)?;
    let power_norm = a.pow(n_powers).op_norm();
    let nu_pure = nu < 1.0 - PURITY_MARGIN;
    let power_pure = power_norm < 1.0 - PURITY_MARGIN;
    if nu_pure == power_pure {
        Ok(PurityReport {
            pure: nu_pure,
            nu,
            power_norm,
        })
    } else {
        Err(Error::PurityInconclusive { nu, power_norm })
    }
}

/// One sampled variety point: lambda is a joint eigenvalue of
/// (phi_1(z), ..., phi_d(z)) for the source parameter z.
#[derive(Debug, Clone)]
pub struct VarietyPoint {
    pub source: C64,
    pub lambda: Vec<C64>,
    pub residual: f64,
    /// |lambda_1 ... lambda_d - z|, forced to 0 by the product law
    pub product_residual: f64,
}

#[derive(Debug, Clone)]
pub struct VarietySample {
    pub points: Vec<VarietyPoint>,
    pub grid_spec: String,
    /// grid points where triangularization failed (skipped)
    pub skipped: usize,
}

impl VarietySample {
    pub fn max_residual(&self) -> f64 {
        self.points.iter().map(|p| p.residual).fold(0.0, f64::max)
    }

    pub fn max_product_residual(&self) -> f64 {
        self.points.iter().map(|p| p.product_residual).fold(0.0, f64::max)
    }
}

/// Residual of lambda as a joint eigenvalue of mats: minimize over unit v the
/// worst ||(M_j - lambda_j)v|| via the smallest singular vector of the
/// stacked shifted matrices.
pub fn joint_eigen_residual(mats: &[CMatrix], lambda: &[C64]) -> f64 {
    let n = mats[0].dim();
    let d = mats.len();
    let mut stacked = DMatrix::<C64>::zeros(d * n, n);
    for (j, m) in mats.iter().enumerate() {
        let s = m.shift(lambda[j]);
        for r in 0..n {
            for c in 0..n {
                stacked[(j * n + r, c)] = s[(r, c)];
            }
        }
    }
    let svd = stacked.clone().svd(false, true);
    let vt = svd.v_t.expect("requested");
    // row of V* for the smallest singular value
    let mut idx = 0;
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s < svd.singular_values[idx] {
            idx = i;
        }
    }
    let v = vt.row(idx).transpose().map(|x| x.conj());
    let mut worst: f64 = 0.0;
    for (j, m) in mats.iter().enumerate() {
        let r = m.shift(lambda[j]).into_inner() * &v;
        worst = worst.max(r.norm());
    }
    worst
}

fn point_seed(seed: u64, idx: usize) -> u64 {
    seed ^ (idx as u64).wrapping_mul(0x9e3779b97f4a7c15)
}

/// Sample the union of joint spectra over the disk grid. Grid points are
/// processed in parallel; the output cloud is deterministically ordered by
/// source parameter, then lexicographically by lambda.
pub fn sample_variety(b: &BCLData, grid: &DiskGrid, seed: u64) -> VarietySample {
    let zs = grid.points();
    let per_point: Vec<Option<Vec<VarietyPoint>>> = zs
        .par_iter()
        .enumerate()
        .map(|(idx, &z)| {
            let mats = b.symbols_at(z);
            let t = CommutingTuple::with_tolerance(mats.clone(), 1e-6).ok()?;
            let spec = joint_eigenvalues_seeded(&t, point_seed(seed, idx)).ok()?;
            Some(
                spec.points
                    .into_iter()
                    .map(|lambda| {
                        let residual = joint_eigen_residual(&mats, &lambda);
                        let prod: C64 = lambda.iter().product();
                        VarietyPoint {
                            source: z,
                            product_residual: (prod - z).norm(),
                            lambda,
                            residual,
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    let mut points = Vec::new();
    let mut skipped = 0;
    for item in per_point {
        match item {
            Some(mut ps) => points.append(&mut ps),
            None => skipped += 1,
        }
    }
    sort_cloud(&mut points);
    VarietySample {
        points,
        grid_spec: grid.spec_string(),
        skipped,
    }
}

fn cmp_c64(a: &C64, b: &C64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

pub fn sort_cloud(points: &mut [VarietyPoint]) {
    points.sort_by(|x, y| {
        cmp_c64(&x.source, &y.source).then_with(|| {
            for (a, b) in x.lambda.iter().zip(&y.lambda) {
                let o = cmp_c64(a, b);
                if o != std::cmp::Ordering::Equal {
                    return o;
                }
            }
            std::cmp::Ordering::Equal
        })
    });
}

/// p_i(z1, z2) = det(phi_i(z1 z2) - z_i I) as a bivariate polynomial.
pub fn pair_poly(b: &BCLData, i: usize) -> Result<MPoly> {
    let n = b.n();
    let a0 = b.constant_term(i);
    let a1 = b.projections()[i].mul(&b.unitaries()[i]);
    let z1z2 = MPoly::var(2, 0).mul(&MPoly::var(2, 1));
    let m = PolyMatrix::from_fn(n, 2, |r, c| {
        let mut e = MPoly::constant(2, a0[(r, c)]).add(&z1z2.scale(a1[(r, c)]));
        if r == c {
            e = e.sub(&MPoly::var(2, i));
        }
        e
    });
    det_poly_matrix(&m)
}

/// The defining data of a pair model: p_1, p_2 and their common factor xi
/// (monic in lex order). When P is numerically the identity, xi is taken in
/// closed form as the characteristic polynomial prod_i (z2 - conj(w_i)) of
/// U*; otherwise xi comes from the approximate bivariate gcd.
pub fn pair_defining_polys(b: &BCLData, tol: f64) -> Result<(MPoly, MPoly, MPoly)> {
    if b.d() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: b.d(),
        });
    }
    let p1 = pair_poly(b, 0)?;
    let p2 = pair_poly(b, 1)?;
    let n = b.n();
    let p_is_identity = b.projections()[0]
        .sub(&CMatrix::identity(n))
        .frobenius()
        <= CERT_TOL;
    let xi = if p_is_identity {
        let z2 = MPoly::var(2, 1);
        let mut xi = MPoly::one(2);
        for w in matrix_core::eigenvalues(&b.unitaries()[0])? {
            xi = xi.mul(&z2.sub(&MPoly::constant(2, w.conj())));
        }
        xi.monic_lex()
    } else {
        approx_gcd_bivariate(&p1, &p2, tol)?
    };
    Ok((p1, p2, xi))
}

/// max over the sample of |xi(lambda)| / ((1 + |lambda|)^deg * coeff norm).
pub fn xi_vanishing_residual(sample: &VarietySample, xi: &MPoly) -> Result<f64> {
    let deg = xi.total_degree() as i32;
    let coeff = xi.coeff_norm().max(1e-300);
    let mut worst: f64 = 0.0;
    for p in &sample.points {
        let lam_norm = p.lambda.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let scale = coeff * (1.0 + lam_norm).powi(deg);
        worst = worst.max(xi.eval(&p.lambda)?.norm() / scale);
    }
    Ok(worst)
}

#[derive(Debug, Clone)]
pub struct SymbolAnnihilationReport {
    pub max_residual: f64,
    pub passes: bool,
}

/// Symbol-level Cayley-Hamilton for the isometric tuple: with
/// p_alpha(z) = det(sum_j alpha_j (phi_j(z1...zd) - z_j I)), verify that
/// p_alpha(phi_1(w), ..., phi_d(w)) is the zero matrix on the grid.
pub fn annihilator_check_isometric(
    b: &BCLData,
    alphas: &crate::cayley_hamilton::AlphaSet,
    grid: &DiskGrid,
    tol: f64,
) -> Result<SymbolAnnihilationReport> {
    let d = b.d();
    let n = b.n();
    if alphas.d != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: alphas.d,
        });
    }
    // monomial z1 z2 ... zd
    let mut prod_z = MPoly::one(d);
    for v in 0..d {
        prod_z = prod_z.mul(&MPoly::var(d, v));
    }
    let mut polys = Vec::with_capacity(alphas.count());
    for alpha in &alphas.vectors {
        let pencil = PolyMatrix::from_fn(n, d, |r, c| {
            let mut e = MPoly::zero(d);
            for j in 0..d {
                let a0 = b.constant_term(j);
                let a1 = b.projections()[j].mul(&b.unitaries()[j]);
                let mut term = MPoly::constant(d, a0[(r, c)]).add(&prod_z.scale(a1[(r, c)]));
                if r == c {
                    term = term.sub(&MPoly::var(d, j));
                }
                e = e.add(&term.scale(alpha[j]));
            }
            e
        });
        polys.push(det_poly_matrix(&pencil)?);
    }
    let zs = grid.points();
    let max_residual = zs
        .par_iter()
        .map(|&z| {
            let mats = b.symbols_at(z);
            let norm = mats.iter().map(|m| m.op_norm()).fold(0.0, f64::max);
            let scale = (1.0 + norm).powi(n as i32);
            let mut worst: f64 = 0.0;
            for p in &polys {
                if let Ok(v) = p.eval_matrices(&mats) {
                    worst = worst.max(v.frobenius() / scale);
                } else {
                    worst = f64::INFINITY;
                }
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    Ok(SymbolAnnihilationReport {
        max_residual,
        passes: max_residual <= tol,
    })
}

#[derive(Debug, Clone)]
pub struct DistinguishedReport {
    pub is_distinguished: bool,
    pub has_interior_point: bool,
    /// sampled points violating the boundary law
    pub witnesses: Vec<VarietyPoint>,
}

/// A coordinate with modulus above 1 - ON_CIRCLE_TOL counts as lying on the
/// unit circle. This is deliberately much tighter than the interior band: the
/// failure modes (unitary symbol parts, flat fibers D x {beta}) put
/// coordinates on the circle exactly, while a genuine distinguished variety
/// merely passes near the boundary face at interior sources.
pub const ON_CIRCLE_TOL: f64 = 1e-6;

/// Grid-level distinguished-variety test: the cloud must meet the open
/// polydisk, and a sampled point with any coordinate on the unit circle must
/// have every coordinate on the circle (within the tol_boundary band), i.e.
/// the cloud meets the topological boundary only in the torus. Boundary
/// sources |z| = 1 are additionally required to land in the torus outright,
/// which the product law forces. A FALSE with witnesses is a certificate;
/// TRUE is evidence at grid resolution.
pub fn distinguished_check(sample: &VarietySample, tol_boundary: f64) -> DistinguishedReport {
    let near_boundary = 1.0 - tol_boundary;
    let on_circle = 1.0 - ON_CIRCLE_TOL;
    let mut has_interior_point = false;
    let mut witnesses = Vec::new();
    for p in &sample.points {
        let mods: Vec<f64> = p.lambda.iter().map(|c| c.norm()).collect();
        let max_m = mods.iter().copied().fold(0.0, f64::max);
        let min_m = mods.iter().copied().fold(f64::INFINITY, f64::min);
        if max_m < near_boundary {
            has_interior_point = true;
        }
        let touches = max_m >= on_circle || p.source.norm() >= on_circle;
        if touches && min_m < near_boundary {
            witnesses.push(p.clone());
        }
    }
    DistinguishedReport {
        is_distinguished: has_interior_point && witnesses.is_empty(),
        has_interior_point,
        witnesses,
    }
}

/// Union cloud realizing the direct-sum model: the base variety together with
/// vertical fibers {alpha_i} x D and horizontal fibers D x {beta_j}, for
/// unimodular alpha_i, beta_j.
pub fn direct_sum_variety(
    base: &VarietySample,
    alphas_u: &[C64],
    betas_u: &[C64],
    grid: &DiskGrid,
) -> Result<VarietySample> {
    for c in alphas_u.iter().chain(betas_u.iter()) {
        if (c.norm() - 1.0).abs() > CERT_TOL {
            return Err(Error::NotUnimodular(c.norm()));
        }
    }
    let mut points = base.points.clone();
    for &a in alphas_u {
        for w in grid.points() {
            points.push(VarietyPoint {
                source: a * w,
                lambda: vec![a, w],
                residual: 0.0,
                product_residual: 0.0,
            });
        }
    }
    for &bu in betas_u {
        for w in grid.points() {
            points.push(VarietyPoint {
                source: w * bu,
                lambda: vec![w, bu],
                residual: 0.0,
                product_residual: 0.0,
            });
        }
    }
    sort_cloud(&mut points);
    Ok(VarietySample {
        points,
        grid_spec: format!("{} + direct-sum fibers", base.grid_spec),
        skipped: base.skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix_core::{random_projection, random_unitary};
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn swap_pair() -> BCLData {
        let p = CMatrix::diagonal(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let u = CMatrix::from_fn(2, |r, col| {
            if r + col == 1 {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        bcl_pair_from(&p, &u).unwrap()
    }

    #[test]
    fn swap_symbols_match_hand_form() {
        let b = swap_pair();
        let z = c(0.3, -0.4);
        // phi_1(z) = [[0, z], [1, 0]] = phi_2(z)
        for j in 0..2 {
            let m = b.symbol(j, z);
            assert!((m[(0, 1)] - z).norm() < 1e-12);
            assert!((m[(1, 0)] - c(1.0, 0.0)).norm() < 1e-12);
            assert!(m[(0, 0)].norm() < 1e-12 && m[(1, 1)].norm() < 1e-12);
        }
        assert!(b.product_law_residual(&DiskGrid::new(8, 16)) < 1e-12);
    }

    #[test]
    fn scalar_p_identity_pair() {
        // P = I (1x1), U = [w]: phi_1(z) = zw, phi_2(z) = conj(w)
        let w = Complex64::from_polar(1.0, 0.7);
        let b = bcl_pair_from(
            &CMatrix::identity(1),
            &CMatrix::from_fn(1, |_, _| w),
        )
        .unwrap();
        let z = c(0.2, 0.1);
        assert!((b.symbol(0, z)[(0, 0)] - z * w).norm() < 1e-14);
        assert!((b.symbol(1, z)[(0, 0)] - w.conj()).norm() < 1e-14);
    }

    #[test]
    fn degenerate_p_zero_pair() {
        // P = 0, U = I: phi_1 = I, phi_2(z) = zI
        let b = bcl_pair_from(&CMatrix::zeros(2), &CMatrix::identity(2)).unwrap();
        let z = c(-0.5, 0.2);
        assert!(b.symbol(0, z).sub(&CMatrix::identity(2)).frobenius() < 1e-14);
        assert!(b.symbol(1, z).sub(&CMatrix::identity(2).scale_c(z)).frobenius() < 1e-14);
    }

    #[test]
    fn rejects_non_projection() {
        let p = CMatrix::from_fn(2, |r, c_| if r == c_ { c(0.5, 0.0) } else { c(0.0, 0.0) });
        assert!(matches!(
            bcl_pair_from(&p, &CMatrix::identity(2)),
            Err(Error::NotProjection(_))
        ));
    }

    #[test]
    fn purity_swap_and_degenerate() {
        let b = swap_pair();
        // constant term of phi_1 is [[0,0],[1,0]], nu = 1/2
        let r = purity_check(&b, 0, DEFAULT_N_POWERS).unwrap();
        assert!(r.pure);
        assert!((r.nu - 0.5).abs() < 1e-6);
        assert!(r.power_norm < 1e-12);

        // P = 0: constant term is U itself, not pure
        let b0 = bcl_pair_from(&CMatrix::zeros(2), &CMatrix::identity(2)).unwrap();
        let r0 = purity_check(&b0, 0, DEFAULT_N_POWERS).unwrap();
        assert!(!r0.pure);
        assert!((r0.nu - 1.0).abs() < 1e-6);
        assert!((r0.power_norm - 1.0).abs() < 1e-10);

        // P = I: constant term of phi_1 is 0, pure with nu = 0
        let bi = bcl_pair_from(&CMatrix::identity(2), &CMatrix::identity(2)).unwrap();
        let ri = purity_check(&bi, 0, DEFAULT_N_POWERS).unwrap();
        assert!(ri.pure && ri.nu < 1e-8);
    }

    #[test]
    fn swap_variety_is_diagonal() {
        let b = swap_pair();
        let sample = sample_variety(&b, &DiskGrid::new(16, 32), 7);
        assert_eq!(sample.skipped, 0);
        assert!(!sample.points.is_empty());
        for p in &sample.points {
            // lambda^2 = z along the diagonal
            assert!((p.lambda[0] - p.lambda[1]).norm() < 1e-7, "off diagonal: {:?}", p);
            assert!(p.product_residual < 1e-8);
            assert!(p.residual < 1e-7);
        }
    }

    #[test]
    fn p_identity_variety_is_flat_fiber() {
        let w = Complex64::from_polar(1.0, 1.1);
        let b = bcl_pair_from(&CMatrix::identity(1), &CMatrix::from_fn(1, |_, _| w)).unwrap();
        let sample = sample_variety(&b, &DiskGrid::new(8, 16), 3);
        for p in &sample.points {
            assert!((p.lambda[1] - w.conj()).norm() < 1e-9);
            assert!((p.lambda[0] - p.source * w).norm() < 1e-9);
        }
    }

    #[test]
    fn swap_pair_polys_and_xi() {
        let b = swap_pair();
        let (p1, p2, xi) = pair_defining_polys(&b, 1e-9).unwrap();
        // p_1 = z1(z1 - z2), p_2 = z2(z2 - z1); common factor z1 - z2
        let z1 = MPoly::var(2, 0);
        let z2 = MPoly::var(2, 1);
        let expect1 = z1.mul(&z1).sub(&z1.mul(&z2));
        let expect2 = z2.mul(&z2).sub(&z1.mul(&z2));
        assert!(p1.sub(&expect1).coeff_norm() < 1e-8, "p1 = {:?}", p1);
        assert!(p2.sub(&expect2).coeff_norm() < 1e-8, "p2 = {:?}", p2);
        // xi is the diagonal factor: it vanishes on the sampled cloud
        assert!(xi.sub(&z1.sub(&z2)).coeff_norm() < 1e-7, "xi = {:?}", xi);
        let sample = sample_variety(&b, &DiskGrid::new(12, 24), 5);
        assert!(xi_vanishing_residual(&sample, &xi).unwrap() < 1e-6);
        assert!(xi.eval(&[c(0.5, 0.0), c(-0.5, 0.0)]).unwrap().norm() > 1e-3);
    }

    #[test]
    fn p_identity_xi_is_char_poly() {
        let w1 = Complex64::from_polar(1.0, 0.4);
        let w2 = Complex64::from_polar(1.0, -2.0);
        let b = bcl_pair_from(
            &CMatrix::identity(2),
            &CMatrix::diagonal(&[w1, w2]),
        )
        .unwrap();
        let (_, _, xi) = pair_defining_polys(&b, 1e-9).unwrap();
        let z2 = MPoly::var(2, 1);
        let expect = z2
            .sub(&MPoly::constant(2, w1.conj()))
            .mul(&z2.sub(&MPoly::constant(2, w2.conj())));
        assert!(xi.sub(&expect).coeff_norm() < 1e-8);
        let sample = sample_variety(&b, &DiskGrid::new(8, 16), 5);
        assert!(xi_vanishing_residual(&sample, &xi).unwrap() < 1e-6);
    }

    #[test]
    fn symbol_level_annihilation_swap() {
        let b = swap_pair();
        let alphas = crate::cayley_hamilton::moment_curve_alphas(2, 2);
        let rep = annihilator_check_isometric(&b, &alphas, &DiskGrid::new(8, 16), 1e-8).unwrap();
        assert!(rep.passes, "residual {}", rep.max_residual);
    }

    #[test]
    fn distinguished_swap_true_flat_false() {
        let b = swap_pair();
        let sample = sample_variety(&b, &DiskGrid::new(16, 32), 7);
        let rep = distinguished_check(&sample, 1e-3);
        assert!(rep.is_distinguished, "witnesses: {:?}", rep.witnesses.first());

        let w = Complex64::from_polar(1.0, 0.9);
        let bf = bcl_pair_from(&CMatrix::identity(1), &CMatrix::from_fn(1, |_, _| w)).unwrap();
        let sf = sample_variety(&bf, &DiskGrid::new(16, 32), 7);
        let rf = distinguished_check(&sf, 1e-3);
        assert!(!rf.is_distinguished);
        assert!(!rf.witnesses.is_empty());

        // all-unitary case: no interior point
        let b0 = bcl_pair_from(&CMatrix::zeros(1), &CMatrix::identity(1)).unwrap();
        let s0 = sample_variety(&b0, &DiskGrid::new(8, 16), 7);
        let r0 = distinguished_check(&s0, 1e-3);
        assert!(!r0.is_distinguished && !r0.has_interior_point);
    }

    #[test]
    fn purity_distinguished_agree_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for trial in 0..10 {
            let n = 2 + trial % 4;
            let p = random_projection(n, 1 + trial % (n - 1), &mut rng);
            let u = random_unitary(n, &mut rng);
            let b = bcl_pair_from(&p, &u).unwrap();
            let pure = (0..2)
                .map(|j| purity_check(&b, j, DEFAULT_N_POWERS).map(|r| r.pure))
                .collect::<Result<Vec<_>>>()
                .unwrap()
                .into_iter()
                .all(|x| x);
            let sample = sample_variety(&b, &DiskGrid::new(12, 24), trial as u64);
            let rep = distinguished_check(&sample, 1e-3);
            assert_eq!(rep.is_distinguished, pure, "trial {trial}");
        }
    }

    #[test]
    fn direct_sum_union() {
        let b = swap_pair();
        let base = sample_variety(&b, &DiskGrid::new(8, 16), 1);
        let grid = DiskGrid::new(8, 16);
        let one = c(1.0, 0.0);
        let union = direct_sum_variety(&base, &[one], &[], &grid).unwrap();
        assert_eq!(union.points.len(), base.points.len() + grid.len());
        // fiber points have lambda_1 = 1
        let fiber = union
            .points
            .iter()
            .filter(|p| (p.lambda[0] - one).norm() < 1e-12 && p.residual == 0.0)
            .count();
        assert_eq!(fiber, grid.len());
        // the enlarged cloud is no longer distinguished
        assert!(!distinguished_check(&union, 1e-3).is_distinguished);

        // empty base, beta fiber only
        let empty = VarietySample {
            points: vec![],
            grid_spec: "empty".into(),
            skipped: 0,
        };
        let h = direct_sum_variety(&empty, &[], &[c(-1.0, 0.0)], &grid).unwrap();
        assert_eq!(h.points.len(), grid.len());
        assert!(h.points.iter().all(|p| (p.lambda[1] + one).norm() < 1e-12));

        // no fibers: unchanged
        let same = direct_sum_variety(&base, &[], &[], &grid).unwrap();
        assert_eq!(same.points.len(), base.points.len());

        assert!(matches!(
            direct_sum_variety(&base, &[c(0.5, 0.0)], &[], &grid),
            Err(Error::NotUnimodular(_))
        ));
    }

    #[test]
    fn no_isolated_points_refinement() {
        // refining the grid 4x near a sampled source keeps a neighbor within 0.1
        let b = swap_pair();
        let coarse = sample_variety(&b, &DiskGrid::new(8, 16), 2);
        let fine = sample_variety(&b, &DiskGrid::new(32, 64), 2);
        for p in coarse.points.iter().step_by(7) {
            let near = fine.points.iter().any(|q| {
                p.lambda
                    .iter()
                    .zip(&q.lambda)
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
                    < 0.1
                    && (p.source - q.source).norm() > 1e-9
            });
            assert!(near, "isolated sampled point at {:?}", p.source);
        }
    }
}
