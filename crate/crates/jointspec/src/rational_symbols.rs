//! Matrix-valued rational symbols phi(z) = F(z)/q(z) on the closed polydisk:
//! certification (pole-free, contractive), commuting families, spectrum-union
//! sampling, nilpotency-power annihilation, and the symbol-level
//! Cayley-Hamilton check with cleared denominators.

use rayon::prelude::*;

use crate::cayley_hamilton::AlphaSet;
use crate::error::{Error, Result};
use crate::grid::PolyDiskGrid;
use crate::matrix_core::{CMatrix, C64};
use crate::mpoly::{det_poly_matrix, MPoly, PolyMatrix};
use crate::tuple_spectrum::{joint_eigenvalues_seeded, CommutingTuple};

/// Minimal allowed |q(z)| on the certification grid.
pub const Q_MIN_TOL: f64 = 1e-8;
/// Allowed excess over operator norm 1 on the certification grid.
pub const CONTRACT_TOL: f64 = 1e-8;
/// Commutativity tolerance for a symbol family on the certification grid.
pub const FAMILY_COMM_TOL: f64 = 1e-8;

/// phi(z) = F(z)/q(z) with q zero-free on the closed polydisk and phi
/// contractive there; both facts are certified on a grid at construction.
#[derive(Debug, Clone)]
pub struct RationalMatrixFunction {
    n: usize,
    d: usize,
    numerator: PolyMatrix,
    denominator: MPoly,
    q_min: f64,
    max_norm: f64,
}

impl RationalMatrixFunction {
    pub fn new(numerator: PolyMatrix, denominator: MPoly, grid: &PolyDiskGrid) -> Result<Self> {
        let d = numerator.nvars();
        if denominator.nvars() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: denominator.nvars(),
            });
        }
        if grid.d != d {
            return Err(Error::DimensionMismatch { expected: d, got: grid.d });
        }
        if denominator.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut f = RationalMatrixFunction {
            n: numerator.n(),
            d,
            numerator,
            denominator,
            q_min: f64::INFINITY,
            max_norm: 0.0,
        };
        let mut q_min = f64::INFINITY;
        let mut max_norm: f64 = 0.0;
        for z in grid.points() {
            let qv = f.denominator.eval(&z)?.norm();
            q_min = q_min.min(qv);
            if qv < Q_MIN_TOL {
                return Err(Error::DenominatorVanishes(qv));
            }
            max_norm = max_norm.max(f.numerator.eval(&z)?.scale_c(C64::new(1.0 / qv, 0.0)).op_norm());
        }
        if max_norm > 1.0 + CONTRACT_TOL {
            return Err(Error::NotContractive(max_norm));
        }
        f.q_min = q_min;
        f.max_norm = max_norm;
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn numerator(&self) -> &PolyMatrix {
        &self.numerator
    }

    pub fn denominator(&self) -> &MPoly {
        &self.denominator
    }

    pub fn q_min(&self) -> f64 {
        self.q_min
    }

    /// F(z)/q(z). Outside the certified polydisk this still evaluates, but
    /// contractivity is not asserted there.
    pub fn eval(&self, z: &[C64]) -> Result<CMatrix> {
        let q = self.denominator.eval(z)?;
        if q.norm() < Q_MIN_TOL / 2.0 {
            return Err(Error::DenominatorVanishes(q.norm()));
        }
        Ok(self.numerator.eval(z)?.scale_c(q.inv()))
    }
}

/// A commuting family of k symbols sharing n and d, with the commutator
/// residual recorded from the certification grid.
#[derive(Debug, Clone)]
pub struct SymbolFamily {
    symbols: Vec<RationalMatrixFunction>,
    commutativity_residual: f64,
}

impl SymbolFamily {
    pub fn new(symbols: Vec<RationalMatrixFunction>, grid: &PolyDiskGrid) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::Invalid("empty symbol family".into()));
        }
        let n = symbols[0].n();
        let d = symbols[0].d();
        for s in &symbols {
            if s.n() != n || s.d() != d {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: s.n(),
                });
            }
        }
        let fam = SymbolFamily {
            symbols,
            commutativity_residual: 0.0,
        };
        let mut worst: f64 = 0.0;
        for z in grid.points() {
            let mats = fam.eval_all(&z)?;
            for i in 0..mats.len() {
                for j in i + 1..mats.len() {
                    worst = worst.max(mats[i].commutator_norm(&mats[j]));
                }
            }
        }
        if worst > FAMILY_COMM_TOL {
            return Err(Error::NotCommuting {
                residual: worst,
                tol: FAMILY_COMM_TOL,
            });
        }
        Ok(SymbolFamily {
            commutativity_residual: worst,
            ..fam
        })
    }

    pub fn k(&self) -> usize {
        self.symbols.len()
    }

    pub fn n(&self) -> usize {
        self.symbols[0].n()
    }

    pub fn d(&self) -> usize {
        self.symbols[0].d()
    }

    pub fn symbols(&self) -> &[RationalMatrixFunction] {
        &self.symbols
    }

    pub fn commutativity_residual(&self) -> f64 {
        self.commutativity_residual
    }

    pub fn eval_all(&self, z: &[C64]) -> Result<Vec<CMatrix>> {
        self.symbols.iter().map(|s| s.eval(z)).collect()
    }
}

/// One sampled point of the spectrum union: lambda is a joint eigenvalue of
/// (phi_1(z), ..., phi_k(z)) at the source z in the polydisk.
#[derive(Debug, Clone)]
pub struct UnionPoint {
    pub source: Vec<C64>,
    pub lambda: Vec<C64>,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct UnionSample {
    pub points: Vec<UnionPoint>,
    pub grid_spec: String,
    pub skipped: usize,
}

impl UnionSample {
    pub fn max_residual(&self) -> f64 {
        self.points.iter().map(|p| p.residual).fold(0.0, f64::max)
    }
}

fn cmp_vec(a: &[C64], b: &[C64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != std::cmp::Ordering::Equal {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

fn sort_union(points: &mut [UnionPoint]) {
    points.sort_by(|x, y| cmp_vec(&x.source, &y.source).then_with(|| cmp_vec(&x.lambda, &y.lambda)));
}

fn point_seed(seed: u64, idx: usize) -> u64 {
    seed ^ (idx as u64).wrapping_mul(0x9e3779b97f4a7c15)
}

fn union_sample_impl(
    fam: &SymbolFamily,
    grid: &PolyDiskGrid,
    seed: u64,
    include_source_coords: bool,
) -> UnionSample {
    let zs = grid.points();
    let per_point: Vec<Option<Vec<UnionPoint>>> = zs
        .par_iter()
        .enumerate()
        .map(|(idx, z)| {
            let mats = fam.eval_all(z).ok()?;
            let t = CommutingTuple::with_tolerance(mats.clone(), 1e-6).ok()?;
            let spec = joint_eigenvalues_seeded(&t, point_seed(seed, idx)).ok()?;
            Some(
                spec.points
                    .into_iter()
                    .map(|lam| {
                        let residual = crate::bcl_model::joint_eigen_residual(&mats, &lam);
                        let lambda = if include_source_coords {
                            z.iter().copied().chain(lam).collect()
                        } else {
                            lam
                        };
                        UnionPoint {
                            source: z.clone(),
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
    sort_union(&mut points);
    UnionSample {
        points,
        grid_spec: grid.spec_string(),
        skipped,
    }
}

/// Cloud approximating the union of joint spectra of (phi_1(z), ..., phi_k(z))
/// over the grid on the polydisk; lambda lives in C^k.
pub fn spectrum_union_sample(fam: &SymbolFamily, grid: &PolyDiskGrid, seed: u64) -> UnionSample {
    union_sample_impl(fam, grid, seed, false)
}

/// Cloud in C^{d+k}: (z, lambda) pairs, the first d coordinates being the
/// source point itself (the coordinate multipliers contribute sigma(z_j I)
/// = {z_j}).
pub fn full_tuple_union_sample(fam: &SymbolFamily, grid: &PolyDiskGrid, seed: u64) -> UnionSample {
    union_sample_impl(fam, grid, seed, true)
}

#[derive(Debug, Clone)]
pub struct NilpotencyReport {
    pub passes: bool,
    /// max over the grid of the minimal exponent with a negligible power
    pub r_used: usize,
    pub max_eigenvalue: f64,
    pub max_power_residual: f64,
    /// a grid point where xi(phi(z)) had a non-negligible eigenvalue
    pub witness: Option<Vec<C64>>,
}

/// Check that M(z) = xi(phi_1(z), ..., phi_k(z)) is nilpotent with exponent
/// at most n on the whole grid: all eigenvalues of M(z) negligible and the
/// minimal r with ||M(z)^r|| <= tol * (1 + ||M(z)||)^r never exceeds n.
pub fn nilpotency_annihilation_check(
    fam: &SymbolFamily,
    xi: &MPoly,
    grid: &PolyDiskGrid,
    tol: f64,
) -> Result<NilpotencyReport> {
    if xi.nvars() != fam.k() {
        return Err(Error::DimensionMismatch {
            expected: fam.k(),
            got: xi.nvars(),
        });
    }
    let n = fam.n();
    let mut r_used = 0usize;
    let mut max_eigenvalue: f64 = 0.0;
    let mut max_power_residual: f64 = 0.0;
    let mut witness = None;
    for z in grid.points() {
        let mats = fam.eval_all(&z)?;
        let m = xi.eval_matrices(&mats)?;
        let eig_max = crate::matrix_core::eigenvalues(&m)?
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        max_eigenvalue = max_eigenvalue.max(eig_max);
        if eig_max > tol * (1.0 + m.op_norm()) {
            if witness.is_none() {
                witness = Some(z.clone());
            }
            continue;
        }
        let mut power = CMatrix::identity(n);
        let mut r = n; // worst case by nilpotency bound
        for k in 1..=n {
            power = power.mul(&m);
            let scale = (1.0 + m.op_norm()).powi(k as i32);
            if power.op_norm() <= tol * scale {
                r = k;
                break;
            }
            if k == n {
                max_power_residual = max_power_residual.max(power.op_norm() / scale);
            }
        }
        r_used = r_used.max(r);
    }
    let passes = witness.is_none() && max_power_residual <= tol;
    Ok(NilpotencyReport {
        passes,
        r_used,
        max_eigenvalue,
        max_power_residual,
        witness,
    })
}

/// Pad a polynomial in `src_vars` variables into `nvars` variables, mapping
/// variable v to v + offset.
fn lift(p: &MPoly, nvars: usize, offset: usize) -> MPoly {
    MPoly::from_terms(
        nvars,
        p.terms().map(|(e, c)| {
            let mut ee = vec![0u32; nvars];
            ee[offset..offset + e.len()].copy_from_slice(e);
            (ee, *c)
        }),
    )
}

#[derive(Debug, Clone)]
pub struct PaReport {
    pub max_residual: f64,
    pub passes: bool,
    /// worst grid point and alpha index, if any violation occurred
    pub witness: Option<(Vec<C64>, usize)>,
}

/// Symbol-level Cayley-Hamilton for the full Toeplitz tuple
/// (z_1 I, ..., z_d I, phi_1(z), ..., phi_k(z)) with cleared denominators:
/// with p_i(z) = prod_{j != i} q_j(z),
/// p_alpha(z, w) = det(sum_i alpha_i p_i(z) (F_i(z) - w_i q_i(z) I))
/// must vanish when w_i is substituted by phi_i(z).
pub fn symbol_level_pa_check(
    fam: &SymbolFamily,
    alphas: &AlphaSet,
    grid: &PolyDiskGrid,
    tol: f64,
) -> Result<PaReport> {
    let k = fam.k();
    let d = fam.d();
    let n = fam.n();
    if alphas.d != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: alphas.d,
        });
    }
    let nv = d + k;
    // cleared-denominator ingredients, lifted to d+k variables (z first)
    let qs: Vec<MPoly> = fam
        .symbols
        .iter()
        .map(|s| lift(s.denominator(), nv, 0))
        .collect();
    let ps: Vec<MPoly> = (0..k)
        .map(|i| {
            let mut p = MPoly::one(nv);
            for (j, q) in qs.iter().enumerate() {
                if j != i {
                    p = p.mul(q);
                }
            }
            p
        })
        .collect();
    let mut polys = Vec::with_capacity(alphas.count());
    for alpha in &alphas.vectors {
        let pencil = PolyMatrix::from_fn(n, nv, |r, c| {
            let mut e = MPoly::zero(nv);
            for i in 0..k {
                let mut term = lift(fam.symbols[i].numerator().entry(r, c), nv, 0);
                if r == c {
                    term = term.sub(&MPoly::var(nv, d + i).mul(&qs[i]));
                }
                e = e.add(&ps[i].mul(&term).scale(alpha[i]));
            }
            e
        });
        let p = det_poly_matrix(&pencil)?;
        // normalize to unit coefficient norm so the tolerance is scale-free
        let cn = p.coeff_norm();
        polys.push(if cn > 0.0 {
            p.scale(C64::new(1.0 / cn, 0.0))
        } else {
            p
        });
    }
    let degree = polys.iter().map(|p| p.total_degree()).max().unwrap_or(0);
    let mut max_residual: f64 = 0.0;
    let mut witness = None;
    for z in grid.points() {
        let phis = fam.eval_all(&z)?;
        let mut mats: Vec<CMatrix> = z
            .iter()
            .map(|&zj| CMatrix::identity(n).scale_c(zj))
            .collect();
        mats.extend(phis.iter().cloned());
        let mat_norm = phis.iter().map(|m| m.op_norm()).fold(0.0, f64::max);
        let z_norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let scale = (1.0 + z_norm + mat_norm).powi(degree as i32);
        for (ai, p) in polys.iter().enumerate() {
            let r = p.eval_matrices(&mats)?.frobenius() / scale;
            if r > max_residual {
                max_residual = r;
                if r > tol {
                    witness = Some((z.clone(), ai));
                }
            }
        }
    }
    Ok(PaReport {
        passes: max_residual <= tol,
        max_residual,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley_hamilton::moment_curve_alphas;
    use crate::grid::DiskGrid;
    use crate::matrix_core::random_matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn small_grid(d: usize) -> PolyDiskGrid {
        PolyDiskGrid::new(d, DiskGrid::new(6, 12))
    }

    /// phi(z) = A * b(z) for a scalar polynomial-over-Moebius b and constant A.
    fn scalar_times_matrix(a: &CMatrix, num: &MPoly, den: &MPoly) -> (PolyMatrix, MPoly) {
        let n = a.dim();
        let pm = PolyMatrix::from_fn(n, num.nvars(), |r, cidx| num.scale(a[(r, cidx)]));
        (pm, den.clone())
    }

    #[test]
    fn constant_symbol_eval() {
        let a = CMatrix::diagonal(&[c(0.3, 0.0), c(-0.4, 0.1)]);
        let (f, q) = scalar_times_matrix(&a, &MPoly::one(1), &MPoly::one(1));
        let s = RationalMatrixFunction::new(f, q, &small_grid(1)).unwrap();
        let z = vec![c(0.2, 0.5)];
        assert!(s.eval(&z).unwrap().sub(&a).frobenius() < 1e-14);
    }

    #[test]
    fn diagonal_powers_eval() {
        // phi(z) = diag(z, z^2) at z = 0.5
        let z1 = MPoly::var(1, 0);
        let f = PolyMatrix::new(
            2,
            1,
            vec![z1.clone(), MPoly::zero(1), MPoly::zero(1), z1.mul(&z1)],
        )
        .unwrap();
        let s = RationalMatrixFunction::new(f, MPoly::one(1), &small_grid(1)).unwrap();
        let m = s.eval(&[c(0.5, 0.0)]).unwrap();
        assert!((m[(0, 0)] - c(0.5, 0.0)).norm() < 1e-14);
        assert!((m[(1, 1)] - c(0.25, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn moebius_symbol_zero_at_a() {
        // (z - a)/(1 - conj(a) z) * I vanishes at z = a
        let a = c(0.4, -0.3);
        let num = MPoly::var(1, 0).sub(&MPoly::constant(1, a));
        let den = MPoly::one(1).sub(&MPoly::var(1, 0).scale(a.conj()));
        let f = PolyMatrix::from_fn(2, 1, |r, cidx| {
            if r == cidx {
                num.clone()
            } else {
                MPoly::zero(1)
            }
        });
        let s = RationalMatrixFunction::new(f, den, &small_grid(1)).unwrap();
        assert!(s.eval(&[a]).unwrap().frobenius() < 1e-12);
    }

    #[test]
    fn rejects_pole_inside() {
        // q(z) = z - 0.5 vanishes inside the disk; 1/q blows past norm 1
        // almost everywhere, so grid certification rejects it
        let den = MPoly::var(1, 0).sub(&MPoly::constant(1, c(0.5, 0.0)));
        let f = PolyMatrix::from_fn(1, 1, |_, _| MPoly::one(1));
        let grid = small_grid(1);
        match RationalMatrixFunction::new(f, den, &grid) {
            Err(Error::DenominatorVanishes(_)) | Err(Error::NotContractive(_)) => {}
            other => panic!("expected pole rejection, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn rejects_expansive_symbol() {
        let a = CMatrix::diagonal(&[c(2.0, 0.0)]);
        let (f, q) = scalar_times_matrix(&a, &MPoly::one(1), &MPoly::one(1));
        assert!(matches!(
            RationalMatrixFunction::new(f, q, &small_grid(1)),
            Err(Error::NotContractive(_))
        ));
    }

    fn jordan_family() -> SymbolFamily {
        // phi_1(z) = (zI + N)/2, phi_2(z) = zI/2 with N the 2x2 nilpotent;
        // xi = z1 - z2 gives xi(phi) = N/2, nilpotent of exponent exactly 2
        let half = c(0.5, 0.0);
        let z = MPoly::var(1, 0);
        let f1 = PolyMatrix::new(
            2,
            1,
            vec![
                z.scale(half),
                MPoly::constant(1, half),
                MPoly::zero(1),
                z.scale(half),
            ],
        )
        .unwrap();
        let f2 = PolyMatrix::from_fn(2, 1, |r, cidx| {
            if r == cidx {
                z.scale(half)
            } else {
                MPoly::zero(1)
            }
        });
        let grid = small_grid(1);
        let s1 = RationalMatrixFunction::new(f1, MPoly::one(1), &grid).unwrap();
        let s2 = RationalMatrixFunction::new(f2, MPoly::one(1), &grid).unwrap();
        SymbolFamily::new(vec![s1, s2], &grid).unwrap()
    }

    #[test]
    fn union_sample_scalar_square() {
        // k=1, n=1, phi(z) = z^2: the cloud is the image of the grid
        let z = MPoly::var(1, 0);
        let f = PolyMatrix::new(1, 1, vec![z.mul(&z)]).unwrap();
        let grid = small_grid(1);
        let s = RationalMatrixFunction::new(f, MPoly::one(1), &grid).unwrap();
        let fam = SymbolFamily::new(vec![s], &grid).unwrap();
        let cloud = spectrum_union_sample(&fam, &grid, 0);
        assert_eq!(cloud.skipped, 0);
        for p in &cloud.points {
            let z0 = p.source[0];
            assert!((p.lambda[0] - z0 * z0).norm() < 1e-10);
            assert!(p.lambda[0].norm() <= 1.0 + 1e-8);
        }
    }

    #[test]
    fn constant_family_cloud_is_joint_spectrum() {
        let a1 = CMatrix::diagonal(&[c(0.1, 0.0), c(0.2, 0.0)]);
        let a2 = CMatrix::diagonal(&[c(0.3, 0.0), c(-0.4, 0.0)]);
        let grid = small_grid(1);
        let s1 = {
            let (f, q) = scalar_times_matrix(&a1, &MPoly::one(1), &MPoly::one(1));
            RationalMatrixFunction::new(f, q, &grid).unwrap()
        };
        let s2 = {
            let (f, q) = scalar_times_matrix(&a2, &MPoly::one(1), &MPoly::one(1));
            RationalMatrixFunction::new(f, q, &grid).unwrap()
        };
        let fam = SymbolFamily::new(vec![s1, s2], &grid).unwrap();
        let cloud = spectrum_union_sample(&fam, &grid, 0);
        for p in &cloud.points {
            let hit = [(0.1, 0.3), (0.2, -0.4)].iter().any(|&(x, y)| {
                (p.lambda[0] - c(x, 0.0)).norm() < 1e-9 && (p.lambda[1] - c(y, 0.0)).norm() < 1e-9
            });
            assert!(hit, "unexpected cloud point {:?}", p.lambda);
        }
    }

    #[test]
    fn full_tuple_sample_prefixes_source() {
        let fam = jordan_family();
        let grid = small_grid(1);
        let cloud = full_tuple_union_sample(&fam, &grid, 1);
        for p in &cloud.points {
            assert_eq!(p.lambda.len(), 3);
            assert!((p.lambda[0] - p.source[0]).norm() < 1e-14);
            // phi_1, phi_2 have the joint eigenvalue (z/2, z/2)
            assert!((p.lambda[1] - p.source[0] * 0.5).norm() < 1e-9);
            assert!((p.lambda[2] - p.source[0] * 0.5).norm() < 1e-9);
        }
    }

    #[test]
    fn nilpotency_jordan_attains_r_equals_n() {
        let fam = jordan_family();
        let xi = MPoly::var(2, 0).sub(&MPoly::var(2, 1));
        let rep = nilpotency_annihilation_check(&fam, &xi, &small_grid(1), 1e-10).unwrap();
        assert!(rep.passes, "witness {:?}", rep.witness);
        assert_eq!(rep.r_used, 2);
        assert!(rep.max_eigenvalue < 1e-10);
    }

    #[test]
    fn nilpotency_rejects_nonvanishing_xi() {
        let fam = jordan_family();
        let xi = MPoly::one(2);
        let rep = nilpotency_annihilation_check(&fam, &xi, &small_grid(1), 1e-10).unwrap();
        assert!(!rep.passes);
        assert!(rep.witness.is_some());
    }

    #[test]
    fn pa_check_constant_family() {
        // constant symbols: reduces to the matrix Cayley-Hamilton identity
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = random_matrix(3, &mut rng);
        let a1 = m.scale_c(c(0.3, 0.0));
        let a2 = m.mul(&m).scale_c(c(0.2, 0.1));
        let grid = small_grid(1);
        let mk = |a: &CMatrix| {
            let (f, q) = scalar_times_matrix(a, &MPoly::one(1), &MPoly::one(1));
            RationalMatrixFunction::new(f, q, &grid).unwrap()
        };
        let fam = SymbolFamily::new(vec![mk(&a1), mk(&a2)], &grid).unwrap();
        let rep = symbol_level_pa_check(&fam, &moment_curve_alphas(2, 3), &grid, 1e-7).unwrap();
        assert!(rep.passes, "residual {}", rep.max_residual);
    }

    #[test]
    fn pa_check_jordan_family() {
        let fam = jordan_family();
        let rep =
            symbol_level_pa_check(&fam, &moment_curve_alphas(2, 2), &small_grid(1), 1e-7).unwrap();
        assert!(rep.passes, "residual {}", rep.max_residual);
    }

    #[test]
    fn pa_check_moebius_scalar() {
        // k=1, n=1: p_alpha = alpha (F(z1) - w q(z1)) vanishes at w = b(z1)
        let a = c(0.3, 0.2);
        let num = MPoly::var(1, 0).sub(&MPoly::constant(1, a));
        let den = MPoly::one(1).sub(&MPoly::var(1, 0).scale(a.conj()));
        let f = PolyMatrix::new(1, 1, vec![num]).unwrap();
        let grid = small_grid(1);
        let s = RationalMatrixFunction::new(f, den, &grid).unwrap();
        let fam = SymbolFamily::new(vec![s], &grid).unwrap();
        let rep = symbol_level_pa_check(&fam, &moment_curve_alphas(1, 1), &grid, 1e-9).unwrap();
        assert!(rep.passes, "residual {}", rep.max_residual);
    }

    #[test]
    fn adjoint_symmetry_of_cloud() {
        // conjugating the family data conjugates the cloud
        let fam = jordan_family();
        let grid = small_grid(1);
        let cloud = spectrum_union_sample(&fam, &grid, 3);
        // the adjoint tuple at the same source has the conjugated joint
        // eigenvalues
        for p in cloud.points.iter().step_by(5) {
            let mats: Vec<CMatrix> = fam
                .eval_all(&p.source)
                .unwrap()
                .iter()
                .map(|m| m.adjoint_mat())
                .collect();
            let lamc: Vec<C64> = p.lambda.iter().map(|l| l.conj()).collect();
            let r = crate::bcl_model::joint_eigen_residual(&mats, &lamc);
            assert!(r < 1e-8, "adjoint residual {r}");
        }
    }

    #[test]
    fn bcl_cross_check() {
        // the swap BCL pair expressed as rational symbols reproduces the
        // bcl_model cloud
        let p = CMatrix::diagonal(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let u = CMatrix::from_fn(2, |r, cidx| {
            if r + cidx == 1 {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let b = crate::bcl_model::bcl_pair_from(&p, &u).unwrap();
        let grid = small_grid(1);
        let z = MPoly::var(1, 0);
        let mk = |j: usize| {
            let a0 = b.constant_term(j);
            let a1 = b.projections()[j].mul(&b.unitaries()[j]);
            let f = PolyMatrix::from_fn(2, 1, |r, cidx| {
                MPoly::constant(1, a0[(r, cidx)]).add(&z.scale(a1[(r, cidx)]))
            });
            RationalMatrixFunction::new(f, MPoly::one(1), &grid).unwrap()
        };
        let fam = SymbolFamily::new(vec![mk(0), mk(1)], &grid).unwrap();
        let rational_cloud = spectrum_union_sample(&fam, &grid, 9);
        let bcl_cloud = crate::bcl_model::sample_variety(&b, &DiskGrid::new(6, 12), 9);
        assert_eq!(rational_cloud.points.len(), bcl_cloud.points.len());
        for (a, bpt) in rational_cloud.points.iter().zip(&bcl_cloud.points) {
            assert!((a.source[0] - bpt.source).norm() < 1e-12);
            for (x, y) in a.lambda.iter().zip(&bpt.lambda) {
                assert!((x - y).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn contractivity_of_cloud_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let m = random_matrix(3, &mut rng);
        let grid = small_grid(1);
        let a1 = m.scale_c(c(0.4, 0.0));
        let a2 = m.mul(&m).scale_c(c(0.25, 0.0));
        let mk = |a: &CMatrix| {
            let (f, q) = scalar_times_matrix(a, &MPoly::var(1, 0), &MPoly::one(1));
            RationalMatrixFunction::new(f, q, &grid).unwrap()
        };
        let fam = SymbolFamily::new(vec![mk(&a1), mk(&a2)], &grid).unwrap();
        let cloud = spectrum_union_sample(&fam, &grid, 2);
        for p in &cloud.points {
            for l in &p.lambda {
                assert!(l.norm() <= 1.0 + 1e-8);
            }
        }
        // every cloud point is Koszul-singular for the evaluated tuple
        for p in cloud.points.iter().step_by(9) {
            let mats = fam.eval_all(&p.source).unwrap();
            let t = CommutingTuple::with_tolerance(mats, 1e-6).unwrap();
            let ok = crate::tuple_spectrum::taylor_singular_at_loose(&t, &p.lambda, 1e-6).unwrap();
            assert!(ok, "cloud point not Taylor-singular: {:?}", p.lambda);
        }
    }

    #[test]
    fn moebius_product_denominator_family() {
        // two symbols with genuine Moebius denominators, built from one
        // generator so they commute
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let m = random_matrix(3, &mut rng);
        let g = m.scale_c(c(0.5, 0.0));
        let a = c(0.3, -0.2);
        let bpt = c(-0.1, 0.4);
        let grid = small_grid(1);
        let num1 = MPoly::var(1, 0).sub(&MPoly::constant(1, a));
        let den1 = MPoly::one(1).sub(&MPoly::var(1, 0).scale(a.conj()));
        let num2 = MPoly::var(1, 0).sub(&MPoly::constant(1, bpt));
        let den2 = MPoly::one(1).sub(&MPoly::var(1, 0).scale(bpt.conj()));
        let f1 = PolyMatrix::from_fn(3, 1, |r, cidx| num1.scale(g[(r, cidx)]));
        let f2 = PolyMatrix::from_fn(3, 1, |r, cidx| num2.scale(g.mul(&g)[(r, cidx)]));
        let s1 = RationalMatrixFunction::new(f1, den1, &grid).unwrap();
        let s2 = RationalMatrixFunction::new(f2, den2, &grid).unwrap();
        let fam = SymbolFamily::new(vec![s1, s2], &grid).unwrap();
        let rep = symbol_level_pa_check(&fam, &moment_curve_alphas(2, 3), &grid, 1e-7).unwrap();
        assert!(rep.passes, "residual {}", rep.max_residual);
        let nil = {
            // xi built from the annihilator of the constant tuple would need
            // the full ideal; instead check that a nonvanishing xi fails
            nilpotency_annihilation_check(&fam, &MPoly::one(2), &grid, 1e-10).unwrap()
        };
        assert!(!nil.passes);
    }

    #[test]
    fn polydisk_d2_symbol() {
        // d=2: phi(z1, z2) = z1 z2 / 2 * I on the bidisk
        let grid = PolyDiskGrid::new(2, DiskGrid::new(3, 6));
        let prod = MPoly::var(2, 0).mul(&MPoly::var(2, 1)).scale(c(0.5, 0.0));
        let f = PolyMatrix::new(1, 2, vec![prod]).unwrap();
        let s = RationalMatrixFunction::new(f, MPoly::one(2), &grid).unwrap();
        let fam = SymbolFamily::new(vec![s], &grid).unwrap();
        let cloud = spectrum_union_sample(&fam, &grid, 0);
        for p in &cloud.points {
            assert!((p.lambda[0] - p.source[0] * p.source[1] * 0.5).norm() < 1e-10);
        }
    }
}
