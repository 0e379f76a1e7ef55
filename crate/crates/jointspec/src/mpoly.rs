//! Sparse multivariate polynomials over complex coefficients.
//!
//! Houses the annihilating polynomials, the pair defining polynomials and
//! their common factor. Determinants of polynomial matrices are computed by
//! evaluation at roots-of-unity grids followed by inverse DFT interpolation;
//! the approximate bivariate GCD goes through Sylvester-subresultant numerical
//! rank and cofactor least squares.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::matrix_core::{det, CMatrix, C64};
use crate::tuple_spectrum::CommutingTuple;

/// Relative coefficient drop threshold.
pub const DROP_REL: f64 = 1e-12;

/// Default cap on the summed per-variable degree bounds in determinant
/// interpolation.
pub const DET_DEGREE_CAP: usize = 64;

/// Sparse polynomial: exponent vector -> coefficient. The zero polynomial
/// has an empty term map.
#[derive(Debug, Clone, PartialEq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, C64>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C64) -> Self {
        let mut p = MPoly::zero(nvars);
        if c.norm() > 0.0 {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        MPoly::constant(nvars, C64::new(1.0, 0.0))
    }

    /// The monomial `z_v`.
    pub fn var(nvars: usize, v: usize) -> Self {
        assert!(v < nvars);
        let mut e = vec![0u32; nvars];
        e[v] = 1;
        let mut p = MPoly::zero(nvars);
        p.terms.insert(e, C64::new(1.0, 0.0));
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, C64)>) -> Self {
        let mut p = MPoly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            let entry = p.terms.entry(e).or_insert(C64::new(0.0, 0.0));
            *entry += c;
        }
        p.prune();
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn degree_in(&self, v: usize) -> usize {
        self.terms.keys().map(|e| e[v] as usize).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Drop coefficients below `DROP_REL` times the largest coefficient.
    pub fn prune(&mut self) {
        let thr = DROP_REL * self.max_coeff_norm();
        self.terms.retain(|_, c| c.norm() > thr && c.norm() > 0.0);
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            *terms.entry(e.clone()).or_insert(C64::new(0.0, 0.0)) += c;
        }
        let mut p = MPoly {
            nvars: self.nvars,
            terms,
        };
        p.prune();
        p
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> MPoly {
        let mut p = MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        };
        p.prune();
        p
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut terms: BTreeMap<Vec<u32>, C64> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *terms.entry(e).or_insert(C64::new(0.0, 0.0)) += c1 * c2;
            }
        }
        let mut p = MPoly {
            nvars: self.nvars,
            terms,
        };
        p.prune();
        p
    }

    pub fn pow(&self, k: usize) -> MPoly {
        let mut acc = MPoly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn map_coeffs(&self, f: impl Fn(C64) -> C64) -> MPoly {
        let mut p = MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), f(*c))).collect(),
        };
        p.prune();
        p
    }

    /// Evaluation at a scalar point, with per-variable power caching.
    pub fn eval(&self, point: &[C64]) -> Result<C64> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut powers: Vec<Vec<C64>> = Vec::with_capacity(self.nvars);
        for v in 0..self.nvars {
            let d = self.degree_in(v);
            let mut pw = Vec::with_capacity(d + 1);
            let mut acc = C64::new(1.0, 0.0);
            for _ in 0..=d {
                pw.push(acc);
                acc *= point[v];
            }
            powers.push(pw);
        }
        let mut sum = C64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = *c;
            for (v, &k) in e.iter().enumerate() {
                t *= powers[v][k as usize];
            }
            sum += t;
        }
        Ok(sum)
    }

    /// Substitute `z_j -> T_j` for a commuting tuple; the constant term
    /// multiplies the identity.
    pub fn eval_matrix_tuple(&self, t: &CommutingTuple) -> Result<CMatrix> {
        if t.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: t.len(),
            });
        }
        self.eval_matrices(t.mats())
    }

    /// Same as [`eval_matrix_tuple`](Self::eval_matrix_tuple) but without a
    /// commutativity certificate; the caller vouches for commutativity.
    pub fn eval_matrices(&self, mats: &[CMatrix]) -> Result<CMatrix> {
        if mats.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: mats.len(),
            });
        }
        let n = mats.first().map(|m| m.dim()).unwrap_or(1);
        let mut powers: Vec<Vec<CMatrix>> = Vec::with_capacity(self.nvars);
        for v in 0..self.nvars {
            let d = self.degree_in(v);
            let mut pw = Vec::with_capacity(d + 1);
            pw.push(CMatrix::identity(n));
            for k in 1..=d {
                let next = pw[k - 1].mul(&mats[v]);
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut sum = CMatrix::zeros(n);
        for (e, c) in &self.terms {
            let mut t = CMatrix::identity(n);
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&powers[v][k as usize]);
                }
            }
            sum = sum.add(&t.scale_c(*c));
        }
        Ok(sum)
    }

    /// Leading term under lexicographic exponent order.
    pub fn leading_term_lex(&self) -> Option<(&Vec<u32>, C64)> {
        self.terms.iter().next_back().map(|(e, c)| (e, *c))
    }

    /// Divide by the lexicographic leading coefficient.
    pub fn monic_lex(&self) -> MPoly {
        match self.leading_term_lex() {
            Some((_, c)) if c.norm() > 0.0 => self.scale(C64::new(1.0, 0.0) / c),
            _ => self.clone(),
        }
    }
}

/// Square grid of polynomials sharing the variable count.
#[derive(Debug, Clone)]
pub struct PolyMatrix {
    n: usize,
    nvars: usize,
    entries: Vec<MPoly>, // row-major
}

impl PolyMatrix {
    pub fn new(n: usize, nvars: usize, entries: Vec<MPoly>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Invalid(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        if entries.iter().any(|p| p.nvars() != nvars) {
            return Err(Error::Invalid("entries do not share nvars".into()));
        }
        Ok(PolyMatrix { n, nvars, entries })
    }

    pub fn from_fn(n: usize, nvars: usize, mut f: impl FnMut(usize, usize) -> MPoly) -> Self {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        PolyMatrix { n, nvars, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn entry(&self, i: usize, j: usize) -> &MPoly {
        &self.entries[i * self.n + j]
    }

    pub fn eval(&self, point: &[C64]) -> Result<CMatrix> {
        let mut m = DMatrix::<C64>::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(i, j)] = self.entry(i, j).eval(point)?;
            }
        }
        CMatrix::new(m)
    }
}

/// Determinant of a polynomial matrix via evaluation at tensor-product
/// roots-of-unity grids and multidimensional inverse DFT.
pub fn det_poly_matrix(m: &PolyMatrix) -> Result<MPoly> {
    det_poly_matrix_capped(m, DET_DEGREE_CAP)
}

pub fn det_poly_matrix_capped(m: &PolyMatrix, cap: usize) -> Result<MPoly> {
    let nvars = m.nvars();
    if m.n() == 0 {
        return Ok(MPoly::one(nvars));
    }
    // per-variable degree bound of the determinant: sum over rows of the
    // max entry degree in that variable
    let mut bounds = vec![0usize; nvars];
    for v in 0..nvars {
        for i in 0..m.n() {
            let row_max = (0..m.n()).map(|j| m.entry(i, j).degree_in(v)).max().unwrap_or(0);
            bounds[v] += row_max;
        }
    }
    let total: usize = bounds.iter().sum();
    if total > cap {
        return Err(Error::DegreeOverflow {
            degree: total,
            cap,
        });
    }
    let sizes: Vec<usize> = bounds.iter().map(|b| b + 1).collect();
    let grid_len: usize = sizes.iter().product();
    if grid_len > 1_000_000 {
        return Err(Error::DegreeOverflow {
            degree: grid_len,
            cap: 1_000_000,
        });
    }
    let roots: Vec<Vec<C64>> = sizes
        .iter()
        .map(|&mv| {
            (0..mv)
                .map(|k| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / mv as f64))
                .collect()
        })
        .collect();
    // evaluate on the full grid (row-major over mixed-radix index)
    let mut values = vec![C64::new(0.0, 0.0); grid_len];
    let mut idx = vec![0usize; nvars];
    for flat in 0..grid_len {
        let point: Vec<C64> = (0..nvars).map(|v| roots[v][idx[v]]).collect();
        values[flat] = det(&m.eval(&point)?);
        // increment mixed-radix counter, last variable fastest
        for v in (0..nvars).rev() {
            idx[v] += 1;
            if idx[v] < sizes[v] {
                break;
            }
            idx[v] = 0;
        }
    }
    // inverse DFT along each axis
    let mut data = values;
    for v in (0..nvars).rev() {
        let mv = sizes[v];
        let stride: usize = sizes[v + 1..].iter().product();
        let block = mv * stride;
        let mut out = data.clone();
        for base in (0..grid_len).step_by(block) {
            for off in 0..stride {
                for k in 0..mv {
                    let mut acc = C64::new(0.0, 0.0);
                    for j in 0..mv {
                        let w = C64::from_polar(
                            1.0,
                            -2.0 * std::f64::consts::PI * (k * j % mv) as f64 / mv as f64,
                        );
                        acc += data[base + j * stride + off] * w;
                    }
                    out[base + k * stride + off] = acc / mv as f64;
                }
            }
        }
        data = out;
    }
    // collect coefficients
    let mut terms: Vec<(Vec<u32>, C64)> = Vec::new();
    let mut idx = vec![0usize; nvars];
    for flat in 0..grid_len {
        let c = data[flat];
        if c.norm() > 0.0 {
            terms.push((idx.iter().map(|&k| k as u32).collect(), c));
        }
        for v in (0..nvars).rev() {
            idx[v] += 1;
            if idx[v] < sizes[v] {
                break;
            }
            idx[v] = 0;
        }
    }
    Ok(MPoly::from_terms(nvars, terms))
}

// ---------------------------------------------------------------------------
// approximate bivariate GCD
// ---------------------------------------------------------------------------

/// Univariate coefficients of a bivariate polynomial in the `main` variable,
/// with the other variable specialized at `t`.
fn specialize(p: &MPoly, main: usize, t: C64) -> Vec<C64> {
    let other = 1 - main;
    let d = p.degree_in(main);
    let mut coeffs = vec![C64::new(0.0, 0.0); d + 1];
    for (e, c) in p.terms() {
        coeffs[e[main] as usize] += c * t.powu(e[other]);
    }
    coeffs
}

fn trim_trailing(coeffs: &mut Vec<C64>) {
    let maxn = coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    let thr = 1e-10 * maxn;
    while coeffs.len() > 1 && coeffs.last().unwrap().norm() <= thr {
        coeffs.pop();
    }
}

/// Numerical gcd degree of two univariate polynomials from the Sylvester
/// matrix rank. Returns None when the singular-value gap is ambiguous.
fn sylvester_gcd_degree(a: &[C64], b: &[C64], tol: f64) -> Option<usize> {
    let m = a.len() - 1;
    let n = b.len() - 1;
    if m == 0 || n == 0 {
        return Some(0);
    }
    let na = a.iter().fold(0.0f64, |s, c| s.max(c.norm())).max(1e-300);
    let nb = b.iter().fold(0.0f64, |s, c| s.max(c.norm())).max(1e-300);
    let size = m + n;
    let mut s = DMatrix::<C64>::zeros(size, size);
    for r in 0..n {
        for (k, c) in a.iter().enumerate() {
            s[(r, r + k)] = c / na;
        }
    }
    for r in 0..m {
        for (k, c) in b.iter().enumerate() {
            s[(n + r, r + k)] = c / nb;
        }
    }
    let mut sv: Vec<f64> = s.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let smax = sv.first().copied().unwrap_or(0.0).max(1.0);
    let thr = tol * smax;
    if sv.iter().any(|&x| x > thr && x < 10.0 * thr) {
        return None;
    }
    let rank = sv.iter().filter(|&&x| x > thr).count();
    Some(size - rank)
}

/// Gcd degree of `p`, `q` with respect to variable `main`, estimated at
/// generic specializations of the other variable.
fn gcd_degree_in(p: &MPoly, q: &MPoly, main: usize, tol: f64) -> Result<usize> {
    let samples = [
        C64::from_polar(0.7311, 0.913),
        C64::from_polar(0.8421, 2.517),
        C64::from_polar(0.6133, 4.201),
        C64::from_polar(0.9277, 5.733),
        C64::from_polar(0.5581, 1.379),
    ];
    let mut degrees = Vec::new();
    for &t in &samples {
        let mut a = specialize(p, main, t);
        let mut b = specialize(q, main, t);
        trim_trailing(&mut a);
        trim_trailing(&mut b);
        if let Some(g) = sylvester_gcd_degree(&a, &b, tol) {
            degrees.push(g);
        }
    }
    if degrees.is_empty() {
        return Err(Error::GcdIndeterminate { tol });
    }
    // specialization can only inflate the common-root count, so the generic
    // value is the minimum
    Ok(degrees.into_iter().min().unwrap())
}

fn monomials(d1: usize, d2: usize) -> Vec<(u32, u32)> {
    let mut v = Vec::with_capacity((d1 + 1) * (d2 + 1));
    for e1 in 0..=d1 as u32 {
        for e2 in 0..=d2 as u32 {
            v.push((e1, e2));
        }
    }
    v
}

fn poly_to_vec(p: &MPoly, d1: usize, d2: usize) -> DVector<C64> {
    let mut v = DVector::<C64>::zeros((d1 + 1) * (d2 + 1));
    for (e, c) in p.terms() {
        let (a, b) = (e[0] as usize, e[1] as usize);
        debug_assert!(a <= d1 && b <= d2);
        v[a * (d2 + 1) + b] = *c;
    }
    v
}

fn monomial_poly(e1: u32, e2: u32) -> MPoly {
    MPoly::from_terms(2, [(vec![e1, e2], C64::new(1.0, 0.0))])
}

/// Least-squares division: the minimizer of `|| d * x - p ||` over
/// polynomials `x` of bidegree `(d1, d2)`, plus the relative residual.
fn lsq_divide(p: &MPoly, d: &MPoly, d1: usize, d2: usize) -> (MPoly, f64) {
    let r1 = d.degree_in(0) + d1;
    let r2 = d.degree_in(1) + d2;
    let rows = (r1 + 1) * (r2 + 1);
    let cols = (d1 + 1) * (d2 + 1);
    let mut m = DMatrix::<C64>::zeros(rows, cols);
    for (k, &(e1, e2)) in monomials(d1, d2).iter().enumerate() {
        let col = d.mul(&monomial_poly(e1, e2));
        m.set_column(k, &poly_to_vec(&col, r1, r2));
    }
    let rhs = poly_to_vec(p, r1, r2);
    let svd = m.clone().svd(true, true);
    let x = svd.solve(&rhs, 1e-13).expect("svd solve");
    let res = (&m * &x - &rhs).norm() / rhs.norm().max(1e-300);
    let quotient = MPoly::from_terms(
        2,
        monomials(d1, d2)
            .into_iter()
            .enumerate()
            .map(|(k, (e1, e2))| (vec![e1, e2], x[k])),
    );
    (quotient, res)
}

fn gcd_candidate(p: &MPoly, q: &MPoly, g1: usize, g2: usize) -> Option<(MPoly, f64)> {
    let (dp1, dp2) = (p.degree_in(0), p.degree_in(1));
    let (dq1, dq2) = (q.degree_in(0), q.degree_in(1));
    if g1 > dp1.min(dq1) || g2 > dp2.min(dq2) {
        return None;
    }
    // cofactors: p = G v, q = G u; p u - q v = 0 gives a null vector
    let (du1, du2) = (dq1 - g1, dq2 - g2);
    let (dv1, dv2) = (dp1 - g1, dp2 - g2);
    let (r1, r2) = (dp1 + du1, dp2 + du2);
    let rows = (r1 + 1) * (r2 + 1);
    let u_mons = monomials(du1, du2);
    let v_mons = monomials(dv1, dv2);
    let cols = u_mons.len() + v_mons.len();
    let mut m = DMatrix::<C64>::zeros(rows, cols);
    for (k, &(e1, e2)) in u_mons.iter().enumerate() {
        m.set_column(k, &poly_to_vec(&p.mul(&monomial_poly(e1, e2)), r1, r2));
    }
    for (k, &(e1, e2)) in v_mons.iter().enumerate() {
        m.set_column(
            u_mons.len() + k,
            &poly_to_vec(&q.mul(&monomial_poly(e1, e2)).scale(C64::new(-1.0, 0.0)), r1, r2),
        );
    }
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.as_ref().unwrap();
    // smallest right singular vector
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].partial_cmp(&svd.singular_values[j]).unwrap());
    let null = vt.row(order[0]).adjoint();
    let u = MPoly::from_terms(
        2,
        u_mons.iter().enumerate().map(|(k, &(e1, e2))| (vec![e1, e2], null[k])),
    );
    let v = MPoly::from_terms(
        2,
        v_mons
            .iter()
            .enumerate()
            .map(|(k, &(e1, e2))| (vec![e1, e2], null[u_mons.len() + k])),
    );
    // recover G from the larger cofactor, check against both inputs
    let (g_est, _) = if v.coeff_norm() >= u.coeff_norm() {
        lsq_divide(p, &v, g1, g2)
    } else {
        lsq_divide(q, &u, g1, g2)
    };
    if g_est.is_zero() {
        return None;
    }
    let g_est = g_est.monic_lex();
    let (_, rp) = lsq_divide(p, &g_est, dp1 - g1, dp2 - g2);
    let (_, rq) = lsq_divide(q, &g_est, dq1 - g1, dq2 - g2);
    Some((g_est, rp.max(rq)))
}

/// Approximate gcd of two bivariate polynomials, monic under the
/// lexicographic leading term. Returns the constant 1 when the
/// Sylvester rank test certifies coprimality at tolerance `tol`.
pub fn approx_gcd_bivariate(p: &MPoly, q: &MPoly, tol: f64) -> Result<MPoly> {
    if p.nvars() != 2 || q.nvars() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: p.nvars().max(q.nvars()),
        });
    }
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g1 = gcd_degree_in(p, q, 0, tol)?;
    let g2 = gcd_degree_in(p, q, 1, tol)?;
    if g1 == 0 && g2 == 0 {
        return Ok(MPoly::one(2));
    }
    let accept = tol.sqrt().max(1e-7);
    // start at the estimated bidegree and back off if the division residual
    // rejects the candidate
    let mut candidates = vec![(g1, g2)];
    for k in 1..=g2 {
        candidates.push((g1, g2 - k));
    }
    for k in 1..=g1 {
        candidates.push((g1 - k, g2));
    }
    for (c1, c2) in candidates {
        if c1 == 0 && c2 == 0 {
            break;
        }
        if let Some((g, res)) = gcd_candidate(p, q, c1, c2) {
            if res <= accept {
                return Ok(g);
            }
        }
    }
    Err(Error::GcdIndeterminate { tol })
}
