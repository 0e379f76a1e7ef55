//! On-disk formats: JSON schemas for matrices, polynomials, tuples, BCL data,
//! rational symbols and ideals, plus the variety-cloud CSV.

use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bcl_model::{BCLData, VarietySample};
use crate::error::{Error, Result};
use crate::matrix_core::{CMatrix, C64};
use crate::mpoly::{MPoly, PolyMatrix};
use crate::rational_symbols::{RationalMatrixFunction, SymbolFamily, UnionSample};
use crate::tuple_spectrum::CommutingTuple;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let n = m.dim();
        MatrixJson {
            n,
            re: (0..n).map(|r| (0..n).map(|c| m[(r, c)].re).collect()).collect(),
            im: (0..n).map(|r| (0..n).map(|c| m[(r, c)].im).collect()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.re.len() != self.n
            || self.im.len() != self.n
            || self.re.iter().chain(self.im.iter()).any(|row| row.len() != self.n)
        {
            return Err(Error::Invalid(format!(
                "matrix entries do not form an {0}x{0} grid",
                self.n
            )));
        }
        CMatrix::new(DMatrix::from_fn(self.n, self.n, |r, c| {
            C64::new(self.re[r][c], self.im[r][c])
        }))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyJson {
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    pub fn from_poly(p: &MPoly) -> Self {
        PolyJson {
            nvars: p.nvars(),
            terms: p
                .terms()
                .map(|(e, c)| TermJson {
                    exp: e.clone(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Result<MPoly> {
        if self.terms.iter().any(|t| t.exp.len() != self.nvars) {
            return Err(Error::Invalid(
                "term exponent length does not match nvars".into(),
            ));
        }
        Ok(MPoly::from_terms(
            self.nvars,
            self.terms
                .iter()
                .map(|t| (t.exp.clone(), C64::new(t.re, t.im))),
        ))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TupleJson {
    pub d: usize,
    pub mats: Vec<MatrixJson>,
}

impl TupleJson {
    pub fn from_tuple(t: &CommutingTuple) -> Self {
        TupleJson {
            d: t.len(),
            mats: t.mats().iter().map(MatrixJson::from_matrix).collect(),
        }
    }

    pub fn to_tuple(&self) -> Result<CommutingTuple> {
        if self.mats.len() != self.d {
            return Err(Error::Invalid(format!(
                "tuple declares d={} but has {} matrices",
                self.d,
                self.mats.len()
            )));
        }
        CommutingTuple::new(
            self.mats
                .iter()
                .map(|m| m.to_matrix())
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BclJson {
    pub n: usize,
    pub d: usize,
    pub projections: Vec<MatrixJson>,
    pub unitaries: Vec<MatrixJson>,
}

impl BclJson {
    pub fn from_bcl(b: &BCLData) -> Self {
        BclJson {
            n: b.n(),
            d: b.d(),
            projections: b.projections().iter().map(MatrixJson::from_matrix).collect(),
            unitaries: b.unitaries().iter().map(MatrixJson::from_matrix).collect(),
        }
    }

    pub fn to_bcl(&self) -> Result<BCLData> {
        BCLData::new(
            self.projections
                .iter()
                .map(|m| m.to_matrix())
                .collect::<Result<Vec<_>>>()?,
            self.unitaries
                .iter()
                .map(|m| m.to_matrix())
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymbolJson {
    pub n: usize,
    pub d: usize,
    pub numerator: Vec<Vec<PolyJson>>,
    pub denominator: PolyJson,
}

impl SymbolJson {
    pub fn from_symbol(s: &RationalMatrixFunction) -> Self {
        let n = s.n();
        SymbolJson {
            n,
            d: s.d(),
            numerator: (0..n)
                .map(|r| {
                    (0..n)
                        .map(|c| PolyJson::from_poly(s.numerator().entry(r, c)))
                        .collect()
                })
                .collect(),
            denominator: PolyJson::from_poly(s.denominator()),
        }
    }

    pub fn to_symbol(&self, grid: &crate::grid::PolyDiskGrid) -> Result<RationalMatrixFunction> {
        if self.numerator.len() != self.n
            || self.numerator.iter().any(|row| row.len() != self.n)
        {
            return Err(Error::Invalid("numerator is not an n x n grid".into()));
        }
        let entries = self
            .numerator
            .iter()
            .flatten()
            .map(|p| p.to_poly())
            .collect::<Result<Vec<_>>>()?;
        let pm = PolyMatrix::new(self.n, self.d, entries)?;
        RationalMatrixFunction::new(pm, self.denominator.to_poly()?, grid)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymbolFamilyJson {
    pub symbols: Vec<SymbolJson>,
}

impl SymbolFamilyJson {
    pub fn to_family(&self, grid: &crate::grid::PolyDiskGrid) -> Result<SymbolFamily> {
        SymbolFamily::new(
            self.symbols
                .iter()
                .map(|s| s.to_symbol(grid))
                .collect::<Result<Vec<_>>>()?,
            grid,
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdealJson {
    pub nvars: usize,
    pub generators: Vec<PolyJson>,
    /// optional probe points to test for membership
    #[serde(default)]
    pub probes: Vec<Vec<[f64; 2]>>,
}

impl IdealJson {
    pub fn to_ideal(&self) -> Result<crate::ideal_support::PolyIdeal> {
        let gens = self
            .generators
            .iter()
            .map(|p| p.to_poly())
            .collect::<Result<Vec<_>>>()?;
        if gens.iter().any(|g| g.nvars() != self.nvars) {
            return Err(Error::Invalid("generator nvars mismatch".into()));
        }
        crate::ideal_support::PolyIdeal::new(gens)
    }

    pub fn probe_points(&self) -> Vec<Vec<C64>> {
        self.probes
            .iter()
            .map(|p| p.iter().map(|c| C64::new(c[0], c[1])).collect())
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub points: Vec<Vec<ComplexJson>>,
    pub residual: f64,
}

pub fn spectrum_to_json(s: &crate::tuple_spectrum::JointSpectrum) -> SpectrumJson {
    SpectrumJson {
        points: s
            .points
            .iter()
            .map(|p| p.iter().map(|c| ComplexJson { re: c.re, im: c.im }).collect())
            .collect(),
        residual: s.residual,
    }
}

fn fmt_f64(x: f64) -> String {
    // full round-trip precision, deterministic
    format!("{:.17e}", x)
}

/// CSV columns: re_z, im_z, re_l1, im_l1, ..., residual.
pub fn write_cloud_csv(sample: &VarietySample, path: &Path) -> Result<()> {
    let d = sample.points.first().map(|p| p.lambda.len()).unwrap_or(0);
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    let mut header = vec!["re_z".to_string(), "im_z".to_string()];
    for j in 1..=d {
        header.push(format!("re_l{j}"));
        header.push(format!("im_l{j}"));
    }
    header.push("residual".into());
    writeln!(f, "{}", header.join(","))?;
    for p in &sample.points {
        let mut row = vec![fmt_f64(p.source.re), fmt_f64(p.source.im)];
        for l in &p.lambda {
            row.push(fmt_f64(l.re));
            row.push(fmt_f64(l.im));
        }
        row.push(fmt_f64(p.residual));
        writeln!(f, "{}", row.join(","))?;
    }
    Ok(())
}

/// Same CSV layout for spectrum-union clouds; the source may have several
/// coordinates (re_z1, im_z1, ...).
pub fn write_union_csv(sample: &UnionSample, path: &Path) -> Result<()> {
    let d = sample.points.first().map(|p| p.source.len()).unwrap_or(0);
    let k = sample.points.first().map(|p| p.lambda.len()).unwrap_or(0);
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    let mut header = Vec::new();
    if d == 1 {
        header.push("re_z".to_string());
        header.push("im_z".to_string());
    } else {
        for j in 1..=d {
            header.push(format!("re_z{j}"));
            header.push(format!("im_z{j}"));
        }
    }
    for j in 1..=k {
        header.push(format!("re_l{j}"));
        header.push(format!("im_l{j}"));
    }
    header.push("residual".into());
    writeln!(f, "{}", header.join(","))?;
    for p in &sample.points {
        let mut row = Vec::new();
        for z in &p.source {
            row.push(fmt_f64(z.re));
            row.push(fmt_f64(z.im));
        }
        for l in &p.lambda {
            row.push(fmt_f64(l.re));
            row.push(fmt_f64(l.im));
        }
        row.push(fmt_f64(p.residual));
        writeln!(f, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn read_json<T: for<'a> Deserialize<'a>>(path: &Path) -> Result<T> {
    let data = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&data)?)
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    Ok(())
}
