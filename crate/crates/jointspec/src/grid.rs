//! Polar sampling grids on the closed unit disk and tensor grids on polydisks.

use num_complex::Complex64;

use crate::matrix_core::C64;

/// Polar grid on the closed disk. Radii are spaced quadratically, which
/// concentrates rings near 0 where algebraic branches like z -> sqrt(z) move
/// fastest; the outermost ring sits exactly at |z| = 1 so boundary statements
/// are sampled on the unit circle itself.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskGrid {
    pub radii: usize,
    pub angles: usize,
}

pub const DEFAULT_RADII: usize = 64;
pub const DEFAULT_ANGLES: usize = 256;

impl Default for DiskGrid {
    fn default() -> Self {
        DiskGrid {
            radii: DEFAULT_RADII,
            angles: DEFAULT_ANGLES,
        }
    }
}

impl DiskGrid {
    pub fn new(radii: usize, angles: usize) -> Self {
        assert!(radii >= 1 && angles >= 1);
        DiskGrid { radii, angles }
    }

    /// r_k = (k/(R-1))^2 for k = 0..R-1; r_{R-1} = 1 exactly. For R = 1 the
    /// single ring is the boundary.
    pub fn radius(&self, k: usize) -> f64 {
        if self.radii == 1 {
            1.0
        } else {
            let t = k as f64 / (self.radii - 1) as f64;
            t * t
        }
    }

    pub fn len(&self) -> usize {
        // r = 0 collapses the whole angle ring to one point
        if self.radii == 1 {
            self.angles
        } else {
            (self.radii - 1) * self.angles + 1
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid points in a fixed deterministic order: center first (when
    /// present), then rings inside out, each ring by increasing angle.
    pub fn points(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.len());
        let first_ring = if self.radii == 1 {
            0
        } else {
            out.push(Complex64::new(0.0, 0.0));
            1
        };
        for k in first_ring..self.radii {
            let r = self.radius(k);
            for a in 0..self.angles {
                let theta = 2.0 * std::f64::consts::PI * a as f64 / self.angles as f64;
                out.push(Complex64::from_polar(r, theta));
            }
        }
        out
    }

    /// Points on the unit circle only.
    pub fn boundary_points(&self) -> Vec<C64> {
        (0..self.angles)
            .map(|a| {
                let theta = 2.0 * std::f64::consts::PI * a as f64 / self.angles as f64;
                Complex64::from_polar(1.0, theta)
            })
            .collect()
    }

    pub fn spec_string(&self) -> String {
        format!(
            "polar disk grid, {} radii (quadratic spacing, boundary ring at |z|=1) x {} angles",
            self.radii, self.angles
        )
    }
}

/// Tensor product of per-coordinate disk grids on D^d, capped in total size.
#[derive(Debug, Clone)]
pub struct PolyDiskGrid {
    pub d: usize,
    pub per_axis: DiskGrid,
}

pub const POLYGRID_CAP: usize = 1_000_000;

impl PolyDiskGrid {
    pub fn new(d: usize, per_axis: DiskGrid) -> Self {
        assert!(d >= 1);
        let g = PolyDiskGrid { d, per_axis };
        assert!(g.len() <= POLYGRID_CAP, "polydisk grid exceeds point cap");
        g
    }

    pub fn len(&self) -> usize {
        self.per_axis.len().pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<Vec<C64>> {
        let axis = self.per_axis.points();
        let mut out = vec![Vec::new()];
        for _ in 0..self.d {
            let mut next = Vec::with_capacity(out.len() * axis.len());
            for p in &out {
                for z in &axis {
                    let mut q = p.clone();
                    q.push(*z);
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }

    pub fn spec_string(&self) -> String {
        format!("tensor of {} per axis, d={}", self.per_axis.spec_string(), self.d)
    }
}
