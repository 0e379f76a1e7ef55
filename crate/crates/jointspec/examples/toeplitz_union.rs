//! Rational matrix symbols: a commuting Jordan-type family
//! phi_1(z) = (zI + N)/2, phi_2(z) = zI/2 whose spectrum union is the graph
//! {(z/2, z/2)}. xi = z1 - z2 evaluates to the nilpotent N/2, so the
//! annihilation exponent r = 2 equals the matrix size -- the sharp case.

use jointspec::cayley_hamilton::moment_curve_alphas;
use jointspec::grid::{DiskGrid, PolyDiskGrid};
use jointspec::matrix_core::C64;
use jointspec::mpoly::{MPoly, PolyMatrix};
use jointspec::rational_symbols::{
    nilpotency_annihilation_check, spectrum_union_sample, symbol_level_pa_check,
    RationalMatrixFunction, SymbolFamily,
};

fn main() -> jointspec::Result<()> {
    let half = C64::new(0.5, 0.0);
    let z = MPoly::var(1, 0);
    let grid = PolyDiskGrid::new(1, DiskGrid::new(12, 24));

    let f1 = PolyMatrix::new(
        2,
        1,
        vec![
            z.scale(half),
            MPoly::constant(1, half),
            MPoly::zero(1),
            z.scale(half),
        ],
    )?;
    let f2 = PolyMatrix::from_fn(2, 1, |r, c| if r == c { z.scale(half) } else { MPoly::zero(1) });
    let s1 = RationalMatrixFunction::new(f1, MPoly::one(1), &grid)?;
    let s2 = RationalMatrixFunction::new(f2, MPoly::one(1), &grid)?;
    let fam = SymbolFamily::new(vec![s1, s2], &grid)?;
    println!("commutativity residual: {:.3e}", fam.commutativity_residual());

    let cloud = spectrum_union_sample(&fam, &grid, 0);
    println!("spectrum-union cloud: {} points", cloud.points.len());
    let p = &cloud.points[cloud.points.len() / 2];
    println!(
        "  sample point: z = {:+.3}{:+.3}i -> lambda = ({:+.3}{:+.3}i, {:+.3}{:+.3}i)",
        p.source[0].re, p.source[0].im, p.lambda[0].re, p.lambda[0].im, p.lambda[1].re, p.lambda[1].im
    );

    let pa = symbol_level_pa_check(&fam, &moment_curve_alphas(2, 2), &grid, 1e-7)?;
    println!(
        "symbol-level p_alpha vanishing: {} (max residual {:.3e})",
        if pa.passes { "PASS" } else { "FAIL" },
        pa.max_residual
    );

    let xi = MPoly::var(2, 0).sub(&MPoly::var(2, 1));
    let nil = nilpotency_annihilation_check(&fam, &xi, &grid, 1e-10)?;
    println!(
        "xi(phi) nilpotent: {} with exponent r = {} (matrix size n = 2)",
        if nil.passes { "PASS" } else { "FAIL" },
        nil.r_used
    );
    Ok(())
}
