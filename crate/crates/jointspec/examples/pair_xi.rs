//! Defining polynomials of a pair model: p_i(z1,z2) = det(phi_i(z1 z2) - z_i I)
//! and their common factor xi, which cuts out the variety. Shown for the swap
//! pair (xi = z1 - z2) and the P = I case (xi = product of (z2 - conj(w_i))).

use jointspec::bcl_model::{bcl_pair_from, pair_defining_polys, sample_variety, xi_vanishing_residual};
use jointspec::grid::DiskGrid;
use jointspec::matrix_core::{CMatrix, C64};
use jointspec::mpoly::MPoly;

fn show(p: &MPoly, name: &str) {
    let terms: Vec<String> = p
        .terms()
        .map(|(e, c)| format!("({:+.3}{:+.3}i) z1^{} z2^{}", c.re, c.im, e[0], e[1]))
        .collect();
    println!("{name} = {}", terms.join(" + "));
}

fn main() -> jointspec::Result<()> {
    // swap pair
    let p = CMatrix::diagonal(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    let u = CMatrix::from_fn(2, |r, c| {
        if r + c == 1 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let b = bcl_pair_from(&p, &u)?;
    let (p1, p2, xi) = pair_defining_polys(&b, 1e-9)?;
    show(&p1, "p1");
    show(&p2, "p2");
    show(&xi, "xi");
    let sample = sample_variety(&b, &DiskGrid::new(16, 32), 0);
    println!(
        "xi vanishes on the sampled cloud: residual {:.3e}\n",
        xi_vanishing_residual(&sample, &xi)?
    );

    // P = I with a diagonal unitary: the variety is a union of flat fibers
    let w1 = C64::from_polar(1.0, 0.8);
    let w2 = C64::from_polar(1.0, -1.9);
    let bi = bcl_pair_from(&CMatrix::identity(2), &CMatrix::diagonal(&[w1, w2]))?;
    let (_, _, xi_i) = pair_defining_polys(&bi, 1e-9)?;
    show(&xi_i, "xi (P = I)");
    let sample_i = sample_variety(&bi, &DiskGrid::new(16, 32), 0);
    println!(
        "xi vanishes on the flat-fiber cloud: residual {:.3e}",
        xi_vanishing_residual(&sample_i, &xi_i)?
    );
    Ok(())
}
