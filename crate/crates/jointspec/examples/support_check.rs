//! Support of a polynomial ideal = its common zero set, and the three-way
//! identity joint spectrum = support = Koszul-singular set for the
//! annihilating family of a contractive tuple.

use jointspec::cayley_hamilton::{build_annihilators, moment_curve_alphas};
use jointspec::ideal_support::{
    support_membership, support_spectrum_identity_check, PolyIdeal,
};
use jointspec::matrix_core::{random_complex, CMatrix, C64};
use jointspec::mpoly::MPoly;
use jointspec::tuple_spectrum::CommutingTuple;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn main() -> jointspec::Result<()> {
    // the diagonal ideal <z1 - z2>
    let diag = PolyIdeal::new(vec![MPoly::var(2, 0).sub(&MPoly::var(2, 1))])?;
    println!(
        "(0.5, 0.5) in supp<z1-z2>: {}",
        support_membership(&diag, &[c(0.5), c(0.5)], 1e-8)?
    );
    println!(
        "(0.0, 1.0) in supp<z1-z2>: {}",
        support_membership(&diag, &[c(0.0), c(1.0)], 1e-8)?
    );

    // three-way identity on a contractive diagonal pair
    let t = CommutingTuple::new(vec![
        CMatrix::diagonal(&[c(0.1), c(0.2)]),
        CMatrix::diagonal(&[c(0.3), c(0.4)]),
    ])?;
    let fam = build_annihilators(&t, &moment_curve_alphas(t.len(), t.dim()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let probes: Vec<Vec<C64>> = (0..50)
        .map(|_| {
            (0..2)
                .map(|_| {
                    let w = random_complex(&mut rng);
                    w * (0.9 / (1.0 + w.norm()))
                })
                .collect()
        })
        .collect();
    let rep = support_spectrum_identity_check(&t, &fam, &probes, 1e-6)?;
    println!(
        "three-way identity on {} candidates: {} ({} inconclusive)",
        rep.checked,
        if rep.passes { "PASS" } else { "FAIL" },
        rep.inconclusive
    );
    Ok(())
}
