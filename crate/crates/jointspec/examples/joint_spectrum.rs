//! Joint eigenvalues of a commuting pair: build (A, A^2 + A/2) from a random
//! 4x4 matrix, triangularize simultaneously, and list the aligned diagonal.

use jointspec::matrix_core::{random_matrix, C64};
use jointspec::tuple_spectrum::{joint_eigenvalues, CommutingTuple};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> jointspec::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let a = random_matrix(4, &mut rng);
    let b = a.mul(&a).add(&a.scale_c(C64::new(0.5, 0.0)));
    let t = CommutingTuple::new(vec![a, b])?;
    println!("commutativity residual: {:.3e}", t.comm_residual());

    let spec = joint_eigenvalues(&t)?;
    println!("triangularization residual: {:.3e}", spec.residual);
    println!("joint eigenvalues (lambda_1, lambda_2):");
    for p in &spec.points {
        println!(
            "  ({:+.6}{:+.6}i, {:+.6}{:+.6}i)",
            p[0].re, p[0].im, p[1].re, p[1].im
        );
        // the second coordinate is the image of the first under z^2 + z/2
        let expect = p[0] * p[0] + p[0] * 0.5;
        assert!((p[1] - expect).norm() < 1e-7);
    }
    println!("spectral mapping lambda_2 = lambda_1^2 + lambda_1/2 verified.");
    Ok(())
}
