//! The swap pair P = diag(1,0), U = [[0,1],[1,0]] generates the model pair
//! phi_1(z) = phi_2(z) = [[0,z],[1,0]]. Its sampled joint-spectrum cloud is
//! the diagonal {(s,s) : |s| <= 1} -- a distinguished variety -- and both
//! pencils are pure. Writes cloud.csv and plot.svg to ./out.

use jointspec::bcl_model::{
    bcl_pair_from, distinguished_check, purity_check, sample_variety, DEFAULT_N_POWERS,
};
use jointspec::grid::DiskGrid;
use jointspec::matrix_core::{CMatrix, C64};

fn main() -> jointspec::Result<()> {
    let p = CMatrix::diagonal(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    let u = CMatrix::from_fn(2, |r, c| {
        if r + c == 1 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let b = bcl_pair_from(&p, &u)?;
    let grid = DiskGrid::new(32, 64);
    println!("product-law residual: {:.3e}", b.product_law_residual(&grid));

    for j in 0..2 {
        let r = purity_check(&b, j, DEFAULT_N_POWERS)?;
        println!(
            "pencil {j}: nu = {:.4}, ||A^{}|| = {:.3e} -> {}",
            r.nu,
            DEFAULT_N_POWERS,
            r.power_norm,
            if r.pure { "pure" } else { "not pure" }
        );
    }

    let sample = sample_variety(&b, &grid, 0);
    println!(
        "sampled {} variety points ({} grid points skipped)",
        sample.points.len(),
        sample.skipped
    );
    println!(
        "max joint-eigenvector residual: {:.3e}, max |l1 l2 - z|: {:.3e}",
        sample.max_residual(),
        sample.max_product_residual()
    );

    let dist = distinguished_check(&sample, 1e-3);
    println!(
        "distinguished: {} ({} boundary witnesses)",
        dist.is_distinguished,
        dist.witnesses.len()
    );

    std::fs::create_dir_all("out")?;
    jointspec::io::write_cloud_csv(&sample, std::path::Path::new("out/cloud.csv"))?;
    jointspec::plot::write_cloud_svg(&sample, std::path::Path::new("out/plot.svg"))?;
    println!("wrote out/cloud.csv and out/plot.svg");
    Ok(())
}
