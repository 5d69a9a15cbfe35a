//! Paired comparison of two- and three-qubit phase registers on the same instances.

use ses_forge::hhl::paired_m2_m3;

fn main() -> ses_forge::Result<()> {
    for n in [2, 3, 4] {
        let p = paired_m2_m3(n, 100, 5)?;
        println!(
            "n={n}  E(m=2)={:.4}  E(m=3)={:.4}  diff={:.4} ± {:.4}",
            p.mean_m2, p.mean_m3, p.mean_diff, p.stderr_diff
        );
    }
    Ok(())
}
