//! Mean algorithm error against system size for a three-qubit phase register.

use ses_forge::hhl::sweep_fig7;

fn main() -> ses_forge::Result<()> {
    let ns: Vec<usize> = (2..=8).collect();
    println!("  n  mean E    stderr   p(postselect)");
    for r in sweep_fig7(&ns, 3, 40, 2024)? {
        println!("{:3}  {:.4}  {:.4}   {:.4}", r.n, r.mean_e_algorithm, r.stderr, r.mean_p_postselect);
    }
    Ok(())
}
