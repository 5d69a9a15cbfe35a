//! Factor a Haar-random unitary as `e^{-iA} e^{-iB} e^{iA}` with real symmetric `A`, `B`.

use ses_forge::numerics::{aba_decompose, frobenius_distance, haar_unitary, rng_from_seed};

fn main() -> ses_forge::Result<()> {
    let mut rng = rng_from_seed(7);
    for n in [2, 4, 8, 16] {
        let v = haar_unitary(n, &mut rng);
        let d = aba_decompose(&v)?;
        let err = frobenius_distance(&d.reconstruct(), v.matrix());
        println!(
            "n={n:2}  max|A|={:.3}  max|B|={:.3}  residual={err:.2e}",
            d.a.max_abs(),
            d.b.max_abs()
        );
    }
    Ok(())
}
