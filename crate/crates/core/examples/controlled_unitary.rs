//! Apply a random unitary conditioned on an ancilla and check the result
//! at the abstract level and on the two-level device model.

use ses_forge::device::DeviceGraph;
use ses_forge::numerics::{haar_state, haar_unitary, rng_from_seed};
use ses_forge::simulator::{run_protocol_check, EvolveOptions, Level};

fn main() -> ses_forge::Result<()> {
    let mut rng = rng_from_seed(11);
    for n in 2..=5 {
        let g = DeviceGraph::with_ancillas(n, 1, 5.5e9, 50e6)?;
        let u = haar_unitary(n, &mut rng);
        let psi = haar_state(n, &mut rng);
        let ab = haar_state(2, &mut rng);
        let opts = EvolveOptions::default();
        let abs = run_protocol_check(&u, &psi, ab[0], ab[1], &g, Level::Abstract, &opts)?;
        let dev = run_protocol_check(&u, &psi, ab[0], ab[1], &g, Level::TwoLevel, &opts)?;
        let rwa = run_protocol_check(&u, &psi, ab[0], ab[1], &g, Level::TwoLevel, &EvolveOptions::rotating_wave())?;
        println!("n={n}  abstract F={abs:.12}  device F={dev:.6}  rotating-wave F={rwa:.9}");
    }
    Ok(())
}
