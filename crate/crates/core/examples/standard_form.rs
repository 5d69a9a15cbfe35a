//! Compile a real symmetric generator into a single SES segment.

use ses_forge::compiler::{schedule_sym_unitary, standard_form, Sign};
use ses_forge::device::{total_duration, DeviceGraph};
use ses_forge::numerics::{random_symmetric, rng_from_seed};

fn main() -> ses_forge::Result<()> {
    let gmax = 50e6;
    let a = random_symmetric(4, &mut rng_from_seed(3));
    let sf = standard_form(&a, gmax);
    println!("theta = {:.6} rad, c = {:.6}, t = {:.3} ns", sf.theta, sf.c, sf.t_s * 1e9);
    println!("K = {}", sf.k.matrix());

    let graph = DeviceGraph::with_ancillas(4, 0, 5.5e9, gmax)?;
    let sched = schedule_sym_unitary(&a, Sign::Minus, &graph)?;
    println!("{} segment(s), {:.3} ns total", sched.len(), total_duration(&sched) * 1e9);
    Ok(())
}
