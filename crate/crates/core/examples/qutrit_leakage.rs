//! Entangler error as the anharmonicity grows, compared with the two-level limit.

use ses_forge::compiler::EntanglerParams;
use ses_forge::simulator::{entangler_gate_error, DriveCoupling, ErrorMode, QutritModel};

fn main() -> ses_forge::Result<()> {
    let mode = ErrorMode::SubspaceAverage;
    for eta in [200e6, 300e6, 500e6, 1e9] {
        let p = EntanglerParams::new(2, 5.5e9, 30e-9, 2, eta)?;
        let model = QutritModel::new(eta, DriveCoupling::QubitTransition)?;
        let r = entangler_gate_error(&p, &model, &mode)?;
        println!("eta = {:5.0} MHz  E_gate = {:.4}  (dt = {:.2e} s)", eta / 1e6, r.e_gate, r.dt_s);
    }
    let p = EntanglerParams::new(2, 5.5e9, 30e-9, 2, 300e6)?;
    let r = entangler_gate_error(&p, &QutritModel::two_level(), &mode)?;
    println!("two-level  E_gate = {:.4}", r.e_gate);
    Ok(())
}
