//! Solve one random 4x4 system with HHL, abstractly and on the device model.

use ses_forge::hhl::{random_hhl_instance, run_hhl, DeviceConfig, HhlLevel};

fn main() -> ses_forge::Result<()> {
    let inst = random_hhl_instance(4, 2, 2, 42)?;
    println!("A = {}", inst.a().matrix());
    let abs = run_hhl(&inst, &HhlLevel::Abstract)?;
    println!("abstract: E = {:.5}  p(postselect) = {:.4}", abs.e_algorithm, abs.p_postselect);
    let dev = run_hhl(&inst, &HhlLevel::Device(DeviceConfig::default()))?;
    println!(
        "device:   E = {:.5}  p(postselect) = {:.4}  schedule = {:.1} ns",
        dev.e_algorithm,
        dev.p_postselect,
        dev.schedule_time_s.unwrap_or(0.0) * 1e9
    );
    Ok(())
}
