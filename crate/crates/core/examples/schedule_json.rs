//! Serialize a controlled-unitary schedule and an HHL instance and read them back.

use ses_forge::compiler::{schedule_controlled_unitary, CnotMode, ControlledUnitarySpec};
use ses_forge::device::{DeviceGraph, Schedule};
use ses_forge::hhl::{random_hhl_instance, HhlInstance};
use ses_forge::numerics::{haar_unitary, rng_from_seed};

fn main() -> ses_forge::Result<()> {
    let g = DeviceGraph::with_ancillas(3, 1, 5.5e9, 50e6)?;
    let u = haar_unitary(3, &mut rng_from_seed(1));
    let sched = schedule_controlled_unitary(&ControlledUnitarySpec::new(u, 3)?, &g, &CnotMode::Ideal)?;
    let text = sched.to_json()?;
    let back = Schedule::from_json(&text)?;
    println!("schedule: {} segments, {} bytes, round trip equal: {}", sched.len(), text.len(), back == sched);
    println!("{}", &text[..text.len().min(400)]);

    let inst = random_hhl_instance(2, 2, 2, 9)?;
    let json = inst.to_json()?;
    println!("instance: {json}");
    println!("round trip equal: {}", HhlInstance::from_json(&json)? == inst);
    Ok(())
}
