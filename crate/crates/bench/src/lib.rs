//! Shared fixtures for the benchmarks.

use magpt::{EffectiveModel, InitialCondition, PhysicalParams};

/// One model per phase, `Γ = 1`, `ω2 = 1`.
pub fn phase_models() -> [(&'static str, EffectiveModel); 3] {
    let at = |d: f64| EffectiveModel::from_frequencies(1.0 + d, 1.0, 1.0, 0.01);
    [("broken", at(1.0)), ("ep", at(2.0)), ("exact", at(3.0))]
}

pub fn inputs() -> [(&'static str, InitialCondition); 2] {
    [
        ("vacuum", InitialCondition::Vacuum),
        ("thermal", InitialCondition::Thermal { temperature: 1.0 }),
    ]
}

/// Three-mode device with `κ = 100Γ`.
pub fn device(detuning: f64) -> PhysicalParams {
    PhysicalParams::pt_symmetric(0.5 * detuning, -0.5 * detuning, 10.0, 100.0)
}
