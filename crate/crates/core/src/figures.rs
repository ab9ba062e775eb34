//! Preset sweeps behind the four standard figures, in units of `Γ = 1`.

use serde::{Deserialize, Serialize};

use crate::dynamics::{InitialCondition, OccupationDependence};
use crate::error::Result;
use crate::export::{Cell, Table};
use crate::sweep::{sweep_entanglement, sweep_precision, EntanglementSweepSpec, Grid, SweepAxis, SweepSpec};

pub const PREFACTOR: f64 = 0.01;

/// `δ²ω1` against `Δ ∈ (2, 4]` for vacuum input at several times.
pub fn fig1_spec() -> SweepSpec {
    SweepSpec {
        coupling: 1.0,
        prefactor: PREFACTOR,
        omega2: 1.0,
        axis: SweepAxis::Detuning,
        grid: Grid::linear(2.0, 4.0, 400).open(),
        times: vec![2.0, 5.0, 10.0],
        inputs: vec![InitialCondition::Vacuum],
        occupation: OccupationDependence::Tracked,
    }
}

/// `δ²ω1` against `ω1` for a `T = 1` thermal input at several times.
pub fn fig2_spec() -> SweepSpec {
    SweepSpec {
        coupling: 1.0,
        prefactor: PREFACTOR,
        omega2: 1.0,
        axis: SweepAxis::Omega1,
        grid: Grid::linear(1.0, 6.0, 500).open(),
        times: vec![2.0, 5.0, 10.0],
        inputs: vec![InitialCondition::Thermal { temperature: 1.0 }],
        occupation: OccupationDependence::Tracked,
    }
}

/// `δ²ω1` against `ω1` at `t = 10` for several temperatures.
pub fn fig3_spec() -> SweepSpec {
    SweepSpec {
        times: vec![10.0],
        inputs: [0.5, 1.0, 2.0]
            .iter()
            .map(|&temperature| InitialCondition::Thermal { temperature })
            .collect(),
        ..fig2_spec()
    }
}

/// `ν⁻` against `t ∈ (0, 5]` for vacuum input at several detunings.
pub fn fig4_spec() -> EntanglementSweepSpec {
    EntanglementSweepSpec {
        coupling: 1.0,
        detunings: vec![0.0, 1.0, 2.0, 3.0],
        times: Grid::linear(0.0, 5.0, 500).open(),
        inputs: vec![InitialCondition::Vacuum],
    }
}

fn temperature(input: &InitialCondition) -> Cell {
    match input {
        InitialCondition::Thermal { temperature } => Cell::Num(*temperature),
        InitialCondition::Vacuum => Cell::Num(0.0),
        InitialCondition::Fock { .. } => Cell::Empty,
    }
}

pub fn fig1_table(spec: &SweepSpec) -> Result<Table> {
    let r = sweep_precision(spec)?;
    let mut t = Table::new("fig1", &["detuning", "t", "delta2_omega1"]);
    for row in &r.rows {
        t.push(vec![row.detuning.into(), row.t.into(), row.delta2_omega1.into()]);
    }
    Ok(t)
}

fn omega1_table(kind: &str, spec: &SweepSpec) -> Result<Table> {
    let r = sweep_precision(spec)?;
    let mut t = Table::new(kind, &["omega1", "T", "t", "delta2_omega1"]);
    for row in &r.rows {
        t.push(vec![
            row.omega1.into(),
            temperature(&row.input),
            row.t.into(),
            row.delta2_omega1.into(),
        ]);
    }
    Ok(t)
}

pub fn fig2_table(spec: &SweepSpec) -> Result<Table> {
    omega1_table("fig2", spec)
}

pub fn fig3_table(spec: &SweepSpec) -> Result<Table> {
    omega1_table("fig3", spec)
}

pub fn fig4_table(spec: &EntanglementSweepSpec) -> Result<Table> {
    let rows = sweep_entanglement(spec)?;
    let mut t = Table::new("fig4", &["detuning", "t", "nu_minus", "log_negativity"]);
    for r in &rows {
        t.push(vec![
            r.row.detuning.into(),
            r.row.t.into(),
            r.row.nu_minus.into(),
            r.row.log_negativity.into(),
        ]);
    }
    Ok(t)
}

/// The four figure sweeps together.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FigureSpecs {
    pub fig1: SweepSpec,
    pub fig2: SweepSpec,
    pub fig3: SweepSpec,
    pub fig4: EntanglementSweepSpec,
}

impl Default for FigureSpecs {
    fn default() -> Self {
        Self {
            fig1: fig1_spec(),
            fig2: fig2_spec(),
            fig3: fig3_spec(),
            fig4: fig4_spec(),
        }
    }
}

impl FigureSpecs {
    pub fn validate(&self) -> Result<()> {
        self.fig1.validate()?;
        self.fig2.validate()?;
        self.fig3.validate()?;
        self.fig4.validate()
    }
}

/// Every figure table keyed by its file stem.
pub fn all_figures(specs: &FigureSpecs) -> Result<Vec<(&'static str, Table)>> {
    Ok(vec![
        ("fig1", fig1_table(&specs.fig1)?),
        ("fig2", fig2_table(&specs.fig2)?),
        ("fig3", fig3_table(&specs.fig3)?),
        ("fig4", fig4_table(&specs.fig4)?),
    ])
}

/// gnuplot script for the CSV files written next to it.
pub fn gnuplot_script(specs: &FigureSpecs) -> String {
    let mut s = String::from(
        "set datafile separator ','\nset datafile commentschars '#'\nset key top right\nset terminal pngcairo size 800,600\n",
    );
    let series = |file: &str, filter_col: usize, values: &[f64], x: usize, y: usize, label: &str| {
        values
            .iter()
            .map(|v| {
                format!(
                    "'{file}' every ::1 using (${filter_col} == {v} ? ${x} : 1/0):{y} with lines title '{label} = {v}'"
                )
            })
            .collect::<Vec<_>>()
            .join(", \\\n     ")
    };
    s.push_str("\nset output 'fig1.png'\nset xlabel 'Delta / Gamma'\nset ylabel 'delta^2 omega_1'\nset logscale y\n");
    s.push_str(&format!(
        "plot {}\n",
        series("fig1.csv", 2, &specs.fig1.times, 1, 3, "t")
    ));
    s.push_str("\nset output 'fig2.png'\nset xlabel 'omega_1 / Gamma'\n");
    s.push_str(&format!(
        "plot {}\n",
        series("fig2.csv", 3, &specs.fig2.times, 1, 4, "t")
    ));
    let temps: Vec<f64> = specs
        .fig3
        .inputs
        .iter()
        .filter_map(|i| match i {
            InitialCondition::Thermal { temperature } => Some(*temperature),
            _ => None,
        })
        .collect();
    s.push_str("\nset output 'fig3.png'\n");
    s.push_str(&format!("plot {}\n", series("fig3.csv", 2, &temps, 1, 4, "T")));
    s.push_str("\nset output 'fig4.png'\nunset logscale y\nset xlabel 'Gamma t'\nset ylabel 'nu^-'\n");
    s.push_str(&format!(
        "plot {}\n",
        series("fig4.csv", 1, &specs.fig4.detunings, 2, 3, "Delta")
    ));
    s
}
