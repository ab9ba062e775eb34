//! Parameter sweeps of the photon-counting precision and of the entanglement
//! figures. Grid points are evaluated in parallel and assembled in grid order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{InitialCondition, OccupationDependence};
use crate::entanglement::{entanglement_series, EntanglementRow};
use crate::error::{Error, Result};
use crate::metrology::precision_error_propagation;
use crate::model::EffectiveModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridScale {
    #[default]
    Linear,
    Log,
}

/// `count` points from `min` to `max`. With `open_min` the lower end is
/// excluded and the points are `min + k (max − min)/count`, `k = 1..=count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: GridScale,
    #[serde(default)]
    pub open_min: bool,
}

impl Grid {
    pub fn linear(min: f64, max: f64, count: usize) -> Self {
        Self {
            min,
            max,
            count,
            scale: GridScale::Linear,
            open_min: false,
        }
    }

    pub fn open(mut self) -> Self {
        self.open_min = true;
        self
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        if self.count == 0 {
            return Err(Error::Sweep(format!("{name}: grid is empty")));
        }
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::Sweep(format!("{name}: bounds must be finite")));
        }
        let single = self.count == 1 && !self.open_min;
        if self.max < self.min || (self.max == self.min && !single) {
            return Err(Error::Sweep(format!(
                "{name}: grid must increase (min {} max {})",
                self.min, self.max
            )));
        }
        if self.scale == GridScale::Log && self.min <= 0.0 {
            return Err(Error::Sweep(format!("{name}: log grid needs min > 0")));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.count;
        if n == 1 && !self.open_min {
            return vec![self.min];
        }
        let (offset, denom) = if self.open_min { (1, n) } else { (0, n - 1) };
        (0..n)
            .map(|k| {
                let j = k + offset;
                if j == denom {
                    return self.max;
                }
                let u = j as f64 / denom as f64;
                match self.scale {
                    GridScale::Linear => self.min + u * (self.max - self.min),
                    GridScale::Log => self.min * (self.max / self.min).powf(u),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// `Δ = ω1 − ω2` at fixed `ω2`.
    #[default]
    Detuning,
    Omega1,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Detuning => "detuning",
            SweepAxis::Omega1 => "omega1",
        }
    }
}

fn default_inputs() -> Vec<InitialCondition> {
    vec![InitialCondition::Vacuum]
}

/// Precision sweep over one frequency axis, several times and inputs.
/// All rates are in units of `Γ` unless the caller scales them otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub coupling: f64,
    pub prefactor: f64,
    #[serde(default)]
    pub omega2: f64,
    #[serde(default)]
    pub axis: SweepAxis,
    pub grid: Grid,
    pub times: Vec<f64>,
    #[serde(default = "default_inputs")]
    pub inputs: Vec<InitialCondition>,
    #[serde(default)]
    pub occupation: OccupationDependence,
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::Sweep("times: list is empty".into()));
    }
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::Sweep("times: must be finite and non-negative".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Sweep("times: must be strictly increasing".into()));
    }
    Ok(())
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.grid.validate(self.axis.name())?;
        check_times(&self.times)?;
        if self.inputs.is_empty() {
            return Err(Error::Sweep("inputs: list is empty".into()));
        }
        if self.coupling.is_nan() || self.coupling < 0.0 || self.prefactor.is_nan() || self.prefactor < 0.0 {
            return Err(Error::Sweep("coupling and prefactor must be non-negative".into()));
        }
        Ok(())
    }

    pub fn model_at(&self, axis_value: f64) -> EffectiveModel {
        let omega1 = match self.axis {
            SweepAxis::Detuning => self.omega2 + axis_value,
            SweepAxis::Omega1 => axis_value,
        };
        EffectiveModel::from_frequencies(omega1, self.omega2, self.coupling, self.prefactor)
    }
}

/// One grid point. Failed evaluations keep their coordinates and carry the
/// error text in `error`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub input: InitialCondition,
    pub t: f64,
    pub axis_value: f64,
    pub omega1: f64,
    pub detuning: f64,
    pub photon_number: f64,
    pub variance: f64,
    pub slope: f64,
    /// `+∞` for divergent or failed points.
    pub delta2_omega1: f64,
    pub qfi: Option<f64>,
    pub divergent: bool,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn flag(&self) -> &str {
        match (&self.error, self.divergent) {
            (Some(_), _) => "error",
            (None, true) => "divergent",
            (None, false) => "",
        }
    }
}

/// Best point of one `(input, t)` slice.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceOptimum {
    pub input: InitialCondition,
    pub t: f64,
    /// Global minimiser of `δ²ω1` on the grid.
    pub argmin: f64,
    pub min_delta2: f64,
    /// First interior local minimum scanning up from the lower end of the
    /// grid (the optimum closest to the exceptional point on `(2Γ, ·]`).
    pub first_local_argmin: Option<f64>,
    pub first_local_min: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub rows: Vec<SweepRow>,
    pub optima: Vec<SliceOptimum>,
}

fn evaluate(spec: &SweepSpec, input: InitialCondition, t: f64, x: f64) -> SweepRow {
    let m = spec.model_at(x);
    let mut row = SweepRow {
        input,
        t,
        axis_value: x,
        omega1: m.omega1(),
        detuning: m.detuning(),
        photon_number: f64::NAN,
        variance: f64::NAN,
        slope: f64::NAN,
        delta2_omega1: f64::INFINITY,
        qfi: None,
        divergent: true,
        error: None,
    };
    match precision_error_propagation(&m, &input, t, spec.occupation) {
        Ok(r) => {
            row.photon_number = r.photon_number;
            row.variance = r.variance;
            row.slope = r.slope;
            row.delta2_omega1 = r.delta2_omega1;
            row.qfi = r.qfi;
            row.divergent = r.divergent;
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

pub fn sweep_precision(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let xs = spec.grid.points();
    let nx = xs.len();
    let nt = spec.times.len();
    let total = spec.inputs.len() * nt * nx;
    let rows: Vec<SweepRow> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let input = spec.inputs[idx / (nt * nx)];
            let t = spec.times[(idx / nx) % nt];
            evaluate(spec, input, t, xs[idx % nx])
        })
        .collect();
    let optima = rows.chunks(nx).map(slice_optimum).collect();
    Ok(SweepResult {
        axis: spec.axis,
        rows,
        optima,
    })
}

fn slice_optimum(slice: &[SweepRow]) -> SliceOptimum {
    let mut best = 0;
    for (i, r) in slice.iter().enumerate() {
        if r.delta2_omega1 < slice[best].delta2_omega1 {
            best = i;
        }
    }
    let local = first_local_minimum(&slice.iter().map(|r| r.delta2_omega1).collect::<Vec<_>>());
    SliceOptimum {
        input: slice[0].input,
        t: slice[0].t,
        argmin: slice[best].axis_value,
        min_delta2: slice[best].delta2_omega1,
        first_local_argmin: local.map(|i| slice[i].axis_value),
        first_local_min: local.map(|i| slice[i].delta2_omega1),
    }
}

/// Index of the first interior `i` with `y[i−1] > y[i] ≤ y[i+1]`.
pub fn first_local_minimum(y: &[f64]) -> Option<usize> {
    (1..y.len().saturating_sub(1)).find(|&i| y[i] < y[i - 1] && y[i] <= y[i + 1])
}

/// Entanglement figures over time for several detunings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntanglementSweepSpec {
    pub coupling: f64,
    pub detunings: Vec<f64>,
    pub times: Grid,
    #[serde(default = "default_inputs")]
    pub inputs: Vec<InitialCondition>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementSweepRow {
    pub input: InitialCondition,
    #[serde(flatten)]
    pub row: EntanglementRow,
}

impl EntanglementSweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.times.validate("times")?;
        if self.times.min < 0.0 {
            return Err(Error::Sweep("times: must be non-negative".into()));
        }
        if self.detunings.is_empty() || self.inputs.is_empty() {
            return Err(Error::Sweep("detunings and inputs must be non-empty".into()));
        }
        if self.coupling.is_nan() || self.coupling < 0.0 {
            return Err(Error::Sweep("coupling must be non-negative".into()));
        }
        Ok(())
    }
}

pub fn sweep_entanglement(spec: &EntanglementSweepSpec) -> Result<Vec<EntanglementSweepRow>> {
    spec.validate()?;
    let times = spec.times.points();
    let jobs: Vec<(InitialCondition, f64)> = spec
        .inputs
        .iter()
        .flat_map(|&i| spec.detunings.iter().map(move |&d| (i, d)))
        .collect();
    let blocks: Vec<Result<Vec<EntanglementSweepRow>>> = jobs
        .par_iter()
        .map(|&(input, d)| {
            // ω1 = 1 + Δ keeps both thermal occupations defined
            let m = EffectiveModel::from_frequencies(1.0 + d, 1.0, spec.coupling, 0.0);
            Ok(entanglement_series(&m, &input, &times)?
                .into_iter()
                .map(|row| EntanglementSweepRow { input, row })
                .collect())
        })
        .collect();
    let mut out = Vec::with_capacity(jobs.len() * times.len());
    for b in blocks {
        out.extend(b?);
    }
    Ok(out)
}
