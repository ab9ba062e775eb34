//! One function per subcommand. Each returns the rendered artifact; writing
//! it out is left to the caller.

use anyhow::{bail, Result};

use magpt::export::{entanglement_table, optima_table, sweep_table, Cell, Format, Table};
use magpt::figures::{all_figures, gnuplot_script, FigureSpecs};
use magpt::metrology::photon_variance;
use magpt::sweep::{sweep_entanglement, EntanglementSweepRow};
use magpt::validation::{
    check_closed_form, check_determinant, check_effective_oracle, check_full_model, check_vacuum_metrology,
    CheckOutcome,
};
use magpt::{
    evolve_moments, field_precision, photon_number, precision_error_propagation, qfi_gaussian, reduce, sweep_precision,
    InitialCondition, MagnetometerConfig, OccupationDependence,
};

use crate::config::{units_label, EntanglementConfig, Loaded, SweepConfig, TrajectoryConfig, ValidateConfig};

/// Header metadata shared by every table.
pub fn metadata<T>(command: &str, units: &str, loaded: &Loaded<T>) -> Vec<(&'static str, String)> {
    vec![
        ("command", command.to_string()),
        ("units", units.to_string()),
        ("config_sha256", loaded.sha256.clone()),
        ("magpt", env!("CARGO_PKG_VERSION").to_string()),
    ]
}

fn flag_error(e: impl std::fmt::Display) -> Cell {
    format!("error: {e}").into()
}

/// `N_c`, its variance and every magnon moment along the time grid.
pub fn photon_number_table(cfg: &TrajectoryConfig) -> Result<Table> {
    let m = reduce(&cfg.model.params)?;
    let p = m.prefactor();
    let mut t = Table::new(
        "photon-number",
        &[
            "t",
            "photon_number",
            "variance",
            "n_a",
            "n_b",
            "n_ab_re",
            "n_ab_im",
            "m_aa_re",
            "m_aa_im",
            "m_bb_re",
            "m_bb_im",
            "m_ab_re",
            "m_ab_im",
            "flags",
        ],
    );
    for time in cfg.times.points() {
        match evolve_moments(&m, &cfg.input, time) {
            Ok(ms) => {
                let n = &ms.normal;
                let a = &ms.anomalous;
                t.push(vec![
                    time.into(),
                    photon_number(&ms, p).into(),
                    photon_variance(&ms, p).into(),
                    n[(0, 0)].re.into(),
                    n[(1, 1)].re.into(),
                    n[(0, 1)].re.into(),
                    n[(0, 1)].im.into(),
                    a[(0, 0)].re.into(),
                    a[(0, 0)].im.into(),
                    a[(1, 1)].re.into(),
                    a[(1, 1)].im.into(),
                    a[(0, 1)].re.into(),
                    a[(0, 1)].im.into(),
                    "".into(),
                ]);
            }
            Err(e) => {
                let mut row = vec![Cell::Num(time)];
                row.extend(std::iter::repeat_n(Cell::Empty, 12));
                row.push(flag_error(e));
                t.push(row);
            }
        }
    }
    Ok(t)
}

/// QFI from the general Gaussian formula and from `N'²/(N² + N)`, next to
/// the photon-counting `δ²ω1`.
pub fn qfi_table(cfg: &TrajectoryConfig) -> Result<Table> {
    if cfg.input != InitialCondition::Vacuum {
        bail!("qfi: only vacuum input is supported, got {}", cfg.input.label());
    }
    let m = reduce(&cfg.model.params)?;
    let mut t = Table::new(
        "qfi",
        &[
            "t",
            "photon_number",
            "qfi_gaussian",
            "qfi_reduced",
            "delta2_omega1",
            "delta2_times_qfi",
            "flags",
        ],
    );
    for time in cfg.times.points() {
        let result = precision_error_propagation(&m, &cfg.input, time, OccupationDependence::Tracked)
            .and_then(|r| Ok((r, qfi_gaussian(&m, &cfg.input, time)?)));
        match result {
            Ok((r, q)) => t.push(vec![
                time.into(),
                r.photon_number.into(),
                q.general.into(),
                q.reduced.into(),
                r.delta2_omega1.into(),
                if r.divergent {
                    Cell::Empty
                } else {
                    Cell::Num(r.delta2_omega1 * q.general)
                },
                if r.divergent { "divergent" } else { "" }.into(),
            ]),
            Err(e) => t.push(vec![
                time.into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                flag_error(e),
            ]),
        }
    }
    Ok(t)
}

pub fn sweep_tables(cfg: &SweepConfig) -> Result<(Table, Table)> {
    let r = sweep_precision(&cfg.sweep)?;
    Ok((sweep_table(&r), optima_table(&r.optima, r.axis.name())))
}

pub fn entanglement(cfg: &EntanglementConfig) -> Result<Table> {
    let rows: Vec<EntanglementSweepRow> = sweep_entanglement(&cfg.sweep)?;
    Ok(entanglement_table(&rows))
}

/// Every intermediate of the field estimate as `quantity, value, unit`.
pub fn sensitivity_table(cfg: &MagnetometerConfig) -> Result<Table> {
    let spec = cfg.to_spec()?;
    let r = field_precision(&spec)?;
    let mut t = Table::new("sensitivity", &["quantity", "value", "unit"]);
    let convention = match r.convention {
        magpt::FrequencyConvention::Angular => "angular",
        magpt::FrequencyConvention::Cyclic => "cyclic",
    };
    t.push(vec!["convention".into(), convention.into(), "".into()]);
    let rows: [(&str, f64, &str); 15] = [
        ("rate_factor", r.convention.factor(), "rad per quoted Hz"),
        ("gamma0", r.gamma0, "rad s^-1 T^-1"),
        ("kappa", spec.device.kappa, "rad s^-1"),
        ("coupling_g", spec.device.g13, "rad s^-1"),
        ("Gamma", r.coupling, "rad s^-1"),
        ("detuning", r.detuning, "rad s^-1"),
        ("prefactor", r.prefactor, "1"),
        ("integration_time", r.integration_time, "s"),
        ("Gamma_t", r.gamma_t, "1"),
        ("photon_number", r.photon_number, "1"),
        ("variance", r.variance, "1"),
        ("dN_domega1", r.slope, "s"),
        ("delta2_omega1", r.delta2_omega1, "rad^2 s^-2"),
        ("delta_B", r.delta_b, "T"),
        ("sensitivity", r.sensitivity, "T Hz^-1/2"),
    ];
    for (q, v, u) in rows {
        t.push(vec![q.into(), v.into(), u.into()]);
    }
    t.push(vec![
        "delta_B_over_root_t".into(),
        r.delta_b_over_root_t.into(),
        "T s^-1/2".into(),
    ]);
    t.push(vec![
        "divergent".into(),
        if r.divergent { "true" } else { "false" }.into(),
        "".into(),
    ]);
    Ok(t)
}

/// Runs the suite; the bool is whether every check passed.
pub fn validation(cfg: &ValidateConfig) -> Result<(Table, bool)> {
    let mut checks: Vec<CheckOutcome> = vec![
        check_effective_oracle(cfg.oracle_grid)?,
        check_closed_form(cfg.closed_form_grid)?,
        check_full_model(&cfg.full_detunings, &cfg.full_times)?,
        check_determinant(),
    ];
    checks.extend(check_vacuum_metrology()?);
    let checks: Vec<CheckOutcome> = checks
        .into_iter()
        .map(|c| match cfg.tolerances.get(c.id) {
            Some(&tol) => c.with_tolerance(tol),
            None => c,
        })
        .collect();
    let mut t = Table::new("validation", &["id", "check", "points", "worst", "tolerance", "status"]);
    for c in &checks {
        t.push(vec![
            c.id.into(),
            c.name.clone().into(),
            (c.points as f64).into(),
            c.worst.into(),
            c.tolerance.into(),
            if c.passed { "pass" } else { "FAIL" }.into(),
        ]);
    }
    Ok((t, checks.iter().all(|c| c.passed)))
}

/// Rendered figure files, named by stem and extension.
pub fn figure_files(loaded: &Loaded<FigureSpecs>, format: Format, script: bool) -> Result<Vec<(String, String)>> {
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let mut files = Vec::new();
    for (stem, table) in all_figures(&loaded.config)? {
        let meta = metadata(stem, units_label(magpt::Units::UnitsOfGamma), loaded);
        files.push((format!("{stem}.{ext}"), table.render(format, &meta)?));
    }
    if script && format == Format::Csv {
        files.push(("figures.gp".to_string(), gnuplot_script(&loaded.config)));
    }
    Ok(files)
}
