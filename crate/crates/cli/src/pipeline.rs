//! The four computations behind the subcommands, all on the grid of one
//! [`RunConfig`].

use lindblad_pdp::ensemble::run_ensemble;
use lindblad_pdp::exact::exact_rho11_curve;
use lindblad_pdp::two_band::{
    build_strong_model, build_weak_model, initial_state, tcl2_rho11, tcl2t_rho11,
};
use lindblad_pdp::Result;

use crate::config::{Coupling, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pipeline {
    /// Trajectory ensemble of the configured model.
    Mc,
    /// Both closed-form master-equation curves.
    Tcl,
    /// Schrödinger evolution of the full model.
    Exact,
    /// All of the above on one grid.
    Compare,
}

impl Pipeline {
    pub fn name(self) -> &'static str {
        match self {
            Self::Mc => "mc",
            Self::Tcl => "tcl",
            Self::Exact => "exact",
            Self::Compare => "compare",
        }
    }
}

/// Named columns of equal length; the first is always `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<(&'static str, Vec<f64>)>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| v.as_slice())
    }

    /// CSV text: a header row, then one row per time with every value
    /// printed to 17 significant digits.
    pub fn to_csv(&self) -> String {
        let names: Vec<&str> = self.columns.iter().map(|(n, _)| *n).collect();
        let mut out = names.join(",");
        out.push('\n');
        let rows = self.columns.first().map_or(0, |(_, v)| v.len());
        for r in 0..rows {
            let line: Vec<String> = self
                .columns
                .iter()
                .map(|(_, v)| format!("{:.16e}", v[r]))
                .collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

fn mc_columns(config: &RunConfig, grid: &[f64]) -> Result<Vec<(&'static str, Vec<f64>)>> {
    let params = config.params();
    let model = match config.run.coupling {
        Coupling::Weak => build_weak_model(&params)?,
        Coupling::Strong => build_strong_model(&params, config.run.convention)?,
    };
    let est = run_ensemble(
        &model,
        &initial_state(),
        grid,
        config.run.trajectories,
        config.run.seed,
    )?;
    Ok(vec![("rho11_mc", est.mean), ("stderr_mc", est.stderr)])
}

fn tcl_columns(config: &RunConfig, grid: &[f64]) -> Result<Vec<(&'static str, Vec<f64>)>> {
    let params = config.params();
    let tcl2 = grid.iter().map(|&t| tcl2_rho11(t, &params, 1.0)).collect();
    let tcl2t = grid
        .iter()
        .map(|&t| tcl2t_rho11(t, &params, 1.0))
        .collect::<Result<_>>()?;
    Ok(vec![("rho11_tcl2", tcl2), ("rho11_tcl2t", tcl2t)])
}

fn exact_columns(config: &RunConfig, grid: &[f64]) -> Result<Vec<(&'static str, Vec<f64>)>> {
    let curve = exact_rho11_curve(&config.params(), grid, config.run.realizations)?;
    Ok(vec![("rho11_exact", curve)])
}

/// Runs `pipeline` on the grid of `config`.
pub fn run(pipeline: Pipeline, config: &RunConfig) -> Result<Table> {
    let grid = config.grid();
    let mut columns = vec![("t", grid.clone())];
    match pipeline {
        Pipeline::Mc => columns.extend(mc_columns(config, &grid)?),
        Pipeline::Tcl => columns.extend(tcl_columns(config, &grid)?),
        Pipeline::Exact => columns.extend(exact_columns(config, &grid)?),
        Pipeline::Compare => {
            columns.extend(mc_columns(config, &grid)?);
            columns.extend(tcl_columns(config, &grid)?);
            columns.extend(exact_columns(config, &grid)?);
        }
    }
    Ok(Table { columns })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn small(coupling: &str) -> RunConfig {
        parse_config(&format!(
            r#"{{"model": {{"lambda": 0.01, "n1": 8, "n2": 8}},
                "run": {{"coupling": "{coupling}", "trajectories": 64, "n_points": 5}}}}"#
        ))
        .unwrap()
    }

    #[test]
    fn compare_has_the_documented_columns() {
        let table = run(Pipeline::Compare, &small("strong")).unwrap();
        let names: Vec<&str> = table.columns.iter().map(|(n, _)| *n).collect();
        assert_eq!(
            names,
            [
                "t",
                "rho11_mc",
                "stderr_mc",
                "rho11_tcl2",
                "rho11_tcl2t",
                "rho11_exact"
            ]
        );
        assert!(table.columns.iter().all(|(_, v)| v.len() == 5));
    }

    #[test]
    fn single_pipelines_start_from_the_excited_state() {
        let cfg = small("weak");
        for (pipeline, column) in [
            (Pipeline::Mc, "rho11_mc"),
            (Pipeline::Tcl, "rho11_tcl2"),
            (Pipeline::Tcl, "rho11_tcl2t"),
            (Pipeline::Exact, "rho11_exact"),
        ] {
            let table = run(pipeline, &cfg).unwrap();
            assert_eq!(table.column("t").unwrap()[0], 0.0);
            assert!(
                (table.column(column).unwrap()[0] - 1.0).abs() < 1e-12,
                "{column}"
            );
        }
    }

    #[test]
    fn csv_is_lossless() {
        let table = Table {
            columns: vec![
                ("t", vec![0.1, 1.0 / 3.0]),
                ("x", vec![f64::MIN_POSITIVE, -2.5e300]),
            ],
        };
        let csv = table.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,x"));
        let values: Vec<f64> = lines
            .flat_map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap()))
            .collect();
        assert_eq!(values, [0.1, f64::MIN_POSITIVE, 1.0 / 3.0, -2.5e300]);
    }
}
