//! `spectrum` (batch levels over a (k, l) window) and `solve` (one state
//! with full diagnostics).

use crate::args::{build_system, closed_form_energy, parse_range, EquationArg, PotentialArg};
use crate::output::{self, csv, f17, f6, table, Json, OutputFormat};
use clap::Args;
use lc_core::eigensolver::{
    solve_extrapolated, suggest_r_max, ExtrapolatedSolution, GridSpec, SolveOptions,
};
use lc_core::exec;
use lc_core::model::{QuantumNumbers, SystemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodArg {
    Closed,
    Numeric,
    Both,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long, value_enum)]
    pub equation: EquationArg,
    #[arg(long, value_enum)]
    pub potential: PotentialArg,
    #[arg(long)]
    pub mass: f64,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    /// Angular index window, `A..B` inclusive or a single value.
    #[arg(long, default_value = "0")]
    pub l: String,
    /// Radial index window, `A..B` inclusive or a single value.
    #[arg(long, default_value = "0")]
    pub k: String,
    #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
    pub method: MethodArg,
    #[arg(long, default_value_t = 4096)]
    pub cells: usize,
    /// Domain radius; per-state heuristic when omitted.
    #[arg(long)]
    pub rmax: Option<f64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

struct Row {
    k: u32,
    l: i32,
    method: &'static str,
    energy: f64,
    residual: f64,
    cells: Option<usize>,
    rmax: Option<f64>,
    iterations: Option<usize>,
    discrepancy: Option<f64>,
}

fn states_of(l_range: (i64, i64), k_range: (i64, i64)) -> Result<Vec<QuantumNumbers>, String> {
    if k_range.0 < 0 {
        return Err("--k must be non-negative".into());
    }
    let mut out = Vec::new();
    for l in l_range.0..=l_range.1 {
        for k in k_range.0..=k_range.1 {
            out.push(QuantumNumbers::new(k as u32, l as i32));
        }
    }
    Ok(out)
}

fn numeric_solve(
    spec: &SystemSpec,
    qn: QuantumNumbers,
    cells: usize,
    rmax: Option<f64>,
    seed: u64,
) -> Result<(ExtrapolatedSolution, f64), String> {
    let r_max = rmax.unwrap_or_else(|| suggest_r_max(spec, qn));
    let grid = GridSpec::new(cells, r_max).map_err(|e| e.to_string())?;
    let opts = SolveOptions {
        seed,
        ..SolveOptions::default()
    };
    let ext = solve_extrapolated(spec, qn, &grid, &opts)
        .map_err(|e| format!("(k={}, l={}): {e}", qn.k, qn.l))?;
    Ok((ext, r_max))
}

pub fn run_spectrum(a: &SpectrumArgs) -> Result<(String, u8), String> {
    let spec = build_system(a.equation, a.potential, a.mass, a.kappa, a.omega)?;
    let states = states_of(parse_range(&a.l)?, parse_range(&a.k)?)?;

    let want_closed = a.method != MethodArg::Numeric;
    let want_numeric = a.method != MethodArg::Closed;

    let numeric: Vec<Option<Result<(ExtrapolatedSolution, f64), String>>> = if want_numeric {
        exec::map_collect(&states, |qn| {
            Some(numeric_solve(&spec, *qn, a.cells, a.rmax, a.seed))
        })
    } else {
        states.iter().map(|_| None).collect()
    };

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (qn, num) in states.iter().zip(numeric) {
        let closed = closed_form_energy(&spec, *qn)?;
        if want_closed {
            rows.push(Row {
                k: qn.k,
                l: qn.l,
                method: "closed_form",
                energy: closed,
                residual: 0.0,
                cells: None,
                rmax: None,
                iterations: None,
                discrepancy: None,
            });
        }
        if let Some(result) = num {
            match result {
                Ok((ext, r_max)) => {
                    let denom = ext.energy.abs().max(f64::MIN_POSITIVE);
                    rows.push(Row {
                        k: qn.k,
                        l: qn.l,
                        method: "numerical",
                        energy: ext.energy,
                        residual: (ext.fine.energy - ext.energy).abs() / denom,
                        cells: Some(ext.fine.grid.n_cells),
                        rmax: Some(r_max),
                        iterations: Some(ext.fine.iterations),
                        discrepancy: (a.method == MethodArg::Both).then(|| {
                            (ext.energy - closed).abs() / closed.abs().max(f64::MIN_POSITIVE)
                        }),
                    });
                }
                Err(msg) => failures.push(msg),
            }
        }
    }

    for msg in &failures {
        eprintln!("solver failure {msg}");
    }
    let code = if failures.is_empty() { 0 } else { 1 };
    Ok((render_rows(a, &spec, &rows), code))
}

fn render_rows(a: &SpectrumArgs, spec: &SystemSpec, rows: &[Row]) -> String {
    let with_disc = a.method == MethodArg::Both;
    let mut header = vec![
        "equation",
        "potential",
        "mass",
        "coupling",
        "k",
        "l",
        "method",
        "energy",
        "residual",
        "cells",
        "rmax",
        "iterations",
    ];
    if with_disc {
        header.push("discrepancy");
    }
    let fnum = |x: f64, wide: bool| if wide { f17(x) } else { f6(x) };
    let cells_of = |row: &Row, wide: bool| -> Vec<String> {
        let mut out = vec![
            spec.equation.as_str().to_string(),
            spec.potential.as_str().to_string(),
            fnum(spec.mass, wide),
            fnum(spec.potential.coupling(), wide),
            row.k.to_string(),
            row.l.to_string(),
            row.method.to_string(),
            fnum(row.energy, wide),
            fnum(row.residual, wide),
            row.cells.map(|c| c.to_string()).unwrap_or_default(),
            row.rmax.map(|r| fnum(r, wide)).unwrap_or_default(),
            row.iterations.map(|i| i.to_string()).unwrap_or_default(),
        ];
        if with_disc {
            out.push(row.discrepancy.map(|d| fnum(d, wide)).unwrap_or_default());
        }
        out
    };

    match a.format {
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = rows.iter().map(|r| cells_of(r, true)).collect();
            csv(&header, &rows)
        }
        OutputFormat::Table => {
            let rows: Vec<Vec<String>> = rows.iter().map(|r| cells_of(r, false)).collect();
            table(&header, &rows)
        }
        OutputFormat::Json => {
            let mut j = Json::object();
            j.str_field("schema", output::SCHEMA)
                .str_field("command", "spectrum")
                .str_field("equation", spec.equation.as_str())
                .str_field("potential", spec.potential.as_str())
                .num_field("mass", spec.mass)
                .num_field("coupling", spec.potential.coupling())
                .int_field("seed", a.seed as i64);
            j.begin_array("rows");
            for r in rows {
                j.begin_item()
                    .int_field("k", i64::from(r.k))
                    .int_field("l", i64::from(r.l))
                    .str_field("method", r.method)
                    .num_field("energy", r.energy)
                    .num_field("residual", r.residual);
                match r.cells {
                    Some(c) => j.int_field("cells", c as i64),
                    None => j.null_field("cells"),
                };
                match r.rmax {
                    Some(x) => j.num_field("rmax", x),
                    None => j.null_field("rmax"),
                };
                match r.iterations {
                    Some(i) => j.int_field("iterations", i as i64),
                    None => j.null_field("iterations"),
                };
                if let Some(d) = r.discrepancy {
                    j.num_field("discrepancy", d);
                }
                j.end_item();
            }
            j.end_array();
            j.finish()
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub equation: EquationArg,
    #[arg(long, value_enum)]
    pub potential: PotentialArg,
    #[arg(long)]
    pub mass: f64,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub l: i32,
    #[arg(long, default_value_t = 4096)]
    pub cells: usize,
    #[arg(long)]
    pub rmax: Option<f64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

pub fn run_solve(a: &SolveArgs) -> Result<(String, u8), String> {
    let spec = build_system(a.equation, a.potential, a.mass, a.kappa, a.omega)?;
    let qn = QuantumNumbers::new(a.k, a.l);
    let closed = closed_form_energy(&spec, qn)?;
    let (ext, r_max) = match numeric_solve(&spec, qn, a.cells, a.rmax, a.seed) {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("solver failure {msg}");
            return Ok((String::new(), 1));
        }
    };
    let grid = ext.fine.grid;
    let h = grid.h();
    let norm: f64 = ext
        .fine
        .radial
        .iter()
        .enumerate()
        .map(|(i, &ri)| ri * ri * grid.center(i) * h)
        .sum();
    let discrepancy = (ext.energy - closed).abs() / closed.abs().max(f64::MIN_POSITIVE);

    let pairs: Vec<(&str, String, String)> = vec![
        ("equation", spec.equation.as_str().into(), String::new()),
        ("potential", spec.potential.as_str().into(), String::new()),
        ("mass", f17(spec.mass), f6(spec.mass)),
        (
            "coupling",
            f17(spec.potential.coupling()),
            f6(spec.potential.coupling()),
        ),
        ("k", a.k.to_string(), String::new()),
        ("l", a.l.to_string(), String::new()),
        ("cells", grid.n_cells.to_string(), String::new()),
        ("rmax", f17(r_max), f6(r_max)),
        ("energy_coarse", f17(ext.coarse.energy), f6(ext.coarse.energy)),
        ("energy_fine", f17(ext.fine.energy), f6(ext.fine.energy)),
        ("energy_extrapolated", f17(ext.energy), f6(ext.energy)),
        ("energy_closed_form", f17(closed), f6(closed)),
        ("discrepancy", f17(discrepancy), f6(discrepancy)),
        ("lambda", f17(ext.fine.lambda), f6(ext.fine.lambda)),
        (
            "iterations",
            ext.fine.iterations.to_string(),
            String::new(),
        ),
        ("converged", ext.fine.converged.to_string(), String::new()),
        ("norm_check", f17(norm), f6(norm)),
    ];

    let out = match a.format {
        OutputFormat::Json => {
            let mut j = Json::object();
            j.str_field("schema", output::SCHEMA)
                .str_field("command", "solve")
                .str_field("equation", spec.equation.as_str())
                .str_field("potential", spec.potential.as_str())
                .num_field("mass", spec.mass)
                .num_field("coupling", spec.potential.coupling())
                .int_field("k", i64::from(a.k))
                .int_field("l", i64::from(a.l))
                .int_field("cells", grid.n_cells as i64)
                .num_field("rmax", r_max)
                .num_field("energy_coarse", ext.coarse.energy)
                .num_field("energy_fine", ext.fine.energy)
                .num_field("energy_extrapolated", ext.energy)
                .num_field("energy_closed_form", closed)
                .num_field("discrepancy", discrepancy)
                .num_field("lambda", ext.fine.lambda)
                .int_field("iterations", ext.fine.iterations as i64)
                .bool_field("converged", ext.fine.converged)
                .num_field("norm_check", norm);
            j.finish()
        }
        OutputFormat::Csv => {
            let header: Vec<&str> = pairs.iter().map(|p| p.0).collect();
            let row: Vec<String> = pairs
                .iter()
                .map(|p| p.1.clone())
                .collect();
            csv(&header, &[row])
        }
        OutputFormat::Table => {
            let rows: Vec<Vec<String>> = pairs
                .iter()
                .map(|(k, wide, narrow)| {
                    vec![
                        k.to_string(),
                        if narrow.is_empty() {
                            wide.clone()
                        } else {
                            narrow.clone()
                        },
                    ]
                })
                .collect();
            table(&["field", "value"], &rows)
        }
    };
    Ok((out, if ext.fine.converged { 0 } else { 1 }))
}
