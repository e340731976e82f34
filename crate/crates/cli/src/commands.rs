use std::process::ExitCode;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use markov_l2::markov::{all_bounds, restricted_branch, restricted_varma_constant, RestrictedBranch};
use markov_l2::verify::{self, check_am_inequality, closure_ratio, power_iteration_max, random_polys, PolySample};
use markov_l2::{diffops, markov_constant, MarkovResult, Route, Weight};

use crate::args::{BoundsArgs, Command, ComputeArgs, FigureArgs, Preset, TableArgs, VerifyArgs, WeightArgs};
use crate::output::{emit, full, render, render_records, BoundsColumns, OutputRecord, Precision};
use crate::CliError;

/// Largest relative gap between the oracle quotient and the constant.
const CLOSURE_TOL: f64 = 1e-8;

pub fn run(cmd: Command) -> Result<ExitCode, CliError> {
    match cmd {
        Command::Compute(a) => compute(&a),
        Command::Table(a) => table(&a),
        Command::FigureData(a) => figure_data(&a),
        Command::Bounds(a) => bounds(&a),
        Command::Verify(a) => verify_cmd(&a),
    }
}

fn closes(r: &MarkovResult) -> bool {
    closure_ratio(r).is_ok_and(|q| (q - 1.0).abs() <= CLOSURE_TOL)
}

fn solve_cells(cells: &[(Weight, usize, usize)], route: Route) -> Result<Vec<OutputRecord>, CliError> {
    let rows = cells
        .par_iter()
        .map(|&(w, n, k)| {
            let r = markov_constant(w, n, k, route)?;
            Ok(OutputRecord::new(w, n, k, r.constant, r.method.as_str(), closes(&r)))
        })
        .collect::<Result<Vec<_>, markov_l2::Error>>()?;
    Ok(rows)
}

fn laguerre_weights(w: &WeightArgs, s_list: Option<&Vec<f64>>) -> Result<Vec<Weight>, CliError> {
    match s_list {
        Some(list) => {
            if w.s.is_some() {
                return Err(CliError::Usage("give --s or --s-list, not both".into()));
            }
            list.iter().map(|&s| w.weight_with_s(Some(s))).collect()
        }
        None => Ok(vec![w.weight_with_s(None)?]),
    }
}

fn grid_cells(weights: &[Weight], degrees: &[usize], k: usize) -> Vec<(Weight, usize, usize)> {
    degrees.iter().flat_map(|&n| weights.iter().map(move |&w| (w, n, k))).collect()
}

fn compute(a: &ComputeArgs) -> Result<ExitCode, CliError> {
    let weights = laguerre_weights(&a.weight, a.grid.s_list.as_ref())?;
    let cells = grid_cells(&weights, &a.grid.degrees()?, a.grid.k);
    let rows = solve_cells(&cells, a.route.into())?;
    emit(&render_records(&rows, a.output.format, Precision::Full)?, a.output.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

/// Degrees and exponents of the second-derivative Laguerre table.
pub const TABLE2_N: [usize; 12] = [4, 5, 6, 7, 8, 9, 10, 20, 30, 40, 50, 100];
pub const TABLE2_S: [f64; 4] = [0.0, -0.5, 1.0, 2.0];

fn table(a: &TableArgs) -> Result<ExitCode, CliError> {
    let cells = match a.preset {
        Some(Preset::Table2) => {
            if a.grid.n.is_some() || a.grid.n_list.is_some() || a.grid.s_list.is_some() || a.weight.is_some() {
                return Err(CliError::Usage("--preset cannot be combined with grid flags".into()));
            }
            let weights: Vec<Weight> = TABLE2_S.iter().map(|&s| Weight::Laguerre { s }).collect();
            grid_cells(&weights, &TABLE2_N, 2)
        }
        None => {
            let weights = laguerre_weights(&a.weight_args(), a.grid.s_list.as_ref())?;
            grid_cells(&weights, &a.grid.degrees()?, a.grid.k)
        }
    };
    let rows = solve_cells(&cells, Route::Auto)?;
    emit(&render_records(&rows, a.output.format, Precision::Sig13)?, a.output.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

/// `(i - 20) / 20` for `i` in `lo..hi`, so `s` runs over `(-1, ...)` in
/// steps of `0.05` without accumulated rounding.
fn s_grid(lo: i32, hi: i32) -> Vec<f64> {
    (lo..hi).map(|i| f64::from(i - 20) / 20.0).collect()
}

fn figure_data(a: &FigureArgs) -> Result<ExitCode, CliError> {
    let cells: Vec<(Weight, usize, usize)> = match a.figure {
        1 => [10usize, 50, 100, 150]
            .iter()
            .flat_map(|&n| s_grid(1, 100).into_iter().map(move |s| (Weight::Laguerre { s }, n, 1)))
            .collect(),
        2 => [10usize, 50]
            .iter()
            .flat_map(|&n| s_grid(1, 80).into_iter().map(move |s| (Weight::Laguerre { s }, n, 2)))
            .collect(),
        3 => [-0.5, 0.0, 0.5]
            .iter()
            .flat_map(|&al| (1..=100).map(move |n| (Weight::Jacobi { alpha: al, beta: al }, n, 1)))
            .collect(),
        other => return Err(CliError::Usage(format!("unknown figure {other}; expected 1, 2 or 3"))),
    };
    let rows = solve_cells(&cells, Route::Auto)?;
    emit(&render_records(&rows, a.output.format, Precision::Sig13)?, a.output.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn bounds(a: &BoundsArgs) -> Result<ExitCode, CliError> {
    let w = a.weight.weight_with_s(None)?;
    let rows = if a.restricted {
        let Weight::Laguerre { s } = w else {
            return Err(CliError::Usage("--restricted applies to --weight laguerre".into()));
        };
        if a.n == 0 {
            return Err(CliError::Usage("--n must be positive".into()));
        }
        let branch = match restricted_branch(a.n, s)? {
            RestrictedBranch::Low => "restricted_low",
            RestrictedBranch::High => "restricted_high",
        };
        let mut r = OutputRecord::new(w, a.n, 1, restricted_varma_constant(a.n, s)?, "closed_form", true);
        r.bounds = Some(BoundsColumns {
            source: branch.into(),
            lower: None,
            upper: None,
            asymptotic: None,
            bracket_ok: true,
        });
        vec![r]
    } else {
        let exact = markov_constant(w, a.n, 1, Route::Auto)?;
        let verified = closes(&exact);
        let mut head = OutputRecord::new(w, a.n, 1, exact.constant, exact.method.as_str(), verified);
        head.bounds = Some(BoundsColumns {
            source: "exact".into(),
            lower: None,
            upper: None,
            asymptotic: None,
            bracket_ok: true,
        });
        let mut rows = vec![head];
        for b in all_bounds(w, a.n)? {
            let mut r = OutputRecord::new(w, a.n, 1, exact.constant, exact.method.as_str(), verified);
            r.bounds = Some(BoundsColumns {
                source: b.source.as_str().into(),
                lower: b.lower,
                upper: b.upper,
                asymptotic: b.asymptotic,
                bracket_ok: b.brackets(exact.constant, 0.0),
            });
            rows.push(r);
        }
        rows
    };
    emit(&render_records(&rows, a.output.format, Precision::Full)?, a.output.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

/// One verification outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub check: String,
    pub weight: String,
    pub param1: Option<f64>,
    pub param2: Option<f64>,
    pub n: usize,
    pub k: usize,
    pub value: f64,
    pub reference: f64,
    pub ok: bool,
}

const CHECK_HEADER: [&str; 9] = ["check", "weight", "param1", "param2", "n", "k", "value", "reference", "ok"];

impl CheckRow {
    fn new(check: &str, w: Weight, n: usize, k: usize, value: f64, reference: f64, ok: bool) -> Self {
        let (param1, param2) = w.params();
        CheckRow {
            check: check.into(),
            weight: w.family().into(),
            param1,
            param2,
            n,
            k,
            value,
            reference,
            ok,
        }
    }

    fn fields(&self) -> Vec<String> {
        let o = |x: Option<f64>| x.map(full).unwrap_or_default();
        vec![
            self.check.clone(),
            self.weight.clone(),
            o(self.param1),
            o(self.param2),
            self.n.to_string(),
            self.k.to_string(),
            full(self.value),
            full(self.reference),
            self.ok.to_string(),
        ]
    }
}

fn am_rows(w: Weight, n: usize, samples: usize) -> markov_l2::Result<Vec<CheckRow>> {
    let mut q = vec![0.0; n + 1];
    q[n] = 1.0;
    let eq = check_am_inequality(&PolySample::new(w, q)?, n)?;
    let eq_rel = eq.slack.abs() / eq.rhs;
    let mut worst = f64::INFINITY;
    for p in random_polys(w, n, samples, verify::DEFAULT_SEED) {
        let r = check_am_inequality(&p, n)?;
        worst = worst.min(r.slack / r.rhs);
    }
    let mut rows = vec![CheckRow::new("am_equality", w, n, 2, eq_rel, 0.0, eq_rel <= 1e-9)];
    if samples > 0 {
        rows.push(CheckRow::new("am_random_min_slack", w, n, 2, worst, 0.0, worst >= -1e-9));
    }
    Ok(rows)
}

fn rayleigh_rows(w: Weight, n: usize, k: usize, samples: usize) -> markov_l2::Result<Vec<CheckRow>> {
    let r = markov_constant(w, n, k, Route::Auto)?;
    let q = closure_ratio(&r)? * r.constant;
    let mut rows = vec![CheckRow::new(
        "rayleigh_extremal",
        w,
        n,
        k,
        q,
        r.constant,
        ((q - r.constant) / r.constant).abs() <= CLOSURE_TOL,
    )];
    if samples > 0 {
        let best = verify::random_ratio_max(w, n, k, samples, verify::DEFAULT_SEED)?;
        rows.push(CheckRow::new("rayleigh_random_max", w, n, k, best, r.constant, best <= r.constant * (1.0 + 1e-9)));
    }
    Ok(rows)
}

fn grid_rows(w: Weight, n: usize, samples: usize) -> markov_l2::Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for k in 1..=3.min(n) {
        rows.extend(rayleigh_rows(w, n, k, samples)?);
        let auto = markov_constant(w, n, k, Route::Auto)?.constant;
        let b = markov_constant(w, n, k, Route::B)?.constant;
        rows.push(CheckRow::new("route_agreement", w, n, k, b, auto, ((b - auto) / auto).abs() <= 1e-9));
    }
    let bm = diffops::b_matrix(&diffops::diff_coeffs(w, n, 1)?);
    let m = markov_constant(w, n, 1, Route::Auto)?.constant;
    if let Ok(p) = power_iteration_max(&bm, 1e-14, 200_000) {
        let ok = ((p.value - m * m) / (m * m)).abs() <= 1e-8;
        rows.push(CheckRow::new("power_iteration", w, n, 1, p.value, m * m, ok));
    }
    rows.extend(am_rows(w, n, samples)?);
    Ok(rows)
}

fn default_grid() -> Vec<Weight> {
    vec![
        Weight::Hermite,
        Weight::Laguerre { s: -0.5 },
        Weight::Laguerre { s: 0.0 },
        Weight::Laguerre { s: 1.0 },
        Weight::Jacobi { alpha: -0.5, beta: -0.5 },
        Weight::Jacobi { alpha: 0.0, beta: 0.0 },
        Weight::Jacobi { alpha: 0.5, beta: 0.5 },
        Weight::Jacobi { alpha: 1.0, beta: -0.5 },
    ]
}

fn verify_cmd(a: &VerifyArgs) -> Result<ExitCode, CliError> {
    let weight = a.weight_args().map(|w| w.weight_with_s(None)).transpose()?;
    let rows: Vec<CheckRow> = if a.am_check || a.rayleigh {
        let (w, n) = match (weight, a.n) {
            (Some(w), Some(n)) => (w, n),
            _ => return Err(CliError::Usage("--am-check and --rayleigh need --weight and --n".into())),
        };
        if a.am_check {
            am_rows(w, n, a.samples)?
        } else {
            rayleigh_rows(w, n, a.k, a.samples)?
        }
    } else {
        let cells: Vec<(Weight, usize)> = match (weight, a.n) {
            (Some(w), Some(n)) => vec![(w, n)],
            _ => default_grid().into_iter().flat_map(|w| [5usize, 10, 15].map(|n| (w, n))).collect(),
        };
        cells
            .par_iter()
            .map(|&(w, n)| grid_rows(w, n, a.samples))
            .collect::<markov_l2::Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect()
    };
    let all_ok = rows.iter().all(|r| r.ok);
    let bytes = render(&rows, a.output.format, &CHECK_HEADER, CheckRow::fields)?;
    emit(&bytes, a.output.out.as_deref())?;
    if !all_ok {
        let failed = rows.iter().filter(|r| !r.ok).count();
        eprintln!("verification failed: {failed} of {} checks", rows.len());
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}
