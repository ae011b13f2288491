// SPDX-License-Identifier: Apache-2.0

//! One function per subcommand.

use std::path::PathBuf;
use std::time::Instant;

use omsqueeze::floquet::periodic_steady_state;
use omsqueeze::lindblad::lindblad_steady_state;
use omsqueeze::model::{check_bad_cavity_condition, derive};
use omsqueeze::optimize::{optimize_at, sweep_point, Backend, PointStatus, SweepBase, ThirdTone};
use omsqueeze::rwa::{min_variance_analytic, optimal_ratio_analytic};
use omsqueeze::spectra::{
    integrated_weight, output_spectrum_analytic, output_spectrum_numeric, split_peak_position,
    squeezing_bounds,
};
use omsqueeze::{Error, Params, Report};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::output::{flag, num, opt, Outputs, Table};
use crate::CliError;

#[derive(Debug, Clone, Serialize)]
struct Failure {
    at: f64,
    kind: String,
    message: String,
}

impl Failure {
    fn new(at: f64, e: &Error) -> Self {
        let kind = match PointStatus::from_error(e) {
            PointStatus::Failed { kind, .. } => kind,
            PointStatus::Ok => String::new(),
        };
        Self {
            at,
            kind,
            message: e.to_string(),
        }
    }
}

/// A CSV row plus the failures met while building it.
struct Row {
    cells: Vec<String>,
    failures: Vec<Failure>,
    ms: f64,
}

fn status<T>(r: &Result<T, Error>) -> String {
    match r {
        Ok(_) => "ok".into(),
        Err(e) => match PointStatus::from_error(e) {
            PointStatus::Failed { kind, .. } => kind,
            PointStatus::Ok => "ok".into(),
        },
    }
}

/// Evaluates `f` on every node, in parallel when `jobs != 1`, keeping grid order.
fn rows<F>(jobs: usize, grid: &[f64], f: F) -> Result<Vec<Row>, CliError>
where
    F: Fn(f64) -> (Vec<String>, Vec<Failure>) + Sync,
{
    let timed = |x: f64| {
        let started = Instant::now();
        let (cells, failures) = f(x);
        Row {
            cells,
            failures,
            ms: started.elapsed().as_secs_f64() * 1e3,
        }
    };
    if jobs == 1 {
        return Ok(grid.iter().map(|&x| timed(x)).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::input(format!("jobs: {e}")))?;
    Ok(pool.install(|| grid.par_iter().map(|&x| timed(x)).collect()))
}

fn nan_cells(n: usize) -> Vec<String> {
    vec![num(f64::NAN); n]
}

fn params_json(p: &Params) -> Value {
    json!({
        "kappa": p.kappa,
        "gamma_m": p.gamma_m,
        "omega_m": if p.omega_m.is_finite() { json!(p.omega_m) } else { json!("inf") },
        "n_th": p.n_th,
        "g_plus": p.g_plus,
        "g_minus": p.g_minus,
        "g_three": p.g_three,
        "cooperativity": p.cooperativity(),
        "ratio": p.ratio(),
    })
}

fn point_json(p: &Params) -> Result<Value, CliError> {
    let d = derive(p)?;
    let check = check_bad_cavity_condition(p);
    let asym = optimal_ratio_analytic(p.cooperativity(), p.n_th);
    Ok(json!({
        "params": params_json(p),
        "derived": {
            "r": d.r,
            "e_minus_2r": d.e_minus_2r(),
            "g_eff": d.g_eff,
            "gamma_opt": d.gamma_opt,
        },
        "analytic": {
            "ratio_opt": asym.ratio,
            "var_x1_min": min_variance_analytic(p.gamma_m / p.kappa, p.n_th, p.cooperativity()),
            "regime_warning": asym.regime_warning,
        },
        "validity": {
            "bad_cavity_lhs": check.lhs,
            "bad_cavity_rhs": if check.rhs.is_finite() { json!(check.rhs) } else { json!("inf") },
            "bad_cavity_ok": check.satisfied,
        },
    }))
}

fn report_json(r: &Report) -> Value {
    json!({
        "var_x1": r.var_x1,
        "var_x2": r.var_x2,
        "cross_x1x2": r.cross_x1x2,
        "n_eff": r.n_eff,
        "purity_squared": r.purity_squared(),
        "beta_occupancy": r.beta_occupancy,
        "beta_anomalous": r.beta_anomalous,
        "squeezing_db": r.squeezing_db,
    })
}

struct Finish<'a> {
    cfg: &'a RunConfig,
    started: Instant,
    out: Outputs,
}

impl<'a> Finish<'a> {
    fn new(cfg: &'a RunConfig) -> Result<Self, CliError> {
        Ok(Self {
            cfg,
            started: Instant::now(),
            out: Outputs::new(&cfg.out_dir, &cfg.subcommand)?,
        })
    }

    /// Writes the table and run summary. Fails with exit 2 only if every
    /// point failed; partial failures are listed in the summary.
    fn sweep(
        mut self,
        header: &[&'static str],
        rows: Vec<Row>,
        details: Value,
    ) -> Result<Vec<PathBuf>, CliError> {
        let mut table = Table::new(header);
        let mut failures = Vec::new();
        let mut point_ms = Vec::new();
        let mut failed_rows = 0;
        for row in rows {
            failed_rows += usize::from(!row.failures.is_empty());
            failures.extend(row.failures);
            point_ms.push(row.ms);
            table.push(row.cells);
        }
        self.out.table(&table)?;
        let n = table.len();
        self.out.summary(&json!({
            "subcommand": self.cfg.subcommand,
            "version": env!("CARGO_PKG_VERSION"),
            "config": self.cfg.values(),
            "rows": n,
            "failed_rows": failed_rows,
            "failures": failures,
            "details": details,
            "timing": {
                "total_s": self.started.elapsed().as_secs_f64(),
                "point_ms": point_ms,
            },
        }))?;
        if n > 0 && failed_rows == n {
            let first = &failures[0];
            return Err(CliError::numerical(
                first.kind.clone(),
                format!("all {n} points failed; first: {}", first.message),
            ));
        }
        Ok(self.out.written)
    }

    fn point(mut self, data: Value) -> Result<Vec<PathBuf>, CliError> {
        self.out.data(&data)?;
        self.out.summary(&json!({
            "subcommand": self.cfg.subcommand,
            "version": env!("CARGO_PKG_VERSION"),
            "config": self.cfg.values(),
            "timing": { "total_s": self.started.elapsed().as_secs_f64() },
        }))?;
        Ok(self.out.written)
    }
}

pub fn dispatch(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    match cfg.subcommand.as_str() {
        "steady" => steady(cfg),
        "sweep-ratio" => sweep_ratio(cfg),
        "optimize" => optimize(cfg),
        "spectrum" => spectrum(cfg),
        "floquet-sweep" => floquet_sweep(cfg),
        "third-tone" => third_tone(cfg),
        "compare-lindblad" => compare_lindblad(cfg),
        "check-validity" => check_validity(cfg),
        "bounds" => bounds(cfg),
        other => Err(CliError::input(format!("unknown subcommand `{other}`"))),
    }
}

fn steady(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let (_, p) = cfg.point()?;
    let backend = cfg.backend()?;
    let finish = Finish::new(cfg)?;
    let mut data = point_json(&p)?;
    let report = match &backend {
        Backend::Floquet(options) => {
            let res = periodic_steady_state(&p, options)?;
            data["floquet"] = json!({
                "var_x1_avg": res.var_x1_avg,
                "var_x1_min": res.var_x1_min,
                "var_x1_max": res.var_x1_max,
                "var_x1_start": res.var_x1_start,
                "periods_to_converge": res.periods_to_converge,
                "max_multiplier": res.max_multiplier,
            });
            res.report
        }
        other => other.evaluate(&p)?,
    };
    data["backend"] = json!(backend.tag());
    data["report"] = report_json(&report);
    finish.point(data)
}

fn sweep_ratio(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let base = cfg.base()?;
    let coop = cfg.number("coop")?;
    let grid = cfg.grid("ratio")?;
    let backend = cfg.backend()?;
    let finish = Finish::new(cfg)?;
    let rows = rows(cfg.jobs()?, &grid, |q| {
        match base.params(coop, q).and_then(|p| backend.evaluate(&p)) {
            Ok(r) => (
                vec![
                    num(q),
                    num(r.var_x1),
                    num(r.var_x2),
                    num(r.n_eff),
                    opt(r.beta_occupancy),
                ],
                vec![],
            ),
            Err(e) => (
                [vec![num(q)], nan_cells(3), vec![String::new()]].concat(),
                vec![Failure::new(q, &e)],
            ),
        }
    })?;
    let header = ["ratio", "var_x1", "var_x2", "n_eff", "beta_occ"];
    finish.sweep(
        &header,
        rows,
        json!({ "backend": backend.tag(), "coop": coop }),
    )
}

fn optimize(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let base = cfg.base()?;
    let grid = cfg.grid("coop")?;
    let backend = cfg.backend()?;
    let search = cfg.search()?;
    let finish = Finish::new(cfg)?;
    let rows = rows(cfg.jobs()?, &grid, |c| {
        let main = sweep_point(&backend, c, &base, &search);
        let reduced = sweep_point(&Backend::Lindblad, c, &base, &search);
        let mut failures = Vec::new();
        for rec in [&main, &reduced] {
            if let PointStatus::Failed { kind, message } = &rec.status {
                failures.push(Failure {
                    at: c,
                    kind: format!("{}:{kind}", rec.backend),
                    message: message.clone(),
                });
            }
        }
        let state = match &main.status {
            PointStatus::Ok => "ok".to_string(),
            PointStatus::Failed { kind, .. } => kind.clone(),
        };
        let cells = vec![
            num(c),
            num(main.ratio_opt),
            num(main.var_x1_opt),
            num(main.n_eff),
            opt(main.beta_occ),
            num(main.ratio_analytic),
            num(main.var_x1_analytic),
            num(reduced.ratio_opt),
            num(reduced.var_x1_opt),
            num(reduced.n_eff),
            flag(main.regime_warning),
            flag(main.bad_cavity_ok),
            state,
        ];
        (cells, failures)
    })?;
    let header = [
        "coop",
        "ratio_opt",
        "var_x1_opt",
        "n_eff",
        "beta_occ",
        "ratio_analytic",
        "var_x1_analytic",
        "ratio_lindblad",
        "var_x1_lindblad",
        "n_eff_lindblad",
        "regime_warning",
        "bad_cavity_ok",
        "status",
    ];
    finish.sweep(&header, rows, json!({ "backend": backend.tag() }))
}

fn spectrum(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let (_, p) = cfg.point()?;
    let grid = cfg.omega_grid()?;
    let mut finish = Finish::new(cfg)?;
    let analytic = output_spectrum_analytic(&p, &grid)?;
    let numeric = output_spectrum_numeric(&p, &grid)?;
    let mut table = Table::new(&["omega", "s_analytic", "s_numeric"]);
    for ((w, a), n) in grid.iter().zip(&analytic.s_values).zip(&numeric.s_values) {
        table.push(vec![num(*w), num(*a), num(*n)]);
    }
    finish.out.table(&table)?;
    let mut data = point_json(&p)?;
    let g_eff = derive(&p)?.g_eff;
    data["peaks"] = json!({
        "maxima": analytic.local_maxima(),
        "predicted_position": split_peak_position(&p)?,
        "two_g_eff": 2.0 * g_eff,
    });
    // Spectra are computed in the rotating-wave limit whatever Ω is.
    data["omega_ignored"] = json!(p.omega_m.is_finite());
    let weight = integrated_weight(&p);
    let exact = omsqueeze::rwa::steady_state(&p)?.beta_occupancy;
    data["integrated_weight"] = match &weight {
        Ok(w) => json!({
            "area": w.area,
            "beta_occ_inferred": w.beta_occ_inferred,
            "beta_occ_exact": exact,
            "relative_error": exact.map(|b| (w.beta_occ_inferred - b) / b),
        }),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let written = finish.point(data)?;
    weight?;
    Ok(written)
}

fn require_bad_cavity(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.is_bad_cavity()? {
        Ok(())
    } else {
        Err(CliError::input(format!(
            "{} needs kappa-over-omega > 0",
            cfg.subcommand
        )))
    }
}

fn rwa_of(base: &SweepBase<f64>) -> SweepBase<f64> {
    SweepBase {
        omega_m: f64::INFINITY,
        third_tone: ThirdTone::Off,
        ..*base
    }
}

fn floquet_sweep(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    require_bad_cavity(cfg)?;
    let base = cfg.base()?;
    let grid = cfg.grid("coop")?;
    let options = cfg.floquet_options()?;
    let backend = Backend::Floquet(options);
    let search = cfg.search()?;
    let finish = Finish::new(cfg)?;
    let rwa = rwa_of(&base);
    let rows = rows(cfg.jobs()?, &grid, |c| {
        let mut failures = Vec::new();
        let full = optimize_at(&backend, &base, c, &search).and_then(|(o, _)| {
            Ok((
                o.ratio,
                periodic_steady_state(&base.params(c, o.ratio)?, &options)?,
            ))
        });
        let limit = optimize_at(&Backend::Rwa, &rwa, c, &search);
        let mut cells = vec![num(c)];
        match &full {
            Ok((q, res)) => {
                let ok = check_bad_cavity_condition(&base.params(c, *q).expect("valid at optimum"))
                    .satisfied;
                cells.extend([
                    num(*q),
                    num(res.var_x1_avg),
                    num(res.var_x1_min),
                    num(res.var_x1_max),
                    num(res.var_x1_start),
                    num(res.report.n_eff),
                    res.periods_to_converge.to_string(),
                    flag(ok),
                ]);
            }
            Err(e) => {
                failures.push(Failure::new(c, e));
                cells.extend([nan_cells(6), vec![String::new(), String::new()]].concat());
            }
        }
        match &limit {
            Ok((o, r)) => cells.extend([num(o.ratio), num(r.var_x1)]),
            Err(e) => {
                failures.push(Failure::new(c, e));
                cells.extend(nan_cells(2));
            }
        }
        cells.push(status(&full));
        (cells, failures)
    })?;
    let header = [
        "coop",
        "ratio_opt",
        "var_x1_avg",
        "var_x1_min",
        "var_x1_max",
        "var_x1_start",
        "n_eff",
        "periods",
        "bad_cavity_ok",
        "ratio_rwa",
        "var_x1_rwa",
        "status",
    ];
    finish.sweep(
        &header,
        rows,
        json!({ "kappa_over_omega": 1.0 / base.omega_m }),
    )
}

fn third_tone(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    require_bad_cavity(cfg)?;
    let base = SweepBase {
        third_tone: ThirdTone::Off,
        ..cfg.base()?
    };
    let matched = SweepBase {
        third_tone: ThirdTone::MatchBlue,
        ..base
    };
    let grid = cfg.grid("coop")?;
    let backend = Backend::Floquet(cfg.floquet_options()?);
    let search = cfg.search()?;
    let finish = Finish::new(cfg)?;
    let rows = rows(cfg.jobs()?, &grid, |c| {
        let off = optimize_at(&backend, &base, c, &search);
        let on = optimize_at(&backend, &matched, c, &search);
        let mut failures = Vec::new();
        let mut cells = vec![num(c)];
        for res in [&off, &on] {
            match res {
                Ok((o, r)) => cells.extend([num(o.ratio), num(r.var_x1)]),
                Err(e) => {
                    failures.push(Failure::new(c, e));
                    cells.extend(nan_cells(2));
                }
            }
        }
        let change = match (&off, &on) {
            (Ok((_, a)), Ok((_, b))) => (b.var_x1 - a.var_x1) / a.var_x1,
            _ => f64::NAN,
        };
        cells.extend([num(change), status(&off), status(&on)]);
        (cells, failures)
    })?;
    let header = [
        "coop",
        "ratio_off",
        "var_x1_off",
        "ratio_matched",
        "var_x1_matched",
        "relative_change",
        "status_off",
        "status_matched",
    ];
    finish.sweep(
        &header,
        rows,
        json!({ "kappa_over_omega": 1.0 / base.omega_m }),
    )
}

fn compare_lindblad(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let base = rwa_of(&cfg.base()?);
    let grid = cfg.grid("coop")?;
    let search = cfg.search()?;
    let finish = Finish::new(cfg)?;
    let floor = base.gamma_m * (1.0 + 2.0 * base.n_th) / base.kappa;
    let rows = rows(cfg.jobs()?, &grid, |c| {
        let full = optimize_at(&Backend::Rwa, &base, c, &search);
        let reduced = optimize_at(&Backend::Lindblad, &base, c, &search);
        let same_ratio = full
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|(o, _)| lindblad_steady_state(&base.params(c, o.ratio)?));
        let mut failures = Vec::new();
        let mut cells = vec![num(c)];
        for res in [&full, &reduced] {
            match res {
                Ok((o, r)) => cells.extend([num(o.ratio), num(r.var_x1)]),
                Err(e) => {
                    failures.push(Failure::new(c, e));
                    cells.extend(nan_cells(2));
                }
            }
        }
        let at_full = same_ratio.as_ref().map(|r| r.var_x1).unwrap_or(f64::NAN);
        let gap = full
            .as_ref()
            .map(|(_, r)| r.var_x1 - at_full)
            .unwrap_or(f64::NAN);
        cells.extend([num(at_full), num(gap), num(floor), status(&full)]);
        (cells, failures)
    })?;
    let header = [
        "coop",
        "ratio_full",
        "var_x1_full",
        "ratio_lindblad",
        "var_x1_lindblad",
        "var_x1_lindblad_at_full_ratio",
        "gap",
        "saturation_floor",
        "status",
    ];
    finish.sweep(&header, rows, json!({}))
}

/// RWA optimum at `c` together with the full parameters there.
fn rwa_optimum(
    base: &SweepBase<f64>,
    c: f64,
    search: &omsqueeze::optimize::RatioSearch<f64>,
) -> Result<(Params, Report), Error> {
    let (o, r) = optimize_at(&Backend::Rwa, &rwa_of(base), c, search)?;
    Ok((base.params(c, o.ratio)?, r))
}

fn check_validity(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let base = cfg.base()?;
    let grid = cfg.grid("coop")?;
    let search = cfg.search()?;
    let finish = Finish::new(cfg)?;
    let rows = rows(cfg.jobs()?, &grid, |c| {
        match rwa_optimum(&base, c, &search) {
            Ok((p, _)) => {
                let check = check_bad_cavity_condition(&p);
                let cells = vec![
                    num(c),
                    num(p.ratio()),
                    num(check.lhs),
                    num(check.rhs),
                    flag(check.satisfied),
                    "ok".into(),
                ];
                (cells, vec![])
            }
            Err(e) => {
                let cells = [
                    vec![num(c)],
                    nan_cells(3),
                    vec![String::new(), status::<()>(&Err(e.clone()))],
                ]
                .concat();
                (cells, vec![Failure::new(c, &e)])
            }
        }
    })?;
    let header = ["coop", "ratio", "lhs", "rhs", "satisfied", "status"];
    finish.sweep(
        &header,
        rows,
        json!({ "much_less_factor": omsqueeze::model::MUCH_LESS_FACTOR }),
    )
}

fn bounds(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let base = cfg.base()?;
    let grid = cfg.grid("coop")?;
    let search = cfg.search()?;
    let finish = Finish::new(cfg)?;
    let rows = rows(cfg.jobs()?, &grid, |c| {
        let res =
            rwa_optimum(&base, c, &search).and_then(|(p, r)| Ok((p.ratio(), derive(&p)?.r, r)));
        match res {
            Ok((q, sq, r)) => {
                let occ = r.beta_occupancy.unwrap_or(f64::NAN);
                let b = squeezing_bounds(sq, occ, base.n_th);
                let cells = vec![
                    num(c),
                    num(q),
                    num(r.var_x1),
                    num(b.upper),
                    num(b.lower),
                    num(b.zeta),
                    num(occ),
                    opt(r.beta_anomalous),
                    num(b.beta_anomalous_estimate),
                    flag(r.var_x1 <= b.upper),
                    flag(b.lower <= r.var_x1),
                    "ok".into(),
                ];
                (cells, vec![])
            }
            Err(e) => {
                let cells = [
                    vec![num(c)],
                    nan_cells(8),
                    vec![String::new(), String::new(), status::<()>(&Err(e.clone()))],
                ]
                .concat();
                (cells, vec![Failure::new(c, &e)])
            }
        }
    })?;
    let header = [
        "coop",
        "ratio",
        "var_x1",
        "upper",
        "lower",
        "zeta",
        "beta_occ",
        "beta_anom",
        "beta_anom_estimate",
        "upper_holds",
        "lower_holds",
        "status",
    ];
    finish.sweep(&header, rows, json!({}))
}
