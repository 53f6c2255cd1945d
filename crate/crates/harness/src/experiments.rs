//! Experiment drivers. Each returns its table plus the summary numbers the
//! acceptance checks need, and optionally writes its CSV into an
//! [`OutputDir`].

use adifdtd::norms::{functional_i_with, functional_iii_with};
use adifdtd::operators::time_diff;
use adifdtd::snapshot::dump_state;
use adifdtd::{
    divergence, make_grid, metrics, observed_rate, sample_exact, step, zero_state, AnalyticConstants, Axis, DivergenceReport,
    ErrorMetrics, Grid64, Medium64, State64,
};

use crate::config::{ConfigError, Experiment, Init, RunConfig, SnapshotFormat};
use crate::error::{HarnessError, HarnessResult};
use crate::output::{Cell, OutputDir, Table};

fn setup(cfg: &RunConfig, grid: [usize; 3], dt: f64) -> HarnessResult<(Grid64, Medium64, State64)> {
    let g = make_grid(grid[0], grid[1], grid[2], dt)?;
    let m = Medium64::new(cfg.eps, cfg.mu)?;
    let s = match cfg.init {
        Init::Exact => sample_exact(0.0, &g),
        Init::Zero => zero_state(&g),
    };
    Ok((g, m, s))
}

/// Whether error metrics against the closed-form solution make sense.
fn has_reference(cfg: &RunConfig) -> bool {
    cfg.init == Init::Exact && cfg.eps == 1.0 && cfg.mu == 1.0
}

/// Steps `state` to level `n_steps`, calling `visit(prev, cur, report)` at
/// every level including 0. `prev` is the previous full level.
fn drive(
    grid: &Grid64,
    med: &Medium64,
    mut state: State64,
    n_steps: usize,
    report: &[usize],
    mut visit: impl FnMut(Option<&State64>, &State64, bool) -> HarnessResult<()>,
) -> HarnessResult<State64> {
    visit(None, &state, report.contains(&0))?;
    let mut next_report = report.iter().copied().filter(|&l| l > 0).peekable();
    for n in 1..=n_steps {
        let next = step(&state, grid, med).map_err(|source| HarnessError::Solver { step: n, source })?;
        let is_report = next_report.peek() == Some(&n);
        if is_report {
            next_report.next();
        }
        visit(Some(&state), &next, is_report)?;
        state = next;
    }
    Ok(state)
}

fn snapshot(cfg: &RunConfig, out: &mut Option<&mut OutputDir>, s: &State64, g: &Grid64) -> HarnessResult<()> {
    let (Some(o), binary) = (out.as_deref_mut(), cfg.snapshots == SnapshotFormat::Binary) else {
        return Ok(());
    };
    if cfg.snapshots == SnapshotFormat::Off {
        return Ok(());
    }
    let dir = o.root().join("snapshots");
    std::fs::create_dir_all(&dir)?;
    let stem = format!("level_{:06}", s.time_level.round() as u64);
    for name in dump_state(&dir, &stem, s, g, binary)? {
        o.record(&format!("snapshots/{name}"));
    }
    Ok(())
}

fn relative_drift(v: f64, base: f64) -> f64 {
    if base == 0.0 {
        v.abs()
    } else {
        ((v - base) / base).abs()
    }
}

/// The eight identity functionals in the order Q1x, Q1y, Q1z, Q2x, Q2y,
/// Q2z, Q3, Q4. The `δ_t` ones are `None` at level 0.
fn identities(prev: Option<&State64>, cur: &State64, med: &Medium64, g: &Grid64) -> HarnessResult<[Option<f64>; 8]> {
    let r = adifdtd::energy_report(prev, cur, med, g)?;
    let q2 = r.q2.map_or([None; 3], |q| q.map(Some));
    Ok([Some(r.q1[0]), Some(r.q1[1]), Some(r.q1[2]), q2[0], q2[1], q2[2], Some(r.q3), r.q4])
}

pub const IDENTITY_NAMES: [&str; 8] = ["Q1x", "Q1y", "Q1z", "Q2x", "Q2y", "Q2z", "Q3", "Q4"];

/// Tracks the first value of each functional and the worst relative drift.
#[derive(Debug, Clone, Default)]
struct DriftTracker {
    base: [Option<f64>; 8],
    worst: [f64; 8],
}

impl DriftTracker {
    fn update(&mut self, q: &[Option<f64>; 8]) -> [Option<f64>; 8] {
        let mut d = [None; 8];
        for i in 0..8 {
            let Some(v) = q[i] else { continue };
            let b = *self.base[i].get_or_insert(v);
            let r = relative_drift(v, b);
            self.worst[i] = self.worst[i].max(r);
            d[i] = Some(r);
        }
        d
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub table: Table,
    /// Worst relative drift of each identity functional over all steps.
    pub max_drift: [f64; 8],
    pub final_state: State64,
}

/// Plain simulation: identities, divergence and (when a reference exists)
/// error metrics at each report level.
pub fn run(cfg: &RunConfig, mut out: Option<&mut OutputDir>) -> HarnessResult<RunOutcome> {
    let (g, m, s0) = setup(cfg, cfg.grid, cfg.dt)?;
    let reference = has_reference(cfg);
    let mut header: Vec<String> = vec!["time_level".into()];
    header.extend(IDENTITY_NAMES.iter().map(|s| s.to_string()));
    header.extend(
        ["max_drift", "norm_E", "norm_H", "DivE_Linf", "DivE_L2", "DivH_Linf", "DivH_L2", "EH0", "EH1", "EH2", "EHt1", "EHt2", "E_rel", "H_rel"]
            .map(String::from),
    );
    let mut table = Table::new(header);
    let mut drift = DriftTracker::default();
    let levels = cfg.report_levels();
    let fin = drive(&g, &m, s0, cfg.steps(), &levels, |prev, cur, is_report| {
        let q = identities(prev, cur, &m, &g)?;
        drift.update(&q);
        if !is_report {
            return Ok(());
        }
        let d = divergence(cur, &m, &g)?.report;
        let met = if reference { Some(metrics(prev, cur, &g)?) } else { None };
        let mut row: Vec<Cell> = vec![Cell::Int(cur.time_level.round() as usize)];
        row.extend(q.iter().map(|&v| Cell::from(v)));
        let worst = drift.worst.iter().copied().fold(0.0, f64::max);
        row.push(worst.into());
        row.push(adifdtd::norm_e(&cur.e, &m, &g)?.into());
        row.push(adifdtd::norm_h(&cur.h, &m, &g)?.into());
        row.extend([d.div_e_linf, d.div_e_l2, d.div_h_linf, d.div_h_l2].map(Cell::from));
        match met {
            Some(e) => row.extend([
                Cell::from(e.eh0),
                e.eh1.into(),
                e.eh2.into(),
                e.eht1.into(),
                e.eht2.into(),
                e.e_rel.into(),
                e.h_rel.into(),
            ]),
            None => row.extend([Cell::Empty; 7]),
        }
        table.push(row);
        snapshot(cfg, &mut out, cur, &g)
    })?;
    if let Some(o) = out {
        o.write_table("run.csv", &table)?;
    }
    Ok(RunOutcome { table, max_drift: drift.worst, final_state: fin })
}

/// Energy-norm summary of one level against the first level(s).
#[derive(Debug, Clone, Copy, Default)]
struct EnergyNorms {
    /// `‖·‖₁` and `‖·‖₂` squared, with and without perturbation terms, of
    /// the state: [n1, n2, n1*, n2*].
    fields: [f64; 4],
    /// Same for `δ_t` between the previous and current level.
    rates: Option<[f64; 4]>,
}

fn energy_norms(prev: Option<&State64>, cur: &State64, m: &Medium64, g: &Grid64) -> HarnessResult<EnergyNorms> {
    let four = |s: &State64| -> HarnessResult<[f64; 4]> {
        Ok([
            functional_i_with(s, Axis::X, m, g, true)?,
            functional_iii_with(s, m, g, true)?,
            functional_i_with(s, Axis::X, m, g, false)?,
            functional_iii_with(s, m, g, false)?,
        ])
    };
    let rates = match prev {
        Some(p) => Some(four(&time_diff(cur, p, g.dt)?)?),
        None => None,
    };
    Ok(EnergyNorms { fields: four(cur)?, rates })
}

pub const AUDIT_RATIO_NAMES: [&str; 16] = [
    "EH1_n0", "EH1_n", "EHt1_n0", "EHt1_n", "EH2_n0", "EH2_n", "EHt2_n0", "EHt2_n", "EH1s_n0", "EH1s_n", "EHt1s_n0", "EHt1s_n",
    "EH2s_n0", "EH2s_n", "EHt2s_n0", "EHt2s_n",
];

/// Ratio columns in [`AUDIT_RATIO_NAMES`] order. Norms are square roots
/// of the functionals; `_n0` is the relative change from the first level,
/// `_n` the ratio to the exact solution's continuous norm.
fn audit_ratios(cur: &EnergyNorms, first: &EnergyNorms, first_rates: Option<&[f64; 4]>) -> Vec<Cell> {
    let k = AnalyticConstants::<f64>::new();
    let field_scale = [k.ehx(), k.eh()];
    let rate_scale = [k.ehxt(), k.eht()];
    let mut cells = Vec::with_capacity(16);
    for starred in [false, true] {
        for j in 0..2 {
            let idx = j + if starred { 2 } else { 0 };
            let v = cur.fields[idx].sqrt();
            let b = first.fields[idx].sqrt();
            cells.push(Cell::Real(relative_drift(v, b)));
            cells.push(Cell::Real(v / field_scale[j]));
            match (cur.rates, first_rates) {
                (Some(r), Some(b)) => {
                    let (v, b) = (r[idx].sqrt(), b[idx].sqrt());
                    cells.push(Cell::Real(relative_drift(v, b)));
                    cells.push(Cell::Real(v / rate_scale[j]));
                }
                _ => cells.extend([Cell::Empty; 2]),
            }
        }
    }
    cells
}

#[derive(Debug, Clone)]
pub struct EnergyAudit {
    pub table: Table,
    /// Worst relative drift of each squared identity functional.
    pub max_drift: [f64; 8],
}

/// Energy audit: relative changes and exact-norm ratios of both energy
/// norms (with and without perturbation terms), plus the drift of every
/// squared identity functional.
pub fn energy_audit(cfg: &RunConfig, mut out: Option<&mut OutputDir>) -> HarnessResult<EnergyAudit> {
    let (g, m, s0) = setup(cfg, cfg.grid, cfg.dt)?;
    let mut header: Vec<String> = vec!["time_level".into()];
    header.extend(AUDIT_RATIO_NAMES.iter().map(|s| s.to_string()));
    header.extend(IDENTITY_NAMES.iter().map(|s| format!("{s}_drift")));
    let mut table = Table::new(header);
    let mut drift = DriftTracker::default();
    let mut first: Option<EnergyNorms> = None;
    let mut first_rates: Option<[f64; 4]> = None;
    let levels = cfg.report_levels();
    drive(&g, &m, s0, cfg.steps(), &levels, |prev, cur, is_report| {
        let q = identities(prev, cur, &m, &g)?;
        let d = drift.update(&q);
        let level = cur.time_level.round() as usize;
        if !is_report && level > 1 {
            return Ok(());
        }
        let en = energy_norms(prev, cur, &m, &g)?;
        let base = *first.get_or_insert(en);
        if first_rates.is_none() {
            first_rates = en.rates;
        }
        if !is_report {
            return Ok(());
        }
        let mut row = vec![Cell::Int(level)];
        row.extend(audit_ratios(&en, &base, first_rates.as_ref()));
        row.extend(d.iter().map(|&v| Cell::from(v)));
        table.push(row);
        snapshot(cfg, &mut out, cur, &g)
    })?;
    if let Some(o) = out {
        o.write_table("energy-audit.csv", &table)?;
    }
    Ok(EnergyAudit { table, max_drift: drift.worst })
}

/// Observed rates against the previous row, in the order EH0, EH1, EHt1,
/// EH2, EHt2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    pub eh0: f64,
    pub eh1: f64,
    pub eht1: f64,
    pub eh2: f64,
    pub eht2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub time_level: usize,
    /// `Δt` for temporal studies, `h` for spatial ones.
    pub resolution: f64,
    pub metrics: ErrorMetrics<f64>,
    pub rates: Option<Rates>,
}

#[derive(Debug, Clone)]
pub struct Convergence {
    pub table: Table,
    pub rows: Vec<ConvergenceRow>,
}

/// Rate between two rows; identical resolutions give 0.
pub fn rate(e1: f64, e2: f64, h1: f64, h2: f64) -> HarnessResult<f64> {
    if h1 == h2 {
        return Ok(0.0);
    }
    Ok(observed_rate(e1, e2, h1, h2)?)
}

fn rates_between(a: &ConvergenceRow, b: &ConvergenceRow) -> HarnessResult<Rates> {
    let (h1, h2) = (a.resolution, b.resolution);
    let r = |x: f64, y: f64| rate(x, y, h1, h2);
    let t = |x: Option<f64>, y: Option<f64>| match (x, y) {
        (Some(x), Some(y)) => r(x, y),
        _ => Ok(f64::NAN),
    };
    Ok(Rates {
        eh0: r(a.metrics.eh0, b.metrics.eh0)?,
        eh1: r(a.metrics.eh1, b.metrics.eh1)?,
        eht1: t(a.metrics.eht1, b.metrics.eht1)?,
        eh2: r(a.metrics.eh2, b.metrics.eh2)?,
        eht2: t(a.metrics.eht2, b.metrics.eht2)?,
    })
}

/// One convergence cell: run to the final level from the exact solution and
/// measure the error there.
fn convergence_cell(cfg: &RunConfig, grid: [usize; 3], dt: f64, resolution: f64) -> HarnessResult<ConvergenceRow> {
    let (g, m, s0) = setup(cfg, grid, dt)?;
    let n = (cfg.t_final / dt).round() as usize;
    let mut result = None;
    drive(&g, &m, s0, n, &[n], |prev, cur, is_report| {
        if is_report {
            result = Some(metrics(prev, cur, &g)?);
        }
        Ok(())
    })?;
    Ok(ConvergenceRow {
        time_level: n,
        resolution,
        metrics: result.expect("final level is always reported"),
        rates: None,
    })
}

fn convergence_table(res_name: &str, rows: &[ConvergenceRow]) -> Table {
    let mut t = Table::new([
        "time_level",
        res_name,
        "EH0",
        "EH0_rate",
        "EH1",
        "EH1_rate",
        "EHt1",
        "EHt1_rate",
        "EH2",
        "EH2_rate",
        "EHt2",
        "EHt2_rate",
        "E_rel",
        "H_rel",
    ]);
    for r in rows {
        let m = &r.metrics;
        let rr = |f: fn(&Rates) -> f64| Cell::from(r.rates.as_ref().map(f));
        t.push(vec![
            r.time_level.into(),
            r.resolution.into(),
            m.eh0.into(),
            rr(|x| x.eh0),
            m.eh1.into(),
            rr(|x| x.eh1),
            m.eht1.into(),
            rr(|x| x.eht1),
            m.eh2.into(),
            rr(|x| x.eh2),
            m.eht2.into(),
            rr(|x| x.eht2),
            m.e_rel.into(),
            m.h_rel.into(),
        ]);
    }
    t
}

fn require_reference(cfg: &RunConfig) -> HarnessResult<()> {
    if !has_reference(cfg) {
        return Err(ConfigError::Invalid {
            key: "init",
            line: None,
            reason: format!("{} compares against the closed-form solution, which needs init = exact and eps = mu = 1", cfg.experiment),
        }
        .into());
    }
    Ok(())
}

fn finish_rows(mut rows: Vec<ConvergenceRow>) -> HarnessResult<Vec<ConvergenceRow>> {
    for i in 1..rows.len() {
        let r = rates_between(&rows[i - 1], &rows[i])?;
        rows[i].rates = Some(r);
    }
    Ok(rows)
}

/// Temporal study: fixed grid, one row per entry of `dt_list`.
pub fn converge_time(cfg: &RunConfig, out: Option<&mut OutputDir>) -> HarnessResult<Convergence> {
    require_reference(cfg)?;
    let rows = cfg
        .dt_list
        .iter()
        .map(|&dt| convergence_cell(cfg, cfg.grid, dt, dt))
        .collect::<HarnessResult<Vec<_>>>()?;
    let rows = finish_rows(rows)?;
    let table = convergence_table("dt", &rows);
    if let Some(o) = out {
        o.write_table("converge-time.csv", &table)?;
    }
    Ok(Convergence { table, rows })
}

/// Spatial study: fixed `dt`, one row per cubic grid in `grid_list`.
pub fn converge_space(cfg: &RunConfig, out: Option<&mut OutputDir>) -> HarnessResult<Convergence> {
    require_reference(cfg)?;
    let rows = cfg
        .grid_list
        .iter()
        .map(|&n| convergence_cell(cfg, [n, n, n], cfg.dt, 1.0 / n as f64))
        .collect::<HarnessResult<Vec<_>>>()?;
    let rows = finish_rows(rows)?;
    let table = convergence_table("h", &rows);
    if let Some(o) = out {
        o.write_table("converge-space.csv", &table)?;
    }
    Ok(Convergence { table, rows })
}

#[derive(Debug, Clone)]
pub struct DivergenceAudit {
    pub table: Table,
    /// `(level, report)` for every report level, level 0 first.
    pub rows: Vec<(usize, DivergenceReport<f64>)>,
}

pub fn divergence_audit(cfg: &RunConfig, mut out: Option<&mut OutputDir>) -> HarnessResult<DivergenceAudit> {
    let (g, m, s0) = setup(cfg, cfg.grid, cfg.dt)?;
    let mut table = Table::new(["time_level", "t", "DivE_Linf", "DivE_L2", "DivH_Linf", "DivH_L2"]);
    let mut rows = Vec::new();
    drive(&g, &m, s0, cfg.steps(), &cfg.report_levels(), |_, cur, is_report| {
        if !is_report {
            return Ok(());
        }
        let d = divergence(cur, &m, &g)?.report;
        let level = cur.time_level.round() as usize;
        table.push(vec![
            level.into(),
            (level as f64 * cfg.dt).into(),
            d.div_e_linf.into(),
            d.div_e_l2.into(),
            d.div_h_linf.into(),
            d.div_h_l2.into(),
        ]);
        rows.push((level, d));
        snapshot(cfg, &mut out, cur, &g)
    })?;
    if let Some(o) = out {
        o.write_table("divergence-audit.csv", &table)?;
    }
    Ok(DivergenceAudit { table, rows })
}

pub const STABILITY_DRIFT_TOL: f64 = 1e-10;
pub const STABILITY_GROWTH_BOUND: f64 = 10.0;

#[derive(Debug, Clone)]
pub struct Stability {
    pub table: Table,
    pub courant: f64,
    /// Worst relative drift of the third identity functional over all steps.
    pub q3_drift: f64,
    pub initial_max: f64,
    /// Largest field magnitude seen at any level.
    pub max_field: f64,
    pub pass: bool,
}

/// Long run at a large time step. Passes iff the third identity holds to
/// [`STABILITY_DRIFT_TOL`] and no field exceeds
/// [`STABILITY_GROWTH_BOUND`] times its initial maximum.
pub fn stability(cfg: &RunConfig, mut out: Option<&mut OutputDir>) -> HarnessResult<Stability> {
    let (g, m, s0) = setup(cfg, cfg.grid, cfg.dt)?;
    let initial_max = s0.max_abs();
    let mut base = None;
    let mut q3_drift = 0.0_f64;
    let mut max_field = 0.0_f64;
    let mut table = Table::new(["time_level", "t", "Q3", "Q3_drift", "max_field"]);
    drive(&g, &m, s0, cfg.steps(), &cfg.report_levels(), |_, cur, is_report| {
        let q3 = functional_iii_with(cur, &m, &g, true)?;
        let d = relative_drift(q3, *base.get_or_insert(q3));
        let mx = cur.max_abs();
        q3_drift = q3_drift.max(d);
        max_field = max_field.max(mx);
        if is_report {
            let level = cur.time_level.round() as usize;
            table.push(vec![level.into(), (level as f64 * cfg.dt).into(), q3.into(), d.into(), mx.into()]);
            snapshot(cfg, &mut out, cur, &g)?;
        }
        Ok(())
    })?;
    let pass = q3_drift <= STABILITY_DRIFT_TOL && max_field <= STABILITY_GROWTH_BOUND * initial_max;
    if let Some(o) = out {
        o.write_table("stability.csv", &table)?;
    }
    Ok(Stability {
        table,
        courant: g.courant_number(&m),
        q3_drift,
        initial_max,
        max_field,
        pass,
    })
}

/// Runs `cfg.experiment`, writing its CSV, `config.echo` and `MANIFEST`
/// into `cfg.out`. Returns the files written and a one-line summary.
pub fn execute(cfg: &RunConfig) -> HarnessResult<(Vec<String>, String)> {
    cfg.validate()?;
    let mut out = OutputDir::create(&cfg.out)?;
    out.echo_config(cfg)?;
    let o = Some(&mut out);
    let summary = match cfg.experiment {
        Experiment::Run => {
            let r = run(cfg, o)?;
            format!("max identity drift {:.3e}", r.max_drift.iter().copied().fold(0.0, f64::max))
        }
        Experiment::EnergyAudit => {
            let r = energy_audit(cfg, o)?;
            format!("max identity drift {:.3e}", r.max_drift.iter().copied().fold(0.0, f64::max))
        }
        Experiment::ConvergeTime | Experiment::ConvergeSpace => {
            let r = if cfg.experiment == Experiment::ConvergeTime { converge_time(cfg, o)? } else { converge_space(cfg, o)? };
            let last = r.rows.last().and_then(|x| x.rates);
            match last {
                Some(x) => format!("last rates EH1 {:.4} EH2 {:.4}", x.eh1, x.eh2),
                None => "single row, no rates".into(),
            }
        }
        Experiment::DivergenceAudit => {
            let r = divergence_audit(cfg, o)?;
            let worst = r.rows.iter().map(|(_, d)| d.div_e_linf.max(d.div_e_l2)).fold(0.0, f64::max);
            format!("max divergence of eps E {worst:.3e}")
        }
        Experiment::Stability => {
            let r = stability(cfg, o)?;
            format!(
                "{} (Courant {:.2}, Q3 drift {:.3e}, max field {:.3e} vs initial {:.3e})",
                if r.pass { "stable" } else { "UNSTABLE" },
                r.courant,
                r.q3_drift,
                r.max_field,
                r.initial_max
            )
        }
    };
    Ok((out.finish()?, summary))
}
