//! Experiment drivers: residual decay, approximate-vs-actual difference
//! growth, and nonuniform dependence, with CSV tables and JSON summaries.
//!
//! Runs over different `n` are independent and execute on the current
//! rayon pool; results are merged in `n` order, so identical plans produce
//! bit-identical reports regardless of thread count.

use crate::ansatz::{
    approximate_solution, exponent_report, initial_data, interpolation_bound, ApproxConfig,
    ExponentReport,
};
use crate::integrator::{
    integrate, size_check, suggested_dt, BlowUp, IntegratorConfig, SizeCheck, Trajectory,
};
use crate::model::{StatePair, SystemParams};
use crate::spectral::{PeriodicGrid, SobolevIndex, SpectralError};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;

/// Fitted slopes must sit within this distance of the predicted exponent.
pub const SLOPE_TOLERANCE: f64 = 0.35;

/// Data-difference slope tolerance in the nonuniform-dependence verdict.
pub const DATA_SLOPE_TOLERANCE: f64 = 0.1;

/// Times at which solution differences are sampled.
pub const SAMPLE_TIMES: [f64; 4] = [0.25, 0.5, 0.75, 0.95];

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("blow-up in run n={n}, omega={omega}: {source}")]
    BlowUp { n: u32, omega: i32, source: BlowUp },
    #[error("failed to write output: {0}")]
    Io(#[from] std::io::Error),
}

/// One experiment campaign: a parameter quadruple, regularities, the list
/// of frequencies, the time horizon and the step constant.
///
/// The grid rule is fixed: `N(n)` is the smallest power of two at or above
/// `16 * max(p, q, 2) * n`, which keeps every nonlinear product of the
/// n-mode data alias-free with margin.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentPlan {
    pub params: SystemParams,
    pub s: f64,
    pub sigma: f64,
    pub n_list: Vec<u32>,
    pub t_end: f64,
    pub cfl: f64,
}

impl ExperimentPlan {
    pub fn new(
        params: SystemParams,
        s: f64,
        sigma: f64,
        n_list: Vec<u32>,
        t_end: f64,
        cfl: f64,
    ) -> Result<Self, ExperimentError> {
        let plan = Self {
            params,
            s,
            sigma,
            n_list,
            t_end,
            cfl,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if !(self.s > 2.5) {
            return Err(ExperimentError::InvalidPlan(format!(
                "s must exceed 5/2 (got {})",
                self.s
            )));
        }
        if !self.sigma.is_finite() {
            return Err(ExperimentError::InvalidPlan("sigma must be finite".into()));
        }
        if self.n_list.is_empty() {
            return Err(ExperimentError::InvalidPlan("n list is empty".into()));
        }
        if self.n_list[0] < 1 || self.n_list.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ExperimentError::InvalidPlan(
                "n list must be strictly increasing and >= 1".into(),
            ));
        }
        if !self.t_end.is_finite() || self.t_end <= 0.0 {
            return Err(ExperimentError::InvalidPlan(format!(
                "T must be positive (got {})",
                self.t_end
            )));
        }
        if !(self.cfl > 0.0) {
            return Err(ExperimentError::InvalidPlan("cfl must be positive".into()));
        }
        Ok(())
    }

    /// Grid size for one frequency: smallest power of two >= 16 max(p,q,2) n.
    pub fn grid_size(&self, n: u32) -> usize {
        let degree = self.params.p.max(self.params.q).max(2) as usize;
        (16 * degree * n as usize).next_power_of_two()
    }

    pub fn grid_for(&self, n: u32) -> Result<PeriodicGrid, SpectralError> {
        PeriodicGrid::new(self.grid_size(n))
    }

    /// Full echo of the plan including derived grid sizes and the step rule.
    pub fn echo(&self) -> PlanEcho {
        let grid_sizes = self.n_list.iter().map(|&n| self.grid_size(n)).collect();
        PlanEcho {
            params: self.params,
            s: self.s,
            sigma: self.sigma,
            n_list: self.n_list.clone(),
            t_end: self.t_end,
            cfl: self.cfl,
            grid_sizes,
            dt_rule: "cfl / (n * max(1, sup|v0|^p, sup|u0|^q))".into(),
        }
    }
}

/// Plan echo embedded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct PlanEcho {
    pub params: SystemParams,
    pub s: f64,
    pub sigma: f64,
    pub n_list: Vec<u32>,
    pub t_end: f64,
    pub cfl: f64,
    pub grid_sizes: Vec<usize>,
    pub dt_rule: String,
}

/// Time-stamped norm sequence.
#[derive(Debug, Clone, Serialize)]
pub struct NormSeries {
    pub label: String,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl NormSeries {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            times: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn push(&mut self, t: f64, value: f64) {
        self.times.push(t);
        self.values.push(value);
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Ordinary least-squares slope of `log(value)` against `log(n)`.
///
/// Needs at least two points with positive abscissae and values.
pub fn fit_slope(points: &[(f64, f64)]) -> f64 {
    assert!(points.len() >= 2, "slope fit needs at least two points");
    assert!(
        points.iter().all(|&(n, v)| n > 0.0 && v > 0.0),
        "slope fit needs positive points"
    );
    let m = points.len() as f64;
    let mean_x: f64 = points.iter().map(|(n, _)| n.ln()).sum::<f64>() / m;
    let mean_y: f64 = points.iter().map(|(_, v)| v.ln()).sum::<f64>() / m;
    let num: f64 = points
        .iter()
        .map(|(n, v)| (n.ln() - mean_x) * (v.ln() - mean_y))
        .sum();
    let den: f64 = points.iter().map(|(n, _)| (n.ln() - mean_x).powi(2)).sum();
    num / den
}

fn format_full(x: f64) -> String {
    // 17 significant digits reproduce the f64 bit pattern downstream.
    format!("{x:.16e}")
}

// ---------------------------------------------------------------------------
// Residual decay scan
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct ResidualRow {
    pub n: u32,
    pub grid_size: usize,
    pub norm_e: f64,
    pub norm_f: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualScanReport {
    pub plan: PlanEcho,
    pub omega: i32,
    pub t: f64,
    pub rows: Vec<ResidualRow>,
    pub fitted_r: f64,
    pub fitted_j: f64,
    pub predicted: ExponentReport,
    pub tolerance: f64,
    pub r_within_tolerance: bool,
    pub j_within_tolerance: bool,
    pub passed: bool,
}

impl ResidualScanReport {
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        out.write_all(b"n,norm_E,norm_F\n")?;
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{}",
                row.n,
                format_full(row.norm_e),
                format_full(row.norm_f)
            )?;
        }
        Ok(())
    }
}

/// Measure `||E(0)||_{H^sigma}`, `||F(0)||_{H^sigma}` over the plan's
/// frequencies, fit decay slopes and compare with the predicted exponents.
pub fn residual_decay_scan(plan: &ExperimentPlan) -> Result<ResidualScanReport, ExperimentError> {
    plan.validate()?;
    let t = 0.0;
    let omega = 1;
    let rows: Result<Vec<ResidualRow>, ExperimentError> = plan
        .n_list
        .par_iter()
        .map(|&n| {
            let grid = plan.grid_for(n)?;
            let cfg = ApproxConfig::new(omega, n, plan.s).expect("validated omega and n");
            let res = crate::ansatz::residual(&cfg, &plan.params, t, &grid)?;
            Ok(ResidualRow {
                n,
                grid_size: grid.len(),
                norm_e: res.u.sobolev_norm(SobolevIndex(plan.sigma)),
                norm_f: res.v.sobolev_norm(SobolevIndex(plan.sigma)),
            })
        })
        .collect();
    let rows = rows?;

    let e_points: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.norm_e)).collect();
    let f_points: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.norm_f)).collect();
    let fitted_r = fit_slope(&e_points);
    let fitted_j = fit_slope(&f_points);
    let predicted = exponent_report(plan.s, plan.sigma, &plan.params);
    let r_ok = (fitted_r - predicted.r).abs() <= SLOPE_TOLERANCE;
    let j_ok = (fitted_j - predicted.j).abs() <= SLOPE_TOLERANCE;

    Ok(ResidualScanReport {
        plan: plan.echo(),
        omega,
        t,
        rows,
        fitted_r,
        fitted_j,
        predicted,
        tolerance: SLOPE_TOLERANCE,
        r_within_tolerance: r_ok,
        j_within_tolerance: j_ok,
        passed: r_ok && j_ok,
    })
}

// ---------------------------------------------------------------------------
// Shared integration helper
// ---------------------------------------------------------------------------

/// Integrate from the family's initial data through the given checkpoints,
/// landing on each exactly. Returns the merged trajectory and the states
/// at the checkpoints.
fn integrate_through(
    plan: &ExperimentPlan,
    omega: i32,
    n: u32,
    checkpoints: &[f64],
) -> Result<(Trajectory, Vec<StatePair>, f64), ExperimentError> {
    let grid = plan.grid_for(n)?;
    let cfg = ApproxConfig::new(omega, n, plan.s).expect("validated omega and n");
    let data = initial_data(&cfg, &plan.params, &grid)?;
    let dt_cap = suggested_dt(n, &data.u, &data.v, &plan.params, plan.cfl);

    let mut merged = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
    };
    let mut at_checkpoints = Vec::with_capacity(checkpoints.len());
    let mut current = data;
    let mut t_offset = 0.0;
    let mut first_dt = dt_cap;

    for &target in checkpoints {
        let span = target - t_offset;
        assert!(span > 0.0, "checkpoints must be strictly increasing");
        let steps = (span / dt_cap).ceil().max(1.0) as usize;
        let dt = span / steps as f64;
        if t_offset == 0.0 {
            first_dt = dt;
        }
        let cfg = IntegratorConfig::new(dt, span).with_record_every(steps.div_ceil(24));
        let segment = integrate(&current.u, &current.v, &plan.params, &cfg)
            .map_err(|source| ExperimentError::BlowUp { n, omega, source })?;

        let skip = usize::from(!merged.times.is_empty());
        for (t, state) in segment.iter().skip(skip) {
            merged.times.push(t_offset + t);
            merged.states.push(state.clone());
        }
        current = segment.last().clone();
        at_checkpoints.push(current.clone());
        t_offset = target;
    }
    Ok((merged, at_checkpoints, first_dt))
}

// ---------------------------------------------------------------------------
// Difference growth
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct DifferenceRun {
    pub n: u32,
    pub grid_size: usize,
    pub dt: f64,
    /// sup over recorded times of the H^sigma pair norm of the difference.
    pub sup_diff_sigma: f64,
    /// `sup_diff_sigma / n^beta`.
    pub sup_ratio: f64,
    /// sup of the H^k pair norm of the difference.
    pub sup_diff_k: f64,
    /// `sup_diff_k / n^{k-s}`: the high-norm growth guard.
    pub k_guard_ratio: f64,
    pub size: SizeCheck,
    pub series_sigma: NormSeries,
    pub series_k: NormSeries,
}

#[derive(Debug, Clone, Serialize)]
pub struct DifferenceGrowthReport {
    pub plan: PlanEcho,
    pub omega: i32,
    pub beta: f64,
    pub beta_window_ok: bool,
    pub k: i64,
    pub runs: Vec<DifferenceRun>,
    /// `sup ||(w,y)||_sigma / n^beta` is non-increasing within 25% slack.
    pub ratios_non_increasing: bool,
}

impl DifferenceGrowthReport {
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        out.write_all(b"n,t,diff_sigma,diff_k\n")?;
        for run in &self.runs {
            for i in 0..run.series_sigma.times.len() {
                writeln!(
                    out,
                    "{},{},{},{}",
                    run.n,
                    format_full(run.series_sigma.times[i]),
                    format_full(run.series_sigma.values[i]),
                    format_full(run.series_k.values[i]),
                )?;
            }
        }
        Ok(())
    }
}

/// Integrate the actual solution from the family's data and track the
/// `H^sigma` and `H^k` pair norms of (approximate - actual) over time.
pub fn difference_growth(
    plan: &ExperimentPlan,
    omega: i32,
) -> Result<DifferenceGrowthReport, ExperimentError> {
    plan.validate()?;
    let beta = crate::ansatz::predicted_beta(plan.s, plan.sigma, &plan.params);
    let k = plan.s.floor() + 2.0;

    let runs: Result<Vec<DifferenceRun>, ExperimentError> = plan
        .n_list
        .par_iter()
        .map(|&n| {
            let (traj, _, dt) = integrate_through(plan, omega, n, &[plan.t_end])?;
            let grid = traj.initial().grid().clone();
            let cfg = ApproxConfig::new(omega, n, plan.s).expect("validated");

            let mut series_sigma = NormSeries::new(format!("|(w,y)|_sigma n={n}"));
            let mut series_k = NormSeries::new(format!("|(w,y)|_k n={n}"));
            for (t, state) in traj.iter() {
                let member = approximate_solution(&cfg, &plan.params, t, &grid)?;
                let w = &member.u - &state.u;
                let y = &member.v - &state.v;
                series_sigma.push(
                    t,
                    w.sobolev_norm(SobolevIndex(plan.sigma))
                        + y.sobolev_norm(SobolevIndex(plan.sigma)),
                );
                series_k.push(
                    t,
                    w.sobolev_norm(SobolevIndex(k)) + y.sobolev_norm(SobolevIndex(k)),
                );
            }

            let nf = n as f64;
            let sup_sigma = series_sigma.max_value();
            let sup_k = series_k.max_value();
            Ok(DifferenceRun {
                n,
                grid_size: grid.len(),
                dt,
                sup_diff_sigma: sup_sigma,
                sup_ratio: sup_sigma / nf.powf(beta.value),
                sup_diff_k: sup_k,
                k_guard_ratio: sup_k / nf.powf(k - plan.s),
                size: size_check(&traj, SobolevIndex(plan.s)),
                series_sigma,
                series_k,
            })
        })
        .collect();
    let runs = runs?;

    let ratios_non_increasing = runs
        .windows(2)
        .all(|w| w[1].sup_ratio <= 1.25 * w[0].sup_ratio);

    Ok(DifferenceGrowthReport {
        plan: plan.echo(),
        omega,
        beta: beta.value,
        beta_window_ok: beta.window_ok,
        k: k as i64,
        runs,
        ratios_non_increasing,
    })
}

// ---------------------------------------------------------------------------
// Nonuniform dependence
// ---------------------------------------------------------------------------

/// Which pair of carrier signs a separation experiment compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SeparationBranch {
    /// `omega = +1` vs `omega = -1`, separation reference `|sin t|`.
    OppositeSigns,
    /// `omega = 1` vs `omega = 0` (both powers even), reference `|sin(t/2)|`.
    SignAndZero,
}

impl SeparationBranch {
    pub fn for_params(params: &SystemParams) -> Self {
        if params.both_even() {
            SeparationBranch::SignAndZero
        } else {
            SeparationBranch::OppositeSigns
        }
    }

    pub fn omegas(&self) -> (i32, i32) {
        match self {
            SeparationBranch::OppositeSigns => (1, -1),
            SeparationBranch::SignAndZero => (1, 0),
        }
    }

    /// The separation reference at time `t`.
    pub fn reference(&self, t: f64) -> f64 {
        match self {
            SeparationBranch::OppositeSigns => t.sin().abs(),
            SeparationBranch::SignAndZero => (t / 2.0).sin().abs(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionDiffSample {
    pub n: u32,
    pub t: f64,
    /// H^s pair norm of the difference of the two actual solutions.
    pub solution_diff: f64,
    /// H^s pair norm of the difference of the two family members.
    pub approx_diff: f64,
    /// `|sin t|` or `|sin(t/2)|`.
    pub reference: f64,
    /// `solution_diff / reference`: the measured lower-bound constant.
    pub lower_constant: f64,
}

/// Interpolation bookkeeping for one `(n, omega, t)`: the member-vs-actual
/// difference measured directly in `H^s` and through the `H^sigma`/`H^k`
/// interpolation bound, compared against `n^alpha`.
#[derive(Debug, Clone, Serialize)]
pub struct InterpolationRow {
    pub n: u32,
    pub omega: i32,
    pub t: f64,
    pub w_sigma: f64,
    pub w_k: f64,
    pub w_s_direct: f64,
    /// Componentwise interpolation bound summed over (w, y).
    pub w_s_interpolated: f64,
    pub n_alpha: f64,
    /// `w_s_direct / n^alpha`.
    pub alpha_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NudVerdict {
    pub data_slope_ok: bool,
    pub lower_bound_ok: bool,
    pub stability_ok: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct NudReport {
    pub plan: PlanEcho,
    pub branch: SeparationBranch,
    pub omegas: (i32, i32),
    pub exponents: ExponentReport,
    /// `(n, H^s pair norm of the data difference at t = 0)`.
    pub data_diffs: Vec<(u32, f64)>,
    pub fitted_data_slope: f64,
    /// `-min(1/p, 1/q)`: the slower-decaying constant dominates.
    pub expected_data_slope: f64,
    pub samples: Vec<SolutionDiffSample>,
    pub interpolation: Vec<InterpolationRow>,
    pub sizes: Vec<SizeCheck>,
    /// Time at which the verdict thresholds are applied.
    pub verdict_time: f64,
    /// `0.5 * 4 sqrt(pi) * reference(verdict_time)`.
    pub lower_threshold: f64,
    pub verdict: NudVerdict,
}

impl NudReport {
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        out.write_all(b"n,t,solution_diff_s,approx_diff_s,reference,lower_constant\n")?;
        for row in &self.samples {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                row.n,
                format_full(row.t),
                format_full(row.solution_diff),
                format_full(row.approx_diff),
                format_full(row.reference),
                format_full(row.lower_constant),
            )?;
        }
        Ok(())
    }
}

/// The headline experiment: data differences shrink like
/// `n^{-1/q} + n^{-1/p}` while solution differences stay separated like the
/// sine reference.
pub fn nonuniform_dependence(plan: &ExperimentPlan) -> Result<NudReport, ExperimentError> {
    plan.validate()?;
    let branch = SeparationBranch::for_params(&plan.params);
    let (om_hi, om_lo) = branch.omegas();
    let exponents = exponent_report(plan.s, plan.sigma, &plan.params);
    let s_idx = SobolevIndex(plan.s);

    let sample_times: Vec<f64> = SAMPLE_TIMES
        .iter()
        .copied()
        .filter(|&t| t <= plan.t_end + 1e-12)
        .collect();
    if sample_times.is_empty() {
        return Err(ExperimentError::InvalidPlan(format!(
            "T = {} leaves no sample times",
            plan.t_end
        )));
    }

    struct PerN {
        n: u32,
        data_diff: f64,
        samples: Vec<SolutionDiffSample>,
        interpolation: Vec<InterpolationRow>,
        sizes: Vec<SizeCheck>,
    }

    let per_n: Result<Vec<PerN>, ExperimentError> = plan
        .n_list
        .par_iter()
        .map(|&n| {
            let grid = plan.grid_for(n)?;
            let cfg_hi = ApproxConfig::new(om_hi, n, plan.s).expect("validated");
            let cfg_lo = ApproxConfig::new(om_lo, n, plan.s).expect("validated");

            let data_hi = initial_data(&cfg_hi, &plan.params, &grid)?;
            let data_lo = initial_data(&cfg_lo, &plan.params, &grid)?;
            let data_diff = (&data_hi.u - &data_lo.u).sobolev_norm(s_idx)
                + (&data_hi.v - &data_lo.v).sobolev_norm(s_idx);

            let (traj_hi, at_hi, _) = integrate_through(plan, om_hi, n, &sample_times)?;
            let (traj_lo, at_lo, _) = integrate_through(plan, om_lo, n, &sample_times)?;

            let mut samples = Vec::new();
            let mut interpolation = Vec::new();
            for (i, &t) in sample_times.iter().enumerate() {
                let sol_diff = (&at_hi[i].u - &at_lo[i].u).sobolev_norm(s_idx)
                    + (&at_hi[i].v - &at_lo[i].v).sobolev_norm(s_idx);
                let member_hi = approximate_solution(&cfg_hi, &plan.params, t, &grid)?;
                let member_lo = approximate_solution(&cfg_lo, &plan.params, t, &grid)?;
                let approx_diff = (&member_hi.u - &member_lo.u).sobolev_norm(s_idx)
                    + (&member_hi.v - &member_lo.v).sobolev_norm(s_idx);
                let reference = branch.reference(t);
                samples.push(SolutionDiffSample {
                    n,
                    t,
                    solution_diff: sol_diff,
                    approx_diff,
                    reference,
                    lower_constant: if reference > 0.0 {
                        sol_diff / reference
                    } else {
                        f64::NAN
                    },
                });

                for (omega, member, actual) in [
                    (om_hi, &member_hi, &at_hi[i]),
                    (om_lo, &member_lo, &at_lo[i]),
                ] {
                    let w = &member.u - &actual.u;
                    let y = &member.v - &actual.v;
                    let kf = exponents.k as f64;
                    let (wu_s, wu_interp) = interpolation_bound(&w, plan.sigma, plan.s, kf);
                    let (wy_s, wy_interp) = interpolation_bound(&y, plan.sigma, plan.s, kf);
                    let n_alpha = (n as f64).powf(exponents.alpha);
                    interpolation.push(InterpolationRow {
                        n,
                        omega,
                        t,
                        w_sigma: w.sobolev_norm(SobolevIndex(plan.sigma))
                            + y.sobolev_norm(SobolevIndex(plan.sigma)),
                        w_k: w.sobolev_norm(SobolevIndex(kf)) + y.sobolev_norm(SobolevIndex(kf)),
                        w_s_direct: wu_s + wy_s,
                        w_s_interpolated: wu_interp + wy_interp,
                        n_alpha,
                        alpha_ratio: (wu_s + wy_s) / n_alpha,
                    });
                }
            }

            let sizes = vec![size_check(&traj_hi, s_idx), size_check(&traj_lo, s_idx)];
            Ok(PerN {
                n,
                data_diff,
                samples,
                interpolation,
                sizes,
            })
        })
        .collect();
    let per_n = per_n?;

    let data_diffs: Vec<(u32, f64)> = per_n.iter().map(|r| (r.n, r.data_diff)).collect();
    let points: Vec<(f64, f64)> = data_diffs.iter().map(|&(n, d)| (n as f64, d)).collect();
    let fitted_data_slope = if points.len() >= 2 {
        fit_slope(&points)
    } else {
        f64::NAN
    };
    let expected_data_slope = -(1.0 / plan.params.p as f64).min(1.0 / plan.params.q as f64);

    let samples: Vec<SolutionDiffSample> = per_n.iter().flat_map(|r| r.samples.clone()).collect();
    let interpolation: Vec<InterpolationRow> =
        per_n.iter().flat_map(|r| r.interpolation.clone()).collect();
    let sizes: Vec<SizeCheck> = per_n.iter().flat_map(|r| r.sizes.clone()).collect();

    // Verdict thresholds apply at t = 0.5 (or the last sample when the
    // horizon is shorter) on the two largest n.
    let verdict_time = if plan.t_end >= 0.5 {
        0.5
    } else {
        *sample_times.last().unwrap()
    };
    let lower_threshold = 0.5 * 4.0 * PI.sqrt() * branch.reference(verdict_time);
    let at_verdict: Vec<&SolutionDiffSample> = samples
        .iter()
        .filter(|r| (r.t - verdict_time).abs() < 1e-9)
        .collect();
    let top_two = &at_verdict[at_verdict.len().saturating_sub(2)..];
    let lower_bound_ok =
        !top_two.is_empty() && top_two.iter().all(|r| r.solution_diff > lower_threshold);
    let stability_ok = if top_two.len() == 2 {
        let (prev, last) = (top_two[0].solution_diff, top_two[1].solution_diff);
        (last - prev).abs() / prev < 0.2
    } else {
        false
    };
    let data_slope_ok = points.len() >= 2
        && (fitted_data_slope - expected_data_slope).abs() <= DATA_SLOPE_TOLERANCE;
    let verdict = NudVerdict {
        data_slope_ok,
        lower_bound_ok,
        stability_ok,
        passed: data_slope_ok && lower_bound_ok && stability_ok,
    };

    Ok(NudReport {
        plan: plan.echo(),
        branch,
        omegas: (om_hi, om_lo),
        exponents,
        data_diffs,
        fitted_data_slope,
        expected_data_slope,
        samples,
        interpolation,
        sizes,
        verdict_time,
        lower_threshold,
        verdict,
    })
}

// ---------------------------------------------------------------------------
// Standard campaign grid
// ---------------------------------------------------------------------------

/// The standing experiment grid that the verification suite and the
/// `make-acceptance` subcommand both run.
pub mod standard {
    use super::*;

    pub const CONFIGS: [(u32, u32, f64, f64); 3] =
        [(1, 1, 2.0, 2.0), (2, 2, 3.0, 3.0), (1, 2, 2.0, 3.0)];
    pub const S_VALUES: [f64; 2] = [3.0, 6.0];
    pub const SIGMA_VALUES: [f64; 2] = [0.5, 1.75];
    pub const RESIDUAL_NS: [u32; 4] = [64, 128, 256, 512];
    pub const DIFF_NS: [u32; 3] = [64, 128, 256];
    pub const NUD_NS: [u32; 4] = [64, 128, 256, 512];
    pub const T_END: f64 = 0.95;
    pub const CFL: f64 = 0.5;

    pub fn params(cfg: (u32, u32, f64, f64)) -> SystemParams {
        SystemParams::new(cfg.0, cfg.1, cfg.2, cfg.3).expect("standard grid params")
    }

    /// All twelve residual-scan plans.
    pub fn residual_plans() -> Vec<ExperimentPlan> {
        let mut plans = Vec::new();
        for cfg in CONFIGS {
            for s in S_VALUES {
                for sigma in SIGMA_VALUES {
                    plans.push(
                        ExperimentPlan::new(
                            params(cfg),
                            s,
                            sigma,
                            RESIDUAL_NS.to_vec(),
                            T_END,
                            CFL,
                        )
                        .expect("standard residual plan"),
                    );
                }
            }
        }
        plans
    }

    /// The difference-growth plan: s = 3, sigma = 1.75 on the unit-power
    /// configuration.
    pub fn difference_plan() -> ExperimentPlan {
        ExperimentPlan::new(params(CONFIGS[0]), 3.0, 1.75, DIFF_NS.to_vec(), T_END, CFL)
            .expect("standard difference plan")
    }

    /// The two separation plans: odd/odd and even/even.
    pub fn nud_plans() -> Vec<ExperimentPlan> {
        [CONFIGS[0], CONFIGS[1]]
            .into_iter()
            .map(|cfg| {
                ExperimentPlan::new(params(cfg), 3.0, 1.75, NUD_NS.to_vec(), T_END, CFL)
                    .expect("standard nud plan")
            })
            .collect()
    }
}
