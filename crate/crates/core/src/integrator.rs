//! Fixed-step RK4 time evolution with a blow-up guard.

use crate::model::{rhs, StatePair, SystemParams};
use crate::spectral::{SobolevIndex, SpectralField};
use serde::Serialize;

/// The run left the validity regime: a collocation value exceeded the
/// guard threshold or became non-finite. Not a bug, a diagnosis.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("solution blew up at t = {t:.6} (sup |values| = {sup:.3e})")]
pub struct BlowUp {
    pub t: f64,
    pub sup: f64,
}

/// Fixed-step integration settings.
///
/// `dt` is a cap: the actual step is `t_end / ceil(t_end / dt)` so the run
/// lands on `t_end` exactly.
#[derive(Debug, Clone, Copy)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_end: f64,
    pub blowup_threshold: f64,
    pub record_every: usize,
}

impl IntegratorConfig {
    pub fn new(dt: f64, t_end: f64) -> Self {
        assert!(dt > 0.0 && t_end > 0.0, "dt and t_end must be positive");
        Self {
            dt,
            t_end,
            blowup_threshold: 1e6,
            record_every: 1,
        }
    }

    pub fn with_blowup_threshold(mut self, threshold: f64) -> Self {
        assert!(threshold > 0.0);
        self.blowup_threshold = threshold;
        self
    }

    pub fn with_record_every(mut self, every: usize) -> Self {
        assert!(every >= 1);
        self.record_every = every;
        self
    }
}

/// Recorded snapshots of one run. Times are strictly increasing and start
/// at 0; all states share one grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StatePair>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn initial(&self) -> &StatePair {
        &self.states[0]
    }

    pub fn last(&self) -> &StatePair {
        self.states.last().expect("trajectory is never empty")
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &StatePair)> {
        self.times.iter().copied().zip(self.states.iter())
    }

    /// Snapshot closest to time `t`.
    pub fn nearest(&self, t: f64) -> (f64, &StatePair) {
        let (i, _) = self
            .times
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| (**a - t).abs().partial_cmp(&(**b - t).abs()).unwrap())
            .expect("trajectory is never empty");
        (self.times[i], &self.states[i])
    }
}

/// One classical RK4 step of size `dt`. Dealiasing happens inside the
/// products of [`rhs`]; nothing else touches the spectrum.
pub fn step_rk4(state: &StatePair, params: &SystemParams, dt: f64) -> StatePair {
    assert!(dt > 0.0, "dt must be positive");
    let k1 = rhs(state, params);
    let k2 = rhs(&state.add_scaled(&k1, dt / 2.0), params);
    let k3 = rhs(&state.add_scaled(&k2, dt / 2.0), params);
    let k4 = rhs(&state.add_scaled(&k3, dt), params);

    let mut incr = k1.add_scaled(&k2, 2.0);
    incr = incr.add_scaled(&k3, 2.0);
    incr = incr.add_scaled(&k4, 1.0);
    state.add_scaled(&incr, dt / 6.0)
}

/// Integrate from `(u0, v0)` to `cfg.t_end`, recording every
/// `cfg.record_every` steps plus the final time.
///
/// Returns [`BlowUp`] as soon as any collocation value of the current state
/// exceeds `cfg.blowup_threshold` or is non-finite (the initial state
/// included).
pub fn integrate(
    u0: &SpectralField,
    v0: &SpectralField,
    params: &SystemParams,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, BlowUp> {
    let state = StatePair::new(u0.clone(), v0.clone()).expect("initial fields share a grid");
    let n_steps = (cfg.t_end / cfg.dt).ceil().max(1.0) as usize;
    let dt = cfg.t_end / n_steps as f64;

    let guard = |state: &StatePair, t: f64| -> Result<(), BlowUp> {
        let sup = state.sup_abs();
        if !sup.is_finite() || !state.is_finite() || sup > cfg.blowup_threshold {
            Err(BlowUp { t, sup })
        } else {
            Ok(())
        }
    };

    guard(&state, 0.0)?;
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![state.clone()],
    };

    let mut current = state;
    for step in 1..=n_steps {
        current = step_rk4(&current, params, dt);
        let t = step as f64 * dt;
        guard(&current, t)?;
        if step % cfg.record_every == 0 || step == n_steps {
            traj.times.push(t);
            traj.states.push(current.clone());
        }
    }
    Ok(traj)
}

/// Step cap `dt = cfl / (n_max * max(1, sup|v0|^p, sup|u0|^q))` where
/// `n_max` is the largest excited frequency of the initial data.
///
/// The transport speeds `|v|^p`, `|u|^q` enter through the floored factor,
/// so small-amplitude data gets the full `cfl / n_max`; the temporal scales
/// of the family studied here are O(1), which this over-resolves.
pub fn suggested_dt(
    n_max: u32,
    u0: &SpectralField,
    v0: &SpectralField,
    params: &SystemParams,
    cfl: f64,
) -> f64 {
    assert!(n_max >= 1 && cfl > 0.0);
    let speed_u = v0.sup_abs().powi(params.p as i32);
    let speed_v = u0.sup_abs().powi(params.q as i32);
    cfl / (n_max as f64 * speed_u.max(speed_v).max(1.0))
}

/// Outcome of the solution-size estimate `||(u,v)(t)||_s <= 2 ||(u0,v0)||_s`,
/// allowing 5% numerical slack.
#[derive(Debug, Clone, Serialize)]
pub struct SizeCheck {
    pub passed: bool,
    pub s: f64,
    pub initial_norm: f64,
    pub max_norm: f64,
    pub max_ratio: f64,
    /// `(t, ratio)` of every recorded time violating the bound.
    pub violations: Vec<(f64, f64)>,
}

/// Check the doubling bound on every recorded state of a trajectory.
pub fn size_check(traj: &Trajectory, s: SobolevIndex) -> SizeCheck {
    const SLACK: f64 = 1.05;
    assert!(!traj.is_empty(), "size check needs a non-empty trajectory");
    let initial = traj.initial().pair_norm(s);
    let mut max_norm = initial;
    let mut violations = Vec::new();
    for (t, state) in traj.iter() {
        let norm = state.pair_norm(s);
        max_norm = max_norm.max(norm);
        let ratio = if initial > 0.0 { norm / initial } else { norm };
        if norm > 2.0 * SLACK * initial && !(initial == 0.0 && norm == 0.0) {
            violations.push((t, ratio));
        }
    }
    SizeCheck {
        passed: violations.is_empty(),
        s: s.0,
        initial_norm: initial,
        max_norm,
        max_ratio: if initial > 0.0 {
            max_norm / initial
        } else {
            max_norm
        },
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::PeriodicGrid;

    fn grid(n: usize) -> PeriodicGrid {
        PeriodicGrid::new(n).unwrap()
    }

    fn ch_params() -> SystemParams {
        SystemParams::new(1, 1, 2.0, 2.0).unwrap()
    }

    fn norm0(f: &SpectralField) -> f64 {
        f.sobolev_norm(SobolevIndex(0.0))
    }

    #[test]
    fn constants_are_fixed_points_of_one_step() {
        let g = grid(32);
        let state = StatePair::new(
            SpectralField::constant(&g, 0.4),
            SpectralField::constant(&g, -0.9),
        )
        .unwrap();
        let next = step_rk4(&state, &SystemParams::new(2, 3, 1.0, -1.5).unwrap(), 0.1);
        assert!(norm0(&(&next.u - &state.u)) < 1e-14);
        assert!(norm0(&(&next.v - &state.v)) < 1e-14);
    }

    #[test]
    fn zero_state_stays_zero() {
        let g = grid(32);
        let z = StatePair::zeros(&g);
        let next = step_rk4(&z, &ch_params(), 0.05);
        assert_eq!(next.sup_abs(), 0.0);
    }

    #[test]
    fn one_step_self_difference_is_fifth_order() {
        // || step(dt) - step(dt/2)^2 || shrinks by about 2^5 when dt halves.
        let g = grid(64);
        let state = StatePair::new(
            SpectralField::from_fn(&g, |x| 0.4 * x.cos() + 0.1 * (2.0 * x).sin()),
            SpectralField::from_fn(&g, |x| 0.3 * x.sin() + 0.2),
        )
        .unwrap();
        let ps = ch_params();

        let self_diff = |dt: f64| {
            let one = step_rk4(&state, &ps, dt);
            let half = step_rk4(&step_rk4(&state, &ps, dt / 2.0), &ps, dt / 2.0);
            norm0(&(&one.u - &half.u)) + norm0(&(&one.v - &half.v))
        };

        let d1 = self_diff(0.2);
        let d2 = self_diff(0.1);
        let ratio = d1 / d2;
        assert!((24.0..40.0).contains(&ratio), "local order ratio {ratio}");
    }

    #[test]
    fn integrate_zero_and_constant_data() {
        let g = grid(32);
        let cfg = IntegratorConfig::new(0.01, 0.5).with_record_every(10);

        let z = SpectralField::zeros(&g);
        let traj = integrate(&z, &z, &ch_params(), &cfg).unwrap();
        assert!(traj.last().sup_abs() < 1e-15);

        let c1 = SpectralField::constant(&g, 1.2);
        let c2 = SpectralField::constant(&g, -0.4);
        let traj = integrate(&c1, &c2, &SystemParams::new(2, 2, 3.0, 3.0).unwrap(), &cfg).unwrap();
        assert!(norm0(&(&traj.last().u - &c1)) < 1e-13);
        assert!(norm0(&(&traj.last().v - &c2)) < 1e-13);
    }

    #[test]
    fn steady_state_survives_many_steps() {
        let g = grid(16);
        let c1 = SpectralField::constant(&g, 0.5);
        let c2 = SpectralField::constant(&g, 0.25);
        let cfg = IntegratorConfig::new(1e-3, 10.0).with_record_every(10_000);
        let traj = integrate(&c1, &c2, &ch_params(), &cfg).unwrap();
        assert!(norm0(&(&traj.last().u - &c1)) < 1e-12);
        assert!(norm0(&(&traj.last().v - &c2)) < 1e-12);
    }

    #[test]
    fn recording_times_are_strictly_increasing_and_land_on_t_end() {
        let g = grid(32);
        let u0 = SpectralField::from_fn(&g, |x| 0.1 * x.cos());
        let cfg = IntegratorConfig::new(0.013, 0.4).with_record_every(7);
        let traj = integrate(&u0, &u0, &ch_params(), &cfg).unwrap();
        assert_eq!(traj.times[0], 0.0);
        for w in traj.times.windows(2) {
            assert!(w[1] > w[0]);
        }
        assert!((traj.times.last().unwrap() - 0.4).abs() < 1e-12);
    }

    #[test]
    fn blowup_guard_reports_time() {
        let g = grid(32);
        let u0 = SpectralField::from_fn(&g, |x| 0.5 * x.cos());
        let cfg = IntegratorConfig::new(0.01, 1.0).with_blowup_threshold(0.1);
        let err = integrate(&u0, &u0, &ch_params(), &cfg).unwrap_err();
        assert_eq!(err.t, 0.0);
        assert!(err.sup > 0.1);
    }

    #[test]
    fn global_self_convergence_is_fourth_order() {
        let g = grid(64);
        let u0 = SpectralField::from_fn(&g, |x| 0.4 * x.cos());
        let v0 = SpectralField::from_fn(&g, |x| 0.4 * x.cos() + 0.1 * (2.0 * x).sin());
        let ps = ch_params();
        let sigma = SobolevIndex(1.0);

        let run = |dt: f64| {
            let cfg = IntegratorConfig::new(dt, 0.5).with_record_every(usize::MAX);
            integrate(&u0, &v0, &ps, &cfg).unwrap().last().clone()
        };
        let s1 = run(0.05);
        let s2 = run(0.025);
        let s3 = run(0.0125);

        let d12 = (&s1.u - &s2.u).sobolev_norm(sigma) + (&s1.v - &s2.v).sobolev_norm(sigma);
        let d23 = (&s2.u - &s3.u).sobolev_norm(sigma) + (&s2.v - &s3.v).sobolev_norm(sigma);
        let ratio = d12 / d23;
        assert!(
            (14.0..18.0).contains(&ratio),
            "global order ratio {ratio} (d12={d12:.3e}, d23={d23:.3e})"
        );
    }

    #[test]
    fn spatial_resolution_is_converged() {
        // Doubling N changes the solution by less than 1e-8 once resolved.
        let ps = ch_params();
        let run = |n: usize| {
            let g = grid(n);
            let u0 = SpectralField::from_fn(&g, |x| 0.3 * x.cos());
            let v0 = SpectralField::from_fn(&g, |x| 0.3 * x.cos() + 0.1 * (2.0 * x).sin());
            let cfg = IntegratorConfig::new(0.005, 0.3).with_record_every(usize::MAX);
            integrate(&u0, &v0, &ps, &cfg).unwrap().last().clone()
        };
        let coarse = run(64);
        let fine = run(128);
        let g_fine = fine.grid().clone();
        let du = (&coarse.u.resample(&g_fine) - &fine.u).sobolev_norm(SobolevIndex(0.0));
        let dv = (&coarse.v.resample(&g_fine) - &fine.v).sobolev_norm(SobolevIndex(0.0));
        assert!(du + dv < 1e-8, "spatial defect {}", du + dv);
    }

    #[test]
    fn size_check_on_steady_and_synthetic_trajectories() {
        let g = grid(32);
        let c = StatePair::new(
            SpectralField::constant(&g, 1.0),
            SpectralField::constant(&g, 1.0),
        )
        .unwrap();
        let steady = Trajectory {
            times: vec![0.0, 1.0, 2.0],
            states: vec![c.clone(), c.clone(), c.clone()],
        };
        assert!(size_check(&steady, SobolevIndex(3.0)).passed);

        let zero = Trajectory {
            times: vec![0.0, 1.0],
            states: vec![StatePair::zeros(&g), StatePair::zeros(&g)],
        };
        assert!(size_check(&zero, SobolevIndex(3.0)).passed);

        // Norm triples along this synthetic trajectory: must fail at t = 2.
        let big = StatePair::new(
            SpectralField::constant(&g, 3.0),
            SpectralField::constant(&g, 3.0),
        )
        .unwrap();
        let growing = Trajectory {
            times: vec![0.0, 1.0, 2.0],
            states: vec![c.clone(), c, big],
        };
        let report = size_check(&growing, SobolevIndex(3.0));
        assert!(!report.passed);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].0, 2.0);
    }

    #[test]
    fn suggested_dt_scales_with_frequency_and_speed() {
        let g = grid(64);
        let small = SpectralField::constant(&g, 0.01);
        let ps = ch_params();
        // Small data: the speed floor of 1 applies, dt = cfl / n_max.
        let dt = suggested_dt(8, &small, &small, &ps, 0.5);
        assert!((dt - 0.5 / 8.0).abs() < 1e-15);

        // Fast data: dt shrinks by the transport speed.
        let fast = SpectralField::constant(&g, 4.0);
        let dt_fast = suggested_dt(8, &fast, &fast, &ps, 0.5);
        assert!((dt_fast - 0.5 / (8.0 * 4.0)).abs() < 1e-15);
    }
}
