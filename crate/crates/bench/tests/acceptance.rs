//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --release -p nano-bench --test acceptance`. The
//! process exits non-zero on a failed criterion only when
//! `NANO_ACCEPTANCE_STRICT=1` is set.

use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::{dvector, DMatrix, DVector};
use nano_bench::ablation::ablate;
use nano_bench::montecarlo::{run_filter, run_monte_carlo, simulate_trial, Divergence, RunOptions};
use nano_bench::metrics::rmse;
use nano_filter::filters::{hess_loglik_exact, hess_loglik_gn, grad_loglik, kf_step, loglik};
use nano_filter::linalg::frobenius_norm;
use nano_filter::models::{
    scenario_models, AttitudeModel, DuffingModel, FmDemodulator, LinearGaussianModel, MatrixMode, Mismatch,
    MismatchKind, ModelKind, ScenarioConfig,
};
use nano_filter::moments::generate_points;
use nano_filter::{Estimator, FilterKind, FilterSettings, GaussianBelief, SigmaPointRule, StateSpaceModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const STRICT_ENV: &str = "NANO_ACCEPTANCE_STRICT";

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform_vec(r: &mut impl Rng, n: usize, lo: f64, hi: f64) -> DVector<f64> {
    DVector::from_fn(n, |_, _| r.random_range(lo..hi))
}

fn uniform_mat(r: &mut impl Rng, rows: usize, cols: usize, lo: f64, hi: f64) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| r.random_range(lo..hi))
}

fn random_spd(r: &mut impl Rng, n: usize, delta: f64) -> DMatrix<f64> {
    let m = uniform_mat(r, n, n, -1.0, 1.0);
    let a = m.transpose() * m + DMatrix::identity(n, n) * delta;
    (&a + a.transpose()) * 0.5
}

fn random_linear(r: &mut impl Rng, n: usize, m: usize) -> LinearGaussianModel {
    let a = uniform_mat(r, n, n, -1.0, 1.0);
    let radius = a.clone().complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let a = if radius > 0.95 { a * (0.95 / radius) } else { a };
    let h = uniform_mat(r, m, n, -1.0, 1.0);
    LinearGaussianModel::new(a, h, random_spd(r, n, 0.05) * 0.2, random_spd(r, m, 0.1) * 0.5)
}

struct Bench {
    name: &'static str,
    model: Box<dyn StateSpaceModel>,
    sample: fn(&mut ChaCha8Rng) -> DVector<f64>,
}

fn benchmarks() -> Vec<Bench> {
    vec![
        Bench {
            name: "fm",
            model: Box::new(FmDemodulator::new(FmDemodulator::DEFAULT_BETA, MatrixMode::Literal)),
            sample: |r| uniform_vec(r, 2, -3.0, 3.0),
        },
        Bench {
            name: "fm-grouped",
            model: Box::new(FmDemodulator::new(FmDemodulator::DEFAULT_BETA, MatrixMode::Grouped)),
            sample: |r| uniform_vec(r, 2, -3.0, 3.0),
        },
        Bench {
            name: "attitude",
            model: Box::new(AttitudeModel::default()),
            sample: |r| {
                let mut x = uniform_vec(r, 3, -3.0, 3.0);
                x[0] = r.random_range(-1.2..1.2);
                x
            },
        },
        Bench { name: "duffing", model: Box::new(DuffingModel::default()), sample: |r| uniform_vec(r, 2, -2.0, 2.0) },
    ]
}

fn fd_jacobian(f: impl Fn(&DVector<f64>) -> DVector<f64>, x: &DVector<f64>) -> DMatrix<f64> {
    let m = f(x).len();
    let mut j = DMatrix::zeros(m, x.len());
    for k in 0..x.len() {
        let h = 1e-6 * x[k].abs().max(1.0);
        let (mut xp, mut xm) = (x.clone(), x.clone());
        xp[k] += h;
        xm[k] -= h;
        j.set_column(k, &((f(&xp) - f(&xm)) / (2.0 * h)));
    }
    j
}

fn rel_err(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

fn column(v: &DVector<f64>) -> DMatrix<f64> {
    DMatrix::from_column_slice(v.len(), 1, v.as_slice())
}

fn linear_oracle() -> Outcome {
    let kinds = [FilterKind::Ekf, FilterKind::Iekf, FilterKind::Ukf, FilterKind::Plf, FilterKind::Nano, FilterKind::NanoChol];
    let start = Instant::now();
    let mut r = rng(1);
    let (mut worst_mean, mut worst_cov) = (0.0f64, 0.0f64);
    let mut errors = Vec::new();
    for _ in 0..50 {
        let n = r.random_range(1..=4);
        let m = r.random_range(1..=4);
        let model = random_linear(&mut r, n, m);
        let form = model.linear_form().expect("linear model");
        let ys: Vec<DVector<f64>> = (0..20).map(|_| uniform_vec(&mut r, m, -2.0, 2.0)).collect();
        let init = GaussianBelief::new(uniform_vec(&mut r, n, -1.0, 1.0), random_spd(&mut r, n, 0.5));
        let u = DVector::zeros(0);
        for kind in kinds {
            let est = Estimator::new(kind, &FilterSettings::default());
            let (mut kf, mut other) = (init.clone(), init.clone());
            for (t, y) in ys.iter().enumerate() {
                kf = kf_step(&kf, &u, Some(y), &form, &model.q, &model.r).expect("kf step");
                match est.step(&other, &u, t, y, &model) {
                    Ok((post, _)) => other = post,
                    Err(e) => {
                        errors.push(format!("{kind}: {e}"));
                        break;
                    }
                }
                worst_mean = worst_mean.max((&other.mean - &kf.mean).amax());
                worst_cov = worst_cov.max(frobenius_norm(&(&other.cov - &kf.cov)));
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = errors.is_empty() && worst_mean < 1e-6 && worst_cov < 1e-6 && elapsed < Duration::from_secs(10);
    Outcome::new(
        pass,
        format!(
            "50 systems x 20 steps, max mean err {worst_mean:.2e}, max cov err {worst_cov:.2e} (tol 1e-6), {} errors, {:.2}s (limit 10s)",
            errors.len(),
            elapsed.as_secs_f64()
        ),
    )
}

#[derive(Default, Clone, Copy)]
struct Tally {
    pd: usize,
    non_pd_posterior: usize,
    blow_up: usize,
    other: usize,
    rmse_sum: f64,
    rmse_count: usize,
}

impl Tally {
    fn failures(&self) -> usize {
        self.pd + self.non_pd_posterior + self.blow_up + self.other
    }

    fn mean_rmse(&self) -> Option<f64> {
        (self.rmse_count > 0).then(|| self.rmse_sum / self.rmse_count as f64)
    }
}

struct PdCell {
    model: ModelKind,
    mismatch: Mismatch,
    nano: Tally,
    chol: Tally,
}

fn pd_cell(model: ModelKind, mismatch: Mismatch) -> PdCell {
    let cfg = ScenarioConfig::new(model).with_mismatch(mismatch).with_trials(20).with_horizon(100).with_seed(0);
    let scenario = scenario_models(&cfg).expect("grid scenario");
    let ests = [FilterKind::Nano, FilterKind::NanoChol].map(|k| Estimator::new(k, &FilterSettings::default()));
    let per_trial: Vec<[Tally; 2]> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let traj = simulate_trial(&scenario, trial).expect("simulation");
            ests.each_ref().map(|est| {
                let run = run_filter(est, &scenario, &traj);
                let mut t = Tally::default();
                match &run.divergence {
                    None => {
                        t.rmse_sum = rmse(&traj.states[1..], &run.estimates).expect("rmse");
                        t.rmse_count = 1;
                    }
                    Some(Divergence::PdFailure) => t.pd = 1,
                    Some(Divergence::NonPdPosterior) => t.non_pd_posterior = 1,
                    Some(Divergence::BlowUp) => t.blow_up = 1,
                    Some(Divergence::Error(_)) => t.other = 1,
                }
                t
            })
        })
        .collect();
    let mut cell = PdCell { model, mismatch, nano: Tally::default(), chol: Tally::default() };
    for [a, b] in per_trial {
        for (acc, t) in [(&mut cell.nano, a), (&mut cell.chol, b)] {
            acc.pd += t.pd;
            acc.non_pd_posterior += t.non_pd_posterior;
            acc.blow_up += t.blow_up;
            acc.other += t.other;
            acc.rmse_sum += t.rmse_sum;
            acc.rmse_count += t.rmse_count;
        }
    }
    cell
}

fn pd_preservation() -> (Outcome, Vec<PdCell>) {
    let mut cells = Vec::new();
    for model in ModelKind::ALL {
        for kind in [MismatchKind::System, MismatchKind::Outlier] {
            for &level in model.grid(kind) {
                cells.push(pd_cell(model, Mismatch { kind, level }));
            }
        }
    }
    let mut failing = Vec::new();
    for c in &cells {
        for (name, t) in [("nano", c.nano), ("nano-chol", c.chol)] {
            if t.failures() > 0 {
                failing.push(format!(
                    "{}/{}={} {name}: pd {} non-pd {} blow-up {} error {}",
                    c.model, c.mismatch.kind, c.mismatch.level, t.pd, t.non_pd_posterior, t.blow_up, t.other
                ));
            }
        }
    }
    let detail = if failing.is_empty() {
        format!("{} scenarios x 20 trials x 100 steps, nano and nano-chol: no PD failures or divergences", cells.len())
    } else {
        format!("{} of {} scenario/filter cells failed: {}", failing.len(), 2 * cells.len(), failing.join("; "))
    };
    (Outcome::new(failing.is_empty(), detail), cells)
}

fn indefiniteness() -> Outcome {
    let duffing = DuffingModel::default();
    let x = dvector![0.1, 0.0];
    let y = dvector![5.0];
    let exact_min = hess_loglik_exact(&x, &y, &duffing).expect("hessian").symmetric_eigenvalues().min();
    let gn_min = hess_loglik_gn(&x, &duffing).expect("hessian").symmetric_eigenvalues().min();
    let mut r = rng(3);
    let mut worst = f64::INFINITY;
    for b in benchmarks() {
        for _ in 0..1000 {
            let x = (b.sample)(&mut r);
            let h = hess_loglik_gn(&x, b.model.as_ref()).expect("hessian");
            let scale = h.norm().max(1.0);
            worst = worst.min(h.symmetric_eigenvalues().min() / scale);
        }
    }
    let pass = exact_min < 0.0 && gn_min >= 0.0 && worst >= -1e-12;
    Outcome::new(
        pass,
        format!(
            "duffing exact Hessian at x=(0.1, 0), y=5 has min eigenvalue {exact_min:.3e}; Gauss-Newton there {gn_min:.3e}; \
             worst relative Gauss-Newton eigenvalue over 4000 points {worst:.3e}"
        ),
    )
}

fn cell_mean(table: &nano_bench::ablation::AblationTable, model: ModelKind, filter: FilterKind) -> f64 {
    match table.cell(model, filter) {
        Some(c) if !c.is_diverged() => c.mean_rmse.unwrap_or(f64::INFINITY),
        _ => f64::INFINITY,
    }
}

fn label(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.4e}")
    } else {
        "diverge".into()
    }
}

fn ablation_criteria() -> Vec<(String, Outcome)> {
    let base = ScenarioConfig::new(ModelKind::Duffing).with_trials(100).with_horizon(200).with_seed(0);
    let table = ablate(&ModelKind::ALL, &base, &FilterSettings::default()).expect("ablation");
    let (nano, ekf, nopd) = (FilterKind::Nano, FilterKind::NanoEkf, FilterKind::NanoNopd);

    let mut order_detail = Vec::new();
    let mut order_pass = true;
    for model in [ModelKind::Attitude, ModelKind::Duffing] {
        let (a, b, c) = (cell_mean(&table, model, nano), cell_mean(&table, model, ekf), cell_mean(&table, model, nopd));
        let ok = a.is_finite() && a <= b && b <= c && !(b.is_infinite() && c.is_infinite());
        order_pass &= ok;
        order_detail.push(format!("{model}: nano {} nano-ekf {} nano-nopd {}", label(a), label(b), label(c)));
    }

    let fm_nano = table.cell(ModelKind::Fm, nano).expect("cell");
    let fm_nopd = table.cell(ModelKind::Fm, nopd).expect("cell");
    let fm_pass = fm_nano.divergences == 0 && fm_nopd.divergences >= 1;

    let mut timing_detail = Vec::new();
    let mut timing_pass = true;
    for model in ModelKind::ALL {
        let t_nano = table.cell(model, nano).and_then(|c| c.mean_update_ms);
        let t_nopd = table.cell(model, nopd).and_then(|c| c.mean_update_ms);
        let ok = matches!((t_nano, t_nopd), (Some(a), Some(b)) if a < b);
        timing_pass &= ok;
        let fmt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.4}"));
        timing_detail.push(format!("{model}: nano {} ms vs nano-nopd {} ms", fmt(t_nano), fmt(t_nopd)));
    }

    let reference = [
        (nano, ["2.533", "0.116", "0.254"]),
        (ekf, ["2.829", "0.127", "0.263"]),
        (nopd, ["diverge", "0.161", "0.293"]),
    ];
    for (filter, values) in reference {
        let ours: Vec<String> = ModelKind::ALL.iter().map(|&m| label(cell_mean(&table, m, filter))).collect();
        println!(
            "INFO  criterion 4 magnitudes {filter}: fm/attitude/duffing measured {} | reference {}",
            ours.join("/"),
            values.join("/")
        );
    }
    let grouped = ScenarioConfig { fm_matrix_mode: MatrixMode::Grouped, ..base.clone() };
    let gtable = ablate(&[ModelKind::Fm], &grouped, &FilterSettings::default()).expect("ablation");
    let g: Vec<String> = [nano, ekf, nopd]
        .iter()
        .map(|&f| format!("{f} {} ({} div)", label(cell_mean(&gtable, ModelKind::Fm, f)), gtable.cell(ModelKind::Fm, f).map_or(0, |c| c.divergences)))
        .collect();
    println!("INFO  criterion 4 fm with grouped transition matrix: {}", g.join(", "));

    vec![
        ("4a".into(), Outcome::new(order_pass, format!("nano <= nano-ekf <= nano-nopd mean RMSE (N=100): {}", order_detail.join("; ")))),
        (
            "4b".into(),
            Outcome::new(
                fm_pass,
                format!(
                    "fm divergences: nano {}/100 (need 0), nano-nopd {}/100 (need >= 1)",
                    fm_nano.divergences, fm_nopd.divergences
                ),
            ),
        ),
        ("4c".into(), Outcome::new(timing_pass, format!("mean update time: {}", timing_detail.join("; ")))),
    ]
}

fn baseline_ranking() -> Outcome {
    let baselines = [FilterKind::Ekf, FilterKind::Ukf, FilterKind::Iekf, FilterKind::Plf];
    let kinds = [FilterKind::Nano, FilterKind::Ekf, FilterKind::Ukf, FilterKind::Iekf, FilterKind::Plf];
    let mut pass = true;
    let mut detail = Vec::new();
    for model in ModelKind::ALL {
        let cfg = ScenarioConfig::new(model).with_trials(100).with_horizon(200).with_seed(0);
        let report =
            run_monte_carlo(&scenario_models(&cfg).expect("scenario"), &kinds, &RunOptions::default()).expect("run");
        let mean = |k: FilterKind| {
            let f = report.filter(k).expect("filter");
            if 2 * f.divergences() > f.trials.len() {
                f64::INFINITY
            } else {
                f.rmse_summary().map_or(f64::INFINITY, |s| s.mean)
            }
        };
        let ours = mean(FilterKind::Nano);
        let mut parts = vec![format!("nano {}", label(ours))];
        for b in baselines {
            let theirs = mean(b);
            let ok = ours.is_finite() && ours <= theirs;
            pass &= ok;
            parts.push(format!("{b} {}{}", label(theirs), if ok { "" } else { " (beats nano)" }));
        }
        detail.push(format!("{model}: {}", parts.join(" ")));
    }
    Outcome::new(pass, format!("nano mean RMSE <= EKF/UKF/IEKF/PLF (N=100): {}", detail.join("; ")))
}

fn derivative_suite() -> Outcome {
    const TOL: f64 = 1e-4;
    let start = Instant::now();
    let mut r = rng(6);
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    let mut note = |err: f64, what: String| {
        if err > worst {
            worst = err;
            worst_at = what;
        }
    };
    for b in benchmarks() {
        let m = b.model.as_ref();
        for t in 0..100 {
            let x = (b.sample)(&mut r);
            let u = m.control_input(t);
            let fx = fd_jacobian(|z| m.transition(z, &u, t).expect("transition"), &x);
            note(rel_err(&m.transition_jacobian(&x, &u, t).expect("jacobian"), &fx), format!("{} transition", b.name));
            let gx = fd_jacobian(|z| m.measurement(z).expect("measurement"), &x);
            note(rel_err(&m.measurement_jacobian(&x).expect("jacobian"), &gx), format!("{} measurement", b.name));
            let hessians = m.measurement_hessian(&x).expect("hessian");
            for (j, h) in hessians.iter().enumerate() {
                let fd = fd_jacobian(|z| m.measurement_jacobian(z).expect("jacobian").row(j).transpose(), &x);
                note(rel_err(h, &fd), format!("{} measurement hessian {j}", b.name));
            }
            let y = m.measurement(&x).expect("measurement") + uniform_vec(&mut r, m.measurement_dim(), -0.5, 0.5);
            let g = grad_loglik(&x, &y, m).expect("gradient");
            let g_fd = fd_jacobian(|z| DVector::from_element(1, loglik(z, &y, m).expect("loglik")), &x).transpose();
            note(rel_err(&column(&g), &g_fd), format!("{} loglik gradient", b.name));
            let h_fd = fd_jacobian(|z| grad_loglik(z, &y, m).expect("gradient"), &x);
            note(rel_err(&hess_loglik_exact(&x, &y, m).expect("hessian"), &h_fd), format!("{} loglik hessian", b.name));
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(
        worst < TOL && elapsed < Duration::from_secs(5),
        format!(
            "100 points per model, worst relative error {worst:.2e} ({worst_at}, tol 1e-4), {:.2}s (limit 5s)",
            elapsed.as_secs_f64()
        ),
    )
}

/// `E[x^k]` for `x ~ N(mu, sigma^2)`.
fn normal_moment(k: u32, mu: f64, sigma: f64) -> f64 {
    let binom = |n: u32, r: u32| (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
    let double_fact = |m: u32| (1..=m).rev().step_by(2).map(f64::from).product::<f64>();
    (0..=k)
        .step_by(2)
        .map(|j| binom(k, j) * mu.powi((k - j) as i32) * sigma.powi(j as i32) * double_fact(j.saturating_sub(1)))
        .sum()
}

fn moment_matching() -> Outcome {
    let mut r = rng(7);
    let mut affine = 0.0f64;
    let rules = [SigmaPointRule::Cubature, SigmaPointRule::unscented(), SigmaPointRule::GaussHermite { order: 3 }];
    for rule in rules {
        for n in 1..=4 {
            for _ in 0..20 {
                let mu = uniform_vec(&mut r, n, -2.0, 2.0);
                let cov = random_spd(&mut r, n, 0.1);
                let m = 1 + n % 3;
                let a = uniform_mat(&mut r, m, n, -2.0, 2.0);
                let b = uniform_vec(&mut r, m, -1.0, 1.0);
                let p = generate_points(&rule, &mu, &cov).expect("points").propagate_with_cross(|x| Ok(&a * x + &b)).expect("propagate");
                affine = affine
                    .max((&p.mean - (&a * &mu + &b)).amax())
                    .max((&p.cov - &a * &cov * a.transpose()).amax())
                    .max((&p.cross - &cov * a.transpose()).amax());
            }
        }
    }
    let mut poly = 0.0f64;
    for p in 2..=5usize {
        let rule = SigmaPointRule::GaussHermite { order: p };
        for (mu, sigma) in [(0.0, 1.0), (0.7, 0.5), (-1.3, 1.8)] {
            let set = generate_points(&rule, &DVector::from_element(1, mu), &DMatrix::from_element(1, 1, sigma * sigma))
                .expect("points");
            for k in 0..=(2 * p as u32 - 1) {
                let quad: f64 = set.points.iter().zip(&set.mean_weights).map(|(x, w)| w * x[0].powi(k as i32)).sum();
                let exact = normal_moment(k, mu, sigma);
                poly = poly.max((quad - exact).abs() / exact.abs().max(1.0));
            }
        }
    }
    Outcome::new(
        affine < 1e-9 && poly < 1e-9,
        format!("affine max error {affine:.2e} (cubature, unscented, gh:3), Gauss-Hermite p=2..5 degree <= 2p-1 max error {poly:.2e} (tol 1e-9)"),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().expect("tempdir");
    let run = |sub: &str| {
        let out = dir.path().join(sub);
        let status = Command::new(env!("CARGO_BIN_EXE_nano-bench"))
            .args(["run", "--model", "duffing", "--filter", "nano,ekf", "--trials", "10", "--seed", "42", "--out"])
            .arg(&out)
            .output()
            .expect("spawn nano-bench");
        (status.status.success(), std::fs::read(out.join("trials.csv")).unwrap_or_default())
    };
    let (ok_a, a) = run("a");
    let (ok_b, b) = run("b");
    Outcome::new(
        ok_a && ok_b && !a.is_empty() && a == b,
        format!("two CLI runs exited ok={}/{} and wrote {} / {} bytes, identical = {}", ok_a, ok_b, a.len(), b.len(), a == b),
    )
}

fn print_pd_info(cells: &[PdCell]) {
    for model in ModelKind::ALL {
        let at = |level: f64| {
            cells
                .iter()
                .find(|c| c.model == model && c.mismatch.kind == MismatchKind::Outlier && (c.mismatch.level - level).abs() < 1e-12)
                .and_then(|c| c.nano.mean_rmse())
        };
        let grid = model.outlier_grid();
        let (lo, hi) = (at(grid[0]), at(grid[grid.len() - 1]));
        if let (Some(lo), Some(hi)) = (lo, hi) {
            println!(
                "INFO  outlier trend {model}: nano mean RMSE {lo:.4e} at k={} and {hi:.4e} at k={} ({})",
                grid[0],
                grid[grid.len() - 1],
                if hi >= lo { "non-decreasing" } else { "decreasing" }
            );
        }
        if let Some(c) = cells.iter().find(|c| c.model == model && c.mismatch.kind == MismatchKind::System && c.mismatch.level == 0.0) {
            let fmt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.4e}"));
            println!(
                "INFO  nominal {model}: nano {} ({} div), nano-chol {} ({} div)",
                fmt(c.nano.mean_rmse()),
                c.nano.failures(),
                fmt(c.chol.mean_rmse()),
                c.chol.failures()
            );
        }
    }
}

fn main() {
    let mut results: Vec<(String, Outcome)> = Vec::new();
    let mut record = |id: &str, outcome: Outcome, elapsed: Duration| {
        println!(
            "{} criterion {id}: {} [{:.1}s]",
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64()
        );
        results.push((id.to_string(), outcome));
    };

    let t = Instant::now();
    let c1 = linear_oracle();
    record("1", c1, t.elapsed());

    let t = Instant::now();
    let (c2, cells) = pd_preservation();
    record("2", c2, t.elapsed());
    print_pd_info(&cells);

    let t = Instant::now();
    let c3 = indefiniteness();
    record("3", c3, t.elapsed());

    let t = Instant::now();
    let c4 = ablation_criteria();
    let elapsed = t.elapsed();
    for (id, outcome) in c4 {
        record(&id, outcome, elapsed);
    }

    let t = Instant::now();
    let c5 = baseline_ranking();
    record("5", c5, t.elapsed());

    let t = Instant::now();
    let c6 = derivative_suite();
    record("6", c6, t.elapsed());

    let t = Instant::now();
    let c7 = moment_matching();
    record("7", c7, t.elapsed());

    let t = Instant::now();
    let c8 = determinism();
    record("8", c8, t.elapsed());

    let failed: Vec<&str> = results.iter().filter(|(_, o)| !o.pass).map(|(id, _)| id.as_str()).collect();
    println!("acceptance: {} passed, {} failed{}", results.len() - failed.len(), failed.len(), if failed.is_empty() {
        String::new()
    } else {
        format!(" ({})", failed.join(", "))
    });
    if !failed.is_empty() && std::env::var(STRICT_ENV).is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
