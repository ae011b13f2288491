// SPDX-License-Identifier: Apache-2.0

//! Exit criteria. Runs every criterion in order, prints one PASS/FAIL line
//! per criterion (with the individual checks underneath) and exits non-zero
//! if any criterion fails.

use std::time::Instant;

use omsqueeze::floquet::{periodic_steady_state, FloquetOptions};
use omsqueeze::linalg::{eigenvalues, lyapunov_residual, RealMatrix};
use omsqueeze::model::{derive, params_from_cooperativity, SystemParams};
use omsqueeze::optimize::{
    optimize_at, optimize_ratio, Backend, RatioSearch, SweepBase, ThirdTone,
};
use omsqueeze::rwa::{
    build_rwa_drift_diffusion, impedance_match_check, semiclassical_self_energy, steady_state,
};
use omsqueeze::spectra::{
    integrated_weight, output_spectrum_analytic, output_spectrum_numeric, squeezing_bounds,
};
use omsqueeze::Params;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const INF: f64 = f64::INFINITY;
const SEED: u64 = 0x5eed_0f5e;

struct Check {
    name: String,
    pass: bool,
    detail: String,
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        pass,
        detail: detail.into(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn rwa_base(gamma_over_kappa: f64, n_th: f64) -> SweepBase<f64> {
    SweepBase::dimensionless(gamma_over_kappa, n_th, 0.0)
}

fn floquet_base(kappa_over_omega: f64, n_th: f64) -> SweepBase<f64> {
    SweepBase::dimensionless(1e-4, n_th, kappa_over_omega)
}

fn search() -> RatioSearch<f64> {
    RatioSearch::default()
}

fn floquet() -> Backend<f64> {
    Backend::Floquet(FloquetOptions::default())
}

fn criterion_1_and_2() -> (Vec<Check>, Vec<Check>) {
    let (opt, report) = optimize_at(&Backend::Rwa, &rwa_base(1e-4, 10.0), 1e4, &search()).unwrap();
    let target_ratio = 1.0 - (21.0f64 / 1e4).sqrt();
    let asymptotic = 1e-4 * 21.0 + (21.0f64 / 1e4).sqrt();
    let one = vec![
        check(
            "optimized ratio",
            (opt.ratio - target_ratio).abs() <= 0.005,
            format!("{:.6} vs {:.6} ± 0.005", opt.ratio, target_ratio),
        ),
        check(
            "optimized variance",
            rel(report.var_x1, asymptotic) <= 0.10,
            format!("{:.6} vs {:.5} ± 10%", report.var_x1, asymptotic),
        ),
    ];
    let two = vec![check(
        "beyond 3 dB by a factor 10",
        report.var_x1 * 10.0 < 0.5,
        format!("2<X1^2> = {:.5}, needs < 0.05", report.var_x1),
    )];
    (one, two)
}

fn criterion_3() -> Vec<Check> {
    let base = rwa_base(1e-4, 0.0);
    let (_, full) = optimize_at(&Backend::Rwa, &base, 1e8, &search()).unwrap();
    let floor = 1e-4;
    let mut checks = vec![check(
        "full model saturates at (Gamma/kappa)(1+2n_th)",
        rel(full.var_x1, floor) <= 0.30,
        format!("{:.4e} vs {:.1e} ± 30%", full.var_x1, floor),
    )];
    let mut prev = INF;
    for coop in [1e6, 1e8] {
        let (_, red) = optimize_at(&Backend::Lindblad, &base, coop, &search()).unwrap();
        let target = (1.0 / coop).sqrt();
        checks.push(check(
            format!("reduced model keeps falling as 1/sqrt(C) at C = {coop:.0e}"),
            rel(red.var_x1, target) <= 0.10 && red.var_x1 < prev,
            format!("{:.4e} vs {:.1e} ± 10%", red.var_x1, target),
        ));
        prev = red.var_x1;
    }
    checks
}

fn criterion_4() -> Vec<Check> {
    [(1e4, 0.0), (1e6, 10.0), (1e8, 0.0)]
        .into_iter()
        .map(|(coop, n_th)| {
            let base = rwa_base(1e-8, n_th);
            let (opt, report) = optimize_at(&Backend::Rwa, &base, coop, &search()).unwrap();
            let g_eff = derive(&base.params(coop, opt.ratio).unwrap())
                .unwrap()
                .g_eff;
            check(
                format!("n_eff plateau at C = {coop:.0e}, n_th = {n_th}"),
                g_eff < 1.0 && (0.19..=0.22).contains(&report.n_eff),
                format!(
                    "n_eff = {:.5} (coupling {:.3e} < kappa)",
                    report.n_eff, g_eff
                ),
            )
        })
        .collect()
}

fn criterion_5() -> Vec<Check> {
    let base = rwa_base(1e-4, 0.0);
    let coop = 1e8;
    let (_, report) = optimize_at(&Backend::Rwa, &base, coop, &search()).unwrap();
    let predicted = 1e-4 / 2.0 * coop.sqrt();
    let ratio = report.n_eff * report.n_eff / predicted;
    vec![check(
        "n_eff^2 growth law at C = 1e8",
        (0.8..=1.2).contains(&ratio),
        format!(
            "n_eff^2 / prediction = {ratio:.4} (n_eff = {:.5}), needs [0.8, 1.2]",
            report.n_eff
        ),
    )]
}

fn random_stable(rng: &mut ChaCha8Rng, coop_range: (f64, f64)) -> Params {
    let coop = 10f64.powf(rng.gen_range(coop_range.0.log10()..coop_range.1.log10()));
    let ratio = rng.gen_range(0.0..0.999);
    let n_th = rng.gen_range(0.0..100.0);
    let gamma = 10f64.powf(rng.gen_range(-6.0..-1.0));
    params_from_cooperativity(coop, ratio, 1.0, gamma, n_th, INF).unwrap()
}

fn hot_optimum() -> Params {
    params_from_cooperativity(1e4, 0.954174, 1.0, 1e-4, 10.0, INF).unwrap()
}

fn criterion_6() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let grid: Vec<f64> = (0..201).map(|k| -3.0 + 0.03 * k as f64).collect();
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let mut p = random_stable(&mut rng, (1.0, 1e7));
        p.n_th = p.n_th.max(0.1);
        let a = output_spectrum_analytic(&p, &grid).unwrap();
        let n = output_spectrum_numeric(&p, &grid).unwrap();
        for (x, y) in a.s_values.iter().zip(&n.s_values) {
            worst = worst.max(rel(*y, *x));
        }
    }
    let p = hot_optimum();
    let weight = integrated_weight(&p).unwrap();
    let exact = steady_state(&p).unwrap().beta_occupancy.unwrap();

    let strong = params_from_cooperativity(1e6, 0.954174, 1.0, 1e-4, 10.0, INF).unwrap();
    let g_eff = derive(&strong).unwrap().g_eff;
    let fine: Vec<f64> = (0..=8000).map(|k| -4.0 + 1e-3 * k as f64).collect();
    let peaks = output_spectrum_analytic(&strong, &fine)
        .unwrap()
        .local_maxima();
    let split = if peaks.len() == 2 {
        peaks[1] - peaks[0]
    } else {
        f64::NAN
    };
    vec![
        check(
            "transfer matrix vs closed form, 200 random sets",
            worst <= 1e-8,
            format!("worst relative deviation {worst:.2e}"),
        ),
        check(
            "integrated weight gives <beta^dag beta>",
            rel(weight.beta_occ_inferred, exact) <= 0.01,
            format!("{:.6} vs {:.6}", weight.beta_occ_inferred, exact),
        ),
        check(
            "normal-mode splitting at C = 1e6",
            peaks.len() == 2 && rel(split, 2.0 * g_eff) <= 0.10,
            format!(
                "{} peaks, split {:.4} vs 2G = {:.4}",
                peaks.len(),
                split,
                2.0 * g_eff
            ),
        ),
    ]
}

fn criterion_7() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let (mut upper_bad, mut lower_bad, mut tight_bad, mut tight_total) = (0, 0, 0, 0);
    let mut worst_tight = 0.0f64;
    for _ in 0..500 {
        let p = random_stable(&mut rng, (1e2, 1e8));
        let s = steady_state(&p).unwrap();
        let r = derive(&p).unwrap().r;
        let b = squeezing_bounds(r, s.beta_occupancy.unwrap(), p.n_th);
        let slack = 1e-12 * s.var_x1;
        if s.var_x1 > b.upper + slack {
            upper_bad += 1;
        }
        if b.lower > s.var_x1 + slack {
            lower_bad += 1;
        }
        let coop = p.cooperativity();
        if coop >= 1e4 {
            tight_total += 1;
            let gap = (b.upper / s.var_x1 - 1.0).abs();
            worst_tight = worst_tight.max(gap * coop.sqrt());
            if gap >= 5.0 / coop.sqrt() {
                tight_bad += 1;
            }
        }
    }
    vec![
        check("upper bound holds", upper_bad == 0, format!("violated at {upper_bad}/500")),
        check("lower bound holds", lower_bad == 0, format!("violated at {lower_bad}/500")),
        check(
            "upper bound within 5/sqrt(C) for C >= 1e4",
            tight_bad == 0,
            format!("violated at {tight_bad}/{tight_total}, worst |upper/exact - 1| sqrt(C) = {worst_tight:.1}"),
        ),
    ]
}

fn criterion_8() -> Vec<Check> {
    [(1e4, 0.954174, 10.0), (1e3, 0.9, 0.0), (1e5, 0.95, 100.0)]
        .into_iter()
        .map(|(coop, ratio, n_th)| {
            let p = params_from_cooperativity(coop, ratio, 1.0, 1e-4, n_th, 1e4).unwrap();
            let f = periodic_steady_state(&p, &FloquetOptions::default()).unwrap();
            let s = steady_state(&p).unwrap();
            check(
                format!("kappa/Omega = 1e-4, C = {coop:.0e}, n_th = {n_th}"),
                rel(f.var_x1_avg, s.var_x1) <= 1e-3,
                format!("{:.8} vs {:.8}", f.var_x1_avg, s.var_x1),
            )
        })
        .collect()
}

fn unimodal_with_interior_minimum(values: &[f64]) -> bool {
    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    best > 0
        && best + 1 < values.len()
        && values[..=best].windows(2).all(|w| w[1] < w[0])
        && values[best..].windows(2).all(|w| w[1] > w[0])
}

fn optimized_curve(base: &SweepBase<f64>, coops: &[f64]) -> Vec<f64> {
    coops
        .iter()
        .map(|&c| {
            optimize_at(&floquet(), base, c, &search())
                .map(|(_, r)| r.var_x1)
                .unwrap_or(f64::NAN)
        })
        .collect()
}

fn criterion_9() -> Vec<Check> {
    let base = floquet_base(1.0 / 50.0, 100.0);
    let coop = 5e6;
    let backend = floquet();
    let var = |q: f64| {
        backend
            .evaluate(&base.params(coop, q).unwrap())
            .map(|r| r.var_x1)
    };
    let opt = optimize_ratio(var, &search());
    let mut checks = Vec::new();
    match opt {
        Ok(opt) => {
            let edge = var(1.0 - 1e-4).unwrap();
            let (v5, v9, v99) = (var(0.5).unwrap(), var(0.9).unwrap(), var(0.99).unwrap());
            checks.push(check(
                "bad-cavity scan has an interior minimum beyond 3 dB",
                opt.value < 0.5,
                format!("min {:.4} at ratio {:.5}", opt.value, opt.ratio),
            ));
            checks.push(check(
                "variance grows steeply as the ratio approaches 1",
                edge > 2.0 * opt.value,
                format!("{:.4} at ratio 0.9999", edge),
            ));
            checks.push(check(
                "scan is non-monotonic",
                v9 > v5 && v9 > v99,
                format!("{v5:.3} (0.5), {v9:.3} (0.9), {v99:.3} (0.99)"),
            ));
        }
        Err(e) => checks.push(check("bad-cavity scan", false, format!("{e}"))),
    }
    for (label, kappa_over_omega, coops) in [
        (
            "kappa/Omega = 1/50",
            1.0 / 50.0,
            vec![1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8],
        ),
        (
            "kappa/Omega = 1/10",
            1.0 / 10.0,
            vec![1e2, 1e3, 1e4, 1e5, 1e6],
        ),
    ] {
        let curve = optimized_curve(&floquet_base(kappa_over_omega, 0.0), &coops);
        let shown: Vec<String> = curve.iter().map(|v| format!("{v:.4}")).collect();
        checks.push(check(
            format!("optimized variance vs C is non-monotonic ({label})"),
            unimodal_with_interior_minimum(&curve),
            shown.join(", "),
        ));
    }
    checks
}

fn criterion_10() -> Vec<Check> {
    let mut checks = Vec::new();
    for coop in [1e3, 1e4] {
        let plain = floquet_base(1.0 / 50.0, 50.0);
        let tone = SweepBase {
            third_tone: ThirdTone::MatchBlue,
            ..plain
        };
        let m0 = optimize_at(&floquet(), &plain, coop, &search()).map(|(_, r)| r.var_x1);
        let m3 = optimize_at(&floquet(), &tone, coop, &search()).map(|(_, r)| r.var_x1);
        match (m0, m3) {
            (Ok(m0), Ok(m3)) => {
                let change = rel(m3, m0);
                checks.push(check(
                    format!("third tone changes the minimum little at C = {coop:.0e}"),
                    change < 0.25,
                    format!("{m0:.4} -> {m3:.4} ({:.1}%)", 100.0 * change),
                ));
                if coop == 1e4 {
                    checks.push(check(
                        "minimum with third tone stays beyond 3 dB at C = 1e4",
                        m3 < 0.5,
                        format!("{m3:.4}"),
                    ));
                }
            }
            (a, b) => checks.push(check(
                format!("third tone at C = {coop:.0e}"),
                false,
                format!("{a:?} {b:?}"),
            )),
        }
    }
    checks
}

fn min_eigenvalue(v: &RealMatrix<f64>) -> f64 {
    eigenvalues(v)
        .unwrap()
        .into_iter()
        .map(|z| z.re)
        .fold(INF, f64::min)
}

fn criterion_11() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 11);
    let (mut worst_residual, mut worst_psd, mut worst_heisenberg) = (0.0f64, 0.0f64, INF);
    for _ in 0..500 {
        let p = random_stable(&mut rng, (1.0, 1e8));
        let s = steady_state(&p).unwrap();
        let v = s.covariance.as_ref().unwrap();
        let dd = build_rwa_drift_diffusion(&p);
        worst_residual =
            worst_residual.max(lyapunov_residual(&dd.drift, v, &dd.diffusion).max_abs());
        worst_psd = worst_psd.max(-min_eigenvalue(v));
        worst_heisenberg = worst_heisenberg.min(s.purity_squared());
    }
    let mut qnd_worst = 0.0f64;
    for n_th in [0.0, 1.0, 10.0, 100.0] {
        let p = SystemParams::new(1.0, 1e-4, INF, n_th, 0.5, 0.5, 0.0).unwrap();
        qnd_worst = qnd_worst.max((steady_state(&p).unwrap().var_x1 - (1.0 + 2.0 * n_th)).abs());
    }
    let mut semi_worst = 0.0f64;
    for ratio in [0.0, 0.3, 0.9, 0.954174, 0.999] {
        let p = params_from_cooperativity(1e4, ratio, 1.0, 1e-4, 10.0, INF).unwrap();
        let s = semiclassical_self_energy(&p, 0.0);
        let x1 = (1.0 - ratio) / (1.0 + ratio);
        semi_worst = semi_worst
            .max((1.0 + 2.0 * s.n_eff_x1 - x1).abs())
            .max(rel(1.0 + 2.0 * s.n_eff_x2, 1.0 / x1));
    }
    let (opt, _) = optimize_at(&Backend::Rwa, &rwa_base(1e-4, 10.0), 1e4, &search()).unwrap();
    let matching =
        impedance_match_check(&rwa_base(1e-4, 10.0).params(1e4, opt.ratio).unwrap()).unwrap();
    vec![
        check(
            "Lyapunov residual",
            worst_residual < 1e-10,
            format!("worst {worst_residual:.2e}"),
        ),
        check(
            "covariances PSD and Heisenberg-limited",
            worst_psd <= 1e-12 && worst_heisenberg >= 1.0 - 1e-9,
            format!(
                "most negative eigenvalue {:.2e}, min 4 det V_mech {worst_heisenberg:.6}",
                -worst_psd
            ),
        ),
        check(
            "QND point keeps X1 thermal",
            qnd_worst < 1e-10,
            format!("worst {qnd_worst:.2e}"),
        ),
        check(
            "semiclassical occupancies",
            semi_worst < 1e-12,
            format!("worst {semi_worst:.2e}"),
        ),
        check(
            "impedance matching at the optimum",
            (matching.ratio - 1.0).abs() <= 0.10,
            format!("ratio {:.4}", matching.ratio),
        ),
    ]
}

fn report(id: &str, limit_secs: f64, run: impl FnOnce() -> Vec<Check>) -> bool {
    let start = Instant::now();
    let checks = run();
    let elapsed = start.elapsed().as_secs_f64();
    print_criterion(id, limit_secs, elapsed, &checks)
}

fn print_criterion(id: &str, limit_secs: f64, elapsed: f64, checks: &[Check]) -> bool {
    let in_time = elapsed < limit_secs;
    let pass = in_time && checks.iter().all(|c| c.pass);
    println!(
        "{} criterion {id} ({elapsed:.2} s, limit {limit_secs} s{})",
        if pass { "PASS" } else { "FAIL" },
        if in_time { "" } else { ", too slow" }
    );
    for c in checks {
        println!(
            "       {} {}: {}",
            if c.pass { "ok  " } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    pass
}

fn main() {
    let mut results = Vec::new();

    let start = Instant::now();
    let (one, two) = criterion_1_and_2();
    let elapsed = start.elapsed().as_secs_f64();
    results.push(print_criterion("1", 1.0, elapsed, &one));
    results.push(print_criterion("2", 1.0, elapsed, &two));

    results.push(report("3", 10.0, criterion_3));
    results.push(report("4", 1.0, criterion_4));
    results.push(report("5", 10.0, criterion_5));
    results.push(report("6", 30.0, criterion_6));
    results.push(report("7", 30.0, criterion_7));
    results.push(report("8", 60.0, criterion_8));
    results.push(report("9", 600.0, criterion_9));
    results.push(report("10", 600.0, criterion_10));
    results.push(report("11", 30.0, criterion_11));

    let failed = results.iter().filter(|p| !**p).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
