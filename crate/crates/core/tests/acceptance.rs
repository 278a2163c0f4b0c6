//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seqchain::correlators::{additive_variance_exact, collective_mean, one_point, two_point, VarianceMethod};
use seqchain::gates::{controlled_rotation, random_gate, weyl_gate, Gate};
use seqchain::macroscopicity::{classify_macroscopic, neff, neff_optimize, variance_sweep};
use seqchain::oracle::{sweep, sweep_prefix, DEFAULT_CAP};
use seqchain::squeezing::{
    fig4_curve, mean_z, mean_z_coeff_closed, optimal_theta, sm_bound, transverse_coeff_closed, transverse_variance,
    unit_grid, xi_squared, Mode,
};
use seqchain::transfer::{check_isometry, extract_kraus, initial_density, site_density_recursion, TransferSet};
use seqchain::{ChainSpec64, LocalObservable64};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn chains(n: usize) -> Vec<ChainSpec64> {
    let h = 0.5f64.sqrt();
    vec![
        ChainSpec64::ground(n).unwrap(),
        ChainSpec64::new(n, Complex64::new(h, 0.0), Complex64::new(h, 0.0)).unwrap(),
        ChainSpec64::new(n, Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)).unwrap(),
    ]
}

fn observables() -> Vec<LocalObservable64> {
    let n = [0.3f64, -0.5, 0.8];
    let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    vec![
        LocalObservable64::sigma_x(),
        LocalObservable64::sigma_y(),
        LocalObservable64::sigma_z(),
        LocalObservable64::bloch(n.map(|x| x / norm)).unwrap(),
    ]
}

fn scaled_dev(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(1.0)
}

fn oracle_equivalence() -> Verdict {
    const TOL: f64 = 1e-8;
    let start = Instant::now();
    let mut gates: Vec<(String, Gate<f64>)> = common::family_gates();
    gates.extend(common::random_gates(200));
    let obs = observables();
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    let mut failures = 0usize;
    for (name, g) in &gates {
        for n in 4..=10 {
            for ch in chains(n) {
                let psi = sweep(g, &ch).unwrap();
                let ts = TransferSet::new(g, ch);
                for a in &obs {
                    let mut devs = Vec::with_capacity(n * n);
                    for m in 1..=n {
                        devs.push(scaled_dev(
                            one_point(&ts, a, m, n).unwrap(),
                            psi.expect_local(a, m).unwrap(),
                        ));
                        for k in m + 1..=n {
                            devs.push(scaled_dev(
                                two_point(&ts, a, m, k, n).unwrap(),
                                psi.expect_pair(a, m, k).unwrap(),
                            ));
                        }
                    }
                    devs.push(scaled_dev(
                        collective_mean(&ts, a, n).unwrap(),
                        psi.collective_mean(a).unwrap(),
                    ));
                    let var = additive_variance_exact(&ts, a, n, VarianceMethod::Sweep).unwrap().total;
                    devs.push(scaled_dev(var, psi.collective_variance(a).unwrap()));
                    let d = devs.into_iter().fold(0.0, f64::max);
                    if d > TOL {
                        failures += 1;
                    }
                    if d > worst {
                        worst = d;
                        worst_at = format!("{name}, N={n}");
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        failures == 0 && secs < 60.0,
        format!(
            "{} gates, N=4..10, max deviation {worst:.2e} ({worst_at}), {failures} failures, {secs:.1}s",
            gates.len()
        ),
    )
}

fn isometry() -> Verdict {
    let worst = (0..1000u64)
        .map(|s| check_isometry(&extract_kraus(&random_gate::<f64>(s))))
        .fold(0.0, f64::max);
    verdict(worst <= 1e-12, format!("1000 gates, max deviation {worst:.2e}"))
}

fn weyl_spectrum() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (a, b, c): (f64, f64, f64) = (
            rng.random_range(-PI..PI),
            rng.random_range(-PI..PI),
            rng.random_range(-PI..PI),
        );
        let (sa, sb, sc) = (a.sin(), b.sin(), c.sin());
        let half = Complex64::new(0.5 * sc * (sa + sb), 0.0);
        let root = Complex64::new(sc * sc * (sa + sb).powi(2) - 4.0 * sa * sb, 0.0).sqrt() * 0.5;
        let expected = [
            Complex64::new(1.0, 0.0),
            Complex64::new(sa * sb, 0.0),
            half + root,
            half - root,
        ];
        let ts = TransferSet::new(&weyl_gate(a, b, c), ChainSpec64::ground(2).unwrap());
        let mut got = ts.spectral(1e-9).unwrap().eigenvalues;
        for e in expected {
            let (k, d) = got
                .iter()
                .enumerate()
                .map(|(k, z)| (k, (z - e).norm()))
                .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
                .unwrap();
            worst = worst.max(d);
            got.remove(k);
        }
    }
    verdict(
        worst <= 1e-9,
        format!("100 angle triples, max eigenvalue mismatch {worst:.2e}"),
    )
}

fn angle_to_axis(n: [f64; 3], axis: usize) -> f64 {
    let dot = n[axis].abs();
    let cross = (0..3).filter(|&k| k != axis).map(|k| n[k] * n[k]).sum::<f64>().sqrt();
    cross.atan2(dot)
}

fn neff_weyl() -> Verdict {
    let ch = ChainSpec64::ground(4).unwrap();
    let mut value_dev = 0.0f64;
    let mut dir_dev = 0.0f64;
    for k in 0..50 {
        let t = 0.02 + 1.45 * k as f64 / 49.0;
        let want = t.cos().powi(2);
        let gy = weyl_gate(t, FRAC_PI_2, FRAC_PI_2);
        let gx = weyl_gate(FRAC_PI_2, t, FRAC_PI_2);
        value_dev = value_dev.max((neff(&gy, &ch, [0.0, 1.0, 0.0]).unwrap() - want).abs());
        value_dev = value_dev.max((neff(&gx, &ch, [1.0, 0.0, 0.0]).unwrap() - want).abs());
        let ry = neff_optimize(&gy, &ch).unwrap();
        let rx = neff_optimize(&gx, &ch).unwrap();
        value_dev = value_dev
            .max((ry.neff_coeff - want).abs())
            .max((rx.neff_coeff - want).abs());
        dir_dev = dir_dev
            .max(angle_to_axis(ry.best_direction, 1))
            .max(angle_to_axis(rx.best_direction, 0));
    }
    verdict(
        value_dev <= 1e-8 && dir_dev <= 1e-4,
        format!("50 angles, max |neff - cos^2| {value_dev:.2e}, max direction error {dir_dev:.2e} rad"),
    )
}

fn variance_scaling() -> Verdict {
    let sz = LocalObservable64::sigma_z();
    let plus = ChainSpec64::plus(2).unwrap();
    let ghz = TransferSet::new(&controlled_rotation(PI), plus);
    let mut lengths: Vec<usize> = (2..=20).collect();
    lengths.extend([50, 100, 333, 1000, 2500, 5000, 9999, 10_000]);
    let quad_dev = lengths
        .iter()
        .map(|&n| {
            let v = additive_variance_exact(&ghz, &sz, n, VarianceMethod::Spectral)
                .unwrap()
                .total;
            ((v - (n * n) as f64) / (n * n) as f64).abs()
        })
        .fold(0.0, f64::max);

    let mut small_ok = true;
    let mut large_ok = true;
    let mut report = Vec::new();
    for d in [0.1, 0.2, 0.3, 0.4] {
        let g = controlled_rotation(PI - d);
        let short = variance_sweep(&g, &plus, &sz, &(2..=10).collect::<Vec<_>>()).unwrap();
        let min_small = short.iter().filter_map(|r| r.slope).fold(f64::INFINITY, f64::min);
        let max_small = short.iter().filter_map(|r| r.slope).fold(0.0, f64::max);
        small_ok &= (min_small - 2.0).abs() <= 0.2 && (max_small - 2.0).abs() <= 0.2;
        let long = variance_sweep(&g, &plus, &sz, &[100, 999, 1000]).unwrap();
        let local = long[2].slope.unwrap();
        let fitted = (long[2].variance / long[0].variance).ln() / 10f64.ln();
        large_ok &= local < 1.2;
        report.push(format!("d={d}: N<=10 slope {min_small:.3}..{max_small:.3}, N=1000 slope {local:.3} (100..1000 exponent {fitted:.3})"));
    }
    verdict(
        quad_dev <= 1e-9 && small_ok && large_ok,
        format!("a=pi max rel dev {quad_dev:.2e} up to N=1e4; {}", report.join("; ")),
    )
}

fn linear_fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn squeezing_fits() -> Verdict {
    let lengths = [100usize, 200, 400, 800];
    let xs: Vec<f64> = lengths.iter().map(|&n| n as f64).collect();
    let mut worst = 0.0f64;
    let mut failing = Vec::new();
    for k in 1..=15 {
        let t = 0.1 * k as f64;
        let means: Vec<f64> = lengths.iter().map(|&n| mean_z(t, n, Mode::Exact).unwrap()).collect();
        let vars: Vec<f64> = lengths
            .iter()
            .map(|&n| transverse_variance(t, FRAC_PI_4, n, Mode::Exact).unwrap())
            .collect();
        let dm = (linear_fit_slope(&xs, &means) - mean_z_coeff_closed(t)).abs();
        let dv = (linear_fit_slope(&xs, &vars) - transverse_coeff_closed(t, FRAC_PI_4)).abs();
        worst = worst.max(dm).max(dv);
        if dm.max(dv) > 1e-4 {
            failing.push(format!("chi_t={t:.1} (mean {dm:.1e}, var {dv:.1e})"));
        }
    }
    let detail = if failing.is_empty() {
        format!("15 points, max slope error {worst:.2e}")
    } else {
        format!("max slope error {worst:.2e}; over 1e-4 at {}", failing.join(", "))
    };
    verdict(failing.is_empty(), detail)
}

fn squeezing_existence() -> Verdict {
    let xi = xi_squared(0.2, 1000, Mode::Asymptotic).unwrap();
    let mut worst = 0.0f64;
    for k in 1..=15 {
        let th = optimal_theta(0.1 * k as f64).unwrap().theta;
        let d = (th - FRAC_PI_4).rem_euclid(PI);
        worst = worst.max(d.min(PI - d));
    }
    verdict(
        xi < 1.0 && worst <= 1e-6,
        format!("xi^2(0.2) = {xi:.6}, max |theta* - pi/4| {worst:.2e}"),
    )
}

fn depth_bounds() -> Verdict {
    let grid = unit_grid::<f64>(201);
    let sep = sm_bound(0.5, &grid).unwrap();
    let pair = sm_bound(1.0, &grid).unwrap();
    let parabola = sep.samples.iter().map(|(m, f)| (f - m * m).abs()).fold(0.0, f64::max);
    let chi: Vec<f64> = (1..=39).map(|k| 0.04 * k as f64).collect();
    let curve = fig4_curve(&chi, &sep, &pair).unwrap();
    let witness = curve.iter().filter(|p| p.m > 0.5 && p.below_pairwise).count();
    let in_bounds = curve.iter().all(|p| p.v >= 0.0 && p.v <= 1.0 && p.m.abs() <= 1.0);
    verdict(
        parabola <= 1e-8 && witness > 0 && in_bounds,
        format!("separable bound max |F - m^2| {parabola:.2e}; {witness} points below pairwise bound with m > 0.5; bounds respected: {in_bounds}"),
    )
}

fn classification() -> Verdict {
    let mut gates = common::family_gates();
    gates.extend(common::random_gates(100));
    let mut disagreements = Vec::new();
    let mut macroscopic = 0;
    for (name, g) in &gates {
        let spectral = TransferSet::new(g, ChainSpec64::ground(2).unwrap())
            .spectral(1e-8)
            .unwrap()
            .unit_dimension();
        match classify_macroscopic(g, 1e-8) {
            Ok(c) if c.is_macroscopic == (spectral >= 2) => macroscopic += usize::from(c.is_macroscopic),
            _ => disagreements.push(name.clone()),
        }
    }
    verdict(
        disagreements.is_empty(),
        format!(
            "{} gates ({macroscopic} macroscopic), disagreements: {}",
            gates.len(),
            if disagreements.is_empty() {
                "none".into()
            } else {
                disagreements.join(", ")
            }
        ),
    )
}

fn density_recursion() -> Verdict {
    let mut worst = 0.0f64;
    for (_, g) in common::family_gates() {
        let k = extract_kraus(&g);
        for n in 2..=10 {
            for ch in chains(n) {
                let mut rho = initial_density(&ch);
                for m in 1..=n {
                    if m > 1 {
                        rho = site_density_recursion(&k, &rho).unwrap();
                    }
                    let prefix = sweep_prefix(&g, &ch, m, DEFAULT_CAP)
                        .unwrap()
                        .reduced_density(m)
                        .unwrap();
                    worst = worst.max(prefix.max_abs_diff(&rho));
                }
                let full = sweep(&g, &ch).unwrap().reduced_density(n).unwrap();
                worst = worst.max(full.max_abs_diff(&rho));
            }
        }
    }
    verdict(
        worst <= 1e-10,
        format!("all families, N=2..10, max deviation {worst:.2e}"),
    )
}

type Check = fn() -> Verdict;

fn main() -> ExitCode {
    let criteria: [(&str, Check); 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("Kraus isometry", isometry),
        ("Weyl transfer spectrum", weyl_spectrum),
        ("effective size of Weyl gates", neff_weyl),
        ("variance scaling of controlled rotations", variance_scaling),
        ("squeezing coefficients from finite-N fits", squeezing_fits),
        ("squeezing existence and optimal angle", squeezing_existence),
        ("entanglement-depth bounds", depth_bounds),
        ("macroscopicity classification", classification),
        ("reduced-density recursion", density_recursion),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {:>2}. {name}: {}", k + 1, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
