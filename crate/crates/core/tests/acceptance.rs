//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;

use acs_raman::fock::BlockMatrix;
use acs_raman::quadrature::{identity_resolution_full, identity_resolution_j, resolution_operator, SphereGrid};
use acs_raman::raman::{
    block_spectrum_oracle, eigen_residual, energy, spectrum_closed, tau_pm, Branch, RamanParams,
};
use acs_raman::su2::{
    acs_overlap_closed, build_acs, build_acs_exponential_oracle, eigenrelation_residuals, AcsAngles,
    AcsLabel,
};
use acs_raman::thermo::{
    internal_energy, ln_partition, oracle_cap, spectral_sum_oracle, spectral_sum_oracle_auto, stability,
    total_partition, ThermoParams,
};
use acs_raman::Error;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_tau(r: &mut ChaCha8Rng, max_abs: f64) -> Complex64 {
    Complex64::from_polar(r.gen_range(0.0..=max_abs), r.gen_range(0.0..2.0 * PI))
}

fn random_params(r: &mut ChaCha8Rng) -> RamanParams {
    loop {
        let lambda = r.gen_range(-3.0..3.0);
        if f64::abs(lambda) > 1e-3 {
            return RamanParams::new(r.gen_range(0.05..5.0), r.gen_range(0.05..5.0), lambda).unwrap();
        }
    }
}

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Coherent-state fixtures for 2j = 1..4 at equal frequencies, written out
/// term by term from the Fock expansions. Index 0 is the plus branch (τ = -i).
fn fixtures() -> Vec<(u32, [Vec<Complex64>; 2])> {
    let r2 = 2f64.sqrt();
    let r3 = 3f64.sqrt();
    let r6 = 6f64.sqrt();
    let h = 1.0 / r2;
    let q = 1.0 / 2f64.powf(1.5);
    vec![
        (1, [vec![c(0.0, -h), c(h, 0.0)], vec![c(0.0, h), c(h, 0.0)]]),
        (
            2,
            [
                vec![c(-0.5, 0.0), c(0.0, -r2 / 2.0), c(0.5, 0.0)],
                vec![c(-0.5, 0.0), c(0.0, r2 / 2.0), c(0.5, 0.0)],
            ],
        ),
        (
            3,
            [
                vec![c(0.0, q), c(-r3 * q, 0.0), c(0.0, -r3 * q), c(q, 0.0)],
                vec![c(0.0, -q), c(-r3 * q, 0.0), c(0.0, r3 * q), c(q, 0.0)],
            ],
        ),
        (
            4,
            [
                vec![c(0.25, 0.0), c(0.0, 0.5), c(-r6 / 4.0, 0.0), c(0.0, -0.5), c(0.25, 0.0)],
                vec![c(0.25, 0.0), c(0.0, -0.5), c(-r6 / 4.0, 0.0), c(0.0, 0.5), c(0.25, 0.0)],
            ],
        ),
    ]
}

fn ac1_fixture_fidelity() -> Verdict {
    let mut worst = 0.0f64;
    let p = RamanParams::new(1.0, 1.0, 0.5).unwrap();
    let (tp, tm) = tau_pm(&p).map_err(|e| e.to_string())?;
    for (two_j, branches) in fixtures() {
        for (tau, expected) in [tp, tm].into_iter().zip(branches) {
            let v = build_acs(AcsLabel::new(two_j, tau).unwrap()).map_err(|e| e.to_string())?;
            for (a, e) in v.amps().iter().zip(&expected) {
                worst = worst.max((a - e).norm());
            }
        }
    }

    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut cases: Vec<(String, Vec<String>)> = Vec::new();
    for two_j in 1..=4 {
        for (name, im) in [("plus", "-1"), ("minus", "1")] {
            cases.push((
                format!("acs_2j{two_j}_{name}.csv"),
                vec!["acs".into(), "--two-j".into(), two_j.to_string(), "--tau-re".into(), "0".into(), "--tau-im".into(), im.into()],
            ));
        }
    }
    cases.push((
        "acs_2j4_plus.json".into(),
        ["--format", "json", "acs", "--two-j", "4", "--tau-re", "0", "--tau-im", "-1"].map(String::from).to_vec(),
    ));
    let mut identical = 0;
    for (file, args) in &cases {
        let out = Command::new(env!("CARGO_BIN_EXE_acs")).args(args).output().map_err(|e| e.to_string())?;
        let expected = std::fs::read(golden.join(file)).map_err(|e| format!("{file}: {e}"))?;
        if out.status.success() && out.stdout == expected {
            identical += 1;
        }
    }
    check(
        worst < 1e-14 && identical == cases.len(),
        format!("max componentwise error {worst:.2e} (< 1e-14), golden files identical {identical}/{}", cases.len()),
    )
}

fn ac2_eigenstate_theorem() -> Verdict {
    let mut r = rng(2);
    let mut worst_ratio = 0.0f64;
    let mut count = 0;
    for _ in 0..200 {
        let p = random_params(&mut r);
        let scale = p.omega1().max(p.omega2()).max(p.lambda().abs());
        for two_j in 0..=40u32 {
            for b in [Branch::Plus, Branch::Minus] {
                let res = eigen_residual(&p, two_j, b).map_err(|e| e.to_string())?;
                let bound = 1e-10 * (two_j as f64 + 1.0) * scale;
                worst_ratio = worst_ratio.max(res / bound);
                count += 1;
            }
        }
    }
    check(worst_ratio < 1.0, format!("{count} residuals, worst residual/bound = {worst_ratio:.2e}"))
}

fn ac3_oracle_spectrum() -> Verdict {
    let mut r = rng(3);
    let mut worst = 0.0f64;
    let mut endpoint_worst = 0.0f64;
    for _ in 0..100 {
        let p = random_params(&mut r);
        for two_j in 0..=20u32 {
            let oracle = block_spectrum_oracle(&p, two_j).map_err(|e| e.to_string())?;
            let closed = spectrum_closed(&p, two_j);
            for (o, cl) in oracle.iter().zip(&closed) {
                worst = worst.max((o - cl).abs());
            }
            endpoint_worst = endpoint_worst
                .max((closed[0] - energy(&p, two_j, Branch::Minus)).abs())
                .max((closed[two_j as usize] - energy(&p, two_j, Branch::Plus)).abs())
                .max((oracle[0] - energy(&p, two_j, Branch::Minus)).abs())
                .max((oracle[two_j as usize] - energy(&p, two_j, Branch::Plus)).abs());
        }
    }
    check(
        worst < 1e-9 && endpoint_worst < 1e-9,
        format!("max |oracle - closed| = {worst:.2e}, max endpoint deviation from E± = {endpoint_worst:.2e} (< 1e-9)"),
    )
}

fn ac4_overlap_kernel() -> Verdict {
    let mut r = rng(4);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let two_j = r.gen_range(0..=40u32);
        let t1 = random_tau(&mut r, 5.0);
        let t2 = random_tau(&mut r, 5.0);
        let a = build_acs(AcsLabel::new(two_j, t1).unwrap()).map_err(|e| e.to_string())?;
        let b = build_acs(AcsLabel::new(two_j, t2).unwrap()).map_err(|e| e.to_string())?;
        let numeric = a.inner(&b).map_err(|e| e.to_string())?;
        worst = worst.max((numeric - acs_overlap_closed(two_j, t1, t2)).norm());
    }
    let mut ortho = 0.0f64;
    for _ in 0..200 {
        let p = random_params(&mut r);
        let (tp, tm) = tau_pm(&p).map_err(|e| e.to_string())?;
        let two_j = r.gen_range(1..=40u32);
        let a = build_acs(AcsLabel::new(two_j, tp).unwrap()).map_err(|e| e.to_string())?;
        let b = build_acs(AcsLabel::new(two_j, tm).unwrap()).map_err(|e| e.to_string())?;
        ortho = ortho.max(a.inner(&b).map_err(|e| e.to_string())?.norm());
    }
    check(
        worst < 1e-12 && ortho < 1e-12,
        format!("kernel vs inner product {worst:.2e}, |⟨τ+|τ-⟩| max {ortho:.2e} (< 1e-12)"),
    )
}

fn ac5_eigenvector_relations() -> Verdict {
    let mut r = rng(5);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let two_j = r.gen_range(0..=40u32);
        let tau = random_tau(&mut r, 10.0);
        let res = eigenrelation_residuals(AcsLabel::new(two_j, tau).unwrap()).map_err(|e| e.to_string())?;
        worst = worst.max(res.max());
    }
    check(worst < 1e-10, format!("max of r1, r2, r3 over 500 draws = {worst:.2e} (< 1e-10)"))
}

fn ac6_completeness() -> Verdict {
    let mut block_worst = 0.0f64;
    for two_j in 0..=16u32 {
        let rep = identity_resolution_j(two_j, &SphereGrid::for_block(two_j)).map_err(|e| e.to_string())?;
        block_worst = block_worst.max(rep.max_abs_deviation);
    }
    let mut full_worst = 0.0f64;
    let mut cross_worst = 0.0f64;
    for n_max in 0..=12u32 {
        let rep = identity_resolution_full(n_max, n_max).map_err(|e| e.to_string())?;
        full_worst = full_worst.max(rep.max_abs_deviation);
        cross_worst = cross_worst.max(rep.cross_block_max.unwrap_or(0.0));
    }
    let mut coarse_min = f64::INFINITY;
    let mut coarse_rejected = true;
    let mut coarse_fail_from = None;
    for two_j in 2..=16u32 {
        let coarse = SphereGrid::new(two_j as usize + 2, two_j as usize);
        coarse_rejected &= matches!(identity_resolution_j(two_j, &coarse), Err(Error::GridTooCoarse { .. }));
        let m = resolution_operator(two_j, &coarse).map_err(|e| e.to_string())?;
        let dev = m.max_abs_diff(&BlockMatrix::identity(two_j)).unwrap();
        if dev <= 1e-3 && coarse_fail_from.is_none() {
            coarse_fail_from = Some(two_j);
        }
        coarse_min = coarse_min.min(dev);
    }
    let coarse_note = match coarse_fail_from {
        Some(t) => format!(", coarse deviation falls to <= 1e-3 from 2j = {t}"),
        None => String::new(),
    };
    check(
        block_worst < 1e-13 && full_worst < 1e-12 && cross_worst < 1e-14 && coarse_min > 1e-3 && coarse_rejected,
        format!(
            "block max {block_worst:.2e} (< 1e-13), full max {full_worst:.2e} (< 1e-12), cross-block {cross_worst:.2e}, coarse grid n_phi = 2j over 2j in 2..=16: min deviation {coarse_min:.2e} (> 1e-3){coarse_note}, rejected by bounds check: {coarse_rejected}"
        ),
    )
}

fn ac7_unitary_path() -> Verdict {
    let mut r = rng(7);
    let mut worst = 0.0f64;
    for _ in 0..300 {
        let two_j = r.gen_range(0..=16u32);
        let ang = AcsAngles::new(r.gen_range(0.0..PI - 1e-3), r.gen_range(0.0..2.0 * PI)).unwrap();
        let oracle = build_acs_exponential_oracle(ang, two_j).map_err(|e| e.to_string())?;
        let closed = build_acs(AcsLabel::from_angles(two_j, ang).unwrap()).map_err(|e| e.to_string())?;
        worst = worst.max(oracle.axpy(c(-1.0, 0.0), &closed).unwrap().norm());
    }
    check(worst < 1e-10, format!("max 2-norm difference {worst:.2e} over 300 draws (< 1e-10)"))
}

fn ac8_thermodynamics() -> Verdict {
    let mut r = rng(8);
    let mut sets = Vec::new();
    while sets.len() < 20 {
        let w1: f64 = r.gen_range(0.3..3.0);
        let w2 = r.gen_range(0.3..3.0);
        let lambda = r.gen_range(-1.0..1.0) * (0.9 * w1 * w2).sqrt();
        let p = RamanParams::new(w1, w2, lambda).unwrap();
        // keep the brute-force sum within its block cap at β = 0.2
        if acs_raman::raman::normal_modes(&p).b >= 0.1 {
            sets.push(p);
        }
    }
    let betas: Vec<f64> = (0..=12).map(|k| 0.2 + 4.8 * k as f64 / 12.0).collect();
    let (mut z_worst, mut u_worst, mut fd_worst) = (0.0f64, 0.0f64, 0.0f64);
    for p in &sets {
        for &b in &betas {
            let t = ThermoParams::new(b).unwrap();
            let closed = total_partition(p, t).map_err(|e| e.to_string())?;
            let (z, u) = spectral_sum_oracle_auto(p, t).map_err(|e| e.to_string())?;
            z_worst = z_worst.max((z - closed.z_total).abs() / closed.z_total);
            u_worst = u_worst.max((u - closed.internal_energy).abs() / closed.internal_energy);
            let h = 1e-6;
            let fd = -(ln_partition(p, ThermoParams::new(b + h).unwrap()).unwrap()
                - ln_partition(p, ThermoParams::new(b - h).unwrap()).unwrap())
                / (2.0 * h);
            fd_worst = fd_worst.max((fd - closed.internal_energy).abs() / closed.internal_energy);
        }
    }
    let p = RamanParams::new(1.0, 1.0, 0.5).unwrap();
    let t = ThermoParams::new(1.0).unwrap();
    let expected = 1.5 / (1.5f64.exp() - 1.0) + 0.5 / (0.5f64.exp() - 1.0);
    let u = internal_energy(&p, t).map_err(|e| e.to_string())?;
    let cap = oracle_cap(&p, t).map_err(|e| e.to_string())?;
    let (_, u_oracle) = spectral_sum_oracle(&p, t, cap).map_err(|e| e.to_string())?;
    let spot = ((u - expected).abs() / expected).max((u_oracle - expected).abs() / expected);
    check(
        z_worst < 1e-8 && u_worst < 1e-8 && fd_worst < 1e-6 && spot < 1e-8,
        format!(
            "Z rel {z_worst:.2e}, U rel {u_worst:.2e} (< 1e-8); finite difference rel {fd_worst:.2e} (< 1e-6); U(1,1,0.5,β=1) = {u:.10} vs oracle {u_oracle:.10} (rel {spot:.1e})"
        ),
    )
}

fn ac9_stability_gate() -> Verdict {
    let mut r = rng(9);
    let mut gated = 0;
    let mut total = 0;
    let mut cases: Vec<RamanParams> = vec![RamanParams::new(2.0, 1.0, 2f64.sqrt()).unwrap()];
    for _ in 0..100 {
        let w1: f64 = r.gen_range(0.1..3.0);
        let w2 = r.gen_range(0.1..3.0);
        let lambda = (w1 * w2).sqrt() * r.gen_range(1.0..3.0) * if r.gen_bool(0.5) { 1.0 } else { -1.0 };
        cases.push(RamanParams::new(w1, w2, lambda).unwrap());
    }
    let t = ThermoParams::new(1.0).unwrap();
    for p in &cases {
        total += 1;
        let all_gated = !stability(p)
            && matches!(total_partition(p, t), Err(Error::UnstableSystem { .. }))
            && matches!(internal_energy(p, t), Err(Error::UnstableSystem { .. }))
            && matches!(spectral_sum_oracle_auto(p, t), Err(Error::UnstableSystem { .. }));
        gated += all_gated as usize;
    }
    let mut cli_ok = 0;
    let cli_cases = [("2", "1", "1.5"), ("2", "1", "1.4142135623730951"), ("1", "1", "-1")];
    for (w1, w2, l) in cli_cases {
        let out = Command::new(env!("CARGO_BIN_EXE_acs"))
            .args(["thermo", "--w1", w1, "--w2", w2, "--lambda", l, "--beta-min", "0.5", "--beta-max", "2", "--steps", "3"])
            .output()
            .map_err(|e| e.to_string())?;
        let stderr = String::from_utf8_lossy(&out.stderr);
        if out.status.code() == Some(3) && out.stdout.is_empty() && stderr.contains("\"UnstableSystem\"") {
            cli_ok += 1;
        }
    }
    check(
        gated == total && cli_ok == cli_cases.len(),
        format!("library gated {gated}/{total}, CLI exit 3 with UnstableSystem {cli_ok}/{}", cli_cases.len()),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("AC1 fixture fidelity", ac1_fixture_fidelity),
        ("AC2 eigenstate theorem", ac2_eigenstate_theorem),
        ("AC3 oracle spectrum equivalence", ac3_oracle_spectrum),
        ("AC4 overlap kernel", ac4_overlap_kernel),
        ("AC5 eigenvector relations", ac5_eigenvector_relations),
        ("AC6 completeness", ac6_completeness),
        ("AC7 unitary-path consistency", ac7_unitary_path),
        ("AC8 thermodynamics", ac8_thermodynamics),
        ("AC9 stability gate", ac9_stability_gate),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = std::time::Instant::now();
        let verdict = f();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS  {name}: {detail} [{secs:.2}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail} [{secs:.2}s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all {} acceptance criteria passed", criteria.len());
}
