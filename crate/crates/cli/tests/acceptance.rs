//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//! Expected values come from closed forms written out here, not from the
//! library's own helpers.

use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::Rng;
use weak_dirac::clifford::{verify_clifford, C64};
use weak_dirac::fields::{
    apply_cutoff, dirac_fd, gaussian_spinor, loss_yau, magnitude, CutoffWindow, SpinorField,
};
use weak_dirac::lab::{self, BumpTerm, RadialBump};
use weak_dirac::measure::{dirac_inverse_apply, lp_norm, weak_norm};
use weak_dirac::quadrature::{halton, substream, VectorNorm};
use weak_dirac::{build_gamma_set, QuadratureSpec};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: weak_dirac::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Γ(k/2) for a positive integer k, exactly from factorials.
fn gamma_half(k: u32) -> f64 {
    if k.is_multiple_of(2) {
        (1..k / 2).map(f64::from).product()
    } else {
        // Γ(n + 1/2) = (2n)! / (4^n n!) √π
        let n = (k - 1) / 2;
        let num: f64 = (1..=2 * n).map(f64::from).product();
        let den: f64 = 4f64.powi(n as i32) * (1..=n).map(f64::from).product::<f64>();
        num / den * PI.sqrt()
    }
}

fn unit_ball_volume(m: u32) -> f64 {
    PI.powf(m as f64 / 2.0) / gamma_half(m + 2)
}

// 1. Clifford relations hold exactly.
fn clifford() -> Check {
    for m in 3..=10 {
        let gs = lib(build_gamma_set(m))?;
        let r = verify_clifford(&gs, 0.0);
        ensure(
            r.anticommutator_defect == 0.0 && r.hermiticity_defect == 0.0,
            || {
                format!(
                    "m = {m}: defects {} / {}",
                    r.anticommutator_defect, r.hermiticity_defect
                )
            },
        )?;
    }
    Ok("m = 3..10 exact".into())
}

// 2. |ψ| = (1+r²)^{-(m-1)/2} and (γ·p)ψ = m/(1+r²) ψ by finite differences.
fn zero_mode() -> Check {
    let mut notes = Vec::new();
    for m in 3..=5 {
        let psi = lib(loss_yau(m))?;
        let gs = psi.gammas().unwrap().clone();
        let (mut worst, mut e1, mut e2) = (0.0f64, 0.0, 0.0);
        for k in 1..=1000u64 {
            let x: Vec<f64> = halton(k, m).iter().map(|u| 4.0 * u - 2.0).collect();
            let r2: f64 = x.iter().map(|v| v * v).sum();
            let v = psi.evaluate(&x);
            worst = worst.max(
                (magnitude(&v, VectorNorm::L2) - (1.0 + r2).powf(-(m as f64 - 1.0) / 2.0)).abs(),
            );
            let target = &v * C64::new(m as f64 / (1.0 + r2), 0.0);
            e1 += (lib(dirac_fd(&gs, &psi, &x, 1e-2))? - &target).norm();
            e2 += (lib(dirac_fd(&gs, &psi, &x, 5e-3))? - &target).norm();
        }
        let order = (e1 / e2).log2();
        ensure(worst <= 1e-12, || {
            format!("m = {m}: identity error {worst:e}")
        })?;
        ensure((order - 2.0).abs() <= 0.1, || {
            format!("m = {m}: order {order}")
        })?;
        notes.push(format!("m={m} order {order:.3}"));
    }
    Ok(notes.join(", "))
}

// 3. Bounded rhs, logarithmic growth of lhs^{3/2}.
fn counterexample() -> Check {
    let bound = 3.0 * PI * PI + 8.0 * PI * 15.0 / 16.0;
    let all: Vec<f64> = (0..=20)
        .map(|k| 4.0 * (2.5e5f64).powf(k as f64 / 20.0))
        .collect();
    let quad = QuadratureSpec {
        r_max: 1e6 + 2.0,
        ..QuadratureSpec::default()
    };
    let wide = lib(lab::counterexample_sweep(3, &all, &quad))?;
    let worst = wide.rows.iter().map(|r| r.rhs).fold(0.0, f64::max);
    ensure(worst <= bound, || format!("rhs {worst} exceeds {bound}"))?;
    let window: Vec<f64> = (0..=12).map(|k| 10f64.powf(3.0 + k as f64 / 4.0)).collect();
    let r = lib(lab::counterexample_sweep(3, &window, &quad))?;
    let fit = r.fit.ok_or("no fit")?;
    let rel = (fit.slope - 4.0 * PI).abs() / (4.0 * PI);
    ensure(rel < 0.02, || format!("slope {} vs 4π", fit.slope))?;
    ensure(fit.r_squared >= 0.999, || format!("R² {}", fit.r_squared))?;
    ensure(fit.points == 13, || format!("fit used {} rows", fit.points))?;
    Ok(format!(
        "max rhs {worst:.4} <= {bound:.4}; slope {:.5} ({:.3}% off 4π), R² {:.6}",
        fit.slope,
        100.0 * rel,
        fit.r_squared
    ))
}

// 4. Weak-norm ground truths.
fn weak_norms() -> Check {
    let quad = QuadratureSpec::default();
    for m in 3..=6u32 {
        let v = lib(weak_norm(
            &SpinorField::inverse_radius(m as usize),
            m as f64,
            &quad,
        ))?
        .value;
        let want = unit_ball_volume(m).powf(1.0 / m as f64);
        ensure((v - want).abs() < 1e-6, || {
            format!("‖1/|x|‖_({m},∞) = {v}, want {want}")
        })?;
    }
    let psi = lib(loss_yau(3))?;
    let w = lib(weak_norm(&psi, 1.5, &quad))?.value;
    let want = (4.0 * PI / 3.0).powf(2.0 / 3.0);
    ensure((w - want).abs() < 1e-6, || format!("‖ψ‖_(3/2,∞) = {w}"))?;
    let strong = lib(lp_norm(&psi, 1.5, &quad))?;
    ensure(strong.is_infinite(), || format!("‖ψ‖_3/2 = {strong}"))?;
    Ok(format!("‖ψ‖_(3/2,∞) = {w:.12}, ‖ψ‖_3/2 = ∞"))
}

// 5. Inverse Dirac operator reproduces a gaussian.
fn representation() -> Check {
    let quad = QuadratureSpec::default();
    let mut worst = 0.0f64;
    for m in 3..=5 {
        let f = lib(gaussian_spinor(m, 1.0))?;
        let g = f.dirac_image().unwrap();
        let gs = f.gammas().unwrap().clone();
        for x in weak_dirac_cli::riesz_probes(m) {
            let exact = f.evaluate(&x);
            // e^{-r²} at the probe
            let r2: f64 = x.iter().map(|v| v * v).sum();
            ensure((exact.norm() - (-r2).exp()).abs() < 1e-15, || {
                "gaussian oracle".into()
            })?;
            let q = lib(dirac_inverse_apply(&gs, &g, &x, &quad))?;
            let err = (&q.value - &exact).norm();
            let rel = err / exact.norm();
            ensure(rel <= 1e-4 && err <= q.error_estimate, || {
                format!(
                    "m = {m}, x = {x:?}: error {err:e}, estimate {:e}",
                    q.error_estimate
                )
            })?;
            worst = worst.max(rel);
        }
    }
    Ok(format!("15 probes, worst relative error {worst:.2e}"))
}

// 6. Strong ratio dominates the closed-form bound; blow-up toward p = 1.
fn constants() -> Check {
    let quad = QuadratureSpec::default();
    let grid: Vec<f64> = (0..39).map(|k| 1.05 + 0.05 * k as f64).collect();
    for &p in &grid {
        let ratio = lib(lab::strong_sobolev_ratio(p, &quad))?;
        let ps = 3.0 * p / (3.0 - p);
        let a = 4.0 * PI * 2f64.powf(-ps) * 2.0 * p / (9.0 * (p - 1.0));
        let b = 16.0 * PI * 3f64.powf(p - 1.0) * p / (4.0 * p - 3.0);
        let bound = a.powf(1.0 / ps) / b.powf(1.0 / p);
        let printed = lib(lab::copt_lower_bound_closed_form(p))?;
        ensure((printed - bound).abs() < 1e-12 * bound, || {
            format!("p = {p}: closed form {printed} vs {bound}")
        })?;
        ensure(ratio >= bound, || {
            format!("p = {p}: ratio {ratio} < bound {bound}")
        })?;
    }
    let descent = [1.2, 1.1, 1.05, 1.02, 1.01];
    let mut prev = (0.0, 0.0);
    for p in descent {
        let c = lib(lab::copt_lower_bound_closed_form(p))?;
        let s = lib(lab::sobolev_optimal_constant(p))?;
        ensure(c > prev.0 && c / s > prev.1, || {
            format!("not increasing at p = {p}")
        })?;
        prev = (c, c / s);
    }
    Ok(format!(
        "39 grid points dominate; copt(1.01) = {:.4}, copt/C̃ = {:.4}",
        prev.0, prev.1
    ))
}

// 7. Weak Hardy chain and the two forms of its coefficient.
fn weak_hardy() -> Check {
    let quad = QuadratureSpec::default();
    let coeff = (9.0 * PI).powf(1.0 / 3.0);
    let mut min_slack = f64::INFINITY;
    for n in [10.0, 100.0, 1000.0] {
        let f = lib(apply_cutoff(&lib(loss_yau(3))?, lib(CutoffWindow::new(n))?))?;
        let r = lib(lab::weak_hardy_check(3, &f, &quad))?;
        let slack = coeff * r.weak - r.lhs;
        ensure(slack > 0.0, || format!("n = {n}: slack {slack}"))?;
        min_slack = min_slack.min(slack);
    }
    for m in 3..=8u32 {
        let mf = m as f64;
        let k = mf - 1.0;
        let a = (k.powf(1.0 / mf) + k.powf(-k / mf)) * unit_ball_volume(m).powf(1.0 / mf);
        let b = PI.sqrt() * mf / (gamma_half(m + 2).powf(1.0 / mf) * k.powf(1.0 - 1.0 / mf));
        ensure((a - b).abs() < 1e-12 * a, || format!("m = {m}: {a} vs {b}"))?;
        let l = lab::hardy_coefficient(m as usize);
        ensure((l - a).abs() < 1e-12 * a, || {
            format!("m = {m}: library {l} vs {a}")
        })?;
    }
    Ok(format!(
        "min slack {min_slack:.6}; coefficient forms agree for m = 3..8"
    ))
}

// 8. Weak Hölder fuzz.
fn weak_holder() -> Check {
    let mut notes = Vec::new();
    for d in 1..=3 {
        let r = lib(lab::weak_holder_fuzz(d, 10_000, 42))?;
        ensure(r.violations.is_empty(), || {
            format!("d = {d}: {} violations", r.violations.len())
        })?;
        ensure(r.epsilon_checks == 100 && r.epsilon_failures == 0, || {
            format!("d = {d}: ε grid worst gap {}", r.epsilon_worst_gap)
        })?;
        notes.push(format!("d={d} max ratio {:.4}", r.max_ratio));
    }
    Ok(notes.join(", "))
}

// 9. Classical Hardy inequality in L¹ on random radial bumps.
fn hardy_l1() -> Check {
    let quad = QuadratureSpec::default();
    let mut worst = f64::INFINITY;
    for m in 3..=5 {
        for trial in 0..100 {
            let mut rng = substream(9, (m * 1000 + trial) as u64);
            let terms = (0..rng.random_range(1..=4))
                .map(|_| {
                    Ok(BumpTerm {
                        amplitude: rng.random_range(-2.0..2.0),
                        window: CutoffWindow::new(rng.random_range(0.1..20.0))?,
                        scale: (rng.random_range(-2.0..2.0f64)).exp(),
                    })
                })
                .collect::<weak_dirac::Result<Vec<_>>>();
            let u = lib(RadialBump::new(lib(terms)?))?;
            let r = lib(lab::hardy_l1_check(m, &u, &quad))?;
            ensure(r.margin >= -1e-9 * r.rhs, || {
                format!("m = {m}, trial {trial}: margin {}", r.margin)
            })?;
            worst = worst.min(r.margin / r.rhs);
        }
    }
    Ok(format!("300 bumps, smallest margin/rhs {worst:.3e}"))
}

fn cli(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_weak-dirac"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!(
            "{args:?} exited {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

// 10. Identical flags give identical report bytes.
fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let at = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let runs: Vec<(Vec<String>, String)> = vec![
        (
            vec![
                "gamma-check".into(),
                "--m".into(),
                "5".into(),
                "--dump".into(),
            ],
            at("g.json"),
        ),
        (
            vec![
                "zero-mode".into(),
                "--m".into(),
                "4".into(),
                "--points".into(),
                "200".into(),
                "--out".into(),
            ],
            at("z.csv"),
        ),
        (
            vec![
                "sweep".into(),
                "--n".into(),
                "10,100,1000".into(),
                "--out".into(),
            ],
            at("s.csv"),
        ),
        (
            vec![
                "sweep".into(),
                "--n".into(),
                "10,100".into(),
                "--out".into(),
            ],
            at("s.json"),
        ),
        (
            vec![
                "constants".into(),
                "--p-grid".into(),
                "1.05:2.95:0.3".into(),
                "--out".into(),
            ],
            at("c.csv"),
        ),
        (
            vec![
                "weak-hardy".into(),
                "--n".into(),
                "100".into(),
                "--out".into(),
            ],
            at("h.csv"),
        ),
        (
            vec![
                "weak-holder".into(),
                "--dim".into(),
                "2".into(),
                "--trials".into(),
                "2000".into(),
                "--seed".into(),
                "5".into(),
                "--out".into(),
            ],
            at("w.json"),
        ),
        (
            vec![
                "riesz-check".into(),
                "--m".into(),
                "3".into(),
                "--out".into(),
            ],
            at("r.csv"),
        ),
    ];
    for (args, path) in &runs {
        let mut full: Vec<&str> = args.iter().map(String::as_str).collect();
        full.push(path);
        cli(&full)?;
        let first = std::fs::read(path).map_err(|e| e.to_string())?;
        std::fs::remove_file(path).map_err(|e| e.to_string())?;
        cli(&full)?;
        let second = std::fs::read(path).map_err(|e| e.to_string())?;
        ensure(first == second, || {
            format!("{} differs between runs", Path::new(path).display())
        })?;
    }
    Ok(format!("{} commands byte-identical", runs.len()))
}

type Criterion = (&'static str, fn() -> Check, u64);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("clifford exactness", clifford, 1),
        ("zero-mode identities", zero_mode, 10),
        ("counterexample reproduction", counterexample, 30),
        ("weak-norm ground truths", weak_norms, 5),
        ("representation formula", representation, 60),
        ("constant estimates", constants, 10),
        ("weak Hardy chain", weak_hardy, 10),
        ("weak Hölder fuzz", weak_holder, 30),
        ("classical Hardy L¹", hardy_l1, 10),
        ("determinism", determinism, 120),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = match result {
            Ok(note) if took > Duration::from_secs(*limit) => {
                Err(format!("{note}; took {took:.1?}, limit {limit} s"))
            }
            other => other,
        };
        match result {
            Ok(note) => println!("PASS {:>2} {name} ({took:.2?}): {note}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({took:.2?}): {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
