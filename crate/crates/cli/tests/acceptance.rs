//! Acceptance suite: one pass/fail line per criterion, non-zero exit on any
//! failure. Runs without the libtest harness so the lines always print.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use structlmi::matops::{from_rows, solve_lyapunov};
use structlmi::random::{gaussian, network_plant, posdef, with_abscissa};
use structlmi::verify::dilated_max_eigenvalue;
use structlmi::{
    basis_from_mask, check_inversion_closure, compute_structure_set, decentralized_mask,
    dilated_feasibility, synthesize_blanchini, synthesize_main, synthesize_prop1, verify_gain,
    verify_lyapunov, BlockPartition, GammaMode, Mat, Plant, SolveStatus, StructureBasis, SymMat,
    SynthesisCertificate, SynthesisError, SynthesisOptions, Vector, ZeroPatternMask,
};
use structlmi_cli::ReportFile;

const CLASSIFY_TOL: f64 = 1e-8;
const RECHECK_TOL: f64 = 1e-6;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn network() -> (Plant, BlockPartition, StructureBasis) {
    let a = Mat::from_diagonal(&Vector::from_vec(vec![0.0, 0.1, 0.0]));
    let b = from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
    let part = BlockPartition::scalar(3, 2).unwrap();
    let basis = basis_from_mask(&decentralized_mask(&b, &part).unwrap()).unwrap();
    (Plant::new(a, b).unwrap(), part, basis)
}

fn overlapping() -> (Plant, ZeroPatternMask, StructureBasis) {
    let a = from_rows(&[vec![1.0, 4.0, 0.0], vec![1.0, 2.0, 2.0], vec![0.0, -2.0, 3.0]]).unwrap();
    let b = from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let mask = ZeroPatternMask::from_rows(&[vec![0, 0, 1], vec![1, 0, 0]]).unwrap();
    let basis = basis_from_mask(&mask).unwrap();
    (Plant::new(a, b).unwrap(), mask, basis)
}

/// Every feasible certificate met by the suite, re-checked without the solver.
#[derive(Default)]
struct Recheck {
    checked: usize,
    failures: Vec<String>,
}

impl Recheck {
    fn certificate(&mut self, label: &str, plant: &Plant, basis: &StructureBasis, cert: &SynthesisCertificate) {
        self.checked += 1;
        let mut problems = Vec::new();
        match verify_gain(plant, &cert.k_gain, basis) {
            Ok(g) => {
                if !g.hurwitz {
                    problems.push(format!("abscissa {:.3e}", -g.margin));
                }
                if g.membership_residual > RECHECK_TOL * (1.0 + cert.k_gain.norm()) {
                    problems.push(format!("membership {:.3e}", g.membership_residual));
                }
            }
            Err(e) => problems.push(e.to_string()),
        }
        if !verify_lyapunov(plant, &cert.k_gain, &cert.p) {
            problems.push("Lyapunov inequality".into());
        }
        if let Some(x) = &cert.x {
            let top = dilated_max_eigenvalue(plant, &cert.p, x, &cert.r_or_y);
            if top >= 0.0 {
                problems.push(format!("dilated LMI max eigenvalue {top:.3e}"));
            }
        }
        if !problems.is_empty() {
            self.failures.push(format!("{label}: {}", problems.join(", ")));
        }
    }
}

fn pattern_matches(got: &[Vec<bool>], expected: &[[bool; 3]; 3]) -> bool {
    got.len() == 3 && got.iter().zip(expected).all(|(g, e)| g.as_slice() == e.as_slice())
}

fn criterion_1(rc: &mut Recheck) -> Outcome {
    let (plant, _, basis) = network();
    let start = Instant::now();
    let cert = synthesize_main(&plant, &basis, &SynthesisOptions::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    rc.certificate("network/main", &plant, &basis, &cert);
    let g = verify_gain(&plant, &cert.k_gain, &basis).map_err(|e| e.to_string())?;
    ensure(g.membership_residual <= 1e-7, format!("membership residual {:.3e}", g.membership_residual))?;
    ensure(cert.k_gain[(0, 1)] == 0.0 && cert.k_gain[(1, 0)] == 0.0, "forced zeros not exact")?;
    ensure(g.margin >= 1e-6, format!("margin {:.3e}", g.margin))?;
    ensure(elapsed < Duration::from_secs(5), format!("took {elapsed:?}"))?;
    let reference = from_rows(&[vec![-0.4484, 0.0, -0.3851], vec![0.0, -0.9, 0.0905]]).unwrap();
    let pg = verify_gain(&plant, &reference, &basis).map_err(|e| e.to_string())?;
    ensure(pg.passed() && pg.margin > 0.0, format!("reference gain margin {:.3e}", pg.margin))?;
    Ok(format!(
        "margin {:.3e}, residual {:.1e}, {:.2}s; reference gain margin {:.3e}",
        g.margin,
        g.membership_residual,
        elapsed.as_secs_f64(),
        pg.margin
    ))
}

fn criterion_2() -> Outcome {
    let (_, _, basis) = network();
    let desc = compute_structure_set(&basis, 1e-9).map_err(|e| e.to_string())?;
    let expected = [[true, false, true], [false, true, true], [false, false, true]];
    ensure(desc.dim() == 5, format!("hull dimension {}", desc.dim()))?;
    let got = desc.free_pattern(CLASSIFY_TOL);
    ensure(pattern_matches(&got, &expected), format!("pattern {got:?}"))?;
    Ok("free (1,1),(1,3),(2,2),(2,3),(3,3); dimension 5".into())
}

fn criterion_3() -> Outcome {
    let (plant, part, _) = network();
    let modes = [
        GammaMode::Fixed(0.1),
        GammaMode::Fixed(1.0),
        GammaMode::Fixed(10.0),
        GammaMode::Free { upper: 1e6 },
    ];
    for gamma in modes {
        let opts = SynthesisOptions { gamma, ..Default::default() };
        match synthesize_blanchini(&plant, &part, &opts) {
            Err(SynthesisError::Infeasible(_)) => {}
            Err(e) => return Err(format!("{gamma:?}: {e}")),
            Ok(_) => return Err(format!("{gamma:?}: unexpectedly feasible")),
        }
    }
    // det(He(AW) − 2γBBᵀ) against the closed form for diagonal W ≻ 0
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let bbt = plant.b() * plant.b().transpose();
    for _ in 0..100 {
        let w: Vec<f64> = (0..3).map(|_| rng.random_range(0.01..10.0)).collect();
        let gamma = rng.random_range(0.01..10.0);
        let aw = plant.a() * Mat::from_diagonal(&Vector::from_vec(w.clone()));
        let g = &aw + aw.transpose() - &bbt * (2.0 * gamma);
        let oracle = 4.0 * gamma * gamma * w[1] / 5.0;
        let det = g.determinant();
        ensure(oracle > 0.0, "closed form not positive")?;
        ensure(
            (det - oracle).abs() <= 1e-12 * (1.0 + oracle.abs()),
            format!("det {det:.6e} vs closed form {oracle:.6e}"),
        )?;
    }
    Ok("infeasible for γ ∈ {0.1, 1, 10, free}; determinant identity on 100 samples".into())
}

fn criterion_4(rc: &mut Recheck) -> Outcome {
    let (plant, mask, basis) = overlapping();
    let start = Instant::now();
    let cert = synthesize_main(&plant, &basis, &SynthesisOptions::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    rc.certificate("overlapping/main", &plant, &basis, &cert);
    let g = verify_gain(&plant, &cert.k_gain, &basis).map_err(|e| e.to_string())?;
    ensure(mask.admits(&cert.k_gain), "forced zeros not exact")?;
    ensure(g.membership_residual <= 1e-7, format!("membership residual {:.3e}", g.membership_residual))?;
    ensure(g.margin >= 1e-6, format!("margin {:.3e}", g.margin))?;
    ensure(elapsed < Duration::from_secs(5), format!("took {elapsed:?}"))?;
    let reference = from_rows(&[vec![-3.831, -5.744, 0.0], vec![0.0, -5.059, -8.922]]).unwrap();
    let pg = verify_gain(&plant, &reference, &basis).map_err(|e| e.to_string())?;
    ensure(pg.passed() && pg.margin > 0.0, format!("reference gain margin {:.3e}", pg.margin))?;
    let diag = ZeroPatternMask::diagonal(3).unwrap();
    match synthesize_prop1(&plant, &basis, &diag, &basis, &SynthesisOptions::default()) {
        Err(SynthesisError::Infeasible(_)) => {}
        Err(e) => return Err(format!("diagonal-P baseline: {e}")),
        Ok(c) => {
            rc.certificate("overlapping/prop1", &plant, &basis, &c);
            return Err("diagonal-P baseline unexpectedly feasible".into());
        }
    }
    Ok(format!(
        "margin {:.3e}; reference gain margin {:.3e}; diagonal-P baseline infeasible",
        g.margin, pg.margin
    ))
}

fn criterion_5() -> Outcome {
    let (_, _, basis) = overlapping();
    let desc = compute_structure_set(&basis, 1e-9).map_err(|e| e.to_string())?;
    let expected = [[true, true, false], [false, true, false], [false, true, true]];
    ensure(desc.dim() == 5, format!("hull dimension {}", desc.dim()))?;
    let got = desc.free_pattern(CLASSIFY_TOL);
    ensure(pattern_matches(&got, &expected), format!("pattern {got:?}"))?;
    Ok("pattern [[q11,q12,0],[0,q22,0],[0,q32,q33]]; dimension 5".into())
}

/// Random plant and gain with `A + BK` equal to `a_cl`.
fn plant_for<R: Rng>(rng: &mut R, a_cl: &Mat) -> (Plant, Mat) {
    let n = a_cl.nrows();
    let m = rng.random_range(1..=n.min(3));
    let b = gaussian(rng, n, m);
    let k = gaussian(rng, m, n);
    let a = a_cl - &b * &k;
    (Plant::new(a, b).unwrap(), k)
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let opts = SynthesisOptions::default();
    let start = Instant::now();
    let mut failures = Vec::new();
    for case in 0..50 {
        let n = rng.random_range(1..=6);
        let abscissa = -rng.random_range(0.05..2.0);
        let a_cl = with_abscissa(&mut rng, n, abscissa).unwrap();
        let (plant, k) = plant_for(&mut rng, &a_cl);
        let p = solve_lyapunov(&a_cl, &Mat::identity(n, n)).unwrap();
        let p = SymMat::new(p).unwrap();
        match dilated_feasibility(&plant, &k, &p, &opts) {
            Ok(r) if r.status == SolveStatus::Feasible => {}
            Ok(r) => failures.push(format!("hurwitz #{case} (n={n}): {}", r.status.label())),
            Err(e) => failures.push(format!("hurwitz #{case} (n={n}): {e}")),
        }
    }
    for case in 0..20 {
        let n = rng.random_range(1..=6);
        let abscissa = rng.random_range(0.05..2.0);
        let a_cl = with_abscissa(&mut rng, n, abscissa).unwrap();
        let (plant, k) = plant_for(&mut rng, &a_cl);
        // no P ≻ 0 certifies an unstable loop, so any positive definite P will do
        let p = posdef(&mut rng, n, 0.5);
        match dilated_feasibility(&plant, &k, &p, &opts) {
            Ok(r) if r.status == SolveStatus::Infeasible => {}
            Ok(r) => failures.push(format!("unstable #{case} (n={n}): {}", r.status.label())),
            Err(SynthesisError::Infeasible(_)) => {}
            Err(e) => failures.push(format!("unstable #{case} (n={n}): {e}")),
        }
    }
    let elapsed = start.elapsed();
    ensure(failures.is_empty(), format!("{} failures: {}", failures.len(), failures.join("; ")))?;
    ensure(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("50/50 feasible, 20/20 infeasible, {:.1}s", elapsed.as_secs_f64()))
}

fn criterion_7() -> Outcome {
    const TRIALS: usize = 40;
    const MIN_TESTED: usize = 30;
    let mut hulls = vec![
        ("network".to_string(), compute_structure_set(&network().2, 1e-9).map_err(|e| e.to_string())?),
        ("overlapping".to_string(), compute_structure_set(&overlapping().2, 1e-9).map_err(|e| e.to_string())?),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    while hulls.len() < 22 {
        let n = rng.random_range(2..=6);
        let m = rng.random_range(1..=n);
        let (plant, part) = network_plant(&mut rng, n, m, 0.4).unwrap();
        let basis = basis_from_mask(&decentralized_mask(plant.b(), &part).unwrap()).unwrap();
        let desc = compute_structure_set(&basis, 1e-9).map_err(|e| e.to_string())?;
        hulls.push((format!("random n={n} {:?}/{:?}", part.state_dims(), part.input_dims()), desc));
    }
    let mut worst: f64 = 0.0;
    for (i, (label, desc)) in hulls.iter().enumerate() {
        let r = check_inversion_closure(desc, TRIALS, 1e-8, 100 + i as u64).map_err(|e| e.to_string())?;
        ensure(r.ok(), format!("{label}: {} of {} inverses left the hull, worst {:.3e}", r.failed, r.tested, r.worst_relative_residual))?;
        ensure(r.tested >= MIN_TESTED, format!("{label}: only {} usable samples", r.tested))?;
        worst = worst.max(r.worst_relative_residual);
    }
    Ok(format!("{} hulls, worst relative residual {worst:.2e}", hulls.len()))
}

fn criterion_8(rc: &mut Recheck) -> Outcome {
    const WANTED: usize = 50;
    const MAX_PLANTS: usize = 400;
    let opts = SynthesisOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut sampled, mut baseline_ok, mut counterexamples) = (0, 0, Vec::new());
    while baseline_ok < WANTED && sampled < MAX_PLANTS {
        sampled += 1;
        let n = rng.random_range(2..=8);
        let m = rng.random_range(1..=n.min(4));
        let (plant, part) = network_plant(&mut rng, n, m, 0.5).unwrap();
        let basis = basis_from_mask(&decentralized_mask(plant.b(), &part).unwrap()).unwrap();
        let p_mask = ZeroPatternMask::block_diagonal(part.state_dims()).unwrap();
        let Ok(base) = synthesize_prop1(&plant, &basis, &p_mask, &basis, &opts) else { continue };
        baseline_ok += 1;
        rc.certificate(&format!("ordering #{sampled}/prop1"), &plant, &basis, &base);
        match synthesize_main(&plant, &basis, &opts) {
            Ok(cert) => rc.certificate(&format!("ordering #{sampled}/main"), &plant, &basis, &cert),
            Err(e) => counterexamples.push(format!("#{sampled} (n={n}): {e}")),
        }
    }
    ensure(
        counterexamples.is_empty(),
        format!("{} counterexamples: {}", counterexamples.len(), counterexamples.join("; ")),
    )?;
    ensure(baseline_ok == WANTED, format!("only {baseline_ok} baseline successes in {sampled} plants"))?;
    Ok(format!("{baseline_ok} plants with a baseline gain (of {sampled} sampled), main feasible on all"))
}

fn criterion_9(rc: &Recheck) -> Outcome {
    ensure(rc.checked > 0, "no certificates were produced")?;
    ensure(
        rc.failures.is_empty(),
        format!("{} of {} failed: {}", rc.failures.len(), rc.checked, rc.failures.join("; ")),
    )?;
    Ok(format!("{} certificates re-checked", rc.checked))
}

fn problems_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems")
}

fn run_cli(args: &[&std::ffi::OsStr]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_structlmi")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn criterion_10() -> Outcome {
    let status = |r: &ReportFile, m: &str| r.result(m).map(|x| x.status.clone()).unwrap_or_default();

    let ex1 = problems_dir().join("example1.json");
    let (code, stdout) = run_cli(&["synthesize".as_ref(), ex1.as_os_str(), "--method".as_ref(), "all".as_ref()]);
    ensure(code == 0, format!("example1 exit {code}"))?;
    let r1: ReportFile = serde_json::from_str(&stdout).map_err(|e| format!("example1 report: {e}"))?;
    ensure(r1.result("main").is_some_and(|r| r.succeeded()), format!("example1 main {}", status(&r1, "main")))?;
    ensure(status(&r1, "blanchini") == "infeasible", format!("example1 blanchini {}", status(&r1, "blanchini")))?;

    let ex2 = problems_dir().join("example2.json");
    let (code, stdout) = run_cli(&["synthesize".as_ref(), ex2.as_os_str(), "--method".as_ref(), "all".as_ref()]);
    ensure(code == 0, format!("example2 exit {code}"))?;
    let r2: ReportFile = serde_json::from_str(&stdout).map_err(|e| format!("example2 report: {e}"))?;
    ensure(r2.result("main").is_some_and(|r| r.succeeded()), format!("example2 main {}", status(&r2, "main")))?;
    ensure(status(&r2, "prop1") == "infeasible", format!("example2 prop1 {}", status(&r2, "prop1")))?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let unstabilizable = dir.path().join("unstabilizable.json");
    std::fs::write(
        &unstabilizable,
        r#"{"schema_version": 1, "name": "u", "a": [[1.0, 0.0], [0.0, -1.0]], "b": [[0.0], [1.0]],
            "structure": {"type": "mask", "mask": [[0, 0]]}}"#,
    )
    .map_err(|e| e.to_string())?;
    let (code, _) = run_cli(&["synthesize".as_ref(), unstabilizable.as_os_str()]);
    ensure(code == 2, format!("unstabilizable plant exit {code}, expected 2"))?;

    let malformed = dir.path().join("malformed.json");
    std::fs::write(&malformed, r#"{"schema_version": 1, "name": "m", "a": [[1.0, 0.0]], "b": [[1.0]]}"#)
        .map_err(|e| e.to_string())?;
    let (code, _) = run_cli(&["synthesize".as_ref(), malformed.as_os_str()]);
    ensure(code == 1, format!("malformed file exit {code}, expected 1"))?;
    Ok("example statuses match; exit codes 0/2/1 as specified".into())
}

fn main() {
    // criterion 9 collects the certificates produced by the others, so it runs last
    let mut rc = Recheck::default();
    let mut results: Vec<(usize, Outcome)> = vec![
        (1, criterion_1(&mut rc)),
        (2, criterion_2()),
        (3, criterion_3()),
        (4, criterion_4(&mut rc)),
        (5, criterion_5()),
        (6, criterion_6()),
        (7, criterion_7()),
        (8, criterion_8(&mut rc)),
    ];
    results.push((9, criterion_9(&rc)));
    results.push((10, criterion_10()));
    results.sort_by_key(|(i, _)| *i);

    let mut failed = 0;
    for (i, r) in &results {
        match r {
            Ok(detail) => println!("criterion {i:>2}: PASS  {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {i:>2}: FAIL  {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
