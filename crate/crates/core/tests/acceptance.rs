//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Runs with a plain `main` so the lines are printed under `cargo test`
//! without `--nocapture`.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use jointmeas::cli::{generate_examples, run_path, RunOptions, EXPECTATIONS_FILE};
use jointmeas::compat::{common_dilation_from_joint, proposition_condition_check, dilation_commutation_defect, joint_from_commuting_dilations};
use jointmeas::dilation::{compress, effect_block_dilation, naimark_dilate};
use jointmeas::phasespace::{commuting_multiplication_dilations, covariant_povm, marginal_kernels, PhaseSpaceModel};
use jointmeas::povm::{is_pvm, Effect, max_commutation_defect, validate_povm};
use jointmeas::prelude::*;
use jointmeas::smearing::{apply_kernel, same_generated_algebra, sharp_version, trivial_smearing_pair};

type Outcome = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn cfg() -> Config {
    Config::default()
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|k| k.to_string()).collect()
}

fn within(elapsed: Duration, limit_s: f64) -> std::result::Result<(), String> {
    if elapsed.as_secs_f64() < limit_s {
        Ok(())
    } else {
        Err(format!("took {:.1} s, limit {limit_s} s", elapsed.as_secs_f64()))
    }
}

fn naimark_reconstruction() -> Outcome {
    let start = Instant::now();
    let mut s = Sampler::new(1);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let d = s.index(1, 5);
        let n = s.index(1, 5);
        let f = s.povm(d, n, &cfg()).map_err(|e| e.to_string())?;
        let dil = naimark_dilate(&f, &cfg()).map_err(|e| e.to_string())?;
        for i in 0..n {
            let back = compress(&dil, dil.block_pvm().effect(i)).map_err(|e| e.to_string())?;
            worst = worst.max(back.matrix().max_diff(f.effect(i).matrix()));
        }
    }
    within(start.elapsed(), 10.0)?;
    ensure!(worst < 1e-10, "compression defect {worst:e}");
    Ok(format!("max |V^dagger E+_i V - F_i| = {worst:.2e} over 200 POVMs in {:.2} s", start.elapsed().as_secs_f64()))
}

fn block_dilation_projectivity() -> Outcome {
    let mut s = Sampler::new(2);
    let (mut idem, mut corner) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let d = s.index(1, 6);
        let a = s.effect(d, &cfg());
        let dil = effect_block_dilation(&a, &cfg()).map_err(|e| e.to_string())?;
        let e = dil.block_pvm().effect(0).matrix();
        let sq = e.matmul(e).map_err(|e| e.to_string())?;
        idem = idem.max(sq.max_diff(e));
        corner = corner.max(e.block(0, 0, d, d).max_diff(a.matrix()));
    }
    ensure!(idem < 1e-9, "idempotency defect {idem:e}");
    ensure!(corner < 1e-10, "top-left compression defect {corner:e}");
    Ok(format!("|(E+)^2 - E+| = {idem:.2e}, corner defect {corner:.2e} over 200 effects"))
}

fn cns_round_trip() -> Outcome {
    let mut s = Sampler::new(3);
    let (mut comm, mut marg) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let d = s.index(1, 3);
        let flat = s.povm(d, 9, &cfg()).map_err(|e| e.to_string())?;
        let j = JointPovm::new(labels(3), labels(3), flat.effects().cloned().collect(), &cfg()).map_err(|e| e.to_string())?;
        let cd = common_dilation_from_joint(&j, &cfg()).map_err(|e| e.to_string())?;
        comm = comm.max(dilation_commutation_defect(&cd.first, &cd.second).map_err(|e| e.to_string())?);
        let back = joint_from_commuting_dilations(&cd.first, &cd.second, &cfg()).map_err(|e| e.to_string())?;
        let (f1, f2) = j.marginals(&cfg()).map_err(|e| e.to_string())?;
        let (g1, g2) = back.marginals(&cfg()).map_err(|e| e.to_string())?;
        marg = marg.max(g1.max_effect_diff(&f1).unwrap()).max(g2.max_effect_diff(&f2).unwrap());
    }
    ensure!(comm < 1e-10, "block PVM commutation defect {comm:e}");
    ensure!(marg < 1e-8, "re-assembled marginal defect {marg:e}");
    Ok(format!("commutation defect {comm:.2e}, marginal defect {marg:.2e} over 100 joints"))
}

/// Max over `(g0, g)` of the smallest eigenvalue among the four entries of
/// `G = g0 1 + g.sigma` and its complements. Every entry is `c 1 + v.sigma`,
/// whose smallest eigenvalue is `c - |v|`.
fn oracle_margin(a: f64) -> f64 {
    let h = a / 2.0;
    let margin = |p: [f64; 4]| -> f64 {
        let [g0, gx, gy, gz] = p;
        let norm = |x: f64, y: f64, z: f64| (x * x + y * y + z * z).sqrt();
        let e00 = g0 - norm(gx, gy, gz);
        let e01 = 0.5 - g0 - norm(h - gx, -gy, -gz);
        let e10 = 0.5 - g0 - norm(-gx, -gy, h - gz);
        let e11 = g0 - norm(gx - h, gy, gz - h);
        e00.min(e01).min(e10).min(e11)
    };
    let steps = 16usize;
    let mut lo = [0.0, -0.5, -0.5, -0.5];
    let mut hi = [0.5, 0.5, 0.5, 0.5];
    let mut best = ([0.0; 4], f64::NEG_INFINITY);
    for _ in 0..40 {
        let axis = |k: usize, t: usize| lo[k] + (hi[k] - lo[k]) * t as f64 / steps as f64;
        for i in 0..=steps {
            for j in 0..=steps {
                for k in 0..=steps {
                    for l in 0..=steps {
                        let p = [axis(0, i), axis(1, j), axis(2, k), axis(3, l)];
                        let m = margin(p);
                        if m > best.1 {
                            best = (p, m);
                        }
                    }
                }
            }
        }
        for k in 0..4 {
            let w = (hi[k] - lo[k]) / 4.0;
            lo[k] = best.0[k] - w;
            hi[k] = best.0[k] + w;
        }
    }
    best.1
}

fn feasibility_vs_exhaustive_search() -> Outcome {
    let start = Instant::now();
    let grid: Vec<f64> = (0..=20).map(|k| 0.6 + 0.01 * k as f64).collect();
    let unbiased = |a: f64, s: ComplexMatrix| -> std::result::Result<DiscretePovm, String> {
        let m = (&ComplexMatrix::identity(2) + &s.scale_real(a)).scale_real(0.5);
        let e = Effect::from_matrix(m, &cfg()).map_err(|e| e.to_string())?;
        Ok(DiscretePovm::dichotomic(&e))
    };
    let mut library_boundary = None;
    let mut oracle_boundary = None;
    for &a in &grid {
        let v = jm_feasibility(&unbiased(a, pauli::x())?, &unbiased(a, pauli::z())?, &cfg()).map_err(|e| e.to_string())?;
        ensure!(v.decision != Decision::Undecided, "undecided at a = {a}");
        if v.is_incompatible() && library_boundary.is_none() {
            library_boundary = Some(a);
        }
        if oracle_margin(a) < 0.0 && oracle_boundary.is_none() {
            oracle_boundary = Some(a);
        }
    }
    within(start.elapsed(), 120.0)?;
    let (Some(lib), Some(ora)) = (library_boundary, oracle_boundary) else {
        return Err(format!("boundary not crossed: library {library_boundary:?}, oracle {oracle_boundary:?}"));
    };
    ensure!((lib - ora).abs() <= 0.01 + 1e-9, "library boundary {lib}, oracle boundary {ora}");
    ensure!((ora - 0.707).abs() <= 0.011, "oracle boundary {ora} is not near 0.707");
    Ok(format!(
        "first incompatible a: library {lib:.2}, oracle {ora:.2} ({:.1} s)",
        start.elapsed().as_secs_f64()
    ))
}

fn sharp_projective_incompatibility() -> Outcome {
    let pvm = |m: ComplexMatrix| spectral_pvm(&HermitianOperator::new(m, &cfg()).unwrap(), &cfg()).unwrap().0;
    let v = jm_feasibility(&pvm(pauli::z()), &pvm(pauli::x()), &cfg()).map_err(|e| e.to_string())?;
    let gap = v.infeasibility_gap.unwrap_or(0.0);
    ensure!(v.is_incompatible() && gap > 1e-5, "sigma_z/sigma_x: {:?}, gap {gap:e}", v.decision);

    let mut s = Sampler::new(5);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let d = s.index(2, 5);
        let u = s.unitary(d);
        let n1 = s.index(1, d);
        let mut coarse = |n: usize| -> std::result::Result<DiscretePovm, String> {
            let owner: Vec<usize> = (0..d).map(|k| if k < n { k } else { s.index(0, n - 1) }).collect();
            let ops = (0..n)
                .map(|b| {
                    let mut p = ComplexMatrix::zeros(d, d);
                    for k in (0..d).filter(|&k| owner[k] == b) {
                        p.add_scaled(&ComplexMatrix::outer(&u.column(k)), 1.0);
                    }
                    HermitianOperator::hermitian_part(p)
                })
                .collect();
            DiscretePovm::from_operators(ops, &cfg()).map_err(|e| e.to_string())
        };
        let f1 = coarse(n1)?;
        let f2 = coarse(d)?;
        ensure!(is_pvm(&f1, &cfg()).is_pvm && is_pvm(&f2, &cfg()).is_pvm, "sampled family is not a PVM");
        let v = jm_feasibility(&f1, &f2, &cfg()).map_err(|e| e.to_string())?;
        ensure!(v.is_compatible(), "commuting PVM pair declared {:?}", v.decision);
        let w = v.witness.as_ref().unwrap();
        for i in 0..f1.len() {
            for j in 0..f2.len() {
                let prod = f1.effect(i).matrix().matmul(f2.effect(j).matrix()).unwrap();
                worst = worst.max(w.get(i, j).matrix().max_diff(&prod));
            }
        }
    }
    ensure!(worst < 1e-10, "product witness defect {worst:e}");
    Ok(format!("sigma_z/sigma_x gap {gap:.3e}; product witness defect {worst:.2e} over 50 commuting pairs"))
}

fn trivial_smearing_universality() -> Outcome {
    let mut s = Sampler::new(6);
    let mut worst = 0.0f64;
    let mut count = 0;
    for _ in 0..50 {
        let d = s.index(1, 4);
        let (n1, n2) = (s.index(1, 4), s.index(1, 4));
        let f1 = s.povm(d, n1, &cfg()).map_err(|e| e.to_string())?;
        let f2 = s.povm(d, n2, &cfg()).map_err(|e| e.to_string())?;
        let nu1 = s.probability_vector(n1);
        let nu2 = s.probability_vector(n2);
        for lambda in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let ts = trivial_smearing_pair(&f1, &f2, lambda, &nu1, &nu2, &cfg()).map_err(|e| e.to_string())?;
            let flat: Vec<(String, HermitianOperator)> =
                ts.joint.grid().iter().enumerate().map(|(k, g)| (k.to_string(), g.clone())).collect();
            let report = validate_povm(&flat, &cfg()).map_err(|e| e.to_string())?;
            ensure!(report.ok, "joint fails validation at lambda = {lambda}");
            let (m1, m2) = ts.joint.marginals(&cfg()).map_err(|e| e.to_string())?;
            for i in 0..n1 {
                let want = f1.effect(i).scale(lambda).add(&HermitianOperator::identity(d).scale((1.0 - lambda) * nu1[i]));
                worst = worst.max(m1.effect(i).matrix().max_diff(want.matrix()));
                worst = worst.max(ts.first.effect(i).matrix().max_diff(want.matrix()));
            }
            for j in 0..n2 {
                let want = f2.effect(j).scale(1.0 - lambda).add(&HermitianOperator::identity(d).scale(lambda * nu2[j]));
                worst = worst.max(m2.effect(j).matrix().max_diff(want.matrix()));
                worst = worst.max(ts.second.effect(j).matrix().max_diff(want.matrix()));
            }
            count += 1;
        }
    }
    ensure!(worst < 1e-12, "marginal defect {worst:e}");
    Ok(format!("{count} joints valid, marginal defect {worst:.2e}"))
}

fn sharp_version_round_trip() -> Outcome {
    let mut s = Sampler::new(7);
    let (mut kernel_defect, mut pvm_defect) = (0.0f64, 0.0f64);
    let mut done = 0;
    while done < 100 {
        let d = s.index(2, 5);
        let n = s.index(2, d);
        let cols = s.index(2, 5);
        let mu = s.kernel(n, cols);
        if !mu.separates_points(1e-3) {
            continue;
        }
        let e = s.pvm(d, n, &cfg()).map_err(|e| e.to_string())?;
        let f = apply_kernel(&mu, &e).map_err(|e| e.to_string())?;
        let sv = sharp_version(&f, &cfg()).map_err(|e| e.to_string())?;
        ensure!(sv.pvm().len() == n, "recovered {} sharp outcomes, expected {n}", sv.pvm().len());
        let mut used = vec![false; n];
        for k in 0..n {
            let (i, diff) = (0..n)
                .filter(|&i| !used[i])
                .map(|i| (i, sv.pvm().effect(k).matrix().max_diff(e.effect(i).matrix())))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            used[i] = true;
            pvm_defect = pvm_defect.max(diff);
            let row_diff = sv.kernel().row(k).iter().zip(mu.row(i)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            kernel_defect = kernel_defect.max(row_diff);
        }
        let alg = same_generated_algebra(&f, &sv.operator(), &cfg()).map_err(|e| e.to_string())?;
        ensure!(alg.same, "same_generated_algebra is false (defect {:e})", alg.containment_defect);
        done += 1;
    }
    ensure!(pvm_defect < 1e-8, "PVM defect {pvm_defect:e}");
    ensure!(kernel_defect < 1e-8, "kernel defect {kernel_defect:e}");
    Ok(format!("PVM defect {pvm_defect:.2e}, kernel defect {kernel_defect:.2e} over 100 kernels"))
}

fn proposition_sufficiency() -> Outcome {
    let mut s = Sampler::new(8);
    let (mut holds, mut fails_but_compatible) = (0, 0);
    for t in 0..500 {
        let d = s.index(1, 3);
        let (a1, a2) = match t % 4 {
            // generic pair
            0 => (s.effect(d, &cfg()), s.effect(d, &cfg())),
            // a repeated effect always satisfies the condition
            1 => {
                let a = s.effect(d, &cfg());
                (a.clone(), a)
            }
            // commuting pair: compatible, condition fails generically
            2 => {
                let u = s.unitary(d);
                let diag = |s: &mut Sampler| {
                    let vals: Vec<f64> = (0..d).map(|_| s.uniform(0.0, 1.0)).collect();
                    let m = u.matmul(&ComplexMatrix::diag_real(&vals)).unwrap().matmul(&u.adjoint()).unwrap();
                    Effect::new(HermitianOperator::hermitian_part(m), &cfg()).unwrap()
                };
                (diag(&mut s), diag(&mut s))
            }
            // scaled-down generic pair
            _ => {
                let x = s.effect(d, &cfg()).operator().scale(0.5);
                let y = s.effect(d, &cfg()).operator().scale(0.5);
                (Effect::new(x, &cfg()).unwrap(), Effect::new(y, &cfg()).unwrap())
            }
        };
        let prop = proposition_condition_check(&a1, &a2, &cfg()).map_err(|e| e.to_string())?;
        let v = jm_feasibility(&DiscretePovm::dichotomic(&a1), &DiscretePovm::dichotomic(&a2), &cfg())
            .map_err(|e| e.to_string())?;
        if prop.holds {
            holds += 1;
            ensure!(v.is_compatible(), "condition holds but verdict is {:?} (pair {t})", v.decision);
        } else if v.is_compatible() {
            fails_but_compatible += 1;
        }
    }
    ensure!(holds > 0, "condition never held");
    ensure!(fails_but_compatible > 0, "no compatible pair violating the condition");
    Ok(format!("{holds} pairs satisfy the condition, all compatible; {fails_but_compatible} compatible pairs violate it"))
}

fn phase_space_example() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    for d in [8usize, 16] {
        let model = PhaseSpaceModel::gaussian(d, 1.0, &cfg()).map_err(|e| e.to_string())?;
        let cov = covariant_povm(&model, &cfg()).map_err(|e| e.to_string())?;
        let mk = marginal_kernels(&cov, &cfg()).map_err(|e| e.to_string())?;
        let conv = mk.position_defect.max(mk.momentum_defect);
        ensure!(conv < 1e-9, "d = {d}: convolution defect {conv:e}");
        let (fq, fp) = cov.marginals(&cfg()).map_err(|e| e.to_string())?;
        let comm = max_commutation_defect(&fq, &fp).map_err(|e| e.to_string())?;
        ensure!(comm > 0.01, "d = {d}: marginals nearly commute ({comm:e})");
        let v = jm_feasibility(&fq, &fp, &cfg()).map_err(|e| e.to_string())?;
        ensure!(v.is_compatible(), "d = {d}: verdict {:?}", v.decision);
        let md = commuting_multiplication_dilations(&cov, &cfg()).map_err(|e| e.to_string())?;
        let chain = md.position_chain_defect.max(md.momentum_chain_defect).max(md.joint_defect);
        ensure!(chain < 1e-9, "d = {d}: compression chain defect {chain:e}");
        let shifts: Vec<(i64, i64)> = (0..d as i64).flat_map(|a| [(a, 0), (0, a), (a, d as i64 - 1 - a)]).collect();
        let covd = cov.covariance_defect(&shifts);
        ensure!(covd < 1e-9, "d = {d}: covariance defect {covd:e}");
        lines.push(format!("d={d}: conv {conv:.1e}, [FQ,FP] {comm:.4}, chain {chain:.1e}, cov {covd:.1e}"));
    }
    within(start.elapsed(), 60.0)?;
    Ok(format!("{} ({:.1} s)", lines.join("; "), start.elapsed().as_secs_f64()))
}

fn corpus_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let files = generate_examples(dir.path()).map_err(|e| e.to_string())?;
    let scenarios: Vec<_> = files
        .into_iter()
        .filter(|p| p.file_name().unwrap() != EXPECTATIONS_FILE)
        .collect();
    let run_all = || -> Vec<String> {
        scenarios
            .iter()
            .map(|p| run_path(p, &RunOptions::default()).report.map(|r| r.to_json()).unwrap_or_default())
            .collect()
    };
    let first = run_all();
    let second = run_all();
    for (p, (a, b)) in scenarios.iter().zip(first.iter().zip(&second)) {
        ensure!(!a.is_empty(), "{} produced no report", p.display());
        ensure!(a == b, "{} differs between runs", p.display());
    }
    Ok(format!("{} reports byte-identical across two runs", scenarios.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("naimark reconstruction", naimark_reconstruction),
        ("block-dilation projectivity", block_dilation_projectivity),
        ("CNS round-trip", cns_round_trip),
        ("feasibility vs exhaustive search", feasibility_vs_exhaustive_search),
        ("sharp projective incompatibility", sharp_projective_incompatibility),
        ("trivial smearing universality", trivial_smearing_universality),
        ("sharp-version round-trip", sharp_version_round_trip),
        ("proposition sufficiency", proposition_sufficiency),
        ("phase-space example", phase_space_example),
        ("corpus determinism", corpus_determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
