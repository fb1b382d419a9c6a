//! The canonical scenario corpus written by `jointmeas examples <dir>`.
//!
//! Every scenario is built from fixed numbers or from a [`Sampler`] with a
//! fixed seed, so regenerating the corpus gives byte-identical files.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::scenario::{Operand, Requirement, Scenario, Task};
use super::ExitStatus;
use crate::config::Config;
use crate::linalg::{c, pauli, ComplexMatrix, HermitianOperator};
use crate::povm::{spectral_pvm, DiscretePovm};
use crate::random::Sampler;
use crate::smearing::apply_kernel;

/// File listing every scenario with its expected exit code.
pub const EXPECTATIONS_FILE: &str = "expected.json";

/// Seed used to draw the random instances in the corpus.
const CORPUS_SEED: u64 = 42;

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub file: String,
    pub scenario: Scenario,
    pub expected: ExitStatus,
}

#[derive(Serialize)]
struct Expectation<'a> {
    file: &'a str,
    task: Task,
    expected_exit: i32,
    expected_status: ExitStatus,
}

fn entry(file: &str, scenario: Scenario, expected: ExitStatus) -> CorpusEntry {
    CorpusEntry {
        file: format!("{file}.json"),
        scenario,
        expected,
    }
}

fn herm(m: ComplexMatrix) -> HermitianOperator {
    HermitianOperator::new(m, &Config::default()).expect("Hermitian by construction")
}

fn projectors(m: ComplexMatrix) -> Operand {
    let cfg = Config::default();
    Operand::from_povm(&spectral_pvm(&herm(m), &cfg).expect("diagonalizable").0)
}

/// `(1 + a s) / 2` for a Pauli matrix `s`.
fn unbiased(a: f64, s: ComplexMatrix) -> Operand {
    Operand::from_effect(&herm(ComplexMatrix::identity(2)).add(&herm(s).scale(a)).scale(0.5))
}

fn projector_effect(v: [f64; 2]) -> Operand {
    Operand::from_effect(&HermitianOperator::projector(&[c(v[0], 0.0), c(v[1], 0.0)]))
}

/// `(2/3) |psi_k><psi_k|` with real states 120 degrees apart.
fn trine() -> DiscretePovm {
    let ops = (0..3)
        .map(|k| {
            let t = TAU * k as f64 / 3.0;
            HermitianOperator::projector(&[c(t.cos(), 0.0), c(t.sin(), 0.0)]).scale(2.0 / 3.0)
        })
        .collect();
    DiscretePovm::from_operators(ops, &Config::default()).expect("trine sums to one")
}

fn pair(task: Task, first: Operand, second: Operand) -> Scenario {
    Scenario::new(task).with("first", first).with("second", second)
}

/// The full corpus, in file-name order.
pub fn corpus() -> Vec<CorpusEntry> {
    use ExitStatus::*;
    let cfg = Config::default();
    let mut out = vec![
        entry(
            "pauli_zx_projectors",
            pair(Task::JmTest, projectors(pauli::z()), projectors(pauli::x()))
                .describe("sharp sigma_z and sigma_x projector PVMs: incompatible"),
            Negative,
        ),
        entry(
            "pauli_xy_projectors",
            pair(Task::JmTest, projectors(pauli::x()), projectors(pauli::y()))
                .describe("sharp sigma_x and sigma_y projector PVMs: incompatible"),
            Negative,
        ),
        entry(
            "pauli_zz_projectors",
            pair(Task::JmTest, projectors(pauli::z()), projectors(pauli::z()))
                .describe("a PVM with itself: compatible through the diagonal joint"),
            Ok,
        ),
        entry(
            "pauli_zx_effects",
            pair(Task::EffectTest, projector_effect([1.0, 0.0]), projector_effect([FRAC_1_SQRT_2, FRAC_1_SQRT_2]))
                .describe("effects |0><0| and |+><+|: incompatible, sufficient condition fails"),
            Negative,
        ),
    ];
    for (a, expected) in [(0.6, Ok), (0.68, Ok), (0.707, Ok), (0.75, Negative), (0.9, Negative)] {
        out.push(entry(
            &format!("unbiased_a{:04}", (a * 1000.0_f64).round() as u32),
            pair(Task::JmTest, unbiased(a, pauli::x()), unbiased(a, pauli::z()))
                .describe("unbiased qubit effects (1 + a sigma_x)/2 and (1 + a sigma_z)/2; compatible iff a <= 1/sqrt 2"),
            expected,
        ));
    }
    let equal = unbiased(0.8, pauli::x());
    let mut prop = pair(Task::EffectTest, equal.clone(), equal).describe("equal effects satisfy the sufficient condition");
    prop.params.require = Some(Requirement::Proposition);
    out.push(entry("proposition_equal_effects", prop, Ok));

    let t = Operand::from_povm(&trine());
    out.push(entry(
        "trine_validate",
        Scenario::new(Task::Validate).with("trine", t.clone()).describe("trine POVM on a qubit"),
        Ok,
    ));
    out.push(entry(
        "trine_dilate",
        Scenario::new(Task::Dilate).with("trine", t.clone()).describe("Naimark dilation of the trine POVM"),
        Ok,
    ));
    out.push(entry(
        "trine_sharp_version",
        Scenario::new(Task::SharpVersion)
            .with("povm", t)
            .describe("the trine is not commutative, so it has no sharp version"),
        Negative,
    ));

    for lambda in [0.0, 0.5, 1.0] {
        let mut s = pair(Task::Smear, projectors(pauli::z()), projectors(pauli::x()))
            .describe("trivial smearing of the sigma_z / sigma_x projector pair with uniform noise");
        s.params.lambda = Some(lambda);
        out.push(entry(&format!("smear_lambda_{:03}", (lambda * 100.0_f64).round() as u32), s, Ok));
    }

    for d in [2, 8, 16] {
        let mut s = Scenario::new(Task::PhasespaceDemo)
            .describe("covariant phase-space POVM with Gaussian fiducial, width 1");
        s.params.d = Some(d);
        s.params.l = Some(1.0);
        out.push(entry(&format!("phasespace_d{d:02}"), s, Ok));
    }

    let mut rng = Sampler::new(CORPUS_SEED);
    let pvm = rng.pvm(3, 3, &cfg).expect("valid PVM");
    let mu = rng.kernel(3, 4);
    let smeared = apply_kernel(&mu, &pvm).expect("kernel fits");
    out.push(entry(
        "sharp_version_smeared_pvm",
        Scenario::new(Task::SharpVersion)
            .with("povm", Operand::from_povm(&smeared))
            .describe("random 3-outcome PVM smeared by a random 3x4 kernel"),
        Ok,
    ));
    out.push(entry(
        "smear_kernel",
        Scenario::new(Task::Smear)
            .with("povm", Operand::from_povm(&pvm))
            .with("kernel", Operand::from_kernel(&mu))
            .describe("apply a Markov kernel to a PVM"),
        Ok,
    ));
    out.push(entry(
        "dilate_random_povm",
        Scenario::new(Task::Dilate)
            .with("povm", Operand::from_povm(&rng.povm(3, 4, &cfg).expect("valid POVM")))
            .with("effect", Operand::from_effect(rng.effect(3, &cfg).operator()))
            .describe("canonical dilation of a random POVM and block dilation of a random effect"),
        Ok,
    ));
    let mut rt = Scenario::new(Task::RoundtripCns).describe("random 3x3 joint on C^3: dilate, split, re-assemble");
    rt.params.d = Some(3);
    rt.params.outcomes = Some([3, 3]);
    out.push(entry("roundtrip_cns_d3", rt, Ok));

    out.sort_by(|a, b| a.file.cmp(&b.file));
    out
}

/// Writes every corpus scenario plus [`EXPECTATIONS_FILE`] into `dir`.
pub fn generate_examples(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let entries = corpus();
    let mut written = Vec::with_capacity(entries.len() + 1);
    for e in &entries {
        let path = dir.join(&e.file);
        std::fs::write(&path, e.scenario.to_json())?;
        written.push(path);
    }
    let table: Vec<Expectation> = entries
        .iter()
        .map(|e| Expectation {
            file: &e.file,
            task: e.scenario.task,
            expected_exit: e.expected.code(),
            expected_status: e.expected,
        })
        .collect();
    let text = super::json::to_pretty(&table);
    let path = dir.join(EXPECTATIONS_FILE);
    std::fs::write(&path, text)?;
    written.push(path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_covers_the_required_families() {
        let files: Vec<String> = corpus().into_iter().map(|e| e.file).collect();
        for f in [
            "pauli_zx_projectors.json",
            "unbiased_a0600.json",
            "unbiased_a0680.json",
            "unbiased_a0707.json",
            "unbiased_a0750.json",
            "unbiased_a0900.json",
            "trine_validate.json",
            "smear_lambda_000.json",
            "smear_lambda_050.json",
            "smear_lambda_100.json",
            "phasespace_d02.json",
            "phasespace_d08.json",
            "phasespace_d16.json",
        ] {
            assert!(files.iter().any(|x| x == f), "missing {f}");
        }
    }

    #[test]
    fn generation_is_byte_identical() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let fa = generate_examples(a.path()).unwrap();
        generate_examples(b.path()).unwrap();
        for p in &fa {
            let name = p.file_name().unwrap();
            assert_eq!(std::fs::read(p).unwrap(), std::fs::read(b.path().join(name)).unwrap());
        }
        for p in fa.iter().filter(|p| p.file_name().unwrap() != EXPECTATIONS_FILE) {
            let s = Scenario::from_json(&std::fs::read_to_string(p).unwrap()).unwrap();
            assert!(s.check().is_ok());
        }
    }
}
