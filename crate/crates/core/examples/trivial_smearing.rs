// Mixing with trivial noise makes any pair compatible, even sharp sigma_z / sigma_x.

use jointmeas::prelude::*;

fn main() {
    let cfg = Config::default();
    let z = spectral_pvm(&HermitianOperator::new(pauli::z(), &cfg).unwrap(), &cfg).unwrap().0;
    let x = spectral_pvm(&HermitianOperator::new(pauli::x(), &cfg).unwrap(), &cfg).unwrap().0;
    println!("sharp pair: {}", jm_feasibility(&z, &x, &cfg).unwrap().decision.as_str());

    let nu = [0.5, 0.5];
    for lambda in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let ts = trivial_smearing_pair(&z, &x, lambda, &nu, &nu, &cfg).unwrap();
        let defect = ts.joint.marginal_defect(&ts.first, &ts.second, &cfg).unwrap().unwrap();
        let check = jm_feasibility(&ts.first, &ts.second, &cfg).unwrap();
        println!("lambda {lambda:.2}: joint marginal defect {defect:.1e}, independent check {}", check.decision.as_str());
    }
}
