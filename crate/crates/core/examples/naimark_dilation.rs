// Canonical Naimark dilation of the trine POVM on a qubit.

use std::f64::consts::TAU;

use jointmeas::prelude::*;

fn main() {
    let cfg = Config::default();
    let trine: Vec<HermitianOperator> = (0..3)
        .map(|k| {
            let t = TAU * k as f64 / 3.0;
            HermitianOperator::projector(&[c(t.cos(), 0.0), c(t.sin(), 0.0)]).scale(2.0 / 3.0)
        })
        .collect();
    let f = DiscretePovm::from_operators(trine, &cfg).unwrap();
    let dil = naimark_dilate(&f, &cfg).unwrap();
    println!("C^{} -> C^{} ({} outcomes)", dil.base_dim(), dil.extended_dim(), f.len());

    let r = dil.report(&cfg);
    println!("isometry defect     {:.2e}", r.isometry_defect);
    println!("idempotency defect  {:.2e}", r.pvm_idempotency_defect);
    println!("orthogonality       {:.2e}", r.pvm_orthogonality_defect);
    println!("compression defect  {:.2e}", r.compression_defect);

    // V^dagger E+_i V gives back each effect.
    for (i, e) in dil.block_pvm().effects().enumerate() {
        let back = compress(&dil, e).unwrap();
        println!("outcome {i}: |V^+ E V - F| = {:.2e}", back.matrix().max_diff(f.effect(i).matrix()));
    }
}
