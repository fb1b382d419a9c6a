// Recover the sharp observable and the kernel behind a commutative POVM.

use jointmeas::prelude::*;
use jointmeas::smearing::relabel_kernel;

fn main() {
    let cfg = Config::default();
    let mut rng = Sampler::new(3);
    let e = rng.pvm(4, 3, &cfg).unwrap();
    let mu = rng.kernel(3, 5);
    let f = apply_kernel(&mu, &e).unwrap();
    println!("smeared POVM: {} outcomes on C^{}", f.len(), f.space_dim());

    let sv = sharp_version(&f, &cfg).unwrap();
    println!("sharp version: {} outcomes, eigenvalue labels {:?}", sv.pvm().len(), sv.eigenvalue_labels());
    println!("reconstruction defect {:.2e}", sv.reconstruction_defect());

    // Outcome order is canonical, so match rows against the original kernel.
    let perm: Vec<usize> = (0..mu.rows())
        .map(|i| (0..mu.rows()).min_by(|&a, &b| row_gap(&mu, i, sv.kernel(), a).total_cmp(&row_gap(&mu, i, sv.kernel(), b))).unwrap())
        .collect();
    let back = relabel_kernel(&mu, &perm).unwrap();
    println!("kernel defect up to relabeling {:.2e}", back.max_diff(sv.kernel()));

    let alg = same_generated_algebra(&f, &sv.operator(), &cfg).unwrap();
    println!("same generated algebra: {} (commutant dims {} / {})", alg.same, alg.commutant_dim_povm, alg.commutant_dim_operator);
}

fn row_gap(a: &MarkovKernel, i: usize, b: &MarkovKernel, k: usize) -> f64 {
    a.row(i).iter().zip(b.row(k)).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
