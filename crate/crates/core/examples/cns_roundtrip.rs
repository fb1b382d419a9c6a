// A joint POVM, its common dilation, and the joint re-assembled from the two
// commuting marginal dilations.

use jointmeas::prelude::*;

fn main() {
    let cfg = Config::default();
    let mut rng = Sampler::new(7);
    let f = rng.povm(3, 9, &cfg).unwrap();
    let labels = |n: usize| (0..n).map(|k| k.to_string()).collect::<Vec<_>>();
    let joint = JointPovm::new(labels(3), labels(3), f.effects().cloned().collect(), &cfg).unwrap();

    let cd = common_dilation_from_joint(&joint, &cfg).unwrap();
    let comm = max_commutation_defect(cd.first.block_pvm(), cd.second.block_pvm()).unwrap();
    println!("extended space C^{}", cd.joint.extended_dim());
    println!("max |[E1+_i, E2+_j]| = {comm:.2e}");

    let rebuilt = joint_from_commuting_dilations(&cd.first, &cd.second, &cfg).unwrap();
    let (m1, m2) = joint.marginals(&cfg).unwrap();
    println!("re-assembled marginal defect {:.2e}", rebuilt.marginal_defect(&m1, &m2, &cfg).unwrap().unwrap());
    let grid = rebuilt.grid().iter().zip(joint.grid()).map(|(a, b)| a.matrix().max_diff(b.matrix())).fold(0.0, f64::max);
    println!("re-assembled grid defect     {grid:.2e}");
}
