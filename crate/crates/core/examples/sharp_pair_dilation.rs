// Two non-commuting self-adjoint operators dilated to commuting ones.

use jointmeas::prelude::*;
use jointmeas::smearing::compatible_dilations_of_sharp_pair;

fn main() {
    let cfg = Config::default();
    let a1 = HermitianOperator::new(pauli::z(), &cfg).unwrap();
    let a2 = HermitianOperator::new(pauli::x(), &cfg).unwrap();
    let r = compatible_dilations_of_sharp_pair(&a1, &a2, &cfg).unwrap();
    println!("values {:?} and {:?}", r.values1, r.values2);
    println!("extended space C^{}", r.a1_plus.dim());
    println!("max |[A1+, A2+]| = {:.2e}", r.commutation_defect);
    println!("compression defect {:.2e}", r.compression_defect);
}
