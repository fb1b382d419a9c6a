// Block dilation of a single effect and the sufficient condition for two effects.

use jointmeas::prelude::*;

fn unbiased(a: f64, s: ComplexMatrix, cfg: &Config) -> Effect {
    let s = HermitianOperator::new(s, cfg).unwrap();
    Effect::new(HermitianOperator::identity(2).add(&s.scale(a)).scale(0.5), cfg).unwrap()
}

fn main() {
    let cfg = Config::default();
    let a = unbiased(0.6, pauli::x(), &cfg);
    let dil = effect_block_dilation(&a, &cfg).unwrap();
    let e = dil.block_pvm().effect(0).matrix();
    println!("E+ on C^{}: |E+^2 - E+| = {:.2e}", dil.extended_dim(), (e * e).max_diff(e));
    println!("compression defect {:.2e}", dil.report(&cfg).compression_defect);

    for (name, a2) in [("same effect", a.clone()), ("rotated to sigma_z", unbiased(0.6, pauli::z(), &cfg))] {
        let r = proposition_condition_check(&a, &a2, &cfg).unwrap();
        let ec = effect_compatible(&a, &a2, &cfg).unwrap();
        println!(
            "{name:>20}: condition holds={} (commutator {:.2e}, anticommutator {:.2e}); verdict {}",
            r.holds,
            r.commutator_defect,
            r.anticommutator_defect,
            ec.verdict.decision.as_str()
        );
    }
}
