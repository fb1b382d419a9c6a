// Sweep of the unbiased qubit pair (1 + a sigma_x)/2, (1 + a sigma_z)/2.
// The pair is jointly measurable exactly when a <= 1/sqrt(2).

use jointmeas::prelude::*;

fn dichotomic(a: f64, s: ComplexMatrix, cfg: &Config) -> DiscretePovm {
    let s = HermitianOperator::new(s, cfg).unwrap();
    let e = Effect::new(HermitianOperator::identity(2).add(&s.scale(a)).scale(0.5), cfg).unwrap();
    DiscretePovm::dichotomic(&e)
}

fn main() {
    let cfg = Config::default();
    println!("   a   verdict        iterations   gap");
    for k in 0..=8 {
        let a = 0.6 + 0.025 * k as f64;
        let v = jm_feasibility(&dichotomic(a, pauli::x(), &cfg), &dichotomic(a, pauli::z(), &cfg), &cfg).unwrap();
        let gap = v.infeasibility_gap.map_or("-".to_string(), |g| format!("{g:.3e}"));
        println!("{a:.3}   {:<12}   {:>10}   {gap}", v.decision.as_str(), v.iterations);
    }
    println!("boundary 1/sqrt(2) = {:.4}", std::f64::consts::FRAC_1_SQRT_2);

    let v = jm_feasibility(&dichotomic(0.65, pauli::x(), &cfg), &dichotomic(0.65, pauli::z(), &cfg), &cfg).unwrap();
    let w = v.witness.unwrap();
    println!("a = 0.65 witness G(0,0):\n{:?}", w.get(0, 0).matrix());
}
