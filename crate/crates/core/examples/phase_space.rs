// Covariant position-momentum observable on Z_8 x Z_8 with a Gaussian fiducial:
// the marginals do not commute, yet they are jointly measurable.

use jointmeas::phasespace::{commuting_multiplication_dilations, sharp_operator_compression_check, MomentLabels};
use jointmeas::prelude::*;

fn main() {
    let cfg = Config::default();
    let d = 8;
    let model = PhaseSpaceModel::gaussian(d, 1.0, &cfg).unwrap();
    let cov = covariant_povm(&model, &cfg).unwrap();

    let k = marginal_kernels(&cov, &cfg).unwrap();
    println!("position kernel row 0: {:.4?}", k.position.row(0));
    println!("convolution defects: Q {:.1e}, P {:.1e}", k.position_defect, k.momentum_defect);

    let dil = commuting_multiplication_dilations(&cov, &cfg).unwrap();
    println!("W isometry defect {:.1e}", dil.isometry_defect);
    println!("compression chains: Q {:.1e}, P {:.1e}, joint {:.1e}", dil.position_chain_defect, dil.momentum_chain_defect, dil.joint_defect);
    println!("covariance defect {:.1e}", cov.covariance_defect(&[(1, 3), (5, 2)]));

    let (fq, fp) = cov.marginals(&cfg).unwrap();
    println!("max |[F^Q(q), F^P(p)]| = {:.4}", max_commutation_defect(&fq, &fp).unwrap());
    let v = jm_feasibility(&fq, &fp, &cfg).unwrap();
    println!("feasibility test: {} after {} iterations", v.decision.as_str(), v.iterations);

    let m = sharp_operator_compression_check(&model, MomentLabels::Scaled, &cfg).unwrap();
    println!(
        "first moment: offset {:.1e}, interior defect {:.1e}, flagged {}",
        m.position.offset, m.position.interior_defect, m.position.flagged
    );
}
