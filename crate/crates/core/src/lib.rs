//! Joint measurability of finite-dimensional quantum observables.
//!
//! POVMs on `C^d` are validated, dilated to projection-valued measures on a
//! larger space, tested for joint measurability, smeared by Markov kernels and
//! reduced to sharp versions. [`phasespace`] builds the covariant
//! position-momentum observable on `Z_d x Z_d`, a jointly measurable pair
//! whose marginals do not commute.
//!
//! ```
//! use jointmeas::prelude::*;
//!
//! let cfg = Config::default();
//! let z = HermitianOperator::new(pauli::z(), &cfg).unwrap();
//! let x = HermitianOperator::new(pauli::x(), &cfg).unwrap();
//! let (ez, _) = spectral_pvm(&z, &cfg).unwrap();
//! let (ex, _) = spectral_pvm(&x, &cfg).unwrap();
//! let v = jm_feasibility(&ez, &ex, &cfg).unwrap();
//! assert_eq!(v.decision, Decision::Incompatible);
//! ```

pub mod cli;
pub mod compat;
pub mod config;
pub mod dilation;
pub mod error;
pub mod linalg;
pub mod phasespace;
pub mod povm;
pub mod random;
pub mod smearing;
pub mod spectral;

pub use config::{Config, Tolerances};
pub use error::{Error, Result};

/// The types and operations most programs need.
pub mod prelude {
    pub use crate::compat::{
        common_dilation_from_joint, effect_compatible, jm_feasibility, joint_from_commuting_dilations, marginals,
        product_joint_pvm, proposition_condition_check, CompatibilityVerdict, Decision, JointPovm,
    };
    pub use crate::config::{Config, Tolerances};
    pub use crate::dilation::{compress, effect_block_dilation, naimark_dilate, NaimarkDilation};
    pub use crate::error::{Error, Result};
    pub use crate::linalg::{c, pauli, ComplexMatrix, HermitianOperator, C64};
    pub use crate::phasespace::{covariant_povm, marginal_kernels, PhaseSpaceModel};
    pub use crate::povm::{is_pvm, max_commutation_defect, spectral_pvm, validate_povm, DiscretePovm, Effect};
    pub use crate::random::Sampler;
    pub use crate::smearing::{
        apply_kernel, same_generated_algebra, sharp_version, trivial_smearing_pair, MarkovKernel,
    };
    pub use crate::spectral::{spectral_decompose, sqrt_psd};
}
