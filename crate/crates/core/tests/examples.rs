//! Runs every program in `examples/` as a test.

mod cns_roundtrip {
    #![allow(dead_code)]
    include!("../examples/cns_roundtrip.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod effect_dilation {
    #![allow(dead_code)]
    include!("../examples/effect_dilation.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod joint_measurability {
    #![allow(dead_code)]
    include!("../examples/joint_measurability.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod naimark_dilation {
    #![allow(dead_code)]
    include!("../examples/naimark_dilation.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod phase_space {
    #![allow(dead_code)]
    include!("../examples/phase_space.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod scenario_runner {
    #![allow(dead_code)]
    include!("../examples/scenario_runner.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod sharp_pair_dilation {
    #![allow(dead_code)]
    include!("../examples/sharp_pair_dilation.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod sharp_version {
    #![allow(dead_code)]
    include!("../examples/sharp_version.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod trivial_smearing {
    #![allow(dead_code)]
    include!("../examples/trivial_smearing.rs");

    #[test]
    fn runs() {
        main();
    }
}
