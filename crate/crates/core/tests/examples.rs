//! Runs every example's `run_example`.

#[allow(dead_code)]
mod chain_construction {
    include!("../examples/chain_construction.rs");

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

#[allow(dead_code)]
mod heat_equation {
    include!("../examples/heat_equation.rs");

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

#[allow(dead_code)]
mod integro {
    include!("../examples/integro.rs");

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

#[allow(dead_code)]
mod linops {
    include!("../examples/linops.rs");

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

#[allow(dead_code)]
mod ode_regular {
    include!("../examples/ode_regular.rs");

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

#[allow(dead_code)]
mod ode_singular {
    include!("../examples/ode_singular.rs");

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

#[allow(dead_code)]
mod parabolic_chain {
    include!("../examples/parabolic_chain.rs");

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

#[allow(dead_code)]
mod parabolic_projector {
    include!("../examples/parabolic_projector.rs");

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

#[allow(dead_code)]
mod problem_files {
    include!("../examples/problem_files.rs");

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

#[allow(dead_code)]
mod quasipoly {
    include!("../examples/quasipoly.rs");

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

#[allow(dead_code)]
mod split_system {
    include!("../examples/split_system.rs");

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

#[allow(dead_code)]
mod mixed {
    include!("../examples/mixed.rs");

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}
