//! Shared fixtures for the pipeline benchmarks.

use povmforge_core::{
    build_ensemble_q, build_f_permutation, FieldSpec, PolyFunction, PovmEnsemble, TowerSpec,
};

pub fn x2_ensemble(p: u64, k: u32) -> PovmEnsemble {
    let spec = FieldSpec::new(p, k).expect("valid field");
    let f = PolyFunction::x_squared(&spec);
    let perm = build_f_permutation(&spec, &f).expect("pairing exists");
    build_ensemble_q(&spec, &f, &perm, &spec.one()).expect("construction succeeds")
}

pub fn tower(p: u64, k: u32) -> TowerSpec {
    TowerSpec::for_base(FieldSpec::new(p, k).expect("valid field")).expect("tower builds")
}
