//! Shared inputs for the criterion benches.

use horadam_core::{FamilyId, HoradamParams, SumSpec};

/// A general instance with non-unit `q`, so every power of `q` is real work.
pub fn general() -> HoradamParams {
    HoradamParams::new(2.into(), 5.into(), 3.into(), (-2).into()).expect("valid parameters")
}

/// A finite spec of `family` with `terms` terms.
pub fn finite(family: FamilyId, terms: i64) -> SumSpec {
    SumSpec::over(&general(), family, 2, 2)
        .with_n(1)
        .with_terms(terms)
}

pub fn infinite(family: FamilyId) -> SumSpec {
    SumSpec::over(&general(), family, 1, 2).with_n(1)
}
