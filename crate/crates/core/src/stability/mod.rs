//! K-stability invariants of toric pairs.

mod ainv;
mod curve;
mod decomposition;
mod filtration;
mod report;

pub use ainv::{
    a_feasibility, a_invariant, assumption_gate, gate_from_values, threshold, verify_certificate,
    AInvariant, Certificate, GateReport, GateVerdict, DEFAULT_DENOMINATOR_CAP,
};
pub use curve::{
    basis_type_divisor, candidates, delta_m_upper, delta_upper, divisor_volume_curve, lemma26_check,
    s_invariant_barycenter, s_invariant_curve, s_m, vol_curve, Anticanonical, DeltaBound,
    Lemma26Outcome, Sections,
};
pub use decomposition::{
    delta_transfer_bound, lemma37_constant, lemma37_from_model, ord_b, s_decomposition_check,
    transfer_formula, DecompositionRow,
};
pub use filtration::{
    filtration_s_estimate, filtration_s_m, filtration_validate, DegreeData, FiltrationData,
    SEstimate, Violation, ViolationKind,
};
pub use report::{invariant_report, valuation_report, Flag, InvariantReport, ValuationReport};
