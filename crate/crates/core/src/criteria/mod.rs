//! Growth calculus, regular growth, and hypothesis harnesses for the algebraic independence criteria.

mod approximating;
mod growth;
mod harness;
pub mod instances;
mod quadruple;

pub use growth::{check_growth_calculus, growth_exponent, inverse_sequence, CalculusReport, ClosureCheck, GrowthEstimate, MIN_SAMPLES};
pub use harness::{
    check_hypotheses_algind1, check_hypotheses_algind2, CommonZeroCheck, CommonZeroMethod, CriterionInstance, HarnessReport,
    Hypothesis, IndexCheck, InstanceFile, RestrictionCheck, Verdict,
};
pub use quadruple::{
    check_regular_growth, criterion_limit, regularity_window, GrowthQuadruple, LimitDiagnostics, RegularityReport, WindowConstants,
    WindowReport, UNBOUNDED_FACTOR,
};
pub use approximating::{sufficiently_approximating, ApproximatingReport};
