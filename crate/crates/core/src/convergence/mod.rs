//! Yosida operator inequalities and Cauchy behaviour of regularized families.

mod family;
mod yosida;

pub use family::{
    family_run, finite_energy_mode, fit_rate, limit_extract, p_ratio_check, run_member, strong_distance, sup_distance,
    weak_distance, DiffReport, FamilyFailure, FamilyPlan, FamilyResult, FiniteEnergyReport, LimitReport, Member,
    PRatioReport, PairDiff, RateFit, MONOTONE_TOLERANCE, P_LIST, P_SLOPE_LIMIT,
};
pub use yosida::{level_pairs, yosida_property_suite, InequalityStats, WorstCase, YosidaReport, YosidaSuiteConfig, INEQUALITIES};
