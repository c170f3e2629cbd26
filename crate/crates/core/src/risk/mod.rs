//! Choice under risk: mixture-calibrated utility `u` on the simplex, the
//! affine benchmark `l`, and meters for the relaxed reduction and
//! independence axioms.

pub mod allais;
pub mod calibration;
pub mod meters;

pub use allais::{allais_report, figure1_data, AllaisReport, CptParams, Figure1, ALLAIS_PRIZES};
pub use calibration::{build_affine_benchmark, mixture_utility, AffineBenchmark, MixtureUtility};
pub use meters::{
    chain_triples, converse_check_4eps, independence_probes, indifferent_pairs,
    measure_eps_independence, measure_eps_independence_on, measure_eps_rcl, measure_eps_rcl_on,
    rcl_defect, rcl_triples, restoring_weight, verify_thm1, verify_thm2, ConverseReport,
    IndependenceProbe, RiskSampler, Triple,
};
