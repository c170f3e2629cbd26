//! Measured relaxation parameters and constructed benchmarks.

use serde::{Deserialize, Serialize};

/// The sampled input at which a meter attained its maximum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    None,
    Point {
        coords: Vec<f64>,
    },
    /// Compound lottery `lambda * p0 + (1 - lambda) * p1`.
    Mixture {
        p0: Vec<f64>,
        p1: Vec<f64>,
        lambda: f64,
    },
    /// `alpha * p + (1 - alpha) * r ~ alpha_prime * q + (1 - alpha_prime) * r`.
    Independence {
        p: Vec<f64>,
        q: Vec<f64>,
        r: Vec<f64>,
        alpha: f64,
        alpha_prime: f64,
    },
    ActPair {
        x: Vec<f64>,
        y: Vec<f64>,
    },
    ActMixture {
        x: Vec<f64>,
        y: Vec<f64>,
        lambda: f64,
    },
    Dates {
        s: f64,
        t: f64,
    },
    /// Continuous-time sample: log-amount, date and delay.
    Delay {
        x: f64,
        t: f64,
        delay: f64,
    },
}

/// Sample maximum of an axiom's relaxation parameter.
///
/// The value is a maximum over a finite sample, not a supremum. Bounds that
/// use it are verified on the same sample family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub parameter: String,
    pub value: f64,
    pub witness: Witness,
    pub samples_evaluated: usize,
    /// Root-finding tolerance used to operationalize indifference.
    pub tolerance: f64,
}

impl ViolationReport {
    pub fn zero(parameter: &str, tolerance: f64) -> Self {
        Self {
            parameter: parameter.to_string(),
            value: 0.0,
            witness: Witness::None,
            samples_evaluated: 0,
            tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepresentationKind {
    Affine,
    Linear,
    Homogeneous,
    Quasiconcave,
    ExponentialDiscount,
    TimeShift,
}

/// A constructed exact-axiom benchmark and its measured distance to the
/// behavioural utility.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NearRepresentation {
    pub kind: RepresentationKind,
    /// Coefficients, prior, discount factor, ... depending on `kind`.
    pub parameters: Vec<f64>,
    /// Largest sampled distance between the utility and the benchmark.
    pub achieved_distance: f64,
    /// The guarantee the distance is checked against.
    pub bound: f64,
    pub witness: Vec<f64>,
    pub points_checked: usize,
}

/// Running maximum that keeps the first index on ties.
#[derive(Debug, Clone)]
pub(crate) struct ArgMax<W> {
    pub value: f64,
    pub witness: Option<W>,
    pub count: usize,
}

impl<W> ArgMax<W> {
    pub fn new() -> Self {
        Self {
            value: f64::NEG_INFINITY,
            witness: None,
            count: 0,
        }
    }

    pub fn push(&mut self, value: f64, witness: impl FnOnce() -> W) {
        self.count += 1;
        if value > self.value || (value.is_nan() && !self.value.is_nan()) {
            self.value = value;
            self.witness = Some(witness());
        }
    }

    /// Maximum or `floor` when nothing was pushed.
    pub fn value_or(&self, floor: f64) -> f64 {
        if self.witness.is_some() {
            self.value
        } else {
            floor
        }
    }
}
