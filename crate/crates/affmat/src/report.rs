//! Shared certificate building blocks and the one JSON report schema
//! every command emits.

use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Dimension-versus-bound bookkeeping attached to every certificate.
/// `refined_bound` is present only where the refined (affine-not-linear,
/// characteristic zero) bound applies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub dim: usize,
    pub bound: usize,
    pub refined_bound: Option<usize>,
    /// True unless a positive verdict exceeds the applicable bound, which
    /// would contradict the theorem being exercised.
    pub satisfied: bool,
}

impl BoundCheck {
    pub fn effective_bound(&self) -> usize {
        self.refined_bound.unwrap_or(self.bound)
    }
}

/// A concrete member of the space violating the property, together with
/// the parameter point that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub point: Vec<Scalar>,
    pub matrix: Matrix<Scalar>,
}

/// How a verdict was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Symbolic,
    Enumeration,
    PairwiseCertificate,
    Sampling,
    EnumerationOracle,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::Symbolic => "symbolic",
            Method::Enumeration => "enumeration",
            Method::PairwiseCertificate => "pairwise-certificate",
            Method::Sampling => "sampling",
            Method::EnumerationOracle => "enumeration-oracle",
        };
        write!(f, "{s}")
    }
}

/// The report every command emits. Field order is fixed, all randomness
/// inputs are echoed, so equal inputs give byte-identical JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub property: String,
    pub verdict: String,
    pub method: Method,
    pub field: String,
    pub n: usize,
    pub dim: usize,
    pub is_linear: bool,
    pub bound: usize,
    pub refined_bound: Option<usize>,
    pub refined_bound_applicable: bool,
    pub bound_satisfied: bool,
    pub counterexample: Option<Counterexample>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub grid: Option<String>,
    pub notes: Vec<String>,
}

impl CertReport {
    /// Exit-code contract: 0 property holds and bound satisfied,
    /// 1 counterexample.
    pub fn exit_code(&self) -> i32 {
        if self.counterexample.is_some() {
            1
        } else if self.bound_satisfied {
            0
        } else {
            1
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "property: {}\nverdict: {}\nmethod: {}\nfield: {}, n = {}, dim = {}, linear = {}\n",
            self.property, self.verdict, self.method, self.field, self.n, self.dim, self.is_linear
        ));
        out.push_str(&format!(
            "bound: {}{}, satisfied = {}\n",
            self.bound,
            match self.refined_bound {
                Some(r) => format!(" (refined: {r})"),
                None => String::new(),
            },
            self.bound_satisfied
        ));
        if let Some(c) = &self.counterexample {
            let pt: Vec<String> = c.point.iter().map(|s| s.to_string()).collect();
            out.push_str(&format!(
                "counterexample at point [{}]:\n{}",
                pt.join(", "),
                c.matrix
            ));
        }
        if let Some(s) = self.samples {
            out.push_str(&format!("samples: {s}\n"));
        }
        if let Some(s) = self.seed {
            out.push_str(&format!("seed: {s}\n"));
        }
        if let Some(g) = &self.grid {
            out.push_str(&format!("grid: {g}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}
