use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictValue {
    True,
    False,
    WitnessedTrue,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Closed form over the finite description.
    Exact,
    /// Finite search within the recorded horizon.
    Witnessed,
    /// Trusted fact attached to a generator family.
    Annotated,
}

/// Which product a search witness refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `|w_1 ... w_n|`, the forward orbit of `e_1`.
    Right,
    /// `|w_{-n} ... w_{-1}|^{-1}`, the inverse orbit of `e_0`.
    LeftInverse,
    /// `|w_{-n} ... w_{-1}|`, the backward-shift orbit of `e_{-1}`.
    Left,
}

/// Branches of the uniform expansivity criterion for invertible forward shifts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    First,
    Second,
    Third,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    Left,
    Right,
    /// The quotient of the two tail means.
    Ratio,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CyclicPair {
    pub q: u64,
    pub n: u64,
    /// Natural log of the max-term (or ratio) at `(n, q)`.
    pub log_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decay {
    pub j: i64,
    pub forward_rate: f64,
    pub forward_constant: f64,
    pub backward_rate: f64,
    pub backward_constant: f64,
}

/// Evidence attached to a verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// An orbit coefficient of `e_k` at exponent `n`; `ladder` lists the
    /// record peaks of the same running product found within the horizon.
    Product { side: Side, k: i64, n: u64, log_abs: f64, ladder: Vec<(u64, f64)> },
    /// Tail means behind a closed-form verdict.
    Tails { log_gm_left: Option<f64>, log_gm_right: f64 },
    /// A tail mean inside the dead band around 1.
    Band { tail: Tail, log_gm: f64 },
    Branches { branches: Vec<Branch>, primary: Branch, n: Option<u64> },
    SpectralRadii { r_fw: f64, r_fw_inv: f64 },
    Cyclic { pairs: Vec<CyclicPair> },
    Decay { vectors: Vec<Decay> },
    ZeroWeight { index: i64 },
    Eigenvalue { re: f64, im: f64, modulus: f64 },
    ShadowConstant { k: f64 },
    Refutation { window: i64, lower_bound: f64 },
    Note { text: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub value: VerdictValue,
    pub provenance: Provenance,
    pub witness: Option<Witness>,
    pub horizon: Option<u64>,
}

impl Verdict {
    pub fn exact(holds: bool, witness: Option<Witness>) -> Self {
        Verdict {
            value: if holds { VerdictValue::True } else { VerdictValue::False },
            provenance: Provenance::Exact,
            witness,
            horizon: None,
        }
    }

    pub fn witnessed(witness: Witness, horizon: u64) -> Self {
        Verdict { value: VerdictValue::WitnessedTrue, provenance: Provenance::Witnessed, witness: Some(witness), horizon: Some(horizon) }
    }

    pub fn annotated(holds: bool, witness: Option<Witness>) -> Self {
        Verdict {
            value: if holds { VerdictValue::True } else { VerdictValue::False },
            provenance: Provenance::Annotated,
            witness,
            horizon: None,
        }
    }

    /// Search ran out of horizon.
    pub fn searched_out(horizon: u64) -> Self {
        Verdict { value: VerdictValue::Undetermined, provenance: Provenance::Witnessed, witness: None, horizon: Some(horizon) }
    }

    /// A tail mean fell inside the tolerance band.
    pub fn banded(tail: Tail, log_gm: f64) -> Self {
        Verdict {
            value: VerdictValue::Undetermined,
            provenance: Provenance::Exact,
            witness: Some(Witness::Band { tail, log_gm }),
            horizon: None,
        }
    }

    /// `Some(true)` for True and WitnessedTrue, `Some(false)` for False.
    pub fn truth(&self) -> Option<bool> {
        match self.value {
            VerdictValue::True | VerdictValue::WitnessedTrue => Some(true),
            VerdictValue::False => Some(false),
            VerdictValue::Undetermined => None,
        }
    }

    pub fn is_true(&self) -> bool {
        self.truth() == Some(true)
    }

    pub fn is_false(&self) -> bool {
        self.truth() == Some(false)
    }

    pub fn is_decided(&self) -> bool {
        self.truth().is_some()
    }
}
