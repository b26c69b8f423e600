use serde::{Deserialize, Serialize};

/// Flat part of an evaluation report; this is what a CSV row holds.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct Summary {
    pub method: String,
    pub digits: u32,
    pub mu: String,
    pub gamma: String,
    pub lambda: String,
    pub a: String,
    pub oracle_value: String,
    pub expansion_value: String,
    pub abs_err: String,
    pub rel_err: String,
    pub est_truncation_error: String,
    /// Only for the J1/J2 split: the part of S that J2 should describe.
    pub s_hat: Option<String>,
    pub rel_err_vs_s_hat: Option<String>,
    pub k_max: Option<usize>,
    pub r_max: Option<usize>,
    pub j_max: Option<usize>,
    pub oracle_terms: u64,
    pub terms_used: usize,
    pub wall_time_ms: Option<f64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct LedgerEntry {
    pub label: String,
    pub value: String,
}

/// Oracle vs. expansion at one parameter point.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct EvalReport {
    #[serde(flatten)]
    pub summary: Summary,
    pub ledger: Vec<LedgerEntry>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct Table1Cell {
    pub mu: String,
    pub gamma: String,
    /// `r` for a relative-error cell, `S_hat` for the reference value.
    pub row: String,
    pub value: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct CoeffRow {
    pub family: String,
    pub index: String,
    /// Rational or λ-polynomial; empty when only a numeric value exists.
    pub exact: String,
    pub value: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct VerifyRow {
    pub check: String,
    pub case: String,
    pub measured: String,
    pub threshold: String,
    pub pass: bool,
}
