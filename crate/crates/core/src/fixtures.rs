//! Reference data embedded at compile time.

use serde::Deserialize;

use crate::exact::IntMat2;

const WORKED_EXAMPLE: &str = include_str!("../fixtures/worked_example.json");
const TABLE3: &str = include_str!("../fixtures/table3.json");
const TABLE2: &str = include_str!("../fixtures/table2.json");

#[derive(Clone, Debug, Deserialize)]
pub struct Rescaling {
    /// Positive rational, e.g. `"2"` or `"1/2"`.
    pub q: String,
    pub types: Vec<String>,
    pub group: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct WorkedExample {
    pub name: String,
    pub matrices: Vec<IntMat2>,
    pub group: String,
    pub types: Vec<String>,
    pub rescalings: Vec<Rescaling>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Table3Row {
    pub group: String,
    pub index: usize,
    /// Expected `N(G)`.
    pub n: usize,
    /// Groups conjugate to `group` in SL₂(ℝ).
    pub partners: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Table2Row {
    #[serde(rename = "type")]
    pub type_name: String,
    pub matrix: IntMat2,
    pub beta: Option<String>,
}

pub fn worked_example() -> WorkedExample {
    serde_json::from_str(WORKED_EXAMPLE).expect("embedded worked example parses")
}

/// The six monodromy matrices, in loop order.
pub fn worked_example_matrices() -> Vec<IntMat2> {
    worked_example().matrices
}

pub fn table3() -> Vec<Table3Row> {
    serde_json::from_str(TABLE3).expect("embedded table parses")
}

pub fn table2() -> Vec<Table2Row> {
    serde_json::from_str(TABLE2).expect("embedded table parses")
}

/// Raw embedded payloads by name.
pub fn raw(name: &str) -> Option<&'static str> {
    match name {
        "worked_example" => Some(WORKED_EXAMPLE),
        "table3" => Some(TABLE3),
        "table2" => Some(TABLE2),
        _ => None,
    }
}
