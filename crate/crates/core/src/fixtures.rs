//! Published reference codebooks bundled with the crate.

use crate::codebook::CodebookSet;

/// 4-ary codebook with three projections per dimension, 6 users on 4 resources.
pub const A43_150_JSON: &str = include_str!("../fixtures/a43_150.json");
/// 4-ary codebook with two projections per dimension, 10 users on 5 resources.
pub const A42_200_JSON: &str = include_str!("../fixtures/a42_200.json");
/// 8-ary codebook with four projections per dimension, 6 users on 4 resources.
pub const A84_150_JSON: &str = include_str!("../fixtures/a84_150.json");

pub fn a43_150() -> CodebookSet {
    CodebookSet::from_json(A43_150_JSON).expect("bundled fixture parses")
}

pub fn a42_200() -> CodebookSet {
    CodebookSet::from_json(A42_200_JSON).expect("bundled fixture parses")
}

pub fn a84_150() -> CodebookSet {
    CodebookSet::from_json(A84_150_JSON).expect("bundled fixture parses")
}

/// All bundled codebooks with a short name.
pub fn all() -> Vec<(&'static str, CodebookSet)> {
    vec![("a43_150", a43_150()), ("a42_200", a42_200()), ("a84_150", a84_150())]
}
