//! Built-in instances shipped with the library and the `lry` binary.

use crate::model::SplitProfile;

/// Ten districts with `x_A(L_5) = 1.9`, `x_A(6) = 0.9` and `x_A(R_6) = 1.4`.
///
/// The coin flip lands on the 5- and 6-splits, and one of its four options
/// leaves party A two districts short of its geometric target.
pub const TWO_GAP_JSON: &str =
    r#"{"n":10,"segments_a":["0.38","0.38","0.38","0.38","0.38","0.9","0.3","0.3","0.4","0.4"]}"#;

pub fn two_gap_profile() -> SplitProfile {
    SplitProfile::from_json(TWO_GAP_JSON).expect("built-in profile parses")
}
