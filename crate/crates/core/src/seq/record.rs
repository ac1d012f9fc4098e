//! On-disk form of a sampled set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::{IntegerSet, MeanSchedule};

/// A named set with the schedule and seed it was drawn with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetRecord {
    pub name: String,
    /// `None` for sets that were not sampled.
    pub schedule: Option<MeanSchedule>,
    pub seed: Option<u64>,
    pub elements: IntegerSet,
}

impl SetRecord {
    /// Single-line JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("set records always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("malformed set record: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_single_line() {
        let r = SetRecord {
            name: "demo".into(),
            schedule: Some(MeanSchedule::LogLog { c: 1.0 }),
            seed: Some(7),
            elements: IntegerSet::new(vec![3, 9, 27]).unwrap(),
        };
        let text = r.to_json();
        assert!(!text.contains('\n'));
        assert!(text.contains(r#""elements":[3,9,27]"#));
        assert_eq!(SetRecord::from_json(&text).unwrap(), r);
        assert!(SetRecord::from_json(r#"{"name":"x","schedule":null,"seed":null,"elements":[2,1]}"#).is_err());
    }
}
