use std::fmt;

use serde::{Deserialize, Serialize};

/// Three-valued answer. `Unknown` means "cannot conclude", never a default.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriBool {
    Yes,
    No,
    Unknown,
}

impl TriBool {
    pub fn from_bool(b: bool) -> TriBool {
        if b {
            TriBool::Yes
        } else {
            TriBool::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == TriBool::Yes
    }

    pub fn is_no(self) -> bool {
        self == TriBool::No
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TriBool::Yes => "yes",
            TriBool::No => "no",
            TriBool::Unknown => "unknown",
        }
    }
}

impl fmt::Display for TriBool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
