//! Garment domain vocabulary shared by the study statistics and the
//! suggestion rules.

use serde::{Deserialize, Serialize};

/// The two fabric blends under study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Fabric {
    /// 90% cotton + 10% polyester, single jersey knit.
    CottonBlend,
    /// 90% polyester + 10% spandex, single jersey knit.
    PolyesterBlend,
}

/// The two fitting conditions under study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Fit {
    Tight,
    Loose,
}

/// One of the four garment conditions: the cross product of fabric and
/// fit, with the conventional short codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConditionCode {
    #[serde(rename = "PLF")]
    Plf,
    #[serde(rename = "PTF")]
    Ptf,
    #[serde(rename = "CLF")]
    Clf,
    #[serde(rename = "CTF")]
    Ctf,
}

impl ConditionCode {
    /// All four conditions in table column order.
    pub const ALL: [ConditionCode; 4] = [
        ConditionCode::Plf,
        ConditionCode::Ptf,
        ConditionCode::Clf,
        ConditionCode::Ctf,
    ];

    pub fn code(self) -> &'static str {
        match self {
            ConditionCode::Plf => "PLF",
            ConditionCode::Ptf => "PTF",
            ConditionCode::Clf => "CLF",
            ConditionCode::Ctf => "CTF",
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        match code.trim().to_ascii_uppercase().as_str() {
            "PLF" => Some(ConditionCode::Plf),
            "PTF" => Some(ConditionCode::Ptf),
            "CLF" => Some(ConditionCode::Clf),
            "CTF" => Some(ConditionCode::Ctf),
            _ => None,
        }
    }

    pub fn fabric(self) -> Fabric {
        match self {
            ConditionCode::Plf | ConditionCode::Ptf => Fabric::PolyesterBlend,
            ConditionCode::Clf | ConditionCode::Ctf => Fabric::CottonBlend,
        }
    }

    pub fn fit(self) -> Fit {
        match self {
            ConditionCode::Plf | ConditionCode::Clf => Fit::Loose,
            ConditionCode::Ptf | ConditionCode::Ctf => Fit::Tight,
        }
    }

    /// Index of this condition in `ALL`.
    pub fn index(self) -> usize {
        match self {
            ConditionCode::Plf => 0,
            ConditionCode::Ptf => 1,
            ConditionCode::Clf => 2,
            ConditionCode::Ctf => 3,
        }
    }
}

impl std::fmt::Display for ConditionCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}
