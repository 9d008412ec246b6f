use serde::{Deserialize, Serialize};

use univdef::definability::{ParamsRecord, WitnessRecord};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClaimRecord {
    NotInOs { s: Vec<String>, t: String },
    Nonsquare { x: String },
    Nonnorm { x: String, y: String },
}

/// Everything a third party needs to re-check a witness.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub schema: u32,
    pub q: u32,
    pub ext_modulus: Option<String>,
    pub claim: ClaimRecord,
    pub params: ParamsRecord,
    pub witness: WitnessRecord,
}
