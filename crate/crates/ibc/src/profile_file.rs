//! Profile JSON: `{name, M, K_min, K_max, C_min, C_max, u_bits, v_bits, hash}`,
//! big values as decimal strings.

use std::path::Path;

use ibc_core::modmath::Modulus;
use ibc_core::oscillator::ModeChoice;
use ibc_core::protocol::{Profile, ProfileError};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

/// Largest oscillator table built for custom profiles.
const CUSTOM_TABLE_LIMIT: u64 = 1 << 16;

#[derive(Debug, thiserror::Error)]
pub enum ProfileFileError {
    #[error("reading profile: {0}")]
    Io(#[from] std::io::Error),
    #[error("profile JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field {0} is not a decimal integer")]
    NotDecimal(&'static str),
    #[error(transparent)]
    Invalid(#[from] ProfileError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileJson {
    pub name: String,
    #[serde(rename = "M")]
    pub m: String,
    #[serde(rename = "K_min")]
    pub k_min: String,
    #[serde(rename = "K_max")]
    pub k_max: String,
    #[serde(rename = "C_min")]
    pub c_min: String,
    #[serde(rename = "C_max")]
    pub c_max: String,
    pub u_bits: u32,
    pub v_bits: u32,
    pub hash: String,
}

impl From<&Profile> for ProfileJson {
    fn from(p: &Profile) -> Self {
        ProfileJson {
            name: p.name.clone(),
            m: p.modulus.value().to_string(),
            k_min: p.k_min.to_string(),
            k_max: p.k_max.to_string(),
            c_min: p.c_min.to_string(),
            c_max: p.c_max.to_string(),
            u_bits: p.u_bits,
            v_bits: p.v_bits,
            hash: p.hash.clone(),
        }
    }
}

fn decimal(field: &'static str, s: &str) -> Result<BigUint, ProfileFileError> {
    s.parse().map_err(|_| ProfileFileError::NotDecimal(field))
}

impl ProfileJson {
    /// Presets keep their own oscillator mode and secret length; anything else
    /// gets tables up to 2^16 entries and a 32-byte secret floor for moduli of
    /// 256 bits.
    pub fn to_profile(&self) -> Result<Profile, ProfileFileError> {
        let modulus = Modulus::prime(decimal("M", &self.m)?).map_err(ProfileError::from)?;
        let preset = Profile::by_name(&self.name).filter(|p| p.modulus == modulus);
        let (min_secret_len, osc_mode) = match preset {
            Some(p) => (p.min_secret_len, p.osc_mode),
            None => {
                let len = if modulus.bits() >= 256 { 32 } else { 8 };
                (len, ModeChoice::Auto { table_limit: CUSTOM_TABLE_LIMIT })
            }
        };
        let profile = Profile {
            name: self.name.clone(),
            modulus,
            k_min: decimal("K_min", &self.k_min)?,
            k_max: decimal("K_max", &self.k_max)?,
            c_min: decimal("C_min", &self.c_min)?,
            c_max: decimal("C_max", &self.c_max)?,
            u_bits: self.u_bits,
            v_bits: self.v_bits,
            hash: self.hash.clone(),
            min_secret_len,
            osc_mode,
        };
        profile.validate()?;
        Ok(profile)
    }
}

pub fn to_json(profile: &Profile) -> String {
    serde_json::to_string_pretty(&ProfileJson::from(profile)).expect("plain struct serializes")
}

pub fn from_json(text: &str) -> Result<Profile, ProfileFileError> {
    serde_json::from_str::<ProfileJson>(text)?.to_profile()
}

/// A preset name (`toy`, `mini`, `production`) or a path to a JSON file.
pub fn resolve(name: &str) -> Result<Profile, ProfileFileError> {
    if let Some(p) = Profile::by_name(name) {
        return Ok(p);
    }
    from_json(&std::fs::read_to_string(Path::new(name))?)
}
