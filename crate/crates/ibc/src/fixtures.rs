//! Regression vectors and the other files written by `ibc fixtures`.

use std::fmt::Write as _;
use std::path::Path;

use ibc_core::kdf::sha3_concat;
use ibc_core::oscillator::OscSeed;
use ibc_core::protocol::{alice_generate, derive_session, Message, Profile, MESSAGE_LEN};

use crate::{ledger, profile_file};

pub const VECTORS_FILE: &str = "vectors.txt";
pub const LEDGER_FILE: &str = "discrepancies.csv";
pub const SEED_FILE: &str = "example_seed.txt";

/// `(u, v)` pairs tried for each profile, in order.
const SPACINGS: [(u64, u64); 4] = [(5, 17), (1, 0), (3, 2), (200, 100)];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vector {
    pub profile: String,
    pub secret: Vec<u8>,
    pub nonce: [u8; 32],
    pub u: u64,
    pub v: u64,
    pub message: [u8; MESSAGE_LEN],
}

#[derive(Debug, thiserror::Error)]
pub enum VectorParseError {
    #[error("line {0}: expected 6 fields")]
    Fields(usize),
    #[error("line {0}: bad hex or integer")]
    Value(usize),
}

impl Vector {
    pub fn to_line(&self) -> String {
        format!(
            "{} {} {} {} {} {}",
            self.profile,
            hex::encode(&self.secret),
            hex::encode(self.nonce),
            self.u,
            self.v,
            hex::encode(self.message)
        )
    }
}

pub fn parse_vectors(text: &str) -> Result<Vec<Vector>, VectorParseError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let n = idx + 1;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        let [profile, s, z, u, v, msg] = f[..] else {
            return Err(VectorParseError::Fields(n));
        };
        let bad = |_| VectorParseError::Value(n);
        out.push(Vector {
            profile: profile.into(),
            secret: hex::decode(s).map_err(bad)?,
            nonce: hex::decode(z).map_err(bad)?.try_into().map_err(|_| VectorParseError::Value(n))?,
            u: u.parse().map_err(|_| VectorParseError::Value(n))?,
            v: v.parse().map_err(|_| VectorParseError::Value(n))?,
            message: hex::decode(msg).map_err(bad)?.try_into().map_err(|_| VectorParseError::Value(n))?,
        });
    }
    Ok(out)
}

/// Fixed `(S, z)` pairs for `profile`; aborting pairs are skipped.
pub fn vectors_for(profile: &Profile, count: usize) -> Vec<Vector> {
    let mut out = Vec::new();
    for k in 0u32.. {
        if out.len() == count {
            break;
        }
        let tag = profile.name.as_bytes();
        let secret = sha3_concat(&[b"IBC.fixture.S", tag, &k.to_be_bytes()]).to_vec();
        let nonce = sha3_concat(&[b"IBC.fixture.z", tag, &k.to_be_bytes()]);
        let Ok(sess) = derive_session(&secret, &nonce, profile) else { continue };
        let (u, v) = SPACINGS[k as usize % SPACINGS.len()];
        let Ok(msg) = alice_generate(&sess, u, v) else { continue };
        out.push(Vector { profile: profile.name.clone(), secret, nonce, u, v, message: msg.to_bytes() });
    }
    out
}

pub fn vectors_text() -> String {
    let mut out = String::from("# profile secret nonce u v message\n");
    for (profile, count) in [(Profile::toy(), 8), (Profile::mini(), 4), (Profile::production(), 4)] {
        for v in vectors_for(&profile, count) {
            let _ = writeln!(out, "{}", v.to_line());
        }
    }
    out
}

/// Regenerates `vec` and checks the message and Bob's recovery.
pub fn check_vector(vec: &Vector) -> Result<(), String> {
    let profile = Profile::by_name(&vec.profile).ok_or_else(|| format!("unknown profile {}", vec.profile))?;
    let sess = derive_session(&vec.secret, &vec.nonce, &profile).map_err(|e| e.to_string())?;
    let msg = alice_generate(&sess, vec.u, vec.v).map_err(|e| e.to_string())?;
    if msg.to_bytes() != vec.message {
        return Err("message bytes differ".into());
    }
    let decoded = Message::from_bytes(&vec.message, &profile.modulus).map_err(|e| e.to_string())?;
    match ibc_core::protocol::bob_verify(&vec.secret, &decoded, &profile) {
        Ok(v) if v == vec.v => Ok(()),
        Ok(v) => Err(format!("recovered {v}, expected {}", vec.v)),
        Err(e) => Err(e.to_string()),
    }
}

pub fn example_seed_text() -> String {
    let m = Profile::toy().modulus;
    OscSeed::from_signed(&[2, -1, 0, 3, -2, 1, 1, -3], 4, 2, &m).expect("8 = K·C").to_decimal_lines()
}

/// Every generated file as `(name, contents)`.
pub fn all_files() -> Vec<(String, String)> {
    vec![
        (VECTORS_FILE.into(), vectors_text()),
        (LEDGER_FILE.into(), ledger::to_csv(&ledger::build())),
        (SEED_FILE.into(), example_seed_text()),
        ("toy.json".into(), profile_file::to_json(&Profile::toy()) + "\n"),
        ("mini.json".into(), profile_file::to_json(&Profile::mini()) + "\n"),
        ("production.json".into(), profile_file::to_json(&Profile::production()) + "\n"),
    ]
}

pub fn write_all(dir: &Path) -> std::io::Result<Vec<String>> {
    std::fs::create_dir_all(dir)?;
    let mut names = Vec::new();
    for (name, text) in all_files() {
        std::fs::write(dir.join(&name), text)?;
        names.push(name);
    }
    Ok(names)
}
