//! Property suites run by `ibc selftest`.

use std::time::Instant;

use ibc_core::harness::{lemma1_exhaustive, lemma2_reuse_experiment, new_game};
use ibc_core::invariant::{eval_invariant, expected_constant, TupleSource};
use ibc_core::kdf::sha3_concat;
use ibc_core::oscillator::{OscMode, OscPrf};
use ibc_core::protocol::{alice_generate, bob_verify, derive_session, Message, Profile};
use num_bigint::{BigInt, BigUint};

use crate::ledger;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

struct Sizes {
    sessions: u64,
    games: u64,
}

fn sizes(profile: &Profile) -> Sizes {
    if profile.modulus.bits() > 64 {
        Sizes { sessions: 20, games: 5 }
    } else {
        Sizes { sessions: 200, games: 50 }
    }
}

fn nonce(tag: &[u8], n: u64) -> [u8; 32] {
    sha3_concat(&[b"IBC.selftest", tag, &n.to_be_bytes()])
}

const SECRET: &[u8] = b"selftest secret, thirty-two bytes";

fn invariant_suite(profile: &Profile, n: u64) -> SuiteResult {
    let mut checked = 0;
    let mut bad = 0;
    for k in 0.. {
        if checked == n {
            break;
        }
        let Ok(sess) = derive_session(SECRET, &nonce(b"inv", k), profile) else { continue };
        let (u, v) = (1 + k % 7, k % 11);
        if alice_generate(&sess, u, v).is_err() {
            continue;
        }
        let tu = sess.tuple(u, v).expect("alice succeeded");
        let ok = matches!((eval_invariant(&tu), expected_constant(&sess.p, u)), (Ok(a), Ok(b)) if a == b);
        bad += u64::from(!ok);
        checked += 1;
    }
    SuiteResult { name: "invariant", passed: bad == 0, detail: format!("{checked} sessions, {bad} mismatches") }
}

fn round_trip_suite(profile: &Profile, n: u64) -> SuiteResult {
    let mut done = 0;
    let mut bad = 0;
    let v_mask = if profile.v_bits >= 64 { u64::MAX } else { (1u64 << profile.v_bits) - 1 };
    for k in 0.. {
        if done == n {
            break;
        }
        let Ok(sess) = derive_session(SECRET, &nonce(b"rt", k), profile) else { continue };
        let u = 1 + k % (profile.u_limit() - 1);
        let v = (k.wrapping_mul(0x9e37_79b9_7f4a_7c15)) & v_mask;
        let Ok(msg) = alice_generate(&sess, u, v) else { continue };
        let back = Message::from_bytes(&msg.to_bytes(), &profile.modulus);
        let ok = back.as_ref() == Ok(&msg) && bob_verify(SECRET, &msg, profile) == Ok(v);
        bad += u64::from(!ok);
        done += 1;
    }
    SuiteResult { name: "round-trip", passed: bad == 0, detail: format!("{done} messages, {bad} failures") }
}

fn tamper_suite(profile: &Profile) -> SuiteResult {
    let r = new_game(profile, 0).bit_flip_sweep();
    SuiteResult {
        name: "tamper",
        passed: r.accepted == 0,
        detail: format!("{} flips, {} accepted", r.flips, r.accepted),
    }
}

fn oscillator_suite(profile: &Profile) -> SuiteResult {
    let (k, c) = (BigUint::from(12u32), BigUint::from(5u32));
    let prf = OscPrf::new([3; 32], k, c, profile.modulus.clone()).expect("nonzero period");
    let table = OscMode::Table(prf.to_table().expect("small table"));
    let on_demand = OscMode::OnDemand(prf);
    let period = BigInt::from(60);
    let mut bad = 0;
    for j in -500i64..500 {
        let j = BigInt::from(j * 37);
        let x = on_demand.eval_index(&j);
        bad += u64::from(on_demand.eval_index(&(&j + &period)) != -x.clone());
        bad += u64::from(table.eval_index(&j) != x);
    }
    SuiteResult { name: "oscillator", passed: bad == 0, detail: format!("1000 indices, {bad} violations") }
}

fn uniqueness_suite(profile: &Profile, games: u64) -> Option<SuiteResult> {
    let mut bad = 0;
    for seed in 0..games {
        let g = new_game(profile, seed);
        let sweep = lemma1_exhaustive(&g)?;
        bad += u64::from(sweep.count != 1 || &sweep.witnesses[0] != g.honest_s3());
    }
    Some(SuiteResult {
        name: "uniqueness",
        passed: bad == 0,
        detail: format!("{games} games, {bad} without a unique completion"),
    })
}

fn splice_suite(profile: &Profile) -> SuiteResult {
    let r = lemma2_reuse_experiment(profile, 5, 9);
    SuiteResult {
        name: "splice",
        passed: r.accepted == 0,
        detail: format!("{} splices, {} accepted", r.splices, r.accepted),
    }
}

fn ledger_suite() -> SuiteResult {
    let rows = ledger::build();
    let bad = rows.iter().filter(|r| r.value_a != r.value_b).count();
    SuiteResult { name: "ledger", passed: bad == 0, detail: format!("{} rows, {bad} oracle mismatches", rows.len()) }
}

/// Runs every suite applicable to `profile`, timing each.
pub fn run(profile: &Profile) -> Vec<(SuiteResult, f64)> {
    let s = sizes(profile);
    let mut out = Vec::new();
    let mut timed = |f: &dyn Fn() -> Option<SuiteResult>| {
        let start = Instant::now();
        if let Some(r) = f() {
            out.push((r, start.elapsed().as_secs_f64()));
        }
    };
    timed(&|| Some(invariant_suite(profile, s.sessions)));
    timed(&|| Some(round_trip_suite(profile, s.sessions)));
    timed(&|| Some(tamper_suite(profile)));
    timed(&|| Some(oscillator_suite(profile)));
    timed(&|| uniqueness_suite(profile, s.games));
    timed(&|| Some(splice_suite(profile)));
    timed(&|| Some(ledger_suite()));
    out
}
