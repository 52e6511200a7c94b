//! Forgery game simulator.
//!
//! A game hides `(S, t, v)` and exposes only the transcript. Adversaries see a
//! [`PublicView`] and answer with a [`Forgery`] `(s*, δ*)`; the adjudicator
//! recovers `v*` from `s*` with Bob's secret-side values and checks the hash.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::invariant::recover_v;
use crate::modmath::{FieldElem, Modulus};
use crate::protocol::{
    alice_generate, bob_verify, derive_session, match_lifted, Message, Nonce, Profile, ProtocolError, Reject, Session,
};

/// Largest modulus for exhaustive `s*` sweeps.
pub const EXHAUSTIVE_SWEEP_LIMIT: u64 = 1 << 16;

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959964;

/// What an adversary is allowed to see.
#[derive(Debug, Clone, Copy)]
pub struct PublicView<'a> {
    pub message: &'a Message,
    pub modulus: &'a Modulus,
    pub u_bits: u32,
    pub v_bits: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forgery {
    pub s_star: FieldElem,
    pub delta_star: BigInt,
}

pub trait Adversary {
    fn name(&self) -> &str;
    fn forge(&mut self, view: PublicView<'_>) -> Forgery;
}

struct Hidden {
    secret: Vec<u8>,
    session: Session,
    v: u64,
}

/// One honest session with its secret side sealed.
pub struct GameInstance {
    profile: Profile,
    transcript: Message,
    hidden: Hidden,
    aborts: u32,
}

impl core::fmt::Debug for GameInstance {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("GameInstance")
            .field("profile", &self.profile.name)
            .field("transcript", &self.transcript)
            .field("aborts", &self.aborts)
            .finish_non_exhaustive()
    }
}

fn random_below(rng: &mut ChaCha20Rng, bound: &BigUint) -> BigUint {
    // 64 extra bits keep the modulo bias below 2^-64
    let mut buf = alloc::vec![0u8; (bound.bits() as usize).div_ceil(8) + 8];
    rng.fill_bytes(&mut buf);
    BigUint::from_bytes_be(&buf) % bound
}

fn random_bits(rng: &mut ChaCha20Rng, bits: u32) -> u64 {
    if bits >= 64 {
        rng.next_u64()
    } else {
        rng.next_u64() & ((1u64 << bits) - 1)
    }
}

/// Draws fresh `(S, z, u, v)` until Alice produces a transcript.
pub fn new_game(profile: &Profile, seed: u64) -> GameInstance {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut aborts = 0;
    loop {
        let mut secret = alloc::vec![0u8; profile.min_secret_len.max(32)];
        rng.fill_bytes(&mut secret);
        let mut z: Nonce = [0; 32];
        rng.fill_bytes(&mut z);
        let u = random_bits(&mut rng, profile.u_bits).max(1);
        let v = random_bits(&mut rng, profile.v_bits);
        let attempt = derive_session(&secret, &z, profile).and_then(|s| alice_generate(&s, u, v).map(|m| (s, m)));
        match attempt {
            Ok((session, transcript)) => {
                return GameInstance {
                    profile: profile.clone(),
                    transcript,
                    hidden: Hidden { secret, session, v },
                    aborts,
                }
            }
            Err(ProtocolError::SecretTooShort { .. } | ProtocolError::Oscillator(_)) => {
                panic!("profile cannot produce sessions")
            }
            Err(_) => aborts += 1,
        }
    }
}

impl GameInstance {
    pub fn transcript(&self) -> &Message {
        &self.transcript
    }

    pub fn honest_s3(&self) -> &FieldElem {
        &self.transcript.s3
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    /// Sessions discarded before this one.
    pub fn aborts(&self) -> u32 {
        self.aborts
    }

    pub fn public(&self) -> PublicView<'_> {
        PublicView {
            message: &self.transcript,
            modulus: &self.profile.modulus,
            u_bits: self.profile.u_bits,
            v_bits: self.profile.v_bits,
        }
    }

    /// `{2v+1, 2u+2v+1}`, the offsets already used by the transcript.
    pub fn honest_offsets(&self) -> [BigInt; 2] {
        let d1 = BigInt::from(self.hidden.v) * 2 + 1;
        let d3 = &d1 + BigInt::from(self.transcript.u) * 2;
        [d1, d3]
    }

    fn recomputed_s0_s2(&self) -> Option<(FieldElem, FieldElem)> {
        let s = &self.hidden.session;
        Some((s.s0().ok()?, s.s2(u64::from(self.transcript.u)).ok()?))
    }

    /// Bob's verdict on an arbitrary message under this game's secret.
    pub fn verify(&self, msg: &Message) -> bool {
        bob_verify(&self.hidden.secret, msg, &self.profile).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    ForbiddenOffset,
    /// `s*` repeats a value already in the transcript.
    Replay,
    Denominator,
    HashMismatch,
    Win,
}

pub fn adjudicate_verbose(game: &GameInstance, f: &Forgery) -> Verdict {
    if game.honest_offsets().contains(&f.delta_star) {
        return Verdict::ForbiddenOffset;
    }
    let msg = &game.transcript;
    if f.s_star == msg.s1 || f.s_star == msg.s3 {
        return Verdict::Replay;
    }
    let sess = &game.hidden.session;
    let Some((s0, s2)) = game.recomputed_s0_s2() else {
        return Verdict::Denominator;
    };
    let u = u64::from(msg.u);
    let Ok(v_star) = recover_v(&s0, &msg.s1, &s2, &f.s_star, sess.t.image(), u, &sess.p) else {
        return Verdict::Denominator;
    };
    match match_lifted(sess, &v_star, &msg.s1, &f.s_star, msg.u, &msg.h_check) {
        Ok(_) => Verdict::Win,
        Err(_) => Verdict::HashMismatch,
    }
}

pub fn adjudicate(game: &GameInstance, f: &Forgery) -> bool {
    adjudicate_verbose(game, f) == Verdict::Win
}

/// Uniform `s* ∈ Z_M` and `δ* ∈ [-2^32, 2^32]`.
pub struct RandomAdversary {
    rng: ChaCha20Rng,
}

impl RandomAdversary {
    pub fn new(seed: u64) -> Self {
        RandomAdversary { rng: ChaCha20Rng::seed_from_u64(seed) }
    }
}

impl Adversary for RandomAdversary {
    fn name(&self) -> &str {
        "random"
    }

    fn forge(&mut self, view: PublicView<'_>) -> Forgery {
        let s = random_below(&mut self.rng, view.modulus.value());
        let span = (1u64 << 33) + 1;
        let delta = BigInt::from(self.rng.next_u64() % span) - BigInt::from(1u64 << 32);
        Forgery { s_star: view.modulus.elem_biguint(&s), delta_star: delta }
    }
}

/// Resubmits the transcript's `s3` under a fixed claimed offset.
pub struct ReplayAdversary {
    pub delta: BigInt,
}

impl Adversary for ReplayAdversary {
    fn name(&self) -> &str {
        "replay"
    }

    fn forge(&mut self, view: PublicView<'_>) -> Forgery {
        Forgery { s_star: view.message.s3.clone(), delta_star: self.delta.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdvantageReport {
    pub trials: u64,
    pub wins: u64,
    pub aborts: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Wilson score interval for `wins / trials` at normal quantile `z`.
pub fn wilson_interval(wins: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = wins as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z * libm::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Plays `trials` independent games (seeds `seed, seed+1, …`) against `adv`.
pub fn run_adversary<A: Adversary + ?Sized>(profile: &Profile, adv: &mut A, trials: u64, seed: u64) -> AdvantageReport {
    let mut wins = 0;
    let mut aborts = 0;
    for n in 0..trials {
        let game = new_game(profile, seed.wrapping_add(n));
        aborts += u64::from(game.aborts());
        let f = adv.forge(game.public());
        wins += u64::from(adjudicate(&game, &f));
    }
    let (ci_low, ci_high) = wilson_interval(wins, trials, Z_95);
    AdvantageReport { trials, wins, aborts, estimate: wins as f64 / trials.max(1) as f64, ci_low, ci_high }
}

pub fn run_random_adversary(profile: &Profile, trials: u64, seed: u64) -> AdvantageReport {
    let mut adv = RandomAdversary::new(seed ^ 0x5eed_a0a0);
    run_adversary(profile, &mut adv, trials, seed)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniquenessSweep {
    pub count: usize,
    pub witnesses: Vec<FieldElem>,
}

/// Every `s* ∈ Z_M` whose recovered value equals the hidden `v` mod `M`.
/// `None` when `M` is too large to sweep.
pub fn lemma1_exhaustive(game: &GameInstance) -> Option<UniquenessSweep> {
    let m = &game.profile.modulus;
    let m_small = m.value().to_u64_digits();
    if m_small.len() != 1 || m_small[0] > EXHAUSTIVE_SWEEP_LIMIT {
        return None;
    }
    let sess = &game.hidden.session;
    let msg = &game.transcript;
    let (s0, s2) = game.recomputed_s0_s2()?;
    let target = m.elem_u64(game.hidden.v);
    let u = u64::from(msg.u);
    let witnesses: Vec<FieldElem> = (0..m_small[0])
        .map(|x| m.elem_u64(x))
        .filter(|s| recover_v(&s0, &msg.s1, &s2, s, sess.t.image(), u, &sess.p).is_ok_and(|v| v == target))
        .collect();
    Some(UniquenessSweep { count: witnesses.len(), witnesses })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpliceReport {
    pub transcripts: usize,
    pub splices: u64,
    pub accepted: u64,
    pub aborted_v: u64,
}

/// Fixes `(S, z, u)`, emits up to `v_max` transcripts with distinct `v`, and
/// submits every cross-transcript splice to Bob: `s3` swapped in from another
/// transcript under either hash, and a foreign `h_check` replayed onto an
/// otherwise honest pair. A splice counts as accepted only when Bob takes it
/// and it differs from every honest transcript.
pub fn lemma2_reuse_experiment(profile: &Profile, v_max: usize, seed: u64) -> SpliceReport {
    let game = new_game(profile, seed);
    let sess = &game.hidden.session;
    let u = u64::from(game.transcript.u);
    let limit = profile.v_limit();
    let mut honest: Vec<Message> = Vec::with_capacity(v_max);
    let mut aborted_v = 0;
    let mut v = 0u64;
    while honest.len() < v_max && u128::from(v) < limit {
        match alice_generate(sess, u, v) {
            Ok(m) => honest.push(m),
            Err(_) => aborted_v += 1,
        }
        v += 1;
    }
    let mut splices = 0;
    let mut accepted = 0;
    let mut submit = |m: Message| {
        splices += 1;
        if game.verify(&m) && !honest.contains(&m) {
            accepted += 1;
        }
    };
    for (ia, a) in honest.iter().enumerate() {
        for (ib, b) in honest.iter().enumerate() {
            if ia == ib {
                continue;
            }
            for h in [a.h_check, b.h_check] {
                submit(Message { s3: b.s3.clone(), h_check: h, ..a.clone() });
            }
            submit(Message { h_check: b.h_check, ..a.clone() });
        }
    }
    SpliceReport { transcripts: honest.len(), splices, accepted, aborted_v }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FlipReport {
    pub flips: u64,
    pub accepted: u64,
    /// Flips whose bytes no longer decode (a field value at or above `M`).
    pub undecodable: u64,
    pub denominator: u64,
    pub hash: u64,
    pub range: u64,
    pub session: u64,
}

/// Submits every single-bit modification of `msg` to Bob.
pub fn bit_flip_sweep(secret: &[u8], msg: &Message, profile: &Profile) -> FlipReport {
    let bytes = msg.to_bytes();
    let mut r = FlipReport::default();
    for bit in 0..bytes.len() * 8 {
        let mut b = bytes;
        b[bit / 8] ^= 0x80 >> (bit % 8);
        r.flips += 1;
        let Ok(m) = Message::from_bytes(&b, &profile.modulus) else {
            r.undecodable += 1;
            continue;
        };
        match bob_verify(secret, &m, profile) {
            Ok(_) => r.accepted += 1,
            Err(Reject::Denominator) => r.denominator += 1,
            Err(Reject::Hash) => r.hash += 1,
            Err(Reject::Range) => r.range += 1,
            Err(Reject::Session(_)) => r.session += 1,
        }
    }
    r
}

impl GameInstance {
    pub fn bit_flip_sweep(&self) -> FlipReport {
        bit_flip_sweep(&self.hidden.secret, &self.transcript, &self.profile)
    }
}

/// Injective assignments of `m` observations into `v_count` values:
/// `v_count! / (v_count - m)!`. `None` on overflow.
pub fn matching_count(v_count: u64, m: u64) -> Option<u128> {
    if m > v_count {
        return Some(0);
    }
    (0..m).try_fold(1u128, |acc, k| acc.checked_mul(u128::from(v_count - k)))
}
