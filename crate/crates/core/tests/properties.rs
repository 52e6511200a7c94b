use ibc_core::grid::EvalPoint;
use ibc_core::invariant::{eval_invariant, expected_constant, recover_v, TupleSource};
use ibc_core::modmath::Modulus;
use ibc_core::oscillator::{OscMode, OscPrf};
use ibc_core::protocol::{alice_generate, bob_verify, derive_session, Message, Profile};
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

fn prf(k: u64, c: u64) -> OscPrf {
    let m = Modulus::from_u64(257).unwrap();
    OscPrf::new([42; 32], BigUint::from(k), BigUint::from(c), m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn oscillator_antiperiod_and_modes(k in 2u64..40, c in 2u64..40, j in -100_000i64..100_000) {
        let on_demand = OscMode::OnDemand(prf(k, c));
        let table = OscMode::Table(prf(k, c).to_table().unwrap());
        let p = (k * c) as i64;
        let j = BigInt::from(j);
        for osc in [&on_demand, &table] {
            let x = osc.eval_index(&j);
            prop_assert_eq!(osc.eval_index(&(&j + p)), -x.clone());
            prop_assert_eq!(osc.eval_index(&(&j + 2 * p)), x);
        }
        prop_assert_eq!(on_demand.eval_index(&j), table.eval_index(&j));
    }

    #[test]
    fn odd_offsets_cancel(k in 2u64..30, c in 2u64..30, n in -5000i64..5000, v in 0u64..500) {
        let m = Modulus::from_u64(257).unwrap();
        let osc = OscMode::OnDemand(prf(k, c));
        let t = EvalPoint::new(BigInt::from(n), BigUint::from(k), &m).unwrap();
        let far = t.shifted_u64(2 * v + 1);
        prop_assert!((osc.eval_at(&t) + osc.eval_at(&far)).is_zero());
    }

    #[test]
    fn honest_sessions_round_trip(seed in any::<[u8; 32]>(), u in 1u64..(1 << 16), v in 0u64..(1 << 16)) {
        let prof = Profile::toy();
        let secret = b"property secret material";
        let Ok(sess) = derive_session(secret, &seed, &prof) else { return Ok(()) };
        let Ok(msg) = alice_generate(&sess, u, v) else { return Ok(()) };
        let tu = sess.tuple(u, v).unwrap();
        prop_assert_eq!(eval_invariant(&tu).unwrap(), expected_constant(&sess.p, u).unwrap());
        let got = recover_v(tu.s0(), tu.s1(), tu.s2(), tu.s3(), &tu.t, u, &sess.p).unwrap();
        prop_assert_eq!(got, prof.modulus.elem_u64(v));
        prop_assert_eq!(bob_verify(secret, &msg, &prof), Ok(v));
    }

    #[test]
    fn wire_round_trip(s1 in 0u64..257, s3 in 0u64..257, u in any::<u32>(), z in any::<[u8; 32]>(), h in any::<[u8; 32]>()) {
        let m = Modulus::from_u64(257).unwrap();
        let msg = Message { s1: m.elem_u64(s1), s3: m.elem_u64(s3), u, z, h_check: h };
        let bytes = msg.to_bytes();
        let back = Message::from_bytes(&bytes, &m).unwrap();
        prop_assert_eq!(back.to_bytes(), bytes);
        prop_assert_eq!(back, msg);
    }
}
