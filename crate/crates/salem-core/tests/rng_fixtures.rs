//! The generator contract: reproduce the shipped test-vector fixture
//! bit-for-bit (the fixture was produced by an independent implementation of
//! the documented SplitMix64 spec).

use salem_core::SplitMix64;
use serde_json::Value;

fn fixture() -> Value {
    let text = include_str!("fixtures/rng_vectors.json");
    serde_json::from_str(text).expect("fixture parses")
}

fn parse_hex(value: &Value) -> u64 {
    let s = value.as_str().expect("hex string");
    u64::from_str_radix(s.trim_start_matches("0x"), 16).expect("hex u64")
}

#[test]
fn streams_match_fixture() {
    let fixture = fixture();
    for stream in fixture["streams"].as_array().unwrap() {
        let state0 = parse_hex(&stream["state0"]);
        let mut rng = SplitMix64::new(state0);
        for expected in stream["outputs"].as_array().unwrap() {
            assert_eq!(rng.next_u64(), parse_hex(expected), "state0 {state0:#x}");
        }
    }
}

#[test]
fn trial_streams_match_fixture() {
    let fixture = fixture();
    for stream in fixture["trial_streams"].as_array().unwrap() {
        let master = stream["master_seed"].as_u64().unwrap();
        let trial = stream["trial"].as_u64().unwrap();
        let mut rng = SplitMix64::for_trial(master, trial);
        for expected in stream["outputs"].as_array().unwrap() {
            assert_eq!(rng.next_u64(), parse_hex(expected), "trial {trial}");
        }
    }
}

#[test]
fn atom_draws_match_fixture() {
    let fixture = fixture();
    for draw in fixture["atom_draws"].as_array().unwrap() {
        let master = draw["master_seed"].as_u64().unwrap();
        let trial = draw["trial"].as_u64().unwrap();
        let n = draw["n"].as_u64().unwrap();
        let p = draw["p"].as_u64().unwrap() as usize;
        let mut rng = SplitMix64::for_trial(master, trial);
        let atoms: Vec<Vec<u64>> = (0..p).map(|_| vec![rng.next_below(n)]).collect();
        let expected: Vec<Vec<u64>> = draw["atoms"]
            .as_array()
            .unwrap()
            .iter()
            .map(|a| {
                a.as_array()
                    .unwrap()
                    .iter()
                    .map(|c| c.as_u64().unwrap())
                    .collect()
            })
            .collect();
        assert_eq!(atoms, expected, "trial {trial}");
    }
}
