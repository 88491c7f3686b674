use dvrp_core::error::Error;
use dvrp_core::generators::{gen_random, DistancePolicy};
use dvrp_core::{parse_instance, serialize_instance};
use proptest::prelude::*;

proptest! {
    #[test]
    fn round_trip(seed in any::<u64>(), n in 1usize..12, w in 1u64..50) {
        let inst = gen_random(seed, n, w, DistancePolicy::default()).unwrap();
        let text = serialize_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(serialize_instance(&back), text);
        prop_assert_eq!(back, inst);
    }
}

#[test]
fn comments_and_blank_lines() {
    let text = "# a star\n\ndvrp 1\nD 14 # bound\nroot 0\nedge 1 0 3\n\nedge 2 0 4\nterminals 1 2\n";
    let inst = parse_instance(text).unwrap();
    assert_eq!(serialize_instance(&inst), "dvrp 1\nD 14\nroot 0\nedge 1 0 3\nedge 2 0 4\nterminals 1 2\n");
}

#[test]
fn rejects_malformed_input() {
    let cases = [
        "dvrp 2\nD 1\nroot 0\nterminals\n",
        "dvrp 1\nroot 0\nterminals\n",
        "dvrp 1\nD 0\nroot 0\nterminals\n",
        "dvrp 1\nD 5\nroot 0\nedge 1 0\nterminals\n",
        "dvrp 1\nD 5\nroot 0\nedge 1 0 1\n",
        "dvrp 1\nD 5\nroot 0\nterminals 1\n",
        "dvrp 1\nD 5\nroot 0\nedge 1 2 1\nedge 2 1 1\nterminals\n",
    ];
    for text in cases {
        assert!(parse_instance(text).is_err(), "{text}");
    }
    assert!(matches!(
        parse_instance("dvrp 1\nD 5\nroot 0\nedge 1 0 -3\nterminals\n"),
        Err(Error::NegativeWeight { line: 4 })
    ));
    assert!(matches!(
        parse_instance("dvrp 1\nD 5\nroot 0\nedge 1 0 1\nedge 1 0 2\nterminals\n"),
        Err(Error::DuplicateVertex { line: 5, id: 1 })
    ));
}
