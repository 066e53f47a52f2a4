//! Keys compared bytewise must agree with the reference comparator.

use std::cmp::Ordering;

use nextify::gen::{random_pair, random_tree, TreeConfig};
use nextify::model::push_inv_to_leaves;
use nextify::{compare, compare_keys, Encoder, MaxLen, Mode, Operator, OrderNode};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[path = "support/size_oracle.rs"]
mod size_oracle;

use size_oracle::data_bytes;

struct Trial {
    agree: usize,
    equal_pairs: usize,
}

fn run_trials(seed: u64, trees: usize, pairs_per_tree: usize) -> Trial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let config = TreeConfig::default();
    let mut trial = Trial {
        agree: 0,
        equal_pairs: 0,
    };
    for _ in 0..trees {
        let tree = random_tree(&mut rng, &config);
        let encoder = Encoder::new(&tree, Mode::Padded).unwrap();
        for _ in 0..pairs_per_tree {
            let (x, y) = random_pair(&mut rng, &tree);
            let expected = compare(&tree, &x, &y).unwrap();
            let (kx, ky) = (encoder.encode(&x).unwrap(), encoder.encode(&y).unwrap());
            let got = compare_keys(kx.as_bytes(), ky.as_bytes())
                .unwrap_or_else(|e| panic!("{e}\ntree {tree:?}\nx {x:?}\ny {y:?}\n{kx:?}\n{ky:?}"));
            assert_eq!(
                got, expected,
                "\ntree {tree:?}\nx {x:?}\ny {y:?}\n{kx:?}\n{ky:?}"
            );
            assert_eq!(
                kx.len(),
                3 * data_bytes(&tree, &x),
                "size law\ntree {tree:?}\nx {x:?}"
            );
            if expected == Ordering::Equal {
                trial.equal_pairs += 1;
                assert_eq!(kx, ky);
            }
            trial.agree += 1;
        }
    }
    trial
}

#[test]
fn random_trees_agree_with_oracle() {
    let trial = run_trials(0x5eed, 2_000, 10);
    assert_eq!(trial.agree, 20_000);
    assert!(
        trial.equal_pairs > 500,
        "too few equal pairs: {}",
        trial.equal_pairs
    );
}

#[test]
fn pushing_inv_keeps_the_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..1_000 {
        let tree = random_tree(&mut rng, &TreeConfig::default());
        let pushed = push_inv_to_leaves(&tree);
        assert_eq!(push_inv_to_leaves(&pushed), pushed);
        for _ in 0..5 {
            let (x, y) = random_pair(&mut rng, &tree);
            assert_eq!(
                compare(&tree, &x, &y).unwrap(),
                compare(&pushed, &x, &y).unwrap()
            );
            assert_eq!(
                compare(&tree.clone().inv(), &x, &y).unwrap(),
                compare(&tree, &x, &y).unwrap().reverse()
            );
        }
    }
}

#[test]
fn fixed_length_operators_coincide() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let item = random_tree(
            &mut rng,
            &TreeConfig {
                max_depth: 2,
                ..Default::default()
            },
        );
        let n = rand::Rng::random_range(&mut rng, 0..4u64);
        let make = |op| OrderNode::seq(op, n, MaxLen::Finite(n + 1), vec![], vec![item.clone()]);
        let trees: Vec<OrderNode> = [
            Operator::Lex,
            Operator::ContreLex,
            Operator::Hierar,
            Operator::ContreHierar,
        ]
        .into_iter()
        .map(make)
        .collect();
        for _ in 0..5 {
            let (x, y) = random_pair(&mut rng, &trees[0]);
            let first = compare(&trees[0], &x, &y).unwrap();
            for tree in &trees[1..] {
                assert_eq!(compare(tree, &x, &y).unwrap(), first);
            }
        }
    }
}

#[test]
fn contre_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..500 {
        let OrderNode::Seq(seq) = random_tree(&mut rng, &TreeConfig::default()) else {
            continue;
        };
        let (lex_like, contre) = match seq.op {
            Operator::ContreLex => (Operator::Lex, seq.clone()),
            Operator::ContreHierar => (Operator::Hierar, seq.clone()),
            _ => continue,
        };
        let mirrored = OrderNode::seq(
            lex_like,
            contre.min_len,
            contre.max_len,
            contre.prelude.iter().cloned().map(OrderNode::inv).collect(),
            contre.period.iter().cloned().map(OrderNode::inv).collect(),
        );
        let contre = OrderNode::Seq(contre);
        for _ in 0..5 {
            let (x, y) = random_pair(&mut rng, &contre);
            assert_eq!(
                compare(&contre, &x, &y).unwrap(),
                compare(&mirrored, &x, &y).unwrap().reverse()
            );
        }
    }
}

#[test]
fn packed_and_padded_agree_on_fixed_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 300 {
        let tree = random_tree(&mut rng, &TreeConfig::default());
        let Ok(packed) = Encoder::new(&tree, Mode::Packed) else {
            continue;
        };
        let padded = Encoder::new(&tree, Mode::Padded).unwrap();
        checked += 1;
        for _ in 0..10 {
            let (x, y) = random_pair(&mut rng, &tree);
            let a = packed.encode(&x).unwrap().cmp(&packed.encode(&y).unwrap());
            let b = padded.encode(&x).unwrap().cmp(&padded.encode(&y).unwrap());
            assert_eq!(a, b);
            assert!(packed.encode(&x).unwrap().len() <= packed.packed_width().unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_agreement_for_any_seed(seed in any::<u64>()) {
        run_trials(seed, 20, 10);
    }

    #[test]
    fn comparator_is_antisymmetric(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = random_tree(&mut rng, &TreeConfig::default());
        for _ in 0..10 {
            let (x, y) = random_pair(&mut rng, &tree);
            prop_assert_eq!(compare(&tree, &x, &y).unwrap(), compare(&tree, &y, &x).unwrap().reverse());
        }
    }
}
