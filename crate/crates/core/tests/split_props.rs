mod common;

use common::{
    assignments, brute_min, clique_family, clique_family_last_leaf, clique_family_linear_leaf,
    random_polynomial, v,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use splitreduc::io::parse;
use splitreduc::split::{
    build_split_tree, count_leaves, fold_leaves, is_desirable, walk_leaves, CostConfig, NodeKind,
    SplitLimits, TieBreak,
};
use splitreduc::{Error, Limit, Polynomial, VarId};

fn random_config(rng: &mut impl Rng) -> CostConfig {
    let tie = if rng.gen_bool(0.5) {
        TieBreak::Lowest
    } else {
        TieBreak::Seeded(rng.gen())
    };
    CostConfig::new(
        rng.gen_range(1..=10),
        rng.gen_range(1..=3),
        rng.gen_bool(0.5),
    )
    .with_tie_break(tie)
}

#[test]
fn leaves_partition_the_cube_and_keep_the_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.gen_range(1..=10);
        let terms = rng.gen_range(1..=14);
        let h = random_polynomial(&mut rng, n, terms, 5, 9);
        let cfg = random_config(&mut rng);
        let tree = build_split_tree(&h, &cfg, &SplitLimits::default()).unwrap();
        let leaves = tree.leaves();
        let vars = h.support().to_vec();
        for x in assignments(&vars) {
            let owners: Vec<_> = leaves
                .iter()
                .filter(|l| l.prefix.is_consistent_with(&x))
                .collect();
            assert_eq!(owners.len(), 1, "{h} under {cfg:?}");
            assert_eq!(
                owners[0].hamiltonian.evaluate(&x).unwrap(),
                h.evaluate(&x).unwrap()
            );
        }
        for l in &leaves {
            assert!(is_desirable(&l.hamiltonian, &cfg));
            assert_eq!(l.hamiltonian, h.restrict(&l.prefix).unwrap());
        }
        for node in tree.nodes() {
            if let NodeKind::Split { var, .. } = node.kind {
                assert!(!is_desirable(&node.hamiltonian, &cfg));
                assert!(node.hamiltonian.support().contains(&var));
            }
        }
        let leaf_min = leaves
            .iter()
            .map(|l| brute_min(&l.hamiltonian, l.hamiltonian.support()).0)
            .min()
            .unwrap();
        assert_eq!(leaf_min, brute_min(&h, &vars).0);
    }
}

#[test]
fn streaming_and_parallel_forms_agree_with_the_tree() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let n = rng.gen_range(1..=12);
        let terms = rng.gen_range(1..=16);
        let h = random_polynomial(&mut rng, n, terms, 6, 9);
        let cfg = random_config(&mut rng);
        let limits = SplitLimits::default();
        let tree = build_split_tree(&h, &cfg, &limits).unwrap();
        let mut streamed = Vec::new();
        let summary = walk_leaves(&h, &cfg, &limits, |path, leaf| {
            streamed.push((path.to_vec(), leaf.clone()));
            Ok(())
        })
        .unwrap();
        let from_tree: Vec<_> = tree
            .leaves()
            .into_iter()
            .map(|l| (l.path, l.hamiltonian))
            .collect();
        assert_eq!(streamed, from_tree);
        assert_eq!(summary, tree.summary());
        assert_eq!(count_leaves(&h, &cfg, &limits).unwrap(), summary);
        let folded = fold_leaves(
            &h,
            &cfg,
            &limits,
            |path, leaf| Ok(vec![(path.to_vec(), leaf.clone())]),
            |mut a, b| {
                a.extend(b);
                a
            },
        )
        .unwrap();
        assert_eq!(folded, from_tree);
    }
}

#[test]
fn clique_family_leaves() {
    let cfg = CostConfig::new(128, 2, false);
    for m in 4..=9usize {
        let l = (m * (m - 1) / 2) as u32;
        let h = clique_family(m);
        let tree = build_split_tree(&h, &cfg, &SplitLimits::default()).unwrap();
        let leaves = tree.leaves();
        assert_eq!(leaves.len(), l as usize - 1);
        for (i, leaf) in leaves.iter().enumerate().take(l as usize - 2) {
            // The i-th leaf fixes a_1..a_{i-1} to 1 and a_i to 0.
            let i = i as u32 + 1;
            assert_eq!(leaf.path.last(), Some(&(v(i - 1), false)));
            assert_eq!(leaf.hamiltonian, clique_family_linear_leaf(l, i));
            assert_eq!(leaf.hamiltonian.degree(), 1);
        }
        let last = leaves.last().unwrap();
        assert!(last.path.iter().all(|&(_, b)| b));
        assert_eq!(last.hamiltonian, clique_family_last_leaf(l));
    }
}

#[test]
fn constant_and_zero_inputs_are_single_leaves() {
    let cfg = CostConfig::new(1, 2, false);
    for h in [Polynomial::zero(), Polynomial::constant(7)] {
        let tree = build_split_tree(&h, &cfg, &SplitLimits::default()).unwrap();
        assert_eq!(tree.leaf_count(), 1);
        assert_eq!(tree.leaves()[0].hamiltonian, h);
    }
}

#[test]
fn limits_return_a_partial_tree() {
    let h = clique_family(6);
    let cfg = CostConfig::new(128, 2, false);
    let limited = SplitLimits {
        max_leaves: 5,
        max_depth: None,
    };
    match build_split_tree(&h, &cfg, &limited) {
        Err(Error::LimitExceeded {
            limit: Limit::MaxLeaves(5),
            partial: Some(tree),
        }) => {
            assert!(!tree.is_complete());
            assert_eq!(tree.leaf_count(), 5);
        }
        other => panic!("unexpected {other:?}"),
    }
    let shallow = SplitLimits {
        max_leaves: 100,
        max_depth: Some(3),
    };
    assert!(matches!(
        build_split_tree(&h, &cfg, &shallow),
        Err(Error::LimitExceeded {
            limit: Limit::MaxDepth(3),
            ..
        })
    ));
    assert!(matches!(
        count_leaves(&h, &cfg, &limited),
        Err(Error::LimitExceeded { .. })
    ));
    assert!(matches!(
        walk_leaves(&h, &cfg, &limited, |_, _| Ok(())),
        Err(Error::LimitExceeded { .. })
    ));
}

#[test]
fn seeded_ties_stay_sound_and_vary_the_order() {
    let h = clique_family(5);
    let cfg = CostConfig::new(128, 2, false);
    let mut first_splits = std::collections::BTreeSet::new();
    for seed in 0..16 {
        let seeded = cfg.with_tie_break(TieBreak::Seeded(seed));
        let tree = build_split_tree(&h, &seeded, &SplitLimits::default()).unwrap();
        assert_eq!(tree.leaf_count(), 9);
        if let NodeKind::Split { var, .. } = tree.root().kind {
            first_splits.insert(var);
        }
    }
    assert!(first_splits.len() > 1);
}

#[test]
fn worked_example_split_variables() {
    let (h, _) = parse("1 + x1*x2*x5 + x1*x6*x7*x8 + x3*x4*x8 - x1*x3*x4").unwrap();
    let tree = build_split_tree(&h, &CostConfig::new(8, 2, true), &SplitLimits::default()).unwrap();
    let splits: Vec<VarId> = tree
        .nodes()
        .iter()
        .filter_map(|n| match n.kind {
            NodeKind::Split { var, .. } => Some(var),
            _ => None,
        })
        .collect();
    // x1 is id 0 and x8 id 5 in first-appearance order.
    assert_eq!(splits, vec![v(0), v(5)]);
}
