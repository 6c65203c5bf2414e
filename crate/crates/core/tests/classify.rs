use proptest::prelude::*;
use quasiconvex::classify::label;
use quasiconvex::cubes::{CubeClass, CubeTree};
use quasiconvex::nets::{normalize, NetHierarchy};
use quasiconvex::{corpus, Config};

/// Recursive restatement of the stopping rule.
fn oracle(tree: &CubeTree, betas: &[(f64, f64)], cfg: &Config) -> Vec<CubeClass> {
    fn visit(tree: &CubeTree, id: usize, acc: f64, betas: &[(f64, f64)], cfg: &Config, out: &mut Vec<CubeClass>) {
        let (mb, mq) = betas[id];
        let carry = if mb > cfg.delta * cfg.eps {
            out[id] = CubeClass::NonFlat;
            0.0
        } else if acc + mq * mq > cfg.eps {
            out[id] = CubeClass::FlatBad;
            0.0
        } else {
            out[id] = CubeClass::FlatGood;
            acc + mq * mq
        };
        for &c in &tree.node(id).children {
            visit(tree, c, carry, betas, cfg, out);
        }
    }
    let root = tree.root();
    let mut out = vec![CubeClass::Unclassified; tree.nodes().len()];
    out[root] = if betas[root].0 > cfg.delta * cfg.eps { CubeClass::NonFlat } else { CubeClass::FlatGood };
    for &c in &tree.node(root).children {
        visit(tree, c, 0.0, betas, cfg, &mut out);
    }
    out
}

fn hairpin_tree() -> CubeTree {
    let (c, _) = normalize(&corpus::hairpin(0.05)).unwrap();
    let nets = NetHierarchy::build(&c, quasiconvex::nets::default_k_max(&c)).unwrap();
    CubeTree::build(&nets, 2, 2).unwrap()
}

#[test]
fn flat_bad_fires_once_the_sum_exceeds_eps() {
    let tree = hairpin_tree();
    let cfg = Config::default();
    // constant β(MQ) = 0.2 gives terms of 0.04: the third flat cube on a branch crosses ε = 0.1
    let betas = vec![(0.0, 0.2); tree.nodes().len()];
    let (classes, records) = label(&tree, &betas, &cfg);
    for n in tree.nodes() {
        let expected = match n.level {
            0 => CubeClass::FlatGood,
            l if l % 3 == 0 => CubeClass::FlatBad,
            _ => CubeClass::FlatGood,
        };
        assert_eq!(classes[n.id], expected, "level {}", n.level);
        if classes[n.id] == CubeClass::FlatBad {
            assert!((records[n.id].accumulator - 0.12).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn labels_match_recursive_oracle(seed in 0u64..u64::MAX, scale in 0.01f64..0.5) {
        use rand::{Rng, SeedableRng};
        let tree = hairpin_tree();
        let cfg = Config::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let betas: Vec<(f64, f64)> = (0..tree.nodes().len()).map(|_| (rng.gen_range(0.0..scale * 0.2), rng.gen_range(0.0..scale))).collect();
        let (classes, records) = label(&tree, &betas, &cfg);
        prop_assert_eq!(&classes, &oracle(&tree, &betas, &cfg));
        for (c, r) in classes.iter().zip(&records) {
            if *c == CubeClass::FlatBad {
                prop_assert!(r.accumulator > cfg.eps && r.accumulator <= cfg.eps + r.max_term);
            }
        }
    }
}
