use quasiconvex::cubes::CubeTree;
use quasiconvex::geom::Point;
use quasiconvex::nets::{normalize, NetHierarchy};
use quasiconvex::{corpus, Config};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tree_for(name: &str) -> (NetHierarchy, CubeTree) {
    let cfg = Config::default();
    let (c, _) = normalize(&corpus::by_name(name).unwrap()).unwrap();
    let nets = NetHierarchy::build(&c, quasiconvex::nets::default_k_max(&c)).unwrap();
    let tree = CubeTree::build(&nets, cfg.j, cfg.c_q).unwrap();
    (nets, tree)
}

#[test]
fn audit_is_clean_on_corpus_except_spiral() {
    for (name, _) in corpus::standard() {
        if name == "spiral-3turn" {
            continue;
        }
        let (nets, tree) = tree_for(&name);
        let a = tree.audit(&nets, &nets.samples.points);
        assert!(a.ok(), "{name}: {a:?}");
        assert!(a.max_extent_ratio <= a.outer_bound + 1e-12, "{name}");
    }
}

#[test]
fn every_non_root_has_a_coarser_parent() {
    let (_, tree) = tree_for("hairpin-0.05");
    for n in tree.nodes() {
        match n.parent {
            None => assert_eq!(n.id, tree.root()),
            Some(p) => {
                assert_eq!(tree.node(p).level + 1, n.level);
                assert!(tree.node(p).children.contains(&n.id));
            }
        }
    }
}

#[test]
fn open_cubes_containing_a_point_form_one_chain() {
    for name in ["hairpin-0.05", "circle-256", "zigzag-8"] {
        let (nets, tree) = tree_for(name);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let samples = &nets.samples.points;
        for _ in 0..400 {
            let s = samples[rng.gen_range(0..samples.len())];
            let r = 2f64.powi(-rng.gen_range(1..10));
            let p = s + Point::xy(rng.gen_range(-r..r), rng.gen_range(-r..r));
            let mut prev: Option<usize> = None;
            for m in 0..=tree.depth() {
                let hits = tree.containing_at_level(m, &p, true);
                assert!(hits.len() <= 1, "{name}: {} open cubes of level {m} hold {p:?}", hits.len());
                if let (Some(&h), Some(q)) = (hits.first(), prev) {
                    assert_eq!(tree.ancestor(h, m - 1), Some(q), "{name}: broken chain at level {m}");
                }
                prev = hits.first().copied();
                if prev.is_none() {
                    break;
                }
            }
        }
    }
}

#[test]
fn dumped_tree_rebuilds_identically() {
    let (_, tree) = tree_for("circle-256");
    let text = serde_json::to_string(tree.nodes()).unwrap();
    let nodes = serde_json::from_str(&text).unwrap();
    let again = CubeTree::from_nodes(tree.j, tree.c_q, nodes).unwrap();
    assert_eq!(again.nodes(), tree.nodes());
    assert_eq!(again.depth(), tree.depth());
}
