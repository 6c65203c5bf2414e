//! Flat-Good / Flat-Bad / Non-Flat labelling of cubes and Non-Flat ball detection.

use serde::{Deserialize, Serialize};

use crate::beta::BetaEngine;
use crate::config::Config;
use crate::cubes::{CubeClass, CubeTree, NodeId};
use crate::error::{Error, Result};
use crate::geom::Ball;
use crate::nets::NetHierarchy;

/// Per-cube quantities used by the stopping rule.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CubeRecord {
    /// β(MB_Q) with B_Q = B(x, 2^{-mJ}).
    pub beta_mb: f64,
    /// β(MQ), evaluated on B(x, (1 + 2M)·2^{-mJ}).
    pub beta_mq: f64,
    /// Accumulated Σβ(MQ_j)² along the branch since the last restart, including this cube.
    pub accumulator: f64,
    /// Largest single term in that sum.
    pub max_term: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Classification {
    pub records: Vec<CubeRecord>,
    pub classes: Vec<CubeClass>,
    /// β(MB) for every B ∈ ℬ_k, indexed [k][position in Δ_k].
    pub ball_beta: Vec<Vec<f64>>,
    pub root_beta: f64,
    pub root_flat: bool,
}

impl Classification {
    pub fn is_nonflat_ball(&self, k: usize, i: usize, cfg: &Config) -> bool {
        self.ball_beta[k][i] > cfg.delta * cfg.eps
    }

    pub fn count(&self, c: CubeClass) -> usize {
        self.classes.iter().filter(|x| **x == c).count()
    }
}

/// Ball used for β(MQ).
pub fn mq_ball(tree: &CubeTree, id: NodeId, m: f64) -> Ball {
    let n = tree.node(id);
    let s = tree.scale(n.level);
    Ball::new(n.center, s * (1.0 + 2.0 * m))
}

/// β values for the stopping rule, computed once per cube.
pub fn cube_betas(tree: &CubeTree, engine: &BetaEngine, cfg: &Config) -> Vec<(f64, f64)> {
    tree.nodes()
        .iter()
        .map(|n| {
            let s = tree.scale(n.level);
            (engine.beta_of_ball(n.center, s, cfg.m), engine.beta(&mq_ball(tree, n.id, cfg.m)))
        })
        .collect()
}

/// Runs the stopping-time labelling from precomputed (β(MB_Q), β(MQ)) pairs.
///
/// The accumulator restarts after the root, after each Non-Flat cube and after
/// each Flat-Bad cube; a cube is Flat-Bad when its term first pushes the sum above ε.
pub fn label(tree: &CubeTree, betas: &[(f64, f64)], cfg: &Config) -> (Vec<CubeClass>, Vec<CubeRecord>) {
    let n = tree.nodes().len();
    let mut classes = vec![CubeClass::Unclassified; n];
    let mut records: Vec<CubeRecord> =
        betas.iter().map(|&(mb, mq)| CubeRecord { beta_mb: mb, beta_mq: mq, accumulator: 0.0, max_term: 0.0 }).collect();
    let nonflat = |id: NodeId| betas[id].0 > cfg.delta * cfg.eps;
    let root = tree.root();
    classes[root] = if nonflat(root) { CubeClass::NonFlat } else { CubeClass::FlatGood };
    // (node, accumulator after parent, max term after parent)
    let mut stack: Vec<(NodeId, f64, f64)> = tree.node(root).children.iter().rev().map(|&c| (c, 0.0, 0.0)).collect();
    while let Some((id, acc, mx)) = stack.pop() {
        let (next_acc, next_mx) = if nonflat(id) {
            classes[id] = CubeClass::NonFlat;
            records[id].accumulator = 0.0;
            (0.0, 0.0)
        } else {
            let term = betas[id].1 * betas[id].1;
            let a = acc + term;
            let m = mx.max(term);
            records[id].accumulator = a;
            records[id].max_term = m;
            if a > cfg.eps {
                classes[id] = CubeClass::FlatBad;
                (0.0, 0.0)
            } else {
                classes[id] = CubeClass::FlatGood;
                (a, m)
            }
        };
        for &c in tree.node(id).children.iter().rev() {
            stack.push((c, next_acc, next_mx));
        }
    }
    (classes, records)
}

/// Classifies all cubes and evaluates β(MB) over every ball family ℬ_k.
pub fn classify(tree: &mut CubeTree, nets: &NetHierarchy, engine: &BetaEngine, cfg: &Config) -> Result<Classification> {
    let betas = cube_betas(tree, engine, cfg);
    let root_beta = betas[tree.root()].1;
    let root_flat = root_beta < cfg.eps;
    if !root_flat && cfg.strict_root {
        return Err(Error::RootNotFlat { beta: root_beta, eps: cfg.eps });
    }
    let (classes, records) = label(tree, &betas, cfg);
    for (id, c) in classes.iter().enumerate() {
        tree.set_class(id, *c);
    }
    let ball_beta = (0..=nets.k_max)
        .map(|k| {
            let r = 2f64.powi(-(k as i32));
            nets.level(k).into_iter().map(|xi| engine.beta_of_ball(xi, r, cfg.m)).collect()
        })
        .collect();
    Ok(Classification { records, classes, ball_beta, root_beta, root_flat })
}

/// Counts Flat-Bad cubes whose accumulator lies outside (ε, ε + max term].
pub fn accumulator_violations(c: &Classification, cfg: &Config) -> usize {
    c.classes
        .iter()
        .zip(&c.records)
        .filter(|(cl, _)| **cl == CubeClass::FlatBad)
        .filter(|(_, r)| !(r.accumulator > cfg.eps && r.accumulator <= cfg.eps + r.max_term + 1e-15))
        .count()
}
