//! End-to-end construction of the augmented network Γ̃.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::beta::BetaEngine;
use crate::bridge::{self, Bridge, BridgeStats};
use crate::classify::{self, Classification};
use crate::config::Config;
use crate::cubes::{CubeClass, CubeTree};
use crate::error::{Error, Result};
use crate::geom::PolyCurve;
use crate::nets::{self, NetHierarchy, Normalization, WhitneyNet};
use crate::network::{EdgeOrigin, Network};
use crate::spatial::CurveIndex;

/// Everything produced while building Γ̃, in normalized coordinates.
#[derive(Debug)]
pub struct Construction {
    pub cfg: Config,
    pub normalization: Normalization,
    pub curve: Arc<CurveIndex>,
    pub k_max: usize,
    pub nets: NetHierarchy,
    pub whitney: WhitneyNet,
    pub k0_tried: Vec<usize>,
    pub tree: CubeTree,
    pub engine: BetaEngine,
    pub classification: Classification,
    pub bridges: Vec<Bridge>,
    pub stats: BridgeStats,
    pub network: Network,
    pub crossings: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LengthReport {
    /// ℋ¹(Γ).
    pub gamma: f64,
    /// Σ ℓ(bridge) over emitted bridges.
    pub bridge_sum: f64,
    /// ℋ¹ of the union of bridges (shared edges counted once).
    pub bridge_union: f64,
    /// ℋ¹(Γ̃).
    pub total: f64,
    pub ratio: f64,
    /// |Γ part of the network − ℋ¹(Γ)|.
    pub gamma_defect: f64,
}

/// Builds nets, cubes and bridges for `input` and assembles Γ̃.
pub fn construct(input: &PolyCurve, cfg: &Config) -> Result<Construction> {
    cfg.validate()?;
    let (curve, normalization) = nets::normalize(input).map_err(|e| e.at("normalize"))?;
    let k_max = cfg.k_max.unwrap_or_else(|| nets::default_k_max(&curve)).max(1);
    let nets = NetHierarchy::build(&curve, k_max).map_err(|e| e.at("nets"))?;
    let index = Arc::new(CurveIndex::new(&curve));
    let (whitney, k0_tried) = WhitneyNet::select_k0(index.clone(), cfg.k0, k_max, cfg.bbox_pad);
    let mut tree = CubeTree::build(&nets, cfg.j, cfg.c_q).map_err(|e| e.at("cubes"))?;
    let engine = BetaEngine::new(nets.samples.clone());
    let classification = classify::classify(&mut tree, &nets, &engine, cfg).map_err(|e| e.at("classify"))?;

    let mut network = Network::new(index.clone());
    let mut stats = BridgeStats::default();
    let mut next_id = 0u32;
    let mut bridges = Vec::new();
    for id in 0..tree.nodes().len() {
        if tree.node(id).class != CubeClass::FlatBad {
            continue;
        }
        stats.flatbad_cubes += 1;
        let bs = bridge::build_flatbad_bridge(&tree, id, &nets, &whitney, cfg, &mut stats, &mut next_id).map_err(|e| e.at("bridge"))?;
        for b in &bs {
            bridge::insert_bridge(&mut network, b);
        }
        bridges.extend(bs);
    }
    let nf = bridge::build_nonflat_bridges(&nets, &whitney, &engine, &classification, cfg, &mut network, &mut stats, &mut next_id)
        .map_err(|e| e.at("bridge"))?;
    bridges.extend(nf);

    let crossings = assemble(&mut network, &bridges).map_err(|e| e.at("assemble"))?;
    Ok(Construction {
        cfg: cfg.clone(),
        normalization,
        curve: index,
        k_max,
        nets,
        whitney,
        k0_tried,
        tree,
        engine,
        classification,
        bridges,
        stats,
        network,
        crossings,
    })
}

/// Finalizes the merged graph: resolves bridge crossings, checks that bridges
/// touch Γ only at anchors and that the result is connected.
pub fn assemble(network: &mut Network, bridges: &[Bridge]) -> Result<usize> {
    let curve = network.curve().clone();
    let tol = 1e-12 * curve.scale();
    for b in bridges {
        let c = bridge::curve_clearance(b, &curve);
        if c <= tol {
            return Err(Error::BridgeMeetsCurve(c));
        }
    }
    let crossings = network.resolve_crossings();
    if !network.is_connected() {
        return Err(Error::NetworkDisconnected);
    }
    network.build_locator();
    Ok(crossings)
}

/// Length accounting for Γ̃.
pub fn length_report(c: &Construction) -> LengthReport {
    let gamma = c.curve.curve().length();
    let (g_net, union) = c.network.lengths();
    let bridge_sum: f64 = c.bridges.iter().map(|b| b.length()).fold(0.0, |a, b| a + b);
    let total = gamma + union;
    LengthReport { gamma, bridge_sum, bridge_union: union, total, ratio: total / gamma, gamma_defect: (g_net - gamma).abs() }
}

impl Construction {
    /// Number of alive network edges of each origin.
    pub fn edge_counts(&self) -> (usize, usize) {
        let mut o = 0;
        let mut b = 0;
        for (_, e) in self.network.alive_edges() {
            match e.origin {
                EdgeOrigin::Original => o += 1,
                EdgeOrigin::Bridge => b += 1,
            }
        }
        (o, b)
    }
}
