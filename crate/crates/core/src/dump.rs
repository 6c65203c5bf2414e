//! Network dump: the polyline JSON of Γ̃ in input coordinates, plus the
//! labelled cube tree and bridges needed to replay the classification.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::augment::Construction;
use crate::bridge::Bridge;
use crate::classify;
use crate::config::Config;
use crate::cubes::{CubeClass, CubeNode, CubeTree};
use crate::error::{Error, Result};
use crate::geom::{Point, PolyCurve};
use crate::io::PolylineFile;
use crate::nets::Normalization;
use crate::network::{DumpEdge, EdgeOrigin, GraphDump, Network};
use crate::spatial::CurveIndex;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dump {
    pub version: String,
    /// Vertices of Γ̃ in input coordinates.
    pub vertices: Vec<Vec<f64>>,
    pub edges: Vec<[u32; 2]>,
    pub edge_origin: Vec<EdgeOrigin>,
    pub edge_bridge: Vec<Option<u32>>,
    pub on_gamma: Vec<bool>,
    /// Per edge of Γ: (parameter, vertex) split points.
    pub splits: Vec<Vec<(f64, u32)>>,
    /// Γ in input coordinates.
    pub curve: PolylineFile,
    pub normalization: Normalization,
    pub config: Config,
    pub k_max: usize,
    pub j: usize,
    pub c_q: usize,
    /// Cube tree with labels, in normalized coordinates.
    pub cubes: Vec<CubeNode>,
    /// (β(MB_Q), β(MQ)) per cube, as used by the stopping rule.
    pub cube_betas: Vec<(f64, f64)>,
    /// Bridges with provenance, in normalized coordinates.
    pub bridges: Vec<Bridge>,
}

impl Dump {
    pub fn from_construction(c: &Construction) -> Dump {
        let g = c.network.dump();
        let norm = c.normalization;
        let input = c.curve.curve().transformed(2f64.powi(-norm.exponent), Point::zero(c.curve.curve().dim()));
        Dump {
            version: env!("CARGO_PKG_VERSION").into(),
            vertices: g.vertices.iter().map(|p| norm.inverse(p).coords().to_vec()).collect(),
            edges: g.edges.iter().map(|e| [e.a, e.b]).collect(),
            edge_origin: g.edges.iter().map(|e| e.origin).collect(),
            edge_bridge: g.edges.iter().map(|e| e.bridge).collect(),
            on_gamma: g.on_gamma,
            splits: g.splits,
            curve: PolylineFile::from_curve(&input),
            normalization: norm,
            config: c.cfg.clone(),
            k_max: c.k_max,
            j: c.tree.j,
            c_q: c.tree.c_q,
            cubes: c.tree.nodes().to_vec(),
            cube_betas: c.classification.records.iter().map(|r| (r.beta_mb, r.beta_mq)).collect(),
            bridges: c.bridges.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("dump serializes")
    }

    pub fn from_json(text: &str) -> Result<Dump> {
        let d: Dump = serde_json::from_str(text).map_err(|e| Error::Input(format!("dump: {e}")))?;
        let m = d.edges.len();
        if d.edge_origin.len() != m || d.edge_bridge.len() != m {
            return Err(Error::Input("dump: edge arrays differ in length".into()));
        }
        if d.cube_betas.len() != d.cubes.len() {
            return Err(Error::Input("dump: one β pair per cube expected".into()));
        }
        Ok(d)
    }

    /// Γ in normalized coordinates.
    pub fn curve(&self) -> Result<PolyCurve> {
        let pts = self.curve.vertices.iter().map(|v| Point::try_new(v)).collect::<Result<Vec<_>>>()?;
        let c = PolyCurve::new(pts, self.curve.edges.clone().unwrap_or_default())?;
        Ok(self.normalization.apply(&c))
    }

    /// The graph part in normalized coordinates.
    pub fn graph(&self) -> Result<GraphDump> {
        let vertices = self.vertices.iter().map(|v| Point::try_new(v).map(|p| self.normalization.forward(&p))).collect::<Result<Vec<_>>>()?;
        let edges = self
            .edges
            .iter()
            .zip(&self.edge_origin)
            .zip(&self.edge_bridge)
            .map(|((&[a, b], &origin), &bridge)| DumpEdge { a, b, origin, bridge })
            .collect();
        Ok(GraphDump { vertices, on_gamma: self.on_gamma.clone(), edges, splits: self.splits.clone() })
    }

    pub fn network(&self) -> Result<Network> {
        let curve = Arc::new(CurveIndex::new(&self.curve()?));
        Network::from_dump(curve, &self.graph()?)
    }

    pub fn tree(&self) -> Result<CubeTree> {
        CubeTree::from_nodes(self.j, self.c_q, self.cubes.clone())
    }

    pub fn stored_labels(&self) -> Vec<CubeClass> {
        self.cubes.iter().map(|n| n.class).collect()
    }

    /// Labels recomputed from the stored β values.
    pub fn replay_labels(&self) -> Result<Vec<CubeClass>> {
        let tree = self.tree()?;
        Ok(classify::label(&tree, &self.cube_betas, &self.config).0)
    }
}
