//! Tunable constants and presets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Flatness threshold ε.
    pub eps: f64,
    /// Non-Flat threshold factor δ (β(MB) > δε).
    pub delta: f64,
    /// Ball dilation M.
    pub m: f64,
    /// Route-finder dilation M′.
    pub m_prime: f64,
    /// Tree spacing J.
    pub j: usize,
    /// Initial Whitney offset k0 (auto-incremented).
    pub k0: usize,
    /// Apex level offset k1.
    pub k1: usize,
    /// Cone aperture α.
    pub alpha: f64,
    /// Route cone angle φ.
    pub phi: f64,
    /// Repair margin λ.
    pub lambda: f64,
    /// Pair search radius factor C.
    pub c: f64,
    /// Cube ball margin exponent c_Q.
    pub c_q: usize,
    /// Required segment-separation constant.
    pub a_min: f64,
    /// Finest level; derived from the input when absent.
    pub k_max: Option<usize>,
    /// Bounding-box padding for the complement net, in normalized units.
    pub bbox_pad: f64,
    /// Fail when the root cube is not flat.
    pub strict_root: bool,
    /// Skip a Non-Flat pair already joined within this stretch.
    pub redundancy_stretch: f64,
    /// Chord-ellipse factor κ preferred for Non-Flat apexes.
    pub apex_ellipse: f64,
    /// Max Δ points bridged per Flat-Bad cube.
    pub flatbad_anchor_cap: usize,
    /// Seed for verification pair sampling.
    pub seed: u64,
    /// Uniform random on-network pairs for stretch sampling.
    pub random_pairs: usize,
    /// Random pairs at log-uniform separation.
    pub local_pairs: usize,
    /// Cap on key vertices used for all-pairs stretch.
    pub key_vertices: usize,
    /// Pairs routed by the constructive route validator.
    pub route_pairs: usize,
    /// Acceptance bound on sampled stretch.
    pub stretch_bound: f64,
    /// Acceptance bound on ℋ¹(Γ̃)/ℋ¹(Γ).
    pub length_ratio_bound: f64,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            eps: 0.1,
            delta: 0.3,
            m: 3.0,
            m_prime: 2.0,
            j: 2,
            k0: 3,
            k1: 2,
            alpha: 4.0,
            phi: std::f64::consts::PI / 16.0,
            lambda: 0.05,
            c: 8.0,
            c_q: 2,
            a_min: 0.01,
            k_max: None,
            bbox_pad: 1.5,
            strict_root: false,
            redundancy_stretch: 3.0,
            apex_ellipse: 1.5,
            flatbad_anchor_cap: 8,
            seed: 0,
            random_pairs: 1500,
            local_pairs: 1500,
            key_vertices: 160,
            route_pairs: 48,
            stretch_bound: 50.0,
            length_ratio_bound: 10.0,
        }
    }
}

impl Config {
    pub fn preset(name: &str) -> Result<Config> {
        match name {
            "default" => Ok(Config::default()),
            "strict" => Ok(Config { j: 2, m: 17.0, ..Config::default() }),
            _ => Err(Error::Config(format!("unknown preset {name:?} (expected default or strict)"))),
        }
    }

    pub fn from_json(text: &str) -> Result<Config> {
        let c: Config = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    /// Applies the keys of a JSON object on top of `self`.
    pub fn with_overrides(&self, text: &str) -> Result<Config> {
        let over: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let serde_json::Value::Object(over) = over else {
            return Err(Error::Config("config file must hold a JSON object".into()));
        };
        let mut base = serde_json::to_value(self)?;
        if let serde_json::Value::Object(m) = &mut base {
            m.extend(over);
        }
        let c: Config = serde_json::from_value(base).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return bad("eps must lie in (0,1)");
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad("delta must lie in (0,1)");
        }
        if !(self.m_prime < self.m) {
            return bad("M' must be smaller than M");
        }
        if self.m < 1.0 || self.m_prime <= 0.0 {
            return bad("M must be at least 1 and M' positive");
        }
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return bad("lambda must lie in (0,1)");
        }
        if !(self.phi > 0.0 && self.phi < std::f64::consts::PI / 8.0) {
            return bad("phi must lie in (0, pi/8)");
        }
        if !(self.c > 2.0) {
            return bad("C must exceed 2");
        }
        if self.j < 1 {
            return bad("J must be at least 1");
        }
        if self.k0 < 2 {
            return bad("k0 must be at least 2");
        }
        if !(self.alpha > 0.0) {
            return bad("alpha must be positive");
        }
        if let Some(k) = self.k_max {
            if k < self.j || k > 20 {
                return bad("k_max must lie in J..=20");
            }
        }
        if !(self.redundancy_stretch >= 1.0) {
            return bad("redundancy_stretch must be at least 1");
        }
        if self.bbox_pad <= 0.0 {
            return bad("bbox_pad must be positive");
        }
        Ok(())
    }
}
