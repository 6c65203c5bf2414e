//! End-to-end pipeline: construction, verification and the JSON report.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::augment::{self, Construction, LengthReport};
use crate::beta::{compute_beta_sum, TstFunctional};
use crate::bridge::{self, BridgeAudit, BridgeStats, SeparationReport};
use crate::classify;
use crate::config::Config;
use crate::cubes::{CubeAudit, CubeClass};
use crate::error::Result;
use crate::dump::Dump;
use crate::geom::{Point, PolyCurve, MAX_DIM};
use crate::nets::{NetAudit, WhitneyAudit};
use crate::network::{EdgeOrigin, GraphDump, Network, Workspace};
use crate::route::{self, CaseCounts, CubeSumReport, PairPlan, StretchReport};

/// Levels of 𝒩 materialized by the Whitney audit.
pub const WHITNEY_AUDIT_LEVELS: usize = 3;
pub const WHITNEY_COVER_SAMPLES: usize = 1000;
/// Random points near Γ added to the dense samples in the cube disjointness and nesting audit.
pub const CUBE_AUDIT_POINTS: usize = 10_000;
/// Bridge vertices sampled for the reduction-to-Γ measurement.
pub const REDUCTION_SAMPLES: usize = 2000;
/// Relative tolerance for comparisons against the graph oracle.
pub const ORACLE_TOL: f64 = 1e-9;
/// Bound on β_Γ/ℋ¹(Γ).
pub const TST_RATIO_BOUND: f64 = 50.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputSummary {
    pub source: String,
    pub dim: usize,
    pub vertices: usize,
    pub edges: usize,
    /// Factor applied to input coordinates (a power of two).
    pub scale: f64,
    /// ℋ¹(Γ) in input units.
    pub length_input_units: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubeSummary {
    pub total: usize,
    pub depth: usize,
    pub flat_good: usize,
    pub flat_bad: usize,
    pub non_flat: usize,
    pub root_beta: f64,
    pub root_flat: bool,
    pub accumulator_violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureAudit {
    pub nets: NetAuditSummary,
    pub whitney: WhitneyAudit,
    pub cubes: CubeAudit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetAuditSummary {
    pub separation: usize,
    pub covering: usize,
    pub nesting: usize,
    pub root_singleton: bool,
}

impl From<NetAudit> for NetAuditSummary {
    fn from(a: NetAudit) -> Self {
        NetAuditSummary { separation: a.separation, covering: a.covering, nesting: a.nesting, root_singleton: a.root_singleton }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BridgeSection {
    pub count: usize,
    pub stats: BridgeStats,
    pub audit: BridgeAudit,
    pub separation: SeparationReport,
    pub crossings: usize,
    pub network_vertices: usize,
    pub original_edges: usize,
    pub bridge_edges: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RouteSection {
    pub pairs: usize,
    pub fallbacks: usize,
    /// max ℓ(route)/|x−y| over routes without fallback.
    pub worst_ratio: f64,
    /// min (ℓ(route) − oracle)/|x−y|.
    pub oracle_gap: f64,
    pub sigma_monotone: bool,
    pub c1: f64,
    pub cases: CaseCounts,
    pub cube_sum: CubeSumReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionSection {
    pub samples: usize,
    /// max ℓ(path to Γ)/dist(p, Γ).
    pub max_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Invariant {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Flags {
    pub skips: usize,
    pub fallbacks: usize,
    pub root_not_flat: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub input: InputSummary,
    pub config: Config,
    pub seed: u64,
    pub k_max: usize,
    pub k0: usize,
    pub k0_tried: Vec<usize>,
    pub lengths: LengthReport,
    pub stretch: StretchReport,
    pub raw_stretch: StretchReport,
    pub cubes: CubeSummary,
    pub beta_functional: TstFunctional,
    pub structure: StructureAudit,
    pub bridges: BridgeSection,
    pub routes: RouteSection,
    pub reduction: ReductionSection,
    pub invariants: Vec<Invariant>,
    pub flags: Flags,
    pub passed: bool,
}

impl Report {
    pub fn failures(&self) -> Vec<&Invariant> {
        self.invariants.iter().filter(|i| !i.passed).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn le(name: &str, value: f64, bound: f64) -> Invariant {
    Invariant { name: name.into(), passed: value <= bound, value, bound }
}

fn ge(name: &str, value: f64, bound: f64) -> Invariant {
    Invariant { name: name.into(), passed: value >= bound, value, bound }
}

pub fn pair_plan(cfg: &Config, k_max: usize) -> PairPlan {
    PairPlan {
        key_cap: cfg.key_vertices,
        random: cfg.random_pairs,
        local: cfg.local_pairs,
        min_radius: 2f64.powi(-(k_max as i32) - 2),
    }
}

/// Stretch of Γ̃ and of Γ alone under the same sampling plan.
pub fn stretch_pair(c: &Construction, seed: u64) -> Result<(StretchReport, StretchReport)> {
    let plan = pair_plan(&c.cfg, c.k_max);
    let key = route::key_vertices(&c.network, &c.bridges);
    let aug = route::measure_stretch(&c.network, &key, &plan, seed)?;
    let mut raw = Network::new(c.curve.clone());
    raw.build_locator();
    let rkey = route::key_vertices(&raw, &[]);
    let raw_st = route::measure_stretch(&raw, &rkey, &plan, seed)?;
    Ok((aug, raw_st))
}

pub fn route_section(c: &Construction, seed: u64) -> Result<RouteSection> {
    let mut ws = Workspace::new();
    let pairs = route::route_pairs(c, c.cfg.route_pairs, seed);
    let mut s = RouteSection {
        pairs: pairs.len(),
        fallbacks: 0,
        worst_ratio: 0.0,
        oracle_gap: f64::INFINITY,
        sigma_monotone: true,
        c1: 0.0,
        cases: CaseCounts::default(),
        cube_sum: route::cube_sum_bound(c, &pairs),
    };
    for (x, y) in &pairs {
        let r = route::route(c, &mut ws, x, y)?;
        let d = r.euclid();
        if r.used_fallback() {
            s.fallbacks += 1;
        } else {
            s.worst_ratio = s.worst_ratio.max(r.length / d);
        }
        s.oracle_gap = s.oracle_gap.min((r.length - r.oracle) / d);
        s.sigma_monotone &= r.sigma_monotone();
        s.c1 = s.c1.max(r.c1());
        let k = &mut s.cases;
        k.crossing += r.cases.crossing;
        k.flat += r.cases.flat;
        k.cone_flat += r.cases.cone_flat;
        k.cone_nonflat += r.cases.cone_nonflat;
        k.closure += r.cases.closure;
        k.fallback += r.cases.fallback;
    }
    if pairs.is_empty() {
        s.oracle_gap = 0.0;
    }
    Ok(s)
}

pub fn reduction_section(c: &Construction) -> Result<ReductionSection> {
    let mut ws = Workspace::new();
    let pts: Vec<_> = c
        .bridges
        .iter()
        .flat_map(|b| b.path.vertices.iter().zip(&b.levels).filter(|(_, l)| l.is_some()).map(|(p, _)| *p))
        .collect();
    let step = (pts.len() / REDUCTION_SAMPLES).max(1);
    let mut s = ReductionSection { samples: 0, max_ratio: 0.0 };
    for p in pts.iter().step_by(step) {
        let (_, path) = route::reduce_to_gamma(&c.network, &mut ws, p)?;
        s.samples += 1;
        s.max_ratio = s.max_ratio.max(path.length() / c.curve.dist(p));
    }
    Ok(s)
}

/// Points at random offsets from Γ-samples, at random dyadic scales, kept
/// when they fall inside the root's outer ball.
pub fn cube_probe_points(c: &Construction, n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = &c.nets.samples.points;
    let d = c.curve.curve().dim();
    let root = c.tree.node(c.tree.root()).center;
    let mut out = Vec::with_capacity(n);
    while out.len() < n && !samples.is_empty() {
        let base = samples[rng.gen_range(0..samples.len())];
        let scale = c.tree.scale(rng.gen_range(0..=c.tree.depth()));
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let q = base + Point::new(&v) * scale;
        if q.dist(&root) < c.tree.outer_radius(0) {
            out.push(q);
        }
    }
    out
}

pub fn structure_audit(c: &Construction) -> StructureAudit {
    let mut pts = c.nets.samples.points.clone();
    pts.extend(cube_probe_points(c, CUBE_AUDIT_POINTS, c.cfg.seed));
    StructureAudit {
        nets: c.nets.audit().into(),
        whitney: c.whitney.audit(WHITNEY_AUDIT_LEVELS, WHITNEY_COVER_SAMPLES, c.cfg.seed),
        cubes: c.tree.audit(&c.nets, &pts),
    }
}

/// Runs every audit on a finished construction.
pub fn verify(c: &Construction, source: &str, input: &PolyCurve, seed: u64) -> Result<Report> {
    let cfg = &c.cfg;
    let lengths = augment::length_report(c);
    let (stretch, raw_stretch) = stretch_pair(c, seed)?;
    let cl = &c.classification;
    let cubes = CubeSummary {
        total: c.tree.nodes().len(),
        depth: c.tree.depth(),
        flat_good: cl.count(CubeClass::FlatGood),
        flat_bad: cl.count(CubeClass::FlatBad),
        non_flat: cl.count(CubeClass::NonFlat),
        root_beta: cl.root_beta,
        root_flat: cl.root_flat,
        accumulator_violations: classify::accumulator_violations(cl, cfg),
    };
    let beta_functional = compute_beta_sum(&c.nets, &c.engine, c.curve.curve().diameter(), cfg.m);
    let structure = structure_audit(c);
    let mut audit = BridgeAudit::default();
    for b in &c.bridges {
        audit.merge(&bridge::audit_bridge(b, &c.whitney, cfg)?);
    }
    let (oe, be) = c.edge_counts();
    let bridges = BridgeSection {
        count: c.bridges.len(),
        stats: c.stats.clone(),
        audit,
        separation: bridge::segment_separation(&c.bridges),
        crossings: c.crossings,
        network_vertices: c.network.vertex_count(),
        original_edges: oe,
        bridge_edges: be,
    };
    let routes = route_section(c, seed)?;
    let reduction = reduction_section(c)?;

    let gamma_len = lengths.gamma;
    let tst_ratio = beta_functional.total / gamma_len;
    let s = &structure;
    let net_v = s.nets.separation + s.nets.covering + s.nets.nesting + usize::from(!s.nets.root_singleton);
    let wh_v = s.whitney.annulus + s.whitney.separation + s.whitney.locality + s.whitney.covering;
    let cube_v = s.cubes.parent_distance + s.cubes.covering + s.cubes.disjointness + s.cubes.sandwich + s.cubes.nesting;
    let invariants = vec![
        le("length_ratio", lengths.ratio, cfg.length_ratio_bound),
        le("gamma_preserved", lengths.gamma_defect, 1e-9 * gamma_len),
        le("stretch", stretch.max, cfg.stretch_bound),
        le("stretch_at_least_one", stretch.below_one as f64, 0.0),
        le("net_structure", net_v as f64, 0.0),
        le("whitney_structure", wh_v as f64, 0.0),
        le("cube_structure", cube_v as f64, 0.0),
        le("accumulator_window", cubes.accumulator_violations as f64, 0.0),
        le("bridge_audit", bridges.audit.violations() as f64, 0.0),
        ge("segment_separation", bridges.separation.a, cfg.a_min),
        le("bridge_skips", bridges.stats.skips as f64, 0.0),
        le("route_bound", routes.worst_ratio, cfg.stretch_bound),
        ge("route_vs_oracle", routes.oracle_gap, -ORACLE_TOL),
        ge("sigma_monotone", f64::from(u8::from(routes.sigma_monotone)), 1.0),
        ge("tst_lower_bound", beta_functional.total, beta_functional.diameter),
        le("tst_ratio", tst_ratio, TST_RATIO_BOUND),
    ];
    let passed = invariants.iter().all(|i| i.passed);
    let norm = &c.normalization;
    Ok(Report {
        version: env!("CARGO_PKG_VERSION").into(),
        input: InputSummary {
            source: source.into(),
            dim: input.dim(),
            vertices: input.vertices().len(),
            edges: input.edges().len(),
            scale: norm.scale(),
            length_input_units: norm.invert_length(gamma_len),
        },
        config: cfg.clone(),
        seed,
        k_max: c.k_max,
        k0: c.whitney.k0(),
        k0_tried: c.k0_tried.clone(),
        lengths,
        stretch,
        raw_stretch,
        cubes,
        beta_functional,
        structure,
        flags: Flags { skips: bridges.stats.skips, fallbacks: routes.fallbacks, root_not_flat: !cl.root_flat },
        bridges,
        routes,
        reduction,
        invariants,
        passed,
    })
}

/// Construction followed by verification.
pub fn run_pipeline(input: &PolyCurve, source: &str, cfg: &Config, seed: u64) -> Result<(Construction, Report)> {
    let c = augment::construct(input, cfg)?;
    let r = verify(&c, source, input, seed).map_err(|e| e.at("verify"))?;
    Ok((c, r))
}

/// Checks run on a reloaded dump.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DumpReport {
    pub version: String,
    pub seed: u64,
    pub vertices: usize,
    pub edges: usize,
    pub bridges: usize,
    pub cubes: usize,
    pub length_ratio: f64,
    pub stretch: StretchReport,
    pub invariants: Vec<Invariant>,
    pub passed: bool,
}

impl DumpReport {
    pub fn failures(&self) -> Vec<&Invariant> {
        self.invariants.iter().filter(|i| !i.passed).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn edge_multiset(g: &GraphDump) -> Vec<([u64; MAX_DIM], [u64; MAX_DIM], EdgeOrigin, Option<u32>)> {
    let mut v: Vec<_> = g
        .edges
        .iter()
        .map(|e| {
            let (a, b) = (g.vertices[e.a as usize].key(), g.vertices[e.b as usize].key());
            (a.min(b), a.max(b), e.origin, e.bridge)
        })
        .collect();
    v.sort_unstable_by(|x, y| (x.0, x.1, x.3).cmp(&(y.0, y.1, y.3)).then((x.2 as u8).cmp(&(y.2 as u8))));
    v
}

fn vertex_multiset(g: &GraphDump) -> Vec<[u64; MAX_DIM]> {
    let mut v: Vec<_> = g.vertices.iter().map(|p| p.key()).collect();
    v.sort_unstable();
    v
}

/// Reloads Γ̃ from a dump and re-measures it: graph round trip, label replay,
/// accumulator window, length ratio and sampled stretch.
pub fn verify_dump(d: &Dump, seed: u64) -> Result<DumpReport> {
    let cfg = &d.config;
    let net = d.network()?;
    let stored = d.graph()?;
    let again = net.dump();
    let same_graph = vertex_multiset(&stored) == vertex_multiset(&again) && edge_multiset(&stored) == edge_multiset(&again);
    let replay = d.replay_labels()?;
    let label_mismatches = replay.iter().zip(d.stored_labels()).filter(|(a, b)| **a != *b).count();
    let tree = d.tree()?;
    let (_, records) = classify::label(&tree, &d.cube_betas, cfg);
    let window = records
        .iter()
        .zip(&replay)
        .filter(|(_, c)| **c == CubeClass::FlatBad)
        .filter(|(r, _)| !(r.accumulator > cfg.eps && r.accumulator <= cfg.eps + r.max_term + 1e-15))
        .count();
    let (gamma, union) = net.lengths();
    let length_ratio = (gamma + union) / gamma;
    let key = route::key_vertices(&net, &d.bridges);
    let stretch = route::measure_stretch(&net, &key, &pair_plan(cfg, d.k_max), seed)?;
    let invariants = vec![
        ge("graph_round_trip", f64::from(u8::from(same_graph)), 1.0),
        le("label_replay", label_mismatches as f64, 0.0),
        le("accumulator_window", window as f64, 0.0),
        le("length_ratio", length_ratio, cfg.length_ratio_bound),
        le("stretch", stretch.max, cfg.stretch_bound),
        le("stretch_at_least_one", stretch.below_one as f64, 0.0),
    ];
    let passed = invariants.iter().all(|i| i.passed);
    Ok(DumpReport {
        version: env!("CARGO_PKG_VERSION").into(),
        seed,
        vertices: stored.vertices.len(),
        edges: stored.edges.len(),
        bridges: d.bridges.len(),
        cubes: d.cubes.len(),
        length_ratio,
        stretch,
        invariants,
        passed,
    })
}
