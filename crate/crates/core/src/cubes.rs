//! Christ-type cubes over ∪_k Δ_{kJ}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Ball, Point};
use crate::nets::NetHierarchy;
use crate::spatial::PointGrid;

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CubeClass {
    Unclassified,
    FlatGood,
    FlatBad,
    NonFlat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubeNode {
    pub id: NodeId,
    pub center: Point,
    /// Tree level m; the cube lives at scale 2^{-mJ}.
    pub level: usize,
    /// Position of the center in Δ_{mJ}.
    pub net_index: usize,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    pub class: CubeClass,
}

#[derive(Clone, Debug)]
pub struct CubeTree {
    pub j: usize,
    pub c_q: usize,
    nodes: Vec<CubeNode>,
    levels: Vec<Vec<NodeId>>,
    grids: Vec<PointGrid>,
}

impl CubeTree {
    pub fn build(nets: &NetHierarchy, j: usize, c_q: usize) -> Result<CubeTree> {
        if j < 1 {
            return Err(Error::Config("J must be at least 1".into()));
        }
        let depth = nets.k_max / j;
        let mut nodes: Vec<CubeNode> = Vec::new();
        let mut levels: Vec<Vec<NodeId>> = Vec::new();
        let mut grids: Vec<PointGrid> = Vec::new();
        for m in 0..=depth {
            let pts = nets.level(m * j);
            let cell = 2f64.powi(-((m * j) as i32));
            grids.push(PointGrid::from_points(cell, &pts));
            // deepest centers are pulled only as far as Γ reaches from the net
            let (slack, tail) = if m == depth {
                let cover = nets.samples.points.iter().filter_map(|q| grids[m].nearest_within(q, cell)).map(|(_, d)| d).fold(0.0, f64::max);
                ((cover / 2f64.powi(-((m * j + c_q) as i32))).max(1.0) * (1.0 + 1e-9), cell)
            } else {
                (4.0, 2f64.powi(-((m * j + c_q) as i32)))
            };
            let mut ids = Vec::with_capacity(pts.len());
            for (i, p) in pts.iter().enumerate() {
                let id = nodes.len();
                let parent = if m == 0 {
                    None
                } else {
                    Some(Self::choose_parent(&nodes, &levels, &grids, (j, c_q), (m, slack, tail), p))
                };
                if let Some(pid) = parent {
                    nodes[pid].children.push(id);
                }
                nodes.push(CubeNode {
                    id,
                    center: *p,
                    level: m,
                    net_index: i,
                    parent,
                    children: Vec::new(),
                    class: CubeClass::Unclassified,
                });
                ids.push(id);
            }
            levels.push(ids);
        }
        Ok(CubeTree { j, c_q, nodes, levels, grids })
    }

    /// Nearest node of level m−1, restricted to the subtree of the finest coarser
    /// center w (level l) with |p − w| < 2^{-lJ-c_Q} + slack·2^{-mJ-c_Q}.
    /// `tail` is the reach of the new cube beyond its center.
    fn choose_parent(
        nodes: &[CubeNode],
        levels: &[Vec<NodeId>],
        grids: &[PointGrid],
        (j, c_q): (usize, usize),
        (m, slack, tail): (usize, f64, f64),
        p: &Point,
    ) -> NodeId {
        let radius = |l: usize| 2f64.powi(-((l * j + c_q) as i32));
        let under = |mut id: NodeId, of: NodeId| {
            while nodes[id].level > nodes[of].level {
                id = nodes[id].parent.expect("non-root has a parent");
            }
            id == of
        };
        let coarse = 2f64.powi(-(((m - 1) * j) as i32));
        let (pi, d) = grids[m - 1].nearest_within(p, coarse).expect("coarser net covers");
        let nearest = levels[m - 1][pi];
        if d == 0.0 {
            return nearest;
        }
        let forced = (0..m - 1).rev().find_map(|l| {
            let r = radius(l) + slack * radius(m);
            grids[l].within(p, r).into_iter().find(|&i| grids[l].points()[i].dist(p) < r).map(|i| levels[l][i])
        });
        match forced {
            Some(w) if !under(nearest, w) => {
                // among the subtree's candidates, keep every ancestor's outer extent smallest
                let reach = nodes[w].center.dist(p) * (1.0 + 1e-12);
                let outer = |l: usize| 2f64.powi(-((l * j) as i32)) / (1.0 - 2f64.powi(-(j as i32)));
                let score = |mut id: NodeId| {
                    let mut worst: f64 = 0.0;
                    loop {
                        let n = &nodes[id];
                        worst = worst.max((n.center.dist(p) + tail) / outer(n.level));
                        match n.parent {
                            Some(q) if n.level > nodes[w].level => id = q,
                            _ => return worst,
                        }
                    }
                };
                grids[m - 1]
                    .within(p, reach)
                    .into_iter()
                    .map(|i| levels[m - 1][i])
                    .filter(|&id| under(id, w))
                    .map(|id| (score(id), nodes[id].center.dist(p), id))
                    .min_by(|a, b| a.0.max(1.0).total_cmp(&b.0.max(1.0)).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)))
                    .expect("the center persists")
                    .2
            }
            _ => nearest,
        }
    }

    /// Rebuilds the level index of a dumped tree.
    pub fn from_nodes(j: usize, c_q: usize, nodes: Vec<CubeNode>) -> Result<CubeTree> {
        if j < 1 || nodes.is_empty() {
            return Err(Error::Input("cube dump needs J >= 1 and a root".into()));
        }
        let mut levels: Vec<Vec<NodeId>> = Vec::new();
        for (i, n) in nodes.iter().enumerate() {
            let parent_ok = match n.parent {
                None => n.level == 0,
                Some(p) => p < i && nodes[p].level + 1 == n.level,
            };
            if n.id != i || !parent_ok {
                return Err(Error::Input(format!("cube {i} is out of order in the dump")));
            }
            if n.level >= levels.len() {
                levels.resize(n.level + 1, Vec::new());
            }
            levels[n.level].push(i);
        }
        let grids = levels
            .iter()
            .enumerate()
            .map(|(m, ids)| {
                let pts: Vec<Point> = ids.iter().map(|&i| nodes[i].center).collect();
                PointGrid::from_points(2f64.powi(-((m * j) as i32)), &pts)
            })
            .collect();
        Ok(CubeTree { j, c_q, nodes, levels, grids })
    }

    pub fn nodes(&self) -> &[CubeNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &CubeNode {
        &self.nodes[id]
    }

    pub fn set_class(&mut self, id: NodeId, c: CubeClass) {
        self.nodes[id].class = c;
    }

    pub fn root(&self) -> NodeId {
        0
    }

    /// Deepest tree level.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, m: usize) -> &[NodeId] {
        &self.levels[m]
    }

    /// Scale exponent mJ of a tree level.
    pub fn scale_exp(&self, m: usize) -> usize {
        m * self.j
    }

    /// Side scale 2^{-mJ}.
    pub fn scale(&self, m: usize) -> f64 {
        2f64.powi(-(self.scale_exp(m) as i32))
    }

    /// Radius of the descendant ball B(z, 2^{-mJ-c_Q}).
    pub fn ball_radius(&self, m: usize) -> f64 {
        2f64.powi(-((self.scale_exp(m) + self.c_q) as i32))
    }

    /// Outer radius with Q(x) ⊆ B(x, R): 2^{-mJ}/(1-2^{-J}).
    pub fn outer_radius(&self, m: usize) -> f64 {
        self.scale(m) / (1.0 - 2f64.powi(-(self.j as i32)))
    }

    /// Nominal diameter |Q| = 2·2^{-mJ}.
    pub fn diameter(&self, id: NodeId) -> f64 {
        2.0 * self.scale(self.nodes[id].level)
    }

    /// The ancestor of `id` at tree level `m` (itself if already there).
    pub fn ancestor(&self, mut id: NodeId, m: usize) -> Option<NodeId> {
        if self.nodes[id].level < m {
            return None;
        }
        while self.nodes[id].level > m {
            id = self.nodes[id].parent?;
        }
        Some(id)
    }

    pub fn is_descendant(&self, id: NodeId, of: NodeId) -> bool {
        self.ancestor(id, self.nodes[of].level) == Some(of)
    }

    /// Descendants of `id` including itself, level by level.
    pub fn descendants(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = vec![id];
        let mut i = 0;
        while i < out.len() {
            out.extend(self.nodes[out[i]].children.iter().copied());
            i += 1;
        }
        out
    }

    /// Descendant balls B(z, 2^{-lJ-c_Q}) containing `p`, all levels.
    fn balls_containing(&self, p: &Point, open: bool) -> Vec<NodeId> {
        let mut out = Vec::new();
        for m in 0..=self.depth() {
            let r = self.ball_radius(m);
            for i in self.grids[m].within(p, r) {
                let d = self.grids[m].points()[i].dist(p);
                if if open { d < r } else { d <= r } {
                    out.push(self.levels[m][i]);
                }
            }
        }
        out
    }

    /// Deepest-level centers whose tail cell holds `p`: nearest within 2^{-l_f J},
    /// restricted to the subtree of the finest ball containing `p`.
    fn tail_leaves(&self, p: &Point, balls: &[NodeId], open: bool) -> Vec<NodeId> {
        let deepest = self.depth();
        let finest = balls.iter().map(|&b| self.nodes[b].level).max();
        let roots: Vec<NodeId> = balls.iter().copied().filter(|&b| Some(self.nodes[b].level) == finest).collect();
        let r = self.scale(deepest);
        let cand: Vec<(NodeId, f64)> = self.grids[deepest]
            .within(p, r)
            .into_iter()
            .map(|i| (self.levels[deepest][i], self.grids[deepest].points()[i].dist(p)))
            .filter(|&(_, d)| if open { d < r } else { d <= r })
            .filter(|&(id, _)| roots.is_empty() || roots.iter().any(|&z| self.is_descendant(id, z)))
            .collect();
        let dmin = cand.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
        let winners: Vec<NodeId> = cand.iter().filter(|c| c.1 == dmin).map(|c| c.0).collect();
        if open && winners.len() != 1 {
            return Vec::new();
        }
        winners
    }

    /// Membership in Q°(id) (`open`) or its closure Q(id).
    ///
    /// Q° is the union of descendant balls B(z, 2^{-lJ-c_Q}) together with the
    /// tail cells of its deepest descendants.
    pub fn contains(&self, id: NodeId, p: &Point, open: bool) -> bool {
        let m0 = self.nodes[id].level;
        if p.dist(&self.nodes[id].center) > self.outer_radius(m0) {
            return false;
        }
        let balls = self.balls_containing(p, open);
        if balls.iter().any(|&b| self.nodes[b].level >= m0 && self.ancestor(b, m0) == Some(id)) {
            return true;
        }
        self.tail_leaves(p, &balls, open).into_iter().any(|l| self.ancestor(l, m0) == Some(id))
    }

    /// Open cubes of level `m` containing `p`.
    pub fn containing_at_level(&self, m: usize, p: &Point, open: bool) -> Vec<NodeId> {
        let r = self.outer_radius(m);
        self.grids[m].within(p, r).into_iter().map(|i| self.levels[m][i]).filter(|&id| self.contains(id, p, open)).collect()
    }

    /// Distance from `p` to Q(id); tail cells are approximated by their balls.
    pub fn dist_to_cube(&self, id: NodeId, p: &Point, cap: f64) -> f64 {
        let m0 = self.nodes[id].level;
        let deepest = self.depth();
        let mut best = cap;
        for m in m0..=deepest {
            let r = if m == deepest { self.scale(m) } else { self.ball_radius(m) };
            for i in self.grids[m].within(p, best + r) {
                let nid = self.levels[m][i];
                if self.ancestor(nid, m0) == Some(id) {
                    best = best.min((self.nodes[nid].center.dist(p) - r).max(0.0));
                }
            }
        }
        best
    }

    /// dist(p, Q) ≤ M·|Q|.
    pub fn dilated_contains(&self, id: NodeId, m_factor: f64, p: &Point) -> bool {
        let lim = m_factor * self.diameter(id);
        self.dist_to_cube(id, p, lim * 1.000001 + 1e-300) <= lim
    }

    /// Deepest cube whose closure contains every curve sample in `b`; ties go to the lowest id.
    pub fn smallest_cube_containing(&self, nets: &NetHierarchy, b: &Ball) -> Result<NodeId> {
        let probes = nets.samples.points_in_ball(b);
        if probes.is_empty() {
            return Err(Error::OutOfDomain);
        }
        let holds = |id: NodeId| probes.iter().all(|p| self.contains(id, p, false));
        if !holds(self.root()) {
            return Err(Error::OutOfDomain);
        }
        let mut frontier = vec![self.root()];
        let mut best = self.root();
        while !frontier.is_empty() {
            let mut next: Vec<NodeId> = frontier
                .iter()
                .flat_map(|&id| self.nodes[id].children.iter().copied())
                .filter(|&c| self.nodes[c].center.dist(&b.center) <= self.outer_radius(self.nodes[c].level) + b.radius)
                .filter(|&c| holds(c))
                .collect();
            next.sort_unstable();
            next.dedup();
            if let Some(&first) = next.first() {
                best = first;
            }
            frontier = next;
        }
        Ok(best)
    }

    /// Covering, disjointness, sandwich and nesting audit.
    pub fn audit(&self, nets: &NetHierarchy, sample_points: &[Point]) -> CubeAudit {
        let mut a = CubeAudit { outer_bound_tight: 1.0 + 2f64.powi(-(self.j as i32)), outer_bound: 0.0, ..Default::default() };
        a.outer_bound = 1.0 / (1.0 - 2f64.powi(-(self.j as i32)));
        // parent distances
        for n in &self.nodes {
            if let Some(p) = n.parent {
                let d = n.center.dist(&self.nodes[p].center);
                let s = self.scale(n.level);
                let coarse = self.scale(n.level - 1);
                let persisting = d == 0.0;
                if !persisting && !(d >= s && d <= coarse) {
                    a.parent_distance += 1;
                }
                if !persisting && !(d >= s && d < 2.0 * s) {
                    a.parent_distance_tight += 1;
                }
            }
        }
        // covering of dense samples at every level
        for p in &nets.samples.points {
            for m in 0..=self.depth() {
                if self.containing_at_level(m, p, false).is_empty() {
                    a.covering += 1;
                }
            }
        }
        // sandwich: inner ball own, outer extent from descendants
        for n in &self.nodes {
            let s = self.scale(n.level);
            let mut ext: f64 = self.ball_radius(n.level);
            for d in self.descendants(n.id) {
                let dn = &self.nodes[d];
                let r = if dn.level == self.depth() { self.scale(dn.level) } else { self.ball_radius(dn.level) };
                ext = ext.max(dn.center.dist(&n.center) + r);
            }
            a.max_extent_ratio = a.max_extent_ratio.max(ext / s);
            if ext > self.outer_radius(n.level) * (1.0 + 1e-12) {
                a.sandwich += 1;
            }
            if ext > s * a.outer_bound_tight * (1.0 + 1e-12) {
                a.sandwich_tight += 1;
            }
            let inner = self.ball_radius(n.level) * 0.999;
            for u in probe_directions(n.center.dim()) {
                if !self.contains(n.id, &(n.center + u * inner), true) {
                    a.sandwich += 1;
                    break;
                }
            }
        }
        // disjointness and nesting on sample points
        for p in sample_points {
            let mut chain: Vec<Option<NodeId>> = Vec::new();
            for m in 0..=self.depth() {
                let hits = self.containing_at_level(m, p, true);
                if hits.len() > 1 {
                    a.disjointness += 1;
                }
                chain.push(hits.first().copied());
            }
            for m in 1..chain.len() {
                if let Some(y) = chain[m] {
                    for (k, x) in chain.iter().enumerate().take(m) {
                        if let Some(x) = x {
                            if self.ancestor(y, k) != Some(*x) {
                                a.nesting += 1;
                            }
                        }
                    }
                }
            }
            a.points_checked += 1;
        }
        a
    }
}

/// Unit probe directions: axes and diagonals.
pub fn probe_directions(d: usize) -> Vec<Point> {
    let mut out = Vec::new();
    for i in 0..d {
        out.push(Point::axis(d, i));
        out.push(-Point::axis(d, i));
    }
    for mask in 0..(1usize << d) {
        let mut v = Point::zero(d);
        for i in 0..d {
            v.set(i, if mask >> i & 1 == 1 { 1.0 } else { -1.0 });
        }
        out.push(v.normalized().unwrap());
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CubeAudit {
    /// New centers farther than 2^{-(m-1)J} from their parent, or closer than 2^{-mJ}.
    pub parent_distance: usize,
    /// Same against the band [2^{-mJ}, 2·2^{-mJ}); reported only.
    pub parent_distance_tight: usize,
    pub covering: usize,
    pub disjointness: usize,
    pub sandwich: usize,
    /// Outer extents above 2^{-mJ}(1 + 2^{-J}); reported only.
    pub sandwich_tight: usize,
    pub nesting: usize,
    pub points_checked: usize,
    pub max_extent_ratio: f64,
    pub outer_bound: f64,
    pub outer_bound_tight: f64,
}

impl CubeAudit {
    pub fn ok(&self) -> bool {
        self.parent_distance == 0 && self.covering == 0 && self.disjointness == 0 && self.sandwich == 0 && self.nesting == 0
    }
}
