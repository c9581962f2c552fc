//! The source-restricted lattice lower-bound instance.
//!
//! Nodes are the integer lattice points inside a long thin rectangle whose
//! long axis is skewed against the lattice by a rational slope. Each node
//! gets edges to the convex-hull vertices of its radius-`r` disc that fall
//! inside a narrow cone around the axis. Demands start in a thin zone at one
//! end and repeat a single edge vector to the far boundary (the canonical
//! paths). Abstract source nodes are then attached along lines through the
//! zone so that the demand set only uses a small source set.
//!
//! The lattice stays axis-aligned; the rectangle and the cone axis are the
//! rotated objects, so all membership predicates stay in exact integer
//! arithmetic.

use std::collections::HashMap;

use num_integer::Roots;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geom::{
    add, cone_filter_axis, convex_hull_ball, cross, dot, hull_neighbors, primitive_direction,
    scale, sub, Point,
};
use crate::graph::{DemandSet, DirectedGraph, EdgeId, NodeId};
use crate::lowerbound::{LowerBoundInstance, NodePlacement};
use crate::rng::stream;
use crate::Result;

/// Geometric parameters of the lattice construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeParams {
    /// Rectangle height (long side), lattice units.
    pub height: i64,
    /// Rectangle width (short side).
    pub width: i64,
    /// Start-zone height.
    pub zone_height: i64,
    /// Edge radius.
    pub radius: i64,
    /// `tan ψ = a/b`: the long axis points along `(b, a)`.
    pub skew: Ratio<i64>,
    /// Cone scale constant `c₁` with half-angle tangent `≈ c₁·r^{-2/3}`.
    pub phi_scale: Ratio<i64>,
    /// Derived half-angle tangent. Tests may widen it to corrupt the
    /// construction on purpose.
    pub phi_tan: Ratio<i64>,
    /// Accepted band for `w / (h·r^{-2/3})`.
    pub width_band: (Ratio<i64>, Ratio<i64>),
    /// Maximum `h_z / r`.
    pub zone_fraction: Ratio<i64>,
}

impl LatticeParams {
    /// Builds parameters with the half-angle tangent derived from
    /// `phi_scale · r^{-2/3}`, rationalized over a fixed denominator.
    pub fn new(
        height: i64,
        width: i64,
        zone_height: i64,
        radius: i64,
        skew: Ratio<i64>,
        phi_scale: Ratio<i64>,
    ) -> Self {
        LatticeParams {
            height,
            width,
            zone_height,
            radius,
            skew,
            phi_scale,
            phi_tan: derive_phi_tan(phi_scale, radius),
            width_band: (Ratio::new(1, 4), Ratio::new(4, 1)),
            zone_fraction: Ratio::new(1, 1),
        }
    }

    /// Checks the construction constraints, naming the violated one.
    pub fn validate(&self) -> Result<()> {
        if self.height < 1 || self.width < 1 || self.zone_height < 1 || self.radius < 1 {
            return Err(Error::params("all lattice dimensions must be positive"));
        }
        if *self.skew.numer() < 0 || *self.skew.denom() <= 0 {
            return Err(Error::params("skew must be a nonnegative rational a/b"));
        }
        if self.height < self.radius {
            return Err(Error::params(format!(
                "nonempty-graph constraint violated: h = {} < r = {}",
                self.height, self.radius
            )));
        }
        // h_z ≤ zone_fraction · r.
        let hz = Ratio::new(self.zone_height, 1);
        if hz > self.zone_fraction * Ratio::new(self.radius, 1) {
            return Err(Error::params(format!(
                "zone constraint violated: h_z = {} exceeds {} · r",
                self.zone_height, self.zone_fraction
            )));
        }
        // Width band: lo ≤ w·r^{2/3}/h ≤ hi, compared via cubes:
        // lo³·h³ ≤ w³·r² ≤ hi³·h³.
        let w3r2 = i128::from(self.width).pow(3) * i128::from(self.radius).pow(2);
        let h3 = i128::from(self.height).pow(3);
        let (lo, hi) = self.width_band;
        let lo3 = (
            i128::from(*lo.numer()).pow(3),
            i128::from(*lo.denom()).pow(3),
        );
        let hi3 = (
            i128::from(*hi.numer()).pow(3),
            i128::from(*hi.denom()).pow(3),
        );
        if w3r2 * lo3.1 < lo3.0 * h3 {
            return Err(Error::params(format!(
                "width band violated: w = {} below {lo} · h·r^(-2/3)",
                self.width
            )));
        }
        if w3r2 * hi3.1 > hi3.0 * h3 {
            return Err(Error::params(format!(
                "width band violated: w = {} above {hi} · h·r^(-2/3)",
                self.width
            )));
        }
        if self.zone_height > self.height {
            return Err(Error::params("zone taller than the rectangle"));
        }
        Ok(())
    }
}

/// Rationalizes `c₁ · r^{-2/3}` over denominator 4096 using integer roots.
fn derive_phi_tan(c1: Ratio<i64>, r: i64) -> Ratio<i64> {
    const DEN: i64 = 4096;
    let num = i128::from(*c1.numer() * DEN).pow(3);
    let den = i128::from(*c1.denom()).pow(3) * i128::from(r).pow(2);
    let t = (num / den).cbrt();
    Ratio::new(t as i64, DEN)
}

fn ipow_round(n: u64, num: u32, den: u32) -> i64 {
    (n as f64).powf(f64::from(num) / f64::from(den)).round() as i64
}

/// The balanced parameter setting `h = n^{7/12}, w = n^{5/12}, h_z = r =
/// n^{1/4}`, with a skew searched so the cone degree lands in a usable band.
pub fn default_params(n: u64, seed: u64) -> Result<LatticeParams> {
    if n < 4096 {
        return Err(Error::params("default parameters need n >= 4096"));
    }
    let height = ipow_round(n, 7, 12);
    let width = ipow_round(n, 5, 12);
    let r = ipow_round(n, 1, 4);
    let params = LatticeParams::new(
        height,
        width,
        r,
        r,
        Ratio::new(1, 7),
        Ratio::new(2, 1),
    );
    search_skew(params, seed, 2, 12)
}

/// The sparsest regime `h = w = h_z = √n`: a square rectangle with a single
/// fat zone. The width band is widened accordingly.
pub fn sparsest_params(n: u64, seed: u64) -> Result<LatticeParams> {
    if n < 4096 {
        return Err(Error::params("sparsest parameters need n >= 4096"));
    }
    let side = ipow_round(n, 1, 2);
    let r = ipow_round(n, 1, 4);
    let mut params = LatticeParams::new(
        side,
        side,
        side.min(r),
        r,
        Ratio::new(1, 7),
        Ratio::new(2, 1),
    );
    // w = h here, so w·r^{2/3}/h = r^{2/3}: widen the admissible band.
    params.width_band = (Ratio::new(1, 4), Ratio::new(r, 1));
    search_skew(params, seed, 2, 12)
}

/// Samples random rational skews and keeps the first whose cone degree lands
/// in `[lo, hi]`; falls back to the closest candidate seen.
pub fn search_skew(
    mut params: LatticeParams,
    seed: u64,
    lo: usize,
    hi: usize,
) -> Result<LatticeParams> {
    use rand::Rng;
    let hull = convex_hull_ball(Ratio::new(params.radius, 1));
    let mut rng = stream(seed, "skew-search");
    let mut best: Option<(usize, Ratio<i64>)> = None;
    for _ in 0..200 {
        let b = rng.gen_range(5i64..60);
        let a = rng.gen_range(1i64..=b);
        let skew = Ratio::new(a, b);
        let axis = (*skew.denom(), *skew.numer());
        let deg = cone_filter_axis(&hull, axis, params.phi_tan).len();
        if (lo..=hi).contains(&deg) {
            params.skew = skew;
            return Ok(params);
        }
        let dist = if deg < lo { lo - deg } else { deg - hi };
        if best.map_or(true, |(d, _)| dist < d) {
            best = Some((dist, skew));
        }
    }
    match best {
        Some((_, skew)) => {
            params.skew = skew;
            Ok(params)
        }
        None => Err(Error::params("skew search found no candidate")),
    }
}

/// Membership tests for the skewed rectangle, exact.
pub(crate) struct Frame {
    axis: Point,
    norm2: i128,
    h: i64,
    w: i64,
    hz: i64,
}

impl Frame {
    pub(crate) fn new(p: &LatticeParams) -> Frame {
        let axis = (*p.skew.denom(), *p.skew.numer());
        Frame {
            axis,
            norm2: dot(axis, axis),
            h: p.height,
            w: p.width,
            hz: p.zone_height,
        }
    }

    fn along(&self, q: Point) -> i128 {
        dot(q, self.axis)
    }

    fn across(&self, q: Point) -> i128 {
        cross(self.axis, q)
    }

    pub(crate) fn in_rect(&self, q: Point) -> bool {
        let al = self.along(q);
        let ac = self.across(q);
        al >= 0
            && ac >= 0
            && al * al <= i128::from(self.h) * i128::from(self.h) * self.norm2
            && ac * ac <= i128::from(self.w) * i128::from(self.w) * self.norm2
    }

    pub(crate) fn in_zone(&self, q: Point) -> bool {
        self.in_rect(q) && {
            let al = self.along(q);
            al * al <= i128::from(self.hz) * i128::from(self.hz) * self.norm2
        }
    }

    /// Conservative integer bounding box of the rectangle.
    fn bounding_box(&self) -> (i64, i64, i64, i64) {
        let s = (self.norm2 as f64).sqrt();
        let ux = self.axis.0 as f64 / s;
        let uy = self.axis.1 as f64 / s;
        // Perpendicular (width) direction, the `across ≥ 0` side.
        let wx = -uy;
        let wy = ux;
        let corners = [
            (0.0, 0.0),
            (self.h as f64 * ux, self.h as f64 * uy),
            (self.w as f64 * wx, self.w as f64 * wy),
            (
                self.h as f64 * ux + self.w as f64 * wx,
                self.h as f64 * uy + self.w as f64 * wy,
            ),
        ];
        let xmin = corners.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
        let xmax = corners.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max);
        let ymin = corners.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
        let ymax = corners.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
        (
            xmin.floor() as i64 - 2,
            xmax.ceil() as i64 + 2,
            ymin.floor() as i64 - 2,
            ymax.ceil() as i64 + 2,
        )
    }

    /// Approximate zone center, used only to pick a representative node.
    fn zone_center(&self) -> (f64, f64) {
        let s = (self.norm2 as f64).sqrt();
        let ux = self.axis.0 as f64 / s;
        let uy = self.axis.1 as f64 / s;
        (
            self.hz as f64 / 2.0 * ux - self.w as f64 / 2.0 * uy,
            self.hz as f64 / 2.0 * uy + self.w as f64 / 2.0 * ux,
        )
    }
}

/// Builds the source-restricted lattice instance.
pub fn build_sv_lowerbound(params: &LatticeParams) -> Result<LowerBoundInstance> {
    params.validate()?;
    let frame = Frame::new(params);
    let full_hull = convex_hull_ball(Ratio::new(params.radius, 1));

    // Cone menu: hull vertices inside the cone, with their hull positions.
    let menu: Vec<(usize, Point)> = full_hull
        .iter()
        .enumerate()
        .filter(|&(_, &v)| in_cone(&frame, v, params.phi_tan))
        .map(|(i, &v)| (i, v))
        .collect();
    if menu.is_empty() {
        return Err(Error::params(
            "cone constraint violated: no hull vertex falls inside the cone",
        ));
    }

    // Lattice nodes, scanned deterministically.
    let (xmin, xmax, ymin, ymax) = frame.bounding_box();
    let mut coords: Vec<Point> = Vec::new();
    let mut id_of: HashMap<Point, NodeId> = HashMap::new();
    for y in ymin..=ymax {
        for x in xmin..=xmax {
            let q = (x, y);
            if frame.in_rect(q) {
                id_of.insert(q, coords.len());
                coords.push(q);
            }
        }
    }
    let lattice_count = coords.len();
    if lattice_count == 0 {
        return Err(Error::params("rectangle contains no lattice points"));
    }

    // Lattice edges.
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    let mut edge_id: HashMap<(NodeId, NodeId), EdgeId> = HashMap::new();
    for (sid, &p) in coords.iter().enumerate() {
        for &(_, v) in &menu {
            let t = add(p, v);
            if let Some(&tid) = id_of.get(&t) {
                edge_id.insert((sid, tid), edges.len());
                edges.push((sid, tid));
            }
        }
    }

    // Base pairs: one per (zone node, menu vector) with the edge present.
    struct BasePair {
        start: NodeId,
        end: NodeId,
        menu_idx: usize,
        path: Vec<EdgeId>,
    }
    let mut base_pairs: Vec<BasePair> = Vec::new();
    for (sid, &p) in coords.iter().enumerate() {
        if !frame.in_zone(p) {
            continue;
        }
        for (mi, &(_, v)) in menu.iter().enumerate() {
            if !id_of.contains_key(&add(p, v)) {
                continue;
            }
            let mut k = 1i64;
            while frame.in_rect(add(p, scale(v, k + 1))) {
                k += 1;
            }
            let mut path = Vec::with_capacity(k as usize);
            let mut cur = p;
            for _ in 0..k {
                let nxt = add(cur, v);
                let a = id_of[&cur];
                let b = id_of[&nxt];
                path.push(edge_id[&(a, b)]);
                cur = nxt;
            }
            base_pairs.push(BasePair {
                start: sid,
                end: id_of[&cur],
                menu_idx: mi,
                path,
            });
        }
    }
    if base_pairs.is_empty() {
        return Err(Error::params(
            "zone constraint violated: no zone node has an in-rectangle cone edge",
        ));
    }

    // Representative zone node: full cone inside the rectangle, closest to
    // the zone center (ties by node id). Only its existence matters; the
    // direction menu below is translation invariant.
    let center = frame.zone_center();
    let mut representative: Option<(f64, NodeId)> = None;
    for (sid, &p) in coords.iter().enumerate() {
        if !frame.in_zone(p) {
            continue;
        }
        if menu.iter().any(|&(_, v)| !frame.in_rect(add(p, v))) {
            continue;
        }
        let dx = p.0 as f64 - center.0;
        let dy = p.1 as f64 - center.1;
        let d2 = dx * dx + dy * dy;
        if representative.map_or(true, |(best, _)| d2 < best) {
            representative = Some((d2, sid));
        }
    }
    if representative.is_none() {
        return Err(Error::params(
            "no zone node supports the full cone inside the rectangle; widen the rectangle or shrink r",
        ));
    }

    // Source directions: for each menu vector, the difference of its full -
    // hull neighbors. The hull neighbors of the two extreme menu vectors lie
    // just outside the cone, which realizes the temporary cone widening.
    let mut directions: Vec<Point> = Vec::with_capacity(menu.len());
    for &(hi, _) in &menu {
        let (v_left, v_right) = hull_neighbors(&full_hull, hi);
        directions.push(primitive_direction(sub(v_left, v_right)));
    }

    // Lines through zone nodes in each distinct direction.
    let mut distinct_dirs: Vec<Point> = Vec::new();
    for &d in &directions {
        if !distinct_dirs.contains(&d) {
            distinct_dirs.push(d);
        }
    }
    let zone_nodes: Vec<NodeId> = (0..lattice_count)
        .filter(|&v| frame.in_zone(coords[v]))
        .collect();
    let mut line_index: HashMap<(Point, i128), usize> = HashMap::new();
    let mut line_members: Vec<Vec<NodeId>> = Vec::new();
    for &d in &distinct_dirs {
        for &z in &zone_nodes {
            let key = (d, cross(d, coords[z]));
            let idx = *line_index.entry(key).or_insert_with(|| {
                line_members.push(Vec::new());
                line_members.len() - 1
            });
            line_members[idx].push(z);
        }
    }

    // One abstract source per line, with edges to all its zone nodes.
    let source_base = lattice_count;
    let node_count = lattice_count + line_members.len();
    for (li, members) in line_members.iter().enumerate() {
        let s = source_base + li;
        for &z in members {
            edge_id.insert((s, z), edges.len());
            edges.push((s, z));
        }
    }

    // Rewrite base pairs through their line sources.
    let mut pair_seen: HashMap<(NodeId, NodeId), ()> = HashMap::new();
    let mut pairs: Vec<(NodeId, NodeId)> = Vec::new();
    let mut canonical_paths: Vec<Vec<EdgeId>> = Vec::new();
    for bp in &base_pairs {
        let d = directions[bp.menu_idx];
        let key = (d, cross(d, coords[bp.start]));
        let line = line_index[&key];
        let s = source_base + line;
        if pair_seen.insert((s, bp.end), ()).is_some() {
            continue;
        }
        let mut path = Vec::with_capacity(bp.path.len() + 1);
        path.push(edge_id[&(s, bp.start)]);
        path.extend_from_slice(&bp.path);
        pairs.push((s, bp.end));
        canonical_paths.push(path);
    }

    let sources: Vec<NodeId> = (0..line_members.len()).map(|li| source_base + li).collect();
    let graph = DirectedGraph::from_edges(node_count, edges.iter().copied())?;
    debug_assert_eq!(graph.edge_count(), edges.len(), "construction emits no duplicates");
    let demands = DemandSet::new(pairs, Some(sources))?;
    debug_assert_eq!(demands.len(), canonical_paths.len());

    let mut placement = vec![None; node_count];
    for (i, &p) in coords.iter().enumerate() {
        placement[i] = Some(p);
    }

    Ok(LowerBoundInstance {
        graph,
        demands,
        placement: NodePlacement::Lattice(placement),
        canonical_paths,
        common_distance: None,
    })
}

fn in_cone(frame: &Frame, v: Point, phi_tan: Ratio<i64>) -> bool {
    let along = dot(v, frame.axis);
    if along <= 0 {
        return false;
    }
    let across = cross(v, frame.axis).abs();
    across * i128::from(*phi_tan.denom()) <= i128::from(*phi_tan.numer()) * along
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_params_hit_exact_powers_of_two() {
        let p = default_params(4096, 1).unwrap();
        assert_eq!((p.height, p.width, p.zone_height, p.radius), (128, 32, 8, 8));
        let p = default_params(1 << 24, 1).unwrap();
        assert_eq!(
            (p.height, p.width, p.zone_height, p.radius),
            (16384, 1024, 64, 64)
        );
    }

    #[test]
    fn sparsest_params_are_square() {
        let p = sparsest_params(4096, 1).unwrap();
        assert_eq!((p.height, p.width, p.zone_height), (64, 64, 8));
        p.validate().unwrap();
    }

    #[test]
    fn default_params_reject_small_n() {
        assert!(default_params(100, 1).is_err());
    }

    #[test]
    fn validation_names_violated_constraint() {
        let p = LatticeParams::new(3, 12, 3, 4, Ratio::new(1, 5), Ratio::new(2, 1));
        let msg = p.validate().unwrap_err().to_string();
        assert!(msg.contains("nonempty-graph"), "{msg}");

        let p = LatticeParams::new(40, 12, 9, 4, Ratio::new(1, 5), Ratio::new(2, 1));
        let msg = p.validate().unwrap_err().to_string();
        assert!(msg.contains("zone"), "{msg}");

        let p = LatticeParams::new(40, 1, 3, 4, Ratio::new(1, 5), Ratio::new(2, 1));
        let msg = p.validate().unwrap_err().to_string();
        assert!(msg.contains("width band"), "{msg}");
    }

    #[test]
    fn phi_tan_tracks_scale_over_r_two_thirds() {
        let t = derive_phi_tan(Ratio::new(2, 1), 4);
        let f = *t.numer() as f64 / *t.denom() as f64;
        let want = 2.0 / (4f64).powf(2.0 / 3.0);
        assert!((f - want).abs() < 0.01, "{f} vs {want}");
    }
}
