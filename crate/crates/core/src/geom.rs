//! Exact integer lattice geometry.
//!
//! All predicates (disc membership, hull construction, cone membership) are
//! decided in integer or rational arithmetic; no floating point touches
//! instance construction.

use num_rational::Ratio;

pub type Point = (i64, i64);

pub fn dot(a: Point, b: Point) -> i128 {
    i128::from(a.0) * i128::from(b.0) + i128::from(a.1) * i128::from(b.1)
}

pub fn cross(a: Point, b: Point) -> i128 {
    i128::from(a.0) * i128::from(b.1) - i128::from(a.1) * i128::from(b.0)
}

pub fn sub(a: Point, b: Point) -> Point {
    (a.0 - b.0, a.1 - b.1)
}

pub fn add(a: Point, b: Point) -> Point {
    (a.0 + b.0, a.1 + b.1)
}

pub fn scale(a: Point, k: i64) -> Point {
    (a.0 * k, a.1 * k)
}

/// Squared Euclidean norm.
pub fn norm2(a: Point) -> i128 {
    dot(a, a)
}

/// `‖a‖² ≤ r²` for rational `r`, exact.
pub fn within_radius(a: Point, r: Ratio<i64>) -> bool {
    let num = i128::from(*r.numer());
    let den = i128::from(*r.denom());
    norm2(a) * den * den <= num * num
}

/// All lattice points of the closed disc of radius `r` around the origin.
pub fn disc_lattice_points(r: Ratio<i64>) -> Vec<Point> {
    assert!(*r.numer() >= 0, "radius must be nonnegative");
    let bound = (r.numer() / r.denom()) + 1;
    let mut out = Vec::new();
    for x in -bound..=bound {
        for y in -bound..=bound {
            if within_radius((x, y), r) {
                out.push((x, y));
            }
        }
    }
    out
}

/// Convex hull vertices of a point set in counterclockwise order, starting
/// from the lexicographically smallest point. Collinear boundary points are
/// not vertices. Monotone chain with exact integer turns.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    let n = pts.len();
    if n <= 2 {
        return pts;
    }
    let turn = |o: Point, a: Point, b: Point| cross(sub(a, o), sub(b, o));
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Vertices of the convex hull of the lattice points within distance `r` of
/// the origin, counterclockwise. These are the edge-direction menu of the
/// lattice constructions.
pub fn convex_hull_ball(r: Ratio<i64>) -> Vec<Point> {
    assert!(r >= Ratio::new(1, 1), "radius must be at least 1");
    convex_hull(&disc_lattice_points(r))
}

/// Keeps the vectors lying in the closed cone of rational half-angle-tangent
/// `phi_tan` around the axis direction `(b, a)` given by `skew = a/b`
/// (`tan ψ = a/b`), pointing along +axis. Preserves input order.
pub fn cone_filter(vectors: &[Point], skew: Ratio<i64>, phi_tan: Ratio<i64>) -> Vec<Point> {
    let axis: Point = (*skew.denom(), *skew.numer());
    cone_filter_axis(vectors, axis, phi_tan)
}

/// Same as [`cone_filter`] with the axis given directly as an integer vector.
pub fn cone_filter_axis(vectors: &[Point], axis: Point, phi_tan: Ratio<i64>) -> Vec<Point> {
    assert!(axis != (0, 0), "cone axis must be nonzero");
    assert!(*phi_tan.numer() >= 0, "half-angle tangent must be nonnegative");
    let pn = i128::from(*phi_tan.numer());
    let pd = i128::from(*phi_tan.denom());
    vectors
        .iter()
        .copied()
        .filter(|&v| {
            // A finite half-angle tangent means the cone is narrower than a
            // half-plane, so the projection on the axis must be positive.
            let along = dot(v, axis);
            if along <= 0 {
                return false;
            }
            let across = cross(v, axis).abs();
            across * pd <= pn * along
        })
        .collect()
}

/// In a counterclockwise hull, the neighbors of `hull[idx]`:
/// (counterclockwise/left, clockwise/right).
pub fn hull_neighbors(hull: &[Point], idx: usize) -> (Point, Point) {
    let n = hull.len();
    (hull[(idx + 1) % n], hull[(idx + n - 1) % n])
}

/// Reduces a direction vector to primitive form with a canonical sign
/// (positive x, or zero x and positive y).
pub fn primitive_direction(v: Point) -> Point {
    assert!(v != (0, 0));
    let g = gcd(v.0.unsigned_abs(), v.1.unsigned_abs()) as i64;
    let mut p = (v.0 / g, v.1 / g);
    if p.0 < 0 || (p.0 == 0 && p.1 < 0) {
        p = (-p.0, -p.1);
    }
    p
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Ratio<i64> {
        Ratio::new(n, 1)
    }

    /// Independent hull oracle: gift wrapping (Jarvis march).
    fn jarvis_hull(points: &[Point]) -> Vec<Point> {
        let mut pts: Vec<Point> = points.to_vec();
        pts.sort_unstable();
        pts.dedup();
        if pts.len() <= 2 {
            return pts;
        }
        let start = pts[0];
        let mut hull = vec![start];
        let mut current = start;
        loop {
            let mut next = pts[0];
            if next == current {
                next = pts[1];
            }
            for &p in &pts {
                if p == current {
                    continue;
                }
                let c = cross(sub(next, current), sub(p, current));
                // Pick the most clockwise candidate; on ties the farthest.
                if c < 0 || (c == 0 && norm2(sub(p, current)) > norm2(sub(next, current))) {
                    next = p;
                }
            }
            if next == start {
                break;
            }
            hull.push(next);
            current = next;
        }
        hull
    }

    #[test]
    fn unit_ball_hull() {
        let mut h = convex_hull_ball(r(1));
        h.sort_unstable();
        assert_eq!(h, vec![(-1, 0), (0, -1), (0, 1), (1, 0)]);
    }

    #[test]
    fn hull_matches_gift_wrapping_oracle() {
        for radius in 1..=8 {
            let pts = disc_lattice_points(r(radius));
            if radius == 2 {
                assert_eq!(pts.len(), 13);
            }
            let mut a = convex_hull(&pts);
            let mut b = jarvis_hull(&pts);
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b, "radius {radius}");
        }
    }

    #[test]
    fn hull_is_counterclockwise_and_strictly_convex() {
        for radius in 2..=10 {
            let h = convex_hull_ball(r(radius));
            let n = h.len();
            for i in 0..n {
                let t = cross(sub(h[(i + 1) % n], h[i]), sub(h[(i + 2) % n], h[(i + 1) % n]));
                assert!(t > 0, "radius {radius}: non-left turn at {i}");
            }
        }
    }

    #[test]
    fn hull_size_grows_like_r_to_two_thirds() {
        let counts: Vec<usize> = [4i64, 8, 16, 32]
            .iter()
            .map(|&radius| convex_hull_ball(r(radius)).len())
            .collect();
        let slope = ((counts[3] as f64) / (counts[0] as f64)).ln() / (8f64).ln();
        assert!(
            (slope - 2.0 / 3.0).abs() <= 0.25,
            "counts {counts:?}, slope {slope}"
        );
    }

    #[test]
    fn cone_keeps_axis_and_rejects_orthogonal() {
        let axis_skew = Ratio::new(1, 3); // axis (3, 1)
        let vectors = vec![(3, 1), (6, 2), (-3, -1), (1, -3), (-1, 3), (3, 2)];
        let kept = cone_filter(&vectors, axis_skew, Ratio::new(1, 100));
        assert_eq!(kept, vec![(3, 1), (6, 2)]);
        // A wide cone accepts the slightly-off vector too.
        let kept = cone_filter(&vectors, axis_skew, Ratio::new(1, 2));
        assert!(kept.contains(&(3, 2)));
        assert!(!kept.contains(&(-3, -1)));
    }

    #[test]
    fn primitive_direction_is_canonical() {
        assert_eq!(primitive_direction((4, -6)), (2, -3));
        assert_eq!(primitive_direction((-4, 6)), (2, -3));
        assert_eq!(primitive_direction((0, -5)), (0, 1));
    }
}
