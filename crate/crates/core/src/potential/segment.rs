//! Closed segments in the plane: intersection and Euclidean distance.

type P = [f64; 2];

fn sub(a: P, b: P) -> P {
    [a[0] - b[0], a[1] - b[1]]
}

/// Orientation of `(o, a, b)`, snapped to 0 when the three points are
/// collinear up to rounding (e.g. rods at angle π/2, whose cosine is not 0).
fn cross(o: P, a: P, b: P) -> f64 {
    let u = sub(a, o);
    let v = sub(b, o);
    let c = u[0] * v[1] - u[1] * v[0];
    if c.abs() <= 1e-12 * u[0].hypot(u[1]) * v[0].hypot(v[1]) {
        0.0
    } else {
        c
    }
}

fn within_box(a: P, b: P, p: P) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

/// Whether closed segments `[a, b]` and `[c, d]` share a point.
pub fn intersect(a: P, b: P, c: P, d: P) -> bool {
    let o1 = cross(a, b, c);
    let o2 = cross(a, b, d);
    let o3 = cross(c, d, a);
    let o4 = cross(c, d, b);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0)) {
        return true;
    }
    (o1 == 0.0 && within_box(a, b, c))
        || (o2 == 0.0 && within_box(a, b, d))
        || (o3 == 0.0 && within_box(c, d, a))
        || (o4 == 0.0 && within_box(c, d, b))
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn point_distance(p: P, a: P, b: P) -> f64 {
    let ab = sub(b, a);
    let ap = sub(p, a);
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 > 0.0 {
        ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let q = [a[0] + t * ab[0], a[1] + t * ab[1]];
    (p[0] - q[0]).hypot(p[1] - q[1])
}

/// Euclidean distance between closed segments; exactly 0 iff they intersect.
pub fn distance(a: P, b: P, c: P, d: P) -> f64 {
    if intersect(a, b, c, d) {
        return 0.0;
    }
    let m = point_distance(a, c, d)
        .min(point_distance(b, c, d))
        .min(point_distance(c, a, b))
        .min(point_distance(d, a, b));
    // Rounding can report 0 for segments that only nearly touch.
    m.max(f64::MIN_POSITIVE)
}

/// Endpoints of the rod of half-length `r` centred at `x` with angle `theta`.
pub fn rod(x: P, r: f64, theta: f64) -> (P, P) {
    let (s, c) = theta.sin_cos();
    ([x[0] - r * c, x[1] - r * s], [x[0] + r * c, x[1] + r * s])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_and_touching() {
        assert!(intersect([-1.0, 0.0], [1.0, 0.0], [0.0, -1.0], [0.0, 1.0]));
        assert!(intersect([-1.0, 0.0], [1.0, 0.0], [1.0, 0.0], [2.0, 5.0]));
        assert!(!intersect([-1.0, 0.0], [1.0, 0.0], [0.0, 0.5], [0.0, 1.0]));
    }

    #[test]
    fn collinear_cases() {
        assert!(intersect([-1.0, 0.0], [1.0, 0.0], [0.5, 0.0], [3.0, 0.0]));
        assert!(!intersect([-1.0, 0.0], [1.0, 0.0], [1.5, 0.0], [3.0, 0.0]));
        assert_eq!(distance([-1.0, 0.0], [1.0, 0.0], [1.5, 0.0], [3.0, 0.0]), 0.5);
    }

    #[test]
    fn parallel_offset() {
        let (a, b) = rod([0.0, 0.0], 1.0, 0.0);
        let (c, d) = rod([0.0, 3.0], 1.0, 0.0);
        assert_eq!(distance(a, b, c, d), 3.0);
        let (c, d) = rod([0.0, 0.1], 1.0, 0.0);
        assert!(!intersect(a, b, c, d));
        let (c, d) = rod([0.0, 0.0], 1.0, 0.0);
        assert!(intersect(a, b, c, d));
    }
}
