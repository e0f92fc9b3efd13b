//! Visual measures between form fields: minimum rectangle distance,
//! edge alignment, and the proximity ratio that drives clustering.
//!
//! All coordinates are CSS pixels with y growing downward, so the bottom
//! edge of a box is its `y_max`. Every function here is pure and total on
//! valid rectangles.

use serde::{Deserialize, Serialize};

/// A point in page space (x rightward, y downward).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

/// An axis-aligned bounding box in page space.
///
/// Invariants: `x_min <= x_max`, `y_min <= y_max`, all coordinates finite.
/// Construction does not enforce them; [`Rect::validate`] does, and the
/// layout loader calls it so that errors can name the offending element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Rect {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl From<[f64; 4]> for Rect {
    fn from(v: [f64; 4]) -> Self {
        Rect {
            x_min: v[0],
            y_min: v[1],
            x_max: v[2],
            y_max: v[3],
        }
    }
}

impl From<Rect> for [f64; 4] {
    fn from(r: Rect) -> Self {
        [r.x_min, r.y_min, r.x_max, r.y_max]
    }
}

impl Rect {
    pub fn new(x_min: f64, y_min: f64, x_max: f64, y_max: f64) -> Self {
        Rect {
            x_min,
            y_min,
            x_max,
            y_max,
        }
    }

    /// Checks the rectangle invariants, returning a description of the
    /// violation if any.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let coords = [self.x_min, self.y_min, self.x_max, self.y_max];
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(format!("non-finite coordinate in {coords:?}"));
        }
        if self.x_min > self.x_max {
            return Err(format!("x_min {} > x_max {}", self.x_min, self.x_max));
        }
        if self.y_min > self.y_max {
            return Err(format!("y_min {} > y_max {}", self.y_min, self.y_max));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn center(&self) -> Point {
        Point {
            x: (self.x_min + self.x_max) / 2.0,
            y: (self.y_min + self.y_max) / 2.0,
        }
    }

    /// Smallest rectangle covering both `self` and `other`.
    pub fn union(&self, other: &Rect) -> Rect {
        Rect {
            x_min: self.x_min.min(other.x_min),
            y_min: self.y_min.min(other.y_min),
            x_max: self.x_max.max(other.x_max),
            y_max: self.y_max.max(other.y_max),
        }
    }

    /// True when the closed boxes share at least one point.
    pub fn intersects(&self, other: &Rect) -> bool {
        self.x_min <= other.x_max
            && other.x_min <= self.x_max
            && self.y_min <= other.y_max
            && other.y_min <= self.y_max
    }
}

/// One of the four edges two fields can share.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlignmentAxis {
    /// Compares `y_max` (bottom edges in screen coordinates).
    Bottom,
    /// Compares `y_min`.
    Top,
    /// Compares `x_min`.
    Left,
    /// Compares `x_max`.
    Right,
}

impl AlignmentAxis {
    pub const ALL: [AlignmentAxis; 4] = [
        AlignmentAxis::Bottom,
        AlignmentAxis::Top,
        AlignmentAxis::Left,
        AlignmentAxis::Right,
    ];
}

/// Distance over alignment, in pixels per alignment unit.
///
/// Two unaligned fields get [`Proximity::UNREACHABLE`], which compares
/// greater than every finite value, so they are never density neighbors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Proximity(f64);

impl Proximity {
    pub const UNREACHABLE: Proximity = Proximity(f64::INFINITY);

    /// Wraps a finite, non-negative value. The pipeline never produces
    /// anything else: distances are finite and alignment scores are in 1..=5
    /// whenever this constructor is reached.
    pub fn finite(value: f64) -> Self {
        debug_assert!(value.is_finite() && value >= 0.0, "bad proximity {value}");
        Proximity(value)
    }

    pub fn is_unreachable(&self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    /// The finite value, or `None` for unreachable. This is also the
    /// serialized form: traces store unreachable entries as null.
    pub fn as_option(&self) -> Option<f64> {
        self.is_finite().then_some(self.0)
    }

    pub fn from_option(v: Option<f64>) -> Self {
        match v {
            Some(x) => Proximity::finite(x),
            None => Proximity::UNREACHABLE,
        }
    }
}

impl Eq for Proximity {}

impl PartialOrd for Proximity {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Proximity {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Values are never NaN (finite() checks, UNREACHABLE is +inf).
        self.0.total_cmp(&other.0)
    }
}

impl std::fmt::Display for Proximity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_unreachable() {
            write!(f, "unreachable")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Minimum Euclidean distance between any two points of the closed boxes.
///
/// Computed in closed form: the per-axis gap is zero when the projections
/// overlap, so touching or overlapping rectangles are at distance 0. The
/// result is symmetric in its arguments.
pub fn rect_min_distance(a: &Rect, b: &Rect) -> f64 {
    let dx = (a.x_min - b.x_max).max(b.x_min - a.x_max).max(0.0);
    let dy = (a.y_min - b.y_max).max(b.y_min - a.y_max).max(0.0);
    (dx * dx + dy * dy).sqrt()
}

/// True when the two boxes share the given edge coordinate within `tol`
/// pixels. Rendered pages are noisy, so exact equality is the `tol = 0`
/// special case rather than the rule.
pub fn aligned(a: &Rect, b: &Rect, axis: AlignmentAxis, tol: f64) -> bool {
    let (ca, cb) = match axis {
        AlignmentAxis::Bottom => (a.y_max, b.y_max),
        AlignmentAxis::Top => (a.y_min, b.y_min),
        AlignmentAxis::Left => (a.x_min, b.x_min),
        AlignmentAxis::Right => (a.x_max, b.x_max),
    };
    (ca - cb).abs() <= tol
}

/// Weighted alignment score in 0..=5.
///
/// Bottom alignment counts twice because fields are read per line; top,
/// left, and right count once each.
pub fn alignment_score(a: &Rect, b: &Rect, tol: f64) -> u32 {
    let weight = |axis, w| if aligned(a, b, axis, tol) { w } else { 0 };
    weight(AlignmentAxis::Bottom, 2)
        + weight(AlignmentAxis::Top, 1)
        + weight(AlignmentAxis::Left, 1)
        + weight(AlignmentAxis::Right, 1)
}

/// Distance divided by alignment score.
///
/// Small when fields are close and well aligned. A zero alignment score
/// means the ratio is undefined; such pairs get [`Proximity::UNREACHABLE`]
/// so they can never fall inside a density scope.
pub fn proximity(a: &Rect, b: &Rect, tol: f64) -> Proximity {
    let score = alignment_score(a, b, tol);
    if score == 0 {
        Proximity::UNREACHABLE
    } else {
        Proximity::finite(rect_min_distance(a, b) / f64::from(score))
    }
}
