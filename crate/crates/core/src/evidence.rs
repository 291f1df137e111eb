//! Evidence mapping: decides whether a review's interaction with an incident
//! is proven, from distance, time and travel direction. Reviews that pass
//! are feedback.
//!
//! Everything here is a pure function of its arguments. All bounds are
//! inclusive.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contracts::{Incident, Review};

/// Planar simulation coordinates, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub const fn new(x: f64, y: f64) -> Self {
        Position { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamsError {
    #[error("radius must be > 0, got {0}")]
    Radius(f64),
    #[error("time window must be > 0, got {0}")]
    TimeWindow(f64),
    #[error("heading tolerance must be in (0, 180], got {0}")]
    HeadingTolerance(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationParams {
    /// Meters. May be infinite.
    pub radius: f64,
    /// Seconds. May be infinite.
    pub time_window: f64,
    /// Degrees in (0, 180].
    pub heading_tolerance: f64,
}

impl Default for VerificationParams {
    fn default() -> Self {
        VerificationParams {
            radius: 200.0,
            time_window: 900.0,
            heading_tolerance: 45.0,
        }
    }
}

impl VerificationParams {
    pub fn new(radius: f64, time_window: f64, heading_tolerance: f64) -> Result<Self, ParamsError> {
        let p = VerificationParams {
            radius,
            time_window,
            heading_tolerance,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters under which every review is verified.
    pub fn unbounded() -> Self {
        VerificationParams {
            radius: f64::INFINITY,
            time_window: f64::INFINITY,
            heading_tolerance: 180.0,
        }
    }

    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<(), ParamsError> {
        // NaN fails every `>` comparison, so it is rejected here too.
        if !(self.radius > 0.0) {
            return Err(ParamsError::Radius(self.radius));
        }
        if !(self.time_window > 0.0) {
            return Err(ParamsError::TimeWindow(self.time_window));
        }
        if !(self.heading_tolerance > 0.0 && self.heading_tolerance <= 180.0) {
            return Err(ParamsError::HeadingTolerance(self.heading_tolerance));
        }
        Ok(())
    }
}

/// Coordinate adapter for the distance test.
pub trait DistanceMetric {
    fn distance(&self, a: Position, b: Position) -> f64;
}

/// Euclidean distance on planar meters. The default.
#[derive(Debug, Clone, Copy, Default)]
pub struct Planar;

impl DistanceMetric for Planar {
    fn distance(&self, a: Position, b: Position) -> f64 {
        distance(a, b)
    }
}

/// Great-circle distance treating `x` as longitude and `y` as latitude, in
/// degrees, on a spherical earth.
#[derive(Debug, Clone, Copy)]
pub struct Haversine {
    pub earth_radius_m: f64,
}

impl Default for Haversine {
    fn default() -> Self {
        Haversine {
            earth_radius_m: 6_371_008.8,
        }
    }
}

impl DistanceMetric for Haversine {
    fn distance(&self, a: Position, b: Position) -> f64 {
        let (lat1, lat2) = (a.y.to_radians(), b.y.to_radians());
        let dlat = lat2 - lat1;
        let dlon = (b.x - a.x).to_radians();
        let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
        2.0 * self.earth_radius_m * h.sqrt().min(1.0).asin()
    }
}

pub fn distance(a: Position, b: Position) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

/// Maps any finite angle into [0, 360).
pub fn normalize_heading(deg: f64) -> f64 {
    let h = deg.rem_euclid(360.0);
    // rem_euclid of a tiny negative value can round up to exactly 360.
    if h >= 360.0 {
        0.0
    } else {
        h
    }
}

/// Circular difference between two headings, in [0, 180].
pub fn heading_difference(h1: f64, h2: f64) -> f64 {
    let d = (h1 - h2).abs().rem_euclid(360.0);
    d.min(360.0 - d)
}

pub fn heading_aligned(h1: f64, h2: f64, tol: f64) -> bool {
    heading_difference(h1, h2) <= tol
}

pub fn verify_interaction(incident: &Incident, review: &Review, params: &VerificationParams) -> bool {
    verify_interaction_with(&Planar, incident, review, params)
}

pub fn verify_interaction_with<M: DistanceMetric + ?Sized>(
    metric: &M,
    incident: &Incident,
    review: &Review,
    params: &VerificationParams,
) -> bool {
    let dt = incident.reported_at.abs_diff(review.observed_at) as f64;
    metric.distance(incident.location, review.location) <= params.radius
        && dt <= params.time_window
        && heading_aligned(incident.heading, review.heading, params.heading_tolerance)
}

/// The reviews whose interaction is verified, in their original order.
pub fn filter_feedback(incident: &Incident, reviews: &[Review], params: &VerificationParams) -> Vec<Review> {
    reviews
        .iter()
        .filter(|r| verify_interaction(incident, r, params))
        .cloned()
        .collect()
}

/// Number of reviews that would survive [`filter_feedback`].
pub fn count_feedback<'a>(incident: &Incident, reviews: impl IntoIterator<Item = &'a Review>, params: &VerificationParams) -> usize {
    reviews
        .into_iter()
        .filter(|r| verify_interaction(incident, r, params))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contracts::{Classification, IncidentId, ReviewId, Verdict};
    use crate::AccountId;
    use proptest::prelude::*;

    fn incident() -> Incident {
        Incident {
            incident_id: IncidentId(1),
            provider: AccountId(1),
            location: Position::new(0.0, 0.0),
            heading: 90.0,
            reported_at: 1000,
            classification: Classification::Accident,
        }
    }

    fn review(id: u64, x: f64, y: f64, heading: f64, t: u64) -> Review {
        Review {
            review_id: ReviewId(id),
            reviewer: AccountId(100 + id),
            incident_id: IncidentId(1),
            verdict: Verdict::Positive,
            location: Position::new(x, y),
            heading,
            observed_at: t,
        }
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(Position::new(0.0, 0.0), Position::new(3.0, 4.0)), 5.0);
        assert_eq!(distance(Position::new(7.0, -2.0), Position::new(7.0, -2.0)), 0.0);
    }

    #[test]
    fn heading_examples() {
        assert!(heading_aligned(10.0, 350.0, 45.0));
        assert_eq!(heading_difference(10.0, 350.0), 20.0);
        assert!(!heading_aligned(0.0, 180.0, 45.0));
        assert!(heading_aligned(90.0, 90.0, 0.001));
        assert!(heading_aligned(0.0, 180.0, 180.0));
    }

    #[test]
    fn normalize_wraps() {
        assert_eq!(normalize_heading(-90.0), 270.0);
        assert_eq!(normalize_heading(720.0), 0.0);
        assert_eq!(normalize_heading(-1e-20), 0.0);
        assert!(normalize_heading(-1e-20) < 360.0);
    }

    #[test]
    fn params_validation() {
        assert!(VerificationParams::new(0.0, 1.0, 10.0).is_err());
        assert!(VerificationParams::new(1.0, -1.0, 10.0).is_err());
        assert!(VerificationParams::new(1.0, 1.0, 180.5).is_err());
        assert!(VerificationParams::new(f64::NAN, 1.0, 10.0).is_err());
        assert!(VerificationParams::unbounded().validate().is_ok());
    }

    #[test]
    fn verify_examples() {
        let p = VerificationParams::default();
        let inc = incident();
        assert!(verify_interaction(&inc, &review(1, 50.0, 0.0, 90.0, 1060), &p));
        // parked far away
        assert!(!verify_interaction(&inc, &review(2, 25_000.0, 3_000.0, 90.0, 1060), &p));
        // opposite carriageway
        assert!(!verify_interaction(&inc, &review(3, 20.0, 0.0, 270.0, 1010), &p));
        // stale
        assert!(!verify_interaction(&inc, &review(4, 20.0, 0.0, 90.0, 1901), &p));
    }

    #[test]
    fn boundaries_are_inclusive() {
        let p = VerificationParams::default();
        let inc = incident();
        assert!(verify_interaction(&inc, &review(1, 200.0, 0.0, 135.0, 1900), &p));
        assert!(verify_interaction(&inc, &review(2, 0.0, -200.0, 45.0, 100), &p));
    }

    #[test]
    fn filter_keeps_passing_subset_in_order() {
        let inc = incident();
        let p = VerificationParams::default();
        let reviews = vec![
            review(1, 10.0, 0.0, 90.0, 1000),    // pass
            review(2, 500.0, 0.0, 90.0, 1000),   // too far
            review(3, 0.0, 150.0, 100.0, 1500),  // pass
            review(4, 10.0, 10.0, 200.0, 1000),  // wrong way
            review(5, 10.0, 10.0, 90.0, 2500),   // too late
            review(6, -120.0, 150.0, 60.0, 400), // pass (~192 m, 30 deg, 600 s)
            review(7, 10.0, 10.0, 0.0, 1000),    // 90 deg off
            review(8, 199.0, 21.0, 90.0, 1000),  // just over 200 m
            review(9, 0.0, 0.0, 134.0, 100),     // pass
            review(10, 0.0, 0.0, 90.0, 99),      // 901 s early
        ];
        // Independent per-element check written out longhand.
        let brute: Vec<u64> = reviews
            .iter()
            .filter(|r| {
                let d = ((r.location.x).powi(2) + (r.location.y).powi(2)).sqrt();
                let dt = (r.observed_at as i64 - 1000).abs();
                let mut dh = (r.heading - 90.0).abs() % 360.0;
                if dh > 180.0 {
                    dh = 360.0 - dh;
                }
                d <= 200.0 && dt <= 900 && dh <= 45.0
            })
            .map(|r| r.review_id.0)
            .collect();
        assert_eq!(brute, vec![1, 3, 6, 9]);
        let out = filter_feedback(&inc, &reviews, &p);
        assert_eq!(out.iter().map(|r| r.review_id.0).collect::<Vec<_>>(), brute);
        assert_eq!(count_feedback(&inc, &reviews, &p), 4);
        assert!(filter_feedback(&inc, &[], &p).is_empty());
        assert_eq!(filter_feedback(&inc, &reviews, &VerificationParams::unbounded()), reviews);
    }

    #[test]
    fn haversine_one_degree_latitude() {
        let d = Haversine::default().distance(Position::new(0.0, 0.0), Position::new(0.0, 1.0));
        assert!((d - 111_195.08).abs() < 1.0, "{d}");
    }

    proptest! {
        #[test]
        fn distance_symmetric(ax in -1e6f64..1e6, ay in -1e6f64..1e6, bx in -1e6f64..1e6, by in -1e6f64..1e6) {
            let (a, b) = (Position::new(ax, ay), Position::new(bx, by));
            prop_assert_eq!(distance(a, b), distance(b, a));
            prop_assert!(distance(a, b) >= 0.0);
        }

        #[test]
        fn heading_difference_bounded(h1 in 0f64..360.0, h2 in 0f64..360.0) {
            let d = heading_difference(h1, h2);
            prop_assert!((0.0..=180.0).contains(&d));
            prop_assert_eq!(d, heading_difference(h2, h1));
        }

        #[test]
        fn enlarging_params_never_shrinks_feedback(
            x in -600f64..600.0, y in -600f64..600.0, h in 0f64..360.0, t in 0u64..3000,
            r in 1f64..500.0, w in 1f64..1500.0, tol in 1f64..180.0,
            dr in 0f64..300.0, dw in 0f64..900.0, dtol in 0f64..90.0,
        ) {
            let inc = incident();
            let rev = review(1, x, y, h, t);
            let small = VerificationParams::new(r, w, tol).unwrap();
            let large = VerificationParams::new(r + dr, w + dw, (tol + dtol).min(180.0)).unwrap();
            if verify_interaction(&inc, &rev, &small) {
                prop_assert!(verify_interaction(&inc, &rev, &large));
            }
        }
    }
}
