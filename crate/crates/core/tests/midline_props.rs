use proptest::prelude::*;
use telefold_core::design::{baseline, MidlineParams};
use telefold_core::midline::build_midline;
use telefold_core::Vec2;

fn params() -> impl Strategy<Value = MidlineParams> {
    (1usize..=5)
        .prop_flat_map(|n| {
            (
                5.0f64..40.0,
                15.0f64..60.0,
                Just(n),
                -1.0f64..=1.0,
                -1.0f64..=1.0,
                0.2f64..10.0,
                prop::collection::vec(0.5f64..1.5, n),
                prop::collection::vec(0.5f64..1.5, n),
            )
        })
        .prop_map(|(amplitude, radius, num_curves, center_offset, peak_valley_offset, curve_weight, ps, as_)| {
            MidlineParams {
                amplitude,
                radius,
                num_curves,
                center_offset,
                peak_valley_offset,
                curve_weight,
                period_scaling: ps,
                amplitude_scaling: as_,
            }
        })
}

/// Smallest circumradius over consecutive sample triples.
fn min_curvature_radius(pts: &[Vec2]) -> f64 {
    pts.windows(3)
        .map(|w| {
            let (a, b, c) = (w[0].distance(w[1]), w[1].distance(w[2]), w[0].distance(w[2]));
            let area2 = (w[1] - w[0]).cross(w[2] - w[0]).abs();
            if area2 > 0.0 {
                a * b * c / (2.0 * area2)
            } else {
                f64::INFINITY
            }
        })
        .fold(f64::INFINITY, f64::min)
}

proptest! {
    #[test]
    fn arc_coordinates_increase_strictly(p in params()) {
        let m = build_midline(&p, 32).unwrap();
        prop_assert_eq!(m.arc_coords()[0], 0.0);
        prop_assert!(m.arc_coords().windows(2).all(|w| w[1] > w[0]));
        // Chord sums are arc coordinates by definition.
        let chords: f64 = m.samples().windows(2).map(|w| w[0].distance(w[1])).sum();
        prop_assert!((chords - m.total_length()).abs() < 1e-9 * chords);
    }

    #[test]
    fn spans_partition_the_radius(p in params()) {
        let m = build_midline(&p, 16).unwrap();
        prop_assert_eq!(m.segments().len(), p.num_curves);
        prop_assert!((m.samples()[0].x - p.radius).abs() < 1e-12);
        prop_assert!(m.samples().last().unwrap().x.abs() < 1e-12);
        let total: f64 = p.period_scaling.iter().sum();
        for (i, seg) in m.segments().iter().enumerate() {
            let cps = seg.nurbs.control_points();
            let span = cps[0].x - cps[4].x;
            prop_assert!((span - p.radius * p.period_scaling[i] / total).abs() < 1e-9);
            let rise = (cps[0].y - cps[4].y).abs();
            prop_assert!((rise - p.amplitude * p.amplitude_scaling[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn scaling_both_lengths_scales_the_curve(p in params(), k in 0.25f64..4.0) {
        let a = build_midline(&p, 24).unwrap();
        let mut q = p.clone();
        q.amplitude *= k;
        q.radius *= k;
        let b = build_midline(&q, 24).unwrap();
        let scale = p.amplitude.max(p.radius) * k;
        for (u, v) in a.samples().iter().zip(b.samples()) {
            prop_assert!((*u * k).distance(*v) < 1e-9 * scale);
        }
        prop_assert!((a.total_length() * k - b.total_length()).abs() < 1e-9 * b.total_length());
    }

    #[test]
    fn consecutive_segments_meet(p in params()) {
        let m = build_midline(&p, 16).unwrap();
        for w in m.segments().windows(2) {
            prop_assert_eq!(w[0].last_sample, w[1].first_sample);
            prop_assert_eq!(w[0].nurbs.control_points()[4], w[1].nurbs.control_points()[0]);
            prop_assert_ne!(w[0].starts_at_peak, w[1].starts_at_peak);
        }
    }
}

#[test]
fn heavier_weight_sharpens_folds() {
    let mut low = baseline().sections.0[0].midline.clone();
    low.curve_weight = 1.0;
    let mut high = low.clone();
    high.curve_weight = 10.0;
    let rl = min_curvature_radius(build_midline(&low, 256).unwrap().samples());
    let rh = min_curvature_radius(build_midline(&high, 256).unwrap().samples());
    assert!(rh < rl, "low {rl} high {rh}");
}
