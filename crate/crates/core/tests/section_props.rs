use std::f64::consts::PI;

use proptest::prelude::*;
use telefold_core::cross_section::{thickness_profile, union_of_circles, ClosedContour, ThicknessProfile};
use telefold_core::design::{baseline, ThicknessMode, ThicknessSpec};
use telefold_core::midline::build_midline;
use telefold_core::{Midline, Vec2};

/// A short random walk of disk centres with bounded turn angles.
fn centres() -> impl Strategy<Value = Vec<Vec2>> {
    prop::collection::vec(-0.8f64..0.8, 2..12).prop_map(|turns| {
        let mut heading = 0.0f64;
        let mut p = Vec2::new(0.0, 0.0);
        let mut out = vec![p];
        for t in turns {
            heading += t;
            p = p + Vec2::new(heading.cos(), heading.sin()) * 1.5;
            out.push(p);
        }
        out
    })
}

/// Brute-force distance field of a disk union.
fn field(p: Vec2, c: &[Vec2], r: &[f64]) -> f64 {
    c.iter().zip(r).map(|(c, r)| p.distance(*c) - r).fold(f64::INFINITY, f64::min)
}

proptest! {
    #[test]
    fn contour_lies_on_the_union_boundary(c in centres(), r in 1.0f64..2.5) {
        let m = Midline::from_points(c.clone()).unwrap();
        let t = ThicknessProfile::uniform(r, c.len()).unwrap();
        let cell = r / 4.0;
        let contour = union_of_circles(&m, &t, cell).unwrap();
        let radii = vec![r; c.len()];
        let worst = contour.vertices().iter().map(|v| field(*v, &c, &radii).abs()).fold(0.0, f64::max);
        prop_assert!(worst < 1e-9 * r, "worst {} cell {}", worst, cell);
        for p in &c {
            prop_assert!(contour.contains(*p));
        }
        prop_assert!(contour.signed_area() > 0.0);
        prop_assert!(contour.is_simple());
    }

    #[test]
    fn thicker_disks_enclose_more(c in centres(), r in 1.0f64..2.0, grow in 1.05f64..1.5) {
        let m = Midline::from_points(c.clone()).unwrap();
        let cell = r / 4.0;
        let thin = union_of_circles(&m, &ThicknessProfile::uniform(r, c.len()).unwrap(), cell).unwrap();
        let thick = union_of_circles(&m, &ThicknessProfile::uniform(r * grow, c.len()).unwrap(), cell).unwrap();
        prop_assert!(thick.area() > thin.area());
        for v in thin.vertices() {
            prop_assert!(thick.contains(*v) || thick.distance_to_boundary(*v) < 1e-6);
        }
    }

    #[test]
    fn resampling_error_shrinks_quadratically(r in 1.0f64..20.0, n in 2000usize..4000) {
        let circle: Vec<Vec2> = (0..n)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / n as f64;
                Vec2::new(r * a.cos(), r * a.sin())
            })
            .collect();
        let c = ClosedContour::new(circle, 0);
        let err = |k: usize| (c.area() - c.resample(k).unwrap().area()).abs() / c.area();
        let (e16, e64) = (err(16), err(64));
        // Inscribed polygon deficit scales as 1/K²: a 4× denser ring is ~16× closer.
        prop_assert!(e64 < e16 / 10.0, "e16 {} e64 {}", e16, e64);
        prop_assert!(e64 > 0.0);
    }

    #[test]
    fn resample_starts_at_anchor_and_is_ccw(c in centres(), k in 16usize..400) {
        let m = Midline::from_points(c.clone()).unwrap();
        let contour = union_of_circles(&m, &ThicknessProfile::uniform(1.5, c.len()).unwrap(), 0.375).unwrap();
        let anchor = contour.vertices()[contour.anchor_index()];
        let r = contour.resample(k).unwrap();
        prop_assert_eq!(r.len(), k);
        prop_assert_eq!(r.vertices()[0], anchor);
        prop_assert!(r.signed_area() > 0.0);
        let step = contour.perimeter() / k as f64;
        prop_assert!(r.vertices().windows(2).all(|w| w[0].distance(w[1]) <= step * (1.0 + 1e-9)));
    }

    #[test]
    fn every_mode_stays_within_max_thickness(
        f in prop::array::uniform3(0.05f64..=1.0),
        g in prop::array::uniform3(0.05f64..=1.0),
        max in 0.2f64..1.8,
        mode in prop::sample::select(vec![ThicknessMode::Constant, ThicknessMode::Variable, ThicknessMode::Collapsed, ThicknessMode::SBend]),
    ) {
        let m = build_midline(&baseline().sections.0[0].midline, 32).unwrap();
        let spec = ThicknessSpec {
            max_thickness: max,
            thickness_factors: f,
            mode,
            sbend_factors: (mode == ThicknessMode::SBend).then_some(g),
        };
        let t = thickness_profile(&m, &spec).unwrap();
        let lo = f.iter().chain(g.iter()).copied().fold(1.0, f64::min) * max;
        prop_assert_eq!(t.radii().len(), m.len());
        prop_assert!(t.radii().iter().all(|&v| v >= lo - 1e-12 && v <= max + 1e-12));
    }
}

#[test]
fn single_disk_default_resolution() {
    let m = Midline::from_points(vec![Vec2::new(0.0, 0.0)]).unwrap();
    let c = union_of_circles(&m, &ThicknessProfile::uniform(3.0, 1).unwrap(), 0.75).unwrap();
    assert!((c.area() - 9.0 * PI).abs() / (9.0 * PI) < 0.01);
}
