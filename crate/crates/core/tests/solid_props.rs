use proptest::prelude::*;
use telefold_core::design::{baseline, DesignParams, GenerationResolution, Section};
use telefold_core::solid::{interpolate_sections, loft, mesh_diagnostics, section_contour, section_frames};
use telefold_core::Vec3;

fn coarse() -> GenerationResolution {
    GenerationResolution { samples_per_segment: 24, contour_points: 96, angular_step_deg: 10.0, cell_size: None }
}

fn axisymmetric(amplitude: f64, thickness: f64, xmf: f64) -> DesignParams {
    let mut d = baseline();
    d.resolution = coarse();
    let s = &mut d.sections.0[0];
    s.midline.amplitude = amplitude;
    s.midline.peak_valley_offset = xmf;
    s.thickness.max_thickness = thickness;
    d
}

fn two_plane(theta1: f64, a0: f64, a1: f64, xmf1: f64) -> DesignParams {
    let mut d = axisymmetric(a0, 1.0, 0.0);
    let mut s = d.sections.0[0].clone();
    s.theta_deg = theta1;
    s.midline.amplitude = a1;
    s.midline.peak_valley_offset = xmf1;
    d.sections.0.push(s);
    d
}

fn rotate(v: Vec3, deg: f64) -> Vec3 {
    let (s, c) = deg.to_radians().sin_cos();
    Vec3::new(c * v.x - s * v.y, s * v.x + c * v.y, v.z)
}

/// Independent periodic interpolation of one scalar between planes.
fn periodic_lerp(planes: &[(f64, f64)], theta: f64) -> f64 {
    let theta = theta.rem_euclid(360.0);
    let n = planes.len();
    for i in 0..n {
        let (t0, v0) = planes[i];
        let (t1, v1) = if i + 1 < n { planes[i + 1] } else { (planes[0].0 + 360.0, planes[0].1) };
        for shift in [0.0, 360.0] {
            let th = theta + shift;
            if th >= t0 && th < t1 {
                return v0 + (v1 - v0) * (th - t0) / (t1 - t0);
            }
        }
    }
    unreachable!("planes cover the circle")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn axisymmetric_meshes_are_rotation_invariant(a in 12.0f64..28.0, t in 0.6f64..1.4, xmf in -0.4f64..0.4) {
        let d = axisymmetric(a, t, xmf).validate().unwrap();
        let mesh = loft(&d).unwrap();
        let k = d.resolution().contour_points;
        let n = mesh.vertices.len() / k;
        for j in 0..n {
            for i in 0..k {
                let v = rotate(mesh.vertices[j * k + i], 10.0);
                prop_assert!((v - mesh.vertices[((j + 1) % n) * k + i]).length() < 1e-9);
            }
        }
        // Sorted vertex sets agree as well.
        let key = |v: &Vec3| ((v.z * 1e6).round() as i64, ((v.x.hypot(v.y)) * 1e6).round() as i64);
        let mut a: Vec<_> = mesh.vertices.iter().map(key).collect();
        let mut b: Vec<_> = mesh.vertices.iter().map(|v| key(&rotate(*v, 10.0))).collect();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
        prop_assert!(mesh_diagnostics(&mesh).watertight);
    }

    #[test]
    fn user_planes_are_embedded(step in 1usize..18, a0 in 12.0f64..28.0, a1 in 12.0f64..28.0, xmf in -0.4f64..0.4) {
        let theta1 = 10.0 * step as f64;
        let d = two_plane(theta1, a0, a1, xmf).validate().unwrap();
        let mesh = loft(&d).unwrap();
        let res = d.resolution();
        let k = res.contour_points;
        for s in d.sections() {
            let c = section_contour(s, res.samples_per_segment, d.hub_radius(), k, res.cell_size).unwrap();
            let j = (s.theta_deg / res.angular_step_deg).round() as usize;
            let (sn, cs) = s.theta_deg.to_radians().sin_cos();
            for (i, p) in c.vertices().iter().enumerate() {
                let expect = Vec3::new(p.x * cs, p.x * sn, p.y);
                prop_assert!((mesh.vertices[j * k + i] - expect).length() < 1e-9);
            }
        }
        let r = mesh_diagnostics(&mesh);
        prop_assert!(r.watertight && r.consistently_oriented);
        prop_assert_eq!(r.euler_characteristic, 0);
    }

    #[test]
    fn mirrored_sections_mirror_the_mesh(step in 1usize..18, a0 in 12.0f64..28.0, a1 in 12.0f64..28.0) {
        let theta1 = 10.0 * step as f64;
        let d = two_plane(theta1, a0, a1, 0.3);
        let mut m = d.clone();
        m.sections.0[1].theta_deg = 360.0 - theta1;
        let (rd, rm) = (
            mesh_diagnostics(&loft(&d.validate().unwrap()).unwrap()),
            mesh_diagnostics(&loft(&m.validate().unwrap()).unwrap()),
        );
        prop_assert!((rd.enclosed_volume - rm.enclosed_volume).abs() < 1e-9 * rd.enclosed_volume);
        prop_assert!((rd.surface_area - rm.surface_area).abs() < 1e-9 * rd.surface_area);
        prop_assert!((rd.bbox_min[0] - rm.bbox_min[0]).abs() < 1e-9);
        prop_assert!((rd.bbox_max[0] - rm.bbox_max[0]).abs() < 1e-9);
        prop_assert!((rd.bbox_min[1] + rm.bbox_max[1]).abs() < 1e-9);
        prop_assert!((rd.bbox_max[1] + rm.bbox_min[1]).abs() < 1e-9);
        prop_assert!((rd.bbox_min[2] - rm.bbox_min[2]).abs() < 1e-9);
        prop_assert!((rd.bbox_max[2] - rm.bbox_max[2]).abs() < 1e-9);
    }

    #[test]
    fn interpolation_matches_periodic_lerp(
        thetas in prop::collection::btree_set(0u32..72, 1..5),
        amps in prop::collection::vec(10.0f64..30.0, 5),
        query in -720.0f64..720.0,
    ) {
        let base = baseline().sections.0[0].clone();
        let sections: Vec<Section> = thetas
            .iter()
            .zip(&amps)
            .map(|(&t, &a)| {
                let mut s = base.clone();
                s.theta_deg = 5.0 * t as f64;
                s.midline.amplitude = a;
                s
            })
            .collect();
        let planes: Vec<(f64, f64)> = sections.iter().map(|s| (s.theta_deg, s.midline.amplitude)).collect();
        let got = interpolate_sections(&sections, query).midline.amplitude;
        let want = if planes.len() == 1 { planes[0].1 } else { periodic_lerp(&planes, query) };
        prop_assert!((got - want).abs() < 1e-9, "got {} want {}", got, want);
        for s in &sections {
            prop_assert_eq!(&interpolate_sections(&sections, s.theta_deg).midline, &s.midline);
        }
    }
}

#[test]
fn baseline_volume_converges_in_angle() {
    let coarse = baseline().validate().unwrap();
    let mut fine = baseline();
    fine.resolution.angular_step_deg = 2.5;
    let fine = fine.validate().unwrap();
    let (vc, vf) = (
        mesh_diagnostics(&loft(&coarse).unwrap()).enclosed_volume,
        mesh_diagnostics(&loft(&fine).unwrap()).enclosed_volume,
    );
    assert!((vc - vf).abs() / vf < 0.005, "coarse {vc} fine {vf}");
}

#[test]
fn baseline_digest_is_stable() {
    let d = baseline().validate().unwrap();
    let a = loft(&d).unwrap().digest();
    assert_eq!(a, loft(&d).unwrap().digest());
    let frames = section_frames(&d).unwrap();
    assert!(frames.windows(2).all(|w| w[0].contour == w[1].contour));
}

#[test]
fn midpoint_of_two_planes() {
    let d = two_plane(180.0, 10.0, 30.0, 0.0);
    assert!((interpolate_sections(d.sections.as_slice(), 90.0).midline.amplitude - 20.0).abs() < 1e-12);
}
