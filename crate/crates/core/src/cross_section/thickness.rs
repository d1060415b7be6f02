use alloc::vec;
use alloc::vec::Vec;

use crate::design::{ThicknessMode, ThicknessSpec};
use crate::midline::{ControlRole, Midline, SegmentLayout};

use super::SectionError;

/// Disk radius for every midline sample.
#[derive(Debug, Clone, PartialEq)]
pub struct ThicknessProfile {
    radii: Vec<f64>,
}

impl ThicknessProfile {
    pub fn new(radii: Vec<f64>) -> Result<Self, SectionError> {
        if let Some(&bad) = radii.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(SectionError::NonPositiveRadius(bad));
        }
        Ok(Self { radii })
    }

    pub fn uniform(radius: f64, samples: usize) -> Result<Self, SectionError> {
        Self::new(vec![radius; samples])
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn min(&self) -> f64 {
        self.radii.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.radii.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Anchor (sample index, radius) triples for one segment in sample order.
fn anchors(seg: &SegmentLayout, m: &Midline, factors: &[f64; 3], max: f64) -> [(usize, f64); 3] {
    let value = |role| match role {
        ControlRole::Peak => factors[0] * max,
        ControlRole::Center => factors[1] * max,
        _ => factors[2] * max,
    };
    let (start_role, end_role) = if seg.starts_at_peak {
        (ControlRole::Peak, ControlRole::Valley)
    } else {
        (ControlRole::Valley, ControlRole::Peak)
    };
    let center = seg.nearest_sample(m.samples(), ControlRole::Center);
    [(seg.first_sample, value(start_role)), (center, value(ControlRole::Center)), (seg.last_sample, value(end_role))]
}

/// Linear interpolation in arc length between anchors.
fn blend(seg: &SegmentLayout, m: &Midline, anchors: [(usize, f64); 3]) -> Vec<f64> {
    let s = m.arc_coords();
    (seg.first_sample..=seg.last_sample)
        .map(|i| {
            let (a, b) = if i <= anchors[1].0 { (anchors[0], anchors[1]) } else { (anchors[1], anchors[2]) };
            if a.0 == b.0 {
                return b.1;
            }
            let t = (s[i] - s[a.0]) / (s[b.0] - s[a.0]);
            a.1 + (b.1 - a.1) * t
        })
        .collect()
}

/// Step from the endpoint anchors to the central value one sample in.
fn collapsed(seg: &SegmentLayout, anchors: [(usize, f64); 3]) -> Vec<f64> {
    (seg.first_sample..=seg.last_sample)
        .map(|i| {
            if i == seg.first_sample {
                anchors[0].1
            } else if i == seg.last_sample {
                anchors[2].1
            } else {
                anchors[1].1
            }
        })
        .collect()
}

/// Assigns a disk radius to every midline sample according to the mode.
///
/// Anchors sit at the samples nearest each segment's CP1, CP3 and CP5. A
/// sample shared by two segments takes the mean of both segments' values.
pub fn thickness_profile(m: &Midline, spec: &ThicknessSpec) -> Result<ThicknessProfile, SectionError> {
    let max = spec.max_thickness;
    if spec.mode == ThicknessMode::Constant {
        return ThicknessProfile::uniform(max, m.len());
    }
    let segs = m.segments();
    if segs.is_empty() {
        return Err(SectionError::NoSegments(spec.mode.name()));
    }
    let second_set_start = segs.len().div_ceil(2);
    let mut sum = vec![0.0; m.len()];
    let mut count = vec![0u32; m.len()];
    for (i, seg) in segs.iter().enumerate() {
        let values = match spec.mode {
            ThicknessMode::Constant => unreachable!(),
            ThicknessMode::Variable => blend(seg, m, anchors(seg, m, &spec.thickness_factors, max)),
            ThicknessMode::Collapsed => {
                // 1-based odd segments carry the factors, the rest stay at full thickness.
                if i % 2 == 0 {
                    collapsed(seg, anchors(seg, m, &spec.thickness_factors, max))
                } else {
                    vec![max; seg.last_sample - seg.first_sample + 1]
                }
            }
            ThicknessMode::SBend => {
                let factors = if i < second_set_start {
                    &spec.thickness_factors
                } else {
                    spec.sbend_factors.as_ref().ok_or(SectionError::MissingSbendFactors)?
                };
                blend(seg, m, anchors(seg, m, factors, max))
            }
        };
        for (k, v) in values.into_iter().enumerate() {
            sum[seg.first_sample + k] += v;
            count[seg.first_sample + k] += 1;
        }
    }
    let radii = sum.into_iter().zip(count).map(|(s, c)| s / f64::from(c)).collect();
    ThicknessProfile::new(radii)
}
