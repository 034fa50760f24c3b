//! Geometric rays through a wedge-shaped gap between two reflecting plates.
//!
//! The plates are symmetric about the axis: the gap narrows linearly from `entry_gap` at y = 0
//! to `exit_gap` at y = `length`. Rays enter through the y = 0 aperture at angle `tilt` to the
//! axis and reflect specularly; a ray that turns around and leaves through the entrance is lost.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapGeometry {
    /// m
    pub entry_gap: f64,
    pub exit_gap: f64,
    pub length: f64,
    /// Height of the parallel ray bundle, centred on the axis at the entrance, m.
    pub beam_height: f64,
    pub rays: usize,
    /// Probability of surviving one reflection.
    pub survival: f64,
    /// Electron speed for time-of-flight, m/s.
    pub speed: f64,
    /// Reflection budget per ray before it is declared trapped.
    pub max_reflections: usize,
}

impl Default for GapGeometry {
    fn default() -> Self {
        GapGeometry {
            entry_gap: 15e-6,
            exit_gap: 1e-6,
            length: 15e-3,
            beam_height: 3e-6,
            rays: 201,
            survival: 1.0,
            speed: 0.01 / 4.1e-10,
            max_reflections: 100_000,
        }
    }
}

impl GapGeometry {
    pub fn validate(&self) -> Result<()> {
        crate::error::positive("exit_gap", self.exit_gap)?;
        if !(self.entry_gap > self.exit_gap) {
            return Err(Error::domain("entry_gap", self.entry_gap, "must exceed the exit gap"));
        }
        crate::error::positive("length", self.length)?;
        crate::error::positive("beam_height", self.beam_height)?;
        crate::error::positive("speed", self.speed)?;
        if !(0.0..=1.0).contains(&self.survival) {
            return Err(Error::domain("survival", self.survival, "must lie in [0, 1]"));
        }
        if self.rays == 0 {
            return Err(Error::Config("gap trace needs at least one ray".into()));
        }
        Ok(())
    }

    fn half_gap(&self, y: f64) -> f64 {
        0.5 * (self.entry_gap + (self.exit_gap - self.entry_gap) * y / self.length)
    }

    /// Slope dz/dy of the upper plate (negative for a narrowing gap).
    fn slope(&self) -> f64 {
        0.5 * (self.exit_gap - self.entry_gap) / self.length
    }

    /// Largest tilt at which some ray crosses without touching either plate.
    pub fn geometric_limit(&self) -> f64 {
        (0.5 * (self.entry_gap + self.exit_gap) / self.length).atan()
    }

    /// Distances to the upper and lower plates, measured perpendicular to each.
    fn wall_distances(&self, y: f64, z: f64) -> (f64, f64) {
        let c = (1.0 + self.slope().powi(2)).sqrt();
        let h = self.half_gap(y);
        ((h - z) / c, (h + z) / c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RaySegment {
    pub start: [f64; 2],
    pub end: [f64; 2],
}

impl RaySegment {
    pub fn length(&self) -> f64 {
        (self.end[0] - self.start[0]).hypot(self.end[1] - self.start[1])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayTrace {
    pub segments: Vec<RaySegment>,
    pub reflections: usize,
    pub transmitted: bool,
}

impl RayTrace {
    pub fn path_length(&self) -> f64 {
        self.segments.iter().map(RaySegment::length).sum()
    }

    /// Path-averaged max(d, z_min)⁻³ with d the distance to the nearest plate.
    pub fn mean_inverse_cube(&self, geometry: &GapGeometry, z_min: f64) -> Result<f64> {
        if !(z_min > 0.0) {
            return Err(Error::domain("z_min", z_min, "an explicit positive near-wall cutoff is required"));
        }
        let total = self.path_length();
        if total == 0.0 {
            return Err(Error::Config("empty ray".into()));
        }
        let mut acc = 0.0;
        for seg in &self.segments {
            acc += nearest_wall_integral(geometry, seg, z_min);
        }
        Ok(acc / total)
    }

    /// Path-averaged distance to the nearest plate.
    pub fn mean_height(&self, geometry: &GapGeometry) -> f64 {
        let total = self.path_length();
        let mut acc = 0.0;
        for seg in &self.segments {
            for (a, b, len) in nearest_pieces(geometry, seg) {
                acc += 0.5 * (a + b) * len;
            }
        }
        if total > 0.0 {
            acc / total
        } else {
            0.0
        }
    }
}

/// Split a segment where the nearest plate changes; yields (d_start, d_end, length) pieces.
fn nearest_pieces(g: &GapGeometry, seg: &RaySegment) -> Vec<(f64, f64, f64)> {
    let (t0, b0) = g.wall_distances(seg.start[0], seg.start[1]);
    let (t1, b1) = g.wall_distances(seg.end[0], seg.end[1]);
    let len = seg.length();
    let f0 = t0 - b0;
    let f1 = t1 - b1;
    if f0 * f1 < 0.0 {
        let s = f0 / (f0 - f1);
        let tm = t0 + s * (t1 - t0);
        let (first_start, first_end, second_end) = if f0 < 0.0 { (t0, tm, b1) } else { (b0, tm, t1) };
        vec![(first_start, first_end, s * len), (first_end, second_end, (1.0 - s) * len)]
    } else if f0 + f1 <= 0.0 {
        vec![(t0, t1, len)]
    } else {
        vec![(b0, b1, len)]
    }
}

/// Mean of max(u, z_min)⁻³ for u running linearly from `a` to `b`. Above the cutoff the mean
/// of u⁻³ is (a + b)/(2a²b²), which stays accurate when a ≈ b.
fn mean_clipped_inverse_cube(a: f64, b: f64, z_min: f64) -> f64 {
    let (lo, hi) = (a.min(b).max(0.0), a.max(b).max(0.0));
    let above = |lo: f64, hi: f64| (lo + hi) / (2.0 * lo * lo * hi * hi);
    if hi <= z_min {
        z_min.powi(-3)
    } else if lo >= z_min {
        above(lo, hi)
    } else {
        let clipped = (z_min - lo) / (hi - lo);
        clipped * z_min.powi(-3) + (1.0 - clipped) * above(z_min, hi)
    }
}

fn nearest_wall_integral(g: &GapGeometry, seg: &RaySegment, z_min: f64) -> f64 {
    nearest_pieces(g, seg)
        .into_iter()
        .map(|(a, b, len)| len * mean_clipped_inverse_cube(a, b, z_min))
        .sum()
}

/// Trace one ray entering at height `z0` with direction `tilt`.
pub fn trace_ray(g: &GapGeometry, z0: f64, tilt: f64) -> RayTrace {
    let slope = g.slope();
    let mut pos = [0.0, z0];
    let mut dir = [tilt.cos(), tilt.sin()];
    let mut segments = Vec::new();
    let mut reflections = 0;
    // unit normals pointing into the gap
    let nt = {
        let c = (1.0 + slope * slope).sqrt();
        [slope / c, -1.0 / c]
    };
    let nb = [nt[0], -nt[1]];
    loop {
        // distance along `dir` to each boundary
        let h0 = 0.5 * g.entry_gap;
        let to_top = {
            let denom = dir[1] - slope * dir[0];
            let gap = h0 + slope * pos[0] - pos[1];
            if denom > 0.0 {
                gap / denom
            } else {
                f64::INFINITY
            }
        };
        let to_bottom = {
            let denom = -dir[1] - slope * dir[0];
            let gap = h0 + slope * pos[0] + pos[1];
            if denom > 0.0 {
                gap / denom
            } else {
                f64::INFINITY
            }
        };
        let to_exit = if dir[0] > 0.0 { (g.length - pos[0]) / dir[0] } else { f64::INFINITY };
        let to_entry = if dir[0] < 0.0 { -pos[0] / dir[0] } else { f64::INFINITY };
        let t = to_top.min(to_bottom).min(to_exit).min(to_entry).max(0.0);
        let next = [pos[0] + t * dir[0], pos[1] + t * dir[1]];
        segments.push(RaySegment { start: pos, end: next });
        pos = next;
        if t == to_exit {
            return RayTrace {
                segments,
                reflections,
                transmitted: true,
            };
        }
        if t == to_entry || reflections >= g.max_reflections {
            return RayTrace {
                segments,
                reflections,
                transmitted: false,
            };
        }
        let n = if t == to_top { nt } else { nb };
        let dot = dir[0] * n[0] + dir[1] * n[1];
        dir = [dir[0] - 2.0 * dot * n[0], dir[1] - 2.0 * dot * n[1]];
        reflections += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapTransmission {
    pub tilt: f64,
    /// Surviving fraction of the entering rays.
    pub transmission: f64,
    /// Mean reflection count of the transmitted rays (of all rays if none get through).
    pub mean_reflections: f64,
    /// Mean distance to the nearest plate along transmitted rays, m.
    pub mean_height: f64,
    /// Mean time of flight through the gap for transmitted rays, s.
    pub time_of_flight: f64,
}

fn bundle(g: &GapGeometry) -> Vec<f64> {
    (0..g.rays)
        .map(|i| {
            if g.rays == 1 {
                0.0
            } else {
                g.beam_height * (i as f64 / (g.rays - 1) as f64 - 0.5)
            }
        })
        .collect()
}

/// Trace the bundle at one tilt.
pub fn gap_transmission(g: &GapGeometry, tilt: f64) -> Result<GapTransmission> {
    g.validate()?;
    if !(tilt.abs() < 0.5) {
        return Err(Error::domain("tilt", tilt, "must satisfy |tilt| < 0.5 rad"));
    }
    let mut weight_sum = 0.0;
    let mut refl = Vec::new();
    let mut heights = Vec::new();
    let mut times = Vec::new();
    let mut all_refl = Vec::new();
    for z0 in bundle(g) {
        if z0.abs() >= 0.5 * g.entry_gap {
            continue;
        }
        let ray = trace_ray(g, z0, tilt);
        all_refl.push(ray.reflections as f64);
        if ray.transmitted {
            let w = g.survival.powi(ray.reflections as i32);
            weight_sum += w;
            refl.push(ray.reflections as f64);
            heights.push(ray.mean_height(g));
            times.push(ray.path_length() / g.speed);
        }
    }
    let total_rays = g.rays as f64;
    let mean = |v: &[f64]| if v.is_empty() { 0.0 } else { crate::carriers::pairwise_sum(v) / v.len() as f64 };
    Ok(GapTransmission {
        tilt,
        transmission: weight_sum / total_rays,
        mean_reflections: if refl.is_empty() { mean(&all_refl) } else { mean(&refl) },
        mean_height: mean(&heights),
        time_of_flight: mean(&times),
    })
}

/// Path-averaged ⟨max(d, z_min)⁻³⟩ over the transmitted rays, and the matching effective
/// height ⟨·⟩^(−1/3).
pub fn bounce_averaged_z3(g: &GapGeometry, tilt: f64, z_min: f64) -> Result<(f64, f64)> {
    g.validate()?;
    let mut values = Vec::new();
    for z0 in bundle(g) {
        if z0.abs() >= 0.5 * g.entry_gap {
            continue;
        }
        let ray = trace_ray(g, z0, tilt);
        if ray.transmitted {
            values.push(ray.mean_inverse_cube(g, z_min)?);
        }
    }
    if values.is_empty() {
        return Err(Error::Config("no ray survives the gap at this tilt".into()));
    }
    let mean = crate::carriers::pairwise_sum(&values) / values.len() as f64;
    Ok((mean, mean.powf(-1.0 / 3.0)))
}

impl GapGeometry {
    /// The part of the gap the beam crosses in the channel experiment: 1.5 mm of flight with
    /// the plates about 1.7 µm apart.
    pub fn channel_section() -> GapGeometry {
        GapGeometry {
            entry_gap: 1.7e-6,
            exit_gap: 1.6e-6,
            length: 1.5e-3,
            beam_height: 1.0e-6,
            ..GapGeometry::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeightFamilyPoint {
    pub z_min: f64,
    /// ⟨max(d, z_min)⁻³⟩^(−1/3), m.
    pub effective_height: f64,
    pub energy_loss_ev: f64,
    pub decoherence_amount: f64,
}

/// Zurek loss and decoherence amount with the constant height replaced by the bounce-averaged
/// effective height, for each near-wall cutoff.
pub fn channel_height_family(
    scenario: &crate::scenario::Scenario,
    geometry: &GapGeometry,
    tilt: f64,
    z_mins: &[f64],
) -> Result<Vec<HeightFamilyPoint>> {
    use crate::decoherence::{model_report, Model, ReportSettings};
    z_mins
        .iter()
        .map(|&z_min| {
            let (_, z_eff) = bounce_averaged_z3(geometry, tilt, z_min)?;
            let mut s = scenario.clone();
            s.geometry.height = z_eff;
            let r = model_report(&s, Model::Zurek, &ReportSettings::default())?;
            Ok(HeightFamilyPoint {
                z_min,
                effective_height: z_eff,
                energy_loss_ev: r.energy_loss.unwrap_or(f64::NAN),
                decoherence_amount: r.decoherence_amount,
            })
        })
        .collect()
}

/// Near-wall cutoff at which the bounce-averaged Zurek loss equals `target_ev`, by log-space
/// bisection over [lo, hi]; None if the target is outside the bracket.
pub fn cutoff_for_energy_loss(
    scenario: &crate::scenario::Scenario,
    geometry: &GapGeometry,
    tilt: f64,
    target_ev: f64,
    (lo, hi): (f64, f64),
) -> Result<Option<HeightFamilyPoint>> {
    let eval = |z: f64| -> Result<HeightFamilyPoint> { Ok(channel_height_family(scenario, geometry, tilt, &[z])?[0]) };
    let (mut a, mut b) = (eval(lo)?, eval(hi)?);
    let miss = |p: &HeightFamilyPoint| (p.energy_loss_ev / target_ev).ln();
    if miss(&a) * miss(&b) > 0.0 {
        return Ok(None);
    }
    for _ in 0..100 {
        let m = eval((a.z_min * b.z_min).sqrt())?;
        if miss(&m).abs() < 1e-6 {
            return Ok(Some(m));
        }
        if miss(&m) * miss(&a) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(Some(a))
}
