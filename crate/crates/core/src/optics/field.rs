//! Electrostatic field above the wall from the carrier charge.
//!
//! Coordinates: x lateral along the surface, y along the electron flight, z height above the
//! surface (the wall occupies z < 0).

use serde::{Deserialize, Serialize};

use crate::carriers::ChargeDistribution;
use crate::constants::VACUUM_PERMITTIVITY;
use crate::error::{Error, Result};

const COULOMB: f64 = 1.0 / (4.0 * std::f64::consts::PI * VACUUM_PERMITTIVITY);

/// A static field with a potential, so trajectories can be checked for energy conservation.
pub trait ElectricField {
    /// V/m
    fn field(&self, p: [f64; 3]) -> [f64; 3];
    /// V
    fn potential(&self, p: [f64; 3]) -> f64;
}

/// A uniformly charged segment parallel to y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineSource {
    pub x: f64,
    pub z: f64,
    pub y0: f64,
    pub y1: f64,
    /// C/m
    pub lambda: f64,
}

impl LineSource {
    pub fn field(&self, p: [f64; 3]) -> [f64; 3] {
        let dx = p[0] - self.x;
        let dz = p[2] - self.z;
        let r2 = dx * dx + dz * dz;
        let u1 = self.y0 - p[1];
        let u2 = self.y1 - p[1];
        let s1 = (r2 + u1 * u1).sqrt();
        let s2 = (r2 + u2 * u2).sqrt();
        let k = COULOMB * self.lambda;
        // transverse part ∝ (u2/s2 − u1/s1)/r², axial part ∝ 1/s2 − 1/s1
        let transverse = k * (u2 / s2 - u1 / s1) / r2;
        let axial = k * (1.0 / s2 - 1.0 / s1);
        [transverse * dx, axial, transverse * dz]
    }

    pub fn potential(&self, p: [f64; 3]) -> f64 {
        let dx = p[0] - self.x;
        let dz = p[2] - self.z;
        let r = (dx * dx + dz * dz).sqrt();
        COULOMB * self.lambda * (((self.y1 - p[1]) / r).asinh() - ((self.y0 - p[1]) / r).asinh())
    }
}

/// A point charge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointSource {
    pub position: [f64; 3],
    /// C
    pub charge: f64,
}

impl PointSource {
    pub fn field(&self, p: [f64; 3]) -> [f64; 3] {
        let d = [p[0] - self.position[0], p[1] - self.position[1], p[2] - self.position[2]];
        let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
        let k = COULOMB * self.charge / (r2 * r2.sqrt());
        [k * d[0], k * d[1], k * d[2]]
    }

    pub fn potential(&self, p: [f64; 3]) -> f64 {
        let d = [p[0] - self.position[0], p[1] - self.position[1], p[2] - self.position[2]];
        COULOMB * self.charge / (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    }
}

/// Charges as seen from the vacuum side, with the dielectric already folded into the strengths.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ChargeLayout {
    pub lines: Vec<LineSource>,
    pub points: Vec<PointSource>,
}

impl ChargeLayout {
    /// Spread each node of `charge` over the cell width as `sublines` equal segments
    /// spanning y ∈ [y0, y1], and scale by the distribution's exterior factor.
    pub fn from_distribution(charge: &ChargeDistribution, y0: f64, y1: f64, max_subline_spacing: f64) -> ChargeLayout {
        let mut lines = Vec::new();
        for i in 0..charge.len() {
            let q = charge.line_charge[i] * charge.exterior_factor;
            if q == 0.0 {
                continue;
            }
            let w = charge.cell_width[i];
            let m = ((w / max_subline_spacing).ceil() as usize).max(1);
            for k in 0..m {
                lines.push(LineSource {
                    x: charge.nodes[i][0] + w * ((k as f64 + 0.5) / m as f64 - 0.5),
                    z: -charge.nodes[i][1],
                    y0,
                    y1,
                    lambda: q / m as f64,
                });
            }
        }
        ChargeLayout { lines, points: Vec::new() }
    }

    pub fn scaled(&self, k: f64) -> ChargeLayout {
        ChargeLayout {
            lines: self.lines.iter().map(|l| LineSource { lambda: l.lambda * k, ..*l }).collect(),
            points: self.points.iter().map(|p| PointSource { charge: p.charge * k, ..*p }).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty() && self.points.is_empty()
    }
}

impl ElectricField for ChargeLayout {
    fn field(&self, p: [f64; 3]) -> [f64; 3] {
        let mut e = [0.0; 3];
        for l in &self.lines {
            let f = l.field(p);
            e[0] += f[0];
            e[1] += f[1];
            e[2] += f[2];
        }
        for s in &self.points {
            let f = s.field(p);
            e[0] += f[0];
            e[1] += f[1];
            e[2] += f[2];
        }
        e
    }

    fn potential(&self, p: [f64; 3]) -> f64 {
        self.lines.iter().map(|l| l.potential(p)).sum::<f64>() + self.points.iter().map(|s| s.potential(p)).sum::<f64>()
    }
}

/// A constant field confined to y ∈ [y0, y1]; zero elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformField {
    pub field: [f64; 3],
    pub y0: f64,
    pub y1: f64,
}

impl ElectricField for UniformField {
    fn field(&self, p: [f64; 3]) -> [f64; 3] {
        if p[1] >= self.y0 && p[1] <= self.y1 {
            self.field
        } else {
            [0.0; 3]
        }
    }

    fn potential(&self, p: [f64; 3]) -> f64 {
        -(self.field[0] * p[0] + self.field[1] * p[1] + self.field[2] * p[2])
    }
}

/// Field above the surface from a charge layout. Points at or below the surface are rejected.
pub fn field_from_charges(layout: &ChargeLayout, point: [f64; 3]) -> Result<[f64; 3]> {
    if !(point[2] > 0.0) {
        return Err(Error::domain("z", point[2], "field point must lie above the surface"));
    }
    Ok(layout.field(point))
}
