//! In-material field from the carrier charge, using softened two-dimensional Coulomb kernels.

use std::f64::consts::PI;

use super::mesh::{Mesh, MeshKind};
use super::params::RateParameters;
use super::state::ChargeDistribution;
use crate::constants::VACUUM_PERMITTIVITY;

/// Permittivity seen by in-plane fields. A sheet on the surface sits between vacuum and the
/// crystal and sees the average; charges in a slab see the crystal value.
pub fn in_plane_permittivity(rates: &RateParameters, mesh: &Mesh) -> f64 {
    match mesh.kind {
        MeshKind::Sheet { .. } => VACUUM_PERMITTIVITY * (rates.relative_permittivity + 1.0) / 2.0,
        MeshKind::Slab { .. } => VACUUM_PERMITTIVITY * rates.relative_permittivity,
    }
}

/// Field at `point` from a line charge `lambda` (C/m) at `source`:
/// λ/(2πε)·r/(r² + a²).
pub fn softened_line_field(lambda: f64, source: [f64; 2], point: [f64; 2], softening: f64, permittivity: f64) -> [f64; 2] {
    let dx = point[0] - source[0];
    let dy = point[1] - source[1];
    let k = lambda / (2.0 * PI * permittivity) / (dx * dx + dy * dy + softening * softening);
    [k * dx, k * dy]
}

/// Field at each node of `mesh` from the node charges in `charge`, using the same cell
/// kernel as the solver: uniformly charged strips on a sheet, softened lines in a slab.
pub fn self_consistent_field(charge: &ChargeDistribution, mesh: &Mesh, permittivity: f64) -> Vec<[f64; 2]> {
    match mesh.kind {
        MeshKind::Sheet { .. } => mesh
            .nodes
            .iter()
            .map(|pt| {
                let mut ex = 0.0;
                for j in 0..charge.len() {
                    let d = pt[0] - mesh.nodes[j][0];
                    ex += charge.line_charge[j] / (2.0 * PI * permittivity) * strip_factor(d, mesh.width[j], mesh.softening[j]);
                }
                [ex, 0.0]
            })
            .collect(),
        MeshKind::Slab { .. } => {
            let image = surface_image_factor(permittivity);
            mesh.nodes
                .iter()
                .map(|pt| {
                    let mut e = [0.0, 0.0];
                    for j in 0..charge.len() {
                        let k = charge.line_charge[j] / (2.0 * PI * permittivity);
                        let f = slab_cell_field(*pt, mesh.nodes[j], mesh.width[j], mesh.height[j], image);
                        e[0] += k * f[0];
                        e[1] += k * f[1];
                    }
                    e
                })
                .collect()
        }
    }
}

/// Relative strength of the image a charge inside the crystal sees across the vacuum
/// interface: (ε_r − 1)/(ε_r + 1).
pub fn surface_image_factor(permittivity: f64) -> f64 {
    let er = permittivity / VACUUM_PERMITTIVITY;
    (er - 1.0) / (er + 1.0)
}

/// Field shape (multiply by λ/(2πε)) at `point` of a uniformly charged slab cell centred at
/// `center` with lateral width `w` and depth extent `h`, plus its image above the surface
/// (depth coordinates are positive into the crystal).
pub fn slab_cell_field(point: [f64; 2], center: [f64; 2], w: f64, h: f64, image: f64) -> [f64; 2] {
    let direct = rectangle_field(point[0] - center[0], point[1] - center[1], w, h);
    let mirrored = rectangle_field(point[0] - center[0], point[1] + center[1], w, h);
    [direct[0] + image * mirrored[0], direct[1] + image * mirrored[1]]
}

/// Field shape of a uniformly charged w × h rectangle carrying unit line charge, at offset
/// (dx, dz) from its centre. Tends to (dx, dz)/(dx² + dz²) far away and stays finite on the
/// rectangle itself.
pub fn rectangle_field(dx: f64, dz: f64, w: f64, h: f64) -> [f64; 2] {
    let (u1, u2) = (dx + 0.5 * w, dx - 0.5 * w);
    let (v1, v2) = (dz + 0.5 * h, dz - 0.5 * h);
    let corner = |f: fn(f64, f64) -> f64| f(u1, v1) - f(u1, v2) - f(u2, v1) + f(u2, v2);
    [corner(rect_primitive) / (w * h), corner(|u, v| rect_primitive(v, u)) / (w * h)]
}

/// A primitive of u/(u² + v²) in both variables: ½·v·ln(u² + v²) + u·atan(v/u).
fn rect_primitive(u: f64, v: f64) -> f64 {
    let r2 = u * u + v * v;
    let log_term = if v == 0.0 { 0.0 } else { 0.5 * v * r2.ln() };
    let angle_term = if u == 0.0 { 0.0 } else { u * (v / u).atan() };
    log_term + angle_term
}

/// Field at arbitrary points; `softening[j]` belongs to source node j.
pub fn field_at_points(
    charge: &ChargeDistribution,
    softening: &[f64],
    points: &[[f64; 2]],
    permittivity: f64,
) -> Vec<[f64; 2]> {
    points
        .iter()
        .map(|&pt| {
            let mut e = [0.0, 0.0];
            for j in 0..charge.len() {
                if charge.line_charge[j] == 0.0 {
                    continue;
                }
                let f = softened_line_field(charge.line_charge[j], charge.nodes[j], pt, softening[j], permittivity);
                e[0] += f[0];
                e[1] += f[1];
            }
            e
        })
        .collect()
}

/// Lateral field shape of a uniformly charged strip of width `w` centred at offset `d`
/// from the field point, each line softened by `a`. Equals d/(d² + a²) for w → 0, so it
/// multiplies λ/(2πε) exactly like the point kernel.
pub fn strip_factor(d: f64, w: f64, a: f64) -> f64 {
    let hw = 0.5 * w;
    let num = (d + hw).powi(2) + a * a;
    let den = (d - hw).powi(2) + a * a;
    (num / den).ln() / (2.0 * w)
}
