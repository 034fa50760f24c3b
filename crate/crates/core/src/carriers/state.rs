use std::sync::Arc;

use serde::Serialize;

use super::mesh::Mesh;

/// Carrier densities on a mesh at one instant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CarrierState {
    #[serde(skip)]
    pub mesh: Arc<Mesh>,
    /// m⁻³
    pub n: Vec<f64>,
    pub p: Vec<f64>,
    /// Trapped electrons, m⁻³; empty when the model has no traps.
    pub n_t: Vec<f64>,
    /// Field at the nodes (lateral, depth), V/m.
    pub field: Vec<[f64; 2]>,
    /// s
    pub time: f64,
    /// Number of negative densities reset to zero so far.
    pub clamp_events: usize,
    /// Charge per unit length generated optically so far (C/m), the scale for neutrality checks.
    pub generated_charge: f64,
}

impl CarrierState {
    pub fn lateral_field(&self) -> Vec<f64> {
        self.field.iter().map(|f| f[0]).collect()
    }
}

/// Net charge carried by each mesh node, as a line charge along the flight direction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChargeDistribution {
    /// (lateral x, depth below surface), m.
    pub nodes: Vec<[f64; 2]>,
    /// C/m
    pub line_charge: Vec<f64>,
    /// Lateral extent of each node's cell, m.
    pub cell_width: Vec<f64>,
    /// Factor applied to the vacuum field of these charges, 2/(ε_r + 1) for charges in a
    /// dielectric half-space.
    pub exterior_factor: f64,
    pub provenance: String,
}

impl ChargeDistribution {
    pub fn zero_like(&self) -> ChargeDistribution {
        ChargeDistribution {
            line_charge: vec![0.0; self.line_charge.len()],
            ..self.clone()
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Net charge per unit flight length, C/m.
    pub fn total(&self) -> f64 {
        pairwise_sum(&self.line_charge)
    }

    pub fn total_magnitude(&self) -> f64 {
        self.line_charge.iter().map(|q| q.abs()).sum()
    }

    /// Areal density C/m² (line charge over lateral cell width).
    pub fn areal_density(&self) -> Vec<f64> {
        self.line_charge
            .iter()
            .zip(&self.cell_width)
            .map(|(q, w)| q / w)
            .collect()
    }

    pub fn scaled(&self, k: f64) -> ChargeDistribution {
        ChargeDistribution {
            line_charge: self.line_charge.iter().map(|q| q * k).collect(),
            ..self.clone()
        }
    }

    /// Only the nodes no deeper than `max_depth`.
    pub fn surface_window(&self, max_depth: f64) -> ChargeDistribution {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| self.nodes[i][1] <= max_depth).collect();
        ChargeDistribution {
            nodes: keep.iter().map(|&i| self.nodes[i]).collect(),
            line_charge: keep.iter().map(|&i| self.line_charge[i]).collect(),
            cell_width: keep.iter().map(|&i| self.cell_width[i]).collect(),
            exterior_factor: self.exterior_factor,
            provenance: format!("{} (depth <= {max_depth:e} m)", self.provenance),
        }
    }

    /// Collapse depth: one node per distinct lateral position, charges summed.
    pub fn lateral_profile(&self) -> ChargeDistribution {
        let mut xs: Vec<(f64, f64)> = Vec::new();
        let mut qs: Vec<f64> = Vec::new();
        for i in 0..self.len() {
            let x = self.nodes[i][0];
            match xs.iter().position(|(xx, _)| *xx == x) {
                Some(j) => qs[j] += self.line_charge[i],
                None => {
                    xs.push((x, self.cell_width[i]));
                    qs.push(self.line_charge[i]);
                }
            }
        }
        let mut order: Vec<usize> = (0..xs.len()).collect();
        order.sort_by(|&a, &b| xs[a].0.total_cmp(&xs[b].0));
        ChargeDistribution {
            nodes: order.iter().map(|&j| [xs[j].0, 0.0]).collect(),
            line_charge: order.iter().map(|&j| qs[j]).collect(),
            cell_width: order.iter().map(|&j| xs[j].1).collect(),
            exterior_factor: self.exterior_factor,
            provenance: format!("{} (depth-summed)", self.provenance),
        }
    }
}

/// Pairwise summation, so reductions do not depend on accumulation order quirks.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        v.iter().sum()
    } else {
        let (a, b) = v.split_at(v.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}
