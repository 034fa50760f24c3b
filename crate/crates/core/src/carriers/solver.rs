//! Time integration of the continuity equations on a finite-volume mesh.
//!
//! The unknown vector stacks electrons, holes and (when traps exist) trapped electrons.
//! Backward Euler with Newton iterations is the workhorse because trap kinetics run on
//! seconds while dielectric relaxation runs on picoseconds; an explicit step with a
//! stability check is kept for small problems and cross-checks.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::field::{in_plane_permittivity, self_consistent_field, slab_cell_field, strip_factor, surface_image_factor};
use super::mesh::{Mesh, MeshKind};
use super::params::{CarrierConfig, IlluminationProfile, RateParameters, SolverSettings};
use super::state::{pairwise_sum, CarrierState, ChargeDistribution};
use super::transport::sg_flux;
use crate::constants::ELEMENTARY_CHARGE;
use crate::error::{Error, Result};

/// A mesh, its material and illumination, with the precomputed field kernel.
#[derive(Debug, Clone)]
pub struct CarrierSystem {
    pub mesh: Arc<Mesh>,
    pub rates: RateParameters,
    pub illumination: IlluminationProfile,
    pub permittivity: f64,
    /// Optical generation per node at full light, m⁻³s⁻¹.
    generation: Vec<f64>,
    /// Local photon flux per node at full light.
    local_flux: Vec<f64>,
    /// Face-normal field per unit density (m⁻³) at each source node.
    kernel: DMatrix<f64>,
    /// Density of fixed charge that makes the dark state neutral.
    background: f64,
    traps: bool,
}

impl CarrierSystem {
    /// Surface sheet model with generation confined to `layer_thickness`.
    pub fn sheet(rates: RateParameters, illumination: IlluminationProfile, settings: &SolverSettings) -> Result<Self> {
        rates.validate()?;
        illumination.validate()?;
        settings.validate()?;
        let mesh = Mesh::sheet(settings.half_width, settings.nodes, settings.layer_thickness, settings.edge_clustering);
        let generation = mesh
            .nodes
            .iter()
            .map(|nd| rates.absorbed_flux() * illumination.lateral(nd[0]) / settings.layer_thickness)
            .collect();
        let local_flux = mesh.nodes.iter().map(|nd| rates.photon_flux * illumination.lateral(nd[0])).collect();
        Ok(Self::assemble(mesh, rates, illumination, generation, local_flux, rates.has_traps()))
    }

    /// Lateral × depth slab; traps are not modelled here.
    pub fn slab(rates: RateParameters, illumination: IlluminationProfile, settings: &SolverSettings) -> Result<Self> {
        rates.validate()?;
        illumination.validate()?;
        settings.validate()?;
        let first = (settings.thickness / (4.0 * settings.depth_nodes as f64)).min(2e-6);
        let mesh = Mesh::slab(settings.half_width, settings.nodes, settings.thickness, settings.depth_nodes, first);
        let thickness = settings.thickness;
        let generation = mesh
            .nodes
            .iter()
            .map(|nd| {
                rates.absorbed_flux() * illumination.in_bulk(nd[0], nd[1], thickness) / illumination.penetration_depth
            })
            .collect();
        let local_flux = mesh
            .nodes
            .iter()
            .map(|nd| rates.photon_flux * illumination.in_bulk(nd[0], nd[1], thickness))
            .collect();
        Ok(Self::assemble(mesh, rates, illumination, generation, local_flux, false))
    }

    fn assemble(
        mesh: Mesh,
        rates: RateParameters,
        illumination: IlluminationProfile,
        generation: Vec<f64>,
        local_flux: Vec<f64>,
        traps: bool,
    ) -> Self {
        let permittivity = in_plane_permittivity(&rates, &mesh);
        let nf = mesh.faces.len();
        let nn = mesh.len();
        let mut kernel = DMatrix::zeros(nf, nn);
        let pref = ELEMENTARY_CHARGE / (2.0 * std::f64::consts::PI * permittivity);
        let image = surface_image_factor(permittivity);
        for (f, face) in mesh.faces.iter().enumerate() {
            for j in 0..nn {
                let dx = face.center[0] - mesh.nodes[j][0];
                let a = mesh.softening[j];
                kernel[(f, j)] = match mesh.kind {
                    MeshKind::Sheet { .. } => {
                        pref * mesh.volume[j] * strip_factor(dx, mesh.width[j], a) * face.normal[0]
                    }
                    MeshKind::Slab { .. } => {
                        let e = slab_cell_field(face.center, mesh.nodes[j], mesh.width[j], mesh.height[j], image);
                        pref * mesh.volume[j] * (e[0] * face.normal[0] + e[1] * face.normal[1])
                    }
                };
            }
        }
        let rates_eff = if traps { rates } else { RateParameters { trap_density: 0.0, ..rates } };
        let background = rates.p0 - rates.n0 - rates_eff.dark_trap_occupancy();
        CarrierSystem {
            mesh: Arc::new(mesh),
            rates: rates_eff,
            illumination,
            permittivity,
            generation,
            local_flux,
            kernel,
            background,
            traps,
        }
    }

    pub fn from_config(config: &CarrierConfig) -> Result<Self> {
        Self::sheet(config.rates, config.illumination, &config.solver)
    }

    pub fn has_traps(&self) -> bool {
        self.traps
    }

    fn species(&self) -> usize {
        if self.traps {
            3
        } else {
            2
        }
    }

    pub fn unknowns(&self) -> usize {
        self.species() * self.mesh.len()
    }

    /// Dark, field-free state with traps at their equilibrium occupancy.
    pub fn dark_state(&self) -> CarrierState {
        let nn = self.mesh.len();
        let nt = if self.traps {
            vec![self.rates.dark_trap_occupancy(); nn]
        } else {
            Vec::new()
        };
        let mut s = CarrierState {
            mesh: self.mesh.clone(),
            n: vec![self.rates.n0; nn],
            p: vec![self.rates.p0; nn],
            n_t: nt,
            field: vec![[0.0, 0.0]; nn],
            time: 0.0,
            clamp_events: 0,
            generated_charge: 0.0,
        };
        self.refresh_field(&mut s);
        s
    }

    /// Net charge density p − n − n_t minus the neutralising background, in units of e.
    fn charge_density(&self, u: &[f64]) -> Vec<f64> {
        let nn = self.mesh.len();
        (0..nn)
            .map(|i| {
                let nt = if self.traps { u[2 * nn + i] } else { 0.0 };
                u[nn + i] - u[i] - nt - self.background
            })
            .collect()
    }

    pub fn charge(&self, state: &CarrierState) -> ChargeDistribution {
        let u = self.pack(state);
        let q = self.charge_density(&u);
        ChargeDistribution {
            nodes: self.mesh.nodes.clone(),
            line_charge: q
                .iter()
                .zip(&self.mesh.volume)
                .map(|(qi, v)| ELEMENTARY_CHARGE * qi * v)
                .collect(),
            cell_width: self.mesh.width.clone(),
            exterior_factor: 2.0 / (self.rates.relative_permittivity + 1.0),
            provenance: format!(
                "{} carriers, t = {:e} s",
                match self.mesh.kind {
                    MeshKind::Sheet { .. } => "sheet",
                    MeshKind::Slab { .. } => "slab",
                },
                state.time
            ),
        }
    }

    pub fn refresh_field(&self, state: &mut CarrierState) {
        let charge = self.charge(state);
        state.field = self_consistent_field(&charge, &self.mesh, self.permittivity);
    }

    pub fn pack(&self, state: &CarrierState) -> Vec<f64> {
        let mut u = Vec::with_capacity(self.unknowns());
        u.extend_from_slice(&state.n);
        u.extend_from_slice(&state.p);
        if self.traps {
            u.extend_from_slice(&state.n_t);
        }
        u
    }

    fn unpack(&self, u: &[f64], template: &CarrierState, time: f64) -> CarrierState {
        let nn = self.mesh.len();
        let mut s = CarrierState {
            mesh: self.mesh.clone(),
            n: u[..nn].to_vec(),
            p: u[nn..2 * nn].to_vec(),
            n_t: if self.traps { u[2 * nn..].to_vec() } else { Vec::new() },
            field: Vec::new(),
            time,
            clamp_events: template.clamp_events,
            generated_charge: template.generated_charge,
        };
        self.refresh_field(&mut s);
        s
    }

    /// Optical generation integrated over the mesh, particles per second per unit length.
    pub fn generation_rate(&self, light: f64) -> f64 {
        light * pairwise_sum(&self.generation.iter().zip(&self.mesh.volume).map(|(g, v)| g * v).collect::<Vec<_>>())
    }

    /// Time derivative f(u) and optionally its Jacobian, with the light scaled by `light`.
    fn rhs(&self, u: &[f64], light: f64, jac: Option<&mut DMatrix<f64>>) -> Vec<f64> {
        let nn = self.mesh.len();
        let r = &self.rates;
        let mut f = vec![0.0; u.len()];
        let q = self.charge_density(u);
        let xi = &self.kernel * DVector::from_column_slice(&q);
        let mut jac = jac;
        if let Some(j) = jac.as_deref_mut() {
            j.fill(0.0);
        }

        for (fi, face) in self.mesh.faces.iter().enumerate() {
            let (a, b) = (face.a, face.b);
            let (va, vb) = (self.mesh.volume[a], self.mesh.volume[b]);
            let (sa, sb) = (face.area / va, face.area / vb);
            let (gn, dn_a, dn_b, dn_drift) = sg_flux(r.d_n, face.distance, -r.mu_n * xi[fi], u[a], u[b]);
            let (gp, dp_a, dp_b, dp_drift) = sg_flux(r.d_p, face.distance, r.mu_p * xi[fi], u[nn + a], u[nn + b]);
            f[a] -= gn * sa;
            f[b] += gn * sb;
            f[nn + a] -= gp * sa;
            f[nn + b] += gp * sb;
            if let Some(j) = jac.as_deref_mut() {
                j[(a, a)] -= dn_a * sa;
                j[(a, b)] -= dn_b * sa;
                j[(b, a)] += dn_a * sb;
                j[(b, b)] += dn_b * sb;
                j[(nn + a, nn + a)] -= dp_a * sa;
                j[(nn + a, nn + b)] -= dp_b * sa;
                j[(nn + b, nn + a)] += dp_a * sb;
                j[(nn + b, nn + b)] += dp_b * sb;
                // flux sensitivity to the face field, then field sensitivity to every node
                let dgn = dn_drift * (-r.mu_n);
                let dgp = dp_drift * r.mu_p;
                for k in 0..nn {
                    let kf = self.kernel[(fi, k)];
                    if kf == 0.0 {
                        continue;
                    }
                    // ∂q_k/∂n_k = −1, ∂q_k/∂p_k = +1, ∂q_k/∂nt_k = −1
                    let en = dgn * kf;
                    let ep = dgp * kf;
                    j[(a, k)] += en * sa;
                    j[(a, nn + k)] -= en * sa;
                    j[(b, k)] -= en * sb;
                    j[(b, nn + k)] += en * sb;
                    j[(nn + a, k)] += ep * sa;
                    j[(nn + a, nn + k)] -= ep * sa;
                    j[(nn + b, k)] -= ep * sb;
                    j[(nn + b, nn + k)] += ep * sb;
                    if self.traps {
                        j[(a, 2 * nn + k)] += en * sa;
                        j[(b, 2 * nn + k)] -= en * sb;
                        j[(nn + a, 2 * nn + k)] += ep * sa;
                        j[(nn + b, 2 * nn + k)] -= ep * sb;
                    }
                }
            }
        }

        let thermal = r.c_np * r.n0 * r.p0;
        for i in 0..nn {
            let n = u[i];
            let p = u[nn + i];
            let g = light * self.generation[i];
            let band = r.c_np * n * p;
            f[i] += thermal + g - band;
            f[nn + i] += thermal + g - band;
            if let Some(j) = jac.as_deref_mut() {
                j[(i, i)] -= r.c_np * p;
                j[(i, nn + i)] -= r.c_np * n;
                j[(nn + i, i)] -= r.c_np * p;
                j[(nn + i, nn + i)] -= r.c_np * n;
            }
            if self.traps {
                let nt = u[2 * nn + i];
                let empty = r.trap_density - nt;
                let capture = r.c_nt * n * empty;
                let emit_rate = r.e_tn + r.sigma_opt * light * self.local_flux[i];
                let emission = emit_rate * nt;
                f[i] += emission - capture;
                f[2 * nn + i] += capture - emission;
                if let Some(j) = jac.as_deref_mut() {
                    j[(i, i)] -= r.c_nt * empty;
                    j[(i, 2 * nn + i)] += emit_rate + r.c_nt * n;
                    j[(2 * nn + i, i)] += r.c_nt * empty;
                    j[(2 * nn + i, 2 * nn + i)] -= emit_rate + r.c_nt * n;
                }
            }
        }
        f
    }

    /// Largest explicit step that keeps diffusion, drift and dielectric relaxation stable.
    pub fn explicit_step_bound(&self, state: &CarrierState) -> f64 {
        let r = &self.rates;
        let u = self.pack(state);
        let q = self.charge_density(&u);
        let xi = &self.kernel * DVector::from_column_slice(&q);
        let h = self.mesh.min_distance();
        let diffusion = 0.4 * h * h / r.d_n.max(r.d_p);
        let vmax = xi.iter().map(|e| e.abs() * r.mu_n.max(r.mu_p)).fold(0.0, f64::max);
        let drift = if vmax > 0.0 { h / vmax } else { f64::INFINITY };
        let cond = state
            .n
            .iter()
            .zip(&state.p)
            .map(|(n, p)| ELEMENTARY_CHARGE * (r.mu_n * n + r.mu_p * p))
            .fold(0.0, f64::max);
        let relax = if cond > 0.0 { 0.5 * self.permittivity / cond } else { f64::INFINITY };
        diffusion.min(drift).min(relax)
    }

    /// One forward-Euler step. Refuses steps above the stability bound.
    pub fn step_explicit(&self, state: &CarrierState, dt: f64, light: f64) -> Result<CarrierState> {
        let bound = self.explicit_step_bound(state);
        if dt > bound {
            return Err(Error::Stability { dt, required: bound });
        }
        let u = self.pack(state);
        let f = self.rhs(&u, light, None);
        let mut next: Vec<f64> = u.iter().zip(&f).map(|(ui, fi)| ui + dt * fi).collect();
        let clamps = self.clamp(&mut next);
        let mut s = self.unpack(&next, state, state.time + dt);
        s.clamp_events += clamps;
        s.generated_charge += ELEMENTARY_CHARGE * self.generation_rate(light) * dt;
        Ok(s)
    }

    fn clamp(&self, u: &mut [f64]) -> usize {
        let nn = self.mesh.len();
        let mut count = 0;
        for (i, v) in u.iter_mut().enumerate() {
            if *v < 0.0 {
                *v = 0.0;
                count += 1;
            }
            if self.traps && i >= 2 * nn && *v > self.rates.trap_density {
                *v = self.rates.trap_density;
                count += 1;
            }
        }
        count
    }

    /// One backward-Euler step solved by Newton's method. `None` if Newton fails to converge
    /// or leaves a significantly negative density; the caller should shorten the step.
    pub fn step_implicit(&self, state: &CarrierState, dt: f64, light: f64, settings: &SolverSettings) -> Option<CarrierState> {
        let old = self.pack(state);
        let m = old.len();
        let mut u = old.clone();
        let mut jac = DMatrix::zeros(m, m);
        let scale = old.iter().fold(0.0_f64, |a, v| a.max(v.abs())).max(1.0);
        let floor = 1e-9 * scale;
        let mut converged = false;
        for _ in 0..settings.max_newton {
            let f = self.rhs(&u, light, Some(&mut jac));
            let residual = DVector::from_iterator(m, (0..m).map(|i| -(u[i] - old[i] - dt * f[i])));
            jac.scale_mut(-dt);
            for i in 0..m {
                jac[(i, i)] += 1.0;
            }
            let lu = std::mem::replace(&mut jac, DMatrix::zeros(0, 0)).lu();
            let delta = lu.solve(&residual)?;
            jac = DMatrix::zeros(m, m);
            let mut worst: f64 = 0.0;
            for i in 0..m {
                u[i] += delta[i];
                worst = worst.max(delta[i].abs() / (u[i].abs() + floor));
            }
            if !worst.is_finite() {
                return None;
            }
            if worst < settings.newton_tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return None;
        }
        let nn = self.mesh.len();
        for (i, v) in u.iter().enumerate() {
            let cap = if self.traps && i >= 2 * nn { self.rates.trap_density } else { f64::INFINITY };
            if *v < -1e-6 * scale.min(cap) || *v > cap * (1.0 + 1e-9) {
                return None;
            }
        }
        let clamps = self.clamp(&mut u);
        let mut s = self.unpack(&u, state, state.time + dt);
        s.clamp_events += clamps;
        s.generated_charge += ELEMENTARY_CHARGE * self.generation_rate(light) * dt;
        Some(s)
    }

    /// Advance by `duration` with adaptive implicit steps no longer than `max_dt`.
    pub fn evolve(
        &self,
        state: &CarrierState,
        duration: f64,
        light: f64,
        max_dt: f64,
        settings: &SolverSettings,
    ) -> Result<CarrierState> {
        let end = state.time + duration;
        let mut s = state.clone();
        let mut dt = settings.initial_dt.min(max_dt);
        let mut failures = Vec::new();
        while s.time < end * (1.0 - 1e-14) {
            let step = dt.min(end - s.time);
            match self.step_implicit(&s, step, light, settings) {
                Some(next) => {
                    s = next;
                    dt = (dt * 2.0).min(max_dt);
                }
                None => {
                    dt *= 0.25;
                    failures.push(dt);
                    if dt < 1e-18 {
                        return Err(Error::NonConvergence {
                            steps: failures.len(),
                            residuals: failures,
                        });
                    }
                }
            }
        }
        s.time = end;
        Ok(s)
    }

    /// March in time until the state stops changing.
    pub fn solve_steady(&self, start: &CarrierState, light: f64, settings: &SolverSettings) -> Result<CarrierState> {
        let mut s = start.clone();
        let mut dt = settings.initial_dt;
        let mut history = Vec::new();
        for _ in 0..settings.max_steps {
            match self.step_implicit(&s, dt, light, settings) {
                Some(next) => {
                    let a = self.pack(&s);
                    let b = self.pack(&next);
                    let scale = b.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
                    let floor = 1e-9 * scale;
                    let change = a
                        .iter()
                        .zip(&b)
                        .map(|(x, y)| (y - x).abs() / (y.abs() + floor))
                        .fold(0.0, f64::max)
                        / dt;
                    history.push(change);
                    s = next;
                    if change < settings.steady_rate_tol {
                        return Ok(s);
                    }
                    dt = (dt * 2.0).min(settings.max_dt);
                }
                None => {
                    dt *= 0.25;
                    history.push(f64::NAN);
                    if dt < 1e-18 {
                        break;
                    }
                }
            }
        }
        let tail = history.len().saturating_sub(10);
        Err(Error::NonConvergence {
            steps: history.len(),
            residuals: history[tail..].to_vec(),
        })
    }
}
