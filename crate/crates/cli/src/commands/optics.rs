use clap::Args;

use ewall_core::decoherence::{log_grid, model_report, Model, ReportSettings};
use ewall_core::optics::{
    channel_height_family, contrast, cutoff_for_energy_loss, diffraction_pattern, gap_transmission, GapGeometry,
    GratingSetup, HeightFamilyPoint,
};
use ewall_core::Preset;

use super::{parse_range, scenario_arg, write_table, CliError, CliResult, Range, Status};
use crate::output::{Cell, Table};
use crate::OutputArgs;

#[derive(Debug, Clone, Args)]
pub struct DiffractArgs {
    /// Preset key or scenario file supplying the grating and beam.
    #[arg(long, default_value = "gaas_illuminated")]
    pub scenario: String,
    /// Decoherence amount; repeat for several ("inf" for fully decohered).
    #[arg(long = "rd", default_values_t = [0.0, 0.15, 1.0])]
    pub rds: Vec<f64>,
    /// Detector blur (standard deviation), m.
    #[arg(long)]
    pub blur: Option<f64>,
    /// Per-peak widths and contrasts instead of the sampled pattern.
    #[arg(long)]
    pub metrics: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn diffract(a: &DiffractArgs) -> CliResult<Status> {
    let scenario = scenario_arg(&a.scenario)?;
    let mut setup = GratingSetup::from_scenario(&scenario);
    if let Some(b) = a.blur {
        setup.blur_sigma = b;
    }
    let mut t = if a.metrics {
        Table::new(&["rd", "order", "center_m", "fwhm_m", "peak_contrast", "contrast"])
    } else {
        Table::new(&["rd", "detector_position_m", "intensity", "envelope"])
    };
    for &rd in &a.rds {
        let p = diffraction_pattern(&setup, rd)?;
        if a.metrics {
            let c = contrast(&p);
            for m in &p.peaks {
                t.push(vec![rd.into(), m.order.into(), m.center.into(), m.width.into(), m.contrast.into(), c.into()]);
            }
            if p.peaks.is_empty() {
                t.push(vec![rd.into(), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, c.into()]);
            }
        } else {
            for ((x, i), e) in p.positions.iter().zip(&p.intensity).zip(&p.envelope) {
                t.push(vec![rd.into(), (*x).into(), (*i).into(), (*e).into()]);
            }
        }
    }
    write_table(&t, "diffract", &a.output)?;
    Ok(Status::Ok)
}

#[derive(Debug, Clone, Args)]
pub struct GapArgs {
    /// Tilt scan, lo:hi:n in rad.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range, default_value = "-0.1:0.1:81")]
    pub tilt: Range,
    /// Probability of surviving one reflection.
    #[arg(long)]
    pub survival: Option<f64>,
    #[arg(long)]
    pub rays: Option<usize>,
    /// Instead of the tilt scan, report the gold-channel Zurek values with the beam height
    /// replaced by the bounce-averaged effective height, for each near-wall cutoff.
    #[arg(long)]
    pub channel: bool,
    /// Near-wall cutoffs for --channel, lo:hi:n in m (geometric spacing).
    #[arg(long, value_parser = parse_range, default_value = "1e-10:1e-7:7")]
    pub z_min: Range,
    /// Tilt of the crossed channel section for --channel, rad.
    #[arg(long, default_value_t = 2e-3)]
    pub channel_tilt: f64,
    /// Energy loss the cutoff search aims at for --channel, eV.
    #[arg(long, default_value_t = 48.0)]
    pub target_ev: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl GapArgs {
    fn apply(&self, mut g: GapGeometry) -> GapGeometry {
        if let Some(s) = self.survival {
            g.survival = s;
        }
        if let Some(r) = self.rays {
            g.rays = r;
        }
        g
    }
}

pub fn gap(a: &GapArgs) -> CliResult<Status> {
    if a.channel {
        return channel(a);
    }
    let g = a.apply(GapGeometry::default());
    let mut t = Table::new(&["tilt_rad", "transmission", "mean_reflections", "mean_height_m", "time_of_flight_s"]);
    for tilt in a.tilt.values() {
        let r = gap_transmission(&g, tilt)?;
        t.push(vec![
            r.tilt.into(),
            r.transmission.into(),
            r.mean_reflections.into(),
            r.mean_height.into(),
            r.time_of_flight.into(),
        ]);
    }
    write_table(&t, "gap", &a.output)?;
    Ok(Status::Ok)
}

fn family_row(t: &mut Table, kind: &str, p: &HeightFamilyPoint) {
    t.push(vec![
        kind.into(),
        p.z_min.into(),
        p.effective_height.into(),
        p.energy_loss_ev.into(),
        p.decoherence_amount.into(),
    ]);
}

fn channel(a: &GapArgs) -> CliResult<Status> {
    let r = a.z_min;
    if !(r.lo > 0.0 && r.hi >= r.lo) {
        return Err(CliError::Config("--z-min needs 0 < lo <= hi".into()));
    }
    if !(a.target_ev > 0.0) {
        return Err(CliError::Config("--target-ev must be positive".into()));
    }
    let scenario = Preset::GoldChannel.scenario();
    let g = a.apply(GapGeometry::channel_section());
    let mut t = Table::new(&["kind", "z_min_m", "effective_height_m", "energy_loss_ev", "decoherence_amount"]);
    let constant = model_report(&scenario, Model::Zurek, &ReportSettings::default())?;
    t.push(vec![
        "constant_height".into(),
        Cell::Empty,
        scenario.geometry.height.into(),
        constant.energy_loss.into(),
        constant.decoherence_amount.into(),
    ]);
    for p in channel_height_family(&scenario, &g, a.channel_tilt, &log_grid(r.lo, r.hi, r.n))? {
        family_row(&mut t, "bounce_averaged", &p);
    }
    match cutoff_for_energy_loss(&scenario, &g, a.channel_tilt, a.target_ev, (r.lo, r.hi))? {
        Some(p) => family_row(&mut t, "target_match", &p),
        None => eprintln!("no cutoff in [{:e}, {:e}] m gives {} eV", r.lo, r.hi, a.target_ev),
    }
    write_table(&t, "gap_channel", &a.output)?;
    Ok(Status::Ok)
}
