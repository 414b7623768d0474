//! Deterministic key=value rendering of run reports.

use double_phase_core::solver::MountainPassGeometry;
use double_phase_core::{HypothesisReport, SolveReport};

use crate::io::fmt_f;

pub fn render_header(command: &str, config_path: &str, seed: u64) -> String {
    format!("[run]\ncommand={command}\nconfig={config_path}\nseed={seed}\n")
}

pub fn render_hypotheses(report: &HypothesisReport) -> String {
    format!("[hypotheses]\n{}", report.key_value_block())
}

pub fn render_geometry(geometry: &MountainPassGeometry) -> String {
    let mut out = String::from("[geometry]\n");
    out.push_str(&format!("phi_at_zero={}\n", fmt_f(geometry.phi_at_zero)));
    for sphere in &geometry.spheres {
        out.push_str(&format!(
            "sphere delta={} samples={} min_phi={} min_phi_plus={} min_phi_minus={}\n",
            fmt_f(sphere.delta),
            sphere.samples,
            fmt_f(sphere.min_phi),
            fmt_f(sphere.min_phi_plus),
            fmt_f(sphere.min_phi_minus)
        ));
    }
    out.push_str(&format!("ray_ridge_t={}\n", fmt_f(geometry.ray.ridge_t)));
    match geometry.ray.first_negative_t {
        Some(t) => out.push_str(&format!("ray_first_negative_t={}\n", fmt_f(t))),
        None => out.push_str("ray_first_negative_t=none\n"),
    }
    out.push_str(&format!(
        "ray_decreasing_doublings={}\n",
        geometry.ray.decreasing_doublings
    ));
    out
}

pub fn render_solution(name: &str, report: &SolveReport) -> String {
    let mut out = format!("[solution {name}]\n");
    out.push_str(&format!("converged={}\n", report.converged));
    out.push_str(&format!("iterations={}\n", report.iterations));
    out.push_str(&format!("residual={}\n", fmt_f(report.residual_norm)));
    out.push_str(&format!("scale={}\n", fmt_f(report.scale)));
    out.push_str(&format!("tolerance={}\n", fmt_f(report.tolerance)));
    out.push_str(&format!("phi={}\n", fmt_f(report.phi)));
    out.push_str(&format!("phi_truncated={}\n", fmt_f(report.phi_truncated)));
    out.push_str(&format!("i_p={}\n", fmt_f(report.energy.i_p)));
    out.push_str(&format!("i_q={}\n", fmt_f(report.energy.i_q)));
    out.push_str(&format!("f_term={}\n", fmt_f(report.energy.f_term)));
    out.push_str(&format!("nehari_whole={}\n", fmt_f(report.nehari_whole)));
    out.push_str(&format!("nehari_plus={}\n", fmt_f(report.nehari_plus)));
    out.push_str(&format!("nehari_minus={}\n", fmt_f(report.nehari_minus)));
    if let Some(t) = report.ray_scaling {
        out.push_str(&format!("ray_scaling={}\n", fmt_f(t)));
    }
    if let Some((s, t)) = report.pair_scaling {
        out.push_str(&format!("pair_scaling_s={}\n", fmt_f(s)));
        out.push_str(&format!("pair_scaling_t={}\n", fmt_f(t)));
    }
    out.push_str(&format!(
        "nodal_positive={}\nnodal_negative={}\nnodal_threshold={}\n",
        report.nodal.positive,
        report.nodal.negative,
        fmt_f(report.nodal.threshold)
    ));
    out.push_str(&format!("sup_norm={}\n", fmt_f(report.sup_norm)));
    out.push_str(&format!("growth_norm={}\n", fmt_f(report.growth_norm)));
    out.push_str(&format!("growth_ratio={}\n", fmt_f(report.growth_ratio)));
    out.push_str(&format!("guess={}\n", report.guess_label));
    out.push_str(&format!("restarts={}\n", report.restarts));
    out.push_str(&format!("accepted_steps={}\n", report.phi_trace.len() - 1));
    out
}
