//! Wigner-function grids of oscillator steady states.

use std::fmt::Write as _;

use super::config::WignerSpec;
use super::run::mean_occupation;
use crate::error::{Error, Result};
use crate::measures::{wigner_grid, WignerGrid};
use crate::models::ModelSpec;

/// Wigner grid plus the undriven reference occupation.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerOutput {
    pub site: usize,
    pub grid: WignerGrid,
    /// `⟨a†a⟩` of the same model with its drive or coupling set to zero;
    /// `√⟨a†a⟩` is the radius of the undriven ring.
    pub reference_occupation: f64,
    pub occupation: f64,
}

/// The model with its external drive (or, failing that, coupling) removed.
pub fn undriven_reference(model: &ModelSpec) -> ModelSpec {
    for name in ["drive", "coupling"] {
        if let Ok(m) = model.with_param(name, 0.0) {
            return m;
        }
    }
    model.clone()
}

pub fn wigner_command(model: &ModelSpec, spec: &WignerSpec) -> Result<WignerOutput> {
    let bosons = model.boson_sites();
    let site = match spec.site {
        Some(s) if bosons.contains(&s) => s,
        Some(s) => return Err(Error::param("wigner.site", format!("site {s} is not an oscillator"))),
        None => *bosons
            .first()
            .ok_or_else(|| Error::param("wigner.site", format!("`{}` has no oscillator", model.kind())))?,
    };
    let rho = model.steady_state()?.rho;
    let grid = wigner_grid(&rho, site, &spec.x.values(), &spec.p.values())?;
    let reference = undriven_reference(model).steady_state()?.rho;
    Ok(WignerOutput {
        site,
        grid,
        reference_occupation: mean_occupation(&reference, site)?,
        occupation: mean_occupation(&rho, site)?,
    })
}

/// `# key=value` metadata line, then `x,p,W` rows with `p` outer.
pub fn emit_wigner_csv(out: &WignerOutput) -> String {
    let mut text = format!(
        "# site={},reference_occupation={},occupation={},truncation_warning={}\nx,p,W\n",
        out.site, out.reference_occupation, out.occupation, out.grid.truncation_warning
    );
    for (ip, &p) in out.grid.ps.iter().enumerate() {
        for (ix, &x) in out.grid.xs.iter().enumerate() {
            let _ = writeln!(text, "{x},{p},{}", out.grid.values[ip][ix]);
        }
    }
    text
}
