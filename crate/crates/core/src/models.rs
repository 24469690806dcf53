//! Catalog of driven and coupled limit-cycle oscillators.
//!
//! Every model is expressed in the frame rotating with its drive (or with the
//! oscillator frequency for the hybrid model), so only detunings appear.
//! Parameters are addressed by flat snake_case names, which is what the sweep
//! configuration and [`ModelSpec::with_param`] use.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lindblad::{self, DissipatorTerm, SteadyState, Superoperator};
use crate::linalg::{CMatrix, C64, I};
use crate::ops::{boson_ops, embed, spin1_ops};

/// Hamiltonians must be Hermitian to this tolerance.
pub const HERMITIAN_BUILD_TOL: f64 = 1e-12;

/// Model parameters. Rates and frequencies share one (arbitrary) unit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ModelSpec {
    /// `H = −Δ a†a + iε(a − a†)`, `Γ_g D[a†] + Γ_d D[a²]`.
    DrivenVdp {
        detuning: f64,
        drive: f64,
        gamma_g: f64,
        gamma_d: f64,
        cutoff: usize,
    },
    /// Two undriven oscillators with `g (a₁†a₂ + a₁a₂†)`.
    CoupledVdpCoherent {
        a: Oscillator,
        b: Oscillator,
        coupling: f64,
    },
    /// Two undriven oscillators with the joint jump `g D[a₁ − a₂]`.
    CoupledVdpDissipative {
        a: Oscillator,
        b: Oscillator,
        coupling: f64,
    },
    /// `H = Δ S_z + ε S_y`, `(γ_g/2) D[S₊S_z] + (γ_d/2) D[S₋S_z]`.
    DrivenSpin1 {
        detuning: f64,
        drive: f64,
        gamma_g: f64,
        gamma_d: f64,
    },
    /// `H = Δ S_z^B + i g (S₋^A S₊^B − S₊^A S₋^B)`.
    CoupledSpin1 {
        detuning: f64,
        coupling: f64,
        a: SpinRates,
        b: SpinRates,
    },
    /// `H = δ S_z^A + (δ+Δ) S_z^B + ε Σ (S_z S₊ + S₋ S_z) + i g (S₊^A S₋^B − S₋^A S₊^B)`.
    CoupledDrivenSpin1 {
        local_detuning: f64,
        detuning: f64,
        drive: f64,
        coupling: f64,
        a: SpinRates,
        b: SpinRates,
    },
    /// Oscillator ⊗ spin-1 with `H = Δ S_z + ε (S₊ a + a† S₋)` and unhalved rates.
    HybridVdpSpin1 {
        detuning: f64,
        coupling: f64,
        osc_gamma_g: f64,
        osc_gamma_d: f64,
        spin_gamma_g: f64,
        spin_gamma_d: f64,
        cutoff: usize,
    },
}

/// Undriven van der Pol oscillator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Oscillator {
    pub detuning: f64,
    pub gamma_g: f64,
    pub gamma_d: f64,
    pub cutoff: usize,
}

/// Gain and damping of one spin-1 atom.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinRates {
    pub gamma_g: f64,
    pub gamma_d: f64,
}

/// Hamiltonian, jump operators and subsystem dimensions of a model.
#[derive(Clone, Debug)]
pub struct BuiltModel {
    pub hamiltonian: CMatrix,
    pub terms: Vec<DissipatorTerm>,
    pub dims: Vec<usize>,
}

impl BuiltModel {
    pub fn liouvillian(&self) -> Result<Superoperator> {
        lindblad::liouvillian(&self.hamiltonian, &self.terms, &self.dims)
    }
}

pub const MODEL_KINDS: [&str; 7] = [
    "driven_vdp",
    "coupled_vdp_coherent",
    "coupled_vdp_dissipative",
    "driven_spin1",
    "coupled_spin1",
    "coupled_driven_spin1",
    "hybrid_vdp_spin1",
];

enum Slot<'a> {
    Real(&'a mut f64),
    Cutoff(&'a mut usize),
}

#[derive(Clone, Copy)]
enum Role {
    Free,
    Rate,
    Gain,
    Damping,
    Fock,
}

impl ModelSpec {
    /// Default parameters for a model kind.
    pub fn default_for(kind: &str) -> Result<ModelSpec> {
        const OSC: Oscillator = Oscillator {
            detuning: 0.0,
            gamma_g: 1.0,
            gamma_d: 10.0,
            cutoff: 8,
        };
        const GAIN_A: SpinRates = SpinRates {
            gamma_g: 100.0,
            gamma_d: 1.0,
        };
        const DAMP_B: SpinRates = SpinRates {
            gamma_g: 1.0,
            gamma_d: 100.0,
        };
        Ok(match kind {
            "driven_vdp" => ModelSpec::DrivenVdp {
                detuning: 0.1,
                drive: 0.1,
                gamma_g: 1.0,
                gamma_d: 0.5,
                cutoff: 20,
            },
            "coupled_vdp_coherent" => ModelSpec::CoupledVdpCoherent {
                a: OSC,
                b: Oscillator { detuning: 0.1, ..OSC },
                coupling: 0.1,
            },
            "coupled_vdp_dissipative" => ModelSpec::CoupledVdpDissipative {
                a: OSC,
                b: Oscillator { detuning: 0.1, ..OSC },
                coupling: 0.1,
            },
            "driven_spin1" => ModelSpec::DrivenSpin1 {
                detuning: 0.1,
                drive: 0.1,
                gamma_g: 1.0,
                gamma_d: 10.0,
            },
            "coupled_spin1" => ModelSpec::CoupledSpin1 {
                detuning: 0.1,
                coupling: 0.1,
                a: GAIN_A,
                b: DAMP_B,
            },
            "coupled_driven_spin1" => ModelSpec::CoupledDrivenSpin1 {
                local_detuning: 0.0,
                detuning: 0.1,
                drive: 0.01,
                coupling: 0.1,
                a: GAIN_A,
                b: DAMP_B,
            },
            "hybrid_vdp_spin1" => ModelSpec::HybridVdpSpin1 {
                detuning: 0.1,
                coupling: 0.1,
                osc_gamma_g: 1.0,
                osc_gamma_d: 0.1,
                spin_gamma_g: 100.0,
                spin_gamma_d: 1.0,
                cutoff: 10,
            },
            other => {
                return Err(Error::param(
                    "type",
                    format!("unknown model `{other}`; expected one of {}", MODEL_KINDS.join(", ")),
                ))
            }
        })
    }

    /// Defaults overridden by `params`; every unknown or invalid entry is reported.
    pub fn from_params<'a>(
        kind: &str,
        params: impl IntoIterator<Item = (&'a str, f64)>,
    ) -> std::result::Result<ModelSpec, Vec<Error>> {
        let mut spec = ModelSpec::default_for(kind).map_err(|e| vec![e])?;
        let mut errors = Vec::new();
        for (name, value) in params {
            if let Err(e) = spec.set_param(name, value) {
                errors.push(e);
            }
        }
        errors.extend(spec.validate());
        if errors.is_empty() {
            Ok(spec)
        } else {
            Err(errors)
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ModelSpec::DrivenVdp { .. } => "driven_vdp",
            ModelSpec::CoupledVdpCoherent { .. } => "coupled_vdp_coherent",
            ModelSpec::CoupledVdpDissipative { .. } => "coupled_vdp_dissipative",
            ModelSpec::DrivenSpin1 { .. } => "driven_spin1",
            ModelSpec::CoupledSpin1 { .. } => "coupled_spin1",
            ModelSpec::CoupledDrivenSpin1 { .. } => "coupled_driven_spin1",
            ModelSpec::HybridVdpSpin1 { .. } => "hybrid_vdp_spin1",
        }
    }

    fn slots(&mut self) -> Vec<(&'static str, Role, Slot<'_>)> {
        use Role::*;
        use Slot::*;
        fn osc<'a>(o: &'a mut Oscillator, names: [&'static str; 4]) -> [(&'static str, Role, Slot<'a>); 4] {
            [
                (names[0], Free, Real(&mut o.detuning)),
                (names[1], Gain, Real(&mut o.gamma_g)),
                (names[2], Damping, Real(&mut o.gamma_d)),
                (names[3], Fock, Slot::Cutoff(&mut o.cutoff)),
            ]
        }
        fn spin<'a>(s: &'a mut SpinRates, names: [&'static str; 2]) -> [(&'static str, Role, Slot<'a>); 2] {
            [(names[0], Gain, Real(&mut s.gamma_g)), (names[1], Damping, Real(&mut s.gamma_d))]
        }
        const SPIN_A: [&str; 2] = ["gamma_g_a", "gamma_d_a"];
        const SPIN_B: [&str; 2] = ["gamma_g_b", "gamma_d_b"];
        let coupling_role = if matches!(self, ModelSpec::CoupledVdpDissipative { .. }) {
            Rate
        } else {
            Free
        };
        match self {
            ModelSpec::DrivenVdp {
                detuning,
                drive,
                gamma_g,
                gamma_d,
                cutoff,
            } => vec![
                ("detuning", Free, Real(detuning)),
                ("drive", Free, Real(drive)),
                ("gamma_g", Gain, Real(gamma_g)),
                ("gamma_d", Damping, Real(gamma_d)),
                ("cutoff", Role::Fock, Slot::Cutoff(cutoff)),
            ],
            ModelSpec::CoupledVdpCoherent { a, b, coupling } | ModelSpec::CoupledVdpDissipative { a, b, coupling } => {
                let mut v: Vec<_> = osc(a, ["detuning_a", "gamma_g_a", "gamma_d_a", "cutoff_a"]).into();
                v.extend(osc(b, ["detuning_b", "gamma_g_b", "gamma_d_b", "cutoff_b"]));
                v.push(("coupling", coupling_role, Real(coupling)));
                v
            }
            ModelSpec::DrivenSpin1 {
                detuning,
                drive,
                gamma_g,
                gamma_d,
            } => vec![
                ("detuning", Free, Real(detuning)),
                ("drive", Free, Real(drive)),
                ("gamma_g", Gain, Real(gamma_g)),
                ("gamma_d", Damping, Real(gamma_d)),
            ],
            ModelSpec::CoupledSpin1 { detuning, coupling, a, b } => {
                let mut v = vec![("detuning", Free, Real(detuning)), ("coupling", Free, Real(coupling))];
                v.extend(spin(a, SPIN_A));
                v.extend(spin(b, SPIN_B));
                v
            }
            ModelSpec::CoupledDrivenSpin1 {
                local_detuning,
                detuning,
                drive,
                coupling,
                a,
                b,
            } => {
                let mut v = vec![
                    ("local_detuning", Free, Real(local_detuning)),
                    ("detuning", Free, Real(detuning)),
                    ("drive", Free, Real(drive)),
                    ("coupling", Free, Real(coupling)),
                ];
                v.extend(spin(a, SPIN_A));
                v.extend(spin(b, SPIN_B));
                v
            }
            ModelSpec::HybridVdpSpin1 {
                detuning,
                coupling,
                osc_gamma_g,
                osc_gamma_d,
                spin_gamma_g,
                spin_gamma_d,
                cutoff,
            } => vec![
                ("detuning", Free, Real(detuning)),
                ("coupling", Free, Real(coupling)),
                ("osc_gamma_g", Gain, Real(osc_gamma_g)),
                ("osc_gamma_d", Damping, Real(osc_gamma_d)),
                ("spin_gamma_g", Gain, Real(spin_gamma_g)),
                ("spin_gamma_d", Damping, Real(spin_gamma_d)),
                ("cutoff", Role::Fock, Slot::Cutoff(cutoff)),
            ],
        }
    }

    /// Parameter names and values in canonical order.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        let mut copy = self.clone();
        copy.slots()
            .into_iter()
            .map(|(name, _, slot)| {
                let v = match slot {
                    Slot::Real(x) => *x,
                    Slot::Cutoff(n) => *n as f64,
                };
                (name, v)
            })
            .collect()
    }

    pub fn param_names(&self) -> Vec<&'static str> {
        self.params().into_iter().map(|(n, _)| n).collect()
    }

    pub fn get_param(&self, name: &str) -> Result<f64> {
        self.params()
            .into_iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| v)
            .ok_or_else(|| self.unknown(name))
    }

    fn unknown(&self, name: &str) -> Error {
        Error::param(
            name,
            format!("not a parameter of `{}` (expected one of {})", self.kind(), self.param_names().join(", ")),
        )
    }

    /// Sets one parameter in place. Cutoffs must be integral.
    pub fn set_param(&mut self, name: &str, value: f64) -> Result<()> {
        let kind = self.kind();
        let names = self.param_names();
        let slot = self.slots().into_iter().find(|(n, _, _)| *n == name);
        match slot {
            None => Err(Error::param(
                name,
                format!("not a parameter of `{kind}` (expected one of {})", names.join(", ")),
            )),
            Some((_, _, Slot::Real(x))) => {
                if !value.is_finite() {
                    return Err(Error::param(name, format!("must be finite, got {value}")));
                }
                *x = value;
                Ok(())
            }
            Some((_, _, Slot::Cutoff(n))) => {
                if !(value.fract() == 0.0 && value >= 0.0 && value <= u32::MAX as f64) {
                    return Err(Error::param(name, format!("cutoff must be a nonnegative integer, got {value}")));
                }
                *n = value as usize;
                Ok(())
            }
        }
    }

    /// Copy with one parameter replaced (not validated).
    pub fn with_param(&self, name: &str, value: f64) -> Result<ModelSpec> {
        let mut out = self.clone();
        out.set_param(name, value)?;
        Ok(out)
    }

    /// Every invariant violation.
    pub fn validate(&self) -> Vec<Error> {
        let mut copy = self.clone();
        let mut errors = Vec::new();
        for (name, role, slot) in copy.slots() {
            match (role, slot) {
                (_, Slot::Cutoff(n)) => {
                    if *n < 2 {
                        errors.push(Error::param(name, format!("Fock cutoff must be >= 2, got {n}")));
                    }
                }
                (Role::Free, Slot::Real(x)) => {
                    if !x.is_finite() {
                        errors.push(Error::param(name, format!("must be finite, got {x}")));
                    }
                }
                (Role::Rate, Slot::Real(x)) => {
                    if !(x.is_finite() && *x >= 0.0) {
                        errors.push(Error::param(name, format!("rate must be finite and >= 0, got {x}")));
                    }
                }
                (Role::Gain | Role::Damping | Role::Fock, Slot::Real(x)) => {
                    if !(x.is_finite() && *x > 0.0) {
                        let what = if matches!(role, Role::Gain) { "gain" } else { "damping" };
                        errors.push(Error::param(
                            name,
                            format!("{what} rate must be > 0 for a limit cycle to exist, got {x}"),
                        ));
                    }
                }
            }
        }
        errors
    }

    /// Subsystem dimensions.
    pub fn dims(&self) -> Vec<usize> {
        match self {
            ModelSpec::DrivenVdp { cutoff, .. } => vec![*cutoff],
            ModelSpec::CoupledVdpCoherent { a, b, .. } | ModelSpec::CoupledVdpDissipative { a, b, .. } => {
                vec![a.cutoff, b.cutoff]
            }
            ModelSpec::DrivenSpin1 { .. } => vec![3],
            ModelSpec::CoupledSpin1 { .. } | ModelSpec::CoupledDrivenSpin1 { .. } => vec![3, 3],
            ModelSpec::HybridVdpSpin1 { cutoff, .. } => vec![*cutoff, 3],
        }
    }

    /// Sites carrying a truncated Fock space.
    pub fn boson_sites(&self) -> Vec<usize> {
        match self {
            ModelSpec::DrivenVdp { .. } | ModelSpec::HybridVdpSpin1 { .. } => vec![0],
            ModelSpec::CoupledVdpCoherent { .. } | ModelSpec::CoupledVdpDissipative { .. } => vec![0, 1],
            _ => vec![],
        }
    }

    /// Copy with every Fock cutoff raised by `k`.
    pub fn with_cutoff_increment(&self, k: usize) -> ModelSpec {
        let mut out = self.clone();
        for (_, _, slot) in out.slots() {
            if let Slot::Cutoff(n) = slot {
                *n += k;
            }
        }
        out
    }

    /// Rate used as the unit of the model's figures of merit.
    pub fn reference_rate(&self) -> f64 {
        match self {
            ModelSpec::DrivenVdp { gamma_g, .. } | ModelSpec::DrivenSpin1 { gamma_g, .. } => *gamma_g,
            ModelSpec::CoupledVdpCoherent { a, .. } | ModelSpec::CoupledVdpDissipative { a, .. } => a.gamma_g,
            ModelSpec::CoupledSpin1 { a, .. } | ModelSpec::CoupledDrivenSpin1 { a, .. } => a.gamma_d,
            ModelSpec::HybridVdpSpin1 { osc_gamma_g, .. } => *osc_gamma_g,
        }
    }

    /// Smallest strictly positive dissipative rate.
    pub fn slowest_rate(&self) -> f64 {
        let mut copy = self.clone();
        copy.slots()
            .into_iter()
            .filter_map(|(_, role, slot)| match (role, slot) {
                (Role::Gain | Role::Damping | Role::Rate, Slot::Real(x)) if *x > 0.0 => Some(*x),
                _ => None,
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Hamiltonian, jump operators and dimensions.
    pub fn build(&self) -> Result<BuiltModel> {
        if let Some(e) = self.validate().into_iter().next() {
            return Err(e);
        }
        let dims = self.dims();
        let site = |op: &CMatrix, k: usize| embed(op, k, &dims);
        let real = |x: f64| C64::new(x, 0.0);
        let s = spin1_ops();
        let spin_terms = |k: usize, r: &SpinRates, halve: bool| -> Result<Vec<DissipatorTerm>> {
            let f = if halve { 0.5 } else { 1.0 };
            Ok(vec![
                DissipatorTerm::new(site(&(&s.s_plus * &s.s_z), k)?, f * r.gamma_g)?,
                DissipatorTerm::new(site(&(&s.s_minus * &s.s_z), k)?, f * r.gamma_d)?,
            ])
        };
        let (hamiltonian, terms) = match self {
            ModelSpec::DrivenVdp {
                detuning,
                drive,
                gamma_g,
                gamma_d,
                cutoff,
            } => {
                let b = boson_ops(*cutoff)?;
                let h = &b.number.scale_real(-detuning) + &(&b.a - &b.a_dag).scale(I * drive);
                let terms = vec![
                    DissipatorTerm::new(b.a_dag.clone(), *gamma_g)?,
                    DissipatorTerm::new(&b.a * &b.a, *gamma_d)?,
                ];
                (h, terms)
            }
            ModelSpec::CoupledVdpCoherent { a, b, coupling } | ModelSpec::CoupledVdpDissipative { a, b, coupling } => {
                let mut h = CMatrix::zeros(a.cutoff * b.cutoff, a.cutoff * b.cutoff);
                let mut terms = Vec::new();
                let mut lowering = Vec::new();
                for (k, osc) in [a, b].into_iter().enumerate() {
                    let ops = boson_ops(osc.cutoff)?;
                    h = &h + &site(&ops.number.scale_real(-osc.detuning), k)?;
                    terms.push(DissipatorTerm::new(site(&ops.a_dag, k)?, osc.gamma_g)?);
                    terms.push(DissipatorTerm::new(site(&(&ops.a * &ops.a), k)?, osc.gamma_d)?);
                    lowering.push(site(&ops.a, k)?);
                }
                if matches!(self, ModelSpec::CoupledVdpCoherent { .. }) {
                    let hop = &lowering[0].adjoint() * &lowering[1];
                    h = &h + &(&hop + &hop.adjoint()).scale_real(*coupling);
                } else {
                    terms.push(DissipatorTerm::new(&lowering[0] - &lowering[1], *coupling)?);
                }
                (h, terms)
            }
            ModelSpec::DrivenSpin1 {
                detuning,
                drive,
                gamma_g,
                gamma_d,
            } => {
                let h = &s.s_z.scale_real(*detuning) + &s.s_y.scale_real(*drive);
                let rates = SpinRates {
                    gamma_g: *gamma_g,
                    gamma_d: *gamma_d,
                };
                (h, spin_terms(0, &rates, true)?)
            }
            ModelSpec::CoupledSpin1 { detuning, coupling, a, b } => {
                let (sm_a, sp_a) = (site(&s.s_minus, 0)?, site(&s.s_plus, 0)?);
                let (sm_b, sp_b) = (site(&s.s_minus, 1)?, site(&s.s_plus, 1)?);
                let exchange = &(&sm_a * &sp_b) - &(&sp_a * &sm_b);
                let h = &site(&s.s_z, 1)?.scale_real(*detuning) + &exchange.scale(I * coupling);
                let mut terms = spin_terms(0, a, true)?;
                terms.extend(spin_terms(1, b, true)?);
                (h, terms)
            }
            ModelSpec::CoupledDrivenSpin1 {
                local_detuning,
                detuning,
                drive,
                coupling,
                a,
                b,
            } => {
                let (sm_a, sp_a) = (site(&s.s_minus, 0)?, site(&s.s_plus, 0)?);
                let (sm_b, sp_b) = (site(&s.s_minus, 1)?, site(&s.s_plus, 1)?);
                let local_drive = &(&s.s_z * &s.s_plus) + &(&s.s_minus * &s.s_z);
                let exchange = &(&sp_a * &sm_b) - &(&sm_a * &sp_b);
                let mut h = site(&s.s_z, 0)?.scale_real(*local_detuning);
                h = &h + &site(&s.s_z, 1)?.scale_real(local_detuning + detuning);
                h = &h + &(&site(&local_drive, 0)? + &site(&local_drive, 1)?).scale(real(*drive));
                h = &h + &exchange.scale(I * coupling);
                let mut terms = spin_terms(0, a, true)?;
                terms.extend(spin_terms(1, b, true)?);
                (h, terms)
            }
            ModelSpec::HybridVdpSpin1 {
                detuning,
                coupling,
                osc_gamma_g,
                osc_gamma_d,
                spin_gamma_g,
                spin_gamma_d,
                cutoff,
            } => {
                let bo = boson_ops(*cutoff)?;
                let (a, a_dag) = (site(&bo.a, 0)?, site(&bo.a_dag, 0)?);
                let (sp, sm) = (site(&s.s_plus, 1)?, site(&s.s_minus, 1)?);
                let interaction = &(&sp * &a) + &(&a_dag * &sm);
                let h = &site(&s.s_z, 1)?.scale_real(*detuning) + &interaction.scale_real(*coupling);
                let rates = SpinRates {
                    gamma_g: *spin_gamma_g,
                    gamma_d: *spin_gamma_d,
                };
                let mut terms = spin_terms(1, &rates, false)?;
                terms.push(DissipatorTerm::new(&a * &a, *osc_gamma_d)?);
                terms.push(DissipatorTerm::new(a_dag, *osc_gamma_g)?);
                (h, terms)
            }
        };
        let defect = hamiltonian.hermiticity_defect();
        if defect > HERMITIAN_BUILD_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(BuiltModel {
            hamiltonian,
            terms,
            dims,
        })
    }

    /// Liouvillian of the built model.
    pub fn liouvillian(&self) -> Result<Superoperator> {
        self.build()?.liouvillian()
    }

    /// Total excitation number per composite basis state: the Fock number on
    /// oscillator sites and `m` on spin sites.
    pub fn excitation_charges(&self) -> Vec<i64> {
        let bosons = self.boson_sites();
        let mut charges = vec![0i64];
        for (k, &d) in self.dims().iter().enumerate() {
            let offset = if bosons.contains(&k) { 0 } else { -1 };
            charges = charges
                .iter()
                .flat_map(|&q| (0..d as i64).map(move |n| q + n + offset))
                .collect();
        }
        charges
    }

    /// Steady state, restricted to the excitation-conserving block whenever
    /// the model has no external drive.
    pub fn steady_state(&self) -> Result<SteadyState> {
        let built = self.build()?;
        let charges = self.excitation_charges();
        match lindblad::solve_steady_state_sector(&built.hamiltonian, &built.terms, &built.dims, &charges)? {
            Some(ss) => Ok(ss),
            None => lindblad::solve_steady_state(&built.liouvillian()?),
        }
    }
}

/// Convenience wrapper around [`ModelSpec::build`].
pub fn build_model(spec: &ModelSpec) -> Result<BuiltModel> {
    spec.build()
}
