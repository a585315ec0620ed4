//! The four entanglement measures at one grid point.

use esd_kernels::{amplitudes, norm_defect, KernelError, KernelOptions};
use esd_model::{
    build_rho_a, build_rho_ab, build_rho_af, build_rho_f, concurrence_x, i_concurrence, negativity_af, AmplitudeSet,
    CouplingParams, Cutoff, DipoleChannel, EvalPoint, InitialWeights, MeasureError, ParamError, TruncationPolicy,
};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// A plotted column, named as in the CSV header.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Measure {
    /// Concurrence between the atoms.
    #[serde(rename = "C_AB")]
    AtomAtom,
    /// Negativity between atom A and the field.
    #[serde(rename = "N_AF")]
    AtomField,
    /// I-concurrence of atom A against the rest.
    #[serde(rename = "C_A_BF")]
    AtomRest,
    /// I-concurrence of the field against the atoms.
    #[serde(rename = "C_F_AB")]
    FieldRest,
}

impl Measure {
    pub const ALL: [Measure; 4] = [Self::AtomAtom, Self::AtomField, Self::AtomRest, Self::FieldRest];

    pub fn column(self) -> &'static str {
        match self {
            Self::AtomAtom => "C_AB",
            Self::AtomField => "N_AF",
            Self::AtomRest => "C_A_BF",
            Self::FieldRest => "C_F_AB",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown measure '{0}'")]
pub struct UnknownMeasure(pub String);

impl FromStr for Measure {
    type Err = UnknownMeasure;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_uppercase().replace(['-', '−'], "_");
        Self::ALL.into_iter().find(|m| m.column() == key).ok_or_else(|| UnknownMeasure(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PointError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// Measures and the norm diagnostic at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointValues {
    pub values: [f64; 4],
    /// Larger of the excited and ground norm defects per unit κτ.
    pub norm_defect: f64,
}

impl PointValues {
    pub fn get(&self, m: Measure) -> f64 {
        self.values[m.index()]
    }
}

/// Everything fixed along a sweep.
#[derive(Debug, Clone, Copy)]
pub struct PointModel {
    pub coupling: CouplingParams,
    pub cutoff: Cutoff,
    pub channel: DipoleChannel,
    pub policy: TruncationPolicy,
    pub kernel: KernelOptions,
}

impl PointModel {
    pub fn amplitudes(&self, z: f64, x: f64) -> Result<AmplitudeSet, PointError> {
        let point = EvalPoint::new(z, x)?;
        Ok(amplitudes(&point, &self.coupling, &self.cutoff, self.channel, self.policy, &self.kernel)?)
    }

    pub fn evaluate(&self, z: f64, x: f64, w: &InitialWeights) -> Result<PointValues, PointError> {
        let amps = self.amplitudes(z, x)?;
        let kappa_tau = self.coupling.kappa() * z / x;
        let mut values = measures_of(&amps, w, self.policy)?;
        for v in &mut values {
            // keep the sign bit off exact zeros so the CSV reads "0"
            *v += 0.0;
        }
        let d = norm_defect(
            amps.self_energy_excited,
            amps.self_energy_ground,
            amps.emission_sq,
            amps.counter_emission_sq,
            kappa_tau,
        );
        Ok(PointValues { values, norm_defect: d.excited.max(d.ground) })
    }
}

/// `[C_AB, N_AF, C_A_BF, C_F_AB]` for a given amplitude set.
pub fn measures_of(
    amps: &AmplitudeSet,
    w: &InitialWeights,
    policy: TruncationPolicy,
) -> Result<[f64; 4], MeasureError> {
    Ok([
        concurrence_x(&build_rho_ab(amps, w, policy)).value,
        negativity_af(&build_rho_af(amps, w, policy), policy)?.value,
        i_concurrence(&build_rho_a(amps, w, policy)).value,
        i_concurrence(&build_rho_f(amps, w, policy)).value,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_round_trip() {
        for m in Measure::ALL {
            assert_eq!(m.column().parse::<Measure>().unwrap(), m);
        }
        assert_eq!("c-a-bf".parse::<Measure>().unwrap(), Measure::AtomRest);
        assert!("C_XY".parse::<Measure>().is_err());
    }
}
