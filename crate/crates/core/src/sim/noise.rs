use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// ZZ crosstalk on one qubit pair, `H = J Z⊗Z / 4` (J in rad/ns).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZZCoupling {
    pub edge: (usize, usize),
    pub j: f64,
}

/// Stochastic noise parameters for the trajectory simulator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Per-qubit standard deviation of the static field along x, y, z (rad/ns).
    pub quasi_static_sigma: Vec<[f64; 3]>,
    pub zz_coupling: Vec<ZZCoupling>,
    /// Systematic over-rotation of physical pulses and gates (rad).
    pub flip_angle_error: f64,
    /// Per-qubit Markovian dephasing rate (1/ns).
    #[serde(default)]
    pub markovian_dephasing_rate: Option<Vec<f64>>,
    /// Per-qubit readout flip probability.
    #[serde(default)]
    pub readout_error: Option<Vec<f64>>,
    /// Realize `Im` as a 2π rotation instead of an idle slot.
    #[serde(default)]
    pub identity_as_2pi_pulse: bool,
}

impl NoiseModel {
    pub fn noiseless(num_qubits: usize) -> Self {
        NoiseModel {
            quasi_static_sigma: vec![[0.0; 3]; num_qubits],
            zz_coupling: Vec::new(),
            flip_angle_error: 0.0,
            markovian_dephasing_rate: None,
            readout_error: None,
            identity_as_2pi_pulse: false,
        }
    }

    /// The "desk-device" preset: σz = 2e-4, σx = σy = 5e-5 rad/ns,
    /// J = 1e-4 rad/ns on every coupling edge, 0.02 rad flip-angle error.
    pub fn desk_device(num_qubits: usize, edges: &[(usize, usize)]) -> Self {
        NoiseModel {
            quasi_static_sigma: vec![[5e-5, 5e-5, 2e-4]; num_qubits],
            zz_coupling: edges.iter().map(|&edge| ZZCoupling { edge, j: 1e-4 }).collect(),
            flip_angle_error: 0.02,
            markovian_dephasing_rate: None,
            readout_error: None,
            identity_as_2pi_pulse: false,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.quasi_static_sigma.len()
    }

    /// Whether trajectories differ from one another.
    pub fn is_stochastic(&self) -> bool {
        self.quasi_static_sigma.iter().flatten().any(|&s| s > 0.0)
            || self.markovian_dephasing_rate.as_ref().is_some_and(|r| r.iter().any(|&x| x > 0.0))
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_qubits();
        if self.quasi_static_sigma.iter().flatten().any(|&s| !(s >= 0.0) || !s.is_finite()) {
            return Err(Error::Config("field standard deviations must be finite and non-negative".into()));
        }
        for c in &self.zz_coupling {
            if c.edge.0 >= n || c.edge.1 >= n || c.edge.0 == c.edge.1 {
                return Err(Error::Config(format!("bad ZZ edge {:?}", c.edge)));
            }
            if !c.j.is_finite() {
                return Err(Error::Config("ZZ coupling must be finite".into()));
            }
        }
        if !self.flip_angle_error.is_finite() {
            return Err(Error::Config("flip-angle error must be finite".into()));
        }
        if let Some(r) = &self.markovian_dephasing_rate {
            if r.len() != n || r.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
                return Err(Error::Config("dephasing rates must be one non-negative value per qubit".into()));
            }
        }
        if let Some(r) = &self.readout_error {
            if r.len() != n || r.iter().any(|&x| !(0.0..=0.5).contains(&x)) {
                return Err(Error::Config("readout errors must be one value in [0, 0.5] per qubit".into()));
            }
        }
        Ok(())
    }

    /// Multiplies every noise magnitude by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut m = self.clone();
        for s in m.quasi_static_sigma.iter_mut().flatten() {
            *s *= factor;
        }
        for c in &mut m.zz_coupling {
            c.j *= factor;
        }
        m.flip_angle_error *= factor;
        if let Some(r) = &mut m.markovian_dephasing_rate {
            r.iter_mut().for_each(|x| *x *= factor);
        }
        if let Some(r) = &mut m.readout_error {
            r.iter_mut().for_each(|x| *x = (*x * factor).min(0.5));
        }
        m
    }

    /// Scales every parameter by an independent factor from `U[1 − δ, 1 + δ]`.
    pub fn perturbed<R: Rng>(&self, delta: f64, rng: &mut R) -> Self {
        let mut f = || 1.0 + delta * (2.0 * rng.random::<f64>() - 1.0);
        let mut m = self.clone();
        for s in m.quasi_static_sigma.iter_mut().flatten() {
            *s *= f();
        }
        for c in &mut m.zz_coupling {
            c.j *= f();
        }
        m.flip_angle_error *= f();
        if let Some(r) = &mut m.markovian_dephasing_rate {
            r.iter_mut().for_each(|x| *x *= f());
        }
        if let Some(r) = &mut m.readout_error {
            r.iter_mut().for_each(|x| *x = (*x * f()).min(0.5));
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn preset_values() {
        let m = NoiseModel::desk_device(3, &[(0, 1), (1, 2)]);
        assert_eq!(m.quasi_static_sigma[2], [5e-5, 5e-5, 2e-4]);
        assert_eq!(m.zz_coupling.len(), 2);
        assert!(m.validate().is_ok());
        assert!(m.is_stochastic());
        assert!(!NoiseModel::noiseless(3).is_stochastic());
    }

    #[test]
    fn perturbation_stays_within_band() {
        let m = NoiseModel::desk_device(4, &[(0, 1)]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let p = m.perturbed(0.1, &mut rng);
        for (a, b) in m.quasi_static_sigma.iter().flatten().zip(p.quasi_static_sigma.iter().flatten()) {
            assert!((b / a - 1.0).abs() <= 0.1);
        }
        assert_eq!(m.perturbed(0.0, &mut rng), m);
    }

    #[test]
    fn validation_errors() {
        let mut m = NoiseModel::noiseless(2);
        m.readout_error = Some(vec![0.6, 0.0]);
        assert!(m.validate().is_err());
        let mut m = NoiseModel::noiseless(2);
        m.zz_coupling.push(ZZCoupling { edge: (0, 5), j: 1.0 });
        assert!(m.validate().is_err());
    }
}
