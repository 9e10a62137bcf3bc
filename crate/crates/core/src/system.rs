//! Physical description of a chain of spin-1 oscillators.
//!
//! All rates and amplitudes are pure numbers in units of a reference rate
//! chosen by the caller (usually the gain rate of the first spin).

use crate::error::{Error, Result};

pub const MAX_SPINS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub n_spins: usize,
    /// Gain rate `γ^g_j` per spin.
    pub gamma_g: Vec<f64>,
    /// Damping rate `γ^d_j` per spin.
    pub gamma_d: Vec<f64>,
    /// Resonant drive amplitude per spin.
    pub omega: Vec<f64>,
    /// Nearest-neighbour coupling `g_{j,j+1}`; length `n_spins − 1`.
    pub g: Vec<f64>,
}

impl SystemConfig {
    /// Uncoupled, undriven chain with all rates equal to `gamma`.
    pub fn equal_rates(n_spins: usize, gamma: f64) -> Self {
        Self {
            n_spins,
            gamma_g: vec![gamma; n_spins],
            gamma_d: vec![gamma; n_spins],
            omega: vec![0.0; n_spins],
            g: vec![0.0; n_spins.saturating_sub(1)],
        }
    }

    /// Two spins at equal rates `gamma`, drive `omega_a` on spin A and coupling `g`.
    pub fn two_spin_equal(gamma: f64, omega_a: f64, g: f64) -> Self {
        Self {
            n_spins: 2,
            gamma_g: vec![gamma; 2],
            gamma_d: vec![gamma; 2],
            omega: vec![omega_a, 0.0],
            g: vec![g],
        }
    }

    /// Two spins with inverted rates: `γ^g_A = γ^d_B = gamma_g`, `γ^d_A = γ^g_B = gamma_d`.
    pub fn two_spin_inverted(gamma_g: f64, gamma_d: f64, omega_a: f64, g: f64) -> Self {
        Self {
            n_spins: 2,
            gamma_g: vec![gamma_g, gamma_d],
            gamma_d: vec![gamma_d, gamma_g],
            omega: vec![omega_a, 0.0],
            g: vec![g],
        }
    }

    /// Undriven three-spin chain at equal rates.
    pub fn three_spin_chain(gamma: f64, g_ab: f64, g_bc: f64) -> Self {
        Self {
            n_spins: 3,
            gamma_g: vec![gamma; 3],
            gamma_d: vec![gamma; 3],
            omega: vec![0.0; 3],
            g: vec![g_ab, g_bc],
        }
    }

    pub fn with_omega(mut self, omega: Vec<f64>) -> Self {
        self.omega = omega;
        self
    }

    pub fn with_couplings(mut self, g: Vec<f64>) -> Self {
        self.g = g;
        self
    }

    /// Copy with the Hamiltonian switched off.
    pub fn dissipative_part(&self) -> Self {
        Self {
            omega: vec![0.0; self.n_spins],
            g: vec![0.0; self.g.len()],
            ..self.clone()
        }
    }

    /// True when every spin has `γ^g = γ^d` and all spins share one rate.
    pub fn has_equal_rates(&self) -> bool {
        let r = self.gamma_g[0];
        self.gamma_g.iter().chain(&self.gamma_d).all(|&x| x == r)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, reason: String| Error::InvalidConfig {
            field: field.to_string(),
            reason,
        };
        if self.n_spins == 0 || self.n_spins > MAX_SPINS {
            return Err(bad("n_spins", format!("must be 1..={MAX_SPINS}, got {}", self.n_spins)));
        }
        for (name, list) in [
            ("gamma_g", &self.gamma_g),
            ("gamma_d", &self.gamma_d),
            ("omega", &self.omega),
        ] {
            if list.len() != self.n_spins {
                return Err(bad(name, format!("expected {} values, got {}", self.n_spins, list.len())));
            }
        }
        if self.g.len() != self.n_spins - 1 {
            return Err(bad("g", format!("expected {} values, got {}", self.n_spins - 1, self.g.len())));
        }
        for (name, list) in [
            ("gamma_g", &self.gamma_g),
            ("gamma_d", &self.gamma_d),
            ("omega", &self.omega),
            ("g", &self.g),
        ] {
            for (j, &x) in list.iter().enumerate() {
                if !x.is_finite() || x < 0.0 {
                    return Err(bad(&format!("{name}[{j}]"), format!("must be finite and >= 0, got {x}")));
                }
            }
        }
        for j in 0..self.n_spins {
            if self.gamma_g[j] == 0.0 && self.gamma_d[j] == 0.0 {
                return Err(bad(
                    &format!("gamma_g[{j}]"),
                    "gain and damping rates of a spin cannot both vanish".to_string(),
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        SystemConfig::equal_rates(1, 1.0).validate().unwrap();
        SystemConfig::two_spin_equal(1.0, 0.1, 0.15).validate().unwrap();
        SystemConfig::two_spin_inverted(2.0, 1.0, 0.01, 0.1).validate().unwrap();
        SystemConfig::three_spin_chain(1.0, 0.12, 0.12).validate().unwrap();
    }

    #[test]
    fn rejects_negative_rate_naming_field() {
        let mut c = SystemConfig::two_spin_equal(1.0, 0.1, 0.1);
        c.gamma_d[1] = -1.0;
        match c.validate().unwrap_err() {
            Error::InvalidConfig { field, .. } => assert_eq!(field, "gamma_d[1]"),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn rejects_unstabilized_spin() {
        let mut c = SystemConfig::equal_rates(2, 1.0);
        c.gamma_g[0] = 0.0;
        c.validate().unwrap();
        c.gamma_d[0] = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn rejects_length_mismatch_and_spin_count() {
        let mut c = SystemConfig::equal_rates(2, 1.0);
        c.g = vec![];
        assert!(c.validate().is_err());
        assert!(SystemConfig::equal_rates(4, 1.0).validate().is_err());
        assert!(SystemConfig::equal_rates(0, 1.0).validate().is_err());
    }

    #[test]
    fn equal_rate_detection() {
        assert!(SystemConfig::two_spin_equal(1.0, 0.1, 0.1).has_equal_rates());
        assert!(!SystemConfig::two_spin_inverted(1.1, 1.0, 0.1, 0.1).has_equal_rates());
    }
}
