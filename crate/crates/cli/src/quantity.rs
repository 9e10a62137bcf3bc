//! Named per-state observables and their CSV columns.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use spinsync::correlations::{correlation, mutual_information, p_max, pair_negativity, reduce, von_neumann_entropy};
use spinsync::liouvillian::{z_symmetry_defect, Liouvillian};
use spinsync::measures::{moments, site_label, MomentTarget};
use spinsync::{rho_infinity, DensityMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropyBase {
    E,
    Two,
}

impl EntropyBase {
    /// Multiplier converting nats.
    pub fn factor(self) -> f64 {
        match self {
            EntropyBase::E => 1.0,
            EntropyBase::Two => 1.0 / std::f64::consts::LN_2,
        }
    }
}

impl fmt::Display for EntropyBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntropyBase::E => "e",
            EntropyBase::Two => "2",
        })
    }
}

impl FromStr for EntropyBase {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "e" => Ok(EntropyBase::E),
            "2" => Ok(EntropyBase::Two),
            _ => Err(format!("expected `e` or `2`, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// `m1_A`, `m2_CA`, ...
    Moment { target: MomentTarget, order: u8 },
    /// Population change against the uncoupled limit cycle.
    PMax,
    /// Population change against the strong-coupling limit state.
    PMaxInf,
    MutualInformation(usize, usize),
    /// Negativity of the pair state, transposing the first site.
    Negativity(usize, usize),
    Correlation { order: u32, i: usize, j: usize },
    Entropy(usize),
    ZSymmetry,
    Residual,
}

fn parse_site(c: char) -> Option<usize> {
    match c {
        'A'..='Z' => Some(c as usize - 'A' as usize),
        _ => None,
    }
}

fn parse_sites(s: &str) -> Option<Vec<usize>> {
    s.chars().map(parse_site).collect()
}

fn pair(s: &str) -> Option<(usize, usize)> {
    match parse_sites(s)?.as_slice() {
        &[i, j] => Some((i, j)),
        _ => None,
    }
}

fn single(s: &str) -> Option<usize> {
    match parse_sites(s)?.as_slice() {
        &[i] => Some(i),
        _ => None,
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let unknown = || format!("unknown quantity `{s}`");
        match s {
            "p_max" => return Ok(Quantity::PMax),
            "p_max_inf" => return Ok(Quantity::PMaxInf),
            "zsym" => return Ok(Quantity::ZSymmetry),
            "residual" => return Ok(Quantity::Residual),
            _ => {}
        }
        let (head, sites) = s.split_once('_').ok_or_else(unknown)?;
        let q = match head {
            "m1" | "m2" => {
                let order = if head == "m1" { 1 } else { 2 };
                let target = match parse_sites(sites).as_deref() {
                    Some(&[j]) => MomentTarget::Site(j),
                    Some(&[i, j]) => MomentTarget::Pair(i, j),
                    _ => return Err(unknown()),
                };
                Quantity::Moment { target, order }
            }
            "I" => pair(sites).map(|(i, j)| Quantity::MutualInformation(i, j)).ok_or_else(unknown)?,
            "N" => pair(sites).map(|(i, j)| Quantity::Negativity(i, j)).ok_or_else(unknown)?,
            "C1" | "C2" => {
                let order = if head == "C1" { 1 } else { 2 };
                pair(sites)
                    .map(|(i, j)| Quantity::Correlation { order, i, j })
                    .ok_or_else(unknown)?
            }
            "S" => single(sites).map(Quantity::Entropy).ok_or_else(unknown)?,
            _ => return Err(unknown()),
        };
        Ok(q)
    }
}

fn pair_label(i: usize, j: usize) -> String {
    format!("{}{}", site_label(i), site_label(j))
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Quantity::Moment { target, order } => write!(f, "m{order}_{target}"),
            Quantity::PMax => f.write_str("p_max"),
            Quantity::PMaxInf => f.write_str("p_max_inf"),
            Quantity::MutualInformation(i, j) => write!(f, "I_{}", pair_label(i, j)),
            Quantity::Negativity(i, j) => write!(f, "N_{}", pair_label(i, j)),
            Quantity::Correlation { order, i, j } => write!(f, "C{order}_{}", pair_label(i, j)),
            Quantity::Entropy(j) => write!(f, "S_{}", site_label(j)),
            Quantity::ZSymmetry => f.write_str("zsym"),
            Quantity::Residual => f.write_str("residual"),
        }
    }
}

/// Adjacent pairs in the order used for default outputs: `AB` for two spins, `AB, BC, CA` for three.
pub fn chain_pairs(n_spins: usize) -> Vec<(usize, usize)> {
    match n_spins {
        0 | 1 => vec![],
        2 => vec![(0, 1)],
        n => {
            let mut p: Vec<_> = (0..n - 1).map(|j| (j, j + 1)).collect();
            p.push((n - 1, 0));
            p
        }
    }
}

impl Quantity {
    pub fn is_complex(&self) -> bool {
        matches!(self, Quantity::Moment { .. } | Quantity::Correlation { .. })
    }

    pub fn columns(&self) -> Vec<String> {
        let name = self.to_string();
        if self.is_complex() {
            ["re", "im", "abs", "phase"].iter().map(|s| format!("{name}_{s}")).collect()
        } else {
            vec![name]
        }
    }

    /// Checks site indices against the chain length.
    pub fn check(&self, n_spins: usize) -> Result<(), String> {
        let sites: Vec<usize> = match *self {
            Quantity::Moment { target: MomentTarget::Site(j), .. } | Quantity::Entropy(j) => vec![j],
            Quantity::Moment { target: MomentTarget::Pair(i, j), .. }
            | Quantity::MutualInformation(i, j)
            | Quantity::Negativity(i, j)
            | Quantity::Correlation { i, j, .. } => {
                if i == j {
                    return Err(format!("`{self}` needs two different sites"));
                }
                vec![i, j]
            }
            Quantity::PMaxInf if n_spins != 2 => {
                return Err("`p_max_inf` is defined for two spins only".into());
            }
            _ => vec![],
        };
        match sites.iter().find(|&&s| s >= n_spins) {
            Some(&s) => Err(format!("`{self}` refers to site {} but the chain has {n_spins} spins", site_label(s))),
            None => Ok(()),
        }
    }

    /// Column values for `rho`; errors are reported as text and the values set to NaN.
    pub fn evaluate(&self, rho: &DensityMatrix, l: &Liouvillian, base: EntropyBase) -> Result<Vec<f64>, String> {
        let err = |e: spinsync::Error| format!("{self}: {e}");
        let complex = |z: Complex64, phase: f64| vec![z.re, z.im, z.norm(), phase];
        Ok(match *self {
            Quantity::Moment { target, order } => {
                let m = moments(rho, target, order).map_err(err)?;
                complex(m.value, m.locking_phase())
            }
            Quantity::Correlation { order, i, j } => {
                let c = correlation(rho, i, j, order).map_err(err)?;
                complex(c, c.arg())
            }
            Quantity::PMax => vec![p_max(rho, &DensityMatrix::limit_cycle(rho.n_spins())).map_err(err)?],
            Quantity::PMaxInf => vec![p_max(rho, &rho_infinity().map_err(err)?).map_err(err)?],
            Quantity::MutualInformation(i, j) => vec![mutual_information(rho, i, j).map_err(err)? * base.factor()],
            Quantity::Negativity(i, j) => vec![pair_negativity(rho, i, j).map_err(err)?],
            Quantity::Entropy(j) => vec![von_neumann_entropy(&reduce(rho, &[j]).map_err(err)?) * base.factor()],
            Quantity::ZSymmetry => vec![z_symmetry_defect(rho)],
            Quantity::Residual => vec![l.residual(rho.matrix())],
        })
    }
}
