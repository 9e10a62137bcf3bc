//! Reduced states, entropies, negativity and ladder-operator correlations.

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{self, ComplexMatrix, ZERO};
use crate::spin::{embed, hilbert_dim, make_spin1_ops, LOCAL_DIM};
use crate::state::DensityMatrix;

/// Eigenvalues below this are dropped before taking logarithms.
pub const ENTROPY_CLIP: f64 = 1e-14;
/// Variances below this make a normalized correlation undefined.
pub const VARIANCE_FLOOR: f64 = 1e-14;

/// Ordered list of sites kept by a partial trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemSelector {
    kept: Vec<usize>,
}

impl SubsystemSelector {
    pub fn new(kept: Vec<usize>, n_spins: usize) -> Result<Self> {
        for (k, &s) in kept.iter().enumerate() {
            if s >= n_spins {
                return Err(Error::SiteOutOfRange { site: s, n_spins });
            }
            if kept[..k].contains(&s) {
                return Err(Error::InvalidConfig {
                    field: "keep".into(),
                    reason: format!("site {s} listed twice"),
                });
            }
        }
        Ok(Self { kept })
    }

    pub fn sites(&self) -> &[usize] {
        &self.kept
    }
}

fn digits(mut index: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for k in (0..n).rev() {
        out[k] = index % LOCAL_DIM;
        index /= LOCAL_DIM;
    }
    out
}

fn compose(d: &[usize]) -> usize {
    d.iter().fold(0, |acc, &x| acc * LOCAL_DIM + x)
}

/// Reduced state on the selected sites, in the selector's order.
pub fn partial_trace(rho: &DensityMatrix, keep: &SubsystemSelector) -> Result<DensityMatrix> {
    let n = rho.n_spins();
    let kept = keep.sites();
    if let Some(&s) = kept.iter().find(|&&s| s >= n) {
        return Err(Error::SiteOutOfRange { site: s, n_spins: n });
    }
    let traced: Vec<usize> = (0..n).filter(|s| !kept.contains(s)).collect();
    let dk = hilbert_dim(kept.len());
    let dt = hilbert_dim(traced.len());
    let m = rho.matrix();
    let mut out = matrix::zeros(dk);
    let mut full_a = vec![0; n];
    let mut full_b = vec![0; n];
    for a in 0..dk {
        let da = digits(a, kept.len());
        for b in 0..dk {
            let db = digits(b, kept.len());
            let mut acc = ZERO;
            for t in 0..dt {
                let dtr = digits(t, traced.len());
                for (k, &s) in kept.iter().enumerate() {
                    full_a[s] = da[k];
                    full_b[s] = db[k];
                }
                for (k, &s) in traced.iter().enumerate() {
                    full_a[s] = dtr[k];
                    full_b[s] = dtr[k];
                }
                acc += m[(compose(&full_a), compose(&full_b))];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(DensityMatrix::from_parts(out, kept.len()))
}

/// Shorthand for keeping a list of sites.
pub fn reduce(rho: &DensityMatrix, sites: &[usize]) -> Result<DensityMatrix> {
    partial_trace(rho, &SubsystemSelector::new(sites.to_vec(), rho.n_spins())?)
}

/// `−Σ λ ln λ`, in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues()
        .into_iter()
        .filter(|&l| l > ENTROPY_CLIP)
        .map(|l| -l * l.ln())
        .sum()
}

/// `I_ij = S(ρ_i) + S(ρ_j) − S(ρ_ij)`, in nats.
pub fn mutual_information(rho: &DensityMatrix, i: usize, j: usize) -> Result<f64> {
    if i == j {
        return Err(Error::InvalidConfig {
            field: "pair".into(),
            reason: "mutual information needs two different sites".into(),
        });
    }
    let si = von_neumann_entropy(&reduce(rho, &[i])?);
    let sj = von_neumann_entropy(&reduce(rho, &[j])?);
    let sij = von_neumann_entropy(&reduce(rho, &[i, j])?);
    Ok(si + sj - sij)
}

/// Transpose of the factor at `site`.
pub fn partial_transpose(m: &ComplexMatrix, site: usize, n_spins: usize) -> Result<ComplexMatrix> {
    if site >= n_spins {
        return Err(Error::SiteOutOfRange { site, n_spins });
    }
    let d = hilbert_dim(n_spins);
    if m.nrows() != d {
        return Err(Error::DimensionMismatch { expected: d, found: m.nrows() });
    }
    Ok(Mat::from_fn(d, d, |a, b| {
        let mut da = digits(a, n_spins);
        let mut db = digits(b, n_spins);
        std::mem::swap(&mut da[site], &mut db[site]);
        m[(compose(&da), compose(&db))]
    }))
}

/// `Σ_k (|λ_k| − λ_k)/2` over the spectrum of `ρ^{T_site}`.
pub fn negativity(rho: &DensityMatrix, transposed_site: usize) -> Result<f64> {
    let pt = partial_transpose(&rho.matrix().to_owned(), transposed_site, rho.n_spins())?;
    Ok(matrix::hermitian_eigenvalues(pt.as_ref())
        .into_iter()
        .map(|l| (l.abs() - l) / 2.0)
        .sum())
}

/// Negativity of the reduced two-site state of `(i, j)`, transposing `i`.
pub fn pair_negativity(rho: &DensityMatrix, i: usize, j: usize) -> Result<f64> {
    let pair = reduce(rho, &[i, j])?;
    negativity(&pair, 0)
}

/// `COV⁽ⁿ⁾_ij = ⟨(S⁻_i S⁺_j)ⁿ⟩ − ⟨(S⁻_i)ⁿ⟩⟨(S⁺_j)ⁿ⟩`.
pub fn covariance(rho: &DensityMatrix, i: usize, j: usize, n: u32) -> Result<Complex64> {
    if !(1..=2).contains(&n) {
        return Err(Error::InvalidConfig {
            field: "order".into(),
            reason: format!("correlation order must be 1 or 2, got {n}"),
        });
    }
    let ns = rho.n_spins();
    let ops = make_spin1_ops();
    let sm_i = embed(ops.s_minus.as_ref(), i, ns)?;
    let sp_j = embed(ops.s_plus.as_ref(), j, ns)?;
    let joint = matrix::powi((&sm_i * &sp_j).as_ref(), n);
    let a = matrix::powi(sm_i.as_ref(), n);
    let b = matrix::powi(sp_j.as_ref(), n);
    Ok(rho.expect(joint.as_ref()) - rho.expect(a.as_ref()) * rho.expect(b.as_ref()))
}

/// `C⁽ⁿ⁾_ij = COV⁽ⁿ⁾_ij / √(COV⁽ⁿ⁾_ii COV⁽ⁿ⁾_jj)`.
pub fn correlation(rho: &DensityMatrix, i: usize, j: usize, n: u32) -> Result<Complex64> {
    let cov = covariance(rho, i, j, n)?;
    let vi = covariance(rho, i, i, n)?.re;
    let vj = covariance(rho, j, j, n)?.re;
    for v in [vi, vj] {
        if v < VARIANCE_FLOOR {
            return Err(Error::UndefinedCorrelation { variance: v });
        }
    }
    Ok(cov / (vi * vj).sqrt())
}

/// Largest population change `max_n |ρ(n,n) − ρ_ref(n,n)|`.
pub fn p_max(rho: &DensityMatrix, reference: &DensityMatrix) -> Result<f64> {
    if rho.dim() != reference.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: reference.dim() });
    }
    Ok((0..rho.dim())
        .map(|k| (rho.population(k) - reference.population(k)).abs())
        .fold(0.0, f64::max))
}
