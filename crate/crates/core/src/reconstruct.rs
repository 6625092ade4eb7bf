//! Reconstruction of the multiplier from a finite section.
//!
//! The direct route takes the Frobenius-optimal circulant of the
//! (untransformed) section, reads its eigenvalues off the FFT with their grid
//! binding, and divides out the weight factor. The peeled route first strips
//! the Hankel disturbance by the anti-diagonal recursion, recovering the
//! Fourier coefficients themselves, then applies the closed-form Fejér
//! circulant. Block sections reconstruct entrywise and aggregate per-grid
//! singular values for range tests on |φ|.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::circulants::{optimal_circulant, optimal_circulant_dense};
use crate::error::{Error, Result};
use crate::matrices::ToeplitzMatrix;
use crate::sections::{untransform, FiniteSection, SectionConvention};
use crate::spectral::SpectralSample;
use crate::symbols::{FourierCoeffTable, MultiplierSpec, WeightSpec};
use crate::{Dense, C64};

/// Relative guard for the weight division, as a fraction of the grid maximum
/// of the denominator.
pub const DEFAULT_GUARD_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgorithmTag {
    Direct,
    HankelPeeled,
}

/// Reconstructed symbol and multiplier values on the Fourier grid.
#[derive(Debug, Clone)]
pub struct ReconstructionResult {
    grid: Vec<Vec<f64>>,
    f_values: Vec<C64>,
    phi_values: Vec<Option<C64>>,
    excluded: Vec<usize>,
    residuals: Option<Vec<Option<f64>>>,
    algorithm: AlgorithmTag,
    /// Advisory smoothness indicator from the peeled route: the mass of the
    /// recovered coefficients in the upper half of the index range relative
    /// to their maximum. Small values suggest a smooth symbol.
    coeff_decay: Option<f64>,
}

impl ReconstructionResult {
    pub fn grid(&self) -> &[Vec<f64>] {
        &self.grid
    }

    pub fn f_values(&self) -> &[C64] {
        &self.f_values
    }

    pub fn phi_values(&self) -> &[Option<C64>] {
        &self.phi_values
    }

    pub fn excluded(&self) -> &[usize] {
        &self.excluded
    }

    pub fn algorithm(&self) -> AlgorithmTag {
        self.algorithm
    }

    pub fn coeff_decay(&self) -> Option<f64> {
        self.coeff_decay
    }

    pub fn residuals(&self) -> Option<&[Option<f64>]> {
        self.residuals.as_deref()
    }

    /// Attach per-point residuals |φ_rec(cos x_j) - φ(cos x_j)| against a
    /// reference multiplier (scalar).
    pub fn with_reference(mut self, phi: &MultiplierSpec) -> Self {
        let res = self
            .grid
            .iter()
            .zip(&self.phi_values)
            .map(|(x, v)| {
                v.map(|rec| {
                    let point: Vec<f64> = x.iter().map(|&s| s.cos()).collect();
                    (rec - phi.evaluate(&point)[(0, 0)]).norm()
                })
            })
            .collect();
        self.residuals = Some(res);
        self
    }

    /// Largest residual over the non-excluded grid.
    pub fn max_residual(&self) -> Option<f64> {
        self.residuals
            .as_ref()
            .map(|r| r.iter().flatten().fold(0.0f64, |m, &v| m.max(v)))
    }

    pub fn mean_residual(&self) -> Option<f64> {
        self.residuals.as_ref().and_then(|r| {
            let vals: Vec<f64> = r.iter().flatten().copied().collect();
            if vals.is_empty() {
                None
            } else {
                Some(vals.iter().sum::<f64>() / vals.len() as f64)
            }
        })
    }
}

/// Divide reconstructed symbol values by π^d Π_k w_k(cos x_k)|sin x_k|,
/// excluding grid points where the denominator falls under
/// `guard_tol · max_j denominator_j`.
pub fn divide_out_weight(
    f_values: &[C64],
    grid: &[Vec<f64>],
    weight: &WeightSpec,
    guard_tol: f64,
) -> Result<(Vec<Option<C64>>, Vec<usize>)> {
    if f_values.len() != grid.len() {
        return Err(Error::domain("values and grid lengths differ"));
    }
    let d = weight.dims();
    let scale = PI.powi(d as i32);
    let denoms: Vec<f64> = grid.iter().map(|x| scale * weight.tilde_factor(x)).collect();
    let max_denom = denoms.iter().cloned().fold(0.0f64, f64::max);
    if max_denom <= 0.0 {
        return Err(Error::domain("weight denominator vanishes on the whole grid"));
    }
    let cut = guard_tol * max_denom;
    let mut phi = Vec::with_capacity(f_values.len());
    let mut excluded = Vec::new();
    for (j, (&v, &den)) in f_values.iter().zip(&denoms).enumerate() {
        if den.abs() < cut {
            phi.push(None);
            excluded.push(j);
        } else {
            phi.push(Some(v / den));
        }
    }
    if excluded.len() == f_values.len() {
        return Err(Error::domain(
            "degenerate weight: every grid point fell under the division guard",
        ));
    }
    Ok((phi, excluded))
}

fn section_operand(section: &FiniteSection) -> Result<Dense> {
    if section.basis_factor().is_some() {
        untransform(section)
    } else {
        Ok(section.matrix().clone())
    }
}

/// The weight whose pulled-back factor divides this section's circulant
/// eigenvalues: unnormalized sections distribute as π^d φ(cos s) regardless
/// of the weight, so only π^d is divided out.
fn division_weight(section: &FiniteSection) -> WeightSpec {
    match section.convention() {
        SectionConvention::Unnormalized => WeightSpec::chebyshev1(section.order().len()),
        SectionConvention::Orthonormal => section.weight().clone(),
    }
}

fn finish(
    section: &FiniteSection,
    sample: SpectralSample,
    algorithm: AlgorithmTag,
    coeff_decay: Option<f64>,
) -> Result<ReconstructionResult> {
    let grid = sample
        .grid()
        .expect("circulant eigenvalues carry their grid")
        .to_vec();
    let f_values = sample.values().to_vec();
    let (phi_values, excluded) = divide_out_weight(
        &f_values,
        &grid,
        &division_weight(section),
        DEFAULT_GUARD_TOL,
    )?;
    Ok(ReconstructionResult {
        grid,
        f_values,
        phi_values,
        excluded,
        residuals: None,
        algorithm,
        coeff_decay,
    })
}

/// Direct reconstruction: Frobenius-optimal circulant of the untransformed
/// section, eigenvalues by FFT with grid indices retained, then the weight
/// division.
pub fn reconstruct_direct(section: &FiniteSection) -> Result<ReconstructionResult> {
    if section.block_dims() != (1, 1) {
        return Err(Error::domain(
            "entrywise block reconstruction goes through reconstruct_block",
        ));
    }
    let x = section_operand(section)?;
    let circ = optimal_circulant_dense(&x, section.order(), (1, 1))?;
    let sample = circ.eigenvalues()?;
    finish(section, sample, AlgorithmTag::Direct, None)
}

/// Recover the Toeplitz part of X = T_n(f) + H_n(f) (even symbol, shift 0)
/// by the anti-diagonal recursion, 0-based: with S_k the sum of X over
/// {i + j = 2n-2-k},
///   f_0 = S_0,
///   f_k = (S_k - 2 Σ_{0<m<k, m ≡ k (2)} f_m - [k even] f_0) / 2.
/// Each estimate is exact up to tail coefficients f_{2n-2-k}, ..., which
/// vanish as n grows for integrable symbols.
pub fn recover_toeplitz(x: &Dense, n: usize) -> Result<(ToeplitzMatrix, FourierCoeffTable)> {
    if x.nrows() != n || x.ncols() != n {
        return Err(Error::domain(format!(
            "matrix is {}x{}, expected {n}x{n}",
            x.nrows(),
            x.ncols()
        )));
    }
    let mut fhat = vec![C64::new(0.0, 0.0); n];
    for k in 0..n {
        // anti-diagonal i + j = 2n-2-k has k+1 entries
        let c = 2 * n - 2 - k;
        let mut s = C64::new(0.0, 0.0);
        for i in (c - (n - 1))..n {
            s += x[(i, c - i)];
        }
        if k == 0 {
            fhat[0] = s;
            continue;
        }
        let mut correction = C64::new(0.0, 0.0);
        let mut m = k as i64 - 2;
        while m > 0 {
            correction += fhat[m as usize] * 2.0;
            m -= 2;
        }
        if k % 2 == 0 {
            correction += fhat[0];
        }
        fhat[k] = (s - correction) / 2.0;
    }
    let pairs: Vec<(i64, C64)> = fhat
        .iter()
        .enumerate()
        .map(|(k, &v)| (k as i64, v))
        .collect();
    let table = FourierCoeffTable::from_even_scalar_entries(n, n as i64 - 1, &pairs);
    let toeplitz = ToeplitzMatrix::new(table.clone(), vec![n])?;
    Ok((toeplitz, table))
}

fn decay_indicator(table: &FourierCoeffTable, n: usize) -> f64 {
    let max_all = (0..n)
        .map(|k| table.scalar(&[k as i64]).norm())
        .fold(0.0f64, f64::max);
    if max_all == 0.0 {
        return 0.0;
    }
    let max_tail = (n / 2..n)
        .map(|k| table.scalar(&[k as i64]).norm())
        .fold(0.0f64, f64::max);
    max_tail / max_all
}

/// Peeled reconstruction: strip the Hankel part via [`recover_toeplitz`],
/// then apply the closed-form Fejér circulant to the recovered Toeplitz
/// matrix. Univariate; safe when the symbol is smooth enough that the tail
/// coefficients are negligible (the decay indicator is reported, not acted
/// on).
pub fn reconstruct_peeled(section: &FiniteSection) -> Result<ReconstructionResult> {
    if section.block_dims() != (1, 1) {
        return Err(Error::domain(
            "entrywise block reconstruction goes through reconstruct_block",
        ));
    }
    if section.order().len() != 1 {
        return Err(Error::Unsupported(
            "anti-diagonal peeling is univariate; use the direct route for d > 1".into(),
        ));
    }
    let n = section.order()[0];
    let x = section_operand(section)?;
    let (toeplitz, table) = recover_toeplitz(&x, n)?;
    let circ = optimal_circulant(&toeplitz);
    let sample = circ.eigenvalues()?;
    finish(
        section,
        sample,
        AlgorithmTag::HankelPeeled,
        Some(decay_indicator(&table, n)),
    )
}

/// Entrywise reconstruction of a block section plus the per-grid singular
/// values of the reconstructed multiplier blocks (a sample for range tests
/// on |φ|). Entry (s,t) of the result matrix reconstructs φ_{s,t}.
pub fn reconstruct_block(
    section: &FiniteSection,
) -> Result<(Vec<Vec<ReconstructionResult>>, SpectralSample)> {
    let (p, q) = section.block_dims();
    if p == 1 && q == 1 {
        let r = reconstruct_direct(section)?;
        let sample = scalar_modulus_sample(&r);
        return Ok((vec![vec![r]], sample));
    }
    if section.basis_factor().is_some() {
        return Err(Error::Unsupported(
            "block sections reconstruct in the raw cosine convention".into(),
        ));
    }
    let count: usize = section.order().iter().product();
    let m = section.matrix();

    let entries: Vec<(usize, usize)> = (0..p).flat_map(|s| (0..q).map(move |t| (s, t))).collect();
    let results: Vec<Result<ReconstructionResult>> = entries
        .par_iter()
        .map(|&(s, t)| {
            let sub = Dense::from_fn(count, count, |bi, bj| m[(bi * p + s, bj * q + t)]);
            let scalar_section = FiniteSection::entry_section(section, sub);
            reconstruct_direct(&scalar_section)
        })
        .collect();
    let mut matrix: Vec<Vec<ReconstructionResult>> = Vec::with_capacity(p);
    let mut it = results.into_iter();
    for _ in 0..p {
        let mut row = Vec::with_capacity(q);
        for _ in 0..q {
            row.push(it.next().unwrap()?);
        }
        matrix.push(row);
    }

    // assemble per-grid blocks where every entry survived the guard
    let grid = matrix[0][0].grid().to_vec();
    let l = p.min(q);
    let mut values = Vec::new();
    let mut gridv = Vec::new();
    for (j, point) in grid.iter().enumerate() {
        let mut block = Dense::zeros(p, q);
        let mut defined = true;
        for (s, row) in matrix.iter().enumerate() {
            for (t, r) in row.iter().enumerate() {
                match r.phi_values()[j] {
                    Some(v) => block[(s, t)] = v,
                    None => defined = false,
                }
            }
        }
        if !defined {
            continue;
        }
        let svd = nalgebra::SVD::try_new(block, false, false, f64::EPSILON, 0)
            .ok_or_else(|| Error::Solver("SVD did not converge".into()))?;
        let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for v in sv.into_iter().take(l) {
            values.push(v);
            gridv.push(point.clone());
        }
    }
    let order = values.len();
    let sample = SpectralSample::singular(values, order).with_grid(gridv);
    Ok((matrix, sample))
}

fn scalar_modulus_sample(r: &ReconstructionResult) -> SpectralSample {
    let mut values = Vec::new();
    let mut gridv = Vec::new();
    for (x, v) in r.grid().iter().zip(r.phi_values()) {
        if let Some(v) = v {
            values.push(v.norm());
            gridv.push(x.clone());
        }
    }
    let order = values.len();
    SpectralSample::singular(values, order).with_grid(gridv)
}
