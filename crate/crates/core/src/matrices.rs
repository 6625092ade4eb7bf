//! Toeplitz, Hankel and circulant matrices (multilevel, block), dense
//! materialization, FFT matvec, and dense eigen/singular solvers.
//!
//! Entry conventions, 0-based multi-indices throughout:
//! Toeplitz (i,j) = f_{i-j}, Hankel (i,j) = f_{i+j+shift}, circulant
//! (i,j) = a_{(i-j) mod n}, all levelwise, with p x q blocks for
//! matrix-valued coefficients laid out multi-index outer, block inner.

use std::sync::OnceLock;

use nalgebra::{Schur, SymmetricEigen, SVD};

use crate::error::{Error, Result};
use crate::fft::{self, Direction};
use crate::grid;
use crate::spectral::SpectralSample;
use crate::symbols::FourierCoeffTable;
use crate::{Dense, C64};

/// Desk-scale guardrail on dense materialization (rows).
pub const DEFAULT_DENSE_CAP: usize = 4096;

fn check_cap(n: &[usize], block: (usize, usize), cap: usize) -> Result<()> {
    let rows = grid::total(n) * block.0.max(block.1);
    if rows > cap {
        return Err(Error::Resource(format!(
            "dense materialization of {rows} rows exceeds cap {cap}"
        )));
    }
    Ok(())
}

fn dense_from_blocks(
    n: &[usize],
    block: (usize, usize),
    cap: usize,
    entry: impl Fn(&[usize], &[usize]) -> Dense,
) -> Result<Dense> {
    check_cap(n, block, cap)?;
    let count = grid::total(n);
    let (p, q) = block;
    let idx: Vec<Vec<usize>> = grid::indices(n).collect();
    let mut out = Dense::zeros(count * p, count * q);
    for (bi, i) in idx.iter().enumerate() {
        for (bj, j) in idx.iter().enumerate() {
            let b = entry(i, j);
            for r in 0..p {
                for c in 0..q {
                    out[(bi * p + r, bj * q + c)] = b[(r, c)];
                }
            }
        }
    }
    Ok(out)
}

/// Fast structured matvec: out_i = Σ_j kernel(i - j) v_j via cyclic embedding
/// of each level into length 2 n_k.
fn kernel_matvec(
    n: &[usize],
    block: (usize, usize),
    kernel: &dyn Fn(&[i64], usize, usize) -> C64,
    v: &[C64],
) -> Vec<C64> {
    let (p, q) = block;
    let count = grid::total(n);
    assert_eq!(v.len(), count * q);
    let m: Vec<usize> = n.iter().map(|&nk| 2 * nk).collect();
    let mtotal = grid::total(&m);
    let mut out = vec![C64::new(0.0, 0.0); count * p];

    for s in 0..p {
        for t in 0..q {
            let mut kern = vec![C64::new(0.0, 0.0); mtotal];
            'slots: for (off, slot) in grid::indices(&m).enumerate() {
                let mut j = Vec::with_capacity(slot.len());
                for (&sk, &nk) in slot.iter().zip(n) {
                    if sk < nk {
                        j.push(sk as i64);
                    } else if sk == nk {
                        continue 'slots; // padding slot stays zero
                    } else {
                        j.push(sk as i64 - 2 * nk as i64);
                    }
                }
                kern[off] = kernel(&j, s, t);
            }
            let mut vv = vec![C64::new(0.0, 0.0); mtotal];
            for (fi, i) in grid::indices(n).enumerate() {
                vv[grid::flatten(&i, &m)] = v[fi * q + t];
            }
            let conv = fft::cyclic_convolve(&kern, &vv, &m);
            for (fi, i) in grid::indices(n).enumerate() {
                out[fi * p + s] += conv[grid::flatten(&i, &m)];
            }
        }
    }
    out
}

/// Multilevel block Toeplitz matrix T_n(f) = {f_{i-j}}.
#[derive(Debug, Clone)]
pub struct ToeplitzMatrix {
    order: Vec<usize>,
    coeffs: FourierCoeffTable,
}

impl ToeplitzMatrix {
    pub fn new(coeffs: FourierCoeffTable, order: Vec<usize>) -> Result<Self> {
        let need: Vec<i64> = order.iter().map(|&nk| nk as i64 - 1).collect();
        if !coeffs.covers(&need) {
            return Err(Error::domain(format!(
                "coefficient table extent {:?} does not cover |j| <= n-1 for n = {:?}",
                coeffs.extent(),
                order
            )));
        }
        Ok(ToeplitzMatrix { order, coeffs })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn block_dims(&self) -> (usize, usize) {
        self.coeffs.block_dims()
    }

    pub fn coeffs(&self) -> &FourierCoeffTable {
        &self.coeffs
    }

    pub fn dense(&self) -> Result<Dense> {
        self.dense_with_cap(DEFAULT_DENSE_CAP)
    }

    pub fn dense_with_cap(&self, cap: usize) -> Result<Dense> {
        dense_from_blocks(&self.order, self.block_dims(), cap, |i, j| {
            let off: Vec<i64> = i
                .iter()
                .zip(j)
                .map(|(&ik, &jk)| ik as i64 - jk as i64)
                .collect();
            self.coeffs.coeff(&off)
        })
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        kernel_matvec(&self.order, self.block_dims(), &|off, s, t| {
            self.coeffs.get(off).map_or(C64::new(0.0, 0.0), |b| b[(s, t)])
        }, v)
    }
}

/// Multilevel block Hankel matrix H_n(f) = {f_{i+j+shift}} (shift 0 for the
/// first-kind sections, 2 for the second kind).
#[derive(Debug, Clone)]
pub struct HankelMatrix {
    order: Vec<usize>,
    coeffs: FourierCoeffTable,
    shift: usize,
}

impl HankelMatrix {
    pub fn new(coeffs: FourierCoeffTable, order: Vec<usize>, shift: usize) -> Result<Self> {
        let need: Vec<i64> = order
            .iter()
            .map(|&nk| 2 * nk as i64 - 2 + shift as i64)
            .collect();
        if !coeffs.covers(&need) {
            return Err(Error::domain(format!(
                "coefficient table extent {:?} does not cover i+j+{} for n = {:?}",
                coeffs.extent(),
                shift,
                order
            )));
        }
        Ok(HankelMatrix {
            order,
            coeffs,
            shift,
        })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn block_dims(&self) -> (usize, usize) {
        self.coeffs.block_dims()
    }

    pub fn coeffs(&self) -> &FourierCoeffTable {
        &self.coeffs
    }

    pub fn dense(&self) -> Result<Dense> {
        self.dense_with_cap(DEFAULT_DENSE_CAP)
    }

    pub fn dense_with_cap(&self, cap: usize) -> Result<Dense> {
        dense_from_blocks(&self.order, self.block_dims(), cap, |i, j| {
            let idx: Vec<i64> = i
                .iter()
                .zip(j)
                .map(|(&ik, &jk)| (ik + jk + self.shift) as i64)
                .collect();
            self.coeffs.coeff(&idx)
        })
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        // H v = T' (reverse v) with kernel g_k = f_{k + n - 1 + shift}
        let (_, q) = self.block_dims();
        let count = grid::total(&self.order);
        assert_eq!(v.len(), count * q);
        let mut rev = vec![C64::new(0.0, 0.0); v.len()];
        for (fi, i) in grid::indices(&self.order).enumerate() {
            let r: Vec<usize> = i
                .iter()
                .zip(&self.order)
                .map(|(&ik, &nk)| nk - 1 - ik)
                .collect();
            let fr = grid::flatten(&r, &self.order);
            for t in 0..q {
                rev[fi * q + t] = v[fr * q + t];
            }
        }
        kernel_matvec(&self.order, self.block_dims(), &|off, s, t| {
            let idx: Vec<i64> = off
                .iter()
                .zip(&self.order)
                .map(|(&ok, &nk)| ok + nk as i64 - 1 + self.shift as i64)
                .collect();
            self.coeffs.get(&idx).map_or(C64::new(0.0, 0.0), |b| b[(s, t)])
        }, &rev)
    }
}

/// Multilevel block circulant matrix a_{(i-j) mod n}, diagonalized by the
/// (tensor) discrete Fourier transform.
#[derive(Debug)]
pub struct CirculantMatrix {
    order: Vec<usize>,
    block: (usize, usize),
    first_column: Vec<Dense>,
    eigen_cache: OnceLock<SpectralSample>,
}

impl Clone for CirculantMatrix {
    fn clone(&self) -> Self {
        let cache = OnceLock::new();
        if let Some(s) = self.eigen_cache.get() {
            let _ = cache.set(s.clone());
        }
        CirculantMatrix {
            order: self.order.clone(),
            block: self.block,
            first_column: self.first_column.clone(),
            eigen_cache: cache,
        }
    }
}

impl CirculantMatrix {
    pub fn from_first_column(order: Vec<usize>, first_column: Vec<Dense>) -> Result<Self> {
        let count = grid::total(&order);
        if first_column.len() != count {
            return Err(Error::domain(format!(
                "first column has {} blocks, expected N(n) = {count}",
                first_column.len()
            )));
        }
        let block = (first_column[0].nrows(), first_column[0].ncols());
        if first_column
            .iter()
            .any(|b| (b.nrows(), b.ncols()) != block)
        {
            return Err(Error::domain("ragged block sizes in first column"));
        }
        Ok(CirculantMatrix {
            order,
            block,
            first_column,
            eigen_cache: OnceLock::new(),
        })
    }

    pub fn from_scalar_first_column(order: Vec<usize>, col: Vec<C64>) -> Result<Self> {
        let blocks = col
            .into_iter()
            .map(|z| Dense::from_element(1, 1, z))
            .collect();
        Self::from_first_column(order, blocks)
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn block_dims(&self) -> (usize, usize) {
        self.block
    }

    pub fn first_column(&self) -> &[Dense] {
        &self.first_column
    }

    pub fn dense(&self) -> Result<Dense> {
        self.dense_with_cap(DEFAULT_DENSE_CAP)
    }

    pub fn dense_with_cap(&self, cap: usize) -> Result<Dense> {
        dense_from_blocks(&self.order, self.block, cap, |i, j| {
            let k: Vec<usize> = i
                .iter()
                .zip(j)
                .zip(&self.order)
                .map(|((&ik, &jk), &nk)| (ik + nk - jk) % nk)
                .collect();
            self.first_column[grid::flatten(&k, &self.order)].clone()
        })
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        let (p, q) = self.block;
        let count = grid::total(&self.order);
        assert_eq!(v.len(), count * q);
        let mut out = vec![C64::new(0.0, 0.0); count * p];
        for s in 0..p {
            for t in 0..q {
                let a: Vec<C64> = self.first_column.iter().map(|b| b[(s, t)]).collect();
                let vt: Vec<C64> = (0..count).map(|fi| v[fi * q + t]).collect();
                let conv = fft::cyclic_convolve(&a, &vt, &self.order);
                for fi in 0..count {
                    out[fi * p + s] += conv[fi];
                }
            }
        }
        out
    }

    /// Values of the symbol polynomial p(x_j) = Σ_k a_k e^{i<x_j,k>} at every
    /// Fourier grid point, in row-major grid order (one block per point).
    pub fn symbol_values(&self) -> Vec<Dense> {
        let (p, q) = self.block;
        let count = grid::total(&self.order);
        let mut values = vec![Dense::zeros(p, q); count];
        let mut lane = vec![C64::new(0.0, 0.0); count];
        for s in 0..p {
            for t in 0..q {
                for (k, b) in self.first_column.iter().enumerate() {
                    lane[k] = b[(s, t)];
                }
                fft::fft_nd(&mut lane, &self.order, Direction::Inverse);
                for (j, v) in values.iter_mut().enumerate() {
                    v[(s, t)] = lane[j];
                }
            }
        }
        values
    }

    fn grid_points(&self) -> Vec<Vec<f64>> {
        grid::indices(&self.order)
            .map(|j| grid::fourier_point(&j, &self.order))
            .collect()
    }

    /// Eigenvalues via the FFT, each bound to its grid point x_j. Block
    /// circulants (p = q > 1) solve a dense eigenproblem per grid point.
    pub fn eigenvalues(&self) -> Result<SpectralSample> {
        let (p, q) = self.block;
        if p != q {
            return Err(Error::domain(
                "eigenvalues need square blocks; use singular_sample",
            ));
        }
        if let Some(s) = self.eigen_cache.get() {
            return Ok(s.clone());
        }
        let count = grid::total(&self.order);
        let points = self.grid_points();
        let values = self.symbol_values();
        let sample = if p == 1 {
            let vals: Vec<C64> = values.iter().map(|b| b[(0, 0)]).collect();
            SpectralSample::eigen(vals, count).with_grid(points)
        } else {
            let mut vals = Vec::with_capacity(count * p);
            let mut gridv = Vec::with_capacity(count * p);
            for (j, b) in values.iter().enumerate() {
                let sub = eigen_decompose(b, false)?;
                for &lam in sub.values() {
                    vals.push(lam);
                    gridv.push(points[j].clone());
                }
            }
            SpectralSample::eigen(vals, count * p).with_grid(gridv)
        };
        let _ = self.eigen_cache.set(sample.clone());
        Ok(sample)
    }

    /// Singular values per grid point (moduli of the symbol values in the
    /// scalar case), each bound to its grid point.
    pub fn singular_sample(&self) -> Result<SpectralSample> {
        let (p, q) = self.block;
        let l = p.min(q);
        let count = grid::total(&self.order);
        let points = self.grid_points();
        let values = self.symbol_values();
        if l == 1 && p == 1 && q == 1 {
            let vals: Vec<f64> = values.iter().map(|b| b[(0, 0)].norm()).collect();
            return Ok(SpectralSample::singular(vals, count).with_grid(points));
        }
        let mut vals = Vec::with_capacity(count * l);
        let mut gridv = Vec::with_capacity(count * l);
        for (j, b) in values.iter().enumerate() {
            let svd = SVD::try_new(b.clone(), false, false, f64::EPSILON, 0)
                .ok_or_else(|| Error::Solver("SVD did not converge".into()))?;
            let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
            sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for v in sv.into_iter().take(l) {
                vals.push(v);
                gridv.push(points[j].clone());
            }
        }
        Ok(SpectralSample::singular(vals, count * l).with_grid(gridv))
    }
}

fn is_hermitian(a: &Dense) -> bool {
    let scale = a.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return true;
    }
    let n = a.nrows();
    for i in 0..n {
        for j in i..n {
            if (a[(i, j)] - a[(j, i)].conj()).norm() > 1e-10 * scale {
                return false;
            }
        }
    }
    true
}

/// Diagonal of an exactly triangular matrix, if the matrix is one.
fn exact_triangular_diagonal(a: &Dense) -> Option<Vec<C64>> {
    let n = a.nrows();
    let zero = C64::new(0.0, 0.0);
    let upper = (0..n).all(|i| (0..i).all(|j| a[(i, j)] == zero));
    let lower = (0..n).all(|i| (i + 1..n).all(|j| a[(i, j)] == zero));
    if upper || lower {
        Some((0..n).map(|i| a[(i, i)]).collect())
    } else {
        None
    }
}

/// Dense eigendecomposition. Hermitian inputs (asserted or detected) use the
/// symmetric solver and come out real; exactly triangular matrices read off
/// the diagonal; everything else goes through the Schur form. Eigenvalues are
/// sorted by real part, then imaginary part.
pub fn eigen_decompose(a: &Dense, hermitian: bool) -> Result<SpectralSample> {
    if a.nrows() != a.ncols() {
        return Err(Error::domain("eigendecomposition needs a square matrix"));
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(SpectralSample::eigen(vec![], 0));
    }
    let mut vals: Vec<C64> = if hermitian || is_hermitian(a) {
        let se = SymmetricEigen::try_new(a.clone(), f64::EPSILON, 0)
            .ok_or_else(|| Error::Solver("symmetric eigensolver did not converge".into()))?;
        se.eigenvalues.iter().map(|&r| C64::new(r, 0.0)).collect()
    } else if let Some(diag) = exact_triangular_diagonal(a) {
        diag
    } else {
        let schur = Schur::try_new(a.clone(), f64::EPSILON, 10_000 * n)
            .ok_or_else(|| Error::Solver("Schur iteration did not converge".into()))?;
        let (_, t) = schur.unpack();
        let scale = t.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        for i in 0..n {
            for j in 0..i {
                if t[(i, j)].norm() > 1e-8 * scale.max(f64::MIN_POSITIVE) {
                    return Err(Error::Solver(
                        "Schur factor is not triangular to working accuracy".into(),
                    ));
                }
            }
        }
        (0..n).map(|i| t[(i, i)]).collect()
    };
    vals.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(SpectralSample::eigen(vals, n))
}

/// Singular values of a dense matrix, sorted descending.
pub fn singular_values(a: &Dense) -> Result<SpectralSample> {
    let svd = SVD::try_new(a.clone(), false, false, f64::EPSILON, 0)
        .ok_or_else(|| Error::Solver("SVD did not converge".into()))?;
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let order = sv.len();
    Ok(SpectralSample::singular(sv, order))
}
