//! Strang and Frobenius-optimal circulant approximants of Toeplitz and
//! general matrices.
//!
//! The Strang approximant copies the central diagonals of the Toeplitz input;
//! its eigenvalues are Fourier partial sums of the symbol at the Fourier
//! grid. The Frobenius-optimal approximant is the orthogonal projection onto
//! the circulant algebra; on Toeplitz input its first column is the Fejér
//! average a_i = ((n-i) f_i + i f_{i-n}) / n and its eigenvalues are Cesàro
//! sums at the grid. Everything extends levelwise to multilevel and
//! entrywise to block coefficients.

use crate::error::{Error, Result};
use crate::grid;
use crate::matrices::{CirculantMatrix, ToeplitzMatrix};
use crate::{Dense, C64};

/// Strang approximant: copy the [n/2] central diagonals levelwise. At even
/// n the middle diagonal n/2 is claimed by neither side; it takes the
/// positive-index coefficient f_{n/2} (a tie rule, pinned by tests).
pub fn strang_circulant(t: &ToeplitzMatrix) -> CirculantMatrix {
    let n = t.order().to_vec();
    let coeffs = t.coeffs();
    let count = grid::total(&n);
    let mut col = Vec::with_capacity(count);
    for k in grid::indices(&n) {
        let j: Vec<i64> = k
            .iter()
            .zip(&n)
            .map(|(&kl, &nl)| {
                let half_up = nl.div_ceil(2);
                // positive side below ceil(n/2); the even-n middle diagonal
                // is a tie, resolved to the positive coefficient
                if kl < half_up || (nl % 2 == 0 && kl == nl / 2) {
                    kl as i64
                } else {
                    kl as i64 - nl as i64
                }
            })
            .collect();
        col.push(coeffs.coeff(&j));
    }
    CirculantMatrix::from_first_column(n, col).expect("first column sized by construction")
}

/// Frobenius-optimal approximant of a Toeplitz matrix via the closed-form
/// Fejér-weighted first column, levelwise:
/// a_k = Σ_ε Π_l w_l(ε_l) f_{k - ε∘n},  w_l(0) = (n_l-k_l)/n_l, w_l(1) = k_l/n_l.
pub fn optimal_circulant(t: &ToeplitzMatrix) -> CirculantMatrix {
    let n = t.order().to_vec();
    let d = n.len();
    let coeffs = t.coeffs();
    let (p, q) = t.block_dims();
    let count = grid::total(&n);
    let mut col = Vec::with_capacity(count);
    for k in grid::indices(&n) {
        let mut acc = Dense::zeros(p, q);
        for mask in 0..(1usize << d) {
            let mut weight = 1.0f64;
            let mut j = Vec::with_capacity(d);
            for l in 0..d {
                let wrapped = mask >> l & 1 == 1;
                let (w, jl) = if wrapped {
                    (k[l] as f64 / n[l] as f64, k[l] as i64 - n[l] as i64)
                } else {
                    ((n[l] - k[l]) as f64 / n[l] as f64, k[l] as i64)
                };
                weight *= w;
                j.push(jl);
            }
            if weight == 0.0 {
                continue;
            }
            acc += coeffs.coeff(&j) * C64::new(weight, 0.0);
        }
        col.push(acc);
    }
    CirculantMatrix::from_first_column(n, col).expect("first column sized by construction")
}

/// Frobenius-optimal circulant of a general square matrix by cyclic-diagonal
/// averaging, levelwise and blockwise: a_k = (1/N) Σ_c A_{(c+k) mod n, c}.
/// Agrees with F diag(F* A F) F* and, on Toeplitz input, with the closed-form
/// [`optimal_circulant`].
pub fn optimal_circulant_dense(
    a: &Dense,
    order: &[usize],
    block: (usize, usize),
) -> Result<CirculantMatrix> {
    let count = grid::total(order);
    let (p, q) = block;
    if a.nrows() != count * p || a.ncols() != count * q {
        return Err(Error::domain(format!(
            "matrix is {}x{}, expected {}x{} for order {:?} with {}x{} blocks",
            a.nrows(),
            a.ncols(),
            count * p,
            count * q,
            order,
            p,
            q
        )));
    }
    let idx: Vec<Vec<usize>> = grid::indices(order).collect();
    let flat: Vec<usize> = (0..count).collect();
    let mut col = vec![Dense::zeros(p, q); count];
    for (fk, k) in idx.iter().enumerate() {
        let mut acc = Dense::zeros(p, q);
        for &fc in &flat {
            let c = &idx[fc];
            let r: Vec<usize> = c
                .iter()
                .zip(k)
                .zip(order)
                .map(|((&cl, &kl), &nl)| (cl + kl) % nl)
                .collect();
            let fr = grid::flatten(&r, order);
            for s in 0..p {
                for t in 0..q {
                    acc[(s, t)] += a[(fr * p + s, fc * q + t)];
                }
            }
        }
        col[fk] = acc / C64::new(count as f64, 0.0);
    }
    CirculantMatrix::from_first_column(order.to_vec(), col)
}
