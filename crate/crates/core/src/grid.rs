//! Multi-index bookkeeping for multilevel structures.
//!
//! Orders are multi-indices `n = (n_1, ..., n_d)`; flat layouts are row-major
//! (last level contiguous) throughout the crate.

use std::f64::consts::PI;

/// Product N(n) = n_1 ... n_d.
pub fn total(n: &[usize]) -> usize {
    n.iter().product()
}

/// Row-major strides for shape `n`.
pub fn strides(n: &[usize]) -> Vec<usize> {
    let d = n.len();
    let mut s = vec![1usize; d];
    for k in (0..d.saturating_sub(1)).rev() {
        s[k] = s[k + 1] * n[k + 1];
    }
    s
}

/// Flat offset of multi-index `idx` in shape `n`.
pub fn flatten(idx: &[usize], n: &[usize]) -> usize {
    debug_assert_eq!(idx.len(), n.len());
    let s = strides(n);
    idx.iter().zip(&s).map(|(i, st)| i * st).sum()
}

/// Multi-index of flat offset `f` in shape `n`.
pub fn unflatten(mut f: usize, n: &[usize]) -> Vec<usize> {
    let s = strides(n);
    s.iter()
        .zip(n)
        .map(|(st, nk)| {
            let i = (f / st) % nk;
            f -= i * st;
            i
        })
        .collect()
}

/// Iterate all multi-indices of shape `n` in row-major order.
pub fn indices(n: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let count = total(n);
    (0..count).map(move |f| unflatten(f, n))
}

/// Fourier grid point x_j = 2π j_k / n_k, wrapped to the principal cell
/// (-π, π] coordinate-wise.
pub fn fourier_point(j: &[usize], n: &[usize]) -> Vec<f64> {
    j.iter()
        .zip(n)
        .map(|(&jk, &nk)| {
            let x = 2.0 * PI * jk as f64 / nk as f64;
            if x > PI {
                x - 2.0 * PI
            } else {
                x
            }
        })
        .collect()
}

/// Symmetric signed index box [-e_1, e_1] x ... x [-e_d, e_d] with row-major
/// layout, used to store Fourier coefficient tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedBox {
    extent: Vec<i64>,
}

impl SignedBox {
    pub fn new(extent: Vec<i64>) -> Self {
        assert!(extent.iter().all(|&e| e >= 0));
        SignedBox { extent }
    }

    pub fn extent(&self) -> &[i64] {
        &self.extent
    }

    pub fn dims(&self) -> usize {
        self.extent.len()
    }

    /// Number of stored indices.
    pub fn len(&self) -> usize {
        self.extent.iter().map(|&e| (2 * e + 1) as usize).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, j: &[i64]) -> bool {
        j.len() == self.extent.len() && j.iter().zip(&self.extent).all(|(jk, e)| jk.abs() <= *e)
    }

    /// Flat offset of signed index `j`; caller must ensure containment.
    pub fn offset(&self, j: &[i64]) -> usize {
        debug_assert!(self.contains(j));
        let mut off = 0usize;
        for (&jk, &e) in j.iter().zip(&self.extent) {
            off = off * (2 * e + 1) as usize + (jk + e) as usize;
        }
        off
    }

    /// Signed index at flat offset `off`.
    pub fn index(&self, mut off: usize) -> Vec<i64> {
        let mut out = vec![0i64; self.extent.len()];
        for k in (0..self.extent.len()).rev() {
            let side = (2 * self.extent[k] + 1) as usize;
            out[k] = (off % side) as i64 - self.extent[k];
            off /= side;
        }
        out
    }

    /// Iterate all signed indices in layout order.
    pub fn iter(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.len()).map(move |off| self.index(off))
    }
}
