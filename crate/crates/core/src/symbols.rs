//! Multipliers, weights, periodic symbols and their Fourier coefficients.
//!
//! A multiplier φ lives on [-1,1]^d; the substitution x_k = cos(s_k) pulls it
//! back to the 2π-periodic symbol f(s) = π^d φ(cos s) on Q^d, Q = (-π, π).
//! For a general separable weight the companion symbol
//! f~(s) = π^d φ(cos s) Π_k w_k(cos s_k)|sin s_k| carries the weight along.
//! Fourier coefficient tables are the common currency consumed by the
//! Toeplitz/Hankel/circulant constructors.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fft::{self, Direction};
use crate::grid::{self, SignedBox};
use crate::{Dense, C64};

/// Default per-dimension oversampling of the coefficient quadrature grid.
pub const DEFAULT_OVERSAMPLE: usize = 8;

type EvalFn = Arc<dyn Fn(&[f64]) -> Dense + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegrabilityClass {
    Bounded,
    Integrable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    EvenInEachVariable,
    None,
}

/// A scalar or p x q matrix-valued multiplier on [-1,1]^d.
#[derive(Clone)]
pub struct MultiplierSpec {
    id: String,
    dims: usize,
    block: (usize, usize),
    class: IntegrabilityClass,
    eval: EvalFn,
}

impl MultiplierSpec {
    pub fn scalar<F>(id: impl Into<String>, dims: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> C64 + Send + Sync + 'static,
    {
        assert!(dims >= 1);
        MultiplierSpec {
            id: id.into(),
            dims,
            block: (1, 1),
            class: IntegrabilityClass::Bounded,
            eval: Arc::new(move |x| Dense::from_element(1, 1, f(x))),
        }
    }

    pub fn block<F>(id: impl Into<String>, dims: usize, p: usize, q: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> Dense + Send + Sync + 'static,
    {
        assert!(dims >= 1 && p >= 1 && q >= 1);
        MultiplierSpec {
            id: id.into(),
            dims,
            block: (p, q),
            class: IntegrabilityClass::Bounded,
            eval: Arc::new(f),
        }
    }

    /// Constant scalar multiplier.
    pub fn constant(c: f64) -> Self {
        Self::scalar(format!("{c}"), 1, move |_| C64::new(c, 0.0))
    }

    /// The coordinate multiplier φ(x) = x_k (0-based k) in d variables.
    pub fn coordinate(k: usize, dims: usize) -> Self {
        assert!(k < dims);
        let id = if dims == 1 {
            "x".to_string()
        } else {
            format!("x{}", k + 1)
        };
        Self::scalar(id, dims, move |x| C64::new(x[k], 0.0))
    }

    pub fn with_class(mut self, class: IntegrabilityClass) -> Self {
        self.class = class;
        self
    }

    pub fn evaluate(&self, x: &[f64]) -> Dense {
        debug_assert_eq!(x.len(), self.dims);
        (self.eval)(x)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn block_dims(&self) -> (usize, usize) {
        self.block
    }

    pub fn class(&self) -> IntegrabilityClass {
        self.class
    }
}

/// One separable factor of a weight function on (-1, 1).
#[derive(Clone)]
pub enum WeightFactor {
    /// w(x) = (1-x^2)^(-1/2); w(cos s)|sin s| = 1.
    Chebyshev1,
    /// w(x) = (1-x^2)^(1/2); w(cos s)|sin s| = sin^2 s.
    Chebyshev2,
    /// Nonnegative integrable weight given pointwise.
    Custom {
        id: String,
        w: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl WeightFactor {
    pub fn custom<F>(id: impl Into<String>, w: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        WeightFactor::Custom {
            id: id.into(),
            w: Arc::new(w),
        }
    }

    /// w(x) at an interior point.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            WeightFactor::Chebyshev1 => (1.0 - x * x).powf(-0.5),
            WeightFactor::Chebyshev2 => (1.0 - x * x).sqrt(),
            WeightFactor::Custom { w, .. } => w(x),
        }
    }

    /// The pulled-back factor w(cos s)|sin s|, extended evenly to all of Q.
    pub fn tilde(&self, s: f64) -> f64 {
        match self {
            WeightFactor::Chebyshev1 => 1.0,
            WeightFactor::Chebyshev2 => {
                let t = s.sin();
                t * t
            }
            WeightFactor::Custom { w, .. } => w(s.cos()) * s.sin().abs(),
        }
    }

    pub fn id(&self) -> &str {
        match self {
            WeightFactor::Chebyshev1 => "cheb1",
            WeightFactor::Chebyshev2 => "cheb2",
            WeightFactor::Custom { id, .. } => id,
        }
    }
}

/// Separable weight w(x) = w_1(x_1) ... w_d(x_d).
#[derive(Clone)]
pub struct WeightSpec {
    factors: Vec<WeightFactor>,
}

impl WeightSpec {
    pub fn new(factors: Vec<WeightFactor>) -> Self {
        assert!(!factors.is_empty());
        WeightSpec { factors }
    }

    pub fn chebyshev1(dims: usize) -> Self {
        Self::new(vec![WeightFactor::Chebyshev1; dims])
    }

    pub fn chebyshev2(dims: usize) -> Self {
        Self::new(vec![WeightFactor::Chebyshev2; dims])
    }

    pub fn custom<F>(id: impl Into<String>, w: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(vec![WeightFactor::custom(id, w)])
    }

    pub fn dims(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[WeightFactor] {
        &self.factors
    }

    /// Π_k w_k(cos s_k)|sin s_k| at a grid point.
    pub fn tilde_factor(&self, s: &[f64]) -> f64 {
        debug_assert_eq!(s.len(), self.factors.len());
        self.factors
            .iter()
            .zip(s)
            .map(|(f, &sk)| f.tilde(sk))
            .product()
    }

    pub fn is_chebyshev1(&self) -> bool {
        self.factors
            .iter()
            .all(|f| matches!(f, WeightFactor::Chebyshev1))
    }

    pub fn label(&self) -> String {
        self.factors
            .iter()
            .map(|f| f.id().to_string())
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// d-indexed table of (block) Fourier coefficients over a symmetric index box.
#[derive(Debug, Clone)]
pub struct FourierCoeffTable {
    order: Vec<usize>,
    block: (usize, usize),
    bbox: SignedBox,
    entries: Vec<Dense>,
}

impl FourierCoeffTable {
    pub fn zero(order: Vec<usize>, block: (usize, usize), extent: Vec<i64>) -> Self {
        assert_eq!(order.len(), extent.len());
        let bbox = SignedBox::new(extent);
        let entries = vec![Dense::zeros(block.0, block.1); bbox.len()];
        FourierCoeffTable {
            order,
            block,
            bbox,
            entries,
        }
    }

    /// Scalar univariate table from explicit (index, value) pairs; indices not
    /// listed are zero.
    pub fn from_scalar_entries(n: usize, extent: i64, pairs: &[(i64, C64)]) -> Self {
        let mut t = Self::zero(vec![n], (1, 1), vec![extent]);
        for &(j, v) in pairs {
            t.set(&[j], Dense::from_element(1, 1, v));
        }
        t
    }

    /// Scalar univariate table of an even symbol: pairs give k >= 0 entries
    /// and the mirror f_{-k} = f_k is filled in.
    pub fn from_even_scalar_entries(n: usize, extent: i64, pairs: &[(i64, C64)]) -> Self {
        let mut t = Self::zero(vec![n], (1, 1), vec![extent]);
        for &(k, v) in pairs {
            assert!(k >= 0);
            t.set(&[k], Dense::from_element(1, 1, v));
            if k > 0 {
                t.set(&[-k], Dense::from_element(1, 1, v));
            }
        }
        t
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn block_dims(&self) -> (usize, usize) {
        self.block
    }

    pub fn extent(&self) -> &[i64] {
        self.bbox.extent()
    }

    pub fn dims(&self) -> usize {
        self.bbox.dims()
    }

    pub fn covers(&self, extent: &[i64]) -> bool {
        extent.len() == self.dims()
            && extent
                .iter()
                .zip(self.bbox.extent())
                .all(|(need, have)| need <= have)
    }

    pub fn get(&self, j: &[i64]) -> Option<&Dense> {
        if self.bbox.contains(j) {
            Some(&self.entries[self.bbox.offset(j)])
        } else {
            None
        }
    }

    /// Coefficient at `j`, zero outside the stored box.
    pub fn coeff(&self, j: &[i64]) -> Dense {
        self.get(j)
            .cloned()
            .unwrap_or_else(|| Dense::zeros(self.block.0, self.block.1))
    }

    /// Scalar coefficient at `j` (1 x 1 tables).
    pub fn scalar(&self, j: &[i64]) -> C64 {
        debug_assert_eq!(self.block, (1, 1));
        self.get(j).map_or(C64::new(0.0, 0.0), |m| m[(0, 0)])
    }

    pub fn set(&mut self, j: &[i64], value: Dense) {
        assert!(self.bbox.contains(j), "index {j:?} outside table box");
        assert_eq!((value.nrows(), value.ncols()), self.block);
        let off = self.bbox.offset(j);
        self.entries[off] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<i64>, &Dense)> + '_ {
        self.bbox.iter().zip(self.entries.iter())
    }

    /// Table with every entry negated (same box and order).
    pub fn negated(&self) -> Self {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = e.map(|z| -z);
        }
        out
    }

    /// Re-dimension to a new order/extent, keeping overlapping entries and
    /// zero-filling the rest.
    pub fn reextent(&self, order: Vec<usize>, extent: Vec<i64>) -> Self {
        let mut out = Self::zero(order, self.block, extent);
        for (j, v) in self.iter() {
            if out.bbox.contains(&j) {
                out.set(&j, v.clone());
            }
        }
        out
    }
}

enum SymbolForm {
    Callable(EvalFn),
    Table(FourierCoeffTable),
}

/// A 2π-periodic symbol on Q^d, given as a callable or as an exact finite
/// Fourier table.
pub struct SymbolSpec {
    dims: usize,
    block: (usize, usize),
    parity: Parity,
    form: SymbolForm,
}

impl SymbolSpec {
    pub fn scalar<F>(dims: usize, parity: Parity, f: F) -> Self
    where
        F: Fn(&[f64]) -> C64 + Send + Sync + 'static,
    {
        SymbolSpec {
            dims,
            block: (1, 1),
            parity,
            form: SymbolForm::Callable(Arc::new(move |s| Dense::from_element(1, 1, f(s)))),
        }
    }

    pub fn block<F>(dims: usize, p: usize, q: usize, parity: Parity, f: F) -> Self
    where
        F: Fn(&[f64]) -> Dense + Send + Sync + 'static,
    {
        SymbolSpec {
            dims,
            block: (p, q),
            parity,
            form: SymbolForm::Callable(Arc::new(f)),
        }
    }

    /// Exact symbol: the trigonometric polynomial with the given coefficients.
    pub fn from_table(table: FourierCoeffTable, parity: Parity) -> Self {
        SymbolSpec {
            dims: table.dims(),
            block: table.block_dims(),
            parity,
            form: SymbolForm::Table(table),
        }
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn block_dims(&self) -> (usize, usize) {
        self.block
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_exact_table(&self) -> bool {
        matches!(self.form, SymbolForm::Table(_))
    }

    pub fn evaluate(&self, s: &[f64]) -> Dense {
        debug_assert_eq!(s.len(), self.dims);
        match &self.form {
            SymbolForm::Callable(f) => f(s),
            SymbolForm::Table(t) => {
                let mut acc = Dense::zeros(self.block.0, self.block.1);
                for (j, v) in t.iter() {
                    let phase: f64 = j.iter().zip(s).map(|(&jk, &sk)| jk as f64 * sk).sum();
                    acc += v * C64::new(phase.cos(), phase.sin());
                }
                acc
            }
        }
    }
}

/// Built-in univariate symbols by name, as exact tables sized for matrices
/// of order `n`. Returns the symbol and whether it is real-valued.
pub fn builtin_symbol(name: &str, n: usize) -> Result<(SymbolSpec, bool)> {
    let extent = n as i64 - 1;
    let (table, real, parity) = match name {
        "2-2cos" => (
            FourierCoeffTable::from_even_scalar_entries(
                n,
                extent,
                &[(0, C64::new(2.0, 0.0)), (1, C64::new(-1.0, 0.0))],
            ),
            true,
            Parity::EvenInEachVariable,
        ),
        "pi-cos" => (
            FourierCoeffTable::from_even_scalar_entries(
                n,
                extent,
                &[(1, C64::new(PI / 2.0, 0.0))],
            ),
            true,
            Parity::EvenInEachVariable,
        ),
        "exp-is" => (
            FourierCoeffTable::from_scalar_entries(n, extent, &[(1, C64::new(1.0, 0.0))]),
            false,
            Parity::None,
        ),
        _ => {
            return Err(Error::domain(format!(
                "unknown symbol {name:?}; expected 2-2cos, pi-cos or exp-is"
            )))
        }
    };
    Ok((SymbolSpec::from_table(table, parity), real))
}

/// Pull a multiplier back through x = cos s for a separable weight.
///
/// Returns (f, f~) with f(s) = π^d φ(cos s) and
/// f~(s) = f(s) Π_k w_k(cos s_k)|sin s_k|; both are even in each variable.
pub fn pullback_multiplier(
    phi: &MultiplierSpec,
    weight: &WeightSpec,
) -> Result<(SymbolSpec, SymbolSpec)> {
    if weight.dims() != phi.dims() {
        return Err(Error::domain(format!(
            "weight has {} factors but multiplier has {} variables",
            weight.dims(),
            phi.dims()
        )));
    }
    let d = phi.dims();
    let (p, q) = phi.block_dims();
    let scale = PI.powi(d as i32);

    let phi_f = phi.clone();
    let f = SymbolSpec::block(d, p, q, Parity::EvenInEachVariable, move |s| {
        let x: Vec<f64> = s.iter().map(|&sk| sk.cos()).collect();
        phi_f.evaluate(&x) * C64::new(scale, 0.0)
    });

    let phi_t = phi.clone();
    let weight_t = weight.clone();
    let f_tilde = SymbolSpec::block(d, p, q, Parity::EvenInEachVariable, move |s| {
        let x: Vec<f64> = s.iter().map(|&sk| sk.cos()).collect();
        let wfac = weight_t.tilde_factor(s);
        phi_t.evaluate(&x) * C64::new(scale * wfac, 0.0)
    });

    Ok((f, f_tilde))
}

/// Approximate the Fourier coefficients of `symbol` for matrices of order `n`.
///
/// Entries fill the box |j_k| <= n_k - 1, extended to |j_k| <= 2 n_k - 2 when
/// `tail` is set (the Hankel part and the anti-diagonal recovery need the
/// tail). Exact table symbols bypass quadrature; callables are integrated on
/// a midpoint grid of oversample * 2 n_k points per dimension via one FFT per
/// block entry.
pub fn fourier_coefficients(
    symbol: &SymbolSpec,
    n: &[usize],
    oversample: usize,
    tail: bool,
) -> Result<FourierCoeffTable> {
    if n.len() != symbol.dims() {
        return Err(Error::domain(format!(
            "order has {} levels, symbol has {} variables",
            n.len(),
            symbol.dims()
        )));
    }
    if n.contains(&0) {
        return Err(Error::domain("order entries must be positive"));
    }
    if oversample < 2 {
        return Err(Error::domain("oversample must be at least 2"));
    }
    let extent: Vec<i64> = n
        .iter()
        .map(|&nk| if tail { 2 * nk as i64 - 2 } else { nk as i64 - 1 })
        .collect();

    if let SymbolForm::Table(t) = &symbol.form {
        return Ok(t.reextent(n.to_vec(), extent));
    }

    let (p, q) = symbol.block_dims();
    let m: Vec<usize> = n.iter().map(|&nk| oversample * 2 * nk).collect();
    let total = grid::total(&m);
    let h: Vec<f64> = m.iter().map(|&mk| 2.0 * PI / mk as f64).collect();

    // Sample once; midpoint placement keeps declared singular points (grid
    // corners, s = 0) off the nodes.
    let mut samples: Vec<Dense> = Vec::with_capacity(total);
    for t in grid::indices(&m) {
        let s: Vec<f64> = t
            .iter()
            .zip(&h)
            .map(|(&tk, &hk)| -PI + (tk as f64 + 0.5) * hk)
            .collect();
        samples.push(symbol.evaluate(&s));
    }

    let mut table = FourierCoeffTable::zero(n.to_vec(), (p, q), extent.clone());
    let inv_total = 1.0 / total as f64;
    let mut lane = vec![C64::new(0.0, 0.0); total];
    for r in 0..p {
        for c in 0..q {
            for (t, sample) in samples.iter().enumerate() {
                lane[t] = sample[(r, c)];
            }
            fft::fft_nd(&mut lane, &m, Direction::Forward);
            for j in SignedBox::new(extent.clone()).iter() {
                // shift the midpoint grid back to (-π, π): phase Π_k e^{i j_k (π - h_k/2)}
                let mut phase = 0.0;
                let mut bucket = Vec::with_capacity(j.len());
                for ((&jk, &mk), &hk) in j.iter().zip(&m).zip(&h) {
                    phase += jk as f64 * (PI - hk / 2.0);
                    bucket.push(jk.rem_euclid(mk as i64) as usize);
                }
                let tw = C64::new(phase.cos(), phase.sin());
                let val = lane[grid::flatten(&bucket, &m)] * tw * inv_total;
                let off = table.bbox.offset(&j);
                table.entries[off][(r, c)] = val;
            }
        }
    }
    Ok(table)
}

fn weighted_sum(
    table: &FourierCoeffTable,
    degree: &[usize],
    points: &[Vec<f64>],
    fejer: bool,
) -> Result<Vec<Dense>> {
    let need: Vec<i64> = degree.iter().map(|&qk| qk as i64).collect();
    if !table.covers(&need) {
        return Err(Error::domain(format!(
            "table extent {:?} does not cover requested degree {:?}",
            table.extent(),
            degree
        )));
    }
    let (p, q) = table.block_dims();
    let dbox = SignedBox::new(need);
    let mut out = Vec::with_capacity(points.len());
    for x in points {
        let mut acc = Dense::zeros(p, q);
        for j in dbox.iter() {
            let w = if fejer {
                j.iter()
                    .zip(degree)
                    .map(|(&jk, &qk)| 1.0 - jk.abs() as f64 / (qk as f64 + 1.0))
                    .product::<f64>()
            } else {
                1.0
            };
            let phase: f64 = j.iter().zip(x).map(|(&jk, &xk)| jk as f64 * xk).sum();
            acc += table.coeff(&j) * (C64::new(phase.cos(), phase.sin()) * w);
        }
        out.push(acc);
    }
    Ok(out)
}

/// Fourier sum F_q[f](x) = Σ_{|j_k| <= q_k} f_j e^{i<j,x>} at each point.
pub fn fourier_sum(
    table: &FourierCoeffTable,
    degree: &[usize],
    points: &[Vec<f64>],
) -> Result<Vec<Dense>> {
    weighted_sum(table, degree, points, false)
}

/// Cesàro sum C_q[f](x) = Σ_{|j_k| <= q_k} Π_k (1 - |j_k|/(q_k+1)) f_j e^{i<j,x>}.
pub fn cesaro_sum(
    table: &FourierCoeffTable,
    degree: &[usize],
    points: &[Vec<f64>],
) -> Result<Vec<Dense>> {
    weighted_sum(table, degree, points, true)
}
