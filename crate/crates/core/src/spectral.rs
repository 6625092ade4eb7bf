//! Distribution functionals, Schatten norms, clustering statistics, and the
//! constructive essential-range membership tests.

use std::sync::Arc;

use nalgebra::SVD;

use crate::error::{Error, Result};
use crate::grid;
use crate::symbols::SymbolSpec;
use crate::{Dense, C64};

/// Default membership threshold: a value attained on >= 1% of the domain is
/// detected at n >= 256. `excluded` uses threshold/10.
pub const DEFAULT_MEMBER_THRESHOLD: f64 = 0.01;

/// Default tolerance for the attraction-order estimate.
pub const DEFAULT_ATTRACTION_TOL: f64 = 1e-3;

/// Default quadrature resolution (points per dimension, midpoint rule).
pub const DEFAULT_QUAD_POINTS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    Eigen,
    Singular,
}

/// Eigenvalues or singular values of one matrix, optionally bound 1:1 to
/// Fourier grid points.
#[derive(Debug, Clone)]
pub struct SpectralSample {
    values: Vec<C64>,
    kind: SampleKind,
    order: usize,
    grid: Option<Vec<Vec<f64>>>,
}

impl SpectralSample {
    pub fn eigen(values: Vec<C64>, order: usize) -> Self {
        SpectralSample {
            values,
            kind: SampleKind::Eigen,
            order,
            grid: None,
        }
    }

    pub fn singular(values: Vec<f64>, order: usize) -> Self {
        assert!(values.iter().all(|&v| v >= 0.0), "singular values are >= 0");
        SpectralSample {
            values: values.into_iter().map(|v| C64::new(v, 0.0)).collect(),
            kind: SampleKind::Singular,
            order,
            grid: None,
        }
    }

    pub fn with_grid(mut self, grid: Vec<Vec<f64>>) -> Self {
        assert_eq!(grid.len(), self.values.len(), "grid is 1:1 with values");
        self.grid = Some(grid);
        self
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Real parts, meaningful for singular samples.
    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn kind(&self) -> SampleKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn grid(&self) -> Option<&[Vec<f64>]> {
        self.grid.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A test function F together with a stable identifier for reports.
#[derive(Clone)]
pub struct TestFunction {
    id: String,
    f: Arc<dyn Fn(C64) -> C64 + Send + Sync>,
}

impl TestFunction {
    pub fn new<F>(id: impl Into<String>, f: F) -> Self
    where
        F: Fn(C64) -> C64 + Send + Sync + 'static,
    {
        TestFunction {
            id: id.into(),
            f: Arc::new(f),
        }
    }

    /// F(t) = t.
    pub fn identity() -> Self {
        Self::new("t", |z| z)
    }

    /// F(t) = t².
    pub fn square() -> Self {
        Self::new("t2", |z| z * z)
    }

    /// Indicator of the real interval [a, b] applied to Re t.
    pub fn indicator(a: f64, b: f64) -> Self {
        Self::new(format!("indicator:{a},{b}"), move |z| {
            if z.re >= a && z.re <= b {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn eval(&self, z: C64) -> C64 {
        (self.f)(z)
    }

    /// Parse the CLI spelling: `t`, `t2`, or `indicator:<a>,<b>`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        match spec {
            "t" => Ok(Self::identity()),
            "t2" => Ok(Self::square()),
            _ => {
                let body = spec.strip_prefix("indicator:").ok_or_else(|| {
                    Error::domain(format!(
                        "unknown test function {spec:?}; expected t, t2 or indicator:a,b"
                    ))
                })?;
                let parts: Vec<&str> = body.split(',').collect();
                if parts.len() != 2 {
                    return Err(Error::domain("indicator needs two bounds a,b"));
                }
                let a: f64 = parts[0]
                    .parse()
                    .map_err(|_| Error::domain("malformed indicator bound"))?;
                let b: f64 = parts[1]
                    .parse()
                    .map_err(|_| Error::domain("malformed indicator bound"))?;
                Ok(Self::indicator(a, b))
            }
        }
    }
}

/// Σ(F, A_n) = (1/d_n) Σ_j F(value_j).
pub fn sigma_mean(sample: &SpectralSample, f: &TestFunction) -> Result<C64> {
    if sample.is_empty() {
        return Err(Error::domain("empty spectral sample"));
    }
    let sum: C64 = sample.values.iter().map(|&v| f.eval(v)).sum();
    Ok(sum / sample.len() as f64)
}

/// Schatten p norm of a singular-value sample; p = ∞ gives the spectral norm.
pub fn schatten_norm(sample: &SpectralSample, p: f64) -> Result<f64> {
    if sample.kind != SampleKind::Singular {
        return Err(Error::domain("Schatten norms need a singular-value sample"));
    }
    if p.is_nan() || p < 1.0 {
        return Err(Error::domain("Schatten p requires p >= 1"));
    }
    let sv = sample.real_values();
    if p.is_infinite() {
        return Ok(sv.iter().fold(0.0f64, |m, &v| m.max(v)));
    }
    Ok(sv.iter().map(|&v| v.powf(p)).sum::<f64>().powf(1.0 / p))
}

/// Empirical spectral mean versus the symbol integral.
#[derive(Debug, Clone)]
pub struct DistributionReport {
    pub test_function_id: String,
    pub empirical_mean: C64,
    pub integral_value: C64,
    pub abs_error: f64,
    pub order: usize,
    /// Set when an eigenvalue comparison ran against a non-Hermitian symbol;
    /// the limit relation is then only guaranteed in the circulant/normal case.
    pub non_hermitian_flagged: bool,
}

fn block_eigenvalues_small(m: &Dense) -> Result<Vec<C64>> {
    crate::matrices::eigen_decompose(m, false).map(|s| s.values().to_vec())
}

fn block_singular_small(m: &Dense) -> Result<Vec<f64>> {
    let svd = SVD::try_new(m.clone(), false, false, f64::EPSILON, 0)
        .ok_or_else(|| Error::Solver("SVD did not converge".into()))?;
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(sv)
}

/// Compare Σ(F, A_n) against (1/(2π)^d) ∫ F∘f (eigen) or F∘|f| (singular),
/// block symbols contributing the normalized trace (1/l) tr[F(·)], l = min(p,q).
/// The integral uses the composite midpoint rule with `quad_points` nodes per
/// dimension.
pub fn distribution_compare(
    sample: &SpectralSample,
    symbol: &SymbolSpec,
    f: &TestFunction,
    quad_points: usize,
) -> Result<DistributionReport> {
    if quad_points < 2 {
        return Err(Error::domain("quadrature needs at least 2 points"));
    }
    let empirical = sigma_mean(sample, f)?;

    let d = symbol.dims();
    let (p, q) = symbol.block_dims();
    let l = p.min(q);
    let shape = vec![quad_points; d];
    let total = grid::total(&shape);
    let h = 2.0 * std::f64::consts::PI / quad_points as f64;

    let mut acc = C64::new(0.0, 0.0);
    let mut herm_dev = 0.0f64;
    let mut scale = 0.0f64;
    for t in grid::indices(&shape) {
        let s: Vec<f64> = t
            .iter()
            .map(|&tk| -std::f64::consts::PI + (tk as f64 + 0.5) * h)
            .collect();
        let val = symbol.evaluate(&s);
        scale = scale.max(val.iter().map(|z| z.norm()).fold(0.0, f64::max));
        let contrib = match sample.kind {
            SampleKind::Eigen => {
                if p == 1 && q == 1 {
                    let z = val[(0, 0)];
                    herm_dev = herm_dev.max(z.im.abs());
                    f.eval(z)
                } else {
                    if p != q {
                        return Err(Error::domain(
                            "eigen-kind comparison needs a square block symbol",
                        ));
                    }
                    herm_dev = herm_dev.max((&val - val.adjoint()).norm());
                    let lam = block_eigenvalues_small(&val)?;
                    lam.iter().map(|&z| f.eval(z)).sum::<C64>() / l as f64
                }
            }
            SampleKind::Singular => {
                if p == 1 && q == 1 {
                    f.eval(C64::new(val[(0, 0)].norm(), 0.0))
                } else {
                    let sv = block_singular_small(&val)?;
                    sv.iter()
                        .take(l)
                        .map(|&v| f.eval(C64::new(v, 0.0)))
                        .sum::<C64>()
                        / l as f64
                }
            }
        };
        acc += contrib;
    }
    let integral = acc / total as f64;
    let flagged =
        sample.kind == SampleKind::Eigen && herm_dev > 1e-10 * scale.max(f64::MIN_POSITIVE);

    Ok(DistributionReport {
        test_function_id: f.id().to_string(),
        empirical_mean: empirical,
        integral_value: integral,
        abs_error: (empirical - integral).norm(),
        order: sample.order(),
        non_hermitian_flagged: flagged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangeVerdict {
    MemberWithinEps,
    Excluded,
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct RangeMembershipReport {
    pub point: C64,
    pub radius: f64,
    pub fraction_inside: f64,
    pub verdict: RangeVerdict,
}

/// Fraction of the sample inside the open disk D(s, eps), with the
/// three-way verdict of the constructive membership test.
pub fn range_membership(
    sample: &SpectralSample,
    s: C64,
    eps: f64,
    threshold: f64,
) -> Result<RangeMembershipReport> {
    if eps <= 0.0 {
        return Err(Error::domain("eps must be positive"));
    }
    if !(0.0 < threshold && threshold < 1.0) {
        return Err(Error::domain("threshold must lie in (0,1)"));
    }
    if sample.is_empty() {
        return Err(Error::domain("empty spectral sample"));
    }
    let inside = sample.values.iter().filter(|v| (*v - s).norm() < eps).count();
    let fraction = inside as f64 / sample.len() as f64;
    let verdict = if fraction >= threshold {
        RangeVerdict::MemberWithinEps
    } else if fraction <= threshold / 10.0 {
        RangeVerdict::Excluded
    } else {
        RangeVerdict::Inconclusive
    };
    Ok(RangeMembershipReport {
        point: s,
        radius: eps,
        fraction_inside: fraction,
        verdict,
    })
}

/// Cluster target: a finite point set or a list of real intervals.
#[derive(Debug, Clone)]
pub enum ClusterSet {
    Points(Vec<C64>),
    Intervals(Vec<(f64, f64)>),
}

impl ClusterSet {
    fn distance(&self, z: C64) -> f64 {
        match self {
            ClusterSet::Points(pts) => pts
                .iter()
                .map(|&p| (z - p).norm())
                .fold(f64::INFINITY, f64::min),
            ClusterSet::Intervals(ivs) => ivs
                .iter()
                .map(|&(a, b)| {
                    let dre = if z.re < a {
                        a - z.re
                    } else if z.re > b {
                        z.re - b
                    } else {
                        0.0
                    };
                    (dre * dre + z.im * z.im).sqrt()
                })
                .fold(f64::INFINITY, f64::min),
        }
    }
}

/// Count of sample values outside D(S, eps) = ∪_{s in S} D(s, eps).
pub fn cluster_outliers(sample: &SpectralSample, set: &ClusterSet, eps: f64) -> usize {
    sample
        .values
        .iter()
        .filter(|&&z| set.distance(z) >= eps)
        .count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttractionOrder {
    Finite(usize),
    Infinite,
}

/// Estimate the attraction order of `s` from spectra at increasing orders.
///
/// The j-th closest eigenvalue counts as attracted when its distance either
/// already sits below `tol` or decreases monotonically (within `tol` slack)
/// by more than `tol` over the list. The order is the number of leading
/// attracted indices; when every tracked index is attracted the order is
/// reported as infinite.
pub fn attraction_order(
    samples: &[SpectralSample],
    s: C64,
    tol: f64,
) -> Result<AttractionOrder> {
    if samples.len() < 3 {
        return Err(Error::domain("attraction order needs at least 3 samples"));
    }
    for w in samples.windows(2) {
        if w[1].order() <= w[0].order() {
            return Err(Error::domain("sample orders must strictly increase"));
        }
    }
    let tracked = samples.iter().map(|smp| smp.len()).min().unwrap_or(0);
    let dists: Vec<Vec<f64>> = samples
        .iter()
        .map(|smp| {
            let mut d: Vec<f64> = smp.values.iter().map(|&v| (v - s).norm()).collect();
            d.sort_by(|a, b| a.partial_cmp(b).unwrap());
            d
        })
        .collect();

    let attracted = |r: usize| -> bool {
        let series: Vec<f64> = dists.iter().map(|d| d[r]).collect();
        let last = *series.last().unwrap();
        if last <= tol {
            return true;
        }
        let monotone = series.windows(2).all(|w| w[1] <= w[0] + tol);
        monotone && last < series[0] - tol
    };

    let mut order = 0usize;
    while order < tracked && attracted(order) {
        order += 1;
    }
    if order == tracked {
        Ok(AttractionOrder::Infinite)
    } else {
        Ok(AttractionOrder::Finite(order))
    }
}

/// Split A = L + R with ||L|| <= eps and rank(R) = #{singular values > eps},
/// via the singular value decomposition.
pub fn svd_threshold_split(a: &Dense, eps: f64) -> Result<(Dense, Dense)> {
    if eps <= 0.0 {
        return Err(Error::domain("eps must be positive"));
    }
    let svd = SVD::try_new(a.clone(), true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::Solver("SVD did not converge".into()))?;
    let u = svd.u.as_ref().unwrap();
    let vt = svd.v_t.as_ref().unwrap();
    let k = svd.singular_values.len();
    let mut small = nalgebra::DVector::<C64>::zeros(k);
    let mut large = nalgebra::DVector::<C64>::zeros(k);
    for i in 0..k {
        let sv = svd.singular_values[i];
        if sv > eps {
            large[i] = C64::new(sv, 0.0);
        } else {
            small[i] = C64::new(sv, 0.0);
        }
    }
    let l = u * Dense::from_diagonal(&small) * vt;
    let r = u * Dense::from_diagonal(&large) * vt;
    Ok((l, r))
}
