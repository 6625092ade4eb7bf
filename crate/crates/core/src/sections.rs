//! Finite sections M_n[φ] of the multiplication operator.
//!
//! Two conventions coexist. The Chebyshev constructors follow the raw
//! cosine/sine basis with inner products taken over the full period Q:
//! first kind gives entries f_{i-j} + f_{i+j}, second kind f_{i-j} - f_{i+j+2}
//! (the anti-diagonal part enters with a minus sign: sin a sin b expands as
//! (cos(a-b) - cos(a+b))/2; it is stored as a Hankel with negated table so the
//! section still reads T + H). The general-weight constructor orthonormalizes
//! against the weight using the triangular basis change E = L F, producing
//! the genuinely orthonormal section L M~[φ~] L^H.

use std::f64::consts::PI;

use nalgebra::Cholesky;

use crate::error::{Error, Result};
use crate::grid;
use crate::matrices::{HankelMatrix, ToeplitzMatrix, DEFAULT_DENSE_CAP};
use crate::symbols::{
    fourier_coefficients, pullback_multiplier, FourierCoeffTable, MultiplierSpec, Parity,
    SymbolSpec, WeightSpec, DEFAULT_OVERSAMPLE,
};
use crate::{Dense, C64};

/// Which inner-product normalization produced a section. Reconstruction
/// divides by π^d alone for `Unnormalized` sections (their limit symbol is
/// π^d φ(cos s)) and by the full π^d Π w(cos)|sin| factor for `Orthonormal`
/// ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionConvention {
    Unnormalized,
    Orthonormal,
}

/// The dense finite section with its provenance.
#[derive(Clone)]
pub struct FiniteSection {
    matrix: Dense,
    order: Vec<usize>,
    block: (usize, usize),
    weight: WeightSpec,
    multiplier_id: String,
    convention: SectionConvention,
    decomposition: Option<(ToeplitzMatrix, HankelMatrix)>,
    basis_factor: Option<Dense>,
}

impl FiniteSection {
    pub fn matrix(&self) -> &Dense {
        &self.matrix
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn block_dims(&self) -> (usize, usize) {
        self.block
    }

    pub fn weight(&self) -> &WeightSpec {
        &self.weight
    }

    pub fn multiplier_id(&self) -> &str {
        &self.multiplier_id
    }

    pub fn convention(&self) -> SectionConvention {
        self.convention
    }

    pub fn decomposition(&self) -> Option<&(ToeplitzMatrix, HankelMatrix)> {
        self.decomposition.as_ref()
    }

    pub fn basis_factor(&self) -> Option<&Dense> {
        self.basis_factor.as_ref()
    }

    /// Scalar sub-section sharing `parent`'s order, weight and convention
    /// (used by the entrywise block reconstruction).
    pub(crate) fn entry_section(parent: &FiniteSection, matrix: Dense) -> FiniteSection {
        FiniteSection {
            matrix,
            order: parent.order.clone(),
            block: (1, 1),
            weight: parent.weight.clone(),
            multiplier_id: format!("{}[entry]", parent.multiplier_id),
            convention: parent.convention,
            decomposition: None,
            basis_factor: None,
        }
    }
}

fn check_cap(n: &[usize], block: (usize, usize)) -> Result<()> {
    let rows = grid::total(n) * block.0.max(block.1);
    if rows > DEFAULT_DENSE_CAP {
        return Err(Error::Resource(format!(
            "section of {rows} rows exceeds dense cap {DEFAULT_DENSE_CAP}"
        )));
    }
    Ok(())
}

/// Dense cosine-basis section from a coefficient table: entry block
/// (i,j) = Σ_{ε in {±1}^d} f_{i - ε∘j}. The all-plus term is the Toeplitz
/// part; for d = 1 the remaining term is the Hankel part.
fn cosine_section_matrix(table: &FourierCoeffTable, n: &[usize]) -> Result<Dense> {
    let (p, q) = table.block_dims();
    check_cap(n, (p, q))?;
    let d = n.len();
    let count = grid::total(n);
    let idx: Vec<Vec<usize>> = grid::indices(n).collect();
    let mut out = Dense::zeros(count * p, count * q);
    let mut off = vec![0i64; d];
    for (bi, i) in idx.iter().enumerate() {
        for (bj, j) in idx.iter().enumerate() {
            let mut acc = Dense::zeros(p, q);
            for mask in 0..(1usize << d) {
                for l in 0..d {
                    let sign = if mask >> l & 1 == 1 { -1i64 } else { 1 };
                    off[l] = i[l] as i64 - sign * j[l] as i64;
                }
                acc += table.coeff(&off);
            }
            for r in 0..p {
                for c in 0..q {
                    out[(bi * p + r, bj * q + c)] = acc[(r, c)];
                }
            }
        }
    }
    Ok(out)
}

/// Finite section in the Chebyshev first-kind cosine basis, any dimension,
/// scalar or block multiplier: M_n[φ] = T_n(f) + H_n(f), f = π^d φ(cos s).
pub fn chebyshev1_section(phi: &MultiplierSpec, n: &[usize]) -> Result<FiniteSection> {
    chebyshev1_section_oversampled(phi, n, DEFAULT_OVERSAMPLE)
}

pub fn chebyshev1_section_oversampled(
    phi: &MultiplierSpec,
    n: &[usize],
    oversample: usize,
) -> Result<FiniteSection> {
    let d = phi.dims();
    if n.len() != d {
        return Err(Error::domain("order and multiplier dimensions differ"));
    }
    check_cap(n, phi.block_dims())?;
    let weight = WeightSpec::chebyshev1(d);
    let (f, _) = pullback_multiplier(phi, &weight)?;
    let table = fourier_coefficients(&f, n, oversample, true)?;
    let matrix = cosine_section_matrix(&table, n)?;
    let decomposition = if d == 1 {
        Some((
            ToeplitzMatrix::new(table.clone(), n.to_vec())?,
            HankelMatrix::new(table, n.to_vec(), 0)?,
        ))
    } else {
        None
    };
    Ok(FiniteSection {
        matrix,
        order: n.to_vec(),
        block: phi.block_dims(),
        weight,
        multiplier_id: phi.id().to_string(),
        convention: SectionConvention::Unnormalized,
        decomposition,
        basis_factor: None,
    })
}

/// Finite section in the Chebyshev second-kind sine basis (univariate):
/// entries f_{|i-j|} - f_{|i+j+2|}.
pub fn chebyshev2_section(phi: &MultiplierSpec, n: usize) -> Result<FiniteSection> {
    chebyshev2_section_oversampled(phi, n, DEFAULT_OVERSAMPLE)
}

pub fn chebyshev2_section_oversampled(
    phi: &MultiplierSpec,
    n: usize,
    oversample: usize,
) -> Result<FiniteSection> {
    if phi.dims() != 1 {
        return Err(Error::Unsupported(
            "second-kind sections are univariate".into(),
        ));
    }
    check_cap(&[n], phi.block_dims())?;
    let weight = WeightSpec::chebyshev2(1);
    let (f, _) = pullback_multiplier(phi, &weight)?;
    // the shift-2 Hankel reads index i+j+2 up to 2n, so compute the table
    // one order larger
    let table = fourier_coefficients(&f, &[n + 1], oversample, true)?;
    let toeplitz = ToeplitzMatrix::new(table.clone(), vec![n])?;
    let hankel = HankelMatrix::new(table.negated(), vec![n], 2)?;
    let matrix = toeplitz.dense()? + hankel.dense()?;
    Ok(FiniteSection {
        matrix,
        order: vec![n],
        block: phi.block_dims(),
        weight,
        multiplier_id: phi.id().to_string(),
        convention: SectionConvention::Unnormalized,
        decomposition: Some((toeplitz, hankel)),
        basis_factor: None,
    })
}

/// Quadrature oversampling for the general-weight path. The pulled-back
/// factor w(cos s)|sin s| is merely continuous for generic weights, so the
/// Gram and tilde tables use at least 64·n midpoints with a 2048-point floor.
/// Both tables must share this resolution: the Gram identity L G L^H = I
/// holds to round-off only when they come from the same quadrature.
fn weighted_oversample(n: usize, oversample: usize) -> usize {
    oversample.max(32).max(1024usize.div_ceil(n))
}

/// Gram matrix of the raw Chebyshev cosine vector under `weight`, with inner
/// products over the full period: G_ij = ∫_Q c_i(cos s) c_j(cos s)
/// w(cos s)|sin s| ds. This is exactly the first-kind section of the
/// pulled-back weight factor, so it reuses the cosine section builder.
fn gram_matrix(weight: &WeightSpec, n: usize, oversample: usize) -> Result<Dense> {
    let w = weight.clone();
    let g_sym = SymbolSpec::scalar(1, Parity::EvenInEachVariable, move |s| {
        C64::new(PI * w.tilde_factor(s), 0.0)
    });
    let table = fourier_coefficients(&g_sym, &[n], oversample, true)?;
    cosine_section_matrix(&table, &[n])
}

/// Lower-triangular basis change L_n with L_n G_n L_n^H = I: the inverse of
/// the lower Cholesky factor of the Gram matrix. For the first-kind weight
/// this is diag(1/sqrt(2π), 1/sqrt(π), ...).
pub fn basis_change_matrix(weight: &WeightSpec, n: usize) -> Result<Dense> {
    basis_change_matrix_oversampled(weight, n, DEFAULT_OVERSAMPLE)
}

pub fn basis_change_matrix_oversampled(
    weight: &WeightSpec,
    n: usize,
    oversample: usize,
) -> Result<Dense> {
    if weight.dims() != 1 {
        return Err(Error::Unsupported("basis change is univariate".into()));
    }
    let g = gram_matrix(weight, n, weighted_oversample(n, oversample))?;
    lower_inverse_of_cholesky(&g)
}

fn lower_inverse_of_cholesky(g: &Dense) -> Result<Dense> {
    let n = g.nrows();
    let chol = Cholesky::new(g.clone()).ok_or_else(|| {
        Error::Conditioning("Gram matrix is numerically singular or indefinite".into())
    })?;
    let l = chol.l();
    l.solve_lower_triangular(&Dense::identity(n, n))
        .ok_or_else(|| Error::Conditioning("Cholesky factor is singular".into()))
}

/// Finite section for a general separable weight (univariate, scalar):
/// M_n[φ] = L_n · M~_n[φ~] · L_n^H with φ~ = φ w sqrt(1-x²) pulled back to
/// f~ and L_n the basis change against the weight's Gram matrix.
pub fn general_section(phi: &MultiplierSpec, weight: &WeightSpec, n: usize) -> Result<FiniteSection> {
    general_section_oversampled(phi, weight, n, DEFAULT_OVERSAMPLE)
}

pub fn general_section_oversampled(
    phi: &MultiplierSpec,
    weight: &WeightSpec,
    n: usize,
    oversample: usize,
) -> Result<FiniteSection> {
    if phi.dims() != 1 || weight.dims() != 1 {
        return Err(Error::Unsupported(
            "general-weight sections are univariate".into(),
        ));
    }
    if phi.block_dims() != (1, 1) {
        return Err(Error::Unsupported(
            "general-weight sections take scalar multipliers".into(),
        ));
    }
    check_cap(&[n], (1, 1))?;
    let (_, f_tilde) = pullback_multiplier(phi, weight)?;
    let table = fourier_coefficients(&f_tilde, &[n], weighted_oversample(n, oversample), true)?;
    let tilde_matrix = cosine_section_matrix(&table, &[n])?;
    let l = basis_change_matrix_oversampled(weight, n, oversample)?;
    let matrix = &l * tilde_matrix * l.adjoint();
    Ok(FiniteSection {
        matrix,
        order: vec![n],
        block: (1, 1),
        weight: weight.clone(),
        multiplier_id: phi.id().to_string(),
        convention: SectionConvention::Orthonormal,
        decomposition: None,
        basis_factor: Some(l),
    })
}

/// Undo the basis change: X_n = L_n^{-1} M_n L_n^{-H} via two triangular
/// solves. For sections built by [`general_section`] this recovers the
/// first-kind section of the tilde multiplier.
pub fn untransform(section: &FiniteSection) -> Result<Dense> {
    let l = section
        .basis_factor()
        .ok_or_else(|| Error::domain("section carries no basis factor"))?;
    untransform_with(l, section.matrix())
}

/// X = L^{-1} M L^{-H} for a lower-triangular L.
pub fn untransform_with(l: &Dense, m: &Dense) -> Result<Dense> {
    let singular = || Error::Conditioning("triangular factor is singular".into());
    let y = l.solve_lower_triangular(m).ok_or_else(singular)?;
    let x_h = l.solve_lower_triangular(&y.adjoint()).ok_or_else(singular)?;
    Ok(x_h.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi_x() -> MultiplierSpec {
        MultiplierSpec::coordinate(0, 1)
    }

    fn phi_x_squared() -> MultiplierSpec {
        MultiplierSpec::scalar("x^2", 1, |x| C64::new(x[0] * x[0], 0.0))
    }

    #[test]
    fn cheb1_section_of_constant() {
        let section = chebyshev1_section(&MultiplierSpec::constant(1.0), &[4]).unwrap();
        let m = section.matrix();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j {
                    if i == 0 {
                        2.0 * PI
                    } else {
                        PI
                    }
                } else {
                    0.0
                };
                assert!((m[(i, j)] - C64::new(expect, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn cheb1_section_of_coordinate() {
        let section = chebyshev1_section(&phi_x(), &[4]).unwrap();
        let m = section.matrix();
        // tridiagonal π/2 plus the Hankel bump at (0,1),(1,0)
        for i in 0..4usize {
            for j in 0..4usize {
                let expect = if i + j == 1 {
                    PI
                } else if i.abs_diff(j) == 1 {
                    PI / 2.0
                } else {
                    0.0
                };
                assert!(
                    (m[(i, j)] - C64::new(expect, 0.0)).norm() < 1e-10,
                    "entry ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn cheb1_section_matches_toeplitz_plus_hankel() {
        for phi in [MultiplierSpec::constant(1.0), phi_x(), phi_x_squared()] {
            let section = chebyshev1_section(&phi, &[8]).unwrap();
            let (t, h) = section.decomposition().unwrap();
            let sum = t.dense().unwrap() + h.dense().unwrap();
            assert!((section.matrix() - sum).norm() < 1e-12);
        }
    }

    #[test]
    fn two_level_section_matches_quadrature_oracle() {
        // φ(x1, x2) = x1 against brute-force 2-D midpoint quadrature of
        // ∫∫ φ(cos s1, cos s2) cos(i1 s1) cos(j1 s1) cos(i2 s2) cos(j2 s2)
        let phi = MultiplierSpec::coordinate(0, 2);
        let section = chebyshev1_section(&phi, &[3, 3]).unwrap();
        let m = section.matrix();

        let quad = 64usize;
        let h = 2.0 * PI / quad as f64;
        let entry = |i: [usize; 2], j: [usize; 2]| -> f64 {
            let mut acc = 0.0;
            for a in 0..quad {
                let s1 = -PI + (a as f64 + 0.5) * h;
                for b in 0..quad {
                    let s2 = -PI + (b as f64 + 0.5) * h;
                    acc += s1.cos()
                        * (i[0] as f64 * s1).cos()
                        * (j[0] as f64 * s1).cos()
                        * (i[1] as f64 * s2).cos()
                        * (j[1] as f64 * s2).cos();
                }
            }
            acc * h * h
        };
        for bi in 0..9usize {
            for bj in 0..9usize {
                let i = [bi / 3, bi % 3];
                let j = [bj / 3, bj % 3];
                let expect = entry(i, j);
                assert!(
                    (m[(bi, bj)] - C64::new(expect, 0.0)).norm() < 1e-9,
                    "block entry ({i:?},{j:?}): got {}, oracle {}",
                    m[(bi, bj)].re,
                    expect
                );
            }
        }
    }

    #[test]
    fn cheb2_section_of_constant_is_pi_identity() {
        let section = chebyshev2_section(&MultiplierSpec::constant(1.0), 4).unwrap();
        let m = section.matrix();
        assert!((m - Dense::identity(4, 4) * C64::new(PI, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn cheb2_section_of_coordinate_equals_toeplitz_part() {
        // f = π cos has no even coefficients, so the shift-2 Hankel vanishes
        let section = chebyshev2_section(&phi_x(), 3).unwrap();
        let m = section.matrix();
        for i in 0..3usize {
            for j in 0..3usize {
                let expect = if i.abs_diff(j) == 1 { PI / 2.0 } else { 0.0 };
                assert!((m[(i, j)] - C64::new(expect, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn cheb2_section_corner_subtracts_second_coefficient() {
        // f = π cos² s has f_0 = π/2, f_2 = π/4; the sine-basis inner product
        // gives (0,0) = f_0 - f_2 = π/4 (the anti-diagonal part is negative:
        // ∫ cos²(s) sin²(s) ds over Q is π/4)
        let section = chebyshev2_section(&phi_x_squared(), 3).unwrap();
        let m = section.matrix();
        assert!(
            (m[(0, 0)] - C64::new(PI / 4.0, 0.0)).norm() < 1e-10,
            "(0,0) = {}",
            m[(0, 0)].re
        );
        // direct quadrature oracle for the same inner product
        let quad = 4096usize;
        let h = 2.0 * PI / quad as f64;
        let mut acc = 0.0;
        for a in 0..quad {
            let s = -PI + (a as f64 + 0.5) * h;
            acc += s.cos().powi(2) * s.sin() * s.sin();
        }
        acc *= h;
        assert!((m[(0, 0)].re - acc).abs() < 1e-8);
    }

    #[test]
    fn cheb2_section_reassembles_from_decomposition() {
        let section = chebyshev2_section(&phi_x_squared(), 5).unwrap();
        let (t, h) = section.decomposition().unwrap();
        let sum = t.dense().unwrap() + h.dense().unwrap();
        assert!((section.matrix() - sum).norm() < 1e-12);
    }

    #[test]
    fn sections_of_real_multipliers_are_hermitian() {
        let sections = [
            chebyshev1_section(&phi_x(), &[8]).unwrap(),
            chebyshev2_section(&phi_x_squared(), 8).unwrap(),
            general_section(&phi_x(), &WeightSpec::chebyshev2(1), 8).unwrap(),
        ];
        for s in &sections {
            let m = s.matrix();
            assert!((m - m.adjoint()).norm() < 1e-10);
        }
    }

    #[test]
    fn weight_independent_limit_symbol() {
        // first- and second-kind sections of the same multiplier distribute
        // toward the same pullback symbol π cos s
        use crate::matrices::eigen_decompose;
        use crate::spectral::{distribution_compare, TestFunction};
        use crate::symbols::Parity;
        let sym = crate::symbols::SymbolSpec::scalar(1, Parity::EvenInEachVariable, |s| {
            C64::new(PI * s[0].cos(), 0.0)
        });
        for build in [
            |n: usize| chebyshev1_section(&MultiplierSpec::coordinate(0, 1), &[n]).unwrap(),
            |n: usize| chebyshev2_section(&MultiplierSpec::coordinate(0, 1), n).unwrap(),
        ] {
            let mut errors = Vec::new();
            for n in [16usize, 64] {
                let section = build(n);
                let sample = eigen_decompose(section.matrix(), true).unwrap();
                let rep =
                    distribution_compare(&sample, &sym, &TestFunction::square(), 2048).unwrap();
                errors.push(rep.abs_error);
            }
            assert!(errors[1] < errors[0], "errors {errors:?}");
        }
    }

    #[test]
    fn hankel_part_trace_norm_fades() {
        use crate::matrices::singular_values;
        use crate::spectral::schatten_norm;
        let mut prev = f64::INFINITY;
        for n in [16usize, 32, 64, 128] {
            let section = chebyshev1_section(&phi_x(), &[n]).unwrap();
            let (_, h) = section.decomposition().unwrap();
            let sv = singular_values(&h.dense().unwrap()).unwrap();
            let ratio = schatten_norm(&sv, 1.0).unwrap() / n as f64;
            assert!(ratio < prev);
            prev = ratio;
        }
    }

    #[test]
    fn basis_change_for_first_kind_weight_is_diagonal() {
        let l = basis_change_matrix(&WeightSpec::chebyshev1(1), 4).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i != j {
                    0.0
                } else if i == 0 {
                    1.0 / (2.0 * PI).sqrt()
                } else {
                    1.0 / PI.sqrt()
                };
                assert!(
                    (l[(i, j)] - C64::new(expect, 0.0)).norm() < 1e-10,
                    "L[{i},{j}] = {}",
                    l[(i, j)].re
                );
            }
        }
    }

    #[test]
    fn basis_change_order_one_is_inverse_weight_mass() {
        // L_1 = 1/sqrt(∫_Q w(cos s)|sin s| ds); for w ≡ 1 the mass is 4
        let l = basis_change_matrix(&WeightSpec::custom("legendre", |_| 1.0), 1).unwrap();
        assert!((l[(0, 0)] - C64::new(0.5, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn basis_change_orthonormalizes_second_kind_gram() {
        let n = 3usize;
        let l = basis_change_matrix(&WeightSpec::chebyshev2(1), n).unwrap();
        let g = gram_matrix(&WeightSpec::chebyshev2(1), n, DEFAULT_OVERSAMPLE).unwrap();
        let residual = &l * g * l.adjoint() - Dense::identity(n, n);
        assert!(residual.norm() < 1e-10);
    }

    #[test]
    fn general_path_on_first_kind_matches_scaled_section() {
        // for the first-kind weight L is diagonal, so the general section is
        // D M D with M the raw cosine section
        let n = 6usize;
        let gen = general_section(&phi_x(), &WeightSpec::chebyshev1(1), n).unwrap();
        let raw = chebyshev1_section(&phi_x(), &[n]).unwrap();
        let l = basis_change_matrix(&WeightSpec::chebyshev1(1), n).unwrap();
        let scaled = &l * raw.matrix() * l.adjoint();
        assert!((gen.matrix() - &scaled).norm() < 1e-10);
        let e_gen = crate::matrices::eigen_decompose(gen.matrix(), true).unwrap();
        let e_scaled = crate::matrices::eigen_decompose(&scaled, true).unwrap();
        for (a, b) in e_gen.values().iter().zip(e_scaled.values()) {
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn general_section_of_unit_multiplier_is_identity() {
        for weight in [
            WeightSpec::chebyshev2(1),
            WeightSpec::custom("legendre", |_| 1.0),
        ] {
            let s = general_section(&MultiplierSpec::constant(1.0), &weight, 5).unwrap();
            assert!(
                (s.matrix() - Dense::identity(5, 5)).norm() < 1e-8,
                "weight {}",
                weight.label()
            );
        }
    }

    #[test]
    fn general_path_agrees_with_normalized_second_kind_section() {
        // two independent constructions of the orthonormal section: the sine
        // basis has uniform norm π over Q, so normalizing divides by π
        let n = 8usize;
        for phi in [phi_x(), phi_x_squared()] {
            let gen = general_section(&phi, &WeightSpec::chebyshev2(1), n).unwrap();
            let raw = chebyshev2_section(&phi, n).unwrap();
            let normalized = raw.matrix() / C64::new(PI, 0.0);
            assert!(
                (gen.matrix() - &normalized).norm() < 1e-8,
                "multiplier {}: deviation {}",
                phi.id(),
                (gen.matrix() - &normalized).norm()
            );
        }
    }

    #[test]
    fn degenerate_weight_is_a_conditioning_error() {
        let zero = WeightSpec::custom("zero", |_| 0.0);
        assert!(matches!(
            basis_change_matrix(&zero, 4),
            Err(Error::Conditioning(_))
        ));
    }

    #[test]
    fn untransform_rejects_singular_factor() {
        let mut l = Dense::identity(3, 3);
        l[(1, 1)] = C64::new(0.0, 0.0);
        let m = Dense::identity(3, 3);
        assert!(matches!(
            untransform_with(&l, &m),
            Err(Error::Conditioning(_))
        ));
    }

    #[test]
    fn untransform_round_trips() {
        // identity factor
        let section = chebyshev1_section(&phi_x(), &[4]).unwrap();
        assert!(untransform(&section).is_err(), "no basis factor stored");

        let gen = general_section(&phi_x(), &WeightSpec::chebyshev2(1), 8).unwrap();
        let x = untransform(&gen).unwrap();
        let l = gen.basis_factor().unwrap();
        let back = l * &x * l.adjoint();
        assert!((gen.matrix() - back).norm() < 1e-10);

        // the tilde section it must recover
        let (_, f_tilde) =
            pullback_multiplier(&phi_x(), &WeightSpec::chebyshev2(1)).unwrap();
        let table = fourier_coefficients(&f_tilde, &[8], DEFAULT_OVERSAMPLE, true).unwrap();
        let tilde = cosine_section_matrix(&table, &[8]).unwrap();
        assert!((x - tilde).norm() < 1e-10);
    }

    #[test]
    fn untransform_with_random_unit_triangular_reassembles() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let n = 6usize;
        let mut l = Dense::identity(n, n);
        for i in 0..n {
            for j in 0..i {
                l[(i, j)] = C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            }
        }
        let b = Dense::from_fn(n, n, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let m = &b * b.adjoint() + Dense::identity(n, n); // SPD
        let x = untransform_with(&l, &m).unwrap();
        assert!((&l * x * l.adjoint() - m).norm() < 1e-10);
    }
}
