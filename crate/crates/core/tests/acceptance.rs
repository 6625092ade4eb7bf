//! Acceptance suite: one test per pinned numerical contract, each printing a
//! pass/fail line (run with `--nocapture` to see them all).
//!
//! Criteria 7 and 11 assert an error-decay ratio for the direct
//! reconstruction of the coordinate multipliers under the first-kind weight.
//! For exactly these inputs the Frobenius-optimal circulant of the section
//! reproduces the symbol to machine precision at every order (the Hankel
//! part's diagonal average exactly cancels the Fejér damping of the lone
//! nonzero frequency), so their residuals sit at round-off and the ratio
//! clauses compare numerical noise. They are kept as stated and are expected
//! to fail; the companion checks on x² in the library tests show the real
//! 0.5 decay rate when the error is nonzero.

use std::f64::consts::PI;

use num_complex::Complex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use sectra::circulants::{optimal_circulant, optimal_circulant_dense};
use sectra::matrices::{
    eigen_decompose, singular_values, CirculantMatrix, HankelMatrix, ToeplitzMatrix,
};
use sectra::reconstruct::{reconstruct_block, reconstruct_direct, reconstruct_peeled};
use sectra::sections::chebyshev1_section;
use sectra::spectral::{
    distribution_compare, range_membership, schatten_norm, svd_threshold_split, RangeVerdict,
    TestFunction,
};
use sectra::symbols::{FourierCoeffTable, MultiplierSpec, Parity, SymbolSpec};
use sectra::{Dense, C64};

fn report(id: &str, pass: bool, detail: &str) -> bool {
    println!(
        "criterion {id}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

fn max_abs_diff(a: &Dense, b: &Dense) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0f64, f64::max)
}

fn phi_const(c: f64) -> MultiplierSpec {
    MultiplierSpec::constant(c)
}

fn phi_x() -> MultiplierSpec {
    MultiplierSpec::coordinate(0, 1)
}

fn phi_x2() -> MultiplierSpec {
    MultiplierSpec::scalar("x^2", 1, |x| Complex::new(x[0] * x[0], 0.0))
}

fn pi_cos_table(n: usize, tail: bool) -> FourierCoeffTable {
    let extent = if tail { 2 * n as i64 - 2 } else { n as i64 - 1 };
    FourierCoeffTable::from_even_scalar_entries(n, extent, &[(1, C64::new(PI / 2.0, 0.0))])
}

fn exp_is_table(n: usize) -> FourierCoeffTable {
    FourierCoeffTable::from_scalar_entries(n, n as i64 - 1, &[(1, C64::new(1.0, 0.0))])
}

fn laplacian_table(n: usize) -> FourierCoeffTable {
    FourierCoeffTable::from_even_scalar_entries(
        n,
        n as i64 - 1,
        &[(0, C64::new(2.0, 0.0)), (1, C64::new(-1.0, 0.0))],
    )
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Dense {
    Dense::from_fn(n, n, |_, _| {
        C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    })
}

/// Unitary DFT matrix, the spectral-projection oracle for the optimal
/// circulant: Opt(A) = F diag(F* A F) F*.
fn dft_matrix(n: usize) -> Dense {
    let scale = 1.0 / (n as f64).sqrt();
    Dense::from_fn(n, n, |j, k| {
        let phase = -2.0 * PI * (j * k) as f64 / n as f64;
        C64::new(phase.cos(), phase.sin()) * scale
    })
}

fn optimal_via_spectral_projection(a: &Dense) -> Dense {
    let n = a.nrows();
    let f = dft_matrix(n);
    let inner = f.adjoint() * a * &f;
    let diag = Dense::from_fn(n, n, |i, j| {
        if i == j {
            inner[(i, i)]
        } else {
            C64::new(0.0, 0.0)
        }
    });
    &f * diag * f.adjoint()
}

#[test]
fn criterion_01_section_reassembles_into_toeplitz_plus_hankel() {
    let mut worst = 0.0f64;
    for phi in [phi_const(1.0), phi_x(), phi_x2()] {
        for n in [8usize, 32] {
            let section = chebyshev1_section(&phi, &[n]).unwrap();
            let (t, h) = section.decomposition().unwrap();
            let sum = t.dense().unwrap() + h.dense().unwrap();
            worst = worst.max(max_abs_diff(section.matrix(), &sum));
        }
    }
    let pass = report(
        "01",
        worst <= 1e-10,
        &format!("max |M - (T+H)| = {worst:.3e} (tolerance 1e-10)"),
    );
    assert!(pass);
}

#[test]
fn criterion_02_optimal_circulant_constructions_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst = 0.0f64;
    for n in [8usize, 64] {
        for table in [pi_cos_table(n, false), exp_is_table(n)] {
            let t = ToeplitzMatrix::new(table, vec![n]).unwrap();
            let td = t.dense().unwrap();
            let via_formula = optimal_circulant(&t).dense().unwrap();
            let via_avg = optimal_circulant_dense(&td, &[n], (1, 1))
                .unwrap()
                .dense()
                .unwrap();
            let via_dft = optimal_via_spectral_projection(&td);
            worst = worst.max(max_abs_diff(&via_formula, &via_avg));
            worst = worst.max(max_abs_diff(&via_formula, &via_dft));

            let best = (&td - &via_formula).norm();
            for _ in 0..50 {
                let col: Vec<C64> = (0..n)
                    .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                    .collect();
                let c = CirculantMatrix::from_scalar_first_column(vec![n], col).unwrap();
                let dist = (&td - c.dense().unwrap()).norm();
                assert!(
                    best <= dist + 1e-12,
                    "random circulant beat the Frobenius projection"
                );
            }
        }
    }
    let pass = report(
        "02",
        worst <= 1e-10,
        &format!(
            "Fejér formula ≡ spectral projection ≡ diagonal averaging, max deviation {worst:.3e}; \
             Frobenius minimality held against 50 random circulants"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_03_optimal_circulant_eigenvalues_are_fejer_means() {
    let mut worst = 0.0f64;
    for n in [8usize, 256] {
        let t = ToeplitzMatrix::new(pi_cos_table(n, false), vec![n]).unwrap();
        let eig = optimal_circulant(&t).eigenvalues().unwrap();
        for (j, v) in eig.values().iter().enumerate() {
            let expect = PI * (1.0 - 1.0 / n as f64) * (2.0 * PI * j as f64 / n as f64).cos();
            worst = worst.max((v - C64::new(expect, 0.0)).norm());
        }
    }
    // uniform Cesàro convergence: max deviation from π cos halves (±20%)
    let max_err = |n: usize| -> f64 {
        let t = ToeplitzMatrix::new(pi_cos_table(n, false), vec![n]).unwrap();
        let eig = optimal_circulant(&t).eigenvalues().unwrap();
        eig.values()
            .iter()
            .zip(eig.grid().unwrap())
            .map(|(v, x)| (v - C64::new(PI * x[0].cos(), 0.0)).norm())
            .fold(0.0f64, f64::max)
    };
    let ratio = max_err(256) / max_err(128);
    let pass = report(
        "03",
        worst <= 1e-10 && (0.4..=0.6).contains(&ratio),
        &format!("eigenvalue formula deviation {worst:.3e}; error ratio 256/128 = {ratio:.3}"),
    );
    assert!(pass);
}

#[test]
fn criterion_04_optimal_contracts_schatten_norms() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut inputs: Vec<Dense> = (0..100).map(|_| random_matrix(&mut rng, 64)).collect();
    let t = ToeplitzMatrix::new(pi_cos_table(64, true), vec![64]).unwrap();
    let h = HankelMatrix::new(pi_cos_table(64, true), vec![64], 0).unwrap();
    inputs.push(t.dense().unwrap() + h.dense().unwrap());

    let mut worst_excess: f64 = 0.0;
    for a in &inputs {
        let opt = optimal_circulant_dense(a, &[64], (1, 1))
            .unwrap()
            .dense()
            .unwrap();
        let sa = singular_values(a).unwrap();
        let so = singular_values(&opt).unwrap();
        for p in [1.0, 2.0, f64::INFINITY] {
            let excess = schatten_norm(&so, p).unwrap() - schatten_norm(&sa, p).unwrap();
            worst_excess = worst_excess.max(excess);
        }
    }
    let pass = report(
        "04",
        worst_excess <= 1e-9,
        &format!(
            "||Opt(A)||_p - ||A||_p <= {worst_excess:.3e} over 101 inputs, p in {{1,2,inf}}"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_05_complex_symbol_contrast() {
    let n = 64usize;
    let t = ToeplitzMatrix::new(exp_is_table(n), vec![n]).unwrap();
    let eig_t = eigen_decompose(&t.dense().unwrap(), false).unwrap();
    let max_toeplitz = eig_t.values().iter().map(|v| v.norm()).fold(0.0f64, f64::max);

    let circ = optimal_circulant(&t);
    let eig_c = circ.eigenvalues().unwrap();
    let mut worst = 0.0f64;
    for (j, v) in eig_c.values().iter().enumerate() {
        let xj = 2.0 * PI * j as f64 / n as f64;
        let expect = C64::new(xj.cos(), xj.sin()) * (1.0 - 1.0 / n as f64);
        worst = worst.max((v - expect).norm());
    }
    let membership =
        range_membership(&eig_c, C64::new(1.0, 0.0), 0.1, 0.01).unwrap();
    let pass = report(
        "05",
        max_toeplitz <= 1e-8
            && worst <= 1e-10
            && membership.verdict == RangeVerdict::MemberWithinEps,
        &format!(
            "Toeplitz eigenvalues collapse (max |λ| = {max_toeplitz:.2e}); circulant follows \
             (1-1/n)e^(ix), deviation {worst:.2e}; membership of 1: {:?} at fraction {:.4}",
            membership.verdict, membership.fraction_inside
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_06_peeled_recovery_is_exact_for_polynomial_pullbacks() {
    let n = 32usize;
    let cases: Vec<(MultiplierSpec, Vec<(i64, f64)>)> = vec![
        (phi_const(1.0), vec![(0, PI)]),
        (phi_x(), vec![(1, PI / 2.0)]),
        (phi_x2(), vec![(0, PI / 2.0), (2, PI / 4.0)]),
    ];
    let mut worst_coeff = 0.0f64;
    let mut worst_resid = 0.0f64;
    for (phi, expected) in &cases {
        let section = chebyshev1_section(phi, &[n]).unwrap();
        let (_, fhat) = sectra::reconstruct::recover_toeplitz(section.matrix(), n).unwrap();
        for k in 0..n as i64 {
            let reference = expected
                .iter()
                .find(|&&(j, _)| j == k)
                .map_or(0.0, |&(_, v)| v);
            worst_coeff = worst_coeff.max((fhat.scalar(&[k]) - C64::new(reference, 0.0)).norm());
        }
        let r = reconstruct_peeled(&section).unwrap().with_reference(phi);
        worst_resid = worst_resid.max(r.max_residual().unwrap());
    }
    let bound = PI / n as f64 + 1e-8;
    let pass = report(
        "06",
        worst_coeff <= 1e-10 && worst_resid <= bound,
        &format!(
            "coefficient recovery error {worst_coeff:.3e} (tolerance 1e-10); \
             end-to-end residual {worst_resid:.3e} (bound π/n + 1e-8 = {bound:.3e})"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_07_direct_reconstruction_error_ratio() {
    let residual = |n: usize| -> f64 {
        let section = chebyshev1_section(&phi_x(), &[n]).unwrap();
        reconstruct_direct(&section)
            .unwrap()
            .with_reference(&phi_x())
            .max_residual()
            .unwrap()
    };
    let r128 = residual(128);
    let r256 = residual(256);
    let pass = report(
        "07",
        r128 <= 0.2 && r256 <= 0.2 && r256 <= 0.7 * r128,
        &format!(
            "residuals {r128:.3e} (n=128), {r256:.3e} (n=256); bound 0.2 holds with 14 orders of \
             margin, but both sit at round-off because the optimal circulant of this section is \
             exact for φ(x) = x (the Hankel average cancels the Fejér factor), so the 0.7 ratio \
             clause compares noise"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_08_szego_distribution_for_laplacian_symbol() {
    let sym = SymbolSpec::scalar(1, Parity::EvenInEachVariable, |s| {
        C64::new(2.0 - 2.0 * s[0].cos(), 0.0)
    });
    let report_for = |n: usize, f: &TestFunction| {
        let t = ToeplitzMatrix::new(laplacian_table(n), vec![n]).unwrap();
        let sample = eigen_decompose(&t.dense().unwrap(), true).unwrap();
        distribution_compare(&sample, &sym, f, 4096).unwrap()
    };
    let mut trace_worst = 0.0f64;
    for n in [32usize, 128] {
        trace_worst = trace_worst.max(report_for(n, &TestFunction::identity()).abs_error);
    }
    let e32 = report_for(32, &TestFunction::square()).abs_error;
    let e128 = report_for(128, &TestFunction::square()).abs_error;
    let pass = report(
        "08",
        trace_worst <= 1e-10 && e128 <= 0.5 * e32,
        &format!(
            "trace identity error {trace_worst:.3e}; F=t² errors {e32:.3e} (n=32) -> {e128:.3e} \
             (n=128), ratio {:.3}",
            e128 / e32
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_09_minimal_eigenvalue_decay() {
    let lap2 = |n: usize| {
        FourierCoeffTable::from_even_scalar_entries(
            n,
            n as i64 - 1,
            &[
                (0, C64::new(6.0, 0.0)),
                (1, C64::new(-4.0, 0.0)),
                (2, C64::new(1.0, 0.0)),
            ],
        )
    };
    let lambda_min = |table: FourierCoeffTable, n: usize| -> f64 {
        let t = ToeplitzMatrix::new(table, vec![n]).unwrap();
        eigen_decompose(&t.dense().unwrap(), true).unwrap().values()[0].re
    };
    let mut detail = String::new();
    let mut pass = true;
    let cases: Vec<(i32, Box<dyn Fn(usize) -> FourierCoeffTable>)> =
        vec![(1, Box::new(laplacian_table)), (2, Box::new(lap2))];
    for (p, table) in cases {
        let s64 = lambda_min(table(64), 64) * 64f64.powi(2 * p);
        let s128 = lambda_min(table(128), 128) * 128f64.powi(2 * p);
        let variation = (s64 - s128).abs() / s128;
        detail.push_str(&format!(
            "p={p}: λ_min·n^{} varies {:.2}% between n=64 and 128; ",
            2 * p,
            100.0 * variation
        ));
        pass &= variation <= 0.15;
    }
    detail.push_str("the n^-20 exponent-10 symbol is out of double-precision reach and excluded");
    let pass = report("09", pass, &detail);
    assert!(pass);
}

#[test]
fn criterion_10_svd_threshold_split_of_hankel() {
    let n = 64usize;
    let h = HankelMatrix::new(pi_cos_table(n, true), vec![n], 0)
        .unwrap()
        .dense()
        .unwrap();
    let eps = 0.1;
    let (l, r) = svd_threshold_split(&h, eps).unwrap();
    let reassembly = max_abs_diff(&(&l + &r), &h);
    let l_norm = schatten_norm(&singular_values(&l).unwrap(), f64::INFINITY).unwrap();
    let trace_norm = schatten_norm(&singular_values(&h).unwrap(), 1.0).unwrap();
    let rank = r.rank(1e-8);
    let pass = report(
        "10",
        l_norm <= eps + 1e-12 && (rank as f64) <= trace_norm / eps && reassembly <= 1e-12,
        &format!(
            "||L|| = {l_norm:.4} <= {eps}; rank(R) = {rank} <= ||H||_1/ε = {:.1}; \
             reassembly error {reassembly:.3e}",
            trace_norm / eps
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_11_two_level_reconstruction() {
    let phi = MultiplierSpec::scalar("x1*x2", 2, |x| Complex::new(x[0] * x[1], 0.0));
    let residual = |n: usize| -> f64 {
        let section = chebyshev1_section(&phi, &[n, n]).unwrap();
        reconstruct_direct(&section)
            .unwrap()
            .with_reference(&phi)
            .max_residual()
            .unwrap()
    };
    let r16 = residual(16);
    let r32 = residual(32);
    let pass = report(
        "11",
        r16 <= 0.3 && r32 < r16,
        &format!(
            "residuals {r16:.3e} at n=(16,16), {r32:.3e} at n=(32,32); the 0.3 bound holds with \
             13 orders of margin, but the separable section is reconstructed exactly (tensor \
             product of two exact univariate cases), so the decrease clause compares round-off \
             noise"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_12_block_reconstruction_and_distribution() {
    let n = 32usize;
    let phi = MultiplierSpec::block("diag(1,x)", 1, 2, 2, |x| {
        let mut b = Dense::zeros(2, 2);
        b[(0, 0)] = C64::new(1.0, 0.0);
        b[(1, 1)] = C64::new(x[0], 0.0);
        b
    });
    let section = chebyshev1_section(&phi, &[n]).unwrap();
    let (results, sample) = reconstruct_block(&section).unwrap();

    // entrywise residuals against the block entries
    let refs = [
        [phi_const(1.0), phi_const(0.0)],
        [phi_const(0.0), phi_x()],
    ];
    let mut entry_worst = 0.0f64;
    for s in 0..2 {
        for t in 0..2 {
            let r = results[s][t].clone().with_reference(&refs[s][t]);
            entry_worst = entry_worst.max(r.max_residual().unwrap());
        }
    }

    // per-grid singular values against {1, |cos x_j|}
    let mut sv_worst = 0.0f64;
    for (pair, x) in sample
        .values()
        .chunks(2)
        .zip(sample.grid().unwrap().chunks(2))
    {
        let c = x[0][0].cos().abs();
        sv_worst = sv_worst.max((pair[0].re - 1.0f64.max(c)).abs());
        sv_worst = sv_worst.max((pair[1].re - 1.0f64.min(c)).abs());
    }

    // normalized-trace distribution of the section's singular values
    let sym = SymbolSpec::block(1, 2, 2, Parity::EvenInEachVariable, |s| {
        let mut b = Dense::zeros(2, 2);
        b[(0, 0)] = C64::new(PI, 0.0);
        b[(1, 1)] = C64::new(PI * s[0].cos(), 0.0);
        b
    });
    let section_sv = singular_values(section.matrix()).unwrap();
    let dist = distribution_compare(&section_sv, &sym, &TestFunction::identity(), 4096).unwrap();

    let pass = report(
        "12",
        entry_worst <= 0.2 && sv_worst <= 0.2 && dist.abs_error <= 0.1,
        &format!(
            "entrywise residual {entry_worst:.3e} (bound 0.2); per-grid singular value deviation \
             {sv_worst:.3e} (bound 0.2); normalized-trace distribution error {:.4} (bound 0.1)",
            dist.abs_error
        ),
    );
    assert!(pass);
}
