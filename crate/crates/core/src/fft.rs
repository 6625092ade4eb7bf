//! Thin d-dimensional FFT layer over `rustfft`.
//!
//! Transforms are unnormalized: `Forward` sums with e^{-i<j,s>}, `Inverse`
//! with e^{+i<j,s>}. Callers apply their own 1/N factors.

use crate::grid;
use crate::C64;
use rustfft::FftPlanner;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// In-place FFT along every axis of a row-major array of shape `shape`.
pub fn fft_nd(data: &mut [C64], shape: &[usize], dir: Direction) {
    assert_eq!(data.len(), grid::total(shape));
    let mut planner = FftPlanner::<f64>::new();
    let d = shape.len();
    for axis in 0..d {
        let len = shape[axis];
        if len <= 1 {
            continue;
        }
        let fft = match dir {
            Direction::Forward => planner.plan_fft_forward(len),
            Direction::Inverse => planner.plan_fft_inverse(len),
        };
        let suffix: usize = shape[axis + 1..].iter().product();
        let prefix: usize = shape[..axis].iter().product();
        let mut line = vec![C64::new(0.0, 0.0); len];
        for outer in 0..prefix {
            for inner in 0..suffix {
                let base = outer * len * suffix + inner;
                for t in 0..len {
                    line[t] = data[base + t * suffix];
                }
                fft.process(&mut line);
                for t in 0..len {
                    data[base + t * suffix] = line[t];
                }
            }
        }
    }
}

/// Cyclic convolution of two row-major arrays of shape `shape`:
/// out_r = sum_c a_{(r-c) mod n} v_c.
pub fn cyclic_convolve(a: &[C64], v: &[C64], shape: &[usize]) -> Vec<C64> {
    let n = grid::total(shape);
    assert_eq!(a.len(), n);
    assert_eq!(v.len(), n);
    let mut fa = a.to_vec();
    let mut fv = v.to_vec();
    fft_nd(&mut fa, shape, Direction::Forward);
    fft_nd(&mut fv, shape, Direction::Forward);
    let mut prod: Vec<C64> = fa.iter().zip(&fv).map(|(x, y)| x * y).collect();
    fft_nd(&mut prod, shape, Direction::Inverse);
    let scale = 1.0 / n as f64;
    prod.iter_mut().for_each(|z| *z *= scale);
    prod
}
