//! Row-major tensor helpers shared by the spectral transforms.
//!
//! Every d-dimensional transform in the crate is a sequence of 1D linear maps
//! applied along one axis at a time. The reductions below always run in
//! index order so results are bit-reproducible.

use num_complex::Complex64;

/// Scalars that can multiply a complex sample.
pub trait Coefficient: Copy + Send + Sync {
    fn scale(self, z: Complex64) -> Complex64;
}

impl Coefficient for f64 {
    #[inline]
    fn scale(self, z: Complex64) -> Complex64 {
        z * self
    }
}

impl Coefficient for Complex64 {
    #[inline]
    fn scale(self, z: Complex64) -> Complex64 {
        self * z
    }
}

/// Dense row-major matrix used as a 1D operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Copy> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }
}

pub fn product(shape: &[usize]) -> usize {
    shape.iter().product()
}

/// Applies `m` (rows = new length, cols = old length) along `axis`.
pub fn apply_axis<T: Coefficient>(
    data: &[Complex64],
    shape: &[usize],
    axis: usize,
    m: &Matrix<T>,
) -> Vec<Complex64> {
    assert_eq!(shape[axis], m.cols, "operator width does not match axis length");
    assert_eq!(data.len(), product(shape));
    let outer = product(&shape[..axis]);
    let inner = product(&shape[axis + 1..]);
    let n_in = m.cols;
    let n_out = m.rows;
    let mut out = vec![Complex64::new(0.0, 0.0); outer * n_out * inner];
    for o in 0..outer {
        let src = &data[o * n_in * inner..(o + 1) * n_in * inner];
        let dst = &mut out[o * n_out * inner..(o + 1) * n_out * inner];
        for r in 0..n_out {
            let row = &m.data[r * n_in..(r + 1) * n_in];
            let d = &mut dst[r * inner..(r + 1) * inner];
            for (c, &coef) in row.iter().enumerate() {
                let s = &src[c * inner..(c + 1) * inner];
                for (acc, &v) in d.iter_mut().zip(s) {
                    *acc += coef.scale(v);
                }
            }
        }
    }
    out
}

/// Applies a possibly different operator along every axis in turn.
pub fn apply_separable<T: Coefficient>(
    data: &[Complex64],
    shape: &[usize],
    ops: &[&Matrix<T>],
) -> (Vec<Complex64>, Vec<usize>) {
    let mut cur = data.to_vec();
    let mut cur_shape = shape.to_vec();
    for (axis, m) in ops.iter().enumerate() {
        cur = apply_axis(&cur, &cur_shape, axis, m);
        cur_shape[axis] = m.rows;
    }
    (cur, cur_shape)
}

/// Reorders axes: output axis `k` is input axis `perm[k]`.
pub fn permute(data: &[Complex64], shape: &[usize], perm: &[usize]) -> (Vec<Complex64>, Vec<usize>) {
    let rank = shape.len();
    assert_eq!(perm.len(), rank);
    let new_shape: Vec<usize> = perm.iter().map(|&p| shape[p]).collect();
    let mut in_strides = vec![1usize; rank];
    for k in (0..rank.saturating_sub(1)).rev() {
        in_strides[k] = in_strides[k + 1] * shape[k + 1];
    }
    let strides: Vec<usize> = perm.iter().map(|&p| in_strides[p]).collect();
    let mut out = Vec::with_capacity(data.len());
    for_each_index(&new_shape, |idx| {
        let off: usize = idx.iter().zip(&strides).map(|(i, s)| i * s).sum();
        out.push(data[off]);
    });
    (out, new_shape)
}

/// Visits every multi-index of `shape` in row-major order.
pub fn for_each_index(shape: &[usize], mut f: impl FnMut(&[usize])) {
    if shape.iter().any(|&n| n == 0) {
        return;
    }
    let mut idx = vec![0usize; shape.len()];
    loop {
        f(&idx);
        let mut k = shape.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < shape[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Flat row-major offset of a multi-index.
pub fn flat_index(idx: &[usize], shape: &[usize]) -> usize {
    idx.iter().zip(shape).fold(0, |acc, (&i, &n)| acc * n + i)
}

/// Inverse of [`flat_index`].
pub fn unflatten(mut flat: usize, shape: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; shape.len()];
    for k in (0..shape.len()).rev() {
        idx[k] = flat % shape[k];
        flat /= shape[k];
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn apply_axis_matches_manual_contraction() {
        // shape (2, 3), apply a 2x3 operator on axis 1
        let data: Vec<Complex64> = (0..6).map(|v| c(v as f64)).collect();
        let m = Matrix::from_fn(2, 3, |r, col| (r + col) as f64);
        let out = apply_axis(&data, &[2, 3], 1, &m);
        // row 0: [0,1,2] ; row 1: [3,4,5]
        // op row 0 = [0,1,2], op row 1 = [1,2,3]
        assert_eq!(out, vec![c(5.0), c(8.0), c(14.0), c(26.0)]);
    }

    #[test]
    fn permute_transposes() {
        let data: Vec<Complex64> = (0..6).map(|v| c(v as f64)).collect();
        let (t, shape) = permute(&data, &[2, 3], &[1, 0]);
        assert_eq!(shape, vec![3, 2]);
        assert_eq!(t, vec![c(0.0), c(3.0), c(1.0), c(4.0), c(2.0), c(5.0)]);
    }

    #[test]
    fn flat_index_round_trip() {
        let shape = [3, 4, 5];
        for flat in 0..60 {
            assert_eq!(flat_index(&unflatten(flat, &shape), &shape), flat);
        }
    }

    #[test]
    fn for_each_index_is_row_major() {
        let mut seen = Vec::new();
        for_each_index(&[2, 2], |i| seen.push(i.to_vec()));
        assert_eq!(seen, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }
}
