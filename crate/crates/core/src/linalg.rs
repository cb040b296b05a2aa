//! Direct solvers for the Newton systems: banded LU with partial pivoting,
//! dense LU, and block-tridiagonal elimination with dense diagonal blocks.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{abs, sqrt};

/// Band matrix with `kl` sub- and `ku` super-diagonals, stored with room
/// for the `kl` extra super-diagonals that pivoting creates.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        BandMatrix {
            n,
            kl,
            ku,
            width,
            data: vec![0.0; n * width],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.width + (j + self.kl - i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j + self.kl < i || j > i + self.ku + self.kl {
            0.0
        } else {
            self.data[self.idx(i, j)]
        }
    }

    /// Sets an entry inside the declared band.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(j + self.kl >= i && j <= i + self.ku, "entry outside band");
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(j + self.kl >= i && j <= i + self.ku, "entry outside band");
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for (i, yi) in y.iter_mut().enumerate() {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(self.n - 1);
            for (j, xj) in x.iter().enumerate().take(hi + 1).skip(lo) {
                *yi += self.get(i, j) * xj;
            }
        }
        y
    }

    /// In-place LU factorisation; consumes the matrix.
    pub fn factor(mut self) -> Result<BandLu> {
        let n = self.n;
        let reach = self.ku + self.kl;
        let mut perm = vec![0usize; n];
        for k in 0..n {
            let last = (k + self.kl).min(n - 1);
            let mut p = k;
            let mut best = abs(self.data[self.idx(k, k)]);
            for i in k + 1..=last {
                let v = abs(self.data[self.idx(i, k)]);
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::NumericalFault("singular band matrix"));
            }
            perm[k] = p;
            let jmax = (k + reach).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    let a = self.idx(k, j);
                    let b = self.idx(p, j);
                    self.data.swap(a, b);
                }
            }
            let piv = self.data[self.idx(k, k)];
            for i in k + 1..=last {
                let ik = self.idx(i, k);
                let l = self.data[ik] / piv;
                self.data[ik] = l;
                if l != 0.0 {
                    for j in k + 1..=jmax {
                        let kj = self.data[self.idx(k, j)];
                        let ij = self.idx(i, j);
                        self.data[ij] -= l * kj;
                    }
                }
            }
        }
        Ok(BandLu { m: self, perm })
    }
}

#[derive(Debug, Clone)]
pub struct BandLu {
    m: BandMatrix,
    perm: Vec<usize>,
}

impl BandLu {
    pub fn solve(&self, b: &mut [f64]) {
        let a = &self.m;
        let n = a.n;
        for k in 0..n {
            let p = self.perm[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            if bk != 0.0 {
                for i in k + 1..=(k + a.kl).min(n - 1) {
                    b[i] -= a.data[a.idx(i, k)] * bk;
                }
            }
        }
        let reach = a.ku + a.kl;
        for k in (0..n).rev() {
            let mut s = b[k];
            for j in k + 1..=(k + reach).min(n - 1) {
                s -= a.data[a.idx(k, j)] * b[j];
            }
            b[k] = s / a.data[a.idx(k, k)];
        }
    }
}

/// Dense row-major LU with partial pivoting.
#[derive(Debug, Clone)]
pub struct DenseLu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl DenseLu {
    pub fn factor(n: usize, mut a: Vec<f64>) -> Result<Self> {
        debug_assert_eq!(a.len(), n * n);
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            let mut best = abs(a[k * n + k]);
            for i in k + 1..n {
                let v = abs(a[i * n + k]);
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::NumericalFault("singular dense block"));
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let piv = a[k * n + k];
            let (top, bottom) = a.split_at_mut((k + 1) * n);
            let row_k = &top[k * n..];
            for row in bottom.chunks_exact_mut(n) {
                let l = row[k] / piv;
                row[k] = l;
                if l != 0.0 {
                    for j in k + 1..n {
                        row[j] -= l * row_k[j];
                    }
                }
            }
        }
        Ok(DenseLu { n, lu: a, perm })
    }

    pub fn solve(&self, b: &mut [f64]) {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let s: f64 = row.iter().zip(&x[..i]).map(|(a, b)| a * b).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n..(i + 1) * n];
            let s: f64 = row[i + 1..].iter().zip(&x[i + 1..]).map(|(a, b)| a * b).sum();
            x[i] = (x[i] - s) / row[i];
        }
        b.copy_from_slice(&x);
    }
}

/// Block-tridiagonal system with dense `m × m` diagonal blocks and diagonal
/// off-diagonal blocks. `lower[i]` couples block `i` to `i − 1`, `upper[i]`
/// couples block `i` to `i + 1`. `upper_first`, when set, replaces `upper[0]`
/// by a dense row-major block.
#[derive(Debug, Clone)]
pub struct BlockTridiagonal {
    pub blocks: usize,
    pub m: usize,
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
    pub upper_first: Option<Vec<f64>>,
}

impl BlockTridiagonal {
    pub fn zeros(blocks: usize, m: usize) -> Self {
        BlockTridiagonal {
            blocks,
            m,
            lower: vec![0.0; blocks * m],
            diag: vec![0.0; blocks * m * m],
            upper: vec![0.0; blocks * m],
            upper_first: None,
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let (nb, m) = (self.blocks, self.m);
        let mut y = vec![0.0; nb * m];
        for i in 0..nb {
            for r in 0..m {
                let row = &self.diag[(i * m + r) * m..(i * m + r + 1) * m];
                let mut s: f64 = row.iter().zip(&x[i * m..(i + 1) * m]).map(|(a, b)| a * b).sum();
                if i > 0 {
                    s += self.lower[i * m + r] * x[(i - 1) * m + r];
                }
                if i + 1 < nb {
                    match (&self.upper_first, i) {
                        (Some(u), 0) => {
                            s += u[r * m..(r + 1) * m].iter().zip(&x[m..2 * m]).map(|(a, b)| a * b).sum::<f64>();
                        }
                        _ => s += self.upper[i * m + r] * x[(i + 1) * m + r],
                    }
                }
                y[i * m + r] = s;
            }
        }
        y
    }

    /// Block Thomas elimination; consumes the matrix.
    pub fn solve(self, rhs: &[f64]) -> Result<Vec<f64>> {
        let (nb, m) = (self.blocks, self.m);
        let mut coupling: Vec<f64> = vec![0.0; nb * m * m];
        let mut y = rhs.to_vec();
        let mut prev: Option<DenseLu> = None;
        let mut col = vec![0.0; m];
        for i in 0..nb {
            let mut d = self.diag[i * m * m..(i + 1) * m * m].to_vec();
            if i > 0 {
                // D'_i = D_i − L_i·C_{i−1};  y_i −= L_i·y_{i−1}.
                let c = &coupling[(i - 1) * m * m..i * m * m];
                for r in 0..m {
                    let l = self.lower[i * m + r];
                    if l != 0.0 {
                        for j in 0..m {
                            d[r * m + j] -= l * c[r * m + j];
                        }
                        y[i * m + r] -= l * y[(i - 1) * m + r];
                    }
                }
            }
            let lu = DenseLu::factor(m, d)?;
            lu.solve(&mut y[i * m..(i + 1) * m]);
            if i + 1 < nb {
                // C_i = D'_i^{−1}·U_i, column by column.
                let c = &mut coupling[i * m * m..(i + 1) * m * m];
                for j in 0..m {
                    match (&self.upper_first, i) {
                        (Some(u), 0) => {
                            for r in 0..m {
                                col[r] = u[r * m + j];
                            }
                            lu.solve(&mut col);
                        }
                        _ => {
                            let u = self.upper[i * m + j];
                            col.iter_mut().for_each(|x| *x = 0.0);
                            if u != 0.0 {
                                col[j] = u;
                                lu.solve(&mut col);
                            }
                        }
                    }
                    for r in 0..m {
                        c[r * m + j] = col[r];
                    }
                }
            }
            prev = Some(lu);
        }
        drop(prev);
        for i in (0..nb.saturating_sub(1)).rev() {
            let c = &coupling[i * m * m..(i + 1) * m * m];
            for r in 0..m {
                let s: f64 = c[r * m..(r + 1) * m]
                    .iter()
                    .zip(&y[(i + 1) * m..(i + 2) * m])
                    .map(|(a, b)| a * b)
                    .sum();
                y[i * m + r] -= s;
            }
        }
        Ok(y)
    }
}

/// Least squares `min ‖Σ c_j·cols[j] − y‖₂` by modified Gram–Schmidt.
///
/// Returns the coefficients and the residual vector. Columns whose
/// remaining norm falls below `1e−10` of their original norm count as
/// collinear.
pub fn least_squares(cols: &[Vec<f64>], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let k = cols.len();
    let n = y.len();
    if k == 0 || n < k || cols.iter().any(|c| c.len() != n) {
        return Err(Error::InvalidInput("least squares needs n >= k equal-length columns"));
    }
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut q: Vec<Vec<f64>> = cols.to_vec();
    let mut r = vec![0.0; k * k];
    for j in 0..k {
        let norm0 = sqrt(dot(&cols[j], &cols[j]));
        for i in 0..j {
            let c = dot(&q[i], &q[j]);
            r[i * k + j] = c;
            let (head, tail) = q.split_at_mut(j);
            for (a, b) in tail[0].iter_mut().zip(&head[i]) {
                *a -= c * b;
            }
        }
        let nj = sqrt(dot(&q[j], &q[j]));
        if !(nj > 1e-10 * norm0) {
            return Err(Error::InvalidInput("collinear regressors"));
        }
        r[j * k + j] = nj;
        for a in q[j].iter_mut() {
            *a /= nj;
        }
    }
    let mut res = y.to_vec();
    let mut z = vec![0.0; k];
    for j in 0..k {
        z[j] = dot(&q[j], &res);
        for (a, b) in res.iter_mut().zip(&q[j]) {
            *a -= z[j] * b;
        }
    }
    let mut c = vec![0.0; k];
    for j in (0..k).rev() {
        let mut s = z[j];
        for i in j + 1..k {
            s -= r[j * k + i] * c[i];
        }
        c[j] = s / r[j * k + j];
    }
    Ok((c, res))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg(state: &mut u64) -> f64 {
        *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((*state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
    }

    #[test]
    fn least_squares_recovers_exact_fit() {
        let t: Vec<f64> = (0..40).map(|i| -20.0 + 0.25 * i as f64).collect();
        let c1: Vec<f64> = t.iter().map(|t| -t).collect();
        let c2: Vec<f64> = t.iter().map(|t| -libm::log(1.0 - t)).collect();
        let c3 = vec![1.0; t.len()];
        let y: Vec<f64> = (0..t.len()).map(|i| 2.0 * c1[i] - 0.7 * c2[i] + 0.3).collect();
        let (c, res) = least_squares(&[c1, c2, c3], &y).unwrap();
        assert!((c[0] - 2.0).abs() < 1e-12 && (c[1] + 0.7).abs() < 1e-11 && (c[2] - 0.3).abs() < 1e-11);
        assert!(res.iter().all(|r| r.abs() < 1e-12));
        assert!(least_squares(&[vec![1.0; 5], vec![2.0; 5]], &[1.0; 5]).is_err());
    }

    #[test]
    fn band_lu_needs_pivoting() {
        let n = 50;
        let mut a = BandMatrix::zeros(n, 2, 1);
        let mut s = 7u64;
        for i in 0..n {
            for j in i.saturating_sub(2)..=(i + 1).min(n - 1) {
                a.set(i, j, lcg(&mut s));
            }
            // Tiny diagonal forces row exchanges.
            a.set(i, i, 1e-9 * lcg(&mut s));
        }
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let b0 = a.mul_vec(&x);
        let mut b = b0.clone();
        a.factor().unwrap().solve(&mut b);
        for i in 0..n {
            assert!((b[i] - x[i]).abs() < 1e-6, "{i}: {} {}", b[i], x[i]);
        }
    }

    #[test]
    fn block_thomas_matches_product() {
        let (nb, m) = (6, 5);
        let mut a = BlockTridiagonal::zeros(nb, m);
        let mut s = 11u64;
        for v in a.diag.iter_mut() {
            *v = lcg(&mut s);
        }
        for i in 0..nb * m {
            a.diag[(i / m) * m * m + (i % m) * m + i % m] += 4.0;
        }
        for v in a.lower.iter_mut().chain(a.upper.iter_mut()) {
            *v = lcg(&mut s);
        }
        let x: Vec<f64> = (0..nb * m).map(|i| (0.3 * i as f64).cos()).collect();
        let b = a.mul_vec(&x);
        let mut dense = a.clone();
        let sol = a.solve(&b).unwrap();
        for i in 0..nb * m {
            assert!((sol[i] - x[i]).abs() < 1e-12);
        }
        dense.upper_first = Some((0..m * m).map(|_| lcg(&mut s)).collect());
        let b = dense.mul_vec(&x);
        let sol = dense.solve(&b).unwrap();
        for i in 0..nb * m {
            assert!((sol[i] - x[i]).abs() < 1e-12);
        }
    }
}
