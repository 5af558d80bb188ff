//! Dense-block tridiagonal systems
//!
//! ```text
//! L_j x_{j-1} + D_j x_j + U_j x_{j+1} = b_j,   j = 0..n
//! ```
//!
//! with `N x N` blocks, optionally closed periodically (`L_0` couples
//! `x_{n-1}`, `U_{n-1}` couples `x_0`). Blocks are stored row-major.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct BlockTridiagonal {
    n_blocks: usize,
    bs: usize,
    periodic: bool,
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
}

impl BlockTridiagonal {
    pub fn zeros(n_blocks: usize, bs: usize, periodic: bool) -> Self {
        let len = n_blocks * bs * bs;
        Self {
            n_blocks,
            bs,
            periodic,
            lower: vec![0.0; len],
            diag: vec![0.0; len],
            upper: vec![0.0; len],
        }
    }

    pub fn n_blocks(&self) -> usize {
        self.n_blocks
    }

    pub fn block_size(&self) -> usize {
        self.bs
    }

    #[inline]
    fn at(&self, j: usize, r: usize, c: usize) -> usize {
        (j * self.bs + r) * self.bs + c
    }

    pub fn lower_mut(&mut self, j: usize, r: usize, c: usize) -> &mut f64 {
        let i = self.at(j, r, c);
        &mut self.lower[i]
    }

    pub fn diag_mut(&mut self, j: usize, r: usize, c: usize) -> &mut f64 {
        let i = self.at(j, r, c);
        &mut self.diag[i]
    }

    pub fn upper_mut(&mut self, j: usize, r: usize, c: usize) -> &mut f64 {
        let i = self.at(j, r, c);
        &mut self.upper[i]
    }

    fn block<'a>(&self, v: &'a [f64], j: usize) -> &'a [f64] {
        let s = self.bs * self.bs;
        &v[j * s..(j + 1) * s]
    }

    /// `A x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let (n, bs) = (self.n_blocks, self.bs);
        let mut y = vec![0.0; n * bs];
        for j in 0..n {
            let out = &mut y[j * bs..(j + 1) * bs];
            gemv_add(out, self.block(&self.diag, j), &x[j * bs..(j + 1) * bs], bs);
            let prev = if j > 0 { Some(j - 1) } else if self.periodic { Some(n - 1) } else { None };
            let next = if j + 1 < n { Some(j + 1) } else if self.periodic { Some(0) } else { None };
            if let Some(p) = prev {
                gemv_add(out, self.block(&self.lower, j), &x[p * bs..(p + 1) * bs], bs);
            }
            if let Some(q) = next {
                gemv_add(out, self.block(&self.upper, j), &x[q * bs..(q + 1) * bs], bs);
            }
        }
        y
    }

    /// Solves `A x = b` by block elimination.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let (n, bs) = (self.n_blocks, self.bs);
        assert_eq!(b.len(), n * bs);
        if !self.periodic {
            let mut x = b.to_vec();
            self.thomas(0, n, &mut x, 1)?;
            return Ok(x);
        }
        if n == 1 {
            // all three blocks act on x_0
            let mut d = self.diag.clone();
            for k in 0..bs * bs {
                d[k] += self.lower[k] + self.upper[k];
            }
            let mut piv = vec![0; bs];
            let mut x = b.to_vec();
            lu_factor(&mut d, bs, &mut piv)?;
            lu_solve(&d, &piv, bs, &mut x, 1);
            return Ok(x);
        }

        // Periodic: eliminate x_0. Blocks 1..n form an open chain
        //   T y = b_y - C x_0,  C_1 = L_1, C_{n-1} = U_{n-1}.
        let m = 1 + bs;
        let mut rhs = vec![0.0; n * bs * m];
        for j in 1..n {
            for r in 0..bs {
                rhs[(j * bs + r) * m] = b[j * bs + r];
            }
        }
        for (j, src) in [(1, &self.lower), (n - 1, &self.upper)] {
            let blk = self.block(src, j);
            for r in 0..bs {
                for c in 0..bs {
                    rhs[(j * bs + r) * m + 1 + c] += blk[r * bs + c];
                }
            }
        }
        self.thomas(1, n, &mut rhs, m)?;

        // (D_0 - U_0 Z_1 - L_0 Z_{n-1}) x_0 = b_0 - U_0 Y_1 - L_0 Y_{n-1}
        let mut schur = self.block(&self.diag, 0).to_vec();
        let mut x0 = b[0..bs].to_vec();
        for (j, src) in [(1, &self.upper), (n - 1, &self.lower)] {
            let blk = self.block(src, 0);
            for r in 0..bs {
                for k in 0..bs {
                    let a = blk[r * bs + k];
                    if a == 0.0 {
                        continue;
                    }
                    let row = &rhs[(j * bs + k) * m..(j * bs + k + 1) * m];
                    x0[r] -= a * row[0];
                    for c in 0..bs {
                        schur[r * bs + c] -= a * row[1 + c];
                    }
                }
            }
        }
        let mut piv = vec![0; bs];
        lu_factor(&mut schur, bs, &mut piv)?;
        lu_solve(&schur, &piv, bs, &mut x0, 1);

        let mut x = vec![0.0; n * bs];
        x[..bs].copy_from_slice(&x0);
        for j in 1..n {
            for r in 0..bs {
                let row = &rhs[(j * bs + r) * m..(j * bs + r + 1) * m];
                let coupling: f64 = (0..bs).map(|c| row[1 + c] * x0[c]).sum();
                x[j * bs + r] = row[0] - coupling;
            }
        }
        Ok(x)
    }

    /// Solves `A x = b` and refines until `|A x - b|_inf <= tol |b|_inf`.
    /// Returns the solution and the achieved relative residual.
    pub fn solve_to_tolerance(&self, b: &[f64], tol: f64, max_refine: usize) -> Result<(Vec<f64>, f64)> {
        let mut x = self.solve(b)?;
        let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        let mut residual = self.relative_residual(&x, b, scale);
        let mut rounds = 0;
        while residual > tol && rounds < max_refine {
            let ax = self.apply(&x);
            let r: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
            let dx = self.solve(&r)?;
            x.iter_mut().zip(&dx).for_each(|(x, d)| *x += d);
            residual = self.relative_residual(&x, b, scale);
            rounds += 1;
        }
        if !(residual <= tol) {
            return Err(Error::LinearSolve { residual, tol });
        }
        Ok((x, residual))
    }

    fn relative_residual(&self, x: &[f64], b: &[f64], scale: f64) -> f64 {
        self.apply(x)
            .iter()
            .zip(b)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
            / scale
    }

    /// Block Thomas elimination on blocks `start..end` (no wrap-around),
    /// overwriting `rhs` (`bs x m` per block) with the solution.
    fn thomas(&self, start: usize, end: usize, rhs: &mut [f64], m: usize) -> Result<()> {
        let bs = self.bs;
        let stride = bs * m;
        let mut cprime = vec![0.0; self.n_blocks * bs * bs];
        let mut work = vec![0.0; bs * bs];
        let mut piv = vec![0; bs];
        for j in start..end {
            work.copy_from_slice(self.block(&self.diag, j));
            if j > start {
                // M = D_j - L_j C'_{j-1};  rhs_j -= L_j d'_{j-1}
                let l = self.block(&self.lower, j);
                let cp = &cprime[(j - 1) * bs * bs..j * bs * bs];
                gemm_sub(&mut work, l, cp, bs, bs);
                let (done, rest) = rhs.split_at_mut(j * stride);
                gemm_sub(&mut rest[..stride], l, &done[(j - 1) * stride..], bs, m);
            }
            lu_factor(&mut work, bs, &mut piv)?;
            lu_solve(&work, &piv, bs, &mut rhs[j * stride..(j + 1) * stride], m);
            if j + 1 < end {
                let cp = &mut cprime[j * bs * bs..(j + 1) * bs * bs];
                cp.copy_from_slice(self.block(&self.upper, j));
                lu_solve(&work, &piv, bs, cp, bs);
            }
        }
        for j in (start..end.saturating_sub(1)).rev() {
            let cp = &cprime[j * bs * bs..(j + 1) * bs * bs];
            let (head, tail) = rhs.split_at_mut((j + 1) * stride);
            gemm_sub(&mut head[j * stride..], cp, &tail[..stride], bs, m);
        }
        Ok(())
    }
}

#[inline]
fn gemv_add(out: &mut [f64], a: &[f64], x: &[f64], bs: usize) {
    for r in 0..bs {
        let mut s = 0.0;
        for c in 0..bs {
            s += a[r * bs + c] * x[c];
        }
        out[r] += s;
    }
}

/// `c -= a b` with `a: bs x bs`, `b, c: bs x m`.
#[inline]
fn gemm_sub(c: &mut [f64], a: &[f64], b: &[f64], bs: usize, m: usize) {
    for r in 0..bs {
        for k in 0..bs {
            let ark = a[r * bs + k];
            if ark == 0.0 {
                continue;
            }
            for col in 0..m {
                c[r * m + col] -= ark * b[k * m + col];
            }
        }
    }
}

fn lu_factor(a: &mut [f64], bs: usize, piv: &mut [usize]) -> Result<()> {
    for k in 0..bs {
        let (p, max) = (k..bs)
            .map(|r| (r, a[r * bs + k].abs()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(max > 0.0) || !max.is_finite() {
            return Err(Error::LinearSolve {
                residual: f64::INFINITY,
                tol: 0.0,
            });
        }
        piv[k] = p;
        if p != k {
            for c in 0..bs {
                a.swap(k * bs + c, p * bs + c);
            }
        }
        let pivot = a[k * bs + k];
        for r in k + 1..bs {
            let f = a[r * bs + k] / pivot;
            a[r * bs + k] = f;
            for c in k + 1..bs {
                a[r * bs + c] -= f * a[k * bs + c];
            }
        }
    }
    Ok(())
}

/// Solves in place for the `m` columns of `b` (`bs x m`, row-major).
fn lu_solve(lu: &[f64], piv: &[usize], bs: usize, b: &mut [f64], m: usize) {
    for k in 0..bs {
        if piv[k] != k {
            for c in 0..m {
                b.swap(k * m + c, piv[k] * m + c);
            }
        }
    }
    for r in 0..bs {
        for k in 0..r {
            let f = lu[r * bs + k];
            if f != 0.0 {
                for c in 0..m {
                    b[r * m + c] -= f * b[k * m + c];
                }
            }
        }
    }
    for r in (0..bs).rev() {
        for k in r + 1..bs {
            let f = lu[r * bs + k];
            if f != 0.0 {
                for c in 0..m {
                    b[r * m + c] -= f * b[k * m + c];
                }
            }
        }
        let d = lu[r * bs + r];
        for c in 0..m {
            b[r * m + c] /= d;
        }
    }
}
