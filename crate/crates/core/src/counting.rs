//! Exact enumeration of quarter-plane walks and truncated evaluation of
//! the counting functions with certified tail bounds.

use crate::error::{Error, Result};
use crate::stepset::StepSet;
use crate::Cplx;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// Exact table of q(i, j; n) for 0 <= n <= N.
#[derive(Debug, Clone)]
pub struct CountTable {
    pub step_set: StepSet,
    pub n_max: usize,
    /// grids[n] is an (n+1) x (n+1) row-major grid indexed by (i, j)
    grids: Vec<Vec<BigUint>>,
}

/// Dynamic-programming enumeration over the quarter-plane recurrence.
pub fn count_walks(s: StepSet, n_max: usize) -> CountTable {
    let mut grids: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
    grids.push(vec![BigUint::from(1u32)]);
    for n in 1..=n_max {
        let w = n + 1;
        let prev_w = n;
        let mut grid = vec![BigUint::zero(); w * w];
        let prev = &grids[n - 1];
        for i in 0..w {
            for j in 0..w {
                let mut acc = BigUint::zero();
                for (di, dj) in s.steps() {
                    let pi = i as i64 - di as i64;
                    let pj = j as i64 - dj as i64;
                    if pi >= 0 && pj >= 0 && (pi as usize) < prev_w && (pj as usize) < prev_w {
                        acc += &prev[pi as usize * prev_w + pj as usize];
                    }
                }
                grid[i * w + j] = acc;
            }
        }
        grids.push(grid);
    }
    CountTable {
        step_set: s,
        n_max,
        grids,
    }
}

/// Reference oracle: depth-first enumeration of every individual step
/// sequence staying in the quadrant, one path at a time. Exponential in
/// n_max; intended for n <= 8.
pub fn count_walks_bruteforce(s: StepSet, n_max: usize) -> CountTable {
    let steps: Vec<(i8, i8)> = s.steps().collect();
    let mut grids: Vec<Vec<u64>> = (0..=n_max)
        .map(|n| vec![0u64; (n + 1) * (n + 1)])
        .collect();
    fn dfs(steps: &[(i8, i8)], grids: &mut [Vec<u64>], i: i64, j: i64, n: usize, n_max: usize) {
        grids[n][i as usize * (n + 1) + j as usize] += 1;
        if n == n_max {
            return;
        }
        for &(di, dj) in steps {
            let (ni, nj) = (i + di as i64, j + dj as i64);
            if ni >= 0 && nj >= 0 {
                dfs(steps, grids, ni, nj, n + 1, n_max);
            }
        }
    }
    dfs(&steps, &mut grids, 0, 0, 0, n_max);
    CountTable {
        step_set: s,
        n_max,
        grids: grids
            .into_iter()
            .map(|g| g.into_iter().map(BigUint::from).collect())
            .collect(),
    }
}

/// A truncated series value together with a rigorous bound on the
/// discarded tail.
#[derive(Debug, Clone, Copy)]
pub struct SeriesValue {
    pub value: Cplx,
    pub truncation_bound: f64,
}

impl CountTable {
    pub fn q(&self, i: usize, j: usize, n: usize) -> BigUint {
        if n > self.n_max || i > n || j > n {
            return BigUint::zero();
        }
        self.grids[n][i * (n + 1) + j].clone()
    }

    fn q_f64(&self, i: usize, j: usize, n: usize) -> f64 {
        if n > self.n_max || i > n || j > n {
            return 0.0;
        }
        self.grids[n][i * (n + 1) + j].to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn total_at(&self, n: usize) -> BigUint {
        let mut acc = BigUint::zero();
        let w = n + 1;
        for v in &self.grids[n][..w * w] {
            acc += v;
        }
        acc
    }

    fn tail_bound(&self, z: f64) -> f64 {
        let rho = self.step_set.len() as f64 * z;
        if rho >= 1.0 {
            return f64::INFINITY;
        }
        rho.powi(self.n_max as i32 + 1) / (1.0 - rho)
    }

    fn check_region(&self, x: Cplx, y: Cplx, z: f64) -> Result<()> {
        if x.norm() > 1.0 + 1e-12 || y.norm() > 1.0 + 1e-12 {
            return Err(Error::OutsideCertifiedRegion(format!(
                "|x| = {:.4}, |y| = {:.4} must both be <= 1",
                x.norm(),
                y.norm()
            )));
        }
        let size = self.step_set.len();
        if !(z > 0.0 && z < 1.0 / size as f64) {
            return Err(Error::WeightOutOfRange { z, size });
        }
        Ok(())
    }

    /// Q(x, y; z) truncated at N, with tail bound (|S|z)^(N+1)/(1-|S|z).
    pub fn eval_q(&self, x: Cplx, y: Cplx, z: f64) -> Result<SeriesValue> {
        self.check_region(x, y, z)?;
        let mut value = Cplx::new(0.0, 0.0);
        // Horner in z over the per-length inner sums
        for n in (0..=self.n_max).rev() {
            let w = n + 1;
            let mut inner = Cplx::new(0.0, 0.0);
            // Horner in x over rows, each row Horner in y
            for i in (0..w).rev() {
                let mut row = Cplx::new(0.0, 0.0);
                for j in (0..w).rev() {
                    row = row * y + self.q_f64(i, j, n);
                }
                inner = inner * x + row;
            }
            value = value * z + inner;
        }
        Ok(SeriesValue {
            value,
            truncation_bound: self.tail_bound(z),
        })
    }

    /// Q(x, 0; z): only the j = 0 column contributes.
    pub fn eval_qx0(&self, x: Cplx, z: f64) -> Result<SeriesValue> {
        self.check_region(x, Cplx::new(0.0, 0.0), z)?;
        let mut value = Cplx::new(0.0, 0.0);
        for n in (0..=self.n_max).rev() {
            let mut inner = Cplx::new(0.0, 0.0);
            for i in (0..=n).rev() {
                inner = inner * x + self.q_f64(i, 0, n);
            }
            value = value * z + inner;
        }
        Ok(SeriesValue {
            value,
            truncation_bound: self.tail_bound(z),
        })
    }

    /// Q(0, y; z).
    pub fn eval_q0y(&self, y: Cplx, z: f64) -> Result<SeriesValue> {
        self.check_region(Cplx::new(0.0, 0.0), y, z)?;
        let mut value = Cplx::new(0.0, 0.0);
        for n in (0..=self.n_max).rev() {
            let mut inner = Cplx::new(0.0, 0.0);
            for j in (0..=n).rev() {
                inner = inner * y + self.q_f64(0, j, n);
            }
            value = value * z + inner;
        }
        Ok(SeriesValue {
            value,
            truncation_bound: self.tail_bound(z),
        })
    }

    /// Q(0, 0; z).
    pub fn eval_q00(&self, z: f64) -> Result<SeriesValue> {
        self.eval_q0y(Cplx::new(0.0, 0.0), z)
    }

    /// CSV rows `n,i,j,count` for all non-zero entries.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "n,i,j,count")?;
        for n in 0..=self.n_max {
            let wd = n + 1;
            for i in 0..wd {
                for j in 0..wd {
                    let v = &self.grids[n][i * wd + j];
                    if !v.is_zero() {
                        writeln!(w, "{},{},{},{}", n, i, j, v)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Residual of the boundary functional equation at a point of the kernel
/// curve inside the bidisc:
/// |K(x,0)Q(x,0) + K(0,y)Q(0,y) - K(0,0)Q(0,0) - xy|.
pub fn functional_eq_residual(
    k: &crate::kernel::KernelData,
    table: &CountTable,
    x: Cplx,
    y: Cplx,
) -> Result<f64> {
    if x.norm() >= 1.0 || y.norm() >= 1.0 {
        return Err(Error::OutsideCertifiedRegion(
            "functional equation is certified for |x| < 1, |y| < 1".into(),
        ));
    }
    if k.residual(x.into(), y.into()) > crate::tol::CURVE_RESIDUAL {
        return Err(Error::NotOnCurve);
    }
    let z = k.z;
    let qx = table.eval_qx0(x, z)?;
    let qy = table.eval_q0y(y, z)?;
    let q0 = table.eval_q00(z)?;
    let lhs = k.k_x0(x) * qx.value + k.k_0y(y) * qy.value - k.k_00() * q0.value - x * y;
    Ok(lhs.norm())
}
