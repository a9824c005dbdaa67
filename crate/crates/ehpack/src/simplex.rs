//! Dense bounded-variable primal simplex.
//!
//! Maximizes `c x` subject to `A x <= b`, `0 <= x <= u` with finite `u` on
//! every structural variable and `b >= 0` (the all-zero point is feasible, so
//! no phase one). Nonbasic variables at their upper bound are handled by the
//! column-flip substitution `x -> u - x`, keeping every nonbasic variable at
//! zero in working space.
//!
//! The caller treats the result as a heuristic: primal values seed rounding,
//! dual values seed a separately-computed safe bound. Numerical failure here
//! can cost tightness but never soundness.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    IterationLimit,
}

#[derive(Debug, Clone)]
pub struct LpResult {
    pub status: LpStatus,
    /// Primal values in the original orientation, length = number of columns.
    pub x: Vec<f64>,
    /// Row multipliers, clipped to be non-negative.
    pub y: Vec<f64>,
}

const D_TOL: f64 = 1e-9;
const PIV_TOL: f64 = 1e-9;

pub struct Simplex {
    m: usize,
    n: usize,
    /// Row-major tableau over structural + slack columns.
    t: Vec<f64>,
    rhs: Vec<f64>,
    red: Vec<f64>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    flipped: Vec<bool>,
    ub: Vec<f64>,
}

impl Simplex {
    /// `rows[r]` holds the structural coefficients of row `r`.
    pub fn new(obj: &[f64], rows: &[Vec<f64>], b: &[f64], ub: &[f64]) -> Self {
        let n = obj.len();
        let m = rows.len();
        let w = n + m;
        let mut t = vec![0.0; m * w];
        for (r, row) in rows.iter().enumerate() {
            t[r * w..r * w + n].copy_from_slice(row);
            t[r * w + n + r] = 1.0;
        }
        let mut red = vec![0.0; w];
        red[..n].copy_from_slice(obj);
        Simplex {
            m,
            n,
            t,
            rhs: b.to_vec(),
            red,
            basis: (n..n + m).collect(),
            in_basis: (0..w).map(|j| j >= n).collect(),
            flipped: vec![false; w],
            ub: ub.to_vec(),
        }
    }

    fn ub_of(&self, j: usize) -> f64 {
        if j < self.n {
            self.ub[j]
        } else {
            f64::INFINITY
        }
    }

    fn flip_nonbasic(&mut self, j: usize) {
        let u = self.ub_of(j);
        let w = self.n + self.m;
        for r in 0..self.m {
            self.rhs[r] -= self.t[r * w + j] * u;
            self.t[r * w + j] = -self.t[r * w + j];
        }
        self.red[j] = -self.red[j];
        self.flipped[j] = !self.flipped[j];
    }

    /// Leaving-at-upper preparation: rewrite row `r` in terms of the
    /// complement of its basic variable.
    fn flip_basic_row(&mut self, r: usize) {
        let l = self.basis[r];
        let u = self.ub_of(l);
        let w = self.n + self.m;
        for j in 0..w {
            if j != l {
                self.t[r * w + j] = -self.t[r * w + j];
            }
        }
        self.rhs[r] = u - self.rhs[r];
        self.flipped[l] = !self.flipped[l];
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let w = self.n + self.m;
        let piv = self.t[r * w + e];
        let inv = 1.0 / piv;
        for j in 0..w {
            self.t[r * w + j] *= inv;
        }
        self.rhs[r] *= inv;
        self.t[r * w + e] = 1.0;
        for rr in 0..self.m {
            if rr == r {
                continue;
            }
            let f = self.t[rr * w + e];
            if f == 0.0 {
                continue;
            }
            for j in 0..w {
                self.t[rr * w + j] -= f * self.t[r * w + j];
            }
            self.rhs[rr] -= f * self.rhs[r];
            self.t[rr * w + e] = 0.0;
        }
        let f = self.red[e];
        if f != 0.0 {
            for j in 0..w {
                self.red[j] -= f * self.t[r * w + j];
            }
            self.red[e] = 0.0;
        }
        self.in_basis[self.basis[r]] = false;
        self.basis[r] = e;
        self.in_basis[e] = true;
    }

    pub fn solve(mut self) -> LpResult {
        let w = self.n + self.m;
        let max_iters = 60 * (self.m + self.n) + 200;
        let mut bland = false;
        let mut degen_streak = 0usize;
        let mut status = LpStatus::IterationLimit;

        for _ in 0..max_iters {
            // entering column
            let mut e = usize::MAX;
            if bland {
                for j in 0..w {
                    if !self.in_basis[j] && self.red[j] > D_TOL {
                        e = j;
                        break;
                    }
                }
            } else {
                let mut best = D_TOL;
                for j in 0..w {
                    if !self.in_basis[j] && self.red[j] > best {
                        best = self.red[j];
                        e = j;
                    }
                }
            }
            if e == usize::MAX {
                status = LpStatus::Optimal;
                break;
            }

            // ratio test
            let mut theta = self.ub_of(e);
            let mut leave: Option<(usize, bool)> = None; // (row, to_upper)
            for r in 0..self.m {
                let a = self.t[r * w + e];
                if a > PIV_TOL {
                    let lim = (self.rhs[r].max(0.0)) / a;
                    if lim < theta - 1e-12 || (lim < theta + 1e-12 && leave.is_none()) {
                        theta = lim.min(theta);
                        leave = Some((r, false));
                    }
                } else if a < -PIV_TOL {
                    let ub_b = self.ub_of(self.basis[r]);
                    if ub_b.is_finite() {
                        let lim = (ub_b - self.rhs[r]).max(0.0) / (-a);
                        if lim < theta - 1e-12 {
                            theta = lim;
                            leave = Some((r, true));
                        }
                    }
                }
            }

            match leave {
                None => {
                    if !theta.is_finite() {
                        // Unbounded directions cannot occur with finite boxes;
                        // bail out and let the caller fall back.
                        break;
                    }
                    self.flip_nonbasic(e);
                }
                Some((r, to_upper)) => {
                    if to_upper {
                        self.flip_basic_row(r);
                    }
                    self.pivot(r, e);
                }
            }

            // long degenerate streaks trigger Bland's anti-cycling rule
            if theta <= 1e-12 {
                degen_streak += 1;
                if degen_streak > self.m + self.n {
                    bland = true;
                }
            } else {
                degen_streak = 0;
            }
        }
        self.extract(status)
    }

    fn extract(self, status: LpStatus) -> LpResult {
        let mut x = vec![0.0; self.n];
        for r in 0..self.m {
            let j = self.basis[r];
            if j < self.n {
                x[j] = self.rhs[r].max(0.0);
            }
        }
        for j in 0..self.n {
            if !self.in_basis[j] && self.flipped[j] {
                x[j] = 0.0; // working value
            }
            if self.flipped[j] {
                x[j] = self.ub[j] - x[j];
            }
            x[j] = x[j].clamp(0.0, self.ub[j]);
        }
        let mut y = vec![0.0; self.m];
        for r in 0..self.m {
            let v = -self.red[self.n + r];
            y[r] = if v > 0.0 { v } else { 0.0 };
        }
        LpResult { status, x, y }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64) {
        assert!((a - b).abs() < 1e-7, "{a} vs {b}");
    }

    #[test]
    fn solves_a_textbook_lp() {
        // max 3x + 2y; x + y <= 4; x + 3y <= 6; 0 <= x,y <= 10 -> (4, 0)
        let res = Simplex::new(
            &[3.0, 2.0],
            &[vec![1.0, 1.0], vec![1.0, 3.0]],
            &[4.0, 6.0],
            &[10.0, 10.0],
        )
        .solve();
        assert_eq!(res.status, LpStatus::Optimal);
        assert_close(res.x[0], 4.0);
        assert_close(res.x[1], 0.0);
        // duals: y = (3, 0) certifies the bound 12
        assert_close(res.y[0] * 4.0 + res.y[1] * 6.0, 12.0);
    }

    #[test]
    fn respects_upper_bounds() {
        // max x + y; x + y <= 10; x <= 3, y <= 4 -> 7
        let res = Simplex::new(
            &[1.0, 1.0],
            &[vec![1.0, 1.0]],
            &[10.0],
            &[3.0, 4.0],
        )
        .solve();
        assert_eq!(res.status, LpStatus::Optimal);
        assert_close(res.x[0] + res.x[1], 7.0);
    }

    #[test]
    fn binding_row_with_upper_bounds() {
        // max 2x + y; x + y <= 5; x <= 3, y <= 4 -> x=3, y=2, obj 8
        let res = Simplex::new(
            &[2.0, 1.0],
            &[vec![1.0, 1.0]],
            &[5.0],
            &[3.0, 4.0],
        )
        .solve();
        assert_close(res.x[0], 3.0);
        assert_close(res.x[1], 2.0);
        // dual certifies: y*5 + max(0, 2-y)*3 + max(0, 1-y)*4 >= 8
        let y = res.y[0];
        let cert = y * 5.0 + (2.0 - y).max(0.0) * 3.0 + (1.0 - y).max(0.0) * 4.0;
        assert!(cert >= 8.0 - 1e-9);
    }

    #[test]
    fn degenerate_rows_terminate() {
        let res = Simplex::new(
            &[1.0, 1.0, 1.0],
            &[
                vec![1.0, 1.0, 0.0],
                vec![1.0, 1.0, 0.0],
                vec![0.0, 1.0, 1.0],
            ],
            &[2.0, 2.0, 2.0],
            &[5.0, 5.0, 5.0],
        )
        .solve();
        assert_eq!(res.status, LpStatus::Optimal);
        let obj: f64 = res.x.iter().sum();
        assert_close(obj, 4.0);
    }
}
