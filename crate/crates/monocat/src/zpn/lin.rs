//! Row-space algorithms over the local ring Z/(p^n) acting on free modules.
//!
//! Matrices are lists of rows with entries in `[0, p^n)`.

use super::RingParams;

pub type Rows = Vec<Vec<i64>>;

/// Howell form with the pivot column of every row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Howell {
    pub rows: Rows,
    pub pivots: Vec<usize>,
}

impl Howell {
    pub fn pivot_exp(&self, r: &RingParams, i: usize) -> u32 {
        r.val(self.rows[i][self.pivots[i]])
    }
}

fn axpy(r: &RingParams, dst: &mut [i64], q: i64, src: &[i64]) {
    if q == 0 {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        *d = r.reduce(*d - r.mul(q, *s));
    }
}

/// Howell normal form of the row span of `rows` (each of length `ncols`).
///
/// Pivots are chosen leftmost column first, then smallest valuation, then
/// smallest integer value, then earliest row.
pub fn howell(r: &RingParams, rows: &[Vec<i64>], ncols: usize) -> Howell {
    let mut work: Rows = rows
        .iter()
        .map(|row| row.iter().map(|&x| r.reduce(x)).collect())
        .filter(|row: &Vec<i64>| row.iter().any(|&x| x != 0))
        .collect();
    let mut out: Rows = Vec::new();
    let mut pivots = Vec::new();
    for col in 0..ncols {
        let mut best: Option<(u32, i64, usize)> = None;
        for (idx, row) in work.iter().enumerate() {
            let x = row[col];
            if x == 0 {
                continue;
            }
            let key = (r.val(x), x, idx);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let Some((k, _, idx)) = best else { continue };
        let mut piv = work.swap_remove(idx);
        let unit = piv[col] / r.pow(k);
        let inv = r.inv_unit(unit);
        for x in piv.iter_mut() {
            *x = r.mul(*x, inv);
        }
        let pk = r.pow(k);
        for row in work.iter_mut() {
            let q = row[col] / pk;
            axpy(r, row, q, &piv);
        }
        if k > 0 {
            let ann = r.pow(r.n() - k);
            let extra: Vec<i64> = piv.iter().map(|&x| r.mul(x, ann)).collect();
            if extra.iter().any(|&x| x != 0) {
                work.push(extra);
            }
        }
        work.retain(|row| row.iter().any(|&x| x != 0));
        out.push(piv);
        pivots.push(col);
    }
    for i in 0..out.len() {
        let col = pivots[i];
        let pk = r.pow(r.val(out[i][col]));
        let (above, rest) = out.split_at_mut(i);
        let piv = &rest[0];
        for row in above.iter_mut() {
            let q = row[col] / pk;
            axpy(r, row, q, piv);
        }
    }
    Howell { rows: out, pivots }
}

/// Howell form of `[a | I]` split at column `split = ncols(a)`.
pub struct Augmented {
    pub h: Howell,
    pub split: usize,
}

impl Augmented {
    pub fn new(r: &RingParams, a: &[Vec<i64>], ncols: usize) -> Self {
        let m = a.len();
        let rows: Rows = a
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut v = row.clone();
                v.resize(ncols, 0);
                v.extend((0..m).map(|j| i64::from(i == j)));
                v
            })
            .collect();
        Augmented {
            h: howell(r, &rows, ncols + m),
            split: ncols,
        }
    }

    /// Howell rows of the left kernel `{y : y a = 0}`.
    pub fn kernel(&self) -> Rows {
        self.h
            .rows
            .iter()
            .zip(&self.h.pivots)
            .filter(|(_, &c)| c >= self.split)
            .map(|(row, _)| row[self.split..].to_vec())
            .collect()
    }

    /// Lexicographically smallest `y` with `y a = b`, each coordinate in `[0, p^n)`.
    pub fn solve(&self, r: &RingParams, b: &[i64]) -> Option<Vec<i64>> {
        let s = self.split;
        let mut w: Vec<i64> = b.iter().map(|&x| r.reduce(x)).collect();
        w.resize(self.h.rows.first().map_or(s, |row| row.len()), 0);
        for (i, (row, &c)) in self.h.rows.iter().zip(&self.h.pivots).enumerate() {
            if c >= s {
                break;
            }
            let pk = r.pow(self.h.pivot_exp(r, i));
            if w[c] % pk != 0 {
                return None;
            }
            let q = w[c] / pk;
            axpy(r, &mut w, q, row);
        }
        if w[..s].iter().any(|&x| x != 0) {
            return None;
        }
        let mut y: Vec<i64> = w[s..].iter().map(|&x| r.reduce(-x)).collect();
        for (i, (row, &c)) in self.h.rows.iter().zip(&self.h.pivots).enumerate() {
            if c < s {
                continue;
            }
            let pk = r.pow(self.h.pivot_exp(r, i));
            let q = y[c - s] / pk;
            axpy(r, &mut y, q, &row[s..]);
        }
        Some(y)
    }
}

/// Smith normal form `u · a · v = diag(p^{exps})` with `vinv = v^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    /// One exponent per column of `a`; `n` marks a zero diagonal entry.
    pub exps: Vec<u32>,
    pub u: Rows,
    pub v: Rows,
    pub vinv: Rows,
}

fn identity(m: usize) -> Rows {
    (0..m)
        .map(|i| (0..m).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn smith(r: &RingParams, a: &[Vec<i64>], ncols: usize) -> Smith {
    let m = a.len();
    let mut d: Rows = a
        .iter()
        .map(|row| {
            let mut v: Vec<i64> = row.iter().map(|&x| r.reduce(x)).collect();
            v.resize(ncols, 0);
            v
        })
        .collect();
    let mut u = identity(m);
    let mut v = identity(ncols);
    let mut vinv = identity(ncols);
    let mut exps = vec![r.n(); ncols];
    for t in 0..m.min(ncols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in d.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let key = (r.val(x), i, j);
                    if best.is_none_or(|b| key < b) {
                        best = Some(key);
                    }
                }
            }
        }
        let Some((k, bi, bj)) = best else { break };
        d.swap(t, bi);
        u.swap(t, bi);
        for row in d.iter_mut() {
            row.swap(t, bj);
        }
        for row in v.iter_mut() {
            row.swap(t, bj);
        }
        vinv.swap(t, bj);
        let pk = r.pow(k);
        let inv = r.inv_unit(d[t][t] / pk);
        for x in d[t].iter_mut() {
            *x = r.mul(*x, inv);
        }
        for x in u[t].iter_mut() {
            *x = r.mul(*x, inv);
        }
        let (dt, urow) = (d[t].clone(), u[t].clone());
        for i in 0..m {
            if i != t {
                let q = d[i][t] / pk;
                axpy(r, &mut d[i], q, &dt);
                axpy(r, &mut u[i], q, &urow);
            }
        }
        for j in 0..ncols {
            if j == t {
                continue;
            }
            let q = d[t][j] / pk;
            if q == 0 {
                continue;
            }
            for row in d.iter_mut() {
                row[j] = r.reduce(row[j] - r.mul(q, row[t]));
            }
            for row in v.iter_mut() {
                row[j] = r.reduce(row[j] - r.mul(q, row[t]));
            }
            let rj = vinv[j].clone();
            axpy(r, &mut vinv[t], -q, &rj);
        }
        exps[t] = k;
    }
    Smith { exps, u, v, vinv }
}

pub fn mat_mul(r: &RingParams, a: &[Vec<i64>], b: &[Vec<i64>], inner: usize, ncols: usize) -> Rows {
    a.iter()
        .map(|row| {
            (0..ncols)
                .map(|j| {
                    let mut s = 0i64;
                    for k in 0..inner {
                        s = r.reduce(s + r.mul(row[k], b[k][j]));
                    }
                    s
                })
                .collect()
        })
        .collect()
}
