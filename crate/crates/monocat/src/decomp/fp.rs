//! Finite-dimensional algebras over the prime field F_p given by structure constants.

pub type Vector = Vec<i64>;

fn inv_mod(a: i64, p: i64) -> i64 {
    let (mut r0, mut r1, mut s0, mut s1) = (p, a.rem_euclid(p), 0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(p)
}

/// Row-reduced echelon form of `rows`, with the pivot column of each row.
pub fn rref(p: i64, rows: &[Vector], ncols: usize) -> (Vec<Vector>, Vec<usize>) {
    let mut m: Vec<Vector> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(k) = (row..m.len()).find(|&k| m[k][col] != 0) else { continue };
        m.swap(row, k);
        let inv = inv_mod(m[row][col], p);
        for x in m[row].iter_mut() {
            *x = *x * inv % p;
        }
        let pr = m[row].clone();
        for (k, other) in m.iter_mut().enumerate() {
            if k != row && other[col] != 0 {
                let q = other[col];
                for (x, &y) in other.iter_mut().zip(&pr) {
                    *x = (*x - q * y).rem_euclid(p);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    (m, pivots)
}

/// Basis of `{c : Σ c_k rows[k] = 0}`.
pub fn left_nullspace(p: i64, rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let k = rows.len();
    let aug: Vec<Vector> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.resize(ncols, 0);
            v.extend((0..k).map(|j| i64::from(i == j)));
            v
        })
        .collect();
    let (red, piv) = rref(p, &aug, ncols + k);
    red.into_iter()
        .zip(piv)
        .filter(|&(_, c)| c >= ncols)
        .map(|(r, _)| r[ncols..].to_vec())
        .collect()
}

/// Some `c` with `Σ c_k rows[k] = b`.
pub fn solve_left(p: i64, rows: &[Vector], b: &[i64]) -> Option<Vector> {
    let ncols = b.len();
    let k = rows.len();
    let mut aug: Vec<Vector> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..k).map(|j| i64::from(i == j)));
            v
        })
        .collect();
    let (red, piv) = rref(p, &aug, ncols + k);
    aug.clear();
    let mut w: Vector = b.iter().map(|x| x.rem_euclid(p)).collect();
    let mut c = vec![0i64; k];
    for (r, &col) in red.iter().zip(&piv) {
        if col >= ncols {
            break;
        }
        let q = w[col];
        if q != 0 {
            for j in 0..ncols {
                w[j] = (w[j] - q * r[j]).rem_euclid(p);
            }
            for j in 0..k {
                c[j] = (c[j] + q * r[ncols + j]).rem_euclid(p);
            }
        }
    }
    w.iter().all(|&x| x == 0).then_some(c)
}

/// An associative unital algebra with basis `e_0..e_{d-1}` and `e_a e_b = Σ table[a][b][l] e_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpAlgebra {
    pub p: i64,
    pub table: Vec<Vec<Vector>>,
    pub one: Vector,
}

impl FpAlgebra {
    pub fn dim(&self) -> usize {
        self.one.len()
    }

    pub fn zero(&self) -> Vector {
        vec![0; self.dim()]
    }

    pub fn unit(&self, k: usize) -> Vector {
        let mut v = self.zero();
        v[k] = 1;
        v
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Vector {
        x.iter().zip(y).map(|(a, b)| (a + b).rem_euclid(self.p)).collect()
    }

    pub fn sub(&self, x: &[i64], y: &[i64]) -> Vector {
        x.iter().zip(y).map(|(a, b)| (a - b).rem_euclid(self.p)).collect()
    }

    pub fn scale(&self, c: i64, x: &[i64]) -> Vector {
        x.iter().map(|a| (a * c).rem_euclid(self.p)).collect()
    }

    pub fn mul(&self, x: &[i64], y: &[i64]) -> Vector {
        let d = self.dim();
        let mut out = vec![0i64; d];
        for (a, &xa) in x.iter().enumerate() {
            if xa == 0 {
                continue;
            }
            for (b, &yb) in y.iter().enumerate() {
                if yb == 0 {
                    continue;
                }
                let c = xa * yb % self.p;
                for (o, &t) in out.iter_mut().zip(&self.table[a][b]) {
                    *o = (*o + c * t) % self.p;
                }
            }
        }
        out
    }

    pub fn pow(&self, x: &[i64], mut e: u64) -> Vector {
        let mut base = x.to_vec();
        let mut acc = self.one.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self, x: &[i64]) -> bool {
        x.iter().all(|&a| a == 0)
    }

    /// Matrix of left multiplication by `x`, column `b` holding `x e_b`.
    pub fn left_regular(&self, x: &[i64]) -> Vec<Vector> {
        let d = self.dim();
        let cols: Vec<Vector> = (0..d).map(|b| self.mul(x, &self.unit(b))).collect();
        (0..d).map(|i| (0..d).map(|b| cols[b][i]).collect()).collect()
    }

    /// Jacobson radical by the characteristic-p trace chain on the regular representation.
    ///
    /// `I_{-1} = A`, `I_i = {x ∈ I_{i-1} : g_i(x e_b) = 0 for all b}` where
    /// `g_i(x) = (tr(X̃^{p^i}) mod p^{i+1}) / p^i` for an integer lift `X̃` of the
    /// regular matrix of `x`. The chain stops at `i = floor(log_p d)`.
    pub fn radical(&self) -> Vec<Vector> {
        let d = self.dim();
        if d == 0 {
            return Vec::new();
        }
        let p = self.p;
        let mut l = 0u32;
        while (p as u128).pow(l + 1) <= d as u128 {
            l += 1;
        }
        let mut ideal: Vec<Vector> = (0..d).map(|k| self.unit(k)).collect();
        for i in 0..=l {
            let modulus = (p as i128).pow(i + 1);
            let g = |x: &[i64]| -> i64 {
                let m: Vec<Vec<i128>> = self
                    .left_regular(x)
                    .into_iter()
                    .map(|r| r.into_iter().map(i128::from).collect())
                    .collect();
                let pw = mat_pow(&m, (p as u64).pow(i), modulus);
                let tr = (0..d).fold(0i128, |s, k| (s + pw[k][k]) % modulus);
                (tr / (p as i128).pow(i)) as i64
            };
            let rows: Vec<Vector> = ideal
                .iter()
                .map(|u| (0..d).map(|b| g(&self.mul(u, &self.unit(b)))).collect())
                .collect();
            let null = left_nullspace(p, &rows, d);
            ideal = null
                .iter()
                .map(|c| {
                    let mut v = self.zero();
                    for (ck, u) in c.iter().zip(&ideal) {
                        if *ck != 0 {
                            v = self.add(&v, &self.scale(*ck, u));
                        }
                    }
                    v
                })
                .collect();
            ideal = rref(p, &ideal, d).0;
            if ideal.is_empty() {
                break;
            }
        }
        ideal
    }

    /// `A / I` for a two-sided ideal with basis `ideal`, plus the lifting data.
    pub fn quotient(&self, ideal: &[Vector]) -> Quotient {
        let d = self.dim();
        let (red, piv) = rref(self.p, ideal, d);
        let free: Vec<usize> = (0..d).filter(|c| !piv.contains(c)).collect();
        let project = |x: &[i64]| -> Vector {
            let mut w = x.to_vec();
            for (r, &c) in red.iter().zip(&piv) {
                let q = w[c];
                if q != 0 {
                    for j in 0..d {
                        w[j] = (w[j] - q * r[j]).rem_euclid(self.p);
                    }
                }
            }
            free.iter().map(|&c| w[c]).collect()
        };
        let table = free
            .iter()
            .map(|&a| free.iter().map(|&b| project(&self.mul(&self.unit(a), &self.unit(b)))).collect())
            .collect();
        let one = project(&self.one);
        Quotient {
            algebra: FpAlgebra { p: self.p, table, one },
            lift_index: free,
        }
    }

    /// Basis of the center.
    pub fn center(&self) -> Vec<Vector> {
        let d = self.dim();
        // z is central iff z e_b - e_b z = 0 for every b; collect the linear conditions per basis vector.
        let rows: Vec<Vector> = (0..d)
            .map(|a| {
                let ea = self.unit(a);
                (0..d)
                    .flat_map(|b| {
                        let eb = self.unit(b);
                        self.sub(&self.mul(&ea, &eb), &self.mul(&eb, &ea))
                    })
                    .collect()
            })
            .collect();
        left_nullspace(self.p, &rows, d * d)
    }

    /// Basis of `{y ∈ span(basis) : y^p = y}` for a commutative subalgebra `span(basis)`.
    pub fn frobenius_fixed(&self, basis: &[Vector]) -> Vec<Vector> {
        let d = self.dim();
        let rows: Vec<Vector> = basis
            .iter()
            .map(|b| self.sub(&self.pow(b, self.p as u64), b))
            .collect();
        left_nullspace(self.p, &rows, d)
            .iter()
            .map(|c| combine(self, c, basis))
            .collect()
    }

    /// Basis of the subalgebra `F_p[x]`.
    pub fn generated(&self, x: &[i64]) -> Vec<Vector> {
        let d = self.dim();
        let mut basis: Vec<Vector> = Vec::new();
        let mut cur = self.one.clone();
        loop {
            let mut trial = basis.clone();
            trial.push(cur.clone());
            if rref(self.p, &trial, d).0.len() == basis.len() {
                return basis;
            }
            basis = trial;
            cur = self.mul(&cur, x);
        }
    }

    /// Some `λ` with `y - λ` not invertible, for `y` satisfying `y^p = y`, found
    /// among the roots of the minimal polynomial of `y`.
    pub fn fixed_point_value(&self, y: &[i64]) -> Option<i64> {
        let powers = self.generated(y);
        let k = powers.len();
        // Minimal polynomial: y^k = Σ c_i y^i.
        let top = self.pow(y, k as u64);
        let c = solve_left(self.p, &powers, &top)?;
        let eval = |t: i64| -> i64 {
            let mut acc = 1i64;
            let mut val = 0i64;
            for ci in &c {
                val = (val + ci * acc) % self.p;
                acc = acc * t % self.p;
            }
            (acc - val).rem_euclid(self.p)
        };
        (0..self.p).find(|&t| eval(t) == 0)
    }
}

pub fn combine(alg: &FpAlgebra, coeffs: &[i64], basis: &[Vector]) -> Vector {
    let mut v = alg.zero();
    for (c, b) in coeffs.iter().zip(basis) {
        if *c != 0 {
            v = alg.add(&v, &alg.scale(*c, b));
        }
    }
    v
}

/// `A / I` with the basis of `A` indices whose images form the quotient basis.
pub struct Quotient {
    pub algebra: FpAlgebra,
    pub lift_index: Vec<usize>,
}

impl Quotient {
    /// A preimage in `A` of a quotient element.
    pub fn lift(&self, x: &[i64], ambient_dim: usize) -> Vector {
        let mut v = vec![0; ambient_dim];
        for (&k, &c) in self.lift_index.iter().zip(x) {
            v[k] = c;
        }
        v
    }
}

fn mat_pow(m: &[Vec<i128>], mut e: u64, modulus: i128) -> Vec<Vec<i128>> {
    let d = m.len();
    let mut acc: Vec<Vec<i128>> = (0..d).map(|i| (0..d).map(|j| i128::from(i == j)).collect()).collect();
    let mut base: Vec<Vec<i128>> = m.to_vec();
    let mul = |a: &[Vec<i128>], b: &[Vec<i128>]| -> Vec<Vec<i128>> {
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let mut s = 0i128;
                        for k in 0..d {
                            s = (s + a[i][k] * b[k][j]) % modulus;
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    };
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        base = mul(&base, &base);
        e >>= 1;
    }
    acc
}
