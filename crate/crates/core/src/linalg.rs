//! Exact rational and integer matrix helpers.
//!
//! Matrices are plain `Vec<Vec<_>>` in row-major order. Everything here is
//! small (rank <= 8), so clarity wins over cache behaviour.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

/// Exact rational used throughout the crate.
pub type Rat = Ratio<i128>;

pub type RatMatrix = Vec<Vec<Rat>>;
pub type IntMatrix = Vec<Vec<i64>>;

pub fn rat(n: i128, d: i128) -> Rat {
    Rat::new(n, d)
}

pub fn int(n: i128) -> Rat {
    Rat::from_integer(n)
}

/// Representative of `r` modulo 1 in `[0, 1)`.
pub fn frac(r: &Rat) -> Rat {
    r - r.floor()
}

/// Formats a rational as `"p/q"` with `q >= 1`.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i128 = p.trim().parse().ok()?;
            let q: i128 = q.trim().parse().ok()?;
            if q == 0 {
                None
            } else {
                Some(Rat::new(p, q))
            }
        }
        None => s.parse::<i128>().ok().map(Rat::from_integer),
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn identity(n: usize) -> RatMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect()
}

pub fn int_to_rat(m: &IntMatrix) -> RatMatrix {
    m.iter()
        .map(|row| row.iter().map(|&x| int(x as i128)).collect())
        .collect()
}

pub fn mat_mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(Rat::zero(), |acc, t| acc + row[t] * b[t][j])
                })
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn scale_matrix(a: &RatMatrix, s: &Rat) -> RatMatrix {
    a.iter().map(|row| row.iter().map(|x| x * s).collect()).collect()
}

/// Row vector times matrix.
pub fn vec_mat(v: &[Rat], m: &RatMatrix) -> Vec<Rat> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| v.iter().zip(m).fold(Rat::zero(), |acc, (x, row)| acc + x * row[j]))
        .collect()
}

/// `u^T m v`.
pub fn bilinear(u: &[Rat], m: &RatMatrix, v: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            acc += ui * m[i][j] * vj;
        }
    }
    acc
}

/// Gauss-Jordan inverse; `None` if singular.
pub fn inverse(a: &RatMatrix) -> Option<RatMatrix> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col];
        for j in 0..n {
            m[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col];
                for j in 0..n {
                    let (mv, iv) = (m[col][j], inv[col][j]);
                    m[r][j] -= f * mv;
                    inv[r][j] -= f * iv;
                }
            }
        }
    }
    Some(inv)
}

pub fn determinant(a: &RatMatrix) -> Rat {
    let n = a.len();
    let mut m = a.clone();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rat::zero();
        };
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        let p = m[col][col];
        det *= p;
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let f = m[r][col] / p;
                for j in col..n {
                    let v = m[col][j];
                    m[r][j] -= f * v;
                }
            }
        }
    }
    det
}

pub fn is_integral(a: &RatMatrix) -> bool {
    a.iter().flatten().all(Ratio::is_integer)
}

pub fn to_int_matrix(a: &RatMatrix) -> Option<IntMatrix> {
    a.iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    if x.is_integer() {
                        i64::try_from(*x.numer()).ok()
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect()
}

/// Least common multiple of all denominators in `a`.
pub fn common_denominator(a: &RatMatrix) -> i128 {
    a.iter().flatten().fold(1i128, |acc, x| acc.lcm(x.denom()))
}

/// Result of a Smith decomposition `u * a * v = diag(d)`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diagonal: Vec<i64>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

fn int_identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

// Elementary operations, each mirrored on the transform that tracks it.
fn add_row(m: &mut IntMatrix, dst: usize, src: usize, f: i64) {
    for j in 0..m[dst].len() {
        m[dst][j] += f * m[src][j];
    }
}

fn add_col(m: &mut IntMatrix, dst: usize, src: usize, f: i64) {
    for row in m.iter_mut() {
        row[dst] += f * row[src];
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Smith normal form of a square nonsingular integer matrix.
///
/// Returns unimodular `u`, `v` with `u * a * v = diag(d)`, `d_i | d_{i+1}`,
/// `d_i > 0`, together with `v^{-1}`.
pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let n = a.len();
    let mut m = a.clone();
    let mut u = int_identity(n);
    let mut v = int_identity(n);
    let mut v_inv = int_identity(n);

    // Column op "col dst += f col src" is right-multiplication by E; the
    // inverse of E is "row src -= f row dst" applied on the left of v_inv.
    let col_add = |m: &mut IntMatrix, v: &mut IntMatrix, v_inv: &mut IntMatrix, dst, src, f| {
        add_col(m, dst, src, f);
        add_col(v, dst, src, f);
        add_row(v_inv, src, dst, -f);
    };

    for t in 0..n {
        loop {
            // pivot: smallest nonzero magnitude in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if m[i][j] != 0
                        && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            m.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut m, t, pj);
            swap_cols(&mut v, t, pj);
            v_inv.swap(t, pj);

            let mut clean = true;
            for i in t + 1..n {
                let f = Integer::div_floor(&m[i][t], &m[t][t]);
                if f != 0 {
                    add_row(&mut m, i, t, -f);
                    add_row(&mut u, i, t, -f);
                }
                if m[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let f = Integer::div_floor(&m[t][j], &m[t][t]);
                if f != 0 {
                    col_add(&mut m, &mut v, &mut v_inv, j, t, -f);
                }
                if m[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility condition on the trailing block
            let p = m[t][t];
            let offender = (t + 1..n)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| m[i][j] % p != 0);
            match offender {
                Some((i, _)) => {
                    add_row(&mut m, t, i, 1);
                    add_row(&mut u, t, i, 1);
                }
                None => break,
            }
        }
        if m[t][t] < 0 {
            for j in 0..n {
                m[t][j] = -m[t][j];
                u[t][j] = -u[t][j];
            }
        }
    }
    Smith {
        diagonal: (0..n).map(|i| m[i][i]).collect(),
        u,
        v,
        v_inv,
    }
}

/// Integer row reduction: a basis (echelon form) of the Z-span of `rows`.
pub fn integer_row_basis(rows: &[Vec<i64>]) -> IntMatrix {
    let mut m: IntMatrix = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut start = 0;
    for c in 0..cols {
        loop {
            let nz: Vec<usize> = (start..m.len()).filter(|&r| m[r][c] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&r| m[r][c].abs()).unwrap();
            m.swap(start, piv);
            let mut done = true;
            for r in start + 1..m.len() {
                if m[r][c] != 0 {
                    let f = Integer::div_floor(&m[r][c], &m[start][c]);
                    add_row(&mut m, r, start, -f);
                    if m[r][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                if m[start][c] < 0 {
                    m[start].iter_mut().for_each(|x| *x = -*x);
                }
                out.push(m[start].clone());
                start += 1;
                break;
            }
        }
    }
    out
}
