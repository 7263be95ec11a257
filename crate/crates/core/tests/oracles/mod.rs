//! Independent reference computations used by the integration tests.
#![allow(dead_code)]

/// `mult[m][j]` for the A_1 module `L(k, aΛ_1)`: multiplicity of the weight
/// `jΛ_1` at depth `m`, from the Weyl–Kac numerator divided by the affine
/// denominator. Weights run over `-w..=w`, stored at index `j + w`.
pub struct A1Character {
    pub span: i64,
    pub mult: Vec<Vec<i64>>,
}

impl A1Character {
    pub fn get(&self, weight: i64, depth: usize) -> i64 {
        if weight.abs() > self.span {
            return 0;
        }
        self.mult[depth][(weight + self.span) as usize]
    }
}

pub fn a1_weyl_kac(k: i64, a: i64, depth: usize) -> A1Character {
    let d = depth as i64;
    let p = a + 1;
    let kk = k + 2;
    let w = 4 * d + 2 * kk * (d + 4) + p + 8;
    let width = (2 * w + 1) as usize;
    let mut f = vec![vec![0i64; width]; depth + 1];
    let put = |f: &mut Vec<Vec<i64>>, weight: i64, m: i64, c: i64| {
        if (0..=d).contains(&m) {
            assert!(weight.abs() <= w, "weight window too small");
            f[m as usize][(weight + w) as usize] += c;
        }
    };
    // Σ_n [e^{(p+2nK)Λ_1} q^{pn+Kn²} − e^{(−p+2nK)Λ_1} q^{−pn+Kn²}], times e^{−ρ}
    for n in -(d + 2)..=(d + 2) {
        put(&mut f, p + 2 * n * kk - 1, p * n + kk * n * n, 1);
        put(&mut f, -p + 2 * n * kk - 1, -p * n + kk * n * n, -1);
    }
    // 1/(1 − X^c q^n) for the roots ±α + nδ and nδ, n ≥ 1
    for n in 1..=depth {
        for c in [0i64, 2, -2] {
            for m in n..=depth {
                for j in 0..width as i64 {
                    let src = j - c;
                    if (0..width as i64).contains(&src) {
                        let v = f[m - n][src as usize];
                        f[m][j as usize] += v;
                    }
                }
            }
        }
    }
    // 1/(1 − X^{−2}) for the finite root α
    for row in f.iter_mut() {
        for j in (0..width).rev() {
            if j + 2 < width {
                row[j] += row[j + 2];
            }
        }
    }
    A1Character { span: w, mult: f }
}

/// Coefficients of `Π(1 − q^n)` from Euler's pentagonal-number theorem.
pub fn pentagonal_euler(depth: usize) -> Vec<i64> {
    let mut c = vec![0i64; depth + 1];
    let d = depth as i64;
    for n in -d..=d {
        let e = n * (3 * n - 1) / 2;
        if (0..=d).contains(&e) {
            c[e as usize] += if n % 2 == 0 { 1 } else { -1 };
        }
    }
    c
}

/// A root-system realization in an orthonormal basis: the simple roots as
/// rows (scaled coordinates over a common `sqrt(scale)`), and tabulated
/// coset representatives of `Q/Q_L` in simple-root coordinates.
pub struct Realization {
    pub name: &'static str,
    pub series: char,
    pub rank: usize,
    /// Simple roots in ε-coordinates; true vectors are these divided by `sqrt(denominator)`.
    pub simple_eps: Vec<Vec<i64>>,
    pub denominator: i64,
    pub reps_in_roots: Vec<Vec<i64>>,
}

pub fn tabulated_coset_reps() -> Vec<Realization> {
    let mut out = Vec::new();
    // B_2: α1 = ε1 − ε2, α2 = ε2; reps 0, ε1 = α1 + α2
    out.push(Realization {
        name: "B2",
        series: 'B',
        rank: 2,
        simple_eps: vec![vec![1, -1], vec![0, 1]],
        denominator: 1,
        reps_in_roots: vec![vec![0, 0], vec![1, 1]],
    });
    // C_3: α_i = (ε_i − ε_{i+1})/√2, α3 = √2 ε3; reps a1α1 + a2α2
    out.push(Realization {
        name: "C3",
        series: 'C',
        rank: 3,
        simple_eps: vec![vec![1, -1, 0], vec![0, 1, -1], vec![0, 0, 2]],
        denominator: 2,
        reps_in_roots: vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]],
    });
    // F_4: α1 = ε2 − ε3, α2 = ε3 − ε4, α3 = ε4, α4 = (ε1 − ε2 − ε3 − ε4)/2;
    // reps a ε3 + b (ε1 − ε2 − ε3 − ε4)/2 with ε3 = α2 + α3
    out.push(Realization {
        name: "F4",
        series: 'F',
        rank: 4,
        simple_eps: vec![vec![0, 2, -2, 0], vec![0, 0, 2, -2], vec![0, 0, 0, 2], vec![1, -1, -1, -1]],
        denominator: 4,
        reps_in_roots: vec![vec![0, 0, 0, 0], vec![0, 1, 1, 0], vec![0, 0, 0, 1], vec![0, 1, 1, 1]],
    });
    // G_2: α1 = (ε1 − ε2)/√3 short, α2 = (−2ε1 + ε2 + ε3)/√3; reps aα1
    out.push(Realization {
        name: "G2",
        series: 'G',
        rank: 2,
        simple_eps: vec![vec![1, -1, 0], vec![-2, 1, 1]],
        denominator: 3,
        reps_in_roots: vec![vec![0, 0], vec![1, 0], vec![2, 0]],
    });
    out
}

impl Realization {
    /// `⟨α_i, α_j⟩` as `(numerator, denominator)`.
    pub fn gram(&self) -> Vec<Vec<(i64, i64)>> {
        self.simple_eps
            .iter()
            .map(|a| {
                self.simple_eps
                    .iter()
                    .map(|b| (a.iter().zip(b).map(|(x, y)| x * y).sum(), self.denominator))
                    .collect()
            })
            .collect()
    }
}

/// `⟨aΛ_1, bΛ_1⟩ = ab/2` for A_1, as `(numerator, denominator)`.
pub fn a1_inner(a: i64, b: i64) -> (i64, i64) {
    (a * b, 2)
}

/// `|P_+^k|` by brute-force enumeration of `Σ λ_i c_i ≤ k`.
pub fn count_alcove(comarks: &[i64], k: i64) -> usize {
    fn go(c: &[i64], left: i64) -> usize {
        match c.split_first() {
            None => 1,
            Some((first, rest)) => (0..=left / first).map(|a| go(rest, left - a * first)).sum(),
        }
    }
    go(comarks, k)
}

/// Integer determinant by cofactor expansion (small matrices only).
pub fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det(&minor)
        })
        .sum()
}
