//! Root systems and Weyl groups of the simple Lie algebras A-G.
//!
//! All weights are stored in the fundamental-weight basis `Λ_1..Λ_l`.
//! The invariant form is normalized so that long roots have squared
//! length 2, and the Gram matrix `F_ij = ⟨Λ_i, Λ_j⟩` is kept exactly.
//!
//! In these coordinates the simple root `α_i` is row `i` of the Cartan
//! matrix, the `i`-th coordinate of a weight is `⟨λ, α_i^∨⟩`, and every Weyl
//! group element is an integer matrix.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, int, IntMatrix, Rat, RatMatrix};

/// Default cap on the Weyl group order for explicit enumeration.
pub const DEFAULT_WEYL_CAP: u128 = 10_000_000;

/// Environment variable overriding [`DEFAULT_WEYL_CAP`].
pub const WEYL_CAP_ENV: &str = "PARAMOD_WEYL_CAP";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Series {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Series::A),
            "B" => Ok(Series::B),
            "C" => Ok(Series::C),
            "D" => Ok(Series::D),
            "E" => Ok(Series::E),
            "F" => Ok(Series::F),
            "G" => Ok(Series::G),
            other => Err(format!("unknown series '{other}' (expected one of A-G)")),
        }
    }
}

/// Exact weight in the fundamental-weight basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVec {
    coords: Vec<Rat>,
}

impl WeightVec {
    pub fn new(coords: Vec<Rat>) -> Self {
        WeightVec { coords }
    }

    pub fn zero(rank: usize) -> Self {
        WeightVec {
            coords: vec![Rat::zero(); rank],
        }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        WeightVec {
            coords: coords.iter().map(|&c| int(c as i128)).collect(),
        }
    }

    /// The fundamental weight `Λ_i` (0-based index).
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut w = Self::zero(rank);
        w.coords[i] = Rat::one();
        w
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &Rat) -> Self {
        WeightVec {
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    /// Integer coordinates, if every coordinate is integral.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.coords
            .iter()
            .map(|c| {
                if c.is_integer() {
                    i64::try_from(*c.numer()).ok()
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn is_dominant(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }
}

impl fmt::Display for WeightVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &WeightVec {
    type Output = WeightVec;
    fn add(self, rhs: &WeightVec) -> WeightVec {
        assert_eq!(self.rank(), rhs.rank(), "weight rank mismatch");
        WeightVec {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &WeightVec {
    type Output = WeightVec;
    fn sub(self, rhs: &WeightVec) -> WeightVec {
        assert_eq!(self.rank(), rhs.rank(), "weight rank mismatch");
        WeightVec {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &WeightVec {
    type Output = WeightVec;
    fn neg(self) -> WeightVec {
        WeightVec {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<&WeightVec> for i64 {
    type Output = WeightVec;
    fn mul(self, rhs: &WeightVec) -> WeightVec {
        rhs.scale(&int(self as i128))
    }
}

/// A Weyl group element acting on integer weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    rank: usize,
    // row-major; column action `v -> M v`
    matrix: Box<[i8]>,
    sign: i8,
}

impl WeylElement {
    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        i64::from(self.matrix[i * self.rank + j])
    }

    pub fn to_matrix(&self) -> IntMatrix {
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    pub fn apply_ints(&self, v: &[i64]) -> Vec<i64> {
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| self.entry(i, j) * v[j]).sum())
            .collect()
    }

    pub fn apply(&self, w: &WeightVec) -> WeightVec {
        let c = w.coords();
        WeightVec::new(
            (0..self.rank)
                .map(|i| {
                    (0..self.rank).fold(Rat::zero(), |acc, j| acc + int(self.entry(i, j) as i128) * c[j])
                })
                .collect(),
        )
    }

    /// Exact determinant; equals [`sign`](Self::sign) for a genuine element.
    pub fn determinant(&self) -> i64 {
        let d = linalg::determinant(&linalg::int_to_rat(&self.to_matrix()));
        i64::try_from(*d.numer()).expect("determinant of a Weyl element is ±1")
    }
}

/// Root data of a simple Lie algebra.
#[derive(Debug)]
pub struct AlgebraDescriptor {
    series: Series,
    rank: usize,
    cartan: IntMatrix,
    gram: RatMatrix,
    half_norms: Vec<Rat>,
    simple_roots: Vec<WeightVec>,
    positive_roots: Vec<WeightVec>,
    positive_root_coords: Vec<Vec<i64>>,
    theta: WeightVec,
    rho: WeightVec,
    dual_coxeter: i64,
    dim_g: usize,
    marks: Vec<i64>,
    comarks: Vec<i64>,
    weyl: OnceLock<Vec<WeylElement>>,
}

fn cartan_matrix(series: Series, l: usize) -> Result<IntMatrix> {
    let invalid = |reason| Error::InvalidType {
        series: series.letter(),
        rank: l,
        reason,
    };
    let valid = match series {
        Series::A => l >= 1,
        Series::B | Series::C => l >= 2,
        Series::D => l >= 4,
        Series::E => (6..=8).contains(&l),
        Series::F => l == 4,
        Series::G => l == 2,
    };
    if !valid {
        return Err(invalid(match series {
            Series::A => "rank must be at least 1",
            Series::B | Series::C => "rank must be at least 2",
            Series::D => "rank must be at least 4",
            Series::E => "rank must be 6, 7 or 8",
            Series::F => "rank must be 4",
            Series::G => "rank must be 2",
        }));
    }
    let mut a = vec![vec![0i64; l]; l];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    // Bourbaki numbering throughout.
    match series {
        Series::A | Series::B | Series::C | Series::F => {
            for i in 0..l - 1 {
                link(i, i + 1);
            }
        }
        Series::D => {
            for i in 0..l - 2 {
                link(i, i + 1);
            }
            link(l - 3, l - 1);
        }
        Series::E => {
            link(0, 2);
            link(1, 3);
            for i in 2..l - 1 {
                link(i, i + 1);
            }
        }
        Series::G => link(0, 1),
    }
    match series {
        // α_l short
        Series::B => a[l - 2][l - 1] = -2,
        // α_l long
        Series::C => a[l - 1][l - 2] = -2,
        // α_1, α_2 long; α_3, α_4 short
        Series::F => a[1][2] = -2,
        // α_1 short, α_2 long
        Series::G => a[1][0] = -3,
        _ => {}
    }
    Ok(a)
}

/// `d_i = ⟨α_i, α_i⟩ / 2`, normalized so that long roots have `d = 1`.
fn symmetrizer(cartan: &IntMatrix) -> Vec<Rat> {
    let l = cartan.len();
    let mut d: Vec<Option<Rat>> = vec![None; l];
    d[0] = Some(Rat::one());
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let di = d[i].unwrap();
        for j in 0..l {
            if j != i && cartan[i][j] != 0 && d[j].is_none() {
                // A_ij d_j = A_ji d_i
                d[j] = Some(di * int(cartan[j][i] as i128) / int(cartan[i][j] as i128));
                queue.push_back(j);
            }
        }
    }
    let d: Vec<Rat> = d.into_iter().map(|x| x.expect("connected Dynkin diagram")).collect();
    let max = d.iter().copied().fold(Rat::zero(), |a, b| if b > a { b } else { a });
    d.iter().map(|x| x / max).collect()
}

/// Positive roots in simple-root coordinates, by height.
fn positive_roots_by_strings(cartan: &IntMatrix) -> Vec<Vec<i64>> {
    let l = cartan.len();
    let simple: Vec<Vec<i64>> = (0..l)
        .map(|i| (0..l).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut all: Vec<Vec<i64>> = simple.clone();
    let mut known: HashSet<Vec<i64>> = simple.iter().cloned().collect();
    let mut layer = simple;
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..l {
                // length of the α_i-string below β
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if known.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                // ⟨β, α_i^∨⟩ = Σ_j c_j A_ji
                let pairing: i64 = (0..l).map(|j| beta[j] * cartan[j][i]).sum();
                if p - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        next.sort();
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

fn weyl_order_formula(series: Series, l: usize) -> u128 {
    let fact = |n: usize| (1..=n as u128).product::<u128>();
    match series {
        Series::A => fact(l + 1),
        Series::B | Series::C => (1u128 << l) * fact(l),
        Series::D => (1u128 << (l - 1)) * fact(l),
        Series::E => match l {
            6 => 51_840,
            7 => 2_903_040,
            _ => 696_729_600,
        },
        Series::F => 1_152,
        Series::G => 12,
    }
}

/// Weyl group cap from [`WEYL_CAP_ENV`], or [`DEFAULT_WEYL_CAP`].
pub fn weyl_cap() -> u128 {
    std::env::var(WEYL_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_WEYL_CAP)
}

/// Builds the root data of the simple algebra `series_rank`.
pub fn build_algebra(series: Series, rank: usize) -> Result<AlgebraDescriptor> {
    let cartan = cartan_matrix(series, rank)?;
    let l = rank;
    let half_norms = symmetrizer(&cartan);

    // F = D (A^T)^{-1}
    let at_inv = linalg::inverse(&linalg::int_to_rat(&linalg::transpose(&cartan)))
        .expect("Cartan matrices are nonsingular");
    let gram: RatMatrix = (0..l)
        .map(|i| (0..l).map(|j| half_norms[i] * at_inv[i][j]).collect())
        .collect();

    let to_weight = |c: &[i64]| -> WeightVec {
        WeightVec::from_ints(
            &(0..l)
                .map(|m| (0..l).map(|j| c[j] * cartan[j][m]).sum())
                .collect::<Vec<i64>>(),
        )
    };
    let simple_roots: Vec<WeightVec> = (0..l).map(|i| WeightVec::from_ints(&cartan[i])).collect();
    let positive_root_coords = positive_roots_by_strings(&cartan);
    let positive_roots: Vec<WeightVec> = positive_root_coords.iter().map(|c| to_weight(c)).collect();
    let marks = positive_root_coords
        .iter()
        .max_by_key(|c| c.iter().sum::<i64>())
        .expect("at least one root")
        .clone();
    let theta = to_weight(&marks);
    let rho = WeightVec::from_ints(&vec![1; l]);
    let comarks: Vec<i64> = marks
        .iter()
        .zip(&half_norms)
        .map(|(&a, d)| {
            let c = int(a as i128) * d;
            assert!(c.is_integer(), "comarks are integers");
            *c.numer() as i64
        })
        .collect();
    let h = linalg::bilinear(rho.coords(), &gram, theta.coords()) + Rat::one();
    assert!(h.is_integer(), "dual Coxeter number is an integer");
    Ok(AlgebraDescriptor {
        series,
        rank,
        dim_g: l + 2 * positive_roots.len(),
        cartan,
        gram,
        half_norms,
        simple_roots,
        positive_roots,
        positive_root_coords,
        theta,
        rho,
        dual_coxeter: *h.numer() as i64,
        marks,
        comarks,
        weyl: OnceLock::new(),
    })
}

impl AlgebraDescriptor {
    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.series, self.rank)
    }

    pub fn cartan_matrix(&self) -> &IntMatrix {
        &self.cartan
    }

    /// `F_ij = ⟨Λ_i, Λ_j⟩`.
    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    /// `⟨α_i, α_i⟩ / 2` for each simple root.
    pub fn half_norms(&self) -> &[Rat] {
        &self.half_norms
    }

    pub fn simple_roots(&self) -> &[WeightVec] {
        &self.simple_roots
    }

    pub fn positive_roots(&self) -> &[WeightVec] {
        &self.positive_roots
    }

    /// Positive roots in simple-root coordinates (same order as
    /// [`positive_roots`](Self::positive_roots)).
    pub fn positive_root_coords(&self) -> &[Vec<i64>] {
        &self.positive_root_coords
    }

    pub fn theta(&self) -> &WeightVec {
        &self.theta
    }

    pub fn rho(&self) -> &WeightVec {
        &self.rho
    }

    pub fn dual_coxeter(&self) -> i64 {
        self.dual_coxeter
    }

    pub fn dim_g(&self) -> usize {
        self.dim_g
    }

    /// `a_i` with `θ = Σ a_i α_i`.
    pub fn marks(&self) -> &[i64] {
        &self.marks
    }

    /// `⟨Λ_i, θ⟩`, the coefficients of `θ^∨` in the simple coroots.
    pub fn comarks(&self) -> &[i64] {
        &self.comarks
    }

    pub fn is_long(&self, root: &WeightVec) -> bool {
        self.inner_unchecked(root, root) == int(2)
    }

    /// `λ_i = (⟨θ,θ⟩/⟨α_i,α_i⟩) Λ_i`, the basis of `Q°` dual to the simple roots.
    pub fn dual_root_basis(&self) -> Vec<WeightVec> {
        (0..self.rank)
            .map(|i| WeightVec::fundamental(self.rank, i).scale(&(Rat::one() / self.half_norms[i])))
            .collect()
    }

    /// Exact `⟨u, v⟩`.
    pub fn inner(&self, u: &WeightVec, v: &WeightVec) -> Result<Rat> {
        for w in [u, v] {
            if w.rank() != self.rank {
                return Err(Error::DimensionMismatch {
                    expected: self.rank,
                    got: w.rank(),
                });
            }
        }
        Ok(self.inner_unchecked(u, v))
    }

    pub(crate) fn inner_unchecked(&self, u: &WeightVec, v: &WeightVec) -> Rat {
        linalg::bilinear(u.coords(), &self.gram, v.coords())
    }

    /// Simple reflection `s_i` on integer coordinates, in place.
    pub(crate) fn reflect_ints(&self, v: &mut [i64], i: usize) {
        let c = v[i];
        if c != 0 {
            for (j, x) in v.iter_mut().enumerate() {
                *x -= c * self.cartan[i][j];
            }
        }
    }

    /// Dominant representative of the Weyl orbit of an integral weight.
    pub fn to_dominant(&self, v: &[i64]) -> Vec<i64> {
        let mut w = v.to_vec();
        while let Some(i) = w.iter().position(|&c| c < 0) {
            self.reflect_ints(&mut w, i);
        }
        w
    }

    /// Weyl orbit of an integral weight.
    pub fn orbit(&self, v: &[i64]) -> Vec<Vec<i64>> {
        let start = self.to_dominant(v);
        let mut seen: HashSet<Vec<i64>> = HashSet::from([start.clone()]);
        let mut out = vec![start.clone()];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for i in 0..self.rank {
                if x[i] > 0 {
                    let mut y = x.clone();
                    self.reflect_ints(&mut y, i);
                    if seen.insert(y.clone()) {
                        out.push(y.clone());
                        queue.push_back(y);
                    }
                }
            }
        }
        out
    }

    /// Order of the Weyl group (closed form by type).
    pub fn weyl_order(&self) -> u128 {
        weyl_order_formula(self.series, self.rank)
    }

    /// The full Weyl group, enumerated once and cached, subject to
    /// [`weyl_cap`].
    pub fn weyl_group(&self) -> Result<&[WeylElement]> {
        self.weyl_group_capped(weyl_cap())
    }

    pub fn weyl_group_capped(&self, cap: u128) -> Result<&[WeylElement]> {
        if let Some(w) = self.weyl.get() {
            return Ok(w);
        }
        let order = self.weyl_order();
        if order > cap {
            return Err(Error::WeylCapExceeded { order, cap });
        }
        let group = self.enumerate_weyl(order as usize)?;
        Ok(self.weyl.get_or_init(|| group))
    }

    fn enumerate_weyl(&self, order: usize) -> Result<Vec<WeylElement>> {
        let l = self.rank;
        let identity: Box<[i8]> = (0..l * l).map(|t| i8::from(t / l == t % l)).collect();
        let mut index: HashMap<Box<[i8]>, ()> = HashMap::with_capacity(order);
        index.insert(identity.clone(), ());
        let mut out = Vec::with_capacity(order);
        out.push(WeylElement {
            rank: l,
            matrix: identity,
            sign: 1,
        });
        let mut head = 0;
        while head < out.len() {
            let (parent, sign) = (out[head].matrix.clone(), out[head].sign);
            head += 1;
            for i in 0..l {
                // s_i * M : row j of the product is row j of M minus A_ij row i of M
                let mut m: Vec<i8> = Vec::with_capacity(l * l);
                for j in 0..l {
                    for c in 0..l {
                        let v = i64::from(parent[j * l + c])
                            - self.cartan[i][j] * i64::from(parent[i * l + c]);
                        m.push(i8::try_from(v).map_err(|_| Error::Overflow("Weyl matrix entry"))?);
                    }
                }
                let m = m.into_boxed_slice();
                if index.insert(m.clone(), ()).is_none() {
                    out.push(WeylElement {
                        rank: l,
                        matrix: m,
                        sign: -sign,
                    });
                }
            }
        }
        Ok(out)
    }
}
