//! Level-k data of the untwisted affine algebra: integrable highest weights,
//! central charge, conformal weights, the Kac–Peterson S-matrix, weight
//! multiplicities and characters.
//!
//! Kac's normalization carries an extra factor `e^{2πiku}` in the character;
//! it is dropped here. The Kac–Peterson S computed below coincides with the
//! S-matrix of the affine vertex operator algebra, so it is only computed
//! once.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;

use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::latticekit::{lattice_index, standard_lattices};
use crate::linalg::{self, int, IntMatrix, Rat};
use crate::qseries::{q_power, Evaluation};
use crate::rootsys::{AlgebraDescriptor, WeightVec};

/// Upper bound on stored (dominant weight, depth) pairs in a [`MultTable`].
pub const MULT_BUDGET: u64 = 4_000_000;

/// A dominant integral weight `Λ` with `⟨Λ, θ⟩ ≤ k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineLabel {
    coords: Vec<i64>,
    level: i64,
}

impl AffineLabel {
    pub fn new(alg: &AlgebraDescriptor, weight: &WeightVec, level: i64) -> Result<Self> {
        let coords = weight
            .to_ints()
            .ok_or_else(|| Error::NonIntegralWeight(weight.to_string()))?;
        Self::from_ints(alg, &coords, level)
    }

    pub fn from_ints(alg: &AlgebraDescriptor, coords: &[i64], level: i64) -> Result<Self> {
        if coords.len() != alg.rank() {
            return Err(Error::DimensionMismatch {
                expected: alg.rank(),
                got: coords.len(),
            });
        }
        let pairing: i64 = coords.iter().zip(alg.comarks()).map(|(a, c)| a * c).sum();
        if level < 0 || coords.iter().any(|&c| c < 0) || pairing > level {
            return Err(Error::NotInAlcove {
                weight: format!("{coords:?}"),
                level,
            });
        }
        Ok(AffineLabel {
            coords: coords.to_vec(),
            level,
        })
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn weight(&self) -> WeightVec {
        WeightVec::from_ints(&self.coords)
    }

    pub fn level(&self) -> i64 {
        self.level
    }
}

/// Dominant integral weights with `Σ λ_i ⟨Λ_i,θ⟩ ≤ bound`, lexicographic.
fn dominant_up_to(comarks: &[i64], bound: i64) -> Vec<Vec<i64>> {
    fn rec(comarks: &[i64], left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == comarks.len() {
            out.push(cur.clone());
            return;
        }
        let c = comarks[cur.len()];
        for a in 0..=left / c {
            cur.push(a);
            rec(comarks, left - a * c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if bound >= 0 {
        rec(comarks, bound, &mut Vec::new(), &mut out);
    }
    out
}

/// `P_+^k`, lexicographically ordered.
pub fn dominant_weights(alg: &AlgebraDescriptor, k: i64) -> Vec<AffineLabel> {
    dominant_up_to(alg.comarks(), k)
        .into_iter()
        .map(|coords| AffineLabel { coords, level: k })
        .collect()
}

/// `k·dim g / (k + h∨)`.
pub fn central_charge(alg: &AlgebraDescriptor, k: i64) -> Rat {
    int(k as i128 * alg.dim_g() as i128) / int((k + alg.dual_coxeter()) as i128)
}

/// `⟨Λ+2ρ, Λ⟩ / 2(k+h∨)`.
pub fn conformal_weight(alg: &AlgebraDescriptor, k: i64, weight: &WeightVec) -> Rat {
    let two_rho = alg.rho().scale(&int(2));
    alg.inner_unchecked(&(weight + &two_rho), weight) / int(2 * (k + alg.dual_coxeter()) as i128)
}

/// Kac–Peterson S-matrix on `P_+^k`.
#[derive(Clone, Debug)]
pub struct KacPetersonS {
    pub labels: Vec<AffineLabel>,
    pub matrix: CMatrix,
}

impl KacPetersonS {
    pub fn index_of(&self, coords: &[i64]) -> Option<usize> {
        self.labels.iter().position(|l| l.coords() == coords)
    }
}

/// Integer form `D·F` with `D` the common denominator of the Gram matrix.
pub(crate) fn scaled_form(alg: &AlgebraDescriptor) -> (i64, IntMatrix) {
    let d = linalg::common_denominator(alg.gram());
    let fd = linalg::to_int_matrix(&linalg::scale_matrix(alg.gram(), &int(d)))
        .expect("scaled Gram matrix is integral");
    (d as i64, fd)
}

fn ip(fd: &IntMatrix, x: &[i64], y: &[i64]) -> i64 {
    let mut acc = 0;
    for (i, xi) in x.iter().enumerate() {
        if *xi != 0 {
            acc += xi * fd[i].iter().zip(y).map(|(f, yj)| f * yj).sum::<i64>();
        }
    }
    acc
}

/// `S_{Λ,Λ'} = i^{|Δ+|} |P/(k+h∨)Q_L|^{-1/2} Σ_w (−1)^{l(w)} e^{−2πi⟨w(Λ+ρ), Λ'+ρ⟩/(k+h∨)}`.
///
/// Phases are accumulated exactly as residues modulo `D(k+h∨)` before any
/// floating-point evaluation.
pub fn kac_peterson_s(alg: &AlgebraDescriptor, k: i64) -> Result<KacPetersonS> {
    let weyl = alg.weyl_group()?;
    let labels = dominant_weights(alg, k);
    let shifted = k + alg.dual_coxeter();
    let std = standard_lattices(alg);
    let index = lattice_index(&std.weight, &std.long_root.multiple(int(shifted as i128))?)?;
    let (d, fd) = scaled_form(alg);
    let modulus = d * shifted;

    let plus_rho: Vec<Vec<i64>> = labels
        .iter()
        .map(|l| l.coords().iter().map(|c| c + 1).collect())
        .collect();
    // F·(Λ'+ρ) in scaled integers, reused for every w
    let paired: Vec<Vec<i64>> = plus_rho
        .iter()
        .map(|v| (0..alg.rank()).map(|i| fd[i].iter().zip(v).map(|(f, x)| f * x).sum()).collect())
        .collect();

    let prefactor = Complex64::i().powu(alg.positive_roots().len() as u32) / (index as f64).sqrt();
    let n = labels.len();
    let mut matrix = CMatrix::zeros(n);
    for a in 0..n {
        let images: Vec<(Vec<i64>, i8)> = weyl.iter().map(|w| (w.apply_ints(&plus_rho[a]), w.sign())).collect();
        for b in a..n {
            let mut counts: HashMap<i64, i64> = HashMap::new();
            for (img, sign) in &images {
                let r: i64 = img.iter().zip(&paired[b]).map(|(x, y)| x * y).sum();
                *counts.entry(r.mod_floor(&modulus)).or_default() += i64::from(*sign);
            }
            let mut sum = Complex64::new(0.0, 0.0);
            for (r, c) in counts {
                if c != 0 {
                    sum += Complex64::from_polar(c as f64, -2.0 * PI * r as f64 / modulus as f64);
                }
            }
            matrix[(a, b)] = prefactor * sum;
            matrix[(b, a)] = prefactor * sum;
        }
    }
    Ok(KacPetersonS { labels, matrix })
}

/// Multiplicities of the h-weights of `L(k, Λ)` by energy depth.
///
/// Only dominant weights are stored; any other weight is looked up through
/// its dominant Weyl conjugate.
#[derive(Clone, Debug)]
pub struct MultTable {
    label: AffineLabel,
    max_depth: usize,
    cartan: IntMatrix,
    // P/Q class test: λ·adj(A) ≡ 0 mod det(A)
    cartan_adj: IntMatrix,
    cartan_det: i64,
    layers: Vec<HashMap<Vec<i64>, i64>>,
}

impl MultTable {
    pub fn label(&self) -> &AffineLabel {
        &self.label
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    fn to_dominant(&self, v: &[i64]) -> Vec<i64> {
        let mut w = v.to_vec();
        while let Some(i) = w.iter().position(|&c| c < 0) {
            let c = w[i];
            for (j, x) in w.iter_mut().enumerate() {
                *x -= c * self.cartan[i][j];
            }
        }
        w
    }

    fn in_root_coset(&self, v: &[i64]) -> bool {
        let n = v.len();
        (0..n).all(|j| {
            let s: i64 = (0..n).map(|i| (v[i] - self.label.coords[i]) * self.cartan_adj[i][j]).sum();
            s % self.cartan_det == 0
        })
    }

    /// Multiplicity of the weight `λ` (integer coordinates) at depth `m`.
    ///
    /// Panics if `m` exceeds the table depth.
    pub fn mult(&self, weight: &[i64], m: usize) -> i64 {
        assert!(m <= self.max_depth, "depth {m} beyond table depth {}", self.max_depth);
        if !self.in_root_coset(weight) {
            return 0;
        }
        let dom = self.to_dominant(weight);
        self.layers[m].get(&dom).copied().unwrap_or(0)
    }

    /// Dominant weights with nonzero multiplicity at depth `m`, sorted.
    pub fn dominant_entries(&self, m: usize) -> Vec<(Vec<i64>, i64)> {
        let mut v: Vec<(Vec<i64>, i64)> = self.layers[m]
            .iter()
            .filter(|(_, &c)| c != 0)
            .map(|(w, &c)| (w.clone(), c))
            .collect();
        v.sort();
        v
    }

    /// `χ_Λ(h, τ) = Σ mult(λ, m) e^{2πi⟨λ,h⟩} q^{n_Λ + m − c/24}`.
    pub fn character(&self, alg: &AlgebraDescriptor, h: &[Complex64], tau: Complex64) -> Result<Evaluation> {
        if tau.im <= 0.0 {
            return Err(Error::InvalidTau(tau.im));
        }
        let l = alg.rank();
        if h.len() != l {
            return Err(Error::DimensionMismatch { expected: l, got: h.len() });
        }
        let k = self.label.level;
        let lead = conformal_weight(alg, k, &self.label.weight()) - central_charge(alg, k) / int(24);
        let form: Vec<Vec<f64>> = alg.gram().iter().map(|r| r.iter().map(linalg::to_f64).collect()).collect();
        let fh: Vec<Complex64> = (0..l).map(|j| (0..l).map(|i| h[i] * form[i][j]).sum()).collect();
        let trivial_h = h.iter().all(|z| z.norm() == 0.0);

        let mut value = Complex64::new(0.0, 0.0);
        let mut layer_size = vec![0.0; self.max_depth + 1];
        for m in 0..=self.max_depth {
            let qm = q_power(tau, &(lead + int(m as i128)));
            let mut layer = Complex64::new(0.0, 0.0);
            let mut layer_abs = 0.0;
            for (dom, c) in self.dominant_entries(m) {
                let orbit_sum: Complex64 = if trivial_h {
                    Complex64::new(alg.orbit(&dom).len() as f64, 0.0)
                } else {
                    alg.orbit(&dom)
                        .iter()
                        .map(|mu| {
                            let p: Complex64 = mu.iter().zip(&fh).map(|(x, f)| f * *x as f64).sum();
                            (Complex64::new(0.0, 2.0 * PI) * p).exp()
                        })
                        .sum()
                };
                layer += orbit_sum * c as f64;
                layer_abs += orbit_sum.norm() * c as f64;
            }
            value += layer * qm;
            layer_size[m] = layer_abs * qm.norm();
        }
        let tail = tail_estimate(&layer_size);
        Ok(Evaluation {
            value,
            tail_bound: tail,
        })
    }
}

/// Geometric extrapolation of the last two layer magnitudes.
pub(crate) fn tail_estimate(layers: &[f64]) -> f64 {
    let n = layers.len();
    if n < 2 {
        return f64::INFINITY;
    }
    let (prev, last) = (layers[n - 2], layers[n - 1]);
    if last == 0.0 {
        return 0.0;
    }
    let ratio = if prev > 0.0 { last / prev } else { 1.0 };
    if ratio >= 1.0 {
        f64::INFINITY
    } else {
        last * ratio / (1.0 - ratio)
    }
}

fn divisor_sums(n: usize) -> Vec<i64> {
    let mut s = vec![0i64; n + 1];
    for d in 1..=n {
        for m in (d..=n).step_by(d) {
            s[m] += d as i64;
        }
    }
    s
}

/// Affine Freudenthal recursion for `L(k, Λ)` down to `max_depth`.
///
/// For `μ̂ = λ + kΛ_0 − mδ` the recursion reads
/// `(|Λ̂+ρ̂|² − |μ̂+ρ̂|²) mult(μ̂) = 2 Σ_{α̂>0} mult(α̂) Σ_{j≥1} ⟨μ̂+jα̂, α̂⟩ mult(μ̂+jα̂)`
/// over real roots `α+nδ` (multiplicity 1) and imaginary roots `nδ`
/// (multiplicity `l`). Every term is carried in integers scaled by the
/// common denominator of the Gram matrix.
pub fn weight_multiplicities(
    alg: &AlgebraDescriptor,
    k: i64,
    label: &AffineLabel,
    max_depth: usize,
) -> Result<MultTable> {
    let l = alg.rank();
    let (d, fd) = scaled_form(alg);
    let h = alg.dual_coxeter();
    let lam = label.coords().to_vec();
    let plus_rho = |v: &[i64]| -> Vec<i64> { v.iter().map(|x| x + 1).collect() };
    let top = ip(&fd, &plus_rho(&lam), &plus_rho(&lam));
    // D·(|Λ̂+ρ̂|² − |μ̂+ρ̂|²)
    let gap = |v: &[i64], m: usize| -> i64 {
        let p = plus_rho(v);
        top - ip(&fd, &p, &p) + 2 * m as i64 * d * (k + h)
    };

    let cartan = alg.cartan_matrix().clone();
    let a_rat = linalg::int_to_rat(&cartan);
    let det = linalg::determinant(&a_rat);
    let inv = linalg::inverse(&a_rat).expect("Cartan matrix is invertible");
    let cartan_adj = linalg::to_int_matrix(&linalg::scale_matrix(&inv, &det)).expect("adjugate is integral");
    let mut table = MultTable {
        label: label.clone(),
        max_depth,
        cartan,
        cartan_adj,
        cartan_det: *det.numer() as i64,
        layers: Vec::with_capacity(max_depth + 1),
    };

    let mut roots: Vec<(Vec<i64>, bool)> = Vec::new();
    for r in alg.positive_roots() {
        let c = r.to_ints().expect("roots are integral weights");
        roots.push((c.iter().map(|x| -x).collect(), false));
        roots.push((c, true));
    }
    let root_norms: Vec<i64> = roots.iter().map(|(r, _)| ip(&fd, r, r)).collect();
    let sigma = divisor_sums(max_depth);
    let two_kh = 2 * (k + h) as i128;
    let top_rat = alg.inner_unchecked(&WeightVec::from_ints(&plus_rho(&lam)), &WeightVec::from_ints(&plus_rho(&lam)));
    let mut stored: u64 = 0;

    for m in 0..=max_depth {
        // candidates: dominant λ ∈ Λ+Q with |λ+ρ|² ≤ |Λ+ρ|² + 2m(k+h∨);
        // ⟨λ+ρ,θ⟩² ≤ 2|λ+ρ|² bounds ⟨λ,θ⟩
        let radius = top_rat + int(two_kh * m as i128);
        let theta_bound = (2.0 * linalg::to_f64(&radius)).sqrt().floor() as i64 - (h - 1);
        let mut cands: Vec<(i64, Vec<i64>)> = dominant_up_to(alg.comarks(), theta_bound + 1)
            .into_iter()
            .filter(|v| table.in_root_coset(v))
            .filter_map(|v| {
                let g = gap(&v, m);
                if g > 0 || (m == 0 && v == lam) {
                    let p = plus_rho(&v);
                    Some((ip(&fd, &p, &p), v))
                } else {
                    None
                }
            })
            .collect();
        stored += cands.len() as u64;
        if stored > MULT_BUDGET {
            return Err(Error::DepthBudget {
                needed: stored * (max_depth as u64 + 1) / (m as u64 + 1),
                budget: MULT_BUDGET,
            });
        }
        // higher |λ+ρ|² first: same-depth terms only reference those
        cands.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        table.layers.push(HashMap::with_capacity(cands.len()));

        for (_, v) in cands {
            if m == 0 && v == lam {
                table.layers[0].insert(v, 1);
                continue;
            }
            let lookup = |t: &MultTable, w: &[i64], depth: usize| -> i64 {
                let dom = t.to_dominant(w);
                t.layers[depth].get(&dom).copied().unwrap_or(0)
            };
            let mut rhs: i128 = 0;
            for ((alpha, positive), &anorm) in roots.iter().zip(&root_norms) {
                // ⟨λ,α⟩ scaled
                let base = ip(&fd, &v, alpha);
                for n in 0..=m {
                    if n == 0 && !*positive {
                        continue;
                    }
                    let mut j = 1usize;
                    loop {
                        if j * n > m {
                            break;
                        }
                        let depth = m - j * n;
                        let mu: Vec<i64> = v.iter().zip(alpha).map(|(x, a)| x + j as i64 * a).collect();
                        let g = gap(&mu, depth);
                        let is_top = depth == 0 && mu == lam;
                        if g < 0 || (g == 0 && !is_top) {
                            break;
                        }
                        let c = if is_top { 1 } else { lookup(&table, &mu, depth) };
                        if c != 0 {
                            let pairing = base + j as i64 * anorm + d * k * n as i64;
                            rhs += pairing as i128 * c as i128;
                        }
                        if is_top {
                            break;
                        }
                        j += 1;
                    }
                }
            }
            rhs *= 2;
            for s in 1..=m {
                let c = lookup(&table, &v, m - s);
                if c != 0 {
                    rhs += 2 * (l as i128) * (d as i128) * (k as i128) * sigma[s] as i128 * c as i128;
                }
            }
            let g = gap(&v, m) as i128;
            if rhs % g != 0 {
                return Err(Error::Overflow("non-integral Freudenthal quotient"));
            }
            let mult = i64::try_from(rhs / g).map_err(|_| Error::Overflow("weight multiplicity"))?;
            if mult != 0 {
                table.layers[m].insert(v, mult);
            }
        }
    }
    Ok(table)
}

/// `χ_Λ(h, τ)` summed to `max_depth`.
pub fn affine_character_eval(
    alg: &AlgebraDescriptor,
    k: i64,
    label: &AffineLabel,
    h: &[Complex64],
    tau: Complex64,
    max_depth: usize,
) -> Result<Evaluation> {
    if tau.im <= 0.0 {
        return Err(Error::InvalidTau(tau.im));
    }
    weight_multiplicities(alg, k, label, max_depth)?.character(alg, h, tau)
}

/// Largest `|χ_Λ(h/τ, −1/τ) − e^{πik⟨h,h⟩/τ} Σ_{Λ'} S_{Λ,Λ'} χ_{Λ'}(h, τ)|`
/// over `P_+^k`, with the summed tail estimates of both sides.
pub fn affine_s_transform_residual(
    alg: &AlgebraDescriptor,
    k: i64,
    h: &[Complex64],
    tau: Complex64,
    max_depth: usize,
) -> Result<(f64, f64)> {
    if tau.im <= 0.0 {
        return Err(Error::InvalidTau(tau.im));
    }
    let s = kac_peterson_s(alg, k)?;
    let tau_s = -Complex64::new(1.0, 0.0) / tau;
    let h_s: Vec<Complex64> = h.iter().map(|z| z / tau).collect();
    let prefactor = (Complex64::new(0.0, PI * k as f64) * complex_norm(alg, h) / tau).exp();
    let mut at_tau = Vec::new();
    let mut at_s = Vec::new();
    for label in &s.labels {
        let t = weight_multiplicities(alg, k, label, max_depth)?;
        at_tau.push(t.character(alg, h, tau)?);
        at_s.push(t.character(alg, &h_s, tau_s)?);
    }
    let n = s.labels.len();
    let mut worst: f64 = 0.0;
    let mut tail: f64 = 0.0;
    for a in 0..n {
        let rhs: Complex64 = prefactor * (0..n).map(|b| s.matrix[(a, b)] * at_tau[b].value).sum::<Complex64>();
        worst = worst.max((at_s[a].value - rhs).norm());
        let t = at_s[a].tail_bound
            + prefactor.norm() * (0..n).map(|b| s.matrix[(a, b)].norm() * at_tau[b].tail_bound).sum::<f64>();
        tail = tail.max(t);
    }
    Ok((worst, tail))
}

/// Complex coordinates of a rational weight.
pub fn complexify(w: &WeightVec) -> Vec<Complex64> {
    w.coords().iter().map(|c| Complex64::new(linalg::to_f64(c), 0.0)).collect()
}

/// `⟨h, h⟩` for complex coordinates (bilinear, not Hermitian).
pub fn complex_norm(alg: &AlgebraDescriptor, h: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::zero();
    for (i, hi) in h.iter().enumerate() {
        for (j, hj) in h.iter().enumerate() {
            acc += hi * hj * linalg::to_f64(&alg.gram()[i][j]);
        }
    }
    acc
}
