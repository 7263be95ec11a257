//! Truncated q-expansions, the Dedekind eta function and lattice theta
//! functions.
//!
//! A [`QSeries`] is `q^offset · Σ_{n=0}^{depth} c_n q^n + O(q^{offset+depth+1})`
//! with an exact rational offset and exact rational coefficients. Binary
//! operations keep only the exponents both operands determine.

use std::f64::consts::PI;
use std::ops::{Mul, Neg};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::latticekit::{quotient, CosetSystem, Lattice};
use crate::linalg::{self, frac, int, Rat};
use crate::rootsys::WeightVec;

/// A numeric value together with an estimate of the truncation error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub tail_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    offset: Rat,
    coeffs: Vec<Rat>,
}

fn check_tau(tau: Complex64) -> Result<()> {
    if tau.im > 0.0 && tau.im.is_finite() && tau.re.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTau(tau.im))
    }
}

/// `exp(2πiτx)` for a rational exponent.
pub fn q_power(tau: Complex64, x: &Rat) -> Complex64 {
    (Complex64::new(0.0, 2.0 * PI) * tau * linalg::to_f64(x)).exp()
}

impl QSeries {
    pub fn new(offset: Rat, coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty(), "a series covers at least its leading exponent");
        QSeries { offset, coeffs }
    }

    pub fn from_ints(offset: Rat, coeffs: &[i64]) -> Self {
        Self::new(offset, coeffs.iter().map(|&c| int(c as i128)).collect())
    }

    pub fn constant(c: Rat, depth: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); depth + 1];
        coeffs[0] = c;
        Self::new(Rat::zero(), coeffs)
    }

    pub fn one(depth: usize) -> Self {
        Self::constant(Rat::one(), depth)
    }

    /// The identically zero series, valid to `depth`.
    pub fn zero(depth: usize) -> Self {
        Self::new(Rat::zero(), vec![Rat::zero(); depth + 1])
    }

    pub fn offset(&self) -> Rat {
        self.offset
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn depth(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Rat {
        self.coeffs.get(n).copied().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Integer coefficients, if all are integral and fit.
    pub fn int_coeffs(&self) -> Option<Vec<i64>> {
        self.coeffs
            .iter()
            .map(|c| if c.is_integer() { i64::try_from(*c.numer()).ok() } else { None })
            .collect()
    }

    /// Exponent of the first nonzero coefficient.
    pub fn leading_exponent(&self) -> Option<Rat> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|n| self.offset + int(n as i128))
    }

    pub fn truncate(&self, depth: usize) -> Self {
        Self::new(self.offset, self.coeffs[..=depth.min(self.depth())].to_vec())
    }

    /// Multiplies by `q^shift`.
    pub fn shift(&self, shift: Rat) -> Self {
        Self::new(self.offset + shift, self.coeffs.clone())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.offset, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Drops leading zero coefficients, moving the offset up.
    pub fn normalized(&self) -> Self {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(0) | None => self.clone(),
            Some(n) => Self::new(self.offset + int(n as i128), self.coeffs[n..].to_vec()),
        }
    }

    pub fn try_add(&self, other: &QSeries) -> Result<QSeries> {
        let gap = other.offset - self.offset;
        if !gap.is_integer() {
            return Err(Error::IncompatibleOffsets(self.offset.to_string(), other.offset.to_string()));
        }
        let (lo, hi, gap) = if gap.is_negative() { (other, self, -gap) } else { (self, other, gap) };
        let gap = *gap.numer() as i64;
        // top exponent both series determine, relative to lo.offset
        let top = (lo.depth() as i64).min(gap + hi.depth() as i64);
        let mut coeffs = vec![Rat::zero(); (top + 1) as usize];
        for (n, c) in coeffs.iter_mut().enumerate() {
            let n = n as i64;
            *c = lo.coeff(n as usize);
            if n >= gap {
                *c += hi.coeff((n - gap) as usize);
            }
        }
        Ok(QSeries::new(lo.offset, coeffs))
    }

    /// Multiplicative inverse of a series with nonzero leading coefficient.
    pub fn reciprocal(&self) -> Result<QSeries> {
        let c0 = self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NotAUnit);
        }
        let d = self.depth();
        let mut inv = vec![Rat::zero(); d + 1];
        inv[0] = Rat::one() / c0;
        for n in 1..=d {
            let s = (1..=n).fold(Rat::zero(), |acc, j| acc + self.coeffs[j] * inv[n - j]);
            inv[n] = -s / c0;
        }
        Ok(QSeries::new(-self.offset, inv))
    }

    pub fn pow(&self, n: i64) -> Result<QSeries> {
        let base = if n < 0 { self.reciprocal()? } else { self.clone() };
        let mut acc = QSeries::one(self.depth());
        for _ in 0..n.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Numeric value at `τ`, with a tail estimate
    /// `max|c_n| · |q|^{offset+depth+1} / (1 − |q|)`.
    pub fn evaluate(&self, tau: Complex64) -> Result<Evaluation> {
        check_tau(tau)?;
        let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
        let mut value = Complex64::new(0.0, 0.0);
        let mut qn = q_power(tau, &self.offset);
        for c in &self.coeffs {
            if !c.is_zero() {
                value += qn * linalg::to_f64(c);
            }
            qn *= q;
        }
        let cmax = self.coeffs.iter().map(|c| linalg::to_f64(c).abs()).fold(0.0, f64::max);
        let aq = q.norm();
        let tail = cmax * q_power(tau, &(self.offset + int(self.depth() as i128 + 1))).norm() / (1.0 - aq);
        Ok(Evaluation {
            value,
            tail_bound: tail,
        })
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        let d = self.depth().min(rhs.depth());
        let mut coeffs = vec![Rat::zero(); d + 1];
        for (i, a) in self.coeffs.iter().take(d + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(d + 1 - i).enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QSeries::new(self.offset + rhs.offset, coeffs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        self.scale(&-Rat::one())
    }
}

/// `Π_{n≥1} (1 − q^n)` to the given depth.
pub fn euler_product(depth: usize) -> QSeries {
    let mut coeffs = vec![0i64; depth + 1];
    coeffs[0] = 1;
    for n in 1..=depth {
        for m in (n..=depth).rev() {
            coeffs[m] -= coeffs[m - n];
        }
    }
    QSeries::from_ints(Rat::zero(), &coeffs)
}

/// `η(q) = q^{1/24} Π_{n≥1} (1 − q^n)`.
pub fn eta_series(depth: usize) -> QSeries {
    euler_product(depth).shift(linalg::rat(1, 24))
}

/// Coset vectors `x ∈ L + shift` with `(x,x)/2 ≤ radius`, as
/// (weight coordinates, half norm).
fn coset_vectors(lattice: &Lattice, shift: &WeightVec, radius: &Rat) -> Result<Vec<(WeightVec, Rat)>> {
    if !lattice.is_positive_definite() {
        return Err(Error::NotPositiveDefinite(lattice.label().to_string()));
    }
    let l = lattice.rank();
    let gram_inv = linalg::inverse(lattice.gram()).expect("definite Gram matrix is invertible");
    let base = lattice.coords_of(shift);
    // |c_i|^2 <= (c^T G c) (G^{-1})_ii by Cauchy-Schwarz in the G-metric
    let two_r = linalg::to_f64(&(int(2) * radius));
    let ranges: Vec<(i64, i64)> = (0..l)
        .map(|i| {
            let b = (two_r * linalg::to_f64(&gram_inv[i][i])).max(0.0).sqrt() + 1e-9;
            let c = linalg::to_f64(&base[i]);
            ((-b - c).ceil() as i64, (b - c).floor() as i64)
        })
        .collect();
    let mut out = Vec::new();
    let mut n: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    if ranges.iter().any(|r| r.0 > r.1) {
        return Ok(out);
    }
    loop {
        let c: Vec<Rat> = base.iter().zip(&n).map(|(b, &x)| b + int(x as i128)).collect();
        let half = linalg::bilinear(&c, lattice.gram(), &c) / int(2);
        if half <= *radius {
            out.push((WeightVec::new(linalg::vec_mat(&c, lattice.basis())), half));
        }
        // odometer
        let mut i = 0;
        loop {
            if i == l {
                return Ok(out);
            }
            if n[i] < ranges[i].1 {
                n[i] += 1;
                break;
            }
            n[i] = ranges[i].0;
            i += 1;
        }
    }
}

/// `θ_{L+λ}(h, τ) = Σ_{x ∈ L+λ} e^{2πi(h,x)} q^{(x,x)/2}`, summed over all
/// coset vectors with `(x,x)/2 ≤ radius`.
///
/// `h` is given by complex coordinates in the fundamental-weight basis; the
/// pairing uses the lattice's own (scaled) form.
pub fn theta_eval(
    lattice: &Lattice,
    shift: &WeightVec,
    h: &[Complex64],
    tau: Complex64,
    radius: &Rat,
) -> Result<Evaluation> {
    check_tau(tau)?;
    let l = lattice.rank();
    if h.len() != l {
        return Err(Error::DimensionMismatch { expected: l, got: h.len() });
    }
    let vectors = coset_vectors(lattice, shift, radius)?;
    let s = linalg::to_f64(&lattice.scale());
    let form: Vec<Vec<f64>> = lattice.form().iter().map(|r| r.iter().map(linalg::to_f64).collect()).collect();
    // s F h, so that (h, x) = x · fh
    let fh: Vec<Complex64> = (0..l)
        .map(|j| (0..l).map(|i| h[i] * form[i][j] * s).sum())
        .collect();
    let mut value = Complex64::new(0.0, 0.0);
    for (x, half) in &vectors {
        let pairing: Complex64 = x.coords().iter().zip(&fh).map(|(xi, f)| f * linalg::to_f64(xi)).sum();
        value += (Complex64::new(0.0, 2.0 * PI) * pairing).exp() * q_power(tau, half);
    }

    // shell-by-shell bound on what the cutoff dropped
    let gram_inv = linalg::inverse(lattice.gram()).expect("definite");
    let box_count = |r: f64| -> f64 {
        (0..l)
            .map(|i| 2.0 * (2.0 * r * linalg::to_f64(&gram_inv[i][i])).sqrt() + 1.0)
            .product()
    };
    let im_h: Vec<f64> = h.iter().map(|z| z.im).collect();
    let h_norm = (0..l)
        .map(|i| (0..l).map(|j| im_h[i] * form[i][j] * im_h[j]).sum::<f64>())
        .sum::<f64>()
        .max(0.0)
        .sqrt()
        * s.sqrt();
    let r0 = linalg::to_f64(radius);
    let mut tail = 0.0;
    for m in 0..400 {
        let r = r0 + m as f64;
        let term = box_count(r + 1.0)
            * (-2.0 * PI * tau.im * r).exp()
            * (2.0 * PI * h_norm * (2.0 * (r + 1.0)).sqrt()).exp();
        tail += term;
        if term < 1e-300 || (m > 5 && term < tail * 1e-17) {
            break;
        }
    }
    Ok(Evaluation {
        value,
        tail_bound: tail,
    })
}

/// The theta function of `L + shift` at `h = 0` as a q-series to `depth`.
///
/// Requires all half norms in the coset to differ by integers (true when `L`
/// is even and `shift ∈ L°`).
pub fn theta_series(lattice: &Lattice, shift: &WeightVec, depth: usize) -> Result<QSeries> {
    // find the minimal half norm first
    let mut radius = int(1);
    let min = loop {
        let v = coset_vectors(lattice, shift, &radius)?;
        if let Some(m) = v.iter().map(|(_, h)| *h).min() {
            break m;
        }
        radius *= int(2);
    };
    let vectors = coset_vectors(lattice, shift, &(min + int(depth as i128)))?;
    let mut coeffs = vec![Rat::zero(); depth + 1];
    for (_, half) in vectors {
        let gap = half - min;
        if !gap.is_integer() {
            return Err(Error::IncompatibleOffsets(min.to_string(), half.to_string()));
        }
        coeffs[*gap.numer() as usize] += Rat::one();
    }
    Ok(QSeries::new(min, coeffs))
}

/// Modular S-matrix of an even lattice, indexed by the canonical
/// representatives of `L°/L`.
#[derive(Clone, Debug)]
pub struct LatticeSMatrix {
    pub cosets: CosetSystem,
    /// `−(λ, λ')` reduced to `[0, 1)`.
    pub phases: Vec<Vec<Rat>>,
    pub matrix: CMatrix,
}

pub fn lattice_s_matrix(lattice: &Lattice) -> Result<LatticeSMatrix> {
    if !lattice.is_even() {
        return Err(Error::OddLattice(lattice.label().to_string()));
    }
    if !lattice.is_positive_definite() {
        return Err(Error::NotPositiveDefinite(lattice.label().to_string()));
    }
    let cosets = quotient(&lattice.dual(), lattice)?;
    let n = cosets.order();
    let phases: Vec<Vec<Rat>> = cosets
        .reps()
        .iter()
        .map(|a| cosets.reps().iter().map(|b| frac(&-lattice.inner(a, b))).collect())
        .collect();
    let norm = 1.0 / (n as f64).sqrt();
    let matrix = CMatrix::from_fn(n, |i, j| {
        Complex64::from_polar(norm, 2.0 * PI * linalg::to_f64(&phases[i][j]))
    });
    Ok(LatticeSMatrix {
        cosets,
        phases,
        matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latticekit::standard_lattices;
    use crate::linalg::rat;
    use crate::rootsys::{build_algebra, Series};

    #[test]
    fn eta_leading_terms() {
        let e = eta_series(8);
        assert_eq!(e.offset(), rat(1, 24));
        assert_eq!(e.int_coeffs().unwrap(), vec![1, -1, -1, 0, 0, 1, 0, 1, 0]);
    }

    #[test]
    fn eta_times_its_inverse_is_one() {
        let e = eta_series(30);
        let p = &e * &e.reciprocal().unwrap();
        assert_eq!(p, QSeries::one(30));
    }

    #[test]
    fn constant_evaluates_to_itself() {
        let v = QSeries::one(5).evaluate(Complex64::new(0.3, 0.7)).unwrap();
        assert!((v.value - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn geometric_series_at_i() {
        let s = QSeries::from_ints(Rat::zero(), &vec![1; 101]);
        let v = s.evaluate(Complex64::new(0.0, 1.0)).unwrap();
        let exact = 1.0 / (1.0 - (-2.0 * PI).exp());
        assert!((v.value.re - exact).abs() < 1e-10);
        assert!(v.tail_bound < 1e-200);
    }

    #[test]
    fn bad_tau_is_rejected() {
        assert!(matches!(QSeries::one(1).evaluate(Complex64::new(1.0, 0.0)), Err(Error::InvalidTau(_))));
        assert!(matches!(QSeries::one(1).evaluate(Complex64::new(1.0, -1.0)), Err(Error::InvalidTau(_))));
    }

    #[test]
    fn offsets_must_align_for_addition() {
        let a = QSeries::one(3);
        let b = QSeries::one(3).shift(rat(1, 2));
        assert!(a.try_add(&b).is_err());
        let c = a.try_add(&QSeries::one(3).shift(int(2))).unwrap();
        assert_eq!(c.int_coeffs().unwrap(), vec![1, 0, 1, 0]);
    }

    #[test]
    fn reciprocal_needs_a_unit() {
        let s = QSeries::from_ints(Rat::zero(), &[0, 1, 2]);
        assert_eq!(s.reciprocal(), Err(Error::NotAUnit));
    }

    #[test]
    fn a1_level_one_theta_at_i() {
        let a1 = build_algebra(Series::A, 1).unwrap();
        let q = standard_lattices(&a1).root;
        let v = theta_eval(&q, &WeightVec::zero(1), &[Complex64::new(0.0, 0.0)], Complex64::new(0.0, 1.0), &int(50))
            .unwrap();
        let direct: f64 = (-30i32..=30).map(|n| (-2.0 * PI * f64::from(n * n)).exp()).sum();
        assert!((v.value.re - direct).abs() < 1e-14);
        assert!((v.value.re - 1.003_734_885).abs() < 1e-9);
    }

    #[test]
    fn integral_phase_insertions_are_invisible() {
        let a2 = build_algebra(Series::A, 2).unwrap();
        let q = standard_lattices(&a2).root;
        let tau = Complex64::new(0.2, 0.9);
        let shift = WeightVec::fundamental(2, 0);
        // h = ρ pairs integrally with Q
        let h: Vec<Complex64> = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        let a = theta_eval(&q, &WeightVec::zero(2), &h, tau, &int(12)).unwrap();
        let b = theta_eval(&q, &WeightVec::zero(2), &[Complex64::new(0.0, 0.0); 2], tau, &int(12)).unwrap();
        assert!((a.value - b.value).norm() < 1e-12);
        let series = theta_series(&q, &shift, 6).unwrap();
        assert_eq!(series.offset(), rat(1, 3));
        assert_eq!(series.coeff(0), int(3));
    }

    #[test]
    fn lattice_s_of_a1_level_two() {
        let a1 = build_algebra(Series::A, 1).unwrap();
        let l = standard_lattices(&a1).long_root.scaled(int(2)).unwrap();
        let s = lattice_s_matrix(&l).unwrap();
        assert_eq!(s.matrix.dim(), 4);
        for i in 0..4 {
            for j in 0..4 {
                assert!((s.matrix[(i, j)].norm() - 0.5).abs() < 1e-15);
            }
            assert!((s.matrix[(0, i)] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        }
        assert!(s.matrix.symmetry_defect() < 1e-15);
        assert!((&s.matrix * &s.matrix.conj()).max_abs_diff(&CMatrix::identity(4)) < 1e-14);
    }

    #[test]
    fn odd_lattices_have_no_s_matrix() {
        let a1 = build_algebra(Series::A, 1).unwrap();
        let p = standard_lattices(&a1).weight;
        assert!(matches!(lattice_s_matrix(&p), Err(Error::OddLattice(_))));
    }
}
