//! Full-rank lattices inside the weight space and their finite quotients.
//!
//! A [`Lattice`] is a set of integer combinations of rational basis rows
//! (weight coordinates) together with a positive form scale `s`: the
//! lattice's own inner product is `s·⟨x, y⟩`. Scaling by `k` models `√k·L`
//! without irrational coordinates.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, int, IntMatrix, Rat, RatMatrix};
use crate::rootsys::{AlgebraDescriptor, WeightVec};

#[derive(Clone, Debug)]
pub struct Lattice {
    basis: RatMatrix,
    basis_inv: RatMatrix,
    form: RatMatrix,
    scale: Rat,
    gram: RatMatrix,
    label: String,
}

impl Lattice {
    /// Lattice spanned by the rows of `basis`, with inner product
    /// `scale · xᵀ form y`.
    pub fn new(basis: RatMatrix, form: RatMatrix, scale: Rat, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if !scale.is_positive() {
            return Err(Error::NonPositiveScale(scale.to_string()));
        }
        let n = form.len();
        if basis.len() != n || basis.iter().any(|r| r.len() != n) {
            return Err(Error::DegenerateLattice(format!("{label}: basis is not square of size {n}")));
        }
        let basis_inv = linalg::inverse(&basis)
            .ok_or_else(|| Error::DegenerateLattice(format!("{label}: basis determinant is zero")))?;
        let gram = linalg::scale_matrix(
            &linalg::mat_mul(&linalg::mat_mul(&basis, &form), &linalg::transpose(&basis)),
            &scale,
        );
        if linalg::determinant(&gram).is_zero() {
            return Err(Error::DegenerateLattice(format!("{label}: Gram matrix is singular")));
        }
        Ok(Lattice {
            basis,
            basis_inv,
            form,
            scale,
            gram,
            label,
        })
    }

    pub fn from_weights(rows: &[WeightVec], form: &RatMatrix, scale: Rat, label: impl Into<String>) -> Result<Self> {
        Self::new(rows.iter().map(|w| w.coords().to_vec()).collect(), form.clone(), scale, label)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<WeightVec> {
        self.basis.iter().map(|r| WeightVec::new(r.clone())).collect()
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    pub fn form(&self) -> &RatMatrix {
        &self.form
    }

    pub fn scale(&self) -> Rat {
        self.scale
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// The lattice's own inner product of two weight-coordinate vectors.
    pub fn inner(&self, u: &WeightVec, v: &WeightVec) -> Rat {
        self.scale * linalg::bilinear(u.coords(), &self.form, v.coords())
    }

    pub fn det_gram(&self) -> Rat {
        linalg::determinant(&self.gram)
    }

    /// Coordinates of `v` with respect to the basis.
    pub fn coords_of(&self, v: &WeightVec) -> Vec<Rat> {
        linalg::vec_mat(v.coords(), &self.basis_inv)
    }

    pub fn int_coords_of(&self, v: &WeightVec) -> Option<Vec<i64>> {
        self.coords_of(v)
            .into_iter()
            .map(|c| if c.is_integer() { i64::try_from(*c.numer()).ok() } else { None })
            .collect()
    }

    pub fn contains(&self, v: &WeightVec) -> bool {
        self.coords_of(v).iter().all(|c| c.is_integer())
    }

    pub fn element(&self, coeffs: &[i64]) -> WeightVec {
        let c: Vec<Rat> = coeffs.iter().map(|&x| int(x as i128)).collect();
        WeightVec::new(linalg::vec_mat(&c, &self.basis))
    }

    pub fn is_integral(&self) -> bool {
        linalg::is_integral(&self.gram)
    }

    pub fn is_even(&self) -> bool {
        self.is_integral() && (0..self.rank()).all(|i| self.gram[i][i].numer() % 2 == 0)
    }

    /// Sylvester's criterion on the Gram matrix.
    pub fn is_positive_definite(&self) -> bool {
        (1..=self.rank()).all(|m| {
            let minor: RatMatrix = self.gram[..m].iter().map(|r| r[..m].to_vec()).collect();
            linalg::determinant(&minor).is_positive()
        })
    }

    /// `{x : s⟨x, L⟩ ⊆ Z}`.
    pub fn dual(&self) -> Lattice {
        let fbt = linalg::scale_matrix(
            &linalg::mat_mul(&self.form, &linalg::transpose(&self.basis)),
            &self.scale,
        );
        let basis = linalg::inverse(&fbt).expect("nondegenerate lattice has a dual");
        Lattice::new(basis, self.form.clone(), self.scale, format!("{}°", self.label))
            .expect("dual of a nondegenerate lattice is nondegenerate")
    }

    /// Same point set, form multiplied by `s`.
    pub fn scaled(&self, s: Rat) -> Result<Lattice> {
        if !s.is_positive() {
            return Err(Error::NonPositiveScale(s.to_string()));
        }
        let label = if s.is_one() { self.label.clone() } else { format!("√({s})·{}", self.label) };
        Lattice::new(self.basis.clone(), self.form.clone(), self.scale * s, label)
    }

    /// The lattice `n·L` (basis multiplied by `n`, form unchanged).
    pub fn multiple(&self, n: Rat) -> Result<Lattice> {
        if n.is_zero() {
            return Err(Error::DegenerateLattice(format!("0·{}", self.label)));
        }
        Lattice::new(
            linalg::scale_matrix(&self.basis, &n),
            self.form.clone(),
            self.scale,
            format!("{n}·{}", self.label),
        )
    }

    /// Equal point sets (forms are assumed to agree).
    pub fn same_points(&self, other: &Lattice) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
            && self.basis_vectors().iter().all(|v| other.contains(v))
    }

    /// Integer matrix `T` with `sub.basis = T · self.basis`.
    fn transition_from(&self, sub: &Lattice) -> Result<IntMatrix> {
        let t = linalg::mat_mul(&sub.basis, &self.basis_inv);
        linalg::to_int_matrix(&t).ok_or_else(|| Error::NotSublattice {
            sub: sub.label.clone(),
            sup: self.label.clone(),
        })
    }
}

/// `Q`, `Q_L`, `P` and `Q°` of an algebra.
#[derive(Clone, Debug)]
pub struct StandardLattices {
    pub root: Lattice,
    pub long_root: Lattice,
    pub weight: Lattice,
    pub dual_root: Lattice,
}

pub fn standard_lattices(alg: &AlgebraDescriptor) -> StandardLattices {
    let form = alg.gram().clone();
    let l = alg.rank();
    let one = Rat::one();
    let root = Lattice::from_weights(alg.simple_roots(), &form, one, "Q").expect("simple roots are a basis");

    let long_coords: Vec<Vec<i64>> = alg
        .positive_roots()
        .iter()
        .zip(alg.positive_root_coords())
        .filter(|(r, _)| alg.is_long(r))
        .map(|(_, c)| c.clone())
        .collect();
    let reduced = linalg::integer_row_basis(&long_coords);
    assert_eq!(reduced.len(), l, "long roots span a full-rank lattice");
    let long_basis: RatMatrix = linalg::mat_mul(&linalg::int_to_rat(&reduced), root.basis());
    let long_root = Lattice::new(long_basis, form.clone(), one, "Q_L").expect("full rank");

    let weight = Lattice::new(linalg::identity(l), form.clone(), one, "P").expect("identity basis");
    let dual_root = root.dual().with_label("Q°");
    StandardLattices {
        root,
        long_root,
        weight,
        dual_root,
    }
}

pub fn dual_lattice(lattice: &Lattice) -> Lattice {
    lattice.dual()
}

pub fn scale(lattice: &Lattice, s: Rat) -> Result<Lattice> {
    lattice.scaled(s)
}

/// `|sup / sub|` without listing representatives.
pub fn lattice_index(sup: &Lattice, sub: &Lattice) -> Result<u64> {
    let t = sup.transition_from(sub)?;
    let det = linalg::determinant(&linalg::int_to_rat(&t)).abs();
    u64::try_from(*det.numer()).map_err(|_| Error::Overflow("lattice index"))
}

/// Finite quotient `sup / sub` with canonical representatives.
#[derive(Clone, Debug)]
pub struct CosetSystem {
    sup: Lattice,
    sub: Lattice,
    divisors: Vec<i64>,
    v: IntMatrix,
    v_inv: IntMatrix,
    reps: Vec<WeightVec>,
}

/// Hard limit on the number of representatives materialized by [`quotient`].
pub const MAX_COSETS: u64 = 5_000_000;

pub fn quotient(sup: &Lattice, sub: &Lattice) -> Result<CosetSystem> {
    let t = sup.transition_from(sub)?;
    let smith = linalg::smith_normal_form(&t);
    let order: u64 = smith.diagonal.iter().map(|&d| d as u64).product();
    if order > MAX_COSETS {
        return Err(Error::Overflow("coset count"));
    }
    let mut cs = CosetSystem {
        sup: sup.clone(),
        sub: sub.clone(),
        divisors: smith.diagonal,
        v: smith.v,
        v_inv: smith.v_inv,
        reps: Vec::new(),
    };
    cs.reps = (0..order as usize).map(|i| cs.rep_from_digits(&cs.digits_of_index(i))).collect();
    Ok(cs)
}

impl CosetSystem {
    pub fn sup(&self) -> &Lattice {
        &self.sup
    }

    pub fn sub(&self) -> &Lattice {
        &self.sub
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    /// Elementary divisors `d_1 | d_2 | …` (including trivial ones).
    pub fn elementary_divisors(&self) -> &[i64] {
        &self.divisors
    }

    pub fn reps(&self) -> &[WeightVec] {
        &self.reps
    }

    fn digits_of_index(&self, mut index: usize) -> Vec<i64> {
        let mut digits = vec![0i64; self.divisors.len()];
        for (d, &m) in digits.iter_mut().zip(&self.divisors).rev() {
            *d = (index % m as usize) as i64;
            index /= m as usize;
        }
        digits
    }

    fn rep_from_digits(&self, digits: &[i64]) -> WeightVec {
        let n = digits.len();
        let x: Vec<i64> = (0..n).map(|j| (0..n).map(|i| digits[i] * self.v_inv[i][j]).sum()).collect();
        self.sup.element(&x)
    }

    /// Mixed-radix class invariants of `w`, one digit per elementary divisor.
    pub fn digits(&self, w: &WeightVec) -> Result<Vec<i64>> {
        let x = self
            .sup
            .int_coords_of(w)
            .ok_or_else(|| Error::NotInLattice(self.sup.label.clone()))?;
        let n = x.len();
        Ok((0..n)
            .map(|j| {
                let z: i64 = (0..n).map(|i| x[i] * self.v[i][j]).sum();
                z.mod_floor(&self.divisors[j])
            })
            .collect())
    }

    /// Index of the class of `w` in [`reps`](Self::reps).
    pub fn index_of(&self, w: &WeightVec) -> Result<usize> {
        let digits = self.digits(w)?;
        Ok(digits
            .iter()
            .zip(&self.divisors)
            .fold(0usize, |acc, (&d, &m)| acc * m as usize + d as usize))
    }

    /// Canonical representative congruent to `w`.
    pub fn reduce(&self, w: &WeightVec) -> Result<WeightVec> {
        Ok(self.reps[self.index_of(w)?].clone())
    }

    pub fn congruent(&self, x: &WeightVec, y: &WeightVec) -> Result<bool> {
        Ok(self.digits(x)? == self.digits(y)?)
    }
}

/// Moves `v` along the generators `steps` (and their negatives) while the
/// norm strictly decreases. For a root lattice and its roots this lands on a
/// shortest element of `v + lattice`.
pub fn descend_norm(form: &RatMatrix, v: &WeightVec, steps: &[WeightVec]) -> WeightVec {
    let norm = |x: &WeightVec| linalg::bilinear(x.coords(), form, x.coords());
    let mut cur = v.clone();
    let mut cur_norm = norm(&cur);
    loop {
        let mut improved = false;
        for s in steps {
            for cand in [&cur + s, &cur - s] {
                let n = norm(&cand);
                if n < cur_norm {
                    cur = cand;
                    cur_norm = n;
                    improved = true;
                }
            }
        }
        if !improved {
            return cur;
        }
    }
}

/// Whether `(β, α) ↦ exp(2πi⟨β, α⟩)` is a perfect pairing between
/// `Q / kQ_L` and `(1/k)P / Q°`.
pub fn duality_pairing_check(alg: &AlgebraDescriptor, k: i64) -> Result<bool> {
    let std = standard_lattices(alg);
    let kk = int(k as i128);
    let left = quotient(&std.root, &std.long_root.multiple(kk)?)?;
    let right = quotient(&std.weight.multiple(Rat::one() / kk)?, &std.dual_root)?;
    if left.order() != right.order() {
        return Ok(false);
    }
    let table: Vec<Vec<bool>> = left
        .reps()
        .iter()
        .map(|b| right.reps().iter().map(|a| alg.inner_unchecked(b, a).is_integer()).collect())
        .collect();
    let rows_faithful = table.iter().skip(1).all(|row| row.iter().any(|trivial| !trivial));
    let cols_faithful = (1..right.order()).all(|j| table.iter().any(|row| !row[j]));
    // reps[0] is the zero class on both sides
    Ok(left.reps()[0].is_zero() && right.reps()[0].is_zero() && rows_faithful && cols_faithful)
}
