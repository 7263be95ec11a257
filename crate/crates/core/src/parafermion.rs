//! Parafermion modules `M^{Λ,λ}`, their characters (branching functions),
//! label identifications and the resulting modular data.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::affinekit::{
    central_charge, complexify, conformal_weight, dominant_weights, kac_peterson_s, weight_multiplicities,
    AffineLabel, MultTable,
};
use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::latticekit::{descend_norm, lattice_index, quotient, standard_lattices, CosetSystem, StandardLattices};
use crate::linalg::{self, frac, int, Rat};
use crate::qseries::{eta_series, euler_product, theta_eval, QSeries};
use crate::rootsys::{AlgebraDescriptor, WeightVec};

pub const DEFAULT_FINGERPRINT_DEPTH: usize = 20;
pub const MAX_FINGERPRINT_DEPTH: usize = 60;
/// Tolerance for S-entries of identified raw labels.
pub const INTRA_CLASS_TOL: f64 = 1e-10;
pub const FUSION_TOL: f64 = 1e-6;

/// `(Λ, β)` labelling `M^{Λ, Λ+β}`, with `β` a canonical representative of
/// `Q / kQ_L` in fundamental-weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParafermionLabel {
    pub lambda: AffineLabel,
    pub beta: Vec<i64>,
}

impl ParafermionLabel {
    /// `Λ + β`.
    pub fn weight(&self) -> Vec<i64> {
        self.lambda.coords().iter().zip(&self.beta).map(|(a, b)| a + b).collect()
    }
}

impl fmt::Display for ParafermionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "({};{})", join(self.lambda.coords()), join(&self.beta))
    }
}

type TableKey = (String, i64, Vec<i64>);

fn table_cache() -> &'static Mutex<HashMap<TableKey, Arc<MultTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<TableKey, Arc<MultTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Multiplicity table of `L(k,Λ)` to at least `depth`, shared across calls.
pub fn mult_table(alg: &AlgebraDescriptor, k: i64, label: &AffineLabel, depth: usize) -> Result<Arc<MultTable>> {
    let key = (alg.name(), k, label.coords().to_vec());
    if let Some(t) = table_cache().lock().unwrap().get(&key) {
        if t.max_depth() >= depth {
            return Ok(Arc::clone(t));
        }
    }
    let t = Arc::new(weight_multiplicities(alg, k, label, depth)?);
    let mut cache = table_cache().lock().unwrap();
    let slot = cache.entry(key).or_insert_with(|| Arc::clone(&t));
    if slot.max_depth() < t.max_depth() {
        *slot = Arc::clone(&t);
    }
    Ok(t)
}

fn check_level(k: i64) -> Result<()> {
    if k < 1 {
        return Err(Error::NonPositiveScale(format!("level {k}")));
    }
    Ok(())
}

/// `Q/kQ_L` and the lattices it is built from.
struct LevelLattices {
    std: StandardLattices,
    root_cosets: CosetSystem,
    // k times the long roots, for norm descent inside λ + kQ_L
    steps: Vec<WeightVec>,
}

fn level_lattices(alg: &AlgebraDescriptor, k: i64) -> Result<LevelLattices> {
    let std = standard_lattices(alg);
    let root_cosets = quotient(&std.root, &std.long_root.multiple(int(k as i128))?)?;
    let steps = alg
        .positive_roots()
        .iter()
        .filter(|r| alg.is_long(r))
        .map(|r| r.scale(&int(k as i128)))
        .collect();
    Ok(LevelLattices {
        std,
        root_cosets,
        steps,
    })
}

fn in_root_coset(lat: &StandardLattices, a: &[i64], b: &[i64]) -> bool {
    let d: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    lat.root.contains(&WeightVec::from_ints(&d))
}

/// `q^{n_Λ − |λ|²/2k − c/24 + l/24}`, the exponent attached to `M^{Λ,λ}`.
fn base_exponent(alg: &AlgebraDescriptor, k: i64, label: &AffineLabel, weight: &WeightVec) -> Rat {
    let l = alg.rank() as i128;
    conformal_weight(alg, k, &label.weight()) - alg.inner_unchecked(weight, weight) / int(2 * k as i128)
        - central_charge(alg, k) / int(24)
        + Rat::new(l, 24)
}

/// Character of `M^{Λ,λ}`:
/// `η^l q^{−|λ|²/2k} q^{n_Λ − c/24} Σ_m mult(λ, m) q^m`, to `depth` terms past
/// its leading exponent. Returns the zero series when `λ ∉ Λ + Q`.
pub fn branching_function(
    alg: &AlgebraDescriptor,
    k: i64,
    label: &AffineLabel,
    weight: &[i64],
    depth: usize,
) -> Result<QSeries> {
    check_level(k)?;
    if weight.len() != alg.rank() {
        return Err(Error::DimensionMismatch {
            expected: alg.rank(),
            got: weight.len(),
        });
    }
    let lat = level_lattices(alg, k)?;
    branching_with(alg, k, label, weight, depth, &lat)
}

fn branching_with(
    alg: &AlgebraDescriptor,
    k: i64,
    label: &AffineLabel,
    weight: &[i64],
    depth: usize,
    lat: &LevelLattices,
) -> Result<QSeries> {
    if !in_root_coset(&lat.std, weight, label.coords()) {
        return Ok(QSeries::zero(depth));
    }
    // M^{Λ,λ} only depends on λ mod kQ_L; the shortest representative has
    // the shallowest string
    let short = descend_norm(alg.gram(), &WeightVec::from_ints(weight), &lat.steps);
    let short_ints = short.to_ints().expect("integral weight");
    let mut table_depth = depth + 4;
    let (table, first) = loop {
        let t = mult_table(alg, k, label, table_depth)?;
        match (0..=t.max_depth()).find(|&m| t.mult(&short_ints, m) != 0) {
            Some(m) if m + depth <= t.max_depth() => break (t, m),
            Some(m) => table_depth = m + depth,
            None => table_depth *= 2,
        }
    };
    let string: Vec<Rat> = (first..=first + depth)
        .map(|m| int(table.mult(&short_ints, m) as i128))
        .collect();
    let string = QSeries::new(Rat::zero(), string);
    let phi = euler_product(depth).pow(alg.rank() as i64)?;
    let offset = base_exponent(alg, k, label, &short) + int(first as i128);
    Ok((&phi * &string).truncate(depth).shift(offset))
}

/// `n_Λ − |Λ+β|²/2k − c/24 + l/24` reduced to `[0, 1)`.
pub fn parafermion_t(alg: &AlgebraDescriptor, k: i64, label: &ParafermionLabel) -> Rat {
    frac(&base_exponent(alg, k, &label.lambda, &WeightVec::from_ints(&label.weight())))
}

/// `c^a − l`.
pub fn parafermion_central_charge(alg: &AlgebraDescriptor, k: i64) -> Rat {
    central_charge(alg, k) - int(alg.rank() as i128)
}

/// The raw labels `P_+^k × Q/kQ_L` grouped into isomorphism classes.
#[derive(Clone, Debug)]
pub struct LabelClasses {
    pub raw: Vec<ParafermionLabel>,
    /// Indices into `raw`, each class sorted with its representative first;
    /// classes ordered by representative.
    pub classes: Vec<Vec<usize>>,
    /// `|P/Q|`.
    pub orbit_size: usize,
    /// Fingerprint depth that separated the simple-current images.
    pub fingerprint_depth: usize,
}

impl LabelClasses {
    pub fn representatives(&self) -> Vec<ParafermionLabel> {
        self.classes.iter().map(|c| self.raw[c[0]].clone()).collect()
    }

    pub fn class_of(&self, raw_index: usize) -> usize {
        self.classes
            .iter()
            .position(|c| c.contains(&raw_index))
            .expect("every raw label lies in a class")
    }
}

/// Exact fingerprint of `M^{Λ,λ}`: the T-exponent and the character to `depth`.
type Fingerprint = (Rat, Rat, Vec<Rat>);

struct Fingerprinter<'a> {
    alg: &'a AlgebraDescriptor,
    k: i64,
    lat: &'a LevelLattices,
    memo: HashMap<(Vec<i64>, Vec<i64>, usize), Fingerprint>,
}

impl Fingerprinter<'_> {
    fn get(&mut self, label: &AffineLabel, weight: &[i64], depth: usize) -> Result<Fingerprint> {
        // key by the kQ_L-reduced weight so periodic copies share work
        let reduced = self.lat.root_cosets.reduce(&WeightVec::from_ints(
            &weight.iter().zip(label.coords()).map(|(a, b)| a - b).collect::<Vec<_>>(),
        ))?;
        let key = (label.coords().to_vec(), reduced.to_ints().expect("integral"), depth);
        if let Some(f) = self.memo.get(&key) {
            return Ok(f.clone());
        }
        let s = branching_with(self.alg, self.k, label, weight, depth, self.lat)?;
        let t = frac(&base_exponent(self.alg, self.k, label, &WeightVec::from_ints(weight)));
        let f = (t, s.offset(), s.coeffs().to_vec());
        self.memo.insert(key, f.clone());
        Ok(f)
    }
}

/// Partitions `{(Λ, β)}` into classes under `M^{Λ,λ} = M^{Λ^{(i)}, λ+kΛ_i}`.
///
/// For every node with `a_i = 1` the image `Λ^{(i)}` is the unique
/// `Λ' ∈ P_+^k`, `Λ' ≡ Λ + kΛ_i mod Q`, whose modules `M^{Λ', λ+kΛ_i}`
/// match `M^{Λ,λ}` in T-exponent and character for every `λ ∈ Λ+Q`. The
/// depth starts at `fingerprint_depth` and is raised up to
/// [`MAX_FINGERPRINT_DEPTH`] until exactly one candidate survives.
pub fn label_classes(alg: &AlgebraDescriptor, k: i64, fingerprint_depth: usize) -> Result<LabelClasses> {
    check_level(k)?;
    let lat = level_lattices(alg, k)?;
    let weights = dominant_weights(alg, k);
    let betas: Vec<Vec<i64>> = lat
        .root_cosets
        .reps()
        .iter()
        .map(|b| b.to_ints().expect("Q lies in P"))
        .collect();
    let nb = betas.len();
    let raw: Vec<ParafermionLabel> = weights
        .iter()
        .flat_map(|l| {
            betas.iter().map(move |b| ParafermionLabel {
                lambda: l.clone(),
                beta: b.clone(),
            })
        })
        .collect();
    let orbit_size = lattice_index(&lat.std.weight, &lat.std.root)? as usize;
    let nodes: Vec<usize> = (0..alg.rank()).filter(|&i| alg.marks()[i] == 1).collect();

    let mut fp = Fingerprinter {
        alg,
        k,
        lat: &lat,
        memo: HashMap::new(),
    };
    let mut used_depth = fingerprint_depth.max(1);
    // successor of each raw label under each node's identification
    let mut moves: Vec<Vec<usize>> = vec![Vec::new(); raw.len()];
    for &i in &nodes {
        let shift: Vec<i64> = WeightVec::fundamental(alg.rank(), i)
            .scale(&int(k as i128))
            .to_ints()
            .expect("integral");
        for (li, label) in weights.iter().enumerate() {
            let target: Vec<i64> = label.coords().iter().zip(&shift).map(|(a, s)| a + s).collect();
            let mut cands: Vec<usize> = (0..weights.len())
                .filter(|&c| in_root_coset(&lat.std, weights[c].coords(), &target))
                .collect();
            let mut depth = used_depth;
            loop {
                let mut keep = Vec::new();
                for &c in &cands {
                    let mut all = true;
                    for b in &betas {
                        let w: Vec<i64> = label.coords().iter().zip(b).map(|(a, x)| a + x).collect();
                        let moved: Vec<i64> = w.iter().zip(&shift).map(|(a, s)| a + s).collect();
                        if fp.get(label, &w, depth)? != fp.get(&weights[c], &moved, depth)? {
                            all = false;
                            break;
                        }
                    }
                    if all {
                        keep.push(c);
                    }
                }
                if keep.len() == 1 || keep.is_empty() || depth >= MAX_FINGERPRINT_DEPTH {
                    cands = keep;
                    break;
                }
                cands = keep;
                depth = (depth * 3 / 2).min(MAX_FINGERPRINT_DEPTH);
            }
            used_depth = used_depth.max(depth);
            if cands.len() != 1 {
                return Err(Error::FingerprintUnresolved {
                    label: format!("{:?}", label.coords()),
                    node: i,
                    detail: format!("{} candidates at depth {depth}", cands.len()),
                });
            }
            let image = &weights[cands[0]];
            for (bi, b) in betas.iter().enumerate() {
                let moved: Vec<i64> = (0..alg.rank())
                    .map(|j| label.coords()[j] + b[j] + shift[j] - image.coords()[j])
                    .collect();
                let nbi = lat.root_cosets.index_of(&WeightVec::from_ints(&moved))?;
                moves[li * nb + bi].push(cands[0] * nb + nbi);
            }
        }
    }

    // orbits of the generated group
    let mut class_id = vec![usize::MAX; raw.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for start in 0..raw.len() {
        if class_id[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members = vec![start];
        class_id[start] = id;
        let mut next = 0;
        while next < members.len() {
            for &to in &moves[members[next]] {
                if class_id[to] == usize::MAX {
                    class_id[to] = id;
                    members.push(to);
                }
            }
            next += 1;
        }
        members.sort_by(|a, b| raw[*a].cmp(&raw[*b]));
        classes.push(members);
    }
    classes.sort_by(|a, b| raw[a[0]].cmp(&raw[b[0]]));

    let expected = weights.len() * nb / orbit_size;
    if classes.len() != expected || classes.iter().any(|c| c.len() != orbit_size) {
        return Err(Error::LabelCountMismatch {
            found: classes.len(),
            expected,
        });
    }
    Ok(LabelClasses {
        raw,
        classes,
        orbit_size,
        fingerprint_depth: used_depth,
    })
}

/// Canonical representatives, one per isomorphism class of modules.
pub fn canonical_labels(alg: &AlgebraDescriptor, k: i64, fingerprint_depth: usize) -> Result<Vec<ParafermionLabel>> {
    Ok(label_classes(alg, k, fingerprint_depth)?.representatives())
}

/// Modular data of the parafermion algebra on canonical labels.
#[derive(Clone, Debug)]
pub struct ParafermionData {
    pub algebra: String,
    pub level: i64,
    pub labels: Vec<ParafermionLabel>,
    pub classes: LabelClasses,
    /// T-exponents in `[0, 1)`.
    pub t_phases: Vec<Rat>,
    pub s: CMatrix,
    pub central_charge: Rat,
    /// Index of the class of `M^{0,0}`.
    pub vacuum: usize,
    /// Largest S-row disagreement between identified raw labels.
    pub intra_class_deviation: f64,
}

/// Residuals of the modular relations of a set of S and T matrices.
#[derive(Clone, Debug)]
pub struct ModularDefects {
    pub unitarity: f64,
    pub symmetry: f64,
    /// `‖(ST)³ − S²‖_max`.
    pub st_cubed: f64,
    /// Distance of `S²` from the nearest permutation matrix, `None` if not one.
    pub s_squared_permutation: Option<Vec<usize>>,
    pub s_squared_defect: f64,
}

impl ParafermionData {
    pub fn t_matrix(&self) -> CMatrix {
        let d: Vec<Complex64> = self
            .t_phases
            .iter()
            .map(|t| Complex64::from_polar(1.0, 2.0 * PI * linalg::to_f64(t)))
            .collect();
        CMatrix::diagonal(&d)
    }

    pub fn defects(&self, tol: f64) -> ModularDefects {
        let t = self.t_matrix();
        let st = &self.s * &t;
        let st3 = &(&st * &st) * &st;
        let s2 = &self.s * &self.s;
        let perm = s2.as_permutation(tol);
        let defect = match &perm {
            Some(p) => {
                let pm = CMatrix::from_fn(p.len(), |i, j| Complex64::new(if p[i] == j { 1.0 } else { 0.0 }, 0.0));
                s2.max_abs_diff(&pm)
            }
            None => f64::INFINITY,
        };
        ModularDefects {
            unitarity: self.s.unitarity_defect(),
            symmetry: self.s.symmetry_defect(),
            st_cubed: st3.max_abs_diff(&s2),
            s_squared_permutation: perm,
            s_squared_defect: defect,
        }
    }
}

/// `|P/kQ_L|^{-1/2} S_{Λ,Λ'} e^{2πi⟨Λ+β, Λ'+β'⟩/k}` on the raw labels.
///
/// The phase carries a plus sign, the conjugate of the lattice S-matrix
/// entry; this is what the S-transformation of the coset decomposition
/// forces.
fn raw_s_matrix(alg: &AlgebraDescriptor, k: i64, raw: &[ParafermionLabel]) -> Result<CMatrix> {
    let kp = kac_peterson_s(alg, k)?;
    let std = standard_lattices(alg);
    let index = lattice_index(&std.weight, &std.long_root.multiple(int(k as i128))?)?;
    let norm = 1.0 / (index as f64).sqrt();
    let pos: Vec<usize> = raw
        .iter()
        .map(|r| kp.index_of(r.lambda.coords()).expect("label in P_+^k"))
        .collect();
    let weights: Vec<WeightVec> = raw.iter().map(|r| WeightVec::from_ints(&r.weight())).collect();
    let kk = int(k as i128);
    Ok(CMatrix::from_fn(raw.len(), |a, b| {
        let phase = frac(&(alg.inner_unchecked(&weights[a], &weights[b]) / kk));
        kp.matrix[(pos[a], pos[b])] * norm * Complex64::from_polar(1.0, 2.0 * PI * linalg::to_f64(&phase))
    }))
}

/// Assembles the parafermion S and T on canonical labels.
///
/// Before projecting, rows of identified raw labels are compared; any
/// disagreement above [`INTRA_CLASS_TOL`] is an error.
pub fn parafermion_s(alg: &AlgebraDescriptor, k: i64) -> Result<ParafermionData> {
    parafermion_s_with_depth(alg, k, DEFAULT_FINGERPRINT_DEPTH)
}

pub fn parafermion_s_with_depth(alg: &AlgebraDescriptor, k: i64, fingerprint_depth: usize) -> Result<ParafermionData> {
    // the Kac–Peterson sum needs W; fail on the cap before any fingerprinting
    alg.weyl_group()?;
    let classes = label_classes(alg, k, fingerprint_depth)?;
    let raw_s = raw_s_matrix(alg, k, &classes.raw)?;
    let mut deviation: f64 = 0.0;
    for class in &classes.classes {
        let rep = raw_s.row(class[0]);
        for &m in &class[1..] {
            let d = raw_s
                .row(m)
                .iter()
                .zip(rep)
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            deviation = deviation.max(d);
            if d > INTRA_CLASS_TOL {
                return Err(Error::IntraClassMismatch {
                    label: classes.raw[m].to_string(),
                    deviation: d,
                });
            }
        }
    }
    let labels = classes.representatives();
    let reps: Vec<usize> = classes.classes.iter().map(|c| c[0]).collect();
    let mult = classes.orbit_size as f64;
    // summing a column over a class of |P/Q| equal entries
    let s = CMatrix::from_fn(labels.len(), |a, b| raw_s[(reps[a], reps[b])] * mult);
    let t_phases = labels.iter().map(|l| parafermion_t(alg, k, l)).collect();
    let vacuum = labels
        .iter()
        .position(|l| l.lambda.coords().iter().chain(&l.beta).all(|&c| c == 0))
        .expect("the vacuum label is its own class representative");
    Ok(ParafermionData {
        algebra: alg.name(),
        level: k,
        labels,
        classes,
        t_phases,
        s,
        central_charge: parafermion_central_charge(alg, k),
        vacuum,
        intra_class_deviation: deviation,
    })
}

/// Unrounded Verlinde numbers `N_{ab}^c = Σ_m S_{am} S_{bm} conj(S_{cm}) / S_{0m}`.
pub fn verlinde_values(data: &ParafermionData) -> Vec<Vec<Vec<Complex64>>> {
    let s = &data.s;
    let n = s.dim();
    let v = data.vacuum;
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    (0..n)
                        .map(|c| (0..n).map(|m| s[(a, m)] * s[(b, m)] * s[(c, m)].conj() / s[(v, m)]).sum())
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Largest distance of a Verlinde number from the nearest integer.
pub fn fusion_integrality_defect(data: &ParafermionData) -> f64 {
    verlinde_values(data)
        .iter()
        .flatten()
        .flatten()
        .map(|z| (z - Complex64::new(z.re.round(), 0.0)).norm())
        .fold(0.0, f64::max)
}

/// Verlinde fusion numbers, rounded after an integrality check.
pub fn verlinde_fusion(data: &ParafermionData) -> Result<Vec<Vec<Vec<u64>>>> {
    let s = &data.s;
    let n = s.dim();
    let v = data.vacuum;
    for m in 0..n {
        let z = s[(v, m)];
        if z.re <= 0.0 || z.im.abs() > FUSION_TOL {
            return Err(Error::VacuumRowNotPositive { index: m, value: z.re });
        }
    }
    let values = verlinde_values(data);
    let mut out = vec![vec![vec![0u64; n]; n]; n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let z = values[a][b][c];
                let r = z.re.round();
                if (z - Complex64::new(r, 0.0)).norm() > FUSION_TOL || r < 0.0 {
                    return Err(Error::NonIntegralFusion {
                        a,
                        b,
                        c,
                        value: z.re,
                    });
                }
                out[a][b][c] = r as u64;
            }
        }
    }
    Ok(out)
}

/// Per-label comparison of a transformed character with its prediction.
#[derive(Clone, Debug)]
pub struct ResidualEntry {
    pub label: String,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    pub tail_bound: f64,
}

#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub entries: Vec<ResidualEntry>,
    pub max_residual: f64,
}

impl ResidualReport {
    pub fn new(entries: Vec<ResidualEntry>) -> Self {
        let max_residual = entries.iter().map(|e| e.residual).fold(0.0, f64::max);
        ResidualReport { entries, max_residual }
    }
}

/// Compares `Z_a(−1/τ)` with `Σ_b S_{ab} Z_b(τ)` for every canonical label,
/// each character summed to `depth` terms.
pub fn verify_s_transform(alg: &AlgebraDescriptor, k: i64, tau: Complex64, depth: usize) -> Result<ResidualReport> {
    let data = parafermion_s(alg, k)?;
    let lat = level_lattices(alg, k)?;
    let tau_s = -Complex64::new(1.0, 0.0) / tau;
    let mut at_tau = Vec::new();
    let mut at_s = Vec::new();
    for l in &data.labels {
        let series = branching_with(alg, k, &l.lambda, &l.weight(), depth, &lat)?;
        at_tau.push(series.evaluate(tau)?);
        at_s.push(series.evaluate(tau_s)?);
    }
    let n = data.labels.len();
    let entries = (0..n)
        .map(|a| {
            let rhs: Complex64 = (0..n).map(|b| data.s[(a, b)] * at_tau[b].value).sum();
            let tail = at_s[a].tail_bound + (0..n).map(|b| data.s[(a, b)].norm() * at_tau[b].tail_bound).sum::<f64>();
            ResidualEntry {
                label: data.labels[a].to_string(),
                lhs: at_s[a].value,
                rhs,
                residual: (at_s[a].value - rhs).norm(),
                tail_bound: tail,
            }
        })
        .collect();
    Ok(ResidualReport::new(entries))
}

#[derive(Clone, Debug)]
pub struct OrbifoldResidual {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    /// `|(1/k)P / Q°|`.
    pub group_order: usize,
}

/// Recovers the character of `M^{Λ,Λ+β}` from twisted affine characters:
/// `(1/|Q/kQ_L|) (η^l / θ_{√kQ_L + (Λ+β)/√k}) Σ_{α∈(1/k)P/Q°} e^{−2πi⟨α,Λ+β⟩} χ_Λ(α, τ)`.
pub fn verify_orbifold_identity(
    alg: &AlgebraDescriptor,
    k: i64,
    label: &AffineLabel,
    beta: &[i64],
    tau: Complex64,
    depth: usize,
) -> Result<OrbifoldResidual> {
    check_level(k)?;
    let lat = level_lattices(alg, k)?;
    let kk = int(k as i128);
    let weight: Vec<i64> = label.coords().iter().zip(beta).map(|(a, b)| a + b).collect();
    let lambda = WeightVec::from_ints(&weight);
    let lhs = branching_with(alg, k, label, &weight, depth, &lat)?.evaluate(tau)?.value;

    let group = quotient(&lat.std.weight.multiple(Rat::one() / kk)?, &lat.std.dual_root)?;
    let table = mult_table(alg, k, label, depth)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for alpha in group.reps() {
        let chi = table.character(alg, &complexify(alpha), tau)?.value;
        let phase = frac(&-alg.inner_unchecked(alpha, &lambda));
        sum += Complex64::from_polar(1.0, 2.0 * PI * linalg::to_f64(&phase)) * chi;
    }
    let eta = eta_series(depth).evaluate(tau)?.value;
    let scaled = lat.std.long_root.scaled(kk)?;
    let zero_h = vec![Complex64::new(0.0, 0.0); alg.rank()];
    let theta = theta_eval(&scaled, &lambda.scale(&(Rat::one() / kk)), &zero_h, tau, &int(depth as i128))?.value;
    let rhs = eta.powu(alg.rank() as u32) / theta * sum / lat.root_cosets.order() as f64;
    Ok(OrbifoldResidual {
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
        group_order: group.order(),
    })
}
