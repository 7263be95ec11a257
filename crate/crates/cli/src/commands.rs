//! The three subcommands, each producing a [`Report`] and a pass flag.

use num_complex::Complex64;
use paramod::affinekit::{dominant_weights, AffineLabel};
use paramod::latticekit::{lattice_index, quotient, standard_lattices};
use paramod::linalg::{format_rat, int, Rat};
use paramod::parafermion::{
    branching_function, fusion_integrality_defect, parafermion_s, verify_orbifold_identity, verify_s_transform,
    verlinde_fusion,
};
use paramod::qseries::{eta_series, lattice_s_matrix, theta_eval};
use paramod::rootsys::{build_algebra, AlgebraDescriptor};
use paramod::{Error, Result};

use crate::config::RunConfig;
use crate::report::{BranchingReport, CountSummary, Cx, LabelRecord, ModularDataReport, Report, VerifyReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Check {
    Sdual,
    Eta,
    Theta,
    Orbifold,
    Verlinde,
    Counts,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Sdual => "sdual",
            Check::Eta => "eta",
            Check::Theta => "theta",
            Check::Orbifold => "orbifold",
            Check::Verlinde => "verlinde",
            Check::Counts => "counts",
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Check::Sdual | Check::Orbifold | Check::Verlinde => 1e-6,
            Check::Eta | Check::Theta => 1e-8,
            Check::Counts => 0.5,
        }
    }

    pub fn default_depth(self) -> usize {
        match self {
            Check::Eta => 80,
            _ => 60,
        }
    }
}

fn algebra(cfg: &RunConfig) -> Result<AlgebraDescriptor> {
    let (s, r) = cfg.algebra.expect("algebra checked by the caller");
    build_algebra(s, r)
}

fn counts(alg: &AlgebraDescriptor, k: i64, classes: usize) -> Result<CountSummary> {
    let std = standard_lattices(alg);
    let weights = dominant_weights(alg, k).len();
    let root_quotient = lattice_index(&std.root, &std.long_root.multiple(int(k as i128))?)? as usize;
    let weight_over_root = lattice_index(&std.weight, &std.root)? as usize;
    Ok(CountSummary {
        dominant_weights: weights,
        root_quotient,
        weight_over_root,
        raw_labels: weights * root_quotient,
        classes,
        formula: weights * root_quotient / weight_over_root,
    })
}

pub fn modular_data(cfg: &RunConfig) -> Result<(Report, bool)> {
    let alg = algebra(cfg)?;
    let data = parafermion_s(&alg, cfg.level)?;
    let defects = data.defects(1e-8);
    let labels = data
        .labels
        .iter()
        .zip(&data.t_phases)
        .map(|(l, t)| LabelRecord {
            name: l.to_string(),
            lambda: l.lambda.coords().to_vec(),
            beta: l.beta.clone(),
            t_phase: format_rat(t),
        })
        .collect();
    let report = ModularDataReport {
        algebra: cfg.algebra_label().expect("algebra present"),
        level: cfg.level,
        central_charge: format_rat(&data.central_charge),
        vacuum: data.vacuum,
        labels,
        s_matrix: data.s.rows().into_iter().map(|r| r.into_iter().map(Cx::from).collect()).collect(),
        counts: counts(&alg, cfg.level, data.labels.len())?,
        unitarity_defect: crate::report::round15(defects.unitarity),
        st_cubed_defect: crate::report::round15(defects.st_cubed),
    };
    Ok((Report::ModularData(report), true))
}

pub fn branching(cfg: &RunConfig, lambda: &[i64], weight: &[i64]) -> Result<(Report, bool)> {
    let alg = algebra(cfg)?;
    let label = AffineLabel::from_ints(&alg, lambda, cfg.level)?;
    let series = branching_function(&alg, cfg.level, &label, weight, cfg.depth)?;
    let warning = series
        .is_zero()
        .then(|| "weight is not in lambda + Q; the branching function vanishes".to_string());
    let coeffs = series.int_coeffs().ok_or(Error::Overflow("non-integral branching coefficient"))?;
    let offset = if warning.is_some() { Rat::from_integer(0) } else { series.offset() };
    let report = BranchingReport {
        offset: format_rat(&offset),
        coeffs,
        depth: cfg.depth,
        warning,
    };
    Ok((Report::Branching(report), true))
}

pub fn verify(cfg: &RunConfig, check: Check) -> Result<(Report, bool)> {
    let tol = cfg.tolerance;
    let tau = cfg.tau;
    let items: Vec<(String, f64, Option<f64>)> = match check {
        Check::Eta => {
            let eta = eta_series(cfg.depth);
            let lhs = eta.evaluate(-Complex64::new(1.0, 0.0) / tau)?;
            let at = eta.evaluate(tau)?;
            let rhs = (-Complex64::i() * tau).sqrt() * at.value;
            vec![("eta(-1/tau)".into(), (lhs.value - rhs).norm(), Some(lhs.tail_bound + at.tail_bound))]
        }
        Check::Theta => {
            let alg = algebra(cfg)?;
            let k = cfg.level.max(1);
            let lattice = standard_lattices(&alg).long_root.scaled(int(k as i128))?;
            let s = lattice_s_matrix(&lattice)?;
            let zero = vec![Complex64::new(0.0, 0.0); alg.rank()];
            let radius = int(cfg.depth as i128);
            let tau_s = -Complex64::new(1.0, 0.0) / tau;
            let mut at = Vec::new();
            for rep in s.cosets.reps() {
                at.push(theta_eval(&lattice, rep, &zero, tau, &radius)?);
            }
            let pref = (-Complex64::i() * tau).powf(alg.rank() as f64 / 2.0);
            let mut out = Vec::new();
            for (a, rep) in s.cosets.reps().iter().enumerate() {
                let lhs = theta_eval(&lattice, rep, &zero, tau_s, &radius)?;
                let rhs: Complex64 = pref * (0..at.len()).map(|b| s.matrix[(a, b)] * at[b].value).sum::<Complex64>();
                out.push((format!("coset {rep}"), (lhs.value - rhs).norm(), Some(lhs.tail_bound)));
            }
            out
        }
        Check::Sdual => {
            let alg = algebra(cfg)?;
            verify_s_transform(&alg, cfg.level, tau, cfg.depth)?
                .entries
                .into_iter()
                .map(|e| (e.label, e.residual, Some(e.tail_bound)))
                .collect()
        }
        Check::Orbifold => {
            let alg = algebra(cfg)?;
            let k = cfg.level;
            let std = standard_lattices(&alg);
            let betas = quotient(&std.root, &std.long_root.multiple(int(k as i128))?)?;
            let mut out = Vec::new();
            for label in dominant_weights(&alg, k) {
                for beta in betas.reps() {
                    let b = beta.to_ints().expect("root lattice is integral in weight coordinates");
                    let r = verify_orbifold_identity(&alg, k, &label, &b, tau, cfg.depth)?;
                    let name = format!("({:?};{:?})", label.coords(), b).replace(['[', ']', ' '], "");
                    out.push((name, r.residual, None));
                }
            }
            out
        }
        Check::Verlinde => {
            let alg = algebra(cfg)?;
            let data = parafermion_s(&alg, cfg.level)?;
            // a vacuum row that is not positive fails outright
            let residual = match verlinde_fusion(&data) {
                Ok(_) => fusion_integrality_defect(&data),
                Err(_) => f64::INFINITY,
            };
            vec![("fusion integrality".into(), residual, None)]
        }
        Check::Counts => {
            let alg = algebra(cfg)?;
            let (found, summary) = match parafermion_s(&alg, cfg.level) {
                Ok(d) => {
                    let n = d.labels.len();
                    (n, counts(&alg, cfg.level, n)?)
                }
                Err(Error::LabelCountMismatch { found, .. }) => (found, counts(&alg, cfg.level, found)?),
                Err(e) => return Err(e),
            };
            let gap = (found as f64 - summary.formula as f64).abs();
            vec![(
                format!("classes {} vs formula {}", summary.classes, summary.formula),
                gap,
                None,
            )]
        }
    };
    let report = VerifyReport::new(check.name(), cfg.algebra_label(), tol, items);
    let pass = report.pass;
    Ok((Report::Verify(report), pass))
}
