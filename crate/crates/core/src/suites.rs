//! Orchestration of the verification suites, spectrum tables and scalar
//! sweeps over a z grid.
//!
//! Grid points are independent and evaluated in parallel under the
//! `parallel` feature; results are assembled in grid order so reports are
//! byte-deterministic either way.  A `MetricUndefined` point is recorded per
//! check and never suppresses the other grid points; an unrecoverable
//! numerical error aborts with the partial report flagged incomplete.

use crate::fockspace::{boson_ops, fermion_ops, total_quanta_projector, TruncatedOperator};
use crate::metric::{
    self, epsilon_of, factorization_params, metric_bundle, mu_nu, mu_nu_endpoint_stages,
    swanson_hamiltonian, MetricBundle, ModelError, SwansonParams,
};
use crate::numkernel::NumError;
use crate::realizations::{RealizationKind, RealizationSpec};
use crate::report::{
    CheckEntry, CheckFragment, CheckStatus, ConfigEcho, SkippedPoint, SpectrumReport, SpectrumRow,
    SweepReport, SweepRow, VerificationReport,
};
use crate::superalgebra::{
    check_hermiticity, check_relations, standard_relation_table, GeneratorSet,
};
use crate::susy::{
    hermitian_supercharges, pseudo_supercharges, supercharge_coeffs, supersym_hamiltonian,
    supersym_hermitian, susy_degeneracy, tilde_mode, SpecialCase, SuperchargeCoeffs,
};
use std::collections::BTreeMap;
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Num(#[from] NumError),
    #[error("model failure: {0}")]
    Model(String),
}

impl From<ModelError> for SuiteError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Num(n) => SuiteError::Num(n),
            other => SuiteError::Model(other.to_string()),
        }
    }
}

impl From<crate::fockspace::FockError> for SuiteError {
    fn from(e: crate::fockspace::FockError) -> Self {
        SuiteError::Config(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self, SuiteError> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(SuiteError::Config(format!(
                "output_format must be \"json\" or \"csv\", got \"{other}\""
            ))),
        }
    }
}

/// One registered check: its name, default tolerance, whether it runs per
/// grid point, and whether it needs the single-mode realization.
#[derive(Debug, Clone, Copy)]
pub struct CheckInfo {
    pub name: &'static str,
    pub default_tolerance: f64,
    pub per_z: bool,
    pub single_mode_only: bool,
}

/// The registered verification suites in report order.
pub const CHECKS: &[CheckInfo] = &[
    CheckInfo {
        name: "relations",
        default_tolerance: 1e-10,
        per_z: false,
        single_mode_only: false,
    },
    CheckInfo {
        name: "hermiticity",
        default_tolerance: 1e-10,
        per_z: false,
        single_mode_only: false,
    },
    CheckInfo {
        name: "limit_consistency",
        default_tolerance: 1e-5,
        per_z: false,
        single_mode_only: false,
    },
    CheckInfo {
        name: "h_spectrum",
        default_tolerance: 1e-6,
        per_z: true,
        single_mode_only: false,
    },
    CheckInfo {
        name: "quasi_hermiticity",
        default_tolerance: 1e-8,
        per_z: true,
        single_mode_only: false,
    },
    CheckInfo {
        name: "metric_positivity",
        default_tolerance: 0.0,
        per_z: true,
        single_mode_only: false,
    },
    CheckInfo {
        name: "coeff_identities",
        default_tolerance: 1e-12,
        per_z: true,
        single_mode_only: false,
    },
    CheckInfo {
        name: "special_cases",
        default_tolerance: 1e-10,
        per_z: true,
        single_mode_only: false,
    },
    CheckInfo {
        name: "factorization",
        default_tolerance: 1e-8,
        per_z: true,
        single_mode_only: false,
    },
    CheckInfo {
        name: "bch",
        default_tolerance: 1e-8,
        per_z: true,
        single_mode_only: false,
    },
    CheckInfo {
        name: "susy_nilpotency",
        default_tolerance: 1e-13,
        per_z: true,
        single_mode_only: false,
    },
    CheckInfo {
        name: "pseudo_susy",
        default_tolerance: 1e-8,
        per_z: true,
        single_mode_only: false,
    },
    CheckInfo {
        name: "bogoliubov",
        default_tolerance: 1e-8,
        per_z: true,
        single_mode_only: true,
    },
    CheckInfo {
        name: "intertwining",
        default_tolerance: 1e-8,
        per_z: true,
        single_mode_only: true,
    },
    CheckInfo {
        name: "susy_degeneracy",
        default_tolerance: 1e-8,
        per_z: true,
        single_mode_only: true,
    },
];

pub fn check_info(name: &str) -> Option<&'static CheckInfo> {
    CHECKS.iter().find(|c| c.name == name)
}

/// Validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
    pub z_grid: Vec<f64>,
    pub realization: RealizationKind,
    pub cutoff: usize,
    pub margin: usize,
    pub tolerances: BTreeMap<String, f64>,
    pub checks: Vec<String>,
    pub output_path: Option<String>,
    pub output_format: OutputFormat,
}

impl RunConfig {
    pub fn default_cutoff(realization: RealizationKind) -> usize {
        match realization {
            RealizationKind::SingleMode => 80,
            _ => 8,
        }
    }

    pub fn default_margin(realization: RealizationKind) -> usize {
        match realization {
            RealizationKind::SingleMode => 16,
            _ => 4,
        }
    }

    pub fn default_checks(realization: RealizationKind) -> Vec<String> {
        let single = matches!(realization, RealizationKind::SingleMode);
        CHECKS
            .iter()
            .filter(|c| single || !c.single_mode_only)
            // eigensolves on the big multimode spaces are opt-in
            .filter(|c| single || !matches!(c.name, "h_spectrum"))
            .map(|c| c.name.to_string())
            .collect()
    }

    pub fn validate(&self) -> Result<(), SuiteError> {
        SwansonParams::new(self.omega, self.alpha, self.beta)
            .map_err(|e| SuiteError::Config(e.to_string()))?;
        if self.z_grid.is_empty() {
            return Err(SuiteError::Config("z_grid must be nonempty".into()));
        }
        for &z in &self.z_grid {
            if !(-1.0..=1.0).contains(&z) {
                return Err(SuiteError::Config(format!(
                    "z_grid value {z} outside [-1, 1]"
                )));
            }
        }
        if !self.z_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(SuiteError::Config(
                "z_grid must be strictly increasing".into(),
            ));
        }
        let single = matches!(self.realization, RealizationKind::SingleMode);
        for name in &self.checks {
            let Some(info) = check_info(name) else {
                return Err(SuiteError::Config(format!(
                    "unknown check \"{name}\"; registered checks: {}",
                    CHECKS.iter().map(|c| c.name).collect::<Vec<_>>().join(", ")
                )));
            };
            if info.single_mode_only && !single {
                return Err(SuiteError::Config(format!(
                    "check \"{name}\" requires the single_mode realization"
                )));
            }
        }
        if self.margin >= self.cutoff {
            return Err(SuiteError::Config(format!(
                "margin {} must be smaller than cutoff {}",
                self.margin, self.cutoff
            )));
        }
        Ok(())
    }

    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances
            .get(name)
            .copied()
            .or_else(|| check_info(name).map(|c| c.default_tolerance))
            .unwrap_or(1e-8)
    }

    pub fn params(&self) -> Result<SwansonParams, SuiteError> {
        SwansonParams::new(self.omega, self.alpha, self.beta)
            .map_err(|e| SuiteError::Config(e.to_string()))
    }

    pub fn realization_spec(&self) -> Result<RealizationSpec, SuiteError> {
        RealizationSpec::new(self.realization, self.cutoff)
            .map_err(|e| SuiteError::Config(e.to_string()))
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            omega: self.omega,
            alpha: self.alpha,
            beta: self.beta,
            z_grid: self.z_grid.clone(),
            realization: self.realization.name(),
            cutoff: self.cutoff,
            margin: self.margin,
            checks: self.checks.clone(),
            tolerances: self.tolerances.clone(),
        }
    }
}

/// Per-realization operator context shared by every grid point.
struct SuiteContext {
    params: SwansonParams,
    gens: GeneratorSet,
    interior: TruncatedOperator,
    low: TruncatedOperator,
    h: TruncatedOperator,
    hs: Option<TruncatedOperator>,
    boson_gens: Option<GeneratorSet>,
    ladder: Option<(TruncatedOperator, TruncatedOperator)>,
    fermion: Option<TruncatedOperator>,
    single_mode: bool,
    n_bosons: usize,
}

impl SuiteContext {
    fn build(config: &RunConfig) -> Result<Self, SuiteError> {
        let params = config.params()?;
        let spec = config.realization_spec()?;
        let gens = spec.generators()?;
        let layout = gens.layout.clone();
        let cutoff = layout.min_boson_cutoff().unwrap_or(4);
        let interior = total_quanta_projector(&layout, cutoff.saturating_sub(1 + config.margin));
        let low = total_quanta_projector(&layout, cutoff / 4);
        let h = swanson_hamiltonian(&gens, &params)?;
        let hs = if gens.has_odd_sector() {
            Some(supersym_hamiltonian(&gens, &params)?)
        } else {
            None
        };
        let single_mode = matches!(config.realization, RealizationKind::SingleMode);
        let n_bosons = layout.boson_factor_indices().len();
        // bosonic-only generator set for spectra of the Hermitian equivalent
        let boson_gens = if single_mode {
            let bl = crate::fockspace::ModeLayout::single_boson(config.cutoff)
                .map_err(|e| SuiteError::Config(e.to_string()))?;
            Some(crate::superalgebra::su11_single_mode(&bl).map_err(ModelError::from)?)
        } else {
            None
        };
        let ladder = if single_mode {
            let idx = layout.boson_factor_indices()[0];
            Some(boson_ops(&layout, idx)?)
        } else {
            None
        };
        let fermion = if single_mode {
            let idx = layout.fermion_factor_indices()[0];
            Some(fermion_ops(&layout, idx)?.0)
        } else {
            None
        };
        Ok(SuiteContext {
            params,
            gens,
            interior,
            low,
            h,
            hs,
            boson_gens,
            ladder,
            fermion,
            single_mode,
            n_bosons,
        })
    }
}

/// Everything derived at one defined grid point.
struct PointContext {
    bundle: MetricBundle,
    coeffs: SuperchargeCoeffs,
    qcal: TruncatedOperator,
    qcal_sharp: TruncatedOperator,
}

fn build_point(ctx: &SuiteContext, z: f64) -> Result<Result<PointContext, String>, SuiteError> {
    let mp = match epsilon_of(&ctx.params, z) {
        Ok(mp) => mp,
        Err(ModelError::MetricUndefined { reason, .. }) => return Ok(Err(reason)),
        Err(other) => return Err(other.into()),
    };
    let ep = match mu_nu(&ctx.params, z) {
        Ok(ep) => ep,
        Err(ModelError::MetricUndefined { reason, .. }) => return Ok(Err(reason)),
        Err(ModelError::NonPositive { name, value }) => {
            return Ok(Err(format!("{name} = {value} is not positive")))
        }
        Err(other) => return Err(other.into()),
    };
    let bundle = metric_bundle(&ctx.gens, &ctx.params, z)?;
    let coeffs = supercharge_coeffs(&ctx.params, &mp, &ep)?;
    let (qcal, qcal_sharp) = pseudo_supercharges(&ctx.gens, &coeffs)?;
    Ok(Ok(PointContext {
        bundle,
        coeffs,
        qcal,
        qcal_sharp,
    }))
}

fn spectrum_fragment(ctx: &SuiteContext, z: f64, tol: f64) -> Result<CheckFragment, SuiteError> {
    let gens = ctx.boson_gens.as_ref().unwrap_or(&ctx.gens);
    let h_herm = metric::equivalent_hermitian(gens, &ctx.params, z)?;
    let eig = h_herm.matrix.eig_hermitian().map_err(SuiteError::from)?;
    let big_omega = ctx.params.big_omega();
    let offset = ctx.n_bosons as f64 / 2.0;
    let mut fragment = CheckFragment::new(tol);
    let mut worst = 0.0_f64;
    for n in 0..6 {
        let predicted = (n as f64 + offset) * big_omega;
        // multimode levels are degenerate; compare against the closest
        let dev = eig
            .eigenvalues
            .iter()
            .map(|l| (l - predicted).abs())
            .fold(f64::INFINITY, f64::min)
            / predicted;
        worst = worst.max(dev);
    }
    // for the single mode the lowest six levels must each sit on the ladder
    if ctx.single_mode {
        worst = 0.0;
        for n in 0..6 {
            let predicted = (n as f64 + 0.5) * big_omega;
            worst = worst.max((eig.eigenvalues[n] - predicted).abs() / predicted);
        }
    }
    fragment.push("lowest levels of h vs (n + n_B/2) Omega", worst);
    Ok(fragment)
}

fn entries_for_point(
    ctx: &SuiteContext,
    config: &RunConfig,
    z: f64,
) -> Result<Vec<CheckEntry>, SuiteError> {
    let per_z_checks: Vec<&String> = config
        .checks
        .iter()
        .filter(|name| check_info(name).map(|c| c.per_z).unwrap_or(false))
        .collect();
    if per_z_checks.is_empty() {
        return Ok(Vec::new());
    }

    let point = build_point(ctx, z)?;
    let mut entries = Vec::new();

    match point {
        Err(reason) => {
            for name in per_z_checks {
                if name.as_str() == "special_cases" && SpecialCase::from_z(z).is_none() {
                    continue;
                }
                entries.push(CheckEntry::undefined(
                    name,
                    Some(z),
                    config.tolerance(name),
                    &reason,
                ));
            }
        }
        Ok(point) => {
            for name in per_z_checks {
                let tol = config.tolerance(name);
                let started = std::time::Instant::now();
                let entry = match name.as_str() {
                    "h_spectrum" => {
                        CheckEntry::from_fragment(name, Some(z), &spectrum_fragment(ctx, z, tol)?)
                    }
                    "quasi_hermiticity" => {
                        let fragment = metric::verify_quasi_hermiticity(
                            &ctx.h,
                            &point.bundle.zeta,
                            &ctx.low,
                            tol,
                        )?;
                        CheckEntry::from_fragment(name, Some(z), &fragment)
                    }
                    "metric_positivity" => {
                        let min = point.bundle.zeta_min_eig;
                        CheckEntry {
                            check: name.to_string(),
                            z: Some(z),
                            residual: Some(min),
                            tolerance: tol,
                            status: if min > tol {
                                CheckStatus::Pass
                            } else {
                                CheckStatus::Fail
                            },
                            detail: "smallest eigenvalue of zeta; pass requires > tolerance".into(),
                            wall_seconds: 0.0,
                        }
                    }
                    "coeff_identities" => {
                        let mut fragment = CheckFragment::new(tol);
                        let labels = [
                            "sigma*phi + tau*chi = 4 omega",
                            "sigma*phi - tau*chi = 4 Omega",
                            "sigma*chi = 4 beta",
                            "tau*phi = 4 alpha",
                        ];
                        for (r, label) in point
                            .coeffs
                            .closure_residuals(&ctx.params)
                            .into_iter()
                            .zip(labels)
                        {
                            fragment.push(label, r);
                        }
                        CheckEntry::from_fragment(name, Some(z), &fragment)
                    }
                    "special_cases" => {
                        let Some(case) = SpecialCase::from_z(z) else {
                            continue;
                        };
                        match crate::susy::special_case_coeffs(&ctx.params, case) {
                            Ok(sc) => {
                                let mut fragment = CheckFragment::new(tol);
                                let rel = |a: f64, b: f64| (a - b).abs() / (b.abs() + 1.0);
                                fragment.push("sigma", rel(point.coeffs.sigma, sc.sigma));
                                fragment.push("tau", rel(point.coeffs.tau, sc.tau));
                                fragment.push("varphi", rel(point.coeffs.varphi, sc.varphi));
                                fragment.push("chi", rel(point.coeffs.chi, sc.chi));
                                if let (Some(gp), Some(gm)) = (sc.gamma_plus, sc.gamma_minus) {
                                    fragment.push(
                                        "gamma+^2 - gamma-^2 = 1",
                                        (gp * gp - gm * gm - 1.0).abs(),
                                    );
                                }
                                CheckEntry::from_fragment(name, Some(z), &fragment)
                            }
                            Err(e) => CheckEntry::undefined(name, Some(z), tol, &e.to_string()),
                        }
                    }
                    "factorization" => match factorization_params(&point.bundle.mp) {
                        Ok(fp) => {
                            let fragment = metric::verify_factorization(
                                &point.bundle.rho,
                                &ctx.gens,
                                &fp,
                                &ctx.low,
                                tol,
                            )?;
                            CheckEntry::from_fragment(name, Some(z), &fragment)
                        }
                        Err(e) => CheckEntry::undefined(name, Some(z), tol, &e.to_string()),
                    },
                    "bch" => match factorization_params(&point.bundle.mp) {
                        Ok(fp) => {
                            let fragment = crate::susy::verify_bch_relations(
                                &point.bundle.rho,
                                &ctx.gens,
                                &fp,
                                &ctx.low,
                                tol,
                            )?;
                            CheckEntry::from_fragment(name, Some(z), &fragment)
                        }
                        Err(e) => CheckEntry::undefined(name, Some(z), tol, &e.to_string()),
                    },
                    "susy_nilpotency" => {
                        let fragment = crate::susy::verify_nilpotency(
                            &point.qcal,
                            &point.qcal_sharp,
                            &ctx.low,
                            tol,
                        )?;
                        CheckEntry::from_fragment(name, Some(z), &fragment)
                    }
                    "pseudo_susy" => {
                        let hs = ctx.hs.as_ref().expect("odd sector present");
                        let fragment = crate::susy::verify_pseudo_susy(
                            &point.qcal,
                            &point.qcal_sharp,
                            hs,
                            &point.bundle.zeta,
                            &ctx.gens,
                            &point.coeffs,
                            &ctx.low,
                            tol,
                        )?;
                        CheckEntry::from_fragment(name, Some(z), &fragment)
                    }
                    "bogoliubov" => {
                        let (a, adag) = ctx.ladder.as_ref().expect("single mode");
                        let fragment = metric::verify_bogoliubov(
                            &point.bundle.rho,
                            a,
                            adag,
                            &point.bundle.mp,
                            &ctx.low,
                            tol,
                        )?;
                        CheckEntry::from_fragment(name, Some(z), &fragment)
                    }
                    "intertwining" => {
                        let (a, adag) = ctx.ladder.as_ref().expect("single mode");
                        let b = ctx.fermion.as_ref().expect("single mode");
                        let ep = mu_nu(&ctx.params, z)?;
                        let (_, tilde_dag) = tilde_mode(a, adag, &ep, ctx.params.omega())?;
                        let (q, _) = hermitian_supercharges(&tilde_dag, b, ctx.params.big_omega())?;
                        let h_herm = metric::equivalent_hermitian(&ctx.gens, &ctx.params, z)?;
                        let fragment = crate::susy::verify_intertwining(
                            &point.bundle.rho,
                            &point.qcal,
                            &q,
                            &ctx.h,
                            &h_herm,
                            &ctx.low,
                            tol,
                        )?;
                        CheckEntry::from_fragment(name, Some(z), &fragment)
                    }
                    "susy_degeneracy" => {
                        let hs_herm = supersym_hermitian(&ctx.gens, &ctx.params, z)?;
                        let report = susy_degeneracy(&hs_herm, ctx.params.big_omega(), 5, tol)?;
                        CheckEntry {
                            check: name.to_string(),
                            z: Some(z),
                            residual: Some(report.max_center_deviation),
                            tolerance: tol,
                            status: if report.multiplicities_ok
                                && report.max_center_deviation <= tol
                            {
                                CheckStatus::Pass
                            } else {
                                CheckStatus::Fail
                            },
                            detail: format!(
                                "multiplicities {:?}",
                                report.clusters.iter().map(|c| c.1).collect::<Vec<_>>()
                            ),
                            wall_seconds: 0.0,
                        }
                    }
                    other => {
                        return Err(SuiteError::Config(format!("unhandled check \"{other}\"")))
                    }
                };
                let mut entry = entry;
                entry.wall_seconds = started.elapsed().as_secs_f64();
                entries.push(entry);
            }
        }
    }
    Ok(entries)
}

fn limit_consistency_fragment(
    params: &SwansonParams,
    tol: f64,
) -> Result<CheckFragment, SuiteError> {
    let mut fragment = CheckFragment::new(tol);
    for sign in [1.0_f64, -1.0] {
        let tag = if sign > 0.0 { "+1" } else { "-1" };
        let near_z = sign * (1.0 - 1e-6);
        match (
            epsilon_of(params, near_z),
            epsilon_of(params, sign),
            mu_nu(params, near_z),
            mu_nu_endpoint_stages(params, sign),
        ) {
            (Ok(mp_near), Ok(mp_end), Ok(ep_near), Ok(((mu_end, _), (nu_end, _)))) => {
                let rel = |a: f64, b: f64| (a - b).abs() / (b.abs() + 1e-300);
                fragment.push(
                    format!("epsilon at z = {tag} (1-1e-6) vs closed limit"),
                    rel(mp_near.epsilon, mp_end.epsilon),
                );
                fragment.push(
                    format!("mu at z = {tag} (1-1e-6) vs extrapolated limit"),
                    rel(ep_near.mu, mu_end),
                );
                fragment.push(
                    format!("nu at z = {tag} (1-1e-6) vs extrapolated limit"),
                    rel(ep_near.nu, nu_end),
                );
            }
            _ => fragment.push(format!("limit at z = {tag} undefined"), f64::INFINITY),
        }
    }
    Ok(fragment)
}

/// Runs the configured checks over the z grid and assembles the report.
pub fn run_verify(config: &RunConfig) -> Result<VerificationReport, SuiteError> {
    config.validate()?;
    let ctx = SuiteContext::build(config)?;
    let mut entries: Vec<CheckEntry> = Vec::new();
    let mut abort: Option<String> = None;

    // z-independent checks first, in registry order
    for name in &config.checks {
        let info = check_info(name).expect("validated");
        if info.per_z {
            continue;
        }
        let tol = config.tolerance(name);
        let started = std::time::Instant::now();
        let fragment = match name.as_str() {
            "relations" => {
                check_relations(&ctx.gens, &standard_relation_table(), &ctx.interior, tol)
                    .map_err(ModelError::from)?
            }
            "hermiticity" => {
                check_hermiticity(&ctx.gens, &ctx.interior, tol).map_err(ModelError::from)?
            }
            "limit_consistency" => limit_consistency_fragment(&ctx.params, tol)?,
            other => return Err(SuiteError::Config(format!("unhandled check \"{other}\""))),
        };
        let mut entry = CheckEntry::from_fragment(name, None, &fragment);
        entry.wall_seconds = started.elapsed().as_secs_f64();
        entries.push(entry);
    }

    // grid points are independent; evaluate them in parallel, collect in order
    #[cfg(feature = "parallel")]
    let per_point: Vec<Result<Vec<CheckEntry>, SuiteError>> = config
        .z_grid
        .par_iter()
        .map(|&z| entries_for_point(&ctx, config, z))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let per_point: Vec<Result<Vec<CheckEntry>, SuiteError>> = config
        .z_grid
        .iter()
        .map(|&z| entries_for_point(&ctx, config, z))
        .collect();

    for result in per_point {
        match result {
            Ok(point_entries) => entries.extend(point_entries),
            Err(e) => {
                abort = Some(e.to_string());
                break;
            }
        }
    }

    Ok(VerificationReport::tally(config.echo(), entries, abort))
}

/// Lowest-level spectrum table of h and h_S against the predicted ladder.
pub fn run_spectrum(config: &RunConfig, levels: usize) -> Result<SpectrumReport, SuiteError> {
    config.validate()?;
    let ctx = SuiteContext::build(config)?;
    let big_omega = ctx.params.big_omega();
    let offset = ctx.n_bosons as f64 / 2.0;
    let safe_levels = config.cutoff / 4;

    type PointRows = Result<Result<Vec<SpectrumRow>, SkippedPoint>, SuiteError>;
    let evaluate = |&z: &f64| -> PointRows {
        if let Err(ModelError::MetricUndefined { reason, .. }) = epsilon_of(&ctx.params, z) {
            return Ok(Err(SkippedPoint { z, reason }));
        }
        let gens_b = ctx.boson_gens.as_ref().unwrap_or(&ctx.gens);
        let h_herm = metric::equivalent_hermitian(gens_b, &ctx.params, z)?;
        let h_eig = h_herm.matrix.eig_hermitian().map_err(SuiteError::from)?;
        let hs_herm = supersym_hermitian(&ctx.gens, &ctx.params, z)?;
        let report = susy_degeneracy(&hs_herm, big_omega, levels.max(1), 1e-8)?;
        let mut rows = Vec::with_capacity(levels);
        for n in 0..levels {
            let h_pred = (n as f64 + offset) * big_omega;
            let h_val = h_eig.eigenvalues.get(n).copied().unwrap_or(f64::NAN);
            let (hs_center, hs_mult) = report.clusters.get(n).copied().unwrap_or((f64::NAN, 0));
            let hs_pred = n as f64 * big_omega;
            rows.push(SpectrumRow {
                z,
                level: n,
                h_eigenvalue: h_val,
                h_predicted: h_pred,
                h_abs_dev: (h_val - h_pred).abs(),
                hs_cluster_center: hs_center,
                hs_predicted: hs_pred,
                hs_abs_dev: (hs_center - hs_pred).abs(),
                hs_multiplicity: hs_mult,
                truncation_warning: n > safe_levels,
            });
        }
        Ok(Ok(rows))
    };

    #[cfg(feature = "parallel")]
    let per_point: Vec<PointRows> = config.z_grid.par_iter().map(evaluate).collect();
    #[cfg(not(feature = "parallel"))]
    let per_point: Vec<PointRows> = config.z_grid.iter().map(evaluate).collect();

    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for result in per_point {
        match result? {
            Ok(mut r) => rows.append(&mut r),
            Err(s) => skipped.push(s),
        }
    }
    Ok(SpectrumReport {
        schema_version: crate::report::SCHEMA_VERSION,
        generator: Default::default(),
        config: config.echo(),
        levels,
        rows,
        skipped,
    })
}

/// Scalar sweep: every derived quantity per grid point, with validity flags.
pub fn run_sweep(config: &RunConfig) -> Result<SweepReport, SuiteError> {
    config.validate()?;
    let params = config.params()?;
    let rows: Vec<SweepRow> = config
        .z_grid
        .iter()
        .map(|&z| {
            let invalid = |reason: String| SweepRow {
                z,
                valid: false,
                epsilon: None,
                theta: None,
                mu: None,
                nu: None,
                sigma: None,
                tau: None,
                varphi: None,
                chi: None,
                p: None,
                q: None,
                p_prime: None,
                q_prime: None,
                error: Some(reason),
            };
            let mp = match epsilon_of(&params, z) {
                Ok(mp) => mp,
                Err(e) => return invalid(e.to_string()),
            };
            let ep = match mu_nu(&params, z) {
                Ok(ep) => ep,
                Err(e) => return invalid(e.to_string()),
            };
            let coeffs = match supercharge_coeffs(&params, &mp, &ep) {
                Ok(c) => c,
                Err(e) => return invalid(e.to_string()),
            };
            let fp = factorization_params(&mp);
            let (p, q, p_prime, q_prime) = match fp {
                Ok(fp) => (Some(fp.p), Some(fp.q), Some(fp.p_prime), Some(fp.q_prime)),
                Err(_) => (None, None, None, None),
            };
            SweepRow {
                z,
                valid: true,
                epsilon: Some(mp.epsilon),
                theta: Some(mp.theta),
                mu: Some(ep.mu),
                nu: Some(ep.nu),
                sigma: Some(coeffs.sigma),
                tau: Some(coeffs.tau),
                varphi: Some(coeffs.varphi),
                chi: Some(coeffs.chi),
                p,
                q,
                p_prime,
                q_prime,
                error: None,
            }
        })
        .collect();
    Ok(SweepReport {
        schema_version: crate::report::SCHEMA_VERSION,
        generator: Default::default(),
        config: config.echo(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_config() -> RunConfig {
        RunConfig {
            omega: 2.0,
            alpha: 0.5,
            beta: 0.3,
            z_grid: vec![-1.0, -0.5, 0.0, 0.5, 1.0],
            realization: RealizationKind::SingleMode,
            cutoff: 80,
            margin: 16,
            tolerances: BTreeMap::new(),
            checks: RunConfig::default_checks(RealizationKind::SingleMode),
            output_path: None,
            output_format: OutputFormat::Json,
        }
    }

    #[test]
    fn default_verify_all_pass() {
        let config = base_config();
        let report = run_verify(&config).unwrap();
        assert!(
            report.all_passed(),
            "failures: {:?}",
            report
                .entries
                .iter()
                .filter(|e| e.status == CheckStatus::Fail)
                .collect::<Vec<_>>()
        );
        assert_eq!(report.summary.failed, 0);
        assert_eq!(report.summary.metric_undefined, 0);
        assert!(report.summary.passed > 0);
    }

    #[test]
    fn config_validation_errors() {
        let mut config = base_config();
        config.alpha = 0.3;
        config.beta = 0.3;
        let err = run_verify(&config).unwrap_err().to_string();
        assert!(err.contains("alpha != beta"), "got: {err}");

        let mut config = base_config();
        config.z_grid = vec![1.5];
        let err = run_verify(&config).unwrap_err().to_string();
        assert!(err.contains("outside [-1, 1]"), "got: {err}");

        let mut config = base_config();
        config.z_grid = vec![0.5, 0.0];
        assert!(run_verify(&config).is_err());

        let mut config = base_config();
        config.checks = vec!["nonsense".into()];
        let err = run_verify(&config).unwrap_err().to_string();
        assert!(err.contains("unknown check"), "got: {err}");
    }

    #[test]
    fn tolerance_saturation_produces_failures() {
        let mut config = base_config();
        config.checks = vec!["quasi_hermiticity".into()];
        config.tolerances.insert("quasi_hermiticity".into(), 1e-16);
        let report = run_verify(&config).unwrap();
        assert!(report.summary.failed > 0);
        assert!(!report.all_passed());
    }

    #[test]
    fn single_check_entry_count_matches_grid() {
        let mut config = base_config();
        config.checks = vec!["coeff_identities".into()];
        let report = run_verify(&config).unwrap();
        assert_eq!(report.entries.len(), config.z_grid.len());
    }

    #[test]
    fn metric_undefined_point_is_recorded_not_fatal() {
        let mut config = base_config();
        config.z_grid = vec![0.0, 0.4, 0.5];
        config.checks = vec!["coeff_identities".into(), "quasi_hermiticity".into()];
        let report = run_verify(&config).unwrap();
        assert_eq!(report.summary.failed, 0);
        assert_eq!(report.summary.metric_undefined, 2);
        // defined points still produced passing entries
        assert_eq!(report.summary.passed, 4);
        let undefined: Vec<_> = report
            .entries
            .iter()
            .filter(|e| e.status == CheckStatus::MetricUndefined)
            .collect();
        assert!(undefined.iter().all(|e| e.z == Some(0.4)));
    }

    #[test]
    fn spectrum_rows_and_warnings() {
        let mut config = base_config();
        config.z_grid = vec![0.0];
        let report = run_spectrum(&config, 25).unwrap();
        assert_eq!(report.rows.len(), 25);
        let big_omega = 3.4_f64.sqrt();
        for row in &report.rows[..6] {
            assert!((row.h_predicted - (row.level as f64 + 0.5) * big_omega).abs() < 1e-12);
            assert!(row.h_abs_dev <= 1e-6 * row.h_predicted);
            assert!(row.hs_abs_dev <= 1e-8 * big_omega.max(1.0) || row.level == 0);
            let expected_mult = if row.level == 0 { 1 } else { 2 };
            assert_eq!(row.hs_multiplicity, expected_mult);
            assert!(!row.truncation_warning);
        }
        // trailing rows beyond cutoff/4 carry the warning flag
        assert!(report.rows.last().unwrap().truncation_warning);
    }

    #[test]
    fn sweep_matches_closed_forms() {
        let mut config = base_config();
        config.z_grid = vec![-1.0, 0.0, 0.4, 1.0];
        let report = run_sweep(&config).unwrap();
        assert_eq!(report.rows.len(), 4);
        // grid order preserved
        let zs: Vec<f64> = report.rows.iter().map(|r| r.z).collect();
        assert_eq!(zs, vec![-1.0, 0.0, 0.4, 1.0]);
        // undefined point flagged, not dropped
        assert!(!report.rows[2].valid);
        assert!(report.rows[2].error.is_some());
        // closed forms at the special points
        let row0 = &report.rows[1];
        assert!((row0.epsilon.unwrap() - 0.25 * (0.5_f64 / 0.3).ln()).abs() < 1e-12);
        let row1 = &report.rows[3];
        assert!((row1.epsilon.unwrap() + 1.0 / 12.0).abs() < 1e-12);
        let sc = crate::susy::special_case_coeffs(
            &SwansonParams::new(2.0, 0.5, 0.3).unwrap(),
            SpecialCase::ZPlusOne,
        )
        .unwrap();
        assert!((row1.sigma.unwrap() - sc.sigma).abs() < 1e-10 * sc.sigma.abs());
    }

    #[test]
    fn n_mode_default_suite_passes() {
        // the strongly squeezed grid points need single-mode-sized cutoffs to
        // beat the rho-leakage floor; the mild points fit in 8 levels per mode
        let mut config = base_config();
        config.realization = RealizationKind::NMode { modes: 2 };
        config.cutoff = 8;
        config.margin = 3;
        config.checks = RunConfig::default_checks(config.realization);
        config.z_grid = vec![-0.5, 0.0];
        let report = run_verify(&config).unwrap();
        assert!(
            report.all_passed(),
            "failures: {:?}",
            report
                .entries
                .iter()
                .filter(|e| e.status == CheckStatus::Fail)
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn n_mode_leakage_decays_with_cutoff() {
        // at z = 0.5 the metric is strongly squeezed and the projected
        // residual is pure truncation leakage; growing the cutoff must shrink
        // it by orders of magnitude
        let residual_at = |cutoff: usize, margin: usize| {
            let mut config = base_config();
            config.realization = RealizationKind::NMode { modes: 2 };
            config.cutoff = cutoff;
            config.margin = margin;
            config.checks = vec!["quasi_hermiticity".into()];
            config.z_grid = vec![0.5];
            let report = run_verify(&config).unwrap();
            report.entries[0].residual.unwrap()
        };
        let coarse = residual_at(8, 3);
        let fine = residual_at(12, 3);
        assert!(
            fine < 1e-2 * coarse,
            "leakage did not decay: {coarse} -> {fine}"
        );
    }

    #[test]
    fn single_mode_check_rejected_for_multimode() {
        let mut config = base_config();
        config.realization = RealizationKind::NMode { modes: 2 };
        config.cutoff = 8;
        config.margin = 3;
        config.checks = vec!["bogoliubov".into()];
        let err = run_verify(&config).unwrap_err().to_string();
        assert!(
            err.contains("requires the single_mode realization"),
            "got: {err}"
        );
    }
}
