//! The non-Hermitian oscillator `H = 2ωK0 + 2αK− + 2βK+`, its one-parameter
//! family of positive-definite metrics `ζ₊(z) = ρ²` with
//! `ρ = exp{ε[2K0 + z(K+ + K−)]}`, the equivalent Hermitian Hamiltonian, the
//! distinguished observable, and the disentangled factorization of ρ.
//!
//! All scalar quantities are real by construction; the z = ±1 endpoints use
//! closed limits for ε and Richardson extrapolation for μ and ν, whose 0/0
//! closed forms degenerate there.

use crate::fockspace::TruncatedOperator;
use crate::numkernel::NumError;
use crate::report::CheckFragment;
use crate::superalgebra::GeneratorSet;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no metric in the family at z = {z}: {reason}")]
    MetricUndefined { z: f64, reason: String },
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("factorization undefined: cosh θ ∓ ε sinh θ/θ = {denom} is not positive")]
    FactorizationUndefined { denom: f64 },
    #[error("supercharge closure identity {identity} violated by {residual:.3e}")]
    ClosureViolation {
        identity: &'static str,
        residual: f64,
    },
    #[error("generator set has no odd sector")]
    MissingOddSector,
    #[error("layout mismatch between operands")]
    LayoutMismatch,
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Fock(#[from] crate::fockspace::FockError),
    #[error(transparent)]
    Algebra(#[from] crate::superalgebra::AlgebraError),
}

/// Oscillator couplings with Ω = +sqrt(ω² − 4αβ).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SwansonParams {
    omega: f64,
    alpha: f64,
    beta: f64,
    big_omega: f64,
}

impl SwansonParams {
    pub fn new(omega: f64, alpha: f64, beta: f64) -> Result<Self, ModelError> {
        if !(omega.is_finite() && alpha.is_finite() && beta.is_finite()) {
            return Err(ModelError::InvalidParams(
                "parameters must be finite".into(),
            ));
        }
        if (alpha - beta).abs() <= 1e-12 * (alpha.abs() + beta.abs() + 1.0) {
            return Err(ModelError::InvalidParams(format!(
                "alpha != beta is required (alpha = {alpha}, beta = {beta})"
            )));
        }
        let big_omega_sq = omega * omega - 4.0 * alpha * beta;
        if big_omega_sq <= 0.0 {
            return Err(ModelError::InvalidParams(format!(
                "omega^2 - 4 alpha beta = {big_omega_sq} must be positive"
            )));
        }
        Ok(Self {
            omega,
            alpha,
            beta,
            big_omega: big_omega_sq.sqrt(),
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Ω = +sqrt(ω² − 4αβ), the oscillator frequency of the real spectrum.
    pub fn big_omega(&self) -> f64 {
        self.big_omega
    }
}

/// Metric-family point: z in [−1, 1], the exponent strength ε, and
/// θ = |ε| sqrt(1 − z²).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MetricParams {
    pub z: f64,
    pub epsilon: f64,
    pub theta: f64,
}

impl MetricParams {
    /// Assemble from z and ε, recomputing θ; bypasses the closed form and is
    /// meant for controls and tests.
    pub fn from_epsilon(z: f64, epsilon: f64) -> Self {
        MetricParams {
            z,
            epsilon,
            theta: epsilon.abs() * (1.0 - z * z).max(0.0).sqrt(),
        }
    }
}

/// Coefficients of the equivalent Hermitian Hamiltonian; both positive.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EquivParams {
    pub mu: f64,
    pub nu: f64,
}

impl EquivParams {
    pub fn new(mu: f64, nu: f64) -> Result<Self, ModelError> {
        if mu <= 0.0 {
            return Err(ModelError::NonPositive {
                name: "mu",
                value: mu,
            });
        }
        if nu <= 0.0 {
            return Err(ModelError::NonPositive {
                name: "nu",
                value: nu,
            });
        }
        Ok(EquivParams { mu, nu })
    }
}

/// Disentangling parameters of ρ = exp(pK+) exp(qK0) exp(pK−)
/// = exp(p'K−) exp(q'K0) exp(p'K+).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FactorizationParams {
    pub p: f64,
    pub q: f64,
    pub p_prime: f64,
    pub q_prime: f64,
}

/// sinh(θ)/θ with the removable singularity handled by its Taylor series
/// below θ = 1e-4 (terms through θ⁶).
pub fn sinhc(theta: f64) -> f64 {
    if theta.abs() < 1e-4 {
        let t2 = theta * theta;
        1.0 + t2 / 6.0 + t2 * t2 / 120.0 + t2 * t2 * t2 / 5040.0
    } else {
        theta.sinh() / theta
    }
}

/// Exponent strength of the metric at a given z:
/// ε = arctanh[(α−β)√(1−z²)/(α+β−zω)] / (2√(1−z²)),
/// with the closed limits at z = ±1 and a series form just inside the
/// endpoints.  Fails with `MetricUndefined` when the arctanh argument leaves
/// (−1, 1) or the denominator vanishes.
pub fn epsilon_of(params: &SwansonParams, z: f64) -> Result<MetricParams, ModelError> {
    if !(-1.0..=1.0).contains(&z) {
        return Err(ModelError::InvalidParams(format!(
            "z = {z} outside [-1, 1]"
        )));
    }
    let (omega, alpha, beta) = (params.omega, params.alpha, params.beta);
    let scale = alpha.abs() + beta.abs() + (z * omega).abs() + 1.0;

    let endpoint = |zs: f64| -> Result<f64, ModelError> {
        // ε(1) = −(α−β)/[2(ω−α−β)] and ε(−1) = (α−β)/[2(ω+α+β)],
        // both of the form (α−β)/[2(α+β−zω)]
        let denom = 2.0 * (alpha + beta - zs * omega);
        if denom.abs() <= 1e-12 * scale {
            return Err(ModelError::MetricUndefined {
                z: zs,
                reason: "endpoint denominator vanishes".into(),
            });
        }
        Ok((alpha - beta) / denom)
    };

    if z == 1.0 || z == -1.0 {
        let epsilon = endpoint(z)?;
        return Ok(MetricParams {
            z,
            epsilon,
            theta: 0.0,
        });
    }

    let d = alpha + beta - z * omega;
    if d.abs() <= 1e-12 * scale {
        return Err(ModelError::MetricUndefined {
            z,
            reason: "alpha + beta - z omega vanishes".into(),
        });
    }

    let one_minus_z2 = 1.0 - z * z;
    let epsilon = if one_minus_z2 < 1e-8 {
        // series in (1 − z²) around the endpoint, accurate to 1e-12 there
        let r = (alpha - beta) / d;
        r / 2.0 * (1.0 + r * r * one_minus_z2 / 3.0)
    } else {
        let s = one_minus_z2.sqrt();
        let u = (alpha - beta) * s / d;
        if u.abs() >= 1.0 {
            return Err(ModelError::MetricUndefined {
                z,
                reason: format!("arctanh argument {u} outside (-1, 1)"),
            });
        }
        u.atanh() / (2.0 * s)
    };
    let theta = epsilon.abs() * one_minus_z2.max(0.0).sqrt();
    Ok(MetricParams { z, epsilon, theta })
}

fn mu_nu_closed(params: &SwansonParams, z: f64) -> Result<(f64, f64), ModelError> {
    let (omega, alpha, beta) = (params.omega, params.alpha, params.beta);
    let d = alpha + beta - omega * z;
    let scale = alpha.abs() + beta.abs() + (z * omega).abs() + 1.0;
    if d.abs() <= 1e-12 * scale {
        return Err(ModelError::MetricUndefined {
            z,
            reason: "alpha + beta - z omega vanishes".into(),
        });
    }
    let u2 = (alpha - beta).powi(2) * (1.0 - z * z) / (d * d);
    if u2 >= 1.0 {
        return Err(ModelError::MetricUndefined {
            z,
            reason: format!("square root argument 1 - {u2} is not positive"),
        });
    }
    let root = (1.0 - u2).sqrt();
    // the printed brackets ω−(α+β)z ∓ d√(1−u²) cancel catastrophically at
    // one endpoint each; the rationalized partner form
    //   bracket∓ = (1−z²)Ω² / bracket±
    // is exact algebra on the printed expression and regular there, so each
    // of μ and ν is evaluated through whichever route stays cancellation-free
    // for the sign of z
    let omega_sq = params.big_omega * params.big_omega;
    let bracket_minus = omega - (alpha + beta) * z - d * root;
    let bracket_plus = omega - (alpha + beta) * z + d * root;
    let mu = if z >= 0.0 {
        bracket_minus / ((1.0 + z) * omega)
    } else {
        (1.0 - z) * omega_sq / (omega * bracket_plus)
    };
    let nu = if z >= 0.0 {
        (1.0 + z) * omega * omega_sq / bracket_minus
    } else {
        omega * bracket_plus / (1.0 - z)
    };
    Ok((mu, nu))
}

/// Richardson extrapolation of `f` toward the endpoint `sign`, from the
/// fixed offsets 1e-4, 1e-5, 1e-6.  Returns the extrapolated value and the
/// relative spread of the last three stages.
fn richardson_endpoint(
    sign: f64,
    f: impl Fn(f64) -> Result<f64, ModelError>,
) -> Result<(f64, f64), ModelError> {
    let f1 = f(sign * (1.0 - 1e-4))?;
    let f2 = f(sign * (1.0 - 1e-5))?;
    let f3 = f(sign * (1.0 - 1e-6))?;
    let g1 = (10.0 * f2 - f1) / 9.0;
    let g2 = (10.0 * f3 - f2) / 9.0;
    let limit = (100.0 * g2 - g1) / 99.0;
    let scale = limit.abs() + 1e-300;
    let spread = ((limit - g2).abs().max((g2 - f3).abs())) / scale;
    Ok((limit, spread))
}

/// μ and ν of the equivalent Hermitian Hamiltonian, evaluated through the
/// sign-selected rationalized closed forms so the 0/0 endpoints are exact.
/// The Richardson extrapolation of the raw closed form from
/// z = ±(1−10⁻⁴,⁻⁵,⁻⁶) remains available as an independent cross-check via
/// [`mu_nu_endpoint_stages`].
pub fn mu_nu(params: &SwansonParams, z: f64) -> Result<EquivParams, ModelError> {
    if !(-1.0..=1.0).contains(&z) {
        return Err(ModelError::InvalidParams(format!(
            "z = {z} outside [-1, 1]"
        )));
    }
    let (mu, nu) = mu_nu_closed(params, z)?;
    EquivParams::new(mu, nu)
}

/// The printed closed forms with no rationalization; loses accuracy to
/// cancellation approaching the endpoints and is kept solely so the
/// Richardson diagnostic extrapolates a route independent of [`mu_nu`].
fn mu_nu_printed_raw(params: &SwansonParams, z: f64) -> Result<(f64, f64), ModelError> {
    let (omega, alpha, beta) = (params.omega, params.alpha, params.beta);
    let d = alpha + beta - omega * z;
    let u2 = (alpha - beta).powi(2) * (1.0 - z * z) / (d * d);
    if u2 >= 1.0 {
        return Err(ModelError::MetricUndefined {
            z,
            reason: format!("square root argument 1 - {u2} is not positive"),
        });
    }
    let root = (1.0 - u2).sqrt();
    let mu = (omega - (alpha + beta) * z - d * root) / ((1.0 + z) * omega);
    let nu = omega * (omega - (alpha + beta) * z + d * root) / (1.0 - z);
    Ok((mu, nu))
}

/// Richardson extrapolation of the raw printed closed forms toward the
/// endpoint `sign`: ((μ, spread), (ν, spread)).  Cross-checks the exact
/// endpoint values produced by [`mu_nu`] through an independent route.
#[allow(clippy::type_complexity)]
pub fn mu_nu_endpoint_stages(
    params: &SwansonParams,
    sign: f64,
) -> Result<((f64, f64), (f64, f64)), ModelError> {
    let mu = richardson_endpoint(sign, |zz| Ok(mu_nu_printed_raw(params, zz)?.0))?;
    let nu = richardson_endpoint(sign, |zz| Ok(mu_nu_printed_raw(params, zz)?.1))?;
    Ok((mu, nu))
}

/// H = 2ωK0 + 2αK− + 2βK+.
pub fn swanson_hamiltonian(
    gens: &GeneratorSet,
    params: &SwansonParams,
) -> Result<TruncatedOperator, ModelError> {
    let mut h = gens.k0.scale_real(2.0 * params.omega);
    h = h.add(&gens.k_minus.scale_real(2.0 * params.alpha))?;
    h = h.add(&gens.k_plus.scale_real(2.0 * params.beta))?;
    Ok(h)
}

/// The Hermitian exponent ε[2K0 + z(K+ + K−)] of ρ.
pub fn metric_exponent(
    gens: &GeneratorSet,
    mp: &MetricParams,
) -> Result<TruncatedOperator, ModelError> {
    let mut x = gens.k0.scale_real(2.0);
    if mp.z != 0.0 {
        x = x.add(&gens.k_plus.add(&gens.k_minus)?.scale_real(mp.z))?;
    }
    Ok(x.scale_real(mp.epsilon))
}

/// ρ = exp{ε[2K0 + z(K+ + K−)]}, Hermitian positive-definite.
pub fn metric_rho(
    gens: &GeneratorSet,
    params: &SwansonParams,
    z: f64,
) -> Result<TruncatedOperator, ModelError> {
    let mp = epsilon_of(params, z)?;
    let x = metric_exponent(gens, &mp)?;
    let matrix = x.matrix.expm_hermitian()?;
    Ok(TruncatedOperator::new(
        x.layout.clone(),
        matrix,
        crate::fockspace::Grade::Even,
    ))
}

/// Everything derived from one spectral decomposition of the metric
/// exponent: ρ, ρ⁻¹, ζ₊ = ρ², ζ₊⁻¹ and the extreme eigenvalues of ζ₊.
#[derive(Debug, Clone)]
pub struct MetricBundle {
    pub mp: MetricParams,
    pub rho: TruncatedOperator,
    pub rho_inv: TruncatedOperator,
    pub zeta: TruncatedOperator,
    pub zeta_inv: TruncatedOperator,
    pub zeta_min_eig: f64,
    pub zeta_max_eig: f64,
}

pub fn metric_bundle(
    gens: &GeneratorSet,
    params: &SwansonParams,
    z: f64,
) -> Result<MetricBundle, ModelError> {
    let mp = epsilon_of(params, z)?;
    let x = metric_exponent(gens, &mp)?;
    let layout = x.layout.clone();
    let grade = crate::fockspace::Grade::Even;
    let make = |f: &dyn Fn(f64) -> f64| -> Result<TruncatedOperator, ModelError> {
        Ok(TruncatedOperator::new(
            layout.clone(),
            x.matrix.hermitian_spectral_map(f)?,
            grade,
        ))
    };
    let rho = make(&f64::exp)?;
    let rho_inv = make(&|t: f64| (-t).exp())?;
    let zeta = make(&|t: f64| (2.0 * t).exp())?;
    let zeta_inv = make(&|t: f64| (-2.0 * t).exp())?;
    // extreme metric eigenvalues follow from the exponent spectrum
    let exponent_eigs = if x.matrix.is_diagonal() {
        x.matrix.diagonal().iter().map(|v| v.re).collect::<Vec<_>>()
    } else {
        x.matrix.eig_hermitian()?.eigenvalues
    };
    let (lo, hi) = exponent_eigs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &t| {
            (lo.min(t), hi.max(t))
        });
    Ok(MetricBundle {
        mp,
        rho,
        rho_inv,
        zeta,
        zeta_inv,
        zeta_min_eig: (2.0 * lo).exp(),
        zeta_max_eig: (2.0 * hi).exp(),
    })
}

/// ρ evaluated through the closed power form
/// [(α+β−ωz+(α−β)√(1−z²))/(α+β−ωz−(α−β)√(1−z²))]^{[2K0+z(K++K−)]/(4√(1−z²))},
/// by spectral calculus on the same operator argument.  Cross-checks the
/// exponential constructor.
pub fn metric_rho_power_form(
    gens: &GeneratorSet,
    params: &SwansonParams,
    z: f64,
) -> Result<TruncatedOperator, ModelError> {
    let mp = epsilon_of(params, z)?;
    if 1.0 - z.abs() < 1e-8 {
        // the power form degenerates at the endpoints; fall back to exp(εO)
        return metric_rho(gens, params, z);
    }
    let s = (1.0 - z * z).sqrt();
    let d = params.alpha + params.beta - params.omega * z;
    let num = d + (params.alpha - params.beta) * s;
    let den = d - (params.alpha - params.beta) * s;
    if num / den <= 0.0 {
        return Err(ModelError::MetricUndefined {
            z,
            reason: "power-form base is not positive".into(),
        });
    }
    let base = num / den;
    let power = 1.0 / (4.0 * s);
    // operator argument without the ε prefactor
    let mut o = gens.k0.scale_real(2.0);
    o = o.add(&gens.k_plus.add(&gens.k_minus)?.scale_real(z))?;
    let matrix = o.matrix.hermitian_spectral_map(|t| base.powf(t * power))?;
    let _ = mp;
    Ok(TruncatedOperator::new(
        o.layout.clone(),
        matrix,
        crate::fockspace::Grade::Even,
    ))
}

/// h = (1/2ω)[ν(2K0 + K+ + K−) + μω²(2K0 − K+ − K−)], Hermitian.
pub fn equivalent_hermitian(
    gens: &GeneratorSet,
    params: &SwansonParams,
    z: f64,
) -> Result<TruncatedOperator, ModelError> {
    let ep = mu_nu(params, z)?;
    equivalent_hermitian_from(gens, params, &ep)
}

pub fn equivalent_hermitian_from(
    gens: &GeneratorSet,
    params: &SwansonParams,
    ep: &EquivParams,
) -> Result<TruncatedOperator, ModelError> {
    let omega = params.omega;
    let k2 = gens.k0.scale_real(2.0);
    let kpm = gens.k_plus.add(&gens.k_minus)?;
    let plus = k2.add(&kpm)?.scale_real(ep.nu);
    let minus = k2.sub(&kpm)?.scale_real(ep.mu * omega * omega);
    Ok(plus.add(&minus)?.scale_real(1.0 / (2.0 * omega)))
}

/// The observable O = 2K0 + z(K+ + K−) completing the irreducible set.
pub fn observable(gens: &GeneratorSet, z: f64) -> Result<TruncatedOperator, ModelError> {
    let mut o = gens.k0.scale_real(2.0);
    if z != 0.0 {
        o = o.add(&gens.k_plus.add(&gens.k_minus)?.scale_real(z))?;
    }
    Ok(o)
}

/// Disentangling parameters from the metric point; requires
/// cosh θ ∓ ε sinh θ/θ > 0.
pub fn factorization_params(mp: &MetricParams) -> Result<FactorizationParams, ModelError> {
    let c = mp.theta.cosh();
    let e = mp.epsilon * sinhc(mp.theta);
    let dm = c - e;
    let dp = c + e;
    if dm <= 0.0 {
        return Err(ModelError::FactorizationUndefined { denom: dm });
    }
    if dp <= 0.0 {
        return Err(ModelError::FactorizationUndefined { denom: dp });
    }
    Ok(FactorizationParams {
        p: mp.z * e / dm,
        q: -2.0 * dm.ln(),
        p_prime: mp.z * e / dp,
        q_prime: 2.0 * dp.ln(),
    })
}

/// ρ assembled from the factorized form exp(pK+) exp(qK0) exp(pK−).
pub fn factorized_rho(
    gens: &GeneratorSet,
    fp: &FactorizationParams,
) -> Result<TruncatedOperator, ModelError> {
    let left = gens.k_plus.scale_real(fp.p).matrix.expm_general()?;
    let mid = gens.k0.scale_real(fp.q).matrix.expm_hermitian()?;
    let right = gens.k_minus.scale_real(fp.p).matrix.expm_general()?;
    let matrix = left.matmul(&mid)?.matmul(&right)?;
    Ok(TruncatedOperator::new(
        gens.layout.clone(),
        matrix,
        crate::fockspace::Grade::Even,
    ))
}

/// Relative residual of an operator identity A = B on the projector support:
/// ‖P(A−B)P‖ / (‖PAP‖ + ‖PBP‖ + 1).
pub fn projected_identity_residual(
    a: &TruncatedOperator,
    b: &TruncatedOperator,
    projector: &TruncatedOperator,
) -> f64 {
    let support = projector.diagonal_support();
    let ra = a.matrix.restrict(&support);
    let rb = b.matrix.restrict(&support);
    let denom = ra.fro_norm() + rb.fro_norm() + 1.0;
    ra.sub(&rb).unwrap().fro_norm() / denom
}

/// Relative residual of the conjugation identity m X m⁻¹ = Y evaluated in
/// its one-sided form m X = Y m on the projector.  The inverse-free form is
/// used throughout: m⁻¹ spans the exponential condition number of the metric
/// exponent and would amplify roundoff hopelessly at the larger cutoffs,
/// while m itself stays well conditioned on the support.
pub fn conjugation_residual(
    m: &TruncatedOperator,
    x: &TruncatedOperator,
    y: &TruncatedOperator,
    projector: &TruncatedOperator,
) -> f64 {
    let support = projector.diagonal_support();
    let mx = m.matrix.restricted_product(&x.matrix, &support).unwrap();
    let ym = y.matrix.restricted_product(&m.matrix, &support).unwrap();
    let denom = mx.fro_norm() + ym.fro_norm() + 1.0;
    mx.sub(&ym).unwrap().fro_norm() / denom
}

/// Quasi-Hermiticity check ζ₊ H ζ₊⁻¹ = H†, evaluated as ζ₊H = H†ζ₊ on the
/// projector.
pub fn verify_quasi_hermiticity(
    h: &TruncatedOperator,
    zeta: &TruncatedOperator,
    projector: &TruncatedOperator,
    tol: f64,
) -> Result<CheckFragment, ModelError> {
    let hdag = h.adjoint();
    let mut fragment = CheckFragment::new(tol);
    fragment.push(
        "zeta H = H† zeta",
        conjugation_residual(zeta, h, &hdag, projector),
    );
    Ok(fragment)
}

/// Inverse Bogoliubov relations for the single-mode ladder pair:
/// ρ⁻¹aρ = (cosh θ + ε sinh θ/θ) a + zε (sinh θ/θ) a† and its adjoint
/// partner, both checked in one-sided form on the projector.
pub fn verify_bogoliubov(
    rho: &TruncatedOperator,
    a: &TruncatedOperator,
    a_dag: &TruncatedOperator,
    mp: &MetricParams,
    projector: &TruncatedOperator,
    tol: f64,
) -> Result<CheckFragment, ModelError> {
    let c = mp.theta.cosh();
    let e = mp.epsilon * sinhc(mp.theta);
    let ze = mp.z * e;

    let mut fragment = CheckFragment::new(tol);
    // ρ⁻¹ a ρ = Y  ⟺  a ρ = ρ Y
    let expect_a = a.scale_real(c + e).add(&a_dag.scale_real(ze))?;
    let lhs = a.mul(rho)?;
    let rhs = rho.mul(&expect_a)?;
    fragment.push(
        "rho^-1 a rho = (cosh + e) a + z e a†",
        projected_identity_residual(&lhs, &rhs, projector),
    );

    let expect_adag = a_dag.scale_real(c - e).add(&a.scale_real(-ze))?;
    let lhs = a_dag.mul(rho)?;
    let rhs = rho.mul(&expect_adag)?;
    fragment.push(
        "rho^-1 a† rho = (cosh - e) a† - z e a",
        projected_identity_residual(&lhs, &rhs, projector),
    );
    Ok(fragment)
}

/// ρ compared against its disentangled factorization on the projector.
pub fn verify_factorization(
    rho: &TruncatedOperator,
    gens: &GeneratorSet,
    fp: &FactorizationParams,
    projector: &TruncatedOperator,
    tol: f64,
) -> Result<CheckFragment, ModelError> {
    let fact = factorized_rho(gens, fp)?;
    let mut fragment = CheckFragment::new(tol);
    fragment.push(
        "rho = exp(pK+) exp(qK0) exp(pK-)",
        projected_identity_residual(rho, &fact, projector),
    );
    Ok(fragment)
}
