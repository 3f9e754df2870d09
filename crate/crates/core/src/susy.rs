//! The supersymmetric extension: H_S = 2ωK0 + 2αK− + 2βK+ + 2ΩY, the
//! Hermitian supercharges Q, Q†, the pseudo-supercharges 𝒬 = σW+ + τW− and
//! 𝒬♯ = φV− + χV+ with their z-dependent coefficients, the x–p forms, the
//! z ∈ {−1, 0, 1} closed-form cases, and the graded-algebra verifications.

use crate::fockspace::{fermion_ops, quadratures, ModeLayout, TruncatedOperator};
use crate::metric::{
    conjugation_residual, projected_identity_residual, sinhc, EquivParams, FactorizationParams,
    MetricParams, ModelError, SwansonParams,
};
use crate::numkernel::c64;
use crate::report::CheckFragment;
use crate::superalgebra::GeneratorSet;
use serde::Serialize;

/// Tolerance at which a closure-identity miss is treated as an upstream
/// numerical fault rather than a residual to report.
const CLOSURE_FAULT_TOL: f64 = 1e-10;

/// Coefficients of the pseudo-supercharges; they satisfy
/// σφ + τχ = 4ω, σφ − τχ = 4Ω, σχ = 4β, τφ = 4α.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SuperchargeCoeffs {
    pub sigma: f64,
    pub tau: f64,
    pub varphi: f64,
    pub chi: f64,
}

impl SuperchargeCoeffs {
    /// Validating constructor: any closure identity off by more than 1e-10
    /// relative signals an upstream numerical fault.
    pub fn new(
        sigma: f64,
        tau: f64,
        varphi: f64,
        chi: f64,
        params: &SwansonParams,
    ) -> Result<Self, ModelError> {
        const NAMES: [&str; 4] = [
            "sigma*phi + tau*chi = 4 omega",
            "sigma*phi - tau*chi = 4 Omega",
            "sigma*chi = 4 beta",
            "tau*phi = 4 alpha",
        ];
        let coeffs = SuperchargeCoeffs {
            sigma,
            tau,
            varphi,
            chi,
        };
        for (residual, name) in coeffs.closure_residuals(params).into_iter().zip(NAMES) {
            if residual > CLOSURE_FAULT_TOL {
                return Err(ModelError::ClosureViolation {
                    identity: name,
                    residual,
                });
            }
        }
        Ok(coeffs)
    }

    /// Non-validating constructor for controls and diagnostics.
    pub fn new_unchecked(sigma: f64, tau: f64, varphi: f64, chi: f64) -> Self {
        SuperchargeCoeffs {
            sigma,
            tau,
            varphi,
            chi,
        }
    }

    /// Relative residuals of the four closure identities.
    pub fn closure_residuals(&self, params: &SwansonParams) -> [f64; 4] {
        let rel = |lhs: f64, target: f64| {
            let denom = if target.abs() > 1e-12 {
                target.abs()
            } else {
                1.0
            };
            (lhs - target).abs() / denom
        };
        [
            rel(
                self.sigma * self.varphi + self.tau * self.chi,
                4.0 * params.omega(),
            ),
            rel(
                self.sigma * self.varphi - self.tau * self.chi,
                4.0 * params.big_omega(),
            ),
            rel(self.sigma * self.chi, 4.0 * params.beta()),
            rel(self.tau * self.varphi, 4.0 * params.alpha()),
        ]
    }
}

/// Closed-form coefficients at the three special metric points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpecialCase {
    ZMinusOne,
    ZZero,
    ZPlusOne,
}

impl SpecialCase {
    pub fn z(&self) -> f64 {
        match self {
            SpecialCase::ZMinusOne => -1.0,
            SpecialCase::ZZero => 0.0,
            SpecialCase::ZPlusOne => 1.0,
        }
    }

    pub fn from_z(z: f64) -> Option<Self> {
        if z == -1.0 {
            Some(SpecialCase::ZMinusOne)
        } else if z == 0.0 {
            Some(SpecialCase::ZZero)
        } else if z == 1.0 {
            Some(SpecialCase::ZPlusOne)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpecialCaseCoeffs {
    pub case_z: i8,
    pub sigma: f64,
    pub tau: f64,
    pub varphi: f64,
    pub chi: f64,
    /// γ± = [(α/β)^{1/4} ± (β/α)^{1/4}]/2, populated for the z = 0 case.
    pub gamma_plus: Option<f64>,
    pub gamma_minus: Option<f64>,
}

/// Closed forms of σ, τ, φ, χ at z ∈ {−1, 0, +1}.
pub fn special_case_coeffs(
    params: &SwansonParams,
    case: SpecialCase,
) -> Result<SpecialCaseCoeffs, ModelError> {
    let (omega, alpha, beta) = (params.omega(), params.alpha(), params.beta());
    let big_omega = params.big_omega();
    match case {
        SpecialCase::ZZero => {
            if alpha * beta <= 0.0 {
                return Err(ModelError::InvalidParams(format!(
                    "z = 0 closed forms need alpha*beta > 0, got {}",
                    alpha * beta
                )));
            }
            let sab = (alpha * beta).sqrt();
            if omega - 2.0 * sab < 0.0 {
                return Err(ModelError::InvalidParams(format!(
                    "z = 0 closed forms need omega - 2 sqrt(alpha beta) >= 0, got {}",
                    omega - 2.0 * sab
                )));
            }
            let plus = (omega + 2.0 * sab).sqrt();
            let minus = (omega - 2.0 * sab).sqrt();
            let ba = (beta / alpha).powf(0.25);
            let ab = (alpha / beta).powf(0.25);
            Ok(SpecialCaseCoeffs {
                case_z: 0,
                sigma: ba * (plus + minus),
                tau: ab * (plus - minus),
                varphi: ab * (plus + minus),
                chi: ba * (plus - minus),
                gamma_plus: Some(0.5 * (ab + ba)),
                gamma_minus: Some(0.5 * (ab - ba)),
            })
        }
        SpecialCase::ZPlusOne => {
            let d = omega - alpha - beta;
            if d <= 0.0 {
                return Err(ModelError::InvalidParams(format!(
                    "z = 1 closed forms need omega - alpha - beta > 0, got {d}"
                )));
            }
            let root = d.sqrt();
            Ok(SpecialCaseCoeffs {
                case_z: 1,
                sigma: (big_omega + omega - 2.0 * beta) / root,
                tau: (big_omega - omega + 2.0 * alpha) / root,
                varphi: (big_omega + omega - 2.0 * alpha) / root,
                chi: (big_omega - omega + 2.0 * beta) / root,
                gamma_plus: None,
                gamma_minus: None,
            })
        }
        SpecialCase::ZMinusOne => {
            let d = omega + alpha + beta;
            if d <= 0.0 {
                return Err(ModelError::InvalidParams(format!(
                    "z = -1 closed forms need omega + alpha + beta > 0, got {d}"
                )));
            }
            let root = d.sqrt();
            Ok(SpecialCaseCoeffs {
                case_z: -1,
                sigma: (big_omega + omega + 2.0 * beta) / root,
                tau: -(big_omega - omega - 2.0 * alpha) / root,
                varphi: (big_omega + omega + 2.0 * alpha) / root,
                chi: -(big_omega - omega - 2.0 * beta) / root,
                gamma_plus: None,
                gamma_minus: None,
            })
        }
    }
}

/// General z-dependent coefficients:
/// σ = (1/√ω){(ω√μ+√ν) cosh θ − [(ω√μ+√ν) + z(ω√μ−√ν)] ε sinh θ/θ}
/// and partners.
pub fn supercharge_coeffs(
    params: &SwansonParams,
    mp: &MetricParams,
    ep: &EquivParams,
) -> Result<SuperchargeCoeffs, ModelError> {
    let omega = params.omega();
    let plus = omega * ep.mu.sqrt() + ep.nu.sqrt();
    let minus = omega * ep.mu.sqrt() - ep.nu.sqrt();
    let c = mp.theta.cosh();
    let e = mp.epsilon * sinhc(mp.theta);
    let inv_sqrt_omega = 1.0 / omega.sqrt();

    let sigma = inv_sqrt_omega * (plus * c - (plus + mp.z * minus) * e);
    let tau = inv_sqrt_omega * (-minus * c - (minus + mp.z * plus) * e);
    let varphi = inv_sqrt_omega * (plus * c + (plus + mp.z * minus) * e);
    let chi = inv_sqrt_omega * (-minus * c + (minus + mp.z * plus) * e);
    SuperchargeCoeffs::new(sigma, tau, varphi, chi, params)
}

/// H_S = 2ωK0 + 2αK− + 2βK+ + 2ΩY.
pub fn supersym_hamiltonian(
    gens: &GeneratorSet,
    params: &SwansonParams,
) -> Result<TruncatedOperator, ModelError> {
    let y = gens.y.as_ref().ok_or(ModelError::MissingOddSector)?;
    let h = crate::metric::swanson_hamiltonian(gens, params)?;
    Ok(h.add(&y.scale_real(2.0 * params.big_omega()))?)
}

/// Equivalent Hermitian h_S = h + 2ΩY.
pub fn supersym_hermitian(
    gens: &GeneratorSet,
    params: &SwansonParams,
    z: f64,
) -> Result<TruncatedOperator, ModelError> {
    let y = gens.y.as_ref().ok_or(ModelError::MissingOddSector)?;
    let h = crate::metric::equivalent_hermitian(gens, params, z)?;
    Ok(h.add(&y.scale_real(2.0 * params.big_omega()))?)
}

/// Dressed bosonic mode diagonalizing h: ã† is the printed combination of a
/// and a†, and ã = (ã†)†.
pub fn tilde_mode(
    a: &TruncatedOperator,
    a_dag: &TruncatedOperator,
    ep: &EquivParams,
    omega: f64,
) -> Result<(TruncatedOperator, TruncatedOperator), ModelError> {
    let ratio = (ep.nu / ep.mu).powf(0.25);
    let inv_ratio = (ep.mu / ep.nu).powf(0.25);
    let pref = 1.0 / (2.0 * omega.sqrt());
    let ca = pref * (ratio - omega * inv_ratio);
    let cadag = pref * (ratio + omega * inv_ratio);
    let tilde_dag = a.scale_real(ca).add(&a_dag.scale_real(cadag))?;
    let tilde = tilde_dag.adjoint();
    Ok((tilde, tilde_dag))
}

/// Hermitian supercharges Q = sqrt(2Ω) ã† b and Q† for the graded layout.
pub fn hermitian_supercharges(
    tilde_dag: &TruncatedOperator,
    b: &TruncatedOperator,
    big_omega: f64,
) -> Result<(TruncatedOperator, TruncatedOperator), ModelError> {
    let q = tilde_dag.mul(b)?.scale_real((2.0 * big_omega).sqrt());
    let q_dag = q.adjoint();
    Ok((q, q_dag))
}

/// 𝒬 = σW+ + τW−, 𝒬♯ = φV− + χV+.
pub fn pseudo_supercharges(
    gens: &GeneratorSet,
    coeffs: &SuperchargeCoeffs,
) -> Result<(TruncatedOperator, TruncatedOperator), ModelError> {
    let (Some(v_plus), Some(v_minus), Some(w_plus), Some(w_minus)) =
        (&gens.v_plus, &gens.v_minus, &gens.w_plus, &gens.w_minus)
    else {
        return Err(ModelError::MissingOddSector);
    };
    let qcal = w_plus
        .scale_real(coeffs.sigma)
        .add(&w_minus.scale_real(coeffs.tau))?;
    let qcal_sharp = v_minus
        .scale_real(coeffs.varphi)
        .add(&v_plus.scale_real(coeffs.chi))?;
    Ok((qcal, qcal_sharp))
}

/// Pseudo-supercharges in quadrature form for the single-mode layout:
/// 𝒬 = (1/2√ω)[(σ+τ)ωx − i(σ−τ)p]·b and
/// 𝒬♯ = (1/2√ω)[(φ+χ)ωx + i(φ−χ)p]·b†; the fermionic factors restore the
/// odd grade so the operators coincide with the generator-basis forms.
pub fn pseudo_supercharges_xp(
    coeffs: &SuperchargeCoeffs,
    omega: f64,
    layout: &ModeLayout,
) -> Result<(TruncatedOperator, TruncatedOperator), ModelError> {
    let bosons = layout.boson_factor_indices();
    let fermions = layout.fermion_factor_indices();
    if bosons.len() != 1 || fermions.len() != 1 {
        return Err(ModelError::InvalidParams(
            "x-p supercharges need exactly one boson and one fermion factor".into(),
        ));
    }
    let (x, p) = quadratures(layout, bosons[0], omega)?;
    let (b, bdag) = fermion_ops(layout, fermions[0])?;
    let pref = 1.0 / (2.0 * omega.sqrt());

    let qx = x.scale_real((coeffs.sigma + coeffs.tau) * omega);
    let qp = p.scale(c64(0.0, -(coeffs.sigma - coeffs.tau)));
    let q_boson = qx.add(&qp)?.scale_real(pref);
    let qcal = q_boson.mul(&b)?;

    let sx = x.scale_real((coeffs.varphi + coeffs.chi) * omega);
    let sp = p.scale(c64(0.0, coeffs.varphi - coeffs.chi));
    let s_boson = sx.add(&sp)?.scale_real(pref);
    let qcal_sharp = s_boson.mul(&bdag)?;
    Ok((qcal, qcal_sharp))
}

/// Exact nilpotency of the pseudo-supercharges: ‖P 𝒬² P‖ and ‖P 𝒬♯² P‖
/// relative to the squared operand norms plus one.
pub fn verify_nilpotency(
    qcal: &TruncatedOperator,
    qcal_sharp: &TruncatedOperator,
    projector: &TruncatedOperator,
    tol: f64,
) -> Result<CheckFragment, ModelError> {
    let support = projector.diagonal_support();
    let mut fragment = CheckFragment::new(tol);
    for (op, label) in [(qcal, "Qcal^2 = 0"), (qcal_sharp, "Qcal#^2 = 0")] {
        let sq = op.matrix.restricted_product(&op.matrix, &support).unwrap();
        let norm = op.matrix.restrict(&support).fro_norm();
        fragment.push(label, sq.fro_norm() / (norm * norm + 1.0));
    }
    Ok(fragment)
}

/// The graded-algebra content of the pseudo-supersymmetric construction:
/// {𝒬, 𝒬♯} = 2H_S, pseudo-adjointness ζ₊𝒬♯ = 𝒬†ζ₊, and the consistency
/// condition ζ₊(φV− + χV+) = (σV− + τV+)ζ₊.
#[allow(clippy::too_many_arguments)]
pub fn verify_pseudo_susy(
    qcal: &TruncatedOperator,
    qcal_sharp: &TruncatedOperator,
    hs: &TruncatedOperator,
    zeta: &TruncatedOperator,
    gens: &GeneratorSet,
    coeffs: &SuperchargeCoeffs,
    projector: &TruncatedOperator,
    tol: f64,
) -> Result<CheckFragment, ModelError> {
    let mut fragment = CheckFragment::new(tol);

    let anti = qcal.anticommutator(qcal_sharp)?;
    let two_hs = hs.scale_real(2.0);
    fragment.push(
        "{Qcal, Qcal#} = 2 H_S",
        projected_identity_residual(&anti, &two_hs, projector),
    );

    let q_dag = qcal.adjoint();
    fragment.push(
        "Qcal# = zeta^-1 Qcal† zeta",
        conjugation_residual(zeta, qcal_sharp, &q_dag, projector),
    );

    if let (Some(v_plus), Some(v_minus)) = (&gens.v_plus, &gens.v_minus) {
        let lhs = v_minus
            .scale_real(coeffs.varphi)
            .add(&v_plus.scale_real(coeffs.chi))?;
        let rhs = v_minus
            .scale_real(coeffs.sigma)
            .add(&v_plus.scale_real(coeffs.tau))?;
        fragment.push(
            "rho (phi V- + chi V+) rho^-1 = rho^-1 (sigma V- + tau V+) rho",
            conjugation_residual(zeta, &lhs, &rhs, projector),
        );
    }
    Ok(fragment)
}

/// The four disentangling conjugation relations, in one-sided form:
/// ρV+ρ⁻¹ = e^{q'/2}(V+ + p'V−), ρV−ρ⁻¹ = e^{−q/2}(V− − pV+),
/// ρ⁻¹V+ρ = e^{−q/2}(V+ − pV−), ρ⁻¹V−ρ = e^{q'/2}(V− + p'V+).
pub fn verify_bch_relations(
    rho: &TruncatedOperator,
    gens: &GeneratorSet,
    fp: &FactorizationParams,
    projector: &TruncatedOperator,
    tol: f64,
) -> Result<CheckFragment, ModelError> {
    let (Some(v_plus), Some(v_minus)) = (&gens.v_plus, &gens.v_minus) else {
        return Err(ModelError::MissingOddSector);
    };
    let eqp = (fp.q_prime / 2.0).exp();
    let eqm = (-fp.q / 2.0).exp();
    let mut fragment = CheckFragment::new(tol);

    // ρ V+ ρ⁻¹ = Y  ⟺  ρ V+ = Y ρ
    let y1 = v_plus.add(&v_minus.scale_real(fp.p_prime))?.scale_real(eqp);
    fragment.push(
        "rho V+ rho^-1 = e^{q'/2}(V+ + p' V-)",
        conjugation_residual(rho, v_plus, &y1, projector),
    );
    let y2 = v_minus.sub(&v_plus.scale_real(fp.p))?.scale_real(eqm);
    fragment.push(
        "rho V- rho^-1 = e^{-q/2}(V- - p V+)",
        conjugation_residual(rho, v_minus, &y2, projector),
    );
    // ρ⁻¹ V+ ρ = Y  ⟺  V+ ρ = ρ Y
    let y3 = v_plus.sub(&v_minus.scale_real(fp.p))?.scale_real(eqm);
    let lhs = v_plus.mul(rho)?;
    let rhs = rho.mul(&y3)?;
    fragment.push(
        "rho^-1 V+ rho = e^{-q/2}(V+ - p V-)",
        projected_identity_residual(&lhs, &rhs, projector),
    );
    let y4 = v_minus.add(&v_plus.scale_real(fp.p_prime))?.scale_real(eqp);
    let lhs = v_minus.mul(rho)?;
    let rhs = rho.mul(&y4)?;
    fragment.push(
        "rho^-1 V- rho = e^{q'/2}(V- + p' V+)",
        projected_identity_residual(&lhs, &rhs, projector),
    );
    Ok(fragment)
}

/// Intertwining of the pseudo and Hermitian supercharges and Hamiltonians:
/// ρ𝒬ρ⁻¹ = Q and ρHρ⁻¹ = h, both one-sided.
pub fn verify_intertwining(
    rho: &TruncatedOperator,
    qcal: &TruncatedOperator,
    q: &TruncatedOperator,
    h: &TruncatedOperator,
    h_herm: &TruncatedOperator,
    projector: &TruncatedOperator,
    tol: f64,
) -> Result<CheckFragment, ModelError> {
    let mut fragment = CheckFragment::new(tol);
    fragment.push(
        "rho Qcal rho^-1 = Q",
        conjugation_residual(rho, qcal, q, projector),
    );
    fragment.push(
        "rho H rho^-1 = h",
        conjugation_residual(rho, h, h_herm, projector),
    );
    Ok(fragment)
}

/// Degeneracy pattern of the supersymmetric spectrum: clusters of
/// eigenvalues of h_S at nΩ with multiplicity 1 for n = 0 and 2 for
/// 1 ≤ n ≤ max_level.
#[derive(Debug, Clone, Serialize)]
pub struct DegeneracyReport {
    pub clusters: Vec<(f64, usize)>,
    pub max_center_deviation: f64,
    pub multiplicities_ok: bool,
}

pub fn susy_degeneracy(
    hs_herm: &TruncatedOperator,
    big_omega: f64,
    max_level: usize,
    cluster_tol: f64,
) -> Result<DegeneracyReport, ModelError> {
    let eig = hs_herm.matrix.eig_hermitian()?;
    let gap = cluster_tol * big_omega;
    let mut clusters: Vec<(f64, usize)> = Vec::new();
    for &lambda in &eig.eigenvalues {
        match clusters.last_mut() {
            Some((center, count)) if (lambda - *center).abs() <= gap => {
                // running mean keeps the center stable inside the cluster
                *center = (*center * *count as f64 + lambda) / (*count as f64 + 1.0);
                *count += 1;
            }
            _ => clusters.push((lambda, 1)),
        }
    }
    clusters.truncate(max_level + 1);
    let mut max_dev = 0.0_f64;
    let mut ok = clusters.len() == max_level + 1;
    for (n, &(center, count)) in clusters.iter().enumerate() {
        let predicted = n as f64 * big_omega;
        max_dev = max_dev.max((center - predicted).abs() / big_omega);
        let expected = if n == 0 { 1 } else { 2 };
        if count != expected {
            ok = false;
        }
    }
    Ok(DegeneracyReport {
        clusters,
        max_center_deviation: max_dev,
        multiplicities_ok: ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{
        boson_ops, interior_projector, total_quanta_projector, Grade, ModeLayout,
    };
    use crate::metric::{
        epsilon_of, factorization_params, metric_bundle, mu_nu, swanson_hamiltonian,
    };
    use crate::superalgebra::su11_single_mode;
    use approx::assert_relative_eq;

    fn canonical() -> SwansonParams {
        SwansonParams::new(2.0, 0.5, 0.3).unwrap()
    }

    fn setup(cutoff: usize) -> (SwansonParams, ModeLayout, GeneratorSet) {
        let p = canonical();
        let layout = ModeLayout::boson_fermion(cutoff).unwrap();
        let gens = su11_single_mode(&layout).unwrap();
        (p, layout, gens)
    }

    #[test]
    fn hs_matches_tensor_form() {
        // H_S = H ⊗ I_F + I_B ⊗ Ω(b†b − 1/2) entrywise
        let (p, layout, gens) = setup(12);
        let hs = supersym_hamiltonian(&gens, &p).unwrap();
        let h = swanson_hamiltonian(&gens, &p).unwrap();
        let (b, bdag) = fermion_ops(&layout, 1).unwrap();
        let identity = TruncatedOperator::identity(&layout);
        let hf = bdag
            .mul(&b)
            .unwrap()
            .sub(&identity.scale_real(0.5))
            .unwrap()
            .scale_real(p.big_omega());
        let direct = h.add(&hf).unwrap();
        assert!(hs.matrix.sub(&direct.matrix).unwrap().fro_norm() < 1e-12);
    }

    #[test]
    fn hs_hermitian_ground_state_is_zero() {
        let (p, _, gens) = setup(80);
        let hs_herm = supersym_hermitian(&gens, &p, 0.0).unwrap();
        let eig = hs_herm.matrix.eig_hermitian().unwrap();
        assert!(
            eig.eigenvalues[0].abs() < 1e-9,
            "ground = {}",
            eig.eigenvalues[0]
        );
    }

    #[test]
    fn susy_degeneracy_pattern() {
        let (p, _, gens) = setup(80);
        let hs_herm = supersym_hermitian(&gens, &p, 0.0).unwrap();
        let report = susy_degeneracy(&hs_herm, p.big_omega(), 5, 1e-8).unwrap();
        assert!(report.multiplicities_ok, "clusters: {:?}", report.clusters);
        assert_eq!(report.clusters[0].1, 1);
        for n in 1..=5 {
            assert_eq!(report.clusters[n].1, 2, "cluster {n}");
        }
        assert!(report.max_center_deviation < 1e-8);
    }

    #[test]
    fn tilde_mode_properties() {
        let (p, layout, gens) = setup(64);
        let (a, adag) = boson_ops(&layout, 0).unwrap();
        let ep = mu_nu(&p, 0.5).unwrap();
        let (tilde, tilde_dag) = tilde_mode(&a, &adag, &ep, p.omega()).unwrap();
        // bosonic commutation relation on the interior
        let comm = tilde.commutator(&tilde_dag).unwrap();
        let proj = interior_projector(&layout, 2).unwrap();
        let support = proj.diagonal_support();
        let restricted = comm.matrix.restrict(&support);
        let diff = restricted
            .sub(&crate::numkernel::ComplexMatrix::identity(support.len()))
            .unwrap();
        assert!(diff.fro_norm() < 1e-10);
        // h_B = Ω(ã†ã + 1/2) reproduces the Hermitian equivalent away from
        // the truncation corner (ã†ã hits the broken aa† entry at the top)
        let hb = tilde_dag
            .mul(&tilde)
            .unwrap()
            .add(&TruncatedOperator::identity(&layout).scale_real(0.5))
            .unwrap()
            .scale_real(p.big_omega());
        let h_herm = crate::metric::equivalent_hermitian(&gens, &p, 0.5).unwrap();
        let res = projected_identity_residual(&hb, &h_herm, &proj);
        assert!(res < 1e-12, "residual {res}");
    }

    #[test]
    fn tilde_mode_harmonic_point() {
        // μ = 1/ω, ν = ω collapses the dressing: ã† = a†
        let (p, layout, _) = setup(8);
        let (a, adag) = boson_ops(&layout, 0).unwrap();
        let ep = EquivParams::new(1.0 / p.omega(), p.omega()).unwrap();
        let (_, tilde_dag) = tilde_mode(&a, &adag, &ep, p.omega()).unwrap();
        assert!(tilde_dag.matrix.sub(&adag.matrix).unwrap().fro_norm() < 1e-13);
    }

    #[test]
    fn hermitian_supercharges_algebra() {
        let (p, layout, gens) = setup(64);
        let (a, adag) = boson_ops(&layout, 0).unwrap();
        let (b, _) = fermion_ops(&layout, 1).unwrap();
        let ep = mu_nu(&p, 0.0).unwrap();
        let (_, tilde_dag) = tilde_mode(&a, &adag, &ep, p.omega()).unwrap();
        let (q, q_dag) = hermitian_supercharges(&tilde_dag, &b, p.big_omega()).unwrap();
        // exact nilpotency
        assert!(q.mul(&q).unwrap().matrix.fro_norm() < 1e-12);
        assert!(q_dag.mul(&q_dag).unwrap().matrix.fro_norm() < 1e-12);
        // {Q, Q†} = 2 h_S on the interior
        let anti = q.anticommutator(&q_dag).unwrap();
        let hs_herm = supersym_hermitian(&gens, &p, 0.0).unwrap();
        let proj = interior_projector(&layout, 4).unwrap();
        let res = projected_identity_residual(&anti, &hs_herm.scale_real(2.0), &proj);
        assert!(res < 1e-9, "residual {res}");
        // Q annihilates every n_F = 0 state
        for nb in 0..8 {
            let col = layout.basis_index(&[nb, 0]);
            for row in 0..q.dim() {
                assert_eq!(q.matrix[(row, col)], c64(0.0, 0.0));
            }
        }
    }

    #[test]
    fn coeff_closure_and_special_cases() {
        let p = canonical();
        // general formula closure across the defined grid
        for z in [-1.0, -0.5, 0.0, 0.25, 0.5, 0.75, 1.0] {
            let mp = epsilon_of(&p, z).unwrap();
            let ep = mu_nu(&p, z).unwrap();
            let coeffs = supercharge_coeffs(&p, &mp, &ep).unwrap();
            for r in coeffs.closure_residuals(&p) {
                assert!(r < 1e-12, "z = {z}: residual {r}");
            }
        }
        // frozen closed-form values at z = 0 (50-digit reference)
        let sc0 = special_case_coeffs(&p, SpecialCase::ZZero).unwrap();
        assert_relative_eq!(sc0.sigma, 2.440_278_272_735_114, max_relative = 1e-14);
        assert_relative_eq!(sc0.tau, 0.634_842_901_234_619_7, max_relative = 1e-14);
        assert_relative_eq!(sc0.varphi, 3.150385703471633, max_relative = 1e-14);
        assert_relative_eq!(sc0.chi, 0.49174719678793646, max_relative = 1e-14);
        let gp = sc0.gamma_plus.unwrap();
        let gm = sc0.gamma_minus.unwrap();
        assert_relative_eq!(gp, 1.0081655516304464, max_relative = 1e-14);
        assert_relative_eq!(gm, 0.128_053_814_837_053, max_relative = 1e-14);
        assert_relative_eq!(gp * gp - gm * gm, 1.0, max_relative = 1e-13);
        // z = 1: σ = (Ω + ω − 2β)/sqrt(ω − α − β) = (sqrt(3.4) + 1.4)/sqrt(1.2)
        let sc1 = special_case_coeffs(&p, SpecialCase::ZPlusOne).unwrap();
        assert_relative_eq!(
            sc1.sigma,
            (3.4_f64.sqrt() + 1.4) / 1.2_f64.sqrt(),
            max_relative = 1e-14
        );
        // the closed forms satisfy the same closure identities
        for case in [
            SpecialCase::ZMinusOne,
            SpecialCase::ZZero,
            SpecialCase::ZPlusOne,
        ] {
            let sc = special_case_coeffs(&p, case).unwrap();
            let coeffs = SuperchargeCoeffs::new_unchecked(sc.sigma, sc.tau, sc.varphi, sc.chi);
            for r in coeffs.closure_residuals(&p) {
                assert!(r < 1e-12, "case {case:?}: residual {r}");
            }
        }
        // general formula matches the closed forms at the special points
        for case in [
            SpecialCase::ZMinusOne,
            SpecialCase::ZZero,
            SpecialCase::ZPlusOne,
        ] {
            let z = case.z();
            let mp = epsilon_of(&p, z).unwrap();
            let ep = mu_nu(&p, z).unwrap();
            let general = supercharge_coeffs(&p, &mp, &ep).unwrap();
            let sc = special_case_coeffs(&p, case).unwrap();
            assert_relative_eq!(general.sigma, sc.sigma, max_relative = 1e-10);
            assert_relative_eq!(general.tau, sc.tau, max_relative = 1e-10);
            assert_relative_eq!(general.varphi, sc.varphi, max_relative = 1e-10);
            assert_relative_eq!(general.chi, sc.chi, max_relative = 1e-10);
        }
    }

    #[test]
    fn special_case_domain_errors() {
        // αβ < 0 rejects the z = 0 closed forms while Ω² stays positive
        let p = SwansonParams::new(2.0, 0.5, -0.3).unwrap();
        assert!(special_case_coeffs(&p, SpecialCase::ZZero).is_err());
        // for opposite-sign couplings |α−β| > |α+β|, so the metric family is
        // empty at z = 0 itself; the general path opens up at larger |z|
        assert!(epsilon_of(&p, 0.0).is_err());
        let mp = epsilon_of(&p, 0.9).unwrap();
        let ep = mu_nu(&p, 0.9).unwrap();
        let coeffs = supercharge_coeffs(&p, &mp, &ep).unwrap();
        for r in coeffs.closure_residuals(&p) {
            assert!(r < 1e-11, "residual {r}");
        }
    }

    #[test]
    fn closure_violation_detected() {
        let p = canonical();
        let sc = special_case_coeffs(&p, SpecialCase::ZZero).unwrap();
        let bad = SuperchargeCoeffs::new(sc.sigma * (1.0 + 1e-6), sc.tau, sc.varphi, sc.chi, &p);
        assert!(matches!(bad, Err(ModelError::ClosureViolation { .. })));
    }

    #[test]
    fn pseudo_supercharge_algebra() {
        let (p, layout, gens) = setup(80);
        let hs = supersym_hamiltonian(&gens, &p).unwrap();
        let low = total_quanta_projector(&layout, 20);
        for z in [-1.0, -0.5, 0.0, 0.5, 1.0] {
            let bundle = metric_bundle(&gens, &p, z).unwrap();
            let ep = mu_nu(&p, z).unwrap();
            let coeffs = supercharge_coeffs(&p, &bundle.mp, &ep).unwrap();
            let (qcal, qcal_sharp) = pseudo_supercharges(&gens, &coeffs).unwrap();
            assert_eq!(qcal.grade, Grade::Odd);

            let nil = verify_nilpotency(&qcal, &qcal_sharp, &low, 1e-13).unwrap();
            assert!(nil.passed(), "z = {z}: {:?}", nil.worst());

            let fragment = verify_pseudo_susy(
                &qcal,
                &qcal_sharp,
                &hs,
                &bundle.zeta,
                &gens,
                &coeffs,
                &low,
                1e-8,
            )
            .unwrap();
            assert!(fragment.passed(), "z = {z}: {:?}", fragment.worst());
        }
    }

    #[test]
    fn pseudo_supercharge_perturbation_control() {
        let (p, layout, gens) = setup(48);
        let hs = supersym_hamiltonian(&gens, &p).unwrap();
        let low = total_quanta_projector(&layout, 12);
        let bundle = metric_bundle(&gens, &p, 0.0).unwrap();
        let ep = mu_nu(&p, 0.0).unwrap();
        let good = supercharge_coeffs(&p, &bundle.mp, &ep).unwrap();
        let bad = SuperchargeCoeffs::new_unchecked(
            good.sigma * (1.0 + 1e-4),
            good.tau,
            good.varphi,
            good.chi,
        );
        let (qcal, qcal_sharp) = pseudo_supercharges(&gens, &bad).unwrap();
        let fragment = verify_pseudo_susy(
            &qcal,
            &qcal_sharp,
            &hs,
            &bundle.zeta,
            &gens,
            &bad,
            &low,
            1e-8,
        )
        .unwrap();
        assert!(!fragment.passed());
        let worst = fragment.max_residual();
        assert!(worst > 1e-6 && worst < 1e-2, "residual {worst}");
        // wrong metric: identity ζ breaks pseudo-adjointness
        let identity = TruncatedOperator::identity(&layout);
        let (qcal, qcal_sharp) = pseudo_supercharges(&gens, &good).unwrap();
        let fragment =
            verify_pseudo_susy(&qcal, &qcal_sharp, &hs, &identity, &gens, &good, &low, 1e-8)
                .unwrap();
        assert!(!fragment.passed());
    }

    #[test]
    fn xp_form_matches_generator_form() {
        let (p, layout, gens) = setup(48);
        for z in [-1.0, 0.0, 0.5] {
            let mp = epsilon_of(&p, z).unwrap();
            let ep = mu_nu(&p, z).unwrap();
            let coeffs = supercharge_coeffs(&p, &mp, &ep).unwrap();
            let (q1, s1) = pseudo_supercharges(&gens, &coeffs).unwrap();
            let (q2, s2) = pseudo_supercharges_xp(&coeffs, p.omega(), &layout).unwrap();
            assert!(
                q1.matrix.sub(&q2.matrix).unwrap().fro_norm()
                    <= 1e-10 * (q1.matrix.fro_norm() + 1.0),
                "z = {z}"
            );
            assert!(
                s1.matrix.sub(&s2.matrix).unwrap().fro_norm()
                    <= 1e-10 * (s1.matrix.fro_norm() + 1.0),
                "z = {z}"
            );
        }
    }

    #[test]
    fn xp_form_coefficient_cancellations() {
        let (p, layout, _) = setup(8);
        let (x, pq) = quadratures(&layout, 0, p.omega()).unwrap();
        let (b, _) = fermion_ops(&layout, 1).unwrap();
        // σ = τ: momentum part cancels, 𝒬 ∝ ωx·b
        let coeffs = SuperchargeCoeffs::new_unchecked(1.3, 1.3, 0.7, 0.7);
        let (qcal, _) = pseudo_supercharges_xp(&coeffs, p.omega(), &layout).unwrap();
        let expected = x
            .scale_real(2.0 * 1.3 * p.omega() / (2.0 * p.omega().sqrt()))
            .mul(&b)
            .unwrap();
        assert!(qcal.matrix.sub(&expected.matrix).unwrap().fro_norm() < 1e-13);
        // σ = −τ: position part cancels, 𝒬 ∝ p·b
        let coeffs = SuperchargeCoeffs::new_unchecked(1.3, -1.3, 0.7, 0.7);
        let (qcal, _) = pseudo_supercharges_xp(&coeffs, p.omega(), &layout).unwrap();
        let expected = pq
            .scale(c64(0.0, -2.0 * 1.3 / (2.0 * p.omega().sqrt())))
            .mul(&b)
            .unwrap();
        assert!(qcal.matrix.sub(&expected.matrix).unwrap().fro_norm() < 1e-13);
    }

    #[test]
    fn bch_relations_hold() {
        let (p, layout, gens) = setup(80);
        let low = total_quanta_projector(&layout, 20);
        for z in [-1.0, -0.5, 0.0, 0.5, 1.0] {
            let bundle = metric_bundle(&gens, &p, z).unwrap();
            let fp = factorization_params(&bundle.mp).unwrap();
            let fragment = verify_bch_relations(&bundle.rho, &gens, &fp, &low, 1e-8).unwrap();
            assert!(fragment.passed(), "z = {z}: {:?}", fragment.worst());
        }
        // ε → 0: all four reduce to identity conjugation with unit scalars
        let identity = TruncatedOperator::identity(&layout);
        let fp = FactorizationParams {
            p: 0.0,
            q: 0.0,
            p_prime: 0.0,
            q_prime: 0.0,
        };
        let fragment = verify_bch_relations(&identity, &gens, &fp, &low, 1e-12).unwrap();
        assert!(fragment.passed());
    }

    #[test]
    fn bch_pure_scaling_at_z_zero() {
        // p = p' = 0: ρV+ρ⁻¹ = e^{q'/2} V+ is a pure scaling
        let (p, layout, gens) = setup(64);
        let bundle = metric_bundle(&gens, &p, 0.0).unwrap();
        let fp = factorization_params(&bundle.mp).unwrap();
        assert!(fp.p.abs() < 1e-15 && fp.p_prime.abs() < 1e-15);
        let v_plus = gens.v_plus.as_ref().unwrap();
        let low = total_quanta_projector(&layout, 16);
        let scaled = v_plus.scale_real((fp.q_prime / 2.0).exp());
        let res = conjugation_residual(&bundle.rho, v_plus, &scaled, &low);
        assert!(res < 1e-10, "residual {res}");
    }

    #[test]
    fn intertwining_suite() {
        let (p, layout, gens) = setup(80);
        let (a, adag) = boson_ops(&layout, 0).unwrap();
        let (b, _) = fermion_ops(&layout, 1).unwrap();
        let h = swanson_hamiltonian(&gens, &p).unwrap();
        let low = total_quanta_projector(&layout, 20);
        for z in [-0.5, 0.0, 0.5] {
            let bundle = metric_bundle(&gens, &p, z).unwrap();
            let ep = mu_nu(&p, z).unwrap();
            let coeffs = supercharge_coeffs(&p, &bundle.mp, &ep).unwrap();
            let (qcal, qcal_sharp) = pseudo_supercharges(&gens, &coeffs).unwrap();
            let (_, tilde_dag) = tilde_mode(&a, &adag, &ep, p.omega()).unwrap();
            let (q, q_dag) = hermitian_supercharges(&tilde_dag, &b, p.big_omega()).unwrap();
            let h_herm = crate::metric::equivalent_hermitian(&gens, &p, z).unwrap();
            let fragment =
                verify_intertwining(&bundle.rho, &qcal, &q, &h, &h_herm, &low, 1e-8).unwrap();
            assert!(fragment.passed(), "z = {z}: {:?}", fragment.worst());
            // the sharp partner intertwines to Q† as well
            let res = crate::metric::conjugation_residual(&bundle.rho, &qcal_sharp, &q_dag, &low);
            assert!(res < 1e-8, "z = {z}: rho Qcal# rho^-1 - Q† residual {res}");
        }
    }

    #[test]
    fn spectral_pairing_of_hs() {
        // nonzero eigenvalues of h_S pair across the fermion sectors
        let (p, layout, gens) = setup(64);
        let hs_herm = supersym_hermitian(&gens, &p, 0.5).unwrap();
        let parity = crate::fockspace::fermion_parity(&layout);
        // h_S commutes with parity: sectors diagonalize independently
        let comm = hs_herm.commutator(&parity).unwrap();
        assert!(comm.matrix.fro_norm() < 1e-10);
        let report = susy_degeneracy(&hs_herm, p.big_omega(), 5, 1e-8).unwrap();
        assert!(report.multiplicities_ok);
        // cross-sector pairing: the low n_F = 0 levels above the ground state
        // coincide with the low n_F = 1 levels
        let sector = |nf: usize| {
            let support: Vec<usize> = (0..layout.total_dim())
                .filter(|&i| layout.factor_states(i)[1] == nf)
                .collect();
            hs_herm
                .matrix
                .restrict(&support)
                .eig_hermitian()
                .unwrap()
                .eigenvalues
        };
        let even = sector(0);
        let odd = sector(1);
        // even sector: 0, Ω, 2Ω, ...; odd sector: Ω, 2Ω, ...
        assert!(even[0].abs() < 1e-9);
        for n in 0..5 {
            let dev = (even[n + 1] - odd[n]).abs() / p.big_omega();
            assert!(dev < 1e-9, "level {n}: sector mismatch {dev}");
        }
    }

    #[test]
    fn missing_odd_sector_rejected() {
        let p = canonical();
        let bare =
            crate::superalgebra::su11_single_mode(&ModeLayout::single_boson(8).unwrap()).unwrap();
        assert!(matches!(
            supersym_hamiltonian(&bare, &p),
            Err(ModelError::MissingOddSector)
        ));
        let sc = special_case_coeffs(&p, SpecialCase::ZZero).unwrap();
        let coeffs = SuperchargeCoeffs::new_unchecked(sc.sigma, sc.tau, sc.varphi, sc.chi);
        assert!(matches!(
            pseudo_supercharges(&bare, &coeffs),
            Err(ModelError::MissingOddSector)
        ));
    }
}
