//! Verification-report data model and deterministic serialization.
//!
//! Reports are byte-deterministic for a fixed config and build: fields
//! serialize in declaration order, maps are ordered, and every float is
//! printed with 17 significant digits in JSON (shortest round-trip form in
//! CSV).  Wall-clock timings are intentionally kept out of the report body
//! and go to the console instead.

use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;

pub const SCHEMA_VERSION: u32 = 1;

/// One named residual inside a check.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualLine {
    pub label: String,
    pub residual: f64,
}

/// Outcome of one verification routine: a set of labelled residuals judged
/// against a single tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct CheckFragment {
    pub lines: Vec<ResidualLine>,
    pub tolerance: f64,
}

impl CheckFragment {
    pub fn new(tolerance: f64) -> Self {
        Self {
            lines: Vec::new(),
            tolerance,
        }
    }

    pub fn push(&mut self, label: impl Into<String>, residual: f64) {
        self.lines.push(ResidualLine {
            label: label.into(),
            residual,
        });
    }

    /// Largest residual; zero for an empty fragment (vacuous pass).
    pub fn max_residual(&self) -> f64 {
        self.lines.iter().map(|l| l.residual).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_residual() <= self.tolerance
    }

    pub fn worst(&self) -> Option<&ResidualLine> {
        self.lines.iter().max_by(|a, b| {
            a.residual
                .partial_cmp(&b.residual)
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    MetricUndefined,
}

/// One row of a verification report.  The wall time is measured and shown on
/// the console but deliberately excluded from serialization so reports stay
/// byte-deterministic across runs.
#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub check: String,
    pub z: Option<f64>,
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub status: CheckStatus,
    pub detail: String,
    #[serde(skip)]
    pub wall_seconds: f64,
}

impl CheckEntry {
    pub fn from_fragment(check: &str, z: Option<f64>, fragment: &CheckFragment) -> Self {
        let status = if fragment.passed() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        let detail = fragment
            .worst()
            .map(|w| w.label.clone())
            .unwrap_or_default();
        CheckEntry {
            check: check.to_string(),
            z,
            residual: Some(fragment.max_residual()),
            tolerance: fragment.tolerance,
            status,
            detail,
            wall_seconds: 0.0,
        }
    }

    pub fn undefined(check: &str, z: Option<f64>, tolerance: f64, reason: &str) -> Self {
        CheckEntry {
            check: check.to_string(),
            z,
            residual: None,
            tolerance,
            status: CheckStatus::MetricUndefined,
            detail: reason.to_string(),
            wall_seconds: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorInfo {
    pub name: &'static str,
    pub version: &'static str,
    pub basis_ordering: &'static str,
}

impl Default for GeneratorInfo {
    fn default() -> Self {
        GeneratorInfo {
            name: "swanson",
            version: env!("CARGO_PKG_VERSION"),
            basis_ordering: crate::fockspace::BASIS_ORDERING,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub metric_undefined: usize,
    pub incomplete: bool,
    pub abort_reason: Option<String>,
}

/// Echo of the configuration a report was produced from.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
    pub z_grid: Vec<f64>,
    pub realization: String,
    pub cutoff: usize,
    pub margin: usize,
    pub checks: Vec<String>,
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub generator: GeneratorInfo,
    pub config: ConfigEcho,
    pub entries: Vec<CheckEntry>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn tally(config: ConfigEcho, entries: Vec<CheckEntry>, abort: Option<String>) -> Self {
        let mut summary = Summary {
            incomplete: abort.is_some(),
            abort_reason: abort,
            ..Summary::default()
        };
        for e in &entries {
            match e.status {
                CheckStatus::Pass => summary.passed += 1,
                CheckStatus::Fail => summary.failed += 1,
                CheckStatus::MetricUndefined => summary.metric_undefined += 1,
            }
        }
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            generator: GeneratorInfo::default(),
            config,
            entries,
            summary,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0 && !self.summary.incomplete
    }
}

/// Spectrum table: lowest levels of the Hermitian equivalents against the
/// predicted oscillator values.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRow {
    pub z: f64,
    pub level: usize,
    pub h_eigenvalue: f64,
    pub h_predicted: f64,
    pub h_abs_dev: f64,
    pub hs_cluster_center: f64,
    pub hs_predicted: f64,
    pub hs_abs_dev: f64,
    pub hs_multiplicity: usize,
    pub truncation_warning: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SkippedPoint {
    pub z: f64,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub schema_version: u32,
    pub generator: GeneratorInfo,
    pub config: ConfigEcho,
    pub levels: usize,
    pub rows: Vec<SpectrumRow>,
    pub skipped: Vec<SkippedPoint>,
}

/// Scalar sweep over the z grid: every derived quantity of the metric
/// construction, with validity flags for undefined points.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub z: f64,
    pub valid: bool,
    pub epsilon: Option<f64>,
    pub theta: Option<f64>,
    pub mu: Option<f64>,
    pub nu: Option<f64>,
    pub sigma: Option<f64>,
    pub tau: Option<f64>,
    pub varphi: Option<f64>,
    pub chi: Option<f64>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub p_prime: Option<f64>,
    pub q_prime: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub generator: GeneratorInfo,
    pub config: ConfigEcho,
    pub rows: Vec<SweepRow>,
}

/// serde_json formatter printing every float with 17 significant digits so
/// that reports reproduce bit-identical numbers.
struct SigDigits17;

impl serde_json::ser::Formatter for SigDigits17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{:.16e}", value)
    }
}

/// Serialize any report structure to deterministic JSON.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits17);
    value
        .serialize(&mut ser)
        .expect("report serialization cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON output is UTF-8")
}

fn csv_field_f64(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV rendering of a verification report (entries only; shortest
/// round-trip float formatting).
pub fn verify_to_csv(report: &VerificationReport) -> String {
    let mut out = String::from("check,z,residual,tolerance,status,detail\n");
    for e in &report.entries {
        let status = match e.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::MetricUndefined => "metric_undefined",
        };
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            csv_escape(&e.check),
            csv_field_f64(e.z),
            csv_field_f64(e.residual),
            e.tolerance,
            status,
            csv_escape(&e.detail),
        ));
    }
    out
}

pub fn spectrum_to_csv(report: &SpectrumReport) -> String {
    let mut out = String::from(
        "z,level,h_eigenvalue,h_predicted,h_abs_dev,hs_cluster_center,hs_predicted,hs_abs_dev,hs_multiplicity,truncation_warning\n",
    );
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.z,
            r.level,
            r.h_eigenvalue,
            r.h_predicted,
            r.h_abs_dev,
            r.hs_cluster_center,
            r.hs_predicted,
            r.hs_abs_dev,
            r.hs_multiplicity,
            r.truncation_warning,
        ));
    }
    out
}

pub fn sweep_to_csv(report: &SweepReport) -> String {
    let mut out = String::from(
        "z,valid,epsilon,theta,mu,nu,sigma,tau,varphi,chi,p,q,p_prime,q_prime,error\n",
    );
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.z,
            r.valid,
            csv_field_f64(r.epsilon),
            csv_field_f64(r.theta),
            csv_field_f64(r.mu),
            csv_field_f64(r.nu),
            csv_field_f64(r.sigma),
            csv_field_f64(r.tau),
            csv_field_f64(r.varphi),
            csv_field_f64(r.chi),
            csv_field_f64(r.p),
            csv_field_f64(r.q),
            csv_field_f64(r.p_prime),
            csv_field_f64(r.q_prime),
            csv_escape(r.error.as_deref().unwrap_or("")),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fragment_aggregation() {
        let mut f = CheckFragment::new(1e-8);
        assert!(f.passed());
        assert_eq!(f.max_residual(), 0.0);
        f.push("first", 1e-10);
        f.push("second", 1e-9);
        assert!(f.passed());
        f.push("bad", 1e-7);
        assert!(!f.passed());
        assert_eq!(f.worst().unwrap().label, "bad");
    }

    #[test]
    fn json_floats_have_17_significant_digits() {
        let mut f = CheckFragment::new(1e-8);
        f.push("x", 0.1);
        let s = to_json(&f);
        assert!(s.contains("1.0000000000000001e-1"), "got: {s}");
    }

    #[test]
    fn entry_fields_serialize_in_fixed_order() {
        let entry = CheckEntry::undefined("relations", Some(0.4), 1e-10, "no metric");
        let s = to_json(&entry);
        let order = [
            "\"check\"",
            "\"z\"",
            "\"residual\"",
            "\"tolerance\"",
            "\"status\"",
            "\"detail\"",
        ];
        let mut last = 0;
        for field in order {
            let pos = s
                .find(field)
                .unwrap_or_else(|| panic!("{field} missing in {s}"));
            assert!(pos > last || last == 0, "{field} out of order in {s}");
            last = pos;
        }
        // the skipped timing field never serializes
        assert!(!s.contains("wall_seconds"));
        assert!(s.contains("\"residual\":null"));
    }

    #[test]
    fn summary_counts_match_entries() {
        let echo = ConfigEcho {
            omega: 2.0,
            alpha: 0.5,
            beta: 0.3,
            z_grid: vec![0.0],
            realization: "single_mode".into(),
            cutoff: 80,
            margin: 16,
            checks: vec!["relations".into()],
            tolerances: BTreeMap::new(),
        };
        let entries = vec![
            CheckEntry {
                check: "a".into(),
                z: None,
                residual: Some(0.0),
                tolerance: 1e-8,
                status: CheckStatus::Pass,
                detail: String::new(),
                wall_seconds: 0.0,
            },
            CheckEntry::undefined("b", Some(0.4), 1e-8, "no metric"),
        ];
        let report = VerificationReport::tally(echo, entries, None);
        assert_eq!(report.summary.passed, 1);
        assert_eq!(report.summary.metric_undefined, 1);
        assert_eq!(report.summary.failed, 0);
        assert!(report.all_passed());
    }
}
