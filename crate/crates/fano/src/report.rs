//! The versioned JSON report of one verification run.

use std::time::Duration;

use fano_rigidity_core::candidate::FanoCandidate;
use fano_rigidity_core::exclusion::{
    verify, Check, ExclusionVerdict, Lemma, NamedValue, Overall, Status, Strategy, SubCertificate, VerifyError,
    VerifyOptions,
};
use fano_rigidity_core::explicit::param::Assumption;
use fano_rigidity_core::explicit::{format_system, ClusterFormat};
use fano_rigidity_core::monomial_model::{FactStatus, MonomialFact};
use serde::Serialize;

use crate::input::to_value;

pub const SCHEMA: &str = "fano-rigidity-report/1";

#[derive(Debug, Clone, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING-KEBAB-CASE")]
pub enum ReportOverall {
    Superrigid,
    Unresolved { centers: Vec<String> },
    InvalidInput { violations: Vec<String> },
}

impl ReportOverall {
    /// 0 superrigid, 2 unresolved, 1 invalid input.
    pub fn exit_code(&self) -> u8 {
        match self {
            ReportOverall::Superrigid => 0,
            ReportOverall::Unresolved { .. } => 2,
            ReportOverall::InvalidInput { .. } => 1,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ReportOverall::Superrigid => "SUPERRIGID",
            ReportOverall::Unresolved { .. } => "UNRESOLVED",
            ReportOverall::InvalidInput { .. } => "INVALID-INPUT",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CenterRecord {
    pub center: String,
    pub position: Option<String>,
    pub lemma: Lemma,
    pub status: Status,
    pub values: Vec<NamedValue>,
    pub checks: Vec<Check>,
    pub certificate: Vec<SubCertificate>,
    pub notes: Vec<String>,
}

impl CenterRecord {
    fn new(v: &ExclusionVerdict) -> Self {
        CenterRecord {
            center: v.center.label(),
            position: v.center.coordinate_position.clone(),
            lemma: v.lemma,
            status: v.status,
            values: v.computed_values.clone(),
            checks: v.checks.clone(),
            certificate: v.sub_certificates.clone(),
            notes: v.notes.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FactRecord {
    pub monomial: String,
    pub equation_degree: u32,
    pub status: FactStatus,
    pub reason: String,
}

impl From<&MonomialFact> for FactRecord {
    fn from(f: &MonomialFact) -> Self {
        FactRecord { monomial: f.display.clone(), equation_degree: f.equation_degree, status: f.status, reason: f.reason.clone() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub tool: Tool,
    pub candidate: serde_json::Value,
    pub options: VerifyOptions,
    pub strategy: Option<Strategy>,
    pub overall: ReportOverall,
    pub centers: Vec<CenterRecord>,
    pub facts: Vec<FactRecord>,
    pub assumptions: Vec<Assumption>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl Report {
    pub fn with_timing(mut self, elapsed: Duration) -> Self {
        self.timing = Some(Timing { elapsed_ms: elapsed.as_millis().try_into().unwrap_or(u64::MAX) });
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn center(&self, query: &str) -> Option<&CenterRecord> {
        let q = query.trim();
        let short = |c: &CenterRecord| c.center.split('(').next().map(str::to_string);
        self.centers.iter().find(|c| c.center == q).or_else(|| {
            self.centers.iter().find(|c| match q {
                "curve" => c.center == "curves",
                "smooth" | "smooth-point" => c.center == "smooth-points",
                _ => short(c).as_deref() == Some(q),
            })
        })
    }
}

/// Run the verifier and assemble the report. Only a format requested for a
/// candidate it does not apply to is an error; invalid data gives an
/// `INVALID-INPUT` report.
pub fn build_report(c: &FanoCandidate, opts: &VerifyOptions, timing: Option<Duration>) -> Result<Report, VerifyError> {
    let mut report = Report {
        schema: SCHEMA,
        tool: Tool { name: crate::TOOL_NAME, version: crate::TOOL_VERSION },
        candidate: to_value(c),
        options: opts.clone(),
        strategy: None,
        overall: ReportOverall::InvalidInput { violations: Vec::new() },
        centers: Vec::new(),
        facts: Vec::new(),
        assumptions: Vec::new(),
        timing: None,
    };
    if let Some(d) = timing {
        report = report.with_timing(d);
    }
    match verify(c, opts) {
        Ok(v) => {
            report.strategy = Some(v.strategy);
            report.overall = match v.overall {
                Overall::Superrigid => ReportOverall::Superrigid,
                Overall::Unresolved { centers } => ReportOverall::Unresolved { centers },
            };
            report.centers = v.verdicts.iter().map(CenterRecord::new).collect();
            report.facts = v.facts.iter().map(FactRecord::from).collect();
            report.assumptions = v.assumptions.entries().to_vec();
            Ok(report)
        }
        Err(VerifyError::Invalid(violations)) => {
            report.overall = ReportOverall::InvalidInput { violations: violations.iter().map(ToString::to_string).collect() };
            Ok(report)
        }
        Err(VerifyError::Inconsistent(e)) => {
            report.overall = ReportOverall::InvalidInput { violations: vec![e.to_string()] };
            Ok(report)
        }
        Err(e) => Err(e),
    }
}

/// The record of one center, looked up by label (`1/6(1,1,5)`, `1/6`, `curves`, `smooth`).
pub fn explain<'a>(report: &'a Report, center: &str) -> Option<&'a CenterRecord> {
    report.center(center)
}

/// Plain-text listing of a built-in format: forms, assumptions, then equations.
pub fn export_equations(format: ClusterFormat, assume_q_in_s6: bool) -> String {
    let sys = format_system(format, assume_q_in_s6).expect("built-in system parses");
    let space = sys.space();
    let mut out = format!("# {format} format of #282 in P(");
    out.push_str(&space.weights().iter().map(u32::to_string).collect::<Vec<_>>().join(","));
    out.push_str(")\n# coordinates ");
    out.push_str(&(0..space.len()).map(|i| space.name(i).to_string()).collect::<Vec<_>>().join(" "));
    out.push('\n');
    for f in &sys.forms {
        let known: Vec<String> =
            f.known.iter().map(|(m, c)| format!("{c}*{}", space.display_monomial(m))).collect();
        let kind = if f.exact { "exactly" } else { "generic, containing" };
        if known.is_empty() {
            out.push_str(&format!("# {} : degree {}, generic\n", f.name, f.degree));
        } else {
            out.push_str(&format!("# {} : degree {}, {kind} {}\n", f.name, f.degree, known.join(" + ")));
        }
    }
    for a in sys.ledger.entries() {
        out.push_str(&format!("# assume {} ({})\n", a.statement, a.provenance));
    }
    for (label, degree, source) in sys.listing() {
        out.push_str(&format!("{label} [{degree}]: {source}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use fano_rigidity_core::candidate::lookup;

    fn run(id: &str, opts: VerifyOptions) -> Report {
        build_report(&lookup(id).unwrap(), &opts, None).unwrap()
    }

    #[test]
    fn overall_and_exit_codes() {
        assert_eq!(run("#25", VerifyOptions::default()).overall.exit_code(), 0);
        let r = run("#282", VerifyOptions::default());
        assert_eq!(r.overall, ReportOverall::Unresolved { centers: vec!["1/6(1,1,5)".into()] });
        assert_eq!(r.overall.exit_code(), 2);
        let g2 = VerifyOptions { format: Some(ClusterFormat::G2), ..Default::default() };
        assert_eq!(run("#282", g2).overall, ReportOverall::Superrigid);
    }

    #[test]
    fn superrigid_iff_every_center_excluded() {
        for id in ["#25", "#166", "#282", "#308"] {
            let r = run(id, VerifyOptions::default());
            let all = r.centers.iter().all(|c| c.status == Status::Excluded);
            assert_eq!(all, r.overall == ReportOverall::Superrigid, "{id}");
        }
    }

    #[test]
    fn invalid_candidate_gives_invalid_input() {
        let mut c = lookup("#25").unwrap();
        c.k3 = fano_rigidity_core::Rational::zero();
        let r = build_report(&c, &VerifyOptions::default(), None).unwrap();
        assert_eq!(r.overall.label(), "INVALID-INPUT");
        assert_eq!(r.overall.exit_code(), 1);
        assert!(r.centers.is_empty());
    }

    #[test]
    fn format_for_wrong_candidate_is_an_error() {
        let opts = VerifyOptions { format: Some(ClusterFormat::C2), ..Default::default() };
        assert!(build_report(&lookup("#25").unwrap(), &opts, None).is_err());
    }

    #[test]
    fn timing_is_opt_in() {
        let r = run("#25", VerifyOptions::default());
        assert!(!r.to_json().contains("timing"));
        let t = build_report(&lookup("#25").unwrap(), &VerifyOptions::default(), Some(Duration::from_millis(3))).unwrap();
        assert!(t.to_json().contains("\"elapsed_ms\": 3"));
    }

    #[test]
    fn center_lookup() {
        let r = run("#308", VerifyOptions::default());
        assert_eq!(explain(&r, "1/5").unwrap().center, "1/5(1,2,3)");
        assert_eq!(explain(&r, "1/5(1,2,3)").unwrap().position.as_deref(), Some("q"));
        assert_eq!(explain(&r, "smooth").unwrap().center, "smooth-points");
        assert!(explain(&r, "1/7").is_none());
    }

    #[test]
    fn export_lists_every_equation() {
        for fmt in ClusterFormat::ALL {
            let text = export_equations(fmt, true);
            let eqs: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
            assert_eq!(eqs.len(), 9);
            assert!(eqs[0].starts_with("F1 [16]: "));
        }
        assert!(export_equations(ClusterFormat::G2, true).contains("# P12 : degree 12, generic, containing lambda*r^2"));
        assert!(export_equations(ClusterFormat::C2, true).contains("# S6 : degree 6, exactly 1*q"));
    }
}
