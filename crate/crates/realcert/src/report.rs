//! The report every subcommand produces, with its JSON and table renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use realcert_core::rational::{self, Rational};
use realcert_core::{Certificate, Enclosure, Status, Verdict, Witness};

/// Endpoints with longer denominators are rounded outward to this many bits.
pub const EXACT_BITS: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub status: String,
    pub certificate: Option<CertificateJson>,
    pub enclosure: Option<EnclosureJson>,
    pub trace: Vec<TraceLine>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnclosureJson {
    pub lo: String,
    pub hi: String,
    pub lo_exact: String,
    pub hi_exact: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub test: String,
    pub assurance: String,
    pub witnesses: Vec<WitnessJson>,
    pub trace: Vec<TestTraceJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestTraceJson {
    pub test: String,
    pub outcome: String,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceLine {
    pub label: String,
    pub value: String,
}

/// Status for a computed enclosure with no convergence question attached.
pub const ENCLOSED: &str = "enclosed";

impl EnclosureJson {
    pub fn new(e: &Enclosure, digits: u32) -> Self {
        let e = e.clone().compact(EXACT_BITS);
        let (lo, hi) = e.decimal_bounds(digits);
        EnclosureJson { lo, hi, lo_exact: rational::exact_string(e.lo()), hi_exact: rational::exact_string(e.hi()) }
    }
}

pub fn enclosure_text(e: &Enclosure, digits: u32) -> String {
    let (lo, hi) = e.decimal_bounds(digits);
    format!("[{lo}, {hi}]")
}

pub fn rational_text(x: &Rational) -> String {
    rational::exact_string(x)
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::Enclosure(e) => {
            let e = e.clone().compact(EXACT_BITS);
            format!("[{}, {}]", rational::exact_string(e.lo()), rational::exact_string(e.hi()))
        }
        other => other.to_string(),
    }
}

impl CertificateJson {
    pub fn new(c: &Certificate) -> Self {
        CertificateJson {
            test: c.test.as_str().to_string(),
            assurance: c.assurance.as_str().to_string(),
            witnesses: c.witnesses.iter().map(|(name, w)| WitnessJson { name: name.clone(), value: witness_text(w) }).collect(),
            trace: c
                .trace
                .iter()
                .map(|t| TestTraceJson { test: t.test.as_str().to_string(), outcome: t.outcome.as_str().to_string(), note: t.note.clone() })
                .collect(),
        }
    }
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.to_string(), inputs: BTreeMap::new(), status: ENCLOSED.to_string(), certificate: None, enclosure: None, trace: Vec::new() }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn line(&mut self, label: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.trace.push(TraceLine { label: label.into(), value: value.into() });
        self
    }

    pub fn set_enclosure(&mut self, e: &Enclosure, digits: u32) -> &mut Self {
        self.enclosure = Some(EnclosureJson::new(e, digits));
        self
    }

    pub fn set_verdict(&mut self, v: &Verdict, digits: u32) -> &mut Self {
        self.status = v.status().as_str().to_string();
        self.certificate = v.certificate().map(CertificateJson::new);
        if let Some(e) = v.value() {
            self.set_enclosure(e, digits);
        }
        self
    }

    pub fn set_status(&mut self, s: Status) -> &mut Self {
        self.status = s.as_str().to_string();
        self
    }

    /// 0 for a decisive verdict or a met target, 2 when inconclusive.
    pub fn exit_code(&self) -> u8 {
        if self.status == Status::Inconclusive.as_str() {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap_or_else(|e| format!("{{\"error\": \"{e}\"}}"))
    }

    pub fn to_table(&self) -> String {
        let mut rows: Vec<(String, String)> = vec![("command".into(), self.command.clone())];
        rows.extend(self.inputs.iter().map(|(k, v)| (k.clone(), v.clone())));
        rows.push(("status".into(), self.status.clone()));
        if let Some(e) = &self.enclosure {
            rows.push(("enclosure".into(), format!("[{}, {}]", e.lo, e.hi)));
        }
        if let Some(c) = &self.certificate {
            rows.push(("certificate".into(), format!("{} ({})", c.test, c.assurance)));
            rows.extend(c.witnesses.iter().map(|w| (format!("  {}", w.name), w.value.clone())));
            rows.extend(c.trace.iter().map(|t| (format!("  tried {}", t.test), format!("{}: {}", t.outcome, t.note))));
        }
        rows.extend(self.trace.iter().map(|t| (t.label.clone(), t.value.clone())));
        let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use realcert_core::rational::{int, rat};
    use realcert_core::{Assurance, TestKind};

    fn sample() -> Report {
        let mut r = Report::new("converge");
        r.input("family", "geometric").input("r", "1/2");
        let cert = Certificate::new(TestKind::Geometric, Assurance::Machine).rational("r", rat(1, 2)).enclosure("sum", Enclosure::point(int(2)));
        r.set_verdict(&Verdict::converges(cert, Some(Enclosure::new(rat(1, 3), rat(2, 3)).unwrap())), 6);
        r.line("partial_sum[1]", "1");
        r
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.to_json(), back.to_json());
    }

    #[test]
    fn enclosure_rendering() {
        let e = EnclosureJson::new(&Enclosure::new(rat(1, 3), rat(2, 3)).unwrap(), 4);
        assert_eq!((e.lo.as_str(), e.hi.as_str()), ("0.3333", "0.6667"));
        assert_eq!((e.lo_exact.as_str(), e.hi_exact.as_str()), ("1/3", "2/3"));
        let third = rational::powi(&rat(1, 3), 300).unwrap();
        let big = EnclosureJson::new(&Enclosure::point(third), 4);
        assert!(big.lo_exact.len() < 200 && big.lo_exact != big.hi_exact);
    }

    #[test]
    fn exit_codes_and_table() {
        let r = sample();
        assert_eq!(r.exit_code(), 0);
        let mut i = Report::new("integrate");
        i.set_status(Status::Inconclusive);
        assert_eq!(i.exit_code(), 2);
        let table = r.to_table();
        assert!(table.contains("status") && table.contains("converges"));
    }
}
