use std::fmt::Write as _;

use nalgebra::Complex;

use super::{subspace_angle, ExpansionCertificate, PeriodicOrbitRecord};

/// Per-orbit summary used by the text and CSV reports.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitReport {
    pub point: Vec<f64>,
    pub period: usize,
    pub multipliers: Vec<Complex<f64>>,
    pub index: usize,
    pub hyperbolic: bool,
    pub beta: Option<f64>,
    pub growth_ok: Option<bool>,
}

impl OrbitReport {
    pub fn new(record: &PeriodicOrbitRecord, certificate: Option<&ExpansionCertificate>) -> Self {
        OrbitReport {
            point: record.point.iter().copied().collect(),
            period: record.period,
            multipliers: record.multipliers.clone(),
            index: record.index,
            hyperbolic: record.hyperbolic,
            beta: subspace_angle(record).ok().map(|a| a.minimum),
            growth_ok: certificate.map(|c| c.growth_ok),
        }
    }
}

fn complex(z: &Complex<f64>) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im > 0.0 {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}-{}i", z.re, -z.im)
    }
}

fn joined<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(" ")
}

fn optional<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

/// One section per orbit.
pub fn report_text(reports: &[OrbitReport]) -> String {
    let mut out = String::new();
    for (i, r) in reports.iter().enumerate() {
        let _ = writeln!(out, "[orbit {i}]");
        let _ = writeln!(out, "point       = {}", joined(&r.point, |x| x.to_string()));
        let _ = writeln!(out, "period      = {}", r.period);
        let _ = writeln!(out, "multipliers = {}", joined(&r.multipliers, complex));
        let _ = writeln!(out, "index       = {}", r.index);
        let _ = writeln!(out, "hyperbolic  = {}", r.hyperbolic);
        let _ = writeln!(out, "beta        = {}", optional(&r.beta));
        let _ = writeln!(out, "growth_ok   = {}", optional(&r.growth_ok));
        out.push('\n');
    }
    out
}

/// Header `point,period,multipliers,index,hyperbolic,beta,growth_ok`;
/// list-valued fields are space separated.
pub fn report_csv(reports: &[OrbitReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "point",
        "period",
        "multipliers",
        "index",
        "hyperbolic",
        "beta",
        "growth_ok",
    ])
    .expect("writing to memory");
    for r in reports {
        w.write_record([
            joined(&r.point, |x| x.to_string()),
            r.period.to_string(),
            joined(&r.multipliers, complex),
            r.index.to_string(),
            r.hyperbolic.to_string(),
            optional(&r.beta),
            optional(&r.growth_ok),
        ])
        .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8")
}
