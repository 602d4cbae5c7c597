//! Batch report serialization: a homogeneous, nonempty list of records to a
//! JSON array or a CSV table with a fixed header per record type.

use crate::capacity::{CapacityEstimate, Discretization};
use crate::covering::CoveringVerdict;
use crate::error::{Error, Result};
use crate::inequalities::BoundReport;
use num_complex::Complex64;
use serde::Serialize;
use std::path::Path;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ReportItem {
    Bound(BoundReport),
    Covering(CoveringVerdict),
    Capacity(CapacityEstimate),
}

impl ReportItem {
    fn kind(&self) -> u8 {
        match self {
            ReportItem::Bound(_) => 0,
            ReportItem::Covering(_) => 1,
            ReportItem::Capacity(_) => 2,
        }
    }
}

impl From<BoundReport> for ReportItem {
    fn from(r: BoundReport) -> Self {
        ReportItem::Bound(r)
    }
}

impl From<CoveringVerdict> for ReportItem {
    fn from(v: CoveringVerdict) -> Self {
        ReportItem::Covering(v)
    }
}

impl From<CapacityEstimate> for ReportItem {
    fn from(c: CapacityEstimate) -> Self {
        ReportItem::Capacity(c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::ParameterOutOfRange(format!("report format {other}"))),
        }
    }
}

pub const BOUND_HEADER: &str =
    "inequality_id,lhs,rhs,slack,hypothesis,map_digest,points,parameters,covering_family,covering_status,rescaled_slack,limit_gap";
pub const COVERING_HEADER: &str = "family,status,witness_re,witness_im,preimages,curve_samples,family_samples";
pub const CAPACITY_HEADER: &str = "value,method,discretization,cells,box_side,fine,coarse,hole_radius,error_bar";

/// 17 significant digits; round-trips every finite double.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn complex(z: Complex64) -> String {
    format!("{} {}", num(z.re), num(z.im))
}

fn bound_row(r: &BoundReport) -> String {
    let points = r.inputs.points.iter().map(|z| complex(*z)).collect::<Vec<_>>().join(";");
    let params = r.inputs.parameters.iter().map(|(k, v)| format!("{k}={}", num(*v))).collect::<Vec<_>>().join(";");
    let (family, status) = match &r.covering {
        Some(v) => (family_str(v), status_str(v)),
        None => ("", ""),
    };
    [
        r.inequality_id.as_str().to_string(),
        num(r.lhs),
        num(r.rhs),
        num(r.slack),
        r.hypothesis.as_str().to_string(),
        r.inputs.map_digest.clone().unwrap_or_default(),
        points,
        params,
        family.to_string(),
        status.to_string(),
        opt(r.rescaled_slack),
        opt(r.limit_gap),
    ]
    .join(",")
}

fn family_str(v: &CoveringVerdict) -> &'static str {
    match v.family {
        crate::covering::Family::Gamma => "gamma",
        crate::covering::Family::Delta => "delta",
    }
}

fn status_str(v: &CoveringVerdict) -> &'static str {
    match v.status {
        crate::covering::CoveringStatus::NoViolationFound => "no_violation_found",
        crate::covering::CoveringStatus::MultiplePreimage => "multiple_preimage",
        crate::covering::CoveringStatus::ExitsImage => "exits_image",
    }
}

fn covering_row(v: &CoveringVerdict) -> String {
    let (re, im, pre) = match &v.witness {
        Some(w) => (
            num(w.w.re),
            num(w.w.im),
            w.preimages.iter().map(|p| complex(p.z())).collect::<Vec<_>>().join(";"),
        ),
        None => Default::default(),
    };
    [
        family_str(v).to_string(),
        status_str(v).to_string(),
        re,
        im,
        pre,
        v.resolution.curve_samples.to_string(),
        v.resolution.family_samples.to_string(),
    ]
    .join(",")
}

fn capacity_row(c: &CapacityEstimate) -> String {
    let method = match c.method {
        crate::capacity::Method::FiniteDifference => "finite_difference",
        crate::capacity::Method::ClosedForm => "closed_form",
    };
    let (disc, cells, side, fine, coarse, hole) = match &c.discretization {
        Discretization::Grid { cells, box_side, fine, coarse, hole_radius, .. } => (
            "grid".to_string(),
            cells.to_string(),
            num(*box_side),
            num(*fine),
            opt(*coarse),
            opt(*hole_radius),
        ),
        Discretization::Formula { tag } => (tag.clone(), String::new(), String::new(), String::new(), String::new(), String::new()),
    };
    [num(c.value), method.to_string(), disc, cells, side, fine, coarse, hole, opt(c.error_bar)].join(",")
}

/// Renders `items` (nonempty, one record type).
pub fn render_report(items: &[ReportItem], format: Format) -> Result<String> {
    let first = items.first().ok_or(Error::EmptyReport)?;
    if items.iter().any(|i| i.kind() != first.kind()) {
        return Err(Error::MixedReportTypes);
    }
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(items)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let header = match first {
                ReportItem::Bound(_) => BOUND_HEADER,
                ReportItem::Covering(_) => COVERING_HEADER,
                ReportItem::Capacity(_) => CAPACITY_HEADER,
            };
            let mut out = String::from(header);
            out.push('\n');
            for item in items {
                out.push_str(&match item {
                    ReportItem::Bound(r) => bound_row(r),
                    ReportItem::Covering(v) => covering_row(v),
                    ReportItem::Capacity(c) => capacity_row(c),
                });
                out.push('\n');
            }
            Ok(out)
        }
    }
}

pub fn emit_report(items: &[ReportItem], format: Format, path: impl AsRef<Path>) -> Result<()> {
    let s = render_report(items, format)?;
    std::fs::write(path, s)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequalities::{extremal_schwarzian_map, goluzin_report, schwarzian_report};
    use crate::rational::{DiskPoint, RationalMap};
    use crate::c64;

    fn dp(x: f64) -> DiskPoint {
        DiskPoint::new(c64(x, 0.0)).unwrap()
    }

    #[test]
    fn single_report_json_array() {
        let r = goluzin_report(&RationalMap::identity(), dp(-0.5), dp(0.5), false).unwrap();
        let s = render_report(&[r.into()], Format::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 1);
        assert_eq!(arr[0]["inequality_id"], "goluzin_1");
        let back: BoundReport = serde_json::from_value(arr[0].clone()).unwrap();
        assert_eq!(back.slack.to_bits(), r_slack());
    }

    fn r_slack() -> u64 {
        goluzin_report(&RationalMap::identity(), dp(-0.5), dp(0.5), false).unwrap().slack.to_bits()
    }

    #[test]
    fn extremal_scan_csv() {
        let items: Vec<ReportItem> = (1..=9)
            .map(|k| {
                let l = k as f64 / 10.0;
                schwarzian_report(&extremal_schwarzian_map(l).unwrap(), dp(-l), dp(l), false).unwrap().into()
            })
            .collect();
        let s = render_report(&items, Format::Csv).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], BOUND_HEADER);
        assert_eq!(lines.len(), 10);
        for row in &lines[1..] {
            let slack: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
            assert!(slack.abs() < 1e-9);
        }
    }

    #[test]
    fn csv_numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.2755555555555556, 1e-300, 6.02e23] {
            assert_eq!(num(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
            assert_eq!(num(x).split('e').next().unwrap().trim_start_matches('-').replace('.', "").len(), 17);
        }
    }

    #[test]
    fn rejects_mixed_and_empty() {
        let r = goluzin_report(&RationalMap::identity(), dp(-0.5), dp(0.5), false).unwrap();
        let cap = CapacityEstimate {
            value: 1.0,
            method: crate::capacity::Method::ClosedForm,
            discretization: Discretization::Formula { tag: "annulus".into() },
            error_bar: None,
        };
        assert!(matches!(render_report(&[r.into(), cap.into()], Format::Json), Err(Error::MixedReportTypes)));
        assert!(matches!(render_report(&[], Format::Csv), Err(Error::EmptyReport)));
    }
}
