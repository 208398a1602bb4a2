//! CSV tables with fixed headers.

use std::io::Write;

use robertson_core::analysis::{ComparisonReport, ConvergenceStudy, SweepRow};
use robertson_core::orbits::SingularOrbit;

use crate::format::fmt_f64;

pub const SWEEP_HEADER: [&str; 8] = ["eps1", "eps2", "regime", "ymax_num", "ymax_pred", "rel_gap", "t_half", "error"];
pub const ORBIT_HEADER: [&str; 6] = ["segment", "kind", "chart", "c1", "c2", "c3"];
pub const STUDY_HEADER: [&str; 8] =
    ["r", "eps1", "eps2", "hausdorff_chart", "hausdorff_original", "ymax_num", "rel_gap", "error"];
pub const COMPARE_HEADER: [&str; 14] = [
    "eps1",
    "eps2",
    "c",
    "regime",
    "chart",
    "fixed_coord",
    "radial",
    "ymax_num",
    "ymax_pred",
    "rel_gap",
    "hausdorff_chart",
    "hausdorff_original",
    "steps",
    "rejected",
];

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

/// `t,x,y,z` for three components, `t,y,z` for two.
pub fn write_timeseries<W: Write>(out: W, rows: &[(f64, Vec<f64>)]) -> csv::Result<()> {
    let mut w = writer(out);
    let dim = rows.first().map_or(2, |r| r.1.len());
    if dim == 3 {
        w.write_record(["t", "x", "y", "z"])?;
    } else {
        w.write_record(["t", "y", "z"])?;
    }
    for (t, u) in rows {
        let mut rec = vec![fmt_f64(*t)];
        rec.extend(u.iter().map(|v| fmt_f64(*v)));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_orbit<W: Write>(out: W, orbit: &SingularOrbit) -> csv::Result<()> {
    let mut w = writer(out);
    w.write_record(ORBIT_HEADER)?;
    for (i, seg) in orbit.segments.iter().enumerate() {
        for p in &seg.points {
            let c3 = p.get(2).map_or(String::new(), |v| fmt_f64(*v));
            w.write_record([i.to_string(), seg.kind.label().into(), seg.chart.into(), fmt_f64(p[0]), fmt_f64(p[1]), c3])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep<W: Write>(out: W, rows: &[SweepRow]) -> csv::Result<()> {
    let mut w = writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record([
            fmt_f64(r.eps1),
            fmt_f64(r.eps2),
            r.regime.label().into(),
            fmt_f64(r.y_max_numeric),
            fmt_f64(r.y_max_predicted),
            fmt_f64(r.rel_gap),
            fmt_f64(r.t_half),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_study<W: Write>(out: W, study: &ConvergenceStudy) -> csv::Result<()> {
    let mut w = writer(out);
    w.write_record(STUDY_HEADER)?;
    for p in &study.points {
        let (d, o, y, g, e) = match &p.outcome {
            Ok(r) => (r.hausdorff_chart, r.hausdorff_original, r.y_max_numeric, r.rel_gap, String::new()),
            Err(e) => (f64::NAN, f64::NAN, f64::NAN, f64::NAN, e.clone()),
        };
        w.write_record([
            fmt_f64(p.radial),
            fmt_f64(p.params.eps1),
            fmt_f64(p.params.eps2),
            fmt_f64(d),
            fmt_f64(o),
            fmt_f64(y),
            fmt_f64(g),
            e,
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_comparison<W: Write>(out: W, r: &ComparisonReport) -> csv::Result<()> {
    let mut w = writer(out);
    w.write_record(COMPARE_HEADER)?;
    w.write_record([
        fmt_f64(r.params.eps1),
        fmt_f64(r.params.eps2),
        fmt_f64(r.params.c),
        r.regime.label().into(),
        r.chart.into(),
        fmt_f64(r.fixed_coord),
        fmt_f64(r.radial),
        fmt_f64(r.y_max_numeric),
        fmt_f64(r.y_max_predicted),
        fmt_f64(r.rel_gap),
        fmt_f64(r.hausdorff_chart),
        fmt_f64(r.hausdorff_original),
        r.solver.steps.to_string(),
        r.solver.rejected.to_string(),
    ])?;
    w.flush()?;
    Ok(())
}
