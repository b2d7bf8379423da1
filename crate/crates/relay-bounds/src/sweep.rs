//! SNR sweeps, single-point reports, and CSV/SVG emission.
//!
//! The default sweep fixes `P1 = P2 = Q = N3 = 10 dB` on the degraded model
//! and varies the source-to-relay SNR `P1/N2` by varying `N2`, emitting one
//! row per SNR point with the requested bound columns and the maximizing
//! `(θ, ρ'12, ρ'2s)` of the achievable rate.

use crate::error::{Error, Result};
use crate::gaussian::{
    capacity_awgn, capacity_condition_threshold, extreme_cases, lower_bound, trivial_lower_bound,
    trivial_upper_bound, upper_bound, upper_bound_degraded_equiv, BoundResult, ChannelParams,
    ExtremeCapacity,
};
use crate::optim::GridSpec;
use rayon::prelude::*;
use serde::Serialize;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Which channel constant the sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Source-to-relay SNR `P1/N2`, varied through `N2`.
    Snr,
    P1,
    P2,
    Q,
    N2,
    N3,
}

impl SweepAxis {
    pub fn label(&self) -> &'static str {
        match self {
            SweepAxis::Snr => "snr_dB",
            SweepAxis::P1 => "p1_dB",
            SweepAxis::P2 => "p2_dB",
            SweepAxis::Q => "q_dB",
            SweepAxis::N2 => "n2_dB",
            SweepAxis::N3 => "n3_dB",
        }
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "snr" => SweepAxis::Snr,
            "p1" => SweepAxis::P1,
            "p2" => SweepAxis::P2,
            "q" => SweepAxis::Q,
            "n2" => SweepAxis::N2,
            "n3" => SweepAxis::N3,
            other => return Err(Error::invalid("axis", format!("unknown axis `{other}`"))),
        })
    }
}

/// The bound curves a sweep can compute, in canonical column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BoundKind {
    Lower,
    Upper,
    UpperEquiv,
    TrivialLower,
    TrivialUpper,
}

impl BoundKind {
    pub const ALL: [BoundKind; 5] = [
        BoundKind::Lower,
        BoundKind::Upper,
        BoundKind::UpperEquiv,
        BoundKind::TrivialLower,
        BoundKind::TrivialUpper,
    ];

    pub fn column(&self) -> &'static str {
        match self {
            BoundKind::Lower => "lower",
            BoundKind::Upper => "upper",
            BoundKind::UpperEquiv => "upper_equiv",
            BoundKind::TrivialLower => "trivial_lower",
            BoundKind::TrivialUpper => "trivial_upper",
        }
    }
}

impl std::str::FromStr for BoundKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lower" => BoundKind::Lower,
            "upper" => BoundKind::Upper,
            "upper_equiv" => BoundKind::UpperEquiv,
            "trivial_lower" => BoundKind::TrivialLower,
            "trivial_upper" => BoundKind::TrivialUpper,
            other => return Err(Error::invalid("bounds", format!("unknown bound `{other}`"))),
        })
    }
}

/// Axis definition plus fixed parameters and output selection for a sweep.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    /// Fixed channel constants (linear); the varied one is overwritten.
    pub base: ChannelParams,
    pub axis: SweepAxis,
    pub lo_db: f64,
    pub hi_db: f64,
    pub points: usize,
    /// Curves to compute; emitted in canonical order whatever the order here.
    pub bounds: Vec<BoundKind>,
    /// Carried into outputs for reproducibility bookkeeping; the Gaussian
    /// sweep itself is deterministic.
    pub seed: u64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            base: ChannelParams {
                p1: 10.0,
                p2: 10.0,
                q: 10.0,
                n2: 10.0,
                n3: 10.0,
                degraded: true,
            },
            axis: SweepAxis::Snr,
            lo_db: -10.0,
            hi_db: 30.0,
            points: 50,
            bounds: BoundKind::ALL.to_vec(),
            seed: 0,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.lo_db >= self.hi_db || self.lo_db.is_nan() || self.hi_db.is_nan() {
            return Err(Error::invalid("range", "lo_dB must be below hi_dB"));
        }
        if self.points < 2 {
            return Err(Error::invalid("points", "need at least 2 points"));
        }
        if self.bounds.is_empty() {
            return Err(Error::invalid("bounds", "select at least one bound"));
        }
        if self.axis == SweepAxis::Snr && self.base.p1 <= 0.0 {
            return Err(Error::invalid("p1", "SNR axis requires p1 > 0"));
        }
        if self.bounds.contains(&BoundKind::UpperEquiv) && !self.base.degraded {
            return Err(Error::invalid(
                "bounds",
                "upper_equiv requires the degraded model",
            ));
        }
        Ok(())
    }

    fn selected(&self) -> Vec<BoundKind> {
        BoundKind::ALL
            .iter()
            .copied()
            .filter(|k| self.bounds.contains(k))
            .collect()
    }

    fn channel_at(&self, axis_db: f64) -> ChannelParams {
        let value = db_to_linear(axis_db);
        let mut ch = self.base;
        match self.axis {
            SweepAxis::Snr => ch.n2 = ch.p1 / value,
            SweepAxis::P1 => ch.p1 = value,
            SweepAxis::P2 => ch.p2 = value,
            SweepAxis::Q => ch.q = value,
            SweepAxis::N2 => ch.n2 = value,
            SweepAxis::N3 => ch.n3 = value,
        }
        ch
    }
}

/// Computed sweep: a header row and one numeric row per axis point, ordered
/// by axis value.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Number of leading columns that are rates (after the axis column);
    /// any remaining columns are maximizer coordinates.
    pub rate_columns: usize,
    /// `(axis_dB, rate)` where the known-capacity regime begins, when it
    /// falls inside the sweep range.
    pub threshold_marker: Option<(f64, f64)>,
}

/// Run a sweep; rows are computed independently (in parallel) and assembled
/// in axis order.
pub fn run_sweep(spec: &SweepSpec, grid: &GridSpec) -> Result<SweepTable> {
    spec.validate()?;
    grid.validate()?;
    let selected = spec.selected();
    let with_argmax = selected.contains(&BoundKind::Lower);

    let mut columns = vec![spec.axis.label().to_string()];
    columns.extend(selected.iter().map(|k| k.column().to_string()));
    if with_argmax {
        columns.extend(["theta", "rho12p", "rho2sp"].map(String::from));
    }

    let axis_values: Vec<f64> = (0..spec.points)
        .map(|i| spec.lo_db + (spec.hi_db - spec.lo_db) * i as f64 / (spec.points - 1) as f64)
        .collect();

    let rows: Vec<Result<Vec<f64>>> = axis_values
        .par_iter()
        .map(|&axis_db| {
            let ch = spec.channel_at(axis_db);
            ch.validate().map_err(|_| {
                Error::invalid(
                    spec.axis.label(),
                    format!("{axis_db} dB leaves the channel invalid"),
                )
            })?;
            let mut row = vec![axis_db];
            let mut lower_argmax = None;
            for kind in &selected {
                let result: BoundResult = match kind {
                    BoundKind::Lower => {
                        let r = lower_bound(&ch, grid)?;
                        lower_argmax = Some(r.argmax.clone());
                        r
                    }
                    BoundKind::Upper => upper_bound(&ch, grid)?,
                    BoundKind::UpperEquiv => upper_bound_degraded_equiv(&ch, grid)?,
                    BoundKind::TrivialLower => trivial_lower_bound(&ch, grid)?,
                    BoundKind::TrivialUpper => trivial_upper_bound(&ch, grid)?,
                };
                row.push(result.rate);
            }
            if let Some(argmax) = lower_argmax {
                // lower_bound reports [rho12p, theta, rho2sp].
                row.push(argmax[1]);
                row.push(argmax[0]);
                row.push(argmax[2]);
            }
            Ok(row)
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;

    let threshold_marker = if spec.axis == SweepAxis::Snr && spec.base.degraded {
        let threshold = capacity_condition_threshold(&spec.base);
        if threshold > 0.0 {
            let snr_db = linear_to_db(spec.base.p1 / threshold);
            (snr_db >= spec.lo_db && snr_db <= spec.hi_db)
                .then(|| (snr_db, capacity_awgn(spec.base.p1 / threshold)))
        } else {
            None
        }
    } else {
        None
    };

    Ok(SweepTable {
        columns,
        rows,
        rate_columns: selected.len(),
        threshold_marker,
    })
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// Format with `sig` significant digits, positional where compact and
/// scientific otherwise. Re-parsing and re-formatting an emitted value is the
/// identity, which makes CSV round trips byte-stable.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    assert!(sig >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let formatted = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = formatted.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("numeric exponent");
    let neg = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };

    let body = if exp >= -4 && exp < sig as i32 {
        if exp >= 0 {
            let int_len = exp as usize + 1;
            if int_len >= digits.len() {
                format!("{digits}{}", "0".repeat(int_len - digits.len()))
            } else {
                format!("{}.{}", &digits[..int_len], &digits[int_len..])
            }
        } else {
            format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
        }
    } else if digits.len() == 1 {
        format!("{digits}e{exp}")
    } else {
        format!("{}.{}e{exp}", &digits[..1], &digits[1..])
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Render the table as CSV with 12 significant digits.
pub fn to_csv(table: &SweepTable) -> String {
    let mut out = String::new();
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&v| fmt_sig(v, 12)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Parse a CSV produced by [`to_csv`] back into columns and numeric rows.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::invalid("csv", "empty document"))?;
    let columns: Vec<String> = header.split(',').map(String::from).collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|cell| {
                cell.parse::<f64>()
                    .map_err(|_| Error::invalid("csv", format!("row {i}: bad number `{cell}`")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != columns.len() {
            return Err(Error::invalid(
                "csv",
                format!(
                    "row {i} has {} cells, expected {}",
                    row.len(),
                    columns.len()
                ),
            ));
        }
        rows.push(row);
    }
    Ok((columns, rows))
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

const SVG_W: f64 = 800.0;
const SVG_H: f64 = 600.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 150.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 60.0;
const PALETTE: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

/// Render the rate columns as a line chart: fixed 800x600 viewBox, linear
/// axes, one polyline per bound, a legend, and a pentagram marker at the
/// threshold point where the known-capacity regime begins.
pub fn to_svg(table: &SweepTable) -> String {
    let plot_w = SVG_W - MARGIN_L - MARGIN_R;
    let plot_h = SVG_H - MARGIN_T - MARGIN_B;

    let x_min = table.rows.first().map_or(0.0, |r| r[0]);
    let x_max = table.rows.last().map_or(1.0, |r| r[0]);
    let mut y_max = 0.0f64;
    for row in &table.rows {
        for &v in &row[1..=table.rate_columns] {
            y_max = y_max.max(v);
        }
    }
    if let Some((_, rate)) = table.threshold_marker {
        y_max = y_max.max(rate);
    }
    let y_max = if y_max > 0.0 { y_max * 1.05 } else { 1.0 };

    let x_of = |x: f64| MARGIN_L + (x - x_min) / (x_max - x_min) * plot_w;
    let y_of = |y: f64| MARGIN_T + plot_h - y / y_max * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SVG_W} {SVG_H}\" font-family=\"sans-serif\" font-size=\"13\">\n"
    ));
    svg.push_str(&format!(
        "  <rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{plot_w}\" height=\"{plot_h}\" fill=\"white\" stroke=\"#333\"/>\n"
    ));

    // Grid lines and tick labels.
    for i in 0..=5 {
        let fx = x_min + (x_max - x_min) * i as f64 / 5.0;
        let px = x_of(fx);
        svg.push_str(&format!(
            "  <line x1=\"{px:.2}\" y1=\"{MARGIN_T}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"#ddd\"/>\n",
            MARGIN_T + plot_h
        ));
        svg.push_str(&format!(
            "  <text x=\"{px:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{:.1}</text>\n",
            MARGIN_T + plot_h + 20.0,
            fx
        ));
        let fy = y_max * i as f64 / 5.0;
        let py = y_of(fy);
        svg.push_str(&format!(
            "  <line x1=\"{MARGIN_L}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" stroke=\"#ddd\"/>\n",
            MARGIN_L + plot_w
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{:.2}</text>\n",
            MARGIN_L - 8.0,
            py + 4.0,
            fy
        ));
    }
    svg.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>\n",
        MARGIN_L + plot_w / 2.0,
        SVG_H - 15.0,
        table.columns[0]
    ));
    svg.push_str(&format!(
        "  <text x=\"18\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2})\">rate [bits/use]</text>\n",
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0
    ));

    // One polyline per rate column.
    for c in 0..table.rate_columns {
        let color = PALETTE[c % PALETTE.len()];
        let points: Vec<String> = table
            .rows
            .iter()
            .map(|row| format!("{:.2},{:.2}", x_of(row[0]), y_of(row[c + 1])))
            .collect();
        svg.push_str(&format!(
            "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\" points=\"{}\"/>\n",
            points.join(" ")
        ));
        let ly = MARGIN_T + 16.0 + 22.0 * c as f64;
        let lx = MARGIN_L + plot_w + 12.0;
        svg.push_str(&format!(
            "  <line x1=\"{lx:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"1.8\"/>\n",
            lx + 24.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\">{}</text>\n",
            lx + 30.0,
            ly + 4.0,
            table.columns[c + 1]
        ));
    }

    if let Some((x, y)) = table.threshold_marker {
        svg.push_str(&format!("  {}\n", pentagram(x_of(x), y_of(y), 9.0)));
    }

    svg.push_str("</svg>\n");
    svg
}

/// Five-pointed star polygon centered at `(cx, cy)`.
fn pentagram(cx: f64, cy: f64, r: f64) -> String {
    let mut points = Vec::with_capacity(10);
    for k in 0..10 {
        let radius = if k % 2 == 0 { r } else { 0.4 * r };
        let angle = -std::f64::consts::FRAC_PI_2 + k as f64 * std::f64::consts::PI / 5.0;
        points.push(format!(
            "{:.2},{:.2}",
            cx + radius * angle.cos(),
            cy + radius * angle.sin()
        ));
    }
    format!(
        "<polygon points=\"{}\" fill=\"#e6b400\" stroke=\"#333\"/>",
        points.join(" ")
    )
}

// ---------------------------------------------------------------------------
// Single-point report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct NamedBound {
    pub name: String,
    pub rate: f64,
    pub argmax: Vec<f64>,
    pub grid_tolerance: f64,
    pub evaluations: u64,
}

/// Everything the `bounds` command prints, serializable as JSON.
#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub params: ChannelParams,
    pub grid: GridSpec,
    pub bounds: Vec<NamedBound>,
    /// Relay-noise threshold of the known-capacity condition (degraded only).
    pub threshold: Option<f64>,
    /// Interference-free capacity when the condition `N2 >= threshold` holds.
    pub capacity_known: Option<f64>,
    pub extreme_case: Option<ExtremeCapacity>,
}

pub fn compute_report(ch: &ChannelParams, grid: &GridSpec) -> Result<BoundsReport> {
    ch.validate()?;
    let mut bounds = Vec::new();
    let named = |name: &str, r: BoundResult| NamedBound {
        name: name.to_string(),
        rate: r.rate,
        argmax: r.argmax,
        grid_tolerance: r.grid_tolerance,
        evaluations: r.evaluations,
    };
    bounds.push(named("lower", lower_bound(ch, grid)?));
    bounds.push(named("upper", upper_bound(ch, grid)?));
    if ch.degraded {
        bounds.push(named("upper_equiv", upper_bound_degraded_equiv(ch, grid)?));
    }
    bounds.push(named("trivial_lower", trivial_lower_bound(ch, grid)?));
    bounds.push(named("trivial_upper", trivial_upper_bound(ch, grid)?));

    let (threshold, capacity_known) = if ch.degraded {
        let t = capacity_condition_threshold(ch);
        let capacity = (ch.n2 >= t - 1e-9).then(|| capacity_awgn(ch.p1 / ch.n2));
        (Some(t), capacity)
    } else {
        (None, None)
    };

    Ok(BoundsReport {
        params: *ch,
        grid: *grid,
        bounds,
        threshold,
        capacity_known,
        extreme_case: extreme_cases(ch)?,
    })
}

pub fn report_text(report: &BoundsReport) -> String {
    let p = &report.params;
    let mut out = String::new();
    out.push_str(&format!(
        "channel: P1={} P2={} Q={} N2={} N3={} ({})\n",
        p.p1,
        p.p2,
        p.q,
        p.n2,
        p.n3,
        if p.degraded { "degraded" } else { "general" }
    ));
    out.push_str(&format!(
        "{:<14} {:>12}  {:>10}  argmax\n",
        "bound", "bits/use", "tolerance"
    ));
    for b in &report.bounds {
        let argmax: Vec<String> = b.argmax.iter().map(|v| format!("{v:.4}")).collect();
        out.push_str(&format!(
            "{:<14} {:>12.6} {:>10.1e}   [{}]\n",
            b.name,
            b.rate,
            b.grid_tolerance,
            argmax.join(", ")
        ));
    }
    if let Some(t) = report.threshold {
        out.push_str(&format!("capacity-known threshold on N2: {t:.6}\n"));
        match report.capacity_known {
            Some(c) => out.push_str(&format!(
                "capacity known: {c:.6} bits/use (N2 >= threshold, interference-free rate)\n"
            )),
            None => out.push_str("capacity known: no (N2 below threshold)\n"),
        }
    }
    if let Some(e) = &report.extreme_case {
        out.push_str(&format!(
            "extreme case {:?}: capacity = {:.6} bits/use\n",
            e.case, e.rate
        ));
    }
    out
}
