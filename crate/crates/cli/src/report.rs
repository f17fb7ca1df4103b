//! Report serialization: CSV (byte-stable, `.` decimal separator, 6
//! significant digits) and JSON with the same rounding.

use dehaze_core::pipeline::{BenchReport, RowOutcome};
use dehaze_core::MetricReport;

/// Formats with 6 significant digits, plain positional notation.
pub fn format_sig(value: f64) -> String {
    const SIG: i32 = 6;
    if value == 0.0 {
        return format!("{:.*}", (SIG - 1) as usize, 0.0);
    }
    let magnitude = value.abs().log10().floor() as i32;
    let decimals = (SIG - 1 - magnitude).max(0) as usize;
    format!("{value:.decimals$}")
}

/// The same value rounded to 6 significant digits, for JSON numbers.
fn round_sig(value: f64) -> f64 {
    format_sig(value).parse().expect("format_sig emits valid f64")
}

fn json_number(value: f64) -> serde_json::Value {
    serde_json::Number::from_f64(round_sig(value))
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}

const METRIC_COLUMNS: [&str; 6] = [
    "entropy",
    "gcf",
    "colourfulness",
    "avg_gradient",
    "uiqm",
    "uciqe",
];

fn metric_values(m: &MetricReport) -> [f64; 6] {
    [
        m.entropy,
        m.gcf,
        m.colourfulness,
        m.avg_gradient,
        m.uiqm,
        m.uciqe,
    ]
}

/// One-record metrics table. The `cef` column appears only when a reference
/// was supplied; an undefined CEF (grayscale reference) leaves it empty.
pub fn metrics_csv(image: &str, m: &MetricReport, with_cef: bool) -> String {
    let mut header = format!("image,{}", METRIC_COLUMNS.join(","));
    let mut row = std::iter::once(image.to_string())
        .chain(metric_values(m).iter().map(|&v| format_sig(v)))
        .collect::<Vec<_>>()
        .join(",");
    if with_cef {
        header.push_str(",cef");
        row.push(',');
        if let Some(cef) = m.cef {
            row.push_str(&format_sig(cef));
        }
    }
    format!("{header}\n{row}\n")
}

/// JSON twin of [`metrics_csv`].
pub fn metrics_json(image: &str, m: &MetricReport, with_cef: bool) -> String {
    let mut obj = serde_json::Map::new();
    obj.insert("image".into(), image.into());
    for (name, value) in METRIC_COLUMNS.iter().zip(metric_values(m)) {
        obj.insert((*name).into(), json_number(value));
    }
    if with_cef {
        obj.insert(
            "cef".into(),
            m.cef.map(json_number).unwrap_or(serde_json::Value::Null),
        );
    }
    let mut out = serde_json::to_string_pretty(&serde_json::Value::Object(obj))
        .expect("metric report serializes");
    out.push('\n');
    out
}

/// Serialization options for bench reports.
#[derive(Debug, Clone, Copy)]
pub struct BenchFormat {
    pub with_metrics: bool,
    /// Omits runtime columns so repeat runs are byte-identical.
    pub with_timing: bool,
}

/// Bench table: one row per image plus a trailing summary row carrying the
/// mean runtime over successful rows.
pub fn bench_csv(report: &BenchReport, format: BenchFormat) -> String {
    let mut header = String::from("image,config");
    if format.with_metrics {
        for col in METRIC_COLUMNS {
            header.push(',');
            header.push_str(col);
        }
        header.push_str(",cef");
    }
    if format.with_timing {
        header.push_str(",runtime_ms");
    }
    header.push_str(",status");

    let metric_cells = |metrics: &Option<MetricReport>| -> String {
        let mut cells = String::new();
        if format.with_metrics {
            match metrics {
                Some(m) => {
                    for value in metric_values(m) {
                        cells.push(',');
                        cells.push_str(&format_sig(value));
                    }
                    cells.push(',');
                    if let Some(cef) = m.cef {
                        cells.push_str(&format_sig(cef));
                    }
                }
                None => cells.push_str(&",".repeat(7)),
            }
        }
        cells
    };

    let mut out = header;
    out.push('\n');
    for row in &report.rows {
        out.push_str(&sanitize_cell(&row.id));
        out.push(',');
        out.push_str(&report.config_summary);
        match &row.outcome {
            RowOutcome::Done {
                runtime_ms,
                metrics,
            } => {
                out.push_str(&metric_cells(metrics));
                if format.with_timing {
                    out.push(',');
                    out.push_str(&format_sig(*runtime_ms));
                }
                out.push_str(",ok");
            }
            RowOutcome::Failed { message } => {
                out.push_str(&metric_cells(&None));
                if format.with_timing {
                    out.push(',');
                }
                out.push_str(",error: ");
                out.push_str(&sanitize_cell(message));
            }
        }
        out.push('\n');
    }

    // summary row
    out.push_str("summary,");
    out.push_str(&report.config_summary);
    out.push_str(&metric_cells(&None));
    if format.with_timing {
        out.push(',');
        if let Some(mean) = report.mean_runtime_ms() {
            out.push_str(&format_sig(mean));
        }
    }
    out.push_str(&format!(
        ",processed={} failed={}\n",
        report.processed_count(),
        report.failed_count()
    ));
    out
}

/// JSON twin of [`bench_csv`].
pub fn bench_json(report: &BenchReport, format: BenchFormat) -> String {
    let rows: Vec<serde_json::Value> = report
        .rows
        .iter()
        .map(|row| {
            let mut obj = serde_json::Map::new();
            obj.insert("image".into(), row.id.clone().into());
            match &row.outcome {
                RowOutcome::Done {
                    runtime_ms,
                    metrics,
                } => {
                    obj.insert("status".into(), "ok".into());
                    if format.with_timing {
                        obj.insert("runtime_ms".into(), json_number(*runtime_ms));
                    }
                    if format.with_metrics {
                        if let Some(m) = metrics {
                            let mut metric_obj = serde_json::Map::new();
                            for (name, value) in METRIC_COLUMNS.iter().zip(metric_values(m)) {
                                metric_obj.insert((*name).into(), json_number(value));
                            }
                            metric_obj.insert(
                                "cef".into(),
                                m.cef.map(json_number).unwrap_or(serde_json::Value::Null),
                            );
                            obj.insert("metrics".into(), metric_obj.into());
                        }
                    }
                }
                RowOutcome::Failed { message } => {
                    obj.insert("status".into(), "error".into());
                    obj.insert("error".into(), message.clone().into());
                }
            }
            obj.into()
        })
        .collect();

    let mut summary = serde_json::Map::new();
    summary.insert("processed".into(), report.processed_count().into());
    summary.insert("failed".into(), report.failed_count().into());
    if format.with_timing {
        summary.insert(
            "mean_runtime_ms".into(),
            report
                .mean_runtime_ms()
                .map(json_number)
                .unwrap_or(serde_json::Value::Null),
        );
    }

    let doc = serde_json::json!({
        "config": report.config_summary,
        "rows": rows,
        "summary": summary,
    });
    let mut out = serde_json::to_string_pretty(&doc).expect("bench report serializes");
    out.push('\n');
    out
}

/// Keeps ids and error text from breaking the unquoted CSV layout.
fn sanitize_cell(text: &str) -> String {
    text.replace([',', '\n', '\r'], " ")
}
