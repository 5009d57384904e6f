//! Metrics file emission.
//!
//! The stats file is comma-separated with a fixed header; sample dumps and
//! CDF point files share the cell-key columns so external plotting can
//! group by kind, revoked count, and frequency. All byte strings elsewhere
//! are hex; here everything is numeric except the row kind.

use std::io::{self, Write};

use super::runner::{CheckBenchmark, CrlBenchmark, WindowBenchmark};
use super::stats::{emit_cdf, DelayStats};

pub const METRICS_HEADER: &str = "kind,revoked_count,frequency_hz,mean_ms,max_ms,p95_ms,n";

/// One stats row of the metrics file.
#[derive(Clone, Debug)]
pub struct MetricsRow {
    pub kind: &'static str,
    pub revoked_count: usize,
    pub frequency_hz: u32,
    pub stats: DelayStats,
}

/// One raw sample row.
#[derive(Clone, Debug)]
pub struct SampleRow {
    pub kind: &'static str,
    pub revoked_count: usize,
    pub frequency_hz: u32,
    pub value_ms: f64,
}

/// One empirical CDF point.
#[derive(Clone, Debug)]
pub struct CdfRow {
    pub kind: &'static str,
    pub revoked_count: usize,
    pub frequency_hz: u32,
    pub value_ms: f64,
    pub cumulative_probability: f64,
}

pub fn write_metrics_csv<W: Write>(mut w: W, rows: &[MetricsRow]) -> io::Result<()> {
    writeln!(w, "{METRICS_HEADER}")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{:.6},{:.6},{:.6},{}",
            row.kind,
            row.revoked_count,
            row.frequency_hz,
            row.stats.mean_ms,
            row.stats.max_ms,
            row.stats.p95_ms,
            row.stats.n,
        )?;
    }
    Ok(())
}

pub fn write_samples_csv<W: Write>(mut w: W, rows: &[SampleRow]) -> io::Result<()> {
    writeln!(w, "kind,revoked_count,frequency_hz,value_ms")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{:.6}",
            row.kind, row.revoked_count, row.frequency_hz, row.value_ms
        )?;
    }
    Ok(())
}

pub fn write_cdf_csv<W: Write>(mut w: W, rows: &[CdfRow]) -> io::Result<()> {
    writeln!(w, "kind,revoked_count,frequency_hz,value_ms,cumulative_probability")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{:.6},{:.6}",
            row.kind,
            row.revoked_count,
            row.frequency_hz,
            row.value_ms,
            row.cumulative_probability
        )?;
    }
    Ok(())
}

fn cdf_rows_for(
    kind: &'static str,
    revoked_count: usize,
    frequency_hz: u32,
    samples: &[f64],
) -> Vec<CdfRow> {
    emit_cdf(samples)
        .into_iter()
        .map(|(value_ms, cumulative_probability)| CdfRow {
            kind,
            revoked_count,
            frequency_hz,
            value_ms,
            cumulative_probability,
        })
        .collect()
}

impl CheckBenchmark {
    pub fn metrics_rows(&self) -> Vec<MetricsRow> {
        self.cells
            .iter()
            .map(|cell| MetricsRow {
                kind: "check",
                revoked_count: cell.revoked_count,
                frequency_hz: cell.frequency_hz,
                stats: cell.stats,
            })
            .collect()
    }

    pub fn sample_rows(&self) -> Vec<SampleRow> {
        self.cells
            .iter()
            .flat_map(|cell| {
                cell.samples.iter().map(|&value_ms| SampleRow {
                    kind: "check",
                    revoked_count: cell.revoked_count,
                    frequency_hz: cell.frequency_hz,
                    value_ms,
                })
            })
            .collect()
    }

    pub fn cdf_rows(&self) -> Vec<CdfRow> {
        self.cells
            .iter()
            .flat_map(|cell| {
                cdf_rows_for("check", cell.revoked_count, cell.frequency_hz, &cell.samples)
            })
            .collect()
    }
}

impl WindowBenchmark {
    pub fn metrics_rows(&self) -> Vec<MetricsRow> {
        vec![MetricsRow {
            kind: "publish",
            revoked_count: self.n_revocations,
            frequency_hz: 0,
            stats: self.stats,
        }]
    }

    pub fn sample_rows(&self) -> Vec<SampleRow> {
        self.samples
            .iter()
            .map(|&value_ms| SampleRow {
                kind: "publish",
                revoked_count: self.n_revocations,
                frequency_hz: 0,
                value_ms,
            })
            .collect()
    }

    pub fn cdf_rows(&self) -> Vec<CdfRow> {
        cdf_rows_for("publish", self.n_revocations, 0, &self.samples)
    }
}

impl CrlBenchmark {
    pub fn metrics_rows(&self) -> Vec<MetricsRow> {
        let mut rows = Vec::new();
        for cell in &self.cells {
            rows.push(MetricsRow {
                kind: "crl",
                revoked_count: cell.revoked_count,
                frequency_hz: cell.frequency_hz,
                stats: cell.stats,
            });
            if let Some(stats) = cell.hit_stats {
                rows.push(MetricsRow {
                    kind: "crl_hit",
                    revoked_count: cell.revoked_count,
                    frequency_hz: cell.frequency_hz,
                    stats,
                });
            }
            if let Some(stats) = cell.miss_stats {
                rows.push(MetricsRow {
                    kind: "crl_miss",
                    revoked_count: cell.revoked_count,
                    frequency_hz: cell.frequency_hz,
                    stats,
                });
            }
        }
        rows
    }

    pub fn sample_rows(&self) -> Vec<SampleRow> {
        self.cells
            .iter()
            .flat_map(|cell| {
                cell.samples.iter().map(|&value_ms| SampleRow {
                    kind: "crl",
                    revoked_count: cell.revoked_count,
                    frequency_hz: cell.frequency_hz,
                    value_ms,
                })
            })
            .collect()
    }

    pub fn cdf_rows(&self) -> Vec<CdfRow> {
        self.cells
            .iter()
            .flat_map(|cell| cdf_rows_for("crl", cell.revoked_count, cell.frequency_hz, &cell.samples))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metrics_csv_has_fixed_header_and_precision() {
        let rows = vec![MetricsRow {
            kind: "check",
            revoked_count: 500,
            frequency_hz: 1,
            stats: DelayStats {
                mean_ms: 10.0,
                max_ms: 31.0,
                p95_ms: 16.1,
                n: 60,
            },
        }];
        let mut out = Vec::new();
        write_metrics_csv(&mut out, &rows).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(METRICS_HEADER));
        assert_eq!(
            lines.next(),
            Some("check,500,1,10.000000,31.000000,16.100000,60")
        );
        assert_eq!(lines.next(), None);
    }
}
