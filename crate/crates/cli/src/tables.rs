//! The `sweep` and `energy-table` CSV outputs.

use std::io::Write;

use coupled_tilt::hamiltonian::{paired_spectrum, SpectrumPair};
use coupled_tilt::lie::QuantumNumbers;
use coupled_tilt::statistics::{g2_weak, mandel_q_weak, G2Class, QClass, StatisticsOracle};
use coupled_tilt::Mode;
use rayon::prelude::*;

use crate::config::SweepConfig;

pub const SWEEP_HEADER: [&str; 8] = ["N", "m", "Q", "g2", "q_class", "g2_class", "oracle_Q", "oracle_abs_err"];
pub const ENERGY_HEADER: [&str; 5] = ["N", "m", "E_closed", "E_numeric", "abs_err"];
pub const UNDEFINED: &str = "undefined";

/// Fixed 17-significant-digit scientific notation.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn format_opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_else(|| UNDEFINED.to_owned())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub q: QuantumNumbers,
    pub mandel_q: Option<f64>,
    pub g2: Option<f64>,
    pub oracle_q: Option<f64>,
    pub leakage: f64,
    pub reliable: bool,
}

impl SweepRow {
    pub fn q_class(&self) -> Option<QClass> {
        self.mandel_q.map(QClass::of)
    }

    pub fn g2_class(&self) -> Option<G2Class> {
        self.g2.map(G2Class::of)
    }

    pub fn oracle_abs_err(&self) -> Option<f64> {
        Some((self.mandel_q? - self.oracle_q?).abs())
    }

    fn record(&self) -> [String; 8] {
        let label = |s: Option<&'static str>| s.unwrap_or(UNDEFINED).to_owned();
        [
            self.q.principal().to_string(),
            self.q.angular().to_string(),
            format_opt(self.mandel_q),
            format_opt(self.g2),
            label(self.q_class().map(QClass::label)),
            label(self.g2_class().map(G2Class::label)),
            format_opt(self.oracle_q),
            format_opt(self.oracle_abs_err()),
        ]
    }
}

/// One row per `(N, m)`, N ascending and m descending. Cells are evaluated
/// in parallel; the order is fixed by the grid.
pub fn run_sweep(config: &SweepConfig) -> coupled_tilt::Result<Vec<SweepRow>> {
    let params = config.params()?;
    let oracle = StatisticsOracle::new(&params)?;
    QuantumNumbers::grid(config.nmax)
        .into_par_iter()
        .map(|q| {
            let report = oracle.report(q, Mode::A)?;
            Ok(SweepRow {
                q,
                mandel_q: mandel_q_weak(&params, q),
                g2: g2_weak(&params, q),
                oracle_q: report.mandel_q,
                leakage: report.leakage,
                reliable: report.reliable,
            })
        })
        .collect()
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

pub fn write_sweep<W: Write>(rows: &[SweepRow], out: W) -> csv::Result<()> {
    let mut w = writer(out);
    w.write_record(SWEEP_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn run_energy_table(config: &SweepConfig) -> coupled_tilt::Result<Vec<SpectrumPair>> {
    paired_spectrum(&config.params()?, config.nmax)
}

pub fn write_energy_table<W: Write>(rows: &[SpectrumPair], out: W) -> csv::Result<()> {
    let mut w = writer(out);
    w.write_record(ENERGY_HEADER)?;
    for p in rows {
        w.write_record([
            p.q.principal().to_string(),
            p.q.angular().to_string(),
            format_float(p.closed),
            format_float(p.numeric),
            format_float(p.abs_err()),
        ])?;
    }
    w.flush()?;
    Ok(())
}
