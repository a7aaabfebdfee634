//! CSV writers. Numbers use 17 significant digits so that they reparse exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use hartree_core::io::fmt_g17;
use hartree_core::Result;

use crate::experiments::{BornRow, ConservationRow, ErrorRow, MaslovRow, SlopeRow, WignerRow};

/// A row of a CSV table.
pub trait CsvRow {
    const HEADER: &'static str;
    fn fields(&self) -> Vec<String>;
}

pub fn write_csv<R: CsvRow, W: Write>(rows: &[R], mut out: W) -> Result<()> {
    writeln!(out, "{}", R::HEADER)?;
    for r in rows {
        writeln!(out, "{}", r.fields().join(","))?;
    }
    Ok(())
}

pub fn save_csv<R: CsvRow>(rows: &[R], path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_csv(rows, &mut w)?;
    w.flush()?;
    Ok(())
}

fn g(x: f64) -> String {
    fmt_g17(x)
}

impl CsvRow for ErrorRow {
    const HEADER: &'static str = "epsilon,time,comparator,l2_error,j_error,h_error,rel_l2_error,status";
    fn fields(&self) -> Vec<String> {
        vec![
            g(self.epsilon),
            g(self.time),
            self.comparator.name().into(),
            g(self.l2),
            g(self.j),
            g(self.h),
            g(self.rel_l2),
            self.status.clone(),
        ]
    }
}

impl CsvRow for SlopeRow {
    const HEADER: &'static str = "comparator,time,measure,slope,residual,points,reported";
    fn fields(&self) -> Vec<String> {
        vec![
            self.comparator.name().into(),
            self.time.map_or("sup".into(), g),
            self.measure.into(),
            g(self.slope),
            g(self.residual),
            self.points.to_string(),
            self.reported.to_string(),
        ]
    }
}

impl CsvRow for ConservationRow {
    const HEADER: &'static str = "epsilon,time,mass,mass_drift,energy,energy_rel_drift";
    fn fields(&self) -> Vec<String> {
        vec![g(self.epsilon), g(self.time), g(self.mass), g(self.mass_drift), g(self.energy), g(self.energy_rel_drift)]
    }
}

impl CsvRow for MaslovRow {
    const HEADER: &'static str = "epsilon,time,phase,expected,phase_error";
    fn fields(&self) -> Vec<String> {
        vec![g(self.epsilon), g(self.time), g(self.phase), g(self.expected), g(self.error)]
    }
}

impl CsvRow for WignerRow {
    const HEADER: &'static str = "epsilon,time,band,fraction,status";
    fn fields(&self) -> Vec<String> {
        vec![g(self.epsilon), g(self.time), g(self.band), g(self.fraction), self.status.clone()]
    }
}

impl CsvRow for BornRow {
    const HEADER: &'static str = "amplitude,sigma_norm,deviation,certificate";
    fn fields(&self) -> Vec<String> {
        vec![g(self.amplitude), g(self.sigma_norm), g(self.deviation), g(self.certificate)]
    }
}
