//! Frenet tables and their CSV/JSON encodings.

use std::io::Write;

use serde::Serialize;

use pgcurve::{curvature, frenet_frame, ArcCurve, CurveError, FrenetConfig, Grid};

use crate::CliError;

pub const TABLE_HEADER: [&str; 16] =
    ["s", "x", "y", "z", "Tx", "Ty", "Tz", "Nx", "Ny", "Nz", "Bx", "By", "Bz", "kappa", "tau", "causal"];

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub tx: f64,
    pub ty: f64,
    pub tz: f64,
    pub nx: Option<f64>,
    pub ny: Option<f64>,
    pub nz: Option<f64>,
    pub bx: Option<f64>,
    pub by: Option<f64>,
    pub bz: Option<f64>,
    pub kappa: f64,
    pub tau: Option<f64>,
    /// `timelike`, `spacelike`, or `undefined` / `lightlike` where the trihedron does not exist.
    pub causal: &'static str,
}

pub struct Table {
    pub rows: Vec<Row>,
    pub undefined: usize,
}

pub fn frenet_table(curve: &ArcCurve, grid: &Grid<f64>, cfg: &FrenetConfig<f64>) -> Result<Table, CurveError> {
    let mut rows = Vec::with_capacity(grid.n);
    let mut undefined = 0;
    for s in grid.points() {
        let [x, y, z] = curve.jets(s, 1)?;
        let mut row = Row {
            s,
            x: x.value(),
            y: y.value(),
            z: z.value(),
            tx: x.derivative(1),
            ty: y.derivative(1),
            tz: z.derivative(1),
            nx: None,
            ny: None,
            nz: None,
            bx: None,
            by: None,
            bz: None,
            kappa: curvature(curve, s)?,
            tau: None,
            causal: "undefined",
        };
        match frenet_frame(curve, s, cfg) {
            Ok(f) => {
                (row.nx, row.ny, row.nz) = (Some(f.n.x), Some(f.n.y), Some(f.n.z));
                (row.bx, row.by, row.bz) = (Some(f.b.x), Some(f.b.y), Some(f.b.z));
                row.kappa = f.kappa;
                row.tau = Some(f.tau);
                row.causal = f.causal.as_str();
            }
            Err(CurveError::FrameUndefined { .. }) => undefined += 1,
            Err(CurveError::LightlikeAcceleration { .. }) => {
                row.causal = "lightlike";
                undefined += 1;
            }
            Err(e) => return Err(e),
        }
        rows.push(row);
    }
    Ok(Table { rows, undefined })
}

/// 17 significant digits, the shortest fixed width that round-trips every `f64`.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn write_csv<W: Write>(rows: &[Row], w: W) -> Result<(), CliError> {
    let mut wr = csv::Writer::from_writer(w);
    let io = |e: csv::Error| CliError::io(e.to_string());
    wr.write_record(TABLE_HEADER).map_err(io)?;
    for r in rows {
        let mut rec = vec![num(r.s), num(r.x), num(r.y), num(r.z), num(r.tx), num(r.ty), num(r.tz)];
        rec.extend([r.nx, r.ny, r.nz, r.bx, r.by, r.bz].map(opt));
        rec.push(num(r.kappa));
        rec.push(opt(r.tau));
        rec.push(r.causal.to_string());
        wr.write_record(&rec).map_err(io)?;
    }
    wr.flush().map_err(|e| CliError::io(e.to_string()))
}

pub fn write_json<W: Write, S: Serialize>(value: &S, mut w: W) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::io(e.to_string()))?;
    writeln!(w).map_err(|e| CliError::io(e.to_string()))
}
