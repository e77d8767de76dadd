//! Output artifacts: serializable records, fixed-header CSV tables, and
//! atomic file writes.
//!
//! Every float lands on disk with 17 significant digits (`{:.16e}`), a `.`
//! decimal separator, and LF line endings, independent of locale; identical
//! inputs therefore produce byte-identical files. Files are written through
//! a temporary file in the target directory and renamed into place, so a
//! crashed run never leaves a torn artifact.

use serde::Serialize;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

pub const LOCUS_HEADER: &str = "theta,v1x,v1y,v2x,v2y,v3x,v3y,ix,iy,r";
pub const FOCI_HEADER: &str = "t,d_gamma,d_locus";
pub const VERIFY_HEADER: &str = "suite,name,measured,threshold,op,pass";

/// One float at 17 significant digits.
fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `contents` to `dir/name` atomically (temp file + rename),
/// creating the directory if needed.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    let path = dir.join(name);
    tmp.persist(&path).map_err(|e| e.error)?;
    Ok(path)
}

/// Pretty JSON with a trailing newline.
pub fn to_json(value: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("records serialize infallibly");
    text.push('\n');
    text
}

#[derive(Serialize)]
pub struct CausticRecord {
    pub a: f64,
    pub b: f64,
    pub lambda_star: f64,
}

#[derive(Serialize)]
pub struct ResidualsRecord {
    pub on_boundary: f64,
    pub reflection: f64,
    pub closure: f64,
    pub tangency: f64,
}

#[derive(Serialize)]
pub struct OrbitRecord {
    pub vertices: [[f64; 2]; 3],
    pub thetas: [f64; 3],
    /// Sides as `l x + m y + n = 0` with `l^2 + m^2 = 1` and a fixed sign.
    pub sides: [[f64; 3]; 3],
    pub perimeter: f64,
    pub inradius: f64,
    pub incenter: [f64; 2],
    pub caustic: CausticRecord,
    pub residuals: ResidualsRecord,
}

#[derive(Serialize)]
pub struct FitRecord {
    pub coeffs: [f64; 6],
    pub kind: &'static str,
    pub center: [f64; 2],
    pub semi_axes: [f64; 2],
    pub rotation: f64,
    pub foci: [[f64; 2]; 2],
    pub residual_max: f64,
    pub residual_rms: f64,
}

/// Degenerate near-circle outcome: the incenters collapse to the center
/// instead of tracing an ellipse.
#[derive(Serialize)]
pub struct PointLocusRecord {
    pub kind: &'static str,
    pub center: [f64; 2],
    pub max_radius: f64,
    pub samples: usize,
}

#[derive(Serialize)]
pub struct FociRecord {
    pub t: f64,
    pub d_gamma: f64,
    pub d_locus: f64,
}

#[derive(Serialize)]
pub struct CheckRecord {
    pub name: &'static str,
    pub measured: f64,
    pub threshold: f64,
    pub op: &'static str,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct SuiteRecord {
    pub suite: &'static str,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct VerifyRecord {
    pub suites: Vec<SuiteRecord>,
    pub passed: bool,
}

/// One sweep row of `locus.csv` (also the single-orbit CSV echo).
pub struct LocusRow {
    pub theta: f64,
    pub vertices: [[f64; 2]; 3],
    pub incenter: [f64; 2],
    pub inradius: f64,
}

pub fn locus_csv(rows: &[LocusRow]) -> String {
    let mut out = String::from(LOCUS_HEADER);
    out.push('\n');
    for row in rows {
        let fields = [
            row.theta,
            row.vertices[0][0],
            row.vertices[0][1],
            row.vertices[1][0],
            row.vertices[1][1],
            row.vertices[2][0],
            row.vertices[2][1],
            row.incenter[0],
            row.incenter[1],
            row.inradius,
        ];
        let line: Vec<String> = fields.iter().map(|&x| sig17(x)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn foci_csv(rows: &[FociRecord]) -> String {
    let mut out = String::from(FOCI_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            sig17(row.t),
            sig17(row.d_gamma),
            sig17(row.d_locus)
        ));
    }
    out
}

pub fn verify_csv(record: &VerifyRecord) -> String {
    let mut out = String::from(VERIFY_HEADER);
    out.push('\n');
    for suite in &record.suites {
        for check in &suite.checks {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                suite.suite,
                check.name,
                sig17(check.measured),
                sig17(check.threshold),
                check.op,
                check.pass
            ));
        }
    }
    out
}
