//! Loading curves from curve files, intrinsic files and sampled-curve CSVs.

use std::path::Path;

use pgcurve::files::{parse_input_file, InputFile};
use pgcurve::synthesis::{resample_as_curve, synthesize, IntrinsicSpec, SampledCurve, CSV_HEADER};
use pgcurve::{to_arclength, AdmissibleCurve, ArcCurve, CurveError, SynthesisError};

use crate::CliError;

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

pub fn curve_error(path: &Path, e: CurveError) -> CliError {
    CliError::admissibility(format!("{}: {e}", path.display()))
}

pub fn synthesis_error(path: &Path, e: SynthesisError) -> CliError {
    CliError::synthesis(format!("{}: {e}", path.display()))
}

pub fn intrinsic_spec(path: &Path) -> Result<IntrinsicSpec<f64>, CliError> {
    let text = read_text(path)?;
    match parse_input_file(&text).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))? {
        InputFile::Intrinsic(f) => Ok(IntrinsicSpec::new(f.kappa, f.tau, f.domain.0, f.domain.1, f.step)),
        InputFile::Curve(_) => Err(CliError::parse(format!(
            "{}: expected an intrinsic file (kappa, tau, domain, step)",
            path.display()
        ))),
    }
}

/// Any of the three input kinds; sampled CSVs are recognised by their header.
pub fn load(path: &Path) -> Result<ArcCurve, CliError> {
    let text = read_text(path)?;
    if text.starts_with(&CSV_HEADER.join(",")) {
        let sampled = SampledCurve::read_csv(text.as_bytes()).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
        return resample_as_curve(&sampled).map_err(|e| curve_error(path, e));
    }
    match parse_input_file(&text).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))? {
        InputFile::Curve(f) => {
            let c = AdmissibleCurve::from_exprs(f.x, f.y, f.z, f.domain.0, f.domain.1)
                .map_err(|e| curve_error(path, e))?;
            to_arclength(&c).map_err(|e| curve_error(path, e))
        }
        InputFile::Intrinsic(f) => {
            let spec = IntrinsicSpec::new(f.kappa, f.tau, f.domain.0, f.domain.1, f.step);
            let sampled = synthesize(&spec).map_err(|e| synthesis_error(path, e))?;
            resample_as_curve(&sampled).map_err(|e| curve_error(path, e))
        }
    }
}
