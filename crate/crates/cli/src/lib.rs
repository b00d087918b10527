//! Shared plumbing for the `zeta` and `decomp` binaries.

pub mod decomp;
pub mod zeta;

use std::fmt;
use std::path::Path;
use std::process::ExitCode;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;
use zeta_core::exact;
use zeta_core::ffgeom::FfError;
use zeta_core::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// What a command prints on stdout.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    /// A coefficient vector whose first entry has index `first`.
    Coefficients { first: usize, values: Vec<Rational> },
    Json(Value),
}

/// Output plus whether the command's checks held.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: Output,
    pub ok: bool,
}

impl Outcome {
    pub fn ok(output: Output) -> Self {
        Self { output, ok: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

impl CliError {
    pub fn usage(message: impl fmt::Display) -> Self {
        Self { code: EXIT_USAGE, message: message.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<FfError> for CliError {
    fn from(e: FfError) -> Self {
        let code = if matches!(e, FfError::FieldTooLarge { .. }) { EXIT_BUDGET } else { EXIT_USAGE };
        Self { code, message: e.to_string() }
    }
}

impl From<zeta_core::arithscheme::SchemeError> for CliError {
    fn from(e: zeta_core::arithscheme::SchemeError) -> Self {
        match e {
            zeta_core::arithscheme::SchemeError::Ff(e) => e.into(),
            e => Self::usage(e),
        }
    }
}

impl From<zeta_core::verify::VerifyError> for CliError {
    fn from(e: zeta_core::verify::VerifyError) -> Self {
        match e {
            zeta_core::verify::VerifyError::Ff(e) => e.into(),
            zeta_core::verify::VerifyError::Scheme(e) => e.into(),
            e => Self::usage(e),
        }
    }
}

pub fn rationals(values: &[Rational]) -> Value {
    Value::Array(values.iter().map(|v| Value::String(exact::to_text(v))).collect())
}

pub fn render(output: &Output, format: Format) -> Result<String, CliError> {
    Ok(match (output, format) {
        (Output::Coefficients { values, .. }, Format::Json) => rationals(values).to_string(),
        (Output::Coefficients { first, values }, Format::Csv) => {
            let mut s = String::from("n,coefficient\n");
            for (i, v) in values.iter().enumerate() {
                s.push_str(&format!("{},{}\n", first + i, exact::to_text(v)));
            }
            s.trim_end().to_string()
        }
        (Output::Coefficients { first, values }, Format::Pretty) => values
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{:>6}  {}", first + i, exact::to_text(v)))
            .collect::<Vec<_>>()
            .join("\n"),
        (Output::Json(v), Format::Json) => v.to_string(),
        (Output::Json(v), Format::Pretty) => serde_json::to_string_pretty(v).expect("values serialize"),
        (Output::Json(_), Format::Csv) => {
            return Err(CliError::usage("csv output is only available for coefficient vectors"))
        }
    })
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

/// Caps rayon's worker count for the whole process.
pub fn configure_threads(threads: Option<usize>) -> Result<(), CliError> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::usage(format!("cannot configure thread pool: {e}")))?;
    }
    Ok(())
}

/// Echoes the resolved configuration to stderr, runs, prints the result and
/// maps it to an exit code.
pub fn finish<C: Serialize>(config: &C, format: Format, run: impl FnOnce() -> Result<Outcome, CliError>) -> ExitCode {
    eprintln!("{}", serde_json::json!({ "config": config }));
    match run().and_then(|outcome| Ok((render(&outcome.output, format)?, outcome.ok))) {
        Ok((text, ok)) => {
            println!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILED)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use zeta_core::exact::{frac, int};

    #[test]
    fn renders_coefficients() {
        let out = Output::Coefficients { first: 1, values: vec![int(1), frac(-1, 2)] };
        assert_eq!(render(&out, Format::Json).unwrap(), r#"["1/1","-1/2"]"#);
        assert_eq!(render(&out, Format::Csv).unwrap(), "n,coefficient\n1,1/1\n2,-1/2");
        assert!(render(&out, Format::Pretty).unwrap().contains("-1/2"));
    }

    #[test]
    fn csv_rejects_structured_output() {
        let err = render(&Output::Json(serde_json::json!({"a": 1})), Format::Csv).unwrap_err();
        assert_eq!(err.code, EXIT_USAGE);
    }

    #[test]
    fn budget_errors_exit_with_three() {
        let e: CliError = FfError::FieldTooLarge { needed: "2^40".into(), budget: 5 }.into();
        assert_eq!(e.code, EXIT_BUDGET);
    }
}
