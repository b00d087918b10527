//! The `zeta` command.

use std::fmt::Debug;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use zeta_core::arith::{self, Ideal, IdealPoset, QuadraticField};
use zeta_core::arithscheme::ArithmeticScheme;
use zeta_core::exact;
use zeta_core::ffgeom::{
    self, closed_point_counts, point_counts, zeta_from_counts, Ambient, VarietyFile, VarietySpec, ZeroCycle,
    ZeroCyclePoset, DEFAULT_BUDGET,
};
use zeta_core::poset::{Chain, Divisibility, FinitePoset, FinitePosetSpec, Incidence, LocallyFinitePoset};
use zeta_core::series::rational_reconstruct;
use zeta_core::verify::run_verify;
use zeta_core::Rational;

use crate::decomp::DecompCommand;
use crate::{rationals, read_json, CliError, Format, Outcome, Output};

#[derive(Debug, Parser, Serialize)]
#[command(name = "zeta", version, about = "Exact zeta functions, Möbius inversion and incidence algebras")]
pub struct ZetaArgs {
    /// Worker threads for parallel enumeration.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Maximum number of point assignments a single count may enumerate.
    #[arg(long, global = true, env = "ZETA_ENUM_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: ZetaCommand,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum ZetaCommand {
    /// Dirichlet coefficients of the Riemann zeta function.
    Riemann {
        #[arg(long, value_parser = positive)]
        terms: usize,
    },
    /// Dirichlet coefficients of 1/ζ(s), the Möbius function.
    Mobius {
        #[arg(long, value_parser = positive)]
        terms: usize,
    },
    /// Dirichlet coefficients of the Dedekind zeta function of ℚ(√D).
    Dedekind {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long, value_parser = positive)]
        terms: usize,
        /// Print the coefficients of 1/ζ_K instead.
        #[arg(long)]
        mobius: bool,
    },
    /// Point counts and the Hasse–Weil zeta function over 𝔽_q.
    Variety {
        #[arg(long)]
        q: u64,
        /// `affine:m` or `projective:m`.
        #[arg(long, required_unless_present = "input")]
        ambient: Option<String>,
        /// Defining polynomial; repeat for several.
        #[arg(long = "poly", allow_hyphen_values = true)]
        polys: Vec<String>,
        /// JSON file `{"ambient": ..., "polys": [...]}` instead of flags.
        #[arg(long, conflicts_with_all = ["ambient", "polys"])]
        input: Option<PathBuf>,
        #[arg(long, value_parser = positive)]
        order: usize,
        /// Degree bounds `nd,dd` for rational reconstruction.
        #[arg(long)]
        reconstruct: Option<String>,
        /// `n,E` for the functional equation check; needs --reconstruct.
        #[arg(long, requires = "reconstruct")]
        check_functional: Option<String>,
    },
    /// Dirichlet coefficients of the zeta function of an arithmetic scheme.
    Arith {
        /// specz | affine:n | projective:n | specok:D | poly:<ambient>:<f1>;<f2>...
        #[arg(long, allow_hyphen_values = true)]
        scheme: String,
        #[arg(long, value_parser = positive)]
        terms: usize,
        /// Second scheme to compare coefficient by coefficient.
        #[arg(long, allow_hyphen_values = true)]
        compare: Option<String>,
    },
    /// Möbius or zeta-squared values on an interval of a built-in poset.
    Poset {
        #[arg(long, value_enum)]
        kind: PosetKind,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long, value_enum, default_value_t = PosetFunction::Mobius)]
        function: PosetFunction,
        /// Discriminant for `--kind ideal`.
        #[arg(long, allow_hyphen_values = true)]
        disc: Option<i64>,
        /// Poset JSON for `--kind file`; variety JSON for `--kind zerocycle`.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Base field for `--kind zerocycle`.
        #[arg(long)]
        q: Option<u64>,
    },
    /// Decomposition spaces and their incidence algebras.
    #[command(subcommand)]
    Decomp(DecompCommand),
    /// Run a built-in verification suite.
    Verify {
        /// mobius | euler | dedekind | hasseweil | cycles | arith | decomp | all
        suite: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PosetKind {
    Chain,
    Divisibility,
    Ideal,
    Zerocycle,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PosetFunction {
    Mobius,
    ZetaSquared,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("expected a positive integer, got {s:?}")),
    }
}

fn pair(s: &str, what: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::usage(format!("{what} must look like a,b; got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn field(disc: i64) -> Result<QuadraticField, CliError> {
    QuadraticField::new(disc).map_err(CliError::usage)
}

pub fn run(args: &ZetaArgs) -> Result<Outcome, CliError> {
    let budget = args.budget;
    match &args.command {
        ZetaCommand::Riemann { terms } => {
            Ok(Outcome::ok(Output::Coefficients { first: 1, values: arith::riemann_zeta_coeffs(*terms).coeffs().to_vec() }))
        }
        ZetaCommand::Mobius { terms } => {
            Ok(Outcome::ok(Output::Coefficients { first: 1, values: arith::riemann_mobius_coeffs(*terms).coeffs().to_vec() }))
        }
        ZetaCommand::Dedekind { disc, terms, mobius } => {
            let k = field(*disc)?;
            let c = if *mobius { arith::dedekind_mobius_coeffs(&k, *terms) } else { arith::dedekind_zeta_coeffs(&k, *terms) };
            Ok(Outcome::ok(Output::Coefficients { first: 1, values: c.coeffs().to_vec() }))
        }
        ZetaCommand::Variety { q, ambient, polys, input, order, reconstruct, check_functional } => {
            let spec = match input {
                Some(path) => read_json::<VarietyFile>(path)?.to_spec()?,
                None => {
                    let ambient: Ambient = ambient.as_deref().unwrap_or_default().parse()?;
                    let refs: Vec<&str> = polys.iter().map(String::as_str).collect();
                    VarietySpec::parse(ambient, &refs)?
                }
            };
            variety(&spec, *q, *order, reconstruct.as_deref(), check_functional.as_deref(), budget)
        }
        ZetaCommand::Arith { scheme, terms, compare } => {
            let x: ArithmeticScheme = scheme.parse()?;
            let left = x.global_coeffs(*terms, budget)?;
            let Some(other) = compare else {
                return Ok(Outcome::ok(Output::Coefficients { first: 1, values: left.coeffs().to_vec() }));
            };
            let y: ArithmeticScheme = other.parse()?;
            let right = y.global_coeffs(*terms, budget)?;
            let differences: Vec<Value> = (1..=*terms as u64)
                .filter(|&n| left.get(n) != right.get(n))
                .map(|n| json!({"n": n, "left": exact::to_text(left.get(n)), "right": exact::to_text(right.get(n))}))
                .collect();
            let equal = differences.is_empty();
            Ok(Outcome {
                output: Output::Json(json!({
                    "left": {"scheme": x.to_string(), "coefficients": rationals(left.coeffs())},
                    "right": {"scheme": y.to_string(), "coefficients": rationals(right.coeffs())},
                    "equal": equal,
                    "differences": differences,
                })),
                ok: equal,
            })
        }
        ZetaCommand::Poset { kind, from, to, function, disc, file, q } => {
            poset(*kind, from, to, *function, *disc, file.as_ref(), *q, budget)
        }
        ZetaCommand::Decomp(cmd) => crate::decomp::run(cmd),
        ZetaCommand::Verify { suite } => {
            let report = run_verify(suite, budget)?;
            let ok = report.passed;
            Ok(Outcome { output: Output::Json(serde_json::to_value(report).expect("reports serialize")), ok })
        }
    }
}

fn variety(
    spec: &VarietySpec,
    q: u64,
    order: usize,
    reconstruct: Option<&str>,
    check_functional: Option<&str>,
    budget: u64,
) -> Result<Outcome, CliError> {
    let counts = point_counts(spec, q, order, budget)?;
    let z = zeta_from_counts(&counts)?;
    let count_values: Vec<Rational> = counts.iter().map(|c| exact::big(c.clone().into())).collect();
    let closed: Value = match closed_point_counts(&counts) {
        Ok(a) => rationals(&a.iter().map(|c| exact::big(c.clone().into())).collect::<Vec<_>>()),
        Err(e) => Value::String(e.to_string()),
    };
    let polys: Vec<String> = spec.polys().iter().map(|p| p.to_text()).collect();
    let mut out = json!({
        "ambient": spec.ambient().to_string(),
        "polys": polys,
        "counts": rationals(&count_values),
        "zeta": rationals(z.coeffs()),
        "closed_points": closed,
    });
    let mut ok = true;
    if let Some(bounds) = reconstruct {
        let (nd, dd) = pair(bounds, "--reconstruct")?;
        let rf = rational_reconstruct(&z, nd, dd).map_err(CliError::usage)?;
        out["reconstruction"] = match &rf {
            Some(rf) => serde_json::to_value(rf).expect("rational functions serialize"),
            None => Value::Null,
        };
        if let Some(ne) = check_functional {
            let (n, e) = pair(ne, "--check-functional")?;
            let eps = rf.as_ref().and_then(|rf| ffgeom::weil_functional_check(rf, q, n as u32, e as u32));
            ok = eps.is_some();
            out["functional_equation"] = json!({
                "holds": eps.is_some(),
                "epsilon": eps.map(|s| exact::to_text(&exact::int(s as i64))),
            });
        }
    }
    Ok(Outcome { output: Output::Json(out), ok })
}

fn interval_values<P: LocallyFinitePoset + 'static>(
    poset: Arc<P>,
    x: P::Elem,
    y: P::Elem,
    function: PosetFunction,
    show: impl Fn(&P::Elem) -> String,
) -> Result<Outcome, CliError> {
    let elements = poset.interval(&x, &y).map_err(CliError::usage)?;
    let f = match function {
        PosetFunction::Mobius => Incidence::mobius(poset.clone()),
        PosetFunction::ZetaSquared => {
            let z = Incidence::zeta(poset.clone());
            z.convolve(&z)
        }
    };
    let values = elements
        .iter()
        .map(|z| {
            let v = f.value(&x, z).map_err(CliError::usage)?;
            Ok(json!({"element": show(z), "value": exact::to_text(&v)}))
        })
        .collect::<Result<Vec<Value>, CliError>>()?;
    let top = f.value(&x, &y).map_err(CliError::usage)?;
    Ok(Outcome::ok(Output::Json(json!({
        "from": show(&x),
        "to": show(&y),
        "value": exact::to_text(&top),
        "interval": values,
    }))))
}

fn parse_int<T: std::str::FromStr>(s: &str) -> Result<T, CliError> {
    s.trim().parse().map_err(|_| CliError::usage(format!("expected an integer, got {s:?}")))
}

#[allow(clippy::too_many_arguments)]
fn poset(
    kind: PosetKind,
    from: &str,
    to: &str,
    function: PosetFunction,
    disc: Option<i64>,
    file: Option<&PathBuf>,
    q: Option<u64>,
    budget: u64,
) -> Result<Outcome, CliError> {
    match kind {
        PosetKind::Chain => interval_values(Arc::new(Chain), parse_int(from)?, parse_int(to)?, function, u64::to_string),
        PosetKind::Divisibility => {
            interval_values(Arc::new(Divisibility), parse_int(from)?, parse_int(to)?, function, u64::to_string)
        }
        PosetKind::Ideal => {
            let k = field(disc.ok_or_else(|| CliError::usage("--kind ideal needs --disc"))?)?;
            let x = Ideal::parse(&k, from).map_err(CliError::usage)?;
            let y = Ideal::parse(&k, to).map_err(CliError::usage)?;
            interval_values(Arc::new(IdealPoset { field: k }), x, y, function, Ideal::to_string)
        }
        PosetKind::File => {
            let path = file.ok_or_else(|| CliError::usage("--kind file needs --file"))?;
            let p = FinitePoset::from_spec(&read_json::<FinitePosetSpec>(path)?).map_err(CliError::usage)?;
            let x = p.index_of(from).map_err(CliError::usage)?;
            let y = p.index_of(to).map_err(CliError::usage)?;
            let p = Arc::new(p);
            let names = p.clone();
            interval_values(p, x, y, function, move |&i| names.name(i).to_string())
        }
        PosetKind::Zerocycle => {
            let path = file.ok_or_else(|| CliError::usage("--kind zerocycle needs --file with a variety"))?;
            let q = q.ok_or_else(|| CliError::usage("--kind zerocycle needs --q"))?;
            let spec = read_json::<VarietyFile>(path)?.to_spec()?;
            let x: ZeroCycle = from.parse()?;
            let y: ZeroCycle = to.parse()?;
            let top = y.points().map(|(p, _)| p.degree as usize).max().unwrap_or(1);
            let a = closed_point_counts(&point_counts(&spec, q, top, budget)?)?;
            let poset = Arc::new(ZeroCyclePoset::new(&a)?);
            if !poset.contains(&y) {
                return Err(CliError::usage(format!("{y} uses a closed point the variety does not have")));
            }
            interval_values(poset, x, y, function, ZeroCycle::to_string)
        }
    }
}
