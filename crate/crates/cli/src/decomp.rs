//! Subcommands shared by `decomp` and `zeta decomp`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Subcommand;
use serde::Serialize;
use serde_json::json;
use zeta_core::exact;
use zeta_core::poset::{FinitePoset, FinitePosetSpec};
use zeta_core::simplicial::{
    boundary_simplex, check_algebra_laws, check_decomposition, convolve_functionals, counit, mobius_functional, nerve,
    zeta_functional, Functional, SimplicialFile, TruncatedSimplicialSet,
};

use crate::{read_json, CliError, Outcome, Output};

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum DecompCommand {
    /// Check the decomposition-space condition up to a level.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        level: usize,
    },
    /// Nerve of a finite poset, truncated at a level.
    Nerve {
        /// Poset JSON `{"elements": [...], "covers": [[a, b], ...]}`.
        #[arg(long, required_unless_present_any = ["divisors", "chain"])]
        poset: Option<PathBuf>,
        /// Use the divisors of this number instead.
        #[arg(long, conflicts_with_all = ["poset", "chain"])]
        divisors: Option<u64>,
        /// Use the chain 0 < 1 < … < n-1 instead.
        #[arg(long, conflicts_with = "poset")]
        chain: Option<usize>,
        #[arg(long)]
        level: usize,
        /// Write the simplicial set here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Boundary of the standard simplex, truncated at a level.
    Boundary {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convolution of two functionals on K_1.
    Convolve {
        #[arg(long)]
        input: PathBuf,
        /// zeta | delta | mobius, or a JSON file mapping edges to rationals.
        #[arg(long)]
        phi: String,
        #[arg(long)]
        psi: String,
    },
    /// The Möbius functional, the inverse of zeta.
    Mobius {
        #[arg(long)]
        input: PathBuf,
    },
    /// Check associativity and unitality of convolution.
    Laws {
        #[arg(long)]
        input: PathBuf,
    },
}

fn load(path: &Path) -> Result<TruncatedSimplicialSet, CliError> {
    TruncatedSimplicialSet::from_file(&read_json::<SimplicialFile>(path)?).map_err(CliError::usage)
}

fn need_two(k: &TruncatedSimplicialSet) -> Result<(), CliError> {
    if k.level() < 2 {
        return Err(CliError::usage("convolution needs the simplicial set up to level 2"));
    }
    Ok(())
}

fn functional(k: &TruncatedSimplicialSet, spec: &str) -> Result<Functional, CliError> {
    match spec {
        "zeta" => Ok(zeta_functional(k)),
        "delta" => Ok(counit(k)),
        "mobius" => mobius_functional(k).map_err(|e| CliError { code: crate::EXIT_FAILED, message: e.to_string() }),
        path => {
            let map: BTreeMap<String, String> = read_json(Path::new(path))?;
            let mut values = vec![None; k.size(1)];
            for (id, v) in &map {
                let e = k.index_of(1, id).map_err(CliError::usage)?;
                values[e] = Some(exact::parse(v).map_err(|_| CliError::usage(format!("bad rational {v:?} for {id}")))?);
            }
            let values = values
                .into_iter()
                .enumerate()
                .map(|(e, v)| v.ok_or_else(|| CliError::usage(format!("functional {path} has no value for {}", k.id(1, e)))))
                .collect::<Result<Vec<_>, _>>()?;
            Functional::new(k, values).map_err(CliError::usage)
        }
    }
}

fn write_or_print(k: &TruncatedSimplicialSet, out: Option<&PathBuf>) -> Result<Outcome, CliError> {
    let value = serde_json::to_value(k.to_file()).expect("simplicial sets serialize");
    match out {
        Some(path) => {
            std::fs::write(path, serde_json::to_string_pretty(&value).expect("serializes") + "\n")
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            let sizes: Vec<usize> = (0..=k.level()).map(|n| k.size(n)).collect();
            Ok(Outcome::ok(Output::Json(json!({"written": path.display().to_string(), "sizes": sizes}))))
        }
        None => Ok(Outcome::ok(Output::Json(value))),
    }
}

pub fn run(cmd: &DecompCommand) -> Result<Outcome, CliError> {
    match cmd {
        DecompCommand::Check { input, level } => {
            let k = load(input)?;
            let verdict = check_decomposition(&k, *level).map_err(CliError::usage)?;
            let ok = verdict.passed();
            Ok(Outcome { output: Output::Json(serde_json::to_value(verdict).expect("verdicts serialize")), ok })
        }
        DecompCommand::Nerve { poset, divisors, chain, level, out } => {
            let p = match (poset, divisors, chain) {
                (Some(path), _, _) => FinitePoset::from_spec(&read_json::<FinitePosetSpec>(path)?).map_err(CliError::usage)?,
                (_, Some(n), _) if *n >= 1 => FinitePoset::divisors_of(*n),
                (_, _, Some(n)) if *n >= 1 => FinitePoset::chain(*n),
                _ => return Err(CliError::usage("give --poset, --divisors n or --chain n with n ≥ 1")),
            };
            write_or_print(&nerve(&p, *level), out.as_ref())
        }
        DecompCommand::Boundary { dim, level, out } => {
            if *dim == 0 {
                return Err(CliError::usage("--dim must be at least 1"));
            }
            write_or_print(&boundary_simplex(*dim, *level), out.as_ref())
        }
        DecompCommand::Convolve { input, phi, psi } => {
            let k = load(input)?;
            need_two(&k)?;
            let (f, g) = (functional(&k, phi)?, functional(&k, psi)?);
            Ok(Outcome::ok(Output::Json(json!(convolve_functionals(&f, &g, &k).to_map(&k)))))
        }
        DecompCommand::Mobius { input } => {
            let k = load(input)?;
            need_two(&k)?;
            Ok(Outcome::ok(Output::Json(json!(functional(&k, "mobius")?.to_map(&k)))))
        }
        DecompCommand::Laws { input } => {
            let k = load(input)?;
            need_two(&k)?;
            let violation = check_algebra_laws(&k);
            let ok = violation.is_none();
            Ok(Outcome { output: Output::Json(json!({"lawful": ok, "violation": violation})), ok })
        }
    }
}
