use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use cyclic_ca::closure::Closure;
use cyclic_ca::rank::{rows_to_csv, RankRow};
use cyclic_ca::{
    ica_generating_set, rank_ca_report, read_ca_table, read_generators, standard_generating_set,
    universe_size, CellularAutomaton, Error, GeneratorSet, LocalRule, OrbitStructure, Params,
};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Output {
    Text,
    Json,
    Csv,
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParams { .. }
            | Error::InvalidSymbol { .. }
            | Error::LengthMismatch { .. }
            | Error::IndexOutOfRange { .. }
            | Error::ParamsMismatch(..)
            | Error::NotACellularAutomaton { .. }
            | Error::InvalidArgument(_)
            | Error::Parse { .. } => 2,
            _ => 3,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult = Result<String, CliError>;

fn json<T: Serialize>(value: &T) -> CliResult {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError {
            code: 3,
            message: e.to_string(),
        })
}

fn params(n: usize, q: usize) -> Result<Params, CliError> {
    Params::new(n, q).map_err(CliError::from)
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

/// `a..b` (inclusive) or a single value.
pub fn parse_range(text: &str) -> Result<(u64, u64), String> {
    let parse = |s: &str| {
        s.trim()
            .parse::<u64>()
            .map_err(|_| format!("expected an integer, found {s:?}"))
    };
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(text)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {text}"));
    }
    Ok((lo, hi))
}

pub fn orbits(n: usize, q: usize, output: Output) -> CliResult {
    let structure = OrbitStructure::enumerate(params(n, q)?);
    let listing = structure.listing();
    if output == Output::Json {
        return json(&listing);
    }
    let mut out = String::new();
    for o in &listing.orbits {
        let members: Vec<String> = o.members.iter().map(u32::to_string).collect();
        writeln!(
            out,
            "size={} rep={} members={}",
            o.size,
            o.rep,
            members.join(",")
        )
        .unwrap();
    }
    let alpha: Vec<String> = listing
        .alpha
        .iter()
        .map(|(d, a)| format!("{d}:{a}"))
        .collect();
    writeln!(out, "alpha {}", alpha.join(" ")).unwrap();
    Ok(out)
}

pub fn rank(n: u64, q: u64, output: Output) -> CliResult {
    let report = rank_ca_report(n, q)?;
    match output {
        Output::Json => json(&report),
        Output::Csv => Ok(rows_to_csv(&[RankRow::from(&report)])?),
        Output::Text => Ok(match report.rank() {
            Some(r) => format!("n={n} q={q} rank={r} exact=true\n"),
            None => format!(
                "n={n} q={q} rank in [{}, {}] exact=false\n",
                report.rank_lower, report.rank_upper
            ),
        }),
    }
}

pub fn table(n: (u64, u64), q: (u64, u64), output: Output) -> CliResult {
    let mut reports = Vec::new();
    for nn in n.0..=n.1 {
        for qq in q.0..=q.1 {
            reports.push(rank_ca_report(nn, qq)?);
        }
    }
    if output == Output::Json {
        return json(&reports);
    }
    let rows: Vec<RankRow> = reports.iter().map(RankRow::from).collect();
    Ok(rows_to_csv(&rows)?)
}

#[derive(Serialize)]
struct GensJson {
    n: usize,
    q: usize,
    units: usize,
    generators: Vec<Vec<u32>>,
}

pub fn gens(n: usize, q: usize, units_only: bool, output: Output) -> CliResult {
    let params = params(n, q)?;
    let units = ica_generating_set(&params)?;
    let all = if units_only {
        units.clone()
    } else {
        standard_generating_set(&params)?
    };
    if output == Output::Json {
        return json(&GensJson {
            n,
            q,
            units: units.len(),
            generators: all.iter().map(|g| g.images().to_vec()).collect(),
        });
    }
    Ok(cyclic_ca::io::write_generators(&all))
}

fn load_generators(params: &Params, spec: &str) -> Result<Vec<CellularAutomaton>, CliError> {
    if spec == "std" {
        Ok(standard_generating_set(params)?)
    } else {
        Ok(read_generators(&read_file(Path::new(spec))?, params)?)
    }
}

#[derive(Serialize)]
struct VerifyJson {
    size: usize,
    generating: bool,
}

pub fn verify(n: usize, q: usize, file: &Path, cap: usize, output: Output) -> CliResult {
    let params = params(n, q)?;
    let gens = read_generators(&read_file(file)?, &params)?;
    let closure = Closure::explore(&gens, cap);
    if closure.is_capped() {
        return Err(Error::CapExceeded {
            cap,
            partial: closure.len(),
        }
        .into());
    }
    let size = closure.len();
    let generating = universe_size(&params).is_ok_and(|t| t == size as u64);
    if output == Output::Json {
        return json(&VerifyJson { size, generating });
    }
    Ok(format!("size={size} generating={generating}\n"))
}

#[derive(Serialize)]
struct DecomposeJson {
    word: Vec<usize>,
    length: usize,
    verified: bool,
}

pub fn decompose(
    n: usize,
    q: usize,
    target: &Path,
    gens: &str,
    cap: usize,
    output: Output,
) -> CliResult {
    let params = params(n, q)?;
    let target = read_ca_table(&read_file(target)?)?;
    params.check_same(target.params())?;
    let set = GeneratorSet::new(params, load_generators(&params, gens)?)?;
    let word = set.decompose_word(&target, cap)?;
    let verified = set.evaluate(&word)? == target;
    if output == Output::Json {
        return json(&DecomposeJson {
            length: word.len(),
            word: word.0,
            verified,
        });
    }
    Ok(format!(
        "word={word} length={} verified={verified}\n",
        word.len()
    ))
}

pub fn closure(
    n: usize,
    q: usize,
    gens: &str,
    random: Option<usize>,
    seed: u64,
    cap: usize,
) -> CliResult {
    let params = params(n, q)?;
    let gens = match random {
        Some(0) => return Err(CliError::usage("--random needs at least one element")),
        Some(k) => {
            let mut rng = StdRng::seed_from_u64(seed);
            (0..k)
                .map(|_| CellularAutomaton::from_local_rule(&LocalRule::random(params, &mut rng)))
                .collect()
        }
        None => load_generators(&params, gens)?,
    };
    json(&Closure::explore(&gens, cap).summary())
}
