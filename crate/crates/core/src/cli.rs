//! Command-line front end.
//!
//! Exit codes: 0 success (and "equivalent"), 1 "not equivalent", 2 parse
//! error, 3 arity mismatch, 4 factorization failure, 5 enumeration cap
//! exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::bench::{self, BenchConfig};
use crate::equivalence::{self, Method};
use crate::error::Error;
use crate::group::{make_group, AbelianGroup, CanonicalGroupKey, GroupElement};
use crate::numutil;
use crate::oracle;
use crate::orbits::{self, OrbitSummary, ReducedForm};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_EQUIVALENT: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_ARITY: i32 = 3;
pub const EXIT_FACTORIZATION: i32 = 4;
pub const EXIT_CAPACITY: i32 = 5;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::NonPositiveModulus(_) => EXIT_PARSE,
        Error::DimensionMismatch { .. } => EXIT_ARITY,
        Error::FactorizationFailure(_) => EXIT_FACTORIZATION,
        Error::CapacityExceeded { .. } => EXIT_CAPACITY,
        Error::InvalidValuation { .. } => 1,
    }
}

/// Parses `2,4,8,8` into integers. Whitespace around entries is ignored.
pub fn parse_spec(s: &str) -> Result<Vec<BigInt>, Error> {
    if s.trim().is_empty() {
        return Err(Error::Parse("empty list".into()));
    }
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("`{t}` is not an integer")))
        })
        .collect()
}

pub fn format_spec<T: std::fmt::Display>(values: &[T]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

pub fn parse_group(s: &str) -> Result<AbelianGroup, Error> {
    make_group(&parse_spec(s)?)
}

pub fn parse_element(group: &AbelianGroup, s: &str) -> Result<GroupElement, Error> {
    group.element(&parse_spec(s)?)
}

#[derive(Debug, Parser)]
#[command(
    name = "abelian",
    version,
    about = "Automorphic equivalence and orbits in finite abelian groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    #[default]
    Fast,
    Snf,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Fast => Method::Fast,
            MethodArg::Snf => Method::Snf,
        }
    }
}

#[derive(Debug, Args)]
struct GroupArg {
    /// Cyclic orders, e.g. `2,4,8,8`
    #[arg(short = 'g', long = "group", allow_hyphen_values = true)]
    group: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute G/<x>
    Quotient {
        #[command(flatten)]
        group: GroupArg,
        /// Element residues, one per cyclic factor
        #[arg(short = 'x', allow_hyphen_values = true)]
        x: String,
        #[arg(long, value_enum, default_value_t)]
        method: MethodArg,
        /// Use the brute-force coset oracle instead
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Decide whether some automorphism maps x to y
    Autoeq {
        #[command(flatten)]
        group: GroupArg,
        #[arg(short = 'x', allow_hyphen_values = true)]
        x: String,
        #[arg(short = 'y', allow_hyphen_values = true)]
        y: String,
        #[arg(long, value_enum, default_value_t)]
        method: MethodArg,
        /// Search Aut(G) exhaustively instead
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// List all automorphism orbits with sizes
    Orbits {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Maximum number of reduced forms to enumerate
        #[arg(long, default_value_t = orbits::DEFAULT_ENUMERATION_CAP)]
        cap: u64,
        /// Partition by brute-force Aut(G) action instead
        #[arg(long)]
        oracle: bool,
    },
    /// Prime factorization
    Factor {
        n: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Time both quotient paths on C4^n and fit runtime exponents
    Bench {
        /// Group family; only `c4` (C4^n, x = (1,..), y = (3,..)) is defined
        #[arg(long, default_value = "c4")]
        family: String,
        /// Largest rank of the default schedule to run
        #[arg(long, default_value_t = 512)]
        max_rank: usize,
        /// Explicit ranks, overriding the default schedule
        #[arg(long, value_delimiter = ',')]
        ranks: Option<Vec<usize>>,
        #[arg(long, default_value_t = 7)]
        trials: usize,
        /// Ranks above this are skipped for the SNF path
        #[arg(long, default_value_t = 128)]
        snf_max_rank: usize,
        /// Minimum duration of one timed batch, in milliseconds
        #[arg(long, default_value_t = 5)]
        batch_ms: u64,
        #[arg(long, value_delimiter = ',', value_enum)]
        methods: Option<Vec<MethodArg>>,
        /// Emit the analytic operation-count curves instead of timings
        #[arg(long)]
        model: bool,
    },
}

/// Runs the CLI on `args` (program name first), writing results to `out`
/// and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T, O, E>(args: I, out: &mut O, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    O: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch<O: Write, E: Write>(command: Command, out: &mut O, err: &mut E) -> Result<i32, Error> {
    match command {
        Command::Quotient {
            group,
            x,
            method,
            oracle: use_oracle,
            format,
        } => {
            let g = parse_group(&group.group)?;
            let xe = parse_element(&g, &x)?;
            let key = if use_oracle {
                oracle::brute_quotient_key(&g, &xe)?
            } else {
                equivalence::quotient_key(&g, &xe, method.into())?
            };
            let method_name = if use_oracle {
                "oracle"
            } else {
                Method::from(method).as_str()
            };
            match format {
                Format::Text => {
                    writeln!(out, "{key}").map_err(io_err)?;
                    writeln!(out, "prime powers: {}", prime_powers(&key)).map_err(io_err)?;
                }
                Format::Json => {
                    let doc = QuotientDoc {
                        group: format_spec(g.moduli()),
                        element: format_spec(xe.coords()),
                        method: method_name.into(),
                        quotient: KeyDoc::from(&key),
                    };
                    write_json(out, &doc)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Autoeq {
            group,
            x,
            y,
            method,
            oracle: use_oracle,
            format,
        } => {
            let g = parse_group(&group.group)?;
            let xe = parse_element(&g, &x)?;
            let ye = parse_element(&g, &y)?;
            let (verdict, kx, ky) = if use_oracle {
                (
                    oracle::brute_are_automorphic(&g, &xe, &ye)?,
                    oracle::brute_quotient_key(&g, &xe)?,
                    oracle::brute_quotient_key(&g, &ye)?,
                )
            } else {
                let m = method.into();
                (
                    equivalence::are_automorphic_with(&g, &xe, &ye, m)?,
                    equivalence::quotient_key(&g, &xe, m)?,
                    equivalence::quotient_key(&g, &ye, m)?,
                )
            };
            match format {
                Format::Text => {
                    let word = if verdict { "equivalent" } else { "not equivalent" };
                    writeln!(out, "{word}").map_err(io_err)?;
                    writeln!(out, "G/<x> = {kx}").map_err(io_err)?;
                    writeln!(out, "G/<y> = {ky}").map_err(io_err)?;
                }
                Format::Json => {
                    let doc = AutoeqDoc {
                        group: format_spec(g.moduli()),
                        x: format_spec(xe.coords()),
                        y: format_spec(ye.coords()),
                        equivalent: verdict,
                        quotient_x: KeyDoc::from(&kx),
                        quotient_y: KeyDoc::from(&ky),
                    };
                    write_json(out, &doc)?;
                }
            }
            Ok(if verdict { EXIT_OK } else { EXIT_NOT_EQUIVALENT })
        }
        Command::Orbits {
            group,
            format,
            cap,
            oracle: use_oracle,
        } => {
            let g = parse_group(&group.group)?;
            if use_oracle {
                let orbits = oracle::brute_orbits_with_cap(&g, cap)?;
                render_brute_orbits(&g, &orbits, format, out)?;
            } else {
                let orbits = orbits::enumerate_orbits_with_cap(&g, cap)?;
                render_orbits(&g, &orbits, format, out)?;
            }
            Ok(EXIT_OK)
        }
        Command::Factor { n, format } => {
            let value: BigInt = n
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("`{n}` is not an integer")))?;
            let value = value
                .to_biguint()
                .filter(|v| *v > BigUint::from(0u32))
                .ok_or_else(|| Error::NonPositiveModulus(n.clone()))?;
            let f = numutil::factorize(&value)?;
            match format {
                Format::Text => writeln!(out, "{value} = {f}").map_err(io_err)?,
                Format::Json => {
                    let doc = FactorDoc {
                        n: value.to_string(),
                        factors: f
                            .factors()
                            .iter()
                            .map(|(p, &k)| FactorEntry {
                                prime: p.to_string(),
                                multiplicity: k,
                            })
                            .collect(),
                    };
                    write_json(out, &doc)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Bench {
            family,
            max_rank,
            ranks,
            trials,
            snf_max_rank,
            batch_ms,
            methods,
            model,
        } => {
            if family != "c4" {
                return Err(Error::Parse(format!("unknown bench family `{family}`")));
            }
            let ranks = ranks.unwrap_or_else(|| {
                bench::default_ranks()
                    .into_iter()
                    .filter(|&r| r <= max_rank)
                    .collect()
            });
            if model {
                bench::write_model_csv(&ranks, out).map_err(io_err)?;
                writeln!(err, "model crossover rank: {}", bench::model_crossover()).map_err(io_err)?;
                return Ok(EXIT_OK);
            }
            let config = BenchConfig {
                ranks,
                methods: methods
                    .map(|m| m.into_iter().map(Method::from).collect())
                    .unwrap_or_else(|| Method::ALL.to_vec()),
                trials,
                batch_time: Duration::from_millis(batch_ms),
                snf_max_rank,
                ..BenchConfig::default()
            };
            let rows = bench::run_bench(&config)?;
            bench::write_csv(&rows, out).map_err(io_err)?;
            for m in &config.methods {
                if let Some(fit) = bench::fit_rows(&rows, *m) {
                    writeln!(
                        err,
                        "fit {m}: mean_ms ~ {:.6e} * rank^{:.4}",
                        fit.coefficient, fit.exponent
                    )
                    .map_err(io_err)?;
                }
            }
            if config.methods.contains(&Method::Snf) {
                for r in rows.iter().filter(|r| r.method == Method::Snf) {
                    let stats = bench::snf_entry_growth(r.rank)?;
                    writeln!(
                        err,
                        "snf rank {}: widest entry {} bits, {} pivots",
                        r.rank, stats.max_bits, stats.pivots
                    )
                    .map_err(io_err)?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Parse(format!("output failed: {e}"))
}

fn write_json<O: Write, T: Serialize>(out: &mut O, doc: &T) -> Result<(), Error> {
    let s = serde_json::to_string(doc).map_err(|e| Error::Parse(e.to_string()))?;
    writeln!(out, "{s}").map_err(io_err)
}

/// `2^3 2^3 2^1 3^1`; `1` when trivial.
pub fn prime_powers(key: &CanonicalGroupKey) -> String {
    let parts: Vec<String> = key
        .primary_parts()
        .iter()
        .flat_map(|(p, exps)| exps.iter().map(move |e| format!("{p}^{e}")))
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

fn render_reduced_form(form: &ReducedForm) -> String {
    if form.parts.is_empty() {
        return "()".into();
    }
    form.parts
        .iter()
        .map(|(p, b)| format!("{p}:({})", format_spec(b)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// The `orbits --format json` document for `g`.
pub fn orbits_json(g: &AbelianGroup, orbits: &[OrbitSummary]) -> Result<String, Error> {
    let mut buf = Vec::new();
    render_orbits(g, orbits, Format::Json, &mut buf)?;
    String::from_utf8(buf)
        .map(|s| s.trim_end().to_string())
        .map_err(|e| Error::Parse(e.to_string()))
}

/// `order`, `invariant_factors` and `primary_parts` of `key` as JSON.
pub fn key_json(key: &CanonicalGroupKey) -> String {
    serde_json::to_string(&KeyDoc::from(key)).expect("plain strings and integers serialize")
}

fn render_orbits<O: Write>(
    g: &AbelianGroup,
    orbits: &[OrbitSummary],
    format: Format,
    out: &mut O,
) -> Result<(), Error> {
    let total: BigUint = orbits.iter().map(|o| &o.size).sum();
    match format {
        Format::Text => {
            let rows: Vec<[String; 4]> = orbits
                .iter()
                .enumerate()
                .map(|(i, o)| {
                    [
                        i.to_string(),
                        o.size.to_string(),
                        o.quotient_key.to_string(),
                        o.representatives
                            .iter()
                            .map(render_reduced_form)
                            .collect::<Vec<_>>()
                            .join(", "),
                    ]
                })
                .collect();
            write_table(out, ["orbit", "size", "quotient", "reduced forms"], &rows)?;
            writeln!(out, "orbits: {}", orbits.len()).map_err(io_err)?;
            writeln!(out, "sum of sizes: {total} (|G| = {})", g.order()).map_err(io_err)?;
        }
        Format::Json => {
            let doc = OrbitsDoc {
                group: format_spec(g.moduli()),
                order: g.order().to_string(),
                orbit_count: orbits.len(),
                size_sum: total.to_string(),
                orbits: orbits
                    .iter()
                    .map(|o| OrbitDoc {
                        size: o.size.to_string(),
                        quotient: KeyDoc::from(&o.quotient_key),
                        reduced_forms: o
                            .representatives
                            .iter()
                            .map(|r| {
                                r.parts
                                    .iter()
                                    .map(|(p, b)| PrimeForm {
                                        prime: p.to_string(),
                                        valuations: b.clone(),
                                    })
                                    .collect()
                            })
                            .collect(),
                    })
                    .collect(),
            };
            write_json(out, &doc)?;
        }
    }
    Ok(())
}

fn render_brute_orbits<O: Write>(
    g: &AbelianGroup,
    orbits: &[Vec<GroupElement>],
    format: Format,
    out: &mut O,
) -> Result<(), Error> {
    let total: usize = orbits.iter().map(Vec::len).sum();
    match format {
        Format::Text => {
            let rows: Vec<[String; 4]> = orbits
                .iter()
                .enumerate()
                .map(|(i, o)| {
                    let q = oracle::brute_quotient_key(g, &o[0])
                        .map(|k| k.to_string())
                        .unwrap_or_default();
                    [
                        i.to_string(),
                        o.len().to_string(),
                        q,
                        o.iter()
                            .map(|x| format!("({})", format_spec(x.coords())))
                            .collect::<Vec<_>>()
                            .join(" "),
                    ]
                })
                .collect();
            write_table(out, ["orbit", "size", "quotient", "elements"], &rows)?;
            writeln!(out, "orbits: {}", orbits.len()).map_err(io_err)?;
            writeln!(out, "sum of sizes: {total} (|G| = {})", g.order()).map_err(io_err)?;
        }
        Format::Json => {
            let doc = BruteOrbitsDoc {
                group: format_spec(g.moduli()),
                order: g.order().to_string(),
                orbit_count: orbits.len(),
                size_sum: total.to_string(),
                orbits: orbits
                    .iter()
                    .map(|o| o.iter().map(|x| format_spec(x.coords())).collect())
                    .collect(),
            };
            write_json(out, &doc)?;
        }
    }
    Ok(())
}

fn write_table<O: Write, const N: usize>(
    out: &mut O,
    header: [&str; N],
    rows: &[[String; N]],
) -> Result<(), Error> {
    let mut widths = header.map(str::len);
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
            if i + 1 == N {
                s.push_str(c);
            } else {
                s.push_str(&format!("{c:<w$}  "));
            }
        }
        s
    };
    writeln!(out, "{}", line(header.to_vec())).map_err(io_err)?;
    for r in rows {
        writeln!(out, "{}", line(r.iter().map(String::as_str).collect())).map_err(io_err)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct KeyDoc {
    order: String,
    invariant_factors: Vec<String>,
    primary_parts: Vec<PrimaryPartDoc>,
}

#[derive(Serialize)]
struct PrimaryPartDoc {
    prime: String,
    exponents: Vec<u32>,
}

impl From<&CanonicalGroupKey> for KeyDoc {
    fn from(k: &CanonicalGroupKey) -> Self {
        KeyDoc {
            order: k.order().to_string(),
            invariant_factors: k.invariant_factors().iter().map(ToString::to_string).collect(),
            primary_parts: k
                .primary_parts()
                .iter()
                .map(|(p, e)| PrimaryPartDoc {
                    prime: p.to_string(),
                    exponents: e.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct QuotientDoc {
    group: String,
    element: String,
    method: String,
    quotient: KeyDoc,
}

#[derive(Serialize)]
struct AutoeqDoc {
    group: String,
    x: String,
    y: String,
    equivalent: bool,
    quotient_x: KeyDoc,
    quotient_y: KeyDoc,
}

#[derive(Serialize)]
struct PrimeForm {
    prime: String,
    valuations: Vec<u32>,
}

#[derive(Serialize)]
struct OrbitDoc {
    size: String,
    quotient: KeyDoc,
    reduced_forms: Vec<Vec<PrimeForm>>,
}

#[derive(Serialize)]
struct OrbitsDoc {
    group: String,
    order: String,
    orbit_count: usize,
    size_sum: String,
    orbits: Vec<OrbitDoc>,
}

#[derive(Serialize)]
struct BruteOrbitsDoc {
    group: String,
    order: String,
    orbit_count: usize,
    size_sum: String,
    orbits: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct FactorEntry {
    prime: String,
    multiplicity: u32,
}

#[derive(Serialize)]
struct FactorDoc {
    n: String,
    factors: Vec<FactorEntry>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn spec_parsing() {
        assert_eq!(
            parse_spec(" 2, 4 ,8").unwrap(),
            vec![BigInt::from(2), BigInt::from(4), BigInt::from(8)]
        );
        assert!(matches!(parse_spec("2,,4"), Err(Error::Parse(_))));
        assert!(matches!(parse_spec(""), Err(Error::Parse(_))));
        assert!(matches!(parse_spec("2,x"), Err(Error::Parse(_))));
        assert!(matches!(parse_group("4,0"), Err(Error::NonPositiveModulus(_))));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Parse("x".into())), 2);
        assert_eq!(exit_code(&Error::DimensionMismatch { expected: 1, got: 2 }), 3);
        assert_eq!(exit_code(&Error::FactorizationFailure("9".into())), 4);
        assert_eq!(
            exit_code(&Error::CapacityExceeded {
                needed: "1".into(),
                cap: 0
            }),
            5
        );
    }

    #[test]
    fn prime_power_rendering() {
        let g = parse_group("2,4,8,8").unwrap();
        let x = parse_element(&g, "2,1,2,4").unwrap();
        let k = equivalence::quotient_key(&g, &x, Method::Fast).unwrap();
        assert_eq!(prime_powers(&k), "2^3 2^3 2^1");
        assert_eq!(prime_powers(&CanonicalGroupKey::trivial()), "1");
    }

    proptest! {
        #[test]
        fn printed_groups_and_elements_reparse(
            moduli in proptest::collection::vec(1u64..100_000, 1..8),
            raw in proptest::collection::vec(any::<i64>(), 8),
        ) {
            let g = make_group(&moduli).unwrap();
            let x = g.element(&raw[..moduli.len()]).unwrap();
            let g2 = parse_group(&format_spec(g.moduli())).unwrap();
            prop_assert_eq!(&g2, &g);
            let x2 = parse_element(&g2, &format_spec(x.coords())).unwrap();
            prop_assert_eq!(x2, x);
        }
    }
}
