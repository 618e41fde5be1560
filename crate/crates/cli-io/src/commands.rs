//! The `cluster` command surface. Every command returns its full output as a
//! string so the binary, scripts and tests share one code path.

use std::fmt::Write as _;
use std::sync::Arc;

use bases::{
    bidegree_interval, deformation_factor, dominance_decompose, support_dimension_of_degree,
    verify_basis_candidate, ClusterMonomialFamily, KroneckerGenericFamily, PointedFamily, Scope,
    VerifyOptions,
};
use clap::{Parser, Subcommand, ValueEnum};
use lattice_core::{Error, ExpVec, Result};
use laurent_ring::{cluster_variables_along, LaurentPoly, TruncatedSeries};
use scatter2::{incoming_diagram, kappa, theta, Direction, C_MINUS, C_PLUS};
use seed_engine::{find_coreachable, find_green_to_red, green_to_red_check, Seed, TrackedPath};

use crate::seedfile::{read_seed, serialize_seed};

#[derive(Parser, Debug)]
#[command(name = "cluster", version, about = "Exact cluster-algebra computations on seed files")]
pub struct Cli {
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    ClusterMonomials,
    KroneckerGeneric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScopeName {
    Pair,
    Seeds,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the seed reached along a mutation path.
    Mutate {
        seed: String,
        #[arg(long, allow_hyphen_values = true)]
        path: String,
    },
    /// Cluster variables created along a path, in the initial variables.
    Expand {
        seed: String,
        #[arg(long, allow_hyphen_values = true)]
        path: String,
    },
    /// g-vectors of the cluster at the end of a path.
    Gvec {
        seed: String,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        path: String,
    },
    /// c-vectors of the cluster at the end of a path.
    Cvec {
        seed: String,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        path: String,
    },
    /// Search for a green-to-red sequence.
    G2r {
        seed: String,
        #[arg(long, default_value_t = 6)]
        max_depth: usize,
    },
    /// Search for t[-1] and a path from it to the seed.
    Coreach {
        seed: String,
        #[arg(long, default_value_t = 6)]
        max_depth: usize,
    },
    /// Support dimension forced at a degree.
    Suppdim {
        seed: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value_t = 6)]
        max_depth: usize,
    },
    /// Bidegree interval at a degree.
    Interval {
        seed: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value_t = 6)]
        max_depth: usize,
    },
    /// Deformation factor at a degree.
    Defactor {
        seed: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value_t = 6)]
        max_depth: usize,
        #[arg(long, value_enum, default_value_t = ScopeName::Seeds)]
        scope: ScopeName,
        /// Reduced-path depth of the seed sample (seeds scope).
        #[arg(long, default_value_t = 8)]
        scope_depth: usize,
    },
    /// Dominance decomposition of a polynomial against a pointed family.
    Decompose {
        seed: String,
        poly: String,
        #[arg(long, value_enum, default_value_t = FamilyName::ClusterMonomials)]
        family: FamilyName,
        #[arg(long, default_value_t = 6)]
        max_depth: usize,
        #[arg(long, default_value_t = 1000)]
        max_iter: usize,
    },
    /// Check a pointed family against the basis criteria on a window.
    VerifyBasis {
        seed: String,
        #[arg(long, value_enum, default_value_t = FamilyName::KroneckerGeneric)]
        family: FamilyName,
        #[arg(long, allow_hyphen_values = true, default_value = "-3,3")]
        window: String,
        #[arg(long, default_value_t = 8)]
        order: u32,
        #[arg(long, default_value_t = 6)]
        max_depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Complete the rank-2 scattering diagram and dump its walls.
    Scatter {
        seed: String,
        #[arg(long, default_value_t = 4)]
        order: u32,
    },
    /// Theta function of a degree, read in the chamber containing --at.
    Theta {
        seed: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value_t = 4)]
        order: u32,
        #[arg(long, allow_hyphen_values = true, default_value = "1,1")]
        at: String,
    },
    /// Compare wall crossing in the opposite diagram with the original.
    OppositeCheck {
        seed: String,
        #[arg(long, default_value_t = 6)]
        order: u32,
    },
    /// Run a script of commands; see `crate::script`.
    Script { file: String },
}

/// Exit status and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// The machine-readable record printed on stderr for a failed command.
pub fn error_record(e: &Error) -> String {
    serde_json::json!({ "kind": e.kind(), "message": e.to_string() }).to_string()
}

/// Runs one command line (without the program name).
pub fn run<S: AsRef<str>>(args: &[S]) -> Outcome {
    let argv = std::iter::once("cluster").chain(args.iter().map(|a| a.as_ref()));
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => failure(&Error::Usage(text.trim().to_string())),
            };
        }
    };
    let result = execute(&cli.command).and_then(|(code, text)| match &cli.out {
        Some(path) => std::fs::write(path, &text)
            .map(|_| (code, String::new()))
            .map_err(|e| Error::Usage(format!("cannot write {path}: {e}"))),
        None => Ok((code, text)),
    });
    match result {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => failure(&e),
    }
}

fn failure(e: &Error) -> Outcome {
    Outcome {
        code: 2,
        stdout: String::new(),
        stderr: error_record(e) + "\n",
    }
}

/// Parses a comma list of 1-based vertices.
pub fn parse_path(s: &str, seed: &Seed) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|tok| {
            let k: usize = tok
                .trim()
                .parse()
                .map_err(|_| Error::Usage(format!("path entry {tok:?} is not a vertex number")))?;
            if k == 0 || k > seed.n() || !seed.is_unfrozen(k - 1) {
                return Err(Error::Usage(format!("path entry {k} is not an unfrozen vertex")));
            }
            Ok(k - 1)
        })
        .collect()
}

fn parse_ints(s: &str, what: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Usage(format!("{what} entry {t:?} is not an integer")))
        })
        .collect()
}

/// Parses a comma vector of the given length.
pub fn parse_vector(s: &str, len: usize) -> Result<ExpVec> {
    let v = parse_ints(s, "vector")?;
    if v.len() != len {
        return Err(Error::Usage(format!("expected {len} coordinates, got {}", v.len())));
    }
    Ok(ExpVec(v))
}

fn parse_pair(s: &str, what: &str) -> Result<(i64, i64)> {
    match parse_ints(s, what)?[..] {
        [a, b] => Ok((a, b)),
        _ => Err(Error::Usage(format!("{what} must be two integers a,b"))),
    }
}

fn steps_text(steps: &[usize]) -> String {
    let v: Vec<String> = steps.iter().map(|k| (k + 1).to_string()).collect();
    v.join(" ")
}

fn set_text(v: &[ExpVec]) -> String {
    let v: Vec<String> = v.iter().map(|g| g.to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

fn coreach_path(seed: &Seed, max_depth: usize) -> Result<TrackedPath> {
    find_coreachable(seed, max_depth)?.ok_or_else(|| {
        Error::Config(format!("no t[-1] found within depth {max_depth} (it may still exist)"))
    })
}

fn build_family(name: FamilyName, seed: &Seed, depth: usize) -> Result<Arc<dyn PointedFamily>> {
    Ok(match name {
        FamilyName::ClusterMonomials => Arc::new(ClusterMonomialFamily::new(seed, depth)?),
        FamilyName::KroneckerGeneric => Arc::new(KroneckerGenericFamily::new(seed)?),
    })
}

fn series_text(z: &TruncatedSeries) -> String {
    let status = if z.frontier_touched() { "truncated" } else { "exact" };
    format!("{}\n# order={} {status}\n", z.poly(), z.order())
}

/// The degrees compared by `opposite-check`, as exponent vectors.
pub const OPPOSITE_TEST_DEGREES: [[i64; 2]; 5] = [[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1]];

/// κ∘p_γ against p_{κγ}∘κ on the standard test degrees; one line per degree.
pub fn opposite_check(seed: &Seed, order: u32) -> Result<(bool, String)> {
    let d = incoming_diagram(seed, order)?.complete()?;
    let op = d.opposite();
    let g = d.path_product(C_PLUS, C_MINUS, Direction::Ccw)?;
    let kg = op.path_product(C_MINUS, C_PLUS, Direction::Ccw)?;
    let mut ok = true;
    let mut out = String::new();
    for m in OPPOSITE_TEST_DEGREES {
        let z = TruncatedSeries::monomial(seed, ExpVec(m.to_vec()), order);
        let lhs = op.apply(&kg, &kappa(&z))?;
        let rhs = kappa(&d.apply(&g, &z)?);
        let same = lhs.poly() == rhs.poly();
        ok &= same;
        let _ = writeln!(
            out,
            "m=({},{}) {} {}",
            m[0],
            m[1],
            if same { "equal" } else { "differ" },
            lhs.poly()
        );
    }
    Ok((ok, out))
}

/// Runs a parsed command, returning its exit code and stdout text.
pub fn execute(cmd: &Command) -> Result<(i32, String)> {
    let mut out = String::new();
    let mut code = 0;
    match cmd {
        Command::Mutate { seed, path } => {
            let s = read_seed(seed)?;
            let steps = parse_path(path, &s)?;
            out = serialize_seed(&s.mutate_path(&steps)?);
        }
        Command::Expand { seed, path } => {
            let s = read_seed(seed)?;
            let steps = parse_path(path, &s)?;
            let p = TrackedPath::from_steps(&s, &steps)?;
            let clusters = cluster_variables_along(&p)?;
            for (i, &k) in steps.iter().enumerate() {
                let _ = writeln!(out, "step {} mu_{}: {}", i + 1, k + 1, clusters[i + 1][k]);
            }
            let last: Vec<String> = clusters.last().unwrap().iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "cluster: [{}]", last.join(", "));
        }
        Command::Gvec { seed, path } => {
            let s = read_seed(seed)?;
            let p = TrackedPath::from_steps(&s, &parse_path(path, &s)?)?;
            for (i, g) in p.g_vectors()?.iter().enumerate() {
                let _ = writeln!(out, "g{} = {g}", i + 1);
            }
        }
        Command::Cvec { seed, path } => {
            let s = read_seed(seed)?;
            let p = TrackedPath::from_steps(&s, &parse_path(path, &s)?)?;
            for (c, &k) in p.c_vectors()?.iter().zip(s.unfrozen()) {
                let _ = writeln!(out, "c{} = {c}", k + 1);
            }
        }
        Command::G2r { seed, max_depth } => {
            let s = read_seed(seed)?;
            match find_green_to_red(&s, *max_depth)? {
                Some(p) => {
                    let sigma = green_to_red_check(&p)?.expect("search returns checked paths");
                    let _ = writeln!(out, "sequence: {}; sigma: {sigma}", steps_text(p.steps()));
                }
                None => {
                    let _ = writeln!(out, "sequence: none within depth {max_depth}");
                    code = 1;
                }
            }
        }
        Command::Coreach { seed, max_depth } => {
            let s = read_seed(seed)?;
            let p = coreach_path(&s, *max_depth)?;
            let sigma = green_to_red_check(&p)?.expect("coreach paths are green-to-red");
            let _ = writeln!(out, "sequence: {}; sigma: {sigma}", steps_text(p.steps()));
            out.push_str("# t[-1]\n");
            out.push_str(&serialize_seed(p.base()));
        }
        Command::Suppdim { seed, g, max_depth } => {
            let s = read_seed(seed)?;
            let g = parse_vector(g, s.n())?;
            let p = coreach_path(&s, *max_depth)?;
            let _ = writeln!(out, "{}", support_dimension_of_degree(&g, &s, &p)?);
        }
        Command::Interval { seed, g, max_depth } => {
            let s = read_seed(seed)?;
            let g = parse_vector(g, s.n())?;
            let p = coreach_path(&s, *max_depth)?;
            let _ = writeln!(out, "{}", set_text(&bidegree_interval(&g, &s, &p)?));
        }
        Command::Defactor {
            seed,
            g,
            max_depth,
            scope,
            scope_depth,
        } => {
            let s = read_seed(seed)?;
            let g = parse_vector(g, s.n())?;
            let p = coreach_path(&s, *max_depth)?;
            let scope = match scope {
                ScopeName::Pair => Scope::Pair,
                ScopeName::Seeds => Scope::Seeds { depth: *scope_depth },
            };
            let _ = writeln!(out, "{}", set_text(&deformation_factor(&g, &s, &p, scope)?));
        }
        Command::Decompose {
            seed,
            poly,
            family,
            max_depth,
            max_iter,
        } => {
            let s = read_seed(seed)?;
            let z = LaurentPoly::parse(poly, s.n())?;
            let fam = build_family(*family, &s, *max_depth)?;
            let r = dominance_decompose(&z, fam.as_ref(), *max_iter)?;
            for (g, c) in &r.coefficients {
                let _ = writeln!(out, "{g}: {c}");
            }
            if let Some(g) = &r.domain_gap {
                let _ = writeln!(out, "gap: {g}");
            }
            let _ = writeln!(out, "residual: {}", r.residual);
            if !r.is_complete() {
                code = 1;
            }
        }
        Command::VerifyBasis {
            seed,
            family,
            window,
            order,
            max_depth,
            format,
        } => {
            let s = read_seed(seed)?;
            let window = parse_pair(window, "window")?;
            if window.0 > window.1 {
                return Err(Error::Usage("window lower bound exceeds upper bound".into()));
            }
            let p = coreach_path(&s, *max_depth)?;
            let fam = build_family(*family, &s, *max_depth)?;
            let opts = VerifyOptions {
                order: *order,
                ..VerifyOptions::default()
            };
            let report = verify_basis_candidate(fam.as_ref(), window, &s, &p, opts)?;
            code = if report.all_pass() { 0 } else { 1 };
            out = match format {
                Format::Json => {
                    serde_json::to_string_pretty(&report).expect("reports serialize") + "\n"
                }
                Format::Text => verify_text(&report),
            };
        }
        Command::Scatter { seed, order } => {
            let s = read_seed(seed)?;
            out = incoming_diagram(&s, *order)?.complete()?.dump();
        }
        Command::Theta { seed, g, order, at } => {
            let s = read_seed(seed)?;
            let g = parse_vector(g, s.n())?;
            let at = parse_pair(at, "at")?;
            let d = incoming_diagram(&s, *order)?.complete()?;
            out = series_text(&theta(&d, &g, [at.0, at.1])?);
        }
        Command::OppositeCheck { seed, order } => {
            let s = read_seed(seed)?;
            let (ok, text) = opposite_check(&s, *order)?;
            out = text;
            if !ok {
                code = 1;
            }
        }
        Command::Script { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| Error::Usage(format!("cannot read script {file}: {e}")))?;
            let dir = std::path::Path::new(file).parent().unwrap_or(std::path::Path::new(""));
            return crate::script::run_script(&text, dir);
        }
    }
    Ok((code, out))
}

fn verify_text(r: &bases::VerifyReport) -> String {
    let opt = |v: &Option<Vec<i64>>| v.as_ref().map_or("-".to_string(), |v| ExpVec(v.clone()).to_string());
    let mut out = format!("# family={} window=[{},{}]\n", r.family, r.window.0, r.window.1);
    for rec in &r.records {
        let _ = write!(
            out,
            "degree={} pass={} delta_pass={} bipointed={} supp_dim={} expected={} pair={} delta={} cluster_monomial={}",
            ExpVec(rec.degree.clone()),
            rec.pass,
            rec.delta_pass,
            rec.bipointed,
            opt(&rec.supp_dim),
            ExpVec(rec.expected_supp_dim.clone()),
            rec.pair_compatible,
            rec.delta_compatible,
            rec.cluster_monomial.map_or("-".to_string(), |b| b.to_string()),
        );
        if let Some(e) = &rec.error {
            let _ = write!(out, " error={e:?}");
        }
        out.push('\n');
    }
    let _ = writeln!(
        out,
        "summary: {}/{} pass, {} delta failures",
        r.records.len() - r.failures().len(),
        r.records.len(),
        r.delta_failures().len()
    );
    out
}
