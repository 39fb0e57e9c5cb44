//! The `lrs-lab` command line.
//!
//! Exit codes: 0 success, 1 validation or usage error, 2 resource
//! exhaustion, 3 certificate rejected.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;

use lrs_core::degeneracy;
use lrs_core::density::{self, DashboardConfig};
use lrs_core::factor::{FactorBudget, Factorizer};
use lrs_core::forge::{self, ForgeConfig, ForgeOutcome};
use lrs_core::inequality::{self, ClassifyOptions, Kind};
use lrs_core::interval;
use lrs_core::recurrence::{self, char_poly};
use lrs_core::roots;
use lrs_core::sieve::SieveConfig;

use crate::certificate::{self, CertificateDoc};
use crate::error::{LabError, LabResult};
use crate::parallel;
use crate::report::{self, rational_str, Header};
use crate::specfile;

#[derive(Debug, Parser)]
#[command(
    name = "lrs-lab",
    version,
    about = "Experiments on the totient and divisor-sum inequalities for linear recurrences"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Directory for report files.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Seed recorded in every report and used by the factorizer.
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Add a generation timestamp to report headers (breaks byte-identity).
    #[arg(long)]
    pub timestamp: bool,
}

#[derive(Debug, Clone, Args)]
pub struct Budget {
    /// Trial-division bound B.
    #[arg(long, default_value_t = 1_000_000)]
    pub trial_bound: u64,
    /// Pollard-Brent iterations per composite.
    #[arg(long, default_value_t = 10_000_000)]
    pub rho_cap: u64,
    /// Miller-Rabin rounds above 64 bits.
    #[arg(long, default_value_t = 25)]
    pub mr_rounds: u32,
    /// Cofactors longer than this many bits are not attacked after trial division.
    #[arg(long, default_value_t = 4096)]
    pub max_cofactor_bits: u64,
    /// Treat verdicts that rely on probable primes as UNDECIDED.
    #[arg(long)]
    pub strict: bool,
    /// Largest admissible bit length of a term.
    #[arg(long, default_value_t = recurrence::DEFAULT_BIT_BUDGET)]
    pub bit_budget: u64,
}

impl Budget {
    fn factor_budget(&self, seed: u64) -> FactorBudget {
        FactorBudget {
            trial_bound: self.trial_bound,
            mr_rounds: self.mr_rounds,
            rho_iterations: self.rho_cap,
            max_cofactor_bits: self.max_cofactor_bits,
            seed,
        }
    }

    fn options(&self) -> ClassifyOptions {
        ClassifyOptions {
            strict: self.strict,
            bit_budget: self.bit_budget,
        }
    }

    fn describe(&self, h: Header) -> Header {
        h.with("trial_bound", self.trial_bound)
            .with("rho_cap", self.rho_cap)
            .with("mr_rounds", self.mr_rounds)
            .with("max_cofactor_bits", self.max_cofactor_bits)
            .with("strict", self.strict)
            .with("bit_budget", self.bit_budget)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Phi,
    Sigma,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Phi => Kind::Phi,
            KindArg::Sigma => Kind::Sigma,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify every index n <= x and summarize the exceptional set.
    Census {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        x: u64,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Skip the nondegeneracy and polynomial-type checks.
        #[arg(long)]
        allow_degenerate: bool,
        #[command(flatten)]
        budget: Budget,
        #[command(flatten)]
        common: Common,
    },
    /// Classify a single index.
    Classify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[command(flatten)]
        budget: Budget,
        #[command(flatten)]
        common: Common,
    },
    /// Indices with |U_n| <= |alpha_1|^(n(1 - delta)), delta = x^(-c).
    SmallValues {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        x: u64,
        /// Exponent c in (0, 1/3), as a fraction or decimal.
        #[arg(long, default_value = "1/10")]
        c: String,
        #[arg(long, default_value_t = recurrence::DEFAULT_BIT_BUDGET)]
        bit_budget: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Rough-number, high-Omega and tau(sigma(n)) counts.
    SieveStats {
        /// Comma-separated bounds.
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<u64>,
        /// Rough-number threshold y (default floor(x^(1/10))).
        #[arg(long)]
        y: Option<u64>,
        #[arg(long, default_value_t = lrs_core::sieve::DEFAULT_SEGMENT)]
        segment: u64,
        #[command(flatten)]
        budget: Budget,
        #[command(flatten)]
        common: Common,
    },
    /// Empirical distribution of phi(n)/n at alpha.
    Schoenberg {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        alpha: String,
        #[command(flatten)]
        common: Common,
    },
    /// The U_n = n^2 + 1 experiment.
    PolyExperiment {
        #[arg(long)]
        x: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Build a 2^n - a counterexample and write its certificate.
    Forge {
        /// Comma-separated odd primes.
        #[arg(long, value_delimiter = ',', required = true)]
        qs: Vec<u64>,
        #[arg(long, default_value_t = 100_000_000)]
        search_limit: u64,
        #[arg(long, default_value_t = 0)]
        offset: u64,
        #[arg(long, default_value = "certificate.toml")]
        cert_name: String,
        #[command(flatten)]
        common: Common,
    },
    /// Independently re-check a forge certificate.
    VerifyCertificate {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Certified root moduli and the degeneracy test.
    Roots {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 64)]
        bits: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Tail counts against their reference curves, one row per x.
    Dashboard {
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<u64>,
        /// Exponent e of y = x^e, as a fraction num/den.
        #[arg(long, default_value = "1/10")]
        y_exponent: String,
        #[command(flatten)]
        budget: Budget,
        #[command(flatten)]
        common: Common,
    },
}

/// Parse `3`, `1/10` or `0.1` into an exact rational.
pub fn parse_rational(s: &str) -> LabResult<BigRational> {
    let bad = || LabError::Usage(format!("not a rational number: {s:?}"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((i, f)) = s.split_once('.') {
        if !f.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = i.starts_with('-');
        let whole: BigInt = if i.is_empty() || i == "-" {
            BigInt::from(0)
        } else {
            i.parse().map_err(|_| bad())?
        };
        let frac: BigInt = if f.is_empty() { BigInt::from(0) } else { f.parse().map_err(|_| bad())? };
        let den = BigInt::from(10).pow(f.len() as u32);
        let frac = BigRational::new(frac, den);
        let whole = BigRational::from_integer(whole);
        return Ok(if neg { whole - frac } else { whole + frac });
    }
    Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?))
}

enum Outcome {
    Success,
    Resource,
    Reject,
}

fn header(command: &str, common: &Common) -> Header {
    let mut h = Header::new(command, common.seed);
    if common.timestamp {
        h.timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
    }
    h
}

fn small_int_u32(q: &BigRational, what: &str) -> LabResult<(u32, u32)> {
    let n = u32::try_from(q.numer().clone()).map_err(|_| LabError::Usage(format!("{what} out of range")))?;
    let d = u32::try_from(q.denom().clone()).map_err(|_| LabError::Usage(format!("{what} out of range")))?;
    if n == 0 || n > d {
        return Err(LabError::Usage(format!("{what} must lie in (0, 1]")));
    }
    Ok((n, d))
}

fn execute(cli: Cli) -> LabResult<Outcome> {
    match cli.command {
        Command::Census {
            spec,
            x,
            kind,
            allow_degenerate,
            budget,
            common,
        } => {
            let s = specfile::load_spec(&spec)?;
            if !allow_degenerate {
                inequality::check_admissible(&s)?;
            }
            let kind: Kind = kind.into();
            let fz = Factorizer::new(budget.factor_budget(common.seed));
            let started = Instant::now();
            let r = parallel::census(&s, x, kind, &fz, &budget.options(), common.threads)?;
            let h = budget.describe(
                header("census", &common)
                    .with("spec", &s.label)
                    .with("x", x)
                    .with("kind", kind),
            );
            let stem = format!("census_{}_{}", s.label, kind.to_string().to_lowercase());
            report::write_file(&common.out, &format!("{stem}.csv"), &report::census_csv(&h, &r)?)?;
            let summary = report::census_summary(&h, &r);
            report::write_file(&common.out, &format!("{stem}_summary.txt"), &summary)?;
            print!("{}", summary.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect::<String>());
            eprintln!("elapsed {:.3}s", started.elapsed().as_secs_f64());
            Ok(if r.errored.is_empty() {
                Outcome::Success
            } else {
                Outcome::Resource
            })
        }
        Command::Classify {
            spec,
            n,
            kind,
            budget,
            common,
        } => {
            let s = specfile::load_spec(&spec)?;
            let fz = Factorizer::new(budget.factor_budget(common.seed));
            let opts = budget.options();
            let o = match kind {
                KindArg::Phi => inequality::classify_phi(&s, n, &fz, &opts)?,
                KindArg::Sigma => inequality::classify_sigma(&s, n, &fz, &opts)?,
            };
            println!("n = {}", o.n);
            println!("kind = {}", o.kind);
            println!("verdict = {}", o.verdict);
            println!("lhs_low = {}", rational_str(&o.lhs_low));
            println!("lhs_high = {}", rational_str(&o.lhs_high));
            println!("rhs = {}", o.rhs);
            println!("probable_used = {}", o.probable_used);
            if !o.notes.is_empty() {
                println!("notes = {}", o.notes);
            }
            Ok(Outcome::Success)
        }
        Command::SmallValues {
            spec,
            x,
            c,
            bit_budget,
            common,
        } => {
            let s = specfile::load_spec(&spec)?;
            let c = parse_rational(&c)?;
            let r = inequality::small_value_census(&s, x, &c, bit_budget)?;
            let h = header("small-values", &common)
                .with("spec", &s.label)
                .with("x", x)
                .with("c", rational_str(&c));
            report::write_file(
                &common.out,
                &format!("small_values_{}.csv", s.label),
                &report::small_values_csv(&h, &r)?,
            )?;
            println!("delta = {:.12}", r.delta_f64());
            println!("members = {}", r.indices.len());
            println!("undecided = {}", r.undecided.len());
            println!("zeros = {}", r.zeros.len());
            println!("members_over_sqrt_x = {:.6}", r.indices.len() as f64 / (x as f64).sqrt());
            Ok(Outcome::Success)
        }
        Command::SieveStats {
            x,
            y,
            segment,
            budget,
            common,
        } => {
            let cfg = SieveConfig {
                segment,
                ..SieveConfig::default()
            };
            let fz = Factorizer::new(budget.factor_budget(common.seed));
            let mut reports = Vec::new();
            for &xv in &x {
                let yv = y.unwrap_or_else(|| density::root_floor(xv, 1, 10));
                reports.push(("rough", parallel::count_rough(xv, yv, &cfg, common.threads)?));
                reports.push(("high_omega", parallel::count_high_omega(xv, &cfg, common.threads)?));
                reports.push((
                    "tau_sigma",
                    parallel::count_tau_sigma_large(xv, &fz, &cfg, common.threads)?,
                ));
            }
            let rows: Vec<(&str, &_)> = reports.iter().map(|(n, r)| (*n, r)).collect();
            let h = budget.describe(
                header("sieve-stats", &common).with("segment", segment),
            );
            let body = report::tail_counts_csv(&h, &rows)?;
            report::write_file(&common.out, "sieve_stats.csv", &body)?;
            for (name, r) in &reports {
                println!(
                    "x = {}, {name}: {} -> {} (reference {:.3}, undecided {})",
                    r.x, r.threshold_description, r.count, r.comparison, r.undecided
                );
            }
            Ok(Outcome::Success)
        }
        Command::Schoenberg { x, alpha, common } => {
            let a = parse_rational(&alpha)?;
            let v = parallel::schoenberg_cdf(x, &a, &SieveConfig::default(), common.threads)?;
            let h = header("schoenberg", &common)
                .with("x", x)
                .with("alpha", rational_str(&a));
            let text = format!(
                "{}x,alpha,cdf,cdf_float\n{},{},{},{:.9}\n",
                h.render(),
                x,
                rational_str(&a),
                rational_str(&v),
                density::density_f64(&v)
            );
            report::write_file(&common.out, "schoenberg.csv", &text)?;
            println!("cdf = {} ({:.9})", rational_str(&v), density::density_f64(&v));
            Ok(Outcome::Success)
        }
        Command::PolyExperiment { x, common } => {
            let r = density::poly_experiment(x)?;
            let h = header("poly-experiment", &common).with("x", x);
            let summary = report::poly_summary(&h, &r);
            report::write_file(&common.out, "poly_experiment_summary.txt", &summary)?;
            report::write_file(&common.out, "poly_experiment_failures.csv", &report::poly_csv(&h, &r)?)?;
            print!("{}", summary.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect::<String>());
            Ok(Outcome::Success)
        }
        Command::Forge {
            qs,
            search_limit,
            offset,
            cert_name,
            common,
        } => {
            let cfg = ForgeConfig {
                qs,
                search_limit,
                offset,
            };
            match forge::forge(&cfg)? {
                ForgeOutcome::Certified(c) => {
                    let doc = CertificateDoc::from_certificate(&c);
                    let path = report::write_file(&common.out, &cert_name, &doc.to_toml())?;
                    println!("a = {}", c.a);
                    println!("L = {}", c.modulus);
                    println!("p = {}", c.p);
                    println!("certificate = {}", path.display());
                    Ok(Outcome::Success)
                }
                ForgeOutcome::Rejected { reason, last } => {
                    if let Some(c) = last {
                        let doc = CertificateDoc::from_certificate(&c);
                        report::write_file(&common.out, &format!("rejected_{cert_name}"), &doc.to_toml())?;
                    }
                    println!("REJECT: {reason}");
                    Ok(Outcome::Reject)
                }
            }
        }
        Command::VerifyCertificate { cert } => {
            let text = std::fs::read_to_string(&cert).map_err(|e| LabError::io(&cert, e))?;
            let doc = CertificateDoc::parse(&text)?;
            let v = certificate::verify(&doc);
            for (name, ok) in &v.checks {
                println!("{} {name}", if *ok { "ok  " } else { "FAIL" });
            }
            if v.accepted() {
                println!("ACCEPT");
                Ok(Outcome::Success)
            } else {
                println!("REJECT: {}", v.first_failure().unwrap_or("unknown"));
                Ok(Outcome::Reject)
            }
        }
        Command::Roots { spec, bits, common } => {
            let s = specfile::load_spec(&spec)?;
            let cp = char_poly(&s);
            let rd = roots::roots(&cp, bits)?;
            let deg = degeneracy::degeneracy_check(&cp)?;
            let mut text = header("roots", &common)
                .with("spec", &s.label)
                .with("bits", bits)
                .render();
            text.push_str("index,re,im,modulus_low,modulus_high,is_real,multiplicity\n");
            println!("characteristic polynomial = {}", cp.as_poly());
            for (i, r) in rd.roots.iter().enumerate() {
                let (re, im) = r.approx();
                let lo = interval::to_f64(&r.modulus.lo);
                let hi = interval::to_f64(&r.modulus.hi);
                text.push_str(&format!(
                    "{i},{re:.15e},{im:.15e},{lo:.15e},{hi:.15e},{},{}\n",
                    r.is_real, r.multiplicity
                ));
                println!(
                    "root {i}: {re:.12} {im:+.12}i |.| in [{lo:.15}, {hi:.15}] real={} mult={}",
                    r.is_real, r.multiplicity
                );
            }
            report::write_file(&common.out, &format!("roots_{}.csv", s.label), &text)?;
            println!("distinct = {}", rd.distinct_count);
            println!("dominant_count = {}", rd.dominant_count);
            println!("nondegenerate = {}", deg.nondegenerate);
            println!("polynomial_type = {}", deg.polynomial_type);
            for w in &deg.witnesses {
                println!("witness: root {} / root {} has order {}", w.i, w.j, w.order);
            }
            Ok(Outcome::Success)
        }
        Command::Dashboard {
            x,
            y_exponent,
            budget,
            common,
        } => {
            let e = parse_rational(&y_exponent)?;
            let (y_num, y_den) = small_int_u32(&e, "y exponent")?;
            let dc = DashboardConfig { y_num, y_den };
            let fz = Factorizer::new(budget.factor_budget(common.seed));
            let rows = parallel::dashboard(&x, &dc, &fz, &SieveConfig::default(), common.threads)?;
            let h = budget.describe(
                header("dashboard", &common).with("y_exponent", rational_str(&e)),
            );
            report::write_file(&common.out, "dashboard.csv", &report::dashboard_csv(&h, &rows)?)?;
            for metric in ["rough", "high_omega", "tau_sigma"] {
                report::write_file(
                    &common.out,
                    &format!("dashboard_{metric}.plot.csv"),
                    &report::dashboard_plot(&h, &rows, metric)?,
                )?;
            }
            for r in &rows {
                println!(
                    "x = {}: rough(y = {}) = {}, high_omega = {}, tau_sigma = {} (undecided {})",
                    r.x, r.y, r.rough.count, r.high_omega.count, r.tau_sigma.count, r.tau_sigma.undecided
                );
            }
            Ok(Outcome::Success)
        }
    }
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(Outcome::Success) => 0,
        Ok(Outcome::Resource) => 2,
        Ok(Outcome::Reject) => 3,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
