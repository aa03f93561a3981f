//! Document loading, subcommand dispatch and report generation.
//!
//! Reports are deterministic: with the same seed and inputs the structured
//! output is byte-identical. Wall-clock timings are therefore opt-in.
//! Exit codes: 0 all checks pass, 1 a counterexample was found (inverted by
//! `--expect-fail`), 2 invalid input or unmet precondition, 3 internal route
//! disagreement.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use ordcomp::compactify::{
    check_lift_properties, classify_pair, compactify_from_basis,
    compare_compactifications, eta0_finite, esakia_lemma_check, lift, theorem_suite,
    SuiteInstance,
};
use ordcomp::rings::{check_n_basis, SweepConfig};
use ordcomp::{doc, render, Error, Verdict};

#[derive(Parser, Debug)]
#[command(name = "ordcomp", version, about = "Exact checks for ordered spaces, Priestley/Esakia duality and order-compactifications")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Invert the exit code: counterexamples are the expected outcome.
    #[arg(long, global = true)]
    pub expect_fail: bool,
    /// Support bound of the deterministic sweep on presented pairs.
    #[arg(long, global = true, default_value_t = 3)]
    pub support_bound: usize,
    /// Number of seeded random samples in bounded sweeps.
    #[arg(long, global = true, default_value_t = 500)]
    pub samples: usize,
    /// Seed of the sampled sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Include wall-clock timings (off by default to keep reports stable).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify an ordered-space document.
    Classify { input: PathBuf },
    /// Check a ring document at one level of the ladder.
    RingCheck {
        input: PathBuf,
        #[arg(long, value_enum)]
        level: RingLevel,
    },
    /// Classify a compactification pair document.
    PairClassify { input: PathBuf },
    /// Largest Priestley order-compactification of a finite space.
    Eta0 { input: PathBuf },
    /// Spectrum compactification of an explicit Priestley basis.
    Compactify {
        #[arg(long)]
        basis: PathBuf,
    },
    /// Connecting map between two compactifications of the same space.
    Compare { first: PathBuf, second: PathBuf },
    /// Lift a map document along the unit embedding, by two routes.
    Lift { input: PathBuf },
    /// Check the down-directed intersection identity on a family document.
    LemmaCheck { input: PathBuf },
    /// Validate a lattice document and cross-check its prime filters.
    LatticeCheck { input: PathBuf },
    /// Run the theorem suite on the built-in corpus or a corpus file.
    Suite {
        #[arg(long, default_value = "builtin")]
        corpus: String,
    },
    /// Render a space or pair document as a diagram.
    Render { input: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RingLevel {
    Ring,
    Priestley,
    Basis,
    Heyting,
    Esakia,
    Nbasis,
}

#[derive(Serialize, Debug)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Serialize, Debug)]
pub struct Check {
    pub name: String,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tested: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Serialize, Debug)]
pub struct Report {
    pub format: u64,
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub config: Value,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl Check {
    fn flag(name: &str, value: bool) -> Check {
        Check {
            name: name.into(),
            verdict: if value { "ok" } else { "counterexample" }.into(),
            tested: None,
            witness: None,
            detail: None,
        }
    }

    fn with_witness(mut self, w: Value) -> Check {
        if self.verdict == "counterexample" {
            self.witness = Some(w);
        }
        self
    }

    fn with_detail(mut self, d: String) -> Check {
        self.detail = Some(d);
        self
    }

    fn from_verdict<W>(name: &str, v: &Verdict<W>, witness: impl FnOnce(&W) -> Value) -> Check {
        match v {
            Verdict::OkExhaustive => Check {
                name: name.into(),
                verdict: "ok-exhaustive".into(),
                tested: None,
                witness: None,
                detail: None,
            },
            Verdict::OkBounded { tested } => Check {
                name: name.into(),
                verdict: "ok-bounded".into(),
                tested: Some(*tested),
                witness: None,
                detail: None,
            },
            Verdict::Counterexample(w) => Check {
                name: name.into(),
                verdict: "counterexample".into(),
                tested: None,
                witness: Some(witness(w)),
                detail: None,
            },
        }
    }

    fn failed(&self) -> bool {
        self.verdict == "counterexample"
    }
}

impl Report {
    fn new(command: &str, cfg: &SweepConfig) -> Report {
        Report {
            format: doc::FORMAT,
            command: command.into(),
            inputs: Vec::new(),
            config: json!({
                "support_bound": cfg.support_bound,
                "samples": cfg.samples,
                "seed": cfg.seed,
            }),
            checks: Vec::new(),
            result: None,
            elapsed_ms: None,
        }
    }

    pub fn any_counterexample(&self) -> bool {
        self.checks.iter().any(|c| c.failed())
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command);
        for i in &self.inputs {
            let _ = writeln!(out, "input {} sha256={}", i.path, i.sha256);
        }
        for c in &self.checks {
            let _ = write!(out, "{}: {}", c.name, c.verdict);
            if let Some(t) = c.tested {
                let _ = write!(out, " (tested {t})");
            }
            if let Some(d) = &c.detail {
                let _ = write!(out, " [{d}]");
            }
            if let Some(w) = &c.witness {
                let _ = write!(out, " witness={w}");
            }
            let _ = writeln!(out);
        }
        if let Some(r) = &self.result {
            let _ = writeln!(out, "result: {r}");
        }
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(out, "elapsed_ms: {ms}");
        }
        out
    }
}

fn read_input(path: &Path, report: &mut Report) -> Result<Value, Error> {
    let bytes = std::fs::read(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    report.inputs.push(InputDigest {
        path: path.display().to_string(),
        sha256: format!("{:x}", hasher.finalize()),
    });
    serde_json::from_slice(&bytes)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn pair_witness(w: &(ordcomp::setalg::RSet, ordcomp::setalg::RSet)) -> Value {
    json!({"W": doc::rset_to_value(&w.0), "V": doc::rset_to_value(&w.1)})
}

fn run_command(cli: &Cli) -> Result<Report, Error> {
    let cfg = SweepConfig {
        support_bound: cli.support_bound,
        samples: cli.samples,
        seed: cli.seed,
    };
    match &cli.command {
        Command::Classify { input } => {
            let mut report = Report::new("classify", &cfg);
            let v = read_input(input, &mut report)?;
            doc::check_format(&v)?;
            let space = doc::parse_space(&v, "space")?;
            let flags = space.classify();
            report.checks.push(Check::flag("compact", flags.compact));
            report.checks.push(
                Check::flag("priestley_separation", flags.priestley_separation).with_witness(
                    space
                        .check_priestley_separation()
                        .map(|(a, b)| json!([a.to_string(), b.to_string()]))
                        .unwrap_or(Value::Null),
                ),
            );
            report.checks.push(Check::flag("priestley", flags.priestley));
            let cont = space.check_order_continuity();
            let mut cont_check =
                Check::flag("continuously_ordered", flags.continuously_ordered);
            if let Some(x) = &cont.upsets_closed {
                cont_check = cont_check
                    .with_witness(json!({"upset_not_closed_at": x.to_string()}));
            } else if let Some(u) = &cont.down_of_open_open {
                cont_check =
                    cont_check.with_witness(json!({"downset_not_open": doc::rset_to_value(u)}));
            }
            report.checks.push(cont_check);
            report.checks.push(Check::flag("esakia", flags.esakia));
            report
                .checks
                .push(Check::flag("order_zero_dimensional", flags.order_zero_dimensional));
            report.checks.push(
                Check::flag("image_compact", flags.image_compact).with_witness(
                    space
                        .check_image_compact()
                        .map(|x| json!(x.to_string()))
                        .unwrap_or(Value::Null),
                ),
            );
            report.checks.push(Check::flag("locally_esakia", flags.locally_esakia));
            Ok(report)
        }
        Command::RingCheck { input, level } => {
            let mut report = Report::new("ring-check", &cfg);
            let v = read_input(input, &mut report)?;
            let ring = doc::parse_ring(&v)?;
            match level {
                RingLevel::Ring => {
                    let c = match ring.check_ring() {
                        None => Check::flag("ring", true),
                        Some(w) => Check::flag("ring", false)
                            .with_detail(format!("{w:?}")),
                    };
                    report.checks.push(c);
                }
                RingLevel::Priestley => {
                    let c = match ring.check_priestley_ring() {
                        None => Check::flag("priestley_ring", true),
                        Some((a, b)) => Check::flag("priestley_ring", false)
                            .with_witness(json!([a.to_string(), b.to_string()])),
                    };
                    report.checks.push(c);
                }
                RingLevel::Basis => {
                    let c = match ring.check_priestley_basis()? {
                        None => Check::flag("priestley_basis", true),
                        Some((w, p)) => Check::flag("priestley_basis", false).with_witness(
                            json!({"generator": doc::rset_to_value(&w), "point": p.to_string()}),
                        ),
                    };
                    report.checks.push(c);
                }
                RingLevel::Heyting => {
                    let v = ring.check_heyting_ring(&cfg)?;
                    report.checks.push(Check::from_verdict("heyting_ring", &v, pair_witness));
                }
                RingLevel::Esakia => {
                    let v = ring.check_esakia_ring(&cfg)?;
                    report.checks.push(Check::from_verdict("esakia_ring", &v, pair_witness));
                }
                RingLevel::Nbasis => {
                    let ordcomp::rings::RingPresentation::Pullback(pair) = ring.presentation()
                    else {
                        return Err(Error::Precondition(
                            "N-basis checks need a pullback ring".into(),
                        ));
                    };
                    let cls = classify_pair(pair, &cfg)?;
                    if !cls.priestley {
                        return Err(Error::Precondition(
                            "N-basis checks need a Priestley order-compactification".into(),
                        ));
                    }
                    let v = check_n_basis(pair, &cfg)?;
                    report.checks.push(Check::from_verdict("n_basis", &v, pair_witness));
                }
            }
            Ok(report)
        }
        Command::PairClassify { input } => {
            let mut report = Report::new("pair-classify", &cfg);
            let v = read_input(input, &mut report)?;
            let pair = doc::parse_pair(&v)?;
            let cls = classify_pair(&pair, &cfg)?;
            report.checks.push(
                Check::flag("order_compactification", cls.order_compactification)
                    .with_detail(cls.failures.join("; ")),
            );
            report.checks.push(Check::flag("priestley", cls.priestley));
            report.checks.push(Check::flag("heyting", cls.heyting));
            report.checks.push(
                Check::flag("esakia", cls.esakia).with_witness(
                    cls.esakia_witness
                        .as_ref()
                        .map(|p| json!({"upset_not_dense_at": p.to_string()}))
                        .unwrap_or(Value::Null),
                ),
            );
            report.checks.push(Check::from_verdict("n_order", &cls.n_order, pair_witness));
            report.checks.push(Check::flag("x_upset_of_y", cls.x_upset_of_y));
            Ok(report)
        }
        Command::Eta0 { input } => {
            let mut report = Report::new("eta0", &cfg);
            let v = read_input(input, &mut report)?;
            doc::check_format(&v)?;
            let space = doc::parse_space(&v, "space")?;
            let pair = eta0_finite(&space)?;
            report.checks.push(Check::flag("constructed", true));
            report.result = Some(doc::pair_to_value(&pair));
            Ok(report)
        }
        Command::Compactify { basis } => {
            let mut report = Report::new("compactify", &cfg);
            let v = read_input(basis, &mut report)?;
            let ring = doc::parse_ring(&v)?;
            let space = ring.base_space().clone();
            let pair = compactify_from_basis(&space, &ring)?;
            report.checks.push(Check::flag("constructed", true));
            report.result = Some(doc::pair_to_value(&pair));
            Ok(report)
        }
        Command::Compare { first, second } => {
            let mut report = Report::new("compare", &cfg);
            let v1 = read_input(first, &mut report)?;
            let v2 = read_input(second, &mut report)?;
            let p1 = doc::parse_pair(&v1)?;
            let p2 = doc::parse_pair(&v2)?;
            match compare_compactifications(&p1, &p2, &cfg)? {
                Some(f) => {
                    report.checks.push(Check::flag("connecting_map", true));
                    report.result = Some(doc::map_to_value(&f));
                }
                None => report.checks.push(Check::flag("connecting_map", false)),
            }
            Ok(report)
        }
        Command::Lift { input } => {
            let mut report = Report::new("lift", &cfg);
            let v = read_input(input, &mut report)?;
            let f = doc::parse_map_file(&v)?;
            let lifted = lift(&f)?;
            report.checks.push(Check::flag("routes_agree", true));
            report.checks.push(Check::flag("extends_along_unit", true));
            report.checks.push(Check::flag("unique", lifted.unique_verified).with_detail(
                if lifted.unique_verified {
                    "exhaustive competitor search".into()
                } else {
                    "forced on a dense image".into()
                },
            ));
            let props = check_lift_properties(&f, &lifted)?;
            report.checks.push(
                Check::flag("difference_biconditional", props.difference_witness.is_none())
                    .with_witness(json!(props.difference_witness)),
            );
            match props.p_morphism_witness {
                None => report.checks.push(
                    Check::flag("p_morphism_transfer", true)
                        .with_detail("skipped: map is not a p-morphism".into()),
                ),
                Some(None) => {
                    report.checks.push(Check::flag("p_morphism_transfer", true));
                }
                Some(Some(y)) => report.checks.push(
                    Check::flag("p_morphism_transfer", false)
                        .with_witness(json!(y.to_string())),
                ),
            }
            report.result = Some(json!({
                "eta0": doc::pair_to_value(&lifted.eta.pair),
                "lift": doc::map_to_value(&lifted.lift),
            }));
            Ok(report)
        }
        Command::LemmaCheck { input } => {
            let mut report = Report::new("lemma-check", &cfg);
            let v = read_input(input, &mut report)?;
            let (space, family) = doc::parse_family(&v)?;
            let c = match esakia_lemma_check(&space, &family)? {
                None => Check::flag("down_directed_intersection", true),
                Some(p) => Check::flag("down_directed_intersection", false)
                    .with_witness(json!(p.to_string())),
            };
            report.checks.push(c);
            Ok(report)
        }
        Command::LatticeCheck { input } => {
            let mut report = Report::new("lattice-check", &cfg);
            let v = read_input(input, &mut report)?;
            let d = doc::parse_lattice(&v)?;
            report.checks.push(Check::flag("valid", true));
            let fast = d.prime_filters();
            let agree = if d.len() <= 20 {
                let brute = d.prime_filters_bruteforce()?;
                Check::flag("prime_filter_oracles_agree", brute == fast)
                    .with_detail("subset enumeration".into())
            } else {
                let principal = d.prime_filters_principal();
                Check::flag("prime_filter_oracles_agree", principal == fast)
                    .with_detail("principal-filter oracle".into())
            };
            report.checks.push(agree);
            report.checks.push(Check::flag("heyting", d.is_heyting()));
            report.result = Some(json!({"prime_filters": fast.len()}));
            Ok(report)
        }
        Command::Suite { corpus } => {
            let mut report = Report::new("suite", &cfg);
            let instances: Vec<SuiteInstance> = if corpus == "builtin" {
                ordcomp::corpus::builtin_suite(4)
            } else {
                let v = read_input(Path::new(corpus), &mut report)?;
                doc::check_format(&v)?;
                let m = v
                    .as_object()
                    .ok_or_else(|| Error::InvalidInput("corpus: expected an object".into()))?;
                let arr = m
                    .get("instances")
                    .and_then(|i| i.as_array())
                    .ok_or_else(|| Error::InvalidInput("corpus.instances: expected array".into()))?;
                let mut out = Vec::new();
                for (i, inst) in arr.iter().enumerate() {
                    let im = inst.as_object().ok_or_else(|| {
                        Error::InvalidInput(format!("corpus.instances[{i}]: expected object"))
                    })?;
                    let label = im
                        .get("label")
                        .and_then(|l| l.as_str())
                        .unwrap_or(&format!("instance_{i}"))
                        .to_string();
                    let pair = doc::parse_pair(im.get("pair").ok_or_else(|| {
                        Error::InvalidInput(format!("corpus.instances[{i}]: missing pair"))
                    })?)?;
                    out.push(SuiteInstance { label, pair });
                }
                out
            };
            let suite = theorem_suite(&instances, &cfg)?;
            // Aggregate per property; any disagreement is reported with its
            // instance.
            let mut properties: Vec<&'static str> = Vec::new();
            for row in &suite.rows {
                if !properties.contains(&row.property) {
                    properties.push(row.property);
                }
            }
            for prop in properties {
                let rows: Vec<_> =
                    suite.rows.iter().filter(|r| r.property == prop).collect();
                let bad = rows.iter().find(|r| !r.agree);
                let mut check = Check {
                    name: prop.into(),
                    verdict: if bad.is_none() { "ok" } else { "counterexample" }.into(),
                    tested: Some(rows.len()),
                    witness: None,
                    detail: None,
                };
                if let Some(b) = bad {
                    check.witness = Some(json!({
                        "instance": b.instance,
                        "lhs": b.lhs,
                        "rhs": b.rhs,
                    }));
                }
                report.checks.push(check);
            }
            Ok(report)
        }
        Command::Render { input } => {
            let mut report = Report::new("render", &cfg);
            let v = read_input(input, &mut report)?;
            doc::check_format(&v)?;
            let dot = if v.get("X").is_some() {
                render::pair_dot(&doc::parse_pair(&v)?)
            } else {
                render::space_dot(&doc::parse_space(&v, "space")?)
            };
            report.result = Some(json!(dot));
            Ok(report)
        }
    }
}

/// Runs a parsed command line; returns the rendered output and exit code.
pub fn run(cli: &Cli) -> (String, i32) {
    let started = std::time::Instant::now();
    match run_command(cli) {
        Ok(mut report) => {
            if cli.timings {
                report.elapsed_ms = Some(started.elapsed().as_millis());
            }
            let failed = report.any_counterexample();
            let code = match (failed, cli.expect_fail) {
                (false, false) => 0,
                (true, false) => 1,
                (true, true) => 0,
                (false, true) => 1,
            };
            let out = match cli.format {
                Format::Json => serde_json::to_string_pretty(&report).unwrap(),
                Format::Text => report.render_text(),
                Format::Dot => match &report.result {
                    Some(Value::String(dot)) => dot.clone(),
                    _ => report.render_text(),
                },
            };
            (out, code)
        }
        Err(err) => {
            let code = match err {
                Error::Internal(_) => 3,
                _ => 2,
            };
            (format!("error: {err}\n"), code)
        }
    }
}

/// Convenience for tests: parse arguments and run.
pub fn run_from_args<I, S>(args: I) -> (String, i32)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => (e.to_string(), 2),
    }
}
