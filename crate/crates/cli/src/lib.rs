//! The `hyperkit` command line: `check`, `quotient`, `decompose`,
//! `convolve`, `enumerate` and `counterexamples`.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage,
//! I/O and parse errors.

use std::collections::HashMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use hyperkit::dsl::{self, BlockBody, BlockKind, Document};
use hyperkit::enumeration::{
    catalog_bundle, enumerate_canonical_hypergroups, enumerate_hyperfields, enumerate_ordered_hypergroups,
    mine_cone_order_counterexample, Budget,
};
use hyperkit::finite_support::{associativity_probe, convolve, sign_convolution_example, FiniteSupportMap};
use hyperkit::hypergroup::{verify_canonical, FiniteCanonicalHypergroup, H1, H2, H3, H4, IDENTITY_LAW};
use hyperkit::hyperring::{verify_hyperfield, verify_hyperring, FiniteHyperfield, MUL_GROUP, R1, R2_MONOID, R2_ZERO, R3};
use hyperkit::order::{check_fvk_properties, COMPATIBILITY, relation_from_cone, verify_positive_cone, OrderedCanonicalHypergroup, PositiveCone};
use hyperkit::quotient::{demonstrate_zn_failure, quotient_hyperfield, reproduce_cone_counterexample, FiniteCommutativeRing, UnitSubgroup};
use hyperkit::report::Report;
use hyperkit::valuation::{
    check_hypervaluation, check_valpro, decompose, decompose_computable, o_equal_without_isomorphism_report,
    proposition_checks, sampled_check, sign_hypervaluation_padic, FiniteHypervaluation,
};
use hyperkit::{Diagnostic, DiagnosticBundle, HyperError, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Hypergroups,
    Ordered,
    Hyperfields,
    Cones,
}

#[derive(Debug, Parser)]
#[command(name = "hyperkit", version, about = "Finite hyperstructure verification toolkit")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Worker threads for parallel checks (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 10_000)]
    pub samples: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify every structure declared in a `.hyp` file.
    Check { file: PathBuf },
    /// Build the quotient hyperfield R/G and print it as DSL text.
    Quotient {
        /// `zmod:<m>`
        #[arg(long)]
        ring: String,
        /// Comma-separated members of the unit subgroup G.
        #[arg(long, value_delimiter = ',', required = true)]
        subgroup: Vec<usize>,
    },
    /// Factor hypervaluations through their value group.
    Decompose {
        #[arg(required_unless_present = "padic")]
        file: Option<PathBuf>,
        /// Sampled check of the p-adic sign hypervaluation on Q instead.
        #[arg(long, conflicts_with = "file")]
        padic: Option<u64>,
    },
    /// Convolution products of finite-support maps and the associativity probe.
    Convolve {
        /// Omit to use the sign hypergroup example.
        file: Option<PathBuf>,
        /// Three function names `f,g,h`; defaults to the first three in the file.
        #[arg(long, value_delimiter = ',')]
        functions: Vec<String>,
    },
    /// Enumerate structures of a given order up to isomorphism.
    Enumerate {
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "hypergroups")]
        kind: Kind,
        /// Include the catalog as DSL text.
        #[arg(long)]
        emit: bool,
        #[arg(long, default_value_t = Budget::default().max_nodes)]
        max_nodes: u64,
    },
    /// Reproduce the counterexamples: cone order, Z/N, convolution, O_v = O_w.
    Counterexamples,
}

/// Failures that are not check verdicts.
#[derive(Debug)]
enum Usage {
    Message(String),
}

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage::Message(e.to_string())
    }
}

type Outcome = std::result::Result<Report, Usage>;

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> (i32, Option<Report>)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return (code, None);
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return (2, None);
        }
    };
    let start = Instant::now();
    match pool.install(|| dispatch(&cli)) {
        Ok(mut report) => {
            report.time("total", start.elapsed().as_secs_f64() * 1e3);
            let _ = match cli.format {
                Format::Json => writeln!(out, "{}", report.to_json()),
                Format::Text => {
                    if let Some(o) = &report.output {
                        let _ = write!(out, "{o}");
                    }
                    // Keep emitted DSL parseable as a whole.
                    let comment = report.output.is_some() && matches!(cli.command, Command::Quotient { .. } | Command::Enumerate { .. });
                    let text = report.to_text();
                    if comment {
                        write!(out, "{}", text.lines().map(|l| format!("# {l}\n")).collect::<String>())
                    } else {
                        write!(out, "{text}")
                    }
                }
            };
            (if report.all_passed() { 0 } else { 1 }, Some(report))
        }
        Err(Usage::Message(m)) => {
            let _ = writeln!(err, "error: {m}");
            (2, None)
        }
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Check { file } => check(file),
        Command::Quotient { ring, subgroup } => quotient(ring, subgroup),
        Command::Decompose { file: Some(file), .. } => decompose_file(file),
        Command::Decompose { padic: Some(p), .. } => decompose_padic(*p, cli.samples, cli.seed),
        Command::Decompose { .. } => Err(Usage::Message("give a file or --padic <p>".into())),
        Command::Convolve { file, functions } => convolve_cmd(file.as_deref(), functions),
        Command::Enumerate { order, kind, emit, max_nodes } => enumerate(*order, *kind, *emit, Budget { max_nodes: *max_nodes }),
        Command::Counterexamples => counterexamples(cli.samples, cli.seed),
    }
}

fn load(path: &Path) -> std::result::Result<(String, Document), Usage> {
    let text = std::fs::read_to_string(path).map_err(|e| Usage::Message(format!("{}: {e}", path.display())))?;
    let doc = dsl::parse(&text).map_err(|e| Usage::Message(format!("{}:{}:{}: {}", path.display(), e.span.line, e.span.col, e.message)))?;
    Ok((text, doc))
}

fn passes(names: &[&str]) -> DiagnosticBundle {
    DiagnosticBundle(names.iter().map(|n| Diagnostic::pass(*n)).collect())
}

/// Verified structures of a document, by block name.
#[derive(Default)]
struct Verified {
    hypergroups: HashMap<String, FiniteCanonicalHypergroup>,
    ordered: HashMap<String, OrderedCanonicalHypergroup>,
    fields: HashMap<String, FiniteHyperfield>,
}

fn verify_structure(doc: &Document, name: &str, kind: BlockKind, report: &mut Report, v: &mut Verified) -> std::result::Result<(), Usage> {
    match kind {
        BlockKind::Hypergroup => {
            let parts = dsl::build_hypergroup(doc, name)?;
            match verify_canonical(parts.table, parts.identity, parts.labels) {
                Ok(h) => {
                    report.extend(name, passes(&[H1, H2, H3, H4, IDENTITY_LAW]));
                    if let Some(order) = parts.order {
                        match OrderedCanonicalHypergroup::new(h.clone(), order) {
                            Ok(oh) => {
                                report.push(Diagnostic::pass(format!("{name}: {COMPATIBILITY}")));
                                match check_fvk_properties(&oh) {
                                    Ok(b) => report.extend(name, b),
                                    Err(e) => report.push(
                                        Diagnostic::pass(format!("{name}: four-part lemma")).with_details(format!("not applicable: {e}")),
                                    ),
                                }
                                v.ordered.insert(name.into(), oh);
                            }
                            Err(HyperError::Verification(b)) => report.extend(name, b),
                            Err(e) => return Err(e.into()),
                        }
                    }
                    if let Some(cone) = parts.cone {
                        let b = verify_positive_cone(&h, cone);
                        let ok = b.all_passed();
                        report.extend(name, b);
                        if ok {
                            let rel = relation_from_cone(&h, PositiveCone::new(&h, cone)?);
                            let verdict = if rel.is_linear_order() { "a linear order" } else { "not a linear order" };
                            report.push(Diagnostic::pass(format!("{name}: cone relation")).with_details(format!("induced relation is {verdict}")));
                        }
                    }
                    v.hypergroups.insert(name.into(), h);
                }
                Err(b) => report.extend(name, b),
            }
        }
        BlockKind::Hyperring => match verify_hyperring(dsl::build_ring(doc, name)?) {
            Ok(_) => report.extend(name, passes(&[R1, R2_MONOID, R2_ZERO, R3])),
            Err(b) => report.extend(name, b),
        },
        BlockKind::Hyperfield => match verify_hyperfield(dsl::build_ring(doc, name)?) {
            Ok(f) => {
                report.extend(name, passes(&[R1, R2_MONOID, R2_ZERO, R3, MUL_GROUP]));
                v.fields.insert(name.into(), f);
            }
            Err(b) => report.extend(name, b),
        },
        _ => {}
    }
    Ok(())
}

/// Builds the named valuation if its domain and codomain verified.
fn valuation(doc: &Document, name: &str, report: &mut Report, v: &Verified) -> std::result::Result<Option<FiniteHypervaluation>, Usage> {
    let (d, c, values) = dsl::build_valuation_values(doc, name)?;
    let (Some(f), Some(h)) = (v.fields.get(&d), v.ordered.get(&c)) else {
        report.push(Diagnostic::fail(
            format!("{name}: inputs"),
            Witness::values([d, c]),
            "domain must be a verified hyperfield and codomain a verified ordered hypergroup",
        ));
        return Ok(None);
    };
    Ok(Some(FiniteHypervaluation::new(f.clone(), h.clone(), values)?))
}

fn check(file: &Path) -> Outcome {
    let (text, doc) = load(file)?;
    let mut report = Report::new(text.as_bytes());
    let mut v = Verified::default();
    let t = Instant::now();
    for b in &doc.blocks {
        let name = b.name.value.as_str();
        match &b.body {
            BlockBody::Structure(_) => verify_structure(&doc, name, b.kind, &mut report, &mut v)?,
            BlockBody::Valuation(_) => {
                if let Some(w) = valuation(&doc, name, &mut report, &v)? {
                    match check_hypervaluation(&w) {
                        Ok(bundle) => {
                            let ok = bundle.all_passed();
                            report.extend(name, bundle);
                            report.extend(name, check_valpro(&w));
                            if ok {
                                report.extend(name, proposition_checks(&w)?);
                            }
                        }
                        Err(e) => report.push(Diagnostic::fail(format!("{name}: codomain order"), Witness::default(), e.to_string())),
                    }
                }
            }
            BlockBody::Functions(_) => {
                let (d, fns) = dsl::build_functions(&doc, name)?;
                let ok = v.hypergroups.contains_key(&d);
                report.push(Diagnostic::from_bool(
                    format!("{name}: domain"),
                    ok,
                    format!("{} maps on {d}{}", fns.len(), if ok { "" } else { ", which did not verify" }),
                ));
            }
        }
    }
    report.time("check", t.elapsed().as_secs_f64() * 1e3);
    Ok(report)
}

fn quotient(ring: &str, subgroup: &[usize]) -> Outcome {
    let m: usize = ring
        .strip_prefix("zmod:")
        .and_then(|m| m.parse().ok())
        .ok_or_else(|| Usage::Message(format!("unsupported ring `{ring}` (expected zmod:<m>)")))?;
    let list: Vec<String> = subgroup.iter().map(|g| g.to_string()).collect();
    let mut report = Report::new(format!("quotient zmod:{m} {}", list.join(",")).as_bytes());
    let r = FiniteCommutativeRing::zmod(m)?;
    let g = UnitSubgroup::new(&r, subgroup)?;
    match quotient_hyperfield(&r, &g) {
        Ok((f, part)) => {
            report.extend("quotient", passes(&[R1, R2_MONOID, R2_ZERO, R3, MUL_GROUP]));
            let classes: Vec<String> = part
                .classes
                .iter()
                .map(|c| format!("{{{}}}", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
                .collect();
            report.push(Diagnostic::pass("orbits").with_details(classes.join(" ")));
            let mut text = format!("# Z/{m} modulo the unit subgroup {{{}}}\n", list.join(", "));
            text += &dsl::serialize(&Document { blocks: vec![dsl::hyperfield_block(&format!("Z{m}mod{}", list.join("_")), &f)] });
            report.output = Some(text);
        }
        Err(HyperError::Verification(b)) => report.extend("quotient", b),
        Err(e) => return Err(e.into()),
    }
    Ok(report)
}

fn decompose_file(file: &Path) -> Outcome {
    let (text, doc) = load(file)?;
    let mut report = Report::new(text.as_bytes());
    let mut v = Verified::default();
    let mut out = String::new();
    let mut any = false;
    for b in &doc.blocks {
        let name = b.name.value.as_str();
        match &b.body {
            BlockBody::Structure(_) => {
                let mut scratch = Report::new(b"");
                verify_structure(&doc, name, b.kind, &mut scratch, &mut v)?;
                if !scratch.all_passed() {
                    report.extend("", DiagnosticBundle(scratch.checks));
                }
            }
            BlockBody::Valuation(_) => {
                any = true;
                let Some(w) = valuation(&doc, name, &mut report, &v)? else { continue };
                let d = match decompose(&w) {
                    Ok(d) => d,
                    Err(HyperError::Verification(b)) => {
                        report.extend(name, b);
                        continue;
                    }
                    Err(e) => return Err(e.into()),
                };
                report.extend(name, d.report.clone());
                let f = w.domain();
                let g = d.value_group.group();
                out += &format!("{name}: value group of order {}\n", d.value_group.size());
                for x in 0..f.size() {
                    let vx = d.v.value(x);
                    out += &format!("  {} -> v = {} -> h = {}\n", f.label(x), vx.show(g), w.value(x).show(w.codomain().hypergroup()));
                }
            }
            BlockBody::Functions(_) => {}
        }
    }
    if !any {
        return Err(Usage::Message(format!("{}: no valuation blocks", file.display())));
    }
    report.output = Some(out);
    Ok(report)
}

fn decompose_padic(p: u64, samples: usize, seed: u64) -> Outcome {
    let mut report = Report::new(format!("decompose padic {p} samples {samples} seed {seed}").as_bytes());
    let cw = sign_hypervaluation_padic(p)?;
    let t = Instant::now();
    report.extend("sampled", sampled_check(&cw, samples, seed).to_bundle());
    let d = decompose_computable(&cw, samples, seed);
    report.extend("decompose", d.to_bundle());
    report.extend("O_v = O_w", o_equal_without_isomorphism_report(p, samples, seed)?.to_bundle());
    report.time("sampling", t.elapsed().as_secs_f64() * 1e3);
    let mut out = format!("{}\nvalue group {}\n", d.name, d.presentation);
    for (k, h) in &d.h_table {
        out += &format!("  h({k}) = {h}\n");
    }
    report.output = Some(out);
    Ok(report)
}

fn products(report: &mut Report, fs: [&FiniteSupportMap; 3], names: [&str; 3]) -> std::result::Result<String, Usage> {
    let [f, g, h] = fs;
    let [a, b, c] = names;
    let fg = convolve(f, g)?;
    let gh = convolve(g, h)?;
    let left = convolve(&fg, h)?;
    let right = convolve(f, &gh)?;
    let mut out = String::new();
    for (label, m) in [(format!("{a}{b}"), &fg), (format!("{b}{c}"), &gh), (format!("({a}{b}){c}"), &left), (format!("{a}({b}{c})"), &right)] {
        out += &format!("{label} = {}\n", m.display());
    }
    let probe = associativity_probe(f, g, h)?;
    report.push(match &probe {
        None => Diagnostic::pass("convolution associativity").with_details(format!("({a}{b}){c} = {a}({b}{c})")),
        Some(w) => Diagnostic::fail(
            "convolution associativity",
            Witness::elements([w.x]).with_values([format!("left = {}", w.left), format!("right = {}", w.right)]),
            format!("(({a}{b}){c})({}) = {} but ({a}({b}{c}))({}) = {}", w.label, w.left, w.label, w.right),
        ),
    });
    Ok(out)
}

fn convolve_cmd(file: Option<&Path>, names: &[String]) -> Outcome {
    let Some(file) = file else {
        let mut report = Report::new(b"convolve sign example");
        let [f, g, h] = sign_convolution_example();
        report.output = Some(products(&mut report, [&f, &g, &h], ["f", "g", "h"])?);
        return Ok(report);
    };
    let (text, doc) = load(file)?;
    let mut report = Report::new(text.as_bytes());
    let block = doc
        .blocks
        .iter()
        .find(|b| b.kind == BlockKind::Functions)
        .ok_or_else(|| Usage::Message(format!("{}: no functions block", file.display())))?;
    let (dname, fns) = dsl::build_functions(&doc, &block.name.value)?;
    let parts = dsl::build_hypergroup(&doc, &dname)?;
    let dom = match verify_canonical(parts.table, parts.identity, parts.labels) {
        Ok(h) => Arc::new(h),
        Err(b) => {
            report.extend(&dname, b);
            return Ok(report);
        }
    };
    let pick: Vec<&(String, _)> = if names.is_empty() {
        fns.iter().take(3).collect()
    } else {
        names
            .iter()
            .map(|n| fns.iter().find(|(m, _)| m == n).ok_or_else(|| Usage::Message(format!("no function `{n}`"))))
            .collect::<std::result::Result<_, _>>()?
    };
    if pick.len() != 3 {
        return Err(Usage::Message(format!("need three functions, found {}", pick.len())));
    }
    let maps: Vec<FiniteSupportMap> =
        pick.iter().map(|(_, vals)| FiniteSupportMap::new(dom.clone(), vals.clone())).collect::<Result<_, _>>()?;
    let labels = [pick[0].0.as_str(), pick[1].0.as_str(), pick[2].0.as_str()];
    report.output = Some(products(&mut report, [&maps[0], &maps[1], &maps[2]], labels)?);
    Ok(report)
}

fn enumerate(n: usize, kind: Kind, emit: bool, budget: Budget) -> Outcome {
    let mut report = Report::new(format!("enumerate {n} {kind:?} {}", budget.max_nodes).as_bytes());
    let t = Instant::now();
    let mut blocks = Vec::new();
    match kind {
        Kind::Hypergroups => {
            let cat = enumerate_canonical_hypergroups(n, true, budget)?;
            report.extend("", catalog_bundle(&cat));
            for (i, h) in cat.entries.iter().enumerate() {
                blocks.push(dsl::hypergroup_block(&format!("H{n}_{i}"), h, None, None));
            }
        }
        Kind::Ordered => {
            let cat = enumerate_ordered_hypergroups(n, budget)?;
            report.extend("", catalog_bundle(&cat));
            for (i, oh) in cat.entries.iter().enumerate() {
                blocks.push(dsl::hypergroup_block(&format!("O{n}_{i}"), oh.hypergroup(), Some(oh.order()), None));
            }
        }
        Kind::Hyperfields => {
            let cat = enumerate_hyperfields(n, budget)?;
            report.extend("", catalog_bundle(&cat));
            for (i, f) in cat.entries.iter().enumerate() {
                blocks.push(dsl::hyperfield_block(&format!("F{n}_{i}"), f));
            }
        }
        Kind::Cones => {
            let m = mine_cone_order_counterexample(n, budget)?;
            let searched: Vec<String> = m.searched.iter().map(|(k, h, c)| format!("n={k}: {h} hypergroups, {c} cones")).collect();
            report.push(Diagnostic::from_bool("cone order mining", m.exhaustive || m.witness.is_some(), m.summary()));
            report.push(Diagnostic::pass("searched").with_details(searched.join("; ")));
            if let Some(w) = &m.witness {
                blocks.push(dsl::hypergroup_block("Witness", &w.hypergroup, None, Some(w.cone)));
            }
        }
    }
    report.time("enumerate", t.elapsed().as_secs_f64() * 1e3);
    if emit && !blocks.is_empty() {
        report.output = Some(dsl::serialize(&Document { blocks }));
    }
    Ok(report)
}

fn counterexamples(samples: usize, seed: u64) -> Outcome {
    let mut report = Report::new(format!("counterexamples samples {samples} seed {seed}").as_bytes());

    let t = Instant::now();
    let cone = reproduce_cone_counterexample()?;
    for ev in [&cone.three_le_two, &cone.two_le_three] {
        report.push(Diagnostic::from_bool(format!("cone: {} <= {}", ev.x, ev.y), ev.exact, ev.arithmetic.clone()));
    }
    report.push(Diagnostic::from_bool(
        "cone: antisymmetry fails",
        cone.distinct && !cone.antisymmetric,
        cone.verdict.clone(),
    ));
    report.push(Diagnostic::from_bool(
        "cone: exact membership agrees with search",
        cone.cross_check_agrees,
        format!("search bound {}", cone.search_bound),
    ));
    report.extend("cone", cone.cone_checks.clone());
    report.time("cone", t.elapsed().as_secs_f64() * 1e3);

    let t = Instant::now();
    let zn = demonstrate_zn_failure(5, 10)?;
    let ks: Vec<String> = zn.candidates.iter().map(|c| format!("{}N", -c.k)).collect();
    report.push(Diagnostic::from_bool(
        "Z/N: inverses of 1N are not unique",
        zn.h3_violated && zn.candidates.len() == 5,
        format!("inverse candidates {}", ks.join(", ")),
    ));
    report.time("zn", t.elapsed().as_secs_f64() * 1e3);

    let t = Instant::now();
    let [f, g, h] = sign_convolution_example();
    let probe = associativity_probe(&f, &g, &h)?;
    report.push(match probe {
        Some(w) => Diagnostic::pass("convolution: (fg)h != f(gh)")
            .with_details(format!("at x = {}: left = {}, right = {}", w.label, w.left, w.right)),
        None => Diagnostic::fail("convolution: (fg)h != f(gh)", Witness::default(), "products agree everywhere"),
    });
    report.time("convolution", t.elapsed().as_secs_f64() * 1e3);

    let t = Instant::now();
    report.extend("O_v = O_w", o_equal_without_isomorphism_report(2, samples, seed)?.to_bundle());
    report.time("o_equal", t.elapsed().as_secs_f64() * 1e3);
    Ok(report)
}
