//! `loopalg`: Hochschild and negative cyclic homology of Sullivan models,
//! BV exactness, the word-length spectral sequences and string brackets.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use loopalg::algebra::Element;
use loopalg::bv_exact::{bv_exactness_range, check_witness, s_action_range, weight_check, weight_check_with, weight_search};
use loopalg::emss::{check_page_law, d2_of_witness, page, r_bv_exactness, KComponent};
use loopalg::homology::{homology_deg, HomologyDeg};
use loopalg::loop_models::{build_e, build_l, gysin_check, FullE, FullL, LoopModel, WordComponent};
use loopalg::model_io::{emit_report, format_element, parse_element, parse_model_file, slot_algebra, Format, ModelFile, Report, Table};
use loopalg::models;
use loopalg::string_ops::bg::{BgAlgebra, BgClass};
use loopalg::string_ops::loop_homology::tensor_antisymmetry_defect;
use loopalg::string_ops::names::{format_named_tensor, is_m11, named_rep, Named, Naming};
use loopalg::string_ops::{Pipeline, TensorClass};
use loopalg::{Error, Result};

#[derive(Parser)]
#[command(name = "loopalg", version, about = "String topology computations on Sullivan models")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate a model file.
    Parse { model: String },
    /// Hochschild cohomology H(𝓛) per degree.
    Hh { model: String },
    /// Negative cyclic cohomology H(𝓔) per degree.
    Hcminus { model: String },
    /// BV exactness, cross-checked against the reduced S-action.
    BvExact { model: String },
    /// Positive weight check and exhaustive weight search.
    Weights { model: String },
    /// Pages of the word-length spectral sequence.
    Emss { model: String },
    /// The dual string bracket of a manifold model.
    Sbracket { model: String },
    /// Cobracket and gravity brackets for BG, G with exponents m_1,..,m_N (e.g. "2,3").
    Bg { degrees: String },
    /// The Gysin model identities.
    GysinCheck { model: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

#[derive(Args)]
struct Opts {
    #[arg(long, global = true)]
    max_degree: Option<i64>,
    /// Lower end of the window (bv-exact only).
    #[arg(long, global = true)]
    min_degree: Option<i64>,
    #[arg(long, global = true, default_value_t = 2)]
    page: usize,
    #[arg(long, global = true)]
    component: Option<i64>,
    #[arg(long, global = true, default_value_t = 6)]
    max_filtration: i64,
    #[arg(long, global = true, default_value_t = 12)]
    max_weight: i64,
    #[arg(long = "class", global = true)]
    classes: Vec<String>,
    #[arg(long, global = true)]
    shriek: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Text)]
    format: OutFormat,
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Record wall time in the report.
    #[arg(long, global = true)]
    timing: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(k) = cli.opts.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let start = Instant::now();
    match run(&cli.cmd, &cli.opts) {
        Ok(mut r) => {
            if cli.opts.timing {
                r.elapsed_ms = start.elapsed().as_millis() as u64;
            }
            let fmt = match cli.opts.format {
                OutFormat::Text => Format::Text,
                OutFormat::Json => Format::Json,
            };
            print!("{}", emit_report(&r, fmt));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cmd: &Cmd, o: &Opts) -> Result<Report> {
    match cmd {
        Cmd::Parse { model } => cmd_parse(&load(model)?),
        Cmd::Hh { model } => cmd_hh(&load(model)?, o),
        Cmd::Hcminus { model } => cmd_hcminus(&load(model)?, o),
        Cmd::BvExact { model } => cmd_bv(&load(model)?, o),
        Cmd::Weights { model } => cmd_weights(&load(model)?, o),
        Cmd::Emss { model } => cmd_emss(&load(model)?, o),
        Cmd::Sbracket { model } => cmd_sbracket(&load(model)?, o),
        Cmd::Bg { degrees } => cmd_bg(degrees, o),
        Cmd::GysinCheck { model } => cmd_gysin(&load(model)?, o),
    }
}

/// A shipped model name or a path to a `.sul` file.
fn load(spec: &str) -> Result<ModelFile> {
    if let Some(m) = models::load(spec) {
        return Ok(m);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Error::Domain(format!("{spec}: {e}")))?;
    parse_model_file(&text).map_err(|e| match e {
        Error::Parse { line, col, msg } => Error::Domain(format!("{spec}:{line}:{col}: {msg}")),
        e => e,
    })
}

fn window(lo: i64, hi: i64) -> Value {
    json!([lo, hi])
}

fn homology_table(h: &HomologyDeg, alg: &loopalg::algebra::Algebra) -> Table {
    Table::new(h.degree, h.reps().iter().map(|e| format_element(alg, e)).collect())
}

fn cmd_parse(mf: &ModelFile) -> Result<Report> {
    let c = &mf.cdga;
    let max = c.alg.gens.iter().map(|g| g.degree as i64).max().unwrap_or(0);
    let mut r = Report::new("parse", &c.name, max);
    let mut degs: Vec<i64> = c.alg.gens.iter().map(|g| g.degree as i64).collect();
    degs.sort();
    degs.dedup();
    for d in degs {
        let basis = c
            .alg
            .gens
            .iter()
            .enumerate()
            .filter(|(_, g)| g.degree as i64 == d)
            .map(|(i, g)| format!("d {} = {}", g.name, format_element(&c.alg, &c.d.values[i])))
            .collect();
        r.tables.push(Table::new(d, basis));
    }
    r.verdicts.insert("d_squared_zero".into(), json!(true));
    r.verdicts.insert("generators".into(), json!(c.alg.len()));
    r.verdicts.insert("shriek_block".into(), json!(mf.shriek.is_some()));
    if c.weights.is_some() {
        r.verdicts.insert("weights_valid".into(), json!(weight_check(c).valid));
    }
    Ok(r)
}

fn cmd_hh(mf: &ModelFile, o: &Opts) -> Result<Report> {
    let max = o.max_degree.unwrap_or(20);
    let lm = build_l(&mf.cdga)?;
    let mut r = Report::new("hh", &mf.cdga.name, max);
    let hs = (0..=max)
        .into_par_iter()
        .map(|n| match o.component {
            Some(w) => homology_deg(&WordComponent { lm: &lm, word: w }, n),
            None => homology_deg(&FullL(&lm), n),
        })
        .collect::<Result<Vec<_>>>()?;
    for h in &hs {
        let mut t = homology_table(h, lm.alg());
        t.component = o.component;
        r.tables.push(t);
    }
    r.verdicts.insert("window".into(), window(0, max));
    r.verdicts.insert("total_dimension".into(), json!(hs.iter().map(|h| h.dim()).sum::<usize>()));
    Ok(r)
}

fn cmd_hcminus(mf: &ModelFile, o: &Opts) -> Result<Report> {
    let max = o.max_degree.unwrap_or(20);
    let lm = build_l(&mf.cdga)?;
    let cm = build_e(&lm)?;
    let mut r = Report::new("hcminus", &mf.cdga.name, max);
    let hs = (0..=max)
        .into_par_iter()
        .map(|n| match o.component {
            Some(c) => homology_deg(&KComponent { lm: &lm, cm: &cm, n_comp: c }, n),
            None => homology_deg(&FullE(&cm), n),
        })
        .collect::<Result<Vec<_>>>()?;
    for h in &hs {
        let mut t = homology_table(h, cm.alg());
        t.component = o.component;
        r.tables.push(t);
    }
    r.verdicts.insert("window".into(), window(0, max));
    r.verdicts.insert("total_dimension".into(), json!(hs.iter().map(|h| h.dim()).sum::<usize>()));
    Ok(r)
}

fn parse_classes(alg: &loopalg::algebra::Algebra, classes: &[String]) -> Result<Vec<Element>> {
    classes.iter().map(|c| parse_element(alg, c)).collect()
}

fn cmd_bv(mf: &ModelFile, o: &Opts) -> Result<Report> {
    let max = o.max_degree.unwrap_or(40);
    if max < 2 {
        return Err(Error::Domain("bv-exact needs --max-degree of at least 2".into()));
    }
    let lo = o.min_degree.unwrap_or(1).max(1);
    let lm = build_l(&mf.cdga)?;
    let cm = build_e(&lm)?;
    let mut r = Report::new("bv-exact", &mf.cdga.name, max);
    let bv = bv_exactness_range(&lm, lo, max - 1)?;
    for row in &bv.rows {
        if row.dim_homology == 0 {
            continue;
        }
        r.tables.push(Table {
            degree: row.degree,
            dimension: row.dim_homology,
            basis: vec![format!("ker s = {}, im s = {}", row.dim_ker, row.dim_im)],
            component: Some(row.word),
            filtration: None,
            page: None,
        });
    }
    r.verdicts.insert("window".into(), window(bv.lo, bv.hi));
    r.verdicts.insert("bv_exact".into(), json!(bv.exact));
    r.verdicts.insert("failures".into(), json!(bv.failures));
    let s = s_action_range(&lm, &cm, (lo - 3).max(0), max - 2, Some(&bv))?;
    r.verdicts.insert("s_window".into(), window(s.decided_lo, s.decided_hi));
    r.verdicts.insert("s_trivial".into(), json!(s.trivial));
    r.verdicts.insert("s_nonzero_at".into(), json!(s.nonzero_at));
    if let Some(c) = &s.cross_check {
        r.verdicts.insert("cross_check".into(), json!(c));
    }
    for w in &bv.witnesses {
        r.witnesses.insert(
            format!("bv_degree_{}_word_{}", w.degree, w.word),
            json!(format_element(lm.alg(), &w.cocycle)),
        );
    }
    if let Some((n, c, e)) = &s.witness {
        r.witnesses.insert(format!("s_degree_{n}_component_{c}"), json!(format_element(cm.alg(), e)));
    }
    let given = parse_classes(lm.alg(), &o.classes)?;
    if let Some(omega) = given.first() {
        let ok = check_witness(&lm, omega, given.get(1))?;
        r.verdicts.insert("class_is_witness".into(), json!(ok));
    }
    Ok(r)
}

fn cmd_weights(mf: &ModelFile, o: &Opts) -> Result<Report> {
    let c = &mf.cdga;
    let mut r = Report::new("weights", &c.name, o.max_weight);
    if c.weights.is_some() {
        let w = weight_check(c);
        r.verdicts.insert("declared_valid".into(), json!(w.valid));
        r.verdicts.insert("declared_note".into(), json!(w.note));
        if let Some((g, t)) = &w.offending {
            r.witnesses.insert("offending".into(), json!(format!("{g}: {t}")));
        }
    }
    let (found, covered) = weight_search(c, o.max_weight);
    r.verdicts.insert("search_bound".into(), json!(o.max_weight));
    r.verdicts.insert("assignments_covered".into(), json!(covered.to_string()));
    r.verdicts.insert("positive_weights_found".into(), json!(found.len()));
    r.verdicts.insert("bv_exact_predicted".into(), json!(!found.is_empty() || weight_check(c).valid));
    if let Some(w) = found.first() {
        debug_assert!(weight_check_with(c, w).valid);
        let names: Vec<String> = c.alg.gens.iter().zip(w).map(|(g, x)| format!("{}={x}", g.name)).collect();
        r.witnesses.insert("weights".into(), json!(names.join(" ")));
    }
    Ok(r)
}

fn cmd_emss(mf: &ModelFile, o: &Opts) -> Result<Report> {
    let max = o.max_degree.unwrap_or(30);
    let n_comp = o.component.unwrap_or(0);
    let r_page = o.page.max(1);
    let lm = build_l(&mf.cdga)?;
    let cm = build_e(&lm)?;
    let mut r = Report::new("emss", &mf.cdga.name, max);
    let e = page(&lm, &cm, n_comp, r_page, max, o.max_filtration)?;
    for (&(p, n), ent) in &e.entries {
        r.tables.push(Table {
            degree: n,
            dimension: ent.dim(),
            basis: ent.reps().iter().map(|x| format_element(cm.alg(), x)).collect(),
            component: Some(n_comp),
            filtration: Some(p),
            page: Some(r_page),
        });
    }
    r.verdicts.insert("window".into(), window(1, max));
    r.verdicts.insert("max_filtration".into(), json!(o.max_filtration));
    r.verdicts.insert("page_zero".into(), json!(e.is_zero()));
    let checked = check_page_law(&lm, &cm, n_comp, r_page, max, o.max_filtration)?;
    r.verdicts.insert("page_law_slots_checked".into(), json!(checked));
    if n_comp == 0 {
        let rb = r_bv_exactness(&lm, &cm, r_page, max, o.max_filtration)?;
        r.verdicts.insert("r_bv_exact".into(), json!(rb.r));
    }
    let given = parse_classes(lm.alg(), &o.classes)?;
    if let [omega, alpha, ..] = given.as_slice() {
        let d2 = d2_of_witness(&lm, &cm, omega, alpha)?;
        r.verdicts.insert("d2_degree".into(), json!(d2.degree));
        r.verdicts.insert("d2_lifts".into(), json!(d2.lifts));
        r.verdicts.insert("d2_source_nonzero".into(), json!(d2.source_nonzero));
        r.verdicts.insert("d2_image_nonzero".into(), json!(d2.image_nonzero));
    }
    Ok(r)
}

/// `zeta_{p,q}`, `eta(p,q)`, `theta_r`, `u^k` and `1` name classes of the 11-manifold model.
fn parse_named(s: &str) -> Option<Named> {
    let s = s.trim();
    let nums: Vec<u32> = s.split(|c: char| !c.is_ascii_digit()).filter(|t| !t.is_empty()).filter_map(|t| t.parse().ok()).collect();
    let head: String = s.chars().take_while(|c| c.is_ascii_alphabetic()).collect();
    match (head.as_str(), nums.as_slice()) {
        ("", [1]) if s == "1" => Some(Named::U(0)),
        ("u", []) => Some(Named::U(1)),
        ("u", [k]) => Some(Named::U(*k)),
        ("zeta", [p, q]) => Some(Named::Zeta(*p, *q)),
        ("eta", [p, q]) => Some(Named::Eta(*p, *q)),
        ("theta", [r]) if *r >= 1 => Some(Named::Theta(*r)),
        _ => None,
    }
}

fn format_tensor(t: &TensorClass) -> Vec<String> {
    t.iter().map(|((da, i, db, j), c)| format!("{c} [{da}:{i}] (x) [{db}:{j}]")).collect()
}

fn pipeline(mf: &ModelFile, shriek: Option<&Path>) -> Result<Pipeline> {
    match shriek {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))?;
            let sq = slot_algebra(&mf.cdga.alg);
            let class = parse_element(&sq, text.trim())?;
            Pipeline::new(build_l(&mf.cdga)?, Some(&class))
        }
        None => Pipeline::from_model(mf, false)
            .map_err(|e| Error::Domain(format!("{e}; pass --shriek <file> with the class of Diag!(1)"))),
    }
}

fn cmd_sbracket(mf: &ModelFile, o: &Opts) -> Result<Report> {
    let max = o.max_degree.unwrap_or(12);
    let p = pipeline(mf, o.shriek.as_deref())?;
    let mut r = Report::new("sbracket", &mf.cdga.name, max);
    let bv = bv_exactness_range(&p.lm, 1, (max + 1).max(2))?;
    r.verdicts.insert("window".into(), window(bv.lo, bv.hi));
    r.verdicts.insert("bv_exact".into(), json!(bv.exact));
    r.verdicts.insert("shriek_degree".into(), json!(p.shriek.degree));
    let m11 = is_m11(&p);
    let naming = m11.then(|| Naming::new(&p));
    if o.classes.is_empty() {
        let table = p.string_bracket_table(max)?;
        let mut by_deg: std::collections::BTreeMap<i64, Vec<String>> = Default::default();
        for ((a, b), v) in &table.entries {
            let rhs: Vec<String> = v.iter().map(|((n, k), c)| format!("{c} [{n}:{k}]^v")).collect();
            by_deg.entry(a.0).or_default().push(format!("[[{}:{}]^v, [{}:{}]^v] = {}", a.0, a.1, b.0, b.1, rhs.join(" + ")));
        }
        for (d, basis) in by_deg {
            r.tables.push(Table::new(d, basis));
        }
        r.verdicts.insert("bracket_zero".into(), json!(table.is_zero()));
        r.verdicts.insert("antisymmetric".into(), json!(table.antisymmetry_defects().is_empty()));
        return Ok(r);
    }
    let mut all_antisym = true;
    for (k, text) in o.classes.iter().enumerate() {
        let (label, c) = match (m11, parse_named(text)) {
            (true, Some(n)) => (n.to_string(), named_rep(&p, n)),
            _ => (text.clone(), parse_element(p.cm.alg(), text)?),
        };
        let deg = c.degree(p.cm.alg()).ok_or_else(|| Error::Domain(format!("class {text} is zero or inhomogeneous")))?;
        let t = p.dsb(&c)?;
        all_antisym &= tensor_antisymmetry_defect(&t, p.shriek.degree).is_empty();
        let basis = match &naming {
            Some(nm) => vec![format_named_tensor(&nm.express_tensor(&p, &t)?)],
            None => format_tensor(&t),
        };
        r.tables.push(Table::new(deg, basis));
        r.witnesses.insert(format!("class_{k}"), json!(label));
    }
    r.verdicts.insert("antisymmetric".into(), json!(all_antisym));
    Ok(r)
}

fn parse_bg_class(bg: &BgAlgebra, s: &str) -> Result<BgClass> {
    let t = s.trim();
    if t == "u" {
        return Ok(bg.u(1));
    }
    if let Some(l) = t.strip_prefix("u^") {
        let l: u32 = l.parse().map_err(|_| Error::Domain(format!("bad power of u in '{s}'")))?;
        return Ok(bg.u(l));
    }
    Ok(bg.coker(&parse_element(&bg.alg, t)?))
}

fn cmd_bg(degrees: &str, o: &Opts) -> Result<Report> {
    let m: Vec<u32> = degrees
        .split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| Error::Domain(format!("bad degree list '{degrees}'"))))
        .collect::<Result<_>>()?;
    let bg = BgAlgebra::new(&m)?;
    let max = o.max_degree.unwrap_or(3);
    let mut r = Report::new("bg", &format!("BG[{degrees}]"), max);
    r.verdicts.insert("dim_G".into(), json!(bg.dim_g()));
    if !o.classes.is_empty() {
        let args = o.classes.iter().map(|c| parse_bg_class(&bg, c)).collect::<Result<Vec<_>>>()?;
        let out = bg.gravity(&args)?;
        let deg = bg.h_degree(&out).unwrap_or(0);
        r.tables.push(Table::new(deg, vec![bg.format(&out)]));
        r.verdicts.insert("arity".into(), json!(args.len()));
        r.verdicts.insert("zero".into(), json!(out.is_zero()));
        return Ok(r);
    }
    // brackets among y^k x_i^∨ (k_j ≤ max) and u⁰, u¹
    let n = bg.rank();
    let mut gens: Vec<(String, BgClass)> = vec![("1".into(), bg.u(0)), ("u".into(), bg.u(1))];
    let mut ks = vec![vec![]];
    for _ in 0..n {
        ks = ks.into_iter().flat_map(|k: Vec<u16>| (0..=max as u16).map(move |x| [k.clone(), vec![x]].concat())).collect();
    }
    for k in &ks {
        for i in 0..n {
            let e = bg.mono(k, &[i]);
            let c = bg.coker(&e);
            if !c.is_zero() {
                gens.push((format!("[{}]", format_element(&bg.alg, &e)), c));
            }
        }
    }
    let mut rows: std::collections::BTreeMap<i64, Vec<String>> = Default::default();
    for (na, a) in &gens {
        for (nb, b) in &gens {
            let out = bg.bracket(a, b)?;
            if out.is_zero() {
                continue;
            }
            let d = bg.h_degree(&out).unwrap_or(0);
            rows.entry(d).or_default().push(format!("[{na}, {nb}] = {}", bg.format(&out)));
        }
    }
    for (d, basis) in rows {
        r.tables.push(Table::new(d, basis));
    }
    r.verdicts.insert("classes".into(), json!(gens.len()));
    Ok(r)
}

fn cmd_gysin(mf: &ModelFile, o: &Opts) -> Result<Report> {
    let max = o.max_degree.unwrap_or(20);
    let lm: LoopModel = build_l(&mf.cdga)?;
    let g = gysin_check(&lm, max)?;
    let mut r = Report::new("gysin-check", &mf.cdga.name, max);
    r.verdicts.insert("window".into(), window(0, max));
    r.verdicts.insert("checked".into(), json!(g.checked));
    r.verdicts.insert("pass".into(), json!(g.pass));
    if !g.pass {
        let (what, e) = g.witness.unwrap_or_default();
        return Err(Error::Consistency(format!("Gysin identity failed: {what} at {e}")));
    }
    Ok(r)
}
