use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ramification::character::{character_table, galois_orbit_characters, galois_orbits};
use ramification::conductor::{artin_conductor, conductor_matrix, fine_conductor, fine_minus_artin, wy_weight};
use ramification::counting::{
    abelian_count, abelian_factors, local_factor, local_mass, local_mass_bruteforce, predicted_slice_constant,
    region_sum_product, shell_sum, ConstantOptions, LocalFactor, WildMode,
};
use ramification::cyclotomic::{format_rational, int, parse_rational, rational};
use ramification::group::{load_group, preset, DEFAULT_ORDER_BOUND};
use ramification::ramification::{
    make_profile, make_tame_datum, ramification_types, types_document, DatumSpec, ProfileSpec, RamificationTypes,
};
use ramification::verify::{default_corpus, run_verify};
use ramification::{Error, FiniteGroup, GroupSpec, Rational};

/// Ramification types, fine Artin conductors and counting of G-extensions.
///
/// Thread count for parallel steps follows RAYON_NUM_THREADS.
#[derive(Parser, Debug)]
#[command(name = "ramification", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Nontrivial ramification types of (G, profile).
    Types(GroupProfile),
    /// Character table of G.
    Chartable(GroupArg),
    /// Fine conductor matrix of the tame type data against the orbit characters.
    Matrix(GroupProfile),
    /// Fine and Artin conductors of one datum against every orbit character.
    Conductor(ConductorArgs),
    /// Local masses at a tame prime.
    Mass(MassArgs),
    /// Local Dirichlet factors over a range of primes.
    Factor(FactorArgs),
    /// Exact weighted count of abelian G-extensions of Q in a box.
    Count(CountArgs),
    /// Heuristic leading constant.
    Constant(ConstantArgs),
    /// Coefficient sum over the shell δX_i < x_i ≤ X_i.
    Shell(ShellArgs),
    /// Coefficient sum over the region Π x_i^{h_i} ≤ X.
    Region(RegionArgs),
    /// Run the invariant corpus.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct GroupArg {
    /// Preset name (C5, S3, C2xC2, …) or path to a group-spec JSON file.
    #[arg(long)]
    group: String,
}

#[derive(Args, Debug)]
struct GroupProfile {
    #[command(flatten)]
    group: GroupArg,
    /// `Q`, `cyclotomic`, or generators of a subgroup of (Z/nZ)^× such as `3,5`.
    #[arg(long, default_value = "Q")]
    profile: String,
}

#[derive(Args, Debug)]
struct ConductorArgs {
    #[command(flatten)]
    gp: GroupProfile,
    /// Use the tame datum of this type id.
    #[arg(long, conflicts_with = "datum")]
    r#type: Option<usize>,
    /// Datum JSON, inline or as a file path.
    #[arg(long)]
    datum: Option<String>,
}

#[derive(Args, Debug)]
struct MassArgs {
    #[command(flatten)]
    gp: GroupProfile,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    prime: u64,
    /// Compare with exhaustive pair enumeration; a mismatch exits with 3.
    #[arg(long)]
    brute_check: bool,
}

#[derive(Args, Debug)]
struct FactorArgs {
    #[command(flatten)]
    gp: GroupProfile,
    /// Inclusive range `a..b` (or `a,b`).
    #[arg(long)]
    prime_range: String,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[command(flatten)]
    group: GroupArg,
    /// Bounds X_i, one per type, comma separated.
    #[arg(long = "X", value_name = "X1,X2,…")]
    x: String,
    /// Pin coordinate `id=value` (type id as printed by `types`).
    #[arg(long = "pin", value_name = "ID=VALUE")]
    pins: Vec<String>,
    /// Drop extensions that are wildly ramified somewhere.
    #[arg(long)]
    exclude_wild: bool,
}

#[derive(Args, Debug)]
struct ConstantArgs {
    #[command(flatten)]
    gp: GroupProfile,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    prime_bound: u64,
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    lseries_terms: u64,
    /// auto, skip or abelian-exact.
    #[arg(long, default_value = "auto")]
    wild_mode: String,
    /// Fail unless the error bound is at most this.
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long = "pin", value_name = "ID=VALUE")]
    pins: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Series {
    /// Exact abelian factors over Q (abelian groups only).
    Abelian,
    /// Tame heuristic factors `1 + Σ mass_i q^{-s_i}`, wild primes set to 1.
    Heuristic,
}

#[derive(Args, Debug)]
struct SeriesArgs {
    #[command(flatten)]
    group: GroupArg,
    /// Defaults to `abelian` for abelian groups, `heuristic` otherwise.
    #[arg(long, value_enum)]
    series: Option<Series>,
    #[arg(long)]
    exclude_wild: bool,
}

#[derive(Args, Debug)]
struct ShellArgs {
    #[command(flatten)]
    series: SeriesArgs,
    #[arg(long = "X", value_name = "X1,X2,…")]
    x: String,
    /// Rational in (0, 1), e.g. `1/2`.
    #[arg(long)]
    delta: String,
}

#[derive(Args, Debug)]
struct RegionArgs {
    #[command(flatten)]
    series: SeriesArgs,
    /// Positive rational weights h_i, comma separated.
    #[arg(long)]
    h: String,
    #[arg(long)]
    bound: String,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value = "default")]
    corpus: String,
}

/// A command result: the JSON document plus an optional table for CSV/text.
struct Output {
    json: Value,
    table: Option<(Vec<String>, Vec<Vec<String>>)>,
    text: Option<String>,
}

impl Output {
    fn json(json: Value) -> Self {
        Self { json, table: None, text: None }
    }

    fn with_table(mut self, headers: Vec<&str>, rows: Vec<Vec<String>>) -> Self {
        self.table = Some((headers.into_iter().map(String::from).collect(), rows));
        self
    }
}

enum Failure {
    Usage(String),
    Compute(Error),
    Violation(String, Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_theorem_violation() {
            Failure::Violation(e.to_string(), Value::Null)
        } else {
            Failure::Compute(e)
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn load(arg: &GroupArg) -> CliResult<Arc<FiniteGroup>> {
    let path = std::path::Path::new(&arg.group);
    let g = if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", arg.group)))?;
        let spec: GroupSpec = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        load_group(&spec, DEFAULT_ORDER_BOUND)?
    } else {
        preset(&arg.group)?
    };
    Ok(Arc::new(g))
}

fn types_of(gp: &GroupProfile) -> CliResult<RamificationTypes> {
    let g = load(&gp.group)?;
    let spec: ProfileSpec = gp.profile.parse()?;
    let profile = make_profile(g.exponent(), &spec)?;
    Ok(ramification_types(&g, &profile)?)
}

fn rational_types(arg: &GroupArg) -> CliResult<RamificationTypes> {
    let g = load(arg)?;
    let spec = ProfileSpec::Rational;
    Ok(ramification_types(&g, &make_profile(g.exponent(), &spec)?)?)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> CliResult<Vec<T>> {
    s.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| usage(format!("invalid {what} `{t}`"))))
        .collect()
}

fn parse_bounds(s: &str) -> CliResult<Vec<u64>> {
    let xs: Vec<u64> = parse_list(s, "bound")?;
    if xs.contains(&0) {
        return Err(usage("bounds must be positive"));
    }
    Ok(xs)
}

fn parse_pins(pins: &[String]) -> CliResult<Vec<(usize, u64)>> {
    pins.iter()
        .map(|p| {
            let (i, v) = p.split_once('=').ok_or_else(|| usage(format!("pin `{p}` must be ID=VALUE")))?;
            let i = i.trim().parse().map_err(|_| usage(format!("invalid pin id `{i}`")))?;
            let v = v.trim().parse().map_err(|_| usage(format!("invalid pin value `{v}`")))?;
            Ok((i, v))
        })
        .collect()
}

fn parse_q(s: &str) -> CliResult<Rational> {
    parse_rational(s.trim()).map_err(|_| usage(format!("invalid rational `{s}`")))
}

fn rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn cmd_types(gp: &GroupProfile) -> CliResult<Output> {
    let types = types_of(gp)?;
    let rows = types
        .types()
        .iter()
        .map(|t| {
            vec![
                t.id.to_string(),
                t.e.to_string(),
                t.representative.to_string(),
                join(&t.class_orbit),
                join(&t.stabilizer_a),
                t.index_u_a.to_string(),
            ]
        })
        .collect();
    Ok(Output::json(types_document(&types))
        .with_table(vec!["id", "e", "representative", "class_orbit", "stabilizer_A", "index_U_A"], rows))
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
}

fn cmd_chartable(arg: &GroupArg) -> CliResult<Output> {
    let g = load(arg)?;
    let table = character_table(&g)?;
    let mut headers = vec!["character".to_string()];
    headers.extend(g.conjugacy_classes().iter().map(|c| format!("class_{}", c.id)));
    let rows = table
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| std::iter::once(format!("X.{}", i + 1)).chain(r.display_values()).collect())
        .collect();
    Ok(Output { json: table.to_json(), table: Some((headers, rows)), text: Some(table.to_text()) })
}

fn cmd_matrix(gp: &GroupProfile) -> CliResult<Output> {
    let types = types_of(gp)?;
    let table = character_table(types.group())?;
    let m = conductor_matrix(&types, &table)?;
    let mut doc = m.to_json();
    doc["group"] = json!(types.group().name());
    doc["profile"] = json!(types.profile().elements());
    let mut headers = vec!["type".to_string()];
    headers.extend((0..m.size()).map(|j| format!("psi_{j}")));
    let mut rows: Vec<Vec<String>> = m
        .entries
        .iter()
        .zip(&m.type_ids)
        .map(|(r, id)| std::iter::once(id.to_string()).chain(rationals(r)).collect())
        .collect();
    rows.push(vec!["determinant".into(), format_rational(&m.determinant)]);
    Ok(Output { json: doc, table: Some((headers, rows)), text: None })
}

fn cmd_conductor(a: &ConductorArgs) -> CliResult<Output> {
    let types = types_of(&a.gp)?;
    let g = types.group().clone();
    let datum = match (&a.r#type, &a.datum) {
        (Some(id), None) => make_tame_datum(&types, *id)?,
        (None, Some(d)) => {
            let text = if std::path::Path::new(d).is_file() {
                std::fs::read_to_string(d).map_err(|e| usage(format!("{d}: {e}")))?
            } else {
                d.clone()
            };
            let spec: DatumSpec = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            spec.build(&g)?
        }
        _ => return Err(usage("give exactly one of --type or --datum")),
    };
    let table = character_table(&g)?;
    let chars = galois_orbit_characters(&table, types.profile())?;
    let orbits = galois_orbits(&table, types.profile())?;
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    for (j, psi) in chars.iter().enumerate() {
        let fine = fine_conductor(&datum, psi)?;
        let artin = artin_conductor(&datum, psi)?;
        let diff = fine_minus_artin(&datum, psi)?;
        let wy = if datum.is_tame() { Some(format_rational(&wy_weight(&datum, psi)?)) } else { None };
        entries.push(json!({
            "character": j,
            "orbit": orbits[j],
            "fine": format_rational(&fine),
            "artin": format_rational(&artin),
            "fine_minus_artin": format_rational(&diff),
            "wood_yasuda": wy,
        }));
        rows.push(vec![
            j.to_string(),
            join(&orbits[j]),
            format_rational(&fine),
            format_rational(&artin),
            format_rational(&diff),
            wy.unwrap_or_default(),
        ]);
    }
    let doc = json!({ "group": g.name(), "datum": datum.to_json(), "conductors": entries });
    Ok(Output::json(doc).with_table(vec!["character", "orbit", "fine", "artin", "fine_minus_artin", "wood_yasuda"], rows))
}

fn cmd_mass(a: &MassArgs) -> CliResult<Output> {
    let types = types_of(&a.gp)?;
    let masses = (0..types.len()).map(|i| local_mass(&types, i, a.prime)).collect::<Result<Vec<_>, _>>()?;
    let mut doc = json!({
        "group": types.group().name(),
        "prime": a.prime,
        "unramified": "1",
        "masses": rationals(&masses),
    });
    let mut headers = vec!["type", "mass"];
    let mut rows: Vec<Vec<String>> =
        masses.iter().enumerate().map(|(i, m)| vec![i.to_string(), format_rational(m)]).collect();
    if a.brute_check {
        let brute = local_mass_bruteforce(&types, a.prime)?;
        doc["bruteforce"] = json!(rationals(&brute.by_type));
        headers.push("bruteforce");
        for (row, b) in rows.iter_mut().zip(&brute.by_type) {
            row.push(format_rational(b));
        }
        if brute.by_type != masses || brute.unramified != int(1) {
            let witness = doc.clone();
            return Err(Failure::Violation("local mass formula disagrees with enumeration".into(), witness));
        }
    }
    Ok(Output::json(doc).with_table(headers, rows))
}

fn parse_range(s: &str) -> CliResult<(u64, u64)> {
    let (a, b) = s
        .split_once("..")
        .or_else(|| s.split_once(','))
        .ok_or_else(|| usage(format!("prime range `{s}` must be a..b")))?;
    let a: u64 = a.trim().parse().map_err(|_| usage(format!("invalid range start `{a}`")))?;
    let b: u64 = b.trim().parse().map_err(|_| usage(format!("invalid range end `{b}`")))?;
    if a > b || b > 10_000_000 {
        return Err(usage("prime range must satisfy a ≤ b ≤ 10^7"));
    }
    Ok((a, b))
}

fn factor_rows(factors: &[LocalFactor]) -> Vec<Vec<String>> {
    factors
        .iter()
        .map(|f| {
            std::iter::once(f.prime.to_string())
                .chain(std::iter::once(format_rational(&f.b)))
                .chain(rationals(&f.c))
                .collect()
        })
        .collect()
}

fn factor_table(m: usize) -> Vec<String> {
    let mut h = vec!["prime".to_string(), "b".to_string()];
    h.extend((0..m).map(|i| format!("c_{i}")));
    h
}

fn cmd_factor(a: &FactorArgs) -> CliResult<Output> {
    let types = types_of(&a.gp)?;
    let (lo, hi) = parse_range(&a.prime_range)?;
    let order = types.group().order() as u64;
    let n = types.profile().modulus();
    let mut factors = Vec::new();
    let mut skipped = Vec::new();
    for q in ramification::arith::primes_up_to(hi).into_iter().filter(|&q| q >= lo) {
        if order.is_multiple_of(q) || !types.profile().contains((q % n) as i64) {
            skipped.push(q);
        } else {
            factors.push(local_factor(&types, q)?);
        }
    }
    let doc = json!({ "group": types.group().name(), "factors": factors, "skipped": skipped });
    Ok(Output { json: doc, table: Some((factor_table(types.len()), factor_rows(&factors))), text: None })
}

fn count_doc(types: &RamificationTypes, bounds: &[u64], value: &Rational, extra: Value) -> Value {
    let volume: f64 = bounds.iter().map(|&x| x as f64).product();
    let mut doc = json!({
        "group": types.group().name(),
        "bounds": bounds,
        "value": format_rational(value),
        "value_over_volume": ramification::cyclotomic::rational_to_f64(value) / volume,
    });
    if let (Value::Object(d), Value::Object(e)) = (&mut doc, extra) {
        d.extend(e);
    }
    doc
}

fn cmd_count(a: &CountArgs) -> CliResult<Output> {
    let types = rational_types(&a.group)?;
    let bounds = parse_bounds(&a.x)?;
    let pins = parse_pins(&a.pins)?;
    let r = abelian_count(&types, &bounds, &pins, a.exclude_wild)?;
    let pins_json: Vec<Value> = pins.iter().map(|(i, v)| json!({"type": i, "value": v})).collect();
    let free: Vec<u64> =
        bounds.iter().enumerate().filter(|(i, _)| !pins.iter().any(|p| p.0 == *i)).map(|(_, &x)| x).collect();
    let doc = count_doc(
        &types,
        &free,
        &r.value,
        json!({ "bounds": bounds, "pins": pins_json, "exclude_wild": a.exclude_wild, "prime_bound": r.prime_bound }),
    );
    Ok(Output::json(doc))
}

fn cmd_constant(a: &ConstantArgs) -> CliResult<Output> {
    let types = types_of(&a.gp)?;
    let wild_mode: WildMode = a.wild_mode.parse().map_err(|e: Error| usage(e.to_string()))?;
    if a.tolerance.is_some_and(|t| !(t > 0.0)) {
        return Err(usage("tolerance must be positive"));
    }
    let options = ConstantOptions {
        prime_bound: a.prime_bound,
        lseries_terms: a.lseries_terms,
        wild_mode,
        tolerance: a.tolerance,
    };
    let pins = parse_pins(&a.pins)?;
    let est = predicted_slice_constant(&types, &pins, &options)?;
    let mut doc = serde_json::to_value(&est).map_err(|e| Error::Parse(e.to_string()))?;
    doc["group"] = json!(types.group().name());
    Ok(Output::json(doc))
}

fn series(a: &SeriesArgs, max_prime: u64) -> CliResult<(RamificationTypes, Vec<LocalFactor>)> {
    let types = rational_types(&a.group)?;
    let kind = a.series.unwrap_or(if types.group().is_abelian() { Series::Abelian } else { Series::Heuristic });
    let order = types.group().order() as u64;
    let factors = match kind {
        Series::Abelian => abelian_factors(&types, max_prime, a.exclude_wild)?,
        Series::Heuristic => ramification::arith::primes_up_to(max_prime)
            .into_iter()
            .filter(|q| !order.is_multiple_of(*q))
            .map(|q| local_factor(&types, q))
            .collect::<Result<_, _>>()?,
    };
    Ok((types, factors))
}

fn cmd_shell(a: &ShellArgs) -> CliResult<Output> {
    let bounds = parse_bounds(&a.x)?;
    let delta = parse_q(&a.delta)?;
    let (types, factors) = series(&a.series, bounds.iter().copied().max().unwrap_or(1))?;
    if bounds.len() != types.len() {
        return Err(usage(format!("expected {} bounds", types.len())));
    }
    let prefactor = rational(1, types.group().order() as i64);
    let v = shell_sum(&factors, &bounds, &delta, &prefactor)?;
    Ok(Output::json(json!({
        "group": types.group().name(),
        "bounds": bounds,
        "delta": format_rational(&delta),
        "value": format_rational(&v),
    })))
}

fn cmd_region(a: &RegionArgs) -> CliResult<Output> {
    let h: Vec<Rational> = a.h.split(',').map(parse_q).collect::<CliResult<_>>()?;
    let bound = parse_q(&a.bound)?;
    let hmin = h.iter().min().cloned().unwrap_or_else(|| int(1));
    let x = ramification::cyclotomic::rational_to_f64(&bound).max(1.0);
    let hmin_f = ramification::cyclotomic::rational_to_f64(&hmin);
    if !(hmin_f > 0.0) {
        return Err(usage("weights must be positive"));
    }
    let max_prime = x.powf(1.0 / hmin_f).floor() as u64 + 1;
    if max_prime > 100_000_000 {
        return Err(usage("region too large"));
    }
    let (types, factors) = series(&a.series, max_prime)?;
    if h.len() != types.len() {
        return Err(usage(format!("expected {} weights", types.len())));
    }
    let prefactor = rational(1, types.group().order() as i64);
    let v = region_sum_product(&factors, &h, &bound, &prefactor)?;
    Ok(Output::json(json!({
        "group": types.group().name(),
        "h": rationals(&h),
        "bound": format_rational(&bound),
        "value": format_rational(&v),
    })))
}

fn cmd_verify(a: &VerifyArgs) -> CliResult<Output> {
    if a.corpus != "default" {
        return Err(usage(format!("unknown corpus `{}`", a.corpus)));
    }
    let report = run_verify(&default_corpus());
    let doc = serde_json::to_value(&report).map_err(|e| Error::Parse(e.to_string()))?;
    if !report.passed() {
        let bad: Vec<Value> = report
            .violations()
            .map(|o| json!({"invariant": o.invariant, "group": o.group, "profile": o.profile, "witness": o.witness}))
            .collect();
        return Err(Failure::Violation("verification corpus has violations".into(), json!(bad)));
    }
    let rows = report
        .outcomes
        .iter()
        .map(|o| {
            vec![
                o.invariant.to_string(),
                o.group.clone(),
                o.profile.clone(),
                o.cases.to_string(),
                o.passed.to_string(),
                o.witness.clone().unwrap_or_default(),
            ]
        })
        .collect();
    Ok(Output::json(doc).with_table(vec!["invariant", "group", "profile", "cases", "passed", "witness"], rows))
}

/// `(path, value)` leaves of a JSON document, for CSV output of documents
/// without a natural table.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<Vec<String>>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        Value::String(s) => out.push(vec![prefix.to_string(), s.clone()]),
        Value::Null => out.push(vec![prefix.to_string(), String::new()]),
        other => out.push(vec![prefix.to_string(), other.to_string()]),
    }
}

fn render(out: Output, format: Format) -> String {
    let table = || {
        out.table.clone().unwrap_or_else(|| {
            let mut rows = Vec::new();
            flatten("", &out.json, &mut rows);
            (vec!["key".to_string(), "value".to_string()], rows)
        })
    };
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&out.json).expect("JSON serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let (headers, rows) = table();
            let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
            w.write_record(&headers).expect("in-memory write");
            for r in &rows {
                w.write_record(r).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
        }
        Format::Text => {
            if let Some(t) = &out.text {
                return format!("{t}\n");
            }
            let (headers, rows) = table();
            let cols = headers.len().max(rows.iter().map(Vec::len).max().unwrap_or(0));
            let width = |j: usize| {
                std::iter::once(&headers)
                    .chain(&rows)
                    .filter_map(|r| r.get(j))
                    .map(|s| s.chars().count())
                    .max()
                    .unwrap_or(0)
            };
            let widths: Vec<usize> = (0..cols).map(width).collect();
            let line = |r: &Vec<String>| {
                r.iter()
                    .enumerate()
                    .map(|(j, s)| format!("{s:<w$}", w = widths[j]))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let mut s = String::new();
            for r in std::iter::once(&headers).chain(&rows) {
                s.push_str(&line(r));
                s.push('\n');
            }
            s
        }
    }
}

fn run(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Types(a) => cmd_types(a),
        Command::Chartable(a) => cmd_chartable(a),
        Command::Matrix(a) => cmd_matrix(a),
        Command::Conductor(a) => cmd_conductor(a),
        Command::Mass(a) => cmd_mass(a),
        Command::Factor(a) => cmd_factor(a),
        Command::Count(a) => cmd_count(a),
        Command::Constant(a) => cmd_constant(a),
        Command::Shell(a) => cmd_shell(a),
        Command::Region(a) => cmd_region(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn fail(kind: &str, message: &str, detail: Value, code: u8) -> ExitCode {
    let doc = json!({ "error": kind, "message": message, "detail": detail, "exit_code": code });
    eprintln!("{doc}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            return fail("usage", e.to_string().trim(), Value::Null, 2);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let text = render(out, cli.format);
            let written = match &cli.output {
                Some(p) => std::fs::write(p, text.as_bytes()),
                None => std::io::stdout().write_all(text.as_bytes()),
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail("io", &e.to_string(), Value::Null, 1),
            }
        }
        Err(Failure::Usage(m)) => fail("usage", &m, Value::Null, 2),
        Err(Failure::Compute(e)) => fail("computation", &e.to_string(), Value::Null, 1),
        Err(Failure::Violation(m, w)) => fail("theorem-violation", &m, w, 3),
    }
}
