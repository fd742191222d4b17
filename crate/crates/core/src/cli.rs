//! Command-line front end: JSON inputs, dispatch, and reports.
//!
//! Every run produces a [`RunReport`]; `--json` prints it, otherwise a text
//! rendering is printed. Exit codes: 0 for success or a true verdict, 1 for
//! a false verdict, 2 for unreadable input, 3 for mathematically invalid
//! input.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cone::fan::Fan;
use crate::cone::Cone;
use crate::error::Error;
use crate::etale::{self, check_etale, finite_index_spec_bijection, finite_index_witness, is_unramified};
use crate::lattice::AbelianGroupStructure;
use crate::monoid::{AffineMonoid, Ambient, MonoidHom};
use crate::pointed::{is_flat_bruteforce, PointedModule};
use crate::scheme::{base_change_presentation, cohomology_demo, SubgroupPair};
use crate::valuation::{
    extend_valuation, homs_to_cplus, valuation_correspondence, valuations, ExtendedValuation, FiniteExtension,
    ValuationHom,
};
use crate::zeta::{point_count_oracle, zeta_exponents, zeta_factored, zeta_polynomial_fan};

pub const TRUNCATION_ENV: &str = "MONOSCHEME_TRUNCATION_HEIGHT";
pub const DEFAULT_TRUNCATION_HEIGHT: usize = 16;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Zeta,
    Spec,
    Check,
    Valuations,
    Extend,
    Lemma42,
    Basechange,
    Cohomology,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Zeta => "zeta",
            Command::Spec => "spec",
            Command::Check => "check",
            Command::Valuations => "valuations",
            Command::Extend => "extend",
            Command::Lemma42 => "lemma42",
            Command::Basechange => "basechange",
            Command::Cohomology => "cohomology",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Flat,
    Local,
    Unramified,
    Etale,
    Covering,
}

#[derive(Debug, Parser)]
#[command(name = "monoscheme", version, about = "Monoid schemes, fans and zeta polynomials")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// JSON input file
    pub file: PathBuf,
    /// print the report as JSON
    #[arg(long)]
    pub json: bool,
    /// search bound for exponents, torsion and finite-index witnesses
    #[arg(long, default_value_t = 12)]
    pub bound: u64,
    /// prime powers for the point-count comparison of `zeta`
    #[arg(long, value_delimiter = ',', default_values_t = vec![2u64, 3, 4, 5])]
    pub q: Vec<u64>,
    /// predicate for `check`; `etale` for homomorphisms and `flat` for
    /// modules when omitted
    #[arg(long, value_enum)]
    pub kind: Option<CheckKind>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Ok,
    True,
    False,
    ParseError,
    SemanticError,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Ok | Verdict::True => 0,
            Verdict::False => 1,
            Verdict::ParseError => 2,
            Verdict::SemanticError => 3,
        }
    }

    fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Ok => "ok",
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::ParseError => "parse error",
            Verdict::SemanticError => "semantic error",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    /// sha256 of the input file, hex
    pub input_digest: String,
    pub results: Value,
    pub warnings: Vec<String>,
    pub verdict: Verdict,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(s: &str) -> serde_json::Result<RunReport> {
        serde_json::from_str(s)
    }
}

/// A report together with its text rendering.
#[derive(Clone, Debug)]
pub struct Output {
    pub report: RunReport,
    pub text: Vec<String>,
}

impl Output {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for w in &self.report.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        for line in &self.text {
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&format!("verdict: {}\n", self.report.verdict));
        out
    }
}

/// Integer that round-trips through JSON without loss.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serde_json::Number::from_str(&self.0.to_string()).expect("integers are JSON numbers").serialize(s)
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<JsonInt, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        BigInt::from_str(&n.to_string())
            .map(JsonInt)
            .map_err(|_| D::Error::custom(format!("expected an integer, found {n}")))
    }
}

fn big(v: &[JsonInt]) -> Vec<BigInt> {
    v.iter().map(|x| x.0.clone()).collect()
}

fn int(x: &BigInt) -> Value {
    serde_json::to_value(JsonInt(x.clone())).expect("integers serialize")
}

fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidSpec {
    pub free_rank: usize,
    #[serde(default)]
    pub torsion: Vec<JsonInt>,
    pub generators: Vec<Vec<JsonInt>>,
}

impl MonoidSpec {
    pub fn build(&self) -> crate::Result<AffineMonoid> {
        let ambient = Ambient::new(self.free_rank, big(&self.torsion))?;
        AffineMonoid::new(ambient, self.generators.iter().map(|g| big(g)).collect())
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanSpec {
    pub rank: usize,
    pub cones: Vec<Vec<Vec<JsonInt>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomSpec {
    pub source: MonoidSpec,
    pub target: MonoidSpec,
    pub images: Vec<Vec<JsonInt>>,
}

/// `actions` maps a generator index to the images of the carrier labels.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub carrier: Vec<String>,
    pub basepoint: String,
    pub actions: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    pub monoid: Option<MonoidSpec>,
    pub module: ModuleSpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpec {
    pub sub: MonoidSpec,
    #[serde(rename = "super")]
    pub sup: MonoidSpec,
    /// values on the generators of `sub`; all valuations of `sub` if absent
    pub valuation: Option<Vec<JsonInt>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub monoid: MonoidSpec,
    pub submonoid: MonoidSpec,
    pub witness: Option<u64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupSpec {
    pub free_rank: usize,
    #[serde(default)]
    pub torsion: Vec<JsonInt>,
    pub a_generators: Vec<Vec<JsonInt>>,
    pub b_generators: Option<Vec<Vec<JsonInt>>>,
}

#[derive(Debug)]
pub enum Failure {
    Parse(String),
    Semantic(String, Vec<String>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let details = match &e {
            Error::InvalidFan(v) => v.iter().map(ToString::to_string).collect(),
            _ => Vec::new(),
        };
        Failure::Semantic(e.to_string(), details)
    }
}

fn parse<T: for<'de> Deserialize<'de>>(bytes: &[u8]) -> Result<T, Failure> {
    serde_json::from_slice(bytes).map_err(|e| Failure::Parse(format!("invalid input: {e}")))
}

struct Done {
    results: Value,
    text: Vec<String>,
    warnings: Vec<String>,
    verdict: Verdict,
}

pub fn truncation_height_from_env() -> Result<usize, String> {
    match std::env::var(TRUNCATION_ENV) {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("{TRUNCATION_ENV} must be a nonnegative integer, found {s:?}")),
        Err(_) => Ok(DEFAULT_TRUNCATION_HEIGHT),
    }
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Reads the input file and runs the command.
pub fn execute(args: &Args, truncation_height: Result<usize, String>) -> Output {
    let bytes = std::fs::read(&args.file);
    let input_digest = bytes.as_deref().map(digest).unwrap_or_default();
    let done = match (bytes, truncation_height) {
        (Err(e), _) => Err(Failure::Parse(format!("cannot read {}: {e}", args.file.display()))),
        (_, Err(e)) => Err(Failure::Parse(e)),
        (Ok(b), Ok(h)) => dispatch(args, &b, h),
    };
    finish(args.command, input_digest, done)
}

/// Runs a command on input bytes already in memory.
pub fn execute_bytes(args: &Args, bytes: &[u8], truncation_height: usize) -> Output {
    finish(args.command, digest(bytes), dispatch(args, bytes, truncation_height))
}

fn finish(command: Command, input_digest: String, done: Result<Done, Failure>) -> Output {
    let command = command.name().to_string();
    match done {
        Ok(d) => Output {
            report: RunReport { command, input_digest, results: d.results, warnings: d.warnings, verdict: d.verdict },
            text: d.text,
        },
        Err(Failure::Parse(msg)) => Output {
            report: RunReport {
                command,
                input_digest,
                results: json!({ "error": msg }),
                warnings: Vec::new(),
                verdict: Verdict::ParseError,
            },
            text: vec![format!("error: {msg}")],
        },
        Err(Failure::Semantic(msg, details)) => {
            let mut text = vec![format!("error: {msg}")];
            text.extend(details.iter().map(|d| format!("  {d}")));
            Output {
                report: RunReport {
                    command,
                    input_digest,
                    results: json!({ "error": msg, "details": details }),
                    warnings: Vec::new(),
                    verdict: Verdict::SemanticError,
                },
                text,
            }
        }
    }
}

fn dispatch(args: &Args, bytes: &[u8], height: usize) -> Result<Done, Failure> {
    match args.command {
        Command::Zeta => cmd_zeta(parse(bytes)?, &args.q),
        Command::Spec => cmd_spec(parse(bytes)?),
        Command::Check => cmd_check(args.kind, parse(bytes)?, args.bound, height),
        Command::Valuations => cmd_valuations(parse(bytes)?),
        Command::Extend => cmd_extend(parse(bytes)?),
        Command::Lemma42 => cmd_lemma42(parse(bytes)?, args.bound),
        Command::Basechange => cmd_basechange(parse(bytes)?),
        Command::Cohomology => cmd_cohomology(parse(bytes)?),
    }
}

fn group_json(g: &AbelianGroupStructure) -> Value {
    json!({ "rank": g.rank, "torsion": ints(&g.torsion) })
}

fn group_text(g: &AbelianGroupStructure) -> String {
    let mut parts: Vec<String> = Vec::new();
    if g.rank > 0 {
        parts.push(if g.rank == 1 { "Z".into() } else { format!("Z^{}", g.rank) });
    }
    parts.extend(g.torsion.iter().map(|d| format!("Z/{d}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn index_list(s: impl IntoIterator<Item = usize>) -> String {
    let v: Vec<String> = s.into_iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", v.join(","))
}

fn cmd_zeta(spec: FanSpec, qs: &[u64]) -> Result<Done, Failure> {
    let n = spec.rank;
    let cones = spec
        .cones
        .iter()
        .map(|rays| Cone::new(n, rays.iter().map(|r| big(r)).collect()))
        .collect::<crate::Result<Vec<_>>>()?;
    let (fan, added) = Fan::closed_under_faces(n, cones);
    let mut warnings = Vec::new();
    if added > 0 {
        warnings.push("fan closed under faces automatically".to_string());
    }
    fan.validate()?;
    let f = fan.f_vector()?;
    let poly = zeta_polynomial_fan(&fan)?;
    let c = zeta_exponents(&fan)?;
    let zeta = zeta_factored(&fan)?;
    let matches = (0..=n).all(|j| poly.coefficient(j) == c.0[j]);
    let mut oracle = Vec::new();
    let mut text = vec![
        format!("rank: {n}"),
        format!("f-vector: {f}"),
        format!("N(x) = {poly}"),
        format!("c = ({})", c.0.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")),
        format!("zeta(s) = {zeta}"),
    ];
    let mut all_agree = true;
    for &q in qs {
        let qb = BigInt::from(q);
        let expected = poly.eval(&qb);
        let counted = point_count_oracle(&fan, &qb)?;
        let agree = expected == counted;
        all_agree &= agree;
        text.push(format!("q = {q}: N(q) = {expected}, orbit count = {counted}{}", if agree { "" } else { " MISMATCH" }));
        oracle.push(json!({ "q": q, "polynomial": int(&expected), "orbit_count": int(&counted), "agree": agree }));
    }
    text.push(if all_agree { "oracle OK".into() } else { "oracle MISMATCH".into() });
    let results = json!({
        "rank": n,
        "cones": fan.cones().len(),
        "f_vector": f.0,
        "polynomial": poly.to_string(),
        "polynomial_coefficients": ints(poly.coeffs()),
        "exponents": ints(&c.0),
        "exponents_match_coefficients": matches,
        "zeta": zeta.render(),
        "oracle": oracle,
        "oracle_ok": all_agree,
    });
    Ok(Done { results, text, warnings, verdict: Verdict::from_bool(all_agree && matches) })
}

fn cmd_spec(spec: MonoidSpec) -> Result<Done, Failure> {
    let a = spec.build()?;
    let spectrum = a.primes();
    let units = a.units();
    let group = a.quotient_group();
    let mut primes = Vec::new();
    let mut text = vec![format!("monoid: {a}"), format!("primes: {}", spectrum.len())];
    for (i, p) in spectrum.primes().iter().enumerate() {
        let local = a.localize(p)?;
        let ideal = spectrum.ideal_generators(i);
        text.push(format!(
            "  p{i}: ideal generators {}, face {}, face dim {}, localization {local}",
            index_list(ideal.iter().copied()),
            index_list(p.face_generators.iter().copied()),
            p.face_dim
        ));
        primes.push(json!({
            "ideal_generators": ideal,
            "face_generators": p.face_generators,
            "face_dim": p.face_dim,
            "localization": local.generators().iter().map(|g| ints(g)).collect::<Vec<_>>(),
        }));
    }
    let order = spectrum.order();
    text.push(format!(
        "inclusions: {}",
        order.iter().map(|(i, j)| format!("p{i} < p{j}")).collect::<Vec<_>>().join(", ")
    ));
    text.push(format!(
        "units: generators {}, group {}",
        index_list(units.generators.iter().copied()),
        group_text(&units.group)
    ));
    text.push(format!("group completion: {}", group_text(&group)));
    text.push(format!("components: {}", a.component_count()));
    let results = json!({
        "primes": primes,
        "inclusions": order,
        "units": { "generators": units.generators, "group": group_json(&units.group) },
        "quotient_group": group_json(&group),
        "component_count": int(&a.component_count()),
    });
    Ok(Done { results, text, warnings: Vec::new(), verdict: Verdict::Ok })
}

fn build_hom(spec: &HomSpec) -> crate::Result<MonoidHom> {
    MonoidHom::new(spec.source.build()?, spec.target.build()?, spec.images.iter().map(|g| big(g)).collect())
}

fn cmd_check(kind: Option<CheckKind>, input: Value, bound: u64, height: usize) -> Result<Done, Failure> {
    let is_module = input.get("carrier").is_some() || input.get("module").is_some();
    if is_module {
        if kind.is_some_and(|k| k != CheckKind::Flat) {
            return Err(Failure::Parse("module inputs only support --kind flat".into()));
        }
        let file: ModuleFile = if input.get("carrier").is_some() {
            ModuleFile { monoid: None, module: parse_value(input)? }
        } else {
            parse_value(input)?
        };
        return check_module(file, bound);
    }
    let kind = kind.unwrap_or(CheckKind::Etale);
    let spec: HomSpec = parse_value(input)?;
    let f = build_hom(&spec)?;
    let mut warnings = Vec::new();
    let not_local = |warnings: Vec<String>| Done {
        results: json!({ "local": false, "reasons": ["φ is not local"] }),
        text: vec!["φ is not local".into()],
        warnings,
        verdict: Verdict::False,
    };
    let done = match kind {
        CheckKind::Local => {
            let local = etale::is_local(&f);
            Done {
                results: json!({ "local": local }),
                text: vec![format!("local: {local}")],
                warnings,
                verdict: Verdict::from_bool(local),
            }
        }
        CheckKind::Flat => {
            warnings.push(format!("truncation height = {height}"));
            let r = etale::is_flat(&f, height);
            Done {
                results: json!({ "flat": r.flat, "truncation_height": r.truncation_height, "carrier_size": r.carrier_size }),
                text: vec![format!("flat: {} ({} elements of B examined)", r.flat, r.carrier_size)],
                warnings,
                verdict: Verdict::from_bool(r.flat),
            }
        }
        CheckKind::Unramified => match is_unramified(&f, bound) {
            Err(Error::NotLocal) => not_local(warnings),
            Err(e) => return Err(e.into()),
            Ok(r) => Done {
                results: json!({
                    "unramified": r.unramified,
                    "ideal_generated": r.ideal_generated,
                    "units_injective": r.units_injective,
                    "finite": r.finite,
                    "strictly_algebraic": r.strictly_algebraic,
                    "reasons": r.reasons,
                }),
                text: vec![format!("unramified: {}", r.unramified), format!("  {}", r.summary())],
                warnings,
                verdict: Verdict::from_bool(r.unramified),
            },
        },
        CheckKind::Etale | CheckKind::Covering => {
            warnings.push(format!("truncation height = {height}"));
            match check_etale(&f, bound, height) {
                Err(Error::NotLocal) => not_local(warnings),
                Err(e) => return Err(e.into()),
                Ok(r) => {
                    let verdict = if kind == CheckKind::Etale { r.etale } else { r.covering };
                    let mut text = vec![
                        format!("flat: {}", r.flat.flat),
                        format!("unramified: {}", r.unramified.unramified),
                        format!("finite: {}", r.finite.finite),
                        format!("etale: {}", r.etale),
                        format!("covering: {}", r.covering),
                    ];
                    text.extend(r.reasons.iter().map(|s| format!("reason: {s}")));
                    Done {
                        results: json!({
                            "flat": r.flat.flat,
                            "unramified": r.unramified.unramified,
                            "finite": r.finite.finite,
                            "etale": r.etale,
                            "covering": r.covering,
                            "reasons": r.reasons,
                        }),
                        text,
                        warnings,
                        verdict: Verdict::from_bool(verdict),
                    }
                }
            }
        }
    };
    Ok(done)
}

fn parse_value<T: for<'de> Deserialize<'de>>(v: Value) -> Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| Failure::Parse(format!("invalid input: {e}")))
}

/// Without an explicit monoid, the actions are read as the generators of a
/// free commutative monoid.
fn check_module(file: ModuleFile, bound: u64) -> Result<Done, Failure> {
    let spec = file.module;
    let k = spec.actions.len();
    let base = match &file.monoid {
        Some(m) => m.build()?,
        None => AffineMonoid::new(
            Ambient::free(k),
            (0..k)
                .map(|i| (0..k).map(|j| BigInt::from(u8::from(i == j))).collect())
                .collect(),
        )?,
    };
    let index: BTreeMap<&str, usize> = spec.carrier.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let lookup = |l: &str| {
        index.get(l).copied().ok_or_else(|| Failure::Semantic(format!("label {l:?} is not in the carrier"), Vec::new()))
    };
    let mut actions = vec![Vec::new(); k];
    for (key, images) in &spec.actions {
        let g: usize = key
            .parse()
            .ok()
            .filter(|&g| g < k)
            .ok_or_else(|| Failure::Parse(format!("action key {key:?} is not a generator index below {k}")))?;
        actions[g] = images.iter().map(|l| lookup(l)).collect::<Result<Vec<_>, _>>()?;
    }
    let module = PointedModule::new(spec.carrier.clone(), lookup(&spec.basepoint)?, actions)?;
    module.validate(&base)?;
    let flat = module.is_flat();
    let size = usize::try_from(bound.min(4)).expect("small");
    let brute = is_flat_bruteforce(&module, &base, size)?;
    let mut text = vec![
        format!("flat (every generator acts injectively): {flat}"),
        format!(
            "injection test up to size {size}: {} ({} modules, {} injections)",
            brute.flat, brute.modules_checked, brute.injections_checked
        ),
    ];
    if let Some(w) = &brute.witness {
        text.push(format!("  witness: tensoring an injection of size {} collapses it", w.sup.len()));
    }
    let results = json!({
        "flat": flat,
        "bruteforce": {
            "flat": brute.flat,
            "size_bound": size,
            "modules_checked": brute.modules_checked,
            "injections_checked": brute.injections_checked,
        },
        "agree": flat == brute.flat,
    });
    Ok(Done { results, text, warnings: Vec::new(), verdict: Verdict::from_bool(flat) })
}

fn valuation_json(v: &ValuationHom) -> Value {
    ints(&v.values)
}

fn cmd_valuations(spec: MonoidSpec) -> Result<Done, Failure> {
    let a = spec.build()?;
    let homs = homs_to_cplus(&a);
    let vals = valuations(&a);
    let mut text = vec![format!("monoid: {a}"), format!("Hom(A, C+) Hilbert basis: {}", homs.hilbert_basis.len())];
    text.extend(homs.hilbert_basis.iter().map(|h| format!("  {h}")));
    text.push(format!("valuations: {}", vals.len()));
    text.extend(vals.iter().map(|v| format!("  {v}")));
    let results = json!({
        "hom_hilbert_basis": homs.hilbert_basis.iter().map(valuation_json).collect::<Vec<_>>(),
        "valuations": vals.iter().map(valuation_json).collect::<Vec<_>>(),
    });
    Ok(Done { results, text, warnings: Vec::new(), verdict: Verdict::Ok })
}

fn extension_json(v: &ValuationHom, e: &ExtendedValuation) -> Value {
    json!({
        "v": valuation_json(v),
        "w": valuation_json(&e.w),
        "k": int(&e.k),
        "steps": e.steps.iter().map(|s| json!({
            "order": int(&s.order),
            "b0": ints(&s.b0),
            "n": int(&s.n),
            "k": int(&s.k),
            "e": int(&s.e),
        })).collect::<Vec<_>>(),
        "is_hom": e.is_hom,
        "restricts": e.restricts,
        "is_valuation": e.is_valuation,
    })
}

fn cmd_extend(spec: ExtensionSpec) -> Result<Done, Failure> {
    let ext = FiniteExtension::new(spec.sub.build()?, spec.sup.build()?)?;
    let inv = ext.quotient_invariants().to_vec();
    let mut text = vec![
        format!("A = {}", ext.sub()),
        format!("B = {}", ext.sup()),
        format!("gp(B)/gp(A) = {}", group_text(&AbelianGroupStructure { rank: 0, torsion: inv.clone() })),
    ];
    let (pairs, bijective) = match &spec.valuation {
        Some(v) => {
            let v = ValuationHom::new(big(v));
            let e = extend_valuation(&v, &ext)?;
            (vec![(v, e)], None)
        }
        None => {
            let c = valuation_correspondence(&ext)?;
            (c.pairs, Some(c.bijective))
        }
    };
    let mut ok = true;
    for (v, e) in &pairs {
        ok &= e.is_hom && e.restricts && e.is_valuation;
        text.push(format!(
            "v = {v} -> w = {}, k = {}{}{}",
            e.w,
            e.k,
            if e.restricts { "" } else { ", w|A != v^k" },
            if e.is_valuation { "" } else { ", w is not minimal" }
        ));
        for s in &e.steps {
            text.push(format!("  step of order {}: n = {}, k = {}, w(b0) = t^{}", s.order, s.n, s.k, s.e));
        }
    }
    if let Some(b) = bijective {
        ok &= b;
        text.push(format!("V(A) -> V(B) bijective: {b}"));
    }
    let results = json!({
        "quotient": ints(&inv),
        "extensions": pairs.iter().map(|(v, e)| extension_json(v, e)).collect::<Vec<_>>(),
        "bijective": bijective,
    });
    Ok(Done { results, text, warnings: Vec::new(), verdict: Verdict::from_bool(ok) })
}

fn cmd_lemma42(spec: PairSpec, bound: u64) -> Result<Done, Failure> {
    let a = spec.monoid.build()?;
    let b = spec.submonoid.build()?;
    let mut warnings = Vec::new();
    let n = match spec.witness {
        Some(n) => n,
        None => {
            let n = finite_index_witness(&b, &a, bound)?.ok_or_else(|| {
                Failure::from(Error::InvalidWitness(format!("no N <= {bound} with N A ⊆ B")))
            })?;
            warnings.push(format!("witness N = {n} found by search"));
            n
        }
    };
    let r = finite_index_spec_bijection(&a, &b, n)?;
    let mut text = vec![format!("A = {a}"), format!("B = {b}"), format!("N = {n}")];
    for (i, j) in r.pairs() {
        text.push(format!("  p{i} of A -> q{j} of B -> p{} of A", r.inverse[j]));
    }
    text.push(format!("bijective: {}", r.bijective));
    let results = json!({ "witness": n, "psi": r.psi, "inverse": r.inverse, "bijective": r.bijective });
    Ok(Done { results, text, warnings, verdict: Verdict::from_bool(r.bijective) })
}

fn cmd_basechange(spec: MonoidSpec) -> Result<Done, Failure> {
    let a = spec.build()?;
    let p = base_change_presentation(&a);
    let text: Vec<String> = p.to_string().lines().map(String::from).collect();
    let results = json!({
        "variables": p.variables,
        "relations": p.relations.iter().map(|r| json!({
            "lhs": ints(&r.lhs),
            "rhs": ints(&r.rhs),
            "text": r.to_string(),
        })).collect::<Vec<_>>(),
        "label": p.label,
    });
    Ok(Done { results, text, warnings: Vec::new(), verdict: Verdict::Ok })
}

fn cmd_cohomology(spec: SubgroupSpec) -> Result<Done, Failure> {
    let pair = SubgroupPair {
        ambient: Ambient::new(spec.free_rank, big(&spec.torsion))?,
        a_generators: spec.a_generators.iter().map(|g| big(g)).collect(),
        b_generators: spec.b_generators.as_ref().map(|b| b.iter().map(|g| big(g)).collect()),
    };
    let r = cohomology_demo(&pair)?;
    let c = group_text(&AbelianGroupStructure { rank: 0, torsion: r.c_invariants.clone() });
    let names = ["A", "B", "C x C", "(C x C)/diagonal"];
    let mut text = vec![format!("C = B/A = {c}"), format!("0 -> A -> B -> {c} x {c} -> {c} -> 0")];
    for (name, e) in names.iter().zip(r.exact_at) {
        text.push(format!("  exact at {name}: {e}"));
    }
    text.push(format!("flip trivial on global sections: {}", r.flip_trivial_on_sections));
    text.push(format!("flip on H^1 is inversion: {}", r.flip_is_inversion));
    text.push(format!("inversion is the identity: {}", r.flip_is_identity));
    text.push(r.summary());
    let results = json!({
        "c_invariants": ints(&r.c_invariants),
        "c_order": int(&r.c_order),
        "exact_at": {
            "a": r.exact_at[0],
            "b": r.exact_at[1],
            "c_times_c": r.exact_at[2],
            "h1": r.exact_at[3],
        },
        "flip_trivial_on_sections": r.flip_trivial_on_sections,
        "flip_is_inversion": r.flip_is_inversion,
        "flip_is_identity": r.flip_is_identity,
        "summary": r.summary(),
    });
    Ok(Done { results, text, warnings: Vec::new(), verdict: Verdict::from_bool(r.exact() && r.flip_is_inversion) })
}
