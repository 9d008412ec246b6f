mod doc;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use univdef::definability::{
    nonnorm_witness, nonsquare_witness, odd_places, partition_class, verify_os, verify_witness, Claim, OsBudget,
    ParamsRecord, Witness,
};
use univdef::ffcore::{parse_poly, Fq};
use univdef::places::{parse_divisor, parse_kelem, parse_place, parse_places, KElem, Place};
use univdef::quaternion::{trace_set_experiment, TraceBudget};
use univdef::rayclass::{primes_in_class, ray_class_group};
use univdef::selftest;
use univdef::symbols::{
    artin_sign, choose_params, construct_with_symbols, delta_set, hilbert_symbol, residue_symbol, GaloisSign,
    Modulus, ParamSet, SymbolTargets,
};
use univdef::Error;

use doc::{ClaimRecord, WitnessDoc};

#[derive(Parser, Debug)]
#[command(name = "univdef", version, about = "Hilbert symbols, ray class groups and S-integer checks over F_q(t)")]
struct Cli {
    /// Size of the constant field (odd prime power).
    #[arg(long, global = true, default_value_t = 3)]
    q: u32,
    /// Irreducible polynomial in u defining F_q over F_p, e.g. "u^2+1".
    #[arg(long, global = true)]
    ext_modulus: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Degree bound D for every search.
    #[arg(long, global = true, default_value_t = 8)]
    max_degree: usize,
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Hilbert symbol (a, b) at a place.
    Symbol { a: String, b: String, place: String },
    /// Quadratic residue symbol of a unit at a place.
    Residue { a: String, place: String },
    /// Places where (a, b) = -1.
    Delta { a: String, b: String },
    /// Artin sign of a place for the parameters built from S.
    Artin {
        #[arg(long = "S")]
        s: String,
        place: String,
    },
    /// Odd places of x split by Artin sign.
    Partition {
        #[arg(long = "S")]
        s: String,
        x: String,
    },
    /// Membership of t in O_S.
    VerifyOs {
        #[arg(long = "S")]
        s: String,
        t: String,
    },
    /// Certificate that x is not a square.
    Nonsquare {
        #[arg(long = "S", default_value = "inf")]
        s: String,
        x: String,
    },
    /// Certificate that x is not a norm from K(sqrt y).
    Nonnorm {
        #[arg(long = "S", default_value = "inf")]
        s: String,
        x: String,
        y: String,
    },
    /// Ray class group of O_{S'} modulo m.
    Rayclass {
        #[arg(long = "Sprime")]
        s_prime: String,
        #[arg(long)]
        modulus: String,
        /// List the primes of degree <= D in each class.
        #[arg(long)]
        primes_to: Option<usize>,
    },
    /// Element with prescribed Hilbert symbols, read from a file.
    ConstructSymbols { spec_file: String },
    /// Trace sums of norm-one quaternions in (a, b).
    QuatReport {
        a: String,
        b: String,
        #[arg(long)]
        height: usize,
    },
    /// Run the acceptance suite.
    Selftest,
    /// Re-check a JSON witness document.
    VerifyWitness { file: String },
}

enum Fail {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail::Domain(e)
    }
}

type Res<T> = Result<T, Fail>;

struct Out {
    code: u8,
    text: String,
    json: Value,
}

impl Out {
    fn ok(text: String, json: Value) -> Out {
        Out { code: 0, text, json }
    }
}

/// Parses one argument; parse errors carry the argument text for the caret display.
fn arg<T>(what: &str, text: &str, f: impl FnOnce(&str) -> univdef::Result<T>) -> Res<T> {
    f(text).map_err(|e| match e {
        Error::Parse { pos, msg } => {
            let caret = format!("{}^", " ".repeat(pos.min(text.len())));
            Fail::Usage(format!("cannot parse {what} at position {pos}: {msg}\n  {text}\n  {caret}"))
        }
        other => Fail::Domain(other),
    })
}

fn field(cli: &Cli) -> Res<Fq> {
    let modulus = match &cli.ext_modulus {
        None => None,
        Some(m) => {
            let base = Fq::with_size(cli.q, None)?;
            let prime = Fq::prime(base.p())?;
            let text = m.replace('u', "t");
            let poly = arg("--ext-modulus", &text, |s| parse_poly(&prime, s))?;
            Some(poly.coeffs().iter().map(|c| c.index()).collect())
        }
    };
    Ok(Fq::with_size(cli.q, modulus)?)
}

fn elem(fq: &Fq, what: &str, s: &str) -> Res<KElem> {
    arg(what, s, |s| parse_kelem(fq, s))
}

fn place(fq: &Fq, s: &str) -> Res<Place> {
    arg("place", s, |s| parse_place(fq, s))
}

fn place_set(fq: &Fq, what: &str, s: &str) -> Res<BTreeSet<Place>> {
    arg(what, s, |s| parse_places(fq, s))
}

fn names(ps: &BTreeSet<Place>) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn braces(ps: &BTreeSet<Place>) -> String {
    format!("{{{}}}", names(ps).join(", "))
}

fn base(cli: &Cli, command: &str) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema".into(), json!(1));
    m.insert("command".into(), json!(command));
    m.insert("q".into(), json!(cli.q));
    m.insert("ext_modulus".into(), json!(cli.ext_modulus));
    m
}

fn with(mut m: serde_json::Map<String, Value>, extra: Value) -> Value {
    if let Value::Object(e) = extra {
        m.extend(e);
    }
    Value::Object(m)
}

fn witness_text(w: &Witness) -> String {
    let rec = serde_json::to_value(w.to_record()).expect("witness record serializes");
    let mut s = format!("witness: {}\n", w.kind());
    if let Value::Object(m) = rec {
        for (k, v) in m.iter().filter(|(k, _)| *k != "kind") {
            let v = match v {
                Value::String(s) => s.clone(),
                Value::Array(a) => format!("{{{}}}", a.iter().filter_map(|x| x.as_str()).collect::<Vec<_>>().join(", ")),
                Value::Null => "none".into(),
                other => other.to_string(),
            };
            let _ = writeln!(s, "  {k}: {v}");
        }
    }
    s
}

fn params_text(p: &ParamSet) -> String {
    format!("params: a = {}, b = {}, c = {}, d = {}, m = {}\n", p.a, p.b, p.c, p.d, p.m)
}

fn witness_out(cli: &Cli, command: &str, params: &ParamSet, claim: ClaimRecord, w: &Witness, head: String) -> Out {
    let d = WitnessDoc {
        schema: 1,
        q: cli.q,
        ext_modulus: cli.ext_modulus.clone(),
        claim,
        params: ParamsRecord::from_params(params),
        witness: w.to_record(),
    };
    let mut v = serde_json::to_value(&d).expect("witness document serializes");
    if let Value::Object(m) = &mut v {
        m.insert("command".into(), json!(command));
    }
    Out { code: 1, text: format!("{head}{}{}", params_text(params), witness_text(w)), json: v }
}

fn run(cli: &Cli) -> Res<Out> {
    if let Cmd::Selftest = cli.cmd {
        return Ok(run_selftest(cli));
    }
    if let Cmd::VerifyWitness { file } = &cli.cmd {
        return verify_doc(cli, file);
    }
    let fq = field(cli)?;
    let d = cli.max_degree;
    Ok(match &cli.cmd {
        Cmd::Symbol { a, b, place: p } => {
            let (a, b, p) = (elem(&fq, "a", a)?, elem(&fq, "b", b)?, place(&fq, p)?);
            let s = hilbert_symbol(&a, &b, &p)?;
            Out::ok(format!("{s}\n"), with(base(cli, "symbol"), json!({"symbol": s})))
        }
        Cmd::Residue { a, place: p } => {
            let (a, p) = (elem(&fq, "a", a)?, place(&fq, p)?);
            let s = residue_symbol(&a, &p)?;
            Out::ok(format!("{s}\n"), with(base(cli, "residue"), json!({"symbol": s})))
        }
        Cmd::Delta { a, b } => {
            let ds = delta_set(&elem(&fq, "a", a)?, &elem(&fq, "b", b)?)?;
            Out::ok(format!("{}\n", braces(&ds)), with(base(cli, "delta"), json!({"delta": names(&ds)})))
        }
        Cmd::Artin { s, place: p } => {
            let params = choose_params(&fq, &place_set(&fq, "--S", s)?, d)?;
            let sign = artin_sign(&params, &place(&fq, p)?)?;
            Out::ok(
                format!("{sign}\n"),
                with(base(cli, "artin"), json!({"sign": sign.to_string(), "params": ParamsRecord::from_params(&params)})),
            )
        }
        Cmd::Partition { s, x } => {
            let params = choose_params(&fq, &place_set(&fq, "--S", s)?, d)?;
            let x = elem(&fq, "x", x)?;
            let mut text = params_text(&params);
            let mut classes = serde_json::Map::new();
            for sign in GaloisSign::all() {
                let c = partition_class(&params, &x, sign)?;
                let _ = writeln!(text, "{sign}: {}", braces(&c));
                classes.insert(sign.to_string(), json!(names(&c)));
            }
            let at_m: BTreeSet<Place> = odd_places(&x)?.into_iter().filter(|p| params.m.divides(p)).collect();
            let _ = writeln!(text, "modulus: {}", braces(&at_m));
            Out::ok(
                text,
                with(
                    base(cli, "partition"),
                    json!({"classes": classes, "modulus": names(&at_m), "params": ParamsRecord::from_params(&params)}),
                ),
            )
        }
        Cmd::VerifyOs { s, t } => {
            let s = place_set(&fq, "--S", s)?;
            let t_el = elem(&fq, "t", t)?;
            let params = choose_params(&fq, &s, d)?;
            let v = verify_os(&params, &t_el, &s, &OsBudget::default(), cli.seed, d)?;
            match &v.witness {
                Some(w) => witness_out(
                    cli,
                    "verify-os",
                    &params,
                    ClaimRecord::NotInOs { s: names(&s), t: t_el.to_string() },
                    w,
                    "member: false\n".into(),
                ),
                None => {
                    let log = v.log.expect("member verdict has a sample log");
                    let mut text = format!("member: true\n{}", params_text(&params));
                    for (k, n) in &log.samples {
                        let _ = writeln!(text, "samples {k}: {n}");
                    }
                    Out::ok(
                        text,
                        with(
                            base(cli, "verify-os"),
                            json!({"member": true, "params": ParamsRecord::from_params(&params), "log": log}),
                        ),
                    )
                }
            }
        }
        Cmd::Nonsquare { s, x } => {
            let x_el = elem(&fq, "x", x)?;
            let params = choose_params(&fq, &place_set(&fq, "--S", s)?, d)?;
            match nonsquare_witness(&params, &x_el, d) {
                Ok(w) => witness_out(
                    cli,
                    "nonsquare",
                    &params,
                    ClaimRecord::Nonsquare { x: x_el.to_string() },
                    &w,
                    "nonsquare: true\n".into(),
                ),
                Err(Error::NotANonsquare) => {
                    Out::ok("nonsquare: false\n".into(), with(base(cli, "nonsquare"), json!({"nonsquare": false})))
                }
                Err(e) => return Err(e.into()),
            }
        }
        Cmd::Nonnorm { s, x, y } => {
            let (x_el, y_el) = (elem(&fq, "x", x)?, elem(&fq, "y", y)?);
            let params = choose_params(&fq, &place_set(&fq, "--S", s)?, d)?;
            match nonnorm_witness(&params, &x_el, &y_el, d) {
                Ok(w) => witness_out(
                    cli,
                    "nonnorm",
                    &params,
                    ClaimRecord::Nonnorm { x: x_el.to_string(), y: y_el.to_string() },
                    &w,
                    "nonnorm: true\n".into(),
                ),
                Err(Error::IsActuallyANorm) => {
                    Out::ok("nonnorm: false\n".into(), with(base(cli, "nonnorm"), json!({"nonnorm": false})))
                }
                Err(e) => return Err(e.into()),
            }
        }
        Cmd::Rayclass { s_prime, modulus, primes_to } => {
            let sp = place_set(&fq, "--Sprime", s_prime)?;
            let md = Modulus::from_divisor(&arg("--modulus", modulus, |s| parse_divisor(&fq, s))?)?;
            let g = ray_class_group(&fq, &sp, &md)?;
            let mut text = format!("structure: {}\norder: {}\n", g.structure(), g.order());
            let mut classes = Vec::new();
            if let Some(pd) = primes_to {
                for c in g.classes() {
                    let ps: BTreeSet<Place> = primes_in_class(&g, &c, *pd)?.into_iter().collect();
                    let _ = writeln!(text, "{c:?}: {}", braces(&ps));
                    classes.push(json!({"class": c, "primes": names(&ps)}));
                }
            }
            Out::ok(
                text,
                with(
                    base(cli, "rayclass"),
                    json!({"structure": g.structure(), "order": g.order(), "invariants": g.invariants(), "classes": classes}),
                ),
            )
        }
        Cmd::ConstructSymbols { spec_file } => {
            let src = std::fs::read_to_string(spec_file)
                .map_err(|e| Fail::Usage(format!("cannot read {spec_file}: {e}")))?;
            let (pairs, targets) = parse_symbol_spec(&fq, &src)?;
            let x = construct_with_symbols(&fq, &pairs, &targets, d)?;
            Out::ok(format!("{x}\n"), with(base(cli, "construct-symbols"), json!({"x": x.to_string()})))
        }
        Cmd::QuatReport { a, b, height } => {
            let (a, b) = (elem(&fq, "a", a)?, elem(&fq, "b", b)?);
            let r = trace_set_experiment(&a, &b, *height, TraceBudget { seed: cli.seed, ..TraceBudget::default() })?;
            let text = format!(
                "delta: {{{}}}\nheight: {}\nnorm-one elements: {}\ndistinct traces: {}\nsums tested: {}\nviolations: {}\nreverse: {}/{} found, {} unverified\n",
                r.delta.join(", "),
                r.height,
                r.norm_one,
                r.distinct_traces,
                r.sums_tested,
                r.violations.len(),
                r.reverse_found,
                r.reverse_targets,
                r.reverse_unverified
            );
            let code = if r.passed() { 0 } else { 1 };
            Out { code, text, json: with(base(cli, "quat-report"), json!({"report": r})) }
        }
        Cmd::Selftest | Cmd::VerifyWitness { .. } => unreachable!(),
    })
}

/// Lines `pair <element>` and `target <index> <place> <+1|-1>`; `#` starts a comment.
fn parse_symbol_spec(fq: &Fq, src: &str) -> Res<(Vec<KElem>, SymbolTargets)> {
    let mut pairs = Vec::new();
    let mut targets = SymbolTargets::new();
    for (n, line) in src.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |m: &str| Fail::Usage(format!("line {}: {m}\n  {line}", n + 1));
        let (head, rest) = line.split_once(char::is_whitespace).ok_or_else(|| bad("missing argument"))?;
        match head {
            "pair" => pairs.push(elem(fq, &format!("pair on line {}", n + 1), rest.trim())?),
            "target" => {
                let f: Vec<&str> = rest.split_whitespace().collect();
                let [i, p, e] = f[..] else { return Err(bad("expected: target <index> <place> <+1|-1>")) };
                let i: usize = i.parse().map_err(|_| bad("bad index"))?;
                let e: i8 = e.trim_start_matches('+').parse().map_err(|_| bad("bad sign"))?;
                targets.insert((i, place(fq, p)?), e);
            }
            _ => return Err(bad("expected 'pair' or 'target'")),
        }
    }
    Ok((pairs, targets))
}

fn run_selftest(cli: &Cli) -> Out {
    let outcomes = selftest::run_all(cli.seed);
    let mut text = String::new();
    let mut rows = Vec::new();
    for o in &outcomes {
        let _ = writeln!(text, "{o}");
        rows.push(json!({"id": o.id, "title": o.title, "passed": o.passed, "detail": o.detail}));
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let _ = writeln!(text, "{} passed, {failed} failed", outcomes.len() - failed);
    Out {
        code: if failed == 0 { 0 } else { 1 },
        text,
        json: with(base(cli, "selftest"), json!({"criteria": rows, "failed": failed})),
    }
}

fn verify_doc(cli: &Cli, file: &str) -> Res<Out> {
    let src = std::fs::read_to_string(file).map_err(|e| Fail::Usage(format!("cannot read {file}: {e}")))?;
    let d: WitnessDoc = serde_json::from_str(&src).map_err(|e| Fail::Usage(format!("bad witness document: {e}")))?;
    if d.schema != 1 {
        return Err(Fail::Usage(format!("unsupported schema {}", d.schema)));
    }
    let fq = field(&Cli { q: d.q, ext_modulus: d.ext_modulus.clone(), ..clone_flags(cli) })?;
    let params = d.params.to_params(&fq)?;
    let claim = match &d.claim {
        ClaimRecord::NotInOs { s, t } => {
            let s: BTreeSet<Place> = s.iter().map(|p| place(&fq, p)).collect::<Res<_>>()?;
            if s != params.s {
                return Err(Fail::Usage("claim S differs from the parameter S".into()));
            }
            Claim::NotInOs { t: elem(&fq, "t", t)? }
        }
        ClaimRecord::Nonsquare { x } => Claim::Nonsquare { x: elem(&fq, "x", x)? },
        ClaimRecord::Nonnorm { x, y } => Claim::Nonnorm { x: elem(&fq, "x", x)?, y: elem(&fq, "y", y)? },
    };
    let w = Witness::from_record(&fq, &d.witness)?;
    match verify_witness(&params, &claim, &w) {
        Ok(()) => Ok(Out::ok(
            format!("accepted: {}\n", w.kind()),
            with(base(cli, "verify-witness"), json!({"accepted": true, "kind": w.kind()})),
        )),
        Err(Error::WitnessRejected(m)) => Ok(Out {
            code: 1,
            text: format!("rejected: {m}\n"),
            json: with(base(cli, "verify-witness"), json!({"accepted": false, "reason": m})),
        }),
        Err(e) => Err(e.into()),
    }
}

fn clone_flags(cli: &Cli) -> Cli {
    Cli {
        q: cli.q,
        ext_modulus: cli.ext_modulus.clone(),
        seed: cli.seed,
        max_degree: cli.max_degree,
        json: cli.json,
        cmd: Cmd::Selftest,
    }
}

fn error_name(e: &Error) -> String {
    let s = e.to_string();
    match s.split_once(':') {
        Some((head, _)) if !head.contains(' ') => head.to_string(),
        _ if matches!(e, Error::Parse { .. }) => "Parse".into(),
        _ => "Error".into(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (code, text, value) = match run(&cli) {
        Ok(o) => (o.code, o.text, o.json),
        Err(Fail::Usage(m)) => {
            (2, format!("error: {m}\n"), json!({"schema": 1, "error": {"kind": "Usage", "message": m}}))
        }
        Err(Fail::Domain(e)) => {
            let code = match e {
                Error::SearchBoundExceeded(_) => 3,
                _ => 2,
            };
            let mut err = json!({"kind": error_name(&e), "message": e.to_string()});
            if let Error::Parse { pos, .. } = &e {
                err["pos"] = json!(pos);
            }
            (code, format!("error: {e}\n"), json!({"schema": 1, "error": err}))
        }
    };
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&value).expect("json output"));
    } else if code >= 2 {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    ExitCode::from(code)
}
