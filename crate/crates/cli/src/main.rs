use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use sme_core::complete::{infimum, supremum, SupResult};
use sme_core::ordgroup::{is_small_extension, normalize, skeleton, SmallKind, Smallness, SmallnessReport};
use sme_core::parse::{self, FieldSpec, GroupSpec};
use sme_core::scalars::{Constants, Rational};
use sme_core::sme::{Hull, SlotVector};
use sme_core::valuation::{
    ball_inf_check, dz_equal, dz_equivalent, dz_eval, value_group_check, BallReport, DepthZero, Delta, ExtendedValue,
    LexCompositeQt, PAdicQ, Poly, RatFunc, ValuedField,
};
use sme_core::{Error, Result};

#[derive(Parser)]
#[command(name = "sme", version, about = "Small-extensions closure of ordered abelian groups and depth-zero valuations")]
struct Cli {
    /// Session header with `const NAME = root(POLY, LO, HI)` lines and an optional group line.
    #[arg(long, global = true)]
    constants: Option<PathBuf>,
    /// Pretty-print JSON with this many spaces (0 = compact).
    #[arg(long, global = true, default_value_t = 0)]
    json_indent: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct GroupArg {
    /// Q^n, Z^n, `group n=.. gens=[..]` or `hahn:BLOCK,...`; defaults to Q^n from the input.
    #[arg(long)]
    group: Option<String>,
}

#[derive(Args)]
struct FieldArgs {
    /// padic:P or lexqt:P
    #[arg(long)]
    field: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Embed a finitely generated group into Q^r.
    Normalize {
        #[command(flatten)]
        g: GroupArg,
    },
    /// Principal-rank index set and rank-one components.
    Skeleton {
        #[command(flatten)]
        g: GroupArg,
    },
    /// Stratum and canonical representative of an element.
    Classify {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        elem: String,
    },
    /// Γ-equivalence of two elements.
    Equiv {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// A commensurable element strictly between a < b, if one exists.
    Between {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Supremum of a provider-described set.
    Sup {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        provider: String,
    },
    /// Infimum of a provider-described set.
    Inf {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        provider: String,
    },
    /// Small-extension test of Γ ⊂ Λ, or of a depth-zero value group with --field and --delta.
    Small {
        #[arg(long, requires = "lambda")]
        gamma: Option<String>,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long, requires = "delta", conflicts_with = "gamma")]
        field: Option<String>,
        #[arg(long)]
        delta: Option<String>,
    },
    /// Value of f under the depth-zero valuation with the given center and parameter.
    ValEval {
        #[command(flatten)]
        k: FieldArgs,
        #[arg(long)]
        center: String,
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Whether two depth-zero valuations coincide.
    ValEqual {
        #[command(flatten)]
        k: FieldArgs,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
    },
    /// Whether two depth-zero valuations agree up to equivalence of the parameters.
    ValEquiv {
        #[command(flatten)]
        k: FieldArgs,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
    },
    /// Checks that the ball infimum of v(f) equals the depth-zero value (p-adic fields).
    BallCheck {
        #[command(flatten)]
        k: FieldArgs,
        #[arg(long, allow_hyphen_values = true)]
        center: String,
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Session {
    consts: Constants,
    group: Option<String>,
}

impl Session {
    fn load(path: Option<&PathBuf>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Session { consts: Constants::builtin(), group: None });
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let (consts, rest) = parse::parse_session(&text)?;
        let mut group = None;
        for line in rest {
            if line.starts_with("group") || line.starts_with("Q^") || line.starts_with("Z^") || line.starts_with("hahn:") {
                if group.replace(line).is_some() {
                    return Err(Error::Config("more than one group in the session header".into()));
                }
            } else {
                return Err(Error::Parse(format!("unexpected header line {line:?}")));
            }
        }
        Ok(Session { consts, group })
    }

    /// The group given on the command line, else the header's, else Q^n sized by `hint`.
    fn group(&self, arg: &GroupArg, hint: &[&str]) -> Result<GroupSpec> {
        if let Some(g) = arg.group.as_ref().or(self.group.as_ref()) {
            return parse::parse_group(&self.consts, g);
        }
        let n = hint
            .iter()
            .find_map(|s| parse::dense_length(s))
            .ok_or_else(|| Error::Parse("no --group given and none can be inferred from the input".into()))?;
        parse::parse_group(&self.consts, &format!("Q^{n}"))
    }

    fn hull(&self, arg: &GroupArg, hint: &[&str]) -> Result<Hull> {
        self.group(arg, hint)?.hull()
    }

    fn elem(&self, hull: &Hull, s: &str) -> Result<SlotVector> {
        parse::parse_element(hull, &self.consts, s)
    }
}

fn rationals(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|q| Value::String(q.to_string())).collect())
}

fn segment(hull: &Hull, s: Option<&sme_core::sme::InitialSegment>) -> Value {
    s.map_or(Value::Null, |s| Value::String(hull.index().format_segment(s)))
}

fn sup_json(hull: &Hull, r: &SupResult, key: &str) -> Result<Value> {
    let c = hull.classify(&r.value)?;
    Ok(json!({
        "case": r.case.to_string(),
        key: parse::format_element(hull, &r.value),
        "stratum": c.stratum.to_string(),
    }))
}

fn small_json(r: &SmallnessReport) -> Value {
    let kind = match r.verdict {
        Smallness::Small(SmallKind::Commensurable) => "commensurable",
        Smallness::Small(SmallKind::PreservesRank) => "preserves-rank",
        Smallness::Small(SmallKind::IncreasesRankByOne) => "increases-rank-by-one",
        Smallness::NotSmall => "not-small",
    };
    json!({
        "kind": kind,
        "rank_gamma": r.rank_gamma,
        "rank_lambda": r.rank_lambda,
        "rational_rank_quotient": r.rational_rank_quotient,
        "small": r.is_small(),
    })
}

/// Field-specific reading of centers and polynomials.
trait FieldInput: ValuedField {
    fn elem(&self, s: &str) -> Result<Self::Elem>;
    fn poly(&self, s: &str) -> Result<Poly<Self::Elem>>;
}

impl FieldInput for PAdicQ {
    fn elem(&self, s: &str) -> Result<Rational> {
        parse::parse_rational_expr(s)
    }
    fn poly(&self, s: &str) -> Result<Poly<Rational>> {
        parse::parse_poly_q(s)
    }
}

impl FieldInput for LexCompositeQt {
    fn elem(&self, s: &str) -> Result<RatFunc> {
        parse::parse_ratfunc(s)
    }
    fn poly(&self, s: &str) -> Result<Poly<RatFunc>> {
        parse::parse_poly_qt(s)
    }
}

fn delta_for<F: ValuedField>(k: &F, s: &Session, text: &str) -> Result<Delta> {
    parse::parse_delta(&k.hull(), &s.consts, text)
}

fn value_json<F: ValuedField>(k: &F, delta: &Delta, v: &ExtendedValue) -> Value {
    match v {
        ExtendedValue::Infinity => json!({"g": Value::Null, "infinity": true, "m": Value::Null, "value": "inf"}),
        ExtendedValue::Finite { m, g } => {
            let value = match delta {
                Delta::Finite(d) => v.to_slot(d).map(|u| parse::format_element(&k.hull(), &u)),
                Delta::Infinity => Some(parse::format_int_vector(g)),
            };
            json!({"g": parse::format_int_vector(g), "infinity": false, "m": m, "value": value})
        }
    }
}

fn val_eval<F: FieldInput>(k: &F, s: &Session, center: &str, delta: &str, poly: &str) -> Result<Value> {
    let delta = delta_for(k, s, delta)?;
    let w = DepthZero::new(k, k.elem(center)?, delta.clone())?;
    let v = dz_eval(k, &w, &k.poly(poly)?)?;
    Ok(value_json(k, &delta, &v))
}

fn val_compare<F: FieldInput>(k: &F, s: &Session, args: [&str; 4], equiv: bool) -> Result<Value> {
    let [a, delta, b, eps] = args;
    let (a, b) = (k.elem(a)?, k.elem(b)?);
    let (delta, eps) = (delta_for(k, s, delta)?, delta_for(k, s, eps)?);
    DepthZero::new(k, a.clone(), delta.clone())?;
    DepthZero::new(k, b.clone(), eps.clone())?;
    Ok(if equiv {
        json!({"equivalent": dz_equivalent(k, &a, &delta, &b, &eps)?})
    } else {
        json!({"equal": dz_equal(k, &a, &delta, &b, &eps)?})
    })
}

fn ball_json(r: &BallReport) -> Value {
    match r {
        BallReport::Generic { mu, residue, witness, witness_value, trials, violations } => json!({
            "kind": "generic",
            "mu": mu,
            "passed": r.passed(),
            "residue": residue,
            "trials": trials,
            "violations": violations,
            "witness": witness.to_string(),
            "witness_value": witness_value,
        }),
        BallReport::Probes { dominant, epsilon, probes, skipped } => json!({
            "dominant": dominant,
            "epsilon": epsilon.as_ref().map(|e| e.to_string()),
            "kind": "probes",
            "passed": r.passed(),
            "probes": probes.iter().map(|p| json!({"actual": p.actual, "expected": p.expected, "rho": p.rho})).collect::<Vec<_>>(),
            "skipped": skipped,
        }),
    }
}

fn run(cli: &Cli) -> Result<Value> {
    let s = Session::load(cli.constants.as_ref())?;
    match &cli.cmd {
        Cmd::Normalize { g } => {
            let GroupSpec::Generated(gg) = s.group(g, &[])? else {
                return Err(Error::Domain("normalize needs a finitely generated group".into()));
            };
            let n = normalize(&gg)?;
            let emb: Vec<Value> = n.embedding_matrix().into_iter().map(|r| json!(r)).collect();
            Ok(json!({
                "ambient_dim": n.ambient_dim(),
                "basis": n.basis().iter().map(|v| rationals(v)).collect::<Vec<_>>(),
                "components": rationals(n.components()),
                "embedding": emb,
                "generators": n.generators().iter().map(|v| rationals(v)).collect::<Vec<_>>(),
                "leading_indices": n.leading_indices(),
                "rank": n.rank(),
            }))
        }
        Cmd::Skeleton { g } => {
            let GroupSpec::Generated(gg) = s.group(g, &[])? else {
                return Err(Error::Domain("skeleton needs a finitely generated group".into()));
            };
            let sk = skeleton(&normalize(&gg)?);
            let comps: serde_json::Map<String, Value> =
                sk.components.iter().map(|(l, c)| (l.clone(), Value::String(c.to_string()))).collect();
            Ok(json!({"components": comps, "index_count": sk.index_count}))
        }
        Cmd::Classify { g, elem } => {
            let hull = s.hull(g, &[elem])?;
            let c = hull.classify(&s.elem(&hull, elem)?)?;
            Ok(json!({
                "canonical": parse::format_element(&hull, &c.rep),
                "segment": segment(&hull, c.segment.as_ref()),
                "stratum": c.stratum.to_string(),
            }))
        }
        Cmd::Equiv { g, a, b } => {
            let hull = s.hull(g, &[a, b])?;
            let (u, v) = (s.elem(&hull, a)?, s.elem(&hull, b)?);
            let oracle = if hull.is_commensurable(&u) || hull.is_commensurable(&v) {
                Value::Null
            } else {
                Value::Bool(hull.equivalence_oracle(&u, &v)?)
            };
            Ok(json!({"equivalent": hull.sme_equivalent(&u, &v)?, "oracle": oracle}))
        }
        Cmd::Between { g, a, b } => {
            let hull = s.hull(g, &[a, b])?;
            let (u, v) = (s.elem(&hull, a)?, s.elem(&hull, b)?);
            let q = hull.rational_between(&u, &v)?;
            Ok(json!({"between": q.map(|q| parse::format_element(&hull, &q))}))
        }
        Cmd::Sup { g, provider } => {
            let hull = s.hull(g, &[provider])?;
            let p = parse::parse_provider(&hull, &s.consts, provider)?;
            sup_json(&hull, &supremum(&hull, p.as_ref())?, "sup")
        }
        Cmd::Inf { g, provider } => {
            let hull = s.hull(g, &[provider])?;
            let p = parse::parse_provider(&hull, &s.consts, provider)?;
            sup_json(&hull, &infimum(&hull, p.as_ref())?, "inf")
        }
        Cmd::Small { gamma, lambda, field, delta } => match (gamma, lambda, field, delta) {
            (Some(g), Some(l), _, _) => {
                let read = |t: &str| match parse::parse_group(&s.consts, t)? {
                    GroupSpec::Generated(x) => Ok(x),
                    _ => Err(Error::Domain("small needs finitely presented groups (Z^n or group ...)".into())),
                };
                Ok(small_json(&is_small_extension(&read(g)?, &read(l)?)?))
            }
            (_, _, Some(f), Some(d)) => match parse::parse_field(f)? {
                FieldSpec::PAdic(k) => Ok(small_json(&value_group_check(&k, &delta_for(&k, &s, d)?)?)),
                FieldSpec::LexQt(k) => Ok(small_json(&value_group_check(&k, &delta_for(&k, &s, d)?)?)),
            },
            _ => Err(Error::Parse("small needs --gamma and --lambda, or --field and --delta".into())),
        },
        Cmd::ValEval { k, center, delta, poly } => match parse::parse_field(&k.field)? {
            FieldSpec::PAdic(k) => val_eval(&k, &s, center, delta, poly),
            FieldSpec::LexQt(k) => val_eval(&k, &s, center, delta, poly),
        },
        Cmd::ValEqual { k, a, delta, b, eps } | Cmd::ValEquiv { k, a, delta, b, eps } => {
            let equiv = matches!(cli.cmd, Cmd::ValEquiv { .. });
            let args = [a.as_str(), delta, b, eps];
            match parse::parse_field(&k.field)? {
                FieldSpec::PAdic(k) => val_compare(&k, &s, args, equiv),
                FieldSpec::LexQt(k) => val_compare(&k, &s, args, equiv),
            }
        }
        Cmd::BallCheck { k, center, delta, poly, trials, seed } => {
            let FieldSpec::PAdic(k) = parse::parse_field(&k.field)? else {
                return Err(Error::Domain("ball-check runs over padic fields".into()));
            };
            let Delta::Finite(d) = delta_for(&k, &s, delta)? else {
                return Err(Error::Domain("ball-check needs a finite radius".into()));
            };
            let r = ball_inf_check(&k, &k.elem(center)?, &d, &k.poly(poly)?, *trials, *seed)?;
            Ok(ball_json(&r))
        }
    }
}

fn render(v: &Value, indent: usize) -> String {
    if indent == 0 {
        return v.to_string();
    }
    let pad = " ".repeat(indent);
    let fmt = serde_json::ser::PrettyFormatter::with_indent(pad.as_bytes());
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
    serde::Serialize::serialize(v, &mut ser).expect("JSON values serialize");
    String::from_utf8(out).expect("JSON is UTF-8")
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Config(_) => 2,
        Error::Domain(_) | Error::Precondition(_) => 3,
        Error::Contract(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(v) => {
            println!("{}", render(&v, cli.json_indent));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("sme: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
