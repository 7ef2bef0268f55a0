use std::fmt;
use std::path::Path;

use serde_json::{json, Value};
use sunflower_core::apps::{self, AjtInstance, KneserInstance};
use sunflower_core::constructions::{self, Color, Coloring, Palette};
use sunflower_core::probability::{self, McParams, Method, Verdict};
use sunflower_core::rational::{parse_rational, to_f64};
use sunflower_core::reduction::{self, BadMassSampler, SampleMode, ScheduleInput};
use sunflower_core::spread::{self, Dichotomy, KappaVariant, SpreadViolation, WeightProfile};
use sunflower_core::sunflower::{self, KernelStrategy, RobustSunflowerWitness};
use sunflower_core::{rng, Bias, MemberSet, Rational, SetFamily, SunflowerWitness};

use crate::args::{AnalyzeCmd, AppsCmd, Command, ExperimentCmd, GenCmd, Opts};
use crate::family_file::{FamilyFile, InputError};
use crate::parallel;
use crate::report::{self, Report};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(InputError),
    Core(sunflower_core::Error),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Input(e) => write!(f, "input: {e}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "io: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<sunflower_core::Error> for CliError {
    fn from(e: sunflower_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        CliError::Input(e)
    }
}

type CliResult<T> = Result<T, CliError>;

/// A finished command: the report, and whether the thing looked for was
/// found or the checked statement held (exit 0) or not (exit 1).
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub holds: bool,
}

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

fn required<T: Clone>(v: &Option<T>, flag: &str) -> CliResult<T> {
    v.clone().ok_or_else(|| CliError::Usage(format!("--{flag} is required")))
}

fn bias(s: &str, flag: &str) -> CliResult<Bias> {
    let v = parse_rational(s).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))?;
    Bias::new(v).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

fn rational(s: &str, flag: &str) -> CliResult<Rational> {
    parse_rational(s).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

fn width_usize(opts: &Opts) -> CliResult<usize> {
    let s = required(&opts.w, "w")?;
    s.parse().map_err(|_| CliError::Usage(format!("--w: expected an integer, got `{s}`")))
}

/// Accepts `2^k`, an integer or a float.
pub fn parse_width(s: &str) -> CliResult<f64> {
    let bad = || CliError::Usage(format!("--w: cannot read `{s}`"));
    if let Some((b, e)) = s.split_once('^') {
        let b: f64 = b.trim().parse().map_err(|_| bad())?;
        let e: f64 = e.trim().parse().map_err(|_| bad())?;
        return Ok(b.powf(e));
    }
    s.trim().parse().map_err(|_| bad())
}

fn method(opts: &Opts) -> CliResult<Method> {
    match &opts.method {
        None => Ok(Method::Auto),
        Some(s) => Method::parse(s).ok_or_else(|| CliError::Usage(format!("--method: unknown method `{s}`"))),
    }
}

fn seed(opts: &Opts) -> u64 {
    opts.seed.unwrap_or(rng::DEFAULT_SEED)
}

fn mc_params(opts: &Opts) -> McParams {
    let d = McParams::default();
    McParams { seed: seed(opts), samples: opts.samples.unwrap_or(d.samples), ..d }
}

fn read_input(opts: &Opts) -> CliResult<FamilyFile> {
    let path = required(&opts.input, "in")?;
    let (text, source) = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(|e| CliError::Io(e.to_string()))?;
        (s, "<stdin>".to_owned())
    } else {
        let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        (text, path.display().to_string())
    };
    Ok(FamilyFile::parse(&text, &source)?)
}

fn input_family(opts: &Opts, rep: &mut Report) -> CliResult<(FamilyFile, SetFamily)> {
    let file = read_input(opts)?;
    let family = file.family()?;
    rep.param("in", opts.input.as_ref().map(|p| p.display().to_string()));
    rep.param("members", family.len());
    rep.param("n", family.n());
    rep.param("w", family.w());
    Ok((file, family))
}

fn witness_json(family: &SetFamily, w: &SunflowerWitness) -> Value {
    json!({
        "indices": w.indices,
        "kernel": report::set(&w.kernel),
        "members": w.indices.iter().map(|&i| report::set(family.member(i))).collect::<Vec<_>>(),
    })
}

fn robust_json(w: &RobustSunflowerWitness) -> Value {
    json!({
        "kernel": report::set(&w.kernel),
        "member_indices": w.member_indices,
        "link_probability": report::estimate(&w.link_probability),
    })
}

pub fn run(command: Command, opts: &Opts) -> CliResult<Outcome> {
    match command {
        Command::Gen { what } => gen(what, opts),
        Command::Analyze { what: None } => match &opts.verify {
            Some(path) => verify(path, opts),
            None => usage("analyze needs a subcommand or --verify REPORT"),
        },
        Command::Analyze { what: Some(what) } => analyze(what, opts),
        Command::Experiment { what } => experiment(what, opts),
        Command::Apps { what } => apps_cmd(what, opts),
    }
}

fn gen(what: GenCmd, opts: &Opts) -> CliResult<Outcome> {
    let seed = seed(opts);
    match what {
        GenCmd::Product => {
            let (w, m) = (width_usize(opts)?, required(&opts.m, "m")?);
            let family = constructions::product_family(w, m)?;
            let mut rep = Report::new("gen product");
            rep.param("w", w).param("m", m);
            let file = FamilyFile::from_family(&family)
                .with_meta("generator", json!({"kind": "product", "w": w, "m": m}));
            rep.set("members", family.len()).set("family", serde_json::to_value(&file).unwrap());
            Ok(Outcome { report: rep, holds: true })
        }
        GenCmd::Lowerbound => {
            let (w, m) = (width_usize(opts)?, required(&opts.m, "m")?);
            let eps_s = required(&opts.epsilon, "epsilon")?;
            let eps = rational(&eps_s, "epsilon")?;
            let g = constructions::greedy_spread_subfamily(&constructions::product_family(w, m)?, &eps)?;
            let hyp = constructions::robust_free_inequality(w, m, &eps);
            let mut rep = Report::new("gen lowerbound");
            rep.param("w", w).param("m", m).param("epsilon", eps_s.clone());
            let file = FamilyFile::from_family(&g.family)
                .with_meta("generator", json!({"kind": "lowerbound", "w": w, "m": m, "epsilon": eps_s}));
            rep.set("members", g.family.len())
                .set("kept", json!(g.kept))
                .set("max_intersection", g.max_intersection)
                .set("size_bound", g.size_bound)
                .set("size_bound_holds", g.size_bound_holds)
                .set(
                    "robust_free_inequality",
                    json!({"free_blocks": hyp.free_blocks, "lhs": hyp.lhs, "rhs": hyp.rhs, "holds": hyp.holds}),
                )
                .set("family", serde_json::to_value(&file).unwrap());
            Ok(Outcome { report: rep, holds: g.size_bound_holds })
        }
        GenCmd::Random => {
            let n = required(&opts.n, "n")?;
            let count = required(&opts.count, "count")?;
            let min = opts.min_size.unwrap_or(1);
            let max = opts.max_size.unwrap_or(min.max(n.min(3)));
            let family = constructions::random_family(n, count, min, max, opts.distinct, seed)?;
            let mut rep = Report::new("gen random");
            rep.param("n", n)
                .param("count", count)
                .param("min_size", min)
                .param("max_size", max)
                .param("distinct", opts.distinct)
                .param("seed", seed);
            let file = FamilyFile::from_family(&family).with_meta(
                "generator",
                json!({"kind": "random", "n": n, "count": count, "min_size": min, "max_size": max, "distinct": opts.distinct, "seed": seed}),
            );
            rep.set("members", family.len()).set("family", serde_json::to_value(&file).unwrap());
            Ok(Outcome { report: rep, holds: true })
        }
    }
}

fn parse_profile(s: &str) -> CliResult<WeightProfile> {
    let (s0, rest) = s.split_once(';').unwrap_or((s, ""));
    let s0 = rational(s0.trim(), "profile")?;
    let tail = rest
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| rational(t, "profile"))
        .collect::<CliResult<Vec<_>>>()?;
    WeightProfile::new(s0, tail).map_err(|e| CliError::Usage(format!("--profile: {e}")))
}

fn analyze(what: AnalyzeCmd, opts: &Opts) -> CliResult<Outcome> {
    match what {
        AnalyzeCmd::Spread => {
            let mut rep = Report::new("analyze spread");
            let (file, family) = input_family(opts, &mut rep)?;
            let c = spread::spread_coefficient(&family)?;
            rep.set(
                "coefficient",
                json!({
                    "kappa_star": c.kappa_star,
                    "argmin": report::set(&c.argmin),
                    "ratio": report::rational(&c.ratio),
                    "size_root": c.size_root,
                }),
            );
            let mut holds = true;
            if let Some(k) = &opts.kappa {
                rep.param("kappa", k.clone());
                let kappa = rational(k, "kappa")?;
                let full = spread::is_kappa_spread(&family, &kappa)?;
                let dich = match spread::structure_dichotomy(&family, &kappa)? {
                    Dichotomy::Certificate { size_condition } => json!({"kind": "certificate", "size_condition": size_condition}),
                    Dichotomy::Structure { kernel, link } => json!({
                        "kind": "structure",
                        "kernel": report::set(&kernel),
                        "link_members": link.len(),
                    }),
                };
                rep.set("kappa_spread", full).set("dichotomy", dich);
                holds &= full;
            }
            if let Some(p) = &opts.profile {
                rep.param("profile", p.clone());
                let profile = parse_profile(p)?;
                let wf = file.weighted()?;
                let r = spread::is_spread(&wf, &profile)?;
                let violation = match &r.violation {
                    None => Value::Null,
                    Some(SpreadViolation::Total { total, .. }) => json!({"kind": "total", "total": report::rational(total)}),
                    Some(SpreadViolation::Link { t, mass, bound }) => json!({
                        "kind": "link", "t": report::set(t), "mass": report::rational(mass), "bound": report::rational(bound),
                    }),
                };
                rep.set("profile_spread", r.is_spread()).set("violation", violation);
                holds &= r.is_spread();
            }
            Ok(Outcome { report: rep, holds })
        }
        AnalyzeCmd::Sunflower => {
            let mut rep = Report::new("analyze sunflower");
            let (_, family) = input_family(opts, &mut rep)?;
            let r = required(&opts.r, "r")?;
            rep.param("r", r);
            let found = if let Some(c) = &opts.color {
                let color = Color::parse(c).ok_or_else(|| CliError::Usage(format!("--color: unknown color `{c}`")))?;
                let palette = palette(opts, Palette::RedGreenBlue)?;
                let coloring = Coloring::random(family.n(), palette, seed(opts), 0);
                rep.param("color", color.name()).param("palette", palette.name()).param("seed", seed(opts));
                rep.set("coloring", json!(coloring.colors.iter().map(|c| c.name()).collect::<Vec<_>>()));
                sunflower::find_monochromatic_sunflower(&family, r, &coloring.colors, color)?
            } else {
                let finder = opts.finder.as_deref().unwrap_or("auto");
                rep.param("finder", finder);
                match finder {
                    "exhaustive" => sunflower::find_sunflower_exhaustive(&family, r)?,
                    "erdos-rado" => sunflower::find_sunflower_erdos_rado(&family, r)?,
                    "auto" => match sunflower::find_sunflower_erdos_rado(&family, r)? {
                        Some(w) => Some(w),
                        None => sunflower::find_sunflower_exhaustive(&family, r)?,
                    },
                    other => return usage(format!("--finder: unknown finder `{other}`")),
                }
            };
            if let Some(w) = &found {
                w.validate(&family)?;
            }
            rep.set("found", found.is_some())
                .set("witness", found.as_ref().map_or(Value::Null, |w| witness_json(&family, w)));
            Ok(Outcome { holds: found.is_some(), report: rep })
        }
        AnalyzeCmd::Robust => {
            let mut rep = Report::new("analyze robust");
            let (_, family) = input_family(opts, &mut rep)?;
            let (a_s, b_s) = (required(&opts.alpha, "alpha")?, required(&opts.beta, "beta")?);
            let (alpha, beta) = (bias(&a_s, "alpha")?, bias(&b_s, "beta")?);
            let strategy = match &opts.strategy {
                None => KernelStrategy::LinkKernels,
                Some(s) => KernelStrategy::parse(s).ok_or_else(|| CliError::Usage(format!("--strategy: unknown `{s}`")))?,
            };
            let method = method(opts)?;
            let mc = mc_params(opts);
            rep.param("alpha", a_s)
                .param("beta", b_s)
                .param("strategy", strategy.name())
                .param("method", method.name())
                .param("seed", mc.seed)
                .param("samples", mc.samples);
            let found = sunflower::robust_sunflower_search(&family, &alpha, &beta, strategy, method, &mc)?;
            rep.set("found", found.is_some()).set("witness", found.as_ref().map_or(Value::Null, robust_json));
            if let (Some(w), Some(r)) = (&found, opts.r) {
                rep.param("r", r);
                let sf = sunflower::sunflower_from_robust(&family, w, r).ok();
                rep.set("sunflower", sf.as_ref().map_or(Value::Null, |s| witness_json(&family, s)));
            }
            Ok(Outcome { holds: found.is_some(), report: rep })
        }
        AnalyzeCmd::Satisfying => {
            let mut rep = Report::new("analyze satisfying");
            let (_, family) = input_family(opts, &mut rep)?;
            let (a_s, b_s) = (required(&opts.alpha, "alpha")?, required(&opts.beta, "beta")?);
            let (alpha, beta) = (bias(&a_s, "alpha")?, bias(&b_s, "beta")?);
            let method = method(opts)?;
            let mc = mc_params(opts);
            rep.param("alpha", a_s).param("beta", b_s).param("method", method.name());
            if !method.is_exact() {
                rep.param("seed", mc.seed).param("samples", mc.samples);
            }
            let est = parallel::satisfaction_probability(&family, &alpha, method, &mc)?;
            let verdict = probability::decide(&est, &beta);
            rep.set("probability", report::estimate(&est))
                .set("threshold", report::rational(&beta.complement()))
                .set("verdict", verdict.name());
            Ok(Outcome { holds: verdict == Verdict::Satisfying, report: rep })
        }
        AnalyzeCmd::Intersecting => {
            let mut rep = Report::new("analyze intersecting");
            let (_, family) = input_family(opts, &mut rep)?;
            let pair = first_disjoint_pair(&family);
            rep.set("intersecting", pair.is_none()).set("disjoint_pair", json!(pair));
            Ok(Outcome { holds: pair.is_none(), report: rep })
        }
    }
}

fn first_disjoint_pair(family: &SetFamily) -> Option<(usize, usize)> {
    let m = family.members();
    (0..m.len()).find_map(|i| (i + 1..m.len()).find(|&j| m[i].is_disjoint(&m[j])).map(|j| (i, j)))
}

fn palette(opts: &Opts, default: Palette) -> CliResult<Palette> {
    match opts.palette.as_deref() {
        None => Ok(default),
        Some("red-blue" | "rb") => Ok(Palette::RedBlue),
        Some("red-green-blue" | "rgb") => Ok(Palette::RedGreenBlue),
        Some(other) => usage(format!("--palette: unknown palette `{other}`")),
    }
}

fn ids(v: &Value, what: &str) -> CliResult<Vec<usize>> {
    v.as_array()
        .and_then(|a| a.iter().map(|x| x.as_u64().map(|u| u as usize)).collect())
        .ok_or_else(|| CliError::Usage(format!("report field {what} is not a list of ids")))
}

fn verify(path: &Path, opts: &Opts) -> CliResult<Outcome> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let source = path.display().to_string();
    let report: Value = serde_json::from_str(&text)
        .map_err(|e| InputError { position: format!("{source}:{}:{}", e.line(), e.column()), message: e.to_string() })?;
    let command = report["command"].as_str().unwrap_or("").to_owned();
    let mut rep = Report::new("analyze verify");
    rep.param("report", source).param("verified_command", command.clone());
    let (_, family) = input_family(opts, &mut rep)?;
    let result = &report["result"];
    let params = &report["params"];
    let outcome: Result<String, String> = match command.as_str() {
        "analyze sunflower" => {
            let wit = &result["witness"];
            if wit.is_null() {
                return usage("the report holds no sunflower witness");
            }
            let indices = ids(&wit["indices"], "witness.indices")?;
            let kernel = MemberSet::from_elements(ids(&wit["kernel"], "witness.kernel")?);
            match SunflowerWitness::from_indices(&family, indices) {
                Ok(w) if w.kernel == kernel => match &params["color"] {
                    Value::String(c) => {
                        let colors: Vec<Color> = result["coloring"]
                            .as_array()
                            .map(|a| a.iter().filter_map(|x| x.as_str().and_then(Color::parse)).collect())
                            .unwrap_or_default();
                        let color = Color::parse(c).unwrap_or(Color::Red);
                        let mono = colors.len() >= family.n()
                            && w.indices.iter().all(|&i| family.member(i).difference(&w.kernel).iter().all(|x| colors[x] == color));
                        if mono { Ok("monochromatic sunflower".into()) } else { Err("petals are not monochromatic".into()) }
                    }
                    _ => Ok("sunflower".into()),
                },
                Ok(w) => Err(format!("kernel {} differs from the recomputed {}", kernel, w.kernel)),
                Err(e) => Err(e.to_string()),
            }
        }
        "analyze robust" => {
            let wit = &result["witness"];
            if wit.is_null() {
                return usage("the report holds no robust witness");
            }
            let alpha = bias(params["alpha"].as_str().unwrap_or(""), "alpha")?;
            let beta = bias(params["beta"].as_str().unwrap_or(""), "beta")?;
            let method = params["method"].as_str().and_then(Method::parse).unwrap_or(Method::Auto);
            let mut mc = McParams::default();
            if let Some(s) = params["seed"].as_u64() {
                mc.seed = s;
            }
            if let Some(s) = params["samples"].as_u64() {
                mc.samples = s;
            }
            let witness = RobustSunflowerWitness {
                kernel: MemberSet::from_elements(ids(&wit["kernel"], "witness.kernel")?),
                member_indices: ids(&wit["member_indices"], "witness.member_indices")?,
                link_probability: probability::ProbEstimate::exact(Rational::from_integer(0.into()), Method::Auto),
                alpha,
                beta,
            };
            sunflower::validate_robust(&family, &witness, method, &mc)
                .map(|_| "robust sunflower".to_owned())
                .map_err(|e| e.to_string())
        }
        "analyze intersecting" => match (&result["disjoint_pair"], first_disjoint_pair(&family)) {
            (Value::Null, None) => Ok("intersecting".into()),
            (Value::Array(a), _) if a.len() == 2 => {
                let (i, j) = (a[0].as_u64().unwrap_or(u64::MAX) as usize, a[1].as_u64().unwrap_or(u64::MAX) as usize);
                if i < family.len() && j < family.len() && i != j && family.member(i).is_disjoint(family.member(j)) {
                    Ok("disjoint pair".into())
                } else {
                    Err("the reported pair is not disjoint".into())
                }
            }
            _ => Err("the report claims intersecting but a disjoint pair exists".into()),
        },
        "analyze spread" => match &result["dichotomy"] {
            Value::Object(d) if d.get("kind").and_then(Value::as_str) == Some("structure") => {
                let kappa = rational(params["kappa"].as_str().unwrap_or(""), "kappa")?;
                let kernel = MemberSet::from_elements(ids(&d["kernel"], "dichotomy.kernel")?);
                let link = family.link(&kernel);
                let violates = Rational::from_integer((link.len() as i64).into()) * sunflower_core::rational::pow(&kappa, kernel.len())
                    > Rational::from_integer((family.len() as i64).into());
                if violates && spread::link_condition_holds(&link, &kappa)? {
                    Ok("dichotomy structure".into())
                } else {
                    Err("the reported kernel does not witness the dichotomy".into())
                }
            }
            Value::Object(d) if d.get("kind").and_then(Value::as_str) == Some("certificate") => {
                let kappa = rational(params["kappa"].as_str().unwrap_or(""), "kappa")?;
                if spread::link_condition_holds(&family, &kappa)? {
                    Ok("link condition certificate".into())
                } else {
                    Err("the link condition fails".into())
                }
            }
            _ => return usage("the report holds no dichotomy to verify"),
        },
        "analyze satisfying" => {
            let reported = result["probability"]["value"]["exact"].as_str().map(str::to_owned);
            let Some(reported) = reported else {
                return usage("only exact probabilities can be re-verified");
            };
            let alpha = bias(params["alpha"].as_str().unwrap_or(""), "alpha")?;
            match probability::auto_exact(&family, &alpha).and_then(|e| e.exact) {
                Some(v) if sunflower_core::rational::to_ratio_string(&v) == reported => Ok("exact probability".into()),
                Some(v) => Err(format!("recomputed {} differs", sunflower_core::rational::to_ratio_string(&v))),
                None => return usage("the family is too large for an exact recomputation"),
            }
        }
        other => return usage(format!("nothing to verify for command `{other}`")),
    };
    let holds = outcome.is_ok();
    match outcome {
        Ok(what) => rep.set("verified", true).set("checked", what),
        Err(why) => rep.set("verified", false).set("reason", why),
    };
    Ok(Outcome { report: rep, holds })
}

fn experiment(what: ExperimentCmd, opts: &Opts) -> CliResult<Outcome> {
    match what {
        ExperimentCmd::Reduction => {
            let mut rep = Report::new("experiment reduction");
            let (file, family) = input_family(opts, &mut rep)?;
            let wf = file.weighted()?;
            let total = wf.total();
            if total == Rational::from_integer(0.into()) {
                return usage("the family has zero total weight");
            }
            let wf = wf.scaled(&(Rational::from_integer(1.into()) / total));
            let p_s = required(&opts.p, "p")?;
            let p = bias(&p_s, "p")?;
            let w_prime = opts.w_prime.unwrap_or(family.w().saturating_sub(1));
            let mode = match &opts.mode {
                None => SampleMode::FixedSize,
                Some(s) => SampleMode::parse(s).ok_or_else(|| CliError::Usage(format!("--mode: unknown `{s}`")))?,
            };
            let profile = match (&opts.kappa, &opts.profile) {
                (Some(k), _) => WeightProfile::kappa(&rational(k, "kappa")?, family.w())
                    .map_err(|e| CliError::Usage(format!("--kappa: {e}")))?,
                (None, Some(p)) => parse_profile(p)?,
                (None, None) => return usage("--kappa or --profile is required"),
            };
            let trials = opts.trials.unwrap_or(10_000);
            let seed = seed(opts);
            let a_s = opts.alpha.clone().unwrap_or_else(|| "1/2".into());
            let alpha_prime = bias(&a_s, "alpha")?;
            rep.param("p", p_s)
                .param("w_prime", w_prime)
                .param("mode", mode.name())
                .param("trials", trials)
                .param("seed", seed)
                .param("alpha", a_s)
                .param("kappa", opts.kappa.clone())
                .param("profile", opts.profile.clone());
            let spread_report = spread::is_spread(&wf, &profile)?;
            let s_w_prime = profile.get(w_prime);
            let sampler = BadMassSampler::new(&wf, &p, w_prime, mode, seed)?;
            let exp = parallel::bad_mass(&sampler, trials, &s_w_prime);
            // One reduction in detail, on the first sampled W.
            let w0 = reduction::RestrictionSampler::new(family.n(), &p, mode, seed)?.sample(0);
            let out = reduction::reduce(&wf, &w0, w_prime)?;
            let accounted = out.accounted_mass() == wf.total();
            let comp = reduction::composition_experiment(&out, &family, &alpha_prime, trials.min(10_000), seed ^ 1);
            let link_ok = out.link_domination.as_ref().is_none_or(|l| l.violation.is_none());
            rep.set("spread", spread_report.is_spread())
                .set(
                    "bad_mass",
                    json!({
                        "mean": report::rational(&exp.mean),
                        "bound": report::rational(&exp.bound),
                        "ratio": exp.ratio,
                        "within_bound": exp.within_bound,
                        "fixed_size": exp.fixed_size,
                    }),
                )
                .set(
                    "sample_reduction",
                    json!({
                        "w": report::set(&out.w),
                        "bad_indices": out.bad_indices,
                        "bad_mass": report::rational(&out.bad_mass),
                        "reduced_members": out.reduced.family().len(),
                        "contains_empty": out.contains_empty,
                        "mass_accounted": accounted,
                        "link_sets_checked": out.link_domination.as_ref().map(|l| l.checked),
                        "link_domination_holds": link_ok,
                    }),
                )
                .set(
                    "composition",
                    json!({
                        "trials": comp.trials,
                        "reduced_hits": comp.reduced_hits,
                        "original_hits": comp.original_hits,
                        "violations": comp.violations,
                    }),
                );
            let holds = exp.within_bound && accounted && link_ok && comp.violations == 0;
            Ok(Outcome { report: rep, holds })
        }
        ExperimentCmd::Janson => {
            let mut rep = Report::new("experiment janson");
            let (file, _) = input_family(opts, &mut rep)?;
            let wf = file.weighted()?;
            let a_s = required(&opts.alpha, "alpha")?;
            let alpha = bias(&a_s, "alpha")?;
            let beta = opts.beta.as_deref().map(|b| bias(b, "beta")).transpose()?;
            let mc = mc_params(opts);
            rep.param("alpha", a_s).param("beta", opts.beta.clone()).param("seed", mc.seed).param("samples", mc.samples);
            let j = reduction::janson_report(&wf, &alpha, beta.as_ref(), &mc)?;
            rep.set("scale", report::rational(&j.scale))
                .set("total_copies", j.total.to_string())
                .set("mu", report::rational(&j.mu))
                .set("delta", report::rational(&j.delta))
                .set("exponent", j.exponent)
                .set("bound", j.bound)
                .set("delta_ge_mu", j.delta_ge_mu)
                .set("nonsat", report::estimate(&j.nonsat))
                .set("original_nonsat", report::estimate(&j.original_nonsat))
                .set("bound_holds", j.bound_holds)
                .set(
                    "hypothesis",
                    j.hypothesis.as_ref().map_or(Value::Null, |h| {
                        json!({"kappa": h.kappa, "worst_ratio": h.worst_ratio, "holds": h.holds})
                    }),
                );
            Ok(Outcome { holds: j.bound_holds && j.delta_ge_mu, report: rep })
        }
        ExperimentCmd::Schedule => {
            let w_s = required(&opts.w, "w")?;
            let w = parse_width(&w_s)?;
            let a_s = required(&opts.alpha, "alpha")?;
            let b_s = required(&opts.beta, "beta")?;
            let alpha = to_f64(bias(&a_s, "alpha")?.value());
            let beta = to_f64(bias(&b_s, "beta")?.value());
            let mut rep = Report::new("experiment schedule");
            rep.param("w", w_s.clone()).param("alpha", a_s).param("beta", b_s);
            let kappa = match &opts.kappa {
                Some(k) => {
                    rep.param("kappa", k.clone());
                    to_f64(&rational(k, "kappa")?)
                }
                None => {
                    let variant = match &opts.variant {
                        None => KappaVariant::LogLog,
                        Some(v) => KappaVariant::parse(v).ok_or_else(|| CliError::Usage(format!("--variant: unknown `{v}`")))?,
                    };
                    let constant = opts.constant.unwrap_or(spread::DEFAULT_KAPPA_CONSTANT);
                    let kb = spread::kappa_bound(w, alpha, beta, variant, constant)?;
                    rep.param("variant", variant.name()).param("constant", constant);
                    rep.set("kappa_placeholder_constant", kb.placeholder_constant);
                    kb.value
                }
            };
            let mut input = ScheduleInput::new(w, alpha, beta, kappa);
            if let Some(e) = &opts.epsilon {
                input.epsilon = Some(to_f64(&rational(e, "epsilon")?));
            }
            input.w_star = opts.w_star;
            input.k_const = opts.k_const.unwrap_or(1.0);
            input.c_const = opts.c_const.unwrap_or(1.0);
            rep.param("epsilon", opts.epsilon.clone())
                .param("w_star", opts.w_star)
                .param("k_const", input.k_const)
                .param("c_const", input.c_const);
            let s = reduction::schedule(&input)?;
            let constraints: Vec<Value> = s
                .constraints
                .iter()
                .map(|c| json!({"name": c.name, "lhs": c.lhs, "relation": c.relation, "rhs": c.rhs, "pass": c.pass}))
                .collect();
            let steps: Vec<Value> = s
                .steps
                .iter()
                .map(|st| json!({"w": st.w, "ln_gamma": st.ln_gamma, "delta": st.delta}))
                .collect();
            rep.set("kappa", s.kappa)
                .set("epsilon", s.epsilon)
                .set("w_star", s.w_star)
                .set("r", s.r())
                .set("p", s.steps.first().map(|st| st.p))
                .set("delta_r", s.delta_r)
                .set("widths", json!(s.widths))
                .set("steps", steps)
                .set("constraints", constraints)
                .set("all_pass", s.all_pass());
            Ok(Outcome { holds: s.all_pass(), report: rep })
        }
        ExperimentCmd::Rainbow => {
            let mut rep = Report::new("experiment rainbow");
            let (_, family) = input_family(opts, &mut rep)?;
            let search = opts.search.as_deref().unwrap_or("pair").to_owned();
            let trials = opts.trials.unwrap_or(100);
            let seed = seed(opts);
            let anchor = opts.anchor.unwrap_or(0);
            let pal = match search.as_str() {
                "pair" | "anchored" => Palette::RedBlue,
                "triple" => Palette::RedGreenBlue,
                other => return usage(format!("--search: unknown search `{other}`")),
            };
            rep.param("search", search.clone()).param("trials", trials).param("seed", seed).param("palette", pal.name());
            if search == "anchored" {
                rep.param("anchor", anchor);
            }
            let mut found = 0u32;
            let mut witnesses = Vec::new();
            for t in 0..trials {
                let coloring = Coloring::random(family.n(), pal, seed, t);
                let hit: Option<Vec<usize>> = match search.as_str() {
                    "pair" => constructions::rainbow_pair_search(&family, &coloring)?.map(|(i, j)| vec![i, j]),
                    "triple" => constructions::rainbow_triple_search(&family, &coloring)?.map(|(i, j, k)| vec![i, j, k]),
                    _ => constructions::anchored_pair_search(&family, anchor, &coloring)?.map(|(i, j)| vec![i, j]),
                };
                found += u32::from(hit.is_some());
                if witnesses.len() < 10 {
                    witnesses.push(json!({"trial": t, "witness": hit}));
                }
            }
            let rate = if trials == 0 { 0.0 } else { f64::from(found) / f64::from(trials) };
            rep.set("found", found).set("rate", rate).set("first_trials", witnesses);
            Ok(Outcome { holds: 2 * found > trials, report: rep })
        }
        ExperimentCmd::Whitecover => {
            let mut rep = Report::new("experiment whitecover");
            let (_, family) = input_family(opts, &mut rep)?;
            let d_s = opts.delta.clone().unwrap_or_else(|| "1/2".into());
            let delta = bias(&d_s, "delta")?;
            let trials = opts.trials.unwrap_or(1000);
            let seed = seed(opts);
            rep.param("delta", d_s).param("trials", trials).param("seed", seed);
            let stats = parallel::white_cover(&family, &delta, trials, seed);
            let holds = stats.mean_uncovered <= stats.mean_bound;
            rep.set("mean_uncovered", stats.mean_uncovered)
                .set("mean_bound", stats.mean_bound)
                .set("multiplicity_threshold", stats.multiplicity_threshold)
                .set("fraction_target", stats.fraction_target)
                .set("trials_meeting_target", stats.trials_meeting_target)
                .set("mean_within_bound", holds);
            Ok(Outcome { report: rep, holds })
        }
    }
}

fn parse_matrices(s: &str) -> CliResult<Vec<Vec<Vec<u64>>>> {
    s.split('|')
        .map(|m| {
            m.split(';')
                .map(|row| {
                    row.split(',')
                        .map(|x| x.trim().parse::<u64>().map_err(|_| CliError::Usage(format!("--matrices: bad entry `{x}`"))))
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn apps_cmd(what: AppsCmd, opts: &Opts) -> CliResult<Outcome> {
    match what {
        AppsCmd::Kneser => {
            let (n, k) = (required(&opts.n, "n")?, required(&opts.k, "k")?);
            let mut rep = Report::new("apps kneser");
            rep.param("n", n).param("k", k);
            let (inst, searched) = match &opts.pi {
                Some(pi) => {
                    let pi: Vec<usize> = pi
                        .split(',')
                        .map(|x| x.trim().parse().map_err(|_| CliError::Usage(format!("--pi: bad index `{x}`"))))
                        .collect::<CliResult<_>>()?;
                    rep.param("pi", json!(pi));
                    (KneserInstance::new(n, k, pi)?, None)
                }
                None => {
                    let budget = opts.budget.unwrap_or(1_000_000);
                    rep.param("budget", budget);
                    let s = apps::search_packings(n, k, budget)?;
                    let inst = match &s.packing {
                        Some(pi) => KneserInstance::new(n, k, pi.clone())?,
                        None => KneserInstance::identity(n, k)?,
                    };
                    (inst, Some(s))
                }
            };
            if let Some(s) = &searched {
                rep.set(
                    "search",
                    json!({"examined": s.examined, "packings": s.packings, "exhausted": s.exhausted, "first": s.packing}),
                );
            }
            let valid = apps::verify_packing(&inst);
            let h = apps::packing_hypergraph(&inst)?;
            rep.set("pi", json!(inst.pi()))
                .set("packing", valid)
                .set("violation", json!(apps::first_packing_violation(&inst)))
                .set("hypergraph_intersecting", h.is_intersecting())
                .set("hypergraph", serde_json::to_value(FamilyFile::from_family(&h)).unwrap());
            Ok(Outcome { report: rep, holds: valid })
        }
        AppsCmd::Ajt => {
            let p = required(&opts.p, "p")?;
            let p: u64 = p.parse().map_err(|_| CliError::Usage(format!("--p: expected a prime, got `{p}`")))?;
            let seed = seed(opts);
            let mut rep = Report::new("apps ajt");
            rep.param("p", p);
            let inst = match (&opts.matrices, opts.random) {
                (Some(m), false) => {
                    rep.param("matrices", m.clone());
                    AjtInstance::new(p, parse_matrices(m)?)?
                }
                (None, true) => {
                    let n = required(&opts.n, "n")?;
                    let r = opts.r.unwrap_or(2);
                    rep.param("n", n).param("r", r).param("seed", seed);
                    AjtInstance::random(p, n, r, seed, 0)?
                }
                _ => return usage("give exactly one of --matrices or --random"),
            };
            let solution = apps::ajt_search(&inst)?;
            let family = apps::ajt_family(&inst)?;
            let links = opts.links.unwrap_or(32);
            let samples = apps::sample_link_sets(&inst, links, 2 * inst.r(), seed);
            let checks: Vec<_> = samples.iter().map(|t| apps::ajt_link_check(&inst, t)).collect();
            let all_bounds = checks.iter().all(|c| c.bound_holds);
            rep.param("links", links);
            rep.set("matrices", json!(inst.matrices()))
                .set("solution", json!(solution))
                .set("family_size", family.len())
                .set("w", family.w())
                .set("intersecting", solution.is_none().then(|| family.is_intersecting()))
                .set("disjoint_pairs_yield_solutions", apps::disjoint_pairs_yield_solutions(&inst, &family))
                .set(
                    "link_checks",
                    checks
                        .iter()
                        .map(|c| json!({"t": report::set(&c.t), "count": c.count.to_string(), "bound_holds": c.bound_holds}))
                        .collect::<Vec<_>>(),
                )
                .set("link_bounds_hold", all_bounds);
            Ok(Outcome { holds: solution.is_some(), report: rep })
        }
    }
}
