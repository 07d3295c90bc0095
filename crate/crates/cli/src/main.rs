mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use spectra::apps::{app1_spec, app1_spectrum_periodic, app2_kappa_plus};
use spectra::cfrac::{compare_cf, convergents, eval_finite, value};
use spectra::exact::{parse_rational, precision_bits, rational_string, set_precision_bits};
use spectra::hall::{aperture_ratio, certify_hall_interval, f4_cantor, interval_solver, Bivariate, DEFAULT_APERTURE_DEPTH};
use spectra::lattice::{
    canonicalize_point, indices_from_pivots, mono_canonical, pivots_of, reconstruct_biinfinite, shift_canonical,
    shift_canonical_seq, LatticeKind,
};
use spectra::mg2::{classify_low_spectrum, lower_part_table, mg2_hall_certify, perron_gap_search};
use spectra::perron::{necklaces, tau_enumerate, Limit, TauEntry};
use spectra::systole::{l2_log_systole, log_systole, mordell_l2, profile_rows, spectrum_value_periodic, sys_linf};
use spectra::{CantorSet, Error, ExpansionSequence, Lattice2D, Real, SpectrumKind};

use output::{emit, Format, Report};

#[derive(Parser, Debug)]
#[command(name = "spectra", version, about = "Diophantine spectra of planar unimodular lattices")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write to a file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for commands that sample.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Cmd {
    /// Continued fractions.
    #[command(subcommand)]
    Cf(CfCmd),
    /// Lattices and pivot chains.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Log-systole functions.
    #[command(subcommand)]
    Systole(SystoleCmd),
    /// Spectrum values of periodic sequences.
    #[command(subcommand)]
    Spectrum(SpectrumCmd),
    /// The Mordell-Gruber spectrum.
    #[command(subcommand)]
    Mg2(Mg2Cmd),
    /// Cantor sets and the interval solver.
    #[command(subcommand)]
    Hall(HallCmd),
}

#[derive(Args, Debug, Serialize)]
struct SeqArg {
    /// Sequence as inline JSON or a path to a JSON file.
    #[arg(long)]
    seq: Option<String>,
    /// Shorthand for a finite sequence: comma separated terms.
    #[arg(long)]
    terms: Option<String>,
}

#[derive(Args, Debug, Serialize)]
struct LatticeArg {
    /// `integer`, `hexagonal`, inline JSON `{"basis": ...}` or a path.
    #[arg(long)]
    lattice: Option<String>,
    /// Build the lattice from an index sequence instead.
    #[arg(long)]
    seq: Option<String>,
    /// Pivot depth when reconstructing from `--seq`.
    #[arg(long, default_value_t = 24)]
    depth: usize,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum CfCmd {
    Eval(SeqArg),
    Convergents {
        #[command(flatten)]
        input: SeqArg,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    Compare {
        #[command(flatten)]
        input: SeqArg,
        /// The second sequence.
        #[arg(long)]
        other: String,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum LatticeCmd {
    Pivots {
        #[command(flatten)]
        input: LatticeArg,
        #[arg(long, default_value_t = 10.0)]
        y_max: f64,
    },
    Indices {
        #[command(flatten)]
        input: LatticeArg,
        #[arg(long, default_value_t = 10.0)]
        y_max: f64,
    },
    Reconstruct {
        #[arg(long)]
        seq: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Shift-canonical period of `--seq`, or the canonical form of a mono-infinite lattice.
    Canonicalize {
        #[arg(long)]
        seq: Option<String>,
        #[arg(long)]
        lattice: Option<String>,
        /// A point `x,y` off the axes.
        #[arg(long)]
        point: Option<String>,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SystoleCmd {
    /// Rows `(t, W, W₂)`.
    Plot {
        #[command(flatten)]
        input: LatticeArg,
        #[arg(long, default_value = "-2:2")]
        t_range: String,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    Value {
        #[command(flatten)]
        input: LatticeArg,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t: f64,
    },
    L2 {
        #[command(flatten)]
        input: LatticeArg,
        #[arg(long, default_value = "-5:5")]
        t_range: String,
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
enum Kind {
    #[value(name = "L")]
    #[serde(rename = "L")]
    L,
    #[value(name = "M")]
    #[serde(rename = "M")]
    M,
    #[value(name = "D")]
    #[serde(rename = "D")]
    D,
    #[value(name = "MG2")]
    #[serde(rename = "MG2")]
    Mg2,
    #[value(name = "MG2plus")]
    #[serde(rename = "MG2plus")]
    Mg2Plus,
    #[value(name = "Sm")]
    #[serde(rename = "Sm")]
    Sm,
    #[value(name = "Im")]
    #[serde(rename = "Im")]
    Im,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SpectrumCmd {
    Value {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        seq: String,
        /// Index of the S_m / I_m family.
        #[arg(long, allow_hyphen_values = true)]
        m: Option<i64>,
    },
    /// Values over all periods within the bounds.
    Tau {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 4)]
        max_period: usize,
        #[arg(long, default_value_t = 3)]
        max_entry: u64,
        #[arg(long, allow_hyphen_values = true)]
        m: Option<i64>,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Mg2Cmd {
    LowerPart {
        #[arg(long, default_value_t = 3)]
        t_max: usize,
    },
    Classify {
        #[arg(long, default_value_t = 6)]
        max_period: usize,
        #[arg(long, default_value_t = 3)]
        max_entry: u64,
    },
    GapSearch {
        #[arg(long, default_value_t = 6)]
        max_period: usize,
        #[arg(long, default_value_t = 4)]
        max_entry: u64,
    },
    HallCertify {
        /// Target value, `p/q` or a decimal.
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
enum SetName {
    Ternary,
    F4,
}

#[derive(Args, Debug, Serialize)]
struct PairArg {
    #[arg(long, value_enum, default_value = "ternary")]
    set: SetName,
    /// `p,q` for g = pα + qβ.
    #[arg(long, default_value = "1,1")]
    g: String,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum HallCmd {
    Aperture {
        #[arg(long, value_enum, default_value = "ternary")]
        set: SetName,
        #[arg(long, default_value_t = DEFAULT_APERTURE_DEPTH)]
        depth: usize,
    },
    /// Solve g(α, β) = target; without `--target` one is drawn from the seed.
    Solve {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    Certify {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long, default_value_t = 11)]
        grid: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

// ---------------------------------------------------------------------------

fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn read_json(src: &str) -> Result<Value, Error> {
    let text = if src.trim_start().starts_with(['{', '[']) {
        src.to_string()
    } else {
        std::fs::read_to_string(src).map_err(|e| invalid(format!("{src}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| invalid(format!("bad JSON: {e}")))
}

fn parse_seq(src: &str) -> Result<ExpansionSequence, Error> {
    let seq: ExpansionSequence = serde_json::from_value(read_json(src)?).map_err(|e| invalid(e.to_string()))?;
    seq.validate()?;
    Ok(seq)
}

fn parse_terms(s: &str) -> Result<Vec<u64>, Error> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<u64>().map_err(|_| invalid(format!("bad term {t:?}"))))
        .collect()
}

fn seq_input(a: &SeqArg) -> Result<ExpansionSequence, Error> {
    match (&a.seq, &a.terms) {
        (Some(s), None) => parse_seq(s),
        (None, Some(t)) => {
            let seq = ExpansionSequence::finite(parse_terms(t)?, true);
            seq.validate()?;
            Ok(seq)
        }
        _ => Err(invalid("give exactly one of --seq, --terms")),
    }
}

fn lattice_from(spec: &str) -> Result<Lattice2D, Error> {
    match spec {
        "integer" | "Z2" => Ok(Lattice2D::integer()),
        "hexagonal" | "hex" => Ok(Lattice2D::hexagonal()),
        s => Lattice2D::from_json(&read_json(s)?),
    }
}

fn lattice_input(a: &LatticeArg) -> Result<Lattice2D, Error> {
    match (&a.lattice, &a.seq) {
        (Some(l), None) => lattice_from(l),
        (None, Some(s)) => Ok(reconstruct_biinfinite(&parse_seq(s)?, a.depth)?.0),
        _ => Err(invalid("give exactly one of --lattice, --seq")),
    }
}

fn parse_range(s: &str) -> Result<(f64, f64), Error> {
    let (a, b) = s.split_once(':').ok_or_else(|| invalid("range must be a:b"))?;
    let p = |x: &str| x.trim().parse::<f64>().map_err(|_| invalid(format!("bad number {x:?}")));
    let (a, b) = (p(a)?, p(b)?);
    if a > b {
        return Err(invalid("empty range"));
    }
    Ok((a, b))
}

fn parse_real(s: &str) -> Result<Real, Error> {
    parse_rational(s).map(|r| Real::rational(&r)).ok_or_else(|| invalid(format!("bad number {s:?}")))
}

fn parse_pair(s: &str) -> Result<(i64, i64), Error> {
    let v = parse_terms(s)?;
    match v[..] {
        [p, q] if p > 0 && q > 0 => Ok((p as i64, q as i64)),
        _ => Err(invalid("--g must be p,q with p, q ≥ 1")),
    }
}

fn cantor(n: SetName) -> CantorSet {
    match n {
        SetName::Ternary => CantorSet::ternary(),
        SetName::F4 => f4_cantor(),
    }
}

fn real_json(r: &Real) -> Value {
    json!({"exact": r.to_string(), "decimal": r.to_decimal(15), "width": r.width()})
}

fn pivots_json(pts: &[[Real; 2]]) -> Value {
    Value::Array(
        pts.iter()
            .map(|p| json!({"x": p[0].to_string(), "y": p[1].to_string(), "x_decimal": p[0].to_decimal(15), "y_decimal": p[1].to_decimal(15)}))
            .collect(),
    )
}

fn tau_table(entries: &[TauEntry]) -> Report {
    let rows = entries
        .iter()
        .map(|e| {
            let period: Vec<String> = e.witness_period.iter().map(u64::to_string).collect();
            vec![e.value.to_string(), e.value.to_decimal(15), period.join(" "), e.offset.to_string()]
        })
        .collect();
    Report::Table { columns: vec!["exact", "decimal", "witness_period", "offset"], rows, extra: json!({"count": entries.len()}) }
}

// ---------------------------------------------------------------------------

fn run_cf(cmd: &CfCmd) -> Result<Report, Error> {
    match cmd {
        CfCmd::Eval(a) => {
            if let Some(t) = &a.terms {
                let q = eval_finite(&parse_terms(t)?)?;
                return Ok(Report::Record(json!({"exact": rational_string(&q), "decimal": Real::rational(&q).to_decimal(15)})));
            }
            let v = value(&seq_input(a)?)?;
            Ok(Report::Record(real_json(&v)))
        }
        CfCmd::Convergents { input, depth } => {
            let cs = convergents(&seq_input(input)?, *depth)?;
            let rows = cs
                .iter()
                .enumerate()
                .map(|(k, c)| vec![(k + 1).to_string(), c.numer().to_string(), c.denom().to_string(), rational_string(c)])
                .collect();
            Ok(Report::Table { columns: vec!["k", "p", "q", "value"], rows, extra: json!({}) })
        }
        CfCmd::Compare { input, other } => {
            let ord = compare_cf(&seq_input(input)?, &parse_seq(other)?)?;
            Ok(Report::Record(json!({"ordering": format!("{ord:?}")})))
        }
    }
}

fn run_lattice(cmd: &LatticeCmd) -> Result<Report, Error> {
    match cmd {
        LatticeCmd::Pivots { input, y_max } => {
            let chain = pivots_of(&lattice_input(input)?, *y_max)?;
            Ok(Report::Record(json!({
                "pivots": pivots_json(&chain.pivots), "origin": chain.origin,
                "ends": [chain.ends.0, chain.ends.1],
            })))
        }
        LatticeCmd::Indices { input, y_max } => {
            let chain = pivots_of(&lattice_input(input)?, *y_max)?;
            let seq = indices_from_pivots(&chain)?;
            Ok(Report::Record(json!({"sequence": seq, "display": seq.to_string()})))
        }
        LatticeCmd::Reconstruct { seq, depth } => {
            let (lat, chain) = reconstruct_biinfinite(&parse_seq(seq)?, *depth)?;
            Ok(Report::Record(json!({
                "lattice": lat.to_json(), "unimodular": lat.is_unimodular(),
                "pivots": pivots_json(&chain.pivots), "origin": chain.origin,
            })))
        }
        LatticeCmd::Canonicalize { seq, lattice, point } => match (seq, lattice, point) {
            (Some(s), None, None) => {
                let s = parse_seq(s)?;
                let c = shift_canonical_seq(&s)?;
                Ok(Report::Record(json!({"sequence": c, "period": shift_canonical(c.pure_period().unwrap_or(&[]))})))
            }
            (None, Some(l), None) => {
                let lat = lattice_from(l)?;
                if !matches!(lat.kind(), LatticeKind::MonoInfiniteX | LatticeKind::MonoInfiniteY) {
                    return Err(Error::UnsupportedDomain(format!("lattice kind {:?} is not mono-infinite", lat.kind())));
                }
                let (t, alpha) = mono_canonical(&lat)?;
                Ok(Report::Record(json!({"t": t, "alpha": real_json(&alpha)})))
            }
            (None, None, Some(p)) => {
                let xy: Vec<f64> = p
                    .split(',')
                    .map(|x| x.trim().parse::<f64>().map_err(|_| invalid(format!("bad coordinate {x:?}"))))
                    .collect::<Result<_, _>>()?;
                let [x, y] = xy[..] else { return Err(invalid("--point must be x,y")) };
                let h = canonicalize_point([x, y])?;
                Ok(Report::Record(json!({"t": h.t, "sx": h.sx, "sy": h.sy, "image": h.apply([x, y])})))
            }
            _ => Err(invalid("give exactly one of --seq, --lattice, --point")),
        },
    }
}

fn run_systole(cmd: &SystoleCmd) -> Result<Report, Error> {
    match cmd {
        SystoleCmd::Plot { input, t_range, step } => {
            let (a, b) = parse_range(t_range)?;
            let rows = profile_rows(&lattice_input(input)?, a, b, *step)?
                .into_iter()
                .map(|(t, w, w2)| vec![format!("{t:.6}"), format!("{w:.12}"), format!("{w2:.12}")])
                .collect();
            Ok(Report::Table { columns: vec!["t", "W", "W2"], rows, extra: json!({}) })
        }
        SystoleCmd::Value { input, t } => {
            let lat = lattice_input(input)?;
            let s = sys_linf(&lat)?;
            Ok(Report::Record(json!({
                "sys_linf": real_json(&s), "t": t,
                "W": log_systole(&lat, *t)?, "W2": l2_log_systole(&lat, *t)?,
            })))
        }
        SystoleCmd::L2 { input, t_range, step } => {
            let est = mordell_l2(&lattice_input(input)?, Some(parse_range(t_range)?), *step)?;
            Ok(Report::Record(json!({
                "value": est.value, "argmax": est.argmax, "lower": est.lower, "upper": est.upper,
                "window_flagged": est.window_flagged,
            })))
        }
    }
}

fn family_m(kind: Kind, m: Option<i64>) -> Result<i64, Error> {
    match (kind, m) {
        (Kind::Sm, None) => Ok(1),
        (Kind::Im, None) => Ok(0),
        (Kind::Sm, Some(m)) if m >= 1 => Ok(m),
        (Kind::Im, Some(m)) if m <= 0 => Ok(m),
        (Kind::Sm | Kind::Im, Some(m)) => Err(invalid(format!("m = {m} is outside the family (S: m ≥ 1, I: m ≤ 0)"))),
        (_, _) => Ok(0),
    }
}

fn kappa_plus_tau(max_period: usize, max_entry: u64) -> Result<Vec<TauEntry>, Error> {
    // κ⁺ depends on the parity of the starting offset, so both alignments count
    let mut out: Vec<TauEntry> = Vec::new();
    for p in necklaces(max_period, max_entry) {
        for r in 0..p.len().min(2) {
            let rot: Vec<u64> = p[r..].iter().chain(&p[..r]).copied().collect();
            let (v, k) = app2_kappa_plus(&ExpansionSequence::periodic(rot.clone()))?;
            let pos = out.binary_search_by(|e| e.value.cmp_loose(&v));
            if let Err(i) = pos {
                out.insert(i, TauEntry { value: v, witness_period: rot, offset: k });
            }
        }
    }
    Ok(out)
}

fn run_spectrum(cmd: &SpectrumCmd) -> Result<Report, Error> {
    match cmd {
        SpectrumCmd::Value { kind, seq, m } => {
            let s = parse_seq(seq)?;
            let (v, offset) = match kind {
                Kind::L | Kind::M | Kind::D | Kind::Mg2 => {
                    let which = match kind {
                        Kind::L => SpectrumKind::Lagrange,
                        Kind::M => SpectrumKind::Markov,
                        Kind::D => SpectrumKind::Dirichlet,
                        _ => SpectrumKind::MordellGruber,
                    };
                    let r = spectrum_value_periodic(&s, which)?;
                    (r.value, r.offset)
                }
                Kind::Mg2Plus => app2_kappa_plus(&s)?,
                Kind::Sm | Kind::Im => {
                    let m = family_m(*kind, *m)?;
                    let lim = if *kind == Kind::Sm { Limit::Sup } else { Limit::Inf };
                    app1_spectrum_periodic(m, &s, lim)?
                }
            };
            let mut rec = real_json(&v);
            rec["offset"] = json!(offset);
            Ok(Report::Record(rec))
        }
        SpectrumCmd::Tau { kind, max_period, max_entry, m } => {
            let entries = match kind {
                Kind::L | Kind::M => tau_enumerate(&spectra::PerronSpec::markov(), Limit::Sup, *max_period, *max_entry)?,
                Kind::D | Kind::Mg2 => {
                    tau_enumerate(&spectra::PerronSpec::mordell_gruber(), Limit::Sup, *max_period, *max_entry)?
                }
                Kind::Mg2Plus => kappa_plus_tau(*max_period, *max_entry)?,
                Kind::Sm => tau_enumerate(&app1_spec(family_m(*kind, *m)?), Limit::Sup, *max_period, *max_entry)?,
                Kind::Im => tau_enumerate(&app1_spec(family_m(*kind, *m)?), Limit::Inf, *max_period, *max_entry)?,
            };
            Ok(tau_table(&entries))
        }
    }
}

fn run_mg2(cmd: &Mg2Cmd) -> Result<Report, Error> {
    match cmd {
        Mg2Cmd::LowerPart { t_max } => {
            let rows = lower_part_table(*t_max)?
                .into_iter()
                .map(|r| vec![r.label, r.value.to_string(), r.decimal, r.limit.to_string()])
                .collect();
            Ok(Report::Table { columns: vec!["label", "exact", "decimal", "limit"], rows, extra: json!({}) })
        }
        Mg2Cmd::Classify { max_period, max_entry } => {
            let rep = classify_low_spectrum(*max_period, *max_entry)?;
            let below: Vec<Value> = rep
                .below
                .iter()
                .map(|(p, v)| json!({"period": p, "exact": v.to_string(), "decimal": v.to_decimal(15)}))
                .collect();
            Ok(Report::Record(json!({
                "checked": rep.checked, "below": below, "violations": rep.violations,
                "even_k_below": rep.even_k_below, "minimum_only_all_ones": rep.minimum_only_all_ones, "pass": rep.pass,
            })))
        }
        Mg2Cmd::GapSearch { max_period, max_entry } => {
            let rep = perron_gap_search(*max_period, *max_entry)?;
            Ok(Report::Record(json!({
                "checked": rep.checked,
                "interior": rep.interior.iter().map(TauEntry::to_json).collect::<Vec<_>>(),
                "left": rep.left.as_ref().map(TauEntry::to_json),
                "right": rep.right.as_ref().map(TauEntry::to_json),
                "pass": rep.pass,
            })))
        }
        Mg2Cmd::HallCertify { target, tol } => {
            let w = mg2_hall_certify(&parse_real(target)?, *tol)?;
            Ok(Report::Record(w.to_json()))
        }
    }
}

fn run_hall(cmd: &HallCmd, seed: u64) -> Result<Report, Error> {
    match cmd {
        HallCmd::Aperture { set, depth } => {
            let rep = aperture_ratio(&cantor(*set), *depth)?;
            Ok(Report::Record(json!({
                "set": cantor(*set).name(), "depth": depth,
                "sup": real_json(&rep.sup),
                "per_level": rep.per_level.iter().map(|r| r.to_decimal(15)).collect::<Vec<_>>(),
            })))
        }
        HallCmd::Solve { pair, target, tol } => {
            let (p, q) = parse_pair(&pair.g)?;
            let g = Bivariate::linear(p, q);
            let c = cantor(pair.set);
            let h = match target {
                Some(t) => parse_real(t)?,
                None => {
                    let (lo, hi) = (c.root().lo, c.root().hi);
                    let lo = g.eval(&lo, &lo)?.to_f64();
                    let hi = g.eval(&hi, &hi)?.to_f64();
                    let x = ChaCha8Rng::seed_from_u64(seed).gen_range(lo..=hi);
                    Real::from_f64_exact(x).ok_or_else(|| invalid("sampled target is not finite"))?
                }
            };
            let w = interval_solver(&g, &c, &c, &h, *tol)?;
            Ok(Report::Record(w.to_json(&h)))
        }
        HallCmd::Certify { pair, grid, tol } => {
            let (p, q) = parse_pair(&pair.g)?;
            let c = cantor(pair.set);
            let rep = certify_hall_interval(&Bivariate::linear(p, q), &c, &c, *grid, *tol)?;
            Ok(Report::Record(rep.to_json()))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::PrecisionExhausted(_) => 4,
        Error::RatioViolated(_) | Error::CertificationFailed(_) | Error::BudgetExceeded(_) => 3,
        Error::DivisionByZero | Error::UnsupportedDomain(_) | Error::Invalid(_) | Error::OutOfRange(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(bits) = std::env::var("SPECTRA_PRECISION_BITS") {
        match bits.trim().parse::<u32>() {
            Ok(b) => set_precision_bits(b),
            Err(_) => {
                eprintln!("error: SPECTRA_PRECISION_BITS must be an integer, got {bits:?}");
                return ExitCode::from(2);
            }
        }
    }
    let result = match &cli.cmd {
        Cmd::Cf(c) => run_cf(c),
        Cmd::Lattice(c) => run_lattice(c),
        Cmd::Systole(c) => run_systole(c),
        Cmd::Spectrum(c) => run_spectrum(c),
        Cmd::Mg2(c) => run_mg2(c),
        Cmd::Hall(c) => run_hall(c, cli.seed),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let meta = json!({
        "command": serde_json::to_value(&cli.cmd).expect("serializable"),
        "precision_bits": precision_bits(),
        "seed": cli.seed,
        "version": env!("CARGO_PKG_VERSION"),
    });
    match emit(&report, &meta, cli.format, cli.out.as_deref()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        _ => {}
    }
    ExitCode::SUCCESS
}
