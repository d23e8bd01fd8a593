//! Command-line front end: polynomial and curve parsing, command dispatch,
//! and structured JSON reports. Numbers are emitted as exact strings, never
//! floats, and reports are byte-stable for fixed inputs and seeds.

use crate::brauer::{family_divisors, residue_probe, scan_evaluation, DivisorDatum, SymbolPair};
use crate::finite_field::FieldCtx;
use crate::kummer::{
    build_descent_matrix, descent_check, legendre_transform, two_torsion, CurveParams,
};
use crate::padic::LocalField;
use crate::ratpoly::RatPoly;
use crate::scenarios;
use crate::surface::{count_points, is_ordinary_k3, HomogeneousPoly};
use crate::swan::{role_verdict, K3Hypotheses, ReductionType};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Syntax { pos: usize, msg: String },
    UnknownVariable { pos: usize, name: String },
    NotHomogeneous,
    BadInput(String),
    Compute(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Syntax { pos, msg } => write!(f, "syntax error at position {pos}: {msg}"),
            CliError::UnknownVariable { pos, name } => {
                write!(f, "unknown variable '{name}' at position {pos}")
            }
            CliError::NotHomogeneous => {
                write!(f, "polynomial is not homogeneous of the expected degree")
            }
            CliError::BadInput(s) => write!(f, "bad input: {s}"),
            CliError::Compute(s) => write!(f, "computation failed: {s}"),
        }
    }
}

impl std::error::Error for CliError {}

// ---------------------------------------------------------------------------
// polynomial grammar: terms joined by + / -; each term an optional rational
// coefficient, optional '*', variables from the declared set with optional
// '^' exponents; whitespace ignored
// ---------------------------------------------------------------------------

struct Tokens<'a> {
    chars: Vec<char>,
    pos: usize,
    vars: &'a [&'a str],
}

impl<'a> Tokens<'a> {
    fn new(text: &str, vars: &'a [&'a str]) -> Tokens<'a> {
        Tokens {
            chars: text.chars().collect(),
            pos: 0,
            vars,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        self.skip_ws();
        let c = self.chars.get(self.pos).copied();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn integer(&mut self) -> Result<BigInt, CliError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(CliError::Syntax {
                pos: start,
                msg: "expected an integer".into(),
            });
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<BigInt>().map_err(|_| CliError::Syntax {
            pos: start,
            msg: "integer out of range".into(),
        })
    }

    fn try_variable(&mut self) -> Result<Option<usize>, CliError> {
        self.skip_ws();
        let start = self.pos;
        if !self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphabetic())
        {
            return Ok(None);
        }
        let mut end = self.pos + 1;
        // allow alphanumeric tails like x1
        while self.chars.get(end).is_some_and(|c| c.is_ascii_alphanumeric()) {
            end += 1;
        }
        let name: String = self.chars[start..end].iter().collect();
        match self.vars.iter().position(|v| *v == name) {
            Some(i) => {
                self.pos = end;
                Ok(Some(i))
            }
            None => Err(CliError::UnknownVariable { pos: start, name }),
        }
    }
}

/// Parse the polynomial grammar over the declared variables (at most 4).
pub fn parse_polynomial_raw(text: &str, vars: &[&str]) -> Result<RatPoly, CliError> {
    assert!(vars.len() <= 4);
    let mut t = Tokens::new(text, vars);
    let mut poly = RatPoly::zero();
    let mut first = true;
    loop {
        t.skip_ws();
        if t.pos >= t.chars.len() {
            if first {
                return Err(CliError::Syntax {
                    pos: t.pos,
                    msg: "empty polynomial".into(),
                });
            }
            break;
        }
        // sign
        let mut sign = BigInt::one();
        match t.peek() {
            Some('+') => {
                t.bump();
            }
            Some('-') => {
                t.bump();
                sign = -sign;
            }
            _ if first => {}
            Some(c) => {
                return Err(CliError::Syntax {
                    pos: t.pos,
                    msg: format!("expected '+' or '-', found '{c}'"),
                })
            }
            None => break,
        }
        first = false;
        // optional coefficient
        let mut coeff = BigRational::from_integer(sign);
        let mut saw_coeff = false;
        if t.peek().is_some_and(|c| c.is_ascii_digit()) {
            let n = t.integer()?;
            saw_coeff = true;
            if t.peek() == Some('/') {
                t.bump();
                let d = t.integer()?;
                if d == BigInt::from(0) {
                    return Err(CliError::Syntax {
                        pos: t.pos,
                        msg: "zero denominator".into(),
                    });
                }
                coeff *= BigRational::new(n, d);
            } else {
                coeff *= BigRational::from_integer(n);
            }
        }
        if t.peek() == Some('*') {
            t.bump();
        }
        // variable factors
        let mut exps = [0u16; 4];
        let mut saw_var = false;
        loop {
            match t.try_variable()? {
                Some(vi) => {
                    saw_var = true;
                    let mut e = 1u16;
                    if t.peek() == Some('^') {
                        t.bump();
                        let n = t.integer()?;
                        e = u16::try_from(n).map_err(|_| CliError::Syntax {
                            pos: t.pos,
                            msg: "exponent too large".into(),
                        })?;
                    }
                    exps[vi] += e;
                    if t.peek() == Some('*') {
                        t.bump();
                        continue;
                    }
                }
                None => break,
            }
        }
        if !saw_var && !saw_coeff {
            return Err(CliError::Syntax {
                pos: t.pos,
                msg: "expected a term".into(),
            });
        }
        poly.add_term(coeff, exps);
    }
    Ok(poly)
}

/// Parse a homogeneous polynomial in x, y, z, w, optionally checking the
/// total degree.
pub fn parse_polynomial(
    text: &str,
    expected_degree: Option<u32>,
) -> Result<HomogeneousPoly, CliError> {
    let poly = parse_polynomial_raw(text, &["x", "y", "z", "w"])?;
    let h = HomogeneousPoly::new(poly).map_err(|_| CliError::NotHomogeneous)?;
    if let Some(d) = expected_degree {
        if h.degree() != d {
            return Err(CliError::NotHomogeneous);
        }
    }
    Ok(h)
}

/// Pretty-print back into the accepted grammar.
pub fn print_polynomial(f: &HomogeneousPoly) -> String {
    f.poly().display(&["x", "y", "z", "w"])
}

fn parse_curve(text: &str) -> Result<CurveParams, CliError> {
    let parts: Vec<&str> = text.split(',').map(|s| s.trim()).collect();
    if parts.len() != 4 {
        return Err(CliError::BadInput(format!(
            "curve format is 'delta,a,b,c', got '{text}'"
        )));
    }
    let nums: Result<Vec<i64>, _> = parts.iter().map(|s| s.parse::<i64>()).collect();
    let nums = nums.map_err(|e| CliError::BadInput(format!("curve integers: {e}")))?;
    if nums[0] != 0 && nums[0] != 1 {
        return Err(CliError::BadInput("delta must be 0 or 1".into()));
    }
    CurveParams::new(nums[0] as u8, nums[1], nums[2], nums[3])
        .map_err(|e| CliError::BadInput(format!("{e}")))
}

fn parse_modulus(text: &str, p: u64) -> Result<Vec<u64>, CliError> {
    let poly = parse_polynomial_raw(text, &["t"])?;
    let mut out = vec![];
    for (e, c) in poly.terms() {
        let deg = e[0] as usize;
        if out.len() <= deg {
            out.resize(deg + 1, 0);
        }
        if !c.denom().is_one() {
            return Err(CliError::BadInput("modulus needs integer coefficients".into()));
        }
        let pb = BigInt::from(p);
        let r = ((c.numer() % &pb) + &pb) % &pb;
        out[deg] = u64::try_from(r).unwrap();
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

#[derive(Parser, Debug)]
#[command(
    name = "wildbrauer",
    about = "Brauer-Manin obstruction computations at primes of good reduction",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count projective points of a homogeneous surface over F_{p^n}.
    Count {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// monic modulus in t for the extension field, e.g. "t^2+1"
        #[arg(long)]
        modulus: Option<String>,
    },
    /// Decide ordinarity of a K3 reduction by the counting criterion.
    Ordinary {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        p: u64,
        /// comma-separated extension depths, e.g. 1,2
        #[arg(long, default_value = "1,2")]
        depths: String,
    },
    /// Scan the evaluation map of a quaternion symbol over residue discs.
    Evaluate {
        #[arg(long, allow_hyphen_values = true)]
        surface: String,
        #[arg(long, allow_hyphen_values = true)]
        f_num: String,
        #[arg(long, allow_hyphen_values = true)]
        f_den: String,
        #[arg(long, allow_hyphen_values = true)]
        g_num: String,
        #[arg(long, allow_hyphen_values = true)]
        g_den: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 4)]
        disc_depth: u32,
        #[arg(long, default_value_t = 12)]
        precision: i64,
        #[arg(long, default_value_t = 500)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Tame residue of a symbol along a divisor: symbolic class and probes.
    Residue {
        #[arg(long, default_value_t = 0)]
        va: i64,
        #[arg(long, default_value_t = 0)]
        vb: i64,
        /// built-in family divisor sampler: d1 or d2
        #[arg(long)]
        divisor: Option<String>,
        #[arg(long, default_value_t = 1)]
        alpha_sq: i64,
        /// comma-separated field orders, e.g. "3,5,9"
        #[arg(long, default_value = "3,5")]
        fields: String,
    },
    /// Build and classify the chart 2-form of a quartic surface.
    Forms {
        #[arg(long, allow_hyphen_values = true)]
        surface: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        chart_p: usize,
        #[arg(long, default_value_t = 3)]
        chart_q: usize,
    },
    /// Two-torsion, Legendre form and the descent matrix of a curve product.
    Kummer {
        /// curve as "delta,a,b,c"
        #[arg(long, allow_hyphen_values = true)]
        e1: String,
        /// second curve; defaults to e1
        #[arg(long, allow_hyphen_values = true)]
        e2: Option<String>,
        #[arg(long, default_value_t = 48)]
        precision: i64,
    },
    /// Ramification-index verdict for a reduction type.
    Verdict {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u32,
        /// ordinary or non-ordinary
        #[arg(long)]
        reduction: String,
        /// assert the K3 hypotheses (no global 1-forms, H^1(Z/p) = 0)
        #[arg(long, default_value_t = false)]
        k3: bool,
    },
    /// Re-run a pinned scenario and compare against its expectations.
    Reproduce {
        /// one of: ex5.6 ex5.7 ex5.8 ex5.9 sec6.4 thm7.2:odd thm7.2:2mod4
        /// thm7.2:0mod4 all
        id: String,
    },
}

/// Structured report written to standard output.
#[derive(Debug, serde::Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub diagnostics: Value,
}

fn field_ctx(p: u64, n: usize, modulus: Option<&str>) -> Result<Arc<FieldCtx>, CliError> {
    let m = match modulus {
        Some(text) => Some(parse_modulus(text, p)?),
        None => None,
    };
    FieldCtx::new(p, n, m.as_deref()).map_err(|e| CliError::BadInput(format!("{e}")))
}

fn rational_str(v: &crate::padic::PadicValue) -> String {
    match v.exact_parts() {
        Some((a, b)) if b == &BigRational::from_integer(BigInt::from(0)) => a.to_string(),
        Some((a, b)) => format!("{a}+{b}*sqrt(d)"),
        None => format!("~{} (2-adic)", v.canonical_residue(16)),
    }
}

/// Execute a parsed command; boolean is false when assertions failed (exit 1).
pub fn execute(cmd: &Command) -> Result<(Report, bool), CliError> {
    match cmd {
        Command::Count { poly, p, n, modulus } => {
            let f = parse_polynomial(poly, None)?;
            let ctx = field_ctx(*p, *n, modulus.as_deref())?;
            let c = count_points(&f, &ctx).map_err(|e| CliError::Compute(format!("{e}")))?;
            Ok((
                Report {
                    schema_version: 1,
                    command: "count".into(),
                    inputs: json!({"poly": print_polynomial(&f), "p": p, "n": n}),
                    result: json!({"count": c.to_string(), "count_mod_p": (c % p).to_string()}),
                    diagnostics: json!({}),
                },
                true,
            ))
        }
        Command::Ordinary { poly, p, depths } => {
            let f = parse_polynomial(poly, None)?;
            let depths: Vec<usize> = depths
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::BadInput(format!("depths: {e}")))?;
            let rep =
                is_ordinary_k3(&f, *p, &depths).map_err(|e| CliError::Compute(format!("{e}")))?;
            Ok((
                Report {
                    schema_version: 1,
                    command: "ordinary".into(),
                    inputs: json!({"poly": print_polynomial(&f), "p": p, "depths": depths}),
                    result: json!({
                        "counts": rep.counts.iter().map(|(n, c)| json!({"n": n, "count": c.to_string()})).collect::<Vec<_>>(),
                        "residues": rep.residues,
                        "verdict": rep.verdict,
                    }),
                    diagnostics: json!({}),
                },
                true,
            ))
        }
        Command::Evaluate {
            surface,
            f_num,
            f_den,
            g_num,
            g_den,
            p,
            disc_depth,
            precision,
            budget,
            seed,
        } => {
            let f = parse_polynomial(surface, None)?;
            let symbol = SymbolPair::new(
                parse_polynomial(f_num, None)?,
                parse_polynomial(f_den, None)?,
                parse_polynomial(g_num, None)?,
                parse_polynomial(g_den, None)?,
            )
            .map_err(|e| CliError::BadInput(format!("{e}")))?;
            let rep = scan_evaluation(
                &symbol,
                &[],
                &f,
                LocalField::qp(*p),
                *disc_depth,
                *precision,
                *budget,
                *seed,
            )
            .map_err(|e| CliError::Compute(format!("{e}")))?;
            Ok((
                Report {
                    schema_version: 1,
                    command: "evaluate".into(),
                    inputs: json!({
                        "surface": print_polynomial(&f), "p": p,
                        "disc_depth": disc_depth, "precision": precision,
                        "budget": budget, "seed": seed,
                    }),
                    result: serde_json::to_value(&rep).unwrap(),
                    diagnostics: json!({"note": "verdict never claims constancy, only bounded-search silence"}),
                },
                true,
            ))
        }
        Command::Residue {
            va,
            vb,
            divisor,
            alpha_sq,
            fields,
        } => {
            let d: DivisorDatum = match divisor.as_deref() {
                None => DivisorDatum {
                    label: "generic".into(),
                    va: *va,
                    vb: *vb,
                    sampler: Box::new(|_| vec![]),
                },
                Some("d1") => family_divisors::d1(),
                Some("d2") => family_divisors::d2(*alpha_sq),
                Some(other) => {
                    return Err(CliError::BadInput(format!("unknown divisor '{other}'")))
                }
            };
            let formula = crate::brauer::tame_residue(&d);
            let mut probes = json!(null);
            if divisor.is_some() {
                let orders: Vec<usize> = fields
                    .split(',')
                    .map(|s| s.trim().parse::<usize>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| CliError::BadInput(format!("fields: {e}")))?;
                let mut ctxs = vec![];
                for q in orders {
                    let (p, n) = match q {
                        2 | 3 | 5 | 7 => (q as u64, 1),
                        4 => (2, 2),
                        8 => (2, 3),
                        9 => (3, 2),
                        25 => (5, 2),
                        _ => {
                            return Err(CliError::BadInput(format!(
                                "unsupported field order {q}"
                            )))
                        }
                    };
                    ctxs.push(field_ctx(p, n, None)?);
                }
                let rep =
                    residue_probe(&d, &ctxs).map_err(|e| CliError::Compute(format!("{e}")))?;
                probes = serde_json::to_value(&rep).unwrap();
            }
            Ok((
                Report {
                    schema_version: 1,
                    command: "residue".into(),
                    inputs: json!({"va": va, "vb": vb, "divisor": divisor, "alpha_sq": alpha_sq}),
                    result: json!({
                        "class": serde_json::to_value(&formula).unwrap(),
                        "label": d.label,
                        "probes": probes,
                    }),
                    diagnostics: json!({"note": "probes are evidence, not proof"}),
                },
                true,
            ))
        }
        Command::Forms {
            surface,
            p,
            chart_p,
            chart_q,
        } => {
            let f = parse_polynomial(surface, None)?;
            let ground = field_ctx(*p, 1, None)?;
            let chart = crate::forms::SurfaceChart::new(&f, &ground, *chart_p, *chart_q)
                .map_err(|e| CliError::Compute(format!("{e}")))?;
            let omega = chart
                .omega(&f, *chart_p, *chart_q)
                .map_err(|e| CliError::Compute(format!("{e}")))?;
            let class = omega
                .classify()
                .map_err(|e| CliError::Compute(format!("{e}")))?;
            Ok((
                Report {
                    schema_version: 1,
                    command: "forms".into(),
                    inputs: json!({"surface": print_polynomial(&f), "p": p, "chart": [chart_p, chart_q]}),
                    result: json!({
                        "omega": format!("{omega:?}"),
                        "closed": class.closed,
                        "exact": class.exact,
                        "logarithmic": class.logarithmic,
                        "cartier_image": class.cartier_image.map(|c| format!("{c:?}")),
                    }),
                    diagnostics: json!({}),
                },
                true,
            ))
        }
        Command::Kummer { e1, e2, precision } => {
            let c1 = parse_curve(e1)?;
            let c2 = match e2 {
                Some(t) => parse_curve(t)?,
                None => c1,
            };
            let run = |c: &CurveParams| -> Result<_, CliError> {
                let t =
                    two_torsion(c, *precision).map_err(|e| CliError::Compute(format!("{e}")))?;
                let l =
                    legendre_transform(c, &t).map_err(|e| CliError::Compute(format!("{e}")))?;
                Ok((t, l))
            };
            let (t1, l1) = run(&c1)?;
            let (t2, l2) = run(&c2)?;
            let m = build_descent_matrix(&l1, &l2);
            let verdicts = descent_check(&m).map_err(|e| CliError::Compute(format!("{e}")))?;
            let torsion_json = |t: &crate::kummer::TwoTorsionData| {
                json!({
                    "phi": t.phi.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "betas": t.betas.iter().map(rational_str).collect::<Vec<_>>(),
                    "alphas": t.alphas.iter().map(rational_str).collect::<Vec<_>>(),
                    "ord_profile": t.ord_profile,
                })
            };
            Ok((
                Report {
                    schema_version: 1,
                    command: "kummer".into(),
                    inputs: json!({"e1": e1, "e2": e2, "precision": precision}),
                    result: json!({
                        "torsion1": torsion_json(&t1),
                        "torsion2": torsion_json(&t2),
                        "gamma": {
                            "g11": rational_str(&l1.gamma1), "g12": rational_str(&l1.gamma2),
                            "g21": rational_str(&l2.gamma1), "g22": rational_str(&l2.gamma2),
                            "g12_oracle": l1.gamma2_oracle.as_ref().map(rational_str),
                            "g22_oracle": l2.gamma2_oracle.as_ref().map(rational_str),
                        },
                        "matrix": m.entries.iter().map(|row| row.iter().map(rational_str).collect::<Vec<_>>()).collect::<Vec<_>>(),
                        "descends": verdicts,
                    }),
                    diagnostics: json!({"good_reduction_at_2": c1.has_good_reduction_at_2() && c2.has_good_reduction_at_2()}),
                },
                true,
            ))
        }
        Command::Verdict { p, e, reduction, k3 } => {
            let red = match reduction.as_str() {
                "ordinary" => ReductionType::Ordinary,
                "non-ordinary" | "nonordinary" => ReductionType::NonOrdinary,
                other => return Err(CliError::BadInput(format!("reduction '{other}'"))),
            };
            let hyp = if *k3 {
                K3Hypotheses::k3()
            } else {
                K3Hypotheses {
                    no_global_one_forms: false,
                    h1_z_mod_p_vanishes: false,
                }
            };
            let v =
                role_verdict(*p, *e, red, hyp).map_err(|e| CliError::Compute(format!("{e}")))?;
            Ok((
                Report {
                    schema_version: 1,
                    command: "verdict".into(),
                    inputs: json!({"p": p, "e": e, "reduction": reduction, "k3": k3}),
                    result: serde_json::to_value(&v).unwrap(),
                    diagnostics: json!({}),
                },
                true,
            ))
        }
        Command::Reproduce { id } => {
            let outcomes: Vec<scenarios::ScenarioOutcome> = if id == "all" {
                scenarios::SCENARIO_IDS
                    .iter()
                    .map(|i| scenarios::run_scenario(i).unwrap())
                    .collect()
            } else {
                vec![scenarios::run_scenario(id)
                    .ok_or_else(|| CliError::BadInput(format!("unknown scenario '{id}'")))?]
            };
            let pass = outcomes.iter().all(|o| o.all_pass());
            for o in &outcomes {
                eprint!("{o}");
            }
            Ok((
                Report {
                    schema_version: 1,
                    command: "reproduce".into(),
                    inputs: json!({"id": id}),
                    result: serde_json::to_value(&outcomes).unwrap(),
                    diagnostics: json!({"all_pass": pass}),
                },
                pass,
            ))
        }
    }
}

/// Entry point used by the thin binary: parse, run, print a JSON report to
/// stdout, diagnostics to stderr; exit code 0 on success, 1 on assertion
/// failures, 2 on input errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok((report, pass)) => {
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            if pass {
                0
            } else {
                eprintln!("one or more scenario assertions failed");
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
