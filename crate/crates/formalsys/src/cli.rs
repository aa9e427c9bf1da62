//! Command-line front end: loads definition files, runs checks, and emits
//! line-oriented, deterministic reports.
//!
//! Exit codes: 0 when the checked property holds (true, valid, model,
//! homomorphism, ...), 1 when it fails and a counterexample block was
//! printed, and 2 for usage, parse, or file errors.

use std::io::Write;
use std::path::Path;

use crate::henkin::{
    enumerate_valid_fragment, fragment_consistency_report, FragmentBounds,
};
use crate::hfset::HfSet;
use crate::language::LanguageFile;
use crate::morphism::{enumerate_morphisms, Morphism, MorphismSearch, MorphismVerdict};
use crate::structure::{Condition4Bounds, ModelVerdict, Structure, TruthValue};
use crate::syntax::{parse_arg_list, parse_formula, ArgList, Formula};

/// Default seed for the randomized spot checks; override with `--seed`.
pub const DEFAULT_SEED: u64 = 0x5eed;

const USAGE: &str = "\
usage: formalsys <verb> [options]

verbs:
  parse           --language <file> (--formula <text> | --list <text>)
  eval            --structure <file> --formula <text>
  valid           --structure <file> --formula <text>
  check-model     --structure <file> --axioms <file>
  push            --morphism <file> --list <text>
  hom             --morphism <file> [--depth <n>]
  iso             --morphism <file> [--depth <n>]
  enum-morphisms  --from <file> --to <file> (--hom | --iso)
  henkin          --structure <file> [--connective-depth <n>]
                  [--list-depth <n>] [--max-quantifiers <n>] [--report]
  cond4           --structure <file> [--lambda-bound <n>] [--mu-bound <n>]
                  [--samples <n>] [--seed <n>]
  hf              (tc|pow|union|choice|reg|friendly) <set> [<set>]

exit codes:
  0  the checked property holds
  1  the property fails; a counterexample block is printed
  2  usage, parse, or file error";

/// Runs one invocation; returns the exit code.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(args, out) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            2
        }
    }
}

fn dispatch(args: &[String], out: &mut dyn Write) -> Result<i32, String> {
    let verb = match args.first() {
        Some(v) => v.as_str(),
        None => return Err(format!("missing verb\n{USAGE}")),
    };
    let rest = &args[1..];
    match verb {
        "parse" => cmd_parse(rest, out),
        "eval" => cmd_eval(rest, out),
        "valid" => cmd_valid(rest, out),
        "check-model" => cmd_check_model(rest, out),
        "push" => cmd_push(rest, out),
        "hom" => cmd_morphism_check(rest, out, false),
        "iso" => cmd_morphism_check(rest, out, true),
        "enum-morphisms" => cmd_enum_morphisms(rest, out),
        "henkin" => cmd_henkin(rest, out),
        "cond4" => cmd_cond4(rest, out),
        "hf" => cmd_hf(rest, out),
        "help" | "--help" | "-h" => {
            let _ = writeln!(out, "{USAGE}");
            Ok(0)
        }
        other => Err(format!("unknown verb '{other}'\n{USAGE}")),
    }
}

/// Minimal flag parser: every option takes one value, `--report` and
/// `--hom`/`--iso` are bare switches.
struct Options {
    values: Vec<(String, String)>,
    switches: Vec<String>,
    positional: Vec<String>,
}

impl Options {
    fn parse(args: &[String]) -> Result<Self, String> {
        let mut values = Vec::new();
        let mut switches = Vec::new();
        let mut positional = Vec::new();
        let mut i = 0;
        while i < args.len() {
            let arg = &args[i];
            if let Some(name) = arg.strip_prefix("--") {
                if matches!(name, "report" | "hom" | "iso") {
                    switches.push(name.to_string());
                    i += 1;
                } else {
                    let value = args
                        .get(i + 1)
                        .ok_or_else(|| format!("option --{name} needs a value"))?;
                    values.push((name.to_string(), value.clone()));
                    i += 2;
                }
            } else {
                positional.push(arg.clone());
                i += 1;
            }
        }
        Ok(Options {
            values,
            switches,
            positional,
        })
    }

    fn get(&self, name: &str) -> Option<&str> {
        self.values
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_str())
    }

    fn require(&self, name: &str) -> Result<&str, String> {
        self.get(name)
            .ok_or_else(|| format!("missing required option --{name}"))
    }

    fn get_usize(&self, name: &str, default: usize) -> Result<usize, String> {
        match self.get(name) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| format!("option --{name} expects a number, got '{v}'")),
        }
    }

    fn has(&self, switch: &str) -> bool {
        self.switches.iter().any(|s| s == switch)
    }
}

fn load_structure(path: &str) -> Result<Structure, String> {
    Structure::load(Path::new(path)).map_err(|e| e.to_string())
}

fn load_morphism(path: &str) -> Result<Morphism, String> {
    Morphism::load(Path::new(path)).map_err(|e| e.to_string())
}

fn parse_formula_arg(structure: &Structure, text: &str) -> Result<Formula, String> {
    parse_formula(text, structure.language()).map_err(|e| e.to_string())
}

fn w(out: &mut dyn Write, line: impl fmt::Display) {
    let _ = writeln!(out, "{line}");
}

use std::fmt;

fn cmd_parse(args: &[String], out: &mut dyn Write) -> Result<i32, String> {
    let opts = Options::parse(args)?;
    let path = opts.require("language")?;
    let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    let file: LanguageFile = serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))?;
    let spec = file.into_spec().map_err(|e| e.to_string())?;
    if let Some(formula) = opts.get("formula") {
        let parsed = parse_formula(formula, &spec).map_err(|e| e.to_string())?;
        w(out, format!("FORMULA: {parsed}"));
        Ok(0)
    } else if let Some(list) = opts.get("list") {
        let parsed = parse_arg_list(list, &spec).map_err(|e| e.to_string())?;
        w(out, format!("LIST: {parsed}"));
        Ok(0)
    } else {
        Err("parse needs --formula or --list".into())
    }
}

fn cmd_eval(args: &[String], out: &mut dyn Write) -> Result<i32, String> {
    let opts = Options::parse(args)?;
    let structure = load_structure(opts.require("structure")?)?;
    let formula = parse_formula_arg(&structure, opts.require("formula")?)?;
    let value = structure.eval_closed(&formula).map_err(|e| e.to_string())?;
    w(out, value);
    Ok(if value == TruthValue::True { 0 } else { 1 })
}

fn cmd_valid(args: &[String], out: &mut dyn Write) -> Result<i32, String> {
    let opts = Options::parse(args)?;
    let structure = load_structure(opts.require("structure")?)?;
    let formula = parse_formula_arg(&structure, opts.require("formula")?)?;
    match structure.is_model(&[formula.clone()]).map_err(|e| e.to_string())? {
        ModelVerdict::Model { .. } => {
            w(out, "VALID");
            Ok(0)
        }
        ModelVerdict::UnknownAtBound { .. } => {
            w(out, "UNKNOWN-AT-BOUND");
            Ok(1)
        }
        ModelVerdict::Counterexample { assignment, .. } => {
            w(out, "INVALID");
            print_counterexample(out, &structure, &formula, &assignment)?;
            Ok(1)
        }
    }
}

fn print_counterexample(
    out: &mut dyn Write,
    structure: &Structure,
    formula: &Formula,
    assignment: &[(crate::syntax::VarId, String)],
) -> Result<(), String> {
    w(out, "COUNTEREXAMPLE");
    w(out, format!("formula: {formula}"));
    let rendered: Vec<String> = assignment
        .iter()
        .map(|(v, token)| format!("{v}={token}"))
        .collect();
    w(out, format!("assignment: {}", rendered.join(" ")));
    let mut instance = formula.clone();
    for (v, token) in assignment {
        instance = instance
            .subst_var(*v, &ArgList::name(token.clone()))
            .map_err(|e| e.to_string())?;
    }
    // The printed instance re-verifies: evaluating it reproduces the failure.
    let value = structure.eval_closed(&instance).map_err(|e| e.to_string())?;
    w(out, format!("instance: {instance}"));
    w(out, format!("evaluates: {value}"));
    Ok(())
}

fn cmd_check_model(args: &[String], out: &mut dyn Write) -> Result<i32, String> {
    let opts = Options::parse(args)?;
    let structure = load_structure(opts.require("structure")?)?;
    let axioms_path = opts.require("axioms")?;
    let text = std::fs::read_to_string(axioms_path).map_err(|e| format!("{axioms_path}: {e}"))?;
    let mut axioms = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        axioms.push(parse_formula_arg(&structure, line)?);
    }
    match structure.is_model(&axioms).map_err(|e| e.to_string())? {
        ModelVerdict::Model { axioms_checked } => {
            w(out, format!("MODEL: {axioms_checked}/{axioms_checked} axioms valid"));
            Ok(0)
        }
        ModelVerdict::UnknownAtBound { axiom_index, axiom } => {
            w(out, format!("UNKNOWN-AT-BOUND: axiom {} ({axiom})", axiom_index + 1));
            Ok(1)
        }
        ModelVerdict::Counterexample {
            axiom_index,
            axiom,
            assignment,
        } => {
            w(out, format!("NOT-A-MODEL: axiom {} fails", axiom_index + 1));
            print_counterexample(out, &structure, &axiom, &assignment)?;
            Ok(1)
        }
    }
}

fn cmd_push(args: &[String], out: &mut dyn Write) -> Result<i32, String> {
    let opts = Options::parse(args)?;
    let morphism = load_morphism(opts.require("morphism")?)?;
    let spec = match &morphism {
        Morphism::Finite(m) => m.source().language().clone(),
        Morphism::Strings(m) => m.source().language().clone(),
    };
    let list = parse_arg_list(opts.require("list")?, &spec).map_err(|e| e.to_string())?;
    let pushed = morphism.push_list(&list).map_err(|e| e.to_string())?;
    w(out, format!("PUSHED: {pushed}"));
    Ok(0)
}

fn cmd_morphism_check(args: &[String], out: &mut dyn Write, iso: bool) -> Result<i32, String> {
    let opts = Options::parse(args)?;
    let morphism = load_morphism(opts.require("morphism")?)?;
    let depth = opts.get_usize("depth", 3)?;
    let verdict = if iso {
        morphism.is_isomorphism(depth)
    } else {
        morphism.is_homomorphism(depth)
    };
    match verdict {
        MorphismVerdict::ExactHomomorphism => {
            w(out, "EXACT-HOMOMORPHISM");
            Ok(0)
        }
        MorphismVerdict::ExactIsomorphism => {
            w(out, "EXACT-ISOMORPHISM");
            Ok(0)
        }
        MorphismVerdict::BoundedVerified(bound) => {
            w(out, format!("BOUNDED-VERIFIED: depth<={bound}"));
            Ok(0)
        }
        MorphismVerdict::Counterexample(witness) => {
            w(out, "COUNTEREXAMPLE");
            w(out, witness.to_string());
            Ok(1)
        }
    }
}

fn cmd_enum_morphisms(args: &[String], out: &mut dyn Write) -> Result<i32, String> {
    let opts = Options::parse(args)?;
    let from = load_structure(opts.require("from")?)?;
    let to = load_structure(opts.require("to")?)?;
    let (from, to) = match (from, to) {
        (Structure::FiniteTerm(f), Structure::FiniteTerm(t)) => (f, t),
        _ => return Err("enum-morphisms works on finite term structures".into()),
    };
    let mode = match (opts.has("hom"), opts.has("iso")) {
        (true, false) => MorphismSearch::Homomorphisms,
        (false, true) => MorphismSearch::Isomorphisms,
        _ => return Err("choose exactly one of --hom or --iso".into()),
    };
    let found = enumerate_morphisms(&from, &to, mode).map_err(|e| e.to_string())?;
    let label = match mode {
        MorphismSearch::Homomorphisms => "HOMOMORPHISMS",
        MorphismSearch::Isomorphisms => "ISOMORPHISMS",
    };
    w(out, format!("{label}: {}", found.len()));
    for m in &found {
        let rendered: Vec<String> = m
            .table()
            .iter()
            .map(|(a, b)| format!("{a}->{b}"))
            .collect();
        w(out, rendered.join(" "));
    }
    Ok(if found.is_empty() { 1 } else { 0 })
}

fn cmd_henkin(args: &[String], out: &mut dyn Write) -> Result<i32, String> {
    let opts = Options::parse(args)?;
    let structure = load_structure(opts.require("structure")?)?;
    let structure = match structure {
        Structure::FiniteTerm(s) => s,
        Structure::Strings(_) => {
            return Err("fragment enumeration works on finite term structures".into())
        }
    };
    let bounds = FragmentBounds {
        connective_depth: opts.get_usize("connective-depth", 1)?,
        list_depth: opts.get_usize("list-depth", 0)?,
        max_quantifiers: opts.get_usize("max-quantifiers", 1)?,
    };
    let partition = enumerate_valid_fragment(&structure, &bounds).map_err(|e| e.to_string())?;
    w(out, format!("FRAGMENT (bounded): {bounds}"));
    w(out, format!("VALID: {}", partition.valid.len()));
    for f in &partition.valid {
        w(out, f);
    }
    w(out, format!("INVALID: {}", partition.invalid.len()));
    for f in &partition.invalid {
        w(out, f);
    }
    if opts.has("report") {
        let report = fragment_consistency_report(&structure, &bounds).map_err(|e| e.to_string())?;
        w(
            out,
            format!(
                "REPORT: formulas={} valid={} invalid={} complementarity-failures={} witness-failures={} overlap={}",
                report.formulas_checked,
                report.valid_count,
                report.invalid_count,
                report.complementarity_failures.len(),
                report.witness_failures.len(),
                report.overlap
            ),
        );
        if !report.passed() {
            return Ok(1);
        }
    }
    Ok(0)
}

fn cmd_cond4(args: &[String], out: &mut dyn Write) -> Result<i32, String> {
    let opts = Options::parse(args)?;
    let structure = load_structure(opts.require("structure")?)?;
    let bounds = Condition4Bounds {
        lambda_bound: opts.get_usize("lambda-bound", 2)?,
        mu_bound: opts.get_usize("mu-bound", 1)?,
        max_pairs: opts.get_usize("max-pairs", Condition4Bounds::default().max_pairs)?,
    };
    let mut report = structure.check_condition4(&bounds);
    let samples = opts.get_usize("samples", 0)?;
    if samples > 0 {
        let seed = match opts.get("seed") {
            None => DEFAULT_SEED,
            Some(v) => v
                .parse()
                .map_err(|_| format!("option --seed expects a number, got '{v}'"))?,
        };
        let sampled = match &structure {
            Structure::FiniteTerm(s) => s.check_condition4_sampled(&bounds, samples, seed),
            Structure::Strings(_) => {
                return Err("--samples applies to finite term structures".into())
            }
        };
        report.pairs_checked += sampled.pairs_checked;
        report.violations.extend(sampled.violations);
    }
    w(
        out,
        format!(
            "CONDITION4: pairs={} truncated={} violations={}",
            report.pairs_checked,
            report.truncated,
            report.violations.len()
        ),
    );
    for v in &report.violations {
        w(out, v);
    }
    Ok(if report.violations.is_empty() { 0 } else { 1 })
}

fn cmd_hf(args: &[String], out: &mut dyn Write) -> Result<i32, String> {
    let opts = Options::parse(args)?;
    let mut positional = opts.positional.iter();
    let op = positional
        .next()
        .ok_or("hf needs an operation: tc|pow|union|choice|reg|friendly")?;
    let first = positional
        .next()
        .ok_or("hf needs a set literal like '{{},{{}}}'")?;
    let a: HfSet = first.parse().map_err(|e: crate::hfset::HfError| e.to_string())?;
    match op.as_str() {
        "tc" => {
            w(out, format!("TC: {}", a.transitive_closure()));
            Ok(0)
        }
        "pow" => {
            let p = a.power_set().map_err(|e| e.to_string())?;
            w(out, format!("POW: {p}"));
            Ok(0)
        }
        "union" => {
            let second = positional.next().ok_or("hf union needs two sets")?;
            let b: HfSet = second
                .parse()
                .map_err(|e: crate::hfset::HfError| e.to_string())?;
            w(out, format!("UNION: {}", a.union(&b)));
            Ok(0)
        }
        "choice" => match a.choice_set() {
            Ok(c) => {
                w(out, format!("CHOICE: {c}"));
                Ok(0)
            }
            Err(e) => {
                w(out, "COUNTEREXAMPLE");
                w(out, e.to_string());
                Ok(1)
            }
        },
        "reg" => {
            let witness = a.regularity_witness().map_err(|e| e.to_string())?;
            w(out, format!("REGULARITY-WITNESS: {witness}"));
            Ok(0)
        }
        "friendly" => {
            let report = a.check_subset_friendly();
            for (label, outcome) in report.conditions() {
                match outcome {
                    crate::hfset::ConditionOutcome::Pass => w(out, format!("{label}: pass")),
                    crate::hfset::ConditionOutcome::Violation(v) => {
                        w(out, format!("{label}: violation ({v})"))
                    }
                }
            }
            Ok(if report.all_passed() { 0 } else { 1 })
        }
        other => Err(format!("unknown hf operation '{other}'")),
    }
}
