//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 parse/config error, 3 numeric failure
//! (no threshold radius / invalid alternative threshold), 4 verification
//! completed with violations.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use fastesc_core::classify::Classifier;
use fastesc_core::config::{load_config, parse_point, RunConfig};
use fastesc_core::expr::parse_function;
use fastesc_core::grid::{classify_grid_with, dump_grid, extract_boundary, render, render_mask, PaletteSpec};
use fastesc_core::maxmod::{mm_tower, CircleSampling};
use fastesc_core::semigroup::{enumerate_words_k, word_count, CompositeFn};
use fastesc_core::verify::{
    check_forward_invariance, check_nesting, check_r_independence, check_subset_classical,
    check_unbounded_ray, sample_points, PropertyReport, VerifyError,
};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_VIOLATIONS: u8 = 4;

const USAGE: &str = "\
fastesc — escape-time classification for semigroups of entire functions

USAGE:
    fastesc render <config> -o <out.ppm> [--threads <n>] [--dump <path>]
    fastesc classify <config> --point <a+bi>
    fastesc verify <config> --points <n> --report <path>
    fastesc mm --function <expr> --radius <r> --depth <n> [--samples <c>]
    fastesc words --generators <k> --depth <W>
";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    ExitCode::from(run(&args))
}

fn run(args: &[String]) -> u8 {
    let Some(cmd) = args.first() else {
        eprint!("{}", USAGE);
        return EXIT_USAGE;
    };
    match cmd.as_str() {
        "render" => cmd_render(&args[1..]),
        "classify" => cmd_classify(&args[1..]),
        "verify" => cmd_verify(&args[1..]),
        "mm" => cmd_mm(&args[1..]),
        "words" => cmd_words(&args[1..]),
        "help" | "--help" | "-h" => {
            print!("{}", USAGE);
            EXIT_OK
        }
        other => {
            eprintln!("unknown subcommand '{}'", other);
            eprint!("{}", USAGE);
            EXIT_USAGE
        }
    }
}

/// Minimal flag splitter: positionals plus `--flag value` pairs (`-o` is
/// accepted as an alias for `--out`).
struct Flags {
    positional: Vec<String>,
    pairs: Vec<(String, String)>,
}

fn split_flags(args: &[String]) -> Result<Flags, String> {
    let mut positional = Vec::new();
    let mut pairs = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if let Some(name) = a.strip_prefix("--") {
            let value = it
                .next()
                .ok_or_else(|| format!("flag --{} needs a value", name))?;
            pairs.push((name.to_owned(), value.clone()));
        } else if a == "-o" {
            let value = it.next().ok_or_else(|| "-o needs a value".to_owned())?;
            pairs.push(("out".to_owned(), value.clone()));
        } else {
            positional.push(a.clone());
        }
    }
    Ok(Flags { positional, pairs })
}

impl Flags {
    fn get(&self, name: &str) -> Option<&str> {
        self.pairs
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }
}

fn load(path: &str) -> Result<RunConfig, u8> {
    load_config(Path::new(path)).map_err(|e| {
        eprintln!("{}", e);
        EXIT_CONFIG
    })
}

/// Classifier construction plus the numeric-failure gate: a missing
/// threshold radius for any word aborts the run.
fn build_classifier(rc: &RunConfig) -> Result<Classifier, u8> {
    let classifier = Classifier::new(rc.semigroup.clone(), rc.classifier.clone()).map_err(|e| {
        eprintln!("{}", e);
        EXIT_CONFIG
    })?;
    if let Some(i) = classifier.tables().iter().position(|t| t.is_none()) {
        eprintln!(
            "no threshold radius found for word [{}]",
            classifier.words()[i]
        );
        return Err(EXIT_NUMERIC);
    }
    Ok(classifier)
}

/// `x.ppm -> x.edge.ppm`; other names get `.edge.ppm` appended.
fn edge_path(out: &Path) -> PathBuf {
    let s = out.to_string_lossy();
    match s.strip_suffix(".ppm") {
        Some(stem) => PathBuf::from(format!("{}.edge.ppm", stem)),
        None => PathBuf::from(format!("{}.edge.ppm", s)),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), u8> {
    std::fs::write(path, bytes).map_err(|e| {
        eprintln!("cannot write {}: {}", path.display(), e);
        EXIT_USAGE
    })
}

fn cmd_render(args: &[String]) -> u8 {
    let flags = match split_flags(args) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{}", e);
            return EXIT_USAGE;
        }
    };
    let (Some(config_path), Some(out)) = (flags.positional.first(), flags.get("out")) else {
        eprintln!("render needs a config file and -o <out.ppm>");
        return EXIT_USAGE;
    };
    let threads = match flags.get("threads").map(str::parse::<usize>) {
        None => None,
        Some(Ok(n)) if n >= 1 => Some(n),
        Some(_) => {
            eprintln!("--threads needs a positive integer");
            return EXIT_USAGE;
        }
    };
    let rc = match load(config_path) {
        Ok(rc) => rc,
        Err(code) => return code,
    };
    let classifier = match build_classifier(&rc) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let grid = {
        let run = || classify_grid_with(&classifier, rc.window, rc.nx, rc.ny);
        let result = match threads {
            Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool.install(run),
                Err(e) => {
                    eprintln!("cannot build thread pool: {}", e);
                    return EXIT_USAGE;
                }
            },
            None => run(),
        };
        match result {
            Ok(g) => g,
            Err(e) => {
                eprintln!("{}", e);
                return EXIT_CONFIG;
            }
        }
    };
    let out = PathBuf::from(out);
    if let Err(code) = write_file(&out, &render(&grid, &PaletteSpec::default())) {
        return code;
    }
    let mask = extract_boundary(&grid);
    if let Err(code) = write_file(&edge_path(&out), &render_mask(&mask)) {
        return code;
    }
    if let Some(dump) = flags.get("dump") {
        if let Err(code) = write_file(Path::new(dump), dump_grid(&grid).as_bytes()) {
            return code;
        }
    }
    EXIT_OK
}

fn cmd_classify(args: &[String]) -> u8 {
    let flags = match split_flags(args) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{}", e);
            return EXIT_USAGE;
        }
    };
    let (Some(config_path), Some(point_text)) = (flags.positional.first(), flags.get("point"))
    else {
        eprintln!("classify needs a config file and --point <a+bi>");
        return EXIT_USAGE;
    };
    let rc = match load(config_path) {
        Ok(rc) => rc,
        Err(code) => return code,
    };
    let z = match parse_point(point_text) {
        Ok(z) => z,
        Err(e) => {
            eprintln!("bad point: {}", e);
            return EXIT_CONFIG;
        }
    };
    let classifier = match build_classifier(&rc) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let cl = classifier.classify(z);
    let level = match cl.verdict.level() {
        Some(l) => l.to_string(),
        None => "-".to_owned(),
    };
    println!(
        "verdict={} level={} margin={:.6} W={} N={}",
        cl.verdict.code(),
        level,
        cl.margin_log,
        rc.classifier.max_word_len,
        rc.classifier.max_iter
    );
    EXIT_OK
}

fn cmd_verify(args: &[String]) -> u8 {
    let flags = match split_flags(args) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{}", e);
            return EXIT_USAGE;
        }
    };
    let (Some(config_path), Some(points_text), Some(report_path)) = (
        flags.positional.first(),
        flags.get("points"),
        flags.get("report"),
    ) else {
        eprintln!("verify needs a config file, --points <n> and --report <path>");
        return EXIT_USAGE;
    };
    let n_points: usize = match points_text.parse() {
        Ok(n) => n,
        Err(_) => {
            eprintln!("--points needs a nonnegative integer");
            return EXIT_USAGE;
        }
    };
    let rc = match load(config_path) {
        Ok(rc) => rc,
        Err(code) => return code,
    };
    // the alternative radius for the independence check: twice the
    // configured radius, or twice the largest per-word default
    let r2 = match rc.classifier.r_override {
        Some(r) => 2.0 * r,
        None => {
            let probe = match build_classifier(&rc) {
                Ok(c) => c,
                Err(code) => return code,
            };
            2.0 * probe
                .tables()
                .iter()
                .flatten()
                .map(|t| t.r)
                .fold(f64::NEG_INFINITY, f64::max)
        }
    };
    let points = sample_points(&rc.window, n_points, rc.seed);
    let cfg = &rc.classifier;
    let s = &rc.semigroup;
    let mut reports: Vec<PropertyReport> = Vec::new();
    macro_rules! push {
        ($r:expr) => {
            match $r {
                Ok(rep) => reports.push(rep),
                Err(e) => {
                    eprintln!("{}", e);
                    return EXIT_NUMERIC;
                }
            }
        };
    }
    push!(check_nesting(s, &points, cfg));
    push!(check_forward_invariance(s, &points, cfg));
    push!(check_subset_classical(s, &points, cfg));
    match check_r_independence(s, &points, cfg, r2) {
        Ok(rep) => reports.push(rep),
        Err(VerifyError::InvalidThreshold { label, r2 }) => {
            eprintln!("radius {} is not a valid threshold for word {}", r2, label);
            return EXIT_NUMERIC;
        }
        Err(e) => {
            eprintln!("{}", e);
            return EXIT_NUMERIC;
        }
    }
    push!(check_unbounded_ray(s, cfg, 0.0, 1e6));
    let text: String = reports.iter().map(|r| r.line() + "\n").collect();
    if let Err(code) = write_file(Path::new(report_path), text.as_bytes()) {
        return code;
    }
    print!("{}", text);
    if reports.iter().map(|r| r.violations).sum::<usize>() > 0 {
        EXIT_VIOLATIONS
    } else {
        EXIT_OK
    }
}

fn cmd_mm(args: &[String]) -> u8 {
    let flags = match split_flags(args) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{}", e);
            return EXIT_USAGE;
        }
    };
    let (Some(func_text), Some(radius_text), Some(depth_text)) = (
        flags.get("function"),
        flags.get("radius"),
        flags.get("depth"),
    ) else {
        eprintln!("mm needs --function <expr>, --radius <r> and --depth <n>");
        return EXIT_USAGE;
    };
    let f = match parse_function(func_text) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{}", e);
            return EXIT_CONFIG;
        }
    };
    let radius: f64 = match radius_text.parse() {
        Ok(r) if r > 0.0 => r,
        _ => {
            eprintln!("--radius needs a real > 0");
            return EXIT_CONFIG;
        }
    };
    let depth: usize = match depth_text.parse() {
        Ok(n) if n >= 1 => n,
        _ => {
            eprintln!("--depth needs an integer >= 1");
            return EXIT_CONFIG;
        }
    };
    let sampling = match flags.get("samples") {
        None => CircleSampling::default(),
        Some(text) => match text.parse::<usize>().ok().and_then(|c| CircleSampling::new(c, 32)) {
            Some(s) => s,
            None => {
                eprintln!("--samples needs an integer >= 64");
                return EXIT_CONFIG;
            }
        },
    };
    let table = mm_tower(
        &CompositeFn::single(&f),
        f.source_text().to_owned(),
        radius,
        depth,
        &sampling,
    );
    for (k, lm) in table.tower_log.iter().enumerate().skip(1) {
        println!("{}\t{:.9}", k, lm);
    }
    if let Some(k) = table.saturated_at {
        eprintln!("saturated at k={}: values beyond representable log range", k);
    }
    EXIT_OK
}

fn cmd_words(args: &[String]) -> u8 {
    let flags = match split_flags(args) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{}", e);
            return EXIT_USAGE;
        }
    };
    let (Some(k_text), Some(depth_text)) = (flags.get("generators"), flags.get("depth")) else {
        eprintln!("words needs --generators <k> and --depth <W>");
        return EXIT_USAGE;
    };
    let k: usize = match k_text.parse() {
        Ok(k) if k >= 1 => k,
        _ => {
            eprintln!("--generators needs an integer >= 1");
            return EXIT_CONFIG;
        }
    };
    let depth: usize = match depth_text.parse() {
        Ok(d) if d >= 1 => d,
        _ => {
            eprintln!("--depth needs an integer >= 1");
            return EXIT_CONFIG;
        }
    };
    match enumerate_words_k(k, depth) {
        Ok(words) => {
            println!("{}", word_count(k, depth).unwrap());
            for w in &words {
                println!("{}", w);
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("{}", e);
            EXIT_CONFIG
        }
    }
}
