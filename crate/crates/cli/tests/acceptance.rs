//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the measured quantities. Run with `--nocapture` to see them.

use std::process::Command;
use std::time::Instant;

use fastesc_core::classify::{
    classify_cyclic, classify_point, Classifier, ClassifierConfig, Verdict,
};
use fastesc_core::expr::{parse_function, EntireFunction};
use fastesc_core::grid::{classify_grid, extract_boundary, render, PaletteSpec, Window};
use fastesc_core::maxmod::{max_modulus, mm_tower, CircleSampling};
use fastesc_core::semigroup::{CompositeFn, Semigroup};
use fastesc_core::verify::{
    check_nesting, check_r_independence, check_subset_classical, sample_points,
};
use fastesc_core::Complex;

fn func(text: &str) -> EntireFunction {
    parse_function(text).unwrap()
}

fn semigroup(texts: &[&str]) -> Semigroup {
    Semigroup::new(texts.iter().map(|t| func(t)).collect()).unwrap()
}

/// |log M(e^z, r) - r| <= 1e-6 for r in {0.5, 1, 2, 4} at 4096 samples,
/// in under a second.
#[test]
fn criterion_01_max_modulus_oracle() {
    let f = func("exp(z)");
    let target = CompositeFn::single(&f);
    let s = CircleSampling::default();
    assert_eq!(s.sample_count, 4096);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for r in [0.5, 1.0, 2.0, 4.0] {
        let lm = max_modulus(&target, r, &s);
        let err = (lm - r).abs();
        worst = worst.max(err);
        assert!(err <= 1e-6, "r = {}: log M = {} (err {})", r, lm, err);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {:?}", elapsed);
    println!(
        "criterion 01 PASS: max-modulus oracle, worst error {:.3e}, {:?}",
        worst, elapsed
    );
}

/// Hadamard three-circles convexity for exp, sin, 0.25*exp over all
/// geometric triples on the doubling grid in [0.5, 8].
#[test]
fn criterion_02_hadamard_convexity() {
    let s = CircleSampling::default();
    let grid = [0.5f64, 1.0, 2.0, 4.0, 8.0];
    let triples = [(0usize, 1usize, 2usize), (1, 2, 3), (2, 3, 4), (0, 2, 4)];
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    for text in ["exp(z)", "sin(z)", "0.25*exp(z)"] {
        let f = func(text);
        let target = CompositeFn::single(&f);
        let lm: Vec<f64> = grid.iter().map(|&r| max_modulus(&target, r, &s)).collect();
        for &(i, j, k) in &triples {
            let t = (grid[j].ln() - grid[i].ln()) / (grid[k].ln() - grid[i].ln());
            let chord = lm[i] + t * (lm[k] - lm[i]);
            let defect = lm[j] - chord;
            worst = worst.max(defect);
            if defect > 1e-9 * lm[k].abs().max(1.0) {
                violations += 1;
            }
        }
    }
    assert_eq!(violations, 0);
    println!(
        "criterion 02 PASS: Hadamard convexity, 12 triples, worst defect {:.3e}",
        worst
    );
}

/// Tower entries match [e, e^e, e^{e^e}] to 1e-9 relative in log scale,
/// and the pure log-space recurrence log M^{k+1} = M^k holds exactly in
/// the regime past the rectangular cap.
#[test]
fn criterion_03_tower_correctness() {
    let f = func("exp(z)");
    let target = CompositeFn::single(&f);
    let s = CircleSampling::default();
    let t = mm_tower(&target, "exp(z)".into(), 1.0, 3, &s);
    // log M^k(1) = [0, 1, e, e^e] from extended precision
    let want = [0.0f64, 1.0, 2.718281828459045, 15.154262241479262];
    assert_eq!(t.tower_log.len(), 4);
    let mut worst = 0.0f64;
    for (got, want) in t.tower_log.iter().zip(want) {
        let rel = (got - want).abs() / want.abs().max(1.0);
        worst = worst.max(rel);
        assert!(rel <= 1e-9, "{} vs {}", got, want);
    }
    // a base that parks one entry between the rectangular cap (1e300) and
    // the log ceiling exercises the pure log-space step
    let t2 = mm_tower(&target, "exp(z)".into(), 695.0, 5, &s);
    assert_eq!(t2.tower_log[1], 695.0);
    assert_eq!(t2.tower_log[2], 695.0f64.exp());
    assert!(t2.saturated_at.is_some());
    println!(
        "criterion 03 PASS: tower matches extended precision (worst rel {:.3e}); log-space recurrence exact",
        worst
    );
}

/// The two-generator counterexample: nothing escapes under
/// S = <exp(z), exp(-z)>, while the cyclic classifier still reports exp
/// itself as fast escaping.
#[test]
fn criterion_04_empty_escaping_semigroup() {
    let start = Instant::now();
    let s = semigroup(&["exp(z)", "exp(-z)"]);
    let cfg = ClassifierConfig {
        max_word_len: 3,
        max_iter: 50,
        ..ClassifierConfig::default()
    };
    let classifier = Classifier::new(s, cfg.clone()).unwrap();
    let window = Window::new(-2.0, 2.0, -2.0, 2.0).unwrap();
    let points = sample_points(&window, 100, 42);
    let escaping = points
        .iter()
        .filter(|&&z| classifier.classify(z).verdict.is_escaping_evidence())
        .count();
    assert_eq!(escaping, 0, "{} of 100 points escaped", escaping);

    let cyclic = classify_cyclic(&func("exp(z)"), Complex::new(1.0, 0.0), &cfg).unwrap();
    assert!(cyclic.verdict.is_fast(), "cyclic exp at 1: {:?}", cyclic.verdict);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {:?}", elapsed);
    println!(
        "criterion 04 PASS: 100/100 points non-escaping under the semigroup, cyclic exp fast; {:?}",
        elapsed
    );
}

/// With R = 5 the real orbit of 0.25 e^z from z = 5 is the tower itself:
/// level 0 with nonnegative margin; the origin stays in the basin.
#[test]
fn criterion_05_level_zero_exactness() {
    let s = semigroup(&["0.25*exp(z)"]);
    let cfg = ClassifierConfig {
        r_override: Some(5.0),
        ..ClassifierConfig::default()
    };
    let at5 = classify_point(&s, Complex::new(5.0, 0.0), &cfg);
    assert_eq!(at5.verdict, Verdict::FastEscaping { level: 0 });
    assert!(at5.margin_log >= 0.0, "margin {}", at5.margin_log);
    let at0 = classify_point(&s, Complex::new(0.0, 0.0), &cfg);
    assert_eq!(at0.verdict, Verdict::NonEscaping);
    println!(
        "criterion 05 PASS: z=5 fast at level 0 with margin {:.6}, z=0 non-escaping",
        at5.margin_log
    );
}

/// Over 500 random points, every point escaping at word depth 3 also
/// escapes at depth 2.
#[test]
fn criterion_06_depth_monotonicity() {
    let s = semigroup(&["exp(z)", "0.25*exp(z)"]);
    let mk = |w: usize| {
        Classifier::new(
            s.clone(),
            ClassifierConfig {
                max_word_len: w,
                ..ClassifierConfig::default()
            },
        )
        .unwrap()
    };
    let c2 = mk(2);
    let c3 = mk(3);
    // straddles the basin boundary of 0.25 e^z near re = 2.15, so the
    // sample carries escaping and non-escaping points
    let window = Window::new(1.0, 8.0, -0.3, 0.3).unwrap();
    let points = sample_points(&window, 500, 42);
    let mut escaping3 = 0;
    let mut violations = 0;
    for &z in &points {
        if c3.classify(z).verdict.is_escaping_evidence() {
            escaping3 += 1;
            if !c2.classify(z).verdict.is_escaping_evidence() {
                violations += 1;
            }
        }
    }
    assert_eq!(violations, 0);
    assert!(escaping3 > 0, "sample contained no escaping points");
    println!(
        "criterion 06 PASS: depth-3 escaping set ({} points) contained in depth-2 set",
        escaping3
    );
}

/// Nesting over 1000 random points: zero violations, promoted to a hard
/// assertion.
#[test]
fn criterion_07_nesting() {
    let s = semigroup(&["exp(z)", "0.25*exp(z)"]);
    let cfg = ClassifierConfig::default();
    let window = Window::new(3.0, 8.0, -0.2, 0.2).unwrap();
    let points = sample_points(&window, 1000, 42);
    let report = check_nesting(&s, &points, &cfg).unwrap();
    assert_eq!(report.violations, 0, "{}", report.line());
    assert!(report.applicable > 0);
    println!("criterion 07 PASS: {}", report.line());
}

/// Fast escape under the semigroup implies escape under each generator's
/// cyclic classification, over 1000 points.
#[test]
fn criterion_08_subset_classical() {
    let s = semigroup(&["exp(z)", "0.25*exp(z)"]);
    let cfg = ClassifierConfig::default();
    let window = Window::new(3.0, 8.0, -0.2, 0.2).unwrap();
    let points = sample_points(&window, 1000, 42);
    let report = check_subset_classical(&s, &points, &cfg).unwrap();
    assert_eq!(report.violations, 0, "{}", report.line());
    assert!(report.applicable > 0);
    println!("criterion 08 PASS: {}", report.line());
}

/// Membership is independent of the threshold radius: R2 = 2R produces
/// no disagreements among points certified under both.
#[test]
fn criterion_09_r_independence() {
    let s = semigroup(&["exp(z)"]);
    let cfg = ClassifierConfig::default();
    // default threshold for exp from the doubling grid is R = 1; compare
    // against R2 = 2
    let window = Window::new(2.0, 4.0, -0.5, 0.5).unwrap();
    let points = sample_points(&window, 200, 42);
    let report = check_r_independence(&s, &points, &cfg, 2.0).unwrap();
    assert_eq!(report.violations, 0, "{}", report.line());
    assert!(report.applicable > 0);
    println!("criterion 09 PASS: {}", report.line());
}

/// Rendering a 256x256 grid is byte-identical across repeated runs and
/// across worker counts, within the time budget.
#[test]
fn criterion_10_determinism() {
    let dir = std::env::temp_dir().join(format!("fastesc-acc10-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("det.cfg");
    std::fs::write(
        &cfg_path,
        "generator: 0.25*exp(z)\nwindow: -2 8 -3 3\ngrid: 256 256\ndepth: 1\niters: 64\n",
    )
    .unwrap();
    let render_to = |name: &str, threads: Option<&str>| {
        let out_path = dir.join(name);
        let mut args = vec![
            "render".to_owned(),
            cfg_path.to_string_lossy().into_owned(),
            "-o".to_owned(),
            out_path.to_string_lossy().into_owned(),
        ];
        if let Some(t) = threads {
            args.push("--threads".to_owned());
            args.push(t.to_owned());
        }
        let start = Instant::now();
        let status = Command::new(env!("CARGO_BIN_EXE_fastesc"))
            .args(&args)
            .status()
            .unwrap();
        let elapsed = start.elapsed();
        assert!(status.success());
        assert!(elapsed.as_secs_f64() <= 60.0, "took {:?}", elapsed);
        (std::fs::read(&out_path).unwrap(), elapsed)
    };
    let (a, ta) = render_to("a.ppm", None);
    let (b, _) = render_to("b.ppm", None);
    let (one, _) = render_to("one.ppm", Some("1"));
    let (many, tmany) = render_to("many.ppm", Some("8"));
    assert_eq!(a, b, "repeated runs differ");
    assert_eq!(one, many, "1 worker vs 8 workers differ");
    assert_eq!(a, one, "default vs explicit pool differ");
    println!(
        "criterion 10 PASS: 4 renders byte-identical ({} bytes); {:?} default, {:?} with 8 workers",
        a.len(),
        ta,
        tmany
    );
}

/// The boundary mask of the fast-escaping estimate for 0.25 e^z on
/// [-2,8] x [-3,3] is nonempty at 256x256.
#[test]
fn criterion_11_boundary_nonempty() {
    let s = semigroup(&["0.25*exp(z)"]);
    let cfg = ClassifierConfig {
        max_word_len: 1,
        ..ClassifierConfig::default()
    };
    let window = Window::new(-2.0, 8.0, -3.0, 3.0).unwrap();
    let grid = classify_grid(&s, window, 256, 256, &cfg).unwrap();
    let mask = extract_boundary(&grid);
    let count = mask.count();
    assert!(count > 0, "boundary mask is empty");
    // sanity: the image carries both member and non-member cells
    let fast = grid.cells.iter().filter(|c| c.verdict.is_fast()).count();
    assert!(fast > 0 && fast < grid.cells.len());
    let _ = render(&grid, &PaletteSpec::default());
    println!(
        "criterion 11 PASS: boundary mask has {} cells ({} fast of {})",
        count,
        fast,
        grid.cells.len()
    );
}
