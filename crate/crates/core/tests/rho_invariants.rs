use qamean::{
    estimate_rho, full_report, make_builtin, parse_generator, rho_restricted_monotone, BoundKind, BuiltinFamily,
    Generator, Interval, OptimizerConfig,
};

fn exp_on(s: f64, u: Interval) -> Generator {
    make_builtin(&BuiltinFamily::Exp(s), u).unwrap()
}

fn pow_on(s: f64, u: Interval) -> Generator {
    make_builtin(&BuiltinFamily::Power(s), u).unwrap()
}

fn rho(f: &Generator, g: &Generator, u: &Interval) -> f64 {
    estimate_rho(f, g, u, &OptimizerConfig::default()).unwrap().value
}

#[test]
fn symmetric_in_the_pair() {
    let u = Interval::open(0.0, 1.0).unwrap();
    let v = Interval::closed(1.0, 2.0).unwrap();
    let cases = [
        (exp_on(15.0, u), exp_on(20.0, u), u),
        (exp_on(-5.0, u), exp_on(1.0, u), u),
        (pow_on(-1.0, v), pow_on(3.0, v), v),
        (parse_generator("ln(x) + x^2", v).unwrap(), pow_on(2.0, v), v),
    ];
    for (f, g, w) in &cases {
        let (a, b) = (rho(f, g, w), rho(g, f, w));
        assert!((a - b).abs() < 1e-10, "{f} vs {g}: {a} {b}");
    }
}

#[test]
fn stable_under_grid_doubling() {
    let u = Interval::open(0.0, 1.0).unwrap();
    let v = Interval::closed(1.0, 2.0).unwrap();
    let cases = [
        (exp_on(15.0, u), exp_on(20.0, u), u),
        (exp_on(0.0, u), exp_on(1.0, u), u),
        (pow_on(1.0, v), pow_on(3.0, v), v),
    ];
    for (f, g, w) in &cases {
        let coarse = estimate_rho(f, g, w, &OptimizerConfig::default()).unwrap().value;
        let fine =
            estimate_rho(f, g, w, &OptimizerConfig { grid_n: 128, grid_m: 128, ..Default::default() }).unwrap().value;
        assert!((coarse - fine).abs() < 1e-4, "{f} vs {g}: {coarse} {fine}");
    }
}

/// exp(s·x) on (c, c + 1) is an affine image of exp(s·(x − c)), so shifting
/// the interval shifts every mean by c and leaves the distance unchanged.
#[test]
fn invariant_under_translation() {
    let u = Interval::open(0.0, 1.0).unwrap();
    let base = rho(&exp_on(3.0, u), &exp_on(-4.0, u), &u);
    for c in [-2.5, 0.75, 10.0] {
        let w = Interval::open(c, c + 1.0).unwrap();
        let shifted = rho(&exp_on(3.0, w), &exp_on(-4.0, w), &w);
        assert!((shifted - base).abs() < 1e-8, "c = {c}: {shifted} vs {base}");
    }
}

#[test]
fn affine_copies_are_at_distance_zero() {
    let v = Interval::closed(1.0, 2.0).unwrap();
    let f = parse_generator("exp(2*x) - 3*x", v).unwrap();
    for (alpha, beta) in [(2.0, 1.0), (-0.5, 3.0), (1e3, -7.0)] {
        let g = f.affine(alpha, beta).unwrap();
        assert!(rho(&f, &g, &v) < 1e-12);
    }
    let u = Interval::open(0.0, 1.0).unwrap();
    let e = exp_on(15.0, u);
    assert_eq!(rho(&e, &e.affine(-3.0, 2.0).unwrap(), &u), 0.0);
}

#[test]
fn restriction_never_increases_distance() {
    let v = Interval::closed(1.0, 2.0).unwrap();
    let (f, g) = (pow_on(-1.0, v), pow_on(3.0, v));
    let cfg = OptimizerConfig { grid_n: 32, grid_m: 32, ..Default::default() };
    for (lo, hi) in [(1.0, 1.5), (1.2, 1.9), (1.7, 2.0), (1.4, 1.41)] {
        let w = Interval::closed(lo, hi).unwrap();
        let c = rho_restricted_monotone(&f, &g, &v, &w, &cfg).unwrap();
        assert!(c.holds, "[{lo}, {hi}]: {} > {}", c.restricted.value, c.full.value);
    }
}

#[test]
fn metric_triangle_inequality() {
    let u = Interval::open(0.0, 1.0).unwrap();
    let rates = [-15.0, -1.0, 0.0, 5.0, 20.0];
    for &a in &rates {
        for &b in &rates {
            for &c in &rates {
                let (fa, fb, fc) = (exp_on(a, u), exp_on(b, u), exp_on(c, u));
                let direct = rho(&fa, &fc, &u);
                let via = rho(&fa, &fb, &u) + rho(&fb, &fc, &u);
                assert!(direct <= via + 1e-8, "{a} {b} {c}: {direct} > {via}");
            }
        }
    }
}

#[test]
fn power_pair_sandwich() {
    let v = Interval::closed(1.0, 2.0).unwrap();
    let r = full_report(&pow_on(1.0, v), &pow_on(3.0, v), &v, &OptimizerConfig::default()).unwrap();
    assert!(r.sandwich.holds, "{:?}", r.sandwich);
    for e in r.entries.iter().filter(|e| e.applicable) {
        match e.kind {
            BoundKind::Lower => assert!(e.value <= r.rho.value + 1e-9, "{}", e.name),
            BoundKind::Upper => assert!(r.rho.value <= e.value + 1e-9, "{}", e.name),
            BoundKind::Advisory => {}
        }
    }
}
