//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tropelim::cheb::{parse_bounds_json, parse_csv, solve_chebyshev, ChebDataset};
use tropelim::eliminate::StageStats;
use tropelim::oracle::{random_problem, vertex_oracle, GeneratorParams, VertexCaps};
use tropelim::semifield::Carrier;
use tropelim::{
    breakpoint_oracle, parse_problem, solve, solve_univariate, AnyProblem, ExactSemifield,
    FloatSemifield, Pick, Problem, PruneLevel, Rational, Semifield, SemifieldId, SolverOptions,
    Value,
};

type Check = std::result::Result<Vec<String>, String>;
type Criterion<'a> = (&'static str, Duration, Box<dyn Fn() -> Check + 'a>);

fn data(name: &str) -> Vec<u8> {
    let path = format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn exact_problem(name: &str) -> Problem<Rational> {
    match parse_problem(&data(name)).expect("data file parses") {
        AnyProblem::Exact(p) => p,
        AnyProblem::Float(_) => panic!("{name} should be exact"),
    }
}

fn dataset(csv: &str, bounds: &str) -> ChebDataset {
    let (x, y) = parse_csv(&data(csv)).expect("csv parses");
    let (lo, hi) = parse_bounds_json(&data(bounds)).expect("bounds parse");
    ChebDataset::new(x, y, lo, hi).expect("dataset is valid")
}

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn qs(v: &[&str]) -> Vec<Value<Rational>> {
    v.iter().map(|s| Value::Finite(q(s))).collect()
}

fn options(prune: PruneLevel, pick: Pick) -> SolverOptions {
    SolverOptions {
        prune,
        pick,
        ..SolverOptions::default()
    }
}

fn fmt(v: &Value<Rational>) -> String {
    ExactSemifield::max_plus().format(v)
}

fn fmt_point(p: &[Value<Rational>]) -> String {
    let parts: Vec<_> = p.iter().map(fmt).collect();
    format!("({})", parts.join(", "))
}

/// The seeded max-plus corpus: 200 problems, N ∈ {1, 2, 3}, M ≤ 5.
fn corpus() -> Vec<Problem<Rational>> {
    (0..200u64)
        .map(|seed| {
            let params = GeneratorParams {
                arity: 1 + (seed % 3) as usize,
                monomials: 1 + (seed / 3 % 5) as usize,
                seed,
                ..GeneratorParams::default()
            };
            random_problem(&params).expect("generator parameters are valid")
        })
        .collect()
}

/// Post-zero-drop stage sizes against `M²/4 + M` of the stage they came from.
fn growth_violations(stats: &[StageStats]) -> Vec<String> {
    stats
        .windows(2)
        .filter_map(|w| {
            let m = w[0].pruned_count;
            let count = w[1].nonzero_count;
            (4 * count > m * m + 4 * m).then(|| {
                format!(
                    "level {}: {count} nonzero rows from M = {m} exceeds M²/4 + M",
                    w[1].level
                )
            })
        })
        .collect()
}

fn criterion_1() -> Check {
    let p = exact_problem("example1.json");
    let solved = solve(&p, &SolverOptions::default()).map_err(|e| e.to_string())?;
    let sol = &solved.solution;
    let want_mu = Value::Finite(q("3/7"));
    let want_x = qs(&["0", "1/7", "1"]);
    if sol.mu != want_mu || sol.point != want_x {
        return Err(format!(
            "solver gave mu = {} at {}, expected 3/7 at (0, 1/7, 1)",
            fmt(&sol.mu),
            fmt_point(&sol.point)
        ));
    }
    let (fit, _) = solve_chebyshev(
        &dataset("example1.csv", "example1.bounds.json"),
        &SolverOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let want_theta = vec![q("0"), q("1/7"), q("1")];
    if fit.error != q("3/7") || fit.theta != want_theta {
        return Err(format!(
            "Chebyshev decoding gave error {} at {:?}",
            fit.error, fit.theta
        ));
    }
    Ok(vec![format!(
        "mu = 3/7 at (0, 1/7, 1); Chebyshev error {} certified by residual {}",
        fit.error, fit.max_abs_residual
    )])
}

fn criterion_2() -> Check {
    let p = exact_problem("example2.json");
    let want_mu = Value::Finite(q("13/8"));
    let want_x = qs(&["-1/4", "1/8", "1/4"]);
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    for prune in [PruneLevel::Basic, PruneLevel::Dominance] {
        let solved = solve(&p, &options(prune, Pick::Lower)).map_err(|e| e.to_string())?;
        let sizes: Vec<String> = solved
            .trace
            .stats
            .iter()
            .map(|s| {
                format!(
                    "L{}: {}/{}/{}",
                    s.level, s.raw_count, s.nonzero_count, s.pruned_count
                )
            })
            .collect();
        notes.push(format!(
            "prune {}: mu = {} at {}; stage sizes raw/nonzero/kept {}",
            prune.name(),
            fmt(&solved.solution.mu),
            fmt_point(&solved.solution.point),
            sizes.join(", ")
        ));
        if solved.solution.mu != want_mu || solved.solution.point != want_x {
            failures.push(format!(
                "prune {}: mu = {}, expected 13/8 at (-1/4, 1/8, 1/4)",
                prune.name(),
                fmt(&solved.solution.mu)
            ));
        }
    }
    if failures.is_empty() {
        Ok(notes)
    } else {
        // The tenth residual |2θ₁ + θ₂ + 3| alone is at least 3 − 1/2 − 1/4 on the box.
        notes.push(
            "the data's residual |2θ1 + θ2 + 3| is at least 9/4 everywhere on the box".into(),
        );
        Err(format!(
            "{}\n      {}",
            failures.join("; "),
            notes.join("\n      ")
        ))
    }
}

fn criterion_3(corpus: &[Problem<Rational>]) -> Check {
    let mut bad = Vec::new();
    for (seed, p) in corpus.iter().enumerate() {
        let mu = solve(p, &SolverOptions::default())
            .map_err(|e| format!("seed {seed}: {e}"))?
            .solution
            .mu;
        let oracle =
            vertex_oracle(p, VertexCaps::default()).map_err(|e| format!("seed {seed}: {e}"))?;
        if mu != oracle {
            bad.push(format!(
                "seed {seed}: solver {} vs oracle {}",
                fmt(&mu),
                fmt(&oracle)
            ));
        }
    }
    if bad.is_empty() {
        Ok(vec![format!(
            "{} of {} problems agree exactly",
            corpus.len(),
            corpus.len()
        )])
    } else {
        Err(bad.join("; "))
    }
}

fn criterion_4() -> Check {
    let mut bad = Vec::new();
    let mut endpoints = 0;
    for seed in 0..500u64 {
        let p = random_problem(&GeneratorParams {
            arity: 1,
            monomials: 1 + (seed % 8) as usize,
            seed: 10_000 + seed,
            ..GeneratorParams::default()
        })
        .expect("generator parameters are valid");
        let res = solve_univariate(&p).map_err(|e| format!("seed {seed}: {e}"))?;
        let oracle = breakpoint_oracle(&p).map_err(|e| format!("seed {seed}: {e}"))?;
        if res.mu != oracle {
            bad.push(format!(
                "seed {seed}: closed form {} vs breakpoints {}",
                fmt(&res.mu),
                fmt(&oracle)
            ));
            continue;
        }
        let Some(iv) = res.interval else {
            bad.push(format!("seed {seed}: no minimizer interval"));
            continue;
        };
        for end in [&iv.lower, &iv.upper] {
            let v = p
                .evaluate(std::slice::from_ref(end))
                .map_err(|e| e.to_string())?;
            if v != res.mu {
                bad.push(format!(
                    "seed {seed}: f({}) = {} ≠ mu {}",
                    fmt(end),
                    fmt(&v),
                    fmt(&res.mu)
                ));
            }
            endpoints += 1;
        }
    }
    if bad.is_empty() {
        Ok(vec![format!(
            "500 instances agree; {endpoints} interval endpoints certify"
        )])
    } else {
        Err(bad.join("; "))
    }
}

fn criterion_5(corpus: &[Problem<Rational>]) -> Check {
    let ex2 = exact_problem("example2.json");
    let mut bad = Vec::new();
    let mut steps = 0;
    for (name, p) in std::iter::once(("example 2".to_string(), &ex2)).chain(
        corpus
            .iter()
            .enumerate()
            .map(|(i, p)| (format!("seed {i}"), p)),
    ) {
        for prune in PruneLevel::ALL {
            let solved =
                solve(p, &options(prune, Pick::Lower)).map_err(|e| format!("{name}: {e}"))?;
            steps += solved.trace.stats.len() - 1;
            for v in growth_violations(&solved.trace.stats) {
                bad.push(format!("{name}, prune {}: {v}", prune.name()));
            }
        }
    }
    if bad.is_empty() {
        Ok(vec![format!("{steps} elimination steps within M²/4 + M")])
    } else {
        Err(bad.join("; "))
    }
}

fn criterion_6(corpus: &[Problem<Rational>]) -> Check {
    let mut bad = Vec::new();
    for (seed, p) in corpus.iter().enumerate() {
        let mus: Vec<Value<Rational>> = PruneLevel::ALL
            .iter()
            .map(|&prune| solve(p, &options(prune, Pick::Lower)).map(|s| s.solution.mu))
            .collect::<Result<_, _>>()
            .map_err(|e| format!("seed {seed}: {e}"))?;
        if mus.iter().any(|m| m != &mus[0]) {
            let shown: Vec<_> = mus.iter().map(fmt).collect();
            bad.push(format!(
                "seed {seed}: none/basic/dominance gave {}",
                shown.join(" / ")
            ));
        }
    }
    if bad.is_empty() {
        Ok(vec![format!(
            "{} problems identical across none, basic, dominance",
            corpus.len()
        )])
    } else {
        Err(bad.join("; "))
    }
}

/// Checks the semifield laws on one triple; returns the names of failed laws.
fn law_failures<C: Carrier>(
    sf: &Semifield<C>,
    [a, b, c]: [&Value<C>; 3],
    r: &Rational,
    s: &Rational,
    eq: &dyn Fn(&Value<C>, &Value<C>) -> bool,
) -> Vec<&'static str> {
    let mut failed = Vec::new();
    let mut law = |name, ok: bool| {
        if !ok {
            failed.push(name);
        }
    };
    let zero = sf.zero();
    let one = sf.one();
    law("oplus commutes", eq(&sf.oplus(a, b), &sf.oplus(b, a)));
    law(
        "oplus associates",
        eq(&sf.oplus(&sf.oplus(a, b), c), &sf.oplus(a, &sf.oplus(b, c))),
    );
    law("oplus idempotent", eq(&sf.oplus(a, a), a));
    law("zero is oplus identity", eq(&sf.oplus(a, &zero), a));
    law("otimes commutes", eq(&sf.otimes(a, b), &sf.otimes(b, a)));
    law(
        "otimes associates",
        eq(
            &sf.otimes(&sf.otimes(a, b), c),
            &sf.otimes(a, &sf.otimes(b, c)),
        ),
    );
    law("one is otimes identity", eq(&sf.otimes(a, &one), a));
    law("zero absorbs", eq(&sf.otimes(a, &zero), &zero));
    law(
        "distributive",
        eq(
            &sf.otimes(a, &sf.oplus(b, c)),
            &sf.oplus(&sf.otimes(a, b), &sf.otimes(a, c)),
        ),
    );
    law(
        "order is induced by oplus",
        sf.leq(a, b) == (sf.oplus(a, b) == *b),
    );
    law("a below a oplus b", sf.leq(a, &sf.oplus(a, b)));
    if sf.leq(a, b) {
        law(
            "otimes is monotone",
            sf.leq(&sf.otimes(a, c), &sf.otimes(b, c)),
        );
    }
    if !a.is_zero() {
        let inv = sf.inv(a).expect("nonzero is invertible");
        law("inverse", eq(&sf.otimes(a, &inv), &one));
        let ar = sf.tpow(a, r).expect("nonzero base");
        let as_ = sf.tpow(a, s).expect("nonzero base");
        law(
            "power of a power",
            eq(
                &sf.tpow(&ar, s).expect("nonzero base"),
                &sf.tpow(a, &(r * s)).expect("nonzero base"),
            ),
        );
        law(
            "powers add",
            eq(
                &sf.otimes(&ar, &as_),
                &sf.tpow(a, &(r + s)).expect("nonzero base"),
            ),
        );
        let root = sf.tpow(a, &Rational::new(1, 3)).expect("nonzero base");
        law(
            "radicable",
            eq(
                &sf.tpow(&root, &Rational::from_integer(3))
                    .expect("nonzero base"),
                a,
            ),
        );
    } else {
        law("zero has no inverse", sf.inv(a).is_err());
    }
    failed
}

fn rational_value(rng: &mut ChaCha8Rng) -> Value<Rational> {
    if rng.gen_ratio(1, 20) {
        Value::Zero
    } else {
        Value::Finite(Rational::new(rng.gen_range(-30..=30), rng.gen_range(1..=7)))
    }
}

fn float_value(id: SemifieldId, rng: &mut ChaCha8Rng) -> Value<f64> {
    if rng.gen_ratio(1, 20) {
        return Value::Zero;
    }
    let x: f64 = rng.gen_range(-8.0..8.0);
    Value::Finite(if id.is_additive() { x } else { x.exp() })
}

fn small_exponent(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

fn close(a: &Value<f64>, b: &Value<f64>) -> bool {
    match (a, b) {
        (Value::Zero, Value::Zero) => true,
        (Value::Finite(x), Value::Finite(y)) => {
            (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0)
        }
        _ => false,
    }
}

fn criterion_7() -> Check {
    let mut bad = Vec::new();
    let mut notes = Vec::new();
    for id in [SemifieldId::MaxPlus, SemifieldId::MinPlus] {
        let sf = ExactSemifield::new(id).expect("additive semifields are exact");
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for t in 0..1000 {
            let v: Vec<_> = (0..3).map(|_| rational_value(&mut rng)).collect();
            let (r, s) = (small_exponent(&mut rng), small_exponent(&mut rng));
            for law in law_failures(&sf, [&v[0], &v[1], &v[2]], &r, &s, &|x, y| x == y) {
                bad.push(format!("{id} exact triple {t}: {law}"));
            }
        }
        notes.push(format!("{id} exact: 1000 triples"));
    }
    for id in SemifieldId::ALL {
        let sf = FloatSemifield::new(id).expect("every semifield has a float mode");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for t in 0..1000 {
            let v: Vec<_> = (0..3).map(|_| float_value(id, &mut rng)).collect();
            let (r, s) = (small_exponent(&mut rng), small_exponent(&mut rng));
            for law in law_failures(&sf, [&v[0], &v[1], &v[2]], &r, &s, &close) {
                bad.push(format!("{id} float triple {t}: {law}"));
            }
        }
        notes.push(format!("{id} float: 1000 triples"));
    }
    if bad.is_empty() {
        Ok(vec![notes.join(", ")])
    } else {
        Err(bad.join("; "))
    }
}

fn criterion_8(corpus: &[Problem<Rational>]) -> Check {
    let named = [
        ("example 1", exact_problem("example1.json")),
        ("example 2", exact_problem("example2.json")),
    ];
    let mut bad = Vec::new();
    let mut checked = 0;
    let all = named.iter().map(|(n, p)| (n.to_string(), p)).chain(
        corpus
            .iter()
            .enumerate()
            .map(|(i, p)| (format!("seed {i}"), p)),
    );
    for (name, p) in all {
        let sf = p.semifield();
        for pick in Pick::ALL {
            let sol = solve(p, &options(PruneLevel::Dominance, pick))
                .map_err(|e| format!("{name}: {e}"))?
                .solution;
            let value = p.evaluate(&sol.point).map_err(|e| format!("{name}: {e}"))?;
            if value != sol.mu {
                bad.push(format!(
                    "{name}, pick {}: f(x) = {} ≠ mu {}",
                    pick.name(),
                    fmt(&value),
                    fmt(&sol.mu)
                ));
            }
            if !p.bounds().contains(&sf, &sol.point) {
                bad.push(format!("{name}, pick {}: point outside box", pick.name()));
            }
            for (j, (iv, x)) in sol.intervals.iter().zip(&sol.point).enumerate() {
                if !sf.leq(&iv.lower, &iv.upper) || !iv.contains(&sf, x) {
                    bad.push(format!(
                        "{name}, pick {}: interval for x_{} is inconsistent",
                        pick.name(),
                        j + 1
                    ));
                }
            }
            checked += 1;
        }
    }
    if bad.is_empty() {
        Ok(vec![format!("{checked} solutions certify (all picks)")])
    } else {
        Err(bad.join("; "))
    }
}

fn main() {
    let corpus = corpus();
    let criteria: Vec<Criterion> = vec![
        (
            "example 1 reproduction (exact)",
            Duration::from_secs(10),
            Box::new(criterion_1),
        ),
        (
            "example 2 reproduction (exact, prune >= basic)",
            Duration::from_secs(15 * 60),
            Box::new(criterion_2),
        ),
        (
            "oracle equivalence on 200 random problems",
            Duration::from_secs(5 * 60),
            Box::new(|| criterion_3(&corpus)),
        ),
        (
            "univariate closed form on 500 random problems",
            Duration::from_secs(60),
            Box::new(criterion_4),
        ),
        (
            "growth bound per elimination step",
            Duration::MAX,
            Box::new(|| criterion_5(&corpus)),
        ),
        (
            "pruning neutrality",
            Duration::MAX,
            Box::new(|| criterion_6(&corpus)),
        ),
        (
            "semifield laws, 1000 triples per semifield",
            Duration::MAX,
            Box::new(criterion_7),
        ),
        (
            "solution certificates",
            Duration::MAX,
            Box::new(|| criterion_8(&corpus)),
        ),
    ];
    let mut failed = 0;
    for (i, (title, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let verdict = match &result {
            Ok(_) if elapsed > *limit => Err(format!("took {elapsed:.2?}, limit {limit:.0?}")),
            Ok(notes) => Ok(notes),
            Err(e) => Err(e.clone()),
        };
        match verdict {
            Ok(notes) => {
                println!(
                    "criterion {} [PRIMARY] {title}: PASS ({elapsed:.2?})",
                    i + 1
                );
                for n in notes {
                    println!("      {n}");
                }
            }
            Err(e) => {
                failed += 1;
                println!(
                    "criterion {} [PRIMARY] {title}: FAIL ({elapsed:.2?})",
                    i + 1
                );
                println!("      {e}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
