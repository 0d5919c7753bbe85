//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use proptest::test_runner::TestCaseError;
use proptest::test_runner::{Config, TestRunner};

use transcend::measure::{abs_bracket, convergent_value_bound_holds, enumerate_brackets};
use transcend::roth::revalidate;
use transcend::sequence::IndexCheck;
use transcend::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn e(s: &str) -> RationalExponent {
    s.parse().unwrap()
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn rat(n: BigUint, d: BigUint) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, format!("runtime {took:?} exceeds {limit:?}"))
}

/// Naive oracle: `Π lhs^e` vs `Π rhs^e` by direct exponentiation.
fn naive_cmp(lhs: &[(&BigUint, u64)], rhs: &[(&BigUint, u64)]) -> Ordering {
    let prod = |side: &[(&BigUint, u64)]| {
        side.iter()
            .fold(BigUint::one(), |acc, (b, e)| acc * Pow::pow(*b, *e))
    };
    prod(lhs).cmp(&prod(rhs))
}

fn p4() -> Series {
    Series::with_defaults(SequenceSpec::power(2, 4).unwrap())
}

fn ac1_factorial_family() -> Outcome {
    let start = Instant::now();
    let f = Series::with_defaults(SequenceSpec::factorial_exp(2, 1).map_err(|x| x.to_string())?);
    let r = check_growth(&f, &e("5/2"), Window::new(1, 8).unwrap()).map_err(|x| x.to_string())?;
    let pattern: Vec<bool> = r.per_index.iter().map(|c: &IndexCheck| c.lower_holds).collect();
    ensure(
        pattern == [false, false, true, true, true, true, true, true],
        format!("growth pattern {pattern:?}"),
    )?;
    ensure(r.first_all_hold_from == Some(3), "firstAllHoldFrom != 3")?;

    let shifted = Series::with_defaults(
        SequenceSpec::factorial_exp(2, 1)
            .and_then(|s| s.with_start_offset(3))
            .map_err(|x| x.to_string())?,
    );
    let cert = certify(&shifted, &e("5/2"), Window::new(1, 5).unwrap()).map_err(|x| x.to_string())?;
    ensure(cert.witnesses.len() == 5, "expected 5 witnesses")?;
    ensure(cert.witnesses.iter().all(|w| w.verified), "unverified witness")?;
    // independent recheck of every witness inequality: u^s·q^p < v^s
    for w in &cert.witnesses {
        let u = w.tail_bound.numer().magnitude().clone();
        let v = w.tail_bound.denom().magnitude().clone();
        ensure(
            naive_cmp(&[(&u, 2), (&w.q, 5)], &[(&v, 2)]) == Ordering::Less,
            format!("oracle rejects witness m={}", w.m),
        )?;
    }
    ensure(
        cert.rational_prefix == BigRational::new(3.into(), 8.into()),
        "rational prefix != 3/8",
    )?;
    within(Duration::from_secs(5), start)?;
    Ok("growth fails at n=1,2, holds n=3..8; 5 verified witnesses on the shifted series".into())
}

fn ac2_bound_formula() -> Outcome {
    let start = Instant::now();
    for h in 1..=10u64 {
        let b = bound(2, &big(h), &e("4"), &e("2")).map_err(|x| x.to_string())?;
        ensure(b.base == big(6 * h), format!("base for H={h}"))?;
        ensure(b.exponent == e("10"), format!("exponent for H={h}"))?;
    }
    let r = check_sandwich(&p4(), &e("4"), &e("2"), Window::new(1, 4).unwrap())
        .map_err(|x| x.to_string())?;
    ensure(
        r.per_index.iter().all(|c| !c.lower_holds),
        "lower hypothesis should fail at every n",
    )?;
    within(Duration::from_secs(1), start)?;
    Ok("(6H)^10 for H=1..10; sandwich lower hypothesis flagged at n=1..4".into())
}

fn ac3_measure() -> Outcome {
    let start = Instant::now();
    let s = p4();
    let (alpha, k) = (e("3"), e("3/2"));
    let target = bound(2, &big(1), &alpha, &k).map_err(|x| x.to_string())?;
    let enc = enclose(&s, 4).map_err(|x| x.to_string())?;
    let min = brute_force_min(&s, 2, 1, &enc).map_err(|x| x.to_string())?;
    ensure(
        target.is_exceeded_by(&min.min_lower, &s).map_err(|x| x.to_string())?,
        "minLower does not exceed 6^-12",
    )?;
    let n1 = find_n1(&s, &alpha, 2, &big(1), 6).map_err(|x| x.to_string())?;
    ensure(n1.n1 == 2 && n1.q_at_n1 == big(16), "n1 != 2 or q != 16")?;
    let eq15 = BigRational::new(1.into(), 512.into());

    let brackets = enumerate_brackets(&s, 2, 1, &enc).map_err(|x| x.to_string())?;
    ensure(brackets.len() == 26, "expected 26 polynomials")?;
    for b in &brackets {
        let p = b.polynomial();
        // bracket soundness against exact evaluation at the enclosure endpoints
        for t in [&enc.lo, &enc.hi] {
            let v = p.eval(t).abs();
            ensure(b.lower <= v && v <= b.upper, format!("bracket unsound for {p}"))?;
        }
        ensure(b.lower >= min.min_lower || b.upper > min.min_upper, "min not minimal")?;
        let ev = verify_measure(&s, &alpha, &k, &p, 2, &big(1), 8).map_err(|x| format!("{p}: {x}"))?;
        ensure(ev.verified, format!("{p} not verified"))?;
        ensure(ev.enclosure.m <= 6, format!("{p} needed M={}", ev.enclosure.m))?;
        ensure(ev.abs_lower > eq15, format!("{p} below 1/(2·16²)"))?;
        let (lo2, _) = abs_bracket(&p, &ev.enclosure);
        ensure(lo2 == ev.abs_lower, "evidence lower bound not reproducible")?;
    }
    within(Duration::from_secs(10), start)?;
    Ok(format!(
        "26 polynomials verified; argmin {} with |P(θ)| in [{:.6}, {:.6}]",
        min.argmin,
        to_f64(&min.min_lower),
        to_f64(&min.min_upper)
    ))
}

fn to_f64(r: &BigRational) -> f64 {
    r.numer().to_string().parse::<f64>().unwrap_or(f64::NAN)
        / r.denom().to_string().parse::<f64>().unwrap_or(f64::NAN)
}

fn ac4_witnesses() -> Outcome {
    let s = p4();
    for m in 1..=6 {
        let w = witness(&s, &e("5/2"), m).map_err(|x| x.to_string())?;
        ensure(w.verified, format!("m={m} not verified"))?;
        let u = w.tail_bound.numer().magnitude().clone();
        let v = w.tail_bound.denom().magnitude().clone();
        ensure(
            naive_cmp(&[(&u, 2), (&w.q, 5)], &[(&v, 2)]) == Ordering::Less,
            format!("oracle disagrees at m={m}"),
        )?;
    }
    let w = witness(&s, &e("39/10"), 1).map_err(|x| x.to_string())?;
    ensure(!w.verified, "α=39/10 at m=1 should not verify")?;
    Ok("α=5/2 verified for m=1..6; α=39/10 rejected at m=1".into())
}

/// Lemma suite over one series and parameters; returns the number of exact checks made.
fn lemma_suite(s: &Series, alpha: RationalExponent, k: RationalExponent, n_max: u64) -> Result<u32, String> {
    let err = |x: Error| x.to_string();
    let mut checks = 0;
    let convs = convergents(s, n_max + 1).map_err(err)?;
    let terms = s.terms(n_max + 2).map_err(err)?;
    let mut product = BigUint::one();
    for (i, c) in convs.iter().enumerate() {
        product *= &terms[i];
        ensure(c.is_reduced(), format!("convergent {} not reduced", c.m))?;
        ensure(c.q <= product, format!("denominator bound fails at m={}", c.m))?;
        // reverse-order summation oracle
        let rev = terms[..=i]
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, a| acc + rat(big(1), a.clone()));
        ensure(rev == c.value(), format!("summation order changes θ_{}", c.m))?;
        checks += 3;
    }

    let growth = check_growth(s, &alpha, Window::new(1, n_max + 1).unwrap()).map_err(err)?;
    for n in 1..=n_max {
        let (a, next) = (&terms[(n - 1) as usize], &terms[n as usize]);
        if growth.per_index[(n - 1) as usize].lower_holds {
            // a_n/a_{n+1} < 1/a_n^α  ⇔  a_n^(p+s) < a_{n+1}^s
            ensure(
                naive_cmp(&[(a, alpha.num() + alpha.den())], &[(next, alpha.den())]) == Ordering::Less,
                format!("first link of the ratio chain fails at n={n}"),
            )?;
            // 1/a_n^α < 1/a_n  ⇔  a_n^p > a_n^s, for α > 1 and a_n >= 2
            if alpha.cmp_int(1) == Ordering::Greater && *a >= big(2) {
                ensure(
                    naive_cmp(&[(a, alpha.num())], &[(a, alpha.den())]) == Ordering::Greater,
                    format!("second link of the ratio chain fails at n={n}"),
                )?;
            }
            checks += 1;
        }
        if growth.per_index[n as usize].lower_holds {
            let b0 = shrink_factor(s, &alpha, n).map_err(err)?;
            let b1 = shrink_factor(s, &alpha, n + 1).map_err(err)?;
            let (p, q) = (alpha.num(), alpha.den());
            ensure(
                naive_cmp(&[(&b1.product, p), (&b0.next, q)], &[(&b0.product, p), (&b1.next, q)])
                    == Ordering::Less,
                format!("b_{} >= b_{n}", n + 1),
            )?;
            checks += 1;
        }
    }

    let sandwich = check_sandwich(s, &alpha, &k, Window::new(1, n_max).unwrap()).map_err(err)?;
    for n in 1..=n_max {
        let held_so_far = sandwich.per_index[..n as usize].iter().all(|c| c.lower_holds);
        if held_so_far {
            ensure(
                qn_exponent_bound_holds(s, &alpha, n).map_err(err)?,
                format!("q_n <= a_n^((α+1)/α) fails at n={n}"),
            )?;
            checks += 1;
        }
        if held_so_far && sandwich.per_index[n as usize - 1].all_hold() {
            ensure(
                q_growth_holds(s, &alpha, &k, n).map_err(err)?,
                format!("q_(n+1) < q_n^(k(α+1)) fails at n={n}"),
            )?;
            checks += 1;
        }
    }

    if s.spec().has_doubling_tail() {
        let mut prev: Option<Enclosure> = None;
        for m in 1..=n_max {
            let enc = enclose(s, m).map_err(err)?;
            ensure(
                enc.width() == rat(big(2), terms[m as usize].clone()),
                format!("width != 2/a_(M+1) at M={m}"),
            )?;
            if let Some(p) = &prev {
                ensure(enc.is_within(p), format!("enclosure {m} not nested"))?;
            }
            prev = Some(enc);
            checks += 2;
        }
    }
    Ok(checks)
}

fn ac5_lemmas() -> Outcome {
    let start = Instant::now();
    let mut runner = TestRunner::new(Config {
        cases: 128,
        failure_persistence: None,
        ..Config::default()
    });
    let strategy = (2u64..=10, 4u64..=6, 5u64..=30, 1u64..=6, 5u64..=20, 1u64..=4);
    let total = std::cell::Cell::new(0u64);
    let ran = std::cell::Cell::new(0u32);
    let result = runner.run(&strategy, |(a1, exp, ap, aq, kp, kq)| {
        let alpha = RationalExponent::new(ap, aq).unwrap();
        let k = RationalExponent::new(kp, kq).unwrap();
        let s = Series::with_defaults(SequenceSpec::power(a1, exp).unwrap());
        let checks = lemma_suite(&s, alpha, k, 3).map_err(TestCaseError::fail)?;
        total.set(total.get() + checks as u64);
        ran.set(ran.get() + 1);
        Ok(())
    });
    result.map_err(|e| e.to_string())?;
    let (mut total_checks, cases) = (total.get(), ran.get());

    // the two named families
    let named = [
        (p4(), e("5/2"), e("3/2"), 4),
        (p4(), e("3"), e("3/2"), 4),
        (
            Series::with_defaults(SequenceSpec::factorial_exp(2, 1).unwrap()),
            e("5/2"),
            e("2"),
            6,
        ),
    ];
    for (s, a, k, n) in named {
        total_checks += lemma_suite(&s, a, k, n)? as u64;
    }
    within(Duration::from_secs(30), start)?;
    ensure(cases >= 100, format!("only {cases} randomized cases ran"))?;
    Ok(format!("{cases} randomized power families + named families, {total_checks} exact checks"))
}

fn ac6_tails() -> Outcome {
    let mut checked = 0;
    for (a1, exp) in [(2u64, 4u64), (2, 2), (3, 2), (5, 3), (10, 2)] {
        let s = Series::with_defaults(SequenceSpec::power(a1, exp).unwrap());
        let terms = s.terms(8).map_err(|x| x.to_string())?;
        for m in 1..=4usize {
            let tb = tail_bound(&s, m as u64).map_err(|x| x.to_string())?;
            let tail = terms[m..m + 4]
                .iter()
                .fold(BigRational::zero(), |acc, a| acc + rat(big(1), a.clone()));
            let quarter = &tb / BigRational::from_integer(4.into());
            ensure(
                quarter <= tail && tail <= tb,
                format!("tail outside [tb/4, tb] for a1={a1}, e={exp}, m={m}"),
            )?;
            checked += 1;
        }
    }
    Ok(format!("{checked} partial tails inside [tail_bound/4, tail_bound]"))
}

fn ac7_convergent_values() -> Outcome {
    let s = p4();
    let convs = convergents(&s, 4).map_err(|x| x.to_string())?;
    let enc = enclose(&s, 4).map_err(|x| x.to_string())?;
    let (mut checked, mut skipped) = (0, 0);
    for d in 1..=2u64 {
        for b in enumerate_brackets(&s, d, 1, &enc).map_err(|x| x.to_string())? {
            let p = b.polynomial();
            for c in &convs {
                match convergent_value_bound_holds(&p, c, d) {
                    None => skipped += 1,
                    Some(true) => checked += 1,
                    Some(false) => return Err(format!("|{p}(θ_{})| < 1/q^{d}", c.m)),
                }
                // oracle: integer numerator of q^d·P(p/q) is nonzero, hence >= 1
                let v = p.eval(&c.value()) * BigRational::from_integer(BigInt::from(Pow::pow(&c.q, d)));
                ensure(v.is_integer(), "q^d·P(θ_n) not an integer")?;
            }
        }
    }
    Ok(format!("{checked} exact checks, {skipped} convergent roots skipped"))
}

fn ac8_cli() -> Outcome {
    use transcend::cli::run_with;
    let dir = tempfile::tempdir().map_err(|x| x.to_string())?;
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.to_string_lossy().into_owned()
    };
    let p4_path = write("p4.json", r#"{"family":"power","a1":"2","e":"4","startOffset":1}"#);
    let f_path = write("f.json", r#"{"family":"factorialExp","base":"2","offset":"1"}"#);
    let cert_path = dir.path().join("cert.json").to_string_lossy().into_owned();

    let run = |args: &[&str]| {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["transcend"];
        argv.extend_from_slice(args);
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    };

    let (code, _, err) = run(&["certify", "--spec", &p4_path, "--alpha", "5/2", "--from", "1", "--to", "5", "--out", &cert_path]);
    ensure(code == 0, format!("certify exit {code}: {err}"))?;
    let emitted = std::fs::read_to_string(&cert_path).map_err(|x| x.to_string())?;
    let cert: Certificate = serde_json::from_str(&emitted).map_err(|x| x.to_string())?;
    ensure(cert.witnesses.len() == 5, "certificate should hold 5 witnesses")?;
    ensure(revalidate(&cert, Limits::default()).map_err(|x| x.to_string())?, "library revalidation failed")?;

    let (code, reserialized, err) = run(&["certify", "--revalidate", &cert_path]);
    ensure(code == 0, format!("revalidate exit {code}: {err}"))?;
    ensure(reserialized == emitted, "re-serialization not byte-identical")?;

    let tampered = emitted.replacen("\"verified\": true", "\"verified\": false", 1);
    let tampered_path = write("tampered.json", &tampered);
    let (code, _, _) = run(&["certify", "--revalidate", &tampered_path]);
    ensure(code == 1, format!("tampered certificate exit {code}"))?;

    let (code, _, err) = run(&["measure", "--spec", &p4_path, "--alpha", "4", "--k", "2", "--poly=-1,1,1"]);
    ensure(code == 2, format!("measure α=4,k=2 exit {code}"))?;
    ensure(
        err.contains("sandwich hypothesis violated at n=1"),
        format!("unexpected error text {err:?}"),
    )?;
    let obj: serde_json::Value = serde_json::from_str(err.trim()).map_err(|x| x.to_string())?;
    ensure(obj["error"] == "invalid-parameter", "error object kind")?;

    let (code, csv, _) = run(&["analyze", "--spec", &f_path, "--alpha", "5/2", "--from", "1", "--to", "5"]);
    ensure(code == 1, format!("analyze exit {code}"))?;
    ensure(csv.lines().count() == 6, "analyze CSV should have header + 5 rows")?;
    Ok("certificate round-trips byte-identically; exit codes 0/1/2 observed".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("AC1 factorial-exponent growth pattern and shifted certificate", ac1_factorial_family),
        ("AC2 quartic-power bound formula and flagged hypothesis", ac2_bound_formula),
        ("AC3 measure bound on all height-1 quadratics", ac3_measure),
        ("AC4 witness inequality", ac4_witnesses),
        ("AC5 lemma property suite", ac5_lemmas),
        ("AC6 tail bound oracle", ac6_tails),
        ("AC7 convergent value lower bound", ac7_convergent_values),
        ("AC8 CLI certificate round-trip and exit codes", ac8_cli),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        match f() {
            Ok(detail) => println!("PASS  {name} ({:.2?}): {detail}", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name} ({:.2?}): {why}", start.elapsed());
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
