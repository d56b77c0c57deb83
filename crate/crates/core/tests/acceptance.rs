//! Acceptance criteria 1 to 10, one pass/fail line each. Runs without the
//! libtest harness so the lines always reach the output.

use std::time::Instant;

use coniveau::catalog::{load_entry, validate_entry, zp_entry};
use coniveau::coniveau::{dh_report, quotient_dims, ClassRecord, ClassStatus, DhReport, Mode};
use coniveau::gralg::{CompiledAlgebra, Element};
use coniveau::margolis::margolis_homology;
use coniveau::ops::{OperatedAlgebra, Operation};
use coniveau::transfer::{check_frobenius, check_grothendieck, TransferModel};
use coniveau::{cli, Entry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// `u` and `v` span the same line.
fn proportional(alg: &CompiledAlgebra, d: u32, u: &[u32], v: &Element) -> bool {
    let w = alg.coords(v, d);
    let f = alg.field();
    let Some(i) = w.iter().position(|&x| x != 0) else { return false };
    if u[i] == 0 {
        return false;
    }
    let s = f.mul(u[i], f.inv(w[i]));
    u.iter().zip(&w).all(|(&a, &b)| a == f.mul(s, b))
}

/// Reported classes with `status` match `expected` one to one, up to scalars.
fn same_classes(alg: &CompiledAlgebra, got: &[&ClassRecord], expected: &[(u32, Element)]) -> Result<(), String> {
    ensure(got.len() == expected.len(), || {
        format!(
            "expected {} classes, got {:?}",
            expected.len(),
            got.iter().map(|c| c.class.as_str()).collect::<Vec<_>>()
        )
    })?;
    for (d, e) in expected {
        ensure(
            got.iter().any(|c| c.degree == *d && proportional(alg, *d, &c.coordinates, e)),
            || format!("missing {} in degree {d}", alg.format(e)),
        )?;
    }
    Ok(())
}

fn nonzero(r: &DhReport) -> Vec<&ClassRecord> {
    r.with_status(ClassStatus::CertifiedNonzero)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let e = zp_entry(3, 3, 12).map_err(err)?;
    let alg = e.algebra().map_err(err)?;
    let r = dh_report(&e, Mode::Integral, Some(10)).map_err(err)?;
    // alpha_ij by the derivation rule; alpha as displayed in the source
    let expected: Vec<(u32, Element)> = [
        (3, "y1*x2 - y2*x1"),
        (3, "y1*x3 - y3*x1"),
        (3, "y2*x3 - y3*x2"),
        (4, "y1*x2*x3 - y2*x1*x3 + y3*x1*x2"),
    ]
    .iter()
    .map(|(d, s)| (*d, alg.parse(s).unwrap()))
    .collect();
    same_classes(alg, &nonzero(&r), &expected)?;
    ensure(r.summary.undecided == 0, || format!("{} undecided", r.summary.undecided))?;
    let universe: usize = r.degrees.iter().map(|d| d.universe_dim).sum();
    ensure(
        universe == r.summary.certified_nonzero + r.summary.certified_in_strong_coniveau,
        || "classes do not partition the universe".into(),
    )?;
    let m = dh_report(&e, Mode::ModP, Some(10)).map_err(err)?;
    ensure(m.summary.certified_nonzero == 0 && m.summary.undecided == 0, || {
        format!("mod-p summary {:?}", m.summary)
    })?;
    ensure(m.classes().all(|c| c.rule == "transfer"), || "a mod-p class not certified by transfer".into())?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1} s"))?;
    Ok(format!(
        "4 nonzero, {} strong (integral); {} strong via transfers (mod-p); {secs:.2} s",
        r.summary.certified_in_strong_coniveau, m.summary.certified_in_strong_coniveau
    ))
}

fn criterion_2() -> Outcome {
    let q8 = load_entry("Q8").map_err(err)?;
    let r = dh_report(&q8, Mode::Integral, None).map_err(err)?;
    ensure(nonzero(&r).is_empty() && r.summary.undecided == 0, || format!("Q8 summary {:?}", r.summary))?;
    let d8 = load_entry("D8").map_err(err)?;
    let alg = d8.algebra().map_err(err)?;
    let r = dh_report(&d8, Mode::Integral, None).map_err(err)?;
    let e = alg.parse("x1*u + x2*u").unwrap();
    let q0u = d8.ops().map_err(err)?.apply_q(0, &alg.parse("u").unwrap()).map_err(err)?;
    ensure(q0u.value == e, || "Q_0(u) differs from (x1 + x2) u".into())?;
    same_classes(alg, &nonzero(&r), &[(3, e)])?;
    ensure(r.summary.undecided == 0, || "D8 has undecided classes".into())?;
    let w = &nonzero(&r)[0].witness;
    ensure(w.iter().any(|s| s.starts_with("Q_1(") && s.ends_with("= y1*c2 + y2*c2")), || {
        format!("D8 witness {w:?}")
    })?;
    Ok("Q8: DH 0; D8: {e}, Q_1 e = (y1 + y2) c2".into())
}

fn criterion_3() -> Outcome {
    let e = load_entry("SO3").map_err(err)?;
    let alg = e.algebra().map_err(err)?;
    let r = dh_report(&e, Mode::Integral, None).map_err(err)?;
    same_classes(alg, &nonzero(&r), &[(3, alg.parse("w3").unwrap())])?;
    let w = &nonzero(&r)[0].witness;
    ensure(w.contains(&"Q_1(w3) = w3^2".to_string()), || format!("witness {w:?}"))?;
    Ok("{w3}, Q_1(w3) = w3^2".into())
}

fn criterion_4() -> Outcome {
    let e = load_entry("G2").map_err(err)?;
    let alg = e.algebra().map_err(err)?;
    let r = dh_report(&e, Mode::Integral, None).map_err(err)?;
    // survivors lie in span{w4, w7, w4 w7} + chow ideal
    let chow: Vec<Element> = ["w4^2", "w6^2", "w7^2"].iter().map(|s| alg.parse(s).unwrap()).collect();
    for c in r.classes().filter(|c| c.status != ClassStatus::CertifiedInStrongConiveau) {
        let d = c.degree;
        let mut span = alg.ideal_span(&chow, d).map_err(err)?;
        for s in ["w4", "w7", "w4*w7"] {
            let x = alg.parse(s).unwrap();
            if alg.degree_of(&x).unwrap() == Some(d) {
                span.insert(&alg.coords(&x, d));
            }
        }
        ensure(span.contains(&c.coordinates), || format!("{} outside the candidate span", c.class))?;
    }
    let nz = nonzero(&r);
    same_classes(alg, &nz, &[(4, alg.parse("w4").unwrap()), (7, alg.parse("w7").unwrap())])?;
    let w4 = nz.iter().find(|c| c.degree == 4).unwrap();
    ensure(w4.witness.contains(&"Q_1(w4) = w7".to_string()), || format!("w4 witness {:?}", w4.witness))?;
    let w7 = nz.iter().find(|c| c.degree == 7).unwrap();
    ensure(w7.level == Some(3), || format!("w7 level {:?}", w7.level))?;
    ensure(w7.witness.contains(&"Q_2(w7) = w7^2".to_string()), || format!("w7 witness {:?}", w7.witness))?;
    Ok("w4 at s = 4 (Q_1 w4 = w7), w7 at c = 3 (Q_2 w7 = w7^2); survivors in span{w4, w7, w4 w7} + chow ideal".into())
}

fn criterion_5() -> Outcome {
    let e = load_entry("PGLp@p=3").map_err(err)?;
    let a = e.ops().map_err(err)?;
    let alg = a.algebra();
    let q0u = a.apply_q(0, &alg.parse("u2").unwrap()).map_err(err)?.value;
    let q1q0u = a.apply_q(1, &q0u).map_err(err)?.value;
    ensure(q1q0u == alg.parse("x8").unwrap(), || format!("Q_1 Q_0 u2 = {}", alg.format(&q1q0u)))?;
    let r = dh_report(&e, Mode::Integral, None).map_err(err)?;
    let nz = nonzero(&r);
    ensure(
        nz.iter().any(|c| c.degree == 3 && proportional(alg, 3, &c.coordinates, &q0u)),
        || "Q_0 u2 not certified".into(),
    )?;
    Ok(format!("Q_0 u2 = {} certified, Q_1 Q_0 u2 = x8", alg.format(&q0u)))
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        0
    } else {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
}

fn criterion_6() -> Outcome {
    for p in [2, 3] {
        for n in 1..=4u32 {
            let e = zp_entry(n, p, 12).map_err(err)?;
            let dims = quotient_dims(e.algebra().map_err(err)?, 1);
            let want: Vec<usize> = (0..dims.len()).map(|d| binom(n as usize, d)).collect();
            ensure(dims == want, || format!("p = {p}, n = {n}: {dims:?}"))?;
        }
    }
    Ok("dim H^d/N^1 = C(n, d) for n <= 4, p in {2, 3}".into())
}

fn criterion_7() -> Outcome {
    for p in [2, 3] {
        for n in 1..=3u32 {
            let e = zp_entry(n, p, 12).map_err(err)?;
            let a = e.ops().map_err(err)?;
            let h = margolis_homology(a, 0, a.truncation() - 1).map_err(err)?.homology_dims();
            ensure(h[0] == 1 && h[1..].iter().all(|&x| x == 0), || format!("p = {p}, n = {n}: {h:?}"))?;
        }
    }
    Ok("Q_0 homology is Z/p in degree 0 for n <= 3, p in {2, 3}".into())
}

fn random_element(rng: &mut ChaCha8Rng, alg: &CompiledAlgebra, d: u32) -> Element {
    let p = alg.prime();
    let coords: Vec<u32> = (0..alg.dim(d)).map(|_| rng.gen_range(0..p)).collect();
    alg.from_coords(d, &coords)
}

/// Derivation law with Koszul sign for Q_n, and the Cartan formula for
/// P^1 (Sq^2 at p = 2), on random homogeneous pairs.
fn random_laws(entry: &Entry, pairs: usize, seed: u64) -> Result<usize, String> {
    let a: &OperatedAlgebra = entry.ops().map_err(err)?;
    let alg = a.algebra();
    let f = alg.field();
    let p = alg.prime();
    let n_top = alg.truncation();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    let mut attempts = 0;
    while done < pairs {
        attempts += 1;
        if attempts > 50 * pairs {
            return Err(format!("{}: could not draw enough pairs", entry.id));
        }
        let n = rng.gen_range(0..=a.n_max());
        let shift = a.q_degree(n);
        if shift > n_top {
            continue;
        }
        let room = n_top - shift;
        let da = rng.gen_range(0..=room);
        let db = rng.gen_range(0..=room - da);
        let x = random_element(&mut rng, alg, da);
        let y = random_element(&mut rng, alg, db);
        let xy = alg.mul(&x, &y);
        if !xy.exact() {
            continue;
        }
        let lhs = a.apply_q(n, &xy.value).map_err(err)?.value;
        let qx = a.apply_q(n, &x).map_err(err)?.value;
        let qy = a.apply_q(n, &y).map_err(err)?.value;
        let t1 = alg.mul(&qx, &y);
        let t2 = alg.mul(&x, &qy);
        if !t1.exact() || !t2.exact() {
            continue;
        }
        let sign = if da % 2 == 1 { p - 1 } else { 1 };
        let rhs = t1.value.plus(&t2.value.scaled(sign, f), f);
        if lhs != rhs {
            return Err(format!(
                "{}: Q_{n}({} * {}) = {} but Leibniz gives {}",
                entry.id,
                alg.format(&x),
                alg.format(&y),
                alg.format(&lhs),
                alg.format(&rhs)
            ));
        }
        if a.has_powers() {
            let pd = Operation::Power(1).degree(p);
            if da + db + pd <= n_top {
                let lhs = a.apply_power(1, &xy.value).map_err(err)?.value;
                let px = a.apply_power(1, &x).map_err(err)?.value;
                let py = a.apply_power(1, &y).map_err(err)?.value;
                let mut rhs = alg.mul(&px, &y).value.plus(&alg.mul(&x, &py).value, f);
                if p == 2 {
                    let bx = a.apply_beta(&x).value;
                    let by = a.apply_beta(&y).value;
                    rhs = rhs.plus(&alg.mul(&bx, &by).value, f);
                }
                if lhs != rhs {
                    return Err(format!("{}: Cartan fails on {} * {}", entry.id, alg.format(&x), alg.format(&y)));
                }
            }
        }
        done += 1;
    }
    Ok(done)
}

fn modeled_entries() -> Result<Vec<Entry>, String> {
    let mut v = Vec::new();
    for id in ["Zp^3@p=3", "Zp^2@p=2", "Zp^1@p=3", "Q8", "D8", "SO3", "G2", "PGLp@p=3"] {
        v.push(load_entry(id).map_err(err)?);
    }
    Ok(v)
}

fn criterion_8() -> Outcome {
    let mut checks = 0;
    let mut pairs = 0;
    for (i, e) in modeled_entries()?.iter().enumerate() {
        for c in validate_entry(e).map_err(err)? {
            ensure(c.passed, || format!("{}: {} ({})", e.id, c.name, c.detail))?;
            checks += 1;
        }
        pairs += random_laws(e, 500, 0x5eed + i as u64)?;
    }
    Ok(format!("{checks} structural checks, {pairs} random Leibniz/Cartan pairs, 0 failures"))
}

fn criterion_9() -> Outcome {
    let mut laws = 0;
    // N = 20 gives Q_2 (degree 17 at p = 3) a nonempty window
    for id in ["Zp^3@p=3", "Zp^3@p=3:20", "Zp^2@p=2", "Zp^1@p=3:13"] {
        let e = load_entry(id).map_err(err)?;
        let a = e.ops().map_err(err)?;
        for t in e.transfers() {
            let TransferModel::Divisor(d) = t else { continue };
            let mut reports = vec![
                (true, check_frobenius(a, d, a.truncation()).map_err(err)?),
                (true, check_grothendieck(a, d).map_err(err)?),
            ];
            for n in 0..=2 {
                let window = 2 + a.q_degree(n) <= a.truncation();
                reports.push((window, t.check_qn_commutation(a, n).map_err(err)?));
            }
            for (window, r) in reports {
                ensure(r.passed() && (r.checked > 0 || !window), || {
                    format!("{id} {}: {} {:?}", r.model, r.law, r.failures.first())
                })?;
                laws += 1;
            }
            let one = d.source().algebra().one();
            let img = t.apply(a, &one).map_err(err)?.value;
            ensure(img == d.euler, || format!("{id}: f_*(1) is not the Euler class"))?;
        }
    }
    // f_1*(x2 x3) + f_2*(x3 x1) + f_3*(x1 x2) = alpha
    let e = load_entry("Zp^3@p=3").map_err(err)?;
    let a = e.ops().map_err(err)?;
    let alg = a.algebra();
    let f = alg.field();
    let mut sum = Element::zero();
    for (name, z) in [("f1", "x2*x3"), ("f2", "x3*x1"), ("f3", "x1*x2")] {
        let t = e.transfer(name).map_err(err)?;
        let z = t.source().algebra().parse(z).map_err(err)?;
        sum = sum.plus(&t.apply(a, &z).map_err(err)?.value, f);
    }
    let alpha = alg.parse("y1*x2*x3 - y2*x1*x3 + y3*x1*x2").unwrap();
    ensure(sum == alpha, || format!("f_*(x2x3 + x3x1 + x1x2) = {}", alg.format(&sum)))?;
    // D8 table model
    let d8 = load_entry("D8").map_err(err)?;
    let a = d8.ops().map_err(err)?;
    let alg = a.algebra();
    for (j, name) in [(1, "i1"), (2, "i2")] {
        let t = d8.transfer(name).map_err(err)?;
        let salg = t.source().algebra();
        let one = t.apply(a, &salg.one()).map_err(err)?.value;
        ensure(one == alg.parse(&format!("y{j}")).unwrap(), || format!("{name}(1) = {}", alg.format(&one)))?;
        let z = t.apply(a, &salg.parse("z").unwrap()).map_err(err)?.value;
        ensure(z == alg.parse(&format!("x{j}*u")).unwrap(), || format!("{name}(z) = {}", alg.format(&z)))?;
        for n in 0..=1 {
            let r = t.check_qn_commutation(a, n).map_err(err)?;
            ensure(r.passed() && r.checked > 0, || format!("{name}: {} {:?}", r.law, r.failures.first()))?;
            laws += 1;
        }
    }
    Ok(format!("{laws} law reports pass; f_*(x2x3 + x3x1 + x1x2) = alpha; D8 tables reproduce y_j and x_j u"))
}

const GOLDEN_COMMANDS: &[&[&str]] = &[
    &["dh-report", "Zp^3@p=3", "--mode=integral", "--max-degree", "10", "--format", "machine"],
    &["dh-report", "Zp^3@p=3", "--mode=modp", "--max-degree", "10", "--format", "machine"],
    &["dh-report", "Q8", "--format", "machine"],
    &["dh-report", "D8", "--format", "machine"],
    &["dh-report", "SO3", "--format", "machine"],
    &["dh-report", "G2", "--format", "machine"],
    &["dh-report", "PGLp@p=3", "--format", "machine"],
    &["margolis", "Zp^3@p=3", "--n", "0", "--format", "machine"],
    &["transfer-check", "D8", "--format", "machine"],
];

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut errs = Vec::new();
    let code = cli::run(std::iter::once("coniveau").chain(args.iter().copied()), &mut out, &mut errs);
    (code, out)
}

fn criterion_10() -> Outcome {
    for cmd in GOLDEN_COMMANDS {
        let (c1, o1) = run_cli(cmd);
        let (c2, o2) = run_cli(cmd);
        ensure(c1 == 0 && c2 == 0, || format!("{cmd:?} exited {c1}"))?;
        ensure(o1 == o2, || format!("{cmd:?} output differs between runs"))?;
    }
    Ok(format!("{} machine-format commands byte-identical across runs", GOLDEN_COMMANDS.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("(Z/3)^3 integral and mod-p reports", criterion_1),
        ("Q8 and D8 reports", criterion_2),
        ("SO3 report", criterion_3),
        ("G2 candidates and certificates", criterion_4),
        ("PGL_3 module entry", criterion_5),
        ("(Z/p)^n quotient by N^1", criterion_6),
        ("Margolis Q_0 homology of (Z/p)^n", criterion_7),
        ("operation laws", criterion_8),
        ("transfer laws", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {e}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
