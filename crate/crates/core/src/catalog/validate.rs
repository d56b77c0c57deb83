use crate::coniveau::integral_span;
use crate::entry::Entry;
use crate::error::Result;
use crate::margolis::{margolis_homology, square_zero_failures};
use crate::ops::{Check, OperatedAlgebra, Operation};
use crate::transfer::{check_frobenius, check_grothendieck, LawReport, TransferModel};

use super::parse_zp_id;

/// Coefficients of `prod 1/(1 - t^d)` times `sum t^s` over `shifts`, up to
/// degree `top`.
fn hilbert(poly_degrees: &[u32], shifts: &[u32], top: u32) -> Vec<usize> {
    let len = top as usize + 1;
    let mut c = vec![0usize; len];
    for &s in shifts {
        if (s as usize) < len {
            c[s as usize] += 1;
        }
    }
    for &d in poly_degrees {
        for i in d as usize..len {
            c[i] += c[i - d as usize];
        }
    }
    c
}

fn dims_check(name: &str, got: &[usize], want: &[usize]) -> Check {
    let bad = got.iter().zip(want).position(|(g, w)| g != w);
    match bad {
        None => Check::new(name, true, format!("{} degrees", got.len())),
        Some(d) => Check::new(name, false, format!("degree {d}: got {}, expected {}", got[d], want[d])),
    }
}

/// `op(arg) == expected`, both parsed in the entry's algebra.
fn identity(a: &OperatedAlgebra, op: Operation, arg: &str, expected: &str) -> Check {
    let alg = a.algebra();
    let name = format!("{op}({arg}) = {expected}");
    let run = || -> Result<(bool, String)> {
        let x = alg.parse(arg)?;
        let want = alg.parse(expected)?;
        let got = a.apply(op, &x)?;
        Ok((got.exact() && got.value == want, alg.format(&got.value)))
    };
    match run() {
        Ok((ok, got)) => Check::new(name, ok, format!("computed {got}")),
        Err(e) => Check::new(name, false, e.to_string()),
    }
}

fn composite(a: &OperatedAlgebra, ops: &[Operation], arg: &str, expected: &str) -> Check {
    let alg = a.algebra();
    let label: Vec<String> = ops.iter().map(|o| o.to_string()).collect();
    let name = format!("{}({arg}) = {expected}", label.join(" "));
    let run = || -> Result<(bool, String)> {
        let mut x = alg.parse(arg)?;
        let want = alg.parse(expected)?;
        let mut exact = true;
        for op in ops.iter().rev() {
            let r = a.apply(*op, &x)?;
            exact &= r.exact();
            x = r.value;
        }
        Ok((exact && x == want, alg.format(&x)))
    };
    match run() {
        Ok((ok, got)) => Check::new(name, ok, format!("computed {got}")),
        Err(e) => Check::new(name, false, e.to_string()),
    }
}

fn equal(a: &OperatedAlgebra, lhs: &str, rhs: &str) -> Check {
    let alg = a.algebra();
    let name = format!("{lhs} = {rhs}");
    match (alg.parse(lhs), alg.parse(rhs)) {
        (Ok(l), Ok(r)) => Check::new(name, l == r, format!("{} vs {}", alg.format(&l), alg.format(&r))),
        (Err(e), _) | (_, Err(e)) => Check::new(name, false, e.to_string()),
    }
}

fn law(r: LawReport) -> Check {
    let detail = match r.failures.first() {
        None => format!("{} cases, {} skipped", r.checked, r.skipped),
        Some(f) => format!("{} of {} cases fail, first: {f}", r.failures.len(), r.checked),
    };
    Check::new(format!("{}: {}", r.model, r.law), r.passed(), detail)
}

/// `Q_m Q_n + Q_n Q_m = 0` on every basis element in range.
fn anticommute(a: &OperatedAlgebra, m: u32, n: u32) -> Result<Check> {
    let alg = a.algebra();
    let f = a.field();
    let shift = a.q_degree(m) + a.q_degree(n);
    let mut first = None;
    let mut checked = 0;
    for d in 0..=a.truncation().saturating_sub(shift) {
        if d + shift > a.truncation() {
            break;
        }
        for b in alg.degree_basis(d)? {
            let mn = a.apply_q(m, &a.apply_q(n, &b)?.value)?.value;
            let nm = a.apply_q(n, &a.apply_q(m, &b)?.value)?.value;
            checked += 1;
            if !mn.plus(&nm, f).is_zero() && first.is_none() {
                first = Some(alg.format(&b));
            }
        }
    }
    Ok(match first {
        None => Check::new(format!("Q_{m} Q_{n} = -Q_{n} Q_{m}"), true, format!("{checked} cases")),
        Some(b) => Check::new(format!("Q_{m} Q_{n} = -Q_{n} Q_{m}"), false, format!("fails on {b}")),
    })
}

/// Tabulated `Q_n` agrees with the commutator formula on every basis element.
fn commutator_agreement(a: &OperatedAlgebra, n: u32) -> Result<Check> {
    let alg = a.algebra();
    let top = a.truncation().saturating_sub(a.q_degree(n));
    let mut checked = 0;
    for d in 0..=top {
        for b in alg.degree_basis(d)? {
            let t = a.apply_q(n, &b)?;
            let c = a.q_via_commutator(n, &b)?;
            checked += 1;
            if t.exact() && c.exact() && t.value != c.value {
                return Ok(Check::new(
                    format!("Q_{n} agrees with the commutator formula"),
                    false,
                    format!("{}: {} vs {}", alg.format(&b), alg.format(&t.value), alg.format(&c.value)),
                ));
            }
        }
    }
    Ok(Check::new(
        format!("Q_{n} agrees with the commutator formula"),
        true,
        format!("{checked} basis elements"),
    ))
}

fn group_checks(entry: &Entry, a: &OperatedAlgebra) -> Result<Vec<Check>> {
    let alg = a.algebra();
    let n = a.truncation();
    let dims = alg.dims();
    let mut out = Vec::new();
    use Operation::{Beta, Power, Q};
    if let Some((rank, p, _)) = parse_zp_id(&entry.id) {
        let degs: Vec<u32> = vec![2; rank as usize];
        let poly = hilbert(&degs, &[0], n);
        let want: Vec<usize> = if p == 2 {
            hilbert(&vec![1; rank as usize], &[0], n)
        } else {
            (0..=n as usize)
                .map(|d| {
                    (0..=rank.min(d as u32) as usize)
                        .map(|k| binom(rank as usize, k) * poly.get(d - k).copied().unwrap_or(0))
                        .sum()
                })
                .collect()
        };
        out.push(dims_check("Poincare series", &dims, &want));
        out.push(identity(a, Beta, "x1", "y1"));
        if rank >= 2 {
            let alpha12 = if p == 2 { "y1*x2 + y2*x1" } else { "y1*x2 - y2*x1" };
            out.push(identity(a, Q(0), "x1*x2", alpha12));
            if 2 + 1 + a.q_degree(1) <= n {
                let q1 = format!("y1*y2^{p} - y2*y1^{p}");
                out.push(identity(a, Q(1), alpha12, &q1));
            }
        }
        // ker Q_0 is spanned by integral classes in positive degrees
        let m = margolis_homology(a, 0, n - 1)?;
        let ker: Vec<usize> = m.degrees.iter().map(|d| d.ker_dim).collect();
        let mut int = Vec::new();
        for d in 0..n {
            int.push(integral_span(a, d)?.dim());
        }
        out.push(dims_check("integral form equals ker Q_0", &int, &ker));
        // Z/p[y]{1, Q_0(x_I) : |I| >= 2}
        let ys: Vec<_> = (0..rank as usize).map(|i| alg.generator(i)).collect();
        let xs: Vec<_> = (rank as usize..2 * rank as usize).map(|i| alg.generator(i)).collect();
        let mut module_gens = vec![alg.one()];
        for mask in 1u32..(1 << rank) {
            if mask.count_ones() < 2 {
                continue;
            }
            let mut m = alg.one();
            for (i, x) in xs.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    m = alg.mul(&m, x).value;
                }
            }
            module_gens.push(a.apply_beta(&m).value);
        }
        let mut formed = Vec::new();
        for d in 0..n {
            let mut s = crate::fplinalg::Subspace::zero(alg.field(), alg.dim(d));
            for g in &module_gens {
                let Some(gd) = alg.degree_of(g)? else { continue };
                if gd > d {
                    continue;
                }
                for v in alg.subring_span(&ys, d - gd)?.basis() {
                    let prod = alg.mul(&alg.from_coords(d - gd, v), g).value;
                    s.insert(&alg.coords(&prod, d));
                }
            }
            formed.push(s.dim());
        }
        out.push(dims_check("integral form Z/p[y]{1, Q_0(x_I)}", &int, &formed));
        return Ok(out);
    }
    match entry.group() {
        "Q8" => {
            let want: Vec<usize> = (0..=n).map(|d| [1, 2, 2, 1][d as usize % 4]).collect();
            out.push(dims_check("Poincare series (period 4)", &dims, &want));
            out.push(equal(a, "y1*x2", "y2*x1"));
            out.push(identity(a, Beta, "x1", "y1"));
            let int_want: Vec<usize> = (0..=n)
                .map(|d| match d % 4 {
                    0 => 1,
                    2 => 2,
                    _ => 0,
                })
                .collect();
            let mut int = Vec::new();
            for d in 0..=n {
                int.push(integral_span(a, d)?.dim());
            }
            out.push(dims_check("integral form Z/2[y1, y2, c2]/(y1^2, y2^2, y1*y2)", &int, &int_want));
        }
        "D8" => {
            // Z/2[u] (x) Z/2[x1, x2]/(x1 x2)
            let mut want = vec![0usize; n as usize + 1];
            for (d, w) in want.iter_mut().enumerate() {
                for j in (0..=d).step_by(2) {
                    *w += if d - j == 0 { 1 } else { 2 };
                }
            }
            out.push(dims_check("Poincare series", &dims, &want));
            // (sum_i Z/2[y_i]{y_i, x_i, y_i u, x_i u} + Z/2{1, u}) (x) Z/2[c2]
            let per_line = hilbert(&[2], &[1, 2, 3, 4], n);
            let rest = hilbert(&[], &[0, 2], n);
            let inner: Vec<usize> = (0..=n as usize).map(|d| 2 * per_line[d] + rest[d]).collect();
            let mut module = vec![0usize; n as usize + 1];
            for d in 0..=n as usize {
                module[d] = (0..=d).step_by(4).map(|j| inner[d - j]).sum();
            }
            out.push(dims_check("module form over Z/2[c2]", &dims, &module));
            out.push(identity(a, Beta, "u", "x1*u + x2*u"));
            out.push(composite(a, &[Q(1), Q(0)], "u", "y1*c2 + y2*c2"));
            out.push(identity(a, Power(1), "u", "u^2"));
        }
        "SO3" => {
            out.push(dims_check("Poincare series", &dims, &hilbert(&[2, 3], &[0], n)));
            out.push(dims_check(
                "module form Z/2[c2, c3]{1, w2, w3, w2 w3}",
                &dims,
                &hilbert(&[4, 6], &[0, 2, 3, 5], n),
            ));
            out.push(identity(a, Beta, "w2", "w3"));
            out.push(identity(a, Q(1), "w3", "w3^2"));
            out.push(identity(a, Power(1), "w2", "w2^2"));
        }
        "G2" => {
            out.push(dims_check("Poincare series", &dims, &hilbert(&[4, 6, 7], &[0], n)));
            out.push(identity(a, Beta, "w6", "w7"));
            out.push(identity(a, Power(1), "w4", "w6"));
            out.push(identity(a, Q(1), "w4", "w7"));
            out.push(identity(a, Q(2), "w7", "w7^2"));
        }
        "PGL3" => {
            out.push(dims_check("Poincare series", &dims, &hilbert(&[8, 12], &[0, 2, 3, 7], n)));
            out.push(composite(a, &[Q(1), Q(0)], "u2", "x8"));
            out.push(composite(a, &[Q(0), Q(1)], "u2", "-x8"));
        }
        _ => {}
    }
    Ok(out)
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Structural checks on a loaded entry: operation axioms, group-specific
/// identities and transfer laws.
pub fn validate_entry(entry: &Entry) -> Result<Vec<Check>> {
    if entry.is_stub() {
        return Ok(vec![Check::new(
            "metadata stub",
            !entry.verdicts().is_empty(),
            format!("{} recorded verdicts", entry.verdicts().len()),
        )]);
    }
    let a = entry.ops()?;
    let mut out = a.validate();
    for n in 0..=a.n_max() {
        let bad = square_zero_failures(a, n)?;
        out.push(Check::new(
            format!("Q_{n} Q_{n} = 0"),
            bad.is_empty(),
            if bad.is_empty() { String::new() } else { format!("fails in degree {}", bad[0]) },
        ));
        for m in 0..n {
            out.push(anticommute(a, m, n)?);
        }
        if n >= 1 && a.has_powers() {
            out.push(commutator_agreement(a, n)?);
        }
    }
    out.extend(group_checks(entry, a)?);
    for t in entry.transfers() {
        match t {
            TransferModel::Divisor(d) => {
                out.push(law(check_frobenius(a, d, a.truncation())?));
                if a.has_powers() && d.source().has_powers() {
                    out.push(law(check_grothendieck(a, d)?));
                }
            }
            TransferModel::Table(tm) => out.push(law(tm.check_consistency(a)?)),
        }
        for n in 0..=a.n_max().min(t.source().n_max()) {
            out.push(law(t.check_qn_commutation(a, n)?));
        }
    }
    Ok(out)
}
