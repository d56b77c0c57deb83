//! Weight model of the coniveau filtration, lower bounds for strong
//! coniveau, and the DH report.
//!
//! A monomial of degree d and weight w has slack `d - w`; slack `>= c`
//! places it in `N^c` when the entry declares its weights exact, and is a
//! lower bound otherwise.

mod report;

pub use report::{dh_report, ClassRecord, ClassStatus, DegreeRow, DhReport, Mode, Summary};

use crate::entry::Entry;
use crate::error::Result;
use crate::fplinalg::Subspace;
use crate::gralg::{CompiledAlgebra, Element, Monomial};
use crate::ops::OperatedAlgebra;
use crate::transfer::TransferModel;

pub fn slack(alg: &CompiledAlgebra, m: &Monomial) -> u32 {
    alg.monomial_degree(m) - alg.monomial_weight(m)
}

/// Minimum slack over the terms of `e`; `None` for zero.
pub fn element_slack(alg: &CompiledAlgebra, e: &Element) -> Option<u32> {
    e.terms().keys().map(|m| slack(alg, m)).min()
}

/// Span of the degree-`d` basis monomials with slack at least `c`.
pub fn coniveau_slice(alg: &CompiledAlgebra, c: u32, d: u32) -> Result<Subspace> {
    let basis = alg.basis_monomials(d)?;
    let mut s = Subspace::zero(alg.field(), basis.len());
    for (i, m) in basis.iter().enumerate() {
        if slack(alg, m) >= c {
            let mut v = vec![0; basis.len()];
            v[i] = 1;
            s.insert(&v);
        }
    }
    Ok(s)
}

/// Basis of a complement of `N^c` in degree `d`.
pub fn quotient_by_coniveau(alg: &CompiledAlgebra, c: u32, d: u32) -> Result<Vec<Element>> {
    Ok(alg
        .basis_monomials(d)?
        .iter()
        .filter(|m| slack(alg, m) < c)
        .map(|m| Element::from_monomial(m.clone(), 1))
        .collect())
}

/// `dim H^d / N^c` for `d = 0..=N`.
pub fn quotient_dims(alg: &CompiledAlgebra, c: u32) -> Vec<usize> {
    (0..=alg.truncation())
        .map(|d| quotient_by_coniveau(alg, c, d).map_or(0, |v| v.len()))
        .collect()
}

/// Elements flagged as cycle classes: chow generators and extra classes.
pub fn chow_generators(alg: &CompiledAlgebra) -> Vec<Element> {
    let mut v: Vec<Element> = alg
        .generators()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.chow)
        .map(|(i, _)| alg.generator(i))
        .collect();
    v.extend(alg.presentation().meta.chow_classes.iter().map(|e| alg.reduce(e).value));
    v
}

pub fn integral_generators(alg: &CompiledAlgebra) -> Vec<Element> {
    let mut v: Vec<Element> = alg
        .generators()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.integral)
        .map(|(i, _)| alg.generator(i))
        .collect();
    v.extend(alg.presentation().meta.integral_classes.iter().map(|e| alg.reduce(e).value));
    v
}

/// Degree-`d` image of `Q_0`.
pub fn image_q0(a: &OperatedAlgebra, d: u32) -> Result<Subspace> {
    let alg = a.algebra();
    let mut s = Subspace::zero(alg.field(), alg.dim(d));
    if d == 0 {
        return Ok(s);
    }
    for b in alg.degree_basis(d - 1)? {
        s.insert(&alg.coords(&a.apply_beta(&b).value, d));
    }
    Ok(s)
}

/// Mod-p reductions of integral classes in degree `d`: products of the
/// integral generators and classes, plus the image of `Q_0`.
pub fn integral_span(a: &OperatedAlgebra, d: u32) -> Result<Subspace> {
    let alg = a.algebra();
    let sub = alg.subring_span(&integral_generators(alg), d)?;
    Ok(sub.sum(&image_q0(a, d)?))
}

/// Degree-`d` span of positive-degree products of cycle classes.
pub fn chow_subring_positive(alg: &CompiledAlgebra, d: u32) -> Result<Subspace> {
    if d == 0 {
        return Ok(Subspace::zero(alg.field(), alg.dim(0)));
    }
    alg.subring_span(&chow_generators(alg), d)
}

/// Source classes a transfer may be applied to in the given mode.
pub fn transfer_sources(model: &TransferModel, mode: Mode, d: u32) -> Result<Subspace> {
    let src = model.source();
    let salg = src.algebra();
    if d > salg.truncation() {
        return Ok(Subspace::zero(salg.field(), 0));
    }
    match mode {
        Mode::ModP => Ok(Subspace::full(salg.field(), salg.dim(d))),
        Mode::Integral => integral_span(src, d),
    }
}

/// Generators of the strong-coniveau lower bound in degree `d`, each with
/// a rule name and a printable witness. Only independent generators are
/// kept, in a fixed order: transfer images first, then cycle-class rules.
pub struct StrongBound {
    pub span: Subspace,
    pub generators: Vec<(Vec<u32>, &'static str, String)>,
    pub notes: Vec<String>,
}

impl StrongBound {
    fn push(&mut self, v: Vec<u32>, rule: &'static str, witness: impl FnOnce() -> String) {
        if self.span.insert(&v) {
            self.generators.push((v, rule, witness()));
        }
    }
}

pub fn strong_coniveau_lower_bound(entry: &Entry, mode: Mode, d: u32) -> Result<StrongBound> {
    let a = entry.ops()?;
    let alg = a.algebra();
    let f = alg.field();
    let mut out = StrongBound {
        span: Subspace::zero(f, alg.dim(d)),
        generators: Vec::new(),
        notes: Vec::new(),
    };
    if d == 0 {
        return Ok(out);
    }
    let chow_ideal_gens = chow_generators(alg);
    for model in entry.transfers() {
        let Some(sd) = d.checked_sub(model.shift()) else { continue };
        if !model.modulo().is_empty() {
            // values are known only modulo an ideal; usable when that ideal
            // already lies in the bound
            let usable = mode == Mode::ModP
                && model.modulo().iter().all(|m| {
                    alg.degree_of(m).ok().flatten().is_some_and(|md| {
                        alg.ideal_span(&chow_ideal_gens, md)
                            .is_ok_and(|s| s.contains(&alg.coords(m, md)))
                    })
                });
            if !usable {
                out.notes.push(format!(
                    "transfer {} not used: values are defined modulo an ideal outside the bound",
                    model.name()
                ));
                continue;
            }
            for v in alg.ideal_span(model.modulo(), d)?.basis() {
                let e = alg.from_coords(d, v);
                out.push(v.clone(), "ideal", || format!("{} (ambiguity of {})", alg.format(&e), model.name()));
            }
        }
        let salg = model.source().algebra();
        let allowed = transfer_sources(model, mode, sd)?;
        for v in allowed.basis() {
            let z = salg.from_coords(sd, v);
            match model.apply(a, &z) {
                Ok(img) if img.exact() => {
                    let c = alg.coords(&img.value, d);
                    out.push(c, "transfer", || format!("{}_*({})", model.name(), salg.format(&z)));
                }
                Ok(_) | Err(crate::Error::OutsideTabulatedSpan(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    match mode {
        Mode::Integral => {
            for e in 1..=d {
                let chow = chow_subring_positive(alg, e)?;
                if chow.is_zero() {
                    continue;
                }
                let integral = integral_span(a, d - e)?;
                for cv in chow.basis() {
                    let q = alg.from_coords(e, cv);
                    for iv in integral.basis() {
                        let r = alg.from_coords(d - e, iv);
                        let prod = alg.mul(&q, &r).value;
                        out.push(alg.coords(&prod, d), "chow", || {
                            format!("({}) * ({})", alg.format(&q), alg.format(&r))
                        });
                    }
                }
            }
        }
        Mode::ModP => {
            for g in &chow_ideal_gens {
                let Some(gd) = alg.degree_of(g)? else { continue };
                if gd > d {
                    continue;
                }
                for m in alg.basis_monomials(d - gd)? {
                    let me = Element::from_monomial(m.clone(), 1);
                    let prod = alg.mul(g, &me).value;
                    out.push(alg.coords(&prod, d), "chow-ideal", || {
                        format!("({}) * {}", alg.format(g), alg.format(&me))
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Outcome of the Q_i test on one class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QiObstruction {
    /// `s - 2c` lies in {1, 2}.
    pub valid_window: bool,
    /// `(i, Q_i(class))` with nonzero, exactly computed values.
    pub witnesses: Vec<(u32, Element)>,
}

impl QiObstruction {
    pub fn certifies(&self) -> bool {
        self.valid_window && !self.witnesses.is_empty()
    }
}

/// Nonvanishing `Q_i`, `1 <= i <= n_max`, on a class of degree `s` in
/// `N^c`. Only a certificate when `s - 2c` is 1 or 2.
pub fn qi_obstruction(a: &OperatedAlgebra, class: &Element, s: u32, c: u32) -> Result<QiObstruction> {
    let valid_window = matches!(s.checked_sub(2 * c), Some(1) | Some(2));
    let mut witnesses = Vec::new();
    for i in 1..=a.n_max() {
        if s + a.q_degree(i) > a.truncation() {
            break;
        }
        let q = a.apply_q(i, class)?;
        if q.exact() && !q.value.is_zero() {
            witnesses.push((i, q.value));
        }
    }
    Ok(QiObstruction {
        valid_window,
        witnesses,
    })
}
