//! Bockstein, reduced powers and Milnor primitives on compiled algebras.
//!
//! β and every Q_n act as odd derivations determined by their values on
//! generators. Reduced powers come from the multiplicative total power. At
//! p = 2, `P^k` means `Sq^{2k}` and the multiplicative object is the total
//! square `Sq = P + βP` (odd squares satisfy `Sq^{2k+1} = Sq^1 Sq^{2k}`).
//!
//! `q_via_commutator` never reads the Q table: it runs the recursion
//! `Q_0 = β`, `Q_{n+1} = P^{p^n} Q_n - Q_n P^{p^n}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fplinalg::PrimeField;
use crate::gralg::{CompiledAlgebra, Element, Flagged, GenKind, Monomial};

/// One of the operations the engine evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operation {
    Beta,
    Power(u32),
    Q(u32),
}

impl Operation {
    /// Cohomological degree of the operation at prime `p`.
    pub fn degree(self, p: u32) -> u32 {
        match self {
            Operation::Beta => 1,
            Operation::Power(k) => 2 * k * (p - 1),
            Operation::Q(n) => 2 * p.pow(n) - 1,
        }
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operation::Beta => write!(f, "beta"),
            Operation::Power(k) => write!(f, "P^{k}"),
            Operation::Q(n) => write!(f, "Q_{n}"),
        }
    }
}

/// Outcome of a single structural check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// A compiled algebra together with its operation tables.
#[derive(Clone, Debug)]
pub struct OperatedAlgebra {
    alg: CompiledAlgebra,
    beta: Vec<Element>,
    /// Reduced total power (total square at p = 2) per generator.
    total: Option<Vec<Element>>,
    /// Reduced `ptotal` entries as given (even squares only at p = 2).
    ptotal: Vec<Option<Element>>,
    q_table: BTreeMap<(u32, usize), Element>,
    /// `q_gen[n - 1][g]`: Q_n on generator g for 1 <= n <= n_max.
    q_gen: Vec<Vec<Option<Flagged<Element>>>>,
    n_max: u32,
}

fn default_ptotal(alg: &CompiledAlgebra, g: usize) -> Option<Element> {
    let gen = &alg.generators()[g];
    let f = alg.field();
    match (gen.kind, gen.degree) {
        (GenKind::Module, _) => None,
        (_, 1) => Some(alg.generator(g)),
        (GenKind::Poly, 2) => {
            let x = alg.generator(g);
            let xp = Monomial::generator(alg.ngens(), g).with_exponent(g, alg.prime() as u16);
            Some(x.plus(&Element::from_monomial(xp, 1), f))
        }
        _ => None,
    }
}

impl OperatedAlgebra {
    pub fn new(alg: CompiledAlgebra) -> Result<Self> {
        let pres = alg.presentation().clone();
        let n = alg.ngens();
        let mut beta = Vec::with_capacity(n);
        for g in 0..n {
            let Some(b) = pres.ops.beta.get(&g) else {
                return Err(Error::MissingTable(format!(
                    "q 0 {} (Bockstein of every generator is required)",
                    alg.generators()[g].name
                )));
            };
            beta.push(alg.reduce(b).value);
        }
        let ptotal: Vec<Option<Element>> = (0..n)
            .map(|g| {
                pres.ops
                    .ptotal
                    .get(&g)
                    .cloned()
                    .or_else(|| default_ptotal(&alg, g))
                    .map(|e| alg.reduce(&e).value)
            })
            .collect();
        let mut q_table = BTreeMap::new();
        for (&(qn, g), e) in &pres.ops.q {
            q_table.insert((qn, g), alg.reduce(e).value);
        }
        let mut me = OperatedAlgebra {
            alg,
            beta,
            total: None,
            ptotal,
            q_table,
            q_gen: Vec::new(),
            n_max: pres.meta.n_max,
        };
        if me.ptotal.iter().all(Option::is_some) {
            let total = (0..n)
                .map(|g| {
                    let p = me.ptotal[g].clone().unwrap();
                    if me.prime() == 2 {
                        let bp = me.apply_beta(&p).value;
                        p.plus(&bp, me.field())
                    } else {
                        p
                    }
                })
                .collect();
            me.total = Some(total);
        }
        for qn in 1..=me.n_max {
            let mut row = Vec::with_capacity(n);
            for g in 0..n {
                let v = match me.q_table.get(&(qn, g)) {
                    Some(e) => Some(Flagged::clean(e.clone())),
                    None if me.total.is_some() => Some(me.q_via_commutator(qn, &me.alg.generator(g))?),
                    None => None,
                };
                row.push(v);
            }
            me.q_gen.push(row);
        }
        Ok(me)
    }

    pub fn algebra(&self) -> &CompiledAlgebra {
        &self.alg
    }
    pub fn field(&self) -> PrimeField {
        self.alg.field()
    }
    pub fn prime(&self) -> u32 {
        self.alg.prime()
    }
    pub fn n_max(&self) -> u32 {
        self.n_max
    }
    pub fn truncation(&self) -> u32 {
        self.alg.truncation()
    }

    /// Whether reduced powers (and the commutator oracle) are available.
    pub fn has_powers(&self) -> bool {
        self.total.is_some()
    }

    pub fn q_degree(&self, n: u32) -> u32 {
        Operation::Q(n).degree(self.prime())
    }

    /// Extend generator values to an odd derivation of degree `shift`.
    fn derivation(
        &self,
        a: &Element,
        shift: u32,
        value: impl Fn(usize) -> Result<Flagged<Element>>,
    ) -> Result<Flagged<Element>> {
        let alg = &self.alg;
        let gens = alg.generators();
        let f = alg.field();
        let n = alg.ngens();
        let mut raw = Element::zero();
        let mut overflow = false;
        let mut undefined = false;
        for (m, &c) in a.terms() {
            if alg.monomial_degree(m) + shift > alg.truncation() {
                overflow = true;
                continue;
            }
            let exps = m.exponents();
            let mut prefix_deg = 0u32;
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let coeff = f.mul(c, (e as u32) % f.p());
                let here_deg = prefix_deg;
                prefix_deg += e as u32 * gens[i].degree;
                if coeff == 0 {
                    continue;
                }
                let dg = value(i)?;
                undefined |= dg.undefined;
                if dg.value.is_zero() {
                    continue;
                }
                let mut pre = vec![0u16; n];
                pre[..i].copy_from_slice(&exps[..i]);
                pre[i] = e - 1;
                let mut suf = vec![0u16; n];
                suf[i + 1..].copy_from_slice(&exps[i + 1..]);
                let pre = Element::from_monomial(Monomial::from_exponents(pre), 1);
                let suf = Element::from_monomial(Monomial::from_exponents(suf), 1);
                let t1 = pre.raw_product(&dg.value, gens, f);
                let t2 = t1.value.raw_product(&suf, gens, f);
                undefined |= t1.undefined || t2.undefined;
                let sign = if f.p() != 2 && here_deg % 2 == 1 { f.neg(1) } else { 1 };
                raw.add_scaled(&t2.value, f.mul(coeff, sign), f);
            }
        }
        let mut r = alg.reduce(&raw);
        r.overflow |= overflow;
        r.undefined |= undefined;
        Ok(r)
    }

    pub fn apply_beta(&self, a: &Element) -> Flagged<Element> {
        self.derivation(a, 1, |g| Ok(Flagged::clean(self.beta[g].clone())))
            .expect("beta table is total")
    }

    /// Q_n from the generator table, extended as a derivation.
    pub fn apply_q(&self, n: u32, a: &Element) -> Result<Flagged<Element>> {
        if n == 0 {
            return Ok(self.apply_beta(a));
        }
        if n > self.n_max {
            return Err(Error::NMaxExceeded { n, n_max: self.n_max });
        }
        let row = &self.q_gen[n as usize - 1];
        self.derivation(a, self.q_degree(n), |g| {
            row[g].clone().ok_or_else(|| {
                Error::MissingTable(format!("q {n} {}", self.alg.generators()[g].name))
            })
        })
    }

    fn total_or_err(&self) -> Result<&[Element]> {
        self.total.as_deref().ok_or_else(|| {
            let g = self.ptotal.iter().position(Option::is_none).unwrap_or(0);
            Error::MissingTable(format!("ptotal {}", self.alg.generators()[g].name))
        })
    }

    /// `P^k` (`Sq^{2k}` at p = 2) via the Cartan formula.
    pub fn apply_power(&self, k: u32, a: &Element) -> Result<Flagged<Element>> {
        let total = self.total_or_err()?;
        let alg = &self.alg;
        let f = alg.field();
        let shift = Operation::Power(k).degree(self.prime());
        let mut out = Element::zero();
        let mut overflow = false;
        for (m, &c) in a.terms() {
            let t = alg.monomial_degree(m) + shift;
            if t > alg.truncation() {
                overflow = true;
                continue;
            }
            if k == 0 {
                out.add_term(m.clone(), c, f);
                continue;
            }
            let mut acc = alg.one();
            for (g, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    acc = alg.mul_capped(&acc, &total[g], t).value;
                }
            }
            out.add_scaled(&acc.component(t, alg.generators()), c, f);
        }
        Ok(Flagged {
            value: alg.reduce(&out).value,
            overflow,
            undefined: false,
        })
    }

    /// Independent computation of Q_n through the commutator recursion.
    pub fn q_via_commutator(&self, n: u32, a: &Element) -> Result<Flagged<Element>> {
        if n == 0 {
            return Ok(self.apply_beta(a));
        }
        self.total_or_err()?;
        let k = self.prime().pow(n - 1);
        let f = self.field();
        let qa = self.q_via_commutator(n - 1, a)?;
        let left = self.apply_power(k, &qa.value)?;
        let pa = self.apply_power(k, a)?;
        let right = self.q_via_commutator(n - 1, &pa.value)?;
        let top = self.alg.truncation();
        let final_ok = a
            .terms()
            .keys()
            .all(|m| self.alg.monomial_degree(m) + self.q_degree(n) <= top);
        Ok(Flagged {
            value: left.value.minus(&right.value, f),
            overflow: !final_ok || qa.overflow || left.overflow || pa.overflow || right.overflow,
            undefined: false,
        })
    }

    pub fn apply(&self, op: Operation, a: &Element) -> Result<Flagged<Element>> {
        match op {
            Operation::Beta => Ok(self.apply_beta(a)),
            Operation::Power(k) => self.apply_power(k, a),
            Operation::Q(n) => self.apply_q(n, a),
        }
    }

    /// Matrix of `op` from degree `d` to degree `d + |op|`, as columns of
    /// target coordinates, one per source basis element.
    pub fn matrix_columns(&self, op: Operation, d: u32) -> Result<Vec<Vec<u32>>> {
        let td = d + op.degree(self.prime());
        self.alg
            .degree_basis(d)?
            .iter()
            .map(|b| Ok(self.alg.coords(&self.apply(op, b)?.value, td)))
            .collect()
    }

    /// Structural checks on the generator tables.
    pub fn validate(&self) -> Vec<Check> {
        let alg = &self.alg;
        let gens = alg.generators();
        let p = self.prime();
        let top = alg.truncation();
        let mut out = Vec::new();
        let fmt = |e: &Element| alg.format(e);

        for (g, gen) in gens.iter().enumerate() {
            let b = &self.beta[g];
            let deg_ok = match alg.degree_of(b) {
                Ok(None) => true,
                Ok(Some(d)) => d == gen.degree + 1,
                Err(_) => false,
            };
            out.push(Check::new(
                format!("degree of beta({})", gen.name),
                deg_ok,
                fmt(b),
            ));
            if gen.degree + 2 <= top {
                let bb = self.apply_beta(b).value;
                out.push(Check::new(format!("beta^2({}) = 0", gen.name), bb.is_zero(), fmt(&bb)));
            }
        }

        for (g, gen) in gens.iter().enumerate() {
            let Some(pt) = &self.ptotal[g] else { continue };
            let x = alg.generator(g);
            let c0 = pt.component(gen.degree, gens);
            out.push(Check::new(format!("P^0({}) = {}", gen.name, gen.name), c0 == x, fmt(&c0)));
            let step = 2 * (p - 1);
            let mut k = 1;
            while gen.degree + k * step <= top {
                let ck = pt.component(gen.degree + k * step, gens);
                // at p = 2 the component is Sq^{2k} and g^p = g^2
                if 2 * k == gen.degree {
                    let xp = alg.pow(&x, p).value;
                    out.push(Check::new(
                        format!("unstable: P^{k}({}) = {}^{p}", gen.name, gen.name),
                        ck == xp,
                        fmt(&ck),
                    ));
                } else if 2 * k > gen.degree {
                    out.push(Check::new(
                        format!("unstable: P^{k}({}) = 0", gen.name),
                        ck.is_zero(),
                        fmt(&ck),
                    ));
                }
                k += 1;
            }
            if p == 2 && gen.degree % 2 == 1 && 2 * gen.degree <= top {
                // Sq^{deg g}(g) = g^2 for odd degree g lives in the odd squares
                let k = (gen.degree - 1) / 2;
                let odd = self
                    .apply_beta(&pt.component(gen.degree + 2 * k, gens))
                    .value;
                let sq = alg.pow(&x, 2).value;
                out.push(Check::new(
                    format!("unstable: Sq^{}({}) = {}^2", gen.degree, gen.name, gen.name),
                    odd == sq,
                    fmt(&odd),
                ));
            }
        }

        let pres = alg.presentation();
        let mut ops: Vec<Operation> = vec![Operation::Beta];
        ops.extend((1..=self.n_max).map(Operation::Q));
        if self.has_powers() {
            ops.extend((1..=top / (2 * (p - 1)).max(1)).map(Operation::Power));
        }
        for (i, r) in pres.relations.iter().enumerate() {
            let Ok(Some(rd)) = r.homogeneous_degree(gens) else { continue };
            for &op in &ops {
                if rd + op.degree(p) > top {
                    continue;
                }
                match self.apply(op, r) {
                    Ok(v) => out.push(Check::new(
                        format!("{op} preserves relation {}", i + 1),
                        v.value.is_zero() && v.exact(),
                        fmt(&v.value),
                    )),
                    Err(e) => out.push(Check::new(format!("{op} on relation {}", i + 1), false, e.to_string())),
                }
            }
        }

        if self.has_powers() {
            for (&(n, g), e) in &self.q_table {
                if n > self.n_max || gens[g].degree + self.q_degree(n) > top {
                    continue;
                }
                match self.q_via_commutator(n, &alg.generator(g)) {
                    Ok(v) => out.push(Check::new(
                        format!("table Q_{n}({}) matches commutator", gens[g].name),
                        v.value == *e,
                        format!("table {}, commutator {}", fmt(e), fmt(&v.value)),
                    )),
                    Err(err) => out.push(Check::new(format!("Q_{n}({}) oracle", gens[g].name), false, err.to_string())),
                }
            }
        }
        out
    }
}
