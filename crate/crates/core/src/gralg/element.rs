use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use crate::fplinalg::PrimeField;

use super::{GenKind, Generator};

/// Exponent vector indexed by generator declaration order.
///
/// The derived `Ord` is the canonical monomial order: lexicographic,
/// exponents compared left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn one(ngens: usize) -> Self {
        Monomial(vec![0; ngens])
    }

    pub fn generator(ngens: usize, index: usize) -> Self {
        let mut v = vec![0; ngens];
        v[index] = 1;
        Monomial(v)
    }

    pub fn from_exponents(exps: Vec<u16>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self, gens: &[Generator]) -> u32 {
        self.0
            .iter()
            .zip(gens)
            .map(|(&e, g)| e as u32 * g.degree)
            .sum()
    }

    pub fn weight(&self, gens: &[Generator]) -> u32 {
        self.0
            .iter()
            .zip(gens)
            .map(|(&e, g)| e as u32 * g.weight)
            .sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn with_exponent(&self, index: usize, e: u16) -> Monomial {
        let mut v = self.0.clone();
        v[index] = e;
        Monomial(v)
    }
}

/// Outcome of multiplying two monomials in the free graded-commutative
/// algebra on the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Product {
    Zero,
    /// Two module-form basis elements met; their product is not defined.
    Undefined,
    Term { monomial: Monomial, negate: bool },
}

/// `a * b` with the Koszul sign from moving the factors of `b` past those of
/// `a` into declaration order.
pub fn monomial_product(a: &Monomial, b: &Monomial, gens: &[Generator], p: u32) -> Product {
    let mut module_count = 0u32;
    let mut exps = Vec::with_capacity(gens.len());
    for (i, g) in gens.iter().enumerate() {
        let e = a.0[i] + b.0[i];
        match g.kind {
            GenKind::Ext if e >= 2 => return Product::Zero,
            GenKind::Module => module_count += e as u32,
            _ => {}
        }
        exps.push(e);
    }
    if module_count >= 2 {
        return Product::Undefined;
    }
    let mut negate = false;
    if p != 2 {
        // count odd-degree factors of `a` with larger index than each odd
        // factor of `b`
        let mut odd_after = 0u32;
        for i in (0..gens.len()).rev() {
            if gens[i].degree % 2 == 1 {
                if b.0[i] % 2 == 1 && odd_after % 2 == 1 {
                    negate = !negate;
                }
                odd_after += a.0[i] as u32;
            }
        }
    }
    Product::Term {
        monomial: Monomial(exps),
        negate,
    }
}

/// F_p-linear combination of monomials. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Element {
    terms: BTreeMap<Monomial, u32>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn from_monomial(m: Monomial, coeff: u32) -> Self {
        let mut e = Element::zero();
        if coeff != 0 {
            e.terms.insert(m, coeff);
        }
        e
    }

    pub fn one(ngens: usize) -> Self {
        Self::from_monomial(Monomial::one(ngens), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, u32> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: u32, f: PrimeField) {
        let c = c % f.p();
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Element, c: u32, f: PrimeField) {
        if c.is_multiple_of(f.p()) {
            return;
        }
        for (m, &v) in &other.terms {
            self.add_term(m.clone(), f.mul(v, c), f);
        }
    }

    pub fn plus(&self, other: &Element, f: PrimeField) -> Element {
        let mut e = self.clone();
        e.add_scaled(other, 1, f);
        e
    }

    pub fn minus(&self, other: &Element, f: PrimeField) -> Element {
        let mut e = self.clone();
        e.add_scaled(other, f.neg(1), f);
        e
    }

    pub fn scaled(&self, c: u32, f: PrimeField) -> Element {
        let mut e = Element::zero();
        e.add_scaled(self, c, f);
        e
    }

    pub fn negated(&self, f: PrimeField) -> Element {
        self.scaled(f.neg(1), f)
    }

    /// Terms whose monomial has the given degree.
    pub fn component(&self, degree: u32, gens: &[Generator]) -> Element {
        Element {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree(gens) == degree)
                .map(|(m, &c)| (m.clone(), c))
                .collect(),
        }
    }

    /// Common degree of all terms; `None` for zero, `Err` if mixed.
    pub fn homogeneous_degree(&self, gens: &[Generator]) -> Result<Option<u32>, crate::Error> {
        let mut degs = self.terms.keys().map(|m| m.degree(gens));
        let Some(d) = degs.next() else {
            return Ok(None);
        };
        if degs.all(|x| x == d) {
            Ok(Some(d))
        } else {
            Err(crate::Error::NotHomogeneous)
        }
    }

    /// Product in the free graded-commutative algebra (no relations).
    pub fn raw_product(&self, other: &Element, gens: &[Generator], f: PrimeField) -> Flagged<Element> {
        let mut out = Element::zero();
        let mut undefined = false;
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                match monomial_product(a, b, gens, f.p()) {
                    Product::Zero => {}
                    Product::Undefined => undefined = true,
                    Product::Term { monomial, negate } => {
                        let c = f.mul(ca, cb);
                        out.add_term(monomial, if negate { f.neg(c) } else { c }, f);
                    }
                }
            }
        }
        Flagged {
            value: out,
            overflow: false,
            undefined,
        }
    }
}

impl FromIterator<(Monomial, u32)> for Element {
    /// Assumes coefficients already reduced; zeros are dropped.
    fn from_iter<I: IntoIterator<Item = (Monomial, u32)>>(iter: I) -> Self {
        Element {
            terms: iter.into_iter().filter(|(_, c)| *c != 0).collect(),
        }
    }
}

/// A value together with truncation/definedness flags raised while
/// computing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flagged<T> {
    pub value: T,
    /// Some term landed above the truncation degree and was dropped.
    pub overflow: bool,
    /// A product of two module-form basis elements was requested.
    pub undefined: bool,
}

impl<T> Flagged<T> {
    pub fn clean(value: T) -> Self {
        Flagged {
            value,
            overflow: false,
            undefined: false,
        }
    }

    pub fn exact(&self) -> bool {
        !self.overflow && !self.undefined
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Flagged<U> {
        Flagged {
            value: f(self.value),
            overflow: self.overflow,
            undefined: self.undefined,
        }
    }

    /// Apply `f` and merge its flags with ours.
    pub fn and_then<U>(self, f: impl FnOnce(T) -> Flagged<U>) -> Flagged<U> {
        let r = f(self.value);
        Flagged {
            value: r.value,
            overflow: self.overflow || r.overflow,
            undefined: self.undefined || r.undefined,
        }
    }

    pub fn absorb<U>(&mut self, other: &Flagged<U>) {
        self.overflow |= other.overflow;
        self.undefined |= other.undefined;
    }
}
