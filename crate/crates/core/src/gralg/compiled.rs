use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::fplinalg::{PrimeField, SparseEchelon, SparseVec, Subspace};

use super::expr::{format_element, parse_raw};
use super::{AlgebraPresentation, Element, Flagged, GenKind, Generator, Monomial};

/// One degree of a compiled algebra: every raw monomial of that degree, the
/// surviving normal-form basis, and each raw monomial's normal form.
#[derive(Clone, Debug)]
struct DegreeSlice {
    /// Ascending monomial order.
    raw: Vec<Monomial>,
    raw_index: HashMap<Monomial, u32>,
    /// Descending monomial order.
    basis: Vec<Monomial>,
    basis_index: HashMap<Monomial, usize>,
    /// raw index -> sparse coordinates in `basis`
    normal_form: Vec<Vec<(u32, u32)>>,
}

/// A degree-truncated quotient of the free graded-commutative algebra on the
/// generators, resolved degree by degree.
///
/// Within each degree the raw monomials are ordered ascending and the
/// relation ideal is row reduced; pivot monomials are eliminated, so the
/// normal-form basis keeps the lexicographically largest monomials.
#[derive(Clone, Debug)]
pub struct CompiledAlgebra {
    pres: AlgebraPresentation,
    field: PrimeField,
    slices: Vec<DegreeSlice>,
}

fn enumerate_raw(gens: &[Generator], degree: u32) -> Vec<Monomial> {
    fn go(gens: &[Generator], i: usize, left: u32, module_used: bool, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if i == gens.len() {
            if left == 0 {
                out.push(Monomial::from_exponents(cur.clone()));
            }
            return;
        }
        let g = &gens[i];
        let max_e = match g.kind {
            GenKind::Ext => 1,
            GenKind::Module if module_used => 0,
            GenKind::Module => 1,
            GenKind::Poly => left / g.degree,
        }
        .min(left / g.degree);
        for e in 0..=max_e {
            cur[i] = e as u16;
            let used = module_used || (g.kind == GenKind::Module && e > 0);
            go(gens, i + 1, left - e * g.degree, used, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u16; gens.len()];
    go(gens, 0, degree, false, &mut cur, &mut out);
    out.sort();
    out
}

impl CompiledAlgebra {
    pub fn compile(pres: AlgebraPresentation) -> Result<Self> {
        pres.validate()?;
        let field = PrimeField::new(pres.prime)?;
        let gens = &pres.generators;
        let n = pres.truncation;
        let mut slices: Vec<DegreeSlice> = Vec::with_capacity(n as usize + 1);
        let rel_degrees: Vec<Option<u32>> = pres
            .relations
            .iter()
            .map(|r| r.homogeneous_degree(gens).ok().flatten())
            .collect();
        for d in 0..=n {
            let raw = enumerate_raw(gens, d);
            let raw_index: HashMap<Monomial, u32> =
                raw.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
            let mut ech = SparseEchelon::new(field, raw.len());
            for (r, rd) in pres.relations.iter().zip(&rel_degrees) {
                let Some(rd) = *rd else { continue };
                if rd > d {
                    continue;
                }
                for m in &slices[(d - rd) as usize].raw {
                    let prod = r.raw_product(&Element::from_monomial(m.clone(), 1), gens, field);
                    let v: SparseVec = prod
                        .value
                        .terms()
                        .iter()
                        .map(|(mm, &c)| (raw_index[mm], c))
                        .collect();
                    ech.insert(v);
                }
            }
            let mut basis: Vec<Monomial> = raw
                .iter()
                .enumerate()
                .filter(|(i, _)| !ech.is_pivot(*i))
                .map(|(_, m)| m.clone())
                .collect();
            basis.reverse();
            let basis_index: HashMap<Monomial, usize> =
                basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
            let normal_form = (0..raw.len())
                .map(|i| {
                    if !ech.is_pivot(i) {
                        return vec![(basis_index[&raw[i]] as u32, 1)];
                    }
                    let unit: SparseVec = [(i as u32, 1)].into_iter().collect();
                    let mut nf: Vec<(u32, u32)> = ech
                        .reduce(unit)
                        .into_iter()
                        .map(|(k, c)| (basis_index[&raw[k as usize]] as u32, c))
                        .collect();
                    nf.sort();
                    nf
                })
                .collect();
            slices.push(DegreeSlice {
                raw,
                raw_index,
                basis,
                basis_index,
                normal_form,
            });
        }
        Ok(CompiledAlgebra { pres, field, slices })
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        &self.pres
    }
    pub fn generators(&self) -> &[Generator] {
        &self.pres.generators
    }
    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn prime(&self) -> u32 {
        self.pres.prime
    }
    pub fn truncation(&self) -> u32 {
        self.pres.truncation
    }
    pub fn ngens(&self) -> usize {
        self.pres.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Result<usize> {
        self.pres.generator_index(name)
    }

    fn check_degree(&self, d: u32) -> Result<()> {
        if d > self.truncation() {
            Err(Error::DegreeOutOfRange {
                degree: d,
                max: self.truncation(),
            })
        } else {
            Ok(())
        }
    }

    pub fn dim(&self, d: u32) -> usize {
        self.slices.get(d as usize).map_or(0, |s| s.basis.len())
    }

    /// Dimensions of degrees `0..=N`.
    pub fn dims(&self) -> Vec<usize> {
        self.slices.iter().map(|s| s.basis.len()).collect()
    }

    pub fn basis_monomials(&self, d: u32) -> Result<&[Monomial]> {
        self.check_degree(d)?;
        Ok(&self.slices[d as usize].basis)
    }

    pub fn degree_basis(&self, d: u32) -> Result<Vec<Element>> {
        Ok(self
            .basis_monomials(d)?
            .iter()
            .map(|m| Element::from_monomial(m.clone(), 1))
            .collect())
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.degree(self.generators())
    }

    pub fn monomial_weight(&self, m: &Monomial) -> u32 {
        m.weight(self.generators())
    }

    pub fn degree_of(&self, e: &Element) -> Result<Option<u32>> {
        e.homogeneous_degree(self.generators())
    }

    pub fn one(&self) -> Element {
        Element::one(self.ngens())
    }

    pub fn generator(&self, index: usize) -> Element {
        Element::from_monomial(Monomial::generator(self.ngens(), index), 1)
    }

    /// Normal form; terms above the truncation are dropped and flagged.
    pub fn reduce(&self, e: &Element) -> Flagged<Element> {
        let mut acc: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        let mut overflow = false;
        let f = self.field;
        for (m, &c) in e.terms() {
            let d = self.monomial_degree(m);
            let Some(slice) = self.slices.get(d as usize) else {
                overflow = true;
                continue;
            };
            let idx = slice.raw_index[m] as usize;
            let coords = acc.entry(d).or_insert_with(|| vec![0; slice.basis.len()]);
            for &(b, v) in &slice.normal_form[idx] {
                coords[b as usize] = f.add(coords[b as usize], f.mul(c, v));
            }
        }
        let mut out = Element::zero();
        for (d, coords) in acc {
            out.add_scaled(&self.from_coords(d, &coords), 1, f);
        }
        Flagged {
            value: out,
            overflow,
            undefined: false,
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Flagged<Element> {
        self.mul_capped(a, b, self.truncation())
    }

    /// Product keeping only terms of degree `<= cap`; dropped terms above the
    /// truncation raise the overflow flag, those between cap and N do not.
    pub fn mul_capped(&self, a: &Element, b: &Element, cap: u32) -> Flagged<Element> {
        let gens = self.generators();
        let f = self.field;
        let n = self.truncation();
        let bdeg: Vec<(u32, &Monomial, u32)> =
            b.terms().iter().map(|(m, &c)| (m.degree(gens), m, c)).collect();
        let mut raw = Element::zero();
        let mut overflow = false;
        let mut undefined = false;
        for (ma, &ca) in a.terms() {
            let da = ma.degree(gens);
            for &(db, mb, cb) in &bdeg {
                if da + db > cap {
                    if da + db > n {
                        overflow = true;
                    }
                    continue;
                }
                match super::element::monomial_product(ma, mb, gens, f.p()) {
                    super::Product::Zero => {}
                    super::Product::Undefined => undefined = true,
                    super::Product::Term { monomial, negate } => {
                        let c = f.mul(ca, cb);
                        raw.add_term(monomial, if negate { f.neg(c) } else { c }, f);
                    }
                }
            }
        }
        let mut r = self.reduce(&raw);
        r.overflow |= overflow;
        r.undefined |= undefined;
        r
    }

    pub fn pow(&self, a: &Element, e: u32) -> Flagged<Element> {
        let mut acc = Flagged::clean(self.one());
        for _ in 0..e {
            let next = self.mul(&acc.value, a);
            acc.absorb(&next);
            acc.value = next.value;
        }
        acc
    }

    /// Coordinates of a reduced element in the degree-`d` basis. Terms of
    /// other degrees are ignored.
    pub fn coords(&self, e: &Element, d: u32) -> Vec<u32> {
        let Some(slice) = self.slices.get(d as usize) else {
            return Vec::new();
        };
        let mut v = vec![0; slice.basis.len()];
        for (m, &c) in e.terms() {
            if let Some(&i) = slice.basis_index.get(m) {
                v[i] = c;
            }
        }
        v
    }

    pub fn from_coords(&self, d: u32, coords: &[u32]) -> Element {
        let slice = &self.slices[d as usize];
        slice
            .basis
            .iter()
            .zip(coords)
            .filter(|(_, &c)| c != 0)
            .map(|(m, &c)| (m.clone(), c))
            .collect()
    }

    /// Whether `e` is already in normal form (every term a basis monomial).
    pub fn is_reduced(&self, e: &Element) -> bool {
        e.terms().keys().all(|m| {
            let d = self.monomial_degree(m);
            self.slices
                .get(d as usize)
                .is_some_and(|s| s.basis_index.contains_key(m))
        })
    }

    pub fn parse(&self, text: &str) -> Result<Element> {
        let raw = parse_raw(text, self.generators(), self.field).map_err(|e| Error::Parse {
            line: 1,
            column: e.column,
            message: e.message,
        })?;
        Ok(self.reduce(&raw).value)
    }

    pub fn format(&self, e: &Element) -> String {
        format_element(e, self.generators(), self.field)
    }

    /// Degree-`d` slice of the ideal generated by `gens`.
    pub fn ideal_span(&self, gens: &[Element], d: u32) -> Result<Subspace> {
        self.check_degree(d)?;
        let mut s = Subspace::zero(self.field, self.dim(d));
        for g in gens {
            let Some(gd) = self.degree_of(g)? else { continue };
            if gd > d {
                continue;
            }
            for m in &self.slices[(d - gd) as usize].basis {
                let prod = self.mul(g, &Element::from_monomial(m.clone(), 1));
                s.insert(&self.coords(&prod.value, d));
            }
        }
        Ok(s)
    }

    /// Degree-`d` span of all products of the given positive-degree
    /// homogeneous elements (the empty product counts in degree 0).
    pub fn subring_span(&self, gens: &[Element], d: u32) -> Result<Subspace> {
        self.check_degree(d)?;
        let mut items = Vec::new();
        for g in gens {
            if let Some(gd) = self.degree_of(g)? {
                if gd > 0 {
                    items.push((gd, g));
                }
            }
        }
        let mut s = Subspace::zero(self.field, self.dim(d));
        let mut stack: Vec<(usize, u32, Element)> = vec![(0, 0, self.one())];
        while let Some((i, deg, prod)) = stack.pop() {
            if deg == d {
                s.insert(&self.coords(&prod, d));
                continue;
            }
            for (j, (gd, g)) in items.iter().enumerate().skip(i) {
                if deg + gd <= d {
                    let next = self.mul(&prod, g).value;
                    if !next.is_zero() {
                        stack.push((j, deg + gd, next));
                    }
                }
            }
        }
        Ok(s)
    }
}
