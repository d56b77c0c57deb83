//! Modeled transfer (Gysin) maps into a compiled algebra.
//!
//! A divisor model has source `B = A/(kill)` and sends `z` to
//! `euler * lift(z)`. Because `B` is compiled from the relations of `A`
//! followed by `kill`, every basis monomial of `B` is a basis monomial of
//! `A`, and the lift is the identity on monomials.
//!
//! A table model lists values on source classes; with `linear=g:t` the
//! table extends to `g^k s -> t^k f(s)`. Values may be read modulo a target
//! ideal.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fplinalg::{FpMatrix, Subspace};
use crate::gralg::{CompiledAlgebra, DivisorDecl, Element, Flagged, PresentationFile, TableDecl};
use crate::ops::{OperatedAlgebra, Operation};

#[derive(Clone, Debug)]
pub struct DivisorModel {
    pub name: String,
    /// Reduced in the target.
    pub euler: Element,
    pub kill: Element,
    source: OperatedAlgebra,
}

#[derive(Clone, Debug)]
pub struct TableModel {
    pub name: String,
    pub source_name: String,
    pub shift: u32,
    pub modulo: Vec<Element>,
    pub linear: Option<(usize, Element)>,
    /// (source, target) pairs, both reduced.
    pub maps: Vec<(Element, Element)>,
    source: OperatedAlgebra,
}

#[derive(Clone, Debug)]
pub enum TransferModel {
    Divisor(DivisorModel),
    Table(TableModel),
}

/// Result of checking one law over a range of basis elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub model: String,
    pub law: String,
    pub checked: usize,
    /// Cases skipped because a value fell outside the tabulated span.
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl LawReport {
    fn new(model: &str, law: impl Into<String>) -> Self {
        LawReport {
            model: model.to_string(),
            law: law.into(),
            checked: 0,
            skipped: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(witness());
        }
    }
}

impl DivisorModel {
    pub fn new(target: &OperatedAlgebra, decl: &DivisorDecl) -> Result<Self> {
        let alg = target.algebra();
        let mut pres = alg.presentation().clone();
        pres.relations.push(decl.kill.clone());
        let source = OperatedAlgebra::new(CompiledAlgebra::compile(pres)?)?;
        let euler = alg.reduce(&decl.euler).value;
        match alg.degree_of(&euler)? {
            Some(2) => {}
            _ => {
                return Err(Error::Presentation(format!(
                    "transfer `{}`: euler class must have degree 2",
                    decl.name
                )))
            }
        }
        Ok(DivisorModel {
            name: decl.name.clone(),
            euler,
            kill: decl.kill.clone(),
            source,
        })
    }

    pub fn source(&self) -> &OperatedAlgebra {
        &self.source
    }

    /// Quotient map `A -> B`.
    pub fn restrict(&self, a: &Element) -> Element {
        self.source.algebra().reduce(a).value
    }

    /// Section of `restrict` on reduced source elements.
    pub fn lift(&self, z: &Element) -> Element {
        z.clone()
    }

    pub fn apply(&self, target: &OperatedAlgebra, z: &Element) -> Flagged<Element> {
        target.algebra().mul(&self.euler, &self.lift(z))
    }
}

impl TableModel {
    pub fn new(target: &OperatedAlgebra, file: &PresentationFile, decl: &TableDecl) -> Result<Self> {
        let (_, pres) = file
            .sources
            .iter()
            .find(|(n, _)| *n == decl.source)
            .ok_or_else(|| Error::Presentation(format!("unknown source `{}`", decl.source)))?;
        let source = OperatedAlgebra::new(CompiledAlgebra::compile(pres.clone())?)?;
        let talg = target.algebra();
        let salg = source.algebra();
        let mut maps = Vec::new();
        for (s, t) in &decl.maps {
            let s = salg.reduce(s).value;
            let t = talg.reduce(t).value;
            let ds = salg.degree_of(&s)?;
            let dt = talg.degree_of(&t)?;
            if let (Some(ds), Some(dt)) = (ds, dt) {
                if ds + decl.shift != dt {
                    return Err(Error::Presentation(format!(
                        "transfer `{}`: `{}` -> `{}` does not shift degree by {}",
                        decl.name,
                        salg.format(&s),
                        talg.format(&t),
                        decl.shift
                    )));
                }
            }
            maps.push((s, t));
        }
        Ok(TableModel {
            name: decl.name.clone(),
            source_name: decl.source.clone(),
            shift: decl.shift,
            modulo: decl.modulo.iter().map(|m| talg.reduce(m).value).collect(),
            linear: decl.linear.as_ref().map(|(g, e)| (*g, talg.reduce(e).value)),
            maps,
            source,
        })
    }

    pub fn source(&self) -> &OperatedAlgebra {
        &self.source
    }

    /// Generating (source, target) pairs in source degree `d`.
    pub fn tabulated(&self, target: &OperatedAlgebra, d: u32) -> Vec<(Element, Element)> {
        let salg = self.source.algebra();
        let talg = target.algebra();
        let mut out = Vec::new();
        for (s, t) in &self.maps {
            let Ok(Some(ds)) = salg.degree_of(s) else { continue };
            if ds > d {
                continue;
            }
            match &self.linear {
                None if ds == d => out.push((s.clone(), t.clone())),
                None => {}
                Some((g, tg)) => {
                    let gd = salg.generators()[*g].degree;
                    if !(d - ds).is_multiple_of(gd) {
                        continue;
                    }
                    let k = (d - ds) / gd;
                    let sv = salg.mul(&salg.pow(&salg.generator(*g), k).value, s).value;
                    let tv = talg.mul(&talg.pow(tg, k).value, t).value;
                    out.push((sv, tv));
                }
            }
        }
        out
    }

    /// The ideal that target values are taken modulo, in degree `d`.
    pub fn ambiguity(&self, target: &OperatedAlgebra, d: u32) -> Result<Subspace> {
        target.algebra().ideal_span(&self.modulo, d)
    }

    pub fn apply(&self, target: &OperatedAlgebra, z: &Element) -> Result<Flagged<Element>> {
        let salg = self.source.algebra();
        let talg = target.algebra();
        let f = salg.field();
        let mut out = Flagged::clean(Element::zero());
        let mut degrees: Vec<u32> = z.terms().keys().map(|m| salg.monomial_degree(m)).collect();
        degrees.sort_unstable();
        degrees.dedup();
        for d in degrees {
            if d + self.shift > talg.truncation() {
                out.overflow = true;
                continue;
            }
            let comp = z.component(d, salg.generators());
            let tab = self.tabulated(target, d);
            let cols: Vec<Vec<u32>> = tab.iter().map(|(s, _)| salg.coords(s, d)).collect();
            let m = FpMatrix::from_columns(f, salg.dim(d), &cols);
            let Some(sol) = m.solve(&salg.coords(&comp, d)) else {
                return Err(Error::OutsideTabulatedSpan(self.name.clone()));
            };
            for (c, (_, t)) in sol.iter().zip(&tab) {
                out.value.add_scaled(t, *c, f);
            }
        }
        Ok(out)
    }

    /// Whether the linear extension is well defined: dependent source
    /// combinations must map into the ambiguity ideal.
    pub fn check_consistency(&self, target: &OperatedAlgebra) -> Result<LawReport> {
        let salg = self.source.algebra();
        let talg = target.algebra();
        let f = salg.field();
        let mut rep = LawReport::new(&self.name, "table well defined");
        let top = talg.truncation().saturating_sub(self.shift).min(salg.truncation());
        for d in 0..=top {
            let tab = self.tabulated(target, d);
            let cols: Vec<Vec<u32>> = tab.iter().map(|(s, _)| salg.coords(s, d)).collect();
            let m = FpMatrix::from_columns(f, salg.dim(d), &cols);
            let amb = self.ambiguity(target, d + self.shift)?;
            for k in m.kernel_basis() {
                let mut img = Element::zero();
                for (c, (_, t)) in k.iter().zip(&tab) {
                    img.add_scaled(t, *c, f);
                }
                let ok = amb.contains(&talg.coords(&img, d + self.shift));
                rep.record(ok, || format!("degree {d}: dependent combination maps to {}", talg.format(&img)));
            }
        }
        Ok(rep)
    }

    /// Rank of the map into `target / ambiguity` from source degree `d`,
    /// and the dimension of the tabulated span there.
    pub fn rank_in_degree(&self, target: &OperatedAlgebra, d: u32) -> Result<(usize, usize)> {
        let salg = self.source.algebra();
        let talg = target.algebra();
        let f = salg.field();
        let td = d + self.shift;
        let tab = self.tabulated(target, d);
        let span = Subspace::from_vectors(f, salg.dim(d), tab.iter().map(|(s, _)| salg.coords(s, d)).collect::<Vec<_>>().iter());
        let amb = self.ambiguity(target, td)?;
        let mut img = amb.clone();
        for (_, t) in &tab {
            img.insert(&talg.coords(t, td));
        }
        Ok((img.dim() - amb.dim(), span.dim()))
    }
}

impl TransferModel {
    pub fn name(&self) -> &str {
        match self {
            TransferModel::Divisor(m) => &m.name,
            TransferModel::Table(m) => &m.name,
        }
    }

    pub fn source(&self) -> &OperatedAlgebra {
        match self {
            TransferModel::Divisor(m) => m.source(),
            TransferModel::Table(m) => m.source(),
        }
    }

    pub fn shift(&self) -> u32 {
        match self {
            TransferModel::Divisor(_) => 2,
            TransferModel::Table(m) => m.shift,
        }
    }

    pub fn apply(&self, target: &OperatedAlgebra, z: &Element) -> Result<Flagged<Element>> {
        match self {
            TransferModel::Divisor(m) => Ok(m.apply(target, z)),
            TransferModel::Table(m) => m.apply(target, z),
        }
    }

    /// Ideal the values are defined modulo (empty for divisor models).
    pub fn modulo(&self) -> &[Element] {
        match self {
            TransferModel::Divisor(_) => &[],
            TransferModel::Table(m) => &m.modulo,
        }
    }

    /// Degree-`d` target span of the images of `allowed` (a subspace of
    /// source degree `d - shift`). Vectors outside a table's span are
    /// skipped; the count of skipped basis vectors is returned.
    pub fn image_span(&self, target: &OperatedAlgebra, d: u32, allowed: &Subspace) -> Result<(Subspace, usize)> {
        let talg = target.algebra();
        let salg = self.source().algebra();
        let mut out = Subspace::zero(talg.field(), talg.dim(d));
        let mut skipped = 0;
        let Some(sd) = d.checked_sub(self.shift()) else {
            return Ok((out, 0));
        };
        for v in allowed.basis() {
            let z = salg.from_coords(sd, v);
            match self.apply(target, &z) {
                Ok(img) => {
                    out.insert(&talg.coords(&img.value, d));
                }
                Err(Error::OutsideTabulatedSpan(_)) => skipped += 1,
                Err(e) => return Err(e),
            }
        }
        Ok((out, skipped))
    }

    /// Target values equal modulo the model's ambiguity ideal.
    fn equal_in(&self, target: &OperatedAlgebra, a: &Element, b: &Element, d: u32) -> Result<bool> {
        let talg = target.algebra();
        let diff = a.minus(b, talg.field());
        if self.modulo().is_empty() {
            return Ok(diff.is_zero());
        }
        Ok(talg.ideal_span(self.modulo(), d)?.contains(&talg.coords(&diff, d)))
    }

    /// `Q_n f_* = f_* Q_n` on every source basis element whose images stay
    /// within the truncation.
    pub fn check_qn_commutation(&self, target: &OperatedAlgebra, n: u32) -> Result<LawReport> {
        let mut rep = LawReport::new(self.name(), format!("Q_{n} commutes with transfer"));
        let talg = target.algebra();
        let src = self.source();
        let salg = src.algebra();
        let qd = target.q_degree(n);
        let top = talg.truncation();
        if n > target.n_max() || n > src.n_max() {
            return Ok(rep);
        }
        for d in 0..=salg.truncation() {
            let td = d + self.shift() + qd;
            if td > top || d + qd > salg.truncation() {
                break;
            }
            for b in salg.degree_basis(d)? {
                let lhs = match self.apply(target, &b) {
                    Ok(x) => target.apply_q(n, &x.value)?,
                    Err(Error::OutsideTabulatedSpan(_)) => {
                        rep.skipped += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let qb = src.apply_q(n, &b)?;
                let rhs = match self.apply(target, &qb.value) {
                    Ok(x) => x,
                    Err(Error::OutsideTabulatedSpan(_)) => {
                        rep.skipped += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let ok = lhs.exact() && rhs.exact() && qb.exact() && self.equal_in(target, &lhs.value, &rhs.value, td)?;
                rep.record(ok, || {
                    format!(
                        "z = {}: Q_{n} f_*(z) = {}, f_* Q_{n}(z) = {}",
                        salg.format(&b),
                        talg.format(&lhs.value),
                        talg.format(&rhs.value)
                    )
                });
            }
        }
        Ok(rep)
    }
}

/// `f_*(r(a) z) = a f_*(z)` over all basis pairs with target degree
/// `<= max_degree`.
pub fn check_frobenius(target: &OperatedAlgebra, f: &DivisorModel, max_degree: u32) -> Result<LawReport> {
    let mut rep = LawReport::new(&f.name, "Frobenius reciprocity");
    let talg = target.algebra();
    let salg = f.source().algebra();
    let top = max_degree.min(talg.truncation());
    for da in 0..=top {
        for dz in 0..=top.saturating_sub(da + 2) {
            if da + dz + 2 > top {
                break;
            }
            for a in talg.degree_basis(da)? {
                let ra = f.restrict(&a);
                for z in salg.degree_basis(dz)? {
                    let lhs = f.apply(target, &salg.mul(&ra, &z).value);
                    let rhs = talg.mul(&a, &f.apply(target, &z).value);
                    rep.record(lhs.value == rhs.value && lhs.exact() && rhs.exact(), || {
                        format!(
                            "a = {}, z = {}: {} vs {}",
                            talg.format(&a),
                            salg.format(&z),
                            talg.format(&lhs.value),
                            talg.format(&rhs.value)
                        )
                    });
                }
            }
        }
    }
    Ok(rep)
}

/// `P^1 f_*(x) = f_*(e^{p-1} x + P^1 x)` for the line-bundle normal of a
/// divisor model.
pub fn check_grothendieck(target: &OperatedAlgebra, f: &DivisorModel) -> Result<LawReport> {
    let mut rep = LawReport::new(&f.name, "Grothendieck formula for P^1");
    let talg = target.algebra();
    let src = f.source();
    let salg = src.algebra();
    let p = talg.prime();
    let pd = Operation::Power(1).degree(p);
    let fld = talg.field();
    let e_src = f.restrict(&f.euler);
    let c = salg.pow(&e_src, p - 1).value;
    for d in 0..=talg.truncation() {
        if d + 2 + pd > talg.truncation() {
            break;
        }
        for x in salg.degree_basis(d)? {
            let lhs = target.apply_power(1, &f.apply(target, &x).value)?;
            let inner = salg.mul(&c, &x).value.plus(&src.apply_power(1, &x)?.value, fld);
            let rhs = f.apply(target, &inner);
            rep.record(lhs.value == rhs.value && lhs.exact() && rhs.exact(), || {
                format!(
                    "x = {}: {} vs {}",
                    salg.format(&x),
                    talg.format(&lhs.value),
                    talg.format(&rhs.value)
                )
            });
        }
    }
    Ok(rep)
}
