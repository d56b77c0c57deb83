use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::Element;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GenKind {
    Poly,
    Ext,
    /// Basis element of a module-form presentation: at most one such factor
    /// per monomial, products between them are undefined.
    Module,
}

impl GenKind {
    pub fn keyword(self) -> &'static str {
        match self {
            GenKind::Poly => "poly",
            GenKind::Ext => "ext",
            GenKind::Module => "module",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    pub kind: GenKind,
    /// Motivic weight; `degree - weight` is the τ-slack of the generator.
    pub weight: u32,
    /// Designated image of the cycle map.
    pub chow: bool,
    /// Lifts to integral cohomology.
    pub integral: bool,
}

impl Generator {
    pub fn new(name: &str, degree: u32, kind: GenKind, weight: u32) -> Self {
        Generator {
            name: name.to_string(),
            degree,
            kind,
            weight,
            chow: false,
            integral: false,
        }
    }

    pub fn chow(mut self) -> Self {
        self.chow = true;
        self
    }

    pub fn integral(mut self) -> Self {
        self.integral = true;
        self
    }
}

/// A class known from outside the engine to lie in N^level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Designated {
    pub element: Element,
    pub level: u32,
    pub citation: String,
}

/// Group-level facts used by the coniveau analysis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metadata {
    pub group: String,
    /// Every positive-degree integral class is torsion (finite groups).
    pub all_torsion: bool,
    /// Monomial weights compute the coniveau filtration exactly.
    pub weight_exact: bool,
    pub abelian_sylow: bool,
    pub designated_n1: Vec<Designated>,
    /// Integral classes beyond the integral-flagged generators.
    pub integral_classes: Vec<Element>,
    /// Chow classes beyond the chow-flagged generators.
    pub chow_classes: Vec<Element>,
    pub citations: Vec<String>,
    pub notes: Vec<String>,
    pub n_max: u32,
}

impl Default for Metadata {
    fn default() -> Self {
        Metadata {
            group: String::new(),
            all_torsion: false,
            weight_exact: false,
            abelian_sylow: false,
            designated_n1: Vec::new(),
            integral_classes: Vec::new(),
            chow_classes: Vec::new(),
            citations: Vec::new(),
            notes: Vec::new(),
            n_max: 2,
        }
    }
}

/// Generator-level operation data as written in a presentation file.
///
/// `ptotal` is the total reduced power `P(g) = Σ_k P^k(g)`; at p = 2 it lists
/// the even squares only. `q` holds explicitly stated values of `Q_n(g)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OperationSpec {
    pub beta: BTreeMap<usize, Element>,
    pub q: BTreeMap<(u32, usize), Element>,
    pub ptotal: BTreeMap<usize, Element>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    pub prime: u32,
    pub truncation: u32,
    pub generators: Vec<Generator>,
    /// Raw (unreduced) homogeneous relations.
    pub relations: Vec<Element>,
    pub ops: OperationSpec,
    pub meta: Metadata,
}

impl AlgebraPresentation {
    pub fn new(prime: u32, truncation: u32) -> Self {
        AlgebraPresentation {
            prime,
            truncation,
            generators: Vec::new(),
            relations: Vec::new(),
            ops: OperationSpec::default(),
            meta: Metadata::default(),
        }
    }

    pub fn generator_index(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Structural checks on generators and relations.
    pub fn validate(&self) -> Result<()> {
        crate::fplinalg::PrimeField::new(self.prime)?;
        let mut seen = std::collections::HashSet::new();
        for g in &self.generators {
            if !seen.insert(g.name.as_str()) {
                return Err(Error::Presentation(format!("duplicate generator `{}`", g.name)));
            }
            if g.degree == 0 {
                return Err(Error::Presentation(format!("generator `{}` has degree 0", g.name)));
            }
            if g.weight > g.degree {
                return Err(Error::Presentation(format!(
                    "generator `{}`: weight {} exceeds degree {}",
                    g.name, g.weight, g.degree
                )));
            }
            if g.chow && (g.degree % 2 == 1 || g.weight * 2 != g.degree) {
                return Err(Error::Presentation(format!(
                    "chow generator `{}` must have even degree and weight = degree/2",
                    g.name
                )));
            }
            match (self.prime, g.kind) {
                (2, GenKind::Ext) => {
                    return Err(Error::Presentation(format!(
                        "generator `{}`: at p = 2 generators are polynomial; record squares as relations",
                        g.name
                    )))
                }
                (2, _) => {}
                (_, GenKind::Ext) if g.degree % 2 == 0 => {
                    return Err(Error::Presentation(format!(
                        "exterior generator `{}` must have odd degree",
                        g.name
                    )))
                }
                (_, GenKind::Poly) if g.degree % 2 == 1 => {
                    return Err(Error::Presentation(format!(
                        "polynomial generator `{}` must have even degree for odd p",
                        g.name
                    )))
                }
                _ => {}
            }
        }
        for (i, r) in self.relations.iter().enumerate() {
            match r.homogeneous_degree(&self.generators) {
                Err(_) => {
                    return Err(Error::Presentation(format!("relation {} is not homogeneous", i + 1)))
                }
                Ok(Some(d)) if d > self.truncation => {
                    return Err(Error::Presentation(format!(
                        "relation {} has degree {d} above truncation {}",
                        i + 1,
                        self.truncation
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }
}
