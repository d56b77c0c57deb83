use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{
    element_slack, image_q0, integral_span, qi_obstruction, strong_coniveau_lower_bound,
    coniveau_slice, StrongBound,
};
use crate::entry::Entry;
use crate::error::{Error, Result};
use crate::fplinalg::{FpMatrix, Subspace};
use crate::gralg::{CompiledAlgebra, Element};
use crate::ops::OperatedAlgebra;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Mod-p reductions of integral classes, the setting where the
    /// `Q_i` obstruction applies.
    Integral,
    /// All mod-p classes of positive slack.
    ModP,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "integral" | "z" => Ok(Mode::Integral),
            "mod-p" | "modp" | "mod_p" => Ok(Mode::ModP),
            other => Err(Error::Presentation(format!(
                "unknown mode {other:?}; expected integral or mod-p"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Integral => "integral",
            Mode::ModP => "mod-p",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassStatus {
    CertifiedNonzero,
    CertifiedInStrongConiveau,
    Undecided,
}

impl fmt::Display for ClassStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassStatus::CertifiedNonzero => "certified_nonzero",
            ClassStatus::CertifiedInStrongConiveau => "certified_in_strong_coniveau",
            ClassStatus::Undecided => "undecided",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassRecord {
    pub degree: u32,
    pub class: String,
    /// Coordinates in the degree basis (descending monomial order).
    pub coordinates: Vec<u32>,
    pub status: ClassStatus,
    /// Coniveau level at which the class is shown nonzero in the quotient.
    pub level: Option<u32>,
    pub rule: String,
    pub witness: Vec<String>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub citations: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeRow {
    pub degree: u32,
    pub universe_dim: usize,
    pub strong_dim: usize,
    pub classes: Vec<ClassRecord>,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub certified_nonzero: usize,
    pub certified_in_strong_coniveau: usize,
    pub undecided: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DhReport {
    pub entry: String,
    pub group: String,
    pub prime: Option<u32>,
    pub mode: Mode,
    pub truncation: Option<u32>,
    pub s_max: u32,
    /// Largest degree where the Q_1 test is available.
    pub q1_window: u32,
    pub weight_model: &'static str,
    pub stub: bool,
    pub notes: Vec<String>,
    pub verdicts: Vec<String>,
    pub citations: Vec<String>,
    pub degrees: Vec<DegreeRow>,
    pub summary: Summary,
}

impl DhReport {
    pub fn classes(&self) -> impl Iterator<Item = &ClassRecord> {
        self.degrees.iter().flat_map(|d| d.classes.iter())
    }

    pub fn with_status(&self, status: ClassStatus) -> Vec<&ClassRecord> {
        self.classes().filter(|c| c.status == status).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let push = |out: &mut String, s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        push(&mut out, format!("DH report for {} ({}), mode {}", self.entry, self.group, self.mode));
        if let (Some(p), Some(n)) = (self.prime, self.truncation) {
            push(
                &mut out,
                format!(
                    "p = {p}, truncation N = {n}, s_max = {}, Q_1 window <= {}, weights: {}",
                    self.s_max, self.q1_window, self.weight_model
                ),
            );
        }
        for n in &self.notes {
            push(&mut out, format!("note: {n}"));
        }
        for v in &self.verdicts {
            push(&mut out, format!("recorded verdict: {v}"));
        }
        for row in &self.degrees {
            if row.universe_dim == 0 {
                continue;
            }
            push(
                &mut out,
                format!("degree {}: universe {}, strong bound {}", row.degree, row.universe_dim, row.strong_dim),
            );
            for c in &row.classes {
                let level = c.level.map(|l| format!(" level {l}")).unwrap_or_default();
                push(&mut out, format!("  {} : {}{} [{}]", c.class, c.status, level, c.rule));
                for w in &c.witness {
                    push(&mut out, format!("      {w}"));
                }
                if !c.note.is_empty() {
                    push(&mut out, format!("      ({})", c.note));
                }
            }
        }
        push(
            &mut out,
            format!(
                "summary: {} certified nonzero, {} in strong coniveau, {} undecided",
                self.summary.certified_nonzero, self.summary.certified_in_strong_coniveau, self.summary.undecided
            ),
        );
        out
    }
}

fn universe(entry: &Entry, a: &OperatedAlgebra, mode: Mode, d: u32) -> Result<Subspace> {
    let alg = a.algebra();
    let mut u = match mode {
        Mode::Integral if entry.meta().all_torsion => integral_span(a, d)?,
        Mode::Integral => image_q0(a, d)?,
        Mode::ModP => coniveau_slice(alg, 1, d)?,
    };
    let integral = match mode {
        Mode::Integral => Some(integral_span(a, d)?),
        Mode::ModP => None,
    };
    for des in &entry.meta().designated_n1 {
        let e = alg.reduce(&des.element).value;
        if alg.degree_of(&e)? != Some(d) {
            continue;
        }
        let v = alg.coords(&e, d);
        if integral.as_ref().is_none_or(|s| s.contains(&v)) {
            u.insert(&v);
        }
    }
    Ok(u)
}

/// Lower bound for the coniveau level of a class of the universe, with the
/// citations it relies on. Positive-degree torsion classes lie in `N^1`.
fn level_of(entry: &Entry, alg: &CompiledAlgebra, v: &Element, d: u32) -> (u32, Vec<String>) {
    let mut level = 1;
    let mut cites = Vec::new();
    if entry.meta().weight_exact {
        if let Some(s) = element_slack(alg, v) {
            level = level.max(s);
        }
    }
    let coords = alg.coords(v, d);
    let mut levels: Vec<u32> = entry.meta().designated_n1.iter().map(|x| x.level).collect();
    levels.sort_unstable();
    levels.dedup();
    for &l in levels.iter().rev() {
        if l <= level {
            break;
        }
        let chosen: Vec<_> = entry
            .meta()
            .designated_n1
            .iter()
            .filter(|x| x.level >= l)
            .filter(|x| alg.degree_of(&alg.reduce(&x.element).value).ok().flatten() == Some(d))
            .collect();
        let span = Subspace::from_vectors(
            alg.field(),
            alg.dim(d),
            chosen.iter().map(|x| alg.coords(&alg.reduce(&x.element).value, d)).collect::<Vec<_>>().iter(),
        );
        if span.contains(&coords) {
            level = l;
            cites = chosen.iter().map(|x| x.citation.clone()).filter(|c| !c.is_empty()).collect();
            break;
        }
    }
    (level, cites)
}

/// Express `v` in the bound's generators; the combination is recomputed
/// before it is returned.
fn strong_witness(alg: &CompiledAlgebra, bound: &StrongBound, v: &[u32]) -> Option<(String, Vec<String>)> {
    let f = alg.field();
    let cols: Vec<Vec<u32>> = bound.generators.iter().map(|g| g.0.clone()).collect();
    let m = FpMatrix::from_columns(f, v.len(), &cols);
    let x = m.solve(v)?;
    let mut check = vec![0u32; v.len()];
    let mut rules: Vec<&str> = Vec::new();
    let mut terms = Vec::new();
    for (c, (g, rule, desc)) in x.iter().zip(&bound.generators) {
        if *c == 0 {
            continue;
        }
        for (t, gi) in check.iter_mut().zip(g) {
            *t = f.add(*t, f.mul(*c, *gi));
        }
        if !rules.contains(rule) {
            rules.push(rule);
        }
        terms.push(if *c == 1 { desc.clone() } else { format!("{} * {}", f.signed(*c), desc) });
    }
    if check != v {
        return None;
    }
    Some((rules.join("+"), terms))
}

pub fn dh_report(entry: &Entry, mode: Mode, s_max: Option<u32>) -> Result<DhReport> {
    let meta = entry.meta();
    if entry.is_stub() {
        let mut notes = meta.notes.clone();
        notes.push("no algebra is modeled for this entry; only recorded verdicts are reported".into());
        return Ok(DhReport {
            entry: entry.id.clone(),
            group: entry.group().to_string(),
            prime: None,
            mode,
            truncation: None,
            s_max: 0,
            q1_window: 0,
            weight_model: "none",
            stub: true,
            notes,
            verdicts: entry.verdicts().to_vec(),
            citations: meta.citations.clone(),
            degrees: Vec::new(),
            summary: Summary::default(),
        });
    }
    let a = entry.ops()?;
    let alg = a.algebra();
    let p = a.prime();
    let n = a.truncation();
    // Q_1 of a class of degree s must land at or below N for the
    // obstruction test; above that window survivors stay undecided
    let q1_window = n.saturating_sub(2 * p - 1);
    let s_max = s_max.unwrap_or(q1_window);
    if s_max >= n {
        return Err(Error::UnsafeWindow {
            requested: s_max,
            max: n.saturating_sub(1),
        });
    }
    let mut notes = meta.notes.clone();
    let mut degrees = Vec::new();
    let mut summary = Summary::default();
    for s in 1..=s_max {
        let u = universe(entry, a, mode, s)?;
        let bound = strong_coniveau_lower_bound(entry, mode, s)?;
        for note in &bound.notes {
            if !notes.contains(note) {
                notes.push(note.clone());
            }
        }
        let inter = u.intersection(&bound.span);
        let mut classes = Vec::new();
        for v in inter.basis() {
            let (rule, witness) = strong_witness(alg, &bound, v)
                .ok_or_else(|| Error::Presentation(format!("strong witness failed in degree {s}")))?;
            classes.push(ClassRecord {
                degree: s,
                class: alg.format(&alg.from_coords(s, v)),
                coordinates: v.clone(),
                status: ClassStatus::CertifiedInStrongConiveau,
                level: None,
                rule,
                witness,
                note: String::new(),
                citations: Vec::new(),
            });
        }
        for v in inter.complement_in(&u) {
            let e = alg.from_coords(s, &v);
            let class = alg.format(&e);
            let record = match mode {
                Mode::Integral if s > q1_window => {
                    undecided(s, class, v, "Q_1 of this degree lands above the truncation".into())
                }
                Mode::Integral => {
                    let c_star = (s - 1) / 2;
                    let (level, cites) = level_of(entry, alg, &e, s);
                    if c_star >= 1 && c_star <= level {
                        let obs = qi_obstruction(a, &e, s, c_star)?;
                        if obs.certifies() {
                            ClassRecord {
                                degree: s,
                                class,
                                coordinates: v,
                                status: ClassStatus::CertifiedNonzero,
                                level: Some(c_star),
                                rule: "qi-obstruction".into(),
                                witness: obs
                                    .witnesses
                                    .iter()
                                    .map(|(i, q)| format!("Q_{i}({}) = {}", alg.format(&e), alg.format(q)))
                                    .collect(),
                                note: String::new(),
                                citations: cites,
                            }
                        } else {
                            undecided(s, class, v, "every Q_i with i <= n_max vanishes within the truncation".into())
                        }
                    } else if c_star == 0 {
                        undecided(s, class, v, "degree too small for the Q_i test".into())
                    } else {
                        undecided(
                            s,
                            class,
                            v,
                            format!("known coniveau level {level} is below the required {c_star}"),
                        )
                    }
                }
                Mode::ModP if meta.abelian_sylow => ClassRecord {
                    degree: s,
                    class,
                    coordinates: v,
                    status: ClassStatus::CertifiedInStrongConiveau,
                    level: None,
                    rule: "sylow".into(),
                    witness: vec!["restriction to an abelian Sylow subgroup is injective".into()],
                    note: String::new(),
                    citations: Vec::new(),
                },
                Mode::ModP => undecided(s, class, v, "not in the strong-coniveau lower bound".into()),
            };
            classes.push(record);
        }
        for c in &classes {
            match c.status {
                ClassStatus::CertifiedNonzero => summary.certified_nonzero += 1,
                ClassStatus::CertifiedInStrongConiveau => summary.certified_in_strong_coniveau += 1,
                ClassStatus::Undecided => summary.undecided += 1,
            }
        }
        degrees.push(DegreeRow {
            degree: s,
            universe_dim: u.dim(),
            strong_dim: bound.span.dim(),
            classes,
        });
    }
    Ok(DhReport {
        entry: entry.id.clone(),
        group: entry.group().to_string(),
        prime: Some(p),
        mode,
        truncation: Some(n),
        s_max,
        q1_window,
        weight_model: if meta.weight_exact { "exact" } else { "lower-bound" },
        stub: false,
        notes,
        verdicts: entry.verdicts().to_vec(),
        citations: meta.citations.clone(),
        degrees,
        summary,
    })
}

fn undecided(degree: u32, class: String, coordinates: Vec<u32>, note: String) -> ClassRecord {
    ClassRecord {
        degree,
        class,
        coordinates,
        status: ClassStatus::Undecided,
        level: None,
        rule: "none".into(),
        witness: Vec::new(),
        note,
        citations: Vec::new(),
    }
}
