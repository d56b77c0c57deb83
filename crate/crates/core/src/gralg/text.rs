//! Line-oriented presentation files.
//!
//! ```text
//! # comment
//! group Q8
//! prime 2
//! truncate 16
//! gen y1 deg=2 kind=poly weight=1 chow integral
//! rel x1^2 - y1
//! q 0 x1 = y1                 # Q_0 is the Bockstein
//! ptotal c2 = c2 + c2^2
//! integral <expr>             # extra integral class
//! chow <expr>                 # extra cycle class
//! designated level=1 cite="..." <expr>
//! all_torsion | weight_exact | abelian_sylow | stub
//! nmax 2
//! cite "..." | note "..." | verdict "..."
//! source <name> ... end       # auxiliary algebra, prime inherited
//! transfer divisor name=f1 euler=y1 kill=y1^6
//! transfer table name=i1 source=S shift=2 modulo=c2 linear=y:y1
//! maps <source expr> -> <target expr>
//! ```
//!
//! Option values containing spaces must be double-quoted.

use crate::error::{Error, Result};
use crate::fplinalg::PrimeField;

use super::expr::parse_raw;
use super::{AlgebraPresentation, Designated, Element, GenKind, Generator};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorDecl {
    pub name: String,
    /// Raw expressions in the main algebra.
    pub euler: Element,
    pub kill: Element,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableDecl {
    pub name: String,
    pub source: String,
    pub shift: u32,
    /// Target ideal the table values are read modulo.
    pub modulo: Vec<Element>,
    /// Source generator index acting through a target element, making the
    /// table a module map over it.
    pub linear: Option<(usize, Element)>,
    /// (source, target) pairs, raw.
    pub maps: Vec<(Element, Element)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransferDecl {
    Divisor(DivisorDecl),
    Table(TableDecl),
}

impl TransferDecl {
    pub fn name(&self) -> &str {
        match self {
            TransferDecl::Divisor(d) => &d.name,
            TransferDecl::Table(t) => &t.name,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationFile {
    pub main: AlgebraPresentation,
    /// Auxiliary algebras in declaration order.
    pub sources: Vec<(String, AlgebraPresentation)>,
    pub transfers: Vec<TransferDecl>,
    pub stub: bool,
    pub verdicts: Vec<String>,
}

struct Word {
    col: usize,
    text: String,
}

fn perr<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        column,
        message: message.into(),
    })
}

/// Whitespace-separated words; double quotes group and are stripped.
fn split_words(line: &str, lineno: usize) -> Result<Vec<Word>> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let col = i + 1;
        let mut text = String::new();
        let mut in_quote = false;
        while i < chars.len() && (in_quote || !chars[i].is_whitespace()) {
            if chars[i] == '"' {
                in_quote = !in_quote;
            } else {
                text.push(chars[i]);
            }
            i += 1;
        }
        if in_quote {
            return perr(lineno, col, "unterminated quote");
        }
        out.push(Word { col, text });
    }
    Ok(out)
}

fn strip_comment(line: &str) -> &str {
    let mut in_quote = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quote = !in_quote,
            '#' if !in_quote => return &line[..i],
            _ => {}
        }
    }
    line
}

/// Text of `line` from 1-based char column `col` on.
fn rest_from(line: &str, col: usize) -> &str {
    match line.char_indices().nth(col - 1) {
        Some((b, _)) => &line[b..],
        None => "",
    }
}

struct Ctx {
    field: Option<PrimeField>,
}

fn expr_at(
    text: &str,
    col: usize,
    lineno: usize,
    pres: &AlgebraPresentation,
    ctx: &Ctx,
) -> Result<Element> {
    let Some(field) = ctx.field else {
        return perr(lineno, col, "`prime` must precede expressions");
    };
    parse_raw(text, &pres.generators, field).map_err(|e| Error::Parse {
        line: lineno,
        column: col + e.column - 1,
        message: e.message,
    })
}

fn parse_u32(w: &Word, lineno: usize, what: &str) -> Result<u32> {
    w.text
        .parse()
        .or_else(|_| perr(lineno, w.col, format!("expected integer {what}, found `{}`", w.text)))
}

/// `key=value` options; returns (key, value, column of value).
fn options(words: &[Word]) -> Vec<(String, String, usize)> {
    words
        .iter()
        .filter_map(|w| {
            w.text
                .split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string(), w.col + k.chars().count() + 1))
        })
        .collect()
}

fn option<'a>(opts: &'a [(String, String, usize)], key: &str) -> Option<&'a (String, String, usize)> {
    opts.iter().find(|(k, _, _)| k == key)
}

fn require<'a>(
    opts: &'a [(String, String, usize)],
    key: &str,
    lineno: usize,
    col: usize,
) -> Result<&'a (String, String, usize)> {
    option(opts, key).map_or_else(|| perr(lineno, col, format!("missing `{key}=`")), Ok)
}

fn parse_gen(words: &[Word], lineno: usize) -> Result<Generator> {
    let Some(name) = words.get(1) else {
        return perr(lineno, 4, "expected generator name");
    };
    let valid = name.text.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name
            .text
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
    if !valid {
        return perr(lineno, name.col, format!("invalid generator name `{}`", name.text));
    }
    let mut degree = None;
    let mut weight = None;
    let mut kind = None;
    let mut chow = false;
    let mut integral = false;
    for w in &words[2..] {
        match w.text.split_once('=') {
            Some(("deg", v)) => degree = Some(v),
            Some(("weight", v)) => weight = Some(v),
            Some(("kind", "poly")) => kind = Some(GenKind::Poly),
            Some(("kind", "ext")) => kind = Some(GenKind::Ext),
            Some(("kind", "module")) => kind = Some(GenKind::Module),
            Some(("kind", v)) => return perr(lineno, w.col + 5, format!("unknown kind `{v}`")),
            None if w.text == "chow" => chow = true,
            None if w.text == "integral" => integral = true,
            _ => return perr(lineno, w.col, format!("unexpected `{}`", w.text)),
        }
    }
    let num = |v: Option<&str>, what: &str| -> Result<u32> {
        match v.map(str::parse::<u32>) {
            Some(Ok(x)) => Ok(x),
            Some(Err(_)) => perr(lineno, name.col, format!("generator `{}`: bad {what}", name.text)),
            None => perr(lineno, name.col, format!("generator `{}`: missing {what}=", name.text)),
        }
    };
    let degree = num(degree, "deg")?;
    let weight = num(weight, "weight")?;
    let Some(kind) = kind else {
        return perr(lineno, name.col, format!("generator `{}`: missing kind=", name.text));
    };
    let mut g = Generator::new(&name.text, degree, kind, weight);
    g.chow = chow;
    g.integral = integral;
    Ok(g)
}

/// Parse a presentation file. Structural validation happens at compile
/// time; this only checks syntax and name resolution.
pub fn parse_presentation(text: &str) -> Result<PresentationFile> {
    let mut file = PresentationFile {
        main: AlgebraPresentation::new(0, 0),
        sources: Vec::new(),
        transfers: Vec::new(),
        stub: false,
        verdicts: Vec::new(),
    };
    let mut ctx = Ctx { field: None };
    let mut have_truncation = false;
    // index into file.sources while inside a `source` block
    let mut in_source: Option<usize> = None;
    let mut source_truncated = false;
    let mut open_table: Option<usize> = None;

    for (i, raw_line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = strip_comment(raw_line);
        let words = split_words(line, lineno)?;
        let Some(head) = words.first() else { continue };
        let key = head.text.as_str();
        if key != "maps" {
            open_table = None;
        }
        let target: &mut AlgebraPresentation = match in_source {
            Some(s) => &mut file.sources[s].1,
            None => &mut file.main,
        };
        let rest_col = |k: usize| words.get(k).map_or(line.chars().count() + 1, |w| w.col);
        match key {
            "prime" => {
                if in_source.is_some() {
                    return perr(lineno, head.col, "sources inherit the prime");
                }
                let w = words.get(1).map_or_else(|| perr(lineno, 6, "expected prime"), Ok)?;
                let p = parse_u32(w, lineno, "prime")?;
                let f = PrimeField::new(p).map_err(|_| Error::Parse {
                    line: lineno,
                    column: w.col,
                    message: format!("{p} is not a supported prime"),
                })?;
                ctx.field = Some(f);
                target.prime = p;
            }
            "truncate" => {
                let w = words.get(1).map_or_else(|| perr(lineno, 9, "expected degree"), Ok)?;
                target.truncation = parse_u32(w, lineno, "truncation")?;
                if in_source.is_some() {
                    source_truncated = true;
                } else {
                    have_truncation = true;
                }
            }
            "nmax" => {
                let w = words.get(1).map_or_else(|| perr(lineno, 5, "expected integer"), Ok)?;
                target.meta.n_max = parse_u32(w, lineno, "nmax")?;
            }
            "group" => target.meta.group = rest_from(line, rest_col(1)).trim().to_string(),
            "gen" => {
                let g = parse_gen(&words, lineno)?;
                if target.generators.iter().any(|x| x.name == g.name) {
                    return perr(lineno, words[1].col, format!("duplicate generator `{}`", g.name));
                }
                // expressions are stored against the generator list at parse time
                let seen_exprs = !target.relations.is_empty()
                    || !target.ops.beta.is_empty()
                    || !target.ops.q.is_empty()
                    || !target.ops.ptotal.is_empty()
                    || !target.meta.integral_classes.is_empty()
                    || !target.meta.chow_classes.is_empty()
                    || !target.meta.designated_n1.is_empty()
                    || (in_source.is_none() && !file.transfers.is_empty());
                if seen_exprs {
                    return perr(lineno, head.col, "generators must be declared before expressions");
                }
                target.generators.push(g);
            }
            "rel" | "integral" | "chow" => {
                let col = rest_col(1);
                let e = expr_at(rest_from(line, col), col, lineno, target, &ctx)?;
                match key {
                    "rel" => target.relations.push(e),
                    "integral" => target.meta.integral_classes.push(e),
                    _ => target.meta.chow_classes.push(e),
                }
            }
            "q" | "ptotal" => {
                let (n, gi) = if key == "q" { (Some(2), 2) } else { (None, 1) };
                let n = match n {
                    Some(k) => {
                        let w = words.get(k - 1).map_or_else(|| perr(lineno, 3, "expected index"), Ok)?;
                        Some(parse_u32(w, lineno, "operation index")?)
                    }
                    None => None,
                };
                let Some(gw) = words.get(gi) else {
                    return perr(lineno, line.chars().count() + 1, "expected generator");
                };
                let g = target.generator_index(&gw.text).map_err(|_| Error::Parse {
                    line: lineno,
                    column: gw.col,
                    message: format!("unknown generator `{}`", gw.text),
                })?;
                match words.get(gi + 1) {
                    Some(w) if w.text == "=" => {}
                    _ => return perr(lineno, rest_col(gi + 1), "expected `=`"),
                }
                let col = rest_col(gi + 2);
                let e = expr_at(rest_from(line, col), col, lineno, target, &ctx)?;
                match n {
                    Some(0) => {
                        target.ops.beta.insert(g, e);
                    }
                    Some(n) => {
                        target.ops.q.insert((n, g), e);
                    }
                    None => {
                        target.ops.ptotal.insert(g, e);
                    }
                }
            }
            "designated" => {
                let opt_end = words[1..]
                    .iter()
                    .position(|w| !w.text.contains('='))
                    .map_or(words.len(), |k| k + 1);
                let opts = options(&words[1..opt_end]);
                let level = match option(&opts, "level") {
                    Some((_, v, c)) => v.parse().or_else(|_| perr(lineno, *c, "bad level"))?,
                    None => 1,
                };
                let citation = option(&opts, "cite").map(|o| o.1.clone()).unwrap_or_default();
                // quoted text may contain spaces, so locate the expression after the options
                let col = if opt_end < words.len() {
                    words[opt_end].col
                } else {
                    return perr(lineno, line.chars().count() + 1, "expected expression");
                };
                let e = expr_at(rest_from(line, col), col, lineno, target, &ctx)?;
                target.meta.designated_n1.push(Designated {
                    element: e,
                    level,
                    citation,
                });
            }
            "all_torsion" => target.meta.all_torsion = true,
            "weight_exact" => target.meta.weight_exact = true,
            "abelian_sylow" => target.meta.abelian_sylow = true,
            "stub" => file.stub = true,
            "cite" | "note" | "verdict" => {
                let s = words[1..].iter().map(|w| w.text.as_str()).collect::<Vec<_>>().join(" ");
                match key {
                    "cite" => target.meta.citations.push(s),
                    "note" => target.meta.notes.push(s),
                    _ => file.verdicts.push(s),
                }
            }
            "source" => {
                if in_source.is_some() {
                    return perr(lineno, head.col, "nested `source` block");
                }
                let Some(name) = words.get(1) else {
                    return perr(lineno, 7, "expected source name");
                };
                if file.sources.iter().any(|(n, _)| *n == name.text) {
                    return perr(lineno, name.col, format!("duplicate source `{}`", name.text));
                }
                let mut p = AlgebraPresentation::new(file.main.prime, file.main.truncation);
                p.meta.n_max = file.main.meta.n_max;
                file.sources.push((name.text.clone(), p));
                in_source = Some(file.sources.len() - 1);
                source_truncated = false;
            }
            "end" => {
                let Some(s) = in_source.take() else {
                    return perr(lineno, head.col, "`end` without `source`");
                };
                if !source_truncated {
                    file.sources[s].1.truncation = file.main.truncation;
                }
            }
            "transfer" => {
                if in_source.is_some() {
                    return perr(lineno, head.col, "transfers belong to the main algebra");
                }
                let kind = words.get(1).map(|w| w.text.as_str());
                let opts = options(&words[2.min(words.len())..]);
                let name = require(&opts, "name", lineno, head.col)?.1.clone();
                if file.transfers.iter().any(|t| t.name() == name) {
                    return perr(lineno, head.col, format!("duplicate transfer `{name}`"));
                }
                let main = &file.main;
                let opt_expr = |key: &str| -> Result<Element> {
                    let (_, v, c) = require(&opts, key, lineno, head.col)?;
                    expr_at(v, *c, lineno, main, &ctx)
                };
                match kind {
                    Some("divisor") => {
                        let euler = opt_expr("euler")?;
                        let kill = opt_expr("kill")?;
                        file.transfers.push(TransferDecl::Divisor(DivisorDecl { name, euler, kill }));
                    }
                    Some("table") => {
                        let (_, source, scol) = require(&opts, "source", lineno, head.col)?;
                        let Some(si) = file.sources.iter().position(|(n, _)| n == source) else {
                            return perr(lineno, *scol, format!("unknown source `{source}`"));
                        };
                        let (_, shift, shcol) = require(&opts, "shift", lineno, head.col)?;
                        let shift = shift.parse().or_else(|_| perr(lineno, *shcol, "bad shift"))?;
                        let modulo = match option(&opts, "modulo") {
                            Some(_) => vec![opt_expr("modulo")?],
                            None => Vec::new(),
                        };
                        let linear = match option(&opts, "linear") {
                            Some((_, v, c)) => {
                                let Some((sg, te)) = v.split_once(':') else {
                                    return perr(lineno, *c, "expected `linear=<source gen>:<target expr>`");
                                };
                                let src = &file.sources[si].1;
                                let g = src.generator_index(sg).map_err(|_| Error::Parse {
                                    line: lineno,
                                    column: *c,
                                    message: format!("unknown source generator `{sg}`"),
                                })?;
                                let e = expr_at(te, c + sg.chars().count() + 1, lineno, main, &ctx)?;
                                Some((g, e))
                            }
                            None => None,
                        };
                        file.transfers.push(TransferDecl::Table(TableDecl {
                            name,
                            source: source.clone(),
                            shift,
                            modulo,
                            linear,
                            maps: Vec::new(),
                        }));
                        open_table = Some(file.transfers.len() - 1);
                    }
                    _ => {
                        return perr(lineno, rest_col(1), "expected `divisor` or `table`");
                    }
                }
            }
            "maps" => {
                let Some(t) = open_table else {
                    return perr(lineno, head.col, "`maps` must follow a `transfer table` line");
                };
                let TransferDecl::Table(table) = &file.transfers[t] else {
                    unreachable!("open_table always indexes a table");
                };
                let body_col = rest_col(1);
                let body = rest_from(line, body_col);
                let Some(arrow) = body.find("->") else {
                    return perr(lineno, body_col, "expected `->`");
                };
                let src_pres = &file.sources.iter().find(|(n, _)| *n == table.source).unwrap().1;
                let lhs = expr_at(&body[..arrow], body_col, lineno, src_pres, &ctx)?;
                let rhs_col = body_col + body[..arrow + 2].chars().count();
                let rhs = expr_at(&body[arrow + 2..], rhs_col, lineno, &file.main, &ctx)?;
                if let TransferDecl::Table(table) = &mut file.transfers[t] {
                    table.maps.push((lhs, rhs));
                }
            }
            other => return perr(lineno, head.col, format!("unknown directive `{other}`")),
        }
    }
    if in_source.is_some() {
        return perr(text.lines().count(), 1, "unterminated `source` block");
    }
    if ctx.field.is_none() && !file.stub {
        return perr(1, 1, "missing `prime`");
    }
    if !have_truncation && !file.stub {
        return perr(1, 1, "missing `truncate`");
    }
    Ok(file)
}
