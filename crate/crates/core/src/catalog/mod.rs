//! Built-in entries. Presentation files are embedded at build time; setting
//! `CONIVEAU_CATALOG_DIR` makes the loader prefer files found there.
//! Elementary abelian entries are generated from their parameters.

mod validate;

pub use validate::validate_entry;

use std::fmt::Write as _;
use std::path::Path;

use crate::entry::Entry;
use crate::error::{Error, Result};

pub const CATALOG_DIR_ENV: &str = "CONIVEAU_CATALOG_DIR";

/// Default truncation for generated elementary abelian entries.
pub const ZP_DEFAULT_TRUNCATION: u32 = 12;

const BUILTIN: &[(&str, &str, &str)] = &[
    ("Q8", "q8.pres", include_str!("../../catalog/q8.pres")),
    ("D8", "d8.pres", include_str!("../../catalog/d8.pres")),
    ("SO3", "so3.pres", include_str!("../../catalog/so3.pres")),
    ("G2", "g2.pres", include_str!("../../catalog/g2.pres")),
    ("PGLp@p=3", "pgl3.pres", include_str!("../../catalog/pgl3.pres")),
    ("E", "e.pres", include_str!("../../catalog/e.pres")),
    ("M", "m.pres", include_str!("../../catalog/m.pres")),
];

/// Catalog ids in listing order. `Zp^n@p=P` accepts any `n >= 1` and
/// prime `P`, with an optional `:N` truncation suffix.
pub fn list_ids() -> Vec<String> {
    let mut ids = vec!["Zp^n@p=P".to_string(), "Zp^3@p=3".to_string()];
    ids.extend(BUILTIN.iter().map(|(id, _, _)| id.to_string()));
    ids
}

/// Parse `Zp^n@p=P[:N]`.
pub fn parse_zp_id(id: &str) -> Option<(u32, u32, u32)> {
    let rest = id.strip_prefix("Zp^")?;
    let (n, rest) = rest.split_once("@p=")?;
    let (p, trunc) = match rest.split_once(':') {
        Some((p, t)) => (p, t.parse().ok()?),
        None => (rest, ZP_DEFAULT_TRUNCATION),
    };
    Some((n.parse().ok()?, p.parse().ok()?, trunc))
}

/// Presentation text of `H^*(B(Z/p)^n; Z/p)` truncated at `truncation`,
/// with the lens-space divisor transfers `f_i`.
pub fn zp_text(n: u32, p: u32, truncation: u32) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "group (Z/{p})^{n}\nprime {p}\ntruncate {truncation}");
    for i in 1..=n {
        let _ = writeln!(t, "gen y{i} deg=2 kind=poly weight=1 chow integral");
    }
    let kind = if p == 2 { "poly" } else { "ext" };
    for i in 1..=n {
        let _ = writeln!(t, "gen x{i} deg=1 kind={kind} weight=1");
    }
    if p == 2 {
        for i in 1..=n {
            let _ = writeln!(t, "rel x{i}^2 - y{i}");
        }
    }
    for i in 1..=n {
        let _ = writeln!(t, "q 0 y{i} = 0\nq 0 x{i} = y{i}");
        for k in 1..=2u32 {
            let _ = writeln!(t, "q {k} y{i} = 0\nq {k} x{i} = y{i}^{}", p.pow(k));
        }
    }
    let _ = writeln!(t, "all_torsion\nweight_exact\nabelian_sylow");
    let _ = writeln!(t, "cite \"H*(B(Z/p)^n; Z/p) = Z/p[y_1..y_n] (x) Lambda(x_1..x_n) for odd p\"");
    let kill = truncation / 2;
    for i in 1..=n {
        let _ = writeln!(t, "transfer divisor name=f{i} euler=y{i} kill=y{i}^{kill}");
    }
    t
}

pub fn zp_entry(n: u32, p: u32, truncation: u32) -> Result<Entry> {
    if n == 0 {
        return Err(Error::Presentation("elementary abelian rank must be positive".into()));
    }
    Entry::from_text(&format!("Zp^{n}@p={p}:{truncation}"), &zp_text(n, p, truncation))
}

fn builtin_text(id: &str) -> Option<String> {
    let (_, file, text) = BUILTIN.iter().find(|(i, _, _)| *i == id)?;
    if let Ok(dir) = std::env::var(CATALOG_DIR_ENV) {
        if let Ok(s) = std::fs::read_to_string(Path::new(&dir).join(file)) {
            return Some(s);
        }
    }
    Some(text.to_string())
}

pub fn is_catalog_id(id: &str) -> bool {
    parse_zp_id(id).is_some() || BUILTIN.iter().any(|(i, _, _)| *i == id)
}

pub fn load_entry(id: &str) -> Result<Entry> {
    if let Some((n, p, trunc)) = parse_zp_id(id) {
        let mut e = zp_entry(n, p, trunc)?;
        e.id = id.to_string();
        return Ok(e);
    }
    match builtin_text(id) {
        Some(text) => Entry::from_text(id, &text),
        None => Err(Error::UnknownEntry(id.to_string())),
    }
}

pub fn load_path(path: &Path) -> Result<Entry> {
    let text = std::fs::read_to_string(path)?;
    Entry::from_text(&path.display().to_string(), &text)
}

/// A catalog id, or else a path to a presentation file.
pub fn resolve(spec: &str) -> Result<Entry> {
    if is_catalog_id(spec) {
        return load_entry(spec);
    }
    let path = Path::new(spec);
    if path.is_file() {
        return load_path(path);
    }
    Err(Error::UnknownEntry(spec.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zp_ids_parse() {
        assert_eq!(parse_zp_id("Zp^3@p=3"), Some((3, 3, 12)));
        assert_eq!(parse_zp_id("Zp^2@p=2:20"), Some((2, 2, 20)));
        assert_eq!(parse_zp_id("Zp^x@p=3"), None);
        assert!(matches!(load_entry("nope"), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn every_builtin_loads_and_validates() {
        for (id, _, _) in BUILTIN {
            let e = load_entry(id).unwrap_or_else(|err| panic!("{id}: {err}"));
            if e.is_stub() {
                assert!(!e.verdicts().is_empty());
                continue;
            }
            for c in e.ops().unwrap().validate() {
                assert!(c.passed, "{id}: {} {}", c.name, c.detail);
            }
        }
    }

    #[test]
    fn q8_low_degrees() {
        let e = load_entry("Q8").unwrap();
        let alg = e.algebra().unwrap();
        assert_eq!(&alg.dims()[..9], &[1, 2, 2, 1, 1, 2, 2, 1, 1]);
    }
}
