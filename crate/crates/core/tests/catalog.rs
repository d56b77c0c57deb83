use coniveau::catalog::{is_catalog_id, list_ids, load_entry, resolve, validate_entry, zp_text};
use coniveau::Error;

#[test]
fn every_modeled_entry_validates() {
    for id in ["Zp^1@p=2", "Zp^2@p=3", "Zp^3@p=3", "Zp^3@p=2:10", "Q8", "D8", "SO3", "G2", "PGLp@p=3"] {
        let e = load_entry(id).unwrap();
        for c in validate_entry(&e).unwrap() {
            assert!(c.passed, "{id}: {} {}", c.name, c.detail);
        }
    }
}

#[test]
fn stubs_carry_verdicts() {
    for id in ["E", "M"] {
        let e = load_entry(id).unwrap();
        assert!(e.is_stub());
        assert!(!e.verdicts().is_empty());
        let checks = validate_entry(&e).unwrap();
        assert!(checks.iter().all(|c| c.passed));
    }
}

#[test]
fn ids_and_errors() {
    assert!(list_ids().iter().filter(|i| !i.contains("^n")).all(|i| is_catalog_id(i)));
    assert!(matches!(load_entry("Zp^0@p=3"), Err(Error::Presentation(_))));
    assert!(load_entry("Zp^2@p=4").unwrap_err().is_input_error());
    assert!(matches!(resolve("/no/such/file.pres"), Err(Error::UnknownEntry(_))));
    assert!(matches!(load_entry("G3"), Err(Error::UnknownEntry(_))));
}

#[test]
fn generated_text_declares_lens_transfers() {
    let t = zp_text(2, 3, 12);
    assert!(t.contains("transfer divisor name=f1 euler=y1 kill=y1^6"));
    let e = load_entry("Zp^2@p=3").unwrap();
    assert_eq!(e.transfers().len(), 2);
    assert!(e.meta().abelian_sylow && e.meta().all_torsion && e.meta().weight_exact);
}
