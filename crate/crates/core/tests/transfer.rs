use coniveau::catalog::{load_entry, zp_entry};
use coniveau::fplinalg::Subspace;
use coniveau::gralg::Element;
use coniveau::transfer::{check_frobenius, check_grothendieck, TransferModel};

fn divisor(t: &TransferModel) -> &coniveau::transfer::DivisorModel {
    match t {
        TransferModel::Divisor(d) => d,
        TransferModel::Table(_) => panic!("expected a divisor model"),
    }
}

#[test]
fn lens_transfers_of_unit_and_zero() {
    let e = zp_entry(3, 3, 12).unwrap();
    let a = e.ops().unwrap();
    for (i, t) in e.transfers().iter().enumerate() {
        let one = t.source().algebra().one();
        let y = a.algebra().parse(&format!("y{}", i + 1)).unwrap();
        assert_eq!(t.apply(a, &one).unwrap().value, y);
        assert!(t.apply(a, &Element::zero()).unwrap().value.is_zero());
    }
}

#[test]
fn alpha_as_a_sum_of_lens_transfers() {
    for p in [2, 3] {
        let e = zp_entry(3, p, 12).unwrap();
        let a = e.ops().unwrap();
        let alg = a.algebra();
        let f = alg.field();
        let mut sum = Element::zero();
        let mut q1_src = Element::zero();
        for (name, z) in [("f1", "x2*x3"), ("f2", "x3*x1"), ("f3", "x1*x2")] {
            let t = e.transfer(name).unwrap();
            let src = t.source();
            let z = src.algebra().parse(z).unwrap();
            sum = sum.plus(&t.apply(a, &z).unwrap().value, f);
            q1_src = q1_src.plus(&t.apply(a, &src.apply_q(1, &z).unwrap().value).unwrap().value, f);
        }
        let alpha = alg.parse("y1*x2*x3 + y2*x3*x1 + y3*x1*x2").unwrap();
        assert_eq!(sum, alpha, "p = {p}");
        assert_eq!(q1_src, a.apply_q(1, &alpha).unwrap().value, "p = {p}");
    }
}

#[test]
fn frobenius_instance_and_exhaustive() {
    let e = zp_entry(3, 3, 8).unwrap();
    let a = e.ops().unwrap();
    let f1 = divisor(&e.transfers()[0]);
    let y2 = a.algebra().parse("y2").unwrap();
    let lhs = f1.apply(a, &f1.restrict(&y2)).value;
    assert_eq!(lhs, a.algebra().parse("y1*y2").unwrap());
    let r = check_frobenius(a, f1, 8).unwrap();
    assert!(r.passed() && r.checked > 0, "{:?}", r.failures.first());
}

#[test]
fn grothendieck_on_the_single_lens() {
    let e = zp_entry(1, 3, 10).unwrap();
    let a = e.ops().unwrap();
    let f1 = divisor(&e.transfers()[0]);
    // x = 1: P^1(y) = y^3 = f_*(y^2)
    let y = a.algebra().parse("y1").unwrap();
    assert_eq!(a.apply_power(1, &y).unwrap().value, a.algebra().parse("y1^3").unwrap());
    let y2 = f1.source().algebra().parse("y1^2").unwrap();
    assert_eq!(f1.apply(a, &y2).value, a.algebra().parse("y1^3").unwrap());
    let r = check_grothendieck(a, f1).unwrap();
    assert!(r.passed() && r.checked > 0);
}

#[test]
fn qn_commutation_on_divisor_models() {
    let e = zp_entry(2, 2, 12).unwrap();
    let a = e.ops().unwrap();
    for t in e.transfers() {
        for n in 0..=2 {
            let r = t.check_qn_commutation(a, n).unwrap();
            assert!(r.passed(), "{} {}: {:?}", r.model, r.law, r.failures.first());
        }
    }
}

#[test]
fn d8_tables() {
    let e = load_entry("D8").unwrap();
    let a = e.ops().unwrap();
    let alg = a.algebra();
    for (j, name) in [(1, "i1"), (2, "i2")] {
        let t = e.transfer(name).unwrap();
        let s = t.source().algebra();
        let z = s.parse("z").unwrap();
        assert_eq!(t.apply(a, &z).unwrap().value, alg.parse(&format!("x{j}*u")).unwrap());
        assert_eq!(t.apply(a, &s.one()).unwrap().value, alg.parse(&format!("y{j}")).unwrap());
        match t {
            TransferModel::Table(tm) => assert!(tm.check_consistency(a).unwrap().passed()),
            TransferModel::Divisor(_) => unreachable!(),
        }
        for n in 0..=1 {
            let r = t.check_qn_commutation(a, n).unwrap();
            assert!(r.passed() && r.checked > 0, "{name}: {:?}", r.failures.first());
        }
    }
}

#[test]
fn d8_transfer_sum_is_injective_above_degree_four() {
    let e = load_entry("D8").unwrap();
    let a = e.ops().unwrap();
    let alg = a.algebra();
    let (i1, i2) = (e.transfer("i1").unwrap(), e.transfer("i2").unwrap());
    for td in 5..=alg.truncation() {
        let sd = td - 2;
        let amb = alg.ideal_span(i1.modulo(), td).unwrap();
        let mut img = amb.clone();
        let mut source_dim = 0;
        for t in [i1, i2] {
            let salg = t.source().algebra();
            let full = Subspace::full(salg.field(), salg.dim(sd));
            for v in full.basis() {
                let z = salg.from_coords(sd, v);
                img.insert(&alg.coords(&t.apply(a, &z).unwrap().value, td));
            }
            source_dim += salg.dim(sd);
        }
        assert_eq!(img.dim() - amb.dim(), source_dim, "target degree {td}");
    }
}
