//! Every family with an engine path gives the same answer as its closed form.

use selfsim_homology::engines::{
    free_abelian_engine, graph_engine, grigorchuk_homology, katsura_engine, multispinal_homology,
    multispinal_k_engine, sausage_matrix, Evaluation, FreeAbelianInput, GraphInput, KatsuraInput,
    MultispinalInput, PhiEntry,
};
use selfsim_homology::linalg::IntMatrix;
use selfsim_homology::reference::{closed_form, FamilySpec};
use selfsim_homology::report::{Entry, GradedReport};

fn family(name: &str, params: &[i64]) -> FamilySpec {
    FamilySpec::new(name, params).unwrap()
}

fn assert_h_agree(engine: &GradedReport, reference: &GradedReport, max: usize, what: &str) {
    for n in 0..=max {
        let want = reference.h(n).unwrap();
        assert!(
            matches!(want, Entry::Group(_)),
            "{what}: closed form has no H_{n}"
        );
        assert_eq!(engine.h(n), Some(want), "{what}: H_{n}");
    }
}

fn assert_k_agree(engine: &GradedReport, reference: &GradedReport, what: &str) {
    let (e, r) = (
        engine.k_theory.as_ref().unwrap(),
        reference.k_theory.as_ref().unwrap(),
    );
    assert_eq!(e.k0, r.k0, "{what}: K_0");
    assert_eq!(e.k1, r.k1, "{what}: K_1");
    if r.unit_class.is_some() {
        assert_eq!(e.unit_class, r.unit_class, "{what}: unit");
    }
}

#[test]
fn grigorchuk() {
    let reference = closed_form(&FamilySpec::Grigorchuk, 30).unwrap();
    for n in 0..=30 {
        let d = grigorchuk_homology(n).unwrap();
        assert_eq!(Some(&Entry::Group(d.group)), reference.h(n), "H_{n}");
    }
    let m = MultispinalInput::new(
        2,
        2,
        2,
        vec![
            PhiEntry::Hom(IntMatrix::from_i64(&[[0, 1]])),
            PhiEntry::Aut(IntMatrix::from_i64(&[[0, 1], [1, 1]])),
        ],
    )
    .unwrap();
    let k = GradedReport {
        k_theory: Some(multispinal_k_engine(&m).unwrap()),
        ..Default::default()
    };
    assert_k_agree(&k, &reference, "grigorchuk");
}

#[test]
fn ggs() {
    for m in [2usize, 3, 5, 7] {
        let mut e = vec![0i64; m - 1];
        e[0] = 1;
        let input = MultispinalInput::ggs(m, &e).unwrap();
        let r = multispinal_homology(&input, 10).unwrap();
        let reference = closed_form(&family("ggs", &[m as i64]), 10).unwrap();
        assert_h_agree(&r, &reference, 10, &format!("ggs({m})"));
        assert_k_agree(&r, &reference, &format!("ggs({m})"));
    }
}

#[test]
fn sunic_k_theory() {
    for (p, f) in [
        (2u64, vec![1u64, 1, 1]),
        (2, vec![1, 1, 0, 1]),
        (2, vec![1, 0, 1, 1]),
        (3, vec![1, 1]),
    ] {
        let m = MultispinalInput::sunic(p, &f).unwrap();
        let k = GradedReport {
            k_theory: Some(multispinal_k_engine(&m).unwrap()),
            ..Default::default()
        };
        let reference = closed_form(
            &family("sunic_primitive", &[p as i64, f.len() as i64 - 1]),
            1,
        )
        .unwrap();
        assert_k_agree(&k, &reference, &format!("sunic({p}, {f:?})"));
    }
}

#[test]
fn grigorchuk_erschler_k_theory() {
    let m = MultispinalInput::new(
        2,
        2,
        2,
        vec![
            PhiEntry::Hom(IntMatrix::from_i64(&[[0, 1]])),
            PhiEntry::Aut(IntMatrix::from_i64(&[[0, 1], [1, 0]])),
        ],
    )
    .unwrap();
    let k = GradedReport {
        k_theory: Some(multispinal_k_engine(&m).unwrap()),
        ..Default::default()
    };
    assert_k_agree(
        &k,
        &closed_form(&FamilySpec::GrigorchukErschler, 1).unwrap(),
        "grigorchuk_erschler",
    );
}

#[test]
fn sausage() {
    for n in [2usize, 3, 5] {
        let f = FreeAbelianInput::new(sausage_matrix(n), 2).unwrap();
        let (r, c) = free_abelian_engine(&f, true, n + 3, Evaluation::Sequential).unwrap();
        assert!(
            c.unwrap().applied,
            "sausage({n}) should be contracting and self-replicating"
        );
        let reference = closed_form(&family("sausage", &[n as i64]), n + 3).unwrap();
        assert_h_agree(&r, &reference, n + 3, &format!("sausage({n})"));
        assert_k_agree(&r, &reference, &format!("sausage({n})"));
    }
}

#[test]
fn graphs() {
    for d in 1..=6i64 {
        let g = GraphInput::new(IntMatrix::from_i64(&[[d]]), None).unwrap();
        let r = graph_engine(&g, 3).unwrap();
        let reference = closed_form(&family("graph_bouquet", &[d]), 3).unwrap();
        assert_h_agree(&r, &reference, 3, &format!("bouquet({d})"));
        assert_k_agree(&r, &reference, &format!("bouquet({d})"));
    }
    for n in 1..=5usize {
        let mut a = IntMatrix::zeros(n, n);
        for i in 0..n {
            a[(i, (i + 1) % n)] = 1.into();
        }
        let r = graph_engine(&GraphInput::new(a, None).unwrap(), 3).unwrap();
        let reference = closed_form(&family("graph_cycle", &[n as i64]), 3).unwrap();
        assert_h_agree(&r, &reference, 3, &format!("cycle({n})"));
        assert_k_agree(&r, &reference, &format!("cycle({n})"));
    }
}

#[test]
fn katsura() {
    for (a, b) in [
        (0i64, 0i64),
        (1, 0),
        (1, 1),
        (2, 1),
        (2, 0),
        (3, -1),
        (4, 3),
        (5, 2),
        (6, 7),
    ] {
        let k =
            KatsuraInput::new(IntMatrix::from_i64(&[[a]]), IntMatrix::from_i64(&[[b]])).unwrap();
        let r = katsura_engine(&k, 4).unwrap();
        let reference = closed_form(&family("katsura", &[a, b]), 4).unwrap();
        assert_h_agree(&r, &reference, 4, &format!("katsura({a}, {b})"));
        assert_k_agree(&r, &reference, &format!("katsura({a}, {b})"));
    }
}
