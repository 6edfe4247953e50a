//! Route an input document to its engine, and run every cross-check that
//! applies to it.

use crate::abgroup::FinGenAbGroup;
use crate::engines::{
    free_abelian_engine, graph_engine, katsura_engine, multispinal_homology, multispinal_k_engine,
    multispinal_mod2_homology, sunic_orbit_count, Evaluation, KatsuraInput,
};
use crate::error::{Error, Result};
use crate::input::{AutomatonInput, Body, InputDocument};
use crate::linalg::{cokernel, integer_kernel_rank, rank, IntMatrix};
use crate::reference::{closed_form, REFERENCE_ONLY};
use crate::report::{Coefficients, Entry, GradedReport};
use crate::selfsim::{SelfSimilarAction, Word};

/// Homology up to `max_degree` and K-theory where available, with integer
/// coefficients. Entries the engine cannot compute are filled from the
/// document's reference family, if any, and flagged.
pub fn compute(doc: &InputDocument, max_degree: usize) -> Result<GradedReport> {
    let mut r = match &doc.body {
        Body::Automaton(a) => automaton_report(a, max_degree)?,
        Body::Graph(g) => graph_engine(g, max_degree)?,
        Body::Katsura(k) => katsura_engine(k, max_degree)?,
        Body::FreeAbelian { input, checks } => {
            free_abelian_engine(input, *checks, max_degree, Evaluation::Parallel)?.0
        }
        Body::Multispinal(m) => multispinal_homology(m, max_degree)?,
    };
    if let Some(f) = &doc.reference {
        let reference = closed_form(f, max_degree)?;
        let how = format!("reference: {f} closed form ({REFERENCE_ONLY})");
        let mut filled = false;
        for n in 0..=max_degree {
            if let (Some(Entry::Unknown(_)), Some(e @ Entry::Group(_))) = (r.h(n), reference.h(n)) {
                let e = e.clone();
                r.set_h(n, e, &how);
                filled = true;
            }
        }
        if r.k_theory.is_none() {
            if let Some(k) = reference.k_theory {
                r.set_k(k.k0, k.k1, k.unit_class, &how);
                filled = true;
            }
        }
        if filled {
            r.flag(format!(
                "{REFERENCE_ONLY}: some entries transcribed from the {} closed form",
                f.name()
            ));
        }
    }
    Ok(r)
}

/// As [`compute`], then change coefficients. Over F_2 a multispinal input
/// with `B = (Z/2)^2` is computed directly rather than through the
/// universal coefficient theorem.
pub fn compute_with(
    doc: &InputDocument,
    max_degree: usize,
    coefficients: Coefficients,
) -> Result<GradedReport> {
    let integral = compute(doc, max_degree)?;
    if let (Coefficients::Prime(2), Body::Multispinal(m)) = (coefficients, &doc.body) {
        if m.modulus == 2 && m.rank == 2 {
            let mut r = multispinal_mod2_homology(m, max_degree)?;
            let via_uct = integral.with_coefficients(coefficients);
            if let Some(k) = &via_uct.k_theory {
                let how = via_uct.provenance_of("K0").unwrap_or("unspecified");
                r.set_k(k.k0.clone(), k.k1.clone(), None, how);
            }
            return Ok(r);
        }
    }
    Ok(integral.with_coefficients(coefficients))
}

fn automaton_report(a: &AutomatonInput, max_degree: usize) -> Result<GradedReport> {
    let act = &a.action;
    if !act.is_transitive() {
        return Err(Error::NotTransitive {
            orbits: act.orbits().len(),
        });
    }
    let Some(ab) = &a.abelianization else {
        let mut r = GradedReport::default();
        r.set_h(
            0,
            FinGenAbGroup::cyclic(act.degree() as i64 - 1),
            "automaton: Z/(|X|-1)",
        );
        for n in 1..=max_degree {
            r.set_h(
                n,
                Entry::Unknown("abelianization not supplied".into()),
                "automaton: not computed",
            );
        }
        return Ok(r);
    };
    let mut r = act.degree01_homology(ab, a.assume, max_degree)?;
    if a.assume.free_group_mode {
        let k = act.degree01_ktheory_free_group(ab, a.assume)?;
        if let Some(kt) = &k.k_theory {
            let how = k.provenance_of("K0").unwrap_or("automaton");
            r.set_k(kt.k0.clone(), kt.k1.clone(), kt.unit_class.clone(), how);
        }
        for f in k.flags.clone() {
            r.flag(f);
        }
    }
    Ok(r)
}

/// One cross-validation and whether it held.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Run every applicable cross-validation. Strings up to `word_length` are
/// used for the cocycle identities of automata.
pub fn check(
    doc: &InputDocument,
    max_degree: usize,
    word_length: usize,
) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let report = compute(doc, max_degree)?;

    let round = GradedReport::from_json(&report.to_json()).map(|r| r.to_json_string());
    out.push(CheckOutcome::new(
        "report JSON round trip",
        round.as_ref().is_ok_and(|s| *s == report.to_json_string()),
        "",
    ));

    match &doc.body {
        Body::Automaton(a) => {
            out.extend(cocycle_checks(&a.action, word_length));
            if let Some(ab) = &a.abelianization {
                let direct = a.action.phi1(ab)?;
                for x in 0..a.action.degree() {
                    let via = a.action.phi1_via_transfer(ab, x)?;
                    // Both must agree as maps, i.e. differ by relations.
                    let diff = direct.sub(&via)?;
                    let agree = (0..diff.matrix.cols())
                        .all(|j| ab.presentation.is_relation(&diff.matrix.column(j)));
                    out.push(CheckOutcome::new(
                        format!("phi1 from sections equals transfer at letter {x}"),
                        agree,
                        "",
                    ));
                }
            }
        }
        Body::Graph(g) => {
            let m = g.boundary();
            out.push(second_path("graph", &m, &report));
            let n = g.adjacency.rows();
            let k = KatsuraInput::new(g.adjacency.clone(), IntMatrix::zeros(n, n))?;
            if g.regular == k.nonzero_rows() {
                let kr = katsura_engine(&k, 0)?;
                out.push(CheckOutcome::new(
                    "H0 agrees with the Katsura engine at B = 0",
                    kr.h(0) == report.h(0),
                    "",
                ));
            }
        }
        Body::Katsura(k) => {
            let (da, db) = k.boundaries();
            let h1 = FinGenAbGroup::free(integer_kernel_rank(&da))
                .direct_sum(&cokernel_by_transpose(&db));
            out.push(CheckOutcome::new(
                "H1 recomputed through transposes",
                report.h_group(1).is_none_or(|g| *g == h1),
                format!("{h1}"),
            ));
        }
        Body::FreeAbelian { input, checks } => {
            let seq = free_abelian_engine(input, *checks, max_degree, Evaluation::Sequential)?.0;
            let par = free_abelian_engine(input, *checks, max_degree, Evaluation::Parallel)?.0;
            out.push(CheckOutcome::new(
                "parallel and sequential evaluation agree",
                seq.to_json_string() == par.to_json_string(),
                "",
            ));
        }
        Body::Multispinal(m) => {
            if m.automorphisms().len() == 1 {
                let k = multispinal_k_engine(m)?;
                let orbits = sunic_orbit_count(m)?;
                let k1_rank = k.k1.group().map(FinGenAbGroup::free_rank);
                out.push(CheckOutcome::new(
                    "orbit count equals rank of K1",
                    k1_rank == Some(orbits),
                    format!("{orbits} orbits"),
                ));
            }
            if m.modulus == 2 && m.rank == 2 {
                let direct = multispinal_mod2_homology(m, max_degree)?;
                let uct = report.with_coefficients(Coefficients::Prime(2));
                let agree = (0..=max_degree).all(|n| match (uct.h_group(n), direct.h_group(n)) {
                    (Some(a), Some(b)) => a == b,
                    _ => true,
                });
                out.push(CheckOutcome::new(
                    "mod-2 homology agrees with universal coefficients",
                    agree,
                    "",
                ));
            }
        }
    }

    if let Some(f) = &doc.reference {
        let reference = closed_form(f, max_degree)?;
        let mut bad = Vec::new();
        for n in 0..=max_degree {
            if let (Some(a), Some(b)) = (report.h_group(n), reference.h_group(n)) {
                if a != b {
                    bad.push(format!("H{n}: computed {a}, closed form {b}"));
                }
            }
        }
        if let (Some(a), Some(b)) = (&report.k_theory, &reference.k_theory) {
            for (name, x, y) in [("K0", &a.k0, &b.k0), ("K1", &a.k1, &b.k1)] {
                if let (Some(x), Some(y)) = (x.group(), y.group()) {
                    if x != y {
                        bad.push(format!("{name}: computed {x}, closed form {y}"));
                    }
                }
            }
            if let (Some(u), Some(v)) = (&a.unit_class, &b.unit_class) {
                if u != v {
                    bad.push(format!("unit: computed {u}, closed form {v}"));
                }
            }
        }
        out.push(CheckOutcome::new(
            format!("agrees with the {f} closed form"),
            bad.is_empty(),
            bad.join("; "),
        ));
    }
    Ok(out)
}

/// `coker` through the transpose: same torsion, free rank `rows - rank`.
pub fn cokernel_by_transpose(m: &IntMatrix) -> FinGenAbGroup {
    let t = cokernel(&m.transpose());
    FinGenAbGroup::from_invariants(t.torsion().iter().cloned(), m.rows() - rank(m))
}

fn second_path(label: &str, m: &IntMatrix, report: &GradedReport) -> CheckOutcome {
    let h0 = cokernel_by_transpose(m);
    let h1 = FinGenAbGroup::free(m.cols() - rank(m));
    let ok = report.h_group(0) == Some(&h0) && report.h_group(1).is_none_or(|g| *g == h1);
    CheckOutcome::new(
        format!("{label}: H0 and H1 recomputed through the transpose"),
        ok,
        format!("{h0}, {h1}"),
    )
}

/// All strings over the alphabet of length at most `n`.
pub fn strings_up_to(d: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..n {
        layer = layer
            .iter()
            .flat_map(|s: &Vec<usize>| {
                (0..d).map(move |x| {
                    let mut t = s.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// `(gh)(w) = g(h(w))`, `(gh)|_w = g|_{h(w)} h|_w`, and `g^-1 g` acting
/// trivially with trivial section, for generators `g, h` and strings `w`.
pub fn cocycle_checks(act: &SelfSimilarAction, max_len: usize) -> Vec<CheckOutcome> {
    let gens = act.generators();
    let letters: Vec<Word> = (0..act.num_generators()).map(|g| gens.letter(g)).collect();
    let strings = strings_up_to(act.degree(), max_len);
    let mut composition = true;
    let mut inverses = true;
    for g in &letters {
        for h in &letters {
            let gh = gens.mul(g, h);
            for w in &strings {
                let (hw, h_sec) = act.act(h, w);
                let (ghw, g_sec) = act.act(g, &hw);
                let (direct, gh_sec) = act.act(&gh, w);
                if direct != ghw || gh_sec != gens.mul(&g_sec, &h_sec) {
                    composition = false;
                }
            }
        }
        let ginv = gens.inverse(g);
        for w in &strings {
            let (gw, _) = act.act(g, w);
            let (back, _) = act.act(&ginv, &gw);
            let sec = gens.mul(&act.section(&ginv, &gw), &act.section(g, w));
            if back != *w || !sec.is_identity() {
                inverses = false;
            }
        }
    }
    vec![
        CheckOutcome::new(
            format!("cocycle identity on strings of length <= {max_len}"),
            composition,
            "",
        ),
        CheckOutcome::new(
            format!("inverse identity on strings of length <= {max_len}"),
            inverses,
            "",
        ),
    ]
}
