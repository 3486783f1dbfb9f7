//! Table-verification suites behind `grig verify`.

use grig_core::coset::{coset_of, verify_lift_table, KOracle, KMUL, LIFT, REPRESENTATIVES, SCHREIER};
use grig_core::engine::exact_depth;
use grig_core::wreath::{FiniteGroup, WreathProduct};
use grig_core::{ConjugacyEngine, FiniteQuotient, GrigElement, GrigError, Guards, KMask};
use rayon::prelude::*;
use serde_json::{json, Value};

pub const DEFAULT_WREATH_GROUPS: [&str; 5] = ["C2:C2", "C2:C3", "C4:C2", "S3:C2", "S3:C3"];

fn el(word: &str) -> GrigElement {
    GrigElement::parse(word).expect("built-in word")
}

pub fn passed(report: &Value) -> bool {
    report["passed"].as_bool().unwrap_or(false)
}

pub fn lift_table(guards: &Guards) -> Result<Value, GrigError> {
    let oracle = KOracle::new();
    let q4 = FiniteQuotient::enumerate(4, guards)?;
    let report = verify_lift_table(&q4, &oracle, &LIFT);
    let contradictions: Vec<Value> = report
        .contradictions
        .iter()
        .map(|(j, k, z)| json!({ "pair": [format!("z{j}"), format!("z{k}")], "observed": format!("z{z}") }))
        .collect();
    Ok(json!({
        "suite": "lift-table",
        "passed": report.passed(),
        "summary": report.summary(),
        "entries": report.entries,
        "witnessed": report.witnessed,
        "contradictions": contradictions,
    }))
}

pub fn schreier() -> Value {
    let oracle = KOracle::new();
    let q = oracle.quotient();
    let rep: Vec<u32> = REPRESENTATIVES.iter().map(|w| q.index_of_element(&el(w))).collect();
    let mut mismatches = Vec::new();
    for i in 0..16 {
        for (col, gen) in ["a", "b", "d"].iter().enumerate() {
            let image = oracle.coset_of_index(q.compose(rep[i], q.index_of_element(&el(gen)))).index();
            if image != SCHREIER[i][col] {
                mismatches.push(format!("z{i}·{gen}"));
            }
        }
        for j in 0..16 {
            if oracle.coset_of_index(q.compose(rep[i], rep[j])).index() != KMUL[i][j] {
                mismatches.push(format!("z{i}·z{j}"));
            }
        }
    }
    let walk_ok = (0..q.len() as u32).all(|x| coset_of(&q.word_of(x)) == oracle.coset_of_index(x));
    json!({
        "suite": "schreier",
        "passed": mismatches.is_empty() && walk_ok,
        "cosets": 16,
        "edges_checked": 48,
        "products_checked": 256,
        "walk_matches_quotient": walk_ok,
        "mismatches": mismatches,
    })
}

fn names(mask: KMask) -> Vec<String> {
    mask.iter().map(|c| c.to_string()).collect()
}

pub fn base_cong() -> Value {
    let mut engine = ConjugacyEngine::new(Guards::default());
    let cosets = |words: &[&str]| KMask::from_cosets(words.iter().map(|w| coset_of(&el(w))));
    let expected = [
        ("a", cosets(&["", "a", "dad", "(ad)^2"])),
        ("b", cosets(&["", "b", "c", "d"])),
        ("c", cosets(&["", "b", "c", "d"])),
        ("d", cosets(&["", "b", "c", "d", "ada", "(ad)^2", "bada", "badad"])),
    ];
    let mut ok = true;
    let mut sets = serde_json::Map::new();
    for (g, set) in expected {
        let got = engine.q_exact(&el(g), &el(g)).0;
        ok &= got == set;
        sets.insert(format!("{g},{g}"), json!(names(got)));
    }
    let generators = ["", "a", "b", "c", "d"];
    let mut nonempty = Vec::new();
    for g in generators {
        for h in generators {
            if g != h && !engine.q_exact(&el(g), &el(h)).0.is_empty() {
                nonempty.push(format!("{g},{h}"));
            }
        }
    }
    ok &= nonempty.is_empty();
    json!({ "suite": "base-cong", "passed": ok, "sets": sets, "unexpected_nonempty": nonempty })
}

pub fn q_agreement() -> Result<Value, GrigError> {
    let mut engine = ConjugacyEngine::new(Guards::default());
    let mut check = |words: &[&str], limit: u8| -> Result<(u8, Vec<String>), GrigError> {
        let mut worst = 0;
        let mut over = Vec::new();
        for g in words {
            for h in words {
                let s = engine.stabilization_depth(&el(g), &el(h), 14)?;
                worst = worst.max(s.depth);
                if s.depth > limit || s.depth > exact_depth(&el(g), &el(h)) {
                    over.push(format!("{g},{h}"));
                }
            }
        }
        Ok((worst, over))
    };
    let (gen_depth, gen_over) = check(&["", "a", "b", "c", "d"], 6)?;
    let (short_depth, short_over) = check(&["", "a", "b", "c", "d", "ab", "ac", "ad", "ba", "ca", "da"], 10)?;
    Ok(json!({
        "suite": "q-agreement",
        "passed": gen_over.is_empty() && short_over.is_empty(),
        "generators": { "bound": 6, "max_depth": gen_depth, "violations": gen_over },
        "length_two": { "bound": 10, "max_depth": short_depth, "violations": short_over },
    }))
}

fn wreath_one(label: &str, a: FiniteGroup, b: FiniteGroup, guards: &Guards) -> Result<Value, GrigError> {
    let w = WreathProduct::new(a, b, guards)?;
    let abelian = w.base().is_abelian();
    let per_element: Vec<(bool, bool, bool)> = (0..w.order())
        .into_par_iter()
        .map(|i| {
            let x = w.element(i);
            let brute = w.centralizer_brute(&x);
            let meldrum = w.centralizer_meldrum(&x) == brute;
            if !abelian {
                return (meldrum, true, true);
            }
            let Ok((r, c)) = w.reduce_element(&x) else { return (meldrum, false, false) };
            let ci = w.inv(&c);
            let simplified = w.centralizer_abelian(&r).is_ok_and(|set| {
                set.into_iter()
                    .map(|y| w.index(&w.mul(&w.mul(&c, &w.element(y)), &ci)))
                    .collect::<std::collections::BTreeSet<_>>()
                    == brute
            });
            let structure = r.b == w.top().identity()
                || w.check_centralizer_structure(&r).is_ok_and(|rep| rep.matches && rep.order_identity_holds);
            (meldrum, simplified, structure)
        })
        .collect();
    let count = |f: fn(&(bool, bool, bool)) -> bool| per_element.iter().filter(|t| !f(t)).count();
    let (meldrum_bad, simplified_bad, structure_bad) = (count(|t| t.0), count(|t| t.1), count(|t| t.2));

    let mut projections_bad = 0;
    let mut projections = 0;
    if abelian {
        for normal in w.top().normal_subgroups() {
            let report = w.project_abelian(&normal, guards)?;
            projections += 1;
            if !(report.homomorphism && report.kernel_matches) {
                projections_bad += 1;
            }
        }
    }
    Ok(json!({
        "groups": label,
        "order": w.order(),
        "passed": meldrum_bad + simplified_bad + structure_bad + projections_bad == 0,
        "meldrum_mismatches": meldrum_bad,
        "simplified_mismatches": if abelian { json!(simplified_bad) } else { Value::Null },
        "structure_failures": if abelian { json!(structure_bad) } else { Value::Null },
        "projections_checked": projections,
        "projection_failures": projections_bad,
    }))
}

pub fn wreath(groups: &[String], guards: &Guards) -> Result<Value, GrigError> {
    let mut reports = Vec::new();
    for spec in groups {
        let (a, b) = crate::groups::resolve_pair(spec)?;
        reports.push(wreath_one(spec, a, b, guards)?);
    }
    Ok(json!({ "suite": "wreath", "passed": reports.iter().all(passed), "products": reports }))
}

pub fn all(guards: &Guards) -> Result<Value, GrigError> {
    let groups: Vec<String> = DEFAULT_WREATH_GROUPS.iter().map(|s| s.to_string()).collect();
    let suites = vec![lift_table(guards)?, schreier(), base_cong(), q_agreement()?, wreath(&groups, guards)?];
    Ok(json!({ "suite": "all", "passed": suites.iter().all(passed), "suites": suites }))
}
