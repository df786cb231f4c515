//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fail.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use factor_mobius::alphabet::{parse_alphabet, AlphabetPoset};
use factor_mobius::chains::{bracketed_id, classify_steps, StepKind};
use factor_mobius::formulas::{coefficient_table, mu_formula, nu};
use factor_mobius::interval::{mobius_recursive, Interval};
use factor_mobius::morse::{
    analysed_chains, build_matching, critical_chains, homotopy_report, mobius_via_critical, validate_matching,
    HomotopyType, Msi,
};
use factor_mobius::verify::{sweep, SweepConfig, SweepSummary};
use factor_mobius::words::{bases, primary_prefix, principal_factors, principal_factors_of_degree, parse_word, render_word, PrincipalFactor, Word};

type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Check {
    ensure(got == want, || format!("{what}: got {got:?}, want {want:?}"))
}

fn word(a: &AlphabetPoset, s: &str) -> Word {
    parse_word(a, s).expect("word literal")
}

fn interval<'a>(a: &'a AlphabetPoset, u: &str, w: &str) -> Interval<'a> {
    Interval::new(a, &word(a, u), &word(a, w)).expect("comparable")
}

fn ab() -> AlphabetPoset {
    parse_alphabet("antichain:a,b").unwrap()
}

/// Bracketed chain ids for `I(C)` and for `J(C)`, plus the interval sets.
type Row = (String, String, Vec<(String, String)>, Vec<(String, String)>);

fn bracket_rows(iv: &Interval) -> Vec<Row> {
    let words = |c: &factor_mobius::chains::MaximalChain, r: &[(usize, usize)]| -> Vec<(String, String)> {
        r.iter()
            .map(|&(x, y)| (render_word(iv.alpha, iv.word(c.ids[x])), render_word(iv.alpha, iv.word(c.ids[y]))))
            .collect()
    };
    analysed_chains(iv, 10_000)
        .unwrap()
        .into_iter()
        .map(|(c, msis, j)| {
            let i: Vec<(usize, usize)> = msis.iter().map(Msi::vertex_range).collect();
            let jr = j.ranges();
            (bracketed_id(&c, &i), bracketed_id(&c, &jr), words(&c, &i), words(&c, &jr))
        })
        .collect()
}

fn pairs(v: &[(&str, &str)]) -> Vec<(String, String)> {
    v.iter().map(|(x, y)| (x.to_string(), y.to_string())).collect()
}

fn criterion_1() -> Check {
    let a = ab();
    let want = [
        ("b", 1), ("ab", -1), ("bb", -1), ("ba", -1), ("abb", 1),
        ("bab", 1), ("bba", 1), ("babb", 0), ("bbab", 0), ("bbabb", -1),
    ];
    let iv = interval(&a, "b", "bbabb");
    eq("interval size", iv.len(), 10)?;
    let b = word(&a, "b");
    for (v, mu) in want {
        let v = word(&a, v);
        let sub = Interval::new(&a, &b, &v).unwrap();
        let got = [
            mobius_recursive(&a, &b, &v).unwrap(),
            sub.euler_characteristic(),
            mobius_via_critical(&sub),
            mu_formula(&a, &b, &v).unwrap(),
        ];
        eq(&format!("mu(b,{}) by recursion/euler/critical/formula", render_word(&a, &v)), got, [mu; 4])?;
    }
    Ok(())
}

fn criterion_2() -> Check {
    let a = ab();
    let rows = bracket_rows(&interval(&a, "b", "bbabb"));
    let ids: Vec<&str> = rows.iter().map(|r| r.0.as_str()).collect();
    eq(
        "bracketed chain ids",
        ids,
        vec!["1-2-3-4", "1-2-5[-]3", "1-5[-]2-3", "1-5-4[-]3", "5[-]1-2-3", "5[-]1-4[-]3", "5-4[-]1-3", "5[-4-]3[-]1"],
    )?;
    let msis: Vec<Vec<(String, String)>> = rows.iter().map(|r| r.2.clone()).collect();
    eq(
        "MSI intervals",
        msis,
        vec![
            vec![],
            pairs(&[("ab", "ab")]),
            pairs(&[("bab", "bab")]),
            pairs(&[("ba", "ba")]),
            pairs(&[("bbab", "bbab")]),
            pairs(&[("bbab", "bbab"), ("ba", "ba")]),
            pairs(&[("bba", "bba")]),
            pairs(&[("bbab", "bba"), ("bb", "bb")]),
        ],
    )
}

fn criterion_3() -> Check {
    let a = ab();
    let iv = interval(&a, "a", "abbabb");
    let rows = bracket_rows(&iv);
    eq("chain count", rows.len(), 11)?;
    let ids: Vec<&str> = rows.iter().map(|r| r.0.as_str()).collect();
    eq(
        "bracketed chain ids",
        ids,
        vec![
            "1-2-3-6-5", "1-2-6[-]3-5", "1-2-6-5[-]3", "1-6[-]2-3-5", "1-6[-]2-5[-]3", "1-6-5[-]2-3",
            "6[-]1-2-3-5", "6[-]1-2-5[-]3", "6[-]1-5[-]2-3", "6-5[-]1-2-3", "6[-5[-]4[-]3-]2",
        ],
    )?;
    let last = rows.last().unwrap();
    eq("I(C) of 6-5-4-3-2", last.2.clone(), pairs(&[("abbab", "abba"), ("abba", "abb"), ("abb", "ab")]))?;
    eq("J(C) of 6-5-4-3-2", last.3.clone(), pairs(&[("abbab", "abba"), ("abb", "abb")]))?;
    eq("J-bracketed id", last.1.as_str(), "6[-5-]4[-]3-2")?;
    for r in &rows[..rows.len() - 1] {
        eq("J(C) equals I(C)", &r.3, &r.2)?;
    }
    eq("critical chains", critical_chains(&iv).len(), 0)?;
    eq("mu", mobius_recursive(&a, &word(&a, "a"), &word(&a, "abbabb")).unwrap(), 0)
}

fn criterion_4() -> Check {
    let c = parse_alphabet("chain:3").unwrap();
    let rows = bracket_rows(&interval(&c, "2", "2212"));
    eq("chain count", rows.len(), 17)?;
    let ids: Vec<&str> = rows.iter().map(|r| r.0.as_str()).collect();
    eq(
        "I-bracketed chain ids",
        ids,
        vec![
            "1-1-2-2-3", "1-1-4[-4-]3", "1-2[-]1-2-3", "1-4[-]1-4-3", "1-4-4[-]1-3", "1-4[-4-]3[-]1",
            "2[-]1-1-2-3", "2[-4[-]4-3-]2", "4[-]1-1-4-3", "4[-]1-4[-]1-3", "4[-]1-4-3[-]1", "4[-]2[-]4-3-2",
            "4-4[-]1-1-3", "4-4[-]1-3[-]1", "4-4[-]2[-]3-2", "4-4-3[-]1-1", "4-4-3[-]2[-]2",
        ],
    )?;
    let differing: Vec<(&str, &str)> = rows.iter().filter(|r| r.2 != r.3).map(|r| (r.0.as_str(), r.1.as_str())).collect();
    eq("chains whose J(C) differs from I(C)", differing, vec![("2[-4[-]4-3-]2", "2[-4-]4[-3-]2")])
}

fn criterion_5() -> Check {
    let c = parse_alphabet("chain:3").unwrap();
    let w = |s: &str| word(&c, s);
    for (u, v, mu) in [("121", "1221", 3), ("2", "2212", -1), ("2", "3121", 0), ("3", "33133", 3)] {
        eq(&format!("mu_formula({u},{v})"), mu_formula(&c, &w(u), &w(v)).unwrap(), mu)?;
        eq(&format!("mobius_recursive({u},{v})"), mobius_recursive(&c, &w(u), &w(v)).unwrap(), mu)?;
    }
    let t = coefficient_table(&c, &w("121"), &w("1221")).unwrap();
    eq("d for (121,1221)", t.descent.d, 2)?;
    eq("nu(121,121)", nu(&c, &w("121"), &w("121")), 1)?;
    let t = coefficient_table(&c, &w("2"), &w("2212")).unwrap();
    eq("d for (2,2212)", t.descent.d, 0)?;
    let first = &t.triples[0];
    eq("degree-0 principal factor", (first.degree, first.principal_factor.clone(), first.primary_prefix.clone()), (0, w("211"), Some(w("2"))))?;
    let term = nu(&c, &w("2"), &w("211")) - nu(&c, &w("2"), &w("2"));
    eq("term nu(2,211) - nu(2,2)", first.term, term)?;
    eq("remaining terms", t.triples[1..].iter().map(|x| x.term).sum::<i64>(), 0)?;
    eq("0 + nu(2,211) - nu(2,2)", term, -1)?;
    let t = coefficient_table(&c, &w("3"), &w("33133")).unwrap();
    let mut by_degree: BTreeMap<usize, i64> = BTreeMap::new();
    for x in t.triples.iter().filter(|x| x.principal_factor == w("3111")) {
        *by_degree.entry(x.degree).or_default() += if x.degree % 2 == 0 { 1 } else { -1 };
    }
    eq("signed count of 3111 by degree", by_degree, BTreeMap::from([(0, 1), (1, -2), (2, 1)]))?;
    eq("coefficient of nu(3,3111)", t.coefficients.get(&w("3111")).copied().unwrap_or(0), 0)
}

fn criterion_6() -> Check {
    let c = parse_alphabet("chain:3").unwrap();
    let w = |s: &str| word(&c, s);
    let pfs = |s: &str| {
        let mut v: Vec<String> = principal_factors(&c, &w(s)).into_iter().map(|p| render_word(&c, &p.word)).collect();
        v.sort();
        v
    };
    eq("principal factors of 12222", pfs("12222"), vec!["1211", "1212", "1221", "1222"].into_iter().map(String::from).collect())?;
    eq("principal factors of 33133", pfs("33133"), vec!["3111", "3112", "3113", "33"].into_iter().map(String::from).collect())?;
    eq("principal factors of 3121", pfs("3121"), Vec::<String>::new())?;
    eq("principal factors of 11211", pfs("11211"), Vec::<String>::new())?;
    let pf = principal_factors(&c, &w("2212")).into_iter().find(|p| p.word == w("211")).ok_or("211 is not principal in 2212")?;
    let pp = |host: &str| primary_prefix(&c, &w(host), &PrincipalFactor { word: w("211"), index: pf.index }).map(|x| render_word(&c, &x));
    eq("primary prefix in 2212", pp("2212"), Some("2".into()))?;
    eq("primary prefix in 2222", pp("2222"), Some("21".into()))?;
    eq("primary prefix in 2211", pp("2211"), None)?;
    let host = w("12222");
    let mut hosting: Vec<String> = (0..=host.len())
        .flat_map(|d| principal_factors_of_degree(&c, &host, d))
        .filter(|(p, _)| p.word == w("1211"))
        .map(|(_, b)| render_word(&c, &b.word))
        .collect();
    hosting.sort();
    hosting.dedup();
    eq("bases of 12222 with principal factor 1211", hosting, vec!["12211", "12212", "12221", "12222"].into_iter().map(String::from).collect())?;
    ensure(bases(&c, &host).len() > 4, || "12222 has more bases than those four".into())
}

fn criterion_7(sweeps: &[(String, SweepSummary)]) -> Check {
    let a = ab();
    let iv = interval(&a, "b", "bbabb");
    let m = build_matching(&iv, 1 << 12).map_err(|e| e.to_string())?;
    let summary = validate_matching(&m).map_err(|e| e.to_string())?;
    let dump = m.dump(&iv);
    let partner = |s: &str| dump.iter().find(|r| r[1] == s).map(|r| r[2].clone());
    for (x, y) in [("ab", "abb-ab"), ("babb-ab", "babb-abb-ab"), ("bbab-bb", "bbab-bba-bb")] {
        eq(&format!("partner of {x}"), partner(x), Some(y.to_string()))?;
        eq(&format!("partner of {y}"), partner(y), Some(x.to_string()))?;
    }
    let critical: Vec<&str> = dump.iter().filter(|r| r[2] == "CRITICAL").map(|r| r[1].as_str()).collect();
    eq("critical simplices", critical, vec!["bba-bb"])?;
    eq("census", summary.critical, BTreeMap::from([(1, 1)]))?;
    for (name, s) in sweeps {
        ensure(s.passed.get("matching validates").copied().unwrap_or(0) > 0, || format!("{name}: no matchings validated"))?;
        ensure(s.passed.get("census alternating sum equals mu").copied().unwrap_or(0) > 0, || format!("{name}: no census checks"))?;
        let bad: Vec<_> = s.failures.iter().filter(|f| f.check.starts_with("matching") || f.check.starts_with("census")).collect();
        ensure(bad.is_empty(), || format!("{name}: {}", bad[0]))?;
    }
    Ok(())
}

fn criterion_8() -> Check {
    let a = ab();
    eq("[b,bbabb]", homotopy_report(&interval(&a, "b", "bbabb")).classification, HomotopyType::Sphere(1))?;
    for n in 4..=6i64 {
        let w: String = "ab".chars().cycle().take(n as usize).collect();
        eq(&format!("[a,{w}]"), homotopy_report(&interval(&a, "a", &w)).classification, HomotopyType::Sphere(n - 3))?;
    }
    eq("[a,abbabb]", homotopy_report(&interval(&a, "a", "abbabb")).classification, HomotopyType::Contractible)
}

const SWEEPS: [(&str, usize); 3] = [("antichain:a,b", 6), ("chain:3", 5), ("forest:root a;b a;root 1;2 1", 5)];

fn criterion_9(sweeps: &[(String, SweepSummary)]) -> Check {
    for (name, s) in sweeps {
        ensure(s.ok(), || format!("{name}: {} failures, first {}", s.failure_count, s.failures[0]))?;
        let skipped: Vec<_> = s.skipped.keys().filter(|k| !matches!(**k, "formula: empty bottom word" | "structure: empty bottom word" | "matching: single-point interval" | "matching: complex over cap")).collect();
        ensure(skipped.is_empty(), || format!("{name}: checks skipped: {skipped:?}"))?;
        for check in [
            "euler characteristic equals recursion",
            "critical chains equal recursion",
            "formula equals recursion",
            "structural MSI and J(C) checks",
            "all-descent count",
        ] {
            ensure(s.passed.get(check).copied().unwrap_or(0) > 0, || format!("{name}: `{check}` never ran"))?;
        }
        if name.starts_with("antichain") {
            ensure(s.passed.contains_key("antichain: at most the last chain is critical"), || "antichain check never ran".into())?;
        }
        ensure(s.passed.contains_key("bjorner value in {-1,0,1}"), || format!("{name}: Björner never ran"))?;
    }
    Ok(())
}

fn criterion_10(sweeps: &[(String, SweepSummary)]) -> Check {
    let f = parse_alphabet("forest:root a;b a;root 1").unwrap();
    let iv = interval(&f, "b", "bb1");
    let chains = analysed_chains(&iv, 1000).unwrap();
    let (_, msis, _) = chains.iter().find(|(c, _, _)| c.labels == [2, 3, 2]).ok_or("no chain 2-3-2 in [b,bb1]")?;
    ensure(msis.contains(&Msi { start: 0, end: 3 }), || format!("C(bb1,b) not among the MSIs {msis:?}"))?;

    let g = parse_alphabet("forest:root a;b a;root 1;2 1").unwrap();
    let iv = interval(&g, "1a", "1a1a");
    let found = analysed_chains(&iv, 1000).unwrap().into_iter().any(|(c, msis, _)| {
        let kinds = classify_steps(&iv, &c);
        msis.iter().any(|m| m.end == m.start + 2 && kinds[m.start] == StepKind::WeakDescent)
    });
    ensure(found, || "[1a,1a1a] has no length-one MSI on a weak descent".into())?;

    let iv = interval(&g, "a", "a11aa11a");
    let chains = analysed_chains(&iv, 1 << 20).unwrap();
    let (last, msis, jset) = chains.last().unwrap();
    ensure(jset.covers, || format!("lex-last chain {} is not critical", last.id_string()))?;
    let target = iv.id(&word(&g, "a11aa")).ok_or("a11aa not in the interval")?;
    let k = last.ids.iter().position(|&x| x == target).ok_or("a11aa not on the lex-last chain")?;
    eq("MSIs containing a11aa", msis.iter().filter(|m| m.contains(k)).count(), 3)?;

    let checked: u64 = sweeps.iter().filter_map(|(_, s)| s.passed.get("rooted triple sum equals mu(u, o(w))")).sum();
    ensure(checked > 0, || "rooted identity never checked".into())?;
    for (name, s) in sweeps {
        let bad: Vec<_> = s.failures.iter().filter(|f| f.check.starts_with("rooted")).collect();
        ensure(bad.is_empty(), || format!("{name}: {}", bad[0]))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let sweeps: Vec<(String, SweepSummary)> = SWEEPS
        .iter()
        .map(|&(spec, len)| {
            let alpha = parse_alphabet(spec).unwrap();
            let cfg = SweepConfig { max_word_len: len, ..Default::default() };
            let s = sweep(&alpha, &cfg);
            println!("sweep {spec} to length {len}: {} pairs, {} failures", s.pairs, s.failure_count);
            (spec.to_string(), s)
        })
        .collect();
    let results: Vec<(usize, Check)> = vec![
        (1, criterion_1()),
        (2, criterion_2()),
        (3, criterion_3()),
        (4, criterion_4()),
        (5, criterion_5()),
        (6, criterion_6()),
        (7, criterion_7(&sweeps)),
        (8, criterion_8()),
        (9, criterion_9(&sweeps)),
        (10, criterion_10(&sweeps)),
    ];
    let mut failed = 0;
    for (n, r) in &results {
        match r {
            Ok(()) => println!("criterion {n}: PASS"),
            Err(e) => {
                failed += 1;
                println!("criterion {n}: FAIL ({e})");
            }
        }
    }
    println!("{} of {} criteria pass in {:.1?}", results.len() - failed, results.len(), start.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
