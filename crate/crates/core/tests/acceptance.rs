//! Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

use std::io::Write;
use std::time::{Duration, Instant};

use iwadec::chars::CharacterTable;
use iwadec::cli::corpus::{builtin, CORPUS};
use iwadec::cli::spec_file::{load_spec, LoadedSpec};
use iwadec::cli::{run, EXIT_CONDITIONAL, EXIT_OK, EXIT_UNKNOWN};
use iwadec::groups::{abelian, is_q_elementary, permutation_group, semidirect, QType};
use iwadec::wedderburn::{
    centralizer_check, decompose, e_i_family, elementary_decomposition, ll1_matrix_check, orbit_analysis,
    verify_prop_st, StarAlgebra,
};
use iwadec::CycNumber;

fn report(n: u32, what: &str, failures: &[String]) {
    let line = if failures.is_empty() {
        format!("criterion {n} ({what}): PASS\n")
    } else {
        format!("criterion {n} ({what}): FAIL: {}\n", failures.join("; "))
    };
    // bypass the harness capture so the line always reaches the log
    let mut out = std::io::stdout();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
    assert!(failures.is_empty(), "{line}");
}

fn corpus(name: &str) -> LoadedSpec {
    load_spec(builtin(name).unwrap()).unwrap()
}

fn stars(s: &LoadedSpec) -> Vec<StarAlgebra> {
    let data = is_q_elementary(&s.spec, QType::L, s.designated_s).unwrap().unwrap();
    elementary_decomposition(&s.spec, &data).unwrap()
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

fn expect<T: PartialEq + std::fmt::Debug>(fails: &mut Vec<String>, what: &str, expected: T, actual: T) {
    if expected != actual {
        fails.push(format!("{what}: expected {expected:?}, got {actual:?}"));
    }
}

#[test]
fn criterion_1_dimension_census() {
    let mut fails = Vec::new();
    let limit = Duration::from_secs(10);
    for (name, dims) in [
        ("z9_h4", vec![3, 6, 18]),
        ("heisenberg27", vec![1, 2, 2, 2, 2, 18]),
        ("transvection", vec![3, 6, 18]),
    ] {
        let t = Instant::now();
        let d = decompose(&corpus(name).spec).unwrap();
        let el = t.elapsed();
        let got = sorted(d.components.iter().map(|c| c.dim).collect());
        expect(&mut fails, name, (dims, 27), (got, d.dim));
        if el > limit {
            fails.push(format!("{name} took {el:?}"));
        }
    }
    let t = Instant::now();
    let z7 = corpus("z7_s2");
    let parts = stars(&z7);
    let el = t.elapsed();
    let got = sorted(parts.iter().map(|p| p.dim).collect());
    expect(&mut fails, "z7_s2 e_i dims", (vec![3, 18], 21), (got, z7.spec.fin_order()));
    if el > limit {
        fails.push(format!("z7_s2 took {el:?}"));
    }
    report(1, "dimension census", &fails);
}

#[test]
fn criterion_2_structure_identities() {
    let identities = [
        "dim ε_χA = l^m·v_χ·[ℚ_l(η):ℚ_l]·η(1)²",
        "dim Z(ε_χA) = [L:ℚ_l]·l^m/w_χ",
        "dim ε_χA = χ(1)²·dim Z(ε_χA)",
        "|G₀| = w_χ/v_χ",
    ];
    let mut fails = Vec::new();
    for (name, src) in CORPUS {
        let d = match decompose(&load_spec(src).unwrap().spec) {
            Ok(d) => d,
            Err(e) => {
                fails.push(format!("{name}: {e}"));
                continue;
            }
        };
        for (i, c) in d.components.iter().enumerate() {
            for id in identities {
                match c.verified.iter().find(|k| k.identity == id) {
                    Some(k) if k.passed && k.expected == k.actual => {}
                    Some(k) => fails.push(format!("{name}[{i}] {id}: {} vs {}", k.expected, k.actual)),
                    None => fails.push(format!("{name}[{i}] {id} not checked")),
                }
            }
            if c.chi_degree * c.chi_degree * c.center_dim != c.dim {
                fails.push(format!("{name}[{i}]: χ(1)²·dim Z ≠ dim"));
            }
        }
    }
    report(2, "structure identities on every component", &fails);
}

#[test]
fn criterion_3_idempotent_families() {
    let mut fails = Vec::new();
    for (name, src) in CORPUS {
        let s = load_spec(src).unwrap();
        let d = decompose(&s.spec).unwrap();
        for id in ["Σ ε_χ = 1", "ε_χ·ε_χ′ = 0 for χ ≠ χ′", "Σ dim ε_χA = dim A"] {
            if !d.family.iter().any(|c| c.identity == id && c.passed) {
                fails.push(format!("{name}: {id}"));
            }
        }
        for (i, c) in d.components.iter().enumerate() {
            for id in ["ε_χ·ε_χ = ε_χ", "ε_χ is central"] {
                if !c.verified.iter().any(|k| k.identity == id && k.passed) {
                    fails.push(format!("{name}[{i}]: {id}"));
                }
            }
        }
        let fam = e_i_family(&stars(&s)).unwrap();
        if fam.checks.len() != 4 || !fam.passed() {
            fails.push(format!("{name}: e_i family {:?}", fam.checks));
        }
    }
    report(3, "idempotent family laws (ε_χ and e_i)", &fails);
}

#[test]
fn criterion_4_ll1_matrix() {
    let mut fails = Vec::new();
    let t = Instant::now();
    for ln in [1, 3, 9, 27] {
        match ll1_matrix_check(ln, None) {
            Ok(r) if r.passed() => {}
            Ok(r) => fails.push(format!("l^n = {ln}: {:?}", r.checks)),
            Err(e) => fails.push(format!("l^n = {ln}: {e}")),
        }
    }
    let el = t.elapsed();
    if el > Duration::from_secs(5) {
        fails.push(format!("took {el:?}"));
    }
    if ll1_matrix_check(3, Some(&CycNumber::zeta(3))).is_ok_and(|r| r.passed()) {
        fails.push("perturbed matrix passed".into());
    }
    report(4, "M₀^{l^n} = 1 for l^n ∈ {1,3,9,27}, perturbation fails", &fails);
}

#[test]
fn criterion_5_prop_st() {
    let mut fails = Vec::new();
    // d = 0: ℤ/7 ⋊ Γ
    let parts = stars(&corpus("z7_s2"));
    let p1 = parts.iter().find(|p| p.beta.j != 0).unwrap();
    let g = orbit_analysis(p1).unwrap();
    let r = verify_prop_st(p1, &g[0]).unwrap();
    expect(&mut fails, "z7 (d, dim Z(V), dim F^⟨x⟩)", (0, 2, 2), (r.d, r.center_dim, r.dim_f_fixed));
    // d = n: wrapped transvection
    let parts = stars(&corpus("wrapped_transvection"));
    let mut seen = false;
    for p in &parts {
        for g in orbit_analysis(p).unwrap() {
            let r = verify_prop_st(p, &g).unwrap();
            if r.d == r.n && r.n > 0 {
                seen = true;
                let l2n = 3usize.pow(2 * r.n);
                expect(&mut fails, "dim W̃ = l^{2n}·dim W", l2n * r.dim_w, r.dim_w_tilde);
            }
        }
    }
    if !seen {
        fails.push("no d = n orbit in the wrapped transvection spec".into());
    }
    report(5, "orbit-parameter checks for d = 0 and d = n", &fails);
}

#[test]
fn criterion_6_centralizer() {
    let mut fails = Vec::new();
    let parts = stars(&corpus("z7_s2"));
    let p1 = parts.iter().find(|p| p.beta.j != 0).unwrap();
    let g = &orbit_analysis(p1).unwrap()[0];
    match centralizer_check(p1, g, None) {
        Ok(r) => {
            expect(&mut fails, "l^n", 3, r.ln);
            if r.dim_w > 8 {
                fails.push(format!("dim W = {} over cap", r.dim_w));
            }
            expect(&mut fails, "dim centralizer = dim fixed", r.dim_fixed, r.dim_centralizer);
            if !r.checks.iter().all(|c| c.passed) {
                fails.push(format!("{:?}", r.checks));
            }
        }
        Err(e) => fails.push(e.to_string()),
    }
    if centralizer_check(p1, g, Some(&CycNumber::zeta(7))).is_ok() {
        fails.push("negative control passed".into());
    }
    report(6, "centralizer equals ⟨w⁻¹x⟩-fixed matrices, negative control fails", &fails);
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["iwadec"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn criterion_7_verdict_provenance() {
    let mut fails = Vec::new();
    let cases: [(&str, &[&str], &str, &str, i32); 8] = [
        ("z7_s2", &[], "Trivial", "KnownCases-iii", EXIT_OK),
        ("z9_h4", &[], "Trivial", "KnownCases-ii", EXIT_OK),
        ("heisenberg27", &[], "Trivial", "KnownCases-i", EXIT_OK),
        ("transvection", &[], "Trivial", "KnownCases-ii", EXIT_OK),
        ("cyclic9", &[], "Trivial", "KnownCases-i", EXIT_OK),
        ("wrapped_transvection", &[], "Trivial", "Thm-sk1", EXIT_OK),
        ("wrapped_cyclic9", &[], "ConditionalOnProL", "Thm-sk1", EXIT_CONDITIONAL),
        ("heisenberg27_twisted", &["--cap", "50"], "Unknown", "", EXIT_UNKNOWN),
    ];
    for (name, extra, status, rule, code) in cases {
        let spec = format!("builtin:{name}");
        let mut args = vec!["sk1", spec.as_str(), "--json"];
        args.extend_from_slice(extra);
        let (c, out) = cli(&args);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let got_rule = v["verdict"]["rule"].as_str().unwrap_or("");
        let got_status = v["verdict"]["status"].as_str().unwrap_or("");
        expect(&mut fails, name, (status, rule, code), (got_status, got_rule, c));
        if status == "ConditionalOnProL" {
            let obl = v["verdict"]["obligations"].as_array().unwrap();
            let mut got: Vec<(u64, u64)> = obl
                .iter()
                .map(|o| (o["conductor"].as_u64().unwrap(), o["u_i"]["h_order"].as_u64().unwrap()))
                .collect();
            got.sort_unstable();
            expect(&mut fails, "wrapped_cyclic9 obligations", vec![(1, 27), (7, 9)], got);
        }
    }
    report(7, "verdicts, rule tags and exit codes", &fails);
}

#[test]
fn criterion_8_character_tables() {
    let mut fails = Vec::new();
    let mut groups: Vec<(String, iwadec::groups::FiniteGroup)> = CORPUS
        .iter()
        .map(|(n, src)| (n.to_string(), load_spec(src).unwrap().spec.h().clone()))
        .collect();
    groups.push(("S3".into(), semidirect(&[3], &[2], &[vec![vec![2]]]).unwrap()));
    groups.push(("A4".into(), permutation_group(&[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]).unwrap()));
    groups.push(("Z/63".into(), abelian(&[63]).unwrap()));
    groups.push(("Z/7 x| Z/9".into(), semidirect(&[7], &[9], &[vec![vec![2]]]).unwrap()));
    for (name, h) in &groups {
        match CharacterTable::new(h) {
            Ok(t) => {
                if let Err(e) = t.check_orthogonality() {
                    fails.push(format!("{name}: {e}"));
                }
                let sum: usize = t.degrees().iter().map(|d| d * d).sum();
                expect(&mut fails, name, h.order(), sum);
            }
            Err(e) => fails.push(format!("{name}: {e}")),
        }
    }
    let t = CharacterTable::new(corpus("heisenberg27").spec.h()).unwrap();
    let mut ones = 0;
    let mut threes = 0;
    for d in t.degrees() {
        match d {
            1 => ones += 1,
            3 => threes += 1,
            _ => {}
        }
    }
    expect(&mut fails, "Heisenberg 27 rows and degrees", (11, 9, 2), (t.len(), ones, threes));
    report(8, "row/column orthogonality and Σχ(1)² = |H|", &fails);
}

#[test]
fn criterion_9_determinism() {
    let mut fails = Vec::new();
    for (name, _) in CORPUS {
        let spec = format!("builtin:{name}");
        let (c1, a) = cli(&["decompose", &spec, "--json"]);
        let (c2, b) = cli(&["decompose", &spec, "--json"]);
        if (c1, c2) != (0, 0) {
            fails.push(format!("{name}: exit codes {c1}, {c2}"));
        }
        if a != b {
            fails.push(format!("{name}: JSON differs between runs"));
        }
    }
    report(9, "byte-identical JSON across runs", &fails);
}
