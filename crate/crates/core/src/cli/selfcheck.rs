use std::io::Write;
use std::path::Path;
use std::time::Instant;

use crate::chars::{CharacterTable, OrbitContext};
use crate::cli::corpus::CORPUS;
use crate::cli::report::elementary_section;
use crate::cli::spec_file::{load_spec, LoadedSpec};
use crate::cli::{EXIT_OK, EXIT_SELFCHECK};
use crate::crossed::{alg_mul, is_central, is_idempotent, rational_idempotents, AlgebraElement, CrossedAlgebra};
use crate::cyclo::{decomposition_group, galois_apply, trace_to_fixed, CycNumber, GaloisAut};
use crate::error::Result;
use crate::sk1::{verdict, Options, Status};
use crate::wedderburn::{decompose, ll1_matrix_check};

type Suite = fn(&[(String, LoadedSpec)], bool) -> std::result::Result<usize, String>;

fn fail(name: &str, what: impl std::fmt::Display) -> String {
    format!("{name}: {what}")
}

fn ok_or<T>(name: &str, r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| fail(name, e))
}

fn cyclo_suite(_: &[(String, LoadedSpec)], _: bool) -> std::result::Result<usize, String> {
    let mut n = 0;
    for (conductor, l) in [(7, 3), (9, 3), (21, 3), (63, 3)] {
        let z = &CycNumber::zeta(conductor) + &CycNumber::zeta_pow(conductor, 2);
        let units: Vec<usize> = (1..conductor).filter(|&a| crate::arith::gcd(a, conductor) == 1).collect();
        for &a in &units {
            for &b in &units {
                let sa = GaloisAut::new(conductor, a).map_err(|e| fail("cyclo", e))?;
                let sb = GaloisAut::new(conductor, b).map_err(|e| fail("cyclo", e))?;
                let sab = GaloisAut::new(conductor, a * b % conductor).map_err(|e| fail("cyclo", e))?;
                let lhs = ok_or("cyclo", galois_apply(&sb, &z).and_then(|y| galois_apply(&sa, &y)))?;
                if lhs != ok_or("cyclo", galois_apply(&sab, &z))? {
                    return Err(fail("cyclo", format!("σ_{a}∘σ_{b} ≠ σ_{{ab}} mod {conductor}")));
                }
                n += 1;
            }
        }
        let d = ok_or("cyclo", decomposition_group(conductor, l))?;
        let t = ok_or("cyclo", trace_to_fixed(&z, &d))?;
        for s in d.automorphisms() {
            if ok_or("cyclo", galois_apply(&s, &t))? != t {
                return Err(fail("cyclo", format!("trace mod {conductor} is not fixed")));
            }
            n += 1;
        }
    }
    Ok(n)
}

fn chars_suite(specs: &[(String, LoadedSpec)], _: bool) -> std::result::Result<usize, String> {
    let mut n = 0;
    for (name, s) in specs {
        let h = s.spec.h();
        let t = CharacterTable::new(h).map_err(|e| fail(name, e))?;
        t.check_orthogonality().map_err(|e| fail(name, e))?;
        let sum: usize = t.degrees().iter().map(|d| d * d).sum();
        if sum != h.order() {
            return Err(fail(name, format!("Σ χ(1)² = {sum} ≠ |H| = {}", h.order())));
        }
        n += 2;
    }
    Ok(n)
}

fn crossed_suite(specs: &[(String, LoadedSpec)], inject: bool) -> std::result::Result<usize, String> {
    let mut n = 0;
    for (k, (name, s)) in specs.iter().enumerate() {
        let spec = &s.spec;
        let table = CharacterTable::new(spec.h()).map_err(|e| fail(name, e))?;
        let d = decomposition_group(table.exponent, spec.l()).map_err(|e| fail(name, e))?;
        let ctx = OrbitContext::new(&table, spec, &d).map_err(|e| fail(name, e))?;
        let alg = CrossedAlgebra::new(spec.clone());
        let mut idems: Vec<AlgebraElement> = rational_idempotents(&alg, &ctx)
            .map_err(|e| fail(name, e))?
            .into_iter()
            .map(|(_, e)| e)
            .collect();
        if inject && k == 0 {
            idems[0] = idems[0].try_add(&idems[0]).map_err(|e| fail(name, e))?;
        }
        let mut sum = AlgebraElement::zero(&alg);
        for (i, e) in idems.iter().enumerate() {
            if !is_idempotent(e).map_err(|e| fail(name, e))? {
                return Err(fail(name, format!("ε_{i}·ε_{i} ≠ ε_{i}")));
            }
            if !is_central(e).map_err(|e| fail(name, e))? {
                return Err(fail(name, format!("ε_{i} is not central")));
            }
            for (j, f) in idems.iter().enumerate().skip(i + 1) {
                if !alg_mul(e, f).map_err(|e| fail(name, e))?.is_zero() {
                    return Err(fail(name, format!("ε_{i}·ε_{j} ≠ 0")));
                }
            }
            sum = sum.try_add(e).map_err(|e| fail(name, e))?;
        }
        if sum != AlgebraElement::one(&alg) {
            return Err(fail(name, "Σ ε_χ ≠ 1"));
        }
        n += idems.len() * (idems.len() + 3) / 2 + 1;
    }
    Ok(n)
}

fn wedderburn_suite(specs: &[(String, LoadedSpec)], _: bool) -> std::result::Result<usize, String> {
    let mut n = 0;
    for (name, s) in specs {
        let d = decompose(&s.spec).map_err(|e| fail(name, e))?;
        n += d.family.len() + d.components.iter().map(|c| c.verified.len()).sum::<usize>();
        if let Some(e) = elementary_section(s).map_err(|e| fail(name, e))? {
            n += e.family.len();
            for p in &e.parts {
                n += p.checks.len();
                for o in &p.orbits {
                    n += o.prop_st.checks.len();
                    if let Some(c) = &o.centralizer {
                        n += c.checks.len();
                    }
                }
            }
        }
    }
    Ok(n)
}

fn ll1_suite(_: &[(String, LoadedSpec)], _: bool) -> std::result::Result<usize, String> {
    let mut n = 0;
    for ln in [1, 3, 9, 27] {
        let r = ok_or("ll1", ll1_matrix_check(ln, None))?;
        if !r.passed() {
            return Err(fail("ll1", format!("M₀^{ln} ≠ 1")));
        }
        n += r.checks.len();
    }
    let twisted = ll1_matrix_check(3, Some(&CycNumber::zeta(3)));
    if twisted.is_ok_and(|r| r.passed()) {
        return Err(fail("ll1", "perturbed matrix passed"));
    }
    Ok(n + 1)
}

fn sk1_suite(specs: &[(String, LoadedSpec)], _: bool) -> std::result::Result<usize, String> {
    let mut n = 0;
    for (name, s) in specs {
        let opts = Options {
            designated_s: s.designated_s,
            ..Options::default()
        };
        let a = verdict(&s.spec, &opts).map_err(|e| fail(name, e))?;
        let b = verdict(&s.spec, &opts).map_err(|e| fail(name, e))?;
        let (ja, jb) = (serde_json::to_string(&a), serde_json::to_string(&b));
        if ja.map_err(|e| fail(name, e))? != jb.map_err(|e| fail(name, e))? {
            return Err(fail(name, "verdict is not deterministic"));
        }
        if a.status == Status::Trivial && !a.obligations.is_empty() {
            return Err(fail(name, "trivial verdict with obligations"));
        }
        if a.obligations.iter().any(|o| !o.spec.is_pro_l()) {
            return Err(fail(name, "obligation on a group that is not pro-l"));
        }
        n += 3;
    }
    Ok(n)
}

const SUITES: &[(&str, Suite)] = &[
    ("cyclo", cyclo_suite),
    ("chars", chars_suite),
    ("crossed", crossed_suite),
    ("wedderburn", wedderburn_suite),
    ("ll1", ll1_suite),
    ("sk1", sk1_suite),
];

fn load_dir(dir: &Path) -> std::result::Result<Vec<(String, LoadedSpec)>, String> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let src = std::fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))?;
            let s = load_spec(&src).map_err(|e| format!("{}:{e}", p.display()))?;
            Ok((p.display().to_string(), s))
        })
        .collect()
}

/// Runs every suite; exit code 1 names the first failing suite.
pub fn run(dir: Option<&Path>, inject_bad_idempotent: bool, out: &mut dyn Write) -> i32 {
    let mut warnings = 0;
    let specs = match dir {
        None => CORPUS
            .iter()
            .map(|(n, src)| load_spec(src).map(|s| (n.to_string(), s)).map_err(|e| format!("{n}:{e}")))
            .collect::<std::result::Result<Vec<_>, _>>(),
        Some(d) => load_dir(d),
    };
    let specs = match specs {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(out, "suite corpus: FAILED ({e})");
            return EXIT_SELFCHECK;
        }
    };
    if specs.is_empty() {
        warnings += 1;
        let _ = writeln!(out, "warning: corpus is empty, corpus suites pass vacuously");
    }
    let mut failed = None;
    for (name, suite) in SUITES {
        let start = Instant::now();
        let r = suite(&specs, inject_bad_idempotent);
        let ms = start.elapsed().as_millis();
        match r {
            Ok(n) => {
                let _ = writeln!(out, "suite {name}: ok ({n} checks, {ms} ms)");
            }
            Err(e) => {
                let _ = writeln!(out, "suite {name}: FAILED ({e}, {ms} ms)");
                failed.get_or_insert(*name);
            }
        }
    }
    let _ = writeln!(out, "warnings: {warnings}");
    match failed {
        None => EXIT_OK,
        Some(name) => {
            let _ = writeln!(out, "selfcheck failed in suite {name}");
            EXIT_SELFCHECK
        }
    }
}
