//! SK₁ verdicts: the known triviality cases, the two elementary theorems and
//! the reduction to elementary subgroups of a finite quotient.

use serde::Serialize;

use crate::arith::{gcd, prime_divisors};
use crate::error::{Error, Result};
use crate::groups::{is_q_elementary, ElementaryData, FiniteGroup, GSpec, QType};
use crate::wedderburn::{decompose, elementary_decomposition};

/// Default bound on the order of a group whose subgroups are enumerated.
pub const DEFAULT_CAP: usize = 200;

const FOOTNOTE: &str = "restrictions on H are not necessary";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GroupClass {
    DirectProduct,
    HPrimeToL,
    /// Elements of an abelian subgroup of index l in the truncation.
    ProLAbelianIndexL(Vec<usize>),
    QElementary(ElementaryData),
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Trivial,
    ConditionalOnProL,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rule {
    #[serde(rename = "KnownCases-i")]
    KnownCasesI,
    #[serde(rename = "KnownCases-ii")]
    KnownCasesII,
    #[serde(rename = "KnownCases-iii")]
    KnownCasesIII,
    #[serde(rename = "Thm-sk2")]
    ThmSk2,
    #[serde(rename = "Thm-sk1")]
    ThmSk1,
    #[serde(rename = "RW-reduction")]
    RwReduction,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::KnownCasesI => "KnownCases-i",
            Rule::KnownCasesII => "KnownCases-ii",
            Rule::KnownCasesIII => "KnownCases-iii",
            Rule::ThmSk2 => "Thm-sk2",
            Rule::ThmSk1 => "Thm-sk1",
            Rule::RwReduction => "RW-reduction",
        }
    }
}

/// A readable echo of a spec.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SpecSummary {
    pub l: usize,
    pub m: u32,
    pub h_order: usize,
    pub h_abelian: bool,
    pub h_generators: Vec<String>,
    /// (generator, α(generator)).
    pub alpha: Vec<(String, String)>,
}

impl SpecSummary {
    pub fn of(spec: &GSpec) -> Self {
        let h = spec.h();
        let gens = h.generators().to_vec();
        SpecSummary {
            l: spec.l(),
            m: spec.m(),
            h_order: h.order(),
            h_abelian: h.is_abelian(),
            h_generators: gens.iter().map(|&g| h.label(g)).collect(),
            alpha: gens
                .iter()
                .map(|&g| (h.label(g), h.label(spec.alpha().apply(g))))
                .collect(),
        }
    }
}

/// SK₁(ℚ_l(ζ_N) ⊗ 𝒬U_i) = 1 is left to be shown.
#[derive(Clone, Debug, Serialize)]
pub struct Obligation {
    pub conductor: usize,
    pub u_i: SpecSummary,
    #[serde(skip)]
    pub spec: GSpec,
}

impl Obligation {
    fn key(&self) -> (usize, &SpecSummary) {
        (self.conductor, &self.u_i)
    }
}

/// One elementary subgroup visited by the reduction.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionNode {
    /// Generators of the subgroup, as elements of the quotient.
    pub generators: Vec<String>,
    pub order: usize,
    pub gamma_exponent: u32,
    pub q: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub rule: Option<Rule>,
    pub footnote: Option<String>,
    pub obligations: Vec<Obligation>,
    pub reduction_tree: Vec<ReductionNode>,
    pub quotient_level: u32,
    pub resource: Option<String>,
}

impl Verdict {
    fn trivial(rule: Rule, level: u32) -> Self {
        Verdict {
            status: Status::Trivial,
            rule: Some(rule),
            footnote: None,
            obligations: Vec::new(),
            reduction_tree: Vec::new(),
            quotient_level: level,
            resource: None,
        }
    }

    fn unknown(rule: Option<Rule>, level: u32, resource: String) -> Self {
        Verdict {
            status: Status::Unknown,
            rule,
            footnote: None,
            obligations: Vec::new(),
            reduction_tree: Vec::new(),
            quotient_level: level,
            resource: Some(resource),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub cap: usize,
    /// Quotient level for the subgroup reduction; defaults to m.
    pub quotient_level: Option<u32>,
    /// Restrict the elementary test to this type.
    pub q_hint: Option<QType>,
    pub designated_s: Option<usize>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            cap: DEFAULT_CAP,
            quotient_level: None,
            q_hint: None,
            designated_s: None,
        }
    }
}

fn is_l_group(n: usize, l: usize) -> bool {
    prime_divisors(n).iter().all(|&p| p == l)
}

fn is_abelian_subgroup(g: &FiniteGroup, elems: &[usize]) -> bool {
    let gens = g.generators_of(elems);
    gens.iter()
        .all(|&a| gens.iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
}

fn elementary_types(spec: &GSpec, hint: Option<QType>) -> Vec<QType> {
    if let Some(q) = hint {
        return vec![q];
    }
    let l = spec.l();
    let mut out: Vec<QType> = prime_divisors(spec.h().order())
        .into_iter()
        .filter(|&q| q != l)
        .map(QType::Prime)
        .collect();
    out.push(QType::L);
    out
}

fn elementary_data(spec: &GSpec, opts: &Options) -> Result<Option<ElementaryData>> {
    for q in elementary_types(spec, opts.q_hint) {
        if let Some(d) = is_q_elementary(spec, q, opts.designated_s)? {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// The first matching class in priority order.
pub fn classify(spec: &GSpec, opts: &Options) -> Result<GroupClass> {
    let l = spec.l();
    let h = spec.h();
    if spec.alpha().is_identity() {
        return Ok(GroupClass::DirectProduct);
    }
    if gcd(h.order(), l) == 1 {
        return Ok(GroupClass::HPrimeToL);
    }
    if is_l_group(h.order(), l) {
        let g = spec.truncation_at(spec.m())?;
        let subs = g.subgroups_up_to_conjugacy(opts.cap)?;
        if let Some(a) = subs
            .into_iter()
            .find(|s| s.len() * l == g.order() && is_abelian_subgroup(&g, s))
        {
            return Ok(GroupClass::ProLAbelianIndexL(a));
        }
    }
    if let Some(d) = elementary_data(spec, opts)? {
        return Ok(GroupClass::QElementary(d));
    }
    Ok(GroupClass::General)
}

/// The SK₁ verdict with the rule it rests on.
pub fn verdict(spec: &GSpec, opts: &Options) -> Result<Verdict> {
    let level = opts.quotient_level.unwrap_or(spec.m());
    let class = match classify(spec, opts) {
        Ok(c) => c,
        Err(Error::ResourceLimit { what, cap }) => {
            return Ok(Verdict::unknown(None, level, format!("{what} exceeds cap {cap}")))
        }
        Err(e) => return Err(e),
    };
    match class {
        GroupClass::DirectProduct => {
            let mut v = Verdict::trivial(Rule::KnownCasesI, level);
            let n = spec.h().order();
            if !is_l_group(n, spec.l()) && gcd(n, spec.l()) != 1 {
                v.footnote = Some(FOOTNOTE.into());
            }
            Ok(v)
        }
        GroupClass::HPrimeToL => Ok(Verdict::trivial(Rule::KnownCasesIII, level)),
        GroupClass::ProLAbelianIndexL(_) => Ok(Verdict::trivial(Rule::KnownCasesII, level)),
        GroupClass::QElementary(d) if d.q != QType::L => Ok(Verdict::trivial(Rule::ThmSk2, level)),
        GroupClass::QElementary(d) => l_elementary(spec, &d, level),
        GroupClass::General => reduction(spec, opts, level),
    }
}

fn l_elementary(spec: &GSpec, data: &ElementaryData, level: u32) -> Result<Verdict> {
    let mut obligations = Vec::new();
    for s in elementary_decomposition(spec, data)? {
        let u = &s.u_i.spec;
        if !u.is_pro_l() {
            return Err(Error::InternalConsistency(format!(
                "U_i of order {}·l^∞ is not pro-l",
                u.h().order()
            )));
        }
        let d = decompose(u)?;
        let split = d
            .components
            .iter()
            .all(|c| c.schur_index.as_ref().is_some_and(|i| i.value == 1));
        if !split {
            obligations.push(Obligation {
                conductor: s.beta.conductor(),
                u_i: SpecSummary::of(u),
                spec: u.clone(),
            });
        }
    }
    let mut v = Verdict::trivial(Rule::ThmSk1, level);
    if !obligations.is_empty() {
        v.status = Status::ConditionalOnProL;
        v.obligations = obligations;
    }
    Ok(v)
}

fn reduction(spec: &GSpec, opts: &Options, level: u32) -> Result<Verdict> {
    let rule = Some(Rule::RwReduction);
    let g = match spec.truncation_at(level) {
        Ok(g) if g.order() > opts.cap => {
            return Ok(Verdict::unknown(
                rule,
                level,
                format!("subgroup enumeration in a group of order {} exceeds cap {}", g.order(), opts.cap),
            ))
        }
        r => r?,
    };
    let subs = g.subgroups_up_to_conjugacy(opts.cap)?;
    let sub_opts = Options {
        quotient_level: None,
        q_hint: None,
        designated_s: None,
        ..opts.clone()
    };
    let mut nodes = Vec::new();
    for elems in subs {
        if elems.len() == g.order() {
            continue;
        }
        let sub = spec.sub_spec(level, &g, &elems)?;
        let Some(d) = elementary_data(&sub.spec, &sub_opts)? else {
            continue;
        };
        let q = match d.q {
            QType::L => spec.l(),
            QType::Prime(q) => q,
        };
        nodes.push(ReductionNode {
            generators: g.generators_of(&elems).iter().map(|&x| g.label(x)).collect(),
            order: elems.len(),
            gamma_exponent: sub.gamma_exponent,
            q,
            verdict: verdict(&sub.spec, &sub_opts)?,
        });
    }

    let mut v = Verdict::trivial(Rule::RwReduction, level);
    if nodes.iter().any(|n| n.verdict.status == Status::Unknown) {
        v.status = Status::Unknown;
        v.resource = nodes.iter().find_map(|n| n.verdict.resource.clone());
    } else {
        let mut obligations: Vec<Obligation> = Vec::new();
        for n in &nodes {
            for o in &n.verdict.obligations {
                if !obligations.iter().any(|p| p.key() == o.key()) {
                    obligations.push(o.clone());
                }
            }
        }
        if !obligations.is_empty() {
            obligations.sort_by(|a, b| a.key().cmp(&b.key()));
            v.status = Status::ConditionalOnProL;
            v.obligations = obligations;
        }
    }
    v.reduction_tree = nodes;
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{abelian, cyclic, heisenberg, permutation_group, semidirect, GroupAut};

    fn power_spec(n: usize, k: usize) -> GSpec {
        let g = cyclic(n).unwrap();
        let a = GroupAut::from_generator_images(&g, &[1], &[k]).unwrap();
        GSpec::new(g, a, 3).unwrap()
    }

    fn run(spec: &GSpec) -> Verdict {
        verdict(spec, &Options::default()).unwrap()
    }

    #[test]
    fn known_cases() {
        let h = heisenberg(3).unwrap();
        let spec = GSpec::new(h.clone(), GroupAut::identity(&h), 3).unwrap();
        assert_eq!(classify(&spec, &Options::default()).unwrap(), GroupClass::DirectProduct);
        let v = run(&spec);
        assert_eq!((v.status, v.rule), (Status::Trivial, Some(Rule::KnownCasesI)));
        assert!(v.footnote.is_none());

        let z7 = power_spec(7, 2);
        assert!(is_q_elementary(&z7, QType::L, None).unwrap().is_some());
        assert_eq!(classify(&z7, &Options::default()).unwrap(), GroupClass::HPrimeToL);
        assert_eq!(run(&z7).rule, Some(Rule::KnownCasesIII));

        let z9 = power_spec(9, 4);
        assert!(matches!(
            classify(&z9, &Options::default()).unwrap(),
            GroupClass::ProLAbelianIndexL(a) if a.len() == 9
        ));
        let v = run(&z9);
        assert_eq!((v.status, v.rule), (Status::Trivial, Some(Rule::KnownCasesII)));
        assert!(v.obligations.is_empty());
    }

    #[test]
    fn footnote_for_mixed_direct_product() {
        let g = cyclic(6).unwrap();
        let spec = GSpec::new(g.clone(), GroupAut::identity(&g), 3).unwrap();
        let v = run(&spec);
        assert_eq!(v.rule, Some(Rule::KnownCasesI));
        assert_eq!(v.footnote.as_deref(), Some(FOOTNOTE));
    }

    #[test]
    fn cap_gives_unknown() {
        let h = heisenberg(3).unwrap();
        // b ↦ ab, c ↦ c, a ↦ a
        let gens = h.generators().to_vec();
        let imgs = [h.mul(gens[2], gens[0]), gens[1], gens[2]];
        let a = GroupAut::from_generator_images(&h, &gens, &imgs).unwrap();
        let spec = GSpec::new(h, a, 3).unwrap();
        assert_eq!(run(&spec).rule, Some(Rule::KnownCasesII));
        let v = verdict(&spec, &Options { cap: 50, ..Options::default() }).unwrap();
        assert_eq!(v.status, Status::Unknown);
        assert!(v.resource.unwrap().contains("81"));
    }

    #[test]
    fn q_elementary_prime_to_l() {
        // S3 with α conjugation by a 3-cycle: 2-elementary, l = 3
        let h = semidirect(&[3], &[2], &[vec![vec![2]]]).unwrap();
        let r = h.generators()[0];
        let spec = GSpec::new(h.clone(), GroupAut::inner(&h, r), 3).unwrap();
        assert!(matches!(
            classify(&spec, &Options::default()).unwrap(),
            GroupClass::QElementary(ElementaryData { q: QType::Prime(2), .. })
        ));
        assert_eq!(run(&spec).rule, Some(Rule::ThmSk2));
    }

    #[test]
    fn l_elementary_split() {
        // (ℤ/7 × ℤ/3²) with γ: s ↦ s², a ↦ a, b ↦ ab
        let h = abelian(&[7, 3, 3]).unwrap();
        let gens = h.generators().to_vec();
        let imgs = [h.pow(gens[0], 2), gens[1], h.mul(gens[1], gens[2])];
        let alpha = GroupAut::from_generator_images(&h, &gens, &imgs).unwrap();
        let spec = GSpec::new(h, alpha, 3).unwrap();
        assert!(matches!(
            classify(&spec, &Options::default()).unwrap(),
            GroupClass::QElementary(ElementaryData { q: QType::L, .. })
        ));
        let v = run(&spec);
        assert_eq!((v.status, v.rule), (Status::Trivial, Some(Rule::ThmSk1)));
    }

    #[test]
    fn l_elementary_with_obligations() {
        let h = semidirect(&[7], &[9, 3], &[vec![vec![1]], vec![vec![2]]]).unwrap();
        let gens = h.generators().to_vec();
        let imgs = [gens[0], h.pow(gens[1], 4), gens[2]];
        let alpha = GroupAut::from_generator_images(&h, &gens, &imgs).unwrap();
        let spec = GSpec::new(h, alpha, 3).unwrap();
        let v = run(&spec);
        assert_eq!((v.status, v.rule), (Status::ConditionalOnProL, Some(Rule::ThmSk1)));
        let mut obl: Vec<(usize, usize, u32)> = v
            .obligations
            .iter()
            .map(|o| (o.conductor, o.u_i.h_order, o.u_i.m))
            .collect();
        obl.sort_unstable();
        assert_eq!(obl, vec![(1, 27, 1), (7, 9, 1)]);
        assert!(v.obligations.iter().all(|o| o.spec.is_pro_l()));
    }

    #[test]
    fn general_reduces_to_elementary() {
        let h = permutation_group(&[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]).unwrap();
        assert_eq!(h.order(), 12);
        let g = (0..12).find(|&x| h.element_order(x) == 3).unwrap();
        let spec = GSpec::new(h.clone(), GroupAut::inner(&h, g), 3).unwrap();
        assert_eq!(classify(&spec, &Options::default()).unwrap(), GroupClass::General);
        let v = run(&spec);
        assert_eq!(v.rule, Some(Rule::RwReduction));
        assert_eq!(v.status, Status::Trivial);
        assert!(!v.reduction_tree.is_empty());
        assert!(v.reduction_tree.iter().all(|n| n.verdict.status == Status::Trivial));
        let again = run(&spec);
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            serde_json::to_string(&again).unwrap()
        );
    }
}
