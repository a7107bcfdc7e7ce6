use serde::Serialize;

use crate::chars::CharacterTable;
use crate::cli::spec_file::{GroupSpecFile, LoadedSpec};
use crate::error::{Error, Result};
use crate::groups::{is_q_elementary, QType};
use crate::sk1::{SpecSummary, Verdict};
use crate::wedderburn::{
    centralizer_check, decompose, e_i_family, elementary_decomposition, orbit_analysis, verify_prop_st,
    BaseComponent, CentralizerReport, Check, ComponentReport, PropStReport, XDescriptor,
};

/// Bumped only when existing fields change meaning; new fields are appended.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct SpecEcho {
    pub source: String,
    pub file: GroupSpecFile,
    pub summary: SpecSummary,
    pub fin_order: usize,
}

impl SpecEcho {
    pub fn new(source: &str, loaded: &LoadedSpec) -> Self {
        SpecEcho {
            source: source.to_string(),
            file: loaded.file.clone(),
            summary: SpecSummary::of(&loaded.spec),
            fin_order: loaded.spec.fin_order(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Deviation {
    pub topic: &'static str,
    pub note: &'static str,
}

pub const DEVIATIONS: &[Deviation] = &[
    Deviation {
        topic: "surrogate-field",
        note: "Q_l-rationality is modeled as invariance under the decomposition group of Q(zeta_N); \
               the fraction field of Z_l[[Gamma_0]] is modeled by the rational function field in T = gamma^{l^m}",
    },
    Deviation {
        topic: "v_chi",
        note: "v_chi is the least j >= 1 such that the gamma^j-twist of eta is a decomposition-group conjugate of eta",
    },
    Deviation {
        topic: "paper-asserted",
        note: "schur_index, matrix_degree and cyclic_presentation are derived from orbit data and labeled \
               paper-asserted, not surrogate-verified; all dimensions and centres are computed",
    },
    Deviation {
        topic: "schur-index",
        note: "for non-pro-l H the Schur index is reported only when alpha is inner (split case); otherwise undetermined",
    },
];

#[derive(Clone, Debug, Serialize)]
pub struct OrbitSection {
    pub members: Vec<usize>,
    pub prop_st: PropStReport,
    pub centralizer: Option<CentralizerReport>,
    pub centralizer_skipped: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ElementaryPart {
    pub conductor: usize,
    pub j: usize,
    pub zeta_degree: usize,
    pub dim: usize,
    pub x: XDescriptor,
    pub u_i: SpecSummary,
    pub checks: Vec<Check>,
    pub base_components: Vec<BaseComponent>,
    pub orbits: Vec<OrbitSection>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ElementarySection {
    pub s_order: usize,
    pub family: Vec<Check>,
    pub parts: Vec<ElementaryPart>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub spec: SpecEcho,
    pub dim: usize,
    pub degrees: Vec<usize>,
    pub components: Vec<ComponentReport>,
    pub idempotent_checks: Vec<Check>,
    pub elementary: Option<ElementarySection>,
    pub verdict: Option<Verdict>,
    pub deviations: &'static [Deviation],
    pub failure: Option<String>,
}

impl ReportDocument {
    pub fn empty(spec: SpecEcho) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            spec,
            dim: 0,
            degrees: Vec::new(),
            components: Vec::new(),
            idempotent_checks: Vec::new(),
            elementary: None,
            verdict: None,
            deviations: DEVIATIONS,
            failure: None,
        }
    }
}

/// The e_i side for l-elementary specs, `None` otherwise.
pub fn elementary_section(loaded: &LoadedSpec) -> Result<Option<ElementarySection>> {
    let spec = &loaded.spec;
    let Some(data) = is_q_elementary(spec, QType::L, loaded.designated_s)? else {
        return Ok(None);
    };
    let stars = elementary_decomposition(spec, &data)?;
    let family = e_i_family(&stars)?.into_result()?;
    let mut parts = Vec::new();
    for s in &stars {
        let mut orbits = Vec::new();
        for g in orbit_analysis(s)? {
            let prop_st = verify_prop_st(s, &g)?;
            let ln = s.l().pow(s.x.n - g.d);
            let (centralizer, centralizer_skipped) = if ln == 1 {
                (None, Some("l^{n-d} = 1: W̃ = V = W, covered by the d = n checks".to_string()))
            } else {
                match centralizer_check(s, &g, None) {
                    Ok(r) => (Some(r), None),
                    Err(e @ Error::ResourceLimit { .. }) => (None, Some(e.to_string())),
                    Err(e) => return Err(e),
                }
            };
            orbits.push(OrbitSection {
                members: g.members.clone(),
                prop_st,
                centralizer,
                centralizer_skipped,
            });
        }
        parts.push(ElementaryPart {
            conductor: s.beta.conductor(),
            j: s.beta.j,
            zeta_degree: s.zeta_degree,
            dim: s.dim,
            x: s.x.clone(),
            u_i: SpecSummary::of(&s.u_i.spec),
            checks: s.verified.clone(),
            base_components: s.components.clone(),
            orbits,
        });
    }
    Ok(Some(ElementarySection {
        s_order: data.s_order,
        family: family.checks,
        parts,
    }))
}

/// Fills a report; on failure the document keeps what was computed and
/// names the failing identity.
pub fn build_report(doc: &mut ReportDocument, loaded: &LoadedSpec, verdict: impl FnOnce() -> Result<Verdict>) -> Result<()> {
    let d = decompose(&loaded.spec)?;
    doc.dim = d.dim;
    doc.degrees = d.degrees;
    doc.components = d.components;
    doc.idempotent_checks = d.family;
    doc.elementary = elementary_section(loaded)?;
    doc.verdict = Some(verdict()?);
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassRow {
    pub size: usize,
    pub representative: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableDocument {
    pub schema_version: u32,
    pub order: usize,
    pub exponent: usize,
    pub classes: Vec<ClassRow>,
    pub degrees: Vec<usize>,
    /// values[χ][class], each a cyclotomic number in the power basis.
    pub values: Vec<Vec<String>>,
}

impl TableDocument {
    pub fn new(h: &crate::groups::FiniteGroup, t: &CharacterTable) -> Self {
        TableDocument {
            schema_version: SCHEMA_VERSION,
            order: h.order(),
            exponent: t.exponent,
            classes: t
                .classes
                .iter()
                .map(|c| ClassRow {
                    size: c.len(),
                    representative: h.label(c[0]),
                })
                .collect(),
            degrees: t.degrees(),
            values: t
                .chars
                .iter()
                .map(|c| c.values.iter().map(|v| v.to_string()).collect())
                .collect(),
        }
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "order {}, exponent {}, {} classes\n",
            self.order,
            self.exponent,
            self.classes.len()
        );
        out.push_str("classes:");
        for c in &self.classes {
            out.push_str(&format!(" {}[{}]", c.representative, c.size));
        }
        out.push('\n');
        for (i, (d, row)) in self.degrees.iter().zip(&self.values).enumerate() {
            out.push_str(&format!("chi{i} (degree {d}): {}\n", row.join(" | ")));
        }
        out
    }
}
