use serde::{Deserialize, Serialize};

use crate::groups::{abelian, cyclic, heisenberg, permutation_group, semidirect, FiniteGroup, GSpec, GroupAut};

/// How H is given.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Table,
    Cyclic,
    Product,
    Semidirect,
    Builtin,
}

/// γ's action on H: a power map h ↦ h^k, or one image per generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Action {
    Power(i64),
    Images(Vec<Vec<i64>>),
}

/// A group spec file. Elements are written as exponent vectors over the
/// generators of H: `[e₁, …, e_k]` stands for g₁^{e₁}⋯g_k^{e_k}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub kind: Kind,
    pub l: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complement: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<Vec<Vec<Vec<i64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Action>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub designated_s: Option<Vec<i64>>,
}

/// A parse or validation failure with its position in the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

/// A parsed spec together with the file it came from.
#[derive(Clone, Debug)]
pub struct LoadedSpec {
    pub file: GroupSpecFile,
    pub spec: GSpec,
    pub designated_s: Option<usize>,
}

const BUILTIN_GROUPS: &[&str] = &["heisenberg27", "a4"];

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, col)
}

/// Position of `key = …` at the start of a line, or 1:1.
fn key_location(src: &str, key: &str) -> (usize, usize) {
    let mut offset = 0;
    for line in src.split_inclusive('\n') {
        let t = line.trim_start();
        if let Some(rest) = t.strip_prefix(key) {
            if rest.trim_start().starts_with('=') {
                return line_col(src, offset + line.len() - t.len());
            }
        }
        offset += line.len();
    }
    (1, 1)
}

fn at(src: &str, key: &str, message: impl Into<String>) -> ParseError {
    let (line, column) = key_location(src, key);
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

fn element(h: &FiniteGroup, exps: &[i64]) -> Result<usize, String> {
    let gens = h.generators();
    if exps.len() != gens.len() {
        return Err(format!(
            "exponent vector {exps:?} has {} entries, H has {} generators",
            exps.len(),
            gens.len()
        ));
    }
    let mut x = h.identity();
    for (&g, &e) in gens.iter().zip(exps) {
        let k = e.rem_euclid(h.element_order(g) as i64) as usize;
        x = h.mul(x, h.pow(g, k));
    }
    Ok(x)
}

fn builtin_group(name: &str) -> Option<FiniteGroup> {
    match name {
        "heisenberg27" => heisenberg(3).ok(),
        "a4" => permutation_group(&[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]).ok(),
        _ => None,
    }
}

impl GroupSpecFile {
    pub fn parse(src: &str) -> Result<Self, ParseError> {
        toml::from_str(src).map_err(|e| {
            let (line, column) = e.span().map_or((1, 1), |s| line_col(src, s.start));
            ParseError {
                line,
                column,
                message: e.message().to_string(),
            }
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec files serialize")
    }

    fn used_keys(&self) -> Vec<&'static str> {
        let mut keys = Vec::new();
        let present = [
            ("orders", self.orders.is_some()),
            ("normal", self.normal.is_some()),
            ("complement", self.complement.is_some()),
            ("twist", self.twist.is_some()),
            ("table", self.table.is_some()),
            ("generators", self.generators.is_some()),
            ("builtin", self.builtin.is_some()),
        ];
        for (k, p) in present {
            if p {
                keys.push(k);
            }
        }
        keys
    }

    fn build_group(&self, src: &str) -> Result<FiniteGroup, ParseError> {
        let allowed: &[&str] = match self.kind {
            Kind::Cyclic | Kind::Product => &["orders"],
            Kind::Semidirect => &["normal", "complement", "twist"],
            Kind::Table => &["table", "generators"],
            Kind::Builtin => &["builtin"],
        };
        if let Some(k) = self.used_keys().into_iter().find(|k| !allowed.contains(k)) {
            return Err(at(src, k, format!("key `{k}` does not apply to kind {:?}", self.kind)));
        }
        let missing = |k: &str| at(src, "kind", format!("kind {:?} requires `{k}`", self.kind));
        let group = match self.kind {
            Kind::Cyclic => {
                let o = self.orders.as_ref().ok_or_else(|| missing("orders"))?;
                if o.len() != 1 {
                    return Err(at(src, "orders", "kind cyclic takes exactly one order"));
                }
                cyclic(o[0]).map_err(|e| at(src, "orders", e.to_string()))?
            }
            Kind::Product => {
                let o = self.orders.as_ref().ok_or_else(|| missing("orders"))?;
                abelian(o).map_err(|e| at(src, "orders", e.to_string()))?
            }
            Kind::Semidirect => {
                let n = self.normal.as_ref().ok_or_else(|| missing("normal"))?;
                let c = self.complement.as_ref().ok_or_else(|| missing("complement"))?;
                let t = self.twist.clone().unwrap_or_default();
                semidirect(n, c, &t).map_err(|e| at(src, "twist", e.to_string()))?
            }
            Kind::Table => {
                let t = self.table.clone().ok_or_else(|| missing("table"))?;
                let gens = self.generators.clone().ok_or_else(|| missing("generators"))?;
                FiniteGroup::from_table(t)
                    .and_then(|g| g.with_generators(gens))
                    .map_err(|e| at(src, "table", e.to_string()))?
            }
            Kind::Builtin => {
                let name = self.builtin.as_deref().ok_or_else(|| missing("builtin"))?;
                builtin_group(name).ok_or_else(|| {
                    at(src, "builtin", format!("unknown builtin group `{name}`; known: {}", BUILTIN_GROUPS.join(", ")))
                })?
            }
        };
        Ok(group)
    }

    /// Builds the group; `src` is only used to locate errors.
    pub fn load(&self, src: &str) -> Result<LoadedSpec, ParseError> {
        let h = self.build_group(src)?;
        let alpha = match (&self.action, &self.inner) {
            (Some(_), Some(_)) => return Err(at(src, "inner", "give either `action` or `inner`, not both")),
            (None, None) => GroupAut::identity(&h),
            (None, Some(g)) => {
                let g = element(&h, g).map_err(|e| at(src, "inner", e))?;
                GroupAut::inner(&h, g)
            }
            (Some(Action::Power(k)), None) => {
                let e = h.exponent() as i64;
                let k = k.rem_euclid(e.max(1)) as usize;
                GroupAut::new(&h, (0..h.order()).map(|x| h.pow(x, k)).collect())
                    .map_err(|e| at(src, "action", e.to_string()))?
            }
            (Some(Action::Images(imgs)), None) => {
                let imgs = imgs
                    .iter()
                    .map(|v| element(&h, v))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| at(src, "action", e))?;
                GroupAut::from_generator_images(&h, h.generators(), &imgs)
                    .map_err(|e| at(src, "action", e.to_string()))?
            }
        };
        let designated_s = match &self.designated_s {
            None => None,
            Some(v) => Some(element(&h, v).map_err(|e| at(src, "designated_s", e))?),
        };
        let spec = GSpec::with_m(h, alpha, self.l, self.m).map_err(|e| {
            let msg = e.to_string();
            let key = if msg.contains("not an odd prime") {
                "l"
            } else if msg.contains("declared m") {
                "m"
            } else if self.inner.is_some() {
                "inner"
            } else {
                "action"
            };
            at(src, key, msg)
        })?;
        Ok(LoadedSpec {
            file: self.clone(),
            spec,
            designated_s,
        })
    }
}

/// Parses and builds a spec from source text.
pub fn load_spec(src: &str) -> Result<LoadedSpec, ParseError> {
    GroupSpecFile::parse(src)?.load(src)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn located_errors() {
        let e = load_spec("kind = \"cyclic\"\nl = 3\norders = [7]\naction = 3\n").unwrap_err();
        assert_eq!(e.line, 4);
        assert!(e.message.contains("order 6"), "{e}");
        let e = load_spec("kind = \"cyclic\"\nl = 3\nbogus = 1\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = load_spec("kind = \"cyclic\"\nl = 3\n\ntable = [[0]]\n").unwrap_err();
        assert_eq!((e.line, e.column), (4, 1));
        let e = load_spec("kind = \"builtin\"\nl = 3\nbuiltin = \"m11\"\n").unwrap_err();
        assert!(e.message.contains("unknown builtin"));
    }

    #[test]
    fn builds_specs() {
        let s = load_spec("kind = \"cyclic\"\nl = 3\norders = [9]\naction = 4\n").unwrap();
        assert_eq!((s.spec.h().order(), s.spec.m()), (9, 1));
        let s = load_spec("kind = \"builtin\"\nbuiltin = \"a4\"\nl = 3\ninner = [1, 0]\n").unwrap();
        assert_eq!(s.spec.alpha().order(), 3);
        let s = load_spec(
            "kind = \"table\"\nl = 3\ntable = [[0, 1, 2], [1, 2, 0], [2, 0, 1]]\ngenerators = [1]\naction = [[1]]\n",
        )
        .unwrap();
        assert_eq!(s.spec.m(), 0);
    }

    fn arb_file() -> impl Strategy<Value = GroupSpecFile> {
        (
            proptest::option::of("[a-z][a-z0-9_]{0,8}"),
            proptest::collection::vec(1usize..12, 1..4),
            proptest::option::of(prop_oneof![
                any::<i8>().prop_map(|k| Action::Power(k as i64)),
                proptest::collection::vec(proptest::collection::vec(-5i64..5, 1..4), 1..4).prop_map(Action::Images),
            ]),
            proptest::option::of(0u32..3),
            proptest::option::of(proptest::collection::vec(-3i64..3, 1..4)),
        )
            .prop_map(|(name, orders, action, m, designated_s)| GroupSpecFile {
                name,
                kind: Kind::Product,
                l: 3,
                orders: Some(orders),
                normal: None,
                complement: None,
                twist: None,
                table: None,
                generators: None,
                builtin: None,
                action,
                inner: None,
                m,
                designated_s,
            })
    }

    proptest! {
        #[test]
        fn toml_round_trip(f in arb_file()) {
            let back = GroupSpecFile::parse(&f.to_toml()).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
