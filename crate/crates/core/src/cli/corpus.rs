/// Spec files shipped with the binary, addressable as `builtin:<name>`.
pub const CORPUS: &[(&str, &str)] = &[
    ("cyclic9", include_str!("../../corpus/cyclic9.toml")),
    ("heisenberg27", include_str!("../../corpus/heisenberg27.toml")),
    ("z9_h4", include_str!("../../corpus/z9_h4.toml")),
    ("transvection", include_str!("../../corpus/transvection.toml")),
    ("z7_s2", include_str!("../../corpus/z7_s2.toml")),
    ("wrapped_transvection", include_str!("../../corpus/wrapped_transvection.toml")),
    ("wrapped_cyclic9", include_str!("../../corpus/wrapped_cyclic9.toml")),
    ("heisenberg27_twisted", include_str!("../../corpus/heisenberg27_twisted.toml")),
];

pub fn builtin(name: &str) -> Option<&'static str> {
    CORPUS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}
