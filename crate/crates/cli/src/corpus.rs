//! Bundled example sessions: each parses and carries its own verify
//! directives.

pub const CORPUS: &[(&str, &str)] = &[
    ("heisenberg-n2", include_str!("../corpus/heisenberg-n2.session")),
    ("ore-n3", include_str!("../corpus/ore-n3.session")),
    ("ore-n4", include_str!("../corpus/ore-n4.session")),
    ("ore-n6", include_str!("../corpus/ore-n6.session")),
    ("ore-nonperiodic", include_str!("../corpus/ore-nonperiodic.session")),
    ("ore-zhang", include_str!("../corpus/ore-zhang.session")),
    ("sklyanin", include_str!("../corpus/sklyanin.session")),
    ("invariant-n2-j1", include_str!("../corpus/invariant-n2-j1.session")),
    ("invariant-n3-j1", include_str!("../corpus/invariant-n3-j1.session")),
    ("invariant-n3-j2", include_str!("../corpus/invariant-n3-j2.session")),
];

pub fn lookup(name: &str) -> Option<&'static str> {
    CORPUS.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn names() -> Vec<&'static str> {
    CORPUS.iter().map(|(n, _)| *n).collect()
}
