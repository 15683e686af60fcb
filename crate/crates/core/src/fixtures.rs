//! Bundled group definition files.

use crate::specfile::{parse_spec, SpecError, SpecFile};

pub const FIXTURES: &[(&str, &str)] = &[
    ("galilei", include_str!("../fixtures/galilei.spec")),
    ("hw", include_str!("../fixtures/hw.spec")),
    ("rk", include_str!("../fixtures/rk.spec")),
    ("schrodinger", include_str!("../fixtures/schrodinger.spec")),
    ("su2", include_str!("../fixtures/su2.spec")),
    ("template", include_str!("../fixtures/template.spec")),
    ("virasoro", include_str!("../fixtures/virasoro.spec")),
];

pub fn fixture_text(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Parses a bundled fixture.
pub fn load(name: &str) -> Result<SpecFile, SpecError> {
    let text = fixture_text(name).ok_or_else(|| SpecError::Invalid(format!("unknown fixture `{name}`")))?;
    parse_spec(text)
}
