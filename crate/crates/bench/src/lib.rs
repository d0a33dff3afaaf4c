//! Shared inputs for the criterion benchmarks.

use kwclass_core::Keyword;

/// The keyword/length pairs of the three published histogram tables.
pub fn table_cases() -> Vec<(Keyword, usize)> {
    [
        ("110", 6),
        ("101", 6),
        ("10001", 12),
        ("01001", 12),
        ("10000", 17),
        ("01000", 17),
    ]
    .into_iter()
    .map(|(a, n)| (a.parse().expect("valid keyword"), n))
    .collect()
}

pub fn keyword(s: &str) -> Keyword {
    s.parse().expect("valid keyword")
}
