//! Equivalence classes of binary words under keyword substitution.
//!
//! Fix a keyword `a` of length `m + 1`. Two words of length `n` are equivalent when
//! one can be turned into the other by repeatedly replacing an occurrence of `a` with
//! its bitwise negation, or the negation with `a`. The number of classes is
//! `F_0 + F_1 + ... + F_n` for the m-step Fibonacci numbers, whatever the keyword.
//!
//! Modules:
//! - [`words`]: bit-packed words, keywords, simple maps, commutativity
//! - [`sequences`]: m-step Fibonacci numbers, partial sums, representation counts
//! - [`classes`]: the union-find partition engine and size histograms
//! - [`spectra`]: singleton-class counts via correlation polynomials
//! - [`graphs`]: the substitution graph, distances, bipartiteness, isomorphism

pub mod canon;
pub mod classes;
pub mod error;
pub mod graphs;
pub mod sequences;
pub mod settings;
pub mod spectra;
pub mod union_find;
pub mod words;

pub use canon::{canonical_form, Certificate};
pub use classes::{
    class_of, count_classes, histogram, partition, verify_theorem, ClassPartition, SizeHistogram,
    TheoremReport,
};
pub use error::{Error, Result};
pub use graphs::{
    build_graph, canonical_histogram, distance, is_bipartite, isomorphic, SubstitutionGraph,
};
pub use sequences::{
    count_representations, fib, max_representations, partial_sum, word_value, zeckendorf,
    FibSequence, PartialSums, Representation,
};
pub use settings::Settings;
pub use spectra::{
    fingerprint, same_size1_counts, size1_series_brute, size1_series_gf, CorrelationFingerprint,
    CorrelationPolynomials, SeriesCoefficients,
};
pub use words::{keyword_orbit, Keyword, Word};
