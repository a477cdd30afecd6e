//! Diagnostic probes for pointwise paraphrase-identification scorers.
//!
//! A scorer maps a sentence pair to a paraphrase score in `[0, 1]`. The
//! probes here check properties such a score should have regardless of its
//! accuracy: invariance to sentence order, recognition of identical pairs,
//! and ranking the identical pair above every other candidate for the same
//! query sentence.
//!
//! Modules, in pipeline order:
//!
//! * [`corpus`]: dataset parsers and the canonical TSV form
//! * [`transforms`]: reversed, identical and augmented pair sets
//! * [`scorer`]: the bag-of-words baseline and the external scorer client
//! * [`probes`]: metric computation
//! * [`report`] and [`run`]: orchestration and CSV / JSON emission

pub mod corpus;
pub mod probes;
pub mod report;
pub mod run;
pub mod scorer;
pub mod transforms;

pub use corpus::{Corpus, Label, Sentence, SentencePair, SourceFormat};
pub use scorer::{Score, Scorer, Threshold};
