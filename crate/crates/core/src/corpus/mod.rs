//! Protocol documents and their annotations: CoNLL and BRAT standoff I/O,
//! tokenization, mention/tag alignment, statistics and seeded splits.

mod align;
mod conll;
mod document;
mod split;
mod standoff;
mod stats;
pub mod synthetic;
mod tokenize;

pub use align::{align_mentions_to_tags, Alignment, BoundaryPolicy};
pub use conll::{parse_conll, write_conll, ConllSentence, ConllToken};
pub use document::{
    check_no_overlap, EntityMention, LineSpan, ProtocolDocument, TaggedDocument, TaggedSentence,
    Token,
};
pub use split::{generate_split, split_collisions, Side, SplitSpec};
pub use standoff::{parse_standoff, write_standoff, StandoffDocument, StandoffOptions};
pub use stats::{corpus_stats, OovCounts, StatsReport};
pub use tokenize::tokenize;
