//! Approximate dictionary lookup under edit distance and fuzzy top-k autocompletion.
//!
//! The crate has three families of indexes built from one [`Lexicon`]:
//!
//! * [`hashdict`]: linear-probing hash tables with substitution lists, answering
//!   `k = 1` and `k = 2` edit-distance queries, with an optional rank-compacted form.
//! * [`bidtrie`]: a forward trie plus a trie over mirrored words, answering `k = 1`
//!   queries by meeting in the middle.
//! * [`autocomplete`]: a path-compressed scored trie returning the best `k`
//!   completions of a prefix typed with at most one error.
//!
//! [`Engine`] bundles all of them and reads/writes the `LEXIS1` index container.

pub mod autocomplete;
pub mod bidtrie;
pub mod bits;
pub mod codec;
pub mod engine;
pub mod error;
pub mod hash;
pub mod hashdict;
pub mod text;

pub use autocomplete::{CompactScoredTrie, Method, Suggestion, SuggestionPage};
pub use bidtrie::BidirectionalTrie;
pub use engine::{Engine, EngineConfig, SearchMethod};
pub use error::{Error, Result};
pub use hash::{PolyHash, QueryPrecomp};
pub use hashdict::{ApproxDict, CompactHashIndex, HashIndex, Variant};
pub use text::{Lexicon, WordId};
