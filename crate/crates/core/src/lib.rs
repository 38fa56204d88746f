//! Labelled transition systems for the ROSA Markovian process algebra.
//!
//! The pipeline is [`parse_program`] to get a [`DefinitionEnv`], then
//! [`build_lts`] to explore the state space, then one of the exporters in
//! [`export`].
//!
//! ```
//! use rosa_core::{build_lts, parse_program, BuildConfig, NodeKind};
//!
//! let env = parse_program("<a,0.3>.0||{a,c}<b,inf>.0").unwrap();
//! let lts = build_lts(&env, BuildConfig::default()).unwrap();
//! assert_eq!(lts.nodes.len(), 2);
//! assert_eq!(lts.nodes[1].kind, NodeKind::Deadlock);
//! ```

pub mod ast;
pub mod canon;
pub mod export;
pub mod lts;
pub mod numeric;
pub mod parser;
pub mod semantics;

pub use ast::{pretty_print, structural_equal, ActionName, AstError, DefinitionEnv, Process, SyncSet};
pub use canon::{canonical_key, canonicalize, CanonicalKey};
pub use export::{to_dot, to_json, to_text, ExportOptions, NodeLabels};
pub use lts::{build_lts, BuildConfig, BuildError, Lts, LtsEdge, LtsNode, LtsStats, StateIdentity};
pub use numeric::{NumericError, Probability, Rate};
pub use parser::{parse_process, parse_process_str, parse_program, tokenize, ParseError, Position, Token, TokenKind};
pub use semantics::{check_guarded, classify, NodeKind, SemanticsError, TransitionLabel};
