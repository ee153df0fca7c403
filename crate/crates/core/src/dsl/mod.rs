//! The `.sas` model language: lexer, parser with positioned diagnostics,
//! link pass and canonical serializer.

mod diagnostic;
mod events;
mod lexer;
mod parse;
mod serialize;
mod source;

pub use diagnostic::{Code, Diagnostic, Severity};
pub use events::parse_events;
pub use parse::{parse, Parsed};
pub use serialize::serialize;
pub use source::{Decl, KnowledgeDecl, LayerDecl, LineSpan, LinkError, Provenance, SourceModel};
