use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// Stable diagnostic codes. The string form is part of the file-format
/// contract and must not change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Code {
    UnexpectedChar,
    Syntax,
    InvalidIdent,
    UnknownDecl,
    UnknownKey,
    DuplicateSection,
    Unterminated,
    DuplicateDecl,
    DuplicateMember,
    LevelRange,
    UnknownTaxon,
    TaxonLevel,
    EventType,
    DanglingEndpoint,
    Unresolved,
    EventsSyntax,
    EmptySystem,
    UnknownBehavior,
}

impl Code {
    pub const ALL: [Code; 18] = [
        Code::UnexpectedChar,
        Code::Syntax,
        Code::InvalidIdent,
        Code::UnknownDecl,
        Code::UnknownKey,
        Code::DuplicateSection,
        Code::Unterminated,
        Code::DuplicateDecl,
        Code::DuplicateMember,
        Code::LevelRange,
        Code::UnknownTaxon,
        Code::TaxonLevel,
        Code::EventType,
        Code::DanglingEndpoint,
        Code::Unresolved,
        Code::EventsSyntax,
        Code::EmptySystem,
        Code::UnknownBehavior,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Code::UnexpectedChar => "E_UNEXPECTED_CHAR",
            Code::Syntax => "E_SYNTAX",
            Code::InvalidIdent => "E_INVALID_IDENT",
            Code::UnknownDecl => "E_UNKNOWN_DECL",
            Code::UnknownKey => "E_UNKNOWN_KEY",
            Code::DuplicateSection => "E_DUPLICATE_SECTION",
            Code::Unterminated => "E_UNTERMINATED",
            Code::DuplicateDecl => "E_DUPLICATE_DECL",
            Code::DuplicateMember => "E_DUPLICATE_MEMBER",
            Code::LevelRange => "E_LEVEL_RANGE",
            Code::UnknownTaxon => "E_UNKNOWN_TAXON",
            Code::TaxonLevel => "E_TAXON_LEVEL",
            Code::EventType => "E_EVENT_TYPE",
            Code::DanglingEndpoint => "E_DANGLING_ENDPOINT",
            Code::Unresolved => "E_UNRESOLVED",
            Code::EventsSyntax => "E_EVENTS_SYNTAX",
            Code::EmptySystem => "W_EMPTY_SYSTEM",
            Code::UnknownBehavior => "W_UNKNOWN_BEHAVIOR",
        }
    }

    pub fn severity(self) -> Severity {
        match self {
            Code::EmptySystem | Code::UnknownBehavior => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Code {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// A positioned message. Lines and columns are 1-based; columns count
/// characters, not bytes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub line: usize,
    pub column: usize,
    pub code: Code,
    pub message: String,
}

impl Diagnostic {
    pub fn new(code: Code, line: usize, column: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: code.severity(),
            line,
            column,
            code,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `path:line:col: severity[CODE]: message`, optionally with ANSI color
    /// on the severity.
    pub fn render(&self, path: &str, color: bool) -> String {
        let sev = match (self.severity, color) {
            (Severity::Error, false) => "error".to_string(),
            (Severity::Warning, false) => "warning".to_string(),
            (Severity::Error, true) => "\x1b[31merror\x1b[0m".to_string(),
            (Severity::Warning, true) => "\x1b[33mwarning\x1b[0m".to_string(),
        };
        format!(
            "{path}:{}:{}: {sev}[{}]: {}",
            self.line, self.column, self.code, self.message
        )
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}
