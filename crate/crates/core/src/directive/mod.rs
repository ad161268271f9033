//! `#@IVISIT:` directive extraction, parsing, canonical serialization and
//! merging into a [`WidgetCollection`](crate::model::WidgetCollection).
//!
//! ```
//! use workbench_core::directive::parse_source;
//!
//! let src = "x = 0\n#@IVISIT:SLIDER & name & [200,1] & [0,9,3,1] & var & -1 & int & 0\n";
//! let records = parse_source(src).unwrap();
//! assert_eq!(records.len(), 1);
//! ```

mod merge;
mod parse;
mod scan;
mod serialize;

pub use merge::{merge_into_collection, MergeOptions, MergeReport};
pub use parse::{parse_directive, parse_directives, DirectiveRecord};
pub use scan::{scan_source, Directive, Keyword, PREFIX};
pub use serialize::{serialize_records, serialize_widget};

use alloc::string::String;

/// A parse failure, tagged with the 1-based source line.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unknown keyword `{0}`")]
    UnknownKeyword(String),
    #[error("{keyword}: expected {expected} fields, found {found}")]
    Arity {
        keyword: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("rangelist arity: expected [min,max,nticks,increment], found {0} elements")]
    RangeListArity(usize),
    #[error("list arity: expected {expected} elements, found {found}")]
    ListArity { expected: usize, found: usize },
    #[error("expected a bracketed list, found `{0}`")]
    NotAList(String),
    #[error("unparseable number `{0}`")]
    BadNumber(String),
    #[error("bad type `{0}`")]
    BadType(String),
    #[error("quotation marks are not permitted: `{0}`")]
    QuotationMark(String),
    #[error("checkbox bitstring `{bits}` does not encode {items} items")]
    BitstringLength { bits: String, items: usize },
    #[error("bad text_out option `{0}`")]
    BadOption(String),
    #[error("invalid range: need max > min, increment > 0, nticks >= 2")]
    InvalidRange,
    #[error("initial value {0} outside the slider range")]
    InitOutOfRange(f64),
    #[error("bad display mode {0} (expected 0, 1 or 2)")]
    BadDisplayMode(i64),
    #[error("bad image parameters: need scale > 0 and hi > lo")]
    BadImage,
    #[error("empty name")]
    EmptyName,
    #[error("DICTSLIDER needs at least one DICTSLIDERITEM")]
    MissingItems,
    #[error("DICTSLIDERITEM without a preceding DICTSLIDER")]
    OrphanItem,
    #[error("initial item index {index} out of range for {items} items")]
    BadInitIndex { index: i64, items: usize },
    #[error("duplicate item key `{0}`")]
    DuplicateKey(String),
}

/// Scans and parses every directive in `text`.
pub fn parse_source(text: &str) -> Result<alloc::vec::Vec<DirectiveRecord>, ParseError> {
    parse_directives(&scan_source(text)?)
}
