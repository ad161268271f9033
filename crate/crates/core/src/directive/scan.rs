use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{ParseError, ParseErrorKind};

pub const PREFIX: &str = "#@IVISIT:";

/// Comment markers that may precede the prefix. Longest first so `///` is not
/// consumed as `/` fragments.
const COMMENT_MARKERS: [&str; 9] = ["///", "//!", "//", "/*", "--", ";", "%", "*", "#"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keyword {
    Simulation,
    Slider,
    DictSlider,
    DictSliderItem,
    TextIn,
    ListSel,
    Checkbox,
    RadioButton,
    Button,
    Image,
    TextOut,
}

impl Keyword {
    pub const ALL: [Keyword; 11] = [
        Keyword::Simulation,
        Keyword::Slider,
        Keyword::DictSlider,
        Keyword::DictSliderItem,
        Keyword::TextIn,
        Keyword::ListSel,
        Keyword::Checkbox,
        Keyword::RadioButton,
        Keyword::Button,
        Keyword::Image,
        Keyword::TextOut,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Simulation => "SIMULATION",
            Keyword::Slider => "SLIDER",
            Keyword::DictSlider => "DICTSLIDER",
            Keyword::DictSliderItem => "DICTSLIDERITEM",
            Keyword::TextIn => "TEXT_IN",
            Keyword::ListSel => "LISTSEL",
            Keyword::Checkbox => "CHECKBOX",
            Keyword::RadioButton => "RADIOBUTTON",
            Keyword::Button => "BUTTON",
            Keyword::Image => "IMAGE",
            Keyword::TextOut => "TEXT_OUT",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }

    /// Number of `&`-separated fields after the keyword.
    pub fn arity(self) -> usize {
        match self {
            Keyword::Simulation => 1,
            Keyword::Slider => 7,
            Keyword::DictSlider => 4,
            Keyword::DictSliderItem => 5,
            Keyword::TextIn => 5,
            Keyword::ListSel => 7,
            Keyword::Checkbox => 4,
            Keyword::RadioButton => 4,
            Keyword::Button => 3,
            Keyword::Image => 5,
            Keyword::TextOut => 4,
        }
    }
}

/// One directive line split into trimmed fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Directive {
    pub keyword: Keyword,
    pub fields: Vec<String>,
    /// 1-based.
    pub line_no: usize,
}

/// Returns the text after the prefix when `line` carries a directive.
fn directive_body(line: &str) -> Option<&str> {
    let mut rest = line;
    loop {
        rest = rest.trim_start();
        if let Some(body) = rest.strip_prefix(PREFIX) {
            return Some(body);
        }
        let marker = COMMENT_MARKERS.iter().find(|m| rest.starts_with(*m))?;
        rest = &rest[marker.len()..];
    }
}

/// Extracts directives in source order. Non-directive lines are ignored.
pub fn scan_source(text: &str) -> Result<Vec<Directive>, ParseError> {
    let mut out: Vec<Directive> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let Some(body) = directive_body(line) else {
            continue;
        };
        let (head, tail) = match body.find('&') {
            Some(p) => (&body[..p], Some(&body[p + 1..])),
            None => (body, None),
        };
        let head = head.trim();
        let keyword = Keyword::parse(head).ok_or_else(|| ParseError {
            line: line_no,
            kind: ParseErrorKind::UnknownKeyword(head.to_string()),
        })?;
        let fields: Vec<String> = match tail {
            None => Vec::new(),
            // Free text is last: keep any further '&' inside it.
            Some(t) if keyword == Keyword::TextIn => {
                t.splitn(keyword.arity(), '&').map(|f| f.trim().to_string()).collect()
            }
            Some(t) => t.split('&').map(|f| f.trim().to_string()).collect(),
        };
        if keyword == Keyword::DictSliderItem
            && !matches!(
                out.last().map(|d| d.keyword),
                Some(Keyword::DictSlider | Keyword::DictSliderItem)
            )
        {
            return Err(ParseError {
                line: line_no,
                kind: ParseErrorKind::OrphanItem,
            });
        }
        out.push(Directive {
            keyword,
            fields,
            line_no,
        });
    }
    Ok(out)
}
