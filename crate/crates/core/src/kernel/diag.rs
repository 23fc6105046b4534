use std::fmt;

use crate::syntax::RcTerm;

/// Typing rule (or pipeline stage) whose premise failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    CtxExt,
    CtxExtZero,
    Var,
    VarZero,
    VarRoundtrip,
    NatForm,
    NatIntro,
    NatElim,
    PiForm,
    PiIntro,
    PiElim,
    SigForm,
    SigIntro,
    SigElim,
    IdForm,
    IdIntro,
    IdElim,
    Univ,
    Conv,
    Scope,
    Fuel,
    Annotation,
    Parse,
    Elab,
    Decl,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::CtxExt => "ctx-ext",
            Rule::CtxExtZero => "ctx-ext-zero",
            Rule::Var => "var",
            Rule::VarZero => "var-zero",
            Rule::VarRoundtrip => "var-roundtrip",
            Rule::NatForm => "nat-form",
            Rule::NatIntro => "nat-intro",
            Rule::NatElim => "nat-elim",
            Rule::PiForm => "pi-form",
            Rule::PiIntro => "pi-intro",
            Rule::PiElim => "pi-elim",
            Rule::SigForm => "sig-form",
            Rule::SigIntro => "sig-intro",
            Rule::SigElim => "sig-elim",
            Rule::IdForm => "id-form",
            Rule::IdIntro => "id-intro",
            Rule::IdElim => "id-elim",
            Rule::Univ => "univ",
            Rule::Conv => "conv",
            Rule::Scope => "scope",
            Rule::Fuel => "fuel",
            Rule::Annotation => "annotation",
            Rule::Parse => "parse",
            Rule::Elab => "elab",
            Rule::Decl => "decl",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A failed judgement. All diagnostics are errors; the checker has no
/// warnings.
#[derive(Debug, Clone, thiserror::Error)]
#[error("{rule}: {message}")]
pub struct Diagnostic {
    pub rule: Rule,
    pub span: Option<Span>,
    pub expected: Option<RcTerm>,
    pub actual: Option<RcTerm>,
    pub message: String,
}

pub type Result<T> = std::result::Result<T, Diagnostic>;

impl Diagnostic {
    pub fn new(rule: Rule, message: impl Into<String>) -> Diagnostic {
        Diagnostic { rule, span: None, expected: None, actual: None, message: message.into() }
    }

    pub fn mismatch(rule: Rule, message: impl Into<String>, expected: &RcTerm, actual: &RcTerm) -> Diagnostic {
        Diagnostic {
            rule,
            span: None,
            expected: Some(expected.clone()),
            actual: Some(actual.clone()),
            message: message.into(),
        }
    }

    pub fn at(mut self, span: Span) -> Diagnostic {
        self.span.get_or_insert(span);
        self
    }

    /// Re-labels a failure that happened inside a premise of `rule`, keeping
    /// the inner rule name in the message. Fuel exhaustion is never
    /// re-labelled.
    pub fn within(self, rule: Rule) -> Diagnostic {
        if self.rule == rule || self.rule == Rule::Fuel {
            return self;
        }
        Diagnostic { message: format!("{} ({})", self.message, self.rule), rule, ..self }
    }

    /// Full text including expected/actual terms when present.
    pub fn render(&self) -> String {
        let mut s = format!("{}: {}", self.rule, self.message);
        if let Some(e) = &self.expected {
            s.push_str(&format!("; expected {e}"));
        }
        if let Some(a) = &self.actual {
            s.push_str(&format!("; found {a}"));
        }
        s
    }
}
