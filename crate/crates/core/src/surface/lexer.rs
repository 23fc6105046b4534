use crate::kernel::{Diagnostic, Rule, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Kw(Kw),
    LParen,
    RParen,
    Comma,
    Colon,
    DColon,
    ColonEq,
    Semi,
    Arrow,
    FatArrow,
    EqEq,
    Eq,
    Tilde,
    Percent,
    Eof,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kw {
    Def,
    Postulate,
    Check,
    EqDecl,
    ModelEq,
    Fun,
    Pi,
    Sig,
    Let,
    In,
    Up,
    Dn,
    Fst,
    Snd,
    Id,
    Refl,
    Unit,
    Tt,
    Type,
    PB,
    Jelim,
    Natural,
}

const KEYWORDS: &[(&str, Kw)] = &[
    ("def", Kw::Def),
    ("postulate", Kw::Postulate),
    ("check", Kw::Check),
    ("eq", Kw::EqDecl),
    ("modeleq", Kw::ModelEq),
    ("fun", Kw::Fun),
    ("Pi", Kw::Pi),
    ("Sig", Kw::Sig),
    ("let", Kw::Let),
    ("in", Kw::In),
    ("up", Kw::Up),
    ("dn", Kw::Dn),
    ("fst", Kw::Fst),
    ("snd", Kw::Snd),
    ("Id", Kw::Id),
    ("refl", Kw::Refl),
    ("Unit", Kw::Unit),
    ("tt", Kw::Tt),
    ("Type", Kw::Type),
    ("PB", Kw::PB),
    ("jelim", Kw::Jelim),
    ("natural", Kw::Natural),
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.iter().any(|(k, _)| *k == s)
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        let next = chars.get(i + 1).copied();
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '-' && next == Some('-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (tok, len) = match (c, next) {
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            (',', _) => (Tok::Comma, 1),
            (';', _) => (Tok::Semi, 1),
            ('~', _) => (Tok::Tilde, 1),
            ('%', _) => (Tok::Percent, 1),
            (':', Some(':')) => (Tok::DColon, 2),
            (':', Some('=')) => (Tok::ColonEq, 2),
            (':', _) => (Tok::Colon, 1),
            ('-', Some('>')) => (Tok::Arrow, 2),
            ('=', Some('>')) => (Tok::FatArrow, 2),
            ('=', Some('=')) => (Tok::EqEq, 2),
            ('=', _) => (Tok::Eq, 1),
            _ if ident_start(c) => {
                let start = i;
                let mut j = i;
                while j < chars.len() && ident_char(chars[j]) {
                    j += 1;
                }
                let word: String = chars[start..j].iter().collect();
                let tok = match KEYWORDS.iter().find(|(k, _)| *k == word) {
                    Some((_, kw)) => Tok::Kw(*kw),
                    None => Tok::Ident(word),
                };
                (tok, j - start)
            }
            _ => {
                return Err(Diagnostic::new(Rule::Parse, format!("unexpected character `{c}`")).at(span));
            }
        };
        out.push(Token { tok, span });
        i += len;
        col += len as u32;
    }
    out.push(Token { tok: Tok::Eof, span: Span { line, col } });
    Ok(out)
}
