//! Checking whole source files declaration by declaration.

use crate::finmodel::{oracle_check, ModelError, Verdict};
use crate::kernel::{Checker, Config, Diagnostic, Env, Result, Rule, Span};
use crate::surface::{parse, DeclKind, Elaborator};
use crate::syntax::RcTerm;

#[derive(Debug, Clone)]
pub enum Checked {
    Def { name: String, term: RcTerm, ty: RcTerm },
    Postulate { name: String, ty: RcTerm },
    Check { term: RcTerm, ty: RcTerm },
    Eq { lhs: RcTerm, rhs: RcTerm, ty: RcTerm },
    ModelEq { lhs: RcTerm, rhs: RcTerm, ty: RcTerm },
}

#[derive(Debug, Clone)]
pub struct DeclReport {
    pub span: Span,
    /// The context of postulates the declaration was checked in.
    pub env: Env,
    pub result: Result<Checked>,
}

#[derive(Debug, Clone)]
pub struct FileReport {
    /// Set when the file does not parse; nothing is checked then.
    pub parse_error: Option<Diagnostic>,
    pub decls: Vec<DeclReport>,
}

impl FileReport {
    pub fn diagnostics(&self) -> impl Iterator<Item = &Diagnostic> {
        self.parse_error.iter().chain(self.decls.iter().filter_map(|d| d.result.as_ref().err()))
    }

    pub fn ok(&self) -> bool {
        self.diagnostics().next().is_none()
    }

    pub fn def(&self, name: &str) -> Option<(&Env, &RcTerm, &RcTerm)> {
        self.decls.iter().find_map(|d| match &d.result {
            Ok(Checked::Def { name: n, term, ty }) if n == name => Some((&d.env, term, ty)),
            _ => None,
        })
    }
}

/// Checks every declaration in order. A failing declaration is reported and
/// skipped; later declarations are still checked.
pub fn check_source(src: &str, config: Config) -> FileReport {
    let file = match parse(src) {
        Ok(f) => f,
        Err(d) => return FileReport { parse_error: Some(d), decls: Vec::new() },
    };
    let checker = Checker::new(config);
    let mut elab = Elaborator::new(&checker);
    let mut decls = Vec::with_capacity(file.decls.len());
    for decl in &file.decls {
        let env = elab.env().clone();
        let span = decl.span;
        let result = match &decl.kind {
            DeclKind::Def { name, ty, body } => elab
                .define(name, ty.as_ref(), body, span)
                .map(|(term, ty)| Checked::Def { name: name.clone(), term, ty }),
            DeclKind::Postulate { name, marked, ty } => {
                elab.postulate(name, *marked, ty, span).map(|ty| Checked::Postulate { name: name.clone(), ty })
            }
            DeclKind::Check { term, ty } => {
                elab.typed(term, Some(ty)).map(|(term, ty)| Checked::Check { term, ty })
            }
            DeclKind::Eq { lhs, rhs, ty } => sides(&mut elab, lhs, rhs, ty).and_then(|(l, r, t)| {
                if checker.convert(&env, &l, &r, &t).map_err(|d| d.at(span))? {
                    Ok(Checked::Eq { lhs: l, rhs: r, ty: t })
                } else {
                    Err(Diagnostic::mismatch(Rule::Conv, "the two sides are not definitionally equal", &l, &r))
                }
            }),
            DeclKind::ModelEq { lhs, rhs, ty } => {
                sides(&mut elab, lhs, rhs, ty).map(|(lhs, rhs, ty)| Checked::ModelEq { lhs, rhs, ty })
            }
        };
        decls.push(DeclReport { span, env, result: result.map_err(|d| d.at(span)) });
    }
    FileReport { parse_error: None, decls }
}

fn sides(
    elab: &mut Elaborator<'_>,
    lhs: &crate::surface::Expr,
    rhs: &crate::surface::Expr,
    ty: &crate::surface::Expr,
) -> Result<(RcTerm, RcTerm, RcTerm)> {
    let (l, t) = elab.typed(lhs, Some(ty))?;
    let (r, _) = elab.typed(rhs, Some(ty))?;
    Ok((l, r, t))
}

/// Normal form of the body of definition `name`.
pub fn normalize_def(report: &FileReport, name: &str, config: Config) -> Result<RcTerm> {
    let Some((env, term, _)) = report.def(name) else {
        return Err(Diagnostic::new(Rule::Scope, format!("no checked definition named `{name}`")));
    };
    Checker::new(config).normalize(env, term)
}

/// The model's verdict on one `eq` or `modeleq` declaration.
#[derive(Debug, Clone)]
pub struct ModelLine {
    pub span: Span,
    /// Whether the kernel accepted the two sides as definitionally equal.
    pub asserted: bool,
    pub verdict: std::result::Result<Verdict, ModelError>,
}

impl ModelLine {
    /// A definitional equality the model separates, or a value the model
    /// could not make sense of.
    pub fn violation(&self) -> bool {
        match &self.verdict {
            Ok(v) => self.asserted && *v == Verdict::Unequal,
            Err(_) => true,
        }
    }
}

/// Runs the finite model on every checked `eq` and `modeleq` declaration.
pub fn model_report(report: &FileReport) -> Vec<ModelLine> {
    report
        .decls
        .iter()
        .filter_map(|d| {
            let (lhs, rhs, ty, asserted) = match &d.result {
                Ok(Checked::Eq { lhs, rhs, ty }) => (lhs, rhs, ty, true),
                Ok(Checked::ModelEq { lhs, rhs, ty }) => (lhs, rhs, ty, false),
                _ => return None,
            };
            let verdict = oracle_check(d.env.entries(), lhs, rhs, ty);
            Some(ModelLine { span: d.span, asserted, verdict })
        })
        .collect()
}
