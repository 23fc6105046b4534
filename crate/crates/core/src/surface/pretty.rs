//! Kernel terms back to surface text. Annotations that elaboration can
//! recover are dropped; binder types are always printed.

use std::fmt::{self, Write};

use crate::syntax::{occurs_free, Term};

const TOP: u8 = 0;
const APP: u8 = 1;
const ATOM: u8 = 2;

pub fn pretty(t: &Term) -> String {
    let mut s = String::new();
    go(t, TOP, &mut s).expect("writing to a String");
    s
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(self))
    }
}

fn go(t: &Term, prec: u8, out: &mut String) -> fmt::Result {
    let level = match t {
        Term::Pi { .. } | Term::Sig { .. } | Term::Lam { .. } => TOP,
        Term::App { .. } | Term::Fst { .. } | Term::Snd { .. } | Term::Id { .. } => APP,
        _ => ATOM,
    };
    let paren = level < prec;
    if paren {
        out.push('(');
    }
    match t {
        Term::Var(x) => out.push_str(x),
        Term::MVar(x) => write!(out, "~{x}")?,
        Term::Univ => out.push_str("Type"),
        Term::Unit => out.push_str("Unit"),
        Term::Tt => out.push_str("tt"),
        Term::Bool => out.push_str("PB"),
        Term::Nat(a) => wrap("%(", a, out)?,
        Term::Up { body, .. } => wrap("up(", body, out)?,
        Term::Dn { body, .. } => wrap("dn(", body, out)?,
        Term::Pi { x, dom, cod } => {
            if occurs_free(x, cod) {
                write!(out, "Pi ({x} : ")?;
                go(dom, TOP, out)?;
                out.push_str(") , ");
            } else {
                go(dom, APP, out)?;
                out.push_str(" -> ");
            }
            go(cod, TOP, out)?;
        }
        Term::Sig { x, fst_ty, snd_ty } => {
            write!(out, "Sig ({x} : ")?;
            go(fst_ty, TOP, out)?;
            out.push_str(") , ");
            go(snd_ty, TOP, out)?;
        }
        Term::Lam { x, dom, body, .. } => {
            write!(out, "fun ({x} : ")?;
            go(dom, TOP, out)?;
            out.push_str(") => ");
            go(body, TOP, out)?;
        }
        Term::App { fun, arg, .. } => {
            go(fun, APP, out)?;
            out.push(' ');
            go(arg, ATOM, out)?;
        }
        Term::Pair { fst, snd, .. } => {
            out.push('(');
            go(fst, TOP, out)?;
            out.push_str(" , ");
            go(snd, TOP, out)?;
            out.push(')');
        }
        Term::Fst { pair, .. } => {
            out.push_str("fst ");
            go(pair, ATOM, out)?;
        }
        Term::Snd { pair, .. } => {
            out.push_str("snd ");
            go(pair, ATOM, out)?;
        }
        Term::Id { ty, lhs, rhs } => {
            out.push_str("Id ");
            go(ty, ATOM, out)?;
            out.push(' ');
            go(lhs, ATOM, out)?;
            out.push(' ');
            go(rhs, ATOM, out)?;
        }
        Term::Refl { .. } => out.push_str("refl"),
        Term::J { ty, lhs, y, p, motive, base, rhs, path } => {
            out.push_str("jelim(");
            go(ty, TOP, out)?;
            out.push_str(", ");
            go(lhs, TOP, out)?;
            write!(out, ", {y} {p} => ")?;
            go(motive, TOP, out)?;
            for t in [base, rhs, path] {
                out.push_str(", ");
                go(t, TOP, out)?;
            }
            out.push(')');
        }
    }
    if paren {
        out.push(')');
    }
    Ok(())
}

fn wrap(open: &str, t: &Term, out: &mut String) -> fmt::Result {
    out.push_str(open);
    go(t, TOP, out)?;
    out.push(')');
    Ok(())
}
