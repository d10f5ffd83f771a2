use super::ast::{FixKind, Formula};
use crate::error::Result;
use crate::model::{Atom, Symbol, Term};
use crate::parser::{render_atom, render_term, Cursor, Tok};

fn is_binary(f: &Formula) -> bool {
    matches!(f, Formula::And(_) | Formula::Or(_) | Formula::Implies(..) | Formula::Iff(..))
}

fn operand(f: &Formula, out: &mut String) {
    if is_binary(f) {
        out.push('(');
        write(f, out);
        out.push(')');
    } else {
        write(f, out);
    }
}

fn terms(ts: &[Term]) -> String {
    ts.iter().map(render_term).collect::<Vec<_>>().join(",")
}

fn write(f: &Formula, out: &mut String) {
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Atom(a) => out.push_str(&render_atom(a)),
        Formula::Apply(w, ts) => {
            out.push_str(w.as_str());
            out.push('(');
            out.push_str(&terms(ts));
            out.push(')');
        }
        Formula::Not(x) => {
            out.push('~');
            match &**x {
                Formula::Atom(a) if a.is_equality() => {
                    out.push('(');
                    out.push_str(&render_atom(a));
                    out.push(')');
                }
                other => operand(other, out),
            }
        }
        Formula::And(xs) | Formula::Or(xs) => {
            if xs.is_empty() {
                out.push_str(if matches!(f, Formula::And(_)) { "true" } else { "false" });
            }
            let sep = if matches!(f, Formula::And(_)) { " & " } else { " | " };
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push_str(sep);
                }
                operand(x, out);
            }
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            operand(a, out);
            out.push_str(if matches!(f, Formula::Implies(..)) { " -> " } else { " <-> " });
            operand(b, out);
        }
        Formula::Forall(vs, x) | Formula::Exists(vs, x) => {
            out.push_str(if matches!(f, Formula::Forall(..)) { "forall " } else { "exists " });
            out.push_str(&vs.iter().map(|v| v.as_str()).collect::<Vec<_>>().join(","));
            out.push_str(" (");
            write(x, out);
            out.push(')');
        }
        Formula::Fix(fp) => {
            out.push('[');
            out.push_str(match fp.kind {
                FixKind::Lfp => "LFP ",
                FixKind::Gfp => "GFP ",
            });
            out.push_str(fp.var.as_str());
            out.push('(');
            out.push_str(&fp.params.iter().map(|v| v.as_str()).collect::<Vec<_>>().join(","));
            out.push_str("). ");
            write(&fp.body, out);
            out.push_str("](");
            out.push_str(&terms(&fp.args));
            out.push(')');
        }
    }
}

/// Single-line text of a formula. Binary subformulas of binary
/// connectives are always parenthesized.
pub fn render_formula(f: &Formula) -> String {
    let mut out = String::new();
    write(f, &mut out);
    out
}

/// One formula per line.
pub fn render_fpl<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> String {
    fs.into_iter().map(|f| render_formula(f) + "\n").collect()
}

/// Parse one formula in the emission format.
pub fn parse_formula(src: &str) -> Result<Formula> {
    let mut c = Cursor::new(src)?;
    let mut p = FplParser { scope: Vec::new() };
    let f = p.iff(&mut c)?;
    c.expect(&Tok::Eof)?;
    Ok(f)
}

/// Parse one formula per non-empty line; `%` starts a comment.
pub fn parse_fpl(src: &str) -> Result<Vec<Formula>> {
    let mut out = Vec::new();
    for line in src.lines() {
        let body = line.split('%').next().unwrap_or("").trim();
        if !body.is_empty() {
            out.push(parse_formula(body)?);
        }
    }
    Ok(out)
}

struct FplParser {
    /// Predicate variables bound by enclosing fixed points.
    scope: Vec<Symbol>,
}

impl FplParser {
    fn iff(&mut self, c: &mut Cursor) -> Result<Formula> {
        let a = self.implies(c)?;
        if c.eat(&Tok::Iff) {
            let b = self.implies(c)?;
            return Ok(Formula::iff(a, b));
        }
        Ok(a)
    }

    fn implies(&mut self, c: &mut Cursor) -> Result<Formula> {
        let a = self.or(c)?;
        if c.eat(&Tok::Arrow) || c.eat(&Tok::FatArrow) {
            let b = self.implies(c)?;
            return Ok(Formula::implies(a, b));
        }
        Ok(a)
    }

    fn or(&mut self, c: &mut Cursor) -> Result<Formula> {
        let mut parts = vec![self.and(c)?];
        while c.eat(&Tok::Bar) {
            parts.push(self.and(c)?);
        }
        Ok(Formula::disj(parts))
    }

    fn and(&mut self, c: &mut Cursor) -> Result<Formula> {
        let mut parts = vec![self.unary(c)?];
        while c.eat(&Tok::Amp) {
            parts.push(self.unary(c)?);
        }
        Ok(Formula::conj(parts))
    }

    fn vars(&mut self, c: &mut Cursor) -> Result<Vec<Symbol>> {
        let mut vs = Vec::new();
        loop {
            match c.bump() {
                Tok::Var(v) => vs.push(Symbol::from(v)),
                t => return Err(c.error(format!("expected a variable, found {}", t.describe()))),
            }
            if !c.eat(&Tok::Comma) {
                return Ok(vs);
            }
        }
    }

    fn term(&mut self, c: &mut Cursor) -> Result<Term> {
        match c.bump() {
            Tok::Var(v) => Ok(Term::Var(Symbol::from(v))),
            Tok::Ident(s) | Tok::Reserved(s) | Tok::Quoted(s) => Ok(Term::Const(Symbol::from(s))),
            t => Err(c.error(format!("expected a term, found {}", t.describe()))),
        }
    }

    fn term_list(&mut self, c: &mut Cursor) -> Result<Vec<Term>> {
        c.expect(&Tok::LParen)?;
        let mut ts = Vec::new();
        if c.eat(&Tok::RParen) {
            return Ok(ts);
        }
        loop {
            ts.push(self.term(c)?);
            if c.eat(&Tok::RParen) {
                return Ok(ts);
            }
            c.expect(&Tok::Comma)?;
        }
    }

    fn equality_rest(&mut self, c: &mut Cursor, left: Term) -> Result<Formula> {
        let negated = match c.bump() {
            Tok::Eq => false,
            Tok::Neq => true,
            t => return Err(c.error(format!("expected `=` or `!=`, found {}", t.describe()))),
        };
        let right = self.term(c)?;
        let f = Formula::eq(left, right);
        Ok(if negated { Formula::not(f) } else { f })
    }

    fn unary(&mut self, c: &mut Cursor) -> Result<Formula> {
        let span = c.span();
        match c.peek().clone() {
            Tok::Tilde => {
                c.bump();
                Ok(Formula::not(self.unary(c)?))
            }
            Tok::LParen => {
                c.bump();
                let f = self.iff(c)?;
                c.expect(&Tok::RParen)?;
                Ok(f)
            }
            Tok::LBrack => {
                c.bump();
                let kind = if c.at_word("LFP") {
                    FixKind::Lfp
                } else if c.at_word("GFP") {
                    FixKind::Gfp
                } else {
                    return Err(c.error("expected `LFP` or `GFP`"));
                };
                c.bump();
                let var = match c.bump() {
                    Tok::Var(v) => Symbol::from(v),
                    t => return Err(c.error(format!("expected a predicate variable, found {}", t.describe()))),
                };
                c.expect(&Tok::LParen)?;
                let params = if c.at(&Tok::RParen) { Vec::new() } else { self.vars(c)? };
                c.expect(&Tok::RParen)?;
                c.expect(&Tok::Dot)?;
                self.scope.push(var.clone());
                let body = self.iff(c);
                self.scope.pop();
                let body = body?;
                c.expect(&Tok::RBrack)?;
                let args = self.term_list(c)?;
                Formula::fix(kind, var, params, body, args).map_err(|e| c.error_at(span, e.to_string()))
            }
            Tok::Ident(s) if s == "true" => {
                c.bump();
                Ok(Formula::True)
            }
            Tok::Ident(s) if s == "false" => {
                c.bump();
                Ok(Formula::False)
            }
            Tok::Ident(s) if s == "forall" || s == "exists" => {
                c.bump();
                let vs = self.vars(c)?;
                c.expect(&Tok::LParen)?;
                let body = self.iff(c)?;
                c.expect(&Tok::RParen)?;
                Ok(if s == "forall" { Formula::Forall(vs, Box::new(body)) } else { Formula::Exists(vs, Box::new(body)) })
            }
            Tok::Var(v) => {
                if c.peek_at(1) == &Tok::LParen {
                    let w = Symbol::from(v.clone());
                    if !self.scope.contains(&w) {
                        return Err(c.error(format!("predicate variable {v} is not bound by a fixed point")));
                    }
                    c.bump();
                    let ts = self.term_list(c)?;
                    return Ok(Formula::Apply(w, ts));
                }
                let left = self.term(c)?;
                self.equality_rest(c, left)
            }
            Tok::Quoted(_) => {
                let left = self.term(c)?;
                self.equality_rest(c, left)
            }
            Tok::Ident(s) | Tok::Reserved(s) => {
                if matches!(c.peek_at(1), Tok::Eq | Tok::Neq) {
                    let left = self.term(c)?;
                    return self.equality_rest(c, left);
                }
                c.bump();
                let args = if c.at(&Tok::LParen) { self.term_list(c)? } else { Vec::new() };
                Ok(Formula::Atom(Atom::named(Symbol::from(s), args)))
            }
            t => Err(c.error_at(span, format!("unexpected {}", t.describe()))),
        }
    }
}
