use super::lexer::{Cursor, Tok};
use crate::ctl::Ctl;
use crate::error::Result;
use crate::model::Symbol;

/// Parse a CTL formula. Precedence from loosest: `<->`, `->` (right
/// associative), `|`, `&`, then unary operators.
pub fn parse_ctl(src: &str) -> Result<Ctl> {
    let mut c = Cursor::new(src)?;
    let f = iff(&mut c)?;
    c.expect(&Tok::Eof)?;
    Ok(f)
}

fn iff(c: &mut Cursor) -> Result<Ctl> {
    let mut f = implies(c)?;
    while c.eat(&Tok::Iff) {
        f = Ctl::Iff(Box::new(f), Box::new(implies(c)?));
    }
    Ok(f)
}

fn implies(c: &mut Cursor) -> Result<Ctl> {
    let f = or(c)?;
    if c.eat(&Tok::Arrow) {
        return Ok(Ctl::Implies(Box::new(f), Box::new(implies(c)?)));
    }
    Ok(f)
}

fn or(c: &mut Cursor) -> Result<Ctl> {
    let mut f = and(c)?;
    while c.eat(&Tok::Bar) {
        f = Ctl::Or(Box::new(f), Box::new(and(c)?));
    }
    Ok(f)
}

fn and(c: &mut Cursor) -> Result<Ctl> {
    let mut f = unary(c)?;
    while c.eat(&Tok::Amp) {
        f = Ctl::And(Box::new(f), Box::new(unary(c)?));
    }
    Ok(f)
}

fn until(c: &mut Cursor) -> Result<(Ctl, Ctl)> {
    let close = match c.bump() {
        Tok::LParen => Tok::RParen,
        Tok::LBrack => Tok::RBrack,
        t => return Err(c.error(format!("expected `(` or `[` after path quantifier, found {}", t.describe()))),
    };
    let a = iff(c)?;
    if !c.at_word("U") {
        return Err(c.error(format!("expected `U`, found {}", c.peek().describe())));
    }
    c.bump();
    let b = iff(c)?;
    c.expect(&close)?;
    Ok((a, b))
}

fn unary(c: &mut Cursor) -> Result<Ctl> {
    let span = c.span();
    match c.peek().clone() {
        Tok::Tilde => {
            c.bump();
            Ok(Ctl::not(unary(c)?))
        }
        Tok::LParen => {
            c.bump();
            let f = iff(c)?;
            c.expect(&Tok::RParen)?;
            Ok(f)
        }
        Tok::Ident(s) if s == "true" => {
            c.bump();
            Ok(Ctl::True)
        }
        Tok::Ident(s) if s == "false" => {
            c.bump();
            Ok(Ctl::False)
        }
        Tok::Ident(s) => {
            c.bump();
            Ok(Ctl::Prop(Symbol::from(s)))
        }
        Tok::Var(op) => {
            c.bump();
            let f = match op.as_str() {
                "EX" => Ctl::EX(Box::new(unary(c)?)),
                "AX" => Ctl::AX(Box::new(unary(c)?)),
                "EF" => Ctl::EF(Box::new(unary(c)?)),
                "AF" => Ctl::AF(Box::new(unary(c)?)),
                "EG" => Ctl::EG(Box::new(unary(c)?)),
                "AG" => Ctl::AG(Box::new(unary(c)?)),
                "E" => {
                    let (a, b) = until(c)?;
                    Ctl::EU(Box::new(a), Box::new(b))
                }
                "A" => {
                    let (a, b) = until(c)?;
                    Ctl::AU(Box::new(a), Box::new(b))
                }
                other => return Err(c.error_at(span, format!("unknown temporal operator `{other}`"))),
            };
            Ok(f)
        }
        t => Err(c.error(format!("expected a formula, found {}", t.describe()))),
    }
}

/// Fully parenthesized rendering; `parse_ctl(render_ctl(f)) == f`.
pub fn render_ctl(f: &Ctl) -> String {
    let bin = |op: &str, a: &Ctl, b: &Ctl| format!("({} {} {})", render_ctl(a), op, render_ctl(b));
    match f {
        Ctl::True => "true".into(),
        Ctl::False => "false".into(),
        Ctl::Prop(p) => p.to_string(),
        Ctl::Not(a) => format!("~{}", render_ctl(a)),
        Ctl::And(a, b) => bin("&", a, b),
        Ctl::Or(a, b) => bin("|", a, b),
        Ctl::Implies(a, b) => bin("->", a, b),
        Ctl::Iff(a, b) => bin("<->", a, b),
        Ctl::EX(a) => format!("EX {}", render_ctl(a)),
        Ctl::AX(a) => format!("AX {}", render_ctl(a)),
        Ctl::EF(a) => format!("EF {}", render_ctl(a)),
        Ctl::AF(a) => format!("AF {}", render_ctl(a)),
        Ctl::EG(a) => format!("EG {}", render_ctl(a)),
        Ctl::AG(a) => format!("AG {}", render_ctl(a)),
        Ctl::EU(a, b) => format!("E({} U {})", render_ctl(a), render_ctl(b)),
        Ctl::AU(a, b) => format!("A({} U {})", render_ctl(a), render_ctl(b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let f = parse_ctl("p & q | r -> s -> t").unwrap();
        assert_eq!(render_ctl(&f), "(((p & q) | r) -> (s -> t))");
        let g = parse_ctl("AG (p -> AF q) <-> E[p U ~q]").unwrap();
        assert_eq!(parse_ctl(&render_ctl(&g)).unwrap(), g);
    }

    #[test]
    fn rejects_unknown_operator() {
        assert!(parse_ctl("XF p").is_err());
        assert!(parse_ctl("E(p q)").is_err());
    }
}
