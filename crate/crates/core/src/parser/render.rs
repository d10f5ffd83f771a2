use std::fmt::Write;

use super::lexer::is_name_char;
use super::program::is_keyword;
use crate::model::{Atom, BoolFormula, GeneralizedLiteral, Literal, OpenInterpretation, Pred, Program, Rule, Symbol, Term};

/// Constant text, quoted when it would not lex back as a constant.
pub fn render_const(c: &Symbol) -> String {
    let s = c.as_str();
    let plain = match s.chars().next() {
        Some('#') => s.len() > 1 && s[1..].chars().all(is_name_char),
        Some(ch) if ch.is_ascii_lowercase() || ch.is_ascii_digit() => s.chars().all(is_name_char) && !is_keyword(s),
        _ => false,
    };
    if plain {
        s.to_string()
    } else {
        let escaped = s.replace('\\', "\\\\").replace('"', "\\\"");
        format!("\"{escaped}\"")
    }
}

pub fn render_term(t: &Term) -> String {
    match t {
        Term::Var(v) => v.to_string(),
        Term::Const(c) => render_const(c),
    }
}

pub fn render_atom(a: &Atom) -> String {
    match &a.pred {
        Pred::Eq => format!("{} = {}", render_term(&a.args[0]), render_term(&a.args[1])),
        Pred::Named(n) => {
            if a.args.is_empty() {
                n.to_string()
            } else {
                let args: Vec<String> = a.args.iter().map(render_term).collect();
                format!("{}({})", n, args.join(","))
            }
        }
    }
}

pub fn render_literal(l: &Literal) -> String {
    match (l.negated, l.atom.is_equality()) {
        (false, _) => render_atom(&l.atom),
        (true, true) => format!("{} != {}", render_term(&l.atom.args[0]), render_term(&l.atom.args[1])),
        (true, false) => format!("not {}", render_atom(&l.atom)),
    }
}

fn render_bool(f: &BoolFormula, out: &mut String, parent: u8) {
    // Precedence: or = 1, and = 2, unary = 3.
    match f {
        BoolFormula::Atom(a) => out.push_str(&render_atom(a)),
        BoolFormula::Not(x) => match &**x {
            BoolFormula::Atom(a) if a.is_equality() => {
                let _ = write!(out, "{} != {}", render_term(&a.args[0]), render_term(&a.args[1]));
            }
            _ => {
                out.push('~');
                render_bool(x, out, 3);
            }
        },
        BoolFormula::And(xs) | BoolFormula::Or(xs) => {
            let (prec, op) = if matches!(f, BoolFormula::And(_)) { (2, " & ") } else { (1, " | ") };
            let wrap = parent >= prec;
            if wrap {
                out.push('(');
            }
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push_str(op);
                }
                render_bool(x, out, prec);
            }
            if wrap {
                out.push(')');
            }
        }
    }
}

pub fn render_formula(f: &BoolFormula) -> String {
    let mut s = String::new();
    render_bool(f, &mut s, 0);
    s
}

pub fn render_glit(g: &GeneralizedLiteral) -> String {
    let vars: Vec<&str> = g.bound.iter().map(|v| v.as_str()).collect();
    let cons = Literal::pos(g.consequent.clone());
    if vars.is_empty() {
        format!("forall ({} => {})", render_formula(&g.antecedent), render_literal(&cons))
    } else {
        format!("forall {} ({} => {})", vars.join(","), render_formula(&g.antecedent), render_literal(&cons))
    }
}

pub fn render_rule(r: &Rule) -> String {
    let mut s = format!("{}: ", render_rule_name(&r.name));
    let head: Vec<String> = r.head.iter().map(render_literal).collect();
    s.push_str(&head.join(" | "));
    let body: Vec<String> = r.body.iter().map(render_literal).chain(r.glits.iter().map(render_glit)).collect();
    if !body.is_empty() || head.is_empty() {
        if !head.is_empty() {
            s.push(' ');
        }
        s.push_str(":-");
        if !body.is_empty() {
            s.push(' ');
            s.push_str(&body.join(", "));
        }
    }
    s.push('.');
    s
}

fn render_rule_name(n: &Symbol) -> String {
    n.to_string()
}

/// One rule per line; parsing the result yields the same program.
pub fn render_program(p: &Program) -> String {
    let mut s = String::new();
    for r in &p.rules {
        s.push_str(&render_rule(r));
        s.push('\n');
    }
    s
}

pub fn render_atoms<'a>(atoms: impl IntoIterator<Item = &'a Atom>) -> String {
    let parts: Vec<String> = atoms.into_iter().map(render_atom).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn render_interpretation(m: &OpenInterpretation) -> String {
    let u: Vec<String> = m.universe.elements().iter().map(render_const).collect();
    format!("({{{}}}, {})", u.join(", "), render_atoms(&m.atoms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;

    #[test]
    fn round_trip_small() {
        let src = "a(X) :- forall Y (q(X,Y) & (Y != X | ~r(Y)) => b(Y)), not c(X).\n:- p(\"Big\").\np(x) | not p(x).\n";
        let p = parse_program(src).unwrap();
        let text = render_program(&p);
        assert_eq!(parse_program(&text).unwrap(), p);
    }

    #[test]
    fn keywords_are_quoted() {
        assert_eq!(render_const(&Symbol::new("not")), "\"not\"");
        assert_eq!(render_const(&Symbol::new("#u1")), "#u1");
        assert_eq!(render_const(&Symbol::new("0")), "0");
    }
}
