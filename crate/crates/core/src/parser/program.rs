use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::lexer::{Cursor, Tok};
use crate::error::{Error, Result, SourceSpan};
use crate::model::{Atom, BoolFormula, GeneralizedLiteral, Literal, Program, Rule, Symbol, Term};

const KEYWORDS: &[&str] = &["not", "v", "forall", "exists", "true", "false"];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// Parse a program. Every core-model invariant violation is reported with
/// the span where it was detected.
pub fn parse_program(src: &str) -> Result<Program> {
    let mut p = ProgramParser::new(src)?;
    let mut rules = Vec::new();
    while !p.cur.at(&Tok::Eof) {
        let idx = rules.len() + 1;
        rules.push(p.rule(idx)?);
    }
    p.finish()?;
    let program = Program { rules };
    program.validate()?;
    Ok(program)
}

/// Parse a single atom such as `q(a, X)`.
pub fn parse_atom(src: &str) -> Result<Atom> {
    let mut p = ProgramParser::new(src)?;
    let a = p.atom()?;
    p.cur.expect(&Tok::Eof)?;
    Ok(a)
}

/// Parse ground atoms separated by `,` or `.`.
pub fn parse_atoms(src: &str) -> Result<Vec<Atom>> {
    let mut p = ProgramParser::new(src)?;
    let mut out = Vec::new();
    loop {
        while p.cur.eat(&Tok::Comma) || p.cur.eat(&Tok::Dot) {}
        if p.cur.at(&Tok::Eof) {
            break;
        }
        let span = p.cur.span();
        let a = p.atom()?;
        if !a.is_ground() {
            return Err(p.cur.error_at(span, "expected a ground atom"));
        }
        out.push(a);
    }
    Ok(out)
}

/// Parse constants separated by commas.
pub fn parse_constants(src: &str) -> Result<Vec<Symbol>> {
    let mut p = ProgramParser::new(src)?;
    let mut out = Vec::new();
    loop {
        if p.cur.at(&Tok::Eof) {
            break;
        }
        match p.term()? {
            Term::Const(c) => out.push(c),
            Term::Var(v) => return Err(p.cur.error(format!("expected a constant, found variable {v}"))),
        }
        if !p.cur.eat(&Tok::Comma) {
            p.cur.expect(&Tok::Eof)?;
            break;
        }
    }
    Ok(out)
}

struct ProgramParser {
    cur: Cursor,
    arities: HashMap<Symbol, (usize, SourceSpan)>,
    constants: BTreeMap<Symbol, SourceSpan>,
    names: BTreeSet<Symbol>,
}

impl ProgramParser {
    fn new(src: &str) -> Result<Self> {
        Ok(ProgramParser {
            cur: Cursor::new(src)?,
            arities: HashMap::new(),
            constants: BTreeMap::new(),
            names: BTreeSet::new(),
        })
    }

    fn finish(&self) -> Result<()> {
        for (c, span) in &self.constants {
            if self.arities.contains_key(c) {
                return Err(Error::Parse {
                    message: format!("{c} is used both as a predicate and as a constant"),
                    span: *span,
                });
            }
        }
        Ok(())
    }

    fn rule(&mut self, index: usize) -> Result<Rule> {
        let start = self.cur.span();
        let name = match (self.cur.peek().clone(), self.cur.peek_at(1).clone()) {
            (Tok::Ident(n) | Tok::Reserved(n), Tok::Colon) if !is_keyword(&n) => {
                self.cur.bump();
                self.cur.bump();
                Symbol::from(n)
            }
            _ => Symbol::from(format!("r{index}")),
        };
        if !self.names.insert(name.clone()) {
            return Err(self.cur.error_at(start, format!("duplicate rule name {name}")));
        }
        let mut head = BTreeSet::new();
        if !self.cur.at(&Tok::ColonDash) {
            loop {
                let span = self.cur.span();
                if self.cur.at_word("forall") {
                    return Err(self.cur.error("generalized literal in rule head"));
                }
                let l = self.literal()?;
                if !l.negated && l.atom.is_equality() {
                    return Err(self.cur.error_at(span, format!("rule {name} has an equality atom in its positive head")));
                }
                if !l.negated && head.iter().any(|h: &Literal| !h.negated && h.atom != l.atom) {
                    return Err(self.cur.error_at(span, format!("rule {name} has more than one positive head atom")));
                }
                head.insert(l);
                if self.cur.eat(&Tok::Bar) {
                    continue;
                }
                if self.cur.at_word("v") && !matches!(self.cur.peek_at(1), Tok::Eq | Tok::Neq) {
                    self.cur.bump();
                    continue;
                }
                break;
            }
        }
        let mut body = BTreeSet::new();
        let mut glits = BTreeSet::new();
        if self.cur.eat(&Tok::ColonDash) && !self.cur.at(&Tok::Dot) {
            loop {
                if self.cur.at_word("forall") {
                    glits.insert(self.glit()?);
                } else {
                    body.insert(self.literal()?);
                }
                if !self.cur.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.cur.expect(&Tok::Dot)?;
        Ok(Rule { name, head, body, glits })
    }

    fn literal(&mut self) -> Result<Literal> {
        if self.cur.at_word("not") && !matches!(self.cur.peek_at(1), Tok::Eq | Tok::Neq | Tok::LParen | Tok::Comma | Tok::Dot) {
            self.cur.bump();
            let span = self.cur.span();
            let l = self.positive_literal()?;
            if l.negated {
                return Err(self.cur.error_at(span, "`not` applied to an inequality"));
            }
            return Ok(Literal::neg(l.atom));
        }
        self.positive_literal()
    }

    /// Atom, classical-negated atom, equality or inequality.
    fn positive_literal(&mut self) -> Result<Literal> {
        if self.cur.eat(&Tok::Minus) {
            let a = self.atom()?;
            let name = a.name().cloned().expect("named atom");
            return self.register(Atom::named(Symbol::from(format!("neg_{name}")), a.args)).map(Literal::pos);
        }
        let is_eq = match self.cur.peek() {
            Tok::Var(_) | Tok::Quoted(_) => true,
            Tok::Ident(_) | Tok::Reserved(_) => matches!(self.cur.peek_at(1), Tok::Eq | Tok::Neq),
            _ => false,
        };
        if is_eq {
            let l = self.term()?;
            let negated = match self.cur.bump() {
                Tok::Eq => false,
                Tok::Neq => true,
                t => return Err(self.cur.error(format!("expected `=` or `!=`, found {}", t.describe()))),
            };
            let r = self.term()?;
            return Ok(Literal { atom: Atom::eq(l, r), negated });
        }
        self.atom().map(Literal::pos)
    }

    fn atom(&mut self) -> Result<Atom> {
        let span = self.cur.span();
        let name = match self.cur.bump() {
            Tok::Ident(n) | Tok::Reserved(n) if !is_keyword(&n) => Symbol::from(n),
            t => return Err(self.cur.error_at(span, format!("expected a predicate, found {}", t.describe()))),
        };
        let mut args = Vec::new();
        if self.cur.eat(&Tok::LParen) {
            if !self.cur.at(&Tok::RParen) {
                loop {
                    args.push(self.term()?);
                    if !self.cur.eat(&Tok::Comma) {
                        break;
                    }
                }
            }
            self.cur.expect(&Tok::RParen)?;
        }
        match self.arities.get(&name) {
            Some(&(k, _)) if k != args.len() => {
                return Err(self.cur.error_at(
                    span,
                    format!("predicate {name} used with arity {k} and {}", args.len()),
                ))
            }
            Some(_) => {}
            None => {
                self.arities.insert(name.clone(), (args.len(), span));
            }
        }
        Ok(Atom::named(name, args))
    }

    fn register(&mut self, a: Atom) -> Result<Atom> {
        let name = a.name().cloned().expect("named atom");
        match self.arities.get(&name) {
            Some(&(k, span)) if k != a.args.len() => Err(self.cur.error_at(
                span,
                format!("predicate {name} used with arity {k} and {}", a.args.len()),
            )),
            Some(_) => Ok(a),
            None => {
                self.arities.insert(name, (a.args.len(), self.cur.span()));
                Ok(a)
            }
        }
    }

    fn term(&mut self) -> Result<Term> {
        let span = self.cur.span();
        let t = match self.cur.bump() {
            Tok::Var(v) => Term::Var(Symbol::from(v)),
            Tok::Ident(c) | Tok::Reserved(c) | Tok::Quoted(c) => Term::Const(Symbol::from(c)),
            t => return Err(self.cur.error_at(span, format!("expected a term, found {}", t.describe()))),
        };
        if let Term::Const(c) = &t {
            self.constants.entry(c.clone()).or_insert(span);
        }
        Ok(t)
    }

    fn glit(&mut self) -> Result<GeneralizedLiteral> {
        self.cur.bump();
        let mut bound = Vec::new();
        while let Tok::Var(v) = self.cur.peek().clone() {
            let span = self.cur.span();
            self.cur.bump();
            let v = Symbol::from(v);
            if bound.contains(&v) {
                return Err(self.cur.error_at(span, format!("variable {v} quantified twice")));
            }
            bound.push(v);
            if !self.cur.eat(&Tok::Comma) {
                break;
            }
        }
        self.cur.expect(&Tok::LParen)?;
        let antecedent = self.bool_or()?;
        self.cur.expect(&Tok::FatArrow)?;
        let span = self.cur.span();
        let l = self.positive_literal()?;
        if l.negated {
            return Err(self.cur.error_at(span, "consequent must be an atom"));
        }
        self.cur.expect(&Tok::RParen)?;
        Ok(GeneralizedLiteral { bound, antecedent, consequent: l.atom })
    }

    fn bool_or(&mut self) -> Result<BoolFormula> {
        let mut parts = vec![self.bool_and()?];
        while self.cur.eat(&Tok::Bar) {
            parts.push(self.bool_and()?);
        }
        Ok(BoolFormula::or(parts))
    }

    fn bool_and(&mut self) -> Result<BoolFormula> {
        let mut parts = vec![self.bool_unary()?];
        while self.cur.eat(&Tok::Amp) {
            parts.push(self.bool_unary()?);
        }
        Ok(BoolFormula::and(parts))
    }

    fn bool_unary(&mut self) -> Result<BoolFormula> {
        if self.cur.eat(&Tok::Tilde) {
            return Ok(BoolFormula::not(self.bool_unary()?));
        }
        if self.cur.eat(&Tok::LParen) {
            let f = self.bool_or()?;
            self.cur.expect(&Tok::RParen)?;
            return Ok(f);
        }
        let l = self.positive_literal()?;
        let a = BoolFormula::Atom(l.atom);
        Ok(if l.negated { BoolFormula::not(a) } else { a })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_free_rule_and_labels() {
        let p = parse_program("f: q(X) v not q(X).\nq(a) | not q(a).\n:- q(b).").unwrap();
        assert_eq!(p.rules.len(), 3);
        assert_eq!(p.rules[0].name.as_str(), "f");
        assert_eq!(p.rules[1].name.as_str(), "r2");
        assert!(p.rules[0].is_free());
        assert!(p.rules[2].is_constraint());
    }

    #[test]
    fn parses_glit_and_equalities() {
        let p = parse_program("a(X) :- forall Y (q(X,Y) & Y != X => b(Y)), not c(X), X = X.").unwrap();
        let r = &p.rules[0];
        assert_eq!(r.glits.len(), 1);
        assert_eq!(r.body.len(), 2);
        assert_eq!(r.vars().len(), 1);
    }

    #[test]
    fn classical_negation_is_renamed() {
        let p = parse_program("-crash(X) :- ok(X).").unwrap();
        assert_eq!(p.rules[0].head_atom().unwrap().name().unwrap().as_str(), "neg_crash");
    }

    #[test]
    fn rejects_invariant_violations() {
        assert!(parse_program("p(a). p(a,b).").is_err());
        assert!(parse_program("X = Y :- p(X,Y).").is_err());
        assert!(parse_program("p(a) | q(a).").is_err());
        assert!(parse_program("forall X (p(X) => q(X)) :- r.").is_err());
        assert!(parse_program("p(q). q(a).").is_err());
        assert!(parse_program("r: p. r: q.").is_err());
        assert!(parse_program("p(a) :- q(a)").is_err());
    }

    #[test]
    fn error_spans_point_at_offender() {
        match parse_program("p(a).\np(a,b).") {
            Err(Error::Parse { span, .. }) => assert_eq!(span.line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn atoms_and_constants() {
        assert_eq!(parse_atoms("s(x), r(a). q(x)").unwrap().len(), 3);
        assert_eq!(parse_constants("a, b, \"C d\"").unwrap().len(), 3);
        assert!(parse_atoms("s(X)").is_err());
    }
}
