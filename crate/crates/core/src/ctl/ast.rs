use crate::model::Symbol;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Ctl {
    True,
    False,
    Prop(Symbol),
    Not(Box<Ctl>),
    And(Box<Ctl>, Box<Ctl>),
    Or(Box<Ctl>, Box<Ctl>),
    Implies(Box<Ctl>, Box<Ctl>),
    Iff(Box<Ctl>, Box<Ctl>),
    EX(Box<Ctl>),
    AX(Box<Ctl>),
    EF(Box<Ctl>),
    AF(Box<Ctl>),
    EG(Box<Ctl>),
    AG(Box<Ctl>),
    EU(Box<Ctl>, Box<Ctl>),
    AU(Box<Ctl>, Box<Ctl>),
}

impl Ctl {
    pub fn prop(name: &str) -> Ctl {
        Ctl::Prop(Symbol::new(name))
    }

    pub fn not(f: Ctl) -> Ctl {
        Ctl::Not(Box::new(f))
    }

    pub fn and(a: Ctl, b: Ctl) -> Ctl {
        Ctl::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Ctl, b: Ctl) -> Ctl {
        Ctl::Or(Box::new(a), Box::new(b))
    }

    pub fn ex(f: Ctl) -> Ctl {
        Ctl::EX(Box::new(f))
    }

    pub fn eu(a: Ctl, b: Ctl) -> Ctl {
        Ctl::EU(Box::new(a), Box::new(b))
    }

    pub fn af(f: Ctl) -> Ctl {
        Ctl::AF(Box::new(f))
    }

    /// Proposition names in first-occurrence order without duplicates.
    pub fn props(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let Ctl::Prop(p) = f {
                if !out.contains(p) {
                    out.push(p.clone());
                }
            }
        });
        out
    }

    pub fn visit(&self, f: &mut dyn FnMut(&Ctl)) {
        f(self);
        match self {
            Ctl::True | Ctl::False | Ctl::Prop(_) => {}
            Ctl::Not(a) | Ctl::EX(a) | Ctl::AX(a) | Ctl::EF(a) | Ctl::AF(a) | Ctl::EG(a) | Ctl::AG(a) => a.visit(f),
            Ctl::And(a, b) | Ctl::Or(a, b) | Ctl::Implies(a, b) | Ctl::Iff(a, b) | Ctl::EU(a, b) | Ctl::AU(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    /// Number of temporal operators.
    pub fn temporal_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |f| {
            if matches!(
                f,
                Ctl::EX(_) | Ctl::AX(_) | Ctl::EF(_) | Ctl::AF(_) | Ctl::EG(_) | Ctl::AG(_) | Ctl::EU(..) | Ctl::AU(..)
            ) {
                n += 1;
            }
        });
        n
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// True when only the base connectives remain: `~ & EX E(U) AF`, `true`, propositions.
    pub fn is_normalized(&self) -> bool {
        let mut ok = true;
        self.visit(&mut |f| {
            ok &= matches!(
                f,
                Ctl::True | Ctl::Prop(_) | Ctl::Not(_) | Ctl::And(..) | Ctl::EX(_) | Ctl::EU(..) | Ctl::AF(_)
            )
        });
        ok
    }
}
