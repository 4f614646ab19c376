//! Translation between propositions and lax-logic formulas, reading `∃` as
//! the lax modality `◯`.

use std::fmt;

use crate::syntax::{Name, Prop};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum LaxProp {
    Atom(Name),
    Implies(Box<LaxProp>, Box<LaxProp>),
    Circle(Box<LaxProp>),
}

impl LaxProp {
    pub fn atom(name: impl Into<Name>) -> LaxProp {
        LaxProp::Atom(name.into())
    }

    pub fn implies(a: LaxProp, b: LaxProp) -> LaxProp {
        LaxProp::Implies(Box::new(a), Box::new(b))
    }

    pub fn circle(a: LaxProp) -> LaxProp {
        LaxProp::Circle(Box::new(a))
    }
}

pub fn to_lax(p: &Prop) -> LaxProp {
    match p {
        Prop::Atom(a) => LaxProp::Atom(a.clone()),
        Prop::Arrow(a, b) => LaxProp::implies(to_lax(a), to_lax(b)),
        Prop::Exists(a) => LaxProp::circle(to_lax(a)),
    }
}

pub fn from_lax(p: &LaxProp) -> Prop {
    match p {
        LaxProp::Atom(a) => Prop::Atom(a.clone()),
        LaxProp::Implies(a, b) => Prop::arrow(from_lax(a), from_lax(b)),
        LaxProp::Circle(a) => Prop::exists(from_lax(a)),
    }
}

/// ASCII rendering: `A => B` (right associative) and `O A`.
impl fmt::Display for LaxProp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LaxProp::Atom(a) => write!(f, "{a}"),
            LaxProp::Implies(a, b) => {
                if let LaxProp::Implies(..) = **a {
                    write!(f, "({a}) => {b}")
                } else {
                    write!(f, "{a} => {b}")
                }
            }
            LaxProp::Circle(a) => match **a {
                LaxProp::Implies(..) => write!(f, "O ({a})"),
                _ => write!(f, "O {a}"),
            },
        }
    }
}
