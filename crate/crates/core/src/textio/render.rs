use std::fmt::Write;

use crate::interp::Interpretation;
use crate::kernel::TruthValue;
use crate::semantics::{tuples, GeneralStructure};
use crate::syntax::{Formula, FormulaSequence, Term, Theory, Vocabulary};

/// Canonical text for a domain object.
pub trait Render {
    fn render(&self) -> String;
}

pub fn serialize<T: Render + ?Sized>(x: &T) -> String {
    x.render()
}

impl Render for TruthValue {
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Render for Term {
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Render for Formula {
    fn render(&self) -> String {
        self.canonical().to_string()
    }
}

impl Render for Vocabulary {
    fn render(&self) -> String {
        let mut out = String::from("(vocabulary");
        for p in self.predicates() {
            write!(out, "\n  (predicate {} {})", p.name, p.arity).unwrap();
        }
        for f in self.functions() {
            write!(out, "\n  (function {} {})", f.name, f.arity).unwrap();
        }
        for c in self.constants() {
            write!(out, "\n  (constant {c})").unwrap();
        }
        out.push(')');
        out
    }
}

impl Render for GeneralStructure {
    fn render(&self) -> String {
        let n = self.size();
        let mut out = format!("(structure\n  (universe {})", self.universe().join(" "));
        let row = |out: &mut String, t: &[usize], value: &str| {
            out.push_str(" (");
            for &e in t {
                out.push_str(self.label(e));
                out.push(' ');
            }
            out.push_str(value);
            out.push(')');
        };
        for (pi, p) in self.vocab().predicates().iter().enumerate() {
            write!(out, "\n  (predicate {} {}", p.name, p.arity).unwrap();
            for (t, v) in tuples(n, p.arity).zip(self.predicate_table(pi)) {
                row(&mut out, &t, &v.to_string());
            }
            out.push(')');
        }
        for (fi, f) in self.vocab().functions().iter().enumerate() {
            write!(out, "\n  (function {} {}", f.name, f.arity).unwrap();
            for (t, &v) in tuples(n, f.arity).zip(self.function_table(fi)) {
                row(&mut out, &t, self.label(v));
            }
            out.push(')');
        }
        for (ci, c) in self.vocab().constants().iter().enumerate() {
            write!(out, "\n  (constant {c} {})", self.label(self.constant(ci))).unwrap();
        }
        out.push(')');
        out
    }
}

impl Render for Theory {
    fn render(&self) -> String {
        let mut out = String::from("(theory");
        for s in self.sentences() {
            write!(out, "\n  {}", s.render()).unwrap();
        }
        out.push(')');
        out
    }
}

impl Render for FormulaSequence {
    fn render(&self) -> String {
        let mut out = format!(
            "(sequence\n  (frame {})\n  (schedule {})",
            self.frame().join(" "),
            self.schedule().keyword()
        );
        for f in self.entries() {
            write!(out, "\n  {}", f.render()).unwrap();
        }
        out.push(')');
        out
    }
}

impl Render for Interpretation {
    fn render(&self) -> String {
        let mut out = format!("(interpretation\n  (grid {})", self.denominator());
        for p in self.predicates() {
            write!(out, "\n  (predicate {} {})", p.name, p.arity).unwrap();
        }
        for (bound, name, r, f) in self.entries() {
            write!(
                out,
                "\n  ({bound} {name} {r} ({}) {})",
                f.params().join(" "),
                f.formula().render()
            )
            .unwrap();
        }
        out.push(')');
        out
    }
}
