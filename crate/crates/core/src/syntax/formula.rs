use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::Term;
use crate::kernel::{Connective, TruthValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Sup,
    Inf,
}

impl Quantifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Sup => "sup",
            Quantifier::Inf => "inf",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FormulaKind {
    Atom {
        predicate: String,
        args: Vec<Term>,
    },
    Apply {
        conn: Connective,
        args: Vec<Formula>,
    },
    Quant {
        q: Quantifier,
        var: String,
        body: Formula,
    },
}

#[derive(Debug)]
pub(crate) struct Node {
    kind: FormulaKind,
    free: Vec<String>,
    depth: usize,
    quantifier_depth: usize,
}

/// A continuous-logic formula. Cloning is cheap and subformulas may be shared,
/// so sequences built by repeated composition stay linear in memory.
#[derive(Clone)]
pub struct Formula(Arc<Node>);

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.kind.hash(state)
    }
}

impl Formula {
    fn from_kind(kind: FormulaKind) -> Self {
        let (free, depth, quantifier_depth) = match &kind {
            FormulaKind::Atom { args, .. } => {
                let mut s = BTreeSet::new();
                args.iter().for_each(|a| a.collect_vars(&mut s));
                (s.into_iter().collect(), 0, 0)
            }
            FormulaKind::Apply { args, .. } => {
                let mut s = BTreeSet::new();
                for a in args {
                    s.extend(a.free_vars().iter().cloned());
                }
                let depth = args.iter().map(|a| a.depth() + 1).max().unwrap_or(0);
                let qd = args
                    .iter()
                    .map(Formula::quantifier_depth)
                    .max()
                    .unwrap_or(0);
                (s.into_iter().collect(), depth, qd)
            }
            FormulaKind::Quant { var, body, .. } => {
                let free = body
                    .free_vars()
                    .iter()
                    .filter(|v| *v != var)
                    .cloned()
                    .collect();
                (free, body.depth() + 1, body.quantifier_depth() + 1)
            }
        };
        Formula(Arc::new(Node {
            kind,
            free,
            depth,
            quantifier_depth,
        }))
    }

    pub fn atom(predicate: &str, args: Vec<Term>) -> Self {
        Self::from_kind(FormulaKind::Atom {
            predicate: predicate.to_string(),
            args,
        })
    }

    /// Atomic formula over variables named by `vars`.
    pub fn atom_vars(predicate: &str, vars: &[&str]) -> Self {
        Self::atom(predicate, vars.iter().map(|v| Term::var(v)).collect())
    }

    /// Panics if the argument count does not match the connective's arity.
    pub fn apply(conn: Connective, args: Vec<Formula>) -> Self {
        assert_eq!(
            conn.arity(),
            args.len(),
            "connective `{}` applied to {} argument(s)",
            conn.name(),
            args.len()
        );
        Self::from_kind(FormulaKind::Apply { conn, args })
    }

    pub fn constant(value: TruthValue) -> Self {
        Self::apply(Connective::Const(value), vec![])
    }

    pub fn zero() -> Self {
        Self::constant(TruthValue::zero())
    }

    pub fn quant(q: Quantifier, var: &str, body: Formula) -> Self {
        Self::from_kind(FormulaKind::Quant {
            q,
            var: var.to_string(),
            body,
        })
    }

    pub fn sup(var: &str, body: Formula) -> Self {
        Self::quant(Quantifier::Sup, var, body)
    }

    pub fn inf(var: &str, body: Formula) -> Self {
        Self::quant(Quantifier::Inf, var, body)
    }

    pub fn neg(a: Formula) -> Self {
        Self::apply(Connective::Neg, vec![a])
    }

    pub fn half(a: Formula) -> Self {
        Self::apply(Connective::Half, vec![a])
    }

    pub fn dotminus(a: Formula, b: Formula) -> Self {
        Self::apply(Connective::DotMinus, vec![a, b])
    }

    pub fn dotplus(a: Formula, b: Formula) -> Self {
        Self::apply(Connective::DotPlus, vec![a, b])
    }

    pub fn min(a: Formula, b: Formula) -> Self {
        Self::apply(Connective::Min, vec![a, b])
    }

    pub fn max(a: Formula, b: Formula) -> Self {
        Self::apply(Connective::Max, vec![a, b])
    }

    pub fn absdiff(a: Formula, b: Formula) -> Self {
        Self::apply(Connective::AbsDiff, vec![a, b])
    }

    /// Left fold with `max`; the empty list gives the constant 0.
    pub fn max_all(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::max)
            .unwrap_or_else(Formula::zero)
    }

    /// Quantifies `vars` from the outside in: `sup v1 (sup v2 ... body)`.
    pub fn sup_many(vars: &[String], body: Formula) -> Self {
        vars.iter().rev().fold(body, |acc, v| Formula::sup(v, acc))
    }

    pub fn kind(&self) -> &FormulaKind {
        &self.0.kind
    }

    /// Free variables, sorted.
    pub fn free_vars(&self) -> &[String] {
        &self.0.free
    }

    pub fn is_sentence(&self) -> bool {
        self.0.free.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.0.depth
    }

    pub fn quantifier_depth(&self) -> usize {
        self.0.quantifier_depth
    }

    pub(crate) fn node_id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// Maximal function nesting over all atomic subformulas.
    pub fn term_depth(&self) -> usize {
        match self.kind() {
            FormulaKind::Atom { args, .. } => args.iter().map(Term::depth).max().unwrap_or(0),
            FormulaKind::Apply { args, .. } => {
                args.iter().map(Formula::term_depth).max().unwrap_or(0)
            }
            FormulaKind::Quant { body, .. } => body.term_depth(),
        }
    }

    /// All variable names occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_all_vars(&mut out);
        out
    }

    fn collect_all_vars(&self, out: &mut BTreeSet<String>) {
        match self.kind() {
            FormulaKind::Atom { args, .. } => args.iter().for_each(|a| a.collect_vars(out)),
            FormulaKind::Apply { args, .. } => args.iter().for_each(|a| a.collect_all_vars(out)),
            FormulaKind::Quant { var, body, .. } => {
                out.insert(var.clone());
                body.collect_all_vars(out);
            }
        }
    }

    /// Every subformula that is an atom, in left-to-right order.
    pub fn atoms(&self) -> Vec<(String, Vec<Term>)> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |p, args| out.push((p.to_string(), args.to_vec())));
        out
    }

    fn visit_atoms(&self, f: &mut impl FnMut(&str, &[Term])) {
        match self.kind() {
            FormulaKind::Atom { predicate, args } => f(predicate, args),
            FormulaKind::Apply { args, .. } => args.iter().for_each(|a| a.visit_atoms(f)),
            FormulaKind::Quant { body, .. } => body.visit_atoms(f),
        }
    }

    /// Capture-avoiding substitution of terms for free variables. Bindings for
    /// variables that are not free are ignored.
    pub fn substitute(&self, binding: &BTreeMap<String, Term>) -> Formula {
        let live: BTreeMap<String, Term> = binding
            .iter()
            .filter(|(v, _)| self.0.free.binary_search(v).is_ok())
            .map(|(v, t)| (v.clone(), t.clone()))
            .collect();
        if live.is_empty() {
            return self.clone();
        }
        match self.kind() {
            FormulaKind::Atom { predicate, args } => Formula::atom(
                predicate,
                args.iter().map(|a| a.substitute(&live)).collect(),
            ),
            FormulaKind::Apply { conn, args } => Formula::apply(
                conn.clone(),
                args.iter().map(|a| a.substitute(&live)).collect(),
            ),
            FormulaKind::Quant { q, var, body } => {
                let mut incoming = BTreeSet::new();
                live.values().for_each(|t| t.collect_vars(&mut incoming));
                if incoming.contains(var) {
                    let mut avoid = incoming;
                    avoid.extend(body.all_vars());
                    avoid.extend(live.keys().cloned());
                    let fresh = fresh_name(var, &avoid);
                    let renamed =
                        body.substitute(&BTreeMap::from([(var.clone(), Term::Var(fresh.clone()))]));
                    Formula::quant(*q, &fresh, renamed.substitute(&live))
                } else {
                    Formula::quant(*q, var, body.substitute(&live))
                }
            }
        }
    }

    /// Renames bound variables to `v0, v1, ...` in pre-order, skipping names
    /// that occur free. Two formulas are alpha-equivalent iff their canonical
    /// forms are equal.
    pub fn canonical(&self) -> Formula {
        let free: BTreeSet<String> = self.0.free.iter().cloned().collect();
        let mut counter = 0usize;
        self.canon(&free, &mut counter, &BTreeMap::new())
    }

    fn canon(
        &self,
        free: &BTreeSet<String>,
        counter: &mut usize,
        env: &BTreeMap<String, String>,
    ) -> Formula {
        // Closed subformulas with no binders below can be reused as-is.
        if self.quantifier_depth() == 0 && self.0.free.iter().all(|v| !env.contains_key(v)) {
            return self.clone();
        }
        match self.kind() {
            FormulaKind::Atom { predicate, args } => {
                let map: BTreeMap<String, Term> = env
                    .iter()
                    .map(|(k, v)| (k.clone(), Term::Var(v.clone())))
                    .collect();
                Formula::atom(predicate, args.iter().map(|a| a.substitute(&map)).collect())
            }
            FormulaKind::Apply { conn, args } => Formula::apply(
                conn.clone(),
                args.iter().map(|a| a.canon(free, counter, env)).collect(),
            ),
            FormulaKind::Quant { q, var, body } => {
                let name = loop {
                    let candidate = format!("v{}", *counter);
                    *counter += 1;
                    if !free.contains(&candidate) {
                        break candidate;
                    }
                };
                let mut inner = env.clone();
                inner.insert(var.clone(), name.clone());
                Formula::quant(*q, &name, body.canon(free, counter, &inner))
            }
        }
    }

    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self.canonical() == other.canonical()
    }
}

/// `base` followed by as many primes as needed to avoid `used`.
pub fn fresh_name(base: &str, used: &BTreeSet<String>) -> String {
    let mut name = format!("{base}'");
    while used.contains(&name) {
        name.push('\'');
    }
    name
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            FormulaKind::Atom { predicate, args } => {
                write!(f, "({predicate}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
            FormulaKind::Apply {
                conn: Connective::Const(r),
                ..
            } => write!(f, "{r}"),
            FormulaKind::Apply { conn, args } => {
                write!(f, "({}", conn.name())?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
            FormulaKind::Quant { q, var, body } => write!(f, "({} {var} {body})", q.keyword()),
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
