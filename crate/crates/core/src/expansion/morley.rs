use std::collections::HashMap;

use super::ExpansionError;
use crate::semantics::{Evaluator, GeneralStructure};
use crate::syntax::{Formula, FormulaKind, Term, Vocabulary};

/// Depth-bounded atomic Morleyization: one new predicate per atomic formula
/// whose terms nest at most `depth` deep, with variables `x1, x2, ...`
/// numbered by first occurrence. The new symbol for `P(F(x1), x2)` is
/// `P[F[x1],x2]`.
#[derive(Clone, Debug)]
pub struct MorleyVocabulary {
    source: Vocabulary,
    depth: usize,
    vocab: Vocabulary,
    /// `(symbol, atom over x1..xv, v)` in vocabulary order.
    atoms: Vec<(String, Formula, usize)>,
    index: HashMap<String, usize>,
}

/// Term shapes with `None` marking a leaf.
#[derive(Clone, Debug)]
enum Shape {
    Leaf,
    App(String, Vec<Shape>),
}

impl Shape {
    fn leaves(&self) -> usize {
        match self {
            Shape::Leaf => 1,
            Shape::App(_, args) => args.iter().map(Shape::leaves).sum(),
        }
    }

    fn fill(&self, vars: &mut impl Iterator<Item = String>) -> Term {
        match self {
            Shape::Leaf => Term::Var(vars.next().expect("one variable per leaf")),
            Shape::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.fill(vars)).collect())
            }
        }
    }
}

fn product<T: Clone>(pool: &[T], k: usize) -> Vec<Vec<T>> {
    crate::semantics::tuples(pool.len(), k)
        .map(|t| t.into_iter().map(|i| pool[i].clone()).collect())
        .collect()
}

fn shapes(vocab: &Vocabulary, depth: usize) -> Vec<Shape> {
    let mut level = vec![Shape::Leaf];
    for _ in 0..depth {
        let mut next = vec![Shape::Leaf];
        for f in vocab.functions() {
            for args in product(&level, f.arity) {
                next.push(Shape::App(f.name.clone(), args));
            }
        }
        level = next;
    }
    level
}

/// Restricted growth strings of length `n`: canonical set partitions.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, cur: &mut Vec<usize>, blocks: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=blocks {
            cur.push(b);
            go(n, cur, blocks.max(b + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::with_capacity(n), 0, &mut out);
    out
}

fn bracket(t: &Term) -> String {
    match t {
        Term::Var(v) | Term::Const(v) => v.clone(),
        Term::Elem(e) => format!("#{e}"),
        Term::App(f, args) => format!(
            "{f}[{}]",
            args.iter().map(bracket).collect::<Vec<_>>().join(",")
        ),
    }
}

fn symbol_for(predicate: &str, args: &[Term]) -> String {
    format!(
        "{predicate}[{}]",
        args.iter().map(bracket).collect::<Vec<_>>().join(",")
    )
}

fn collect_leaves<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
    match t {
        Term::App(_, args) => args.iter().for_each(|a| collect_leaves(a, out)),
        leaf => out.push(leaf),
    }
}

fn canonical_leaves(t: &Term, map: &mut Vec<Term>) -> Term {
    match t {
        Term::App(f, args) => Term::App(
            f.clone(),
            args.iter().map(|a| canonical_leaves(a, map)).collect(),
        ),
        leaf => {
            let i = match map.iter().position(|l| l == leaf) {
                Some(i) => i,
                None => {
                    map.push(leaf.clone());
                    map.len() - 1
                }
            };
            Term::Var(format!("x{}", i + 1))
        }
    }
}

impl MorleyVocabulary {
    pub fn new(source: &Vocabulary, depth: usize) -> Result<Self, ExpansionError> {
        if depth == 0 {
            return Err(ExpansionError::ZeroDepth);
        }
        let pool = shapes(source, depth);
        let mut vocab = Vocabulary::new();
        let mut atoms = Vec::new();
        let mut index = HashMap::new();
        for p in source.predicates() {
            for args in product(&pool, p.arity) {
                let leaves: usize = args.iter().map(Shape::leaves).sum();
                for rgs in partitions(leaves) {
                    let vars = rgs
                        .iter()
                        .map(|b| format!("x{}", b + 1))
                        .collect::<Vec<_>>();
                    let mut it = vars.into_iter();
                    let terms: Vec<Term> = args.iter().map(|s| s.fill(&mut it)).collect();
                    let name = symbol_for(&p.name, &terms);
                    let v = rgs.iter().max().map_or(0, |m| m + 1);
                    vocab
                        .add_predicate(&name, v)
                        .map_err(ExpansionError::Syntax)?;
                    index.insert(name.clone(), atoms.len());
                    atoms.push((name, Formula::atom(&p.name, terms), v));
                }
            }
        }
        for c in source.constants() {
            vocab.add_constant(c)?;
        }
        Ok(MorleyVocabulary {
            source: source.clone(),
            depth,
            vocab,
            atoms,
            index,
        })
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `(new symbol, original atom)` pairs.
    pub fn atoms(&self) -> impl Iterator<Item = (&str, &Formula)> {
        self.atoms.iter().map(|(n, f, _)| (n.as_str(), f))
    }

    /// Replaces every atomic subformula by its new predicate applied to the
    /// atom's distinct leaves in first-occurrence order.
    pub fn translate(&self, f: &Formula) -> Result<Formula, ExpansionError> {
        self.source.check_formula(f)?;
        self.translate_checked(f)
    }

    fn translate_checked(&self, f: &Formula) -> Result<Formula, ExpansionError> {
        Ok(match f.kind() {
            FormulaKind::Atom { predicate, args } => {
                let depth = args.iter().map(Term::depth).max().unwrap_or(0);
                if depth > self.depth {
                    return Err(ExpansionError::DepthExceeded {
                        formula: f.to_string(),
                        depth,
                        limit: self.depth,
                    });
                }
                let mut leaves = Vec::new();
                let pattern: Vec<Term> = args
                    .iter()
                    .map(|a| canonical_leaves(a, &mut leaves))
                    .collect();
                let name = symbol_for(predicate, &pattern);
                debug_assert!(self.index.contains_key(&name));
                let mut check = Vec::new();
                args.iter().for_each(|a| collect_leaves(a, &mut check));
                debug_assert!(check.iter().all(|l| leaves.contains(l)));
                Formula::atom(&name, leaves)
            }
            FormulaKind::Apply { conn, args } => Formula::apply(
                conn.clone(),
                args.iter()
                    .map(|a| self.translate_checked(a))
                    .collect::<Result<_, _>>()?,
            ),
            FormulaKind::Quant { q, var, body } => {
                Formula::quant(*q, var, self.translate_checked(body)?)
            }
        })
    }

    /// The relational structure interpreting each new predicate by its atom.
    pub fn interpret(&self, m: &GeneralStructure) -> Result<GeneralStructure, ExpansionError> {
        if m.vocab() != &self.source {
            return Err(crate::semantics::SemanticsError::VocabularyMismatch(
                "structure does not match the Morleyized vocabulary".into(),
            )
            .into());
        }
        let mut ev = Evaluator::new(m);
        let mut tables = Vec::with_capacity(self.atoms.len());
        for (_, atom, v) in &self.atoms {
            let vars: Vec<String> = (1..=*v).map(|i| format!("x{i}")).collect();
            tables.push(ev.table_over(atom, &vars)?);
        }
        Ok(GeneralStructure::from_tables(
            self.vocab.clone(),
            m.universe().to_vec(),
            tables,
            Vec::new(),
            m.constants().to_vec(),
        )?)
    }
}

/// Morleyizes `m` at term depth `depth`.
pub fn morleyize(
    m: &GeneralStructure,
    depth: usize,
) -> Result<(MorleyVocabulary, GeneralStructure), ExpansionError> {
    let mv = MorleyVocabulary::new(m.vocab(), depth)?;
    let translated = mv.interpret(m)?;
    Ok((mv, translated))
}
