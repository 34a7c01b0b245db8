use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use super::{Element, GeneralStructure, SemanticsError};
use crate::kernel::{Connective, TruthValue};
use crate::syntax::{Formula, FormulaKind, Quantifier, Term};

type Table = Rc<Vec<TruthValue>>;

/// Bottom-up evaluator. Each subformula is tabulated once over all
/// assignments of its own free variables; tables are cached per node, so
/// formulas with shared subterms are evaluated in time linear in the number
/// of distinct nodes.
pub struct Evaluator<'m> {
    m: &'m GeneralStructure,
    // The stored clone keeps the node alive, so its address stays unique.
    cache: HashMap<usize, (Formula, Table)>,
}

enum CompiledTerm {
    Slot(usize),
    Fixed(Element),
    App(usize, Vec<CompiledTerm>),
}

impl CompiledTerm {
    fn eval(&self, m: &GeneralStructure, slots: &[Element], buf: &mut Vec<Element>) -> Element {
        match self {
            CompiledTerm::Slot(i) => slots[*i],
            CompiledTerm::Fixed(e) => *e,
            CompiledTerm::App(f, args) => {
                let vals: Vec<Element> = args.iter().map(|a| a.eval(m, slots, buf)).collect();
                m.function_value(*f, &vals)
            }
        }
    }
}

fn pow(n: usize, k: usize) -> usize {
    n.pow(k as u32)
}

/// Strides of `child_vars` inside a tuple laid out as `parent_vars`.
fn strides(parent_vars: &[String], child_vars: &[String], n: usize) -> Vec<(usize, usize)> {
    let kc = child_vars.len();
    child_vars
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let pos = parent_vars
                .iter()
                .position(|p| p == v)
                .expect("child var in parent");
            (pos, pow(n, kc - 1 - j))
        })
        .collect()
}

impl<'m> Evaluator<'m> {
    pub fn new(m: &'m GeneralStructure) -> Self {
        Evaluator {
            m,
            cache: HashMap::new(),
        }
    }

    pub fn structure(&self) -> &'m GeneralStructure {
        self.m
    }

    /// Values of `f` for every assignment of its free variables, laid out in
    /// lexicographic order over the sorted variable list.
    pub fn table(&mut self, f: &Formula) -> Result<Table, SemanticsError> {
        if let Some((_, t)) = self.cache.get(&f.node_id()) {
            return Ok(t.clone());
        }
        let t = Rc::new(self.compute(f)?);
        self.cache.insert(f.node_id(), (f.clone(), t.clone()));
        Ok(t)
    }

    /// Values of `f` over all assignments to `vars` (which must cover the free
    /// variables of `f`), in lexicographic order of `vars`.
    pub fn table_over(
        &mut self,
        f: &Formula,
        vars: &[String],
    ) -> Result<Vec<TruthValue>, SemanticsError> {
        if let Some(v) = f.free_vars().iter().find(|v| !vars.contains(v)) {
            return Err(SemanticsError::UnboundVariable(v.clone()));
        }
        let base = self.table(f)?;
        let n = self.m.size();
        let st = strides(vars, f.free_vars(), n);
        Ok((0..pow(n, vars.len()))
            .map(|i| {
                let digits = super::decode_index(i, n, vars.len());
                let idx: usize = st.iter().map(|(p, s)| digits[*p] * s).sum();
                base[idx].clone()
            })
            .collect())
    }

    pub fn eval(
        &mut self,
        f: &Formula,
        assignment: &BTreeMap<String, Element>,
    ) -> Result<TruthValue, SemanticsError> {
        let n = self.m.size();
        let mut idx = 0;
        for v in f.free_vars() {
            let e = *assignment
                .get(v)
                .ok_or_else(|| SemanticsError::UnboundVariable(v.clone()))?;
            if e >= n {
                return Err(SemanticsError::ForeignElement(format!("#{e}")));
            }
            idx = idx * n + e;
        }
        Ok(self.table(f)?[idx].clone())
    }

    fn compile_term(&self, t: &Term, vars: &[String]) -> Result<CompiledTerm, SemanticsError> {
        let vocab = self.m.vocab();
        Ok(match t {
            Term::Var(v) => CompiledTerm::Slot(vars.iter().position(|x| x == v).expect("free var")),
            Term::Elem(l) => CompiledTerm::Fixed(self.m.element_or_err(l)?),
            Term::Const(c) => {
                let i = vocab.constant_index(c).ok_or_else(|| {
                    SemanticsError::VocabularyMismatch(format!("no constant `{c}`"))
                })?;
                CompiledTerm::Fixed(self.m.constant(i))
            }
            Term::App(g, args) => {
                let i = vocab.function_index(g).ok_or_else(|| {
                    SemanticsError::VocabularyMismatch(format!("no function `{g}`"))
                })?;
                if vocab.functions()[i].arity != args.len() {
                    return Err(SemanticsError::VocabularyMismatch(format!(
                        "`{g}` applied to {} argument(s)",
                        args.len()
                    )));
                }
                CompiledTerm::App(
                    i,
                    args.iter()
                        .map(|a| self.compile_term(a, vars))
                        .collect::<Result<_, _>>()?,
                )
            }
        })
    }

    fn compute(&mut self, f: &Formula) -> Result<Vec<TruthValue>, SemanticsError> {
        let n = self.m.size();
        let vars = f.free_vars();
        let k = vars.len();
        match f.kind() {
            FormulaKind::Atom { predicate, args } => {
                let vocab = self.m.vocab();
                let p = vocab.predicate_index(predicate).ok_or_else(|| {
                    SemanticsError::VocabularyMismatch(format!("no predicate `{predicate}`"))
                })?;
                if vocab.predicates()[p].arity != args.len() {
                    return Err(SemanticsError::VocabularyMismatch(format!(
                        "`{predicate}` applied to {} argument(s)",
                        args.len()
                    )));
                }
                let compiled = args
                    .iter()
                    .map(|a| self.compile_term(a, vars))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut buf = Vec::new();
                let mut tuple = vec![0; args.len()];
                Ok((0..pow(n, k))
                    .map(|i| {
                        let slots = super::decode_index(i, n, k);
                        for (t, c) in tuple.iter_mut().zip(&compiled) {
                            *t = c.eval(self.m, &slots, &mut buf);
                        }
                        self.m.predicate_value(p, &tuple).clone()
                    })
                    .collect())
            }
            FormulaKind::Apply {
                conn: Connective::Const(r),
                ..
            } => Ok(vec![r.clone()]),
            FormulaKind::Apply { conn, args } => {
                let children = args
                    .iter()
                    .map(|a| self.table(a))
                    .collect::<Result<Vec<_>, _>>()?;
                let st: Vec<_> = args
                    .iter()
                    .map(|a| strides(vars, a.free_vars(), n))
                    .collect();
                let mut digits = vec![0usize; k];
                let mut argv: Vec<TruthValue> = Vec::with_capacity(args.len());
                let mut out = Vec::with_capacity(pow(n, k));
                for _ in 0..pow(n, k) {
                    argv.clear();
                    for (c, s) in children.iter().zip(&st) {
                        let idx: usize = s.iter().map(|(p, w)| digits[*p] * w).sum();
                        argv.push(c[idx].clone());
                    }
                    out.push(conn.apply_unchecked(&argv));
                    increment(&mut digits, n);
                }
                Ok(out)
            }
            FormulaKind::Quant { q, var, body } => {
                let inner = self.table(body)?;
                let bvars = body.free_vars();
                let Some(pos) = bvars.iter().position(|v| v == var) else {
                    return Ok((*inner).clone());
                };
                let kb = bvars.len();
                let var_stride = pow(n, kb - 1 - pos);
                // parent vars are bvars without `var`, in the same order
                let st: Vec<(usize, usize)> = (0..kb)
                    .filter(|&j| j != pos)
                    .enumerate()
                    .map(|(pi, j)| (pi, pow(n, kb - 1 - j)))
                    .collect();
                let mut digits = vec![0usize; k];
                let mut out = Vec::with_capacity(pow(n, k));
                for _ in 0..pow(n, k) {
                    let base: usize = st.iter().map(|(p, w)| digits[*p] * w).sum();
                    let mut acc = inner[base].clone();
                    for e in 1..n {
                        let v = &inner[base + e * var_stride];
                        let better = match q {
                            Quantifier::Sup => *v > acc,
                            Quantifier::Inf => *v < acc,
                        };
                        if better {
                            acc = v.clone();
                        }
                    }
                    out.push(acc);
                    increment(&mut digits, n);
                }
                Ok(out)
            }
        }
    }
}

fn increment(digits: &mut [usize], n: usize) {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < n {
            return;
        }
        *d = 0;
    }
}

/// Truth value of `f` in `m` under `assignment`.
pub fn evaluate(
    m: &GeneralStructure,
    f: &Formula,
    assignment: &BTreeMap<String, Element>,
) -> Result<TruthValue, SemanticsError> {
    Evaluator::new(m).eval(f, assignment)
}

/// Like [`evaluate`] with the assignment given by element labels.
pub fn evaluate_labels(
    m: &GeneralStructure,
    f: &Formula,
    assignment: &BTreeMap<String, String>,
) -> Result<TruthValue, SemanticsError> {
    let resolved = assignment
        .iter()
        .map(|(v, l)| Ok((v.clone(), m.element_or_err(l)?)))
        .collect::<Result<BTreeMap<_, _>, SemanticsError>>()?;
    evaluate(m, f, &resolved)
}
