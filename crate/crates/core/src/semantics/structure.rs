use std::collections::HashMap;

use super::SemanticsError;
use crate::kernel::TruthValue;
use crate::syntax::Vocabulary;

/// Index of an element in a structure's universe.
pub type Element = usize;

/// Decodes a mixed-radix index into a `k`-tuple over `n` elements, first
/// coordinate most significant.
pub fn decode_index(mut idx: usize, n: usize, k: usize) -> Vec<Element> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    out
}

pub fn encode_tuple(tuple: &[Element], n: usize) -> usize {
    tuple.iter().fold(0, |acc, &e| acc * n + e)
}

/// All `k`-tuples over `0..n` in lexicographic order.
pub fn tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<Element>> {
    let total = n.pow(k as u32);
    (0..total).map(move |i| decode_index(i, n, k))
}

/// A finite structure with `[0,1]`-valued predicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralStructure {
    vocab: Vocabulary,
    universe: Vec<String>,
    labels: HashMap<String, Element>,
    predicates: Vec<Vec<TruthValue>>,
    functions: Vec<Vec<Element>>,
    constants: Vec<Element>,
}

impl GeneralStructure {
    /// Builds a structure by querying every table entry.
    pub fn build(
        vocab: Vocabulary,
        universe: Vec<String>,
        mut predicate: impl FnMut(usize, &[Element]) -> TruthValue,
        mut function: impl FnMut(usize, &[Element]) -> Element,
        mut constant: impl FnMut(usize) -> Element,
    ) -> Result<Self, SemanticsError> {
        let n = universe.len();
        let predicates = vocab
            .predicates()
            .iter()
            .enumerate()
            .map(|(i, p)| tuples(n, p.arity).map(|t| predicate(i, &t)).collect())
            .collect();
        let functions = vocab
            .functions()
            .iter()
            .enumerate()
            .map(|(i, f)| tuples(n, f.arity).map(|t| function(i, &t)).collect())
            .collect();
        let constants = (0..vocab.constants().len()).map(&mut constant).collect();
        Self::from_tables(vocab, universe, predicates, functions, constants)
    }

    /// Builds a structure from flat tables indexed by [`encode_tuple`].
    pub fn from_tables(
        vocab: Vocabulary,
        universe: Vec<String>,
        predicates: Vec<Vec<TruthValue>>,
        functions: Vec<Vec<Element>>,
        constants: Vec<Element>,
    ) -> Result<Self, SemanticsError> {
        if universe.is_empty() {
            return Err(SemanticsError::EmptyUniverse);
        }
        let mut labels = HashMap::new();
        for (i, l) in universe.iter().enumerate() {
            if labels.insert(l.clone(), i).is_some() {
                return Err(SemanticsError::DuplicateElement(l.clone()));
            }
        }
        let n = universe.len();
        if predicates.len() != vocab.predicates().len() {
            return Err(SemanticsError::VocabularyMismatch(
                "predicate table count differs from vocabulary".into(),
            ));
        }
        for (p, table) in vocab.predicates().iter().zip(&predicates) {
            if table.len() != n.pow(p.arity as u32) {
                return Err(SemanticsError::IncompleteTable(p.name.clone()));
            }
        }
        if functions.len() != vocab.functions().len() {
            return Err(SemanticsError::VocabularyMismatch(
                "function table count differs from vocabulary".into(),
            ));
        }
        for (f, table) in vocab.functions().iter().zip(&functions) {
            if table.len() != n.pow(f.arity as u32) {
                return Err(SemanticsError::IncompleteTable(f.name.clone()));
            }
            if table.iter().any(|&e| e >= n) {
                return Err(SemanticsError::ForeignElement(format!(
                    "value of {}",
                    f.name
                )));
            }
        }
        if constants.len() != vocab.constants().len() || constants.iter().any(|&e| e >= n) {
            return Err(SemanticsError::VocabularyMismatch(
                "constant assignments do not match the vocabulary".into(),
            ));
        }
        Ok(GeneralStructure {
            vocab,
            universe,
            labels,
            predicates,
            functions,
            constants,
        })
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn label(&self, e: Element) -> &str {
        &self.universe[e]
    }

    pub fn element(&self, label: &str) -> Option<Element> {
        self.labels.get(label).copied()
    }

    pub fn element_or_err(&self, label: &str) -> Result<Element, SemanticsError> {
        self.element(label)
            .ok_or_else(|| SemanticsError::ForeignElement(label.to_string()))
    }

    pub fn predicate_table(&self, pred: usize) -> &[TruthValue] {
        &self.predicates[pred]
    }

    pub fn predicate_value(&self, pred: usize, args: &[Element]) -> &TruthValue {
        &self.predicates[pred][encode_tuple(args, self.size())]
    }

    /// Looks up a predicate by name.
    pub fn predicate_named(
        &self,
        name: &str,
        args: &[Element],
    ) -> Result<&TruthValue, SemanticsError> {
        let i = self
            .vocab
            .predicate_index(name)
            .ok_or_else(|| SemanticsError::VocabularyMismatch(format!("no predicate `{name}`")))?;
        Ok(self.predicate_value(i, args))
    }

    pub fn function_table(&self, func: usize) -> &[Element] {
        &self.functions[func]
    }

    pub fn function_value(&self, func: usize, args: &[Element]) -> Element {
        self.functions[func][encode_tuple(args, self.size())]
    }

    pub fn constant(&self, c: usize) -> Element {
        self.constants[c]
    }

    pub fn constants(&self) -> &[Element] {
        &self.constants
    }

    /// True when every predicate value is 0 or 1.
    pub fn is_two_valued(&self) -> bool {
        self.predicates
            .iter()
            .flatten()
            .all(|v| v.is_zero() || v.is_one())
    }

    /// Adds a predicate with the given table, keeping all other symbols.
    pub fn with_predicate(
        &self,
        name: &str,
        arity: usize,
        table: Vec<TruthValue>,
    ) -> Result<Self, SemanticsError> {
        let mut vocab = self.vocab.clone();
        vocab.add_predicate(name, arity)?;
        let mut predicates = self.predicates.clone();
        predicates.push(table);
        Self::from_tables(
            vocab,
            self.universe.clone(),
            predicates,
            self.functions.clone(),
            self.constants.clone(),
        )
    }

    /// Same structure with relabelled elements.
    pub fn relabel(&self, universe: Vec<String>) -> Result<Self, SemanticsError> {
        if universe.len() != self.size() {
            return Err(SemanticsError::VocabularyMismatch(
                "relabel size differs".into(),
            ));
        }
        Self::from_tables(
            self.vocab.clone(),
            universe,
            self.predicates.clone(),
            self.functions.clone(),
            self.constants.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_codec_round_trips() {
        for (i, t) in tuples(3, 3).enumerate() {
            assert_eq!(encode_tuple(&t, 3), i);
        }
        assert_eq!(decode_index(5, 3, 2), vec![1, 2]);
    }

    #[test]
    fn rejects_bad_tables() {
        let v = Vocabulary::relational([("P", 1)]).unwrap();
        let empty = GeneralStructure::from_tables(v.clone(), vec![], vec![vec![]], vec![], vec![]);
        assert!(matches!(empty, Err(SemanticsError::EmptyUniverse)));
        let short = GeneralStructure::from_tables(
            v,
            vec!["a".into(), "b".into()],
            vec![vec![TruthValue::zero()]],
            vec![],
            vec![],
        );
        assert!(matches!(short, Err(SemanticsError::IncompleteTable(_))));
    }
}
