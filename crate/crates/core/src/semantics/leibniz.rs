use std::collections::HashMap;
use std::hash::Hash;

use serde::Serialize;

use super::{decode_index, Element, GeneralStructure};

/// A partition of a universe. Blocks are ordered by their least element and
/// each block is sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    blocks: Vec<Vec<Element>>,
    #[serde(skip)]
    block_of: Vec<usize>,
}

impl Partition {
    /// Groups elements `0..n` by key; block order follows first occurrence.
    pub fn from_keys<K: Hash + Eq>(keys: impl IntoIterator<Item = K>) -> Self {
        let mut ids: HashMap<K, usize> = HashMap::new();
        let mut blocks: Vec<Vec<Element>> = Vec::new();
        let mut block_of = Vec::new();
        for (e, key) in keys.into_iter().enumerate() {
            let next = blocks.len();
            let id = *ids.entry(key).or_insert(next);
            if id == next {
                blocks.push(Vec::new());
            }
            blocks[id].push(e);
            block_of.push(id);
        }
        Partition { blocks, block_of }
    }

    pub fn discrete(n: usize) -> Self {
        Self::from_keys(0..n)
    }

    pub fn blocks(&self) -> &[Vec<Element>] {
        &self.blocks
    }

    pub fn block_of(&self, e: Element) -> usize {
        self.block_of[e]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn same_block(&self, a: Element, b: Element) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.block_of.len()
    }

    /// Block labels for reports.
    pub fn labelled(&self, m: &GeneralStructure) -> Vec<Vec<String>> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|&e| m.label(e).to_string()).collect())
            .collect()
    }
}

/// Tuples of length `arity - 1` used as "other arguments" while one position varies.
fn with_slot(others: &[Element], pos: usize, e: Element) -> Vec<Element> {
    let mut t = Vec::with_capacity(others.len() + 1);
    t.extend_from_slice(&others[..pos]);
    t.push(e);
    t.extend_from_slice(&others[pos..]);
    t
}

/// Leibniz equality of a finite structure: the coarsest partition under which
/// every predicate is invariant and every function is compatible when one
/// argument at a time is replaced by an equivalent element. Computed as a
/// greatest fixpoint by signature refinement.
pub fn leibniz_partition(m: &GeneralStructure) -> Partition {
    let n = m.size();
    let vocab = m.vocab();

    // Predicate signatures do not depend on the current partition.
    let pred_sig: Vec<Vec<_>> = (0..n)
        .map(|a| {
            let mut sig = Vec::new();
            for (pi, p) in vocab.predicates().iter().enumerate() {
                for pos in 0..p.arity {
                    for i in 0..n.pow(p.arity as u32 - 1) {
                        let others = decode_index(i, n, p.arity - 1);
                        sig.push(m.predicate_value(pi, &with_slot(&others, pos, a)).clone());
                    }
                }
            }
            sig
        })
        .collect();
    let mut partition = Partition::from_keys(pred_sig.iter());

    if vocab.functions().is_empty() {
        return partition;
    }
    loop {
        let keys: Vec<Vec<usize>> = (0..n)
            .map(|a| {
                let mut sig = vec![partition.block_of(a)];
                for (fi, f) in vocab.functions().iter().enumerate() {
                    for pos in 0..f.arity {
                        for i in 0..n.pow(f.arity as u32 - 1) {
                            let others = decode_index(i, n, f.arity - 1);
                            let v = m.function_value(fi, &with_slot(&others, pos, a));
                            sig.push(partition.block_of(v));
                        }
                    }
                }
                sig
            })
            .collect();
        let refined = Partition::from_keys(keys);
        if refined.len() == partition.len() {
            return refined;
        }
        partition = refined;
    }
}

/// A reduced structure together with the reduction map.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub structure: GeneralStructure,
    /// `quotient[e]` is the element of `structure` that `e` maps to.
    pub quotient: Vec<Element>,
    pub partition: Partition,
}

/// Quotient of `m` by Leibniz equality. Each class is labelled by its least element.
pub fn reduce(m: &GeneralStructure) -> Reduction {
    let partition = leibniz_partition(m);
    let reps: Vec<Element> = partition.blocks().iter().map(|b| b[0]).collect();
    let quotient: Vec<Element> = (0..m.size()).map(|e| partition.block_of(e)).collect();
    let structure = GeneralStructure::build(
        m.vocab().clone(),
        reps.iter().map(|&r| m.label(r).to_string()).collect(),
        |p, t| {
            let orig: Vec<Element> = t.iter().map(|&b| reps[b]).collect();
            m.predicate_value(p, &orig).clone()
        },
        |f, t| {
            let orig: Vec<Element> = t.iter().map(|&b| reps[b]).collect();
            quotient[m.function_value(f, &orig)]
        },
        |c| quotient[m.constant(c)],
    )
    .expect("quotient of a valid structure is valid");
    Reduction {
        structure,
        quotient,
        partition,
    }
}
