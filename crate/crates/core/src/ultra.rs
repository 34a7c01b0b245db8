//! Ultraproducts over finite index sets.
//!
//! Over a finite index set every ultrafilter is principal, so a limit along
//! `D` just reads off one coordinate. The construction still goes through the
//! general route (cartesian product, limits, then reduction) so that the
//! quotient map can be audited.

use serde::Serialize;
use thiserror::Error;

use crate::kernel::TruthValue;
use crate::semantics::{
    encode_tuple, reduce, tuples, Element, Evaluator, GeneralStructure, Reduction, SemanticsError,
};
use crate::syntax::Formula;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UltraError {
    #[error("empty index set")]
    EmptyIndexSet,
    #[error("index {index} is outside an index set of size {size}")]
    BadIndex { index: usize, size: usize },
    #[error("limit needs {expected} coordinates, got {got}")]
    Partial { expected: usize, got: usize },
    #[error("factor {0} has a different vocabulary")]
    VocabularyMismatch(usize),
    #[error("quotient map does not fit the pre-ultraproduct")]
    BadQuotient,
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// An ultrafilter on `{0, ..., size - 1}`, principal at `principal_at`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Ultrafilter {
    size: usize,
    principal_at: usize,
}

impl Ultrafilter {
    pub fn principal(size: usize, at: usize) -> Result<Self, UltraError> {
        if size == 0 {
            return Err(UltraError::EmptyIndexSet);
        }
        if at >= size {
            return Err(UltraError::BadIndex { index: at, size });
        }
        Ok(Ultrafilter {
            size,
            principal_at: at,
        })
    }

    /// Every ultrafilter on a finite set; there is one per index.
    pub fn enumerate_all(size: usize) -> Vec<Self> {
        (0..size)
            .map(|at| Ultrafilter {
                size,
                principal_at: at,
            })
            .collect()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn principal_at(&self) -> usize {
        self.principal_at
    }

    /// `S` is large iff it contains the principal point.
    pub fn contains(&self, set: &[usize]) -> bool {
        set.contains(&self.principal_at)
    }

    /// The `D`-limit of `g : I -> [0,1]`.
    pub fn ulim(&self, g: &[TruthValue]) -> Result<TruthValue, UltraError> {
        if g.len() != self.size {
            return Err(UltraError::Partial {
                expected: self.size,
                got: g.len(),
            });
        }
        Ok(g[self.principal_at].clone())
    }
}

fn check_family(family: &[GeneralStructure], d: &Ultrafilter) -> Result<(), UltraError> {
    if family.is_empty() {
        return Err(UltraError::EmptyIndexSet);
    }
    if family.len() != d.size {
        return Err(UltraError::Partial {
            expected: d.size,
            got: family.len(),
        });
    }
    for (i, m) in family.iter().enumerate().skip(1) {
        if m.vocab() != family[0].vocab() {
            return Err(UltraError::VocabularyMismatch(i));
        }
    }
    Ok(())
}

/// Coordinates of a product element; the first factor is most significant.
pub fn coordinates(mut idx: Element, sizes: &[usize]) -> Vec<Element> {
    let mut out = vec![0; sizes.len()];
    for (slot, &s) in out.iter_mut().zip(sizes).rev() {
        *slot = idx % s;
        idx /= s;
    }
    out
}

pub fn product_index(coords: &[Element], sizes: &[usize]) -> Element {
    coords
        .iter()
        .zip(sizes)
        .fold(0, |acc, (&c, &s)| acc * s + c)
}

/// The cartesian product with coordinatewise functions and constants and
/// predicates given by `D`-limits. Elements are labelled `⟨a,b,...⟩`.
pub fn pre_ultraproduct(
    family: &[GeneralStructure],
    d: &Ultrafilter,
) -> Result<GeneralStructure, UltraError> {
    check_family(family, d)?;
    let sizes: Vec<usize> = family.iter().map(GeneralStructure::size).collect();
    let total: usize = sizes.iter().product();
    let universe = (0..total)
        .map(|e| {
            let parts: Vec<&str> = coordinates(e, &sizes)
                .iter()
                .zip(family)
                .map(|(&c, m)| m.label(c))
                .collect();
            format!("⟨{}⟩", parts.join(","))
        })
        .collect();
    let project = |t: &[Element], i: usize| -> Vec<Element> {
        t.iter().map(|&e| coordinates(e, &sizes)[i]).collect()
    };
    let m = GeneralStructure::build(
        family[0].vocab().clone(),
        universe,
        |p, t| {
            let g: Vec<TruthValue> = family
                .iter()
                .enumerate()
                .map(|(i, m)| m.predicate_value(p, &project(t, i)).clone())
                .collect();
            d.ulim(&g).expect("one coordinate per factor")
        },
        |f, t| {
            let coords: Vec<Element> = family
                .iter()
                .enumerate()
                .map(|(i, m)| m.function_value(f, &project(t, i)))
                .collect();
            product_index(&coords, &sizes)
        },
        |c| {
            let coords: Vec<Element> = family.iter().map(|m| m.constant(c)).collect();
            product_index(&coords, &sizes)
        },
    )?;
    Ok(m)
}

/// The pre-ultraproduct together with its reduction.
#[derive(Clone, Debug)]
pub struct Ultraproduct {
    pub pre: GeneralStructure,
    pub reduction: Reduction,
}

impl Ultraproduct {
    pub fn structure(&self) -> &GeneralStructure {
        &self.reduction.structure
    }

    pub fn quotient(&self) -> &[Element] {
        &self.reduction.quotient
    }
}

pub fn ultraproduct(
    family: &[GeneralStructure],
    d: &Ultrafilter,
) -> Result<Ultraproduct, UltraError> {
    let pre = pre_ultraproduct(family, d)?;
    let reduction = reduce(&pre);
    Ok(Ultraproduct { pre, reduction })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LosViolation {
    pub formula: String,
    /// Labels of pre-ultraproduct elements assigned to the free variables.
    pub assignment: Vec<(String, String)>,
    pub product_value: TruthValue,
    pub limit_value: TruthValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LosReport {
    pub formulas_checked: usize,
    pub tuples_checked: usize,
    pub passed: bool,
    pub first_violation: Option<LosViolation>,
}

/// Checks `phi^{prod_D M_i}(b_D) = lim_D phi^{M_i}(b_i)` for every formula and
/// every tuple of the cartesian product.
pub fn check_los(
    family: &[GeneralStructure],
    d: &Ultrafilter,
    formulas: &[Formula],
) -> Result<LosReport, UltraError> {
    let up = ultraproduct(family, d)?;
    check_los_against(family, d, formulas, up.structure(), up.quotient())
}

/// Like [`check_los`] but against a caller-supplied ultraproduct and quotient
/// map, so that faulty constructions can be exercised.
pub fn check_los_against(
    family: &[GeneralStructure],
    d: &Ultrafilter,
    formulas: &[Formula],
    product: &GeneralStructure,
    quotient: &[Element],
) -> Result<LosReport, UltraError> {
    check_family(family, d)?;
    if product.vocab() != family[0].vocab() {
        return Err(UltraError::VocabularyMismatch(family.len()));
    }
    let sizes: Vec<usize> = family.iter().map(GeneralStructure::size).collect();
    let total: usize = sizes.iter().product();
    if quotient.len() != total || quotient.iter().any(|&q| q >= product.size()) {
        return Err(UltraError::BadQuotient);
    }
    let mut factor_evals: Vec<Evaluator> = family.iter().map(Evaluator::new).collect();
    let mut product_eval = Evaluator::new(product);
    let mut tuples_checked = 0;
    for f in formulas {
        let vars = f.free_vars();
        let lhs = product_eval.table(f)?;
        let rhs = factor_evals
            .iter_mut()
            .map(|e| e.table(f))
            .collect::<Result<Vec<_>, _>>()?;
        for b in tuples(total, vars.len()) {
            tuples_checked += 1;
            let reduced: Vec<Element> = b.iter().map(|&e| quotient[e]).collect();
            let left = &lhs[encode_tuple(&reduced, product.size())];
            let coords: Vec<Vec<Element>> = b.iter().map(|&e| coordinates(e, &sizes)).collect();
            let g: Vec<TruthValue> = rhs
                .iter()
                .enumerate()
                .map(|(i, table)| {
                    let bi: Vec<Element> = coords.iter().map(|c| c[i]).collect();
                    table[encode_tuple(&bi, sizes[i])].clone()
                })
                .collect();
            let right = d.ulim(&g)?;
            if *left != right {
                let pre_label = |e: Element| {
                    let parts: Vec<&str> = coordinates(e, &sizes)
                        .iter()
                        .zip(family)
                        .map(|(&c, m)| m.label(c))
                        .collect();
                    format!("⟨{}⟩", parts.join(","))
                };
                return Ok(LosReport {
                    formulas_checked: formulas.len(),
                    tuples_checked,
                    passed: false,
                    first_violation: Some(LosViolation {
                        formula: f.canonical().to_string(),
                        assignment: vars
                            .iter()
                            .cloned()
                            .zip(b.iter().map(|&e| pre_label(e)))
                            .collect(),
                        product_value: left.clone(),
                        limit_value: right,
                    }),
                });
            }
        }
    }
    Ok(LosReport {
        formulas_checked: formulas.len(),
        tuples_checked,
        passed: true,
        first_violation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Vocabulary;

    fn tv(p: i64, q: i64) -> TruthValue {
        TruthValue::from_ratio(p, q).unwrap()
    }

    fn unary(values: &[(i64, i64)]) -> GeneralStructure {
        let v = Vocabulary::relational([("P", 1)]).unwrap();
        let labels = (0..values.len()).map(|i| format!("a{}", i + 1)).collect();
        GeneralStructure::build(
            v,
            labels,
            |_, t| tv(values[t[0]].0, values[t[0]].1),
            |_, _| 0,
            |_| 0,
        )
        .unwrap()
    }

    #[test]
    fn limits() {
        let d = Ultrafilter::principal(3, 1).unwrap();
        assert_eq!(d.ulim(&[tv(0, 1), tv(1, 2), tv(1, 1)]).unwrap(), tv(1, 2));
        let d = Ultrafilter::principal(2, 0).unwrap();
        assert_eq!(d.ulim(&[tv(1, 1), tv(0, 1)]).unwrap(), tv(1, 1));
        assert!(d.ulim(&[tv(1, 1)]).is_err());
        assert_eq!(Ultrafilter::enumerate_all(3).len(), 3);
        assert!(Ultrafilter::principal(0, 0).is_err());
    }

    #[test]
    fn principal_product_reads_the_first_factor() {
        let m1 = unary(&[(1, 4), (3, 4)]);
        let m2 = unary(&[(0, 1), (1, 2), (1, 1)]);
        let d = Ultrafilter::principal(2, 0).unwrap();
        let pre = pre_ultraproduct(&[m1.clone(), m2], &d).unwrap();
        assert_eq!(pre.size(), 6);
        assert_eq!(pre.label(4), "⟨a2,a2⟩");
        for e in 0..6 {
            assert_eq!(
                pre.predicate_value(0, &[e]),
                m1.predicate_value(0, &[e / 3])
            );
        }
    }

    #[test]
    fn corrupted_quotient_is_caught() {
        let m1 = unary(&[(1, 4), (3, 4)]);
        let d = Ultrafilter::principal(2, 1).unwrap();
        let family = [m1.clone(), m1];
        let up = ultraproduct(&family, &d).unwrap();
        let mut q = up.quotient().to_vec();
        q.swap(0, 1);
        let f = Formula::atom_vars("P", &["x"]);
        let report = check_los_against(&family, &d, &[f.clone()], up.structure(), &q).unwrap();
        assert!(!report.passed);
        assert!(report.first_violation.is_some());
        assert!(check_los(&family, &d, &[f]).unwrap().passed);
    }
}
