//! Exact truth values in `[0,1]` and the fixed connective basis.
//!
//! Truth values are rationals with 0 read as "true". Small values are kept in
//! an `i64` ratio and promoted to arbitrary precision only when an operation
//! would overflow, so the representation is canonical: a value that fits in
//! `Ratio<i64>` is always stored that way.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedSub, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational used for coefficients that may leave `[0,1]`.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("connective `{connective}` expects {expected} argument(s), got {got}")]
    ArityMismatch {
        connective: String,
        expected: usize,
        got: usize,
    },
    #[error("value {0} is outside [0,1]")]
    OutOfRange(String),
    #[error("`{0}` is not a rational literal")]
    BadLiteral(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Small(Ratio<i64>),
    Big(Arc<BigRational>),
}

/// An exact rational in `[0,1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruthValue(Repr);

impl TruthValue {
    pub fn zero() -> Self {
        TruthValue(Repr::Small(Ratio::from_integer(0)))
    }

    pub fn one() -> Self {
        TruthValue(Repr::Small(Ratio::from_integer(1)))
    }

    pub fn half_value() -> Self {
        TruthValue(Repr::Small(Ratio::new_raw(1, 2)))
    }

    /// Builds `numer/denom`, rejecting values outside `[0,1]` and zero denominators.
    pub fn from_ratio(numer: i64, denom: i64) -> Result<Self, KernelError> {
        if denom == 0 {
            return Err(KernelError::BadLiteral(format!("{numer}/{denom}")));
        }
        Self::new(BigRational::new(numer.into(), denom.into()))
    }

    pub fn new(value: Rational) -> Result<Self, KernelError> {
        if value.is_negative() || value > BigRational::one() {
            return Err(KernelError::OutOfRange(format_rational(&value)));
        }
        Ok(Self::from_big_unchecked(value))
    }

    /// `j / 2^g`, the `j`-th point of the dyadic grid of resolution `g`.
    pub fn dyadic(j: u64, g: u32) -> Result<Self, KernelError> {
        let denom = BigInt::from(1u8) << g;
        Self::new(BigRational::new(BigInt::from(j), denom))
    }

    fn from_big_unchecked(value: BigRational) -> Self {
        match (value.numer().to_i64(), value.denom().to_i64()) {
            (Some(n), Some(d)) => TruthValue(Repr::Small(Ratio::new_raw(n, d))),
            _ => TruthValue(Repr::Big(Arc::new(value))),
        }
    }

    fn from_small(value: Ratio<i64>) -> Self {
        TruthValue(Repr::Small(value))
    }

    pub fn to_rational(&self) -> Rational {
        match &self.0 {
            Repr::Small(r) => BigRational::new_raw((*r.numer()).into(), (*r.denom()).into()),
            Repr::Big(r) => (**r).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Small(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.0, Repr::Small(r) if r.is_one())
    }

    /// `1 - self`.
    pub fn neg(&self) -> Self {
        match &self.0 {
            Repr::Small(r) => Self::from_small(Ratio::new_raw(r.denom() - r.numer(), *r.denom())),
            Repr::Big(r) => Self::from_big_unchecked(BigRational::one() - &**r),
        }
    }

    /// `max(self - other, 0)`.
    pub fn dotminus(&self, other: &Self) -> Self {
        if self <= other {
            return Self::zero();
        }
        self.sub_nonneg(other)
    }

    /// `min(self + other, 1)`.
    pub fn dotplus(&self, other: &Self) -> Self {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &other.0) {
            if let Some(s) = a.checked_add(b) {
                return if s > Ratio::from_integer(1) {
                    Self::one()
                } else {
                    Self::from_small(s)
                };
            }
        }
        let s = self.to_rational() + other.to_rational();
        if s > BigRational::one() {
            Self::one()
        } else {
            Self::from_big_unchecked(s)
        }
    }

    /// `|self - other|`.
    pub fn absdiff(&self, other: &Self) -> Self {
        if self >= other {
            self.sub_nonneg(other)
        } else {
            other.sub_nonneg(self)
        }
    }

    /// `self / 2`.
    pub fn half(&self) -> Self {
        if let Repr::Small(r) = &self.0 {
            let (n, d) = (*r.numer(), *r.denom());
            if n % 2 == 0 {
                return Self::from_small(Ratio::new_raw(n / 2, d));
            }
            if let Some(d2) = d.checked_mul(2) {
                return Self::from_small(Ratio::new_raw(n, d2));
            }
        }
        Self::from_big_unchecked(self.to_rational() / BigRational::from_integer(2.into()))
    }

    // Caller guarantees self >= other.
    fn sub_nonneg(&self, other: &Self) -> Self {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &other.0) {
            if let Some(s) = a.checked_sub(b) {
                return Self::from_small(s);
            }
        }
        Self::from_big_unchecked(self.to_rational() - other.to_rational())
    }

    pub fn min_of(&self, other: &Self) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn max_of(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }
}

impl PartialOrd for TruthValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TruthValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.to_rational().cmp(&other.to_rational()),
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Small(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Repr::Big(r) => f.write_str(&format_rational(r)),
        }
    }
}

impl FromStr for TruthValue {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TruthValue::new(parse_rational(s)?)
    }
}

impl serde::Serialize for TruthValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl From<&TruthValue> for Rational {
    fn from(v: &TruthValue) -> Self {
        v.to_rational()
    }
}

/// Formats a rational as `p/q` in lowest terms, or as an integer when `q = 1`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q` or an integer literal. Signs are accepted on the numerator only.
pub fn parse_rational(s: &str) -> Result<Rational, KernelError> {
    let bad = || KernelError::BadLiteral(s.to_string());
    let digits = |t: &str, signed: bool| {
        let body = if signed {
            t.strip_prefix('-').unwrap_or(t)
        } else {
            t
        };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    match s.split_once('/') {
        Some((p, q)) => {
            if !digits(p, true) || !digits(q, false) {
                return Err(bad());
            }
            let p: BigInt = p.parse().map_err(|_| bad())?;
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => {
            if !digits(s, true) {
                return Err(bad());
            }
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(p))
        }
    }
}

/// The connective basis. `Const` is the nullary connective for a rational constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Connective {
    Const(TruthValue),
    Neg,
    DotMinus,
    DotPlus,
    Min,
    Max,
    Half,
    AbsDiff,
}

impl Connective {
    pub fn arity(&self) -> usize {
        match self {
            Connective::Const(_) => 0,
            Connective::Neg | Connective::Half => 1,
            Connective::DotMinus
            | Connective::DotPlus
            | Connective::Min
            | Connective::Max
            | Connective::AbsDiff => 2,
        }
    }

    /// Surface keyword; constants render as their literal.
    pub fn name(&self) -> String {
        match self {
            Connective::Const(r) => r.to_string(),
            other => other.keyword().unwrap().to_string(),
        }
    }

    pub fn keyword(&self) -> Option<&'static str> {
        Some(match self {
            Connective::Const(_) => return None,
            Connective::Neg => "neg",
            Connective::DotMinus => "dotminus",
            Connective::DotPlus => "dotplus",
            Connective::Min => "min",
            Connective::Max => "max",
            Connective::Half => "half",
            Connective::AbsDiff => "absdiff",
        })
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Some(match word {
            "neg" => Connective::Neg,
            "dotminus" => Connective::DotMinus,
            "dotplus" => Connective::DotPlus,
            "min" => Connective::Min,
            "max" => Connective::Max,
            "half" => Connective::Half,
            "absdiff" => Connective::AbsDiff,
            _ => return None,
        })
    }

    /// Every non-constant connective in canonical order.
    pub fn operators() -> [Connective; 7] {
        [
            Connective::Neg,
            Connective::Half,
            Connective::DotMinus,
            Connective::DotPlus,
            Connective::Min,
            Connective::Max,
            Connective::AbsDiff,
        ]
    }

    /// Per-argument Lipschitz constant under the sup metric on arguments.
    pub fn lipschitz_constant(&self) -> Rational {
        match self {
            Connective::Const(_) => Rational::zero(),
            Connective::Half => Rational::new(1.into(), 2.into()),
            _ => Rational::one(),
        }
    }

    pub fn apply(&self, args: &[TruthValue]) -> Result<TruthValue, KernelError> {
        if args.len() != self.arity() {
            return Err(KernelError::ArityMismatch {
                connective: self.name(),
                expected: self.arity(),
                got: args.len(),
            });
        }
        Ok(self.apply_unchecked(args))
    }

    /// Applies without the arity check; panics on a short slice.
    pub(crate) fn apply_unchecked(&self, args: &[TruthValue]) -> TruthValue {
        match self {
            Connective::Const(r) => r.clone(),
            Connective::Neg => args[0].neg(),
            Connective::Half => args[0].half(),
            Connective::DotMinus => args[0].dotminus(&args[1]),
            Connective::DotPlus => args[0].dotplus(&args[1]),
            Connective::Min => args[0].min_of(&args[1]),
            Connective::Max => args[0].max_of(&args[1]),
            Connective::AbsDiff => args[0].absdiff(&args[1]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(s: &str) -> TruthValue {
        s.parse().unwrap()
    }

    #[test]
    fn basic_connectives() {
        assert_eq!(
            Connective::DotMinus.apply(&[tv("3/4"), tv("1/4")]).unwrap(),
            tv("1/2")
        );
        assert_eq!(
            Connective::DotPlus.apply(&[tv("3/4"), tv("1/2")]).unwrap(),
            tv("1")
        );
        assert_eq!(Connective::Neg.apply(&[tv("0")]).unwrap(), tv("1"));
        assert_eq!(Connective::Half.apply(&[tv("3/4")]).unwrap(), tv("3/8"));
        assert_eq!(
            Connective::AbsDiff.apply(&[tv("1/3"), tv("5/6")]).unwrap(),
            tv("1/2")
        );
    }

    #[test]
    fn arity_mismatch_names_connective() {
        let err = Connective::Min.apply(&[tv("0")]).unwrap_err();
        assert_eq!(
            err,
            KernelError::ArityMismatch {
                connective: "min".into(),
                expected: 2,
                got: 1
            }
        );
        assert!(err.to_string().contains("min"));
    }

    #[test]
    fn lipschitz_constants() {
        assert_eq!(Connective::Min.lipschitz_constant(), Rational::one());
        assert_eq!(
            Connective::Half.lipschitz_constant(),
            Rational::new(1.into(), 2.into())
        );
        assert_eq!(
            Connective::Const(tv("1/3")).lipschitz_constant(),
            Rational::zero()
        );
    }

    #[test]
    fn range_is_enforced() {
        assert!(TruthValue::from_ratio(5, 4).is_err());
        assert!(TruthValue::from_ratio(-1, 4).is_err());
        assert!("5/4".parse::<TruthValue>().is_err());
        assert!("1/0".parse::<TruthValue>().is_err());
        assert!("x".parse::<TruthValue>().is_err());
        assert!("1/-2".parse::<TruthValue>().is_err());
    }

    #[test]
    fn display_is_reduced() {
        assert_eq!(tv("2/4").to_string(), "1/2");
        assert_eq!(tv("4/4").to_string(), "1");
        assert_eq!(tv("0/7").to_string(), "0");
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let mut v = TruthValue::one();
        for _ in 0..100 {
            v = v.half();
        }
        assert!(matches!(v.0, Repr::Big(_)));
        let mut w = v.clone();
        for _ in 0..100 {
            w = w.dotplus(&w);
        }
        assert_eq!(w, TruthValue::one());
        let sum = v.dotplus(&v);
        assert_eq!(
            sum.to_rational(),
            v.to_rational() * BigRational::from_integer(2.into())
        );
        // tiny - tiny collapses back to the small representation
        assert_eq!(v.absdiff(&v), TruthValue::zero());
        assert!(matches!(v.absdiff(&v).0, Repr::Small(_)));
    }

    /// Dyadic grid of denominator 8.
    fn grid() -> Vec<TruthValue> {
        (0..=8)
            .map(|j| TruthValue::from_ratio(j, 8).unwrap())
            .collect()
    }

    #[test]
    fn binary_connectives_are_not_one_lipschitz_under_the_sup_metric() {
        let (u, v) = ([tv("1/8"), tv("1/8")], [tv("1/4"), tv("0")]);
        let lhs = Connective::DotMinus
            .apply(&u)
            .unwrap()
            .absdiff(&Connective::DotMinus.apply(&v).unwrap());
        assert_eq!(lhs, tv("1/4"));
        assert_eq!(u[0].absdiff(&v[0]).max(u[1].absdiff(&v[1])), tv("1/8"));
    }

    #[test]
    fn lipschitz_bound_holds_on_grid() {
        let g = grid();
        let mut conns: Vec<Connective> = Connective::operators().to_vec();
        conns.push(Connective::Const(tv("1/3")));
        for c in conns {
            let lip = c.lipschitz_constant();
            let tuples: Vec<Vec<TruthValue>> = match c.arity() {
                0 => vec![vec![]],
                1 => g.iter().map(|a| vec![a.clone()]).collect(),
                _ => g
                    .iter()
                    .flat_map(|a| g.iter().map(move |b| vec![a.clone(), b.clone()]))
                    .collect(),
            };
            for u in &tuples {
                for v in &tuples {
                    let lhs = c
                        .apply(u)
                        .unwrap()
                        .absdiff(&c.apply(v).unwrap())
                        .to_rational();
                    // per-argument constants add up across arguments
                    let gap: Rational = u
                        .iter()
                        .zip(v)
                        .map(|(a, b)| a.absdiff(b).to_rational())
                        .sum();
                    assert!(lhs <= &lip * gap, "{} on {:?} {:?}", c.name(), u, v);
                }
            }
        }
    }
}
