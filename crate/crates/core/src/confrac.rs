//! Exact continued-fraction arithmetic: expansions, convergents, slope
//! normalization, and value brackets.
//!
//! All slopes are continued fractions of irrationals in (0,1), written
//! `[0; a_1, a_2, ...]` with every partial quotient >= 1. An expansion
//! without a period is a *truncation*: queries past the head fail with
//! `InsufficientCoefficients` instead of extrapolating, because a finite
//! expansion taken as an exact value would be a rational slope, whose
//! word is periodic and out of scope.

use std::fmt;
use std::str::FromStr;

use num::bigint::BigUint;
use num::rational::Ratio;
use num::{BigInt, One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in canonical reduced form, denominator > 0.
pub type ExactRational = Ratio<BigInt>;

/// Render a rational as `p/q` even when the denominator is 1.
pub fn format_rational(r: &ExactRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rational(numer: i64, denom: i64) -> ExactRational {
    ExactRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Continued fraction `[0; a_1, ..., a_m]` with an optional periodic tail.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CFExpansion {
    head: Vec<u64>,
    period: Option<Vec<u64>>,
}

impl CFExpansion {
    pub fn new(head: Vec<u64>, period: Option<Vec<u64>>) -> Result<Self> {
        if let Some(p) = &period {
            if p.is_empty() {
                return Err(Error::InvalidParameter("period must be non-empty".into()));
            }
        }
        let cf = CFExpansion { head, period };
        if cf.head.iter().chain(cf.period.iter().flatten()).any(|&a| a == 0) {
            return Err(Error::InvalidParameter("all coefficients must be >= 1".into()));
        }
        if cf.head.is_empty() && cf.period.is_none() {
            return Err(Error::InvalidParameter("expansion needs at least one coefficient".into()));
        }
        Ok(cf)
    }

    pub fn head(&self) -> &[u64] {
        &self.head
    }

    pub fn period(&self) -> Option<&[u64]> {
        self.period.as_deref()
    }

    /// Partial quotient a_k (1-based), or None past a period-less head.
    pub fn coefficient(&self, k: usize) -> Option<u64> {
        assert!(k >= 1, "coefficients are indexed from 1");
        if k <= self.head.len() {
            return Some(self.head[k - 1]);
        }
        self.period.as_ref().map(|p| p[(k - 1 - self.head.len()) % p.len()])
    }

    /// Like `coefficient` but with the contract error.
    pub fn coefficient_checked(&self, k: usize) -> Result<u64> {
        self.coefficient(k).ok_or(Error::InsufficientCoefficients {
            needed: k,
            available: self.head.len(),
        })
    }

    pub fn is_periodic(&self) -> bool {
        self.period.is_some()
    }

    /// Whether a_1 = 1, i.e. the slope lies in (1/2, 1).
    pub fn is_normalized(&self) -> bool {
        self.coefficient(1) == Some(1)
    }

    pub fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::SlopeNotNormalized)
        }
    }

    /// The expansion `[0; a_k, a_{k+1}, ...]` (1-based k).
    pub fn tail_from(&self, k: usize) -> Result<CFExpansion> {
        assert!(k >= 1);
        if k <= self.head.len() {
            return CFExpansion::new(self.head[k - 1..].to_vec(), self.period.clone());
        }
        match &self.period {
            Some(p) => {
                let off = (k - 1 - self.head.len()) % p.len();
                let mut rotated = p[off..].to_vec();
                rotated.extend_from_slice(&p[..off]);
                CFExpansion::new(Vec::new(), Some(rotated))
            }
            None => Err(Error::InsufficientCoefficients { needed: k, available: self.head.len() }),
        }
    }

    /// The expansion `[0; 1, b_1, b_2, ...]` where `self` = `[0; b_1, b_2, ...]`.
    pub fn with_leading_one(&self) -> CFExpansion {
        let mut head = Vec::with_capacity(self.head.len() + 1);
        head.push(1);
        head.extend_from_slice(&self.head);
        CFExpansion { head, period: self.period.clone() }
    }

    /// Splice `c` right after the leading 1: `[0;1,b_2,...]` -> `[0;1,c,b_2,...]`.
    /// This is the slope transform of the morphism A -> A^c B, B -> A.
    pub fn splice_after_one(&self, c: u64) -> Result<CFExpansion> {
        self.require_normalized()?;
        if c == 0 {
            return Err(Error::InvalidParameter("spliced coefficient must be >= 1".into()));
        }
        let tail = self.tail_from(2).unwrap_or(CFExpansion { head: vec![], period: None });
        let mut head = vec![1, c];
        head.extend_from_slice(&tail.head);
        CFExpansion::new(head, tail.period)
    }
}

impl fmt::Display for CFExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[0;")?;
        for (i, a) in self.head.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        if let Some(p) = &self.period {
            if !self.head.is_empty() {
                write!(f, ",")?;
            }
            write!(f, "(")?;
            for (i, a) in p.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "]")
    }
}

/// Text format: `[0;1,2,1,(3,1)]`. Whitespace is insignificant.
impl FromStr for CFExpansion {
    type Err = Error;

    fn from_str(s: &str) -> Result<CFExpansion> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |msg: &str| Error::ParseCf(format!("{msg} in {s:?}"));
        let inner = compact
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| err("expected enclosing brackets"))?;
        let rest = inner
            .strip_prefix("0;")
            .ok_or_else(|| err("expected integer part `0;`"))?;

        let (head_part, period_part) = match rest.find('(') {
            Some(i) => {
                let period = rest[i..]
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| err("malformed period"))?;
                (rest[..i].trim_end_matches(','), Some(period))
            }
            None => (rest, None),
        };

        let parse_list = |part: &str| -> Result<Vec<u64>> {
            if part.is_empty() {
                return Ok(Vec::new());
            }
            part.split(',')
                .map(|tok| {
                    tok.parse::<u64>()
                        .map_err(|_| err(&format!("bad coefficient {tok:?}")))
                        .and_then(|a| if a >= 1 { Ok(a) } else { Err(err("coefficient 0")) })
                })
                .collect()
        };

        let head = parse_list(head_part)?;
        let period = match period_part {
            Some(p) => {
                let list = parse_list(p)?;
                if list.is_empty() {
                    return Err(err("empty period"));
                }
                Some(list)
            }
            None => None,
        };
        CFExpansion::new(head, period)
    }
}

/// Convergents p_N/q_N of an expansion, stored for N = 0, 1, ..., with
/// p_0/q_0 = 0/1. The recurrence is q_N = a_N q_{N-1} + q_{N-2} with
/// q_{-1} = 0, q_0 = 1, and likewise p_{-1} = 1, p_0 = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergents {
    pairs: Vec<(BigUint, BigUint)>,
}

impl Convergents {
    /// Highest available index N.
    pub fn max_index(&self) -> usize {
        self.pairs.len() - 1
    }

    pub fn p(&self, n: usize) -> &BigUint {
        &self.pairs[n].0
    }

    pub fn q(&self, n: usize) -> &BigUint {
        &self.pairs[n].1
    }

    pub fn value(&self, n: usize) -> ExactRational {
        ExactRational::new(BigInt::from(self.p(n).clone()), BigInt::from(self.q(n).clone()))
    }

    pub fn q_usize(&self, n: usize) -> Result<usize> {
        usize::try_from(self.q(n)).map_err(|_| Error::NumericOverflow(format!("q_{n}")))
    }

    /// Pairs (p_1,q_1)...(p_N,q_N), the form the operations contract uses.
    pub fn pairs_from_one(&self) -> &[(BigUint, BigUint)] {
        &self.pairs[1..]
    }

    /// Largest N with q_N <= n. Because q_0 = q_1 = 1 for a normalized
    /// slope, ties resolve to the larger index, so q_N <= n < q_{N+1}.
    pub fn locate(&self, n: usize) -> Result<usize> {
        let n_big = BigUint::from(n);
        if self.pairs[0].1 > n_big {
            return Err(Error::InvalidParameter(format!("no convergent denominator <= {n}")));
        }
        let mut best = 0;
        for (i, (_, q)) in self.pairs.iter().enumerate() {
            if *q <= n_big {
                best = i;
            }
        }
        // locate is only meaningful when q_{best+1} > n is actually known
        if best == self.max_index() {
            return Err(Error::InsufficientCoefficients {
                needed: best + 1,
                available: self.max_index(),
            });
        }
        Ok(best)
    }
}

/// Convergents (p_1,q_1)...(p_N,q_N) of `cf`.
pub fn convergents(cf: &CFExpansion, n: usize) -> Result<Convergents> {
    if n == 0 {
        return Err(Error::InvalidParameter("need N >= 1".into()));
    }
    // fail before doing any work if the expansion is too short
    cf.coefficient_checked(n)?;

    let mut pairs = Vec::with_capacity(n + 1);
    let (mut p_prev, mut q_prev) = (BigUint::one(), BigUint::zero()); // (p_{-1}, q_{-1})
    let (mut p_cur, mut q_cur) = (BigUint::zero(), BigUint::one()); // (p_0, q_0)
    pairs.push((p_cur.clone(), q_cur.clone()));
    for k in 1..=n {
        let a = BigUint::from(cf.coefficient_checked(k)?);
        let p_next = &a * &p_cur + &p_prev;
        let q_next = &a * &q_cur + &q_prev;
        pairs.push((p_next.clone(), q_next.clone()));
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
    }
    Ok(Convergents { pairs })
}

/// q_N computed as the (1,1) entry of the product of coefficient matrices
/// M_c = [[c,1],[1,0]], i.e. (1,0) M_{a_1} ... M_{a_N} (1,0)^T. Passing
/// `reversed` multiplies the factors in the opposite order; both orders
/// must agree because each M_c is symmetric.
pub fn denominator_via_matrices(cf: &CFExpansion, n: usize, reversed: bool) -> Result<BigUint> {
    let mut m = [[BigUint::one(), BigUint::zero()], [BigUint::zero(), BigUint::one()]];
    let indices: Vec<usize> = if reversed { (1..=n).rev().collect() } else { (1..=n).collect() };
    for k in indices {
        let c = BigUint::from(cf.coefficient_checked(k)?);
        // m = m * [[c,1],[1,0]]
        let col0 = [&m[0][0] * &c + &m[0][1], &m[1][0] * &c + &m[1][1]];
        let col1 = [m[0][0].clone(), m[1][0].clone()];
        m = [[col0[0].clone(), col1[0].clone()], [col0[1].clone(), col1[1].clone()]];
    }
    Ok(m[0][0].clone())
}

/// Normalize a slope to a_1 = 1 using 1 - [0;a_1,a_2,...] = [0;1,a_1-1,a_2,...]
/// for a_1 >= 2. Returns the (possibly unchanged) expansion and whether the
/// letters of the coded word must be exchanged.
pub fn normalize_slope(cf: &CFExpansion) -> (CFExpansion, bool) {
    let a1 = cf.coefficient(1).expect("expansion has at least one coefficient");
    if a1 == 1 {
        return (cf.clone(), false);
    }
    let rest = cf.tail_from(2).unwrap_or_else(|_| CFExpansion { head: vec![], period: None });
    let mut head = vec![1, a1 - 1];
    head.extend_from_slice(&rest.head);
    let normalized = CFExpansion { head, period: rest.period };
    (normalized, true)
}

/// An exact bracket (lo, hi) around the value of `cf`, from two consecutive
/// convergents at depth >= `depth`. Consecutive convergents always straddle
/// the irrational value.
pub fn value_bracket(cf: &CFExpansion, depth: usize) -> Result<(ExactRational, ExactRational)> {
    let depth = depth.max(1);
    let conv = convergents(cf, depth + 1)?;
    let a = conv.value(depth);
    let b = conv.value(depth + 1);
    if a < b {
        Ok((a, b))
    } else {
        Ok((b, a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(s: &str) -> CFExpansion {
        s.parse().expect("literal continued fraction")
    }

    fn qs(c: &Convergents) -> Vec<u64> {
        c.pairs_from_one()
            .iter()
            .map(|(_, q)| u64::try_from(q).unwrap())
            .collect()
    }

    #[test]
    fn fibonacci_denominators() {
        let conv = convergents(&cf("[0;1,1,1,1,1]"), 5).unwrap();
        assert_eq!(qs(&conv), vec![1, 2, 3, 5, 8]);
    }

    #[test]
    fn hand_applied_recurrence() {
        // q_2 = 2*1+1, q_3 = 2*3+1
        let conv = convergents(&cf("[0;1,2,2]"), 3).unwrap();
        assert_eq!(qs(&conv), vec![1, 3, 7]);
    }

    #[test]
    fn insufficient_coefficients_without_period() {
        let err = convergents(&cf("[0;1,1]"), 5).unwrap_err();
        assert_eq!(err, Error::InsufficientCoefficients { needed: 5, available: 2 });
    }

    #[test]
    fn periodic_expansion_answers_any_depth() {
        let c = cf("[0;1,2,(3,1)]");
        assert_eq!(c.coefficient(1), Some(1));
        assert_eq!(c.coefficient(2), Some(2));
        assert_eq!(c.coefficient(3), Some(3));
        assert_eq!(c.coefficient(4), Some(1));
        assert_eq!(c.coefficient(5), Some(3));
        assert_eq!(c.coefficient(100), Some(1));
        assert!(convergents(&c, 40).is_ok());
    }

    #[test]
    fn parse_round_trip() {
        for s in ["[0;1,(1)]", "[0;1,2,(3,1)]", "[0;2,2,2]", "[0;(2)]"] {
            assert_eq!(cf(s).to_string(), s);
        }
        assert_eq!(cf("[ 0 ; 1 , 2 , ( 3 , 1 ) ]"), cf("[0;1,2,(3,1)]"));
        assert!("[1;2]".parse::<CFExpansion>().is_err());
        assert!("[0;1,0]".parse::<CFExpansion>().is_err());
        assert!("[0;]".parse::<CFExpansion>().is_err());
        assert!("[0;1,()]".parse::<CFExpansion>().is_err());
    }

    #[test]
    fn normalize_already_normalized() {
        let (n, swapped) = normalize_slope(&cf("[0;1,(1)]"));
        assert_eq!(n, cf("[0;1,(1)]"));
        assert!(!swapped);
    }

    #[test]
    fn normalize_splits_first_coefficient() {
        let (n, swapped) = normalize_slope(&cf("[0;2,(2)]"));
        assert_eq!(n, cf("[0;1,1,(2)]"));
        assert!(swapped);

        let (n, swapped) = normalize_slope(&cf("[0;3,1,4]"));
        assert_eq!(n, cf("[0;1,2,1,4]"));
        assert!(swapped);
    }

    #[test]
    fn normalize_matches_one_minus_value() {
        // 1 - value([0;2,(2)]) must lie inside the bracket of the normalized CF
        for s in ["[0;2,(2)]", "[0;3,1,(4)]", "[0;5,(1,2)]"] {
            let original = cf(s);
            let (normalized, swapped) = normalize_slope(&original);
            assert!(swapped);
            let (lo, hi) = value_bracket(&original, 12).unwrap();
            let (nlo, nhi) = value_bracket(&normalized, 12).unwrap();
            let one = ExactRational::one();
            // brackets of 1-x and of the normalized expansion must overlap
            assert!(&one - &hi < nhi && nlo < &one - &lo, "mismatch for {s}");
        }
    }

    #[test]
    fn normalize_is_idempotent() {
        for s in ["[0;1,(1)]", "[0;2,(2)]", "[0;7,3,(1,5)]"] {
            let (once, _) = normalize_slope(&cf(s));
            let (twice, swapped) = normalize_slope(&once);
            assert_eq!(once, twice);
            assert!(!swapped);
        }
    }

    #[test]
    fn locate_prefers_larger_index_on_ties() {
        // Fibonacci has q_0 = q_1 = 1; n = 1 must give N = 1.
        let conv = convergents(&cf("[0;1,(1)]"), 10).unwrap();
        assert_eq!(conv.locate(1).unwrap(), 1);
        assert_eq!(conv.locate(2).unwrap(), 2);
        assert_eq!(conv.locate(4).unwrap(), 3);
        assert_eq!(conv.locate(5).unwrap(), 4);
    }

    #[test]
    fn tail_and_splice() {
        let c = cf("[0;1,2,(3,1)]");
        assert_eq!(c.tail_from(2).unwrap(), cf("[0;2,(3,1)]"));
        assert_eq!(c.tail_from(3).unwrap(), cf("[0;(3,1)]"));
        assert_eq!(c.tail_from(4).unwrap(), cf("[0;(1,3)]"));
        assert_eq!(c.tail_from(6).unwrap(), cf("[0;(1,3)]"));
        assert_eq!(cf("[0;1,(1)]").splice_after_one(2).unwrap(), cf("[0;1,2,(1)]"));
        assert_eq!(cf("[0;1,2,(3)]").splice_after_one(1).unwrap(), cf("[0;1,1,2,(3)]"));
    }

    #[test]
    fn matrix_identity_both_orders() {
        for s in ["[0;1,(1)]", "[0;1,(2)]", "[0;1,2,(3,1)]", "[0;2,5,1,7]"] {
            let c = cf(s);
            let max_n = if c.is_periodic() { 12 } else { 4 };
            let conv = convergents(&c, max_n).unwrap();
            for n in 1..=max_n {
                let forward = denominator_via_matrices(&c, n, false).unwrap();
                let backward = denominator_via_matrices(&c, n, true).unwrap();
                assert_eq!(&forward, conv.q(n), "forward q_{n} for {s}");
                assert_eq!(&backward, conv.q(n), "reversed q_{n} for {s}");
            }
        }
    }

    #[test]
    fn convergents_alternate_around_the_value() {
        for s in ["[0;1,(1)]", "[0;1,(2)]", "[0;1,2,(3,1)]"] {
            let conv = convergents(&cf(s), 12).unwrap();
            for n in 1..=10 {
                let prev = conv.value(n - 1);
                let cur = conv.value(n);
                let next = conv.value(n + 1);
                assert!(
                    (prev < next && next < cur) || (cur < next && next < prev),
                    "p_{n}/q_{n} ordering for {s}"
                );
            }
        }
    }

    #[test]
    fn coprime_convergents() {
        use num::Integer;
        let conv = convergents(&cf("[0;1,2,(3,1)]"), 20).unwrap();
        for n in 1..=20 {
            assert!(conv.p(n).gcd(conv.q(n)).is_one());
        }
    }
}
