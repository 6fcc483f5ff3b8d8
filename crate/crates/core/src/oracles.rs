//! Test-only oracles, kept independent of the implementation paths they
//! check.

use num::BigInt;

use crate::confrac::{value_bracket, CFExpansion, ExactRational};
use crate::word::{FiniteWord, Letter};

/// Mechanical-word oracle for the characteristic word of a normalized
/// slope: u_n = A iff floor((n+2) alpha) - floor((n+1) alpha) = 1.
///
/// Floors are certified with exact convergent brackets: the bracket is
/// deepened until floor(k * lo) = floor(k * hi) for every multiplier the
/// prefix needs, which pins the floor of the irrational product.
pub(crate) fn mechanical_prefix(cf: &CFExpansion, len: usize) -> FiniteWord {
    assert!(cf.is_normalized(), "oracle expects a normalized slope");
    let mut depth = 8usize;
    'retry: loop {
        let (lo, hi) = value_bracket(cf, depth).expect("oracle needs more coefficients");
        let floor_of = |k: usize, r: &ExactRational| -> BigInt {
            (ExactRational::from(BigInt::from(k)) * r).floor().to_integer()
        };
        let certified_floor = |k: usize| -> Option<BigInt> {
            let a = floor_of(k, &lo);
            let b = floor_of(k, &hi);
            (a == b).then_some(a)
        };

        let mut letters = Vec::with_capacity(len);
        for n in 0..len {
            let (Some(f2), Some(f1)) = (certified_floor(n + 2), certified_floor(n + 1)) else {
                assert!(depth < 4096, "bracket never certified");
                depth *= 2;
                continue 'retry;
            };
            let step = f2 - f1;
            letters.push(if step == BigInt::from(1) { Letter::A } else { Letter::B });
        }
        return FiniteWord::new(letters);
    }
}
