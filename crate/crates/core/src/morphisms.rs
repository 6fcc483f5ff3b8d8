//! The Sturmian monoid: generators, composition, incidence matrices,
//! slope transformation, power lifting, and the construction of
//! maximal-index factors.

use std::fmt;
use std::str::FromStr;

use num::rational::Ratio;
use num::BigInt;

use crate::confrac::{convergents, CFExpansion, ExactRational};
use crate::error::{Error, Result};
use crate::word::{FiniteWord, Letter};

/// A morphism of the free monoid {A,B}*, determined by the images of A and B.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMorphism {
    image_a: FiniteWord,
    image_b: FiniteWord,
}

/// 2x2 incidence matrix, row-vector convention:
/// (|phi(w)|_A, |phi(w)|_B) = (|w|_A, |w|_B) * M.
/// Row 0 holds the letter counts of the image of A, row 1 of B.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IncidenceMatrix(pub [[u64; 2]; 2]);

impl IncidenceMatrix {
    pub fn mul(&self, rhs: &IncidenceMatrix) -> IncidenceMatrix {
        let a = &self.0;
        let b = &rhs.0;
        IncidenceMatrix([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    /// (row) * M for a row vector of letter counts.
    pub fn apply_row(&self, row: (u64, u64)) -> (u64, u64) {
        (
            row.0 * self.0[0][0] + row.1 * self.0[1][0],
            row.0 * self.0[0][1] + row.1 * self.0[1][1],
        )
    }
}

impl BinaryMorphism {
    pub fn new(image_a: FiniteWord, image_b: FiniteWord) -> Result<Self> {
        if image_a.is_empty() || image_b.is_empty() {
            return Err(Error::InvalidParameter("morphism images must be non-empty".into()));
        }
        Ok(BinaryMorphism { image_a, image_b })
    }

    pub fn identity() -> Self {
        BinaryMorphism {
            image_a: FiniteWord::from_letter(Letter::A),
            image_b: FiniteWord::from_letter(Letter::B),
        }
    }

    pub fn image(&self, letter: Letter) -> &FiniteWord {
        match letter {
            Letter::A => &self.image_a,
            Letter::B => &self.image_b,
        }
    }

    /// Apply letterwise: phi(w_1 w_2 ... ) = phi(w_1) phi(w_2) ...
    pub fn apply(&self, w: &FiniteWord) -> FiniteWord {
        let len: usize = w.letters().iter().map(|&l| self.image(l).len()).sum();
        let mut out = Vec::with_capacity(len);
        for &l in w.letters() {
            out.extend_from_slice(self.image(l).letters());
        }
        FiniteWord::new(out)
    }

    pub fn incidence_matrix(&self) -> IncidenceMatrix {
        let (aa, ab) = self.image_a.counts();
        let (ba, bb) = self.image_b.counts();
        IncidenceMatrix([[aa as u64, ab as u64], [ba as u64, bb as u64]])
    }

    pub fn min_image_len(&self) -> usize {
        self.image_a.len().min(self.image_b.len())
    }
}

impl fmt::Display for BinaryMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A->{}; B->{}", self.image_a, self.image_b)
    }
}

/// Text format: `A->AAB; B->A` (whitespace insignificant).
impl FromStr for BinaryMorphism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut image_a = None;
        let mut image_b = None;
        for part in compact.split(';') {
            if part.is_empty() {
                continue;
            }
            let (lhs, rhs) = part
                .split_once("->")
                .ok_or_else(|| Error::ParseMorphism(format!("missing `->` in {part:?}")))?;
            let image: FiniteWord = rhs.parse().map_err(|_| {
                Error::ParseMorphism(format!("bad image {rhs:?}"))
            })?;
            match lhs {
                "A" | "a" | "0" => image_a = Some(image),
                "B" | "b" | "1" => image_b = Some(image),
                other => return Err(Error::ParseMorphism(format!("unknown letter {other:?}"))),
            }
        }
        match (image_a, image_b) {
            (Some(a), Some(b)) => BinaryMorphism::new(a, b),
            _ => Err(Error::ParseMorphism(format!("need images for both A and B in {s:?}"))),
        }
    }
}

/// Composition `outer . inner` (apply `inner` first). The incidence matrix
/// of the composite is M_inner * M_outer under the row-vector convention.
pub fn compose(outer: &BinaryMorphism, inner: &BinaryMorphism) -> BinaryMorphism {
    BinaryMorphism {
        image_a: outer.apply(inner.image(Letter::A)),
        image_b: outer.apply(inner.image(Letter::B)),
    }
}

/// psi_1: A -> AB, B -> B.
pub fn psi1() -> BinaryMorphism {
    BinaryMorphism {
        image_a: FiniteWord::new(vec![Letter::A, Letter::B]),
        image_b: FiniteWord::from_letter(Letter::B),
    }
}

/// psi_2: A -> BA, B -> B.
pub fn psi2() -> BinaryMorphism {
    BinaryMorphism {
        image_a: FiniteWord::new(vec![Letter::B, Letter::A]),
        image_b: FiniteWord::from_letter(Letter::B),
    }
}

/// E: A -> B, B -> A (letter exchange).
pub fn exchange() -> BinaryMorphism {
    BinaryMorphism {
        image_a: FiniteWord::from_letter(Letter::B),
        image_b: FiniteWord::from_letter(Letter::A),
    }
}

/// The three generators (psi_1, psi_2, E) of the Sturmian monoid.
pub fn generators() -> (BinaryMorphism, BinaryMorphism, BinaryMorphism) {
    (psi1(), psi2(), exchange())
}

/// phi_c: A -> A^c B, B -> A, equal to E . psi_2^c.
pub fn phi(c: u64) -> Result<BinaryMorphism> {
    if c < 1 {
        return Err(Error::InvalidParameter("phi requires c >= 1".into()));
    }
    let c_usize = usize::try_from(c).map_err(|_| Error::NumericOverflow("phi exponent".into()))?;
    let mut image_a = FiniteWord::repeated(Letter::A, c_usize);
    image_a.push(Letter::B);
    let m = BinaryMorphism { image_a, image_b: FiniteWord::from_letter(Letter::A) };
    debug_assert!(c > 16 || m == phi_via_generators(c_usize));
    Ok(m)
}

fn phi_via_generators(c: usize) -> BinaryMorphism {
    let mut acc = BinaryMorphism::identity();
    for _ in 0..c {
        acc = compose(&psi2(), &acc);
    }
    compose(&exchange(), &acc)
}

/// Slope transform of phi_c: a Sturmian word of slope [0;1,b_2,...] maps to
/// one of slope [0;1,c,b_2,...].
pub fn slope_transform(cf: &CFExpansion, c: u64) -> Result<CFExpansion> {
    cf.splice_after_one(c)
}

/// Lift a power v = w^r (r >= 2) through phi_c: w' = phi_c(w),
/// v' = phi_c(v) A^c. The result is again a rational power of w', with
/// exponent |v'| / |w'|.
pub fn lift_power(
    w: &FiniteWord,
    v: &FiniteWord,
    c: u64,
) -> Result<(FiniteWord, FiniteWord, ExactRational)> {
    if w.is_empty() {
        return Err(Error::InvalidParameter("cannot lift the empty word".into()));
    }
    if !v.is_power_of(w) || v.len() < 2 * w.len() {
        return Err(Error::ExponentTooSmall);
    }
    let m = phi(c)?;
    let w_lifted = m.apply(w);
    let mut v_lifted = m.apply(v);
    for _ in 0..c {
        v_lifted.push(Letter::A);
    }
    if !v_lifted.is_power_of(&w_lifted) || v_lifted.len() < 2 * w_lifted.len() {
        return Err(Error::TheoremViolation(format!(
            "lifted word is not a power: w'={w_lifted} v'={v_lifted}"
        )));
    }
    let exponent = Ratio::new(BigInt::from(v_lifted.len()), BigInt::from(w_lifted.len()));
    Ok((w_lifted, v_lifted, exponent))
}

/// One step of the maximal-index construction.
#[derive(Debug, Clone)]
pub struct ConstructionStep {
    /// Step number i, 1-based.
    pub i: usize,
    /// The coefficient c_i = a_{N-i+1} driving phi at this step.
    pub c: u64,
    pub w: FiniteWord,
    pub v: FiniteWord,
    /// Slope of the word in which v is verified to occur after this step.
    pub slope: CFExpansion,
}

/// Result of the maximal-index factor construction for a given N.
#[derive(Debug, Clone)]
pub struct ConstructionTrace {
    pub n_param: usize,
    pub initial_slope: CFExpansion,
    pub steps: Vec<ConstructionStep>,
    pub w: FiniteWord,
    pub v: FiniteWord,
    /// |v| / |w|, the attained power exponent.
    pub exponent: ExactRational,
    /// The closed-form bound 2 + a_{N+1} + (q_{N-1} - 2)/q_N this
    /// construction attains.
    pub bound: ExactRational,
}

/// Build a factor w of the word of slope `cf` with |w| = q_N whose index
/// attains the closed-form bound, by iterated power lifting starting from
/// w = A, v = A^{1+a_{N+1}}. Every intermediate power is verified as a
/// factor of the intermediate slope's word, and the final power against
/// the target slope.
pub fn construct_max_index_factor(cf: &CFExpansion, n_param: usize) -> Result<ConstructionTrace> {
    if n_param < 1 {
        return Err(Error::InvalidParameter("construction requires N >= 1".into()));
    }
    cf.require_normalized()?;
    // needs a_2 .. a_{N+1}
    cf.coefficient_checked(n_param + 1)?;

    let conv = convergents(cf, n_param + 1)?;
    let a_next = cf.coefficient_checked(n_param + 1)?;

    let mut w = FiniteWord::from_letter(Letter::A);
    let mut v = FiniteWord::repeated(Letter::A, 1 + usize::try_from(a_next).unwrap());
    let mut steps = Vec::new();

    // slope for step i is [0;1, a_{N+1-i}, a_{N+2-i}, ...]; i = 0 is the
    // starting word, i = N-1 the target slope.
    let slope_at = |i: usize| -> Result<CFExpansion> {
        Ok(cf.tail_from(n_param + 1 - i)?.with_leading_one())
    };

    verify_power_in_slope(&w, &v, &slope_at(0)?)?;
    for i in 1..n_param {
        let c = cf.coefficient_checked(n_param - i + 1)?;
        let (w_next, v_next, _) = lift_power(&w, &v, c)?;
        w = w_next;
        v = v_next;
        let slope = slope_at(i)?;
        verify_power_in_slope(&w, &v, &slope)?;
        steps.push(ConstructionStep { i, c, w: w.clone(), v: v.clone(), slope });
    }

    // exact length identities: |w| = q_N, |v| = (2 + a_{N+1}) q_N + q_{N-1} - 2
    let q_n = conv.q_usize(n_param)?;
    let q_prev = conv.q_usize(n_param - 1)?;
    let expected_v_len = (2 + a_next as usize) * q_n + q_prev - 2;
    if w.len() != q_n || v.len() != expected_v_len {
        return Err(Error::TheoremViolation(format!(
            "construction lengths |w|={} |v|={} differ from q_N={q_n}, (2+a)q_N+q_(N-1)-2={expected_v_len}",
            w.len(),
            v.len()
        )));
    }

    let exponent = Ratio::new(BigInt::from(v.len()), BigInt::from(w.len()));
    let bound = crate::powers::index_upper_bound(cf, n_param)?;
    if exponent != bound {
        return Err(Error::TheoremViolation(format!(
            "constructed exponent {exponent} differs from bound {bound}"
        )));
    }

    Ok(ConstructionTrace {
        n_param,
        initial_slope: slope_at(0)?,
        steps,
        w,
        v,
        exponent,
        bound,
    })
}

/// Check that v = w^r occurs in the characteristic word of `slope`, using
/// a prefix certified deep enough to decide membership at length |v|.
fn verify_power_in_slope(w: &FiniteWord, v: &FiniteWord, slope: &CFExpansion) -> Result<()> {
    if !v.is_power_of(w) {
        return Err(Error::TheoremViolation(format!("{v} is not a power of {w}")));
    }
    let view = crate::wordgen::LanguageView::sturmian_factors_only(slope, v.len())?;
    if !view.prefix().contains(v) {
        return Err(Error::TheoremViolation(format!(
            "power {v} does not occur in the word of slope {slope}"
        )));
    }
    Ok(())
}
