//! Diophantine tuples over F_q: sets of distinct nonzero elements whose pairwise
//! products plus one are all squares (zero included).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement};

/// Name of the pseudo-random source behind every seeded sampler in this crate.
pub const RNG_NAME: &str = "chacha8";

/// A Diophantine tuple: strictly increasing nonzero element codes.
///
/// Values of this type are only produced by verification, extension by elements
/// of an extension set, or constructions that re-verify their output, so the
/// pair property always holds for the field they were built in.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct DiophantineTuple {
    elements: Vec<FieldElement>,
}

impl DiophantineTuple {
    /// The empty tuple; every nonzero element extends it.
    pub fn empty() -> Self {
        Self::default()
    }

    pub(crate) fn from_sorted(elements: Vec<FieldElement>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        DiophantineTuple { elements }
    }

    pub fn elements(&self) -> &[FieldElement] {
        &self.elements
    }

    pub fn codes(&self) -> Vec<u64> {
        self.elements.iter().map(|e| e.code()).collect()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    fn insert(&mut self, x: FieldElement) {
        if let Err(pos) = self.elements.binary_search(&x) {
            self.elements.insert(pos, x);
        }
    }
}

/// A square root of `a_i a_j + 1` for the pair at positions `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairWitness {
    pub i: usize,
    pub j: usize,
    pub root: FieldElement,
}

/// One witness per unordered pair, in lexicographic `(i, j)` order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub witnesses: Vec<PairWitness>,
}

impl Certificate {
    /// Re-squares every witness and compares with `a_i a_j + 1`. Uses only field
    /// multiplication and addition, not the character or square-root code.
    pub fn recheck(&self, ctx: &FieldDescriptor, elements: &[FieldElement]) -> bool {
        let m = elements.len();
        if self.witnesses.len() != m * m.saturating_sub(1) / 2 {
            return false;
        }
        let mut expected = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j)));
        self.witnesses.iter().all(|w| {
            expected.next() == Some((w.i, w.j))
                && ctx.square(w.root)
                    == ctx.add(ctx.mul(elements[w.i], elements[w.j]), FieldElement::ONE)
        })
    }

    /// `[[i, j, root], ...]`.
    pub fn triples(&self) -> Vec<[u64; 3]> {
        self.witnesses
            .iter()
            .map(|w| [w.i as u64, w.j as u64, w.root.code()])
            .collect()
    }
}

/// Outcome of [`verify_tuple`]. Exactly one of `certificate` and
/// `violating_pair` is present; `elements` is the sorted input the pair indices
/// refer to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub ok: bool,
    pub elements: Vec<FieldElement>,
    pub violating_pair: Option<(usize, usize)>,
    pub certificate: Option<Certificate>,
}

impl VerificationReport {
    pub fn tuple(&self) -> Option<DiophantineTuple> {
        self.ok
            .then(|| DiophantineTuple::from_sorted(self.elements.clone()))
    }
}

/// Rejects zero, out-of-range and repeated elements and returns them sorted.
pub fn canonicalize(ctx: &FieldDescriptor, elements: &[FieldElement]) -> Result<Vec<FieldElement>> {
    let mut sorted = Vec::with_capacity(elements.len());
    for &e in elements {
        ctx.element(e.code())?;
        if e.is_zero() {
            return Err(Error::Parameter("tuple elements must be nonzero".into()));
        }
        sorted.push(e);
    }
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Parameter(format!("element {} repeated", w[0])));
    }
    Ok(sorted)
}

/// Checks every pair of the (sorted) input. On success the report carries a
/// certificate; otherwise the first violating pair in lexicographic order.
pub fn verify_tuple(ctx: &FieldDescriptor, elements: &[FieldElement]) -> Result<VerificationReport> {
    let elements = canonicalize(ctx, elements)?;
    let m = elements.len();
    let mut witnesses = Vec::with_capacity(m * m.saturating_sub(1) / 2);
    for i in 0..m {
        for j in i + 1..m {
            let v = ctx.add(ctx.mul(elements[i], elements[j]), FieldElement::ONE);
            match ctx.sqrt(v) {
                Some(root) => witnesses.push(PairWitness { i, j, root }),
                None => {
                    return Ok(VerificationReport {
                        ok: false,
                        elements,
                        violating_pair: Some((i, j)),
                        certificate: None,
                    })
                }
            }
        }
    }
    Ok(VerificationReport {
        ok: true,
        elements,
        violating_pair: None,
        certificate: Some(Certificate { witnesses }),
    })
}

/// Verifies and returns the tuple with its certificate, or
/// [`Error::NotDiophantine`] naming the first violating pair.
pub fn certify(
    ctx: &FieldDescriptor,
    elements: &[FieldElement],
) -> Result<(DiophantineTuple, Certificate)> {
    let report = verify_tuple(ctx, elements)?;
    match (report.tuple(), report.certificate, report.violating_pair) {
        (Some(t), Some(c), _) => Ok((t, c)),
        (_, _, Some((i, j))) => Err(Error::NotDiophantine {
            i,
            j,
            a: report.elements[i].code(),
            b: report.elements[j].code(),
        }),
        _ => unreachable!("verification report invariant"),
    }
}

/// Whether `x` can join `a`: `x` not in `a` and `a_i x + 1` square for all `i`.
fn extends(ctx: &FieldDescriptor, a: &DiophantineTuple, x: FieldElement) -> bool {
    !a.contains(x)
        && a
            .elements()
            .iter()
            .all(|&ai| ctx.is_square(ctx.add(ctx.mul(ai, x), FieldElement::ONE)))
}

/// All `x` in F_q^* outside `a` with `a + {x}` Diophantine, ascending, by full scan.
pub fn extension_set(ctx: &FieldDescriptor, a: &DiophantineTuple) -> Vec<FieldElement> {
    (1..ctx.order())
        .into_par_iter()
        .map(FieldElement::new)
        .filter(|&x| extends(ctx, a, x))
        .collect()
}

pub fn is_maximal(ctx: &FieldDescriptor, a: &DiophantineTuple) -> bool {
    !(1..ctx.order())
        .into_par_iter()
        .any(|x| extends(ctx, a, FieldElement::new(x)))
}

/// Extends `seed` by uniformly random members of the current extension set
/// until none is left. Deterministic for a given `rng_seed`.
pub fn greedy_maximal(ctx: &FieldDescriptor, seed: &DiophantineTuple, rng_seed: u64) -> DiophantineTuple {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut tuple = seed.clone();
    let mut candidates = extension_set(ctx, &tuple);
    while !candidates.is_empty() {
        let x = candidates[rng.gen_range(0..candidates.len())];
        tuple.insert(x);
        candidates.retain(|&c| {
            c != x && ctx.is_square(ctx.add(ctx.mul(c, x), FieldElement::ONE))
        });
    }
    tuple
}

/// `q < 2^(2m-2) m^2`, which every maximal m-tuple over F_q satisfies.
pub fn maximal_bound_check(q: u64, m: u64) -> bool {
    if m == 0 {
        return false;
    }
    let shift = 2 * m - 2;
    if shift >= 100 {
        return true;
    }
    (q as u128) < (1u128 << shift) * (m as u128) * (m as u128)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn els(codes: &[u64]) -> Vec<FieldElement> {
        codes.iter().map(|&c| FieldElement::new(c)).collect()
    }

    fn tuple(ctx: &FieldDescriptor, codes: &[u64]) -> DiophantineTuple {
        certify(ctx, &els(codes)).unwrap().0
    }

    #[test]
    fn fermat_quadruple() {
        let f = FieldDescriptor::new(1009, 1).unwrap();
        let r = verify_tuple(&f, &els(&[1, 3, 8, 120])).unwrap();
        assert!(r.ok);
        let cert = r.certificate.unwrap();
        let roots: Vec<u64> = cert.witnesses.iter().map(|w| w.root.code()).collect();
        // 1*3+1 = 2^2, 1*8+1 = 3^2, 1*120+1 = 11^2, 3*8+1 = 5^2, 3*120+1 = 19^2, 8*120+1 = 31^2
        assert_eq!(roots, vec![2, 3, 11, 5, 19, 31]);
        assert!(cert.recheck(&f, &r.elements));
    }

    #[test]
    fn singleton_and_zero_product() {
        let f9 = FieldDescriptor::new(3, 2).unwrap();
        let r = verify_tuple(&f9, &els(&[1])).unwrap();
        assert!(r.ok && r.certificate.unwrap().witnesses.is_empty());
        // 1*2 + 1 = 3 = 0 in characteristic 3
        let r = verify_tuple(&f9, &els(&[2, 1])).unwrap();
        assert!(r.ok);
        assert_eq!(r.certificate.unwrap().witnesses[0].root, FieldElement::ZERO);
    }

    #[test]
    fn rejects_bad_input() {
        let f = FieldDescriptor::new(7, 1).unwrap();
        assert!(verify_tuple(&f, &els(&[0, 1])).is_err());
        assert!(verify_tuple(&f, &els(&[3, 3])).is_err());
        assert!(verify_tuple(&f, &els(&[9])).is_err());
    }

    #[test]
    fn first_violating_pair_is_lexicographic() {
        let f = FieldDescriptor::new(7, 1).unwrap();
        // pairs of {1,2,3}: (1,2) -> 3 non-square, (1,3) -> 4, (2,3) -> 0
        let r = verify_tuple(&f, &els(&[3, 2, 1])).unwrap();
        assert!(!r.ok);
        assert_eq!(r.violating_pair, Some((0, 1)));
        assert!(matches!(
            certify(&f, &els(&[1, 2])),
            Err(Error::NotDiophantine { a: 1, b: 2, .. })
        ));
    }

    #[test]
    fn extension_examples() {
        let f5 = FieldDescriptor::new(5, 1).unwrap();
        assert!(extension_set(&f5, &tuple(&f5, &[1, 3])).is_empty());
        assert_eq!(extension_set(&f5, &tuple(&f5, &[1])), els(&[3, 4]));
        assert_eq!(extension_set(&f5, &DiophantineTuple::empty()), els(&[1, 2, 3, 4]));
        assert!(is_maximal(&f5, &tuple(&f5, &[1, 3])));
        assert!(!is_maximal(&f5, &tuple(&f5, &[1])));
    }

    #[test]
    fn greedy_examples() {
        let f5 = FieldDescriptor::new(5, 1).unwrap();
        let seed = tuple(&f5, &[1]);
        for s in 0..20 {
            let g = greedy_maximal(&f5, &seed, s);
            assert!(g.codes() == vec![1, 3] || g.codes() == vec![1, 4]);
            assert_eq!(g, greedy_maximal(&f5, &seed, s));
        }
        let f7 = FieldDescriptor::new(7, 1).unwrap();
        let m = tuple(&f7, &[2, 4, 5]);
        assert_eq!(greedy_maximal(&f7, &m, 3), m);
    }

    #[test]
    fn bound_examples() {
        assert!(maximal_bound_check(29, 3));
        assert!(!maximal_bound_check(1009, 3));
        assert!(!maximal_bound_check(3, 1));
        assert!(maximal_bound_check(u64::MAX, 60));
    }
}
