//! Complete quadratic character sums over polynomial arguments and the two
//! bounds they are checked against.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{bound_terms, index_polynomials};
use crate::error::{param, Error, Result};
use crate::field::{FieldDescriptor, FieldElement};
use crate::poly::FpPolynomial;

/// `sum over x in F_q of chi(f(x))`, by full scan.
pub fn char_sum(ctx: &FieldDescriptor, f: &FpPolynomial) -> i64 {
    (0..ctx.order())
        .into_par_iter()
        .map(|x| ctx.quadratic_character(ctx.eval_fp_poly(f, FieldElement::new(x))) as i64)
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharSumResult {
    pub sum: i64,
    pub degree: usize,
    /// Degree of the square-free part: the number of distinct roots over the
    /// algebraic closure.
    pub distinct_roots: usize,
    /// `(distinct_roots - 1) sqrt(q)`.
    pub bound: f64,
    /// `|sum| <= bound`, decided as `sum^2 <= (distinct_roots - 1)^2 q`.
    pub within_bound: bool,
}

/// Evaluates the sum for a monic `f` that is not the square of a polynomial and
/// compares it with `(r - 1) sqrt(q)`, `r` the number of distinct roots.
pub fn weil_check(ctx: &FieldDescriptor, f: &FpPolynomial) -> Result<CharSumResult> {
    if f.characteristic() != ctx.characteristic() {
        return param(format!(
            "polynomial over F_{} used in a field of characteristic {}",
            f.characteristic(),
            ctx.characteristic()
        ));
    }
    let degree = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return param("the Weil check needs a polynomial of positive degree"),
    };
    if !f.is_monic() {
        return param(format!("{f} is not monic"));
    }
    if f.is_perfect_square() {
        return Err(Error::Hypothesis(format!("{f} is the square of a polynomial")));
    }
    let distinct_roots = f.radical().degree().unwrap_or(0);
    let sum = char_sum(ctx, f);
    let r1 = distinct_roots as i128 - 1;
    Ok(CharSumResult {
        sum,
        degree,
        distinct_roots,
        bound: r1 as f64 * (ctx.order() as f64).sqrt(),
        within_bound: r1 >= 0 && (sum as i128).pow(2) <= r1 * r1 * ctx.order() as i128,
    })
}

/// A uniformly random monic square-free polynomial over F_p of exact degree
/// `degree >= 1`, by rejection.
pub fn random_squarefree_monic<R: Rng + ?Sized>(p: u64, degree: usize, rng: &mut R) -> FpPolynomial {
    assert!(degree >= 1);
    loop {
        let mut coeffs: Vec<u64> = (0..degree).map(|_| rng.gen_range(0..p)).collect();
        coeffs.push(1);
        let f = FpPolynomial::new(p, coeffs);
        if f.is_squarefree() {
            return f;
        }
    }
}

/// `trials` seeded random monic square-free polynomials over the prime field of
/// `ctx`, with degrees uniform in `1..=max_degree`, each run through [`weil_check`].
pub fn weil_trials(
    ctx: &FieldDescriptor,
    trials: usize,
    max_degree: usize,
    seed: u64,
) -> Result<Vec<(FpPolynomial, CharSumResult)>> {
    if max_degree == 0 {
        return param("max_degree must be at least 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let polys: Vec<FpPolynomial> = (0..trials)
        .map(|_| {
            let d = rng.gen_range(1..=max_degree);
            random_squarefree_monic(ctx.characteristic(), d, &mut rng)
        })
        .collect();
    polys
        .into_iter()
        .map(|f| weil_check(ctx, &f).map(|r| (f, r)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternCount {
    /// Number of `x` with `chi(x + a_i) = eps_i` for every `i`.
    pub n: u64,
    pub bound_ok: bool,
}

/// `|2^k N - q| <= (2^(k-1)(k-2) + 1) sqrt(q) + k 2^(k-1)`, the pattern bound
/// scaled by `2^k`, decided in integers.
pub fn pattern_bound_holds(q: u64, k: u32, n: u64) -> bool {
    let scale = 1i128 << k;
    let dev = (scale * n as i128 - q as i128).abs();
    let a = (scale / 2) * (k as i128 - 2) + 1;
    let b = k as i128 * scale / 2;
    // |dev| - b <= a sqrt(q)
    let lhs = dev - b;
    let q = q as i128;
    match (lhs <= 0, a >= 0) {
        (true, true) => true,
        (false, true) => lhs * lhs <= a * a * q,
        (false, false) => false,
        (true, false) => lhs * lhs >= a * a * q,
    }
}

/// Counts `x` in F_q with `chi(x + a_i) = eps_i` for each `i` and checks the
/// count against the quadratic-character pattern bound.
pub fn pattern_count(ctx: &FieldDescriptor, shifts: &[FieldElement], signs: &[i8]) -> Result<PatternCount> {
    if shifts.is_empty() {
        return param("at least one shift is needed");
    }
    if shifts.len() != signs.len() {
        return param(format!("{} shifts but {} signs", shifts.len(), signs.len()));
    }
    if signs.iter().any(|&e| e != 1 && e != -1) {
        return param("signs must be +1 or -1");
    }
    for a in shifts {
        ctx.element(a.code())?;
    }
    let mut sorted = shifts.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return param(format!("shift {} repeated", w[0]));
    }
    let n = (0..ctx.order())
        .into_par_iter()
        .filter(|&x| {
            let x = FieldElement::new(x);
            shifts
                .iter()
                .zip(signs)
                .all(|(&a, &e)| ctx.quadratic_character(ctx.add(x, a)) == e)
        })
        .count() as u64;
    Ok(PatternCount {
        n,
        bound_ok: pattern_bound_holds(ctx.order(), shifts.len() as u32, n),
    })
}

/// One product `prod_{i in I(m)} Phi_{2i}^(k_i)` with not every `k_i` zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionPoly {
    /// The indices `i` with `k_i = 1`, ascending.
    pub indices: Vec<u64>,
    /// `sum of deg Phi_{2i}` over the chosen `i`, with `deg Phi_0 = 1`.
    pub degree_sum: u64,
    pub poly: FpPolynomial,
}

/// Iterator over the `2^T - 1` non-constant products, in binary counting order
/// with bit `j` standing for the `j`-th smallest index.
pub struct ConstructionPolys {
    factors: Vec<(u64, FpPolynomial)>,
    mask: u64,
    end: u64,
}

impl Iterator for ConstructionPolys {
    type Item = ConstructionPoly;

    fn next(&mut self) -> Option<ConstructionPoly> {
        if self.mask >= self.end {
            return None;
        }
        let mask = self.mask;
        self.mask += 1;
        let p = self.factors[0].1.characteristic();
        let mut poly = FpPolynomial::one(p);
        let mut indices = Vec::new();
        let mut degree_sum = 0;
        for (j, (i, f)) in self.factors.iter().enumerate() {
            if mask >> j & 1 == 1 {
                poly = &poly * f;
                indices.push(*i);
                degree_sum += f.degree().unwrap_or(0) as u64;
            }
        }
        assert!(
            !poly.is_perfect_square(),
            "product over {indices:?} is a perfect square"
        );
        Some(ConstructionPoly {
            indices,
            degree_sum,
            poly,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.mask) as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for ConstructionPolys {}

pub fn enum_construction_polys(p: u64, m: u64) -> Result<ConstructionPolys> {
    let terms = bound_terms(p, m)?;
    if terms.t >= 63 {
        return Err(Error::SizePolicy(format!("2^{} products is too many to enumerate", terms.t)));
    }
    Ok(ConstructionPolys {
        factors: index_polynomials(p, m)?,
        mask: 1,
        end: 1 << terms.t,
    })
}

/// `sum over y with ord y >= m of sum over every subset (the empty one included)
/// of chi(prod of chosen Phi_{2i}(y))`: the expanded form of the product
/// `prod (1 + chi(Phi_{2i}(y)))`.
pub fn expansion_sum(ctx: &FieldDescriptor, m: u64) -> Result<i128> {
    let polys: Vec<FpPolynomial> = enum_construction_polys(ctx.characteristic(), m)?
        .map(|c| c.poly)
        .collect();
    Ok((1..ctx.order())
        .into_par_iter()
        .map(FieldElement::new)
        .filter(|&y| ctx.mult_order(y).map(|o| o >= m).unwrap_or(false))
        .map(|y| {
            1 + polys
                .iter()
                .map(|f| ctx.quadratic_character(ctx.eval_fp_poly(f, y)) as i128)
                .sum::<i128>()
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64, n: u32) -> FieldDescriptor {
        FieldDescriptor::new(p, n).unwrap()
    }

    #[test]
    fn char_sum_examples() {
        for (p, n) in [(3, 1), (5, 1), (3, 2), (7, 2)] {
            let ctx = f(p, n);
            assert_eq!(char_sum(&ctx, &FpPolynomial::x(p)), 0);
            assert_eq!(
                char_sum(&ctx, &FpPolynomial::monomial(p, 2, 1)),
                ctx.order() as i64 - 1
            );
        }
        let g = FpPolynomial::new(5, vec![0, 1, 1]);
        assert_eq!(char_sum(&f(5, 1), &g), -1);
    }

    #[test]
    fn weil_examples() {
        let ctx = f(5, 1);
        let r = weil_check(&ctx, &FpPolynomial::new(5, vec![0, 1, 1])).unwrap();
        assert_eq!((r.sum, r.distinct_roots), (-1, 2));
        assert!((r.bound - 5f64.sqrt()).abs() < 1e-12);
        assert!(r.within_bound);
        assert!(matches!(
            weil_check(&ctx, &FpPolynomial::monomial(5, 2, 1)),
            Err(Error::Hypothesis(_))
        ));
        assert!(weil_check(&ctx, &FpPolynomial::new(5, vec![0, 2])).is_err());
        assert!(weil_check(&ctx, &FpPolynomial::new(3, vec![0, 1])).is_err());
    }

    #[test]
    fn weil_counts_roots_of_non_squarefree_input() {
        // x^3 (x + 1): two distinct roots, not a square
        let g = FpPolynomial::new(7, vec![0, 0, 0, 1, 1]);
        let r = weil_check(&f(7, 1), &g).unwrap();
        assert_eq!((r.degree, r.distinct_roots), (4, 2));
        assert!(r.within_bound);
    }

    #[test]
    fn random_polys_are_squarefree_monic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 1..=8 {
            let g = random_squarefree_monic(3, d, &mut rng);
            assert_eq!(g.degree(), Some(d));
            assert!(g.is_monic() && g.is_squarefree());
        }
    }

    #[test]
    fn seeded_trials_repeat() {
        let ctx = f(7, 2);
        let a = weil_trials(&ctx, 20, 8, 5).unwrap();
        assert_eq!(a, weil_trials(&ctx, 20, 8, 5).unwrap());
        assert!(a.iter().all(|(_, r)| r.within_bound));
    }

    #[test]
    fn pattern_examples() {
        let f9 = f(3, 2);
        let r = pattern_count(&f9, &[FieldElement::ZERO], &[1]).unwrap();
        assert_eq!(r, PatternCount { n: 4, bound_ok: true });
        let r = pattern_count(&f9, &[FieldElement::ZERO], &[-1]).unwrap();
        assert_eq!(r.n, 4);
        assert!(pattern_count(&f9, &[FieldElement::ONE, FieldElement::ONE], &[1, 1]).is_err());
        assert!(pattern_count(&f9, &[FieldElement::ONE], &[0]).is_err());
    }

    #[test]
    fn pattern_bound_is_tight_at_the_example() {
        // |4 - 4.5| = 0.5 equals the bound for q = 9, k = 1
        assert!(pattern_bound_holds(9, 1, 4));
        assert!(!pattern_bound_holds(9, 1, 3));
        assert!(pattern_bound_holds(9, 1, 5));
    }

    #[test]
    fn construction_polys_examples() {
        let v: Vec<_> = enum_construction_polys(3, 2).unwrap().collect();
        assert_eq!(v.len(), 3);
        assert_eq!(v[0].poly, FpPolynomial::new(3, vec![0, 1]));
        assert_eq!(v[1].poly, FpPolynomial::new(3, vec![1, 1]));
        assert_eq!(v[2].poly, FpPolynomial::new(3, vec![0, 1, 1]));
        for (p, m) in [(3, 6), (5, 8), (7, 5)] {
            let t = bound_terms(p, m).unwrap().t;
            assert_eq!(enum_construction_polys(p, m).unwrap().len() as u64, (1 << t) - 1);
        }
    }
}
