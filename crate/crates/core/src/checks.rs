//! Property suites over ranges of fields and parameters. Each property yields
//! one [`PropertyOutcome`]; a suite passes when all of them do.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::charsum::{
    char_sum, enum_construction_polys, expansion_sum, pattern_count, random_squarefree_monic, weil_check,
};
use crate::constructions::{bound_terms, count_n, product_form};
use crate::cyclotomic::{cyclo_int, cyclo_mod, euler_phi, p_divisible_closed_form, phi_properties_check, IntPolynomial};
use crate::diophantine::{greedy_maximal, is_maximal, maximal_bound_check, DiophantineTuple};
use crate::error::{param, Error, Result};
use crate::field::{FieldDescriptor, FieldElement};
use crate::nt;
use crate::oracle::{build_graph, maximal_cliques, DEFAULT_MAX_Q};
use crate::poly::FpPolynomial;

/// Primes the cyclotomic suite runs over.
pub const CYCLO_PRIMES: [u64; 5] = [3, 5, 7, 11, 13];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl PropertyOutcome {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        PropertyOutcome {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    /// Passes iff `failures` is empty; reports the first few failures otherwise.
    fn from_failures(name: &str, checked: usize, failures: &[String]) -> Self {
        if failures.is_empty() {
            Self::new(name, true, format!("{checked} cases"))
        } else {
            let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
            Self::new(
                name,
                false,
                format!("{} of {checked} failed: {}", failures.len(), shown.join("; ")),
            )
        }
    }
}

impl fmt::Display for PropertyOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Cyclo,
    Weil,
    Pattern,
    Bounds,
    Maximal,
    NCount,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cyclo" => Suite::Cyclo,
            "weil" => Suite::Weil,
            "pattern" => Suite::Pattern,
            "bounds" => Suite::Bounds,
            "maximal" => Suite::Maximal,
            "ncount" => Suite::NCount,
            "all" => Suite::All,
            other => return param(format!("unknown check suite {other:?}")),
        })
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<PropertyOutcome>> {
    Ok(match suite {
        Suite::Cyclo => cyclo_suite(300, 200)?,
        Suite::Weil => weil_suite(1000, 2003, seed)?,
        Suite::Pattern => pattern_suite(1009, 20, seed)?,
        Suite::Bounds => bounds_suite(97, 500)?,
        Suite::Maximal => maximal_suite(200, 100, 100, seed)?,
        Suite::NCount => ncount_suite(&ncount_grid(100_000), 12, 2000)?,
        Suite::All => {
            let mut out = Vec::new();
            for s in [
                Suite::Cyclo,
                Suite::Weil,
                Suite::Pattern,
                Suite::Bounds,
                Suite::Maximal,
                Suite::NCount,
            ] {
                out.extend(run_suite(s, seed)?);
            }
            out
        }
    })
}

fn x_pow_minus_one_mod(p: u64, n: usize) -> FpPolynomial {
    &FpPolynomial::monomial(p, n, 1) - &FpPolynomial::one(p)
}

/// Product identities up to `n_max`, degrees, closed forms and the three
/// structural clauses for all index pairs up to `pair_max`.
pub fn cyclo_suite(n_max: u64, pair_max: u64) -> Result<Vec<PropertyOutcome>> {
    let mut out = Vec::new();

    let failures: Vec<String> = (1..=n_max)
        .into_par_iter()
        .map(|n| -> Result<Option<String>> {
            let mut prod = IntPolynomial::one();
            for d in nt::divisors(n) {
                prod = prod.checked_mul(&cyclo_int(d)?)?;
            }
            Ok((prod != IntPolynomial::x_pow_minus_one(n as usize)).then(|| format!("n={n}")))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    out.push(PropertyOutcome::from_failures(
        "cyclo: product of Phi_d over d | n is x^n - 1 over Z",
        n_max as usize,
        &failures,
    ));

    let cases: Vec<(u64, u64)> = CYCLO_PRIMES
        .iter()
        .flat_map(|&p| (1..=n_max).map(move |n| (p, n)))
        .collect();
    let checked = cases.len();
    let per_case: Vec<[Option<String>; 4]> = cases
        .into_par_iter()
        .map(|(p, n)| -> Result<[Option<String>; 4]> {
            let mut prod = FpPolynomial::one(p);
            for d in nt::divisors(n) {
                prod = &prod * &cyclo_mod(p, d)?;
            }
            let phi = cyclo_mod(p, n)?;
            let tag = format!("p={p} n={n}");
            let product = (prod != x_pow_minus_one_mod(p, n as usize)).then(|| tag.clone());
            let degree = (phi.degree() != Some(euler_phi(n)? as usize)).then(|| tag.clone());
            let reduction = (n <= 3000 && cyclo_int(n)?.reduce_mod(p) != phi).then(|| tag.clone());
            let closed = match p_divisible_closed_form(p, n)? {
                Some(g) => (g != phi).then(|| tag.clone()),
                None => None,
            };
            Ok([product, degree, reduction, closed])
        })
        .collect::<Result<Vec<_>>>()?;
    let names = [
        "cyclo: product of Phi_d over d | n is x^n - 1 over F_p",
        "cyclo: deg Phi_n = phi(n) over F_p",
        "cyclo: F_p computation equals the integer one reduced mod p",
        "cyclo: Phi_(p^k r) = Phi_r^((p-1) p^(k-1)) over F_p",
    ];
    for (k, name) in names.iter().enumerate() {
        let failures: Vec<String> = per_case.iter().filter_map(|c| c[k].clone()).collect();
        out.push(PropertyOutcome::from_failures(name, checked, &failures));
    }

    let mut failures = [Vec::new(), Vec::new(), Vec::new()];
    let mut checked = [0usize; 3];
    for &p in &CYCLO_PRIMES {
        for n in 1..=pair_max {
            let single = phi_properties_check(p, n, None)?;
            if n % p == 0 {
                checked[0] += 1;
                if !single.is_square_when_p_divides {
                    failures[0].push(format!("p={p} n={n}"));
                }
            } else {
                checked[1] += 1;
                if !single.is_squarefree_when_p_coprime {
                    failures[1].push(format!("p={p} n={n}"));
                }
            }
        }
        let pairs: Vec<(u64, u64)> = (1..=pair_max)
            .filter(|n| n % p != 0)
            .flat_map(|n| (n + 1..=pair_max).filter(|m| m % p != 0).map(move |m| (n, m)))
            .collect();
        checked[2] += pairs.len();
        let bad: Vec<String> = pairs
            .into_par_iter()
            .map(|(n, m)| -> Result<Option<String>> {
                let r = phi_properties_check(p, n, Some(m))?;
                Ok((!r.coprime_pair).then(|| format!("p={p} ({n},{m})")))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        failures[2].extend(bad);
    }
    let names = [
        "cyclo: Phi_n is a square mod p when p | n",
        "cyclo: Phi_n is square-free mod p when p does not divide n",
        "cyclo: Phi_n, Phi_n' coprime mod p for distinct n, n' prime to p",
    ];
    for k in 0..3 {
        out.push(PropertyOutcome::from_failures(names[k], checked[k], &failures[k]));
    }
    Ok(out)
}

/// Odd prime powers `q <= limit` as fields, ascending.
pub fn fields_up_to(limit: u64) -> Result<Vec<FieldDescriptor>> {
    nt::odd_prime_powers(3, limit)
        .into_iter()
        .map(|(p, n, _)| FieldDescriptor::new(p, n))
        .collect()
}

/// `trials` random monic square-free polynomials of degree 1..=8 over random
/// fields of order at most `q_max`.
pub fn weil_suite(trials: usize, q_max: u64, seed: u64) -> Result<Vec<PropertyOutcome>> {
    let fields = fields_up_to(q_max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jobs: Vec<(usize, FpPolynomial)> = (0..trials)
        .map(|_| {
            let k = rng.gen_range(0..fields.len());
            let d = rng.gen_range(1..=8);
            (k, random_squarefree_monic(fields[k].characteristic(), d, &mut rng))
        })
        .collect();
    let failures: Vec<String> = jobs
        .par_iter()
        .map(|(k, f)| -> Result<Option<String>> {
            let ctx = &fields[*k];
            let r = weil_check(ctx, f)?;
            Ok((!r.within_bound || r.distinct_roots > r.degree).then(|| {
                format!("q={} f={f} sum={} bound={:.3}", ctx.order(), r.sum, r.bound)
            }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(vec![PropertyOutcome::from_failures(
        "weil: |sum chi(f(x))| <= (r - 1) sqrt(q) for random square-free monic f",
        trials,
        &failures,
    )])
}

/// Every `q <= q_max`, `k` in 1..=3, every sign pattern, `sets` random shift sets.
/// Also checks that the pattern counts of one shift set sum to the number of
/// `x` with no `x + a_i` zero.
pub fn pattern_suite(q_max: u64, sets: usize, seed: u64) -> Result<Vec<PropertyOutcome>> {
    let fields = fields_up_to(q_max)?;
    let results: Vec<(usize, Vec<String>, Vec<String>)> = fields
        .par_iter()
        .map(|ctx| -> Result<(usize, Vec<String>, Vec<String>)> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ctx.order().wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let codes: Vec<u64> = (0..ctx.order()).collect();
            let mut checked = 0;
            let mut bound_fail = Vec::new();
            let mut sum_fail = Vec::new();
            for k in 1..=3usize {
                for _ in 0..sets {
                    let shifts: Vec<FieldElement> = codes
                        .choose_multiple(&mut rng, k)
                        .map(|&c| FieldElement::new(c))
                        .collect();
                    let mut total = 0;
                    for pattern in 0..1u32 << k {
                        let signs: Vec<i8> =
                            (0..k).map(|i| if pattern >> i & 1 == 1 { -1 } else { 1 }).collect();
                        let r = pattern_count(ctx, &shifts, &signs)?;
                        checked += 1;
                        total += r.n;
                        if !r.bound_ok {
                            bound_fail.push(format!("q={} a={shifts:?} eps={signs:?} N={}", ctx.order(), r.n));
                        }
                    }
                    let expected = ctx.order() - k as u64;
                    if total != expected {
                        sum_fail.push(format!("q={} a={shifts:?} total={total}", ctx.order()));
                    }
                }
            }
            Ok((checked, bound_fail, sum_fail))
        })
        .collect::<Result<Vec<_>>>()?;
    let checked: usize = results.iter().map(|r| r.0).sum();
    let bound_fail: Vec<String> = results.iter().flat_map(|r| r.1.clone()).collect();
    let sum_fail: Vec<String> = results.iter().flat_map(|r| r.2.clone()).collect();
    Ok(vec![
        PropertyOutcome::from_failures(
            "pattern: |N - q/2^k| <= (k - 1 - k/2 + 2^-k) sqrt(q) + k/2",
            checked,
            &bound_fail,
        ),
        PropertyOutcome::from_failures(
            "pattern: counts over all sign patterns sum to q - k",
            fields.len() * 3 * sets,
            &sum_fail,
        ),
    ])
}

/// `T = |I(m)|` and `S (p-1) < p T^2` for odd primes up to `p_max`, `2 <= m <= m_max`.
pub fn bounds_suite(p_max: u64, m_max: u64) -> Result<Vec<PropertyOutcome>> {
    let mut checked = 0;
    let mut size_fail = Vec::new();
    let mut bound_fail = Vec::new();
    for p in nt::primes_up_to(p_max).into_iter().filter(|&p| p > 2) {
        for m in 2..=m_max {
            let b = bound_terms(p, m)?;
            checked += 1;
            if b.t as usize != b.i_set.len() {
                size_fail.push(format!("p={p} m={m}"));
            }
            if !b.s_bound_holds() {
                bound_fail.push(format!("p={p} m={m} S={} T={}", b.s, b.t));
            }
        }
    }
    Ok(vec![
        PropertyOutcome::from_failures("bounds: T = |I(m)|", checked, &size_fail),
        PropertyOutcome::from_failures("bounds: S (p-1) < p T^2", checked, &bound_fail),
    ])
}

/// `samples` seeded greedy maximal tuples for every `q <= q_max`, checked for
/// maximality and `q < 2^(2m-2) m^2`. For `q <= exhaustive_max` every maximal
/// clique of the graph is checked too, and each greedy tuple must be among them.
pub fn maximal_suite(
    q_max: u64,
    samples: u64,
    exhaustive_max: u64,
    seed: u64,
) -> Result<Vec<PropertyOutcome>> {
    let fields = fields_up_to(q_max)?;
    let results: Vec<[Vec<String>; 3]> = fields
        .par_iter()
        .map(|ctx| -> Result<[Vec<String>; 3]> {
            let q = ctx.order();
            let greedy: Vec<DiophantineTuple> = (0..samples)
                .map(|s| greedy_maximal(ctx, &DiophantineTuple::empty(), seed.wrapping_add(s)))
                .collect();
            let mut fail: [Vec<String>; 3] = Default::default();
            for t in &greedy {
                if !is_maximal(ctx, t) || !maximal_bound_check(q, t.len() as u64) {
                    fail[0].push(format!("q={q} {:?}", t.codes()));
                }
            }
            if q <= exhaustive_max {
                let all = maximal_cliques(&build_graph(ctx, DEFAULT_MAX_Q)?);
                for c in &all {
                    if !maximal_bound_check(q, c.len() as u64) {
                        fail[1].push(format!("q={q} {c:?}"));
                    }
                }
                let known: HashSet<&Vec<u64>> = all.iter().collect();
                for t in &greedy {
                    if !known.contains(&t.codes()) {
                        fail[2].push(format!("q={q} {:?}", t.codes()));
                    }
                }
            }
            Ok(fail)
        })
        .collect::<Result<Vec<_>>>()?;
    let collect = |k: usize| -> Vec<String> { results.iter().flat_map(|r| r[k].clone()).collect() };
    let exhaustive = fields.iter().filter(|c| c.order() <= exhaustive_max).count();
    Ok(vec![
        PropertyOutcome::from_failures(
            "maximal: greedy tuples are maximal with q < 2^(2m-2) m^2",
            fields.len() * samples as usize,
            &collect(0),
        ),
        PropertyOutcome::from_failures(
            "maximal: every maximal clique has q < 2^(2m-2) m^2",
            exhaustive,
            &collect(1),
        ),
        PropertyOutcome::from_failures(
            "maximal: greedy tuples appear among the enumerated maximal cliques",
            exhaustive * samples as usize,
            &collect(2),
        ),
    ])
}

/// Fields used by the N(m) suite: powers of 3, 5, 7, 11, 13 and a few primes,
/// all with `q <= limit`.
pub fn ncount_grid(limit: u64) -> Vec<(u64, u32)> {
    let mut grid = BTreeMap::new();
    for p in [3u64, 5, 7, 11, 13] {
        let mut q = p;
        let mut n = 1;
        while q <= limit {
            grid.insert(q, (p, n));
            q *= p;
            n += 1;
        }
    }
    for p in [17u64, 19, 23, 101, 1009, 2003, 10007, 65537, 99991] {
        if p <= limit {
            grid.insert(p, (p, 1));
        }
    }
    grid.into_values().collect()
}

/// `N(m) >= analytic bound`, and the product form equals `2^T N(m)` plus the
/// vanishing contribution. For `q <= expand_max` and `2^T <= 256` the product
/// form is also checked against its expansion into character sums.
pub fn ncount_suite(grid: &[(u64, u32)], m_max: u64, expand_max: u64) -> Result<Vec<PropertyOutcome>> {
    let mut fail: [Vec<String>; 5] = Default::default();
    let mut checked = [0usize; 4];
    for &(p, n) in grid {
        let ctx = FieldDescriptor::new(p, n)?;
        for m in 2..=m_max {
            let tag = format!("q={} m={m}", ctx.order());
            let c = count_n(&ctx, m)?;
            checked[0] += 1;
            if (c.exact as f64) < c.analytic_lower_bound {
                fail[0].push(format!("{tag} exact={} bound={:.3}", c.exact, c.analytic_lower_bound));
            }
            if (c.exact as f64) < c.corrected_lower_bound {
                fail[4].push(format!("{tag} exact={} bound={:.3}", c.exact, c.corrected_lower_bound));
            }
            let pf = product_form(&ctx, m)?;
            checked[1] += 1;
            if pf.scaled_sum - pf.scaled_vanishing != c.exact as u128 * pf.two_pow_t {
                fail[1].push(format!("{tag} sum={} exact={}", pf.scaled_sum, c.exact));
            }
            if ctx.order() <= expand_max && pf.two_pow_t <= 256 {
                checked[2] += 1;
                let e = expansion_sum(&ctx, m)?;
                if e != pf.scaled_sum as i128 {
                    fail[2].push(format!("{tag} expansion={e} product={}", pf.scaled_sum));
                }
                for cp in enum_construction_polys(p, m)? {
                    checked[3] += 1;
                    let sum = char_sum(&ctx, &cp.poly) as i128;
                    let r1 = cp.degree_sum as i128 - 1;
                    if sum * sum > r1 * r1 * ctx.order() as i128 {
                        fail[3].push(format!("{tag} indices={:?} sum={sum}", cp.indices));
                    }
                }
            }
        }
    }
    Ok(vec![
        PropertyOutcome::from_failures(
            "ncount: exact N(m) >= 2^-T (q - (2^(T-1) S - (2^T - 1)) sqrt q) - S",
            checked[0],
            &fail[0],
        ),
        PropertyOutcome::from_failures(
            "ncount: exact N(m) >= corrected lower bound",
            checked[0],
            &fail[4],
        ),
        PropertyOutcome::from_failures(
            "ncount: product form = 2^T N(m) + vanishing terms",
            checked[1],
            &fail[1],
        ),
        PropertyOutcome::from_failures(
            "ncount: product form = expansion into character sums",
            checked[2],
            &fail[2],
        ),
        PropertyOutcome::from_failures(
            "ncount: |sum chi(f)| <= (sum of factor degrees - 1) sqrt(q) for each product f",
            checked[3],
            &fail[3],
        ),
    ])
}
