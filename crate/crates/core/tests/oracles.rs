//! Known values checked against brute-force computations that share no code
//! with the library beyond field construction.

use std::collections::BTreeSet;

use fqtuples::charsum::{char_sum, pattern_count};
use fqtuples::constructions::{
    bound_terms, build_case1, build_case2, build_3mod8, build_subfield_tuple, compute_q, count_n,
    find_y_case1, find_y_case2, Variant,
};
use fqtuples::cyclotomic::{cyclo_int, cyclo_mod, euler_phi};
use fqtuples::oracle::{build_graph, max_clique, DEFAULT_MAX_Q};
use fqtuples::{FieldDescriptor, FieldElement, FpPolynomial};

fn ctx(p: u64, n: u32) -> FieldDescriptor {
    FieldDescriptor::new(p, n).unwrap()
}

/// Squares of F_q, found by squaring every element.
fn squares(f: &FieldDescriptor) -> BTreeSet<u64> {
    (0..f.order())
        .map(|x| f.mul(FieldElement::new(x), FieldElement::new(x)).code())
        .collect()
}

/// Multiplicative order by repeated multiplication.
fn naive_order(f: &FieldDescriptor, y: u64) -> u64 {
    let y = FieldElement::new(y);
    let mut acc = y;
    let mut k = 1;
    while acc != FieldElement::ONE {
        acc = f.mul(acc, y);
        k += 1;
    }
    k
}

fn naive_pow(f: &FieldDescriptor, y: u64, k: u64) -> FieldElement {
    (0..k).fold(FieldElement::ONE, |acc, _| f.mul(acc, FieldElement::new(y)))
}

fn add1(f: &FieldDescriptor, a: u64, b: u64) -> u64 {
    f.add(f.mul(FieldElement::new(a), FieldElement::new(b)), FieldElement::ONE)
        .code()
}

fn naive_edges(f: &FieldDescriptor) -> Vec<(u64, u64)> {
    let sq = squares(f);
    let q = f.order();
    (1..q)
        .flat_map(|a| (a + 1..q).map(move |b| (a, b)))
        .filter(|&(a, b)| sq.contains(&add1(f, a, b)))
        .collect()
}

/// Largest clique by trying every extension of every clique.
fn naive_max_clique(f: &FieldDescriptor) -> usize {
    fn grow(edges: &BTreeSet<(u64, u64)>, q: u64, clique: &mut Vec<u64>, best: &mut usize) {
        *best = (*best).max(clique.len());
        let start = clique.last().map_or(1, |&c| c + 1);
        for v in start..q {
            if clique.iter().all(|&u| edges.contains(&(u, v))) {
                clique.push(v);
                grow(edges, q, clique, best);
                clique.pop();
            }
        }
    }
    let edges: BTreeSet<(u64, u64)> = naive_edges(f).into_iter().collect();
    let mut best = 0;
    grow(&edges, f.order(), &mut vec![], &mut best);
    best
}

#[test]
fn graph_edges_match_pair_scan() {
    assert_eq!(naive_edges(&ctx(5, 1)), vec![(1, 3), (1, 4), (2, 4)]);
    assert_eq!(
        naive_edges(&ctx(7, 1)),
        vec![(1, 3), (1, 6), (2, 3), (2, 4), (2, 5), (3, 5), (4, 5), (4, 6)]
    );
    for (p, n) in [(5, 1), (7, 1), (3, 2), (13, 1), (5, 2), (3, 3)] {
        let f = ctx(p, n);
        let g = build_graph(&f, DEFAULT_MAX_Q).unwrap();
        assert_eq!(g.edges(), naive_edges(&f), "q = {}", f.order());
    }
}

#[test]
fn clique_search_matches_subset_search() {
    let expected = [2, 2, 3, 4, 4, 4, 4, 5, 5, 5];
    let primes = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31];
    for (&p, &m) in primes.iter().zip(&expected) {
        let f = ctx(p, 1);
        assert_eq!(naive_max_clique(&f), m, "naive M({p})");
        assert_eq!(max_clique(&build_graph(&f, DEFAULT_MAX_Q).unwrap()).size, m, "M({p})");
    }
    for (p, n) in [(3, 2), (5, 2), (3, 3)] {
        let f = ctx(p, n);
        let r = max_clique(&build_graph(&f, DEFAULT_MAX_Q).unwrap());
        assert_eq!(r.size, naive_max_clique(&f), "q = {}", f.order());
    }
}

#[test]
fn case1_search_matches_scan() {
    for (p, n) in [(5, 2), (13, 1), (17, 1), (29, 1), (3, 4), (41, 1)] {
        let f = ctx(p, n);
        let sq = squares(&f);
        let m = 2;
        let want = (1..f.order()).find(|&y| {
            sq.contains(&y)
                && naive_order(&f, y) > m
                && (1..=m).all(|i| sq.contains(&f.sub(naive_pow(&f, y, i), FieldElement::ONE).code()))
        });
        assert_eq!(find_y_case1(&f, m).unwrap().map(|y| y.code()), want, "q = {}", f.order());
    }
    assert_eq!(find_y_case1(&ctx(5, 2), 2).unwrap(), Some(FieldElement::new(2)));
    assert_eq!(find_y_case1(&ctx(13, 1), 2).unwrap(), None);
    assert_eq!(find_y_case1(&ctx(17, 1), 2).unwrap(), None);
}

#[test]
fn case1_tuple_for_25() {
    let f = ctx(5, 2);
    let (t, _) = build_case1(&f, FieldElement::new(2), 2).unwrap();
    assert_eq!(t.codes(), vec![1, 2, 4]);
    let sq = squares(&f);
    for (a, b) in [(1, 2), (1, 4), (2, 4)] {
        assert!(sq.contains(&add1(&f, a, b)));
    }
}

#[test]
fn case2_for_23() {
    let f = ctx(23, 1);
    let sq = squares(&f);
    // y a square with y + 1 a square, order at least m
    let weak: Vec<u64> = (1..23)
        .filter(|&y| sq.contains(&y) && y != 0 && sq.contains(&((y + 1) % 23)) && (y + 1) % 23 != 0)
        .filter(|&y| naive_order(&f, y) >= 2)
        .collect();
    assert_eq!(weak, vec![2, 3, 8, 12]);
    assert_eq!(count_n(&f, 2).unwrap().exact, 4);
    assert_eq!(find_y_case2(&f, 2).unwrap(), Some(FieldElement::new(2)));
    let (t, _) = build_case2(&f, FieldElement::new(2), 2).unwrap();
    assert_eq!(t.codes(), vec![1, 2, 12]);
    for (a, b) in [(12, 1), (12, 2), (1, 2)] {
        assert!(sq.contains(&add1(&f, a, b)));
    }
}

#[test]
fn half_construction_for_11() {
    let f = ctx(11, 1);
    assert_eq!(squares(&f), [0, 1, 3, 4, 5, 9].into_iter().collect());
    assert_eq!(build_3mod8(&f, FieldElement::new(3), 2).unwrap().0.codes(), vec![1, 3]);
}

#[test]
fn subfield_tuples_are_fixed_points() {
    for (p, n) in [(3, 2), (5, 2), (3, 4), (7, 2)] {
        let f = ctx(p, n);
        let root = p.pow(n / 2);
        let fixed: Vec<u64> = (1..f.order())
            .filter(|&x| naive_pow(&f, x, root) == FieldElement::new(x))
            .collect();
        assert_eq!(build_subfield_tuple(&f).unwrap().0.codes(), fixed);
        assert_eq!(fixed.len() as u64, root - 1);
    }
}

#[test]
fn q_values_from_direct_formula() {
    for (q, p, expect_floor) in [(59049u64, 3u64, 3i64), (390_625, 5, 3), (101, 101, -1), (23, 23, -1)] {
        let l = (q as f64).ln();
        let v = p as f64 / (p as f64 - 1.0) * ((l / 2.0 - 2.0 * l.ln()) / 2f64.ln() + 1.0);
        let b = compute_q(q, p, Variant::Thm1).unwrap();
        assert!((b.value - v).abs() < 1e-9);
        assert_eq!(b.floor, expect_floor, "q = {q}");
    }
}

#[test]
fn bound_terms_by_direct_totients() {
    let phi = |n: u64| (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64;
    for p in [3u64, 5, 7, 11] {
        for m in 2..40u64 {
            let b = bound_terms(p, m).unwrap();
            let idx: Vec<u64> = (1..m).filter(|i| i % p != 0).collect();
            assert_eq!(b.t, idx.len() as u64 + 1);
            assert_eq!(b.s, idx.iter().map(|&i| phi(2 * i)).sum::<u64>());
            assert_eq!(b.s_small, idx.iter().map(|&i| phi(i)).sum::<u64>());
        }
    }
    assert_eq!((1..=5).map(|i| euler_phi(2 * i).unwrap()).collect::<Vec<_>>(), vec![1, 2, 2, 4, 4]);
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `x^n - 1` over Z via the Moebius product of `x^d - 1` factors, with i128
/// dense arithmetic.
fn mobius_cyclotomic(n: u64) -> Vec<i64> {
    fn mu(mut n: u64) -> i32 {
        let mut r = 1;
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                n /= d;
                if n % d == 0 {
                    return 0;
                }
                r = -r;
            }
            d += 1;
        }
        if n > 1 {
            r = -r;
        }
        r
    }
    let mut num = vec![1i128];
    let mut den = vec![1i128];
    for d in (1..=n).filter(|d| n % d == 0) {
        let mut f = vec![0i128; d as usize + 1];
        f[0] = -1;
        f[d as usize] = 1;
        let target = match mu(n / d) {
            1 => &mut num,
            -1 => &mut den,
            _ => continue,
        };
        let mut out = vec![0i128; target.len() + f.len() - 1];
        for (i, a) in target.iter().enumerate() {
            for (j, b) in f.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        *target = out;
    }
    // exact division of monic-up-to-sign polynomials
    let mut rem = num;
    let dl = den.len();
    let lead = den[dl - 1];
    let mut quo = vec![0i128; rem.len() - dl + 1];
    for k in (0..quo.len()).rev() {
        let c = rem[k + dl - 1] / lead;
        quo[k] = c;
        for (j, &b) in den.iter().enumerate() {
            rem[k + j] -= c * b;
        }
    }
    assert!(rem.iter().all(|&r| r == 0));
    quo.into_iter().map(|c| c as i64).collect()
}

#[test]
fn cyclotomic_matches_moebius_product() {
    assert_eq!(mobius_cyclotomic(12), vec![1, 0, -1, 0, 1]);
    for n in 1..=120 {
        assert_eq!(cyclo_int(n).unwrap().coeffs(), &mobius_cyclotomic(n)[..], "n = {n}");
    }
    // Phi_3 mod 3 is (x + 2)^2 = x^2 + x + 1; Phi_7 mod 7 is (x - 1)^6
    assert_eq!(cyclo_mod(3, 3).unwrap(), FpPolynomial::new(3, vec![2, 1]).pow(2));
    assert_eq!(cyclo_mod(7, 7).unwrap(), FpPolynomial::new(7, vec![6, 1]).pow(6));
}

/// Legendre symbol by Euler's criterion on integers.
fn legendre(a: u64, p: u64) -> i64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = (p - 1) / 2;
    if b == 0 {
        return 0;
    }
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

#[test]
fn character_sums_by_legendre_symbol() {
    let f5 = ctx(5, 1);
    assert_eq!(char_sum(&f5, &FpPolynomial::new(5, vec![0, 1, 1])), -1);
    for p in [7u64, 11, 13, 101] {
        let f = ctx(p, 1);
        for coeffs in [vec![1u64, 0, 1], vec![2, 3, 0, 1], vec![0, 1, 5 % p, 1]] {
            let g = FpPolynomial::new(p, coeffs);
            let direct: i64 = (0..p).map(|x| legendre(g.eval(x), p)).sum();
            assert_eq!(char_sum(&f, &g), direct);
        }
    }
}

#[test]
fn pattern_counts_by_direct_scan() {
    let f9 = ctx(3, 2);
    assert_eq!(pattern_count(&f9, &[FieldElement::ZERO], &[1]).unwrap().n, 4);
    let f = ctx(13, 1);
    let shifts = [1u64, 4, 9];
    for signs in [[1i8, 1, 1], [1, -1, 1], [-1, -1, 1]] {
        let direct = (0..13)
            .filter(|&x| {
                shifts
                    .iter()
                    .zip(signs)
                    .all(|(&a, e)| legendre(x + a, 13) == e as i64)
            })
            .count() as u64;
        let el: Vec<FieldElement> = shifts.iter().map(|&c| FieldElement::new(c)).collect();
        assert_eq!(pattern_count(&f, &el, &signs).unwrap().n, direct);
    }
}
