//! Explicit constructions of Diophantine tuples and the bound they certify.
//!
//! Each builder emits a geometric progression of powers of a searched-for `y`
//! and re-verifies the result with [`verify_tuple`](crate::diophantine::verify_tuple)
//! before returning, so no caller relies on the algebra being right.
//!
//! Throughout, `I(m) = {0} ∪ {1 <= i <= m-1 : p ∤ i}` and the index-0 factor
//! `Phi_0(y)` is read as `y` itself.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::cyclotomic::{cyclo_mod, euler_phi};
use crate::diophantine::{
    certify, greedy_maximal, Certificate, DiophantineTuple, RNG_NAME,
};
use crate::error::{param, Error, Result};
use crate::field::{FieldDescriptor, FieldElement};
use crate::nt;
use crate::poly::FpPolynomial;
use crate::precise;

/// Which form of the bound Q to evaluate: `+1` inside the bracket, or `+2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    #[default]
    Thm1,
    Thm35,
}

impl Variant {
    fn offset(self) -> i64 {
        match self {
            Variant::Thm1 => 1,
            Variant::Thm35 => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Thm1 => "thm1",
            Variant::Thm35 => "thm35",
        }
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thm1" => Ok(Variant::Thm1),
            "thm35" => Ok(Variant::Thm35),
            other => param(format!("unknown bound variant {other:?}")),
        }
    }
}

/// `Q` and its floor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QBound {
    pub value: f64,
    pub floor: i64,
}

/// Distance from an integer below which the floor is recomputed in fixed point.
const FLOOR_GUARD: f64 = 1e-9;

/// `Q = p/(p-1) * ((ln(q)/2 - 2 ln ln q)/ln 2 + c)` with `c = 1` (thm1) or 2 (thm35).
pub fn compute_q(q: u64, p: u64, variant: Variant) -> Result<QBound> {
    if q <= 7 {
        return param(format!("the bound needs q > 7, got q = {q}"));
    }
    match nt::odd_prime_power(q) {
        Some((base, _)) if base == p => {}
        _ => return param(format!("{q} is not a power of the odd prime {p}")),
    }
    let ln = (q as f64).ln();
    let c = variant.offset() as f64;
    let value = p as f64 / (p - 1) as f64 * ((0.5 * ln - 2.0 * ln.ln()) / std::f64::consts::LN_2 + c);
    if (value - value.round()).abs() < FLOOR_GUARD {
        return Ok(QBound {
            value: precise::q_value(q, p, variant.offset()),
            floor: precise::q_floor(q, p, variant.offset()),
        });
    }
    Ok(QBound {
        value,
        floor: value.floor() as i64,
    })
}

/// The combinatorial quantities attached to `(p, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundTerms {
    pub p: u64,
    pub m: u64,
    /// `I(m)`, ascending, starting with 0.
    pub i_set: Vec<u64>,
    /// `T = m - floor((m-1)/p)`.
    pub t: u64,
    /// `S = sum over i in I(m), i >= 1 of phi(2i)`.
    pub s: u64,
    /// `s = sum over i in I(m), i >= 1 of phi(i)`.
    pub s_small: u64,
}

impl BoundTerms {
    /// `S < p/(p-1) T^2`, compared as `S (p-1) < p T^2`.
    pub fn s_bound_holds(&self) -> bool {
        (self.s as u128) * (self.p as u128 - 1) < (self.p as u128) * (self.t as u128).pow(2)
    }
}

pub fn bound_terms(p: u64, m: u64) -> Result<BoundTerms> {
    if !nt::is_prime(p) {
        return param(format!("{p} is not prime"));
    }
    if m < 2 {
        return param("bound terms need m >= 2");
    }
    let i_set: Vec<u64> = std::iter::once(0)
        .chain((1..m).filter(|i| i % p != 0))
        .collect();
    let mut s = 0;
    let mut s_small = 0;
    for &i in &i_set[1..] {
        s += euler_phi(2 * i)?;
        s_small += euler_phi(i)?;
    }
    Ok(BoundTerms {
        p,
        m,
        t: m - (m - 1) / p,
        i_set,
        s,
        s_small,
    })
}

/// `Phi_{2i}` modulo `p` for every `i` in `I(m)`, with `Phi_0 = x`.
pub(crate) fn index_polynomials(p: u64, m: u64) -> Result<Vec<(u64, FpPolynomial)>> {
    bound_terms(p, m)?
        .i_set
        .into_iter()
        .map(|i| {
            let f = if i == 0 {
                FpPolynomial::x(p)
            } else {
                cyclo_mod(p, 2 * i)?
            };
            Ok((i, f))
        })
        .collect()
}

fn check_even_m(m: u64) -> Result<()> {
    if m < 2 || m % 2 != 0 {
        return param(format!("m must be even and at least 2, got {m}"));
    }
    Ok(())
}

fn order_at_least(ctx: &FieldDescriptor, y: FieldElement, k: u64) -> bool {
    ctx.mult_order(y).map(|o| o >= k).unwrap_or(false)
}

/// Smallest code in `[1, q)` satisfying `pred`; the scan is split across
/// workers but the answer does not depend on the split.
fn first_match<F>(ctx: &FieldDescriptor, pred: F) -> Option<FieldElement>
where
    F: Fn(FieldElement) -> bool + Sync,
{
    (1..ctx.order())
        .into_par_iter()
        .map(FieldElement::new)
        .find_first(|&y| pred(y))
}

/// Predicate for the `q = 1 mod 4` construction: `y` a nonzero square of order
/// at least `m + 1` with `y^i - 1` square for `1 <= i <= m`.
pub fn is_case1_witness(ctx: &FieldDescriptor, y: FieldElement, m: u64) -> bool {
    if ctx.quadratic_character(y) != 1 {
        return false;
    }
    let mut power = FieldElement::ONE;
    for _ in 1..=m {
        power = ctx.mul(power, y);
        if !ctx.is_square(ctx.sub(power, FieldElement::ONE)) {
            return false;
        }
    }
    order_at_least(ctx, y, m + 1)
}

pub fn find_y_case1(ctx: &FieldDescriptor, m: u64) -> Result<Option<FieldElement>> {
    if ctx.order() % 4 != 1 {
        return param(format!("case 1 needs q = 1 mod 4, got q = {}", ctx.order()));
    }
    check_even_m(m)?;
    Ok(first_match(ctx, |y| is_case1_witness(ctx, y, m)))
}

/// The smallest-coded `r` with `r^2 = -1`, if `-1` is a square.
pub fn sqrt_minus_one(ctx: &FieldDescriptor) -> Option<FieldElement> {
    ctx.sqrt(ctx.neg(FieldElement::ONE))
}

/// `{ c y^k : -m/2 <= k <= m/2 }`, certified.
fn progression(
    ctx: &FieldDescriptor,
    c: FieldElement,
    y: FieldElement,
    lo: i64,
    hi: i64,
) -> Result<(DiophantineTuple, Certificate)> {
    let mut elements = (lo..=hi)
        .map(|k| Ok(ctx.mul(c, ctx.pow_signed(y, k)?)))
        .collect::<Result<Vec<_>>>()?;
    let want = (hi - lo + 1) as usize;
    elements.sort_unstable();
    elements.dedup();
    if elements.len() != want {
        return Err(Error::Distinctness(format!(
            "powers y^{lo}..y^{hi} of y = {y} give only {} distinct elements",
            elements.len()
        )));
    }
    certify(ctx, &elements)
}

/// `{ r y^k : -m/2 <= k <= m/2 }` with `r^2 = -1`: an (m+1)-tuple.
pub fn build_case1(
    ctx: &FieldDescriptor,
    y: FieldElement,
    m: u64,
) -> Result<(DiophantineTuple, Certificate)> {
    check_even_m(m)?;
    let r = sqrt_minus_one(ctx).ok_or_else(|| {
        Error::Parameter(format!("-1 is not a square in F_{} (needs q = 1 mod 4)", ctx.order()))
    })?;
    let h = (m / 2) as i64;
    progression(ctx, r, y, -h, h)
}

fn phi_conditions(
    ctx: &FieldDescriptor,
    y: FieldElement,
    polys: &[(u64, FpPolynomial)],
) -> bool {
    polys
        .iter()
        .filter(|(i, _)| *i != 0)
        .all(|(_, f)| ctx.is_square(ctx.eval_fp_poly(f, y)))
}

/// Predicate for the cyclotomic construction: `y` a nonzero square of order at
/// least `m + 1` with `Phi_{2i}(y)` square for every `i` in `I(m)`, `i >= 1`.
/// Indices `2i` divisible by `p` are absent from `I(m)`: those values are squares
/// automatically.
pub fn is_case2_witness(ctx: &FieldDescriptor, y: FieldElement, m: u64) -> Result<bool> {
    let polys = index_polynomials(ctx.characteristic(), m)?;
    Ok(ctx.quadratic_character(y) == 1
        && phi_conditions(ctx, y, &polys)
        && order_at_least(ctx, y, m + 1))
}

pub fn find_y_case2(ctx: &FieldDescriptor, m: u64) -> Result<Option<FieldElement>> {
    if !ctx.is_square(ctx.from_int(2)) {
        return param(format!("2 is not a square in F_{}", ctx.order()));
    }
    check_even_m(m)?;
    let polys = index_polynomials(ctx.characteristic(), m)?;
    Ok(first_match(ctx, |y| {
        ctx.quadratic_character(y) == 1
            && phi_conditions(ctx, y, &polys)
            && order_at_least(ctx, y, m + 1)
    }))
}

/// `{ y^k : -m/2 <= k <= m/2 }`: an (m+1)-tuple containing 1.
pub fn build_case2(
    ctx: &FieldDescriptor,
    y: FieldElement,
    m: u64,
) -> Result<(DiophantineTuple, Certificate)> {
    check_even_m(m)?;
    let h = (m / 2) as i64;
    progression(ctx, FieldElement::ONE, y, -h, h)
}

fn check_3mod8(ctx: &FieldDescriptor) -> Result<()> {
    if ctx.order() % 8 != 3 {
        return param(format!("the half construction needs q = 3 mod 8, got q = {}", ctx.order()));
    }
    Ok(())
}

/// Predicate for the half construction: `Phi_{2i}(y)` square for `i` in `I(m)`,
/// `i >= 1`, and `y^0, ..., y^(m/2)` distinct. Neither `y` nor 2 need be squares.
pub fn is_3mod8_witness(ctx: &FieldDescriptor, y: FieldElement, m: u64) -> Result<bool> {
    let polys = index_polynomials(ctx.characteristic(), m)?;
    Ok(phi_conditions(ctx, y, &polys) && order_at_least(ctx, y, m / 2 + 1))
}

pub fn find_y_3mod8(ctx: &FieldDescriptor, m: u64) -> Result<Option<FieldElement>> {
    check_3mod8(ctx)?;
    check_even_m(m)?;
    let polys = index_polynomials(ctx.characteristic(), m)?;
    Ok(first_match(ctx, |y| {
        phi_conditions(ctx, y, &polys) && order_at_least(ctx, y, m / 2 + 1)
    }))
}

/// The largest even `m >= 2` with a qualifying `y` for the half construction,
/// with that `y`. The conditions only grow with `m`, so the search stops at the
/// first failure.
pub fn largest_3mod8(ctx: &FieldDescriptor) -> Result<Option<(u64, FieldElement)>> {
    check_3mod8(ctx)?;
    let mut best = None;
    let mut m = 2;
    while m / 2 + 1 < ctx.order() {
        match find_y_3mod8(ctx, m)? {
            Some(y) => best = Some((m, y)),
            None => break,
        }
        m += 2;
    }
    Ok(best)
}

/// `{ y^k : 0 <= k <= m/2 }`: an (m/2+1)-tuple.
pub fn build_3mod8(
    ctx: &FieldDescriptor,
    y: FieldElement,
    m: u64,
) -> Result<(DiophantineTuple, Certificate)> {
    check_3mod8(ctx)?;
    check_even_m(m)?;
    progression(ctx, FieldElement::ONE, y, 0, (m / 2) as i64)
}

/// The nonzero elements of the subfield of order `sqrt(q)`, for even `n`.
pub fn build_subfield_tuple(ctx: &FieldDescriptor) -> Result<(DiophantineTuple, Certificate)> {
    if ctx.degree() % 2 != 0 {
        return param(format!("F_{} has odd degree and no subfield of order sqrt(q)", ctx.order()));
    }
    let k = ctx.degree() / 2;
    let elements: Vec<FieldElement> = (1..ctx.order())
        .into_par_iter()
        .map(FieldElement::new)
        .filter(|&x| ctx.in_subfield(x, k))
        .collect();
    let want = ctx.characteristic().pow(k) - 1;
    if elements.len() as u64 != want {
        return Err(Error::Distinctness(format!(
            "found {} subfield elements, expected {want}",
            elements.len()
        )));
    }
    certify(ctx, &elements)
}

/// The exact count of `y` counted by `N(m)` and two lower bounds for it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NCount {
    pub exact: u64,
    /// `2^-T (q - (2^(T-1) S - (2^T - 1)) sqrt q) - S`. Not a valid bound in
    /// general: at `m = 2` it exceeds the exact count for every field tried.
    pub analytic_lower_bound: f64,
    /// See [`corrected_n_bound`].
    pub corrected_lower_bound: f64,
}

/// `exact = #{ y : ord y >= m, chi(y) = +1, chi(Phi_{2i}(y)) = +1 for i in I(m) }`
/// by full scan, with both bounds.
pub fn count_n(ctx: &FieldDescriptor, m: u64) -> Result<NCount> {
    let terms = bound_terms(ctx.characteristic(), m)?;
    let polys = index_polynomials(ctx.characteristic(), m)?;
    let exact = (1..ctx.order())
        .into_par_iter()
        .map(FieldElement::new)
        .filter(|&y| {
            polys
                .iter()
                .all(|(_, f)| ctx.quadratic_character(ctx.eval_fp_poly(f, y)) == 1)
                && order_at_least(ctx, y, m)
        })
        .count() as u64;
    Ok(NCount {
        exact,
        analytic_lower_bound: analytic_n_bound(ctx.order(), &terms),
        corrected_lower_bound: corrected_n_bound(ctx.order(), &terms)?,
    })
}

pub fn analytic_n_bound(q: u64, terms: &BoundTerms) -> f64 {
    let t = terms.t as i32;
    let s = terms.s as f64;
    let two_t = 2f64.powi(t);
    let q = q as f64;
    (q - (2f64.powi(t - 1) * s - (two_t - 1.0)) * q.sqrt()) / two_t - s
}

/// `2^-T (q - (2^(T-1) (S+1) - (2^T - 1)) sqrt q) - L - S/2` with
/// `L = 1 + sum_{d < m} phi(d)`.
///
/// The products `f` have degrees summing to `2^(T-1) (S+1)`, since `Phi_0 = x`
/// has degree 1. `L` bounds the `y` that are zero or of order below `m`, each
/// weighing at most `2^T`; at most `S` further `y` have a vanishing factor,
/// each weighing at most `2^(T-1)`.
pub fn corrected_n_bound(q: u64, terms: &BoundTerms) -> Result<f64> {
    let t = terms.t as i32;
    let s = terms.s as f64;
    let two_t = 2f64.powi(t);
    let mut small = 1;
    for d in 1..terms.m {
        small += euler_phi(d)?;
    }
    let q = q as f64;
    Ok((q - (2f64.powi(t - 1) * (s + 1.0) - (two_t - 1.0)) * q.sqrt()) / two_t
        - small as f64
        - s / 2.0)
}

/// The product form `sum_{y, ord y >= m} prod_{i in I(m)} (1 + chi(Phi_{2i}(y)))`
/// evaluated literally, scaled by `2^T` so it stays an integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductForm {
    /// `2^T` times the literal value.
    pub scaled_sum: u128,
    /// `2^T` times the part contributed by `y` with some vanishing factor.
    pub scaled_vanishing: u128,
    pub two_pow_t: u128,
}

pub fn product_form(ctx: &FieldDescriptor, m: u64) -> Result<ProductForm> {
    let terms = bound_terms(ctx.characteristic(), m)?;
    let polys = index_polynomials(ctx.characteristic(), m)?;
    let (scaled_sum, scaled_vanishing) = (1..ctx.order())
        .into_par_iter()
        .map(FieldElement::new)
        .filter(|&y| order_at_least(ctx, y, m))
        .map(|y| {
            let mut prod: u128 = 1;
            let mut vanished = false;
            for (_, f) in &polys {
                let chi = ctx.quadratic_character(ctx.eval_fp_poly(f, y));
                vanished |= chi == 0;
                prod *= (1 + chi) as u128;
            }
            (prod, if vanished { prod } else { 0 })
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(ProductForm {
        scaled_sum,
        scaled_vanishing,
        two_pow_t: 1u128 << terms.t,
    })
}

/// How a tuple was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Case1,
    Case2,
    #[serde(rename = "mod8_3")]
    Mod83,
    Subfield,
    GreedyFallback,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Case1 => "case1",
            Method::Case2 => "case2",
            Method::Mod83 => "mod8_3",
            Method::Subfield => "subfield",
            Method::GreedyFallback => "greedy_fallback",
        })
    }
}

/// Which lower bound, if any, a report is held to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BoundClaim {
    /// `q = 1, 5, 7 mod 8`: `|tuple| >= max(1, floor Q)` is asserted.
    #[serde(rename = "thm1")]
    Thm1,
    #[serde(rename = "thm35")]
    Thm35,
    /// `floor Q <= 0`: any nonempty tuple meets it.
    #[serde(rename = "vacuous")]
    Vacuous,
    /// `q = 3 mod 8`: the half construction, no bound asserted.
    #[serde(rename = "remark-3.6")]
    HalfConstruction,
    /// An explicitly requested method, reported without asserting a bound.
    #[serde(rename = "none")]
    None,
}

impl BoundClaim {
    /// Whether falling short of the bound falsifies a claimed result.
    pub fn is_asserted(self) -> bool {
        matches!(self, BoundClaim::Thm1 | BoundClaim::Thm35)
    }
}

fn serialize_certificate<S: Serializer>(c: &Certificate, s: S) -> Result<S::Ok, S::Error> {
    c.triples().serialize(s)
}

/// One construction run: the tuple, its certificate and the bound bookkeeping.
#[derive(Clone, Debug, Serialize)]
pub struct ConstructionReport {
    pub field: String,
    pub q: u64,
    pub method: Method,
    pub variant: Variant,
    pub m: u64,
    #[serde(rename = "Q")]
    pub q_value: Option<f64>,
    #[serde(rename = "Q_floor")]
    pub q_floor: Option<i64>,
    pub y: Option<FieldElement>,
    pub r: Option<FieldElement>,
    #[serde(rename = "elements")]
    pub tuple: DiophantineTuple,
    #[serde(serialize_with = "serialize_certificate")]
    pub certificate: Certificate,
    pub bound_claim: BoundClaim,
    pub bound_satisfied: bool,
    /// Seeded generator used by the greedy fallback, as `name:seed`.
    pub rng: Option<String>,
}

impl ConstructionReport {
    /// `max(1, floor Q)`, or 1 when no Q applies.
    pub fn required_size(&self) -> u64 {
        self.q_floor.unwrap_or(1).max(1) as u64
    }

    /// Verified, and meets the bound whenever the bound is claimed.
    pub fn passes(&self, ctx: &FieldDescriptor) -> bool {
        self.certificate.recheck(ctx, self.tuple.elements())
            && (self.bound_satisfied || !self.bound_claim.is_asserted())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialises")
    }
}

/// Construction method requested by a caller.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MethodChoice {
    #[default]
    Auto,
    Case1,
    Case2,
    Mod83,
    Subfield,
}

impl FromStr for MethodChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(MethodChoice::Auto),
            "case1" => Ok(MethodChoice::Case1),
            "case2" => Ok(MethodChoice::Case2),
            "mod8-3" | "mod8_3" => Ok(MethodChoice::Mod83),
            "subfield" => Ok(MethodChoice::Subfield),
            other => param(format!("unknown construction method {other:?}")),
        }
    }
}

/// Options for [`construct`].
#[derive(Clone, Copy, Debug, Default)]
pub struct ConstructOptions {
    pub method: MethodChoice,
    pub variant: Variant,
    /// Overrides the `m` derived from Q for explicit methods.
    pub m: Option<u64>,
    pub rng_seed: u64,
}

struct Outcome {
    method: Method,
    m: u64,
    y: Option<FieldElement>,
    r: Option<FieldElement>,
    tuple: DiophantineTuple,
    certificate: Certificate,
    rng: Option<String>,
}

fn even_part(floor: i64) -> i64 {
    if floor % 2 == 0 {
        floor
    } else {
        floor - 1
    }
}

fn try_case1(ctx: &FieldDescriptor, m: u64) -> Result<Option<Outcome>> {
    let Some(y) = find_y_case1(ctx, m)? else {
        return Ok(None);
    };
    let (tuple, certificate) = build_case1(ctx, y, m)?;
    Ok(Some(Outcome {
        method: Method::Case1,
        m,
        y: Some(y),
        r: sqrt_minus_one(ctx),
        tuple,
        certificate,
        rng: None,
    }))
}

fn try_case2(ctx: &FieldDescriptor, m: u64) -> Result<Option<Outcome>> {
    let Some(y) = find_y_case2(ctx, m)? else {
        return Ok(None);
    };
    let (tuple, certificate) = build_case2(ctx, y, m)?;
    Ok(Some(Outcome {
        method: Method::Case2,
        m,
        y: Some(y),
        r: None,
        tuple,
        certificate,
        rng: None,
    }))
}

fn try_3mod8(ctx: &FieldDescriptor, m: Option<u64>) -> Result<Option<Outcome>> {
    let found = match m {
        Some(m) => find_y_3mod8(ctx, m)?.map(|y| (m, y)),
        None => largest_3mod8(ctx)?,
    };
    let Some((m, y)) = found else {
        return Ok(None);
    };
    let (tuple, certificate) = build_3mod8(ctx, y, m)?;
    Ok(Some(Outcome {
        method: Method::Mod83,
        m,
        y: Some(y),
        r: None,
        tuple,
        certificate,
        rng: None,
    }))
}

fn greedy_fallback(ctx: &FieldDescriptor, rng_seed: u64) -> Result<Outcome> {
    let (seed, _) = certify(ctx, &[FieldElement::ONE])?;
    let tuple = greedy_maximal(ctx, &seed, rng_seed);
    let (tuple, certificate) = certify(ctx, tuple.elements())?;
    Ok(Outcome {
        method: Method::GreedyFallback,
        m: tuple.len() as u64,
        y: None,
        r: None,
        tuple,
        certificate,
        rng: Some(format!("{RNG_NAME}:{rng_seed}")),
    })
}

fn subfield_outcome(ctx: &FieldDescriptor) -> Result<Outcome> {
    let (tuple, certificate) = build_subfield_tuple(ctx)?;
    Ok(Outcome {
        method: Method::Subfield,
        m: tuple.len() as u64,
        y: None,
        r: None,
        tuple,
        certificate,
        rng: None,
    })
}

/// The automatic construction for `q > 7`.
///
/// `m` is `floor Q` rounded down to even. `q = 1 mod 4` uses the `r y^k`
/// progression (then the cyclotomic one when `q = 1 mod 8`), `q = 7 mod 8` the
/// cyclotomic one, and `q = 3 mod 8` the half construction at its largest
/// feasible `m`. If `m < 2` or no `y` exists, a seeded greedy maximal tuple
/// grown from `{1}` is returned instead.
pub fn construct_auto(
    ctx: &FieldDescriptor,
    variant: Variant,
    rng_seed: u64,
) -> Result<ConstructionReport> {
    let q = ctx.order();
    let bound = compute_q(q, ctx.characteristic(), variant)?;
    let m = even_part(bound.floor);
    let outcome = match q % 8 {
        3 => try_3mod8(ctx, None)?,
        residue if m >= 2 => {
            let m = m as u64;
            match residue {
                1 => match try_case1(ctx, m)? {
                    Some(o) => Some(o),
                    None => try_case2(ctx, m)?,
                },
                5 => try_case1(ctx, m)?,
                _ => try_case2(ctx, m)?,
            }
        }
        _ => None,
    };
    let outcome = match outcome {
        Some(o) => o,
        None => greedy_fallback(ctx, rng_seed)?,
    };
    let claim = if q % 8 == 3 {
        BoundClaim::HalfConstruction
    } else if bound.floor <= 0 {
        BoundClaim::Vacuous
    } else {
        match variant {
            Variant::Thm1 => BoundClaim::Thm1,
            Variant::Thm35 => BoundClaim::Thm35,
        }
    };
    Ok(finish(ctx, outcome, variant, Some(bound), claim))
}

/// Runs the requested method. Explicit methods use `options.m`, or else
/// `max(2, floor Q rounded down to even)`; they fail with
/// [`Error::NoWitness`] when no `y` exists and assert no bound.
pub fn construct(ctx: &FieldDescriptor, options: ConstructOptions) -> Result<ConstructionReport> {
    if options.method == MethodChoice::Auto {
        return construct_auto(ctx, options.variant, options.rng_seed);
    }
    let q = ctx.order();
    let bound = if q > 7 {
        Some(compute_q(q, ctx.characteristic(), options.variant)?)
    } else {
        None
    };
    let m = options
        .m
        .unwrap_or_else(|| bound.map_or(2, |b| even_part(b.floor).max(2) as u64));
    let none_found = |what: &str| Error::NoWitness(format!("no {what} y for m = {m} in F_{q}"));
    let outcome = match options.method {
        MethodChoice::Case1 => try_case1(ctx, m)?.ok_or_else(|| none_found("case-1"))?,
        MethodChoice::Case2 => try_case2(ctx, m)?.ok_or_else(|| none_found("case-2"))?,
        MethodChoice::Mod83 => try_3mod8(ctx, options.m)?
            .ok_or_else(|| Error::NoWitness(format!("no half-construction y in F_{q}")))?,
        MethodChoice::Subfield => subfield_outcome(ctx)?,
        MethodChoice::Auto => unreachable!(),
    };
    Ok(finish(ctx, outcome, options.variant, bound, BoundClaim::None))
}

fn finish(
    ctx: &FieldDescriptor,
    o: Outcome,
    variant: Variant,
    bound: Option<QBound>,
    claim: BoundClaim,
) -> ConstructionReport {
    let required = bound.map_or(1, |b| b.floor.max(1)) as usize;
    ConstructionReport {
        field: ctx.id(),
        q: ctx.order(),
        method: o.method,
        variant,
        m: o.m,
        q_value: bound.map(|b| b.value),
        q_floor: bound.map(|b| b.floor),
        y: o.y,
        r: o.r,
        bound_satisfied: o.tuple.len() >= required,
        tuple: o.tuple,
        certificate: o.certificate,
        bound_claim: claim,
        rng: o.rng,
    }
}
