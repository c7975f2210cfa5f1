//! Exact arithmetic in F_{p^n}.
//!
//! Elements are integer codes in `[0, q)`: the element `sum c_i t^i` (reduced
//! modulo the field's irreducible modulus) has code `sum c_i p^i`. Code 0 is the
//! zero element and code 1 the identity; the prime subfield is codes `0..p`.
//!
//! Fields with `n > 1` and `q <= TABLE_LIMIT` carry discrete log/antilog tables
//! built from a primitive element, which turns multiplication into two lookups.
//! Larger extension fields multiply coefficient vectors and reduce directly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::nt;
use crate::poly::FpPolynomial;

/// Largest field order accepted: every intermediate fits in 64 bits.
pub const MAX_ORDER: u64 = 1 << 31;

/// Extension fields up to this order get log/antilog tables.
pub const TABLE_LIMIT: u64 = 1 << 20;

/// `3^20 > 2^31`, so no admissible field has degree above 19.
const MAX_DEGREE: usize = 20;

/// An element of F_q, identified by its base-`p` coefficient code.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Wraps a raw code. Use [`FieldDescriptor::element`] to validate untrusted input.
    pub const fn new(code: u64) -> Self {
        FieldElement(code)
    }

    pub const fn code(self) -> u64 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Sum, difference and product of two elements, as returned by [`FieldDescriptor::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArithResult {
    pub sum: FieldElement,
    pub difference: FieldElement,
    pub product: FieldElement,
}

#[derive(Clone)]
struct LogTables {
    /// `log[code]` for nonzero codes; `log[0]` is unused.
    log: Vec<u32>,
    /// `exp[k] = g^k` for `k` in `[0, 2(q-1))`, doubled to skip a reduction.
    exp: Vec<u32>,
}

/// The finite field F_q with `q = p^n`, `p` odd, realised as F_p[t]/(modulus).
///
/// Immutable once built; share it freely between threads.
#[derive(Clone)]
pub struct FieldDescriptor {
    p: u64,
    n: u32,
    q: u64,
    modulus: FpPolynomial,
    /// Non-leading modulus coefficients, low-to-high.
    reduction: Vec<u64>,
    /// Distinct primes dividing `q - 1`.
    group_primes: Vec<u64>,
    /// Smallest-coded quadratic non-residue (for square roots).
    non_residue: FieldElement,
    tables: Option<LogTables>,
}

/// Returns the monic irreducible polynomial of degree `n` over F_p whose
/// non-leading coefficients have the smallest base-`p` code.
///
/// For `n = 1` this is the polynomial `t`.
pub fn find_irreducible(p: u64, n: u32) -> Result<FpPolynomial> {
    check_characteristic(p)?;
    if n == 0 {
        return param("extension degree must be at least 1");
    }
    let q = checked_order(p, n)?;
    let count = q; // number of monic polynomials of degree n
    (0..count)
        .map(|code| FpPolynomial::monic_from_code(p, n as usize, code))
        .find(|f| f.is_irreducible())
        .ok_or_else(|| Error::Parameter(format!("no irreducible of degree {n} over F_{p}")))
}

fn check_characteristic(p: u64) -> Result<()> {
    if p == 2 || !nt::is_prime(p) {
        return param(format!("characteristic {p} is not an odd prime"));
    }
    Ok(())
}

fn checked_order(p: u64, n: u32) -> Result<u64> {
    let mut q: u64 = 1;
    for _ in 0..n {
        q = q
            .checked_mul(p)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| Error::SizePolicy(format!("{p}^{n} exceeds 2^31")))?;
    }
    Ok(q)
}

impl FieldDescriptor {
    /// F_{p^n} with the canonical (lex-smallest irreducible) modulus.
    pub fn new(p: u64, n: u32) -> Result<Self> {
        let modulus = find_irreducible(p, n)?;
        Self::with_modulus(p, n, modulus)
    }

    /// F_{p^n} with a caller-chosen monic irreducible modulus of degree `n`.
    /// For `n = 1` the modulus must be `t`.
    pub fn with_modulus(p: u64, n: u32, modulus: FpPolynomial) -> Result<Self> {
        check_characteristic(p)?;
        if n == 0 {
            return param("extension degree must be at least 1");
        }
        let q = checked_order(p, n)?;
        if modulus.characteristic() != p
            || modulus.degree() != Some(n as usize)
            || !modulus.is_monic()
        {
            return param(format!("modulus {modulus} is not monic of degree {n} over F_{p}"));
        }
        if n == 1 && modulus != FpPolynomial::x(p) {
            return param("a degree-1 field uses the modulus t");
        }
        if !modulus.is_irreducible() {
            return param(format!("modulus {modulus} is reducible over F_{p}"));
        }
        let reduction = modulus.coeffs()[..n as usize].to_vec();
        let mut field = FieldDescriptor {
            p,
            n,
            q,
            modulus,
            reduction,
            group_primes: nt::prime_divisors(q - 1),
            non_residue: FieldElement::ZERO,
            tables: None,
        };
        if n > 1 && q <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        field.non_residue = (2..q)
            .map(FieldElement)
            .find(|&a| field.quadratic_character(a) == -1)
            .expect("odd q has non-residues");
        Ok(field)
    }

    /// Parses `p^n`, `p^n/modcode`, or a bare prime `p`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (base, modcode) = match spec.split_once('/') {
            Some((b, m)) => (b, Some(m)),
            None => (spec, None),
        };
        let (p, n) = match base.split_once('^') {
            Some((p, n)) => (p, n),
            None => (base, "1"),
        };
        let p: u64 = p
            .trim()
            .parse()
            .map_err(|_| Error::Parameter(format!("bad characteristic in field spec {spec:?}")))?;
        let n: u32 = n
            .trim()
            .parse()
            .map_err(|_| Error::Parameter(format!("bad degree in field spec {spec:?}")))?;
        match modcode {
            None => Self::new(p, n),
            Some(code) => {
                let code: u64 = code
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parameter(format!("bad modulus code in {spec:?}")))?;
                check_characteristic(p)?;
                let q = checked_order(p, n)?;
                if code >= q {
                    return param(format!("modulus code {code} out of range for {p}^{n}"));
                }
                let modulus = FpPolynomial::monic_from_code(p, n as usize, code);
                Self::with_modulus(p, n, modulus)
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &FpPolynomial {
        &self.modulus
    }

    /// Prime factors of `|F_q^*| = q - 1`.
    pub fn group_order_primes(&self) -> &[u64] {
        &self.group_primes
    }

    /// Field identity `p^n/modulus-code`.
    pub fn id(&self) -> String {
        format!("{}^{}/{}", self.p, self.n, self.modulus.nonleading_code())
    }

    /// Validates a raw code.
    pub fn element(&self, code: u64) -> Result<FieldElement> {
        if code >= self.q {
            return Err(Error::ElementRange { code, q: self.q });
        }
        Ok(FieldElement(code))
    }

    /// The image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.p as i64) as u64)
    }

    /// Nonzero elements in ascending code order.
    pub fn nonzero(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (1..self.q).map(FieldElement)
    }

    /// Base-`p` coefficients of an element, low-to-high (length `n`).
    pub fn coefficients(&self, a: FieldElement) -> Vec<u64> {
        let mut d = [0u64; MAX_DEGREE];
        self.decode(a, &mut d);
        d[..self.n as usize].to_vec()
    }

    fn decode(&self, a: FieldElement, out: &mut [u64; MAX_DEGREE]) {
        let mut c = a.0;
        for slot in out.iter_mut().take(self.n as usize) {
            *slot = c % self.p;
            c /= self.p;
        }
    }

    fn encode(&self, digits: &[u64]) -> FieldElement {
        FieldElement(digits.iter().rev().fold(0, |acc, &c| acc * self.p + c))
    }

    /// Checked sum, difference and product of two raw codes.
    pub fn arith(&self, a: u64, b: u64) -> Result<ArithResult> {
        let a = self.element(a)?;
        let b = self.element(b)?;
        Ok(ArithResult {
            sum: self.add(a, b),
            difference: self.sub(a, b),
            product: self.mul(a, b),
        })
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.n == 1 {
            return FieldElement((a.0 + b.0) % self.p);
        }
        let (mut x, mut y) = ([0; MAX_DEGREE], [0; MAX_DEGREE]);
        self.decode(a, &mut x);
        self.decode(b, &mut y);
        for i in 0..self.n as usize {
            x[i] = (x[i] + y[i]) % self.p;
        }
        self.encode(&x[..self.n as usize])
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.n == 1 {
            return FieldElement((self.p - a.0) % self.p);
        }
        let mut x = [0; MAX_DEGREE];
        self.decode(a, &mut x);
        for c in x.iter_mut().take(self.n as usize) {
            *c = (self.p - *c) % self.p;
        }
        self.encode(&x[..self.n as usize])
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.n == 1 {
            return FieldElement(a.0 * b.0 % self.p);
        }
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let k = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
                FieldElement(t.exp[k] as u64)
            }
            None => self.mul_poly(a, b),
        }
    }

    /// Multiplication by coefficient convolution and reduction modulo the modulus.
    fn mul_poly(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let n = self.n as usize;
        let p = self.p;
        let (mut x, mut y) = ([0; MAX_DEGREE], [0; MAX_DEGREE]);
        self.decode(a, &mut x);
        self.decode(b, &mut y);
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
            }
        }
        // t^n = -sum f_j t^j
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (j, &f) in self.reduction.iter().enumerate() {
                let idx = k - n + j;
                prod[idx] = (prod[idx] + p - c * f % p) % p;
            }
        }
        self.encode(&prod[..n])
    }

    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    /// Square-and-multiply exponentiation for a nonnegative exponent.
    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    /// Exponentiation with a signed exponent; `a^-e` is `inv(a)^e`.
    pub fn pow_signed(&self, a: FieldElement, e: i64) -> Result<FieldElement> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        Ok(if self.n == 1 {
            FieldElement(nt::inv_mod(a.0, self.p).expect("p is prime"))
        } else if let Some(t) = &self.tables {
            let l = t.log[a.0 as usize] as usize;
            FieldElement(t.exp[(self.q as usize - 1 - l) % (self.q as usize - 1)] as u64)
        } else {
            self.pow(a, self.q - 2)
        })
    }

    /// Quadratic character: 0 at zero, +1 on nonzero squares, -1 otherwise
    /// (Euler's criterion `a^((q-1)/2)`).
    pub fn quadratic_character(&self, a: FieldElement) -> i8 {
        if a.is_zero() {
            return 0;
        }
        if self.pow(a, (self.q - 1) / 2) == FieldElement::ONE {
            1
        } else {
            -1
        }
    }

    /// Zero counts as a square.
    pub fn is_square(&self, a: FieldElement) -> bool {
        self.quadratic_character(a) >= 0
    }

    /// Multiplicative order, by stripping prime factors of `q - 1`.
    pub fn mult_order(&self, a: FieldElement) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::Domain("order of zero".into()));
        }
        let mut ord = self.q - 1;
        for &r in &self.group_primes {
            while ord % r == 0 && self.pow(a, ord / r) == FieldElement::ONE {
                ord /= r;
            }
        }
        Ok(ord)
    }

    /// A square root of `a`, or `None` for non-squares. Of the two roots `s, -s`
    /// the one with the smaller code is returned (Tonelli-Shanks).
    pub fn sqrt(&self, a: FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return Some(a);
        }
        if self.quadratic_character(a) != 1 {
            return None;
        }
        let mut s = 0;
        let mut t = self.q - 1;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        let mut c = self.pow(self.non_residue, t);
        let mut x = self.pow(a, (t + 1) / 2);
        let mut b = self.pow(a, t);
        let mut m = s;
        while b != FieldElement::ONE {
            let mut i = 0;
            let mut z = b;
            while z != FieldElement::ONE {
                z = self.square(z);
                i += 1;
            }
            let mut w = c;
            for _ in 0..(m - i - 1) {
                w = self.square(w);
            }
            x = self.mul(x, w);
            c = self.square(w);
            b = self.mul(b, c);
            m = i;
        }
        let neg = self.neg(x);
        Some(x.min(neg))
    }

    /// Whether `a` lies in the subfield of order `p^k` (`a^(p^k) = a`).
    pub fn in_subfield(&self, a: FieldElement, k: u32) -> bool {
        self.pow(a, self.p.pow(k)) == a
    }

    /// Evaluates a polynomial with F_p coefficients at a point of F_q.
    pub fn eval_fp_poly(&self, f: &FpPolynomial, x: FieldElement) -> FieldElement {
        f.coeffs()
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| {
                self.add(self.mul(acc, x), FieldElement(c))
            })
    }

    fn build_tables(&self) -> LogTables {
        let q = self.q as usize;
        let g = (2..self.q)
            .map(FieldElement)
            .find(|&g| self.is_primitive_poly(g))
            .expect("F_q^* is cyclic");
        let mut log = vec![0u32; q];
        let mut exp = vec![0u32; 2 * (q - 1)];
        let mut x = FieldElement::ONE;
        for k in 0..q - 1 {
            exp[k] = x.0 as u32;
            exp[k + q - 1] = x.0 as u32;
            log[x.0 as usize] = k as u32;
            x = self.mul_poly(x, g);
        }
        debug_assert_eq!(x, FieldElement::ONE);
        LogTables { log, exp }
    }

    fn is_primitive_poly(&self, g: FieldElement) -> bool {
        let pow = |mut e: u64| {
            let mut base = g;
            let mut acc = FieldElement::ONE;
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.mul_poly(acc, base);
                }
                base = self.mul_poly(base, base);
                e >>= 1;
            }
            acc
        };
        self.group_primes
            .iter()
            .all(|&r| pow((self.q - 1) / r) != FieldElement::ONE)
    }

    /// Multiplication that always takes the coefficient route, for cross-checks.
    #[doc(hidden)]
    pub fn mul_reference(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.n == 1 {
            return self.mul(a, b);
        }
        self.mul_poly(a, b)
    }
}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{} [{}]", self.q, self.id())
    }
}

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n && self.modulus == other.modulus
    }
}

impl Eq for FieldDescriptor {}

impl FromStr for FieldDescriptor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(c: u64) -> FieldElement {
        FieldElement::new(c)
    }

    #[test]
    fn canonical_moduli() {
        assert_eq!(find_irreducible(3, 2).unwrap(), FpPolynomial::new(3, vec![1, 0, 1]));
        assert_eq!(find_irreducible(5, 2).unwrap(), FpPolynomial::new(5, vec![2, 0, 1]));
        assert_eq!(find_irreducible(7, 1).unwrap(), FpPolynomial::x(7));
        assert!(find_irreducible(9, 2).is_err());
        assert!(find_irreducible(2, 3).is_err());
        assert!(find_irreducible(3, 0).is_err());
    }

    #[test]
    fn field_identity_string() {
        assert_eq!(FieldDescriptor::new(3, 2).unwrap().id(), "3^2/1");
        assert_eq!(FieldDescriptor::new(7, 1).unwrap().id(), "7^1/0");
        let f = FieldDescriptor::parse("3^2/1").unwrap();
        assert_eq!(f, FieldDescriptor::new(3, 2).unwrap());
        assert_eq!(FieldDescriptor::parse("23").unwrap().order(), 23);
        // t^2 + 2t + 2 (code 2 + 2*3 = 8) is also irreducible over F_3
        assert_eq!(FieldDescriptor::parse("3^2/8").unwrap().id(), "3^2/8");
        assert!(FieldDescriptor::parse("5^2/1").is_err()); // t^2 + 1 reducible mod 5
        assert!(FieldDescriptor::parse("7^1/3").is_err());
        assert!(FieldDescriptor::parse("3^x").is_err());
        assert!(matches!(FieldDescriptor::new(3, 20), Err(Error::SizePolicy(_))));
    }

    #[test]
    fn arith_examples() {
        let f9 = FieldDescriptor::new(3, 2).unwrap();
        assert_eq!(f9.arith(3, 3).unwrap().product, e(2));
        let f5 = FieldDescriptor::new(5, 1).unwrap();
        assert_eq!(f5.arith(3, 4).unwrap().sum, e(2));
        assert_eq!(f5.arith(3, 4).unwrap().difference, e(4));
        assert!(matches!(f5.arith(5, 1), Err(Error::ElementRange { code: 5, q: 5 })));
        for x in f9.nonzero() {
            assert_eq!(f9.mul(x, FieldElement::ONE), x);
        }
    }

    #[test]
    fn inverse_and_power_examples() {
        let f5 = FieldDescriptor::new(5, 1).unwrap();
        assert_eq!(f5.inv(e(2)).unwrap(), e(3));
        assert!(matches!(f5.inv(e(0)), Err(Error::Domain(_))));
        let f7 = FieldDescriptor::new(7, 1).unwrap();
        assert_eq!(f7.pow_signed(e(3), -1).unwrap(), e(5));
        assert!(f7.pow_signed(e(0), -2).is_err());
        let f9 = FieldDescriptor::new(3, 2).unwrap();
        assert!(f9.nonzero().all(|x| f9.pow(x, 8) == FieldElement::ONE));
    }

    #[test]
    fn character_examples() {
        let f5 = FieldDescriptor::new(5, 1).unwrap();
        let f7 = FieldDescriptor::new(7, 1).unwrap();
        let f9 = FieldDescriptor::new(3, 2).unwrap();
        assert_eq!(f5.quadratic_character(e(4)), 1);
        assert_eq!(f7.quadratic_character(e(3)), -1);
        assert_eq!(f9.quadratic_character(e(0)), 0);
        assert!(f9.is_square(e(0)));
        assert!(f9.is_square(e(2)));
        assert!(!f7.is_square(e(5)));
    }

    #[test]
    fn order_examples() {
        let f7 = FieldDescriptor::new(7, 1).unwrap();
        assert_eq!(f7.mult_order(e(3)).unwrap(), 6);
        assert_eq!(f7.mult_order(e(1)).unwrap(), 1);
        let f23 = FieldDescriptor::new(23, 1).unwrap();
        assert_eq!(f23.mult_order(e(2)).unwrap(), 11);
        assert!(f23.mult_order(e(0)).is_err());
    }

    #[test]
    fn table_and_coefficient_products_agree() {
        for (p, n) in [(3, 2), (3, 5), (5, 3), (7, 2), (11, 2)] {
            let f = FieldDescriptor::new(p, n).unwrap();
            assert!(f.tables.is_some());
            for a in f.nonzero().step_by(7) {
                for b in f.nonzero().step_by(5) {
                    assert_eq!(f.mul(a, b), f.mul_reference(a, b));
                }
            }
        }
    }

    #[test]
    fn untabled_extension_field() {
        // 3^13 > TABLE_LIMIT: exercise the direct multiplication path.
        let f = FieldDescriptor::new(3, 13).unwrap();
        assert!(f.tables.is_none());
        let a = e(123_456);
        let ai = f.inv(a).unwrap();
        assert_eq!(f.mul(a, ai), FieldElement::ONE);
        assert_eq!(f.pow(a, f.order() - 1), FieldElement::ONE);
        let s = f.square(a);
        let r = f.sqrt(s).unwrap();
        assert_eq!(f.square(r), s);
    }

    #[test]
    fn sqrt_is_canonical() {
        for (p, n) in [(5, 1), (7, 1), (13, 1), (17, 1), (3, 2), (3, 3), (5, 2), (41, 1)] {
            let f = FieldDescriptor::new(p, n).unwrap();
            for x in f.nonzero() {
                let s = f.square(x);
                let r = f.sqrt(s).unwrap();
                assert_eq!(f.square(r), s);
                assert_eq!(r, x.min(f.neg(x)));
            }
        }
    }

    #[test]
    fn prime_subfield_membership() {
        let f = FieldDescriptor::new(5, 2).unwrap();
        let sub: Vec<u64> = f.nonzero().filter(|&x| f.in_subfield(x, 1)).map(|x| x.code()).collect();
        assert_eq!(sub, vec![1, 2, 3, 4]);
    }
}
