//! Dense univariate polynomials over a prime field F_p.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::nt::{inv_mod, pow_mod};

/// A polynomial over F_p with coefficients stored low-to-high.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is the
/// empty vector and equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPolynomial {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPolynomial {
    /// Builds a polynomial from raw coefficients (low-to-high), reducing each
    /// modulo `p` and trimming trailing zeros.
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut f = FpPolynomial {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        f.trim();
        f
    }

    pub fn from_signed(p: u64, coeffs: &[i64]) -> Self {
        let m = p as i64;
        Self::new(p, coeffs.iter().map(|&c| c.rem_euclid(m) as u64).collect())
    }

    pub fn zero(p: u64) -> Self {
        FpPolynomial { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::constant(p, 1)
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Self::new(p, vec![c])
    }

    /// The polynomial `x`.
    pub fn x(p: u64) -> Self {
        Self::monomial(p, 1, 1)
    }

    /// `c * x^deg`.
    pub fn monomial(p: u64, deg: usize, c: u64) -> Self {
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = c;
        Self::new(p, coeffs)
    }

    /// The monic polynomial of degree `n` whose non-leading coefficients are the
    /// base-`p` digits of `code`.
    pub fn monic_from_code(p: u64, n: usize, mut code: u64) -> Self {
        let mut coeffs = Vec::with_capacity(n + 1);
        for _ in 0..n {
            coeffs.push(code % p);
            code /= p;
        }
        coeffs.push(1);
        Self::new(p, coeffs)
    }

    /// Base-`p` encoding of the non-leading coefficients.
    pub fn nonleading_code(&self) -> u64 {
        let n = self.coeffs.len().saturating_sub(1);
        self.coeffs[..n].iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    /// Evaluates at a point of F_p by Horner's rule.
    pub fn eval(&self, a: u64) -> u64 {
        let a = a % self.p;
        self.coeffs.iter().rev().fold(0, |acc, &c| (acc * a + c) % self.p)
    }

    pub fn scale(&self, c: u64) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|&a| a * (c % self.p)).collect())
    }

    /// Scales to leading coefficient 1. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading() {
            0 | 1 => self.clone(),
            lc => self.scale(inv_mod(lc, self.p).expect("p is prime")),
        }
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (i as u64 % self.p) * c)
            .collect();
        Self::new(self.p, coeffs)
    }

    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    ///
    /// Panics if `d` is zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let p = self.p;
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self::zero(p), self.clone());
        }
        let lc_inv = inv_mod(d.leading(), p).expect("p is prime");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k] * lc_inv % p;
            if c == 0 {
                continue;
            }
            quot[k - dd] = c;
            for (j, &dj) in d.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = (rem[idx] + p - c * dj % p) % p;
            }
        }
        rem.truncate(dd);
        (Self::new(p, quot), Self::new(p, rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// `self / d` when the division is exact.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, f: &Self) -> bool {
        f.rem(self).is_zero()
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).rem(m);
            }
        }
        acc
    }

    /// `x^(p^k) mod self`, by `k` successive Frobenius steps.
    fn x_frobenius(&self, k: u32) -> Self {
        let mut acc = Self::x(self.p).rem(self);
        for _ in 0..k {
            acc = acc.pow_mod(self.p, self);
        }
        acc
    }

    /// Irreducibility by the distinct-degree criterion: `x^(p^n) = x mod f` and
    /// `gcd(x^(p^(n/r)) - x, f) = 1` for every prime `r | n`.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n as u32,
        };
        let f = self.monic();
        let x = Self::x(self.p);
        if f.x_frobenius(n) != x.rem(&f) {
            return false;
        }
        crate::nt::prime_divisors(n as u64).into_iter().all(|r| {
            let h = &f.x_frobenius(n / r as u32) - &x;
            h.gcd(&f).is_one()
        })
    }

    /// `gcd(f, f') = 1`. Constants count as square-free; the zero polynomial does not.
    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_one()
    }

    /// Square-free factorisation of a nonzero polynomial: pairs `(g_i, e_i)` with
    /// the `g_i` monic, square-free and pairwise coprime such that
    /// `monic(self) = prod g_i^e_i`. Works in characteristic `p` by extracting the
    /// p-th root when the derivative vanishes.
    pub fn squarefree_factorization(&self) -> Vec<(Self, u64)> {
        assert!(!self.is_zero(), "square-free factorisation of zero");
        let mut out = Vec::new();
        self.monic().sff_into(1, &mut out);
        out
    }

    fn sff_into(&self, scale: u64, out: &mut Vec<(Self, u64)>) {
        if self.degree() == Some(0) {
            return;
        }
        let p = self.p;
        let mut c = self.gcd(&self.derivative());
        let mut w = self.exact_div(&c).expect("gcd divides");
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c);
            let fac = w.exact_div(&y).expect("gcd divides");
            if !fac.is_one() {
                out.push((fac, i * scale));
            }
            c = c.exact_div(&y).expect("gcd divides");
            w = y;
            i += 1;
        }
        if !c.is_one() {
            // c'(x) = 0, so c(x) = h(x^p) = h(x)^p over F_p.
            let root: Vec<u64> = c.coeffs.iter().step_by(p as usize).copied().collect();
            Self::new(p, root).sff_into(scale * p, out);
        }
    }

    /// The product of the distinct monic irreducible factors.
    pub fn radical(&self) -> Self {
        self.squarefree_factorization()
            .into_iter()
            .fold(Self::one(self.p), |acc, (g, _)| &acc * &g)
    }

    /// Whether `self = g^2` for some `g` in F_p[x]: every irreducible factor has
    /// even multiplicity and the leading coefficient is a square mod `p`.
    /// The zero polynomial is `0^2`.
    pub fn is_perfect_square(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        let lc_square = pow_mod(self.leading(), (self.p - 1) / 2, self.p) == 1;
        lc_square
            && self
                .squarefree_factorization()
                .iter()
                .all(|(_, e)| e % 2 == 0)
    }
}

impl fmt::Debug for FpPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self, self.p)
    }
}

impl fmt::Display for FpPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &FpPolynomial {
    type Output = FpPolynomial;
    fn add(self, rhs: &FpPolynomial) -> FpPolynomial {
        let p = self.p;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| (self.coeff(i) + rhs.coeff(i)) % p).collect();
        FpPolynomial::new(p, coeffs)
    }
}

impl Sub for &FpPolynomial {
    type Output = FpPolynomial;
    fn sub(self, rhs: &FpPolynomial) -> FpPolynomial {
        let p = self.p;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| (self.coeff(i) + p - rhs.coeff(i)) % p).collect();
        FpPolynomial::new(p, coeffs)
    }
}

impl Neg for &FpPolynomial {
    type Output = FpPolynomial;
    fn neg(self) -> FpPolynomial {
        let p = self.p;
        FpPolynomial::new(p, self.coeffs.iter().map(|&c| (p - c) % p).collect())
    }
}

impl Mul for &FpPolynomial {
    type Output = FpPolynomial;
    fn mul(self, rhs: &FpPolynomial) -> FpPolynomial {
        let p = self.p;
        if self.is_zero() || rhs.is_zero() {
            return FpPolynomial::zero(p);
        }
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % p;
            }
        }
        FpPolynomial::new(p, out)
    }
}
