//! Cyclotomic polynomials over Z and over F_p.
//!
//! Both routes divide `x^n - 1` exactly by `Phi_d` for each proper divisor `d`
//! of `n`, in ascending order of `d`. Over Z every coefficient operation is
//! overflow-checked; over F_p the division happens natively, so there is no size
//! cap on `n`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{param, Error, Result};
use crate::nt;
use crate::poly::FpPolynomial;

/// Largest index accepted by [`cyclo_int`].
pub const INT_INDEX_LIMIT: u64 = 3000;

/// A polynomial with 64-bit signed integer coefficients, low-to-high, without
/// trailing zeros. Arithmetic reports overflow instead of wrapping.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn one() -> Self {
        Self::new(vec![1])
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![0; n + 1];
        c[0] = -1;
        c[n] = 1;
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    /// Largest absolute coefficient.
    pub fn height(&self) -> u64 {
        self.coeffs.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Ok(Self::new(Vec::new()));
        }
        let overflow = || Error::Overflow("multiplying integer polynomials".into());
        let mut out = vec![0i64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                let t = a.checked_mul(b).ok_or_else(overflow)?;
                out[i + j] = out[i + j].checked_add(t).ok_or_else(overflow)?;
            }
        }
        Ok(Self::new(out))
    }

    /// Exact division by a monic divisor. A nonzero remainder is an error.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        if !d.is_monic() {
            return param("integer division needs a monic divisor");
        }
        let overflow = || Error::Overflow("dividing integer polynomials".into());
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return if self.coeffs.is_empty() {
                Ok(self.clone())
            } else {
                Err(Error::Domain("inexact integer polynomial division".into()))
            };
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0i64; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k];
            if c == 0 {
                continue;
            }
            quot[k - dd] = c;
            for (j, &dj) in d.coeffs.iter().enumerate() {
                let t = c.checked_mul(dj).ok_or_else(overflow)?;
                rem[k - dd + j] = rem[k - dd + j].checked_sub(t).ok_or_else(overflow)?;
            }
        }
        if rem.iter().any(|&c| c != 0) {
            return Err(Error::Domain("inexact integer polynomial division".into()));
        }
        Ok(Self::new(quot))
    }

    pub fn reduce_mod(&self, p: u64) -> FpPolynomial {
        FpPolynomial::from_signed(p, &self.coeffs)
    }
}

/// Euler's totient by trial-division factorisation.
pub fn euler_phi(n: u64) -> Result<u64> {
    if n == 0 {
        return param("euler_phi is defined for n >= 1");
    }
    Ok(nt::factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1)))
}

/// Memo of computed cyclotomic polynomials, safe for concurrent readers and
/// writers. A hit returns exactly what a fresh computation would.
#[derive(Default)]
pub struct CycloCache {
    int: RwLock<HashMap<u64, Arc<IntPolynomial>>>,
    modp: RwLock<HashMap<(u64, u64), Arc<FpPolynomial>>>,
}

impl CycloCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide cache used by [`cyclo_int`] and [`cyclo_mod`].
    pub fn global() -> &'static CycloCache {
        static CACHE: OnceLock<CycloCache> = OnceLock::new();
        CACHE.get_or_init(CycloCache::new)
    }

    pub fn int(&self, n: u64) -> Result<Arc<IntPolynomial>> {
        if n == 0 {
            return param("cyclotomic index must be at least 1");
        }
        if n > INT_INDEX_LIMIT {
            return param(format!(
                "integer cyclotomic polynomials are capped at n <= {INT_INDEX_LIMIT}"
            ));
        }
        if let Some(f) = self.int.read().unwrap().get(&n) {
            return Ok(f.clone());
        }
        let mut f = IntPolynomial::x_pow_minus_one(n as usize);
        for d in nt::divisors(n).into_iter().filter(|&d| d < n) {
            f = f.exact_div(&*self.int(d)?)?;
        }
        let f = Arc::new(f);
        self.int.write().unwrap().insert(n, f.clone());
        Ok(f)
    }

    pub fn modp(&self, p: u64, n: u64) -> Result<Arc<FpPolynomial>> {
        if !nt::is_prime(p) || p == 2 {
            return param(format!("{p} is not an odd prime"));
        }
        if n == 0 {
            return param("cyclotomic index must be at least 1");
        }
        if let Some(f) = self.modp.read().unwrap().get(&(p, n)) {
            return Ok(f.clone());
        }
        let mut f = &FpPolynomial::monomial(p, n as usize, 1) - &FpPolynomial::one(p);
        for d in nt::divisors(n).into_iter().filter(|&d| d < n) {
            f = f
                .exact_div(&*self.modp(p, d)?)
                .expect("Phi_d divides x^n - 1 for d | n");
        }
        let f = Arc::new(f);
        self.modp.write().unwrap().insert((p, n), f.clone());
        Ok(f)
    }
}

/// `Phi_n` over Z for `1 <= n <= INT_INDEX_LIMIT`.
pub fn cyclo_int(n: u64) -> Result<IntPolynomial> {
    CycloCache::global().int(n).map(|f| (*f).clone())
}

/// `Phi_n` over F_p, computed natively modulo `p`.
pub fn cyclo_mod(p: u64, n: u64) -> Result<FpPolynomial> {
    CycloCache::global().modp(p, n).map(|f| (*f).clone())
}

/// Outcome of the three structural clauses for `Phi_n`, `Phi_n'` modulo `p`.
/// A clause that does not apply to the given indices holds vacuously.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhiProperties {
    /// For each index divisible by `p`, `Phi` is a perfect square mod `p`.
    pub is_square_when_p_divides: bool,
    /// For each index coprime to `p`, `Phi` is square-free mod `p`.
    pub is_squarefree_when_p_coprime: bool,
    /// If both indices are coprime to `p` and distinct, the two are coprime.
    pub coprime_pair: bool,
}

impl PhiProperties {
    pub fn all_hold(&self) -> bool {
        self.is_square_when_p_divides && self.is_squarefree_when_p_coprime && self.coprime_pair
    }
}

/// Checks the squareness, square-freeness and coprimality clauses by polynomial
/// gcds over F_p.
pub fn phi_properties_check(p: u64, n: u64, n2: Option<u64>) -> Result<PhiProperties> {
    let mut out = PhiProperties {
        is_square_when_p_divides: true,
        is_squarefree_when_p_coprime: true,
        coprime_pair: true,
    };
    let indices: Vec<u64> = std::iter::once(n).chain(n2).collect();
    for &k in &indices {
        let phi = cyclo_mod(p, k)?;
        if k % p == 0 {
            out.is_square_when_p_divides &= phi.is_perfect_square();
        } else {
            out.is_squarefree_when_p_coprime &= phi.is_squarefree();
        }
    }
    if let Some(n2) = n2 {
        if n != n2 && n % p != 0 && n2 % p != 0 {
            out.coprime_pair = cyclo_mod(p, n)?.gcd(&cyclo_mod(p, n2)?).is_one();
        }
    }
    Ok(out)
}

/// The closed form of `Phi_n mod p` when `p | n`: writing `n = p^m r` with
/// `p` not dividing `r`, `Phi_n = Phi_r^((p-1) p^(m-1))`. Returns `None` if `p`
/// does not divide `n`.
pub fn p_divisible_closed_form(p: u64, n: u64) -> Result<Option<FpPolynomial>> {
    if n == 0 || n % p != 0 {
        return Ok(None);
    }
    let mut r = n;
    let mut m = 0;
    while r % p == 0 {
        r /= p;
        m += 1;
    }
    let e = (p - 1) * p.pow(m - 1);
    Ok(Some(cyclo_mod(p, r)?.pow(e)))
}
