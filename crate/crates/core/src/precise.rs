//! Fixed-point natural logarithms with 256 fractional bits, used to re-evaluate
//! the bound Q when its double-precision value lands next to an integer.

use num_bigint::BigInt;
use num_integer::Integer;

const FRAC: u32 = 256;

fn one() -> BigInt {
    BigInt::from(1) << FRAC
}

fn mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b) >> FRAC
}

fn div(a: &BigInt, b: &BigInt) -> BigInt {
    (a << FRAC) / b
}

/// `atanh(z)` for `|z| <= 1/3` by its odd power series.
fn atanh(z: &BigInt) -> BigInt {
    let z2 = mul(z, z);
    let mut power = z.clone();
    let mut sum = BigInt::from(0);
    let mut k = 1u32;
    while power != BigInt::from(0) {
        sum += &power / k;
        power = mul(&power, &z2);
        k += 2;
    }
    sum
}

fn ln2() -> BigInt {
    atanh(&(one() / 3)) * 2
}

/// `ln(x)` for a positive fixed-point `x`.
fn ln_fixed(x: &BigInt) -> BigInt {
    assert!(x > &BigInt::from(0), "logarithm of a non-positive value");
    // x = 2^k y with y in [1, 2)
    let k = x.bits() as i64 - 1 - FRAC as i64;
    let y = if k >= 0 { x >> k as usize } else { x << (-k) as usize };
    let z = div(&(&y - one()), &(&y + one()));
    ln2() * k + atanh(&z) * 2
}

/// `ln(n)` as a fixed-point value.
fn ln_int(n: u64) -> BigInt {
    ln_fixed(&(BigInt::from(n) << FRAC))
}

/// `floor(p/(p-1) * ((ln(q)/2 - 2 ln ln q)/ln 2 + c))`, evaluated in fixed point.
pub fn q_floor(q: u64, p: u64, c: i64) -> i64 {
    let lq = ln_int(q);
    let llq = ln_fixed(&lq);
    let inner = (&lq >> 1u32) - llq * 2;
    let x = div(&inner, &ln2()) + one() * c;
    let scaled = x * p / (p - 1);
    let fl = scaled.div_floor(&one());
    i64::try_from(fl).expect("Q fits in i64")
}

/// The same quantity as an `f64`, from the fixed-point evaluation.
pub fn q_value(q: u64, p: u64, c: i64) -> f64 {
    let lq = ln_int(q);
    let llq = ln_fixed(&lq);
    let inner = (&lq >> 1u32) - llq * 2;
    let x = div(&inner, &ln2()) + one() * c;
    let scaled = x * p / (p - 1);
    // keep 52 bits after the point
    let shifted: BigInt = scaled >> (FRAC - 52);
    let v = i64::try_from(shifted).expect("Q fits in i64");
    v as f64 / (1u64 << 52) as f64
}
