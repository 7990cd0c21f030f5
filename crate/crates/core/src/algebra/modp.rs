//! Arithmetic in a prime field containing a square root of −1.
//!
//! Used only to screen large enumerations quickly; callers confirm every
//! result over ℚ(i).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{Rational, GR};

/// A prime `≡ 1 (mod 4)` just above `2⁶¹`.
pub const P: u64 = 2_305_843_009_213_693_973;
/// `I² ≡ −1 (mod P)`
pub const I: u64 = 1_035_093_963_448_091_331;

#[inline]
pub fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

#[inline]
pub fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

/// `Σ aₖbₖ` for at most 32 terms, reduced once.
pub fn dot(a: &[u64], b: &[u64]) -> u64 {
    debug_assert!(a.len() <= 32);
    let s: u128 = a.iter().zip(b).map(|(&x, &y)| x as u128 * y as u128).sum();
    (s % P as u128) as u64
}

pub fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue, by the extended Euclidean algorithm.
pub fn inv(a: u64) -> u64 {
    debug_assert!(a != 0);
    let (mut r0, mut r1) = (P as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(P as i128) as u64
}

fn reduce_int(n: &BigInt) -> u64 {
    n.mod_floor(&BigInt::from(P)).to_u64().expect("residue fits")
}

/// `None` when the denominator vanishes mod `P`.
pub fn from_rational(r: &Rational) -> Option<u64> {
    let (n, d) = match r.as_small() {
        Some((n, d)) => ((n as i128).rem_euclid(P as i128) as u64, (d as i128).rem_euclid(P as i128) as u64),
        None => (reduce_int(&r.numer()), reduce_int(&r.denom())),
    };
    (d != 0).then(|| mul(n, inv(d)))
}

pub fn from_gr(g: &GR) -> Option<u64> {
    Some(add(from_rational(&g.re)?, mul(from_rational(&g.im)?, I)))
}

/// Nullspace basis of a row-major `rows × cols` matrix, with its rank.
/// Each basis vector has a 1 in its free column.
pub fn nullspace(mut m: Vec<u64>, rows: usize, cols: usize) -> (usize, Vec<Vec<u64>>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i * cols + c] != 0) else { continue };
        if p != r {
            for k in 0..cols {
                m.swap(p * cols + k, r * cols + k);
            }
        }
        let s = inv(m[r * cols + c]);
        for k in c..cols {
            m[r * cols + k] = mul(m[r * cols + k], s);
        }
        for i in 0..rows {
            let f = m[i * cols + c];
            if i == r || f == 0 {
                continue;
            }
            for k in c..cols {
                m[i * cols + k] = sub(m[i * cols + k], mul(f, m[r * cols + k]));
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; cols];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = sub(0, m[i * cols + free]);
        }
        basis.push(v);
    }
    (pivots.len(), basis)
}

/// Null vector of a 3×4 matrix from its signed 3×3 minors; zero exactly
/// when the rank is below 3.
pub fn null_vector_3x4(m: &[u64; 12]) -> [u64; 4] {
    let det3 = |c: [usize; 3]| {
        let e = |r: usize, k: usize| m[r * 4 + c[k]];
        let t1 = mul(e(0, 0), sub(mul(e(1, 1), e(2, 2)), mul(e(1, 2), e(2, 1))));
        let t2 = mul(e(0, 1), sub(mul(e(1, 0), e(2, 2)), mul(e(1, 2), e(2, 0))));
        let t3 = mul(e(0, 2), sub(mul(e(1, 0), e(2, 1)), mul(e(1, 1), e(2, 0))));
        add(sub(t1, t2), t3)
    };
    [det3([1, 2, 3]), sub(0, det3([0, 2, 3])), det3([0, 1, 3]), sub(0, det3([0, 1, 2]))]
}

/// Scales `v` so its first nonzero entry is 1.
pub fn normalize(v: &mut [u64]) {
    if let Some(&lead) = v.iter().find(|&&x| x != 0) {
        let s = inv(lead);
        for x in v.iter_mut() {
            *x = mul(*x, s);
        }
    }
}
