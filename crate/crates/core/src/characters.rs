//! Real primitive Dirichlet characters as Kronecker symbols of fundamental
//! discriminants, and the von Mangoldt function.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn is_squarefree(mut m: u64) -> bool {
    if m == 0 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// `d ≡ 1 (mod 4)` squarefree, or `d = 4m` with `m ≡ 2, 3 (mod 4)` squarefree.
/// `d = 1` (the trivial character) is rejected.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// Jacobi symbol `(a/n)` for odd `n > 0`.
fn jacobi(a: i64, n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol `(d/n)`.
pub fn kronecker_symbol(d: i64, n: u64) -> i8 {
    if n == 0 {
        return if d.unsigned_abs() == 1 { 1 } else { 0 };
    }
    let tz = n.trailing_zeros();
    let odd = n >> tz;
    let mut t = 1i8;
    if tz > 0 {
        if d % 2 == 0 {
            return 0;
        }
        if tz % 2 == 1 && matches!(d.rem_euclid(8), 3 | 5) {
            t = -t;
        }
    }
    t * jacobi(d, odd)
}

/// A real primitive character `χ_d(n) = (d/n)`, with its period table.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct RealPrimitiveCharacter {
    d: i64,
    q: u64,
    parity: u8,
    table: Vec<i8>,
}

impl RealPrimitiveCharacter {
    pub fn new(d: i64) -> Result<Self> {
        if !is_fundamental_discriminant(d) {
            return Err(Error::InvalidCharacter(d));
        }
        let q = d.unsigned_abs();
        let table: Vec<i8> = (0..q).map(|n| kronecker_symbol(d, n)).collect();
        let parity = if table[(q - 1) as usize] == -1 { 1 } else { 0 };
        Ok(Self {
            d,
            q,
            parity,
            table,
        })
    }

    pub fn discriminant(&self) -> i64 {
        self.d
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// `b = 1` iff `χ(-1) = -1`.
    pub fn parity(&self) -> u8 {
        self.parity
    }

    #[inline]
    pub fn value(&self, n: u64) -> i8 {
        self.table[(n % self.q) as usize]
    }

    /// Values `χ(1), …, χ(q)`.
    pub fn period(&self) -> impl Iterator<Item = (u64, i8)> + '_ {
        (1..=self.q).map(move |a| (a, self.value(a)))
    }
}

impl TryFrom<i64> for RealPrimitiveCharacter {
    type Error = Error;
    fn try_from(d: i64) -> Result<Self> {
        Self::new(d)
    }
}

impl From<RealPrimitiveCharacter> for i64 {
    fn from(c: RealPrimitiveCharacter) -> i64 {
        c.d
    }
}

/// `parity` as a free function, kept for symmetry with the other operations.
pub fn parity(chi: &RealPrimitiveCharacter) -> u8 {
    chi.parity()
}

/// `log p` if `n = p^m`, else 0. Trial division up to `√n`.
pub fn von_mangoldt(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut m = n;
            while m % p == 0 {
                m /= p;
            }
            return if m == 1 { (p as f64).ln() } else { 0.0 };
        }
        p += 1;
    }
    (n as f64).ln()
}

const BULK_THRESHOLD: usize = 1_000;

/// `Λ(0..=n_max)`; linear sieve on smallest prime factors for long ranges.
pub fn von_mangoldt_table(n_max: usize) -> Vec<f64> {
    if n_max <= BULK_THRESHOLD {
        return (0..=n_max as u64).map(von_mangoldt).collect();
    }
    let mut spf = vec![0u32; n_max + 1];
    let mut primes: Vec<u32> = Vec::new();
    let mut lambda = vec![0.0; n_max + 1];
    for i in 2..=n_max {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        for &p in &primes {
            let ip = i * p as usize;
            if p > spf[i] || ip > n_max {
                break;
            }
            spf[ip] = p;
        }
        let p = spf[i] as usize;
        let mut m = i;
        while m % p == 0 {
            m /= p;
        }
        if m == 1 {
            lambda[i] = (p as f64).ln();
        }
    }
    lambda
}

/// Odd-only bit sieve, used to enumerate prime powers up to large bounds
/// without a per-integer table.
pub struct PrimeSieve {
    limit: u64,
    composite: Vec<u64>,
}

impl PrimeSieve {
    pub fn new(limit: u64) -> Self {
        let half = (limit / 2 + 1) as usize;
        let mut composite = vec![0u64; half / 64 + 1];
        let mut i = 3u64;
        while i * i <= limit {
            let idx = (i / 2) as usize;
            if composite[idx / 64] >> (idx % 64) & 1 == 0 {
                let mut j = i * i;
                while j <= limit {
                    let jdx = (j / 2) as usize;
                    composite[jdx / 64] |= 1 << (jdx % 64);
                    j += 2 * i;
                }
            }
            i += 2;
        }
        Self { limit, composite }
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        let odd = (1..=self.limit / 2).filter_map(move |idx| {
            let n = 2 * idx + 1;
            let i = idx as usize;
            (n <= self.limit && self.composite[i / 64] >> (i % 64) & 1 == 0).then_some(n)
        });
        (self.limit >= 2).then_some(2).into_iter().chain(odd)
    }

    /// `(p^m, p)` for every prime power `p^m ≤ limit`.
    pub fn prime_powers(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        let limit = self.limit;
        self.primes().flat_map(move |p| {
            std::iter::successors(Some(p), move |&pm| pm.checked_mul(p).filter(|&x| x <= limit))
                .map(move |pm| (pm, p))
        })
    }
}
