//! Finite fields `𝔽_{p^k} = 𝔽_p[u]/(m(u))`.
//!
//! Elements are encoded as integers `0..q`: the base-`p` digits are the
//! coefficients of `1, u, …, u^{k-1}`. The prime field is `0..p`. The modulus
//! is the smallest monic irreducible of degree `k` when tails
//! `(c_{k-1}, …, c_0)` are compared lexicographically.

use std::fmt;
use std::sync::OnceLock;

use super::FfError;

/// Fields up to this size get log/antilog tables on first multiplication.
const TABLE_LIMIT: u64 = 1 << 16;

pub type Elem = u64;

pub struct FiniteField {
    p: u64,
    k: u32,
    q: u64,
    // monic modulus, ascending, length k + 1
    modulus: Vec<u64>,
    tables: OnceLock<Option<Tables>>,
}

struct Tables {
    // exp[i] = g^i for 0 ≤ i < 2(q-1)
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.p, self.k, self.modulus)
    }
}

impl Clone for FiniteField {
    fn clone(&self) -> Self {
        Self { p: self.p, k: self.k, q: self.q, modulus: self.modulus.clone(), tables: OnceLock::new() }
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k
    }
}

impl Eq for FiniteField {}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^k`; `None` unless `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut k = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

impl FiniteField {
    pub fn new(p: u64, k: u32) -> Result<Self, FfError> {
        if !is_prime_u64(p) {
            return Err(FfError::NotPrime(p));
        }
        if k == 0 {
            return Err(FfError::BadExtensionDegree(k));
        }
        let q = p
            .checked_pow(k)
            .filter(|q| *q < (1 << 62))
            .ok_or(FfError::FieldTooLarge { needed: format!("{p}^{k}"), budget: 1 << 62 })?;
        let modulus = smallest_irreducible(p, k as usize);
        Ok(Self { p, k, q, modulus, tables: OnceLock::new() })
    }

    /// `𝔽_q` for a prime power `q`.
    pub fn with_order(q: u64) -> Result<Self, FfError> {
        let (p, k) = prime_power(q).ok_or(FfError::NotPrimePower(q))?;
        Self::new(p, k)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Ascending coefficients of the defining polynomial.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn digits(&self, a: Elem) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.k as usize);
        let mut r = a;
        for _ in 0..self.k {
            out.push(r % self.p);
            r /= self.p;
        }
        out
    }

    fn encode(&self, digits: &[u64]) -> Elem {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return a ^ b;
        }
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let digits: Vec<u64> = self.digits(a).into_iter().map(|d| (self.p - d) % self.p).collect();
        self.encode(&digits)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.k == 1 {
            return ((a as u128 * b as u128) % self.p as u128) as u64;
        }
        match self.tables() {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize] as u64,
            None => self.mul_slow(a, b),
        }
    }

    fn tables(&self) -> Option<&Tables> {
        self.tables
            .get_or_init(|| (self.q <= TABLE_LIMIT).then(|| self.build_tables()))
            .as_ref()
    }

    fn build_tables(&self) -> Tables {
        let n = (self.q - 1) as usize;
        let g = self.primitive_element();
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1u64;
        for i in 0..n {
            exp[i] = x as u32;
            exp[i + n] = x as u32;
            log[x as usize] = i as u32;
            x = self.mul_slow(x, g);
        }
        Tables { exp, log }
    }

    /// Smallest encoded generator of the multiplicative group.
    pub fn primitive_element(&self) -> Elem {
        let n = self.q - 1;
        let prime_factors: Vec<u64> = (2..=n)
            .scan(n, |rest, d| {
                if *rest == 1 {
                    return None;
                }
                if d * d > *rest {
                    let last = *rest;
                    *rest = 1;
                    return Some(Some(last));
                }
                if *rest % d == 0 {
                    while *rest % d == 0 {
                        *rest /= d;
                    }
                    Some(Some(d))
                } else {
                    Some(None)
                }
            })
            .flatten()
            .collect();
        (1..self.q)
            .find(|&g| prime_factors.iter().all(|&r| self.pow_slow(g, n / r) != 1))
            .expect("multiplicative group is cyclic")
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            // carry-less multiply with reduction by the modulus bit pattern
            let k = self.k;
            let red = self.encode(&self.modulus[..k as usize]);
            let mut result = 0u64;
            let mut x = a;
            let mut y = b;
            while y != 0 {
                if y & 1 == 1 {
                    result ^= x;
                }
                y >>= 1;
                x <<= 1;
                if x >> k & 1 == 1 {
                    x ^= 1 << k;
                    x ^= red;
                }
            }
            return result;
        }
        let da = self.digits(a);
        let db = self.digits(b);
        let k = self.k as usize;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        reduce_in_place(&mut prod, &self.modulus, self.p);
        prod.resize(k, 0);
        self.encode(&prod)
    }

    fn pow_slow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if let Some(t) = self.tables() {
            let n = self.q - 1;
            let idx = (t.log[a as usize] as u64 * (e % n)) % n;
            return t.exp[idx as usize] as u64;
        }
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "zero has no inverse");
        self.pow(a, self.q - 2)
    }

    /// Frobenius `a ↦ a^p`.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.p)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }
}

/// Reduces `poly` (ascending, over 𝔽_p) modulo a monic `modulus` in place.
fn reduce_in_place(poly: &mut Vec<u64>, modulus: &[u64], p: u64) {
    let k = modulus.len() - 1;
    while poly.len() > k {
        let lead = poly.pop().expect("nonempty");
        if lead == 0 {
            continue;
        }
        let shift = poly.len() - k;
        for (i, &m) in modulus[..k].iter().enumerate() {
            poly[shift + i] = (poly[shift + i] + (p - lead) * m) % p;
        }
    }
}

mod fp_poly {
    //! Dense polynomials over the prime field, for irreducibility testing.

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        let mut r = 1u64;
        let mut base = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        r
    }

    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        let db = b.len() - 1;
        let inv_lead = inv_mod(b[db], p);
        while r.len() > db {
            let c = r[r.len() - 1] * inv_lead % p;
            let shift = r.len() - 1 - db;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - c) * bi % p) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, m, p)
    }

    pub fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| {
                    let x = a.get(i).copied().unwrap_or(0);
                    let y = b.get(i).copied().unwrap_or(0);
                    (x + p - y) % p
                })
                .collect(),
        )
    }
}

/// Ben-Or: monic `f` of degree `k` is irreducible iff
/// `gcd(f, u^{p^i} - u) = 1` for `1 ≤ i ≤ k/2`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    let u = vec![0, 1];
    let mut power = u.clone();
    for _ in 1..=k / 2 {
        power = fp_poly::pow_mod(&power, p, f, p);
        let g = fp_poly::gcd(f, &fp_poly::sub(&power, &u, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn smallest_irreducible(p: u64, k: usize) -> Vec<u64> {
    let tails = p.checked_pow(k as u32).expect("field size checked by caller");
    for tail in 0..tails {
        // tail digits, most significant = coefficient of u^{k-1}
        let mut poly = Vec::with_capacity(k + 1);
        let mut r = tail;
        for _ in 0..k {
            poly.push(r % p);
            r /= p;
        }
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_moduli() {
        assert_eq!(FiniteField::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FiniteField::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FiniteField::new(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
        // x^2 + 1 is irreducible mod 3 and has the smallest tail (0, 1)
        assert_eq!(FiniteField::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FiniteField::new(5, 1).unwrap().modulus(), &[0, 1]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(FiniteField::new(4, 1).unwrap_err(), FfError::NotPrime(4));
        assert_eq!(FiniteField::with_order(12).unwrap_err(), FfError::NotPrimePower(12));
        assert_eq!(prime_power(125), Some((5, 3)));
        assert_eq!(prime_power(1), None);
    }

    /// Every field axiom, exhaustively.
    fn check_axioms(f: &FiniteField) {
        let q = f.order();
        for a in 0..q {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1, "inverse of {a} in {f:?}");
            }
            assert_eq!(f.pow(a, q), a, "a^q = a");
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                for c in 0..q {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn field_axioms_hold_for_small_fields() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            check_axioms(&FiniteField::with_order(q).unwrap());
        }
    }

    #[test]
    fn primitive_element_generates() {
        for q in [4u64, 8, 9, 25, 27, 64] {
            let f = FiniteField::with_order(q).unwrap();
            let g = f.primitive_element();
            let mut seen = std::collections::HashSet::new();
            let mut x = 1;
            for _ in 0..q - 1 {
                seen.insert(x);
                x = f.mul(x, g);
            }
            assert_eq!(seen.len() as u64, q - 1);
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = FiniteField::new(5, 20).unwrap();
        assert!(is_irreducible(f.modulus(), 5));
        let a = 123_456_789;
        assert_eq!(f.mul(a, f.inv(a)), 1);
        let f = FiniteField::new(2, 20).unwrap();
        let a = 0xABCDE;
        assert_eq!(f.mul(a, f.inv(a)), 1);
        assert_eq!(f.pow(a, f.order()), a);
    }

    #[test]
    fn irreducibility_test() {
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2)); // (u+1)^2
        assert!(!is_irreducible(&[0, 0, 1], 3));
        assert!(is_irreducible(&[2, 0, 1], 5)); // u^2 + 2: 2 is a non-residue mod 5
    }
}
