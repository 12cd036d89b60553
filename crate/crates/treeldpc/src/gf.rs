//! Finite field arithmetic for GF(p^s) with exp/log tables, and the
//! orthogonal-array family used by the graph constructions.
//!
//! Elements are encoded by discrete-log index: index 0 is the zero element,
//! index k >= 1 is alpha^(k-1) where alpha is the primitive element fixed by
//! the field's modulus polynomial. Multiplication and inversion are table
//! lookups; addition works on the packed polynomial representation.

use crate::error::{Error, Result};

/// Desk-scale cap on field order.
pub const FIELD_SIZE_CAP: u64 = 1 << 16;

/// A field element, identified by its discrete-log index within its field.
///
/// Index 0 is zero; index k >= 1 stands for alpha^(k-1). Elements carry no
/// reference to their field, so mixing elements of different fields is the
/// caller's responsibility (out-of-range indices are rejected).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub(crate) u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u32 {
        self.0 as u32
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// GF(p^s) backed by exp/log tables over a fixed primitive modulus polynomial.
#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    s: u32,
    q: u32,
    /// Monic modulus polynomial, coefficients c_0..c_s with c_s = 1.
    modulus: Vec<u32>,
    /// exp[k] = packed polynomial of alpha^k, k in 0..q-1.
    exp: Vec<u32>,
    /// log[v] = k with alpha^k = v for packed nonzero v; log[0] is unused.
    log: Vec<u16>,
}

impl FiniteField {
    /// Builds GF(p^s) with the built-in primitive polynomial for this size.
    ///
    /// Deterministic for fixed (p, s): the modulus comes from a fixed table
    /// for the common sizes and otherwise from a lexicographic search for the
    /// first primitive polynomial.
    pub fn new(p: u32, s: u32) -> Result<FiniteField> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if s == 0 {
            return Err(Error::InvalidParams(
                "field extension degree s must be >= 1".into(),
            ));
        }
        let q = checked_pow(p as u64, s)
            .filter(|&q| q <= FIELD_SIZE_CAP)
            .ok_or(Error::UnsupportedField {
                q: checked_pow(p as u64, s).unwrap_or(u64::MAX),
                cap: FIELD_SIZE_CAP,
            })? as u32;

        let modulus = modulus_for(p, s)?;
        let (exp, log) = build_tables(p, q, &modulus)?;
        Ok(FiniteField {
            p,
            s,
            q,
            modulus,
            exp,
            log,
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.s
    }

    /// Field order q = p^s.
    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus polynomial coefficients c_0..c_s (c_s = 1).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// The primitive element alpha (generator of the multiplicative group).
    pub fn alpha(&self) -> FieldElement {
        if self.q == 2 {
            FieldElement::ONE
        } else {
            FieldElement(2)
        }
    }

    /// Element with the given discrete-log index (0 = zero, k = alpha^(k-1)).
    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index < self.q {
            Ok(FieldElement(index as u16))
        } else {
            Err(Error::ElementRange { index, q: self.q })
        }
    }

    /// All elements in index order: 0, 1, alpha, alpha^2, ...
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q as u16).map(FieldElement)
    }

    /// Nonzero elements in index order: 1, alpha, alpha^2, ...
    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.q as u16).map(FieldElement)
    }

    /// alpha^k for any integer k (negative allowed).
    pub fn alpha_pow(&self, k: i64) -> FieldElement {
        let m = (self.q - 1) as i64;
        FieldElement((1 + k.rem_euclid(m)) as u16)
    }

    /// Element from its packed polynomial value sum(c_i * p^i); for prime
    /// fields this is the residue 0..p-1.
    pub fn from_int(&self, value: u32) -> Result<FieldElement> {
        if value >= self.q {
            return Err(Error::ElementRange {
                index: value,
                q: self.q,
            });
        }
        if value == 0 {
            Ok(FieldElement::ZERO)
        } else {
            Ok(FieldElement(self.log[value as usize] + 1))
        }
    }

    /// Packed polynomial value of an element (residue 0..p-1 for prime fields).
    pub fn as_int(&self, a: FieldElement) -> u32 {
        if a.0 == 0 {
            0
        } else {
            self.exp[(a.0 - 1) as usize]
        }
    }

    fn check(&self, a: FieldElement) -> u32 {
        debug_assert!(
            (a.0 as u32) < self.q,
            "element index {} out of range for GF({})",
            a.0,
            self.q
        );
        a.0 as u32
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        let va = self.as_int(a);
        let vb = self.as_int(b);
        let sum = if self.s == 1 {
            (va + vb) % self.p
        } else {
            add_packed(va, vb, self.p, self.s)
        };
        self.from_int(sum).expect("sum stays in range")
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.check(a);
        let va = self.as_int(a);
        let nv = if self.s == 1 {
            (self.p - va) % self.p
        } else {
            neg_packed(va, self.p, self.s)
        };
        self.from_int(nv).expect("negation stays in range")
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let m = self.q - 1;
        let k = (a.0 as u32 - 1 + b.0 as u32 - 1) % m;
        FieldElement((k + 1) as u16)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        self.check(a);
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let m = self.q - 1;
        let k = (m - (a.0 as u32 - 1)) % m;
        Ok(FieldElement((k + 1) as u16))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if a.is_zero() {
            return if e == 0 {
                FieldElement::ONE
            } else {
                FieldElement::ZERO
            };
        }
        let m = (self.q - 1) as u64;
        let k = ((a.0 as u64 - 1) * (e % m)) % m;
        FieldElement((k + 1) as u16)
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: FieldElement) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let m = (self.q - 1) as u64;
        let k = (a.0 as u64) - 1;
        let g = gcd(k, m);
        Ok(m / g.max(1))
    }

    /// Display form: residues for prime fields, 0/1/a/a^k for extensions.
    pub fn format_element(&self, a: FieldElement) -> String {
        if self.s == 1 {
            return self.as_int(a).to_string();
        }
        match a.0 {
            0 => "0".into(),
            1 => "1".into(),
            2 => "a".into(),
            k => format!("a^{}", k - 1),
        }
    }
}

/// The q orthogonal arrays M_a over GF(q): M_a[x][y] = x + a*y. For a != 0
/// these are q-1 mutually orthogonal Latin squares; M_0 has constant rows and
/// is orthogonal to all of them.
#[derive(Clone, Debug)]
pub struct OrthogonalArrayFamily {
    field: FiniteField,
}

impl OrthogonalArrayFamily {
    pub fn new(field: FiniteField) -> OrthogonalArrayFamily {
        OrthogonalArrayFamily { field }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    /// Entry of M_a at row x, column y: x + a*y.
    pub fn entry(&self, a: FieldElement, x: FieldElement, y: FieldElement) -> FieldElement {
        self.field.add(x, self.field.mul(a, y))
    }

    /// Full array M_a with rows and columns in element index order.
    pub fn array(&self, a: FieldElement) -> Vec<Vec<FieldElement>> {
        self.field
            .elements()
            .map(|x| self.field.elements().map(|y| self.entry(a, x, y)).collect())
            .collect()
    }
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
        if acc > FIELD_SIZE_CAP {
            return None;
        }
    }
    Some(acc)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn smallest_primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let m = (p - 1) as u64;
    let factors = prime_factors(m);
    for g in 2..p as u64 {
        if factors.iter().all(|&f| pow_mod(g, m / f, p as u64) != 1) {
            return g as u32;
        }
    }
    unreachable!("every prime has a primitive root")
}

/// Packed addition of base-p digit vectors.
fn add_packed(a: u32, b: u32, p: u32, s: u32) -> u32 {
    let mut out = 0u32;
    let mut mult = 1u32;
    let (mut a, mut b) = (a, b);
    for _ in 0..s {
        let d = (a % p + b % p) % p;
        out += d * mult;
        mult *= p;
        a /= p;
        b /= p;
    }
    out
}

fn neg_packed(a: u32, p: u32, s: u32) -> u32 {
    let mut out = 0u32;
    let mut mult = 1u32;
    let mut a = a;
    for _ in 0..s {
        let d = (p - a % p) % p;
        out += d * mult;
        mult *= p;
        a /= p;
    }
    out
}

/// Fixed primitive polynomials for the field sizes the constructions use,
/// as c_0..c_s
/// with the leading coefficient omitted. Each entry equals what the
/// lexicographic search below would find; a unit test keeps them in sync.
const BUILTIN_POLYS: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1]),
    (2, 3, &[1, 1, 0]),
    (2, 4, &[1, 1, 0, 0]),
    (2, 5, &[1, 0, 1, 0, 0]),
    (2, 6, &[1, 1, 0, 0, 0, 0]),
    (3, 2, &[2, 1]),
    (3, 3, &[1, 2, 0]),
    (5, 2, &[2, 1]),
    (7, 2, &[3, 1]),
];

fn modulus_for(p: u32, s: u32) -> Result<Vec<u32>> {
    if s == 1 {
        // x - g with g the smallest primitive root mod p.
        let g = smallest_primitive_root(p);
        return Ok(vec![(p - g) % p, 1]);
    }
    if let Some((_, _, coeffs)) = BUILTIN_POLYS
        .iter()
        .find(|&&(tp, ts, _)| tp == p && ts == s)
    {
        let mut m: Vec<u32> = coeffs.to_vec();
        m.push(1);
        return Ok(m);
    }
    search_primitive_poly(p, s)
}

/// First monic primitive polynomial of degree s over GF(p), enumerating the
/// non-leading coefficients as base-p digits of an increasing counter.
pub(crate) fn search_primitive_poly(p: u32, s: u32) -> Result<Vec<u32>> {
    let q = checked_pow(p as u64, s).ok_or(Error::UnsupportedField {
        q: u64::MAX,
        cap: FIELD_SIZE_CAP,
    })?;
    for k in 0..q {
        let mut coeffs = Vec::with_capacity(s as usize + 1);
        let mut t = k;
        for _ in 0..s {
            coeffs.push((t % p as u64) as u32);
            t /= p as u64;
        }
        coeffs.push(1);
        if coeffs[0] == 0 {
            continue; // divisible by x
        }
        if is_primitive_poly(p, s, &coeffs) {
            return Ok(coeffs);
        }
    }
    Err(Error::UnsupportedField {
        q,
        cap: FIELD_SIZE_CAP,
    })
}

/// Polynomial product modulo the modulus, coefficients over GF(p).
fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let s = modulus.len() - 1;
    let mut prod = vec![0u64; (a.len() + b.len() - 1).max(s)];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] += ai as u64 * bj as u64;
        }
    }
    // Reduce: x^s = -(c_0 + c_1 x + ... + c_{s-1} x^{s-1}).
    for i in (s..prod.len()).rev() {
        let coef = prod[i] % p as u64;
        if coef != 0 {
            for j in 0..s {
                let sub = coef * modulus[j] as u64 % p as u64;
                prod[i - s + j] = (prod[i - s + j] + p as u64 - sub) % p as u64;
            }
        }
        prod[i] = 0;
    }
    let mut out: Vec<u32> = prod[..s].iter().map(|&c| (c % p as u64) as u32).collect();
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}

fn poly_is_one(a: &[u32]) -> bool {
    a[0] == 1 && a[1..].iter().all(|&c| c == 0)
}

fn is_primitive_poly(p: u32, s: u32, modulus: &[u32]) -> bool {
    let q = match checked_pow(p as u64, s) {
        Some(q) => q,
        None => return false,
    };
    let m = q - 1;
    let x = vec![0u32, 1];
    // x^m must be 1 and x^(m/f) != 1 for every prime factor f of m. This
    // forces x to generate a cyclic group of order q-1, which also rules out
    // reducible moduli (their unit groups are smaller or non-cyclic of the
    // wrong order).
    let pow = |e: u64| -> Vec<u32> {
        let mut acc = vec![1u32];
        let mut base = x.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(&acc, &base, modulus, p);
            }
            base = poly_mulmod(&base, &base, modulus, p);
            e >>= 1;
        }
        acc
    };
    if !poly_is_one(&pow(m)) {
        return false;
    }
    for f in prime_factors(m) {
        if poly_is_one(&pow(m / f)) {
            return false;
        }
    }
    true
}

fn build_tables(p: u32, q: u32, modulus: &[u32]) -> Result<(Vec<u32>, Vec<u16>)> {
    let mut exp = Vec::with_capacity((q - 1) as usize);
    let mut log = vec![0u16; q as usize];
    let x = vec![0u32, 1];
    let mut cur = vec![1u32];
    for k in 0..q - 1 {
        let packed = pack(&cur, p);
        if packed == 0 || (packed == 1 && k > 0) {
            return Err(Error::InvalidParams(format!(
                "modulus for GF({q}) is not primitive: alpha has order {k}"
            )));
        }
        exp.push(packed);
        log[packed as usize] = k as u16;
        cur = poly_mulmod(&cur, &x, modulus, p);
    }
    if !poly_is_one(&cur) {
        return Err(Error::InvalidParams(format!(
            "modulus for GF({q}) is not primitive"
        )));
    }
    Ok((exp, log))
}

fn pack(coeffs: &[u32], p: u32) -> u32 {
    let mut out = 0u32;
    for &c in coeffs.iter().rev() {
        out = out * p + c;
    }
    out
}
