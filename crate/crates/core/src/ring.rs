//! Exact arithmetic in the finite quotients o/p^m and O/p^m.
//!
//! The base ring o/p^m is Z/p^m with elements stored as canonical residues
//! in a `u64`. The quadratic extension O/p^m is the Galois ring
//! (Z/p^m)[x]/(x^2 - c), elements `a + b sqrt(c)` with c the smallest
//! positive quadratic non-residue mod p. This model is exact for residue
//! degree one (q_F = p), which is the scope of the crate; the nontrivial
//! Galois automorphism is `b -> -b`.

use alloc::vec::Vec;

use crate::error::Error;
use crate::Result;

/// Largest allowed modulus p^m. Keeps every intermediate product inside
/// u128 with room to spare (p^m < 2^56 gives c*b*e < 2^115).
const MODULUS_LIMIT: u64 = 1 << 56;

/// Element of O/p^m, representing `a + b sqrt(c)`. Both components are
/// canonical residues mod p^m of the owning [`RingCtx`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Gr {
    pub a: u64,
    pub b: u64,
}

impl Gr {
    pub const ZERO: Gr = Gr { a: 0, b: 0 };
    pub const ONE: Gr = Gr { a: 1, b: 0 };
}

/// Context for the quotient rings at one odd prime p and precision m:
/// o/p^m = Z/p^m and O/p^m = (Z/p^m)[sqrt(c)].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RingCtx {
    p: u64,
    m: u32,
    c: u64,
    modulus: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl RingCtx {
    /// Builds the context for (p, m). Rejects p = 2 (odd residue
    /// characteristic is a standing assumption) and non-primes; the
    /// non-residue c is the smallest positive one, so the context is
    /// deterministic for fixed (p, m).
    pub fn new(p: u64, m: u32) -> Result<RingCtx> {
        if p == 2 || !is_prime(p) {
            return Err(Error::BadCharacteristic(p));
        }
        if m == 0 {
            return Err(Error::BadPrecision(m));
        }
        let modulus = p
            .checked_pow(m)
            .filter(|&md| md < MODULUS_LIMIT)
            .ok_or(Error::BadPrecision(m))?;
        let squares: Vec<bool> = {
            let mut sq = alloc::vec![false; p as usize];
            for x in 1..p {
                sq[((x * x) % p) as usize] = true;
            }
            sq
        };
        let c = (2..p)
            .find(|&cand| !squares[cand as usize])
            .expect("odd prime fields always contain a non-residue");
        Ok(RingCtx { p, m, c, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.m
    }

    pub fn non_residue(&self) -> u64 {
        self.c
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Same p and c at a different precision exponent.
    pub fn at_precision(&self, m: u32) -> Result<RingCtx> {
        if m == 0 {
            return Err(Error::BadPrecision(m));
        }
        let modulus = self
            .p
            .checked_pow(m)
            .filter(|&md| md < MODULUS_LIMIT)
            .ok_or(Error::BadPrecision(m))?;
        Ok(RingCtx { p: self.p, m, c: self.c, modulus })
    }

    /// True when `other` models the same tower (same p, same c) at any
    /// precision.
    pub fn same_tower(&self, other: &RingCtx) -> bool {
        self.p == other.p && self.c == other.c
    }

    // ---- base ring o/p^m ----

    pub fn base_reduce(&self, x: u64) -> u64 {
        x % self.modulus
    }

    pub fn base_add(&self, x: u64, y: u64) -> u64 {
        (x + y) % self.modulus
    }

    pub fn base_sub(&self, x: u64, y: u64) -> u64 {
        (x + self.modulus - y % self.modulus) % self.modulus
    }

    pub fn base_neg(&self, x: u64) -> u64 {
        (self.modulus - x % self.modulus) % self.modulus
    }

    pub fn base_mul(&self, x: u64, y: u64) -> u64 {
        ((x as u128 * y as u128) % self.modulus as u128) as u64
    }

    /// p-adic valuation of a residue, capped at m; the zero residue gets m.
    pub fn base_val(&self, x: u64) -> u32 {
        if x % self.modulus == 0 {
            return self.m;
        }
        let mut v = 0;
        let mut x = x % self.modulus;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// Inverse of a base unit mod p^m (extended Euclid).
    pub fn base_inv(&self, x: u64) -> Result<u64> {
        let x = x % self.modulus;
        if x % self.p == 0 {
            return Err(Error::NonUnit);
        }
        let (mut r0, mut r1) = (self.modulus as i128, x as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(t0.rem_euclid(self.modulus as i128) as u64)
    }

    pub fn base_pow(&self, x: u64, mut e: u64) -> u64 {
        let mut base = x % self.modulus;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.base_mul(acc, base);
            }
            base = self.base_mul(base, base);
            e >>= 1;
        }
        acc
    }

    // ---- Galois ring O/p^m ----

    pub fn gr(&self, a: u64, b: u64) -> Gr {
        Gr { a: a % self.modulus, b: b % self.modulus }
    }

    pub fn from_base(&self, a: u64) -> Gr {
        Gr { a: a % self.modulus, b: 0 }
    }

    pub fn from_i64(&self, a: i64) -> Gr {
        Gr { a: a.rem_euclid(self.modulus as i64) as u64, b: 0 }
    }

    pub fn sqrt_c(&self) -> Gr {
        Gr { a: 0, b: 1 }
    }

    pub fn reduce(&self, x: Gr) -> Gr {
        Gr { a: x.a % self.modulus, b: x.b % self.modulus }
    }

    pub fn add(&self, x: Gr, y: Gr) -> Gr {
        Gr { a: self.base_add(x.a, y.a), b: self.base_add(x.b, y.b) }
    }

    pub fn sub(&self, x: Gr, y: Gr) -> Gr {
        Gr { a: self.base_sub(x.a, y.a), b: self.base_sub(x.b, y.b) }
    }

    pub fn neg(&self, x: Gr) -> Gr {
        Gr { a: self.base_neg(x.a), b: self.base_neg(x.b) }
    }

    pub fn mul(&self, x: Gr, y: Gr) -> Gr {
        let md = self.modulus as u128;
        let (a, b, d, e) = (x.a as u128, x.b as u128, y.a as u128, y.b as u128);
        let ra = (a * d + (self.c as u128) * ((b * e) % md)) % md;
        let rb = (a * e + b * d) % md;
        Gr { a: ra as u64, b: rb as u64 }
    }

    /// Multiplication by p^k (exact shift into the ideal).
    pub fn scale_pow(&self, x: Gr, k: u32) -> Gr {
        let f = self.base_pow(self.p, k as u64);
        Gr { a: self.base_mul(x.a, f), b: self.base_mul(x.b, f) }
    }

    /// The nontrivial Galois automorphism: a + b sqrt(c) -> a - b sqrt(c).
    pub fn conj(&self, x: Gr) -> Gr {
        Gr { a: x.a % self.modulus, b: self.base_neg(x.b) }
    }

    /// trace(x) = x + conj(x) = 2a, landing in the base ring.
    pub fn trace(&self, x: Gr) -> u64 {
        self.base_add(x.a, x.a)
    }

    /// norm(x) = x * conj(x) = a^2 - c b^2, landing in the base ring.
    pub fn norm(&self, x: Gr) -> u64 {
        let aa = self.base_mul(x.a, x.a);
        let cbb = self.base_mul(self.c, self.base_mul(x.b, x.b));
        self.base_sub(aa, cbb)
    }

    /// (trace, norm) of x.
    pub fn galois_invariants(&self, x: Gr) -> (u64, u64) {
        (self.trace(x), self.norm(x))
    }

    /// Largest k <= m with p^k dividing both components; the all-zero
    /// residue gets m (precision-capped zero).
    pub fn valuation(&self, x: Gr) -> u32 {
        self.base_val(x.a).min(self.base_val(x.b))
    }

    pub fn is_unit(&self, x: Gr) -> bool {
        self.valuation(x) == 0
    }

    /// Exact division of both components by p^k. Callers must know the
    /// valuation is at least k; the quotient is only determined mod p^(m-k),
    /// so it is the caller's job to track the precision drop.
    pub fn shift_down(&self, x: Gr, k: u32) -> Gr {
        debug_assert!(self.valuation(x) >= k);
        let f = self.base_pow(self.p, k as u64);
        Gr { a: (x.a % self.modulus) / f, b: (x.b % self.modulus) / f }
    }

    /// Inverse of a unit: conj(x) / norm(x).
    pub fn invert(&self, x: Gr) -> Result<Gr> {
        let ninv = self.base_inv(self.norm(x)).map_err(|_| Error::NonUnit)?;
        let cx = self.conj(x);
        Ok(Gr { a: self.base_mul(cx.a, ninv), b: self.base_mul(cx.b, ninv) })
    }

    pub fn pow(&self, x: Gr, mut e: u64) -> Gr {
        let mut base = x;
        let mut acc = Gr::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Mixed-radix packing of (a, b) into one integer; inverse of
    /// [`RingCtx::decode`]. Fits u128 for every supported modulus.
    pub fn encode(&self, x: Gr) -> u128 {
        x.a as u128 + x.b as u128 * self.modulus as u128
    }

    pub fn decode(&self, code: u128) -> Gr {
        let md = self.modulus as u128;
        Gr { a: (code % md) as u64, b: (code / md) as u64 }
    }

    /// All p^(2m) elements, lexicographic in (a, b).
    pub fn elements(&self) -> impl Iterator<Item = Gr> + '_ {
        let md = self.modulus;
        (0..md).flat_map(move |a| (0..md).map(move |b| Gr { a, b }))
    }

    /// All units, in element order.
    pub fn units(&self) -> impl Iterator<Item = Gr> + '_ {
        self.elements().filter(|&x| self.is_unit(x))
    }
}

/// Which special subset to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialKind {
    /// E^0 at level n: x + conj(x) = 0 in O/p^n.
    TraceZero(u32),
    /// E^1 at level n: x conj(x) = 1 in O/p^n.
    NormOne(u32),
    /// N(O/p): pairs (alpha, beta) over the residue field with
    /// beta + conj(beta) + alpha conj(alpha) = 0.
    HermitianPairs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialElem {
    Scalar(Gr),
    Pair(Gr, Gr),
}

/// Exhaustively enumerated solution set of one defining equation.
#[derive(Clone, Debug)]
pub struct SpecialSet {
    pub kind: SpecialKind,
    pub elements: Vec<SpecialElem>,
    pub cardinality: u64,
}

impl RingCtx {
    /// Exhaustive enumeration of E^0, E^1 (level n <= m) or N(O/p).
    /// Every listed element satisfies its defining equation exactly;
    /// ordering is lexicographic in the element components.
    pub fn enumerate_special(&self, kind: SpecialKind) -> Result<SpecialSet> {
        let elements: Vec<SpecialElem> = match kind {
            SpecialKind::TraceZero(n) => {
                let sub = self.level(n)?;
                sub.elements()
                    .filter(|&x| sub.trace(x) == 0)
                    .map(SpecialElem::Scalar)
                    .collect()
            }
            SpecialKind::NormOne(n) => {
                let sub = self.level(n)?;
                sub.elements()
                    .filter(|&x| sub.norm(x) == 1)
                    .map(SpecialElem::Scalar)
                    .collect()
            }
            SpecialKind::HermitianPairs => {
                let rf = self.at_precision(1)?;
                let mut out = Vec::new();
                for alpha in rf.elements() {
                    let na = rf.norm(alpha);
                    for beta in rf.elements() {
                        if rf.base_add(rf.trace(beta), na) == 0 {
                            out.push(SpecialElem::Pair(alpha, beta));
                        }
                    }
                }
                out
            }
        };
        let cardinality = elements.len() as u64;
        Ok(SpecialSet { kind, elements, cardinality })
    }

    /// Trace-zero elements of O/p^n as a plain list.
    pub fn trace_zero_elements(&self, n: u32) -> Result<Vec<Gr>> {
        let sub = self.level(n)?;
        Ok(sub.elements().filter(|&x| sub.trace(x) == 0).collect())
    }

    /// Norm-one elements of O/p^n as a plain list.
    pub fn norm_one_elements(&self, n: u32) -> Result<Vec<Gr>> {
        let sub = self.level(n)?;
        Ok(sub.elements().filter(|&x| sub.norm(x) == 1).collect())
    }

    fn level(&self, n: u32) -> Result<RingCtx> {
        if n == 0 || n > self.m {
            return Err(Error::BadPrecision(n));
        }
        self.at_precision(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_residue_choices() {
        assert_eq!(RingCtx::new(3, 2).unwrap().non_residue(), 2);
        assert_eq!(RingCtx::new(5, 1).unwrap().non_residue(), 2);
        assert_eq!(RingCtx::new(7, 3).unwrap().non_residue(), 3);
    }

    #[test]
    fn rejects_bad_characteristic() {
        assert_eq!(RingCtx::new(2, 1).unwrap_err(), Error::BadCharacteristic(2));
        assert_eq!(RingCtx::new(9, 1).unwrap_err(), Error::BadCharacteristic(9));
        assert_eq!(RingCtx::new(3, 0).unwrap_err(), Error::BadPrecision(0));
    }

    #[test]
    fn conj_is_an_involution_fixing_the_base() {
        let r = RingCtx::new(3, 2).unwrap();
        for x in r.elements() {
            assert_eq!(r.conj(r.conj(x)), x);
        }
        assert_eq!(r.conj(r.from_base(5)), r.from_base(5));
        let x = r.gr(1, 1);
        assert_eq!(r.conj(x), r.gr(1, 8));
    }

    #[test]
    fn trace_and_norm_as_ring_identities() {
        let r = RingCtx::new(3, 2).unwrap();
        for x in r.elements() {
            assert_eq!(r.from_base(r.trace(x)), r.add(x, r.conj(x)));
            assert_eq!(r.from_base(r.norm(x)), r.mul(x, r.conj(x)));
        }
    }

    #[test]
    fn trace_norm_example_values() {
        // x = 2 + sqrt(2) at p=3, m=1: trace 1, norm 2.
        let r = RingCtx::new(3, 1).unwrap();
        let x = r.gr(2, 1);
        assert_eq!(r.galois_invariants(x), (1, 2));
        assert_eq!(r.galois_invariants(Gr::ZERO), (0, 0));
    }

    #[test]
    fn valuation_conventions() {
        let r = RingCtx::new(3, 3).unwrap();
        let x = r.scale_pow(r.gr(1, 1), 1);
        assert_eq!(r.valuation(x), 1);
        assert_eq!(r.valuation(Gr::ONE), 0);
        assert_eq!(r.valuation(Gr::ZERO), 3);
    }

    #[test]
    fn inversion() {
        let r = RingCtx::new(3, 2).unwrap();
        assert_eq!(r.invert(Gr::ONE).unwrap(), Gr::ONE);
        let s = r.sqrt_c();
        let si = r.invert(s).unwrap();
        assert_eq!(r.mul(si, s), Gr::ONE);
        assert_eq!(si, r.gr(0, 5));
        assert_eq!(r.invert(r.from_base(3)).unwrap_err(), Error::NonUnit);
    }

    #[test]
    fn encode_roundtrip() {
        let r = RingCtx::new(7, 2).unwrap();
        for x in r.elements().step_by(17) {
            assert_eq!(r.decode(r.encode(x)), x);
        }
    }
}
