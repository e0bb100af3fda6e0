//! Precision-tracked 3x3 matrix arithmetic over E with bounded
//! denominators, unitarity testing and subgroup membership predicates.
//!
//! A [`PMatrix`] stores `p^(-den) * entries` with the numerator entries
//! known mod p^m (m = the ring precision). The entry values of the matrix
//! are then determined mod p^(m - den); we call m - den the effective
//! precision. Valuation comparisons are only answered when they are
//! actually decided at the stored precision, otherwise operations return
//! [`Error::InsufficientPrecision`].
//!
//! The unitary group is U = {g : conj(g)^t J g = J} with J the antidiagonal
//! identity. Unitary inversion g^(-1) = J conj(g)^t J is exact and loses no
//! precision; a product costs the sum of the denominators in effective
//! precision.

use core::fmt;

use crate::error::Error;
use crate::ring::{Gr, RingCtx};
use crate::Result;

/// Symbolic identifier of a congruence subgroup, backed by the membership
/// predicate [`PMatrix::is_member`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SubgroupId {
    /// The whole unitary group (unitarity only).
    Full,
    /// Gamma_n: integral with (1,3) in p^(-n), lower-left in p^n, center
    /// in 1 + p^n, unit determinant.
    Gamma(u32),
    /// A_n = Gamma_n with integral (1,3) entry; the Klingen-type subgroup,
    /// equal to Gamma_n intersect Gamma_0.
    A(u32),
    /// B_n: upper triangular mod p^n (Iwahori-type).
    B(u32),
    /// C_n^(k): Gamma_n with the (1,3) entry in p^(k-n); the ladder between
    /// Gamma_n = C_n^(0) and A_n = C_n^(n). Requires k <= n.
    C(u32, u32),
    /// Principal congruence subgroup: g = 1 mod p^N.
    Principal(u32),
}

impl SubgroupId {
    /// Congruence level: the largest exponent appearing in the defining
    /// valuation constraints.
    pub fn level(&self) -> u32 {
        match *self {
            SubgroupId::Full => 0,
            SubgroupId::Gamma(n) | SubgroupId::A(n) | SubgroupId::B(n) => n,
            SubgroupId::C(n, _) => n,
            SubgroupId::Principal(n) => n,
        }
    }
}

impl fmt::Display for SubgroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SubgroupId::Full => write!(f, "U"),
            SubgroupId::Gamma(n) => write!(f, "Gamma_{n}"),
            SubgroupId::A(n) => write!(f, "A_{n}"),
            SubgroupId::B(n) => write!(f, "B_{n}"),
            SubgroupId::C(n, k) => write!(f, "C_{n}^({k})"),
            SubgroupId::Principal(n) => write!(f, "K_{n}"),
        }
    }
}

/// 3x3 matrix over O/p^m together with a denominator exponent: the value is
/// `p^(-den) * entries`. Canonical form: den = 0 or some entry is a unit.
#[derive(Clone, PartialEq, Eq)]
pub struct PMatrix {
    ring: RingCtx,
    den: u32,
    entries: [Gr; 9],
}

impl fmt::Debug for PMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p^-{} * [", self.den)?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({},{})", e.a, e.b)?;
        }
        write!(f, "] den_exp={} prec={}", self.den, self.ring.precision())
    }
}

impl PMatrix {
    /// Builds `p^(-den) * entries` mod p^(ring precision), re-canonicalized.
    pub fn from_entries(ring: RingCtx, den: u32, entries: [Gr; 9]) -> PMatrix {
        let mut entries = entries;
        for e in entries.iter_mut() {
            *e = ring.reduce(*e);
        }
        Self::canonical(ring, den, entries)
    }

    fn canonical(ring: RingCtx, den: u32, entries: [Gr; 9]) -> PMatrix {
        let min_val = entries.iter().map(|&e| ring.valuation(e)).min().unwrap();
        let k = den.min(min_val);
        if k == 0 {
            return PMatrix { ring, den, entries };
        }
        let sub = ring
            .at_precision(ring.precision() - k)
            .expect("canonical strip keeps at least one digit");
        let mut out = entries;
        for e in out.iter_mut() {
            *e = ring.shift_down(*e, k);
        }
        PMatrix { ring: sub, den: den - k, entries: out }
    }

    pub fn identity(ring: RingCtx) -> PMatrix {
        let mut entries = [Gr::ZERO; 9];
        entries[0] = Gr::ONE;
        entries[4] = Gr::ONE;
        entries[8] = Gr::ONE;
        PMatrix { ring, den: 0, entries }
    }

    pub fn ring(&self) -> &RingCtx {
        &self.ring
    }

    /// Numerator precision exponent m.
    pub fn precision(&self) -> u32 {
        self.ring.precision()
    }

    pub fn den_exp(&self) -> u32 {
        self.den
    }

    /// Digits at which the entry values are determined: m - den.
    pub fn effective_precision(&self) -> u32 {
        self.ring.precision() - self.den
    }

    /// Numerator entry (row, col), 0-based.
    pub fn entry(&self, row: usize, col: usize) -> Gr {
        self.entries[3 * row + col]
    }

    pub fn entries(&self) -> &[Gr; 9] {
        &self.entries
    }

    /// Truncates the numerator modulus to p^m_new (m_new <= m). The
    /// denominator is kept, so effective precision drops accordingly.
    pub fn reduce_to_precision(&self, m_new: u32) -> Result<PMatrix> {
        if m_new == 0 || m_new > self.ring.precision() {
            return Err(Error::BadPrecision(m_new));
        }
        if m_new <= self.den {
            return Err(Error::InsufficientPrecision);
        }
        let sub = self.ring.at_precision(m_new)?;
        let mut entries = self.entries;
        for e in entries.iter_mut() {
            *e = sub.reduce(*e);
        }
        Ok(PMatrix::canonical(sub, self.den, entries))
    }

    /// Value equality at the common precision: p^(d2) N1 = p^(d1) N2 mod
    /// the smaller modulus. Conservative and exact for what is stored.
    pub fn eq_value(&self, other: &PMatrix) -> bool {
        if !self.ring.same_tower(&other.ring) {
            return false;
        }
        let m = self.ring.precision().min(other.ring.precision());
        let sub = self.ring.at_precision(m).expect("common precision is valid");
        (0..9).all(|i| {
            let lhs = sub.scale_pow(sub.reduce(self.entries[i]), other.den);
            let rhs = sub.scale_pow(sub.reduce(other.entries[i]), self.den);
            lhs == rhs
        })
    }

    /// Decides val(entry) >= k at the stored precision.
    pub fn entry_val_at_least(&self, row: usize, col: usize, k: i64) -> Result<bool> {
        let need = k + self.den as i64;
        if need <= 0 {
            return Ok(true);
        }
        if need > self.ring.precision() as i64 {
            return Err(Error::InsufficientPrecision);
        }
        Ok(self.ring.valuation(self.entry(row, col)) as i64 >= need)
    }

    /// Decides val(entry - 1) >= k at the stored precision.
    fn entry_minus_one_val_at_least(&self, row: usize, col: usize, k: i64) -> Result<bool> {
        let need = k + self.den as i64;
        if need > self.ring.precision() as i64 {
            return Err(Error::InsufficientPrecision);
        }
        if need <= 0 {
            return Ok(true);
        }
        let one = self.ring.scale_pow(Gr::ONE, self.den);
        let diff = self.ring.sub(self.entry(row, col), one);
        Ok(self.ring.valuation(diff) as i64 >= need)
    }

    /// Determinant of the numerator matrix mod p^m. The determinant of the
    /// value carries an implied denominator p^(-3 den).
    pub fn det_num(&self) -> Gr {
        let r = &self.ring;
        let e = |i: usize, j: usize| self.entry(i, j);
        let minor = |a: Gr, b: Gr, c: Gr, d: Gr| r.sub(r.mul(a, d), r.mul(b, c));
        let m0 = minor(e(1, 1), e(1, 2), e(2, 1), e(2, 2));
        let m1 = minor(e(1, 0), e(1, 2), e(2, 0), e(2, 2));
        let m2 = minor(e(1, 0), e(1, 1), e(2, 0), e(2, 1));
        r.add(r.sub(r.mul(e(0, 0), m0), r.mul(e(0, 1), m1)), r.mul(e(0, 2), m2))
    }

    /// Decides whether the determinant of the value is a unit.
    pub fn det_is_unit(&self) -> Result<bool> {
        let need = 3 * self.den + 1;
        if need > self.ring.precision() {
            return Err(Error::InsufficientPrecision);
        }
        Ok(self.ring.valuation(self.det_num()) == 3 * self.den)
    }

    /// Exact product, at effective precision reduced by the combined
    /// denominators; fails when fewer than one digit would remain.
    pub fn mat_mul(&self, other: &PMatrix) -> Result<PMatrix> {
        if !self.ring.same_tower(&other.ring) {
            return Err(Error::RingMismatch);
        }
        let m = self.ring.precision().min(other.ring.precision());
        let den = self.den + other.den;
        if den + 1 > m {
            return Err(Error::InsufficientPrecision);
        }
        let r = self.ring.at_precision(m)?;
        let mut prod = [Gr::ZERO; 9];
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Gr::ZERO;
                for k in 0..3 {
                    let x = r.reduce(self.entry(i, k));
                    let y = r.reduce(other.entry(k, j));
                    acc = r.add(acc, r.mul(x, y));
                }
                prod[3 * i + j] = acc;
            }
        }
        Ok(PMatrix::canonical(r, den, prod))
    }

    /// conj(g)^t J g compared against p^(2 den) J at the stored precision.
    pub fn is_unitary(&self) -> Result<bool> {
        if 2 * self.den + 1 > self.ring.precision() {
            return Err(Error::InsufficientPrecision);
        }
        let r = &self.ring;
        let target = r.scale_pow(Gr::ONE, 2 * self.den);
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Gr::ZERO;
                for k in 0..3 {
                    acc = r.add(acc, r.mul(r.conj(self.entry(k, i)), self.entry(2 - k, j)));
                }
                let expect = if i + j == 2 { target } else { Gr::ZERO };
                if acc != expect {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// g^(-1) = J conj(g)^t J; exact, no precision loss.
    pub fn unitary_inverse(&self) -> Result<PMatrix> {
        if !self.is_unitary()? {
            return Err(Error::NotUnitary);
        }
        let mut entries = [Gr::ZERO; 9];
        for i in 0..3 {
            for j in 0..3 {
                entries[3 * i + j] = self.ring.conj(self.entry(2 - j, 2 - i));
            }
        }
        Ok(PMatrix { ring: self.ring, den: self.den, entries })
    }

    /// Membership in the congruence subgroup `s`, decided by entry-wise
    /// valuation constraints plus the unit-determinant condition. Non-unitary
    /// matrices are never members. Needs effective precision >= level + 1.
    pub fn is_member(&self, s: SubgroupId) -> Result<bool> {
        if let SubgroupId::C(n, k) = s {
            if k > n {
                return Err(Error::ConstraintViolated("C(n, k) requires k <= n"));
            }
        }
        let level = s.level() as i64;
        if (self.effective_precision() as i64) < level + 1 {
            return Err(Error::InsufficientPrecision);
        }
        if !self.is_unitary()? {
            return Ok(false);
        }
        if !self.det_is_unit()? {
            return Ok(false);
        }
        match s {
            SubgroupId::Full => Ok(true),
            SubgroupId::Gamma(n) => self.congruence_shape(n as i64, -(n as i64)),
            SubgroupId::A(n) => self.congruence_shape(n as i64, 0),
            SubgroupId::B(n) => {
                let n = n as i64;
                Ok(self.entry_val_at_least(1, 0, n)?
                    && self.entry_val_at_least(2, 0, n)?
                    && self.entry_val_at_least(2, 1, n)?
                    && self.integral()?)
            }
            SubgroupId::C(n, k) => self.congruence_shape(n as i64, k as i64 - n as i64),
            SubgroupId::Principal(n) => {
                let n = n as i64;
                for i in 0..3 {
                    for j in 0..3 {
                        let ok = if i == j {
                            self.entry_minus_one_val_at_least(i, j, n)?
                        } else {
                            self.entry_val_at_least(i, j, n)?
                        };
                        if !ok {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
        }
    }

    /// The Gamma_n-like shape with a configurable (1,3) floor: lower-left
    /// in p^n, center in 1 + p^n, (1,3) in p^corner, the rest integral.
    fn congruence_shape(&self, n: i64, corner: i64) -> Result<bool> {
        Ok(self.entry_val_at_least(0, 0, 0)?
            && self.entry_val_at_least(0, 1, 0)?
            && self.entry_val_at_least(0, 2, corner)?
            && self.entry_val_at_least(1, 0, n)?
            && self.entry_minus_one_val_at_least(1, 1, n)?
            && self.entry_val_at_least(1, 2, 0)?
            && self.entry_val_at_least(2, 0, n)?
            && self.entry_val_at_least(2, 1, n)?
            && self.entry_val_at_least(2, 2, 0)?)
    }

    fn integral(&self) -> Result<bool> {
        for i in 0..3 {
            for j in 0..3 {
                if !self.entry_val_at_least(i, j, 0)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Constructors for the special elements used throughout: the corner
/// translations t_k(u), the level flip sigma_n, the unipotent triangular
/// elements, the diagonal torus and the antidiagonal Weyl representative J.
#[derive(Clone, Copy, Debug)]
pub enum SpecialElement {
    /// t_k(u): identity with u p^(-k) in the corner; requires trace(u) = 0.
    Translation { level: u32, u: Gr },
    /// sigma_n = antidiag(p^(-n), 1, p^n).
    Sigma { n: u32 },
    /// Upper unipotent [[1, alpha, beta], [0, 1, -conj(alpha)], [0, 0, 1]];
    /// requires trace(beta) + norm(alpha) = 0.
    Upper { alpha: Gr, beta: Gr },
    /// Lower unipotent with (2,1) = alpha p^n, (3,1) = beta p^n,
    /// (3,2) = -conj(alpha) p^n; requires trace(beta) + norm(alpha) p^n = 0
    /// (the exact closure condition; at n = 0 this is the familiar
    /// beta + conj(beta) + alpha conj(alpha) = 0).
    Lower { n: u32, alpha: Gr, beta: Gr },
    /// diag(a, b, conj(a)^(-1)); requires a a unit and norm(b) = 1.
    Torus { a: Gr, b: Gr },
    /// The antidiagonal identity J; J^2 = 1.
    WeylJ,
}

/// Builds the requested special element at the ring's precision. Every
/// output passes [`PMatrix::is_unitary`].
pub fn special_element(ring: RingCtx, kind: SpecialElement) -> Result<PMatrix> {
    let r = &ring;
    match kind {
        SpecialElement::Translation { level, u } => {
            let u = r.reduce(u);
            if r.trace(u) != 0 {
                return Err(Error::ConstraintViolated("t_k(u) requires trace(u) = 0"));
            }
            if level >= ring.precision() {
                return Err(Error::InsufficientPrecision);
            }
            let mut e = [Gr::ZERO; 9];
            let pk = r.scale_pow(Gr::ONE, level);
            e[0] = pk;
            e[4] = pk;
            e[8] = pk;
            e[2] = u;
            Ok(PMatrix::from_entries(ring, level, e))
        }
        SpecialElement::Sigma { n } => {
            if 2 * n >= ring.precision() {
                return Err(Error::InsufficientPrecision);
            }
            let mut e = [Gr::ZERO; 9];
            e[2] = Gr::ONE;
            e[4] = r.scale_pow(Gr::ONE, n);
            e[6] = r.scale_pow(Gr::ONE, 2 * n);
            Ok(PMatrix::from_entries(ring, n, e))
        }
        SpecialElement::Upper { alpha, beta } => {
            let (alpha, beta) = (r.reduce(alpha), r.reduce(beta));
            if r.base_add(r.trace(beta), r.norm(alpha)) != 0 {
                return Err(Error::ConstraintViolated(
                    "Upper requires beta + conj(beta) + alpha conj(alpha) = 0",
                ));
            }
            let mut e = [Gr::ZERO; 9];
            e[0] = Gr::ONE;
            e[4] = Gr::ONE;
            e[8] = Gr::ONE;
            e[1] = alpha;
            e[2] = beta;
            e[5] = r.neg(r.conj(alpha));
            Ok(PMatrix::from_entries(ring, 0, e))
        }
        SpecialElement::Lower { n, alpha, beta } => {
            let (alpha, beta) = (r.reduce(alpha), r.reduce(beta));
            let shifted_norm = r.base_mul(r.norm(alpha), r.base_pow(r.p(), n as u64));
            if r.base_add(r.trace(beta), shifted_norm) != 0 {
                return Err(Error::ConstraintViolated(
                    "Lower requires beta + conj(beta) + alpha conj(alpha) p^n = 0",
                ));
            }
            let mut e = [Gr::ZERO; 9];
            e[0] = Gr::ONE;
            e[4] = Gr::ONE;
            e[8] = Gr::ONE;
            e[3] = r.scale_pow(alpha, n);
            e[6] = r.scale_pow(beta, n);
            e[7] = r.neg(r.conj(r.scale_pow(alpha, n)));
            Ok(PMatrix::from_entries(ring, 0, e))
        }
        SpecialElement::Torus { a, b } => {
            let (a, b) = (r.reduce(a), r.reduce(b));
            if r.norm(b) != 1 {
                return Err(Error::ConstraintViolated("Torus requires norm(b) = 1"));
            }
            let ainv =
                r.invert(a).map_err(|_| Error::ConstraintViolated("Torus requires a unit"))?;
            let mut e = [Gr::ZERO; 9];
            e[0] = a;
            e[4] = b;
            e[8] = r.conj(ainv);
            Ok(PMatrix::from_entries(ring, 0, e))
        }
        SpecialElement::WeylJ => {
            let mut e = [Gr::ZERO; 9];
            e[2] = Gr::ONE;
            e[4] = Gr::ONE;
            e[6] = Gr::ONE;
            Ok(PMatrix::from_entries(ring, 0, e))
        }
    }
}

/// Solves trace(beta) = -norm(alpha) with the canonical particular solution
/// -norm(alpha)/2; `tz` shifts within the trace-zero coset.
pub fn upper_beta(ring: &RingCtx, alpha: Gr, tz: Gr) -> Gr {
    debug_assert_eq!(ring.trace(tz), 0);
    let half = ring.base_inv(2).expect("2 is a unit for odd p");
    let part = ring.from_base(ring.base_neg(ring.base_mul(ring.norm(alpha), half)));
    ring.add(part, tz)
}

/// Solves trace(beta) = -norm(alpha) p^n, the level-n lower constraint.
pub fn lower_beta(ring: &RingCtx, n: u32, alpha: Gr, tz: Gr) -> Gr {
    debug_assert_eq!(ring.trace(tz), 0);
    let half = ring.base_inv(2).expect("2 is a unit for odd p");
    let shifted = ring.base_mul(ring.norm(alpha), ring.base_pow(ring.p(), n as u64));
    let part = ring.from_base(ring.base_neg(ring.base_mul(shifted, half)));
    ring.add(part, tz)
}

/// The Cayley-type norm-one unit (1 + u)/(1 - u) for trace-zero u; exact,
/// and congruent to 1 + 2u mod u^2.
pub fn cayley_norm_one(ring: &RingCtx, tz: Gr) -> Gr {
    debug_assert_eq!(ring.trace(tz), 0);
    let one_minus = ring.sub(Gr::ONE, tz);
    let inv =
        ring.invert(one_minus).expect("1 - u is a unit for trace-zero u, c a non-residue");
    ring.mul(ring.add(Gr::ONE, tz), inv)
}

/// Lifts a norm-one residue mod p^n to a norm-one element mod p^m
/// (m = ring precision), congruent to the input mod p^n. The correction
/// step x -> x (1 - (norm(x)-1)/2) converges quadratically; failure would
/// contradict Hensel's lemma for the smooth norm map on units.
pub fn norm_one_lift(ring: &RingCtx, eps: Gr, n: u32) -> Result<Gr> {
    let level = ring.at_precision(n)?;
    if level.norm(level.reduce(eps)) != 1 {
        return Err(Error::ConstraintViolated("input must have norm 1 mod p^n"));
    }
    let half = ring.base_inv(2).expect("2 is a unit for odd p");
    let mut x = ring.reduce(eps);
    for _ in 0..64 {
        let err = ring.base_sub(ring.norm(x), 1);
        if err == 0 {
            debug_assert_eq!(level.reduce(x), level.reduce(eps));
            return Ok(x);
        }
        let s = ring.from_base(ring.base_sub(1, ring.base_mul(err, half)));
        x = ring.mul(x, s);
    }
    Err(Error::LiftFailed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, m: u32) -> RingCtx {
        RingCtx::new(p, m).unwrap()
    }

    #[test]
    fn identity_and_weyl() {
        let r = ring(3, 6);
        let i = PMatrix::identity(r);
        let j = special_element(r, SpecialElement::WeylJ).unwrap();
        assert!(i.is_unitary().unwrap());
        assert!(j.is_unitary().unwrap());
        assert!(j.mat_mul(&j).unwrap().eq_value(&i));
        assert!(j.unitary_inverse().unwrap().eq_value(&j));
    }

    #[test]
    fn sigma_squares_to_identity() {
        let r = ring(3, 6);
        let s = special_element(r, SpecialElement::Sigma { n: 1 }).unwrap();
        let prod = s.mat_mul(&s).unwrap();
        assert!(prod.eq_value(&PMatrix::identity(r)));
        assert_eq!(prod.den_exp(), 0);
        let s2 = special_element(r, SpecialElement::Sigma { n: 2 }).unwrap();
        assert!(s2.unitary_inverse().unwrap().eq_value(&s2));
    }

    #[test]
    fn translations_commute_and_add() {
        let r = ring(3, 6);
        let u = r.gr(0, 1);
        let v = r.gr(0, 2);
        let t1 = special_element(r, SpecialElement::Translation { level: 1, u }).unwrap();
        let t2 = special_element(r, SpecialElement::Translation { level: 1, u: v }).unwrap();
        let sum = special_element(r, SpecialElement::Translation { level: 1, u: r.add(u, v) })
            .unwrap();
        assert!(t1.mat_mul(&t2).unwrap().eq_value(&sum));
        let g = t1.mat_mul(&PMatrix::identity(r)).unwrap();
        assert!(g.eq_value(&t1));
    }

    #[test]
    fn translation_requires_trace_zero() {
        let r = ring(3, 4);
        let err = special_element(r, SpecialElement::Translation { level: 1, u: Gr::ONE });
        assert!(matches!(err, Err(Error::ConstraintViolated(_))));
    }

    #[test]
    fn unitarity_of_diagonal_scalings() {
        let r = ring(3, 6);
        // diag(p, 1, p^-1): unitary by the antidiagonal pairing.
        let mut e = [Gr::ZERO; 9];
        e[0] = r.scale_pow(Gr::ONE, 2);
        e[4] = r.scale_pow(Gr::ONE, 1);
        e[8] = Gr::ONE;
        let g = PMatrix::from_entries(r, 1, e);
        assert!(g.is_unitary().unwrap());
        // diag(p, 1, 1) fails the (1,3) pairing.
        let mut e = [Gr::ZERO; 9];
        e[0] = r.scale_pow(Gr::ONE, 1);
        e[4] = Gr::ONE;
        e[8] = Gr::ONE;
        let h = PMatrix::from_entries(r, 0, e);
        assert!(!h.is_unitary().unwrap());
    }

    #[test]
    fn sigma_is_a_gamma_member() {
        let r = ring(3, 6);
        let s = special_element(r, SpecialElement::Sigma { n: 1 }).unwrap();
        assert!(s.is_member(SubgroupId::Gamma(1)).unwrap());
        assert!(!s.is_member(SubgroupId::A(1)).unwrap());
        assert!(s.is_member(SubgroupId::C(1, 0)).unwrap());
    }

    #[test]
    fn translation_membership_matches_trace_condition() {
        let r = ring(3, 6);
        let u = r.gr(0, 2);
        let t = special_element(r, SpecialElement::Translation { level: 1, u }).unwrap();
        assert!(t.is_member(SubgroupId::Gamma(1)).unwrap());
        // A raw corner matrix whose corner is not trace-zero is not unitary,
        // hence not a member.
        let mut e = [Gr::ZERO; 9];
        let p1 = r.scale_pow(Gr::ONE, 1);
        e[0] = p1;
        e[4] = p1;
        e[8] = p1;
        e[2] = Gr::ONE;
        let raw = PMatrix::from_entries(r, 1, e);
        assert!(!raw.is_member(SubgroupId::Gamma(1)).unwrap());
    }

    #[test]
    fn torus_with_norm_one_center_sits_in_every_b() {
        let r = ring(3, 6);
        let b = cayley_norm_one(&r, r.gr(0, 1));
        assert_eq!(r.norm(b), 1);
        let t = special_element(r, SpecialElement::Torus { a: Gr::ONE, b }).unwrap();
        for n in 1..=5 {
            assert!(t.is_member(SubgroupId::B(n)).unwrap());
        }
    }

    #[test]
    fn upper_beta_solves_the_constraint() {
        let r = ring(3, 5);
        for alpha in [r.gr(1, 0), r.gr(0, 1), r.gr(2, 2)] {
            for tz in [Gr::ZERO, r.gr(0, 1)] {
                let beta = upper_beta(&r, alpha, tz);
                let g = special_element(r, SpecialElement::Upper { alpha, beta }).unwrap();
                assert!(g.is_unitary().unwrap());
                assert!(g.is_member(SubgroupId::B(1)).unwrap());
                assert!(g.is_member(SubgroupId::A(2)).unwrap());
            }
        }
    }

    #[test]
    fn lower_level_constraint() {
        let r = ring(3, 6);
        let alpha = r.gr(1, 1);
        let beta = lower_beta(&r, 2, alpha, r.gr(0, 2));
        let g = special_element(r, SpecialElement::Lower { n: 2, alpha, beta }).unwrap();
        assert!(g.is_unitary().unwrap());
        assert!(g.is_member(SubgroupId::B(2)).unwrap());
        assert!(g.is_member(SubgroupId::A(2)).unwrap());
        // The residue-field constraint alone does not close at level 2.
        let bad = upper_beta(&r, alpha, Gr::ZERO);
        if bad != beta {
            assert!(matches!(
                special_element(r, SpecialElement::Lower { n: 2, alpha, beta: bad }),
                Err(Error::ConstraintViolated(_))
            ));
        }
    }

    #[test]
    fn norm_one_lifting() {
        let r = ring(3, 8);
        for eps in r.norm_one_elements(2).unwrap() {
            let lift = norm_one_lift(&r, eps, 2).unwrap();
            assert_eq!(r.norm(lift), 1);
            assert_eq!(r.at_precision(2).unwrap().reduce(lift), eps);
        }
    }

    #[test]
    fn insufficient_precision_is_reported() {
        let r = ring(3, 3);
        let s = special_element(r, SpecialElement::Sigma { n: 1 }).unwrap();
        assert!(s.mat_mul(&s).is_ok());
        let t =
            special_element(r, SpecialElement::Translation { level: 1, u: r.gr(0, 1) }).unwrap();
        let prod = s.mat_mul(&t).unwrap();
        // Membership at level 1 needs effective precision 2.
        assert_eq!(
            prod.is_member(SubgroupId::Gamma(1)).unwrap_err(),
            Error::InsufficientPrecision
        );
    }

    #[test]
    fn canonicalization_is_idempotent() {
        let r = ring(3, 6);
        let s = special_element(r, SpecialElement::Sigma { n: 2 }).unwrap();
        let re = PMatrix::from_entries(*s.ring(), s.den_exp(), *s.entries());
        assert_eq!(s, re);
    }
}
