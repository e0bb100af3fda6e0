//! Lattices in E^3 in canonical Howell form over the chain ring O/p^m,
//! and the independent [Gamma_n : A_n] oracle.
//!
//! A_n is the stabilizer of the standard lattice O^3 inside Gamma_n
//! (A_n = Gamma_n intersect Gamma_0), so [Gamma_n : A_n] equals the size of
//! the Gamma_n-orbit of O^3. Lattices are pinned in a window
//! p^(-s) O^3 >= L >= p^(m-s) O^3 and stored as the Howell form of
//! p^s L mod p^m, which is a canonical (hence hashable) representation.
//!
//! O/p^m is a chain ring, so row reduction never needs gcds: among the
//! entries of a column one of minimal valuation divides all others.

use alloc::vec::Vec;

use crate::error::Error;
use crate::matrix::PMatrix;
use crate::ring::{Gr, RingCtx};
use crate::Result;

/// Orbit-size guard for the lattice orbit BFS.
pub const ORBIT_GUARD: u64 = 10_000;

type Row = [Gr; 3];

/// In-place Howell canonical form of the row span inside (O/p^m)^3.
/// Pivots are normalized to powers of p; entries above a pivot (and to the
/// right of earlier pivots in the pivot's column) are reduced mod the
/// pivot; annihilator rows p^(m-e) * row are folded back in so the output
/// spans everything the input does.
pub(crate) fn howell_reduce(ring: &RingCtx, rows: &mut Vec<Row>) {
    let m = ring.precision();
    let mut done: Vec<(usize, u32, Row)> = Vec::new(); // (pivot col, exponent, row)
    let mut pool: Vec<Row> = core::mem::take(rows);
    pool.retain(|r| r.iter().any(|&x| ring.valuation(x) < m));

    for col in 0..3 {
        let best = pool
            .iter()
            .enumerate()
            .map(|(i, r)| (ring.valuation(r[col]), i))
            .filter(|&(v, _)| v < m)
            .min();
        let Some((e, idx)) = best else { continue };
        let mut piv = pool.swap_remove(idx);
        let unit = ring.shift_down(piv[col], e);
        let uinv = ring.invert(unit).expect("unit part of a pivot is invertible");
        for x in piv.iter_mut() {
            *x = ring.mul(*x, uinv);
        }
        debug_assert_eq!(piv[col], ring.scale_pow(Gr::ONE, e));
        for r in pool.iter_mut() {
            let v = r[col];
            if ring.valuation(v) >= m {
                continue;
            }
            let q = ring.shift_down(v, e);
            for t in 0..3 {
                r[t] = ring.sub(r[t], ring.mul(q, piv[t]));
            }
            debug_assert_eq!(ring.valuation(r[col]), m);
        }
        if e > 0 {
            let mut ann = [Gr::ZERO; 3];
            for t in 0..3 {
                ann[t] = ring.scale_pow(piv[t], m - e);
            }
            if ann.iter().any(|&x| ring.valuation(x) < m) {
                pool.push(ann);
            }
        }
        pool.retain(|r| r.iter().any(|&x| ring.valuation(x) < m));
        done.push((col, e, piv));
    }
    debug_assert!(pool.is_empty(), "all rows reduce to zero once every column is processed");

    // Reduce entries in earlier rows at each pivot column mod the pivot.
    for i in 0..done.len() {
        let (col, e, piv) = (done[i].0, done[i].1, done[i].2);
        let pe = ring.base_pow(ring.p(), e as u64);
        for j in 0..i {
            let x = done[j].2[col];
            let rem = Gr { a: x.a % pe, b: x.b % pe };
            let q = ring.shift_down(ring.sub(x, rem), e);
            for t in 0..3 {
                done[j].2[t] = ring.sub(done[j].2[t], ring.mul(q, piv[t]));
            }
            debug_assert_eq!(done[j].2[col], rem);
        }
    }

    *rows = done.into_iter().map(|(_, _, r)| r).collect();
}

/// Full o-module lattice in E^3: the value is p^(-scale) times the row span
/// of `basis`, which is kept in Howell canonical form mod p^m. Two lattices
/// with the same ring and scale are equal iff their bases are identical.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lattice {
    ring: RingCtx,
    scale: u32,
    basis: [Gr; 9],
}

impl Lattice {
    pub fn ring(&self) -> &RingCtx {
        &self.ring
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn basis(&self) -> &[Gr; 9] {
        &self.basis
    }

    fn rows(&self) -> Vec<Row> {
        (0..3).map(|i| [self.basis[3 * i], self.basis[3 * i + 1], self.basis[3 * i + 2]]).collect()
    }

    /// Membership of every row of `other` in `self` (row reduction against
    /// the triangular basis). Used by the double-inclusion span oracle.
    pub fn contains(&self, other: &Lattice) -> bool {
        if !self.ring.same_tower(&other.ring)
            || self.ring.precision() != other.ring.precision()
            || self.scale != other.scale
        {
            return false;
        }
        let ring = &self.ring;
        let basis = self.rows();
        for mut r in other.rows() {
            for b in &basis {
                let col = (0..3)
                    .find(|&c| ring.valuation(b[c]) < ring.precision())
                    .expect("basis rows are nonzero");
                let e = ring.valuation(b[col]);
                let x = r[col];
                if ring.valuation(x) >= ring.precision() {
                    continue;
                }
                if ring.valuation(x) < e {
                    return false;
                }
                let q = ring.shift_down(x, e);
                for t in 0..3 {
                    r[t] = ring.sub(r[t], ring.mul(q, b[t]));
                }
            }
            if !r.iter().all(|&x| ring.valuation(x) >= ring.precision()) {
                return false;
            }
        }
        true
    }
}

/// Canonical Howell form of the span of three rows, as the lattice
/// p^(-scale) * span. Fails with RankDeficient unless all three pivot
/// columns are present.
pub fn howell_form(ring: RingCtx, rows: [[Gr; 3]; 3], scale: u32) -> Result<Lattice> {
    let mut rows: Vec<Row> =
        rows.iter().map(|r| [ring.reduce(r[0]), ring.reduce(r[1]), ring.reduce(r[2])]).collect();
    howell_reduce(&ring, &mut rows);
    if rows.len() != 3 {
        return Err(Error::RankDeficient);
    }
    let mut basis = [Gr::ZERO; 9];
    for (i, r) in rows.iter().enumerate() {
        basis[3 * i..3 * i + 3].copy_from_slice(r);
    }
    Ok(Lattice { ring, scale, basis })
}

/// The standard lattice O^3, stored at the given scale: basis p^scale * I.
pub fn standard_lattice(ring: RingCtx, scale: u32) -> Result<Lattice> {
    if scale >= ring.precision() {
        return Err(Error::BadPrecision(scale));
    }
    let pk = ring.scale_pow(Gr::ONE, scale);
    let mut basis = [Gr::ZERO; 9];
    basis[0] = pk;
    basis[4] = pk;
    basis[8] = pk;
    Ok(Lattice { ring, scale, basis })
}

/// Canonical form of g * L. The action is computed at precision
/// m + den(g) and truncated back, so repeated actions do not decay the
/// representation; fails with InsufficientPrecision when g's numerator is
/// not known deep enough or when g moves L outside the scale window.
pub fn lattice_act(g: &PMatrix, lat: &Lattice) -> Result<Lattice> {
    if !g.ring().same_tower(&lat.ring) {
        return Err(Error::RingMismatch);
    }
    let m_rep = lat.ring.precision();
    let d = g.den_exp();
    let m_big = m_rep + d;
    if g.precision() < m_big {
        return Err(Error::InsufficientPrecision);
    }
    let big = lat.ring.at_precision(m_big)?;

    // Rows of p^s g L: basis rows times g^t, plus p^m_rep times the rows of
    // g^t (the implicit p^m_rep O^3 content of the stored basis).
    let mut rows: Vec<Row> = Vec::with_capacity(6);
    for i in 0..3 {
        let r = [lat.basis[3 * i], lat.basis[3 * i + 1], lat.basis[3 * i + 2]];
        let mut out = [Gr::ZERO; 3];
        for (j, o) in out.iter_mut().enumerate() {
            let mut acc = Gr::ZERO;
            for (s, &rs) in r.iter().enumerate() {
                acc = big.add(acc, big.mul(rs, big.reduce(g.entry(j, s))));
            }
            *o = acc;
        }
        rows.push(out);
    }
    for j in 0..3 {
        let mut out = [Gr::ZERO; 3];
        for (s, o) in out.iter_mut().enumerate() {
            *o = big.scale_pow(big.reduce(g.entry(s, j)), m_rep);
        }
        rows.push(out);
    }

    howell_reduce(&big, &mut rows);
    // Divide the span by p^d; failure means the image lattice left the
    // window p^(-s) O^3.
    for r in rows.iter() {
        for &x in r.iter() {
            if big.valuation(x) < d {
                return Err(Error::InsufficientPrecision);
            }
        }
    }
    let mut reduced: Vec<Row> = rows
        .iter()
        .map(|r| {
            let mut out = [Gr::ZERO; 3];
            for (t, o) in out.iter_mut().enumerate() {
                *o = lat.ring.reduce(big.shift_down(r[t], d));
            }
            out
        })
        .collect();
    howell_reduce(&lat.ring, &mut reduced);
    if reduced.len() != 3 {
        return Err(Error::RankDeficient);
    }
    let mut basis = [Gr::ZERO; 9];
    for (i, r) in reduced.iter().enumerate() {
        basis[3 * i..3 * i + 3].copy_from_slice(r);
    }
    Ok(Lattice { ring: lat.ring, scale: lat.scale, basis })
}

/// Evidence record for one lattice-orbit run.
#[derive(Clone, Debug)]
pub struct LatticeOrbitEvidence {
    pub p: u64,
    pub n: u32,
    pub size: u64,
    pub generator_count: usize,
    /// Orbit elements that returned to the standard lattice and were
    /// verified to satisfy is_member(A(n)).
    pub stabilizer_hits: u64,
}

/// Size of the Gamma_n-orbit of the standard lattice, the independent
/// oracle for [Gamma_n : A_n]. Generators: sigma_n, the corner translations
/// t_j(u) for j <= n, and an A_n family (upper/lower unipotents and torus
/// elements with norm-one center in 1 + p^n). Every generated element that
/// stabilizes O^3 is checked against is_member(A(n)).
pub fn gamma_lattice_orbit(p: u64, n: u32, prec: u32) -> Result<LatticeOrbitEvidence> {
    if n == 0 {
        return Err(Error::BadPrecision(n));
    }
    // Window exponent n: every orbit lattice satisfies
    // O^3 >= p^n (g O^3) >= p^(2n) O^3, so pivots stay below 2n + 1 digits.
    let m_rep = 2 * n + 1;
    if prec < 2 * n + 4 || prec < m_rep + n {
        return Err(Error::InsufficientPrecision);
    }
    let ring = RingCtx::new(p, prec)?;
    let rep_ring = ring.at_precision(m_rep)?;
    let scale = n;

    let gens = gamma_generators(&ring, n)?;
    let start = standard_lattice(rep_ring, scale)?;
    let start_key = lattice_key(&start);

    use alloc::collections::{BTreeSet, VecDeque};
    let mut visited: BTreeSet<[u128; 3]> = BTreeSet::new();
    visited.insert(start_key);
    let mut queue: VecDeque<(Lattice, Option<PMatrix>)> = VecDeque::new();
    queue.push_back((start.clone(), Some(PMatrix::identity(ring))));
    let mut stabilizer_hits = 0u64;

    while let Some((lat, witness)) = queue.pop_front() {
        for g in &gens {
            let image = lattice_act(g, &lat)?;
            let key = lattice_key(&image);
            let next_witness = match &witness {
                Some(w) => g.mat_mul(w).ok(),
                None => None,
            };
            if key == start_key {
                if let Some(w) = &next_witness {
                    if w.effective_precision() >= n + 1 {
                        assert!(
                            w.is_member(crate::matrix::SubgroupId::A(n))?,
                            "orbit stabilizer must lie in A_n"
                        );
                        stabilizer_hits += 1;
                    }
                }
            }
            if visited.insert(key) {
                if visited.len() as u64 > ORBIT_GUARD {
                    return Err(Error::GuardExceeded {
                        guard: ORBIT_GUARD,
                        reached: visited.len() as u64,
                    });
                }
                queue.push_back((image, next_witness));
            }
        }
    }

    Ok(LatticeOrbitEvidence {
        p,
        n,
        size: visited.len() as u64,
        generator_count: gens.len(),
        stabilizer_hits,
    })
}

fn lattice_key(lat: &Lattice) -> [u128; 3] {
    let r = lat.ring();
    let md = r.modulus() as u128;
    let mut out = [0u128; 3];
    for i in 0..3 {
        let mut acc = 0u128;
        for j in 0..3 {
            acc = acc * md * md + r.encode(lat.basis[3 * i + j]);
        }
        out[i] = acc;
    }
    out
}

/// The Gamma_n generating family used by the orbit oracle: the coset ladder
/// representatives plus an A_n stirring set.
fn gamma_generators(ring: &RingCtx, n: u32) -> Result<Vec<PMatrix>> {
    use crate::matrix::{lower_beta, special_element, upper_beta, SpecialElement};
    let mut gens = Vec::new();
    gens.push(special_element(*ring, SpecialElement::Sigma { n })?);
    for j in 1..=n {
        for b in 1..ring.p() {
            let u = ring.gr(0, b);
            gens.push(special_element(*ring, SpecialElement::Translation { level: j, u })?);
        }
    }
    let rf = ring.at_precision(1)?;
    for alpha in rf.elements() {
        for tzb in 0..ring.p() {
            let tz = ring.gr(0, tzb);
            let beta = upper_beta(ring, alpha, tz);
            gens.push(special_element(*ring, SpecialElement::Upper { alpha, beta })?);
            let lbeta = lower_beta(ring, n, alpha, tz);
            gens.push(special_element(*ring, SpecialElement::Lower { n, alpha, beta: lbeta })?);
        }
    }
    for a in [ring.gr(ring.p() + 1, 1), ring.add(Gr::ONE, ring.scale_pow(Gr::ONE, 1))] {
        if ring.is_unit(a) {
            gens.push(special_element(*ring, SpecialElement::Torus { a, b: Gr::ONE })?);
        }
    }
    let b = crate::matrix::cayley_norm_one(ring, ring.scale_pow(ring.sqrt_c(), n));
    gens.push(special_element(*ring, SpecialElement::Torus { a: Gr::ONE, b })?);
    Ok(gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{special_element, SpecialElement};

    #[test]
    fn identity_rows_are_canonical() {
        let r = RingCtx::new(3, 4).unwrap();
        let e = |a: u64| r.from_base(a);
        let lat = howell_form(
            r,
            [[Gr::ONE, e(0), e(0)], [e(0), Gr::ONE, e(0)], [e(0), e(0), Gr::ONE]],
            0,
        )
        .unwrap();
        let expect = standard_lattice(r, 0).unwrap();
        assert_eq!(lat, expect);
    }

    #[test]
    fn permuted_diagonal_rows_canonicalize_identically() {
        let r = RingCtx::new(3, 4).unwrap();
        let z = Gr::ZERO;
        let p1 = r.scale_pow(Gr::ONE, 1);
        let rows_a = [[p1, z, z], [z, Gr::ONE, z], [z, z, Gr::ONE]];
        let rows_b = [[z, z, Gr::ONE], [p1, z, z], [z, Gr::ONE, z]];
        let la = howell_form(r, rows_a, 0).unwrap();
        let lb = howell_form(r, rows_b, 0).unwrap();
        assert_eq!(la, lb);
        assert!(la.contains(&lb) && lb.contains(&la));
    }

    #[test]
    fn rank_deficient_rows_are_rejected() {
        let r = RingCtx::new(3, 3).unwrap();
        let z = Gr::ZERO;
        let rows = [[Gr::ONE, z, z], [Gr::ONE, z, z], [z, Gr::ONE, z]];
        assert_eq!(howell_form(r, rows, 0).unwrap_err(), Error::RankDeficient);
    }

    #[test]
    fn identity_acts_trivially_and_weyl_fixes_standard() {
        let r = RingCtx::new(3, 8).unwrap();
        let rep = r.at_precision(5).unwrap();
        let lat = standard_lattice(rep, 2).unwrap();
        let id = PMatrix::identity(r);
        assert_eq!(lattice_act(&id, &lat).unwrap(), lat);
        let j = special_element(r, SpecialElement::WeylJ).unwrap();
        assert_eq!(lattice_act(&j, &lat).unwrap(), lat);
    }

    #[test]
    fn sigma_moves_the_standard_lattice() {
        let r = RingCtx::new(3, 8).unwrap();
        let rep = r.at_precision(5).unwrap();
        let lat = standard_lattice(rep, 2).unwrap();
        let s = special_element(r, SpecialElement::Sigma { n: 1 }).unwrap();
        let moved = lattice_act(&s, &lat).unwrap();
        assert_ne!(moved, lat);
        // sigma^2 = 1 brings it back.
        assert_eq!(lattice_act(&s, &moved).unwrap(), lat);
    }

    #[test]
    fn orbit_sizes_match_the_ladder_formula() {
        assert_eq!(gamma_lattice_orbit(3, 1, 7).unwrap().size, 4);
        assert_eq!(gamma_lattice_orbit(3, 2, 8).unwrap().size, 12);
        assert_eq!(gamma_lattice_orbit(5, 1, 7).unwrap().size, 6);
    }
}
