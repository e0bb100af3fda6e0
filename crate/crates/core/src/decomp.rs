//! The three structural decompositions: the Klingen-ladder coset reduction
//! between Gamma_n and A_n, the Iwahori factorization of B_n, and the
//! Bruhat decomposition of the residue-field group.

use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::error::Error;
use crate::group::visit_residue_group;
use crate::matrix::{
    lower_beta, special_element, PMatrix, SpecialElement, SubgroupId,
};
use crate::ring::{Gr, RingCtx};
use crate::sample;
use crate::Result;

/// One rung of the ladder reduction: `rep * remainder = input` with the
/// remainder one level deeper in the C_n^(k) chain.
#[derive(Clone, Debug)]
pub struct KlingenStep {
    pub rep: PMatrix,
    pub remainder: PMatrix,
}

/// Reduces g in C_n^(k) one rung: when k = 0 and the (3,3) entry is
/// non-unit the representative is sigma_n, otherwise it is t_{n-k}(u) with
/// u the trace-zero lift of iota^{-1} gamma mod p (gamma = the scaled
/// corner entry). The remainder rep^{-1} g is verified to land in
/// C_n^(k+1); TraceObstruction fires if iota^{-1} gamma has unit trace,
/// which would falsify the coset decomposition and must never happen.
pub fn klingen_reduce(g: &PMatrix, n: u32, k: u32) -> Result<KlingenStep> {
    if k >= n {
        return Err(Error::ConstraintViolated("klingen_reduce needs 0 <= k < n"));
    }
    if !g.is_member(SubgroupId::C(n, k))? {
        return Err(Error::NotInSubgroup);
    }
    let ring = *g.ring();
    let d = g.den_exp();

    // iota = (3,3) entry; a value-level unit iff its numerator has
    // valuation exactly den.
    let iota_unit = !g.entry_val_at_least(2, 2, 1)?;

    let rep = if k == 0 && !iota_unit {
        special_element(ring, SpecialElement::Sigma { n })?
    } else {
        if !iota_unit {
            // For k >= 1 the determinant congruence forces iota to be a
            // unit; a member failing this cannot exist.
            return Err(Error::NotInSubgroup);
        }
        let rf = ring.at_precision(1)?;
        let iota_res = rf.reduce(ring.shift_down(g.entry(2, 2), d));
        // gamma = corner * p^(n-k): val(corner numerator) >= d + k - n.
        let corner = g.entry(0, 2);
        let shift = n as i64 - k as i64 - d as i64;
        let gamma_res = if shift >= 0 {
            if shift >= 1 {
                Gr::ZERO
            } else {
                rf.reduce(corner)
            }
        } else {
            rf.reduce(ring.shift_down(corner, (-shift) as u32))
        };
        let c = rf.mul(rf.invert(iota_res)?, gamma_res);
        if rf.trace(c) != 0 {
            return Err(Error::TraceObstruction);
        }
        // u = (c - conj(c))/2, the canonical trace-zero lift; for
        // trace-zero c this is c itself.
        let u = ring.gr(0, c.b);
        special_element(ring, SpecialElement::Translation { level: n - k, u })?
    };

    let remainder = rep.unitary_inverse()?.mat_mul(g)?;
    if !remainder.is_member(SubgroupId::C(n, k + 1))? {
        return Err(Error::NotInSubgroup);
    }
    let back = rep.mat_mul(&remainder)?;
    assert!(back.eq_value(g), "rep * remainder must reconstruct the input exactly");
    Ok(KlingenStep { rep, remainder })
}

/// Evidence from certifying one ladder [C_n^(k) : C_n^(k+1)] = q+1 or q.
#[derive(Clone, Debug)]
pub struct KlingenChainEvidence {
    pub p: u64,
    pub n: u32,
    pub indices: Vec<u64>,
    pub samples_per_rung: u32,
}

/// Certifies the whole ladder at level n: for each rung the paper
/// representatives (the trace-zero translations, plus sigma_n at k = 0)
/// are shown pairwise inequivalent mod C_n^(k+1), and `samples` generated
/// elements of C_n^(k) (half constructed as rep * deeper, half structured
/// products) reduce through klingen_reduce with zero failures. Returns the
/// certified rung sizes.
pub fn klingen_index_chain(
    p: u64,
    n: u32,
    samples: u32,
    seed: u64,
) -> Result<KlingenChainEvidence> {
    if n == 0 {
        return Err(Error::BadPrecision(n));
    }
    // Effective precision must survive a sigma * t product (denominator
    // 2n) and one more rep^{-1} factor (n) while keeping level-n
    // memberships decidable.
    let prec = (2 * n + 4).max(5 * n + 2);
    let ring = RingCtx::new(p, prec)?;
    let mut rng = sample::rng_from_seed(seed);
    let mut indices = Vec::new();

    for k in 0..n {
        let mut reps: Vec<PMatrix> = Vec::new();
        for b in 0..p {
            let u = ring.gr(0, b);
            reps.push(special_element(ring, SpecialElement::Translation { level: n - k, u })?);
        }
        if k == 0 {
            reps.push(special_element(ring, SpecialElement::Sigma { n })?);
        }

        for rep in &reps {
            if !rep.is_member(SubgroupId::C(n, k))? {
                return Err(Error::NotInSubgroup);
            }
        }
        for (i, a) in reps.iter().enumerate() {
            for b in reps.iter().skip(i + 1) {
                let shifted = a.unitary_inverse()?.mat_mul(b)?;
                if shifted.is_member(SubgroupId::C(n, k + 1))? {
                    return Err(Error::ConstraintViolated(
                        "ladder representatives must be pairwise inequivalent",
                    ));
                }
            }
        }

        for trial in 0..samples {
            let g = if trial % 2 == 0 {
                // rep * (element of C_n^(k+1)).
                let rep = &reps[(rng.next_u64() % reps.len() as u64) as usize];
                let deeper = sample::random_c_element(&ring, n, k + 1, &mut rng)?;
                rep.mat_mul(&deeper)?
            } else {
                sample::random_c_element(&ring, n, k, &mut rng)?
            };
            debug_assert!(g.is_member(SubgroupId::C(n, k))?);
            let step = klingen_reduce(&g, n, k)?;
            debug_assert!(step.rep.mat_mul(&step.remainder)?.eq_value(&g));
        }
        indices.push(reps.len() as u64);
    }
    Ok(KlingenChainEvidence { p, n, indices, samples_per_rung: samples })
}

use rand_core::RngCore;

/// The unique factorization of a B_n element as lower * torus * upper.
#[derive(Clone, Debug)]
pub struct IwahoriTriple {
    pub lower: PMatrix,
    pub torus: PMatrix,
    pub upper: PMatrix,
}

/// Iwahori factorization by one-sided elimination: the lower factor is
/// read off the first column (whose Gram relation is exactly the level-n
/// lower closure constraint), after which unitarity forces l^{-1} g to be
/// upper triangular with torus diagonal. Total on B_n; NotFactorizable
/// would be a finding.
pub fn iwahori_factor(g: &PMatrix, n: u32) -> Result<IwahoriTriple> {
    if n == 0 {
        return Err(Error::BadPrecision(n));
    }
    if !g.is_member(SubgroupId::B(n))? {
        return Err(Error::NotInSubgroup);
    }
    // Members of B_n are integral, so the canonical denominator is zero.
    debug_assert_eq!(g.den_exp(), 0);
    let ring = *g.ring();

    let a = g.entry(0, 0);
    let ainv = ring.invert(a).map_err(|_| Error::NotFactorizable)?;
    let alpha = ring.shift_down(ring.mul(g.entry(1, 0), ainv), n);
    let beta = ring.shift_down(ring.mul(g.entry(2, 0), ainv), n);
    let lower = special_element(ring, SpecialElement::Lower { n, alpha, beta })
        .map_err(|_| Error::NotFactorizable)?;

    let h = lower.unitary_inverse()?.mat_mul(g)?;
    for (i, j) in [(1usize, 0usize), (2, 0), (2, 1)] {
        if h.entry(i, j) != Gr::ZERO {
            return Err(Error::NotFactorizable);
        }
    }
    let torus = special_element(
        ring,
        SpecialElement::Torus { a: h.entry(0, 0), b: h.entry(1, 1) },
    )
    .map_err(|_| Error::NotFactorizable)?;
    let upper = torus.unitary_inverse()?.mat_mul(&h)?;
    for (i, want) in [(0usize, Gr::ONE), (4, Gr::ONE), (8, Gr::ONE)] {
        if upper.entries()[i] != want {
            return Err(Error::NotFactorizable);
        }
    }
    let rebuilt = special_element(
        ring,
        SpecialElement::Upper { alpha: upper.entry(0, 1), beta: upper.entry(0, 2) },
    )
    .map_err(|_| Error::NotFactorizable)?;
    if rebuilt != upper {
        return Err(Error::NotFactorizable);
    }

    let back = lower.mat_mul(&torus)?.mat_mul(&upper)?;
    assert!(back.eq_value(g), "lower * torus * upper must reconstruct the input exactly");
    Ok(IwahoriTriple { lower, torus, upper })
}

/// Runs `trials` seeded Iwahori round-trips at level n: factor a random
/// B_n element, factor a product built from known factors, and check the
/// factorization is reproduced exactly. Returns the number of successful
/// round-trips (always = trials; failures are errors).
pub fn iwahori_roundtrips(p: u64, n: u32, trials: u32, seed: u64) -> Result<u32> {
    let ring = RingCtx::new(p, (2 * n + 4).max(n + 3))?;
    let mut rng = sample::rng_from_seed(seed);
    for _ in 0..trials {
        let l = sample::random_lower(&ring, n, &mut rng);
        let t = sample::random_torus(&ring, &mut rng);
        let u = sample::random_upper(&ring, &mut rng);
        let g = l.mat_mul(&t)?.mat_mul(&u)?;
        let triple = iwahori_factor(&g, n)?;
        // Factorization is unique: the known factors come back.
        if triple.lower != l || triple.torus != t || triple.upper != u {
            return Err(Error::NotFactorizable);
        }
        // Factoring twice is stable.
        let again = iwahori_factor(&g, n)?;
        if again.lower != triple.lower || again.torus != triple.torus
            || again.upper != triple.upper
        {
            return Err(Error::NotFactorizable);
        }
    }
    Ok(trials)
}

/// Certifies [B_n : B_{n+1}] = p^3: the level-n lower representatives
/// indexed by (alpha mod p, trace-zero beta mod p) all lie in B_n and are
/// pairwise inequivalent mod B_{n+1}.
pub fn recursive_coset_check(p: u64, n: u32) -> Result<u64> {
    if n == 0 {
        return Err(Error::BadPrecision(n));
    }
    let ring = RingCtx::new(p, (2 * n + 4).max(n + 3))?;
    let rf = ring.at_precision(1)?;
    let mut reps: Vec<PMatrix> = Vec::new();
    for alpha0 in rf.elements() {
        for tzb in 0..p {
            let beta = lower_beta(&ring, n, alpha0, ring.gr(0, tzb));
            reps.push(special_element(ring, SpecialElement::Lower { n, alpha: alpha0, beta })?);
        }
    }
    for rep in &reps {
        if !rep.is_member(SubgroupId::B(n))? {
            return Err(Error::NotInSubgroup);
        }
    }
    for (i, a) in reps.iter().enumerate() {
        for b in reps.iter().skip(i + 1) {
            let shifted = a.unitary_inverse()?.mat_mul(b)?;
            if shifted.is_member(SubgroupId::B(n + 1))? {
                return Err(Error::ConstraintViolated(
                    "lower representatives must be pairwise inequivalent mod B_{n+1}",
                ));
            }
        }
    }
    Ok(reps.len() as u64)
}

/// Weyl-cell tag of a residue-field element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeylClass {
    /// Upper-triangular cell (w = I).
    Identity,
    /// Big cell (w = J).
    AntiDiag,
}

/// Bruhat data: input = b * w * u with b upper triangular and u in the
/// unitary upper-unipotent group; u = I when w = I.
#[derive(Clone, Debug)]
pub struct BruhatCell {
    pub w: WeylClass,
    pub b: PMatrix,
    pub u: PMatrix,
}

/// Bruhat decomposition over the residue field. Total on the residue
/// group: a unitary g is upper triangular iff its (3,1) entry vanishes
/// (the Gram relation of the first column kills (2,1) and then (3,2)),
/// otherwise J g admits an LU factorization with unit pivots giving
/// g = (J l J) J u uniquely.
pub fn bruhat_decompose(g: &PMatrix) -> Result<BruhatCell> {
    if g.precision() != 1 || g.den_exp() != 0 {
        return Err(Error::BadPrecision(g.precision()));
    }
    if !g.is_unitary()? {
        return Err(Error::NotUnitary);
    }
    let rf = *g.ring();

    if g.entry(2, 0) == Gr::ZERO {
        // The first-column Gram relation forces full upper-triangularity.
        assert!(
            g.entry(1, 0) == Gr::ZERO && g.entry(2, 1) == Gr::ZERO,
            "a unitary residue matrix with vanishing (3,1) entry is upper triangular"
        );
        return Ok(BruhatCell { w: WeylClass::Identity, b: g.clone(), u: PMatrix::identity(rf) });
    }

    // LU of Jg (rows of g reversed), lower factor carrying the diagonal.
    let jg = |i: usize, j: usize| g.entry(2 - i, j);
    let l00 = jg(0, 0);
    let l00i = rf.invert(l00).expect("big-cell pivot (3,1) is a unit");
    let u01 = rf.mul(jg(0, 1), l00i);
    let u02 = rf.mul(jg(0, 2), l00i);
    let l10 = jg(1, 0);
    let l11 = rf.sub(jg(1, 1), rf.mul(l10, u01));
    let l11i = rf.invert(l11).expect("big-cell pivots are units");
    let u12 = rf.mul(rf.sub(jg(1, 2), rf.mul(l10, u02)), l11i);
    let l20 = jg(2, 0);
    let l21 = rf.sub(jg(2, 1), rf.mul(l20, u01));
    let l22 = rf.sub(rf.sub(jg(2, 2), rf.mul(l20, u02)), rf.mul(l21, u12));

    // b = J L J is upper triangular: entry (i, j) = L[2-i][2-j].
    let lmat = [l00, Gr::ZERO, Gr::ZERO, l10, l11, Gr::ZERO, l20, l21, l22];
    let mut bent = [Gr::ZERO; 9];
    for i in 0..3 {
        for j in 0..3 {
            bent[3 * i + j] = lmat[3 * (2 - i) + (2 - j)];
        }
    }
    let b = PMatrix::from_entries(rf, 0, bent);
    let u = PMatrix::from_entries(
        rf,
        0,
        [Gr::ONE, u01, u02, Gr::ZERO, Gr::ONE, u12, Gr::ZERO, Gr::ZERO, Gr::ONE],
    );
    // u lies in the unitary unipotent group N(O/p).
    assert_eq!(u12, rf.neg(rf.conj(u01)), "unipotent factor must be unitary");
    assert_eq!(
        rf.base_add(rf.trace(u02), rf.norm(u01)),
        0,
        "unipotent factor must satisfy the Hermitian corner relation"
    );
    let j = special_element(rf, SpecialElement::WeylJ)?;
    let back = b.mat_mul(&j)?.mat_mul(&u)?;
    assert!(back.eq_value(g), "b * J * u must reconstruct the input");
    Ok(BruhatCell { w: WeylClass::AntiDiag, b, u })
}

/// Census of the Bruhat partition over the residue field: every element is
/// decomposed, landing in exactly one cell; the big cell size must be
/// |B| * |N(O/p)|.
#[derive(Clone, Copy, Debug)]
pub struct BruhatCensus {
    pub p: u64,
    pub total: u64,
    pub upper_cell: u64,
    pub big_cell: u64,
}

pub fn bruhat_census(p: u64) -> Result<BruhatCensus> {
    let rf = RingCtx::new(p, 1)?;
    let mut total = 0u64;
    let mut upper = 0u64;
    let mut big = 0u64;
    let mut failed: Result<()> = Ok(());
    visit_residue_group(p, |e| {
        if failed.is_err() {
            return;
        }
        total += 1;
        let g = PMatrix::from_entries(rf, 0, *e);
        match bruhat_decompose(&g) {
            Ok(cell) => match cell.w {
                WeylClass::Identity => upper += 1,
                WeylClass::AntiDiag => big += 1,
            },
            Err(e) => failed = Err(e),
        }
    })?;
    failed?;
    Ok(BruhatCensus { p, total, upper_cell: upper, big_cell: big })
}

/// Frobenius-fixed Weyl data: the monomial unitary matrices over O/p,
/// their diagonal subgroup T^F, and the class count |N(T)^F / T^F|.
#[derive(Clone, Copy, Debug)]
pub struct WeylReport {
    pub p: u64,
    pub classes: u64,
    pub tf_order: u64,
    pub ntf_order: u64,
}

/// Enumerates all monomial unitary matrices over the residue field and
/// quotients by the diagonal ones. Exactly two classes survive,
/// represented by I and J.
pub fn weyl_fixed_points(p: u64) -> Result<WeylReport> {
    let rf = RingCtx::new(p, 1)?;
    let units: Vec<Gr> = rf.units().collect();
    let perms: [[usize; 3]; 6] =
        [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut tf = 0u64;
    let mut ntf = 0u64;
    let mut patterns: HashSet<usize> = HashSet::new();
    for (pi, perm) in perms.iter().enumerate() {
        for &x in &units {
            for &y in &units {
                for &z in &units {
                    let d = [x, y, z];
                    let mut e = [Gr::ZERO; 9];
                    for (i, &c) in perm.iter().enumerate() {
                        e[3 * i + c] = d[i];
                    }
                    let g = PMatrix::from_entries(rf, 0, e);
                    if g.is_unitary()? {
                        ntf += 1;
                        patterns.insert(pi);
                        if pi == 0 {
                            tf += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(WeylReport { p, classes: patterns.len() as u64, tf_order: tf, ntf_order: ntf })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn klingen_reduce_recovers_sigma_branch() {
        let ring = RingCtx::new(3, 12).unwrap();
        let mut rng = sample::rng_from_seed(3);
        let s = special_element(ring, SpecialElement::Sigma { n: 1 }).unwrap();
        let h = sample::random_a_element(&ring, 1, &mut rng);
        let g = s.mat_mul(&h).unwrap();
        let step = klingen_reduce(&g, 1, 0).unwrap();
        assert!(step.rep.eq_value(&s));
        assert!(step.remainder.is_member(SubgroupId::C(1, 1)).unwrap());
    }

    #[test]
    fn klingen_reduce_trivial_when_already_deeper() {
        let ring = RingCtx::new(3, 12).unwrap();
        let mut rng = sample::rng_from_seed(4);
        let g = sample::random_c_element(&ring, 2, 1, &mut rng).unwrap();
        let step = klingen_reduce(&g, 2, 0).unwrap();
        // g was already in C(2,1), so the representative is t_2(0) = I.
        assert!(step.rep.eq_value(&PMatrix::identity(ring)));
        assert!(step.remainder.eq_value(&g));
    }

    #[test]
    fn klingen_reduce_recovers_known_u() {
        let ring = RingCtx::new(3, 12).unwrap();
        let mut rng = sample::rng_from_seed(5);
        let u0 = ring.gr(0, 1); // trace-zero unit
        let n = 2;
        let t = special_element(ring, SpecialElement::Translation { level: n, u: u0 }).unwrap();
        let h = sample::random_a_element(&ring, n, &mut rng);
        let g = t.mat_mul(&h).unwrap();
        let step = klingen_reduce(&g, n, 0).unwrap();
        // Recovered u is congruent to u0 mod p: rep^{-1} t_n(u0) deepens.
        let shifted = step.rep.unitary_inverse().unwrap().mat_mul(&t).unwrap();
        assert!(shifted.is_member(SubgroupId::C(n, 1)).unwrap());
    }

    #[test]
    fn klingen_chain_values() {
        assert_eq!(klingen_index_chain(3, 1, 24, 0).unwrap().indices, alloc::vec![4]);
        assert_eq!(klingen_index_chain(3, 3, 12, 0).unwrap().indices, alloc::vec![4, 3, 3]);
        assert_eq!(klingen_index_chain(5, 2, 12, 0).unwrap().indices, alloc::vec![6, 5]);
    }

    #[test]
    fn iwahori_identity_and_torus() {
        let ring = RingCtx::new(3, 8).unwrap();
        let id = PMatrix::identity(ring);
        let t = iwahori_factor(&id, 1).unwrap();
        assert!(t.lower.eq_value(&id) && t.torus.eq_value(&id) && t.upper.eq_value(&id));
        let mut rng = sample::rng_from_seed(9);
        let torus = sample::random_torus(&ring, &mut rng);
        let f = iwahori_factor(&torus, 2).unwrap();
        assert!(f.lower.eq_value(&id));
        assert!(f.torus.eq_value(&torus));
        assert!(f.upper.eq_value(&id));
    }

    #[test]
    fn iwahori_roundtrip_battery() {
        assert_eq!(iwahori_roundtrips(3, 1, 30, 0).unwrap(), 30);
        assert_eq!(iwahori_roundtrips(5, 2, 10, 1).unwrap(), 10);
    }

    #[test]
    fn recursive_coset_values() {
        assert_eq!(recursive_coset_check(3, 1).unwrap(), 27);
        assert_eq!(recursive_coset_check(3, 2).unwrap(), 27);
        assert_eq!(recursive_coset_check(5, 1).unwrap(), 125);
    }

    #[test]
    fn bruhat_trivial_cells() {
        let rf = RingCtx::new(3, 1).unwrap();
        let j = special_element(rf, SpecialElement::WeylJ).unwrap();
        let cell = bruhat_decompose(&j).unwrap();
        assert_eq!(cell.w, WeylClass::AntiDiag);
        assert!(cell.b.eq_value(&PMatrix::identity(rf)));
        assert!(cell.u.eq_value(&PMatrix::identity(rf)));
        let mut rng = sample::rng_from_seed(2);
        let upper = sample::random_upper(&rf, &mut rng);
        let cell = bruhat_decompose(&upper).unwrap();
        assert_eq!(cell.w, WeylClass::Identity);
        assert!(cell.b.eq_value(&upper));
    }

    #[test]
    fn bruhat_census_at_p3() {
        let census = bruhat_census(3).unwrap();
        assert_eq!(census.total, 24192);
        assert_eq!(census.upper_cell, 864);
        assert_eq!(census.big_cell, 23328);
        assert_eq!(census.big_cell, census.upper_cell * 27);
    }

    #[test]
    fn weyl_classes_at_p3() {
        let rep = weyl_fixed_points(3).unwrap();
        assert_eq!(rep.classes, 2);
        assert_eq!(rep.tf_order, 32);
        assert_eq!(rep.ntf_order, 64);
    }
}
