//! Cohomology of the order-2 Galois group acting on the finite quotients.
//!
//! For the cyclic group G = {1, sigma} of order two the cohomology of a
//! finite G-module M reduces to kernel/image computations: in degree 1 the
//! cocycles are ker(N) and the coboundaries im(sigma - 1); in degree 2 the
//! cocycles are ker(sigma - 1) = M^G and the coboundaries im(N), where N is
//! x + sigma(x) additively and x * sigma(x) multiplicatively. Everything
//! here is computed by exhaustive enumeration of the module.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::Error;
use crate::ring::{Gr, RingCtx, SpecialKind};
use crate::Result;

/// Exhaustive enumeration guard: modules above this size are rejected.
pub const MODULE_GUARD: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    /// The additive group of O/p^n.
    Additive,
    /// The unit group of O/p^n.
    Multiplicative,
}

/// Cocycle/coboundary counts for one (module, degree) pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub module_kind: ModuleKind,
    pub n: u32,
    pub degree: u32,
    pub cocycle_count: u64,
    pub coboundary_count: u64,
    pub h_order: u64,
}

fn guard(ring: &RingCtx, n: u32) -> Result<RingCtx> {
    if n == 0 || n > ring.precision() {
        return Err(Error::BadPrecision(n));
    }
    let size = (ring.p() as u128).pow(2 * n);
    if size > MODULE_GUARD as u128 {
        return Err(Error::ModuleTooLarge(size as u64));
    }
    ring.at_precision(n)
}

/// Cohomology of G = {1, sigma} on E_{p^n} (additive) or its unit group
/// (multiplicative), in degree 1 or 2, by exhaustive enumeration.
pub fn tate_cohomology(
    ring: &RingCtx,
    module_kind: ModuleKind,
    n: u32,
    degree: u32,
) -> Result<CohomologyReport> {
    assert!(degree == 1 || degree == 2, "only degrees 1 and 2 are defined here");
    let sub = guard(ring, n)?;

    let (cocycle_count, coboundary_count) = match module_kind {
        ModuleKind::Additive => {
            let norm = |x: Gr| sub.add(x, sub.conj(x));
            let shift = |x: Gr| sub.sub(sub.conj(x), x);
            count_kernel_image(&sub, sub.elements(), norm, shift, degree, Gr::ZERO)
        }
        ModuleKind::Multiplicative => {
            let norm = |x: Gr| sub.mul(x, sub.conj(x));
            let shift =
                |x: Gr| sub.mul(sub.conj(x), sub.invert(x).expect("units are invertible"));
            count_kernel_image(&sub, sub.units(), norm, shift, degree, Gr::ONE)
        }
    };

    assert!(
        cocycle_count % coboundary_count == 0,
        "coboundaries must divide cocycles"
    );
    Ok(CohomologyReport {
        module_kind,
        n,
        degree,
        cocycle_count,
        coboundary_count,
        h_order: cocycle_count / coboundary_count,
    })
}

fn count_kernel_image<I, N, S>(
    sub: &RingCtx,
    module: I,
    norm: N,
    shift: S,
    degree: u32,
    ident: Gr,
) -> (u64, u64)
where
    I: Iterator<Item = Gr>,
    N: Fn(Gr) -> Gr,
    S: Fn(Gr) -> Gr,
{
    let mut kernel_norm = 0u64;
    let mut fixed = 0u64;
    let mut im_shift: BTreeSet<u128> = BTreeSet::new();
    let mut im_norm: BTreeSet<u128> = BTreeSet::new();
    for x in module {
        if norm(x) == ident {
            kernel_norm += 1;
        }
        if sub.conj(x) == x {
            fixed += 1;
        }
        im_shift.insert(sub.encode(shift(x)));
        im_norm.insert(sub.encode(norm(x)));
    }
    match degree {
        1 => (kernel_norm, im_shift.len() as u64),
        _ => (fixed, im_norm.len() as u64),
    }
}

/// The materialized bijections Z^1(G, E^x) -> E^1 and Z^1(G, E) -> E^0,
/// xi |-> xi(sigma). Cocycles of the order-2 group are exactly the module
/// elements killed by the norm map, so both sides are explicit finite sets.
#[derive(Clone, Debug)]
pub struct CocycleBijections {
    pub n: u32,
    /// Values xi(sigma) of the multiplicative cocycles, sorted.
    pub mult_cocycles: Vec<Gr>,
    /// Values xi(sigma) of the additive cocycles, sorted.
    pub add_cocycles: Vec<Gr>,
    /// Whether the coboundary map x -> x/conj(x) surjects onto E^1
    /// (B^1 = Z^1 multiplicatively).
    pub mult_coboundaries_surject: bool,
    /// Whether x -> x - conj(x) surjects onto E^0.
    pub add_coboundaries_surject: bool,
}

/// Materializes both degree-1 cocycle bijections at level n and verifies
/// them against the exhaustively enumerated special sets.
pub fn cocycle_bijections(ring: &RingCtx, n: u32) -> Result<CocycleBijections> {
    let sub = guard(ring, n)?;

    let mut mult_cocycles: Vec<Gr> =
        sub.units().filter(|&x| sub.mul(x, sub.conj(x)) == Gr::ONE).collect();
    mult_cocycles.sort_unstable();
    let mut add_cocycles: Vec<Gr> =
        sub.elements().filter(|&x| sub.add(x, sub.conj(x)) == Gr::ZERO).collect();
    add_cocycles.sort_unstable();

    // xi |-> xi(sigma) must land bijectively on the defining-equation sets.
    let mut e1: Vec<Gr> = sub
        .enumerate_special(SpecialKind::NormOne(n))?
        .elements
        .iter()
        .map(|e| match *e {
            crate::ring::SpecialElem::Scalar(x) => x,
            _ => unreachable!(),
        })
        .collect();
    e1.sort_unstable();
    let mut e0: Vec<Gr> = sub
        .enumerate_special(SpecialKind::TraceZero(n))?
        .elements
        .iter()
        .map(|e| match *e {
            crate::ring::SpecialElem::Scalar(x) => x,
            _ => unreachable!(),
        })
        .collect();
    e0.sort_unstable();
    assert_eq!(mult_cocycles, e1, "Z^1(G, E^x) must coincide with E^1");
    assert_eq!(add_cocycles, e0, "Z^1(G, E) must coincide with E^0");

    let mult_image: BTreeSet<u128> = sub
        .units()
        .map(|x| sub.encode(sub.mul(x, sub.invert(sub.conj(x)).expect("unit"))))
        .collect();
    let add_image: BTreeSet<u128> =
        sub.elements().map(|x| sub.encode(sub.sub(x, sub.conj(x)))).collect();

    let mult_surj = mult_cocycles.iter().all(|&x| mult_image.contains(&sub.encode(x)));
    let add_surj = add_cocycles.iter().all(|&x| add_image.contains(&sub.encode(x)));

    Ok(CocycleBijections {
        n,
        mult_cocycles,
        add_cocycles,
        mult_coboundaries_surject: mult_surj,
        add_coboundaries_surject: add_surj,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guard_fires() {
        let r = RingCtx::new(47, 5).unwrap();
        assert!(matches!(
            tate_cohomology(&r, ModuleKind::Additive, 5, 1),
            Err(Error::ModuleTooLarge(_))
        ));
    }

    #[test]
    fn hilbert_90_at_level_one() {
        let r = RingCtx::new(3, 1).unwrap();
        let rep = tate_cohomology(&r, ModuleKind::Multiplicative, 1, 1).unwrap();
        assert_eq!((rep.cocycle_count, rep.coboundary_count, rep.h_order), (4, 4, 1));
    }

    #[test]
    fn additive_degree_two_vanishes() {
        let r = RingCtx::new(3, 2).unwrap();
        let rep = tate_cohomology(&r, ModuleKind::Additive, 2, 2).unwrap();
        assert_eq!(rep.h_order, 1);
        assert_eq!(rep.cocycle_count, 9);
    }

    #[test]
    fn additive_degree_one_at_p5() {
        let r = RingCtx::new(5, 1).unwrap();
        let rep = tate_cohomology(&r, ModuleKind::Additive, 1, 1).unwrap();
        assert_eq!(rep.cocycle_count, 5);
        assert_eq!(rep.h_order, 1);
    }
}
