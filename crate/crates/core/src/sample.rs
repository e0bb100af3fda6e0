//! Seeded random element generation for the sampled certifications.
//!
//! Klingen covering, Iwahori round-trips and the norm-one kernel checks all
//! run on generated inputs; everything here is driven by a caller-provided
//! ChaCha stream so runs are reproducible bit for bit.

use rand_core::{RngCore, SeedableRng};

pub use rand_chacha::ChaCha8Rng;

use crate::matrix::{
    cayley_norm_one, lower_beta, special_element, upper_beta, PMatrix, SpecialElement,
};
use crate::ring::{Gr, RingCtx};
use crate::Result;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn below(rng: &mut impl RngCore, bound: u64) -> u64 {
    rng.next_u64() % bound
}

pub fn random_gr(ring: &RingCtx, rng: &mut impl RngCore) -> Gr {
    ring.gr(below(rng, ring.modulus()), below(rng, ring.modulus()))
}

pub fn random_unit(ring: &RingCtx, rng: &mut impl RngCore) -> Gr {
    loop {
        let x = random_gr(ring, rng);
        if ring.is_unit(x) {
            return x;
        }
    }
}

pub fn random_trace_zero(ring: &RingCtx, rng: &mut impl RngCore) -> Gr {
    ring.gr(0, below(rng, ring.modulus()))
}

/// Random norm-one element as u / conj(u); Hilbert 90 makes this surjective
/// onto E^1.
pub fn random_norm_one(ring: &RingCtx, rng: &mut impl RngCore) -> Gr {
    let u = random_unit(ring, rng);
    let inv = ring.invert(ring.conj(u)).expect("unit");
    ring.mul(u, inv)
}

pub fn random_upper(ring: &RingCtx, rng: &mut impl RngCore) -> PMatrix {
    let alpha = random_gr(ring, rng);
    let beta = upper_beta(ring, alpha, random_trace_zero(ring, rng));
    special_element(*ring, SpecialElement::Upper { alpha, beta }).expect("constraint solved")
}

pub fn random_lower(ring: &RingCtx, n: u32, rng: &mut impl RngCore) -> PMatrix {
    let alpha = random_gr(ring, rng);
    let beta = lower_beta(ring, n, alpha, random_trace_zero(ring, rng));
    special_element(*ring, SpecialElement::Lower { n, alpha, beta }).expect("constraint solved")
}

/// Random torus element diag(a, b, conj(a)^-1) with unconstrained norm-one
/// center.
pub fn random_torus(ring: &RingCtx, rng: &mut impl RngCore) -> PMatrix {
    let a = random_unit(ring, rng);
    let b = random_norm_one(ring, rng);
    special_element(*ring, SpecialElement::Torus { a, b }).expect("norm-one center")
}

/// Random torus element whose center is norm-one and congruent to 1 mod p^n
/// (the torus part of A_n).
pub fn random_torus_principal(ring: &RingCtx, n: u32, rng: &mut impl RngCore) -> PMatrix {
    let a = random_unit(ring, rng);
    let tz = ring.scale_pow(random_trace_zero(ring, rng), n);
    let b = cayley_norm_one(ring, tz);
    special_element(*ring, SpecialElement::Torus { a, b }).expect("norm-one center")
}

/// Random element of B_n as an Iwahori product lower(n) * torus * upper;
/// by the Iwahori factorization this parameterizes all of B_n.
pub fn random_b_element(ring: &RingCtx, n: u32, rng: &mut impl RngCore) -> PMatrix {
    let l = random_lower(ring, n, rng);
    let t = random_torus(ring, rng);
    let u = random_upper(ring, rng);
    l.mat_mul(&t).expect("integral product").mat_mul(&u).expect("integral product")
}

/// Random element of A_n: an Iwahori product with the torus center pinned
/// to 1 mod p^n.
pub fn random_a_element(ring: &RingCtx, n: u32, rng: &mut impl RngCore) -> PMatrix {
    let l = random_lower(ring, n, rng);
    let t = random_torus_principal(ring, n, rng);
    let u = random_upper(ring, rng);
    l.mat_mul(&t).expect("integral product").mat_mul(&u).expect("integral product")
}

/// Random element of C_n^(k): a product a1 * t_{n-k}(u) * a2 with a_i in
/// A_n, plus a sigma_n factor half the time when k = 0. Needs enough
/// precision for one denominator of size n (two when the sigma branch is
/// taken).
pub fn random_c_element(ring: &RingCtx, n: u32, k: u32, rng: &mut impl RngCore) -> Result<PMatrix> {
    let a1 = random_a_element(ring, n, rng);
    let a2 = random_a_element(ring, n, rng);
    let u = random_trace_zero(ring, rng);
    let t = special_element(*ring, SpecialElement::Translation { level: n - k, u })?;
    let mut g = a1.mat_mul(&t)?.mat_mul(&a2)?;
    if k == 0 && rng.next_u64() % 2 == 0 {
        let s = special_element(*ring, SpecialElement::Sigma { n })?;
        g = s.mat_mul(&g)?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::SubgroupId;

    #[test]
    fn generated_elements_land_in_their_subgroups() {
        // Effective precision must stay >= 2n+1 after a sigma * t product
        // (combined denominator 2n) for the determinant test to stay
        // decidable, hence 5n+2 digits for n <= 3.
        let ring = RingCtx::new(3, 17).unwrap();
        let mut rng = rng_from_seed(7);
        for _ in 0..50 {
            let n = 1 + (rng.next_u64() % 3) as u32;
            let a = random_a_element(&ring, n, &mut rng);
            assert!(a.is_member(SubgroupId::A(n)).unwrap());
            let b = random_b_element(&ring, n, &mut rng);
            assert!(b.is_member(SubgroupId::B(n)).unwrap());
            let k = (rng.next_u64() % (n as u64 + 1)) as u32;
            let c = random_c_element(&ring, n, k, &mut rng).unwrap();
            assert!(c.is_member(SubgroupId::C(n, k)).unwrap());
        }
    }

    #[test]
    fn norm_one_sampler_is_exact() {
        let ring = RingCtx::new(5, 6).unwrap();
        let mut rng = rng_from_seed(1);
        for _ in 0..100 {
            assert_eq!(ring.norm(random_norm_one(&ring, &mut rng)), 1);
        }
    }
}
