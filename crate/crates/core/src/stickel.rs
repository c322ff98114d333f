//! Stickel-style key exchange over `Mo_n`.
//!
//! Public data: two non-units `g`, `h`. Each party picks exponents
//! `(a, a')` and publishes `g^a h^a'`. Since powers of `g` commute with
//! each other, and likewise for `h`, both sides reach
//! `g^(a+b) h^(a'+b')`. This is a demonstration only; no security is
//! claimed.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::diagram::{generators, Diagram};

pub const DEFAULT_EXPONENT_BOUND: u32 = 32;
/// Generator factors drawn for each of `g` and `h`.
const WORD_LENGTH: usize = 3;
const MAX_REDRAWS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProtocolError {
    #[error("exponent bound must be at least 1")]
    ZeroExponentBound,
    #[error("public element {0} is a unit")]
    UnitElement(&'static str),
    #[error("Mo_{0} has no non-unit generators")]
    NoGenerators(usize),
    #[error("diagram sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("private exponent {value} outside 1..={bound}")]
    ExponentOutOfRange { value: u32, bound: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StickelParams {
    pub n: usize,
    pub g: Diagram,
    pub h: Diagram,
    pub exponent_bound: u32,
}

impl StickelParams {
    pub fn new(g: Diagram, h: Diagram, exponent_bound: u32) -> Result<StickelParams, ProtocolError> {
        if g.n() != h.n() {
            return Err(ProtocolError::SizeMismatch(g.n(), h.n()));
        }
        if exponent_bound == 0 {
            return Err(ProtocolError::ZeroExponentBound);
        }
        if g.is_identity() {
            return Err(ProtocolError::UnitElement("g"));
        }
        if h.is_identity() {
            return Err(ProtocolError::UnitElement("h"));
        }
        Ok(StickelParams {
            n: g.n(),
            g,
            h,
            exponent_bound,
        })
    }

    /// `g` and `h` as products of random generators drawn under `seed`.
    pub fn from_seed(n: usize, seed: u64, exponent_bound: u32) -> Result<StickelParams, ProtocolError> {
        let gens = generators(n);
        if gens.is_empty() {
            return Err(ProtocolError::NoGenerators(n));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || {
            (0..MAX_REDRAWS)
                .map(|_| {
                    (0..WORD_LENGTH).fold(Diagram::identity(n), |acc, _| {
                        &acc * &gens[rng.gen_range(0..gens.len())]
                    })
                })
                .find(|d| !d.is_identity())
        };
        let g = draw().ok_or(ProtocolError::UnitElement("g"))?;
        let h = draw().ok_or(ProtocolError::UnitElement("h"))?;
        StickelParams::new(g, h, exponent_bound)
    }

    /// `g^a h^a'`.
    pub fn public_for(&self, a: u32, a_prime: u32) -> Diagram {
        &self.g.pow(a as usize) * &self.h.pow(a_prime as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KeyMaterial {
    pub private: (u32, u32),
    pub public: Diagram,
}

/// Draws exponents in `1..=E` under `seed` and computes the public key.
pub fn keygen(params: &StickelParams, seed: u64) -> Result<KeyMaterial, ProtocolError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = params.exponent_bound;
    key_from_exponents(params, rng.gen_range(1..=e), rng.gen_range(1..=e))
}

pub fn key_from_exponents(params: &StickelParams, a: u32, a_prime: u32) -> Result<KeyMaterial, ProtocolError> {
    for value in [a, a_prime] {
        if !(1..=params.exponent_bound).contains(&value) {
            return Err(ProtocolError::ExponentOutOfRange {
                value,
                bound: params.exponent_bound,
            });
        }
    }
    Ok(KeyMaterial {
        private: (a, a_prime),
        public: params.public_for(a, a_prime),
    })
}

/// `g^a · their_public · h^a'`.
pub fn shared_key(
    my_private: (u32, u32),
    their_public: &Diagram,
    params: &StickelParams,
) -> Result<Diagram, ProtocolError> {
    if their_public.n() != params.n {
        return Err(ProtocolError::SizeMismatch(their_public.n(), params.n));
    }
    let (a, a_prime) = my_private;
    Ok(&(&params.g.pow(a as usize) * their_public) * &params.h.pow(a_prime as usize))
}

/// Record of one run; secrets are not included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub params: StickelParams,
    pub seed: u64,
    pub alice_public: Diagram,
    pub bob_public: Diagram,
    pub keys_agree: bool,
    /// Hex SHA-256 of the shared key's text form.
    pub key_hash: String,
}

pub fn key_hash(key: &Diagram) -> String {
    hex::encode(Sha256::digest(key.to_string().as_bytes()))
}

/// Full exchange with both parties' secrets derived from `seed`.
pub fn run_exchange(params: &StickelParams, seed: u64) -> Result<Transcript, ProtocolError> {
    let alice = keygen(params, seed.wrapping_mul(2))?;
    let bob = keygen(params, seed.wrapping_mul(2).wrapping_add(1))?;
    let k_alice = shared_key(alice.private, &bob.public, params)?;
    let k_bob = shared_key(bob.private, &alice.public, params)?;
    Ok(Transcript {
        params: params.clone(),
        seed,
        keys_agree: k_alice == k_bob,
        key_hash: key_hash(&k_alice),
        alice_public: alice.public,
        bob_public: bob.public,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollisionStats {
    pub trials: usize,
    pub agreements: usize,
    pub distinct_keys: usize,
}

/// Runs `trials` exchanges with seeds `0..trials` against fixed params.
pub fn collision_stats(params: &StickelParams, trials: usize) -> Result<CollisionStats, ProtocolError> {
    let runs = (0..trials as u64)
        .map(|s| run_exchange(params, s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CollisionStats {
        trials,
        agreements: runs.iter().filter(|t| t.keys_agree).count(),
        distinct_keys: runs.iter().map(|t| &t.key_hash).collect::<BTreeSet<_>>().len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> StickelParams {
        StickelParams::from_seed(5, 7, DEFAULT_EXPONENT_BOUND).unwrap()
    }

    #[test]
    fn unit_exponents() {
        let p = params();
        let a = key_from_exponents(&p, 1, 1).unwrap();
        assert_eq!(a.public, &p.g * &p.h);
        let k = shared_key((1, 1), &a.public, &p).unwrap();
        assert_eq!(k, &(&p.g.pow(2) * &p.h) * &p.h);
    }

    #[test]
    fn parties_agree() {
        let p = params();
        for seed in 0..100 {
            assert!(run_exchange(&p, seed).unwrap().keys_agree);
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let a = run_exchange(&params(), 3).unwrap();
        let b = run_exchange(&params(), 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.key_hash.len(), 64);
    }

    #[test]
    fn large_exponents_follow_period() {
        let p = params();
        let (index, period) = p.g.power_period();
        let e = index + 5 * period;
        assert_eq!(p.g.pow(e), p.g.pow(index));
    }

    #[test]
    fn rejects_bad_input() {
        let id = Diagram::identity(3);
        let g = StickelParams::from_seed(3, 0, 4).unwrap().g;
        assert_eq!(
            StickelParams::new(id.clone(), g.clone(), 4),
            Err(ProtocolError::UnitElement("g"))
        );
        assert_eq!(StickelParams::new(g.clone(), g.clone(), 0), Err(ProtocolError::ZeroExponentBound));
        assert_eq!(StickelParams::from_seed(1, 0, 4), Err(ProtocolError::NoGenerators(1)));
        let p = StickelParams::new(g.clone(), g, 4).unwrap();
        assert!(key_from_exponents(&p, 5, 1).is_err());
        assert!(shared_key((1, 1), &Diagram::identity(4), &p).is_err());
    }
}
