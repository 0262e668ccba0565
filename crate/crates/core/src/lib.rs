//! Finite rigidifying extensions and orbit analysis.
//!
//! The library builds finite extensions of target vertex sets inside
//! deterministic presentations of countable structures (a BIT-rule graph, a
//! seeded tournament, a layered variant with comparable pairs), such that
//! every automorphism of the extension fixes the targets pointwise. Around
//! that core sit the supporting pieces: separator machinery and the
//! maximal-good-set partition for tournaments, Ramsey-style extraction of
//! mutually indiscernible blocks, automorphism search by refinement and
//! backtracking, and a small permutation-group engine for orbit equivalence
//! questions.

pub mod analysis;
pub mod autgroup;
pub mod error;
pub mod indiscernible;
pub mod oracles;
pub mod permgroup;
pub mod rigidify;
pub mod structures;

pub use error::Error;

/// Natural numbers used as oracle vertex identities.
///
/// Constructed witness vertices encode adjacency prescriptions in their
/// binary expansion and can exceed `u64`; they are serialized as decimal
/// strings at the JSON boundary.
pub type Nat = u128;

/// Serde adapters that render `Nat` ids as decimal strings in JSON, where
/// 128-bit values would otherwise be hostile to downstream tooling.
pub mod natstr {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::Nat;

    pub fn parse(s: &str) -> Result<Nat, String> {
        s.parse::<Nat>().map_err(|_| format!("bad natural {s:?}"))
    }

    pub mod scalar {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Nat, s: S) -> Result<S::Ok, S::Error> {
            s.collect_str(v)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Nat, D::Error> {
            let raw = String::deserialize(d)?;
            super::parse(&raw).map_err(serde::de::Error::custom)
        }
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Vec<Nat>, s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(|x| x.to_string()))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Nat>, D::Error> {
            let raw = Vec::<String>::deserialize(d)?;
            raw.iter()
                .map(|s| super::parse(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}
