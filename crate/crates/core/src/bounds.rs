//! Desk-scale limits shared by every module.

/// Largest group whose elements may be materialised in memory.
pub const ELEMENT_ENUMERATION: u64 = 20_000;

/// Largest p-group (odd p) whose full subgroup lattice is enumerated (3^6).
pub const SUBGROUP_ENUMERATION: u64 = 729;

/// Largest 2-group whose full subgroup lattice is enumerated (2^9).
pub const SUBGROUP_ENUMERATION_2: u64 = 512;

/// Largest non-p-group whose subgroup lattice is enumerated.
pub const SUBGROUP_ENUMERATION_GENERAL: u64 = 512;

/// Largest ambient group accepted for fusion queries.
pub const FUSION_AMBIENT: u64 = 100_000;

/// Largest group whose elements may be streamed one at a time.
pub const ELEMENT_ITERATION: u64 = 1_000_000;

/// Full multiplication tables are stored up to this order.
pub const MULTIPLICATION_TABLE: usize = 1024;

/// Subgroup-enumeration bound for a group of the given order.
pub fn subgroup_bound(order: u64) -> u64 {
    match crate::arith::prime_power(order) {
        Some((2, _)) => SUBGROUP_ENUMERATION_2,
        Some(_) => SUBGROUP_ENUMERATION,
        None => SUBGROUP_ENUMERATION_GENERAL,
    }
}

/// Overridable copy of the limits, carried by a run configuration.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Bounds {
    pub element_enumeration: u64,
    pub subgroup_enumeration: u64,
    pub fusion_ambient: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            element_enumeration: ELEMENT_ENUMERATION,
            subgroup_enumeration: SUBGROUP_ENUMERATION,
            fusion_ambient: FUSION_AMBIENT,
        }
    }
}
