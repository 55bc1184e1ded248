//! The exemplary offloaded task: traveling-salesman instances, solvers, the
//! plain validity checker, and the circuit that re-checks a solution inside
//! a proof.
//!
//! Cities are numbers 1..=n; 0 is the padding sentinel and never a city.
//! A task names a map, a subset of its cities (the instance), and a tier:
//! the circuit size class the solution must be padded to.

mod circuit;
mod registry;
mod solver;

pub use circuit::{
    build_tsp_circuit, hash_elements, hash_padded, HashDigest, TspCircuit, TspWitness,
};
pub use registry::{fixture_map30, fixture_map70, MapRegistry};
pub use solver::{
    pad_tour, solve_exact, solve_heuristic, strip_padding, tour_length, validate_tour,
};

use crate::constraint::ConstraintError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

/// Largest instance the exhaustive solver accepts.
pub const EXACT_SOLVER_LIMIT: usize = 10;

/// Circuit size classes; a solution is padded to exactly this many path
/// slots before hashing and proving.
pub const TIERS: [u32; 6] = [10, 20, 30, 40, 50, 60];

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum TspError {
    #[error("city {0} is not on the map")]
    UnknownCity(u64),
    #[error("instance has {size} cities, exact solver handles at most {max}")]
    InstanceTooLarge { size: usize, max: usize },
    #[error("instance has no cities")]
    EmptyInstance,
    #[error("city {0} appears twice in the instance")]
    DuplicateCity(u64),
    #[error("path of length {len} does not fit tier {tier}")]
    PathLongerThanTier { len: usize, tier: u32 },
    #[error("{0} is not a valid tier")]
    InvalidTier(u32),
    #[error("map {0} is not registered")]
    UnregisteredMap(u64),
    #[error("map {0} is already registered")]
    DuplicateMap(u64),
    #[error("malformed map: {0}")]
    InvalidMap(String),
    #[error("hash input is empty")]
    EmptyHashInput,
    #[error("padding sentinel appears before the end of the path")]
    BadPadding,
    #[error("constraint error: {0}")]
    Constraint(#[from] ConstraintError),
}

/// A named distance matrix. `dist` is row-major n*n, symmetric with a zero
/// diagonal; city i maps to row i-1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TspMap {
    pub mapnumber: u64,
    pub n: usize,
    pub dist: Vec<u64>,
}

impl TspMap {
    pub fn new(mapnumber: u64, n: usize, dist: Vec<u64>) -> Result<Self, TspError> {
        let map = TspMap { mapnumber, n, dist };
        map.validate()?;
        Ok(map)
    }

    /// Synthetic map: distances uniform in 1..=100 from a seeded generator.
    pub fn generate(mapnumber: u64, n: usize, seed: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut dist = vec![0u64; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = rng.gen_range(1..=100);
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        TspMap {
            mapnumber,
            n,
            dist,
        }
    }

    pub fn validate(&self) -> Result<(), TspError> {
        if self.mapnumber == 0 {
            return Err(TspError::InvalidMap("mapnumber must be at least 1".into()));
        }
        if self.n == 0 {
            return Err(TspError::InvalidMap("map has no cities".into()));
        }
        if self.dist.len() != self.n * self.n {
            return Err(TspError::InvalidMap(format!(
                "distance matrix has {} entries, expected {}",
                self.dist.len(),
                self.n * self.n
            )));
        }
        for i in 0..self.n {
            if self.dist[i * self.n + i] != 0 {
                return Err(TspError::InvalidMap(format!(
                    "nonzero diagonal at city {}",
                    i + 1
                )));
            }
            for j in 0..i {
                if self.dist[i * self.n + j] != self.dist[j * self.n + i] {
                    return Err(TspError::InvalidMap(format!(
                        "asymmetric distance between cities {} and {}",
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, city: u64) -> bool {
        city >= 1 && city <= self.n as u64
    }

    /// Distance between two cities (1-based).
    pub fn d(&self, a: u64, b: u64) -> u64 {
        assert!(self.contains(a) && self.contains(b), "city off the map");
        self.dist[(a as usize - 1) * self.n + (b as usize - 1)]
    }

    /// All city numbers, 1..=n.
    pub fn cities(&self) -> Vec<u64> {
        (1..=self.n as u64).collect()
    }

    pub fn max_distance(&self) -> u64 {
        self.dist.iter().copied().max().unwrap_or(0)
    }
}

/// An ordered visit list with its claimed closed-tour length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tour {
    pub path: Vec<u64>,
    pub sum: u64,
}

/// Circuit size class; only the values in [`TIERS`] exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Tier(u32);

impl Tier {
    pub fn new(value: u32) -> Result<Tier, TspError> {
        if TIERS.contains(&value) {
            Ok(Tier(value))
        } else {
            Err(TspError::InvalidTier(value))
        }
    }

    /// Smallest tier with room for `size` cities.
    pub fn for_instance_size(size: usize) -> Result<Tier, TspError> {
        TIERS
            .iter()
            .find(|&&t| size <= t as usize)
            .map(|&t| Tier(t))
            .ok_or(TspError::InvalidTier(size as u32))
    }

    pub fn value(&self) -> u32 {
        self.0
    }

    /// Path slots in this tier's circuit.
    pub fn slots(&self) -> usize {
        self.0 as usize
    }
}

impl TryFrom<u32> for Tier {
    type Error = TspError;
    fn try_from(v: u32) -> Result<Tier, TspError> {
        Tier::new(v)
    }
}

impl From<Tier> for u32 {
    fn from(t: Tier) -> u32 {
        t.0
    }
}

impl std::fmt::Display for Tier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// What a consumer posts: which map, which cities to visit, and the circuit
/// tier solutions must target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskSpec {
    pub mapnumber: u64,
    pub instance: Vec<u64>,
    pub tier: Tier,
}

impl TaskSpec {
    pub fn new(mapnumber: u64, instance: Vec<u64>, tier: Tier) -> Result<Self, TspError> {
        let task = TaskSpec {
            mapnumber,
            instance,
            tier,
        };
        task.validate_shape()?;
        Ok(task)
    }

    /// Structural checks that need no map: non-empty, distinct, fits tier.
    pub fn validate_shape(&self) -> Result<(), TspError> {
        if self.instance.is_empty() {
            return Err(TspError::EmptyInstance);
        }
        if self.instance.len() > self.tier.slots() {
            return Err(TspError::PathLongerThanTier {
                len: self.instance.len(),
                tier: self.tier.value(),
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for &c in &self.instance {
            if c == 0 {
                return Err(TspError::UnknownCity(0));
            }
            if !seen.insert(c) {
                return Err(TspError::DuplicateCity(c));
            }
        }
        Ok(())
    }

    /// Full check against the map the task names.
    pub fn validate_against(&self, map: &TspMap) -> Result<(), TspError> {
        self.validate_shape()?;
        if map.mapnumber != self.mapnumber {
            return Err(TspError::UnregisteredMap(self.mapnumber));
        }
        for &c in &self.instance {
            if !map.contains(c) {
                return Err(TspError::UnknownCity(c));
            }
        }
        Ok(())
    }
}
