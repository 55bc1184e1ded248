//! Map registry: the shared table both parties must agree on before a
//! proof means anything, since the distance matrix is baked into each
//! circuit rather than passed as input.

use super::{build_tsp_circuit, TspError, TspMap};
use crate::constraint::ConstraintSystem;
use std::collections::BTreeMap;

/// Demo maps used by fixtures, examples, and benchmarks. Both are
/// synthetic: seeded generators, distances uniform in 1..=100.
pub fn fixture_map30() -> TspMap {
    TspMap::generate(1, 30, 1001)
}

pub fn fixture_map70() -> TspMap {
    TspMap::generate(2, 70, 1002)
}

/// Registered maps keyed by mapnumber.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MapRegistry {
    maps: BTreeMap<u64, TspMap>,
}

impl MapRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registry holding the two demo maps.
    pub fn fixtures() -> Self {
        let mut reg = Self::new();
        reg.register(fixture_map30()).unwrap();
        reg.register(fixture_map70()).unwrap();
        reg
    }

    pub fn register(&mut self, map: TspMap) -> Result<(), TspError> {
        map.validate()?;
        if self.maps.contains_key(&map.mapnumber) {
            return Err(TspError::DuplicateMap(map.mapnumber));
        }
        self.maps.insert(map.mapnumber, map);
        Ok(())
    }

    pub fn get(&self, mapnumber: u64) -> Result<&TspMap, TspError> {
        self.maps
            .get(&mapnumber)
            .ok_or(TspError::UnregisteredMap(mapnumber))
    }

    pub fn mapnumbers(&self) -> Vec<u64> {
        self.maps.keys().copied().collect()
    }

    pub fn maps(&self) -> impl Iterator<Item = &TspMap> {
        self.maps.values()
    }

    /// Circuit for a registered map at the given tier.
    pub fn build_circuit(&self, mapnumber: u64, tier: u32) -> Result<ConstraintSystem, TspError> {
        build_tsp_circuit(self.get(mapnumber)?, tier)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_maps_have_the_advertised_shape() {
        let small = fixture_map30();
        assert_eq!((small.mapnumber, small.n), (1, 30));
        small.validate().unwrap();
        let large = fixture_map70();
        assert_eq!((large.mapnumber, large.n), (2, 70));
        large.validate().unwrap();
        assert!(large.dist.iter().all(|&d| d <= 100));
        assert!(large.dist.iter().any(|&d| d > 0));
    }

    #[test]
    fn lookup_and_registration_rules() {
        let mut reg = MapRegistry::fixtures();
        assert_eq!(reg.mapnumbers(), vec![1, 2]);
        assert_eq!(reg.get(1).unwrap().n, 30);
        assert!(matches!(reg.get(9), Err(TspError::UnregisteredMap(9))));
        assert!(matches!(
            reg.register(TspMap::generate(1, 4, 3)),
            Err(TspError::DuplicateMap(1))
        ));
        assert!(matches!(
            reg.register(TspMap {
                mapnumber: 3,
                n: 2,
                dist: vec![0, 1, 2, 0],
            }),
            Err(TspError::InvalidMap(_))
        ));
        reg.register(TspMap::generate(3, 4, 3)).unwrap();
        assert_eq!(reg.mapnumbers(), vec![1, 2, 3]);
    }

    #[test]
    fn circuits_come_from_registered_maps_only() {
        let reg = MapRegistry::fixtures();
        let cs = reg.build_circuit(1, 10).unwrap();
        assert_eq!(cs.num_public, 6);
        assert!(matches!(
            reg.build_circuit(9, 10),
            Err(TspError::UnregisteredMap(9))
        ));
        assert!(matches!(
            reg.build_circuit(1, 11),
            Err(TspError::InvalidTier(11))
        ));
    }
}
