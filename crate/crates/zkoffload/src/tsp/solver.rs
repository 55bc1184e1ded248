//! Off-chain solvers and the reference validity check.
//!
//! `validate_tour` is the plain-language contract the circuit re-states in
//! constraints: same membership, same permutation rule, same closed-tour
//! length. Tests hold the two accountable to each other.

use super::{TspError, TspMap, Tour, EXACT_SOLVER_LIMIT};
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Closed-tour length of `path` on `map`, including the return edge.
///
/// Errors on any city not on the map; a single-city tour has length zero.
pub fn tour_length(map: &TspMap, path: &[u64]) -> Result<u64, TspError> {
    if path.is_empty() {
        return Err(TspError::EmptyInstance);
    }
    for &c in path {
        if !map.contains(c) {
            return Err(TspError::UnknownCity(c));
        }
    }
    let mut sum = 0u64;
    for w in path.windows(2) {
        sum += map.d(w[0], w[1]);
    }
    sum += map.d(path[path.len() - 1], path[0]);
    Ok(sum)
}

/// Does `tour` visit exactly `instance` (each city once) with a correct sum?
///
/// A city unknown to the map is an error, not a `false`: the caller asked a
/// malformed question. Wrong order multiplicity or wrong sum is `false`.
pub fn validate_tour(map: &TspMap, instance: &[u64], tour: &Tour) -> Result<bool, TspError> {
    for &c in instance {
        if !map.contains(c) {
            return Err(TspError::UnknownCity(c));
        }
    }
    for &c in &tour.path {
        if !map.contains(c) {
            return Err(TspError::UnknownCity(c));
        }
    }
    if instance.is_empty() || tour.path.is_empty() {
        return Err(TspError::EmptyInstance);
    }
    let mut want = instance.to_vec();
    let mut got = tour.path.clone();
    want.sort_unstable();
    got.sort_unstable();
    if want != got {
        return Ok(false);
    }
    Ok(tour_length(map, &tour.path)? == tour.sum)
}

/// Exhaustive optimum for small instances.
///
/// The first instance city is pinned as the start, the remainder is
/// permuted; ties resolve to the first permutation in lexicographic order
/// of the remainder, so the result is deterministic.
pub fn solve_exact(map: &TspMap, instance: &[u64]) -> Result<Tour, TspError> {
    check_instance(map, instance)?;
    if instance.len() > EXACT_SOLVER_LIMIT {
        return Err(TspError::InstanceTooLarge {
            size: instance.len(),
            max: EXACT_SOLVER_LIMIT,
        });
    }
    let start = instance[0];
    let rest: Vec<u64> = instance[1..].to_vec();
    let k = rest.len();
    let mut best: Option<Tour> = None;
    for perm in rest.into_iter().permutations(k) {
        let mut path = Vec::with_capacity(instance.len());
        path.push(start);
        path.extend(perm);
        let sum = tour_length(map, &path)?;
        if best.as_ref().map_or(true, |b| sum < b.sum) {
            best = Some(Tour { path, sum });
        }
    }
    Ok(best.expect("non-empty instance always yields a tour"))
}

/// Nearest-neighbour construction from a seed-chosen start, improved by
/// 2-opt until no exchange helps. Deterministic for a given seed.
pub fn solve_heuristic(map: &TspMap, instance: &[u64], seed: u64) -> Result<Tour, TspError> {
    check_instance(map, instance)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let start = instance[rng.gen_range(0..instance.len())];

    let mut remaining: Vec<u64> = instance.iter().copied().filter(|&c| c != start).collect();
    remaining.sort_unstable();
    let mut path = vec![start];
    while !remaining.is_empty() {
        let here = *path.last().unwrap();
        // Ties fall to the lowest city number; remaining stays sorted.
        let (idx, _) = remaining
            .iter()
            .enumerate()
            .min_by_key(|(_, &c)| (map.d(here, c), c))
            .unwrap();
        path.push(remaining.remove(idx));
    }

    two_opt(map, &mut path);
    let sum = tour_length(map, &path)?;
    Ok(Tour { path, sum })
}

/// Reverse path[i..=j] whenever that shortens the closed tour; restart the
/// scan after every improvement. Terminates: the integer sum strictly drops.
fn two_opt(map: &TspMap, path: &mut [u64]) {
    let k = path.len();
    if k < 4 {
        return;
    }
    loop {
        let mut improved = false;
        for i in 1..k - 1 {
            for j in i + 1..k {
                let a = path[i - 1];
                let b = path[i];
                let c = path[j];
                let d = path[(j + 1) % k];
                let old = map.d(a, b) + map.d(c, d);
                let new = map.d(a, c) + map.d(b, d);
                if new < old {
                    path[i..=j].reverse();
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
}

/// Extend the path with 0 sentinels to exactly `tier` entries.
pub fn pad_tour(tour: &Tour, tier: super::Tier) -> Result<Vec<u64>, TspError> {
    let slots = tier.slots();
    if tour.path.len() > slots {
        return Err(TspError::PathLongerThanTier {
            len: tour.path.len(),
            tier: tier.value(),
        });
    }
    let mut padded = tour.path.clone();
    padded.resize(slots, 0);
    Ok(padded)
}

/// Drop the sentinel suffix. A 0 anywhere before the suffix, or a leading 0,
/// means the padded form was never produced by `pad_tour`.
pub fn strip_padding(padded: &[u64]) -> Result<Vec<u64>, TspError> {
    let real = padded.iter().take_while(|&&c| c != 0).count();
    if real == 0 || padded[real..].iter().any(|&c| c != 0) {
        return Err(TspError::BadPadding);
    }
    Ok(padded[..real].to_vec())
}

fn check_instance(map: &TspMap, instance: &[u64]) -> Result<(), TspError> {
    if instance.is_empty() {
        return Err(TspError::EmptyInstance);
    }
    let mut seen = std::collections::BTreeSet::new();
    for &c in instance {
        if !map.contains(c) {
            return Err(TspError::UnknownCity(c));
        }
        if !seen.insert(c) {
            return Err(TspError::DuplicateCity(c));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tsp::{fixture_map30 as map30, fixture_map70 as map70, Tier};

    /// d(1,2)=5, d(2,3)=7, d(1,3)=9.
    fn triangle() -> TspMap {
        TspMap::new(1, 3, vec![0, 5, 9, 5, 0, 7, 9, 7, 0]).unwrap()
    }

    /// Independent optimum oracle: Held-Karp over subsets, start pinned at
    /// instance[0]. Shares no code path with solve_exact's enumeration.
    fn held_karp(map: &TspMap, instance: &[u64]) -> u64 {
        let k = instance.len();
        if k == 1 {
            return 0;
        }
        let full = (1usize << k) - 1;
        let inf = u64::MAX / 2;
        let mut dp = vec![vec![inf; k]; 1 << k];
        dp[1][0] = 0;
        for mask in 1..=full {
            if mask & 1 == 0 {
                continue;
            }
            for last in 0..k {
                if mask & (1 << last) == 0 || dp[mask][last] == inf {
                    continue;
                }
                for next in 1..k {
                    if mask & (1 << next) != 0 {
                        continue;
                    }
                    let cand = dp[mask][last] + map.d(instance[last], instance[next]);
                    let cell = &mut dp[mask | (1 << next)][next];
                    if cand < *cell {
                        *cell = cand;
                    }
                }
            }
        }
        (1..k)
            .map(|i| dp[full][i] + map.d(instance[i], instance[0]))
            .min()
            .unwrap()
    }

    #[test]
    fn triangle_examples() {
        let map = triangle();
        let good = Tour {
            path: vec![1, 2, 3],
            sum: 21,
        };
        assert!(validate_tour(&map, &[1, 2, 3], &good).unwrap());
        let bad_sum = Tour {
            path: vec![1, 2, 3],
            sum: 20,
        };
        assert!(!validate_tour(&map, &[1, 2, 3], &bad_sum).unwrap());
        let repeat = Tour {
            path: vec![1, 1, 3],
            sum: 18,
        };
        assert!(!validate_tour(&map, &[1, 2, 3], &repeat).unwrap());
        let off_map = Tour {
            path: vec![1, 99, 3],
            sum: 21,
        };
        assert!(matches!(
            validate_tour(&map, &[1, 2, 3], &off_map),
            Err(TspError::UnknownCity(99))
        ));
        assert!(matches!(
            validate_tour(&map, &[1, 99], &good),
            Err(TspError::UnknownCity(99))
        ));
    }

    #[test]
    fn exact_solves_the_triangle() {
        let map = triangle();
        let tour = solve_exact(&map, &[1, 2, 3]).unwrap();
        assert_eq!(tour.sum, 21);
        assert_eq!(tour.path[0], 1);
        assert!(validate_tour(&map, &[1, 2, 3], &tour).unwrap());
    }

    #[test]
    fn exact_rejects_oversized_and_malformed_instances() {
        let map = map30();
        let eleven: Vec<u64> = (1..=11).collect();
        assert!(matches!(
            solve_exact(&map, &eleven),
            Err(TspError::InstanceTooLarge { size: 11, max: 10 })
        ));
        assert!(matches!(solve_exact(&map, &[]), Err(TspError::EmptyInstance)));
        assert!(matches!(
            solve_exact(&map, &[1, 31]),
            Err(TspError::UnknownCity(31))
        ));
        assert!(matches!(
            solve_exact(&map, &[4, 4]),
            Err(TspError::DuplicateCity(4))
        ));
    }

    #[test]
    fn exact_matches_held_karp_on_both_fixture_maps() {
        for map in [map30(), map70()] {
            for n in 2..=8usize {
                let instance: Vec<u64> = (1..=n as u64).collect();
                let tour = solve_exact(&map, &instance).unwrap();
                assert_eq!(tour.sum, held_karp(&map, &instance), "n={n}");
                assert!(validate_tour(&map, &instance, &tour).unwrap());
            }
            // A non-prefix instance as well.
            let instance = vec![5, 2, 9, 14, 3, 7];
            let tour = solve_exact(&map, &instance).unwrap();
            assert_eq!(tour.sum, held_karp(&map, &instance));
        }
    }

    #[test]
    fn exact_beats_every_explicit_permutation() {
        let map = map30();
        let instance = vec![3, 1, 4, 15, 9, 2, 6];
        let best = solve_exact(&map, &instance).unwrap();
        for perm in instance.iter().copied().permutations(instance.len()) {
            assert!(best.sum <= tour_length(&map, &perm).unwrap());
        }
    }

    #[test]
    fn golden_five_city_optimum_on_map30() {
        // Frozen output of the exhaustive solver on the seeded 30-city map.
        let tour = solve_exact(&map30(), &[1, 2, 3, 4, 5]).unwrap();
        assert_eq!(tour.sum, 242);
        assert_eq!(tour.path, vec![1, 2, 4, 3, 5]);
    }

    #[test]
    fn heuristic_is_deterministic_and_always_valid() {
        let map = map70();
        let instance: Vec<u64> = (1..=40).collect();
        let a = solve_heuristic(&map, &instance, 7).unwrap();
        let b = solve_heuristic(&map, &instance, 7).unwrap();
        assert_eq!(a, b);
        assert!(validate_tour(&map, &instance, &a).unwrap());
        for seed in 0..10 {
            let t = solve_heuristic(&map, &instance, seed).unwrap();
            assert!(validate_tour(&map, &instance, &t).unwrap());
        }
    }

    #[test]
    fn heuristic_never_beats_the_optimum() {
        let map = map30();
        for n in 2..=8usize {
            let instance: Vec<u64> = (1..=n as u64).collect();
            let opt = solve_exact(&map, &instance).unwrap().sum;
            for seed in 0..5 {
                let h = solve_heuristic(&map, &instance, seed).unwrap();
                assert!(h.sum >= opt, "n={n} seed={seed}: {} < {opt}", h.sum);
            }
        }
    }

    #[test]
    fn heuristic_rejects_empty_instances() {
        assert!(matches!(
            solve_heuristic(&map30(), &[], 0),
            Err(TspError::EmptyInstance)
        ));
    }

    #[test]
    fn single_and_two_city_tours() {
        let map = triangle();
        let one = solve_exact(&map, &[2]).unwrap();
        assert_eq!(one.sum, 0);
        assert_eq!(one.path, vec![2]);
        let two = solve_exact(&map, &[1, 3]).unwrap();
        assert_eq!(two.sum, 18);
        assert!(validate_tour(&map, &[3, 1], &two).unwrap());
    }

    #[test]
    fn padding_round_trips_and_rejects_misuse() {
        let tier = Tier::new(10).unwrap();
        let tour = Tour {
            path: vec![1, 2, 3],
            sum: 21,
        };
        let padded = pad_tour(&tour, tier).unwrap();
        assert_eq!(padded, vec![1, 2, 3, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(strip_padding(&padded).unwrap(), vec![1, 2, 3]);

        let exact_fit = Tour {
            path: (1..=10).collect(),
            sum: 0,
        };
        assert_eq!(pad_tour(&exact_fit, tier).unwrap().len(), 10);

        let too_long = Tour {
            path: (1..=11).collect(),
            sum: 0,
        };
        assert!(matches!(
            pad_tour(&too_long, tier),
            Err(TspError::PathLongerThanTier { len: 11, tier: 10 })
        ));

        assert!(matches!(
            strip_padding(&[1, 0, 3, 0]),
            Err(TspError::BadPadding)
        ));
        assert!(matches!(
            strip_padding(&[0, 0, 0]),
            Err(TspError::BadPadding)
        ));
    }

    #[test]
    fn padding_leaves_the_sum_alone() {
        let map = map30();
        let tour = solve_exact(&map, &[1, 2, 3, 4, 5]).unwrap();
        for tier in crate::tsp::TIERS {
            let tier = Tier::new(tier).unwrap();
            let padded = pad_tour(&tour, tier).unwrap();
            let stripped = strip_padding(&padded).unwrap();
            assert_eq!(tour_length(&map, &stripped).unwrap(), tour.sum);
        }
    }
}
