//! Static reference routings.

use crate::model::{Scenario, SplitVector};

/// Single shortest path per pair: everything on the candidate path with the
/// fewest hops, lowest index on ties. No path is excluded.
pub fn ospf_assign(scenario: &Scenario) -> Vec<SplitVector> {
    scenario
        .pairs
        .iter()
        .map(|pair| {
            let mut fractions = vec![0.0; pair.paths.len()];
            if let Some((best, _)) = pair
                .paths
                .iter()
                .enumerate()
                .min_by_key(|(i, p)| (p.hops(), *i))
            {
                fractions[best] = 1.0;
            }
            SplitVector::from_fractions(fractions)
        })
        .collect()
}

/// `x_p = 1 / |P|` on every candidate path.
pub fn equal_split_assign(scenario: &Scenario) -> Vec<SplitVector> {
    scenario
        .pairs
        .iter()
        .map(|pair| SplitVector::uniform(pair.paths.len()))
        .collect()
}
