//! Independent desk-scale oracle: exhaustively enumerate bijections of
//! tiny grid-valued cones, keep the ones satisfying the grid-restricted
//! norm-additive condition, and classify them against the monomial
//! (weighted-composition) form.
//!
//! All arithmetic here is integer; there is no tolerance anywhere. The
//! grid-restricted condition only quantifies over pairs whose sum stays in
//! the grid, so it is weaker than the full condition: non-monomial passers
//! can exist and are reported as data, never asserted away.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::error::GridError;

pub const DEFAULT_ELEMENT_CAP: usize = 16;
pub const DEFAULT_PERMUTATION_CAP: u64 = 400_000;

/// The complete cone of functions `{0..max_value}^n_points`, in
/// lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct GridCone {
    n_points: usize,
    max_value: u32,
    elements: Vec<Vec<u32>>,
}

impl GridCone {
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn max_value(&self) -> u32 {
        self.max_value
    }

    pub fn elements(&self) -> &[Vec<u32>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Lexicographic index of an element (row-major radix encoding).
    pub fn index_of(&self, element: &[u32]) -> Option<usize> {
        if element.len() != self.n_points || element.iter().any(|&v| v > self.max_value) {
            return None;
        }
        let radix = (self.max_value + 1) as usize;
        let mut idx = 0usize;
        for &v in element {
            idx = idx * radix + v as usize;
        }
        Some(idx)
    }

    fn sup_norm(&self, idx: usize) -> u32 {
        self.elements[idx].iter().copied().max().unwrap_or(0)
    }

    /// Index of the componentwise sum, when it stays within the grid.
    fn sum_index(&self, i: usize, j: usize) -> Option<usize> {
        let sum: Vec<u32> = self.elements[i]
            .iter()
            .zip(&self.elements[j])
            .map(|(a, b)| a + b)
            .collect();
        self.index_of(&sum)
    }
}

/// A bijection of grid-cone elements, stored as an index permutation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridMap {
    pub perm: Vec<usize>,
}

impl GridMap {
    pub fn identity(n: usize) -> Self {
        GridMap {
            perm: (0..n).collect(),
        }
    }

    pub fn is_valid(&self) -> bool {
        let mut seen = vec![false; self.perm.len()];
        self.perm.iter().all(|&i| {
            if i < seen.len() && !seen[i] {
                seen[i] = true;
                true
            } else {
                false
            }
        })
    }

    pub fn compose(&self, inner: &GridMap) -> GridMap {
        GridMap {
            perm: inner.perm.iter().map(|&i| self.perm[i]).collect(),
        }
    }

    pub fn invert(&self) -> GridMap {
        let mut inv = vec![0usize; self.perm.len()];
        for (i, &j) in self.perm.iter().enumerate() {
            inv[j] = i;
        }
        GridMap { perm: inv }
    }

    pub fn fixes_zero(&self) -> bool {
        self.perm.first() == Some(&0)
    }
}

/// Enumerates the full grid cone, refusing sizes beyond the cap.
pub fn enumerate_grid_cone(
    n_points: usize,
    max_value: u32,
    element_cap: usize,
) -> Result<GridCone, GridError> {
    let radix = (max_value + 1) as usize;
    let count = radix.checked_pow(n_points as u32).unwrap_or(usize::MAX);
    if n_points == 0 || count > element_cap {
        return Err(GridError::TooLarge {
            elements: count,
            cap: element_cap,
        });
    }
    let mut elements = Vec::with_capacity(count);
    let mut current = vec![0u32; n_points];
    loop {
        elements.push(current.clone());
        // odometer increment, least-significant digit last
        let mut k = n_points;
        loop {
            if k == 0 {
                return Ok(GridCone {
                    n_points,
                    max_value,
                    elements,
                });
            }
            k -= 1;
            if current[k] < max_value {
                current[k] += 1;
                break;
            }
            current[k] = 0;
        }
    }
}

/// All ordered pairs `(f, g)` whose componentwise sum stays in the grid.
pub fn admissible_pairs(cone: &GridCone) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..cone.len() {
        for j in 0..cone.len() {
            if cone.sum_index(i, j).is_some() {
                out.push((i, j));
            }
        }
    }
    out
}

fn factorial_at_most(n: usize, cap: u64) -> bool {
    let mut acc: u64 = 1;
    for k in 2..=n as u64 {
        acc = match acc.checked_mul(k) {
            Some(v) if v <= cap => v,
            _ => return false,
        };
    }
    true
}

/// Exactly the bijections satisfying `||T(f+g)|| = ||Tf + Tg||` (sup norm,
/// integers) for every admissible pair, found by backtracking over partial
/// permutations. Output order is the lexicographic order of the
/// permutations, so repeated runs are identical.
pub fn find_norm_additive_bijections(
    cone: &GridCone,
    permutation_cap: u64,
) -> Result<Vec<GridMap>, GridError> {
    find_norm_additive_bijections_with(cone, permutation_cap, false)
}

/// As [`find_norm_additive_bijections`]; with `parallel` the search shards
/// consistent two-element prefixes across threads and merges the partial
/// result lists in prefix order, so the output is identical either way.
pub fn find_norm_additive_bijections_with(
    cone: &GridCone,
    permutation_cap: u64,
    parallel: bool,
) -> Result<Vec<GridMap>, GridError> {
    if !factorial_at_most(cone.len(), permutation_cap) {
        return Err(GridError::TooManyBijections {
            elements: cone.len(),
            cap: permutation_cap,
        });
    }
    let n = cone.len();
    // triples (i, j, s) with s the index of element_i + element_j, grouped
    // by the largest of the three indices: a triple becomes checkable
    // exactly when that element's image is assigned
    let mut triples_at: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if let Some(s) = cone.sum_index(i, j) {
                triples_at[i.max(j).max(s)].push((i, j, s));
            }
        }
    }
    let norms: Vec<u32> = (0..n).map(|i| cone.sup_norm(i)).collect();

    if !parallel || n < 4 {
        let mut assignment: Vec<usize> = Vec::with_capacity(n);
        let mut used = vec![false; n];
        let mut found = Vec::new();
        search(
            cone,
            &triples_at,
            &norms,
            &mut assignment,
            &mut used,
            &mut found,
        );
        return Ok(found);
    }

    // consistent prefixes of length 2, in lexicographic order
    let mut prefixes: Vec<Vec<usize>> = Vec::new();
    for first in 0..n {
        if !prefix_consistent(cone, &triples_at, &norms, &[first]) {
            continue;
        }
        for second in 0..n {
            if second != first
                && prefix_consistent(cone, &triples_at, &norms, &[first, second])
            {
                prefixes.push(vec![first, second]);
            }
        }
    }
    let mut shards: Vec<Vec<GridMap>> = Vec::with_capacity(prefixes.len());
    std::thread::scope(|scope| {
        let handles: Vec<_> = prefixes
            .iter()
            .map(|prefix| {
                let triples_at = &triples_at;
                let norms = &norms;
                scope.spawn(move || {
                    let mut assignment = prefix.clone();
                    let mut used = vec![false; n];
                    for &p in prefix {
                        used[p] = true;
                    }
                    let mut found = Vec::new();
                    search(cone, triples_at, norms, &mut assignment, &mut used, &mut found);
                    found
                })
            })
            .collect();
        for handle in handles {
            shards.push(handle.join().expect("search shard panicked"));
        }
    });
    Ok(shards.into_iter().flatten().collect())
}

fn prefix_consistent(
    cone: &GridCone,
    triples_at: &[Vec<(usize, usize, usize)>],
    norms: &[u32],
    assignment: &[usize],
) -> bool {
    let k = assignment.len() - 1;
    triples_at[k].iter().all(|&(i, j, s)| {
        let vector_sum_norm = cone.elements[assignment[i]]
            .iter()
            .zip(&cone.elements[assignment[j]])
            .map(|(a, b)| a + b)
            .max()
            .unwrap_or(0);
        norms[assignment[s]] == vector_sum_norm
    })
}

fn search(
    cone: &GridCone,
    triples_at: &[Vec<(usize, usize, usize)>],
    norms: &[u32],
    assignment: &mut Vec<usize>,
    used: &mut [bool],
    found: &mut Vec<GridMap>,
) {
    let k = assignment.len();
    if k == cone.len() {
        found.push(GridMap {
            perm: assignment.clone(),
        });
        return;
    }
    for candidate in 0..cone.len() {
        if used[candidate] {
            continue;
        }
        assignment.push(candidate);
        used[candidate] = true;
        let consistent = triples_at[k].iter().all(|&(i, j, s)| {
            let ti = assignment[i];
            let tj = assignment[j];
            let ts = assignment[s];
            let vector_sum_norm = cone.elements[ti]
                .iter()
                .zip(&cone.elements[tj])
                .map(|(a, b)| a + b)
                .max()
                .unwrap_or(0);
            norms[ts] == vector_sum_norm
        });
        if consistent {
            search(cone, triples_at, norms, assignment, used, found);
        }
        assignment.pop();
        used[candidate] = false;
    }
}

/// Verdict of testing a grid map against the monomial form
/// `Tf(y) = h(y) f(tau(y))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum MonomialVerdict {
    Monomial { tau: Vec<usize>, weights: Vec<u32> },
    NonMonomial { witness_element: usize },
}

/// Searches every point permutation, solving for the weights from the
/// point-indicator images and verifying against all elements; returns the
/// first match or the first element at which every candidate fails.
pub fn classify_monomial(cone: &GridCone, map: &GridMap) -> MonomialVerdict {
    let n = cone.n_points();
    let mut first_witness: Option<usize> = None;
    for tau in point_permutations(n) {
        // h(y) = image of the indicator of tau(y), read at y
        let mut weights = Vec::with_capacity(n);
        let mut valid = true;
        let mut indicator_witness = 0usize;
        for y in 0..n {
            let mut indicator = vec![0u32; n];
            indicator[tau[y]] = 1;
            let idx = cone.index_of(&indicator).expect("indicator is in the grid");
            let image = map.perm[idx];
            let h = cone.elements[image][y];
            if h == 0 {
                valid = false;
                indicator_witness = idx;
                break;
            }
            weights.push(h);
        }
        if !valid {
            first_witness.get_or_insert(indicator_witness);
            continue;
        }
        // verify the representation on every element
        let mut failure: Option<usize> = None;
        'elements: for (i, element) in cone.elements().iter().enumerate() {
            let image = &cone.elements()[map.perm[i]];
            for y in 0..n {
                if image[y] != weights[y] * element[tau[y]] {
                    failure = Some(i);
                    break 'elements;
                }
            }
        }
        match failure {
            None => return MonomialVerdict::Monomial { tau, weights },
            Some(i) => {
                first_witness.get_or_insert(i);
            }
        }
    }
    MonomialVerdict::NonMonomial {
        witness_element: first_witness.unwrap_or(0),
    }
}

/// Point permutations of `0..n` in lexicographic order.
fn point_permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                current.push(v);
                go(n, current, used, out);
                current.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Closure scan of a set of grid maps under composition and inverse.
#[derive(Clone, Debug, Serialize)]
pub struct GroupClosureReport {
    pub contains_identity: bool,
    pub closed_under_composition: bool,
    pub closed_under_inverse: bool,
    pub is_group: bool,
}

pub fn group_closure(maps: &[GridMap]) -> GroupClosureReport {
    let set: BTreeSet<&Vec<usize>> = maps.iter().map(|m| &m.perm).collect();
    let n = maps.first().map(|m| m.perm.len()).unwrap_or(0);
    let contains_identity = set.contains(&(0..n).collect::<Vec<_>>());
    let closed_under_inverse = maps.iter().all(|m| set.contains(&m.invert().perm));
    let closed_under_composition = maps
        .iter()
        .all(|a| maps.iter().all(|b| set.contains(&a.compose(b).perm)));
    GroupClosureReport {
        contains_identity,
        closed_under_composition,
        closed_under_inverse,
        is_group: contains_identity && closed_under_composition && closed_under_inverse,
    }
}

/// CLI-facing enumeration summary.
#[derive(Clone, Debug, Serialize)]
pub struct EnumerationReport {
    pub cone: ConeSummary,
    pub pairs_checked: usize,
    pub passing_count: usize,
    pub all_passers_fix_zero: bool,
    pub monomial_count: usize,
    pub non_monomial_count: usize,
    pub monomial_examples: Vec<MonomialVerdict>,
    pub non_monomial_examples: Vec<GridMap>,
    pub group_closure: GroupClosureReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeSummary {
    pub n: usize,
    pub max: u32,
    pub elements: usize,
}

/// Full pipeline: enumerate, filter by the norm-additive condition,
/// classify every passer, and scan the passing set for group structure.
pub fn enumerate_report(
    n_points: usize,
    max_value: u32,
    element_cap: usize,
    permutation_cap: u64,
) -> Result<EnumerationReport, GridError> {
    enumerate_report_with(n_points, max_value, element_cap, permutation_cap, false)
}

pub fn enumerate_report_with(
    n_points: usize,
    max_value: u32,
    element_cap: usize,
    permutation_cap: u64,
    parallel: bool,
) -> Result<EnumerationReport, GridError> {
    let cone = enumerate_grid_cone(n_points, max_value, element_cap)?;
    let pairs = admissible_pairs(&cone);
    let passers = find_norm_additive_bijections_with(&cone, permutation_cap, parallel)?;
    let mut monomial_count = 0;
    let mut monomial_examples = Vec::new();
    let mut non_monomial_examples = Vec::new();
    for map in &passers {
        match classify_monomial(&cone, map) {
            v @ MonomialVerdict::Monomial { .. } => {
                monomial_count += 1;
                if monomial_examples.len() < 4 {
                    monomial_examples.push(v);
                }
            }
            MonomialVerdict::NonMonomial { .. } => {
                if non_monomial_examples.len() < 4 {
                    non_monomial_examples.push(map.clone());
                }
            }
        }
    }
    Ok(EnumerationReport {
        cone: ConeSummary {
            n: n_points,
            max: max_value,
            elements: cone.len(),
        },
        pairs_checked: pairs.len(),
        passing_count: passers.len(),
        all_passers_fix_zero: passers.iter().all(GridMap::fixes_zero),
        monomial_count,
        non_monomial_count: passers.len() - monomial_count,
        monomial_examples,
        non_monomial_examples,
        group_closure: group_closure(&passers),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_small_cones() {
        let c = enumerate_grid_cone(1, 1, 16).unwrap();
        assert_eq!(c.elements(), &[vec![0], vec![1]]);
        let c = enumerate_grid_cone(2, 1, 16).unwrap();
        assert_eq!(
            c.elements(),
            &[vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        let c = enumerate_grid_cone(2, 2, 16).unwrap();
        assert_eq!(c.len(), 9);
        assert!(matches!(
            enumerate_grid_cone(3, 3, 16),
            Err(GridError::TooLarge { elements: 64, .. })
        ));
    }

    #[test]
    fn index_of_matches_enumeration_order() {
        let c = enumerate_grid_cone(2, 2, 16).unwrap();
        for (i, e) in c.elements().iter().enumerate() {
            assert_eq!(c.index_of(e), Some(i));
        }
        assert_eq!(c.index_of(&[3, 0]), None);
    }

    #[test]
    fn admissible_pair_counts() {
        let c = enumerate_grid_cone(1, 1, 16).unwrap();
        assert_eq!(admissible_pairs(&c).len(), 3);
        let c = enumerate_grid_cone(2, 2, 16).unwrap();
        let pairs = admissible_pairs(&c);
        assert_eq!(pairs.len(), 36);
        // (f, 0) is admissible for every f
        for i in 0..c.len() {
            assert!(pairs.contains(&(i, 0)));
        }
    }

    #[test]
    fn one_point_boolean_cone_passes_identity_only() {
        // by hand: the swap T(0)=1, T(1)=0 fails at the pair (0,0):
        // ||T(0+0)|| = ||1|| = 1 but ||T0 + T0|| = ||2|| = 2
        let c = enumerate_grid_cone(1, 1, 16).unwrap();
        let passers = find_norm_additive_bijections(&c, 400_000).unwrap();
        assert_eq!(passers, vec![GridMap::identity(2)]);
    }

    #[test]
    fn coordinate_permutations_pass_on_2x2() {
        let c = enumerate_grid_cone(2, 2, 16).unwrap();
        let passers = find_norm_additive_bijections(&c, 400_000).unwrap();
        // f -> f o swap as an element permutation
        let swap_map = GridMap {
            perm: (0..c.len())
                .map(|i| {
                    let e = &c.elements()[i];
                    c.index_of(&[e[1], e[0]]).unwrap()
                })
                .collect(),
        };
        assert!(passers.contains(&GridMap::identity(9)));
        assert!(passers.contains(&swap_map));
        // any passing map fixes the zero element, forced by the pair (0,0)
        assert!(passers.iter().all(GridMap::fixes_zero));
    }

    #[test]
    fn classify_identity_and_swap_as_monomial() {
        let c = enumerate_grid_cone(2, 2, 16).unwrap();
        assert_eq!(
            classify_monomial(&c, &GridMap::identity(9)),
            MonomialVerdict::Monomial {
                tau: vec![0, 1],
                weights: vec![1, 1],
            }
        );
        let swap_map = GridMap {
            perm: (0..c.len())
                .map(|i| {
                    let e = &c.elements()[i];
                    c.index_of(&[e[1], e[0]]).unwrap()
                })
                .collect(),
        };
        assert_eq!(
            classify_monomial(&c, &swap_map),
            MonomialVerdict::Monomial {
                tau: vec![1, 0],
                weights: vec![1, 1],
            }
        );
    }

    #[test]
    fn exchange_map_is_non_monomial() {
        // fix all elements except exchanging (1,2) <-> (2,1): indicator
        // images force h = 1 and tau in {id, swap}; neither reproduces it
        let c = enumerate_grid_cone(2, 2, 16).unwrap();
        let a = c.index_of(&[1, 2]).unwrap();
        let b = c.index_of(&[2, 1]).unwrap();
        let mut perm: Vec<usize> = (0..c.len()).collect();
        perm.swap(a, b);
        let verdict = classify_monomial(&c, &GridMap { perm });
        match verdict {
            MonomialVerdict::NonMonomial { witness_element } => {
                assert!(witness_element == a || witness_element == b);
            }
            other => panic!("expected non-monomial, got {other:?}"),
        }
    }

    #[test]
    fn grid_monomials_all_pass_on_3x1() {
        // every coordinate permutation with h = 1 is norm additive
        let c = enumerate_grid_cone(3, 1, 16).unwrap();
        let passers = find_norm_additive_bijections(&c, 400_000).unwrap();
        for tau in point_permutations(3) {
            let map = GridMap {
                perm: (0..c.len())
                    .map(|i| {
                        let e = &c.elements()[i];
                        let moved: Vec<u32> = (0..3).map(|y| e[tau[y]]).collect();
                        c.index_of(&moved).unwrap()
                    })
                    .collect(),
            };
            assert!(passers.contains(&map), "tau {tau:?} missing");
        }
    }

    #[test]
    fn report_is_deterministic() {
        let a = enumerate_report(2, 2, 16, 400_000).unwrap();
        let b = enumerate_report(2, 2, 16, 400_000).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert!(a.all_passers_fix_zero);
        assert!(a.monomial_count >= 2);
    }

    #[test]
    fn permutation_cap_blocks_oversized_searches() {
        let c = enumerate_grid_cone(4, 1, 16).unwrap();
        assert!(matches!(
            find_norm_additive_bijections(&c, 400_000),
            Err(GridError::TooManyBijections { .. })
        ));
    }

    #[test]
    fn parallel_search_matches_sequential() {
        let c = enumerate_grid_cone(2, 2, 16).unwrap();
        let sequential = find_norm_additive_bijections_with(&c, 400_000, false).unwrap();
        let parallel = find_norm_additive_bijections_with(&c, 400_000, true).unwrap();
        assert_eq!(sequential, parallel);
    }
}
