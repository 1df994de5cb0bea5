//! Restricted root systems of the classical families A, B, C, D, BC with
//! root multiplicities, realized in integer ambient coordinates.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootError {
    #[error("rank {rank} is out of range for family {family} (minimum {min})")]
    InvalidRank {
        family: Family,
        rank: usize,
        min: usize,
    },
    #[error("multiplicity map must cover every positive root exactly: {0}")]
    IncompleteMultiplicity(String),
    #[error("not a root: {0:?}")]
    NotARoot(Vec<i64>),
}

/// Classical family of a restricted root system. `BC` is the non-reduced one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    BC,
}

impl Family {
    /// Smallest rank for which the family's diagram conventions are defined.
    pub fn min_rank(self) -> usize {
        match self {
            Family::A => 1,
            Family::B | Family::BC => 2,
            Family::C => 3,
            Family::D => 4,
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "A" | "a" => Some(Family::A),
            "B" | "b" => Some(Family::B),
            "C" | "c" => Some(Family::C),
            "D" | "d" => Some(Family::D),
            "BC" | "bc" | "Bc" => Some(Family::BC),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::A => write!(f, "A"),
            Family::B => write!(f, "B"),
            Family::C => write!(f, "C"),
            Family::D => write!(f, "D"),
            Family::BC => write!(f, "BC"),
        }
    }
}

/// A positive root carrying both its simple-root coefficient vector and its
/// ambient realization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    /// Coefficients over the simple roots `ψ_1..ψ_n` (all nonnegative).
    pub coords: Vec<i64>,
    /// Integer coordinates in the ambient space (`ℚ^{n+1}` for A_n, `ℚ^n`
    /// otherwise).
    pub ambient: Vec<i64>,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }
}

/// Multiplicity assignment for the positive roots.
#[derive(Debug, Clone)]
pub enum MultPreset {
    /// Every root space one-dimensional (split form).
    SplitOnes,
    /// Explicit map keyed by simple-coefficient vectors; must cover every
    /// positive root.
    User(BTreeMap<Vec<i64>, u32>),
}

/// A positive system Δ⁺ for one of the classical families, with diagram
/// node `ψ_1` anchored at the short/long end for B/C/D (new nodes under
/// rank growth attach at the opposite end, see [`crate::limits`]).
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub family: Family,
    pub rank: usize,
    /// Simple roots ψ_1..ψ_n with unit coordinate vectors.
    pub simple: Vec<Root>,
    /// All positive roots, sorted by (height, coords) ascending.
    pub positive: Vec<Root>,
    /// Multiplicity of each positive root (parallel to `positive`).
    pub mult: Vec<u32>,
    index: BTreeMap<Vec<i64>, usize>,
}

/// Ambient membership predicate for the full root set Δ of a family.
fn is_ambient_root(family: Family, v: &[i64]) -> bool {
    let nonzero: Vec<(usize, i64)> = v
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, x)| x != 0)
        .collect();
    match family {
        Family::A => {
            nonzero.len() == 2 && nonzero[0].1 + nonzero[1].1 == 0 && nonzero[0].1.abs() == 1
        }
        Family::B => match nonzero.len() {
            1 => nonzero[0].1.abs() == 1,
            2 => nonzero[0].1.abs() == 1 && nonzero[1].1.abs() == 1,
            _ => false,
        },
        Family::C => match nonzero.len() {
            1 => nonzero[0].1.abs() == 2,
            2 => nonzero[0].1.abs() == 1 && nonzero[1].1.abs() == 1,
            _ => false,
        },
        Family::D => {
            nonzero.len() == 2 && nonzero[0].1.abs() == 1 && nonzero[1].1.abs() == 1
        }
        Family::BC => match nonzero.len() {
            1 => nonzero[0].1.abs() <= 2,
            2 => nonzero[0].1.abs() == 1 && nonzero[1].1.abs() == 1,
            _ => false,
        },
    }
}

fn unit(dim: usize, i: usize, scale: i64) -> Vec<i64> {
    let mut v = vec![0; dim];
    v[i] = scale;
    v
}

/// Simple roots in ambient coordinates. For B/C/D the node ψ_1 is the
/// endpoint next to the double bond (resp. one fork tip for D) and ψ_n is
/// the far end where higher-rank diagrams grow.
fn simple_ambient(family: Family, rank: usize) -> Vec<Vec<i64>> {
    let n = rank;
    match family {
        Family::A => (0..n)
            .map(|i| {
                let mut v = vec![0; n + 1];
                v[i] = 1;
                v[i + 1] = -1;
                v
            })
            .collect(),
        Family::B | Family::BC => {
            let mut out = vec![unit(n, n - 1, 1)]; // ψ_1 = e_n
            for j in 2..=n {
                let mut v = vec![0; n];
                v[n - j] = 1;
                v[n - j + 1] = -1;
                out.push(v); // ψ_j = e_{n+1-j} - e_{n+2-j}
            }
            out
        }
        Family::C => {
            let mut out = vec![unit(n, n - 1, 2)]; // ψ_1 = 2e_n
            for j in 2..=n {
                let mut v = vec![0; n];
                v[n - j] = 1;
                v[n - j + 1] = -1;
                out.push(v);
            }
            out
        }
        Family::D => {
            let mut fork1 = vec![0; n];
            fork1[n - 2] = 1;
            fork1[n - 1] = 1; // ψ_1 = e_{n-1} + e_n
            let mut fork2 = vec![0; n];
            fork2[n - 2] = 1;
            fork2[n - 1] = -1; // ψ_2 = e_{n-1} - e_n
            let mut out = vec![fork1, fork2];
            for j in 3..=n {
                let mut v = vec![0; n];
                v[n - j] = 1;
                v[n - j + 1] = -1;
                out.push(v);
            }
            out
        }
    }
}

pub fn build_system(
    family: Family,
    rank: usize,
    mult: MultPreset,
) -> Result<RootSystem, RootError> {
    if rank < family.min_rank() {
        return Err(RootError::InvalidRank {
            family,
            rank,
            min: family.min_rank(),
        });
    }
    let simple_amb = simple_ambient(family, rank);
    let mut simple = Vec::with_capacity(rank);
    for (i, amb) in simple_amb.iter().enumerate() {
        simple.push(Root {
            coords: unit(rank, i, 1),
            ambient: amb.clone(),
        });
    }

    // Saturate upward: every positive root is (previous positive) + (simple).
    let mut seen: BTreeMap<Vec<i64>, Root> = BTreeMap::new();
    let mut queue: Vec<Root> = simple.clone();
    for r in &simple {
        seen.insert(r.coords.clone(), r.clone());
    }
    while let Some(r) = queue.pop() {
        for s in &simple {
            let coords: Vec<i64> = r
                .coords
                .iter()
                .zip(&s.coords)
                .map(|(a, b)| a + b)
                .collect();
            if seen.contains_key(&coords) {
                continue;
            }
            let ambient: Vec<i64> = r
                .ambient
                .iter()
                .zip(&s.ambient)
                .map(|(a, b)| a + b)
                .collect();
            if is_ambient_root(family, &ambient) {
                let root = Root { coords, ambient };
                seen.insert(root.coords.clone(), root.clone());
                queue.push(root);
            }
        }
    }

    let mut positive: Vec<Root> = seen.into_values().collect();
    positive.sort_by(|a, b| (a.height(), &a.coords).cmp(&(b.height(), &b.coords)));
    let index: BTreeMap<Vec<i64>, usize> = positive
        .iter()
        .enumerate()
        .map(|(i, r)| (r.coords.clone(), i))
        .collect();

    let mult = match mult {
        MultPreset::SplitOnes => vec![1u32; positive.len()],
        MultPreset::User(map) => {
            let mut out = Vec::with_capacity(positive.len());
            for r in &positive {
                match map.get(&r.coords) {
                    Some(&m) if m > 0 => out.push(m),
                    Some(_) => {
                        return Err(RootError::IncompleteMultiplicity(format!(
                            "zero multiplicity at {:?}",
                            r.coords
                        )))
                    }
                    None => {
                        return Err(RootError::IncompleteMultiplicity(format!(
                            "missing root {:?}",
                            r.coords
                        )))
                    }
                }
            }
            if map.len() != positive.len() {
                return Err(RootError::IncompleteMultiplicity(format!(
                    "map has {} entries, system has {} positive roots",
                    map.len(),
                    positive.len()
                )));
            }
            out
        }
    };

    Ok(RootSystem {
        family,
        rank,
        simple,
        positive,
        mult,
        index,
    })
}

impl RootSystem {
    pub fn positive_count(&self) -> usize {
        self.positive.len()
    }

    pub fn root(&self, id: usize) -> &Root {
        &self.positive[id]
    }

    /// Id of the positive root with the given simple coefficients.
    pub fn root_id(&self, coords: &[i64]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    /// Membership in Δ = Δ⁺ ∪ −Δ⁺ by coefficient vector.
    pub fn is_root(&self, coords: &[i64]) -> bool {
        if self.index.contains_key(coords) {
            return true;
        }
        let neg: Vec<i64> = coords.iter().map(|x| -x).collect();
        self.index.contains_key(&neg)
    }

    /// Standard inner product of two ambient vectors.
    pub fn pairing_ambient(a: &[i64], b: &[i64]) -> i64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    pub fn pairing(&self, a: usize, b: usize) -> i64 {
        Self::pairing_ambient(&self.positive[a].ambient, &self.positive[b].ambient)
    }

    /// Ambient vector of an arbitrary coefficient vector.
    pub fn ambient_of(&self, coords: &[i64]) -> Vec<i64> {
        let dim = self.simple[0].ambient.len();
        let mut v = vec![0i64; dim];
        for (c, s) in coords.iter().zip(&self.simple) {
            for (vi, si) in v.iter_mut().zip(&s.ambient) {
                *vi += c * si;
            }
        }
        v
    }

    /// Reflection s_β(α) as a coefficient vector; the result is always ±(a
    /// positive root).
    pub fn reflect(&self, alpha: &[i64], beta: &[i64]) -> Result<Vec<i64>, RootError> {
        if !self.is_root(alpha) {
            return Err(RootError::NotARoot(alpha.to_vec()));
        }
        if !self.is_root(beta) {
            return Err(RootError::NotARoot(beta.to_vec()));
        }
        let a = self.ambient_of(alpha);
        let b = self.ambient_of(beta);
        let num = 2 * Self::pairing_ambient(&a, &b);
        let den = Self::pairing_ambient(&b, &b);
        debug_assert!(num % den == 0, "Cartan integer must be integral");
        let c = num / den;
        let out: Vec<i64> = alpha
            .iter()
            .zip(beta)
            .map(|(x, y)| x - c * y)
            .collect();
        debug_assert!(self.is_root(&out));
        Ok(out)
    }

    /// Id of α+β when the sum is again a (positive) root.
    pub fn sum_root(&self, a: usize, b: usize) -> Option<usize> {
        let coords: Vec<i64> = self.positive[a]
            .coords
            .iter()
            .zip(&self.positive[b].coords)
            .map(|(x, y)| x + y)
            .collect();
        self.root_id(&coords)
    }

    /// α is nonmultipliable when 2α is not a root.
    pub fn nonmultipliable(&self, id: usize) -> bool {
        let dbl: Vec<i64> = self.positive[id].coords.iter().map(|x| 2 * x).collect();
        !self.is_root(&dbl)
    }

    /// Ids of the positive part of Δ₀ = {α ∈ Δ : 2α ∉ Δ}.
    pub fn delta_zero(&self) -> Vec<usize> {
        (0..self.positive.len())
            .filter(|&i| self.nonmultipliable(i))
            .collect()
    }

    pub fn mult_of(&self, id: usize) -> u32 {
        self.mult[id]
    }

    /// Total dimension Σ mult(α) over a set of root ids.
    pub fn dim_of(&self, ids: &[usize]) -> u64 {
        ids.iter().map(|&i| self.mult[i] as u64).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "family": self.family.to_string(),
            "rank": self.rank,
            "simple": self.simple.iter().map(|r| r.ambient.clone()).collect::<Vec<_>>(),
            "positive": self.positive.iter().enumerate().map(|(i, r)| serde_json::json!({
                "coords": r.coords,
                "mult": self.mult[i],
            })).collect::<Vec<_>>(),
        })
    }
}

/// Lexicographic comparison of coefficient vectors (first differing entry
/// decides). Used as the deterministic tie-break everywhere.
pub fn lex_cmp(a: &[i64], b: &[i64]) -> std::cmp::Ordering {
    a.cmp(b)
}

/// Partial order on the root lattice: `a ≤ b` iff `b - a` has all
/// coefficients ≥ 0.
pub fn dominates(b: &[i64], a: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| y >= x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(f: Family, n: usize) -> RootSystem {
        build_system(f, n, MultPreset::SplitOnes).unwrap()
    }

    #[test]
    fn a2_enumeration() {
        let s = sys(Family::A, 2);
        let coords: Vec<Vec<i64>> = s.positive.iter().map(|r| r.coords.clone()).collect();
        assert_eq!(coords, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(s.root(s.root_id(&[1, 1]).unwrap()).ambient, vec![1, 0, -1]);
    }

    #[test]
    fn positive_counts_match_closed_forms() {
        for n in 1..=8 {
            assert_eq!(sys(Family::A, n).positive_count(), n * (n + 1) / 2);
        }
        for n in 2..=8 {
            assert_eq!(sys(Family::B, n).positive_count(), n * n);
            assert_eq!(sys(Family::BC, n).positive_count(), n * n + n);
        }
        for n in 3..=8 {
            assert_eq!(sys(Family::C, n).positive_count(), n * n);
        }
        for n in 4..=8 {
            assert_eq!(sys(Family::D, n).positive_count(), n * (n - 1));
        }
    }

    /// Independent enumeration oracle for C₃: positive roots are exactly
    /// {e_i − e_j, e_i + e_j (i<j), 2e_i}.
    #[test]
    fn c3_against_bruteforce_oracle() {
        let s = sys(Family::C, 3);
        let mut expected: Vec<Vec<i64>> = Vec::new();
        for i in 0..3 {
            for j in (i + 1)..3 {
                let mut v = vec![0i64; 3];
                v[i] = 1;
                v[j] = -1;
                expected.push(v.clone());
                v[j] = 1;
                expected.push(v);
            }
            expected.push(unit(3, i, 2));
        }
        expected.sort();
        let mut got: Vec<Vec<i64>> = s.positive.iter().map(|r| r.ambient.clone()).collect();
        got.sort();
        assert_eq!(got, expected);
    }

    /// Positivity convention: e_i ± e_j (i < j) and e_i, 2e_i are the
    /// positive roots for B/BC; sign patterns confirm it.
    #[test]
    fn b3_positive_ambients() {
        let s = sys(Family::B, 3);
        for r in &s.positive {
            let first = r.ambient.iter().find(|&&x| x != 0).unwrap();
            assert!(*first > 0, "leading ambient entry positive: {:?}", r.ambient);
        }
    }

    #[test]
    fn bc2_delta_zero_is_c2() {
        let s = sys(Family::BC, 2);
        assert_eq!(s.positive_count(), 6);
        let dz = s.delta_zero();
        let mut amb: Vec<Vec<i64>> = dz.iter().map(|&i| s.root(i).ambient.clone()).collect();
        amb.sort();
        assert_eq!(
            amb,
            vec![vec![0, 2], vec![1, -1], vec![1, 1], vec![2, 0]]
        );
    }

    #[test]
    fn reflect_examples() {
        let s = sys(Family::A, 3);
        // s_{ψ2}(ψ1) = ψ1 + ψ2, i.e. s_{e2-e3}(e1-e2) = e1-e3.
        let r = s.reflect(&[1, 0, 0], &[0, 1, 0]).unwrap();
        assert_eq!(r, vec![1, 1, 0]);
        // Reflecting the highest root through itself negates it.
        let r = s.reflect(&[1, 1, 1], &[1, 1, 1]).unwrap();
        assert_eq!(r, vec![-1, -1, -1]);
        assert!(s.reflect(&[5, 0, 0], &[0, 1, 0]).is_err());
    }

    #[test]
    fn weyl_invariance_all_pairs() {
        for (f, lo) in [
            (Family::A, 1),
            (Family::B, 2),
            (Family::C, 3),
            (Family::D, 4),
            (Family::BC, 2),
        ] {
            for n in lo..=5.max(lo) {
                let s = sys(f, n);
                for a in &s.positive {
                    for b in &s.positive {
                        let r = s.reflect(&a.coords, &b.coords).unwrap();
                        assert!(s.is_root(&r));
                    }
                }
            }
        }
    }

    /// Root strings {α + kβ} ∩ Δ form unbroken intervals.
    #[test]
    fn root_strings_are_intervals() {
        for (f, n) in [
            (Family::A, 4),
            (Family::B, 4),
            (Family::C, 4),
            (Family::D, 4),
            (Family::BC, 3),
        ] {
            let s = sys(f, n);
            for a in &s.positive {
                for b in &s.positive {
                    if a.coords == b.coords {
                        continue;
                    }
                    // Strings through a proportional root (e_i and 2e_i in
                    // BC) legitimately skip the origin; the interval law
                    // applies to non-proportional pairs only.
                    let proportional = (0..a.ambient.len()).all(|i| {
                        (0..a.ambient.len())
                            .all(|j| a.ambient[i] * b.ambient[j] == a.ambient[j] * b.ambient[i])
                    });
                    if proportional {
                        continue;
                    }
                    let pattern: Vec<bool> = (-5i64..=5)
                        .map(|k| {
                            let v: Vec<i64> = a
                                .coords
                                .iter()
                                .zip(&b.coords)
                                .map(|(x, y)| x + k * y)
                                .collect();
                            s.is_root(&v)
                        })
                        .collect();
                    let hits: Vec<usize> = pattern
                        .iter()
                        .enumerate()
                        .filter(|(_, &h)| h)
                        .map(|(i, _)| i)
                        .collect();
                    if let (Some(&first), Some(&last)) = (hits.first(), hits.last()) {
                        assert_eq!(last - first + 1, hits.len(), "broken string");
                    }
                }
            }
        }
    }

    #[test]
    fn invalid_ranks_rejected() {
        assert!(matches!(
            build_system(Family::C, 2, MultPreset::SplitOnes),
            Err(RootError::InvalidRank { .. })
        ));
        assert!(matches!(
            build_system(Family::D, 3, MultPreset::SplitOnes),
            Err(RootError::InvalidRank { .. })
        ));
        assert!(build_system(Family::A, 1, MultPreset::SplitOnes).is_ok());
    }

    #[test]
    fn user_multiplicities_must_cover() {
        let s = sys(Family::A, 2);
        let mut map = BTreeMap::new();
        for r in &s.positive {
            map.insert(r.coords.clone(), 2u32);
        }
        let ok = build_system(Family::A, 2, MultPreset::User(map.clone())).unwrap();
        assert_eq!(ok.dim_of(&[0, 1, 2]), 6);
        map.remove(&vec![1i64, 1]);
        assert!(matches!(
            build_system(Family::A, 2, MultPreset::User(map)),
            Err(RootError::IncompleteMultiplicity(_))
        ));
    }

    #[test]
    fn json_shape_is_stable() {
        let s = sys(Family::A, 2);
        let j = serde_json::to_string(&s.to_json()).unwrap();
        assert_eq!(
            j,
            r#"{"family":"A","positive":[{"coords":[0,1],"mult":1},{"coords":[1,0],"mult":1},{"coords":[1,1],"mult":1}],"rank":2,"simple":[[1,-1,0],[0,1,-1]]}"#
        );
    }

    #[test]
    fn node_labels_pin_the_special_end_for_bcd() {
        // ψ_1 carries the special end: short root e_n for B, long 2e_n for C,
        // the fork pair for D.
        let b = sys(Family::B, 4);
        assert_eq!(b.simple[0].ambient, vec![0, 0, 0, 1]);
        assert_eq!(b.simple[3].ambient, vec![1, -1, 0, 0]);
        let c = sys(Family::C, 4);
        assert_eq!(c.simple[0].ambient, vec![0, 0, 0, 2]);
        let d = sys(Family::D, 4);
        assert_eq!(d.simple[0].ambient, vec![0, 0, 1, 1]);
        assert_eq!(d.simple[1].ambient, vec![0, 0, 1, -1]);
    }
}
