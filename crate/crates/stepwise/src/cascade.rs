//! The maximal strongly orthogonal cascade of a positive system and the
//! induced layer partition of Δ⁺.

use crate::roots::{dominates, RootSystem};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CascadeError {
    #[error("cascade index {0} out of range (cascade has {1} roots)")]
    LayerMismatch(usize, usize),
    #[error("root id {0} is not in layer {1}")]
    NotInLayer(usize, usize),
}

/// Cascade roots β_1, β_2, … (ids into the system's positive roots) together
/// with the layer partition: Δ⁺ = {β_r} ⊔ ⊔_r Δ⁺_r.
#[derive(Debug, Clone, Serialize)]
pub struct Cascade {
    /// β_r, in construction order: β_1 is the highest root.
    pub betas: Vec<usize>,
    /// Δ⁺_r for each r (same indexing as `betas`); β_r itself not included.
    pub layers: Vec<Vec<usize>>,
    /// Metadata: pairs (s, r) with s > r for which the candidate set of β_s
    /// is contained in that of β_r (the cascade precedence relation).
    pub precedence: Vec<(usize, usize)>,
}

/// Pick the maximum among `candidates`: the unique dominance-maximal element
/// when there is one, otherwise the lexicographically largest coefficient
/// vector among the maximal elements.
fn pick_max(sys: &RootSystem, candidates: &[usize]) -> usize {
    let maximal: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|&c| {
            candidates.iter().all(|&o| {
                o == c || !(dominates(&sys.root(o).coords, &sys.root(c).coords)
                    && sys.root(o).coords != sys.root(c).coords)
            })
        })
        .collect();
    maximal
        .into_iter()
        .max_by(|&a, &b| sys.root(a).coords.cmp(&sys.root(b).coords))
        .expect("nonempty candidate set")
}

/// Build the cascade: β_1 is the maximal positive root and β_{r+1} is the
/// maximum among the positive roots orthogonal to β_1, …, β_r; each layer is
/// Δ⁺_{r+1} = {α ∉ earlier layers : β_{r+1} − α ∈ Δ⁺}.
pub fn build_cascade(sys: &RootSystem) -> Cascade {
    let n = sys.positive_count();
    let mut betas: Vec<usize> = Vec::new();
    let mut candidate_sets: Vec<Vec<usize>> = Vec::new();
    let mut candidates: Vec<usize> = (0..n).collect();
    while !candidates.is_empty() {
        let beta = pick_max(sys, &candidates);
        betas.push(beta);
        candidate_sets.push(candidates.clone());
        candidates.retain(|&a| a != beta && sys.pairing(a, beta) == 0);
    }

    let mut used = vec![false; n];
    for &b in &betas {
        used[b] = true;
    }
    let mut layers = Vec::with_capacity(betas.len());
    for &beta in &betas {
        let mut layer = Vec::new();
        for (a, used_a) in used.iter_mut().enumerate() {
            if *used_a {
                continue;
            }
            let diff: Vec<i64> = sys
                .root(beta)
                .coords
                .iter()
                .zip(&sys.root(a).coords)
                .map(|(x, y)| x - y)
                .collect();
            if sys.root_id(&diff).is_some() {
                layer.push(a);
                *used_a = true;
            }
        }
        layers.push(layer);
    }
    debug_assert!(used.iter().all(|&u| u), "layers must partition Δ⁺");

    let mut precedence = Vec::new();
    for s in 1..betas.len() {
        for r in 0..s {
            if candidate_sets[s]
                .iter()
                .all(|c| candidate_sets[r].contains(c))
            {
                precedence.push((s, r));
            }
        }
    }

    Cascade {
        betas,
        layers,
        precedence,
    }
}

impl Cascade {
    pub fn len(&self) -> usize {
        self.betas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.betas.is_empty()
    }

    /// Which layer (or cascade root) a positive root belongs to.
    pub fn layer_of(&self, id: usize) -> Option<usize> {
        for (r, layer) in self.layers.iter().enumerate() {
            if self.betas[r] == id || layer.contains(&id) {
                return Some(r);
            }
        }
        None
    }

    pub fn to_json(&self, sys: &RootSystem) -> serde_json::Value {
        serde_json::json!({
            "betas": self.betas.iter().map(|&b| sys.root(b).coords.clone()).collect::<Vec<_>>(),
            "layers": self.layers.iter().map(|l| {
                l.iter().map(|&a| sys.root(a).coords.clone()).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        })
    }
}

/// σ_r(α) = −s_{β_r}(α), an involution of Δ⁺_r ∪ {β_r}.
pub fn sigma(
    sys: &RootSystem,
    cascade: &Cascade,
    r: usize,
    id: usize,
) -> Result<usize, CascadeError> {
    if r >= cascade.len() {
        return Err(CascadeError::LayerMismatch(r, cascade.len()));
    }
    let beta = cascade.betas[r];
    if id != beta && !cascade.layers[r].contains(&id) {
        return Err(CascadeError::NotInLayer(id, r));
    }
    let reflected = sys
        .reflect(&sys.root(id).coords, &sys.root(beta).coords)
        .expect("cascade roots are roots");
    let neg: Vec<i64> = reflected.iter().map(|x| -x).collect();
    Ok(sys
        .root_id(&neg)
        .expect("σ_r maps the layer into itself"))
}

/// Layer-wise Heisenberg property: for α, α' ∈ Δ⁺_r the sum α + α' is a root
/// exactly when α' = σ_r(α), and then α + α' = β_r.
pub fn heisenberg_check(sys: &RootSystem, cascade: &Cascade, r: usize) -> Result<bool, CascadeError> {
    if r >= cascade.len() {
        return Err(CascadeError::LayerMismatch(r, cascade.len()));
    }
    let beta = cascade.betas[r];
    for &a in &cascade.layers[r] {
        let sig = sigma(sys, cascade, r, a)?;
        for &b in &cascade.layers[r] {
            let sum: Vec<i64> = sys
                .root(a)
                .coords
                .iter()
                .zip(&sys.root(b).coords)
                .map(|(x, y)| x + y)
                .collect();
            let is_root = sys.is_root(&sum);
            if b == sig {
                if !is_root || sys.root_id(&sum) != Some(beta) {
                    return Ok(false);
                }
            } else if is_root {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
