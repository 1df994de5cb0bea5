//! Parabolic subsets Φ ⊆ Ψ: the Φ^red/Φ^nil split of Δ⁺, intersection of the
//! cascade layers with the nilradical (J_r = J'_r ⊔ J''_r), the grouped
//! summands l_{Φ,j} = z_{Φ,j} ⊕ v_{Φ,j}, and exhaustive root-combinatorial
//! verification of the bracket relations that make the decomposition
//! stepwise square integrable.

use crate::cascade::{sigma, Cascade};
use crate::roots::RootSystem;
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParabolicError {
    #[error("simple-root index {index} out of range for rank {rank}")]
    PhiOutOfRange { index: usize, rank: usize },
}

/// The split Δ⁺ = (Φ^red ∩ Δ⁺) ⊔ Φ^nil induced by a subset Φ of simple
/// roots: a root is reductive when its support lies inside Φ, nilpotent when
/// some coefficient outside Φ is positive.
#[derive(Debug, Clone)]
pub struct PhiSplit {
    /// Internal 0-based simple-root indices of Φ, sorted.
    pub phi: Vec<usize>,
    /// Ψ∖Φ in increasing node order; restrictions are coefficient vectors
    /// over these nodes.
    pub free: Vec<usize>,
    /// Positive roots supported inside Φ.
    pub red_pos: Vec<usize>,
    /// Positive roots with a positive coefficient outside Φ.
    pub nil: Vec<usize>,
    in_nil: Vec<bool>,
}

impl PhiSplit {
    pub fn in_nil(&self, id: usize) -> bool {
        self.in_nil[id]
    }
}

pub fn phi_split(sys: &RootSystem, phi: &BTreeSet<usize>) -> Result<PhiSplit, ParabolicError> {
    for &i in phi {
        if i >= sys.rank {
            return Err(ParabolicError::PhiOutOfRange {
                index: i,
                rank: sys.rank,
            });
        }
    }
    let free: Vec<usize> = (0..sys.rank).filter(|i| !phi.contains(i)).collect();
    let mut red_pos = Vec::new();
    let mut nil = Vec::new();
    let mut in_nil = vec![false; sys.positive_count()];
    for (id, root) in sys.positive.iter().enumerate() {
        if free.iter().any(|&i| root.coords[i] > 0) {
            in_nil[id] = true;
            nil.push(id);
        } else {
            red_pos.push(id);
        }
    }
    Ok(PhiSplit {
        phi: phi.iter().copied().collect(),
        free,
        red_pos,
        nil,
        in_nil,
    })
}

/// Restriction of a positive root to a_Φ, encoded as its coefficient vector
/// over Ψ∖Φ. Two roots restrict equally iff these vectors coincide.
pub fn restriction(sys: &RootSystem, split: &PhiSplit, id: usize) -> Vec<i64> {
    let coords = &sys.root(id).coords;
    split.free.iter().map(|&i| coords[i]).collect()
}

/// All positive roots with the same restriction to a_Φ as `id` (the class
/// [α]_Φ), in id order.
pub fn restriction_class(sys: &RootSystem, split: &PhiSplit, id: usize) -> Vec<usize> {
    let key = restriction(sys, split, id);
    (0..sys.positive_count())
        .filter(|&d| restriction(sys, split, d) == key)
        .collect()
}

/// Layer data of one surviving cascade step (β_r in Φ^nil): the nilpotent
/// part J_r of the layer and its split J'_r ⊔ J''_r under σ_r.
#[derive(Debug, Clone)]
pub struct StepSplit {
    /// Cascade index r (0-based).
    pub step: usize,
    /// Root id of β_r.
    pub beta: usize,
    /// J_r = Δ⁺_r ∩ Φ^nil.
    pub j_all: Vec<usize>,
    /// α ∈ J_r with σ_r(α) ∈ J_r (the symplectic part).
    pub j_prime: Vec<usize>,
    /// α ∈ J_r with σ_r(α) ∉ J_r (absorbed into the center).
    pub j_dprime: Vec<usize>,
}

/// One grouped summand l_{Φ,j}: the cascade steps sharing a common nonzero
/// restriction, with center z and symplectic complement v.
#[derive(Debug, Clone)]
pub struct IndexGroup {
    /// Cascade indices (0-based) in I_j, in cascade order.
    pub steps: Vec<usize>,
    /// The shared restriction β_i|_{a_Φ} over Ψ∖Φ.
    pub restriction: Vec<i64>,
    /// z_{Φ,j} root ids: ∪_{i∈I_j} ({β_i} ∪ J''_i), sorted.
    pub z: Vec<usize>,
    /// v_{Φ,j} root ids: ∪_{i∈I_j} J'_i, sorted.
    pub v: Vec<usize>,
    /// dim l_{Φ,j} = dim z + dim v, with multiplicities.
    pub dim_l: u64,
    pub dim_z: u64,
    pub dim_v: u64,
}

impl IndexGroup {
    /// Root ids of l_{Φ,j} = z ∪ v, sorted.
    pub fn l(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.z.iter().chain(&self.v).copied().collect();
        out.sort_unstable();
        out
    }
}

/// Full Φ-decomposition of the nilradical's root content.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub split: PhiSplit,
    /// Surviving steps (β_r ∈ Φ^nil) in cascade order.
    pub steps: Vec<StepSplit>,
    /// Groups I_1..I_ℓ in first-occurrence order of their restriction.
    pub groups: Vec<IndexGroup>,
}

pub fn decompose(
    sys: &RootSystem,
    cascade: &Cascade,
    phi: &BTreeSet<usize>,
) -> Result<Decomposition, ParabolicError> {
    let split = phi_split(sys, phi)?;
    let mut steps = Vec::new();
    for (r, &beta) in cascade.betas.iter().enumerate() {
        if !split.in_nil(beta) {
            continue;
        }
        let j_all: Vec<usize> = cascade.layers[r]
            .iter()
            .copied()
            .filter(|&a| split.in_nil(a))
            .collect();
        let mut j_prime = Vec::new();
        let mut j_dprime = Vec::new();
        for &a in &j_all {
            let im = sigma(sys, cascade, r, a).expect("layer member");
            if split.in_nil(im) {
                j_prime.push(a);
            } else {
                j_dprime.push(a);
            }
        }
        steps.push(StepSplit {
            step: r,
            beta,
            j_all,
            j_prime,
            j_dprime,
        });
    }

    let mut groups: Vec<IndexGroup> = Vec::new();
    for s in &steps {
        let key = restriction(sys, &split, s.beta);
        let group = match groups.iter_mut().find(|g| g.restriction == key) {
            Some(g) => g,
            None => {
                groups.push(IndexGroup {
                    steps: Vec::new(),
                    restriction: key,
                    z: Vec::new(),
                    v: Vec::new(),
                    dim_l: 0,
                    dim_z: 0,
                    dim_v: 0,
                });
                groups.last_mut().unwrap()
            }
        };
        group.steps.push(s.step);
        group.z.push(s.beta);
        group.z.extend(&s.j_dprime);
        group.v.extend(&s.j_prime);
    }
    for g in &mut groups {
        g.z.sort_unstable();
        g.v.sort_unstable();
        g.dim_z = sys.dim_of(&g.z);
        g.dim_v = sys.dim_of(&g.v);
        g.dim_l = g.dim_z + g.dim_v;
    }

    Ok(Decomposition {
        split,
        steps,
        groups,
    })
}

impl Decomposition {
    /// Index (into `groups`) of the group owning a cascade step, if any.
    pub fn group_of_step(&self, r: usize) -> Option<usize> {
        self.groups.iter().position(|g| g.steps.contains(&r))
    }

    pub fn to_json(&self, sys: &RootSystem) -> serde_json::Value {
        let coords = |ids: &[usize]| -> Vec<Vec<i64>> {
            ids.iter().map(|&i| sys.root(i).coords.clone()).collect()
        };
        serde_json::json!({
            "phi": self.split.phi.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "free": self.split.free.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "nil_size": self.split.nil.len(),
            "groups": self.groups.iter().map(|g| serde_json::json!({
                "I": g.steps.iter().map(|r| r + 1).collect::<Vec<_>>(),
                "restriction": g.restriction,
                "z": coords(&g.z),
                "v": coords(&g.v),
                "dims": {"l": g.dim_l, "z": g.dim_z, "v": g.dim_v},
            })).collect::<Vec<_>>(),
        })
    }
}

/// Result of one named structural check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    /// Human-readable counterexample when the check fails.
    pub witness: Option<String>,
}

/// Outcome of all structural checks for one (system, Φ) pair.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckReport>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&CheckReport> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut lemmas = serde_json::Map::new();
        for c in &self.checks {
            lemmas.insert(
                c.name.clone(),
                serde_json::Value::String(if c.passed { "pass" } else { "fail" }.into()),
            );
        }
        let witnesses: serde_json::Map<String, serde_json::Value> = self
            .checks
            .iter()
            .filter_map(|c| {
                c.witness
                    .as_ref()
                    .map(|w| (c.name.clone(), serde_json::Value::String(w.clone())))
            })
            .collect();
        serde_json::json!({"lemmas": lemmas, "witnesses": witnesses})
    }
}

fn fmt_root(sys: &RootSystem, id: usize) -> String {
    format!("{:?}", sys.root(id).coords)
}

/// Exhaustive root-sum verification of the structural relations underlying
/// the stepwise decomposition. Every check scans all relevant root pairs;
/// a failure carries a witness and indicates an implementation bug.
pub fn verify_structure(
    sys: &RootSystem,
    cascade: &Cascade,
    dec: &Decomposition,
) -> VerificationReport {
    let split = &dec.split;
    let mut checks = Vec::new();
    let mut push = |name: &str, witness: Option<String>| {
        checks.push(CheckReport {
            name: name.into(),
            passed: witness.is_none(),
            witness,
        });
    };
    let sum_id = |a: usize, b: usize| sys.sum_root(a, b);
    let is_sum_root = |a: usize, b: usize| {
        let s: Vec<i64> = sys
            .root(a)
            .coords
            .iter()
            .zip(&sys.root(b).coords)
            .map(|(x, y)| x + y)
            .collect();
        sys.is_root(&s)
    };

    // inter-center: a step whose β_r stays reductive contributes nothing to
    // the nilradical — its whole layer is reductive too.
    let mut w = None;
    for (r, &beta) in cascade.betas.iter().enumerate() {
        if split.in_nil(beta) {
            continue;
        }
        if let Some(&a) = cascade.layers[r].iter().find(|&&a| split.in_nil(a)) {
            w = Some(format!(
                "step {}: beta {} reductive but layer root {} nilpotent",
                r + 1,
                fmt_root(sys, beta),
                fmt_root(sys, a)
            ));
            break;
        }
    }
    push("inter-center", w);

    // inter-compl: J' is σ-stable; every J''-root restricts like its β_r.
    let mut w = None;
    'outer_ic: for s in &dec.steps {
        let beta_key = restriction(sys, split, s.beta);
        for &a in &s.j_prime {
            let im = sigma(sys, cascade, s.step, a).expect("layer member");
            if !s.j_all.contains(&im) {
                w = Some(format!(
                    "step {}: sigma of {} leaves J",
                    s.step + 1,
                    fmt_root(sys, a)
                ));
                break 'outer_ic;
            }
        }
        for &a in &s.j_dprime {
            let im = sigma(sys, cascade, s.step, a).expect("layer member");
            if split.in_nil(im) {
                w = Some(format!(
                    "step {}: sigma of {} is nilpotent",
                    s.step + 1,
                    fmt_root(sys, a)
                ));
                break 'outer_ic;
            }
            if restriction(sys, split, a) != beta_key {
                w = Some(format!(
                    "step {}: {} in J'' restricts unlike beta",
                    s.step + 1,
                    fmt_root(sys, a)
                ));
                break 'outer_ic;
            }
        }
    }
    push("inter-compl", w);

    // part-c: for steps r > s, nothing in l_r ∩ n_Φ adds to the central part
    // {β_s} ∪ J''_s of an earlier step to give a root.
    let mut w = None;
    'outer_pc: for (ri, rstep) in dec.steps.iter().enumerate() {
        for sstep in &dec.steps[..ri] {
            if rstep.step <= sstep.step {
                continue;
            }
            let gammas: Vec<usize> = std::iter::once(rstep.beta)
                .chain(rstep.j_all.iter().copied())
                .collect();
            let alphas: Vec<usize> = std::iter::once(sstep.beta)
                .chain(sstep.j_dprime.iter().copied())
                .collect();
            for &g in &gammas {
                for &a in &alphas {
                    if is_sum_root(g, a) {
                        w = Some(format!(
                            "steps {}>{}: {} + {} is a root",
                            rstep.step + 1,
                            sstep.step + 1,
                            fmt_root(sys, g),
                            fmt_root(sys, a)
                        ));
                        break 'outer_pc;
                    }
                }
            }
        }
    }
    push("part-c", w);

    // not-beta: for groups k > j, no sum from l_k × l_j lands on a β_i with
    // i ∈ I_j.
    let mut w = None;
    'outer_nb: for (k, gk) in dec.groups.iter().enumerate() {
        for gj in &dec.groups[..k] {
            let betas_j: BTreeSet<usize> = gj
                .steps
                .iter()
                .map(|&r| cascade.betas[r])
                .collect();
            for &g in &gk.l() {
                for &a in &gj.l() {
                    if let Some(s) = sum_id(g, a) {
                        if betas_j.contains(&s) {
                            w = Some(format!(
                                "groups {}>{}: {} + {} = central beta {}",
                                k + 1,
                                k,
                                fmt_root(sys, g),
                                fmt_root(sys, a),
                                fmt_root(sys, s)
                            ));
                            break 'outer_nb;
                        }
                    }
                }
            }
        }
    }
    push("not-beta", w);

    // central-ideal: z_j commutes with every l_k for k ≥ j (no root sums at
    // all).
    let mut w = None;
    'outer_ci: for (j, gj) in dec.groups.iter().enumerate() {
        for gk in &dec.groups[j..] {
            for &g in &gk.l() {
                for &a in &gj.z {
                    if is_sum_root(g, a) {
                        w = Some(format!(
                            "{} + {} is a root (z must be central)",
                            fmt_root(sys, g),
                            fmt_root(sys, a)
                        ));
                        break 'outer_ci;
                    }
                }
            }
        }
    }
    push("central-ideal", w);

    // gen-setup-a: within each step, v-roots pair off under σ into the
    // center: α + σ_r(α) = β_r exactly.
    let mut w = None;
    'outer_ga: for s in &dec.steps {
        for &a in &s.j_prime {
            let im = sigma(sys, cascade, s.step, a).expect("layer member");
            if !s.j_prime.contains(&im) || sum_id(a, im) != Some(s.beta) {
                w = Some(format!(
                    "step {}: {} does not pair into beta",
                    s.step + 1,
                    fmt_root(sys, a)
                ));
                break 'outer_ga;
            }
        }
    }
    push("gen-setup-a", w);

    // gen-setup-b: for k ≥ j, sums from l_k × l_j that are roots stay in l_j.
    let mut w = None;
    'outer_gb: for (j, gj) in dec.groups.iter().enumerate() {
        let lj: BTreeSet<usize> = gj.l().into_iter().collect();
        for gk in &dec.groups[j..] {
            for &g in &gk.l() {
                for &a in &lj {
                    if let Some(s) = sum_id(g, a) {
                        if !lj.contains(&s) {
                            w = Some(format!(
                                "{} + {} = {} escapes its group",
                                fmt_root(sys, g),
                                fmt_root(sys, a),
                                fmt_root(sys, s)
                            ));
                            break 'outer_gb;
                        }
                    }
                }
            }
        }
    }
    push("gen-setup-b", w);

    // gen-setup-c: for k > j, sums from l_k × l_j avoid the β_i (land in
    // v_j ∪ J''-part), and z_j is annihilated entirely.
    let mut w = None;
    'outer_gc: for (k, gk) in dec.groups.iter().enumerate() {
        for gj in &dec.groups[..k] {
            let betas_j: BTreeSet<usize> =
                gj.steps.iter().map(|&r| cascade.betas[r]).collect();
            let vj: BTreeSet<usize> = gj.v.iter().copied().collect();
            let zj_no_beta: BTreeSet<usize> = gj
                .z
                .iter()
                .copied()
                .filter(|id| !betas_j.contains(id))
                .collect();
            for &g in &gk.l() {
                for &a in &gj.l() {
                    if let Some(s) = sum_id(g, a) {
                        if !(vj.contains(&s) || zj_no_beta.contains(&s)) {
                            w = Some(format!(
                                "{} + {} = {} outside v + J''-part",
                                fmt_root(sys, g),
                                fmt_root(sys, a),
                                fmt_root(sys, s)
                            ));
                            break 'outer_gc;
                        }
                    }
                }
                for &a in &gj.z {
                    if is_sum_root(g, a) {
                        w = Some(format!(
                            "{} + {} is a root (higher group must centralize z)",
                            fmt_root(sys, g),
                            fmt_root(sys, a)
                        ));
                        break 'outer_gc;
                    }
                }
            }
        }
    }
    push("gen-setup-c", w);

    // nil-partition: the groups' z ⊔ v cover Φ^nil exactly once.
    let mut seen: Vec<usize> = Vec::new();
    for g in &dec.groups {
        seen.extend(&g.z);
        seen.extend(&g.v);
    }
    seen.sort_unstable();
    let dup = seen.windows(2).any(|w| w[0] == w[1]);
    let w = if dup {
        Some("a root appears in two groups".into())
    } else if seen != split.nil {
        Some(format!(
            "group contents cover {} roots, nilradical has {}",
            seen.len(),
            split.nil.len()
        ))
    } else {
        None
    };
    push("nil-partition", w);

    VerificationReport { checks }
}

/// Whether a grouped summand's center exhausts its whole restriction class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Invariance {
    Invariant,
    NotInvariant,
}

#[derive(Debug, Clone)]
pub struct GroupInvariance {
    pub group: usize,
    pub status: Invariance,
    /// The full class [β_{q_j}]_Φ as root ids.
    pub class: Vec<usize>,
}

/// Group j is invariant exactly when z_{Φ,j} equals the full restriction
/// class of its leading β.
pub fn invariance_classes(sys: &RootSystem, dec: &Decomposition) -> Vec<GroupInvariance> {
    dec.groups
        .iter()
        .enumerate()
        .map(|(j, g)| {
            let lead = g.z[0]; // any member works; classes agree
            let class = restriction_class(sys, &dec.split, lead);
            let status = if class == g.z {
                Invariance::Invariant
            } else {
                Invariance::NotInvariant
            };
            GroupInvariance {
                group: j,
                status,
                class,
            }
        })
        .collect()
}
