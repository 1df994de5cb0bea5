//! Diagram propagation along a classical family, admissibility of Φ-families
//! for the four direct-limit subgroups, nesting of cascade/group structure,
//! and the renormalization ratios of the limit Plancherel formula.

use crate::cascade::{build_cascade, Cascade};
use crate::chevalley::{build_constants, ChevalleyError};
use crate::density::{build_plancherel, stepwise_constant, DensityError};
use crate::parabolic::{decompose, Decomposition, ParabolicError};
use crate::poly::PolyError;
use crate::roots::{build_system, Family, MultPreset, RootError, RootSystem};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LimitError {
    #[error("cannot propagate: {0}")]
    IncompatibleFamily(String),
    #[error("invalid chain: {0}")]
    BadChain(String),
    #[error("{level} inclusion fails between ranks {from} and {to}: {witness}")]
    FamilyViolation {
        level: String,
        from: usize,
        to: usize,
        witness: String,
    },
    #[error("density vanishes at the supplied parameter at rank {0}")]
    SingularParameter(usize),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Parabolic(#[from] ParabolicError),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Chevalley(#[from] ChevalleyError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Injection of a lower-rank system into a higher-rank one of the same
/// family: node-identity for B/C/D (new nodes appended at the left end of
/// the diagram), center-preserving shift for A (new nodes spread outward
/// from the diagram center, which forces equal rank parity).
#[derive(Debug, Clone)]
pub struct RootInjection {
    pub from_rank: usize,
    pub to_rank: usize,
    /// psi_map[i] = image simple-node index (0-based).
    pub psi_map: Vec<usize>,
    /// root_map[id] = image positive-root id.
    pub root_map: Vec<usize>,
}

pub fn propagate(small: &RootSystem, big: &RootSystem) -> Result<RootInjection, LimitError> {
    if small.family != big.family {
        return Err(LimitError::IncompatibleFamily(format!(
            "family mismatch: {} vs {}",
            small.family, big.family
        )));
    }
    if small.rank > big.rank {
        return Err(LimitError::IncompatibleFamily(format!(
            "rank must not decrease: {} > {}",
            small.rank, big.rank
        )));
    }
    let shift = match small.family {
        Family::A => {
            if !(big.rank - small.rank).is_multiple_of(2) {
                return Err(LimitError::IncompatibleFamily(format!(
                    "A{} cannot propagate to A{}: centered labels require equal rank parity",
                    small.rank, big.rank
                )));
            }
            (big.rank - small.rank) / 2
        }
        Family::B | Family::C | Family::D => 0,
        Family::BC => {
            return Err(LimitError::IncompatibleFamily(
                "BC systems arise at fixed restricted rank and are not propagated".into(),
            ))
        }
    };
    let psi_map: Vec<usize> = (0..small.rank).map(|i| i + shift).collect();
    let mut root_map = Vec::with_capacity(small.positive_count());
    for id in 0..small.positive_count() {
        let mut coords = vec![0i64; big.rank];
        for (i, &c) in small.root(id).coords.iter().enumerate() {
            coords[psi_map[i]] = c;
        }
        let img = big
            .root_id(&coords)
            .expect("propagated coefficient vectors are roots of the larger system");
        root_map.push(img);
    }
    for a in 0..small.positive_count() {
        for b in 0..small.positive_count() {
            assert_eq!(
                small.pairing(a, b),
                big.pairing(root_map[a], root_map[b]),
                "propagation must preserve Cartan pairings"
            );
        }
    }
    Ok(RootInjection {
        from_rank: small.rank,
        to_rank: big.rank,
        psi_map,
        root_map,
    })
}

/// Parsed chain description: a family, strictly increasing ranks, and an
/// optional Φ per rank (0-based node indices; absent ranks mean Φ = ∅).
#[derive(Debug, Clone)]
pub struct ChainSpec {
    pub family: Family,
    pub ranks: Vec<usize>,
    pub phis: BTreeMap<usize, BTreeSet<usize>>,
}

impl ChainSpec {
    /// Parse the JSON chain file `{family, ranks:[...], phi:{"rank":[1-based
    /// node indices]}}`.
    pub fn from_json(text: &str) -> Result<ChainSpec, LimitError> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| LimitError::BadChain(e.to_string()))?;
        let name = v["family"]
            .as_str()
            .ok_or_else(|| LimitError::BadChain("missing family".into()))?;
        let family = Family::parse(name)
            .ok_or_else(|| LimitError::BadChain(format!("unknown family {name:?}")))?;
        let ranks: Vec<usize> = v["ranks"]
            .as_array()
            .ok_or_else(|| LimitError::BadChain("missing ranks".into()))?
            .iter()
            .map(|x| {
                x.as_u64()
                    .map(|u| u as usize)
                    .ok_or_else(|| LimitError::BadChain("ranks must be integers".into()))
            })
            .collect::<Result<_, _>>()?;
        let mut phis = BTreeMap::new();
        if let Some(obj) = v.get("phi").and_then(|p| p.as_object()) {
            for (k, arr) in obj {
                let rank: usize = k
                    .parse()
                    .map_err(|_| LimitError::BadChain(format!("bad phi key {k:?}")))?;
                let nodes = arr
                    .as_array()
                    .ok_or_else(|| LimitError::BadChain("phi entries must be arrays".into()))?
                    .iter()
                    .map(|x| match x.as_u64() {
                        Some(u) if u >= 1 => Ok(u as usize - 1),
                        _ => Err(LimitError::BadChain(
                            "phi indices are 1-based positive integers".into(),
                        )),
                    })
                    .collect::<Result<BTreeSet<_>, _>>()?;
                phis.insert(rank, nodes);
            }
        }
        Ok(ChainSpec {
            family,
            ranks,
            phis,
        })
    }
}

/// One rank of a built chain.  `betas_limit` lists the cascade roots in
/// limit order — the reverse of construction order — which is the order in
/// which the cascade keeps constant prefixes along a well-nested chain; the
/// finite-rank construction order remains available as `cascade.betas`.
pub struct ChainLevel {
    pub rank: usize,
    pub sys: RootSystem,
    pub cascade: Cascade,
    pub betas_limit: Vec<usize>,
    pub phi: BTreeSet<usize>,
    pub dec: Decomposition,
}

pub struct PropagationChain {
    pub family: Family,
    pub levels: Vec<ChainLevel>,
    /// Injections between consecutive levels.
    pub injections: Vec<RootInjection>,
}

pub fn build_chain(spec: &ChainSpec) -> Result<PropagationChain, LimitError> {
    if spec.ranks.is_empty() {
        return Err(LimitError::BadChain("chain needs at least one rank".into()));
    }
    if spec.ranks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(LimitError::BadChain(
            "ranks must be strictly increasing".into(),
        ));
    }
    let mut levels = Vec::new();
    for &rank in &spec.ranks {
        let sys = build_system(spec.family, rank, MultPreset::SplitOnes)?;
        let cascade = build_cascade(&sys);
        let phi = spec.phis.get(&rank).cloned().unwrap_or_default();
        let dec = decompose(&sys, &cascade, &phi)?;
        let betas_limit: Vec<usize> = cascade.betas.iter().rev().copied().collect();
        levels.push(ChainLevel {
            rank,
            sys,
            cascade,
            betas_limit,
            phi,
            dec,
        });
    }
    let mut injections = Vec::new();
    for w in levels.windows(2) {
        injections.push(propagate(&w[0].sys, &w[1].sys)?);
    }
    Ok(PropagationChain {
        family: spec.family,
        levels,
        injections,
    })
}

#[derive(Debug, Clone)]
pub struct FamilyViolationRecord {
    /// Which inclusion failed: "N", "U", "cascade", "groups" or "classes".
    pub level: String,
    pub from_rank: usize,
    pub to_rank: usize,
    pub witness: String,
}

#[derive(Debug, Clone)]
pub struct LevelSummary {
    pub rank: usize,
    /// 0-based Φ nodes.
    pub phi: Vec<usize>,
    pub cascade_len: usize,
    pub groups: usize,
    pub dim_n: u64,
    pub dim_s: u64,
}

#[derive(Debug, Clone)]
pub struct FamilyReport {
    /// lim A_{Φ,n}: implicit in propagation, always admissible.
    pub a_admissible: bool,
    /// lim N_{Φ,n}: needs (Ψ_n∖Φ_n) ⊆ (Ψ_ℓ∖Φ_ℓ).
    pub n_admissible: bool,
    /// lim U_{Φ,n}: needs Φ_n ⊆ Φ_ℓ.
    pub u_admissible: bool,
    /// lim U_{Φ,n}N_{Φ,n}: needs both.
    pub e_admissible: bool,
    /// Cascades, index groups and restriction classes all nest under the
    /// injections; required on top of N-admissibility before level densities
    /// can be compared.
    pub stepwise_stable: bool,
    pub violations: Vec<FamilyViolationRecord>,
    pub levels: Vec<LevelSummary>,
    /// Per consecutive pair: group k at the lower rank ↦ group index at the
    /// higher rank (None when the group scatters or dies).
    pub group_maps: Vec<Vec<Option<usize>>>,
}

pub fn check_family(chain: &PropagationChain) -> FamilyReport {
    let mut violations: Vec<FamilyViolationRecord> = Vec::new();
    let mut group_maps = Vec::new();
    for (pair, inj) in chain.injections.iter().enumerate() {
        let lo = &chain.levels[pair];
        let hi = &chain.levels[pair + 1];
        let (from, to) = (lo.rank, hi.rank);

        // N-level: image of the free nodes stays free.
        let free_hi: BTreeSet<usize> = hi.dec.split.free.iter().copied().collect();
        let mut n_ok = true;
        for &f in &lo.dec.split.free {
            if !free_hi.contains(&inj.psi_map[f]) {
                n_ok = false;
                violations.push(violation(
                    "N",
                    from,
                    to,
                    format!("free node {} maps into Φ_{}", f + 1, to),
                ));
            }
        }
        // U-level: image of Φ stays in Φ.
        for &p in &lo.phi {
            if !hi.phi.contains(&inj.psi_map[p]) {
                violations.push(violation(
                    "U",
                    from,
                    to,
                    format!("Φ node {} maps out of Φ_{}", p + 1, to),
                ));
            }
        }
        // Cascade nesting as root sets.
        let betas_hi: BTreeSet<usize> = hi.cascade.betas.iter().copied().collect();
        for &b in &lo.cascade.betas {
            if !betas_hi.contains(&inj.root_map[b]) {
                violations.push(violation(
                    "cascade",
                    from,
                    to,
                    format!(
                        "cascade root {:?} maps to a non-cascade root",
                        lo.sys.root(b).coords
                    ),
                ));
            }
        }

        // Index groups: every group of the lower rank must land inside a
        // single group upstairs, with its quasi-center nested.  Meaningful
        // only once the free nodes nest.
        let mut map_k: Vec<Option<usize>> = vec![None; lo.dec.groups.len()];
        if n_ok {
            let group_of = |root: usize| -> Option<usize> {
                hi.dec.groups.iter().position(|g| g.z.contains(&root))
            };
            for (k, g) in lo.dec.groups.iter().enumerate() {
                let targets: BTreeSet<Option<usize>> =
                    g.z.iter().map(|&r| group_of(inj.root_map[r])).collect();
                if targets.len() == 1 && !targets.contains(&None) {
                    map_k[k] = targets.into_iter().next().unwrap();
                } else {
                    violations.push(violation(
                        "groups",
                        from,
                        to,
                        format!(
                            "group {} (restriction {:?}) scatters across higher-rank groups",
                            k + 1,
                            g.restriction
                        ),
                    ));
                }
            }
            // Restriction classes nest: equal restrictions stay equal.
            let mut seen: BTreeMap<Vec<i64>, Vec<i64>> = BTreeMap::new();
            for &id in &lo.dec.split.nil {
                let r_lo: Vec<i64> = lo
                    .dec
                    .split
                    .free
                    .iter()
                    .map(|&n| lo.sys.root(id).coords[n])
                    .collect();
                let r_hi: Vec<i64> = hi
                    .dec
                    .split
                    .free
                    .iter()
                    .map(|&n| hi.sys.root(inj.root_map[id]).coords[n])
                    .collect();
                if let Some(prev) = seen.get(&r_lo) {
                    if *prev != r_hi {
                        violations.push(violation(
                            "classes",
                            from,
                            to,
                            format!(
                                "restriction class {:?} splits into {:?} and {:?}",
                                r_lo, prev, r_hi
                            ),
                        ));
                    }
                } else {
                    seen.insert(r_lo, r_hi);
                }
            }
        }
        group_maps.push(map_k);
    }

    let levels = chain
        .levels
        .iter()
        .map(|l| LevelSummary {
            rank: l.rank,
            phi: l.phi.iter().copied().collect(),
            cascade_len: l.cascade.len(),
            groups: l.dec.groups.len(),
            dim_n: l.sys.dim_of(&l.dec.split.nil),
            dim_s: l.dec.groups.iter().map(|g| g.dim_z).sum(),
        })
        .collect();

    let none_at = |lv: &str| violations.iter().all(|v| v.level != lv);
    let n_admissible = none_at("N");
    let u_admissible = none_at("U");
    FamilyReport {
        a_admissible: true,
        n_admissible,
        u_admissible,
        e_admissible: n_admissible && u_admissible,
        stepwise_stable: n_admissible
            && none_at("cascade")
            && none_at("groups")
            && none_at("classes"),
        violations,
        levels,
        group_maps,
    }
}

fn violation(level: &str, from: usize, to: usize, witness: String) -> FamilyViolationRecord {
    FamilyViolationRecord {
        level: level.into(),
        from_rank: from,
        to_rank: to,
        witness,
    }
}

impl FamilyReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "admissible": {
                "N": self.n_admissible,
                "A": self.a_admissible,
                "U": self.u_admissible,
                "E": self.e_admissible,
            },
            "stepwise_stable": self.stepwise_stable,
            "levels": self.levels.iter().map(|l| serde_json::json!({
                "rank": l.rank,
                "phi": l.phi.iter().map(|&i| i + 1).collect::<Vec<_>>(),
                "cascade_len": l.cascade_len,
                "groups": l.groups,
                "dim_n": l.dim_n,
                "dim_s": l.dim_s,
            })).collect::<Vec<_>>(),
            "violations": self.violations.iter().map(|v| serde_json::json!({
                "level": v.level,
                "from": v.from_rank,
                "to": v.to_rank,
                "witness": v.witness,
            })).collect::<Vec<_>>(),
            "group_maps": self.group_maps.iter().map(|m| {
                m.iter().map(|t| match t {
                    Some(k) => serde_json::json!(k + 1),
                    None => serde_json::Value::Null,
                }).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        })
    }
}

fn level_index(chain: &PropagationChain, rank: usize) -> Result<usize, LimitError> {
    chain
        .levels
        .iter()
        .position(|l| l.rank == rank)
        .ok_or_else(|| LimitError::BadChain(format!("rank {rank} is not a chain level")))
}

fn require_stable(chain: &PropagationChain) -> Result<(), LimitError> {
    let report = check_family(chain);
    if !(report.n_admissible && report.stepwise_stable) {
        let v = report
            .violations
            .first()
            .cloned()
            .unwrap_or_else(|| violation("N", 0, 0, "unstable chain".into()));
        return Err(LimitError::FamilyViolation {
            level: v.level,
            from: v.from_rank,
            to: v.to_rank,
            witness: v.witness,
        });
    }
    Ok(())
}

/// Pull a level-ℓ quasi-center parameter (values in the canonical variable
/// order at rank ℓ) back to a lower level: each lower z-root reads the value
/// of its image.
pub fn restrict_gamma(
    chain: &PropagationChain,
    from_rank: usize,
    to_rank: usize,
    gamma: &[BigRational],
) -> Result<Vec<BigRational>, LimitError> {
    let i = level_index(chain, from_rank)?;
    let j = level_index(chain, to_rank)?;
    if i > j {
        return Err(LimitError::BadChain(
            "gamma restricts from a higher rank to a lower one".into(),
        ));
    }
    let lo = &chain.levels[i];
    let hi = &chain.levels[j];
    let inj = propagate(&lo.sys, &hi.sys)?;
    let space_lo = crate::density::quasicenter_vars(&lo.dec);
    let space_hi = crate::density::quasicenter_vars(&hi.dec);
    if gamma.len() != space_hi.len() {
        return Err(LimitError::BadChain(format!(
            "gamma has {} values but rank {} has {} quasi-center variables",
            gamma.len(),
            to_rank,
            space_hi.len()
        )));
    }
    space_lo
        .roots
        .iter()
        .map(|&r| {
            let img = inj.root_map[r];
            match space_hi.index_of(img) {
                Some(v) => Ok(gamma[v].clone()),
                None => Err(LimitError::FamilyViolation {
                    level: "groups".into(),
                    from: from_rank,
                    to: to_rank,
                    witness: format!(
                        "quasi-center root {:?} maps outside the higher quasi-center",
                        lo.sys.root(r).coords
                    ),
                }),
            }
        })
        .collect()
}

/// |P_n(γ_n)| / |P_ℓ(γ_ℓ)| with γ_n the pullback of γ_ℓ; exact rational
/// arithmetic throughout.
pub fn renormalization_ratio(
    chain: &PropagationChain,
    n_rank: usize,
    l_rank: usize,
    gamma_l: &[BigRational],
) -> Result<BigRational, LimitError> {
    require_stable(chain)?;
    let i = level_index(chain, n_rank)?;
    let j = level_index(chain, l_rank)?;
    if i > j {
        return Err(LimitError::BadChain(
            "renormalization runs from a lower rank to a higher one".into(),
        ));
    }
    let lo = &chain.levels[i];
    let hi = &chain.levels[j];
    let table_lo = build_constants(&lo.sys)?;
    let table_hi = build_constants(&hi.sys)?;
    let data_lo = build_plancherel(&lo.sys, &lo.cascade, &lo.dec, &table_lo)?;
    let data_hi = build_plancherel(&hi.sys, &hi.cascade, &hi.dec, &table_hi)?;
    let gamma_n = restrict_gamma(chain, n_rank, l_rank, gamma_l)?;
    let p_hi = data_hi.density.evaluate(gamma_l)?;
    if p_hi.is_zero() {
        return Err(LimitError::SingularParameter(l_rank));
    }
    let p_lo = data_lo.density.evaluate(&gamma_n)?;
    Ok(p_lo.abs() / p_hi.abs())
}

/// c_n = 2^{d_1+…+d_m}·d_1!…d_m! from the level-n decomposition: the limit
/// Fourier inversion at level n renormalizes by exactly the finite-rank
/// stepwise constant.
pub fn inversion_constant(chain: &PropagationChain, rank: usize) -> Result<BigInt, LimitError> {
    let i = level_index(chain, rank)?;
    Ok(stepwise_constant(&chain.levels[i].dec)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn spec(family: Family, ranks: &[usize], phis: &[(usize, &[usize])]) -> ChainSpec {
        ChainSpec {
            family,
            ranks: ranks.to_vec(),
            phis: phis
                .iter()
                .map(|(r, nodes)| (*r, nodes.iter().map(|&i| i - 1).collect()))
                .collect(),
        }
    }

    fn rat(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    #[test]
    fn c3_into_c4_is_node_identity() {
        let s3 = build_system(Family::C, 3, MultPreset::SplitOnes).unwrap();
        let s4 = build_system(Family::C, 4, MultPreset::SplitOnes).unwrap();
        let inj = propagate(&s3, &s4).unwrap();
        assert_eq!(inj.psi_map, vec![0, 1, 2]);
        // 2e_1 at rank 3 becomes 2e_2 at rank 4 (ambient shifts by one slot).
        let top3 = s3.root_id(&[1, 2, 2]).unwrap();
        let img = inj.root_map[top3];
        assert_eq!(s4.root(img).ambient, vec![0, 2, 0, 0]);
        // Injectivity.
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        for &m in &inj.root_map {
            assert!(seen.insert(m));
        }
    }

    #[test]
    fn a3_into_a5_shifts_by_one() {
        let s3 = build_system(Family::A, 3, MultPreset::SplitOnes).unwrap();
        let s5 = build_system(Family::A, 5, MultPreset::SplitOnes).unwrap();
        let inj = propagate(&s3, &s5).unwrap();
        assert_eq!(inj.psi_map, vec![1, 2, 3]);
        let top3 = s3.root_id(&[1, 1, 1]).unwrap();
        assert_eq!(s5.root(inj.root_map[top3]).coords, vec![0, 1, 1, 1, 0]);
    }

    #[test]
    fn identity_propagation() {
        let s = build_system(Family::D, 4, MultPreset::SplitOnes).unwrap();
        let inj = propagate(&s, &s).unwrap();
        assert_eq!(inj.psi_map, vec![0, 1, 2, 3]);
        for (i, &m) in inj.root_map.iter().enumerate() {
            assert_eq!(i, m);
        }
    }

    #[test]
    fn incompatible_propagations_are_rejected() {
        let a2 = build_system(Family::A, 2, MultPreset::SplitOnes).unwrap();
        let a3 = build_system(Family::A, 3, MultPreset::SplitOnes).unwrap();
        assert!(matches!(
            propagate(&a2, &a3),
            Err(LimitError::IncompatibleFamily(_))
        ));
        let b3 = build_system(Family::B, 3, MultPreset::SplitOnes).unwrap();
        let c4 = build_system(Family::C, 4, MultPreset::SplitOnes).unwrap();
        assert!(matches!(
            propagate(&b3, &c4),
            Err(LimitError::IncompatibleFamily(_))
        ));
        let bc2 = build_system(Family::BC, 2, MultPreset::SplitOnes).unwrap();
        let bc3 = build_system(Family::BC, 3, MultPreset::SplitOnes).unwrap();
        assert!(matches!(
            propagate(&bc2, &bc3),
            Err(LimitError::IncompatibleFamily(_))
        ));
    }

    #[test]
    fn cascade_prefixes_nest_in_limit_order_for_a_and_c() {
        for (f, ranks) in [
            (Family::A, vec![1usize, 3, 5, 7]),
            (Family::A, vec![2, 4, 6]),
            (Family::C, vec![3, 4, 5, 6]),
        ] {
            let chain = build_chain(&spec(f, &ranks, &[])).unwrap();
            for (pair, inj) in chain.injections.iter().enumerate() {
                let lo = &chain.levels[pair];
                let hi = &chain.levels[pair + 1];
                for (k, &b) in lo.betas_limit.iter().enumerate() {
                    assert_eq!(
                        inj.root_map[b], hi.betas_limit[k],
                        "{f} {} -> {}: limit-order prefix broken at {k}",
                        lo.rank, hi.rank
                    );
                }
            }
        }
    }

    #[test]
    fn fixed_phi_a_chain_is_fully_admissible() {
        // Constant Φ = {ψ_1} in centered labels: internal node (rank+3)/2.
        let chain = build_chain(&spec(
            Family::A,
            &[3, 5, 7],
            &[(3, &[3]), (5, &[4]), (7, &[5])],
        ))
        .unwrap();
        let rep = check_family(&chain);
        assert!(rep.n_admissible && rep.u_admissible && rep.e_admissible);
        assert!(rep.stepwise_stable);
        assert!(rep.violations.is_empty());
        // Groups align one-to-one at each step.
        for m in &rep.group_maps {
            for t in m {
                assert!(t.is_some());
            }
        }
    }

    #[test]
    fn full_phi_kills_n_but_keeps_u() {
        let chain = build_chain(&spec(
            Family::A,
            &[2, 4],
            &[(2, &[1, 2]), (4, &[1, 2, 3, 4])],
        ))
        .unwrap();
        let rep = check_family(&chain);
        assert!(rep.n_admissible && rep.u_admissible && rep.e_admissible);
        assert_eq!(rep.levels[0].dim_n, 0);
        assert_eq!(rep.levels[1].dim_n, 0);
        assert_eq!(rep.levels[0].groups, 0);
    }

    #[test]
    fn shrinking_phi_violates_u_level() {
        let chain = build_chain(&spec(Family::A, &[2, 4], &[(2, &[1])])).unwrap();
        let rep = check_family(&chain);
        assert!(!rep.u_admissible);
        assert!(rep.n_admissible);
        assert!(!rep.e_admissible);
        assert!(rep
            .violations
            .iter()
            .any(|v| v.level == "U" && v.from_rank == 2 && v.to_rank == 4));
    }

    #[test]
    fn b_chain_cascade_nesting_depends_on_parity_of_increment() {
        let odd = build_chain(&spec(Family::B, &[3, 4], &[])).unwrap();
        let rep = check_family(&odd);
        assert!(
            rep.violations.iter().any(|v| v.level == "cascade"),
            "B3 -> B4 pairs the orthogonal ±-partners differently"
        );
        assert!(!rep.stepwise_stable);

        let even = build_chain(&spec(Family::B, &[3, 5], &[])).unwrap();
        let rep = check_family(&even);
        assert!(rep.violations.iter().all(|v| v.level != "cascade"));
        assert!(rep.stepwise_stable);
    }

    #[test]
    fn n_admissible_chain_can_still_scatter_classes() {
        // Free nodes nest ({2,3} -> {3,4} ⊆ {2,3,4}) but the image of the
        // Φ-node ψ1 turns free upstairs, splitting a restriction class.
        let chain = build_chain(&spec(
            Family::A,
            &[5, 7],
            &[(5, &[1, 4, 5]), (7, &[1, 5, 6, 7])],
        ))
        .unwrap();
        let rep = check_family(&chain);
        assert!(rep.n_admissible);
        assert!(!rep.u_admissible);
        assert!(rep.violations.iter().any(|v| v.level == "groups"));
        assert!(rep.violations.iter().any(|v| v.level == "classes"));
        assert!(!rep.stepwise_stable);
        let gamma: Vec<BigRational> = (0..9).map(|_| BigRational::one()).collect();
        assert!(matches!(
            renormalization_ratio(&chain, 5, 7, &gamma),
            Err(LimitError::FamilyViolation { .. })
        ));
    }

    #[test]
    fn c_chain_renormalization_ratio_and_cocycle() {
        let chain = build_chain(&spec(Family::C, &[3, 4, 5], &[])).unwrap();
        let rep = check_family(&chain);
        assert!(rep.stepwise_stable);

        // All-ones parameter: |P_3| = 8, |P_4| = 64 from the symplectic
        // bracket [x_{e_i−e_j}, x_{e_i+e_j}] = ±2 x_{2e_i}.
        let ones4: Vec<BigRational> = (0..4).map(|_| BigRational::one()).collect();
        let chain34 = build_chain(&spec(Family::C, &[3, 4], &[])).unwrap();
        let r = renormalization_ratio(&chain34, 3, 4, &ones4).unwrap();
        assert_eq!(r, BigRational::new(BigInt::one(), 8.into()));

        // Cocycle over three levels at a non-trivial rational point.
        let gamma5: Vec<BigRational> = vec![rat(2), rat(-3), rat(1) / rat(2), rat(5), rat(-1)];
        let gamma4 = restrict_gamma(&chain, 4, 5, &gamma5).unwrap();
        let r35 = renormalization_ratio(&chain, 3, 5, &gamma5).unwrap();
        let r45 = renormalization_ratio(&chain, 4, 5, &gamma5).unwrap();
        let r34 = renormalization_ratio(&chain, 3, 4, &gamma4).unwrap();
        assert_eq!(r35, r34 * r45);

        // n = ℓ is the trivial ratio.
        let r55 = renormalization_ratio(&chain, 5, 5, &gamma5).unwrap();
        assert_eq!(r55, BigRational::one());
    }

    #[test]
    fn singular_parameter_is_reported() {
        let chain = build_chain(&spec(Family::C, &[3, 4], &[])).unwrap();
        let gamma: Vec<BigRational> = vec![rat(0), rat(1), rat(1), rat(1)];
        assert!(matches!(
            renormalization_ratio(&chain, 3, 4, &gamma),
            Err(LimitError::SingularParameter(4))
        ));
    }

    #[test]
    fn inversion_constant_matches_stepwise_constant() {
        let chain = build_chain(&spec(Family::A, &[3, 5], &[])).unwrap();
        for level in &chain.levels {
            let c = inversion_constant(&chain, level.rank).unwrap();
            assert_eq!(c, stepwise_constant(&level.dec).unwrap());
        }
        assert_eq!(inversion_constant(&chain, 3).unwrap(), BigInt::from(8));
    }

    #[test]
    fn chain_spec_round_trips_from_json() {
        let text = r#"{"family":"A","ranks":[3,5],"phi":{"3":[3],"5":[4]}}"#;
        let spec = ChainSpec::from_json(text).unwrap();
        assert_eq!(spec.family, Family::A);
        assert_eq!(spec.ranks, vec![3, 5]);
        assert_eq!(spec.phis[&3], [2usize].into_iter().collect());
        assert_eq!(spec.phis[&5], [3usize].into_iter().collect());
        assert!(ChainSpec::from_json(r#"{"ranks":[2]}"#).is_err());
        assert!(ChainSpec::from_json(r#"{"family":"A","ranks":[3,3]}"#).is_ok());
        assert!(matches!(
            build_chain(&ChainSpec::from_json(r#"{"family":"A","ranks":[3,3]}"#).unwrap()),
            Err(LimitError::BadChain(_))
        ));
    }
}
