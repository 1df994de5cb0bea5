//! Per-group layer Pfaffians, the Plancherel density P = Π Pf_j, the
//! quasi-center determinant, the semi-invariance weight ledger, the constant
//! c = 2^{Σd_j}·Π d_j!, and the stabilizer dimension dim a'_Φ.

use crate::cascade::{sigma, Cascade};
use crate::chevalley::StructureTable;
use crate::parabolic::{restriction_class, Decomposition};
use crate::poly::{pfaffian, AntisymmetricPolyMatrix, PolyError, Polynomial};
use crate::roots::RootSystem;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DensityError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("group {0} has odd symplectic dimension {1}; d_j is not an integer")]
    NonIntegralDimension(usize, u64),
    #[error("structure violation: {0}")]
    StructureViolation(String),
}

/// Ordered variable space: one polynomial variable per chosen root space
/// (λ_δ dual to the root vector of δ).
#[derive(Debug, Clone)]
pub struct VarSpace {
    /// Root ids in variable order.
    pub roots: Vec<usize>,
    index: BTreeMap<usize, usize>,
}

impl VarSpace {
    pub fn new(roots: Vec<usize>) -> VarSpace {
        let index = roots.iter().enumerate().map(|(v, &r)| (r, v)).collect();
        VarSpace { roots, index }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn index_of(&self, root: usize) -> Option<usize> {
        self.index.get(&root).copied()
    }

    /// Deterministic print names l1, l2, … in variable order.
    pub fn names(&self) -> Vec<String> {
        (1..=self.len()).map(|i| format!("l{i}")).collect()
    }
}

/// Variables for the quasi-center s_Φ = ⊕_j z_{Φ,j}, grouped by j.
pub fn quasicenter_vars(dec: &Decomposition) -> VarSpace {
    let mut roots = Vec::new();
    for g in &dec.groups {
        roots.extend(g.z.iter().copied());
    }
    VarSpace::new(roots)
}

/// Ordered symplectic basis of v_{Φ,j}: σ-partners adjacent, the
/// lexicographically smaller coefficient vector first, pairs sorted by their
/// first member.
fn v_basis(sys: &RootSystem, cascade: &Cascade, dec: &Decomposition, j: usize) -> Vec<usize> {
    let g = &dec.groups[j];
    let mut pairs: Vec<(Vec<i64>, usize, usize)> = Vec::new();
    let mut placed: BTreeSet<usize> = BTreeSet::new();
    for s in &dec.steps {
        if !g.steps.contains(&s.step) {
            continue;
        }
        for &a in &s.j_prime {
            if placed.contains(&a) {
                continue;
            }
            let im = sigma(sys, cascade, s.step, a).expect("layer member");
            debug_assert_ne!(a, im, "σ-fixed roots cannot enter a split v-basis");
            placed.insert(a);
            placed.insert(im);
            let (x, y) = if sys.root(a).coords <= sys.root(im).coords {
                (a, im)
            } else {
                (im, a)
            };
            pairs.push((sys.root(x).coords.clone(), x, y));
        }
    }
    pairs.sort();
    pairs.into_iter().flat_map(|(_, x, y)| [x, y]).collect()
}

fn bilinear_matrix(
    sys: &RootSystem,
    table: &StructureTable,
    space: &VarSpace,
    basis: &[usize],
    allowed: &BTreeSet<usize>,
) -> Result<AntisymmetricPolyMatrix, DensityError> {
    let n = basis.len();
    let nv = space.len();
    let mut entries = vec![Polynomial::zero(nv); n * n];
    for r in 0..n {
        for c in 0..n {
            if r == c {
                continue;
            }
            if let Some(s) = sys.sum_root(basis[r], basis[c]) {
                if allowed.contains(&s) {
                    let nc = table.constant(basis[r], basis[c]);
                    debug_assert_ne!(nc, 0, "bracket onto a root must not vanish");
                    let var = space.index_of(s).ok_or_else(|| {
                        DensityError::StructureViolation(format!(
                            "target root {:?} missing from variable space",
                            sys.root(s).coords
                        ))
                    })?;
                    entries[r * n + c] = Polynomial::term(nv, var, nc);
                }
            }
        }
    }
    Ok(AntisymmetricPolyMatrix::new(n, nv, entries)?)
}

/// The antisymmetric matrix of b_λ(x_α, x_{α'}) = λ([x_α, x_{α'}]) on the
/// ordered basis of v_{Φ,j}, with λ supported on z_{Φ,j}.
pub fn layer_matrix(
    sys: &RootSystem,
    cascade: &Cascade,
    dec: &Decomposition,
    table: &StructureTable,
    space: &VarSpace,
    j: usize,
) -> Result<AntisymmetricPolyMatrix, DensityError> {
    let basis = v_basis(sys, cascade, dec, j);
    let allowed: BTreeSet<usize> = dec.groups[j].z.iter().copied().collect();
    bilinear_matrix(sys, table, space, &basis, &allowed)
}

/// Pf_j as a polynomial on the quasi-center variables; nonzero for every
/// well-formed group (generic nondegeneracy of b_λ on v_{Φ,j}).
pub fn layer_pfaffian(
    sys: &RootSystem,
    cascade: &Cascade,
    dec: &Decomposition,
    table: &StructureTable,
    space: &VarSpace,
    j: usize,
) -> Result<Polynomial, DensityError> {
    let m = layer_matrix(sys, cascade, dec, table, space, j)?;
    let pf = pfaffian(&m)?;
    if pf.is_zero() {
        return Err(DensityError::StructureViolation(format!(
            "layer Pfaffian of group {} vanishes identically",
            j + 1
        )));
    }
    Ok(pf)
}

/// With λ_j ranging over the full restriction class g_{[Φ,β_j]} rather than
/// just z_{Φ,j}, the Pfaffian must not involve any variable outside z_{Φ,j}.
pub fn easy_tilde_check(
    sys: &RootSystem,
    cascade: &Cascade,
    dec: &Decomposition,
    table: &StructureTable,
    j: usize,
) -> Result<bool, DensityError> {
    let g = &dec.groups[j];
    let class = restriction_class(sys, &dec.split, g.z[0]);
    let zset: BTreeSet<usize> = g.z.iter().copied().collect();
    let mut vars: Vec<usize> = g.z.clone();
    vars.extend(class.iter().copied().filter(|id| !zset.contains(id)));
    let space = VarSpace::new(vars);
    let allowed: BTreeSet<usize> = class.into_iter().collect();
    let basis = v_basis(sys, cascade, dec, j);
    let m = bilinear_matrix(sys, table, &space, &basis, &allowed)?;
    let pf = pfaffian(&m)?;
    Ok(pf.variables_used().into_iter().all(|v| v < g.z.len()))
}

/// Det_{s_Φ}(λ) = Π_t λ(e_t) over the root-vector basis of the quasi-center:
/// the product of all quasi-center variables.
pub fn det_sphi(space: &VarSpace) -> Polynomial {
    let mut p = Polynomial::one(space.len());
    for v in 0..space.len() {
        p = p
            .try_mul(&Polynomial::term(space.len(), v, 1))
            .expect("uniform arity");
    }
    p
}

/// Semi-invariance weights as rational coefficient vectors over Ψ∖Φ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightLedger {
    /// Weight of the modular function: ½ Σ_j (dim l_{Φ,j} + dim z_{Φ,j})·β_{j0}|.
    pub delta: Vec<BigRational>,
    /// Weight of P: Σ_j d_j·β_{j0}|.
    pub p: Vec<BigRational>,
    /// Weight of Det_{s_Φ}: Σ_j dim z_{Φ,j}·β_{j0}|.
    pub det: Vec<BigRational>,
    /// dim a'_Φ = |Ψ∖Φ| − rank{β_{j0}|}.
    pub aprime_dim: usize,
}

fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let mut rank = 0;
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut col = 0;
    while col < ncols && rank < rows.len() {
        if let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) {
            rows.swap(rank, pivot);
            let p = rows[rank][col].clone();
            let (head, tail) = rows.split_at_mut(rank + 1);
            let lead = &head[rank];
            for row in tail.iter_mut() {
                if !row[col].is_zero() {
                    let f = &row[col] / &p;
                    for (cell, base) in row[col..].iter_mut().zip(&lead[col..]) {
                        *cell -= base * &f;
                    }
                }
            }
            rank += 1;
        }
        col += 1;
    }
    rank
}

/// Build the weight ledger; the modular weight is cross-checked against the
/// root-by-root trace Σ_{α ∈ Φ^nil} mult(α)·α|.
pub fn weights(sys: &RootSystem, dec: &Decomposition) -> Result<WeightLedger, DensityError> {
    let m = dec.split.free.len();
    let zero = || vec![BigRational::zero(); m];
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let (mut delta, mut p, mut det) = (zero(), zero(), zero());
    for g in &dec.groups {
        for t in 0..m {
            let b = BigRational::from_integer(g.restriction[t].into());
            delta[t] += &half * BigRational::from_integer((g.dim_l + g.dim_z).into()) * &b;
            p[t] += &half * BigRational::from_integer((g.dim_l - g.dim_z).into()) * &b;
            det[t] += BigRational::from_integer(g.dim_z.into()) * &b;
        }
    }

    let mut trace = zero();
    for &id in &dec.split.nil {
        let coords = &sys.root(id).coords;
        for (t, &node) in dec.split.free.iter().enumerate() {
            trace[t] +=
                BigRational::from_integer((sys.mult_of(id) as i64 * coords[node]).into());
        }
    }
    if trace != delta {
        return Err(DensityError::StructureViolation(format!(
            "modular weight mismatch: per-group {:?} vs root-by-root {:?}",
            delta, trace
        )));
    }
    for t in 0..m {
        debug_assert_eq!(&p[t] + &det[t], delta[t]);
    }

    let rows: Vec<Vec<BigRational>> = dec
        .groups
        .iter()
        .map(|g| {
            g.restriction
                .iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    let aprime_dim = m - rational_rank(rows);

    Ok(WeightLedger {
        delta,
        p,
        det,
        aprime_dim,
    })
}

fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// c = 2^{d_1+…+d_m}·d_1!…d_m! with d_j = ½ dim v_{Φ,j}.
pub fn stepwise_constant(dec: &Decomposition) -> Result<BigInt, DensityError> {
    let mut dsum = 0u64;
    let mut c = BigInt::one();
    for (j, g) in dec.groups.iter().enumerate() {
        if g.dim_v % 2 != 0 {
            return Err(DensityError::NonIntegralDimension(j, g.dim_v));
        }
        let d = g.dim_v / 2;
        dsum += d;
        c *= factorial(d);
    }
    Ok(c * BigInt::from(2u32).pow(dsum as u32))
}

/// One grouped factor of the density.
#[derive(Debug, Clone)]
pub struct GroupDensity {
    pub pf: Polynomial,
    pub d: u64,
}

/// The full exact density package for one (system, Φ) pair.
#[derive(Debug, Clone)]
pub struct PlancherelData {
    pub space: VarSpace,
    pub per_group: Vec<GroupDensity>,
    /// P = Π_j Pf_j on the quasi-center variables.
    pub density: Polynomial,
    /// Det_{s_Φ} = product of the quasi-center variables.
    pub det: Polynomial,
    pub c: BigInt,
    pub weights: WeightLedger,
    pub dim_n: u64,
    pub dim_s: u64,
}

pub fn build_plancherel(
    sys: &RootSystem,
    cascade: &Cascade,
    dec: &Decomposition,
    table: &StructureTable,
) -> Result<PlancherelData, DensityError> {
    let space = quasicenter_vars(dec);
    let mut per_group = Vec::new();
    let mut density = Polynomial::one(space.len());
    for (j, g) in dec.groups.iter().enumerate() {
        if g.dim_v % 2 != 0 {
            return Err(DensityError::NonIntegralDimension(j, g.dim_v));
        }
        let d = g.dim_v / 2;
        let pf = layer_pfaffian(sys, cascade, dec, table, &space, j)?;
        if pf.total_degree() != Some(d as u32) {
            return Err(DensityError::StructureViolation(format!(
                "Pf_{} has degree {:?}, expected d_j = {}",
                j + 1,
                pf.total_degree(),
                d
            )));
        }
        density = density.try_mul(&pf)?;
        per_group.push(GroupDensity { pf, d });
    }
    let det = det_sphi(&space);
    let dim_n = sys.dim_of(&dec.split.nil);
    let dim_s: u64 = dec.groups.iter().map(|g| g.dim_z).sum();
    let deg_p = density.total_degree().unwrap_or(0) as u64;
    let deg_det = det.total_degree().unwrap_or(0) as u64;
    if 2 * (deg_p + deg_det) != dim_n + dim_s {
        return Err(DensityError::StructureViolation(format!(
            "degree identity fails: 2({deg_p} + {deg_det}) ≠ {dim_n} + {dim_s}"
        )));
    }
    let weights = weights(sys, dec)?;
    let c = stepwise_constant(dec)?;
    Ok(PlancherelData {
        space,
        per_group,
        density,
        det,
        c,
        weights,
        dim_n,
        dim_s,
    })
}

impl PlancherelData {
    pub fn to_json(&self, sys: &RootSystem) -> serde_json::Value {
        let names = self.space.names();
        let rat = |v: &[BigRational]| -> Vec<String> { v.iter().map(|x| x.to_string()).collect() };
        serde_json::json!({
            "vars": self.space.roots.iter()
                .map(|&r| sys.root(r).coords.clone()).collect::<Vec<_>>(),
            "groups": self.per_group.iter().map(|g| serde_json::json!({
                "pf": g.pf.to_text(&names),
                "d": g.d,
            })).collect::<Vec<_>>(),
            "P": self.density.to_text(&names),
            "Det": self.det.to_text(&names),
            "c": self.c.to_string(),
            "weights": {
                "delta": rat(&self.weights.delta),
                "p": rat(&self.weights.p),
                "det": rat(&self.weights.det),
            },
            "aprime_dim": self.weights.aprime_dim,
            "dim_n": self.dim_n,
            "dim_s": self.dim_s,
        })
    }
}
