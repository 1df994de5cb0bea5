//! Exact structure constants N_{α,β} for the nilpotent part of the split
//! forms of families A–D, extracted from integer matrix models and
//! normalized so extraspecial pairs carry positive sign.

use crate::roots::{Family, RootSystem};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChevalleyError {
    #[error("structure constants require a split (multiplicity-one) system of family A-D: {0}")]
    UnsupportedForm(String),
    #[error("bracket along a Cartan direction (α + β = 0) is outside the contract")]
    CartanDirection,
}

/// Structure constants for ordered pairs of positive roots with α+β ∈ Δ⁺.
#[derive(Debug, Clone)]
pub struct StructureTable {
    constants: BTreeMap<(usize, usize), i64>,
}

/// Dense square integer matrix, just big enough for the classical models.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Mat {
    dim: usize,
    a: Vec<i64>,
}

impl Mat {
    fn zero(dim: usize) -> Mat {
        Mat {
            dim,
            a: vec![0; dim * dim],
        }
    }
    fn set(&mut self, i: usize, j: usize, v: i64) {
        self.a[i * self.dim + j] += v;
    }
    fn commutator(&self, other: &Mat) -> Mat {
        let d = self.dim;
        let mut out = Mat::zero(d);
        for i in 0..d {
            for k in 0..d {
                let x = self.a[i * d + k];
                let y = other.a[i * d + k];
                if x != 0 {
                    for j in 0..d {
                        out.a[i * d + j] += x * other.a[k * d + j];
                    }
                }
                if y != 0 {
                    for j in 0..d {
                        out.a[i * d + j] -= y * self.a[k * d + j];
                    }
                }
            }
        }
        out
    }
    fn is_zero(&self) -> bool {
        self.a.iter().all(|&x| x == 0)
    }
    /// Exact scalar k with self == k * other, when it exists.
    fn ratio_to(&self, other: &Mat) -> Option<i64> {
        let pos = other.a.iter().position(|&x| x != 0)?;
        if self.a[pos] % other.a[pos] != 0 {
            return None;
        }
        let k = self.a[pos] / other.a[pos];
        if self
            .a
            .iter()
            .zip(&other.a)
            .all(|(&x, &y)| x == k * y)
        {
            Some(k)
        } else {
            None
        }
    }
}

/// Matrix model of the positive root vector, per family:
/// sl(n+1), so(2n+1) (folded inside so(2n+2)), sp(2n), so(2n).
fn root_matrix(family: Family, rank: usize, ambient: &[i64]) -> Mat {
    let nz: Vec<(usize, i64)> = ambient
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, x)| x != 0)
        .collect();
    match family {
        Family::A => {
            let dim = rank + 1;
            let mut m = Mat::zero(dim);
            let i = nz.iter().find(|&&(_, v)| v == 1).unwrap().0;
            let j = nz.iter().find(|&&(_, v)| v == -1).unwrap().0;
            m.set(i, j, 1);
            m
        }
        Family::C => {
            let n = rank;
            let mut m = Mat::zero(2 * n);
            match nz.as_slice() {
                [(i, 2)] => m.set(*i, n + i, 1),
                [(i, 1), (j, -1)] | [(j, -1), (i, 1)] => {
                    m.set(*i, *j, 1);
                    m.set(n + j, n + i, -1);
                }
                [(i, 1), (j, 1)] => {
                    m.set(*i, n + j, 1);
                    m.set(*j, n + i, 1);
                }
                _ => unreachable!("not a positive C-root: {ambient:?}"),
            }
            m
        }
        Family::D => {
            let n = rank;
            let mut m = Mat::zero(2 * n);
            d_type_entry(&mut m, n, &nz);
            m
        }
        Family::B => {
            // Fold so(2n+2): short e_i becomes x_{e_i - e_{n+1}} + x_{e_i + e_{n+1}}.
            let f = rank + 1;
            let mut m = Mat::zero(2 * f);
            match nz.as_slice() {
                [(i, 1)] => {
                    d_type_entry(&mut m, f, &[(*i, 1), (f - 1, -1)]);
                    d_type_entry(&mut m, f, &[(*i, 1), (f - 1, 1)]);
                }
                _ => d_type_entry(&mut m, f, &nz),
            }
            m
        }
        Family::BC => unreachable!("guarded by build_constants"),
    }
}

/// x_{e_i - e_j} = E_ij - E_{n+j,n+i};  x_{e_i + e_j} = E_{i,n+j} - E_{j,n+i}.
fn d_type_entry(m: &mut Mat, n: usize, nz: &[(usize, i64)]) {
    match nz {
        [(i, 1), (j, -1)] | [(j, -1), (i, 1)] => {
            m.set(*i, *j, 1);
            m.set(n + j, n + i, -1);
        }
        [(i, 1), (j, 1)] => {
            m.set(*i, n + j, 1);
            m.set(*j, n + i, -1);
        }
        _ => unreachable!("not a positive D-root: {nz:?}"),
    }
}

/// Largest k ≥ 0 with α − kβ a root: the downward string length.
pub fn string_down(sys: &RootSystem, alpha: usize, beta: usize) -> i64 {
    let a = &sys.root(alpha).coords;
    let b = &sys.root(beta).coords;
    let mut p = 0;
    loop {
        let k = p + 1;
        let v: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - k * y).collect();
        if sys.is_root(&v) {
            p = k;
        } else {
            return p;
        }
    }
}

pub fn build_constants(sys: &RootSystem) -> Result<StructureTable, ChevalleyError> {
    if sys.family == Family::BC {
        return Err(ChevalleyError::UnsupportedForm("family BC".into()));
    }
    if sys.mult.iter().any(|&m| m != 1) {
        return Err(ChevalleyError::UnsupportedForm(
            "nontrivial multiplicities".into(),
        ));
    }

    let mats: Vec<Mat> = sys
        .positive
        .iter()
        .map(|r| root_matrix(sys.family, sys.rank, &r.ambient))
        .collect();

    // Raw constants from the matrix model.
    let n = sys.positive_count();
    let mut raw: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let sum = sys.sum_root(a, b);
            let br = mats[a].commutator(&mats[b]);
            match sum {
                Some(c) => {
                    let k = br
                        .ratio_to(&mats[c])
                        .expect("bracket lands in the target root space");
                    debug_assert_ne!(k, 0, "bracket of adjacent root vectors nonzero");
                    raw.insert((a, b), k);
                }
                None => debug_assert!(br.is_zero(), "bracket without target must vanish"),
            }
        }
    }

    // Rescale root vectors (± signs) so that every extraspecial pair --
    // the pair (α, γ−α) with α minimal for the given sum γ -- is positive.
    // Root ids are (height, lex)-sorted, which refines height order.
    let mut eps = vec![1i64; n];
    for gamma in 0..n {
        if sys.root(gamma).height() == 1 {
            continue;
        }
        let (a, b) = extraspecial_pair(sys, gamma).expect("non-simple roots decompose");
        let r = raw[&(a, b)];
        eps[gamma] = eps[a] * eps[b] * r.signum();
    }
    let constants = raw
        .into_iter()
        .map(|((a, b), v)| {
            let c = sys.sum_root(a, b).unwrap();
            ((a, b), eps[a] * eps[b] * eps[c] * v)
        })
        .collect();
    Ok(StructureTable { constants })
}

/// The extraspecial pair of a non-simple positive root γ: the decomposition
/// γ = α + β with α of minimal id.
pub fn extraspecial_pair(sys: &RootSystem, gamma: usize) -> Option<(usize, usize)> {
    for a in 0..sys.positive_count() {
        let diff: Vec<i64> = sys
            .root(gamma)
            .coords
            .iter()
            .zip(&sys.root(a).coords)
            .map(|(x, y)| x - y)
            .collect();
        if let Some(b) = sys.root_id(&diff) {
            return Some((a, b));
        }
    }
    None
}

impl StructureTable {
    /// N_{α,β} for positive roots; zero when α+β is not a root.
    pub fn constant(&self, a: usize, b: usize) -> i64 {
        self.constants.get(&(a, b)).copied().unwrap_or(0)
    }

    /// Formal bracket of c_a·x_{sa·α} and c_b·x_{sb·β} for signed roots
    /// (ids of positive roots with signs). Supported inside the nilpotent
    /// cones: both signs positive or both negative.
    pub fn bracket(
        &self,
        sys: &RootSystem,
        (a, sa): (usize, i64),
        (b, sb): (usize, i64),
        ca: i64,
        cb: i64,
    ) -> Result<Option<(usize, i64, i64)>, ChevalleyError> {
        assert!(sa.abs() == 1 && sb.abs() == 1);
        if a == b && sa != sb {
            return Err(ChevalleyError::CartanDirection);
        }
        if sa != sb {
            return Err(ChevalleyError::UnsupportedForm(
                "mixed-sign brackets are outside the nilpotent cone".into(),
            ));
        }
        Ok(sys.sum_root(a, b).map(|c| {
            let n = self.constant(a, b);
            // N_{-α,-β} = -N_{α,β}
            (c, sa, sa * n * ca * cb)
        }))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&(usize, usize), &i64)> {
        self.constants.iter()
    }
}
