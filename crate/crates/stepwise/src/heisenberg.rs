//! Desk-scale numerical verification on the smallest stepwise nilradicals:
//! the square-integrability norm identity for matrix coefficients of the
//! Schrödinger representation of the 3-dimensional Heisenberg group, and the
//! Plancherel inversion formula on the 3-dimensional and 6-dimensional
//! nilradicals (rank 2 and 3 of family A).
//!
//! Conventions, fixed once and validated by the identity-point inversion
//! test: Fourier kernel e^{−2πi⟨ξ,x⟩}, Lebesgue measure in the Chevalley
//! coordinates on both the algebra and its dual, and the Schrödinger model
//! (π_λ(x,y,z)φ)(t) = e^{2πiλ(z+yt+xy/2)}φ(t+x) on L²(ℝ).  With these
//! choices both identities hold without stray constants.

use crate::cascade::build_cascade;
use crate::chevalley::{build_constants, ChevalleyError, StructureTable};
use crate::density::{build_plancherel, stepwise_constant, DensityError, PlancherelData};
use crate::parabolic::{decompose, ParabolicError};
use crate::roots::{build_system, Family, MultPreset, RootError};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use std::collections::BTreeSet;
use std::f64::consts::{PI, SQRT_2};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericError {
    #[error("quadrature failed to converge at {stage}: refinement moved the result by {disagreement:.3e} (tol {tol:.3e})")]
    QuadratureFailure {
        stage: String,
        disagreement: f64,
        tol: f64,
    },
    #[error("invalid numeric model: {0}")]
    BadModel(String),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Parabolic(#[from] ParabolicError),
    #[error(transparent)]
    Chevalley(#[from] ChevalleyError),
    #[error(transparent)]
    Density(#[from] DensityError),
}

/// Schrödinger model of the 3-dimensional Heisenberg group at central
/// parameter λ ≠ 0, with u, v given by finite real coefficient vectors over
/// the orthonormal Hermite basis of L²(ℝ); the norms ‖u‖², ‖v‖² are the
/// exact coefficient sums of squares.
#[derive(Debug, Clone)]
pub struct SchroedingerModel {
    pub lambda: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl SchroedingerModel {
    pub fn new(lambda: f64, u: Vec<f64>, v: Vec<f64>) -> Result<Self, NumericError> {
        if !lambda.is_finite() || lambda == 0.0 {
            return Err(NumericError::BadModel(
                "central parameter λ must be finite and nonzero".into(),
            ));
        }
        for (name, c) in [("u", &u), ("v", &v)] {
            if c.is_empty() || c.iter().any(|x| !x.is_finite()) {
                return Err(NumericError::BadModel(format!(
                    "{name} needs a nonempty finite coefficient vector"
                )));
            }
            if c.iter().all(|&x| x == 0.0) {
                return Err(NumericError::BadModel(format!("{name} must be nonzero")));
            }
        }
        Ok(SchroedingerModel { lambda, u, v })
    }

    pub fn norm_u_sq(&self) -> f64 {
        self.u.iter().map(|c| c * c).sum()
    }

    pub fn norm_v_sq(&self) -> f64 {
        self.v.iter().map(|c| c * c).sum()
    }
}

/// Tensor-product trapezoid/midpoint quadrature profile.  `grid` is the base
/// point count per axis (refinement doubles it); `sigma_cover` is the number
/// of standard deviations of every Gaussian factor the truncated extents
/// must cover — at least 8.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    pub grid: usize,
    pub tol: f64,
    pub sigma_cover: f64,
}

impl QuadratureConfig {
    pub fn new(grid: usize, tol: f64) -> Result<Self, NumericError> {
        if grid < 9 {
            return Err(NumericError::BadModel(
                "quadrature needs at least 9 points per axis".into(),
            ));
        }
        if !(tol.is_finite() && tol > 0.0) {
            return Err(NumericError::BadModel("tolerance must be positive".into()));
        }
        Ok(QuadratureConfig {
            grid,
            tol,
            sigma_cover: 10.0,
        })
    }

    pub fn with_cover(mut self, sigma_cover: f64) -> Result<Self, NumericError> {
        if !(sigma_cover.is_finite() && sigma_cover >= 8.0) {
            return Err(NumericError::BadModel(
                "extents must cover at least 8 standard deviations".into(),
            ));
        }
        self.sigma_cover = sigma_cover;
        Ok(self)
    }
}

/// Σ c_n h_n(t) over the orthonormal Hermite functions, by the stable
/// three-term recurrence.
fn hermite_sum(coeffs: &[f64], t: f64) -> f64 {
    let mut acc = 0.0;
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * t * t).exp();
    for (n, &c) in coeffs.iter().enumerate() {
        acc += c * cur;
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * t * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    acc
}

/// Symmetric trapezoid grid on [−extent, extent]: nodes and weights.
fn trapezoid_nodes(extent: f64, points: usize) -> (Vec<f64>, Vec<f64>) {
    let n = points.max(9) | 1;
    let h = 2.0 * extent / (n - 1) as f64;
    let nodes: Vec<f64> = (0..n).map(|i| -extent + i as f64 * h).collect();
    let mut weights = vec![h; n];
    weights[0] = 0.5 * h;
    weights[n - 1] = 0.5 * h;
    (nodes, weights)
}

/// Symmetric midpoint grid with an even cell count, so no node hits the
/// coordinate hyperplanes where the Pfaffian density can vanish.
fn midpoint_nodes(extent: f64, cells: usize) -> (Vec<f64>, f64) {
    let n = cells.max(8) & !1usize;
    let h = 2.0 * extent / n as f64;
    let nodes = (0..n).map(|j| -extent + (j as f64 + 0.5) * h).collect();
    (nodes, h)
}

/// Everything the numeric checks need about the rank-n case: the system,
/// its Plancherel data, the exact stepwise constant, and the coordinate
/// axes of n ordered as quasi-center roots (in variable order) followed by
/// the remaining positive roots in coefficient order.
struct CaseData {
    table: StructureTable,
    data: PlancherelData,
    c: f64,
    v_ids: Vec<usize>,
}

fn case_data(rank: usize) -> Result<CaseData, NumericError> {
    let sys = build_system(Family::A, rank, MultPreset::SplitOnes)?;
    let cascade = build_cascade(&sys);
    let dec = decompose(&sys, &cascade, &BTreeSet::new())?;
    let table = build_constants(&sys)?;
    let data = build_plancherel(&sys, &cascade, &dec, &table)?;
    let c = stepwise_constant(&dec)?
        .to_f64()
        .ok_or_else(|| NumericError::BadModel("stepwise constant overflows f64".into()))?;
    let zset: BTreeSet<usize> = data.space.roots.iter().copied().collect();
    let mut v_ids: Vec<usize> = dec
        .split
        .nil
        .iter()
        .copied()
        .filter(|i| !zset.contains(i))
        .collect();
    v_ids.sort_by(|&a, &b| sys.root(a).coords.cmp(&sys.root(b).coords));
    Ok(CaseData {
        table,
        data,
        c,
        v_ids,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct NormCheck {
    pub numeric: f64,
    pub predicted: f64,
    pub rel_err: f64,
}

/// Integrates |f_{u,v}|² over N/Z ≅ ℝ² for the Heisenberg group and compares
/// with ‖u‖²‖v‖²/|P(λ)|.  The integral is recomputed with all steps halved;
/// disagreement beyond `tol` is a quadrature failure.
pub fn coefficient_norm_check(
    model: &SchroedingerModel,
    config: &QuadratureConfig,
) -> Result<NormCheck, NumericError> {
    let case = case_data(2)?;
    let pabs = case.data.density.evaluate_f64(&[model.lambda]).abs();
    let predicted = model.norm_u_sq() * model.norm_v_sq() / pabs;
    let coarse = norm_integral(model, config.grid, config.sigma_cover);
    let fine = norm_integral(model, 2 * config.grid, config.sigma_cover);
    let disagreement = (coarse - fine).abs() / fine.abs().max(f64::MIN_POSITIVE);
    if disagreement > config.tol {
        return Err(NumericError::QuadratureFailure {
            stage: "coefficient norm".into(),
            disagreement,
            tol: config.tol,
        });
    }
    Ok(NormCheck {
        numeric: fine,
        predicted,
        rel_err: (fine - predicted).abs() / predicted,
    })
}

fn norm_integral(model: &SchroedingerModel, grid: usize, cover: f64) -> f64 {
    let order = model.u.len().max(model.v.len()) - 1;
    let turning = ((2 * order + 1) as f64).sqrt();
    let t_ext = turning + cover;
    let x_ext = 2.0 * turning + cover * SQRT_2;
    let y_ext = cover / (SQRT_2 * PI * model.lambda.abs());
    let (ts, wt) = trapezoid_nodes(t_ext, 4 * grid + 1);
    let (xs, wx) = trapezoid_nodes(x_ext, grid);
    let (ys, wy) = trapezoid_nodes(y_ext, grid);
    let u_tab: Vec<f64> = ts.iter().map(|&t| hermite_sum(&model.u, t)).collect();
    let phases: Vec<Vec<Complex64>> = ys
        .iter()
        .map(|&y| {
            ts.iter()
                .map(|&t| Complex64::from_polar(1.0, -2.0 * PI * model.lambda * y * t))
                .collect()
        })
        .collect();
    // |f_{u,v}(x,y,0)|² = |∫ u(t)·v(t+x)·e^{−2πiλyt} dt|²: the central and
    // xy/2 phases of the model drop out of the modulus.
    let rows: Vec<f64> = xs
        .par_iter()
        .map(|&x| {
            let p: Vec<f64> = ts
                .iter()
                .enumerate()
                .map(|(i, &t)| wt[i] * u_tab[i] * hermite_sum(&model.v, t + x))
                .collect();
            ys.iter()
                .enumerate()
                .map(|(yi, _)| {
                    let mut s = Complex64::new(0.0, 0.0);
                    for (i, ph) in phases[yi].iter().enumerate() {
                        s += p[i] * ph;
                    }
                    wy[yi] * s.norm_sqr()
                })
                .sum::<f64>()
        })
        .collect();
    xs.iter().enumerate().map(|(i, _)| wx[i] * rows[i]).sum()
}

/// Which nilradical the inversion check runs on: rank 2 (the 3-dimensional
/// Heisenberg group) or rank 3 (6-dimensional, two cascade steps).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NilradicalCase {
    A2,
    A3,
}

impl NilradicalCase {
    pub fn parse(s: &str) -> Option<NilradicalCase> {
        match s {
            "h3" | "H3" | "a2" | "A2" => Some(NilradicalCase::A2),
            "a3" | "A3" => Some(NilradicalCase::A3),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            NilradicalCase::A2 => "h3",
            NilradicalCase::A3 => "a3",
        }
    }

    fn rank(&self) -> usize {
        match self {
            NilradicalCase::A2 => 2,
            NilradicalCase::A3 => 3,
        }
    }

    fn dim(&self) -> usize {
        match self {
            NilradicalCase::A2 => 3,
            NilradicalCase::A3 => 6,
        }
    }
}

/// One separable factor of the test function: w ↦ (p₀+p₁w+…)·e^{−width·w²}.
#[derive(Debug, Clone)]
pub struct AxisFactor {
    pub width: f64,
    pub poly: Vec<f64>,
}

impl AxisFactor {
    pub fn gaussian(width: f64) -> AxisFactor {
        AxisFactor {
            width,
            poly: vec![1.0],
        }
    }

    /// e^{−πw²}, self-dual under the e^{−2πi} Fourier convention.
    pub fn standard() -> AxisFactor {
        AxisFactor::gaussian(PI)
    }

    fn eval(&self, w: f64) -> f64 {
        let mut p = 0.0;
        for &c in self.poly.iter().rev() {
            p = p * w + c;
        }
        p * (-self.width * w * w).exp()
    }

    fn sigma(&self) -> f64 {
        1.0 / (2.0 * self.width).sqrt()
    }

    fn freq_sigma(&self) -> f64 {
        self.width.sqrt() / (PI * SQRT_2)
    }

    fn degree(&self) -> f64 {
        (self.poly.len() - 1) as f64
    }
}

/// A Schwartz test function (separable Gaussian-polynomial in exponential
/// coordinates) together with a group point, on one of the two supported
/// nilradicals.  Coordinates are ordered: quasi-center roots in variable
/// order, then the complementary positive roots in coefficient order.
#[derive(Debug, Clone)]
pub struct InversionProblem {
    pub case: NilradicalCase,
    pub factors: Vec<AxisFactor>,
    pub point: Vec<f64>,
}

impl InversionProblem {
    pub fn new(
        case: NilradicalCase,
        factors: Vec<AxisFactor>,
        point: Vec<f64>,
    ) -> Result<InversionProblem, NumericError> {
        let dim = case.dim();
        if factors.len() != dim || point.len() != dim {
            return Err(NumericError::BadModel(format!(
                "case {} needs {dim} axis factors and {dim} point coordinates",
                case.label()
            )));
        }
        for f in &factors {
            if !(f.width.is_finite() && f.width > 0.0) {
                return Err(NumericError::BadModel(
                    "Gaussian widths must be positive".into(),
                ));
            }
            if f.poly.is_empty()
                || f.poly.iter().any(|c| !c.is_finite())
                || f.poly.iter().all(|&c| c == 0.0)
            {
                return Err(NumericError::BadModel(
                    "polynomial factors must be finite and nonzero".into(),
                ));
            }
        }
        if point.iter().any(|c| !c.is_finite()) {
            return Err(NumericError::BadModel("point must be finite".into()));
        }
        if case == NilradicalCase::A3 && point[1..].iter().any(|&c| c != 0.0) {
            return Err(NumericError::BadModel(
                "the 6-dimensional case supports identity and central translations only".into(),
            ));
        }
        Ok(InversionProblem {
            case,
            factors,
            point,
        })
    }

    /// Standard Gaussian at the identity.
    pub fn standard(case: NilradicalCase) -> InversionProblem {
        InversionProblem {
            case,
            factors: (0..case.dim()).map(|_| AxisFactor::standard()).collect(),
            point: vec![0.0; case.dim()],
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct InversionCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
    pub grid: usize,
    pub runtime_ms: u64,
}

/// Evaluates f(x) against c·∫ Θ_{π_λ}(r_x f)|P(λ)|dλ with the distribution
/// character Θ computed from the Euclidean Fourier transform over the flat
/// coadjoint orbit v*+λ; c is the exact stepwise constant of the case.
pub fn inversion_check(
    problem: &InversionProblem,
    config: &QuadratureConfig,
) -> Result<InversionCheck, NumericError> {
    let case = case_data(problem.case.rank())?;
    let c = case.c;
    inversion_with(&case, problem, config, c)
}

/// Same check with an explicitly supplied outer constant, so a deliberately
/// wrong constant serves as a negative control; the character normalization
/// itself always uses the true constant.
pub fn inversion_check_with_constant(
    problem: &InversionProblem,
    config: &QuadratureConfig,
    c: f64,
) -> Result<InversionCheck, NumericError> {
    let case = case_data(problem.case.rank())?;
    inversion_with(&case, problem, config, c)
}

fn inversion_with(
    case: &CaseData,
    problem: &InversionProblem,
    config: &QuadratureConfig,
    c_used: f64,
) -> Result<InversionCheck, NumericError> {
    let start = Instant::now();
    let lhs: f64 = problem
        .factors
        .iter()
        .zip(&problem.point)
        .map(|(g, &x)| g.eval(x))
        .product();
    if lhs.abs() < 1e-12 {
        return Err(NumericError::BadModel(
            "f vanishes at the test point; the relative comparison is undefined".into(),
        ));
    }
    let coarse = rhs_value(case, problem, config.grid, config.sigma_cover, c_used);
    let fine = rhs_value(case, problem, 2 * config.grid, config.sigma_cover, c_used);
    let scale = lhs.abs().max(fine.re.abs());
    let disagreement = (coarse.re - fine.re).abs() / scale;
    if disagreement > config.tol {
        return Err(NumericError::QuadratureFailure {
            stage: "inversion".into(),
            disagreement,
            tol: config.tol,
        });
    }
    let imag = fine.im.abs() / scale;
    if imag > config.tol {
        return Err(NumericError::QuadratureFailure {
            stage: "inversion imaginary part".into(),
            disagreement: imag,
            tol: config.tol,
        });
    }
    Ok(InversionCheck {
        lhs,
        rhs: fine.re,
        rel_err: (fine.re - lhs).abs() / lhs.abs(),
        grid: config.grid,
        runtime_ms: start.elapsed().as_millis() as u64,
    })
}

fn rhs_value(
    case: &CaseData,
    problem: &InversionProblem,
    grid: usize,
    cover: f64,
    c_used: f64,
) -> Complex64 {
    match problem.case {
        NilradicalCase::A2 => rhs_a2(case, problem, grid, cover, c_used),
        NilradicalCase::A3 => rhs_a3(case, problem, grid, cover, c_used),
    }
}

/// Numeric Fourier transform of the shifted factor along one axis:
/// Ĝ(s) = Σ_w wt·g(w+shift)·e^{−2πisw} at each requested frequency.
fn axis_ft(
    factor: &AxisFactor,
    shift: f64,
    nodes: &[f64],
    weights: &[f64],
    freqs: &[f64],
) -> Vec<Complex64> {
    let samples: Vec<f64> = nodes
        .iter()
        .enumerate()
        .map(|(i, &w)| weights[i] * factor.eval(w + shift))
        .collect();
    freqs
        .iter()
        .map(|&s| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, &w) in nodes.iter().enumerate() {
                acc += samples[i] * Complex64::from_polar(1.0, -2.0 * PI * s * w);
            }
            acc
        })
        .collect()
}

/// Heisenberg case, general group point.  Right translation by
/// x = (c₀,a₀,b₀) sends exp(w) to exp(w + x + ½[w,x]); the bracket feeds the
/// central coordinate only, so after the central Fourier transform the
/// orbital integral over v* splits into two one-dimensional integrals with
/// λ-sheared frequencies.
fn rhs_a2(
    case: &CaseData,
    problem: &InversionProblem,
    grid: usize,
    cover: f64,
    c_used: f64,
) -> Complex64 {
    let gz = &problem.factors[0];
    let g0 = &problem.factors[1];
    let g1 = &problem.factors[2];
    let (c0, a0, b0) = (problem.point[0], problem.point[1], problem.point[2]);
    let n01 = case.table.constant(case.v_ids[0], case.v_ids[1]) as f64;

    let z_ext = (cover + gz.degree()) * gz.freq_sigma();
    let (zetas, hz) = midpoint_nodes(z_ext, grid);
    let n_space = 2 * grid + 1;
    let (zs, zw) = trapezoid_nodes((cover + gz.degree()) * gz.sigma() + c0.abs(), n_space);
    let (w0, w0w) = trapezoid_nodes((cover + g0.degree()) * g0.sigma() + a0.abs(), n_space);
    let (w1, w1w) = trapezoid_nodes((cover + g1.degree()) * g1.sigma() + b0.abs(), n_space);
    let e0 = (cover + g0.degree()) * g0.freq_sigma() + 0.5 * (n01 * b0).abs() * z_ext;
    let e1 = (cover + g1.degree()) * g1.freq_sigma() + 0.5 * (n01 * a0).abs() * z_ext;
    let (alphas, aw) = trapezoid_nodes(e0, grid);
    let (betas, bw) = trapezoid_nodes(e1, grid);

    let zt: Vec<f64> = zs
        .iter()
        .enumerate()
        .map(|(i, &w)| zw[i] * gz.eval(w + c0))
        .collect();
    let t0: Vec<f64> = w0
        .iter()
        .enumerate()
        .map(|(i, &w)| w0w[i] * g0.eval(w + a0))
        .collect();
    let t1: Vec<f64> = w1
        .iter()
        .enumerate()
        .map(|(i, &w)| w1w[i] * g1.eval(w + b0))
        .collect();

    let terms: Vec<Complex64> = zetas
        .par_iter()
        .map(|&zeta| {
            let mut ghz = Complex64::new(0.0, 0.0);
            for (i, &w) in zs.iter().enumerate() {
                ghz += zt[i] * Complex64::from_polar(1.0, -2.0 * PI * zeta * w);
            }
            let mut a_int = Complex64::new(0.0, 0.0);
            for (ai, &alpha) in alphas.iter().enumerate() {
                let s = alpha - 0.5 * zeta * n01 * b0;
                let mut f = Complex64::new(0.0, 0.0);
                for (i, &w) in w0.iter().enumerate() {
                    f += t0[i] * Complex64::from_polar(1.0, -2.0 * PI * s * w);
                }
                a_int += aw[ai] * f;
            }
            let mut b_int = Complex64::new(0.0, 0.0);
            for (bi, &beta) in betas.iter().enumerate() {
                let s = beta + 0.5 * zeta * n01 * a0;
                let mut f = Complex64::new(0.0, 0.0);
                for (i, &w) in w1.iter().enumerate() {
                    f += t1[i] * Complex64::from_polar(1.0, -2.0 * PI * s * w);
                }
                b_int += bw[bi] * f;
            }
            let orbital = ghz * a_int * b_int;
            let pabs = case.data.density.evaluate_f64(&[zeta]).abs();
            let theta = orbital / (case.c * pabs);
            hz * c_used * theta * pabs
        })
        .collect();
    terms.iter().sum()
}

/// 6-dimensional case at the identity or a central translation: the right
/// translate stays separable, so the transform factors per axis; the
/// λ-integral runs over the two quasi-center coordinates with the density
/// restored against the character normalization.
fn rhs_a3(
    case: &CaseData,
    problem: &InversionProblem,
    grid: usize,
    cover: f64,
    c_used: f64,
) -> Complex64 {
    let n_space = 2 * grid + 1;
    let mut z_tables: Vec<(Vec<f64>, f64, Vec<Complex64>)> = Vec::new();
    for k in 0..2 {
        let g = &problem.factors[k];
        let shift = problem.point[k];
        let ext = (cover + g.degree()) * g.freq_sigma();
        let (freqs, h) = midpoint_nodes(ext, grid);
        let (nodes, weights) =
            trapezoid_nodes((cover + g.degree()) * g.sigma() + shift.abs(), n_space);
        let table = axis_ft(g, shift, &nodes, &weights, &freqs);
        z_tables.push((freqs, h, table));
    }
    let mut v_factor = Complex64::new(1.0, 0.0);
    for k in 2..6 {
        let g = &problem.factors[k];
        let (nodes, weights) = trapezoid_nodes((cover + g.degree()) * g.sigma(), n_space);
        let (freqs, fw) = trapezoid_nodes((cover + g.degree()) * g.freq_sigma(), grid);
        let table = axis_ft(g, 0.0, &nodes, &weights, &freqs);
        let mut integral = Complex64::new(0.0, 0.0);
        for (i, t) in table.iter().enumerate() {
            integral += fw[i] * t;
        }
        v_factor *= integral;
    }

    let (l1s, h1, t1) = &z_tables[0];
    let (l2s, h2, t2) = &z_tables[1];
    let rows: Vec<Complex64> = l1s
        .par_iter()
        .enumerate()
        .map(|(i, &l1)| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &l2) in l2s.iter().enumerate() {
                let orbital = t1[i] * t2[j] * v_factor;
                let pabs = case.data.density.evaluate_f64(&[l1, l2]).abs();
                let theta = orbital / (case.c * pabs);
                acc += h1 * h2 * c_used * theta * pabs;
            }
            acc
        })
        .collect();
    rows.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(grid: usize, tol: f64) -> QuadratureConfig {
        QuadratureConfig::new(grid, tol).unwrap()
    }

    #[test]
    fn ground_state_norm_at_lambda_one() {
        let model = SchroedingerModel::new(1.0, vec![1.0], vec![1.0]).unwrap();
        let r = coefficient_norm_check(&model, &cfg(65, 1e-6)).unwrap();
        assert_eq!(r.predicted, 1.0);
        assert!(r.rel_err < 1e-6, "rel_err = {:e}", r.rel_err);
    }

    #[test]
    fn norm_scales_inversely_with_lambda() {
        let model = SchroedingerModel::new(4.0, vec![1.0], vec![1.0]).unwrap();
        let r = coefficient_norm_check(&model, &cfg(65, 1e-6)).unwrap();
        assert_eq!(r.predicted, 0.25);
        assert!(r.rel_err < 1e-6, "rel_err = {:e}", r.rel_err);

        let model = SchroedingerModel::new(-2.0, vec![1.0], vec![1.0]).unwrap();
        let r = coefficient_norm_check(&model, &cfg(65, 1e-6)).unwrap();
        assert_eq!(r.predicted, 0.5);
        assert!(r.rel_err < 1e-6, "rel_err = {:e}", r.rel_err);
    }

    #[test]
    fn orthogonal_vectors_still_satisfy_the_norm_identity() {
        let model = SchroedingerModel::new(2.0, vec![1.0], vec![0.0, 1.0]).unwrap();
        let r = coefficient_norm_check(&model, &cfg(65, 1e-6)).unwrap();
        assert_eq!(r.predicted, 0.5);
        assert!(r.rel_err < 1e-6, "rel_err = {:e}", r.rel_err);
    }

    #[test]
    fn mixed_coefficient_vectors() {
        let u = vec![0.5, -0.25, 1.0];
        let v = vec![1.0, 2.0];
        let model = SchroedingerModel::new(3.0, u.clone(), v.clone()).unwrap();
        let r = coefficient_norm_check(&model, &cfg(65, 1e-6)).unwrap();
        let predicted = (0.25 + 0.0625 + 1.0) * 5.0 / 3.0;
        assert!((r.predicted - predicted).abs() < 1e-12);
        assert!(r.rel_err < 1e-6, "rel_err = {:e}", r.rel_err);
    }

    #[test]
    fn bad_models_are_rejected() {
        assert!(SchroedingerModel::new(0.0, vec![1.0], vec![1.0]).is_err());
        assert!(SchroedingerModel::new(1.0, vec![], vec![1.0]).is_err());
        assert!(SchroedingerModel::new(1.0, vec![0.0], vec![1.0]).is_err());
        assert!(QuadratureConfig::new(4, 1e-6).is_err());
        assert!(QuadratureConfig::new(65, 0.0).is_err());
        assert!(cfg(65, 1e-6).with_cover(7.0).is_err());
    }

    #[test]
    fn coarse_grids_fail_loudly() {
        let model = SchroedingerModel::new(5.0, vec![1.0], vec![1.0]).unwrap();
        let tight = QuadratureConfig::new(9, 1e-9).unwrap().with_cover(8.0).unwrap();
        match coefficient_norm_check(&model, &tight) {
            Err(NumericError::QuadratureFailure { .. }) => {}
            other => panic!("expected quadrature failure, got {other:?}"),
        }
    }

    #[test]
    fn heisenberg_inversion_at_identity() {
        let p = InversionProblem::standard(NilradicalCase::A2);
        let r = inversion_check(&p, &cfg(49, 1e-4)).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12);
        assert!(r.rel_err < 1e-4, "rel_err = {:e}", r.rel_err);
    }

    #[test]
    fn heisenberg_inversion_at_a_general_point() {
        let factors = vec![
            AxisFactor::gaussian(1.3),
            AxisFactor::gaussian(0.9),
            AxisFactor::standard(),
        ];
        let p = InversionProblem::new(
            NilradicalCase::A2,
            factors,
            vec![0.15, 0.3, -0.2],
        )
        .unwrap();
        let r = inversion_check(&p, &cfg(49, 1e-4)).unwrap();
        assert!(r.rel_err < 1e-4, "rel_err = {:e}", r.rel_err);
    }

    #[test]
    fn central_translation_changes_only_a_phase() {
        let p = InversionProblem::new(
            NilradicalCase::A2,
            (0..3).map(|_| AxisFactor::standard()).collect(),
            vec![0.4, 0.0, 0.0],
        )
        .unwrap();
        let r = inversion_check(&p, &cfg(49, 1e-4)).unwrap();
        assert!((r.lhs - (-PI * 0.16).exp()).abs() < 1e-12);
        assert!(r.rel_err < 1e-4, "rel_err = {:e}", r.rel_err);

        let id = inversion_check(
            &InversionProblem::standard(NilradicalCase::A2),
            &cfg(49, 1e-4),
        )
        .unwrap();
        assert!(r.rhs < id.rhs, "a pure phase can only shrink the integral");
    }

    #[test]
    fn a3_inversion_at_identity() {
        let p = InversionProblem::standard(NilradicalCase::A3);
        let r = inversion_check(&p, &cfg(49, 1e-3)).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12);
        assert!(r.rel_err < 1e-3, "rel_err = {:e}", r.rel_err);
    }

    #[test]
    fn a3_inversion_with_central_shift_and_mixed_widths() {
        let mut factors: Vec<AxisFactor> = (0..6).map(|_| AxisFactor::standard()).collect();
        factors[0] = AxisFactor::gaussian(1.7);
        factors[3] = AxisFactor::gaussian(0.8);
        let p = InversionProblem::new(
            NilradicalCase::A3,
            factors,
            vec![0.25, 0.0, 0.0, 0.0, 0.0, 0.0],
        )
        .unwrap();
        let r = inversion_check(&p, &cfg(49, 1e-3)).unwrap();
        assert!(r.rel_err < 1e-3, "rel_err = {:e}", r.rel_err);
    }

    #[test]
    fn a3_rejects_noncentral_points() {
        let p = InversionProblem::new(
            NilradicalCase::A3,
            (0..6).map(|_| AxisFactor::standard()).collect(),
            vec![0.0, 0.0, 0.1, 0.0, 0.0, 0.0],
        );
        assert!(matches!(p, Err(NumericError::BadModel(_))));
    }

    #[test]
    fn doubled_constant_breaks_inversion() {
        let p = InversionProblem::standard(NilradicalCase::A2);
        let config = cfg(49, 1e-4);
        let case_c = 2.0; // true stepwise constant for one Heisenberg pair
        let r = inversion_check_with_constant(&p, &config, 2.0 * case_c).unwrap();
        assert!(
            r.rel_err > 10.0 * config.tol,
            "wrong constant must fail loudly, rel_err = {:e}",
            r.rel_err
        );
        let ok = inversion_check_with_constant(&p, &config, case_c).unwrap();
        assert!(ok.rel_err < 1e-4);
    }

    #[test]
    fn polynomial_factors_are_admitted() {
        let factors = vec![
            AxisFactor {
                width: PI,
                poly: vec![1.0, 0.0, 0.5],
            },
            AxisFactor::standard(),
            AxisFactor::standard(),
        ];
        let p = InversionProblem::new(NilradicalCase::A2, factors, vec![0.0; 3]).unwrap();
        let r = inversion_check(&p, &cfg(49, 1e-4)).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12);
        assert!(r.rel_err < 1e-4, "rel_err = {:e}", r.rel_err);
    }

    #[test]
    fn hermite_functions_are_orthonormal_on_the_grid() {
        let (ts, wt) = trapezoid_nodes(12.0, 2001);
        for a in 0..4usize {
            for b in 0..4usize {
                let mut ca = vec![0.0; a + 1];
                ca[a] = 1.0;
                let mut cb = vec![0.0; b + 1];
                cb[b] = 1.0;
                let dot: f64 = ts
                    .iter()
                    .enumerate()
                    .map(|(i, &t)| wt[i] * hermite_sum(&ca, t) * hermite_sum(&cb, t))
                    .sum();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((dot - expected).abs() < 1e-10, "⟨h{a},h{b}⟩ = {dot}");
            }
        }
    }
}
