//! Sparse multivariate polynomials over arbitrary-precision integers, and
//! Pfaffians/determinants of antisymmetric polynomial matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("operands have different variable counts: {0} vs {1}")]
    ArityError(usize, usize),
    #[error("pfaffian requires even dimension, got {0}")]
    OddDimension(usize),
    #[error("matrix is not antisymmetric at ({0},{1})")]
    NotAntisymmetric(usize, usize),
    #[error("evaluation point has {0} coordinates, polynomial has {1} variables")]
    PointArity(usize, usize),
}

/// Integer-coefficient polynomial in a fixed number of variables; zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Polynomial {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Polynomial {
        let c = c.into();
        let mut p = Polynomial::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Polynomial {
        Polynomial::constant(nvars, 1)
    }

    /// The monomial c · x_i.
    pub fn term(nvars: usize, i: usize, c: impl Into<BigInt>) -> Polynomial {
        let c = c.into();
        assert!(i < nvars);
        let mut p = Polynomial::zero(nvars);
        if !c.is_zero() {
            let mut e = vec![0; nvars];
            e[i] = 1;
            p.terms.insert(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Indices of variables appearing with positive exponent.
    pub fn variables_used(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for e in self.terms.keys() {
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    out.insert(i);
                }
            }
        }
        out
    }

    fn check_arity(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::ArityError(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_arity(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        Ok(Polynomial {
            nvars: self.nvars,
            terms,
        })
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_arity(other)?;
        let mut terms: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let entry = terms.entry(e).or_insert_with(BigInt::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Polynomial {
            nvars: self.nvars,
            terms,
        })
    }

    pub fn scale(&self, c: impl Into<BigInt>) -> Polynomial {
        let c = c.into();
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * &c)).collect(),
        }
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::PointArity(point.len(), self.nvars));
        }
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut m = BigRational::from_integer(c.clone());
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    m *= x;
                }
            }
            total += m;
        }
        Ok(total)
    }

    /// Float evaluation for numerical pipelines.
    pub fn evaluate_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.nvars);
        let mut total = 0.0;
        for (e, c) in &self.terms {
            let mut m = bigint_to_f64(c);
            for (x, &k) in point.iter().zip(e) {
                m *= x.powi(k as i32);
            }
            total += m;
        }
        total
    }

    /// Canonical text form: terms by total degree descending, then
    /// exponent-lex descending.
    pub fn to_text(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<(&Vec<u32>, &BigInt)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then(b.0.cmp(a.0))
        });
        let mut out = String::new();
        for (i, (e, c)) in terms.iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| {
                    if k == 1 {
                        names[v].clone()
                    } else {
                        format!("{}^{}", names[v], k)
                    }
                })
                .collect();
            let abs = c.abs();
            let sign_str = if i == 0 {
                if c.is_negative() { "-" } else { "" }
            } else if c.is_negative() {
                " - "
            } else {
                " + "
            };
            out.push_str(sign_str);
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono.join("*"));
            } else {
                out.push_str(&format!("{}*{}", abs, mono.join("*")));
            }
        }
        out
    }

    /// Canonical JSON: same ordering as `to_text`, coefficients as strings.
    pub fn to_json(&self) -> serde_json::Value {
        let mut terms: Vec<(&Vec<u32>, &BigInt)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then(b.0.cmp(a.0))
        });
        serde_json::json!({
            "nvars": self.nvars,
            "terms": terms.iter().map(|(e, c)| serde_json::json!({
                "c": c.to_string(),
                "e": e,
            })).collect::<Vec<_>>(),
        })
    }
}

fn bigint_to_f64(c: &BigInt) -> f64 {
    // Good enough for the coefficient sizes reached here.
    c.to_string().parse::<f64>().unwrap_or(f64::NAN)
}

/// Antisymmetric square matrix of polynomials (shared arity, carried
/// explicitly so empty matrices keep their variable space).
#[derive(Debug, Clone)]
pub struct AntisymmetricPolyMatrix {
    pub dim: usize,
    nvars: usize,
    entries: Vec<Polynomial>,
}

impl AntisymmetricPolyMatrix {
    pub fn new(dim: usize, nvars: usize, entries: Vec<Polynomial>) -> Result<Self, PolyError> {
        assert_eq!(entries.len(), dim * dim);
        for e in &entries {
            if e.nvars() != nvars {
                return Err(PolyError::ArityError(nvars, e.nvars()));
            }
        }
        for i in 0..dim {
            for j in 0..=i {
                let a = &entries[i * dim + j];
                let b = &entries[j * dim + i];
                if a.try_add(b).map(|s| !s.is_zero()).unwrap_or(true) {
                    return Err(PolyError::NotAntisymmetric(i, j));
                }
            }
        }
        Ok(AntisymmetricPolyMatrix {
            dim,
            nvars,
            entries,
        })
    }

    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.dim + j]
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
}

/// Pfaffian by expansion along the first remaining row, memoized on index
/// subsets. Intended for dimensions up to about 20.
pub fn pfaffian(m: &AntisymmetricPolyMatrix) -> Result<Polynomial, PolyError> {
    if !m.dim.is_multiple_of(2) {
        return Err(PolyError::OddDimension(m.dim));
    }
    assert!(m.dim <= 64);
    let nvars = m.nvars();
    let full: u64 = if m.dim == 64 {
        u64::MAX
    } else {
        (1u64 << m.dim) - 1
    };
    let mut memo: HashMap<u64, Polynomial> = HashMap::new();
    fn rec(
        m: &AntisymmetricPolyMatrix,
        nvars: usize,
        mask: u64,
        memo: &mut HashMap<u64, Polynomial>,
    ) -> Polynomial {
        if mask == 0 {
            return Polynomial::one(nvars);
        }
        if let Some(p) = memo.get(&mask) {
            return p.clone();
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1u64 << i);
        let mut acc = Polynomial::zero(nvars);
        let mut pos = 0usize;
        for j in 0..m.dim {
            if rest & (1u64 << j) == 0 {
                continue;
            }
            let a = m.entry(i, j);
            if !a.is_zero() {
                let sub = rec(m, nvars, rest & !(1u64 << j), memo);
                let prod = a.try_mul(&sub).expect("uniform arity");
                acc = if pos.is_multiple_of(2) {
                    acc.try_add(&prod).expect("uniform arity")
                } else {
                    acc.try_sub(&prod).expect("uniform arity")
                };
            }
            pos += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }
    Ok(rec(m, nvars, full, &mut memo))
}

/// Division-free determinant of the (full) polynomial matrix, memoized over
/// column subsets; serves as the independent oracle for `pfaffian`.
pub fn determinant(m: &AntisymmetricPolyMatrix) -> Polynomial {
    let nvars = m.nvars();
    let full: u64 = if m.dim == 0 {
        0
    } else if m.dim == 64 {
        u64::MAX
    } else {
        (1u64 << m.dim) - 1
    };
    let mut memo: HashMap<u64, Polynomial> = HashMap::new();
    fn rec(
        m: &AntisymmetricPolyMatrix,
        nvars: usize,
        mask: u64,
        memo: &mut HashMap<u64, Polynomial>,
    ) -> Polynomial {
        if mask == 0 {
            return Polynomial::one(nvars);
        }
        if let Some(p) = memo.get(&mask) {
            return p.clone();
        }
        let row = m.dim - mask.count_ones() as usize;
        let mut acc = Polynomial::zero(nvars);
        let mut pos = 0usize;
        for j in 0..m.dim {
            if mask & (1u64 << j) == 0 {
                continue;
            }
            let a = m.entry(row, j);
            if !a.is_zero() {
                let sub = rec(m, nvars, mask & !(1u64 << j), memo);
                let prod = a.try_mul(&sub).expect("uniform arity");
                acc = if pos.is_multiple_of(2) {
                    acc.try_add(&prod).expect("uniform arity")
                } else {
                    acc.try_sub(&prod).expect("uniform arity")
                };
            }
            pos += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }
    rec(m, nvars, full, &mut memo)
}

/// Fraction-free (Bareiss) determinant of an integer matrix.
pub fn bareiss_det(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev; // exact by Bareiss
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}
