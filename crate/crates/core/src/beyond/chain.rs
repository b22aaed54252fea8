//! Gaussian integrals over the chain variables.
//!
//! A chain of `N = s + 1` links carries free variables `n_1 … n_s` with `n_0 = n_N = 0`
//! and weight `∏ dn_i/√π · e^{-Σ_{i=0}^{s} (n_i − n_{i+1})²}`, whose total mass is
//! `N^{-1/2}`.  Its covariance is `⟨n_i n_j⟩ = min(i,j)(N − max(i,j))/(2N)`.
//!
//! Summed over the links, the normalised moments that the order-`ε` bracket needs are
//! Laurent polynomials in `N` with exponents `-2 … 5`.  They are computed once in exact
//! rational arithmetic and fitted exactly.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Poly2;
use crate::{Error, Result};

/// Lowest and highest power of `N` in the link sums.
pub const LAURENT_MIN: i32 = -2;
pub const LAURENT_MAX: i32 = 5;
pub const LAURENT_LEN: usize = (LAURENT_MAX - LAURENT_MIN + 1) as usize;

/// Exponents `(i, j)` of the odd monomials `n^i n'^j` a `√ε` coefficient can contain.
pub const ODD_MONOMIALS: [(usize, usize); 6] = [(1, 0), (0, 1), (3, 0), (2, 1), (1, 2), (0, 3)];

/// Highest monomial degree accepted by [`chain_moment`].
pub const MAX_MOMENT_DEGREE: u32 = 8;

/// Covariance matrix of `(n_1, …, n_s)`, by inverting the tridiagonal precision matrix.
pub fn chain_covariance(s: usize) -> Result<DMatrix<f64>> {
    if s == 0 {
        return Err(Error::domain("chain covariance needs s >= 1"));
    }
    let precision = DMatrix::from_fn(s, s, |i, j| match i.abs_diff(j) {
        0 => 4.0,
        1 => -2.0,
        _ => 0.0,
    });
    precision.try_inverse().ok_or_else(|| Error::no_convergence("chain precision matrix is singular"))
}

/// Closed form of the covariance, for `0 ≤ i, j ≤ N`.
pub fn chain_covariance_closed(n_links: usize, i: usize, j: usize) -> f64 {
    let (lo, hi) = (i.min(j), i.max(j));
    (lo * (n_links - hi)) as f64 / (2 * n_links) as f64
}

fn cov_exact(n_links: usize, i: usize, j: usize) -> BigRational {
    let (lo, hi) = (i.min(j), i.max(j));
    BigRational::new(BigInt::from(lo * (n_links - hi)), BigInt::from(2 * n_links))
}

/// Gaussian expectation of `∏ x_{v_k}` by Isserlis' theorem.
fn isserlis<V: Clone + Zero + std::ops::Add<Output = V> + std::ops::Mul<Output = V> + One>(
    vars: &[usize],
    cov: &dyn Fn(usize, usize) -> V,
) -> V {
    if vars.is_empty() {
        return V::one();
    }
    if vars.len() % 2 == 1 {
        return V::zero();
    }
    let first = vars[0];
    let rest = &vars[1..];
    let mut acc = V::zero();
    for k in 0..rest.len() {
        let c = cov(first, rest[k]);
        if c.is_zero() {
            continue;
        }
        let others: Vec<usize> = rest.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, v)| *v).collect();
        acc = acc + c * isserlis(&others, cov);
    }
    acc
}

fn expand(powers: &[(usize, u32)]) -> Vec<usize> {
    powers.iter().flat_map(|&(v, p)| std::iter::repeat(v).take(p as usize)).collect()
}

/// Normalised moment `N^{-1/2} ⟨∏ n_i^{k_i}⟩` for a chain with `s` free variables;
/// `powers[i]` is the power of `n_{i+1}`.
pub fn chain_moment(s: usize, powers: &[u32]) -> Result<f64> {
    if powers.len() > s {
        return Err(Error::domain(format!("{} exponents for {} variables", powers.len(), s)));
    }
    let degree: u32 = powers.iter().sum();
    if degree % 2 == 1 {
        return Ok(0.0);
    }
    if degree > MAX_MOMENT_DEGREE {
        return Err(Error::Unsupported(format!("moment of degree {degree}")));
    }
    let n_links = s + 1;
    let norm = (n_links as f64).powf(-0.5);
    let vars = expand(&powers.iter().enumerate().map(|(i, &p)| (i + 1, p)).collect::<Vec<_>>());
    let v = isserlis(&vars, &|i, j| cov_exact(n_links, i, j));
    Ok(norm * to_f64(&v))
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact link sums for one chain length.
#[derive(Debug, Clone)]
pub struct ChainSums {
    /// `Σ_i ⟨n_i^p n_{i+1}^q⟩`, indexed `[p][q]`, `p + q ≤ 6`.
    pub single: Vec<Vec<BigRational>>,
    /// `Σ_{i<j} ⟨m_a(n_i, n_{i+1}) m_b(n_j, n_{j+1})⟩` over [`ODD_MONOMIALS`].
    pub pair: Vec<Vec<BigRational>>,
}

/// Link sums of an `N`-link chain in exact arithmetic (unnormalised by `N^{-1/2}`).
pub fn chain_sums_exact(n_links: usize) -> ChainSums {
    assert!(n_links >= 1);
    let cov = |i: usize, j: usize| cov_exact(n_links, i, j);
    let mut single = vec![vec![BigRational::zero(); 7]; 7];
    for p in 0..=6usize {
        for q in 0..=(6 - p) {
            if (p + q) % 2 == 1 {
                continue;
            }
            let mut acc = BigRational::zero();
            for i in 0..n_links {
                acc += isserlis(&expand(&[(i, p as u32), (i + 1, q as u32)]), &cov);
            }
            single[p][q] = acc;
        }
    }
    let mut pair = vec![vec![BigRational::zero(); ODD_MONOMIALS.len()]; ODD_MONOMIALS.len()];
    for (a, &(p1, q1)) in ODD_MONOMIALS.iter().enumerate() {
        for (b, &(p2, q2)) in ODD_MONOMIALS.iter().enumerate() {
            let mut acc = BigRational::zero();
            for i in 0..n_links {
                for j in (i + 1)..n_links {
                    let vars = expand(&[(i, p1 as u32), (i + 1, q1 as u32), (j, p2 as u32), (j + 1, q2 as u32)]);
                    acc += isserlis(&vars, &cov);
                }
            }
            pair[a][b] = acc;
        }
    }
    ChainSums { single, pair }
}

/// Laurent coefficients `c_k`, `k = -2 … 5`, of every link sum.
#[derive(Debug, Clone)]
pub struct LaurentTables {
    pub single: [[[f64; LAURENT_LEN]; 7]; 7],
    pub pair: [[[f64; LAURENT_LEN]; 6]; 6],
}

/// Chain lengths used to fit, and to confirm the fit.
const FIT_POINTS: usize = LAURENT_LEN;
const CHECK_POINTS: usize = 4;

fn fit_laurent(values: &[BigRational]) -> [BigRational; LAURENT_LEN] {
    // solve Σ_k c_k N^k = values[N-1] for N = 1..LAURENT_LEN by exact elimination
    let mut rows: Vec<Vec<BigRational>> = (1..=FIT_POINTS)
        .map(|n| {
            let mut row: Vec<BigRational> = (LAURENT_MIN..=LAURENT_MAX).map(|k| pow_rat(n, k)).collect();
            row.push(values[n - 1].clone());
            row
        })
        .collect();
    for col in 0..LAURENT_LEN {
        let piv = (col..LAURENT_LEN).find(|&r| !rows[r][col].is_zero()).expect("Vandermonde system is regular");
        rows.swap(col, piv);
        let p = rows[col][col].clone();
        for x in rows[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..LAURENT_LEN {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                let pivot_row = rows[col].clone();
                for (x, y) in rows[r].iter_mut().zip(pivot_row.iter()) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    std::array::from_fn(|k| rows[k][LAURENT_LEN].clone())
}

fn pow_rat(n: usize, k: i32) -> BigRational {
    let b = BigRational::from_integer(BigInt::from(n));
    if k >= 0 {
        num_traits::pow(b, k as usize)
    } else {
        num_traits::pow(b.recip(), (-k) as usize)
    }
}

fn eval_laurent(c: &[BigRational; LAURENT_LEN], n: usize) -> BigRational {
    c.iter().zip(LAURENT_MIN..=LAURENT_MAX).fold(BigRational::zero(), |acc, (ck, k)| acc + ck * pow_rat(n, k))
}

fn build_tables() -> LaurentTables {
    let sums: Vec<ChainSums> = (1..=FIT_POINTS + CHECK_POINTS).map(chain_sums_exact).collect();
    let fit = |get: &dyn Fn(&ChainSums) -> BigRational| -> [f64; LAURENT_LEN] {
        let values: Vec<BigRational> = sums.iter().map(get).collect();
        let c = fit_laurent(&values);
        for n in FIT_POINTS + 1..=FIT_POINTS + CHECK_POINTS {
            assert!(eval_laurent(&c, n) == values[n - 1], "link sums are not Laurent polynomials of the expected range");
        }
        std::array::from_fn(|k| to_f64(&c[k]))
    };
    let mut single = [[[0.0; LAURENT_LEN]; 7]; 7];
    for (p, row) in single.iter_mut().enumerate() {
        for (q, cell) in row.iter_mut().enumerate().take(7 - p) {
            *cell = fit(&|s: &ChainSums| s.single[p][q].clone());
        }
    }
    let mut pair = [[[0.0; LAURENT_LEN]; 6]; 6];
    for (a, row) in pair.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            *cell = fit(&|s: &ChainSums| s.pair[a][b].clone());
        }
    }
    LaurentTables { single, pair }
}

pub fn laurent_tables() -> &'static LaurentTables {
    static TABLES: OnceLock<LaurentTables> = OnceLock::new();
    TABLES.get_or_init(build_tables)
}

/// Laurent coefficients of the chain-averaged order-`ε` bracket
/// `Σ_i a1(n_i, n_{i+1}) + Σ_{i<j} a½(n_i, n_{i+1}) a½(n_j, n_{j+1})`, together with the
/// sum of the magnitudes of everything that entered each coefficient.
pub fn bracket_laurent(half: &Poly2, one: &Poly2) -> ([f64; LAURENT_LEN], [f64; LAURENT_LEN]) {
    let tables = laurent_tables();
    let mut c = [0.0; LAURENT_LEN];
    let mut mag = [0.0; LAURENT_LEN];
    for (p, q, v) in one.terms() {
        if (p + q) % 2 == 1 {
            continue;
        }
        for k in 0..LAURENT_LEN {
            let x = v * tables.single[p][q][k];
            c[k] += x;
            mag[k] += x.abs();
        }
    }
    let h: Vec<f64> = ODD_MONOMIALS.iter().map(|&(i, j)| half.coeff(i, j)).collect();
    for a in 0..ODD_MONOMIALS.len() {
        for b in 0..ODD_MONOMIALS.len() {
            let w = h[a] * h[b];
            if w == 0.0 {
                continue;
            }
            for k in 0..LAURENT_LEN {
                let x = w * tables.pair[a][b][k];
                c[k] += x;
                mag[k] += x.abs();
            }
        }
    }
    (c, mag)
}

/// Evaluates Laurent coefficients at chain length `n_links`.
pub fn laurent_at(c: &[f64; LAURENT_LEN], n_links: usize) -> f64 {
    let n = n_links as f64;
    c.iter().zip(LAURENT_MIN..=LAURENT_MAX).map(|(ck, k)| ck * n.powi(k)).sum()
}

/// Exact chain average of the bracket at one chain length, `N^{-1/2}` included.
pub fn bracket_exact(half: &Poly2, one: &Poly2, n_links: usize) -> f64 {
    let sums = chain_sums_exact(n_links);
    let mut acc = 0.0;
    for (p, q, v) in one.terms() {
        acc += v * to_f64(&sums.single[p][q]);
    }
    for (a, &(i, j)) in ODD_MONOMIALS.iter().enumerate() {
        for (b, &(k, l)) in ODD_MONOMIALS.iter().enumerate() {
            acc += half.coeff(i, j) * half.coeff(k, l) * to_f64(&sums.pair[a][b]);
        }
    }
    acc * (n_links as f64).powf(-0.5)
}

/// True if every odd link sum vanishes identically for this chain length.
pub fn odd_sums_vanish(n_links: usize) -> bool {
    let cov = |i: usize, j: usize| cov_exact(n_links, i, j);
    (0..=6usize).all(|p| {
        (0..=(6 - p)).filter(|q| (p + q) % 2 == 1).all(|q| {
            (0..n_links).all(|i| isserlis(&expand(&[(i, p as u32), (i + 1, q as u32)]), &cov).is_zero())
        })
    })
}

/// Largest deviation of the tabulated Laurent fit from the exact sums, `N` in `1..=n_max`,
/// relative to the size of the exact value.
pub fn laurent_fit_residual(n_max: usize) -> f64 {
    let tables = laurent_tables();
    let mut worst: f64 = 0.0;
    for n in 1..=n_max {
        let s = chain_sums_exact(n);
        for p in 0..=6usize {
            for q in 0..=(6 - p) {
                let exact = to_f64(&s.single[p][q]);
                let fit = laurent_at(&tables.single[p][q], n);
                worst = worst.max((exact - fit).abs() / exact.abs().max(1.0));
            }
        }
        for a in 0..6 {
            for b in 0..6 {
                let exact = to_f64(&s.pair[a][b]);
                let fit = laurent_at(&tables.pair[a][b], n);
                worst = worst.max((exact - fit).abs() / exact.abs().max(1.0));
            }
        }
    }
    worst
}

/// `|x|` of an exact rational, exposed for diagnostics.
pub fn rational_abs(r: &BigRational) -> BigRational {
    r.abs()
}
