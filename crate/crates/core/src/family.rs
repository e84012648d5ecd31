//! The diagonal masking family `g_k(x) = f(x) + k ⊙ x`.
//!
//! Inputs are enumerated canonically: `x` has index `sum_i x_i q^i`, with
//! coordinate 0 least significant. Function tables store one output vector
//! per input in that order.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dist::{shannon_from_counts, Rational};
use crate::error::{Error, Result};
use crate::gf::{build_field, Element, FieldSpec, FieldVector};
use crate::serial::float15;

pub const DEFAULT_BUDGET: u64 = 1 << 32;
pub const BUDGET_ENV: &str = "MASKENT_BUDGET";

/// Upper bound on the number of elementary steps an enumeration may take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    /// The default budget, overridden by `MASKENT_BUDGET` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map(Budget)
                .map_err(|_| Error::Invalid(format!("{BUDGET_ENV}={v:?} is not an integer"))),
            Err(_) => Ok(Budget::default()),
        }
    }

    pub fn check(self, what: &'static str, needed: u128) -> Result<()> {
        if needed > self.0 as u128 {
            Err(Error::BudgetExceeded {
                what,
                needed,
                budget: self.0 as u128,
            })
        } else {
            Ok(())
        }
    }
}

/// An explicit value table for `f: GF(q)^n -> GF(q)^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    field: Arc<FieldSpec>,
    n: usize,
    size: usize,
    /// Row-major: output of input `x` occupies `outputs[x*n..(x+1)*n]`.
    outputs: Vec<u16>,
}

/// On-disk JSON form of a [`FunctionTable`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableFile {
    pub p: u32,
    pub m: u32,
    pub n: usize,
    pub outputs: Vec<Vec<u32>>,
}

fn domain_size(q: u32, n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::Invalid("dimension n must be at least 1".into()));
    }
    (q as usize)
        .checked_pow(n as u32)
        .filter(|&s| s <= u32::MAX as usize)
        .ok_or_else(|| Error::Invalid(format!("domain GF({q})^{n} is too large to tabulate")))
}

impl FunctionTable {
    pub fn new(field: Arc<FieldSpec>, n: usize, outputs: &[FieldVector]) -> Result<Self> {
        let raw = outputs
            .iter()
            .map(|v| v.indices())
            .collect::<Vec<_>>();
        Self::from_rows(field, n, &raw)
    }

    pub fn from_fn(
        field: Arc<FieldSpec>,
        n: usize,
        f: impl Fn(&FieldVector) -> FieldVector,
    ) -> Result<Self> {
        let size = domain_size(field.q(), n)?;
        let outputs: Vec<FieldVector> = (0..size)
            .map(|x| f(&FieldVector::from_linear_index(x, field.q(), n)))
            .collect();
        Self::new(field, n, &outputs)
    }

    /// Builds a table from one index list per input, validating totality and ranges.
    pub fn from_rows(field: Arc<FieldSpec>, n: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let size = domain_size(field.q(), n)?;
        if rows.len() != size {
            return Err(Error::IncompleteTable {
                expected: size,
                got: rows.len(),
            });
        }
        let mut outputs = Vec::with_capacity(size * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: row.len(),
                });
            }
            for &v in row {
                outputs.push(field.element(v as u64)?.index() as u16);
            }
        }
        Ok(FunctionTable {
            field,
            n,
            size,
            outputs,
        })
    }

    pub(crate) fn from_flat(field: Arc<FieldSpec>, n: usize, outputs: Vec<u16>) -> Self {
        let size = domain_size(field.q(), n).expect("domain size validated by caller");
        debug_assert_eq!(outputs.len(), size * n);
        FunctionTable {
            field,
            n,
            size,
            outputs,
        }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of inputs, `q^n`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn output(&self, x: usize) -> FieldVector {
        let entries = self
            .output_raw(x)
            .iter()
            .map(|&v| Element::from_index_unchecked(v as usize))
            .collect();
        FieldVector::new(entries).expect("n >= 1")
    }

    pub(crate) fn output_raw(&self, x: usize) -> &[u16] {
        &self.outputs[x * self.n..(x + 1) * self.n]
    }

    pub(crate) fn set_output_raw(&mut self, x: usize, value: &[u16]) {
        self.outputs[x * self.n..(x + 1) * self.n].copy_from_slice(value);
    }

    pub fn to_file(&self) -> TableFile {
        TableFile {
            p: self.field.p(),
            m: self.field.m(),
            n: self.n,
            outputs: self
                .outputs
                .chunks(self.n)
                .map(|c| c.iter().map(|&v| v as u32).collect())
                .collect(),
        }
    }

    pub fn from_file(file: &TableFile) -> Result<Self> {
        let field = Arc::new(build_field(file.p, file.m)?);
        Self::from_rows(field, file.n, &file.outputs)
    }

    /// First 16 hex digits of SHA-256 over `(p, m, n, outputs)`.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.field.p().to_le_bytes());
        h.update(self.field.m().to_le_bytes());
        h.update((self.n as u64).to_le_bytes());
        for &v in &self.outputs {
            h.update(v.to_le_bytes());
        }
        h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Input coordinates for every `x`, row-major.
fn input_coordinates(q: usize, n: usize, size: usize) -> Vec<u16> {
    let mut coords = Vec::with_capacity(size * n);
    for x in 0..size {
        let mut rest = x;
        for _ in 0..n {
            coords.push((rest % q) as u16);
            rest /= q;
        }
    }
    coords
}

/// Histograms `g_k(A)` for every key in canonical order, handing each
/// key index and its output counts to `visit`.
fn scan_keys(f: &FunctionTable, mut visit: impl FnMut(usize, &[u32])) {
    let field = &*f.field;
    let (q, n, size) = (field.q() as usize, f.n, f.size);
    let coords = input_coordinates(q, n, size);
    let place: Vec<usize> = (0..n).map(|i| q.pow(i as u32)).collect();
    let mut counts = vec![0u32; size];
    for k in 0..size {
        let key = &coords[k * n..(k + 1) * n];
        counts.fill(0);
        for x in 0..size {
            let fx = &f.outputs[x * n..(x + 1) * n];
            let xs = &coords[x * n..(x + 1) * n];
            let mut y = 0usize;
            for i in 0..n {
                let masked = field.mul_idx(key[i] as usize, xs[i] as usize);
                y += field.add_idx(fx[i] as usize, masked) * place[i];
            }
            counts[y] += 1;
        }
        visit(k, &counts);
    }
}

/// `sum_k sum_s count_k(s)^2`; the average collision probability is this
/// over `q^{3n}`.
pub(crate) fn collision_total(f: &FunctionTable) -> u128 {
    let mut total = 0u128;
    scan_keys(f, |_, counts| {
        total += counts.iter().map(|&c| c as u128 * c as u128).sum::<u128>();
    });
    total
}

/// Table of `x -> f(x) + k ⊙ x`.
pub fn gk_table(f: &FunctionTable, k: &FieldVector) -> Result<FunctionTable> {
    if k.len() != f.n {
        return Err(Error::Dimension {
            expected: f.n,
            got: k.len(),
        });
    }
    let field = &f.field;
    let key: Vec<usize> = k
        .entries()
        .iter()
        .map(|&e| field.element(e.index() as u64).map(Element::index))
        .collect::<std::result::Result<_, _>>()?;
    let q = field.q() as usize;
    let coords = input_coordinates(q, f.n, f.size);
    let outputs = f
        .outputs
        .iter()
        .zip(&coords)
        .enumerate()
        .map(|(j, (&fx, &xi))| {
            let i = j % f.n;
            field.add_idx(fx as usize, field.mul_idx(key[i], xi as usize)) as u16
        })
        .collect();
    Ok(FunctionTable::from_flat(field.clone(), f.n, outputs))
}

/// Right-hand sides of the average collision-probability and Rényi bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub cp_bound: Rational,
    #[serde(with = "float15")]
    pub h2_bound: f64,
}

/// `cp_bound = (2q-1)^n / q^{2n}` and `h2_bound = n log2 q - n log2(2 - 1/q)`.
pub fn bounds(q: u32, n: usize) -> Bounds {
    let per_coord = Rational::new(2 * q as u64 - 1, q as u64 * q as u64);
    let qf = q as f64;
    let nf = n as f64;
    Bounds {
        cp_bound: per_coord.pow(n as u32),
        h2_bound: nf * qf.log2() - nf * (2.0 - 1.0 / qf).log2(),
    }
}

/// Whether every output coordinate `f_i` depends on `x_i` alone.
pub fn is_coordinatewise(f: &FunctionTable) -> bool {
    let q = f.field.q() as usize;
    let n = f.n;
    let coords = input_coordinates(q, n, f.size);
    (0..n).all(|i| {
        let mut seen: Vec<Option<u16>> = vec![None; q];
        (0..f.size).all(|x| {
            let xi = coords[x * n + i] as usize;
            let v = f.outputs[x * n + i];
            *seen[xi].get_or_insert(v) == v
        })
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeyReport {
    pub k: Vec<u32>,
    pub cp: Rational,
    #[serde(with = "float15")]
    pub h2: f64,
    #[serde(with = "float15")]
    pub shannon: f64,
    pub image_size: usize,
}

/// Exact and floating averages over all keys, with the matching bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub q: u32,
    pub n: usize,
    pub avg_cp: Rational,
    pub cp_bound: Rational,
    #[serde(with = "float15")]
    pub avg_h2: f64,
    #[serde(with = "float15")]
    pub h2_bound: f64,
    #[serde(with = "float15")]
    pub avg_shannon: f64,
    pub coordinatewise: bool,
    pub equality_holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_k: Option<Vec<KeyReport>>,
}

/// Averages `cp`, `H2` and `H` of `g_k(A)` over every key `k`.
///
/// Cost is `q^{2n}` table steps, checked against `budget`.
pub fn family_averages(f: &FunctionTable, keep_per_k: bool, budget: Budget) -> Result<TheoremReport> {
    let size = f.size as u128;
    budget.check("family averages", size * size)?;
    let q = f.field.q();
    let n = f.n;
    let log_size_sq = ((size * size) as f64).log2();

    let mut cp_total = 0u128;
    let mut h2_sum = 0.0;
    let mut shannon_sum = 0.0;
    let mut per_k = keep_per_k.then(Vec::new);
    scan_keys(f, |k, counts| {
        let sumsq: u128 = counts.iter().map(|&c| c as u128 * c as u128).sum();
        let h2 = log_size_sq - (sumsq as f64).log2();
        let shannon = shannon_from_counts(counts.iter().map(|&c| c as u64), f.size as u64);
        cp_total += sumsq;
        h2_sum += h2;
        shannon_sum += shannon;
        if let Some(rows) = per_k.as_mut() {
            rows.push(KeyReport {
                k: FieldVector::from_linear_index(k, q, n).indices(),
                cp: Rational::new(sumsq, size * size),
                h2,
                shannon,
                image_size: counts.iter().filter(|&&c| c > 0).count(),
            });
        }
    });

    let avg_cp = Rational::new(cp_total, size * size * size);
    let Bounds { cp_bound, h2_bound } = bounds(q, n);
    Ok(TheoremReport {
        q,
        n,
        equality_holds: avg_cp == cp_bound,
        avg_cp,
        cp_bound,
        avg_h2: h2_sum / f.size as f64,
        h2_bound,
        avg_shannon: shannon_sum / f.size as f64,
        coordinatewise: is_coordinatewise(f),
        per_k,
    })
}

/// `Pr(g_K(A) = g_K(A'))` with `K`, `A`, `A'` independent and uniform.
///
/// Enumerates all `(k, a, a')` triples when `q^{3n}` fits the budget and
/// otherwise sums the Hamming-shell decomposition.
pub fn joint_collision(f: &FunctionTable, budget: Budget) -> Result<Rational> {
    let size = f.size as u128;
    if size.saturating_mul(size).saturating_mul(size) <= budget.0 as u128 {
        joint_collision_enumerated(f, budget)
    } else {
        Ok(shell_decomposition(f, budget)?.total)
    }
}

/// Direct triple enumeration, comparing output vectors coordinate by coordinate.
pub fn joint_collision_enumerated(f: &FunctionTable, budget: Budget) -> Result<Rational> {
    let size = f.size;
    let s = size as u128;
    budget.check("joint collision enumeration", s * s * s)?;
    let n = f.n;
    let mut hits = 0u128;
    for k in 0..size {
        let key = FieldVector::from_linear_index(k, f.field.q(), n);
        let g = gk_table(f, &key)?;
        for a in 0..size {
            let ga = g.output_raw(a);
            hits += (0..size).filter(|&b| g.output_raw(b) == ga).count() as u128;
        }
    }
    Ok(Rational::new(hits, s * s * s))
}

/// One Hamming shell `{(a, a') : d_H(a, a') = d}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Shell {
    pub d: usize,
    pub pairs: u64,
    /// `Pr(d_H(A, A') = d)`.
    pub shell_mass: Rational,
    /// Average over the shell's pairs of `Pr_K(f(a) + K⊙a = f(a') + K⊙a')`.
    pub conditional_collision: Rational,
    /// Pairs whose key probability is neither 0 nor `q^{-d}`; always 0.
    pub irregular_pairs: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellDecomposition {
    pub shells: Vec<Shell>,
    /// `sum_d shell_mass * conditional_collision`.
    pub total: Rational,
}

/// Splits the joint collision probability by the Hamming distance of the
/// input pair. The per-pair key probability is found by counting, for each
/// coordinate, the keys `k_i` that satisfy that coordinate's equation.
pub fn shell_decomposition(f: &FunctionTable, budget: Budget) -> Result<ShellDecomposition> {
    let field = &*f.field;
    let (q, n, size) = (field.q() as usize, f.n, f.size);
    let s = size as u128;
    budget.check("shell decomposition", s * s * q as u128)?;
    let coords = input_coordinates(q, n, size);
    let full = (q as u128).pow(n as u32);

    let mut pairs = vec![0u64; n + 1];
    let mut key_hits = vec![0u128; n + 1];
    let mut irregular = vec![0u64; n + 1];
    for a in 0..size {
        let (xa, fa) = (&coords[a * n..(a + 1) * n], f.output_raw(a));
        for b in 0..size {
            let (xb, fb) = (&coords[b * n..(b + 1) * n], f.output_raw(b));
            let d = xa.iter().zip(xb).filter(|(u, v)| u != v).count();
            let mut keys = 1u128;
            for i in 0..n {
                let solutions = (0..q)
                    .filter(|&k| {
                        let lhs = field.add_idx(fa[i] as usize, field.mul_idx(k, xa[i] as usize));
                        let rhs = field.add_idx(fb[i] as usize, field.mul_idx(k, xb[i] as usize));
                        lhs == rhs
                    })
                    .count();
                keys *= solutions as u128;
                if keys == 0 {
                    break;
                }
            }
            if keys != 0 && keys != (q as u128).pow((n - d) as u32) {
                irregular[d] += 1;
            }
            pairs[d] += 1;
            key_hits[d] += keys;
        }
    }

    let shells: Vec<Shell> = (0..=n)
        .map(|d| Shell {
            d,
            pairs: pairs[d],
            shell_mass: Rational::new(pairs[d], s * s),
            conditional_collision: if pairs[d] == 0 {
                Rational::zero()
            } else {
                Rational::new(key_hits[d], pairs[d] as u128 * full)
            },
            irregular_pairs: irregular[d],
        })
        .collect();
    let total = shells
        .iter()
        .map(|sh| &sh.shell_mass * &sh.conditional_collision)
        .sum();
    Ok(ShellDecomposition { shells, total })
}

/// `x -> (x_1^2, ..., x_n^2)`.
pub fn square_family(field: Arc<FieldSpec>, n: usize) -> FunctionTable {
    assert!(n >= 1, "dimension must be positive");
    let ones = FieldVector::ones(n);
    let zeros = FieldVector::zeros(n);
    diagonal_quadratic(field, &ones, &zeros, &zeros).expect("unit leading coefficients")
}

/// `x -> (a_i x_i^2 + b_i x_i + c_i)_i` with every `a_i != 0`.
pub fn diagonal_quadratic(
    field: Arc<FieldSpec>,
    a: &FieldVector,
    b: &FieldVector,
    c: &FieldVector,
) -> Result<FunctionTable> {
    let n = a.len();
    for v in [b, c] {
        if v.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: v.len(),
            });
        }
    }
    if let Some(i) = a.entries().iter().position(|&e| e == Element::ZERO) {
        return Err(Error::ZeroQuadratic(i));
    }
    for v in [a, b, c] {
        for &e in v.entries() {
            field.element(e.index() as u64)?;
        }
    }
    let (a, b, c) = (a.entries(), b.entries(), c.entries());
    let f = field.clone();
    FunctionTable::from_fn(field, n, move |x| {
        let entries = x
            .entries()
            .iter()
            .enumerate()
            .map(|(i, &xi)| {
                let sq = f.mul(xi, xi).unwrap();
                let quad = f.mul(a[i], sq).unwrap();
                let lin = f.mul(b[i], xi).unwrap();
                f.add(f.add(quad, lin).unwrap(), c[i]).unwrap()
            })
            .collect();
        FieldVector::new(entries).unwrap()
    })
}

/// Exact averages predicted for the square map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Predictions {
    #[serde(with = "float15")]
    pub avg_shannon: f64,
    #[serde(with = "float15")]
    pub avg_h2: f64,
}

pub fn tightness_predictions(q: u32, n: usize) -> Predictions {
    let (qf, nf) = (q as f64, n as f64);
    let avg_shannon = nf * qf.log2() - nf * (1.0 - 1.0 / qf);
    let avg_h2 = if q.is_multiple_of(2) {
        avg_shannon
    } else {
        nf * qf.log2() - nf * (2.0 - 1.0 / qf).log2()
    };
    Predictions {
        avg_shannon,
        avg_h2,
    }
}

/// Fiber sizes `|X_{k,y}|` of the univariate map `x -> x^2 + kx`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreimageProfile {
    pub k: Element,
    /// Indexed by `y`.
    pub sizes: Vec<usize>,
}

pub fn preimage_profile(field: &FieldSpec, k: Element) -> Result<PreimageProfile> {
    let k = field.element(k.index() as u64)?;
    let mut sizes = vec![0usize; field.q() as usize];
    for x in field.elements() {
        let y = field.add(field.mul(x, x)?, field.mul(k, x)?)?;
        sizes[y.index()] += 1;
    }
    Ok(PreimageProfile { k, sizes })
}

/// `-k^2/4` for odd `q`; `None` in characteristic 2.
pub fn singleton_point(field: &FieldSpec, k: Element) -> Result<Option<Element>> {
    if field.p() == 2 {
        return Ok(None);
    }
    let four = field.integer(4);
    let y = field.mul(field.neg(field.mul(k, k)?)?, field.inv(four)?)?;
    Ok(Some(y))
}

impl PreimageProfile {
    /// Checks the fiber structure of `x^2 + kx`, returning a description of
    /// the first discrepancy.
    pub fn structure_violation(&self, field: &FieldSpec) -> Option<String> {
        let q = field.q() as usize;
        if self.sizes.len() != q || self.sizes.iter().sum::<usize>() != q {
            return Some("fiber sizes do not partition the field".into());
        }
        let count = |s: usize| self.sizes.iter().filter(|&&c| c == s).count();
        if field.p() == 2 {
            if self.k == Element::ZERO {
                (count(1) != q).then(|| "k = 0 is not a bijection".into())
            } else {
                self.sizes
                    .iter()
                    .any(|&c| c != 0 && c != 2)
                    .then(|| format!("k = {} has a fiber outside {{0, 2}}", self.k.index()))
            }
        } else {
            let y = singleton_point(field, self.k).ok().flatten()?;
            if count(1) != 1 || self.sizes[y.index()] != 1 {
                Some(format!("k = {}: singleton fiber not unique at -k^2/4", self.k.index()))
            } else if count(2) != (q - 1) / 2 {
                Some(format!("k = {}: expected {} doubleton fibers", self.k.index(), (q - 1) / 2))
            } else {
                None
            }
        }
    }
}

/// Sum of Hamming weights over GF(q)^n, by recurrence and by closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSums {
    pub recurrence: u128,
    pub closed_form: u128,
}

impl WeightSums {
    pub fn agree(&self) -> bool {
        self.recurrence == self.closed_form
    }
}

pub fn total_weight(q: u64, n: u32) -> WeightSums {
    assert!(q >= 2 && n >= 1);
    let q = q as u128;
    let mut w = q - 1;
    for j in 2..=n {
        w += (q - 1) * (w + q.pow(j - 1));
    }
    WeightSums {
        recurrence: w,
        closed_form: n as u128 * q.pow(n) - n as u128 * q.pow(n - 1),
    }
}

/// Image sizes of `g_k` for every key, with the univariate corollaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageStats {
    pub sizes: Vec<usize>,
    pub max: usize,
    pub average: Rational,
    /// `max_k |image| > q/2`; evaluated only for `n = 1`.
    pub max_exceeds_half: Option<bool>,
    /// `average >= q^2 / (2q - 1)`; evaluated only for `n = 1`.
    pub average_meets_bound: Option<bool>,
}

pub fn image_stats(f: &FunctionTable, budget: Budget) -> Result<ImageStats> {
    let size = f.size as u128;
    budget.check("image sizes", size * size)?;
    let mut sizes = Vec::with_capacity(f.size);
    scan_keys(f, |_, counts| sizes.push(counts.iter().filter(|&&c| c > 0).count()));
    let max = sizes.iter().copied().max().unwrap_or(0);
    let average = Rational::new(sizes.iter().sum::<usize>() as u64, f.size as u64);
    let q = f.field.q() as u64;
    let univariate = f.n == 1;
    Ok(ImageStats {
        max_exceeds_half: univariate.then(|| 2 * max as u64 > q),
        average_meets_bound: univariate.then(|| average >= Rational::new(q * q, 2 * q - 1)),
        sizes,
        max,
        average,
    })
}

/// Reads a single coordinate of a table as its own univariate distribution counts.
pub fn coordinate_counts(f: &FunctionTable, i: usize) -> Vec<u64> {
    let mut counts = vec![0u64; f.field.q() as usize];
    for x in 0..f.size {
        counts[f.output_raw(x)[i] as usize] += 1;
    }
    counts
}
