//! The metamatrix `𝔐(n)`, whose `(p, q)` entry counts `p × q` contingency
//! matrices of weight `n`, together with its factorizations through Pascal,
//! Vandermonde and Stirling matrices, its determinant, total positivity and
//! the resulting closed forms for `𝔪(n) = Σ 𝔪_pq(n)`.
//!
//! Indices `p, q, i, j, k` are 1-based as in the usual statement of these
//! identities; matrices built here are `n × n` with row `p` stored at `p - 1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::capacity::Guard;
use crate::contingency::count_cm;
use crate::error::{domain, Result};
use crate::linalg::{det_bareiss, QMatrix};

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Coefficients of the rising factorial `x (x+1) ⋯ (x+n-1)`, index = power of `x`.
pub fn rising_factorial_coefficients(n: u64) -> Vec<BigInt> {
    let mut c = vec![BigInt::one()];
    for m in 0..n {
        // multiply by (x + m)
        let mut next = vec![BigInt::zero(); c.len() + 1];
        for (k, a) in c.iter().enumerate() {
            next[k + 1] += a;
            next[k] += a * m;
        }
        c = next;
    }
    c
}

/// Unsigned Stirling number of the first kind `c(n, k)`.
pub fn stirling_first(n: u64, k: u64) -> BigInt {
    rising_factorial_coefficients(n)
        .into_iter()
        .nth(k as usize)
        .unwrap_or_default()
}

/// Stirling number of the second kind `S(k, p)`, from
/// `p! S(k, p) = Σ_i (-1)^{p-i} C(p, i) i^k`.
pub fn stirling_second(k: u64, p: u64) -> BigInt {
    let mut acc = BigInt::zero();
    for i in 0..=p {
        let term = binomial(p, i) * BigInt::from(i).pow(k as u32);
        if (p - i).is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc / factorial(p)
}

/// Fubini (ordered Bell) number `F(k) = Σ_p p! S(k, p)`.
pub fn fubini(k: u64) -> BigInt {
    (0..=k).map(|p| factorial(p) * stirling_second(k, p)).sum()
}

/// Number of `p × q` nonnegative integer matrices of weight `n`, zero rows and
/// columns allowed: `C(n + pq - 1, n)`.
pub fn generalized_count(n: u64, p: u64, q: u64) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    binomial(n + p * q - 1, n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Counting enumerated contingency matrices.
    Enumeration,
    /// Alternating sum over generalized counts.
    InclusionExclusion,
}

/// `𝔐(n)`: entry `(p, q)` is the number of `p × q` contingency matrices of weight `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MetaMatrix {
    pub n: usize,
    #[serde(serialize_with = "crate::json::bigint_matrix")]
    entries: Vec<Vec<BigInt>>,
}

impl MetaMatrix {
    pub fn compute(n: usize, method: Method) -> Result<Self> {
        if n == 0 {
            return domain("metamatrix needs n >= 1");
        }
        let entries = match method {
            Method::Enumeration => {
                Guard::Enumeration.check(n)?;
                let cells: Vec<(usize, usize)> = (1..=n).flat_map(|p| (1..=n).map(move |q| (p, q))).collect();
                let counts = cells
                    .par_iter()
                    .map(|&(p, q)| count_cm(n, p, q).map(BigInt::from))
                    .collect::<Result<Vec<_>>>()?;
                counts.chunks(n).map(<[BigInt]>::to_vec).collect()
            }
            Method::InclusionExclusion => {
                Guard::Rational.check(n)?;
                let n64 = n as u64;
                (1..=n64)
                    .map(|p| (1..=n64).map(|q| inclusion_exclusion_entry(n64, p, q)).collect())
                    .collect()
            }
        };
        Ok(MetaMatrix { n, entries })
    }

    /// Entry `𝔪_pq(n)`, 1-based.
    pub fn get(&self, p: usize, q: usize) -> &BigInt {
        &self.entries[p - 1][q - 1]
    }

    pub fn entries(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    /// `𝔪(n)`.
    pub fn total(&self) -> BigInt {
        self.entries.iter().flatten().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|p| (0..p).all(|q| self.entries[p][q] == self.entries[q][p]))
    }

    pub fn to_qmatrix(&self) -> QMatrix {
        QMatrix::from_integers(&self.entries)
    }

    /// One line per `p`, entries as decimal integers.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.entries {
            let line: Vec<String> = row.iter().map(ToString::to_string).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// `𝔪_pq(n) = Σ_{i ≤ p, j ≤ q} (-1)^{i+j+p+q} C(p,i) C(q,j) C(n+ij-1, n)`.
pub fn inclusion_exclusion_entry(n: u64, p: u64, q: u64) -> BigInt {
    let mut acc = BigInt::zero();
    for i in 1..=p {
        for j in 1..=q {
            let term = binomial(p, i) * binomial(q, j) * generalized_count(n, i, j);
            if (i + j + p + q).is_multiple_of(2) {
                acc += term;
            } else {
                acc -= term;
            }
        }
    }
    acc
}

fn q_int(x: BigInt) -> BigRational {
    BigRational::from_integer(x)
}

fn sign(e: u64) -> BigInt {
    if e.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// `P(n)_pi = C(p, i)`.
pub fn pascal(n: usize) -> QMatrix {
    QMatrix::from_fn(n, n, |p, i| q_int(binomial(p as u64 + 1, i as u64 + 1)))
}

/// `P_*(n)_pi = (-1)^{p-i} C(p, i)`, the inverse of [`pascal`].
pub fn pascal_inverse(n: usize) -> QMatrix {
    QMatrix::from_fn(n, n, |p, i| {
        let b = binomial(p as u64 + 1, i as u64 + 1);
        q_int(if p >= i { sign((p - i) as u64) * b } else { b })
    })
}

/// `V(n)_ik = i^k`.
pub fn vandermonde(n: usize) -> QMatrix {
    QMatrix::from_fn(n, n, |i, k| q_int(BigInt::from(i + 1).pow(k as u32 + 1)))
}

/// `B(n)_pq = C(n + pq - 1, n)`.
pub fn binomial_matrix(n: usize) -> QMatrix {
    let w = n as u64;
    QMatrix::from_fn(n, n, |p, q| q_int(generalized_count(w, p as u64 + 1, q as u64 + 1)))
}

/// `Q(n) = P(n)^{-1} V(n)`.
pub fn q_matrix(n: usize) -> QMatrix {
    &pascal_inverse(n) * &vandermonde(n)
}

/// `S(n)_pk = S(k, p)`, unipotent upper triangular.
pub fn stirling_matrix(n: usize) -> QMatrix {
    QMatrix::from_fn(n, n, |p, k| q_int(stirling_second(k as u64 + 1, p as u64 + 1)))
}

/// `S_*(n)_pk = p! S(k, p) / k!`.
pub fn stirling_scaled(n: usize) -> QMatrix {
    QMatrix::from_fn(n, n, |p, k| {
        let (p, k) = (p as u64 + 1, k as u64 + 1);
        BigRational::new(factorial(p) * stirling_second(k, p), factorial(k))
    })
}

/// `diag(c(n, 1), …, c(n, n))`.
fn stirling_first_diagonal(n: usize) -> Vec<BigRational> {
    rising_factorial_coefficients(n as u64)
        .into_iter()
        .skip(1)
        .map(q_int)
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
}

impl IdentityCheck {
    fn new(name: &'static str, pass: bool) -> Self {
        IdentityCheck { name, pass, detail: None }
    }

    fn with(name: &'static str, pass: bool, detail: serde_json::Value) -> Self {
        IdentityCheck {
            name,
            pass,
            detail: Some(detail),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub n: usize,
    /// How `𝔐(n)` itself was obtained.
    pub method: Method,
    pub metamatrix: MetaMatrix,
    pub checks: Vec<IdentityCheck>,
    pub pass: bool,
}

impl IdentityReport {
    pub fn check(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Verifies every matrix identity satisfied by `𝔐(n)`. The metamatrix is
/// enumerated when `n` is within the enumeration guard, and obtained by
/// inclusion–exclusion otherwise (which is then not independently checked).
pub fn verify_factorizations(n: usize) -> Result<IdentityReport> {
    Guard::Rational.check(n)?;
    let (method, m) = if n <= Guard::Enumeration.max() {
        (Method::Enumeration, MetaMatrix::compute(n, Method::Enumeration)?)
    } else {
        (Method::InclusionExclusion, MetaMatrix::compute(n, Method::InclusionExclusion)?)
    };
    let w = n as u64;
    let mq = m.to_qmatrix();
    let p = pascal(n);
    let ps = pascal_inverse(n);
    let v = vandermonde(n);
    let b = binomial_matrix(n);
    let q = q_matrix(n);
    let s = stirling_matrix(n);
    let sstar = stirling_scaled(n);
    let inv_nfact = BigRational::new(BigInt::one(), factorial(w));
    let c = stirling_first_diagonal(n);
    let mut checks = Vec::new();

    checks.push(IdentityCheck::new("symmetry", m.is_symmetric()));
    checks.push(IdentityCheck::new(
        "corner_entries",
        m.get(1, 1).is_one() && *m.get(n, n) == factorial(w),
    ));

    let deletion = (1..=w).all(|pp| {
        (1..=w).all(|qq| {
            let mut acc = BigInt::zero();
            for i in 1..=pp {
                for j in 1..=qq {
                    acc += binomial(pp, i) * binomial(qq, j) * m.get(i as usize, j as usize);
                }
            }
            acc == generalized_count(w, pp, qq)
        })
    });
    checks.push(IdentityCheck::new("generalized_count_sum", deletion));

    if method == Method::Enumeration {
        let ie = MetaMatrix::compute(n, Method::InclusionExclusion)?;
        checks.push(IdentityCheck::new("inclusion_exclusion", ie == m));
    }

    checks.push(IdentityCheck::new("pascal_congruence", &(&p * &mq) * &p.transpose() == b));
    checks.push(IdentityCheck::new("pascal_inverse", &p * &ps == QMatrix::identity(n)));

    let diag_c = QMatrix::diagonal(c.iter().cloned());
    let vandermonde_b = (&(&v * &diag_c) * &v.transpose()).scale(&inv_nfact);
    checks.push(IdentityCheck::new("vandermonde_binomial", vandermonde_b == b));
    let vandermonde_m = (&(&q * &diag_c) * &q.transpose()).scale(&inv_nfact);
    checks.push(IdentityCheck::new("vandermonde_gram", vandermonde_m == mq));

    let q_entries = (0..n).all(|pp| {
        (0..n).all(|k| q[(pp, k)] == q_int(factorial(pp as u64 + 1) * stirling_second(k as u64 + 1, pp as u64 + 1)))
    });
    let q_diag = (0..n).all(|k| q[(k, k)] == q_int(factorial(k as u64 + 1)));
    checks.push(IdentityCheck::with(
        "q_stirling",
        q.is_upper_triangular() && q_entries && q_diag,
        serde_json::json!({
            "upper_triangular": q.is_upper_triangular(),
            "entries": q_entries,
            "diagonal_factorials": q_diag,
        }),
    ));

    let fact_diag = QMatrix::diagonal((1..=w).map(|k| q_int(factorial(k))));
    let unipotent = s.is_upper_triangular() && (0..n).all(|k| s[(k, k)].is_one());
    checks.push(IdentityCheck::new(
        "vandermonde_gauss",
        unipotent && &(&p * &fact_diag) * &s == v,
    ));

    let weights = QMatrix::diagonal(
        c.iter()
            .enumerate()
            .map(|(k, ck)| ck * q_int(factorial(k as u64 + 1).pow(2))),
    );
    let gauss_m = (&(&sstar * &weights) * &sstar.transpose()).scale(&inv_nfact);
    checks.push(IdentityCheck::new("stirling_gram", gauss_m == mq));

    let det = det_metamatrix(n)?;
    checks.push(IdentityCheck::with(
        "determinant",
        det.pass(),
        serde_json::to_value(&det).expect("serializable"),
    ));

    let totals = TotalCountReport::from_metamatrix(&m);
    checks.push(IdentityCheck::with(
        "fubini_total",
        totals.fubini == totals.direct,
        serde_json::json!({ "direct": crate::json::number(&totals.direct), "formula": crate::json::number(&totals.fubini) }),
    ));
    checks.push(IdentityCheck::with(
        "alternating_total",
        totals.alternating == totals.direct,
        serde_json::to_value(&totals).expect("serializable"),
    ));

    let pass = checks.iter().all(|c| c.pass);
    Ok(IdentityReport {
        n,
        method,
        metamatrix: m,
        checks,
        pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DeterminantReport {
    pub n: usize,
    /// `n! Π_{i<n} c(n,i) / Π_{i<n} C(n,i)`.
    #[serde(serialize_with = "crate::json::rational")]
    pub closed_form: BigRational,
    pub integral: bool,
    /// Bareiss determinant of the metamatrix, when within the direct guard.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt_bigint")]
    pub direct: Option<BigInt>,
}

fn opt_bigint<S: serde::Serializer>(x: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => crate::json::bigint(v, s),
        None => s.serialize_none(),
    }
}

impl DeterminantReport {
    pub fn pass(&self) -> bool {
        self.integral
            && self
                .direct
                .as_ref()
                .is_none_or(|d| BigRational::from_integer(d.clone()) == self.closed_form)
    }
}

/// Closed-form determinant of `𝔐(n)`.
pub fn det_closed_form(n: usize) -> BigRational {
    let w = n as u64;
    let c = rising_factorial_coefficients(w);
    let num = (1..w).fold(factorial(w), |acc, i| acc * &c[i as usize]);
    let den = (1..w).fold(BigInt::one(), |acc, i| acc * binomial(w, i));
    BigRational::new(num, den)
}

/// Closed form and, for `n` within [`Guard::DirectDeterminant`], the exact
/// determinant of the metamatrix computed by inclusion–exclusion.
pub fn det_metamatrix(n: usize) -> Result<DeterminantReport> {
    Guard::Rational.check(n)?;
    let closed_form = det_closed_form(n);
    let direct = if n <= Guard::DirectDeterminant.max() {
        let m = MetaMatrix::compute(n, Method::InclusionExclusion)?;
        Some(det_bareiss(m.entries()))
    } else {
        None
    };
    Ok(DeterminantReport {
        n,
        integral: closed_form.is_integer(),
        closed_form,
        direct,
    })
}

/// A non-positive minor, rows and columns 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinorWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    #[serde(serialize_with = "crate::json::rational")]
    pub value: BigRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct PositivityReport {
    pub size: usize,
    pub minors_checked: u64,
    pub totally_positive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<MinorWitness>,
}

/// Scans every square minor of `a`, smallest size first and row/column
/// subsets in lexicographic order, stopping at the first one that is not
/// strictly positive.
pub fn total_positivity(a: &QMatrix) -> Result<PositivityReport> {
    if a.rows() != a.cols() {
        return domain("total positivity scan needs a square matrix");
    }
    let n = a.rows();
    Guard::TotalPositivity.check(n)?;
    // clearing denominators row by row with positive factors keeps every minor's sign
    let int_rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let l = (0..n).fold(BigInt::one(), |l, j| num_integer::lcm(l, a[(i, j)].denom().clone()));
            (0..n).map(|j| (&a[(i, j)] * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    let mut checked = 0u64;
    for k in 1..=n {
        let subsets = subsets(n, k);
        for rows in &subsets {
            // minors sharing a row set are independent; scan their columns in parallel
            let bad = subsets.par_iter().find_first(|cols| {
                let sub: Vec<Vec<BigInt>> = rows
                    .iter()
                    .map(|&r| cols.iter().map(|&c| int_rows[r][c].clone()).collect())
                    .collect();
                !det_bareiss(&sub).is_positive()
            });
            checked += subsets.len() as u64;
            if let Some(cols) = bad {
                let sub = QMatrix::from_fn(k, k, |i, j| a[(rows[i], cols[j])].clone());
                return Ok(PositivityReport {
                    size: n,
                    minors_checked: checked,
                    totally_positive: false,
                    witness: Some(MinorWitness {
                        rows: rows.iter().map(|r| r + 1).collect(),
                        cols: cols.iter().map(|c| c + 1).collect(),
                        value: crate::linalg::det_rational(&sub),
                    }),
                });
            }
        }
    }
    Ok(PositivityReport {
        size: n,
        minors_checked: checked,
        totally_positive: true,
        witness: None,
    })
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=n - (k - cur.len()) {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// `𝔪(n) = (1/n!) Σ_k c(n,k) F(k)^2`.
pub fn total_count(n: usize) -> BigInt {
    let w = n as u64;
    let c = rising_factorial_coefficients(w);
    let s: BigInt = (1..=w).map(|k| &c[k as usize] * fubini(k).pow(2)).sum();
    s / factorial(w)
}

/// `Σ_{i,j} (-1)^{i+j} C(n+1,i+1) C(n+1,j+1) C(n+ij-1,n)`, the alternating
/// double-sum closed form stated for `𝔪(n)`. It evaluates to
/// `Σ_pq (-1)^{p+q} 𝔪_pq(n) = 1`, not to `𝔪(n)`.
pub fn alternating_total(n: usize) -> BigInt {
    let w = n as u64;
    let mut acc = BigInt::zero();
    for i in 1..=w {
        for j in 1..=w {
            acc += sign(i + j) * binomial(w + 1, i + 1) * binomial(w + 1, j + 1) * generalized_count(w, i, j);
        }
    }
    acc
}

/// `Σ_{i,j} a_i a_j C(n+ij-1,n)` with `a_i = Σ_{p=i}^{n} (-1)^{p-i} C(p,i)`,
/// the sum of the inclusion–exclusion entries over all `p, q`.
pub fn corrected_alternating_total(n: usize) -> BigInt {
    let w = n as u64;
    let a: Vec<BigInt> = (1..=w)
        .map(|i| (i..=w).map(|p| sign(p - i) * binomial(p, i)).sum())
        .collect();
    let mut acc = BigInt::zero();
    for i in 1..=w {
        for j in 1..=w {
            acc += &a[i as usize - 1] * &a[j as usize - 1] * generalized_count(w, i, j);
        }
    }
    acc
}

#[derive(Clone, Debug, Serialize)]
pub struct TotalCountReport {
    pub n: usize,
    /// `Σ_pq 𝔪_pq(n)` from the supplied metamatrix.
    #[serde(serialize_with = "crate::json::bigint")]
    pub direct: BigInt,
    #[serde(serialize_with = "crate::json::bigint")]
    pub fubini: BigInt,
    #[serde(serialize_with = "crate::json::bigint")]
    pub alternating: BigInt,
    #[serde(serialize_with = "crate::json::bigint")]
    pub corrected_alternating: BigInt,
    /// `Σ_pq (-1)^{p+q} 𝔪_pq(n)`, which is what [`alternating_total`] evaluates.
    #[serde(serialize_with = "crate::json::bigint")]
    pub signed_total: BigInt,
}

impl TotalCountReport {
    pub fn from_metamatrix(m: &MetaMatrix) -> Self {
        let n = m.n;
        let mut signed_total = BigInt::zero();
        for p in 1..=n {
            for q in 1..=n {
                signed_total += sign((p + q) as u64) * m.get(p, q);
            }
        }
        TotalCountReport {
            n,
            direct: m.total(),
            fubini: total_count(n),
            alternating: alternating_total(n),
            corrected_alternating: corrected_alternating_total(n),
            signed_total,
        }
    }
}
