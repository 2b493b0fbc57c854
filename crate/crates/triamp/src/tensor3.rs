//! Dense 3-way tensor arithmetic: construction, inner products, flattenings,
//! outer products, mode products, and seeded random sampling on spheres.
//!
//! Storage layout: the mode-1 index varies fastest (column-major), so entry
//! (i, j, k) of a p×q×r tensor lives at `data[i + p*(j + q*k)]`. The mode-k
//! unfolding keeps the remaining modes in increasing order with the earlier
//! mode fastest; with this convention the mode-1 flattening is a plain
//! reinterpretation of the buffer and `fold` inverts `flatten` bit-exactly.

use std::io::{BufRead, Read, Write};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Dense column-major matrix. Used for tensor flattenings and factor matrices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Invalid("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "matrix data length {} does not match {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i + self.rows * j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i + self.rows * j] = v;
    }

    /// Column j as a contiguous slice (columns are contiguous in this layout).
    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[self.rows * j..self.rows * (j + 1)]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[self.rows * j..self.rows * (j + 1)]
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.data[j + self.cols * i] = self.data[i + self.rows * j];
            }
        }
        out
    }

    pub fn frobenius(&self) -> f64 {
        norm(&self.data)
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// self * other.
    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "matmul: {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            let out_col = &mut out.data[self.rows * j..self.rows * (j + 1)];
            for k in 0..self.cols {
                let b = other.data[k + other.rows * j];
                if b != 0.0 {
                    let a_col = &self.data[self.rows * k..self.rows * (k + 1)];
                    for (o, a) in out_col.iter_mut().zip(a_col) {
                        *o += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// self * selfᵀ (rows×rows Gram matrix).
    pub fn gram_rows(&self) -> Matrix {
        let m = self.rows;
        let mut out = Matrix::zeros(m, m);
        for c in 0..self.cols {
            let col = self.col(c);
            for j in 0..m {
                let cj = col[j];
                if cj != 0.0 {
                    let out_col = &mut out.data[m * j..m * (j + 1)];
                    for i in 0..m {
                        out_col[i] += col[i] * cj;
                    }
                }
            }
        }
        out
    }

    /// selfᵀ * self (cols×cols Gram matrix).
    pub fn gram_cols(&self) -> Matrix {
        let n = self.cols;
        let mut out = Matrix::zeros(n, n);
        for j in 0..n {
            for i in 0..=j {
                let v = dot(self.col(i), self.col(j));
                out.set(i, j, v);
                out.set(j, i, v);
            }
        }
        out
    }

    /// self * x for a column vector x.
    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::Shape(format!(
                "mul_vec: {}x{} * vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let mut y = vec![0.0; self.rows];
        for (j, &xj) in x.iter().enumerate() {
            if xj != 0.0 {
                for (yi, a) in y.iter_mut().zip(self.col(j)) {
                    *yi += a * xj;
                }
            }
        }
        Ok(y)
    }

    /// selfᵀ * x for a column vector x.
    pub fn tr_mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.rows {
            return Err(Error::Shape(format!(
                "tr_mul_vec: {}x{} transposed * vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.cols).map(|j| dot(self.col(j), x)).collect())
    }
}

/// Dense real 3-way tensor in R^{p×q×r}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tensor3 {
    dims: (usize, usize, usize),
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn new(dims: (usize, usize, usize), data: Vec<f64>) -> Result<Self> {
        let (p, q, r) = dims;
        if p == 0 || q == 0 || r == 0 {
            return Err(Error::Invalid("tensor dimensions must be positive".into()));
        }
        if data.len() != p * q * r {
            return Err(Error::Shape(format!(
                "tensor data length {} does not match {}x{}x{}",
                data.len(),
                p,
                q,
                r
            )));
        }
        Ok(Self { dims, data })
    }

    pub fn zeros(dims: (usize, usize, usize)) -> Result<Self> {
        let (p, q, r) = dims;
        if p == 0 || q == 0 || r == 0 {
            return Err(Error::Invalid("tensor dimensions must be positive".into()));
        }
        Ok(Self {
            dims,
            data: vec![0.0; p * q * r],
        })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        let (p, q, _) = self.dims;
        i + p * (j + q * k)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[self.index(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let idx = self.index(i, j, k);
        self.data[idx] = v;
    }

    /// Entrywise inner product Σ t_ijk s_ijk.
    pub fn inner(&self, other: &Tensor3) -> Result<f64> {
        if self.dims != other.dims {
            return Err(Error::Shape(format!(
                "inner: {:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        Ok(dot(&self.data, &other.data))
    }

    /// Frobenius norm, the square root of the sum of squared entries.
    pub fn frobenius(&self) -> f64 {
        norm(&self.data)
    }

    pub fn scale(&self, s: f64) -> Tensor3 {
        Tensor3 {
            dims: self.dims,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// Mode-k unfolding: mode-k fibers become rows. Column order puts the
    /// remaining modes in increasing order, earlier mode fastest:
    /// mode 1 → p×(qr) with column j+q·k, mode 2 → q×(pr) with column i+p·k,
    /// mode 3 → r×(pq) with column i+p·j.
    pub fn flatten(&self, mode: usize) -> Result<Matrix> {
        let (p, q, r) = self.dims;
        match mode {
            1 => Matrix::new(p, q * r, self.data.clone()),
            2 => {
                let mut m = Matrix::zeros(q, p * r);
                for k in 0..r {
                    for j in 0..q {
                        for i in 0..p {
                            m.data[j + q * (i + p * k)] = self.data[i + p * (j + q * k)];
                        }
                    }
                }
                Ok(m)
            }
            3 => {
                let mut m = Matrix::zeros(r, p * q);
                for k in 0..r {
                    for j in 0..q {
                        for i in 0..p {
                            m.data[k + r * (i + p * j)] = self.data[i + p * (j + q * k)];
                        }
                    }
                }
                Ok(m)
            }
            _ => Err(Error::Invalid(format!("flatten: mode {mode} not in 1..=3"))),
        }
    }

    /// Multiply mode `mode` by the matrix `m` (m.cols must equal that mode's
    /// dimension); the result replaces it by m.rows.
    pub fn mode_multiply(&self, m: &Matrix, mode: usize) -> Result<Tensor3> {
        let (p, q, r) = self.dims;
        let check = |need: usize| -> Result<()> {
            if m.cols() != need {
                Err(Error::Shape(format!(
                    "mode_multiply: matrix has {} cols, mode {} has dimension {}",
                    m.cols(),
                    mode,
                    need
                )))
            } else {
                Ok(())
            }
        };
        match mode {
            1 => {
                check(p)?;
                let np = m.rows();
                let mut out = Tensor3::zeros((np, q, r))?;
                for k in 0..r {
                    for j in 0..q {
                        let src = &self.data[p * (j + q * k)..p * (j + q * k) + p];
                        let dst = &mut out.data[np * (j + q * k)..np * (j + q * k) + np];
                        for (i, &v) in src.iter().enumerate() {
                            if v != 0.0 {
                                for (d, a) in dst.iter_mut().zip(m.col(i)) {
                                    *d += a * v;
                                }
                            }
                        }
                    }
                }
                Ok(out)
            }
            2 => {
                check(q)?;
                let nq = m.rows();
                let mut out = Tensor3::zeros((p, nq, r))?;
                for k in 0..r {
                    for j in 0..q {
                        let src = &self.data[p * (j + q * k)..p * (j + q * k) + p];
                        for jn in 0..nq {
                            let a = m.get(jn, j);
                            if a != 0.0 {
                                let dst =
                                    &mut out.data[p * (jn + nq * k)..p * (jn + nq * k) + p];
                                for (d, &v) in dst.iter_mut().zip(src) {
                                    *d += a * v;
                                }
                            }
                        }
                    }
                }
                Ok(out)
            }
            3 => {
                check(r)?;
                let nr = m.rows();
                let mut out = Tensor3::zeros((p, q, nr))?;
                for k in 0..r {
                    for kn in 0..nr {
                        let a = m.get(kn, k);
                        if a != 0.0 {
                            for j in 0..q {
                                let src = &self.data[p * (j + q * k)..p * (j + q * k) + p];
                                let dst =
                                    &mut out.data[p * (j + q * kn)..p * (j + q * kn) + p];
                                for (d, &v) in dst.iter_mut().zip(src) {
                                    *d += a * v;
                                }
                            }
                        }
                    }
                }
                Ok(out)
            }
            _ => Err(Error::Invalid(format!(
                "mode_multiply: mode {mode} not in 1..=3"
            ))),
        }
    }

    /// Reorder modes: result axis a is input axis `axes[a]`
    /// (numpy-transpose semantics; `axes` must be a permutation of 0..3).
    pub fn permute_modes(&self, axes: [usize; 3]) -> Result<Tensor3> {
        let mut seen = [false; 3];
        for &a in &axes {
            if a > 2 || seen[a] {
                return Err(Error::Invalid(format!(
                    "permute_modes: {axes:?} is not a permutation of 0..3"
                )));
            }
            seen[a] = true;
        }
        let d = [self.dims.0, self.dims.1, self.dims.2];
        let nd = (d[axes[0]], d[axes[1]], d[axes[2]]);
        let mut out = Tensor3::zeros(nd)?;
        let mut idx = [0usize; 3];
        for k in 0..d[2] {
            for j in 0..d[1] {
                for i in 0..d[0] {
                    idx[0] = i;
                    idx[1] = j;
                    idx[2] = k;
                    let v = self.data[i + d[0] * (j + d[1] * k)];
                    out.set(idx[axes[0]], idx[axes[1]], idx[axes[2]], v);
                }
            }
        }
        Ok(out)
    }

    /// Inner product with the rank-1 tensor a⊗b⊗c, without materializing it.
    pub fn rank1_inner(&self, a: &[f64], b: &[f64], c: &[f64]) -> Result<f64> {
        let (p, q, r) = self.dims;
        if a.len() != p || b.len() != q || c.len() != r {
            return Err(Error::Shape(format!(
                "rank1_inner: vectors {}/{}/{} vs dims {:?}",
                a.len(),
                b.len(),
                c.len(),
                self.dims
            )));
        }
        let mut total = 0.0;
        for k in 0..r {
            if c[k] == 0.0 {
                continue;
            }
            let mut acc = 0.0;
            for j in 0..q {
                if b[j] != 0.0 {
                    let fib = &self.data[p * (j + q * k)..p * (j + q * k) + p];
                    acc += b[j] * dot(fib, a);
                }
            }
            total += c[k] * acc;
        }
        Ok(total)
    }

    /// Text format: a header line "p q r" followed by p·q·r whitespace
    /// separated decimals in storage order.
    pub fn write_text<W: Write>(&self, w: &mut W) -> Result<()> {
        let (p, q, r) = self.dims;
        writeln!(w, "{} {} {}", p, q, r)?;
        for chunk in self.data.chunks(8) {
            let line: Vec<String> = chunk.iter().map(|v| format!("{}", v)).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(r: &mut R) -> Result<Tensor3> {
        let mut text = String::new();
        r.read_to_string(&mut text)?;
        let mut tokens = text.split_whitespace();
        let mut dim = |name: &str| -> Result<usize> {
            tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("missing dimension {name}")))?
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad dimension {name}: {e}")))
        };
        let p = dim("p")?;
        let q = dim("q")?;
        let r_ = dim("r")?;
        let n = p
            .checked_mul(q)
            .and_then(|x| x.checked_mul(r_))
            .ok_or_else(|| Error::Parse("dimension overflow".into()))?;
        let mut data = Vec::with_capacity(n);
        for tok in tokens {
            let v: f64 = tok
                .parse()
                .map_err(|e| Error::Parse(format!("bad entry {tok:?}: {e}")))?;
            data.push(v);
        }
        if data.len() != n {
            return Err(Error::Parse(format!(
                "expected {} entries, found {}",
                n,
                data.len()
            )));
        }
        Tensor3::new((p, q, r_), data)
    }

    /// Binary format: three little-endian u64 dims, then p·q·r little-endian
    /// f64 entries in storage order.
    pub fn write_binary<W: Write>(&self, w: &mut W) -> Result<()> {
        let (p, q, r) = self.dims;
        for d in [p, q, r] {
            w.write_all(&(d as u64).to_le_bytes())?;
        }
        for v in &self.data {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(r: &mut R) -> Result<Tensor3> {
        let mut buf8 = [0u8; 8];
        let mut dims = [0usize; 3];
        for d in dims.iter_mut() {
            r.read_exact(&mut buf8)?;
            *d = u64::from_le_bytes(buf8) as usize;
        }
        let n = dims[0]
            .checked_mul(dims[1])
            .and_then(|x| x.checked_mul(dims[2]))
            .ok_or_else(|| Error::Parse("dimension overflow".into()))?;
        let mut data = Vec::with_capacity(n);
        for _ in 0..n {
            r.read_exact(&mut buf8)?;
            data.push(f64::from_le_bytes(buf8));
        }
        Tensor3::new((dims[0], dims[1], dims[2]), data)
    }
}

/// Outer product a⊗b⊗c: entry (i,j,k) = a_i b_j c_k.
pub fn outer3(a: &[f64], b: &[f64], c: &[f64]) -> Result<Tensor3> {
    if a.is_empty() || b.is_empty() || c.is_empty() {
        return Err(Error::Invalid("outer3: empty factor".into()));
    }
    let (p, q, r) = (a.len(), b.len(), c.len());
    let mut data = Vec::with_capacity(p * q * r);
    for &ck in c {
        for &bj in b {
            let s = bj * ck;
            for &ai in a {
                data.push(ai * s);
            }
        }
    }
    Tensor3::new((p, q, r), data)
}

/// Inverse of `flatten`: fold a mode-k unfolding back into a tensor.
pub fn fold(m: &Matrix, mode: usize, dims: (usize, usize, usize)) -> Result<Tensor3> {
    let (p, q, r) = dims;
    let expect = |rows: usize, cols: usize| -> Result<()> {
        if m.rows() != rows || m.cols() != cols {
            Err(Error::Shape(format!(
                "fold: matrix is {}x{}, mode {} of {:?} needs {}x{}",
                m.rows(),
                m.cols(),
                mode,
                dims,
                rows,
                cols
            )))
        } else {
            Ok(())
        }
    };
    match mode {
        1 => {
            expect(p, q * r)?;
            Tensor3::new(dims, m.data().to_vec())
        }
        2 => {
            expect(q, p * r)?;
            let mut t = Tensor3::zeros(dims)?;
            for k in 0..r {
                for j in 0..q {
                    for i in 0..p {
                        t.data[i + p * (j + q * k)] = m.data()[j + q * (i + p * k)];
                    }
                }
            }
            Ok(t)
        }
        3 => {
            expect(r, p * q)?;
            let mut t = Tensor3::zeros(dims)?;
            for k in 0..r {
                for j in 0..q {
                    for i in 0..p {
                        t.data[i + p * (j + q * k)] = m.data()[k + r * (i + p * j)];
                    }
                }
            }
            Ok(t)
        }
        _ => Err(Error::Invalid(format!("fold: mode {mode} not in 1..=3"))),
    }
}

/// Entrywise linear combination Σ cᵢ Tᵢ.
pub fn linear_combine(terms: &[(f64, &Tensor3)]) -> Result<Tensor3> {
    let (first_coeff, first) = terms
        .first()
        .ok_or_else(|| Error::Invalid("linear_combine: no terms".into()))?;
    let mut out = first.scale(*first_coeff);
    for (coeff, t) in &terms[1..] {
        if t.dims != out.dims {
            return Err(Error::Shape(format!(
                "linear_combine: {:?} vs {:?}",
                t.dims, out.dims
            )));
        }
        for (o, v) in out.data.iter_mut().zip(&t.data) {
            *o += coeff * v;
        }
    }
    Ok(out)
}

/// A weighted rank-1 term λ·a⊗b⊗c with unit factor vectors.
///
/// Vectors are normalized on construction and sign-fixed so that the first
/// entry of nonnegligible magnitude is positive; norms and flipped signs are
/// folded into the weight.
#[derive(Debug, Clone, Serialize)]
pub struct RankOneTriple {
    weight: f64,
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
}

pub(crate) fn sign_fix(v: &mut [f64]) -> f64 {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let lead = v.iter().find(|x| x.abs() > 1e-12 * max.max(1e-300));
    if let Some(&l) = lead {
        if l < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
            return -1.0;
        }
    }
    1.0
}

impl RankOneTriple {
    pub fn new(weight: f64, a: Vec<f64>, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        let mut weight = weight;
        let mut unit = |mut v: Vec<f64>, name: &str| -> Result<Vec<f64>> {
            let n = norm(&v);
            if n == 0.0 || !n.is_finite() {
                return Err(Error::Invalid(format!(
                    "rank-one factor {name} must be nonzero and finite"
                )));
            }
            for x in v.iter_mut() {
                *x /= n;
            }
            weight *= n * sign_fix(&mut v);
            Ok(v)
        };
        let a = unit(a, "a")?;
        let b = unit(b, "b")?;
        let c = unit(c, "c")?;
        Ok(Self { weight, a, b, c })
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.a.len(), self.b.len(), self.c.len())
    }

    pub fn to_tensor(&self) -> Tensor3 {
        outer3(&self.a, &self.b, &self.c)
            .expect("factors are nonempty")
            .scale(self.weight)
    }
}

/// Unit vector drawn uniformly from the sphere (standard Gaussian, normalized).
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    assert!(n > 0, "random_unit_vector: empty dimension");
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let nv = norm(&v);
        if nv > 1e-12 {
            for x in v.iter_mut() {
                *x /= nv;
            }
            return v;
        }
    }
}

/// Tensor drawn uniformly from the unit sphere of R^{p·q·r}.
pub fn random_unit_tensor<R: Rng + ?Sized>(
    dims: (usize, usize, usize),
    rng: &mut R,
) -> Result<Tensor3> {
    let (p, q, r) = dims;
    if p == 0 || q == 0 || r == 0 {
        return Err(Error::Invalid("tensor dimensions must be positive".into()));
    }
    Ok(Tensor3 {
        dims,
        data: random_unit_vector(p * q * r, rng),
    })
}

/// Rank-1 term with weight 1 and factors uniform on their unit spheres.
pub fn random_unit_rank1<R: Rng + ?Sized>(
    dims: (usize, usize, usize),
    rng: &mut R,
) -> Result<RankOneTriple> {
    let (p, q, r) = dims;
    if p == 0 || q == 0 || r == 0 {
        return Err(Error::Invalid("tensor dimensions must be positive".into()));
    }
    RankOneTriple::new(
        1.0,
        random_unit_vector(p, rng),
        random_unit_vector(q, rng),
        random_unit_vector(r, rng),
    )
}

/// Haar-distributed orthogonal matrix: Gram-Schmidt applied to a Gaussian
/// matrix (the positive-diagonal R makes the distribution uniform).
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    assert!(n > 0, "random_orthogonal: empty dimension");
    let mut q = Matrix::zeros(n, n);
    for j in 0..n {
        let mut v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        loop {
            // two Gram-Schmidt passes keep the columns orthogonal to roundoff
            for _ in 0..2 {
                for i in 0..j {
                    let proj = dot(q.col(i), &v);
                    for (x, e) in v.iter_mut().zip(q.col(i)) {
                        *x -= proj * e;
                    }
                }
            }
            let nv = norm(&v);
            if nv > 1e-8 {
                for x in v.iter_mut() {
                    *x /= nv;
                }
                break;
            }
            v = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        }
        q.col_mut(j).copy_from_slice(&v);
    }
    q
}
