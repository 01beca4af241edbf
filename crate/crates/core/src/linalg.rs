//! Dense complex linear algebra helpers on top of nalgebra.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn unit_vector(d: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(d);
    v[i] = ONE;
    v
}

/// A vector as a `1 × n` matrix.
pub fn row(v: &CVector) -> CMatrix {
    CMatrix::from_fn(1, v.len(), |_, j| v[j])
}

/// A vector as an `n × 1` matrix.
pub fn col(v: &CVector) -> CMatrix {
    CMatrix::from_fn(v.len(), 1, |i, _| v[i])
}

pub fn conj_vec(v: &CVector) -> CVector {
    v.map(|z| z.conj())
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_vec(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * r(0.5)
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (vec![], CMatrix::zeros(0, 0));
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = CMatrix::zeros(n, n);
    for (col, &i) in idx.iter().enumerate() {
        vecs.set_column(col, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    hermitian_eigen(m).0[0]
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return vec![];
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

pub fn trace_norm(m: &CMatrix) -> f64 {
    singular_values(m).iter().sum()
}

pub fn op_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Orthonormal basis (columns) of the null space of `m`. Singular values below
/// `rel_tol * max(1, largest)` count as zero.
pub fn null_space(m: &CMatrix, rel_tol: f64) -> CMatrix {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return CMatrix::zeros(0, 0);
    }
    let padded = if rows < cols {
        let mut p = CMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.unwrap();
    let s = &svd.singular_values;
    let largest = s.iter().copied().fold(0.0, f64::max).max(1.0);
    let kept: Vec<usize> = (0..s.len()).filter(|&i| s[i] <= rel_tol * largest).collect();
    let mut out = CMatrix::zeros(cols, kept.len());
    for (c, &i) in kept.iter().enumerate() {
        let row = v_t.row(i).adjoint();
        out.set_column(c, &row);
    }
    out
}

/// Numerical rank with singular values above `rel_tol * max(1, largest)`.
pub fn rank(m: &CMatrix, rel_tol: f64) -> usize {
    let s = singular_values(m);
    let largest = s.first().copied().unwrap_or(0.0).max(1.0);
    s.iter().filter(|&&x| x > rel_tol * largest).count()
}

/// Least-squares solution of `a x = b` and its residual `max |a x - b|`.
pub fn lstsq(a: &CMatrix, b: &CMatrix) -> (CMatrix, f64) {
    let svd = a.clone().svd(true, true);
    let x = svd.solve(b, 1e-13).expect("svd solve");
    let res = max_abs(&(a * &x - b));
    (x, res)
}

pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::Conditioning("matrix is singular".into()))
}

pub fn mat_pow(m: &CMatrix, mut n: u64) -> CMatrix {
    let mut result = CMatrix::identity(m.nrows(), m.ncols());
    let mut base = m.clone();
    while n > 0 {
        if n & 1 == 1 {
            result = &result * &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Function of a Hermitian matrix applied through its eigenvalues.
pub fn hermitian_fn(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(m);
    let d = CMatrix::from_diagonal(&CVector::from_iterator(vals.len(), vals.iter().map(|&x| r(f(x)))));
    &vecs * d * vecs.adjoint()
}

/// Projects a Hermitian matrix onto the PSD cone. Returns the projection and the
/// largest magnitude of a clipped negative eigenvalue.
pub fn clip_psd(m: &CMatrix) -> (CMatrix, f64) {
    let (vals, _) = hermitian_eigen(m);
    let clip = vals.iter().filter(|&&x| x < 0.0).map(|x| -x).fold(0.0, f64::max);
    (hermitian_fn(m, |x| x.max(0.0)), clip)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Principal-or-branch p-th roots of a square matrix via its complex Schur form.
///
/// Eigenvalues are grouped into clusters; each cluster gets one branch index `k`
/// and the root `|λ|^{1/p} exp(i(arg λ + 2πk)/p)`. Off-diagonal entries follow
/// the triangular recurrence `R^p = T` solved superdiagonal by superdiagonal.
pub struct SchurRoot {
    q: CMatrix,
    t: CMatrix,
    p: u64,
    /// cluster index of each diagonal entry of `t`
    cluster: Vec<usize>,
    /// representative eigenvalue for each cluster
    reps: Vec<C64>,
}

impl SchurRoot {
    pub fn new(m: &CMatrix, p: u64) -> Result<Self> {
        let n = m.nrows();
        if n != m.ncols() {
            return Err(Error::Dimension("root of a non-square matrix".into()));
        }
        if p == 0 {
            return Err(Error::Domain("root order must be positive".into()));
        }
        let (q, mut t) = if n == 0 {
            (CMatrix::zeros(0, 0), CMatrix::zeros(0, 0))
        } else {
            Schur::try_new(m.clone(), 1e-15, 10_000)
                .ok_or_else(|| Error::Convergence("Schur decomposition".into()))?
                .unpack()
        };
        let scale = max_abs(m).max(1.0);
        for i in 0..n {
            for j in 0..i {
                if t[(i, j)].norm() > 1e-10 * scale {
                    return Err(Error::Conditioning("Schur form is not triangular".into()));
                }
                t[(i, j)] = ZERO;
            }
        }
        let mut reps: Vec<C64> = Vec::new();
        let mut cluster = vec![0; n];
        for i in 0..n {
            let lam = t[(i, i)];
            let tol = 1e-6 * lam.norm().max(1e-3);
            match reps.iter().position(|r| (r - lam).norm() <= tol) {
                Some(k) => cluster[i] = k,
                None => {
                    cluster[i] = reps.len();
                    reps.push(lam);
                }
            }
        }
        Ok(Self { q, t, p, cluster, reps })
    }

    pub fn clusters(&self) -> &[C64] {
        &self.reps
    }

    /// Whether a cluster sits on the negative real axis, where the principal
    /// root is ambiguous.
    pub fn on_cut(&self, k: usize) -> bool {
        let lam = self.reps[k];
        lam.norm() > 1e-12 && lam.re < 0.0 && lam.im.abs() <= 1e-10 * lam.norm()
    }

    pub fn is_zero(&self, k: usize) -> bool {
        self.reps[k].norm() <= 1e-12
    }

    fn scalar_root(&self, lam: C64, k: usize) -> C64 {
        if lam.norm() <= 1e-300 {
            return ZERO;
        }
        let p = self.p as f64;
        let modulus = lam.norm().powf(1.0 / p);
        let arg = (lam.arg() + 2.0 * std::f64::consts::PI * k as f64) / p;
        C64::from_polar(modulus, arg)
    }

    /// The root for the branch assignment `branches[cluster]`.
    pub fn root(&self, branches: &[usize]) -> Result<CMatrix> {
        let n = self.t.nrows();
        let p = self.p;
        let mut rr = CMatrix::zeros(n, n);
        for i in 0..n {
            let k = branches[self.cluster[i]];
            rr[(i, i)] = if self.is_zero(self.cluster[i]) {
                ZERO
            } else {
                self.scalar_root(self.t[(i, i)], k)
            };
        }
        let scale = max_abs(&self.t).max(1.0);
        for gap in 1..n {
            for i in 0..n - gap {
                let j = i + gap;
                let mut sub = rr.view((i, i), (gap + 1, gap + 1)).into_owned();
                sub[(0, gap)] = ZERO;
                let e = mat_pow(&sub, p)[(0, gap)];
                let (a, b) = (rr[(i, i)], rr[(j, j)]);
                let mut denom = ZERO;
                let mut apow = ONE;
                let mut powers = Vec::with_capacity(p as usize);
                for _ in 0..p {
                    powers.push(apow);
                    apow *= a;
                }
                let mut bpow = ONE;
                for k in 0..p as usize {
                    denom += powers[p as usize - 1 - k] * bpow;
                    bpow *= b;
                }
                let numer = self.t[(i, j)] - e;
                if denom.norm() <= 1e-14 * scale {
                    if numer.norm() <= 1e-10 * scale {
                        rr[(i, j)] = ZERO;
                    } else {
                        return Err(Error::Domain(
                            "no primary root: nilpotent coupling at a zero eigenvalue".into(),
                        ));
                    }
                } else {
                    rr[(i, j)] = numer / denom;
                }
            }
        }
        Ok(&self.q * rr * self.q.adjoint())
    }
}

/// Principal p-th root; fails when an eigenvalue lies on the negative real axis.
pub fn principal_root(m: &CMatrix, p: u64) -> Result<CMatrix> {
    let s = SchurRoot::new(m, p)?;
    if (0..s.clusters().len()).any(|k| s.on_cut(k)) {
        return Err(Error::Domain("eigenvalue on the branch cut".into()));
    }
    s.root(&vec![0; s.clusters().len()])
}
