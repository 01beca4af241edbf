//! Finite-dimensional *-algebras given by structure constants.
//!
//! An [`AlgebraPresentation`] stores the product of basis elements
//! `e_i e_j = Σ_k c[i,j,k] e_k`, the coordinates of the unit and the matrix `J`
//! of the conjugate-linear involution (`x*` has coordinates `J · conj(x)`).
//!
//! [`wedderburn`] computes an explicit *-isomorphism `A ≅ ⊕_k M_{n_k}(ℂ)` as a
//! [`BlockStructure`]. The left regular representation is made a
//! *-representation through the GNS inner product of the normalized regular
//! trace; the spectral projections of a random self-adjoint element then give
//! minimal projections, grouped into blocks by `e A f ≠ 0`, from which matrix
//! units are built by pivoting on the most stable basis element.

use crate::error::{Error, Result};
use crate::linalg::{self, c, conj_vec, max_abs, max_abs_vec, r, unit_vector, CMatrix, CVector, C64, ZERO};
#[cfg(test)]
use crate::linalg::ONE;
use crate::report::Report;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type AlgebraElement = CVector;

/// Structure constants smaller than this are dropped from the sparse table.
const DROP: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraPresentation {
    dim: usize,
    /// `products[i * dim + j]` lists `(k, c[i,j,k])` for nonzero constants.
    products: Vec<Vec<(usize, C64)>>,
    unit: CVector,
    invol: CMatrix,
}

impl AlgebraPresentation {
    /// Builds a presentation from `(i, j, k, c)` entries. Repeated entries add up.
    pub fn new(
        dim: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize, C64)>,
        unit: CVector,
        invol: CMatrix,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Malformed("algebra dimension must be positive".into()));
        }
        if unit.len() != dim || invol.shape() != (dim, dim) {
            return Err(Error::Dimension(format!(
                "unit has length {}, involution is {:?}, expected dimension {dim}",
                unit.len(),
                invol.shape()
            )));
        }
        let mut dense = vec![ZERO; dim * dim * dim];
        for (i, j, k, v) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::Malformed(format!("structure constant index ({i},{j},{k}) out of range")));
            }
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::Malformed("non-finite structure constant".into()));
            }
            dense[(i * dim + j) * dim + k] += v;
        }
        Ok(Self::from_dense_slice(dim, &dense, unit, invol))
    }

    fn from_dense_slice(dim: usize, dense: &[C64], unit: CVector, invol: CMatrix) -> Self {
        let mut products = vec![Vec::new(); dim * dim];
        for ij in 0..dim * dim {
            for k in 0..dim {
                let v = dense[ij * dim + k];
                if v.norm() > DROP {
                    products[ij].push((k, v));
                }
            }
        }
        Self { dim, products, unit, invol }
    }

    /// Builds a presentation from a function giving the coordinates of `e_i e_j`.
    pub fn from_products(dim: usize, f: impl Fn(usize, usize) -> CVector, unit: CVector, invol: CMatrix) -> Self {
        let mut products = vec![Vec::new(); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let v = f(i, j);
                for k in 0..dim {
                    if v[k].norm() > DROP {
                        products[i * dim + j].push((k, v[k]));
                    }
                }
            }
        }
        Self { dim, products, unit, invol }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &CVector {
        &self.unit
    }

    pub fn invol(&self) -> &CMatrix {
        &self.invol
    }

    /// Nonzero structure constants as `(i, j, k, c)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, C64)> + '_ {
        let d = self.dim;
        self.products
            .iter()
            .enumerate()
            .flat_map(move |(ij, row)| row.iter().map(move |&(k, v)| (ij / d, ij % d, k, v)))
    }

    pub fn basis(&self, i: usize) -> CVector {
        unit_vector(self.dim, i)
    }

    pub fn basis_product(&self, i: usize, j: usize) -> CVector {
        let mut out = CVector::zeros(self.dim);
        for &(k, v) in &self.products[i * self.dim + j] {
            out[k] += v;
        }
        out
    }

    pub fn multiply(&self, x: &CVector, y: &CVector) -> CVector {
        let d = self.dim;
        let mut out = CVector::zeros(d);
        for i in 0..d {
            if x[i] == ZERO {
                continue;
            }
            for j in 0..d {
                if y[j] == ZERO {
                    continue;
                }
                let s = x[i] * y[j];
                for &(k, v) in &self.products[i * d + j] {
                    out[k] += s * v;
                }
            }
        }
        out
    }

    pub fn star(&self, x: &CVector) -> CVector {
        &self.invol * conj_vec(x)
    }

    /// Matrix of `y ↦ x y` in the basis.
    pub fn left_regular(&self, x: &CVector) -> CMatrix {
        let d = self.dim;
        let mut m = CMatrix::zeros(d, d);
        for i in 0..d {
            if x[i] == ZERO {
                continue;
            }
            for j in 0..d {
                for &(k, v) in &self.products[i * d + j] {
                    m[(k, j)] += x[i] * v;
                }
            }
        }
        m
    }

    /// Matrix of `y ↦ y x` in the basis.
    pub fn right_regular(&self, x: &CVector) -> CMatrix {
        let d = self.dim;
        let mut m = CMatrix::zeros(d, d);
        for j in 0..d {
            if x[j] == ZERO {
                continue;
            }
            for i in 0..d {
                for &(k, v) in &self.products[i * d + j] {
                    m[(k, i)] += x[j] * v;
                }
            }
        }
        m
    }

    /// The multiplication map `A ⊗ A → A` as a `d × d²` matrix.
    pub fn multiplication_matrix(&self) -> CMatrix {
        let d = self.dim;
        let mut m = CMatrix::zeros(d, d * d);
        for ij in 0..d * d {
            for &(k, v) in &self.products[ij] {
                m[(k, ij)] += v;
            }
        }
        m
    }

    /// Normalized regular trace `Tr L(x) / d`.
    pub fn regular_trace(&self, x: &CVector) -> C64 {
        self.left_regular(x).trace() / r(self.dim as f64)
    }

    /// Gram matrix `τ(e_i* e_j)` of the normalized regular trace.
    pub fn gns_gram(&self) -> CMatrix {
        let d = self.dim;
        let trace_row = CVector::from_iterator(d, (0..d).map(|k| self.regular_trace(&self.basis(k))));
        let mut g = CMatrix::zeros(d, d);
        for i in 0..d {
            let si = self.star(&self.basis(i));
            for j in 0..d {
                let p = self.multiply(&si, &self.basis(j));
                g[(i, j)] = p.dot(&trace_row);
            }
        }
        g
    }
}

/// Algebraic tensor product `A ⊗ B` with basis `e_i ⊗ f_j` at index `i * dim(B) + j`.
pub fn tensor(a: &AlgebraPresentation, b: &AlgebraPresentation) -> AlgebraPresentation {
    let (da, db) = (a.dim, b.dim);
    let dim = da * db;
    let mut products = vec![Vec::new(); dim * dim];
    for i in 0..da {
        for j in 0..db {
            for k in 0..da {
                for l in 0..db {
                    let row = &mut products[(i * db + j) * dim + (k * db + l)];
                    for &(p, u) in &a.products[i * da + k] {
                        for &(q, v) in &b.products[j * db + l] {
                            let w = u * v;
                            if w.norm() > DROP {
                                row.push((p * db + q, w));
                            }
                        }
                    }
                }
            }
        }
    }
    let unit = a.unit.kronecker(&b.unit);
    let invol = linalg::kron(&a.invol, &b.invol);
    AlgebraPresentation { dim, products, unit, invol }
}

/// Residuals of the algebra laws on basis elements.
pub fn verify_algebra(alg: &AlgebraPresentation, tol: f64) -> Report {
    let d = alg.dim;
    let mut rep = Report::new();
    let mut assoc = 0.0f64;
    let prods: Vec<CVector> = (0..d * d).map(|ij| alg.basis_product(ij / d, ij % d)).collect();
    for i in 0..d {
        for j in 0..d {
            let ij = &prods[i * d + j];
            for k in 0..d {
                let left = alg.multiply(ij, &alg.basis(k));
                let right = alg.multiply(&alg.basis(i), &prods[j * d + k]);
                assoc = assoc.max(max_abs_vec(&(left - right)));
            }
        }
    }
    rep.push("associativity", assoc, tol);
    let mut unit_res = 0.0f64;
    for i in 0..d {
        let e = alg.basis(i);
        unit_res = unit_res.max(max_abs_vec(&(alg.multiply(&alg.unit, &e) - &e)));
        unit_res = unit_res.max(max_abs_vec(&(alg.multiply(&e, &alg.unit) - &e)));
    }
    rep.push("unit", unit_res, tol);
    let j = &alg.invol;
    let invol_sq = max_abs(&(j * j.map(|z| z.conj()) - CMatrix::identity(d, d)));
    rep.push("involution_squared", invol_sq, tol);
    let mut anti = 0.0f64;
    for a in 0..d {
        for b in 0..d {
            let lhs = alg.star(&prods[a * d + b]);
            let rhs = alg.multiply(&alg.star(&alg.basis(b)), &alg.star(&alg.basis(a)));
            anti = anti.max(max_abs_vec(&(lhs - rhs)));
        }
    }
    rep.push("involution_antimultiplicative", anti, tol);
    rep.push("unit_selfadjoint", max_abs_vec(&(alg.star(&alg.unit) - &alg.unit)), tol);
    let g = alg.gns_gram();
    let herm = max_abs(&(&g - g.adjoint()));
    let min_eig = linalg::min_eigenvalue(&g);
    rep.push("trace_gram_hermitian", herm, tol);
    rep.push("trace_gram_positive_definite", if min_eig > tol { 0.0 } else { tol - min_eig + f64::MIN_POSITIVE }, 0.0);
    rep
}

/// Explicit *-isomorphism `A ≅ ⊕_k M_{n_k}(ℂ)`.
///
/// Matrix-unit coordinates are ordered block-major and row-major inside a
/// block. `iso` maps basis coordinates to matrix-unit coordinates; the columns
/// of `iso_inv` are the matrix units `E^k_{ij}` in the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockStructure {
    pub sizes: Vec<usize>,
    pub iso: CMatrix,
    pub iso_inv: CMatrix,
    offsets: Vec<usize>,
}

fn offsets_of(sizes: &[usize]) -> Vec<usize> {
    let mut offs = Vec::with_capacity(sizes.len());
    let mut acc = 0;
    for &n in sizes {
        offs.push(acc);
        acc += n * n;
    }
    offs
}

impl BlockStructure {
    pub fn from_matrix_units(sizes: Vec<usize>, iso_inv: CMatrix) -> Result<Self> {
        let iso = linalg::inverse(&iso_inv)?;
        let offsets = offsets_of(&sizes);
        Ok(Self { sizes, iso, iso_inv, offsets })
    }

    pub fn dim(&self) -> usize {
        self.iso.nrows()
    }

    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }

    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    pub fn index(&self, k: usize, i: usize, j: usize) -> usize {
        self.offsets[k] + i * self.sizes[k] + j
    }

    pub fn matrix_unit(&self, k: usize, i: usize, j: usize) -> CVector {
        self.iso_inv.column(self.index(k, i, j)).into_owned()
    }

    /// Block components `x_k` of an element.
    pub fn blocks_of(&self, x: &CVector) -> Vec<CMatrix> {
        let y = &self.iso * x;
        self.unflatten(&y)
    }

    fn unflatten(&self, y: &CVector) -> Vec<CMatrix> {
        self.sizes
            .iter()
            .enumerate()
            .map(|(k, &n)| CMatrix::from_fn(n, n, |i, j| y[self.offsets[k] + i * n + j]))
            .collect()
    }

    fn flatten(&self, blocks: &[CMatrix]) -> CVector {
        let mut y = CVector::zeros(self.dim());
        for (k, &n) in self.sizes.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    y[self.offsets[k] + i * n + j] = blocks[k][(i, j)];
                }
            }
        }
        y
    }

    pub fn from_blocks(&self, blocks: &[CMatrix]) -> CVector {
        &self.iso_inv * self.flatten(blocks)
    }

    /// Coefficient blocks `[φ(E^k_{ij})]_{ij}` of a functional given as a covector.
    pub fn functional_blocks(&self, covec: &CVector) -> Vec<CMatrix> {
        let y = self.iso_inv.transpose() * covec;
        self.unflatten(&y)
    }

    /// Covector of the functional with coefficient blocks `[φ(E^k_{ij})]`.
    pub fn functional_from_blocks(&self, blocks: &[CMatrix]) -> CVector {
        self.iso.transpose() * self.flatten(blocks)
    }

    /// Block structure of `A ⊗ B` induced by the Kronecker product of matrix units.
    pub fn tensor(&self, other: &BlockStructure) -> BlockStructure {
        let db = other.dim();
        let dim = self.dim() * db;
        let mut sizes = Vec::new();
        for &n in &self.sizes {
            for &m in &other.sizes {
                sizes.push(n * m);
            }
        }
        let offsets = offsets_of(&sizes);
        // perm[kron index] = tensor matrix-unit index
        let mut perm = vec![0usize; dim];
        for (k, &n) in self.sizes.iter().enumerate() {
            for (l, &m) in other.sizes.iter().enumerate() {
                let off = offsets[k * other.sizes.len() + l];
                for i in 0..n {
                    for j in 0..n {
                        for a in 0..m {
                            for b in 0..m {
                                let kron_idx = self.index(k, i, j) * db + other.index(l, a, b);
                                let row = i * m + a;
                                let col = j * m + b;
                                perm[kron_idx] = off + row * (n * m) + col;
                            }
                        }
                    }
                }
            }
        }
        let ki = linalg::kron(&self.iso, &other.iso);
        let kinv = linalg::kron(&self.iso_inv, &other.iso_inv);
        let mut iso = CMatrix::zeros(dim, dim);
        let mut iso_inv = CMatrix::zeros(dim, dim);
        for s in 0..dim {
            iso.set_row(perm[s], &ki.row(s));
            iso_inv.set_column(perm[s], &kinv.column(s));
        }
        BlockStructure { sizes, iso, iso_inv, offsets }
    }

    /// Maximal residual of the matrix-unit relations inside `alg`.
    pub fn matrix_unit_residual(&self, alg: &AlgebraPresentation) -> f64 {
        let mut res = 0.0f64;
        let mut sum = CVector::zeros(alg.dim());
        for (k, &n) in self.sizes.iter().enumerate() {
            for i in 0..n {
                sum += self.matrix_unit(k, i, i);
                for j in 0..n {
                    let eij = self.matrix_unit(k, i, j);
                    res = res.max(max_abs_vec(&(alg.star(&eij) - self.matrix_unit(k, j, i))));
                    for l in 0..n {
                        let prod = alg.multiply(&eij, &self.matrix_unit(k, j, l));
                        res = res.max(max_abs_vec(&(prod - self.matrix_unit(k, i, l))));
                    }
                }
            }
        }
        for (k, &n) in self.sizes.iter().enumerate() {
            for (k2, &n2) in self.sizes.iter().enumerate() {
                if k != k2 {
                    let p = alg.multiply(&self.matrix_unit(k, 0, n - 1), &self.matrix_unit(k2, 0, n2 - 1));
                    res = res.max(max_abs_vec(&p));
                }
            }
        }
        res.max(max_abs_vec(&(sum - alg.unit())))
    }
}

/// C*-norm `max_k ‖x_k‖`.
pub fn operator_norm(blocks: &BlockStructure, x: &CVector) -> f64 {
    blocks.blocks_of(x).iter().map(linalg::op_norm).fold(0.0, f64::max)
}

/// Whether every block component is Hermitian and PSD within `tol`.
pub fn is_positive_element(blocks: &BlockStructure, x: &CVector, tol: f64) -> bool {
    blocks.blocks_of(x).iter().all(|b| {
        max_abs(&(b - b.adjoint())) <= tol && linalg::min_eigenvalue(b) >= -tol
    })
}

const MAX_ATTEMPTS: u64 = 24;

/// Wedderburn decomposition with canonical block order: sizes ascending, ties
/// broken by the block traces of a fixed generic element.
pub fn wedderburn(alg: &AlgebraPresentation) -> Result<BlockStructure> {
    let d = alg.dim;
    if d == 1 {
        let u = alg.unit[0];
        if u.norm() < 1e-12 {
            return Err(Error::Malformed("unit is zero".into()));
        }
        return BlockStructure::from_matrix_units(vec![1], CMatrix::from_element(1, 1, u));
    }
    let g = alg.gns_gram();
    let gscale = max_abs(&g).max(1e-300);
    if max_abs(&(&g - g.adjoint())) > 1e-8 * gscale {
        return Err(Error::NotSemisimple("regular trace is not compatible with the involution".into()));
    }
    let (gvals, _) = linalg::hermitian_eigen(&g);
    if gvals[0] <= 1e-10 * gvals[d - 1] {
        return Err(Error::NotSemisimple(format!(
            "regular trace is degenerate (smallest Gram eigenvalue {:.3e}); nilpotent radical or non-C* involution",
            gvals[0]
        )));
    }
    let gh = linalg::hermitian_fn(&g, f64::sqrt);
    let ghi = linalg::hermitian_fn(&g, |x| 1.0 / x.sqrt());
    let mut last = String::new();
    for attempt in 0..MAX_ATTEMPTS {
        match attempt_decomposition(alg, &gh, &ghi, attempt) {
            Ok(bs) => return Ok(bs),
            Err(e) => last = e,
        }
    }
    Err(Error::Conditioning(format!("no well-separated spectrum after {MAX_ATTEMPTS} attempts: {last}")))
}

fn attempt_decomposition(
    alg: &AlgebraPresentation,
    gh: &CMatrix,
    ghi: &CMatrix,
    attempt: u64,
) -> std::result::Result<BlockStructure, String> {
    let d = alg.dim;
    let tau = |x: &CVector| alg.regular_trace(x);
    let mut rng = ChaCha8Rng::seed_from_u64(0x00c0_ffee ^ attempt.wrapping_mul(0x9e37_79b9));
    let w = CVector::from_iterator(d, (0..d).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))));
    let y = &w + alg.star(&w);
    let h = gh * alg.left_regular(&y) * ghi;
    let hscale = max_abs(&h).max(1e-300);
    if max_abs(&(&h - h.adjoint())) > 1e-7 * hscale {
        return Err("left regular representation is not a *-representation".into());
    }
    let (vals, vecs) = linalg::hermitian_eigen(&h);
    let spread = vals.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
    let mut clusters: Vec<Vec<usize>> = vec![vec![0]];
    for i in 1..d {
        if vals[i] - vals[i - 1] <= 1e-7 * spread {
            clusters.last_mut().unwrap().push(i);
        } else {
            if vals[i] - vals[i - 1] < 1e-4 * spread {
                return Err(format!("eigenvalue gap {:.3e} too small", vals[i] - vals[i - 1]));
            }
            clusters.push(vec![i]);
        }
    }
    let projections: Vec<CVector> = clusters
        .iter()
        .map(|cl| {
            let mut p = CMatrix::zeros(d, d);
            for &i in cl {
                let v = vecs.column(i);
                p += v * v.adjoint();
            }
            ghi * p * gh * alg.unit()
        })
        .collect();
    let np = projections.len();
    // union-find over e A f ≠ 0
    let mut parent: Vec<usize> = (0..np).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        if p[i] != i {
            let root = find(p, p[i]);
            p[i] = root;
        }
        p[i]
    }
    for a in 0..np {
        let la = alg.left_regular(&projections[a]);
        for b in a + 1..np {
            let rb = alg.right_regular(&projections[b]);
            let link = max_abs(&(&la * &rb));
            if link > 1e-6 {
                let (ra, rb2) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb2 {
                    parent[rb2] = ra;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_of_root: Vec<Option<usize>> = vec![None; np];
    for a in 0..np {
        let root = find(&mut parent, a);
        match group_of_root[root] {
            Some(gi) => groups[gi].push(a),
            None => {
                group_of_root[root] = Some(groups.len());
                groups.push(vec![a]);
            }
        }
    }
    for grp in &groups {
        let n = grp.len();
        if grp.iter().any(|&a| clusters[a].len() != n) {
            return Err("spectral projections are not minimal".into());
        }
    }
    if groups.iter().map(|g| g.len() * g.len()).sum::<usize>() != d {
        return Err("block dimensions do not add up".into());
    }
    // matrix units per group
    let mut units: Vec<(usize, Vec<CVector>)> = Vec::new();
    for grp in &groups {
        let n = grp.len();
        let e: Vec<&CVector> = grp.iter().map(|&a| &projections[a]).collect();
        let e1 = e[0];
        let tau_e1 = tau(e1).re;
        let mut col: Vec<CVector> = vec![e1.clone()];
        for ei in e.iter().skip(1) {
            let mut best: Option<(f64, CVector)> = None;
            for b in 0..d {
                let v = alg.multiply(&alg.multiply(ei, &alg.basis(b)), e1);
                let nv = tau(&alg.multiply(&alg.star(&v), &v)).re;
                if best.as_ref().is_none_or(|(bn, _)| nv > *bn * (1.0 + 1e-9)) {
                    best = Some((nv, v));
                }
            }
            let (nv, v) = best.unwrap();
            if nv <= 1e-12 {
                return Err("no partial isometry between minimal projections".into());
            }
            col.push(v * r((tau_e1 / nv).sqrt()));
        }
        let row: Vec<CVector> = col.iter().map(|x| alg.star(x)).collect();
        let mut mu = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                mu.push(if i == 0 && j == 0 { e1.clone() } else { alg.multiply(&col[i], &row[j]) });
            }
        }
        units.push((n, mu));
    }
    // canonical order
    let generic = CVector::from_iterator(d, (0..d).map(|i| c(1.0 / (i as f64 + 1.5), 0.37 / (i as f64 + 2.0))));
    let build = |units: &[(usize, Vec<CVector>)]| -> std::result::Result<BlockStructure, String> {
        let sizes: Vec<usize> = units.iter().map(|(n, _)| *n).collect();
        let mut u = CMatrix::zeros(d, d);
        let mut col = 0;
        for (_, mu) in units {
            for v in mu {
                u.set_column(col, v);
                col += 1;
            }
        }
        BlockStructure::from_matrix_units(sizes, u).map_err(|e| e.to_string())
    };
    let provisional = build(&units)?;
    let gblocks = provisional.blocks_of(&generic);
    let mut order: Vec<usize> = (0..units.len()).collect();
    let key = |k: usize| {
        let t = gblocks[k].trace();
        (units[k].0, (t.re * 1e6).round() as i64, (t.im * 1e6).round() as i64)
    };
    order.sort_by_key(|&k| key(k));
    let sorted: Vec<(usize, Vec<CVector>)> = order.iter().map(|&k| units[k].clone()).collect();
    let bs = build(&sorted)?;
    let res = bs.matrix_unit_residual(alg);
    if res > 1e-8 {
        return Err(format!("matrix-unit residual {res:.3e}"));
    }
    Ok(bs)
}

/// `(x*) x` for an element.
pub fn star_square(alg: &AlgebraPresentation, x: &CVector) -> CVector {
    alg.multiply(&alg.star(x), x)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// M_2(ℂ) in the matrix-unit basis e11, e12, e21, e22.
    fn m2() -> AlgebraPresentation {
        let idx = |i: usize, j: usize| i * 2 + j;
        let mut entries = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                for l in 0..2 {
                    entries.push((idx(i, j), idx(j, l), idx(i, l), ONE));
                }
            }
        }
        let unit = CVector::from_vec(vec![ONE, ZERO, ZERO, ONE]);
        let mut invol = CMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                invol[(idx(j, i), idx(i, j))] = ONE;
            }
        }
        AlgebraPresentation::new(4, entries, unit, invol).unwrap()
    }

    fn commutative(d: usize) -> AlgebraPresentation {
        let entries = (0..d).map(|i| (i, i, i, ONE));
        AlgebraPresentation::new(d, entries, CVector::from_element(d, ONE), CMatrix::identity(d, d)).unwrap()
    }

    #[test]
    fn m2_verifies_and_decomposes() {
        let a = m2();
        assert!(verify_algebra(&a, 1e-12).passed());
        let bs = wedderburn(&a).unwrap();
        assert_eq!(bs.sizes, vec![2]);
        assert!(bs.matrix_unit_residual(&a) < 1e-10);
    }

    #[test]
    fn commutative_blocks() {
        let a = commutative(4);
        let bs = wedderburn(&a).unwrap();
        assert_eq!(bs.sizes, vec![1, 1, 1, 1]);
    }

    #[test]
    fn direct_sum_order_is_canonical() {
        // ℂ ⊕ M_2 presented with M_2 first.
        let m = m2();
        let mut entries: Vec<_> = m.entries().collect();
        entries.push((4, 4, 4, ONE));
        let unit = CVector::from_vec(vec![ONE, ZERO, ZERO, ONE, ONE]);
        let mut invol = CMatrix::zeros(5, 5);
        invol.view_mut((0, 0), (4, 4)).copy_from(m.invol());
        invol[(4, 4)] = ONE;
        let a = AlgebraPresentation::new(5, entries, unit, invol).unwrap();
        let bs = wedderburn(&a).unwrap();
        assert_eq!(bs.sizes, vec![1, 2]);
        assert_eq!(wedderburn(&a).unwrap(), bs);
    }

    #[test]
    fn non_semisimple_rejected() {
        // ℂ[x]/(x²) with x* = x
        let entries = vec![(0, 0, 0, ONE), (0, 1, 1, ONE), (1, 0, 1, ONE)];
        let a = AlgebraPresentation::new(2, entries, CVector::from_vec(vec![ONE, ZERO]), CMatrix::identity(2, 2)).unwrap();
        assert!(matches!(wedderburn(&a), Err(Error::NotSemisimple(_))));
    }

    #[test]
    fn broken_associativity_detected() {
        let mut entries: Vec<_> = m2().entries().collect();
        entries.push((1, 2, 1, c(0.5, 0.0)));
        let m = m2();
        let a = AlgebraPresentation::new(4, entries, m.unit().clone(), m.invol().clone()).unwrap();
        let rep = verify_algebra(&a, 1e-9);
        assert!(!rep.get("associativity").unwrap().pass);
    }

    #[test]
    fn tensor_blocks_are_consistent() {
        let a = m2();
        let b = commutative(2);
        let t = tensor(&a, &b);
        let bs = wedderburn(&a).unwrap().tensor(&wedderburn(&b).unwrap());
        assert!(bs.matrix_unit_residual(&t) < 1e-10);
    }

    #[test]
    fn operator_norm_of_unit_and_projection() {
        let a = m2();
        let bs = wedderburn(&a).unwrap();
        assert!((operator_norm(&bs, a.unit()) - 1.0).abs() < 1e-12);
        let e12 = a.basis(1);
        assert!((operator_norm(&bs, &e12) - 1.0).abs() < 1e-12);
        assert!(is_positive_element(&bs, &a.basis(0), 1e-12));
        assert!(!is_positive_element(&bs, &e12, 1e-12));
    }

    #[test]
    fn also_trivial_dimension_one() {
        let a = commutative(1);
        let bs = wedderburn(&a).unwrap();
        assert_eq!(bs.sizes, vec![1]);
    }
}
