//! Finite hypergroups built from idempotent states and group-like projections.
//!
//! An idempotent state `φ` gives conditional expectations `E_l = (φ⊗ι)Δ`,
//! `E_r = (ι⊗φ)Δ` and `E = E_l E_r`. The range `A_φ` of `E` with
//! `δ = (E⊗E)Δ`, `κ = S|_{A_φ}` and the restricted counit and Haar state is a
//! finite hypergroup. Dually a group-like projection `p` gives `pAp` with
//! `δ_p(x) = (p⊗p)Δ(x)(p⊗p)` and Haar state `h/h(p)`.

use crate::algebra::{self, tensor, verify_algebra, AlgebraPresentation, BlockStructure};
use crate::dual::dual_quantum_group;
use crate::error::{Error, Result};
use crate::functional::{convolution_algebra, ConvolutionStructure, Functional};
use crate::idempotent::is_idempotent_state;
use crate::linalg::{self, kron, max_abs, max_abs_vec, r, CMatrix, CVector, ONE};
use crate::quantum_group::{irreps, IrrepTable, QuantumGroup};
use crate::report::Report;

/// Choi matrices must have spectrum above `-CHOI_TOL`.
pub const CHOI_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Hypergroup {
    pub algebra: AlgebraPresentation,
    pub blocks: BlockStructure,
    pub comul: CMatrix,
    pub counit: CVector,
    pub kappa: CMatrix,
    pub haar: CVector,
    /// Columns: the basis of the hypergroup inside the ambient algebra, when it was built from one.
    pub embedding: Option<CMatrix>,
    /// Maps ambient coordinates to hypergroup coordinates of the projected element.
    pub projection: Option<CMatrix>,
}

impl ConvolutionStructure for Hypergroup {
    fn algebra(&self) -> &AlgebraPresentation {
        &self.algebra
    }
    fn blocks(&self) -> &BlockStructure {
        &self.blocks
    }
    fn comul(&self) -> &CMatrix {
        &self.comul
    }
    fn counit(&self) -> &CVector {
        &self.counit
    }
    fn antipode(&self) -> &CMatrix {
        &self.kappa
    }
    fn haar(&self) -> &CVector {
        &self.haar
    }
}

impl Hypergroup {
    pub fn new(
        algebra: AlgebraPresentation,
        comul: CMatrix,
        counit: CVector,
        kappa: CMatrix,
        haar: CVector,
    ) -> Result<Self> {
        let d = algebra.dim();
        if comul.shape() != (d * d, d) || counit.len() != d || kappa.shape() != (d, d) || haar.len() != d {
            return Err(Error::Dimension("hypergroup structure maps have the wrong sizes".into()));
        }
        let blocks = algebra::wedderburn(&algebra)?;
        Ok(Self { algebra, blocks, comul, counit, kappa, haar, embedding: None, projection: None })
    }

    /// A quantum group viewed as a hypergroup with `κ = S`.
    pub fn from_quantum_group(qg: &QuantumGroup) -> Self {
        Self {
            algebra: qg.algebra.clone(),
            blocks: qg.blocks.clone(),
            comul: qg.comul.clone(),
            counit: qg.counit.clone(),
            kappa: qg.antipode.clone(),
            haar: qg.haar.clone(),
            embedding: None,
            projection: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Restriction of an ambient functional to the hypergroup basis.
    pub fn restrict(&self, u: &Functional) -> Result<Functional> {
        let b = self.embedding.as_ref().ok_or_else(|| Error::Domain("hypergroup has no ambient embedding".into()))?;
        if u.dim() != b.nrows() {
            return Err(Error::Dimension("functional does not live on the ambient algebra".into()));
        }
        Ok(Functional::new(b.transpose() * &u.covec))
    }

    /// The ambient functional `v ∘ E` of a functional on the hypergroup.
    pub fn extend(&self, v: &Functional) -> Result<Functional> {
        let p = self.projection.as_ref().ok_or_else(|| Error::Domain("hypergroup has no ambient projection".into()))?;
        if v.dim() != p.nrows() {
            return Err(Error::Dimension("functional does not live on the hypergroup".into()));
        }
        Ok(Functional::new(p.transpose() * &v.covec))
    }
}

/// `E_l`, `E_r` and `E = E_l E_r` as matrices on the algebra.
#[derive(Debug, Clone)]
pub struct ConditionalExpectations {
    pub left: CMatrix,
    pub right: CMatrix,
    pub both: CMatrix,
}

pub fn conditional_expectations<S: ConvolutionStructure + ?Sized>(s: &S, phi: &Functional) -> ConditionalExpectations {
    let d = s.dim();
    let dl = s.comul();
    let mut left = CMatrix::zeros(d, d);
    let mut right = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                left[(k, i)] += phi.covec[j] * dl[(j * d + k, i)];
                right[(k, i)] += dl[(k * d + j, i)] * phi.covec[j];
            }
        }
    }
    let both = &left * &right;
    ConditionalExpectations { left, right, both }
}

fn star_map_residual(alg: &AlgebraPresentation, m: &CMatrix) -> f64 {
    let j = alg.invol();
    max_abs(&(m * j - j * m.map(|z| z.conj())))
}

fn bimodule_residual(alg: &AlgebraPresentation, e: &CMatrix) -> f64 {
    let d = alg.dim();
    let imgs: Vec<CVector> = (0..d).map(|i| e.column(i).into_owned()).collect();
    let mut res = 0.0f64;
    for a in 0..d {
        for b in 0..d {
            let p = alg.multiply(&imgs[a], &imgs[b]);
            res = res.max(max_abs_vec(&(e * &p - p)));
        }
    }
    res.max(max_abs(&(e * e - e)))
}

/// Residuals of the conditional-expectation identities for `E_l`, `E_r` and `E`.
pub fn verify_conditional_expectations(qg: &QuantumGroup, phi: &Functional, tol: f64) -> Report {
    let ce = conditional_expectations(qg, phi);
    let alg = &qg.algebra;
    let d = alg.dim();
    let id = CMatrix::identity(d, d);
    let dl = &qg.comul;
    let (l, rt, e) = (&ce.left, &ce.right, &ce.both);
    let mut rep = Report::new();
    rep.push("left.star", star_map_residual(alg, l), tol);
    rep.push("right.star", star_map_residual(alg, rt), tol);
    rep.push("left.comul_intertwines", max_abs(&(dl * l - kron(l, &id) * dl)), tol);
    rep.push("right.comul_intertwines", max_abs(&(dl * rt - kron(&id, rt) * dl)), tol);
    rep.push("left_right.exchange", max_abs(&(kron(&id, l) * dl - kron(rt, &id) * dl)), tol);
    rep.push("left_right.commute", max_abs(&(l * rt - rt * l)), tol);
    rep.push("left.bimodule", bimodule_residual(alg, l), tol);
    rep.push("right.bimodule", bimodule_residual(alg, rt), tol);
    rep.push("both.star", star_map_residual(alg, e), tol);
    rep.push("both.comul_splits", max_abs(&(dl * e - kron(l, rt) * dl)), tol);
    let ee = kron(e, e) * dl;
    rep.push("both.left_form", max_abs(&(&ee - kron(&id, l) * dl * e)), tol);
    rep.push("both.right_form", max_abs(&(&ee - kron(rt, &id) * dl * e)), tol);
    rep.push("both.bimodule", bimodule_residual(alg, e), tol);
    rep.push("both.antipode_commutes", max_abs(&(&qg.antipode * e - e * &qg.antipode)), tol);
    rep
}

/// Orthonormal basis (in `⟨x, y⟩ = h(x* y)`) of the range of `map`, starting with `first`
/// and pivoting on the column with the largest remaining norm.
fn range_basis(alg: &AlgebraPresentation, haar: &CVector, map: &CMatrix, first: &CVector) -> CMatrix {
    let d = alg.dim();
    let inner = |x: &CVector, y: &CVector| haar.dot(&alg.multiply(&alg.star(x), y));
    let mut basis: Vec<CVector> = vec![first.clone()];
    let mut cand: Vec<CVector> = (0..d).map(|i| map.column(i).into_owned()).collect();
    let scale = cand.iter().map(|v| inner(v, v).re.max(0.0).sqrt()).fold(0.0, f64::max).max(1.0);
    let project_out = |v: &mut CVector, b: &CVector| {
        let nb = inner(b, b);
        let coef = inner(b, v) / nb;
        *v -= b * coef;
    };
    for v in cand.iter_mut() {
        project_out(v, first);
    }
    loop {
        let norms: Vec<f64> = cand.iter().map(|v| inner(v, v).re.max(0.0).sqrt()).collect();
        let (best, nbest) =
            norms.iter().enumerate().fold((0, -1.0), |acc, (i, &n)| if n > acc.1 * (1.0 + 1e-12) { (i, n) } else { acc });
        if nbest <= 1e-9 * scale {
            break;
        }
        let b = &cand[best] / r(nbest);
        for v in cand.iter_mut() {
            project_out(v, &b);
        }
        basis.push(b);
    }
    let mut m = CMatrix::zeros(d, basis.len());
    for (i, b) in basis.iter().enumerate() {
        m.set_column(i, b);
    }
    m
}

struct SubalgebraData {
    algebra: AlgebraPresentation,
    basis: CMatrix,
    pinv: CMatrix,
}

fn coords(pinv: &CMatrix, basis: &CMatrix, x: &CVector, res: &mut f64) -> CVector {
    let c = pinv * x;
    *res = res.max(max_abs_vec(&(basis * &c - x)));
    c
}

fn subalgebra(alg: &AlgebraPresentation, basis: CMatrix) -> Result<SubalgebraData> {
    let n = basis.ncols();
    let pinv = basis.clone().pseudo_inverse(1e-12).map_err(|e| Error::Conditioning(e.to_string()))?;
    let mut res = 0.0f64;
    let cols: Vec<CVector> = (0..n).map(|i| basis.column(i).into_owned()).collect();
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let p = coords(&pinv, &basis, &alg.multiply(&cols[i], &cols[j]), &mut res);
            for k in 0..n {
                entries.push((i, j, k, p[k]));
            }
        }
    }
    let mut invol = CMatrix::zeros(n, n);
    for i in 0..n {
        let s = coords(&pinv, &basis, &alg.star(&cols[i]), &mut res);
        invol.set_column(i, &s);
    }
    if res > 1e-8 {
        return Err(Error::Axiom(format!("range is not a *-subalgebra (residual {res:.3e})")));
    }
    let mut unit = CVector::zeros(n);
    unit[0] = ONE;
    let algebra = AlgebraPresentation::new(n, entries, unit, invol)?;
    Ok(SubalgebraData { algebra, basis, pinv })
}

/// The hypergroup `(A_φ, δ, ε, κ, h)` of an idempotent state.
pub fn build_hypergroup_from_idempotent(qg: &QuantumGroup, phi: &Functional) -> Result<Hypergroup> {
    let table = irreps(qg)?;
    let rep = is_idempotent_state(qg, &table, phi, 1e-7)?;
    if !rep.passed() {
        return Err(Error::NotIdempotent(format!("{:?}", rep.failures().iter().map(|c| &c.name).collect::<Vec<_>>())));
    }
    let ce = conditional_expectations(qg, phi);
    let e = ce.both;
    let basis = range_basis(&qg.algebra, &qg.haar, &e, qg.algebra.unit());
    let sub = subalgebra(&qg.algebra, basis)?;
    let projection = &sub.pinv * &e;
    finish(qg, sub, &e, projection, 1.0)
}

fn finish(qg: &QuantumGroup, sub: SubalgebraData, map: &CMatrix, projection: CMatrix, haar_norm: f64) -> Result<Hypergroup> {
    let n = sub.basis.ncols();
    let mm = kron(map, map);
    let pp = kron(&sub.pinv, &sub.pinv);
    let bb = kron(&sub.basis, &sub.basis);
    let mut comul = CMatrix::zeros(n * n, n);
    let mut res = 0.0f64;
    for i in 0..n {
        let x = &mm * (&qg.comul * sub.basis.column(i));
        let c = &pp * &x;
        res = res.max(max_abs_vec(&(&bb * &c - &x)));
        comul.set_column(i, &c);
    }
    let mut kappa = CMatrix::zeros(n, n);
    for i in 0..n {
        let s = &qg.antipode * sub.basis.column(i);
        let c = &sub.pinv * &s;
        res = res.max(max_abs_vec(&(&sub.basis * &c - &s)));
        kappa.set_column(i, &c);
    }
    if res > 1e-8 {
        return Err(Error::Axiom(format!("structure maps leave the range (residual {res:.3e})")));
    }
    let counit = sub.basis.transpose() * &qg.counit;
    let haar = sub.basis.transpose() * &qg.haar / r(haar_norm);
    let mut h = Hypergroup::new(sub.algebra, comul, counit, kappa, haar)?;
    h.embedding = Some(sub.basis);
    h.projection = Some(projection);
    Ok(h)
}

/// Residuals of `p = p* = p²`, `Δ(p)(1⊗p) = p⊗p = Δ(p)(p⊗1)` and `S(p) = p`.
pub fn is_group_like_projection(qg: &QuantumGroup, p: &CVector, tol: f64) -> Report {
    let alg = &qg.algebra;
    let t = tensor(alg, alg);
    let mut rep = Report::new();
    rep.push("selfadjoint", max_abs_vec(&(alg.star(p) - p)), tol);
    rep.push("idempotent", max_abs_vec(&(alg.multiply(p, p) - p)), tol);
    rep.push_bool("nonzero", max_abs_vec(p) > tol);
    let dp = &qg.comul * p;
    let pp = p.kronecker(p);
    let one_p = alg.unit().kronecker(p);
    let p_one = p.kronecker(alg.unit());
    rep.push("comul_right_leg", max_abs_vec(&(t.multiply(&dp, &one_p) - &pp)), tol);
    rep.push("comul_left_leg", max_abs_vec(&(t.multiply(&dp, &p_one) - &pp)), tol);
    rep.push("antipode_invariant", max_abs_vec(&(&qg.antipode * p - p)), tol);
    rep
}

/// The hypergroup `(pAp, δ_p, ε, S, h/h(p))` of a group-like projection.
pub fn build_hypergroup_from_projection(qg: &QuantumGroup, p: &CVector) -> Result<Hypergroup> {
    let rep = is_group_like_projection(qg, p, 1e-7);
    if !rep.passed() {
        return Err(Error::NotGroupLike(format!("{:?}", rep.failures().iter().map(|c| &c.name).collect::<Vec<_>>())));
    }
    let alg = &qg.algebra;
    let compress = alg.left_regular(p) * alg.right_regular(p);
    let hp = qg.haar.dot(p);
    if hp.norm() < 1e-12 {
        return Err(Error::NotGroupLike("Haar state vanishes on the projection".into()));
    }
    let basis = range_basis(alg, &qg.haar, &compress, p);
    let sub = subalgebra(alg, basis)?;
    let projection = &sub.pinv * &compress;
    finish(qg, sub, &compress, projection, hp.re)
}

/// Residuals of the finite hypergroup axioms.
pub fn verify_hypergroup(h: &Hypergroup, tol: f64) -> Report {
    let alg = &h.algebra;
    let d = alg.dim();
    let id = CMatrix::identity(d, d);
    let dl = &h.comul;
    let mut rep = Report::new();
    rep.extend("algebra.", verify_algebra(alg, tol));
    rep.push("coassociativity", max_abs(&(kron(dl, &id) * dl - kron(&id, dl) * dl)), tol);
    let unit = alg.unit();
    rep.push("comul_unital", max_abs_vec(&(dl * unit - unit.kronecker(unit))), tol);
    let t = tensor(alg, alg);
    let mut st = 0.0f64;
    for a in 0..d {
        st = st.max(max_abs_vec(&(dl * alg.star(&alg.basis(a)) - t.star(&dl.column(a).into_owned()))));
    }
    rep.push("comul_star", st, tol);
    rep.push("choi_positive", (-min_choi_eigenvalue(h)).max(0.0), CHOI_TOL);
    let eps = linalg::row(&h.counit);
    rep.push("counit_left", max_abs(&(kron(&eps, &id) * dl - &id)), tol);
    rep.push("counit_right", max_abs(&(kron(&id, &eps) * dl - &id)), tol);
    let mut em = 0.0f64;
    for a in 0..d {
        for b in 0..d {
            em = em.max((h.counit.dot(&alg.basis_product(a, b)) - h.counit[a] * h.counit[b]).norm());
        }
    }
    rep.push("counit_multiplicative", em, tol);
    let hr = linalg::row(&h.haar);
    let h_one = unit * &hr;
    rep.push("haar_left_invariant", max_abs(&(kron(&id, &hr) * dl - &h_one)), tol);
    rep.push("haar_right_invariant", max_abs(&(kron(&hr, &id) * dl - &h_one)), tol);
    rep.push("haar_unital", (h.haar.dot(unit) - ONE).norm(), tol);
    let hb = h.blocks.functional_blocks(&h.haar);
    let herm = hb.iter().map(|b| max_abs(&(b - b.adjoint()))).fold(0.0, f64::max);
    let min_eig = hb.iter().map(linalg::min_eigenvalue).fold(f64::INFINITY, f64::min);
    rep.push("haar_hermitian", herm, tol);
    rep.push("haar_faithful", if min_eig > tol { 0.0 } else { 1.0 }, 0.0);
    rep.push("strong_invariance", strong_invariance_residual(h), tol);
    rep
}

/// Smallest eigenvalue over all blocks of the Choi matrices `Σ_{ij} E_{ij} ⊗ δ(E_{ij})`.
pub fn min_choi_eigenvalue(h: &Hypergroup) -> f64 {
    let bs = &h.blocks;
    let tb = bs.tensor(bs);
    let mut min = f64::INFINITY;
    for (k, &n) in bs.sizes.iter().enumerate() {
        let images: Vec<Vec<CMatrix>> = (0..n * n)
            .map(|ij| tb.blocks_of(&(&h.comul * bs.matrix_unit(k, ij / n, ij % n))))
            .collect();
        for (l, &m) in tb.sizes.iter().enumerate() {
            let choi = CMatrix::from_fn(n * m, n * m, |row, col| {
                let (i, rr) = (row / m, row % m);
                let (j, s) = (col / m, col % m);
                images[i * n + j][l][(rr, s)]
            });
            min = min.min(linalg::min_eigenvalue(&choi));
        }
    }
    min
}

/// `(ι⊗h)[(κ⊗ι)δ(a)(1⊗b)] = (ι⊗h)[(1⊗a)δ(b)]` over basis pairs.
fn strong_invariance_residual(h: &Hypergroup) -> f64 {
    let alg = &h.algebra;
    let d = alg.dim();
    let hab = CMatrix::from_fn(d, d, |a, b| h.haar.dot(&alg.basis_product(a, b)));
    let mut res = 0.0f64;
    for a in 0..d {
        let da = CMatrix::from_fn(d, d, |j, k| h.comul[(j * d + k, a)]);
        for b in 0..d {
            let db = CMatrix::from_fn(d, d, |j, k| h.comul[(j * d + k, b)]);
            let lhs = &h.kappa * (&da * hab.column(b));
            let rhs = &db * hab.row(a).transpose();
            res = res.max(max_abs_vec(&(lhs - rhs)));
        }
    }
    res
}

/// The dual hypergroup on functionals; its Haar state is the normalized left
/// integral `ĥ(ψ(a ·)) = ε(a)` with `ψ = h∘κ`.
pub fn hypergroup_dual(h: &Hypergroup) -> Result<Hypergroup> {
    let d = h.dim();
    let algebra = convolution_algebra(h);
    let mut comul = CMatrix::zeros(d * d, d);
    for (i, j, k, v) in h.algebra.entries() {
        comul[(i * d + j, k)] += v;
    }
    let counit = h.algebra.unit().clone();
    let kappa = h.kappa.transpose();
    let psi = h.kappa.transpose() * &h.haar;
    let gram = CMatrix::from_fn(d, d, |m, j| psi.dot(&h.algebra.basis_product(m, j)));
    let hhat = linalg::inverse(&gram)? * &h.counit;
    let norm = hhat.dot(&h.counit);
    if norm.norm() < 1e-12 {
        return Err(Error::Axiom("left integral of the dual vanishes on the unit".into()));
    }
    Hypergroup::new(algebra, comul, counit, kappa, hhat / norm)
}

/// Irreducible representations of a hypergroup as coefficient families in `H`.
pub fn hypergroup_irreps(h: &Hypergroup) -> Result<IrrepTable> {
    irreps(h)
}

/// `max |h(u^α_{ij} (u^β_{lk})*)|` over `α ≠ β` or `i ≠ l`, and the diagonal values.
pub fn verify_peter_weyl(h: &Hypergroup, table: &IrrepTable, tol: f64) -> Report {
    let alg = &h.algebra;
    let mut off = 0.0f64;
    let mut idx = Vec::new();
    for (a, &n) in table.sizes.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                idx.push((a, i, j, table.coefficient(a, i, j)));
            }
        }
    }
    for (a, i, _j, u) in &idx {
        for (b, l, _k, v) in &idx {
            if a != b || i != l {
                off = off.max(h.haar.dot(&alg.multiply(u, &alg.star(v))).norm());
            }
        }
    }
    let mut rep = Report::new();
    rep.push("peter_weyl_vanishing", off, tol);
    rep
}

/// `(u_{ij})† = u_{ji}` with `a† = κ(a)*`: the irreducibles are †-representations.
pub fn verify_dagger_representations(h: &Hypergroup, table: &IrrepTable, tol: f64) -> Report {
    let alg = &h.algebra;
    let mut res = 0.0f64;
    for (a, &n) in table.sizes.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let dagger = alg.star(&(&h.kappa * table.coefficient(a, i, j)));
                res = res.max(max_abs_vec(&(dagger - table.coefficient(a, j, i))));
            }
        }
    }
    let mut rep = Report::new();
    rep.push("dagger_representations", res, tol);
    rep
}

/// Residuals of `π(ω) = ω∘E_φ` being a hypergroup isomorphism from the dual of
/// `A_φ` onto `Â_p`, where `p` is `φ` seen as an element of the dual quantum group.
pub fn verify_duality_theorem(qg: &QuantumGroup, phi: &Functional, tol: f64) -> Result<Report> {
    let h_phi = build_hypergroup_from_idempotent(qg, phi)?;
    let dual_h = hypergroup_dual(&h_phi)?;
    let ghat = dual_quantum_group(qg)?;
    let mut rep = Report::new();
    rep.extend("group_like.", is_group_like_projection(&ghat, &phi.covec, tol));
    let h_p = build_hypergroup_from_projection(&ghat, &phi.covec)?;
    let n = h_phi.dim();
    if h_p.dim() != n {
        rep.push_bool("dimensions_agree", false);
        return Ok(rep);
    }
    let proj = h_phi.projection.as_ref().expect("built from an idempotent");
    let pinv_p = h_p.embedding.as_ref().expect("built from a projection").clone().pseudo_inverse(1e-12).map_err(|e| Error::Conditioning(e.to_string()))?;
    let emb_p = h_p.embedding.as_ref().unwrap();
    // π(b^i) = b^i ∘ E as a covector on A, i.e. an element of Â
    let mut pi = CMatrix::zeros(n, n);
    let mut res_range = 0.0f64;
    for i in 0..n {
        let w = proj.row(i).transpose();
        let c = &pinv_p * &w;
        res_range = res_range.max(max_abs_vec(&(emb_p * &c - &w)));
        pi.set_column(i, &c);
    }
    rep.push("image_in_compressed_dual", res_range, tol);
    let sv = linalg::singular_values(&pi);
    let smin = sv.last().copied().unwrap_or(0.0);
    rep.push("bijective", if smin > 1e-8 { 0.0 } else { 1.0 }, 0.0);
    let (da, pa) = (&dual_h.algebra, &h_p.algebra);
    let cols: Vec<CVector> = (0..n).map(|i| pi.column(i).into_owned()).collect();
    let mut mult = 0.0f64;
    let mut st = 0.0f64;
    for i in 0..n {
        st = st.max(max_abs_vec(&(&pi * da.star(&da.basis(i)) - pa.star(&cols[i]))));
        for j in 0..n {
            mult = mult.max(max_abs_vec(&(&pi * da.basis_product(i, j) - pa.multiply(&cols[i], &cols[j]))));
        }
    }
    rep.push("multiplicative", mult, tol);
    rep.push("star_preserving", st, tol);
    rep.push("unital", max_abs_vec(&(&pi * da.unit() - pa.unit())), tol);
    rep.push("comultiplication", max_abs(&(kron(&pi, &pi) * &dual_h.comul - &h_p.comul * &pi)), tol);
    rep.push("counit", max_abs_vec(&(pi.transpose() * &h_p.counit - &dual_h.counit)), tol);
    rep.push("haar", max_abs_vec(&(pi.transpose() * &h_p.haar - &dual_h.haar)), tol);
    Ok(rep)
}

/// Output of [`check_hhat_epsilon_inequality`].
#[derive(Debug, Clone)]
pub struct HhatEpsilon {
    pub hhat: f64,
    pub epsilon_hat: f64,
    pub slack: f64,
    pub report: Report,
}

/// For `v` in the dual hypergroup that is a positive functional on its
/// predual: `ĥ(v) ≤ ε̂(v)`, with `v = Σ a^α_{ij} v^α_{ij}` against the
/// irreducible representations and PSD coefficient blocks.
pub fn check_hhat_epsilon_inequality(h_dual: &Hypergroup, v: &CVector, tol: f64) -> Result<HhatEpsilon> {
    if v.len() != h_dual.dim() {
        return Err(Error::Dimension("element does not live on the dual hypergroup".into()));
    }
    let predual = hypergroup_dual(h_dual)?;
    let as_functional = Functional::new(v.clone());
    if !crate::functional::is_positive_functional(&predual, &as_functional, tol) {
        return Err(Error::Domain("element is not a positive functional on the predual".into()));
    }
    let table = irreps(h_dual)?;
    let mut report = Report::new();
    let mut recon = CVector::zeros(v.len());
    let mut psd = true;
    let mut trace_sum = 0.0;
    let mut trivial_coef = 0.0;
    for (a, &n) in table.sizes.iter().enumerate() {
        let block = CMatrix::from_fn(n, n, |i, j| table.dual_unit(a, i, j).dot(v));
        for i in 0..n {
            for j in 0..n {
                recon += table.coefficient(a, i, j) * block[(i, j)];
            }
        }
        psd &= max_abs(&(&block - block.adjoint())) <= tol && linalg::min_eigenvalue(&block) >= -tol;
        trace_sum += block.trace().re;
        if a == table.trivial {
            trivial_coef = block[(0, 0)].re;
        }
    }
    report.push("decomposition", max_abs_vec(&(recon - v)), tol);
    report.push_bool("coefficients_psd", psd);
    let hhat = h_dual.haar.dot(v).re;
    let epsilon_hat = h_dual.counit.dot(v).re;
    report.push("hhat_is_trivial_coefficient", (hhat - trivial_coef).abs(), tol);
    report.push("epsilon_hat_is_trace_sum", (epsilon_hat - trace_sum).abs(), tol);
    report.push("inequality", (hhat - epsilon_hat).max(0.0), tol);
    Ok(HhatEpsilon { hhat, epsilon_hat, slack: epsilon_hat - hhat, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroup;
    use crate::idempotent::subgroup_haar;
    use crate::quantum_group::builtin;

    #[test]
    fn quantum_group_is_a_hypergroup() {
        for name in ["c:S3", "g:S3", "c:Z4"] {
            let h = Hypergroup::from_quantum_group(&builtin(name).unwrap());
            let rep = verify_hypergroup(&h, 1e-9);
            assert!(rep.passed(), "{name}: {:?}", rep.failures());
        }
    }

    #[test]
    fn double_coset_hypergroup_of_s3() {
        let qg = builtin("c:S3").unwrap();
        let phi = subgroup_haar(6, &[0, 1]);
        assert!(verify_conditional_expectations(&qg, &phi, 1e-9).passed());
        let h = build_hypergroup_from_idempotent(&qg, &phi).unwrap();
        assert_eq!(h.dim(), 2);
        let rep = verify_hypergroup(&h, 1e-9);
        assert!(rep.passed(), "{:?}", rep.failures());
        let t = hypergroup_irreps(&h).unwrap();
        assert!(verify_peter_weyl(&h, &t, 1e-9).passed());
        let dag = verify_dagger_representations(&h, &t, 1e-9);
        assert!(dag.passed(), "{:?}", dag.failures());
    }

    #[test]
    fn duality_theorem_on_subgroups() {
        let g = FiniteGroup::s3();
        let qg = builtin("c:S3").unwrap();
        for sub in g.subgroups() {
            let phi = subgroup_haar(6, &sub);
            let rep = verify_duality_theorem(&qg, &phi, 1e-8).unwrap();
            assert!(rep.passed(), "{sub:?}: {:?}", rep.failures());
        }
    }

    #[test]
    fn dual_hypergroup_verifies() {
        let qg = builtin("c:Z4").unwrap();
        let h = build_hypergroup_from_idempotent(&qg, &subgroup_haar(4, &[0, 2])).unwrap();
        let hd = hypergroup_dual(&h).unwrap();
        let rep = verify_hypergroup(&hd, 1e-9);
        assert!(rep.passed(), "{:?}", rep.failures());
    }

    #[test]
    fn non_cp_comultiplication_fails_choi() {
        let qg = builtin("g:S3").unwrap();
        let mut h = Hypergroup::from_quantum_group(&qg);
        let bs = &h.blocks;
        // transpose inside every block, then comultiply
        let d = h.dim();
        let mut tr = CMatrix::zeros(d, d);
        for (k, &n) in bs.sizes.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    tr.set_column(bs.index(k, i, j), &bs.matrix_unit(k, j, i));
                }
            }
        }
        let tmap = &tr * &bs.iso;
        h.comul = &h.comul * tmap;
        let rep = verify_hypergroup(&h, 1e-9);
        assert!(!rep.get("choi_positive").unwrap().pass);
    }

    #[test]
    fn non_idempotent_rejected() {
        let qg = builtin("c:Z3").unwrap();
        let phi = Functional::new(linalg::unit_vector(3, 1));
        assert!(matches!(build_hypergroup_from_idempotent(&qg, &phi), Err(Error::NotIdempotent(_))));
    }

    #[test]
    fn hhat_inequality_on_positive_functional() {
        let qg = builtin("c:S3").unwrap();
        let h = Hypergroup::from_quantum_group(&qg);
        let hd = hypergroup_dual(&h).unwrap();
        // a positive functional on C(S3) read as an element of the dual
        let v = CVector::from_fn(6, |i, _| r(0.05 + 0.1 * i as f64));
        let out = check_hhat_epsilon_inequality(&hd, &v, 1e-9).unwrap();
        assert!(out.report.passed(), "{:?}", out.report.failures());
        assert!(out.slack >= -1e-12);
    }
}
