//! Finite quantum groups: structure maps, axiom verification, Haar state and
//! irreducible corepresentations.

use crate::algebra::{self, tensor, verify_algebra, AlgebraPresentation, BlockStructure};
use crate::error::{Error, Result};
use crate::functional::{convolution_algebra, ConvolutionStructure, Functional};
use crate::groups::FiniteGroup;
use crate::linalg::{self, kron, max_abs, max_abs_vec, r, CMatrix, CVector, ONE, ZERO};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumGroup {
    pub algebra: AlgebraPresentation,
    pub blocks: BlockStructure,
    pub comul: CMatrix,
    pub counit: CVector,
    pub antipode: CMatrix,
    /// Always recomputed from the invariance equations.
    pub haar: CVector,
    /// Haar state supplied with the input, if any, kept for comparison.
    pub supplied_haar: Option<CVector>,
}

impl ConvolutionStructure for QuantumGroup {
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
        &self.antipode
    }
    fn haar(&self) -> &CVector {
        &self.haar
    }
}

impl QuantumGroup {
    /// Assembles the structure maps, decomposes the algebra and solves for the Haar state.
    pub fn new(
        algebra: AlgebraPresentation,
        comul: CMatrix,
        counit: CVector,
        antipode: CMatrix,
        supplied_haar: Option<CVector>,
    ) -> Result<Self> {
        let d = algebra.dim();
        if comul.shape() != (d * d, d) {
            return Err(Error::Dimension(format!("comultiplication is {:?}, expected ({}, {d})", comul.shape(), d * d)));
        }
        if counit.len() != d || antipode.shape() != (d, d) {
            return Err(Error::Dimension("counit or antipode has the wrong size".into()));
        }
        if let Some(h) = &supplied_haar {
            if h.len() != d {
                return Err(Error::Dimension("supplied Haar state has the wrong length".into()));
            }
        }
        let blocks = algebra::wedderburn(&algebra)?;
        let haar = solve_haar(&algebra, &comul)?;
        Ok(Self { algebra, blocks, comul, counit, antipode, haar, supplied_haar })
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `Δ(x)` in `A ⊗ A` coordinates.
    pub fn apply_comul(&self, x: &CVector) -> CVector {
        &self.comul * x
    }

    pub fn apply_antipode(&self, x: &CVector) -> CVector {
        &self.antipode * x
    }
}

/// Solves `(ι⊗h)Δ = h(·)1 = (h⊗ι)Δ`, `h(1) = 1`. The homogeneous system must
/// have a one-dimensional solution space.
pub fn solve_haar(alg: &AlgebraPresentation, comul: &CMatrix) -> Result<CVector> {
    let d = alg.dim();
    let unit = alg.unit();
    let mut m = CMatrix::zeros(2 * d * d, d);
    for i in 0..d {
        for p in 0..d {
            let row_l = i * d + p;
            let row_r = d * d + i * d + p;
            for k in 0..d {
                m[(row_l, k)] += comul[(p * d + k, i)];
                m[(row_r, k)] += comul[(k * d + p, i)];
            }
            m[(row_l, i)] -= unit[p];
            m[(row_r, i)] -= unit[p];
        }
    }
    let ns = linalg::null_space(&m, 1e-10);
    if ns.ncols() != 1 {
        return Err(Error::Axiom(format!(
            "Haar invariance equations have a {}-dimensional solution space",
            ns.ncols()
        )));
    }
    let h = ns.column(0).into_owned();
    let h1 = h.dot(unit);
    if h1.norm() < 1e-12 {
        return Err(Error::Axiom("invariant functional vanishes on the unit".into()));
    }
    Ok(h / h1)
}

/// Recomputes the Haar state from the invariance equations.
pub fn haar_state(qg: &QuantumGroup) -> Result<Functional> {
    solve_haar(&qg.algebra, &qg.comul).map(Functional::new)
}

/// Residuals of all quantum-group axioms on basis elements.
pub fn verify_cqg(qg: &QuantumGroup, tol: f64) -> Report {
    let mut rep = Report::new();
    rep.extend("algebra.", verify_algebra(&qg.algebra, tol));
    verify_structure_maps(qg, tol, &mut rep);
    let alg = &qg.algebra;
    let d = alg.dim();
    let s = &qg.antipode;
    let id = CMatrix::identity(d, d);
    rep.push("antipode_squared", max_abs(&(s * s - &id)), tol);
    let j = alg.invol();
    // S(x*) = S(x)*  ⇔  S J = J conj(S)
    rep.push("antipode_star", max_abs(&(s * j - j * s.map(|z| z.conj()))), tol);
    let mut sstar = 0.0f64;
    for i in 0..d {
        let e = alg.basis(i);
        let y = alg.star(&(s * alg.star(&(s * &e))));
        sstar = sstar.max(max_abs_vec(&(y - e)));
    }
    rep.push("star_antipode_involutive", sstar, tol);
    let mut anti = 0.0f64;
    for a in 0..d {
        for b in 0..d {
            let lhs = s * alg.basis_product(a, b);
            let rhs = alg.multiply(&s.column(b).into_owned(), &s.column(a).into_owned());
            anti = anti.max(max_abs_vec(&(lhs - rhs)));
        }
    }
    rep.push("antipode_antimultiplicative", anti, tol);
    let mult = alg.multiplication_matrix();
    let eps_one = alg.unit() * linalg::row(&qg.counit);
    rep.push("antipode_left", max_abs(&(&mult * kron(s, &id) * &qg.comul - &eps_one)), tol);
    rep.push("antipode_right", max_abs(&(&mult * kron(&id, s) * &qg.comul - &eps_one)), tol);
    match solve_haar(alg, &qg.comul) {
        Ok(h) => {
            rep.push("haar_recomputed", max_abs_vec(&(&h - &qg.haar)), tol);
            if let Some(sh) = &qg.supplied_haar {
                rep.push("haar_supplied_matches", max_abs_vec(&(sh - &h)), tol);
            }
        }
        Err(_) => rep.push_bool("haar_recomputed", false),
    }
    rep
}

/// Checks shared by quantum groups: comultiplication, counit and Haar state.
fn verify_structure_maps(qg: &QuantumGroup, tol: f64, rep: &mut Report) {
    let alg = &qg.algebra;
    let d = alg.dim();
    let dl = &qg.comul;
    let id = CMatrix::identity(d, d);
    let unit = alg.unit();
    let uu = unit.kronecker(unit);
    rep.push("comul_unital", max_abs_vec(&(dl * unit - &uu)), tol);
    let t = tensor(alg, alg);
    let mut hom = 0.0f64;
    let cols: Vec<CVector> = (0..d).map(|i| dl.column(i).into_owned()).collect();
    for a in 0..d {
        for b in 0..d {
            let lhs = dl * alg.basis_product(a, b);
            let rhs = t.multiply(&cols[a], &cols[b]);
            hom = hom.max(max_abs_vec(&(lhs - rhs)));
        }
    }
    rep.push("comul_multiplicative", hom, tol);
    let mut st = 0.0f64;
    for a in 0..d {
        let lhs = dl * alg.star(&alg.basis(a));
        let rhs = t.star(&cols[a]);
        st = st.max(max_abs_vec(&(lhs - rhs)));
    }
    rep.push("comul_star", st, tol);
    rep.push("coassociativity", max_abs(&(kron(dl, &id) * dl - kron(&id, dl) * dl)), tol);
    let eps = linalg::row(&qg.counit);
    rep.push("counit_left", max_abs(&(kron(&eps, &id) * dl - &id)), tol);
    rep.push("counit_right", max_abs(&(kron(&id, &eps) * dl - &id)), tol);
    let mut em = 0.0f64;
    for a in 0..d {
        for b in 0..d {
            em = em.max((qg.counit.dot(&alg.basis_product(a, b)) - qg.counit[a] * qg.counit[b]).norm());
        }
        em = em.max((qg.counit.dot(&alg.star(&alg.basis(a))) - qg.counit[a].conj()).norm());
    }
    rep.push("counit_star_homomorphism", em, tol);
    let h = linalg::row(&qg.haar);
    let h_one = unit * &h;
    rep.push("haar_left_invariant", max_abs(&(kron(&id, &h) * dl - &h_one)), tol);
    rep.push("haar_right_invariant", max_abs(&(kron(&h, &id) * dl - &h_one)), tol);
    rep.push("haar_unital", (qg.haar.dot(unit) - ONE).norm(), tol);
    let hb = qg.blocks.functional_blocks(&qg.haar);
    let herm = hb.iter().map(|b| max_abs(&(b - b.adjoint()))).fold(0.0, f64::max);
    let min_eig = hb.iter().map(linalg::min_eigenvalue).fold(f64::INFINITY, f64::min);
    rep.push("haar_hermitian", herm, tol);
    rep.push("haar_positive", (-min_eig).max(0.0), tol);
    rep.push("haar_faithful", if min_eig > tol { 0.0 } else { 1.0 }, 0.0);
    let mut tr = 0.0f64;
    for a in 0..d {
        for b in 0..d {
            tr = tr.max((qg.haar.dot(&alg.basis_product(a, b)) - qg.haar.dot(&alg.basis_product(b, a))).norm());
        }
    }
    rep.push("haar_tracial", tr, tol);
}

/// `C(G)`: indicator basis `e_g`, `Δ(e_g) = Σ_{hk=g} e_h ⊗ e_k`, `S(e_g) = e_{g⁻¹}`.
pub fn function_algebra(g: &FiniteGroup) -> Result<QuantumGroup> {
    let n = g.order();
    let alg = AlgebraPresentation::new(
        n,
        (0..n).map(|a| (a, a, a, ONE)),
        CVector::from_element(n, ONE),
        CMatrix::identity(n, n),
    )?;
    let mut comul = CMatrix::zeros(n * n, n);
    for a in 0..n {
        for b in 0..n {
            comul[(a * n + b, g.mul(a, b))] = ONE;
        }
    }
    let mut counit = CVector::zeros(n);
    counit[g.identity()] = ONE;
    let mut antipode = CMatrix::zeros(n, n);
    for a in 0..n {
        antipode[(g.inv(a), a)] = ONE;
    }
    QuantumGroup::new(alg, comul, counit, antipode, None)
}

/// `ℂ[G]`: `λ_g λ_h = λ_{gh}`, `λ_g* = λ_{g⁻¹}`, `Δλ_g = λ_g ⊗ λ_g`.
pub fn group_algebra(g: &FiniteGroup) -> Result<QuantumGroup> {
    let n = g.order();
    let mut unit = CVector::zeros(n);
    unit[g.identity()] = ONE;
    let mut invol = CMatrix::zeros(n, n);
    for a in 0..n {
        invol[(g.inv(a), a)] = ONE;
    }
    let mut entries = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            entries.push((a, b, g.mul(a, b), ONE));
        }
    }
    let alg = AlgebraPresentation::new(n, entries, unit, invol.clone())?;
    let mut comul = CMatrix::zeros(n * n, n);
    for a in 0..n {
        comul[(a * n + a, a)] = ONE;
    }
    let counit = CVector::from_element(n, ONE);
    QuantumGroup::new(alg, comul, counit, invol, None)
}

/// Names of the built-in quantum groups.
pub const BUILTIN_NAMES: [&str; 10] =
    ["c:Z2", "c:Z3", "c:Z4", "c:Z2xZ2", "c:S3", "g:Z2", "g:Z3", "g:Z4", "g:Z2xZ2", "g:S3"];

/// `c:NAME` is the function algebra and `g:NAME` the group algebra of a built-in group.
pub fn builtin(name: &str) -> Result<QuantumGroup> {
    let (kind, group) = name
        .split_once(':')
        .ok_or_else(|| Error::Malformed(format!("unknown built-in '{name}'")))?;
    let g = FiniteGroup::builtin(group).ok_or_else(|| Error::Malformed(format!("unknown group '{group}'")))?;
    match kind {
        "c" => function_algebra(&g),
        "g" => group_algebra(&g),
        _ => Err(Error::Malformed(format!("unknown built-in '{name}'"))),
    }
}

/// Irreducible unitary corepresentations `u^α = [u^α_{ij}]` with coefficients in the algebra.
///
/// Obtained by decomposing the convolution algebra of functionals: its matrix
/// units `ω^α_{ij}` are dual to the coefficients, `ω^α_{ij}(u^β_{kl}) = δ_{αβ}δ_{ik}δ_{jl}`.
#[derive(Debug, Clone, PartialEq)]
pub struct IrrepTable {
    pub sizes: Vec<usize>,
    /// Block structure of the convolution algebra; the Fourier image of a
    /// functional is its block decomposition there.
    pub dual_blocks: BlockStructure,
    /// Index of the trivial corepresentation `u = 1`.
    pub trivial: usize,
}

impl IrrepTable {
    /// Coordinates of `u^α_{ij}`.
    pub fn coefficient(&self, alpha: usize, i: usize, j: usize) -> CVector {
        self.dual_blocks.iso.row(self.dual_blocks.index(alpha, i, j)).transpose()
    }

    /// Covector of the dual matrix unit `ω^α_{ij}`.
    pub fn dual_unit(&self, alpha: usize, i: usize, j: usize) -> CVector {
        self.dual_blocks.matrix_unit(alpha, i, j)
    }

    pub fn num_classes(&self) -> usize {
        self.sizes.len()
    }

    /// `Σ_α n_α`.
    pub fn fourier_dim(&self) -> usize {
        self.sizes.iter().sum()
    }
}

pub fn irreps<S: ConvolutionStructure + ?Sized>(s: &S) -> Result<IrrepTable> {
    let dual = convolution_algebra(s);
    let dual_blocks = algebra::wedderburn(&dual)?;
    let sizes = dual_blocks.sizes.clone();
    let unit = s.algebra().unit();
    let scale = max_abs_vec(unit).max(1.0);
    let mut trivial = None;
    for (a, &n) in sizes.iter().enumerate() {
        if n == 1 {
            let u = dual_blocks.iso.row(dual_blocks.index(a, 0, 0)).transpose();
            if max_abs_vec(&(u - unit)) <= 1e-7 * scale {
                trivial = Some(a);
                break;
            }
        }
    }
    let trivial = trivial.ok_or_else(|| Error::Axiom("no trivial corepresentation found".into()))?;
    Ok(IrrepTable { sizes, dual_blocks, trivial })
}

/// `h(u^α_{ij} (u^β_{kl})*) = δ_{αβ} δ_{ik} δ_{jl} / n_α`.
pub fn check_orthogonality(qg: &QuantumGroup, table: &IrrepTable, tol: f64) -> Report {
    check_orthogonality_with(&qg.algebra, &qg.haar, table, tol)
}

pub(crate) fn check_orthogonality_with(alg: &AlgebraPresentation, haar: &CVector, table: &IrrepTable, tol: f64) -> Report {
    let mut rep = Report::new();
    let mut idx = Vec::new();
    for (a, &n) in table.sizes.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                idx.push((a, i, j, table.coefficient(a, i, j)));
            }
        }
    }
    let mut res = 0.0f64;
    let mut diag = 0.0f64;
    for (a, i, j, u) in &idx {
        for (b, k, l, v) in &idx {
            let val = haar.dot(&alg.multiply(u, &alg.star(v)));
            let expect = if a == b && i == k && j == l { r(1.0 / table.sizes[*a] as f64) } else { ZERO };
            let err = (val - expect).norm();
            res = res.max(err);
            if a == b && i == k && j == l {
                diag = diag.max(err);
            }
        }
    }
    rep.push("orthogonality", res, tol);
    rep.push("orthogonality_diagonal", diag, tol);
    rep
}

/// Residuals of the corepresentation identities `Δ(u_{ij}) = Σ_k u_{ik} ⊗ u_{kj}`,
/// `ε(u_{ij}) = δ_{ij}` and `S(u_{ij}) = u_{ji}*`.
pub fn check_corepresentations<S: ConvolutionStructure + ?Sized>(s: &S, table: &IrrepTable, tol: f64) -> Report {
    let alg = s.algebra();
    let mut rep = Report::new();
    let (mut co, mut eps, mut anti) = (0.0f64, 0.0f64, 0.0f64);
    for (a, &n) in table.sizes.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let u = table.coefficient(a, i, j);
                let mut expect = CVector::zeros(alg.dim() * alg.dim());
                for k in 0..n {
                    expect += table.coefficient(a, i, k).kronecker(&table.coefficient(a, k, j));
                }
                co = co.max(max_abs_vec(&(s.comul() * &u - expect)));
                let want = if i == j { ONE } else { ZERO };
                eps = eps.max((s.counit().dot(&u) - want).norm());
                let su = s.antipode() * &u;
                anti = anti.max(max_abs_vec(&(su - alg.star(&table.coefficient(a, j, i)))));
            }
        }
    }
    rep.push("corep_comultiplication", co, tol);
    rep.push("corep_counit", eps, tol);
    rep.push("corep_antipode", anti, tol);
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_verify() {
        for name in BUILTIN_NAMES {
            let qg = builtin(name).unwrap();
            let rep = verify_cqg(&qg, 1e-9);
            assert!(rep.passed(), "{name}: {:?}", rep.failures());
        }
    }

    #[test]
    fn haar_of_function_algebra_is_uniform() {
        let qg = builtin("c:S3").unwrap();
        for i in 0..6 {
            assert!((qg.haar[i] - r(1.0 / 6.0)).norm() < 1e-12);
        }
        let qg = builtin("g:S3").unwrap();
        assert!((qg.haar[0] - ONE).norm() < 1e-12);
    }

    #[test]
    fn irreps_of_s3_function_algebra() {
        let qg = builtin("c:S3").unwrap();
        let t = irreps(&qg).unwrap();
        assert_eq!(t.sizes, vec![1, 1, 2]);
        assert!(check_orthogonality(&qg, &t, 1e-9).passed());
        assert!(check_corepresentations(&qg, &t, 1e-9).passed());
    }

    #[test]
    fn group_algebra_of_s3_blocks_and_corepresentations() {
        let qg = builtin("g:S3").unwrap();
        let mut sizes = qg.blocks.sizes.clone();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 2]);
        let t = irreps(&qg).unwrap();
        assert_eq!(t.sizes, vec![1; 6]);
        assert!(check_orthogonality(&qg, &t, 1e-9).passed());
    }

    #[test]
    fn irreps_of_z2_are_characters() {
        let qg = builtin("c:Z2").unwrap();
        let t = irreps(&qg).unwrap();
        assert_eq!(t.sizes, vec![1, 1]);
        let triv = t.coefficient(t.trivial, 0, 0);
        assert!(max_abs_vec(&(triv - CVector::from_element(2, ONE))) < 1e-12);
        let other = t.coefficient(1 - t.trivial, 0, 0);
        assert!(max_abs_vec(&(other - CVector::from_vec(vec![ONE, -ONE]))) < 1e-12);
    }

    #[test]
    fn perturbed_comultiplication_fails() {
        let mut qg = builtin("c:Z3").unwrap();
        qg.comul[(1, 1)] += r(1e-3);
        let rep = verify_cqg(&qg, 1e-9);
        assert!(!rep.get("coassociativity").unwrap().pass || !rep.get("comul_multiplicative").unwrap().pass);
        assert!(solve_haar(&qg.algebra, &qg.comul).is_err());
    }

    #[test]
    fn bad_antipode_fails() {
        let mut qg = builtin("g:Z3").unwrap();
        qg.antipode = CMatrix::identity(3, 3);
        let rep = verify_cqg(&qg, 1e-9);
        assert!(!rep.get("antipode_left").unwrap().pass);
    }

    #[test]
    fn unknown_builtin_is_an_error() {
        assert!(builtin("c:Z7").is_err());
        assert!(builtin("x:Z2").is_err());
    }
}
