//! Fourier transform on functionals and the dual quantum group.
//!
//! The dual of `(A, Δ)` lives on the functionals `A*` with product `⋆`, unit
//! `ε`, coproduct `Δ̂(ω)(x ⊗ y) = ω(xy)`, antipode `ω ↦ ω∘S` and Haar state
//! `ĥ(φ) = Σ_α n_α Tr φ̂(α) / Σ_α n_α²`. Its basis is the dual basis `e^i`, so
//! the bidual is canonically identified with `A` through the identity matrix.

use crate::error::{Error, Result};
use crate::functional::{convolution_algebra, Functional, FourierImage};
use crate::linalg::{max_abs, max_abs_vec, r, CMatrix, CVector};
use crate::quantum_group::{irreps, IrrepTable, QuantumGroup};
use crate::report::Report;

/// `φ̂(α)_{ij} = φ(u^α_{ij})`.
pub fn fourier(table: &IrrepTable, phi: &Functional) -> Result<FourierImage> {
    if phi.dim() != table.dual_blocks.dim() {
        return Err(Error::Dimension("functional and irrep table disagree in dimension".into()));
    }
    Ok(table.dual_blocks.blocks_of(&phi.covec))
}

/// The functional with a given Fourier image.
pub fn inverse_fourier(table: &IrrepTable, image: &[CMatrix]) -> Result<Functional> {
    if image.len() != table.sizes.len() || image.iter().zip(&table.sizes).any(|(m, &n)| m.shape() != (n, n)) {
        return Err(Error::Dimension("Fourier image has the wrong block shapes".into()));
    }
    Ok(Functional::new(table.dual_blocks.from_blocks(image)))
}

/// `ĥ` on the dual basis `e^a`.
pub fn dual_haar(table: &IrrepTable) -> CVector {
    let d = table.dual_blocks.dim();
    let mut h = CVector::zeros(d);
    for (a, &n) in table.sizes.iter().enumerate() {
        for i in 0..n {
            h += table.coefficient(a, i, i) * r(n as f64);
        }
    }
    let total: usize = table.sizes.iter().map(|n| n * n).sum();
    h / r(total as f64)
}

pub fn dual_quantum_group(qg: &QuantumGroup) -> Result<QuantumGroup> {
    let d = qg.dim();
    let algebra = convolution_algebra(qg);
    let mut comul = CMatrix::zeros(d * d, d);
    for (i, j, k, v) in qg.algebra.entries() {
        comul[(i * d + j, k)] += v;
    }
    let counit = qg.algebra.unit().clone();
    let antipode = qg.antipode.transpose();
    let table = irreps(qg)?;
    let formula = dual_haar(&table);
    QuantumGroup::new(algebra, comul, counit, antipode, Some(formula))
}

/// Residuals of transporting every structure map of `a` along `t : A → B`.
pub fn transport_residuals(a: &QuantumGroup, b: &QuantumGroup, t: &CMatrix, tol: f64) -> Report {
    let mut rep = Report::new();
    let d = a.dim();
    if b.dim() != d || t.shape() != (d, d) {
        rep.push_bool("dimensions", false);
        return rep;
    }
    let (aa, ba) = (&a.algebra, &b.algebra);
    let mut mult = 0.0f64;
    let imgs: Vec<CVector> = (0..d).map(|i| t.column(i).into_owned()).collect();
    for i in 0..d {
        for j in 0..d {
            let lhs = t * aa.basis_product(i, j);
            let rhs = ba.multiply(&imgs[i], &imgs[j]);
            mult = mult.max(max_abs_vec(&(lhs - rhs)));
        }
    }
    rep.push("multiplication", mult, tol);
    rep.push("unit", max_abs_vec(&(t * aa.unit() - ba.unit())), tol);
    let mut st = 0.0f64;
    for i in 0..d {
        st = st.max(max_abs_vec(&(t * aa.star(&aa.basis(i)) - ba.star(&imgs[i]))));
    }
    rep.push("involution", st, tol);
    let tt = t.kronecker(t);
    rep.push("comultiplication", max_abs(&(&tt * &a.comul - &b.comul * t)), tol);
    rep.push("counit", max_abs_vec(&(t.transpose() * &b.counit - &a.counit)), tol);
    rep.push("antipode", max_abs(&(&b.antipode * t - t * &a.antipode)), tol);
    rep.push("haar", max_abs_vec(&(t.transpose() * &b.haar - &a.haar)), tol);
    rep
}

/// Searches for a basis permutation carrying `a` onto `b`, trying the identity first.
/// Returns the permutation matrix and its transport report.
pub fn find_isomorphism(a: &QuantumGroup, b: &QuantumGroup, tol: f64) -> Option<(CMatrix, Report)> {
    let d = a.dim();
    if b.dim() != d || a.blocks.sizes != b.blocks.sizes {
        return None;
    }
    let id = CMatrix::identity(d, d);
    let rep = transport_residuals(a, b, &id, tol);
    if rep.passed() {
        return Some((id, rep));
    }
    if d > 8 {
        return None;
    }
    let mut perm = vec![usize::MAX; d];
    let mut used = vec![false; d];
    if search(a, b, 0, &mut perm, &mut used, tol) {
        let mut t = CMatrix::zeros(d, d);
        for (i, &p) in perm.iter().enumerate() {
            t[(p, i)] = r(1.0);
        }
        let rep = transport_residuals(a, b, &t, tol);
        return Some((t, rep));
    }
    None
}

fn search(a: &QuantumGroup, b: &QuantumGroup, i: usize, perm: &mut Vec<usize>, used: &mut Vec<bool>, tol: f64) -> bool {
    let d = a.dim();
    if i == d {
        let mut t = CMatrix::zeros(d, d);
        for (x, &p) in perm.iter().enumerate() {
            t[(p, x)] = r(1.0);
        }
        return transport_residuals(a, b, &t, tol).passed();
    }
    for cand in 0..d {
        if used[cand]
            || (a.counit[i] - b.counit[cand]).norm() > tol
            || (a.haar[i] - b.haar[cand]).norm() > tol
            || (a.algebra.unit()[i] - b.algebra.unit()[cand]).norm() > tol
        {
            continue;
        }
        perm[i] = cand;
        // structure constants among already assigned indices must agree
        let ok = (0..=i).all(|x| {
            (0..=i).all(|y| {
                let pa = a.algebra.basis_product(x, y);
                let pb = b.algebra.basis_product(perm[x], perm[y]);
                (0..=i).all(|k| (pa[k] - pb[perm[k]]).norm() <= tol)
            })
        });
        if ok {
            used[cand] = true;
            if search(a, b, i + 1, perm, used, tol) {
                return true;
            }
            used[cand] = false;
        }
        perm[i] = usize::MAX;
    }
    false
}

/// `dual(dual(G)) ≅ G` through the canonical evaluation map, plus the check
/// that the dual Haar formula agrees with the solved invariant state.
pub fn check_biduality(qg: &QuantumGroup, tol: f64) -> Result<Report> {
    let dual = dual_quantum_group(qg)?;
    let bidual = dual_quantum_group(&dual)?;
    let mut rep = Report::new();
    let id = CMatrix::identity(qg.dim(), qg.dim());
    rep.extend("bidual.", transport_residuals(qg, &bidual, &id, tol));
    if let Some(f) = &dual.supplied_haar {
        rep.push("dual_haar_formula", max_abs_vec(&(f - &dual.haar)), tol);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::{convolve, star};
    use crate::quantum_group::{builtin, verify_cqg};
    use crate::linalg::c;

    #[test]
    fn dual_verifies_and_bidual_matches() {
        for name in ["c:Z3", "g:S3", "c:S3"] {
            let qg = builtin(name).unwrap();
            let dual = dual_quantum_group(&qg).unwrap();
            assert!(verify_cqg(&dual, 1e-9).passed(), "{name}");
            assert!(check_biduality(&qg, 1e-9).unwrap().passed(), "{name}");
        }
    }

    #[test]
    fn dual_of_function_algebra_is_group_algebra() {
        for g in ["Z2", "Z3", "S3"] {
            let a = dual_quantum_group(&builtin(&format!("c:{g}")).unwrap()).unwrap();
            let b = builtin(&format!("g:{g}")).unwrap();
            assert!(find_isomorphism(&a, &b, 1e-9).is_some(), "{g}");
        }
    }

    #[test]
    fn permuted_presentation_is_found() {
        use crate::groups::FiniteGroup;
        use crate::quantum_group::function_algebra;
        let sigma = [0usize, 2, 1, 3];
        let table = (0..4).map(|a| (0..4).map(|b| sigma[(sigma[a] + sigma[b]) % 4]).collect()).collect();
        let relabeled = function_algebra(&FiniteGroup::from_table(table).unwrap()).unwrap();
        let a = builtin("c:Z4").unwrap();
        let (t, rep) = find_isomorphism(&a, &relabeled, 1e-9).unwrap();
        assert!(rep.passed());
        assert!(max_abs(&(t - CMatrix::identity(4, 4))) > 0.5);
        assert!(find_isomorphism(&a, &builtin("c:Z2xZ2").unwrap(), 1e-9).is_none());
    }

    #[test]
    fn fourier_is_multiplicative_and_star_preserving() {
        let qg = builtin("c:S3").unwrap();
        let t = irreps(&qg).unwrap();
        let a = Functional::new(CVector::from_fn(6, |i, _| c(0.1 * i as f64, 0.3 - 0.05 * i as f64)));
        let b = Functional::new(CVector::from_fn(6, |i, _| c(1.0 / (i as f64 + 1.0), 0.2)));
        let ab = convolve(&qg, &a, &b).unwrap();
        let (fa, fb, fab) = (fourier(&t, &a).unwrap(), fourier(&t, &b).unwrap(), fourier(&t, &ab).unwrap());
        for k in 0..fa.len() {
            assert!(max_abs(&(&fa[k] * &fb[k] - &fab[k])) < 1e-12);
        }
        let fs = fourier(&t, &star(&qg, &a).unwrap()).unwrap();
        for k in 0..fa.len() {
            assert!(max_abs(&(fa[k].adjoint() - &fs[k])) < 1e-12);
        }
        let back = inverse_fourier(&t, &fa).unwrap();
        assert!(back.distance_max(&a) < 1e-12);
    }
}
