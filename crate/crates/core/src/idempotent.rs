//! Idempotent states `φ ⋆ φ = φ`.
//!
//! On the Fourier side an idempotent state is a family of orthogonal
//! projections with `φ̂(trivial) = 1`. Enumeration walks every rank pattern of
//! such projections; patterns with ranks strictly between `0` and `n_α` leave a
//! Grassmannian of candidates, searched for positive points by minimizing the
//! squared negative part of the coefficient-block spectra.

use crate::dual::{fourier, inverse_fourier};
use crate::error::{Error, Result};
use crate::functional::{
    convolve_unchecked, counit_functional, functional_norm, is_state, positivity_defect, Functional,
};
use crate::linalg::{self, c, max_abs, r, CMatrix, CVector, ONE};
use crate::quantum_group::{IrrepTable, QuantumGroup};
use crate::report::Report;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Residuals of: state, `φ⋆φ = φ`, `φ = φ∘S`, projection-valued Fourier image.
pub fn is_idempotent_state(qg: &QuantumGroup, table: &IrrepTable, phi: &Functional, tol: f64) -> Result<Report> {
    let mut rep = Report::new();
    rep.push("positive", positivity_defect(qg, phi), tol);
    rep.push("unital", (phi.eval(qg.algebra.unit()) - ONE).norm(), tol);
    let sq = convolve_unchecked(qg, phi, phi);
    rep.push("idempotent", functional_norm(qg, &(&sq - phi)), tol);
    let phis = Functional::new(qg.antipode.transpose() * &phi.covec);
    rep.push("antipode_invariant", functional_norm(qg, &(&phis - phi)), tol);
    let img = fourier(table, phi)?;
    let mut proj = 0.0f64;
    for b in &img {
        proj = proj.max(max_abs(&(b * b - b))).max(max_abs(&(b - b.adjoint())));
    }
    rep.push("fourier_projections", proj, tol);
    Ok(rep)
}

/// `φ ⋆ φ_b = φ(b) φ` with `φ_b(a) = φ(ab)`, over basis elements `b`.
pub fn check_idempotent_identity(qg: &QuantumGroup, phi: &Functional, tol: f64) -> Report {
    let alg = &qg.algebra;
    let d = alg.dim();
    let mut res = 0.0f64;
    for b in 0..d {
        let eb = alg.basis(b);
        let phib = Functional::new(CVector::from_fn(d, |a, _| phi.eval(&alg.multiply(&alg.basis(a), &eb))));
        let lhs = convolve_unchecked(qg, phi, &phib);
        let rhs = phi.scale(phi.eval(&eb));
        res = res.max(lhs.distance_max(&rhs));
    }
    let mut rep = Report::new();
    rep.push("idempotent_absorbs_densities", res, tol);
    rep
}

/// Cesàro limit `lim (1/N) Σ_{k=1..N} ω^k` of a state.
///
/// Averages are doubled (`A_{2N} = A_N ⋆ (ε + ω^N)/2`) until they stabilize, then
/// polished to an exact idempotent with `X ↦ 3X² - 2X³` inside the commutative
/// algebra generated by `ω`. `max_iter` bounds the number of doublings.
pub fn cesaro_idempotent(qg: &QuantumGroup, omega: &Functional, tol: f64, max_iter: usize) -> Result<Functional> {
    if !is_state(qg, omega, 1e-8) {
        return Err(Error::Domain("Cesàro capture needs a state".into()));
    }
    let eps = counit_functional(qg);
    let mut avg = omega.clone();
    let mut pw = omega.clone();
    let mut settled = false;
    for _ in 0..max_iter {
        let next = convolve_unchecked(qg, &avg, &(&(&eps + &pw) * 0.5));
        pw = convolve_unchecked(qg, &pw, &pw);
        let delta = functional_norm(qg, &(&next - &avg));
        avg = next;
        let defect = functional_norm(qg, &(&convolve_unchecked(qg, &avg, &avg) - &avg));
        if delta < 1e-3 && defect < 1e-2 {
            settled = true;
            break;
        }
    }
    if !settled {
        return Err(Error::Convergence(format!("Cesàro averages did not settle within {max_iter} doublings")));
    }
    polish_idempotent(qg, &avg, tol)
}

/// Iterates `X ↦ 3X² - 2X³` on a near-idempotent functional until `‖X⋆X - X‖ ≤ tol/100`.
pub fn polish_idempotent(qg: &QuantumGroup, start: &Functional, tol: f64) -> Result<Functional> {
    let mut x = start.clone();
    for _ in 0..200 {
        let x2 = convolve_unchecked(qg, &x, &x);
        let defect = functional_norm(qg, &(&x2 - &x));
        if defect <= tol * 1e-2 {
            return Ok(x);
        }
        let x3 = convolve_unchecked(qg, &x2, &x);
        x = &(&x2 * 3.0) - &(&x3 * 2.0);
    }
    let defect = functional_norm(qg, &(&convolve_unchecked(qg, &x, &x) - &x));
    if defect <= tol {
        Ok(x)
    } else {
        Err(Error::Convergence(format!("idempotent polish stalled at defect {defect:.3e}")))
    }
}

/// Output of [`enumerate_idempotents_bruteforce`].
#[derive(Debug, Clone)]
pub struct IdempotentList {
    pub states: Vec<Functional>,
    /// Set when the evaluation budget ran out before every pattern was searched.
    pub partial: bool,
}

pub struct EnumerationConfig {
    pub starts_per_pattern: usize,
    pub evals_per_start: usize,
    pub budget: usize,
    pub seed: u64,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        Self { starts_per_pattern: 24, evals_per_start: 3000, budget: 4_000_000, seed: 7 }
    }
}

pub const MAX_ENUMERATION_DIM: usize = 8;
const DEDUP_TOL: f64 = 1e-6;
const ACCEPT_TOL: f64 = 1e-9;

pub fn enumerate_idempotents_bruteforce(qg: &QuantumGroup, table: &IrrepTable) -> Result<IdempotentList> {
    enumerate_idempotents_with(qg, table, &EnumerationConfig::default())
}

pub fn enumerate_idempotents_with(qg: &QuantumGroup, table: &IrrepTable, cfg: &EnumerationConfig) -> Result<IdempotentList> {
    let d = qg.dim();
    if d > MAX_ENUMERATION_DIM {
        return Err(Error::TooLarge(format!("enumeration supports dimension at most {MAX_ENUMERATION_DIM}, got {d}")));
    }
    let sizes = &table.sizes;
    let mut found: Vec<Functional> = Vec::new();
    let mut evals_left = cfg.budget;
    let mut partial = false;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut ranks = vec![0usize; sizes.len()];
    ranks[table.trivial] = 1;
    loop {
        let free: Vec<usize> = (0..sizes.len()).filter(|&a| ranks[a] > 0 && ranks[a] < sizes[a]).collect();
        if free.is_empty() {
            let image: Vec<CMatrix> = sizes
                .iter()
                .zip(&ranks)
                .map(|(&n, &k)| if k == 0 { CMatrix::zeros(n, n) } else { CMatrix::identity(n, n) })
                .collect();
            let phi = inverse_fourier(table, &image)?;
            if positivity_defect(qg, &phi) <= ACCEPT_TOL {
                push_unique(qg, &mut found, refine(qg, phi));
            }
        } else if evals_left == 0 {
            partial = true;
        } else {
            let search = GrassmannSearch { qg, table, ranks: &ranks, free: &free };
            for _ in 0..cfg.starts_per_pattern {
                let limit = cfg.evals_per_start.min(evals_left);
                if limit == 0 {
                    partial = true;
                    break;
                }
                let x0: Vec<f64> = (0..search.nparams()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let (x, fx, used) = search.minimize(x0, limit);
                evals_left -= used.min(evals_left);
                if fx < 1e-18 {
                    let phi = search.functional(&x)?;
                    if positivity_defect(qg, &phi) <= ACCEPT_TOL {
                        push_unique(qg, &mut found, refine(qg, phi));
                    }
                }
            }
        }
        if !next_pattern(&mut ranks, sizes, table.trivial) {
            break;
        }
    }
    found.sort_by(|a, b| {
        let (na, nb) = (functional_norm(qg, a), functional_norm(qg, b));
        ((na * 1e8).round() as i64)
            .cmp(&((nb * 1e8).round() as i64))
            .then_with(|| lex_key(a).cmp(&lex_key(b)))
    });
    Ok(IdempotentList { states: found, partial })
}

/// Alternates idempotent polishing with hermitian symmetrization and unit normalization.
fn refine(qg: &QuantumGroup, phi: Functional) -> Functional {
    let mut x = phi;
    for _ in 0..4 {
        if let Ok(p) = polish_idempotent(qg, &x, 1e-13) {
            x = p;
        }
        let blocks: Vec<CMatrix> = crate::functional::coefficient_blocks(qg, &x).iter().map(linalg::hermitian_part).collect();
        x = Functional::new(qg.blocks.functional_from_blocks(&blocks));
        let total = x.eval(qg.algebra.unit()).re;
        x = &x * (1.0 / total);
    }
    x
}

fn lex_key(f: &Functional) -> Vec<(i64, i64)> {
    f.covec.iter().map(|z| ((z.re * 1e8).round() as i64, (z.im * 1e8).round() as i64)).collect()
}

fn push_unique(qg: &QuantumGroup, found: &mut Vec<Functional>, phi: Functional) {
    if found.iter().all(|g| functional_norm(qg, &(g - &phi)) > DEDUP_TOL) {
        found.push(phi);
    }
}

fn next_pattern(ranks: &mut [usize], sizes: &[usize], trivial: usize) -> bool {
    for a in (0..ranks.len()).rev() {
        if a == trivial {
            continue;
        }
        if ranks[a] < sizes[a] {
            ranks[a] += 1;
            return true;
        }
        ranks[a] = 0;
    }
    false
}

struct GrassmannSearch<'a> {
    qg: &'a QuantumGroup,
    table: &'a IrrepTable,
    ranks: &'a [usize],
    free: &'a [usize],
}

impl GrassmannSearch<'_> {
    fn nparams(&self) -> usize {
        self.free.iter().map(|&a| 2 * self.table.sizes[a] * self.ranks[a]).sum()
    }

    fn functional(&self, x: &[f64]) -> Result<Functional> {
        let sizes = &self.table.sizes;
        let mut image: Vec<CMatrix> = sizes
            .iter()
            .zip(self.ranks)
            .map(|(&n, &k)| if k == 0 { CMatrix::zeros(n, n) } else { CMatrix::identity(n, n) })
            .collect();
        let mut off = 0;
        for &a in self.free {
            let (n, k) = (sizes[a], self.ranks[a]);
            let z = CMatrix::from_fn(n, k, |i, j| {
                let p = off + 2 * (i * k + j);
                c(x[p], x[p + 1])
            });
            off += 2 * n * k;
            image[a] = projection_onto_columns(&z);
        }
        inverse_fourier(self.table, &image)
    }

    fn objective(&self, x: &[f64]) -> f64 {
        match self.functional(x) {
            Ok(phi) => crate::functional::coefficient_blocks(self.qg, &phi)
                .iter()
                .map(|b| {
                    let asym: f64 = (b - b.adjoint()).iter().map(|z| z.norm_sqr()).sum();
                    let neg: f64 = linalg::hermitian_eigen(b).0.iter().filter(|&&v| v < 0.0).map(|v| v * v).sum();
                    neg + 0.25 * asym
                })
                .sum(),
            Err(_) => f64::INFINITY,
        }
    }

    /// Nelder–Mead with restarts from the incumbent; returns `(x, f(x), evaluations)`.
    fn minimize(&self, x0: Vec<f64>, max_evals: usize) -> (Vec<f64>, f64, usize) {
        let mut best = x0;
        let mut fbest = self.objective(&best);
        let mut used = 1;
        let mut step = 0.5;
        while used < max_evals && fbest > 1e-24 {
            let (x, fx, u) = nelder_mead(|p| self.objective(p), &best, step, max_evals - used);
            used += u;
            let improved = fx < fbest * 0.999;
            if fx < fbest {
                best = x;
                fbest = fx;
            }
            if !improved {
                step *= 0.1;
                if step < 1e-9 {
                    break;
                }
            }
        }
        (best, fbest, used)
    }
}

/// Orthogonal projection onto the column span of `z` (full column rank assumed).
fn projection_onto_columns(z: &CMatrix) -> CMatrix {
    let g = z.adjoint() * z;
    match g.clone().try_inverse() {
        Some(gi) => z * gi * z.adjoint(),
        None => {
            let (p, _) = linalg::clip_psd(&(z * z.adjoint()));
            let s = linalg::op_norm(&p).max(1e-300);
            p / r(s)
        }
    }
}

fn nelder_mead(f: impl Fn(&[f64]) -> f64, x0: &[f64], step: f64, max_evals: usize) -> (Vec<f64>, f64, usize) {
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let mut evals = 0;
    let eval = |x: Vec<f64>, evals: &mut usize| {
        *evals += 1;
        let v = f(&x);
        (x, v)
    };
    simplex.push(eval(x0.to_vec(), &mut evals));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        simplex.push(eval(x, &mut evals));
    }
    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let (fl, fh) = (simplex[0].1, simplex[n].1);
        if fl < 1e-26 || (fh - fl).abs() <= 1e-30 {
            break;
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in simplex.iter().take(n) {
            for k in 0..n {
                centroid[k] += x[k] / n as f64;
            }
        }
        let worst = simplex[n].0.clone();
        let along = |t: f64| -> Vec<f64> { (0..n).map(|k| centroid[k] + t * (worst[k] - centroid[k])).collect() };
        let refl = eval(along(-1.0), &mut evals);
        if refl.1 < simplex[0].1 {
            let exp = eval(along(-2.0), &mut evals);
            simplex[n] = if exp.1 < refl.1 { exp } else { refl };
        } else if refl.1 < simplex[n - 1].1 {
            simplex[n] = refl;
        } else {
            let con = if refl.1 < fh { eval(along(-0.5), &mut evals) } else { eval(along(0.5), &mut evals) };
            if con.1 < fh.min(refl.1) {
                simplex[n] = con;
            } else {
                let x_best = simplex[0].0.clone();
                for s in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = (0..n).map(|k| x_best[k] + 0.5 * (s.0[k] - x_best[k])).collect();
                    *s = eval(x, &mut evals);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    let (x, v) = simplex.swap_remove(0);
    (x, v, evals)
}

/// Haar state of a subgroup `H` as a state on `C(G)`: the uniform measure on `H`.
pub fn subgroup_haar(order: usize, subgroup: &[usize]) -> Functional {
    let w = 1.0 / subgroup.len() as f64;
    let mut v = CVector::zeros(order);
    for &h in subgroup {
        v[h] = r(w);
    }
    Functional::new(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroup;
    use crate::quantum_group::{builtin, irreps};

    #[test]
    fn subgroup_measures_are_idempotent() {
        let g = FiniteGroup::s3();
        let qg = builtin("c:S3").unwrap();
        let t = irreps(&qg).unwrap();
        for h in g.subgroups() {
            let phi = subgroup_haar(6, &h);
            assert!(is_idempotent_state(&qg, &t, &phi, 1e-9).unwrap().passed());
            assert!(check_idempotent_identity(&qg, &phi, 1e-9).passed());
        }
        let not = subgroup_haar(6, &[0, 1, 3]);
        assert!(!is_idempotent_state(&qg, &t, &not, 1e-9).unwrap().passed());
    }

    #[test]
    fn enumeration_on_z4_finds_three() {
        let qg = builtin("c:Z4").unwrap();
        let t = irreps(&qg).unwrap();
        let list = enumerate_idempotents_bruteforce(&qg, &t).unwrap();
        assert!(!list.partial);
        assert_eq!(list.states.len(), 3);
    }

    #[test]
    fn cesaro_of_generator_point_mass_is_haar() {
        let qg = builtin("c:Z3").unwrap();
        let omega = Functional::new(linalg::unit_vector(3, 1));
        let phi = cesaro_idempotent(&qg, &omega, 1e-9, 64).unwrap();
        assert!(phi.distance_max(&Functional::new(qg.haar.clone())) < 1e-9);
    }

    #[test]
    fn enumeration_matches_subgroups_of_s3() {
        let g = FiniteGroup::s3();
        for name in ["c:S3", "g:S3"] {
            let qg = builtin(name).unwrap();
            let t = irreps(&qg).unwrap();
            let list = enumerate_idempotents_bruteforce(&qg, &t).unwrap();
            assert_eq!(list.states.len(), g.subgroups().len(), "{name}");
            for phi in &list.states {
                assert!(is_idempotent_state(&qg, &t, phi, 1e-8).unwrap().passed(), "{name}");
            }
        }
    }

    #[test]
    fn too_large_is_rejected() {
        let a = FiniteGroup::product(&FiniteGroup::s3(), &FiniteGroup::cyclic(2));
        let qg = crate::quantum_group::function_algebra(&a).unwrap();
        let t = irreps(&qg).unwrap();
        assert!(matches!(enumerate_idempotents_bruteforce(&qg, &t), Err(Error::TooLarge(_))));
    }
}
