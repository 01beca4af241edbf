//! Poisson calculus relative to an idempotent state `φ`.
//!
//! For `φ`-bi-invariant `u` (`u⋆φ = φ⋆u = u`) the series
//! `exp_φ(u) = φ + Σ_{n≥1} u^n/n!` and `log_φ(u) = -Σ_{k≥1} (φ-u)^k/k`
//! are computed in the convolution algebra, where `φ` acts as the unit.
//! Generators `u` with `u(1) = 0` that are conditionally positive definite
//! split as `u = r(v - φ)` with `v` a `φ`-bi-invariant state.

use crate::error::{Error, Result};
use crate::functional::{
    convolve_unchecked, functional_norm, is_hermitian_functional, min_block_eigenvalue, positivity_defect,
    ConvolutionStructure, Functional,
};
use crate::hypergroup::Hypergroup;
use crate::linalg::{self, c, r, CMatrix, ONE};
use crate::report::Report;
use rand::Rng;

/// Iteration cap for the series; the tail bounds stop far earlier in range.
const MAX_TERMS: usize = 100_000;
/// Gram eigenvalues below this fraction of the largest one span the null ideal.
const NULL_IDEAL_CUT: f64 = 1e-10;
const BISECTION_STEPS: usize = 60;
/// Smallest admissible `t‖u‖` accepted as a genuine positivity direction.
const MIN_STEP: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct PoissonDecomposition {
    pub phi: Functional,
    pub rate: f64,
    pub jump: Functional,
    pub generator: Functional,
}

fn bi_invariance_residual<S: ConvolutionStructure + ?Sized>(s: &S, phi: &Functional, u: &Functional) -> f64 {
    let l = convolve_unchecked(s, phi, u);
    let rt = convolve_unchecked(s, u, phi);
    functional_norm(s, &(&l - u)).max(functional_norm(s, &(&rt - u)))
}

fn scaled(tol: f64, norm: f64) -> f64 {
    tol * (1.0 + norm)
}

fn check_dims<S: ConvolutionStructure + ?Sized>(s: &S, fs: &[&Functional]) -> Result<()> {
    if fs.iter().any(|f| f.dim() != s.dim()) {
        return Err(Error::Dimension("functional and structure disagree in dimension".into()));
    }
    Ok(())
}

/// `u⋆φ = φ⋆u = u` within `tol·(1 + ‖u‖)`.
pub fn is_bi_invariant<S: ConvolutionStructure + ?Sized>(s: &S, phi: &Functional, u: &Functional, tol: f64) -> bool {
    bi_invariance_residual(s, phi, u) <= scaled(tol, functional_norm(s, u))
}

fn require_bi_invariant<S: ConvolutionStructure + ?Sized>(s: &S, phi: &Functional, u: &Functional, tol: f64) -> Result<()> {
    check_dims(s, &[phi, u])?;
    let res = bi_invariance_residual(s, phi, u);
    if res > scaled(tol.max(1e-10), functional_norm(s, u)) {
        return Err(Error::Domain(format!("functional is not bi-invariant (residual {res:.3e})")));
    }
    Ok(())
}

/// `φ + Σ_{n≥1} u^n/n!`, summed until `‖u‖^N/N! · e^{‖u‖} < tol`.
pub fn exp_phi<S: ConvolutionStructure + ?Sized>(s: &S, phi: &Functional, u: &Functional, tol: f64) -> Result<Functional> {
    require_bi_invariant(s, phi, u, tol)?;
    let norm = functional_norm(s, u);
    let mut sum = phi.clone();
    let mut term = phi.clone();
    let mut bound = norm.exp();
    for n in 1..=MAX_TERMS {
        if bound < tol {
            return Ok(sum);
        }
        term = convolve_unchecked(s, &term, u) * (1.0 / n as f64);
        sum = &sum + &term;
        bound *= norm / n as f64;
    }
    Err(Error::Convergence("exponential series did not reach its tail bound".into()))
}

/// `-Σ_{k≥1} (φ-u)^k/k`, summed until `q^N/(N(1-q)) < tol` with `q = ‖φ-u‖ < 1`.
pub fn log_phi<S: ConvolutionStructure + ?Sized>(s: &S, phi: &Functional, u: &Functional, tol: f64) -> Result<Functional> {
    require_bi_invariant(s, phi, u, tol)?;
    let x = phi - u;
    let q = functional_norm(s, &x);
    if q >= 1.0 {
        return Err(Error::Domain(format!("‖u - φ‖ = {q:.6} is outside the logarithm's radius")));
    }
    let mut sum = Functional::zeros(s.dim());
    let mut pow = x.clone();
    let mut qk = q;
    for k in 1..=MAX_TERMS {
        sum = &sum - &(&pow * (1.0 / k as f64));
        qk *= q;
        if qk / ((k + 1) as f64 * (1.0 - q)) < tol {
            return Ok(sum);
        }
        pow = convolve_unchecked(s, &pow, &x);
    }
    Err(Error::Convergence("logarithm series did not reach its tail bound".into()))
}

/// Power-norm control for a state `u` with `‖u - φ‖ < 1/2` and `‖u^n - φ‖ < 1/2`:
/// every intermediate power stays within `1/2` of `φ` and `log_φ(u^k) = k log_φ(u)`.
pub fn verify_power_log_control<S: ConvolutionStructure + ?Sized>(
    s: &S,
    phi: &Functional,
    u: &Functional,
    n: u64,
    tol: f64,
) -> Result<Report> {
    check_dims(s, &[phi, u])?;
    let unit = s.algebra().unit();
    if positivity_defect(s, u) > tol.max(1e-9) || (u.eval(unit) - ONE).norm() > tol.max(1e-9) {
        return Err(Error::Domain("u is not a state".into()));
    }
    require_bi_invariant(s, phi, u, tol)?;
    let mut powers = vec![u.clone()];
    for _ in 1..n {
        let next = convolve_unchecked(s, powers.last().expect("nonempty"), u);
        powers.push(next);
    }
    let dist = |f: &Functional| functional_norm(s, &(f - phi));
    if dist(u) >= 0.5 || dist(&powers[powers.len() - 1]) >= 0.5 {
        return Err(Error::Domain("u or its last power is not within 1/2 of φ".into()));
    }
    let worst = powers.iter().map(dist).fold(0.0f64, f64::max);
    let log_u = log_phi(s, phi, u, tol * 1e-3)?;
    let mut log_res = 0.0f64;
    for (k, p) in powers.iter().enumerate() {
        let lk = log_phi(s, phi, p, tol * 1e-3)?;
        log_res = log_res.max(functional_norm(s, &(&lk - &(&log_u * (k + 1) as f64))));
    }
    let mut rep = Report::new();
    rep.push_bool("intermediate_powers_within_half", worst < 0.5);
    rep.push("log_of_powers", log_res, tol);
    Ok(rep)
}

/// `‖u + w‖ = ‖u‖ + ‖w‖` for generators `u, w`.
pub fn check_norm_additivity<S: ConvolutionStructure + ?Sized>(s: &S, u: &Functional, w: &Functional, tol: f64) -> Report {
    let lhs = functional_norm(s, &(u + w));
    let rhs = functional_norm(s, u) + functional_norm(s, w);
    let mut rep = Report::new();
    rep.push("norm_additivity", (lhs - rhs).abs(), tol);
    rep
}

/// The covector of `u` on the basis of `A_φ`.
pub fn restrict_to_aphi(h_phi: &Hypergroup, u: &Functional) -> Result<Functional> {
    h_phi.restrict(u)
}

/// Residuals for the restriction of bi-invariant `u`, `w` to `A_φ`: factorization
/// through `E_φ`, norm preservation, compatibility with `*` and `⋆`, and `φ = ε∘E_φ`.
pub fn verify_restriction<S: ConvolutionStructure + ?Sized>(
    s: &S,
    h_phi: &Hypergroup,
    phi: &Functional,
    u: &Functional,
    w: &Functional,
    tol: f64,
) -> Result<Report> {
    let ur = h_phi.restrict(u)?;
    let wr = h_phi.restrict(w)?;
    let mut rep = Report::new();
    rep.push("factors_through_expectation", h_phi.extend(&ur)?.distance_max(u), tol);
    rep.push("norm_preserved", (functional_norm(s, u) - functional_norm(h_phi, &ur)).abs(), tol);
    let us = crate::functional::star(s, u)?;
    rep.push("star_commutes", h_phi.restrict(&us)?.distance_max(&crate::functional::star(h_phi, &ur)?), tol);
    let uw = convolve_unchecked(s, u, w);
    rep.push("convolution_commutes", h_phi.restrict(&uw)?.distance_max(&convolve_unchecked(h_phi, &ur, &wr)), tol);
    let eps = Functional::new(h_phi.counit.clone());
    rep.push("idempotent_is_counit", h_phi.restrict(phi)?.distance_max(&eps), tol);
    Ok(rep)
}

/// Null ideal `{x : φ(x*x) = 0}` as orthonormal coordinate columns.
fn null_ideal<S: ConvolutionStructure + ?Sized>(s: &S, phi: &Functional) -> CMatrix {
    let alg = s.algebra();
    let d = alg.dim();
    let gram = CMatrix::from_fn(d, d, |i, j| phi.eval(&alg.multiply(&alg.star(&alg.basis(i)), &alg.basis(j))));
    let (vals, vecs) = linalg::hermitian_eigen(&gram);
    let top = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let keep: Vec<usize> = (0..d).filter(|&k| vals[k] <= NULL_IDEAL_CUT * top.max(f64::MIN_POSITIVE)).collect();
    let mut y = CMatrix::zeros(d, keep.len());
    for (t, &k) in keep.iter().enumerate() {
        y.set_column(t, &vecs.column(k));
    }
    y
}

/// Hermitian `u` is conditionally positive definite with respect to `φ` when
/// `[u(y_t* y_s)]` is PSD over a basis of the null ideal of `φ`.
pub fn is_conditionally_positive<S: ConvolutionStructure + ?Sized>(
    s: &S,
    phi: &Functional,
    u: &Functional,
    tol: f64,
) -> Result<bool> {
    check_dims(s, &[phi, u])?;
    let norm = functional_norm(s, u);
    if !is_hermitian_functional(s, u, scaled(tol, norm)) {
        return Err(Error::Domain("functional is not Hermitian".into()));
    }
    let y = null_ideal(s, phi);
    if y.ncols() == 0 {
        return Ok(true);
    }
    let alg = s.algebra();
    let d = alg.dim();
    let q = CMatrix::from_fn(d, d, |i, j| u.eval(&alg.multiply(&alg.star(&alg.basis(i)), &alg.basis(j))));
    // u((Σ a_i e_i)* (Σ b_j e_j)) = Σ conj(a_i) b_j Q_ij
    let m = y.adjoint() * q * &y;
    Ok(linalg::min_eigenvalue(&m) >= -scaled(tol, norm))
}

/// `u = r(v - φ)` with the least rate: `t_max = 1/r` is the largest `t` with
/// `φ + t u` positive, found by bisection on `[0, 2/‖u‖]`.
pub fn levy_decompose<S: ConvolutionStructure + ?Sized>(
    s: &S,
    phi: &Functional,
    u: &Functional,
    tol: f64,
) -> Result<PoissonDecomposition> {
    check_dims(s, &[phi, u])?;
    let unit = s.algebra().unit();
    if positivity_defect(s, phi) > tol.max(1e-9) || (phi.eval(unit) - ONE).norm() > tol.max(1e-9) {
        return Err(Error::Domain("φ is not a state".into()));
    }
    let sq = convolve_unchecked(s, phi, phi);
    if functional_norm(s, &(&sq - phi)) > tol.max(1e-9) {
        return Err(Error::Domain("φ is not idempotent".into()));
    }
    let norm = functional_norm(s, u);
    if !is_hermitian_functional(s, u, scaled(tol, norm)) {
        return Err(Error::Domain("generator is not Hermitian".into()));
    }
    require_bi_invariant(s, phi, u, tol)?;
    if u.eval(unit).norm() > scaled(tol, norm) {
        return Err(Error::Domain("generator does not vanish on the unit".into()));
    }
    if norm <= tol.max(1e-14) {
        return Ok(PoissonDecomposition { phi: phi.clone(), rate: 0.0, jump: phi.clone(), generator: Functional::zeros(s.dim()) });
    }
    let admissible = |t: f64| min_block_eigenvalue(s, &(phi + &(u * t))) >= -tol * t * norm;
    let (mut lo, mut hi) = (0.0f64, 2.0 / norm);
    if admissible(hi) {
        // φ + t u ≥ 0 with t > 2/‖u‖ would give ‖t u‖ > 2 = ‖φ + t u‖ + ‖φ‖
        if admissible(2.0 * hi) {
            return Err(Error::Convergence("no negative direction found for a nonzero generator".into()));
        }
        lo = hi;
    }
    for _ in 0..BISECTION_STEPS {
        if lo == hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if admissible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // steps this short only reflect roundoff in φ on its null directions
    if lo * norm <= MIN_STEP {
        return Err(Error::NotConditionallyPositive("φ + t u fails positivity for every t > 0".into()));
    }
    let rate = 1.0 / lo;
    let jump = phi + &(u * lo);
    if positivity_defect(s, &jump) > 10.0 * tol.max(1e-12) {
        return Err(Error::NotConditionallyPositive("jump functional is not positive".into()));
    }
    Ok(PoissonDecomposition { phi: phi.clone(), rate, jump, generator: u.clone() })
}

/// `e^{-r} Σ_k r^k v^k / k!`, the Poisson series of a decomposition in ordinary
/// convolution powers. For `φ = ε` this is the classical compound Poisson law.
pub fn poisson_series<S: ConvolutionStructure + ?Sized>(s: &S, dec: &PoissonDecomposition, tol: f64) -> Result<Functional> {
    let r = dec.rate;
    // k = 0 contributes e^{-r} φ: the φ-relative unit, since v⋆φ = v
    let mut sum = dec.phi.clone();
    let mut term = dec.phi.clone();
    let mut bound = r.exp();
    for k in 1..=MAX_TERMS {
        if bound < tol {
            return Ok(sum * (-r).exp());
        }
        term = convolve_unchecked(s, &term, &dec.jump) * (r / k as f64);
        sum = &sum + &term;
        bound *= r / k as f64;
    }
    Err(Error::Convergence("Poisson series did not reach its tail bound".into()))
}

/// `ω_t = exp_φ(t u)` for a generator `u` of a convolution semigroup of states.
pub fn semigroup_state<S: ConvolutionStructure + ?Sized>(
    s: &S,
    phi: &Functional,
    u: &Functional,
    t: f64,
    tol: f64,
) -> Result<Functional> {
    check_dims(s, &[phi, u])?;
    if !(t >= 0.0) {
        return Err(Error::Domain("semigroup time must be nonnegative".into()));
    }
    let norm = functional_norm(s, u);
    if u.eval(s.algebra().unit()).norm() > scaled(tol, norm) || !is_conditionally_positive(s, phi, u, tol)? {
        return Err(Error::Domain("functional is not a generator".into()));
    }
    exp_phi(s, phi, &(u * t), tol.min(1e-12))
}

/// A random state with PSD coefficient blocks drawn from complex Gaussians-like entries.
pub fn random_state<S: ConvolutionStructure + ?Sized, R: Rng>(s: &S, rng: &mut R) -> Functional {
    let bs = s.blocks();
    let blocks: Vec<CMatrix> = bs
        .sizes
        .iter()
        .map(|&n| {
            let x = CMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            &x * x.adjoint()
        })
        .collect();
    let total: f64 = blocks.iter().map(|b| b.trace().re).sum();
    let blocks: Vec<CMatrix> = blocks.into_iter().map(|b| b / r(total)).collect();
    Functional::new(bs.functional_from_blocks(&blocks))
}

/// `φ ⋆ w ⋆ φ` for a random state `w`.
pub fn random_bi_invariant_state<S: ConvolutionStructure + ?Sized, R: Rng>(s: &S, phi: &Functional, rng: &mut R) -> Functional {
    let w = random_state(s, rng);
    convolve_unchecked(s, &convolve_unchecked(s, phi, &w), phi)
}

/// A random generator `r(v - φ)` with `v` a random bi-invariant state.
pub fn random_generator<S: ConvolutionStructure + ?Sized, R: Rng>(s: &S, phi: &Functional, rate: f64, rng: &mut R) -> Functional {
    let v = random_bi_invariant_state(s, phi, rng);
    (&v - phi) * rate
}

/// A random Hermitian bi-invariant functional with `u(1) = 0`; conditionally
/// positive or not depending on the draw.
pub fn random_hermitian_bi_invariant<S: ConvolutionStructure + ?Sized, R: Rng>(
    s: &S,
    phi: &Functional,
    rng: &mut R,
) -> Functional {
    let bs = s.blocks();
    let blocks: Vec<CMatrix> = bs
        .sizes
        .iter()
        .map(|&n| {
            let x = CMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            linalg::hermitian_part(&x)
        })
        .collect();
    let w = Functional::new(bs.functional_from_blocks(&blocks));
    let u = convolve_unchecked(s, &convolve_unchecked(s, phi, &w), phi);
    let u1 = u.eval(s.algebra().unit());
    &u - &(phi * u1.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::{counit_functional, is_state};
    use crate::hypergroup::build_hypergroup_from_idempotent;
    use crate::idempotent::subgroup_haar;
    use crate::linalg::unit_vector;
    use crate::quantum_group::builtin;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn delta(d: usize, g: usize) -> Functional {
        Functional::new(unit_vector(d, g))
    }

    #[test]
    fn z2_closed_form() {
        let qg = builtin("c:Z2").unwrap();
        let phi = delta(2, 0);
        let u = &delta(2, 1) - &phi;
        let w = exp_phi(&qg, &phi, &u, 1e-14).unwrap();
        let e = (-1.0f64).exp();
        assert!((w.covec[0].re - e * 1.0f64.cosh()).abs() < 1e-13);
        assert!((w.covec[1].re - e * 1.0f64.sinh()).abs() < 1e-13);
        assert!((w.covec[0].re - 0.567667).abs() < 1e-6);
        assert!((w.covec[1].re - 0.432332).abs() < 1e-6);
    }

    #[test]
    fn power_log_control_on_a_small_generator() {
        let qg = builtin("c:S3").unwrap();
        let phi = subgroup_haar(6, &[0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = random_generator(&qg, &phi, 0.02, &mut rng);
        let w = exp_phi(&qg, &phi, &u, 1e-15).unwrap();
        let rep = verify_power_log_control(&qg, &phi, &w, 5, 1e-8).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
        let far = exp_phi(&qg, &phi, &(&u * 100.0), 1e-15).unwrap();
        assert!(matches!(verify_power_log_control(&qg, &phi, &far, 2, 1e-8), Err(Error::Domain(_))));
    }

    #[test]
    fn generators_add_in_norm() {
        let qg = builtin("g:S3").unwrap();
        let phi = counit_functional(&qg);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = random_generator(&qg, &phi, 0.7, &mut rng);
        let w = random_generator(&qg, &phi, 1.3, &mut rng);
        assert!(check_norm_additivity(&qg, &u, &w, 1e-8).passed());
    }

    #[test]
    fn exp_of_zero_and_log_of_phi() {
        let qg = builtin("c:S3").unwrap();
        let phi = subgroup_haar(6, &[0, 1]);
        let z = Functional::zeros(6);
        assert!(exp_phi(&qg, &phi, &z, 1e-12).unwrap().distance_max(&phi) < 1e-15);
        assert!(log_phi(&qg, &phi, &phi, 1e-12).unwrap().distance_max(&z) < 1e-15);
    }

    #[test]
    fn z2_decomposition() {
        let qg = builtin("c:Z2").unwrap();
        let phi = delta(2, 0);
        let u = (&delta(2, 1) - &phi) * 3.0;
        let dec = levy_decompose(&qg, &phi, &u, 1e-12).unwrap();
        assert!((dec.rate - 3.0).abs() < 1e-9);
        assert!(dec.jump.distance_max(&delta(2, 1)) < 1e-9);
        let zero = levy_decompose(&qg, &phi, &Functional::zeros(2), 1e-12).unwrap();
        assert_eq!(zero.rate, 0.0);
    }

    #[test]
    fn bi_invariance_on_z4() {
        let qg = builtin("c:Z4").unwrap();
        let phi = subgroup_haar(4, &[0, 2]);
        for g in 0..4 {
            assert!(!is_bi_invariant(&qg, &phi, &delta(4, g), 1e-9));
            let orbit = convolve_unchecked(&qg, &phi, &delta(4, g));
            assert!(is_bi_invariant(&qg, &phi, &orbit, 1e-9));
        }
        assert!(is_bi_invariant(&qg, &phi, &phi, 1e-9));
        let h = Functional::new(qg.haar.clone());
        assert!(is_bi_invariant(&qg, &phi, &h, 1e-9));
    }

    #[test]
    fn conditional_positivity_signs() {
        let qg = builtin("g:S3").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let phi = counit_functional(&qg);
        let u = random_generator(&qg, &phi, 0.7, &mut rng);
        assert!(is_conditionally_positive(&qg, &phi, &u, 1e-9).unwrap());
        assert!(!is_conditionally_positive(&qg, &phi, &(-&u), 1e-9).unwrap());
        assert!(is_conditionally_positive(&qg, &phi, &Functional::zeros(6), 1e-9).unwrap());
    }

    #[test]
    fn decomposition_round_trip_and_two_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for name in ["c:S3", "g:S3"] {
            let qg = builtin(name).unwrap();
            let phi = counit_functional(&qg);
            for _ in 0..5 {
                let rate = rng.gen_range(0.1..1.5);
                let u = random_generator(&qg, &phi, rate, &mut rng);
                let dec = levy_decompose(&qg, &phi, &u, 1e-12).unwrap();
                assert!(((&dec.jump - &phi) * dec.rate).distance_max(&u) < 1e-9);
                assert!((dec.rate - functional_norm(&qg, &u) / 2.0).abs() < 1e-8);
                assert!(is_state(&qg, &dec.jump, 1e-9));
                let a = exp_phi(&qg, &phi, &u, 1e-13).unwrap();
                let b = poisson_series(&qg, &dec, 1e-13).unwrap();
                assert!(a.distance_max(&b) < 1e-9);
            }
        }
    }

    #[test]
    fn exp_log_inverse_and_semigroup() {
        let qg = builtin("c:S3").unwrap();
        let phi = subgroup_haar(6, &[0, 3, 4]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = random_generator(&qg, &phi, 0.2, &mut rng);
        let w = exp_phi(&qg, &phi, &u, 1e-14).unwrap();
        assert!(log_phi(&qg, &phi, &w, 1e-14).unwrap().distance_max(&u) < 1e-10);
        let half = semigroup_state(&qg, &phi, &u, 0.5, 1e-12).unwrap();
        assert!(convolve_unchecked(&qg, &half, &half).distance_max(&w) < 1e-10);
        for t in [0.1, 1.0, 10.0] {
            assert!(is_state(&qg, &semigroup_state(&qg, &phi, &u, t, 1e-12).unwrap(), 1e-9));
        }
        let far = (&delta(6, 1) - &phi) * 3.0;
        assert!(matches!(log_phi(&qg, &phi, &(&phi + &far), 1e-12), Err(Error::Domain(_))));
    }

    #[test]
    fn restriction_identities() {
        let qg = builtin("c:S3").unwrap();
        let phi = subgroup_haar(6, &[0, 1]);
        let h = build_hypergroup_from_idempotent(&qg, &phi).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u = random_hermitian_bi_invariant(&qg, &phi, &mut rng);
        let w = random_bi_invariant_state(&qg, &phi, &mut rng);
        let rep = verify_restriction(&qg, &h, &phi, &u, &w, 1e-10).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
    }

    #[test]
    fn non_conditionally_positive_is_rejected() {
        let qg = builtin("c:Z3").unwrap();
        let phi = counit_functional(&qg);
        let u = (&delta(3, 1) - &phi) * -1.0;
        assert!(matches!(levy_decompose(&qg, &phi, &u, 1e-12), Err(Error::NotConditionallyPositive(_))));
    }
}
