use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::banded::BandedLu;
use super::{residual_norms, Hamiltonian, Spectrum};
use crate::error::{Error, Result};

/// Matrices below this dimension are diagonalized densely.
pub const DENSE_LIMIT: usize = 2000;

/// Full dense diagonalization.
pub fn solve_dense(h: &Hamiltonian) -> Spectrum {
    let eig = SymmetricEigen::new(h.to_dense());
    let mut order: Vec<usize> = (0..h.dimension).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = eig.eigenvectors.select_columns(&order);
    let residuals = residual_norms(h, &eigenvalues, &eigenvectors);
    Spectrum {
        eigenvalues,
        eigenvectors,
        residuals,
        hopping_tau: h.hopping_tau,
        complete: true,
    }
}

/// The `k` eigenpairs of smallest `|E|`, ascending in `E`.
///
/// Uses the dense path below [`DENSE_LIMIT`] sites and shift-invert subspace
/// iteration above it.
pub fn solve_near_zero(h: &Hamiltonian, k: usize) -> Result<Spectrum> {
    check_k(h, k)?;
    if h.dimension < DENSE_LIMIT {
        Ok(select_near_zero(solve_dense(h), k))
    } else {
        solve_shift_invert(h, k, &IterativeOptions::default())
    }
}

fn check_k(h: &Hamiltonian, k: usize) -> Result<()> {
    if k == 0 || k > h.dimension {
        return Err(Error::InvalidParameter(format!(
            "k = {k} outside 1..={}",
            h.dimension
        )));
    }
    Ok(())
}

fn select_near_zero(full: Spectrum, k: usize) -> Spectrum {
    if k == full.len() {
        return full;
    }
    let mut by_abs: Vec<usize> = (0..full.len()).collect();
    by_abs.sort_by(|&a, &b| {
        full.eigenvalues[a]
            .abs()
            .total_cmp(&full.eigenvalues[b].abs())
            .then(a.cmp(&b))
    });
    let mut keep: Vec<usize> = by_abs[..k].to_vec();
    keep.sort_unstable();
    Spectrum {
        eigenvalues: keep.iter().map(|&i| full.eigenvalues[i]).collect(),
        eigenvectors: full.eigenvectors.select_columns(&keep),
        residuals: keep.iter().map(|&i| full.residuals[i]).collect(),
        hopping_tau: full.hopping_tau,
        complete: false,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IterativeOptions {
    /// Spectral shift in units of τ. Kept off zero because sublattice
    /// imbalance produces exact zero modes.
    pub shift: f64,
    /// Extra block vectors beyond `k`; `None` means `max(k, 8)`.
    pub extra: Option<usize>,
    pub max_iterations: usize,
    /// Residual target in units of τ.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for IterativeOptions {
    fn default() -> Self {
        IterativeOptions {
            shift: 1.618e-3,
            extra: None,
            max_iterations: 300,
            tolerance: 1e-10,
            seed: 0x5eed,
        }
    }
}

/// Shift-invert block subspace iteration with Rayleigh-Ritz extraction.
///
/// Converges to the block of eigenvalues nearest `σ`. The `k` smallest `|E|`
/// are accepted only when every requested pair meets the residual target and
/// the outermost Ritz value lies farther from `σ` than `|E_k| + |σ|`, so no
/// eigenvalue of smaller magnitude can sit outside the block.
pub fn solve_shift_invert(h: &Hamiltonian, k: usize, opts: &IterativeOptions) -> Result<Spectrum> {
    check_k(h, k)?;
    let n = h.dimension;
    let tau = h.hopping_tau;
    let m = (k + opts.extra.unwrap_or_else(|| k.max(8))).min(n);
    if m == n {
        return Ok(select_near_zero(solve_dense(h), k));
    }
    let entries: Vec<(usize, usize, f64)> = h.entries().collect();
    let zeros = vec![0.0; n];
    let mut sigma = opts.shift * tau;
    let mut lu = None;
    for _ in 0..4 {
        match BandedLu::factor(n, &entries, &zeros, sigma) {
            Ok(f) => {
                lu = Some(f);
                break;
            }
            Err(Error::SingularShift { .. }) => sigma *= 1.7,
            Err(e) => return Err(e),
        }
    }
    let lu = lu.ok_or(Error::SingularShift { pivot: 0 })?;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x = DMatrix::from_fn(n, m, |_, _| rng.random_range(-1.0..1.0));
    let mut hx_col = vec![0.0; n];
    let mut worst = f64::INFINITY;
    let mut converged = 0;
    for iteration in 1..=opts.max_iterations {
        let mut y = x.clone();
        for mut col in y.column_iter_mut() {
            lu.solve(col.as_mut_slice());
        }
        let q = y.qr().q();
        let mut hq = DMatrix::zeros(n, m);
        for c in 0..m {
            h.apply(q.column(c).as_slice(), &mut hx_col);
            hq.column_mut(c).copy_from_slice(&hx_col);
        }
        let t = q.transpose() * &hq;
        let t = (&t + t.transpose()) * 0.5;
        let eig = SymmetricEigen::new(t);
        let ritz = &q * &eig.eigenvectors;
        let hritz = &hq * &eig.eigenvectors;
        let theta: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let res: Vec<f64> = (0..m)
            .map(|c| (hritz.column(c) - ritz.column(c) * theta[c]).norm())
            .collect();

        let mut by_abs: Vec<usize> = (0..m).collect();
        by_abs.sort_by(|&a, &b| theta[a].abs().total_cmp(&theta[b].abs()).then(a.cmp(&b)));
        let wanted = &by_abs[..k];
        converged = wanted
            .iter()
            .filter(|&&c| res[c] <= opts.tolerance * tau)
            .count();
        worst = wanted.iter().fold(0.0f64, |w, &c| w.max(res[c]));
        let e_k = theta[by_abs[k - 1]].abs();
        let reach = theta.iter().fold(0.0f64, |r, &t| r.max((t - sigma).abs()));
        let covered = reach > e_k + sigma.abs();

        if converged == k && covered {
            let mut keep = wanted.to_vec();
            keep.sort_by(|&a, &b| theta[a].total_cmp(&theta[b]).then(a.cmp(&b)));
            let eigenvalues: Vec<f64> = keep.iter().map(|&c| theta[c]).collect();
            let eigenvectors = ritz.select_columns(&keep);
            let residuals = residual_norms(h, &eigenvalues, &eigenvectors);
            return Ok(Spectrum {
                eigenvalues,
                eigenvectors,
                residuals,
                hopping_tau: tau,
                complete: false,
            });
        }
        x = ritz;
        if iteration == opts.max_iterations {
            break;
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iterations,
        converged,
        requested: k,
        worst_residual: worst,
    })
}
