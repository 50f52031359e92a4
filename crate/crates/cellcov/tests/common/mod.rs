//! Numerical oracles shared by the integration suites. Everything here is
//! deliberately independent of the crate's own quadrature and closed
//! forms: adaptive integration, an eigenvalue-based quadrature
//! construction, and a KS statistic.

#![allow(dead_code)]

use nalgebra::DMatrix;

/// Adaptive Simpson integration with the standard /15 error estimate.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 60)
}

/// Integrates over [a, b] split at the given interior breakpoints, so
/// integrands with features on very different scales converge cleanly.
pub fn adaptive_simpson_split(
    f: &dyn Fn(f64) -> f64,
    mut a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: f64,
) -> f64 {
    let mut total = 0.0;
    for &p in breakpoints {
        if p > a && p < b {
            total += adaptive_simpson(f, a, p, tol);
            a = p;
        }
    }
    total + adaptive_simpson(f, a, b, tol)
}

/// Gaussian quadrature nodes and weights from the symmetric tridiagonal
/// Jacobi matrix: nodes are its eigenvalues, weights are mu0 times the
/// squared first components of the normalized eigenvectors.
pub fn golub_welsch(offdiag: &[f64], mu0: f64) -> (Vec<f64>, Vec<f64>) {
    let n = offdiag.len() + 1;
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for (i, &b) in offdiag.iter().enumerate() {
        jacobi[(i, i + 1)] = b;
        jacobi[(i + 1, i)] = b;
    }
    let eig = jacobi.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let first = eig.eigenvectors.column(k)[0];
            (eig.eigenvalues[k], mu0 * first * first)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    pairs.into_iter().unzip()
}

/// Gauss-Legendre rule on [-1, 1] from the Jacobi recurrence
/// b_k = k/sqrt(4k^2 - 1), total weight 2.
pub fn golub_welsch_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let offdiag: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        })
        .collect();
    golub_welsch(&offdiag, 2.0)
}

/// Gauss-Hermite rule for weight e^(-x^2) from b_k = sqrt(k/2), total
/// weight sqrt(pi).
pub fn golub_welsch_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let offdiag: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    golub_welsch(&offdiag, std::f64::consts::PI.sqrt())
}

/// Two-sided Kolmogorov-Smirnov statistic of samples against a CDF.
pub fn ks_statistic(samples: &mut [f64], cdf: &dyn Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let c = cdf(x);
        d = d.max((c - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - c).abs());
    }
    d
}

/// Standard normal density.
pub fn normal_pdf(z: f64, mean: f64, sd: f64) -> f64 {
    let u = (z - mean) / sd;
    (-0.5 * u * u).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt())
}
