//! Gauss-Hermite and Gauss-Legendre rules of arbitrary order.
//!
//! Rules are computed by Newton iteration on the orthogonal-polynomial
//! recurrences, not read from hardcoded tables, so any order up to 64 is
//! available for convergence studies. Nodes come out sorted ascending and
//! exactly antisymmetric: each positive root is stored together with its
//! negation, so downstream sums are deterministic.

use crate::error::{Error, Result};

const MAX_ORDER: usize = 64;
const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// Which weight function a rule integrates against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureKind {
    /// Weight e^(-t^2) on (-inf, inf).
    Hermite,
    /// Weight 1 on [-1, 1].
    Legendre,
}

/// A fixed quadrature rule: ascending nodes with matching positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    pub order: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Evaluates sum of weight_i * f(node_i).
    pub fn integrate<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(f64) -> f64,
    {
        let mut acc = 0.0;
        for (i, (&x, &w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let y = f(x);
            if !y.is_finite() {
                return Err(Error::NonFiniteEvaluation { index: i, node: x });
            }
            acc += w * y;
        }
        Ok(acc)
    }
}

fn check_order(order: usize) -> Result<()> {
    if (1..=MAX_ORDER).contains(&order) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            field: "order",
            message: format!("quadrature order must lie in 1..={MAX_ORDER}, got {order}"),
        })
    }
}

/// Gauss-Legendre rule on [-1, 1], exact for polynomials of degree
/// 2*order - 1.
pub fn gauss_legendre(order: usize) -> Result<QuadratureRule> {
    check_order(order)?;
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 1..=m {
        // Tracked root in descending order; asymptotic initial guess.
        let mut z = if 2 * i - 1 == n {
            0.0
        } else {
            (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos()
        };
        let mut pp = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            // Three-term recurrence: (j+1) P_{j+1} = (2j+1) z P_j - j P_{j-1}.
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= NEWTON_TOL {
                break;
            }
        }
        nodes[i - 1] = -z;
        nodes[n - i] = z;
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        weights[i - 1] = w;
        weights[n - i] = w;
    }
    Ok(QuadratureRule {
        kind: QuadratureKind::Legendre,
        order,
        nodes,
        weights,
    })
}

/// Gauss-Hermite rule for weight e^(-t^2), exact for polynomials of degree
/// 2*order - 1 against that weight.
pub fn gauss_hermite(order: usize) -> Result<QuadratureRule> {
    check_order(order)?;
    let n = order;
    // Scratch arrays in descending node order; initial guesses chain off
    // previously found roots.
    let mut desc = vec![0.0; n];
    let mut wdesc = vec![0.0; n];
    let m = n.div_ceil(2);
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let mut z = 0.0;
    for i in 1..=m {
        z = if 2 * i - 1 == n {
            0.0
        } else if i == 1 {
            let anu = 2.0 * n as f64 + 1.0;
            anu.sqrt() - 1.85575 * anu.powf(-1.0 / 6.0)
        } else if i == 2 {
            z - 1.14 * (n as f64).powf(0.426) / z
        } else if i == 3 {
            1.86 * z - 0.86 * desc[0]
        } else if i == 4 {
            1.91 * z - 0.91 * desc[1]
        } else {
            2.0 * z - desc[i - 3]
        };
        let mut pp = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            // Orthonormal recurrence: p_{j} = z sqrt(2/j) p_{j-1}
            // - sqrt((j-1)/j) p_{j-2}, starting from pi^(-1/4).
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= NEWTON_TOL {
                break;
            }
        }
        desc[i - 1] = z;
        desc[n - i] = -z;
        let w = 2.0 / (pp * pp);
        wdesc[i - 1] = w;
        wdesc[n - i] = w;
    }
    desc.reverse();
    wdesc.reverse();
    Ok(QuadratureRule {
        kind: QuadratureKind::Hermite,
        order,
        nodes: desc,
        weights: wdesc,
    })
}
