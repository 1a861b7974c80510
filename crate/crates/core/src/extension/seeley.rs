//! Reflection extension across coordinate hyperplanes: the classical
//! geometric-node construction matching K derivatives at the boundary.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

/// Coefficients a_k with sum a_k (-b_k)^j = 1 for j = 0..K, b_k = 2^k.
/// Computed exactly (Lagrange evaluation at 1 over the nodes -2^k).
#[derive(Debug, Clone)]
pub struct SeeleyCoefficients {
    pub order: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

pub const SEELEY_ORDER_CAP: usize = 12;

impl SeeleyCoefficients {
    pub fn new(order: usize) -> Result<Self> {
        if order > SEELEY_ORDER_CAP {
            return Err(Error::Config(format!(
                "reflection order {order} exceeds cap {SEELEY_ORDER_CAP}"
            )));
        }
        let nodes: Vec<BigRational> = (0..=order)
            .map(|k| BigRational::from_integer(BigInt::from(-(1i64 << k))))
            .collect();
        let one = BigRational::one();
        let mut a = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut num = BigRational::one();
            let mut den = BigRational::one();
            for m in 0..=order {
                if m == k {
                    continue;
                }
                num *= &one - &nodes[m];
                den *= &nodes[k] - &nodes[m];
            }
            let q = num / den;
            a.push(crate::invariant::rational_to_f64(&q));
        }
        let b: Vec<f64> = (0..=order).map(|k| (1u64 << k) as f64).collect();
        Ok(SeeleyCoefficients { order, a, b })
    }

    /// Verify the defining moment identities (exactly solvable system);
    /// the residual is relative to the term magnitudes, which grow like
    /// b_K^j and dominate the floating-point error.
    pub fn residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..=self.order {
            let mut s = 0.0;
            let mut mag = 1.0_f64;
            for (&a, &b) in self.a.iter().zip(&self.b) {
                let term = a * (-b).powi(j as i32);
                s += term;
                mag = mag.max(term.abs());
            }
            worst = worst.max((s - 1.0).abs() / mag);
        }
        worst
    }
}

/// Extend a function given on the closed orthant of R^d across all walls by
/// iterated one-dimensional reflections. The interior evaluator is consulted
/// only at points with nonnegative coordinates.
pub fn orthant_extend(
    coeffs: &SeeleyCoefficients,
    interior: &dyn Fn(&[f64]) -> Complex64,
    v: &[f64],
) -> Complex64 {
    let mut point = v.to_vec();
    reflect_rec(coeffs, interior, &mut point, 0)
}

fn reflect_rec(
    coeffs: &SeeleyCoefficients,
    interior: &dyn Fn(&[f64]) -> Complex64,
    point: &mut Vec<f64>,
    axis: usize,
) -> Complex64 {
    if axis == point.len() {
        return interior(point);
    }
    let x = point[axis];
    if x >= 0.0 {
        return reflect_rec(coeffs, interior, point, axis + 1);
    }
    let mut acc = Complex64::ZERO;
    for (&a, &b) in coeffs.a.iter().zip(&coeffs.b) {
        point[axis] = -b * x;
        acc += a * reflect_rec(coeffs, interior, point, axis + 1);
    }
    point[axis] = x;
    acc
}
