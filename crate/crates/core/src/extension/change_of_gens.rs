//! Extension across a polynomial change of generating systems: given f on a
//! closed set F = P(E) and a polynomial right inverse Q of P on E, the
//! function Psi(x - Q(P(x))) f(P(x)) is a global smooth extension of f o P.

use super::cutoffs::Bump;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// A polynomial map R^n -> R^m given componentwise by monomial sums.
#[derive(Debug, Clone)]
pub struct PolyMap {
    pub n_in: usize,
    /// each component: list of (coefficient, exponent vector)
    pub components: Vec<Vec<(f64, Vec<u32>)>>,
}

impl PolyMap {
    pub fn identity(n: usize) -> Self {
        let components = (0..n)
            .map(|i| {
                let mut e = vec![0u32; n];
                e[i] = 1;
                vec![(1.0, e)]
            })
            .collect();
        PolyMap { n_in: n, components }
    }

    /// Affine map x -> a * x + b per coordinate pair (diagonal).
    pub fn diagonal_affine(scales: &[f64], shifts: &[f64]) -> Self {
        let n = scales.len();
        let components = (0..n)
            .map(|i| {
                let mut e = vec![0u32; n];
                e[i] = 1;
                vec![(scales[i], e), (shifts[i], vec![0u32; n])]
            })
            .collect();
        PolyMap { n_in: n, components }
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n_in);
        self.components
            .iter()
            .map(|terms| {
                terms
                    .iter()
                    .map(|(c, e)| {
                        let mut v = *c;
                        for (xi, &k) in x.iter().zip(e) {
                            for _ in 0..k {
                                v *= xi;
                            }
                        }
                        v
                    })
                    .sum()
            })
            .collect()
    }
}

/// The extension operator of the change-of-generators lemma. Validates
/// Q(P(x)) = x on the supplied samples of E, then returns the cutoff
/// extension x -> Psi(x - Q(P(x))) f(P(x)).
pub struct GeneratorChangeExtension {
    pub p_map: PolyMap,
    pub q_map: PolyMap,
    f: Box<dyn Fn(&[f64]) -> Complex64 + Sync + Send>,
    cutoff: Bump,
}

impl GeneratorChangeExtension {
    pub fn new(
        f: Box<dyn Fn(&[f64]) -> Complex64 + Sync + Send>,
        p_map: PolyMap,
        q_map: PolyMap,
        e_samples: &[Vec<f64>],
    ) -> Result<Self> {
        for x in e_samples {
            let qp = q_map.eval(&p_map.eval(x));
            let err: f64 = qp.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            if err > 1e-9 {
                return Err(Error::NotRightInverse(err));
            }
        }
        Ok(GeneratorChangeExtension {
            p_map,
            q_map,
            f,
            cutoff: Bump::new(1.0, 2.0),
        })
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        let px = self.p_map.eval(x);
        let qpx = self.q_map.eval(&px);
        let dist: f64 = x.iter().zip(&qpx).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let w = self.cutoff.eval(dist);
        if w == 0.0 {
            return Complex64::ZERO;
        }
        (self.f)(&px) * w
    }

    /// Isotropic grid Schwartz-norm estimate of the extension on R^{n_in}.
    pub fn norm_estimate(&self, p: usize, extent: f64, points_per_axis: usize) -> f64 {
        let d = self.p_map.n_in;
        let axis: Vec<f64> = (0..points_per_axis)
            .map(|i| -extent + 2.0 * extent * i as f64 / (points_per_axis - 1) as f64)
            .collect();
        let mut grid: Vec<Vec<f64>> = vec![vec![]];
        for _ in 0..d {
            let mut next = vec![];
            for g in &grid {
                for &x in &axis {
                    let mut v = g.clone();
                    v.push(x);
                    next.push(v);
                }
            }
            grid = next;
        }
        let ones = vec![1usize; d];
        let betas = super::invariant_ext::weighted_multi_indices(d, &ones, p);
        use rayon::prelude::*;
        grid.par_iter()
            .map(|y| {
                let norm_y: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                let weight = (1.0 + norm_y).powi(p as i32);
                let mut worst: f64 = 0.0;
                for beta in &betas {
                    let v = super::invariant_ext::central_difference(
                        &|q| self.eval(q),
                        y,
                        beta,
                        1e-2,
                    )
                    .norm();
                    worst = worst.max(weight * v);
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_maps_return_f() {
        let f = Box::new(|x: &[f64]| Complex64::new((-x[0] * x[0]).exp(), 0.0));
        let ext = GeneratorChangeExtension::new(
            f,
            PolyMap::identity(1),
            PolyMap::identity(1),
            &[vec![0.0], vec![1.0], vec![-2.0]],
        )
        .unwrap();
        for &x in &[-3.0, 0.0, 0.7, 5.0] {
            let got = ext.eval(&[x]);
            assert!((got.re - (-x * x).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn graph_embedding_agrees_on_e() {
        // P: R^2 -> R^3 graph over (x, y) with last coordinate x^2;
        // Q drops it. E = R^2 (as the graph preimage): on E the value is
        // exactly f(P(x)).
        let p_map = PolyMap {
            n_in: 2,
            components: vec![
                vec![(1.0, vec![1, 0])],
                vec![(1.0, vec![0, 1])],
                vec![(1.0, vec![2, 0])],
            ],
        };
        let q_map = PolyMap {
            n_in: 3,
            components: vec![vec![(1.0, vec![1, 0, 0])], vec![(1.0, vec![0, 1, 0])]],
        };
        let f = Box::new(|y: &[f64]| Complex64::new(y[0] + 2.0 * y[1] + y[2], 0.0));
        let samples: Vec<Vec<f64>> = (0..20)
            .map(|i| vec![i as f64 * 0.3 - 3.0, (i as f64 * 0.17).sin()])
            .collect();
        let ext = GeneratorChangeExtension::new(f, p_map, q_map, &samples).unwrap();
        for s in &samples {
            let got = ext.eval(s);
            let want = s[0] + 2.0 * s[1] + s[0] * s[0];
            assert!((got.re - want).abs() < 1e-12);
        }
    }

    #[test]
    fn wrong_inverse_rejected() {
        let f = Box::new(|_: &[f64]| Complex64::ONE);
        let bad_q = PolyMap::diagonal_affine(&[2.0], &[0.0]);
        let err = GeneratorChangeExtension::new(
            f,
            PolyMap::identity(1),
            bad_q,
            &[vec![1.0]],
        );
        assert!(matches!(err, Err(Error::NotRightInverse(_))));
    }

    #[test]
    fn support_within_cutoff_band() {
        // output vanishes where |x - Q(P(x))| >= 2 by the cutoff
        let p_map = PolyMap {
            n_in: 1,
            components: vec![vec![(1.0, vec![2])]], // P(x) = x^2
        };
        // Q(y) = 0: Q(P(x)) = 0, E = {0}
        let q_map = PolyMap { n_in: 1, components: vec![vec![(0.0, vec![0])]] };
        let f = Box::new(|_: &[f64]| Complex64::ONE);
        let ext = GeneratorChangeExtension::new(f, p_map, q_map, &[vec![0.0]]).unwrap();
        assert_eq!(ext.eval(&[2.5]), Complex64::ZERO);
        assert_eq!(ext.eval(&[-7.0]), Complex64::ZERO);
        assert_eq!(ext.eval(&[0.0]), Complex64::ONE);
    }
}
