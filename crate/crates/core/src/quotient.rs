//! Finite quotients of the torus pair by coordinate permutations: the
//! symmetric group acts on the generator span, the elementary symmetric
//! polynomials give the Hilbert map, and spherical functions average over
//! the orbit.

use crate::action::{ActionDescriptor, ActionKind};
use crate::error::{Error, Result};
use crate::heisenberg::GroupPoint;
use crate::invariant::{GeneratorSystem, IrredLabel};
use crate::spectrum::SpectrumModel;
use crate::spherical::SphericalFunction;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::sync::Arc;

/// The quotient data: the base (connected) system, the permutation action on
/// generator indices, and the invariant Hilbert map on the generator span.
pub struct FiniteQuotient {
    pub base: Arc<GeneratorSystem>,
    /// all permutations of 0..n (the full symmetric group on coordinates)
    pub group_elements: Vec<Vec<usize>>,
}

impl FiniteQuotient {
    /// The symmetric-group quotient over the torus base.
    pub fn symmetric(base: Arc<GeneratorSystem>) -> Result<Self> {
        if base.action.kind != ActionKind::Torus {
            return Err(Error::UnsupportedAction(
                "the permutation quotient acts on the torus base".into(),
            ));
        }
        let n = base.action.n;
        let mut perms = vec![];
        permutations(n, &mut (0..n).collect::<Vec<_>>(), 0, &mut perms);
        Ok(FiniteQuotient { base, group_elements: perms })
    }

    pub fn order(&self) -> usize {
        self.group_elements.len()
    }

    /// Elementary symmetric polynomials of the eigenvalue coordinates
    /// (the Hilbert map of the permutation action), exact on integers.
    pub fn hilbert_map_int(&self, xi: &[i64]) -> Vec<i64> {
        elementary_symmetric_int(xi)
    }

    pub fn hilbert_map(&self, xi: &[f64]) -> Vec<f64> {
        let n = xi.len();
        // e_k via the product recurrence
        let mut e = vec![0.0; n + 1];
        e[0] = 1.0;
        for &x in xi {
            for k in (1..=n).rev() {
                e[k] += e[k - 1] * x;
            }
        }
        e[1..].to_vec()
    }

    /// Exact equivariance of the eigenvalue table:
    /// V^_{w(j)}(phi_{w alpha}) = V^_j(phi_alpha).
    pub fn check_equivariance(&self) -> Result<()> {
        for (label, values) in &self.base.eigentable {
            let IrredLabel::Torus(alpha) = label else { unreachable!() };
            for w in &self.group_elements {
                let walpha: Vec<usize> = (0..alpha.len()).map(|i| alpha[w[i]]).collect();
                let wlabel = IrredLabel::Torus(walpha);
                let Some(wvalues) = self.base.eigentable.get(&wlabel) else {
                    continue;
                };
                for j in 0..values.len() {
                    if wvalues[w[j]] != values[j] {
                        return Err(Error::EigenvalueStructure(format!(
                            "table not equivariant at {label:?} under {w:?}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn permutations(n: usize, cur: &mut Vec<usize>, at: usize, out: &mut Vec<Vec<usize>>) {
    if at == n {
        out.push(cur.clone());
        return;
    }
    for i in at..n {
        cur.swap(at, i);
        permutations(n, cur, at + 1, out);
        cur.swap(at, i);
    }
}

fn elementary_symmetric_int(xi: &[i64]) -> Vec<i64> {
    let n = xi.len();
    let mut e = vec![0i64; n + 1];
    e[0] = 1;
    for &x in xi {
        for k in (1..=n).rev() {
            e[k] += e[k - 1] * x;
        }
    }
    e[1..].to_vec()
}

/// A merged quotient-spectrum point: the image coordinates and every source
/// label collapsing there.
#[derive(Debug, Clone)]
pub struct QuotientPoint {
    pub lambda: f64,
    pub image: Vec<f64>,
    pub sources: Vec<IrredLabel>,
}

/// Image of the truncated base spectrum under the Hilbert map, with orbit
/// collisions merged. Merging happens in exact integer arithmetic on the
/// eigenvalue table (at lambda = 1) and is then propagated by scaling.
pub fn quotient_spectrum(
    q: &FiniteQuotient,
    model: &SpectrumModel,
    lambdas: &[f64],
) -> Vec<QuotientPoint> {
    let labels = model.gensys.labels_up_to(model.alpha_cut);
    // group labels by the exact symmetric image of the eigenvalue vector
    let mut orbits: BTreeMap<Vec<i64>, Vec<IrredLabel>> = BTreeMap::new();
    for label in labels {
        let vals = model.gensys.eigentable.get(&label).unwrap();
        let key = elementary_symmetric_int(vals);
        orbits.entry(key).or_default().push(label);
    }
    let mut out = vec![];
    for &l in lambdas {
        for (_, sources) in orbits.iter() {
            let xi = model.gensys.xi(l, &sources[0]).unwrap();
            out.push(QuotientPoint { lambda: l, image: q.hilbert_map(&xi), sources: sources.clone() });
        }
    }
    out
}

/// Count of multisets of size <= cap (the expected number of merged points
/// per lambda for the full symmetric quotient).
pub fn multiset_count(n: usize, cap: usize) -> usize {
    // partitions of each total degree into at most... equivalently the
    // number of non-increasing alpha with |alpha| <= cap
    fn rec(n: usize, cap_left: usize, max: usize) -> usize {
        if n == 0 {
            return 1;
        }
        let mut c = 0;
        for v in 0..=cap_left.min(max) {
            c += rec(n - 1, cap_left - v, v);
        }
        c
    }
    rec(n, cap, cap)
}

/// Orbit average of a spherical function: the quotient's spherical function.
pub struct AveragedSpherical {
    pub base: SphericalFunction,
    pub quotient_order: usize,
    perms: Vec<Vec<usize>>,
}

pub fn average_spherical(q: &FiniteQuotient, phi: SphericalFunction) -> AveragedSpherical {
    AveragedSpherical {
        base: phi,
        quotient_order: q.order(),
        perms: q.group_elements.clone(),
    }
}

impl AveragedSpherical {
    pub fn eval(&self, p: &GroupPoint) -> Complex64 {
        use crate::heisenberg::SmoothFn;
        let mut acc = Complex64::ZERO;
        for w in &self.perms {
            let z: Vec<Complex64> = (0..p.z.len()).map(|i| p.z[w[i]]).collect();
            acc += self.base.eval(&GroupPoint::new(p.t, z));
        }
        acc / self.perms.len() as f64
    }

    /// Jet of the average at a point (permuting the point then pulling the
    /// base jet back through the coordinate permutation).
    pub fn jet_at(&self, p: &GroupPoint, order: usize) -> crate::jet::Jet {
        use crate::heisenberg::SmoothFn;
        let n = p.z.len();
        let nv = crate::heisenberg::formal_vars(n);
        let space = crate::jet::JetSpace::get(nv, order);
        let mut acc = crate::jet::Jet::zero(&space);
        for w in &self.perms {
            let z: Vec<Complex64> = (0..n).map(|i| p.z[w[i]]).collect();
            let q = GroupPoint::new(p.t, z);
            let jet = self.base.jet_at(&q, order).expect("spherical jets");
            // pull back: variable z_i of the base corresponds to z_{w^{-1}...}
            // substitute args: base formal var t -> t, z_i -> z at permuted slot
            let tj = crate::jet::Jet::variable(&space, 0, Complex64::new(p.t, 0.0));
            let mut args = vec![tj];
            for i in 0..n {
                args.push(crate::jet::Jet::variable(&space, 1 + w[i], p.z[w[i]]));
            }
            for i in 0..n {
                args.push(crate::jet::Jet::variable(&space, 1 + n + w[i], p.z[w[i]].conj()));
            }
            acc = acc.add(&crate::jet::Jet::substitute(&jet, &args));
        }
        acc.scale(Complex64::new(1.0 / self.perms.len() as f64, 0.0))
    }
}

/// Pull a function on the quotient spectrum back to an invariant function on
/// the base spectrum: g o rho, exactly invariant under the permutations.
pub fn quotient_extend(
    q: &FiniteQuotient,
    g: Arc<dyn Fn(f64, &[f64]) -> Complex64 + Sync + Send>,
) -> impl Fn(f64, &[f64]) -> Complex64 + '_ {
    move |lambda: f64, xi: &[f64]| g(lambda, &q.hilbert_map(xi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariant::build_generator_system;

    fn quotient2() -> FiniteQuotient {
        let gs = Arc::new(build_generator_system(ActionDescriptor::torus(2), 12).unwrap());
        FiniteQuotient::symmetric(gs).unwrap()
    }

    #[test]
    fn table_equivariance() {
        quotient2().check_equivariance().unwrap();
    }

    #[test]
    fn orbit_merging() {
        let q = quotient2();
        let model = SpectrumModel::new(q.base.clone(), 8, (-4.0, 4.0));
        let pts = quotient_spectrum(&q, &model, &[1.0]);
        // (1,2) and (2,1) merge
        let merged = pts
            .iter()
            .find(|p| {
                p.sources.contains(&IrredLabel::Torus(vec![1, 2]))
            })
            .unwrap();
        assert!(merged.sources.contains(&IrredLabel::Torus(vec![2, 1])));
        // fixed points stay singletons
        let diag = pts
            .iter()
            .find(|p| p.sources.contains(&IrredLabel::Torus(vec![3, 3])))
            .unwrap();
        assert_eq!(diag.sources.len(), 1);
        // cardinality = number of multisets
        assert_eq!(pts.len(), multiset_count(2, 8));
    }

    #[test]
    fn hilbert_map_invariance_exact() {
        let q = quotient2();
        for (a, b) in [(3i64, 7i64), (0, 0), (5, 5), (11, 2)] {
            let e1 = q.hilbert_map_int(&[a, b]);
            let e2 = q.hilbert_map_int(&[b, a]);
            assert_eq!(e1, e2);
        }
    }

    #[test]
    fn quotient_eigentable_is_symmetric_image() {
        // W-values on merged points equal the elementary symmetric image of
        // the base table, exactly
        let q = quotient2();
        let model = SpectrumModel::new(q.base.clone(), 6, (-4.0, 4.0));
        let pts = quotient_spectrum(&q, &model, &[1.0]);
        for p in &pts {
            let base_vals = q.base.eigentable.get(&p.sources[0]).unwrap();
            let expect = elementary_symmetric_int(base_vals);
            for (im, ex) in p.image.iter().zip(&expect) {
                assert_eq!(*im, *ex as f64);
            }
            // all sources give the same image
            for s in &p.sources {
                let v = q.base.eigentable.get(s).unwrap();
                assert_eq!(elementary_symmetric_int(v), expect);
            }
        }
    }

    #[test]
    fn averaged_spherical_properties() {
        use crate::heisenberg::SmoothFn;
        let q = quotient2();
        let action = ActionDescriptor::torus(2);
        // already symmetric label: average = original
        let phi_sym =
            SphericalFunction::principal(action, 0.8, IrredLabel::Torus(vec![2, 2])).unwrap();
        let avg = average_spherical(&q, phi_sym.clone());
        let p = GroupPoint::new(
            0.4,
            vec![Complex64::new(0.7, -0.2), Complex64::new(-0.4, 1.1)],
        );
        assert!((avg.eval(&p) - phi_sym.eval(&p)).norm() < 1e-15);
        // normalization at the identity
        let e = GroupPoint::identity(2);
        let phi =
            SphericalFunction::principal(action, 1.0, IrredLabel::Torus(vec![1, 3])).unwrap();
        let avg2 = average_spherical(&q, phi);
        assert!((avg2.eval(&e) - Complex64::ONE).norm() < 1e-15);
    }

    #[test]
    fn averaged_eigenfunction_of_symmetric_operators() {
        // W_1 = V_1 + V_2 applied to the average has eigenvalue
        // e_1(V^(phi_alpha)) for the base label
        let q = quotient2();
        let action = ActionDescriptor::torus(2);
        let alpha = vec![1usize, 3usize];
        let phi = SphericalFunction::principal(action, -0.9, IrredLabel::Torus(alpha.clone()))
            .unwrap();
        let avg = average_spherical(&q, phi);
        let w1 = q.base.operators[0].add(&q.base.operators[1]);
        let dop = w1.to_diffop().unwrap();
        let base_vals = q.base.eigentable.get(&IrredLabel::Torus(alpha)).unwrap();
        let want = 0.9f64 * (base_vals[0] + base_vals[1]) as f64;
        for i in 0..5 {
            let x = 0.3 + 0.37 * i as f64;
            let p = GroupPoint::new(
                x.sin(),
                vec![Complex64::new(x.cos(), 0.3), Complex64::new(0.2, -x)],
            );
            let jet = avg.jet_at(&p, dop.max_order());
            let got = dop.apply(&jet, &p.formal());
            let expect = avg.eval(&p) * want;
            assert!(
                (got - expect).norm() / expect.norm().max(1e-3) < 1e-6,
                "{got} vs {expect}"
            );
        }
    }
}
