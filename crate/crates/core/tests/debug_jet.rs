//! Scratch diagnostics for the jet pipeline internals (development aid).

use gelfand_core::action::ActionDescriptor;
use gelfand_core::extension::{ExtensionSpec, InvariantExtension, JetSpec, SpectrumNeighborhood};
use gelfand_core::heisenberg::InvariantFunction;
use gelfand_core::invariant::build_generator_system;
use gelfand_core::spectrum::SpectrumModel;
use gelfand_core::transform::{inverse_on_grid, symbol_table, QuadratureSpec};
use num_complex::Complex64;
use std::sync::Arc;

#[test]
#[ignore]
fn kernel_fiber_consistency() {
    // how well does the t-integral of a multiplier kernel reproduce the
    // symbol on the lambda = 0 fiber?
    let action = ActionDescriptor::unitary(1);
    let cut = 256usize;
    let gs = Arc::new(build_generator_system(action, cut).unwrap());
    let model = SpectrumModel::new(gs.clone(), cut, (-40.0, 40.0));
    let quad = QuadratureSpec {
        t_nodes: 32,
        t_max: 20.0,
        r_nodes: 128,
        r_max: 9.0,
        lambda_nodes_per_half: 400,
        lambda_inner_panel: Some(0.5),
    };
    // symbol resembling the second jet component: scale ~ 24, e^{-xi/8}
    let psi_n = SpectrumNeighborhood { degrees: gs.degrees.clone() };
    let sym = move |l: f64, xi: &[f64]| -> Complex64 {
        Complex64::new(-24.0 * (-xi[0] / 8.0).exp() * psi_n.eval(l, xi), 0.0)
    };
    let table = symbol_table(&sym, &model, &quad);
    // t-grid: chebyshev like the pipeline
    let spec = JetSpec::for_action(action);
    let t_pts = gelfand_core::quad::chebyshev_points(192, -spec.t_half, spec.t_half);
    let r_axis: Vec<f64> = (0..6).map(|i| 1.0 + i as f64).collect();
    let vals = inverse_on_grid(&table, &t_pts, &[r_axis.clone()]);
    // CC weights
    let mut w = vec![0.0; 193];
    for (j, wj) in w.iter_mut().enumerate() {
        let mut v = vec![0.0; 193];
        v[j] = 1.0;
        *wj = gelfand_core::quad::ChebSeries::from_values(-spec.t_half, spec.t_half, &v).integral();
    }
    for (ri, &r) in r_axis.iter().enumerate() {
        let mut acc = Complex64::ZERO;
        for ti in 0..t_pts.len() {
            acc += vals[ti * r_axis.len() + ri] * w[ti];
        }
        let rho = gs.rho_eval(&[Complex64::new(r, 0.0)]);
        let want = -24.0 * (-rho[0] / 8.0).exp();
        println!("r={r}: int K dt = {:.6e}, symbol fiber = {:.6e}, diff {:.3e}", acc.re, want, (acc.re - want).abs());
    }

    // extension sanity: does E' of a table reproduce analytic values
    let fibv = Arc::new(move |u: &[f64]| Complex64::new((-(u[0] * 2.0) / 8.0).exp() * -24.0, 0.0));
    let ext = InvariantExtension::new(gs.clone(), fibv, &ExtensionSpec::default()).unwrap();
    for &xi in &[1.0f64, 10.0, 100.0, 1000.0, 40000.0] {
        println!("ext({xi}) = {:?}", ext.eval(&[xi]));
    }
}
