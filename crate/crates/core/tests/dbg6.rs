use gelfand_core::action::ActionDescriptor;
use gelfand_core::invariant::build_generator_system;
use gelfand_core::spectrum::SpectrumModel;
use gelfand_core::transform::*;
use num_complex::Complex64;
use std::sync::Arc;

#[test]
#[ignore]
fn locate_multiplier_error() {
    let action = ActionDescriptor::unitary(1);
    let m = |l: f64, xi: &[f64]| -> Complex64 {
        let xi2: f64 = xi.iter().map(|x| x * x).sum();
        Complex64::new((-l * l - xi2).exp(), 0.0)
    };
    let gs_big = Arc::new(build_generator_system(action, 512).unwrap());
    let kernel_model = SpectrumModel::new(gs_big, 512, (-6.5, 6.5));
    let kernel_quad = QuadratureSpec {
        lambda_nodes_per_half: 420,
        lambda_inner_panel: Some(0.5),
        ..QuadratureSpec::default()
    };
    let kernel = multiplier_kernel(&m, &kernel_model, &kernel_quad, 961, 641).unwrap();
    let gs = Arc::new(build_generator_system(action, 32).unwrap());
    let model = SpectrumModel::new(gs.clone(), 32, (-4.0, 4.0));
    let quad = QuadratureSpec::default();
    let lambdas = model.lambda_samples(16);
    let rows = forward_at_lambdas(&kernel, &model, &quad, &lambdas).unwrap();
    let labels = gs.labels_up_to(32);
    let mut worst = (0.0f64, 0.0f64, 0usize, Complex64::ZERO, Complex64::ZERO);
    for (i, &l) in lambdas.iter().enumerate() {
        for (a, label) in labels.iter().enumerate() {
            let xi = gs.xi(l, label).unwrap();
            let want = m(l, &xi);
            let err = (rows[i][a] - want).norm();
            if err > worst.0 {
                let gelfand_core::invariant::IrredLabel::Unitary(k) = label else { unreachable!() };
                worst = (err, l, *k, rows[i][a], want);
            }
        }
    }
    println!("worst err {:.3e} at lambda={} k={} got={:?} want={:?}", worst.0, worst.1, worst.2, worst.3, worst.4);
    // error profile along k at the worst lambda
    let i = lambdas.iter().position(|&l| l == worst.1).unwrap();
    for k in 0..8usize {
        let xi = gs.xi(worst.1, &gelfand_core::invariant::IrredLabel::Unitary(k)).unwrap();
        println!("  k={k}: got {:?} want {:.6e}", rows[i][k], m(worst.1, &xi).re);
    }
    // and along lambda at the worst k
    for &l in lambdas.iter() {
        let i = lambdas.iter().position(|&x| x == l).unwrap();
        let xi = gs.xi(l, &gelfand_core::invariant::IrredLabel::Unitary(worst.2)).unwrap();
        println!("  l={l:+.3}: err {:.3e}", (rows[i][worst.2] - m(l, &xi)).norm());
    }
}

#[test]
#[ignore]
fn kernel_pointwise_reference() {
    // reference kernel value by brute force with lambda-adaptive label cut
    let action = ActionDescriptor::unitary(1);
    let m = |l: f64, xi: &[f64]| -> Complex64 {
        let xi2: f64 = xi.iter().map(|x| x * x).sum();
        Complex64::new((-l * l - xi2).exp(), 0.0)
    };
    let gs_big = Arc::new(build_generator_system(action, 512).unwrap());
    let kernel_model = SpectrumModel::new(gs_big.clone(), 512, (-6.5, 6.5));
    let kernel_quad = QuadratureSpec {
        lambda_nodes_per_half: 420,
        lambda_inner_panel: Some(0.5),
        ..QuadratureSpec::default()
    };
    let table = symbol_table(&m, &kernel_model, &kernel_quad);
    for (t, r) in [(0.0f64, 0.5f64), (3.7, 1.3), (8.0, 2.0)] {
        let ours = inverse_on_grid_with_tail(&table, &[t], &[vec![r]], Some(&m))[0];
        // reference: adaptive sum, k up to max(1024, 10/(4 lambda))
        let u = r * r;
        let gl = gelfand_core::quad::GaussLegendre::new(120);
        let mut refv = Complex64::ZERO;
        let breaks = [1e-4, 1e-3, 0.01, 0.1, 0.5, 2.0, 6.5];
        for w in breaks.windows(2) {
            for (l, wgt) in gl.scaled(w[0], w[1]) {
                let kcut = ((10.0 / (4.0 * l)) as usize).max(1024).min(400_000);
                let mut sweep = vec![0.0; kcut + 1];
                gelfand_core::special::laguerre_weighted_sweep(kcut, 0.0, l * u / 2.0, &mut sweep);
                let mut g = Complex64::ZERO;
                for k in 0..=kcut {
                    let xi = l * (4 * k + 2) as f64;
                    let mv = m(l, &[xi]);
                    if mv.norm() < 1e-22 && xi > 10.0 {
                        break;
                    }
                    g += mv * sweep[k];
                }
                // both signs of lambda: e^{-i l t} + e^{+i l t} (real symbol)
                let phase = 2.0 * (l * t).cos();
                refv += g * (wgt * l * phase);
            }
        }
        refv *= gelfand_core::transform::plancherel_constant(1);
        println!("(t,r)=({t},{r}): ours {:?} ref {:?} diff {:.3e}", ours, refv, (ours - refv).norm());
    }
}

#[test]
#[ignore]
fn kernel_t_decay() {
    let action = ActionDescriptor::unitary(1);
    let m = |l: f64, xi: &[f64]| -> Complex64 {
        let xi2: f64 = xi.iter().map(|x| x * x).sum();
        Complex64::new((-l * l - xi2).exp(), 0.0)
    };
    let gs_big = Arc::new(build_generator_system(action, 512).unwrap());
    let kernel_model = SpectrumModel::new(gs_big.clone(), 512, (-6.5, 6.5));
    let kernel_quad = QuadratureSpec {
        lambda_nodes_per_half: 420,
        lambda_inner_panel: Some(0.5),
        ..QuadratureSpec::default()
    };
    let table = symbol_table(&m, &kernel_model, &kernel_quad);
    for &t in &[0.0f64, 2.0, 4.0, 8.0, 12.0, 14.0, 20.0, 30.0, 50.0] {
        let v = inverse_on_grid_with_tail(&table, &[t], &[vec![1.0]], Some(&m))[0];
        println!("M({t:5}, 1.0) = {:+.6e}  (x t^2: {:+.3e})", v.re, v.re * t * t);
    }
}

#[test]
#[ignore]
fn sweep_parameters() {
    let action = ActionDescriptor::unitary(1);
    let m = |l: f64, xi: &[f64]| -> Complex64 {
        let xi2: f64 = xi.iter().map(|x| x * x).sum();
        Complex64::new((-l * l - xi2).exp(), 0.0)
    };
    let gs = Arc::new(build_generator_system(action, 32).unwrap());
    let model = SpectrumModel::new(gs.clone(), 32, (-4.0, 4.0));
    let labels = gs.labels_up_to(32);
    let lambdas = model.lambda_samples(16);
    for (cut, lmax, nodes, tmax, tn) in [
        (512usize, 6.5f64, 420usize, 32.0f64, 300usize),
        (512, 6.5, 420, 48.0, 450),
        (512, 6.5, 640, 32.0, 300),
        (768, 6.5, 420, 32.0, 300),
        (512, 9.0, 420, 32.0, 300),
    ] {
        let gs_big = Arc::new(build_generator_system(action, cut).unwrap());
        let kernel_model = SpectrumModel::new(gs_big, cut, (-lmax, lmax));
        let kernel_quad = QuadratureSpec {
            t_nodes: tn,
            t_max: tmax,
            lambda_nodes_per_half: nodes,
            lambda_inner_panel: Some(0.5),
            ..QuadratureSpec::default()
        };
        let table = symbol_table(&m, &kernel_model, &kernel_quad);
        let rows = forward_of_inverse(&table, Some(&m), &model, &kernel_quad, &lambdas).unwrap();
        let mut sup = (0.0f64, 0.0f64, 0usize);
        for (i, &l) in lambdas.iter().enumerate() {
            for (a, label) in labels.iter().enumerate() {
                let xi = gs.xi(l, label).unwrap();
                let e = (rows[i][a] - m(l, &xi)).norm();
                if e > sup.0 {
                    let gelfand_core::invariant::IrredLabel::Unitary(k) = label else { unreachable!() };
                    sup = (e, l, *k);
                }
            }
        }
        println!("cut={cut} lmax={lmax} nodes={nodes} tmax={tmax} tn={tn}: sup {:.3e} at (l={}, k={})", sup.0, sup.1, sup.2);
    }
}

#[test]
#[ignore]
fn radial_decay_and_rmax_sweep() {
    let action = ActionDescriptor::unitary(1);
    let m = |l: f64, xi: &[f64]| -> Complex64 {
        let xi2: f64 = xi.iter().map(|x| x * x).sum();
        Complex64::new((-l * l - xi2).exp(), 0.0)
    };
    let gs_big = Arc::new(build_generator_system(action, 512).unwrap());
    let kernel_model = SpectrumModel::new(gs_big, 512, (-6.5, 6.5));
    let base_quad = QuadratureSpec {
        t_nodes: 300,
        t_max: 32.0,
        lambda_nodes_per_half: 420,
        lambda_inner_panel: Some(0.5),
        ..QuadratureSpec::default()
    };
    let table = symbol_table(&m, &kernel_model, &base_quad);
    for &r in &[1.0f64, 3.0, 6.0, 9.0, 12.0, 16.0, 24.0] {
        let v = inverse_on_grid_with_tail(&table, &[0.0], &[vec![r]], Some(&m))[0];
        println!("M(0, {r:4}) = {:+.6e}   x r^3 = {:+.3e}", v.re, v.re * r * r * r);
    }
    let gs = Arc::new(build_generator_system(action, 32).unwrap());
    let model = SpectrumModel::new(gs.clone(), 32, (-4.0, 4.0));
    let labels = gs.labels_up_to(32);
    let lambdas = model.lambda_samples(16);
    for (rmax, rn) in [(9.0f64, 160usize), (12.0, 224), (16.0, 288), (24.0, 448)] {
        let quad = QuadratureSpec { r_max: rmax, r_nodes: rn, ..base_quad.clone() };
        let rows = forward_of_inverse(&table, Some(&m), &model, &quad, &lambdas).unwrap();
        let mut sup = 0.0f64;
        for (i, &l) in lambdas.iter().enumerate() {
            for (a, label) in labels.iter().enumerate() {
                let xi = gs.xi(l, label).unwrap();
                sup = sup.max((rows[i][a] - m(l, &xi)).norm());
            }
        }
        println!("r_max={rmax} r_nodes={rn}: sup {:.3e}", sup);
    }
}

#[test]
#[ignore]
fn big_cut_with_tail() {
    let action = ActionDescriptor::unitary(1);
    let m = |l: f64, xi: &[f64]| -> Complex64 {
        let xi2: f64 = xi.iter().map(|x| x * x).sum();
        Complex64::new((-l * l - xi2).exp(), 0.0)
    };
    for cut in [1024usize, 4096] {
        let gs_big = Arc::new(build_generator_system(action, cut).unwrap());
        let kernel_model = SpectrumModel::new(gs_big, cut, (-6.5, 6.5));
        let quad = QuadratureSpec {
            t_nodes: 300,
            t_max: 32.0,
            lambda_nodes_per_half: 420,
            lambda_inner_panel: Some(0.5),
            ..QuadratureSpec::default()
        };
        let table = symbol_table(&m, &kernel_model, &quad);
        let gs = Arc::new(build_generator_system(action, 32).unwrap());
        let model = SpectrumModel::new(gs.clone(), 32, (-4.0, 4.0));
        let labels = gs.labels_up_to(32);
        let lambdas = model.lambda_samples(16);
        let rows = forward_of_inverse(&table, Some(&m), &model, &quad, &lambdas).unwrap();
        let mut sup = 0.0f64;
        for (i, &l) in lambdas.iter().enumerate() {
            for (a, label) in labels.iter().enumerate() {
                let xi = gs.xi(l, label).unwrap();
                sup = sup.max((rows[i][a] - m(l, &xi)).norm());
            }
        }
        println!("cut={cut}: sup {:.3e}", sup);
    }
}

#[test]
#[ignore]
fn joint_window_sweep() {
    let action = ActionDescriptor::unitary(1);
    let m = |l: f64, xi: &[f64]| -> Complex64 {
        let xi2: f64 = xi.iter().map(|x| x * x).sum();
        Complex64::new((-l * l - xi2).exp(), 0.0)
    };
    let gs_big = Arc::new(build_generator_system(action, 1024).unwrap());
    let kernel_model = SpectrumModel::new(gs_big, 1024, (-6.5, 6.5));
    let quad0 = QuadratureSpec {
        t_nodes: 300,
        t_max: 32.0,
        lambda_nodes_per_half: 420,
        lambda_inner_panel: Some(0.5),
        ..QuadratureSpec::default()
    };
    let table = symbol_table(&m, &kernel_model, &quad0);
    // kernel t-decay at larger radius
    for &(t, r) in &[(20.0f64, 5.0f64), (30.0, 5.0), (40.0, 5.0), (60.0, 5.0), (40.0, 2.0), (60.0, 2.0)] {
        let v = inverse_on_grid_with_tail(&table, &[t], &[vec![r]], Some(&m))[0];
        println!("M({t}, {r}) = {:+.4e}", v.re);
    }
    let gs = Arc::new(build_generator_system(action, 32).unwrap());
    let model = SpectrumModel::new(gs.clone(), 32, (-4.0, 4.0));
    let labels = gs.labels_up_to(32);
    let lambdas = model.lambda_samples(16);
    for (tmax, tn, rmax, rn) in [(48.0f64, 450usize, 16.0f64, 288usize), (64.0, 600, 24.0, 448), (96.0, 900, 24.0, 448)] {
        let quad = QuadratureSpec { t_max: tmax, t_nodes: tn, r_max: rmax, r_nodes: rn, ..quad0.clone() };
        let rows = forward_of_inverse(&table, Some(&m), &model, &quad, &lambdas).unwrap();
        let mut sup = (0.0f64, 0.0, 0usize);
        for (i, &l) in lambdas.iter().enumerate() {
            for (a, label) in labels.iter().enumerate() {
                let xi = gs.xi(l, label).unwrap();
                let e = (rows[i][a] - m(l, &xi)).norm();
                if e > sup.0 {
                    let gelfand_core::invariant::IrredLabel::Unitary(k) = label else { unreachable!() };
                    sup = (e, l, *k);
                }
            }
        }
        println!("T={tmax} r={rmax}: sup {:.3e} at (l={}, k={})", sup.0, sup.1, sup.2);
    }
}
