//! The numerical core is generic over the scalar; exercise the f32
//! instantiation end to end (with a tolerance table scaled to single
//! precision) and the f64 default side by side.

use parafreq::backgrounds::FlowBackground;
use parafreq::evolve::caloric_polynomial;
use parafreq::frequency::{check_monotone, trace, TraceConfig};
use parafreq::kernel::{kernel_at, KernelParams};
use parafreq::spectral::quadrature_from_kernel;
use parafreq::tol::Tolerances;

#[test]
fn f32_pipeline_runs_at_single_precision() {
    let bg = FlowBackground::<f32>::gaussian(1, 0.0, [0.0; 3]).unwrap();
    let geo = bg.geometry(-1.0).unwrap();
    assert_eq!(geo.tau, 1.0f32);

    let kd = kernel_at(&bg, -1.0, &KernelParams::default()).unwrap();
    let q = quadrature_from_kernel(&kd, 10).unwrap();
    assert!((q.total_mass() - 1.0).abs() <= 1e-5);
    let m2 = q.integrate_fn(|n| n[0] * n[0]);
    assert!((m2 - 2.0).abs() <= 1e-4, "second moment {m2}");

    let sol = caloric_polynomial(&bg, &[2], (-2.0f32, -1.0f32)).unwrap();
    let mut cfg = TraceConfig::<f32>::new(16);
    cfg.order = Some(10);
    // single precision needs a correspondingly coarser tolerance table
    cfg.tol = Tolerances::<f32>::default().scaled(1e4);
    let tr = trace(&sol, &cfg).unwrap();
    for s in &tr.samples {
        assert!((s.u_val + 1.0).abs() <= 1e-4, "U = {}", s.u_val);
    }
    assert!(check_monotone(&tr, &cfg.tol).unwrap().passed);
}

#[test]
fn f32_and_f64_sphere_geometry_agree() {
    let b32 = FlowBackground::<f32>::sphere(4.0, 1.0).unwrap();
    let b64 = FlowBackground::<f64>::sphere(4.0, 1.0).unwrap();
    for i in 0..8 {
        let t64 = -1.0 + 0.2 * i as f64;
        let g64 = b64.geometry(t64).unwrap();
        let g32 = b32.geometry(t64 as f32).unwrap();
        assert!((g32.scale as f64 - g64.scale).abs() <= 1e-6);
        assert!((g32.scalar_curvature as f64 - g64.scalar_curvature).abs() <= 1e-7);
    }
}
