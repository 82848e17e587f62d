use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use vk_ns2d::cli::{preset, Config};
use vk_ns2d::diagnostics::{read_csv, record, write_csv};
use vk_ns2d::elliptic::{
    neumann_solve_disc, poisson_periodic, pullback_green, spectral_laplacian, ConformalMap, NeumannProblem,
};
use vk_ns2d::field::snapshot::{read_scalar, read_vector, write_scalar, write_vector};
use vk_ns2d::field::{div, grad, Grid, ScalarField, VectorField};
use vk_ns2d::oracles::{check_divcurl_on, check_poincare_sobolev_on};
use vk_ns2d::physics::{flux_f, flux_g, rhs, FluidParams, State};
use vk_ns2d::steady::{solve_steady, DEFAULT_TOL};

/// Amplitude and phase of one Fourier mode per wavevector with `|k| ≤ 2`.
fn modes() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, 0.0f64..2.0 * PI), 25)
}

fn wave(m: &[(f64, f64)], x: f64, y: f64) -> f64 {
    let mut s = 0.0;
    for (k, (c, p)) in m.iter().enumerate() {
        let (kx, ky) = ((k % 5) as f64 - 2.0, (k / 5) as f64 - 2.0);
        s += c * (2.0 * PI * (kx * x + ky * y) + p).cos();
    }
    s / m.len() as f64
}

fn torus_state(n: usize, a: &[(f64, f64)], b: &[(f64, f64)], c: &[(f64, f64)]) -> State {
    let g = Grid::torus(n).unwrap();
    let rho = ScalarField::from_fn(g, |x, y| 1.0 + 0.5 * wave(a, x, y)).unwrap();
    let u = VectorField::from_fn(g, |x, y| (wave(b, x, y), wave(c, x, y))).unwrap();
    State::new(rho, u, 0.0).unwrap()
}

/// Tangential disc velocity `∇⊥ψ` with `ψ` vanishing on the circle.
fn disc_state(n_r: usize, a: &[(f64, f64)], b: &[(f64, f64)]) -> State {
    let g = Grid::disc(n_r, 2 * n_r).unwrap();
    let rho = ScalarField::from_fn(g, |x, y| 1.0 + 0.5 * wave(a, 0.5 * x, 0.5 * y)).unwrap();
    let u = VectorField::from_fn(g, |x, y| {
        let h = 1e-6;
        let psi = |x: f64, y: f64| (1.0 - x * x - y * y) * wave(b, 0.5 * x, 0.5 * y);
        let px = (psi(x + h, y) - psi(x - h, y)) / (2.0 * h);
        let py = (psi(x, y + h) - psi(x, y - h)) / (2.0 * h);
        (-py, px)
    })
    .unwrap();
    State::new(rho, u, 0.0).unwrap()
}

fn shift(s: &ScalarField, n: usize) -> ScalarField {
    let v = s.values();
    let out = (0..n * n).map(|k| v[(k / n) * n + (k % n + n - 1) % n]).collect();
    ScalarField::new(*s.grid(), out).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn summation_by_parts_on_torus(a in modes(), b in modes(), c in modes()) {
        let s = torus_state(24, &a, &b, &c);
        let (phi, w) = (s.rho(), s.u());
        prop_assert!(div(w).integral().abs() < 1e-14);
        let lhs = grad(phi).dot(w).unwrap().integral() + phi.zip_map(&div(w), |p, d| p * d).unwrap().integral();
        prop_assert!(lhs.abs() < 1e-13);
    }

    #[test]
    fn lp_norms_increase_with_p(a in modes(), p in 1.0f64..6.0, dp in 0.0f64..4.0) {
        let f = ScalarField::from_fn(Grid::torus(16).unwrap(), |x, y| wave(&a, x, y)).unwrap();
        let (lo, hi) = (f.lp_norm(p).unwrap(), f.lp_norm(p + dp).unwrap());
        prop_assert!(lo <= hi * (1.0 + 1e-12));
        prop_assert!(hi <= f.lp_norm(f64::INFINITY).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn torus_tendencies_conserve_mass_and_momentum(a in modes(), b in modes(), c in modes(), beta in 1.4f64..3.0) {
        let s = torus_state(16, &a, &b, &c);
        let params = FluidParams::new(1.0, beta, 1.4, ScalarField::zeros(*s.grid())).unwrap();
        let t = rhs(&s, &params).unwrap();
        prop_assert!(t.drho.integral().abs() < 1e-13);
        let (mx, my) = t.dm.integral();
        prop_assert!(mx.abs() < 1e-12 && my.abs() < 1e-12);
    }

    #[test]
    fn torus_tendencies_commute_with_cell_shifts(a in modes(), b in modes(), c in modes()) {
        let n = 16;
        let s = torus_state(n, &a, &b, &c);
        let g = *s.grid();
        let f = ScalarField::from_fn(g, |x, y| 0.1 * (2.0 * PI * x).sin() * (2.0 * PI * y).cos()).unwrap();
        let params = FluidParams::new(1.0, 2.0, 2.0, f.clone()).unwrap();
        let moved = State::new(
            shift(s.rho(), n),
            VectorField::from_components(shift(&s.u().component(0), n), shift(&s.u().component(1), n)).unwrap(),
            0.0,
        )
        .unwrap();
        let moved_params = FluidParams::new(1.0, 2.0, 2.0, shift(&f, n)).unwrap();
        let (t0, t1) = (rhs(&s, &params).unwrap(), rhs(&moved, &moved_params).unwrap());
        prop_assert_eq!(shift(&t0.drho, n), t1.drho);
        for c in 0..2 {
            prop_assert_eq!(shift(&t0.dm.component(c), n), t1.dm.component(c));
        }
    }

    #[test]
    fn effective_flux_differs_by_steady_pressure(a in modes(), b in modes(), c in modes(), gamma in 1.2f64..3.0) {
        let s = torus_state(16, &a, &b, &c);
        let g = *s.grid();
        let f = ScalarField::from_fn(g, |x, y| 0.2 * (2.0 * PI * x).cos() * (2.0 * PI * y).sin()).unwrap();
        let params = FluidParams::new(1.0, 2.0, gamma, f.clone()).unwrap();
        let ss = solve_steady(&f, s.rho().integral(), gamma, DEFAULT_TOL).unwrap();
        let big_g = flux_g(&s, &params, ss.rho_s()).unwrap();
        let big_f = flux_f(&s, &params).unwrap();
        for ((gv, fv), rs) in big_g.values().iter().zip(big_f.values()).zip(ss.rho_s().values()) {
            prop_assert!((gv - fv - rs.powf(gamma)).abs() < 1e-12 * (1.0 + gv.abs()));
        }
    }

    #[test]
    fn records_are_finite_and_signed(a in modes(), b in modes(), k in 0.0f64..5.0) {
        let s = disc_state(12, &a, &b);
        let g = *s.grid();
        let f = ScalarField::from_fn(g, |x, y| 0.2 * (x * x + y * y) + 0.1 * y).unwrap();
        let params = FluidParams::new(1.0, 2.0, 2.0, f.clone()).unwrap().with_uniform_friction(k).unwrap();
        let ss = solve_steady(&f, s.rho().integral(), 2.0, DEFAULT_TOL).unwrap();
        let r = record(&s, &params, ss.rho_s(), &rhs(&s, &params).unwrap()).unwrap();
        prop_assert!(r.values().iter().all(|v| v.is_finite()));
        prop_assert!(r.mass > 0.0);
        prop_assert!(r.a1_sq >= 0.0 && r.a2_sq >= 0.0 && r.b_sq >= 0.0);
        prop_assert!(r.boundary_dissipation >= 0.0);
    }

    #[test]
    fn records_round_trip_through_csv(a in modes(), b in modes(), c in modes()) {
        let s = torus_state(8, &a, &b, &c);
        let params = FluidParams::new(1.0, 2.0, 2.0, ScalarField::zeros(*s.grid())).unwrap();
        let rho_s = ScalarField::constant(*s.grid(), s.rho().integral());
        let rec = record(&s, &params, &rho_s, &rhs(&s, &params).unwrap()).unwrap();
        let mut buf = Vec::new();
        write_csv(std::slice::from_ref(&rec), &mut buf).unwrap();
        prop_assert_eq!(read_csv(buf.as_slice()).unwrap(), vec![rec]);
    }

    #[test]
    fn periodic_poisson_round_trip(a in modes()) {
        let s = ScalarField::from_fn(Grid::torus(32).unwrap(), |x, y| wave(&a, x, y)).unwrap();
        let s = s.map(|v| v - s.mean());
        prop_assume!(s.max_abs() > 1e-6);
        let back = spectral_laplacian(&poisson_periodic(&s).unwrap()).unwrap();
        let err = back.zip_map(&s, |p, q| p - q).unwrap().max_abs();
        prop_assert!(err <= 1e-10 * s.max_abs());
    }

    #[test]
    fn neumann_solutions_have_zero_mean(a in modes(), b in modes()) {
        let g = Grid::disc(12, 24).unwrap();
        // zero wall flux keeps the data compatible
        let h = VectorField::from_fn(g, |x, y| (wave(&a, x, y), wave(&b, x, y))).unwrap();
        let sol = neumann_solve_disc(&NeumannProblem::new(&h, vec![0.0; 24], Some(vec![0.0; 24])).unwrap()).unwrap();
        prop_assert!(sol.mean().abs() < 1e-12 * (1.0 + sol.max_abs()));
    }

    #[test]
    fn mobius_maps_are_invertible_and_keep_the_circle(
        ar in 0.0f64..0.9, at in 0.0f64..2.0 * PI, phase in -PI..PI,
        zr in 0.0f64..1.0, zt in 0.0f64..2.0 * PI,
    ) {
        let map = ConformalMap::mobius([ar * at.cos(), ar * at.sin()], phase).unwrap();
        let z = Complex64::from_polar(zr, zt);
        prop_assert!((map.inverse(map.forward(z)) - z).norm() < 1e-13);
        prop_assert!(map.forward(z).norm() <= 1.0 + 1e-13);
        let w = map.forward(Complex64::from_polar(1.0, zt));
        prop_assert!((w.norm() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn pulled_back_green_is_symmetric(
        ar in 0.0f64..0.9, at in 0.0f64..2.0 * PI,
        x in (0.0f64..0.95, 0.0f64..2.0 * PI), y in (0.0f64..0.95, 0.0f64..2.0 * PI),
    ) {
        let map = ConformalMap::mobius([ar * at.cos(), ar * at.sin()], 0.4).unwrap();
        let p = (x.0 * x.1.cos(), x.0 * x.1.sin());
        let q = (y.0 * y.1.cos(), y.0 * y.1.sin());
        prop_assume!((p.0 - q.0).hypot(p.1 - q.1) > 1e-6);
        let (u, v) = (pullback_green(&map, p, q).unwrap(), pullback_green(&map, q, p).unwrap());
        prop_assert!((u - v).abs() <= 1e-13 * u.abs().max(1.0));
    }

    #[test]
    fn snapshots_round_trip_exactly(a in modes(), b in modes(), c in modes(), t in 0.0f64..100.0) {
        let s = torus_state(8, &a, &b, &c);
        let dir = tempfile::tempdir().unwrap();
        write_scalar(&dir.path().join("r"), s.rho(), t, "rho").unwrap();
        write_vector(&dir.path().join("u"), s.u(), t, "u").unwrap();
        let (hr, rho) = read_scalar(&dir.path().join("r")).unwrap();
        let (_, u) = read_vector(&dir.path().join("u")).unwrap();
        prop_assert_eq!(hr.time, t);
        prop_assert_eq!(&rho, s.rho());
        prop_assert_eq!(&u, s.u());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn oracle_verdict_follows_ratio_and_repeats(seed in any::<u64>()) {
        let disc = Grid::disc(32, 64).unwrap();
        let a = check_poincare_sobolev_on(32, 8, 4.0, seed).unwrap();
        let b = check_divcurl_on(disc, 8, 2.0, seed).unwrap();
        for r in [&a, &b] {
            prop_assert_eq!(r.pass, r.worst_ratio <= r.threshold);
            prop_assert_eq!(r.seed, seed);
        }
        prop_assert_eq!(a, check_poincare_sobolev_on(32, 8, 4.0, seed).unwrap());
        prop_assert_eq!(b, check_divcurl_on(disc, 8, 2.0, seed).unwrap());
    }

    #[test]
    fn configs_round_trip_through_json(
        name in prop::sample::select(vec!["acoustic", "spin-down", "forced-disc", "vk-periodic"]),
        seed in any::<u64>(), t_end in 0.0f64..50.0, cfl in 0.01f64..1.0,
    ) {
        let mut c = preset(name).unwrap();
        c.run.seed = seed;
        c.run.t_end = t_end;
        c.run.cfl = cfl;
        c.validate().unwrap();
        prop_assert_eq!(Config::from_json(&c.to_json().unwrap()).unwrap(), c);
    }
}
