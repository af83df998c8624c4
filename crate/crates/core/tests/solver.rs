use spinerod_core::*;

fn bend(pressure: f64) -> Scenario {
    Scenario::default().with_group_pressure(pressure)
}

fn lateral(tip: Vec3) -> f64 {
    tip.x().hypot(tip.y())
}

#[test]
fn euler_step_halves_error() {
    let s = bend(150e3);
    let tip = |n: usize| {
        let mut c = s.clone();
        c.integration.n = n;
        let r = solve(&c).unwrap();
        assert!(r.converged);
        r.tip_position
    };
    let reference = tip(3200);
    let e100 = (tip(100) - reference).norm();
    let e200 = (tip(200) - reference).norm();
    let ratio = e100 / e200;
    assert!((1.7..=2.3).contains(&ratio), "ratio {ratio}");
}

#[test]
fn converged_residual_reevaluates_below_tol() {
    let s = bend(200e3).with_spine_length(0.15);
    let res = solve(&s).unwrap();
    assert!(res.converged);
    let r = residual(&res.guess, &s).unwrap();
    assert_eq!(r.norm(), res.residual_norm);
    assert!(r.norm() < 1e-8);
}

#[test]
fn residual_varies_smoothly_near_solution() {
    let s = bend(100e3);
    let res = solve(&s).unwrap();
    for k in 0..6 {
        let probe = |d: f64| {
            let mut x = res.guess.to_array();
            x[k] += d;
            residual(&ShootGuess::from_array(&x), &s).unwrap().norm()
        };
        let (r1, r2) = (probe(1e-3), probe(2e-3));
        assert!(r1 > 1e-8, "component {k}");
        // linear growth in the perturbation
        assert!((r2 / r1 - 2.0).abs() < 0.05, "component {k}: {}", r2 / r1);
    }
}

#[test]
fn internal_force_gradient_matches_distributed_load() {
    let s = bend(150e3).with_spine_length(0.1);
    let res = solve(&s).unwrap();
    let f = s.load_model().unwrap();
    for w in res.centerline.windows(2) {
        let ds = w[1].s - w[0].s;
        let dn = (w[1].n - w[0].n).scale(1.0 / ds);
        assert!((dn + f.force_at(w[0].s)).norm() < 1e-6 * (1.0 + f.f.norm()));
    }
}

#[test]
fn single_group_bends_in_its_plane() {
    for group in 1..=3 {
        let mut s = bend(200e3).with_spine_length(0.2);
        s.pressure = PressureSpec::Group {
            group,
            pressure: 200e3,
        };
        let res = solve(&s).unwrap();
        assert!(res.converged);
        let c = s.layout.group_centroid_dir(group - 1).unwrap();
        let normal = c.cross(&Vec3::E3);
        for st in &res.centerline {
            assert!(st.p.dot(&normal).abs() < 1e-6);
        }
        // pressurized side lengthens, so the tip moves away from the group
        assert!(res.tip_position.dot(&c) < 0.0);
    }
}

#[test]
fn uniform_pressure_extends_along_axis() {
    let mut s = Scenario::default().with_uniform_pressure(120e3);
    s.gravity.enabled = false;
    let res = solve(&s).unwrap();
    assert!(res.converged);
    assert!(res.tip_position.x().abs() < 1e-6 && res.tip_position.y().abs() < 1e-6);
    assert!(res.tip_position.z() > s.material.length);
}

#[test]
fn small_pressure_response_is_linear() {
    let d1 = lateral(solve(&bend(1e3)).unwrap().tip_position);
    let d2 = lateral(solve(&bend(2e3)).unwrap().tip_position);
    assert!((d2 / d1 - 2.0).abs() < 0.1, "ratio {}", d2 / d1);
}

#[test]
fn identical_inputs_are_bit_identical() {
    let s = bend(250e3).with_spine_length(0.25);
    let a = solve(&s).unwrap();
    let b = solve(&s).unwrap();
    assert_eq!(a, b);
}

#[test]
fn warm_start_saves_iterations() {
    let s50 = bend(50e3);
    let s100 = bend(100e3);
    let first = solve(&s50).unwrap();
    let cold = shoot(&s100, &ShootGuess::zero(), 1e-8, 50).unwrap();
    let warm = shoot(&s100, &first.guess, 1e-8, 50).unwrap();
    assert!(warm.converged && cold.converged);
    assert!(
        warm.iterations < cold.iterations,
        "warm {} cold {}",
        warm.iterations,
        cold.iterations
    );
    assert!((warm.tip_position - cold.tip_position).norm() < 1e-9);
}

#[test]
fn frames_stay_orthonormal() {
    let res = solve(&bend(250e3)).unwrap();
    let worst = res
        .centerline
        .iter()
        .map(|st| st.r.orthogonality_error())
        .fold(0.0, f64::max);
    assert!(worst < 1e-6, "{worst}");
    assert!(res
        .centerline
        .iter()
        .all(|st| (st.r.det() - 1.0).abs() < 1e-6));
}

#[test]
fn sparse_reorthonormalization_restores_frames_on_schedule() {
    let mut s = bend(250e3);
    s.integration.reorthonormalize_every = 3;
    let res = solve(&s).unwrap();
    assert!(res.converged);
    let last = res.centerline.len() - 1;
    for (k, st) in res.centerline.iter().enumerate() {
        let err = st.r.orthogonality_error();
        if k % 3 == 0 || k == last {
            assert!(err < 1e-12, "station {k}: {err}");
        } else {
            assert!(err < 1e-2, "station {k}: {err}");
        }
    }
}

#[test]
fn centerline_starts_clamped_and_has_n_states() {
    let res = solve(&bend(150e3).with_spine_length(0.05)).unwrap();
    assert_eq!(res.centerline.len(), 100);
    assert_eq!(res.centerline[0].p, Vec3::ZERO);
    assert_eq!(res.centerline[0].r, Mat3::IDENTITY);
    assert_eq!(res.centerline.last().unwrap().s, 0.4);
    assert!(res.tip_position.norm() <= res.arc_length());
}

#[test]
fn full_spine_reduces_bending_against_no_spine() {
    let none = solve(&bend(250e3)).unwrap().tip_position;
    let full = solve(&bend(250e3).with_spine_length(0.30))
        .unwrap()
        .tip_position;
    assert!(full.x().abs() < none.x().abs());
}

#[test]
fn cold_start_stays_on_bending_branch() {
    for spine in [0.0, 0.1, 0.2, 0.25, 0.3] {
        let tip = solve(&bend(250e3).with_spine_length(spine))
            .unwrap()
            .tip_position;
        assert!(
            tip.x() < 0.0 && tip.y() < 0.0 && tip.z() > 0.3,
            "spine {spine}: {tip:?}"
        );
    }
}

#[test]
fn sweep_is_row_major_and_matches_single_solves() {
    let cells = pressure_sweep(&Scenario::default(), &[50e3, 100e3], &[0.0, 0.2]).unwrap();
    let order: Vec<(f64, f64)> = cells.iter().map(|c| (c.spine_length, c.pressure)).collect();
    assert_eq!(
        order,
        [(0.0, 50e3), (0.0, 100e3), (0.2, 50e3), (0.2, 100e3)]
    );
    let single = solve(&bend(100e3).with_spine_length(0.2)).unwrap();
    let cell = cells[3].outcome.as_ref().unwrap();
    assert!((cell.tip_position - single.tip_position).norm() < 1e-9);
}

#[test]
fn unconverged_cells_do_not_abort_sweep() {
    let mut base = Scenario::default();
    base.solver.max_iter = 1;
    let cells = pressure_sweep(&base, &[100e3, 250e3], &[0.0]).unwrap();
    assert_eq!(cells.len(), 2);
    assert!(cells.iter().any(|c| !c.converged()));
}

#[test]
fn spine_weight_adds_sag_only_when_enabled() {
    let mut s = bend(150e3).with_spine_length(0.2);
    let plain = solve(&s).unwrap().tip_position;
    s.gravity.include_spine_weight = true;
    let heavy = solve(&s).unwrap().tip_position;
    assert!(heavy != plain);
}
