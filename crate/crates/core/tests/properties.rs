use proptest::prelude::*;
use spinerod_core::spine::DEFAULT_MODULUS_TABLE;
use spinerod_core::*;

fn vec3() -> impl Strategy<Value = Vec3> {
    (-10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

/// Rotation from an axis-angle pair via Rodrigues' formula.
fn rotation() -> impl Strategy<Value = Mat3> {
    (vec3(), -3.0..3.0f64).prop_filter_map("zero axis", |(axis, angle)| {
        let k = axis.normalized()?;
        let kx = hat(k);
        let kx2 = kx.mul_mat(&kx);
        Some(Mat3::IDENTITY + kx.scale(angle.sin()) + kx2.scale(1.0 - angle.cos()))
    })
}

fn section() -> SectionProperties {
    let mat = MaterialParams::default();
    section_properties(&mat, mat.e_silicone).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

proptest! {
    #[test]
    fn hat_matches_cross_product(v in vec3(), w in vec3()) {
        let got = hat(v).mul_vec(&w);
        let expected = Vec3::new(v.y() * w.z() - v.z() * w.y(), v.z() * w.x() - v.x() * w.z(), v.x() * w.y() - v.y() * w.x());
        prop_assert!((got - expected).norm() <= 1e-12);
    }

    #[test]
    fn hat_is_linear(a in -5.0..5.0f64, b in -5.0..5.0f64, u in vec3(), v in vec3()) {
        let lhs = hat(u.scale(a) + v.scale(b));
        let rhs = hat(u).scale(a) + hat(v).scale(b);
        prop_assert!((lhs - rhs).frobenius() < 1e-12);
    }

    #[test]
    fn constitutive_law_inverts(n in vec3(), m in vec3(), r in rotation()) {
        let sec = section();
        let state = RodState { s: 0.0, p: Vec3::ZERO, r, n: n.scale(100.0), m };
        let (v, u) = constitutive_strains(&state, &sec).unwrap();
        let n_back = r.mul_vec(&sec.kse_matrix().mul_vec(&(v - sec.v_star)));
        let m_back = r.mul_vec(&sec.kbt_matrix().mul_vec(&(u - sec.u_star)));
        prop_assert!((n_back - state.n).norm() <= 1e-10 * state.n.norm().max(1e-12));
        prop_assert!((m_back - state.m).norm() <= 1e-10 * state.m.norm().max(1e-12));
    }

    #[test]
    fn axial_strain_is_affine(nz in -500.0..500.0f64) {
        let sec = section();
        let one = constitutive_strains(&RodState::base(Vec3::new(0.0, 0.0, nz), Vec3::ZERO), &sec).unwrap().0;
        let two = constitutive_strains(&RodState::base(Vec3::new(0.0, 0.0, 2.0 * nz), Vec3::ZERO), &sec).unwrap().0;
        prop_assert!(((two - sec.v_star) - (one - sec.v_star).scale(2.0)).norm() < 1e-15);
    }

    #[test]
    fn moment_balance_identity(n in vec3(), m in vec3(), r in rotation(), f in vec3()) {
        let sec = section();
        let state = RodState { s: 0.1, p: Vec3::ZERO, r, n, m };
        let load = LoadModel { f, ..LoadModel::unloaded() };
        let d = ode_rhs(&state, &sec, &load).unwrap();
        prop_assert!((d.dm + d.dp.cross(&n) + load.l).norm() <= 1e-12 * (1.0 + d.dp.norm() * n.norm()));
        prop_assert_eq!(d.dn, -f);
    }

    #[test]
    fn polar_moment_is_sum(r_o in 0.01..0.2f64, frac in 0.0..0.95f64, e in 1e3..1e9f64) {
        let mat = MaterialParams { r_outer: r_o, r_inner: frac * r_o, ..MaterialParams::default() };
        let sec = section_properties(&mat, e).unwrap();
        prop_assert_eq!(sec.izz, sec.ixx + sec.iyy);
        prop_assert_eq!(sec.kbt.0, [e * sec.ixx, e * sec.iyy, e * sec.izz]);
    }

    #[test]
    fn pneumatic_load_is_linear(ps in prop::array::uniform9(0.0..40e3f64), alpha in 0.0..10.0f64, r in rotation()) {
        let layout = default_layout(&MaterialParams::default());
        let a = 1.2e-4;
        let cmd = PressureCommand::new(ps).unwrap();
        let (n1, m1) = pneumatic_load(&cmd, &layout, a, &r).unwrap();
        let (n2, m2) = pneumatic_load(&cmd.scaled(alpha).unwrap(), &layout, a, &r).unwrap();
        prop_assert!((n2 - n1.scale(alpha)).norm() <= 1e-12 * (1.0 + n2.norm()));
        prop_assert!((m2 - m1.scale(alpha)).norm() <= 1e-12 * (1.0 + m2.norm()));
    }

    #[test]
    fn axial_pneumatic_force_is_total_pressure(ps in prop::array::uniform9(0.0..400e3f64)) {
        let layout = default_layout(&MaterialParams::default());
        let a = 1.2e-4;
        let cmd = PressureCommand::new(ps).unwrap();
        let (n, _) = pneumatic_load(&cmd, &layout, a, &Mat3::IDENTITY).unwrap();
        prop_assert!(rel(n.norm().max(1e-300), (cmd.total() * a).max(1e-300)) < 1e-12);
    }

    #[test]
    fn rotation_invariant_pattern_has_no_bending(p in prop::array::uniform3(0.0..400e3f64)) {
        // the same pressure on the k-th chamber of every group
        let layout = default_layout(&MaterialParams::default());
        let mut ps = [0.0; 9];
        for i in 0..9 {
            ps[i] = p[i % 3];
        }
        let a = 1.2e-4;
        let (_, m) = pneumatic_load(&PressureCommand::new(ps).unwrap(), &layout, a, &Mat3::IDENTITY).unwrap();
        let scale = p.iter().sum::<f64>() * a * 0.04;
        prop_assert!(m.x().abs() <= 1e-12 * scale.max(1e-300) && m.y().abs() <= 1e-12 * scale.max(1e-300));
    }

    #[test]
    fn combined_modulus_is_convex_and_symmetric(
        e_c in 1e3..1e8f64, e_s in 1e3..1e8f64, v_c in 0.0..1.0f64, v_s in 1e-6..1.0f64,
    ) {
        let e = combined_modulus(e_c, e_s, v_c, v_s).unwrap();
        prop_assert!(e >= e_c.min(e_s) * (1.0 - 1e-15) && e <= e_c.max(e_s) * (1.0 + 1e-15));
        let swapped = combined_modulus(e_s, e_c, v_s, v_c).unwrap();
        prop_assert!(rel(e, swapped) < 1e-14);
    }

    #[test]
    fn beam_round_trip(f in 0.01..100.0f64, l in 0.01..2.0f64, r in 0.001..0.1f64, e in 1e3..1e10f64) {
        let i = std::f64::consts::PI * r.powi(4) / 4.0;
        let y = beam_deflection(f, l, l, e, i).unwrap();
        let back = modulus_from_tip_deflection(f, l, r, y).unwrap();
        prop_assert!(rel(back, e) < 1e-12);
    }

    #[test]
    fn spine_modulus_is_monotone(a in 0.05..0.30f64, b in 0.05..0.30f64) {
        let spine = SpineConfig::default();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(spine_modulus(&spine, lo, 0.507147e6).unwrap() <= spine_modulus(&spine, hi, 0.507147e6).unwrap());
    }

    #[test]
    fn a_effect_is_monotone(a in 0.0..0.30f64, b in 0.0..0.30f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(a_effect(lo, 1.0).unwrap() <= a_effect(hi, 1.0).unwrap());
    }

    #[test]
    fn stiffness_profile_is_piecewise_constant(len in 0.0..0.30f64, s1 in 0.0..0.4f64, s2 in 0.0..0.4f64) {
        let mat = MaterialParams::default();
        let profile = StiffnessProfile::new(&SpineConfig::with_length(len), &mat).unwrap();
        if (s1 < len) == (s2 < len) {
            prop_assert_eq!(profile.stiffness_at(s1).unwrap(), profile.stiffness_at(s2).unwrap());
        }
    }
}

#[test]
fn hat_cross_hundred_random_pairs() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for _ in 0..100 {
        let v = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let w = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        assert!((hat(v).mul_vec(&w) - v.cross(&w)).norm() < 1e-15);
    }
}

#[test]
fn modulus_table_published_values() {
    let expected = [
        (0.05, 0.318e6),
        (0.10, 1.323e6),
        (0.15, 2.032e6),
        (0.20, 3.069e6),
        (0.25, 3.763e6),
        (0.30, 4.389e6),
    ];
    assert_eq!(DEFAULT_MODULUS_TABLE, expected);
}
